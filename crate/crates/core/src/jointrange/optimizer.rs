//! Distance from a target point to the joint (or Asplund–Ptak) range by
//! projected gradient descent with random restarts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tuple::{ap_point, joint_point, JointPoint, OperatorTuple};
use crate::error::{Error, Result};
use crate::linalg::{inner, norm, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RangeMode {
    /// `x = y` on the unit sphere.
    Joint,
    /// Independent `x`, `y` in the closed unit ball.
    Ap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepRule {
    /// Projected gradient with Armijo backtracking.
    Armijo,
    /// Damped Gauss–Newton (Levenberg–Marquardt) on the residual vector,
    /// followed by the same projection. Converges where residuals vanish to
    /// second order, which plain gradient steps crawl through.
    GaussNewton,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub step: StepRule,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    /// Stop launching restarts once the best distance falls below this.
    /// Restarts run in fixed batches so the result stays deterministic.
    pub stop_below: Option<f64>,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            restarts: 200,
            seed: 0,
            max_iters: 500,
            step: StepRule::GaussNewton,
            armijo: 1e-4,
            stop_below: None,
        }
    }
}

const BATCH: usize = 32;

#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub target: JointPoint,
    pub mode: RangeMode,
    pub best_distance: f64,
    /// The range point attained by the witness.
    pub best_point: JointPoint,
    pub best_x: Vec<C64>,
    /// Second vector in AP mode.
    pub best_y: Option<Vec<C64>>,
    pub best_restart: usize,
    pub restarts_used: usize,
    pub seeds: Vec<u64>,
    /// Final distance of each restart, in restart order.
    pub restart_distances: Vec<f64>,
}

struct RestartResult {
    distance: f64,
    x: Vec<C64>,
    y: Option<Vec<C64>>,
}

pub fn min_distance(
    ts: &OperatorTuple,
    target: &JointPoint,
    mode: RangeMode,
    cfg: &ProbeConfig,
) -> Result<ProbeReport> {
    if cfg.restarts == 0 {
        return Err(Error::InvalidInput("restarts must be at least 1".into()));
    }
    if target.0.len() != ts.arity() {
        return Err(Error::DimensionMismatch {
            expected: ts.arity(),
            actual: target.0.len(),
        });
    }
    let mut results: Vec<RestartResult> = Vec::with_capacity(cfg.restarts);
    let mut start = 0;
    while start < cfg.restarts {
        let end = match cfg.stop_below {
            Some(_) => (start + BATCH).min(cfg.restarts),
            None => cfg.restarts,
        };
        let batch: Vec<RestartResult> = (start..end)
            .into_par_iter()
            .map(|i| run_restart(ts, target, mode, cfg, cfg.seed.wrapping_add(i as u64)))
            .collect();
        results.extend(batch);
        start = end;
        if let Some(stop) = cfg.stop_below {
            if results.iter().any(|r| r.distance < stop) {
                break;
            }
        }
    }

    let (best_restart, best) = results
        .iter()
        .enumerate()
        .fold(None::<(usize, &RestartResult)>, |acc, (i, r)| match acc {
            Some((_, b)) if b.distance <= r.distance => acc,
            _ => Some((i, r)),
        })
        .expect("at least one restart");
    let best_point = match &best.y {
        Some(y) => ap_point(ts, &best.x, y)?,
        None => joint_point(ts, &best.x)?,
    };
    Ok(ProbeReport {
        target: target.clone(),
        mode,
        best_distance: best_point.distance(target),
        best_point,
        best_x: best.x.clone(),
        best_y: best.y.clone(),
        best_restart,
        restarts_used: results.len(),
        seeds: (0..results.len())
            .map(|i| cfg.seed.wrapping_add(i as u64))
            .collect(),
        restart_distances: results.iter().map(|r| r.distance).collect(),
    })
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n)
        .map(|_| {
            C64::new(
                StandardNormal.sample(&mut *rng),
                StandardNormal.sample(&mut *rng),
            )
        })
        .collect()
}

fn normalized(x: Vec<C64>) -> Vec<C64> {
    let n = norm(&x);
    x.into_iter().map(|z| z / n).collect()
}

fn into_ball(x: Vec<C64>) -> Vec<C64> {
    let n = norm(&x);
    if n > 1.0 {
        x.into_iter().map(|z| z / n).collect()
    } else {
        x
    }
}

/// Residuals `μ_k - target_k` and the objective `Σ |r_k|²`.
fn residuals(ts: &OperatorTuple, target: &JointPoint, x: &[C64], y: &[C64]) -> (Vec<C64>, f64) {
    let r: Vec<C64> = ts
        .members()
        .iter()
        .zip(&target.0)
        .map(|(t, c)| inner(&t.mul_vec(x), y) - c)
        .collect();
    let f = r.iter().map(|z| z.norm_sqr()).sum();
    (r, f)
}

fn run_restart(
    ts: &OperatorTuple,
    target: &JointPoint,
    mode: RangeMode,
    cfg: &ProbeConfig,
    seed: u64,
) -> RestartResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ts.dim();
    match mode {
        RangeMode::Joint => {
            let x = normalized(random_vector(&mut rng, n));
            let x = match cfg.step {
                StepRule::Armijo => descend_sphere(ts, target, x, cfg),
                StepRule::GaussNewton => levenberg_marquardt(
                    x,
                    cfg.max_iters,
                    true,
                    |z| joint_system(ts, target, z),
                    normalized,
                ),
            };
            let (_, f) = residuals(ts, target, &x, &x);
            RestartResult {
                distance: f.sqrt(),
                x,
                y: None,
            }
        }
        RangeMode::Ap => {
            let mut x = normalized(random_vector(&mut rng, n));
            let mut y = normalized(random_vector(&mut rng, n));
            let rx: f64 = rand::Rng::random(&mut rng);
            let ry: f64 = rand::Rng::random(&mut rng);
            x.iter_mut().for_each(|z| *z *= rx.sqrt());
            y.iter_mut().for_each(|z| *z *= ry.sqrt());
            let (x, y) = match cfg.step {
                StepRule::Armijo => descend_balls(ts, target, x, y, cfg),
                StepRule::GaussNewton => {
                    let n = x.len();
                    let mut z = x;
                    z.extend(y);
                    let z = levenberg_marquardt(
                        z,
                        cfg.max_iters,
                        false,
                        |z| ap_system(ts, target, &z[..n], &z[n..]),
                        |mut z| {
                            let y = into_ball(z.split_off(n));
                            let mut x = into_ball(z);
                            x.extend(y);
                            x
                        },
                    );
                    let (x, y) = z.split_at(n);
                    (x.to_vec(), y.to_vec())
                }
            };
            let (_, f) = residuals(ts, target, &x, &y);
            RestartResult {
                distance: f.sqrt(),
                x,
                y: Some(y),
            }
        }
    }
}

/// Riemannian gradient descent on the unit sphere with Armijo backtracking.
fn descend_sphere(ts: &OperatorTuple, target: &JointPoint, mut x: Vec<C64>, cfg: &ProbeConfig) -> Vec<C64> {
    let (mut r, mut f) = residuals(ts, target, &x, &x);
    let mut step: f64 = 1.0;
    for _ in 0..cfg.max_iters {
        if f < 1e-32 {
            break;
        }
        // Euclidean gradient of Σ|r_k|², then its tangential part
        let mut g = vec![C64::new(0.0, 0.0); x.len()];
        for (t, rk) in ts.members().iter().zip(&r) {
            let th_x = t.adjoint_mul_vec(&x);
            let t_x = t.mul_vec(&x);
            for ((gi, a), b) in g.iter_mut().zip(&th_x).zip(&t_x) {
                *gi += (rk * a + rk.conj() * b) * 2.0;
            }
        }
        let radial = inner(&g, &x).re;
        for (gi, xi) in g.iter_mut().zip(&x) {
            *gi -= xi * radial;
        }
        let gn2: f64 = g.iter().map(|z| z.norm_sqr()).sum();
        if gn2 < 1e-30 {
            break;
        }
        let mut accepted = false;
        step = (step * 2.0).min(1e6);
        while step > 1e-20 {
            let cand = normalized(x.iter().zip(&g).map(|(a, b)| a - b * step).collect());
            let (rc, fc) = residuals(ts, target, &cand, &cand);
            if fc <= f - cfg.armijo * step * gn2 {
                x = cand;
                r = rc;
                f = fc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    x
}

/// Projected gradient descent on the product of two unit balls.
fn descend_balls(
    ts: &OperatorTuple,
    target: &JointPoint,
    mut x: Vec<C64>,
    mut y: Vec<C64>,
    cfg: &ProbeConfig,
) -> (Vec<C64>, Vec<C64>) {
    let (mut r, mut f) = residuals(ts, target, &x, &y);
    let mut step: f64 = 1.0;
    for _ in 0..cfg.max_iters {
        if f < 1e-32 {
            break;
        }
        let n = x.len();
        let mut gx = vec![C64::new(0.0, 0.0); n];
        let mut gy = vec![C64::new(0.0, 0.0); n];
        for (t, rk) in ts.members().iter().zip(&r) {
            let th_y = t.adjoint_mul_vec(&y);
            let t_x = t.mul_vec(&x);
            for i in 0..n {
                gx[i] += rk * th_y[i] * 2.0;
                gy[i] += rk.conj() * t_x[i] * 2.0;
            }
        }
        let mut accepted = false;
        step = (step * 2.0).min(1e6);
        while step > 1e-20 {
            let cx = into_ball(x.iter().zip(&gx).map(|(a, b)| a - b * step).collect());
            let cy = into_ball(y.iter().zip(&gy).map(|(a, b)| a - b * step).collect());
            let moved: f64 = cx
                .iter()
                .zip(&x)
                .chain(cy.iter().zip(&y))
                .map(|(a, b)| (a - b).norm_sqr())
                .sum();
            if moved < 1e-34 {
                break;
            }
            let (rc, fc) = residuals(ts, target, &cx, &cy);
            if fc <= f - cfg.armijo * moved / step {
                x = cx;
                y = cy;
                r = rc;
                f = fc;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (x, y)
}

/// Real residual vector `[Re r_k, Im r_k]` and its Jacobian (row-major,
/// one column per real coordinate `Re z_j`, `Im z_j`).
struct System {
    residual: Vec<f64>,
    jacobian: Vec<f64>,
}

fn push_columns(jac: &mut [f64], row: usize, cols: usize, j: usize, d_re: C64, d_im: C64) {
    jac[row * cols + 2 * j] = d_re.re;
    jac[row * cols + 2 * j + 1] = d_im.re;
    jac[(row + 1) * cols + 2 * j] = d_re.im;
    jac[(row + 1) * cols + 2 * j + 1] = d_im.im;
}

fn joint_system(ts: &OperatorTuple, target: &JointPoint, x: &[C64]) -> System {
    let n = x.len();
    let m = ts.arity();
    let cols = 2 * n;
    let mut residual = vec![0.0; 2 * m];
    let mut jacobian = vec![0.0; 2 * m * cols];
    let i = C64::new(0.0, 1.0);
    for (k, (t, c)) in ts.members().iter().zip(&target.0).enumerate() {
        let tx = t.mul_vec(x);
        let thx = t.adjoint_mul_vec(x);
        let r = inner(&tx, x) - c;
        residual[2 * k] = r.re;
        residual[2 * k + 1] = r.im;
        for j in 0..n {
            // d r = d^* T x + x^* T d along d = e_j and d = i e_j
            let d_re = tx[j] + thx[j].conj();
            let d_im = -i * tx[j] + i * thx[j].conj();
            push_columns(&mut jacobian, 2 * k, cols, j, d_re, d_im);
        }
    }
    System { residual, jacobian }
}

fn ap_system(ts: &OperatorTuple, target: &JointPoint, x: &[C64], y: &[C64]) -> System {
    let n = x.len();
    let m = ts.arity();
    let cols = 4 * n;
    let mut residual = vec![0.0; 2 * m];
    let mut jacobian = vec![0.0; 2 * m * cols];
    let i = C64::new(0.0, 1.0);
    for (k, (t, c)) in ts.members().iter().zip(&target.0).enumerate() {
        let tx = t.mul_vec(x);
        let thy = t.adjoint_mul_vec(y);
        let r = inner(&tx, y) - c;
        residual[2 * k] = r.re;
        residual[2 * k + 1] = r.im;
        for j in 0..n {
            // r = y^* T x: along x the derivative is conj((T^* y)_j) d,
            // along y it is conj(d) (T x)_j
            let gx = thy[j].conj();
            push_columns(&mut jacobian, 2 * k, cols, j, gx, i * gx);
            push_columns(&mut jacobian, 2 * k, cols, n + j, tx[j], -i * tx[j]);
        }
    }
    System { residual, jacobian }
}

/// Levenberg–Marquardt on `Σ r²` with a projection after every step. With
/// `tangent` set, steps are restricted to the tangent space of the sphere
/// through the current point.
fn levenberg_marquardt(
    mut z: Vec<C64>,
    max_iters: usize,
    tangent: bool,
    system: impl Fn(&[C64]) -> System,
    project: impl Fn(Vec<C64>) -> Vec<C64>,
) -> Vec<C64> {
    let cols = 2 * z.len();
    let mut sys = system(&z);
    let mut f: f64 = sys.residual.iter().map(|r| r * r).sum();
    let mut mu = 1e-3;
    for _ in 0..max_iters {
        if f < 1e-32 {
            break;
        }
        let rows = sys.residual.len();
        let mut jac = sys.jacobian.clone();
        if tangent {
            let xr: Vec<f64> = z.iter().flat_map(|c| [c.re, c.im]).collect();
            for row in 0..rows {
                let line = &mut jac[row * cols..(row + 1) * cols];
                let along: f64 = line.iter().zip(&xr).map(|(a, b)| a * b).sum();
                for (a, b) in line.iter_mut().zip(&xr) {
                    *a -= along * b;
                }
            }
        }
        // normal equations
        let mut a = vec![0.0; cols * cols];
        let mut g = vec![0.0; cols];
        for row in 0..rows {
            let line = &jac[row * cols..(row + 1) * cols];
            let r = sys.residual[row];
            for p in 0..cols {
                if line[p] == 0.0 {
                    continue;
                }
                g[p] += line[p] * r;
                for q in 0..cols {
                    a[p * cols + q] += line[p] * line[q];
                }
            }
        }
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm < 1e-300 {
            break;
        }
        let mut accepted = false;
        while mu < 1e20 {
            let mut damped = a.clone();
            for p in 0..cols {
                damped[p * cols + p] += mu;
            }
            let mut delta: Vec<f64> = g.iter().map(|v| -v).collect();
            if !solve_spd(&mut damped, cols, &mut delta) {
                mu *= 4.0;
                continue;
            }
            let cand: Vec<C64> = z
                .iter()
                .enumerate()
                .map(|(j, c)| c + C64::new(delta[2 * j], delta[2 * j + 1]))
                .collect();
            let cand = project(cand);
            let cs = system(&cand);
            let fc: f64 = cs.residual.iter().map(|r| r * r).sum();
            if fc < f {
                z = cand;
                sys = cs;
                f = fc;
                mu = (mu / 3.0).max(1e-18);
                accepted = true;
                break;
            }
            mu *= 4.0;
        }
        if !accepted {
            break;
        }
    }
    z
}

/// Solves `A x = b` in place for symmetric positive definite `A` by
/// Cholesky factorization; `false` if `A` is not numerically SPD.
fn solve_spd(a: &mut [f64], n: usize, b: &mut [f64]) -> bool {
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if !(d > 0.0) {
            return false;
        }
        let d = d.sqrt();
        a[j * n + j] = d;
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / d;
        }
    }
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= a[i * n + k] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s -= a[k * n + i] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    true
}
