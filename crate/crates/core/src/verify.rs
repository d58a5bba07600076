//! The named checks behind `numrange verify`.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::diagonals::{
    affine_normalize, constant_diag_basis, convex_comb_diag_traced, fan_check, fan_construct_traced,
    parker_basis_traced, Basis, DiagonalReport,
};
use crate::error::Result;
use crate::jointrange::catalog::{commuting_triple, traceless_pair, traceless_pair_embedded};
use crate::jointrange::{
    ap_point, convexity_probe, joint_point, min_distance, JointPoint, OperatorTuple, ProbeConfig, RangeMode,
};
use crate::kadison::{self, Convention, Decision, Extended};
use crate::linalg::{herm_eig, ComplexMatrix, OrthonormalFrame, C64};
use crate::numrange::{essential_range, Membership, OperatorModel, PolygonKind, TailStream};

pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Jointrange,
    Numrange,
    Diagonals,
    Kadison,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    pub name: String,
    pub group: Group,
    pub passed: bool,
    pub measured: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub runtime_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationReport {
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

/// Measured values and tolerances of one check.
#[derive(Debug, Default)]
pub struct Outcome {
    pub passed: bool,
    pub measured: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
}

impl Outcome {
    fn measure(&mut self, key: &str, value: f64) -> f64 {
        self.measured.insert(key.to_string(), finite(value));
        value
    }

    fn tolerance(&mut self, key: &str, value: f64) -> f64 {
        self.tolerances.insert(key.to_string(), value);
        value
    }
}

fn finite(x: f64) -> f64 {
    if x.is_finite() {
        x
    } else if x > 0.0 {
        f64::MAX
    } else {
        f64::MIN
    }
}

type CheckFn = fn(u64) -> Result<Outcome>;

/// `(name, group, check)` in report order.
pub fn checks() -> Vec<(&'static str, Group, CheckFn)> {
    vec![
        ("commuting-triple", Group::Jointrange, commuting_triple_check),
        ("asplund-ptak", Group::Jointrange, asplund_ptak_check),
        ("traceless-pair", Group::Jointrange, traceless_pair_check),
        ("parker-suite", Group::Diagonals, parker_suite_check),
        ("fan-construction", Group::Diagonals, fan_construction_check),
        ("convex-combination", Group::Diagonals, convex_combination_check),
        ("kadison-nonconvexity", Group::Kadison, kadison_check),
        ("inclusion-chain", Group::Numrange, inclusion_chain_check),
        ("fan-fails-for-pairs", Group::Jointrange, fan_fails_for_pairs_check),
        ("hausdorff-toeplitz", Group::Numrange, hausdorff_toeplitz_check),
    ]
}

/// Runs every check in `only` (all when empty).
pub fn verify_paper(seed: u64, only: &[Group]) -> VerificationReport {
    let mut out = Vec::new();
    for (name, group, check) in checks() {
        if !only.is_empty() && !only.contains(&group) {
            continue;
        }
        let start = Instant::now();
        let result = check(seed);
        let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
        out.push(match result {
            Ok(o) => CheckReport {
                name: name.to_string(),
                group,
                passed: o.passed,
                measured: o.measured,
                tolerances: o.tolerances,
                runtime_ms,
                error: None,
            },
            Err(e) => CheckReport {
                name: name.to_string(),
                group,
                passed: false,
                measured: BTreeMap::new(),
                tolerances: BTreeMap::new(),
                runtime_ms,
                error: Some(e.to_string()),
            },
        });
    }
    VerificationReport {
        seed,
        passed: out.iter().all(|c| c.passed),
        checks: out,
    }
}

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn s2() -> f64 {
    std::f64::consts::FRAC_1_SQRT_2
}

fn cfg(seed: u64, restarts: usize) -> ProbeConfig {
    ProbeConfig {
        restarts,
        seed,
        ..ProbeConfig::default()
    }
}

pub fn commuting_triple_check(seed: u64) -> Result<Outcome> {
    let ts = commuting_triple();
    let mut o = Outcome::default();
    let exact = o.tolerance("attained", 1e-12);
    let x_a = [r(0.0), r(s2()), r(s2()), r(0.0)];
    let x_b = [r(s2()), r(0.0), r(0.0), r(s2())];
    let da = o.measure(
        "attained_001",
        joint_point(&ts, &x_a)?.distance(&JointPoint::real(&[0.0, 0.0, 0.5])),
    );
    let db = o.measure(
        "attained_010",
        joint_point(&ts, &x_b)?.distance(&JointPoint::real(&[0.0, 0.5, 0.0])),
    );
    let comm = o.measure(
        "max_commutator",
        ts.commutator_norms().iter().map(|&(_, n)| n).fold(0.0, f64::max),
    );
    let floor = o.tolerance("midpoint_floor", 0.05);
    let mid = min_distance(&ts, &JointPoint::real(&[0.0, 0.25, 0.25]), RangeMode::Joint, &cfg(seed, 200))?;
    let md = o.measure("midpoint_distance", mid.best_distance);
    o.passed = da <= exact && db <= exact && comm == 0.0 && md >= floor;
    Ok(o)
}

pub fn asplund_ptak_check(seed: u64) -> Result<Outcome> {
    let ts = commuting_triple();
    let mut o = Outcome::default();
    let tol = o.tolerance("attained", 1e-8);
    let e = |i: usize, s: f64| {
        let mut v = vec![r(0.0); 4];
        v[i] = r(s);
        v
    };
    let a = JointPoint::real(&[0.0, 0.0, 0.5]);
    let b = JointPoint::real(&[0.0, 0.5, 0.0]);
    let wa = o.measure("witness_001", ap_point(&ts, &e(2, 1.0), &e(1, 0.5))?.distance(&a));
    let wb = o.measure("witness_010", ap_point(&ts, &e(3, 1.0), &e(0, 0.5))?.distance(&b));
    let mut near = cfg(seed, 200);
    near.stop_below = Some(1e-10);
    let pa = o.measure("probe_001", min_distance(&ts, &a, RangeMode::Ap, &near)?.best_distance);
    let pb = o.measure("probe_010", min_distance(&ts, &b, RangeMode::Ap, &near)?.best_distance);
    let floor = o.tolerance("midpoint_floor", 0.05);
    let mid = min_distance(&ts, &a.lerp(&b, 0.5), RangeMode::Ap, &cfg(seed, 200))?;
    let md = o.measure("midpoint_distance", mid.best_distance);
    o.passed = wa <= tol && wb <= tol && pa <= tol && pb <= tol && md >= floor;
    Ok(o)
}

pub fn traceless_pair_check(seed: u64) -> Result<Outcome> {
    let mut o = Outcome::default();
    let tol = o.tolerance("distance", 1e-6);
    let d = min_distance(&traceless_pair(), &JointPoint::real(&[0.0, 0.0]), RangeMode::Joint, &cfg(seed, 200))?;
    let got = o.measure("min_distance", d.best_distance);
    o.passed = (got - 0.5).abs() <= tol;
    Ok(o)
}

pub fn parker_suite_check(seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut o = Outcome::default();
    let tol = o.tolerance("diagonal", 1e-8);
    let ortho_tol = o.tolerance("orthonormality", 1e-10);
    let drift_tol = o.tolerance("trace_drift", 1e-9);
    let (mut dev, mut ortho, mut drift) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let n = rng.random_range(2..=64);
        let t = ComplexMatrix::random_gaussian(n, &mut rng);
        let (report, d) = parker_basis_traced(&t, tol)?;
        dev = dev.max(report.max_deviation);
        if let Basis::Dense(f) = &report.basis {
            ortho = ortho.max(f.orthonormality_defect());
        }
        drift = drift.max(d.iter().copied().fold(0.0, f64::max));
    }
    o.measure("max_deviation", dev);
    o.measure("max_orthonormality_defect", ortho);
    o.measure("max_trace_drift", drift);
    o.passed = dev <= tol && ortho <= ortho_tol && drift <= drift_tol;
    Ok(o)
}

/// Tail `(-17, 1, 1, 1, 1, 1, 1, 1, 1)` repeated: essential range `[-17, 1]`
/// with `-1` an interior point realized by chunks of nine.
pub fn spike_model() -> OperatorModel {
    let mut period = vec![r(-17.0)];
    period.extend(std::iter::repeat(r(1.0)).take(8));
    OperatorModel::diagonal(vec![TailStream::Periodic(period)], vec![r(-17.0), r(1.0)]).expect("valid model")
}

fn checkpoints_ok(report: &DiagonalReport, o: &mut Outcome, prefix: &str) -> bool {
    let mut ok = true;
    let mut worst = 0.0f64;
    for (k, &dim) in report.checkpoints.iter().enumerate() {
        let s = report.partial_sum(dim).norm();
        worst = worst.max(s * (k + 1) as f64);
        ok &= s < 1.0 / (k + 1) as f64;
    }
    o.measure(&format!("{prefix}max_k_times_sum"), worst);
    o.measure(&format!("{prefix}dim"), report.len() as f64);
    ok
}

pub fn fan_construction_check(_seed: u64) -> Result<Outcome> {
    let mut o = Outcome::default();
    o.tolerance("levels", 10.0);
    let (report, levels) = fan_construct_traced(&spike_model(), -1.0, 1.0, 10)?;
    let mut ok = checkpoints_ok(&report, &mut o, "");
    for l in &levels {
        ok &= l.trace.norm() <= l.eps;
    }
    o.passed = ok && levels.len() == 10;
    Ok(o)
}

/// Levels used per `t`: the construction grows about `(1-t)/t + 1` fold
/// per level, so `t = 1/4` stops earlier.
pub const CONVEX_LEVELS: [(f64, usize); 3] = [(0.25, 7), (0.5, 10), (0.75, 10)];

pub fn convex_combination_check(_seed: u64) -> Result<Outcome> {
    let mut o = Outcome::default();
    let model = spike_model();
    let mut ok = true;
    for (t, levels) in CONVEX_LEVELS {
        let (a, b) = affine_normalize(r(-1.0), r(1.0), t)?;
        ok &= a * r(-1.0) + b == r(-(1.0 - t)) && a * r(1.0) + b == r(t);
        let (report, got) = convex_comb_diag_traced(&model, r(-1.0), r(1.0), t, levels)?;
        ok &= got.len() == levels;
        ok &= checkpoints_ok(&report, &mut o, &format!("t{t}_"));
    }
    o.passed = ok;
    Ok(o)
}

pub fn kadison_check(_seed: u64) -> Result<Outcome> {
    let mut o = Outcome::default();
    let (d1, d2) = (kadison::d1(), kadison::d2());
    let d0 = kadison::midpoint(&d1, &d2)?;
    let s0 = kadison::sums(&d0);
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut ok = kadison::decide(&d1) == Decision::Diagonal
        && kadison::decide(&d2) == Decision::Diagonal
        && kadison::same_projection_class(&d1, &d2)?
        && kadison::decide(&d0) == Decision::NotDiagonal
        && d0 == kadison::d0()
        && s0.a == Extended::Finite(half)
        && s0.b == Extended::Finite(BigRational::from_integer(BigInt::from(0)));
    let mut invariant = 0.0;
    for (_, d) in kadison::catalog() {
        if kadison::decide_with(&d, Convention::Strict) == kadison::decide_with(&d, Convention::LeHalf) {
            invariant += 1.0;
        } else {
            ok = false;
        }
    }
    o.measure("convention_invariant_sequences", invariant);
    o.passed = ok;
    Ok(o)
}

pub fn inclusion_chain_check(_seed: u64) -> Result<Outcome> {
    let mut o = Outcome::default();
    let i = C64::new(0.0, 1.0);
    let model = OperatorModel::diagonal(vec![TailStream::Periodic(vec![r(0.0), r(1.0), i, r(0.0)])], vec![r(0.0), r(1.0), i])?;
    let lambda = C64::new(0.25, 0.25);
    let tol = o.tolerance("diagonal", 1e-6);
    let report = constant_diag_basis(&model, lambda, 1000, 1e-9)?;
    let dev = o.measure("max_deviation", report.max_deviation);
    let relint = essential_range(&model).contains(lambda, Membership::RelativeInterior, 1e-9);

    let halving = OperatorModel::diagonal(
        vec![TailStream::Geometric {
            c: r(1.0),
            ratio: num_rational::Rational64::new(1, 2),
        }],
        vec![r(0.0)],
    )?;
    let mut min_eig = f64::INFINITY;
    for n in 1..=64 {
        let e = herm_eig(&halving.section(n)?)?;
        min_eig = min_eig.min(e.values[0]);
    }
    o.measure("min_section_eigenvalue", min_eig);
    let point = essential_range(&halving);
    o.passed = report.len() == 1000
        && dev <= tol
        && relint
        && min_eig > 0.0
        && point.kind() == PolygonKind::Point
        && point.vertices()[0] == r(0.0);
    Ok(o)
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let v: Vec<C64> = (0..n)
        .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let s = crate::linalg::norm(&v);
    v.into_iter().map(|z| z / s).collect()
}

pub fn fan_fails_for_pairs_check(seed: u64) -> Result<Outcome> {
    let mut o = Outcome::default();
    let s = traceless_pair_embedded(4);
    let n = s.dim();
    let mut ok = true;
    for m in s.members() {
        let values: Vec<C64> = (0..n).map(|k| m[(k, k)]).collect();
        let report = DiagonalReport::new(Basis::Dense(OrthonormalFrame::standard(n)), values, None, (2..=n).collect());
        let check = fan_check(&report, n);
        ok &= check.min == 0.0 && check.magnitudes.iter().all(|&x| x == 0.0);
    }
    let tol = o.tolerance("distance", 1e-6);
    let base = min_distance(&traceless_pair(), &JointPoint::real(&[0.0, 0.0]), RangeMode::Joint, &cfg(seed, 200))?;
    let d = o.measure("pair_min_distance", base.best_distance);
    ok &= (d - 0.5).abs() <= tol;
    // a unit vector (x, f) lands at distance >= |x|^2 / 2 from (0, 0)
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slack = f64::INFINITY;
    let origin = JointPoint::real(&[0.0, 0.0]);
    for _ in 0..2000 {
        let h = random_unit(n, &mut rng);
        let x2 = h[0].norm_sqr() + h[1].norm_sqr();
        slack = slack.min(joint_point(&s, &h)?.distance(&origin) - 0.5 * x2);
    }
    o.measure("scaled_bound_slack", slack);
    ok &= slack >= -1e-12;
    o.passed = ok;
    Ok(o)
}

pub fn hausdorff_toeplitz_check(seed: u64) -> Result<Outcome> {
    let mut o = Outcome::default();
    let threshold = o.tolerance("flag_threshold", 1e-6);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut worst = 0.0f64;
    let mut flags = 0.0;
    for i in 0..20 {
        let n = rng.random_range(2..=5);
        let ts = OperatorTuple::new(vec![ComplexMatrix::random_gaussian(n, &mut rng)])?;
        let p = joint_point(&ts, &random_unit(n, &mut rng))?;
        let q = joint_point(&ts, &random_unit(n, &mut rng))?;
        let report = convexity_probe(&ts, &p, &q, 5, threshold, &cfg(seed + i, 16))?;
        worst = worst.max(report.max_distance);
        flags += report.flagged().count() as f64;
    }
    o.measure("max_interior_distance", worst);
    o.measure("flags", flags);
    o.passed = flags == 0.0;
    Ok(o)
}
