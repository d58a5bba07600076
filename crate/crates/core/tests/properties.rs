use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use numrange::diagonals::{affine_normalize, parker_basis, subspace_extension, Basis, ConstantDiagonalStream};
use numrange::io;
use numrange::kadison::{self, Convention, DiagonalSeq, Extended, SeqStream};
use numrange::linalg::{ComplexMatrix, SparseFrame, SparseVector, C64};
use numrange::numrange::{
    boundary_polygon, caratheodory, essential_range, inverse_numrange, Membership, OperatorModel, Polygon2D,
    PolygonKind, TailStream,
};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn matrix(n: usize, seed: u64) -> ComplexMatrix {
    ComplexMatrix::random_gaussian(n, &mut ChaCha20Rng::seed_from_u64(seed))
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn entry() -> impl Strategy<Value = BigRational> {
    (0i64..=12).prop_map(|k| q(k, 12))
}

fn stream() -> impl Strategy<Value = SeqStream> {
    prop_oneof![
        prop_oneof![Just(q(0, 1)), Just(q(1, 1)), Just(q(1, 2)), Just(q(1, 3))].prop_map(SeqStream::Constant),
        ((0i64..=8), prop_oneof![Just(q(1, 2)), Just(q(1, 3)), Just(q(2, 3))])
            .prop_map(|(k, r)| SeqStream::Geometric { c: q(k, 8), r }),
    ]
}

fn seq() -> impl Strategy<Value = DiagonalSeq> {
    (prop::collection::vec(entry(), 0..8), prop::collection::vec(stream(), 0..3))
        .prop_map(|(p, t)| DiagonalSeq::new(p, t).unwrap())
}

fn direct_sums(entries: &[BigRational], le_half: bool) -> (BigRational, BigRational) {
    let half = q(1, 2);
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for x in entries {
        if (le_half && *x <= half) || (!le_half && *x < half) {
            a += x;
        } else {
            b += BigRational::one() - x;
        }
    }
    (a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parker_gives_constant_orthonormal_diagonal(n in 1usize..16, seed in any::<u64>()) {
        let t = matrix(n, seed);
        let r = parker_basis(&t, 1e-9).unwrap();
        let Basis::Dense(frame) = &r.basis else { panic!("dense basis expected") };
        prop_assert_eq!(frame.len(), n);
        prop_assert!(frame.orthonormality_defect() < 1e-10);
        let mean = t.trace() / n as f64;
        for v in frame.vectors() {
            prop_assert!((t.quadratic_form(v) - mean).norm() <= 1e-9);
        }
    }

    #[test]
    fn inverse_problem_is_solved(n in 1usize..10, seed in any::<u64>(), w in prop::collection::vec(-1.0f64..1.0, 20)) {
        let t = matrix(n, seed);
        let mut x: Vec<C64> = (0..n).map(|i| c(w[2 * i], w[2 * i + 1])).collect();
        let s = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(s > 1e-3);
        for z in &mut x { *z /= s; }
        let lambda = t.quadratic_form(&x);
        let u = inverse_numrange(&t, lambda, 1e-10).unwrap();
        let norm: f64 = u.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-12);
        prop_assert!((t.quadratic_form(u.as_slice()) - lambda).norm() <= 1e-10);
    }

    #[test]
    fn point_range_only_for_scalars(n in 1usize..8, re in -5.0f64..5.0, im in -5.0f64..5.0, seed in any::<u64>()) {
        let lambda = c(re, im);
        let s = ComplexMatrix::scalar(n, lambda);
        let p = boundary_polygon(&s, 64).unwrap();
        prop_assert_eq!(p.kind(), PolygonKind::Point);
        prop_assert!((p.vertices()[0] - lambda).norm() < 1e-12);
        let r = parker_basis(&s, 1e-12).unwrap();
        prop_assert!(r.values.iter().all(|v| (v - lambda).norm() < 1e-12));
        if n >= 2 {
            let t = matrix(n, seed);
            prop_assert_ne!(boundary_polygon(&t, 64).unwrap().kind(), PolygonKind::Point);
        }
    }

    #[test]
    fn hull_contains_its_points_and_their_averages(
        pts in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..12),
        w in prop::collection::vec(0.0f64..1.0, 12),
    ) {
        let z: Vec<C64> = pts.iter().map(|&(a, b)| c(a, b)).collect();
        let poly = Polygon2D::hull(&z).unwrap();
        for p in &z {
            prop_assert!(poly.contains(*p, Membership::Closure, 1e-9));
        }
        let total: f64 = w[..z.len()].iter().sum();
        prop_assume!(total > 1e-6);
        let avg: C64 = z.iter().zip(&w).map(|(p, wi)| p * *wi).sum::<C64>() / total;
        prop_assert!(poly.contains(avg, Membership::Closure, 1e-9));
        prop_assert!(poly.distance(avg) <= 1e-9);
    }

    #[test]
    fn caratheodory_weights_reconstruct(
        pts in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 3..10),
        w in prop::collection::vec(0.01f64..1.0, 10),
    ) {
        let z: Vec<C64> = pts.iter().map(|&(a, b)| c(a, b)).collect();
        let total: f64 = w[..z.len()].iter().sum();
        let target: C64 = z.iter().zip(&w).map(|(p, wi)| p * *wi).sum::<C64>() / total;
        let weights = caratheodory(&z, target);
        prop_assert!(weights.len() <= 3);
        prop_assert!(weights.iter().all(|(_, x)| *x >= 0.0));
        prop_assert!((weights.iter().map(|(_, x)| x).sum::<f64>() - 1.0).abs() < 1e-9);
        let back: C64 = weights.iter().map(|&(i, x)| z[i] * x).sum();
        prop_assert!((back - target).norm() < 1e-9);
    }

    #[test]
    fn finite_sums_match_direct_summation(p in prop::collection::vec(entry(), 0..20), le in any::<bool>()) {
        let d = DiagonalSeq::finite(p.clone()).unwrap();
        let convention = if le { Convention::LeHalf } else { Convention::Strict };
        let s = kadison::sums_with(&d, convention);
        let (a, b) = direct_sums(&p, le);
        prop_assert_eq!(s.a, Extended::Finite(a));
        prop_assert_eq!(s.b, Extended::Finite(b));
    }

    #[test]
    fn decision_ignores_half_convention(d in seq()) {
        prop_assert_eq!(
            kadison::decide_with(&d, Convention::Strict),
            kadison::decide_with(&d, Convention::LeHalf)
        );
    }

    #[test]
    fn decision_ignores_prefix_order(p in prop::collection::vec(entry(), 1..10), t in prop::collection::vec(stream(), 0..3), rot in 0usize..10) {
        let tails: Vec<SeqStream> = t;
        let d = DiagonalSeq::new(p.clone(), tails.clone()).unwrap();
        let mut shuffled = p;
        let k = rot % shuffled.len();
        shuffled.rotate_left(k);
        shuffled.reverse();
        let e = DiagonalSeq::new(shuffled, tails).unwrap();
        prop_assert_eq!(kadison::sums(&d), kadison::sums(&e));
        prop_assert_eq!(kadison::decide(&d), kadison::decide(&e));
    }

    #[test]
    fn midpoint_is_entrywise_and_idempotent(d in seq(), e in seq()) {
        prop_assume!(d.is_finite() == e.is_finite());
        prop_assume!(!d.is_finite() || d.prefix().len() == e.prefix().len());
        // tails of different shapes have no closed-form average
        match kadison::midpoint(&d, &e) {
            Ok(m) => {
                for i in 0..40 {
                    match (d.entry(i), e.entry(i)) {
                        (Some(x), Some(y)) => prop_assert_eq!(m.entry(i), Some((x + y) * q(1, 2))),
                        _ => prop_assert_eq!(m.entry(i), None),
                    }
                }
            }
            Err(numrange::Error::IncompatibleStreams(_)) => {}
            Err(other) => return Err(TestCaseError::fail(other.to_string())),
        }
        let same = kadison::midpoint(&d, &d).unwrap();
        for i in 0..40 {
            prop_assert_eq!(same.entry(i), d.entry(i));
        }
    }

    #[test]
    fn essential_range_ignores_head(n in 0usize..6, seed in any::<u64>(), k in 2usize..6) {
        let period: Vec<C64> = (0..k).map(|j| c(j as f64, (j * j) as f64 % 3.0)).collect();
        let model = OperatorModel::diagonal(vec![TailStream::Periodic(period.clone())], period).unwrap();
        let with = model.with_head(matrix(n, seed));
        prop_assert_eq!(essential_range(&model), essential_range(&with));
    }

    #[test]
    fn affine_normalization_hits_targets(ar in -4.0f64..4.0, ai in -4.0f64..4.0, br in -4.0f64..4.0, bi in -4.0f64..4.0, t in 0.01f64..0.99) {
        let (alpha, beta) = (c(ar, ai), c(br, bi));
        prop_assume!((alpha - beta).norm() > 1e-3);
        let (a, b) = affine_normalize(alpha, beta, t).unwrap();
        let scale = 1.0 + alpha.norm().max(beta.norm()) * a.norm();
        prop_assert!((a * alpha + b + (1.0 - t)).norm() <= 1e-12 * scale);
        prop_assert!((a * beta + b - t).norm() <= 1e-12 * scale);
        prop_assert!((a * (alpha * t + beta * (1.0 - t)) + b).norm() <= 1e-12 * scale);
    }

    #[test]
    fn dyadic_normalization_is_exact(i in -8i32..8, j in 1i32..8, k in 1i32..4) {
        let alpha = c(i as f64, 0.0);
        let beta = c((i + (1 << (j % 3))) as f64, 0.0);
        let t = k as f64 / 4.0;
        let (a, b) = affine_normalize(alpha, beta, t).unwrap();
        prop_assert_eq!(a * alpha + b, c(-(1.0 - t), 0.0));
        prop_assert_eq!(a * beta + b, c(t, 0.0));
    }
}

fn spike_entry(j: usize) -> f64 {
    if j % 9 == 0 { -17.0 } else { 1.0 }
}

fn spike_model() -> OperatorModel {
    let mut period = vec![c(-17.0, 0.0)];
    period.extend(std::iter::repeat(c(1.0, 0.0)).take(8));
    OperatorModel::diagonal(vec![TailStream::Periodic(period)], vec![c(-17.0, 0.0), c(1.0, 0.0)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn extension_contains_m_and_has_small_trace(
        raw in prop::collection::vec(prop::collection::vec((0usize..24, -1.0f64..1.0, -1.0f64..1.0), 1..4), 1..4),
        eps in 0.02f64..0.5,
    ) {
        let model = spike_model();
        let mut m = SparseFrame::new();
        for entries in raw {
            let v = SparseVector::from_entries(entries.into_iter().map(|(j, a, b)| (j, c(a, b))).collect());
            if let Some(u) = m.orthogonalize(&v).normalized() {
                if m.orthogonalize(&v).norm() > 1e-3 {
                    m.push(u);
                }
            }
        }
        prop_assume!(!m.is_empty());
        let mut stream = ConstantDiagonalStream::new(&model, c(-1.0, 0.0), 1e-12).unwrap();
        let ext = subspace_extension(&model, &mut stream, &m, -1.0, 1.0, eps).unwrap();
        prop_assert!(ext.frame.orthonormality_defect() < 1e-9);
        for v in m.vectors() {
            let r = ext.frame.orthogonalize(v);
            prop_assert!(r.norm() <= 1e-9);
        }
        let trace: C64 = ext
            .frame
            .vectors()
            .iter()
            .map(|v| v.entries().iter().map(|&(j, z)| spike_entry(j) * z.norm_sqr()).sum::<f64>())
            .map(|x| c(x, 0.0))
            .sum();
        prop_assert!(trace.norm() <= eps + 1e-9);
    }
}

#[test]
fn json_round_trips() {
    let t = matrix(5, 7);
    assert_eq!(io::matrix_from_json(&io::matrix_to_json(&t)).unwrap(), t);

    let model = OperatorModel::diagonal(
        vec![
            TailStream::Periodic(vec![c(0.0, 0.0), c(1.0, 0.5)]),
            TailStream::Constant(c(2.0, 0.0)),
            TailStream::Geometric { c: c(1.0, 0.0), ratio: Rational64::new(1, 3) },
        ],
        vec![c(0.0, 0.0), c(1.0, 0.5), c(2.0, 0.0)],
    )
    .unwrap()
    .with_head(matrix(3, 8));
    let back = io::model_from_json(&io::model_to_json(&model).unwrap()).unwrap();
    assert_eq!(back.head(), model.head());
    assert_eq!(back.streams(), model.streams());
    assert_eq!(back.limit_points(), model.limit_points());
    assert_eq!(back.truncation(), model.truncation());

    for (_, d) in kadison::catalog() {
        let back = io::seq_from_json(&io::seq_to_json(&d)).unwrap();
        assert_eq!(back.take(50), d.take(50));
        assert_eq!(kadison::sums(&back), kadison::sums(&d));
    }
}
