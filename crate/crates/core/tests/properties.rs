//! Randomized invariants. Each case draws its inputs from a seeded stream so
//! failures shrink to a reproducible seed.

use proptest::prelude::*;
use rand::Rng;

use irreality_core::channels::{dephase, dephase_seq, is_joint_reality_state, is_reality_state};
use irreality_core::classical::{
    classical_collapse, classical_sequential, JointDistribution, Order,
};
use irreality_core::closedform::{werner_ji, WernerConfig};
use irreality_core::linalg::{partial_trace, schatten2, tensor};
use irreality_core::measures::{
    delta_correlation, entropic_ur_margin, information, irreality, ji_bounds, ji_decomposition,
    joint_irreality, mutual_information, onesided_discord_min, overlap_c, script_d,
    symmetric_discord, von_neumann_entropy,
};
use irreality_core::qstate::{
    mub_pair, random_density_matrix, random_observable, random_unitary, werner_state, StreamRng,
};
use irreality_core::{
    BellSign, ComplexMatrix, DensityMatrix, HermitianOperator, Observable, RngStream, Side, C64,
};

fn rng(seed: u64) -> StreamRng {
    RngStream::new(seed, 0).rng()
}

fn any_rank_state(d: usize, r: &mut StreamRng) -> DensityMatrix {
    let rank = r.random_range(1..=d);
    random_density_matrix(d, rank, r)
}

fn triple(d: usize, seed: u64) -> (DensityMatrix, Observable, Observable) {
    let mut r = rng(seed);
    let rho = any_rank_state(d, &mut r);
    (
        rho,
        random_observable(d, &mut r),
        random_observable(d, &mut r),
    )
}

fn bipartite(seed: u64) -> (DensityMatrix, Observable, Observable, StreamRng) {
    let mut r = rng(seed);
    let rho = any_rank_state(4, &mut r).with_bipartition((2, 2)).unwrap();
    let a = random_observable(2, &mut r);
    let b = random_observable(2, &mut r);
    (rho, a, b, r)
}

/// `(rho, x, y)` with `rho` diagonal in the common eigenbasis of `x` and `y`.
fn jointly_real(d: usize, seed: u64) -> (DensityMatrix, Observable, Observable) {
    let mut r = rng(seed);
    let u = random_unitary(d, &mut r);
    let w: Vec<f64> = (0..d).map(|_| r.random::<f64>() + 0.01).collect();
    let t: f64 = w.iter().sum();
    let p: Vec<f64> = w.iter().map(|v| v / t).collect();
    let rho =
        DensityMatrix::new(ComplexMatrix::from_real_diagonal(&p).conjugate_by(&u), None).unwrap();
    let labels: Vec<f64> = (0..d).map(|k| k as f64).collect();
    let x = Observable::from_eigenbasis(labels.clone(), u.clone()).unwrap();
    let y = Observable::lueders(labels.iter().map(|l| l % 2.0).collect(), u).unwrap();
    (rho, x, y)
}

fn dims() -> impl Strategy<Value = usize> {
    prop_oneof![Just(2usize), Just(3usize), Just(4usize)]
}

fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a * b).trace().re
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn measures_are_nonnegative(seed in any::<u64>(), d in dims()) {
        let (rho, x, y) = triple(d, seed);
        prop_assert!(irreality(&rho, &x).unwrap() >= -1e-10);
        prop_assert!(joint_irreality(&rho, &x, &y).unwrap() >= -1e-10);
    }

    #[test]
    fn correlation_measures_are_nonnegative(seed in any::<u64>()) {
        let (rho, a, b, mut r) = bipartite(seed);
        prop_assert!(symmetric_discord(&rho, &a, &b).unwrap() >= -1e-10);
        let x = random_observable(4, &mut r);
        let y = random_observable(4, &mut r);
        prop_assert!(delta_correlation(&rho, &x, &y).unwrap().value >= 0.0);
        prop_assert!(script_d(&rho, &x, &y).unwrap() >= 0.0);
    }

    #[test]
    fn decomposition_identity(seed in any::<u64>(), d in dims()) {
        let (rho, x, y) = triple(d, seed);
        let ji = joint_irreality(&rho, &x, &y).unwrap();
        let dec = ji_decomposition(&rho, &x, &y).unwrap();
        prop_assert!((dec.joint() - ji).abs() <= 1e-10);
        // never below the average irreality
        prop_assert!(2.0 * ji >= dec.x + dec.y - 1e-10);
    }

    #[test]
    fn local_decomposition_identity(seed in any::<u64>()) {
        let (rho, a, b, _) = bipartite(seed);
        let ji = joint_irreality(&rho, &a.local(Side::A, 2), &b.local(Side::B, 2)).unwrap();
        let local = irreality(&rho.reduced(Side::A).unwrap(), &a).unwrap()
            + irreality(&rho.reduced(Side::B).unwrap(), &b).unwrap();
        let d_ab = symmetric_discord(&rho, &a, &b).unwrap();
        prop_assert!((ji - local - d_ab).abs() <= 1e-10);
    }

    #[test]
    fn product_additivity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ra = any_rank_state(2, &mut r);
        let rb = any_rank_state(3, &mut r);
        let a = random_observable(2, &mut r);
        let b = random_observable(3, &mut r);
        let prod = DensityMatrix::product(&ra, &rb);
        let ji = joint_irreality(&prod, &a.local(Side::A, 3), &b.local(Side::B, 2)).unwrap();
        let sum = irreality(&ra, &a).unwrap() + irreality(&rb, &b).unwrap();
        prop_assert!((ji - sum).abs() <= 1e-10);
        prop_assert!(symmetric_discord(&prod, &a, &b).unwrap().abs() <= 1e-10);
        prop_assert!(delta_correlation(&prod, &a.local(Side::A, 3), &b.local(Side::B, 2)).unwrap().value <= 1e-10);
    }

    #[test]
    fn bounds_and_uncertainty(seed in any::<u64>(), d in dims()) {
        let (rho, x, y) = triple(d, seed);
        let ji = joint_irreality(&rho, &x, &y).unwrap();
        let b = ji_bounds(&rho, &x, &y).unwrap();
        prop_assert!(b.lower <= ji + 1e-9 && ji <= b.upper + 1e-9);
        prop_assert!(entropic_ur_margin(&rho, &x, &y).unwrap() >= -1e-9);
        let c = overlap_c(&x, &y).unwrap();
        prop_assert!(c >= 1.0 / (d as f64).sqrt() - 1e-12 && c <= 1.0 + 1e-12);
    }

    #[test]
    fn basis_covariance(seed in any::<u64>(), d in dims()) {
        let (rho, x, y) = triple(d, seed);
        let u = random_unitary(d, &mut rng(seed ^ 0x5eed));
        let (rho2, x2, y2) = (rho.conjugate_by(&u).unwrap(), x.conjugate_by(&u).unwrap(), y.conjugate_by(&u).unwrap());
        let pairs = [
            (irreality(&rho, &x).unwrap(), irreality(&rho2, &x2).unwrap()),
            (joint_irreality(&rho, &x, &y).unwrap(), joint_irreality(&rho2, &x2, &y2).unwrap()),
            (information(&rho).unwrap(), information(&rho2).unwrap()),
            (overlap_c(&x, &y).unwrap(), overlap_c(&x2, &y2).unwrap()),
        ];
        for (a, b) in pairs {
            prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn local_basis_covariance(seed in any::<u64>()) {
        let (rho, a, b, mut r) = bipartite(seed);
        let (ua, ub) = (random_unitary(2, &mut r), random_unitary(2, &mut r));
        let u = tensor(&ua, &ub);
        let rho2 = rho.conjugate_by(&u).unwrap();
        let (a2, b2) = (a.conjugate_by(&ua).unwrap(), b.conjugate_by(&ub).unwrap());
        prop_assert!((symmetric_discord(&rho, &a, &b).unwrap() - symmetric_discord(&rho2, &a2, &b2).unwrap()).abs() <= 1e-9);
        prop_assert!((mutual_information(&rho).unwrap() - mutual_information(&rho2).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn faithfulness_on_random_triples(seed in any::<u64>(), d in dims()) {
        let (rho, x, y) = triple(d, seed);
        let ji = joint_irreality(&rho, &x, &y).unwrap();
        let real = is_joint_reality_state(&rho, &x, &y, 1e-6).unwrap();
        prop_assert_eq!(ji <= 1e-9, real);
    }

    #[test]
    fn faithfulness_on_joint_reality_states(seed in any::<u64>(), d in dims()) {
        let (rho, x, y) = jointly_real(d, seed);
        prop_assert!(joint_irreality(&rho, &x, &y).unwrap() <= 1e-9);
        prop_assert!(is_joint_reality_state(&rho, &x, &y, 1e-6).unwrap());
        // joint reality implies reality of each observable
        prop_assert!(is_reality_state(&rho, &x, 1e-9).unwrap());
        prop_assert!(is_reality_state(&rho, &y, 1e-9).unwrap());
    }

    #[test]
    fn mub_collapse(seed in any::<u64>(), d in dims()) {
        let rho = any_rank_state(d, &mut rng(seed));
        let (x, xbar) = mub_pair(d).unwrap();
        let flat = DensityMatrix::maximally_mixed(d);
        prop_assert!(dephase_seq(&rho, &x, &xbar).unwrap().distance(&flat).unwrap() <= 1e-10);
        let ji = joint_irreality(&rho, &x, &xbar).unwrap();
        prop_assert!((ji - information(&rho).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn dephasing_is_a_unital_idempotent_channel(seed in any::<u64>(), d in dims()) {
        let (rho, x, _) = triple(d, seed);
        let out = dephase(&rho, &x).unwrap();
        prop_assert!((out.matrix().trace().re - 1.0).abs() <= 1e-12);
        let flat = DensityMatrix::maximally_mixed(d);
        prop_assert!(dephase(&flat, &x).unwrap().distance(&flat).unwrap() <= 1e-12);
        prop_assert!(dephase(&out, &x).unwrap().distance(&out).unwrap() <= 1e-12);
        prop_assert!(von_neumann_entropy(&out).unwrap() >= von_neumann_entropy(&rho).unwrap() - 1e-10);
    }

    #[test]
    fn commuting_observables_give_order_free_statistics(seed in any::<u64>()) {
        let mut r = rng(seed);
        let rho = any_rank_state(4, &mut r);
        let u = random_unitary(4, &mut r);
        let x = Observable::lueders(vec![0.0, 0.0, 1.0, 1.0], u.clone()).unwrap();
        let y = Observable::lueders(vec![0.0, 1.0, 0.0, 1.0], u).unwrap();
        let z = random_observable(4, &mut r);
        let xy = dephase_seq(&rho, &y, &x).unwrap();
        let yx = dephase_seq(&rho, &x, &y).unwrap();
        for zk in z.projectors() {
            let a = trace_product(zk.matrix(), xy.matrix());
            let b = trace_product(zk.matrix(), yx.matrix());
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn bayes_rule_under_joint_reality(seed in any::<u64>(), d in dims()) {
        // the maximally mixed state is jointly real for every pair
        let (_, x, y) = triple(d, seed);
        let rho = DensityMatrix::maximally_mixed(d);
        prop_assert!(is_joint_reality_state(&rho, &x, &y, 1e-9).unwrap());
        let seq = |first: &HermitianOperator, second: &HermitianOperator| {
            let m = &(&(second.matrix() * first.matrix()) * rho.matrix()) * first.matrix();
            (&m * second.matrix()).trace().re
        };
        for xi in x.projectors() {
            for yj in y.projectors() {
                // p(y_j) p(x_i | y_j) against p(x_i) p(y_j | x_i)
                prop_assert!((seq(&yj, &xi) - seq(&xi, &yj)).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn linalg_invariants(seed in any::<u64>(), d in 1usize..=16) {
        let mut r = rng(seed);
        let rho = any_rank_state(d, &mut r);
        let s = rho.spectrum().unwrap();
        prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!((&s.reconstruct() - rho.matrix()).max_abs() <= 1e-10 * d as f64);
        let v = &s.eigenvectors;
        prop_assert!((&(&v.adjoint() * v) - &ComplexMatrix::identity(d)).max_abs() <= 1e-10 * d as f64);
        let u = random_unitary(d, &mut r);
        prop_assert!((schatten2(&rho.matrix().conjugate_by(&u)) - schatten2(rho.matrix())).abs() <= 1e-10);
    }

    #[test]
    fn tensor_and_partial_trace(seed in any::<u64>(), da in 1usize..=4, db in 1usize..=4) {
        let mut r = rng(seed);
        let a = any_rank_state(da, &mut r);
        let b = any_rank_state(db, &mut r);
        let c = any_rank_state(2, &mut r);
        let ab = tensor(a.matrix(), b.matrix());
        prop_assert!((ab.trace() - a.matrix().trace() * b.matrix().trace()).norm() <= 1e-12);
        let left = tensor(&ab, c.matrix());
        let right = tensor(a.matrix(), &tensor(b.matrix(), c.matrix()));
        prop_assert!((&left - &right).max_abs() <= 1e-12);
        prop_assert!((&partial_trace(&ab, (da, db), Side::A).unwrap() - a.matrix()).max_abs() <= 1e-12);
        prop_assert!((&partial_trace(&ab, (da, db), Side::B).unwrap() - b.matrix()).max_abs() <= 1e-12);
    }

    #[test]
    fn observable_reconstruction(seed in any::<u64>(), d in dims()) {
        let x = random_observable(d, &mut rng(seed));
        let mut sum = ComplexMatrix::zeros(d);
        for (k, p) in x.projectors().iter().enumerate() {
            sum = &sum + &p.matrix().scale(C64::new(x.eigenvalues()[k], 0.0));
        }
        prop_assert!((&sum - &x.matrix()).max_abs() <= 1e-10);
    }

    #[test]
    fn werner_marginals_are_flat(alpha in 0.0f64..=1.0, plus in any::<bool>()) {
        let sign = if plus { BellSign::Plus } else { BellSign::Minus };
        let w = werner_state(alpha, sign).unwrap();
        let half = DensityMatrix::maximally_mixed(2);
        for side in [Side::A, Side::B] {
            prop_assert!((w.reduced(side).unwrap().matrix() - half.matrix()).max_abs() <= 1e-12);
        }
    }

    #[test]
    fn werner_ji_symmetric_and_monotone(alpha in 0.0f64..0.99, theta in 0.0f64..=std::f64::consts::PI) {
        let at = |a: f64, t: f64| werner_ji(WernerConfig::new(a, t).unwrap());
        prop_assert!((at(alpha, theta) - at(alpha, std::f64::consts::PI - theta)).abs() <= 1e-10);
        prop_assert!(at(alpha + 0.01, theta) >= at(alpha, theta) - 1e-12);
    }

    #[test]
    fn classical_identity_and_collapse(seed in any::<u64>(), nq in 1usize..12, np in 1usize..12) {
        let mut r = rng(seed);
        let w = JointDistribution::random(nq, np, &mut r).unwrap();
        for order in [Order::QThenP, Order::PThenQ] {
            prop_assert!(classical_sequential(&w, order).max_abs_diff(&w) <= 1e-12);
        }
        let q = r.random_range(0..nq);
        let c = classical_collapse(&w, q).unwrap();
        prop_assert!((c.values().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        for p in 1..np {
            let before = w.get(q, p) * c.get(q, 0);
            let after = c.get(q, p) * w.get(q, 0);
            prop_assert!((before - after).abs() <= 1e-12 * c.get(q, 0).max(1.0));
        }
    }

    #[test]
    fn stream_reproducibility(seed in any::<u64>(), index in any::<u64>()) {
        let draw = || {
            let mut g = RngStream::new(seed, index).rng();
            (0..8).map(|_| g.random::<u64>()).collect::<Vec<_>>()
        };
        prop_assert_eq!(draw(), draw());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn onesided_discord_nonnegative_and_bounded(seed in any::<u64>()) {
        let (rho, _, _, _) = bipartite(seed);
        let mi = mutual_information(&rho).unwrap();
        for side in [Side::A, Side::B] {
            let d = onesided_discord_min(&rho, side).unwrap().value;
            prop_assert!(d >= -1e-10 && d <= mi + 1e-10);
        }
    }
}
