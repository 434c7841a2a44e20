use super::*;
use crate::linalg::{partial_trace, ComplexMatrix, C64};
use crate::qstate::{
    bell_state, bloch_observable, bloch_state, embed_config, mub_pair, random_density_matrix,
    random_observable, werner_state, werner_x, werner_y, BellSign, BlochVector, RngStream,
};

fn z() -> Observable {
    bloch_observable([0.0, 0.0, 1.0]).unwrap()
}

fn x() -> Observable {
    bloch_observable([1.0, 0.0, 0.0]).unwrap()
}

fn h(u: f64) -> f64 {
    let t = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    t(u) + t(1.0 - u)
}

#[test]
fn entropy_examples() {
    assert!((von_neumann_entropy(&DensityMatrix::maximally_mixed(2)).unwrap() - 1.0).abs() < 1e-14);
    let pure = bloch_state(BlochVector::new([0.6, 0.0, 0.8]).unwrap());
    assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-12);
    for &a in &[0.0, 0.25, 0.5, 1.0] {
        let w = werner_state(a, BellSign::Minus).unwrap();
        let big = (1.0 + 3.0 * a) / 4.0;
        let small = (1.0 - a) / 4.0;
        let t = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
        let want = t(big) + 3.0 * t(small);
        assert!((von_neumann_entropy(&w).unwrap() - want).abs() < 1e-12);
    }
}

#[test]
fn relative_entropy_examples() {
    let mut rng = RngStream::new(1, 0).rng();
    let rho = random_density_matrix(3, 3, &mut rng);
    assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-12);
    let obs = random_observable(3, &mut rng);
    let phi = dephase(&rho, &obs).unwrap();
    let rel = relative_entropy(&rho, &phi).unwrap();
    assert!((rel - irreality(&rho, &obs).unwrap()).abs() < 1e-10);

    let up = bloch_state(BlochVector::new([0.0, 0.0, 1.0]).unwrap());
    let mixed = DensityMatrix::maximally_mixed(2);
    assert!((relative_entropy(&up, &mixed).unwrap() - 1.0).abs() < 1e-14);
    let down = bloch_state(BlochVector::new([0.0, 0.0, -1.0]).unwrap());
    assert_eq!(relative_entropy(&up, &down).unwrap(), f64::INFINITY);
    assert!(matches!(
        relative_entropy_checked(&up, &down),
        Err(Error::SupportMismatch { leak }) if (leak - 1.0).abs() < 1e-12
    ));
}

#[test]
fn mutual_information_examples() {
    assert!((mutual_information(&bell_state(BellSign::Minus)).unwrap() - 2.0).abs() < 1e-12);
    let a = bloch_state(BlochVector::new([0.2, 0.1, 0.0]).unwrap());
    let b = bloch_state(BlochVector::new([0.0, 0.3, -0.3]).unwrap());
    assert!(
        mutual_information(&DensityMatrix::product(&a, &b))
            .unwrap()
            .abs()
            < 1e-12
    );
    let w = werner_state(0.5, BellSign::Minus).unwrap();
    let want = 2.0 - von_neumann_entropy(&w).unwrap();
    assert!((mutual_information(&w).unwrap() - want).abs() < 1e-12);
    assert!(matches!(
        mutual_information(&DensityMatrix::maximally_mixed(4)),
        Err(Error::MissingBipartition)
    ));
}

#[test]
fn qubit_irreality_matches_binary_entropy_form() {
    let mut rng = RngStream::new(2, 0).rng();
    for &(r, l) in &[(0.5, 0.0), (0.9, 0.3), (1.0, 0.7), (0.2, 1.0), (0.0, 0.4)] {
        let e = embed_config(r, l, &mut rng).unwrap();
        let got = irreality(&e.state, &e.observable).unwrap();
        let want = h((1.0 + l * r) / 2.0) - h((1.0 + r) / 2.0);
        assert!((got - want).abs() < 1e-12, "{r} {l}: {got} vs {want}");
    }
    assert!(
        irreality(
            &DensityMatrix::maximally_mixed(3),
            &random_observable(3, &mut rng)
        )
        .unwrap()
        .abs()
            < 1e-12
    );
}

#[test]
fn singlet_joint_irreality() {
    let psi = bell_state(BellSign::Minus);
    let za = z().local(Side::A, 2);
    let zb = z().local(Side::B, 2);
    assert!((joint_irreality(&psi, &za, &zb).unwrap() - 1.0).abs() < 1e-12);
    let xb = x().local(Side::B, 2);
    assert!((joint_irreality(&psi, &zb, &xb).unwrap() - 2.0).abs() < 1e-12);
    let dec = ji_decomposition(&psi, &zb, &xb).unwrap();
    assert!((dec.joint() - 2.0).abs() < 1e-12);
    let mixed = DensityMatrix::maximally_mixed(4);
    assert!(joint_irreality(&mixed, &za, &xb).unwrap().abs() < 1e-12);
}

#[test]
fn decomposition_identity_and_collapse() {
    let mut rng = RngStream::new(3, 0).rng();
    for d in [2, 3, 4] {
        let rho = random_density_matrix(d, d, &mut rng);
        let a = random_observable(d, &mut rng);
        let b = random_observable(d, &mut rng);
        let dec = ji_decomposition(&rho, &a, &b).unwrap();
        assert!((dec.joint() - joint_irreality(&rho, &a, &b).unwrap()).abs() < 1e-10);
        let same = ji_decomposition(&rho, &a, &a).unwrap();
        assert!(same.x_after_y.abs() < 1e-10 && same.y_after_x.abs() < 1e-10);
        assert!((same.x - same.joint()).abs() < 1e-10);
    }
}

#[test]
fn symmetric_discord_examples() {
    let psi = bell_state(BellSign::Minus);
    assert!((symmetric_discord(&psi, &z(), &z()).unwrap() - 1.0).abs() < 1e-12);
    let a = bloch_state(BlochVector::new([0.4, 0.0, 0.1]).unwrap());
    let b = bloch_state(BlochVector::new([0.0, 0.2, 0.7]).unwrap());
    let prod = DensityMatrix::product(&a, &b);
    assert!(symmetric_discord(&prod, &x(), &z()).unwrap().abs() < 1e-12);
}

#[test]
fn local_decomposition_identity() {
    let mut rng = RngStream::new(4, 0).rng();
    for _ in 0..20 {
        let rho = random_density_matrix(4, 3, &mut rng)
            .with_bipartition((2, 2))
            .unwrap();
        let a = random_observable(2, &mut rng);
        let b = random_observable(2, &mut rng);
        let ji = joint_irreality(&rho, &a.local(Side::A, 2), &b.local(Side::B, 2)).unwrap();
        let rhs = irreality(&rho.reduced(Side::A).unwrap(), &a).unwrap()
            + irreality(&rho.reduced(Side::B).unwrap(), &b).unwrap()
            + symmetric_discord(&rho, &a, &b).unwrap();
        assert!((ji - rhs).abs() < 1e-10);
    }
}

/// Independent evaluation of the delta measure: projector sums, explicit
/// partial traces and entropies from fresh eigendecompositions.
fn delta_brute_force(rho: &ComplexMatrix, xo: &Observable, yo: &Observable) -> f64 {
    let dephase_sum = |m: &ComplexMatrix, o: &Observable| {
        o.projectors()
            .iter()
            .fold(ComplexMatrix::zeros(4), |acc, p| {
                &acc + &(&(p.matrix() * m) * p.matrix())
            })
    };
    let s = |m: &ComplexMatrix| {
        let e = HermitianOperator::new(m.hermitian_part())
            .unwrap()
            .eig()
            .unwrap()
            .eigenvalues;
        e.iter()
            .filter(|&&p| p > 1e-12)
            .map(|p| -p * p.log2())
            .sum::<f64>()
    };
    let mi = |m: &ComplexMatrix| {
        s(&partial_trace(m, (2, 2), Side::A).unwrap())
            + s(&partial_trace(m, (2, 2), Side::B).unwrap())
            - s(m)
    };
    let ra = partial_trace(rho, (2, 2), Side::A).unwrap();
    let rb = partial_trace(rho, (2, 2), Side::B).unwrap();
    let mut prod = ComplexMatrix::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    prod[(2 * i + k, 2 * j + l)] = ra[(i, j)] * rb[(k, l)];
                }
            }
        }
    }
    let seq = |m: &ComplexMatrix| dephase_sum(&dephase_sum(m, yo), xo);
    (mi(rho) + mi(&seq(&prod)) - mi(&seq(rho))).abs()
}

#[test]
fn delta_werner_brute_force() {
    let rho = werner_state(0.8, BellSign::Minus).unwrap();
    let (xo, yo) = (werner_x(), werner_y(1.0));
    let got = delta_correlation(&rho, &xo, &yo).unwrap();
    let want = delta_brute_force(rho.matrix(), &xo, &yo);
    assert!(
        (got.value - want).abs() < 1e-10,
        "{} vs {}",
        got.value,
        want
    );
    assert!((got.value - got.signed.abs()).abs() < 1e-15);
    let back = delta_correlation(&rho, &yo, &xo).unwrap();
    assert!((back.value - delta_brute_force(rho.matrix(), &yo, &xo)).abs() < 1e-10);
}

#[test]
fn delta_reductions() {
    let mut rng = RngStream::new(5, 0).rng();
    let a = random_density_matrix(2, 2, &mut rng);
    let b = random_density_matrix(2, 2, &mut rng);
    let prod = DensityMatrix::product(&a, &b);
    let xo = random_observable(4, &mut rng);
    let yo = random_observable(4, &mut rng);
    assert!(delta_correlation(&prod, &xo, &yo).unwrap().value < 1e-10);
    assert!(script_d(&prod, &xo, &yo).unwrap() < 1e-10);

    let rho = random_density_matrix(4, 4, &mut rng)
        .with_bipartition((2, 2))
        .unwrap();
    let la = random_observable(2, &mut rng);
    let lb = random_observable(2, &mut rng);
    let d = delta_correlation(&rho, &la.local(Side::A, 2), &lb.local(Side::B, 2)).unwrap();
    assert!((d.value - symmetric_discord(&rho, &la, &lb).unwrap()).abs() < 1e-10);
    let sd = script_d(&rho, &la.local(Side::A, 2), &lb.local(Side::B, 2)).unwrap();
    assert!((sd - d.value).abs() < 1e-10);
}

#[test]
fn bounds_examples() {
    let mut rng = RngStream::new(6, 0).rng();
    for d in [2, 3, 4] {
        let (zo, fo) = mub_pair(d).unwrap();
        let psi = random_density_matrix(d, 1, &mut rng);
        let b = ji_bounds(&psi, &zo, &fo).unwrap();
        let ld = (d as f64).log2();
        assert!((b.lower - 0.5 * ld).abs() < 1e-10 && (b.upper - ld).abs() < 1e-10);
        assert!((b.overlap_c - 1.0 / (d as f64).sqrt()).abs() < 1e-12);
        let ji = joint_irreality(&psi, &zo, &fo).unwrap();
        assert!(b.lower <= ji + 1e-9 && ji <= b.upper + 1e-9);
        assert!(entropic_ur_check(&psi, &zo, &fo).unwrap());
        let margin = entropic_ur_margin(&psi, &zo, &fo).unwrap();
        let sx = von_neumann_entropy(&dephase(&psi, &zo).unwrap()).unwrap();
        let sy = von_neumann_entropy(&dephase(&psi, &fo).unwrap()).unwrap();
        assert!(sx + sy >= ld - 1e-9 && (margin - (sx + sy - ld)).abs() < 1e-12);
    }
    let mixed = DensityMatrix::maximally_mixed(3);
    let (zo, fo) = mub_pair(3).unwrap();
    let b = ji_bounds(&mixed, &zo, &fo).unwrap();
    assert!(b.upper.abs() < 1e-12);
    assert!(joint_irreality(&mixed, &zo, &fo).unwrap().abs() < 1e-12);

    let up = bloch_state(BlochVector::new([0.0, 0.0, 1.0]).unwrap());
    assert!(entropic_ur_check(&up, &z(), &z()).unwrap());
    assert!((overlap_c(&z(), &z()).unwrap() - 1.0).abs() < 1e-15);
    assert!(entropic_ur_margin(&up, &z(), &z()).unwrap().abs() < 1e-12);
}

#[test]
fn overlap_for_lueders_observables() {
    let za = z().local(Side::A, 2);
    let xa = x().local(Side::A, 2);
    assert!((overlap_c(&za, &xa).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    let zb = z().local(Side::B, 2);
    // commuting local observables on different sides share product eigenvectors
    assert!((overlap_c(&za, &zb).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn information_examples() {
    let mut rng = RngStream::new(7, 0).rng();
    let pure = random_density_matrix(4, 1, &mut rng);
    assert!((information(&pure).unwrap() - 2.0).abs() < 1e-12);
    assert!(
        information(&DensityMatrix::maximally_mixed(5))
            .unwrap()
            .abs()
            < 1e-12
    );
    for d in [2, 3, 4] {
        let (zo, fo) = mub_pair(d).unwrap();
        let rho = random_density_matrix(d, d, &mut rng);
        let ji = joint_irreality(&rho, &zo, &fo).unwrap();
        assert!((ji - information(&rho).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn mub_special_case_examples() {
    let psi = bell_state(BellSign::Minus);
    assert!((mub_special_case(&psi, &z(), &x()).unwrap() - 2.0).abs() < 1e-12);
    let w = werner_state(0.5, BellSign::Minus).unwrap();
    let got = mub_special_case(&w, &z(), &x()).unwrap();
    assert!((got - mutual_information(&w).unwrap()).abs() < 1e-12);
    let ji = joint_irreality(&w, &z().local(Side::A, 2), &x().local(Side::A, 2)).unwrap();
    assert!((ji - got).abs() < 1e-10);

    let a = bloch_state(BlochVector::new([0.3, 0.3, 0.3]).unwrap());
    let b = bloch_state(BlochVector::new([0.0, 0.0, 0.9]).unwrap());
    let prod = DensityMatrix::product(&a, &b);
    let got = mub_special_case(&prod, &z(), &x()).unwrap();
    assert!((got - information(&a).unwrap()).abs() < 1e-12);

    let tilted = bloch_observable([0.6, 0.0, 0.8]).unwrap();
    assert!(matches!(
        mub_special_case(&psi, &z(), &tilted),
        Err(Error::InvalidObservable(_))
    ));
}

#[test]
fn measures_handle_rank_deficient_outputs() {
    // a state with an exactly zero block keeps every measure finite
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = C64::new(1.0, 0.0);
    let rho = DensityMatrix::new(m, Some((2, 2))).unwrap();
    let ji = joint_irreality(&rho, &werner_x(), &werner_y(0.4)).unwrap();
    assert!(ji.is_finite() && ji >= -1e-10);
}
