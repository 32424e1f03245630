use num_complex::Complex64 as C64;
use proptest::prelude::*;
use zmeasure::combinatorics::{enum_partitions, enum_signatures, HalfInteger, PointSet, Signature, YoungDiagram};
use zmeasure::measures::*;
use zmeasure::specfun::rgamma;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn yd(p: &[u32]) -> YoungDiagram {
    YoungDiagram::new(p.to_vec()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn classification() {
    use AdmissibilityClass::*;
    assert_eq!(classify(c(0.4, 0.7), c(0.4, -0.7)).unwrap(), Principal);
    assert_eq!(classify(c(0.3, 0.0), c(0.6, 0.0)).unwrap(), Complementary);
    assert_eq!(classify(c(-1.7, 0.0), c(-1.2, 0.0)).unwrap(), Complementary);
    assert_eq!(classify(c(1.5, 0.0), c(-0.5, 0.0)).unwrap(), Inadmissible);
    assert_eq!(classify(c(0.4, 0.7), c(0.4, 0.7)).unwrap(), Inadmissible);
    assert_eq!(classify(c(2.0, 0.0), c(1.5, 0.0)).unwrap(), Degenerate);
    assert_eq!(classify(c(0.5, 0.0), c(-3.0, 0.0)).unwrap(), Inadmissible);
    assert_eq!(classify(c(-2.5, 0.0), c(-3.0, 0.0)).unwrap(), Degenerate);
    assert_eq!(classify(c(3.0, 0.0), c(1.5, 0.0)).unwrap(), Inadmissible);
    assert!(matches!(classify(c(0.0, 0.0), c(1.0, 0.0)), Err(MeasureError::ZeroParameter)));
}

#[test]
fn degenerate_parameters_have_weights_but_no_kernels() {
    let p = ZXiParams::real(2.0, 2.5, 0.3).unwrap();
    assert!(p.require_kernel_class().is_err());
    // (z)_lambda vanishes for more than two rows.
    assert!(z_weight(&p, &yd(&[1, 1, 1])).unwrap().is_zero());
    assert!(z_weight(&p, &yd(&[3, 1])).unwrap().value() > 0.0);
}

#[test]
fn z_weight_small_diagrams() {
    let (z, zp, xi) = (0.3, 0.6, 0.35);
    let p = ZXiParams::real(z, zp, xi).unwrap();
    let base = (1.0f64 - xi).powf(z * zp);
    assert!(rel(z_weight(&p, &YoungDiagram::empty()).unwrap().value(), base) < 1e-14);
    assert!(rel(z_weight(&p, &yd(&[1])).unwrap().value(), base * z * zp * xi) < 1e-14);
    // (2,1): contents 0, 1, -1 and dim = 2.
    let want = base * z * (z + 1.0) * (z - 1.0) * zp * (zp + 1.0) * (zp - 1.0) * (2.0f64 / 6.0).powi(2) * xi.powi(3);
    assert!(rel(z_weight(&p, &yd(&[2, 1])).unwrap().value(), want) < 1e-13);
}

#[test]
fn mixing_weights_sum_over_shells() {
    for (z, zp) in [(c(0.4, 0.7), c(0.4, -0.7)), (c(0.3, 0.0), c(0.6, 0.0))] {
        let p = ZXiParams::new(z, zp, 0.35).unwrap();
        for n in 0..=12 {
            let shell: f64 = enum_partitions(n).unwrap().iter().map(|l| z_weight(&p, l).unwrap().value()).sum();
            assert!(rel(shell, mixing_weight(n, &p)) < 1e-10, "n = {n}");
        }
    }
}

#[test]
fn negative_binomial_tail() {
    let p = ZXiParams::real(0.3, 0.6, 0.35).unwrap();
    let s: f64 = (0..=60).map(|n| mixing_weight(n, &p)).sum();
    assert!((s - 1.0).abs() <= mixing_tail_bound(60, &p) + 1e-15);
    let s28: f64 = (0..=28).map(|n| mixing_weight(n, &p)).sum();
    let tail = mixing_tail_bound(28, &p);
    assert!(tail < 1e-9);
    assert!(1.0 - s28 <= tail + 1e-15);
    assert!(1.0 - s28 > 0.1 * tail);
}

#[test]
fn weights_are_real_for_conjugate_parameters() {
    let p = ZXiParams::new(c(0.4, 0.7), c(0.4, -0.7), 0.5).unwrap();
    for l in enum_partitions(9).unwrap() {
        let w = z_weight(&p, &l).unwrap();
        assert!(w.imaginary_residue() < 1e-12);
        assert!(w.value() > 0.0);
    }
}

#[test]
fn transposition_symmetry() {
    for (z, zp) in [(c(0.4, 0.7), c(0.4, -0.7)), (c(1.3, 0.0), c(1.6, 0.0))] {
        let p = ZXiParams::new(z, zp, 0.4).unwrap();
        let m = ZXiParams::new(-z, -zp, 0.4).unwrap();
        for n in 0..=10 {
            for l in enum_partitions(n).unwrap() {
                let a = z_weight(&p, &l).unwrap().value();
                let b = z_weight(&m, &l.transpose()).unwrap().value();
                assert!(rel(a, b) < 1e-12);
            }
        }
    }
}

#[test]
fn row_and_frobenius_forms_agree() {
    for (z, zp) in [(c(0.4, 0.7), c(0.4, -0.7)), (c(-2.3, 0.0), c(-2.9, 0.0))] {
        let p = ZXiParams::new(z, zp, 0.6).unwrap();
        for n in 0..=12 {
            for l in enum_partitions(n).unwrap() {
                let a = z_weight(&p, &l).unwrap().value();
                let b = z_weight_frobenius(&p, &l).unwrap().value();
                assert!(rel(a, b) < 1e-10, "{l}");
            }
        }
    }
}

#[test]
fn plancherel_limit() {
    let theta = 1.3;
    assert!(rel(plancherel_weight(theta, &YoungDiagram::empty()), (-theta).exp()) < 1e-15);
    assert!(rel(plancherel_weight(theta, &yd(&[1])), (-theta).exp() * theta) < 1e-15);
    for l in [YoungDiagram::empty(), yd(&[1]), yd(&[2, 1])] {
        let target = plancherel_weight(theta, &l);
        let err: Vec<f64> = [1e3, 1e4]
            .iter()
            .map(|&t| {
                let p = ZXiParams::real(t + 0.5, t + 0.5, theta / ((t + 0.5) * (t + 0.5))).unwrap();
                (z_weight(&p, &l).unwrap().value() - target).abs()
            })
            .collect();
        assert!(err[1] < err[0], "{l}: {err:?}");
    }
}

#[test]
fn zw_weight_single_row() {
    let p = ZWParams::real(0.3, 0.6, 0.2, 0.5, 1).unwrap();
    let s = Signature::new(vec![0]).unwrap();
    let want = (rgamma(c(1.3, 0.0)) * rgamma(c(1.6, 0.0)) * rgamma(c(1.2, 0.0)) * rgamma(c(1.5, 0.0))).re;
    assert!(rel(zw_weight(&s, &p).unwrap().value(), want) < 1e-13);
}

#[test]
fn zw_reversal_symmetry() {
    let p = ZWParams::new(c(0.4, 0.7), c(0.4, -0.7), c(0.3, 0.2), c(0.3, -0.2), 2).unwrap();
    let s = Signature::new(vec![2, -1]).unwrap();
    let a = zw_weight(&s, &p).unwrap().value();
    let b = zw_weight(&s.reversed_negated(), &p.swapped()).unwrap().value();
    assert!(rel(a, b) < 1e-13);
    for n in 1..=3 {
        let p = ZWParams::real(0.3, 0.6, 1.2, 1.5, n).unwrap();
        for s in enum_signatures(n, 4, false).unwrap() {
            let a = zw_weight(&s, &p).unwrap().value();
            let b = zw_weight(&s.reversed_negated(), &p.swapped()).unwrap().value();
            assert!(rel(a, b) < 1e-12);
        }
    }
}

#[test]
fn zw_weight_positive_for_conjugate_pairs() {
    let p = ZWParams::new(c(0.4, 0.7), c(0.4, -0.7), c(0.3, 0.2), c(0.3, -0.2), 2).unwrap();
    let w = zw_weight(&Signature::new(vec![1, 0]).unwrap(), &p).unwrap();
    assert!(w.imaginary_residue() < 1e-12);
    assert!(w.value() > 0.0);
}

#[test]
fn zw_rejects_bad_parameters() {
    assert!(ZWParams::real(0.3, 0.6, 0.2, 1.5, 2).is_err());
    assert!(ZWParams::real(-0.7, -0.6, -0.2, -0.5, 2).is_err());
    assert!(ZWParams::real(0.3, 0.6, 0.2, 0.5, 0).is_err());
}

#[test]
fn zab_weight_examples() {
    let (z, zp) = (c(0.3, 0.4), c(0.3, -0.4));
    let p = ZABParams::new(z, zp, 0.0, 0.0, 1).unwrap();
    let w0 = zab_weight(&Signature::new(vec![0]).unwrap(), &p).unwrap().value();
    let want = 0.5 * (rgamma(z + 1.0) * rgamma(zp + 1.0) * rgamma(z + 2.0) * rgamma(zp + 2.0)).re;
    assert!(rel(w0, want) < 1e-13);
    // lambda = (1): s goes 0 -> 1; each Gamma shifts by one step.
    let w1 = zab_weight(&Signature::new(vec![1]).unwrap(), &p).unwrap().value();
    let ratio = (1.5 / 0.5) * 1.0 * 1.0 / (1.0 * 1.0) * (z * zp).re / ((z + 2.0) * (zp + 2.0)).re;
    assert!(rel(w1 / w0, ratio) < 1e-12);
    let p = ZABParams::new(c(0.2, 0.4), c(0.2, -0.4), 0.5, 0.25, 2).unwrap();
    let w = zab_weight(&Signature::new(vec![1, 0]).unwrap(), &p).unwrap();
    assert!(w.imaginary_residue() < 1e-12 && w.value() > 0.0);
    assert!(zab_weight(&Signature::new(vec![1, -1]).unwrap(), &p).is_err());
    assert!(p.require_moment().is_err());
    assert!(ZABParams::new(c(0.2, 0.4), c(0.2, -0.4), -1.5, 0.25, 2).is_err());
}

#[test]
fn oracle_empty_set_and_single_point() {
    let p = ZXiParams::real(0.3, 0.6, 0.35).unwrap();
    let fam = Family::ZXi(p);
    let budget = OracleBudget { size: 28, tol: 1e-9 };
    let v = correlation_oracle(&fam, &PointSet::default(), Embedding::Underline, budget).unwrap();
    assert!((v.value - 1.0).abs() < 1e-9);
    let half = PointSet::from_values(&[0.5]).unwrap();
    let v = correlation_oracle(&fam, &half, Embedding::Underline, budget).unwrap();
    // Pinned by this enumeration.
    assert!((v.value - 0.0598872199617570).abs() < 1e-12);
    let too_small = OracleBudget { size: 5, tol: 1e-9 };
    assert!(matches!(
        correlation_oracle(&fam, &half, Embedding::Underline, too_small),
        Err(MeasureError::TailTooLarge { .. })
    ));
}

#[test]
fn oracle_embeddings_are_complementary() {
    // X = underline X symmetric-difference Z'_-: on a positive point both agree,
    // on a negative point they are complementary.
    let p = ZXiParams::new(c(0.4, 0.7), c(0.4, -0.7), 0.35).unwrap();
    let u = Enumeration::z_measure(&p, 24, Embedding::Underline).unwrap();
    let f = Enumeration::z_measure(&p, 24, Embedding::Frobenius).unwrap();
    let pos = PointSet::from_values(&[1.5]).unwrap();
    let neg = PointSet::from_values(&[-2.5]).unwrap();
    assert!((u.rho(&pos).value - f.rho(&pos).value).abs() < 1e-14);
    assert!((u.rho(&neg).value + f.rho(&neg).value - u.mass()).abs() < 1e-14);
}

#[test]
fn zw_single_particle_oracle() {
    let p = ZWParams::new(c(1.5, 0.5), c(1.5, -0.5), c(1.5, 0.3), c(1.5, -0.3), 1).unwrap();
    let fam = SignatureFamily::ZW(p);
    let en = Enumeration::signatures(&fam, 30, Embedding::Underline).unwrap();
    let sigs = enum_signatures(1, 30, false).unwrap();
    let norm: f64 = sigs.iter().map(|s| zw_weight(s, &p).unwrap().value()).sum();
    for x in [-0.5, 0.5, 1.5] {
        let s = Signature::new(vec![(x + 0.5) as i64]).unwrap();
        let want = zw_weight(&s, &p).unwrap().value() / norm;
        let got = en.rho(&PointSet::from_values(&[x]).unwrap()).value;
        assert!(rel(got, want) < 1e-12);
    }
    assert!(en.tail_bound() < 1e-4);
}

#[test]
fn particle_count_of_signature_measures() {
    let p = ZWParams::real(0.3, 0.6, 1.2, 1.5, 2).unwrap();
    let en = Enumeration::signatures(&SignatureFamily::ZW(p), 20, Embedding::Underline).unwrap();
    let window: Vec<HalfInteger> = (-49..=49).step_by(2).map(|t| HalfInteger::from_twice(t).unwrap()).collect();
    assert!((en.expected_count(&window) - 2.0).abs() < 1e-12);
}

#[test]
fn normalizing_constant_converges() {
    let p = ZWParams::real(0.3, 0.6, 1.2, 1.5, 2).unwrap();
    let nc = zw_const(&p, 1e-4).unwrap();
    assert!(nc.last_shell < 1e-4);
    assert!(nc.bound >= 4);
    let p = ZABParams::new(c(0.8, 0.0), c(0.9, 0.0), 0.5, 0.25, 2).unwrap();
    let nc = signature_const(&SignatureFamily::ZAB(p), 1e-3).unwrap();
    assert!(nc.last_shell < 1e-3 && nc.ln_value.is_finite());
}

proptest! {
    #[test]
    fn principal_weights_positive(re in -2.0f64..2.0, im in 0.05f64..2.0, xi in 0.05f64..0.95, k in 0usize..30) {
        let p = ZXiParams::new(c(re, im), c(re, -im), xi).unwrap();
        let l = &zmeasure::combinatorics::partitions_up_to(6).unwrap()[k % 30];
        let w = z_weight(&p, l).unwrap();
        prop_assert!(w.value() > 0.0);
        prop_assert!(w.imaginary_residue() < 1e-10);
    }
}
