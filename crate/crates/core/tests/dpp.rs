use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zmeasure::combinatorics::{PointSet, YoungDiagram};
use zmeasure::dpp::*;
use zmeasure::kernels::{a_kernel, hyperg_kernel, symmetric_window, Form, KernelFamily, KernelId};
use zmeasure::measures::{correlation_oracle, z_weight, Embedding, Family, OracleBudget, ZXiParams};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn window(points: &[f64], m: DMatrix<f64>) -> WindowMatrix {
    WindowMatrix::new(points.to_vec(), m).unwrap()
}

fn block_l(points: &[f64], a: impl Fn(usize, usize) -> f64) -> WindowMatrix {
    let n = points.len();
    let m = DMatrix::from_fn(n, n, |i, j| match (points[i] > 0.0, points[j] > 0.0) {
        (true, false) => a(i, j),
        (false, true) => -a(j, i),
        _ => 0.0,
    });
    window(points, m)
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.amax()
}

#[test]
fn trivial_determinants() {
    let k = window(&[-0.5, 0.5], DMatrix::from_row_slice(2, 2, &[0.3, 0.1, 0.1, 0.7]));
    assert_eq!(corr_det(&k, &PointSet::default()).unwrap(), 1.0);
    assert_eq!(corr_det(&k, &PointSet::from_values(&[0.5]).unwrap()).unwrap(), 0.7);
    assert!((corr_det(&k, &PointSet::from_values(&[-0.5, 0.5]).unwrap()).unwrap() - 0.2).abs() < 1e-15);
    assert_eq!(corr_det(&k, &PointSet::from_values(&[1.5]).unwrap()), Err(DppError::OutsideWindow(1.5)));
}

#[test]
fn window_validation() {
    assert!(WindowMatrix::new(vec![0.5, -0.5], DMatrix::zeros(2, 2)).is_err());
    assert!(WindowMatrix::new(vec![0.5, 1.0], DMatrix::zeros(2, 2)).is_err());
    assert!(WindowMatrix::new(vec![0.5], DMatrix::zeros(2, 2)).is_err());
    let k = window(&[-0.5, 0.5], DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]));
    assert!(!k.is_symmetric());
}

#[test]
fn z_measure_window_matches_oracle() {
    let p = ZXiParams::real(0.3, 0.6, 0.35).unwrap();
    let pts = PointSet::from_values(&[0.5, 1.5]).unwrap();
    let budget = OracleBudget { size: 28, tol: 1e-8 };
    for (form, emb, fam) in [
        (Form::First, Embedding::Underline, KernelFamily::HypergeomFirst),
        (Form::Second, Embedding::Frobenius, KernelFamily::HypergeomSecond),
    ] {
        let id = KernelId::new(fam, p.z, p.zp, Some(p.xi)).unwrap();
        let k = WindowMatrix::from_kernel(&id, &symmetric_window(10)).unwrap();
        let det = corr_det(&k, &pts).unwrap();
        let o = correlation_oracle(&Family::ZXi(p), &pts, emb, budget).unwrap();
        assert!((det - o.value).abs() / o.value.abs() < 1e-6, "{form:?}: {det} vs {}", o.value);
    }
}

#[test]
fn scalar_block_transform() {
    let a = 0.7;
    let l = window(&[-0.5, 0.5], DMatrix::from_row_slice(2, 2, &[0.0, -a, a, 0.0]));
    let k = k_from_l(&l).unwrap();
    // Rows ordered (-1/2, 1/2): the H_+ row is the second one.
    let d = 1.0 + a * a;
    let want = DMatrix::from_row_slice(2, 2, &[a * a, -a, a, a * a]) / d;
    assert!(max_abs(&(k.entries() - &want)) < 1e-15);
    let (kc, ck) = circ_blocks(&k).unwrap();
    let want_c = DMatrix::from_row_slice(2, 2, &[1.0, a, a, a * a]) / d;
    assert!(max_abs(&(kc.entries() - &want_c)) < 1e-15);
    assert!(max_abs(&(kc.entries() * kc.entries() - kc.entries())) < 1e-15);
    assert!(max_abs(&(ck.entries() * kc.entries())) < 1e-15);
    let zero = window(&[-0.5, 0.5], DMatrix::zeros(2, 2));
    assert_eq!(k_from_l(&zero).unwrap().entries(), &DMatrix::<f64>::zeros(2, 2));
}

fn check_blocks(l: &WindowMatrix, tol: f64) {
    let k = k_from_l(l).unwrap();
    let (kc, ck) = circ_blocks(&k).unwrap();
    let n = l.len();
    let id = DMatrix::<f64>::identity(n, n);
    assert!(max_abs(&(kc.entries() + ck.entries() - &id)) < tol);
    assert!(max_abs(&(kc.entries() * ck.entries())) < tol);
    assert!(max_abs(&(ck.entries() * kc.entries())) < tol);
    assert!(max_abs(&(kc.entries() * kc.entries() - kc.entries())) < tol);
    assert!(max_abs(&(kc.entries() - kc.entries().transpose())) < tol);
    for ev in kc.entries().clone().symmetric_eigenvalues().iter() {
        assert!(ev.abs() < 1e-10 || (ev - 1.0).abs() < 1e-10, "{ev}");
    }
}

#[test]
fn block_projections_on_random_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pts = symmetric_window(20);
    for _ in 0..5 {
        let a = DMatrix::from_fn(20, 20, |_, _| rng.random_range(-1.0..1.0));
        check_blocks(&block_l(&pts, |i, j| a[(i, j)]), 1e-12);
    }
}

#[test]
fn block_projections_on_a_kernel_windows() {
    for (z, zp, xi) in [(c(0.3), c(0.6), 0.5), (C64::new(0.4, 0.7), C64::new(0.4, -0.7), 0.8)] {
        for size in [20, 60, 120] {
            let pts = symmetric_window(size);
            let l = block_l(&pts, |i, j| a_kernel(pts[i], pts[j], z, zp, Some(xi)).unwrap());
            check_blocks(&l, 1e-12);
        }
    }
}

#[test]
fn transform_round_trip() {
    let pts = symmetric_window(30);
    let l = block_l(&pts, |i, j| a_kernel(pts[i], pts[j], c(0.3), c(0.6), Some(0.5)).unwrap());
    let k = k_from_l(&l).unwrap();
    let back = l_from_k(&k).unwrap();
    assert!(max_abs(&(back.entries() - l.entries())) < 1e-10);
    let cond = resolvent_condition(&l);
    assert!((1.0..1e3).contains(&cond), "{cond}");
}

#[test]
fn finite_window_resolvent_matches_second_form() {
    let p = ZXiParams::real(0.3, 0.6, 0.5).unwrap();
    let pts = symmetric_window(80);
    let id = KernelId::new(KernelFamily::LXi, p.z, p.zp, Some(p.xi)).unwrap();
    let k = k_from_l(&WindowMatrix::from_kernel(&id, &pts).unwrap()).unwrap();
    let mut worst: f64 = 0.0;
    for (i, &x) in pts.iter().enumerate() {
        for (j, &y) in pts.iter().enumerate() {
            if x.abs() < 20.0 && y.abs() < 20.0 {
                let want = hyperg_kernel(Form::Second, x, y, &p).unwrap();
                worst = worst.max((k.entries()[(i, j)] - want).abs());
            }
        }
    }
    assert!(worst < 1e-8, "{worst}");
}

#[test]
fn measure_from_finite_l() {
    let p = ZXiParams::real(0.3, 0.6, 0.5).unwrap();
    let pts = symmetric_window(80);
    let id = KernelId::new(KernelFamily::LXi, p.z, p.zp, Some(p.xi)).unwrap();
    let l = WindowMatrix::from_kernel(&id, &pts).unwrap();
    let empty = measure_from_l(&l, &YoungDiagram::empty(), 1e-6).unwrap();
    assert!((empty - (1.0 - p.xi).powf(p.zz())).abs() < 1e-10);
    for parts in [vec![1], vec![2, 1], vec![3, 1, 1]] {
        let lambda = YoungDiagram::new(parts).unwrap();
        let got = measure_from_l(&l, &lambda, 1e-6).unwrap();
        let want = z_weight(&p, &lambda).unwrap().value();
        assert!((got - want).abs() / want < 1e-8);
    }
    let small = WindowMatrix::from_kernel(&id, &symmetric_window(6)).unwrap();
    assert!(matches!(measure_from_l(&small, &YoungDiagram::empty(), 1e-6), Err(DppError::WindowTooSmall { .. })));
}

#[test]
fn complement_kernel_matches_direct_summation() {
    let pts = [-1.5, -0.5, 0.5];
    let l = block_l(&pts, |i, j| a_kernel(pts[i], pts[j], c(0.3), c(0.6), Some(0.6)).unwrap());
    let (kc, _) = circ_blocks(&k_from_l(&l).unwrap()).unwrap();
    let n = pts.len();
    let den = (DMatrix::<f64>::identity(n, n) + l.entries()).determinant();
    // Probabilities of all subsets, then transport by X -> X xor {negative points}.
    let mut prob = vec![0.0; 1 << n];
    for mask in 0..(1usize << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let sub = DMatrix::from_fn(idx.len(), idx.len(), |a, b| l.entries()[(idx[a], idx[b])]);
        let flipped = mask ^ 0b011;
        prob[flipped] = if idx.is_empty() { 1.0 } else { sub.determinant() } / den;
    }
    for ymask in 1..(1usize << n) {
        let direct: f64 = (0..(1usize << n)).filter(|m| m & ymask == ymask).map(|m| prob[m]).sum();
        let ys: Vec<f64> = (0..n).filter(|i| ymask >> i & 1 == 1).map(|i| pts[i]).collect();
        let det = corr_det(&kc, &PointSet::from_values(&ys).unwrap()).unwrap();
        assert!((det - direct).abs() < 1e-13, "{ys:?}");
    }
}

#[test]
fn projection_residual_trends() {
    let exact = window(&[-0.5, 0.5], DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, 0.5]));
    assert!(projection_residual(&exact) < 1e-15);
    let hyp = KernelId::new(KernelFamily::HypergeomFirst, c(0.3), c(0.6), Some(0.5)).unwrap();
    let r: Vec<f64> = [40, 80]
        .iter()
        .map(|&n| projection_residual(&WindowMatrix::from_kernel(&hyp, &symmetric_window(n)).unwrap()))
        .collect();
    assert!(r[1] < r[0], "{r:?}");
    let gam = KernelId::new(KernelFamily::GammaFirst, c(0.2), c(0.1), None).unwrap();
    let r: Vec<f64> = [40, 80, 160]
        .iter()
        .map(|&n| projection_residual_within(&WindowMatrix::from_kernel(&gam, &symmetric_window(n)).unwrap(), 10.0))
        .collect();
    assert!(r[0] > r[1] && r[1] > r[2], "{r:?}");
}

#[test]
fn sampler_degenerate_kernels() {
    let pts = [-1.5, -0.5, 0.5, 1.5];
    let zero = window(&pts, DMatrix::zeros(4, 4));
    assert!(sample_dpp(&zero, 1, 50).unwrap().draws.iter().all(|d| d.is_empty()));
    let mut e = DMatrix::zeros(4, 4);
    e[(2, 2)] = 1.0;
    let b = sample_dpp(&window(&pts, e), 1, 50).unwrap();
    assert!(b.draws.iter().all(|d| d.values() == vec![0.5]));
    let bad = window(&pts, DMatrix::identity(4, 4) * 1.1);
    assert!(matches!(sample_dpp(&bad, 1, 1), Err(DppError::Spectrum { .. })));
}

#[test]
fn sampler_is_reproducible() {
    let id = KernelId::new(KernelFamily::GammaFirst, c(0.3), c(0.6), None).unwrap();
    let k = WindowMatrix::from_kernel(&id, &symmetric_window(12)).unwrap();
    let a = sample_dpp(&k, 42, 200).unwrap();
    let b = sample_dpp(&k, 42, 200).unwrap();
    let c = sample_dpp(&k, 43, 200).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.draws, c.draws);
    let tail = sample_dpp(&k, 42, 200).unwrap();
    assert_eq!(tail.draws[150], a.draws[150]);
}

#[test]
fn sampler_matches_correlations() {
    let id = KernelId::new(KernelFamily::GammaFirst, c(0.3), c(0.6), None).unwrap();
    let pts = symmetric_window(10);
    let k = WindowMatrix::from_kernel(&id, &pts).unwrap();
    let n = 5000;
    let b = sample_dpp(&k, 7, n).unwrap();
    for (i, &x) in pts.iter().enumerate() {
        let p = k.entries()[(i, i)];
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((b.frequency(&[x]) - p).abs() < 4.0 * se, "{x}");
    }
    for (x, y) in [(-0.5, 0.5), (-2.5, 1.5), (3.5, 4.5)] {
        let p = corr_det(&k, &PointSet::from_values(&[x, y]).unwrap()).unwrap();
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((b.frequency(&[x, y]) - p).abs() < 4.0 * se);
    }
}
