use num_complex::Complex64 as C64;
use zmeasure::combinatorics::YoungDiagram;
use zmeasure::kernels::{KernelFamily, KernelId, Signs};
use zmeasure::limits::*;
use zmeasure::measures::ZWParams;
use zmeasure::opkernels::zw_kernel;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn kid(f: KernelFamily, z: f64, zp: f64, xi: Option<f64>) -> KernelId {
    KernelId::new(f, c(z), c(zp), xi).unwrap()
}

#[test]
fn default_scans_converge() {
    for spec in default_scans(0.3, 0.6).unwrap() {
        let t = run_scan(&spec).unwrap();
        assert_eq!(t.rows.len(), spec.ladder.len() * spec.probes.len());
        if spec.is_exploratory() {
            assert_eq!(t.verdict, Verdict::Exploratory);
        } else {
            assert_eq!(t.verdict, Verdict::Decreasing, "{}", t.label);
        }
        if spec.target.family.is_tail() {
            if !spec.is_exploratory() {
                assert!(t.final_error < 1e-2, "{}: {}", t.label, t.final_error);
            }
        }
    }
}

#[test]
fn signed_tail_scans() {
    let probes = vec![(0.0, 0.7), (0.3, 1.5), (-0.5, 0.5)];
    for sg in [Signs::PP, Signs::PM, Signs::MP, Signs::MM] {
        let target = kid(KernelFamily::TailSecond, 0.3, 0.6, None).with_signs(sg);
        for (source, coupling, ladder) in [
            (kid(KernelFamily::GammaSecond, 0.3, 0.6, None), Coupling::TailS0Ladder, vec![4.0, 6.0, 8.0]),
            (
                kid(KernelFamily::HypergeomSecond, 0.3, 0.6, Some(0.5)),
                Coupling::CoupledXiS0 { eps: 0.3 },
                vec![2.0, 3.0, 4.0],
            ),
        ] {
            let spec = ScanSpec { source: Source::Kernel(source), target, coupling, probes: probes.clone(), ladder };
            let t = run_scan(&spec).unwrap();
            assert_eq!(t.verdict, Verdict::Decreasing, "{sg} {}", t.label);
            assert!(t.final_error < 1e-2);
        }
    }
    for sg in [Signs::PM, Signs::MP] {
        let spec = ScanSpec {
            source: Source::Kernel(kid(KernelFamily::LLimit, 0.3, 0.6, None)),
            target: kid(KernelFamily::LTail, 0.3, 0.6, None).with_signs(sg),
            coupling: Coupling::TailS0Ladder,
            probes: probes.clone(),
            ladder: vec![4.0, 6.0, 8.0],
        };
        assert_eq!(run_scan(&spec).unwrap().verdict, Verdict::Decreasing);
    }
}

#[test]
fn tail_target_is_ladder_independent() {
    let spec = ScanSpec {
        source: Source::Kernel(kid(KernelFamily::GammaFirst, 0.3, 0.6, None)),
        target: kid(KernelFamily::TailFirst, 0.3, 0.6, None),
        coupling: Coupling::TailS0Ladder,
        probes: vec![(0.0, 0.7)],
        ladder: vec![4.0, 8.0],
    };
    let t = run_scan(&spec).unwrap();
    assert_eq!(t.rows[0].target, t.rows[1].target);
}

#[test]
fn coupling_validation() {
    let base = ScanSpec {
        source: Source::Kernel(kid(KernelFamily::HypergeomFirst, 0.3, 0.6, Some(0.5))),
        target: kid(KernelFamily::TailFirst, 0.3, 0.6, None),
        coupling: Coupling::CoupledXiS0 { eps: 0.8 },
        probes: vec![(0.0, 0.7)],
        ladder: vec![2.0],
    };
    assert!(matches!(run_scan(&base), Err(ScanError::Coupling(_))));
    let ok = ScanSpec { coupling: Coupling::CoupledXiS0 { eps: 0.69 }, ..base.clone() };
    assert!(ok.validate().is_ok());
    let wrong = ScanSpec { coupling: Coupling::TailS0Ladder, ..base.clone() };
    assert!(wrong.validate().is_err());
    let xi = ScanSpec {
        coupling: Coupling::XiLadder,
        target: kid(KernelFamily::GammaFirst, 0.3, 0.6, None),
        ladder: vec![1.2],
        ..base.clone()
    };
    assert!(xi.validate().is_err());
    let empty = ScanSpec { ladder: vec![], ..base };
    assert!(empty.validate().is_err());
}

#[test]
fn coupling_names_round_trip() {
    for c in [Coupling::XiLadder, Coupling::NLadder, Coupling::TailS0Ladder] {
        assert_eq!(c.name().parse::<Coupling>().unwrap(), c);
    }
    assert_eq!("coupled_xi_s0:0.3".parse::<Coupling>().unwrap(), Coupling::CoupledXiS0 { eps: 0.3 });
    assert!("coupled_xi_s0:x".parse::<Coupling>().is_err());
    assert!("ladder".parse::<Coupling>().is_err());
}

#[test]
fn density_profiles() {
    let g = kid(KernelFamily::GammaFirst, 0.3, 0.6, None);
    let t = density_profile(&g, &[10.5, 20.5, 40.5]).unwrap();
    let s = |v: f64| (std::f64::consts::PI * v).sin();
    let want = -0.3 * s(0.3) * s(0.6) / (std::f64::consts::PI * s(-0.3));
    assert!((t.constant - want).abs() < 1e-14);
    assert_eq!(t.verdict, Verdict::Decreasing);
    let g2 = kid(KernelFamily::GammaSecond, -0.3, -0.6, None);
    let t2 = density_profile(&g2, &[-10.5, -20.5, -40.5]).unwrap();
    assert!((t2.constant - want).abs() < 1e-14);
    assert_eq!(t2.verdict, Verdict::Decreasing);
    assert_eq!(density_profile(&g, &[3.5]).unwrap().rows.len(), 1);
}

#[test]
fn cross_decay_and_reversal() {
    let (z, zp, w, wp) = (c(0.3), c(0.6), c(0.2), c(0.5));
    let offsets = [-1.5, -0.5, 0.5, 1.5];
    let t = cross_decay(z, zp, w, wp, &[20, 40, 80], &offsets).unwrap();
    assert_eq!(t.verdict, Verdict::Decreasing, "{:?}", t.rows);
    assert_eq!(cross_decay(z, zp, w, wp, &[10], &offsets).unwrap().rows.len(), 1);
    let p = ZWParams::new(z, zp, w, wp, 6).unwrap();
    let q = p.swapped();
    for (x, y) in [(0.5, 1.5), (-2.5, 3.5), (-6.5, -5.5)] {
        let a = zw_kernel(x, y, &p).unwrap();
        let b = zw_kernel(-6.0 - x, -6.0 - y, &q).unwrap();
        assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
    }
}

#[test]
fn plancherel_degeneration() {
    let ds = [YoungDiagram::empty(), YoungDiagram::new(vec![1]).unwrap(), YoungDiagram::new(vec![2, 1]).unwrap()];
    let t = plancherel_scan(1.5, &[1e3, 1e4], &ds).unwrap();
    assert_eq!(t.verdict, Verdict::Decreasing);
    assert!(t.rows.iter().rev().take(3).all(|r| r.error < 1e-3));
}
