//! Kernel identity suites for the `identity` subcommand.

use anyhow::Result;
use clap::ValueEnum;
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use zmeasure::dpp::{circ_blocks, k_from_l, WindowMatrix};
use zmeasure::kernels::{
    a_kernel, circ_transform, dxi_kernel, fourier_quadrature, fourier_symbols, hyperg_kernel, hyperg_window,
    symmetric_window, Form, KernelFamily, KernelId,
};
use zmeasure::measures::ZXiParams;

use crate::output::OutputRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Hypergeometric first and second forms related by the circ transform.
    Thm42,
    /// Gamma first and second forms related by the circ transform.
    Thm44,
    /// Analytic xi-derivative against a central difference.
    Prop45,
    /// Block projections built from the A kernel.
    Prop51,
    /// Fourier symbols of the tail kernels.
    Prop66,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm42 => "thm42",
            Suite::Thm44 => "thm44",
            Suite::Prop45 => "prop45",
            Suite::Prop51 => "prop51",
            Suite::Prop66 => "prop66",
        }
    }

    /// (z, z') used when none is given.
    pub fn default_pair(self) -> (f64, f64) {
        match self {
            Suite::Prop66 => (0.2, 0.1),
            _ => (0.3, 0.6),
        }
    }

    pub fn default_tol(self) -> f64 {
        match self {
            Suite::Thm42 | Suite::Thm44 => 1e-10,
            Suite::Prop45 => 1e-6,
            Suite::Prop51 | Suite::Prop66 => 1e-12,
        }
    }
}

pub struct SuiteConfig {
    pub suite: Suite,
    pub z: C64,
    pub zp: C64,
    pub xi: f64,
    pub window: usize,
    pub tol: Option<f64>,
}

pub const COLUMNS: [&str; 4] = ["check", "max_error", "tolerance", "pass"];

fn push(rec: &mut OutputRecord, check: &str, err: f64, tol: f64) {
    let pass = err <= tol;
    rec.row(vec![check.into(), err.into(), tol.into(), pass.into()]);
    rec.check(check, pass);
}

pub fn run(cfg: &SuiteConfig, rec: &mut OutputRecord) -> Result<()> {
    let tol = cfg.tol.unwrap_or(cfg.suite.default_tol());
    let w = symmetric_window(cfg.window);
    match cfg.suite {
        Suite::Thm42 => {
            let p = ZXiParams::new(cfg.z, cfg.zp, cfg.xi)?;
            let k1 = hyperg_window(Form::First, &w, &p)?;
            let k2 = hyperg_window(Form::Second, &w, &p)?;
            push(rec, "circ(first) = second", (circ_transform(&k1, &w)? - &k2).amax(), tol);
            push(rec, "circ(second) = first", (circ_transform(&k2, &w)? - &k1).amax(), tol);
        }
        Suite::Thm44 => {
            let k1 = KernelId::new(KernelFamily::GammaFirst, cfg.z, cfg.zp, None)?.window(&w)?;
            let k2 = KernelId::new(KernelFamily::GammaSecond, cfg.z, cfg.zp, None)?.window(&w)?;
            push(rec, "circ(first) = second", (circ_transform(&k1, &w)? - &k2).amax(), tol);
            push(rec, "circ(second) = first", (circ_transform(&k2, &w)? - &k1).amax(), tol);
        }
        Suite::Prop45 => {
            let p = ZXiParams::new(cfg.z, cfg.zp, cfg.xi)?;
            let h = 1e-5;
            let (up, down) = (p.with_xi(cfg.xi + h)?, p.with_xi(cfg.xi - h)?);
            let mut worst: f64 = 0.0;
            let n = w.len();
            for k in 0..10.min(n.saturating_sub(1)) {
                let i = k * n / 10;
                let j = (i + 1 + k % 3) % n;
                let (x, y) = (w[i], w[j]);
                let fd =
                    (hyperg_kernel(Form::First, x, y, &up)? - hyperg_kernel(Form::First, x, y, &down)?) / (2.0 * h);
                let an = dxi_kernel(x, y, &p)?;
                worst = worst.max((an - fd).abs() / fd.abs().max(1e-300));
            }
            push(rec, "dK/dxi vs central difference (rel)", worst, tol);
        }
        Suite::Prop51 => {
            let n = w.len();
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    if w[i] > 0.0 && w[j] < 0.0 {
                        let a = a_kernel(w[i], w[j], cfg.z, cfg.zp, Some(cfg.xi))?;
                        m[(i, j)] = a;
                        m[(j, i)] = -a;
                    }
                }
            }
            let k = k_from_l(&WindowMatrix::new(w.clone(), m)?)?;
            let (kc, ck) = circ_blocks(&k)?;
            let (a, b) = (kc.entries(), ck.entries());
            push(rec, "sum is the identity", (a + b - DMatrix::<f64>::identity(n, n)).amax(), tol);
            push(rec, "products vanish", (a * b).amax().max((b * a).amax()), tol);
            push(rec, "first block idempotent", (a * a - a).amax(), tol);
            push(rec, "second block idempotent", (b * b - b).amax(), tol);
        }
        Suite::Prop66 => {
            let (mut ea, mut eb): (f64, f64) = (0.0, 0.0);
            for k in 0..20 {
                let u = -2.0 + 0.21 * k as f64;
                let (c, a, b) = fourier_symbols(u, cfg.z, cfg.zp)?;
                let m = c.norm_sqr();
                ea = ea.max((a - m / (1.0 + m)).norm());
                eb = eb.max((b - c / (1.0 + m)).norm());
            }
            push(rec, "a = |c|^2/(1+|c|^2)", ea, tol);
            push(rec, "b = c/(1+|c|^2)", eb, tol);
            let mut eq: f64 = 0.0;
            for u in [0.0, 0.5, 1.0] {
                let (c, _, _) = fourier_symbols(u, cfg.z, cfg.zp)?;
                eq = eq.max((fourier_quadrature(u, cfg.z, cfg.zp, 1e-10)? - c).norm());
            }
            push(rec, "quadrature = c", eq, cfg.tol.unwrap_or(1e-6));
        }
    }
    Ok(())
}
