//! Closed-form correlation kernels: P and Q, the discrete hypergeometric kernel, the
//! gamma and psi kernels, the A- and L-kernels, the circ transform, the tail kernels
//! and their Fourier symbols.

use std::f64::consts::PI;
use std::fmt;
use std::num::NonZeroUsize;
use std::str::FromStr;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::measures::{require_kernel_pair, MeasureError, ZXiParams};
use crate::specfun::{digamma, hyp2f1_reg_xi, ln_gamma_unchecked, sin_pi, trigamma, SpecError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("{0}")]
    Domain(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

type Result<T> = std::result::Result<T, KernelError>;

/// Step of the diagonal interpolation.
const DIAG_STEP: f64 = 1e-3;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn lg(z: C64) -> C64 {
    ln_gamma_unchecked(z)
}

/// Real log of the positive square root of exp(l); fails if exp(l) is not positive.
fn half_log_positive(l: C64) -> Result<f64> {
    if l.im.cos() < 0.5 {
        return Err(KernelError::Domain(format!("Gamma product with phase {} is not positive", l.im)));
    }
    Ok(0.5 * l.re)
}

/// (P(x), Q(x)) as complex numbers; the imaginary parts are rounding residue.
pub fn pq_complex(x: f64, z: C64, zp: C64, xi: f64) -> Result<(C64, C64)> {
    let zz = (z * zp).re;
    let sum = (z + zp).re;
    let half = half_log_positive(lg(z + x + 0.5) + lg(zp + x + 0.5) - lg(z + 1.0) - lg(zp + 1.0))?;
    let (lxi, l1m) = (xi.ln(), (1.0 - xi).ln());
    let f1 = hyp2f1_reg_xi(-z, -zp, c(x + 0.5), xi)?;
    let f2 = hyp2f1_reg_xi(1.0 - z, 1.0 - zp, c(x + 1.5), xi)?;
    let lp = 0.25 * zz.ln() + 0.5 * x * lxi + 0.5 * sum * l1m + half + f1.ln_scale;
    let lq = 0.75 * zz.ln() + 0.5 * (x + 1.0) * lxi + (0.5 * sum - 1.0) * l1m + half + f2.ln_scale;
    Ok((f1.mant * lp.exp(), f2.mant * lq.exp()))
}

fn pq_raw(x: f64, z: C64, zp: C64, xi: f64) -> Result<(f64, f64)> {
    let (p, q) = pq_complex(x, z, zp, xi)?;
    Ok((p.re, q.re))
}

pub fn p_func(x: f64, params: &ZXiParams) -> Result<f64> {
    params.require_kernel_class()?;
    Ok(pq_raw(x, params.z, params.zp, params.xi)?.0)
}

pub fn q_func(x: f64, params: &ZXiParams) -> Result<f64> {
    params.require_kernel_class()?;
    Ok(pq_raw(x, params.z, params.zp, params.xi)?.1)
}

/// (dP/dxi, dQ/dxi) at x.
pub fn dxi_pq(x: f64, params: &ZXiParams) -> Result<(f64, f64)> {
    params.require_kernel_class()?;
    let (p, q) = pq_raw(x, params.z, params.zp, params.xi)?;
    let xi = params.xi;
    let alpha = x / (2.0 * xi) - (params.z + params.zp).re / (2.0 * (1.0 - xi));
    let beta = params.zz().sqrt() / (xi.sqrt() * (1.0 - xi));
    Ok((alpha * p - beta * q, -alpha * q + beta * p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    First,
    Second,
}

fn first_from_pq(x: f64, y: f64, a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 * b.1 - a.1 * b.0) / (x - y)
}

fn legendre() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(20).expect("nonzero")))
}

// K(x, x) = 1 + int_0^xi P Q / s ds on the negative half-line, in v = -ln(1 - s).
// Off the lattice P is huge near negative x, so differences there lose most digits.
fn hyperg_diag_negative(x: f64, z: C64, zp: C64, xi: f64) -> Result<f64> {
    let top = -(-xi).ln_1p();
    let width = 0.25f64.min(2.0 / (x.abs() + 1.0));
    let panels = (top / width).ceil().max(1.0) as usize;
    let h = top / panels as f64;
    let mut failure = None;
    let mut acc = 0.0;
    for k in 0..panels {
        acc += legendre().integrate(k as f64 * h, (k + 1) as f64 * h, |v| {
            let s = -(-v).exp_m1();
            match pq_raw(x, z, zp, s) {
                Ok((p, q)) => p * q / s * (-v).exp(),
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        });
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(1.0 + acc),
    }
}

// Even in t; Richardson on t = h, 2h removes the t^2 term.
fn hyperg_diag(x: f64, z: C64, zp: C64, xi: f64) -> Result<f64> {
    if x < 0.0 {
        return hyperg_diag_negative(x, z, zp, xi);
    }
    let f = |t: f64| -> Result<f64> {
        let a = pq_raw(x + t, z, zp, xi)?;
        let b = pq_raw(x - t, z, zp, xi)?;
        Ok(first_from_pq(x + t, x - t, a, b))
    };
    Ok((4.0 * f(DIAG_STEP)? - f(2.0 * DIAG_STEP)?) / 3.0)
}

fn hyperg_first_raw(x: f64, y: f64, z: C64, zp: C64, xi: f64) -> Result<f64> {
    if x == y {
        return hyperg_diag(x, z, zp, xi);
    }
    Ok(first_from_pq(x, y, pq_raw(x, z, zp, xi)?, pq_raw(y, z, zp, xi)?))
}

fn mixed_from_pq(x: f64, y: f64, a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 * b.0 + a.1 * b.1) / (x - y)
}

/// The discrete hypergeometric kernel in either form.
pub fn hyperg_kernel(form: Form, x: f64, y: f64, params: &ZXiParams) -> Result<f64> {
    params.require_kernel_class()?;
    let (z, zp, xi) = (params.z, params.zp, params.xi);
    match form {
        Form::First => hyperg_first_raw(x, y, z, zp, xi),
        Form::Second => match (x > 0.0, y > 0.0) {
            (true, true) => hyperg_first_raw(x, y, z, zp, xi),
            (false, false) => hyperg_first_raw(-x, -y, -z, -zp, xi),
            (true, false) => Ok(mixed_from_pq(x, y, pq_raw(x, z, zp, xi)?, pq_raw(-y, -z, -zp, xi)?)),
            (false, true) => Ok(mixed_from_pq(x, y, pq_raw(-x, -z, -zp, xi)?, pq_raw(y, z, zp, xi)?)),
        },
    }
}

/// Window matrix of the hypergeometric kernel, evaluating P and Q once per point.
pub fn hyperg_window(form: Form, points: &[f64], params: &ZXiParams) -> Result<DMatrix<f64>> {
    params.require_kernel_class()?;
    let (z, zp, xi) = (params.z, params.zp, params.xi);
    let plus = points.iter().map(|&x| pq_raw(x, z, zp, xi)).collect::<Result<Vec<_>>>()?;
    let minus = match form {
        Form::First => Vec::new(),
        Form::Second => points.iter().map(|&x| pq_raw(-x, -z, -zp, xi)).collect::<Result<Vec<_>>>()?,
    };
    let n = points.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (points[i], points[j]);
            m[(i, j)] = match form {
                Form::First if i == j => hyperg_diag(x, z, zp, xi)?,
                Form::First => first_from_pq(x, y, plus[i], plus[j]),
                Form::Second => match (x > 0.0, y > 0.0) {
                    (true, true) if i == j => hyperg_diag(x, z, zp, xi)?,
                    (true, true) => first_from_pq(x, y, plus[i], plus[j]),
                    (false, false) if i == j => hyperg_diag(-x, -z, -zp, xi)?,
                    (false, false) => first_from_pq(-x, -y, minus[i], minus[j]),
                    (true, false) => mixed_from_pq(x, y, plus[i], minus[j]),
                    (false, true) => mixed_from_pq(x, y, minus[i], plus[j]),
                },
            };
        }
    }
    Ok(m)
}

/// d/dxi of the first-form hypergeometric kernel, (P(x)Q(y) + Q(x)P(y))/(2 xi).
pub fn dxi_kernel(x: f64, y: f64, params: &ZXiParams) -> Result<f64> {
    params.require_kernel_class()?;
    let (px, qx) = pq_raw(x, params.z, params.zp, params.xi)?;
    let (py, qy) = pq_raw(y, params.z, params.zp, params.xi)?;
    Ok((px * qy + qx * py) / (2.0 * params.xi))
}

/// sin(pi z) sin(pi z') / (pi sin(pi (z - z'))).
fn gamma_prefactor(z: C64, zp: C64) -> C64 {
    sin_pi(z) * sin_pi(zp) / (PI * sin_pi(z - zp))
}

// (e^{l1} - e^{l2}) / sqrt(e^{l1 + l2}), with the positive root.
fn ratio_diff(l1: C64, l2: C64) -> C64 {
    let unit = C64::from_polar(1.0, 0.5 * (l1 + l2).im);
    unit * 2.0 * ((l1 - l2) * 0.5).sinh()
}

fn gamma_first_raw(x: f64, y: f64, z: C64, zp: C64) -> Result<f64> {
    if z == zp {
        let s2 = (sin_pi(z) / PI).powi(2);
        if x == y {
            return Ok((s2 * trigamma(z + x + 0.5)?).re);
        }
        // sign of Gamma(z+x+1/2) Gamma(z+y+1/2), inherited from the z' -> z limit
        let sign = (lg(z + x + 0.5) + lg(z + y + 0.5)).im.cos().signum();
        return Ok(sign * (s2 * (digamma(z + x + 0.5)? - digamma(z + y + 0.5)?)).re / (x - y));
    }
    let s = gamma_prefactor(z, zp);
    if x == y {
        return Ok((s * (digamma(z + x + 0.5)? - digamma(zp + x + 0.5)?)).re);
    }
    let l1 = lg(z + x + 0.5) + lg(zp + y + 0.5);
    let l2 = lg(zp + x + 0.5) + lg(z + y + 0.5);
    Ok((s * ratio_diff(l1, l2)).re / (x - y))
}

// Second form, x > 0 > y.
fn gamma_mixed(x: f64, y: f64, z: C64, zp: C64) -> Result<f64> {
    if z == zp {
        let s = sin_pi(z).re;
        let g = lg(z + x + 0.5) + lg(-z - y + 0.5);
        let sign = g.im.cos().signum();
        let cot = PI * crate::specfun::cos_pi(z) / sin_pi(z);
        let bracket = cot + digamma(z + x + 0.5)? - digamma(-z - y + 0.5)?;
        return Ok(s.abs() * s / (PI * PI) * sign * bracket.re / (x - y));
    }
    let l1 = sin_pi(z).ln() + lg(z + x + 0.5) + lg(-z - y + 0.5);
    let l2 = sin_pi(zp).ln() + lg(zp + x + 0.5) + lg(-zp - y + 0.5);
    Ok((gamma_prefactor(z, zp) * ratio_diff(l1, l2)).re / (x - y))
}

/// The gamma kernel; z = z' selects the psi kernel.
pub fn gamma_kernel(form: Form, x: f64, y: f64, z: C64, zp: C64) -> Result<f64> {
    require_kernel_pair(z, zp)?;
    match form {
        Form::First => gamma_first_raw(x, y, z, zp),
        Form::Second => match (x > 0.0, y > 0.0) {
            (true, true) => gamma_first_raw(x, y, z, zp),
            (false, false) => gamma_first_raw(-x, -y, -z, -zp),
            (true, false) => gamma_mixed(x, y, z, zp),
            (false, true) => Ok(-gamma_mixed(y, x, z, zp)?),
        },
    }
}

/// A(x, y) for x > 0 > y; `xi = None` gives the xi = 1 kernel.
pub fn a_kernel(x: f64, y: f64, z: C64, zp: C64, xi: Option<f64>) -> Result<f64> {
    require_kernel_pair(z, zp)?;
    if !(x > 0.0 && y < 0.0) {
        return Err(KernelError::Domain(format!("A({x}, {y}) needs x > 0 > y")));
    }
    let ss = (sin_pi(z) * sin_pi(zp)).re;
    let mut l = 0.5 * ss.ln() - PI.ln() - (x - y).ln();
    l += half_log_positive(lg(z + x + 0.5) + lg(zp + x + 0.5))? - lg(c(x + 0.5)).re;
    l += half_log_positive(lg(-z - y + 0.5) + lg(-zp - y + 0.5))? - lg(c(-y + 0.5)).re;
    if let Some(xi) = xi {
        l += 0.5 * (x - y) * xi.ln();
    }
    Ok(l.exp())
}

/// The L-kernel: zero diagonal blocks, A and -A^T off the diagonal.
pub fn l_kernel(x: f64, y: f64, z: C64, zp: C64, xi: Option<f64>) -> Result<f64> {
    match (x > 0.0, y > 0.0) {
        (true, false) => a_kernel(x, y, z, zp, xi),
        (false, true) => Ok(-a_kernel(y, x, z, zp, xi)?),
        _ => {
            require_kernel_pair(z, zp)?;
            Ok(0.0)
        }
    }
}

/// Sign map: 1 on the positive half-lattice, (-1)^k at -(k + 1/2).
pub fn epsilon(x: f64) -> f64 {
    if x > 0.0 || ((-x - 0.5).round() as i64) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// K -> K° followed by conjugation with diag(epsilon).
pub fn circ_transform(k: &DMatrix<f64>, points: &[f64]) -> Result<DMatrix<f64>> {
    let n = points.len();
    if k.nrows() != n || k.ncols() != n {
        return Err(KernelError::Domain(format!(
            "{}x{} matrix does not match a window of {n} points",
            k.nrows(),
            k.ncols()
        )));
    }
    if let Some(x) = points.iter().find(|x| (*x - 0.5).fract() != 0.0 || **x == 0.0) {
        return Err(KernelError::Domain(format!("{x} is not a half-integer")));
    }
    let mut out = k.clone();
    for i in 0..n {
        if points[i] < 0.0 {
            for j in 0..n {
                out[(i, j)] = if i == j { 1.0 } else { 0.0 } - k[(i, j)];
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] *= epsilon(points[i]) * epsilon(points[j]);
        }
    }
    Ok(out)
}

/// Which half-line each tail coordinate lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signs(pub bool, pub bool);

impl Signs {
    pub const PP: Signs = Signs(true, true);
    pub const PM: Signs = Signs(true, false);
    pub const MP: Signs = Signs(false, true);
    pub const MM: Signs = Signs(false, false);
}

impl FromStr for Signs {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "++" => Ok(Signs::PP),
            "+-" => Ok(Signs::PM),
            "-+" => Ok(Signs::MP),
            "--" => Ok(Signs::MM),
            _ => Err(KernelError::Domain(format!("sign pair '{s}' is not one of ++, +-, -+, --"))),
        }
    }
}

impl fmt::Display for Signs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |b: bool| if b { '+' } else { '-' };
        write!(f, "{}{}", c(self.0), c(self.1))
    }
}

/// First-form tail kernel as a function of d = s - t.
pub fn tail_first_profile(d: f64, z: C64, zp: C64) -> f64 {
    if z == zp {
        let s2 = (sin_pi(z).re / PI).powi(2);
        return if d == 0.0 { s2 } else { s2 * (0.5 * d) / (0.5 * d).sinh() };
    }
    let s = gamma_prefactor(z, zp);
    if d == 0.0 {
        return (s * (z - zp)).re;
    }
    (s * ((z - zp) * (0.5 * d)).sinh() / (0.5 * d).sinh()).re
}

/// Off-diagonal blocks of the second-form tail kernel, as functions of d = s - t.
pub fn tail_mixed_profile(d: f64, signs: Signs, z: C64, zp: C64) -> f64 {
    let (s, sp) = (sin_pi(z), sin_pi(zp));
    let root = (s * sp).re.sqrt();
    let ch = 2.0 * (0.5 * d).cosh();
    if z == zp {
        return root * s.re * d / (PI * PI * ch);
    }
    let e = ((z - zp) * (0.5 * d)).exp();
    let num = if signs == Signs::PM { s * e - sp / e } else { sp * e - s / e };
    (num * root / (PI * sin_pi(z - zp) * ch)).re
}

pub fn tail_kernel(form: Form, s: f64, t: f64, signs: Signs, z: C64, zp: C64) -> Result<f64> {
    require_kernel_pair(z, zp)?;
    let d = s - t;
    Ok(match (form, signs) {
        (Form::First, _) | (Form::Second, Signs::PP) | (Form::Second, Signs::MM) => tail_first_profile(d, z, zp),
        (Form::Second, sg) => tail_mixed_profile(d, sg, z, zp),
    })
}

/// The tail L-kernel: zero on like-sign blocks.
pub fn l_tail(s: f64, t: f64, signs: Signs, z: C64, zp: C64) -> Result<f64> {
    require_kernel_pair(z, zp)?;
    let d = s - t;
    let root = (sin_pi(z) * sin_pi(zp)).re.sqrt() / PI;
    let half_sum = 0.5 * (z + zp).re;
    let ch = 2.0 * (0.5 * d).cosh();
    Ok(match signs {
        Signs::PM => root * (half_sum * d).exp() / ch,
        Signs::MP => -root * (-half_sum * d).exp() / ch,
        _ => 0.0,
    })
}

/// The constant c in the density asymptotics K(x, x) ~ c / x; equals the tail diagonal.
pub fn density_constant(z: C64, zp: C64) -> Result<f64> {
    require_kernel_pair(z, zp)?;
    Ok(tail_first_profile(0.0, z, zp))
}

/// Fourier symbols (c, a, b) of the tail kernels.
pub fn fourier_symbols(u: f64, z: C64, zp: C64) -> Result<(C64, C64, C64)> {
    require_kernel_pair(z, zp)?;
    let sum = (z + zp).re;
    if sum.abs() >= 1.0 {
        return Err(KernelError::Hypothesis(format!("|z + z'| = {} must be below 1", sum.abs())));
    }
    let ss = (sin_pi(z) * sin_pi(zp)).re;
    let iu = C64::new(0.0, PI * u);
    let half = 0.5 * PI * sum;
    let cu = ss.sqrt() / (iu - half).cos();
    let den = (iu * 2.0).cos() + (PI * (z - zp)).cos();
    let au = 2.0 * ss / den;
    let bu = 2.0 * ss.sqrt() * (iu + half).cos() / den;
    Ok((cu, au, bu))
}

/// Trapezoid-rule transform of the (+,-) tail L-profile, int L(d) e^{-iud} dd,
/// halving the step until two passes agree.
pub fn fourier_quadrature(u: f64, z: C64, zp: C64, tol: f64) -> Result<C64> {
    require_kernel_pair(z, zp)?;
    let sum = (z + zp).re;
    if sum.abs() >= 1.0 {
        return Err(KernelError::Hypothesis(format!("|z + z'| = {} must be below 1", sum.abs())));
    }
    let f = |d: f64| l_tail(d, 0.0, Signs::PM, z, zp).map(|v| v * C64::new(0.0, -u * d).exp());
    // The profile decays like exp(-(1/2 - |z + z'|/2)|d|).
    let rate = 0.5 - 0.5 * sum.abs();
    let half_width = (40.0 / rate).min(4000.0);
    let mut h = 0.25;
    let mut prev: Option<C64> = None;
    while h > 1e-4 {
        let n = (half_width / h).ceil() as i64;
        let mut acc = C64::new(0.0, 0.0);
        for k in -n..=n {
            acc += f(k as f64 * h)?;
        }
        let val = acc * h;
        if let Some(p) = prev {
            if (val - p).norm() < tol {
                return Ok(val);
            }
        }
        prev = Some(val);
        h *= 0.5;
    }
    Err(KernelError::Domain("Fourier quadrature did not settle".into()))
}

/// Kernel families addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelFamily {
    HypergeomFirst,
    HypergeomSecond,
    GammaFirst,
    GammaSecond,
    Psi,
    AXi,
    ALimit,
    LXi,
    LLimit,
    TailFirst,
    TailSecond,
    LTail,
}

impl KernelFamily {
    pub const ALL: [KernelFamily; 12] = [
        KernelFamily::HypergeomFirst,
        KernelFamily::HypergeomSecond,
        KernelFamily::GammaFirst,
        KernelFamily::GammaSecond,
        KernelFamily::Psi,
        KernelFamily::AXi,
        KernelFamily::ALimit,
        KernelFamily::LXi,
        KernelFamily::LLimit,
        KernelFamily::TailFirst,
        KernelFamily::TailSecond,
        KernelFamily::LTail,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelFamily::HypergeomFirst => "hypergeom_first",
            KernelFamily::HypergeomSecond => "hypergeom_second",
            KernelFamily::GammaFirst => "gamma_first",
            KernelFamily::GammaSecond => "gamma_second",
            KernelFamily::Psi => "psi",
            KernelFamily::AXi => "A_xi",
            KernelFamily::ALimit => "A_limit",
            KernelFamily::LXi => "L_xi",
            KernelFamily::LLimit => "L_limit",
            KernelFamily::TailFirst => "tail_first",
            KernelFamily::TailSecond => "tail_second",
            KernelFamily::LTail => "L_tail",
        }
    }

    pub fn needs_xi(self) -> bool {
        matches!(
            self,
            KernelFamily::HypergeomFirst | KernelFamily::HypergeomSecond | KernelFamily::AXi | KernelFamily::LXi
        )
    }

    pub fn is_tail(self) -> bool {
        matches!(self, KernelFamily::TailFirst | KernelFamily::TailSecond | KernelFamily::LTail)
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelFamily {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self> {
        KernelFamily::ALL
            .iter()
            .copied()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| KernelError::Domain(format!("unknown kernel family '{s}'")))
    }
}

/// A kernel family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelId {
    pub family: KernelFamily,
    pub z: C64,
    pub zp: C64,
    /// Required by the xi-dependent families, ignored otherwise.
    pub xi: Option<f64>,
    /// Half-line labels of the tail coordinates; ignored by lattice kernels.
    pub signs: Signs,
}

impl KernelId {
    pub fn new(family: KernelFamily, z: C64, zp: C64, xi: Option<f64>) -> Result<Self> {
        require_kernel_pair(z, zp)?;
        if family.needs_xi() {
            ZXiParams::new(z, zp, xi.ok_or_else(|| KernelError::Domain(format!("{family} needs xi")))?)?;
        }
        if family == KernelFamily::Psi && z != zp {
            return Err(KernelError::Domain("the psi kernel needs z = z'".into()));
        }
        Ok(KernelId { family, z, zp, xi, signs: Signs::PP })
    }

    pub fn with_signs(mut self, signs: Signs) -> Self {
        self.signs = signs;
        self
    }

    /// True when the |z + z'| < 1 condition behind the projection property holds.
    pub fn projection_hypothesis(&self) -> bool {
        (self.z + self.zp).re.abs() < 1.0
    }

    fn zxi(&self) -> Result<ZXiParams> {
        let xi = self.xi.ok_or_else(|| KernelError::Domain(format!("{} needs xi", self.family)))?;
        Ok(ZXiParams::new(self.z, self.zp, xi)?)
    }

    /// Kernel value; tail families read (x, y) as (s, t) together with `signs`.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let (z, zp) = (self.z, self.zp);
        match self.family {
            KernelFamily::HypergeomFirst => hyperg_kernel(Form::First, x, y, &self.zxi()?),
            KernelFamily::HypergeomSecond => hyperg_kernel(Form::Second, x, y, &self.zxi()?),
            KernelFamily::GammaFirst | KernelFamily::Psi => gamma_kernel(Form::First, x, y, z, zp),
            KernelFamily::GammaSecond => gamma_kernel(Form::Second, x, y, z, zp),
            KernelFamily::AXi => a_kernel(x, y, z, zp, self.xi),
            KernelFamily::ALimit => a_kernel(x, y, z, zp, None),
            KernelFamily::LXi => l_kernel(x, y, z, zp, self.xi),
            KernelFamily::LLimit => l_kernel(x, y, z, zp, None),
            KernelFamily::TailFirst => tail_kernel(Form::First, x, y, self.signs, z, zp),
            KernelFamily::TailSecond => tail_kernel(Form::Second, x, y, self.signs, z, zp),
            KernelFamily::LTail => l_tail(x, y, self.signs, z, zp),
        }
    }

    /// Window matrix over `points`.
    pub fn window(&self, points: &[f64]) -> Result<DMatrix<f64>> {
        match self.family {
            KernelFamily::HypergeomFirst => hyperg_window(Form::First, points, &self.zxi()?),
            KernelFamily::HypergeomSecond => hyperg_window(Form::Second, points, &self.zxi()?),
            _ => {
                let n = points.len();
                let mut m = DMatrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] = self.eval(points[i], points[j])?;
                    }
                }
                Ok(m)
            }
        }
    }
}

/// The symmetric half-integer window of `size` points (rounded down to even),
/// {-size/2 + 1/2, ..., size/2 - 1/2}.
pub fn symmetric_window(size: usize) -> Vec<f64> {
    let n = (size / 2) as i64;
    (-n..n).map(|k| k as f64 + 0.5).collect()
}
