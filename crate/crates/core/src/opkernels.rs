//! Christoffel–Darboux kernels of the zw-measures (Askey–Lesky polynomials) and of the
//! z-measures on nonnegative signatures (Wilson–Neretin polynomials).

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::measures::{MeasureError, ZABParams, ZWParams};
use crate::specfun::{ln_gamma_unchecked, sin_pi, terminating_pfq, SpecError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OpError {
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("sigma = z + z' + w + w' vanishes")]
    SigmaZero,
    #[error("{0}")]
    Domain(String),
    #[error("polynomial series at x = {x} loses {digits:.1} digits to cancellation")]
    Precision { x: f64, digits: f64 },
    #[error("series over t diverges: shell mass {shell:e} at T = {t_max}")]
    Divergent { shell: f64, t_max: i64 },
}

type Result<T> = std::result::Result<T, OpError>;

fn lg(z: C64) -> C64 {
    ln_gamma_unchecked(z)
}

fn positive_log(l: C64, what: &str) -> Result<f64> {
    if l.im.cos() < 0.5 {
        return Err(OpError::Domain(format!("{what} has phase {}, expected a positive value", l.im)));
    }
    Ok(l.re)
}

/// value = mant * exp(ln_scale), with a companion x-derivative.
#[derive(Debug, Clone, Copy)]
struct Jet {
    ln_scale: f64,
    val: C64,
    der: C64,
    /// sum |terms| / |sum|
    cond: f64,
}

/// Largest cancellation factor accepted from the polynomial series.
pub const MAX_SERIES_CONDITION: f64 = 1e8;

/// Which of the two Askey–Lesky polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    N,
    NMinus1,
}

/// The monic polynomials p_N, p_{N-1}, their weight f and the norm h_{N-1}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AskeyLesky {
    pub params: ZWParams,
    ln_h: f64,
}

impl AskeyLesky {
    pub fn new(params: ZWParams) -> Result<Self> {
        if params.sigma.norm() < 1e-12 {
            return Err(OpError::SigmaZero);
        }
        let (z, zp, w, wp, s) = (params.z, params.zp, params.w, params.wp, params.sigma);
        let n = params.n as f64;
        let l = lg(C64::new(n, 0.0)) + lg(s + 1.0) + lg(s + 2.0)
            - lg(s + n + 1.0)
            - lg(z + w + 1.0)
            - lg(z + wp + 1.0)
            - lg(zp + w + 1.0)
            - lg(zp + wp + 1.0);
        Ok(AskeyLesky { params, ln_h: positive_log(l, "h_{N-1}")? })
    }

    pub fn norm(&self) -> f64 {
        self.ln_h.exp()
    }

    pub fn ln_norm(&self) -> f64 {
        self.ln_h
    }

    /// ln f(x).
    pub fn ln_weight(&self, x: f64) -> Result<f64> {
        let p = &self.params;
        let n = p.n as f64;
        let l = lg(p.z - x + 0.5) + lg(p.zp - x + 0.5) + lg(p.w + x + n + 0.5) + lg(p.wp + x + n + 0.5);
        positive_log(-l, "f(x)")
    }

    pub fn weight(&self, x: f64) -> Result<f64> {
        Ok(self.ln_weight(x)?.exp())
    }

    // The series cancels badly near x = -N; the reflection
    // p_m(x | z, z', w, w') = (-1)^m p_m(-N - x | w, w', z, z') is well conditioned
    // there. Deep inside (-N, 0) both cancel for large N and an error is returned.
    fn jet(&self, which: Degree, x: f64) -> Result<Jet> {
        let n = self.params.n as f64;
        let direct = series_jet(&self.params, which, x);
        let j = if direct.cond <= MAX_SERIES_CONDITION || x >= 0.0 {
            direct
        } else {
            let r = series_jet(&self.params.swapped(), which, -n - x);
            let m = match which {
                Degree::N => self.params.n,
                Degree::NMinus1 => self.params.n - 1,
            };
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let reflected = Jet { val: r.val * sign, der: -r.der * sign, ..r };
            if reflected.cond < direct.cond {
                reflected
            } else {
                direct
            }
        };
        if j.cond > MAX_SERIES_CONDITION {
            return Err(OpError::Precision { x, digits: j.cond.log10() });
        }
        Ok(j)
    }

    pub fn eval(&self, which: Degree, x: f64) -> Result<f64> {
        let j = self.jet(which, x)?;
        Ok((j.val * j.ln_scale.exp()).re)
    }

    /// Christoffel–Darboux kernel; the diagonal uses exact x-derivatives.
    pub fn kernel(&self, x: f64, y: f64) -> Result<f64> {
        let (nx, n1x) = (self.jet(Degree::N, x)?, self.jet(Degree::NMinus1, x)?);
        let lf = 0.5 * (self.ln_weight(x)? + self.ln_weight(y)?);
        if x == y {
            let num = nx.der * n1x.val - n1x.der * nx.val;
            return Ok((num * (nx.ln_scale + n1x.ln_scale + lf - self.ln_h).exp()).re);
        }
        let (ny, n1y) = (self.jet(Degree::N, y)?, self.jet(Degree::NMinus1, y)?);
        // Common scale: (u_x)_N (u_y)_{N-1} and (u_x)_{N-1} (u_y)_N differ by a known ratio.
        let l1 = nx.ln_scale + n1y.ln_scale;
        let l2 = n1x.ln_scale + ny.ln_scale;
        let top = l1.max(l2);
        let num = nx.val * n1y.val * (l1 - top).exp() - n1x.val * ny.val * (l2 - top).exp();
        Ok((num * (top + lf - self.ln_h).exp()).re / (x - y))
    }
}

// (u)_m * 3F2[-m, a, b; c, 1 - u - m; 1], u = x - z' + 1/2, with d/dx.
fn series_jet(p: &ZWParams, which: Degree, x: f64) -> Jet {
    let (m, a, b, c) = match which {
        Degree::N => (p.n, p.zp + p.w, p.zp + p.wp, p.sigma),
        Degree::NMinus1 => (p.n - 1, p.zp + p.w + 1.0, p.zp + p.wp + 1.0, p.sigma + 2.0),
    };
    let u = x - p.zp + 0.5;
    let mf = m as f64;
    let ln_poch = lg(u + mf) - lg(u);
    let dlog: C64 = (0..m).map(|j| 1.0 / (u + j as f64)).sum();
    let e = 1.0 - u - mf;
    let mut term = C64::new(1.0, 0.0);
    let mut dterm = C64::new(0.0, 0.0);
    let mut s = C64::new(0.0, 0.0);
    let mut ds = C64::new(0.0, 0.0);
    let mut abs = 0.0;
    for k in 0..=m {
        s += term;
        abs += term.norm();
        ds += dterm;
        if k == m {
            break;
        }
        let kf = k as f64;
        let r = (kf - mf) * (a + kf) * (b + kf) / ((c + kf) * (e + kf) * (kf + 1.0));
        // d/dx 1/(e + k) = 1/(e + k)^2, since de/dx = -1.
        let dr = r / (e + kf);
        dterm = dterm * r + term * dr;
        term *= r;
    }
    let phase = C64::from_polar(1.0, ln_poch.im);
    let cond = abs / s.norm().max(f64::MIN_POSITIVE);
    Jet { ln_scale: ln_poch.re, val: phase * s, der: phase * (s * dlog + ds), cond }
}

pub fn zw_kernel(x: f64, y: f64, params: &ZWParams) -> Result<f64> {
    AskeyLesky::new(*params)?.kernel(x, y)
}

/// Result of a truncated lattice sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSum {
    pub value: f64,
    /// Largest |x| (or t) included.
    pub extent: i64,
    /// Share of the last doubling shell.
    pub last_shell: f64,
}

/// Sum of `f` over the half-integers x with |x| <= X, X doubled from 16 until the
/// last shell holds less than `tol` of the running absolute sum.
pub fn lattice_sum(mut f: impl FnMut(f64) -> Result<f64>, tol: f64, cap: i64) -> Result<LatticeSum> {
    let mut value = f(0.5)? + f(-0.5)?;
    let mut abs = value.abs();
    let mut done = 1i64;
    let mut extent = 16i64;
    loop {
        let mut shell = 0.0;
        let mut shell_abs = 0.0;
        for k in done..extent {
            let a = f(k as f64 + 0.5)?;
            let b = f(-(k as f64) - 0.5)?;
            shell += a + b;
            shell_abs += a.abs() + b.abs();
        }
        value += shell;
        abs += shell_abs;
        let last_shell = shell_abs / abs.max(f64::MIN_POSITIVE);
        if last_shell < tol || extent >= cap {
            return Ok(LatticeSum { value, extent, last_shell });
        }
        done = extent;
        extent = (2 * extent).min(cap);
    }
}

/// Orthogonality diagnostics for the Askey–Lesky pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AskeyLeskyReport {
    /// |<p_N, p_{N-1}>_f| / (||p_N|| ||p_{N-1}||).
    pub orthogonality: f64,
    /// ||p_{N-1}||^2 from the sum.
    pub norm_sum: f64,
    pub norm_closed: f64,
    pub trace: f64,
    pub extent: i64,
}

impl AskeyLesky {
    pub fn report(&self, tol: f64, cap: i64) -> Result<AskeyLeskyReport> {
        let mut ext = 0;
        let mut sum_of = |g: &dyn Fn(f64) -> Result<f64>| -> Result<f64> {
            let s = lattice_sum(g, tol, cap)?;
            ext = ext.max(s.extent);
            Ok(s.value)
        };
        let f = |x: f64| self.weight(x);
        let pn = |x: f64| self.eval(Degree::N, x);
        let pn1 = |x: f64| self.eval(Degree::NMinus1, x);
        let inner = sum_of(&|x| Ok(f(x)? * pn(x)? * pn1(x)?))?;
        let nn = sum_of(&|x| Ok(f(x)? * pn(x)? * pn(x)?))?;
        let n1 = sum_of(&|x| Ok(f(x)? * pn1(x)? * pn1(x)?))?;
        let trace = sum_of(&|x| self.kernel(x, x))?;
        Ok(AskeyLeskyReport {
            orthogonality: inner.abs() / (nn * n1).sqrt(),
            norm_sum: n1,
            norm_closed: self.norm(),
            trace,
            extent: ext,
        })
    }
}

/// Wilson–Neretin basis: Q_n((t+alpha)^2), weight w(t), norms H_n and leading
/// coefficients k_n for parameters a_1..a_4 and alpha.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeretinBasis {
    pub a: [C64; 4],
    pub alpha: C64,
}

impl NeretinBasis {
    pub fn sum_a(&self) -> C64 {
        self.a.iter().sum()
    }

    /// Q_n((t+alpha)^2) by its terminating 4F3.
    pub fn eval(&self, n: u32, t: f64) -> Result<C64> {
        let a = self.a;
        let tau = self.alpha + t;
        let lower = [2.0 - a[0] - a[1], 2.0 - a[0] - a[2], 2.0 - a[0] - a[3]];
        let mut pre = C64::new(1.0, 0.0);
        for l in lower {
            for k in 0..n {
                pre *= l + k as f64;
            }
        }
        let nf = n as f64;
        let upper = [nf + 3.0 - self.sum_a(), 1.0 - a[0] + tau, 1.0 - a[0] - tau];
        Ok(pre * terminating_pfq(n, &upper, &lower)?.value)
    }

    /// k_n = (n + 3 - sum a)_n, the coefficient of ((t+alpha)^2)^n.
    pub fn leading(&self, n: u32) -> C64 {
        let base = n as f64 + 3.0 - self.sum_a();
        (0..n).fold(C64::new(1.0, 0.0), |acc, k| acc * (base + k as f64))
    }

    pub fn ln_weight(&self, t: f64) -> C64 {
        let s = self.alpha + t;
        let mut l = s.ln();
        for aj in self.a {
            l -= lg(aj + s) + lg(aj - s);
        }
        l
    }

    pub fn weight(&self, t: f64) -> C64 {
        self.ln_weight(t).exp()
    }

    /// ln H_n, with H_n = -sin(2 pi alpha) prod_{i<j} sin pi(a_i+a_j) n! prod_{i<j} Gamma(2-a_i-a_j+n)
    /// / (2 pi^6 sin(pi sum a) (3 - sum a + 2n) Gamma(3 - sum a + n)).
    pub fn ln_norm(&self, n: u32) -> C64 {
        let a = self.a;
        let s = self.sum_a();
        let nf = n as f64;
        let mut l = (-sin_pi(2.0 * self.alpha)).ln() - (2.0 * PI.powi(6)).ln() - sin_pi(s).ln();
        for i in 0..4 {
            for j in (i + 1)..4 {
                l += sin_pi(a[i] + a[j]).ln() + lg(2.0 - a[i] - a[j] + nf);
            }
        }
        l += lg(C64::new(nf + 1.0, 0.0)) - (3.0 - s + 2.0 * nf).ln() - lg(3.0 - s + nf);
        l
    }

    pub fn norm(&self, n: u32) -> C64 {
        self.ln_norm(n).exp()
    }

    /// sum_{t >= 0} Q_n^2 w(t), truncated by shell doubling.
    pub fn norm_sum(&self, n: u32, tol: f64, cap: i64) -> Result<(C64, i64)> {
        let term = |t: i64| -> Result<C64> {
            let q = self.eval(n, t as f64)?;
            Ok(q * q * self.weight(t as f64))
        };
        let mut total = C64::new(0.0, 0.0);
        let mut done = 0i64;
        let mut extent = 32i64;
        loop {
            let mut shell = C64::new(0.0, 0.0);
            for t in done..extent {
                shell += term(t)?;
            }
            total += shell;
            let frac = shell.norm() / total.norm().max(f64::MIN_POSITIVE);
            if frac < tol {
                return Ok((total, extent));
            }
            if extent >= cap {
                return Err(OpError::Divergent { shell: frac, t_max: extent });
            }
            done = extent;
            extent = (2 * extent).min(cap);
        }
    }
}

/// The map x -> t = N + x - 1/2 and the parameters alpha = eps,
/// (a_1..a_4) = (1 - eps, b + 1 - eps, z + N + eps, z' + N + eps).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RacahIdentification {
    pub params: ZABParams,
    pub basis: NeretinBasis,
}

impl RacahIdentification {
    pub fn new(params: ZABParams) -> Self {
        let (e, n) = (params.eps, params.n as f64);
        let a = [C64::new(1.0 - e, 0.0), C64::new(params.b + 1.0 - e, 0.0), params.z + n + e, params.zp + n + e];
        RacahIdentification { params, basis: NeretinBasis { a, alpha: C64::new(e, 0.0) } }
    }

    pub fn t_of_x(&self, x: f64) -> f64 {
        self.params.n as f64 + x - 0.5
    }

    /// ln g(x); -inf where g vanishes (x <= -N - 1/2).
    pub fn ln_g(&self, x: f64) -> Result<f64> {
        let p = &self.params;
        let (n, e) = (p.n as f64, p.eps);
        if x <= -n - 0.5 {
            return Ok(f64::NEG_INFINITY);
        }
        let c = |v: f64| C64::new(v, 0.0);
        let l = c(n + e + x - 0.5).ln() + lg(c(n + 2.0 * e + x - 0.5)) + lg(c(n + p.a + x + 0.5))
            - lg(c(n + p.b + x + 0.5))
            - lg(c(n + x + 0.5))
            - lg(p.z - x + 0.5)
            - lg(p.zp - x + 0.5)
            - lg(p.z + 2.0 * n + 2.0 * e + x - 0.5)
            - lg(p.zp + 2.0 * n + 2.0 * e + x - 0.5);
        positive_log(l, "g(x)")
    }

    pub fn g(&self, x: f64) -> Result<f64> {
        Ok(self.ln_g(x)?.exp())
    }

    /// g(x) / w(t(x)).
    pub fn proportionality(&self, x: f64) -> Result<C64> {
        Ok((C64::new(self.ln_g(x)?, 0.0) - self.basis.ln_weight(self.t_of_x(x))).exp())
    }
}

/// The kernel of the z-measure on nonnegative signatures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZabKernel {
    pub ident: RacahIdentification,
    wilson: [C64; 4],
    ln_h: f64,
}

impl ZabKernel {
    pub fn new(params: ZABParams) -> Result<Self> {
        params.require_moment()?;
        let ident = RacahIdentification::new(params);
        let basis = &ident.basis;
        let n = params.n as u32;
        let (e, nf) = (params.eps, params.n as f64);
        let wilson = [C64::new(e, 0.0), C64::new(e - params.b, 0.0), 1.0 - params.z - nf - e, 1.0 - params.zp - nf - e];
        // c = g/w at t = 0.
        let ln_c = C64::new(ident.ln_g(0.5 - nf)?, 0.0) - basis.ln_weight(0.0);
        let k = basis.leading(n - 1);
        let l = ln_c + basis.ln_norm(n - 1) - 2.0 * k.ln();
        Ok(ZabKernel { ident, wilson, ln_h: positive_log(l, "h_{N-1}")? })
    }

    pub fn norm(&self) -> f64 {
        self.ln_h.exp()
    }

    // Monic q_N, q_{N-1} at X and their X-derivatives, by the Wilson recurrence.
    fn jets(&self, x_var: f64) -> (Jet, Jet) {
        let [a, b, c, d] = self.wilson;
        let s = a + b + c + d;
        let up =
            |n: f64| (n + s - 1.0) * (n + a + b) * (n + a + c) * (n + a + d) / ((2.0 * n + s - 1.0) * (2.0 * n + s));
        let down = |n: f64| {
            n * (n + b + c - 1.0) * (n + b + d - 1.0) * (n + c + d - 1.0) / ((2.0 * n + s - 2.0) * (2.0 * n + s - 1.0))
        };
        let zero = C64::new(0.0, 0.0);
        let (mut pm, mut p) = (zero, C64::new(1.0, 0.0));
        let (mut dpm, mut dp) = (zero, zero);
        let mut ln_scale = 0.0;
        for n in 0..self.ident.params.n {
            let nf = n as f64;
            let beta = x_var - a * a + up(nf) + down(nf);
            let gamma = if n > 0 { up(nf - 1.0) * down(nf) } else { zero };
            let pn = beta * p - gamma * pm;
            let dpn = beta * dp + p - gamma * dpm;
            pm = p;
            p = pn;
            dpm = dp;
            dp = dpn;
            let m = p.norm().max(pm.norm());
            if m > 1e100 || (m < 1e-100 && m > 0.0) {
                p /= m;
                pm /= m;
                dp /= m;
                dpm /= m;
                ln_scale += m.ln();
            }
        }
        (Jet { ln_scale, val: p, der: dp, cond: 1.0 }, Jet { ln_scale, val: pm, der: dpm, cond: 1.0 })
    }

    /// Monic q_N and q_{N-1} at X = (N + x + eps - 1/2)^2.
    pub fn monic(&self, x: f64) -> (C64, C64) {
        let (qn, qn1) = self.jets(self.x_var(x));
        let s = qn.ln_scale.exp();
        (qn.val * s, qn1.val * s)
    }

    fn x_var(&self, x: f64) -> f64 {
        let p = &self.ident.params;
        let v = p.n as f64 + x + p.eps - 0.5;
        v * v
    }

    pub fn kernel(&self, x: f64, y: f64) -> Result<f64> {
        let (lgx, lgy) = (self.ident.ln_g(x)?, self.ident.ln_g(y)?);
        if lgx == f64::NEG_INFINITY || lgy == f64::NEG_INFINITY {
            return Ok(0.0);
        }
        let (xv, yv) = (self.x_var(x), self.x_var(y));
        let (nx, n1x) = self.jets(xv);
        let lf = 0.5 * (lgx + lgy);
        if x == y {
            let num = nx.der * n1x.val - n1x.der * nx.val;
            return Ok((num * (2.0 * nx.ln_scale + lf - self.ln_h).exp()).re);
        }
        let (ny, n1y) = self.jets(yv);
        let num = nx.val * n1y.val - n1x.val * ny.val;
        Ok((num * (nx.ln_scale + ny.ln_scale + lf - self.ln_h).exp()).re / (xv - yv))
    }

    /// sum_x K(x, x) over x >= -N + 1/2, truncated like [`lattice_sum`].
    pub fn trace(&self, tol: f64, cap: i64) -> Result<LatticeSum> {
        let lo = -(self.ident.params.n as f64) + 0.5;
        lattice_sum(|x| if x < lo { Ok(0.0) } else { self.kernel(x, x) }, tol, cap)
    }
}

pub fn zab_kernel(x: f64, y: f64, params: &ZABParams) -> Result<f64> {
    ZabKernel::new(*params)?.kernel(x, y)
}
