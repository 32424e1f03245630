use num_complex::Complex64 as C64;

use super::gamma::{frac_distance, is_nonpositive_integer, ln_gamma_unchecked};
use super::{EvalResult, Scaled, SpecError};

const MAX_TERMS: usize = 50_000_000;
const RESCALE: f64 = 1e200;

/// Above this Pfaff argument the 1/w connection formula takes over, when it applies.
const CONNECTION_THRESHOLD: f64 = 0.95;

/// F(a,b;c;w)/Gamma(c) for real w <= 0.
pub fn hyp2f1_reg(a: C64, b: C64, c: C64, w: f64) -> Result<EvalResult, SpecError> {
    if !(w <= 0.0) {
        return Err(SpecError::Domain(w));
    }
    let u = w / (w - 1.0);
    let (s, err) = hyp2f1_reg_pfaff(a, b, c, u, 1.0 / (1.0 - w))?;
    let value = s.value();
    Ok(EvalResult { value, abs_error_estimate: err * value.norm().max(f64::MIN_POSITIVE) })
}

/// F(a,b;c;xi/(xi-1))/Gamma(c) in scaled form, for xi in [0,1).
///
/// Taking xi directly avoids the round trip through w, which loses 1 - xi near 1.
pub fn hyp2f1_reg_xi(a: C64, b: C64, c: C64, xi: f64) -> Result<Scaled, SpecError> {
    if !(0.0..1.0).contains(&xi) {
        return Err(SpecError::Domain(xi));
    }
    Ok(hyp2f1_reg_pfaff(a, b, c, xi, 1.0 - xi)?.0)
}

/// `u` is the Pfaff argument w/(w-1), `one_minus_u` is 1 - u computed by the caller.
/// Returns the value and a relative error estimate.
fn hyp2f1_reg_pfaff(a: C64, b: C64, c: C64, u: f64, one_minus_u: f64) -> Result<(Scaled, f64), SpecError> {
    if u == 0.0 {
        return Ok((Scaled::from_log(-ln_gamma_or_pole(c)), 0.0));
    }
    if one_minus_u < 1e-12 {
        return Err(SpecError::NonConvergence { arg: u, terms: 0 });
    }
    if u > CONNECTION_THRESHOLD && frac_distance((a - b).re).max(((a - b).im).abs()) > 1e-2 {
        return connection(a, b, c, u, one_minus_u);
    }
    let (mut s, err) = pfaff_series(a, b, c, u)?;
    s.mul_log(a * one_minus_u.ln());
    Ok((s, err))
}

// ln Gamma with poles mapped to -inf, so that exp(-ln) = 1/Gamma = 0.
fn ln_gamma_or_pole(z: C64) -> C64 {
    if is_nonpositive_integer(z) {
        C64::new(f64::INFINITY, 0.0)
    } else {
        ln_gamma_unchecked(z)
    }
}

// sum_k (a)_k (c-b)_k u^k / (k! Gamma(c+k))
fn pfaff_series(a: C64, b: C64, c: C64, u: f64) -> Result<(Scaled, f64), SpecError> {
    let cb = c - b;
    let mut k0 = 0usize;
    let mut t = Scaled::one();
    if is_nonpositive_integer(c) {
        // 1/Gamma(c+k) vanishes for k <= -c; the series starts at c + k0 = 1.
        k0 = (-c.re) as usize + 1;
        let mut head = Scaled::one();
        for j in 0..k0 {
            head.mul(a + j as f64);
            head.mul(cb + j as f64);
            head.mul(C64::new(u / (j + 1) as f64, 0.0));
        }
        t = head;
    } else {
        t.mul_log(-ln_gamma_unchecked(c));
    }
    if t.mant == C64::new(0.0, 0.0) {
        return Ok((Scaled::zero(), 0.0));
    }
    // Work relative to the starting term's scale.
    let base = t.ln_scale;
    let mut term = t.mant;
    let mut sum = C64::new(0.0, 0.0);
    let mut shift = 0.0;
    let mut max_abs = 0.0f64;
    let growth_end = 2.0 * (a.norm() + cb.norm() + c.norm()) + 10.0;
    let mut quiet = 0;
    let mut k = k0;
    loop {
        sum += term;
        max_abs = max_abs.max(term.norm());
        let ratio = (a + k as f64) * (cb + k as f64) * u / (((k + 1) as f64) * (c + k as f64));
        term *= ratio;
        k += 1;
        if term == C64::new(0.0, 0.0) {
            break;
        }
        if term.norm() > RESCALE || sum.norm() > RESCALE {
            term /= RESCALE;
            sum /= RESCALE;
            max_abs /= RESCALE;
            shift += RESCALE.ln();
        }
        if (k as f64) > growth_end && ratio.norm() < 1.0 {
            if term.norm() <= 1e-17 * sum.norm() {
                quiet += 1;
                if quiet >= 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        if k - k0 > MAX_TERMS {
            return Err(SpecError::NonConvergence { arg: u, terms: k - k0 });
        }
    }
    let rel = if sum.norm() > 0.0 {
        (f64::EPSILON * max_abs * ((k - k0) as f64).sqrt() + term.norm() / (1.0 - u)) / sum.norm()
    } else {
        0.0
    };
    Ok((Scaled { mant: sum, ln_scale: base + shift }, rel))
}

// Plain 2F1(al, be; ga; v) by its power series, |v| < 1.
fn series_2f1(al: C64, be: C64, ga: C64, v: f64) -> Result<(Scaled, f64), SpecError> {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = C64::new(0.0, 0.0);
    let mut shift = 0.0;
    let mut max_abs = 0.0f64;
    let growth_end = 2.0 * (al.norm() + be.norm() + ga.norm()) + 10.0;
    let mut quiet = 0;
    let mut k = 0usize;
    loop {
        sum += term;
        max_abs = max_abs.max(term.norm());
        let den = (ga + k as f64) * (k + 1) as f64;
        if den == C64::new(0.0, 0.0) {
            return Err(SpecError::LowerPole(ga));
        }
        let ratio = (al + k as f64) * (be + k as f64) * v / den;
        term *= ratio;
        k += 1;
        if term == C64::new(0.0, 0.0) {
            break;
        }
        if term.norm() > RESCALE || sum.norm() > RESCALE {
            term /= RESCALE;
            sum /= RESCALE;
            max_abs /= RESCALE;
            shift += RESCALE.ln();
        }
        if (k as f64) > growth_end && ratio.norm() < 1.0 {
            if term.norm() <= 1e-17 * sum.norm() {
                quiet += 1;
                if quiet >= 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        if k > MAX_TERMS {
            return Err(SpecError::NonConvergence { arg: v, terms: k });
        }
    }
    let rel = if sum.norm() > 0.0 { f64::EPSILON * max_abs * (k as f64).sqrt() / sum.norm() } else { 0.0 };
    Ok((Scaled { mant: sum, ln_scale: shift }, rel))
}

// Connection to argument 1/w:
// F/Gamma(c) = Gamma(b-a)/(Gamma(b)Gamma(c-a)) (-w)^-a F(a, 1-c+a; 1-b+a; 1/w) + (a <-> b).
fn connection(a: C64, b: C64, c: C64, u: f64, one_minus_u: f64) -> Result<(Scaled, f64), SpecError> {
    let v = -one_minus_u / u;
    let ln_minus_w = u.ln() - one_minus_u.ln();
    let half = |a: C64, b: C64| -> Result<(Scaled, f64), SpecError> {
        if is_nonpositive_integer(b) || is_nonpositive_integer(c - a) {
            return Ok((Scaled::zero(), 0.0));
        }
        let (mut s, err) = series_2f1(a, 1.0 - c + a, 1.0 - b + a, v)?;
        s.mul_log(ln_gamma_unchecked(b - a) - ln_gamma_unchecked(b) - ln_gamma_unchecked(c - a) - a * ln_minus_w);
        Ok((s, err))
    };
    let (s1, e1) = half(a, b)?;
    let (s2, e2) = half(b, a)?;
    let total = s1.add(s2);
    let scale = s1.abs_ln().max(s2.abs_ln());
    let cancel = if total.mant.norm() > 0.0 { (scale - total.abs_ln()).exp() } else { 1.0 };
    Ok((total, (e1.max(e2) + f64::EPSILON) * cancel))
}

/// Sum of a terminating series sum_{k=0}^{n} (-n)_k prod (upper)_k / (prod (lower)_k k!) at unit argument.
///
/// Parameters are put in a canonical order first, so permuting them gives bitwise identical results.
pub fn terminating_pfq(n: u32, upper: &[C64], lower: &[C64]) -> Result<EvalResult, SpecError> {
    let key = |z: &C64| (z.re, z.im);
    let mut up = upper.to_vec();
    let mut lo = lower.to_vec();
    up.sort_by(|p, q| key(p).partial_cmp(&key(q)).unwrap_or(std::cmp::Ordering::Equal));
    lo.sort_by(|p, q| key(p).partial_cmp(&key(q)).unwrap_or(std::cmp::Ordering::Equal));
    for b in &lo {
        for k in 0..n {
            if *b + k as f64 == C64::new(0.0, 0.0) {
                return Err(SpecError::LowerPole(*b));
            }
        }
    }
    let mut term = C64::new(1.0, 0.0);
    let mut sum = C64::new(0.0, 0.0);
    let mut comp = C64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for k in 0..=n {
        // Kahan summation, componentwise.
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        abs_sum += term.norm();
        if k == n {
            break;
        }
        let kf = k as f64;
        let mut r = C64::new(kf - n as f64, 0.0);
        for a in &up {
            r *= *a + kf;
        }
        for b in &lo {
            r /= *b + kf;
        }
        term *= r / (kf + 1.0);
    }
    Ok(EvalResult { value: sum, abs_error_estimate: 4.0 * f64::EPSILON * abs_sum })
}

/// 3F2[-n, a1, a2; b1, b2; 1].
pub fn hyp3f2_term(a1: C64, a2: C64, n: u32, b1: C64, b2: C64) -> Result<EvalResult, SpecError> {
    terminating_pfq(n, &[a1, a2], &[b1, b2])
}

/// 4F3[-n, x1, x2, x3; u, v, w; 1].
pub fn hyp4f3_term(x1: C64, x2: C64, x3: C64, n: u32, u: C64, v: C64, w: C64) -> Result<EvalResult, SpecError> {
    terminating_pfq(n, &[x1, x2, x3], &[u, v, w])
}
