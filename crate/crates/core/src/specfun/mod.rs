//! Complex special functions: log-gamma, psi, Pochhammer symbols, the regularized
//! Gauss function on the negative axis and terminating series at unit argument.

mod gamma;
mod hyper;

use num_complex::Complex64 as C64;
use thiserror::Error;

pub(crate) use gamma::ln_gamma_unchecked;
pub use gamma::{
    cos_pi, digamma, gamma, is_nonpositive_integer, ln_gamma_abs, log_gamma, pochhammer, rgamma, sin_pi, trigamma,
};
pub use hyper::{hyp2f1_reg, hyp2f1_reg_xi, hyp3f2_term, hyp4f3_term, terminating_pfq};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("gamma function pole at {0}")]
    Pole(C64),
    #[error("lower parameter {0} makes a series term singular")]
    LowerPole(C64),
    #[error("series in argument {arg} did not converge after {terms} terms")]
    NonConvergence { arg: f64, terms: usize },
    #[error("argument {0} outside the supported domain")]
    Domain(f64),
}

/// A value with a heuristic absolute error (last-term size plus a cancellation bound).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: C64,
    pub abs_error_estimate: f64,
}

/// `mant * exp(ln_scale)`; keeps huge and tiny gamma ratios representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mant: C64,
    pub ln_scale: f64,
}

impl Scaled {
    pub fn one() -> Self {
        Scaled { mant: C64::new(1.0, 0.0), ln_scale: 0.0 }
    }

    pub fn zero() -> Self {
        Scaled { mant: C64::new(0.0, 0.0), ln_scale: 0.0 }
    }

    /// exp(l) for complex l; the imaginary part goes into the mantissa's phase.
    pub fn from_log(l: C64) -> Self {
        if l.re == f64::NEG_INFINITY {
            return Scaled::zero();
        }
        Scaled { mant: C64::from_polar(1.0, l.im), ln_scale: l.re }
    }

    pub fn value(&self) -> C64 {
        if self.mant == C64::new(0.0, 0.0) {
            return self.mant;
        }
        self.mant * self.ln_scale.exp()
    }

    pub fn mul(&mut self, f: C64) {
        self.mant *= f;
        self.renorm();
    }

    /// Multiply by exp(l).
    pub fn mul_log(&mut self, l: C64) {
        if l.re == f64::NEG_INFINITY {
            *self = Scaled::zero();
            return;
        }
        self.mant *= C64::from_polar(1.0, l.im);
        self.ln_scale += l.re;
    }

    pub fn times(mut self, other: Scaled) -> Scaled {
        self.mant *= other.mant;
        self.ln_scale += other.ln_scale;
        self.renorm();
        self
    }

    pub fn add(self, other: Scaled) -> Scaled {
        if self.mant == C64::new(0.0, 0.0) {
            return other;
        }
        if other.mant == C64::new(0.0, 0.0) {
            return self;
        }
        let top = self.ln_scale.max(other.ln_scale);
        let m = self.mant * (self.ln_scale - top).exp() + other.mant * (other.ln_scale - top).exp();
        let mut s = Scaled { mant: m, ln_scale: top };
        s.renorm();
        s
    }

    /// log |value|; -inf for zero.
    pub fn abs_ln(&self) -> f64 {
        self.mant.norm().ln() + self.ln_scale
    }

    fn renorm(&mut self) {
        let m = self.mant.norm();
        if m > 1e100 || (m < 1e-100 && m > 0.0) {
            let l = m.ln();
            self.mant /= m;
            self.ln_scale += l;
        }
    }
}
