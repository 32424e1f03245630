#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::SpecError;

// Lanczos approximation, g = 671/128, fourteen terms.
const LANCZOS_SHIFT: f64 = 5.242_187_5;
const LANCZOS_SER0: f64 = 0.999_999_999_999_997_092;
const LANCZOS_COF: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

/// True when `z` is one of 0, -1, -2, ...
pub fn is_nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Distance from the real part of `z` to the nearest integer.
pub(crate) fn frac_distance(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// sin(pi z) with the real part reduced first, so large arguments keep their accuracy.
pub fn sin_pi(z: C64) -> C64 {
    let r = z.re - 2.0 * (z.re / 2.0).round();
    (C64::new(r, z.im) * PI).sin()
}

/// cos(pi z), reduced like [`sin_pi`].
pub fn cos_pi(z: C64) -> C64 {
    let r = z.re - 2.0 * (z.re / 2.0).round();
    (C64::new(r, z.im) * PI).cos()
}

fn lanczos(z: C64) -> C64 {
    let tmp = z + LANCZOS_SHIFT;
    let head = (z + 0.5) * tmp.ln() - tmp;
    let mut ser = C64::new(LANCZOS_SER0, 0.0);
    let mut y = z;
    for c in LANCZOS_COF {
        y += 1.0;
        ser += c / y;
    }
    head + (ser * SQRT_TWO_PI).ln() - z.ln()
}

pub(crate) fn ln_gamma_unchecked(z: C64) -> C64 {
    if z.re >= 0.5 {
        return lanczos(z);
    }
    // Reflection. The 2 pi i correction keeps the imaginary part on the principal branch.
    let reflected = PI.ln() - sin_pi(z).ln() - lanczos(1.0 - z);
    if z.im == 0.0 {
        return reflected;
    }
    let turns = (0.5 * z.re + 0.25).floor();
    reflected + C64::new(0.0, (2.0 * PI).copysign(z.im) * turns)
}

/// Principal-branch log Gamma.
pub fn log_gamma(z: C64) -> Result<C64, SpecError> {
    if is_nonpositive_integer(z) {
        return Err(SpecError::Pole(z));
    }
    Ok(ln_gamma_unchecked(z))
}

/// log |Gamma(x)| for real x off the poles.
pub fn ln_gamma_abs(x: f64) -> f64 {
    ln_gamma_unchecked(C64::new(x, 0.0)).re
}

pub fn gamma(z: C64) -> Result<C64, SpecError> {
    Ok(log_gamma(z)?.exp())
}

/// 1/Gamma(z), entire; exactly zero at the poles.
pub fn rgamma(z: C64) -> C64 {
    if is_nonpositive_integer(z) {
        return C64::new(0.0, 0.0);
    }
    (-ln_gamma_unchecked(z)).exp()
}

fn cot_pi(z: C64) -> C64 {
    cos_pi(z) / sin_pi(z)
}

pub fn digamma(z: C64) -> Result<C64, SpecError> {
    if is_nonpositive_integer(z) {
        return Err(SpecError::Pole(z));
    }
    if z.re < 0.5 {
        return Ok(digamma_right(1.0 - z) - PI * cot_pi(z));
    }
    Ok(digamma_right(z))
}

fn digamma_right(mut z: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    while z.norm() < 12.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let r2 = 1.0 / (z * z);
    // Bernoulli tail B_2k / (2k z^2k), k = 1..7.
    let series = r2
        * (1.0 / 12.0
            - r2 * (1.0 / 120.0
                - r2 * (1.0 / 252.0 - r2 * (1.0 / 240.0 - r2 * (1.0 / 132.0 - r2 * (691.0 / 32760.0 - r2 / 12.0))))));
    acc + z.ln() - 0.5 / z - series
}

pub fn trigamma(z: C64) -> Result<C64, SpecError> {
    if is_nonpositive_integer(z) {
        return Err(SpecError::Pole(z));
    }
    if z.re < 0.5 {
        let s = sin_pi(z);
        return Ok(PI * PI / (s * s) - trigamma_right(1.0 - z));
    }
    Ok(trigamma_right(z))
}

fn trigamma_right(mut z: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    while z.norm() < 12.0 {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    let r = 1.0 / z;
    let r2 = r * r;
    let series = r2
        * r
        * (1.0 / 6.0
            - r2 * (1.0 / 30.0
                - r2 * (1.0 / 42.0 - r2 * (1.0 / 30.0 - r2 * (5.0 / 66.0 - r2 * (691.0 / 2730.0 - r2 * 7.0 / 6.0))))));
    acc + r + 0.5 * r2 + series
}

/// Rising factorial (z)_k.
pub fn pochhammer(z: C64, k: u32) -> C64 {
    if k <= 64 {
        return (0..k).fold(C64::new(1.0, 0.0), |p, j| p * (z + j as f64));
    }
    if is_nonpositive_integer(z) {
        if -z.re < k as f64 {
            return C64::new(0.0, 0.0);
        }
        return (0..k).fold(C64::new(1.0, 0.0), |p, j| p * (z + j as f64));
    }
    (ln_gamma_unchecked(z + k as f64) - ln_gamma_unchecked(z)).exp()
}
