//! Weights and admissibility for the z-measures on partitions, the zw-measures on
//! signatures and the z-measures on nonnegative signatures, plus a brute-force
//! correlation oracle over enumerated configurations.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::combinatorics::{
    enum_signatures, frobenius, log_dim_ratio, partitions_up_to, signature_underline, signature_x_config,
    underline_contains, x_config, CombError, PointSet, Signature, YoungDiagram,
};
use crate::specfun::ln_gamma_unchecked;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("parameters z and z' must be nonzero")]
    ZeroParameter,
    #[error("parameters ({0}, {1}) are not admissible")]
    Inadmissible(C64, C64),
    #[error("degenerate parameters ({0}, {1}) give finite-support measures without a kernel")]
    Degenerate(C64, C64),
    #[error("{0}")]
    Domain(String),
    #[error("moment condition z + z' > 1 - b fails: z + z' = {sum}, b = {b}")]
    MomentCondition { sum: f64, b: f64 },
    #[error("truncation tail {tail:e} exceeds tolerance {tol:e}")]
    TailTooLarge { tail: f64, tol: f64 },
    #[error(transparent)]
    Comb(#[from] CombError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdmissibilityClass {
    /// Non-real conjugates.
    Principal,
    /// Both real, in one interval (m, m+1).
    Complementary,
    /// One nonzero integer and a same-sign partner.
    Degenerate,
    Inadmissible,
}

impl AdmissibilityClass {
    pub fn admits_weights(self) -> bool {
        self != AdmissibilityClass::Inadmissible
    }

    pub fn admits_kernels(self) -> bool {
        matches!(self, AdmissibilityClass::Principal | AdmissibilityClass::Complementary)
    }
}

fn is_integer(z: C64) -> bool {
    z.im == 0.0 && z.re == z.re.round()
}

pub fn classify(z: C64, zp: C64) -> Result<AdmissibilityClass, MeasureError> {
    let zero = C64::new(0.0, 0.0);
    if z == zero || zp == zero {
        return Err(MeasureError::ZeroParameter);
    }
    if z.im != 0.0 && z == zp.conj() {
        return Ok(AdmissibilityClass::Principal);
    }
    if z.im == 0.0 && zp.im == 0.0 {
        if !is_integer(z) && !is_integer(zp) && z.re.floor() == zp.re.floor() {
            return Ok(AdmissibilityClass::Complementary);
        }
        let degenerate = |m: f64, r: f64| m == m.round() && m.signum() == r.signum() && r.abs() > m.abs() - 1.0;
        if degenerate(z.re, zp.re) || degenerate(zp.re, z.re) {
            return Ok(AdmissibilityClass::Degenerate);
        }
    }
    Ok(AdmissibilityClass::Inadmissible)
}

/// Parameters (z, z', xi) of the z-measure on partitions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZXiParams {
    pub z: C64,
    pub zp: C64,
    pub xi: f64,
    pub class: AdmissibilityClass,
}

impl ZXiParams {
    pub fn new(z: C64, zp: C64, xi: f64) -> Result<Self, MeasureError> {
        if !(xi > 0.0 && xi < 1.0) {
            return Err(MeasureError::Domain(format!("xi = {xi} is outside (0, 1)")));
        }
        let class = classify(z, zp)?;
        if !class.admits_weights() {
            return Err(MeasureError::Inadmissible(z, zp));
        }
        Ok(ZXiParams { z, zp, xi, class })
    }

    /// Convenience constructor for real parameters.
    pub fn real(z: f64, zp: f64, xi: f64) -> Result<Self, MeasureError> {
        ZXiParams::new(C64::new(z, 0.0), C64::new(zp, 0.0), xi)
    }

    pub fn require_kernel_class(&self) -> Result<(), MeasureError> {
        require_kernel_pair(self.z, self.zp).map(|_| ())
    }

    /// zz', real and positive for admissible parameters.
    pub fn zz(&self) -> f64 {
        (self.z * self.zp).re
    }

    pub fn with_xi(&self, xi: f64) -> Result<Self, MeasureError> {
        ZXiParams::new(self.z, self.zp, xi)
    }
}

/// Kernel operations need classes (i) or (ii).
pub fn require_kernel_pair(z: C64, zp: C64) -> Result<AdmissibilityClass, MeasureError> {
    match classify(z, zp)? {
        c if c.admits_kernels() => Ok(c),
        AdmissibilityClass::Degenerate => Err(MeasureError::Degenerate(z, zp)),
        _ => Err(MeasureError::Inadmissible(z, zp)),
    }
}

/// Parameters of the zw-measure on length-N signatures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZWParams {
    pub z: C64,
    pub zp: C64,
    pub w: C64,
    pub wp: C64,
    pub n: usize,
    pub sigma: C64,
}

impl ZWParams {
    pub fn new(z: C64, zp: C64, w: C64, wp: C64, n: usize) -> Result<Self, MeasureError> {
        if n == 0 {
            return Err(MeasureError::Domain("N must be positive".into()));
        }
        require_kernel_pair(z, zp)?;
        require_kernel_pair(w, wp)?;
        let sigma = z + zp + w + wp;
        if !(sigma.re > -1.0) {
            return Err(MeasureError::Domain(format!("Re sigma = {} must exceed -1", sigma.re)));
        }
        Ok(ZWParams { z, zp, w, wp, n, sigma })
    }

    pub fn real(z: f64, zp: f64, w: f64, wp: f64, n: usize) -> Result<Self, MeasureError> {
        let c = |v: f64| C64::new(v, 0.0);
        ZWParams::new(c(z), c(zp), c(w), c(wp), n)
    }

    pub fn with_n(&self, n: usize) -> Result<Self, MeasureError> {
        ZWParams::new(self.z, self.zp, self.w, self.wp, n)
    }

    /// (z, z') and (w, w') swapped.
    pub fn swapped(&self) -> Self {
        ZWParams { z: self.w, zp: self.wp, w: self.z, wp: self.zp, ..*self }
    }
}

/// Parameters of the z-measure on nonnegative length-N signatures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZABParams {
    pub z: C64,
    pub zp: C64,
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub eps: f64,
}

impl ZABParams {
    /// Checks a, b > -1, the pair class and the existence condition Re(z + z') > -(1 + b).
    pub fn new(z: C64, zp: C64, a: f64, b: f64, n: usize) -> Result<Self, MeasureError> {
        if n == 0 {
            return Err(MeasureError::Domain("N must be positive".into()));
        }
        if !(a > -1.0 && b > -1.0) {
            return Err(MeasureError::Domain(format!("a = {a}, b = {b} must both exceed -1")));
        }
        require_kernel_pair(z, zp)?;
        if !((z + zp).re > -(1.0 + b)) {
            return Err(MeasureError::Domain(format!("Re(z + z') = {} must exceed -(1 + b)", (z + zp).re)));
        }
        Ok(ZABParams { z, zp, a, b, n, eps: (a + b + 1.0) / 2.0 })
    }

    pub fn with_n(&self, n: usize) -> Result<Self, MeasureError> {
        ZABParams::new(self.z, self.zp, self.a, self.b, n)
    }

    /// z + z' > 1 - b, needed for the degree-N orthogonal polynomial.
    pub fn require_moment(&self) -> Result<(), MeasureError> {
        let sum = (self.z + self.zp).re;
        if sum > 1.0 - self.b {
            Ok(())
        } else {
            Err(MeasureError::MomentCondition { sum, b: self.b })
        }
    }
}

/// A weight as exp(log_magnitude) times a unit phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightValue {
    pub log_magnitude: f64,
    pub phase: C64,
}

impl WeightValue {
    pub fn zero() -> Self {
        WeightValue { log_magnitude: f64::NEG_INFINITY, phase: C64::new(1.0, 0.0) }
    }

    /// From a complex logarithm.
    pub fn from_log(l: C64) -> Self {
        if l.re == f64::NEG_INFINITY {
            return WeightValue::zero();
        }
        WeightValue { log_magnitude: l.re, phase: C64::from_polar(1.0, l.im) }
    }

    pub fn is_zero(&self) -> bool {
        self.log_magnitude == f64::NEG_INFINITY
    }

    pub fn complex(&self) -> C64 {
        if self.is_zero() {
            return C64::new(0.0, 0.0);
        }
        self.phase * self.log_magnitude.exp()
    }

    /// The real value; the phase is 1 up to rounding for admissible parameters.
    pub fn value(&self) -> f64 {
        self.complex().re
    }

    /// |Im phase|, the residue that should vanish for admissible parameters.
    pub fn imaginary_residue(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.phase.im.abs()
        }
    }
}

// log(z + k), or -inf when it vanishes.
fn ln_lin(z: C64, k: f64) -> C64 {
    let v = z + k;
    if v == C64::new(0.0, 0.0) {
        C64::new(f64::NEG_INFINITY, 0.0)
    } else {
        v.ln()
    }
}

fn check_weights(p: &ZXiParams) -> Result<(), MeasureError> {
    if p.class.admits_weights() {
        Ok(())
    } else {
        Err(MeasureError::Inadmissible(p.z, p.zp))
    }
}

/// M(lambda) = (1-xi)^{zz'} (z)_lambda (z')_lambda (dim lambda/|lambda|!)^2 xi^{|lambda|}.
pub fn z_weight(p: &ZXiParams, lambda: &YoungDiagram) -> Result<WeightValue, MeasureError> {
    check_weights(p)?;
    let mut l = p.z * p.zp * (1.0 - p.xi).ln();
    for c in lambda.contents() {
        l += ln_lin(p.z, c as f64) + ln_lin(p.zp, c as f64);
    }
    l += 2.0 * log_dim_ratio(lambda) + lambda.size() as f64 * p.xi.ln();
    Ok(WeightValue::from_log(l))
}

/// The same weight through Frobenius coordinates.
pub fn z_weight_frobenius(p: &ZXiParams, lambda: &YoungDiagram) -> Result<WeightValue, MeasureError> {
    check_weights(p)?;
    let fr = frobenius(lambda);
    let (z, zp) = (p.z, p.zp);
    let mut l = z * zp * (1.0 - p.xi).ln() + lambda.size() as f64 * p.xi.ln();
    l += fr.d() as f64 * (z * zp).ln();
    let ln_poch = |a: C64, k: u32| (0..k).map(|j| ln_lin(a, j as f64)).sum::<C64>();
    for i in 0..fr.d() {
        l += ln_poch(z + 1.0, fr.p[i]) + ln_poch(zp + 1.0, fr.p[i]);
        l += ln_poch(1.0 - z, fr.q[i]) + ln_poch(1.0 - zp, fr.q[i]);
    }
    l += 2.0 * log_dim_ratio(lambda);
    Ok(WeightValue::from_log(l))
}

/// Negative binomial weight pi(n) = (1-xi)^{zz'} (zz')_n xi^n / n!.
pub fn mixing_weight(n: u32, p: &ZXiParams) -> f64 {
    let a = p.zz();
    let nf = n as f64;
    let l = a * (1.0 - p.xi).ln() + ln_gamma_real(a + nf) - ln_gamma_real(a) + nf * p.xi.ln() - ln_gamma_real(nf + 1.0);
    l.exp()
}

fn ln_gamma_real(x: f64) -> f64 {
    ln_gamma_unchecked(C64::new(x, 0.0)).re
}

/// Upper bound on sum_{n > n_max} pi(n), from a geometric majorant of the term ratio.
pub fn mixing_tail_bound(n_max: u32, p: &ZXiParams) -> f64 {
    let a = p.zz();
    let next = mixing_weight(n_max + 1, p);
    let m = (n_max + 1) as f64;
    let ratio = p.xi.max((a + m) * p.xi / (m + 1.0));
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    next / (1.0 - ratio)
}

/// Poissonized Plancherel weight e^{-theta} (dim/|lambda|!)^2 theta^{|lambda|}.
pub fn plancherel_weight(theta: f64, lambda: &YoungDiagram) -> f64 {
    (-theta + 2.0 * log_dim_ratio(lambda) + lambda.size() as f64 * theta.ln()).exp()
}

fn ln_dim_n(lambda: &Signature) -> f64 {
    let e = lambda.entries();
    let mut acc = 0.0;
    for i in 0..e.len() {
        for j in (i + 1)..e.len() {
            acc += ((e[i] - e[j] + (j - i) as i64) as f64 / (j - i) as f64).ln();
        }
    }
    acc
}

fn check_len(lambda: &Signature, n: usize) -> Result<(), MeasureError> {
    if lambda.n() != n {
        return Err(MeasureError::Domain(format!("signature length {} differs from N = {n}", lambda.n())));
    }
    Ok(())
}

/// Unnormalized zw weight M'(lambda).
pub fn zw_weight(lambda: &Signature, p: &ZWParams) -> Result<WeightValue, MeasureError> {
    check_len(lambda, p.n)?;
    let n = p.n as f64;
    let mut l = C64::new(2.0 * ln_dim_n(lambda), 0.0);
    for (k, &li) in lambda.entries().iter().enumerate() {
        let i = (k + 1) as f64;
        let li = li as f64;
        l -= ln_gamma_unchecked(p.z - li + i) + ln_gamma_unchecked(p.zp - li + i);
        l -= ln_gamma_unchecked(p.w + n + 1.0 + li - i) + ln_gamma_unchecked(p.wp + n + 1.0 + li - i);
    }
    Ok(WeightValue::from_log(l))
}

/// Unnormalized weight M'(lambda) of the z-measure on nonnegative signatures.
pub fn zab_weight(lambda: &Signature, p: &ZABParams) -> Result<WeightValue, MeasureError> {
    check_len(lambda, p.n)?;
    if !lambda.is_nonnegative() {
        return Err(MeasureError::Domain(format!("{lambda} has a negative entry")));
    }
    let (n, e, a, b) = (p.n as f64, p.eps, p.a, p.b);
    let shifted: Vec<f64> =
        lambda.entries().iter().enumerate().map(|(k, &li)| n + li as f64 - (k + 1) as f64).collect();
    let mut l = C64::new(0.0, 0.0);
    for (k, &s) in shifted.iter().enumerate() {
        // s = N + lambda_i - i
        let li = lambda.entries()[k] as f64;
        let i = (k + 1) as f64;
        l += (s + e).ln() + ln_gamma_real(s + 2.0 * e) + ln_gamma_real(s + a + 1.0);
        l -= ln_gamma_real(s + b + 1.0) + ln_gamma_real(s + 1.0);
        l -= ln_gamma_unchecked(p.z - li + i) + ln_gamma_unchecked(p.zp - li + i);
        l -= ln_gamma_unchecked(p.z + n + 2.0 * e + s) + ln_gamma_unchecked(p.zp + n + 2.0 * e + s);
    }
    for i in 0..shifted.len() {
        for j in (i + 1)..shifted.len() {
            let (u, v) = (shifted[i] + e, shifted[j] + e);
            l += 2.0 * (u * u - v * v).ln();
        }
    }
    Ok(WeightValue::from_log(l))
}

/// A truncated normalizing constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormConst {
    pub ln_value: f64,
    /// Entry bound L of the last truncation.
    pub bound: i64,
    /// Mass of the last shell (L/2 < max |entry| <= L) relative to the total.
    pub last_shell: f64,
}

/// Measure families on signatures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SignatureFamily {
    ZW(ZWParams),
    ZAB(ZABParams),
}

impl SignatureFamily {
    pub fn n(&self) -> usize {
        match self {
            SignatureFamily::ZW(p) => p.n,
            SignatureFamily::ZAB(p) => p.n,
        }
    }

    fn nonneg(&self) -> bool {
        matches!(self, SignatureFamily::ZAB(_))
    }

    pub fn weight(&self, lambda: &Signature) -> Result<WeightValue, MeasureError> {
        match self {
            SignatureFamily::ZW(p) => zw_weight(lambda, p),
            SignatureFamily::ZAB(p) => zab_weight(lambda, p),
        }
    }
}

fn max_abs_entry(s: &Signature) -> i64 {
    s.entries().iter().map(|e| e.abs()).max().unwrap_or(0)
}

// ln sum exp, over log weights.
fn log_sum(ls: impl Iterator<Item = f64> + Clone) -> f64 {
    let top = ls.clone().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + ls.map(|l| (l - top).exp()).sum::<f64>().ln()
}

/// Sum of M' over |entries| <= L, with L doubled from 4 until the last shell holds
/// less than `tol` of the total.
pub fn signature_const(family: &SignatureFamily, tol: f64) -> Result<NormConst, MeasureError> {
    let mut bound = 4;
    loop {
        let sigs = enum_signatures(family.n(), bound, family.nonneg())?;
        let mut all = Vec::with_capacity(sigs.len());
        let mut outer = Vec::new();
        for s in &sigs {
            let l = family.weight(s)?.log_magnitude;
            all.push(l);
            if 2 * max_abs_entry(s) > bound {
                outer.push(l);
            }
        }
        let total = log_sum(all.iter().copied());
        let last_shell = (log_sum(outer.iter().copied()) - total).exp();
        if last_shell < tol {
            return Ok(NormConst { ln_value: total, bound, last_shell });
        }
        bound *= 2;
    }
}

pub fn zw_const(p: &ZWParams, tol: f64) -> Result<NormConst, MeasureError> {
    signature_const(&SignatureFamily::ZW(*p), tol)
}

/// Which lattice configuration a partition or signature is mapped to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Embedding {
    /// {lambda_i - i + 1/2}.
    Underline,
    /// Modified Frobenius coordinates.
    Frobenius,
}

/// A correlation value with an upper bound on what truncation left out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: f64,
    pub tail_bound: f64,
}

enum Configs {
    Partitions(Vec<YoungDiagram>),
    Finite(Vec<PointSet>),
}

/// Enumerated configurations with normalized weights; evaluates correlation functions
/// by direct summation.
pub struct Enumeration {
    configs: Configs,
    probs: Vec<f64>,
    embedding: Embedding,
    tail_bound: f64,
}

impl Enumeration {
    /// All partitions with |lambda| <= max_size. Weights are already normalized; the
    /// missing mass is bounded by the negative binomial tail.
    pub fn z_measure(p: &ZXiParams, max_size: u32, embedding: Embedding) -> Result<Self, MeasureError> {
        let parts = partitions_up_to(max_size)?;
        let probs = parts.iter().map(|l| z_weight(p, l).map(|w| w.value())).collect::<Result<Vec<_>, _>>()?;
        let configs = match embedding {
            Embedding::Underline => Configs::Partitions(parts),
            Embedding::Frobenius => Configs::Finite(parts.iter().map(x_config).collect()),
        };
        Ok(Enumeration { configs, probs, embedding, tail_bound: mixing_tail_bound(max_size, p) })
    }

    /// All signatures with |entries| <= bound, normalized by their own sum. The tail
    /// bound is the last-shell heuristic.
    pub fn signatures(family: &SignatureFamily, bound: i64, embedding: Embedding) -> Result<Self, MeasureError> {
        let sigs = enum_signatures(family.n(), bound, family.nonneg())?;
        let logs = sigs.iter().map(|s| family.weight(s).map(|w| w.log_magnitude)).collect::<Result<Vec<_>, _>>()?;
        let total = log_sum(logs.iter().copied());
        let probs: Vec<f64> = logs.iter().map(|l| (l - total).exp()).collect();
        let tail_bound = sigs.iter().zip(&probs).filter(|(s, _)| 2 * max_abs_entry(s) > bound).map(|(_, p)| p).sum();
        let configs = Configs::Finite(
            sigs.iter()
                .map(|s| match embedding {
                    Embedding::Underline => signature_underline(s),
                    Embedding::Frobenius => signature_x_config(s),
                })
                .collect(),
        );
        Ok(Enumeration { configs, probs, embedding, tail_bound })
    }

    pub fn embedding(&self) -> Embedding {
        self.embedding
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Total enumerated probability.
    pub fn mass(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// rho_m(points): the probability that the random configuration contains every point.
    pub fn rho(&self, points: &PointSet) -> OracleValue {
        let contains_all = |k: usize| match &self.configs {
            Configs::Partitions(ls) => points.points().iter().all(|&x| underline_contains(&ls[k], x)),
            Configs::Finite(cs) => points.points().iter().all(|&x| cs[k].contains(x)),
        };
        let value = (0..self.probs.len()).filter(|&k| contains_all(k)).map(|k| self.probs[k]).sum();
        OracleValue { value, tail_bound: self.tail_bound }
    }

    /// Expected number of particles in `window`.
    pub fn expected_count(&self, window: &[crate::combinatorics::HalfInteger]) -> f64 {
        window.iter().map(|&x| self.rho(&PointSet::new(vec![x]).expect("single point")).value).sum()
    }
}

/// The measure family handed to [`correlation_oracle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    ZXi(ZXiParams),
    Signatures(SignatureFamily),
}

/// Enumeration limits: `size` is the partition-size cutoff for z-measures and the
/// entry bound for signatures; `tol` is the largest acceptable tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleBudget {
    pub size: u32,
    pub tol: f64,
}

pub fn correlation_oracle(
    family: &Family,
    points: &PointSet,
    embedding: Embedding,
    budget: OracleBudget,
) -> Result<OracleValue, MeasureError> {
    let en = match family {
        Family::ZXi(p) => Enumeration::z_measure(p, budget.size, embedding)?,
        Family::Signatures(f) => Enumeration::signatures(f, budget.size as i64, embedding)?,
    };
    if en.tail_bound > budget.tol {
        return Err(MeasureError::TailTooLarge { tail: en.tail_bound, tol: budget.tol });
    }
    Ok(en.rho(points))
}
