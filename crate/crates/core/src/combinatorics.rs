//! Young diagrams, signatures, Frobenius coordinates and their embeddings into the
//! half-integer lattice Z' = Z + 1/2.

use std::fmt;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::specfun::ln_gamma_abs;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CombError {
    #[error("parts must be weakly decreasing")]
    NotDecreasing,
    #[error("{0} is not an odd integer, so {0}/2 is not a lattice point")]
    EvenTwice(i64),
    #[error("{0} is not a half-integer")]
    NotHalfInteger(f64),
    #[error("duplicate point {0}")]
    Duplicate(HalfInteger),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct YoungDiagram {
    parts: Vec<u32>,
}

impl YoungDiagram {
    /// Trailing zeros are dropped.
    pub fn new(mut parts: Vec<u32>) -> Result<Self, CombError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(CombError::NotDecreasing);
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(YoungDiagram { parts })
    }

    pub fn empty() -> Self {
        YoungDiagram { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of nonzero rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Row length, zero past the last row. Rows are 0-based here.
    pub fn row(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn transpose(&self) -> Self {
        let cols = self.row(0) as usize;
        let parts = (0..cols).map(|j| self.parts.iter().filter(|&&r| r as usize > j).count() as u32).collect();
        YoungDiagram { parts }
    }

    /// Contents j - i of all boxes.
    pub fn contents(&self) -> impl Iterator<Item = i64> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &r)| (0..r as i64).map(move |j| j - i as i64))
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusCoords {
    pub p: Vec<u32>,
    pub q: Vec<u32>,
}

impl FrobeniusCoords {
    /// Number of diagonal boxes.
    pub fn d(&self) -> usize {
        self.p.len()
    }

    /// Modified coordinates p + 1/2.
    pub fn p_tilde(&self) -> Vec<f64> {
        self.p.iter().map(|&v| v as f64 + 0.5).collect()
    }

    pub fn q_tilde(&self) -> Vec<f64> {
        self.q.iter().map(|&v| v as f64 + 0.5).collect()
    }
}

/// A point of Z', stored as the odd integer 2x.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger {
    twice: i64,
}

impl HalfInteger {
    pub fn from_twice(twice: i64) -> Result<Self, CombError> {
        if twice.rem_euclid(2) != 1 {
            return Err(CombError::EvenTwice(twice));
        }
        Ok(HalfInteger { twice })
    }

    pub fn from_f64(x: f64) -> Result<Self, CombError> {
        let t = 2.0 * x;
        if t != t.round() || t.abs() > 1e15 {
            return Err(CombError::NotHalfInteger(x));
        }
        HalfInteger::from_twice(t as i64).map_err(|_| CombError::NotHalfInteger(x))
    }

    /// k + 1/2.
    pub fn from_floor(k: i64) -> Self {
        HalfInteger { twice: 2 * k + 1 }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn is_positive(self) -> bool {
        self.twice > 0
    }

    pub fn neg(self) -> Self {
        HalfInteger { twice: -self.twice }
    }

    pub fn shift(self, k: i64) -> Self {
        HalfInteger { twice: self.twice + 2 * k }
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.twice)
    }
}

/// Finite strictly increasing subset of Z'.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PointSet {
    points: Vec<HalfInteger>,
}

impl PointSet {
    pub fn new(mut points: Vec<HalfInteger>) -> Result<Self, CombError> {
        points.sort();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(CombError::Duplicate(w[0]));
        }
        Ok(PointSet { points })
    }

    pub fn from_values(xs: &[f64]) -> Result<Self, CombError> {
        let pts = xs.iter().map(|&x| HalfInteger::from_f64(x)).collect::<Result<Vec<_>, _>>()?;
        PointSet::new(pts)
    }

    pub fn points(&self) -> &[HalfInteger] {
        &self.points
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value()).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: HalfInteger) -> bool {
        self.points.binary_search(&x).is_ok()
    }

    pub fn symmetric_difference(&self, other: &PointSet) -> PointSet {
        let mut out: Vec<HalfInteger> = self
            .points
            .iter()
            .filter(|p| !other.contains(**p))
            .chain(other.points.iter().filter(|p| !self.contains(**p)))
            .copied()
            .collect();
        out.sort();
        PointSet { points: out }
    }
}

/// Weakly decreasing N-tuple of integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    entries: Vec<i64>,
}

impl Signature {
    pub fn new(entries: Vec<i64>) -> Result<Self, CombError> {
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(CombError::NotDecreasing);
        }
        Ok(Signature { entries })
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// The length N.
    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.last().is_none_or(|&e| e >= 0)
    }

    /// The strictly positive entries, as a diagram.
    pub fn plus_part(&self) -> YoungDiagram {
        YoungDiagram { parts: self.entries.iter().filter(|&&e| e > 0).map(|&e| e as u32).collect() }
    }

    /// Absolute values of the strictly negative entries, largest first.
    pub fn minus_part(&self) -> YoungDiagram {
        YoungDiagram { parts: self.entries.iter().rev().filter(|&&e| e < 0).map(|&e| (-e) as u32).collect() }
    }

    /// (-l_N, ..., -l_1).
    pub fn reversed_negated(&self) -> Signature {
        Signature { entries: self.entries.iter().rev().map(|&e| -e).collect() }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn frobenius(lambda: &YoungDiagram) -> FrobeniusCoords {
    let t = lambda.transpose();
    let d = (0..lambda.len()).take_while(|&i| lambda.row(i) as usize > i).count();
    FrobeniusCoords {
        p: (0..d).map(|i| lambda.row(i) - i as u32 - 1).collect(),
        q: (0..d).map(|i| t.row(i) - i as u32 - 1).collect(),
    }
}

/// Whether x = lambda_i - i + 1/2 for some i >= 1 (zero tail included).
pub fn underline_contains(lambda: &YoungDiagram, x: HalfInteger) -> bool {
    let l = lambda.len() as i64;
    // Rows past the last one contribute every point below -l.
    if x.twice() < -2 * l {
        return true;
    }
    (0..lambda.len()).any(|i| 2 * (lambda.row(i) as i64 - i as i64 - 1) + 1 == x.twice())
}

/// The part of the underline configuration inside [lo, hi].
pub fn underline_window(lambda: &YoungDiagram, lo: HalfInteger, hi: HalfInteger) -> PointSet {
    let mut pts = Vec::new();
    let mut t = lo.twice();
    while t <= hi.twice() {
        let x = HalfInteger { twice: t };
        if underline_contains(lambda, x) {
            pts.push(x);
        }
        t += 2;
    }
    PointSet { points: pts }
}

/// X(lambda) = {p_i + 1/2} together with {-(q_i + 1/2)}.
pub fn x_config(lambda: &YoungDiagram) -> PointSet {
    let fr = frobenius(lambda);
    let mut pts: Vec<HalfInteger> =
        fr.p.iter()
            .map(|&p| HalfInteger::from_floor(p as i64))
            .chain(fr.q.iter().map(|&q| HalfInteger::from_floor(q as i64).neg()))
            .collect();
    pts.sort();
    PointSet { points: pts }
}

/// log(dim lambda / |lambda|!) from Frobenius coordinates.
pub fn log_dim_ratio(lambda: &YoungDiagram) -> f64 {
    let fr = frobenius(lambda);
    let d = fr.d();
    let mut acc = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            acc += ((fr.p[i] - fr.p[j]) as f64).ln() + ((fr.q[i] - fr.q[j]) as f64).ln();
        }
    }
    for i in 0..d {
        for j in 0..d {
            acc -= ((fr.p[i] + fr.q[j] + 1) as f64).ln();
        }
        acc -= ln_gamma_abs(fr.p[i] as f64 + 1.0) + ln_gamma_abs(fr.q[i] as f64 + 1.0);
    }
    acc
}

pub fn dim_ratio(lambda: &YoungDiagram) -> f64 {
    log_dim_ratio(lambda).exp()
}

/// dim lambda / |lambda|! from the row product formula, as an independent cross-check.
pub fn dim_ratio_product(lambda: &YoungDiagram) -> f64 {
    let k = lambda.len();
    let mut acc = 0.0;
    for i in 0..k {
        for j in (i + 1)..k {
            acc += ((lambda.row(i) as i64 - lambda.row(j) as i64 + j as i64 - i as i64) as f64).ln();
        }
        acc -= ln_factorial(lambda.row(i) as i64 + k as i64 - i as i64 - 1);
    }
    acc.exp()
}

fn ln_factorial(n: i64) -> f64 {
    ln_gamma_abs(n as f64 + 1.0)
}

/// (z)_lambda as the product of z + content over all boxes.
pub fn pochhammer_lambda(z: C64, lambda: &YoungDiagram) -> C64 {
    lambda.contents().fold(C64::new(1.0, 0.0), |acc, c| acc * (z + c as f64))
}

const MAX_PARTITION_SIZE: u32 = 60;
const SIGNATURE_BUDGET: f64 = 1e7;

/// All partitions of n, in reverse lexicographic order.
pub fn enum_partitions(n: u32) -> Result<Vec<YoungDiagram>, CombError> {
    if n > MAX_PARTITION_SIZE {
        return Err(CombError::BudgetExceeded(format!("n = {n} exceeds {MAX_PARTITION_SIZE}")));
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<YoungDiagram>) {
        if rem == 0 {
            out.push(YoungDiagram { parts: cur.clone() });
            return;
        }
        for first in (1..=rem.min(max)).rev() {
            cur.push(first);
            rec(rem - first, first, cur, out);
            cur.pop();
        }
    }
    rec(n, n, &mut cur, &mut out);
    Ok(out)
}

/// All partitions with |lambda| <= n.
pub fn partitions_up_to(n: u32) -> Result<Vec<YoungDiagram>, CombError> {
    let mut all = Vec::new();
    for k in 0..=n {
        all.extend(enum_partitions(k)?);
    }
    Ok(all)
}

/// All length-N signatures with |entries| <= bound (or 0 <= entries <= bound).
pub fn enum_signatures(n: usize, bound: i64, nonneg: bool) -> Result<Vec<Signature>, CombError> {
    let width = if nonneg { bound + 1 } else { 2 * bound + 1 };
    if (width as f64).powi(n as i32) > SIGNATURE_BUDGET {
        return Err(CombError::BudgetExceeded(format!("{width}^{n} signatures exceeds {SIGNATURE_BUDGET}")));
    }
    let lo = if nonneg { 0 } else { -bound };
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, lo: i64, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Signature>) {
        if cur.len() == n {
            out.push(Signature { entries: cur.clone() });
            return;
        }
        for v in (lo..=max).rev() {
            cur.push(v);
            rec(n, lo, v, cur, out);
            cur.pop();
        }
    }
    rec(n, lo, bound, &mut cur, &mut out);
    Ok(out)
}

/// {lambda_i - i + 1/2}, i = 1..N.
pub fn signature_underline(lambda: &Signature) -> PointSet {
    let pts = lambda.entries.iter().enumerate().map(|(i, &e)| HalfInteger::from_floor(e - i as i64 - 1)).collect();
    PointSet::new(pts).expect("strictly decreasing by construction")
}

/// Frobenius-type configuration of a signature built from its positive and negative parts.
pub fn signature_x_config(lambda: &Signature) -> PointSet {
    let n = lambda.n() as i64;
    let plus = frobenius(&lambda.plus_part());
    let minus = frobenius(&lambda.minus_part());
    let mut pts = Vec::new();
    pts.extend(plus.p.iter().map(|&p| HalfInteger::from_floor(p as i64)));
    pts.extend(plus.q.iter().map(|&q| HalfInteger::from_floor(-(q as i64) - 1)));
    pts.extend(minus.p.iter().map(|&p| HalfInteger::from_floor(-(p as i64) - n - 1)));
    pts.extend(minus.q.iter().map(|&q| HalfInteger::from_floor(q as i64 - n)));
    PointSet::new(pts).expect("the four families are disjoint")
}

/// The vacuum {-1/2, ..., -N + 1/2}.
pub fn signature_vacuum(n: usize) -> PointSet {
    PointSet { points: (1..=n as i64).rev().map(|i| HalfInteger::from_floor(-i)).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn yd(p: &[u32]) -> YoungDiagram {
        YoungDiagram::new(p.to_vec()).unwrap()
    }

    #[test]
    fn frobenius_small_cases() {
        let f = frobenius(&yd(&[3, 1]));
        assert_eq!((f.p.clone(), f.q.clone()), (vec![2], vec![1]));
        assert_eq!(frobenius(&YoungDiagram::empty()).d(), 0);
        let f = frobenius(&yd(&[4, 3, 1]));
        assert_eq!(f.p, vec![3, 1]);
        assert_eq!(f.q, vec![2, 0]);
        assert_eq!(f.d() as u32 + f.p.iter().sum::<u32>() + f.q.iter().sum::<u32>(), 8);
    }

    #[test]
    fn underline_binary_sequence() {
        // Window -9/2 .. 9/2 reads 11101|00100 for (3,1).
        let lam = yd(&[3, 1]);
        let bits: String = (-9..=9)
            .step_by(2)
            .map(|t| if underline_contains(&lam, HalfInteger::from_twice(t).unwrap()) { '1' } else { '0' })
            .collect();
        assert_eq!(bits, "1110100100");
        let empty = YoungDiagram::empty();
        assert!(underline_contains(&empty, HalfInteger::from_floor(-1)));
        assert!(!underline_contains(&empty, HalfInteger::from_floor(0)));
        assert!(!underline_contains(&lam, HalfInteger::from_twice(-3).unwrap()));
    }

    #[test]
    fn x_config_of_three_one() {
        let x = x_config(&yd(&[3, 1]));
        assert_eq!(x.values(), vec![-1.5, 2.5]);
        assert!(x_config(&YoungDiagram::empty()).is_empty());
    }

    #[test]
    fn partition_counts() {
        assert_eq!(enum_partitions(4).unwrap().len(), 5);
        assert_eq!(enum_partitions(10).unwrap().len(), 42);
        assert_eq!(enum_signatures(2, 1, false).unwrap().len(), 6);
        assert!(enum_partitions(61).is_err());
        assert!(enum_signatures(8, 10, false).is_err());
    }

    #[test]
    fn signature_embeddings() {
        let s = Signature::new(vec![0, 0, 0]).unwrap();
        assert_eq!(signature_underline(&s), signature_vacuum(3));
        assert!(signature_x_config(&s).is_empty());
        let s = Signature::new(vec![2]).unwrap();
        assert_eq!(signature_underline(&s).values(), vec![1.5]);
        assert_eq!(signature_x_config(&s).values(), vec![-0.5, 1.5]);
        let s = Signature::new(vec![1, -1]).unwrap();
        assert_eq!(signature_underline(&s).values(), vec![-2.5, 0.5]);
    }

    #[test]
    fn half_integer_rejects_integers() {
        assert!(HalfInteger::from_twice(4).is_err());
        assert!(HalfInteger::from_f64(1.0).is_err());
        assert_eq!(HalfInteger::from_f64(-2.5).unwrap().twice(), -5);
    }
}
