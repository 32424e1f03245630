//! Finite windows of kernels: correlation determinants, L <-> K transforms, the
//! block projections K° and °K, projection residuals and exact sampling.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::combinatorics::{x_config, PointSet, YoungDiagram};
use crate::kernels::{KernelError, KernelId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DppError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("point {0} is outside the window")]
    OutsideWindow(f64),
    #[error("matrix is singular")]
    Singular,
    #[error("window too small: boundary rows carry {edge:e}")]
    WindowTooSmall { edge: f64 },
    #[error("spectrum leaves [0, 1] by {clip:e}")]
    Spectrum { clip: f64 },
    #[error("{0}")]
    Shape(String),
}

type Result<T> = std::result::Result<T, DppError>;

/// Largest spectral excursion the sampler is allowed to clip.
pub const CLIP_LIMIT: f64 = 1e-6;

/// A kernel restricted to a sorted list of lattice points.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowMatrix {
    points: Vec<f64>,
    entries: DMatrix<f64>,
    symmetric: bool,
}

impl WindowMatrix {
    pub fn new(points: Vec<f64>, entries: DMatrix<f64>) -> Result<Self> {
        let n = points.len();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(DppError::Shape(format!("{n} points but a {}x{} matrix", entries.nrows(), entries.ncols())));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DppError::Shape("window points must be strictly increasing".into()));
        }
        if points.iter().any(|x| (x - x.floor() - 0.5).abs() > 1e-12) {
            return Err(DppError::Shape("window points must be half-integers".into()));
        }
        let scale = entries.amax().max(1.0);
        let symmetric = (&entries - entries.transpose()).amax() <= 1e-12 * scale;
        Ok(WindowMatrix { points, entries, symmetric })
    }

    pub fn from_kernel(kernel: &KernelId, points: &[f64]) -> Result<Self> {
        let m = kernel.window(points)?;
        Self::new(points.to_vec(), m)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn index_of(&self, x: f64) -> Option<usize> {
        self.points.binary_search_by(|p| p.total_cmp(&x)).ok()
    }

    fn indices(&self, points: &PointSet) -> Result<Vec<usize>> {
        points.values().into_iter().map(|x| self.index_of(x).ok_or(DppError::OutsideWindow(x))).collect()
    }

    pub fn submatrix(&self, points: &PointSet) -> Result<DMatrix<f64>> {
        let idx = self.indices(points)?;
        Ok(DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.entries[(idx[i], idx[j])]))
    }

    fn with_entries(&self, entries: DMatrix<f64>) -> Result<Self> {
        Self::new(self.points.clone(), entries)
    }
}

/// det[K(x_i, x_j)] over the given points.
pub fn corr_det(k: &WindowMatrix, points: &PointSet) -> Result<f64> {
    if points.is_empty() {
        return Ok(1.0);
    }
    Ok(k.submatrix(points)?.determinant())
}

fn solve_right(num: &DMatrix<f64>, den: DMatrix<f64>) -> Result<DMatrix<f64>> {
    // X den = num  <=>  den^T X^T = num^T
    let lu = den.transpose().lu();
    let xt = lu.solve(&num.transpose()).ok_or(DppError::Singular)?;
    Ok(xt.transpose())
}

/// K = L (1 + L)^{-1}.
pub fn k_from_l(l: &WindowMatrix) -> Result<WindowMatrix> {
    let id = DMatrix::identity(l.len(), l.len());
    let k = solve_right(&l.entries, &id + &l.entries)?;
    l.with_entries(k)
}

/// L = K (1 - K)^{-1}.
pub fn l_from_k(k: &WindowMatrix) -> Result<WindowMatrix> {
    let id = DMatrix::identity(k.len(), k.len());
    let l = solve_right(&k.entries, &id - &k.entries)?;
    k.with_entries(l)
}

/// (K°, °K): K° keeps the rows of K at positive points and replaces the rows at
/// negative points by those of 1 - K; °K = 1 - K°.
pub fn circ_blocks(k: &WindowMatrix) -> Result<(WindowMatrix, WindowMatrix)> {
    let n = k.len();
    let id = DMatrix::<f64>::identity(n, n);
    let mut circ = k.entries.clone();
    for (i, &x) in k.points.iter().enumerate() {
        if x < 0.0 {
            for j in 0..n {
                circ[(i, j)] = id[(i, j)] - k.entries[(i, j)];
            }
        }
    }
    let other = &id - &circ;
    Ok((k.with_entries(circ)?, k.with_entries(other)?))
}

/// M(lambda) = det L_{X(lambda)} / det(1 + L). Fails when a boundary row of L
/// exceeds `edge_tol` in sup norm.
pub fn measure_from_l(l: &WindowMatrix, lambda: &YoungDiagram, edge_tol: f64) -> Result<f64> {
    let n = l.len();
    if n > 0 {
        let edge = l.entries.row(0).amax().max(l.entries.row(n - 1).amax());
        if edge > edge_tol {
            return Err(DppError::WindowTooSmall { edge });
        }
    }
    let x = x_config(lambda);
    let num = if x.is_empty() { 1.0 } else { l.submatrix(&x)?.determinant() };
    let den = (DMatrix::identity(n, n) + &l.entries).determinant();
    Ok(num / den)
}

/// Operator norm of K² - K on the interior half of the window.
pub fn projection_residual(k: &WindowMatrix) -> f64 {
    let n = k.len();
    if n == 0 {
        return 0.0;
    }
    let (lo, hi) = (k.points[0], k.points[n - 1]);
    residual_on(k, |x| (x - (lo + hi) / 2.0).abs() <= (hi - lo) / 4.0)
}

/// Operator norm of K² - K on the points with |x| <= radius. Comparing windows of
/// growing size on a fixed region isolates the truncation error of the product.
pub fn projection_residual_within(k: &WindowMatrix, radius: f64) -> f64 {
    residual_on(k, |x| x.abs() <= radius)
}

fn residual_on(k: &WindowMatrix, keep: impl Fn(f64) -> bool) -> f64 {
    let idx: Vec<usize> = (0..k.len()).filter(|&i| keep(k.points[i])).collect();
    if idx.is_empty() {
        return 0.0;
    }
    let r = &k.entries * &k.entries - &k.entries;
    let sub = DMatrix::from_fn(idx.len(), idx.len(), |i, j| r[(idx[i], idx[j])]);
    sub.singular_values().max()
}

/// 2-norm condition number of 1 + L, the matrix inverted by [`k_from_l`].
pub fn resolvent_condition(l: &WindowMatrix) -> f64 {
    let m = DMatrix::identity(l.len(), l.len()) + &l.entries;
    let sv = m.singular_values();
    sv.max() / sv.min()
}

/// Independent draws of the determinantal process of a window.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub seed: u64,
    pub window: Vec<f64>,
    pub draws: Vec<PointSet>,
    /// Largest eigenvalue excursion outside [0, 1] that was clipped.
    pub clip: f64,
}

impl SampleBatch {
    /// Share of draws containing every point of `points`.
    pub fn frequency(&self, points: &[f64]) -> f64 {
        if self.draws.is_empty() {
            return 0.0;
        }
        let hits = self
            .draws
            .iter()
            .filter(|d| {
                let v = d.values();
                points.iter().all(|p| v.contains(p))
            })
            .count();
        hits as f64 / self.draws.len() as f64
    }
}

/// Spectral sampler. Draw `i` uses ChaCha8 seeded by `seed` on stream `i`, so
/// batches are reproducible and any draw can be regenerated alone.
pub fn sample_dpp(k: &WindowMatrix, seed: u64, count: usize) -> Result<SampleBatch> {
    let n = k.len();
    let sym = (&k.entries + k.entries.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let clip = eig.eigenvalues.iter().map(|&l| (-l).max(l - 1.0).max(0.0)).fold(0.0, f64::max);
    if clip > CLIP_LIMIT {
        return Err(DppError::Spectrum { clip });
    }
    let vals: Vec<f64> = eig.eigenvalues.iter().map(|l| l.clamp(0.0, 1.0)).collect();
    let mut draws = Vec::with_capacity(count);
    for i in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let cols: Vec<DVector<f64>> = (0..n)
            .filter(|&j| rng.random::<f64>() < vals[j])
            .map(|j| eig.eigenvectors.column(j).into_owned())
            .collect();
        let picked = draw_projection(cols, &mut rng);
        let xs: Vec<f64> = picked.into_iter().map(|j| k.points[j]).collect();
        draws.push(PointSet::from_values(&xs).map_err(|e| DppError::Shape(e.to_string()))?);
    }
    Ok(SampleBatch { seed, window: k.points.clone(), draws, clip })
}

// Sequential sampling from the projection onto span(cols).
fn draw_projection(mut cols: Vec<DVector<f64>>, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut out = Vec::with_capacity(cols.len());
    while !cols.is_empty() {
        let n = cols[0].len();
        let weights: Vec<f64> = (0..n).map(|i| cols.iter().map(|v| v[i] * v[i]).sum()).collect();
        let total: f64 = weights.iter().sum();
        let mut u = rng.random::<f64>() * total;
        let mut pick = n - 1;
        for (i, w) in weights.iter().enumerate() {
            if u < *w {
                pick = i;
                break;
            }
            u -= w;
        }
        out.push(pick);
        // Remove the direction e_pick from the span.
        let j = (0..cols.len()).max_by(|&a, &b| cols[a][pick].abs().total_cmp(&cols[b][pick].abs())).unwrap();
        let pivot = cols.swap_remove(j);
        for v in cols.iter_mut() {
            let r = v[pick] / pivot[pick];
            v.axpy(-r, &pivot, 1.0);
        }
        for a in 0..cols.len() {
            for b in 0..a {
                let d = cols[a].dot(&cols[b]);
                let prev = cols[b].clone();
                cols[a].axpy(-d, &prev, 1.0);
            }
            let nrm = cols[a].norm();
            cols[a] /= nrm;
        }
    }
    out.sort_unstable();
    out
}
