//! Dense complex Hermitian linear algebra.
//!
//! Everything downstream consumes this module: spectral decompositions via
//! cyclic Jacobi rotations, fractional powers defined on the support only
//! (`0^t := 0`, so `A^0` is the support projection), spectral projections,
//! and operator-order tests. Dimensions in this crate are small (≤ ~64), so
//! Jacobi is both fast enough and bit-for-bit reproducible: the sweep order
//! is fixed and no pivoting decision depends on anything but the input.

use num_complex::Complex64;

use crate::{Error, Result};

/// Eigenvalues at or below `TOL_PSD` in magnitude count as zero for
/// positive-semidefiniteness checks.
pub const TOL_PSD: f64 = 1e-10;

/// Relative support cutoff: an eigenvalue belongs to the support iff it
/// exceeds `TOL_SUPP * λ_max`. A relative cutoff keeps the computed support
/// invariant under scaling.
pub const TOL_SUPP: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

// ---------------------------------------------------------------------------
// HermitianMatrix
// ---------------------------------------------------------------------------

/// A dense d×d complex matrix that is Hermitian by construction: the
/// constructor symmetrizes once, after which `entry(j,i) == conj(entry(i,j))`
/// holds exactly. Values are immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: Vec<Complex64>, // row-major
}

impl HermitianMatrix {
    /// Build from row-major complex entries, symmetrizing via `(A + A†)/2`.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::BadShape {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let mut data = entries;
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(data[i * dim + i].re, 0.0);
            for j in (i + 1)..dim {
                let a = data[i * dim + j];
                let b = data[j * dim + i];
                let m = 0.5 * (a + b.conj());
                data[i * dim + j] = m;
                data[j * dim + i] = m.conj();
            }
        }
        Ok(Self { dim, data })
    }

    /// Largest `|entry(i,j) - conj(entry(j,i))|` of raw row-major data; what
    /// the constructor would have to repair. Useful for input validation.
    pub fn asymmetry_of(dim: usize, entries: &[Complex64]) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let d = entries[i * dim + j] - entries[j * dim + i].conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::from_entries(dim, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let dim = diag.len();
        let mut data = vec![ZERO; dim * dim];
        for (i, &x) in diag.iter().enumerate() {
            data[i * dim + i] = Complex64::new(x, 0.0);
        }
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// Rank-one projector `v v† / ⟨v,v⟩`.
    pub fn projector(v: &[Complex64]) -> Self {
        let dim = v.len();
        let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let mut data = vec![ZERO; dim * dim];
        if norm2 > 0.0 {
            for i in 0..dim {
                for j in 0..dim {
                    data[i * dim + j] = v[i] * v[j].conj() / norm2;
                }
            }
        }
        Self { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i].re).sum()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            dim: self.dim,
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            dim: self.dim,
            data,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    /// `Tr(AB)`, real for Hermitian `A`, `B`.
    pub fn trace_product(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        let d = self.dim;
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                acc += (self.data[i * d + j] * other.data[j * d + i]).re;
            }
        }
        Ok(acc)
    }

    /// `B A B` for Hermitian `A`, `B` (Hermitian again since `(BAB)† = BAB`).
    pub fn sandwich(&self, middle: &Self) -> Result<Self> {
        self.check_dim(middle)?;
        let tmp = mat_mul(self.dim, &self.data, &middle.data);
        let raw = mat_mul(self.dim, &tmp, &self.data);
        HermitianMatrix::from_entries(self.dim, raw)
    }

    /// Kronecker product; Hermitian ⊗ Hermitian is Hermitian.
    pub fn kron(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let dim = da * db;
        let mut data = vec![ZERO; dim * dim];
        for i in 0..da {
            for j in 0..da {
                let a = self.data[i * da + j];
                for k in 0..db {
                    for l in 0..db {
                        data[(i * db + k) * dim + (j * db + l)] = a * other.data[k * db + l];
                    }
                }
            }
        }
        Self { dim, data }
    }

    /// Largest entry magnitude of the commutator `AB - BA`.
    pub fn commutator_max_norm(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        let ab = mat_mul(self.dim, &self.data, &other.data);
        let ba = mat_mul(self.dim, &other.data, &self.data);
        Ok(ab
            .iter()
            .zip(&ba)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }
}

fn mat_mul(dim: usize, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i * dim + k];
            if aik == ZERO {
                continue;
            }
            for j in 0..dim {
                out[i * dim + j] += aik * b[k * dim + j];
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Spectral decomposition (cyclic complex Jacobi)
// ---------------------------------------------------------------------------

/// Eigenvalues (descending) and an orthonormal eigenbasis.
///
/// Eigenvectors inside a degenerate cluster are not canonicalized; consumers
/// must only rely on spectral projections, never on individual vectors.
#[derive(Debug, Clone)]
pub struct Spectrum {
    dim: usize,
    values: Vec<f64>,
    // vector-major: eigenvector k occupies vectors[k*dim .. (k+1)*dim]
    vectors: Vec<Complex64>,
}

impl Spectrum {
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vector(&self, k: usize) -> &[Complex64] {
        &self.vectors[k * self.dim..(k + 1) * self.dim]
    }

    /// `V f(Λ) V†`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let d = self.dim;
        let mut data = vec![ZERO; d * d];
        for k in 0..d {
            let fv = f(self.values[k]);
            if fv == 0.0 {
                continue;
            }
            let v = self.vector(k);
            for i in 0..d {
                let vi = v[i] * fv;
                for j in 0..d {
                    data[i * d + j] += vi * v[j].conj();
                }
            }
        }
        // exact hermiticity by construction up to roundoff; symmetrize once
        HermitianMatrix::from_entries(d, data).expect("square by construction")
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.apply(|x| x)
    }

    /// `λ^t` applied on the support (relative cutoff `TOL_SUPP * λ_max`),
    /// zero elsewhere. `t = 0` yields the support projection.
    pub fn fractional_power(&self, t: f64) -> HermitianMatrix {
        let lambda_max = self.values.iter().cloned().fold(0.0, f64::max);
        if lambda_max <= 0.0 {
            return HermitianMatrix::zeros(self.dim);
        }
        let cutoff = TOL_SUPP * lambda_max;
        self.apply(|x| if x > cutoff { x.powf(t) } else { 0.0 })
    }

    /// Support cutoff used by `fractional_power` and `support_rank`.
    pub fn support_cutoff(&self) -> f64 {
        let lambda_max = self.values.iter().cloned().fold(0.0, f64::max);
        if lambda_max <= 0.0 {
            f64::INFINITY
        } else {
            TOL_SUPP * lambda_max
        }
    }

    pub fn support_rank(&self) -> usize {
        let cutoff = self.support_cutoff();
        self.values.iter().filter(|&&x| x > cutoff).count()
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Deterministic sweep order, eigenvalues sorted descending. Reconstruction
/// satisfies `‖VΛV† − H‖_max ≤ 1e-10 · (1 + max|λ|)`.
pub fn spectral_decompose(h: &HermitianMatrix) -> Result<Spectrum> {
    let d = h.dim;
    if d == 0 {
        return Err(Error::EmptyInput("matrix of dimension 0"));
    }
    let mut a = h.data.clone();
    // v is vector-major: column k of V lives at v[k*d..(k+1)*d]
    let mut v = vec![ZERO; d * d];
    for k in 0..d {
        v[k * d + k] = ONE;
    }

    let scale = h.max_abs_entry();
    if scale == 0.0 {
        return Ok(Spectrum {
            dim: d,
            values: vec![0.0; d],
            vectors: v,
        });
    }

    let target = 0.5 * f64::EPSILON * scale;
    let accept = 1e-13 * scale;
    let max_sweeps = 100 * d * d;
    let mut residual = f64::INFINITY;

    for sweep in 0..max_sweeps {
        let mut off_max: f64 = 0.0;
        for p in 0..d {
            for q in (p + 1)..d {
                off_max = off_max.max(a[p * d + q].norm());
            }
        }
        residual = off_max;
        if off_max <= target {
            break;
        }
        if sweep == max_sweeps - 1 {
            if off_max <= accept {
                break;
            }
            return Err(Error::EigenNonConvergence {
                residual: off_max,
                sweeps: max_sweeps,
            });
        }

        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a[p * d + q];
                let m = apq.norm();
                if m <= f64::MIN_POSITIVE {
                    continue;
                }
                let u = apq / m; // phase so that conj(u)*apq is real = m
                let app = a[p * d + p].re;
                let aqq = a[q * d + q].re;
                let tau = (aqq - app) / (2.0 * m);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G = diag(u,1)·[[c,s],[-s,c]]:
                // G[p][p] = c·u, G[p][q] = s·u, G[q][p] = -s, G[q][q] = c
                let gu = u * c;
                let gs = u * s;

                // A ← A·G (columns p, q)
                for i in 0..d {
                    let x = a[i * d + p];
                    let y = a[i * d + q];
                    a[i * d + p] = x * gu - y * s;
                    a[i * d + q] = x * gs + y * c;
                }
                // A ← G†·A (rows p, q)
                for j in 0..d {
                    let x = a[p * d + j];
                    let y = a[q * d + j];
                    a[p * d + j] = gu.conj() * x - y * s;
                    a[q * d + j] = gs.conj() * x + y * c;
                }
                // keep the block exactly consistent
                a[p * d + p] = Complex64::new(a[p * d + p].re, 0.0);
                a[q * d + q] = Complex64::new(a[q * d + q].re, 0.0);
                a[p * d + q] = ZERO;
                a[q * d + p] = ZERO;

                // V ← V·G (columns p, q of V = vectors p, q)
                for i in 0..d {
                    let x = v[p * d + i];
                    let y = v[q * d + i];
                    v[p * d + i] = x * gu - y * s;
                    v[q * d + i] = x * gs + y * c;
                }
            }
        }
    }
    let _ = residual;

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        a[j * d + j]
            .re
            .partial_cmp(&a[i * d + i].re)
            .expect("eigenvalues are finite")
    });

    let values: Vec<f64> = order.iter().map(|&k| a[k * d + k].re).collect();
    let mut vectors = vec![ZERO; d * d];
    for (slot, &k) in order.iter().enumerate() {
        vectors[slot * d..(slot + 1) * d].copy_from_slice(&v[k * d..(k + 1) * d]);
    }
    Ok(Spectrum {
        dim: d,
        values,
        vectors,
    })
}

// ---------------------------------------------------------------------------
// DensityOperator
// ---------------------------------------------------------------------------

/// A density operator: Hermitian, PSD within `TOL_PSD`, trace 1 within 1e-10,
/// with its spectral decomposition cached. Eigenvalues in `(-TOL_PSD, 0)` are
/// clamped to zero.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: HermitianMatrix,
    spectrum: Spectrum,
    support_rank: usize,
}

impl DensityOperator {
    /// Validate and cache the decomposition. Inputs are *not* renormalized;
    /// use [`DensityOperator::new_renormalized`] to request that explicitly.
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let tr = matrix.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::TraceNotOne(tr));
        }
        Self::from_unit_trace(matrix)
    }

    /// Scale the matrix to unit trace first (trace must be positive).
    pub fn new_renormalized(matrix: HermitianMatrix) -> Result<Self> {
        let tr = matrix.trace();
        if tr <= 0.0 {
            return Err(Error::TraceNotOne(tr));
        }
        Self::from_unit_trace(matrix.scale(1.0 / tr))
    }

    fn from_unit_trace(matrix: HermitianMatrix) -> Result<Self> {
        let mut spectrum = spectral_decompose(&matrix)?;
        for val in spectrum.values.iter_mut() {
            if *val < 0.0 {
                if *val < -TOL_PSD {
                    return Err(Error::NotPsd(*val));
                }
                *val = 0.0;
            }
        }
        let support_rank = spectrum.support_rank();
        Ok(Self {
            matrix,
            spectrum,
            support_rank,
        })
    }

    /// Pure state `|v⟩⟨v|` (normalized internally).
    pub fn pure(v: &[Complex64]) -> Result<Self> {
        Self::new(HermitianMatrix::projector(v))
    }

    /// Diagonal state from a probability vector.
    pub fn from_probabilities(p: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_diag(p))
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new(HermitianMatrix::identity(dim).scale(1.0 / dim as f64))
            .expect("I/d is a valid state")
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// Eigenvalues, descending, negatives already clamped to zero.
    pub fn eigenvalues(&self) -> &[f64] {
        self.spectrum.values()
    }

    pub fn support_rank(&self) -> usize {
        self.support_rank
    }

    /// `ρ^t` on the support (cached decomposition).
    pub fn power(&self, t: f64) -> HermitianMatrix {
        self.spectrum.fractional_power(t)
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self::new(self.matrix.kron(&other.matrix)).expect("product of states is a state")
    }
}

// ---------------------------------------------------------------------------
// Operator calculus
// ---------------------------------------------------------------------------

/// `A^t` on the support of a PSD matrix; `A^0` is the support projection and
/// the zero matrix maps to the zero matrix for every `t`.
pub fn frac_power(a: &HermitianMatrix, t: f64) -> Result<HermitianMatrix> {
    Ok(spectral_decompose(a)?.fractional_power(t))
}

/// Projection onto the span of eigenvectors with eigenvalue strictly above
/// `TOL_PSD` (eigenvalues within ±`TOL_PSD` of zero are excluded).
pub fn positive_part_projection(x: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(spectral_decompose(x)?.apply(|v| if v > TOL_PSD { 1.0 } else { 0.0 }))
}

/// `A ⪯ B` up to `slack`: true iff `λ_min(B - A) ≥ -slack`.
pub fn operator_leq(a: &HermitianMatrix, b: &HermitianMatrix, slack: f64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let diff = b.sub(a)?;
    Ok(min_eigenvalue(&diff)? >= -slack)
}

/// `Σ |λ_i(X)|` (trace norm for Hermitian X).
pub fn trace_abs(x: &HermitianMatrix) -> Result<f64> {
    Ok(spectral_decompose(x)?.values().iter().map(|v| v.abs()).sum())
}

pub fn min_eigenvalue(x: &HermitianMatrix) -> Result<f64> {
    Ok(spectral_decompose(x)?
        .values()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min))
}

/// Smallest eigenvalue together with (one of) its eigenvectors.
pub fn min_eigenpair(x: &HermitianMatrix) -> Result<(f64, Vec<Complex64>)> {
    let spec = spectral_decompose(x)?;
    let k = spec.dim() - 1; // descending order: last is smallest
    Ok((spec.values()[k], spec.vector(k).to_vec()))
}

// ---------------------------------------------------------------------------
// Simultaneous diagonalization of commuting families
// ---------------------------------------------------------------------------

/// Joint eigenbasis of a pairwise-commuting family.
///
/// Returns the basis (vector-major, like [`Spectrum`]) and, per input matrix,
/// its diagonal in that basis. Fails with [`Error::NonCommuting`] if any
/// residual off-diagonal entry in the computed basis exceeds
/// `tol · max(1, ‖A_k‖_max)`.
pub fn simultaneous_diagonalize(
    mats: &[HermitianMatrix],
    tol: f64,
) -> Result<(Vec<Complex64>, Vec<Vec<f64>>)> {
    let first = mats.first().ok_or(Error::EmptyInput("no matrices"))?;
    let d = first.dim();
    for m in mats {
        if m.dim() != d {
            return Err(Error::DimensionMismatch(d, m.dim()));
        }
    }

    // basis starts as identity; refine cluster by cluster through the family
    let mut basis: Vec<Complex64> = vec![ZERO; d * d];
    for k in 0..d {
        basis[k * d + k] = ONE;
    }
    // clusters of basis indices that are still jointly degenerate
    let mut clusters: Vec<Vec<usize>> = vec![(0..d).collect()];

    for m in mats {
        let mut next_clusters = Vec::new();
        for cluster in &clusters {
            if cluster.len() == 1 {
                next_clusters.push(cluster.clone());
                continue;
            }
            // restrict m to the cluster subspace: B = U† M U
            let n = cluster.len();
            let mut block = vec![ZERO; n * n];
            for (bi, &ci) in cluster.iter().enumerate() {
                for (bj, &cj) in cluster.iter().enumerate() {
                    let mut acc = ZERO;
                    for r in 0..d {
                        for c in 0..d {
                            acc += basis[ci * d + r].conj() * m.get(r, c) * basis[cj * d + c];
                        }
                    }
                    block[bi * n + bj] = acc;
                }
            }
            let block_h = HermitianMatrix::from_entries(n, block)?;
            let spec = spectral_decompose(&block_h)?;
            // rotate the cluster columns of the basis
            let old: Vec<Vec<Complex64>> = cluster
                .iter()
                .map(|&ci| basis[ci * d..(ci + 1) * d].to_vec())
                .collect();
            for (slot, &ci) in cluster.iter().enumerate() {
                let w = spec.vector(slot);
                for r in 0..d {
                    let mut acc = ZERO;
                    for (bi, oldvec) in old.iter().enumerate() {
                        acc += oldvec[r] * w[bi];
                    }
                    basis[ci * d + r] = acc;
                }
            }
            // split the cluster by the eigenvalues just found
            let scale = 1.0 + spec.values().iter().fold(0.0f64, |a, &b| a.max(b.abs()));
            let mut sub: Vec<Vec<usize>> = Vec::new();
            let mut current = vec![cluster[0]];
            for i in 1..n {
                if (spec.values()[i - 1] - spec.values()[i]).abs() > tol * scale {
                    sub.push(std::mem::take(&mut current));
                }
                current.push(cluster[i]);
            }
            sub.push(current);
            next_clusters.extend(sub);
        }
        clusters = next_clusters;
    }

    // read off diagonals and verify the family really was commuting
    let mut diagonals = Vec::with_capacity(mats.len());
    for m in mats {
        let scale = 1.0f64.max(m.max_abs_entry());
        let mut diag = vec![0.0; d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = ZERO;
                for r in 0..d {
                    for c in 0..d {
                        acc += basis[i * d + r].conj() * m.get(r, c) * basis[j * d + c];
                    }
                }
                if i == j {
                    diag[i] = acc.re;
                } else if acc.norm() > tol * scale {
                    return Err(Error::NonCommuting(acc.norm()));
                }
            }
        }
        diagonals.push(diag);
    }
    Ok((basis, diagonals))
}

/// True iff every pair in the family commutes within `tol` (max-norm of the
/// commutator).
pub fn pairwise_commuting(mats: &[HermitianMatrix], tol: f64) -> Result<bool> {
    for i in 0..mats.len() {
        for j in (i + 1)..mats.len() {
            if mats[i].commutator_max_norm(&mats[j])? > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
