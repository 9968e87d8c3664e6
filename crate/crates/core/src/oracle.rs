//! Independent verification path: the truncated matrix of `H` on the
//! window `−N..=N` (zero boundary values beyond it), its eigenvalues by
//! Sturm-sequence bisection, eigenvectors by inverse iteration, and
//! time evolution through the resulting spectral decomposition.
//!
//! Nothing here uses the closed forms of the `spectrum` or `eigvec`
//! modules, so agreement between the two paths is a genuine check.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{norm2, PhysicalParams};

/// Values closer than this to the band `[0, 4λ]` count as inside it.
pub const BAND_TOLERANCE: f64 = 1e-8;

/// Smallest accepted half-width.
pub const MIN_HALF_WIDTH: usize = 2;

/// Eigenvalues closer than `CLUSTER_RATIO · ‖T‖` share a cluster and their
/// inverse-iteration vectors are orthogonalised against each other.
const CLUSTER_RATIO: f64 = 1e-3;

const INVERSE_ITERATIONS: usize = 4;

/// Symmetric tridiagonal matrix of `H` on the window `−N..=N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalH {
    pub half_width: usize,
    /// Length `2N + 1`; `diag[N + k]` belongs to site `k`.
    pub diag: Vec<f64>,
    /// Length `2N`; `offdiag[i]` couples `diag[i]` and `diag[i + 1]`.
    pub offdiag: Vec<f64>,
    pub lambda: f64,
}

pub fn build_truncated(p: &PhysicalParams, n: usize) -> Result<TridiagonalH> {
    p.validate()?;
    if n < MIN_HALF_WIDTH {
        return Err(Error::WindowTooSmall {
            min: 2 * MIN_HALF_WIDTH + 1,
            got: 2 * n + 1,
        });
    }
    let lam = p.lambda;
    let mut diag = vec![2.0 * lam; 2 * n + 1];
    let mut offdiag = vec![-lam; 2 * n];
    diag[n] = 2.0 * lam + 2.0 * p.lambda1 + p.mu;
    diag[n - 1] = 2.0 * lam + p.mu1;
    diag[n + 1] = 2.0 * lam + p.mu1;
    let bond = -(lam + p.lambda1);
    offdiag[n - 1] = bond;
    offdiag[n] = bond;
    Ok(TridiagonalH {
        half_width: n,
        diag,
        offdiag,
        lambda: lam,
    })
}

impl TridiagonalH {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `T x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.offdiag[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.offdiag[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Gershgorin interval containing every eigenvalue.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.offdiag[i - 1].abs();
            }
            if i + 1 < n {
                r += self.offdiag[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Max-row-sum norm.
    pub fn norm(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    fn pivmin(&self) -> f64 {
        let emax = self.offdiag.iter().fold(0.0f64, |m, e| m.max(e * e));
        f64::MIN_POSITIVE * emax.max(1.0)
    }

    /// Number of eigenvalues strictly below `x`: the count of negative
    /// pivots in the `LDLᵀ` factorisation of `T − xI`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let pivmin = self.pivmin();
        let mut count = 0;
        let mut q = 0.0;
        for i in 0..self.len() {
            q = if i == 0 {
                self.diag[0] - x
            } else {
                let e = self.offdiag[i - 1];
                self.diag[i] - x - e * e / q
            };
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based), bisected until the
    /// interval cannot be split further in floating point.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.len(), "eigenvalue index out of range");
        let (glo, ghi) = self.gershgorin();
        let pad = f64::EPSILON * self.norm().max(1.0) * 4.0;
        let (mut lo, mut hi) = (glo - pad, ghi + pad);
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                return mid;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    /// All eigenvalues in increasing order, bisected in parallel.
    pub fn eigenvalues(&self) -> Vec<f64> {
        (0..self.len()).into_par_iter().map(|k| self.eigenvalue(k)).collect()
    }

    /// Ranges of unreduced diagonal blocks (split at zero off-diagonals).
    fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for (i, &e) in self.offdiag.iter().enumerate() {
            if e == 0.0 {
                out.push(start..i + 1);
                start = i + 1;
            }
        }
        out.push(start..self.len());
        out
    }

    fn sub(&self, r: std::ops::Range<usize>) -> TridiagonalH {
        let off = if r.len() > 1 {
            self.offdiag[r.start..r.end - 1].to_vec()
        } else {
            Vec::new()
        };
        TridiagonalH {
            half_width: 0,
            diag: self.diag[r].to_vec(),
            offdiag: off,
            lambda: self.lambda,
        }
    }

    /// Unit eigenvector for the eigenvalue `nu` by inverse iteration,
    /// orthogonalised against `against` (vectors of nearby eigenvalues).
    pub fn eigenvector(&self, nu: f64, seed: usize, against: &[Vec<f64>]) -> Vec<f64> {
        let n = self.len();
        let lu = ShiftedLu::new(self, nu);
        let mut x: Vec<f64> = (0..n).map(|i| start_value(i, seed)).collect();
        for _ in 0..INVERSE_ITERATIONS {
            orthogonalize(&mut x, against);
            normalize(&mut x);
            x = lu.solve(&x);
        }
        orthogonalize(&mut x, against);
        normalize(&mut x);
        x
    }
}

/// Deterministic, well-spread start vector entries in `[0.5, 1.5)`.
fn start_value(i: usize, seed: usize) -> f64 {
    let z = (i as f64 + 1.0) * 0.618_033_988_749_894_9 + seed as f64 * 0.414_213_562_373_095;
    0.5 + z.fract()
}

fn orthogonalize(x: &mut [f64], against: &[Vec<f64>]) {
    for _ in 0..2 {
        for v in against {
            let c: f64 = x.iter().zip(v).map(|(a, b)| a * b).sum();
            for (a, b) in x.iter_mut().zip(v) {
                *a -= c * b;
            }
        }
    }
}

fn normalize(x: &mut [f64]) {
    let mut nrm = norm2(x);
    if !(nrm > 0.0 && nrm.is_finite()) {
        // fully cancelled by orthogonalisation: restart from a unit vector
        x.iter_mut().for_each(|a| *a = 0.0);
        x[0] = 1.0;
        nrm = 1.0;
    }
    x.iter_mut().for_each(|a| *a /= nrm);
}

/// `LU` factorisation of `T − νI` with partial pivoting; `U` has up to two
/// super-diagonals.
struct ShiftedLu {
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    mult: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn new(t: &TridiagonalH, nu: f64) -> Self {
        let n = t.len();
        let tiny = f64::EPSILON * t.norm().max(f64::MIN_POSITIVE);
        let mut u0: Vec<f64> = t.diag.iter().map(|d| d - nu).collect();
        let mut u1: Vec<f64> = t.offdiag.clone();
        u1.push(0.0);
        let mut u2 = vec![0.0; n];
        let lower = &t.offdiag;
        let mut mult = vec![0.0; n];
        let mut swapped = vec![false; n];
        for i in 0..n.saturating_sub(1) {
            if lower[i].abs() > u0[i].abs() {
                // swap rows i and i+1
                swapped[i] = true;
                let (a0, a1, a2) = (u0[i], u1[i], u2[i]);
                u0[i] = lower[i];
                u1[i] = u0[i + 1];
                u2[i] = u1[i + 1];
                let m = a0 / u0[i];
                mult[i] = m;
                u0[i + 1] = a1 - m * u1[i];
                u1[i + 1] = a2 - m * u2[i];
            } else {
                if u0[i] == 0.0 {
                    u0[i] = tiny;
                }
                let m = lower[i] / u0[i];
                mult[i] = m;
                u0[i + 1] -= m * u1[i];
            }
        }
        if u0[n - 1] == 0.0 {
            u0[n - 1] = tiny;
        }
        ShiftedLu {
            u0,
            u1,
            u2,
            mult,
            swapped,
        }
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut y = b.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                y.swap(i, i + 1);
            }
            y[i + 1] -= self.mult[i] * y[i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            if i + 1 < n {
                s -= self.u1[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= self.u2[i] * x[i + 2];
            }
            x[i] = s / self.u0[i];
        }
        let big = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !big.is_finite() {
            // overflow from an exact shift: rescale the input and retry
            let b: Vec<f64> = b.iter().map(|v| v * 1e-150).collect();
            return self.solve(&b);
        }
        x
    }
}

/// Orthonormal eigenvectors for the given sorted eigenvalues of `t`,
/// computed block by block and orthogonalised within clusters.
fn eigenvectors_of(t: &TridiagonalH, values: &[f64]) -> Vec<Vec<f64>> {
    let n = t.len();
    let ortho_gap = CLUSTER_RATIO * t.norm().max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(values.len());
    let mut cluster: Vec<Vec<f64>> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for (j, &nu) in values.iter().enumerate() {
        if nu - last > ortho_gap {
            cluster.clear();
        }
        last = nu;
        let v = t.eigenvector(nu, j, &cluster);
        cluster.push(v.clone());
        out.push(v);
    }
    debug_assert!(out.iter().all(|v| v.len() == n));
    out
}

/// Eigenpairs of `t`, assembled from its unreduced blocks and sorted by
/// eigenvalue.
fn eigenpairs(t: &TridiagonalH) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = t.len();
    let parts: Vec<(f64, Vec<f64>)> = t
        .blocks()
        .into_par_iter()
        .flat_map_iter(|r| {
            let b = t.sub(r.clone());
            let vals = b.eigenvalues();
            let vecs = eigenvectors_of(&b, &vals);
            vals.into_iter().zip(vecs).map(move |(v, x)| {
                let mut full = vec![0.0; n];
                full[r.clone()].copy_from_slice(&x);
                (v, full)
            }).collect::<Vec<_>>()
        })
        .collect();
    let mut parts = parts;
    parts.sort_by(|a, b| a.0.total_cmp(&b.0));
    parts.into_iter().unzip()
}

/// One eigenvalue of the truncated matrix outside the band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundEig {
    pub value: f64,
    /// Distance to the band `[0, 4λ]`.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub half_width: usize,
    pub bound_eigs: Vec<BoundEig>,
    /// `‖Tv − νv‖` for the inverse-iteration vector of each bound value.
    pub residuals: Vec<f64>,
    pub essential_band: [f64; 2],
    /// Sturm count below `−BAND_TOLERANCE`.
    pub count_below: usize,
    /// Number of eigenvalues above `4λ + BAND_TOLERANCE`.
    pub count_above: usize,
}

impl OracleReport {
    pub fn values(&self) -> Vec<f64> {
        self.bound_eigs.iter().map(|b| b.value).collect()
    }
}

/// `(below, above)` counts of eigenvalues outside the band, from two Sturm
/// sequences.
pub fn bound_state_counts(m: &TridiagonalH) -> (usize, usize) {
    let top = 4.0 * m.lambda;
    let below = m.sturm_count(-BAND_TOLERANCE);
    let above = m.len() - m.sturm_count(top + BAND_TOLERANCE);
    (below, above)
}

pub fn eigenvalues_outside_band(m: &TridiagonalH) -> OracleReport {
    let top = 4.0 * m.lambda;
    let (below, above) = bound_state_counts(m);
    let idx: Vec<usize> = (0..below).chain(m.len() - above..m.len()).collect();
    let values: Vec<f64> = idx.par_iter().map(|&k| m.eigenvalue(k)).collect();
    let vectors = eigenvectors_of(m, &values);
    let residuals = values
        .iter()
        .zip(&vectors)
        .map(|(&nu, v)| {
            let r: Vec<f64> = m.matvec(v).iter().zip(v).map(|(a, b)| a - nu * b).collect();
            norm2(&r)
        })
        .collect();
    let bound_eigs = values
        .iter()
        .map(|&value| BoundEig {
            value,
            gap: if value < 0.0 { -value } else { value - top },
        })
        .collect();
    OracleReport {
        half_width: m.half_width,
        bound_eigs,
        residuals,
        essential_band: [0.0, top],
        count_below: below,
        count_above: above,
    }
}

/// Unit eigenvectors (site order `−N..=N`) for the bound values in
/// `report`, by inverse iteration.
pub fn bound_eigenvectors(m: &TridiagonalH, report: &OracleReport) -> Vec<Vec<f64>> {
    eigenvectors_of(m, &report.values())
}

/// Full eigendecomposition `T = Σ ν_j v_j v_jᵀ` of a truncated matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl SpectralDecomposition {
    pub fn new(m: &TridiagonalH) -> Self {
        let (values, vectors) = eigenpairs(m);
        SpectralDecomposition { values, vectors }
    }

    /// `e^{−itT} f0`.
    pub fn evolve(&self, f0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
        if !t.is_finite() {
            return Err(Error::NonFinite { name: "t", value: t });
        }
        let n = self.values.len();
        if f0.len() != n {
            return Err(Error::Internal(format!(
                "initial state has {} sites, the decomposition {n}",
                f0.len()
            )));
        }
        if t == 0.0 {
            return Ok(f0.to_vec());
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (&nu, v) in self.values.iter().zip(&self.vectors) {
            let c: Complex64 = v.iter().zip(f0).map(|(a, b)| b * *a).sum();
            let c = c * Complex64::from_polar(1.0, -nu * t);
            for (o, a) in out.iter_mut().zip(v) {
                *o += c * *a;
            }
        }
        Ok(out)
    }
}

/// `e^{−itH_N} f0` for an initial state on `−N..=N` (`f0.len() = 2N + 1`).
pub fn evolve(p: &PhysicalParams, f0: &[Complex64], t: f64, n: usize) -> Result<Vec<Complex64>> {
    if !t.is_finite() {
        return Err(Error::NonFinite { name: "t", value: t });
    }
    if f0.len() != 2 * n + 1 {
        return Err(Error::OutOfDomain {
            what: "evolve",
            value: f0.len() as f64,
            domain: "initial state of length 2N+1",
        });
    }
    if f0.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return Err(Error::OutOfDomain {
            what: "evolve",
            value: 0.0,
            domain: "nonzero initial state",
        });
    }
    if t == 0.0 {
        return Ok(f0.to_vec());
    }
    let m = build_truncated(p, n)?;
    SpectralDecomposition::new(&m).evolve(f0, t)
}
