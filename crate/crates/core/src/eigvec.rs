//! Bound-state eigenvectors on a finite window `−N..=N`.
//!
//! Every vector is built from the closed-form lattice integrals
//! `I_k(γ) = g(γ)(−1/l(γ))^|k|`, computed once for `k ≥ 0` and mirrored with
//! the parity sign, so parity holds bit for bit.
//!
//! * Odd vector at `κ` (`γ_δ`, where `l = δ`): `f₀ = 0`,
//!   `f_k = (δ/2)(I_{k−1} − I_{k+1})` for `k ≥ 1`.
//! * Even vector at a secular root: `f_k = f₁′(δJ_k − αI_k) + f₀(σI_k − αJ_k)`
//!   with `J_k = (I_{k+1} + I_{k−1})/2` and `(f₀, f₁′)` a null vector of the
//!   2×2 block of the reduced system.
//!
//! Vectors are scaled to unit ℓ₂ norm over the window.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{apply_hamiltonian, norm2, NormalizedParams, PhysicalParams};
use crate::spectrum::{self, gamma_delta, gamma_of_nu, kappa, nu_of_gamma, Origin, EigenvalueRecord};
use crate::specfun;

/// Smallest half-width accepted for eigenvector tables.
pub const MIN_HALF_WIDTH: usize = 5;

/// Relative tolerance on `F(γ) − (α+1)²` for accepting `γ` as a root.
pub const ROOT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VectorParity {
    Odd,
    Even,
}

impl VectorParity {
    fn sign(self) -> f64 {
        match self {
            VectorParity::Odd => -1.0,
            VectorParity::Even => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    #[serde(rename = "unit-l2")]
    UnitL2,
}

/// An eigenvector sampled on sites `−N..=N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenvectorTable {
    pub half_width: usize,
    /// `values[N + k] = f_k`.
    pub values: Vec<f64>,
    pub parity: VectorParity,
    pub gamma: f64,
    pub nu: f64,
    /// `|f_{k+1}/f_k|` in the tail, `1/|l(γ)|`; zero for finitely
    /// supported vectors.
    pub decay_rate: f64,
    pub normalization: Normalization,
}

impl EigenvectorTable {
    /// `f_k`, or `None` outside the window.
    pub fn get(&self, k: i64) -> Option<f64> {
        let i = k.checked_add(self.half_width as i64)?;
        usize::try_from(i).ok().and_then(|i| self.values.get(i).copied())
    }

    /// `(k, f_k)` pairs from `−N` to `N`.
    pub fn sites(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let n = self.half_width as i64;
        self.values.iter().enumerate().map(move |(i, &f)| (i as i64 - n, f))
    }

    /// Inner product over the window, accumulated in mirrored pairs
    /// `f_k g_k + f_{−k} g_{−k}` so that an odd and an even table give
    /// exactly zero.
    pub fn dot(&self, other: &EigenvectorTable) -> f64 {
        assert_eq!(self.half_width, other.half_width, "tables on different windows");
        let n = self.half_width;
        let (a, b) = (&self.values, &other.values);
        let mut sum = a[n] * b[n];
        for k in 1..=n {
            sum += a[n + k] * b[n + k] + a[n - k] * b[n - k];
        }
        sum
    }

    /// Builds a table from the components `f_0..=f_N`, mirroring with the
    /// parity sign and scaling to unit norm.
    fn from_half(
        half: Vec<f64>,
        parity: VectorParity,
        gamma: f64,
        nu: f64,
        decay_rate: f64,
    ) -> Result<Self> {
        let n = half.len() - 1;
        let sign = parity.sign();
        let mut values = vec![0.0; 2 * n + 1];
        for (k, &f) in half.iter().enumerate() {
            values[n + k] = f;
            values[n - k] = sign * f;
        }
        if parity == VectorParity::Odd {
            values[n] = 0.0;
        }
        let norm = norm2(&values);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Internal(format!(
                "eigenvector at gamma = {gamma} has norm {norm}"
            )));
        }
        let scale = 1.0 / norm;
        for x in &mut values {
            *x *= scale;
        }
        Ok(EigenvectorTable {
            half_width: n,
            values,
            parity,
            gamma,
            nu,
            decay_rate,
            normalization: Normalization::UnitL2,
        })
    }
}

fn check_half_width(n: usize) -> Result<()> {
    if n < MIN_HALF_WIDTH {
        return Err(Error::WindowTooSmall {
            min: 2 * MIN_HALF_WIDTH + 1,
            got: 2 * n + 1,
        });
    }
    Ok(())
}

/// `I_0..=I_{N+1}` at `gamma`.
fn moments(gamma: f64, n: usize) -> Result<Vec<f64>> {
    specfun::lattice_integrals(gamma, n + 1)
}

/// `J_k = (I_{k+1} + I_{k−1})/2` for `k = 0..=N`, using `I_{−1} = I_1`.
fn shifted(i: &[f64], n: usize) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            let below = if k == 0 { i[1] } else { i[k - 1] };
            0.5 * (i[k + 1] + below)
        })
        .collect()
}

/// The odd eigenvector at `κ`. Requires `|δ| > 1`.
pub fn odd_eigenvector(p: &PhysicalParams, n: usize) -> Result<EigenvectorTable> {
    check_half_width(n)?;
    let np = p.normalize()?;
    if np.delta.abs() <= 1.0 {
        return Err(Error::NoKappa(np.delta.abs()));
    }
    let gamma = gamma_delta(np.delta).expect("|delta| > 1");
    let i = moments(gamma, n)?;
    let half: Vec<f64> = (0..=n)
        .map(|k| if k == 0 { 0.0 } else { 0.5 * np.delta * (i[k - 1] - i[k + 1]) })
        .collect();
    let decay = 1.0 / np.delta.abs();
    EigenvectorTable::from_half(half, VectorParity::Odd, gamma, kappa(p)?, decay)
}

/// Null vector `(f₀, f₁′)` of a 2×2 matrix of rank at most one, taken from
/// its larger row. A zero matrix yields `(0, 1)`.
fn null_vector(block: &[[f64; 2]; 2]) -> (f64, f64) {
    let [r1, r2] = *block;
    let n1 = r1[0].hypot(r1[1]);
    let n2 = r2[0].hypot(r2[1]);
    let [a, b] = if n1 >= n2 { r1 } else { r2 };
    if a == 0.0 && b == 0.0 {
        (0.0, 1.0)
    } else {
        (b, -a)
    }
}

fn even_from_seed(n_params: &NormalizedParams, gamma: f64, f0: f64, f1: f64, n: usize) -> Result<Vec<f64>> {
    let i = moments(gamma, n)?;
    let j = shifted(&i, n);
    let (a, d, s) = (n_params.alpha, n_params.delta, n_params.sigma);
    Ok((0..=n)
        .map(|k| f1 * (d * j[k] - a * i[k]) + f0 * (s * i[k] - a * j[k]))
        .collect())
}

/// The even eigenvector at a root `gamma` of `F(γ) = (α+1)²`.
///
/// `gamma` is accepted when `|F(γ) − (α+1)²|` is at most
/// [`ROOT_TOLERANCE`] times the magnitude of the product's factors.
pub fn even_eigenvector(p: &PhysicalParams, gamma: f64, n: usize) -> Result<EigenvectorTable> {
    check_half_width(n)?;
    let np = p.normalize()?;
    if p.is_alpha_minus_one() {
        return Err(Error::AlphaMinusOne);
    }
    if !(gamma.is_finite() && gamma.abs() > 1.0) {
        return Err(Error::OutOfDomain {
            what: "even_eigenvector",
            value: gamma,
            domain: "|gamma| > 1",
        });
    }
    let l = specfun::l(gamma)?;
    let residual = (gamma - np.sigma) * (l - np.delta) - np.target();
    let scale = (gamma.abs() + np.sigma.abs()) * (l.abs() + np.delta.abs()) + np.target();
    if residual.abs() > ROOT_TOLERANCE * scale.max(1.0) {
        return Err(Error::NotARoot { gamma, residual });
    }
    let rank = spectrum::system_rank(&np, gamma)?;
    if rank.singular_values.iter().filter(|&&x| x > spectrum::RANK_TOLERANCE * rank.scale).count() != 2 {
        return Err(Error::Internal(format!(
            "reduced system at gamma = {gamma} has rank {} (expected 2)",
            rank.rank
        )));
    }
    let (f0, f1) = null_vector(&rank.block);
    let half = even_from_seed(&np, gamma, f0, f1, n)?;
    EigenvectorTable::from_half(half, VectorParity::Even, gamma, nu_of_gamma(p.lambda, gamma), 1.0 / l.abs())
}

/// Eigenvectors on the plane `α = −1`: `e₀` (eigenvalue `μ`, exact), then,
/// when `|δ| > 1`, the odd and the even vector at `κ`.
pub fn alpha_minus_one_vectors(p: &PhysicalParams, n: usize) -> Result<Vec<EigenvectorTable>> {
    check_half_width(n)?;
    let np = p.normalize()?;
    if !p.is_alpha_minus_one() {
        return Err(Error::NotAlphaMinusOne(np.alpha));
    }
    let mut e0 = vec![0.0; n + 1];
    e0[0] = 1.0;
    let mut out = vec![EigenvectorTable::from_half(
        e0,
        VectorParity::Even,
        gamma_of_nu(p.lambda, p.mu),
        p.mu,
        0.0,
    )?];
    if np.delta.abs() > 1.0 {
        out.push(odd_eigenvector(p, n)?);
        // Site 0 is decoupled, so an eigenvector at κ ≠ μ vanishes there.
        // At l(γ_δ) = δ the first row of the block is (1 + h − σg, 0), so
        // its null vector is (f₀, f₁′) = (0, 1) — also when the whole block
        // vanishes at the μ = κ collision.
        let gamma = gamma_delta(np.delta).expect("|delta| > 1");
        let mut half = even_from_seed(&np, gamma, 0.0, 1.0, n)?;
        half[0] = 0.0;
        out.push(EigenvectorTable::from_half(
            half,
            VectorParity::Even,
            gamma,
            kappa(p)?,
            1.0 / np.delta.abs(),
        )?);
    }
    Ok(out)
}

/// All eigenvectors belonging to one record of
/// [`discrete_spectrum`](crate::spectrum::discrete_spectrum).
pub fn eigenvectors_for(p: &PhysicalParams, rec: &EigenvalueRecord, n: usize) -> Result<Vec<EigenvectorTable>> {
    if p.is_alpha_minus_one() {
        let mut all = alpha_minus_one_vectors(p, n)?;
        return Ok(match rec.origin {
            Origin::AlphaMinusOneMu => {
                all.truncate(1);
                all
            }
            // at the μ = κ collision the record also owns e₀
            _ if rec.multiplicity == 3 => all,
            _ => all.split_off(1),
        });
    }
    match rec.origin {
        Origin::ExplicitKappa => Ok(vec![odd_eigenvector(p, n)?]),
        Origin::RootOfF => Ok(vec![even_eigenvector(p, rec.gamma, n)?]),
        Origin::AlphaMinusOneMu => Err(Error::AlphaMinusOne),
    }
}

/// `‖Hf − νf‖ / ‖f‖` on the window, treating sites beyond it as zero.
pub fn residual(p: &PhysicalParams, t: &EigenvectorTable) -> Result<f64> {
    let hf = apply_hamiltonian(p, &t.values)?;
    let r: Vec<f64> = hf.iter().zip(&t.values).map(|(h, f)| h - t.nu * f).collect();
    Ok(norm2(&r) / norm2(&t.values))
}
