//! The discrete spectrum of `H`.
//!
//! Eigenvalues `ν` outside the band `[0, 4λ]` are parametrised by
//! `γ = ν/(2λ) − 1`, `|γ| > 1`. They come from two sources:
//!
//! * the odd eigenvalue `κ = (μ₁ + λ)²/μ₁`, present iff `|δ| > 1`
//!   (it sits at `γ_δ = (δ² + 1)/(2δ)`, the root of `l(γ) = δ`);
//! * the even eigenvalues, roots of `F(γ) = (γ − σ)(l(γ) − δ) = (α + 1)²`.
//!
//! On the plane `α = −1` the secular equation degenerates and the spectrum
//! is `{μ, κ}` restricted to whichever of them lies outside the band.
//!
//! # Root finding
//!
//! On each side of the band both factors of `F` are increasing in `γ`, so
//! `F = (α+1)² > 0` can only hold where the factors share a sign, and there
//! `F` is monotone. Each such piece holds at most one root and is bisected.
//! The search runs in `s = √(γ² − 1)` rather than `γ`: `F` has an infinite
//! slope in `γ` at `|γ| = 1` but is smooth in `s`, which keeps weakly bound
//! roots well conditioned.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, Region, RegionTag};
use crate::error::{Error, Result};
use crate::model::{NormalizedParams, PhysicalParams};
use crate::specfun;

/// Doubling steps allowed when growing an open-ended bracket.
pub const MAX_DOUBLINGS: usize = 200;

/// Relative threshold below which a singular value counts as zero in
/// [`system_rank`].
pub const RANK_TOLERANCE: f64 = 1e-9;

/// Relative tolerance for treating `μ` and `κ` as the same eigenvalue.
pub const COLLISION_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Origin {
    ExplicitKappa,
    RootOfF,
    AlphaMinusOneMu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
    Both,
}

/// One eigenvalue of `H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueRecord {
    pub nu: f64,
    /// Always `nu / (2λ) − 1`.
    pub gamma: f64,
    pub origin: Origin,
    pub parity: Parity,
    pub multiplicity: u32,
    /// γ-interval the root was bisected in (secular roots only).
    pub bracket: Option<[f64; 2]>,
    /// `true` for the eigenvalue `μ ∈ [0, 4λ]` at `α = −1`, which lies in the
    /// essential spectrum and is not part of the discrete spectrum.
    pub embedded: bool,
}

impl EigenvalueRecord {
    fn new(
        p: &PhysicalParams,
        nu: f64,
        origin: Origin,
        parity: Parity,
        multiplicity: u32,
        bracket: Option<[f64; 2]>,
    ) -> Self {
        let lambda = p.lambda;
        EigenvalueRecord {
            nu,
            gamma: gamma_of_nu(lambda, nu),
            origin,
            parity,
            multiplicity,
            bracket,
            embedded: false,
        }
    }
}

pub fn gamma_of_nu(lambda: f64, nu: f64) -> f64 {
    nu / (2.0 * lambda) - 1.0
}

pub fn nu_of_gamma(lambda: f64, gamma: f64) -> f64 {
    2.0 * lambda * (gamma + 1.0)
}

/// `γ_δ = (δ² + 1)/(2δ)`, the solution of `l(γ) = δ`; exists iff `|δ| ≥ 1`.
pub fn gamma_delta(delta: f64) -> Option<f64> {
    (delta.abs() >= 1.0).then(|| 0.5 * (delta + 1.0 / delta))
}

/// Zeros of `F` and the right-hand side of the secular equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverBrackets {
    pub gamma_delta: Option<f64>,
    pub gamma_min: Option<f64>,
    pub gamma_max: Option<f64>,
    pub target: f64,
}

pub fn solver_brackets(n: &NormalizedParams) -> SolverBrackets {
    let gd = gamma_delta(n.delta);
    let (gamma_min, gamma_max) = match gd {
        Some(g) => (Some(n.sigma.min(g)), Some(n.sigma.max(g))),
        None => (None, None),
    };
    SolverBrackets {
        gamma_delta: gd,
        gamma_min,
        gamma_max,
        target: n.target(),
    }
}

/// `κ = (μ₁ + λ)²/μ₁`.
pub fn kappa(p: &PhysicalParams) -> Result<f64> {
    p.validate()?;
    if p.mu1 == 0.0 {
        return Err(Error::OutOfDomain {
            what: "kappa",
            value: p.mu1,
            domain: "mu1 != 0",
        });
    }
    Ok((p.mu1 + p.lambda) * (p.mu1 + p.lambda) / p.mu1)
}

/// A root of `F(γ) = (α + 1)²` with the γ-interval it was found in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecularRoot {
    pub gamma: f64,
    pub bracket: [f64; 2],
}

/// `F` restricted to one side of the band, as a function of
/// `s = √(γ² − 1) ≥ 0`. The left side is folded onto the right by
/// `(γ, δ, σ) → (−γ, −δ, −σ)`, which leaves `F` invariant.
#[derive(Debug, Clone, Copy)]
struct Side {
    delta: f64,
    sigma: f64,
    /// `F(±1) − (α + 1)²`, i.e. `c₁` on the right and `c₂` on the left.
    edge: f64,
    target: f64,
    sign: f64,
}

impl Side {
    fn f(&self, s: f64) -> f64 {
        let gamma = (1.0 + s * s).sqrt();
        (gamma - self.sigma) * (gamma + s - self.delta)
    }

    fn gamma(&self, s: f64) -> f64 {
        self.sign * (1.0 + s * s).sqrt()
    }

    /// Positions in `s > 0` where one factor of `F` vanishes.
    fn zeros(&self) -> (Option<f64>, Option<f64>) {
        let zs = (self.sigma > 1.0).then(|| ((self.sigma - 1.0) * (self.sigma + 1.0)).sqrt());
        let zd = (self.delta > 1.0).then(|| 0.5 * (self.delta - 1.0 / self.delta));
        (zs, zd)
    }

    /// Roots on this side, as `(s, s_lo, s_hi)` with the initial bracket.
    fn roots(&self) -> Result<Vec<(f64, f64, f64)>> {
        let mut out = Vec::new();
        let g = |s: f64| self.f(s) - self.target;
        match self.zeros() {
            (Some(a), Some(b)) => {
                let (lo, hi) = (a.min(b), a.max(b));
                // both factors negative on (0, lo): F falls from F(±1) to 0
                if self.edge > 0.0 {
                    out.push((bisect(&g, 0.0, lo, false), 0.0, lo));
                }
                // both factors positive on (hi, ∞): F rises from 0 to ∞
                let top = grow(&g, hi)?;
                out.push((bisect(&g, hi, top, true), hi, top));
            }
            (Some(z), None) | (None, Some(z)) => {
                let top = grow(&g, z)?;
                out.push((bisect(&g, z, top, true), z, top));
            }
            (None, None) => {
                if self.edge < 0.0 {
                    let top = grow(&g, 0.0)?;
                    out.push((bisect(&g, 0.0, top, true), 0.0, top));
                }
            }
        }
        Ok(out)
    }
}

/// Upper end of an increasing piece starting at `from`: double the offset
/// until `g` turns positive.
fn grow(g: &impl Fn(f64) -> f64, from: f64) -> Result<f64> {
    let mut offset = 1.0;
    for _ in 0..MAX_DOUBLINGS {
        let hi = from + offset;
        if g(hi) > 0.0 {
            return Ok(hi);
        }
        offset *= 2.0;
    }
    Err(Error::Internal(format!(
        "no sign change of the secular function within {MAX_DOUBLINGS} doublings from s = {from}"
    )))
}

/// Bisection of a monotone `g` on `[lo, hi]` down to adjacent floats.
fn bisect(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, increasing: bool) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = g(mid);
        if v == 0.0 {
            return mid;
        }
        if (v < 0.0) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (a, b) = (g(lo).abs(), g(hi).abs());
    if a <= b {
        lo
    } else {
        hi
    }
}

fn secular_roots(n: &NormalizedParams) -> Result<Vec<SecularRoot>> {
    let target = n.target();
    let sides = [
        Side {
            delta: -n.delta,
            sigma: -n.sigma,
            edge: n.c2,
            target,
            sign: -1.0,
        },
        Side {
            delta: n.delta,
            sigma: n.sigma,
            edge: n.c1,
            target,
            sign: 1.0,
        },
    ];
    let mut out = Vec::new();
    for side in sides {
        for (s, lo, hi) in side.roots()? {
            let (a, b) = (side.gamma(lo), side.gamma(hi));
            out.push(SecularRoot {
                gamma: side.gamma(s),
                bracket: [a.min(b), a.max(b)],
            });
        }
    }
    out.sort_by(|x, y| x.gamma.total_cmp(&y.gamma));
    Ok(out)
}

/// Roots of `F(γ) = (α + 1)²` with `|γ| > 1`, in increasing order.
///
/// The number of roots is cross-checked against what `region` prescribes;
/// a disagreement means the classification and the solver have diverged
/// and is reported as an internal error.
pub fn solve_secular(n: &NormalizedParams, region: &Region) -> Result<Vec<SecularRoot>> {
    if n.alpha == -1.0 || region.tag == RegionTag::AlphaMinusOne {
        return Err(Error::AlphaMinusOne);
    }
    let roots = secular_roots(n)?;
    if let Some(expected) = region.secular_root_count() {
        if expected != roots.len() {
            return Err(Error::Internal(format!(
                "region {} prescribes {expected} secular roots, solver found {} (alpha {}, delta {}, sigma {})",
                region.tag,
                roots.len(),
                n.alpha,
                n.delta,
                n.sigma
            )));
        }
    }
    Ok(roots)
}

/// All eigenvalues of `H` outside the band, plus the embedded eigenvalue
/// `μ` when `α = −1` and `μ ∈ [0, 4λ]`. Sorted by `nu`.
pub fn discrete_spectrum(p: &PhysicalParams) -> Result<Vec<EigenvalueRecord>> {
    let n = p.normalize()?;
    let region = classify(&n);
    let delta_out = n.delta.abs() > 1.0;
    let mut out = Vec::new();

    if region.tag == RegionTag::AlphaMinusOne {
        let sigma_out = n.sigma.abs() > 1.0;
        let k = if delta_out { Some(kappa(p)?) } else { None };
        let collide = match k {
            Some(k) if sigma_out => {
                p.mu == k || (p.mu - k).abs() <= COLLISION_TOLERANCE * p.mu.abs().max(k.abs())
            }
            _ => false,
        };
        if collide {
            // e₀ and both half-chain states share the eigenvalue
            let k = k.unwrap();
            out.push(EigenvalueRecord::new(p, k, Origin::ExplicitKappa, Parity::Both, 3, None));
        } else {
            if sigma_out {
                out.push(EigenvalueRecord::new(p, p.mu, Origin::AlphaMinusOneMu, Parity::Even, 1, None));
            }
            if let Some(k) = k {
                out.push(EigenvalueRecord::new(p, k, Origin::ExplicitKappa, Parity::Both, 2, None));
            }
        }
        if !sigma_out {
            let mut rec = EigenvalueRecord::new(p, p.mu, Origin::AlphaMinusOneMu, Parity::Even, 1, None);
            rec.embedded = true;
            out.push(rec);
        }
    } else {
        for root in solve_secular(&n, &region)? {
            let nu = nu_of_gamma(p.lambda, root.gamma);
            out.push(EigenvalueRecord::new(
                p,
                nu,
                Origin::RootOfF,
                Parity::Even,
                1,
                Some(root.bracket),
            ));
        }
        if delta_out {
            out.push(EigenvalueRecord::new(p, kappa(p)?, Origin::ExplicitKappa, Parity::Odd, 1, None));
        }
    }
    out.sort_by(|a, b| a.nu.total_cmp(&b.nu));
    Ok(out)
}

/// [`discrete_spectrum`] over many parameter sets, evaluated in parallel.
/// Results come back in input order.
pub fn discrete_spectra(params: &[PhysicalParams]) -> Vec<Result<Vec<EigenvalueRecord>>> {
    params.par_iter().map(discrete_spectrum).collect()
}

fn require_outside(what: &'static str, gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma.abs() > 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            what,
            value: gamma,
            domain: "|gamma| > 1",
        })
    }
}

/// Determinant of the reduced 3×3 system,
/// `D′ = −h(γ) l(γ)⁻¹ (F(γ) − (α+1)²)(l(γ) − δ)`.
pub fn determinant_dprime(n: &NormalizedParams, gamma: f64) -> Result<f64> {
    require_outside("determinant_dprime", gamma)?;
    let h = specfun::h(gamma)?;
    let l = specfun::l(gamma)?;
    let f = (gamma - n.sigma) * (l - n.delta);
    Ok(-h / l * (f - n.target()) * (l - n.delta))
}

/// Coefficients and numerical rank of the reduced homogeneous system in the
/// unknowns `(f₀, (f₁ + f₋₁)/2, (f₁ − f₋₁)/2)`.
///
/// The system is block diagonal: a 2×2 block coupling the even unknowns and
/// a scalar for the odd one. The geometric multiplicity of an eigenvalue at
/// `γ` is `3 − rank`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    pub multiplicity: usize,
    /// Rows `[1 − αh − σg, αg + δh]` and `[σh + αv, 1 − αh − δv]`.
    pub block: [[f64; 2]; 2],
    /// `δ(g − v) − 1`.
    pub scalar: f64,
    /// Singular values of the full system, descending.
    pub singular_values: [f64; 3],
    /// Largest magnitude among the terms the coefficients are built from;
    /// singular values below `RANK_TOLERANCE · scale` count as zero.
    pub scale: f64,
}

pub fn system_rank(n: &NormalizedParams, gamma: f64) -> Result<RankReport> {
    require_outside("system_rank", gamma)?;
    let (g, h, v) = specfun::ghv(gamma)?;
    let (a, d, s) = (n.alpha, n.delta, n.sigma);
    let block = [
        [1.0 - a * h - s * g, a * g + d * h],
        [s * h + a * v, 1.0 - a * h - d * v],
    ];
    let scalar = d * (g - v) - 1.0;
    let scale = [
        1.0 + (a * h).abs() + (s * g).abs(),
        (a * g).abs() + (d * h).abs(),
        (s * h).abs() + (a * v).abs(),
        1.0 + (a * h).abs() + (d * v).abs(),
        d.abs() * (g.abs() + v.abs()) + 1.0,
    ]
    .into_iter()
    .fold(0.0, f64::max);

    let (big, small) = singular_values_2x2(&block);
    let mut sv = [big, small, scalar.abs()];
    sv.sort_by(|x, y| y.total_cmp(x));
    let cutoff = RANK_TOLERANCE * scale;
    let rank = sv.iter().filter(|&&x| x > cutoff).count();
    Ok(RankReport {
        rank,
        multiplicity: 3 - rank,
        block,
        scalar,
        singular_values: sv,
        scale,
    })
}

/// Singular values `(σ_max, σ_min)` of a real 2×2 matrix.
pub(crate) fn singular_values_2x2(m: &[[f64; 2]; 2]) -> (f64, f64) {
    let [[a, b], [c, d]] = *m;
    let fro2 = a * a + b * b + c * c + d * d;
    let det = a * d - b * c;
    let disc = ((a * a + b * b - c * c - d * d).powi(2) + 4.0 * (a * c + b * d).powi(2)).sqrt();
    let big = (0.5 * (fro2 + disc)).sqrt();
    let small = if big > 0.0 { det.abs() / big } else { 0.0 };
    (big, small)
}
