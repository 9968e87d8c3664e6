//! Physical couplings, the normalized parameter triple, and the action of
//! `H = H₀ + H₁` on finite windows of the lattice.
//!
//! Sequences over sites `-N..=N` are stored as slices of length `2N + 1`,
//! with site `n` at index `n + N`. Components outside the window are zero
//! (Dirichlet truncation).

use std::ops::{Add, Mul, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four real couplings of the Hamiltonian.
///
/// `lambda` is the hopping of the homogeneous chain. `lambda1` modifies the
/// two bonds touching site 0 (and the on-site term there), `mu` is the extra
/// potential on site 0 and `mu1` the potential on sites ±1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub lambda: f64,
    pub lambda1: f64,
    pub mu: f64,
    pub mu1: f64,
}

impl PhysicalParams {
    /// Validating constructor.
    pub fn new(lambda: f64, lambda1: f64, mu: f64, mu1: f64) -> Result<Self> {
        let p = PhysicalParams {
            lambda,
            lambda1,
            mu,
            mu1,
        };
        p.validate()?;
        Ok(p)
    }

    /// Couplings with `lambda = 1` that realise a given `(alpha, delta, sigma)`.
    pub fn from_normalized(alpha: f64, delta: f64, sigma: f64) -> Result<Self> {
        PhysicalParams::new(1.0, alpha, 2.0 * (sigma - alpha), delta)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("lambda", self.lambda),
            ("lambda1", self.lambda1),
            ("mu", self.mu),
            ("mu1", self.mu1),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
        }
        if self.lambda <= 0.0 {
            return Err(Error::NonPositiveLambda(self.lambda));
        }
        Ok(())
    }

    pub fn normalize(&self) -> Result<NormalizedParams> {
        normalize(self)
    }

    /// Upper edge `4λ` of the essential spectrum `[0, 4λ]`.
    pub fn band_top(&self) -> f64 {
        4.0 * self.lambda
    }

    /// Coupling on the two bonds touching site 0.
    pub(crate) fn center_bond(&self) -> f64 {
        self.lambda + self.lambda1
    }

    /// `true` when the centre site decouples (`λ₁ = −λ`).
    pub fn is_alpha_minus_one(&self) -> bool {
        self.center_bond() == 0.0
    }
}

/// Dimensionless parameters `α = λ₁/λ`, `δ = μ₁/λ`, `σ = (2λ₁ + μ)/(2λ)`
/// together with the two discriminants that drive the classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedParams {
    pub alpha: f64,
    pub delta: f64,
    pub sigma: f64,
    /// `(δ − 1)(σ − 1) − (α + 1)²`
    pub c1: f64,
    /// `(δ + 1)(σ + 1) − (α + 1)²`
    pub c2: f64,
}

impl NormalizedParams {
    pub fn new(alpha: f64, delta: f64, sigma: f64) -> Self {
        let t = (alpha + 1.0) * (alpha + 1.0);
        NormalizedParams {
            alpha,
            delta,
            sigma,
            c1: (delta - 1.0) * (sigma - 1.0) - t,
            c2: (delta + 1.0) * (sigma + 1.0) - t,
        }
    }

    /// Right-hand side `(α + 1)²` of the secular equation.
    pub fn target(&self) -> f64 {
        (self.alpha + 1.0) * (self.alpha + 1.0)
    }

    /// The image under `(δ, σ) → (−δ, −σ)`, which reflects the spectrum
    /// about the band centre.
    pub fn mirrored(&self) -> Self {
        NormalizedParams::new(self.alpha, -self.delta, -self.sigma)
    }
}

pub fn normalize(p: &PhysicalParams) -> Result<NormalizedParams> {
    p.validate()?;
    let alpha = p.lambda1 / p.lambda;
    let delta = p.mu1 / p.lambda;
    let sigma = (2.0 * p.lambda1 + p.mu) / (2.0 * p.lambda);
    Ok(NormalizedParams::new(alpha, delta, sigma))
}

/// Field types the Hamiltonian can act on (real or complex amplitudes).
pub trait Amplitude:
    Copy + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
}

impl<T> Amplitude for T where
    T: Copy + Zero + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>
{
}

/// Smallest window accepted by [`apply_hamiltonian`]: sites `-2..=2`.
pub const MIN_WINDOW: usize = 5;

/// Half-width `N` of a window of `len = 2N + 1` sites.
pub fn half_width_of(len: usize) -> Result<usize> {
    if len < MIN_WINDOW {
        return Err(Error::WindowTooSmall {
            min: MIN_WINDOW,
            got: len,
        });
    }
    if len.is_multiple_of(2) {
        return Err(Error::EvenLength(len));
    }
    Ok(len / 2)
}

/// `(Hf)_n` for every site of the window.
///
/// The three perturbed rows are written in terms of the centre bond
/// `λ + λ₁`, so that for `λ₁ = −λ` the centre row reduces to `μ f₀` with no
/// rounding beyond the single product.
pub fn apply_hamiltonian<T: Amplitude>(p: &PhysicalParams, f: &[T]) -> Result<Vec<T>> {
    p.validate()?;
    let n = half_width_of(f.len())?;
    let len = f.len();
    let lam = p.lambda;
    let at = |i: isize| -> T {
        if i < 0 || i as usize >= len {
            T::zero()
        } else {
            f[i as usize]
        }
    };

    let mut out: Vec<T> = (0..len as isize)
        .map(|i| (at(i) * 2.0 - at(i + 1) - at(i - 1)) * lam)
        .collect();

    let c = n;
    let bond = p.center_bond();
    let (fm, f0, fp) = (f[c - 1], f[c], f[c + 1]);
    out[c] = (f0 * 2.0 - fp - fm) * bond + f0 * p.mu;
    out[c + 1] = (fp * 2.0 - at(c as isize + 2)) * lam + fp * p.mu1 - f0 * bond;
    out[c - 1] = (fm * 2.0 - at(c as isize - 2)) * lam + fm * p.mu1 - f0 * bond;
    Ok(out)
}

/// Euclidean norm of a real vector.
pub(crate) fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn unit(n: usize, site: isize) -> Vec<f64> {
        let mut v = vec![0.0; 2 * n + 1];
        v[(site + n as isize) as usize] = 1.0;
        v
    }

    // Dense matrix assembled entry by entry from the definition of H₀ and H₁.
    fn dense(p: &PhysicalParams, n: usize) -> Vec<Vec<f64>> {
        let len = 2 * n + 1;
        let mut m = vec![vec![0.0; len]; len];
        for i in 0..len {
            m[i][i] = 2.0 * p.lambda;
            if i + 1 < len {
                m[i][i + 1] = -p.lambda;
                m[i + 1][i] = -p.lambda;
            }
        }
        let c = n;
        // H₁e₀ = −λ₁(e₁ − 2e₀ + e₋₁) + μe₀
        m[c][c] += 2.0 * p.lambda1 + p.mu;
        m[c + 1][c] += -p.lambda1;
        m[c - 1][c] += -p.lambda1;
        // H₁e±1 = −λ₁e₀ + μ₁e±1
        m[c][c + 1] += -p.lambda1;
        m[c][c - 1] += -p.lambda1;
        m[c + 1][c + 1] += p.mu1;
        m[c - 1][c - 1] += p.mu1;
        m
    }

    #[test]
    fn normalize_examples() {
        let n = normalize(&PhysicalParams::new(1.0, 0.0, 4.0, 3.0).unwrap()).unwrap();
        assert_eq!((n.alpha, n.delta, n.sigma, n.c1, n.c2), (0.0, 3.0, 2.0, 1.0, 11.0));

        let n = normalize(&PhysicalParams::new(1.0, 0.0, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!((n.alpha, n.delta, n.sigma, n.c1, n.c2), (0.0, 0.0, 0.0, 0.0, 0.0));

        let n = normalize(&PhysicalParams::new(2.0, -2.0, 12.0, 6.0).unwrap()).unwrap();
        assert_eq!((n.alpha, n.delta, n.sigma, n.c1, n.c2), (-1.0, 3.0, 2.0, 2.0, 12.0));
    }

    #[test]
    fn rejects_bad_lambda() {
        assert_eq!(
            PhysicalParams::new(0.0, 1.0, 1.0, 1.0),
            Err(Error::NonPositiveLambda(0.0))
        );
        assert!(PhysicalParams::new(-1.0, 1.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, f64::NAN, 1.0, 1.0).is_err());
        let raw = PhysicalParams {
            lambda: -2.0,
            lambda1: 0.0,
            mu: 0.0,
            mu1: 0.0,
        };
        assert!(normalize(&raw).is_err());
    }

    #[test]
    fn from_normalized_round_trips() {
        let p = PhysicalParams::from_normalized(0.5, -2.0, 1.25).unwrap();
        let n = p.normalize().unwrap();
        assert_eq!((n.alpha, n.delta, n.sigma), (0.5, -2.0, 1.25));
    }

    #[test]
    fn decoupled_center_is_exact() {
        for &mu in &[0.1, 2.0, 6.0, -3.7, 1.0 / 3.0] {
            let p = PhysicalParams::new(1.0, -1.0, mu, 3.0).unwrap();
            let out = apply_hamiltonian(&p, &unit(6, 0)).unwrap();
            let mut expect = vec![0.0; 13];
            expect[6] = mu;
            assert_eq!(out, expect);
        }
        let p = PhysicalParams::new(0.7, -0.7, 0.3, 3.0).unwrap();
        let out = apply_hamiltonian(&p, &unit(4, 0)).unwrap();
        assert_eq!(out[4], 0.3);
    }

    #[test]
    fn homogeneous_row() {
        let p = PhysicalParams::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let out = apply_hamiltonian(&p, &unit(8, 5)).unwrap();
        let mut expect = vec![0.0; 17];
        expect[8 + 6] = -1.0;
        expect[8 + 5] = 2.0;
        expect[8 + 4] = -1.0;
        assert_eq!(out, expect);
    }

    #[test]
    fn matches_dense_matrix() {
        let p = PhysicalParams::new(1.0, 0.0, 4.0, 3.0).unwrap();
        let n = 4;
        let m = dense(&p, n);
        for site in -(n as isize)..=(n as isize) {
            let out = apply_hamiltonian(&p, &unit(n, site)).unwrap();
            let col = (site + n as isize) as usize;
            for row in 0..2 * n + 1 {
                assert_eq!(out[row], m[row][col], "row {row} column site {site}");
            }
        }
        let p = PhysicalParams::new(1.3, 0.4, -2.0, 0.9).unwrap();
        let m = dense(&p, n);
        for site in -(n as isize)..=(n as isize) {
            let out = apply_hamiltonian(&p, &unit(n, site)).unwrap();
            let col = (site + n as isize) as usize;
            for row in 0..2 * n + 1 {
                assert!((out[row] - m[row][col]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn window_validation() {
        let p = PhysicalParams::new(1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(
            apply_hamiltonian(&p, &[0.0; 3]),
            Err(Error::WindowTooSmall { min: 5, got: 3 })
        );
        assert_eq!(apply_hamiltonian(&p, &[0.0; 6]), Err(Error::EvenLength(6)));
        assert!(apply_hamiltonian(&p, &[0.0; 5]).is_ok());
    }

    #[test]
    fn complex_amplitudes() {
        let p = PhysicalParams::new(1.0, 0.5, 1.0, -1.0).unwrap();
        let re: Vec<f64> = (0..11).map(|i| (i as f64).sin()).collect();
        let im: Vec<f64> = (0..11).map(|i| (i as f64 * 0.3).cos()).collect();
        let z: Vec<Complex64> = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let hz = apply_hamiltonian(&p, &z).unwrap();
        let hre = apply_hamiltonian(&p, &re).unwrap();
        let him = apply_hamiltonian(&p, &im).unwrap();
        for i in 0..11 {
            assert!((hz[i].re - hre[i]).abs() < 1e-14);
            assert!((hz[i].im - him[i]).abs() < 1e-14);
        }
    }

    fn params() -> impl Strategy<Value = PhysicalParams> {
        (0.1f64..5.0, -5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0)
            .prop_map(|(l, l1, m, m1)| PhysicalParams::new(l, l1, m, m1).unwrap())
    }

    proptest! {
        #[test]
        fn linear(p in params(),
                  f in prop::collection::vec(-1.0f64..1.0, 21),
                  g in prop::collection::vec(-1.0f64..1.0, 21),
                  a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let comb: Vec<f64> = f.iter().zip(&g).map(|(x, y)| a * x + b * y).collect();
            let lhs = apply_hamiltonian(&p, &comb).unwrap();
            let hf = apply_hamiltonian(&p, &f).unwrap();
            let hg = apply_hamiltonian(&p, &g).unwrap();
            let scale = norm2(&lhs).max(1.0);
            for i in 0..21 {
                let rhs = a * hf[i] + b * hg[i];
                prop_assert!((lhs[i] - rhs).abs() <= 1e-13 * scale);
            }
        }

        #[test]
        fn symmetric(p in params(),
                     f in prop::collection::vec(-1.0f64..1.0, 25),
                     g in prop::collection::vec(-1.0f64..1.0, 25)) {
            let hf = apply_hamiltonian(&p, &f).unwrap();
            let hg = apply_hamiltonian(&p, &g).unwrap();
            let a: f64 = hf.iter().zip(&g).map(|(x, y)| x * y).sum();
            let b: f64 = f.iter().zip(&hg).map(|(x, y)| x * y).sum();
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
    }
}
