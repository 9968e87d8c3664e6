//! Closed forms for the resolvent moments of the free chain.
//!
//! Everything here is a function of a real spectral coordinate `x` (or `γ`)
//! with `|x| > 1`, i.e. outside the band. The basic objects are the cosine
//! moments
//!
//! ```text
//! I_k(γ) = (1/2π) ∫_{-π}^{π} cos(kφ) / (cos φ + γ) dφ,
//! ```
//!
//! with `g = I₀`, `h = −I₁` and `v` the `cos²` moment. All of them reduce to
//! `g(γ) = sign(γ)/√(γ² − 1)` and the growth factor `l(γ)`:
//! `I_k = g(γ) · (−1/l(γ))^|k|`.
//!
//! [`quadrature_moment`] evaluates the same integrals by the periodic
//! trapezoid rule. It is only used to check the closed forms.

use std::f64::consts::PI;

use crate::error::{Error, Result};

fn outside_band(what: &'static str, x: f64) -> Result<()> {
    if x.is_finite() && x.abs() > 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            what,
            value: x,
            domain: "|x| > 1",
        })
    }
}

/// `√(x² − 1)` without cancellation near `|x| = 1`.
fn root_gap(x: f64) -> f64 {
    let a = x.abs();
    ((a - 1.0) * (a + 1.0)).sqrt()
}

/// `g(x) = 1 / (x √(1 − x⁻²))`.
pub fn g(x: f64) -> Result<f64> {
    outside_band("g", x)?;
    Ok(x.signum() / root_gap(x))
}

/// `h(x) = x g(x) − 1`.
///
/// Evaluated as `g(x) / l(x)`, which is the same quantity without the
/// cancellation `x g(x) − 1` suffers for large `|x|`.
pub fn h(x: f64) -> Result<f64> {
    outside_band("h", x)?;
    let s = root_gap(x);
    Ok(1.0 / (s * (x.abs() + s)))
}

/// `v(x) = x h(x)`.
pub fn v(x: f64) -> Result<f64> {
    Ok(x * h(x)?)
}

/// The three moments `(g, h, v)` at once.
pub fn ghv(x: f64) -> Result<(f64, f64, f64)> {
    outside_band("ghv", x)?;
    let s = root_gap(x);
    let g = x.signum() / s;
    let h = 1.0 / (s * (x.abs() + s));
    Ok((g, h, x * h))
}

/// `l(γ) = γ(1 + √(1 − γ⁻²))`, i.e. `γ ± √(γ² − 1)` with the sign of `γ`.
///
/// `|l(γ)| ≥ 1`, `l(±1) = ±1`, and `1/|l(γ)|` is the decay factor of a bound
/// state at `γ`.
pub fn l(gamma: f64) -> Result<f64> {
    if !(gamma.is_finite() && gamma.abs() >= 1.0) {
        return Err(Error::OutOfDomain {
            what: "l",
            value: gamma,
            domain: "|gamma| >= 1",
        });
    }
    Ok(gamma + gamma.signum() * root_gap(gamma))
}

/// Secular function `F(γ) = (γ − σ)(l(γ) − δ)`, defined for `|γ| ≥ 1`.
pub fn secular_f(gamma: f64, delta: f64, sigma: f64) -> Result<f64> {
    Ok((gamma - sigma) * (l(gamma)? - delta))
}

/// `I_k(γ)`, the k-th cosine moment of the free resolvent kernel.
pub fn lattice_integral(gamma: f64, k: i64) -> Result<f64> {
    outside_band("lattice_integral", gamma)?;
    let ratio = -1.0 / l(gamma)?;
    let k = k.unsigned_abs();
    let pow = if k <= i32::MAX as u64 {
        ratio.powi(k as i32)
    } else {
        0.0
    };
    Ok(g(gamma)? * pow)
}

/// `I_0(γ), …, I_kmax(γ)` by repeated multiplication with `−1/l(γ)`.
pub fn lattice_integrals(gamma: f64, kmax: usize) -> Result<Vec<f64>> {
    outside_band("lattice_integrals", gamma)?;
    let ratio = -1.0 / l(gamma)?;
    let mut out = Vec::with_capacity(kmax + 1);
    let mut cur = g(gamma)?;
    for _ in 0..=kmax {
        out.push(cur);
        cur *= ratio;
    }
    Ok(out)
}

/// Periodic trapezoid approximation of `I_k(γ)` with `nodes` samples.
///
/// Converges geometrically, roughly like `|l(γ)|^(−nodes)`.
///
/// Panics if `nodes < 64` or `|γ| ≤ 1`.
pub fn quadrature_moment(gamma: f64, k: i64, nodes: usize) -> f64 {
    assert!(nodes >= 64, "quadrature needs at least 64 nodes");
    assert!(gamma.abs() > 1.0, "quadrature needs |gamma| > 1");
    let step = 2.0 * PI / nodes as f64;
    let kf = k as f64;
    let sum: f64 = (0..nodes)
        .map(|j| {
            let phi = -PI + step * j as f64;
            (kf * phi).cos() / (phi.cos() + gamma)
        })
        .sum();
    sum / nodes as f64
}

/// Trapezoid approximation of `(1/2π) ∫ w(φ) / (cos φ + γ) dφ` for an
/// arbitrary smooth periodic weight.
pub fn quadrature_weighted(gamma: f64, nodes: usize, weight: impl Fn(f64) -> f64) -> f64 {
    assert!(nodes >= 64, "quadrature needs at least 64 nodes");
    let step = 2.0 * PI / nodes as f64;
    let sum: f64 = (0..nodes)
        .map(|j| {
            let phi = -PI + step * j as f64;
            weight(phi) / (phi.cos() + gamma)
        })
        .sum();
    sum / nodes as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn g_values() {
        let inv_sqrt3 = 1.0 / 3f64.sqrt();
        assert!(close(g(2.0).unwrap(), inv_sqrt3, 1e-15));
        assert!(close(g(-2.0).unwrap(), -inv_sqrt3, 1e-15));
        let q = quadrature_moment(1.001, 0, 200_000);
        assert!(close(g(1.001).unwrap(), q, 1e-8));
    }

    #[test]
    fn g_domain() {
        for x in [1.0, -1.0, 0.5, 0.0, f64::NAN, f64::INFINITY] {
            assert!(g(x).is_err(), "{x}");
            assert!(h(x).is_err(), "{x}");
            assert!(v(x).is_err(), "{x}");
        }
    }

    #[test]
    fn h_v_values() {
        let (hh, vv) = (h(2.0).unwrap(), v(2.0).unwrap());
        assert!((hh - 0.154_700_538_379_251_5).abs() < 1e-15);
        assert!((vv - 0.309_401_076_758_503).abs() < 1e-15);
        // mpmath quadrature at 30 digits
        assert!((h(-3.0).unwrap() - 0.060_660_171_779_821_29).abs() < 1e-15);
        assert!((v(-3.0).unwrap() + 0.181_980_515_339_463_86).abs() < 1e-15);
        let qh = -quadrature_moment(-3.0, 1, 4096);
        let qv = quadrature_weighted(-3.0, 4096, |p| p.cos() * p.cos());
        assert!((h(-3.0).unwrap() - qh).abs() < 1e-10);
        assert!((v(-3.0).unwrap() - qv).abs() < 1e-10);
    }

    #[test]
    fn identity_at_two() {
        let (g2, h2, v2) = ghv(2.0).unwrap();
        assert!((g2 * v2 - h2 * h2 - h2).abs() < 1e-13);
    }

    #[test]
    fn l_values() {
        assert_eq!(l(1.0).unwrap(), 1.0);
        assert_eq!(l(-1.0).unwrap(), -1.0);
        assert!((l(5.0 / 3.0).unwrap() - 3.0).abs() < 1e-15);
        assert!((l(2.0).unwrap() - (2.0 + 3f64.sqrt())).abs() < 1e-15);
        assert!(l(0.999).is_err());
        assert!(l(f64::NAN).is_err());
    }

    #[test]
    fn secular_values() {
        assert_eq!(secular_f(1.0, 3.0, 2.0).unwrap(), 2.0);
        assert_eq!(secular_f(-1.0, 3.0, 2.0).unwrap(), 12.0);
        assert!(secular_f(5.0 / 3.0, 3.0, 2.0).unwrap().abs() < 1e-15);
        assert_eq!(secular_f(2.0, 3.0, 2.0).unwrap(), 0.0);
        // 0.5 · (2.5 + √5.25 − 3), evaluated at 30 digits
        let f = secular_f(2.5, 3.0, 2.0).unwrap();
        assert!((f - 0.895_643_923_738_96).abs() < 1e-14);
    }

    #[test]
    fn moment_values() {
        assert!(close(lattice_integral(2.0, 0).unwrap(), g(2.0).unwrap(), 1e-15));
        assert!(close(lattice_integral(2.0, 1).unwrap(), -h(2.0).unwrap(), 1e-14));
        assert!(close(lattice_integral(2.0, -1).unwrap(), -h(2.0).unwrap(), 1e-14));
        let i2 = lattice_integral(2.0, 2).unwrap();
        // mpmath quadrature at 30 digits
        assert!((i2 - 0.041_451_884_327_380_35).abs() < 1e-15);
        assert!((i2 - quadrature_moment(2.0, 2, 100_000)).abs() < 1e-10);
        assert!(lattice_integral(1.0, 2).is_err());
    }

    #[test]
    fn quadrature_matches_closed_form() {
        assert!((quadrature_moment(2.0, 0, 4096) - g(2.0).unwrap()).abs() < 1e-13);
        assert!((quadrature_moment(-2.0, 1, 4096) + h(-2.0).unwrap()).abs() < 1e-13);
        let q = quadrature_moment(1.0001, 0, 2_000_000);
        assert!(close(q, g(1.0001).unwrap(), 1e-6));
    }

    #[test]
    fn table_matches_pointwise() {
        for &gamma in &[1.3, -1.3, 4.0, -7.5] {
            let table = lattice_integrals(gamma, 40).unwrap();
            for (k, &t) in table.iter().enumerate() {
                let p = lattice_integral(gamma, k as i64).unwrap();
                assert!(close(t, p, 1e-13), "gamma {gamma} k {k}");
            }
        }
    }

    #[test]
    fn moments_against_quadrature() {
        for &gamma in &[1.05, -1.05, 1.7, -2.5, 6.0] {
            for k in 0..12 {
                let exact = lattice_integral(gamma, k).unwrap();
                let q = quadrature_moment(gamma, k, 8192);
                assert!((exact - q).abs() < 1e-12, "gamma {gamma} k {k}: {exact} vs {q}");
            }
        }
    }

    #[test]
    fn ratio_tends_to_decay_factor() {
        let table = lattice_integrals(2.0, 60).unwrap();
        let target = 1.0 / l(2.0).unwrap();
        for k in 20..60 {
            let r = (table[k + 1] / table[k]).abs();
            assert!((r - target).abs() < 1e-8);
        }
    }

    #[test]
    fn secular_monotonicity() {
        // left branch: both factors negative for delta, sigma > -1
        let (delta, sigma) = (3.0, 2.0);
        let grid: Vec<f64> = (0..400).map(|i| -1.0 - 0.05 * i as f64).collect();
        for w in grid.windows(2) {
            // w[1] < w[0]: moving left F must grow
            let a = secular_f(w[0], delta, sigma).unwrap();
            let b = secular_f(w[1], delta, sigma).unwrap();
            assert!(b > a);
        }
        let gmin: f64 = 5.0 / 3.0;
        let gmax = 2.0;
        let lo: Vec<f64> = (1..200).map(|i| 1.0 + (gmin - 1.0) * i as f64 / 200.0).collect();
        for w in lo.windows(2) {
            assert!(
                secular_f(w[1], delta, sigma).unwrap() < secular_f(w[0], delta, sigma).unwrap()
            );
        }
        let hi: Vec<f64> = (1..400).map(|i| gmax + 0.05 * i as f64).collect();
        for w in hi.windows(2) {
            assert!(
                secular_f(w[1], delta, sigma).unwrap() > secular_f(w[0], delta, sigma).unwrap()
            );
        }
    }

    proptest! {
        #[test]
        fn lemma_identities(mag in 1.0f64..1000.0, neg in any::<bool>()) {
            prop_assume!(mag > 1.0);
            let x = if neg { -mag } else { mag };
            let (gx, hx, vx) = ghv(x).unwrap();
            let scale = (x * gx).abs().max(1.0);
            prop_assert!((hx - (x * gx - 1.0)).abs() <= 1e-12 * scale);
            prop_assert!((vx - x * hx).abs() <= 1e-12 * vx.abs());
            let s2 = (gx * vx).abs().max(hx * hx).max(hx.abs());
            prop_assert!((gx * vx - hx * hx - hx).abs() <= 1e-12 * s2);
            // g − v = 1/l
            let lx = l(x).unwrap();
            let s3 = gx.abs().max(vx.abs());
            prop_assert!((gx - vx - 1.0 / lx).abs() <= 1e-12 * s3);
        }
    }
}
