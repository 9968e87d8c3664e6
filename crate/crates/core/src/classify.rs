//! Partition of `(α, δ, σ)`-space into the regions that fix the shape of the
//! discrete spectrum.
//!
//! Off the plane `α = −1` there are six regions, written `U(s₁, s₂)` after
//! the signs of `c₁` and `c₂`. The three `(+,+)` regions are told apart by
//! where `δ` and `σ` sit relative to `±1`. On the plane `α = −1` the
//! spectrum is explicit and only `|δ|` and `|σ|` relative to 1 matter.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::NormalizedParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionTag {
    #[serde(rename = "U1(+,+)")]
    U1PlusPlus,
    #[serde(rename = "U0(+,+)")]
    U0PlusPlus,
    #[serde(rename = "U-1(+,+)")]
    UMinus1PlusPlus,
    #[serde(rename = "U(-,+)")]
    UMinusPlus,
    #[serde(rename = "U(-,-)")]
    UMinusMinus,
    #[serde(rename = "U(+,-)")]
    UPlusMinus,
    AlphaMinusOne,
    Unclassified,
}

impl RegionTag {
    pub const SIX: [RegionTag; 6] = [
        RegionTag::U1PlusPlus,
        RegionTag::U0PlusPlus,
        RegionTag::UMinus1PlusPlus,
        RegionTag::UMinusPlus,
        RegionTag::UMinusMinus,
        RegionTag::UPlusMinus,
    ];

    pub fn symbol(&self) -> &'static str {
        match self {
            RegionTag::U1PlusPlus => "U1(+,+)",
            RegionTag::U0PlusPlus => "U0(+,+)",
            RegionTag::UMinus1PlusPlus => "U-1(+,+)",
            RegionTag::UMinusPlus => "U(-,+)",
            RegionTag::UMinusMinus => "U(-,-)",
            RegionTag::UPlusMinus => "U(+,-)",
            RegionTag::AlphaMinusOne => "AlphaMinusOne",
            RegionTag::Unclassified => "Unclassified",
        }
    }
}

impl fmt::Display for RegionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Which item of the classification applies.
///
/// `A`–`F2` are the cases off the plane `α = −1`; the `T2*` labels are the
/// four branches on it, named after the eigenvalues they produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c")]
    C,
    #[serde(rename = "d1")]
    D1,
    #[serde(rename = "d2")]
    D2,
    #[serde(rename = "e1")]
    E1,
    #[serde(rename = "e2")]
    E2,
    #[serde(rename = "f1")]
    F1,
    #[serde(rename = "f2")]
    F2,
    #[serde(rename = "T2-mu-kappa")]
    T2MuKappa,
    #[serde(rename = "T2-mu")]
    T2Mu,
    #[serde(rename = "T2-kappa")]
    T2Kappa,
    #[serde(rename = "T2-empty")]
    T2Empty,
    #[serde(rename = "none")]
    None,
}

impl CaseLabel {
    pub fn label(&self) -> &'static str {
        match self {
            CaseLabel::A => "a",
            CaseLabel::B => "b",
            CaseLabel::C => "c",
            CaseLabel::D1 => "d1",
            CaseLabel::D2 => "d2",
            CaseLabel::E1 => "e1",
            CaseLabel::E2 => "e2",
            CaseLabel::F1 => "f1",
            CaseLabel::F2 => "f2",
            CaseLabel::T2MuKappa => "T2-mu-kappa",
            CaseLabel::T2Mu => "T2-mu",
            CaseLabel::T2Kappa => "T2-kappa",
            CaseLabel::T2Empty => "T2-empty",
            CaseLabel::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub tag: RegionTag,
    pub case: CaseLabel,
}

impl Region {
    /// Number of distinct discrete eigenvalues the region prescribes.
    ///
    /// `None` for [`RegionTag::Unclassified`]. On the `α = −1` plane the
    /// coincidence `μ = κ` is not visible to the classifier and is not
    /// accounted for here.
    pub fn eigenvalue_count(&self) -> Option<usize> {
        let n = match self.case {
            CaseLabel::B | CaseLabel::T2Empty => 0,
            CaseLabel::D1 | CaseLabel::F1 | CaseLabel::T2Mu | CaseLabel::T2Kappa => 1,
            CaseLabel::D2 | CaseLabel::E1 | CaseLabel::F2 | CaseLabel::T2MuKappa => 2,
            CaseLabel::A | CaseLabel::C | CaseLabel::E2 => 3,
            CaseLabel::None => return None,
        };
        Some(n)
    }

    /// Number of bound states counted with geometric multiplicity (what a
    /// Sturm count of a large truncation sees outside the band).
    pub fn bound_state_count(&self) -> Option<usize> {
        match self.case {
            // κ is doubly degenerate on the α = −1 plane
            CaseLabel::T2MuKappa => Some(3),
            CaseLabel::T2Kappa => Some(2),
            _ => self.eigenvalue_count(),
        }
    }

    /// Number of roots of the secular equation with `|γ| > 1`.
    pub fn secular_root_count(&self) -> Option<usize> {
        let n = match self.case {
            CaseLabel::A | CaseLabel::C | CaseLabel::E1 | CaseLabel::E2 => 2,
            CaseLabel::D1 | CaseLabel::D2 | CaseLabel::F1 | CaseLabel::F2 => 1,
            CaseLabel::B => 0,
            _ => return None,
        };
        Some(n)
    }
}

/// Comparisons with an optional dead zone of width `tol` around 0.
#[derive(Debug, Clone, Copy)]
struct Cmp {
    tol: f64,
}

impl Cmp {
    fn pos(&self, x: f64) -> bool {
        x > self.tol
    }
    fn nonneg(&self, x: f64) -> bool {
        x >= -self.tol
    }
    fn neg(&self, x: f64) -> bool {
        x < -self.tol
    }
    fn zero(&self, x: f64) -> bool {
        x.abs() <= self.tol
    }
}

/// Membership of `n` in each of the six off-plane regions, in the order of
/// [`RegionTag::SIX`]. Exactly one entry is `true` for generic parameters.
pub fn memberships(n: &NormalizedParams, tol: f64) -> [bool; 6] {
    let c = Cmp { tol };
    let (c1, c2, d, s) = (n.c1, n.c2, n.delta, n.sigma);
    let both_above = c.pos(d - 1.0) && c.pos(s - 1.0);
    let both_below = c.neg(d + 1.0) && c.neg(s + 1.0);
    let both_inside = c.nonneg(1.0 - d.abs()) && c.nonneg(1.0 - s.abs());
    [
        c.pos(c1) && c.pos(c2) && both_above,
        c.nonneg(c1) && c.nonneg(c2) && both_inside,
        c.pos(c1) && c.pos(c2) && both_below,
        (c.neg(c1) && c.nonneg(c2)) || (c.zero(c1) && c.pos(c2) && both_above),
        c.neg(c1) && c.neg(c2),
        (c.nonneg(c1) && c.neg(c2)) || (c.pos(c1) && c.zero(c2) && both_below),
    ]
}

/// Classify with sharp comparisons.
pub fn classify(n: &NormalizedParams) -> Region {
    classify_with_tolerance(n, 0.0)
}

/// Classify, treating quantities within `tol` of a threshold as sitting on
/// it. `tol = 0` reproduces the sharp predicates.
pub fn classify_with_tolerance(n: &NormalizedParams, tol: f64) -> Region {
    let c = Cmp { tol };
    let delta_outside = !c.nonneg(1.0 - n.delta.abs());
    if c.zero(n.alpha + 1.0) {
        let sigma_outside = !c.nonneg(1.0 - n.sigma.abs());
        let case = match (sigma_outside, delta_outside) {
            (true, true) => CaseLabel::T2MuKappa,
            (true, false) => CaseLabel::T2Mu,
            (false, true) => CaseLabel::T2Kappa,
            (false, false) => CaseLabel::T2Empty,
        };
        return Region {
            tag: RegionTag::AlphaMinusOne,
            case,
        };
    }

    let hits = memberships(n, tol);
    let Some(i) = hits.iter().position(|&b| b) else {
        return Region {
            tag: RegionTag::Unclassified,
            case: CaseLabel::None,
        };
    };
    let tag = RegionTag::SIX[i];
    let case = match tag {
        RegionTag::U1PlusPlus => CaseLabel::A,
        RegionTag::U0PlusPlus => CaseLabel::B,
        RegionTag::UMinus1PlusPlus => CaseLabel::C,
        RegionTag::UMinusPlus if delta_outside => CaseLabel::D2,
        RegionTag::UMinusPlus => CaseLabel::D1,
        RegionTag::UMinusMinus if delta_outside => CaseLabel::E2,
        RegionTag::UMinusMinus => CaseLabel::E1,
        RegionTag::UPlusMinus if delta_outside => CaseLabel::F2,
        RegionTag::UPlusMinus => CaseLabel::F1,
        RegionTag::AlphaMinusOne | RegionTag::Unclassified => unreachable!(),
    };
    Region { tag, case }
}
