//! Classification rasters over the `(δ, σ)` plane at fixed `α`.

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, RegionTag};
use crate::error::{Error, Result};
use crate::model::NormalizedParams;

/// A `res × res` grid of cell centres over `[δmin, δmax] × [σmin, σmax]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub delta: [f64; 2],
    pub sigma: [f64; 2],
    pub resolution: usize,
}

impl Grid {
    pub fn new(delta: [f64; 2], sigma: [f64; 2], resolution: usize) -> Result<Self> {
        for (name, value) in [
            ("delta_min", delta[0]),
            ("delta_max", delta[1]),
            ("sigma_min", sigma[0]),
            ("sigma_max", sigma[1]),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFinite { name, value });
            }
        }
        if !(delta[0] < delta[1] && sigma[0] < sigma[1]) {
            return Err(Error::OutOfDomain {
                what: "grid",
                value: f64::NAN,
                domain: "min < max on both axes",
            });
        }
        if resolution == 0 {
            return Err(Error::OutOfDomain {
                what: "grid resolution",
                value: 0.0,
                domain: "resolution >= 1",
            });
        }
        Ok(Grid {
            delta,
            sigma,
            resolution,
        })
    }

    /// Centre of cell `i` along an axis spanning `range`.
    fn centre(&self, range: [f64; 2], i: usize) -> f64 {
        let step = (range[1] - range[0]) / self.resolution as f64;
        range[0] + (i as f64 + 0.5) * step
    }

    pub fn delta_at(&self, i: usize) -> f64 {
        self.centre(self.delta, i)
    }

    pub fn sigma_at(&self, j: usize) -> f64 {
        self.centre(self.sigma, j)
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// Parses `δmin:δmax:σmin:σmax:res`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::OutOfDomain {
            what: "grid",
            value: f64::NAN,
            domain: "dmin:dmax:smin:smax:res",
        };
        if parts.len() != 5 {
            return Err(bad());
        }
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
        let res = parts[4].trim().parse::<usize>().map_err(|_| bad())?;
        Grid::new(
            [num(parts[0])?, num(parts[1])?],
            [num(parts[2])?, num(parts[3])?],
            res,
        )
    }
}

/// One raster cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub delta: f64,
    pub sigma: f64,
    pub tag: RegionTag,
    /// Number of eigenvalues the region prescribes; `None` when the cell
    /// could not be classified.
    pub count: Option<usize>,
}

/// Classifies every cell of `grid` at fixed `alpha`. Rows (fixed `σ`) are
/// processed in parallel; the result is ordered by row, then by `δ`.
pub fn sweep(alpha: f64, grid: &Grid) -> Result<Vec<SweepCell>> {
    if !alpha.is_finite() {
        return Err(Error::NonFinite {
            name: "alpha",
            value: alpha,
        });
    }
    let res = grid.resolution;
    let rows: Vec<Vec<SweepCell>> = (0..res)
        .into_par_iter()
        .map(|j| {
            let sigma = grid.sigma_at(j);
            (0..res)
                .map(|i| {
                    let delta = grid.delta_at(i);
                    let region = classify(&NormalizedParams::new(alpha, delta, sigma));
                    SweepCell {
                        delta,
                        sigma,
                        tag: region.tag,
                        count: region.eigenvalue_count(),
                    }
                })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}
