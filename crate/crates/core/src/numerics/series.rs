//! Truncation of the basis-weighted series `Σ_j p_j(x) a_j`.
//!
//! The stopping rule looks only at the accumulated basis mass: summation
//! ends at the first index where the mass reaches `1 - mass_eps`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesConfig {
    pub mass_eps: f64,
    pub j_max: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            mass_eps: 1e-12,
            j_max: 20_000,
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.mass_eps > 0.0 && self.mass_eps <= 1e-6) {
            return Err(crate::error::parameter("mass_eps in (0, 1e-6]"));
        }
        if self.j_max < 64 {
            return Err(crate::error::parameter("j_max >= 64"));
        }
        Ok(())
    }
}

/// Result of a truncated summation; `j_used` is the last index included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub j_used: usize,
}

/// First index `J` with `Σ_{j <= J} mass(j) >= 1 - mass_eps`.
pub fn series_extent<M>(mut mass: M, cfg: &SeriesConfig) -> Result<usize>
where
    M: FnMut(usize) -> Result<f64>,
{
    let mut acc = 0.0;
    for j in 0..=cfg.j_max {
        acc += mass(j)?;
        if acc >= 1.0 - cfg.mass_eps {
            return Ok(j);
        }
    }
    Err(Error::SeriesCap {
        j_max: cfg.j_max,
        mass: acc,
    })
}

/// Sums `term(j)` for `j = 0..=J`, `J` as in [`series_extent`].
///
/// Terms are fallible so that quadrature failures inside a coefficient
/// abort the sum.
pub fn truncated_series_sum<T, M>(mut term: T, mut mass: M, cfg: &SeriesConfig) -> Result<SeriesSum>
where
    T: FnMut(usize) -> Result<f64>,
    M: FnMut(usize) -> Result<f64>,
{
    let mut acc_mass = 0.0;
    let mut value = 0.0;
    for j in 0..=cfg.j_max {
        let m = mass(j)?;
        acc_mass += m;
        // Skip coefficient work where the weight vanishes (e.g. x = 0).
        if m != 0.0 {
            value += term(j)?;
        }
        if acc_mass >= 1.0 - cfg.mass_eps {
            return Ok(SeriesSum { value, j_used: j });
        }
    }
    Err(Error::SeriesCap {
        j_max: cfg.j_max,
        mass: acc_mass,
    })
}
