//! Uniform evaluation grids written as `a:b:step`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{parameter, Error, Result};

const MAX_POINTS: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    a: f64,
    b: f64,
    step: f64,
}

impl Grid {
    pub fn new(a: f64, b: f64, step: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && step.is_finite()) {
            return Err(parameter("finite grid bounds and step"));
        }
        if !(a < b) {
            return Err(parameter(format!("grid a < b (got {a}:{b})")));
        }
        if !(step > 0.0) {
            return Err(parameter(format!("grid step > 0 (got {step})")));
        }
        if (b - a) / step > MAX_POINTS {
            return Err(parameter("grid (b - a) / step <= 1e7"));
        }
        Ok(Self { a, b, step })
    }

    pub fn start(&self) -> f64 {
        self.a
    }

    pub fn end(&self) -> f64 {
        self.b
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Number of intervals; the grid has `intervals() + 1` points.
    pub fn intervals(&self) -> usize {
        ((self.b - self.a) / self.step + 1e-9).floor() as usize
    }

    pub fn len(&self) -> usize {
        self.intervals() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid points `a + i step`, ascending, never past `b`.
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.intervals()).map(move |i| (self.a + i as f64 * self.step).min(self.b))
    }

    /// The same interval with half the step.
    pub fn refined(&self) -> Self {
        Self {
            step: self.step / 2.0,
            ..*self
        }
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(parameter(format!("grid of the form a:b:step (got {s:?})")));
        }
        let num = |p: &str| -> Result<f64> {
            p.trim()
                .parse::<f64>()
                .map_err(|_| parameter(format!("numeric grid component (got {p:?})")))
        };
        Grid::new(num(parts[0])?, num(parts[1])?, num(parts[2])?)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.a, self.b, self.step)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_points() {
        let g: Grid = "0:2:0.5".parse().unwrap();
        let pts: Vec<f64> = g.points().collect();
        assert_eq!(pts, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        let g: Grid = "0:3:0.05".parse().unwrap();
        assert_eq!(g.len(), 61);
        assert_eq!(g.points().last().unwrap(), 3.0);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!("1:0:0.1".parse::<Grid>().is_err());
        assert!("0:1:0".parse::<Grid>().is_err());
        assert!("0:1".parse::<Grid>().is_err());
        assert!("0:1e8:1".parse::<Grid>().is_err());
        assert!("a:1:0.1".parse::<Grid>().is_err());
    }
}
