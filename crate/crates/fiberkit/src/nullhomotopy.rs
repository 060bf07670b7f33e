//! Canonical deformation of circle-valued maps on the sphere to constants.
//!
//! A sampled map `S^2 -> R/Z` on a latitude-longitude grid is lifted to a
//! real-valued map by breadth-first unwrapping, averaged against exact cell
//! solid angles, and deformed along the straight line to the constant at its
//! average. Any two lifts differ by an integer constant, so the projected
//! homotopy does not depend on the lift.

use serde::{Deserialize, Serialize};

use crate::rotation::S2Point;
use crate::{Error, Result};

/// A sampled map `S^2 -> R/Z`: values in `[0, 1)` at the cell centers of a
/// `lat x lon` latitude-longitude grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SphereToCircleMap {
    lat: usize,
    lon: usize,
    values: Vec<f64>,
}

/// A real-valued lift of a [`SphereToCircleMap`] on the same grid.
#[derive(Clone, Debug)]
pub struct LiftedMap {
    lat: usize,
    lon: usize,
    values: Vec<f64>,
}

/// Wraps a difference into `(-1/2, 1/2]`.
fn wrap(d: f64) -> f64 {
    d - d.round()
}

fn cell_index(lat: usize, lon: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < lat);
    i * lon + j % lon
}

/// Exact solid angle of the cell in latitude band `i` of a `lat x lon` grid.
fn cell_weight(lat: usize, lon: usize, i: usize) -> f64 {
    let theta0 = i as f64 * std::f64::consts::PI / lat as f64;
    let theta1 = (i + 1) as f64 * std::f64::consts::PI / lat as f64;
    (2.0 * std::f64::consts::PI / lon as f64) * (theta0.cos() - theta1.cos())
}

/// Center of the cell `(i, j)`.
fn cell_center(lat: usize, lon: usize, i: usize, j: usize) -> S2Point {
    S2Point::from_spherical(
        (i as f64 + 0.5) * std::f64::consts::PI / lat as f64,
        (j as f64 + 0.5) * 2.0 * std::f64::consts::PI / lon as f64,
    )
}

impl SphereToCircleMap {
    pub fn new(lat: usize, lon: usize, values: Vec<f64>) -> Result<SphereToCircleMap> {
        if lat < 2 || lon < 3 {
            return Err(Error::InvalidInput(format!(
                "grid {lat}x{lon} is too small"
            )));
        }
        if values.len() != lat * lon {
            return Err(Error::InvalidInput(format!(
                "expected {} values, got {}",
                lat * lon,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("values must be finite".into()));
        }
        Ok(SphereToCircleMap {
            lat,
            lon,
            values: values.into_iter().map(|v| v.rem_euclid(1.0)).collect(),
        })
    }

    /// Samples a function at the cell centers, reduced mod 1.
    pub fn from_fn(lat: usize, lon: usize, f: impl Fn(S2Point) -> f64) -> Result<SphereToCircleMap> {
        let mut values = Vec::with_capacity(lat * lon);
        for i in 0..lat {
            for j in 0..lon {
                values.push(f(cell_center(lat, lon, i, j)));
            }
        }
        SphereToCircleMap::new(lat, lon, values)
    }

    pub const fn dims(&self) -> (usize, usize) {
        (self.lat, self.lon)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[cell_index(self.lat, self.lon, i, j)]
    }

    /// Checks the winding obstruction on every grid plaquette: the wrapped
    /// differences around each 4-cycle must sum to an integer zero.
    pub fn check_liftable(&self) -> Result<()> {
        for i in 0..self.lat - 1 {
            for j in 0..self.lon {
                let v00 = self.value(i, j);
                let v01 = self.value(i, j + 1);
                let v11 = self.value(i + 1, j + 1);
                let v10 = self.value(i + 1, j);
                let s = wrap(v01 - v00) + wrap(v11 - v01) + wrap(v10 - v11) + wrap(v00 - v10);
                if s.round().abs() > 0.5 || (s - s.round()).abs() > 1e-9 {
                    return Err(Error::NonLiftable(format!(
                        "plaquette ({i},{j}) has winding {s:.3}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Lifts to a real-valued map by breadth-first unwrapping from a seed
    /// cell, choosing at each step the representative nearest the already
    /// lifted neighbor. Any two lifts differ by an integer constant.
    pub fn lift_from(&self, seed: (usize, usize)) -> Result<LiftedMap> {
        self.check_liftable()?;
        let (lat, lon) = (self.lat, self.lon);
        let total = lat * lon;
        let seed_idx = cell_index(lat, lon, seed.0 % lat, seed.1 % lon);
        let mut lifted = vec![f64::NAN; total];
        let mut seen = vec![false; total];
        lifted[seed_idx] = self.values[seed_idx];
        seen[seed_idx] = true;
        let mut queue = std::collections::VecDeque::from([seed_idx]);
        while let Some(a) = queue.pop_front() {
            let (i, j) = (a / lon, a % lon);
            let mut neighbors = vec![
                cell_index(lat, lon, i, j + 1),
                cell_index(lat, lon, i, j + lon - 1),
            ];
            if i > 0 {
                neighbors.push(cell_index(lat, lon, i - 1, j));
            }
            if i + 1 < lat {
                neighbors.push(cell_index(lat, lon, i + 1, j));
            }
            for b in neighbors {
                if !seen[b] {
                    lifted[b] = lifted[a] + wrap(self.values[b] - self.values[a]);
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        Ok(LiftedMap {
            lat,
            lon,
            values: lifted,
        })
    }

    pub fn lift(&self) -> Result<LiftedMap> {
        self.lift_from((0, 0))
    }

    /// One stage of the straight-line deformation to the constant map at the
    /// average of a lift: `t = 0` returns the map itself, `t = 1` the
    /// constant at the projected average. Independent of the lift choice.
    pub fn homotopy_to_constant(&self, t: f64) -> Result<SphereToCircleMap> {
        self.homotopy_to_constant_from(t, (0, 0))
    }

    pub fn homotopy_to_constant_from(
        &self,
        t: f64,
        seed: (usize, usize),
    ) -> Result<SphereToCircleMap> {
        let lift = self.lift_from(seed)?;
        let avg = lift.average();
        let values = lift
            .values
            .iter()
            .map(|&v| ((1.0 - t) * v + t * avg).rem_euclid(1.0))
            .collect();
        SphereToCircleMap::new(self.lat, self.lon, values)
    }

    /// Grid-wise sup of circle distance to another map on the same grid.
    pub fn sup_distance(&self, rhs: &SphereToCircleMap) -> f64 {
        self.values
            .iter()
            .zip(&rhs.values)
            .map(|(&a, &b)| crate::rotation::CircleMap::circle_distance(a, b))
            .fold(0.0, f64::max)
    }
}

impl LiftedMap {
    /// Samples a real-valued function directly (already lifted).
    pub fn from_fn(lat: usize, lon: usize, f: impl Fn(S2Point) -> f64) -> LiftedMap {
        let mut values = Vec::with_capacity(lat * lon);
        for i in 0..lat {
            for j in 0..lon {
                values.push(f(cell_center(lat, lon, i, j)));
            }
        }
        LiftedMap { lat, lon, values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Solid-angle-weighted mean: `(1 / 4 pi) * integral`.
    pub fn average(&self) -> f64 {
        let mut sum = 0.0;
        let mut wsum = 0.0;
        for i in 0..self.lat {
            let w = cell_weight(self.lat, self.lon, i);
            for j in 0..self.lon {
                sum += w * self.values[cell_index(self.lat, self.lon, i, j)];
                wsum += w;
            }
        }
        sum / wsum
    }

    /// Projects mod 1 back to a circle-valued map.
    pub fn project(&self) -> SphereToCircleMap {
        SphereToCircleMap {
            lat: self.lat,
            lon: self.lon,
            values: self.values.iter().map(|v| v.rem_euclid(1.0)).collect(),
        }
    }

    pub fn shifted(&self, c: f64) -> LiftedMap {
        LiftedMap {
            lat: self.lat,
            lon: self.lon,
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }
}
