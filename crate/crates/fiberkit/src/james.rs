//! Reduced-product words on `S^2`, meridian loops, and the Gluck generator
//! families for both components of the loop space.
//!
//! The sphere `S^3` is viewed as the reduced suspension of `S^2`; the
//! meridian through `x` is the path `t -> (cos pi t, sin pi t * x)` from `+1`
//! to `-1`, whose projection to `SO(3)` is the full twist about `x`. Words
//! concatenate meridians with equal parameter shares; deleting basepoint
//! letters (the north pole) does not change the loop up to homotopy.

use serde::{Deserialize, Serialize};

use crate::fibering::Fibering;
use crate::loops::{sup_distance, ComponentClass, LoopJson, LoopSO3};
use crate::rotation::{Rotation, S2Point, UnitQuaternion};
use crate::{Error, Result};

/// Letters within this distance of the basepoint are deleted by
/// normalization.
const BASEPOINT_TOL: f64 = 1e-9;

/// Continuity bound factor: adjacent family members must stay within
/// `CONTINUITY_FACTOR * (grid edge angle)` in loop sup-distance.
const CONTINUITY_FACTOR: f64 = 4.0;

/// A finite reduced word in the free monoid on `S^2` with basepoint letters
/// (the north pole) deleted.
#[derive(Clone, Debug)]
pub struct JamesWord {
    letters: Vec<S2Point>,
}

impl JamesWord {
    /// Removes every letter within tolerance of the basepoint, preserving
    /// order.
    pub fn normalize(raw: &[S2Point]) -> JamesWord {
        let n = S2Point::north();
        JamesWord {
            letters: raw
                .iter()
                .copied()
                .filter(|x| {
                    let d = ((x.0[0] - n.0[0]).powi(2)
                        + (x.0[1] - n.0[1]).powi(2)
                        + (x.0[2] - n.0[2]).powi(2))
                    .sqrt();
                    d >= BASEPOINT_TOL
                })
                .collect(),
        }
    }

    pub fn letters(&self) -> &[S2Point] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// A path on `S^3` from `+1` to `-1`: the suspension meridian through a
/// point, with the endpoint identified back to the basepoint.
#[derive(Clone, Debug)]
pub struct MeridianPath {
    samples: Vec<UnitQuaternion>,
}

impl MeridianPath {
    pub fn samples(&self) -> &[UnitQuaternion] {
        &self.samples
    }

    /// Projects the meridian to `SO(3)`: the full twist about its axis.
    pub fn project(&self) -> LoopSO3 {
        LoopSO3::from_lift_samples(self.samples.clone())
            .expect("a meridian projects to a valid loop")
    }
}

/// The meridian of `S^3` through `x`: `t -> (cos pi t, sin pi t * x)`.
pub fn lambda_loop(x: S2Point, n: usize) -> MeridianPath {
    let samples = (0..=n)
        .map(|i| Rotation::axis_angle_lift(x, i as f64 / n as f64))
        .collect();
    MeridianPath { samples }
}

/// Orientation of the vertical return segment of [`lambda_prime`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReturnOrientation {
    /// Return from infinity to the center back along the downward vertical
    /// ray: the reversed full twist about the south pole. This matches the
    /// out-and-back picture (the loop at the south pole retraces itself).
    Reversed,
    /// Append the downward full twist as-is (the `G_p * G_s` form).
    Forward,
}

/// The loop that goes from the center to the point at infinity through `x`,
/// then returns to the center vertically. Always lands in the trivial
/// component: two lift-sign `-1` segments compose to `+1`.
pub fn lambda_prime(x: S2Point, n: usize) -> Result<LoopSO3> {
    lambda_prime_with(x, n, ReturnOrientation::Reversed)
}

pub fn lambda_prime_with(
    x: S2Point,
    n: usize,
    orientation: ReturnOrientation,
) -> Result<LoopSO3> {
    let out = LoopSO3::gluck(x, n)?;
    let down = LoopSO3::gluck(S2Point::south(), n)?;
    Ok(match orientation {
        ReturnOrientation::Reversed => out.concatenate(&down.invert()),
        ReturnOrientation::Forward => out.concatenate(&down),
    })
}

/// Concatenates the meridians of a word with equal parameter shares `1/k` and
/// projects to `SO(3)`. The empty word gives the constant identity loop; the
/// class is `Nontrivial` iff the word length is odd.
pub fn james_concat(word: &JamesWord, n: usize) -> LoopSO3 {
    let k = word.len();
    if k == 0 {
        return LoopSO3::constant_identity(n.max(1));
    }
    let per = (n / k).max(crate::loops::MIN_GLUCK_RESOLUTION);
    let total = per * k;
    let mut samples = Vec::with_capacity(total + 1);
    for i in 0..=total {
        let j = (i / per).min(k - 1);
        let local = (i - j * per) as f64 / per as f64;
        let q = Rotation::axis_angle_lift(word.letters[j], local);
        // each meridian runs +1 -> -1; accumulate the sign
        let q = if j % 2 == 1 { q.neg() } else { q };
        samples.push(q);
    }
    LoopSO3::from_lift_samples(samples).expect("word concatenation is a valid loop")
}

/// A latitude-longitude sampling of `S^2` with explicit adjacency. Index 0 is
/// the north pole, the last index the south pole; interior rows have `lon`
/// points each.
#[derive(Clone, Debug)]
pub struct SphereGrid {
    lat: usize,
    lon: usize,
    points: Vec<S2Point>,
    edges: Vec<(usize, usize)>,
}

impl SphereGrid {
    /// `lat` latitude bands and `lon` longitudes; the grid holds
    /// `(lat - 1) * lon + 2` points (interior rows plus the two poles).
    pub fn lat_lon(lat: usize, lon: usize) -> Result<SphereGrid> {
        if lat < 2 || lon < 3 {
            return Err(Error::InvalidInput(format!(
                "grid {lat}x{lon} is too small (need lat >= 2, lon >= 3)"
            )));
        }
        let mut points = vec![S2Point::north()];
        for i in 1..lat {
            let theta = i as f64 * std::f64::consts::PI / lat as f64;
            for j in 0..lon {
                let phi = j as f64 * 2.0 * std::f64::consts::PI / lon as f64;
                points.push(S2Point::from_spherical(theta, phi));
            }
        }
        points.push(S2Point::south());
        let south = points.len() - 1;
        let idx = |i: usize, j: usize| 1 + (i - 1) * lon + (j % lon);
        let mut edges = Vec::new();
        for j in 0..lon {
            edges.push((0, idx(1, j)));
            edges.push((south, idx(lat - 1, j)));
        }
        for i in 1..lat {
            for j in 0..lon {
                edges.push((idx(i, j), idx(i, j + 1)));
                if i + 1 < lat {
                    edges.push((idx(i, j), idx(i + 1, j)));
                }
            }
        }
        Ok(SphereGrid {
            lat,
            lon,
            points,
            edges,
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.lat, self.lon)
    }

    pub fn points(&self) -> &[S2Point] {
        &self.points
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest great-circle angle across any adjacency edge.
    pub fn max_edge_angle(&self) -> f64 {
        self.edges
            .iter()
            .map(|&(a, b)| self.points[a].angle_to(self.points[b]))
            .fold(0.0, f64::max)
    }
}

/// A grid of fiberings, all in one component, continuous at grid scale.
#[derive(Clone, Debug)]
pub struct GeneratorFamily {
    grid: SphereGrid,
    fiberings: Vec<Fibering>,
    target: ComponentClass,
}

impl GeneratorFamily {
    /// The sphere of Gluck fiberings `{Phi(G_p)}`; every member lands in the
    /// nontrivial component.
    pub fn gluck_sphere(grid: SphereGrid, n: usize) -> Result<GeneratorFamily> {
        Self::build(grid, n, ComponentClass::Nontrivial, |p, n| {
            LoopSO3::gluck(p, n)
        })
    }

    /// The family `{Phi(G_p * G_s)}`; every member lands in the trivial
    /// component.
    pub fn gluck_concat_sphere(grid: SphereGrid, n: usize) -> Result<GeneratorFamily> {
        Self::build(grid, n, ComponentClass::Trivial, |p, n| {
            let gs = LoopSO3::gluck(S2Point::south(), n)?;
            Ok(LoopSO3::gluck(p, n)?.concatenate(&gs))
        })
    }

    pub fn for_component(
        grid: SphereGrid,
        n: usize,
        target: ComponentClass,
    ) -> Result<GeneratorFamily> {
        match target {
            ComponentClass::Nontrivial => Self::gluck_sphere(grid, n),
            ComponentClass::Trivial => Self::gluck_concat_sphere(grid, n),
        }
    }

    fn build(
        grid: SphereGrid,
        n: usize,
        target: ComponentClass,
        member: impl Fn(S2Point, usize) -> Result<LoopSO3>,
    ) -> Result<GeneratorFamily> {
        let mut fiberings = Vec::with_capacity(grid.len());
        for &p in grid.points() {
            let loop_ = member(p, n)?;
            let class = loop_.classify()?;
            if class != target {
                return Err(Error::VerificationFailed(format!(
                    "family member at ({:.3}, {:.3}, {:.3}) classifies as {class}, expected {target}",
                    p.0[0], p.0[1], p.0[2]
                )));
            }
            fiberings.push(Fibering::phi(loop_));
        }
        let family = GeneratorFamily {
            grid,
            fiberings,
            target,
        };
        let bound = CONTINUITY_FACTOR * family.grid.max_edge_angle();
        let max = family.max_adjacent_distance();
        if !(max <= bound) {
            return Err(Error::VerificationFailed(format!(
                "family is not continuous at grid scale: adjacent distance {max:.3e} exceeds {bound:.3e}"
            )));
        }
        Ok(family)
    }

    pub fn grid(&self) -> &SphereGrid {
        &self.grid
    }

    pub fn fiberings(&self) -> &[Fibering] {
        &self.fiberings
    }

    pub fn target(&self) -> ComponentClass {
        self.target
    }

    pub fn len(&self) -> usize {
        self.fiberings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fiberings.is_empty()
    }

    /// Largest loop sup-distance across any grid edge.
    pub fn max_adjacent_distance(&self) -> f64 {
        self.grid
            .edges()
            .iter()
            .map(|&(a, b)| {
                sup_distance(
                    self.fiberings[a].loop_so3(),
                    self.fiberings[b].loop_so3(),
                )
            })
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Vec<FamilyRecordJson> {
        self.grid
            .points()
            .iter()
            .zip(&self.fiberings)
            .map(|(p, f)| FamilyRecordJson {
                grid_point: p.0,
                loop_: f.loop_so3().to_json(),
                component: self.target.to_string(),
            })
            .collect()
    }
}

/// One exported family member.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyRecordJson {
    pub grid_point: [f64; 3],
    #[serde(rename = "loop")]
    pub loop_: LoopJson,
    pub component: String,
}

impl FamilyRecordJson {
    /// Reloads and re-checks a record: the loop must parse, and its class
    /// must match the recorded component.
    pub fn verify(&self) -> Result<()> {
        let loop_ = LoopSO3::from_json(&self.loop_)?;
        let class = loop_.classify()?;
        if class.to_string() != self.component {
            return Err(Error::VerificationFailed(format!(
                "recorded component {} but loop classifies as {class}",
                self.component
            )));
        }
        S2Point::new(self.grid_point)?;
        Ok(())
    }
}

/// The component-swapping map: concatenates the downward vertical full twist.
/// Flips the class of every loop.
pub fn h_map(gamma: &LoopSO3) -> LoopSO3 {
    let n = gamma.resolution().max(crate::loops::MIN_GLUCK_RESOLUTION);
    let gs = LoopSO3::gluck(S2Point::south(), n).expect("resolution is large enough");
    gamma.concatenate(&gs)
}
