//! Based loops in `SO(3)` as sign-consistent sampled quaternion lifts.
//!
//! A loop is stored through its canonical continuous lift to `S^3`: `N + 1`
//! unit quaternions at parameters `i/N`, starting at `+1` exactly and with
//! positive consecutive inner products. The lift endpoint is `+1` or `-1`
//! within tolerance; its sign is the loop's class in `pi_1(SO(3)) = Z/2`.

use serde::{Deserialize, Serialize};

use crate::rotation::{CircleMap, OrthogonalMap3, Rotation, S2Point, Sign, UnitQuaternion};
use crate::{Error, Result};

/// Default sample count; keeps slerp error well under `1e-6` for loops with
/// total rotation up to `4 pi`.
pub const DEFAULT_RESOLUTION: usize = 256;

/// Minimum resolution accepted for full-twist loops.
pub const MIN_GLUCK_RESOLUTION: usize = 8;

/// Snap width (in segments) under which evaluation returns a stored sample.
const GRID_SNAP: f64 = 1e-9;

/// Which connected component of `Omega SO(3)` a loop lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentClass {
    /// Component of the constant loop; lift endpoint `+1`.
    Trivial,
    /// The other component; lift endpoint `-1`.
    Nontrivial,
}

impl ComponentClass {
    pub fn sign(self) -> Sign {
        match self {
            ComponentClass::Trivial => Sign::Plus,
            ComponentClass::Nontrivial => Sign::Minus,
        }
    }

    pub fn from_sign(s: Sign) -> ComponentClass {
        match s {
            Sign::Plus => ComponentClass::Trivial,
            Sign::Minus => ComponentClass::Nontrivial,
        }
    }

    /// Class of a concatenation: signs multiply.
    pub fn product(self, rhs: ComponentClass) -> ComponentClass {
        ComponentClass::from_sign(self.sign() * rhs.sign())
    }
}

impl std::fmt::Display for ComponentClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ComponentClass::Trivial => write!(f, "Trivial"),
            ComponentClass::Nontrivial => write!(f, "Nontrivial"),
        }
    }
}

/// An identity-based loop in `SO(3)`, stored as its canonical lift.
#[derive(Clone, Debug)]
pub struct LoopSO3 {
    samples: Vec<UnitQuaternion>,
}

impl LoopSO3 {
    /// Builds a loop from lift samples at `i/N`. The first sample must be
    /// within `1e-6` of `+-1` (the whole lift is negated if it is nearer
    /// `-1`, then the basepoint is snapped to `+1` exactly), consecutive
    /// samples must have positive inner product, and the last sample must be
    /// within `1e-6` of `+-1`.
    pub fn from_lift_samples(samples: Vec<UnitQuaternion>) -> Result<LoopSO3> {
        if samples.len() < 2 {
            return Err(Error::InvalidLoop("need at least 2 samples".into()));
        }
        let mut samples = samples;
        let d0 = samples[0].distance_to_center();
        if !(d0 < 1e-6) {
            return Err(Error::InvalidLoop(format!(
                "lift must start at the identity (off by {d0:.3e})"
            )));
        }
        if samples[0].w < 0.0 {
            for q in samples.iter_mut() {
                *q = q.neg();
            }
        }
        samples[0] = UnitQuaternion::IDENTITY;
        for i in 0..samples.len() - 1 {
            let d = samples[i].dot(samples[i + 1]);
            if !(d > 0.0) {
                return Err(Error::InsufficientResolution(format!(
                    "consecutive lift samples {i},{} have inner product {d:.3e}",
                    i + 1
                )));
            }
        }
        let dn = samples[samples.len() - 1].distance_to_center();
        if !(dn < 1e-6) {
            return Err(Error::InvalidLoop(format!(
                "lift endpoint is not +-1 (off by {dn:.3e}); the projection does not close up"
            )));
        }
        Ok(LoopSO3 { samples })
    }

    /// Builds the canonical lift from rotation samples, fixing signs greedily
    /// from `+1`. Fails if a consecutive pair is ambiguous (near angle `pi`).
    pub fn from_rotation_samples(rotations: &[Rotation]) -> Result<LoopSO3> {
        if rotations.len() < 2 {
            return Err(Error::InvalidLoop("need at least 2 samples".into()));
        }
        if !(rotations[0].angle() < 1e-6) {
            return Err(Error::InvalidLoop("loop must be based at the identity".into()));
        }
        let mut lift = Vec::with_capacity(rotations.len());
        lift.push(UnitQuaternion::IDENTITY);
        for (i, r) in rotations.iter().enumerate().skip(1) {
            let prev = lift[i - 1];
            let q = r.quat();
            let d = prev.dot(q);
            if d.abs() < 1e-9 {
                return Err(Error::InsufficientResolution(format!(
                    "sign ambiguity between samples {} and {i}",
                    i - 1
                )));
            }
            lift.push(if d < 0.0 { q.neg() } else { q });
        }
        LoopSO3::from_lift_samples(lift)
    }

    /// The constant loop at the identity.
    pub fn constant_identity(n: usize) -> LoopSO3 {
        LoopSO3 {
            samples: vec![UnitQuaternion::IDENTITY; n + 1],
        }
    }

    /// The full-twist loop about the oriented axis `p`: one complete rotation
    /// of `S^2` around `p` as the parameter traverses the circle. Its lift is
    /// the meridian of `S^3` through `p`, so the class is `Nontrivial`.
    pub fn gluck(p: S2Point, n: usize) -> Result<LoopSO3> {
        if n < MIN_GLUCK_RESOLUTION {
            return Err(Error::InsufficientResolution(format!(
                "resolution {n} is too coarse for a full twist (need >= {MIN_GLUCK_RESOLUTION})"
            )));
        }
        let samples = (0..=n)
            .map(|i| Rotation::axis_angle_lift(p, i as f64 / n as f64))
            .collect();
        LoopSO3::from_lift_samples(samples)
    }

    pub fn resolution(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn lift_samples(&self) -> &[UnitQuaternion] {
        &self.samples
    }

    /// Lift value at parameter `t` in `[0, 1]` by slerp between the two
    /// bracketing samples. Grid-aligned parameters return stored samples.
    pub fn evaluate_lift(&self, t: f64) -> UnitQuaternion {
        let n = self.resolution() as f64;
        let u = (t.clamp(0.0, 1.0)) * n;
        let i = (u.floor() as usize).min(self.resolution() - 1);
        let frac = u - i as f64;
        if frac < GRID_SNAP {
            self.samples[i]
        } else if frac > 1.0 - GRID_SNAP {
            self.samples[i + 1]
        } else {
            UnitQuaternion::slerp(self.samples[i], self.samples[i + 1], frac)
        }
    }

    /// Projection of the lift at `t`.
    pub fn evaluate(&self, t: f64) -> Rotation {
        Rotation(self.evaluate_lift(t))
    }

    /// Sign of the lift endpoint.
    pub fn endpoint_sign(&self) -> Sign {
        Sign::from_value(self.samples[self.samples.len() - 1].w)
    }

    /// Homotopy class via the double cover: `Trivial` iff the canonical lift
    /// ends at `+1`.
    pub fn classify(&self) -> Result<ComponentClass> {
        for i in 0..self.samples.len() - 1 {
            if !(self.samples[i].dot(self.samples[i + 1]) > 0.0) {
                return Err(Error::InsufficientResolution(
                    "lift is not sign-consistent".into(),
                ));
            }
        }
        Ok(ComponentClass::from_sign(self.endpoint_sign()))
    }

    /// Concatenation: traverses `self` on `[0, 1/2]` and `rhs` on `[1/2, 1]`.
    /// The lift of `rhs` is multiplied by the endpoint sign of `self`, so the
    /// class of the result is the product of the classes. Each half keeps a
    /// sample count divisible by the source resolution when that stays below
    /// 8192, so resampling is an exact lookup rather than interpolation.
    pub fn concatenate(&self, rhs: &LoopSO3) -> LoopSO3 {
        let half = lcm_capped(self.resolution(), rhs.resolution(), 8192);
        let n = 2 * half;
        let eps = self.endpoint_sign().value();
        let mut samples = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let q = if i <= half {
                self.evaluate_lift(i as f64 / half as f64)
            } else {
                let q = rhs.evaluate_lift((i - half) as f64 / half as f64);
                if eps < 0.0 {
                    q.neg()
                } else {
                    q
                }
            };
            samples.push(q);
        }
        LoopSO3::from_lift_samples(samples).expect("concatenation of valid loops is valid")
    }

    /// Time reversal `t -> a(1 - t)`, rebased to start at `+1`. The endpoint
    /// sign (hence the class) is unchanged.
    pub fn invert(&self) -> LoopSO3 {
        let eps = self.endpoint_sign().value();
        let samples = self
            .samples
            .iter()
            .rev()
            .map(|q| if eps < 0.0 { q.neg() } else { *q })
            .collect();
        LoopSO3::from_lift_samples(samples).expect("reversal of a valid loop is valid")
    }

    /// Serializes as `{"n": N, "samples": [[w,x,y,z], ...]}`.
    pub fn to_json(&self) -> LoopJson {
        LoopJson {
            n: self.resolution(),
            samples: self.samples.iter().map(|q| q.to_array()).collect(),
        }
    }

    pub fn from_json(json: &LoopJson) -> Result<LoopSO3> {
        if json.samples.len() != json.n + 1 {
            return Err(Error::InvalidLoop(format!(
                "expected {} samples for n = {}, got {}",
                json.n + 1,
                json.n,
                json.samples.len()
            )));
        }
        let samples = json
            .samples
            .iter()
            .map(|&a| UnitQuaternion::from_array(a))
            .collect::<Result<Vec<_>>>()?;
        LoopSO3::from_lift_samples(samples)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("loop serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<LoopSO3> {
        let json: LoopJson =
            serde_json::from_str(s).map_err(|e| Error::InvalidLoop(format!("bad JSON: {e}")))?;
        LoopSO3::from_json(&json)
    }
}

/// Wire format for [`LoopSO3`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LoopJson {
    pub n: usize,
    pub samples: Vec<[f64; 4]>,
}

/// An unbased sampled path of rotations at parameters `i/N`. Produced by the
/// verbatim inverse-transport formula, whose output is based only up to a
/// constant right-translation.
#[derive(Clone, Debug)]
pub struct RotationPath {
    samples: Vec<Rotation>,
}

impl RotationPath {
    pub fn new(samples: Vec<Rotation>) -> RotationPath {
        RotationPath { samples }
    }

    pub fn resolution(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn samples(&self) -> &[Rotation] {
        &self.samples
    }

    pub fn evaluate(&self, t: f64) -> Rotation {
        // piecewise slerp on locally sign-aligned representatives
        let n = self.resolution() as f64;
        let u = (t.clamp(0.0, 1.0)) * n;
        let i = (u.floor() as usize).min(self.resolution() - 1);
        let frac = u - i as f64;
        let a = self.samples[i].quat();
        let mut b = self.samples[i + 1].quat();
        if a.dot(b) < 0.0 {
            b = b.neg();
        }
        if frac < GRID_SNAP {
            Rotation(a)
        } else if frac > 1.0 - GRID_SNAP {
            Rotation(b)
        } else {
            Rotation(UnitQuaternion::slerp(a, b, frac))
        }
    }

    /// Right-translates by the inverse of the initial value, producing a
    /// based loop: `t -> p(t) p(0)^-1`.
    pub fn rebase(&self) -> Result<LoopSO3> {
        let inv0 = self.samples[0].inverse();
        let rotations: Vec<Rotation> = self.samples.iter().map(|r| r.compose(inv0)).collect();
        LoopSO3::from_rotation_samples(&rotations)
    }
}

/// The transport `c_{alpha,beta}`: sends `gamma` to
/// `t -> beta^-1 . gamma_{alpha(t)} . beta . zeta^-1` with
/// `zeta = beta^-1 . gamma_{alpha(0)} . beta`. Parity cancels, so the
/// conjugation acts through the rotation part of `beta` alone.
fn lcm_capped(a: usize, b: usize, cap: usize) -> usize {
    fn gcd(mut a: usize, mut b: usize) -> usize {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
    let l = a / gcd(a, b) * b;
    if l <= cap {
        l
    } else {
        a.max(b)
    }
}

pub fn transport(alpha: CircleMap, beta: OrthogonalMap3, gamma: &LoopSO3) -> LoopSO3 {
    let n = gamma.resolution();
    let b = beta.rotation.quat();
    let g0 = gamma.evaluate_lift(alpha.apply(0.0));
    let rotations: Vec<Rotation> = (0..=n)
        .map(|i| {
            let g = gamma.evaluate_lift(alpha.apply(i as f64 / n as f64));
            Rotation(b.conjugate().mul(g).mul(g0.conjugate()).mul(b))
        })
        .collect();
    LoopSO3::from_rotation_samples(&rotations).expect("transport preserves loop validity")
}

/// The verbatim candidate inverse of [`transport`]:
/// `gamma -> (t -> beta . gamma_{alpha^-1(t)} . beta^-1)`. The output is not
/// based in general; composed with [`transport`] it yields the constant
/// right-translation `t -> gamma_t . gamma_{alpha(0)}^-1`.
pub fn transport_inverse(alpha: CircleMap, beta: OrthogonalMap3, gamma: &LoopSO3) -> RotationPath {
    let n = gamma.resolution();
    let b = beta.rotation.quat();
    let alpha_inv = alpha.inverse();
    let samples = (0..=n)
        .map(|i| {
            let g = gamma.evaluate_lift(alpha_inv.apply(i as f64 / n as f64));
            Rotation(b.mul(g).mul(b.conjugate()))
        })
        .collect();
    RotationPath::new(samples)
}

/// Sup of the geodesic distance between projections over the union of the two
/// sample grids (a metrization of the compact-open topology at sample scale).
pub fn sup_distance(a: &LoopSO3, b: &LoopSO3) -> f64 {
    let mut max = 0.0f64;
    let na = a.resolution();
    let nb = b.resolution();
    for i in 0..=na {
        let t = i as f64 / na as f64;
        max = max.max(a.evaluate(t).angle_to(b.evaluate(t)));
    }
    if nb != na {
        for i in 0..=nb {
            let t = i as f64 / nb as f64;
            max = max.max(a.evaluate(t).angle_to(b.evaluate(t)));
        }
    }
    max
}

/// Sup distance between a loop and an unbased path, over the union grid.
pub fn sup_distance_path(a: &LoopSO3, b: &RotationPath) -> f64 {
    let mut max = 0.0f64;
    for grid in [a.resolution(), b.resolution()] {
        for i in 0..=grid {
            let t = i as f64 / grid as f64;
            max = max.max(a.evaluate(t).angle_to(b.evaluate(t)));
        }
    }
    max
}
