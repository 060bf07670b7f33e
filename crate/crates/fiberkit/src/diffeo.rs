//! The rigid diffeomorphism group of `S^1 x S^2` under composition.
//!
//! An element is a pair `(alpha, beta_t)` with `alpha` in `O(2)` and `beta_t`
//! an unbased loop in `O(3)`, acting by `(x, y) -> (alpha(x), beta_x(y))`.
//! The group law is `(alpha', beta'_t) . (alpha, beta_t) =
//! (alpha' . alpha, beta'_{alpha(t)} . beta_t)` and the inverse is
//! `(alpha^-1, beta_{alpha^-1(t)}^-1)`.
//!
//! Splitting the loop at the basepoint factors the group as
//! `O(2) x O(3) x Omega SO(3)`: `beta = beta_0` and
//! `gamma_t = beta^-1 . beta_t`, which is based and lands in `SO(3)` because
//! the parity cancels.

use serde::{Deserialize, Serialize};

use crate::loops::{LoopJson, LoopSO3};
use crate::rotation::{CircleMap, OrthogonalMap3, Rotation, S2Point, Sign, UnitQuaternion};
use crate::{Error, Result};

/// Closure tolerance for the unbased `O(3)` loop (matrix equality of the two
/// endpoint maps).
const CLOSURE_TOL: f64 = 1e-7;

/// An element of `O(2) x Omega'O(3)`, the rigid diffeomorphism group.
///
/// `beta_rot` stores a sign-consistent quaternion lift of the rotation part of
/// the `O(3)` path at parameters `i/N`; the parity is constant along the path
/// (the path stays in one component of `O(3)`).
#[derive(Clone, Debug)]
pub struct RigidDiffeo {
    alpha: CircleMap,
    beta_rot: Vec<UnitQuaternion>,
    parity: Sign,
}

impl RigidDiffeo {
    /// Builds from an `O(3)` path sampled at `i/N`. All parities must agree,
    /// consecutive rotation parts must be close enough to sign-align, and the
    /// path must close up (`beta_0 = beta_N` as maps).
    pub fn new(alpha: CircleMap, beta_path: &[OrthogonalMap3]) -> Result<RigidDiffeo> {
        if beta_path.len() < 2 {
            return Err(Error::InvalidInput("need at least 2 path samples".into()));
        }
        let parity = beta_path[0].parity;
        if beta_path.iter().any(|b| b.parity != parity) {
            return Err(Error::InvalidInput(
                "path leaves its component of O(3): parities differ".into(),
            ));
        }
        let mut beta_rot = Vec::with_capacity(beta_path.len());
        beta_rot.push(beta_path[0].rotation.quat());
        for (i, b) in beta_path.iter().enumerate().skip(1) {
            let prev = beta_rot[i - 1];
            let q = b.rotation.quat();
            let d = prev.dot(q);
            if d.abs() < 1e-9 {
                return Err(Error::InsufficientResolution(format!(
                    "sign ambiguity in the O(3) path between samples {} and {i}",
                    i - 1
                )));
            }
            beta_rot.push(if d < 0.0 { q.neg() } else { q });
        }
        let first = beta_rot[0];
        let last = beta_rot[beta_rot.len() - 1];
        if !(first.dot(last).abs() > 1.0 - CLOSURE_TOL) {
            return Err(Error::InvalidInput(
                "O(3) path does not close up: beta(0) != beta(1) as maps".into(),
            ));
        }
        Ok(RigidDiffeo {
            alpha,
            beta_rot,
            parity,
        })
    }

    pub fn identity(n: usize) -> RigidDiffeo {
        RigidDiffeo {
            alpha: CircleMap::IDENTITY,
            beta_rot: vec![UnitQuaternion::IDENTITY; n + 1],
            parity: Sign::Plus,
        }
    }

    /// The diffeomorphism `(alpha, constant beta)`.
    pub fn constant(alpha: CircleMap, beta: OrthogonalMap3, n: usize) -> RigidDiffeo {
        RigidDiffeo {
            alpha,
            beta_rot: vec![beta.rotation.quat(); n + 1],
            parity: beta.parity,
        }
    }

    pub fn alpha(&self) -> CircleMap {
        self.alpha
    }

    pub fn parity(&self) -> Sign {
        self.parity
    }

    pub fn resolution(&self) -> usize {
        self.beta_rot.len() - 1
    }

    /// `beta_t`, interpolated on the rotation part with the parity constant.
    pub fn beta_at(&self, t: f64) -> OrthogonalMap3 {
        OrthogonalMap3 {
            rotation: Rotation(self.beta_lift(t)),
            parity: self.parity,
        }
    }

    fn beta_lift(&self, t: f64) -> UnitQuaternion {
        let n = self.resolution() as f64;
        let u = t.rem_euclid(1.0) * n;
        let i = (u.floor() as usize).min(self.resolution() - 1);
        let frac = u - i as f64;
        if frac < 1e-9 {
            self.beta_rot[i]
        } else if frac > 1.0 - 1e-9 {
            self.beta_rot[i + 1]
        } else {
            UnitQuaternion::slerp(self.beta_rot[i], self.beta_rot[i + 1], frac)
        }
    }

    /// The action on `S^1 x S^2`: `(x, y) -> (alpha(x), beta_x(y))`.
    pub fn apply(&self, x: f64, y: S2Point) -> (f64, S2Point) {
        (self.alpha.apply(x), self.beta_at(x).apply(y))
    }

    /// Function composition `self . rhs`, resampled to the finer grid.
    pub fn compose(&self, rhs: &RigidDiffeo) -> RigidDiffeo {
        let n = self.resolution().max(rhs.resolution());
        let alpha = self.alpha.compose(rhs.alpha);
        let mut beta_rot: Vec<UnitQuaternion> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let t = i as f64 / n as f64;
            let outer = self.beta_lift(rhs.alpha.apply(t));
            let inner = rhs.beta_lift(t);
            let q = outer.mul(inner);
            let q = match beta_rot.last() {
                Some(prev) if prev.dot(q) < 0.0 => q.neg(),
                _ => q,
            };
            beta_rot.push(q);
        }
        RigidDiffeo {
            alpha,
            beta_rot,
            parity: self.parity * rhs.parity,
        }
    }

    /// `(alpha^-1, beta_{alpha^-1(t)}^-1)`.
    pub fn inverse(&self) -> RigidDiffeo {
        let n = self.resolution();
        let alpha_inv = self.alpha.inverse();
        let mut beta_rot: Vec<UnitQuaternion> = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let t = i as f64 / n as f64;
            let q = self.beta_lift(alpha_inv.apply(t)).conjugate();
            let q = match beta_rot.last() {
                Some(prev) if prev.dot(q) < 0.0 => q.neg(),
                _ => q,
            };
            beta_rot.push(q);
        }
        RigidDiffeo {
            alpha: alpha_inv,
            beta_rot,
            parity: self.parity,
        }
    }

    /// Splits at the basepoint `t = 0`: `beta = beta_0`,
    /// `gamma_t = beta^-1 . beta_t`.
    pub fn factorize(&self) -> RigidTriple {
        self.factorize_at(0)
    }

    /// Splits at grid basepoint `k/N`. The class of the resulting `gamma` is
    /// the sign relating the two endpoint lift representatives, which does
    /// not depend on `k`.
    pub fn factorize_at(&self, k: usize) -> RigidTriple {
        let n = self.resolution();
        let k = k % n;
        let closing_sign = if self.beta_rot[0].dot(self.beta_rot[n]) < 0.0 {
            -1.0
        } else {
            1.0
        };
        let b0 = self.beta_rot[k];
        let mut lift = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let j = k + i;
            let q = if j <= n {
                self.beta_rot[j]
            } else {
                // continue the lift past the seam
                let q = self.beta_rot[j - n];
                if closing_sign < 0.0 {
                    q.neg()
                } else {
                    q
                }
            };
            lift.push(b0.conjugate().mul(q));
        }
        let gamma = LoopSO3::from_lift_samples(lift)
            .expect("factorization of a valid rigid diffeomorphism is a valid loop");
        RigidTriple {
            alpha: self.alpha,
            beta: OrthogonalMap3 {
                rotation: Rotation(b0),
                parity: self.parity,
            },
            gamma,
        }
    }
}

/// An element of `O(2) x O(3) x Omega SO(3)` acting by
/// `(x, y) -> (alpha(x), beta(gamma_x(y)))`.
#[derive(Clone, Debug)]
pub struct RigidTriple {
    pub alpha: CircleMap,
    pub beta: OrthogonalMap3,
    pub gamma: LoopSO3,
}

impl RigidTriple {
    pub fn new(alpha: CircleMap, beta: OrthogonalMap3, gamma: LoopSO3) -> RigidTriple {
        RigidTriple { alpha, beta, gamma }
    }

    pub fn identity(n: usize) -> RigidTriple {
        RigidTriple {
            alpha: CircleMap::IDENTITY,
            beta: OrthogonalMap3::IDENTITY,
            gamma: LoopSO3::constant_identity(n),
        }
    }

    /// Reassembles the unbased-loop form: `beta_t = beta . gamma_t`.
    pub fn unfactorize(&self) -> RigidDiffeo {
        let b = self.beta.rotation.quat();
        let beta_rot = self
            .gamma
            .lift_samples()
            .iter()
            .map(|g| b.mul(*g))
            .collect();
        RigidDiffeo {
            alpha: self.alpha,
            beta_rot,
            parity: self.beta.parity,
        }
    }

    pub fn apply(&self, x: f64, y: S2Point) -> (f64, S2Point) {
        (
            self.alpha.apply(x),
            self.beta.apply(self.gamma.evaluate(x).apply(y)),
        )
    }
}

/// Wire format for a rigid diffeomorphism: the `O(3)` loop as a quaternion
/// lift plus parity, and the circle map.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RigidDiffeoJson {
    pub alpha: CircleMap,
    pub parity: Sign,
    pub beta: LoopJson,
}

impl RigidDiffeo {
    pub fn to_json(&self) -> RigidDiffeoJson {
        RigidDiffeoJson {
            alpha: self.alpha,
            parity: self.parity,
            beta: LoopJson {
                n: self.resolution(),
                samples: self.beta_rot.iter().map(|q| q.to_array()).collect(),
            },
        }
    }

    pub fn from_json(json: &RigidDiffeoJson) -> Result<RigidDiffeo> {
        if json.beta.samples.len() != json.beta.n + 1 {
            return Err(Error::InvalidInput("sample count does not match n".into()));
        }
        let path = json
            .beta
            .samples
            .iter()
            .map(|&a| {
                Ok(OrthogonalMap3 {
                    rotation: Rotation(UnitQuaternion::from_array(a)?),
                    parity: json.parity,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        RigidDiffeo::new(CircleMap::new(json.alpha.offset, json.alpha.orientation), &path)
    }
}
