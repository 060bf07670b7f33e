//! Rigid circle fiberings of `S^1 x S^2`.
//!
//! A fibering is stored canonically as its defining based loop: the fiber
//! through `(0, y)` is `t -> (t, loop(t)(y))`. This is lossless because the
//! assignment loop -> fibering is a bijection onto the rigid fiberings, and it
//! keeps every operation exact-formula.

use crate::diffeo::{RigidDiffeo, RigidTriple};
use crate::loops::{sup_distance, LoopSO3};
use crate::rotation::{CircleMap, OrthogonalMap3, Rotation, S2Point};
use crate::{tol, Error, Result};

/// Maximum angular step allowed between consecutive fiber-curve samples.
pub const FIBER_STEP_BOUND: f64 = std::f64::consts::FRAC_PI_4;

/// A rigid circle fibering of `S^1 x S^2`.
#[derive(Clone, Debug)]
pub struct Fibering {
    loop_: LoopSO3,
}

/// One sampled fiber: a simple closed curve through `S^1 x S^2`.
#[derive(Clone, Debug)]
pub struct FiberCurve {
    samples: Vec<(f64, S2Point)>,
}

impl FiberCurve {
    pub fn samples(&self) -> &[(f64, S2Point)] {
        &self.samples
    }
}

impl Fibering {
    /// Wraps a based loop as a fibering; the constant loop gives the trivial
    /// fibering, whose fibers are `{(t, y)}`.
    pub fn phi(loop_: LoopSO3) -> Fibering {
        Fibering { loop_ }
    }

    /// The trivial fibering `F_T`.
    pub fn trivial(n: usize) -> Fibering {
        Fibering {
            loop_: LoopSO3::constant_identity(n),
        }
    }

    /// The Gluck fibering at `p`.
    pub fn gluck(p: S2Point, n: usize) -> Result<Fibering> {
        Ok(Fibering {
            loop_: LoopSO3::gluck(p, n)?,
        })
    }

    pub fn loop_so3(&self) -> &LoopSO3 {
        &self.loop_
    }

    pub fn into_loop(self) -> LoopSO3 {
        self.loop_
    }

    /// The fibering whose fibers are the images of this fibering's fibers
    /// under the rigid diffeomorphism `(alpha, beta, gamma)` (the loop acts
    /// first, then `beta`, with `alpha` shifting the circle factor).
    ///
    /// Writing `lambda_t = gamma_t . mu_t` for the combined rotation applied
    /// at time `t` (`mu` this fibering's loop), the result is the based loop
    /// `t -> beta . lambda_{alpha^-1(t)} . zeta^-1` with
    /// `zeta = beta . lambda_{alpha^-1(0)}`.
    pub fn pushforward(&self, f: &RigidTriple) -> Fibering {
        let n = f.gamma.resolution().max(self.loop_.resolution());
        let b = f.beta.rotation.quat();
        let alpha_inv = f.alpha.inverse();
        let combined = |u: f64| {
            f.gamma
                .evaluate_lift(u)
                .mul(self.loop_.evaluate_lift(u))
        };
        let l0 = combined(alpha_inv.apply(0.0));
        let rotations: Vec<Rotation> = (0..=n)
            .map(|i| {
                let u = alpha_inv.apply(i as f64 / n as f64);
                Rotation(b.mul(combined(u)).mul(l0.conjugate()).mul(b.conjugate()))
            })
            .collect();
        Fibering {
            loop_: LoopSO3::from_rotation_samples(&rotations)
                .expect("pushforward of a valid fibering is valid"),
        }
    }

    /// Pushforward by a rigid diffeomorphism in unbased-loop form.
    pub fn pushforward_diffeo(&self, f: &RigidDiffeo) -> Fibering {
        self.pushforward(&f.factorize())
    }

    /// Samples the fiber through `(0, y)`.
    pub fn sample_fiber(&self, y: S2Point, m: usize) -> Result<FiberCurve> {
        if m < 2 {
            return Err(Error::InsufficientResolution(
                "fiber resolution must be at least 2".into(),
            ));
        }
        let samples: Vec<(f64, S2Point)> = (0..=m)
            .map(|i| {
                let t = i as f64 / m as f64;
                (t, self.loop_.evaluate(t).apply(y))
            })
            .collect();
        for w in samples.windows(2) {
            let step = w[0].1.angle_to(w[1].1);
            if !(step <= FIBER_STEP_BOUND) {
                return Err(Error::InsufficientResolution(format!(
                    "fiber step {step:.3} exceeds bound {FIBER_STEP_BOUND:.3}"
                )));
            }
        }
        let closure = samples[0].1.angle_to(samples[m].1);
        if !(closure < tol::LOOP) {
            return Err(Error::InvalidLoop(format!(
                "fiber does not close up (gap {closure:.3e})"
            )));
        }
        Ok(FiberCurve { samples })
    }
}

/// The local trivialization `f -> (f(F_T), alpha, beta)` of the rigid group
/// over the space of rigid fiberings.
pub fn trivialize(f: &RigidTriple) -> (Fibering, CircleMap, OrthogonalMap3) {
    let base = Fibering::trivial(f.gamma.resolution());
    (base.pushforward(f), f.alpha, f.beta)
}

/// The inverse chart: `(F, alpha, beta) ->
/// (alpha, beta, beta^-1 . gamma_{alpha(t)} . beta . zeta^-1)` with `gamma`
/// the fibering's loop and `zeta = beta^-1 . gamma_{alpha(0)} . beta`.
pub fn untrivialize(fibering: &Fibering, alpha: CircleMap, beta: OrthogonalMap3) -> RigidTriple {
    let gamma = crate::loops::transport(alpha, beta, fibering.loop_so3());
    RigidTriple::new(alpha, beta, gamma)
}

/// Whether the image of each trivial-fibering fiber under `f` lies on a single
/// trivial-fibering fiber (at sample scale).
pub fn is_fiber_preserving(f: &RigidDiffeo) -> bool {
    let n = f.resolution();
    // a fixed well-spread probe set on S^2
    let mut probes = vec![S2Point::north(), S2Point::south()];
    for i in 0..4 {
        for j in 0..6 {
            let theta = (i as f64 + 1.0) * std::f64::consts::PI / 5.0;
            let phi = j as f64 * std::f64::consts::PI / 3.0 + 0.1;
            probes.push(S2Point::from_spherical(theta, phi));
        }
    }
    for y in probes {
        let base = f.beta_at(0.0).apply(y);
        for i in 0..=n {
            let t = i as f64 / n as f64;
            if f.beta_at(t).apply(y).angle_to(base) >= tol::LOOP {
                return false;
            }
        }
    }
    true
}

/// Searches sampled fibers of two fiberings for a parameter/point pair where
/// they visibly differ; returns the witness and the separation.
pub fn differing_fiber_point(a: &Fibering, b: &Fibering) -> Option<(f64, S2Point, f64)> {
    let n = a.loop_so3().resolution().max(b.loop_so3().resolution());
    // locate the parameter of maximal rotation difference first
    let mut best_t = 0.0;
    let mut best_angle = 0.0f64;
    for i in 0..=n {
        let t = i as f64 / n as f64;
        let d = a.loop_so3().evaluate(t).angle_to(b.loop_so3().evaluate(t));
        if d > best_angle {
            best_angle = d;
            best_t = t;
        }
    }
    if best_angle == 0.0 {
        return None;
    }
    let ra = a.loop_so3().evaluate(best_t);
    let rb = b.loop_so3().evaluate(best_t);
    let mut best: Option<(f64, S2Point, f64)> = None;
    for i in 0..6 {
        for j in 0..8 {
            let y = S2Point::from_spherical(
                (i as f64 + 0.5) * std::f64::consts::PI / 6.0,
                j as f64 * std::f64::consts::FRAC_PI_4 + 0.05,
            );
            let sep = ra.apply(y).angle_to(rb.apply(y));
            if best.is_none_or(|(_, _, s)| sep > s) {
                best = Some((best_t, y, sep));
            }
        }
    }
    best.filter(|&(_, _, s)| s > 0.0)
}

/// Pairwise separation of the underlying loops of two fiberings.
pub fn fibering_distance(a: &Fibering, b: &Fibering) -> f64 {
    sup_distance(a.loop_so3(), b.loop_so3())
}
