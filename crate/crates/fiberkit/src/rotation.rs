//! Exact-formula algebra for `S^3`, `SO(3)`, `O(3)`, `O(2)` and their actions
//! on `S^2` and the circle.
//!
//! `O(3)` elements are stored as a rotation plus a parity sign, with the map
//! `y -> parity * (q y q*)`. The antipodal map is central, so every
//! determinant `-1` element is `-R` for a rotation `R`, and all conjugations
//! reduce to quaternion conjugation by the rotation part.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A sign in `{+1, -1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_value(v: f64) -> Sign {
        if v < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// A point of `S^3`, doubling as a representative of a rotation under the
/// two-to-one cover `S^3 -> SO(3)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitQuaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl UnitQuaternion {
    pub const IDENTITY: UnitQuaternion = UnitQuaternion {
        w: 1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const MINUS_IDENTITY: UnitQuaternion = UnitQuaternion {
        w: -1.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    /// Builds a unit quaternion, renormalizing. Errors if the norm is not
    /// within `1e-6` of one (or not finite).
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<UnitQuaternion> {
        let n2 = w * w + x * x + y * y + z * z;
        if !(n2.is_finite() && (n2 - 1.0).abs() < 1e-6) {
            return Err(Error::InvalidInput(format!(
                "quaternion norm^2 = {n2}, expected 1"
            )));
        }
        let n = n2.sqrt();
        Ok(UnitQuaternion {
            w: w / n,
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    /// Hamilton product, renormalized.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: UnitQuaternion) -> UnitQuaternion {
        let (a, b) = (self, rhs);
        let q = UnitQuaternion {
            w: a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            x: a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            y: a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            z: a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        };
        q.renormalized()
    }

    pub fn conjugate(self) -> UnitQuaternion {
        UnitQuaternion {
            w: self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> UnitQuaternion {
        UnitQuaternion {
            w: -self.w,
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    pub fn dot(self, rhs: UnitQuaternion) -> f64 {
        self.w * rhs.w + self.x * rhs.x + self.y * rhs.y + self.z * rhs.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    fn renormalized(self) -> UnitQuaternion {
        let n = self.norm();
        UnitQuaternion {
            w: self.w / n,
            x: self.x / n,
            y: self.y / n,
            z: self.z / n,
        }
    }

    /// Distance to the nearest of `+1` and `-1` in `R^4`.
    pub fn distance_to_center(self) -> f64 {
        let dp = ((self.w - 1.0).powi(2) + self.x * self.x + self.y * self.y + self.z * self.z)
            .sqrt();
        let dm = ((self.w + 1.0).powi(2) + self.x * self.x + self.y * self.y + self.z * self.z)
            .sqrt();
        dp.min(dm)
    }

    /// Spherical linear interpolation. Takes the shortest arc when the
    /// endpoints have positive inner product; callers maintain that.
    pub fn slerp(a: UnitQuaternion, b: UnitQuaternion, u: f64) -> UnitQuaternion {
        let d = a.dot(b).clamp(-1.0, 1.0);
        let theta = d.acos();
        if theta < 1e-9 {
            // nearly parallel, nlerp is exact enough
            let q = UnitQuaternion {
                w: a.w + u * (b.w - a.w),
                x: a.x + u * (b.x - a.x),
                y: a.y + u * (b.y - a.y),
                z: a.z + u * (b.z - a.z),
            };
            return q.renormalized();
        }
        let s = theta.sin();
        let ca = ((1.0 - u) * theta).sin() / s;
        let cb = (u * theta).sin() / s;
        UnitQuaternion {
            w: ca * a.w + cb * b.w,
            x: ca * a.x + cb * b.x,
            y: ca * a.y + cb * b.y,
            z: ca * a.z + cb * b.z,
        }
        .renormalized()
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 4]) -> Result<UnitQuaternion> {
        UnitQuaternion::new(a[0], a[1], a[2], a[3])
    }
}

/// A rotation of `S^2`; `q` and `-q` denote the same rotation.
#[derive(Clone, Copy, Debug)]
pub struct Rotation(pub UnitQuaternion);

impl Rotation {
    pub const IDENTITY: Rotation = Rotation(UnitQuaternion::IDENTITY);

    /// Rotation about the oriented axis `p` by angle `2*pi*t`; the lift
    /// `(cos pi t, sin pi t * p)` traverses the meridian of `S^3` through `p`.
    pub fn axis_angle_lift(p: S2Point, t: f64) -> UnitQuaternion {
        let (s, c) = (std::f64::consts::PI * t).sin_cos();
        UnitQuaternion {
            w: c,
            x: s * p.0[0],
            y: s * p.0[1],
            z: s * p.0[2],
        }
    }

    pub fn quat(self) -> UnitQuaternion {
        self.0
    }

    /// Applies `y -> q y q*`.
    pub fn apply(self, y: S2Point) -> S2Point {
        let q = self.0;
        let v = y.0;
        // q v q* expanded: v + 2 w (u x v) + 2 u x (u x v), u = (x,y,z)
        let u = [q.x, q.y, q.z];
        let uxv = cross(u, v);
        let uxuxv = cross(u, uxv);
        let r = [
            v[0] + 2.0 * (q.w * uxv[0] + uxuxv[0]),
            v[1] + 2.0 * (q.w * uxv[1] + uxuxv[1]),
            v[2] + 2.0 * (q.w * uxv[2] + uxuxv[2]),
        ];
        S2Point::normalize(r).expect("rotation preserves the norm")
    }

    pub fn compose(self, rhs: Rotation) -> Rotation {
        Rotation(self.0.mul(rhs.0))
    }

    pub fn inverse(self) -> Rotation {
        Rotation(self.0.conjugate())
    }

    /// Geodesic distance in `SO(3)`: the angle of `r1 r2^-1` in `[0, pi]`.
    /// Computed from the chordal distance to the nearer lift, which stays
    /// well conditioned near zero where `acos` of the dot product is not.
    pub fn angle_to(self, rhs: Rotation) -> f64 {
        let q = if self.0.dot(rhs.0) < 0.0 {
            rhs.0.neg()
        } else {
            rhs.0
        };
        let chord = ((self.0.w - q.w).powi(2)
            + (self.0.x - q.x).powi(2)
            + (self.0.y - q.y).powi(2)
            + (self.0.z - q.z).powi(2))
        .sqrt();
        4.0 * (chord / 2.0).min(1.0).asin()
    }

    /// Rotation angle in `[0, pi]` (distance to the identity).
    pub fn angle(self) -> f64 {
        self.angle_to(Rotation::IDENTITY)
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// An element of `O(3)`, stored as a rotation part plus a parity; the map is
/// `y -> parity * (q y q*)`.
#[derive(Clone, Copy, Debug)]
pub struct OrthogonalMap3 {
    pub rotation: Rotation,
    pub parity: Sign,
}

impl OrthogonalMap3 {
    pub const IDENTITY: OrthogonalMap3 = OrthogonalMap3 {
        rotation: Rotation::IDENTITY,
        parity: Sign::Plus,
    };

    pub fn from_rotation(r: Rotation) -> OrthogonalMap3 {
        OrthogonalMap3 {
            rotation: r,
            parity: Sign::Plus,
        }
    }

    pub fn apply(self, y: S2Point) -> S2Point {
        let r = self.rotation.apply(y);
        match self.parity {
            Sign::Plus => r,
            Sign::Minus => r.antipode(),
        }
    }

    /// Composition; parities multiply because the antipodal map is central.
    pub fn compose(self, rhs: OrthogonalMap3) -> OrthogonalMap3 {
        OrthogonalMap3 {
            rotation: self.rotation.compose(rhs.rotation),
            parity: self.parity * rhs.parity,
        }
    }

    pub fn inverse(self) -> OrthogonalMap3 {
        OrthogonalMap3 {
            rotation: self.rotation.inverse(),
            parity: self.parity,
        }
    }

    /// Matrix equality, insensitive to `q <-> -q`.
    pub fn approx_eq(self, rhs: OrthogonalMap3, tolerance: f64) -> bool {
        self.parity == rhs.parity && self.rotation.angle_to(rhs.rotation) < tolerance
    }

    /// Determinant of the induced linear map.
    pub fn determinant(self) -> f64 {
        self.parity.value()
    }
}

/// An element of `O(2)` acting on the circle `R/Z`:
/// `t -> orientation * t + offset (mod 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleMap {
    pub offset: f64,
    pub orientation: Sign,
}

impl CircleMap {
    pub const IDENTITY: CircleMap = CircleMap {
        offset: 0.0,
        orientation: Sign::Plus,
    };

    pub fn new(offset: f64, orientation: Sign) -> CircleMap {
        CircleMap {
            offset: offset.rem_euclid(1.0),
            orientation,
        }
    }

    pub fn rotation(offset: f64) -> CircleMap {
        CircleMap::new(offset, Sign::Plus)
    }

    pub fn apply(self, t: f64) -> f64 {
        (self.orientation.value() * t + self.offset).rem_euclid(1.0)
    }

    /// `self . rhs` as functions: `t -> self(rhs(t))`.
    pub fn compose(self, rhs: CircleMap) -> CircleMap {
        CircleMap::new(
            self.orientation.value() * rhs.offset + self.offset,
            self.orientation * rhs.orientation,
        )
    }

    pub fn inverse(self) -> CircleMap {
        CircleMap::new(-self.orientation.value() * self.offset, self.orientation)
    }

    /// Circle distance between `a` and `b` in parameter units, in `[0, 1/2]`.
    pub fn circle_distance(a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(1.0);
        d.min(1.0 - d)
    }
}

/// A unit vector in `R^3`, a point of `S^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct S2Point(pub [f64; 3]);

impl S2Point {
    /// Builds a point of `S^2`, requiring the norm to be within `1e-6` of one.
    pub fn new(v: [f64; 3]) -> Result<S2Point> {
        let n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        if !(n2.is_finite() && (n2 - 1.0).abs() < 1e-6) {
            return Err(Error::InvalidInput(format!("|y|^2 = {n2}, expected 1")));
        }
        Self::normalize(v)
    }

    /// Normalizes an arbitrary nonzero vector onto `S^2`.
    pub fn normalize(v: [f64; 3]) -> Result<S2Point> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(n.is_finite() && n > 1e-12) {
            return Err(Error::InvalidInput("cannot normalize a zero vector".into()));
        }
        Ok(S2Point([v[0] / n, v[1] / n, v[2] / n]))
    }

    /// Basepoint of the reduced-product construction.
    pub fn north() -> S2Point {
        S2Point([0.0, 0.0, 1.0])
    }

    pub fn south() -> S2Point {
        S2Point([0.0, 0.0, -1.0])
    }

    pub fn antipode(self) -> S2Point {
        S2Point([-self.0[0], -self.0[1], -self.0[2]])
    }

    pub fn dot(self, rhs: S2Point) -> f64 {
        self.0[0] * rhs.0[0] + self.0[1] * rhs.0[1] + self.0[2] * rhs.0[2]
    }

    /// Great-circle angle to another point, in `[0, pi]`.
    /// Spherical angle via `atan2(|cross|, dot)`, accurate for both tiny
    /// and near-antipodal separations.
    pub fn angle_to(self, rhs: S2Point) -> f64 {
        let c = cross(self.0, rhs.0);
        let cn = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        cn.atan2(self.dot(rhs))
    }

    /// Point at colatitude `theta` (from the north pole) and longitude `phi`.
    pub fn from_spherical(theta: f64, phi: f64) -> S2Point {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        S2Point([st * cp, st * sp, ct])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol;
    use proptest::prelude::*;

    fn q(w: f64, x: f64, y: f64, z: f64) -> UnitQuaternion {
        UnitQuaternion::new(w, x, y, z).unwrap()
    }

    #[test]
    fn quat_mul_identity_and_i_squared() {
        let i = q(0.0, 1.0, 0.0, 0.0);
        let r = q(0.5, 0.5, 0.5, 0.5);
        let id = UnitQuaternion::IDENTITY;
        assert!(id.mul(r).dot(r) > 1.0 - tol::ALGEBRA);
        let ii = i.mul(i);
        assert!((ii.w + 1.0).abs() < tol::ALGEBRA);
        assert!(ii.x.abs() < tol::ALGEBRA);
    }

    #[test]
    fn rotate_half_turn_about_z() {
        let r = Rotation(q(0.0, 0.0, 0.0, 1.0));
        let y = S2Point([1.0, 0.0, 0.0]);
        let img = r.apply(y);
        assert!((img.0[0] + 1.0).abs() < tol::ALGEBRA);
        assert!(img.0[1].abs() < tol::ALGEBRA);
    }

    #[test]
    fn axis_angle_lift_endpoints() {
        let p = S2Point::north();
        let q0 = Rotation::axis_angle_lift(p, 0.0);
        assert!((q0.w - 1.0).abs() < tol::ALGEBRA);
        let q1 = Rotation::axis_angle_lift(p, 1.0);
        assert!((q1.w + 1.0).abs() < tol::ALGEBRA);
        // projects to the identity rotation
        assert!(Rotation(q1).angle() < tol::ALGEBRA);
        let qh = Rotation::axis_angle_lift(p, 0.5);
        assert!(qh.w.abs() < tol::ALGEBRA && (qh.z - 1.0).abs() < tol::ALGEBRA);
    }

    #[test]
    fn geodesic_distance_extremes() {
        let r = Rotation(q(0.6, 0.8, 0.0, 0.0));
        assert!(r.angle_to(r) < tol::ALGEBRA);
        let pi_rot = Rotation(q(0.0, 0.0, 1.0, 0.0));
        assert!((Rotation::IDENTITY.angle_to(pi_rot) - std::f64::consts::PI).abs() < tol::ALGEBRA);
    }

    #[test]
    fn circle_map_composition_and_inverse() {
        let a = CircleMap::new(0.3, Sign::Minus);
        let b = CircleMap::new(0.85, Sign::Plus);
        let c = a.compose(b);
        for &t in &[0.0, 0.2, 0.7, 0.999] {
            assert!(CircleMap::circle_distance(c.apply(t), a.apply(b.apply(t))) < tol::ALGEBRA);
            assert!(CircleMap::circle_distance(a.inverse().apply(a.apply(t)), t) < tol::ALGEBRA);
        }
    }

    #[test]
    fn orthogonal_conjugation_drops_parity() {
        // beta rho beta^-1 equals conjugation by the rotation part alone
        let beta = OrthogonalMap3 {
            rotation: Rotation(q(0.5, 0.5, 0.5, 0.5)),
            parity: Sign::Minus,
        };
        let rho = OrthogonalMap3::from_rotation(Rotation(q(0.8, 0.0, 0.6, 0.0)));
        let conj = beta.compose(rho).compose(beta.inverse());
        let conj_rot = OrthogonalMap3 {
            rotation: beta.rotation,
            parity: Sign::Plus,
        }
        .compose(rho)
        .compose(OrthogonalMap3 {
            rotation: beta.rotation.inverse(),
            parity: Sign::Plus,
        });
        assert!(conj.approx_eq(conj_rot, tol::ALGEBRA));
    }

    fn arb_quat() -> impl Strategy<Value = UnitQuaternion> {
        (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
            .prop_filter("nonzero", |(w, x, y, z)| {
                w * w + x * x + y * y + z * z > 1e-3
            })
            .prop_map(|(w, x, y, z)| {
                let n = (w * w + x * x + y * y + z * z).sqrt();
                q(w / n, x / n, y / n, z / n)
            })
    }

    fn arb_point() -> impl Strategy<Value = S2Point> {
        (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
            .prop_filter("nonzero", |(x, y, z)| x * x + y * y + z * z > 1e-3)
            .prop_map(|(x, y, z)| S2Point::normalize([x, y, z]).unwrap())
    }

    proptest! {
        #[test]
        fn quat_mul_associative(a in arb_quat(), b in arb_quat(), c in arb_quat()) {
            let lhs = a.mul(b).mul(c);
            let rhs = a.mul(b.mul(c));
            prop_assert!(lhs.dot(rhs).abs() > 1.0 - tol::ALGEBRA);
        }

        #[test]
        fn quat_mul_unit(a in arb_quat(), b in arb_quat()) {
            prop_assert!((a.mul(b).norm() - 1.0).abs() < tol::ALGEBRA);
        }

        #[test]
        fn rotate_preserves_inner_products(r in arb_quat(), y1 in arb_point(), y2 in arb_point()) {
            let r = Rotation(r);
            let before = y1.dot(y2);
            let after = r.apply(y1).dot(r.apply(y2));
            prop_assert!((before - after).abs() < tol::ALGEBRA);
        }

        #[test]
        fn rotate_symmetric_distance(a in arb_quat(), b in arb_quat()) {
            prop_assert!((Rotation(a).angle_to(Rotation(b)) - Rotation(b).angle_to(Rotation(a))).abs() < tol::ALGEBRA);
        }
    }
}
