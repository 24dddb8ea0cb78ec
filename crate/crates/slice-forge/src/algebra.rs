//! Quaternion arithmetic, the complexified algebra, the sphere of imaginary
//! units, slice embeddings and the set operations at the level of points and
//! spheres.
//!
//! Every value here is a plain `Copy` struct over `f64`; every operation is
//! pure, so values can be shared freely between threads.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Tolerance for accepting a quaternion as an imaginary unit.
pub const UNIT_TOL: f64 = 1e-12;
/// Inputs within this distance of unit norm are renormalized instead of rejected.
pub const UNIT_RENORM_TOL: f64 = 1e-9;

/// A real quaternion w + xi + yj + zk. Serializes as the 4-array
/// [w, x, y, z].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Serialize for Quaternion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Quaternion::from_array(<[f64; 4]>::deserialize(d)?))
    }
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn scalar(r: f64) -> Self {
        Quaternion::new(r, 0.0, 0.0, 0.0)
    }

    /// The *-involution q^c: negates the imaginary part.
    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    /// t(q) = q + q^c = 2w.
    pub fn trace(self) -> f64 {
        2.0 * self.w
    }

    /// n(q) = q q^c, the squared Euclidean norm.
    pub fn norm(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// The modulus |q| = sqrt(n(q)).
    pub fn abs(self) -> f64 {
        self.norm().sqrt()
    }

    pub fn re(self) -> f64 {
        self.w
    }

    /// The imaginary part as a quaternion (w component zeroed).
    pub fn im(self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    pub fn is_real(self) -> bool {
        self.x == 0.0 && self.y == 0.0 && self.z == 0.0
    }

    /// Euclidean scalar product, equal to t(q p^c)/2.
    pub fn dot(self, other: Quaternion) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// q^{-1} = n(q)^{-1} q^c.
    pub fn inverse(self) -> Result<Quaternion> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroDivision);
        }
        Ok(self.conj() * (1.0 / n))
    }

    pub fn as_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

/// An element of the 2-sphere of imaginary units (t = 0, n = 1). Serializes
/// as the imaginary 3-array [x, y, z].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unit(Quaternion);

impl Serialize for Unit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_imag_array().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Unit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y, z] = <[f64; 3]>::deserialize(d)?;
        Unit::from_imag(x, y, z).map_err(serde::de::Error::custom)
    }
}

impl Unit {
    /// Validates an imaginary unit. Inputs within `UNIT_RENORM_TOL` of unit
    /// norm (and of zero trace) are renormalized; anything farther is rejected.
    pub fn new(q: Quaternion) -> Result<Unit> {
        let n = q.norm();
        if (n - 1.0).abs() <= UNIT_TOL && q.w.abs() <= UNIT_TOL {
            return Ok(Unit(Quaternion::new(0.0, q.x, q.y, q.z)));
        }
        let imag_abs = q.im().abs();
        if (q.abs() - 1.0).abs() <= UNIT_RENORM_TOL && q.w.abs() <= UNIT_RENORM_TOL && imag_abs > 0.0
        {
            let s = 1.0 / imag_abs;
            return Ok(Unit(Quaternion::new(0.0, q.x * s, q.y * s, q.z * s)));
        }
        Err(Error::NotAUnit(format!(
            "trace {}, norm {}",
            q.trace(),
            q.norm()
        )))
    }

    /// Builds a unit from imaginary coordinates [x, y, z] (w implicitly 0).
    pub fn from_imag(x: f64, y: f64, z: f64) -> Result<Unit> {
        Unit::new(Quaternion::new(0.0, x, y, z))
    }

    /// Internal constructor for values already known to be exact units.
    pub(crate) fn from_normalized(x: f64, y: f64, z: f64) -> Unit {
        Unit(Quaternion::new(0.0, x, y, z))
    }

    pub fn i() -> Unit {
        Unit(Quaternion::I)
    }
    pub fn j() -> Unit {
        Unit(Quaternion::J)
    }
    pub fn k() -> Unit {
        Unit(Quaternion::K)
    }

    pub fn quaternion(self) -> Quaternion {
        self.0
    }

    pub fn as_imag_array(self) -> [f64; 3] {
        [self.0.x, self.0.y, self.0.z]
    }

    /// The k-coefficient of the unit; the built-in domains are parameterized
    /// by this latitude.
    pub fn latitude(self) -> f64 {
        self.0.z
    }

    /// The unit sqrt(1-r^2)(cos(az) j + sin(az) i) + r k on the latitude
    /// circle r. At the poles the azimuth is irrelevant.
    pub fn on_latitude(r: f64, azimuth: f64) -> Unit {
        let r = r.clamp(-1.0, 1.0);
        let s = (1.0 - r * r).max(0.0).sqrt();
        Unit::from_normalized(s * azimuth.sin(), s * azimuth.cos(), r)
    }

    /// The slice embedding: alpha + i beta -> alpha + beta I.
    pub fn phi(self, z: CPoint) -> Quaternion {
        Quaternion::scalar(z.alpha) + self.0 * z.beta
    }

    /// The extended embedding x + imath y -> x + I y, a surjective algebra
    /// morphism onto the quaternions (not injective).
    pub fn phi_extended(self, v: CQuaternion) -> Quaternion {
        v.p + self.0 * v.q
    }

    /// A splitting basis {1, I, J, IJ}: J is an imaginary unit orthogonal to 1
    /// and I, produced by Gram-Schmidt over the deterministic seed order
    /// (i, j, k), and K = I*J.
    pub fn splitting_basis(self) -> (Unit, Quaternion) {
        let iq = self.0;
        for seed in [Quaternion::I, Quaternion::J, Quaternion::K] {
            let c = seed - iq * seed.dot(iq);
            let n = c.abs();
            if n > 1e-3 {
                let j = Unit(c * (1.0 / n));
                return (j, iq * j.0);
            }
        }
        unreachable!("an imaginary unit cannot be orthogonal to all of i, j, k");
    }

    /// `count` probe units on the circle of chordal radius `eps` around this
    /// unit inside the sphere of imaginary units.
    pub fn cap_probes(self, eps: f64, count: usize) -> Vec<Unit> {
        let axis = [self.0.x, self.0.y, self.0.z];
        // tangent frame: start from the coordinate axis least aligned with us
        let seed = if axis[0].abs() <= axis[1].abs() && axis[0].abs() <= axis[2].abs() {
            [1.0, 0.0, 0.0]
        } else if axis[1].abs() <= axis[2].abs() {
            [0.0, 1.0, 0.0]
        } else {
            [0.0, 0.0, 1.0]
        };
        let mut t1 = cross(axis, seed);
        let n1 = (t1[0] * t1[0] + t1[1] * t1[1] + t1[2] * t1[2]).sqrt();
        t1 = [t1[0] / n1, t1[1] / n1, t1[2] / n1];
        let t2 = cross(axis, t1);
        let theta = 2.0 * (eps / 2.0).clamp(0.0, 1.0).asin();
        let (st, ct) = theta.sin_cos();
        (0..count)
            .map(|m| {
                let psi = 2.0 * std::f64::consts::PI * m as f64 / count as f64;
                let (sp, cp) = psi.sin_cos();
                let d = [
                    ct * axis[0] + st * (cp * t1[0] + sp * t2[0]),
                    ct * axis[1] + st * (cp * t1[1] + sp * t2[1]),
                    ct * axis[2] + st * (cp * t1[2] + sp * t2[2]),
                ];
                let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
                Unit::from_normalized(d[0] / n, d[1] / n, d[2] / n)
            })
            .collect()
    }
}

impl Neg for Unit {
    type Output = Unit;
    fn neg(self) -> Unit {
        Unit(-self.0)
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// A point alpha + imath beta of the complexified real plane. The canonical
/// representative of a sphere has beta >= 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CPoint {
    pub alpha: f64,
    pub beta: f64,
}

impl CPoint {
    pub const fn new(alpha: f64, beta: f64) -> Self {
        CPoint { alpha, beta }
    }

    pub fn conj(self) -> Self {
        CPoint::new(self.alpha, -self.beta)
    }

    pub fn abs(self) -> f64 {
        (self.alpha * self.alpha + self.beta * self.beta).sqrt()
    }

    pub fn is_real(self) -> bool {
        self.beta == 0.0
    }
}

/// An element p + imath q of the complexified quaternion algebra. The formal
/// imaginary imath commutes with everything. Serializes as a pair of
/// quaternion 4-arrays.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CQuaternion {
    pub p: Quaternion,
    pub q: Quaternion,
}

impl Serialize for CQuaternion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_arrays().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CQuaternion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [p, q] = <[[f64; 4]; 2]>::deserialize(d)?;
        Ok(CQuaternion::new(
            Quaternion::from_array(p),
            Quaternion::from_array(q),
        ))
    }
}

impl CQuaternion {
    pub const fn new(p: Quaternion, q: Quaternion) -> Self {
        CQuaternion { p, q }
    }

    /// Embeds a quaternion as p + imath 0.
    pub fn from_quaternion(p: Quaternion) -> Self {
        CQuaternion::new(p, Quaternion::ZERO)
    }

    /// Embeds a plane point as the central element alpha + imath beta.
    pub fn from_cpoint(z: CPoint) -> Self {
        CQuaternion::new(Quaternion::scalar(z.alpha), Quaternion::scalar(z.beta))
    }

    /// Complex conjugation p + imath q -> p - imath q.
    pub fn bar(self) -> Self {
        CQuaternion::new(self.p, -self.q)
    }

    /// The *-involution (p + imath q)^c = p^c + imath q^c.
    pub fn star(self) -> Self {
        CQuaternion::new(self.p.conj(), self.q.conj())
    }

    pub fn abs(self) -> f64 {
        (self.p.norm() + self.q.norm()).sqrt()
    }

    pub fn as_arrays(self) -> [[f64; 4]; 2] {
        [self.p.as_array(), self.q.as_array()]
    }
}

impl Add for CQuaternion {
    type Output = CQuaternion;
    fn add(self, o: CQuaternion) -> CQuaternion {
        CQuaternion::new(self.p + o.p, self.q + o.q)
    }
}

impl Sub for CQuaternion {
    type Output = CQuaternion;
    fn sub(self, o: CQuaternion) -> CQuaternion {
        CQuaternion::new(self.p - o.p, self.q - o.q)
    }
}

impl Neg for CQuaternion {
    type Output = CQuaternion;
    fn neg(self) -> CQuaternion {
        CQuaternion::new(-self.p, -self.q)
    }
}

impl Mul for CQuaternion {
    type Output = CQuaternion;
    fn mul(self, o: CQuaternion) -> CQuaternion {
        // (x + imath y)(x' + imath y') = xx' - yy' + imath (xy' + yx')
        CQuaternion::new(
            self.p * o.p - self.q * o.q,
            self.p * o.q + self.q * o.p,
        )
    }
}

impl Mul<f64> for CQuaternion {
    type Output = CQuaternion;
    fn mul(self, t: f64) -> CQuaternion {
        CQuaternion::new(self.p * t, self.q * t)
    }
}

/// Result of writing x = alpha + beta I with beta >= 0. For real x the unit
/// is the canonical i and `arbitrary` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub alpha: f64,
    pub beta: f64,
    pub unit: Unit,
    pub arbitrary: bool,
}

impl Decomposition {
    pub fn cpoint(self) -> CPoint {
        CPoint::new(self.alpha, self.beta)
    }
}

/// Writes x = alpha + beta I with beta >= 0; at real points the unit is the
/// canonical i, flagged as arbitrary.
pub fn decompose(x: Quaternion) -> Decomposition {
    let alpha = x.w;
    let im = x.im();
    let beta = im.abs();
    if beta == 0.0 {
        return Decomposition {
            alpha,
            beta: 0.0,
            unit: Unit::i(),
            arbitrary: true,
        };
    }
    let s = 1.0 / beta;
    Decomposition {
        alpha,
        beta,
        unit: Unit::from_normalized(im.x * s, im.y * s, im.z * s),
        arbitrary: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    #[test]
    fn defining_relations() {
        assert_eq!(Quaternion::I * Quaternion::J, Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::K, Quaternion::I);
        assert_eq!(Quaternion::K * Quaternion::I, Quaternion::J);
        assert_eq!(Quaternion::I * Quaternion::I, -Quaternion::ONE);
    }

    #[test]
    fn product_expansion() {
        let a = q(1.0, 1.0, 0.0, 0.0);
        let b = q(1.0, 0.0, 1.0, 0.0);
        assert_eq!(a * b, q(1.0, 1.0, 1.0, 1.0));
        assert_abs_diff_eq!((a * b).norm(), 4.0, epsilon = 1e-14);
    }

    #[test]
    fn inverse_values() {
        assert_eq!(Quaternion::I.inverse().unwrap(), -Quaternion::I);
        let v = q(1.0, 1.0, 0.0, 0.0).inverse().unwrap();
        assert_abs_diff_eq!(v.w, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(v.x, -0.5, epsilon = 1e-15);
        assert_eq!(Quaternion::ZERO.inverse(), Err(Error::ZeroDivision));
        let a = q(0.3, -1.2, 0.7, 2.0);
        let prod = a * a.inverse().unwrap();
        assert_abs_diff_eq!((prod - Quaternion::ONE).abs(), 0.0, epsilon = 1e-14);
        let prod = a.inverse().unwrap() * a;
        assert_abs_diff_eq!((prod - Quaternion::ONE).abs(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn decompose_cases() {
        let d = decompose(q(1.0, 2.0, 0.0, 0.0));
        assert_eq!((d.alpha, d.beta), (1.0, 2.0));
        assert_eq!(d.unit, Unit::i());
        assert!(!d.arbitrary);

        let d = decompose(Quaternion::scalar(3.0));
        assert_eq!((d.alpha, d.beta), (3.0, 0.0));
        assert_eq!(d.unit, Unit::i());
        assert!(d.arbitrary);

        let d = decompose(Quaternion::J + Quaternion::K);
        assert_abs_diff_eq!(d.beta, 2f64.sqrt(), epsilon = 1e-15);
        let u = d.unit.quaternion();
        assert_abs_diff_eq!(u.y, 1.0 / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(u.z, 1.0 / 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn phi_values() {
        assert_eq!(
            Unit::j().phi(CPoint::new(1.0, 2.0)),
            q(1.0, 0.0, 2.0, 0.0)
        );
        assert_eq!(Unit::i().phi(CPoint::new(3.0, 0.0)), Quaternion::scalar(3.0));
        let d = decompose(Quaternion::J + Quaternion::K);
        let back = d.unit.phi(CPoint::new(0.0, d.beta));
        assert_abs_diff_eq!((back - (Quaternion::J + Quaternion::K)).abs(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn phi_extended_values() {
        let v = CQuaternion::new(Quaternion::ONE, Quaternion::J);
        assert_eq!(Unit::i().phi_extended(v), q(1.0, 0.0, 0.0, 1.0));
        // j + imath k maps to j + ik = j - j = 0: the extension loses injectivity
        let v = CQuaternion::new(Quaternion::J, Quaternion::K);
        assert_eq!(Unit::i().phi_extended(v), Quaternion::ZERO);
        let w = CQuaternion::from_quaternion(q(0.4, -0.1, 2.0, 0.3));
        assert_eq!(Unit::k().phi_extended(w), q(0.4, -0.1, 2.0, 0.3));
    }

    #[test]
    fn splitting_basis_cases() {
        let (j, k) = Unit::i().splitting_basis();
        assert_eq!(j, Unit::j());
        assert_eq!(k, Quaternion::K);

        let i2 = Unit::from_imag(1.0, 1.0, 0.0).err();
        assert!(i2.is_some()); // (i + j) is not a unit
        let u = Unit::new((Quaternion::I + Quaternion::J) * (1.0 / 2f64.sqrt())).unwrap();
        let (j, k) = u.splitting_basis();
        let jq = j.quaternion();
        assert_abs_diff_eq!(jq.dot(u.quaternion()), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(jq.dot(Quaternion::ONE), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(jq.abs(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(jq.x, 1.0 / 2f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(jq.y, -1.0 / 2f64.sqrt(), epsilon = 1e-12);
        // {1, I, J, IJ} is othonormal
        assert_abs_diff_eq!(k.abs(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(k.dot(u.quaternion()), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(k.dot(jq), 0.0, epsilon = 1e-14);

        assert!(Unit::new(Quaternion::I * 2.0).is_err());
    }

    #[test]
    fn unit_renormalization_window() {
        let nearly = Quaternion::new(0.0, 1.0 + 5e-10, 0.0, 0.0);
        let u = Unit::new(nearly).unwrap();
        assert_abs_diff_eq!(u.quaternion().abs(), 1.0, epsilon = 1e-15);
        let off = Quaternion::new(0.0, 1.0 + 5e-8, 0.0, 0.0);
        assert!(Unit::new(off).is_err());
    }

    #[test]
    fn cquaternion_products() {
        let imath = CQuaternion::new(Quaternion::ZERO, Quaternion::ONE);
        let sq = imath * imath;
        assert_eq!(sq.p, -Quaternion::ONE);
        assert_eq!(sq.q, Quaternion::ZERO);

        let a = CQuaternion::new(Quaternion::I, Quaternion::J);
        let b = CQuaternion::new(Quaternion::I, -Quaternion::J);
        let prod = a * b;
        assert_eq!(prod.p, Quaternion::scalar(-2.0));
        assert_eq!(prod.q, Quaternion::K * -2.0);

        let p = q(0.3, 1.0, -2.0, 0.5);
        let p2 = q(-1.0, 0.7, 0.2, 0.0);
        let embedded = CQuaternion::from_quaternion(p) * CQuaternion::from_quaternion(p2);
        assert_eq!(embedded.p, p * p2);
        assert_eq!(embedded.q, Quaternion::ZERO);
    }

    #[test]
    fn involutions() {
        let v = CQuaternion::new(Quaternion::I, Quaternion::J);
        assert_eq!(v.bar(), CQuaternion::new(Quaternion::I, -Quaternion::J));
        assert_eq!(v.star(), CQuaternion::new(-Quaternion::I, -Quaternion::J));
        assert_eq!(v.bar().bar(), v);
        assert_eq!(v.star().star(), v);
        assert_eq!(v.bar().star(), v.star().bar());
    }

    #[test]
    fn centrality_of_imath() {
        let imath = CQuaternion::new(Quaternion::ZERO, Quaternion::ONE);
        let v = CQuaternion::new(q(0.3, 1.0, -2.0, 0.5), q(-1.0, 0.7, 0.2, 4.0));
        assert_eq!(imath * v, v * imath);
    }

    #[test]
    fn slices_meet_only_on_reals() {
        // phi(I, z1) = phi(J, z2) with I != +-J forces beta = 0
        let i = Unit::i();
        let j = Unit::on_latitude(0.4, 0.3);
        for beta in [0.5, 1.0, 3.0] {
            let x = i.phi(CPoint::new(1.0, beta));
            let d = decompose(x);
            let align = d.unit.quaternion().dot(j.quaternion()).abs();
            assert!(align < 1.0 - 1e-9, "nonreal point landed on both slices");
        }
    }

    /// The extension of the slice embedding is multiplicative whenever one
    /// factor is central (which is what inducing slice functions from
    /// central-power stems uses), and on embedded quaternions.
    #[test]
    fn phi_extended_is_multiplicative_over_central_factors() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let rand_q = |rng: &mut rand_chacha::ChaCha8Rng| {
            Quaternion::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            )
        };
        for _ in 0..1000 {
            let u = Unit::on_latitude(rng.gen_range(-1.0..1.0), rng.gen_range(0.0..std::f64::consts::TAU));
            let z = CQuaternion::from_cpoint(CPoint::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ));
            // central factors are image-left: phi(z v) = phi(v z) = phi(z) phi(v)
            let v = CQuaternion::new(rand_q(&mut rng), rand_q(&mut rng));
            let left = (u.phi_extended(z * v) - u.phi_extended(z) * u.phi_extended(v)).abs();
            let right = (u.phi_extended(v * z) - u.phi_extended(z) * u.phi_extended(v)).abs();
            assert!(left <= 1e-12 * (1.0 + v.abs() * z.abs()), "left {left}");
            assert!(right <= 1e-12 * (1.0 + v.abs() * z.abs()), "right {right}");
            let (a, b) = (rand_q(&mut rng), rand_q(&mut rng));
            let emb = (u.phi_extended(
                CQuaternion::from_quaternion(a) * CQuaternion::from_quaternion(b),
            ) - a * b)
                .abs();
            assert!(emb <= 1e-12 * (1.0 + (a * b).abs()));
        }
    }

    /// The extension is not multiplicative on general pairs: (imath j)^2 = 1
    /// maps to 1, while (i j)^2 = k^2 = -1. (Equivalently, the complexified
    /// algebra is simple, so it has no surjective morphism onto a proper
    /// quotient.)
    #[test]
    fn phi_extended_has_no_full_product_rule() {
        let v = CQuaternion::new(Quaternion::ZERO, Quaternion::J);
        let square = v * v;
        assert_eq!(square.p, Quaternion::ONE);
        assert_eq!(square.q, Quaternion::ZERO);
        let u = Unit::i();
        assert_eq!(u.phi_extended(square), Quaternion::ONE);
        let image = u.phi_extended(v);
        assert_eq!(image * image, -Quaternion::ONE);
    }

    #[test]
    fn cap_probes_on_circle() {
        let u = Unit::on_latitude(0.3, 1.2);
        for k in u.cap_probes(0.05, 8) {
            let kq = k.quaternion();
            assert_abs_diff_eq!(kq.norm(), 1.0, epsilon = 1e-13);
            assert_abs_diff_eq!((kq - u.quaternion()).abs(), 0.05, epsilon = 1e-13);
        }
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(
            a in proptest::array::uniform4(-3.0f64..3.0),
            b in proptest::array::uniform4(-3.0f64..3.0),
        ) {
            let (a, b) = (Quaternion::from_array(a), Quaternion::from_array(b));
            let lhs = (a * b).norm();
            let rhs = a.norm() * b.norm();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }

        #[test]
        fn conj_is_an_antihomomorphism(
            a in proptest::array::uniform4(-3.0f64..3.0),
            b in proptest::array::uniform4(-3.0f64..3.0),
        ) {
            let (a, b) = (Quaternion::from_array(a), Quaternion::from_array(b));
            let lhs = (a * b).conj();
            let rhs = b.conj() * a.conj();
            prop_assert!((lhs - rhs).abs() <= 1e-12);
            prop_assert_eq!(a.conj().conj(), a);
        }

        #[test]
        fn decompose_phi_round_trip(v in proptest::array::uniform4(-3.0f64..3.0)) {
            let x = Quaternion::from_array(v);
            let d = decompose(x);
            prop_assert!(d.beta >= 0.0);
            let back = d.unit.phi(CPoint::new(d.alpha, d.beta));
            prop_assert!((back - x).abs() <= 1e-12 * (1.0 + x.abs()));
        }

        #[test]
        fn phi_extended_restricted_to_plane_is_holomorphic(
            alpha in -2.0f64..2.0,
            beta in -2.0f64..2.0,
            lat in -0.99f64..0.99,
            az in 0.0f64..std::f64::consts::TAU,
        ) {
            // imath-multiplication maps to left I-multiplication on the plane
            let u = Unit::on_latitude(lat, az);
            let imath = CQuaternion::new(Quaternion::ZERO, Quaternion::ONE);
            let z = CQuaternion::from_cpoint(CPoint::new(alpha, beta));
            let lhs = u.phi_extended(imath * z);
            let rhs = u.quaternion() * u.phi_extended(z);
            prop_assert!((lhs - rhs).abs() <= 1e-12);
        }
    }
}
