//! Hamilton quaternions, the imaginary unit sphere, slice frames and
//! similarity orbits.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectraError};
use crate::scalar::Real;

/// A quaternion `w + x·i + y·j + z·k`.
///
/// Serializes as the array `[w, x, y, z]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[T; 4]", into = "[T; 4]")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> From<[T; 4]> for Quaternion<T> {
    fn from([w, x, y, z]: [T; 4]) -> Self {
        Self { w, x, y, z }
    }
}

impl<T: Real> From<Quaternion<T>> for [T; 4] {
    fn from(q: Quaternion<T>) -> Self {
        [q.w, q.x, q.y, q.z]
    }
}

impl<T: Real> Quaternion<T> {
    #[inline]
    pub const fn new(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }

    #[inline]
    pub fn from_real(w: T) -> Self {
        Self::new(w, T::zero(), T::zero(), T::zero())
    }

    #[inline]
    pub fn zero() -> Self {
        Self::from_real(T::zero())
    }

    #[inline]
    pub fn one() -> Self {
        Self::from_real(T::one())
    }

    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    /// Real part `re(q)`.
    #[inline]
    pub fn re(&self) -> T {
        self.w
    }

    /// Imaginary part `im(q)` as a pure quaternion.
    #[inline]
    pub fn im(&self) -> Self {
        Self::new(T::zero(), self.x, self.y, self.z)
    }

    #[inline]
    pub fn conj(&self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(&self) -> T {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// `|q|`, computed without intermediate overflow.
    #[inline]
    pub fn norm(&self) -> T {
        self.w.hypot(self.x).hypot(self.y.hypot(self.z))
    }

    /// The pair `(q̄, |q|)`.
    pub fn conj_mod(&self) -> (Self, T) {
        (self.conj(), self.norm())
    }

    /// `|im(q)|`.
    #[inline]
    pub fn im_norm(&self) -> T {
        self.x.hypot(self.y).hypot(self.z)
    }

    /// Euclidean inner product of the component 4-vectors, `re(p̄q)`.
    #[inline]
    pub fn dot(&self, other: &Self) -> T {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn scale(&self, s: T) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let n2 = self.norm_sqr();
        if n2 == T::zero() {
            None
        } else {
            Some(self.conj().scale(n2.recip()))
        }
    }

    /// `q / |q|`, `None` for zero.
    pub fn normalize(&self) -> Option<Self> {
        let n = self.norm();
        if n == T::zero() {
            None
        } else {
            Some(self.scale(n.recip()))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// `|self - other|`.
    #[inline]
    pub fn dist(&self, other: &Self) -> T {
        (*self - *other).norm()
    }

    /// Comma-separated text form `w,x,y,z`; round-trips bit-exactly through [`FromStr`].
    pub fn to_csv(&self) -> String {
        format!("{},{},{},{}", self.w, self.x, self.y, self.z)
    }

    pub fn cast<U: Real>(&self) -> Quaternion<U> {
        let c = |t: T| U::from_f64(t.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(U::nan);
        Quaternion::new(c(self.w), c(self.x), c(self.y), c(self.z))
    }
}

impl<T: Real> Add for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Neg for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product; `i² = j² = k² = ijk = −1`.
impl<T: Real> Mul for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl<T: Real> Mul<T> for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

impl<T: Real> Div<T> for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn div(self, s: T) -> Self {
        self.scale(s.recip())
    }
}

impl<T: Real> AddAssign for Quaternion<T> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> SubAssign for Quaternion<T> {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Real> MulAssign for Quaternion<T> {
    #[inline]
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl<T: Real> Sum for Quaternion<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl<T: Real> fmt::Display for Quaternion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.w, self.x, self.y, self.z)
    }
}

impl<T: Real + FromStr> FromStr for Quaternion<T> {
    type Err = SpectraError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(SpectraError::Parse(format!(
                "expected four comma-separated components, got {}",
                parts.len()
            )));
        }
        let mut c = [T::zero(); 4];
        for (slot, p) in c.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| SpectraError::Parse(format!("invalid component {p:?}")))?;
        }
        Ok(c.into())
    }
}

/// A point of the imaginary unit sphere `S`: `re = 0`, `|q| = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ImaginaryUnit<T>(Quaternion<T>);

impl<T: Real> ImaginaryUnit<T> {
    /// Validates membership in `S` to [`Real::slice_tol`].
    pub fn new(q: Quaternion<T>) -> Result<Self> {
        let tol = T::slice_tol();
        if q.w.abs() > tol || (q.norm() - T::one()).abs() > tol {
            return Err(SpectraError::NotUnitImaginary {
                re: q.w.to_f64().unwrap_or(f64::NAN),
                norm: q.norm().to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self(q))
    }

    /// Rescales a non-zero pure quaternion onto `S`.
    pub fn normalized(q: Quaternion<T>) -> Result<Self> {
        let err = || SpectraError::NotUnitImaginary {
            re: q.w.to_f64().unwrap_or(f64::NAN),
            norm: q.norm().to_f64().unwrap_or(f64::NAN),
        };
        if q.w.abs() > T::slice_tol() * q.norm().max(T::one()) {
            return Err(err());
        }
        let im = q.im();
        let n = im.norm();
        if n == T::zero() || !n.is_finite() {
            return Err(err());
        }
        Ok(Self(im.scale(n.recip())))
    }

    pub fn i() -> Self {
        Self(Quaternion::i())
    }

    #[inline]
    pub fn get(&self) -> Quaternion<T> {
        self.0
    }
}

/// An anticommuting pair `(m, n)` in `S` together with `mn = m·n`.
///
/// `{1, m, n, mn}` is an orthonormal real basis of ℍ, so every quaternion
/// splits uniquely as `a + b·n` with `a, b ∈ C_m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SliceFrame<T> {
    m: ImaginaryUnit<T>,
    n: ImaginaryUnit<T>,
    mn: ImaginaryUnit<T>,
}

impl<T: Real> SliceFrame<T> {
    /// Completes `m` to a frame with a deterministic second unit.
    ///
    /// The seed axis is `i` unless `m` is within `acos 0.9` of `±i`, in which
    /// case `j` is used; `n` is the seed with its `m`-component removed.
    pub fn complete(m: ImaginaryUnit<T>) -> Self {
        let mq = m.get();
        let seed = if mq.x.abs() < T::lit(0.9) {
            Quaternion::i()
        } else {
            Quaternion::j()
        };
        let n = (seed - mq.scale(seed.dot(&mq)))
            .normalize()
            .expect("seed axis is never parallel to m");
        Self {
            m,
            n: ImaginaryUnit(n),
            mn: ImaginaryUnit(mq * n),
        }
    }

    /// Builds a frame from an explicit anticommuting pair.
    pub fn new(m: ImaginaryUnit<T>, n: ImaginaryUnit<T>) -> Result<Self> {
        let (mq, nq) = (m.get(), n.get());
        let anti = (mq * nq + nq * mq).norm();
        if anti > T::slice_tol() {
            return Err(SpectraError::Parse(format!(
                "m and n do not anticommute (|mn + nm| = {anti})"
            )));
        }
        Ok(Self {
            m,
            n,
            mn: ImaginaryUnit(mq * nq),
        })
    }

    /// The frame `(i, j, k)`.
    pub fn standard() -> Self {
        Self::complete(ImaginaryUnit::i())
    }

    #[inline]
    pub fn m(&self) -> Quaternion<T> {
        self.m.get()
    }

    #[inline]
    pub fn n(&self) -> Quaternion<T> {
        self.n.get()
    }

    #[inline]
    pub fn mn(&self) -> Quaternion<T> {
        self.mn.get()
    }

    pub fn unit_m(&self) -> ImaginaryUnit<T> {
        self.m
    }

    /// Real coordinates of `q` in the basis `{1, m, n, mn}`.
    #[inline]
    pub fn coords(&self, q: &Quaternion<T>) -> [T; 4] {
        [q.w, q.dot(&self.m()), q.dot(&self.n()), q.dot(&self.mn())]
    }

    /// Writes `q = a + b·n` with `a, b ∈ C_m`.
    pub fn split(&self, q: &Quaternion<T>) -> (Quaternion<T>, Quaternion<T>) {
        let [q0, q1, q2, q3] = self.coords(q);
        (self.slice_value(q0, q1), self.slice_value(q2, q3))
    }

    /// Inverse of [`split`](Self::split): `a + b·n`.
    #[inline]
    pub fn combine(&self, a: &Quaternion<T>, b: &Quaternion<T>) -> Quaternion<T> {
        *a + *b * self.n()
    }

    /// `α + m·β`.
    #[inline]
    pub fn slice_value(&self, alpha: T, beta: T) -> Quaternion<T> {
        Quaternion::from_real(alpha) + self.m().scale(beta)
    }

    /// Coordinates `(α, β)` of the projection of `q` onto `C_m`.
    #[inline]
    pub fn to_complex(&self, q: &Quaternion<T>) -> Complex<T> {
        Complex::new(q.w, q.dot(&self.m()))
    }

    #[inline]
    pub fn from_complex(&self, c: Complex<T>) -> Quaternion<T> {
        self.slice_value(c.re, c.im)
    }

    /// Norm of the component of `q` outside `C_m`.
    #[inline]
    pub fn off_slice(&self, q: &Quaternion<T>) -> T {
        q.dot(&self.n()).hypot(q.dot(&self.mn()))
    }

    /// Projects onto `C_m` after checking the off-slice mass is at most `tol`.
    pub fn project(&self, q: &Quaternion<T>, tol: T, index: usize) -> Result<Quaternion<T>> {
        let mass = self.off_slice(q);
        if !(mass <= tol) {
            return Err(SpectraError::NotInSlice {
                index,
                mass: mass.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(self.from_complex(self.to_complex(q)))
    }
}

/// The similarity class `[p] = {s⁻¹ps}`: a 2-sphere of radius `im_norm`
/// around the real point `re`, degenerate when `im_norm = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
#[serde(from = "[T; 2]", into = "[T; 2]")]
pub struct SimilarityOrbit<T> {
    pub re: T,
    pub im_norm: T,
}

impl<T: Real> From<[T; 2]> for SimilarityOrbit<T> {
    fn from([re, im_norm]: [T; 2]) -> Self {
        Self { re, im_norm }
    }
}

impl<T: Real> From<SimilarityOrbit<T>> for [T; 2] {
    fn from(o: SimilarityOrbit<T>) -> Self {
        [o.re, o.im_norm]
    }
}

impl<T: Real> SimilarityOrbit<T> {
    pub fn of(q: &Quaternion<T>) -> Self {
        Self {
            re: q.re(),
            im_norm: q.im_norm(),
        }
    }

    pub fn is_point(&self) -> bool {
        self.im_norm == T::zero()
    }

    pub fn contains(&self, p: &Quaternion<T>, tol: T) -> bool {
        (p.re() - self.re).abs() <= tol && (p.im_norm() - self.im_norm).abs() <= tol
    }

    /// Chebyshev distance in the `(re, im_norm)` half plane.
    pub fn distance(&self, other: &Self) -> T {
        (self.re - other.re)
            .abs()
            .max((self.im_norm - other.im_norm).abs())
    }

    /// The unique representative `re + m·im_norm` in the closed upper half-slice `C_m⁺`.
    pub fn cm_plus_rep(&self, frame: &SliceFrame<T>) -> Quaternion<T> {
        // abs() turns a stray -0.0 into +0.0
        frame.slice_value(self.re, self.im_norm.abs())
    }
}
