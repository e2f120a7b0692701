//! Points of the four hyperbolic models and their metrics.
//!
//! Every metric here has curvature −1. The disc carries density
//! `2/(1−|z|²)`, the half-planes `1/Im ζ` and `1/Re w`, and the punctured
//! disc `−1/(|z| log|z|)`, which is the push-forward of the upper half-plane
//! metric under `ζ ↦ e^{2πiζ}`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::covering;
use crate::error::{HypError, Result};
use crate::quad;
use crate::scalar::{lit, Real};

/// Points closer than this to a model boundary are rejected on construction.
pub const BOUNDARY_MARGIN: f64 = 1e-14;
/// Computed images may overshoot the boundary by this much before it counts
/// as an integrity failure; smaller overshoots are clamped back inside.
pub const IMAGE_ESCAPE_TOL: f64 = 1e-12;

const ORACLE_TOL: f64 = 1e-9;
const ORACLE_MAX_PANELS: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// Unit disc 𝔻.
    Disc,
    /// Upper half-plane ℍ.
    UpperHalfPlane,
    /// Right half-plane 𝕂.
    RightHalfPlane,
    /// Punctured disc 𝔻*.
    PuncturedDisc,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Disc => "disc",
            Model::UpperHalfPlane => "upper",
            Model::RightHalfPlane => "right",
            Model::PuncturedDisc => "punctured",
        }
    }

    /// Signed Euclidean clearance from the boundary: positive inside.
    fn clearance<T: Real>(self, z: Complex<T>) -> T {
        match self {
            Model::Disc => T::one() - z.norm(),
            Model::UpperHalfPlane => z.im,
            Model::RightHalfPlane => z.re,
            Model::PuncturedDisc => {
                let r = z.norm();
                (T::one() - r).min(r)
            }
        }
    }

    /// Open-set membership with no margin.
    pub fn contains<T: Real>(self, z: Complex<T>) -> bool {
        z.re.is_finite() && z.im.is_finite() && self.clearance(z) > T::zero()
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = HypError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "disc" | "disk" | "d" => Ok(Model::Disc),
            "upper" | "uhp" | "h" | "upper_half_plane" => Ok(Model::UpperHalfPlane),
            "right" | "rhp" | "k" | "right_half_plane" => Ok(Model::RightHalfPlane),
            "punctured" | "punctured_disc" | "d*" => Ok(Model::PuncturedDisc),
            other => Err(HypError::Usage(format!("unknown model `{other}`"))),
        }
    }
}

/// A complex number tagged with the model it lives in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelPoint<T> {
    value: Complex<T>,
    model: Model,
}

impl<T: Real> ModelPoint<T> {
    /// Validates `value` against `model`, rejecting points within
    /// [`BOUNDARY_MARGIN`] of the boundary.
    pub fn new(value: Complex<T>, model: Model) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(HypError::Validation(format!("non-finite point in {model}")));
        }
        if model.clearance(value) <= lit(BOUNDARY_MARGIN) {
            return Err(HypError::Validation(format!("point {value} is not inside the {model} model")));
        }
        Ok(Self { value, model })
    }

    pub fn disc(re: T, im: T) -> Result<Self> {
        Self::new(Complex::new(re, im), Model::Disc)
    }

    pub fn upper(re: T, im: T) -> Result<Self> {
        Self::new(Complex::new(re, im), Model::UpperHalfPlane)
    }

    pub fn right(re: T, im: T) -> Result<Self> {
        Self::new(Complex::new(re, im), Model::RightHalfPlane)
    }

    pub fn punctured(re: T, im: T) -> Result<Self> {
        Self::new(Complex::new(re, im), Model::PuncturedDisc)
    }

    /// Wraps a computed image. Points strictly inside are accepted as is;
    /// overshoots up to [`IMAGE_ESCAPE_TOL`] are pulled back just inside.
    pub fn from_image(value: Complex<T>, model: Model) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(HypError::Integrity(format!("non-finite image in {model}")));
        }
        let clearance = model.clearance(value);
        if clearance > T::zero() {
            return Ok(Self { value, model });
        }
        if -clearance > lit(IMAGE_ESCAPE_TOL) {
            return Err(HypError::Integrity(format!("image {value} escapes the {model} model by {}", -clearance)));
        }
        let eps = T::epsilon();
        let clamped = match model {
            Model::Disc => value / value.norm() * (T::one() - eps),
            Model::UpperHalfPlane => Complex::new(value.re, T::min_positive_value()),
            Model::RightHalfPlane => Complex::new(T::min_positive_value(), value.im),
            Model::PuncturedDisc => {
                let r = value.norm();
                if r >= T::one() {
                    value / r * (T::one() - eps)
                } else if r == T::zero() {
                    Complex::new(T::min_positive_value(), T::zero())
                } else {
                    value / r * T::min_positive_value()
                }
            }
        };
        Ok(Self { value: clamped, model })
    }

    pub fn value(&self) -> Complex<T> {
        self.value
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn re(&self) -> T {
        self.value.re
    }

    pub fn im(&self) -> T {
        self.value.im
    }
}

impl<T: Real> fmt::Display for ModelPoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.value, self.model)
    }
}

/// sinh and cosh of half the disc distance between two points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfDistancePair<T> {
    pub s: T,
    pub c: T,
}

pub(crate) fn require_same_model<T: Real>(u: &ModelPoint<T>, v: &ModelPoint<T>) -> Result<Model> {
    if u.model != v.model {
        return Err(HypError::Domain(format!("points live in different models ({} vs {})", u.model, v.model)));
    }
    Ok(u.model)
}

/// `1 − |z|²` without cancellation near the circle.
#[inline]
pub(crate) fn one_minus_norm_sqr<T: Real>(z: Complex<T>) -> T {
    let r = z.norm();
    (T::one() - r) * (T::one() + r)
}

/// Distance in the disc: `2·atanh(|u−v|/|1−u·v̄|)`.
pub(crate) fn disc_dist_raw<T: Real>(u: Complex<T>, v: Complex<T>) -> T {
    let num = (u - v).norm();
    if num == T::zero() {
        return T::zero();
    }
    let den = (Complex::new(T::one(), T::zero()) - u * v.conj()).norm();
    let q = (num / den).min(T::one() - T::epsilon());
    lit::<T>(2.0) * q.atanh()
}

/// Distance in ℍ: `2·asinh(|u−v| / (2√(Im u·Im v)))`.
pub(crate) fn upper_dist_raw<T: Real>(u: Complex<T>, v: Complex<T>) -> T {
    let num = (u - v).norm();
    if num == T::zero() {
        return T::zero();
    }
    let den = lit::<T>(2.0) * (u.im * v.im).sqrt();
    lit::<T>(2.0) * (num / den).asinh()
}

#[inline]
fn i_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// Hyperbolic distance between two points of the same model.
pub fn dist<T: Real>(u: &ModelPoint<T>, v: &ModelPoint<T>) -> Result<T> {
    match require_same_model(u, v)? {
        Model::Disc => Ok(disc_dist_raw(u.value, v.value)),
        Model::UpperHalfPlane => Ok(upper_dist_raw(u.value, v.value)),
        Model::RightHalfPlane => {
            let (p, q) = (convert(u, Model::UpperHalfPlane)?, convert(v, Model::UpperHalfPlane)?);
            Ok(upper_dist_raw(p.value, q.value))
        }
        Model::PuncturedDisc => covering::punctured_dist(u, v),
    }
}

/// `(sinh ½ρ(u,v), cosh ½ρ(u,v))` for disc points, from the closed forms
/// `|u−v|/√((1−|u|²)(1−|v|²))` and `|1−u·v̄|/√((1−|u|²)(1−|v|²))`.
pub fn half_sinh_cosh<T: Real>(u: &ModelPoint<T>, v: &ModelPoint<T>) -> Result<HalfDistancePair<T>> {
    if u.model != Model::Disc || v.model != Model::Disc {
        return Err(HypError::Validation("half_sinh_cosh requires two disc points".into()));
    }
    Ok(half_sinh_cosh_raw(u.value, v.value))
}

pub(crate) fn half_sinh_cosh_raw<T: Real>(u: Complex<T>, v: Complex<T>) -> HalfDistancePair<T> {
    let root = (one_minus_norm_sqr(u) * one_minus_norm_sqr(v)).sqrt();
    let s = (u - v).norm() / root;
    let c = (Complex::new(T::one(), T::zero()) - u * v.conj()).norm() / root;
    HalfDistancePair { s, c }
}

/// Riemannian density of the model at `z`.
pub fn density<T: Real>(z: &ModelPoint<T>) -> T {
    let w = z.value;
    match z.model {
        Model::Disc => lit::<T>(2.0) / one_minus_norm_sqr(w),
        Model::UpperHalfPlane => T::one() / w.im,
        Model::RightHalfPlane => T::one() / w.re,
        Model::PuncturedDisc => punctured_density_raw(w),
    }
}

pub(crate) fn punctured_density_raw<T: Real>(z: Complex<T>) -> T {
    let r = z.norm();
    -T::one() / (r * r.ln())
}

/// `λ*(z) = −1/(|z| log|z|)`, the density of the punctured-disc metric.
pub fn density_punctured<T: Real>(z: &ModelPoint<T>) -> Result<T> {
    if z.model != Model::PuncturedDisc {
        return Err(HypError::Validation(format!("punctured density needs a punctured-disc point, got {}", z.model)));
    }
    Ok(punctured_density_raw(z.value))
}

fn to_upper_raw<T: Real>(z: Complex<T>, from: Model) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    match from {
        Model::Disc => i_unit::<T>() * (one + z) / (one - z),
        Model::RightHalfPlane => i_unit::<T>() * z,
        Model::UpperHalfPlane | Model::PuncturedDisc => z,
    }
}

fn from_upper_raw<T: Real>(z: Complex<T>, to: Model) -> Complex<T> {
    match to {
        Model::Disc => (z - i_unit::<T>()) / (z + i_unit::<T>()),
        Model::RightHalfPlane => -i_unit::<T>() * z,
        Model::UpperHalfPlane | Model::PuncturedDisc => z,
    }
}

/// Moves a point between the simply connected models by fixed isometries
/// (Cayley map between ℍ and 𝔻, multiplication by `i` from 𝕂 to ℍ).
pub fn convert<T: Real>(p: &ModelPoint<T>, target: Model) -> Result<ModelPoint<T>> {
    if p.model == Model::PuncturedDisc || target == Model::PuncturedDisc {
        return Err(HypError::Unsupported("the punctured disc has no global isometry to the other models".into()));
    }
    if p.model == target {
        return Ok(*p);
    }
    let upper = to_upper_raw(p.value, p.model);
    ModelPoint::from_image(from_upper_raw(upper, target), target)
}

/// A geodesic segment of ℍ, parametrized by height (vertical lines) or by
/// angle about the centre (semicircles).
enum UpperGeodesic<T> {
    Vertical { x: T, y0: T, y1: T },
    Arc { center: T, radius: T, t0: T, t1: T },
}

impl<T: Real> UpperGeodesic<T> {
    fn through(u: Complex<T>, v: Complex<T>) -> Self {
        let dx = v.re - u.re;
        let scale = u.norm() + v.norm();
        if dx.abs() <= lit::<T>(1e-12) * scale {
            return UpperGeodesic::Vertical { x: u.re, y0: u.im, y1: v.im };
        }
        let center = (v.norm_sqr() - u.norm_sqr()) / (lit::<T>(2.0) * dx);
        let radius = (u - Complex::new(center, T::zero())).norm();
        let t0 = (u.im).atan2(u.re - center);
        let t1 = (v.im).atan2(v.re - center);
        UpperGeodesic::Arc { center, radius, t0, t1 }
    }

    fn bounds(&self) -> (T, T) {
        match *self {
            UpperGeodesic::Vertical { y0, y1, .. } => (y0, y1),
            UpperGeodesic::Arc { t0, t1, .. } => (t0, t1),
        }
    }

    /// Point and velocity at parameter `t`.
    fn at(&self, t: T) -> (Complex<T>, Complex<T>) {
        match *self {
            UpperGeodesic::Vertical { x, .. } => (Complex::new(x, t), Complex::new(T::zero(), T::one())),
            UpperGeodesic::Arc { center, radius, .. } => {
                let e = Complex::new(t.cos(), t.sin());
                (Complex::new(center, T::zero()) + e * radius, Complex::new(-t.sin(), t.cos()) * radius)
            }
        }
    }
}

/// Hyperbolic length of a path obtained by numerically integrating the
/// model's density. Independent of the closed forms used by [`dist`].
pub fn dist_oracle<T: Real>(u: &ModelPoint<T>, v: &ModelPoint<T>) -> Result<T> {
    let model = require_same_model(u, v)?;
    if model == Model::PuncturedDisc {
        return Err(HypError::Unsupported("dist_oracle covers the simply connected models only".into()));
    }
    let (a, b) = (u.value, v.value);
    if a == b {
        return Ok(T::zero());
    }
    let tol = lit::<T>(ORACLE_TOL);
    let two = lit::<T>(2.0);

    // radial disc segments and axial half-plane segments are geodesics already
    let straight = match model {
        Model::Disc => (a.im * b.re - a.re * b.im).abs() <= lit::<T>(1e-14),
        Model::UpperHalfPlane => (a.re - b.re).abs() <= lit::<T>(1e-12) * (a.norm() + b.norm()),
        Model::RightHalfPlane => (a.im - b.im).abs() <= lit::<T>(1e-12) * (a.norm() + b.norm()),
        Model::PuncturedDisc => unreachable!(),
    };
    if straight {
        let dir = b - a;
        let speed = dir.norm();
        let integrand = |t: T| {
            let p = a + dir * t;
            let rho = match model {
                Model::Disc => two / one_minus_norm_sqr(p),
                Model::UpperHalfPlane => T::one() / p.im,
                _ => T::one() / p.re,
            };
            rho * speed
        };
        return quad::simpson_graded(integrand, T::zero(), T::one(), tol, ORACLE_MAX_PANELS).map(|q| q.value);
    }

    // otherwise follow the geodesic in ℍ and push it into the model
    let geo = UpperGeodesic::through(to_upper_raw(a, model), to_upper_raw(b, model));
    let (lo, hi) = geo.bounds();
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let i = i_unit::<T>();
    let integrand = |t: T| {
        let (p, dp) = geo.at(t);
        match model {
            Model::Disc => {
                let w = (p - i) / (p + i);
                let dw = dp * (i * two) / ((p + i) * (p + i));
                two / one_minus_norm_sqr(w) * dw.norm()
            }
            Model::UpperHalfPlane => dp.norm() / p.im,
            _ => {
                let w = -i * p;
                dp.norm() / w.re
            }
        }
    };
    quad::simpson_graded(integrand, lo, hi, tol, ORACLE_MAX_PANELS).map(|q| q.value)
}
