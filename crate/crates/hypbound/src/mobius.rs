//! Fractional-linear transformations preserving a hyperbolic model.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::bounds::{BoundReport, Theorem, Witness};
use crate::error::{HypError, Result};
use crate::models::{self, Model, ModelPoint};
use crate::scalar::{lit, Real};

/// Determinants below this (in modulus) are treated as singular.
pub const DET_EPS: f64 = 1e-12;
/// Band around `trace² = 4` inside which a map counts as parabolic.
pub const TRACE_BAND: f64 = 1e-9;
/// Hyperbolic distance tolerance for "lies on the axis".
pub const AXIS_TOL: f64 = 1e-9;

const PRESERVATION_SAMPLES: usize = 50;

#[inline]
fn cx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
fn one<T: Real>() -> Complex<T> {
    cx(T::one(), T::zero())
}

#[inline]
fn zero<T: Real>() -> Complex<T> {
    cx(T::zero(), T::zero())
}

#[inline]
fn iu<T: Real>() -> Complex<T> {
    cx(T::zero(), T::one())
}

/// Bare 2×2 complex matrix acting on the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Mat2<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub d: Complex<T>,
}

impl<T: Real> Mat2<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(one(), zero(), zero(), one())
    }

    pub fn det(&self) -> Complex<T> {
        self.a * self.d - self.b * self.c
    }

    /// Scales by `1/√det`; fails on singular matrices.
    pub fn normalized(self) -> Result<Self> {
        let det = self.det();
        if !(det.norm() >= lit(DET_EPS)) {
            return Err(HypError::Validation(format!("singular matrix (|det| = {})", det.norm())));
        }
        let k = one::<T>() / det.sqrt();
        Ok(Self::new(self.a * k, self.b * k, self.c * k, self.d * k))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }

    /// Adjugate; the projective inverse.
    pub fn adjugate(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn apply(&self, z: Complex<T>) -> Option<Complex<T>> {
        let den = self.c * z + self.d;
        if den.norm() == T::zero() {
            return None;
        }
        Some((self.a * z + self.b) / den)
    }

    pub fn apply_ext(&self, z: ExtPoint<T>) -> ExtPoint<T> {
        match z {
            ExtPoint::Infinity => {
                if self.c.norm() <= lit::<T>(1e-300) {
                    ExtPoint::Infinity
                } else {
                    ExtPoint::Finite(self.a / self.c)
                }
            }
            ExtPoint::Finite(w) => match self.apply(w) {
                Some(v) if v.re.is_finite() && v.im.is_finite() => ExtPoint::Finite(v),
                _ => ExtPoint::Infinity,
            },
        }
    }

    /// Isometry from `model` onto ℍ (Cayley inverse for 𝔻, `ζ ↦ iζ` for 𝕂).
    pub fn model_to_upper(model: Model) -> Result<Self> {
        match model {
            Model::Disc => Ok(Self::new(iu(), iu(), -one::<T>(), one())),
            Model::RightHalfPlane => Ok(Self::new(iu(), zero(), zero(), one())),
            Model::UpperHalfPlane => Ok(Self::identity()),
            Model::PuncturedDisc => Err(HypError::Unsupported("the punctured disc is not isometric to ℍ".into())),
        }
    }
}

/// A point of the extended plane. Fixed points at ∞ stay tagged and never
/// become `ModelPoint`s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtPoint<T> {
    Finite(Complex<T>),
    Infinity,
}

impl<T: Real> ExtPoint<T> {
    pub fn finite(&self) -> Option<Complex<T>> {
        match *self {
            ExtPoint::Finite(z) => Some(z),
            ExtPoint::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtPoint::Infinity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MobiusKind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// Conjugacy class data of a model-preserving Möbius map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MobiusClass<T> {
    pub kind: MobiusKind,
    /// Boundary fixed points for parabolic/hyperbolic maps, the interior one
    /// for elliptic maps, empty for the identity.
    pub fixed_points: Vec<ExtPoint<T>>,
    /// Endpoints of the invariant geodesic (hyperbolic maps only).
    pub axis: Option<[ExtPoint<T>; 2]>,
    pub translation_length: T,
}

/// `w ↦ (aw+b)/(cw+d)` with `ad − bc = 1`, declared to preserve `model`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct Mobius<T> {
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    d: Complex<T>,
    model: Model,
}

impl<T: Real> Mobius<T> {
    /// Builds and normalizes the map, then checks on sampled points that it
    /// maps `model` into itself.
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>, model: Model) -> Result<Self> {
        let m = Mat2::new(a, b, c, d).normalized()?;
        let out = Self::from_mat(m, model);
        out.check_preserves_model()?;
        Ok(out)
    }

    pub fn identity(model: Model) -> Self {
        Self::from_mat(Mat2::identity(), model)
    }

    pub(crate) fn from_mat(m: Mat2<T>, model: Model) -> Self {
        Self { a: m.a, b: m.b, c: m.c, d: m.d, model }
    }

    pub(crate) fn mat(&self) -> Mat2<T> {
        Mat2::new(self.a, self.b, self.c, self.d)
    }

    /// Re-runs the construction checks, e.g. after deserialization.
    pub fn validated(self) -> Result<Self> {
        Self::new(self.a, self.b, self.c, self.d, self.model)
    }

    pub fn entries(&self) -> [Complex<T>; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn trace(&self) -> Complex<T> {
        self.a + self.d
    }

    fn check_preserves_model(&self) -> Result<()> {
        for p in sample_model_points::<T>(self.model, PRESERVATION_SAMPLES) {
            let img = self
                .apply_raw(p)
                .map_err(|_| HypError::Validation(format!("map has a pole inside the {} model", self.model)))?;
            ModelPoint::from_image(img, self.model)
                .map_err(|_| HypError::Validation(format!("map does not preserve the {} model", self.model)))?;
        }
        Ok(())
    }

    /// Raw action on a complex number.
    pub fn apply_raw(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.mat().apply(z).ok_or_else(|| HypError::Domain(format!("pole of the Möbius map at {z}")))
    }

    pub fn apply(&self, z: &ModelPoint<T>) -> Result<ModelPoint<T>> {
        if z.model() != self.model {
            return Err(HypError::Domain(format!("map preserves {} but point is in {}", self.model, z.model())));
        }
        ModelPoint::from_image(self.apply_raw(z.value())?, self.model)
    }

    pub fn apply_ext(&self, z: ExtPoint<T>) -> ExtPoint<T> {
        self.mat().apply_ext(z)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.model != other.model {
            return Err(HypError::Domain("composing maps of different models".into()));
        }
        Ok(Self::from_mat(self.mat().compose(&other.mat()).normalized()?, self.model))
    }

    pub fn inverse(&self) -> Self {
        Self::from_mat(self.mat().adjugate(), self.model)
    }

    pub fn is_identity(&self) -> bool {
        let tol = lit::<T>(1e-12);
        self.b.norm() <= tol && self.c.norm() <= tol && (self.a - self.d).norm() <= tol
    }

    fn on_boundary(&self, z: ExtPoint<T>) -> bool {
        let tol = lit::<T>(1e-7);
        match z {
            ExtPoint::Infinity => self.model != Model::Disc,
            ExtPoint::Finite(w) => match self.model {
                Model::Disc | Model::PuncturedDisc => (w.norm() - T::one()).abs() <= tol,
                Model::UpperHalfPlane => w.im.abs() <= tol * (T::one() + w.norm()),
                Model::RightHalfPlane => w.re.abs() <= tol * (T::one() + w.norm()),
            },
        }
    }

    fn fixed_points_raw(&self) -> Vec<ExtPoint<T>> {
        let tiny = lit::<T>(1e-14);
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        if c.norm() <= tiny {
            let mut pts = vec![ExtPoint::Infinity];
            if (d - a).norm() > tiny {
                pts.push(ExtPoint::Finite(b / (d - a)));
            }
            return pts;
        }
        // c z² + (d − a) z − b = 0
        let disc = (a - d) * (a - d) + b * c * lit::<T>(4.0);
        let root = disc.sqrt();
        let two_c = c * lit::<T>(2.0);
        if root.norm() <= lit::<T>(1e-9) {
            return vec![ExtPoint::Finite((a - d) / two_c)];
        }
        vec![ExtPoint::Finite((a - d + root) / two_c), ExtPoint::Finite((a - d - root) / two_c)]
    }

    /// Trace classification (`tr² > 4` hyperbolic, `= 4` parabolic, `< 4`
    /// elliptic) with fixed points, axis and translation length.
    pub fn classify(&self) -> Result<MobiusClass<T>> {
        let m = self.mat().normalized()?;
        let norm = Self::from_mat(m, self.model);
        if norm.is_identity() {
            return Ok(MobiusClass {
                kind: MobiusKind::Identity,
                fixed_points: Vec::new(),
                axis: None,
                translation_length: T::zero(),
            });
        }
        let tr2 = norm.trace() * norm.trace();
        let four = lit::<T>(4.0);
        let pts = norm.fixed_points_raw();
        if (tr2.re - four).abs() <= lit(TRACE_BAND) {
            let fixed: Vec<_> = pts.into_iter().filter(|p| norm.on_boundary(*p)).take(1).collect();
            return Ok(MobiusClass {
                kind: MobiusKind::Parabolic,
                fixed_points: fixed,
                axis: None,
                translation_length: T::zero(),
            });
        }
        if tr2.re > four {
            let len = lit::<T>(2.0) * (tr2.re.sqrt() / lit::<T>(2.0)).acosh();
            let axis = if pts.len() == 2 { Some([pts[0], pts[1]]) } else { None };
            return Ok(MobiusClass { kind: MobiusKind::Hyperbolic, fixed_points: pts, axis, translation_length: len });
        }
        let interior: Vec<_> =
            pts.into_iter().filter(|p| p.finite().is_some_and(|z| self.model.contains(z))).take(1).collect();
        Ok(MobiusClass {
            kind: MobiusKind::Elliptic,
            fixed_points: interior,
            axis: None,
            translation_length: T::zero(),
        })
    }

    /// Hyperbolic distance from `w` to the axis of this (hyperbolic) map.
    pub fn axis_distance(&self, w: &ModelPoint<T>) -> Result<T> {
        let class = self.classify()?;
        let [e1, e2] = class.axis.ok_or_else(|| HypError::Domain("map has no axis (not hyperbolic)".into()))?;
        if w.model() != self.model {
            return Err(HypError::Domain("point and map live in different models".into()));
        }
        let to_upper = Mat2::model_to_upper(self.model)?;
        let (mut x1, mut x2) = (to_upper.apply_ext(e1), to_upper.apply_ext(e2));
        if x1.is_infinite() {
            std::mem::swap(&mut x1, &mut x2);
        }
        // send the axis to the imaginary axis of ℍ
        let straighten = match (x1, x2) {
            (ExtPoint::Finite(p), ExtPoint::Infinity) => Mat2::new(one(), -p, zero(), one()),
            (ExtPoint::Finite(p), ExtPoint::Finite(q)) => {
                let (p, q) = if p.re >= q.re { (p, q) } else { (q, p) };
                Mat2::new(one(), -p, one(), -q)
            }
            _ => return Err(HypError::Numerical("degenerate axis".into())),
        };
        let z = straighten
            .compose(&to_upper)
            .apply(w.value())
            .ok_or_else(|| HypError::Numerical("axis chart hit a pole".into()))?;
        Ok((z.re.abs() / z.im).asinh())
    }
}

impl<T: Real> fmt::Display for Mobius<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[({})w + ({})] / [({})w + ({})] on {}", self.a, self.b, self.c, self.d, self.model)
    }
}

/// Deterministic spread of points over a model, used for sampled checks.
pub(crate) fn sample_model_points<T: Real>(model: Model, n: usize) -> Vec<Complex<T>> {
    let golden = lit::<T>(2.399963229728653);
    let to_upper = Mat2::<T>::model_to_upper(Model::Disc).expect("disc chart");
    (0..n)
        .map(|k| {
            let kf = T::from_usize(k).unwrap();
            let nf = T::from_usize(n).unwrap();
            // hyperbolic radius in (0, 4]
            let r = (lit::<T>(4.0) * (kf + T::one()) / nf / lit::<T>(2.0)).tanh();
            let w = Complex::from_polar(r, golden * kf);
            match model {
                Model::Disc => w,
                Model::PuncturedDisc => {
                    if w.norm() < lit::<T>(1e-3) {
                        cx(lit(0.5), T::zero())
                    } else {
                        w
                    }
                }
                Model::UpperHalfPlane => to_upper.apply(w).unwrap(),
                Model::RightHalfPlane => -iu::<T>() * to_upper.apply(w).unwrap(),
            }
        })
        .collect()
}

/// Disc automorphism `w ↦ e^{iθ}(w − a)/(1 − ā w)`, sending `a` to 0.
pub fn build_disc_automorphism<T: Real>(a: &ModelPoint<T>, theta: T) -> Result<Mobius<T>> {
    if a.model() != Model::Disc {
        return Err(HypError::Validation("automorphism centre must be a disc point".into()));
    }
    let a = a.value();
    let half = lit::<T>(0.5);
    let e = Complex::from_polar(T::one(), theta * half);
    let ei = Complex::from_polar(T::one(), -theta * half);
    Mobius::new(e, -a * e, -a.conj() * ei, ei, Model::Disc)
}

/// The hyperbolic automorphism whose axis is the geodesic through `p` and
/// `q`, with `h(q) = p`. Returns the identity when `p = q`.
///
/// Built by moving `q` to `i` and `p` up the imaginary axis of ℍ, applying
/// the dilation by `e^{ρ(p,q)}` there, and conjugating back.
pub fn hyperbolic_pull<T: Real>(p: &ModelPoint<T>, q: &ModelPoint<T>) -> Result<Mobius<T>> {
    let model = models::require_same_model(p, q)?;
    if p.value() == q.value() {
        return Ok(Mobius::identity(model));
    }
    let d = models::dist(p, q)?;
    if d == T::zero() {
        return Ok(Mobius::identity(model));
    }
    let chart = Mat2::model_to_upper(model)?;
    let big_p = chart.apply(p.value()).ok_or_else(|| HypError::Numerical("chart pole".into()))?;
    let big_q = chart.apply(q.value()).ok_or_else(|| HypError::Numerical("chart pole".into()))?;
    // q ↦ i
    let shift = Mat2::new(one(), cx(-big_q.re, T::zero()), zero(), cx(big_q.im, T::zero()));
    let p1 = shift.apply(big_p).ok_or_else(|| HypError::Numerical("shift pole".into()))?;
    // rotate about i so that p lands on the imaginary axis above i
    let cayley = Mat2::new(one(), -iu::<T>(), one(), iu());
    let w = cayley.apply(p1).ok_or_else(|| HypError::Numerical("Cayley pole".into()))?;
    let phi = w.im.atan2(w.re);
    let half = lit::<T>(0.5);
    let rot = Mat2::new(
        Complex::from_polar(T::one(), -phi * half),
        zero(),
        zero(),
        Complex::from_polar(T::one(), phi * half),
    );
    let straighten = cayley.adjugate().compose(&rot).compose(&cayley).compose(&shift).compose(&chart);
    let dilate = Mat2::new(cx((d * half).exp(), T::zero()), zero(), zero(), cx((-d * half).exp(), T::zero()));
    let h = straighten.adjugate().compose(&dilate).compose(&straighten);
    Mobius::new(h.a, h.b, h.c, h.d, model)
}

/// Displacement bound along an axis: for `c` on the axis of the hyperbolic
/// map `h`, `ρ(w, h w) ≤ e^{ρ(w,c)} ρ(c, h c)`. Also evaluates the exact
/// identity `sinh ½ρ(w,hw) = cosh ρ(w,axis) · sinh ½ρ(c,hc)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real + Serialize"))]
pub struct AxisReport<T> {
    pub bound: BoundReport<T>,
    pub identity_lhs: T,
    pub identity_rhs: T,
    pub identity_rel_err: T,
    pub axis_distance: T,
}

pub fn axis_bound<T: Real>(w: &ModelPoint<T>, c: &ModelPoint<T>, h: &Mobius<T>) -> Result<AxisReport<T>> {
    models::require_same_model(w, c)?;
    if h.classify()?.kind != MobiusKind::Hyperbolic {
        return Err(HypError::Domain("displacement bound needs a hyperbolic automorphism".into()));
    }
    let c_off = h.axis_distance(c)?;
    if c_off > lit(AXIS_TOL) {
        return Err(HypError::Precondition(format!("c is {c_off} away from the axis (tolerance {AXIS_TOL})")));
    }
    let hw = h.apply(w)?;
    let hc = h.apply(c)?;
    let lhs = models::dist(w, &hw)?;
    let step = models::dist(c, &hc)?;
    let factor = models::dist(w, c)?.exp();
    let rhs = factor * step;
    let half = lit::<T>(0.5);
    let axis_distance = h.axis_distance(w)?;
    let identity_lhs = (half * lhs).sinh();
    let identity_rhs = axis_distance.cosh() * (half * step).sinh();
    let identity_rel_err = (identity_lhs - identity_rhs).abs() / identity_rhs.abs().max(T::min_positive_value());
    let witnesses = vec![Witness::point("w", w), Witness::point("c", c), Witness::mobius("h", h)];
    Ok(AxisReport {
        bound: BoundReport::new(Theorem::Axis, lhs, rhs, factor, witnesses),
        identity_lhs,
        identity_rhs,
        identity_rel_err,
        axis_distance,
    })
}
