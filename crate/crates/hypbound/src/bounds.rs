//! Bound constants and margin reports for the displacement inequalities.
//!
//! Every check returns a [`BoundReport`] with `margin = rhs − lhs`; a report
//! is *violated* when the margin is below `−tolerance` (default
//! [`VIOLATION_TOL`]).

use std::fmt;
use std::str::FromStr;

use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::covering;
use crate::error::{HypError, Result};
use crate::holomaps::HoloMap;
use crate::mobius::Mobius;
use crate::models::{self, Model, ModelPoint};
use crate::scalar::{lit, to_f64, Real};

pub const VIOLATION_TOL: f64 = 1e-9;
/// `a` and `b` closer than this count as equal.
pub const MIN_SEPARATION: f64 = 1e-9;
/// Allowed `ρ(f(b), b)` for a map declared to fix `b`.
pub const FIXED_POINT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// Two-point inequality with `K = e^{ρ(z,a)+ρ(a,b)+ρ(b,z)}/ρ(a,b)`.
    TwoPoint,
    /// Same with `ρ(a,b)` replaced by `2 sinh ½ρ(a,b)`.
    TwoPointSharp,
    /// Two-point inequality measured against a disc automorphism.
    TwoPointAutomorphism,
    /// One-point inequality for maps fixing `b`.
    FixedPoint,
    /// One-point inequality on the punctured disc.
    Punctured,
    /// Displacement growth away from the axis of a hyperbolic automorphism.
    Axis,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::TwoPoint => "two_point",
            Theorem::TwoPointSharp => "two_point_sharp",
            Theorem::TwoPointAutomorphism => "two_point_automorphism",
            Theorem::FixedPoint => "fixed_point",
            Theorem::Punctured => "punctured",
            Theorem::Axis => "axis",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = HypError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "two_point" => Theorem::TwoPoint,
            "two_point_sharp" => Theorem::TwoPointSharp,
            "two_point_automorphism" => Theorem::TwoPointAutomorphism,
            "fixed_point" => Theorem::FixedPoint,
            "punctured" => Theorem::Punctured,
            "axis" => Theorem::Axis,
            other => return Err(HypError::Usage(format!("unknown theorem `{other}`"))),
        })
    }
}

/// Fixed-width decimal rendering with 17 significant digits.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// A map or point that took part in a check, echoed for reproduction.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    Point { role: String, model: Model, re: f64, im: f64 },
    Map { role: String, map: serde_json::Value },
}

impl Witness {
    pub fn point<T: Real>(role: &str, p: &ModelPoint<T>) -> Self {
        Witness::Point { role: role.into(), model: p.model(), re: to_f64(p.re()), im: to_f64(p.im()) }
    }

    pub fn map<T: Real>(role: &str, f: &HoloMap<T>) -> Self {
        Witness::Map { role: role.into(), map: f.to_json() }
    }

    pub fn mobius<T: Real>(role: &str, m: &Mobius<T>) -> Self {
        Witness::map(role, &HoloMap::mobius(*m))
    }
}

/// One evaluated inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<T> {
    pub theorem: Theorem,
    pub lhs: T,
    pub rhs: T,
    /// `K`, `M`, `L³` or the axis factor, depending on the theorem.
    pub constant: T,
    pub margin: T,
    pub witnesses: Vec<Witness>,
    pub violated: bool,
}

impl<T: Real> BoundReport<T> {
    pub fn new(theorem: Theorem, lhs: T, rhs: T, constant: T, witnesses: Vec<Witness>) -> Self {
        let margin = rhs - lhs;
        Self { theorem, lhs, rhs, constant, margin, witnesses, violated: margin < -lit::<T>(VIOLATION_TOL) }
    }

    /// Re-evaluates `violated` against a different tolerance.
    pub fn with_tolerance(mut self, tolerance: T) -> Self {
        self.violated = self.margin < -tolerance;
        self
    }
}

impl<T: Real> Serialize for BoundReport<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BoundReport", 7)?;
        st.serialize_field("theorem", &self.theorem)?;
        st.serialize_field("lhs", &sig17(to_f64(self.lhs)))?;
        st.serialize_field("rhs", &sig17(to_f64(self.rhs)))?;
        st.serialize_field("constant", &sig17(to_f64(self.constant)))?;
        st.serialize_field("margin", &sig17(to_f64(self.margin)))?;
        st.serialize_field("violated", &self.violated)?;
        st.serialize_field("witnesses", &self.witnesses)?;
        st.end()
    }
}

fn require_disc<T: Real>(points: &[(&str, &ModelPoint<T>)]) -> Result<()> {
    for (name, p) in points {
        if p.model() != Model::Disc {
            return Err(HypError::Domain(format!("{name} must be a disc point, got {}", p.model())));
        }
    }
    Ok(())
}

fn separation<T: Real>(a: &ModelPoint<T>, b: &ModelPoint<T>) -> Result<T> {
    let d = models::dist(a, b)?;
    if d < lit(MIN_SEPARATION) {
        return Err(HypError::Precondition(format!("a and b coincide (ρ(a,b) = {d})")));
    }
    Ok(d)
}

/// `exp(ρ(z,a)+ρ(a,b)+ρ(b,z))` divided by `ρ(a,b)` (plain) or by
/// `2 sinh ½ρ(a,b)` (sharp).
pub fn constant_two_point<T: Real>(z: &ModelPoint<T>, a: &ModelPoint<T>, b: &ModelPoint<T>, sharp: bool) -> Result<T> {
    require_disc(&[("z", z), ("a", a), ("b", b)])?;
    let ab = separation(a, b)?;
    let perimeter = models::dist(z, a)? + ab + models::dist(b, z)?;
    let den = if sharp { lit::<T>(2.0) * (ab * lit::<T>(0.5)).sinh() } else { ab };
    Ok(perimeter.exp() / den)
}

/// `k = e^{2ρ(a,b)}/ρ(a,b)`, so that the two-point constant is at most
/// `k·e^{2ρ(z,a)}`.
pub fn constant_k<T: Real>(a: &ModelPoint<T>, b: &ModelPoint<T>) -> Result<T> {
    require_disc(&[("a", a), ("b", b)])?;
    let ab = separation(a, b)?;
    Ok((lit::<T>(2.0) * ab).exp() / ab)
}

/// `M = exp(ρ(a,z)+ρ(z,b)) / (4 sinh ½ρ(a,b))`.
pub fn constant_fixed_point<T: Real>(z: &ModelPoint<T>, a: &ModelPoint<T>, b: &ModelPoint<T>) -> Result<T> {
    require_disc(&[("z", z), ("a", a), ("b", b)])?;
    let ab = separation(a, b)?;
    let num = (models::dist(a, z)? + models::dist(z, b)?).exp();
    Ok(num / (lit::<T>(4.0) * (ab * lit::<T>(0.5)).sinh()))
}

/// `L = 8 λ*(a) e^{ρ*(z,a)}`.
pub fn constant_punctured<T: Real>(z: &ModelPoint<T>, a: &ModelPoint<T>) -> Result<T> {
    let lam = models::density_punctured(a)?;
    Ok(lit::<T>(8.0) * lam * covering::punctured_dist(z, a)?.exp())
}

/// Two-point inequality `ρ(f(z), h(z)) ≤ K (ρ(f(a),h(a)) + ρ(f(b),h(b)))`,
/// `h` defaulting to the identity.
pub fn check_two_point<T: Real>(
    f: &HoloMap<T>,
    a: &ModelPoint<T>,
    b: &ModelPoint<T>,
    z: &ModelPoint<T>,
    h: Option<&Mobius<T>>,
) -> Result<BoundReport<T>> {
    check_two_point_with(f, a, b, z, h, false)
}

/// [`check_two_point`] with a choice of the plain or sharpened constant.
pub fn check_two_point_with<T: Real>(
    f: &HoloMap<T>,
    a: &ModelPoint<T>,
    b: &ModelPoint<T>,
    z: &ModelPoint<T>,
    h: Option<&Mobius<T>>,
    sharp: bool,
) -> Result<BoundReport<T>> {
    if f.model() != Model::Disc {
        return Err(HypError::Domain("two-point check needs a disc self-map".into()));
    }
    if let Some(h) = h {
        if h.model() != Model::Disc {
            return Err(HypError::Domain("reference automorphism must act on the disc".into()));
        }
    }
    let k = constant_two_point(z, a, b, sharp)?;
    let reference = |p: &ModelPoint<T>| match h {
        Some(h) => h.apply(p),
        None => Ok(*p),
    };
    let gap = |p: &ModelPoint<T>| -> Result<T> { models::dist(&f.eval(p)?, &reference(p)?) };
    let lhs = gap(z)?;
    let rhs = k * (gap(a)? + gap(b)?);
    let theorem = match (sharp, h.is_some()) {
        (true, _) => Theorem::TwoPointSharp,
        (false, true) => Theorem::TwoPointAutomorphism,
        (false, false) => Theorem::TwoPoint,
    };
    let mut witnesses =
        vec![Witness::map("f", f), Witness::point("a", a), Witness::point("b", b), Witness::point("z", z)];
    if let Some(h) = h {
        witnesses.push(Witness::mobius("h", h));
    }
    Ok(BoundReport::new(theorem, lhs, rhs, k, witnesses))
}

/// One-point inequality `ρ(f(z), z) ≤ M ρ(f(a), a)` for `f` fixing `b`.
pub fn check_fixed_point<T: Real>(
    f: &HoloMap<T>,
    a: &ModelPoint<T>,
    b: &ModelPoint<T>,
    z: &ModelPoint<T>,
) -> Result<BoundReport<T>> {
    if f.model() != Model::Disc {
        return Err(HypError::Domain("fixed-point check needs a disc self-map".into()));
    }
    let m = constant_fixed_point(z, a, b)?;
    let drift = models::dist(&f.eval(b)?, b)?;
    if drift > lit(FIXED_POINT_TOL) {
        return Err(HypError::Precondition(format!("f moves b by {drift}")));
    }
    let lhs = models::dist(&f.eval(z)?, z)?;
    let rhs = m * models::dist(&f.eval(a)?, a)?;
    let witnesses = vec![Witness::map("f", f), Witness::point("a", a), Witness::point("b", b), Witness::point("z", z)];
    Ok(BoundReport::new(Theorem::FixedPoint, lhs, rhs, m, witnesses))
}

/// Punctured-disc inequality `ρ*(f(z), h(z)) ≤ L³ ρ*(f(a), h(a))` for `h` a
/// self-covering of the same positive degree as `f`.
pub fn check_punctured<T: Real>(
    f: &HoloMap<T>,
    h: &HoloMap<T>,
    a: &ModelPoint<T>,
    z: &ModelPoint<T>,
) -> Result<BoundReport<T>> {
    let m_h = match h {
        HoloMap::PuncturedPower { degree, .. } => *degree,
        HoloMap::Identity { model: Model::PuncturedDisc } => 1,
        _ => return Err(HypError::Precondition("h must be a self-covering e^{iθ}z^m".into())),
    };
    let m_f = f.declared_degree().ok_or_else(|| HypError::Precondition("f has no declared degree".into()))?;
    if m_f == 0 || m_f != m_h {
        return Err(HypError::Precondition(format!("degrees must agree and be positive ({m_f} vs {m_h})")));
    }
    let l = constant_punctured(z, a)?;
    let cube = l * l * l;
    let lhs = covering::punctured_dist(&f.eval(z)?, &h.eval(z)?)?;
    let rhs = cube * covering::punctured_dist(&f.eval(a)?, &h.eval(a)?)?;
    let witnesses = vec![Witness::map("f", f), Witness::map("h", h), Witness::point("a", a), Witness::point("z", z)];
    Ok(BoundReport::new(Theorem::Punctured, lhs, rhs, cube, witnesses))
}
