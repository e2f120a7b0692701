//! The universal covering `π(ζ) = e^{2πiζ}` of the punctured disc by ℍ.
//!
//! Deck transformations are the integer translations `ζ ↦ ζ + k`, so the
//! punctured-disc distance is the minimum over a deck orbit of ℍ distances,
//! and a self-map of degree `m` lifts to `f̃` with `f̃(ζ+1) = f̃(ζ) + m`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{HypError, Result};
use crate::holomaps::HoloMap;
use crate::models::{self, Model, ModelPoint};
use crate::quad;
use crate::scalar::{lit, to_f64, Real};

const DECK_WINDOW_START: i64 = 8;
const DECK_WINDOW_MAX: i64 = 1 << 40;

const DEGREE_START_PANELS: usize = 64;
const DEGREE_TOL: f64 = 1e-8;
const DEGREE_MAX_PANELS: usize = 1 << 18;
const DEGREE_RESIDUAL_MAX: f64 = 1e-6;
const CONTOUR_ZERO_TOL: f64 = 1e-12;

const TRACK_MAX_DEPTH: u32 = 40;
const TRACK_AGREEMENT: f64 = 1e-7;

fn require_model<T: Real>(p: &ModelPoint<T>, model: Model, what: &str) -> Result<()> {
    if p.model() != model {
        return Err(HypError::Validation(format!("{what} must be a {model} point, got {}", p.model())));
    }
    Ok(())
}

pub(crate) fn cover_raw<T: Real>(zeta: Complex<T>) -> Complex<T> {
    (Complex::new(T::zero(), T::TAU()) * zeta).exp()
}

/// `π(ζ) = e^{2πiζ}`.
pub fn cover_pi<T: Real>(zeta: &ModelPoint<T>) -> Result<ModelPoint<T>> {
    require_model(zeta, Model::UpperHalfPlane, "covering argument")?;
    ModelPoint::from_image(cover_raw(zeta.value()), Model::PuncturedDisc)
}

pub(crate) fn principal_lift_raw<T: Real>(z: Complex<T>) -> Complex<T> {
    let tau = T::TAU();
    Complex::new(z.im.atan2(z.re) / tau, -z.norm().ln() / tau)
}

/// The lift `Arg z/(2π) − i·log|z|/(2π)` with `Arg ∈ (−π, π]`.
pub fn principal_lift<T: Real>(z: &ModelPoint<T>) -> Result<ModelPoint<T>> {
    require_model(z, Model::PuncturedDisc, "lifted point")?;
    ModelPoint::from_image(principal_lift_raw(z.value()), Model::UpperHalfPlane)
}

/// `min_k ρ_ℍ(moving + k, fixed)` and the minimizing `k`.
///
/// The window `[−K, K]` starts at `K = 8` and doubles while the minimum sits
/// on its edge; distance to a fixed point grows without bound in `|k|`, so an
/// interior minimum is global.
pub fn deck_minimum<T: Real>(moving: Complex<T>, fixed: Complex<T>) -> Result<(T, i64)> {
    let mut window = DECK_WINDOW_START;
    // centre on the nearest translate to keep the window small
    let centre = (fixed.re - moving.re).round().to_i64().unwrap_or(0);
    loop {
        let mut best = (T::infinity(), centre);
        for k in (centre - window)..=(centre + window) {
            let shifted = moving + Complex::new(T::from_i64(k).unwrap(), T::zero());
            let d = models::upper_dist_raw(shifted, fixed);
            if d < best.0 {
                best = (d, k);
            }
        }
        if (best.1 - centre).abs() < window {
            return Ok(best);
        }
        window *= 2;
        if window > DECK_WINDOW_MAX {
            return Err(HypError::Numerical("deck minimization window overflow".into()));
        }
    }
}

/// Distance in the punctured disc: the infimum of `ρ_ℍ(ζ, ã)` over lifts `ζ` of `z`.
pub fn punctured_dist<T: Real>(z: &ModelPoint<T>, a: &ModelPoint<T>) -> Result<T> {
    require_model(z, Model::PuncturedDisc, "first point")?;
    require_model(a, Model::PuncturedDisc, "second point")?;
    if z.value() == a.value() {
        return Ok(T::zero());
    }
    let (zt, at) = (principal_lift_raw(z.value()), principal_lift_raw(a.value()));
    deck_minimum(zt, at).map(|(d, _)| d)
}

/// Degree from the argument principle, with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreeResult {
    pub value: u32,
    /// Distance of the raw integral from the nearest integer.
    pub residual: f64,
    pub panels: usize,
}

/// `(1/2πi) ∮ f′/f dz` over `|z| = 1/2`, by the trapezoid rule on the
/// periodic integrand.
pub fn degree_contour<T: Real>(f: &HoloMap<T>) -> Result<DegreeResult> {
    if f.model() != Model::PuncturedDisc {
        return Err(HypError::Domain(format!("degree needs a punctured-disc map, got {}", f.model())));
    }
    let half = lit::<T>(0.5);
    // with γ(t) = ½e^{2πit}: (1/2πi) f′/f(γ) γ′ dt = (f′/f)(γ) γ dt
    let integrand = |t: T| -> Result<Complex<T>> {
        let z = Complex::from_polar(half, T::TAU() * t);
        let fz = f.eval_raw(z)?;
        if fz.norm() < lit(CONTOUR_ZERO_TOL) {
            return Err(HypError::Domain(format!("f vanishes on the contour near {z}")));
        }
        Ok(f.log_derivative(z)? * z)
    };
    let q = quad::periodic_trapezoid(integrand, DEGREE_START_PANELS, lit(DEGREE_TOL), DEGREE_MAX_PANELS)?;
    let raw = Complex::new(to_f64(q.value.re), to_f64(q.value.im));
    let nearest = raw.re.round();
    let residual = (raw - Complex::new(nearest, 0.0)).norm();
    if residual >= DEGREE_RESIDUAL_MAX {
        return Err(HypError::Numerical(format!("contour integral {raw} is not near an integer")));
    }
    if nearest < 0.0 {
        return Err(HypError::Numerical(format!("negative winding {nearest}")));
    }
    Ok(DegreeResult { value: nearest as u32, residual, panels: q.panels })
}

/// A lift `f̃: ℍ → ℍ` of a punctured-disc self-map, pinned at an anchor.
///
/// Evaluation re-tracks the branch of `log f(π(·))` along the segment from
/// the anchor, so the value is immutable and safe to share.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedMap<T> {
    base_map: HoloMap<T>,
    anchor: ModelPoint<T>,
    anchor_value: Complex<T>,
    deck_offset: i64,
    degree: u32,
}

impl<T: Real> LiftedMap<T> {
    /// Lift through the principal branch at the anchor, no deck offset.
    pub fn new(base_map: HoloMap<T>, anchor: ModelPoint<T>) -> Result<Self> {
        require_model(&anchor, Model::UpperHalfPlane, "lift anchor")?;
        if base_map.model() != Model::PuncturedDisc {
            return Err(HypError::Domain("only punctured-disc maps lift to ℍ here".into()));
        }
        let degree =
            base_map.declared_degree().ok_or_else(|| HypError::Precondition("map has no declared degree".into()))?;
        let w = base_map.eval_raw(cover_raw(anchor.value()))?;
        if !(w.norm() > T::zero() && w.norm() < T::one()) {
            return Err(HypError::Integrity(format!("f(π(anchor)) = {w} left the punctured disc")));
        }
        Ok(Self { anchor_value: principal_lift_raw(w), base_map, anchor, deck_offset: 0, degree })
    }

    /// Same lift followed by `ζ ↦ ζ + k` (another lift of the same map).
    pub fn with_deck_offset(mut self, k: i64) -> Self {
        let shift = T::from_i64(k - self.deck_offset).unwrap();
        self.anchor_value += Complex::new(shift, T::zero());
        self.deck_offset = k;
        self
    }

    pub fn base_map(&self) -> &HoloMap<T> {
        &self.base_map
    }

    pub fn anchor(&self) -> &ModelPoint<T> {
        &self.anchor
    }

    /// `f̃(ã)` including the deck offset.
    pub fn anchor_value(&self) -> Complex<T> {
        self.anchor_value
    }

    pub fn deck_offset(&self) -> i64 {
        self.deck_offset
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    fn g(&self, zeta: Complex<T>) -> Result<Complex<T>> {
        self.base_map.eval_raw(cover_raw(zeta))
    }

    /// Argument increment of `g` from `p` to `q`, subdividing until the
    /// increment is below π/2 and agrees with the sum over the two halves.
    fn arg_increment(&self, p: Complex<T>, gp: Complex<T>, q: Complex<T>, gq: Complex<T>, depth: u32) -> Result<T> {
        let whole = (gq / gp).arg();
        let mid = (p + q) * lit::<T>(0.5);
        let gm = self.g(mid)?;
        let left = (gm / gp).arg();
        let right = (gq / gm).arg();
        let quarter = T::FRAC_PI_2();
        if whole.abs() < quarter
            && left.abs() < quarter
            && right.abs() < quarter
            && (whole - left - right).abs() < lit(TRACK_AGREEMENT)
        {
            return Ok(whole);
        }
        if depth >= TRACK_MAX_DEPTH {
            return Err(HypError::Numerical("branch tracking failed to resolve the argument".into()));
        }
        Ok(self.arg_increment(p, gp, mid, gm, depth + 1)? + self.arg_increment(mid, gm, q, gq, depth + 1)?)
    }

    /// `f̃(ζ) = (1/2πi) log f(π(ζ))`, branch fixed by continuity from the anchor.
    pub fn eval(&self, zeta: &ModelPoint<T>) -> Result<ModelPoint<T>> {
        require_model(zeta, Model::UpperHalfPlane, "lift argument")?;
        let start = self.anchor.value();
        let end = zeta.value();
        let tau = T::TAU();
        let mut arg = self.anchor_value.re * tau;
        if end != start {
            // each step moves arg by at most ~2π·(speed)·|Δζ|; keep that small
            let span = (end - start).norm();
            let steps =
                (span * lit::<T>(8.0) * T::from_u32(self.degree + 1).unwrap()).ceil().to_usize().unwrap_or(1).max(4);
            let dz = (end - start) / T::from_usize(steps).unwrap();
            let mut p = start;
            let mut gp = self.g(p)?;
            for k in 1..=steps {
                let q = if k == steps { end } else { start + dz * T::from_usize(k).unwrap() };
                let gq = self.g(q)?;
                arg += self.arg_increment(p, gp, q, gq, 0)?;
                p = q;
                gp = gq;
            }
        }
        let w = self.g(end)?;
        let value = Complex::new(arg / tau, -w.norm().ln() / tau);
        ModelPoint::from_image(value, Model::UpperHalfPlane)
    }
}

/// Free-function form of [`LiftedMap::eval`].
pub fn lift_map_eval<T: Real>(lift: &LiftedMap<T>, zeta: &ModelPoint<T>) -> Result<ModelPoint<T>> {
    lift.eval(zeta)
}

/// Lift of a self-covering `z ↦ e^{iθ} z^m`: `ζ ↦ mζ + θ/(2π)`.
fn covering_lift<T: Real>(h: &HoloMap<T>) -> Result<(u32, T)> {
    match h {
        HoloMap::Identity { model: Model::PuncturedDisc } => Ok((1, T::zero())),
        HoloMap::PuncturedPower { rotation, degree } => Ok((*degree, *rotation / T::TAU())),
        _ => Err(HypError::Precondition("reference map must be a self-covering e^{iθ}z^m".into())),
    }
}

/// Lifts `f` at `ã` and applies the deck translation that brings `f̃(ã)`
/// closest to `h̃(ã)`. Returns the lift and `ρ(f̃(ã), h̃(ã))`, which then
/// equals `ρ*(f(a), h(a))`.
pub fn normalized_lift<T: Real>(f: &HoloMap<T>, h: &HoloMap<T>, anchor: &ModelPoint<T>) -> Result<(LiftedMap<T>, T)> {
    let (m_h, shift) = covering_lift(h)?;
    let m_f = f.declared_degree().ok_or_else(|| HypError::Precondition("map has no declared degree".into()))?;
    if m_f == 0 || m_h == 0 {
        return Err(HypError::Precondition("degree must be positive".into()));
    }
    if m_f != m_h {
        return Err(HypError::Precondition(format!("degree mismatch: {m_f} vs {m_h}")));
    }
    let lift = LiftedMap::new(f.clone(), *anchor)?;
    let target = anchor.value() * T::from_u32(m_h).unwrap() + Complex::new(shift, T::zero());
    let (d, k) = deck_minimum(lift.anchor_value(), target)?;
    Ok((lift.with_deck_offset(k), d))
}
