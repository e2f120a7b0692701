//! Self-map families of the disc, the right half-plane and the punctured disc.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{HypError, Result};
use crate::mobius::{self, Mobius};
use crate::models::{Model, ModelPoint, BOUNDARY_MARGIN};
use crate::scalar::{lit, to_f64, Real};

/// Step of the central difference used when no closed-form derivative exists.
pub const FD_STEP: f64 = 1e-6;
/// Tolerance on `f(0) = 0` for the Schwarz quotient.
pub const ORIGIN_FIX_TOL: f64 = 1e-12;

/// An analytic self-map (plus one deliberately non-analytic contraction).
///
/// `Composition { maps: [f, g, h] }` is `f ∘ g ∘ h`: the last map is applied
/// first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub enum HoloMap<T> {
    Identity {
        model: Model,
    },
    MobiusAut {
        map: Mobius<T>,
    },
    /// `e^{iθ} ∏ (w − zᵢ)/(1 − z̄ᵢ w)` on 𝔻.
    Blaschke {
        rotation: T,
        zeros: Vec<Complex<T>>,
    },
    /// `w ↦ w + t` on 𝕂.
    HalfPlaneTranslate {
        shift: T,
    },
    /// `z ↦ e^{iθ} z^m` on 𝔻*.
    PuncturedPower {
        rotation: T,
        degree: u32,
    },
    /// `z ↦ e^{iθ} z^m e^{c(z−1)}` on 𝔻*, `c ≥ 0`.
    PuncturedExp {
        rotation: T,
        degree: u32,
        rate: T,
    },
    Composition {
        maps: Vec<HoloMap<T>>,
    },
    /// `w ↦ Re w` on 𝔻. Contracts the metric but is not holomorphic.
    RealPart,
    /// `w ↦ λw` on 𝔻, `|λ| ≤ 1`.
    Linear {
        factor: Complex<T>,
    },
    /// Constant map into the closed disc.
    Constant {
        value: Complex<T>,
    },
    /// `w ↦ f(w)/w`, extended by `f′(0)` at the origin.
    SchwarzQuotient {
        inner: Box<HoloMap<T>>,
    },
}

#[inline]
fn cone<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

impl<T: Real> HoloMap<T> {
    pub fn identity(model: Model) -> Self {
        HoloMap::Identity { model }
    }

    pub fn mobius(map: Mobius<T>) -> Self {
        HoloMap::MobiusAut { map }
    }

    pub fn blaschke(rotation: T, zeros: Vec<Complex<T>>) -> Result<Self> {
        let f = HoloMap::Blaschke { rotation, zeros };
        f.validate()?;
        Ok(f)
    }

    pub fn half_plane_translate(shift: T) -> Result<Self> {
        let f = HoloMap::HalfPlaneTranslate { shift };
        f.validate()?;
        Ok(f)
    }

    pub fn punctured_power(rotation: T, degree: u32) -> Result<Self> {
        let f = HoloMap::PuncturedPower { rotation, degree };
        f.validate()?;
        Ok(f)
    }

    pub fn punctured_exp(rotation: T, degree: u32, rate: T) -> Result<Self> {
        let f = HoloMap::PuncturedExp { rotation, degree, rate };
        f.validate()?;
        Ok(f)
    }

    pub fn linear(factor: Complex<T>) -> Result<Self> {
        let f = HoloMap::Linear { factor };
        f.validate()?;
        Ok(f)
    }

    /// `maps[0] ∘ maps[1] ∘ …`.
    pub fn compose(maps: Vec<HoloMap<T>>) -> Result<Self> {
        let f = HoloMap::Composition { maps };
        f.validate()?;
        Ok(f)
    }

    pub fn model(&self) -> Model {
        match self {
            HoloMap::Identity { model } => *model,
            HoloMap::MobiusAut { map } => map.model(),
            HoloMap::HalfPlaneTranslate { .. } => Model::RightHalfPlane,
            HoloMap::PuncturedPower { .. } | HoloMap::PuncturedExp { .. } => Model::PuncturedDisc,
            HoloMap::Composition { maps } => maps.first().map_or(Model::Disc, |m| m.model()),
            HoloMap::Blaschke { .. }
            | HoloMap::RealPart
            | HoloMap::Linear { .. }
            | HoloMap::Constant { .. }
            | HoloMap::SchwarzQuotient { .. } => Model::Disc,
        }
    }

    /// True only for maps that merely contract the metric (`RealPart`, or a
    /// composition containing it).
    pub fn contraction_only(&self) -> bool {
        match self {
            HoloMap::RealPart => true,
            HoloMap::Composition { maps } => maps.iter().any(|m| m.contraction_only()),
            HoloMap::SchwarzQuotient { inner } => inner.contraction_only(),
            _ => false,
        }
    }

    /// Checks the parameter invariants of the variant.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HypError::Validation(msg));
        let unit_margin = T::one() - lit::<T>(BOUNDARY_MARGIN);
        match self {
            HoloMap::Identity { .. } | HoloMap::RealPart => Ok(()),
            HoloMap::MobiusAut { map } => map.validated().map(|_| ()),
            HoloMap::Blaschke { rotation, zeros } => {
                if !rotation.is_finite() {
                    return bad("non-finite Blaschke rotation".into());
                }
                if zeros.is_empty() {
                    return bad("a Blaschke product needs at least one zero".into());
                }
                match zeros.iter().find(|z| !(z.norm() < unit_margin)) {
                    Some(z) => bad(format!("Blaschke zero {z} is not inside the disc")),
                    None => Ok(()),
                }
            }
            HoloMap::HalfPlaneTranslate { shift } => {
                if shift.is_finite() && *shift >= T::zero() {
                    Ok(())
                } else {
                    bad(format!("translation {shift} must be a finite nonnegative real"))
                }
            }
            HoloMap::PuncturedPower { rotation, degree } => {
                if *degree == 0 || !rotation.is_finite() {
                    bad("punctured power needs degree ≥ 1 and a finite rotation".into())
                } else {
                    Ok(())
                }
            }
            HoloMap::PuncturedExp { rotation, degree, rate } => {
                if *degree == 0 || !rotation.is_finite() {
                    bad("punctured exponential needs degree ≥ 1 and a finite rotation".into())
                } else if !(rate.is_finite() && *rate >= T::zero()) {
                    bad(format!("punctured exponential rate {rate} must be ≥ 0"))
                } else {
                    Ok(())
                }
            }
            HoloMap::Composition { maps } => {
                let Some(first) = maps.first() else {
                    return bad("empty composition".into());
                };
                let model = first.model();
                for m in maps {
                    m.validate()?;
                    if m.model() != model {
                        return bad("composition mixes models".into());
                    }
                }
                Ok(())
            }
            HoloMap::Linear { factor } => {
                if factor.norm() <= T::one() {
                    Ok(())
                } else {
                    bad(format!("linear factor {factor} lies outside the closed disc"))
                }
            }
            HoloMap::Constant { value } => {
                if value.norm() <= T::one() {
                    Ok(())
                } else {
                    bad(format!("constant {value} lies outside the closed disc"))
                }
            }
            HoloMap::SchwarzQuotient { inner } => {
                inner.validate()?;
                if inner.model() != Model::Disc {
                    return bad("Schwarz quotient of a non-disc map".into());
                }
                Ok(())
            }
        }
    }

    /// Evaluates the formula on a bare complex number.
    pub fn eval_raw(&self, z: Complex<T>) -> Result<Complex<T>> {
        Ok(match self {
            HoloMap::Identity { .. } => z,
            HoloMap::MobiusAut { map } => map.apply_raw(z)?,
            HoloMap::Blaschke { rotation, zeros } => {
                let mut acc = Complex::from_polar(T::one(), *rotation);
                for a in zeros {
                    acc = acc * (z - a) / (cone::<T>() - a.conj() * z);
                }
                acc
            }
            HoloMap::HalfPlaneTranslate { shift } => z + *shift,
            HoloMap::PuncturedPower { rotation, degree } => Complex::from_polar(T::one(), *rotation) * z.powu(*degree),
            HoloMap::PuncturedExp { rotation, degree, rate } => {
                Complex::from_polar(T::one(), *rotation) * z.powu(*degree) * ((z - cone::<T>()) * *rate).exp()
            }
            HoloMap::Composition { maps } => {
                let mut w = z;
                for m in maps.iter().rev() {
                    w = m.eval_raw(w)?;
                }
                w
            }
            HoloMap::RealPart => Complex::new(z.re, T::zero()),
            HoloMap::Linear { factor } => *factor * z,
            HoloMap::Constant { value } => *value,
            HoloMap::SchwarzQuotient { inner } => {
                if z.norm() == T::zero() {
                    inner.derivative(z)?
                } else {
                    inner.eval_raw(z)? / z
                }
            }
        })
    }

    /// Evaluates at a model point and validates the image.
    pub fn eval(&self, z: &ModelPoint<T>) -> Result<ModelPoint<T>> {
        let model = self.model();
        if z.model() != model {
            return Err(HypError::Domain(format!("map acts on {model} but point is in {}", z.model())));
        }
        ModelPoint::from_image(self.eval_raw(z.value())?, model)
    }

    /// Closed-form derivative where the variant has one.
    pub fn derivative_closed(&self, z: Complex<T>) -> Option<Complex<T>> {
        let one = cone::<T>();
        match self {
            HoloMap::Identity { .. } | HoloMap::HalfPlaneTranslate { .. } => Some(one),
            HoloMap::MobiusAut { map } => {
                let [_, _, c, d] = map.entries();
                let den = c * z + d;
                Some(one / (den * den))
            }
            HoloMap::Blaschke { rotation, zeros } => {
                let factors: Vec<_> = zeros.iter().map(|a| (z - a) / (one - a.conj() * z)).collect();
                let mut sum = Complex::new(T::zero(), T::zero());
                for (i, a) in zeros.iter().enumerate() {
                    let den = one - a.conj() * z;
                    let mut term = (one - a * a.conj()) / (den * den);
                    for (j, f) in factors.iter().enumerate() {
                        if j != i {
                            term *= f;
                        }
                    }
                    sum += term;
                }
                Some(Complex::from_polar(T::one(), *rotation) * sum)
            }
            HoloMap::PuncturedPower { rotation, degree } => {
                let m = T::from_u32(*degree).unwrap();
                Some(Complex::from_polar(T::one(), *rotation) * z.powu(degree - 1) * m)
            }
            HoloMap::PuncturedExp { rotation, degree, rate } => {
                let m = T::from_u32(*degree).unwrap();
                let e = Complex::from_polar(T::one(), *rotation) * ((z - one) * *rate).exp();
                Some(e * (z.powu(degree - 1) * m + z.powu(*degree) * *rate))
            }
            HoloMap::Composition { maps } => {
                let mut w = z;
                let mut acc = one;
                for m in maps.iter().rev() {
                    acc *= m.derivative_closed(w)?;
                    w = m.eval_raw(w).ok()?;
                }
                Some(acc)
            }
            HoloMap::RealPart => None,
            HoloMap::Linear { factor } => Some(*factor),
            HoloMap::Constant { .. } => Some(Complex::new(T::zero(), T::zero())),
            HoloMap::SchwarzQuotient { inner } => {
                if z.norm() == T::zero() {
                    return None;
                }
                let f = inner.eval_raw(z).ok()?;
                let df = inner.derivative_closed(z)?;
                Some((df * z - f) / (z * z))
            }
        }
    }

    /// Derivative: closed form when available, otherwise a central difference
    /// with step [`FD_STEP`]. Fails for `RealPart`.
    pub fn derivative(&self, z: Complex<T>) -> Result<Complex<T>> {
        if self.contraction_only() {
            return Err(HypError::Domain("Re(w) has no complex derivative".into()));
        }
        if let Some(d) = self.derivative_closed(z) {
            return Ok(d);
        }
        let h = lit::<T>(FD_STEP);
        let step = Complex::new(h, T::zero());
        Ok((self.eval_raw(z + step)? - self.eval_raw(z - step)?) / (step * lit::<T>(2.0)))
    }

    /// Logarithmic derivative `f′/f`, closed form for the punctured families.
    pub fn log_derivative(&self, z: Complex<T>) -> Result<Complex<T>> {
        let one = cone::<T>();
        match self {
            HoloMap::Identity { .. } => Ok(one / z),
            HoloMap::PuncturedPower { degree, .. } => Ok(one / z * T::from_u32(*degree).unwrap()),
            HoloMap::PuncturedExp { degree, rate, .. } => Ok(one / z * T::from_u32(*degree).unwrap() + *rate),
            HoloMap::Composition { maps } => {
                // (f∘g)′/(f∘g) = (f′/f)(g) · (g′/g) · g
                let mut w = z;
                let mut acc = one;
                for m in maps.iter().rev() {
                    let next = m.eval_raw(w)?;
                    acc = acc * m.log_derivative(w)? * w;
                    w = next;
                }
                Ok(acc / z)
            }
            _ => {
                let f = self.eval_raw(z)?;
                Ok(self.derivative(z)? / f)
            }
        }
    }

    /// Analytic degree of a punctured-disc map; `None` elsewhere.
    pub fn declared_degree(&self) -> Option<u32> {
        match self {
            HoloMap::Identity { model: Model::PuncturedDisc } => Some(1),
            HoloMap::MobiusAut { map } if map.model() == Model::PuncturedDisc => Some(1),
            HoloMap::PuncturedPower { degree, .. } | HoloMap::PuncturedExp { degree, .. } => Some(*degree),
            HoloMap::Composition { maps } => {
                maps.iter().map(|m| m.declared_degree()).try_fold(1u32, |acc, d| d.map(|d| acc * d))
            }
            _ => None,
        }
    }

    /// Samples 100 points of the model and checks each image stays inside.
    pub fn check_self_map(&self) -> Result<()> {
        for z in mobius::sample_model_points::<T>(self.model(), 100) {
            ModelPoint::from_image(self.eval_raw(z)?, self.model())?;
        }
        Ok(())
    }

    /// Same map with `f64` parameters, for reporting.
    pub fn to_f64(&self) -> HoloMap<f64> {
        let c = |z: &Complex<T>| Complex::new(to_f64(z.re), to_f64(z.im));
        match self {
            HoloMap::Identity { model } => HoloMap::Identity { model: *model },
            HoloMap::MobiusAut { map } => {
                let [a, b, cc, d] = map.entries();
                HoloMap::MobiusAut {
                    map: Mobius::from_mat(crate::mobius::Mat2::new(c(&a), c(&b), c(&cc), c(&d)), map.model()),
                }
            }
            HoloMap::Blaschke { rotation, zeros } => {
                HoloMap::Blaschke { rotation: to_f64(*rotation), zeros: zeros.iter().map(c).collect() }
            }
            HoloMap::HalfPlaneTranslate { shift } => HoloMap::HalfPlaneTranslate { shift: to_f64(*shift) },
            HoloMap::PuncturedPower { rotation, degree } => {
                HoloMap::PuncturedPower { rotation: to_f64(*rotation), degree: *degree }
            }
            HoloMap::PuncturedExp { rotation, degree, rate } => {
                HoloMap::PuncturedExp { rotation: to_f64(*rotation), degree: *degree, rate: to_f64(*rate) }
            }
            HoloMap::Composition { maps } => HoloMap::Composition { maps: maps.iter().map(|m| m.to_f64()).collect() },
            HoloMap::RealPart => HoloMap::RealPart,
            HoloMap::Linear { factor } => HoloMap::Linear { factor: c(factor) },
            HoloMap::Constant { value } => HoloMap::Constant { value: c(value) },
            HoloMap::SchwarzQuotient { inner } => HoloMap::SchwarzQuotient { inner: Box::new(inner.to_f64()) },
        }
    }

    /// Compact JSON echo (`kind` tag plus parameters).
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_f64()).unwrap_or(serde_json::Value::Null)
    }
}

/// `g(w) = f(w)/w`, `g(0) = f′(0)`, for a holomorphic disc self-map fixing 0.
///
/// Variants with a closed form quotient (Blaschke products with a zero at
/// the origin, rotations, linear maps) return that form; everything else is
/// wrapped in [`HoloMap::SchwarzQuotient`].
pub fn schwarz_quotient<T: Real>(f: &HoloMap<T>) -> Result<HoloMap<T>> {
    if f.model() != Model::Disc {
        return Err(HypError::Precondition("Schwarz quotient needs a disc self-map".into()));
    }
    if f.contraction_only() {
        return Err(HypError::Precondition("Schwarz quotient needs a holomorphic map".into()));
    }
    let zero = Complex::new(T::zero(), T::zero());
    let f0 = f.eval_raw(zero)?;
    if f0.norm() > lit(ORIGIN_FIX_TOL) {
        return Err(HypError::Precondition(format!("f(0) = {f0} is not 0")));
    }
    let tiny = lit::<T>(1e-15);
    Ok(match f {
        HoloMap::Identity { .. } => HoloMap::Constant { value: cone() },
        HoloMap::Linear { factor } => HoloMap::Constant { value: *factor },
        HoloMap::MobiusAut { .. } => HoloMap::Constant { value: f.derivative(zero)? },
        HoloMap::Blaschke { rotation, zeros } => {
            let pos = zeros.iter().position(|z| z.norm() <= tiny).expect("f(0) = 0 forces a zero at 0");
            let mut rest = zeros.clone();
            rest.remove(pos);
            if rest.is_empty() {
                HoloMap::Constant { value: Complex::from_polar(T::one(), *rotation) }
            } else {
                HoloMap::Blaschke { rotation: *rotation, zeros: rest }
            }
        }
        _ => HoloMap::SchwarzQuotient { inner: Box::new(f.clone()) },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::dist;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let z = ModelPoint::disc(0.3, 0.2).unwrap();
        assert_eq!(HoloMap::identity(Model::Disc).eval(&z).unwrap(), z);
        let t = HoloMap::half_plane_translate(0.01).unwrap();
        let w = t.eval(&ModelPoint::right(0.1, 0.0).unwrap()).unwrap();
        assert!((w.value() - c(0.11, 0.0)).norm() < 1e-15);
        let e = HoloMap::punctured_exp(0.0, 2, 1.0).unwrap();
        let v = e.eval(&ModelPoint::punctured(0.5, 0.0).unwrap()).unwrap();
        assert!((v.re() - 0.25 * (-0.5f64).exp()).abs() < 1e-15);
        assert!((v.re() - 0.151633).abs() < 1e-6);
    }

    #[test]
    fn eval_model_mismatch() {
        let f = HoloMap::<f64>::punctured_power(0.0, 2).unwrap();
        assert!(matches!(f.eval(&ModelPoint::disc(0.5, 0.0).unwrap()), Err(HypError::Domain(_))));
    }

    #[test]
    fn invalid_parameters() {
        assert!(HoloMap::blaschke(0.0, vec![c(1.0, 0.0)]).is_err());
        assert!(HoloMap::blaschke(0.0, vec![]).is_err());
        assert!(HoloMap::half_plane_translate(-1.0).is_err());
        assert!(HoloMap::punctured_power(0.0, 0).is_err());
        assert!(HoloMap::punctured_exp(0.0, 1, -0.5).is_err());
        assert!(
            HoloMap::compose(vec![HoloMap::identity(Model::Disc), HoloMap::punctured_power(0.0, 1).unwrap()]).is_err()
        );
    }

    #[test]
    fn quotient_examples() {
        let sq = HoloMap::blaschke(0.0, vec![c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let g = schwarz_quotient(&sq).unwrap();
        for w in [c(0.3, 0.1), c(-0.5, 0.5)] {
            assert!((g.eval_raw(w).unwrap() - w).norm() < 1e-15);
        }
        let f = HoloMap::blaschke(0.0, vec![c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        let g = schwarz_quotient(&f).unwrap();
        assert!((g.eval_raw(c(0.0, 0.0)).unwrap() - c(-0.5, 0.0)).norm() < 1e-15);
        let w = c(0.2, -0.4);
        let expect = (w - 0.5) / (c(1.0, 0.0) - w * 0.5);
        assert!((g.eval_raw(w).unwrap() - expect).norm() < 1e-15);

        let lin = HoloMap::linear(c(0.3, 0.0)).unwrap();
        let g = schwarz_quotient(&lin).unwrap();
        assert_eq!(g.eval_raw(c(0.0, 0.0)).unwrap(), c(0.3, 0.0));
        assert_eq!(g.eval_raw(c(0.7, 0.1)).unwrap(), c(0.3, 0.0));
    }

    #[test]
    fn quotient_of_composition_uses_derivative_at_origin() {
        let a = HoloMap::blaschke(0.4, vec![c(0.0, 0.0), c(0.3, 0.3)]).unwrap();
        let b = HoloMap::linear(c(0.0, 0.8)).unwrap();
        let f = HoloMap::compose(vec![a.clone(), b.clone()]).unwrap();
        let g = schwarz_quotient(&f).unwrap();
        assert!(matches!(g, HoloMap::SchwarzQuotient { .. }));
        let g0 = g.eval_raw(c(0.0, 0.0)).unwrap();
        let expect = a.derivative(c(0.0, 0.0)).unwrap() * c(0.0, 0.8);
        assert!((g0 - expect).norm() < 1e-14);
        let near = g.eval_raw(c(1e-7, 0.0)).unwrap();
        assert!((near - g0).norm() < 1e-6);
    }

    #[test]
    fn quotient_preconditions() {
        let f = HoloMap::blaschke(0.0, vec![c(0.5, 0.0)]).unwrap();
        assert!(matches!(schwarz_quotient(&f), Err(HypError::Precondition(_))));
        assert!(matches!(schwarz_quotient(&HoloMap::<f64>::RealPart), Err(HypError::Precondition(_))));
        let p = HoloMap::<f64>::punctured_power(0.0, 2).unwrap();
        assert!(matches!(schwarz_quotient(&p), Err(HypError::Precondition(_))));
    }

    #[test]
    fn degrees() {
        assert_eq!(HoloMap::<f64>::punctured_power(1.0, 3).unwrap().declared_degree(), Some(3));
        assert_eq!(HoloMap::<f64>::identity(Model::PuncturedDisc).declared_degree(), Some(1));
        let comp = HoloMap::compose(vec![
            HoloMap::<f64>::punctured_power(0.0, 2).unwrap(),
            HoloMap::punctured_power(0.0, 3).unwrap(),
        ])
        .unwrap();
        assert_eq!(comp.declared_degree(), Some(6));
        assert_eq!(HoloMap::<f64>::identity(Model::Disc).declared_degree(), None);
    }

    #[test]
    fn derivatives_match_central_differences() {
        let maps = vec![
            HoloMap::blaschke(0.3, vec![c(0.1, 0.2), c(-0.5, 0.1), c(0.0, 0.7)]).unwrap(),
            HoloMap::punctured_exp(0.2, 3, 1.5).unwrap(),
            HoloMap::compose(vec![
                HoloMap::blaschke(0.0, vec![c(0.2, 0.0)]).unwrap(),
                HoloMap::linear(c(0.5, 0.5)).unwrap(),
            ])
            .unwrap(),
        ];
        let z = c(0.31, -0.22);
        let h = 1e-6;
        for f in maps {
            let exact = f.derivative(z).unwrap();
            let fd = (f.eval_raw(z + h).unwrap() - f.eval_raw(z - h).unwrap()) / (2.0 * h);
            assert!((exact - fd).norm() < 1e-8, "{f:?}");
            let ld = f.log_derivative(z).unwrap();
            assert!((ld - exact / f.eval_raw(z).unwrap()).norm() < 1e-10);
        }
    }

    #[test]
    fn real_part_flags_and_fixed_points() {
        let f = HoloMap::<f64>::RealPart;
        assert!(f.contraction_only());
        let a = ModelPoint::disc(0.3, 0.0).unwrap();
        assert_eq!(f.eval(&a).unwrap(), a);
        assert!(!HoloMap::<f64>::identity(Model::Disc).contraction_only());
        assert!(f.derivative(c(0.1, 0.1)).is_err());
    }

    #[test]
    fn strict_schwarz_for_blaschke_with_zero_at_origin() {
        let f = HoloMap::blaschke(1.2, vec![c(0.0, 0.0), c(0.4, -0.3)]).unwrap();
        for z in mobius::sample_model_points::<f64>(Model::Disc, 100) {
            if z.norm() > 0.0 {
                assert!(f.eval_raw(z).unwrap().norm() < z.norm());
            }
        }
    }

    #[test]
    fn punctured_exp_is_contracting() {
        let f = HoloMap::punctured_exp(0.7, 2, 1.3).unwrap();
        f.check_self_map().unwrap();
        let u = ModelPoint::punctured(0.3, 0.4).unwrap();
        let v = ModelPoint::punctured(-0.6, 0.1).unwrap();
        let before = dist(&u, &v).unwrap();
        let after = dist(&f.eval(&u).unwrap(), &f.eval(&v).unwrap()).unwrap();
        assert!(after <= before + 1e-9);
    }

    #[test]
    fn json_round_trip() {
        let f = HoloMap::compose(vec![
            HoloMap::punctured_exp(0.1, 2, 0.5).unwrap(),
            HoloMap::punctured_power(0.0, 3).unwrap(),
        ])
        .unwrap();
        let text = serde_json::to_string(&f).unwrap();
        let back: HoloMap<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(f.to_json()["kind"], "composition");
    }
}
