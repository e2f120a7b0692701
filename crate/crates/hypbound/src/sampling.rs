//! Seeded sampling of maps and points.
//!
//! Every random object is a pure function of a `u64` seed. Campaign sample
//! `i` under master seed `s` uses the child seed [`derive_seed`]`(s, i)`, so
//! results do not depend on evaluation order or thread count.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{HypError, Result};
use crate::holomaps::HoloMap;
use crate::mobius::build_disc_automorphism;
use crate::models::{Model, ModelPoint};
use crate::scalar::{lit, Real};

/// Zeros and automorphism centres are drawn from the disc of this radius.
pub const ZERO_RADIUS: f64 = 0.95;

pub type SampleRng = ChaCha8Rng;

/// SplitMix64 finalizer.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Child seed for sample `index` of a run seeded with `seed`:
/// `splitmix64(seed ⊕ splitmix64(index))`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Map families available to sampling campaigns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// Blaschke products of degree `1..=max_degree`.
    Blaschke {
        max_degree: u32,
    },
    DiscAutomorphism,
    /// `e^{iθ} z^m e^{c(z−1)}` with `1 ≤ m ≤ max_m`, `0 ≤ c ≤ max_c`.
    PuncturedExp {
        max_m: u32,
        max_c: f64,
    },
    /// Maps whose displacement at the origin is below `eps`.
    NearIdentity {
        eps: f64,
    },
    /// Blaschke products, automorphisms and compositions of two or three of them.
    DiscMix {
        max_degree: u32,
    },
    /// The non-holomorphic contraction `w ↦ Re w`.
    RealPart,
}

impl Family {
    pub fn model(&self) -> Model {
        match self {
            Family::PuncturedExp { .. } => Model::PuncturedDisc,
            _ => Model::Disc,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let usage = |m: String| Err(HypError::Usage(m));
        match *self {
            Family::Blaschke { max_degree } | Family::DiscMix { max_degree } => {
                if !(1..=16).contains(&max_degree) {
                    return usage(format!("max_degree {max_degree} outside 1..=16"));
                }
            }
            Family::PuncturedExp { max_m, max_c } => {
                if !(1..=16).contains(&max_m) {
                    return usage(format!("max_m {max_m} outside 1..=16"));
                }
                if !(0.0..=10.0).contains(&max_c) {
                    return usage(format!("max_c {max_c} outside [0, 10]"));
                }
            }
            Family::NearIdentity { eps } => {
                if !(eps > 0.0 && eps <= 1.0) {
                    return usage(format!("eps {eps} outside (0, 1]"));
                }
            }
            Family::DiscAutomorphism | Family::RealPart => {}
        }
        Ok(())
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Blaschke { max_degree } => write!(f, "blaschke:max_degree={max_degree}"),
            Family::DiscAutomorphism => f.write_str("automorphism"),
            Family::PuncturedExp { max_m, max_c } => write!(f, "punctured_exp:max_m={max_m},max_c={max_c}"),
            Family::NearIdentity { eps } => write!(f, "near_identity:eps={eps}"),
            Family::DiscMix { max_degree } => write!(f, "mix:max_degree={max_degree}"),
            Family::RealPart => f.write_str("real_part"),
        }
    }
}

impl FromStr for Family {
    type Err = HypError;

    /// `blaschke[:max_degree=N]`, `automorphism`, `punctured_exp[:max_m=M,max_c=C]`,
    /// `near_identity[:eps=E]`, `mix[:max_degree=N]`, `real_part`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = crate::parse::split_spec(s)?;
        let fam = match name.as_str() {
            "blaschke" => Family::Blaschke { max_degree: params.get_or("max_degree", 5)? },
            "automorphism" | "disc_automorphism" => Family::DiscAutomorphism,
            "punctured_exp" | "exp" => {
                Family::PuncturedExp { max_m: params.get_or("max_m", 4)?, max_c: params.get_or("max_c", 2.0)? }
            }
            "near_identity" => Family::NearIdentity { eps: params.get_or("eps", 1e-3)? },
            "mix" | "disc_mix" => Family::DiscMix { max_degree: params.get_or("max_degree", 5)? },
            "real_part" | "re" => Family::RealPart,
            other => return Err(HypError::Usage(format!("unknown family `{other}`"))),
        };
        params.finish()?;
        fam.validate()?;
        Ok(fam)
    }
}

fn uniform_angle<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    lit::<T>(rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Uniform point in the Euclidean disc of radius `radius`.
pub fn uniform_in_disc<T: Real, R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex<T> {
    let r = radius * rng.gen::<f64>().sqrt();
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex::from_polar(lit::<T>(r), lit::<T>(t))
}

/// Disc point at hyperbolic distance uniform in `[0, max_radius]` from 0.
pub fn disc_point<T: Real, R: Rng + ?Sized>(rng: &mut R, max_radius: f64) -> ModelPoint<T> {
    let rho = rng.gen_range(0.0..=max_radius);
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    let w = Complex::from_polar(lit::<T>((rho / 2.0).tanh()), lit::<T>(t));
    ModelPoint::new(w, Model::Disc).expect("radius keeps points inside the disc")
}

/// Real disc point at hyperbolic distance at most `max_radius` from 0.
pub fn real_disc_point<T: Real, R: Rng + ?Sized>(rng: &mut R, max_radius: f64) -> ModelPoint<T> {
    let rho = rng.gen_range(-max_radius..=max_radius);
    ModelPoint::new(Complex::new(lit::<T>((rho / 2.0).tanh()), T::zero()), Model::Disc)
        .expect("radius keeps points inside the disc")
}

/// Punctured-disc point with `|z|` uniform in `(0,1)`, conditioned on
/// `λ*(z) ≤ max_density`.
pub fn punctured_point<T: Real, R: Rng + ?Sized>(rng: &mut R, max_density: f64) -> ModelPoint<T> {
    loop {
        let r: f64 = rng.gen_range(1e-12..1.0);
        let lam = -1.0 / (r * r.ln());
        if !(lam <= max_density) {
            continue;
        }
        let t = rng.gen_range(0.0..std::f64::consts::TAU);
        if let Ok(p) = ModelPoint::new(Complex::from_polar(lit::<T>(r), lit::<T>(t)), Model::PuncturedDisc) {
            return p;
        }
    }
}

pub fn random_blaschke<T: Real, R: Rng + ?Sized>(rng: &mut R, max_degree: u32) -> HoloMap<T> {
    let n = rng.gen_range(1..=max_degree);
    let zeros = (0..n).map(|_| uniform_in_disc(rng, ZERO_RADIUS)).collect();
    HoloMap::Blaschke { rotation: uniform_angle(rng), zeros }
}

pub fn random_automorphism<T: Real, R: Rng + ?Sized>(rng: &mut R) -> HoloMap<T> {
    let a = ModelPoint::new(uniform_in_disc(rng, ZERO_RADIUS), Model::Disc).expect("inside");
    let m = build_disc_automorphism(&a, uniform_angle(rng)).expect("valid centre");
    HoloMap::MobiusAut { map: m }
}

/// Small automorphism, optionally composed with `w(w+r)/(1+rw)` for `r`
/// close to 1 (a degree-two Blaschke product close to the identity).
pub fn random_near_identity<T: Real, R: Rng + ?Sized>(rng: &mut R, eps: f64) -> HoloMap<T> {
    let radius = (eps / 4.0).tanh() * rng.gen::<f64>();
    let a = ModelPoint::new(uniform_in_disc(rng, radius), Model::Disc).expect("inside");
    let theta = lit::<T>(rng.gen_range(-eps..=eps));
    let aut = HoloMap::MobiusAut { map: build_disc_automorphism(&a, theta).expect("valid centre") };
    if rng.gen_bool(0.5) {
        let r = 1.0 - eps * rng.gen_range(0.01..0.1);
        let b = HoloMap::Blaschke {
            rotation: T::zero(),
            zeros: vec![Complex::new(T::zero(), T::zero()), Complex::new(lit::<T>(-r), T::zero())],
        };
        HoloMap::Composition { maps: vec![aut, b] }
    } else {
        aut
    }
}

pub fn random_punctured_exp<T: Real, R: Rng + ?Sized>(rng: &mut R, max_m: u32, max_c: f64) -> HoloMap<T> {
    HoloMap::PuncturedExp {
        rotation: uniform_angle(rng),
        degree: rng.gen_range(1..=max_m),
        rate: lit::<T>(rng.gen_range(0.0..=max_c)),
    }
}

/// Draws one map of `family` from `rng`.
pub fn sample_map_with<T: Real, R: Rng + ?Sized>(family: &Family, rng: &mut R) -> Result<HoloMap<T>> {
    family.validate()?;
    Ok(match *family {
        Family::Blaschke { max_degree } => random_blaschke(rng, max_degree),
        Family::DiscAutomorphism => random_automorphism(rng),
        Family::PuncturedExp { max_m, max_c } => random_punctured_exp(rng, max_m, max_c),
        Family::NearIdentity { eps } => random_near_identity(rng, eps),
        Family::DiscMix { max_degree } => match rng.gen_range(0..3) {
            0 => random_blaschke(rng, max_degree),
            1 => random_automorphism(rng),
            _ => {
                let k = rng.gen_range(2..=3);
                let maps =
                    (0..k)
                        .map(|_| {
                            if rng.gen_bool(0.5) {
                                random_blaschke(rng, max_degree)
                            } else {
                                random_automorphism(rng)
                            }
                        })
                        .collect();
                HoloMap::Composition { maps }
            }
        },
        Family::RealPart => HoloMap::RealPart,
    })
}

/// Deterministic in `seed`.
pub fn sample_map<T: Real>(family: &Family, seed: u64) -> Result<HoloMap<T>> {
    sample_map_with(family, &mut rng_from_seed(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::dist;

    #[test]
    fn deterministic_per_seed() {
        let fam = Family::Blaschke { max_degree: 3 };
        let a: HoloMap<f64> = sample_map(&fam, 42).unwrap();
        let b: HoloMap<f64> = sample_map(&fam, 42).unwrap();
        assert_eq!(a, b);
        let c: HoloMap<f64> = sample_map(&fam, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn punctured_exp_ranges() {
        let fam = Family::PuncturedExp { max_m: 5, max_c: 2.0 };
        for seed in 0..50 {
            match sample_map::<f64>(&fam, derive_seed(7, seed)).unwrap() {
                HoloMap::PuncturedExp { degree, rate, .. } => {
                    assert!((1..=5).contains(&degree));
                    assert!((0.0..=2.0).contains(&rate));
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn near_identity_moves_origin_little() {
        let fam = Family::NearIdentity { eps: 1e-3 };
        let o = ModelPoint::disc(0.0, 0.0).unwrap();
        for seed in 0..100 {
            let f: HoloMap<f64> = sample_map(&fam, seed).unwrap();
            f.validate().unwrap();
            assert!(dist(&f.eval(&o).unwrap(), &o).unwrap() < 1e-3);
        }
    }

    #[test]
    fn sampled_maps_are_valid_self_maps() {
        let fam = Family::DiscMix { max_degree: 5 };
        for seed in 0..50 {
            let f: HoloMap<f64> = sample_map(&fam, seed).unwrap();
            f.validate().unwrap();
            f.check_self_map().unwrap();
        }
    }

    #[test]
    fn family_parsing() {
        assert_eq!("blaschke:max_degree=3".parse::<Family>().unwrap(), Family::Blaschke { max_degree: 3 });
        assert_eq!("real_part".parse::<Family>().unwrap(), Family::RealPart);
        assert!(matches!("spiral".parse::<Family>(), Err(HypError::Usage(_))));
        assert!(matches!("blaschke:max_degree=0".parse::<Family>(), Err(HypError::Usage(_))));
        assert!(matches!("blaschke:bogus=1".parse::<Family>(), Err(HypError::Usage(_))));
        let f: Family = "punctured_exp:max_m=4,max_c=2".parse().unwrap();
        assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
    }

    #[test]
    fn child_seeds_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
    }

    #[test]
    fn punctured_points_respect_density_cap() {
        let mut rng = rng_from_seed(3);
        for _ in 0..200 {
            let p: ModelPoint<f64> = punctured_point(&mut rng, 1e3);
            assert!(crate::models::density_punctured(&p).unwrap() <= 1e3);
        }
    }
}
