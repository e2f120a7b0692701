//! Seeded verification campaigns.
//!
//! Sample `i` of a campaign is rebuilt from `derive_seed(seed, i)` alone, so a
//! report is identical at any thread count and every violation can be
//! re-checked in isolation with [`recheck`].

use std::time::Instant;

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bounds::{self, sig17, BoundReport, Theorem};
use crate::error::{HypError, Result};
use crate::holomaps::HoloMap;
use crate::mobius::{axis_bound, build_disc_automorphism, hyperbolic_pull};
use crate::models::{self, Model, ModelPoint};
use crate::sampling::{self, derive_seed, rng_from_seed, Family, SampleRng};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_MIN_SEP: f64 = 0.1;
pub const DEFAULT_MAX_RADIUS: f64 = 6.0;
/// Cap on `λ*` for sampled punctured-disc points.
pub const DEFAULT_MAX_DENSITY: f64 = 1e3;
const MAX_REJECTIONS: usize = 10_000;

fn family_str<S: Serializer>(f: &Family, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(f)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignConfig {
    pub theorem: Theorem,
    #[serde(serialize_with = "family_str")]
    pub family: Family,
    pub samples: usize,
    pub seed: u64,
    /// Minimum `ρ(a, b)`.
    pub min_sep: f64,
    /// Largest pairwise distance between sampled disc points; each point is
    /// drawn within `max_radius / 2` of the origin.
    pub max_radius: f64,
    pub tolerance: f64,
    /// Upper bound on `λ*` at sampled punctured-disc points.
    pub max_density: f64,
    /// Worker threads; `None` uses the global rayon pool. Never affects results.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl CampaignConfig {
    pub fn new(theorem: Theorem, family: Family, samples: usize, seed: u64) -> Self {
        Self {
            theorem,
            family,
            samples,
            seed,
            min_sep: DEFAULT_MIN_SEP,
            max_radius: DEFAULT_MAX_RADIUS,
            tolerance: bounds::VIOLATION_TOL,
            max_density: DEFAULT_MAX_DENSITY,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let usage = |m: String| Err(HypError::Usage(m));
        if self.samples == 0 {
            return usage("samples must be at least 1".into());
        }
        if !(self.min_sep > 0.0 && self.min_sep.is_finite()) {
            return usage(format!("min_sep must be positive, got {}", self.min_sep));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return usage(format!("tolerance must be positive, got {}", self.tolerance));
        }
        if !(self.max_radius > 0.0 && self.max_radius <= 30.0) {
            return usage(format!("max_radius must lie in (0, 30], got {}", self.max_radius));
        }
        if self.min_sep >= self.max_radius {
            return usage(format!("min_sep {} cannot be met inside max_radius {}", self.min_sep, self.max_radius));
        }
        if !(self.max_density > std::f64::consts::E) {
            return usage(format!("max_density must exceed e, got {}", self.max_density));
        }
        if self.threads == Some(0) {
            return usage("threads must be at least 1".into());
        }
        self.family.validate()?;
        let ok = match self.theorem {
            Theorem::TwoPoint | Theorem::TwoPointSharp | Theorem::TwoPointAutomorphism => {
                self.family.model() == Model::Disc
            }
            Theorem::FixedPoint => matches!(
                self.family,
                Family::Blaschke { .. } | Family::DiscAutomorphism | Family::DiscMix { .. } | Family::RealPart
            ),
            Theorem::Punctured => matches!(self.family, Family::PuncturedExp { .. }),
            Theorem::Axis => self.family == Family::DiscAutomorphism,
        };
        if !ok {
            return usage(format!("family `{}` cannot drive the `{}` check", self.family, self.theorem));
        }
        Ok(())
    }
}

/// Everything sampled for one campaign entry.
///
/// For the axis check `f` is the hyperbolic automorphism, `a` the point on its
/// axis and `z` the test point.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleWitness {
    pub index: u64,
    pub child_seed: u64,
    pub f: HoloMap<f64>,
    pub h: Option<HoloMap<f64>>,
    pub a: ModelPoint<f64>,
    pub b: Option<ModelPoint<f64>>,
    pub z: ModelPoint<f64>,
}

fn separated_pair(cfg: &CampaignConfig, rng: &mut SampleRng, real: bool) -> Result<(ModelPoint<f64>, ModelPoint<f64>)> {
    let r = cfg.max_radius / 2.0;
    let draw = |rng: &mut SampleRng| {
        if real {
            sampling::real_disc_point(rng, r)
        } else {
            sampling::disc_point(rng, r)
        }
    };
    for _ in 0..MAX_REJECTIONS {
        let a = draw(rng);
        let b = draw(rng);
        if models::dist(&a, &b)? >= cfg.min_sep {
            return Ok((a, b));
        }
    }
    Err(HypError::Precondition(format!("could not sample a pair with ρ(a,b) ≥ {}", cfg.min_sep)))
}

fn origin_fixing_piece(family: &Family, rng: &mut SampleRng) -> HoloMap<f64> {
    let degree = match *family {
        Family::RealPart => return HoloMap::RealPart,
        Family::Blaschke { max_degree } => Some(max_degree),
        Family::DiscMix { max_degree } if rng.gen_bool(0.5) => Some(max_degree),
        _ => None,
    };
    match degree.map(|n| sampling::random_blaschke::<f64, _>(rng, n)) {
        Some(HoloMap::Blaschke { rotation, mut zeros }) => {
            zeros[0] = Complex::new(0.0, 0.0);
            HoloMap::Blaschke { rotation, zeros }
        }
        _ => HoloMap::Blaschke {
            rotation: rng.gen_range(0.0..std::f64::consts::TAU),
            zeros: vec![Complex::new(0.0, 0.0)],
        },
    }
}

/// A self-map of the disc fixing 0, drawn from `family`.
fn origin_fixing_map(family: &Family, rng: &mut SampleRng) -> HoloMap<f64> {
    match family {
        Family::DiscMix { .. } => {
            let k = rng.gen_range(1..=3);
            let maps: Vec<_> = (0..k).map(|_| origin_fixing_piece(family, rng)).collect();
            if maps.len() == 1 {
                maps.into_iter().next().unwrap()
            } else {
                HoloMap::Composition { maps }
            }
        }
        _ => origin_fixing_piece(family, rng),
    }
}

fn sample_axis(cfg: &CampaignConfig, rng: &mut SampleRng) -> Result<SampleWitness> {
    let r = cfg.max_radius / 2.0;
    let c = sampling::disc_point::<f64, _>(rng, r);
    // σ sends c to 0; the axis is σ⁻¹ of a diameter
    let sigma_inv = build_disc_automorphism(&ModelPoint::disc(-c.re(), -c.im())?, 0.0)?;
    let dir = Complex::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::PI));
    let (s1, s2) = loop {
        let s1: f64 = rng.gen_range(-0.95..0.95);
        let s2: f64 = rng.gen_range(-0.95..0.95);
        if (s1 - s2).abs() > 1e-3 {
            break (s1, s2);
        }
    };
    let p = sigma_inv.apply(&ModelPoint::new(dir * s1, Model::Disc)?)?;
    let q = sigma_inv.apply(&ModelPoint::new(dir * s2, Model::Disc)?)?;
    let h = hyperbolic_pull(&p, &q)?;
    let w = sigma_inv.apply(&sampling::disc_point(rng, r))?;
    Ok(SampleWitness { index: 0, child_seed: 0, f: HoloMap::mobius(h), h: None, a: c, b: None, z: w })
}

/// Rebuilds sample `index` of `cfg`.
pub fn sample_witness(cfg: &CampaignConfig, index: u64) -> Result<SampleWitness> {
    let child_seed = derive_seed(cfg.seed, index);
    let mut rng = rng_from_seed(child_seed);
    let rng = &mut rng;
    let mut w = match cfg.theorem {
        Theorem::TwoPoint | Theorem::TwoPointSharp | Theorem::TwoPointAutomorphism => {
            let f = sampling::sample_map_with(&cfg.family, rng)?;
            let (a, b) = separated_pair(cfg, rng, cfg.family == Family::RealPart)?;
            let z = sampling::disc_point(rng, cfg.max_radius / 2.0);
            let h = (cfg.theorem == Theorem::TwoPointAutomorphism).then(|| sampling::random_automorphism(rng));
            SampleWitness { index, child_seed, f, h, a, b: Some(b), z }
        }
        Theorem::FixedPoint => {
            let f0 = origin_fixing_map(&cfg.family, rng);
            let (a, b) = separated_pair(cfg, rng, false)?;
            let z = sampling::disc_point(rng, cfg.max_radius / 2.0);
            let to_b = build_disc_automorphism(&ModelPoint::disc(-b.re(), -b.im())?, 0.0)?;
            let f = HoloMap::compose(vec![HoloMap::mobius(to_b), f0, HoloMap::mobius(to_b.inverse())])?;
            SampleWitness { index, child_seed, f, h: None, a, b: Some(b), z }
        }
        Theorem::Punctured => {
            let f = sampling::sample_map_with(&cfg.family, rng)?;
            let m = f.declared_degree().expect("punctured family has a degree");
            let h = HoloMap::punctured_power(rng.gen_range(0.0..std::f64::consts::TAU), m)?;
            let a = sampling::punctured_point(rng, cfg.max_density);
            let z = sampling::punctured_point(rng, cfg.max_density);
            SampleWitness { index, child_seed, f, h: Some(h), a, b: None, z }
        }
        Theorem::Axis => sample_axis(cfg, rng)?,
    };
    w.index = index;
    w.child_seed = child_seed;
    Ok(w)
}

fn mobius_of(f: &HoloMap<f64>) -> Result<&crate::mobius::Mobius<f64>> {
    match f {
        HoloMap::MobiusAut { map } => Ok(map),
        _ => Err(HypError::Precondition("expected a Möbius automorphism".into())),
    }
}

/// Runs `theorem`'s check on a witness.
pub fn evaluate_witness(theorem: Theorem, w: &SampleWitness) -> Result<BoundReport<f64>> {
    let need_b = || w.b.as_ref().ok_or_else(|| HypError::Precondition("witness has no b".into()));
    let report = match theorem {
        Theorem::TwoPoint | Theorem::TwoPointSharp | Theorem::TwoPointAutomorphism => {
            let h = w.h.as_ref().map(mobius_of).transpose()?;
            bounds::check_two_point_with(&w.f, &w.a, need_b()?, &w.z, h, theorem == Theorem::TwoPointSharp)?
        }
        Theorem::FixedPoint => bounds::check_fixed_point(&w.f, &w.a, need_b()?, &w.z)?,
        Theorem::Punctured => {
            let h = w.h.as_ref().ok_or_else(|| HypError::Precondition("witness has no h".into()))?;
            bounds::check_punctured(&w.f, h, &w.a, &w.z)?
        }
        Theorem::Axis => axis_bound(&w.z, &w.a, mobius_of(&w.f)?)?.bound,
    };
    if !report.margin.is_finite() {
        return Err(HypError::Numerical(format!("non-finite margin at sample {}", w.index)));
    }
    Ok(report)
}

/// Rebuilds and re-checks a single sample.
pub fn recheck(cfg: &CampaignConfig, index: u64) -> Result<BoundReport<f64>> {
    let w = sample_witness(cfg, index)?;
    Ok(evaluate_witness(cfg.theorem, &w)?.with_tolerance(cfg.tolerance))
}

fn in_pool<R: Send>(threads: Option<usize>, work: impl FnOnce() -> R + Send) -> Result<R> {
    match threads {
        None => Ok(work()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| HypError::Usage(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(work))
        }
    }
}

/// Per-sample reports in index order.
pub fn evaluate_samples(cfg: &CampaignConfig) -> Result<Vec<BoundReport<f64>>> {
    cfg.validate()?;
    in_pool(cfg.threads, || {
        (0..cfg.samples as u64).into_par_iter().map(|i| recheck(cfg, i)).collect::<Result<Vec<_>>>()
    })?
}

fn ser_sig17<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&sig17(*x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginStats {
    #[serde(serialize_with = "ser_sig17")]
    pub min: f64,
    #[serde(serialize_with = "ser_sig17")]
    pub median: f64,
    #[serde(serialize_with = "ser_sig17")]
    pub p99: f64,
    #[serde(serialize_with = "ser_sig17")]
    pub max: f64,
}

impl MarginStats {
    /// Order statistics of a non-empty sample (lower median, nearest-rank p99).
    pub fn from_margins(margins: &[f64]) -> Self {
        let mut v = margins.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let p99 = ((0.99 * n as f64).ceil() as usize).clamp(1, n) - 1;
        Self { min: v[0], median: v[(n - 1) / 2], p99: v[p99], max: v[n - 1] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationRecord {
    pub index: u64,
    pub child_seed: u64,
    pub report: BoundReport<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CampaignReport {
    pub schema_version: u32,
    pub config: CampaignConfig,
    pub violation_count: usize,
    pub violations: Vec<ViolationRecord>,
    pub margin_stats: MarginStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_secs: Option<f64>,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Pretty JSON; with `include_timing = false` the output depends only on
    /// the configuration.
    pub fn to_json(&self, include_timing: bool) -> String {
        let mut copy = self.clone();
        if !include_timing {
            copy.wall_time_secs = None;
        }
        serde_json::to_string_pretty(&copy).expect("report serializes")
    }
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    let start = Instant::now();
    let reports = evaluate_samples(cfg)?;
    let margins: Vec<f64> = reports.iter().map(|r| r.margin).collect();
    let violations: Vec<ViolationRecord> = reports
        .into_iter()
        .enumerate()
        .filter(|(_, r)| r.violated)
        .map(|(i, report)| ViolationRecord { index: i as u64, child_seed: derive_seed(cfg.seed, i as u64), report })
        .collect();
    Ok(CampaignReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        violation_count: violations.len(),
        violations,
        margin_stats: MarginStats::from_margins(&margins),
        wall_time_secs: Some(start.elapsed().as_secs_f64()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(theorem: Theorem, family: Family, samples: usize) -> CampaignConfig {
        CampaignConfig::new(theorem, family, samples, 42)
    }

    #[test]
    fn small_two_point_campaign_is_clean() {
        let r = run_campaign(&cfg(Theorem::TwoPoint, Family::Blaschke { max_degree: 5 }, 300)).unwrap();
        assert!(r.passed());
        assert!(r.margin_stats.min >= -1e-9);
        assert!(r.margin_stats.min <= r.margin_stats.median && r.margin_stats.p99 <= r.margin_stats.max);
    }

    #[test]
    fn real_part_family_violates() {
        let r = run_campaign(&cfg(Theorem::TwoPoint, Family::RealPart, 50)).unwrap();
        assert!(!r.passed());
        assert!(r.margin_stats.min < -1e-9);
        let v = &r.violations[0];
        let again = recheck(&r.config, v.index).unwrap();
        assert!((again.margin - v.report.margin).abs() <= 1e-12);
    }

    #[test]
    fn witnesses_meet_preconditions() {
        for theorem in [Theorem::TwoPoint, Theorem::FixedPoint] {
            let c = cfg(theorem, Family::DiscMix { max_degree: 3 }, 1);
            for i in 0..50 {
                let w = sample_witness(&c, i).unwrap();
                let b = w.b.unwrap();
                assert!(models::dist(&w.a, &b).unwrap() >= c.min_sep);
                for p in [&w.a, &b, &w.z] {
                    assert!(models::dist(p, &ModelPoint::disc(0.0, 0.0).unwrap()).unwrap() <= 3.0 + 1e-9);
                }
                if theorem == Theorem::FixedPoint {
                    assert!(models::dist(&w.f.eval(&b).unwrap(), &b).unwrap() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn incompatible_family_is_usage_error() {
        let bad = [
            cfg(Theorem::Punctured, Family::Blaschke { max_degree: 2 }, 10),
            cfg(Theorem::TwoPoint, Family::PuncturedExp { max_m: 2, max_c: 1.0 }, 10),
            cfg(Theorem::FixedPoint, Family::NearIdentity { eps: 0.1 }, 10),
            cfg(Theorem::TwoPoint, Family::RealPart, 0),
        ];
        for c in bad {
            assert!(matches!(run_campaign(&c), Err(HypError::Usage(_))), "{c:?}");
        }
    }

    #[test]
    fn json_is_thread_count_independent() {
        let mut c = cfg(Theorem::Punctured, Family::PuncturedExp { max_m: 3, max_c: 1.0 }, 64);
        c.threads = Some(1);
        let one = run_campaign(&c).unwrap().to_json(false);
        c.threads = Some(3);
        let three = run_campaign(&c).unwrap().to_json(false);
        assert_eq!(one, three);
        assert!(!one.contains("wall_time"));
        assert!(one.contains("\"schema_version\": 1"));
    }

    #[test]
    fn margin_stats_order() {
        let s = MarginStats::from_margins(&[3.0, 1.0, 2.0, 4.0]);
        assert_eq!((s.min, s.median, s.p99, s.max), (1.0, 2.0, 4.0, 4.0));
    }
}
