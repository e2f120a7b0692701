//! End-to-end acceptance checks. Prints one PASS/FAIL line per check and
//! exits non-zero if any fails or overruns its time limit.

use std::time::{Duration, Instant};

use hypbound::bounds::Theorem;
use hypbound::covering::{self, cover_pi, degree_contour, normalized_lift, principal_lift, LiftedMap};
use hypbound::harness::{self, CampaignConfig};
use hypbound::mobius::axis_bound;
use hypbound::models::{dist, dist_oracle, half_sinh_cosh};
use hypbound::sampling::{self, rng_from_seed, Family};
use hypbound::{HoloMap, Mobius, Model, ModelPoint};
use num_complex::Complex;
use rand::Rng;

type Outcome = Result<String, String>;
/// Name, check, time limit in seconds.
type Check = (&'static str, fn() -> Outcome, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn random_point(model: Model, rng: &mut impl Rng) -> ModelPoint<f64> {
    match model {
        Model::Disc => sampling::disc_point(rng, 3.0),
        Model::UpperHalfPlane => {
            ModelPoint::upper(rng.gen_range(-3.0..3.0), 10f64.powf(rng.gen_range(-1.5..1.5))).unwrap()
        }
        Model::RightHalfPlane => {
            ModelPoint::right(10f64.powf(rng.gen_range(-1.5..1.5)), rng.gen_range(-3.0..3.0)).unwrap()
        }
        Model::PuncturedDisc => sampling::punctured_point(rng, 1e2),
    }
}

/// Punctured distance by quadrature: shortest ℍ-oracle length between `z̃`
/// and the deck translates of `ã` near it.
fn punctured_oracle(z: &ModelPoint<f64>, a: &ModelPoint<f64>) -> Result<f64, String> {
    let zt = principal_lift(z).map_err(e)?;
    let at = principal_lift(a).map_err(e)?;
    let centre = (zt.re() - at.re()).round() as i64;
    let mut best = f64::INFINITY;
    for k in centre - 3..=centre + 3 {
        let shifted = ModelPoint::upper(at.re() + k as f64, at.im()).map_err(e)?;
        best = best.min(dist_oracle(&zt, &shifted).map_err(e)?);
    }
    Ok(best)
}

fn metric_correctness() -> Outcome {
    let mut rng = rng_from_seed(1);
    let mut worst = 0.0f64;
    for model in [Model::Disc, Model::UpperHalfPlane, Model::RightHalfPlane, Model::PuncturedDisc] {
        for _ in 0..1000 {
            let u = random_point(model, &mut rng);
            let v = random_point(model, &mut rng);
            let closed = dist(&u, &v).map_err(e)?;
            let oracle = if model == Model::PuncturedDisc {
                punctured_oracle(&u, &v)?
            } else {
                dist_oracle(&u, &v).map_err(e)?
            };
            let r = rel(closed, oracle);
            worst = worst.max(r);
            ensure(r <= 1e-6, || format!("{model}: {closed} vs oracle {oracle}"))?;
        }
    }
    let k = dist(&ModelPoint::right(1.0, 0.0).unwrap(), &ModelPoint::right(2.0, 0.0).unwrap()).map_err(e)?;
    ensure((k - 2f64.ln()).abs() <= 1e-12, || format!("ρ(1,2) on the right half-plane = {k}"))?;
    Ok(format!("4000 pairs, worst rel err {worst:.1e}; right half-plane ρ(1,2) − ln 2 = {:.1e}", k - 2f64.ln()))
}

fn formula_identities() -> Outcome {
    let mut rng = rng_from_seed(2);
    let o = ModelPoint::disc(0.0, 0.0).unwrap();
    let (mut worst_formula, mut worst_pair) = (0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let u: ModelPoint<f64> = sampling::disc_point(&mut rng, 4.0);
        let v: ModelPoint<f64> = sampling::disc_point(&mut rng, 4.0);
        let uv = half_sinh_cosh(&u, &v).map_err(e)?;
        let u0 = half_sinh_cosh(&u, &o).map_err(e)?;
        let v0 = half_sinh_cosh(&v, &o).map_err(e)?;
        let nu = u.value().norm();
        let q = (1.0 - nu * nu).sqrt();
        let diff = (u.value() - v.value()).norm();
        let errs = [
            rel(u0.s, nu / q),
            rel(u0.c, 1.0 / q),
            rel(diff, uv.s / (u0.c * v0.c)),
            rel(diff / nu, uv.s / (u0.s * v0.c)),
        ];
        let formula = errs.iter().cloned().fold(0.0, f64::max);
        worst_formula = worst_formula.max(formula);
        ensure(formula <= 1e-10, || format!("identity error {formula:.2e} at u = {}, v = {}", u.value(), v.value()))?;
        for p in [uv, u0, v0] {
            let r = rel(p.c * p.c - p.s * p.s, 1.0);
            worst_pair = worst_pair.max(r);
            ensure(r <= 1e-12, || format!("c² − s² off by {r:.2e}"))?;
        }
    }
    Ok(format!("10^4 points, worst formula rel err {worst_formula:.1e}, worst |c²−s²−1| {worst_pair:.1e}"))
}

fn two_point_campaign() -> Outcome {
    let family = Family::DiscMix { max_degree: 5 };
    let plain_cfg = CampaignConfig::new(Theorem::TwoPoint, family, 10_000, 20_240_601);
    let sharp_cfg = CampaignConfig { theorem: Theorem::TwoPointSharp, ..plain_cfg.clone() };
    let plain = harness::evaluate_samples(&plain_cfg).map_err(e)?;
    let sharp = harness::evaluate_samples(&sharp_cfg).map_err(e)?;
    let plain_v = plain.iter().filter(|r| r.violated).count();
    let sharp_v = sharp.iter().filter(|r| r.violated).count();
    ensure(plain_v == 0 && sharp_v == 0, || format!("{plain_v} plain and {sharp_v} sharp violations"))?;
    for (i, (p, s)) in plain.iter().zip(&sharp).enumerate() {
        ensure(p.lhs == s.lhs, || format!("sample {i}: witnesses differ between runs"))?;
        ensure(s.rhs <= p.rhs, || format!("sample {i}: sharp rhs {} > plain rhs {}", s.rhs, p.rhs))?;
    }
    let report = harness::run_campaign(&plain_cfg).map_err(e)?;
    ensure(report.margin_stats.min >= -1e-9, || "margin below tolerance".into())?;
    let min_sharp = sharp.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    Ok(format!(
        "10^4 samples, 0 violations; min margin plain {:.3e}, sharp {min_sharp:.3e}; sharp rhs ≤ plain rhs everywhere",
        report.margin_stats.min
    ))
}

fn fixed_point_campaign() -> Outcome {
    let mut summary = Vec::new();
    for (family, samples) in [(Family::Blaschke { max_degree: 5 }, 10_000), (Family::DiscMix { max_degree: 5 }, 10_000)]
    {
        let cfg = CampaignConfig::new(Theorem::FixedPoint, family, samples, 7);
        let reports = harness::evaluate_samples(&cfg).map_err(e)?;
        let violations = reports.iter().filter(|r| r.violated).count();
        ensure(violations == 0, || format!("{family}: {violations} violations"))?;
        let min_m = reports.iter().map(|r| r.constant).fold(f64::INFINITY, f64::min);
        ensure(min_m > 1.0, || format!("{family}: M = {min_m} ≤ 1"))?;
        let min_margin = reports.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
        summary.push(format!("{family}: min margin {min_margin:.3e}, min M {min_m:.4}"));
    }
    Ok(format!("2×10^4 samples, 0 violations; {}", summary.join("; ")))
}

fn axis_displacement() -> Outcome {
    let cfg = CampaignConfig::new(Theorem::Axis, Family::DiscAutomorphism, 10_000, 11);
    let (mut min_margin, mut worst_identity) = (f64::INFINITY, 0.0f64);
    for i in 0..cfg.samples as u64 {
        let w = harness::sample_witness(&cfg, i).map_err(e)?;
        let h = match &w.f {
            HoloMap::MobiusAut { map } => *map,
            _ => return Err("axis sample without an automorphism".into()),
        };
        let r = axis_bound(&w.z, &w.a, &h).map_err(e)?;
        min_margin = min_margin.min(r.bound.margin);
        worst_identity = worst_identity.max(r.identity_rel_err);
        ensure(r.bound.margin >= -1e-9, || format!("sample {i}: margin {}", r.bound.margin))?;
        ensure(r.identity_rel_err <= 1e-9, || format!("sample {i}: identity rel err {:.2e}", r.identity_rel_err))?;
    }
    let two = Complex::<f64>::new(2.0, 0.0);
    let zero = Complex::new(0.0, 0.0);
    let one = Complex::new(1.0, 0.0);
    let dilate = Mobius::new(two, zero, zero, one, Model::UpperHalfPlane).map_err(e)?;
    let w = ModelPoint::upper(1.0, 1.0).unwrap();
    let c = ModelPoint::upper(0.0, 1.0).unwrap();
    let r = axis_bound(&w, &c, &dilate).map_err(e)?;
    ensure((r.identity_lhs - 0.5).abs() <= 1e-9, || format!("closed witness gives {}", r.identity_lhs))?;
    ensure(!r.bound.violated, || "closed witness violates the bound".into())?;
    Ok(format!(
        "10^4 samples, min margin {min_margin:.3e}, worst identity rel err {worst_identity:.1e}; closed witness sinh = {:.12}",
        r.identity_lhs
    ))
}

fn degree_checks() -> Outcome {
    let mut worst = 0.0f64;
    let mut check = |f: &HoloMap<f64>, m: u32| -> Result<(), String> {
        let d = degree_contour(f).map_err(e)?;
        worst = worst.max(d.residual);
        ensure(d.value == m && d.residual < 1e-6, || format!("{f:?}: got {} (residual {:.1e})", d.value, d.residual))
    };
    for m in 1..=5 {
        check(&HoloMap::punctured_power(0.4, m).map_err(e)?, m)?;
        for c in [0.0, 0.5, 2.0] {
            check(&HoloMap::punctured_exp(-1.1, m, c).map_err(e)?, m)?;
        }
    }
    let mut compositions = 0;
    for m1 in 1..=6u32 {
        for m2 in 1..=6 / m1 {
            let f = HoloMap::compose(vec![
                HoloMap::punctured_exp(0.2, m1, 1.0).map_err(e)?,
                HoloMap::punctured_power(2.0, m2).map_err(e)?,
            ])
            .map_err(e)?;
            check(&f, m1 * m2)?;
            compositions += 1;
        }
    }
    let triple = HoloMap::compose(vec![
        HoloMap::punctured_power(0.0, 2).map_err(e)?,
        HoloMap::punctured_exp(0.0, 1, 2.0).map_err(e)?,
        HoloMap::punctured_power(0.3, 3).map_err(e)?,
    ])
    .map_err(e)?;
    check(&triple, 6)?;
    Ok(format!(
        "m = 1..5 for both families, {} compositions up to degree 6; worst residual {worst:.1e}",
        compositions + 1
    ))
}

fn lift_checks() -> Outcome {
    let family = Family::PuncturedExp { max_m: 4, max_c: 2.0 };
    let mut rng = rng_from_seed(5);
    let (mut worst_eq, mut worst_per, mut worst_norm) = (0.0f64, 0.0f64, 0.0f64);
    for j in 0..20u64 {
        let f: HoloMap<f64> = sampling::sample_map(&family, 1000 + j).map_err(e)?;
        let m = f.declared_degree().unwrap();
        let anchor = ModelPoint::upper(rng.gen_range(-0.5..0.5), rng.gen_range(0.05..0.6)).unwrap();
        let lift = LiftedMap::new(f.clone(), anchor).map_err(e)?;
        for _ in 0..100 {
            let zeta = ModelPoint::upper(rng.gen_range(-1.5..1.5), rng.gen_range(0.02..0.8)).unwrap();
            let ft = lift.eval(&zeta).map_err(e)?;
            let lhs = cover_pi(&ft).map_err(e)?.value();
            let rhs = f.eval(&cover_pi(&zeta).map_err(e)?).map_err(e)?.value();
            worst_eq = worst_eq.max((lhs - rhs).norm());
            ensure((lhs - rhs).norm() <= 1e-9, || format!("map {j}: π∘f̃ − f∘π = {:.2e}", (lhs - rhs).norm()))?;
            let next = ModelPoint::upper(zeta.re() + 1.0, zeta.im()).unwrap();
            let shifted = lift.eval(&next).map_err(e)?.value() - ft.value();
            let err = (shifted - Complex::new(m as f64, 0.0)).norm();
            worst_per = worst_per.max(err);
            ensure(err <= 1e-9, || format!("map {j}: f̃(ζ+1) − f̃(ζ) = {shifted}, expected {m}"))?;
        }
        let h = HoloMap::punctured_power(rng.gen_range(0.0..std::f64::consts::TAU), m).map_err(e)?;
        let (_, disp) = normalized_lift(&f, &h, &anchor).map_err(e)?;
        let a = cover_pi(&anchor).map_err(e)?;
        let direct = covering::punctured_dist(&f.eval(&a).map_err(e)?, &h.eval(&a).map_err(e)?).map_err(e)?;
        worst_norm = worst_norm.max((disp - direct).abs());
        ensure((disp - direct).abs() <= 1e-9, || format!("map {j}: lift displacement {disp} vs {direct}"))?;
    }
    Ok(format!(
        "20 maps × 100 points; worst |π∘f̃ − f∘π| {worst_eq:.1e}, periodicity {worst_per:.1e}, normalized displacement {worst_norm:.1e}"
    ))
}

fn punctured_campaign() -> Outcome {
    let cfg = CampaignConfig::new(Theorem::Punctured, Family::PuncturedExp { max_m: 4, max_c: 2.0 }, 1000, 3);
    let report = harness::run_campaign(&cfg).map_err(e)?;
    ensure(report.passed(), || format!("{} violations", report.violation_count))?;
    Ok(format!("10^3 samples, 0 violations, min margin {:.3e}", report.margin_stats.min))
}

fn halfplane_example() -> Outcome {
    let rows = harness::halfplane_growth(&[10, 100, 1000, 10_000]).map_err(e)?;
    for r in &rows {
        let n = r.n as f64;
        ensure((r.ratio / n - 1.0).abs() <= 2.0 / n, || format!("n = {}: ratio {}", r.n, r.ratio))?;
    }
    ensure((rows[0].ratio - 9.5786).abs() < 5e-5, || format!("n = 10: ratio {}", rows[0].ratio))?;
    Ok(format!("ratios {}", rows.iter().map(|r| format!("{:.4}", r.ratio)).collect::<Vec<_>>().join(", ")))
}

fn counterexample() -> Outcome {
    let r = harness::counterexample_demo().map_err(e)?;
    ensure(r.contraction.failures == 0, || format!("{} contraction failures", r.contraction.failures))?;
    ensure(r.violation.violated && r.violation.rhs == 0.0, || "no violation reported".into())?;
    let expect = 2.0 * 0.5f64.atanh();
    ensure((r.violation.lhs - expect).abs() <= 1e-12, || format!("lhs {}", r.violation.lhs))?;
    Ok(format!(
        "{} contraction pairs, 0 failures; two-point lhs {:.4}, rhs 0, violated",
        r.contraction.pairs, r.violation.lhs
    ))
}

fn determinism() -> Outcome {
    let configs = [
        CampaignConfig::new(Theorem::TwoPoint, Family::DiscMix { max_degree: 5 }, 3000, 42),
        CampaignConfig::new(Theorem::FixedPoint, Family::Blaschke { max_degree: 4 }, 2000, 43),
        CampaignConfig::new(Theorem::Punctured, Family::PuncturedExp { max_m: 4, max_c: 2.0 }, 500, 44),
        CampaignConfig::new(Theorem::TwoPoint, Family::RealPart, 200, 45),
    ];
    for base in configs {
        let mut reference: Option<String> = None;
        for threads in [1, 4, 8, 4] {
            let cfg = CampaignConfig { threads: Some(threads), ..base.clone() };
            let json = harness::run_campaign(&cfg).map_err(e)?.to_json(false);
            match &reference {
                None => reference = Some(json),
                Some(r) => ensure(*r == json, || format!("{} differs at {threads} threads", base.theorem))?,
            }
        }
    }
    Ok("4 campaigns byte-identical at 1, 4, 8 threads and on re-run".into())
}

fn main() {
    let checks: [Check; 11] = [
        ("metric correctness", metric_correctness, 10),
        ("half-distance identities", formula_identities, 5),
        ("two-point campaign", two_point_campaign, 60),
        ("fixed-point campaign", fixed_point_campaign, 60),
        ("axis displacement", axis_displacement, 60),
        ("degree", degree_checks, 10),
        ("lifts", lift_checks, 60),
        ("punctured campaign", punctured_campaign, 120),
        ("half-plane example", halfplane_example, 1),
        ("counterexample", counterexample, 60),
        ("determinism", determinism, 120),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > Duration::from_secs(*limit) => {
                Err(format!("{msg} (took {elapsed:.2?}, limit {limit}s)"))
            }
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{elapsed:.2?}]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
