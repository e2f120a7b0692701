//! Small worked examples: translation growth on the half-plane, the
//! non-holomorphic `Re w`, and convergence transfer through the two-point
//! bound.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::Serialize;

use crate::bounds::{self, BoundReport};
use crate::error::{HypError, Result};
use crate::holomaps::HoloMap;
use crate::mobius::build_disc_automorphism;
use crate::models::{self, ModelPoint};
use crate::parse::split_spec;
use crate::sampling::{self, rng_from_seed};

/// One row of the half-plane table for `f_n(w) = w + 1/n²`, `a = 1`,
/// `z_n = 1/n` on the right half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfplaneRow {
    pub n: u64,
    /// `ρ(f_n(z_n), z_n) = log(1 + 1/n)`.
    pub disp_z: f64,
    /// `ρ(f_n(a), a) = log(1 + 1/n²)`.
    pub disp_a: f64,
    pub ratio: f64,
    /// `e^{ρ(z_n, a)} = n`.
    pub exp_dist: f64,
    pub ratio_over_exp: f64,
}

pub fn halfplane_growth(n_values: &[u64]) -> Result<Vec<HalfplaneRow>> {
    if n_values.is_empty() {
        return Err(HypError::Usage("no n values given".into()));
    }
    let a = ModelPoint::right(1.0, 0.0)?;
    n_values
        .iter()
        .map(|&n| {
            if n < 2 {
                return Err(HypError::Usage(format!("n must be at least 2, got {n}")));
            }
            let nf = n as f64;
            let f = HoloMap::half_plane_translate(1.0 / (nf * nf))?;
            let z = ModelPoint::right(1.0 / nf, 0.0)?;
            let disp_z = models::dist(&f.eval(&z)?, &z)?;
            let disp_a = models::dist(&f.eval(&a)?, &a)?;
            let ratio = disp_z / disp_a;
            let exp_dist = models::dist(&z, &a)?.exp();
            if (ratio / nf - 1.0).abs() > 2.0 / nf {
                return Err(HypError::Numerical(format!("ratio {ratio} too far from n = {n}")));
            }
            Ok(HalfplaneRow { n, disp_z, disp_a, ratio, exp_dist, ratio_over_exp: ratio / exp_dist })
        })
        .collect()
}

/// Outcome of sampling `ρ(Re u, Re v) ≤ ρ(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionFinding {
    pub pairs: usize,
    pub failures: usize,
    /// Largest `ρ(Re u, Re v) − ρ(u, v)` seen; negative means strict contraction.
    #[serde(serialize_with = "ser_sig17")]
    pub max_excess: f64,
}

fn ser_sig17<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&bounds::sig17(*x))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub schema_version: u32,
    pub contraction: ContractionFinding,
    /// Two-point check for `Re w` with `a = 0.3`, `b = −0.3`, `z = 0.5i`.
    pub violation: BoundReport<f64>,
    pub expected_violation_observed: bool,
}

pub const CONTRACTION_PAIRS: usize = 1000;
const CONTRACTION_SEED: u64 = 0;

/// `Re w` contracts `ρ` but fixes every real point, so the two-point bound
/// with real `a`, `b` would force it to be the identity.
pub fn counterexample_demo() -> Result<CounterexampleReport> {
    let f = HoloMap::RealPart;
    let mut rng = rng_from_seed(CONTRACTION_SEED);
    let mut failures = 0;
    let mut max_excess = f64::NEG_INFINITY;
    for _ in 0..CONTRACTION_PAIRS {
        let u = sampling::disc_point::<f64, _>(&mut rng, 3.0);
        let v = sampling::disc_point::<f64, _>(&mut rng, 3.0);
        let excess = models::dist(&f.eval(&u)?, &f.eval(&v)?)? - models::dist(&u, &v)?;
        max_excess = max_excess.max(excess);
        if excess > bounds::VIOLATION_TOL {
            failures += 1;
        }
    }
    let violation = bounds::check_two_point(
        &f,
        &ModelPoint::disc(0.3, 0.0)?,
        &ModelPoint::disc(-0.3, 0.0)?,
        &ModelPoint::disc(0.0, 0.5)?,
        None,
    )?;
    let expected_violation_observed = violation.violated && violation.rhs == 0.0 && violation.lhs > 0.0;
    Ok(CounterexampleReport {
        schema_version: super::SCHEMA_VERSION,
        contraction: ContractionFinding { pairs: CONTRACTION_PAIRS, failures, max_excess },
        violation,
        expected_violation_observed,
    })
}

/// Displacement budget `β(n)` for the convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Budget {
    /// `1/n²`
    InvSquare,
    /// `1/n^p`, `p > 1`
    InvPower { p: f64 },
    /// `r^n`, `0 < r < 1`
    Geometric { r: f64 },
}

impl Budget {
    pub fn value(&self, n: u64) -> f64 {
        let nf = n as f64;
        match *self {
            Budget::InvSquare => 1.0 / (nf * nf),
            Budget::InvPower { p } => nf.powf(-p),
            Budget::Geometric { r } => r.powf(nf),
        }
    }

    /// `Σ_{n≥1} β(n)` when a closed form is at hand.
    pub fn total(&self) -> Option<f64> {
        match *self {
            Budget::InvSquare => Some(std::f64::consts::PI.powi(2) / 6.0),
            Budget::InvPower { .. } => None,
            Budget::Geometric { r } => Some(r / (1.0 - r)),
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::InvSquare => f.write_str("inv_square"),
            Budget::InvPower { p } => write!(f, "inv_power:p={p}"),
            Budget::Geometric { r } => write!(f, "geometric:r={r}"),
        }
    }
}

impl FromStr for Budget {
    type Err = HypError;

    /// `inv_square`, `inv_power:p=P` (`P > 1`), `geometric:r=R` (`0 < R < 1`).
    /// Non-summable sequences such as `harmonic` are refused.
    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = split_spec(s)?;
        let budget = match name.as_str() {
            "inv_square" => Budget::InvSquare,
            "inv_power" => {
                let p: f64 = params.require("p")?;
                if !(p > 1.0 && p.is_finite()) {
                    return Err(HypError::Usage(format!("1/n^{p} is not summable; need p > 1")));
                }
                Budget::InvPower { p }
            }
            "geometric" => {
                let r: f64 = params.require("r")?;
                if !(r > 0.0 && r < 1.0) {
                    return Err(HypError::Usage(format!("r^n with r = {r} is not a summable decreasing budget")));
                }
                Budget::Geometric { r }
            }
            "harmonic" | "inv_n" | "inv_linear" => {
                return Err(HypError::Usage(format!("budget `{name}` is not summable")))
            }
            other => return Err(HypError::Usage(format!("unknown budget `{other}`"))),
        };
        params.finish()?;
        Ok(budget)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: u64,
    pub budget: f64,
    /// Family parameter of `f_n`; `t = 0` is the identity.
    pub t: f64,
    /// `ρ(f_n(a), a) + ρ(f_n(b), b)`.
    pub disp_ab: f64,
    /// `ρ(f_n(z), z)`.
    pub disp_z: f64,
    /// `K·β(n)`.
    pub bound: f64,
    pub partial_disp_z: f64,
    pub partial_bound: f64,
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    /// Two-point constant at `(z, a, b)`.
    pub constant: f64,
    /// `K·Σβ(n)` when the budget has a closed-form sum.
    pub limit: Option<f64>,
    pub rows: Vec<ConvergenceRow>,
}

const CONVERGENCE_CENTRE: Complex<f64> = Complex::new(0.3, 0.2);
const CONVERGENCE_TURN: f64 = 0.5;
const MAX_HALVINGS: u32 = 200;

/// `A_t ∘ B_t`: the automorphism with centre `t·(0.3+0.2i)` and angle `0.5t`
/// after `w(w + r)/(1 + r w)` with `r = 1 − t/2`.
fn convergence_map(t: f64) -> Result<HoloMap<f64>> {
    let centre = ModelPoint::disc(t * CONVERGENCE_CENTRE.re, t * CONVERGENCE_CENTRE.im)?;
    let aut = HoloMap::mobius(build_disc_automorphism(&centre, t * CONVERGENCE_TURN)?);
    let r = 1.0 - 0.5 * t;
    if r >= 1.0 - 1e-12 {
        return Ok(aut);
    }
    let b = HoloMap::blaschke(0.0, vec![Complex::new(0.0, 0.0), Complex::new(-r, 0.0)])?;
    HoloMap::compose(vec![aut, b])
}

/// Tabulates `ρ(f_n(z), z) ≤ K β(n)` for maps `f_n` whose displacement at
/// `a` and `b` fits in the budget.
pub fn convergence_demo(
    budget: Budget,
    z: &ModelPoint<f64>,
    a: &ModelPoint<f64>,
    b: &ModelPoint<f64>,
    rows: usize,
) -> Result<ConvergenceTable> {
    if rows == 0 {
        return Err(HypError::Usage("rows must be at least 1".into()));
    }
    let k = bounds::constant_two_point(z, a, b, false)?;
    let mut out = Vec::with_capacity(rows);
    let (mut partial_disp_z, mut partial_bound) = (0.0, 0.0);
    for n in 1..=rows as u64 {
        let beta = budget.value(n);
        let mut t = 1.0;
        let mut halvings = 0;
        let (f, disp_ab) = loop {
            let f = convergence_map(t)?;
            let d = models::dist(&f.eval(a)?, a)? + models::dist(&f.eval(b)?, b)?;
            if d <= beta {
                break (f, d);
            }
            halvings += 1;
            if halvings > MAX_HALVINGS {
                return Err(HypError::Numerical(format!("budget {beta} at n = {n} is below resolution")));
            }
            t *= 0.5;
        };
        let disp_z = models::dist(&f.eval(z)?, z)?;
        let bound = k * beta;
        partial_disp_z += disp_z;
        partial_bound += bound;
        out.push(ConvergenceRow {
            n,
            budget: beta,
            t,
            disp_ab,
            disp_z,
            bound,
            partial_disp_z,
            partial_bound,
            within: disp_z <= k * disp_ab + bounds::VIOLATION_TOL && disp_z <= bound + bounds::VIOLATION_TOL,
        });
    }
    Ok(ConvergenceTable { constant: k, limit: budget.total().map(|s| k * s), rows: out })
}

/// Writes rows as CSV with a header line.
pub fn write_csv<R: Serialize>(rows: &[R], path: &std::path::Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| HypError::Io(format!("{}: {e}", path.display())))?;
    for row in rows {
        w.serialize(row).map_err(|e| HypError::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
