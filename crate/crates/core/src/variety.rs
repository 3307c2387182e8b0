//! Counting common zeros of polynomials over `F_p`.

use crate::decompose::PipelineConfig;
use crate::error::{Error, Result};
use crate::factor::{measurable_table, regularize, PolynomialFactor};
use crate::ffpoly::MultiPoly;
use crate::field::{FieldCtx, Points};
use crate::rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub const DEFAULT_REDUCED_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Exhaustive,
    Regularized,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarietyReport {
    pub exact_count: Option<u64>,
    pub approx_count: Option<f64>,
    /// Number `c'` of polynomials in the regular factor.
    pub reduced_dimension: Option<usize>,
    /// Zeros of the reduced system in `F_p^{c'}`.
    pub reduced_zeros: Option<u64>,
    /// Regularity level the factor was certified at.
    pub level: Option<u32>,
    pub empty: bool,
    pub method: CountMethod,
}

fn check_shape(ctx: FieldCtx, n: usize, gens: &[MultiPoly]) -> Result<()> {
    if gens.iter().any(|g| g.ctx() != ctx || g.n() != n) {
        return Err(Error::input("generators disagree on field or arity"));
    }
    Ok(())
}

pub fn count_points_exact(ctx: FieldCtx, n: usize, gens: &[MultiPoly], enum_cap: u64) -> Result<VarietyReport> {
    check_shape(ctx, n, gens)?;
    let size = ctx.domain_size(n, enum_cap, "domain p^n (exact count)")?;
    let mut count = 0u64;
    let mut pts = Points::new(ctx.p(), n);
    for _ in 0..size {
        if gens.iter().all(|g| g.eval_unchecked(pts.current()) == 0) {
            count += 1;
        }
        pts.advance();
    }
    Ok(VarietyReport {
        exact_count: Some(count),
        approx_count: None,
        reduced_dimension: None,
        reduced_zeros: None,
        level: None,
        empty: count == 0,
        method: CountMethod::Exhaustive,
    })
}

/// `p^n` times the fraction of sampled points that are common zeros.
pub fn count_points_sampled(ctx: FieldCtx, n: usize, gens: &[MultiPoly], samples: u64, seed: u64) -> Result<VarietyReport> {
    check_shape(ctx, n, gens)?;
    if samples == 0 {
        return Err(Error::input("samples must be at least 1"));
    }
    let mut r = rng::rng_from(seed);
    let mut x = vec![0u32; n];
    let mut hits = 0u64;
    for _ in 0..samples {
        for v in x.iter_mut() {
            *v = r.gen_range(0..ctx.p());
        }
        if gens.iter().all(|g| g.eval_unchecked(&x) == 0) {
            hits += 1;
        }
    }
    Ok(VarietyReport {
        exact_count: None,
        approx_count: Some(ctx.size_f64(n) * hits as f64 / samples as f64),
        reduced_dimension: None,
        reduced_zeros: None,
        level: None,
        empty: hits == 0,
        method: CountMethod::Sampled,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountConfig {
    /// Base regularity level.
    pub s: u32,
    /// When set, the level is raised until it is at least `u + c' + 1`,
    /// which makes `|approx - exact| <= p^-u * exact`.
    pub accuracy_u: Option<u32>,
    pub reduced_cap: u64,
    pub pipeline: PipelineConfig,
}

impl Default for CountConfig {
    fn default() -> Self {
        CountConfig {
            s: 1,
            accuracy_u: None,
            reduced_cap: DEFAULT_REDUCED_CAP,
            pipeline: PipelineConfig::default(),
        }
    }
}

/// Regularize the generators, express each as a table on the atoms and
/// count zeros of the reduced system.
pub fn count_points_regularized(ctx: FieldCtx, n: usize, gens: &[MultiPoly], cfg: &CountConfig) -> Result<VarietyReport> {
    check_shape(ctx, n, gens)?;
    let base = PolynomialFactor::new(ctx, n, gens.to_vec())?;
    let mut level = cfg.s;
    for _ in 0..16 {
        let reg = regularize(&base, level, &cfg.pipeline)?;
        if !reg.complete {
            return Err(Error::RegularizationFailed(format!(
                "iteration budget {} exhausted at level {level}",
                cfg.pipeline.iteration_budget
            )));
        }
        let c = reg.factor.len();
        if let Some(u) = cfg.accuracy_u {
            let wanted = u + c as u32 + 1;
            if wanted > level {
                level = wanted;
                continue;
            }
        }
        let reduced = ctx.domain_size(c, cfg.reduced_cap, "reduced space p^c'")?;
        let tables = gens
            .iter()
            .map(|g| {
                let m = measurable_table(g, &reg.factor, cfg.pipeline.enum_cap, cfg.reduced_cap)?;
                if !m.exact {
                    return Err(Error::Internal(
                        "a generator is not measurable over its own regularization".into(),
                    ));
                }
                Ok(m.table)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut zeros = 0u64;
        let mut pts = Points::new(ctx.p(), c);
        for _ in 0..reduced {
            if tables.iter().all(|t| t.get(pts.current()) == 0) {
                zeros += 1;
            }
            pts.advance();
        }
        let scale = (ctx.p() as f64).powi(n as i32 - c as i32);
        return Ok(VarietyReport {
            exact_count: None,
            approx_count: Some(scale * zeros as f64),
            reduced_dimension: Some(c),
            reduced_zeros: Some(zeros),
            level: Some(level),
            empty: zeros == 0,
            method: CountMethod::Regularized,
        });
    }
    Err(Error::RegularizationFailed("accuracy level did not stabilize".into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionProfile {
    pub exact_count: u64,
    pub reduced_dimension: usize,
    pub reduced_zeros: u64,
    pub level: u32,
    pub s: u32,
    /// `p^{n-c'} (1 - p^-s)`.
    pub chevalley_warning_bound: f64,
    pub chevalley_warning_holds: bool,
    /// `floor(p^{n/d - c})` with `d` the maximum degree.
    pub ax_katz_bound: f64,
    pub ax_katz_holds: bool,
    /// Count lies in `i p^{n-c'} (1 +- p^{c'-level})` for `i` the reduced zero count.
    pub in_predicted_interval: bool,
}

/// Exact count plus the structural lower bounds it must satisfy. The
/// factor is regularized at level `s + c' + 1`.
pub fn solution_profile(ctx: FieldCtx, n: usize, gens: &[MultiPoly], s: u32, cfg: &CountConfig) -> Result<SolutionProfile> {
    let exact = count_points_exact(ctx, n, gens, cfg.pipeline.enum_cap)?.exact_count.unwrap();
    let reg = count_points_regularized(
        ctx,
        n,
        gens,
        &CountConfig {
            s: cfg.s.max(1),
            accuracy_u: Some(s),
            ..cfg.clone()
        },
    )?;
    let c_red = reg.reduced_dimension.unwrap();
    let zeros = reg.reduced_zeros.unwrap();
    let level = reg.level.unwrap();
    let p = ctx.p() as f64;
    let unit = p.powi(n as i32 - c_red as i32);
    let cw = unit * (1.0 - p.powi(-(s as i32)));
    let d = gens.iter().map(MultiPoly::degree).max().unwrap_or(0).max(1) as f64;
    let ak = p.powf(n as f64 / d - gens.len() as f64).floor();
    let slack = p.powi(c_red as i32 - level as i32);
    let lo = zeros as f64 * unit * (1.0 - slack) - 1e-9;
    let hi = zeros as f64 * unit * (1.0 + slack) + 1e-9;
    let nonempty = exact > 0;
    Ok(SolutionProfile {
        exact_count: exact,
        reduced_dimension: c_red,
        reduced_zeros: zeros,
        level,
        s,
        chevalley_warning_bound: cw,
        chevalley_warning_holds: !nonempty || exact as f64 >= cw - 1e-9,
        ax_katz_bound: ak,
        ax_katz_holds: !nonempty || exact as f64 >= ak,
        in_predicted_interval: (lo..=hi).contains(&(exact as f64)),
    })
}
