//! Low-rank decompositions of biased polynomials.
//!
//! `approx_decompose` writes `f` as a function of derivatives `D_h f` that
//! is correct on most points; `exact_decompose` regularizes those
//! derivatives and reads `f` off the atoms; `quadratic_rank` is the exact
//! rank in degree two.
//!
//! The decoder for a tuple of derivative values needs the phase histogram of
//! `D_{a.z} f(x)` over all nonzero `a` in `F_p^k`. Two routes produce it:
//! a coset sum over `x + span(z)` when `f` is tabulated, and Newton forward
//! differences from the tuple alone. They give identical integer histograms.

use std::collections::BTreeMap;

use crate::bias::{bias_of_table, exact_bias, sampled_bias, CharacterSum, DEFAULT_ENUM_CAP};
use crate::error::{Error, Result};
use crate::factor::{measurable_table, regularize, PolynomialFactor, DEFAULT_SEARCH_CAP};
use crate::ffpoly::{GammaTable, MultiPoly};
use crate::field::{point_index, FieldCtx, Points};
use crate::linalg;
use crate::rng;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Knobs shared by the decomposition and regularization pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub t: u32,
    pub seed: u64,
    pub retries: usize,
    /// Replaces `k = t + 2s + 3` when set.
    pub k_override: Option<usize>,
    pub enum_cap: u64,
    /// Sample count used when `p^n` exceeds `enum_cap`.
    pub samples: u64,
    /// Cap on `p^c` for combination scans and dense outer tables.
    pub search_cap: u64,
    /// Cap on `p^k` for the Newton decoder.
    pub decoder_cap: u64,
    pub iteration_budget: usize,
    /// Skip the bias precondition when it cannot be verified.
    pub trust_bias: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            t: 2,
            seed: 0,
            retries: 16,
            k_override: None,
            enum_cap: DEFAULT_ENUM_CAP,
            samples: 20_000,
            search_cap: DEFAULT_SEARCH_CAP,
            decoder_cap: 10_000_000,
            iteration_budget: 64,
            trust_bias: false,
        }
    }
}

/// Directions `z_1..z_k` and the exponent box `{b : sum b_j <= d}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeBasis {
    pub k: usize,
    pub z: Vec<Vec<u32>>,
    /// Nonzero members, ordered by sum then lexicographically.
    pub basis: Vec<Vec<u32>>,
}

/// All nonzero `b` in `{0..p-1}^k` with `sum b_j <= d`, graded order.
pub fn basis_vectors(p: u32, k: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(p: u32, k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left.min(p - 1) {
            cur.push(v);
            rec(p, k, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(p, k, d, &mut Vec::with_capacity(k), &mut out);
    out.retain(|b| b.iter().any(|&v| v != 0));
    out.sort_by_key(|b| (b.iter().sum::<u32>(), b.clone()));
    out
}

impl DerivativeBasis {
    pub fn sample(ctx: FieldCtx, n: usize, d: u32, k: usize, rng: &mut rng::Rng) -> Self {
        let z = (0..k)
            .map(|_| (0..n).map(|_| rng.gen_range(0..ctx.p())).collect())
            .collect();
        DerivativeBasis {
            k,
            z,
            basis: basis_vectors(ctx.p(), k, d),
        }
    }

    /// `b . z` in `F_p^n`.
    pub fn direction(&self, ctx: FieldCtx, b: &[u32]) -> Vec<u32> {
        let n = self.z.first().map_or(0, Vec::len);
        let mut h = vec![0u32; n];
        for (&bj, zj) in b.iter().zip(&self.z) {
            for (hi, &zi) in h.iter_mut().zip(zj) {
                *hi = ctx.add(*hi, ctx.mul(bj, zi));
            }
        }
        h
    }
}

/// All `b'` with `0 <= b'_j <= b_j`, lexicographic.
fn sub_box(b: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(b.len())];
    for &bj in b {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=bj).map(move |v| {
                    let mut q = prefix.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

fn checked_size(p: u32, k: usize) -> Option<u64> {
    (p as u64).checked_pow(k as u32)
}

/// `argmin_l |avg - e(-l) mu|` over `l`, smallest `l` on ties, where `avg`
/// is the mean phase described by `hist` (counts over nonzero `a`).
pub fn decode_phase_histogram(ctx: FieldCtx, hist: &[u64], mu: (f64, f64)) -> u32 {
    let avg = CharacterSum::from_histogram(ctx, hist, 0);
    let table = ctx.character_table();
    let mut best = (0u32, f64::INFINITY);
    for l in 0..ctx.p() {
        // e(-l) = conj(e(l))
        let (c, s) = table[l as usize];
        let (er, ei) = (c * mu.0 + s * mu.1, c * mu.1 - s * mu.0);
        let dist = (avg.re - er).hypot(avg.im - ei);
        if dist < best.1 - 1e-12 {
            best = (l, dist);
        }
    }
    best.0
}

/// Outer function of an approximate decomposition: decoded values of the
/// tuples seen during construction, Newton reconstruction for the rest.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeDecoder {
    ctx: FieldCtx,
    k: usize,
    basis: Vec<Vec<u32>>,
    mu: (f64, f64),
    observed: BTreeMap<Vec<u32>, u32>,
    /// For each basis member, `(tuple slot, coefficient)` pairs giving its
    /// forward difference in terms of the tuple.
    differences: Vec<Vec<(usize, u32)>>,
}

impl DerivativeDecoder {
    fn new(ctx: FieldCtx, k: usize, basis: Vec<Vec<u32>>, mu: (f64, f64)) -> Self {
        let slot: BTreeMap<&Vec<u32>, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let differences = basis
            .iter()
            .map(|b| {
                let mut terms = Vec::new();
                for sub in sub_box(b) {
                    if sub.iter().all(|&v| v == 0) {
                        continue;
                    }
                    let gap: u32 = b.iter().zip(&sub).map(|(x, y)| x - y).sum();
                    let mut coeff = b
                        .iter()
                        .zip(&sub)
                        .fold(1u32, |acc, (&bb, &ss)| ctx.mul(acc, ctx.binomial_small(bb, ss)));
                    if gap % 2 == 1 {
                        coeff = ctx.neg(coeff);
                    }
                    terms.push((slot[&sub], coeff));
                }
                terms
            })
            .collect();
        DerivativeDecoder {
            ctx,
            k,
            basis,
            mu,
            observed: BTreeMap::new(),
            differences,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn mu(&self) -> (f64, f64) {
        self.mu
    }

    pub fn observed(&self) -> &BTreeMap<Vec<u32>, u32> {
        &self.observed
    }

    /// Phase histogram of `D_{a.z} f(x)` over nonzero `a`, from the tuple
    /// `(D_{b.z} f(x))_b` alone.
    pub fn newton_histogram(&self, tuple: &[u32], cap: u64) -> Result<Vec<u64>> {
        let ctx = self.ctx;
        let p = ctx.p();
        let size = checked_size(p, self.k)
            .filter(|&s| s <= cap)
            .ok_or_else(|| Error::cap("Newton decoder p^k", ctx.size_f64(self.k), cap as f64))?
            as usize;
        let mut grid = vec![0u32; size];
        for (b, terms) in self.basis.iter().zip(&self.differences) {
            let delta = terms
                .iter()
                .fold(0u32, |acc, &(i, c)| ctx.add(acc, ctx.mul(c, tuple[i])));
            grid[point_index(p, b)] = delta;
        }
        // v(a) = sum_{b <= a} C(a, b) delta_b, one coordinate at a time
        let binom: Vec<Vec<u32>> = (0..p)
            .map(|a| (0..p).map(|b| ctx.binomial_small(a, b)).collect())
            .collect();
        let mut line = vec![0u32; p as usize];
        for axis in 0..self.k {
            let stride = (p as usize).pow((self.k - 1 - axis) as u32);
            for start in 0..size {
                if !(start / stride).is_multiple_of(p as usize) {
                    continue;
                }
                for (a, slot) in line.iter_mut().enumerate() {
                    let mut acc = 0u32;
                    for (b, row) in binom[a].iter().enumerate().take(a + 1) {
                        acc = ctx.add(acc, ctx.mul(*row, grid[start + b * stride]));
                    }
                    *slot = acc;
                }
                for (a, &v) in line.iter().enumerate() {
                    grid[start + a * stride] = v;
                }
            }
        }
        let mut hist = vec![0u64; p as usize];
        for &v in &grid[1..] {
            hist[v as usize] += 1;
        }
        Ok(hist)
    }

    pub fn decode_newton(&self, tuple: &[u32], cap: u64) -> Result<u32> {
        Ok(decode_phase_histogram(self.ctx, &self.newton_histogram(tuple, cap)?, self.mu))
    }

    pub fn eval(&self, tuple: &[u32], cap: u64) -> Result<u32> {
        match self.observed.get(tuple) {
            Some(&v) => Ok(v),
            None => self.decode_newton(tuple, cap),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OuterFunction {
    Table(GammaTable),
    Derivative(DerivativeDecoder),
}

/// `f ~ Gamma(g_1, ..., g_c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub polys: Vec<MultiPoly>,
    pub gamma: OuterFunction,
    /// `Some(h)` when the polynomial is `D_h f`.
    pub directions: Vec<Option<Vec<u32>>>,
    pub claimed_error: f64,
    pub exact: bool,
    pub seed: u64,
    pub k: usize,
    /// Sampling attempts used (1 = first try succeeded).
    pub attempts: usize,
}

impl Decomposition {
    /// Decomposition with a dense outer table and no derivative provenance.
    pub fn from_table(polys: Vec<MultiPoly>, table: GammaTable) -> Result<Self> {
        if table.arity() != polys.len() {
            return Err(Error::input("outer table arity differs from the number of polynomials"));
        }
        Ok(Decomposition {
            directions: vec![None; polys.len()],
            polys,
            gamma: OuterFunction::Table(table),
            claimed_error: 1.0,
            exact: false,
            seed: 0,
            k: 0,
            attempts: 0,
        })
    }

    fn trivial(f: &MultiPoly, seed: u64) -> Self {
        Decomposition {
            polys: Vec::new(),
            gamma: OuterFunction::Table(GammaTable::constant(f.ctx(), 0, f.constant_term())),
            directions: Vec::new(),
            claimed_error: 0.0,
            exact: true,
            seed,
            k: 0,
            attempts: 1,
        }
    }

    pub fn tuple(&self, x: &[u32]) -> Vec<u32> {
        self.polys.iter().map(|g| g.eval_unchecked(x)).collect()
    }

    pub fn eval(&self, x: &[u32], decoder_cap: u64) -> Result<u32> {
        let y = self.tuple(x);
        match &self.gamma {
            OuterFunction::Table(t) => Ok(t.get(&y)),
            OuterFunction::Derivative(d) => d.eval(&y, decoder_cap),
        }
    }

    pub fn to_json(&self) -> Value {
        let gamma = match &self.gamma {
            OuterFunction::Table(t) => json!({
                "kind": "table",
                "arity": t.arity(),
                "order": "lexicographic",
                "values": t.values(),
            }),
            OuterFunction::Derivative(d) => json!({
                "kind": "derivative_decoder",
                "k": d.k,
                "basis": d.basis,
                "mu": [d.mu.0, d.mu.1],
                "observed": d.observed.iter().map(|(t, v)| json!({"tuple": t, "value": v})).collect::<Vec<_>>(),
            }),
        };
        json!({
            "polys": self.polys.iter().map(MultiPoly::to_canonical_string).collect::<Vec<_>>(),
            "directions": self.directions,
            "gamma": gamma,
            "claimed_error": self.claimed_error,
            "exact": self.exact,
            "seed": self.seed,
            "k": self.k,
            "attempts": self.attempts,
        })
    }
}

fn bias_estimate(f: &MultiPoly, cfg: &PipelineConfig) -> Result<CharacterSum> {
    match exact_bias(f, cfg.enum_cap) {
        Err(Error::CapExceeded { .. }) => sampled_bias(f, cfg.samples, rng::derive_seed(cfg.seed, 0xb1a5)),
        other => other,
    }
}

fn check_bias(mu: &CharacterSum, p: u32, s: u32, trust: bool) -> Result<()> {
    let threshold = (p as f64).powi(-(s as i32));
    let slack = if mu.is_exact() { 1e-9 } else { 3.0 / (mu.sample_count as f64).sqrt() };
    if !trust && mu.magnitude() + slack < threshold {
        return Err(Error::precondition(format!(
            "|bias| = {} is below p^-s = {threshold}",
            mu.magnitude()
        )));
    }
    Ok(())
}

/// One sampled set of directions with its decoder and measured error.
struct Attempt {
    dec: Decomposition,
    error: f64,
}

fn attempt_exhaustive(f: &MultiPoly, table: &[u32], mu: &CharacterSum, d: u32, k: usize, seed: u64) -> Result<Attempt> {
    let ctx = f.ctx();
    let p = ctx.p();
    let n = f.n();
    let mut r = rng::rng_from(seed);
    let basis = DerivativeBasis::sample(ctx, n, d, k, &mut r);
    let dirs: Vec<Vec<u32>> = basis.basis.iter().map(|b| basis.direction(ctx, b)).collect();
    let scale = checked_size(p, k).ok_or_else(|| Error::Unsupported("p^k overflows 64 bits".into()))?;

    // cosets of span(z): coordinates under the annihilator
    let annihilator = linalg::null_space(ctx, &basis.z, n);
    let rank = n - annihilator.len();
    let mult = scale / checked_size(p, rank).unwrap();
    let coset_of = |x: &[u32]| -> usize {
        let y: Vec<u32> = annihilator
            .iter()
            .map(|u| u.iter().zip(x).fold(0, |acc, (&a, &b)| ctx.add(acc, ctx.mul(a, b))))
            .collect();
        point_index(p, &y)
    };
    let mut coset_hist = vec![vec![0u64; p as usize]; ctx.size_f64(annihilator.len()) as usize];
    let points: Vec<Vec<u32>> = Points::new(p, n).collect();
    let cosets: Vec<usize> = points.iter().map(|x| coset_of(x)).collect();
    for (&c, &v) in cosets.iter().zip(table) {
        coset_hist[c][v as usize] += 1;
    }

    let mut decoder = DerivativeDecoder::new(ctx, k, basis.basis.clone(), (mu.re, mu.im));
    let mut wrong = 0u64;
    let mut shifted = vec![0u32; n];
    for (i, x) in points.iter().enumerate() {
        let fx = table[i];
        let tuple: Vec<u32> = dirs
            .iter()
            .map(|h| {
                for ((s, &a), &b) in shifted.iter_mut().zip(x).zip(h) {
                    *s = ctx.add(a, b);
                }
                ctx.sub(table[point_index(p, &shifted)], fx)
            })
            .collect();
        let value = match decoder.observed.get(&tuple) {
            Some(&v) => v,
            None => {
                let row = &coset_hist[cosets[i]];
                let mut hist: Vec<u64> = (0..p).map(|v| mult * row[ctx.add(v, fx) as usize]).collect();
                hist[0] -= 1;
                let v = decode_phase_histogram(ctx, &hist, decoder.mu);
                decoder.observed.insert(tuple, v);
                v
            }
        };
        if value != fx {
            wrong += 1;
        }
    }
    let polys = dirs
        .iter()
        .map(|h| f.derivative(h).map(|g| g.functional_reduce()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Attempt {
        error: wrong as f64 / points.len() as f64,
        dec: Decomposition {
            directions: dirs.into_iter().map(Some).collect(),
            polys,
            gamma: OuterFunction::Derivative(decoder),
            claimed_error: wrong as f64 / table.len() as f64,
            exact: false,
            seed,
            k,
            attempts: 0,
        },
    })
}

fn attempt_sampled(f: &MultiPoly, mu: &CharacterSum, d: u32, k: usize, seed: u64, cfg: &PipelineConfig) -> Result<Attempt> {
    let ctx = f.ctx();
    let p = ctx.p();
    let n = f.n();
    let mut r = rng::rng_from(seed);
    let basis = DerivativeBasis::sample(ctx, n, d, k, &mut r);
    let dirs: Vec<Vec<u32>> = basis.basis.iter().map(|b| basis.direction(ctx, b)).collect();
    let polys = dirs
        .iter()
        .map(|h| f.derivative(h).map(|g| g.functional_reduce()))
        .collect::<Result<Vec<_>>>()?;
    let mut decoder = DerivativeDecoder::new(ctx, k, basis.basis.clone(), (mu.re, mu.im));
    let mut wrong = 0u64;
    let mut x = vec![0u32; n];
    let samples = cfg.samples.max(1);
    for _ in 0..samples {
        for v in x.iter_mut() {
            *v = r.gen_range(0..p);
        }
        let tuple: Vec<u32> = polys.iter().map(|g| g.eval_unchecked(&x)).collect();
        let value = match decoder.observed.get(&tuple) {
            Some(&v) => v,
            None => {
                let v = decoder.decode_newton(&tuple, cfg.decoder_cap)?;
                decoder.observed.insert(tuple, v);
                v
            }
        };
        if value != f.eval_unchecked(&x) {
            wrong += 1;
        }
    }
    let error = wrong as f64 / samples as f64;
    Ok(Attempt {
        error,
        dec: Decomposition {
            directions: dirs.into_iter().map(Some).collect(),
            polys,
            gamma: OuterFunction::Derivative(decoder),
            claimed_error: error,
            exact: false,
            seed,
            k,
            attempts: 0,
        },
    })
}

/// Approximate `f` by a function of its derivatives in directions `b . z`.
pub fn approx_decompose(f: &MultiPoly, s: u32, cfg: &PipelineConfig) -> Result<Decomposition> {
    let ctx = f.ctx();
    let d = f.functional_reduce().degree();
    if d == 0 {
        return Ok(Decomposition::trivial(&f.functional_reduce(), cfg.seed));
    }
    let k = cfg.k_override.unwrap_or((cfg.t + 2 * s + 3) as usize);
    if k == 0 {
        return Err(Error::input("k must be at least 1"));
    }
    let mu = bias_estimate(f, cfg)?;
    check_bias(&mu, ctx.p(), s, cfg.trust_bias)?;
    let target = 2.0 * (ctx.p() as f64).powi(-(cfg.t as i32)) + 1e-12;
    let table = match ctx.domain_size(f.n(), cfg.enum_cap, "domain p^n") {
        Ok(_) => Some(f.truth_table()),
        Err(_) => None,
    };
    let mut best_error = f64::INFINITY;
    let retries = cfg.retries.max(1);
    for attempt in 0..retries {
        let seed = rng::derive_seed(cfg.seed, attempt as u64);
        let mut a = match &table {
            Some(t) => attempt_exhaustive(f, t, &mu, d, k, seed)?,
            None => attempt_sampled(f, &mu, d, k, seed, cfg)?,
        };
        if a.error <= target {
            a.dec.attempts = attempt + 1;
            return Ok(a.dec);
        }
        best_error = best_error.min(a.error);
    }
    Err(Error::DecompositionFailed {
        attempts: retries,
        best_error,
    })
}

/// `Pr_x[f(x) != Gamma(g(x))]`, exhaustively or from samples.
pub fn decomposition_error(f: &MultiPoly, dec: &Decomposition, budget: &crate::bias::Budget, decoder_cap: u64) -> Result<f64> {
    match budget.mode {
        crate::bias::Mode::Exact => {
            let size = f.ctx().domain_size(f.n(), budget.enum_cap, "domain p^n")?;
            let mut wrong = 0u64;
            let mut pts = Points::new(f.p(), f.n());
            for _ in 0..size {
                let x = pts.current();
                if dec.eval(x, decoder_cap)? != f.eval_unchecked(x) {
                    wrong += 1;
                }
                pts.advance();
            }
            Ok(wrong as f64 / size as f64)
        }
        crate::bias::Mode::Sampled => {
            if budget.samples == 0 {
                return Err(Error::input("samples must be at least 1"));
            }
            let mut r = rng::rng_from(budget.seed);
            let mut x = vec![0u32; f.n()];
            let mut wrong = 0u64;
            for _ in 0..budget.samples {
                for v in x.iter_mut() {
                    *v = r.gen_range(0..f.p());
                }
                if dec.eval(&x, decoder_cap)? != f.eval_unchecked(&x) {
                    wrong += 1;
                }
            }
            Ok(wrong as f64 / budget.samples as f64)
        }
    }
}

/// Approximate, regularize, then tabulate `f` on the atoms. Exactness is
/// certified exhaustively, so `p^n` must be within `enum_cap`.
pub fn exact_decompose(f: &MultiPoly, s: u32, cfg: &PipelineConfig) -> Result<Decomposition> {
    let ctx = f.ctx();
    let reduced = f.functional_reduce();
    if reduced.is_constant() {
        return Ok(Decomposition::trivial(&reduced, cfg.seed));
    }
    ctx.domain_size(f.n(), cfg.enum_cap, "domain p^n (exactness needs an exhaustive check)")?;
    let mu = bias_of_table(ctx, &f.truth_table());
    check_bias(&mu, ctx.p(), s, false)?;
    let mut best_agreement = 0.0f64;
    let mut last_err = None;
    let attempts = cfg.retries.max(1);
    for attempt in 0..attempts {
        let seed = rng::derive_seed(cfg.seed ^ 0x6578_6163, attempt as u64);
        let step = PipelineConfig { seed, ..cfg.clone() };
        let approx = match approx_decompose(f, s, &step) {
            Ok(a) => a,
            Err(e @ Error::DecompositionFailed { .. }) => {
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let factor = PolynomialFactor::new(ctx, f.n(), approx.polys.clone())?;
        let reg = regularize(&factor, s, &PipelineConfig { seed: rng::derive_seed(seed, 1), ..cfg.clone() })?;
        if !reg.complete {
            last_err = Some(Error::RegularizationFailed("iteration budget exhausted".into()));
            continue;
        }
        let m = measurable_table(f, &reg.factor, cfg.enum_cap, cfg.search_cap)?;
        best_agreement = best_agreement.max(m.agreement);
        if m.exact {
            let directions = reg
                .factor
                .polys()
                .iter()
                .map(|g| {
                    approx
                        .polys
                        .iter()
                        .position(|e| e == g)
                        .and_then(|i| approx.directions[i].clone())
                })
                .collect();
            return Ok(Decomposition {
                polys: reg.factor.polys().to_vec(),
                gamma: OuterFunction::Table(m.table),
                directions,
                claimed_error: 0.0,
                exact: true,
                seed: cfg.seed,
                k: approx.k,
                attempts: attempt + 1,
            });
        }
    }
    if best_agreement == 0.0 {
        if let Some(e) = last_err {
            return Err(e);
        }
    }
    Err(Error::NotMeasurable {
        agreement: best_agreement,
    })
}

/// Rank of a polynomial of degree at most two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PolyRank {
    Finite(u32),
    /// Nonconstant polynomials of degree one.
    Infinite,
}

impl Serialize for PolyRank {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PolyRank::Finite(r) => s.serialize_u32(*r),
            PolyRank::Infinite => s.serialize_str("inf"),
        }
    }
}

impl std::fmt::Display for PolyRank {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PolyRank::Finite(r) => write!(f, "{r}"),
            PolyRank::Infinite => write!(f, "inf"),
        }
    }
}

/// Symmetric matrix of the quadratic part: `A_ii` is the coefficient of
/// `x_i^2`, `A_ij` half the coefficient of `x_i x_j`. Needs odd `p`.
pub fn quadratic_form_matrix(f: &MultiPoly) -> Result<Vec<Vec<u32>>> {
    let ctx = f.ctx();
    if ctx.p() == 2 {
        return Err(Error::Unsupported("quadratic forms need odd characteristic".into()));
    }
    let half = ctx.inv(2).unwrap();
    let n = f.n();
    let mut a = vec![vec![0u32; n]; n];
    for (m, c) in f.terms() {
        if m.degree() != 2 {
            continue;
        }
        let idx: Vec<usize> = m
            .exponents()
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            a[i][i] = ctx.add(a[i][i], c);
        } else {
            let h = ctx.mul(c, half);
            a[i][j] = ctx.add(a[i][j], h);
            a[j][i] = ctx.add(a[j][i], h);
        }
    }
    Ok(a)
}

/// Exact rank for degree at most two: `ceil(m / 2)` with `m` the rank of the
/// symmetric matrix; 0 for constants and infinite for other linear maps.
pub fn quadratic_rank(f: &MultiPoly) -> Result<PolyRank> {
    if f.p() == 2 {
        return Err(Error::Unsupported("quadratic rank needs odd characteristic".into()));
    }
    let f = f.functional_reduce();
    match f.degree() {
        0 => Ok(PolyRank::Finite(0)),
        1 => Ok(PolyRank::Infinite),
        2 => {
            let m = linalg::rank(f.ctx(), &quadratic_form_matrix(&f)?) as u32;
            Ok(PolyRank::Finite(m.div_ceil(2)))
        }
        d => Err(Error::precondition(format!("degree {d} exceeds 2"))),
    }
}
