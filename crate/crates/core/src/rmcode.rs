//! Reed-Muller codes at desk scale: enumeration, brute-force list decoding,
//! the simplex embedding and greedy weak regularity.
//!
//! Codeword `i` has coefficient `c_j = digit_j(i)` (base `p`, least
//! significant first) on the `j`-th monomial of degree `<= d` in graded-lex
//! order. That index order is the canonical order of codewords.

use crate::decompose::{quadratic_rank, PolyRank};
use crate::error::{Error, Result};
use crate::factor::PolynomialFactor;
use crate::ffpoly::{monomials_up_to, Monomial, MultiPoly};
use crate::field::FieldCtx;
use crate::rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub const DEFAULT_CODEWORD_CAP: u64 = 1_000_000;
/// Values stored when every codeword table is kept in memory.
const TABLE_MEMORY_CAP: f64 = 1e8;
const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RMParams {
    pub p: u32,
    pub n: usize,
    pub d: u32,
}

impl RMParams {
    pub fn new(p: u32, n: usize, d: u32) -> Result<Self> {
        FieldCtx::new(p)?;
        if d >= p {
            return Err(Error::precondition(format!("degree {d} must be below p = {p}")));
        }
        if n == 0 {
            return Err(Error::input("n must be at least 1"));
        }
        Ok(RMParams { p, n, d })
    }

    pub fn ctx(&self) -> FieldCtx {
        FieldCtx::new(self.p).expect("validated in new")
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        monomials_up_to(self.n, self.d, self.p)
    }

    /// `C(n + d, d)`.
    pub fn dimension(&self) -> usize {
        self.monomials().len()
    }

    pub fn codeword_count_f64(&self) -> f64 {
        (self.p as f64).powi(self.dimension() as i32)
    }

    pub fn points(&self) -> usize {
        (self.p as usize).pow(self.n as u32)
    }

    /// `1 - d/p`.
    pub fn min_distance_formula(&self) -> f64 {
        1.0 - self.d as f64 / self.p as f64
    }

    fn codeword_count(&self, cap: u64) -> Result<u64> {
        let count = self.codeword_count_f64();
        if count > cap as f64 {
            return Err(Error::cap("codeword count p^C(n+d,d)", count, cap as f64));
        }
        self.ctx().domain_size(self.n, u64::MAX, "domain")?;
        Ok(count as u64)
    }

    /// Polynomial of codeword `index`.
    pub fn codeword(&self, index: u64) -> MultiPoly {
        let p = self.p as u64;
        let mut rest = index;
        let terms = self.monomials().into_iter().map(|m| {
            let c = (rest % p) as i64;
            rest /= p;
            (m.exponents().to_vec(), c)
        });
        MultiPoly::from_terms(self.ctx(), self.n, terms.collect::<Vec<_>>()).expect("arity matches")
    }

    /// Index of a polynomial of degree `<= d`, after functional reduction.
    pub fn index_of(&self, f: &MultiPoly) -> Result<u64> {
        if f.p() != self.p || f.n() != self.n {
            return Err(Error::input("polynomial does not match the code parameters"));
        }
        let f = f.functional_reduce();
        if f.degree() > self.d {
            return Err(Error::input(format!("degree {} exceeds d = {}", f.degree(), self.d)));
        }
        let mut idx = 0u64;
        for m in self.monomials().iter().rev() {
            idx = idx * self.p as u64 + f.coeff(m.exponents()) as u64;
        }
        Ok(idx)
    }
}

/// Walks codewords in index order, updating the evaluation table in place.
/// Bumping digit `j` by one (including the wrap to 0) adds monomial `j`'s
/// table once.
struct CodewordWalk {
    p: u32,
    monomial_tables: Vec<Vec<u32>>,
    digits: Vec<u32>,
    table: Vec<u32>,
}

impl CodewordWalk {
    fn new(params: &RMParams, start: u64) -> Self {
        let monomial_tables: Vec<Vec<u32>> = params
            .monomials()
            .into_iter()
            .map(|m| {
                MultiPoly::from_terms(params.ctx(), params.n, [(m.exponents().to_vec(), 1)])
                    .expect("arity matches")
                    .truth_table()
            })
            .collect();
        let mut digits = vec![0u32; monomial_tables.len()];
        let mut rest = start;
        for dg in digits.iter_mut() {
            *dg = (rest % params.p as u64) as u32;
            rest /= params.p as u64;
        }
        let mut table = vec![0u32; params.points()];
        for (dg, mt) in digits.iter().zip(&monomial_tables) {
            for (t, &v) in table.iter_mut().zip(mt) {
                *t = (*t + dg * v) % params.p;
            }
        }
        CodewordWalk {
            p: params.p,
            monomial_tables,
            digits,
            table,
        }
    }

    fn advance(&mut self) {
        for (dg, mt) in self.digits.iter_mut().zip(&self.monomial_tables) {
            for (t, &v) in self.table.iter_mut().zip(mt) {
                *t = (*t + v) % self.p;
            }
            *dg += 1;
            if *dg < self.p {
                return;
            }
            *dg = 0;
        }
    }
}

fn disagreements(a: &[u32], b: &[u32]) -> u64 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u64
}

/// Split `0..count` into contiguous ranges, run `scan` on each and
/// concatenate the results in range order.
fn scan_codewords<T, F>(params: &RMParams, count: u64, workers: usize, scan: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &[u32]) -> Option<T> + Sync,
{
    let workers = (workers.max(1) as u64).min(count.max(1));
    let chunk = count.div_ceil(workers);
    let run = |lo: u64, hi: u64| {
        let mut out = Vec::new();
        if lo >= hi {
            return out;
        }
        let mut walk = CodewordWalk::new(params, lo);
        for i in lo..hi {
            if let Some(t) = scan(i, &walk.table) {
                out.push(t);
            }
            walk.advance();
        }
        out
    };
    if workers == 1 {
        return run(0, count);
    }
    std::thread::scope(|sc| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let lo = w * chunk;
                let hi = ((w + 1) * chunk).min(count);
                let run = &run;
                sc.spawn(move || run(lo, hi))
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("scan worker panicked")).collect()
    })
}

fn all_codeword_tables(params: &RMParams, cap: u64) -> Result<Vec<Vec<u32>>> {
    let count = params.codeword_count(cap)?;
    let values = count as f64 * params.points() as f64;
    if values > TABLE_MEMORY_CAP {
        return Err(Error::cap("stored codeword table entries", values, TABLE_MEMORY_CAP));
    }
    Ok(scan_codewords(params, count, 1, |_, t| Some(t.to_vec())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinDistance {
    /// Fewest nonzero points over nonzero codewords.
    pub nonzero_points: u64,
    pub total_points: u64,
    pub value: f64,
    /// `nonzero_points / total_points == 1 - d/p` as rationals.
    pub matches_formula: bool,
}

pub fn min_distance_empirical(params: &RMParams, cap: u64, workers: usize) -> Result<MinDistance> {
    let count = params.codeword_count(cap)?;
    let total = params.points() as u64;
    let weights = scan_codewords(params, count, workers, |i, t| {
        (i != 0).then(|| t.iter().filter(|&&v| v != 0).count() as u64)
    });
    let nonzero_points = weights.into_iter().min().unwrap_or(total);
    let p = params.p as u64;
    Ok(MinDistance {
        nonzero_points,
        total_points: total,
        value: nonzero_points as f64 / total as f64,
        matches_formula: nonzero_points * p == total * (p - params.d as u64),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ListEntry {
    pub index: u64,
    pub poly: String,
    pub disagreements: u64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ListResult {
    pub center: String,
    pub radius: f64,
    pub codewords: Vec<ListEntry>,
}

impl ListResult {
    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }
}

fn check_center(params: &RMParams, center: &[u32]) -> Result<()> {
    if center.len() != params.points() {
        return Err(Error::input(format!(
            "center has {} values, expected p^n = {}",
            center.len(),
            params.points()
        )));
    }
    if center.iter().any(|&v| v >= params.p) {
        return Err(Error::input("center value outside F_p"));
    }
    Ok(())
}

/// Largest disagreement count allowed at `radius`.
fn radius_budget(radius: f64, total: usize) -> i64 {
    ((radius + 1e-12) * total as f64).floor() as i64
}

/// Every codeword within `radius` of `center`, sorted by distance and then
/// by codeword index.
pub fn list_decode_brute(
    params: &RMParams,
    center: &[u32],
    radius: f64,
    cap: u64,
    workers: usize,
) -> Result<ListResult> {
    check_center(params, center)?;
    let count = params.codeword_count(cap)?;
    let total = params.points();
    let budget = radius_budget(radius, total);
    let mut hits = scan_codewords(params, count, workers, |i, t| {
        let dis = disagreements(t, center);
        (dis as i64 <= budget).then_some((dis, i))
    });
    hits.sort_unstable();
    let codewords = hits
        .into_iter()
        .map(|(dis, i)| ListEntry {
            index: i,
            poly: params.codeword(i).to_canonical_string(),
            disagreements: dis,
            distance: dis as f64 / total as f64,
        })
        .collect();
    Ok(ListResult {
        center: format!("{center:?}"),
        radius,
        codewords,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JohnsonBound {
    pub radius: f64,
    pub list_cap: f64,
}

/// `(1 - 1/p - sqrt(eps), 1/eps^2)`.
pub fn johnson_bound(p: u32, eps: f64) -> Result<JohnsonBound> {
    FieldCtx::new(p)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::input(format!("eps must lie in (0, 1), got {eps}")));
    }
    Ok(JohnsonBound {
        radius: 1.0 - 1.0 / p as f64 - eps.sqrt(),
        list_cap: 1.0 / (eps * eps),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimplexSpace {
    /// Rows are probability vectors.
    Delta,
    /// Rows sum to zero.
    Centered,
}

/// A map `F_p^n -> R^p`, stored row-major in lexicographic point order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexFunction {
    p: u32,
    n: usize,
    values: Vec<f64>,
    space: SimplexSpace,
}

impl SimplexFunction {
    pub fn from_rows(p: u32, n: usize, values: Vec<f64>, space: SimplexSpace) -> Result<Self> {
        FieldCtx::new(p)?;
        let rows = (p as usize).pow(n as u32);
        if values.len() != rows * p as usize {
            return Err(Error::input(format!("expected {} values", rows * p as usize)));
        }
        let f = SimplexFunction { p, n, values, space };
        f.check_space()?;
        Ok(f)
    }

    fn check_space(&self) -> Result<()> {
        let want = match self.space {
            SimplexSpace::Delta => 1.0,
            SimplexSpace::Centered => 0.0,
        };
        for row in self.rows() {
            let sum: f64 = row.iter().sum();
            if (sum - want).abs() > TOL {
                return Err(Error::precondition(format!("row sums to {sum}, expected {want}")));
            }
            if self.space == SimplexSpace::Delta && row.iter().any(|&v| v < -TOL) {
                return Err(Error::precondition("negative entry in a delta-space row"));
            }
        }
        Ok(())
    }

    /// `p(g)`: the indicator of `g(x)` in every row.
    pub fn embed(p: u32, n: usize, table: &[u32]) -> Result<Self> {
        let rows = (p as usize).pow(n as u32);
        if table.len() != rows || table.iter().any(|&v| v >= p) {
            return Err(Error::input("table does not describe a function F_p^n -> F_p"));
        }
        let mut values = vec![0.0; rows * p as usize];
        for (x, &v) in table.iter().enumerate() {
            values[x * p as usize + v as usize] = 1.0;
        }
        Ok(SimplexFunction {
            p,
            n,
            values,
            space: SimplexSpace::Delta,
        })
    }

    /// `q(g) = p(g) - 1/p`.
    pub fn centered(p: u32, n: usize, table: &[u32]) -> Result<Self> {
        Ok(Self::embed(p, n, table)?.center())
    }

    pub fn uniform(p: u32, n: usize) -> Self {
        let rows = (p as usize).pow(n as u32);
        SimplexFunction {
            p,
            n,
            values: vec![1.0 / p as f64; rows * p as usize],
            space: SimplexSpace::Delta,
        }
    }

    /// Subtract `1/p` from a delta-space function.
    pub fn center(mut self) -> Self {
        if self.space == SimplexSpace::Delta {
            let shift = 1.0 / self.p as f64;
            self.values.iter_mut().for_each(|v| *v -= shift);
            self.space = SimplexSpace::Centered;
        }
        self
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn space(&self) -> SimplexSpace {
        self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.p as usize)
    }

    pub fn row(&self, x: usize) -> &[f64] {
        let p = self.p as usize;
        &self.values[x * p..(x + 1) * p]
    }

    /// `E_x sum_y f(x)_y g(x)_y`.
    pub fn inner(&self, other: &SimplexFunction) -> f64 {
        debug_assert_eq!((self.p, self.n), (other.p, other.n));
        let rows = self.values.len() / self.p as usize;
        let dot: f64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum();
        dot / rows as f64
    }

    pub fn max_abs_diff(&self, other: &SimplexFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn axpy(&mut self, alpha: f64, other: &SimplexFunction) {
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += alpha * b;
        }
    }
}

/// Table of `l_{a,b}(x) = <a, x> + b`.
pub fn affine_table(p: u32, n: usize, a: &[u32], b: u32) -> Vec<u32> {
    let mut pts = crate::field::Points::new(p, n);
    let rows = (p as usize).pow(n as u32);
    let mut out = Vec::with_capacity(rows);
    for _ in 0..rows {
        let dot: u64 = pts.current().iter().zip(a).map(|(&x, &c)| x as u64 * c as u64).sum();
        out.push(((dot + b as u64) % p as u64) as u32);
        pts.advance();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexFourier {
    pub p: u32,
    pub n: usize,
    /// `alpha[a * (p - 1) + (b - 1)]` for `a` a lexicographic point index.
    pub alpha: Vec<f64>,
}

impl SimplexFourier {
    pub fn get(&self, a: usize, b: u32) -> f64 {
        assert!(b != 0 && b < self.p, "b must be a nonzero field element");
        self.alpha[a * (self.p as usize - 1) + b as usize - 1]
    }

    /// `sum_{a, b != 0} alpha_{a,b} q(l_{a,b})`.
    pub fn reconstruct(&self) -> SimplexFunction {
        let p = self.p as usize;
        let rows = p.pow(self.n as u32);
        let mut out = SimplexFunction {
            p: self.p,
            n: self.n,
            values: vec![0.0; rows * p],
            space: SimplexSpace::Centered,
        };
        for a in 0..rows {
            let av = crate::field::point_from_index(self.p, self.n, a);
            let base = affine_table(self.p, self.n, &av, 0);
            for b in 1..self.p {
                let alpha = self.get(a, b);
                if alpha == 0.0 {
                    continue;
                }
                // q(l_{a,b})(x)_y = [y == l(x)] - 1/p
                for (x, &l0) in base.iter().enumerate() {
                    let y = (l0 + b) as usize % p;
                    out.values[x * p + y] += alpha;
                }
                let shift = alpha / p as f64;
                out.values.iter_mut().for_each(|v| *v -= shift);
            }
        }
        out
    }
}

/// `alpha_{a,b} = <q(g), q(l_{a,b})> - <q(g), q(l_{a,0})>`, which reduces to
/// `(#{g = l_{a,b}} - #{g = l_{a,0}}) / p^n`.
pub fn simplex_fourier(p: u32, n: usize, g: &[u32], cap: u64) -> Result<SimplexFourier> {
    let ctx = FieldCtx::new(p)?;
    let rows = ctx.domain_size(n, cap, "domain p^n (simplex Fourier)")? as usize;
    let basis = rows as f64 * (p as f64 - 1.0) * rows as f64;
    if basis > cap as f64 * cap as f64 {
        return Err(Error::cap("simplex Fourier work", basis, cap as f64 * cap as f64));
    }
    if g.len() != rows || g.iter().any(|&v| v >= p) {
        return Err(Error::input("table does not describe a function F_p^n -> F_p"));
    }
    let mut alpha = Vec::with_capacity(rows * (p as usize - 1));
    for a in 0..rows {
        let av = crate::field::point_from_index(p, n, a);
        let base = affine_table(p, n, &av, 0);
        // shift[x] = g(x) - <a, x>; g = l_{a,b} exactly where shift = b
        let mut counts = vec![0i64; p as usize];
        for (&gx, &l0) in g.iter().zip(&base) {
            counts[ctx.sub(gx, l0) as usize] += 1;
        }
        for b in 1..p as usize {
            alpha.push((counts[b] - counts[0]) as f64 / rows as f64);
        }
    }
    Ok(SimplexFourier { p, n, alpha })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakRegularity {
    /// `(family index, alpha)` in the order the greedy loop chose them.
    pub terms: Vec<(usize, f64)>,
    /// `h = phi - 1/p - sum alpha_i q(f_i)`.
    pub residual: SimplexFunction,
    pub iterations: usize,
    pub iteration_bound: usize,
    pub max_residual_correlation: f64,
}

/// Greedy decomposition `phi = 1/p + sum alpha_i q(f_i) + h` that stops once
/// every family member has `|<h, q(f)>| <= eps`.
pub fn weak_regularity(phi: &SimplexFunction, family: &[Vec<u32>], eps: f64) -> Result<WeakRegularity> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::input(format!("eps must lie in (0, 1], got {eps}")));
    }
    if phi.space != SimplexSpace::Delta {
        return Err(Error::precondition("phi must take values in the simplex"));
    }
    let qs = family
        .iter()
        .map(|t| SimplexFunction::centered(phi.p, phi.n, t))
        .collect::<Result<Vec<_>>>()?;
    let bound = (1.0 / (eps * eps)).ceil() as usize;
    let mut h = phi.clone().center();
    let mut terms = Vec::new();
    loop {
        let mut best: Option<(usize, f64)> = None;
        for (i, q) in qs.iter().enumerate() {
            let c = h.inner(q);
            if best.is_none_or(|(_, b)| c.abs() > b.abs()) {
                best = Some((i, c));
            }
        }
        let max_corr = best.map_or(0.0, |(_, c)| c.abs());
        if max_corr <= eps {
            return Ok(WeakRegularity {
                iterations: terms.len(),
                terms,
                residual: h,
                iteration_bound: bound,
                max_residual_correlation: max_corr,
            });
        }
        if terms.len() >= bound {
            return Err(Error::Internal(format!(
                "greedy loop exceeded its energy bound of {bound} steps"
            )));
        }
        let (i, alpha) = best.expect("nonempty family when correlation exceeds eps");
        h.axpy(-alpha, &qs[i]);
        terms.push((i, alpha));
    }
}

/// `E[phi | B]`: every row replaced by the average over its atom.
pub fn conditional_expectation(
    phi: &SimplexFunction,
    factor: &PolynomialFactor,
    enum_cap: u64,
) -> Result<SimplexFunction> {
    if factor.ctx().p() != phi.p || factor.n() != phi.n {
        return Err(Error::input("factor and function disagree on field or arity"));
    }
    let atoms = factor.atom_indices(enum_cap)?;
    let p = phi.p as usize;
    let mut sums: std::collections::HashMap<usize, (Vec<f64>, usize)> = Default::default();
    for (x, &a) in atoms.iter().enumerate() {
        let e = sums.entry(a).or_insert_with(|| (vec![0.0; p], 0));
        for (s, v) in e.0.iter_mut().zip(phi.row(x)) {
            *s += v;
        }
        e.1 += 1;
    }
    let mut values = Vec::with_capacity(phi.values.len());
    for &a in &atoms {
        let (s, k) = &sums[&a];
        values.extend(s.iter().map(|v| v / *k as f64));
    }
    Ok(SimplexFunction {
        p: phi.p,
        n: phi.n,
        values,
        space: phi.space,
    })
}

/// Whether `phi` is constant on the atoms of `factor`.
pub fn is_measurable(phi: &SimplexFunction, factor: &PolynomialFactor, enum_cap: u64) -> Result<bool> {
    let avg = conditional_expectation(phi, factor, enum_cap)?;
    Ok(avg.max_abs_diff(phi) <= TOL)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Centers {
    /// Uniform random functions plus codewords with Bernoulli noise.
    Sampled { random: usize, noisy: usize, noise: f64 },
    /// Every function `F_p^n -> F_p`.
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileConfig {
    pub centers: Centers,
    pub seed: u64,
    /// `C` in the comparison against `p^{C n^{d-e}}`.
    pub constant: f64,
    pub codeword_cap: u64,
    pub center_cap: u64,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig {
            centers: Centers::Sampled {
                random: 100,
                noisy: 100,
                noise: 0.2,
            },
            seed: 0,
            constant: 1.0,
            codeword_cap: DEFAULT_CODEWORD_CAP,
            center_cap: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CenterKind {
    Random,
    Noisy,
    Exhaustive,
}

impl CenterKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CenterKind::Random => "random",
            CenterKind::Noisy => "noisy",
            CenterKind::Exhaustive => "exhaustive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub e: u32,
    pub radius: f64,
    pub center_kind: CenterKind,
    pub center_index: usize,
    pub list_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusSummary {
    pub e: u32,
    pub radius: f64,
    pub max_list_size: usize,
    /// `p^{C n^{d-e}}`.
    pub bound: f64,
    pub consistent: bool,
    /// Full list at the first center reaching the maximum.
    pub witness: ListResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ListProfile {
    pub params: RMParams,
    pub s: u32,
    pub centers: usize,
    pub rows: Vec<ProfileRow>,
    pub summaries: Vec<RadiusSummary>,
    pub consistent_with_bound: bool,
}

impl ListProfile {
    /// `radius,center_kind,list_size` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("radius,center_kind,list_size\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.radius, r.center_kind.as_str(), r.list_size));
        }
        out
    }
}

fn profile_centers(params: &RMParams, cfg: &ProfileConfig) -> Result<Vec<(CenterKind, Vec<u32>)>> {
    let points = params.points();
    match &cfg.centers {
        Centers::All => {
            let count = (params.p as f64).powi(points as i32);
            if count > cfg.center_cap as f64 {
                return Err(Error::cap("centers p^(p^n)", count, cfg.center_cap as f64));
            }
            let mut out = Vec::with_capacity(count as usize);
            let mut pts = crate::field::Points::new(params.p, points);
            for _ in 0..count as u64 {
                out.push((CenterKind::Exhaustive, pts.current().to_vec()));
                pts.advance();
            }
            Ok(out)
        }
        Centers::Sampled { random, noisy, noise } => {
            if !(0.0..=1.0).contains(noise) {
                return Err(Error::input("noise rate must lie in [0, 1]"));
            }
            if (random + noisy) as u64 > cfg.center_cap {
                return Err(Error::cap("centers", (random + noisy) as f64, cfg.center_cap as f64));
            }
            let count = params.codeword_count(cfg.codeword_cap)?;
            let mut r = rng::rng_from(cfg.seed);
            let mut out = Vec::with_capacity(random + noisy);
            for _ in 0..*random {
                out.push((CenterKind::Random, (0..points).map(|_| r.gen_range(0..params.p)).collect()));
            }
            for _ in 0..*noisy {
                let mut t = params.codeword(r.gen_range(0..count)).truth_table();
                for v in t.iter_mut() {
                    if r.gen_bool(*noise) {
                        *v = (*v + r.gen_range(1..params.p)) % params.p;
                    }
                }
                out.push((CenterKind::Noisy, t));
            }
            Ok(out)
        }
    }
}

/// List sizes at radii `1 - e/p - p^-s` for `1 <= e <= d` over the
/// configured centers.
pub fn list_size_profile(params: &RMParams, s: u32, cfg: &ProfileConfig) -> Result<ListProfile> {
    let codewords = all_codeword_tables(params, cfg.codeword_cap)?;
    let centers = profile_centers(params, cfg)?;
    let total = params.points();
    let p = params.p as f64;
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for e in 1..=params.d {
        let radius = 1.0 - e as f64 / p - p.powi(-(s as i32));
        let budget = radius_budget(radius, total);
        let mut best: Option<(usize, usize)> = None;
        for (ci, (kind, center)) in centers.iter().enumerate() {
            let size = codewords
                .iter()
                .filter(|t| disagreements(t, center) as i64 <= budget)
                .count();
            rows.push(ProfileRow {
                e,
                radius,
                center_kind: *kind,
                center_index: ci,
                list_size: size,
            });
            if best.is_none_or(|(_, b)| size > b) {
                best = Some((ci, size));
            }
        }
        let (ci, max) = best.unwrap_or((0, 0));
        let witness = match centers.get(ci) {
            Some((_, c)) => list_decode_brute(params, c, radius, cfg.codeword_cap, 1)?,
            None => ListResult {
                center: String::new(),
                radius,
                codewords: Vec::new(),
            },
        };
        let bound = p.powf(cfg.constant * (params.n as f64).powi((params.d - e) as i32));
        summaries.push(RadiusSummary {
            e,
            radius,
            max_list_size: max,
            bound,
            consistent: max as f64 <= bound,
            witness,
        });
    }
    Ok(ListProfile {
        params: *params,
        s,
        centers: centers.len(),
        consistent_with_bound: summaries.iter().all(|r| r.consistent),
        rows,
        summaries,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankGraphReport {
    pub list_size: usize,
    /// Positions in the list of the greedy maximal independent set.
    pub independent_set: Vec<usize>,
    /// Max over set members `f` of `#{h in list : rank(h - f) <= k}`.
    pub max_neighborhood: usize,
    /// `list_size <= |independent set| * max_neighborhood`.
    pub covers: bool,
}

fn rank_at_most(f: &MultiPoly, k: u32) -> Result<bool> {
    Ok(match quadratic_rank(f)? {
        PolyRank::Finite(r) => r <= k,
        PolyRank::Infinite => false,
    })
}

/// Rank-threshold graph over an explicit list of quadratics.
pub fn rank_graph_from_list(list: &[MultiPoly], k: u32) -> Result<RankGraphReport> {
    let m = list.len();
    let mut adj = vec![vec![false; m]; m];
    for i in 0..m {
        adj[i][i] = true;
        for j in i + 1..m {
            let e = rank_at_most(&list[i].sub(&list[j]), k)?;
            adj[i][j] = e;
            adj[j][i] = e;
        }
    }
    let mut chosen: Vec<usize> = Vec::new();
    for (i, _) in adj.iter().enumerate() {
        if chosen.iter().all(|&c| !adj[c][i]) {
            chosen.push(i);
        }
    }
    let max_neighborhood = chosen
        .iter()
        .map(|&c| adj[c].iter().filter(|&&e| e).count())
        .max()
        .unwrap_or(0);
    Ok(RankGraphReport {
        list_size: m,
        covers: m <= chosen.len() * max_neighborhood,
        independent_set: chosen,
        max_neighborhood,
    })
}

/// Brute-force list around `center`, then the rank-threshold graph on it.
pub fn rank_graph_reduction(
    params: &RMParams,
    center: &[u32],
    radius: f64,
    k: u32,
    cap: u64,
) -> Result<RankGraphReport> {
    if params.d != 2 {
        return Err(Error::Unsupported(format!(
            "rank graph needs d = 2, got d = {}",
            params.d
        )));
    }
    let list = list_decode_brute(params, center, radius, cap, 1)?;
    let polys: Vec<MultiPoly> = list.codewords.iter().map(|e| params.codeword(e.index)).collect();
    rank_graph_from_list(&polys, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::parse_poly;

    fn params(p: u32, n: usize, d: u32) -> RMParams {
        RMParams::new(p, n, d).unwrap()
    }

    #[test]
    fn codeword_index_round_trip() {
        let rm = params(3, 2, 2);
        let mut walk = CodewordWalk::new(&rm, 0);
        for i in 0..rm.codeword_count_f64() as u64 {
            let f = rm.codeword(i);
            assert_eq!(rm.index_of(&f).unwrap(), i);
            assert_eq!(walk.table, f.truth_table());
            walk.advance();
        }
        let w = CodewordWalk::new(&rm, 400);
        assert_eq!(w.table, rm.codeword(400).truth_table());
    }

    #[test]
    fn min_distance_examples() {
        for (p, n, d, v) in [(3, 1, 1, 2.0 / 3.0), (5, 1, 2, 3.0 / 5.0), (3, 2, 1, 2.0 / 3.0)] {
            let m = min_distance_empirical(&params(p, n, d), DEFAULT_CODEWORD_CAP, 2).unwrap();
            assert!(m.matches_formula);
            assert!((m.value - v).abs() < 1e-12);
        }
        assert!(RMParams::new(3, 1, 3).is_err());
        assert!(matches!(
            min_distance_empirical(&params(5, 3, 2), 100, 1),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn list_decode_examples() {
        let rm = params(3, 1, 1);
        let zero = vec![0u32; 3];
        let l = list_decode_brute(&rm, &zero, 1.0 / 3.0, DEFAULT_CODEWORD_CAP, 1).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l.codewords[0].poly, "0");
        let l = list_decode_brute(&rm, &zero, 2.0 / 3.0, DEFAULT_CODEWORD_CAP, 3).unwrap();
        assert_eq!(l.len(), 7);
        assert!(l.codewords.windows(2).all(|w| (w[0].disagreements, w[0].index) < (w[1].disagreements, w[1].index)));
        let f0 = parse_poly(rm.ctx(), "2*x1 + 1", Some(1)).unwrap();
        let l = list_decode_brute(&rm, &f0.truth_table(), 0.0, DEFAULT_CODEWORD_CAP, 1).unwrap();
        assert_eq!(l.len(), 1);
        assert_eq!(l.codewords[0].index, rm.index_of(&f0).unwrap());
    }

    #[test]
    fn parallel_scan_matches_serial() {
        let rm = params(5, 2, 1);
        let center: Vec<u32> = (0..25).map(|i| (i * 7 % 5) as u32).collect();
        let a = list_decode_brute(&rm, &center, 0.7, DEFAULT_CODEWORD_CAP, 1).unwrap();
        let b = list_decode_brute(&rm, &center, 0.7, DEFAULT_CODEWORD_CAP, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn johnson_examples() {
        let j = johnson_bound(3, 0.04).unwrap();
        assert!((j.radius - (2.0 / 3.0 - 0.2)).abs() < 1e-12);
        assert!((j.list_cap - 625.0).abs() < 1e-9);
        let j = johnson_bound(5, 0.01).unwrap();
        assert!((j.radius - 0.7).abs() < 1e-12);
        assert!((j.list_cap - 10000.0).abs() < 1e-6);
        assert!(johnson_bound(3, 1.0).is_err());
        assert!(johnson_bound(3, 0.0).is_err());
    }

    #[test]
    fn simplex_inner_product_table() {
        let (p, n) = (3, 1);
        for a in 0..3u32 {
            for b in 0..3u32 {
                let q = SimplexFunction::centered(p, n, &affine_table(p, n, &[a], b)).unwrap();
                for a2 in 0..3u32 {
                    for b2 in 0..3u32 {
                        let q2 = SimplexFunction::centered(p, n, &affine_table(p, n, &[a2], b2)).unwrap();
                        let want = if a != a2 {
                            0.0
                        } else if b == b2 {
                            2.0 / 3.0
                        } else {
                            -1.0 / 3.0
                        };
                        assert!((q.inner(&q2) - want).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn simplex_fourier_examples() {
        let (p, n) = (3, 2);
        let g = affine_table(p, n, &[1, 2], 1);
        let a0 = crate::field::point_index(p, &[1, 2]);
        let four = simplex_fourier(p, n, &g, 1000).unwrap();
        assert!((four.get(a0, 1) - 1.0).abs() < 1e-12);
        for a in 0..9 {
            for b in 1..3 {
                if (a, b) != (a0, 1) {
                    assert!(four.get(a, b).abs() < 1e-12);
                }
            }
        }
        let zero = vec![0u32; 9];
        let four = simplex_fourier(p, n, &zero, 1000).unwrap();
        for a in 1..9 {
            assert_eq!(four.get(a, 1), 0.0);
            assert_eq!(four.get(a, 2), 0.0);
        }
        let q = SimplexFunction::centered(p, n, &zero).unwrap();
        assert!(four.reconstruct().max_abs_diff(&q) < 1e-12);
    }

    #[test]
    fn weak_regularity_examples() {
        let (p, n) = (3, 1);
        let f0 = vec![0, 2, 1];
        let phi = SimplexFunction::embed(p, n, &f0).unwrap();
        let w = weak_regularity(&phi, &[vec![1, 1, 1], f0.clone()], 0.5).unwrap();
        assert_eq!(w.terms.len(), 1);
        assert_eq!(w.terms[0].0, 1);
        assert!((w.terms[0].1 - 2.0 / 3.0).abs() < 1e-12);
        assert!((w.max_residual_correlation - 2.0 / 9.0).abs() < 1e-12);
        let w = weak_regularity(&SimplexFunction::uniform(p, n), std::slice::from_ref(&f0), 0.1).unwrap();
        assert!(w.terms.is_empty());
        let w = weak_regularity(&phi, std::slice::from_ref(&f0), 1.0).unwrap();
        assert!(w.iterations <= 1);
        assert!(weak_regularity(&phi.clone().center(), &[f0], 0.5).is_err());
    }

    #[test]
    fn conditional_expectation_examples() {
        let ctx = FieldCtx::new(3).unwrap();
        let x1 = PolynomialFactor::new(ctx, 2, vec![MultiPoly::var(ctx, 2, 0)]).unwrap();
        let x2_table = MultiPoly::var(ctx, 2, 1).truth_table();
        let phi = SimplexFunction::embed(3, 2, &x2_table).unwrap();
        let e = conditional_expectation(&phi, &x1, 1000).unwrap();
        assert!(e.max_abs_diff(&SimplexFunction::uniform(3, 2)) < 1e-12);
        // measurable input is returned unchanged
        let phi = SimplexFunction::embed(3, 2, &MultiPoly::var(ctx, 2, 0).truth_table()).unwrap();
        assert!(is_measurable(&phi, &x1, 1000).unwrap());
        let both = PolynomialFactor::new(ctx, 2, vec![MultiPoly::var(ctx, 2, 0), MultiPoly::var(ctx, 2, 1)]).unwrap();
        let noisy = SimplexFunction::embed(3, 2, &x2_table).unwrap();
        assert_eq!(conditional_expectation(&noisy, &both, 1000).unwrap(), noisy);
    }

    #[test]
    fn profile_examples() {
        let rm = params(3, 2, 1);
        let cfg = ProfileConfig {
            centers: Centers::Sampled {
                random: 100,
                noisy: 100,
                noise: 0.2,
            },
            ..Default::default()
        };
        let prof = list_size_profile(&rm, 1, &cfg).unwrap();
        assert_eq!(prof.rows.len(), 200);
        assert!((prof.summaries[0].radius - 1.0 / 3.0).abs() < 1e-12);
        assert!(prof.summaries[0].max_list_size <= 3);
        assert!(prof.consistent_with_bound);
        assert_eq!(prof.to_csv().lines().count(), 201);

        let rm = params(5, 1, 2);
        let prof = list_size_profile(
            &rm,
            1,
            &ProfileConfig {
                centers: Centers::All,
                ..Default::default()
            },
        )
        .unwrap();
        let s = prof.summaries.iter().find(|s| s.e == 2).unwrap();
        assert!((s.radius - 0.4).abs() < 1e-12);
        assert_eq!(s.witness.len(), s.max_list_size);
    }

    #[test]
    fn rank_graph_examples() {
        let ctx = FieldCtx::new(3).unwrap();
        let polys: Vec<MultiPoly> = ["x1*x2", "2*x1*x2", "x1*x2 + 1"]
            .iter()
            .map(|s| parse_poly(ctx, s, Some(2)).unwrap())
            .collect();
        let r = rank_graph_from_list(&polys, 1).unwrap();
        assert_eq!(r.independent_set, vec![0]);
        assert!(r.covers);
        let r = rank_graph_from_list(&polys[..1], 1).unwrap();
        assert_eq!((r.independent_set.len(), r.max_neighborhood), (1, 1));

        let rm = params(5, 2, 2);
        let radius = rm.min_distance_formula() - 0.2;
        let r = rank_graph_reduction(&rm, &[0; 25], radius, 1, DEFAULT_CODEWORD_CAP).unwrap();
        assert!(r.covers);
        assert!(rank_graph_reduction(&params(5, 2, 1), &[0; 25], 0.5, 1, DEFAULT_CODEWORD_CAP).is_err());
    }
}
