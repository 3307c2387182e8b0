//! Polynomial factors: atoms, bias-certified regularity and measurability.

use std::collections::BTreeMap;

use crate::bias::{bias_of_table, CharacterSum};
use crate::decompose::{exact_decompose, PipelineConfig};
use crate::error::{Error, Result};
use crate::ffpoly::{GammaTable, Monomial, MultiPoly};
use crate::field::{FieldCtx, Points};
use crate::linalg;
use crate::rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEARCH_CAP: u64 = 100_000;

/// Value vector `(h_1(x), ..., h_c(x))` naming one atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AtomIndex(pub Vec<u32>);

/// Ordered tuple of polynomials on a shared `F_p^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialFactor {
    ctx: FieldCtx,
    n: usize,
    polys: Vec<MultiPoly>,
    pinned_prefix: usize,
    regularity_s: u32,
}

impl PolynomialFactor {
    pub fn new(ctx: FieldCtx, n: usize, polys: Vec<MultiPoly>) -> Result<Self> {
        if polys.iter().any(|h| h.ctx() != ctx || h.n() != n) {
            return Err(Error::input("factor polynomials disagree on field or arity"));
        }
        Ok(PolynomialFactor {
            ctx,
            n,
            polys,
            pinned_prefix: 0,
            regularity_s: 0,
        })
    }

    /// Mark the first `k` polynomials as never replaced by `regularize`.
    pub fn with_pinned_prefix(mut self, k: usize) -> Self {
        self.pinned_prefix = k.min(self.polys.len());
        self
    }

    pub fn ctx(&self) -> FieldCtx {
        self.ctx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn polys(&self) -> &[MultiPoly] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn pinned_prefix(&self) -> usize {
        self.pinned_prefix
    }

    /// Certified level, 0 when uncertified.
    pub fn regularity_s(&self) -> u32 {
        self.regularity_s
    }

    /// Sorted degree multiset.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.polys.iter().map(MultiPoly::degree).collect();
        d.sort_unstable();
        d
    }

    pub fn atom_of(&self, x: &[u32]) -> AtomIndex {
        AtomIndex(self.polys.iter().map(|h| h.eval_unchecked(x)).collect())
    }

    /// Atom of every point, as a lexicographic index into `F_p^c`.
    pub fn atom_indices(&self, enum_cap: u64) -> Result<Vec<usize>> {
        let size = self.ctx.domain_size(self.n, enum_cap, "domain p^n")? as usize;
        let p = self.ctx.p() as usize;
        let mut idx = vec![0usize; size];
        for h in &self.polys {
            for (slot, v) in idx.iter_mut().zip(h.truth_table()) {
                *slot = *slot * p + v as usize;
            }
        }
        Ok(idx)
    }

    /// Re-check every nonzero combination; stamps `regularity_s = s` when
    /// all of them have bias at most `p^-s`.
    pub fn certify(&mut self, s: u32, search_cap: u64, enum_cap: u64) -> Result<bool> {
        let ok = find_biased_combination(self, s, search_cap, enum_cap)?.is_none();
        self.regularity_s = if ok { s } else { 0 };
        Ok(ok)
    }

    /// Canonical polynomial strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.polys.iter().map(MultiPoly::to_canonical_string).collect()
    }
}

pub fn atom_histogram(factor: &PolynomialFactor, enum_cap: u64) -> Result<BTreeMap<AtomIndex, u64>> {
    let size = factor.ctx.domain_size(factor.n, enum_cap, "domain p^n (atom histogram)")?;
    let mut hist = BTreeMap::new();
    let mut pts = Points::new(factor.ctx.p(), factor.n);
    for _ in 0..size {
        *hist.entry(factor.atom_of(pts.current())).or_insert(0) += 1;
        pts.advance();
    }
    Ok(hist)
}

/// Atom histogram from `samples` uniform points.
pub fn atom_histogram_sampled(factor: &PolynomialFactor, samples: u64, seed: u64) -> BTreeMap<AtomIndex, u64> {
    let mut r = rng::rng_from(seed);
    let mut x = vec![0u32; factor.n];
    let mut hist = BTreeMap::new();
    for _ in 0..samples {
        for v in x.iter_mut() {
            *v = r.gen_range(0..factor.ctx.p());
        }
        *hist.entry(factor.atom_of(&x)).or_insert(0) += 1;
    }
    hist
}

/// Nonzero vectors of `F_p^c` ordered by sum of lifts, then lexicographically.
pub fn graded_vectors(p: u32, c: usize) -> Vec<Vec<u32>> {
    let mut all: Vec<Vec<u32>> = Points::new(p, c).skip(1).collect();
    all.sort_by_key(|a| (a.iter().map(|&v| v as u64).sum::<u64>(), a.clone()));
    all
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Defect {
    /// `|bias| > p^-s`.
    Biased,
    /// The combination has lower degree than the polynomials it involves,
    /// so it is a function of one lower-degree polynomial.
    DegreeDrop,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasedCombination {
    pub coeffs: Vec<u32>,
    pub bias: CharacterSum,
    pub defect: Defect,
}

fn combination_table(ctx: FieldCtx, tables: &[Vec<u32>], a: &[u32], out: &mut [u32]) {
    out.iter_mut().for_each(|v| *v = 0);
    for (t, &ai) in tables.iter().zip(a) {
        if ai == 0 {
            continue;
        }
        for (o, &v) in out.iter_mut().zip(t) {
            *o = ctx.add(*o, ctx.mul(ai, v));
        }
    }
}

/// First nonzero `a` in graded order whose combination `sum a_i h_i` has
/// `|bias| > p^-s` or degree below `max {deg h_i : a_i != 0}`.
pub fn find_biased_combination(
    factor: &PolynomialFactor,
    s: u32,
    search_cap: u64,
    enum_cap: u64,
) -> Result<Option<BiasedCombination>> {
    let ctx = factor.ctx;
    ctx.domain_size(factor.len(), search_cap, "combination search p^c")?;
    let size = ctx.domain_size(factor.n, enum_cap, "domain p^n (combination bias)")? as usize;
    let threshold = (ctx.p() as f64).powi(-(s as i32)) + 1e-9;
    let tables: Vec<Vec<u32>> = factor.polys.iter().map(MultiPoly::truth_table).collect();
    let reduced: Vec<MultiPoly> = factor.polys.iter().map(MultiPoly::functional_reduce).collect();
    let mut buf = vec![0u32; size];
    for a in graded_vectors(ctx.p(), factor.len()) {
        combination_table(ctx, &tables, &a, &mut buf);
        let b = bias_of_table(ctx, &buf);
        let defect = if b.magnitude() > threshold {
            Some(Defect::Biased)
        } else {
            let top = a.iter().zip(&reduced).filter(|(&ai, _)| ai != 0).map(|(_, h)| h.degree()).max();
            let deg = MultiPoly::linear_combination(ctx, factor.n, &reduced, &a).degree();
            (Some(deg) < top).then_some(Defect::DegreeDrop)
        };
        if let Some(defect) = defect {
            return Ok(Some(BiasedCombination { coeffs: a, bias: b, defect }));
        }
    }
    Ok(None)
}

/// Indices kept after greedily dropping polynomials that are linear
/// combinations of earlier ones plus a constant.
pub fn independent_modulo_constants(polys: &[MultiPoly]) -> Vec<usize> {
    let Some(first) = polys.first() else {
        return Vec::new();
    };
    let ctx = first.ctx();
    let reduced: Vec<MultiPoly> = polys.iter().map(MultiPoly::functional_reduce).collect();
    let mut monos: Vec<Monomial> = reduced
        .iter()
        .flat_map(|h| h.terms().map(|(m, _)| m.clone()))
        .filter(|m| m.degree() > 0)
        .collect();
    monos.sort();
    monos.dedup();
    let vectors: Vec<Vec<u32>> = reduced
        .iter()
        .map(|h| monos.iter().map(|m| h.coeff(m.exponents())).collect())
        .collect();
    linalg::independent_subset(ctx, &vectors)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Regularized {
    pub factor: PolynomialFactor,
    /// False when the iteration budget ran out; `factor` is then partial
    /// and uncertified.
    pub complete: bool,
    pub iterations: usize,
    pub replacements: usize,
    pub dropped: usize,
}

/// Refine `factor` until every nonzero combination has bias at most `p^-s`.
pub fn regularize(factor: &PolynomialFactor, s: u32, cfg: &PipelineConfig) -> Result<Regularized> {
    let ctx = factor.ctx;
    let mut polys = factor.polys.clone();
    let pinned = factor.pinned_prefix;
    let mut dropped = 0;
    let mut replacements = 0;
    for iter in 0..cfg.iteration_budget {
        let keep = independent_modulo_constants(&polys);
        if keep.iter().take_while(|&&i| i < pinned).count() < pinned {
            return Err(Error::RegularizationFailed(
                "pinned polynomials are dependent modulo constants".into(),
            ));
        }
        dropped += polys.len() - keep.len();
        polys = keep.into_iter().map(|i| polys[i].clone()).collect();
        let current = PolynomialFactor::new(ctx, factor.n, polys.clone())?.with_pinned_prefix(pinned);
        let Some(comb) = find_biased_combination(&current, s, cfg.search_cap, cfg.enum_cap)? else {
            let mut out = current;
            out.regularity_s = s;
            return Ok(Regularized {
                factor: out,
                complete: true,
                iterations: iter,
                replacements,
                dropped,
            });
        };
        let target = (pinned..polys.len())
            .filter(|&i| comb.coeffs[i] != 0)
            .max_by_key(|&i| (polys[i].degree(), std::cmp::Reverse(i)))
            .ok_or_else(|| {
                Error::RegularizationFailed("a biased combination involves only pinned polynomials".into())
            })?;
        let h = MultiPoly::linear_combination(ctx, factor.n, &polys, &comb.coeffs).functional_reduce();
        if h.is_constant() {
            polys.remove(target);
            dropped += 1;
            continue;
        }
        if comb.defect == Defect::DegreeDrop {
            // h and the other polynomials determine the target; the factor's
            // degree profile strictly decreases
            if h.degree() >= polys[target].degree() {
                return Err(Error::RegularizationFailed(
                    "a degree drop involves only pinned top-degree polynomials".into(),
                ));
            }
            polys[target] = h;
            replacements += 1;
            continue;
        }
        let inner = PipelineConfig {
            seed: rng::derive_seed(cfg.seed, 0x7265_6700 + iter as u64),
            ..cfg.clone()
        };
        let dec = exact_decompose(&h, s, &inner)?;
        polys.splice(target..=target, dec.polys);
        replacements += 1;
    }
    let out = PolynomialFactor::new(ctx, factor.n, polys)?.with_pinned_prefix(pinned);
    Ok(Regularized {
        factor: out,
        complete: false,
        iterations: cfg.iteration_budget,
        replacements,
        dropped,
    })
}

/// True when the atoms of `fine` determine the atoms of `coarse`.
pub fn refines(fine: &PolynomialFactor, coarse: &PolynomialFactor, enum_cap: u64) -> Result<bool> {
    let a = fine.atom_indices(enum_cap)?;
    let b = coarse.atom_indices(enum_cap)?;
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    for (&fa, &cb) in a.iter().zip(&b) {
        if *seen.entry(fa).or_insert(cb) != cb {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurableTable {
    pub table: GammaTable,
    pub exact: bool,
    pub agreement: f64,
}

/// Plurality value of `f` on each atom (ties to the smallest value, empty
/// atoms to 0).
pub fn measurable_table(
    f: &MultiPoly,
    factor: &PolynomialFactor,
    enum_cap: u64,
    table_cap: u64,
) -> Result<MeasurableTable> {
    let ctx = factor.ctx;
    if f.ctx() != ctx || f.n() != factor.n {
        return Err(Error::input("polynomial and factor disagree on field or arity"));
    }
    let atoms = ctx.domain_size(factor.len(), table_cap, "atom table p^c")? as usize;
    let idx = factor.atom_indices(enum_cap)?;
    let p = ctx.p() as usize;
    let mut counts = vec![0u64; atoms * p];
    for (&a, v) in idx.iter().zip(f.truth_table()) {
        counts[a * p + v as usize] += 1;
    }
    let mut values = vec![0u32; atoms];
    let mut agree = 0u64;
    let mut exact = true;
    for (a, slot) in values.iter_mut().enumerate() {
        let row = &counts[a * p..(a + 1) * p];
        let (best, &most) = row
            .iter()
            .enumerate()
            .fold((0, &0u64), |acc, (v, c)| if *c > *acc.1 { (v, c) } else { acc });
        *slot = best as u32;
        agree += most;
        let total: u64 = row.iter().sum();
        if most != total {
            exact = false;
        }
    }
    Ok(MeasurableTable {
        table: GammaTable::new(ctx, factor.len(), values)?,
        exact,
        agreement: agree as f64 / idx.len() as f64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParallelepipedReport {
    pub k: usize,
    pub samples: u64,
    pub seed: u64,
    /// `sum_i M_i sum_{1<=j<=i} C(k, j)` with `M_i` the number of degree-i polys.
    pub predicted_exponent: u64,
    pub predicted_frequency: f64,
    pub distinct_cubes: usize,
    /// Max over observed cubes `t` of `|Pr[t | t(0)] - predicted_frequency|`.
    pub max_deviation: f64,
    /// Cubes where some alternating sum `sum_w (-1)^|w| h_i(x + w.y)` was nonzero.
    pub constraint_violations: u64,
}

fn binomial_u64(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, j| acc * (n - j) / (j + 1))
}

pub fn predicted_cube_exponent(factor: &PolynomialFactor, k: usize) -> u64 {
    factor
        .degrees()
        .iter()
        .map(|&d| (1..=d as u64).map(|j| binomial_u64(k as u64, j)).sum::<u64>())
        .sum()
}

/// Sampled distribution of `(B(x + w.y))_{w in {0,1}^k}` over random cubes.
pub fn parallelepiped_check(
    factor: &PolynomialFactor,
    k: usize,
    samples: u64,
    seed: u64,
) -> Result<ParallelepipedReport> {
    let max_deg = factor.degrees().last().copied().unwrap_or(0) as usize;
    if k <= max_deg && !factor.is_empty() {
        return Err(Error::precondition(format!("k = {k} must exceed the maximum degree {max_deg}")));
    }
    if samples == 0 {
        return Err(Error::input("samples must be at least 1"));
    }
    if k > 16 {
        return Err(Error::cap("cube vertices 2^k", (1u64 << k.min(63)) as f64, 65536.0));
    }
    let ctx = factor.ctx;
    let p = ctx.p();
    let n = factor.n;
    let c = factor.len();
    let mut r = rng::rng_from(seed);
    let mut cubes: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    let mut base: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    let mut violations = 0;
    let mut x = vec![0u32; n];
    let mut ys = vec![vec![0u32; n]; k];
    let mut pt = vec![0u32; n];
    for _ in 0..samples {
        for v in x.iter_mut().chain(ys.iter_mut().flatten()) {
            *v = r.gen_range(0..p);
        }
        let mut tuple = Vec::with_capacity(c << k);
        let mut alt = vec![0u32; c];
        for w in 0..(1usize << k) {
            pt.copy_from_slice(&x);
            for (j, y) in ys.iter().enumerate() {
                if w >> (k - 1 - j) & 1 == 1 {
                    for (a, &b) in pt.iter_mut().zip(y) {
                        *a = ctx.add(*a, b);
                    }
                }
            }
            let odd = w.count_ones() % 2 == 1;
            for (i, h) in factor.polys.iter().enumerate() {
                let v = h.eval_unchecked(&pt);
                tuple.push(v);
                alt[i] = if odd { ctx.sub(alt[i], v) } else { ctx.add(alt[i], v) };
            }
        }
        if alt.iter().any(|&v| v != 0) {
            violations += 1;
        }
        *base.entry(tuple[..c].to_vec()).or_insert(0) += 1;
        *cubes.entry(tuple).or_insert(0) += 1;
    }
    let exponent = predicted_cube_exponent(factor, k);
    let predicted = (p as f64).powi(-(exponent as i32));
    let max_deviation = cubes
        .iter()
        .map(|(t, &cnt)| (cnt as f64 / base[&t[..c]] as f64 - predicted).abs())
        .fold(0.0, f64::max);
    Ok(ParallelepipedReport {
        k,
        samples,
        seed,
        predicted_exponent: exponent,
        predicted_frequency: predicted,
        distinct_cubes: cubes.len(),
        max_deviation,
        constraint_violations: violations,
    })
}

/// Exhaustive count of atoms over the whole domain keyed by lexicographic
/// atom index; used where the sparse map would be wasteful.
pub fn atom_counts_dense(factor: &PolynomialFactor, enum_cap: u64, table_cap: u64) -> Result<Vec<u64>> {
    let atoms = factor.ctx.domain_size(factor.len(), table_cap, "atom table p^c")? as usize;
    let mut counts = vec![0u64; atoms];
    for a in factor.atom_indices(enum_cap)? {
        counts[a] += 1;
    }
    Ok(counts)
}

/// Frequencies outside `p^-c +- p^-s`, for a factor of `c` polynomials.
pub fn equidistribution_violations(factor: &PolynomialFactor, s: u32, enum_cap: u64, table_cap: u64) -> Result<usize> {
    let p = factor.ctx.p() as f64;
    let counts = atom_counts_dense(factor, enum_cap, table_cap)?;
    let total: u64 = counts.iter().sum();
    let center = p.powi(-(factor.len() as i32));
    let tol = p.powi(-(s as i32)) + 1e-12;
    Ok(counts
        .iter()
        .filter(|&&c| (c as f64 / total as f64 - center).abs() > tol)
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bias::DEFAULT_ENUM_CAP;
    use crate::ffpoly::parse_poly_list;

    fn factor(p: u32, s: &str, n: usize) -> PolynomialFactor {
        let ctx = FieldCtx::new(p).unwrap();
        PolynomialFactor::new(ctx, n, parse_poly_list(ctx, s, Some(n)).unwrap()).unwrap()
    }

    #[test]
    fn atom_histogram_examples() {
        let h = atom_histogram(&factor(3, "x1; x2", 2), DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(h.len(), 9);
        assert!(h.values().all(|&c| c == 1));
        let h = atom_histogram(&factor(3, "x1", 2), DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(h.values().copied().collect::<Vec<_>>(), vec![3, 3, 3]);
        let h = atom_histogram(&factor(3, "x1; x1 + 1", 1), DEFAULT_ENUM_CAP).unwrap();
        assert_eq!(h.len(), 3);
        assert_eq!(h.values().sum::<u64>(), 3);
    }

    #[test]
    fn biased_combination_examples() {
        let s = DEFAULT_SEARCH_CAP;
        let e = DEFAULT_ENUM_CAP;
        assert!(find_biased_combination(&factor(5, "x1; x2", 2), 1, s, e).unwrap().is_none());
        // x1 + 2*(2*x1) = 0 is the first vanishing combination in graded order
        let c = find_biased_combination(&factor(5, "x1; 2*x1", 1), 1, s, e).unwrap().unwrap();
        assert_eq!(c.coeffs, vec![1, 2]);
        assert!((c.bias.magnitude() - 1.0).abs() < 1e-12);
        let c = find_biased_combination(&factor(3, "x1*x2", 2), 2, s, e).unwrap().unwrap();
        assert_eq!(c.coeffs, vec![1]);
        assert!((c.bias.magnitude() - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(c.defect, Defect::Biased);
        // the difference is x3, unbiased but of lower degree
        let q = "x1*x2 + x3*x4";
        let c = find_biased_combination(&factor(5, &format!("{q}; {q} + x3"), 4), 2, s, e).unwrap().unwrap();
        assert_eq!(c.coeffs, vec![1, 4]);
        assert_eq!(c.defect, Defect::DegreeDrop);
    }

    #[test]
    fn graded_order() {
        let v = graded_vectors(3, 2);
        assert_eq!(v[0], vec![0, 1]);
        assert_eq!(v[1], vec![1, 0]);
        assert_eq!(v[2], vec![0, 2]);
        assert_eq!(v.len(), 8);
    }

    #[test]
    fn regularize_examples() {
        let cfg = PipelineConfig::default();
        let f = factor(5, "x1; x2", 2);
        let r = regularize(&f, 1, &cfg).unwrap();
        assert!(r.complete);
        assert_eq!(r.factor.polys(), f.polys());
        assert_eq!(r.factor.regularity_s(), 1);

        // bias(x1*x2) = 1/3 is not above 3^-1, so level 1 leaves it alone
        let f = factor(3, "x1*x2", 2);
        assert_eq!(regularize(&f, 1, &cfg).unwrap().factor.polys(), f.polys());
        let r = regularize(&f, 2, &cfg).unwrap();
        assert!(r.complete);
        assert!(r.factor.polys().iter().all(|h| h.degree() <= 1));
        assert!(refines(&r.factor, &f, DEFAULT_ENUM_CAP).unwrap());

        let f = factor(3, "x1; x1 + x2; x2", 2);
        let r = regularize(&f, 1, &cfg).unwrap();
        assert!(r.factor.len() <= 3);
        assert_eq!(r.factor.len(), 2);
        assert!(refines(&r.factor, &f, DEFAULT_ENUM_CAP).unwrap());
    }

    #[test]
    fn degree_drop_is_regularized_away() {
        let q = "x1*x2 + x3*x4";
        let f = factor(5, &format!("{q}; {q} + x3"), 4);
        let r = regularize(&f, 2, &PipelineConfig::default()).unwrap();
        assert!(r.complete);
        assert_eq!(r.factor.degrees(), vec![1, 2]);
        assert!(refines(&r.factor, &f, DEFAULT_ENUM_CAP).unwrap());
    }

    #[test]
    fn pinned_polynomials_survive() {
        let f = factor(3, "x1; x1*x2", 2).with_pinned_prefix(1);
        let r = regularize(&f, 1, &PipelineConfig::default()).unwrap();
        assert_eq!(r.factor.polys()[0], f.polys()[0]);
        assert!(refines(&r.factor, &f, DEFAULT_ENUM_CAP).unwrap());
    }

    #[test]
    fn measurable_table_examples() {
        let ctx = FieldCtx::new(3).unwrap();
        let x1 = MultiPoly::var(ctx, 2, 0);
        let x2 = MultiPoly::var(ctx, 2, 1);
        let m = measurable_table(&x1, &factor(3, "x1", 2), DEFAULT_ENUM_CAP, DEFAULT_SEARCH_CAP).unwrap();
        assert!(m.exact && (m.agreement - 1.0).abs() < 1e-12);
        let m = measurable_table(&x2, &factor(3, "x1", 2), DEFAULT_ENUM_CAP, DEFAULT_SEARCH_CAP).unwrap();
        assert!(!m.exact && (m.agreement - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(m.table.values(), &[0, 0, 0]);
        let m = measurable_table(&x1.mul(&x2), &factor(3, "x1; x2", 2), DEFAULT_ENUM_CAP, DEFAULT_SEARCH_CAP).unwrap();
        assert!(m.exact);
        assert_eq!(m.table.values(), &[0, 0, 0, 0, 1, 2, 0, 2, 1]);
    }

    #[test]
    fn parallelepiped_examples() {
        let r = parallelepiped_check(&factor(3, "x1", 2), 2, 2000, 5).unwrap();
        assert_eq!(r.constraint_violations, 0);
        let r = parallelepiped_check(&factor(3, "x1; x2", 2), 2, 10_000, 7).unwrap();
        assert_eq!(r.predicted_exponent, 4);
        assert!(r.max_deviation <= 0.05, "{}", r.max_deviation);
        let ctx = FieldCtx::new(3).unwrap();
        let empty = PolynomialFactor::new(ctx, 2, vec![]).unwrap();
        let r = parallelepiped_check(&empty, 2, 100, 1).unwrap();
        assert_eq!((r.distinct_cubes, r.max_deviation), (1, 0.0));
        assert!(parallelepiped_check(&factor(3, "x1*x2", 2), 2, 10, 1).is_err());
    }
}
