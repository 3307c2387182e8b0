//! Nullstellensatz certificates `Q^r = sum R_i P_i` as functions on `F_p^n`,
//! found by solving for the cofactor coefficients, and radical membership
//! through the extra generator `1 - y Q`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ffpoly::{monomials_up_to, Monomial, MultiPoly};
use crate::field::{FieldCtx, Points};
use crate::linalg;
use serde_json::{json, Value};

pub const DEFAULT_UNKNOWNS_CAP: usize = 5000;

/// Generators `P_1..P_c` and a query `Q`, all on the same `F_p^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealSpec {
    generators: Vec<MultiPoly>,
    query: MultiPoly,
}

impl IdealSpec {
    pub fn new(generators: Vec<MultiPoly>, query: MultiPoly) -> Result<Self> {
        let (ctx, n) = (query.ctx(), query.n());
        if generators.iter().any(|g| g.ctx() != ctx || g.n() != n) {
            return Err(Error::input("generators and query disagree on field or arity"));
        }
        Ok(IdealSpec { generators, query })
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn query(&self) -> &MultiPoly {
        &self.query
    }

    pub fn ctx(&self) -> FieldCtx {
        self.query.ctx()
    }

    pub fn n(&self) -> usize {
        self.query.n()
    }
}

/// Exponent `r` and cofactors with `Q^r - sum R_i P_i` reducing to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    r: u32,
    cofactors: Vec<MultiPoly>,
    degree_cap: u32,
}

impl Certificate {
    /// Builds a certificate only if the identity holds after reduction.
    pub fn new(spec: &IdealSpec, r: u32, cofactors: Vec<MultiPoly>, degree_cap: u32) -> Result<Self> {
        let cert = Certificate {
            r,
            cofactors,
            degree_cap,
        };
        if cert.cofactors.len() != spec.generators.len() {
            return Err(Error::input("one cofactor per generator is required"));
        }
        if !cert.verify(spec) {
            return Err(Error::Internal("certificate failed re-verification".into()));
        }
        Ok(cert)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn cofactors(&self) -> &[MultiPoly] {
        &self.cofactors
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    /// Residual `Q^r - sum R_i P_i` after functional reduction.
    pub fn residual(&self, spec: &IdealSpec) -> MultiPoly {
        let mut acc = spec.query.pow(self.r);
        for (rc, g) in self.cofactors.iter().zip(&spec.generators) {
            acc = acc.sub(&rc.mul(g));
        }
        acc.functional_reduce()
    }

    pub fn verify(&self, spec: &IdealSpec) -> bool {
        self.cofactors.iter().all(|c| c.degree() <= self.degree_cap) && self.residual(spec).is_zero()
    }

    pub fn to_json(&self, spec: &IdealSpec) -> Value {
        json!({
            "r": self.r,
            "D": self.degree_cap,
            "cofactors": self.cofactors.iter().map(MultiPoly::to_canonical_string).collect::<Vec<_>>(),
            "verified": self.verify(spec),
        })
    }
}

fn coefficient_column(p: &MultiPoly, rows: &mut BTreeMap<Monomial, usize>) -> Vec<(usize, u32)> {
    p.functional_reduce()
        .terms()
        .map(|(m, c)| {
            let next = rows.len();
            (*rows.entry(m.clone()).or_insert(next), c)
        })
        .collect()
}

/// Solve for cofactors of degree at most `degree` with `sum R_i P_i = target`.
fn solve_cell(spec: &IdealSpec, target: &MultiPoly, degree: u32, unknowns_cap: usize) -> Result<Option<Vec<MultiPoly>>> {
    let ctx = spec.ctx();
    let n = spec.n();
    let monos = monomials_up_to(n, degree, ctx.p());
    if monos.len() > unknowns_cap {
        return Err(Error::cap("cofactor monomials", monos.len() as f64, unknowns_cap as f64));
    }
    let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
    let target_col = coefficient_column(target, &mut rows);
    let mut columns = Vec::new();
    for g in &spec.generators {
        for m in &monos {
            let term = MultiPoly::from_terms(ctx, n, [(m.exponents().to_vec(), 1)])?;
            columns.push(coefficient_column(&term.mul(g), &mut rows));
        }
    }
    let mut a = vec![vec![0u32; columns.len()]; rows.len()];
    for (j, col) in columns.iter().enumerate() {
        for &(i, c) in col {
            a[i][j] = c;
        }
    }
    let mut b = vec![0u32; rows.len()];
    for (i, c) in target_col {
        b[i] = c;
    }
    let Some(u) = linalg::solve(ctx, &a, &b) else {
        return Ok(None);
    };
    let cofactors = u
        .chunks(monos.len().max(1))
        .take(spec.generators.len())
        .map(|chunk| {
            MultiPoly::from_terms(
                ctx,
                n,
                monos.iter().zip(chunk).map(|(m, &c)| (m.exponents().to_vec(), c as i64)),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    // no generators: the target itself must vanish
    let cofactors = if spec.generators.is_empty() { Vec::new() } else { cofactors };
    Ok(Some(cofactors))
}

/// Smallest `r` in `1..=r_max`, then smallest `D` in `0..=d_max`, admitting
/// a certificate. `None` does not prove that no certificate exists.
pub fn find_certificate(spec: &IdealSpec, d_max: u32, r_max: u32, unknowns_cap: usize) -> Result<Option<Certificate>> {
    if r_max == 0 {
        return Err(Error::input("r_max must be at least 1"));
    }
    for r in 1..=r_max {
        let target = spec.query.pow(r).functional_reduce();
        for degree in 0..=d_max {
            if let Some(cofactors) = solve_cell(spec, &target, degree, unknowns_cap)? {
                return Certificate::new(spec, r, cofactors, degree).map(Some);
            }
        }
    }
    Ok(None)
}

/// Certificate that `1` lies in the ideal, i.e. the generators have no
/// common zero.
pub fn weak_certificate(generators: &[MultiPoly], d_max: u32, unknowns_cap: usize) -> Result<Option<(IdealSpec, Certificate)>> {
    let Some(first) = generators.first() else {
        return Err(Error::input("at least one generator is required"));
    };
    let one = MultiPoly::constant(first.ctx(), first.n(), 1);
    let spec = IdealSpec::new(generators.to_vec(), one)?;
    Ok(find_certificate(&spec, d_max, 1, unknowns_cap)?.map(|c| (spec, c)))
}

/// Does `Q` vanish on every common zero of the generators? Exhaustive.
pub fn vanishes_on_variety(spec: &IdealSpec, enum_cap: u64) -> Result<bool> {
    let size = spec.ctx().domain_size(spec.n(), enum_cap, "domain p^n (vanishing oracle)")?;
    let mut pts = Points::new(spec.ctx().p(), spec.n());
    for _ in 0..size {
        let x = pts.current();
        if spec.generators.iter().all(|g| g.eval_unchecked(x) == 0) && spec.query.eval_unchecked(x) != 0 {
            return Ok(false);
        }
        pts.advance();
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecidedBy {
    Certificate,
    Oracle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadicalReport {
    pub member: bool,
    pub decided_by: DecidedBy,
    /// Certificate for `1` in `<P_1, .., P_c, 1 - y Q>` in `n + 1` variables.
    pub certificate: Option<(IdealSpec, Certificate)>,
    pub oracle: Option<bool>,
    /// False only when a certificate exists but the oracle finds a zero of
    /// the generators where `Q` does not vanish.
    pub oracle_agrees: bool,
}

/// Generators of the extended system, with `y = x_{n+1}`.
pub fn rabinowitsch_generators(spec: &IdealSpec) -> Vec<MultiPoly> {
    let n = spec.n();
    let ctx = spec.ctx();
    let mut gens: Vec<MultiPoly> = spec.generators.iter().map(|g| g.extend_vars(n + 1)).collect();
    let y = MultiPoly::var(ctx, n + 1, n);
    let one = MultiPoly::constant(ctx, n + 1, 1);
    gens.push(one.sub(&y.mul(&spec.query.extend_vars(n + 1))));
    gens
}

/// Is `Q` in the radical of `<P_1..P_c>` (as functions on `F_p^n`)?
pub fn radical_membership(spec: &IdealSpec, d_max: u32, unknowns_cap: usize, enum_cap: u64) -> Result<RadicalReport> {
    let certificate = weak_certificate(&rabinowitsch_generators(spec), d_max, unknowns_cap)?;
    let oracle = match vanishes_on_variety(spec, enum_cap) {
        Ok(v) => Some(v),
        Err(Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let (member, decided_by) = match (&certificate, oracle) {
        (Some(_), _) => (true, DecidedBy::Certificate),
        (None, Some(v)) => (v, DecidedBy::Oracle),
        (None, None) => {
            return Err(Error::cap(
                "radical membership: no certificate within d_max and domain p^n for the oracle",
                spec.ctx().size_f64(spec.n()),
                enum_cap as f64,
            ))
        }
    };
    let oracle_agrees = !(certificate.is_some() && oracle == Some(false));
    Ok(RadicalReport {
        member,
        decided_by,
        certificate,
        oracle,
        oracle_agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::{parse_poly, parse_poly_list};

    fn spec(p: u32, gens: &str, q: &str, n: usize) -> IdealSpec {
        let ctx = FieldCtx::new(p).unwrap();
        IdealSpec::new(parse_poly_list(ctx, gens, Some(n)).unwrap(), parse_poly(ctx, q, Some(n)).unwrap()).unwrap()
    }

    #[test]
    fn linear_identity() {
        let s = spec(5, "x1; x2", "x1 + x2", 2);
        let c = find_certificate(&s, 2, 2, DEFAULT_UNKNOWNS_CAP).unwrap().unwrap();
        assert_eq!((c.r(), c.degree_cap()), (1, 0));
        assert_eq!(c.cofactors()[0].to_canonical_string(), "1");
        assert_eq!(c.cofactors()[1].to_canonical_string(), "1");
    }

    #[test]
    fn weak_examples() {
        let ctx = FieldCtx::new(3).unwrap();
        let gens = parse_poly_list(ctx, "x1; x1 + 1", Some(1)).unwrap();
        let (_, c) = weak_certificate(&gens, 1, DEFAULT_UNKNOWNS_CAP).unwrap().unwrap();
        assert_eq!(c.degree_cap(), 0);
        assert_eq!(c.cofactors()[0].to_canonical_string(), "2");
        assert_eq!(c.cofactors()[1].to_canonical_string(), "1");

        let gens = parse_poly_list(ctx, "x1", Some(1)).unwrap();
        assert!(weak_certificate(&gens, 4, DEFAULT_UNKNOWNS_CAP).unwrap().is_none());

        let gens = parse_poly_list(ctx, "x1*x2; x1*x2 + 2", Some(2)).unwrap();
        let (s, c) = weak_certificate(&gens, 2, DEFAULT_UNKNOWNS_CAP).unwrap().unwrap();
        assert_eq!(c.degree_cap(), 0);
        assert!(c.verify(&s));
    }

    #[test]
    fn square_needs_r_two() {
        let s = spec(5, "x1^2", "x1", 1);
        let c = find_certificate(&s, 0, 2, DEFAULT_UNKNOWNS_CAP).unwrap().unwrap();
        assert_eq!((c.r(), c.degree_cap()), (2, 0));
        assert_eq!(c.cofactors()[0].to_canonical_string(), "1");
        assert!(find_certificate(&s, 0, 1, DEFAULT_UNKNOWNS_CAP).unwrap().is_none());
    }

    #[test]
    fn forged_certificate_is_rejected() {
        let s = spec(5, "x1", "x1 + 1", 1);
        let one = MultiPoly::constant(s.ctx(), 1, 1);
        assert!(matches!(Certificate::new(&s, 1, vec![one], 0), Err(Error::Internal(_))));
    }

    #[test]
    fn radical_examples() {
        let r = radical_membership(&spec(5, "x1^2", "x1", 1), 4, DEFAULT_UNKNOWNS_CAP, 1 << 20).unwrap();
        assert!(r.member && r.certificate.is_some() && r.oracle == Some(true) && r.oracle_agrees);

        let r = radical_membership(&spec(3, "x1", "x2", 2), 3, DEFAULT_UNKNOWNS_CAP, 1 << 20).unwrap();
        assert!(!r.member && r.certificate.is_none() && r.decided_by == DecidedBy::Oracle);

        let s = spec(5, "x1*x1 - x1", "x1^2 - x1", 1);
        let c = find_certificate(&s, 0, 1, DEFAULT_UNKNOWNS_CAP).unwrap().unwrap();
        assert_eq!(c.r(), 1);
        let r = radical_membership(&s, 3, DEFAULT_UNKNOWNS_CAP, 1 << 20).unwrap();
        assert!(r.member && r.oracle_agrees);
    }

    #[test]
    fn unknowns_cap_is_enforced() {
        let s = spec(5, "x1", "x2", 3);
        assert!(matches!(find_certificate(&s, 4, 1, 10), Err(Error::CapExceeded { .. })));
    }
}
