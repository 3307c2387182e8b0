//! Outer functions `Gamma: F_p^c -> F_p` applied to a tuple of polynomials.

use super::MultiPoly;
use crate::error::{Error, Result};
use crate::field::{point_index, FieldCtx};

/// Dense lookup table over `F_p^c`, indexed in lexicographic point order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaTable {
    ctx: FieldCtx,
    arity: usize,
    values: Vec<u32>,
}

impl GammaTable {
    pub fn new(ctx: FieldCtx, arity: usize, values: Vec<u32>) -> Result<Self> {
        let expected = ctx.size_f64(arity);
        if values.len() as f64 != expected {
            return Err(Error::input(format!(
                "table has {} entries, expected p^c = {expected}",
                values.len()
            )));
        }
        if values.iter().any(|&v| v >= ctx.p()) {
            return Err(Error::input("table value outside [0, p)"));
        }
        Ok(GammaTable { ctx, arity, values })
    }

    /// Table of a polynomial in `c` variables.
    pub fn from_poly(gamma: &MultiPoly) -> Self {
        GammaTable {
            ctx: gamma.ctx(),
            arity: gamma.n(),
            values: gamma.truth_table(),
        }
    }

    pub fn constant(ctx: FieldCtx, arity: usize, v: u32) -> Self {
        GammaTable {
            ctx,
            arity,
            values: vec![v % ctx.p(); ctx.size_f64(arity) as usize],
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn get(&self, y: &[u32]) -> u32 {
        self.values[point_index(self.ctx.p(), y)]
    }
}

/// The pointwise function `x -> Gamma(g_1(x), ..., g_c(x))`.
#[derive(Debug, Clone)]
pub struct Composed {
    table: GammaTable,
    polys: Vec<MultiPoly>,
    n: usize,
}

impl Composed {
    pub fn eval(&self, x: &[u32]) -> u32 {
        let y: Vec<u32> = self.polys.iter().map(|g| g.eval_unchecked(x)).collect();
        self.table.get(&y)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn truth_table(&self) -> Vec<u32> {
        let p = self.table.ctx.p();
        let tables: Vec<Vec<u32>> = self.polys.iter().map(MultiPoly::truth_table).collect();
        let size = self.table.ctx.size_f64(self.n) as usize;
        let mut y = vec![0u32; self.polys.len()];
        (0..size)
            .map(|i| {
                for (slot, t) in y.iter_mut().zip(&tables) {
                    *slot = t[i];
                }
                self.table.values[point_index(p, &y)]
            })
            .collect()
    }
}

pub fn compose_gamma(table: GammaTable, polys: Vec<MultiPoly>, n: usize) -> Result<Composed> {
    if polys.len() != table.arity {
        return Err(Error::input(format!(
            "table has arity {} but {} polynomials were supplied",
            table.arity,
            polys.len()
        )));
    }
    if polys.iter().any(|g| g.n() != n || g.ctx() != table.ctx) {
        return Err(Error::input("polynomials disagree on field or arity"));
    }
    Ok(Composed { table, polys, n })
}

/// Expand `Gamma(g_1, ..., g_c)` when `Gamma` is itself a polynomial in
/// `c` variables; the result is functionally reduced.
pub fn compose_polynomial(gamma: &MultiPoly, polys: &[MultiPoly]) -> Result<MultiPoly> {
    if gamma.n() == 0 {
        return Err(Error::input("outer polynomial needs at least one variable"));
    }
    Ok(gamma.substitute(polys)?.functional_reduce())
}
