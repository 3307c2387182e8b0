#![allow(dead_code)]

use polystruct::ffpoly::{monomials_up_to, MultiPoly};
use polystruct::FieldCtx;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ctx(p: u32) -> FieldCtx {
    FieldCtx::new(p).unwrap()
}

/// Random polynomial of degree at most `d`, each monomial kept with
/// probability `density`.
pub fn random_poly(r: &mut impl Rng, ctx: FieldCtx, n: usize, d: u32, density: f64) -> MultiPoly {
    let mut terms: Vec<(Vec<u32>, i64)> = Vec::new();
    for m in monomials_up_to(n, d, ctx.p()) {
        if r.gen_bool(density) {
            terms.push((m.exponents().to_vec(), r.gen_range(1..ctx.p()) as i64));
        }
    }
    MultiPoly::from_terms(ctx, n, terms).unwrap()
}

/// Random polynomial of degree exactly `d` (when `d < p`).
pub fn random_poly_exact_degree(r: &mut impl Rng, ctx: FieldCtx, n: usize, d: u32, density: f64) -> MultiPoly {
    loop {
        let f = random_poly(r, ctx, n, d, density);
        if f.degree() == d {
            return f;
        }
    }
}

pub fn random_point(r: &mut impl Rng, p: u32, n: usize) -> Vec<u32> {
    (0..n).map(|_| r.gen_range(0..p)).collect()
}

pub fn random_table(r: &mut impl Rng, p: u32, len: usize) -> Vec<u32> {
    (0..len).map(|_| r.gen_range(0..p)).collect()
}

/// `c` random generators of degree at most `d`, each nonconstant.
pub fn random_system(r: &mut impl Rng, ctx: FieldCtx, n: usize, c: usize, d: u32) -> Vec<MultiPoly> {
    (0..c)
        .map(|_| {
            let deg = r.gen_range(1..=d);
            random_poly_exact_degree(r, ctx, n, deg, 0.5)
        })
        .collect()
}

/// A generator system with a query that vanishes on its variety:
/// `Q = (sum A_i P_i)^k`, the `A_i` of degree at most one and `k <= 2`.
pub fn vanishing_instance(r: &mut impl Rng, p: u32, n: usize, c: usize, d: u32) -> (Vec<MultiPoly>, MultiPoly) {
    let cx = ctx(p);
    let gens = random_system(r, cx, n, c, d);
    let mut q = MultiPoly::zero(cx, n);
    for g in &gens {
        q = q.add(&random_poly(r, cx, n, 1, 0.6).mul(g));
    }
    if r.gen_bool(0.3) {
        q = q.mul(&q.clone());
    }
    (gens, q.functional_reduce())
}
