mod common;

use common::*;
use polystruct::decompose::{quadratic_rank, PipelineConfig, PolyRank};
use polystruct::factor::{equidistribution_violations, refines, regularize, PolynomialFactor};
use polystruct::ffpoly::{compose_polynomial, MultiPoly};
use polystruct::field::point_from_index;
use proptest::prelude::*;
use rand::Rng;

const CAP: u64 = 10_000_000;

fn random_factor(seed: u64, p: u32, n: usize, c: usize) -> PolynomialFactor {
    let mut r = rng(seed);
    let cx = ctx(p);
    let polys = (0..c)
        .map(|_| {
            let d = r.gen_range(1..=2);
            random_poly_exact_degree(&mut r, cx, n, d, 0.5)
        })
        .collect();
    PolynomialFactor::new(cx, n, polys).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn regularization_refines_pointwise(seed in any::<u64>(), c in 1usize..=3) {
        let (p, n) = (3, 3);
        let base = random_factor(seed, p, n, c);
        let reg = regularize(&base, 2, &PipelineConfig { seed, ..Default::default() }).unwrap();
        prop_assert!(reg.complete);
        let size = (p as usize).pow(n as u32);
        let pts: Vec<Vec<u32>> = (0..size).map(|i| point_from_index(p, n, i)).collect();
        for x in &pts {
            for y in &pts {
                if reg.factor.atom_of(x) == reg.factor.atom_of(y) {
                    prop_assert_eq!(base.atom_of(x), base.atom_of(y));
                }
            }
        }
        prop_assert!(refines(&reg.factor, &base, CAP).unwrap());
    }

    #[test]
    fn regular_factors_are_equidistributed(seed in any::<u64>(), c in 1usize..=3, s in 1u32..=2) {
        let base = random_factor(seed, 3, 4, c);
        let reg = regularize(&base, s, &PipelineConfig { seed, ..Default::default() }).unwrap();
        prop_assert!(reg.complete);
        prop_assert_eq!(reg.factor.regularity_s(), s);
        prop_assert_eq!(equidistribution_violations(&reg.factor, s, CAP, CAP).unwrap(), 0);
    }

    #[test]
    fn composition_over_regular_factors_is_faithful(seed in any::<u64>(), c in 1usize..=3) {
        let (p, n) = (5, 4);
        let base = random_factor(seed, p, n, c);
        let reg = regularize(&base, 2, &PipelineConfig { seed, ..Default::default() }).unwrap();
        prop_assert!(reg.complete);
        let h = reg.factor.polys();
        let degs: Vec<u32> = h.iter().map(MultiPoly::degree).collect();
        // random outer polynomial whose monomials have weight below p
        let mut r = rng(seed ^ 0x5eed);
        let cx = ctx(p);
        let mut terms = Vec::new();
        for _ in 0..4 {
            let e: Vec<u32> = (0..h.len()).map(|_| r.gen_range(0..3)).collect();
            let weight: u32 = e.iter().zip(&degs).map(|(a, b)| a * b).sum();
            if weight < p {
                terms.push((e, r.gen_range(1..p) as i64));
            }
        }
        let gamma = MultiPoly::from_terms(cx, h.len(), terms).unwrap();
        prop_assume!(!gamma.is_zero());
        let f = compose_polynomial(&gamma, h).unwrap();
        for (m, _) in gamma.terms() {
            let weight: u32 = m.exponents().iter().zip(&degs).map(|(a, b)| a * b).sum();
            prop_assert!(weight <= f.degree(), "weight {} > deg {} for {}", weight, f.degree(), gamma);
        }
    }

    #[test]
    fn hyperplane_restriction_keeps_rank(seed in any::<u64>(), n in 2usize..=5, i in 0usize..5) {
        let mut r = rng(seed);
        let f = random_poly_exact_degree(&mut r, ctx(5), n, 2, 0.6);
        let var = i % n;
        let g = f.restrict(var, 0).unwrap();
        let rank = |q: &MultiPoly| match quadratic_rank(q).unwrap() {
            PolyRank::Finite(v) => v as i64,
            PolyRank::Infinite => i64::MAX,
        };
        prop_assert!(rank(&g) >= rank(&f) - 3);
    }
}
