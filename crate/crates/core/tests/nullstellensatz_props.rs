mod common;

use common::*;
use polystruct::field::point_from_index;
use polystruct::nullstellensatz::{find_certificate, radical_membership, vanishes_on_variety, IdealSpec};
use proptest::prelude::*;
use rand::Rng;

const UNKNOWNS: usize = 20_000;
const CAP: u64 = 1_000_000;

fn instance(seed: u64) -> IdealSpec {
    let mut r = rng(seed);
    let p = if r.gen_bool(0.5) { 3 } else { 5 };
    let n = r.gen_range(1..=3);
    let c = r.gen_range(1..=2);
    let (gens, q) = vanishing_instance(&mut r, p, n, c, 2);
    IdealSpec::new(gens, q).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certificates_hold_pointwise(seed in any::<u64>()) {
        let spec = instance(seed);
        if let Some(cert) = find_certificate(&spec, 3, 2, UNKNOWNS).unwrap() {
            prop_assert!(cert.verify(&spec));
            prop_assert!(cert.residual(&spec).is_zero());
            let (p, n) = (spec.ctx().p(), spec.n());
            for i in 0..(p as usize).pow(n as u32) {
                let x = point_from_index(p, n, i);
                let lhs = spec.query().pow(cert.r()).eval(&x).unwrap();
                let rhs = spec
                    .generators()
                    .iter()
                    .zip(cert.cofactors())
                    .fold(0u32, |acc, (g, c)| (acc + g.eval(&x).unwrap() * c.eval(&x).unwrap() % p) % p);
                prop_assert_eq!(lhs, rhs);
            }
            prop_assert!(cert.cofactors().iter().all(|c| c.degree() <= cert.degree_cap()));
        }
    }

    #[test]
    fn certificates_are_sound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = 3;
        let n = r.gen_range(1..=3);
        let c = r.gen_range(1..=2);
        let gens = random_system(&mut r, ctx(p), n, c, 2);
        let q = random_poly(&mut r, ctx(p), n, 2, 0.5);
        let spec = IdealSpec::new(gens, q).unwrap();
        if find_certificate(&spec, 3, 2, UNKNOWNS).unwrap().is_some() {
            prop_assert!(vanishes_on_variety(&spec, CAP).unwrap());
        }
        let report = radical_membership(&spec, 3, UNKNOWNS, CAP).unwrap();
        prop_assert!(report.oracle_agrees);
        prop_assert_eq!(report.member, report.oracle.unwrap());
    }

    #[test]
    fn search_is_monotone_and_deterministic(seed in any::<u64>()) {
        let spec = instance(seed);
        let first = find_certificate(&spec, 3, 2, UNKNOWNS).unwrap();
        prop_assert_eq!(&first, &find_certificate(&spec, 3, 2, UNKNOWNS).unwrap());
        if let Some(cert) = first {
            let (r, d) = (cert.r(), cert.degree_cap());
            prop_assert!(find_certificate(&spec, d + 1, r, UNKNOWNS).unwrap().is_some());
            prop_assert!(find_certificate(&spec, d, r + 1, UNKNOWNS).unwrap().is_some());
        }
    }
}
