//! Brute-force reference implementations for the test suite.
//!
//! Nothing here calls the evaluation, bias, counting or code scanning paths
//! of the main modules. Arithmetic is plain `u64` modular arithmetic; the
//! only shared pieces are the prime check in [`FieldCtx`] and the term list
//! of a [`MultiPoly`].

use crate::error::{Error, Result};
use crate::ffpoly::MultiPoly;
use crate::field::FieldCtx;

/// Values of a function `F_p^n -> F_p` in lexicographic point order, last
/// coordinate fastest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    pub p: u32,
    pub n: usize,
    pub values: Vec<u32>,
}

fn checked_size(p: u32, n: usize, cap: u64) -> Result<usize> {
    let size = (p as f64).powi(n as i32);
    if size > cap as f64 {
        return Err(Error::cap("oracle domain", size, cap as f64));
    }
    Ok(size as usize)
}

fn point(p: u32, n: usize, mut idx: usize) -> Vec<u64> {
    let mut x = vec![0u64; n];
    for slot in x.iter_mut().rev() {
        *slot = (idx % p as usize) as u64;
        idx /= p as usize;
    }
    x
}

fn pow_mod(b: u64, e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    for _ in 0..e {
        r = r * b % p;
    }
    r
}

impl TruthTable {
    pub fn new(p: u32, n: usize, values: Vec<u32>) -> Result<Self> {
        FieldCtx::new(p)?;
        if values.len() as f64 != (p as f64).powi(n as i32) || values.iter().any(|&v| v >= p) {
            return Err(Error::input("truth table has the wrong length or range"));
        }
        Ok(TruthTable { p, n, values })
    }
}

/// Pointwise evaluation, one monomial at a time.
pub fn table_of(f: &MultiPoly, cap: u64) -> Result<TruthTable> {
    let (p, n) = (f.p(), f.n());
    let size = checked_size(p, n, cap)?;
    let pm = p as u64;
    let mut values = Vec::with_capacity(size);
    for idx in 0..size {
        let x = point(p, n, idx);
        let mut acc = 0u64;
        for (m, c) in f.terms() {
            let mut t = c as u64 % pm;
            for (xi, &e) in x.iter().zip(m.exponents()) {
                t = t * pow_mod(*xi, e as u64, pm) % pm;
            }
            acc = (acc + t) % pm;
        }
        values.push(acc as u32);
    }
    Ok(TruthTable { p, n, values })
}

/// Reduced polynomial with the given table, from
/// `f = sum_a T(a) prod_i (1 - (x_i - a_i)^(p-1))`.
pub fn interpolate(table: &TruthTable, cap: u64) -> Result<MultiPoly> {
    let (p, n) = (table.p, table.n);
    let size = checked_size(p, n, cap)?;
    let pm = p as u64;
    // univariate[a][e]: coefficient of t^e in 1 - (t - a)^(p-1)
    let binom = |k: u64, j: u64| -> u64 {
        let mut r = 1u64;
        for i in 0..j {
            r = r * (k - i) % pm;
            let mut inv = 1;
            while (inv * (i + 1)) % pm != 1 {
                inv += 1;
            }
            r = r * inv % pm;
        }
        r
    };
    let univariate: Vec<Vec<u64>> = (0..pm)
        .map(|a| {
            let neg_a = (pm - a) % pm;
            (0..pm)
                .map(|e| {
                    let c = binom(pm - 1, e) * pow_mod(neg_a, pm - 1 - e, pm) % pm;
                    if e == 0 {
                        (1 + pm - c) % pm
                    } else {
                        (pm - c) % pm
                    }
                })
                .collect()
        })
        .collect();
    let mut terms = Vec::new();
    for e_idx in 0..size {
        let e = point(p, n, e_idx);
        let mut coeff = 0u64;
        for (a_idx, &v) in table.values.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let a = point(p, n, a_idx);
            let mut t = v as u64;
            for (ai, ei) in a.iter().zip(&e) {
                t = t * univariate[*ai as usize][*ei as usize] % pm;
            }
            coeff = (coeff + t) % pm;
        }
        if coeff != 0 {
            terms.push((e.iter().map(|&x| x as u32).collect(), coeff as i64));
        }
    }
    MultiPoly::from_terms(FieldCtx::new(p)?, n, terms)
}

/// `|E_x e(T(x)/p)|`.
pub fn oracle_bias(table: &TruthTable) -> f64 {
    let (mut re, mut im) = (0.0, 0.0);
    for &v in &table.values {
        let theta = std::f64::consts::TAU * v as f64 / table.p as f64;
        re += theta.cos();
        im += theta.sin();
    }
    let k = table.values.len() as f64;
    (re / k).hypot(im / k)
}

/// Points where every table vanishes.
pub fn oracle_count_zeros(tables: &[TruthTable]) -> Result<u64> {
    let Some(first) = tables.first() else {
        return Err(Error::input("at least one table is needed"));
    };
    if tables.iter().any(|t| t.values.len() != first.values.len()) {
        return Err(Error::input("tables disagree on domain"));
    }
    Ok((0..first.values.len())
        .filter(|&i| tables.iter().all(|t| t.values[i] == 0))
        .count() as u64)
}

/// Codewords of the degree-`d` Reed-Muller code within `radius` of
/// `center`, as `(disagreements, table)` sorted ascending.
pub fn oracle_list_decode(
    p: u32,
    n: usize,
    d: u32,
    center: &TruthTable,
    radius: f64,
    cap: u64,
) -> Result<Vec<(u64, Vec<u32>)>> {
    let size = checked_size(p, n, cap)?;
    if center.values.len() != size {
        return Err(Error::input("center does not match p^n"));
    }
    let mut exps: Vec<Vec<u64>> = Vec::new();
    for idx in 0..(d as usize + 1).pow(n as u32) {
        let mut e = vec![0u64; n];
        let mut r = idx;
        for slot in e.iter_mut() {
            *slot = (r % (d as usize + 1)) as u64;
            r /= d as usize + 1;
        }
        if e.iter().sum::<u64>() <= d as u64 {
            exps.push(e);
        }
    }
    let count = (p as f64).powi(exps.len() as i32);
    if count > cap as f64 {
        return Err(Error::cap("oracle codeword count", count, cap as f64));
    }
    let pm = p as u64;
    let points: Vec<Vec<u64>> = (0..size).map(|i| point(p, n, i)).collect();
    let mono: Vec<Vec<u64>> = exps
        .iter()
        .map(|e| {
            points
                .iter()
                .map(|x| x.iter().zip(e).fold(1, |acc, (xi, ei)| acc * pow_mod(*xi, *ei, pm) % pm))
                .collect()
        })
        .collect();
    let limit = radius + 1e-12;
    let mut out = Vec::new();
    for cw in 0..count as u64 {
        let mut coeffs = Vec::with_capacity(exps.len());
        let mut r = cw;
        for _ in 0..exps.len() {
            coeffs.push(r % pm);
            r /= pm;
        }
        let table: Vec<u32> = (0..size)
            .map(|x| (coeffs.iter().zip(&mono).map(|(c, m)| c * m[x]).sum::<u64>() % pm) as u32)
            .collect();
        let dis = table.iter().zip(&center.values).filter(|(a, b)| a != b).count() as u64;
        if dis as f64 / size as f64 <= limit {
            out.push((dis, table));
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::parse_poly;

    #[test]
    fn table_examples() {
        let ctx = FieldCtx::new(3).unwrap();
        assert_eq!(table_of(&MultiPoly::zero(ctx, 2), 100).unwrap().values, vec![0; 9]);
        let x1 = parse_poly(ctx, "x1", Some(1)).unwrap();
        assert_eq!(table_of(&x1, 100).unwrap().values, vec![0, 1, 2]);
        let f = parse_poly(ctx, "x1^4*x2 + 2*x2^3 + x1", Some(2)).unwrap();
        let back = interpolate(&table_of(&f, 100).unwrap(), 100).unwrap();
        assert_eq!(back, f.functional_reduce());
    }

    #[test]
    fn reference_values() {
        let ctx = FieldCtx::new(3).unwrap();
        let zero = table_of(&MultiPoly::zero(ctx, 2), 100).unwrap();
        assert!((oracle_bias(&zero) - 1.0).abs() < 1e-12);
        let f = table_of(&parse_poly(ctx, "x1*x2", Some(2)).unwrap(), 100).unwrap();
        assert!((oracle_bias(&f) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(oracle_count_zeros(&[f]).unwrap(), 5);
        let c = TruthTable::new(3, 1, vec![0, 0, 0]).unwrap();
        assert_eq!(oracle_list_decode(3, 1, 1, &c, 0.0, 1000).unwrap(), vec![(0, vec![0, 0, 0])]);
        assert_eq!(oracle_list_decode(3, 1, 1, &c, 2.0 / 3.0, 1000).unwrap().len(), 7);
    }
}
