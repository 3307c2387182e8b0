//! Bias `E_x e(f(x))` and Gowers uniformity norms.
//!
//! Exact sums are accumulated as integer histograms of the phase `f(x)` and
//! only then folded against the character table, so the result does not
//! depend on enumeration order or on how the domain is split across threads.

use crate::error::{Error, Result};
use crate::ffpoly::MultiPoly;
use crate::field::{point_from_index, point_index, FieldCtx};
use crate::rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub const DEFAULT_ENUM_CAP: u64 = 10_000_000;

/// An averaged character sum. `sample_count == 0` marks an exact value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacterSum {
    pub re: f64,
    pub im: f64,
    pub sample_count: u64,
}

impl CharacterSum {
    pub fn magnitude(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn is_exact(&self) -> bool {
        self.sample_count == 0
    }

    /// Fold a phase histogram (`hist[a]` = number of terms with phase `a`).
    pub fn from_histogram(ctx: FieldCtx, hist: &[u64], sample_count: u64) -> Self {
        let table = ctx.character_table();
        let total: u64 = hist.iter().sum();
        let (mut re, mut im) = (0.0, 0.0);
        for (&(c, s), &h) in table.iter().zip(hist) {
            re += h as f64 * c;
            im += h as f64 * s;
        }
        let t = total.max(1) as f64;
        CharacterSum {
            re: re / t,
            im: im / t,
            sample_count,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
}

/// Exhaustive vs sampled evaluation, with the knobs each needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    pub mode: Mode,
    pub enum_cap: u64,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            mode: Mode::Exact,
            enum_cap: DEFAULT_ENUM_CAP,
            samples: 100_000,
            seed: 0,
            workers: 1,
        }
    }
}

impl Budget {
    pub fn exact(enum_cap: u64) -> Self {
        Budget {
            enum_cap,
            ..Default::default()
        }
    }

    pub fn sampled(samples: u64, seed: u64) -> Self {
        Budget {
            mode: Mode::Sampled,
            samples,
            seed,
            ..Default::default()
        }
    }
}

fn phase_histogram_range(f: &MultiPoly, start: usize, end: usize) -> Vec<u64> {
    let p = f.p();
    let mut hist = vec![0u64; p as usize];
    if start >= end {
        return hist;
    }
    let mut x = point_from_index(p, f.n(), start);
    for _ in start..end {
        hist[f.eval_unchecked(&x) as usize] += 1;
        for i in (0..x.len()).rev() {
            x[i] += 1;
            if x[i] < p {
                break;
            }
            x[i] = 0;
        }
    }
    hist
}

/// Split `0..total` into `workers` contiguous ranges, run `job` on each and
/// add the resulting histograms.
fn parallel_histogram<F>(total: usize, workers: usize, width: usize, job: F) -> Vec<u64>
where
    F: Fn(usize, usize) -> Vec<u64> + Sync,
{
    let workers = workers.max(1).min(total.max(1));
    if workers == 1 {
        return job(0, total);
    }
    let chunk = total.div_ceil(workers);
    let parts: Vec<Vec<u64>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let job = &job;
                s.spawn(move || job(w * chunk, ((w + 1) * chunk).min(total)))
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut hist = vec![0u64; width];
    for part in parts {
        for (h, v) in hist.iter_mut().zip(part) {
            *h += v;
        }
    }
    hist
}

pub fn exact_bias(f: &MultiPoly, enum_cap: u64) -> Result<CharacterSum> {
    exact_bias_with_workers(f, enum_cap, 1)
}

pub fn exact_bias_with_workers(f: &MultiPoly, enum_cap: u64, workers: usize) -> Result<CharacterSum> {
    let size = f
        .ctx()
        .domain_size(f.n(), enum_cap, "domain p^n (use sampled_bias)")? as usize;
    let hist = parallel_histogram(size, workers, f.p() as usize, |a, b| {
        phase_histogram_range(f, a, b)
    });
    Ok(CharacterSum::from_histogram(f.ctx(), &hist, 0))
}

/// Bias of a function given by its truth table.
pub fn bias_of_table(ctx: FieldCtx, table: &[u32]) -> CharacterSum {
    let mut hist = vec![0u64; ctx.p() as usize];
    for &v in table {
        hist[v as usize] += 1;
    }
    CharacterSum::from_histogram(ctx, &hist, 0)
}

/// Monte Carlo estimate from `samples` uniform points.
pub fn sampled_bias(f: &MultiPoly, samples: u64, seed: u64) -> Result<CharacterSum> {
    if samples == 0 {
        return Err(Error::input("samples must be at least 1"));
    }
    let p = f.p();
    let mut r = rng::rng_from(seed);
    let mut hist = vec![0u64; p as usize];
    let mut x = vec![0u32; f.n()];
    for _ in 0..samples {
        for v in x.iter_mut() {
            *v = r.gen_range(0..p);
        }
        hist[f.eval_unchecked(&x) as usize] += 1;
    }
    Ok(CharacterSum::from_histogram(f.ctx(), &hist, samples))
}

pub fn bias(f: &MultiPoly, budget: &Budget) -> Result<CharacterSum> {
    match budget.mode {
        Mode::Exact => exact_bias_with_workers(f, budget.enum_cap, budget.workers),
        Mode::Sampled => sampled_bias(f, budget.samples, budget.seed),
    }
}

/// Gowers `U^d` norm of `e(f)` together with the raw average
/// `E_{x, y_1..y_d} e(D_{y_1..y_d} f(x))`, which equals `norm^(2^d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GowersValue {
    pub d: u32,
    pub norm: f64,
    pub average: CharacterSum,
}

/// Phase of the d-fold derivative at `(x, y_1..y_d)` from a truth table.
/// `coords` holds `x` followed by the `d` directions, `n` coordinates each.
fn cube_phase(ctx: FieldCtx, table: &[u32], n: usize, d: usize, coords: &[u32], scratch: &mut [Vec<u32>]) -> u32 {
    let p = ctx.p();
    // scratch[w] = x + sum_{i in w} y_i, filled by lowest-set-bit recursion
    scratch[0].copy_from_slice(&coords[..n]);
    let mut acc = 0u32;
    for w in 0..(1usize << d) {
        if w > 0 {
            let bit = w.trailing_zeros() as usize;
            let prev = w & (w - 1);
            let y = &coords[n * (bit + 1)..n * (bit + 2)];
            let (lo, hi) = scratch.split_at_mut(w);
            for ((dst, &a), &b) in hi[0].iter_mut().zip(&lo[prev]).zip(y) {
                let s = a + b;
                *dst = if s >= p { s - p } else { s };
            }
        }
        let v = table[point_index(p, &scratch[w])];
        if (d - w.count_ones() as usize).is_multiple_of(2) {
            acc = ctx.add(acc, v);
        } else {
            acc = ctx.sub(acc, v);
        }
    }
    acc
}

pub fn gowers_norm(f: &MultiPoly, d: u32, budget: &Budget) -> Result<GowersValue> {
    if d == 0 {
        return Err(Error::input("Gowers norm order must be at least 1"));
    }
    let ctx = f.ctx();
    let n = f.n();
    let du = d as usize;
    let table_size = ctx.domain_size(n, budget.enum_cap, "truth table p^n")?;
    let table = f.truth_table();
    debug_assert_eq!(table.len() as u64, table_size);
    let dims = n * (du + 1);
    let average = match budget.mode {
        Mode::Exact => {
            let total = ctx.domain_size(dims, budget.enum_cap, "Gowers domain p^(n(d+1))")? as usize;
            let hist = parallel_histogram(total, budget.workers, ctx.p() as usize, |a, b| {
                let mut hist = vec![0u64; ctx.p() as usize];
                if a >= b {
                    return hist;
                }
                let mut scratch = vec![vec![0u32; n]; 1 << du];
                let mut coords = point_from_index(ctx.p(), dims, a);
                for _ in a..b {
                    hist[cube_phase(ctx, &table, n, du, &coords, &mut scratch) as usize] += 1;
                    for i in (0..dims).rev() {
                        coords[i] += 1;
                        if coords[i] < ctx.p() {
                            break;
                        }
                        coords[i] = 0;
                    }
                }
                hist
            });
            CharacterSum::from_histogram(ctx, &hist, 0)
        }
        Mode::Sampled => {
            if budget.samples == 0 {
                return Err(Error::input("samples must be at least 1"));
            }
            let mut r = rng::rng_from(budget.seed);
            let mut hist = vec![0u64; ctx.p() as usize];
            let mut scratch = vec![vec![0u32; n]; 1 << du];
            let mut coords = vec![0u32; dims];
            for _ in 0..budget.samples {
                for v in coords.iter_mut() {
                    *v = r.gen_range(0..ctx.p());
                }
                hist[cube_phase(ctx, &table, n, du, &coords, &mut scratch) as usize] += 1;
            }
            CharacterSum::from_histogram(ctx, &hist, budget.samples)
        }
    };
    let norm = average.re.max(0.0).powf(1.0 / (1u64 << d) as f64);
    Ok(GowersValue { d, norm, average })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::parse_poly;

    fn poly(p: u32, s: &str, n: usize) -> MultiPoly {
        parse_poly(FieldCtx::new(p).unwrap(), s, Some(n)).unwrap()
    }

    #[test]
    fn exact_bias_examples() {
        let b = exact_bias(&poly(3, "0", 2), DEFAULT_ENUM_CAP).unwrap();
        assert!((b.re - 1.0).abs() < 1e-12 && b.im.abs() < 1e-12);
        let b = exact_bias(&poly(5, "x1", 1), DEFAULT_ENUM_CAP).unwrap();
        assert!(b.magnitude() < 1e-12);
        let b = exact_bias(&poly(3, "x1*x2", 2), DEFAULT_ENUM_CAP).unwrap();
        assert!((b.re - 1.0 / 3.0).abs() < 1e-12 && b.im.abs() < 1e-12);
    }

    #[test]
    fn cap_is_enforced() {
        let err = exact_bias(&poly(3, "x1", 10), 1000).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn workers_do_not_change_the_result() {
        let f = poly(5, "x1*x2 + 3*x3^2 + x1", 3);
        let a = exact_bias_with_workers(&f, DEFAULT_ENUM_CAP, 1).unwrap();
        let b = exact_bias_with_workers(&f, DEFAULT_ENUM_CAP, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sampled_bias_examples() {
        let z = sampled_bias(&poly(3, "0", 2), 50, 9).unwrap();
        assert_eq!((z.re, z.im, z.sample_count), (1.0, 0.0, 50));
        let f = poly(3, "x1*x2", 2);
        let s = sampled_bias(&f, 100_000, 42).unwrap();
        assert!((s.magnitude() - 1.0 / 3.0).abs() < 0.02);
        assert_eq!(s, sampled_bias(&f, 100_000, 42).unwrap());
        assert!(sampled_bias(&f, 0, 1).is_err());
    }

    #[test]
    fn gowers_examples() {
        let b = Budget::default();
        assert!(gowers_norm(&poly(3, "x1 + 2*x2", 2), 1, &b).unwrap().norm < 1e-6);
        for d in 1..=3 {
            let g = gowers_norm(&poly(3, "2", 1), d, &b).unwrap();
            assert!((g.norm - 1.0).abs() < 1e-12);
        }
        // D_{y1,y2}(x1*x2) is the bilinear form y1_1*y2_2 + y1_2*y2_1, so the
        // mean phase is 1/9 and the norm is 3^(-1/2)
        let g = gowers_norm(&poly(3, "x1*x2", 2), 2, &b).unwrap();
        assert!((g.average.re - 1.0 / 9.0).abs() < 1e-12);
        assert!((g.norm - 3f64.powf(-0.5)).abs() < 1e-12);
    }

    #[test]
    fn u1_is_bias_magnitude() {
        let f = poly(5, "x1^2 + 2*x2", 2);
        let g = gowers_norm(&f, 1, &Budget::default()).unwrap();
        let m = exact_bias(&f, DEFAULT_ENUM_CAP).unwrap().magnitude();
        assert!((g.norm - m).abs() < 1e-9);
    }
}
