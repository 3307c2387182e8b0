//! Prime-field arithmetic and enumeration of `F_p^n`.
//!
//! Elements are stored as their canonical lift in `0..p`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Context for `F_p`. `p` is checked for primality on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldCtx {
    p: u32,
}

impl FieldCtx {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::input(format!("modulus {p} is not a prime")));
        }
        let mut i = 2u32;
        while (i as u64) * (i as u64) <= p as u64 {
            if p.is_multiple_of(i) {
                return Err(Error::input(format!("modulus {p} is not a prime")));
            }
            i += 1;
        }
        Ok(FieldCtx { p })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p as u64 - 2))
        }
    }

    /// `n!` reduced mod p (zero once `n >= p`).
    pub fn factorial(&self, n: u32) -> u32 {
        (1..=n).fold(1 % self.p, |acc, k| self.mul(acc, k % self.p))
    }

    /// Binomial coefficient `C(n, k)` mod p for `n < p`.
    pub fn binomial_small(&self, n: u32, k: u32) -> u32 {
        if k > n {
            return 0;
        }
        let num = self.factorial(n);
        let den = self.mul(self.factorial(k), self.factorial(n - k));
        self.mul(num, self.inv(den).expect("n < p keeps factorials invertible"))
    }

    /// `p^n` as a float, used for cap checks that may overflow integers.
    pub fn size_f64(&self, n: usize) -> f64 {
        (self.p as f64).powi(n as i32)
    }

    /// `p^n` when it fits below `cap`, else a cap error naming `what`.
    pub fn domain_size(&self, n: usize, cap: u64, what: &str) -> Result<u64> {
        let size = self.size_f64(n);
        if size > cap as f64 {
            return Err(Error::cap(what, size, cap as f64));
        }
        Ok(size as u64)
    }

    /// Unit-circle table for the additive character `e(a) = exp(2 pi i a / p)`.
    pub fn character_table(&self) -> Vec<(f64, f64)> {
        let p = self.p as f64;
        (0..self.p)
            .map(|a| {
                let theta = 2.0 * std::f64::consts::PI * a as f64 / p;
                (theta.cos(), theta.sin())
            })
            .collect()
    }
}

/// Lexicographic odometer over `F_p^n`; the last coordinate moves fastest.
#[derive(Debug, Clone)]
pub struct Points {
    p: u32,
    current: Vec<u32>,
    done: bool,
}

impl Points {
    pub fn new(p: u32, n: usize) -> Self {
        Points {
            p,
            current: vec![0; n],
            done: false,
        }
    }

    /// Advance in place; returns false after the last point.
    pub fn advance(&mut self) -> bool {
        for i in (0..self.current.len()).rev() {
            self.current[i] += 1;
            if self.current[i] < self.p {
                return true;
            }
            self.current[i] = 0;
        }
        self.done = true;
        false
    }

    pub fn current(&self) -> &[u32] {
        &self.current
    }
}

impl Iterator for Points {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        self.advance();
        Some(out)
    }
}

/// Index of a point in lexicographic order.
pub fn point_index(p: u32, x: &[u32]) -> usize {
    x.iter().fold(0usize, |acc, &v| acc * p as usize + v as usize)
}

/// Inverse of [`point_index`].
pub fn point_from_index(p: u32, n: usize, mut idx: usize) -> Vec<u32> {
    let mut x = vec![0u32; n];
    for slot in x.iter_mut().rev() {
        *slot = (idx % p as usize) as u32;
        idx /= p as usize;
    }
    x
}
