//! Text form: `2*x1^2*x2 + 3*x3 + 1`. Terms may also be joined by `-`.

use super::{Monomial, MultiPoly};
use crate::error::{Error, Result};
use crate::field::FieldCtx;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(u64),
    Var(usize),
    Caret,
    Star,
    Plus,
    Minus,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let b = s.as_bytes();
    let mut i = 0;
    let number = |i: &mut usize| -> Result<u64> {
        let start = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        s[start..*i]
            .parse::<u64>()
            .map_err(|_| Error::input(format!("bad number in '{s}'")))
    };
    while i < b.len() {
        match b[i] {
            c if c.is_ascii_whitespace() => i += 1,
            b'^' => {
                out.push(Tok::Caret);
                i += 1
            }
            b'*' => {
                out.push(Tok::Star);
                i += 1
            }
            b'+' => {
                out.push(Tok::Plus);
                i += 1
            }
            b'-' => {
                out.push(Tok::Minus);
                i += 1
            }
            b'x' | b'X' => {
                i += 1;
                if i >= b.len() || !b[i].is_ascii_digit() {
                    return Err(Error::input(format!("variable without index in '{s}'")));
                }
                let idx = number(&mut i)?;
                if idx == 0 {
                    return Err(Error::input("variables are numbered from x1"));
                }
                out.push(Tok::Var(idx as usize));
            }
            c if c.is_ascii_digit() => out.push(Tok::Num(number(&mut i)?)),
            c => {
                return Err(Error::input(format!(
                    "unexpected character '{}' in '{s}'",
                    c as char
                )))
            }
        }
    }
    Ok(out)
}

/// Parsed term: signed coefficient and (1-based variable, exponent) factors.
type RawTerm = (i64, Vec<(usize, u32)>);

fn parse_terms(s: &str, p: u32) -> Result<Vec<RawTerm>> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::input("empty polynomial"));
    }
    let mut terms = Vec::new();
    let mut i = 0;
    let mut sign = 1i64;
    let mut first = true;
    while i < toks.len() {
        // optional sign(s)
        let mut saw_sign = false;
        while i < toks.len() && matches!(toks[i], Tok::Plus | Tok::Minus) {
            if toks[i] == Tok::Minus {
                sign = -sign;
            }
            saw_sign = true;
            i += 1;
        }
        if !first && !saw_sign {
            return Err(Error::input(format!("missing '+' between terms in '{s}'")));
        }
        first = false;
        let mut coeff: i64 = 1;
        let mut vars = Vec::new();
        let mut expect_factor = true;
        while i < toks.len() {
            if expect_factor {
                match toks[i] {
                    Tok::Num(v) => {
                        coeff = (coeff * (v % p as u64) as i64).rem_euclid(p as i64);
                        i += 1;
                    }
                    Tok::Var(idx) => {
                        i += 1;
                        let mut e = 1u32;
                        if i < toks.len() && toks[i] == Tok::Caret {
                            i += 1;
                            match toks.get(i) {
                                Some(Tok::Num(v)) => {
                                    e = u32::try_from(*v)
                                        .map_err(|_| Error::input("exponent too large"))?;
                                    i += 1;
                                }
                                _ => return Err(Error::input(format!("'^' needs an exponent in '{s}'"))),
                            }
                        }
                        vars.push((idx, e));
                    }
                    _ => return Err(Error::input(format!("expected a factor in '{s}'"))),
                }
                expect_factor = false;
            } else if toks[i] == Tok::Star {
                i += 1;
                expect_factor = true;
            } else {
                break;
            }
        }
        if expect_factor {
            return Err(Error::input(format!("dangling operator in '{s}'")));
        }
        terms.push((sign * coeff, vars));
        sign = 1;
    }
    Ok(terms)
}

fn max_var(terms: &[RawTerm]) -> usize {
    terms
        .iter()
        .flat_map(|(_, v)| v.iter().map(|&(i, _)| i))
        .max()
        .unwrap_or(0)
}

fn build(ctx: FieldCtx, n: usize, terms: Vec<RawTerm>) -> MultiPoly {
    let mut f = MultiPoly::zero(ctx, n);
    for (c, vars) in terms {
        let mut e = vec![0u32; n];
        for (idx, k) in vars {
            e[idx - 1] += k;
        }
        f.add_term(Monomial(e), ctx.reduce_i64(c));
    }
    f
}

/// Parse one polynomial. With `n = None` the arity is the largest variable
/// index used.
pub fn parse_poly(ctx: FieldCtx, s: &str, n: Option<usize>) -> Result<MultiPoly> {
    let terms = parse_terms(s, ctx.p())?;
    let used = max_var(&terms);
    let n = match n {
        Some(n) if n < used => {
            return Err(Error::input(format!(
                "'{s}' uses x{used} but only {n} variables were declared"
            )))
        }
        Some(n) => n,
        None => used,
    };
    Ok(build(ctx, n, terms))
}

/// Parse a `;`- or newline-separated list sharing one arity.
pub fn parse_poly_list(ctx: FieldCtx, s: &str, n: Option<usize>) -> Result<Vec<MultiPoly>> {
    let pieces: Vec<&str> = s
        .split([';', '\n'])
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .collect();
    let parsed: Vec<Vec<RawTerm>> = pieces
        .iter()
        .map(|t| parse_terms(t, ctx.p()))
        .collect::<Result<_>>()?;
    let used = parsed.iter().map(|t| max_var(t)).max().unwrap_or(0);
    let n = match n {
        Some(n) if n < used => {
            return Err(Error::input(format!(
                "list uses x{used} but only {n} variables were declared"
            )))
        }
        Some(n) => n,
        None => used,
    };
    Ok(parsed.into_iter().map(|t| build(ctx, n, t)).collect())
}
