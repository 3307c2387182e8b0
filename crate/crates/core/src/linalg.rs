//! Dense Gaussian elimination over `F_p`.
//!
//! Pivots are always taken from the lowest eligible row index so results
//! are reproducible.

use crate::field::FieldCtx;

/// Reduced row echelon form in place. Returns the pivot column of each
/// nonzero row, in order.
pub fn rref(ctx: FieldCtx, rows: &mut [Vec<u32>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = ctx.inv(rows[r][col]).unwrap();
        for v in rows[r].iter_mut() {
            *v = ctx.mul(*v, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                *v = ctx.sub(*v, ctx.mul(factor, pv));
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank(ctx: FieldCtx, rows: &[Vec<u32>]) -> usize {
    let mut m = rows.to_vec();
    rref(ctx, &mut m).len()
}

/// Solve `A u = b` (rows of `a` are equations). Free variables are set to
/// zero. `None` when inconsistent.
pub fn solve(ctx: FieldCtx, a: &[Vec<u32>], b: &[u32]) -> Option<Vec<u32>> {
    let nvars = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<u32>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    if aug.is_empty() {
        return Some(vec![0; nvars]);
    }
    let pivots = rref(ctx, &mut aug);
    if pivots.last() == Some(&nvars) {
        return None;
    }
    let mut u = vec![0u32; nvars];
    for (row, &col) in pivots.iter().enumerate() {
        u[col] = aug[row][nvars];
    }
    Some(u)
}

/// Basis of `{u : rows . u = 0}`, one vector per free column in increasing
/// column order.
pub fn null_space(ctx: FieldCtx, rows: &[Vec<u32>], ncols: usize) -> Vec<Vec<u32>> {
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    let pivots = rref(ctx, &mut m);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut u = vec![0u32; ncols];
        u[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            u[pc] = ctx.neg(m[row][free]);
        }
        basis.push(u);
    }
    basis
}

/// Indices of a maximal subset of `vectors`, chosen greedily in input
/// order, that is linearly independent.
pub fn independent_subset(ctx: FieldCtx, vectors: &[Vec<u32>]) -> Vec<usize> {
    // basis kept in echelon form: (pivot column, normalized row)
    let mut basis: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut keep = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for (pc, row) in &basis {
            let f = w[*pc];
            if f != 0 {
                for (x, &y) in w.iter_mut().zip(row) {
                    *x = ctx.sub(*x, ctx.mul(f, y));
                }
            }
        }
        if let Some(pc) = w.iter().position(|&x| x != 0) {
            let inv = ctx.inv(w[pc]).unwrap();
            for x in w.iter_mut() {
                *x = ctx.mul(*x, inv);
            }
            // keep earlier rows reduced against the new pivot
            for (_, row) in basis.iter_mut() {
                let f = row[pc];
                if f != 0 {
                    for (x, &y) in row.iter_mut().zip(&w) {
                        *x = ctx.sub(*x, ctx.mul(f, y));
                    }
                }
            }
            basis.push((pc, w));
            keep.push(idx);
        }
    }
    keep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        let ctx = FieldCtx::new(5).unwrap();
        assert_eq!(rank(ctx, &[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank(ctx, &[vec![1, 2], vec![2, 3]]), 2);
        assert_eq!(rank(ctx, &[vec![0, 0]]), 0);
        assert_eq!(rank(ctx, &[]), 0);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let ctx = FieldCtx::new(7).unwrap();
        let a = vec![vec![1, 1], vec![1, 6]];
        let u = solve(ctx, &a, &[3, 1]).unwrap();
        assert_eq!(ctx.add(u[0], u[1]), 3);
        assert_eq!(ctx.add(u[0], ctx.mul(6, u[1])), 1);
        assert!(solve(ctx, &[vec![1, 1], vec![2, 2]], &[1, 3]).is_none());
    }

    #[test]
    fn null_space_is_annihilated() {
        let ctx = FieldCtx::new(5).unwrap();
        let rows = vec![vec![1, 2, 3], vec![2, 4, 1]];
        let ns = null_space(ctx, &rows, 3);
        assert_eq!(ns.len(), 3 - rank(ctx, &rows));
        for u in &ns {
            for r in &rows {
                let dot = r.iter().zip(u).fold(0, |acc, (&a, &b)| ctx.add(acc, ctx.mul(a, b)));
                assert_eq!(dot, 0);
            }
        }
        assert_eq!(null_space(ctx, &[], 2).len(), 2);
    }

    #[test]
    fn independent_subset_is_greedy() {
        let ctx = FieldCtx::new(3).unwrap();
        let v = vec![vec![1, 0, 0], vec![2, 0, 0], vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(independent_subset(ctx, &v), vec![0, 2, 4]);
    }
}
