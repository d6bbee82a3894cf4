//! Smith normal form of integer matrices, tuned for boundary matrices.
//!
//! Unit pivots are eliminated on a sparse column representation first; the
//! remaining block (typically empty or tiny) goes through a dense Smith
//! normal form on `i128`.

use std::collections::BTreeSet;

/// Sparse column: `(row, value)` pairs sorted by row, no zeros.
pub(crate) type Column = Vec<(usize, i64)>;

/// Nonzero invariant factors (all positive, each dividing the next).
pub(crate) fn invariant_factors(rows: usize, mut cols: Vec<Column>) -> Vec<i64> {
    let mut row_cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); rows];
    for (j, col) in cols.iter().enumerate() {
        for &(r, _) in col {
            row_cols[r].insert(j);
        }
    }
    let mut alive: BTreeSet<usize> = (0..cols.len()).filter(|&j| !cols[j].is_empty()).collect();
    let mut units = 0usize;
    loop {
        // sparsest column with a unit entry; prefer the sparsest row within it
        let mut pick: Option<(usize, usize, usize)> = None; // (cost, col, row)
        for &j in &alive {
            for &(r, v) in &cols[j] {
                if v == 1 || v == -1 {
                    let cost = cols[j].len() * row_cols[r].len();
                    if pick.is_none_or(|(c, _, _)| cost < c) {
                        pick = Some((cost, j, r));
                    }
                }
            }
            if pick.is_some_and(|(c, _, _)| c == 1) {
                break;
            }
        }
        let Some((_, pc, pr)) = pick else { break };
        let pivot_val = cols[pc].iter().find(|e| e.0 == pr).unwrap().1;
        let pivot_col = cols[pc].clone();
        let others: Vec<usize> = row_cols[pr].iter().copied().filter(|&j| j != pc).collect();
        for j in others {
            let v = cols[j].iter().find(|e| e.0 == pr).unwrap().1;
            // col_j -= v * pivot_val * pivot_col  (pivot_val is its own inverse)
            let factor = v * pivot_val;
            let updated = axpy(&cols[j], &pivot_col, -factor);
            for &(r, _) in &cols[j] {
                row_cols[r].remove(&j);
            }
            for &(r, _) in &updated {
                row_cols[r].insert(j);
            }
            cols[j] = updated;
            if cols[j].is_empty() {
                alive.remove(&j);
            }
        }
        for &(r, _) in &pivot_col {
            row_cols[r].remove(&pc);
        }
        cols[pc].clear();
        alive.remove(&pc);
        // row pr now only met column pc; dropping both leaves an invariant factor 1
        units += 1;
    }
    let rest: Vec<usize> = alive.into_iter().collect();
    let mut factors = vec![1i64; units];
    if !rest.is_empty() {
        let used_rows: Vec<usize> = {
            let mut s = BTreeSet::new();
            for &j in &rest {
                s.extend(cols[j].iter().map(|e| e.0));
            }
            s.into_iter().collect()
        };
        let mut dense = vec![vec![0i128; rest.len()]; used_rows.len()];
        for (cj, &j) in rest.iter().enumerate() {
            for &(r, v) in &cols[j] {
                let ri = used_rows.binary_search(&r).unwrap();
                dense[ri][cj] = v as i128;
            }
        }
        factors.extend(dense_snf(dense).into_iter().map(|v| {
            i64::try_from(v).expect("invariant factor fits in i64")
        }));
    }
    factors.sort_unstable();
    factors
}

fn axpy(a: &Column, b: &Column, k: i64) -> Column {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ra = a.get(i).map_or(usize::MAX, |e| e.0);
        let rb = b.get(j).map_or(usize::MAX, |e| e.0);
        let (r, v) = if ra < rb {
            i += 1;
            (ra, a[i - 1].1)
        } else if rb < ra {
            j += 1;
            (rb, k.checked_mul(b[j - 1].1).expect("overflow in elimination"))
        } else {
            i += 1;
            j += 1;
            (ra, a[i - 1].1 + k.checked_mul(b[j - 1].1).expect("overflow in elimination"))
        };
        if v != 0 {
            out.push((r, v));
        }
    }
    out
}

/// Dense Smith normal form; returns the nonzero diagonal entries.
pub(crate) fn dense_snf(mut m: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(i128, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, &v) in row.iter().enumerate().skip(t) {
                if v != 0 && best.is_none_or(|(b, _, _)| v.abs() < b) {
                    best = Some((v.abs(), i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = m[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        m[i][j] -= q * m[t][j];
                    }
                }
                if m[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = m[t][j] / p;
                if q != 0 {
                    for row in m.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                if m[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // divisibility of the trailing block
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| m[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            m[t][j] += m[i][j];
                        }
                        continue;
                    }
                }
            }
            // move the smallest remaining entry of row/column t to the pivot
            let mut best = (m[t][t].abs(), t, t);
            for i in t + 1..rows {
                if m[i][t] != 0 && m[i][t].abs() < best.0 {
                    best = (m[i][t].abs(), i, t);
                }
            }
            for j in t + 1..cols {
                if m[t][j] != 0 && m[t][j].abs() < best.0 {
                    best = (m[t][j].abs(), t, j);
                }
            }
            let (_, bi, bj) = best;
            m.swap(t, bi);
            for row in m.iter_mut() {
                row.swap(t, bj);
            }
        }
        out.push(m[t][t].abs());
        t += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_snf_of_small_matrices() {
        assert_eq!(dense_snf(vec![vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(dense_snf(vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(dense_snf(vec![vec![0, 0]]), Vec::<i128>::new());
    }

    #[test]
    fn sparse_matches_dense_on_a_torsion_example() {
        // boundary of the RP^2-like relation matrix [[2]] plus a unit block
        let cols = vec![vec![(0, 2)], vec![(1, 1), (2, -1)], vec![(2, 1)]];
        assert_eq!(invariant_factors(3, cols), vec![1, 1, 2]);
    }
}
