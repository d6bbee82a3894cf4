//! Integral homology through the double barycentric subdivision, and a
//! rational cross-check on orbit generators.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::snf::{invariant_factors, Column};
use crate::cones::snc_reduce;
use crate::symdelta::GeneralizedDeltaComplex;

/// Betti numbers and torsion coefficients, degree by degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomologyProfile {
    pub betti: Vec<usize>,
    /// Invariant factors greater than one, ascending.
    pub torsion: Vec<Vec<u64>>,
}

impl HomologyProfile {
    /// Drops trailing zero groups so profiles of different top dimensions
    /// compare by content.
    fn trimmed(mut self) -> Self {
        while self.betti.last() == Some(&0) && self.torsion.last().is_some_and(Vec::is_empty) {
            self.betti.pop();
            self.torsion.pop();
        }
        self
    }

    pub fn rational(&self) -> Vec<usize> {
        self.betti.clone()
    }
}

impl HomologyProfile {
    /// Betti number and torsion in degree `d` (zero beyond the stored range).
    pub fn group(&self, d: usize) -> (usize, &[u64]) {
        (
            self.betti.get(d).copied().unwrap_or(0),
            self.torsion.get(d).map_or(&[][..], Vec::as_slice),
        )
    }

    /// The group in degree `d` written as `Z^2 + Z/3`, or `0`.
    pub fn group_string(&self, d: usize) -> String {
        let (b, tors) = self.group(d);
        let mut terms = Vec::new();
        match b {
            0 => {}
            1 => terms.push("Z".to_string()),
            n => terms.push(format!("Z^{n}")),
        }
        terms.extend(tors.iter().map(|t| format!("Z/{t}")));
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.betti.is_empty() {
            return write!(f, "all groups zero");
        }
        let parts: Vec<String> =
            (0..self.betti.len()).map(|d| format!("H{d} = {}", self.group_string(d))).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Integral homology of the realization.
pub fn homology(c: &GeneralizedDeltaComplex) -> HomologyProfile {
    if c.is_unordered() {
        return free_orbit_homology(c);
    }
    free_orbit_homology(&snc_reduce(c))
}

/// Integral homology of an unordered complex from its orbit chain complex.
///
/// # Panics
/// When some symmetric group does not act freely.
pub fn free_orbit_homology(c: &GeneralizedDeltaComplex) -> HomologyProfile {
    assert!(c.is_unordered(), "orbit chain complex needs a free action");
    let chains = OrbitChains::new(c);
    let levels = chains.sizes.len();
    let mut ranks = vec![0usize; levels + 1];
    let mut torsion_of = vec![Vec::new(); levels + 1];
    for p in 1..levels {
        let factors = invariant_factors(chains.sizes[p - 1], chains.integral_columns(p));
        ranks[p] = factors.len();
        torsion_of[p - 1] = factors.into_iter().filter(|&f| f > 1).map(|f| f as u64).collect();
    }
    let betti = (0..levels).map(|p| chains.sizes[p] - ranks[p] - ranks[p + 1]).collect();
    let torsion = (0..levels).map(|p| std::mem::take(&mut torsion_of[p])).collect();
    HomologyProfile { betti, torsion }.trimmed()
}

/// Rational Betti numbers from the chain complex whose p-th group is spanned
/// by orbits of p-simplices with no odd stabilizer element, each oriented by a
/// chosen representative. Valid for any complex, free or not.
pub fn rational_betti_direct(c: &GeneralizedDeltaComplex) -> Vec<usize> {
    let chains = OrbitChains::new(c);
    let levels = chains.sizes.len();
    let mut ranks = vec![0usize; levels + 1];
    for p in 1..levels {
        let dense = chains.dense(p);
        ranks[p] = bareiss_rank(dense);
    }
    let mut betti: Vec<usize> =
        (0..levels).map(|p| chains.sizes[p] - ranks[p] - ranks[p + 1]).collect();
    while betti.last() == Some(&0) {
        betti.pop();
    }
    betti
}

/// Orientation data of orbit generators.
struct OrbitChains {
    /// Generator count per dimension (orbits without odd stabilizer).
    sizes: Vec<usize>,
    /// Per dimension and element: generator index and sign, or `None` when the
    /// orbit vanishes in the oriented chain complex.
    coord: Vec<Vec<Option<(usize, i64)>>>,
    /// Per dimension: one representative element per generator.
    reps: Vec<Vec<usize>>,
    /// Per dimension: faces of every element.
    faces: Vec<Vec<Vec<usize>>>,
}

impl OrbitChains {
    fn new(c: &GeneralizedDeltaComplex) -> Self {
        let mut sizes = Vec::new();
        let mut coord = Vec::new();
        let mut reps = Vec::new();
        let mut faces = Vec::new();
        for d in 0..c.num_levels() {
            let n = c.count(d);
            let mut sign: Vec<i64> = vec![0; n];
            let mut gen: Vec<Option<usize>> = vec![None; n];
            let mut dead = Vec::new();
            let mut level_reps = Vec::new();
            for start in 0..n {
                if sign[start] != 0 {
                    continue;
                }
                let g = level_reps.len();
                level_reps.push(start);
                sign[start] = 1;
                gen[start] = Some(g);
                let mut odd = false;
                let mut stack = vec![start];
                let mut members = vec![start];
                while let Some(x) = stack.pop() {
                    for &y in &c.cells(d)[x].swaps {
                        if sign[y] == 0 {
                            sign[y] = -sign[x];
                            gen[y] = Some(g);
                            stack.push(y);
                            members.push(y);
                        } else if sign[y] == sign[x] {
                            odd = true;
                        }
                    }
                }
                if odd {
                    dead.push(members);
                    level_reps.pop();
                }
            }
            // renumber live generators
            let mut alive_coord: Vec<Option<(usize, i64)>> = vec![None; n];
            let mut remap = std::collections::BTreeMap::new();
            for (i, &r) in level_reps.iter().enumerate() {
                remap.insert(gen[r].unwrap(), i);
            }
            for e in 0..n {
                if let Some(&g) = gen[e].and_then(|g| remap.get(&g)) {
                    alive_coord[e] = Some((g, sign[e]));
                }
            }
            for members in dead {
                for e in members {
                    alive_coord[e] = None;
                }
            }
            sizes.push(level_reps.len());
            coord.push(alive_coord);
            reps.push(level_reps);
            faces.push(c.cells(d).iter().map(|cell| cell.faces.clone()).collect());
        }
        Self { sizes, coord, reps, faces }
    }

    /// Boundary of each dimension-p generator as a sparse column over
    /// dimension p-1 generators.
    fn integral_columns(&self, p: usize) -> Vec<Column> {
        self.reps[p]
            .iter()
            .map(|&r| {
                let mut acc = std::collections::BTreeMap::<usize, i64>::new();
                for (i, &f) in self.faces[p][r].iter().enumerate() {
                    if let Some((g, s)) = self.coord[p - 1][f] {
                        let sgn = if i % 2 == 0 { s } else { -s };
                        *acc.entry(g).or_default() += sgn;
                    }
                }
                acc.into_iter().filter(|&(_, v)| v != 0).collect()
            })
            .collect()
    }

    fn dense(&self, p: usize) -> Vec<Vec<BigInt>> {
        let cols = self.integral_columns(p);
        let mut m = vec![vec![BigInt::zero(); cols.len()]; self.sizes[p - 1]];
        for (j, col) in cols.iter().enumerate() {
            for &(r, v) in col {
                m[r][j] = BigInt::from(v);
            }
        }
        m
    }
}

/// Rank over the rationals by fraction-free Gaussian elimination.
pub(crate) fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, pr);
        for r in rank + 1..rows {
            for j in col + 1..cols {
                let v = (&m[rank][col] * &m[r][j] - &m[r][col] * &m[rank][j]) / &prev;
                m[r][j] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    #[test]
    fn bareiss_rank_small() {
        assert_eq!(bareiss_rank(z(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(bareiss_rank(z(&[&[0, 2], &[3, 4], &[1, 1]])), 2);
        assert_eq!(bareiss_rank(z(&[&[0, 0]])), 0);
    }

    #[test]
    fn circle_and_disk() {
        let tri = GeneralizedDeltaComplex::from_simplicial(&[vec!["1", "2"], vec!["2", "3"], vec!["1", "3"]]);
        let disk = GeneralizedDeltaComplex::from_simplicial(&[vec!["1", "2", "3"]]);
        let circle = HomologyProfile { betti: vec![1, 1], torsion: vec![vec![], vec![]] };
        let point = HomologyProfile { betti: vec![1], torsion: vec![vec![]] };
        assert_eq!(free_orbit_homology(&tri), circle);
        assert_eq!(homology(&tri), circle);
        assert_eq!(free_orbit_homology(&disk), point);
        assert_eq!(homology(&disk), point);
        assert_eq!(rational_betti_direct(&tri), vec![1, 1]);
        assert_eq!(circle.to_string(), "H0 = Z, H1 = Z");
    }
}
