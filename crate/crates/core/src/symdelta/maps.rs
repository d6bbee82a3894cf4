//! Maps between generalized Δ-complexes, coproducts and coequalizers.

use std::collections::BTreeSet;

use super::complex::{GeneralizedDeltaComplex, SimplexId};
use super::tables::{Cell, Tables};
use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

/// A natural transformation between two generalized Δ-complexes, given by its
/// value on every simplex of the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexMap {
    pub source: GeneralizedDeltaComplex,
    pub target: GeneralizedDeltaComplex,
    /// `assignment[p][i]` is the image of the i-th p-simplex.
    pub assignment: Vec<Vec<usize>>,
}

impl ComplexMap {
    /// Checks totality and commutation with every face and transposition.
    pub fn new(
        source: GeneralizedDeltaComplex,
        target: GeneralizedDeltaComplex,
        assignment: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if let Some(problem) = naturality_defect(&source, &target, &assignment) {
            return Err(Error::InvalidMap(problem));
        }
        Ok(Self { source, target, assignment })
    }

    pub fn identity(c: &GeneralizedDeltaComplex) -> Self {
        let assignment = (0..c.num_levels()).map(|d| (0..c.count(d)).collect()).collect();
        Self { source: c.clone(), target: c.clone(), assignment }
    }

    pub fn apply(&self, id: SimplexId) -> SimplexId {
        SimplexId::new(id.dim, self.assignment[id.dim][id.index])
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ComplexMap) -> Result<ComplexMap> {
        if self.target != other.source {
            return Err(Error::NotParallel("composition target/source mismatch".into()));
        }
        let assignment = self
            .assignment
            .iter()
            .enumerate()
            .map(|(d, row)| row.iter().map(|&x| other.assignment[d][x]).collect())
            .collect();
        Ok(ComplexMap {
            source: self.source.clone(),
            target: other.target.clone(),
            assignment,
        })
    }
}

fn naturality_defect(
    source: &GeneralizedDeltaComplex,
    target: &GeneralizedDeltaComplex,
    assignment: &[Vec<usize>],
) -> Option<String> {
    if assignment.len() != source.num_levels() {
        return Some(format!(
            "assignment covers {} dimensions, source has {}",
            assignment.len(),
            source.num_levels()
        ));
    }
    for (d, row) in assignment.iter().enumerate() {
        if row.len() != source.count(d) {
            return Some(format!("assignment in dimension {d} is not total"));
        }
        if let Some(&bad) = row.iter().find(|&&x| x >= target.count(d)) {
            return Some(format!("image {bad} in dimension {d} is out of range"));
        }
    }
    for id in source.ids() {
        let img = SimplexId::new(id.dim, assignment[id.dim][id.index]);
        let cell = source.cell(id);
        let tcell = target.cell(img);
        for (i, &f) in cell.faces.iter().enumerate() {
            if assignment[id.dim - 1][f] != tcell.faces[i] {
                return Some(format!("{} does not commute with d_{i}", source.label(id)));
            }
        }
        for (i, &s) in cell.swaps.iter().enumerate() {
            if assignment[id.dim][s] != tcell.swaps[i] {
                return Some(format!("{} does not commute with t_{i}", source.label(id)));
            }
        }
    }
    None
}

/// Coproduct of two complexes with its two injections. Labels of `b` that
/// clash with labels of `a` get a `~1` suffix.
pub fn disjoint_union(
    a: &GeneralizedDeltaComplex,
    b: &GeneralizedDeltaComplex,
) -> GeneralizedDeltaComplex {
    let existing: BTreeSet<&str> = a.ids().map(|id| a.label(id)).collect();
    let clash = b.ids().any(|id| existing.contains(b.label(id)));
    let levels = a.num_levels().max(b.num_levels());
    let mut t = Tables::empty(1);
    for d in 0..levels {
        let shift_here = a.count(d);
        let shift_below = if d > 0 { a.count(d - 1) } else { 0 };
        let mut cells: Vec<Cell> = a.cells(d).to_vec();
        let mut labels: Vec<String> = a.labels(d).to_vec();
        for (i, c) in b.cells(d).iter().enumerate() {
            cells.push(Cell {
                faces: c.faces.iter().map(|f| f + shift_below).collect(),
                swaps: c.swaps.iter().map(|s| s + shift_here).collect(),
            });
            let l = &b.labels(d)[i];
            labels.push(if clash { format!("{l}~1") } else { l.clone() });
        }
        t.levels.push(cells);
        t.labels.push(labels);
    }
    GeneralizedDeltaComplex::from_raw(t)
}

/// Disjoint union of `n` copies of `c`, with the fold map back onto `c`.
pub fn copies(c: &GeneralizedDeltaComplex, n: usize) -> (GeneralizedDeltaComplex, ComplexMap) {
    let mut t = Tables::empty(1);
    for d in 0..c.num_levels() {
        let here = c.count(d);
        let below = if d > 0 { c.count(d - 1) } else { 0 };
        let mut cells = Vec::with_capacity(here * n);
        let mut labels = Vec::with_capacity(here * n);
        for k in 0..n {
            for (i, cell) in c.cells(d).iter().enumerate() {
                cells.push(Cell {
                    faces: cell.faces.iter().map(|f| f + k * below).collect(),
                    swaps: cell.swaps.iter().map(|s| s + k * here).collect(),
                });
                labels.push(format!("{}~{k}", c.labels(d)[i]));
            }
        }
        t.levels.push(cells);
        t.labels.push(labels);
    }
    let sum = GeneralizedDeltaComplex::from_raw(t);
    let assignment = (0..c.num_levels())
        .map(|d| (0..n * c.count(d)).map(|x| x % c.count(d)).collect())
        .collect();
    let fold = ComplexMap { source: sum.clone(), target: c.clone(), assignment };
    (sum, fold)
}

/// Dimension-wise set coequalizer of two parallel maps, with the quotient map.
///
/// Simplices of the target are identified by the equivalence relation
/// generated by `f(x) ~ g(x)`; faces and transpositions descend because both
/// maps are natural.
pub fn coequalizer(
    f: &ComplexMap,
    g: &ComplexMap,
) -> Result<(GeneralizedDeltaComplex, ComplexMap)> {
    if f.source != g.source || f.target != g.target {
        return Err(Error::NotParallel("f and g must share source and target".into()));
    }
    let target = &f.target;
    let mut class_of: Vec<Vec<usize>> = Vec::with_capacity(target.num_levels());
    let mut reps: Vec<Vec<usize>> = Vec::with_capacity(target.num_levels());
    for d in 0..target.num_levels() {
        let mut uf = UnionFind::new(target.count(d));
        if d < f.source.num_levels() {
            for (x, &fx) in f.assignment[d].iter().enumerate() {
                uf.union(fx, g.assignment[d][x]);
            }
        }
        let (cls, n) = uf.classes();
        let mut r = vec![usize::MAX; n];
        for (e, &c) in cls.iter().enumerate() {
            if r[c] == usize::MAX {
                r[c] = e;
            }
        }
        class_of.push(cls);
        reps.push(r);
    }
    let mut t = Tables::empty(1);
    for d in 0..target.num_levels() {
        let cells = reps[d]
            .iter()
            .map(|&e| {
                let c = &target.cells(d)[e];
                Cell {
                    faces: c.faces.iter().map(|&x| class_of[d - 1][x]).collect(),
                    swaps: c.swaps.iter().map(|&x| class_of[d][x]).collect(),
                }
            })
            .collect();
        t.levels.push(cells);
        t.labels.push(reps[d].iter().map(|&e| target.labels(d)[e].clone()).collect());
    }
    let quotient = GeneralizedDeltaComplex::from_raw(t);
    let q = ComplexMap { source: target.clone(), target: quotient.clone(), assignment: class_of };
    Ok((quotient, q))
}

/// Every complex map `source -> target`, found by backtracking over orbit
/// representatives from the top dimension down. Intended for desk-scale
/// brute-force checks.
pub fn all_maps(source: &GeneralizedDeltaComplex, target: &GeneralizedDeltaComplex) -> Vec<ComplexMap> {
    let order: Vec<SimplexId> = (0..source.num_levels())
        .rev()
        .flat_map(|d| source.orbit_members(d).into_iter().map(move |o| SimplexId::new(d, o[0])))
        .collect();
    let empty: Vec<Vec<Option<usize>>> =
        (0..source.num_levels()).map(|d| vec![None; source.count(d)]).collect();
    let mut out = Vec::new();
    search_maps(source, target, &order, 0, empty, &mut out);
    out
}

fn search_maps(
    source: &GeneralizedDeltaComplex,
    target: &GeneralizedDeltaComplex,
    order: &[SimplexId],
    k: usize,
    partial: Vec<Vec<Option<usize>>>,
    out: &mut Vec<ComplexMap>,
) {
    if k == order.len() {
        let assignment = partial
            .into_iter()
            .map(|row| row.into_iter().map(Option::unwrap).collect())
            .collect();
        out.push(ComplexMap { source: source.clone(), target: target.clone(), assignment });
        return;
    }
    let x = order[k];
    if partial[x.dim][x.index].is_some() {
        search_maps(source, target, order, k + 1, partial, out);
        return;
    }
    for y in 0..target.count(x.dim) {
        let mut next = partial.clone();
        if propagate(source, target, &mut next, x, y) {
            search_maps(source, target, order, k + 1, next, out);
        }
    }
}

/// Assigns `x -> y` and everything forced by naturality; false on conflict.
fn propagate(
    source: &GeneralizedDeltaComplex,
    target: &GeneralizedDeltaComplex,
    partial: &mut [Vec<Option<usize>>],
    x: SimplexId,
    y: usize,
) -> bool {
    let mut stack = vec![(x, y)];
    while let Some((s, t)) = stack.pop() {
        match partial[s.dim][s.index] {
            Some(prev) if prev == t => continue,
            Some(_) => return false,
            None => partial[s.dim][s.index] = Some(t),
        }
        let sc = source.cell(s);
        let tc = target.cell(SimplexId::new(s.dim, t));
        for (i, &f) in sc.faces.iter().enumerate() {
            stack.push((SimplexId::new(s.dim - 1, f), tc.faces[i]));
        }
        for (i, &w) in sc.swaps.iter().enumerate() {
            stack.push((SimplexId::new(s.dim, w), tc.swaps[i]));
        }
    }
    true
}
