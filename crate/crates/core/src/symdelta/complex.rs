use std::collections::BTreeMap;
use std::fmt;

use super::tables::{Cell, Tables, Violation};
use crate::perm;

/// Position of a simplex: its dimension and its index within that dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexId {
    pub dim: usize,
    pub index: usize,
}

impl SimplexId {
    pub fn new(dim: usize, index: usize) -> Self {
        Self { dim, index }
    }
}

impl fmt::Display for SimplexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.dim, self.index)
    }
}

/// A finite generalized Δ-complex: a presheaf on finite nonempty sets with
/// injections, stored through its generators.
///
/// The p-simplices are the elements of the set attached to `{0..p}`. Each
/// p-simplex records its elementary faces `d_0..d_p` and the adjacent
/// transpositions `t_0..t_{p-1}` of the symmetric group `S_{p+1}`. A geometric
/// cell is an orbit of that action, so an ordinary triangle contributes six
/// 2-simplices. Nonfree orbits (for example an edge fixed by `t_0`) are
/// allowed; they are what makes the complex "generalized".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedDeltaComplex {
    pub(crate) t: Tables,
}

impl Default for GeneralizedDeltaComplex {
    fn default() -> Self {
        Self::empty()
    }
}

impl GeneralizedDeltaComplex {
    pub fn empty() -> Self {
        Self { t: Tables::empty(1) }
    }

    /// Builds a complex from raw generator tables, one `Vec<Cell>` per dimension.
    /// The tables are not validated; call [`validate`](Self::validate).
    pub fn from_tables(levels: Vec<Vec<Cell>>, labels: Vec<Vec<String>>) -> Self {
        assert_eq!(levels.len(), labels.len(), "one label table per dimension");
        let mut t = Tables { levels, labels, offset: 1 };
        t.trim();
        Self { t }
    }

    pub(crate) fn from_raw(mut t: Tables) -> Self {
        debug_assert_eq!(t.offset, 1);
        t.trim();
        Self { t }
    }

    /// Top dimension, `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.t.levels.len() as isize - 1
    }

    pub fn num_levels(&self) -> usize {
        self.t.levels.len()
    }

    pub fn count(&self, dim: usize) -> usize {
        self.t.len(dim)
    }

    /// Total number of simplices over all dimensions (orbit members counted
    /// individually).
    pub fn total(&self) -> usize {
        self.t.total()
    }

    pub fn is_empty(&self) -> bool {
        self.t.levels.is_empty()
    }

    pub fn cell(&self, id: SimplexId) -> &Cell {
        &self.t.levels[id.dim][id.index]
    }

    pub fn cells(&self, dim: usize) -> &[Cell] {
        self.t.levels.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn label(&self, id: SimplexId) -> &str {
        &self.t.labels[id.dim][id.index]
    }

    pub fn labels(&self, dim: usize) -> &[String] {
        self.t.labels.get(dim).map_or(&[], Vec::as_slice)
    }

    pub fn find(&self, label: &str) -> Option<SimplexId> {
        self.ids().find(|&id| self.label(id) == label)
    }

    /// All simplex ids, by dimension then index.
    pub fn ids(&self) -> impl Iterator<Item = SimplexId> + '_ {
        (0..self.t.levels.len())
            .flat_map(move |d| (0..self.t.len(d)).map(move |i| SimplexId::new(d, i)))
    }

    pub fn face(&self, id: SimplexId, i: usize) -> SimplexId {
        SimplexId::new(id.dim - 1, self.t.face(id.dim, id.index, i))
    }

    pub fn swap(&self, id: SimplexId, i: usize) -> SimplexId {
        SimplexId::new(id.dim, self.t.swap(id.dim, id.index, i))
    }

    /// Pulls a simplex back along an injection `{0..q} -> {0..dim}` given by
    /// its image vector (`theta[j]` is the image of `j`).
    pub fn pull_back(&self, id: SimplexId, theta: &[usize]) -> SimplexId {
        assert!(!theta.is_empty(), "no (-1)-simplices in a Δ-complex");
        let (d, i) = self.t.eval(id.dim, id.index, theta);
        SimplexId::new(d, i)
    }

    /// Vertices of a simplex in slot order.
    pub fn vertices(&self, id: SimplexId) -> Vec<usize> {
        self.t.vertices(id.dim, id.index)
    }

    /// Every violated presentation relation; empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        self.t.validate()
    }

    /// True iff each `S_{p+1}` acts freely on the p-simplices.
    pub fn is_unordered(&self) -> bool {
        self.t.is_free()
    }

    /// Number of symmetric-group orbits in each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.t.levels.len()).map(|d| self.t.orbits(d).1).collect()
    }

    /// Orbit index of every simplex in one dimension, plus the orbit count.
    pub fn orbits(&self, dim: usize) -> (Vec<usize>, usize) {
        if dim >= self.t.levels.len() {
            return (Vec::new(), 0);
        }
        self.t.orbits(dim)
    }

    pub fn orbit_members(&self, dim: usize) -> Vec<Vec<usize>> {
        if dim >= self.t.levels.len() {
            return Vec::new();
        }
        self.t.orbit_members(dim)
    }

    /// Members of the orbit containing `id`.
    pub fn orbit_of(&self, id: SimplexId) -> Vec<usize> {
        let (ids, _) = self.t.orbits(id.dim);
        let o = ids[id.index];
        (0..ids.len()).filter(|&e| ids[e] == o).collect()
    }

    /// True when some simplex has two equal vertices (a self-glued cell).
    pub fn has_self_gluing(&self) -> bool {
        self.ids().any(|id| {
            let mut v = self.vertices(id);
            v.sort_unstable();
            v.windows(2).any(|w| w[0] == w[1])
        })
    }

    /// Human-readable orbit name: the label up to the first `[`.
    pub fn orbit_name(&self, id: SimplexId) -> &str {
        let l = self.label(id);
        l.split('[').next().unwrap_or(l)
    }

    /// Unordered complex of an abstract simplicial complex given by facets
    /// (vertex names). Each k-face contributes its `(k+1)!` orderings; the
    /// simplex `(a_0..a_p)` has `d_i` = the tuple without `a_i`.
    pub fn from_simplicial<S: AsRef<str>>(facets: &[Vec<S>]) -> Self {
        let mut names: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut faces_of: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
        for facet in facets {
            let mut vs: Vec<usize> = facet
                .iter()
                .map(|n| {
                    let n = n.as_ref().to_string();
                    *index.entry(n.clone()).or_insert_with(|| {
                        names.push(n);
                        names.len() - 1
                    })
                })
                .collect();
            vs.sort_unstable();
            vs.dedup();
            let k = vs.len();
            for mask in 1u64..(1u64 << k) {
                let sub: Vec<usize> =
                    (0..k).filter(|b| mask >> b & 1 == 1).map(|b| vs[b]).collect();
                faces_of.insert(sub, ());
            }
        }
        let cells: Vec<Vec<usize>> = faces_of.into_keys().collect();
        let pos: BTreeMap<&Vec<usize>, usize> =
            cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let spec = OrderedCells {
            slots: cells.clone(),
            face: |c: usize, v: usize| {
                let sub: Vec<usize> = cells[c].iter().copied().filter(|&x| x != v).collect();
                pos[&sub]
            },
            label: |_c: usize, order: &[usize]| {
                order.iter().map(|&v| names[v].as_str()).collect::<Vec<_>>().join(",")
            },
        };
        spec.build()
    }
}

/// Builds an unordered complex whose cells carry labelled slots: each cell
/// with slot set `S` yields one simplex per ordering of `S`, and `d_i` of an
/// ordering drops its `i`-th slot and moves to `face(cell, slot)`.
pub(crate) struct OrderedCells<F, L> {
    /// Sorted slot labels of every cell.
    pub slots: Vec<Vec<usize>>,
    pub face: F,
    pub label: L,
}

impl<F, L> OrderedCells<F, L>
where
    F: Fn(usize, usize) -> usize,
    L: Fn(usize, &[usize]) -> String,
{
    pub fn build(&self) -> GeneralizedDeltaComplex {
        let top = self.slots.iter().map(Vec::len).max().unwrap_or(0);
        let mut levels: Vec<Vec<Cell>> = vec![Vec::new(); top];
        let mut labels: Vec<Vec<String>> = vec![Vec::new(); top];
        // element index of (cell, ordering)
        let mut index: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let mut orderings: Vec<Vec<(usize, Vec<usize>)>> = vec![Vec::new(); top];
        let mut by_size: Vec<usize> = (0..self.slots.len()).collect();
        by_size.sort_by_key(|&c| self.slots[c].len());
        for &c in &by_size {
            let k = self.slots[c].len();
            if k == 0 {
                continue;
            }
            for p in perm::all_perms(k) {
                let order: Vec<usize> = p.iter().map(|&j| self.slots[c][j]).collect();
                let idx = orderings[k - 1].len();
                index.insert((c, order.clone()), idx);
                labels[k - 1].push((self.label)(c, &order));
                orderings[k - 1].push((c, order));
            }
        }
        for (lvl, elems) in orderings.iter().enumerate() {
            for (c, order) in elems {
                let k = order.len();
                let faces = if lvl == 0 {
                    Vec::new()
                } else {
                    (0..k)
                        .map(|i| {
                            let fc = (self.face)(*c, order[i]);
                            let mut rest = order.clone();
                            rest.remove(i);
                            index[&(fc, rest)]
                        })
                        .collect()
                };
                let swaps = (0..k - 1)
                    .map(|i| {
                        let mut o = order.clone();
                        o.swap(i, i + 1);
                        index[&(*c, o)]
                    })
                    .collect();
                levels[lvl].push(Cell { faces, swaps });
            }
        }
        GeneralizedDeltaComplex::from_tables(levels, labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> GeneralizedDeltaComplex {
        GeneralizedDeltaComplex::from_simplicial(&[vec!["1", "2"], vec!["1", "3"], vec!["2", "3"]])
    }

    #[test]
    fn hollow_triangle_is_valid_and_unordered() {
        let t = triangle();
        assert!(t.validate().is_empty());
        assert!(t.is_unordered());
        assert_eq!(t.f_vector(), vec![3, 3]);
        assert_eq!(t.count(1), 6);
        assert_eq!(t.dim(), 1);
        assert!(!t.has_self_gluing());
    }

    #[test]
    fn empty_complex_has_dim_minus_one() {
        let e = GeneralizedDeltaComplex::empty();
        assert_eq!(e.dim(), -1);
        assert!(e.validate().is_empty());
        assert!(e.f_vector().is_empty());
    }

    #[test]
    fn half_interval_is_valid_but_not_unordered() {
        let c = GeneralizedDeltaComplex::from_tables(
            vec![
                vec![Cell::default()],
                vec![Cell { faces: vec![0, 0], swaps: vec![0] }],
            ],
            vec![vec!["v".into()], vec!["e".into()]],
        );
        assert!(c.validate().is_empty());
        assert!(!c.is_unordered());
        assert_eq!(c.f_vector(), vec![1, 1]);
    }

    #[test]
    fn single_vertex_is_unordered() {
        let c = GeneralizedDeltaComplex::from_simplicial(&[vec!["a"]]);
        assert!(c.is_unordered());
        assert_eq!(c.f_vector(), vec![1]);
    }

    #[test]
    fn broken_face_face_relation_is_reported() {
        // a 2-simplex whose three edges do not close up: d_0 d_0 != d_0 d_1
        let verts = vec![Cell::default(); 4];
        let mut edges = Vec::new();
        // edge k = (a, b) with d_0 = b, d_1 = a, and its reversed twin at k+1
        for (a, b) in [(0, 1), (0, 2), (1, 3)] {
            let k = edges.len();
            edges.push(Cell { faces: vec![b, a], swaps: vec![k + 1] });
            edges.push(Cell { faces: vec![a, b], swaps: vec![k] });
        }
        // faces d_0 = (1,3), d_1 = (0,2), d_2 = (0,1); vertex 3 != vertex 2
        let tri = Cell { faces: vec![4, 2, 0], swaps: vec![0, 0] };
        let c = GeneralizedDeltaComplex::from_tables(
            vec![verts, edges, vec![tri]],
            vec![
                (0..4).map(|i| format!("v{i}")).collect(),
                (0..6).map(|i| format!("e{i}")).collect(),
                vec!["f".into()],
            ],
        );
        let report = c.validate();
        assert!(report
            .iter()
            .any(|v| matches!(v.relation, super::super::Relation::FaceFace { .. })));
        assert!(report.iter().any(|v| v.relation.to_string().starts_with("d_0 d_1")));
    }
}
