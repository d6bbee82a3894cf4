//! Elementary collapses and expansions acting on whole symmetry orbits.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::perm;
use crate::symdelta::{Cell, GeneralizedDeltaComplex, SimplexId, Tables};

/// A free face together with its unique maximal coface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CollapsePair {
    pub free_face: SimplexId,
    pub coface: SimplexId,
}

/// A fresh free p-simplex glued along every face except `free_slot`; the
/// missing face becomes a fresh free (p-1)-simplex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExpansionSpec {
    pub new_dim: usize,
    pub free_slot: usize,
    /// Faces for the slots other than `free_slot`, in slot order.
    pub boundary: Vec<SimplexId>,
}

impl ExpansionSpec {
    /// Assigned face of slot `i` (`i != free_slot`).
    fn assigned(&self, i: usize) -> SimplexId {
        self.boundary[if i < self.free_slot { i } else { i - 1 }]
    }
}

/// Per dimension: orbit index of every element and orbit members.
struct OrbitIndex {
    of: Vec<Vec<usize>>,
    members: Vec<Vec<Vec<usize>>>,
}

impl OrbitIndex {
    fn new(c: &GeneralizedDeltaComplex) -> Self {
        let mut of = Vec::new();
        let mut members = Vec::new();
        for d in 0..c.num_levels() {
            of.push(c.orbits(d).0);
            members.push(c.orbit_members(d));
        }
        Self { of, members }
    }

    fn is_free(&self, d: usize, o: usize) -> bool {
        self.members[d][o].len() == perm::factorial(d + 1)
    }
}

/// Every collapse pair, ordered by coface dimension (highest first), then
/// coface index, then face index.
pub fn free_faces(c: &GeneralizedDeltaComplex) -> Vec<CollapsePair> {
    let idx = OrbitIndex::new(c);
    let mut out = Vec::new();
    for p in (1..c.num_levels()).rev() {
        // incidences of each (p-1)-orbit: (count, set of p-orbits)
        let mut inc: Vec<(usize, BTreeSet<usize>)> =
            vec![(0, BTreeSet::new()); idx.members[p - 1].len()];
        for (x, cell) in c.cells(p).iter().enumerate() {
            for &f in &cell.faces {
                let e = &mut inc[idx.of[p - 1][f]];
                e.0 += 1;
                e.1.insert(idx.of[p][x]);
            }
        }
        let mut has_coface = vec![false; idx.members[p].len()];
        if p + 1 < c.num_levels() {
            for cell in c.cells(p + 1) {
                for &f in &cell.faces {
                    has_coface[idx.of[p][f]] = true;
                }
            }
        }
        for (o, members) in idx.members[p].iter().enumerate() {
            if has_coface[o] || !idx.is_free(p, o) {
                continue;
            }
            let rep = members[0];
            for &f in &c.cells(p)[rep].faces {
                let ot = idx.of[p - 1][f];
                let (count, cofaces) = &inc[ot];
                if idx.is_free(p - 1, ot) && *count == members.len() && cofaces.len() == 1 {
                    out.push(CollapsePair {
                        free_face: SimplexId::new(p - 1, f),
                        coface: SimplexId::new(p, rep),
                    });
                }
            }
        }
    }
    out
}

/// Whether `pair` describes a collapse of `c`, in any member of the orbits.
fn is_free_pair(c: &GeneralizedDeltaComplex, pair: CollapsePair) -> bool {
    let (t, s) = (pair.free_face, pair.coface);
    if s.dim == 0 || t.dim + 1 != s.dim || s.dim >= c.num_levels() {
        return false;
    }
    if t.index >= c.count(t.dim) || s.index >= c.count(s.dim) {
        return false;
    }
    let orbit_s = c.orbit_of(s);
    let orbit_t = c.orbit_of(t);
    free_faces(c).iter().any(|q| {
        orbit_s.binary_search(&q.coface.index).is_ok()
            && orbit_t.binary_search(&q.free_face.index).is_ok()
    })
}

/// Removes the orbits of the free face and of its coface.
pub fn collapse(c: &GeneralizedDeltaComplex, pair: CollapsePair) -> Result<GeneralizedDeltaComplex> {
    if !is_free_pair(c, pair) {
        return Err(Error::NotAFreeFace(format!(
            "{} is not a free face of {}",
            describe(c, pair.free_face),
            describe(c, pair.coface)
        )));
    }
    let mut remove: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); c.num_levels()];
    remove[pair.coface.dim].extend(c.orbit_of(pair.coface));
    remove[pair.free_face.dim].extend(c.orbit_of(pair.free_face));
    Ok(remove_elements(c, &remove))
}

fn describe(c: &GeneralizedDeltaComplex, id: SimplexId) -> String {
    if id.dim < c.num_levels() && id.index < c.count(id.dim) {
        c.label(id).to_string()
    } else {
        format!("({}, {})", id.dim, id.index)
    }
}

/// Deletes the given elements, which must form a sub-presheaf complement.
pub(crate) fn remove_elements(
    c: &GeneralizedDeltaComplex,
    remove: &[BTreeSet<usize>],
) -> GeneralizedDeltaComplex {
    let mut new_index: Vec<Vec<usize>> = Vec::new();
    for d in 0..c.num_levels() {
        let mut next = 0;
        new_index.push(
            (0..c.count(d))
                .map(|e| {
                    if remove.get(d).is_some_and(|r| r.contains(&e)) {
                        usize::MAX
                    } else {
                        next += 1;
                        next - 1
                    }
                })
                .collect(),
        );
    }
    let mut t = Tables::empty(1);
    for d in 0..c.num_levels() {
        let mut cells = Vec::new();
        let mut labels = Vec::new();
        for (e, cell) in c.cells(d).iter().enumerate() {
            if new_index[d][e] == usize::MAX {
                continue;
            }
            cells.push(Cell {
                faces: cell.faces.iter().map(|&f| new_index[d - 1][f]).collect(),
                swaps: cell.swaps.iter().map(|&s| new_index[d][s]).collect(),
            });
            labels.push(c.labels(d)[e].clone());
        }
        t.levels.push(cells);
        t.labels.push(labels);
    }
    GeneralizedDeltaComplex::from_raw(t)
}

/// Inverse of a collapse. The fresh p-simplex orbit is appended after the
/// existing p-simplices and the fresh free face after the (p-1)-simplices;
/// the new pair is [`expansion_pair`].
pub fn expand(c: &GeneralizedDeltaComplex, spec: &ExpansionSpec) -> Result<GeneralizedDeltaComplex> {
    check_expansion(c, spec)?;
    let p = spec.new_dim;
    let k = spec.free_slot;
    let x_name = fresh_name(c, p);
    let f_name = fresh_name(c, p - 1);
    let mut t = c.t.clone();
    while t.levels.len() <= p {
        t.levels.push(Vec::new());
        t.labels.push(Vec::new());
    }
    let f_base = t.levels[p - 1].len();
    let x_base = t.levels[p].len();
    let perms_f = perm::all_perms(p);
    let perms_x = perm::all_perms(p + 1);
    let pos_f: HashMap<&[usize], usize> =
        perms_f.iter().enumerate().map(|(i, q)| (q.as_slice(), i)).collect();
    let pos_x: HashMap<&[usize], usize> =
        perms_x.iter().enumerate().map(|(i, q)| (q.as_slice(), i)).collect();

    // faces of the fresh free face f, slot by slot (only when p >= 2)
    let f_faces: Vec<usize> = if p >= 2 {
        (0..p)
            .map(|i| {
                if i < k {
                    c.face(spec.assigned(i), k - 1).index
                } else {
                    c.face(spec.assigned(i + 1), k).index
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    let mut f_cells = Vec::with_capacity(perms_f.len());
    for rho in &perms_f {
        let faces = (0..f_faces.len())
            .map(|j| c.t.act(p - 2, f_faces[rho[j]], &dropped(rho, j)))
            .collect();
        let swaps = (0..p.saturating_sub(1))
            .map(|j| f_base + pos_f[swapped(rho, j).as_slice()])
            .collect();
        f_cells.push(Cell { faces, swaps });
    }
    let mut x_cells = Vec::with_capacity(perms_x.len());
    for pi in &perms_x {
        let faces = (0..=p)
            .map(|i| {
                let q = dropped(pi, i);
                if pi[i] == k {
                    f_base + pos_f[q.as_slice()]
                } else {
                    c.t.act(p - 1, spec.assigned(pi[i]).index, &q)
                }
            })
            .collect();
        let swaps = (0..p).map(|j| x_base + pos_x[swapped(pi, j).as_slice()]).collect();
        x_cells.push(Cell { faces, swaps });
    }
    t.levels[p - 1].extend(f_cells);
    t.labels[p - 1].extend(perms_f.iter().map(|q| perm_label(&f_name, q)));
    t.levels[p].extend(x_cells);
    t.labels[p].extend(perms_x.iter().map(|q| perm_label(&x_name, q)));
    let out = GeneralizedDeltaComplex::from_raw(t);
    let violations = out.validate();
    if !violations.is_empty() {
        return Err(Error::IncompatibleBoundary(violations[0].to_string()));
    }
    Ok(out)
}

/// The collapse pair that undoes `expand(c, spec)`, in the expanded complex.
pub fn expansion_pair(c: &GeneralizedDeltaComplex, spec: &ExpansionSpec) -> CollapsePair {
    let p = spec.new_dim;
    CollapsePair {
        free_face: SimplexId::new(p - 1, c.count(p - 1)),
        coface: SimplexId::new(p, c.count(p)),
    }
}

/// The expansion that undoes a collapse, with ids in the collapsed complex.
pub fn collapse_inverse(c: &GeneralizedDeltaComplex, pair: CollapsePair) -> ExpansionSpec {
    let s = pair.coface;
    let faces = &c.cell(s).faces;
    let orbit_t = c.orbit_of(pair.free_face);
    let k = faces.iter().position(|f| orbit_t.binary_search(f).is_ok()).unwrap();
    // indices after removing both orbits
    let removed_below: Vec<usize> = orbit_t;
    let boundary = faces
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != k)
        .map(|(_, &f)| {
            let shift = removed_below.iter().filter(|&&r| r < f).count();
            SimplexId::new(s.dim - 1, f - shift)
        })
        .collect();
    ExpansionSpec { new_dim: s.dim, free_slot: k, boundary }
}

fn check_expansion(c: &GeneralizedDeltaComplex, spec: &ExpansionSpec) -> Result<()> {
    let p = spec.new_dim;
    let bad = |m: String| Err(Error::IncompatibleBoundary(m));
    if p == 0 {
        return bad("an expansion adds a simplex of dimension at least 1".into());
    }
    if spec.free_slot > p {
        return bad(format!("free slot {} out of range for dimension {p}", spec.free_slot));
    }
    if spec.boundary.len() != p {
        return bad(format!("{p} assigned faces expected, got {}", spec.boundary.len()));
    }
    for b in &spec.boundary {
        if b.dim != p - 1 || b.dim >= c.num_levels() || b.index >= c.count(b.dim) {
            return bad(format!("assigned face ({}, {}) is not a ({})-simplex", b.dim, b.index, p - 1));
        }
    }
    let slots: Vec<usize> = (0..=p).filter(|&i| i != spec.free_slot).collect();
    for (a, &i) in slots.iter().enumerate() {
        for &j in &slots[a + 1..] {
            // d_i d_j = d_{j-1} d_i
            if c.face(spec.assigned(j), i) != c.face(spec.assigned(i), j - 1) {
                return bad(format!(
                    "d_{i} of {} differs from d_{} of {}",
                    c.label(spec.assigned(j)),
                    j - 1,
                    c.label(spec.assigned(i))
                ));
            }
        }
    }
    Ok(())
}

/// The permutation induced on the remaining slots after deleting slot `i`
/// of the source and value `q[i]` of the target.
fn dropped(q: &[usize], i: usize) -> Vec<usize> {
    let v = q[i];
    q.iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &w)| if w > v { w - 1 } else { w })
        .collect()
}

/// `q ∘ s_j`.
fn swapped(q: &[usize], j: usize) -> Vec<usize> {
    let mut r = q.to_vec();
    r.swap(j, j + 1);
    r
}

fn perm_label(name: &str, q: &[usize]) -> String {
    let body: Vec<String> = q.iter().map(ToString::to_string).collect();
    format!("{name}[{}]", body.join(","))
}

fn fresh_name(c: &GeneralizedDeltaComplex, d: usize) -> String {
    let taken: BTreeSet<&str> = (0..c.num_levels())
        .flat_map(|l| c.labels(l).iter().map(|s| s.split('[').next().unwrap_or(s)))
        .collect();
    (0..)
        .map(|m| format!("n{d}_{m}"))
        .find(|n| !taken.contains(n.as_str()))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symdelta::is_isomorphic;

    fn simplicial(facets: &[&[&str]]) -> GeneralizedDeltaComplex {
        let f: Vec<Vec<&str>> = facets.iter().map(|f| f.to_vec()).collect();
        GeneralizedDeltaComplex::from_simplicial(&f)
    }

    #[test]
    fn full_simplex_has_three_free_edges() {
        let disk = simplicial(&[&["1", "2", "3"]]);
        let pairs = free_faces(&disk);
        assert_eq!(pairs.len(), 3);
        assert!(pairs.iter().all(|p| p.coface.dim == 2));
    }

    #[test]
    fn hollow_triangle_has_no_free_faces() {
        let tri = simplicial(&[&["1", "2"], &["2", "3"], &["1", "3"]]);
        assert!(free_faces(&tri).is_empty());
        let bogus = CollapsePair { free_face: SimplexId::new(0, 0), coface: SimplexId::new(1, 0) };
        assert!(matches!(collapse(&tri, bogus), Err(Error::NotAFreeFace(_))));
    }

    #[test]
    fn disk_collapses_to_a_path_then_a_point() {
        let disk = simplicial(&[&["1", "2", "3"]]);
        let path = collapse(&disk, free_faces(&disk)[0]).unwrap();
        assert_eq!(path.f_vector(), vec![3, 2]);
        let path2 = collapse(&path, free_faces(&path)[0]).unwrap();
        let point = collapse(&path2, free_faces(&path2)[0]).unwrap();
        assert_eq!(point.f_vector(), vec![1]);
    }

    #[test]
    fn expanding_a_point_gives_an_edge() {
        let point = simplicial(&[&["v"]]);
        for k in 0..2 {
            let spec = ExpansionSpec { new_dim: 1, free_slot: k, boundary: vec![SimplexId::new(0, 0)] };
            let edge = expand(&point, &spec).unwrap();
            assert!(edge.validate().is_empty());
            assert!(is_isomorphic(&edge, &simplicial(&[&["a", "b"]])).is_some());
            let back = collapse(&edge, expansion_pair(&point, &spec)).unwrap();
            assert!(is_isomorphic(&back, &point).is_some());
        }
    }

    #[test]
    fn triangle_to_square_by_three_moves() {
        let tri = simplicial(&[&["1", "2"], &["2", "3"], &["1", "3"]]);
        let square = simplicial(&[&["1", "E"], &["E", "2"], &["2", "3"], &["3", "1"]]);
        let one = tri.find("1").unwrap();
        let pendant = expand(
            &tri,
            &ExpansionSpec { new_dim: 1, free_slot: 0, boundary: vec![one] },
        )
        .unwrap();
        // glue a 2-cell (E, 2, 1) along (2, 1) and (E, 1); its edge (E, 2) is free
        let fresh = pendant.count(0) - 1;
        let two = pendant.find("2").unwrap().index;
        let edge = |a: usize, b: usize| {
            (0..pendant.count(1))
                .map(|i| SimplexId::new(1, i))
                .find(|&id| pendant.vertices(id) == vec![a, b])
                .unwrap()
        };
        let (e21, e1) = (edge(two, one.index), edge(fresh, one.index));
        let spec = ExpansionSpec { new_dim: 2, free_slot: 2, boundary: vec![e21, e1] };
        let with_cell = expand(&pendant, &spec).unwrap();
        assert!(with_cell.validate().is_empty());
        let pair = free_faces(&with_cell)
            .into_iter()
            .find(|q| q.free_face.dim == 1 && with_cell.orbit_of(q.free_face).contains(&e21.index))
            .unwrap();
        let result = collapse(&with_cell, pair).unwrap();
        assert!(is_isomorphic(&result, &square).is_some());
    }

    #[test]
    fn incompatible_boundary_is_rejected() {
        let two_edges = simplicial(&[&["1", "2"], &["3", "4"]]);
        let a = SimplexId::new(1, 0);
        let b = (0..two_edges.count(1))
            .map(|i| SimplexId::new(1, i))
            .find(|&id| two_edges.orbit_name(id) != two_edges.orbit_name(a))
            .unwrap();
        let spec = ExpansionSpec { new_dim: 2, free_slot: 2, boundary: vec![a, b] };
        assert!(matches!(expand(&two_edges, &spec), Err(Error::IncompatibleBoundary(_))));
    }

    #[test]
    fn collapse_inverse_round_trip() {
        let disk = simplicial(&[&["1", "2", "3"]]);
        for pair in free_faces(&disk) {
            let small = collapse(&disk, pair).unwrap();
            let spec = collapse_inverse(&disk, pair);
            let again = expand(&small, &spec).unwrap();
            assert!(is_isomorphic(&again, &disk).is_some());
        }
    }
}
