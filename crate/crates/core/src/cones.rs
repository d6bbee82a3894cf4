//! Smooth generalized cone complexes, the cone/Δ correspondence, and
//! barycentric and star subdivision.
//!
//! A smooth generalized cone complex is stored like a Δ-complex shifted by one
//! dimension: an m-dimensional cone is a standard orthant with coordinates
//! `0..m`, it has `m` facets (`d_i` drops coordinate `i`) and the adjacent
//! transpositions permute coordinates. The 0-dimensional cones are vertices.
//!
//! Subdivisions are computed combinatorially. For each orthant a local rule
//! lists the cones of the subdivided orthant whose support is the whole
//! orthant; every ray of the subdivision is the barycenter `b_S` of a
//! coordinate face `S` and is stored as the bitmask of `S`. Cells of the
//! subdivided complex are classes of (orthant, cell) pairs under the
//! coordinate permutations, found by a search over those pairs.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::perm;
use crate::symdelta::{Cell, GeneralizedDeltaComplex, Tables};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedConeComplex {
    pub(crate) t: Tables,
}

/// Position of a cone: its dimension and index within that dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConeId {
    pub dim: usize,
    pub index: usize,
}

/// A cell of a barycentric subdivision: a cone together with a strictly
/// increasing chain of its coordinate faces ending at the whole cone.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag {
    pub cone: ConeId,
    /// coordinate subsets as bitmasks, strictly increasing
    pub chain: Vec<u32>,
}

impl GeneralizedConeComplex {
    pub fn from_tables(levels: Vec<Vec<Cell>>, labels: Vec<Vec<String>>) -> Self {
        let mut t = Tables { levels, labels, offset: 0 };
        t.trim();
        Self { t }
    }

    pub fn num_levels(&self) -> usize {
        self.t.levels.len()
    }

    /// Number of cones of dimension `m` (orbit members counted individually).
    pub fn count(&self, m: usize) -> usize {
        self.t.len(m)
    }

    pub fn cells(&self, m: usize) -> &[Cell] {
        self.t.levels.get(m).map_or(&[], Vec::as_slice)
    }

    pub fn labels(&self, m: usize) -> &[String] {
        self.t.labels.get(m).map_or(&[], Vec::as_slice)
    }

    /// Exactly one 0-dimensional cone.
    pub fn apex_unique(&self) -> bool {
        self.count(0) == 1
    }

    /// Number of cone orbits in each dimension (the geometric cones).
    pub fn orbit_counts(&self) -> Vec<usize> {
        (0..self.t.levels.len()).map(|m| self.t.orbits(m).1).collect()
    }

    pub fn orbit_members(&self, m: usize) -> Vec<Vec<usize>> {
        self.t.orbit_members(m)
    }

    pub fn validate(&self) -> Vec<crate::symdelta::Violation> {
        self.t.validate()
    }

    /// True when no cone is mapped to itself by a nontrivial coordinate
    /// permutation, i.e. the complex is a cone complex in the strict sense.
    pub fn has_trivial_stabilizers(&self) -> bool {
        self.t.is_free()
    }

    /// The face of cone `(m, x)` spanned by the coordinates in `mask`.
    pub fn coordinate_face(&self, m: usize, x: usize, mask: u32) -> ConeId {
        let theta = bits(mask, m);
        let (dim, index) = self.t.eval(m, x, &theta);
        ConeId { dim, index }
    }
}

fn bits(mask: u32, m: usize) -> Vec<usize> {
    (0..m).filter(|b| mask >> b & 1 == 1).collect()
}

fn full(m: usize) -> u32 {
    if m == 0 { 0 } else { (1u32 << m) - 1 }
}

fn swap_bits(mask: u32, i: usize) -> u32 {
    let a = mask >> i & 1;
    let b = mask >> (i + 1) & 1;
    if a == b {
        mask
    } else {
        mask ^ (1 << i) ^ (1 << (i + 1))
    }
}

/// Generalized cone complex over a Δ-complex: one apex and an
/// (p+1)-dimensional orthant per p-simplex.
pub fn cone_over(c: &GeneralizedDeltaComplex) -> GeneralizedConeComplex {
    let mut levels = vec![vec![Cell::default()]];
    let mut labels = vec![vec!["apex".to_string()]];
    for d in 0..c.num_levels() {
        let cells = c
            .cells(d)
            .iter()
            .map(|cell| Cell {
                faces: if d == 0 { vec![0] } else { cell.faces.clone() },
                swaps: cell.swaps.clone(),
            })
            .collect();
        levels.push(cells);
        labels.push(c.labels(d).to_vec());
    }
    GeneralizedConeComplex::from_tables(levels, labels)
}

/// Inverse of [`cone_over`] on cone complexes with a unique vertex.
pub fn to_delta_complex(g: &GeneralizedConeComplex) -> Result<GeneralizedDeltaComplex> {
    if !g.apex_unique() {
        return Err(Error::NotUniqueVertex(g.count(0)));
    }
    let mut levels = Vec::new();
    let mut labels = Vec::new();
    for m in 1..g.num_levels() {
        levels.push(
            g.cells(m)
                .iter()
                .map(|cell| Cell {
                    faces: if m == 1 { Vec::new() } else { cell.faces.clone() },
                    swaps: cell.swaps.clone(),
                })
                .collect(),
        );
        labels.push(g.labels(m).to_vec());
    }
    Ok(GeneralizedDeltaComplex::from_tables(levels, labels))
}

/// Full flags of every cone: chains of nonempty coordinate subsets ending at
/// the whole orthant. The apex contributes the empty chain.
pub fn flags(g: &GeneralizedConeComplex) -> Vec<Flag> {
    let mut out = Vec::new();
    for m in 0..g.num_levels() {
        let chains = full_chains(m);
        for x in 0..g.count(m) {
            for ch in &chains {
                out.push(Flag { cone: ConeId { dim: m, index: x }, chain: ch.clone() });
            }
        }
    }
    out
}

/// Chains `S_1 ⊂ .. ⊂ S_k = {0..m}` of nonempty subsets.
fn full_chains(m: usize) -> Vec<Vec<u32>> {
    fn rec(top: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        // acc holds the chain from the top downwards
        let mut below = top.wrapping_sub(1) & top;
        while below != 0 {
            acc.push(below);
            let mut ch: Vec<u32> = acc.clone();
            ch.reverse();
            out.push(ch);
            rec(below, acc, out);
            acc.pop();
            below = below.wrapping_sub(1) & top;
        }
    }
    if m == 0 {
        return vec![Vec::new()];
    }
    let top = full(m);
    let mut out = vec![vec![top]];
    let mut acc = vec![top];
    rec(top, &mut acc, &mut out);
    for ch in &mut out {
        ch.sort_unstable_by_key(|s| s.count_ones());
    }
    out.sort();
    out
}

/// Barycentric subdivision. The output always has trivial stabilizers since
/// the rays of a flag cell have pairwise different face dimensions.
pub fn barycentric_subdivision(g: &GeneralizedConeComplex) -> GeneralizedConeComplex {
    subdivide(g, |m, _x| Ok(full_chains(m).into_iter().map(sorted).collect()))
        .expect("barycentric rule is total")
}

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}

/// Simultaneous star subdivision at the minimal members of `targets`.
///
/// `targets` must be closed under the symmetric-group action and under
/// cofaces. Every minimal target of dimension at least two gets a new central
/// ray; minimal targets that are rays leave the complex unchanged.
pub fn star_subdivision(
    g: &GeneralizedConeComplex,
    targets: &[ConeId],
) -> Result<GeneralizedConeComplex> {
    let set: BTreeSet<ConeId> = targets.iter().copied().collect();
    for &ConeId { dim, index } in &set {
        if dim >= g.num_levels() || index >= g.count(dim) {
            return Err(Error::TargetNotClosed(format!("no cone {dim}:{index}")));
        }
        for &s in &g.cells(dim)[index].swaps {
            if !set.contains(&ConeId { dim, index: s }) {
                return Err(Error::TargetNotClosed(format!(
                    "orbit of {} is only partially targeted",
                    g.labels(dim)[index]
                )));
            }
        }
    }
    for m in 1..g.num_levels() {
        for (y, cell) in g.cells(m).iter().enumerate() {
            let has_target_face =
                cell.faces.iter().any(|&f| set.contains(&ConeId { dim: m - 1, index: f }));
            if has_target_face && !set.contains(&ConeId { dim: m, index: y }) {
                return Err(Error::TargetNotClosed(format!(
                    "coface {} of a target is not targeted",
                    g.labels(m)[y]
                )));
            }
        }
    }
    let centers: BTreeSet<ConeId> = set
        .iter()
        .copied()
        .filter(|c| {
            c.dim >= 2
                && !g.cells(c.dim)[c.index]
                    .faces
                    .iter()
                    .any(|&f| set.contains(&ConeId { dim: c.dim - 1, index: f }))
        })
        .collect();
    subdivide(g, |m, x| {
        let mut found: Vec<u32> = Vec::new();
        for mask in 1..=full(m) {
            if mask.count_ones() < 2 {
                continue;
            }
            let face = g.coordinate_face(m, x, mask);
            if centers.contains(&face) {
                found.push(mask);
            }
        }
        for (i, a) in found.iter().enumerate() {
            if found[i + 1..].iter().any(|b| a & b != 0) {
                return Err(Error::OverlappingCenters(g.labels(m)[x].clone()));
            }
        }
        Ok(stellar_cells(m, &found))
    })
}

/// Full-support cells of an orthant starred at pairwise disjoint faces.
fn stellar_cells(m: usize, centers: &[u32]) -> Vec<Vec<u32>> {
    let covered = centers.iter().fold(0, |a, b| a | b);
    let base: Vec<u32> = bits(full(m) & !covered, m).into_iter().map(|j| 1 << j).collect();
    let mut out: Vec<Vec<u32>> = vec![base];
    for &s in centers {
        let mut next = Vec::new();
        for partial in &out {
            // b_S together with a proper subset of the coordinates of S
            let mut sub = s;
            loop {
                sub = sub.wrapping_sub(1) & s;
                let mut cell = partial.clone();
                cell.push(s);
                cell.extend(bits(sub, m).into_iter().map(|j| 1u32 << j));
                next.push(cell);
                if sub == 0 {
                    break;
                }
            }
        }
        out = next;
    }
    out.into_iter().map(sorted).collect()
}

/// Output of the quotient search at one level: per class, the representative
/// node and the automorphism group of its rays.
struct ClassInfo {
    rep_level: usize,
    rep: usize,
    group: Vec<Vec<usize>>,
    /// canonical orderings, indexed by output element
    orderings: Vec<Vec<usize>>,
}

struct Node {
    x: usize,
    rays: Vec<u32>,
}

fn subdivide<R>(g: &GeneralizedConeComplex, rule: R) -> Result<GeneralizedConeComplex>
where
    R: Fn(usize, usize) -> Result<Vec<Vec<u32>>>,
{
    let levels = g.num_levels();
    let mut nodes: Vec<Vec<Node>> = Vec::with_capacity(levels);
    let mut node_index: Vec<HashMap<(usize, Vec<u32>), usize>> = Vec::with_capacity(levels);
    for m in 0..levels {
        let mut ns = Vec::new();
        let mut idx = HashMap::new();
        for x in 0..g.count(m) {
            for rays in rule(m, x)? {
                idx.insert((x, rays.clone()), ns.len());
                ns.push(Node { x, rays });
            }
        }
        nodes.push(ns);
        node_index.push(idx);
    }

    // Classes of nodes under the coordinate permutations, keyed by number of rays.
    // class_of[m][node] = (output level k, class index within k, map rep-ray -> node-ray)
    let mut class_of: Vec<Vec<(usize, usize, Vec<usize>)>> = Vec::with_capacity(levels);
    let mut classes: Vec<Vec<ClassInfo>> = Vec::new();
    for m in 0..levels {
        let n = nodes[m].len();
        let mut assigned: Vec<Option<(usize, usize, Vec<usize>)>> = vec![None; n];
        for start in 0..n {
            if assigned[start].is_some() {
                continue;
            }
            let k = nodes[m][start].rays.len();
            while classes.len() <= k {
                classes.push(Vec::new());
            }
            let cls = classes[k].len();
            let id: Vec<usize> = (0..k).collect();
            assigned[start] = Some((k, cls, id));
            let mut gens: Vec<Vec<usize>> = Vec::new();
            let mut queue = vec![start];
            let mut qi = 0;
            while qi < queue.len() {
                let p = queue[qi];
                qi += 1;
                let map_p = assigned[p].as_ref().unwrap().2.clone();
                let node = &nodes[m][p];
                for i in 0..m.saturating_sub(1) {
                    let y = g.t.swap(m, node.x, i);
                    let moved: Vec<u32> = node.rays.iter().map(|&r| swap_bits(r, i)).collect();
                    let mut rays = moved.clone();
                    rays.sort_unstable();
                    let q = node_index[m][&(y, rays.clone())];
                    // node-p ray position -> node-q ray position
                    let edge: Vec<usize> = moved
                        .iter()
                        .map(|r| rays.binary_search(r).unwrap())
                        .collect();
                    let via: Vec<usize> = map_p.iter().map(|&r| edge[r]).collect();
                    match &assigned[q] {
                        None => {
                            assigned[q] = Some((k, cls, via));
                            queue.push(q);
                        }
                        Some((_, _, map_q)) => {
                            let inv_q = perm::inverse(map_q);
                            let h: Vec<usize> = via.iter().map(|&r| inv_q[r]).collect();
                            if h.iter().enumerate().any(|(a, &b)| a != b) && !gens.contains(&h) {
                                gens.push(h);
                            }
                        }
                    }
                }
            }
            let group = close_group(k, &gens);
            let mut orderings: BTreeSet<Vec<usize>> = BTreeSet::new();
            for w in perm::all_perms(k) {
                orderings.insert(canonical_ordering(&group, &w));
            }
            classes[k].push(ClassInfo {
                rep_level: m,
                rep: start,
                group,
                orderings: orderings.into_iter().collect(),
            });
        }
        class_of.push(assigned.into_iter().map(Option::unwrap).collect());
    }

    // Assign output element indices per level k.
    let element_base: Vec<Vec<usize>> = classes
        .iter()
        .map(|level| {
            let mut acc = 0;
            level
                .iter()
                .map(|c| {
                    let b = acc;
                    acc += c.orderings.len();
                    b
                })
                .collect()
        })
        .collect();
    let lookup = |k: usize, cls: usize, ordering: &[usize]| -> usize {
        let info = &classes[k][cls];
        let canon = canonical_ordering(&info.group, ordering);
        element_base[k][cls] + info.orderings.binary_search(&canon).unwrap()
    };

    let mut out_levels: Vec<Vec<Cell>> = vec![Vec::new(); classes.len()];
    let mut out_labels: Vec<Vec<String>> = vec![Vec::new(); classes.len()];
    for k in 0..classes.len() {
        for (cls, info) in classes[k].iter().enumerate() {
            let m0 = info.rep_level;
            let node = &nodes[m0][info.rep];
            for (o, w) in info.orderings.iter().enumerate() {
                let swaps = (0..k.saturating_sub(1))
                    .map(|i| {
                        let mut w2 = w.clone();
                        w2.swap(i, i + 1);
                        lookup(k, cls, &w2)
                    })
                    .collect();
                let mut faces = Vec::with_capacity(k);
                for i in 0..k {
                    // drop output slot i
                    let remaining: Vec<u32> = (0..k)
                        .filter(|&j| j != i)
                        .map(|j| node.rays[w[j]])
                        .collect();
                    let support = remaining.iter().fold(0, |a, b| a | b);
                    let (fm, fx, translated) = if support == full(m0) {
                        (m0, node.x, remaining)
                    } else {
                        let theta = bits(support, m0);
                        let (fm, fx) = g.t.eval(m0, node.x, &theta);
                        let tr: Vec<u32> = remaining
                            .iter()
                            .map(|&r| {
                                theta
                                    .iter()
                                    .enumerate()
                                    .filter(|(_, &b)| r >> b & 1 == 1)
                                    .fold(0u32, |acc, (j, _)| acc | (1 << j))
                            })
                            .collect();
                        (fm, fx, tr)
                    };
                    let mut key = translated.clone();
                    key.sort_unstable();
                    let q = *node_index[fm].get(&(fx, key.clone())).ok_or_else(|| {
                        Error::Malformed("subdivision rule is not closed under faces".into())
                    })?;
                    let (fk, fcls, map_q) = &class_of[fm][q];
                    let inv_q = perm::inverse(map_q);
                    let ordering: Vec<usize> = translated
                        .iter()
                        .map(|r| inv_q[key.binary_search(r).unwrap()])
                        .collect();
                    faces.push(lookup(*fk, *fcls, &ordering));
                }
                if k == 0 {
                    faces.clear();
                }
                out_levels[k].push(Cell { faces, swaps });
                out_labels[k].push(format!("k{k}_{}", element_base[k][cls] + o));
            }
        }
    }
    Ok(GeneralizedConeComplex::from_tables(out_levels, out_labels))
}

/// Closure of a set of permutations of `0..k` under composition.
fn close_group(k: usize, gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..k).collect();
    let mut group = vec![id];
    let mut i = 0;
    while i < group.len() {
        for gen in gens {
            let p = perm::compose(gen, &group[i]);
            if !group.contains(&p) {
                group.push(p);
            }
        }
        i += 1;
    }
    group
}

fn canonical_ordering(group: &[Vec<usize>], w: &[usize]) -> Vec<usize> {
    group.iter().map(|h| perm::compose(h, w)).min().unwrap_or_else(|| w.to_vec())
}

/// `B(B(GC(c)))` read back as a Δ-complex: an unordered complex without
/// self-glued simplices and with the same homotopy type as `c`.
pub fn snc_reduce(c: &GeneralizedDeltaComplex) -> GeneralizedDeltaComplex {
    let twice = barycentric_subdivision(&barycentric_subdivision(&cone_over(c)));
    to_delta_complex(&twice).expect("subdivision keeps a unique apex")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> GeneralizedDeltaComplex {
        GeneralizedDeltaComplex::from_simplicial(&[vec!["1", "2"], vec!["1", "3"], vec!["2", "3"]])
    }

    #[test]
    fn chain_counts_are_fubini_numbers() {
        let counts: Vec<usize> = (0..6).map(|m| full_chains(m).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 13, 75, 541]);
    }

    #[test]
    fn stellar_cells_of_a_square_orthant() {
        // star at {0,1} in R^2: {b, e0}, {b, e1}, plus {b} alone is not full support? it is.
        let cells = stellar_cells(2, &[0b11]);
        assert!(cells.contains(&vec![0b01, 0b11]));
        assert!(cells.contains(&vec![0b10, 0b11]));
        assert!(cells.contains(&vec![0b11]));
        assert_eq!(cells.len(), 3);
    }

    #[test]
    fn cone_over_triangle() {
        let g = cone_over(&triangle());
        assert_eq!(g.orbit_counts(), vec![1, 3, 3]);
        assert!(g.apex_unique());
        assert!(g.validate().is_empty());
    }

    #[test]
    fn cone_over_empty_is_an_apex() {
        let g = cone_over(&GeneralizedDeltaComplex::empty());
        assert_eq!(g.orbit_counts(), vec![1]);
        assert!(to_delta_complex(&g).unwrap().is_empty());
    }

    #[test]
    fn two_apexes_are_rejected() {
        let g = GeneralizedConeComplex::from_tables(
            vec![vec![Cell::default(), Cell::default()]],
            vec![vec!["a".into(), "b".into()]],
        );
        assert!(matches!(to_delta_complex(&g), Err(Error::NotUniqueVertex(2))));
    }

    #[test]
    fn barycentric_of_triangle_is_a_hexagon() {
        let b = barycentric_subdivision(&cone_over(&triangle()));
        assert!(b.validate().is_empty());
        assert_eq!(b.orbit_counts(), vec![1, 6, 6]);
        assert!(b.has_trivial_stabilizers());
    }
}
