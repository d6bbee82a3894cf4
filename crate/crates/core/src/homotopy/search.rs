//! Certificates, greedy collapse cores and the bounded bidirectional search.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::homology::homology;
use super::moves::{collapse, collapse_inverse, expand, expansion_pair, free_faces, CollapsePair, ExpansionSpec};
use crate::error::{Error, Result};
use crate::symdelta::{canonical_form, canonical_label, euler_characteristic, GeneralizedDeltaComplex, SimplexId};

/// One step of a certificate. Ids are canonical labels of the complex the
/// move is applied to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Move {
    Collapse { free_face: String, coface: String },
    Expand { dim: usize, free_slot: usize, boundary: Vec<String> },
}

/// Ordered moves turning one complex into (a complex isomorphic to) another.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoveCertificate {
    pub moves: Vec<Move>,
}

impl MoveCertificate {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn to_json(&self) -> String {
        crate::io::to_json(self)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Search limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_moves: usize,
    pub max_states: usize,
    /// Largest dimension of an expansion; `None` means one above the larger
    /// input dimension.
    pub max_expand_dim: Option<usize>,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_moves: 32, max_states: 10_000, max_expand_dim: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent(MoveCertificate),
    /// The named invariant differs; `detail` shows both values.
    NotEquivalent { invariant: String, detail: String },
    Inconclusive { reason: String },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equivalent(c) => write!(f, "EQUIVALENT ({} moves)", c.len()),
            Verdict::NotEquivalent { invariant, detail } => {
                write!(f, "NOT_EQUIVALENT ({invariant}: {detail})")
            }
            Verdict::Inconclusive { reason } => write!(f, "INCONCLUSIVE ({reason})"),
        }
    }
}

fn resolve(c: &GeneralizedDeltaComplex, label: &str) -> std::result::Result<SimplexId, String> {
    c.find(label).ok_or_else(|| format!("no simplex labelled {label}"))
}

/// Applies one move to a complex whose labels the move refers to.
pub fn apply_move(c: &GeneralizedDeltaComplex, m: &Move) -> std::result::Result<GeneralizedDeltaComplex, String> {
    match m {
        Move::Collapse { free_face, coface } => {
            let pair = CollapsePair { free_face: resolve(c, free_face)?, coface: resolve(c, coface)? };
            collapse(c, pair).map_err(|e| e.to_string())
        }
        Move::Expand { dim, free_slot, boundary } => {
            let boundary = boundary.iter().map(|l| resolve(c, l)).collect::<std::result::Result<_, _>>()?;
            let spec = ExpansionSpec { new_dim: *dim, free_slot: *free_slot, boundary };
            expand(c, &spec).map_err(|e| e.to_string())
        }
    }
}

/// Replays a certificate from `source`, canonicalizing before every move.
/// Returns the final canonical complex.
pub fn replay(source: &GeneralizedDeltaComplex, cert: &MoveCertificate) -> Result<GeneralizedDeltaComplex> {
    let mut cur = canonical_form(source).complex;
    for (index, m) in cert.moves.iter().enumerate() {
        let next = apply_move(&cur, m).map_err(|reason| Error::Replay { index, reason })?;
        cur = canonical_form(&next).complex;
    }
    Ok(cur)
}

/// A move between canonical complexes together with its inverse, expressed
/// in the labels of the result.
struct Step {
    child: GeneralizedDeltaComplex,
    hash: String,
    forward: Move,
    backward: Move,
}

fn label_of(c: &GeneralizedDeltaComplex, id: SimplexId) -> String {
    c.label(id).to_string()
}

fn collapse_step(s: &GeneralizedDeltaComplex, pair: CollapsePair) -> Step {
    let raw = collapse(s, pair).expect("pair comes from free_faces");
    let cf = canonical_form(&raw);
    let inv = collapse_inverse(s, pair);
    let backward = Move::Expand {
        dim: inv.new_dim,
        free_slot: inv.free_slot,
        boundary: inv
            .boundary
            .iter()
            .map(|b| canonical_label(b.dim, cf.labeling[b.dim][b.index]))
            .collect(),
    };
    let forward = Move::Collapse {
        free_face: label_of(s, pair.free_face),
        coface: label_of(s, pair.coface),
    };
    Step { child: cf.complex, hash: cf.hash, forward, backward }
}

fn expansion_step(s: &GeneralizedDeltaComplex, spec: &ExpansionSpec) -> Option<Step> {
    let raw = expand(s, spec).ok()?;
    let cf = canonical_form(&raw);
    let pair = expansion_pair(s, spec);
    let backward = Move::Collapse {
        free_face: canonical_label(pair.free_face.dim, cf.labeling[pair.free_face.dim][pair.free_face.index]),
        coface: canonical_label(pair.coface.dim, cf.labeling[pair.coface.dim][pair.coface.index]),
    };
    let forward = Move::Expand {
        dim: spec.new_dim,
        free_slot: spec.free_slot,
        boundary: spec.boundary.iter().map(|&b| label_of(s, b)).collect(),
    };
    Some(Step { child: cf.complex, hash: cf.hash, forward, backward })
}

/// Greedy collapse sequence on canonical intermediates: repeatedly removes
/// the first free pair until none is left.
pub fn collapse_core(c: &GeneralizedDeltaComplex) -> (GeneralizedDeltaComplex, MoveCertificate) {
    let (core, steps) = core_steps(c);
    (core, MoveCertificate { moves: steps.into_iter().map(|(f, _)| f).collect() })
}

/// Collapse core with every forward move and its inverse.
fn core_steps(c: &GeneralizedDeltaComplex) -> (GeneralizedDeltaComplex, Vec<(Move, Move)>) {
    let mut cur = canonical_form(c).complex;
    let mut steps = Vec::new();
    while let Some(&pair) = free_faces(&cur).first() {
        let step = collapse_step(&cur, pair);
        steps.push((step.forward, step.backward));
        cur = step.child;
    }
    (cur, steps)
}

/// Expansions of dimension `1..=max_dim` with the last slot free, one per
/// compatible boundary assignment.
fn expansions(s: &GeneralizedDeltaComplex, max_dim: usize) -> Vec<ExpansionSpec> {
    let mut out = Vec::new();
    for p in 1..=max_dim {
        if p > s.num_levels() || s.count(p - 1) == 0 {
            break;
        }
        let mut partial = Vec::with_capacity(p);
        fill_boundary(s, p, &mut partial, &mut out);
    }
    out
}

fn fill_boundary(s: &GeneralizedDeltaComplex, p: usize, partial: &mut Vec<SimplexId>, out: &mut Vec<ExpansionSpec>) {
    let j = partial.len();
    if j == p {
        out.push(ExpansionSpec { new_dim: p, free_slot: p, boundary: partial.clone() });
        return;
    }
    for e in 0..s.count(p - 1) {
        let cand = SimplexId::new(p - 1, e);
        // d_i d_j = d_{j-1} d_i for every earlier slot i
        if (0..j).all(|i| s.face(cand, i) == s.face(partial[i], j - 1)) {
            partial.push(cand);
            fill_boundary(s, p, partial, out);
            partial.pop();
        }
    }
}

struct Node {
    complex: GeneralizedDeltaComplex,
    depth: usize,
    parent: Option<String>,
    /// From the parent to this node on the source side; from this node to the
    /// parent on the target side.
    link: Option<Move>,
}

/// Decides simple homotopy equivalence within a budget.
///
/// Differences in homology or Euler characteristic give `NotEquivalent`.
/// Otherwise isomorphic inputs give an empty certificate, then collapse cores
/// are compared, then a breadth-first search runs from both cores at once
/// over canonical complexes.
pub fn simple_homotopy_equivalent(a: &GeneralizedDeltaComplex, b: &GeneralizedDeltaComplex, budget: Budget) -> Verdict {
    let (ha, hb) = (homology(a), homology(b));
    if ha != hb {
        let degrees = ha.betti.len().max(hb.betti.len());
        let d = (0..degrees).find(|&d| ha.group(d) != hb.group(d)).unwrap_or(0);
        return Verdict::NotEquivalent {
            invariant: format!("H{d}"),
            detail: format!("{} vs {}", ha.group_string(d), hb.group_string(d)),
        };
    }
    let (chi_a, chi_b) = (euler_characteristic(a), euler_characteristic(b));
    if chi_a != chi_b {
        return Verdict::NotEquivalent {
            invariant: "euler characteristic".into(),
            detail: format!("{chi_a} vs {chi_b}"),
        };
    }
    let (ca, cb) = (canonical_form(a), canonical_form(b));
    if ca.hash == cb.hash && ca.complex == cb.complex {
        return Verdict::Equivalent(MoveCertificate::default());
    }
    let (core_a, steps_a) = core_steps(a);
    let (core_b, steps_b) = core_steps(b);
    let prefix: Vec<Move> = steps_a.into_iter().map(|(f, _)| f).collect();
    let suffix: Vec<Move> = steps_b.into_iter().rev().map(|(_, r)| r).collect();
    let max_dim = budget
        .max_expand_dim
        .unwrap_or(a.dim().max(b.dim()).max(0) as usize + 1);
    let search_moves = budget.max_moves.saturating_sub(prefix.len() + suffix.len());
    let middle = match bidirectional(core_a, core_b, search_moves, budget.max_states, max_dim) {
        Ok(m) => m,
        Err(reason) => return Verdict::Inconclusive { reason },
    };
    let moves: Vec<Move> = prefix.into_iter().chain(middle).chain(suffix).collect();
    if moves.len() > budget.max_moves {
        return Verdict::Inconclusive { reason: format!("shortest certificate found exceeds {} moves", budget.max_moves) };
    }
    Verdict::Equivalent(MoveCertificate { moves })
}

fn bidirectional(
    a: GeneralizedDeltaComplex,
    b: GeneralizedDeltaComplex,
    max_moves: usize,
    max_states: usize,
    max_dim: usize,
) -> std::result::Result<Vec<Move>, String> {
    let ha = canonical_form(&a).hash;
    let hb = canonical_form(&b).hash;
    if ha == hb {
        return Ok(Vec::new());
    }
    let mut sides: [HashMap<String, Node>; 2] = [HashMap::new(), HashMap::new()];
    let mut frontiers: [VecDeque<String>; 2] = [VecDeque::from([ha.clone()]), VecDeque::from([hb.clone()])];
    sides[0].insert(ha, Node { complex: a, depth: 0, parent: None, link: None });
    sides[1].insert(hb, Node { complex: b, depth: 0, parent: None, link: None });
    let mut depths = [0usize; 2];
    loop {
        if depths[0] + depths[1] >= max_moves {
            return Err(format!("no certificate within {max_moves} search moves"));
        }
        // grow the side with the smaller frontier by one full layer
        let side = if frontiers[0].len() <= frontiers[1].len() { 0 } else { 1 };
        if frontiers[side].is_empty() {
            return Err("search space exhausted".into());
        }
        let layer: Vec<String> = frontiers[side].drain(..).collect();
        let mut meeting: Option<(String, String, Move)> = None;
        for h in layer {
            let node = &sides[side][&h];
            let depth = node.depth;
            let s = node.complex.clone();
            let mut steps: Vec<Step> = free_faces(&s).into_iter().map(|p| collapse_step(&s, p)).collect();
            steps.extend(expansions(&s, max_dim).iter().filter_map(|spec| expansion_step(&s, spec)));
            let mut seen_here = HashSet::new();
            for step in steps {
                if !seen_here.insert(step.hash.clone()) || sides[side].contains_key(&step.hash) {
                    continue;
                }
                let link = if side == 0 { step.forward.clone() } else { step.backward.clone() };
                if sides[1 - side].contains_key(&step.hash) && meeting.is_none() {
                    meeting = Some((h.clone(), step.hash.clone(), link.clone()));
                }
                sides[side].insert(
                    step.hash.clone(),
                    Node { complex: step.child, depth: depth + 1, parent: Some(h.clone()), link: Some(link) },
                );
                frontiers[side].push_back(step.hash);
                if sides[0].len() + sides[1].len() > max_states {
                    return Err(format!("state budget of {max_states} exhausted"));
                }
            }
            if meeting.is_some() {
                break;
            }
        }
        depths[side] += 1;
        if let Some((_, hit, _)) = meeting {
            return Ok(path(&sides, &hit));
        }
    }
}

/// Moves from the source root to `hit` and on to the target root.
fn path(sides: &[HashMap<String, Node>; 2], hit: &str) -> Vec<Move> {
    let mut head = Vec::new();
    let mut cur = hit.to_string();
    while let Some(node) = sides[0].get(&cur) {
        match (&node.parent, &node.link) {
            (Some(p), Some(m)) => {
                head.push(m.clone());
                cur = p.clone();
            }
            _ => break,
        }
    }
    head.reverse();
    let mut cur = hit.to_string();
    while let Some(node) = sides[1].get(&cur) {
        match (&node.parent, &node.link) {
            (Some(p), Some(m)) => {
                head.push(m.clone());
                cur = p.clone();
            }
            _ => break,
        }
    }
    head
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symdelta::is_isomorphic;

    fn simplicial(facets: &[&[&str]]) -> GeneralizedDeltaComplex {
        let f: Vec<Vec<&str>> = facets.iter().map(|f| f.to_vec()).collect();
        GeneralizedDeltaComplex::from_simplicial(&f)
    }

    fn triangle() -> GeneralizedDeltaComplex {
        simplicial(&[&["1", "2"], &["2", "3"], &["1", "3"]])
    }

    fn square() -> GeneralizedDeltaComplex {
        simplicial(&[&["1", "E"], &["E", "2"], &["2", "3"], &["3", "1"]])
    }

    #[test]
    fn disk_core_is_a_point() {
        let (core, cert) = collapse_core(&simplicial(&[&["1", "2", "3"]]));
        assert_eq!(core.f_vector(), vec![1]);
        assert_eq!(cert.len(), 3);
    }

    #[test]
    fn pendant_square_core_is_the_square() {
        let pendant = simplicial(&[&["1", "E"], &["E", "2"], &["2", "3"], &["3", "1"], &["E", "X"]]);
        let (core, cert) = collapse_core(&pendant);
        assert!(is_isomorphic(&core, &square()).is_some());
        assert_eq!(cert.len(), 1);
        assert!(is_isomorphic(&replay(&pendant, &cert).unwrap(), &square()).is_some());
    }

    #[test]
    fn hollow_triangle_core_is_itself() {
        let (core, cert) = collapse_core(&triangle());
        assert!(cert.is_empty());
        assert!(is_isomorphic(&core, &triangle()).is_some());
    }

    #[test]
    fn triangle_and_square_are_equivalent() {
        let v = simple_homotopy_equivalent(&triangle(), &square(), Budget::default());
        let Verdict::Equivalent(cert) = v else { panic!("{v}") };
        assert!(cert.len() <= 4, "{}", cert.to_json());
        let end = replay(&triangle(), &cert).unwrap();
        assert!(is_isomorphic(&end, &square()).is_some());
        let back = MoveCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn triangle_and_point_differ_in_homology() {
        let v = simple_homotopy_equivalent(&triangle(), &simplicial(&[&["p"]]), Budget::default());
        assert!(matches!(v, Verdict::NotEquivalent { ref invariant, .. } if invariant == "H1"), "{v}");
    }

    #[test]
    fn relabeled_triangle_needs_no_moves() {
        let other = simplicial(&[&["c", "a"], &["b", "c"], &["a", "b"]]);
        assert_eq!(simple_homotopy_equivalent(&triangle(), &other, Budget::default()), Verdict::Equivalent(MoveCertificate::default()));
    }

    #[test]
    fn certificate_json_shape() {
        let cert = MoveCertificate {
            moves: vec![
                Move::Collapse { free_face: "s0_1".into(), coface: "s1_2".into() },
                Move::Expand { dim: 1, free_slot: 1, boundary: vec!["s0_0".into()] },
            ],
        };
        let v: serde_json::Value = serde_json::from_str(&cert.to_json()).unwrap();
        assert_eq!(v[0]["op"], "collapse");
        assert_eq!(v[1]["op"], "expand");
        assert_eq!(v[1]["boundary"][0], "s0_0");
    }
}
