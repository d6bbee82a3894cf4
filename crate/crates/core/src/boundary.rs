//! Boundary complexes built from strata incidence data, and the two
//! modifications that leave them unchanged up to simple homotopy: blowing up
//! a center with normal crossings and taking a root along a component.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homotopy::{homology, remove_elements, HomologyProfile};
use crate::perm;
use crate::symdelta::{
    coequalizer, Cell, ComplexMap, GeneralizedDeltaComplex, OrderedCells, SimplexId, Tables,
};

/// Divisor components and the irreducible strata of their intersections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataIncidence {
    pub components: Vec<String>,
    pub strata: Vec<Stratum>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub id: String,
    pub subset: Vec<String>,
    /// Stratum reached by dropping a component. May be omitted when only one
    /// stratum lies on the smaller subset.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub faces: BTreeMap<String, String>,
}

/// Output of [`build_boundary_complex`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryComplex {
    pub complex: GeneralizedDeltaComplex,
    /// Vertex of each divisor component.
    pub vertex_of: BTreeMap<String, SimplexId>,
}

/// Checked strata data with resolved attachments.
struct Resolved {
    /// Component indices of every stratum, sorted.
    subsets: Vec<Vec<usize>>,
    /// `faces[s][c]`: stratum reached from `s` by dropping component `c`.
    faces: Vec<BTreeMap<usize, usize>>,
}

fn malformed(m: impl Into<String>) -> Error {
    Error::MalformedStrata(m.into())
}

fn resolve_strata(s: &StrataIncidence) -> Result<Resolved> {
    let comp: HashMap<&str, usize> = s.components.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    if comp.len() != s.components.len() {
        return Err(malformed("duplicate component label"));
    }
    let mut ids: HashMap<&str, usize> = HashMap::new();
    for (i, st) in s.strata.iter().enumerate() {
        if ids.insert(st.id.as_str(), i).is_some() {
            return Err(malformed(format!("duplicate stratum id {}", st.id)));
        }
    }
    let mut subsets = Vec::with_capacity(s.strata.len());
    for st in &s.strata {
        if st.subset.is_empty() {
            return Err(malformed(format!("stratum {} has an empty subset", st.id)));
        }
        let mut sub = Vec::new();
        for c in &st.subset {
            let &i = comp
                .get(c.as_str())
                .ok_or_else(|| malformed(format!("stratum {} uses unknown component {c}", st.id)))?;
            sub.push(i);
        }
        sub.sort_unstable();
        if sub.windows(2).any(|w| w[0] == w[1]) {
            return Err(malformed(format!("stratum {} repeats a component", st.id)));
        }
        subsets.push(sub);
    }
    for (ci, c) in s.components.iter().enumerate() {
        let n = subsets.iter().filter(|sub| sub.as_slice() == [ci]).count();
        if n != 1 {
            return Err(malformed(format!("component {c} has {n} singleton strata, expected 1")));
        }
    }
    let mut by_subset: HashMap<&[usize], Vec<usize>> = HashMap::new();
    for (i, sub) in subsets.iter().enumerate() {
        by_subset.entry(sub.as_slice()).or_default().push(i);
    }
    let mut faces = Vec::with_capacity(s.strata.len());
    for (i, st) in s.strata.iter().enumerate() {
        let sub = &subsets[i];
        let mut fmap = BTreeMap::new();
        for key in st.faces.keys() {
            if !comp.get(key.as_str()).is_some_and(|c| sub.contains(c)) {
                return Err(malformed(format!("stratum {} lists a face for {key}, not in its subset", st.id)));
            }
        }
        if sub.len() >= 2 {
            for &c in sub {
                let rest: Vec<usize> = sub.iter().copied().filter(|&x| x != c).collect();
                let target = match st.faces.get(&s.components[c]) {
                    Some(t) => *ids
                        .get(t.as_str())
                        .ok_or_else(|| malformed(format!("stratum {} attaches to unknown {t}", st.id)))?,
                    None => match by_subset.get(rest.as_slice()).map(Vec::as_slice) {
                        Some([only]) => *only,
                        Some(_) => {
                            return Err(malformed(format!(
                                "stratum {} needs an explicit face for {}",
                                st.id, s.components[c]
                            )))
                        }
                        None => {
                            return Err(malformed(format!(
                                "no stratum below {} after dropping {}",
                                st.id, s.components[c]
                            )))
                        }
                    },
                };
                if subsets[target] != rest {
                    return Err(malformed(format!(
                        "stratum {} attaches to {} which lies on the wrong subset",
                        st.id, s.strata[target].id
                    )));
                }
                fmap.insert(c, target);
            }
        }
        faces.push(fmap);
    }
    // dropping two components in either order reaches the same stratum
    for (i, sub) in subsets.iter().enumerate() {
        if sub.len() < 3 {
            continue;
        }
        for &a in sub {
            for &b in sub {
                if a < b && faces[faces[i][&a]][&b] != faces[faces[i][&b]][&a] {
                    return Err(malformed(format!(
                        "faces of {} disagree after dropping {} and {}",
                        s.strata[i].id, s.components[a], s.components[b]
                    )));
                }
            }
        }
    }
    Ok(Resolved { subsets, faces })
}

/// One (k-1)-simplex orbit per stratum on k components; its orderings are the
/// orderings of the components. Vertex labels are the singleton stratum ids,
/// other labels are `id[c1,c2,..]`.
pub fn build_boundary_complex(s: &StrataIncidence) -> Result<BoundaryComplex> {
    let r = resolve_strata(s)?;
    let cells = OrderedCells {
        slots: r.subsets.clone(),
        face: |cell: usize, comp: usize| r.faces[cell][&comp],
        label: |cell: usize, order: &[usize]| {
            let id = &s.strata[cell].id;
            if order.len() == 1 {
                id.clone()
            } else {
                let names: Vec<&str> = order.iter().map(|&c| s.components[c].as_str()).collect();
                format!("{id}[{}]", names.join(","))
            }
        },
    };
    let complex = cells.build();
    let vertex_of = s
        .components
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            let st = r.subsets.iter().position(|sub| sub.as_slice() == [ci]).unwrap();
            (c.clone(), complex.find(&s.strata[st].id).unwrap())
        })
        .collect();
    Ok(BoundaryComplex { complex, vertex_of })
}

/// Where a relation chart's components and strata go in the object chart.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumMap {
    pub components: BTreeMap<String, String>,
    pub strata: BTreeMap<String, String>,
}

/// The complex map induced by a stratum map. An ordering of a relation
/// stratum goes to the image stratum ordered by the image components.
pub fn induced_map(
    relations: &StrataIncidence,
    objects: &StrataIncidence,
    m: &StratumMap,
) -> Result<ComplexMap> {
    let src = build_boundary_complex(relations)?.complex;
    let tgt = build_boundary_complex(objects)?.complex;
    let obj_index: HashMap<&str, usize> = objects.strata.iter().enumerate().map(|(i, s)| (s.id.as_str(), i)).collect();
    let rel_by_id: HashMap<&str, &Stratum> = relations.strata.iter().map(|s| (s.id.as_str(), s)).collect();
    let mut assignment = Vec::with_capacity(src.num_levels());
    for d in 0..src.num_levels() {
        let mut row = Vec::with_capacity(src.count(d));
        for e in 0..src.count(d) {
            let id = SimplexId::new(d, e);
            let (stratum, order) = split_label(src.label(id), relations, &rel_by_id);
            let image = m
                .strata
                .get(&stratum)
                .ok_or_else(|| Error::InvalidMap(format!("stratum {stratum} has no image")))?;
            let oi = *obj_index
                .get(image.as_str())
                .ok_or_else(|| Error::InvalidMap(format!("image {image} is not an object stratum")))?;
            let mapped: Vec<String> = order
                .iter()
                .map(|c| {
                    m.components
                        .get(c)
                        .cloned()
                        .ok_or_else(|| Error::InvalidMap(format!("component {c} has no image")))
                })
                .collect::<Result<_>>()?;
            let label = if mapped.len() == 1 {
                objects.strata[oi].id.clone()
            } else {
                format!("{}[{}]", objects.strata[oi].id, mapped.join(","))
            };
            let target = tgt.find(&label).filter(|t| t.dim == d).ok_or_else(|| {
                Error::InvalidMap(format!("components of {stratum} do not map onto those of {image}"))
            })?;
            row.push(target.index);
        }
        assignment.push(row);
    }
    ComplexMap::new(src, tgt, assignment)
}

/// Stratum id and component ordering of a label produced by
/// [`build_boundary_complex`].
fn split_label(label: &str, s: &StrataIncidence, by_id: &HashMap<&str, &Stratum>) -> (String, Vec<String>) {
    match label.split_once('[') {
        Some((id, rest)) => {
            let body = rest.trim_end_matches(']');
            (id.to_string(), body.split(',').map(str::to_string).collect())
        }
        None => {
            let comp = by_id.get(label).map(|st| st.subset[0].clone()).unwrap_or_default();
            debug_assert!(s.components.contains(&comp));
            (label.to_string(), vec![comp])
        }
    }
}

/// Coequalizer of the two maps induced by `p1` and `p2`.
pub fn build_stacky_boundary_complex(
    objects: &StrataIncidence,
    relations: &StrataIncidence,
    p1: &StratumMap,
    p2: &StratumMap,
) -> Result<GeneralizedDeltaComplex> {
    let f = induced_map(relations, objects, p1)?;
    let g = induced_map(relations, objects, p2)?;
    Ok(coequalizer(&f, &g)?.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mark {
    Contained,
    Proper,
    Disjoint,
}

/// How each stratum meets the blow-up center. Keys are orbit names (the label
/// up to `[`) or the label of any simplex in the orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterAnnotation {
    pub exceptional: String,
    pub marks: BTreeMap<String, Mark>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationReport {
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

impl AnnotationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Orbit structure of a complex: orbit of every element, members, and the
/// orbits met by faces of each orbit.
struct Orbits {
    of: Vec<Vec<usize>>,
    members: Vec<Vec<Vec<usize>>>,
    faces: Vec<Vec<BTreeSet<usize>>>,
}

impl Orbits {
    fn new(c: &GeneralizedDeltaComplex) -> Self {
        let of: Vec<Vec<usize>> = (0..c.num_levels()).map(|d| c.orbits(d).0).collect();
        let members: Vec<Vec<Vec<usize>>> = (0..c.num_levels()).map(|d| c.orbit_members(d)).collect();
        let faces = (0..c.num_levels())
            .map(|d| {
                members[d]
                    .iter()
                    .map(|m| c.cells(d)[m[0]].faces.iter().map(|&f| of[d - 1][f]).collect())
                    .collect()
            })
            .collect();
        Self { of, members, faces }
    }

    fn all(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.members.iter().enumerate().flat_map(|(d, m)| (0..m.len()).map(move |o| (d, o)))
    }

    /// Every orbit reachable by repeated faces, including the orbit itself.
    fn closure(&self, d: usize, o: usize) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::from([(d, o)]);
        let mut stack = vec![(d, o)];
        while let Some((d, o)) = stack.pop() {
            if d == 0 {
                continue;
            }
            for &f in &self.faces[d][o] {
                if out.insert((d - 1, f)) {
                    stack.push((d - 1, f));
                }
            }
        }
        out
    }
}

/// Mark of every orbit, or the keys that could not be matched.
fn orbit_marks(
    c: &GeneralizedDeltaComplex,
    orbits: &Orbits,
    ann: &CenterAnnotation,
    report: &mut AnnotationReport,
) -> Vec<Vec<Option<Mark>>> {
    let mut marks: Vec<Vec<Option<Mark>>> = orbits.members.iter().map(|m| vec![None; m.len()]).collect();
    for (key, &mark) in &ann.marks {
        let mut hit = BTreeSet::new();
        for id in c.ids() {
            if c.orbit_name(id) == key || c.label(id) == key {
                hit.insert((id.dim, orbits.of[id.dim][id.index]));
            }
        }
        if hit.is_empty() {
            report.violations.push(format!("{key} does not name a stratum"));
        }
        for (d, o) in hit {
            match marks[d][o] {
                Some(prev) if prev != mark => report
                    .violations
                    .push(format!("{} is marked both {prev:?} and {mark:?}", orbit_display(c, orbits, d, o))),
                _ => marks[d][o] = Some(mark),
            }
        }
    }
    marks
}

fn orbit_display(c: &GeneralizedDeltaComplex, orbits: &Orbits, d: usize, o: usize) -> String {
    c.orbit_name(SimplexId::new(d, orbits.members[d][o][0])).to_string()
}

/// Checks an annotation against the center rules.
///
/// Besides closedness of the center and face-closedness of the non-disjoint
/// strata this asks for a center of star shape: the contained strata are
/// exactly the cofaces of one stratum, every proper stratum is a face of a
/// contained one, and without contained strata the proper ones span an
/// acyclic subcomplex. Strata touched by the move must have free orbits and
/// distinct vertices.
pub fn validate_annotation(c: &GeneralizedDeltaComplex, ann: &CenterAnnotation) -> AnnotationReport {
    let mut report = AnnotationReport::default();
    let orbits = Orbits::new(c);
    let marks = orbit_marks(c, &orbits, ann, &mut report);
    let name = |d: usize, o: usize| orbit_display(c, &orbits, d, o);
    for (d, o) in orbits.all() {
        if marks[d][o].is_none() {
            report.violations.push(format!("{} is not marked", name(d, o)));
        }
    }
    if !report.violations.is_empty() {
        return report;
    }
    let mark = |d: usize, o: usize| marks[d][o].unwrap();
    for (d, o) in orbits.all() {
        if d == 0 {
            continue;
        }
        for &f in &orbits.faces[d][o] {
            if mark(d - 1, f) == Mark::Contained && mark(d, o) != Mark::Contained {
                report.violations.push(format!(
                    "{} is a coface of contained {} but is not contained",
                    name(d, o),
                    name(d - 1, f)
                ));
            }
            if mark(d, o) != Mark::Disjoint && mark(d - 1, f) == Mark::Disjoint {
                report.violations.push(format!(
                    "{} is not disjoint but its face {} is",
                    name(d, o),
                    name(d - 1, f)
                ));
            }
        }
    }
    let contained: Vec<(usize, usize)> = orbits.all().filter(|&(d, o)| mark(d, o) == Mark::Contained).collect();
    let proper: Vec<(usize, usize)> = orbits.all().filter(|&(d, o)| mark(d, o) == Mark::Proper).collect();
    if contained.is_empty() && proper.is_empty() {
        report.warnings.push("every stratum is disjoint from the center; the move is the identity".into());
        return report;
    }
    for &(d, o) in contained.iter().chain(&proper) {
        let members = &orbits.members[d][o];
        if members.len() != perm::factorial(d + 1) {
            report.violations.push(format!("{} has a nontrivial stabilizer", name(d, o)));
        } else {
            let mut v = c.vertices(SimplexId::new(d, members[0]));
            v.sort_unstable();
            if v.windows(2).any(|w| w[0] == w[1]) {
                report.violations.push(format!("{} has a repeated vertex", name(d, o)));
            }
        }
    }
    if !contained.is_empty() {
        let min_dim = contained.iter().map(|&(d, _)| d).min().unwrap();
        let lowest: Vec<_> = contained.iter().filter(|&&(d, _)| d == min_dim).collect();
        if lowest.len() > 1 {
            report.violations.push(format!(
                "the contained strata have {} minimal members; a center lies in a single deepest stratum",
                lowest.len()
            ));
        } else {
            let core = *lowest[0];
            for &(d, o) in &contained {
                if !orbits.closure(d, o).contains(&core) {
                    report.violations.push(format!(
                        "contained {} does not contain {}",
                        name(d, o),
                        name(core.0, core.1)
                    ));
                }
            }
        }
        let under: BTreeSet<(usize, usize)> =
            contained.iter().flat_map(|&(d, o)| orbits.closure(d, o)).collect();
        for &(d, o) in &proper {
            if !under.contains(&(d, o)) {
                report.violations.push(format!(
                    "proper {} is not a face of a contained stratum",
                    name(d, o)
                ));
            }
        }
    } else if report.violations.is_empty() {
        let keep: BTreeSet<(usize, usize)> = proper.iter().copied().collect();
        let sub = subcomplex(c, &orbits, &keep);
        let h = homology(&sub);
        let point = HomologyProfile { betti: vec![1], torsion: vec![vec![]] };
        if h != point {
            report.violations.push(format!("the proper strata span a subcomplex with {h}, not acyclic"));
        }
    }
    report
}

/// The subcomplex on a face-closed set of orbits.
fn subcomplex(c: &GeneralizedDeltaComplex, orbits: &Orbits, keep: &BTreeSet<(usize, usize)>) -> GeneralizedDeltaComplex {
    let remove: Vec<BTreeSet<usize>> = (0..c.num_levels())
        .map(|d| (0..c.count(d)).filter(|&e| !keep.contains(&(d, orbits.of[d][e]))).collect())
        .collect();
    remove_elements(c, &remove)
}

/// Blow-up along an annotated center: contained strata are deleted and a
/// vertex for the exceptional divisor is added. With contained strata, it is
/// joined to every face of a contained stratum that misses the deepest one,
/// once per contained stratum spanned; otherwise to the proper strata.
pub fn blowup_move(c: &GeneralizedDeltaComplex, ann: &CenterAnnotation) -> Result<GeneralizedDeltaComplex> {
    let report = validate_annotation(c, ann);
    if !report.is_valid() {
        return Err(Error::InvalidAnnotation(report.violations.join("; ")));
    }
    if !report.warnings.is_empty() {
        return Ok(c.clone());
    }
    if c.ids().any(|id| c.label(id) == ann.exceptional) {
        return Err(Error::InvalidAnnotation(format!("label {} is already taken", ann.exceptional)));
    }
    let orbits = Orbits::new(c);
    let mut dummy = AnnotationReport::default();
    let marks = orbit_marks(c, &orbits, ann, &mut dummy);
    let mark = |d: usize, o: usize| marks[d][o].unwrap();

    // join orbits are keyed by (spanning contained orbit, face orbit); with no
    // contained strata the proper strata are joined directly
    type Key = (Option<(usize, usize)>, usize, usize);
    let contained: Vec<(usize, usize)> = orbits.all().filter(|&(d, o)| mark(d, o) == Mark::Contained).collect();
    let core = contained.iter().min().map(|&(d, o)| SimplexId::new(d, orbits.members[d][o][0]));
    let core_vertices: BTreeSet<usize> = core.map(|s| c.vertices(s).into_iter().collect()).unwrap_or_default();
    let orbit_of = |id: SimplexId| (id.dim, orbits.of[id.dim][id.index]);
    // face of the representative of `t` spanned by the given vertices
    let span = |t: (usize, usize), verts: &BTreeSet<usize>| -> (usize, usize) {
        let rep = SimplexId::new(t.0, orbits.members[t.0][t.1][0]);
        let theta: Vec<usize> =
            c.vertices(rep).iter().enumerate().filter(|(_, v)| verts.contains(v)).map(|(i, _)| i).collect();
        orbit_of(c.pull_back(rep, &theta))
    };
    let mut join: BTreeSet<Key> = BTreeSet::new();
    if core.is_none() {
        join.extend(orbits.all().filter(|&(d, o)| mark(d, o) == Mark::Proper).map(|(d, o)| (None, d, o)));
    }
    for &t in &contained {
        let rep = SimplexId::new(t.0, orbits.members[t.0][t.1][0]);
        let verts = c.vertices(rep);
        let outside: u32 = (0..verts.len()).filter(|&i| !core_vertices.contains(&verts[i])).fold(0, |m, i| m | 1 << i);
        let full = (1u32 << verts.len()) - 1;
        for mask in 1..full {
            let misses_core = (0..verts.len()).any(|i| mask & 1 << i == 0 && core_vertices.contains(&verts[i]));
            if mask & outside == outside && misses_core {
                let theta: Vec<usize> = (0..verts.len()).filter(|&i| mask & 1 << i != 0).collect();
                let (q, o) = orbit_of(c.pull_back(rep, &theta));
                join.insert((Some(t), q, o));
            }
        }
    }
    let mut spans: HashMap<(usize, usize), usize> = HashMap::new();
    for &(_, q, o) in &join {
        *spans.entry((q, o)).or_default() += 1;
    }
    // survivors keep their order; contained elements are dropped
    let levels = c.num_levels().max(join.iter().map(|&(_, d, _)| d + 2).max().unwrap_or(1));
    let mut new_index: Vec<Vec<usize>> = Vec::new();
    let mut t = Tables::empty(1);
    for d in 0..levels {
        let mut next = 0;
        let row: Vec<usize> = (0..c.count(d))
            .map(|e| {
                if mark(d, orbits.of[d][e]) == Mark::Contained {
                    usize::MAX
                } else {
                    next += 1;
                    next - 1
                }
            })
            .collect();
        new_index.push(row);
        t.levels.push(Vec::new());
        t.labels.push(Vec::new());
    }
    for d in 0..c.num_levels() {
        for (e, cell) in c.cells(d).iter().enumerate() {
            if new_index[d][e] == usize::MAX {
                continue;
            }
            t.levels[d].push(Cell {
                faces: cell.faces.iter().map(|&f| new_index[d - 1][f]).collect(),
                swaps: cell.swaps.iter().map(|&s| new_index[d][s]).collect(),
            });
            t.labels[d].push(c.labels(d)[e].clone());
        }
    }
    let e_vertex = t.levels[0].len();
    t.levels[0].push(Cell::default());
    t.labels[0].push(ann.exceptional.clone());

    // element (y, e) of E * tau: y an ordering of tau, E inserted at slot e
    let mut base: HashMap<Key, usize> = HashMap::new();
    let mut pos_in_orbit: Vec<HashMap<usize, usize>> = vec![HashMap::new(); c.num_levels()];
    for &key in &join {
        let (within, q, o) = key;
        base.insert(key, t.levels[q + 1].len());
        let members = &orbits.members[q][o];
        for (k, &y) in members.iter().enumerate() {
            pos_in_orbit[q].insert(y, k);
        }
        let suffix = match within {
            Some((td, to)) if spans[&(q, o)] > 1 => format!("~{}", orbit_display(c, &orbits, td, to)),
            _ => String::new(),
        };
        for &y in members {
            for e in 0..q + 2 {
                t.levels[q + 1].push(Cell::default());
                t.labels[q + 1].push(format!("{}*{}{suffix}@{e}", ann.exceptional, c.labels(q)[y]));
            }
        }
    }
    let join_index = |key: Key, y: usize, e: usize| -> usize { base[&key] + pos_in_orbit[key.1][&y] * (key.1 + 2) + e };
    // key of the j-th face of y inside the join keyed by `key`
    let face_key = |key: Key, y: usize, j: usize| -> Key {
        let f = c.cells(key.1)[y].faces[j];
        let spanning = key.0.map(|t| {
            let mut verts: BTreeSet<usize> = c.vertices(SimplexId::new(key.1 - 1, f)).into_iter().collect();
            verts.extend(core_vertices.iter().copied());
            span(t, &verts)
        });
        (spanning, key.1 - 1, orbits.of[key.1 - 1][f])
    };
    for &key in &join {
        let q = key.1;
        for &y in &orbits.members[q][key.2] {
            for e in 0..q + 2 {
                let faces = (0..q + 2)
                    .map(|i| {
                        if i == e {
                            new_index[q][y]
                        } else if q == 0 {
                            e_vertex
                        } else {
                            let (j, e2) = if i < e { (i, e - 1) } else { (i - 1, e) };
                            join_index(face_key(key, y, j), c.cells(q)[y].faces[j], e2)
                        }
                    })
                    .collect();
                let swaps = (0..q + 1)
                    .map(|i| {
                        if i == e {
                            join_index(key, y, e + 1)
                        } else if i + 1 == e {
                            join_index(key, y, e - 1)
                        } else {
                            let j = if i + 1 < e { i } else { i - 1 };
                            join_index(key, c.cells(q)[y].swaps[j], e)
                        }
                    })
                    .collect();
                t.levels[q + 1][join_index(key, y, e)] = Cell { faces, swaps };
            }
        }
    }
    let out = GeneralizedDeltaComplex::from_raw(t);
    let violations = out.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidComplex(violations));
    }
    Ok(out)
}

/// Rooting index of every divisor component; absent components have index 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiplicityLedger {
    pub index: BTreeMap<String, u64>,
}

impl MultiplicityLedger {
    pub fn get(&self, component: &str) -> u64 {
        self.index.get(component).copied().unwrap_or(1)
    }
}

/// Root stack along a component: the complex is unchanged and the ledger
/// entry of the component is multiplied by `r`.
pub fn root_move(
    c: &GeneralizedDeltaComplex,
    component: &str,
    r: u64,
    ledger: &MultiplicityLedger,
) -> Result<(GeneralizedDeltaComplex, MultiplicityLedger)> {
    if r < 2 {
        return Err(Error::Malformed(format!("root index must be at least 2, got {r}")));
    }
    let known = (0..c.count(0)).any(|v| c.labels(0)[v] == component);
    if !known {
        return Err(Error::UnknownComponent(component.to_string()));
    }
    let mut next = ledger.clone();
    let entry = next.index.entry(component.to_string()).or_insert(1);
    *entry = entry
        .checked_mul(r)
        .ok_or_else(|| Error::Malformed(format!("rooting index of {component} overflows")))?;
    Ok((c.clone(), next))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::collapse_core;
    use crate::symdelta::is_isomorphic;

    fn stratum(id: &str, subset: &[&str]) -> Stratum {
        Stratum { id: id.into(), subset: subset.iter().map(|s| s.to_string()).collect(), faces: BTreeMap::new() }
    }

    fn three_lines() -> StrataIncidence {
        StrataIncidence {
            components: vec!["L1".into(), "L2".into(), "L3".into()],
            strata: vec![
                stratum("L1", &["L1"]),
                stratum("L2", &["L2"]),
                stratum("L3", &["L3"]),
                stratum("p12", &["L1", "L2"]),
                stratum("p13", &["L1", "L3"]),
                stratum("p23", &["L2", "L3"]),
            ],
        }
    }

    fn ann(marks: &[(&str, Mark)]) -> CenterAnnotation {
        CenterAnnotation {
            exceptional: "E".into(),
            marks: marks.iter().map(|(k, m)| (k.to_string(), *m)).collect(),
        }
    }

    fn square() -> GeneralizedDeltaComplex {
        GeneralizedDeltaComplex::from_simplicial(&[vec!["a", "b"], vec!["b", "c"], vec!["c", "d"], vec!["d", "a"]])
    }

    #[test]
    fn three_lines_give_a_triangle() {
        let b = build_boundary_complex(&three_lines()).unwrap();
        assert_eq!(b.complex.f_vector(), vec![3, 3]);
        assert!(b.complex.is_unordered());
        assert_eq!(b.complex.label(b.vertex_of["L2"]), "L2");
        assert!(b.complex.find("p12[L2,L1]").is_some());
    }

    #[test]
    fn blowup_keeps_separate_meetings_apart() {
        let s = StrataIncidence {
            components: vec!["C".into(), "L".into()],
            strata: vec![stratum("C", &["C"]), stratum("L", &["L"]), stratum("p", &["C", "L"]), stratum("q", &["C", "L"])],
        };
        let c = build_boundary_complex(&s).unwrap().complex;
        let marks = [("C", Mark::Contained), ("p", Mark::Contained), ("q", Mark::Contained), ("L", Mark::Proper)];
        let ann = CenterAnnotation {
            exceptional: "E".into(),
            marks: marks.iter().map(|(k, m)| (k.to_string(), *m)).collect(),
        };
        let b = blowup_move(&c, &ann).unwrap();
        assert_eq!(b.f_vector(), vec![2, 2]);
        assert!(is_isomorphic(&b, &c).is_some());
    }

    #[test]
    fn four_lines_give_a_square() {
        let s = StrataIncidence {
            components: ["L1'", "L2'", "L3", "E"].iter().map(|s| s.to_string()).collect(),
            strata: vec![
                stratum("L1'", &["L1'"]),
                stratum("L2'", &["L2'"]),
                stratum("L3", &["L3"]),
                stratum("E", &["E"]),
                stratum("a", &["L1'", "L3"]),
                stratum("b", &["L2'", "L3"]),
                stratum("c", &["L1'", "E"]),
                stratum("d", &["L2'", "E"]),
            ],
        };
        let b = build_boundary_complex(&s).unwrap();
        assert_eq!(b.complex.f_vector(), vec![4, 4]);
        assert!(is_isomorphic(&b.complex, &square()).is_some());
    }

    #[test]
    fn missing_face_is_malformed() {
        let mut s = three_lines();
        s.strata.retain(|st| st.id != "L3");
        assert!(matches!(build_boundary_complex(&s), Err(Error::MalformedStrata(_))));
    }

    #[test]
    fn ambiguous_face_needs_an_attachment() {
        let mut s = three_lines();
        s.strata.push(stratum("p12b", &["L1", "L2"]));
        s.strata.push(stratum("t", &["L1", "L2", "L3"]));
        assert!(matches!(build_boundary_complex(&s), Err(Error::MalformedStrata(_))));
        let last = s.strata.last_mut().unwrap();
        last.faces.insert("L3".into(), "p12b".into());
        let b = build_boundary_complex(&s).unwrap();
        assert_eq!(b.complex.f_vector(), vec![3, 4, 1]);
    }

    #[test]
    fn blowing_up_a_node_gives_the_square() {
        let tri = build_boundary_complex(&three_lines()).unwrap().complex;
        let a = ann(&[
            ("p12", Mark::Contained),
            ("L1", Mark::Proper),
            ("L2", Mark::Proper),
            ("L3", Mark::Disjoint),
            ("p13", Mark::Disjoint),
            ("p23", Mark::Disjoint),
        ]);
        assert!(validate_annotation(&tri, &a).is_valid());
        let out = blowup_move(&tri, &a).unwrap();
        assert_eq!(out.f_vector(), vec![4, 4]);
        assert!(is_isomorphic(&out, &square()).is_some());
    }

    #[test]
    fn proper_vertex_adds_a_pendant_edge() {
        let tri = build_boundary_complex(&three_lines()).unwrap().complex;
        let a = ann(&[
            ("L1", Mark::Proper),
            ("L2", Mark::Disjoint),
            ("L3", Mark::Disjoint),
            ("p12", Mark::Disjoint),
            ("p13", Mark::Disjoint),
            ("p23", Mark::Disjoint),
        ]);
        let out = blowup_move(&tri, &a).unwrap();
        assert_eq!(out.f_vector(), vec![4, 4]);
        assert!(is_isomorphic(&collapse_core(&out).0, &tri).is_some());
    }

    #[test]
    fn all_disjoint_is_the_identity_with_a_warning() {
        let tri = build_boundary_complex(&three_lines()).unwrap().complex;
        let a = ann(&[
            ("L1", Mark::Disjoint),
            ("L2", Mark::Disjoint),
            ("L3", Mark::Disjoint),
            ("p12", Mark::Disjoint),
            ("p13", Mark::Disjoint),
            ("p23", Mark::Disjoint),
        ]);
        let r = validate_annotation(&tri, &a);
        assert!(r.is_valid());
        assert_eq!(r.warnings.len(), 1);
        assert_eq!(blowup_move(&tri, &a).unwrap(), tri);
    }

    #[test]
    fn contained_edge_with_disjoint_vertex_is_rejected() {
        let tri = build_boundary_complex(&three_lines()).unwrap().complex;
        let a = ann(&[
            ("p12", Mark::Contained),
            ("L1", Mark::Proper),
            ("L2", Mark::Disjoint),
            ("L3", Mark::Disjoint),
            ("p13", Mark::Disjoint),
            ("p23", Mark::Disjoint),
        ]);
        let r = validate_annotation(&tri, &a);
        assert!(r.violations.iter().any(|v| v.contains("its face L2 is")), "{r:?}");
        assert!(matches!(blowup_move(&tri, &a), Err(Error::InvalidAnnotation(_))));
    }

    #[test]
    fn two_proper_vertices_without_center_are_rejected() {
        let tri = build_boundary_complex(&three_lines()).unwrap().complex;
        let a = ann(&[
            ("L1", Mark::Proper),
            ("L2", Mark::Proper),
            ("L3", Mark::Disjoint),
            ("p12", Mark::Disjoint),
            ("p13", Mark::Disjoint),
            ("p23", Mark::Disjoint),
        ]);
        assert!(!validate_annotation(&tri, &a).is_valid());
    }

    #[test]
    fn root_multiplies_the_ledger() {
        let tri = build_boundary_complex(&three_lines()).unwrap().complex;
        let (c1, l1) = root_move(&tri, "L1", 2, &MultiplicityLedger::default()).unwrap();
        let (c2, l2) = root_move(&c1, "L1", 3, &l1).unwrap();
        assert_eq!(c2, tri);
        assert_eq!(l2.get("L1"), 6);
        assert_eq!(l2.get("L2"), 1);
        assert!(matches!(root_move(&tri, "D9", 2, &l2), Err(Error::UnknownComponent(_))));
    }

    #[test]
    fn loop_from_two_maps() {
        let objects = StrataIncidence {
            components: vec!["a".into(), "b".into()],
            strata: vec![stratum("a", &["a"]), stratum("b", &["b"]), stratum("ab", &["a", "b"])],
        };
        let relations = StrataIncidence { components: vec!["c".into()], strata: vec![stratum("c", &["c"])] };
        let p = |t: &str| StratumMap {
            components: BTreeMap::from([("c".to_string(), t.to_string())]),
            strata: BTreeMap::from([("c".to_string(), t.to_string())]),
        };
        let lp = build_stacky_boundary_complex(&objects, &relations, &p("a"), &p("b")).unwrap();
        assert_eq!(lp.f_vector(), vec![1, 1]);
        assert!(lp.has_self_gluing());
        let h = homology(&lp);
        assert_eq!(h.betti, vec![1, 1]);
    }
}
