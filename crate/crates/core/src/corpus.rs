//! Named desk-scale examples: complexes, strata charts, presentations and
//! blow-up annotations.

use std::collections::BTreeMap;

use crate::boundary::{
    build_boundary_complex, validate_annotation, CenterAnnotation, Mark, StrataIncidence, Stratum,
    StratumMap,
};
use crate::io::StackyInput;
use crate::symdelta::{Cell, GeneralizedDeltaComplex};

fn simplicial(facets: &[&[&str]]) -> GeneralizedDeltaComplex {
    let f: Vec<Vec<&str>> = facets.iter().map(|f| f.to_vec()).collect();
    GeneralizedDeltaComplex::from_simplicial(&f)
}

fn numbered(facets: &[[usize; 3]]) -> GeneralizedDeltaComplex {
    let f: Vec<Vec<String>> = facets.iter().map(|t| t.iter().map(|v| format!("v{v}")).collect()).collect();
    GeneralizedDeltaComplex::from_simplicial(&f)
}

pub fn point() -> GeneralizedDeltaComplex {
    simplicial(&[&["p"]])
}

pub fn two_points() -> GeneralizedDeltaComplex {
    simplicial(&[&["p"], &["q"]])
}

pub fn hollow_triangle() -> GeneralizedDeltaComplex {
    simplicial(&[&["1", "2"], &["2", "3"], &["1", "3"]])
}

pub fn square() -> GeneralizedDeltaComplex {
    simplicial(&[&["1", "E"], &["E", "2"], &["2", "3"], &["3", "1"]])
}

pub fn pendant_square() -> GeneralizedDeltaComplex {
    simplicial(&[&["1", "E"], &["E", "2"], &["2", "3"], &["3", "1"], &["E", "X"]])
}

pub fn path(n: usize) -> GeneralizedDeltaComplex {
    let names: Vec<String> = (0..=n).map(|i| format!("p{i}")).collect();
    let facets: Vec<Vec<&str>> = (0..n).map(|i| vec![names[i].as_str(), names[i + 1].as_str()]).collect();
    if n == 0 {
        return point();
    }
    GeneralizedDeltaComplex::from_simplicial(&facets)
}

/// Full p-simplex.
pub fn simplex(p: usize) -> GeneralizedDeltaComplex {
    let names: Vec<String> = (0..=p).map(|i| i.to_string()).collect();
    GeneralizedDeltaComplex::from_simplicial(&[names])
}

/// Boundary of the (p+1)-simplex, a p-sphere.
pub fn sphere(p: usize) -> GeneralizedDeltaComplex {
    let facets: Vec<Vec<String>> = (0..=p + 1)
        .map(|skip| (0..=p + 1).filter(|&v| v != skip).map(|v| v.to_string()).collect())
        .collect();
    GeneralizedDeltaComplex::from_simplicial(&facets)
}

pub fn wedge_of_circles() -> GeneralizedDeltaComplex {
    simplicial(&[&["o", "a"], &["a", "b"], &["b", "o"], &["o", "c"], &["c", "d"], &["d", "o"]])
}

pub fn two_disks_along_an_edge() -> GeneralizedDeltaComplex {
    simplicial(&[&["1", "2", "3"], &["2", "3", "4"]])
}

pub fn bowtie() -> GeneralizedDeltaComplex {
    simplicial(&[&["o", "a", "b"], &["o", "c", "d"]])
}

/// Seven-vertex torus.
pub fn torus() -> GeneralizedDeltaComplex {
    let facets: Vec<[usize; 3]> = (0..7)
        .flat_map(|i| [[i, (i + 1) % 7, (i + 3) % 7], [i, (i + 2) % 7, (i + 3) % 7]])
        .collect();
    numbered(&facets)
}

/// Six-vertex real projective plane.
pub fn projective_plane() -> GeneralizedDeltaComplex {
    numbered(&[
        [1, 2, 3],
        [1, 3, 4],
        [1, 4, 5],
        [1, 5, 6],
        [1, 6, 2],
        [2, 3, 5],
        [3, 4, 6],
        [4, 5, 2],
        [5, 6, 3],
        [6, 2, 4],
    ])
}

/// One vertex and one free edge orbit whose two ends are that vertex.
pub fn self_glued_loop() -> GeneralizedDeltaComplex {
    GeneralizedDeltaComplex::from_tables(
        vec![vec![Cell::default()], vec![Cell { faces: vec![0, 0], swaps: vec![1] }, Cell { faces: vec![0, 0], swaps: vec![0] }]],
        vec![vec!["v".into()], vec!["e[0,1]".into(), "e[1,0]".into()]],
    )
}

/// An edge fixed by its transposition: the quotient of an interval by its
/// reflection.
pub fn half_interval() -> GeneralizedDeltaComplex {
    GeneralizedDeltaComplex::from_tables(
        vec![vec![Cell::default()], vec![Cell { faces: vec![0, 0], swaps: vec![0] }]],
        vec![vec!["v".into()], vec!["e".into()]],
    )
}

/// A 2-simplex orbit of size one: all three vertices, edges and orderings
/// identified.
pub fn folded_triangle() -> GeneralizedDeltaComplex {
    GeneralizedDeltaComplex::from_tables(
        vec![
            vec![Cell::default()],
            vec![Cell { faces: vec![0, 0], swaps: vec![0] }],
            vec![Cell { faces: vec![0, 0, 0], swaps: vec![0, 0] }],
        ],
        vec![vec!["v".into()], vec!["e".into()], vec!["f".into()]],
    )
}

/// Every named complex.
pub fn complexes() -> Vec<(String, GeneralizedDeltaComplex)> {
    let mut out: Vec<(String, GeneralizedDeltaComplex)> = vec![
        ("point".into(), point()),
        ("two-points".into(), two_points()),
        ("hollow-triangle".into(), hollow_triangle()),
        ("square".into(), square()),
        ("pendant-square".into(), pendant_square()),
        ("path-3".into(), path(3)),
        ("wedge-of-circles".into(), wedge_of_circles()),
        ("two-disks".into(), two_disks_along_an_edge()),
        ("bowtie".into(), bowtie()),
        ("sphere-1".into(), sphere(1)),
        ("sphere-2".into(), sphere(2)),
        ("torus".into(), torus()),
        ("projective-plane".into(), projective_plane()),
        ("self-glued-loop".into(), self_glued_loop()),
        ("half-interval".into(), half_interval()),
        ("folded-triangle".into(), folded_triangle()),
    ];
    for p in 0..=3 {
        out.push((format!("simplex-{p}"), simplex(p)));
    }
    for (name, s) in strata_charts() {
        out.push((format!("strata-{name}"), build_boundary_complex(&s).expect("corpus strata are valid").complex));
    }
    out
}

fn stratum(id: &str, subset: &[&str]) -> Stratum {
    Stratum { id: id.into(), subset: subset.iter().map(|s| s.to_string()).collect(), faces: BTreeMap::new() }
}

fn strata(components: &[&str], strata: Vec<Stratum>) -> StrataIncidence {
    StrataIncidence { components: components.iter().map(|s| s.to_string()).collect(), strata }
}

/// Three lines in general position in the plane.
pub fn three_lines() -> StrataIncidence {
    strata(
        &["L1", "L2", "L3"],
        vec![
            stratum("L1", &["L1"]),
            stratum("L2", &["L2"]),
            stratum("L3", &["L3"]),
            stratum("L1L2", &["L1", "L2"]),
            stratum("L1L3", &["L1", "L3"]),
            stratum("L2L3", &["L2", "L3"]),
        ],
    )
}

/// Strict transforms of the three lines plus the exceptional curve after
/// blowing up the point `L1 ∩ L2`.
pub fn blown_up_lines() -> StrataIncidence {
    strata(
        &["L1'", "L2'", "L3", "E"],
        vec![
            stratum("L1'", &["L1'"]),
            stratum("L2'", &["L2'"]),
            stratum("L3", &["L3"]),
            stratum("E", &["E"]),
            stratum("L1'L3", &["L1'", "L3"]),
            stratum("L2'L3", &["L2'", "L3"]),
            stratum("L1'E", &["L1'", "E"]),
            stratum("L2'E", &["L2'", "E"]),
        ],
    )
}

/// All coordinate strata of `m` coordinate hyperplanes.
pub fn coordinate_chart(names: &[&str]) -> StrataIncidence {
    let m = names.len();
    let mut st = Vec::new();
    for mask in 1u32..(1 << m) {
        let sub: Vec<&str> = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| names[i]).collect();
        st.push(stratum(&sub.concat(), &sub));
    }
    strata(names, st)
}

/// A conic and a line meeting in two points.
pub fn conic_and_line() -> StrataIncidence {
    strata(
        &["C", "L"],
        vec![stratum("C", &["C"]), stratum("L", &["L"]), stratum("p", &["C", "L"]), stratum("q", &["C", "L"])],
    )
}

/// Three components with two curves over the pair `A, B` and a triple point
/// on each, attached explicitly.
pub fn doubled_triple_point() -> StrataIncidence {
    let mut s = strata(
        &["A", "B", "C"],
        vec![
            stratum("A", &["A"]),
            stratum("B", &["B"]),
            stratum("C", &["C"]),
            stratum("AB1", &["A", "B"]),
            stratum("AB2", &["A", "B"]),
            stratum("AC", &["A", "C"]),
            stratum("BC", &["B", "C"]),
            stratum("T1", &["A", "B", "C"]),
            stratum("T2", &["A", "B", "C"]),
        ],
    );
    s.strata[7].faces.insert("C".into(), "AB1".into());
    s.strata[8].faces.insert("C".into(), "AB2".into());
    s
}

pub fn strata_charts() -> Vec<(String, StrataIncidence)> {
    vec![
        ("three-lines".into(), three_lines()),
        ("blown-up-lines".into(), blown_up_lines()),
        ("single-component".into(), strata(&["D"], vec![stratum("D", &["D"])])),
        ("triple-point".into(), coordinate_chart(&["x", "y", "z"])),
        ("conic-and-line".into(), conic_and_line()),
        ("doubled-triple-point".into(), doubled_triple_point()),
    ]
}

/// Two points `a`, `b` of an edge identified through a one-vertex relation.
pub fn loop_presentation() -> StackyInput {
    let objects = strata(&["a", "b"], vec![stratum("a", &["a"]), stratum("b", &["b"]), stratum("ab", &["a", "b"])]);
    let relations = strata(&["c"], vec![stratum("c", &["c"])]);
    let to = |t: &str| StratumMap {
        components: BTreeMap::from([("c".to_string(), t.to_string())]),
        strata: BTreeMap::from([("c".to_string(), t.to_string())]),
    };
    StackyInput { objects, relations, p1: to("a"), p2: to("b") }
}

/// `r` copies of a chart mapped back by the identity on each copy: the
/// groupoid of the chart `y^r = x_1`, whose group acts trivially on strata.
pub fn root_chart_presentation(objects: &StrataIncidence, r: usize) -> StackyInput {
    let mut components = Vec::new();
    let mut st = Vec::new();
    let mut map = StratumMap::default();
    for k in 0..r {
        for c in &objects.components {
            let name = format!("{c}~{k}");
            map.components.insert(name.clone(), c.clone());
            components.push(name);
        }
        for s in &objects.strata {
            let id = format!("{}~{k}", s.id);
            map.strata.insert(id.clone(), s.id.clone());
            st.push(Stratum {
                id,
                subset: s.subset.iter().map(|c| format!("{c}~{k}")).collect(),
                faces: s.faces.iter().map(|(c, t)| (format!("{c}~{k}"), format!("{t}~{k}"))).collect(),
            });
        }
    }
    StackyInput {
        objects: objects.clone(),
        relations: StrataIncidence { components, strata: st },
        p1: map.clone(),
        p2: map,
    }
}

/// The relation chart equal to the object chart with both maps the identity.
pub fn identity_presentation(objects: &StrataIncidence) -> StackyInput {
    let id_map = StratumMap {
        components: objects.components.iter().map(|c| (c.clone(), c.clone())).collect(),
        strata: objects.strata.iter().map(|s| (s.id.clone(), s.id.clone())).collect(),
    };
    StackyInput { objects: objects.clone(), relations: objects.clone(), p1: id_map.clone(), p2: id_map }
}

/// Annotation marking every orbit, keyed by the label of its first member.
fn annotation_from(
    c: &GeneralizedDeltaComplex,
    exceptional: &str,
    mark: impl Fn(usize, usize) -> Mark,
) -> CenterAnnotation {
    let mut marks = BTreeMap::new();
    for d in 0..c.num_levels() {
        for (o, members) in c.orbit_members(d).iter().enumerate() {
            marks.insert(c.labels(d)[members[0]].clone(), mark(d, o));
        }
    }
    CenterAnnotation { exceptional: exceptional.into(), marks }
}

/// Orbits reachable by repeated faces from `(d, o)`, including itself.
fn face_closure(c: &GeneralizedDeltaComplex, d: usize, o: usize) -> Vec<(usize, usize)> {
    let of: Vec<Vec<usize>> = (0..c.num_levels()).map(|l| c.orbits(l).0).collect();
    let members: Vec<Vec<Vec<usize>>> = (0..c.num_levels()).map(|l| c.orbit_members(l)).collect();
    let mut seen = std::collections::BTreeSet::from([(d, o)]);
    let mut stack = vec![(d, o)];
    while let Some((l, x)) = stack.pop() {
        if l == 0 {
            continue;
        }
        for &f in &c.cells(l)[members[l][x][0]].faces {
            if seen.insert((l - 1, of[l - 1][f])) {
                stack.push((l - 1, of[l - 1][f]));
            }
        }
    }
    seen.into_iter().collect()
}

/// Blow-up annotations of a complex: for every orbit `σ`, the star center
/// (contained = cofaces of `σ`, proper = the remaining faces of those) and the
/// proper center on the closure of `σ`. Only annotations that validate are
/// returned.
pub fn annotations_for(c: &GeneralizedDeltaComplex) -> Vec<(String, CenterAnnotation)> {
    let mut out = Vec::new();
    let exceptional = (0..)
        .map(|k| if k == 0 { "E".to_string() } else { format!("E{k}") })
        .find(|e| c.find(e).is_none())
        .unwrap();
    for d in 0..c.num_levels() {
        for o in 0..c.orbit_members(d).len() {
            // star center
            let star: Vec<(usize, usize)> = (0..c.num_levels())
                .flat_map(|l| (0..c.orbit_members(l).len()).map(move |x| (l, x)))
                .filter(|&(l, x)| face_closure(c, l, x).contains(&(d, o)))
                .collect();
            let closed: std::collections::BTreeSet<(usize, usize)> =
                star.iter().flat_map(|&(l, x)| face_closure(c, l, x)).collect();
            let ann = annotation_from(c, &exceptional, |l, x| {
                if star.contains(&(l, x)) {
                    Mark::Contained
                } else if closed.contains(&(l, x)) {
                    Mark::Proper
                } else {
                    Mark::Disjoint
                }
            });
            let name = c.labels(d)[c.orbit_members(d)[o][0]].clone();
            if validate_annotation(c, &ann).is_valid() {
                out.push((format!("contained star of {name}"), ann));
            }
            let closure = face_closure(c, d, o);
            let ann = annotation_from(c, &exceptional, |l, x| {
                if closure.contains(&(l, x)) {
                    Mark::Proper
                } else {
                    Mark::Disjoint
                }
            });
            if validate_annotation(c, &ann).is_valid() {
                out.push((format!("proper along {name}"), ann));
            }
        }
    }
    out
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::homology;

    #[test]
    fn corpus_complexes_are_valid() {
        for (name, c) in complexes() {
            assert!(c.validate().is_empty(), "{name}");
        }
    }

    #[test]
    fn torus_and_projective_plane_homology() {
        let t = homology(&torus());
        assert_eq!(t.betti, vec![1, 2, 1]);
        let rp2 = homology(&projective_plane());
        assert_eq!(rp2.betti, vec![1, 0]);
        assert_eq!(rp2.torsion, vec![vec![], vec![2]]);
    }

    #[test]
    fn there_are_enough_annotations() {
        let total: usize = complexes().iter().map(|(_, c)| annotations_for(c).len()).sum();
        assert!(total >= 20, "{total}");
    }
}
