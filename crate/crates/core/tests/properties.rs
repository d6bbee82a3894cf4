use bcx::corpus;
use bcx::homotopy::{collapse, collapse_inverse, expand, free_faces, homology};
use bcx::symdelta::{all_maps, canonical_form, is_isomorphic, is_isomorphism, Cell, ComplexMap};
use bcx::GeneralizedDeltaComplex;
use proptest::prelude::*;
use proptest::sample::Index;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn pool(max_total: usize) -> Vec<GeneralizedDeltaComplex> {
    corpus::complexes().into_iter().map(|(_, c)| c).filter(|c| c.total() <= max_total).collect()
}

/// Same complex with the simplices of each dimension reordered.
fn shuffled(c: &GeneralizedDeltaComplex, seed: u64) -> GeneralizedDeltaComplex {
    let mut rng = StdRng::seed_from_u64(seed);
    let perms: Vec<Vec<usize>> = (0..c.num_levels())
        .map(|d| {
            let mut p: Vec<usize> = (0..c.count(d)).collect();
            p.shuffle(&mut rng);
            p
        })
        .collect();
    let mut levels = Vec::new();
    let mut labels = Vec::new();
    for d in 0..c.num_levels() {
        let mut cells = vec![Cell::default(); c.count(d)];
        let mut names = vec![String::new(); c.count(d)];
        for (e, cell) in c.cells(d).iter().enumerate() {
            cells[perms[d][e]] = Cell {
                faces: cell.faces.iter().map(|&f| perms[d - 1][f]).collect(),
                swaps: cell.swaps.iter().map(|&s| perms[d][s]).collect(),
            };
            names[perms[d][e]] = format!("x{}", c.labels(d)[e]);
        }
        levels.push(cells);
        labels.push(names);
    }
    GeneralizedDeltaComplex::from_tables(levels, labels)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn isomorphism_is_an_equivalence(which: Index, s1: u64, s2: u64) {
        let all = pool(200);
        let a = which.get(&all).clone();
        let b = shuffled(&a, s1);
        let c = shuffled(&b, s2);
        prop_assert!(b.validate().is_empty());
        let ab = is_isomorphic(&a, &b).expect("a ~ b");
        prop_assert!(is_isomorphism(&a, &b, &ab));
        prop_assert!(is_isomorphic(&b, &a).is_some());
        prop_assert!(is_isomorphic(&a, &c).is_some());
        prop_assert!(is_isomorphic(&a, &a).is_some());
        prop_assert_eq!(canonical_form(&a).hash, canonical_form(&c).hash);
        prop_assert_eq!(canonical_form(&a).complex, canonical_form(&c).complex);
    }

    #[test]
    fn composition_is_functorial(x: Index, y: Index, z: Index, f: Index, g: Index) {
        let small = pool(10);
        let (x, y, z) = (x.get(&small), y.get(&small), z.get(&small));
        let fs = all_maps(x, y);
        let gs = all_maps(y, z);
        prop_assume!(!fs.is_empty() && !gs.is_empty());
        let (f, g) = (f.get(&fs), g.get(&gs));
        let gf = f.then(g).unwrap();
        for id in x.ids() {
            prop_assert_eq!(gf.apply(id), g.apply(f.apply(id)));
        }
        prop_assert!(ComplexMap::new(x.clone(), z.clone(), gf.assignment.clone()).is_ok());
        prop_assert_eq!(&ComplexMap::identity(x).then(f).unwrap(), f);
        prop_assert_eq!(&f.then(&ComplexMap::identity(y)).unwrap(), f);
    }

    #[test]
    fn collapse_then_expand_returns(which: Index, pick: Index) {
        let all = pool(200);
        let c = which.get(&all);
        let pairs = free_faces(c);
        prop_assume!(!pairs.is_empty());
        let pair = *pick.get(&pairs);
        let small = collapse(c, pair).unwrap();
        prop_assert_eq!(homology(&small), homology(c));
        let back = expand(&small, &collapse_inverse(c, pair)).unwrap();
        prop_assert_eq!(canonical_form(&back).hash, canonical_form(c).hash);
    }

    #[test]
    fn homology_ignores_ordering(which: Index, seed: u64) {
        let all = pool(200);
        let c = which.get(&all);
        prop_assert_eq!(homology(c), homology(&shuffled(c, seed)));
    }
}
