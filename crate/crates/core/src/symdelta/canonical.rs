//! Canonical labeling by color refinement plus individualization with
//! backtracking.
//!
//! The complex is treated as a colored structure whose elements are all
//! simplices and whose relations are the labelled functions `d_i` and `t_i`.
//! Leaves of the search tree are discrete colorings; the canonical form is the
//! relabeling whose serialized generator tables are lexicographically least.
//! Automorphisms found along the way prune equivalent subtrees.

use sha2::{Digest, Sha256};

use super::complex::{GeneralizedDeltaComplex, SimplexId};
use super::tables::{Cell, Tables};

/// Output of [`canonical_form`].
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub complex: GeneralizedDeltaComplex,
    /// Hex digest of the canonical generator tables.
    pub hash: String,
    /// `labeling[p][i]` is the canonical index of the i-th p-simplex.
    pub labeling: Vec<Vec<usize>>,
}

/// A structure-preserving bijection, as a per-dimension assignment.
pub type Isomorphism = Vec<Vec<usize>>;

struct Structure {
    /// first global index of each level
    starts: Vec<usize>,
    level_of: Vec<usize>,
    /// per element: global indices of faces then swaps
    out: Vec<Vec<u32>>,
    /// per element: (relation tag, source) pairs pointing at it
    incoming: Vec<Vec<(u32, u32)>>,
    nfaces: Vec<usize>,
}

impl Structure {
    fn new(c: &GeneralizedDeltaComplex) -> Self {
        let mut starts = Vec::new();
        let mut acc = 0;
        for d in 0..c.num_levels() {
            starts.push(acc);
            acc += c.count(d);
        }
        let n = acc;
        let mut level_of = vec![0; n];
        let mut out = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        let mut nfaces = vec![0; n];
        for id in c.ids() {
            let g = starts[id.dim] + id.index;
            level_of[g] = id.dim;
            let cell = c.cell(id);
            nfaces[g] = cell.faces.len();
            for (i, &f) in cell.faces.iter().enumerate() {
                let h = starts[id.dim - 1] + f;
                out[g].push(h as u32);
                incoming[h].push((i as u32, g as u32));
            }
            for (i, &s) in cell.swaps.iter().enumerate() {
                let h = starts[id.dim] + s;
                out[g].push(h as u32);
                incoming[h].push((1000 + i as u32, g as u32));
            }
        }
        Self { starts, level_of, out, incoming, nfaces }
    }

    fn len(&self) -> usize {
        self.level_of.len()
    }

    /// Refines `colors` to the coarsest equitable refinement. Colors are ranks
    /// in `0..k`, and refinement never reorders existing cells.
    fn refine(&self, colors: &mut Vec<u32>) {
        let n = self.len();
        let mut ncolors = count_colors(colors);
        loop {
            let mut sigs: Vec<(Vec<u32>, usize)> = Vec::with_capacity(n);
            for x in 0..n {
                let mut sig = Vec::with_capacity(1 + self.out[x].len() + 2 * self.incoming[x].len());
                sig.push(colors[x]);
                sig.extend(self.out[x].iter().map(|&y| colors[y as usize]));
                let mut inc: Vec<(u32, u32)> =
                    self.incoming[x].iter().map(|&(tag, s)| (tag, colors[s as usize])).collect();
                inc.sort_unstable();
                sig.push(u32::MAX);
                for (tag, c) in inc {
                    sig.push(tag);
                    sig.push(c);
                }
                sigs.push((sig, x));
            }
            sigs.sort_unstable();
            let mut rank = 0u32;
            for k in 0..n {
                if k > 0 && sigs[k].0 != sigs[k - 1].0 {
                    rank += 1;
                }
                colors[sigs[k].1] = rank;
            }
            let now = if n == 0 { 0 } else { rank as usize + 1 };
            if now == ncolors {
                break;
            }
            ncolors = now;
        }
    }

    fn certificate(&self, colors: &[u32]) -> Vec<u32> {
        // colors are a permutation of 0..n here
        let n = self.len();
        let mut by_color = vec![0usize; n];
        for (x, &c) in colors.iter().enumerate() {
            by_color[c as usize] = x;
        }
        let mut cert = Vec::with_capacity(n * 4);
        cert.push(self.starts.len() as u32);
        for d in 0..self.starts.len() {
            let end = self.starts.get(d + 1).copied().unwrap_or(n);
            cert.push((end - self.starts[d]) as u32);
        }
        for &x in &by_color {
            cert.push(u32::MAX);
            cert.push(self.nfaces[x] as u32);
            cert.extend(self.out[x].iter().map(|&y| colors[y as usize]));
        }
        cert
    }
}

fn count_colors(colors: &[u32]) -> usize {
    colors.iter().max().map_or(0, |&m| m as usize + 1)
}

struct Leaf {
    colors: Vec<u32>,
    cert: Vec<u32>,
    path: Vec<usize>,
}

struct Search<'a> {
    s: &'a Structure,
    first: Option<Leaf>,
    best: Option<Leaf>,
    autos: Vec<Vec<u32>>,
}

impl Search<'_> {
    /// Returns `Some(depth)` when the caller should unwind to `depth`.
    fn dfs(&mut self, colors: Vec<u32>, path: &mut Vec<usize>) -> Option<usize> {
        let n = self.s.len();
        if count_colors(&colors) == n {
            return self.leaf(colors, path);
        }
        let cell = self.target_cell(&colors);
        let members: Vec<usize> = (0..n).filter(|&x| colors[x] == cell).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &members {
            if self.equivalent_to_explored(v, &explored, path) {
                continue;
            }
            explored.push(v);
            let mut next: Vec<u32> = colors.iter().enumerate().map(|(x, &c)| {
                2 * c + u32::from(x != v)
            }).collect();
            compress(&mut next);
            self.s.refine(&mut next);
            path.push(v);
            let jump = self.dfs(next, path);
            path.pop();
            if let Some(depth) = jump {
                if depth < path.len() {
                    return Some(depth);
                }
            }
        }
        None
    }

    fn leaf(&mut self, colors: Vec<u32>, path: &[usize]) -> Option<usize> {
        let cert = self.s.certificate(&colors);
        let leaf = Leaf { colors, cert, path: path.to_vec() };
        let Some(first) = &self.first else {
            self.best = Some(Leaf { colors: leaf.colors.clone(), cert: leaf.cert.clone(), path: leaf.path.clone() });
            self.first = Some(leaf);
            return None;
        };
        if leaf.cert == first.cert {
            self.autos.push(automorphism(&first.colors, &leaf.colors));
            let common = first.path.iter().zip(&leaf.path).take_while(|(a, b)| a == b).count();
            return Some(common);
        }
        let best = self.best.as_ref().unwrap();
        match leaf.cert.cmp(&best.cert) {
            std::cmp::Ordering::Less => self.best = Some(leaf),
            std::cmp::Ordering::Equal => {
                self.autos.push(automorphism(&best.colors, &leaf.colors));
            }
            std::cmp::Ordering::Greater => {}
        }
        None
    }

    /// Non-singleton cell of the highest level with the smallest color.
    fn target_cell(&self, colors: &[u32]) -> u32 {
        let n = self.s.len();
        let mut size = vec![0usize; n];
        for &c in colors {
            size[c as usize] += 1;
        }
        let mut best: Option<(usize, u32)> = None;
        for x in 0..n {
            let c = colors[x];
            if size[c as usize] < 2 {
                continue;
            }
            let key = (self.s.level_of[x], c);
            best = match best {
                None => Some(key),
                Some((l, bc)) if key.0 > l || (key.0 == l && c < bc) => Some(key),
                b => b,
            };
        }
        best.unwrap().1
    }

    /// Whether some stored automorphism fixing `path` pointwise maps `v` into
    /// the orbit of an explored sibling.
    fn equivalent_to_explored(&self, v: usize, explored: &[usize], path: &[usize]) -> bool {
        if explored.is_empty() {
            return false;
        }
        let gens: Vec<&Vec<u32>> = self
            .autos
            .iter()
            .filter(|g| path.iter().all(|&p| g[p] as usize == p))
            .collect();
        if gens.is_empty() {
            return false;
        }
        // orbit of v under the generated group
        let mut seen = vec![v];
        let mut i = 0;
        while i < seen.len() {
            let x = seen[i];
            for g in &gens {
                let y = g[x] as usize;
                if !seen.contains(&y) {
                    seen.push(y);
                }
            }
            i += 1;
        }
        explored.iter().any(|e| seen.contains(e))
    }
}

/// The automorphism sending each element of leaf `b` to the element of leaf
/// `a` with the same color.
fn automorphism(a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len();
    let mut by_color = vec![0u32; n];
    for (x, &c) in a.iter().enumerate() {
        by_color[c as usize] = x as u32;
    }
    (0..n).map(|x| by_color[b[x] as usize]).collect()
}

fn compress(colors: &mut [u32]) {
    let mut vals: Vec<u32> = colors.to_vec();
    vals.sort_unstable();
    vals.dedup();
    for c in colors.iter_mut() {
        *c = vals.binary_search(c).unwrap() as u32;
    }
}

/// Canonical relabeling of a complex. Isomorphic complexes produce identical
/// `complex` and `hash`.
pub fn canonical_form(c: &GeneralizedDeltaComplex) -> CanonicalForm {
    let s = Structure::new(c);
    let n = s.len();
    // seed: (dimension, orbit size)
    let mut seed: Vec<u32> = vec![0; n];
    let mut keyed: Vec<((usize, usize), usize)> = Vec::with_capacity(n);
    for d in 0..c.num_levels() {
        for orbit in c.orbit_members(d) {
            for &e in &orbit {
                keyed.push(((d, orbit.len()), s.starts[d] + e));
            }
        }
    }
    keyed.sort_unstable();
    let mut rank = 0u32;
    for k in 0..keyed.len() {
        if k > 0 && keyed[k].0 != keyed[k - 1].0 {
            rank += 1;
        }
        seed[keyed[k].1] = rank;
    }
    s.refine(&mut seed);
    let colors = if n == 0 || count_colors(&seed) == n {
        seed
    } else {
        let mut search = Search { s: &s, first: None, best: None, autos: Vec::new() };
        search.dfs(seed, &mut Vec::new());
        search.best.unwrap().colors
    };
    let cert = s.certificate(&colors);

    let labeling: Vec<Vec<usize>> = (0..c.num_levels())
        .map(|d| {
            (0..c.count(d)).map(|e| colors[s.starts[d] + e] as usize - s.starts[d]).collect()
        })
        .collect();
    let complex = relabel(c, &labeling);
    let mut hasher = Sha256::new();
    for v in &cert {
        hasher.update(v.to_le_bytes());
    }
    let digest = hasher.finalize();
    let hash = digest[..16].iter().map(|b| format!("{b:02x}")).collect();
    CanonicalForm { complex, hash, labeling }
}

/// Canonical label of the i-th p-simplex of a canonical complex.
pub fn canonical_label(dim: usize, index: usize) -> String {
    format!("s{dim}_{index}")
}

/// Applies a per-dimension permutation (old index -> new index) and assigns
/// canonical labels.
pub(crate) fn relabel(c: &GeneralizedDeltaComplex, labeling: &[Vec<usize>]) -> GeneralizedDeltaComplex {
    let mut t = Tables::empty(1);
    for d in 0..c.num_levels() {
        let n = c.count(d);
        let mut cells = vec![Cell::default(); n];
        for (e, cell) in c.cells(d).iter().enumerate() {
            cells[labeling[d][e]] = Cell {
                faces: cell.faces.iter().map(|&f| labeling[d - 1][f]).collect(),
                swaps: cell.swaps.iter().map(|&s| labeling[d][s]).collect(),
            };
        }
        t.levels.push(cells);
        t.labels.push((0..n).map(|i| canonical_label(d, i)).collect());
    }
    GeneralizedDeltaComplex::from_raw(t)
}

/// Isomorphism test through canonical forms; returns a witness `a -> b`.
pub fn is_isomorphic(a: &GeneralizedDeltaComplex, b: &GeneralizedDeltaComplex) -> Option<Isomorphism> {
    if a.num_levels() != b.num_levels()
        || (0..a.num_levels()).any(|d| a.count(d) != b.count(d))
    {
        return None;
    }
    let ca = canonical_form(a);
    let cb = canonical_form(b);
    if ca.hash != cb.hash || ca.complex != cb.complex {
        return None;
    }
    let witness = (0..a.num_levels())
        .map(|d| {
            let mut inv_b = vec![0; b.count(d)];
            for (e, &l) in cb.labeling[d].iter().enumerate() {
                inv_b[l] = e;
            }
            ca.labeling[d].iter().map(|&l| inv_b[l]).collect()
        })
        .collect();
    Some(witness)
}

/// Checks that `w` is a structure-preserving bijection `a -> b`.
pub fn is_isomorphism(a: &GeneralizedDeltaComplex, b: &GeneralizedDeltaComplex, w: &Isomorphism) -> bool {
    if w.len() != a.num_levels() || a.num_levels() != b.num_levels() {
        return false;
    }
    for d in 0..a.num_levels() {
        let mut seen = vec![false; b.count(d)];
        if w[d].len() != a.count(d) || a.count(d) != b.count(d) {
            return false;
        }
        for &x in &w[d] {
            if x >= seen.len() || std::mem::replace(&mut seen[x], true) {
                return false;
            }
        }
    }
    a.ids().all(|id| {
        let img = SimplexId::new(id.dim, w[id.dim][id.index]);
        let (ca, cb) = (a.cell(id), b.cell(img));
        ca.faces.iter().zip(&cb.faces).all(|(&f, &g)| w[id.dim - 1][f] == g)
            && ca.swaps.iter().zip(&cb.swaps).all(|(&s, &t)| w[id.dim][s] == t)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri(names: [&str; 3]) -> GeneralizedDeltaComplex {
        let [a, b, c] = names;
        GeneralizedDeltaComplex::from_simplicial(&[vec![a, b], vec![a, c], vec![b, c]])
    }

    #[test]
    fn relabeled_triangles_share_a_hash() {
        let x = canonical_form(&tri(["1", "2", "3"]));
        let y = canonical_form(&tri(["z", "a", "m"]));
        assert_eq!(x.hash, y.hash);
        assert_eq!(x.complex, y.complex);
    }

    #[test]
    fn triangle_and_square_differ() {
        let sq = GeneralizedDeltaComplex::from_simplicial(&[
            vec!["1", "2"],
            vec!["2", "3"],
            vec!["3", "4"],
            vec!["4", "1"],
        ]);
        let t = tri(["1", "2", "3"]);
        assert_ne!(canonical_form(&t).hash, canonical_form(&sq).hash);
        assert!(is_isomorphic(&t, &sq).is_none());
    }

    #[test]
    fn witness_is_an_isomorphism() {
        let a = tri(["1", "2", "3"]);
        let b = tri(["c", "b", "a"]);
        let w = is_isomorphic(&a, &b).expect("isomorphic");
        assert!(is_isomorphism(&a, &b, &w));
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let c = canonical_form(&tri(["1", "2", "3"]));
        let again = canonical_form(&c.complex);
        assert_eq!(c.complex, again.complex);
        assert_eq!(c.hash, again.hash);
    }

    #[test]
    fn many_isolated_vertices_stay_fast() {
        let facets: Vec<Vec<String>> = (0..40).map(|i| vec![format!("v{i}")]).collect();
        let c = GeneralizedDeltaComplex::from_simplicial(&facets);
        let star: Vec<Vec<String>> = (0..12).map(|i| vec!["o".to_string(), format!("l{i}")]).collect();
        let s = GeneralizedDeltaComplex::from_simplicial(&star);
        assert_eq!(canonical_form(&c).complex.count(0), 40);
        assert_eq!(canonical_form(&s).complex.count(1), 24);
    }
}
