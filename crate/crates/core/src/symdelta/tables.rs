//! Generator tables shared by generalized Δ-complexes and smooth generalized
//! cone complexes.
//!
//! Both are presheaves on finite sets with injections. An element at level `l`
//! has `arity = l + offset` slots; it carries one elementary face `d_i` per slot
//! (when `l >= 1`) and one adjacent transposition `t_i` per pair of neighbouring
//! slots. Δ-complexes use `offset = 1` (a p-simplex has p+1 vertices), cone
//! complexes use `offset = 0` (an m-dimensional orthant has m coordinates).

use std::fmt;

use crate::perm;
use crate::unionfind::UnionFind;

/// Generator data of one element: elementary faces `d_0..` and adjacent
/// transpositions `t_0..`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub faces: Vec<usize>,
    pub swaps: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Tables {
    pub levels: Vec<Vec<Cell>>,
    pub labels: Vec<Vec<String>>,
    pub offset: usize,
}

/// Which presentation relation a violation refers to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// Wrong number of faces or transpositions.
    Arity,
    /// A generator points outside the simplex table.
    Range,
    /// `d_i d_j = d_{j-1} d_i` for `i < j`.
    FaceFace { i: usize, j: usize },
    /// `t_i t_i = id`.
    Involution { i: usize },
    /// `t_i t_j = t_j t_i` for `|i - j| >= 2`.
    Commute { i: usize, j: usize },
    /// `t_i t_{i+1} t_i = t_{i+1} t_i t_{i+1}`.
    Braid { i: usize },
    /// Compatibility of `d_j` with `t_i`.
    FaceSwap { face: usize, swap: usize },
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Arity => write!(f, "arity"),
            Relation::Range => write!(f, "range"),
            Relation::FaceFace { i, j } => write!(f, "d_{i} d_{j} = d_{} d_{i}", j - 1),
            Relation::Involution { i } => write!(f, "t_{i} t_{i} = id"),
            Relation::Commute { i, j } => write!(f, "t_{i} t_{j} = t_{j} t_{i}"),
            Relation::Braid { i } => {
                write!(f, "t_{i} t_{} t_{i} = t_{} t_{i} t_{}", i + 1, i + 1, i + 1)
            }
            Relation::FaceSwap { face, swap } => {
                let (j, i) = (*face, *swap);
                if j == i {
                    write!(f, "d_{j} t_{i} = d_{}", i + 1)
                } else if j == i + 1 {
                    write!(f, "d_{j} t_{i} = d_{i}")
                } else if j < i {
                    write!(f, "d_{j} t_{i} = t_{} d_{j}", i - 1)
                } else {
                    write!(f, "d_{j} t_{i} = t_{i} d_{j}")
                }
            }
        }
    }
}

/// One violated relation instance, located at `(level, index)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub level: usize,
    pub index: usize,
    pub label: String,
    pub relation: Relation,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {}, #{}): {}", self.label, self.level, self.index, self.relation)
    }
}

impl Tables {
    pub fn empty(offset: usize) -> Self {
        Self { levels: Vec::new(), labels: Vec::new(), offset }
    }

    pub fn arity(&self, level: usize) -> usize {
        level + self.offset
    }

    pub fn len(&self, level: usize) -> usize {
        self.levels.get(level).map_or(0, Vec::len)
    }

    pub fn total(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    #[inline]
    pub fn face(&self, level: usize, e: usize, i: usize) -> usize {
        self.levels[level][e].faces[i]
    }

    #[inline]
    pub fn swap(&self, level: usize, e: usize, i: usize) -> usize {
        self.levels[level][e].swaps[i]
    }

    /// Drops trailing empty levels.
    pub fn trim(&mut self) {
        while self.levels.last().is_some_and(Vec::is_empty) {
            self.levels.pop();
            self.labels.pop();
        }
    }

    /// Contravariant action of a permutation of the slots: returns `perm^* e`.
    pub fn act(&self, level: usize, e: usize, perm_: &[usize]) -> usize {
        let word = perm::bubble_word(perm_);
        word.iter().rev().fold(e, |x, &i| self.swap(level, x, i))
    }

    /// Pull back `e` along the injection `theta: [q] -> [arity]` given by its
    /// image vector. Returns the level and index of `theta^* e`.
    pub fn eval(&self, level: usize, e: usize, theta: &[usize]) -> (usize, usize) {
        let n = self.arity(level);
        let full = perm::complete_injection(theta, n);
        let mut x = self.act(level, e, &full);
        let mut lvl = level;
        for _ in theta.len()..n {
            let last = self.arity(lvl) - 1;
            x = self.face(lvl, x, last);
            lvl -= 1;
        }
        (lvl, x)
    }

    /// Orbits of the symmetric-group action on one level.
    pub fn orbits(&self, level: usize) -> (Vec<usize>, usize) {
        let n = self.len(level);
        let mut uf = UnionFind::new(n);
        for (e, cell) in self.levels[level].iter().enumerate() {
            for &s in &cell.swaps {
                uf.union(e, s);
            }
        }
        uf.classes()
    }

    /// Orbit members grouped by orbit index.
    pub fn orbit_members(&self, level: usize) -> Vec<Vec<usize>> {
        let (ids, count) = self.orbits(level);
        let mut out = vec![Vec::new(); count];
        for (e, o) in ids.into_iter().enumerate() {
            out[o].push(e);
        }
        out
    }

    /// Every violated presentation relation. When any generator has the wrong
    /// arity or points out of range only those problems are reported.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (level, cells) in self.levels.iter().enumerate() {
            let a = self.arity(level);
            let want_faces = if level >= 1 { a } else { 0 };
            let want_swaps = a.saturating_sub(1);
            let below = if level >= 1 { self.len(level - 1) } else { 0 };
            let here = cells.len();
            for (e, cell) in cells.iter().enumerate() {
                if cell.faces.len() != want_faces || cell.swaps.len() != want_swaps {
                    out.push(self.violation(level, e, Relation::Arity));
                } else if cell.faces.iter().any(|&f| f >= below)
                    || cell.swaps.iter().any(|&s| s >= here)
                {
                    out.push(self.violation(level, e, Relation::Range));
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for level in 0..self.levels.len() {
            let a = self.arity(level);
            for e in 0..self.len(level) {
                // transposition relations
                {
                    for i in 0..a.saturating_sub(1) {
                        let ti = self.swap(level, e, i);
                        if self.swap(level, ti, i) != e {
                            out.push(self.violation(level, e, Relation::Involution { i }));
                        }
                        for j in i + 2..a.saturating_sub(1) {
                            let ij = self.swap_word(level, e, &[i, j]);
                            let ji = self.swap_word(level, e, &[j, i]);
                            if ij != ji {
                                out.push(self.violation(level, e, Relation::Commute { i, j }));
                            }
                        }
                        if i + 2 < a {
                            let l = self.swap_word(level, e, &[i, i + 1, i]);
                            let r = self.swap_word(level, e, &[i + 1, i, i + 1]);
                            if l != r {
                                out.push(self.violation(level, e, Relation::Braid { i }));
                            }
                        }
                    }
                }
                if level == 0 {
                    continue;
                }
                let faces = &self.levels[level][e].faces;
                // face-face relations
                if level >= 2 {
                    for j in 0..a {
                        for i in 0..j {
                            let l = self.face(level - 1, faces[j], i);
                            let r = self.face(level - 1, faces[i], j - 1);
                            if l != r {
                                out.push(self.violation(level, e, Relation::FaceFace { i, j }));
                            }
                        }
                    }
                }
                // face-transposition compatibility
                {
                    for i in 0..a.saturating_sub(1) {
                        let ti = self.swap(level, e, i);
                        for j in 0..a {
                            let lhs = self.face(level, ti, j);
                            let rhs = if j == i {
                                faces[i + 1]
                            } else if j == i + 1 {
                                faces[i]
                            } else if j < i {
                                self.swap(level - 1, faces[j], i - 1)
                            } else {
                                self.swap(level - 1, faces[j], i)
                            };
                            if lhs != rhs {
                                out.push(self.violation(
                                    level,
                                    e,
                                    Relation::FaceSwap { face: j, swap: i },
                                ));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn swap_word(&self, level: usize, e: usize, word: &[usize]) -> usize {
        // rightmost generator acts first
        word.iter().rev().fold(e, |x, &i| self.swap(level, x, i))
    }

    fn violation(&self, level: usize, index: usize, relation: Relation) -> Violation {
        let label = self
            .labels
            .get(level)
            .and_then(|l| l.get(index))
            .cloned()
            .unwrap_or_default();
        Violation { level, index, label, relation }
    }

    /// Whether the symmetric group acts freely on every level.
    pub fn is_free(&self) -> bool {
        (0..self.levels.len()).all(|level| {
            let full = perm::factorial(self.arity(level));
            self.orbit_members(level).iter().all(|o| o.len() == full)
        })
    }

    /// Vertex indices (level `1 - offset`) of an element, slot by slot.
    pub fn vertices(&self, level: usize, e: usize) -> Vec<usize> {
        let a = self.arity(level);
        (0..a)
            .map(|j| {
                let (_, v) = self.eval(level, e, &[j]);
                v
            })
            .collect()
    }
}
