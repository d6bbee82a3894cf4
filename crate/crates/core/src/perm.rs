//! Small helpers for permutations of `0..n` stored as image vectors.

/// Adjacent transpositions `b_1, .., b_k` such that `perm ∘ s_{b_1} ∘ .. ∘ s_{b_k} = id`.
///
/// Equivalently `perm = s_{b_k} ∘ .. ∘ s_{b_1}`, so the contravariant action `perm^*`
/// applies `t_{b_k}` first and `t_{b_1}` last.
pub(crate) fn bubble_word(perm: &[usize]) -> Vec<usize> {
    let mut arr = perm.to_vec();
    let mut word = Vec::new();
    let n = arr.len();
    for pass in 0..n {
        let mut swapped = false;
        for i in 0..n.saturating_sub(1 + pass) {
            if arr[i] > arr[i + 1] {
                arr.swap(i, i + 1);
                word.push(i);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    word
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn all_perms(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

pub(crate) fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// `a ∘ b` as image vectors: `(a ∘ b)[i] = a[b[i]]`.
pub(crate) fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

pub(crate) fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

/// Completes an injection `[q] -> [n]` to a permutation of `0..n` whose first
/// `q` entries agree with it; the unused values follow in increasing order.
pub(crate) fn complete_injection(theta: &[usize], n: usize) -> Vec<usize> {
    let mut used = vec![false; n];
    for &v in theta {
        used[v] = true;
    }
    let mut perm = theta.to_vec();
    perm.extend((0..n).filter(|&v| !used[v]));
    perm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bubble_word_recomposes() {
        for p in all_perms(4) {
            let word = bubble_word(&p);
            // perm = s_{b_k} ∘ .. ∘ s_{b_1}
            let mut acc: Vec<usize> = (0..4).collect();
            for &b in word.iter().rev() {
                let mut s: Vec<usize> = (0..4).collect();
                s.swap(b, b + 1);
                acc = compose(&acc, &s);
            }
            assert_eq!(acc, p);
        }
    }

    #[test]
    fn perm_counts() {
        assert_eq!(all_perms(0).len(), 1);
        assert_eq!(all_perms(4).len(), 24);
        assert_eq!(factorial(5), 120);
        let p = vec![2, 0, 1];
        assert_eq!(compose(&p, &inverse(&p)), vec![0, 1, 2]);
        assert_eq!(complete_injection(&[3, 1], 5), vec![3, 1, 0, 2, 4]);
    }
}
