//! Simplices in Eilenberg-Zilber normal form: a strictly decreasing word
//! of degeneracy operators applied to a nondegenerate generator.

use serde::{Deserialize, Serialize};

/// A simplex `s_{w1} s_{w2} ... s_{wk} g` with w1 > w2 > ... > wk, where
/// `g` is the nondegenerate generator `(gen_degree, gen_index)` of the
/// ambient simplicial set. The simplex degree is `gen_degree + word.len()`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Simp {
    pub word: Vec<usize>,
    pub gen_degree: usize,
    pub gen_index: usize,
}

impl Simp {
    pub fn generator(degree: usize, index: usize) -> Self {
        Simp {
            word: Vec::new(),
            gen_degree: degree,
            gen_index: index,
        }
    }

    pub fn degree(&self) -> usize {
        self.gen_degree + self.word.len()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.word.is_empty()
    }

    /// Apply a degeneracy operator `s_i` on top, renormalizing the word
    /// with `s_i s_j = s_{j+1} s_i` for i <= j.
    pub fn degeneracy(&self, i: usize) -> Simp {
        debug_assert!(i <= self.degree());
        let mut word = self.word.clone();
        let idx = i;
        let mut pos = 0;
        while pos < word.len() && idx <= word[pos] {
            word[pos] += 1;
            pos += 1;
        }
        word.insert(pos, idx);
        Simp {
            word,
            gen_degree: self.gen_degree,
            gen_index: self.gen_index,
        }
    }

    /// Word of a composite degeneracy applied on top of this simplex:
    /// `apply_word(w)` = s_{w[0]} ∘ s_{w[1]} ∘ ... (outermost first).
    pub fn apply_word(&self, w: &[usize]) -> Simp {
        let mut s = self.clone();
        for &i in w.iter().rev() {
            s = s.degeneracy(i);
        }
        s
    }
}

/// All strictly decreasing degeneracy words of length `len` valid on a
/// generator of degree `gen_degree` (so the result has degree
/// `gen_degree + len`). Enumerated in lexicographic order.
pub fn degeneracy_words(gen_degree: usize, len: usize) -> Vec<Vec<usize>> {
    // A word (w1 > ... > wk) applied innermost-last must satisfy
    // w_t <= gen_degree + (k - t) for the t-th entry (1-based from the
    // outside); equivalently the reversed word (v1 < v2 < ... < vk)
    // satisfies v_j <= gen_degree + j - 1. Enumerate ascending sequences
    // and reverse.
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn rec(gen_degree: usize, len: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            let mut w = cur.clone();
            w.reverse();
            out.push(w);
            return;
        }
        let j = cur.len(); // next ascending position (0-based)
        let max = gen_degree + j;
        for v in start..=max {
            cur.push(v);
            rec(gen_degree, len, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(gen_degree, len, 0, &mut cur, &mut out);
    out.sort();
    out
}

impl std::fmt::Display for Simp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for w in &self.word {
            write!(f, "s{w}")?;
        }
        if !self.word.is_empty() {
            write!(f, "·")?;
        }
        write!(f, "#{}:{}", self.gen_degree, self.gen_index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degeneracy_word_normalization() {
        // s0 s0 = s1 s0
        let g = Simp::generator(0, 0);
        let a = g.degeneracy(0).degeneracy(0);
        let b = g.degeneracy(0).degeneracy(1);
        assert_eq!(a, b);
        assert_eq!(a.word, vec![1, 0]);
    }

    #[test]
    fn degeneracy_words_count() {
        // On a degree-q generator there are C(n, n-q) words of length n-q
        // producing degree-n simplices.
        assert_eq!(degeneracy_words(0, 2).len(), 1); // s1s0 only
        assert_eq!(degeneracy_words(1, 1).len(), 2); // s0, s1
        assert_eq!(degeneracy_words(1, 2).len(), 3); // C(3,2)
        assert_eq!(degeneracy_words(2, 2).len(), 6); // C(4,2)
        for w in degeneracy_words(3, 3) {
            assert!(w.windows(2).all(|p| p[0] > p[1]));
        }
    }

    #[test]
    fn words_are_canonical_forms() {
        // Every way of composing degeneracies lands on a listed word.
        let words = degeneracy_words(1, 2);
        let g = Simp::generator(1, 0);
        for i in 0..=1usize {
            for j in 0..=2usize {
                let s = g.degeneracy(i).degeneracy(j);
                assert!(words.contains(&s.word), "missing {:?}", s.word);
            }
        }
    }
}
