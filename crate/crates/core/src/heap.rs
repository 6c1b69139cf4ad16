//! Normal forms in graph products of cyclic groups of order 2 or ∞.
//!
//! A word is kept as a sequence of syllables `(vertex, exponent)`. Pushing a
//! syllable scans backwards over syllables that commute with it and either
//! merges with a syllable on the same vertex or is appended. The canonical
//! representative is the lexicographically least linear extension of the
//! resulting heap.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexKind {
    /// Generator of order 2: exponents live in ℤ/2.
    Involution,
    /// Generator of infinite order.
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syllable {
    pub vertex: u8,
    pub exp: i64,
}

impl Syllable {
    pub fn new(vertex: u8, exp: i64) -> Self {
        Self { vertex, exp }
    }
}

/// A graph product given by commutation masks and vertex kinds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphProduct {
    commute: Vec<u64>,
    kinds: Vec<VertexKind>,
}

impl GraphProduct {
    pub fn new(commute: Vec<u64>, kinds: Vec<VertexKind>) -> Self {
        assert_eq!(commute.len(), kinds.len());
        assert!(kinds.len() <= 64);
        Self { commute, kinds }
    }

    pub fn rank(&self) -> usize {
        self.kinds.len()
    }

    pub fn kind(&self, v: u8) -> VertexKind {
        self.kinds[v as usize]
    }

    #[inline]
    pub fn commutes(&self, a: u8, b: u8) -> bool {
        self.commute[a as usize] >> b & 1 == 1
    }

    fn reduce_exp(&self, v: u8, e: i64) -> i64 {
        match self.kinds[v as usize] {
            VertexKind::Involution => e.rem_euclid(2),
            VertexKind::Free => e,
        }
    }

    /// Multiplies a reduced syllable word on the right by one syllable,
    /// keeping it reduced (not necessarily canonical).
    pub fn push(&self, word: &mut Vec<Syllable>, s: Syllable) {
        let exp = self.reduce_exp(s.vertex, s.exp);
        if exp == 0 {
            return;
        }
        for i in (0..word.len()).rev() {
            let v = word[i].vertex;
            if v == s.vertex {
                let merged = self.reduce_exp(v, word[i].exp + exp);
                if merged == 0 {
                    word.remove(i);
                } else {
                    word[i].exp = merged;
                }
                return;
            }
            if !self.commutes(v, s.vertex) {
                break;
            }
        }
        word.push(Syllable::new(s.vertex, exp));
    }

    /// Least linear extension of the heap of a reduced word.
    pub fn canonical(&self, word: &[Syllable]) -> Vec<Syllable> {
        let n = word.len();
        if n <= 1 {
            return word.to_vec();
        }
        // pending[j]: earlier syllables that must still be placed before j
        let mut pending: Vec<u32> = vec![0; n];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for j in 0..n {
            for i in 0..j {
                let (a, b) = (word[i].vertex, word[j].vertex);
                if a == b || !self.commutes(a, b) {
                    succ[i].push(j);
                    pending[j] += 1;
                }
            }
        }
        let mut ready: Vec<usize> = (0..n).filter(|&i| pending[i] == 0).collect();
        let mut out = Vec::with_capacity(n);
        while !ready.is_empty() {
            let (pos, _) = ready
                .iter()
                .enumerate()
                .min_by_key(|(_, &i)| (word[i].vertex, word[i].exp, i))
                .expect("nonempty");
            let i = ready.swap_remove(pos);
            out.push(word[i]);
            for &j in &succ[i] {
                pending[j] -= 1;
                if pending[j] == 0 {
                    ready.push(j);
                }
            }
        }
        out
    }

    pub fn normalize(&self, word: &[Syllable]) -> Vec<Syllable> {
        let mut acc = Vec::with_capacity(word.len());
        for &s in word {
            self.push(&mut acc, s);
        }
        self.canonical(&acc)
    }

    pub fn multiply(&self, x: &[Syllable], y: &[Syllable]) -> Vec<Syllable> {
        let mut acc = x.to_vec();
        for &s in y {
            self.push(&mut acc, s);
        }
        self.canonical(&acc)
    }

    pub fn inverse(&self, x: &[Syllable]) -> Vec<Syllable> {
        let inv: Vec<Syllable> = x
            .iter()
            .rev()
            .map(|s| Syllable::new(s.vertex, self.reduce_exp(s.vertex, -s.exp)))
            .collect();
        self.canonical(&inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn racg(n: usize, edges: &[(u8, u8)]) -> GraphProduct {
        let mut commute = vec![0u64; n];
        for &(a, b) in edges {
            commute[a as usize] |= 1 << b;
            commute[b as usize] |= 1 << a;
        }
        GraphProduct::new(commute, vec![VertexKind::Involution; n])
    }

    fn word(letters: &[u8]) -> Vec<Syllable> {
        letters.iter().map(|&v| Syllable::new(v, 1)).collect()
    }

    #[test]
    fn commutation_sorts() {
        let g = racg(2, &[(0, 1)]);
        assert_eq!(g.normalize(&word(&[1, 0])), word(&[0, 1]));
        assert_eq!(g.normalize(&word(&[0, 1, 0])), word(&[1]));
    }

    #[test]
    fn cancellation_through_commuting_letters() {
        // path 0-1-2: 0 and 2 do not commute
        let g = racg(3, &[(0, 1), (1, 2)]);
        assert_eq!(g.normalize(&word(&[0, 2, 1, 0])), word(&[0, 1, 2, 0]));
        assert_eq!(g.normalize(&word(&[0, 1, 0, 2])), word(&[1, 2]));
    }

    #[test]
    fn free_vertices_add_exponents() {
        let g = GraphProduct::new(vec![0b10, 0b01], vec![VertexKind::Free; 2]);
        let w = g.normalize(&[Syllable::new(1, 2), Syllable::new(0, 1), Syllable::new(1, -2)]);
        assert_eq!(w, vec![Syllable::new(0, 1)]);
        let x = vec![Syllable::new(0, 3)];
        assert_eq!(g.multiply(&x, &g.inverse(&x)), vec![]);
    }
}
