//! Group elements as canonical words, parsing and printing of words, and the
//! basic group operations.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{CoxError, Result};
use crate::heap::Syllable;
use crate::system::{CoxeterSystem, Gen};
use crate::tits;

/// An element of a Coxeter group, stored as its canonical word: the
/// shortlex-least reduced word (generator order = file order).
///
/// Elements do not carry their system; every operation takes the system
/// explicitly and canonical words are only produced through it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    letters: Vec<Gen>,
}

impl GroupElement {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Wraps a word that is already canonical.
    pub(crate) fn from_canonical(letters: Vec<Gen>) -> Self {
        Self { letters }
    }

    pub fn letters(&self) -> &[Gen] {
        &self.letters
    }

    /// Word length `ℓ_S`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Generators occurring in the canonical word, as a bitmask.
    pub fn support_mask(&self) -> u64 {
        self.letters.iter().fold(0u64, |m, &g| m | 1 << g)
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl CoxeterSystem {
    /// Reads a word: whitespace-separated generator names, or a run of
    /// single-character names written together. `e` and `1` (when not
    /// generators) and the empty string denote the identity.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Gen>> {
        let text = text.trim();
        if text.is_empty() || (matches!(text, "e" | "1") && self.generator(text).is_err()) {
            return Ok(Vec::new());
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let mut out = Vec::new();
        for tok in tokens {
            if let Ok(g) = self.generator(tok) {
                out.push(g);
                continue;
            }
            if tok.contains('^') {
                return Err(CoxError::Invalid(format!(
                    "exponents are not allowed in Coxeter words (`{tok}`)"
                )));
            }
            for ch in tok.chars() {
                let mut buf = [0u8; 4];
                out.push(self.generator(ch.encode_utf8(&mut buf)).map_err(|_| CoxError::UnknownLetter(tok.to_owned()))?);
            }
        }
        Ok(out)
    }

    /// Prints a word; names are concatenated when all of them are single
    /// characters and space-separated otherwise. The identity prints as `e`,
    /// or `1` if some generator is called `e`.
    pub fn format_word(&self, word: &[Gen]) -> String {
        if word.is_empty() {
            return self.identity_name().into();
        }
        let compact = self.names().iter().all(|n| n.chars().count() == 1);
        let parts: Vec<&str> = word.iter().map(|&g| self.name(g)).collect();
        parts.join(if compact { "" } else { " " })
    }

    pub fn identity_name(&self) -> &'static str {
        if self.generator("e").is_ok() {
            "1"
        } else {
            "e"
        }
    }

    pub fn format(&self, x: &GroupElement) -> String {
        self.format_word(x.letters())
    }

    fn check_letters(&self, word: &[Gen]) -> Result<()> {
        match word.iter().find(|&&g| g as usize >= self.rank()) {
            Some(&g) => Err(CoxError::UnknownLetter(format!("#{g}"))),
            None => Ok(()),
        }
    }

    /// Canonical form of a word. Right-angled systems use heap normal forms;
    /// other systems go through the braid-orbit search without a budget.
    pub fn normalize(&self, word: &[Gen]) -> GroupElement {
        self.check_letters(word).expect("letters belong to the system");
        match self.heap() {
            Some(heap) => {
                let syl: Vec<Syllable> = word.iter().map(|&g| Syllable::new(g, 1)).collect();
                GroupElement::from_canonical(heap.normalize(&syl).iter().map(|s| s.vertex).collect())
            }
            None => GroupElement::from_canonical(
                tits::reduce(self, word, usize::MAX).expect("unbounded orbit search"),
            ),
        }
    }

    /// Canonical form with an orbit budget for non-right-angled systems.
    pub fn normalize_bounded(&self, word: &[Gen], budget: usize) -> Result<GroupElement> {
        self.check_letters(word)?;
        if self.heap().is_some() {
            return Ok(self.normalize(word));
        }
        tits::reduce(self, word, budget).map(GroupElement::from_canonical)
    }

    pub fn element(&self, text: &str) -> Result<GroupElement> {
        let word = self.parse_word(text)?;
        Ok(self.normalize(&word))
    }

    pub fn gen(&self, g: Gen) -> GroupElement {
        GroupElement::from_canonical(vec![g])
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.rank() as Gen).map(|g| self.gen(g)).collect()
    }

    pub fn multiply(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        match self.heap() {
            Some(heap) => {
                let mut acc: Vec<Syllable> = x.letters.iter().map(|&g| Syllable::new(g, 1)).collect();
                for &g in &y.letters {
                    heap.push(&mut acc, Syllable::new(g, 1));
                }
                GroupElement::from_canonical(heap.canonical(&acc).iter().map(|s| s.vertex).collect())
            }
            None => {
                let mut w = x.letters.clone();
                w.extend_from_slice(&y.letters);
                self.normalize(&w)
            }
        }
    }

    /// `x · s` for a single generator.
    pub fn mul_gen(&self, x: &GroupElement, s: Gen) -> GroupElement {
        self.multiply(x, &self.gen(s))
    }

    /// `s · x` for a single generator.
    pub fn gen_mul(&self, s: Gen, x: &GroupElement) -> GroupElement {
        self.multiply(&self.gen(s), x)
    }

    pub fn product<'a, I>(&self, factors: I) -> GroupElement
    where
        I: IntoIterator<Item = &'a GroupElement>,
    {
        factors
            .into_iter()
            .fold(GroupElement::identity(), |acc, f| self.multiply(&acc, f))
    }

    pub fn inverse(&self, x: &GroupElement) -> GroupElement {
        let rev: Vec<Gen> = x.letters.iter().rev().copied().collect();
        self.normalize(&rev)
    }

    /// `y · x · y⁻¹`.
    pub fn conjugate(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.product([y, x, &self.inverse(y)])
    }

    /// `x · y · x⁻¹ · y⁻¹`.
    pub fn commutator(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.product([x, y, &self.inverse(x), &self.inverse(y)])
    }

    pub fn commute(&self, x: &GroupElement, y: &GroupElement) -> bool {
        self.multiply(x, y) == self.multiply(y, x)
    }

    /// `x^k` for any integer `k`.
    pub fn power(&self, x: &GroupElement, k: i64) -> GroupElement {
        let base = if k < 0 { self.inverse(x) } else { x.clone() };
        let mut result = GroupElement::identity();
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = self.multiply(&result, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.multiply(&sq, &sq);
            }
        }
        result
    }

    /// Exact equality of two words in any system (see [`tits::equals_general`]).
    pub fn equals_general(&self, w1: &[Gen], w2: &[Gen], budget: usize) -> Result<bool> {
        self.check_letters(w1)?;
        self.check_letters(w2)?;
        tits::equals_general(self, w1, w2, budget)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_examples() {
        let sys = CoxeterSystem::parse("generators a b\nm a b 2").unwrap();
        assert_eq!(sys.format(&sys.element("ba").unwrap()), "ab");
        assert_eq!(sys.format(&sys.element("b a").unwrap()), "ab");
        assert_eq!(sys.format(&sys.element("aba").unwrap()), "b");
        assert!(sys.element("aa").unwrap().is_identity());
    }

    #[test]
    fn multiplication_examples() {
        let d = CoxeterSystem::universal(2);
        let a = d.element("a").unwrap();
        let b = d.element("b").unwrap();
        assert!(d.multiply(&a, &a).is_identity());
        let ab = d.element("ab").unwrap();
        let abab = d.multiply(&ab, &ab);
        assert_eq!(d.format(&abab), "abab");
        assert_eq!(abab.len(), 4);
        assert_eq!(d.format(&d.conjugate(&a, &b)), "bab");
        assert_eq!(d.format(&d.power(&ab, -2)), "baba");
    }

    #[test]
    fn word_syntax() {
        let sys = CoxeterSystem::parse("generators s1 s2 s3\nm s1 s2 3").unwrap();
        assert_eq!(sys.parse_word("s1 s2 s1").unwrap(), vec![0, 1, 0]);
        assert_eq!(sys.format(&sys.element("s2 s1 s2").unwrap()), "s1 s2 s1");
        assert!(matches!(sys.parse_word("s4"), Err(CoxError::UnknownLetter(_))));
        assert!(sys.parse_word("s1^-1").is_err());
        assert_eq!(sys.parse_word("e").unwrap(), Vec::<Gen>::new());
    }

    #[test]
    fn shortlex_order() {
        let d = CoxeterSystem::universal(2);
        let mut v = [d.element("ba").unwrap(), d.element("b").unwrap(), d.element("ab").unwrap()];
        v.sort();
        let printed: Vec<String> = v.iter().map(|x| d.format(x)).collect();
        assert_eq!(printed, ["b", "ab", "ba"]);
    }

    #[test]
    fn general_system_normal_forms() {
        let a2 = CoxeterSystem::uniform(2, 3);
        assert_eq!(a2.format(&a2.element("bab").unwrap()), "aba");
        assert!(a2.power(&a2.element("ab").unwrap(), 3).is_identity());
        assert!(a2.equals_general(&[0, 1, 0], &[1, 0, 1], 100).unwrap());
        assert!(!a2.equals_general(&[0, 1], &[1, 0], 100).unwrap());
    }
}
