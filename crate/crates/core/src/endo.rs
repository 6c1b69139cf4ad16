//! Self-similarities: endomorphisms sending each generator into its own
//! conjugacy class while preserving all pairwise product orders.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{CoxError, Result};
use crate::matrix::IntMatrix;
use crate::racg::Order;
use crate::system::{mask_iter, CoxeterSystem, Gen, Label};
use crate::walls::{Reflection, ReflectionSubgroup};
use crate::word::GroupElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndoKind {
    /// A condition could not be decided.
    Unknown,
    /// A condition fails.
    NotSim,
    /// Both conditions hold; properness not decided (non-right-angled systems).
    Sim,
    SimProper,
    Automorphism,
}

impl EndoKind {
    pub fn is_sim(self) -> bool {
        matches!(self, EndoKind::Sim | EndoKind::SimProper | EndoKind::Automorphism)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EndoKind::Unknown => "unknown",
            EndoKind::NotSim => "not-sim",
            EndoKind::Sim => "sim",
            EndoKind::SimProper => "sim-proper",
            EndoKind::Automorphism => "automorphism",
        }
    }
}

/// An endomorphism given by the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Endo {
    pub images: Vec<GroupElement>,
    pub kind: EndoKind,
    /// Why the kind is not a sim kind, or notes on it.
    pub reasons: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum EndoClass {
    /// `inverse[s]` is a preimage of `s`.
    Automorphism { inverse: Vec<GroupElement> },
    /// `missing` is a generator outside the image subgroup.
    Proper { missing: Gen },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityMatrix {
    pub entries: Vec<Vec<usize>>,
    /// The geometrized generator matched to each `s`.
    pub geometrized: Vec<GroupElement>,
}

impl ComplexityMatrix {
    /// Entrywise `self ≥ other`.
    pub fn dominates(&self, other: &ComplexityMatrix) -> bool {
        self.entries.iter().flatten().zip(other.entries.iter().flatten()).all(|(a, b)| a >= b)
    }

    pub fn total(&self) -> usize {
        self.entries.iter().flatten().sum()
    }
}

/// A linear map of `(ℤ/2)^S`; column `s` is the image of `e_s` as a mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct F2LinearMap {
    pub columns: Vec<u64>,
    pub clique_preserving: bool,
}

impl F2LinearMap {
    pub fn apply(&self, v: u64) -> u64 {
        mask_iter(v).fold(0, |acc, i| acc ^ self.columns[i])
    }

    pub fn is_permutation(&self) -> bool {
        let all = self.columns.iter().fold(0u64, |a, c| a | c);
        self.columns.iter().all(|c| c.count_ones() == 1) && all.count_ones() as usize == self.columns.len()
    }

    pub fn is_invertible(&self) -> bool {
        gf2_rank(&self.columns) == self.columns.len()
    }
}

/// Caps the size of `F(Γ)` enumerations.
pub const F_GAMMA_CAP: usize = 1_000_000;

fn gf2_rank(vectors: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vectors {
        let mut v = v;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl CoxeterSystem {
    /// Reads `map <s> = <word>` lines; unmapped generators are fixed.
    pub fn parse_endo(&self, text: &str) -> Result<Vec<GroupElement>> {
        let mut images: Vec<Option<GroupElement>> = vec![None; self.rank()];
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| CoxError::Parse { line: i + 1, msg };
            let rest = line.strip_prefix("map").ok_or_else(|| err(format!("expected `map`, found `{line}`")))?;
            let (lhs, rhs) = rest.split_once('=').ok_or_else(|| err("missing `=`".into()))?;
            let s = self.generator(lhs.trim()).map_err(|e| err(e.to_string()))?;
            if images[s as usize].is_some() {
                return Err(err(format!("generator {} mapped twice", lhs.trim())));
            }
            images[s as usize] = Some(self.element(rhs.trim()).map_err(|e| err(e.to_string()))?);
        }
        Ok(images.into_iter().enumerate().map(|(s, x)| x.unwrap_or_else(|| self.gen(s as Gen))).collect())
    }

    pub fn format_endo(&self, images: &[GroupElement]) -> String {
        images
            .iter()
            .enumerate()
            .map(|(s, x)| format!("map {} = {}\n", self.name(s as Gen), self.format(x)))
            .collect()
    }

    /// Image of `x` under the endomorphism with the given generator images.
    pub fn apply_endo(&self, images: &[GroupElement], x: &GroupElement) -> GroupElement {
        self.product(x.letters().iter().map(|&g| &images[g as usize]))
    }

    /// Images of `f ∘ g`.
    pub fn compose(&self, f: &[GroupElement], g: &[GroupElement]) -> Vec<GroupElement> {
        g.iter().map(|x| self.apply_endo(f, x)).collect()
    }

    /// `x ∈ s^W`. Every reflection has a palindromic reduced word
    /// `w s' w⁻¹` with `s' ∼ s` along odd labels, so it is enough to try
    /// prefixes `w` of `x` of length `(ℓ(x) − 1)/2`.
    pub fn in_generator_class(&self, x: &GroupElement, s: Gen) -> bool {
        if self.is_right_angled() {
            return self.reflection_letter(x) == Some(s);
        }
        if x.len().is_multiple_of(2) {
            return false;
        }
        let ab = self.abelianization();
        let class = ab.class_of[s as usize];
        // pairs (w, w⁻¹x) with ℓ(w) + ℓ(w⁻¹x) = ℓ(x)
        let mut layer: HashSet<(GroupElement, GroupElement)> = HashSet::from([(GroupElement::identity(), x.clone())]);
        for _ in 0..x.len() / 2 {
            let mut next = HashSet::new();
            for (w, rest) in &layer {
                for t in 0..self.rank() as Gen {
                    let r = self.gen_mul(t, rest);
                    if r.len() < rest.len() {
                        next.insert((self.mul_gen(w, t), r));
                    }
                }
            }
            layer = next;
        }
        layer.iter().any(|(w, rest)| {
            let mid = self.multiply(rest, w);
            mid.len() == 1 && ab.class_of[mid.letters()[0] as usize] == class
        })
    }

    /// Whether `o(x) = m`; `None` when undecided within `cutoff`.
    fn has_order(&self, x: &GroupElement, m: Label, cutoff: Option<u64>) -> Option<bool> {
        match m {
            Label::Finite(k) => {
                let k = k as u64;
                if !self.power(x, k as i64).is_identity() {
                    return Some(false);
                }
                Some(prime_factors(k).iter().all(|p| !self.power(x, (k / p) as i64).is_identity()))
            }
            Label::Infinite => match self.element_order(x, cutoff) {
                Order::Infinite => Some(true),
                Order::Finite(_) => Some(false),
                Order::Unknown { .. } => None,
            },
        }
    }

    /// Checks both self-similarity conditions and, in right-angled systems,
    /// whether the map is onto.
    pub fn sim_check(&self, images: &[GroupElement], order_cutoff: Option<u64>) -> Result<Endo> {
        if images.len() != self.rank() {
            return Err(CoxError::Invalid(format!(
                "{} images given for rank {}",
                images.len(),
                self.rank()
            )));
        }
        let mut reasons = Vec::new();
        let mut undecided = false;
        for (s, x) in images.iter().enumerate() {
            if !self.in_generator_class(x, s as Gen) {
                reasons.push(format!("image of {} is not conjugate to it", self.name(s as Gen)));
            }
        }
        for s in 0..self.rank() {
            for t in s + 1..self.rank() {
                let xy = self.multiply(&images[s], &images[t]);
                let (a, b) = (self.name(s as Gen), self.name(t as Gen));
                match self.has_order(&xy, self.m(s, t), order_cutoff) {
                    Some(true) => {}
                    Some(false) => reasons.push(format!("order of the image of {a}{b} differs from m({a},{b})")),
                    None => {
                        undecided = true;
                        reasons.push(format!("order of the image of {a}{b} not certified infinite"));
                    }
                }
            }
        }
        let images = images.to_vec();
        let kind = if reasons.iter().any(|r| !r.contains("certified")) {
            EndoKind::NotSim
        } else if undecided {
            EndoKind::Unknown
        } else if self.is_right_angled() {
            let e = Endo { images: images.clone(), kind: EndoKind::Sim, reasons: Vec::new() };
            match self.classify_endo(&e)? {
                EndoClass::Automorphism { .. } => EndoKind::Automorphism,
                EndoClass::Proper { .. } => EndoKind::SimProper,
            }
        } else {
            EndoKind::Sim
        };
        Ok(Endo { images, kind, reasons })
    }

    pub fn identity_endo(&self) -> Endo {
        Endo { images: self.generators(), kind: EndoKind::Automorphism, reasons: Vec::new() }
    }

    fn image_reflections(&self, e: &Endo) -> Result<Vec<Reflection>> {
        if !e.kind.is_sim() {
            return Err(CoxError::Invalid(format!("endomorphism is {}, not a sim", e.kind.as_str())));
        }
        e.images.iter().map(|x| self.reflection(x)).collect()
    }

    /// Automorphism iff every generator lies in the image subgroup; an
    /// inverse is read off from the folding steps.
    pub fn classify_endo(&self, e: &Endo) -> Result<EndoClass> {
        self.require_right_angled()?;
        let refl = self.image_reflections(e)?;
        let (gens, words) = self.canonical_generators_traced(&refl, &GroupElement::identity())?;
        let u = ReflectionSubgroup { generators: gens };
        let mut inverse = Vec::with_capacity(self.rank());
        for s in 0..self.rank() as Gen {
            let Some(steps) = u.express(self, &self.gen(s)) else {
                return Ok(EndoClass::Proper { missing: s });
            };
            let word: Vec<Gen> = steps.iter().flat_map(|&i| words[i].iter().map(|&j| j as Gen)).collect();
            inverse.push(self.normalize(&word));
        }
        Ok(EndoClass::Automorphism { inverse })
    }

    /// `Δ(α)`: wall distances among the canonical generators of the image
    /// subgroup, each matched to the generator whose class it lies in.
    pub fn complexity_matrix(&self, e: &Endo) -> Result<ComplexityMatrix> {
        self.require_right_angled()?;
        let refl = self.image_reflections(e)?;
        let gens = self.canonical_generators(&refl, &GroupElement::identity())?;
        let mut matched: Vec<Option<Reflection>> = vec![None; self.rank()];
        for r in gens {
            let slot = &mut matched[r.letter as usize];
            if slot.is_some() {
                return Err(CoxError::Invalid("two geometrized generators in one class".into()));
            }
            *slot = Some(r);
        }
        let matched: Vec<Reflection> = matched
            .into_iter()
            .enumerate()
            .map(|(s, r)| {
                r.ok_or_else(|| CoxError::Invalid(format!("no geometrized generator in the class of {}", self.name(s as Gen))))
            })
            .collect::<Result<_>>()?;
        let n = self.rank();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0 } else { self.wall_distance(&matched[i], &matched[j]) }).collect())
            .collect();
        Ok(ComplexityMatrix { entries, geometrized: matched.into_iter().map(|r| r.element).collect() })
    }

    /// `π_(s,C)`: conjugates the generators in `C` by `s`.
    pub fn partial_conjugation(&self, s: Gen, c: u64) -> Result<Endo> {
        self.require_right_angled()?;
        let star = self.commute_mask(s) | 1 << s;
        let rest = crate::system::full_mask(self.rank()) & !star;
        if c & !rest != 0 {
            return Err(CoxError::Invalid("C meets N*(s)".into()));
        }
        let adjacency: Vec<u64> = (0..self.rank()).map(|v| self.commute_mask(v as Gen)).collect();
        for comp in crate::system::components_of(&adjacency, rest) {
            let mask = comp.iter().fold(0u64, |m, &v| m | 1 << v);
            if c & mask != 0 && c & mask != mask {
                return Err(CoxError::Invalid("C is not a union of components of Γ − N*(s)".into()));
            }
        }
        let sg = self.gen(s);
        let images = (0..self.rank() as Gen)
            .map(|t| if c >> t & 1 == 1 { self.conjugate(&self.gen(t), &sg) } else { self.gen(t) })
            .collect();
        Ok(Endo { images, kind: EndoKind::Automorphism, reasons: Vec::new() })
    }

    /// Masks of the cliques of the commuting graph, including the empty one.
    pub fn cliques(&self) -> Vec<u64> {
        let mut out = vec![0u64];
        for v in 0..self.rank() {
            let nbrs = self.commute_mask(v as Gen);
            let extended: Vec<u64> = out.iter().filter(|&&k| k & !nbrs == 0).map(|&k| k | 1 << v).collect();
            out.extend(extended);
        }
        out.sort_unstable();
        out
    }

    /// All invertible linear maps of `(ℤ/2)^S` sending cliques to cliques.
    pub fn enumerate_f_gamma(&self) -> Result<Vec<F2LinearMap>> {
        self.require_right_angled()?;
        if self.rank() > 6 {
            return Err(CoxError::ResourceBound(format!("F(Γ) enumeration needs rank ≤ 6, got {}", self.rank())));
        }
        let cliques = self.cliques();
        let is_clique: HashSet<u64> = cliques.iter().copied().collect();
        let candidates: Vec<u64> = cliques.iter().copied().filter(|&k| k != 0).collect();
        let mut out = Vec::new();
        let mut cols = Vec::with_capacity(self.rank());
        self.f_gamma_search(&cliques, &is_clique, &candidates, &mut cols, &mut out)?;
        Ok(out)
    }

    fn f_gamma_search(
        &self,
        cliques: &[u64],
        is_clique: &HashSet<u64>,
        candidates: &[u64],
        cols: &mut Vec<u64>,
        out: &mut Vec<F2LinearMap>,
    ) -> Result<()> {
        let v = cols.len();
        if v == self.rank() {
            if out.len() >= F_GAMMA_CAP {
                return Err(CoxError::ResourceBound(format!("F(Γ) has more than {F_GAMMA_CAP} elements")));
            }
            out.push(F2LinearMap { columns: cols.clone(), clique_preserving: true });
            return Ok(());
        }
        for &c in candidates {
            cols.push(c);
            let independent = gf2_rank(cols) == cols.len();
            let preserving = independent
                && cliques.iter().filter(|&&k| k >> v & 1 == 1 && k >> (v + 1) == 0).all(|&k| {
                    is_clique.contains(&mask_iter(k).fold(0u64, |acc, i| acc ^ cols[i]))
                });
            if preserving {
                self.f_gamma_search(cliques, is_clique, candidates, cols, out)?;
            }
            cols.pop();
        }
        Ok(())
    }

    /// The automorphism of `W_Γ` induced by an element of `F(Γ)`:
    /// `s ↦` product of the clique `f(e_s)`.
    pub fn f_gamma_endo(&self, f: &F2LinearMap) -> Vec<GroupElement> {
        f.columns
            .iter()
            .map(|&c| self.normalize(&mask_iter(c).map(|i| i as Gen).collect::<Vec<_>>()))
            .collect()
    }

    fn require_universal(&self) -> Result<()> {
        let ok = (0..self.rank()).all(|i| (0..self.rank()).all(|j| i == j || self.m(i, j).is_infinite()));
        if !ok || self.rank() < 2 {
            return Err(CoxError::Scope("needs a universal Coxeter system of rank at least 2".into()));
        }
        Ok(())
    }

    /// Coordinates of an even-length element of a universal group in the
    /// free basis `xᵢ = s₀sᵢ` of `W⁺`, as a reduced word of `(i, ±1)`.
    pub fn w_plus_word(&self, x: &GroupElement) -> Result<Vec<(usize, i8)>> {
        self.require_universal()?;
        if !x.len().is_multiple_of(2) {
            return Err(CoxError::Invalid("odd-length element is not in W⁺".into()));
        }
        let mut out: Vec<(usize, i8)> = Vec::new();
        let mut push = |i: usize, e: i8| {
            if i == 0 {
                return;
            }
            if out.last() == Some(&(i, -e)) {
                out.pop();
            } else {
                out.push((i, e));
            }
        };
        // s_a s_b = (s_a s_0)(s_0 s_b) = x_a⁻¹ x_b
        for pair in x.letters().chunks(2) {
            push(pair[0] as usize, -1);
            push(pair[1] as usize, 1);
        }
        Ok(out)
    }

    /// Inverse of [`w_plus_word`](Self::w_plus_word).
    pub fn from_w_plus_word(&self, word: &[(usize, i8)]) -> GroupElement {
        let x = |i: usize| self.normalize(&[0, i as Gen]);
        let mut acc = GroupElement::identity();
        for &(i, e) in word {
            let g = if e > 0 { x(i) } else { self.inverse(&x(i)) };
            acc = self.multiply(&acc, &g);
        }
        acc
    }

    /// Abelianized `W⁺` coordinates in `ℤⁿ`, `n = rank − 1`.
    pub fn w_plus_abelian(&self, x: &GroupElement) -> Result<Vec<i64>> {
        let mut v = vec![0i64; self.rank() - 1];
        for (i, e) in self.w_plus_word(x)? {
            v[i - 1] += e as i64;
        }
        Ok(v)
    }

    /// The matrix of `α|W⁺` after abelianization; column `i` is the image of `xᵢ`.
    pub fn w_plus_matrix(&self, images: &[GroupElement]) -> Result<IntMatrix> {
        self.require_universal()?;
        let n = self.rank() - 1;
        let mut m = IntMatrix::zeros(n, n);
        for i in 1..=n {
            let xi = self.multiply(&images[0], &images[i]);
            for (r, val) in self.w_plus_abelian(&xi)?.into_iter().enumerate() {
                m[(r, i - 1)] = val;
            }
        }
        Ok(m)
    }

    /// `α_p`: fixes `s₀ … s_{n−1}` and sends `s_n` to the alternating word
    /// `s_n s₀ s_n ⋯ s_n` of length `2p − 1`.
    pub fn alpha_p(&self, p: u64) -> Result<Vec<GroupElement>> {
        self.require_universal()?;
        if p < 3 || p.is_multiple_of(2) || prime_factors(p) != [p] {
            return Err(CoxError::Invalid(format!("{p} is not an odd prime")));
        }
        let n = (self.rank() - 1) as Gen;
        let word: Vec<Gen> = (0..2 * p - 1).map(|i| if i % 2 == 0 { n } else { 0 }).collect();
        let mut images = self.generators();
        images[n as usize] = self.normalize(&word);
        Ok(images)
    }

    pub fn alpha_p_determinant(&self, p: u64) -> Result<i128> {
        let images = self.alpha_p(p)?;
        Ok(self.w_plus_matrix(&images)?.det())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> CoxeterSystem {
        CoxeterSystem::right_angled(3, &[(0, 1), (1, 2)])
    }

    #[test]
    fn crossed_conjugates_give_a_proper_sim() {
        let u = CoxeterSystem::universal(3);
        let images = u.parse_endo("map a = bab\nmap b = aba\n").unwrap();
        let e = u.sim_check(&images, None).unwrap();
        assert!(e.kind.is_sim(), "{:?}", e.reasons);
        assert_eq!(e.kind, EndoKind::SimProper);
        assert_eq!(u.sim_check(&u.generators(), None).unwrap().kind, EndoKind::Automorphism);
    }

    #[test]
    fn order_seven_triangle() {
        let t = CoxeterSystem::uniform(3, 7);
        let images = vec![t.element("a").unwrap(), t.element("b").unwrap(), t.element("aba").unwrap()];
        let e = t.sim_check(&images, None).unwrap();
        assert_eq!(e.kind, EndoKind::Sim, "{:?}", e.reasons);
        // the image lies in the dihedral subgroup ⟨a, b⟩ of order 14
        let sub = t.restrict(&[0, 1]);
        assert_eq!(crate::Ball::new(&sub, 20).unwrap().len(), 14);
        assert!(images.iter().all(|x| x.support_mask() & 0b100 == 0));
    }

    #[test]
    fn non_sims_are_rejected() {
        let u = CoxeterSystem::universal(2);
        let e = u.sim_check(&[u.element("a").unwrap(), u.element("a").unwrap()], None).unwrap();
        assert_eq!(e.kind, EndoKind::NotSim);
        let e = u.sim_check(&[u.element("ab").unwrap(), u.element("b").unwrap()], None).unwrap();
        assert_eq!(e.kind, EndoKind::NotSim);
    }

    #[test]
    fn generator_classes_in_general_systems() {
        let a2 = CoxeterSystem::uniform(3, 3);
        assert!(a2.in_generator_class(&a2.element("b").unwrap(), 0));
        assert!(a2.in_generator_class(&a2.element("aba").unwrap(), 2));
        assert!(!a2.in_generator_class(&a2.element("ab").unwrap(), 0));
        let b2 = CoxeterSystem::uniform(2, 4);
        assert!(!b2.in_generator_class(&b2.element("b").unwrap(), 0));
        assert!(b2.in_generator_class(&b2.element("bab").unwrap(), 0));
    }

    #[test]
    fn partial_conjugations() {
        let p = path3();
        let pi = p.partial_conjugation(0, 0b100).unwrap();
        assert_eq!(p.format(&pi.images[2]), "aca");
        assert!(p.partial_conjugation(0, 0b010).is_err());
        let sq = p.compose(&pi.images, &pi.images);
        assert_eq!(sq, p.generators());
        assert!(matches!(p.classify_endo(&pi).unwrap(), EndoClass::Automorphism { .. }));
    }

    #[test]
    fn automorphism_inverses() {
        let p = path3();
        let pi = p.partial_conjugation(0, 0b100).unwrap();
        let EndoClass::Automorphism { inverse } = p.classify_endo(&pi).unwrap() else { panic!() };
        assert_eq!(p.compose(&pi.images, &inverse), p.generators());
        assert_eq!(p.compose(&inverse, &pi.images), p.generators());
    }

    #[test]
    fn f_gamma_small_graphs() {
        let d = CoxeterSystem::universal(2);
        let f = d.enumerate_f_gamma().unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(F2LinearMap::is_permutation));
        let p = path3();
        let f = p.enumerate_f_gamma().unwrap();
        assert!(f.iter().any(|m| !m.is_permutation()));
        assert!(f.iter().any(|m| m.columns == vec![1, 2, 4]));
    }

    #[test]
    fn alpha_p_determinants() {
        for n in 2..=4 {
            let u = CoxeterSystem::universal(n);
            for p in [3, 5, 7] {
                assert_eq!(u.alpha_p_determinant(p).unwrap(), p as i128);
            }
            assert_eq!(u.w_plus_matrix(&u.generators()).unwrap().det(), 1);
        }
        let u = CoxeterSystem::universal(3);
        assert!(u.alpha_p(4).is_err());
        assert!(u.alpha_p(9).is_err());
        let e = u.sim_check(&u.alpha_p(3).unwrap(), None).unwrap();
        assert_eq!(e.kind, EndoKind::SimProper);
    }

    #[test]
    fn identity_complexity_is_zero() {
        let p = path3();
        let d = p.complexity_matrix(&p.identity_endo()).unwrap();
        assert_eq!(d.total(), 0);
    }
}
