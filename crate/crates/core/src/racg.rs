//! Word combinatorics: supports, links, cyclic reduction, roots, orders,
//! reflections and centralizers.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::system::{components_of, mask_iter, CoxeterSystem, Gen};
use crate::word::GroupElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    Finite(u64),
    Infinite,
    /// No finite order found up to the cutoff.
    Unknown { cutoff: u64 },
}

impl Order {
    pub fn is_finite(self) -> bool {
        matches!(self, Order::Finite(_))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => f.write_str("inf"),
            Order::Unknown { cutoff } => write!(f, "unknown(>{cutoff})"),
        }
    }
}

/// One Δ-connected piece of a cyclically reduced element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootPart {
    pub support: u64,
    pub root: GroupElement,
    pub exponent: u64,
    pub infinite: bool,
}

/// `x = h · rootⁿ · h⁻¹` with `core = rootⁿ` cyclically reduced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicDecomposition {
    pub conjugator: GroupElement,
    pub core: GroupElement,
    pub root: GroupElement,
    pub exponent: u64,
    pub parts: Vec<RootPart>,
}

/// `C(x) = h (⟨√g₁⟩ × … × ⟨√g_k⟩ × ⟨lk(g)⟩) h⁻¹` for the Δ-pieces `gᵢ` of the core `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Centralizer {
    pub conjugator: GroupElement,
    pub parts: Vec<RootPart>,
    pub link: u64,
}

impl CoxeterSystem {
    /// Support and link of a (right-angled) element as generator masks.
    /// The link of the identity is all of `S`.
    pub fn support_link(&self, x: &GroupElement) -> (u64, u64) {
        let sp = x.support_mask();
        let mut lk = crate::system::full_mask(self.rank()) & !sp;
        for s in mask_iter(sp) {
            lk &= self.commute_mask(s as Gen);
        }
        (sp, lk)
    }

    pub fn mask_names(&self, mask: u64) -> Vec<String> {
        mask_iter(mask).map(|i| self.names()[i].clone()).collect()
    }

    /// Conjugates away letters until the length is minimal in the
    /// conjugacy class; returns `(h, core)` with `x = h · core · h⁻¹`.
    pub fn cyclically_reduce(&self, x: &GroupElement) -> (GroupElement, GroupElement) {
        let mut h = GroupElement::identity();
        let mut core = x.clone();
        'outer: loop {
            for s in 0..self.rank() as Gen {
                let sx = self.gen_mul(s, &core);
                if sx.len() > core.len() {
                    continue;
                }
                let sxs = self.mul_gen(&sx, s);
                if sxs.len() + 2 == core.len() {
                    core = sxs;
                    h = self.mul_gen(&h, s);
                    continue 'outer;
                }
            }
            return (h, core);
        }
    }

    /// Order of an element. Right-angled systems are decided exactly (the
    /// core is a clique ⇔ order 2); other systems use powers up to `cutoff`.
    pub fn element_order(&self, x: &GroupElement, cutoff: Option<u64>) -> Order {
        if x.is_identity() {
            return Order::Finite(1);
        }
        if self.is_right_angled() {
            let (_, core) = self.cyclically_reduce(x);
            let sp = core.support_mask();
            let clique = mask_iter(sp).all(|s| sp & !(1 << s) & !self.commute_mask(s as Gen) == 0);
            return if clique { Order::Finite(2) } else { Order::Infinite };
        }
        let cutoff = cutoff.unwrap_or_else(|| self.default_order_cutoff());
        let mut p = x.clone();
        for k in 1..=cutoff {
            if p.is_identity() {
                return Order::Finite(k);
            }
            p = self.multiply(&p, x);
        }
        Order::Unknown { cutoff }
    }

    pub fn default_order_cutoff(&self) -> u64 {
        let mut max = 2u64;
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                if let Some(k) = self.m(i, j).finite() {
                    max = max.max(k as u64);
                }
            }
        }
        2 * max
    }

    /// Splits a cyclically reduced element along the Δ-components of its
    /// support and extracts the root of each piece.
    fn root_parts(&self, core: &GroupElement) -> Vec<RootPart> {
        let diagram = self.diagram();
        components_of(&diagram.adjacency, core.support_mask())
            .into_iter()
            .map(|comp| {
                let mask = comp.iter().fold(0u64, |m, &g| m | 1 << g);
                let letters: Vec<Gen> = core.letters().iter().copied().filter(|&g| mask >> g & 1 == 1).collect();
                let piece = GroupElement::from_canonical(letters);
                if comp.len() == 1 {
                    RootPart { support: mask, root: piece, exponent: 1, infinite: false }
                } else {
                    let (root, exponent) = self.max_root(&piece);
                    RootPart { support: mask, root, exponent, infinite: true }
                }
            })
            .collect()
    }

    /// Largest `n` with `g = rⁿ` and `ℓ(g) = n ℓ(r)`; `r` is then a prefix of
    /// the heap of `g`, so candidates are its order ideals.
    fn max_root(&self, g: &GroupElement) -> (GroupElement, u64) {
        let w = g.letters();
        let len = w.len();
        if len > 64 {
            return (g.clone(), 1);
        }
        let mut preds = vec![0u64; len];
        for j in 0..len {
            for i in 0..j {
                if w[i] == w[j] || !self.commutes(w[i], w[j]) {
                    preds[j] |= 1 << i;
                }
            }
        }
        for n in (2..=len).rev() {
            if !len.is_multiple_of(n) {
                continue;
            }
            let k = len / n;
            let mut level: HashSet<u64> = HashSet::from([0u64]);
            for _ in 0..k {
                let mut next = HashSet::new();
                for &ideal in &level {
                    for j in 0..len {
                        if ideal >> j & 1 == 0 && preds[j] & !ideal == 0 {
                            next.insert(ideal | 1 << j);
                        }
                    }
                }
                level = next;
            }
            let mut ideals: Vec<u64> = level.into_iter().collect();
            ideals.sort_unstable();
            for ideal in ideals {
                let word: Vec<Gen> = mask_iter(ideal).map(|i| w[i]).collect();
                let r = self.normalize(&word);
                if self.power(&r, n as i64) == *g {
                    return (r, n as u64);
                }
            }
        }
        (g.clone(), 1)
    }

    /// Conjugator, cyclic core, root and maximal exponent of a right-angled
    /// element. Roots are unique only in irreducible systems, so reducible
    /// systems are rejected.
    pub fn cyclic_root(&self, x: &GroupElement) -> Result<CyclicDecomposition> {
        self.require_right_angled()?;
        self.require_irreducible()?;
        let (h, core) = self.cyclically_reduce(x);
        if core.is_identity() {
            return Ok(CyclicDecomposition {
                conjugator: h,
                core: core.clone(),
                root: core,
                exponent: 1,
                parts: Vec::new(),
            });
        }
        let parts = self.root_parts(&core);
        let mut n = parts.iter().filter(|p| p.infinite).fold(0u64, |g, p| gcd(g, p.exponent));
        if n == 0 {
            n = 1;
        }
        if parts.iter().any(|p| !p.infinite) {
            while n % 2 == 0 {
                n /= 2;
            }
        }
        let mut root = GroupElement::identity();
        for p in &parts {
            let k = if p.infinite { (p.exponent / n) as i64 } else { 1 };
            root = self.multiply(&root, &self.power(&p.root, k));
        }
        Ok(CyclicDecomposition { conjugator: h, core, root, exponent: n, parts })
    }

    /// True iff `x` is conjugate to a generator (cyclic core of length 1).
    pub fn is_reflection(&self, x: &GroupElement) -> bool {
        self.reflection_letter(x).is_some()
    }

    /// The generator `s` with `x ∈ s^W`, if `x` is a reflection.
    pub fn reflection_letter(&self, x: &GroupElement) -> Option<Gen> {
        if x.len().is_multiple_of(2) {
            return None;
        }
        let (_, core) = self.cyclically_reduce(x);
        (core.len() == 1).then(|| core.letters()[0])
    }

    pub fn centralizer(&self, x: &GroupElement) -> Result<Centralizer> {
        let dec = self.cyclic_root(x)?;
        let (_, link) = self.support_link(&dec.core);
        Ok(Centralizer { conjugator: dec.conjugator, parts: dec.parts, link })
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Centralizer {
    /// Generators of the centralizer as elements.
    pub fn generators(&self, sys: &CoxeterSystem) -> Vec<GroupElement> {
        let h = &self.conjugator;
        let mut out: Vec<GroupElement> = self.parts.iter().map(|p| sys.conjugate(&p.root, h)).collect();
        out.extend(mask_iter(self.link).map(|s| sys.conjugate(&sys.gen(s as Gen), h)));
        out
    }

    pub fn contains(&self, sys: &CoxeterSystem, y: &GroupElement) -> bool {
        let hinv = sys.inverse(&self.conjugator);
        let z = sys.conjugate(y, &hinv);
        let allowed = self.parts.iter().fold(self.link, |m, p| m | p.support);
        if z.support_mask() & !allowed != 0 {
            return false;
        }
        self.parts.iter().all(|p| {
            let letters: Vec<Gen> = z.letters().iter().copied().filter(|&g| p.support >> g & 1 == 1).collect();
            let piece = GroupElement::from_canonical(letters);
            if piece.is_identity() || piece == p.root {
                return true;
            }
            if !p.infinite || !piece.len().is_multiple_of(p.root.len()) {
                return false;
            }
            let k = (piece.len() / p.root.len()) as i64;
            sys.power(&p.root, k) == piece || sys.power(&p.root, -k) == piece
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::CoxError;

    fn el(sys: &CoxeterSystem, w: &str) -> GroupElement {
        sys.element(w).unwrap()
    }

    #[test]
    fn orders() {
        let sys = CoxeterSystem::parse("generators a b c\nm a b 2").unwrap();
        assert_eq!(sys.element_order(&el(&sys, "a"), None), Order::Finite(2));
        assert_eq!(sys.element_order(&el(&sys, "cabc"), None), Order::Finite(2));
        assert_eq!(sys.element_order(&el(&sys, "ac"), None), Order::Infinite);
        assert_eq!(sys.element_order(&GroupElement::identity(), None), Order::Finite(1));
        let a2 = CoxeterSystem::uniform(2, 3);
        assert_eq!(a2.element_order(&el(&a2, "ab"), None), Order::Finite(3));
        let tri = CoxeterSystem::uniform(3, 3);
        assert_eq!(tri.element_order(&el(&tri, "abc"), None), Order::Unknown { cutoff: 6 });
    }

    #[test]
    fn support_and_link() {
        let sys = CoxeterSystem::parse("generators a b c\nm a c 2\nm b c 2").unwrap();
        let (sp, lk) = sys.support_link(&el(&sys, "ab"));
        assert_eq!(sp, 0b011);
        assert_eq!(lk, 0b100);
        let (_, lk) = sys.support_link(&el(&sys, "a"));
        assert_eq!(lk, 0b100);
    }

    #[test]
    fn roots_in_infinite_dihedral() {
        let d = CoxeterSystem::universal(2);
        let dec = d.cyclic_root(&el(&d, "bab")).unwrap();
        assert_eq!(d.format(&dec.conjugator), "b");
        assert_eq!(d.format(&dec.core), "a");
        assert_eq!(d.format(&dec.root), "a");
        assert_eq!(dec.exponent, 1);
        let dec = d.cyclic_root(&el(&d, "ababab")).unwrap();
        assert_eq!((d.format(&dec.root).as_str(), dec.exponent), ("ab", 3));
        let dec = d.cyclic_root(&el(&d, "abab")).unwrap();
        assert_eq!((d.format(&dec.root).as_str(), dec.exponent), ("ab", 2));
    }

    #[test]
    fn reducible_root_rejected() {
        let sys = CoxeterSystem::parse("generators a b\nm a b 2").unwrap();
        assert_eq!(sys.cyclic_root(&el(&sys, "a")), Err(CoxError::Reducible(2)));
    }

    #[test]
    fn reflections() {
        let sys = CoxeterSystem::parse("generators a b c\nm a b 2").unwrap();
        assert!(sys.is_reflection(&el(&sys, "a")));
        assert!(!sys.is_reflection(&el(&sys, "ab")));
        assert!(sys.is_reflection(&el(&sys, "cac")));
        assert_eq!(sys.reflection_letter(&el(&sys, "bcacb")), Some(0));
    }

    #[test]
    fn centralizer_examples() {
        // path a-b has two commuting generators; add c joined to both to stay irreducible
        let p = CoxeterSystem::parse("generators a b c\nm a b 2").unwrap();
        let c = p.centralizer(&el(&p, "a")).unwrap();
        let gens: Vec<String> = c.generators(&p).iter().map(|g| p.format(g)).collect();
        assert_eq!(gens, ["a", "b"]);
        for (w, inside) in [("ab", true), ("b", true), ("c", false), ("e", true)] {
            assert_eq!(c.contains(&p, &el(&p, w)), inside, "{w}");
        }
        let d = CoxeterSystem::universal(2);
        let c = d.centralizer(&el(&d, "ab")).unwrap();
        let gens: Vec<String> = c.generators(&d).iter().map(|g| d.format(g)).collect();
        assert_eq!(gens, ["ab"]);
        assert!(c.contains(&d, &el(&d, "baba")));
        assert!(!c.contains(&d, &el(&d, "a")));
    }

    #[test]
    fn disconnected_support_root() {
        // c commutes with a and b; a, b free
        let sys = CoxeterSystem::parse("generators a b c d\nm a c 2\nm b c 2").unwrap();
        let g = el(&sys, "ababab c");
        let dec = sys.cyclic_root(&g).unwrap();
        assert_eq!(dec.exponent, 3);
        assert_eq!(sys.power(&dec.root, 3), g);
    }
}
