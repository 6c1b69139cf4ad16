//! Right-angled Artin groups and their embedding `β` into the right-angled
//! Coxeter group of the doubled graph `Γ⁺`, with image the kernel of the
//! parity map `θ`.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{CoxError, Result};
use crate::heap::{GraphProduct, Syllable, VertexKind};
use crate::system::{CoxeterSystem, Gen, Label};
use crate::word::GroupElement;

/// Normal form of a RAAG element: canonical syllables with nonzero exponents.
pub type RaagElement = Vec<Syllable>;

/// The RAAG on a graph given as a right-angled `.cox` system: `g_i` and
/// `g_j` commute iff `m(i, j) = 2`.
#[derive(Clone, Debug)]
pub struct Raag {
    graph: CoxeterSystem,
    product: GraphProduct,
}

#[derive(Clone, Debug)]
pub struct GammaPlus {
    source: CoxeterSystem,
    system: CoxeterSystem,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    pub radius: usize,
    pub elements: usize,
    /// Distinct values of `θ` on the ball, i.e. cosets of `ker θ` met.
    pub cosets: usize,
    pub expected: u64,
}

impl Raag {
    pub fn new(graph: &CoxeterSystem) -> Result<Self> {
        graph.require_right_angled()?;
        let n = graph.rank();
        let commute = (0..n as Gen).map(|g| graph.commute_mask(g)).collect();
        Ok(Self { graph: graph.clone(), product: GraphProduct::new(commute, vec![VertexKind::Free; n]) })
    }

    pub fn graph(&self) -> &CoxeterSystem {
        &self.graph
    }

    pub fn rank(&self) -> usize {
        self.graph.rank()
    }

    /// Tokens are `v`, `v^k` or runs of single-character names, where an
    /// upper-case letter stands for the inverse of its lower-case vertex.
    pub fn parse_word(&self, text: &str) -> Result<RaagElement> {
        let text = text.trim();
        let mut syllables = Vec::new();
        if text.is_empty() || matches!(text, "e" | "1") && self.graph.generator(text).is_err() {
            return Ok(syllables);
        }
        for tok in text.split_whitespace() {
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b, e.parse::<i64>().map_err(|_| CoxError::Invalid(format!("bad exponent in `{tok}`")))?),
                None => (tok, 1),
            };
            if let Ok(g) = self.graph.generator(base) {
                syllables.push(Syllable::new(g, exp));
                continue;
            }
            if exp != 1 {
                return Err(CoxError::UnknownLetter(base.to_owned()));
            }
            for ch in base.chars() {
                let lower = ch.to_lowercase().to_string();
                let (g, e) = match self.graph.generator(&ch.to_string()) {
                    Ok(g) => (g, 1),
                    Err(_) if ch.is_uppercase() => (self.graph.generator(&lower)?, -1),
                    Err(e) => return Err(e),
                };
                syllables.push(Syllable::new(g, e));
            }
        }
        Ok(self.product.normalize(&syllables))
    }

    pub fn format(&self, x: &[Syllable]) -> String {
        if x.is_empty() {
            return self.graph.identity_name().into();
        }
        let parts: Vec<String> = x
            .iter()
            .map(|s| {
                let name = self.graph.name(s.vertex as Gen);
                if s.exp == 1 {
                    name.to_string()
                } else {
                    format!("{name}^{}", s.exp)
                }
            })
            .collect();
        parts.join(" ")
    }

    pub fn multiply(&self, x: &[Syllable], y: &[Syllable]) -> RaagElement {
        self.product.multiply(x, y)
    }

    pub fn inverse(&self, x: &[Syllable]) -> RaagElement {
        self.product.inverse(x)
    }

    pub fn length(x: &[Syllable]) -> usize {
        x.iter().map(|s| s.exp.unsigned_abs() as usize).sum()
    }

    /// The ball of radius `radius` with respect to `{g_i^{±1}}`, sphere by sphere.
    pub fn ball(&self, radius: usize) -> Vec<Vec<RaagElement>> {
        let letters: Vec<Syllable> =
            (0..self.rank() as u8).flat_map(|v| [Syllable::new(v, 1), Syllable::new(v, -1)]).collect();
        let mut seen: HashSet<RaagElement> = HashSet::from([vec![]]);
        let mut spheres = vec![vec![vec![]]];
        for _ in 0..radius {
            let mut next = Vec::new();
            for x in spheres.last().expect("nonempty") {
                for &l in &letters {
                    let y = self.product.multiply(x, &[l]);
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            next.sort();
            spheres.push(next);
        }
        spheres
    }
}

impl GammaPlus {
    /// Vertices `s_v` (a copy of `Γ`) and `r_v` (a clique), with `s_v`
    /// adjacent to `r_w` iff `v ≠ w`. Adjacent vertices commute.
    pub fn new(graph: &CoxeterSystem) -> Result<Self> {
        graph.require_right_angled()?;
        let n = graph.rank();
        let mut names: Vec<String> = graph.names().iter().map(|v| format!("s_{v}")).collect();
        names.extend(graph.names().iter().map(|v| format!("r_{v}")));
        let mut matrix = vec![vec![Label::Infinite; 2 * n]; 2 * n];
        for i in 0..2 * n {
            for j in 0..2 * n {
                let (a, b) = (i % n, j % n);
                let adjacent = a != b && (i >= n || j >= n || graph.commutes(a as Gen, b as Gen));
                matrix[i][j] = if i == j {
                    Label::Finite(1)
                } else if adjacent {
                    Label::Finite(2)
                } else {
                    Label::Infinite
                };
            }
        }
        Ok(Self { source: graph.clone(), system: CoxeterSystem::new(names, matrix)? })
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    pub fn source(&self) -> &CoxeterSystem {
        &self.source
    }

    pub fn s(&self, v: usize) -> Gen {
        v as Gen
    }

    pub fn r(&self, v: usize) -> Gen {
        (self.source.rank() + v) as Gen
    }

    /// `β(g_v) = r_v s_v`.
    pub fn beta(&self, x: &[Syllable]) -> GroupElement {
        let mut word = Vec::new();
        for s in x {
            let v = s.vertex as usize;
            let pair = if s.exp > 0 { [self.r(v), self.s(v)] } else { [self.s(v), self.r(v)] };
            for _ in 0..s.exp.unsigned_abs() {
                word.extend(pair);
            }
        }
        self.system.normalize(&word)
    }

    /// `θ(s_v) = θ(r_v) = e_v` as a bit mask.
    pub fn theta(&self, w: &GroupElement) -> u64 {
        let n = self.source.rank();
        w.letters().iter().fold(0u64, |acc, &g| acc ^ 1 << (g as usize % n))
    }

    pub fn in_kernel(&self, w: &GroupElement) -> bool {
        self.theta(w) == 0
    }

    /// Coset labels met on `B_radius` of `W(Γ⁺)`.
    pub fn index_report(&self, radius: usize) -> Result<IndexReport> {
        let ball = crate::ball::Ball::new(&self.system, radius)?;
        let labels: HashSet<u64> = ball.iter().map(|w| self.theta(w)).collect();
        Ok(IndexReport { radius, elements: ball.len(), cosets: labels.len(), expected: 1 << self.source.rank() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubled_graphs() {
        let vertex = CoxeterSystem::parse("generators a").unwrap();
        let gp = GammaPlus::new(&vertex).unwrap();
        assert_eq!(gp.system().m(0, 1), Label::Infinite);
        let edge = CoxeterSystem::parse("generators a b\nm a b 2").unwrap();
        let gp = GammaPlus::new(&edge).unwrap();
        let sys = gp.system();
        // s_a – s_b – r_a – r_b – s_a is a 4-cycle
        assert_eq!(sys.names(), ["s_a", "s_b", "r_a", "r_b"]);
        let adjacent: Vec<(usize, usize)> =
            (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| sys.m(i, j) == Label::Finite(2)).collect();
        assert_eq!(adjacent, [(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn beta_basics() {
        let p3 = CoxeterSystem::right_angled(3, &[(0, 1), (1, 2)]);
        let raag = Raag::new(&p3).unwrap();
        let gp = GammaPlus::new(&p3).unwrap();
        let a = raag.parse_word("a").unwrap();
        assert_eq!(gp.system().format(&gp.beta(&a)), "r_a s_a");
        assert!(!gp.system().element_order(&gp.beta(&a), None).is_finite());
        assert!(gp.in_kernel(&gp.beta(&raag.parse_word("a^3 B c").unwrap())));
        assert_eq!(raag.parse_word("a A").unwrap(), vec![]);
        assert_eq!(raag.format(&raag.parse_word("b a b").unwrap()), "a b^2");
        assert_eq!(raag.format(&raag.parse_word("c a c").unwrap()), "c a c");
        assert!(raag.parse_word("x").is_err());
    }
}
