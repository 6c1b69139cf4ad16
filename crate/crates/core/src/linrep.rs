//! The geometric representation over the integers and reflection length.
//!
//! With `B(α_s, α_s) = 1` and `B(α_s, α_t) ∈ {0, −1/2, −1}` for
//! `m(s,t) ∈ {2, 3, ∞}`, the matrices `σ_s(v) = v − 2B(v, α_s)α_s` are
//! integral. Other labels would need irrational entries and are refused.

use std::collections::HashSet;

use serde::Serialize;

use crate::ball::Ball;
use crate::classify::classify;
use crate::error::{CoxError, Result};
use crate::matrix::IntMatrix;
use crate::system::{CoxeterSystem, Gen, Label};
use crate::word::GroupElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionRep {
    /// `σ_s` for each generator, acting on column vectors in the basis `α`.
    pub generators: Vec<IntMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReflectionLengthResult {
    pub lower: usize,
    /// `None` when the search ran out of budget before any bound was found.
    pub upper: Option<usize>,
    pub exact: bool,
    pub search_radius: usize,
}

/// Products `t·y` allowed per layer of the reflection-length search.
pub const PRODUCT_BUDGET: usize = 250_000;

/// Largest ball of conjugators used to list candidate reflections.
pub const CONJUGATOR_CAP: usize = 20_000;

impl ReflectionRep {
    pub fn new(sys: &CoxeterSystem) -> Result<Self> {
        let n = sys.rank();
        // 2B(α_t, α_s)
        let two_b = |t: usize, s: usize| -> Result<i64> {
            if t == s {
                return Ok(2);
            }
            match sys.m(t, s) {
                Label::Finite(2) => Ok(0),
                Label::Finite(3) => Ok(-1),
                Label::Infinite => Ok(-2),
                Label::Finite(k) => Err(CoxError::Scope(format!(
                    "label {k} has no integral geometric representation"
                ))),
            }
        };
        let mut generators = Vec::with_capacity(n);
        for s in 0..n {
            let mut m = IntMatrix::identity(n);
            for t in 0..n {
                m[(s, t)] -= two_b(t, s)?;
            }
            generators.push(m);
        }
        Ok(Self { generators })
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn matrix_of_word(&self, word: &[Gen]) -> IntMatrix {
        word.iter().fold(IntMatrix::identity(self.dim()), |acc, &g| &acc * &self.generators[g as usize])
    }

    pub fn matrix(&self, x: &GroupElement) -> IntMatrix {
        self.matrix_of_word(x.letters())
    }

    /// `rank(M − I)`: codimension of the fixed space.
    pub fn fixed_space_codim(&self, x: &GroupElement) -> usize {
        let m = self.matrix(x);
        m.sub(&IntMatrix::identity(self.dim())).rank()
    }
}

impl CoxeterSystem {
    pub fn rep_matrix(&self, x: &GroupElement) -> Result<IntMatrix> {
        Ok(ReflectionRep::new(self)?.matrix(x))
    }

    /// Bounds on the reflection length `ℓ_T(x)`.
    ///
    /// The lower bound combines the fixed-space codimension with parity
    /// (`ℓ_T ≡ ℓ_S mod 2`). Finite groups are searched exhaustively; in
    /// infinite groups the first `k − 1` factors range over reflections with
    /// conjugator length at most `search_radius` and the last is tested
    /// exactly, so the upper bound is always achieved but may not be minimal.
    /// The radius shrinks until the conjugator ball fits [`CONJUGATOR_CAP`];
    /// the result reports the radius used.
    pub fn reflection_length(&self, x: &GroupElement, search_radius: Option<usize>) -> Result<ReflectionLengthResult> {
        self.require_right_angled()?;
        let rep = ReflectionRep::new(self)?;
        let radius = search_radius.unwrap_or(x.len() + 2);
        if x.is_identity() {
            return Ok(ReflectionLengthResult { lower: 0, upper: Some(0), exact: true, search_radius: radius });
        }
        let codim = rep.fixed_space_codim(x);
        let mut lower = codim.max(1);
        if lower % 2 != x.len() % 2 {
            lower += 1;
        }
        if self.is_reflection(x) {
            return Ok(ReflectionLengthResult { lower: 1, upper: Some(1), exact: true, search_radius: radius });
        }
        let finite = classify(self).is_spherical();
        // the radius actually searched, shrunk if the ball would be too large
        let mut radius = radius;
        let reflections: Vec<GroupElement> = if finite {
            let ball = Ball::new(self, self.rank())?;
            ball.iter().filter(|w| self.is_reflection(w)).cloned().collect()
        } else {
            let mut ball = Ball::new(self, 0)?;
            for r in 1..=radius {
                match Ball::with_cap(self, r, CONJUGATOR_CAP) {
                    Ok(b) => ball = b,
                    Err(CoxError::ResourceBound(_)) => break,
                    Err(e) => return Err(e),
                }
            }
            radius = ball.radius;
            let set: HashSet<GroupElement> = ball
                .iter()
                .flat_map(|h| (0..self.rank() as Gen).map(move |s| (h, s)))
                .map(|(h, s)| self.conjugate(&self.gen(s), h))
                .collect();
            let mut v: Vec<GroupElement> = set.into_iter().collect();
            v.sort();
            v
        };

        // layer k holds t_{k-1} ⋯ t_1 x; x has ℓ_T ≤ k once layer k meets T
        let mut layer: HashSet<GroupElement> = HashSet::from([x.clone()]);
        let mut found = None;
        for k in 1..x.len() {
            if k % 2 == x.len() % 2 && layer.iter().any(|y| self.is_reflection(y)) {
                found = Some(k);
                break;
            }
            if layer.len().saturating_mul(reflections.len()) > PRODUCT_BUDGET {
                let exact = lower == x.len();
                return Ok(ReflectionLengthResult { lower, upper: Some(x.len()), exact, search_radius: radius });
            }
            let mut next = HashSet::new();
            for y in &layer {
                for t in &reflections {
                    next.insert(self.multiply(t, y));
                }
            }
            layer = next;
        }
        let upper = found.unwrap_or(x.len());
        debug_assert!(upper >= lower);
        let lower = if finite { upper } else { lower };
        Ok(ReflectionLengthResult { lower, upper: Some(upper), exact: upper == lower, search_radius: radius })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_matrices() {
        let d = CoxeterSystem::universal(2);
        let rep = ReflectionRep::new(&d).unwrap();
        // columns are images of α_a, α_b
        assert_eq!(rep.generators[0], IntMatrix::from_rows(&[vec![-1, 2], vec![0, 1]]));
        assert!(rep.matrix(&GroupElement::identity()).is_identity());
        let sq = CoxeterSystem::parse("generators a b\nm a b 2").unwrap();
        let r = ReflectionRep::new(&sq).unwrap();
        assert_eq!(&r.generators[0] * &r.generators[1], &r.generators[1] * &r.generators[0]);
        assert!(ReflectionRep::new(&CoxeterSystem::uniform(2, 4)).is_err());
    }

    #[test]
    fn codimensions() {
        let d = CoxeterSystem::universal(2);
        let rep = ReflectionRep::new(&d).unwrap();
        assert_eq!(rep.fixed_space_codim(&GroupElement::identity()), 0);
        assert_eq!(rep.fixed_space_codim(&d.element("bab").unwrap()), 1);
        assert_eq!(rep.fixed_space_codim(&d.element("ab").unwrap()), 1);
    }

    #[test]
    fn reflection_lengths() {
        let d = CoxeterSystem::universal(2);
        let r = d.reflection_length(&d.element("ab").unwrap(), None).unwrap();
        assert_eq!((r.lower, r.upper, r.exact), (2, Some(2), true));
        let r = d.reflection_length(&d.element("bab").unwrap(), None).unwrap();
        assert_eq!((r.lower, r.upper, r.exact), (1, Some(1), true));
        let sq = CoxeterSystem::parse("generators a b\nm a b 2").unwrap();
        let r = sq.reflection_length(&sq.element("ab").unwrap(), None).unwrap();
        assert_eq!((r.lower, r.upper, r.exact), (2, Some(2), true));
    }
}
