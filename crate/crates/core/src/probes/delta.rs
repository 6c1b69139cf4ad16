//! `δ(x̄)` for irreducible, 2-spherical, even, non-affine systems: every
//! `xᵢ` a reflection and `o(xᵢxⱼ) = o(sᵢsⱼ)`.

use serde::Serialize;

use crate::classify::{classify, ComponentType};
use crate::error::{CoxError, Result};
use crate::system::{CoxeterSystem, Gen, Label};
use crate::word::GroupElement;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    pub holds: bool,
    /// `"i"` or `"ii"` when the formula fails.
    pub failing_clause: Option<String>,
    pub detail: String,
}

impl CoxeterSystem {
    pub fn delta_2spherical_check(&self, x: &[GroupElement]) -> Result<DeltaReport> {
        let report = classify(self);
        if !report.is_irreducible() {
            return Err(CoxError::Scope("δ needs an irreducible system".into()));
        }
        if !self.is_two_spherical() {
            return Err(CoxError::Scope("δ needs a 2-spherical system".into()));
        }
        if !self.is_even() {
            return Err(CoxError::Scope("δ needs an even system".into()));
        }
        if let Some(ComponentType::Affine(name) | ComponentType::Spherical(name)) = report.types.first() {
            return Err(CoxError::Scope(format!("δ needs a non-affine infinite system, got {name}")));
        }
        if x.len() != self.rank() {
            return Err(CoxError::Invalid(format!("expected {} elements, got {}", self.rank(), x.len())));
        }
        for (i, xi) in x.iter().enumerate() {
            if !(0..self.rank() as Gen).any(|s| self.in_generator_class(xi, s)) {
                return Ok(DeltaReport {
                    holds: false,
                    failing_clause: Some("i".into()),
                    detail: format!("x{} = {} is not a reflection", i + 1, self.format(xi)),
                });
            }
        }
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                let Label::Finite(m) = self.m(i, j) else { unreachable!("2-spherical") };
                let p = self.multiply(&x[i], &x[j]);
                let order = (1..=m as i64).find(|&k| self.power(&p, k).is_identity());
                if order != Some(m as i64) {
                    return Ok(DeltaReport {
                        holds: false,
                        failing_clause: Some("ii".into()),
                        detail: format!("o(x{}x{}) ≠ {m}", i + 1, j + 1),
                    });
                }
            }
        }
        Ok(DeltaReport { holds: true, failing_clause: None, detail: "both clauses hold".into() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_four_triangle() {
        let t = CoxeterSystem::uniform(3, 4);
        let e = |w: &str| t.element(w).unwrap();
        assert!(t.delta_2spherical_check(&t.generators()).unwrap().holds);
        assert!(t.delta_2spherical_check(&[e("bab"), e("b"), e("bcb")]).unwrap().holds);
        let r = t.delta_2spherical_check(&[e("ab"), e("b"), e("c")]).unwrap();
        assert_eq!(r.failing_clause.as_deref(), Some("i"));
        let r = t.delta_2spherical_check(&[e("bab"), e("b"), e("c")]).unwrap();
        assert_eq!(r.failing_clause.as_deref(), Some("ii"));
        assert!(CoxeterSystem::uniform(3, 3).delta_2spherical_check(&[]).is_err());
        assert!(CoxeterSystem::universal(3).delta_2spherical_check(&[]).is_err());
    }
}
