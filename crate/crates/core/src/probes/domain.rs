//! The domain property: for `x, y ≠ e` some `g` has `[x, y^g] ≠ e`.

use std::collections::HashSet;

use serde::Serialize;

use crate::ball::Ball;
use crate::error::{CoxError, Result};
use crate::system::{CoxeterSystem, Gen};
use crate::word::GroupElement;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum DomainOutcome {
    Witness { g: GroupElement },
    /// No witness in the ball and no structural reason found.
    Exhausted { radius: usize },
    CertifiedNegative { reason: String },
}

/// Cap on conjugacy-class closures.
pub const CLASS_CAP: usize = 10_000;

impl CoxeterSystem {
    /// The conjugacy class of `y` if it is finite and lies within `B_radius`.
    pub fn finite_class_within(&self, y: &GroupElement, radius: usize) -> Option<Vec<GroupElement>> {
        let mut seen: HashSet<GroupElement> = HashSet::from([y.clone()]);
        let mut stack = vec![y.clone()];
        while let Some(z) = stack.pop() {
            for s in 0..self.rank() as Gen {
                let c = self.conjugate(&z, &self.gen(s));
                if c.len() > radius || seen.len() > CLASS_CAP {
                    return None;
                }
                if seen.insert(c.clone()) {
                    stack.push(c);
                }
            }
        }
        let mut v: Vec<GroupElement> = seen.into_iter().collect();
        v.sort();
        Some(v)
    }

    /// Union of the irreducible components meeting the support of `x`.
    fn component_hull(&self, x: &GroupElement) -> u64 {
        let sp = x.support_mask();
        self.diagram()
            .components()
            .into_iter()
            .map(|c| c.iter().fold(0u64, |m, &g| m | 1 << g))
            .filter(|m| m & sp != 0)
            .fold(0, |a, m| a | m)
    }

    pub fn domain_check(&self, x: &GroupElement, y: &GroupElement, radius: usize) -> Result<DomainOutcome> {
        if x.is_identity() || y.is_identity() {
            return Err(CoxError::Invalid("x and y must differ from e".into()));
        }
        let ball = Ball::new(self, radius)?;
        for g in ball.iter() {
            let yg = self.conjugate(y, g);
            if !self.commute(x, &yg) {
                return Ok(DomainOutcome::Witness { g: g.clone() });
            }
        }
        let (hx, hy) = (self.component_hull(x), self.component_hull(y));
        if hx & hy == 0 {
            return Ok(DomainOutcome::CertifiedNegative {
                reason: format!(
                    "x lies in components {{{}}} and y in {{{}}}, which commute elementwise",
                    self.mask_names(hx).join(","),
                    self.mask_names(hy).join(",")
                ),
            });
        }
        if let Some(class) = self.finite_class_within(y, radius) {
            if class.iter().all(|z| self.commute(x, z)) {
                let names: Vec<String> = class.iter().map(|z| self.format(z)).collect();
                return Ok(DomainOutcome::CertifiedNegative {
                    reason: format!("the class of y is {{{}}} and all of it commutes with x", names.join(", ")),
                });
            }
        }
        Ok(DomainOutcome::Exhausted { radius })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_cases() {
        let u = CoxeterSystem::universal(3);
        let r = u.domain_check(&u.element("a").unwrap(), &u.element("b").unwrap(), 3).unwrap();
        assert_eq!(r, DomainOutcome::Witness { g: GroupElement::identity() });
        let d = CoxeterSystem::universal(2);
        let ab = d.element("ab").unwrap();
        assert!(matches!(d.domain_check(&ab, &ab, 4).unwrap(), DomainOutcome::CertifiedNegative { .. }));
        let two = CoxeterSystem::parse("generators a b c d\nm a b inf\nm c d inf\nm a c 2\nm a d 2\nm b c 2\nm b d 2")
            .unwrap();
        let r = two.domain_check(&two.element("ab").unwrap(), &two.element("c").unwrap(), 3).unwrap();
        assert!(matches!(r, DomainOutcome::CertifiedNegative { .. }));
        assert!(u.domain_check(&GroupElement::identity(), &u.element("a").unwrap(), 2).is_err());
    }
}
