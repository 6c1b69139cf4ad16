//! Finite continuation: the intersection of the maximal finite subgroups
//! containing an element, approximated through conjugates of maximal
//! spherical parabolics by short conjugators.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::ball::Ball;
use crate::classify::classify;
use crate::error::{CoxError, Result};
use crate::racg::Order;
use crate::system::{mask_iter, CoxeterSystem, Gen};
use crate::word::GroupElement;

/// Largest parabolic enumerated as a finite subgroup.
pub const MAX_PARABOLIC: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FcReport {
    pub radius: usize,
    /// The intersection at `radius`, sorted.
    pub elements: Vec<GroupElement>,
    /// Conjugates `u W_J u⁻¹` containing the element.
    pub subgroups_used: usize,
    /// Same intersection at `radius − 1`.
    pub stable: bool,
}

impl CoxeterSystem {
    /// Masks of the maximal spherical subsets of `S`.
    pub fn maximal_spherical_subsets(&self) -> Vec<u64> {
        let n = self.rank();
        let spherical: Vec<u64> = (1u64..1 << n)
            .filter(|&j| {
                let gens: Vec<usize> = mask_iter(j).collect();
                classify(&self.restrict(&gens)).is_spherical()
            })
            .collect();
        spherical.iter().copied().filter(|&j| !spherical.iter().any(|&k| k != j && k & j == j)).collect()
    }

    /// All elements of the finite parabolic `W_J`.
    pub fn parabolic_elements(&self, j: u64) -> Result<Vec<GroupElement>> {
        let mut seen: HashSet<GroupElement> = HashSet::from([GroupElement::identity()]);
        let mut frontier = vec![GroupElement::identity()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in &frontier {
                for s in mask_iter(j) {
                    let y = self.mul_gen(x, s as Gen);
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            if seen.len() > MAX_PARABOLIC {
                return Err(CoxError::ResourceBound(format!("parabolic exceeds {MAX_PARABOLIC} elements")));
            }
            frontier = next;
        }
        let mut out: Vec<GroupElement> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    fn fc_at(&self, w: &GroupElement, parabolics: &[(u64, Vec<GroupElement>)], ball: &Ball, radius: usize) -> (Vec<GroupElement>, usize) {
        let mut acc: Option<BTreeSet<GroupElement>> = None;
        let mut used = 0;
        for u in ball.iter().filter(|u| u.len() <= radius) {
            let uinv = self.inverse(u);
            let inner = self.conjugate(w, &uinv);
            for (j, elems) in parabolics {
                if inner.support_mask() & !j != 0 {
                    continue;
                }
                used += 1;
                let conj: BTreeSet<GroupElement> = elems.iter().map(|x| self.conjugate(x, u)).collect();
                acc = Some(match acc {
                    None => conj,
                    Some(prev) => prev.intersection(&conj).cloned().collect(),
                });
            }
        }
        (acc.map(|s| s.into_iter().collect()).unwrap_or_default(), used)
    }

    /// `FC(w)` over conjugators of length at most `radius`. Every maximal
    /// finite subgroup is a conjugate of a maximal spherical parabolic, so
    /// the result contains the true `FC(w)`.
    pub fn finite_continuation(&self, w: &GroupElement, radius: usize) -> Result<FcReport> {
        if !self.element_order(w, None).is_finite() {
            let order = self.element_order(w, None);
            let what = if order == Order::Infinite { "has infinite order" } else { "has no certified finite order" };
            return Err(CoxError::Invalid(format!("{} {what}", self.format(w))));
        }
        let parabolics = self
            .maximal_spherical_subsets()
            .into_iter()
            .map(|j| Ok((j, self.parabolic_elements(j)?)))
            .collect::<Result<Vec<_>>>()?;
        let ball = Ball::new(self, radius)?;
        let (elements, subgroups_used) = self.fc_at(w, &parabolics, &ball, radius);
        let stable = radius > 0 && self.fc_at(w, &parabolics, &ball, radius - 1).0 == elements;
        Ok(FcReport { radius, elements, subgroups_used, stable })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fc_in_the_order_four_triangle() {
        let t = CoxeterSystem::uniform(3, 4);
        assert_eq!(t.maximal_spherical_subsets(), vec![0b011, 0b101, 0b110]);
        for s in 0..3 {
            let r = t.finite_continuation(&t.gen(s), 4).unwrap();
            assert_eq!(r.elements, vec![GroupElement::identity(), t.gen(s)]);
            assert!(r.stable);
        }
        let w0 = t.element("abab").unwrap();
        let r = t.finite_continuation(&w0, 3).unwrap();
        assert!(r.elements.iter().all(|x| x.support_mask() & 0b100 == 0));
        assert!(r.elements.contains(&GroupElement::identity()));
        assert!(t.finite_continuation(&t.element("abc").unwrap(), 2).is_err());
    }
}
