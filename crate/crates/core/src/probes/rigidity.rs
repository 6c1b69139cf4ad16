//! Sims fixing a given element: for a Coxeter element every such sim should
//! be an automorphism.

use serde::Serialize;

use crate::ball::Ball;
use crate::endo::EndoKind;
use crate::error::{CoxError, Result};
use crate::system::{CoxeterSystem, Gen};
use crate::word::GroupElement;

/// Cap on the number of candidate image tuples.
pub const RIGIDITY_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RigidityReport {
    pub h: GroupElement,
    pub complexity_cap: usize,
    /// Images are `u s u⁻¹` with `ℓ(u) ≤ conjugator_radius`.
    pub conjugator_radius: usize,
    pub candidates: usize,
    /// Sims among the candidates with all `Δ` entries at most the cap.
    pub sims_within_cap: usize,
    pub automorphisms_fixing: usize,
    /// Proper sims with `Δ ≤ cap` fixing `h`, as image tuples.
    pub proper_fixing: Vec<Vec<GroupElement>>,
}

impl CoxeterSystem {
    /// Enumerates sims whose images are conjugates by elements of
    /// `B_conjugator_radius`, keeps those with `Δ ≤ complexity_cap`, and
    /// reports which of them fix `h`.
    pub fn rigidity_check(&self, h: &GroupElement, complexity_cap: usize, conjugator_radius: usize) -> Result<RigidityReport> {
        self.require_right_angled()?;
        if !self.graph_predicates()?.star_property {
            return Err(CoxError::Scope("rigidity check needs a reflection independent system (star property)".into()));
        }
        let ball = Ball::new(self, conjugator_radius)?;
        let options: Vec<Vec<GroupElement>> = (0..self.rank() as Gen)
            .map(|s| {
                let mut v: Vec<GroupElement> = ball.iter().map(|u| self.conjugate(&self.gen(s), u)).collect();
                v.sort();
                v.dedup();
                v
            })
            .collect();
        let total = options.iter().try_fold(1usize, |acc, o| acc.checked_mul(o.len())).unwrap_or(usize::MAX);
        if total > RIGIDITY_CAP {
            return Err(CoxError::ResourceBound(format!(
                "{total} candidate tuples exceed the cap of {RIGIDITY_CAP}"
            )));
        }
        let mut report = RigidityReport {
            h: h.clone(),
            complexity_cap,
            conjugator_radius,
            candidates: total,
            sims_within_cap: 0,
            automorphisms_fixing: 0,
            proper_fixing: Vec::new(),
        };
        let mut idx = vec![0usize; self.rank()];
        loop {
            let images: Vec<GroupElement> = idx.iter().enumerate().map(|(s, &i)| options[s][i].clone()).collect();
            let e = self.sim_check(&images, None)?;
            if e.kind.is_sim() {
                let delta = self.complexity_matrix(&e)?;
                if delta.entries.iter().flatten().all(|&d| d <= complexity_cap) {
                    report.sims_within_cap += 1;
                    if self.apply_endo(&images, h) == *h {
                        match e.kind {
                            EndoKind::Automorphism => report.automorphisms_fixing += 1,
                            _ => report.proper_fixing.push(images),
                        }
                    }
                }
            }
            // odometer over the option lists
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return Ok(report);
                }
                idx[k] += 1;
                if idx[k] < options[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dinf_coxeter_element_is_rigid() {
        let d = CoxeterSystem::universal(2);
        let r = d.rigidity_check(&d.element("ab").unwrap(), 6, 4).unwrap();
        assert!(r.proper_fixing.is_empty());
        assert!(r.automorphisms_fixing >= 1);
        let r = d.rigidity_check(&d.element("a").unwrap(), 6, 4).unwrap();
        let expected = vec![d.element("a").unwrap(), d.element("abababa").unwrap()];
        assert!(r.proper_fixing.contains(&expected));
    }
}
