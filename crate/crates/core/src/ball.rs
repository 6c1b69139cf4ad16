//! Breadth-first enumeration of Cayley-graph balls.

use std::collections::HashMap;

use crate::error::{CoxError, Result};
use crate::system::{CoxeterSystem, Gen};
use crate::word::GroupElement;

/// Hard cap on the number of elements in a ball.
pub const MAX_BALL: usize = 4_000_000;

/// The ball `B_R = {w : ℓ(w) ≤ R}`, listed sphere by sphere in shortlex order.
#[derive(Clone, Debug)]
pub struct Ball {
    pub radius: usize,
    pub elements: Vec<GroupElement>,
    pub sphere_sizes: Vec<usize>,
    index: HashMap<GroupElement, usize>,
}

impl Ball {
    pub fn new(sys: &CoxeterSystem, radius: usize) -> Result<Self> {
        Self::with_cap(sys, radius, MAX_BALL)
    }

    pub fn with_cap(sys: &CoxeterSystem, radius: usize, cap: usize) -> Result<Self> {
        let mut elements = vec![GroupElement::identity()];
        let mut index = HashMap::from([(GroupElement::identity(), 0usize)]);
        let mut sphere_sizes = vec![1];
        let mut frontier = 0..1;
        for r in 1..=radius {
            let mut sphere = Vec::new();
            for i in frontier.clone() {
                for s in 0..sys.rank() as Gen {
                    let y = sys.mul_gen(&elements[i], s);
                    if y.len() == r && !index.contains_key(&y) {
                        index.insert(y.clone(), usize::MAX);
                        sphere.push(y);
                    }
                }
            }
            sphere.sort();
            let start = elements.len();
            if start + sphere.len() > cap {
                return Err(CoxError::ResourceBound(format!(
                    "ball of radius {radius} exceeds {cap} elements"
                )));
            }
            for (k, y) in sphere.iter().enumerate() {
                index.insert(y.clone(), start + k);
            }
            sphere_sizes.push(sphere.len());
            elements.extend(sphere);
            frontier = start..elements.len();
        }
        Ok(Self { radius, elements, sphere_sizes, index })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.index.contains_key(x)
    }

    pub fn position(&self, x: &GroupElement) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter()
    }

    /// Elements of the sphere of radius `r`.
    pub fn sphere(&self, r: usize) -> &[GroupElement] {
        let start: usize = self.sphere_sizes[..r].iter().sum();
        &self.elements[start..start + self.sphere_sizes[r]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn universal_rank_three_spheres() {
        let ball = Ball::new(&CoxeterSystem::universal(3), 6).unwrap();
        assert_eq!(ball.sphere_sizes, vec![1, 3, 6, 12, 24, 48, 96]);
    }

    #[test]
    fn infinite_dihedral_spheres() {
        let ball = Ball::new(&CoxeterSystem::universal(2), 7).unwrap();
        assert!(ball.sphere_sizes[1..].iter().all(|&k| k == 2));
    }

    #[test]
    fn square_is_product_of_two_dihedrals() {
        // 4-cycle a-b-c-d: W = ⟨a,c⟩ × ⟨b,d⟩
        let sys = CoxeterSystem::right_angled(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let ball = Ball::new(&sys, 6).unwrap();
        let d = [1usize, 2, 2, 2, 2, 2, 2];
        for r in 0..=6 {
            let expected: usize = (0..=r).map(|i| d[i] * d[r - i]).sum();
            assert_eq!(ball.sphere_sizes[r], expected, "r = {r}");
        }
    }

    #[test]
    fn finite_group_ball_saturates() {
        let a2 = CoxeterSystem::uniform(2, 3);
        let ball = Ball::new(&a2, 5).unwrap();
        assert_eq!(ball.sphere_sizes, vec![1, 2, 2, 1, 0, 0]);
        assert_eq!(ball.len(), 6);
    }

    #[test]
    fn cap_is_enforced() {
        let err = Ball::with_cap(&CoxeterSystem::universal(3), 5, 10).unwrap_err();
        assert!(matches!(err, CoxError::ResourceBound(_)));
    }
}
