//! The basis formula `φ_Γ` and the reflection formula `ψ`: structural
//! deciders and the formulas themselves for bounded evaluation.

use serde::Serialize;

use super::formula::{Formula, Term, Var};
use crate::endo::F2LinearMap;
use crate::error::{CoxError, Result};
use crate::racg::Order;
use crate::system::{CoxeterSystem, Gen};
use crate::word::GroupElement;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiEvidence {
    /// The map `s_ℓ ↦ A_ℓ` in `F(Γ)`.
    pub map: F2LinearMap,
    /// The basis `T = {α(s)}`: the products of the cores.
    pub basis: Vec<GroupElement>,
    /// `g_ℓ = h_ℓ · ΠA_ℓ · h_ℓ⁻¹`.
    pub conjugators: Vec<GroupElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum PhiResult {
    True(PhiEvidence),
    False { clause: char, detail: String },
}

impl PhiResult {
    pub fn holds(&self) -> bool {
        matches!(self, PhiResult::True(_))
    }
}

impl CoxeterSystem {
    /// Decides `φ_Γ(ḡ)`: (a) involutions, (b) the commutation pattern of
    /// `Γ`, (c) cores linearly independent over `𝔽₂`.
    pub fn phi_gamma_check(&self, g: &[GroupElement]) -> Result<PhiResult> {
        self.require_right_angled()?;
        let n = self.rank();
        if g.len() != n {
            return Err(CoxError::Invalid(format!("expected {n} elements, got {}", g.len())));
        }
        let mut cores = Vec::with_capacity(n);
        let mut conjugators = Vec::with_capacity(n);
        for (l, x) in g.iter().enumerate() {
            if self.element_order(x, None) != Order::Finite(2) {
                return Ok(PhiResult::False { clause: 'a', detail: format!("x{} is not an involution", l + 1) });
            }
            let (h, core) = self.cyclically_reduce(x);
            cores.push(core.support_mask());
            conjugators.push(h);
        }
        for l in 0..n {
            for j in l + 1..n {
                if g[l] == g[j] {
                    return Ok(PhiResult::False { clause: 'b', detail: format!("x{} = x{}", l + 1, j + 1) });
                }
                if self.commute(&g[l], &g[j]) != self.commutes(l as Gen, j as Gen) {
                    return Ok(PhiResult::False {
                        clause: 'b',
                        detail: format!("commutation of x{} and x{} differs from Γ", l + 1, j + 1),
                    });
                }
            }
        }
        let map = F2LinearMap { columns: cores.clone(), clique_preserving: true };
        if !map.is_invertible() {
            return Ok(PhiResult::False { clause: 'c', detail: "cores are linearly dependent".into() });
        }
        let basis = cores
            .iter()
            .map(|&c| self.normalize(&crate::system::mask_iter(c).map(|i| i as Gen).collect::<Vec<_>>()))
            .collect();
        Ok(PhiResult::True(PhiEvidence { map, basis, conjugators }))
    }

    /// `φ_Γ(x_0, …, x_{n−1})` with free variables `0..n` and bound
    /// variables `n..2n`.
    pub fn phi_gamma_formula(&self) -> Formula {
        let n = self.rank() as Var;
        let x = |l: Var| Term::var(l);
        let y = |l: Var| Term::var(n + l);
        let mut parts = Vec::new();
        for l in 0..n {
            parts.push(Formula::ne(x(l), Term::Identity));
            parts.push(Formula::eq(x(l).square(), Term::Identity));
        }
        for l in 0..n {
            for j in 0..n {
                if l == j {
                    continue;
                }
                parts.push(Formula::ne(x(l), x(j)));
                let comm = Formula::eq(x(l).commutator(x(j)), Term::Identity);
                parts.push(if self.commutes(l as Gen, j as Gen) { comm } else { comm.not() });
            }
        }
        for l in 0..n {
            let others: Vec<Var> = (0..n).filter(|&j| j != l).collect();
            for pattern in 0u32..1 << others.len() {
                let rhs = Term::product(
                    others.iter().enumerate().filter(|(k, _)| pattern >> k & 1 == 1).map(|(_, &j)| x(j).conj(y(j))),
                );
                let body = Formula::ne(x(l).conj(y(l)), rhs);
                parts.push(Formula::forall((n..2 * n).collect(), body));
            }
        }
        Formula::And(parts)
    }

    /// `ψ(x)`: the reflections, when `Γ` has the star property.
    pub fn psi_reflection_check(&self, x: &GroupElement) -> Result<bool> {
        self.require_right_angled()?;
        if !self.graph_predicates()?.star_property {
            return Err(CoxError::Scope(
                "Γ lacks the star property, so ψ does not define the reflections".into(),
            ));
        }
        Ok(self.is_reflection(x))
    }

    /// `ψ(v0)` with bound variables 1 and 2.
    pub fn psi_formula(&self) -> Formula {
        let (x, y, z) = (Term::var(0), Term::var(1), Term::var(2));
        let involution = |t: &Term| {
            Formula::And(vec![Formula::eq(t.clone().square(), Term::Identity), Formula::ne(t.clone(), Term::Identity)])
        };
        let commutes = |a: &Term, b: &Term| Formula::eq(a.clone().commutator(b.clone()), Term::Identity);
        let dominated = Formula::forall(
            vec![2],
            Formula::Or(vec![involution(&z).not(), commutes(&z, &x).not(), commutes(&z, &y)]),
        );
        let bad_y = Formula::exists(vec![1], Formula::And(vec![involution(&y), Formula::ne(y.clone(), x.clone()), dominated]));
        Formula::And(vec![involution(&x), bad_y.not()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probes::formula::fo_eval;

    #[test]
    fn phi_on_dinf() {
        let d = CoxeterSystem::universal(2);
        let e = |w: &str| d.element(w).unwrap();
        assert!(d.phi_gamma_check(&[e("a"), e("b")]).unwrap().holds());
        // aba is conjugate to b, bab to a
        assert!(d.phi_gamma_check(&[e("a"), e("aba")]).unwrap().holds());
        assert!(matches!(d.phi_gamma_check(&[e("a"), e("bab")]).unwrap(), PhiResult::False { clause: 'c', .. }));
        assert!(matches!(d.phi_gamma_check(&[e("a"), e("a")]).unwrap(), PhiResult::False { clause: 'b', .. }));
        assert!(matches!(d.phi_gamma_check(&[e("ab"), e("b")]).unwrap(), PhiResult::False { clause: 'a', .. }));
        let f = d.phi_gamma_formula();
        assert!(fo_eval(&d, &f, &[(0, e("a")), (1, e("aba"))], 3).unwrap());
        assert!(!fo_eval(&d, &f, &[(0, e("a")), (1, e("bab"))], 3).unwrap());
    }

    #[test]
    fn psi_basics() {
        let sq = CoxeterSystem::right_angled(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(sq.graph_predicates().unwrap().star_property);
        assert!(sq.psi_reflection_check(&sq.element("a").unwrap()).unwrap());
        assert!(!sq.psi_reflection_check(&sq.element("ab").unwrap()).unwrap());
        let p3 = CoxeterSystem::right_angled(3, &[(0, 1), (1, 2)]);
        assert!(matches!(p3.psi_reflection_check(&p3.element("a").unwrap()), Err(CoxError::Scope(_))));
        let f = sq.psi_formula();
        assert!(fo_eval(&sq, &f, &[(0, sq.element("a").unwrap())], 2).unwrap());
        assert!(!fo_eval(&sq, &f, &[(0, sq.element("ab").unwrap())], 2).unwrap());
    }
}
