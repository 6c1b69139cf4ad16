//! Walls, roots and reflection subgroups of right-angled Coxeter groups.
//!
//! Chambers are group elements. The wall of a reflection `t = h s h⁻¹` is
//! bounded by the chambers `C(t) = h · W_{st(s)}`, and the root of `t`
//! containing a chamber `w` is read off from the sign of `ℓ(tw) − ℓ(w)`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::ball::Ball;
use crate::error::{CoxError, Result};
use crate::racg::Order;
use crate::system::{mask_iter, CoxeterSystem, Gen};
use crate::word::GroupElement;

/// Step cap for the canonical-generator descent.
pub const DESCENT_CAP: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Reflection {
    pub element: GroupElement,
    /// The generator `s` with `element ∈ s^W`.
    pub letter: Gen,
    /// Shortest `h` with `element = h s h⁻¹` (the minimal member of `C(t)`).
    pub conjugator: GroupElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// A root: one of the two halfspaces of a reflection. `Plus` is the
/// halfspace containing the base chamber `e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootSide {
    pub reflection: Reflection,
    pub sign: Sign,
    pub witness: GroupElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeometricSetReport {
    pub reflections: Vec<Reflection>,
    pub geometric: bool,
    /// Indices `(t, u, v)` with `o(tu) = o(tv) = ∞` and `H(t,u) ≠ H(t,v)`.
    pub failing_triple: Option<(usize, usize, usize)>,
    /// One root per reflection when geometric.
    pub roots: Vec<Sign>,
}

impl CoxeterSystem {
    /// Reads a reflection; fails if `x` is not conjugate to a generator.
    pub fn reflection(&self, x: &GroupElement) -> Result<Reflection> {
        self.require_right_angled()?;
        let letter = self
            .reflection_letter(x)
            .ok_or_else(|| CoxError::Invalid(format!("`{}` is not a reflection", self.format(x))))?;
        let (h, _) = self.cyclically_reduce(x);
        let conjugator = self.min_double_coset(&h, 0, self.star_mask(letter));
        Ok(Reflection { element: x.clone(), letter, conjugator })
    }

    pub fn reflection_from_word(&self, text: &str) -> Result<Reflection> {
        let x = self.element(text)?;
        self.reflection(&x)
    }

    /// `h s h⁻¹` as a reflection.
    pub fn reflection_conjugate(&self, s: Gen, h: &GroupElement) -> Reflection {
        let element = self.conjugate(&self.gen(s), h);
        let conjugator = self.min_double_coset(h, 0, self.star_mask(s));
        Reflection { element, letter: s, conjugator }
    }

    /// `{s} ∪ lk(s)`.
    pub fn star_mask(&self, s: Gen) -> u64 {
        self.commute_mask(s) | 1 << s
    }

    /// Minimal element of `W_I · g · W_J` for generator masks `I`, `J`.
    pub fn min_double_coset(&self, g: &GroupElement, left: u64, right: u64) -> GroupElement {
        let mut g = g.clone();
        'outer: loop {
            for s in mask_iter(left) {
                let y = self.gen_mul(s as Gen, &g);
                if y.len() < g.len() {
                    g = y;
                    continue 'outer;
                }
            }
            for s in mask_iter(right) {
                let y = self.mul_gen(&g, s as Gen);
                if y.len() < g.len() {
                    g = y;
                    continue 'outer;
                }
            }
            return g;
        }
    }

    /// Side of the wall of `t` containing chamber `w`.
    pub fn side_of(&self, t: &Reflection, w: &GroupElement) -> Sign {
        if self.multiply(&t.element, w).len() > w.len() {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// `w` is one of the chambers adjacent to the wall of `t`.
    pub fn on_wall(&self, t: &Reflection, w: &GroupElement) -> bool {
        let winv = self.inverse(w);
        self.product([&winv, &t.element, w]).len() == 1
    }

    pub fn root_side(&self, t: &Reflection, w: &GroupElement) -> RootSide {
        RootSide { reflection: t.clone(), sign: self.side_of(t, w), witness: w.clone() }
    }

    /// `ℓ(c, C(t))`.
    pub fn chamber_wall_distance(&self, c: &GroupElement, t: &Reflection) -> usize {
        let g = self.multiply(&self.inverse(c), &t.conjugator);
        self.min_double_coset(&g, 0, self.star_mask(t.letter)).len()
    }

    /// `dist(t, u) = ℓ(C(t), C(u))`, the length of the minimal element of
    /// the double coset `W_{st(s)} h_t⁻¹ h_u W_{st(s')}`.
    pub fn wall_distance(&self, t: &Reflection, u: &Reflection) -> usize {
        let g = self.multiply(&self.inverse(&t.conjugator), &u.conjugator);
        self.min_double_coset(&g, self.star_mask(t.letter), self.star_mask(u.letter)).len()
    }

    /// Exhaustive `min ℓ(x⁻¹y)` over chambers `x ∈ C(t)`, `y ∈ C(u)` inside
    /// the ball of radius `radius`.
    pub fn wall_distance_in_ball(&self, t: &Reflection, u: &Reflection, ball: &Ball) -> Option<usize> {
        let ct: Vec<&GroupElement> = ball.iter().filter(|w| self.on_wall(t, w)).collect();
        let cu: Vec<&GroupElement> = ball.iter().filter(|w| self.on_wall(u, w)).collect();
        let mut best = None;
        for x in &ct {
            let xinv = self.inverse(x);
            for y in &cu {
                let d = self.multiply(&xinv, y).len();
                best = Some(best.map_or(d, |b: usize| b.min(d)));
            }
        }
        best
    }

    /// `H(t, u)`: the side of the wall of `t` containing `C(u)`, read at the
    /// minimal chamber of `C(u)`. Meaningful when `o(tu) = ∞`.
    pub fn wall_side(&self, t: &Reflection, u: &Reflection) -> Sign {
        self.side_of(t, &u.conjugator)
    }

    pub fn reflections_commute(&self, t: &Reflection, u: &Reflection) -> bool {
        self.commute(&t.element, &u.element)
    }

    fn infinite_pair(&self, t: &Reflection, u: &Reflection) -> bool {
        t.element != u.element
            && self.element_order(&self.multiply(&t.element, &u.element), None) == Order::Infinite
    }

    pub fn is_geometric_set(&self, set: &[Reflection]) -> GeometricSetReport {
        let n = set.len();
        let inf: Vec<Vec<bool>> =
            (0..n).map(|i| (0..n).map(|j| self.infinite_pair(&set[i], &set[j])).collect()).collect();
        let side: Vec<Vec<Sign>> = (0..n)
            .map(|i| (0..n).map(|j| self.wall_side(&set[i], &set[j])).collect())
            .collect();
        for t in 0..n {
            let partners: Vec<usize> = (0..n).filter(|&u| inf[t][u]).collect();
            for (k, &u) in partners.iter().enumerate() {
                for &v in &partners[k + 1..] {
                    if side[t][u] != side[t][v] {
                        return GeometricSetReport {
                            reflections: set.to_vec(),
                            geometric: false,
                            failing_triple: Some((t, u, v)),
                            roots: Vec::new(),
                        };
                    }
                }
            }
        }
        let roots = (0..n)
            .map(|t| (0..n).find(|&u| inf[t][u]).map_or(Sign::Plus, |u| side[t][u]))
            .collect();
        GeometricSetReport { reflections: set.to_vec(), geometric: true, failing_triple: None, roots }
    }

    /// Canonical generators `R_U(c)` of `U = ⟨T⟩` by descent: a generator
    /// `r` is replaced by `trt` (`t` another current generator) whenever
    /// that brings its wall strictly closer to `c`. The result is checked to
    /// be geometric with every root `H_t` containing `c`.
    pub fn canonical_generators(&self, set: &[Reflection], c: &GroupElement) -> Result<Vec<Reflection>> {
        Ok(self.canonical_generators_traced(set, c)?.0)
    }

    /// As [`canonical_generators`](Self::canonical_generators), also
    /// returning each output as a word in the indices of `set`.
    pub fn canonical_generators_traced(
        &self,
        set: &[Reflection],
        c: &GroupElement,
    ) -> Result<(Vec<Reflection>, Vec<Vec<usize>>)> {
        self.require_right_angled()?;
        let mut gens: Vec<(Reflection, Vec<usize>)> = Vec::new();
        let mut seen = HashSet::new();
        for (i, r) in set.iter().enumerate() {
            if seen.insert(r.element.clone()) {
                gens.push((r.clone(), vec![i]));
            }
        }
        let mut steps = 0;
        'descent: loop {
            let dists: Vec<usize> = gens.iter().map(|(r, _)| self.chamber_wall_distance(c, r)).collect();
            let mut order: Vec<usize> = (0..gens.len()).collect();
            order.sort_by(|&i, &j| dists[j].cmp(&dists[i]).then_with(|| gens[i].0.element.cmp(&gens[j].0.element)));
            for &i in &order {
                for j in 0..gens.len() {
                    if i == j {
                        continue;
                    }
                    let (r, t) = (&gens[i].0, &gens[j].0);
                    let moved = self.reflection_conjugate(r.letter, &self.multiply(&t.element, &r.conjugator));
                    if self.chamber_wall_distance(c, &moved) < dists[i] {
                        steps += 1;
                        if steps > DESCENT_CAP {
                            return Err(CoxError::ResourceBound(format!(
                                "canonical-generator descent exceeded {DESCENT_CAP} steps"
                            )));
                        }
                        let tw = &gens[j].1;
                        let word = reduce_involutions(tw.iter().chain(&gens[i].1).chain(tw.iter().rev()).copied());
                        gens[i] = (moved, word);
                        let mut seen = HashSet::new();
                        gens.retain(|(r, _)| seen.insert(r.element.clone()));
                        continue 'descent;
                    }
                }
            }
            break;
        }
        let (gens, words): (Vec<Reflection>, Vec<Vec<usize>>) = gens.into_iter().unzip();
        if !self.is_fundamental_at(&gens, c) {
            return Err(CoxError::Invalid(
                "descent stopped at a set that does not bound a fundamental domain".into(),
            ));
        }
        Ok((gens, words))
    }

    /// `R` is geometric and all roots `H(t, u)` contain `c`, so that
    /// `∩ H_t ∋ c` is a fundamental domain for `⟨R⟩`.
    pub fn is_fundamental_at(&self, set: &[Reflection], c: &GroupElement) -> bool {
        let n = set.len();
        for t in 0..n {
            let home = self.side_of(&set[t], c);
            for u in 0..n {
                if self.infinite_pair(&set[t], &set[u]) && self.wall_side(&set[t], &set[u]) != home {
                    return false;
                }
            }
        }
        self.is_geometric_set(set).geometric
    }
}

/// Cancels adjacent equal indices; every member of the input set is an involution.
fn reduce_involutions(word: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for i in word {
        if out.last() == Some(&i) {
            out.pop();
        } else {
            out.push(i);
        }
    }
    out
}

/// A reflection subgroup `U = ⟨T⟩`, held through its canonical generators
/// at the base chamber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReflectionSubgroup {
    pub generators: Vec<Reflection>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fold {
    /// The chamber of `D = ∩ H_t` in the orbit `U·w`.
    pub representative: GroupElement,
    /// Indices of the generators applied, in order.
    pub steps: Vec<usize>,
}

impl ReflectionSubgroup {
    pub fn new(sys: &CoxeterSystem, set: &[Reflection]) -> Result<Self> {
        let generators = sys.canonical_generators(set, &GroupElement::identity())?;
        Ok(Self { generators })
    }

    /// Folds `w` into the fundamental domain: while some generator `t` has
    /// `ℓ(tw) < ℓ(w)`, replace `w` by `tw`.
    pub fn fold(&self, sys: &CoxeterSystem, w: &GroupElement) -> Fold {
        let mut w = w.clone();
        let mut steps = Vec::new();
        'outer: loop {
            for (i, t) in self.generators.iter().enumerate() {
                let tw = sys.multiply(&t.element, &w);
                if tw.len() < w.len() {
                    w = tw;
                    steps.push(i);
                    continue 'outer;
                }
            }
            return Fold { representative: w, steps };
        }
    }

    pub fn representative(&self, sys: &CoxeterSystem, w: &GroupElement) -> GroupElement {
        self.fold(sys, w).representative
    }

    pub fn contains(&self, sys: &CoxeterSystem, w: &GroupElement) -> bool {
        self.fold(sys, w).representative.is_identity()
    }

    /// Writes a member of `U` as a product of canonical generators.
    pub fn express(&self, sys: &CoxeterSystem, w: &GroupElement) -> Option<Vec<usize>> {
        let f = self.fold(sys, w);
        f.representative.is_identity().then_some(f.steps)
    }

    /// Chambers of `D_U(c)` within distance `radius` of `c`: the component
    /// of `c` after deleting all panels on walls of reflections in `U`.
    pub fn domain_ball(&self, sys: &CoxeterSystem, c: &GroupElement, radius: usize) -> Vec<GroupElement> {
        let cinv = sys.inverse(c);
        let mut seen: HashSet<GroupElement> = HashSet::from([c.clone()]);
        let mut queue = VecDeque::from([c.clone()]);
        let mut out = Vec::new();
        while let Some(w) = queue.pop_front() {
            out.push(w.clone());
            for s in 0..sys.rank() as Gen {
                let ws = sys.mul_gen(&w, s);
                if seen.contains(&ws) || sys.multiply(&cinv, &ws).len() > radius {
                    continue;
                }
                let wall = sys.conjugate(&sys.gen(s), &w);
                if self.contains(sys, &wall) {
                    continue;
                }
                seen.insert(ws.clone());
                queue.push_back(ws);
            }
        }
        out.sort();
        out
    }

    /// Some `u ∈ U` of length at most `radius` with `{u r u⁻¹ : r ∈ a} = b`.
    pub fn conjugating_element(
        &self,
        sys: &CoxeterSystem,
        a: &[Reflection],
        b: &[Reflection],
        radius: usize,
    ) -> Result<Option<GroupElement>> {
        let target: HashSet<&GroupElement> = b.iter().map(|r| &r.element).collect();
        if a.len() != b.len() {
            return Ok(None);
        }
        let ball = Ball::new(sys, radius)?;
        for u in ball.iter() {
            if !self.contains(sys, u) {
                continue;
            }
            let moved: HashSet<GroupElement> = a.iter().map(|r| sys.conjugate(&r.element, u)).collect();
            if moved.len() == target.len() && moved.iter().all(|x| target.contains(x)) {
                return Ok(Some(u.clone()));
            }
        }
        Ok(None)
    }
}
