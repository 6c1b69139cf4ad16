//! Affine Coxeter groups as semidirect products `ℤ^d ⋊ W₀`, with the sign
//! character, exact reflection length and an encoding by integer tuples.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{CoxError, Result};
use crate::linrep::ReflectionLengthResult;
use crate::matrix::IntMatrix;
use crate::system::{CoxeterSystem, Gen};

/// Largest finite part accepted from a file or produced by closure.
pub const MAX_FINITE_PART: usize = 512;
/// Cap on the elements visited by the bounded reflection search.
pub const AFFINE_SEARCH_CAP: usize = 2_000_000;

/// `(v, q)` acting by `x ↦ v + θ(q)x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AffineElement {
    pub v: Vec<i64>,
    pub q: usize,
}

#[derive(Clone, Debug)]
pub struct AffineGroup {
    name: String,
    system: CoxeterSystem,
    dim: usize,
    /// Names of the elements of `W₀`; index 0 is the identity.
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    theta: Vec<IntMatrix>,
    gens: Vec<AffineElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignReport {
    pub sign: i8,
    pub in_kernel: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelIndexReport {
    pub radius: usize,
    pub elements: usize,
    /// Distinct values of `ε` met in the ball.
    pub index: usize,
    /// `ε(gh) = ε(g)ε(h)` on all pairs of the ball.
    pub multiplicative: bool,
    /// `ε(s g s) = ε(g)` for all `g` in the ball and generators `s`.
    pub normal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundednessReport {
    pub radius: usize,
    /// Maximum of `ℓ_T` over `B_r` for `r = 0..=radius`.
    pub max_per_radius: Vec<usize>,
    pub stable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InterpretationReport {
    /// Codes are `d` vector coordinates followed by the finite-part tag.
    pub code_length: usize,
    /// Entries of every `θ(q)`, row-major, in tag order.
    pub parameters: Vec<i64>,
    pub finite_table: Vec<Vec<usize>>,
    pub round_trips: usize,
    pub pairs: usize,
    pub mismatches: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationReport {
    pub radius: usize,
    pub elements: usize,
    /// Every element of the ball is a product of at most this many reflections.
    pub bound: usize,
    pub holds: bool,
}

impl fmt::Display for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.v.iter().map(i64::to_string).collect();
        write!(f, "(({}), {})", v.join(", "), self.q)
    }
}

impl AffineGroup {
    /// `Ã₁`: `ℤ ⋊ {±1}` with `a = (0, σ)` and `b = (1, σ)`.
    pub fn a1_tilde() -> Self {
        let sys = CoxeterSystem::parse("generators a b\nm a b inf").expect("valid");
        let sigma = IntMatrix::from_rows(&[vec![-1]]);
        Self::from_generators("A1~", sys, 1, vec![(vec![0], sigma.clone()), (vec![1], sigma)]).expect("valid model")
    }

    /// `Ã₂` on the root lattice: `a`, `b` the simple reflections and
    /// `c = (α₁ + α₂, s_{α₁+α₂})`.
    pub fn a2_tilde() -> Self {
        let sys = CoxeterSystem::parse("generators a b c\nm a b 3\nm a c 3\nm b c 3").expect("valid");
        // columns are the images of α₁, α₂
        let s1 = IntMatrix::from_rows(&[vec![-1, 1], vec![0, 1]]);
        let s2 = IntMatrix::from_rows(&[vec![1, 0], vec![1, -1]]);
        let s_theta = &(&s1 * &s2) * &s1;
        Self::from_generators("A2~", sys, 2, vec![(vec![0, 0], s1), (vec![0, 0], s2), (vec![1, 1], s_theta)])
            .expect("valid model")
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "A1~" | "A1" => Ok(Self::a1_tilde()),
            "A2~" | "A2" => Ok(Self::a2_tilde()),
            other => Err(CoxError::Invalid(format!("unknown affine type `{other}` (expected A1~ or A2~)"))),
        }
    }

    /// Closes the linear parts of the generators under multiplication to
    /// get `W₀` (so `θ` is faithful) and validates the model.
    pub fn from_generators(name: &str, system: CoxeterSystem, dim: usize, gens: Vec<(Vec<i64>, IntMatrix)>) -> Result<Self> {
        if gens.len() != system.rank() {
            return Err(CoxError::Invalid(format!("{} generator images for rank {}", gens.len(), system.rank())));
        }
        let mut theta = vec![IntMatrix::identity(dim)];
        let mut labels = vec!["e".to_string()];
        let mut index: HashMap<IntMatrix, usize> = HashMap::from([(IntMatrix::identity(dim), 0)]);
        let mut i = 0;
        while i < theta.len() {
            for (g, (_, m)) in gens.iter().enumerate() {
                let p = &theta[i] * m;
                if !index.contains_key(&p) {
                    if theta.len() == MAX_FINITE_PART {
                        return Err(CoxError::ResourceBound(format!("finite part exceeds {MAX_FINITE_PART} elements")));
                    }
                    index.insert(p.clone(), theta.len());
                    let prefix = if i == 0 { String::new() } else { labels[i].clone() };
                    labels.push(prefix + system.name(g as Gen));
                    theta.push(p);
                }
            }
            i += 1;
        }
        let table = theta
            .iter()
            .map(|x| theta.iter().map(|y| index.get(&(x * y)).copied()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| CoxError::Invalid("linear parts do not close under multiplication".into()))?;
        let gens = gens.into_iter().map(|(v, m)| AffineElement { v, q: index[&m] }).collect();
        Self::validated(name, system, dim, labels, table, theta, gens)
    }

    /// Parses a custom model. Besides `generators` and `m` lines in the
    /// `.cox` syntax the file has
    ///
    /// ```text
    /// dim <d>
    /// element <name> <d·d integers, row-major>   # first one is the identity
    /// table <name> <name·y for each y, in element order>   # optional
    /// gen <letter> <element> <d integers>
    /// ```
    ///
    /// Without `table` lines the product is read off from the matrices.
    pub fn parse_custom(text: &str) -> Result<Self> {
        let mut cox = String::new();
        let mut dim = None;
        let mut labels: Vec<String> = Vec::new();
        let mut theta: Vec<IntMatrix> = Vec::new();
        let mut rows: Vec<(usize, String, Vec<String>)> = Vec::new();
        let mut gen_lines: Vec<(usize, String, String, Vec<i64>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: &str| CoxError::Parse { line: line_no, msg: msg.to_string() };
            let ints = |t: &[&str]| -> Result<Vec<i64>> {
                t.iter().map(|x| x.parse::<i64>().map_err(|_| bad(&format!("bad integer `{x}`")))).collect()
            };
            match toks.first().copied() {
                None => {}
                Some("generators" | "m") => {
                    cox.push_str(line);
                    cox.push('\n');
                }
                Some("dim") => {
                    let d: usize = toks.get(1).and_then(|x| x.parse().ok()).ok_or_else(|| bad("expected `dim <d>`"))?;
                    if d == 0 || d > 8 {
                        return Err(bad("dimension must be between 1 and 8"));
                    }
                    dim = Some(d);
                }
                Some("element") => {
                    let d = dim.ok_or_else(|| bad("`dim` must come first"))?;
                    if toks.len() != 2 + d * d {
                        return Err(bad(&format!("expected a name and {} integers", d * d)));
                    }
                    if labels.iter().any(|l| l == toks[1]) {
                        return Err(bad(&format!("duplicate element `{}`", toks[1])));
                    }
                    let entries = ints(&toks[2..])?;
                    labels.push(toks[1].to_string());
                    theta.push(IntMatrix::from_rows(&entries.chunks(d).map(<[i64]>::to_vec).collect::<Vec<_>>()));
                }
                Some("table") => {
                    if toks.len() < 2 {
                        return Err(bad("expected `table <element> <products…>`"));
                    }
                    rows.push((line_no, toks[1].to_string(), toks[2..].iter().map(|s| s.to_string()).collect()));
                }
                Some("gen") => {
                    let d = dim.ok_or_else(|| bad("`dim` must come first"))?;
                    if toks.len() != 3 + d {
                        return Err(bad(&format!("expected `gen <letter> <element> <{d} integers>`")));
                    }
                    gen_lines.push((line_no, toks[1].to_string(), toks[2].to_string(), ints(&toks[3..])?));
                }
                Some(other) => return Err(bad(&format!("unknown directive `{other}`"))),
            }
        }
        let dim = dim.ok_or(CoxError::Parse { line: 0, msg: "missing `dim` line".into() })?;
        if labels.is_empty() {
            return Err(CoxError::Parse { line: 0, msg: "no `element` lines".into() });
        }
        if labels.len() > MAX_FINITE_PART {
            return Err(CoxError::ResourceBound(format!("finite part exceeds {MAX_FINITE_PART} elements")));
        }
        let system = CoxeterSystem::parse(&cox)?;
        let find = |name: &str, line: usize| {
            labels
                .iter()
                .position(|l| l == name)
                .ok_or_else(|| CoxError::Parse { line, msg: format!("unknown element `{name}`") })
        };
        let table = if rows.is_empty() {
            let index: HashMap<&IntMatrix, usize> = theta.iter().enumerate().map(|(i, m)| (m, i)).collect();
            if index.len() != theta.len() {
                return Err(CoxError::Invalid("repeated matrices need an explicit `table`".into()));
            }
            theta
                .iter()
                .map(|x| theta.iter().map(|y| index.get(&(x * y)).copied()).collect::<Option<Vec<_>>>())
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| CoxError::Invalid("the matrices are not closed under multiplication".into()))?
        } else {
            let mut table = vec![None; labels.len()];
            for (line, x, products) in rows {
                let i = find(&x, line)?;
                if products.len() != labels.len() {
                    return Err(CoxError::Parse { line, msg: format!("expected {} products", labels.len()) });
                }
                if table[i].is_some() {
                    return Err(CoxError::Parse { line, msg: format!("second row for `{x}`") });
                }
                table[i] = Some(products.iter().map(|p| find(p, line)).collect::<Result<Vec<_>>>()?);
            }
            table.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| CoxError::Invalid("the table is missing rows".into()))?
        };
        let mut gens = vec![None; system.rank()];
        for (line, letter, q, v) in gen_lines {
            let g = system.generator(&letter)?;
            if gens[g as usize].is_some() {
                return Err(CoxError::Parse { line, msg: format!("second image for `{letter}`") });
            }
            gens[g as usize] = Some(AffineElement { v, q: find(&q, line)? });
        }
        let gens = gens
            .into_iter()
            .enumerate()
            .map(|(g, x)| x.ok_or_else(|| CoxError::Invalid(format!("no image for generator `{}`", system.name(g as Gen)))))
            .collect::<Result<Vec<_>>>()?;
        Self::validated("custom", system, dim, labels, table, theta, gens)
    }

    fn validated(
        name: &str,
        system: CoxeterSystem,
        dim: usize,
        labels: Vec<String>,
        table: Vec<Vec<usize>>,
        theta: Vec<IntMatrix>,
        gens: Vec<AffineElement>,
    ) -> Result<Self> {
        let k = labels.len();
        if theta.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(CoxError::Invalid(format!("θ matrices must be {dim}×{dim}")));
        }
        if (0..k).any(|x| table[0][x] != x || table[x][0] != x) {
            return Err(CoxError::Invalid(format!("`{}` is not the identity of the table", labels[0])));
        }
        let mut inverse = vec![usize::MAX; k];
        for x in 0..k {
            let mut row = table[x].clone();
            row.sort_unstable();
            if row != (0..k).collect::<Vec<_>>() {
                return Err(CoxError::Invalid(format!("row `{}` of the table is not a permutation", labels[x])));
            }
            inverse[x] = table[x].iter().position(|&p| p == 0).expect("permutation row");
        }
        for x in 0..k {
            for y in 0..k {
                if (0..k).any(|z| table[table[x][y]][z] != table[x][table[y][z]]) {
                    return Err(CoxError::Invalid("the table is not associative".into()));
                }
            }
        }
        for (x, m) in theta.iter().enumerate() {
            if m.det().abs() != 1 {
                return Err(CoxError::Invalid(format!("θ({}) is not invertible over the integers", labels[x])));
            }
        }
        if !theta[0].is_identity() {
            return Err(CoxError::Invalid("θ(e) is not the identity matrix".into()));
        }
        for x in 0..k {
            for y in 0..k {
                if &theta[x] * &theta[y] != theta[table[x][y]] {
                    return Err(CoxError::Invalid(format!(
                        "θ is not a homomorphism at ({}, {})",
                        labels[x], labels[y]
                    )));
                }
            }
        }
        if gens.iter().any(|g| g.v.len() != dim || g.q >= k) {
            return Err(CoxError::Invalid("generator image of the wrong shape".into()));
        }
        let model = Self { name: name.to_string(), system, dim, labels, table, inverse, theta, gens };
        model.check_relations()?;
        Ok(model)
    }

    /// `s² = e` and `o(st) = m(s, t)` exactly, for the generator images.
    fn check_relations(&self) -> Result<()> {
        let n = self.system.rank();
        for s in 0..n {
            if self.gens[s] == self.identity() || !self.multiply(&self.gens[s], &self.gens[s]).is_identity() {
                return Err(CoxError::Invalid(format!("the image of `{}` is not an involution", self.system.name(s as Gen))));
            }
            for t in s + 1..n {
                let order = self.order(&self.multiply(&self.gens[s], &self.gens[t]));
                let expected = self.system.m(s, t).finite().map(u64::from);
                if order != expected {
                    let show = |o: Option<u64>| o.map_or("∞".to_string(), |k| k.to_string());
                    return Err(CoxError::Invalid(format!(
                        "relation check failed: o({}{}) = {} but m = {}",
                        self.system.name(s as Gen),
                        self.system.name(t as Gen),
                        show(order),
                        show(expected)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn finite_order(&self) -> usize {
        self.labels.len()
    }

    pub fn finite_label(&self, q: usize) -> &str {
        &self.labels[q]
    }

    pub fn theta(&self, q: usize) -> &IntMatrix {
        &self.theta[q]
    }

    pub fn generator_images(&self) -> &[AffineElement] {
        &self.gens
    }

    pub fn identity(&self) -> AffineElement {
        AffineElement { v: vec![0; self.dim], q: 0 }
    }

    pub fn multiply(&self, x: &AffineElement, y: &AffineElement) -> AffineElement {
        let w = self.theta[x.q].mul_vec(&y.v);
        AffineElement { v: x.v.iter().zip(w).map(|(a, b)| a + b).collect(), q: self.table[x.q][y.q] }
    }

    /// `(v, q)⁻¹ = (−θ(q⁻¹)v, q⁻¹)`.
    pub fn invert(&self, x: &AffineElement) -> AffineElement {
        let qi = self.inverse[x.q];
        AffineElement { v: self.theta[qi].mul_vec(&x.v).into_iter().map(|a| -a).collect(), q: qi }
    }

    pub fn from_word(&self, word: &[Gen]) -> AffineElement {
        word.iter().fold(self.identity(), |acc, &s| self.multiply(&acc, &self.gens[s as usize]))
    }

    pub fn parse_element(&self, text: &str) -> Result<AffineElement> {
        Ok(self.from_word(&self.system.parse_word(text)?))
    }

    /// The order, or `None` when infinite.
    pub fn order(&self, x: &AffineElement) -> Option<u64> {
        let mut k = 1;
        let mut q = x.q;
        while q != 0 {
            q = self.table[q][x.q];
            k += 1;
        }
        let mut p = x.clone();
        for j in 1..=k {
            if p.is_identity() {
                return Some(j);
            }
            p = self.multiply(&p, x);
        }
        // x^k is a nonzero translation
        None
    }

    /// `ε = det θ(q)`; on the generators this is `−1`, so it agrees with
    /// `(−1)^{ℓ_S}`.
    pub fn epsilon(&self, x: &AffineElement) -> SignReport {
        let sign = self.theta[x.q].det() as i8;
        SignReport { sign, in_kernel: sign == 1 }
    }

    /// The ball of radius `radius` in the model, sphere by sphere.
    pub fn ball(&self, radius: usize) -> Vec<Vec<AffineElement>> {
        let mut seen: HashSet<AffineElement> = HashSet::from([self.identity()]);
        let mut spheres = vec![vec![self.identity()]];
        for _ in 0..radius {
            let mut next = Vec::new();
            for x in spheres.last().expect("nonempty") {
                for g in &self.gens {
                    let y = self.multiply(x, g);
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

    pub fn kernel_index(&self, radius: usize) -> KernelIndexReport {
        let ball: Vec<AffineElement> = self.ball(radius).into_iter().flatten().collect();
        let eps: Vec<i8> = ball.iter().map(|x| self.epsilon(x).sign).collect();
        let labels: HashSet<i8> = eps.iter().copied().collect();
        let multiplicative = ball.iter().zip(&eps).all(|(x, &ex)| {
            ball.iter().zip(&eps).all(|(y, &ey)| self.epsilon(&self.multiply(x, y)).sign == ex * ey)
        });
        let normal = ball.iter().zip(&eps).all(|(x, &ex)| {
            self.gens.iter().all(|s| self.epsilon(&self.multiply(&self.multiply(s, x), s)).sign == ex)
        });
        KernelIndexReport { radius, elements: ball.len(), index: labels.len(), multiplicative, normal }
    }

    /// Finite parts acting as reflections: involutions whose matrix has a
    /// one-dimensional `−1` eigenspace.
    fn reflection_parts(&self) -> Vec<usize> {
        let id = IntMatrix::identity(self.dim);
        (1..self.finite_order())
            .filter(|&q| self.table[q][q] == 0 && self.theta[q].sub(&id).rank() == 1)
            .collect()
    }

    /// Primitive integer vector spanning `ker(θ(q) + I)`.
    fn minus_one_direction(&self, q: usize) -> Vec<i64> {
        let id = IntMatrix::identity(self.dim);
        let m = self.theta[q].sub(&id);
        // columns of θ(q) − I span the −1 eigenline
        let col = (0..self.dim).map(|j| (0..self.dim).map(|i| m[(i, j)]).collect::<Vec<i64>>()).find(|c| c.iter().any(|&x| x != 0)).expect("rank 1");
        let g = col.iter().fold(0i64, |a, &b| gcd(a, b.abs()));
        col.into_iter().map(|x| x / g).collect()
    }

    /// Exact reflection length. The reflections of the model are the
    /// involutions `(v, q)` with `q` a reflection part and `θ(q)v = −v`;
    /// products of `k` of them with finite parts `q₁ ⋯ q_k` realise exactly
    /// the translations in the lattice spanned by the vectors
    /// `θ(q₁⋯q_{i−1}) a_i`, `a_i` spanning the `−1` eigenline of `q_i`.
    pub fn reflection_length(&self, x: &AffineElement) -> Result<usize> {
        let parts = self.reflection_parts();
        let dirs: Vec<Vec<i64>> = parts.iter().map(|&q| self.minus_one_direction(q)).collect();
        let target_sign = self.epsilon(x).sign;
        let max_len = 2 * self.dim + 2;
        // (finite part so far, lattice generators so far)
        let mut layer: Vec<(usize, Vec<Vec<i64>>)> = vec![(0, vec![])];
        for k in 0..=max_len {
            if (k % 2 == 0) == (target_sign == 1) {
                for (q, lat) in &layer {
                    if *q == x.q && lattice_contains(lat, &x.v, self.dim) {
                        return Ok(k);
                    }
                }
            }
            let mut next = Vec::new();
            for (q, lat) in &layer {
                for (i, &r) in parts.iter().enumerate() {
                    let mut l = lat.clone();
                    l.push(self.theta[*q].mul_vec(&dirs[i]));
                    next.push((self.table[*q][r], reduce_lattice(l, self.dim)));
                }
            }
            next.sort();
            next.dedup();
            layer = next;
        }
        Err(CoxError::ResourceBound(format!("no expression with at most {max_len} reflections")))
    }

    /// Reflections `(v, q)` with `‖v‖_∞ ≤ translation_bound`.
    pub fn bounded_reflections(&self, translation_bound: i64) -> Vec<AffineElement> {
        let mut out = Vec::new();
        for q in self.reflection_parts() {
            let a = self.minus_one_direction(q);
            let step = a.iter().map(|x| x.abs()).max().unwrap_or(1).max(1);
            for t in -(translation_bound / step)..=translation_bound / step {
                out.push(AffineElement { v: a.iter().map(|x| x * t).collect(), q });
            }
        }
        out
    }

    /// Breadth-first search over products of bounded reflections, checked
    /// against the exact value. `upper` is `None` when the bound is too
    /// small to reach the element within the exact length.
    pub fn reflection_length_search(&self, x: &AffineElement, translation_bound: i64) -> Result<ReflectionLengthResult> {
        let exact = self.reflection_length(x)?;
        let ts = self.bounded_reflections(translation_bound);
        let mut seen: HashSet<AffineElement> = HashSet::from([self.identity()]);
        let mut queue = VecDeque::from([(self.identity(), 0usize)]);
        let mut upper = None;
        while let Some((y, d)) = queue.pop_front() {
            if y == *x {
                upper = Some(d);
                break;
            }
            if d == exact {
                continue;
            }
            for t in &ts {
                let z = self.multiply(&y, t);
                if seen.len() >= AFFINE_SEARCH_CAP {
                    break;
                }
                if seen.insert(z.clone()) {
                    queue.push_back((z, d + 1));
                }
            }
        }
        Ok(ReflectionLengthResult {
            lower: exact,
            upper,
            exact: upper == Some(exact),
            search_radius: translation_bound as usize,
        })
    }

    /// Maximum of `ℓ_T` over `B_r` for each `r ≤ radius`; `stable` when the
    /// last two agree.
    pub fn reflection_length_profile(&self, radius: usize) -> Result<BoundednessReport> {
        let mut max_per_radius = Vec::with_capacity(radius + 1);
        let mut running = 0;
        for sphere in self.ball(radius) {
            for x in &sphere {
                running = running.max(self.reflection_length(x)?);
            }
            max_per_radius.push(running);
        }
        let stable = radius > 0 && max_per_radius[radius] == max_per_radius[radius - 1];
        Ok(BoundednessReport { radius, max_per_radius, stable })
    }

    /// Every element of the ball gets a certified reflection length; the
    /// bound is their maximum.
    pub fn involution_generation_check(&self, radius: usize) -> Result<GenerationReport> {
        let ball: Vec<AffineElement> = self.ball(radius).into_iter().flatten().collect();
        let lengths = ball.iter().map(|x| self.reflection_length(x)).collect::<Result<Vec<_>>>()?;
        let bound = lengths.iter().copied().max().unwrap_or(0);
        Ok(GenerationReport { radius, elements: ball.len(), bound, holds: lengths.len() == ball.len() })
    }

    pub fn encode(&self, x: &AffineElement) -> Vec<i64> {
        let mut c = x.v.clone();
        c.push(x.q as i64);
        c
    }

    pub fn decode(&self, code: &[i64]) -> Result<AffineElement> {
        let bad = || CoxError::Invalid(format!("not a code: {code:?}"));
        let (&tag, v) = code.split_last().ok_or_else(bad)?;
        if v.len() != self.dim || tag < 0 || tag as usize >= self.finite_order() {
            return Err(bad());
        }
        Ok(AffineElement { v: v.to_vec(), q: tag as usize })
    }

    /// The parameters of the interpretation: all entries of all `θ(q)`.
    pub fn parameters(&self) -> Vec<i64> {
        self.theta.iter().flat_map(|m| m.to_rows().concat()).collect()
    }

    /// Product of codes using only the parameter list and the finite table:
    /// `cᵢ = aᵢ + Σⱼ A(q)ᵢⱼ bⱼ`.
    pub fn code_multiply(&self, params: &[i64], a: &[i64], b: &[i64]) -> Vec<i64> {
        let d = self.dim;
        let (qa, qb) = (a[d] as usize, b[d] as usize);
        let block = &params[qa * d * d..(qa + 1) * d * d];
        let mut c: Vec<i64> = (0..d).map(|i| a[i] + (0..d).map(|j| block[i * d + j] * b[j]).sum::<i64>()).collect();
        c.push(self.table[qa][qb] as i64);
        c
    }

    /// Round-trips the ball of radius `radius` through codes and compares
    /// code multiplication with direct multiplication on random pairs of
    /// words of length at most `word_len`.
    pub fn interpret(&self, radius: usize, pairs: usize, word_len: usize, rng: &mut impl Rng) -> Result<InterpretationReport> {
        let params = self.parameters();
        let mut round_trips = 0;
        for x in self.ball(radius).into_iter().flatten() {
            if self.decode(&self.encode(&x))? != x {
                return Err(CoxError::Invalid(format!("code of {x} does not round-trip")));
            }
            round_trips += 1;
        }
        let n = self.system.rank() as Gen;
        let random = |rng: &mut dyn rand::RngCore| {
            let len = rng.gen_range(0..=word_len);
            let w: Vec<Gen> = (0..len).map(|_| rng.gen_range(0..n)).collect();
            self.from_word(&w)
        };
        let mut mismatches = 0;
        for _ in 0..pairs {
            let (x, y) = (random(rng), random(rng));
            let via_codes = self.decode(&self.code_multiply(&params, &self.encode(&x), &self.encode(&y)))?;
            if via_codes != self.multiply(&x, &y) {
                mismatches += 1;
            }
        }
        Ok(InterpretationReport {
            code_length: self.dim + 1,
            parameters: params,
            finite_table: self.table.clone(),
            round_trips,
            pairs,
            mismatches,
        })
    }

    /// The `.cox` type of the model followed by its data, in the custom
    /// file syntax.
    pub fn serialize(&self) -> String {
        let mut out = self.system.serialize();
        out.push_str(&format!("dim {}\n", self.dim));
        for (label, m) in self.labels.iter().zip(&self.theta) {
            let e: Vec<String> = m.to_rows().concat().iter().map(i64::to_string).collect();
            out.push_str(&format!("element {label} {}\n", e.join(" ")));
        }
        for (label, row) in self.labels.iter().zip(&self.table) {
            let r: Vec<&str> = row.iter().map(|&q| self.labels[q].as_str()).collect();
            out.push_str(&format!("table {label} {}\n", r.join(" ")));
        }
        for (s, g) in self.gens.iter().enumerate() {
            let v: Vec<String> = g.v.iter().map(i64::to_string).collect();
            out.push_str(&format!("gen {} {} {}\n", self.system.name(s as Gen), self.labels[g.q], v.join(" ")));
        }
        out
    }
}

impl AffineElement {
    pub fn is_identity(&self) -> bool {
        self.q == 0 && self.v.iter().all(|&x| x == 0)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Column-style Hermite reduction: a basis in echelon form (each vector's
/// first nonzero coordinate strictly after the previous one's).
fn reduce_lattice(mut gens: Vec<Vec<i64>>, dim: usize) -> Vec<Vec<i64>> {
    gens.retain(|g| g.iter().any(|&x| x != 0));
    let mut basis = Vec::new();
    for row in 0..dim {
        loop {
            let nz: Vec<usize> = (0..gens.len()).filter(|&i| gens[i][row] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| gens[i][row].abs()).expect("nonempty");
            let pivot = gens[p].clone();
            for &i in &nz {
                if i != p {
                    let f = gens[i][row] / pivot[row];
                    for (x, y) in gens[i].iter_mut().zip(&pivot) {
                        *x -= f * y;
                    }
                }
            }
        }
        if let Some(i) = gens.iter().position(|g| g[row] != 0) {
            let mut g = gens.swap_remove(i);
            if g[row] < 0 {
                g.iter_mut().for_each(|x| *x = -*x);
            }
            basis.push(g);
        }
        gens.retain(|g| g.iter().any(|&x| x != 0));
    }
    basis
}

fn lattice_contains(basis: &[Vec<i64>], v: &[i64], dim: usize) -> bool {
    let mut r = v.to_vec();
    for b in basis {
        let row = (0..dim).find(|&i| b[i] != 0).expect("nonzero basis vector");
        if r[row] % b[row] != 0 {
            return false;
        }
        let f = r[row] / b[row];
        for (x, y) in r.iter_mut().zip(b) {
            *x -= f * y;
        }
    }
    r.iter().all(|&x| x == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_arithmetic() {
        let g = AffineGroup::a1_tilde();
        let ab = g.parse_element("ab").unwrap();
        assert_eq!(ab, AffineElement { v: vec![-1], q: 0 });
        assert_eq!(g.order(&ab), None);
        let (k, m) = (AffineElement { v: vec![5], q: 1 }, AffineElement { v: vec![2], q: 1 });
        assert_eq!(g.multiply(&k, &m), AffineElement { v: vec![3], q: 0 });
        for x in g.ball(5).into_iter().flatten() {
            assert!(g.multiply(&x, &g.invert(&x)).is_identity());
            assert_eq!(g.multiply(&g.identity(), &x), x);
        }
        assert_eq!(g.reflection_length(&g.parse_element("a").unwrap()).unwrap(), 1);
        assert_eq!(g.reflection_length(&AffineElement { v: vec![1], q: 0 }).unwrap(), 2);
        assert_eq!(g.reflection_length(&g.identity()).unwrap(), 0);
    }

    #[test]
    fn a2_relations_and_signs() {
        let g = AffineGroup::a2_tilde();
        assert_eq!(g.finite_order(), 6);
        for s in ["a", "b", "c"] {
            assert_eq!(g.epsilon(&g.parse_element(s).unwrap()).sign, -1);
        }
        assert_eq!(g.epsilon(&g.parse_element("ab").unwrap()).sign, 1);
        let r = g.kernel_index(6);
        assert_eq!((r.index, r.multiplicative, r.normal), (2, true, true));
    }

    #[test]
    fn lattice_membership() {
        let b = reduce_lattice(vec![vec![2, 0], vec![0, 3], vec![4, 3]], 2);
        assert!(lattice_contains(&b, &[2, 3], 2));
        assert!(lattice_contains(&b, &[-4, 9], 2));
        assert!(!lattice_contains(&b, &[1, 0], 2));
        assert!(!lattice_contains(&b, &[0, 1], 2));
    }

    #[test]
    fn custom_errors() {
        let singular = "generators a b\nm a b inf\ndim 1\nelement e 1\nelement z 0\ngen a z 0\ngen b z 1";
        assert!(matches!(AffineGroup::parse_custom(singular), Err(CoxError::Invalid(_))));
        let wrong_type = "generators a b\nm a b 3\ndim 1\nelement e 1\nelement s -1\ngen a s 0\ngen b s 1";
        let err = AffineGroup::parse_custom(wrong_type).unwrap_err().to_string();
        assert!(err.contains("relation check failed"), "{err}");
        let g = AffineGroup::a1_tilde();
        let back = AffineGroup::parse_custom(&g.serialize()).unwrap();
        assert_eq!(back.serialize(), g.serialize());
    }
}
