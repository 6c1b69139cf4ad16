//! The acceptance checks, grouped into named suites. Each check compares
//! the structural algorithms with an independent oracle (integer matrices
//! of the geometric representation, brute-force search, direct arithmetic).

use std::collections::{HashMap, HashSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::affine::AffineGroup;
use crate::ball::Ball;
use crate::endo::EndoKind;
use crate::error::CoxError;
use crate::linrep::ReflectionRep;
use crate::matrix::IntMatrix;
use crate::probes::{BoundedModel, DomainOutcome};
use crate::raag::{GammaPlus, Raag};
use crate::racg::Order;
use crate::system::{CoxeterSystem, Gen};
use crate::walls::{Reflection, ReflectionSubgroup};
use crate::word::GroupElement;

pub const SUITES: [&str; 7] = ["word-oracle", "geometry", "sim", "probes", "affine", "raag", "all"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub criterion: u8,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    pub seconds: f64,
    pub limit_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn status(&self) -> Status {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if self.checks.iter().any(|c| c.status == Status::Inconclusive) {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }
}

enum Failure {
    Property(String),
    Error(CoxError),
}

impl From<CoxError> for Failure {
    fn from(e: CoxError) -> Self {
        Failure::Error(e)
    }
}

type Outcome = std::result::Result<String, Failure>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), Failure> {
    if cond {
        Ok(())
    } else {
        Err(Failure::Property(msg()))
    }
}

struct Criterion {
    id: u8,
    name: &'static str,
    suite: &'static str,
    limit_seconds: f64,
    run: fn(u64) -> Outcome,
}

const CRITERIA: [Criterion; 10] = [
    Criterion { id: 1, name: "word oracle", suite: "word-oracle", limit_seconds: 60.0, run: word_oracle },
    Criterion { id: 2, name: "orders and centralizers", suite: "word-oracle", limit_seconds: 120.0, run: orders_and_centralizers },
    Criterion { id: 3, name: "geometric sets", suite: "geometry", limit_seconds: 120.0, run: geometric_sets },
    Criterion { id: 4, name: "determinant obstruction", suite: "sim", limit_seconds: 10.0, run: determinants },
    Criterion { id: 5, name: "complexity monotonicity", suite: "sim", limit_seconds: 120.0, run: complexity },
    Criterion { id: 6, name: "definability checkers", suite: "probes", limit_seconds: 120.0, run: definability },
    Criterion { id: 7, name: "affine models", suite: "affine", limit_seconds: 60.0, run: affine },
    Criterion { id: 8, name: "raag bridge", suite: "raag", limit_seconds: 60.0, run: raag_bridge },
    Criterion { id: 9, name: "unsuperstability tree", suite: "probes", limit_seconds: 300.0, run: tree },
    Criterion { id: 10, name: "domain probe", suite: "probes", limit_seconds: 60.0, run: domain },
];

/// Runs one criterion by number.
pub fn run_criterion(id: u8, seed: u64) -> Option<CheckReport> {
    CRITERIA.iter().find(|c| c.id == id).map(|c| execute(c, seed))
}

fn execute(c: &Criterion, seed: u64) -> CheckReport {
    let start = Instant::now();
    let outcome = (c.run)(seed);
    let seconds = start.elapsed().as_secs_f64();
    let (mut status, mut detail) = match outcome {
        Ok(d) => (Status::Pass, d),
        Err(Failure::Property(d)) => (Status::Fail, d),
        Err(Failure::Error(e @ (CoxError::ResourceBound(_) | CoxError::BudgetExhausted(_)))) => {
            (Status::Inconclusive, e.to_string())
        }
        Err(Failure::Error(e)) => (Status::Fail, e.to_string()),
    };
    if status == Status::Pass && seconds > c.limit_seconds {
        status = Status::Fail;
        detail = format!("exceeded the {}s limit; {detail}", c.limit_seconds);
    }
    CheckReport { criterion: c.id, name: c.name, status, detail, seconds, limit_seconds: c.limit_seconds }
}

/// Runs a named suite; `None` for an unknown name.
pub fn run_suite(name: &str, seed: u64) -> Option<SuiteReport> {
    if !SUITES.contains(&name) {
        return None;
    }
    let checks = CRITERIA.iter().filter(|c| name == "all" || c.suite == name).map(|c| execute(c, seed)).collect();
    Some(SuiteReport { suite: name.to_string(), seed, checks })
}

fn right_angled_cycle(n: usize) -> CoxeterSystem {
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    CoxeterSystem::right_angled(n, &edges)
}

fn path(n: usize) -> CoxeterSystem {
    let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    CoxeterSystem::right_angled(n, &edges)
}

fn all_words(rank: usize, max_len: usize) -> Vec<Vec<Gen>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<Gen>> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..rank as Gen).map(move |s| {
                    let mut u = w.clone();
                    u.push(s);
                    u
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn word_oracle(_seed: u64) -> Outcome {
    let systems = [
        ("D∞", CoxeterSystem::universal(2)),
        ("U3", CoxeterSystem::universal(3)),
        ("P3", path(3)),
        ("C4", right_angled_cycle(4)),
    ];
    let mut pairs = 0u64;
    for (label, sys) in &systems {
        let rep = ReflectionRep::new(sys)?;
        let words = all_words(sys.rank(), 5);
        let mut by_nf: HashMap<GroupElement, IntMatrix> = HashMap::new();
        let mut by_matrix: HashMap<IntMatrix, GroupElement> = HashMap::new();
        for w in &words {
            let nf = sys.normalize(w);
            let m = rep.matrix_of_word(w);
            let reduced = crate::tits::reduce(sys, w, crate::tits::DEFAULT_BUDGET)?;
            ensure(reduced.len() == nf.len(), || format!("{label}: Tits length differs for {}", sys.format_word(w)))?;
            ensure(by_nf.entry(nf.clone()).or_insert_with(|| m.clone()) == &m, || {
                format!("{label}: equal normal forms, different matrices at {}", sys.format_word(w))
            })?;
            ensure(by_matrix.entry(m).or_insert_with(|| nf.clone()) == &nf, || {
                format!("{label}: equal matrices, different normal forms at {}", sys.format_word(w))
            })?;
        }
        let ball = Ball::new(sys, 5)?;
        ensure(by_nf.len() == ball.len(), || format!("{label}: {} classes but |B_5| = {}", by_nf.len(), ball.len()))?;
        pairs += (ball.len() * ball.len()) as u64;
    }
    let u3 = Ball::new(&CoxeterSystem::universal(3), 6)?;
    for r in 1..=6 {
        let expected = 3 << (r - 1);
        ensure(u3.sphere_sizes[r] == expected, || format!("U3 sphere {r} has {} elements", u3.sphere_sizes[r]))?;
    }
    Ok(format!("4 systems, {pairs} pairs in B_5 agree; U3 spheres 3·2^(r−1) for r ≤ 6"))
}

/// Order from matrix powers: 1, 2, or none up to 32 (`None`).
fn matrix_order(m: &IntMatrix) -> Option<u64> {
    let mut p = m.clone();
    for k in 1..=32 {
        if p.is_identity() {
            return Some(k);
        }
        p = p.checked_mul(m)?;
    }
    None
}

fn orders_and_centralizers(_seed: u64) -> Outcome {
    let systems = [("U3", CoxeterSystem::universal(3)), ("C5", right_angled_cycle(5)), ("P4", path(4))];
    let mut total = 0;
    for (label, sys) in &systems {
        ensure(sys.is_irreducible(), || format!("{label} is reducible"))?;
        let rep = ReflectionRep::new(sys)?;
        let ball = Ball::new(sys, 6)?;
        let mats: Vec<IntMatrix> = ball.iter().map(|x| rep.matrix(x)).collect();
        for (i, g) in ball.iter().enumerate() {
            let structural = sys.element_order(g, None);
            let oracle = match matrix_order(&mats[i]) {
                Some(k) => Order::Finite(k),
                None => Order::Infinite,
            };
            ensure(structural == oracle, || format!("{label}: order of {} is {structural}, matrices say {oracle}", sys.format(g)))?;
            let c = sys.centralizer(g)?;
            for (j, y) in ball.iter().enumerate() {
                let brute = &mats[i] * &mats[j] == &mats[j] * &mats[i];
                ensure(c.contains(sys, y) == brute, || {
                    format!("{label}: centralizer of {} disagrees at {}", sys.format(g), sys.format(y))
                })?;
            }
        }
        total += ball.len();
    }
    Ok(format!("U3, C5, P4: orders and centralizers agree on all {total} elements of B_6"))
}

fn refl(sys: &CoxeterSystem, w: &str) -> std::result::Result<Reflection, Failure> {
    Ok(sys.reflection_from_word(w)?)
}

fn same_set(a: &[Reflection], b: &[Reflection]) -> bool {
    let x: HashSet<&GroupElement> = a.iter().map(|r| &r.element).collect();
    let y: HashSet<&GroupElement> = b.iter().map(|r| &r.element).collect();
    x == y
}

fn geometric_sets(seed: u64) -> Outcome {
    let d = CoxeterSystem::universal(2);
    let e = GroupElement::identity();
    let t = vec![refl(&d, "a")?, refl(&d, "b")?, refl(&d, "aba")?];
    let report = d.is_geometric_set(&t);
    ensure(!report.geometric && report.failing_triple == Some((0, 1, 2)), || format!("{{a, b, aba}}: {report:?}"))?;
    let r = d.canonical_generators(&t, &e)?;
    let ab = [refl(&d, "a")?, refl(&d, "b")?];
    let u = ReflectionSubgroup { generators: r.clone() };
    ensure(
        same_set(&r, &ab) || u.conjugating_element(&d, &r, &ab, 6)?.is_some(),
        || "canonical generators of {a, b, aba} are not conjugate to {a, b}".into(),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let systems = [CoxeterSystem::universal(3), right_angled_cycle(4), path(3), right_angled_cycle(5)];
    let mut sets = 0;
    for sys in &systems {
        let n = sys.rank() as Gen;
        for _ in 0..50 {
            let size = rng.gen_range(1..=4);
            let t: Vec<Reflection> = (0..size)
                .map(|_| {
                    let len = rng.gen_range(0..=3);
                    let h: Vec<Gen> = (0..len).map(|_| rng.gen_range(0..n)).collect();
                    sys.reflection_conjugate(rng.gen_range(0..n), &sys.normalize(&h))
                })
                .collect();
            let (r, words) = sys.canonical_generators_traced(&t, &e)?;
            ensure(r.len() <= t.len(), || format!("|R| = {} > |T| = {}", r.len(), t.len()))?;
            ensure(sys.is_geometric_set(&r).geometric, || "R is not geometric".into())?;
            for (x, w) in r.iter().zip(&words) {
                let p = sys.product(w.iter().map(|&i| &t[i].element));
                ensure(p == x.element, || format!("{} is not the traced product", sys.format(&x.element)))?;
            }
            let u = ReflectionSubgroup { generators: r.clone() };
            for x in &t {
                ensure(u.contains(sys, &x.element), || format!("{} ∉ ⟨R⟩", sys.format(&x.element)))?;
            }
            sets += 1;
        }
    }

    let u3 = CoxeterSystem::universal(3);
    let desk: Vec<(&CoxeterSystem, Vec<&str>)> = vec![
        (&d, vec!["a", "bab"]),
        (&d, vec!["a", "b"]),
        (&u3, vec!["a", "bcb"]),
        (&u3, vec!["a", "b", "c"]),
        (&u3, vec!["a", "bab", "cac"]),
    ];
    let mut conjugacies = 0;
    for (sys, words) in desk {
        let t = words.iter().map(|w| refl(sys, w)).collect::<std::result::Result<Vec<_>, _>>()?;
        let base = sys.canonical_generators(&t, &e)?;
        let u = ReflectionSubgroup { generators: base.clone() };
        for c in Ball::new(sys, 2)?.iter() {
            let other = sys.canonical_generators(&t, c)?;
            ensure(u.conjugating_element(sys, &base, &other, 6)?.is_some(), || {
                format!("no u ∈ U ∩ B_6 relates R_U(e) and R_U({}) for {words:?}", sys.format(c))
            })?;
            conjugacies += 1;
        }
    }
    Ok(format!(
        "{{a, b, aba}} fails at (a, b, aba) and folds to {{a, b}}; {sets} random sets with |R| ≤ |T|; {conjugacies} conjugacies found in U ∩ B_6"
    ))
}

/// Leibniz expansion, kept separate from the elimination used in the library.
fn leibniz(m: &IntMatrix) -> i128 {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        perms(n - 1)
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |i| {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    q
                })
            })
            .collect()
    }
    let n = m.rows();
    perms(n)
        .into_iter()
        .map(|p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            sign * (0..n).map(|i| m[(i, p[i])] as i128).product::<i128>()
        })
        .sum()
}

/// Abelianized `W⁺` coordinates from raw letter pairs: `(a, b) ↦ −e_a + e_b`.
fn pair_abelianization(rank: usize, word: &[Gen]) -> Vec<i64> {
    let mut v = vec![0i64; rank];
    for pair in word.chunks(2) {
        v[pair[0] as usize] -= 1;
        v[pair[1] as usize] += 1;
    }
    v[1..].to_vec()
}

fn determinants(_seed: u64) -> Outcome {
    let mut cases = 0;
    for rank in 2..=4 {
        let u = CoxeterSystem::universal(rank);
        let id = u.w_plus_matrix(&u.generators())?;
        ensure(id.det() == 1 && leibniz(&id) == 1, || format!("det(id) ≠ 1 in rank {rank}"))?;
        for p in [3u64, 5, 7] {
            let images = u.alpha_p(p)?;
            let det = u.alpha_p_determinant(p)?;
            let mut oracle = IntMatrix::zeros(rank - 1, rank - 1);
            for i in 1..rank {
                let mut word = images[0].letters().to_vec();
                word.extend_from_slice(images[i].letters());
                for (r, x) in pair_abelianization(rank, &word).into_iter().enumerate() {
                    oracle[(r, i - 1)] = x;
                }
            }
            ensure(det == p as i128 && leibniz(&oracle) == p as i128, || {
                format!("rank {rank}: det α_{p} = {det}, oracle {}", leibniz(&oracle))
            })?;
            cases += 1;
        }
    }
    Ok(format!("det α_p = p in {cases} cases (p ∈ {{3, 5, 7}}, ranks 2–4); det(id) = 1"))
}

fn random_sim(sys: &CoxeterSystem, rng: &mut ChaCha8Rng) -> std::result::Result<crate::endo::Endo, Failure> {
    loop {
        let images: Vec<GroupElement> = (0..sys.rank() as Gen)
            .map(|s| {
                let len = rng.gen_range(0..=2);
                let h: Vec<Gen> = (0..len).map(|_| rng.gen_range(0..sys.rank() as Gen)).collect();
                sys.conjugate(&sys.gen(s), &sys.normalize(&h))
            })
            .collect();
        let e = sys.sim_check(&images, None)?;
        if e.kind.is_sim() {
            return Ok(e);
        }
    }
}

fn complexity(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut pairs, mut proper) = (0, 0);
    for rank in [2, 3] {
        let u = CoxeterSystem::universal(rank);
        for _ in 0..50 {
            let a = random_sim(&u, &mut rng)?;
            let b = random_sim(&u, &mut rng)?;
            let ab = u.sim_check(&u.compose(&a.images, &b.images), None)?;
            ensure(ab.kind.is_sim(), || "composite is not a sim".into())?;
            let (da, dab) = (u.complexity_matrix(&a)?, u.complexity_matrix(&ab)?);
            ensure(dab.dominates(&da), || format!("Δ(αβ) = {:?} does not dominate Δ(α) = {:?}", dab.entries, da.entries))?;
            if b.kind == EndoKind::SimProper {
                ensure(dab.entries != da.entries, || format!("β proper but Δ(αβ) = Δ(α) = {:?}", da.entries))?;
                proper += 1;
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs monotone, strict on all {proper} with β proper"))
}

fn involutions(sys: &CoxeterSystem, radius: usize) -> std::result::Result<Vec<GroupElement>, Failure> {
    let ball = Ball::new(sys, radius)?;
    Ok(ball.iter().filter(|x| sys.element_order(x, None) == Order::Finite(2)).cloned().collect())
}

fn definability(_seed: u64) -> Outcome {
    let mut tuples_checked = 0;
    let mut involutions_checked = 0;
    for (label, sys) in [("D∞", CoxeterSystem::universal(2)), ("U3", CoxeterSystem::universal(3))] {
        let pool = involutions(&sys, 4)?;
        let f = sys.phi_gamma_formula();
        let mut model = BoundedModel::new(&sys, 4)?;
        let mut tuples: Vec<Vec<GroupElement>> = vec![vec![]];
        for _ in 0..sys.rank() {
            tuples = tuples
                .iter()
                .flat_map(|t| {
                    pool.iter().filter(|x| !t.contains(x)).map(|x| {
                        let mut u = t.clone();
                        u.push(x.clone());
                        u
                    })
                })
                .collect();
        }
        for t in &tuples {
            let structural = sys.phi_gamma_check(t)?.holds();
            let assignment: Vec<(u32, GroupElement)> = t.iter().cloned().enumerate().map(|(i, x)| (i as u32, x)).collect();
            let bounded = model.eval(&f, &assignment)?;
            ensure(structural == bounded, || {
                let names: Vec<String> = t.iter().map(|x| sys.format(x)).collect();
                format!("{label}: φ_Γ({}) structural {structural}, bounded {bounded}", names.join(", "))
            })?;
        }
        tuples_checked += tuples.len();
        let psi = sys.psi_formula();
        for x in &pool {
            let structural = sys.psi_reflection_check(x)?;
            let bounded = model.eval(&psi, &[(0, x.clone())])?;
            ensure(structural == bounded, || format!("{label}: ψ({}) structural {structural}, bounded {bounded}", sys.format(x)))?;
        }
        involutions_checked += pool.len();
    }
    let p3 = path(3);
    ensure(matches!(p3.psi_reflection_check(&p3.gen(0)), Err(CoxError::Scope(_))), || "ψ accepted on P3".into())?;
    Ok(format!(
        "φ_Γ agrees on {tuples_checked} tuples and ψ on {involutions_checked} involutions (B_4, radius 4); ψ refused on P3"
    ))
}

fn affine(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts = Vec::new();
    for g in [AffineGroup::a1_tilde(), AffineGroup::a2_tilde()] {
        let sys = g.system();
        for s in 0..sys.rank() {
            for t in 0..sys.rank() {
                let order = g.order(&g.from_word(&[s as Gen, t as Gen]));
                let expected = sys.m(s, t).finite().map(u64::from);
                ensure(order == expected, || format!("{}: relation ({}{})^m fails", g.name(), sys.name(s as Gen), sys.name(t as Gen)))?;
            }
        }
        let k = g.kernel_index(6);
        ensure(k.index == 2 && k.multiplicative && k.normal, || format!("{}: kernel report {k:?}", g.name()))?;
        let interp = g.interpret(6, 500, 12, &mut rng)?;
        ensure(interp.mismatches == 0, || format!("{}: {} code mismatches", g.name(), interp.mismatches))?;
        let profile = g.reflection_length_profile(8)?;
        ensure(profile.stable, || format!("{}: ℓ_T maxima {:?} not stable", g.name(), profile.max_per_radius))?;
        parts.push(format!("{} max ℓ_T on B_7, B_8 = {}", g.name(), profile.max_per_radius[8]));
    }
    Ok(format!("relations, index 2, 500 code products each; {}", parts.join(", ")))
}

fn raag_bridge(_seed: u64) -> Outcome {
    let graphs = [
        ("vertex", CoxeterSystem::parse("generators a")?),
        ("edge", CoxeterSystem::parse("generators a b\nm a b 2")?),
        ("P3", path(3)),
    ];
    let mut notes = Vec::new();
    for (label, graph) in &graphs {
        let raag = Raag::new(graph)?;
        let gp = GammaPlus::new(graph)?;
        let small: Vec<_> = raag.ball(4).into_iter().flatten().collect();
        let images: Vec<GroupElement> = small.iter().map(|x| gp.beta(x)).collect();
        for (x, bx) in small.iter().zip(&images) {
            for (y, by) in small.iter().zip(&images) {
                let lhs = gp.beta(&raag.multiply(x, y));
                ensure(lhs == gp.system().multiply(bx, by), || {
                    format!("{label}: β({} · {}) ≠ β·β", raag.format(x), raag.format(y))
                })?;
            }
        }
        let big: Vec<_> = raag.ball(6).into_iter().flatten().collect();
        let mut seen = HashSet::new();
        for x in &big {
            let b = gp.beta(x);
            ensure(gp.in_kernel(&b), || format!("{label}: θ(β({})) ≠ 0", raag.format(x)))?;
            ensure(seen.insert(b), || format!("{label}: β not injective at {}", raag.format(x)))?;
        }
        let idx = gp.index_report(5.max(graph.rank()))?;
        ensure(idx.cosets as u64 == idx.expected, || format!("{label}: {} cosets, expected {}", idx.cosets, idx.expected))?;
        notes.push(format!("{label}: {} pairs, {} words, index {}", small.len() * small.len(), big.len(), idx.cosets));
    }
    Ok(notes.join("; "))
}

fn tree(_seed: u64) -> Outcome {
    let u = CoxeterSystem::universal(3);
    let t = u.unsuperstability_tree(5, 2, 3, 4)?;
    if let Some(c) = t.log.iter().find(|c| !c.passed) {
        return Err(Failure::Property(format!("clause {}: {}", c.clause, c.detail)));
    }
    ensure(t.max_f_set == 1, || format!("clause (f) set of size {}", t.max_f_set))?;
    Ok(format!("{} nodes; clauses (a), (b)(i), (b)(ii), (e), (f) hold with m(n) = 1", t.nodes.len()))
}

fn domain(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = CoxeterSystem::universal(3);
    let ball = Ball::new(&u, 4)?;
    let elems: Vec<&GroupElement> = ball.iter().filter(|x| !x.is_identity()).collect();
    for _ in 0..20 {
        let x = elems[rng.gen_range(0..elems.len())];
        let y = elems[rng.gen_range(0..elems.len())];
        match u.domain_check(x, y, 4)? {
            DomainOutcome::Witness { g } => {
                ensure(!u.commute(x, &u.conjugate(y, &g)), || "witness does not witness".into())?;
            }
            other => return Err(Failure::Property(format!("({}, {}): {other:?}", u.format(x), u.format(y)))),
        }
    }
    let two = CoxeterSystem::parse("generators a b c d\nm a b inf\nm c d inf\nm a c 2\nm a d 2\nm b c 2\nm b d 2")?;
    let r = two.domain_check(&two.element("ab")?, &two.element("cd")?, 4)?;
    ensure(matches!(r, DomainOutcome::CertifiedNegative { .. }), || format!("D∞ × D∞: {r:?}"))?;
    let d = CoxeterSystem::universal(2);
    let ab = d.element("ab")?;
    let r = d.domain_check(&ab, &ab, 4)?;
    ensure(matches!(r, DomainOutcome::CertifiedNegative { .. }), || format!("D∞: {r:?}"))?;
    Ok("20 witnesses in U3 within radius 4; D∞ × D∞ and D∞ certified negative".into())
}
