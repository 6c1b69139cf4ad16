use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use coxlab::affine::AffineGroup;
use coxlab::probes::{fo_eval, DomainOutcome, PhiResult};
use coxlab::raag::{GammaPlus, Raag};
use coxlab::suite::{self, Status};
use coxlab::walls::Reflection;
use coxlab::{CoxError, CoxeterSystem, EndoKind, GroupElement, Order};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cox", version, about = "Coxeter group workbench")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for every randomised check; echoed in the report.
    #[arg(long, default_value_t = 7, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Sys {
    /// A `.cox` system file.
    #[arg(long)]
    system: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Canonical form of a word.
    Normalize {
        #[command(flatten)]
        sys: Sys,
        #[arg(long)]
        word: String,
    },
    /// Product of the given words, left to right.
    Mult {
        #[command(flatten)]
        sys: Sys,
        #[arg(long, required = true)]
        word: Vec<String>,
    },
    Order {
        #[command(flatten)]
        sys: Sys,
        #[arg(long)]
        word: String,
        #[arg(long)]
        order_cutoff: Option<u64>,
    },
    /// Generators of the centralizer (right-angled, irreducible).
    Centralizer {
        #[command(flatten)]
        sys: Sys,
        #[arg(long)]
        word: String,
    },
    /// Wall distance between two reflections.
    Dist {
        #[command(flatten)]
        sys: Sys,
        #[arg(long)]
        t: String,
        #[arg(long)]
        u: String,
    },
    /// Whether a comma-separated set of reflections is geometric.
    GeomCheck {
        #[command(flatten)]
        sys: Sys,
        #[arg(long)]
        set: String,
    },
    /// Canonical generators of the subgroup generated by a set of reflections.
    CanonGens {
        #[command(flatten)]
        sys: Sys,
        #[arg(long)]
        set: String,
        #[arg(long, default_value = "e")]
        chamber: String,
    },
    /// Classifies an endomorphism file (`map <s> = <word>` lines).
    SimCheck {
        #[command(flatten)]
        sys: Sys,
        #[arg(long)]
        endo: PathBuf,
        #[arg(long)]
        order_cutoff: Option<u64>,
    },
    /// Complexity matrix of a self-similarity.
    Delta {
        #[command(flatten)]
        sys: Sys,
        #[arg(long)]
        endo: PathBuf,
    },
    /// Determinant of `α_p` on the abelianized free subgroup.
    Detp {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        prime: u64,
    },
    /// Bounds on the reflection length.
    ReflLength {
        #[command(flatten)]
        sys: Sys,
        #[arg(long)]
        word: String,
        /// Conjugator length for the candidate reflections.
        #[arg(long)]
        radius: Option<usize>,
    },
    #[command(subcommand)]
    Probe(Probe),
    #[command(subcommand)]
    Affine(Affine),
    #[command(subcommand)]
    Raag(RaagCmd),
    /// Runs an acceptance suite: word-oracle, geometry, sim, probes, affine, raag or all.
    Suite { name: String },
}

#[derive(Subcommand)]
enum Probe {
    /// `φ_Γ` on a comma-separated tuple; `--radius` adds the bounded evaluation.
    Phi {
        #[command(flatten)]
        sys: Sys,
        #[arg(long)]
        words: String,
        #[arg(long)]
        radius: Option<usize>,
    },
    Psi {
        #[command(flatten)]
        sys: Sys,
        #[arg(long)]
        word: String,
        #[arg(long)]
        radius: Option<usize>,
    },
    /// `δ` on a comma-separated tuple.
    Delta {
        #[command(flatten)]
        sys: Sys,
        #[arg(long)]
        words: String,
    },
    /// Finite continuation of an element of finite order.
    Fc {
        #[command(flatten)]
        sys: Sys,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 3)]
        radius: usize,
    },
    Domain {
        #[command(flatten)]
        sys: Sys,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 4)]
        radius: usize,
    },
    /// Sims with bounded complexity fixing an element.
    Rigidity {
        #[command(flatten)]
        sys: Sys,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 6)]
        cap: usize,
        /// Conjugator length for the candidate images.
        #[arg(long, default_value_t = 3)]
        radius: usize,
    },
    /// Unsuperstability tree in the universal group of rank 3.
    Tree {
        #[arg(long)]
        system: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        prime: u32,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 3)]
        branch: usize,
        #[arg(long, default_value_t = 4)]
        radius: usize,
    },
}

#[derive(Args)]
struct Model {
    /// `A1~`, `A2~`, or `custom <file>`.
    #[arg(long = "type", num_args = 1..=2, required = true)]
    kind: Vec<String>,
}

#[derive(Subcommand)]
enum Affine {
    Build {
        #[command(flatten)]
        model: Model,
    },
    /// Product of the given words in the model.
    Mult {
        #[command(flatten)]
        model: Model,
        #[arg(long, required = true)]
        word: Vec<String>,
    },
    Epsilon {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        word: String,
    },
    /// Exact reflection length; `--bound` also runs the bounded search.
    ReflLength {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        bound: Option<i64>,
        /// Report the maxima over balls up to this radius instead.
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Encoding by integer tuples, checked against direct multiplication.
    Interp {
        #[command(flatten)]
        model: Model,
        #[arg(long, default_value_t = 6)]
        radius: usize,
        #[arg(long, default_value_t = 500)]
        pairs: usize,
    },
}

#[derive(Subcommand)]
enum RaagCmd {
    /// Image of a RAAG word under `β` in the doubled Coxeter group.
    Embed {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Cosets of the kernel of `θ` met in a ball.
    Index {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        radius: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Outcome {
    Ok,
    PropertyFailed,
    InvalidInput,
    Inconclusive,
}

impl Outcome {
    fn code(self) -> u8 {
        match self {
            Outcome::Ok => 0,
            Outcome::PropertyFailed => 1,
            Outcome::InvalidInput => 2,
            Outcome::Inconclusive => 3,
        }
    }
}

/// What a command produced: a status, a line of text and the full report.
struct Done {
    status: Outcome,
    text: String,
    report: Value,
}

fn ok(text: impl Into<String>, report: Value) -> Done {
    Done { status: Outcome::Ok, text: text.into(), report }
}

fn done(pass: bool, text: impl Into<String>, report: Value) -> Done {
    Done { status: if pass { Outcome::Ok } else { Outcome::PropertyFailed }, text: text.into(), report }
}

enum Failure {
    Invalid(String),
    Inconclusive(String),
}

impl From<CoxError> for Failure {
    fn from(e: CoxError) -> Self {
        match e {
            CoxError::ResourceBound(_) | CoxError::BudgetExhausted(_) => Failure::Inconclusive(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type Res<T> = Result<T, Failure>;

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Res<CoxeterSystem> {
    CoxeterSystem::parse(&read(path)?).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn element(sys: &CoxeterSystem, w: &str) -> Res<GroupElement> {
    Ok(sys.element(w)?)
}

fn list(sys: &CoxeterSystem, text: &str) -> Res<Vec<GroupElement>> {
    text.split(',').map(|w| element(sys, w)).collect()
}

fn reflections(sys: &CoxeterSystem, text: &str) -> Res<Vec<Reflection>> {
    text.split(',').map(|w| Ok(sys.reflection_from_word(w)?)).collect()
}

fn names(sys: &CoxeterSystem, xs: &[GroupElement]) -> Vec<String> {
    xs.iter().map(|x| sys.format(x)).collect()
}

/// Replaces serialized elements (`{"letters": [...]}`) by their words.
fn with_words(sys: &CoxeterSystem, v: Value) -> Value {
    match v {
        Value::Object(map) => {
            if map.len() == 1 {
                if let Some(Value::Array(letters)) = map.get("letters") {
                    let word: Option<Vec<u8>> = letters.iter().map(|l| l.as_u64().map(|x| x as u8)).collect();
                    if let Some(word) = word {
                        return Value::String(sys.format_word(&word));
                    }
                }
            }
            Value::Object(map.into_iter().map(|(k, v)| (k, with_words(sys, v))).collect())
        }
        Value::Array(xs) => Value::Array(xs.into_iter().map(|x| with_words(sys, x)).collect()),
        other => other,
    }
}

fn to_json(sys: &CoxeterSystem, x: &impl Serialize) -> Value {
    with_words(sys, serde_json::to_value(x).expect("serializable report"))
}

fn model(m: &Model) -> Res<AffineGroup> {
    match m.kind.as_slice() {
        [t] if t == "custom" => Err(Failure::Invalid("`--type custom` needs a file".into())),
        [t, file] if t == "custom" => {
            AffineGroup::parse_custom(&read(Path::new(file))?).map_err(|e| Failure::Invalid(format!("{file}: {e}")))
        }
        [t] => Ok(AffineGroup::builtin(t)?),
        _ => Err(Failure::Invalid("expected `--type A1~|A2~|custom <file>`".into())),
    }
}

fn run(cmd: &Command, seed: u64) -> Res<Done> {
    match cmd {
        Command::Normalize { sys, word } => {
            let sys = load(&sys.system)?;
            let x = element(&sys, word)?;
            let nf = sys.format(&x);
            Ok(ok(nf.clone(), json!({ "word": word, "normal_form": nf, "length": x.len() })))
        }
        Command::Mult { sys, word } => {
            let sys = load(&sys.system)?;
            let xs = word.iter().map(|w| element(&sys, w)).collect::<Res<Vec<_>>>()?;
            let p = sys.product(&xs);
            let nf = sys.format(&p);
            Ok(ok(nf.clone(), json!({ "factors": names(&sys, &xs), "product": nf, "length": p.len() })))
        }
        Command::Order { sys, word, order_cutoff } => {
            let sys = load(&sys.system)?;
            let x = element(&sys, word)?;
            let o = sys.element_order(&x, *order_cutoff);
            let text = o.to_string();
            let report = json!({ "element": sys.format(&x), "order": text, "order_cutoff": order_cutoff });
            Ok(match o {
                Order::Unknown { .. } => Done { status: Outcome::Inconclusive, text, report },
                _ => ok(text, report),
            })
        }
        Command::Centralizer { sys, word } => {
            let sys = load(&sys.system)?;
            let x = element(&sys, word)?;
            let c = sys.centralizer(&x)?;
            let gens = names(&sys, &c.generators(&sys));
            let mut report = to_json(&sys, &c);
            report["generators"] = json!(gens);
            report["link"] = json!(sys.mask_names(c.link));
            Ok(ok(format!("⟨{}⟩", gens.join(", ")), report))
        }
        Command::Dist { sys, t, u } => {
            let sys = load(&sys.system)?;
            let (t, u) = (sys.reflection_from_word(t)?, sys.reflection_from_word(u)?);
            let d = sys.wall_distance(&t, &u);
            Ok(ok(d.to_string(), json!({ "t": sys.format(&t.element), "u": sys.format(&u.element), "distance": d })))
        }
        Command::GeomCheck { sys, set } => {
            let sys = load(&sys.system)?;
            let t = reflections(&sys, set)?;
            let r = sys.is_geometric_set(&t);
            let text = match r.failing_triple {
                None => "geometric".to_string(),
                Some((a, b, c)) => format!(
                    "not geometric: failing triple ({}, {}, {})",
                    sys.format(&t[a].element),
                    sys.format(&t[b].element),
                    sys.format(&t[c].element)
                ),
            };
            Ok(done(r.geometric, text, to_json(&sys, &r)))
        }
        Command::CanonGens { sys, set, chamber } => {
            let sys = load(&sys.system)?;
            let t = reflections(&sys, set)?;
            let c = element(&sys, chamber)?;
            let r = sys.canonical_generators(&t, &c)?;
            let words: Vec<String> = r.iter().map(|x| sys.format(&x.element)).collect();
            Ok(ok(
                format!("{{{}}}", words.join(", ")),
                json!({ "input": names(&sys, &t.iter().map(|x| x.element.clone()).collect::<Vec<_>>()), "chamber": sys.format(&c), "generators": words }),
            ))
        }
        Command::SimCheck { sys, endo, order_cutoff } => {
            let sys = load(&sys.system)?;
            let images = sys.parse_endo(&read(endo)?)?;
            let e = sys.sim_check(&images, *order_cutoff)?;
            let mut report = to_json(&sys, &e);
            report["order_cutoff"] = json!(order_cutoff);
            let mut text = e.kind.as_str().to_string();
            if !e.reasons.is_empty() {
                text = format!("{text}: {}", e.reasons.join("; "));
            }
            let status = match e.kind {
                EndoKind::NotSim => Outcome::PropertyFailed,
                EndoKind::Unknown => Outcome::Inconclusive,
                _ => Outcome::Ok,
            };
            Ok(Done { status, text, report })
        }
        Command::Delta { sys, endo } => {
            let sys = load(&sys.system)?;
            let e = sys.sim_check(&sys.parse_endo(&read(endo)?)?, None)?;
            if !e.kind.is_sim() {
                return Ok(Done {
                    status: Outcome::PropertyFailed,
                    text: format!("{}: Δ is defined for self-similarities only", e.kind.as_str()),
                    report: to_json(&sys, &e),
                });
            }
            let d = sys.complexity_matrix(&e)?;
            let rows: Vec<String> =
                d.entries.iter().map(|r| r.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")).collect();
            Ok(ok(rows.join("\n"), to_json(&sys, &d)))
        }
        Command::Detp { rank, prime } => {
            if *rank < 2 {
                return Err(Failure::Invalid("rank must be at least 2".into()));
            }
            let sys = CoxeterSystem::universal(*rank);
            let det = sys.alpha_p_determinant(*prime)?;
            let images = sys.alpha_p(*prime)?;
            Ok(ok(det.to_string(), json!({ "rank": rank, "prime": prime, "images": names(&sys, &images), "determinant": det })))
        }
        Command::ReflLength { sys, word, radius } => {
            let sys = load(&sys.system)?;
            let x = element(&sys, word)?;
            let r = sys.reflection_length(&x, *radius)?;
            let text = match (r.exact, r.upper) {
                (true, _) => r.lower.to_string(),
                (false, Some(u)) => format!("between {} and {u} (search radius {})", r.lower, r.search_radius),
                (false, None) => format!("at least {} (search radius {})", r.lower, r.search_radius),
            };
            let status = if r.exact { Outcome::Ok } else { Outcome::Inconclusive };
            Ok(Done { status, text, report: to_json(&sys, &r) })
        }
        Command::Probe(p) => probe(p),
        Command::Affine(a) => affine(a, seed),
        Command::Raag(r) => raag(r),
        Command::Suite { name } => {
            let report = suite::run_suite(name, seed).ok_or_else(|| {
                Failure::Invalid(format!("unknown suite `{name}` (expected one of {})", suite::SUITES.join(", ")))
            })?;
            let lines: Vec<String> = report
                .checks
                .iter()
                .map(|c| {
                    let verdict = match c.status {
                        Status::Pass => "pass",
                        Status::Fail => "FAIL",
                        Status::Inconclusive => "inconclusive",
                    };
                    format!("{:>2} {:<26} {verdict:<12} {:>7.2}s  {}", c.criterion, c.name, c.seconds, c.detail)
                })
                .collect();
            let status = match report.status() {
                Status::Pass => Outcome::Ok,
                Status::Fail => Outcome::PropertyFailed,
                Status::Inconclusive => Outcome::Inconclusive,
            };
            let text = format!("suite {} (seed {seed})\n{}", report.suite, lines.join("\n"));
            Ok(Done { status, text, report: serde_json::to_value(&report).expect("serializable") })
        }
    }
}

fn probe(p: &Probe) -> Res<Done> {
    match p {
        Probe::Phi { sys, words, radius } => {
            let sys = load(&sys.system)?;
            let g = list(&sys, words)?;
            let r = sys.phi_gamma_check(&g)?;
            let mut report = match &r {
                PhiResult::True(ev) => json!({ "holds": true, "map_columns": ev.map.columns, "basis": names(&sys, &ev.basis), "conjugators": names(&sys, &ev.conjugators) }),
                PhiResult::False { clause, detail } => json!({ "holds": false, "clause": clause.to_string(), "detail": detail }),
            };
            let mut text = match &r {
                PhiResult::True(_) => "true".to_string(),
                PhiResult::False { clause, detail } => format!("false: clause ({clause}) {detail}"),
            };
            if let Some(radius) = radius {
                let assignment: Vec<_> = g.iter().cloned().enumerate().map(|(i, x)| (i as u32, x)).collect();
                let bounded = fo_eval(&sys, &sys.phi_gamma_formula(), &assignment, *radius)?;
                report["bounded"] = json!({ "radius": radius, "holds": bounded });
                text.push_str(&format!("\nbounded evaluation at radius {radius}: {bounded}"));
            }
            Ok(done(r.holds(), text, report))
        }
        Probe::Psi { sys, word, radius } => {
            let sys = load(&sys.system)?;
            let x = element(&sys, word)?;
            let holds = sys.psi_reflection_check(&x)?;
            let mut report = json!({ "element": sys.format(&x), "holds": holds });
            let mut text = holds.to_string();
            if let Some(radius) = radius {
                let bounded = fo_eval(&sys, &sys.psi_formula(), &[(0, x.clone())], *radius)?;
                report["bounded"] = json!({ "radius": radius, "holds": bounded });
                text.push_str(&format!("\nbounded evaluation at radius {radius}: {bounded}"));
            }
            Ok(done(holds, text, report))
        }
        Probe::Delta { sys, words } => {
            let sys = load(&sys.system)?;
            let r = sys.delta_2spherical_check(&list(&sys, words)?)?;
            let text = match &r.failing_clause {
                None => "true".to_string(),
                Some(c) => format!("false: clause ({c}) {}", r.detail),
            };
            Ok(done(r.holds, text, to_json(&sys, &r)))
        }
        Probe::Fc { sys, word, radius } => {
            let sys = load(&sys.system)?;
            let r = sys.finite_continuation(&element(&sys, word)?, *radius)?;
            let text = format!("{{{}}}", names(&sys, &r.elements).join(", "));
            let status = if r.stable { Outcome::Ok } else { Outcome::Inconclusive };
            Ok(Done { status, text, report: to_json(&sys, &r) })
        }
        Probe::Domain { sys, x, y, radius } => {
            let sys = load(&sys.system)?;
            let r = sys.domain_check(&element(&sys, x)?, &element(&sys, y)?, *radius)?;
            let (status, text) = match &r {
                DomainOutcome::Witness { g } => (Outcome::Ok, format!("witness {}", sys.format(g))),
                DomainOutcome::CertifiedNegative { reason } => (Outcome::PropertyFailed, format!("certified-negative: {reason}")),
                DomainOutcome::Exhausted { radius } => {
                    (Outcome::Inconclusive, format!("no witness within radius {radius}"))
                }
            };
            Ok(Done { status, text, report: to_json(&sys, &r) })
        }
        Probe::Rigidity { sys, word, cap, radius } => {
            let sys = load(&sys.system)?;
            let r = sys.rigidity_check(&element(&sys, word)?, *cap, *radius)?;
            let text = format!(
                "{} sims with Δ ≤ {cap} among {} candidates; {} automorphisms and {} proper sims fix {}",
                r.sims_within_cap,
                r.candidates,
                r.automorphisms_fixing,
                r.proper_fixing.len(),
                sys.format(&r.h)
            );
            Ok(done(r.proper_fixing.is_empty(), text, to_json(&sys, &r)))
        }
        Probe::Tree { system, prime, depth, branch, radius } => {
            let sys = match system {
                Some(p) => load(p)?,
                None => CoxeterSystem::universal(3),
            };
            let t = sys.unsuperstability_tree(*prime, *depth, *branch, *radius)?;
            let lines: Vec<String> =
                t.log.iter().map(|c| format!("{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.clause, c.detail)).collect();
            let text = format!("{} nodes, n = {prime}\n{}", t.nodes.len(), lines.join("\n"));
            Ok(done(t.passed(), text, to_json(&sys, &t)))
        }
    }
}

fn affine(a: &Affine, seed: u64) -> Res<Done> {
    match a {
        Affine::Build { model: m } => {
            let g = model(m)?;
            let gens: Vec<String> = g.generator_images().iter().map(|x| x.to_string()).collect();
            let text = format!(
                "{}: d = {}, |W₀| = {}, relations verified\n{}",
                g.name(),
                g.dim(),
                g.finite_order(),
                g.serialize().trim_end()
            );
            Ok(ok(text, json!({ "type": g.name(), "dim": g.dim(), "finite_order": g.finite_order(), "generators": gens, "relations_verified": true })))
        }
        Affine::Mult { model: m, word } => {
            let g = model(m)?;
            let xs = word.iter().map(|w| Ok(g.parse_element(w)?)).collect::<Res<Vec<_>>>()?;
            let p = xs.iter().fold(g.identity(), |acc, x| g.multiply(&acc, x));
            let order = g.order(&p).map_or("inf".to_string(), |k| k.to_string());
            Ok(ok(p.to_string(), json!({ "factors": word, "product": p, "order": order })))
        }
        Affine::Epsilon { model: m, word } => {
            let g = model(m)?;
            let x = g.parse_element(word)?;
            let s = g.epsilon(&x);
            let text = format!("{}{}", if s.sign > 0 { "+1" } else { "-1" }, if s.in_kernel { " (in kernel)" } else { "" });
            Ok(ok(text, json!({ "element": x, "sign": s.sign, "in_kernel": s.in_kernel, "word_parity": word_parity(&g, word)? })))
        }
        Affine::ReflLength { model: m, word, bound, radius } => {
            let g = model(m)?;
            if let Some(radius) = radius {
                let p = g.reflection_length_profile(*radius)?;
                let text = format!("max ℓ_T per radius: {:?}{}", p.max_per_radius, if p.stable { " (stable)" } else { "" });
                return Ok(ok(text, serde_json::to_value(&p).expect("serializable")));
            }
            let word = word.as_deref().ok_or_else(|| Failure::Invalid("give `--word` or `--radius`".into()))?;
            let x = g.parse_element(word)?;
            match bound {
                None => {
                    let l = g.reflection_length(&x)?;
                    Ok(ok(l.to_string(), json!({ "element": x, "reflection_length": l })))
                }
                Some(b) => {
                    let r = g.reflection_length_search(&x, *b)?;
                    let report = json!({ "element": x, "reflection_length": r.lower, "search": r, "translation_bound": b });
                    Ok(match r.upper {
                        Some(u) => ok(format!("{} (bounded search: {u})", r.lower), report),
                        None => Done {
                            status: Outcome::Inconclusive,
                            text: format!("bounded search with translations ≤ {b} did not reach the element; try a larger --bound"),
                            report,
                        },
                    })
                }
            }
        }
        Affine::Interp { model: m, radius, pairs } => {
            let g = model(m)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = g.interpret(*radius, *pairs, 12, &mut rng)?;
            let text = format!(
                "codes of length {}; {} round trips; {} of {} code products differ (seed {seed})",
                r.code_length, r.round_trips, r.mismatches, r.pairs
            );
            Ok(done(r.mismatches == 0, text, serde_json::to_value(&r).expect("serializable")))
        }
    }
}

fn word_parity(g: &AffineGroup, word: &str) -> Res<i8> {
    Ok(if g.system().parse_word(word)?.len() % 2 == 0 { 1 } else { -1 })
}

fn raag(r: &RaagCmd) -> Res<Done> {
    match r {
        RaagCmd::Embed { graph, word } => {
            let graph = load(graph)?;
            let a = Raag::new(&graph)?;
            let gp = GammaPlus::new(&graph)?;
            let x = a.parse_word(word)?;
            let b = gp.beta(&x);
            let image = gp.system().format(&b);
            let report = json!({
                "word": a.format(&x),
                "image": image,
                "image_length": b.len(),
                "theta": gp.theta(&b),
                "in_kernel": gp.in_kernel(&b),
                "gamma_plus": gp.system().serialize(),
            });
            Ok(ok(image, report))
        }
        RaagCmd::Index { graph, radius } => {
            let graph = load(graph)?;
            let gp = GammaPlus::new(&graph)?;
            let r = gp.index_report(radius.unwrap_or(5.max(graph.rank())))?;
            let text = format!("{} cosets in B_{} (expected {})", r.cosets, r.radius, r.expected);
            let status = if r.cosets as u64 == r.expected { Outcome::Ok } else { Outcome::Inconclusive };
            Ok(Done { status, text, report: serde_json::to_value(&r).expect("serializable") })
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn out(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let parsed = Cli::command().try_get_matches().and_then(|m| Ok((Cli::from_arg_matches(&m)?, m)));
    let (cli, matches) = match parsed {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut path = Vec::new();
    let mut m = &matches;
    while let Some((name, sub)) = m.subcommand() {
        path.push(name);
        m = sub;
    }
    let command = path.join(" ");
    let start = Instant::now();
    let result = run(&cli.command, cli.seed);
    let seconds = start.elapsed().as_secs_f64();
    let d = match result {
        Ok(d) => d,
        Err(Failure::Invalid(msg)) => Done { status: Outcome::InvalidInput, text: format!("error: {msg}"), report: json!({ "error": msg }) },
        Err(Failure::Inconclusive(msg)) => {
            Done { status: Outcome::Inconclusive, text: format!("inconclusive: {msg}"), report: json!({ "error": msg }) }
        }
    };
    match cli.format {
        Format::Text => {
            if d.status == Outcome::InvalidInput {
                eprintln!("{}", d.text);
            } else {
                out(&d.text);
            }
        }
        Format::Json => {
            let envelope = json!({ "command": command, "status": d.status, "seed": cli.seed, "seconds": seconds, "report": d.report });
            out(&serde_json::to_string_pretty(&envelope).expect("serializable"));
        }
    }
    ExitCode::from(d.status.code())
}
