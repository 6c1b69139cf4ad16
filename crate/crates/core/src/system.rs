//! Coxeter systems: the `.cox` file format, the Coxeter graph and diagram
//! views, the abelianization map and the star predicates of right-angled
//! graphs.
//!
//! Generators are stored in file order; that order is the shortlex order
//! used everywhere else in the crate.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CoxError, Result};
use crate::heap::{GraphProduct, VertexKind};

/// Index of a generator inside its system.
pub type Gen = u8;

/// Maximum supported rank (generator sets are stored as `u64` masks).
pub const MAX_RANK: usize = 64;

/// An entry `m(s, s')` of a Coxeter matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Finite(u32),
    Infinite,
}

impl Label {
    pub fn finite(self) -> Option<u32> {
        match self {
            Label::Finite(k) => Some(k),
            Label::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Label::Infinite)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Finite(k) => write!(f, "{k}"),
            Label::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViewKind {
    /// Adjacency iff `m < ∞`.
    Graph,
    /// Adjacency iff `m ≥ 3` (including `∞`).
    Diagram,
}

/// One of the two graphs carried by a Coxeter matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramView {
    pub kind: ViewKind,
    /// `adjacency[i]` has bit `j` set iff `i` and `j` are adjacent.
    pub adjacency: Vec<u64>,
}

impl DiagramView {
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a] >> b & 1 == 1
    }

    /// Connected components, each as a sorted list of vertices, ordered by
    /// their smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components_of(&self.adjacency, full_mask(self.adjacency.len()))
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn mask_iter(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// Components of the subgraph induced on `within`.
pub(crate) fn components_of(adjacency: &[u64], within: u64) -> Vec<Vec<usize>> {
    let mut left = within;
    let mut out = Vec::new();
    while left != 0 {
        let start = left.trailing_zeros() as usize;
        let mut comp = 1u64 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = adjacency[v] & within & !comp;
            comp |= new;
            frontier |= new;
        }
        left &= !comp;
        out.push(mask_iter(comp).collect());
    }
    out
}

/// A finite-rank Coxeter system given by its generator names and matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterSystem {
    names: Vec<String>,
    matrix: Vec<Vec<Label>>,
    /// Bit `j` of `commute[i]` is set iff `m(i, j) = 2`.
    commute: Vec<u64>,
    right_angled: bool,
    heap: Option<GraphProduct>,
}

impl CoxeterSystem {
    /// Builds a system from names and a full matrix, validating it.
    pub fn new(names: Vec<String>, matrix: Vec<Vec<Label>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(CoxError::Invalid("a system needs at least one generator".into()));
        }
        if n > MAX_RANK {
            return Err(CoxError::Invalid(format!("rank {n} exceeds the supported maximum {MAX_RANK}")));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(CoxError::DuplicateGenerator(name.clone()));
            }
            validate_name(name)?;
        }
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(CoxError::Invalid("matrix shape does not match the generator count".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let m = matrix[i][j];
                let bad = |reason| CoxError::InvalidEntry {
                    a: names[i].clone(),
                    b: names[j].clone(),
                    value: m.to_string(),
                    reason,
                };
                if i == j {
                    if m != Label::Finite(1) {
                        return Err(bad("diagonal entries must be 1"));
                    }
                } else {
                    match m {
                        Label::Finite(k) if k < 2 => return Err(bad("off-diagonal entries must be at least 2")),
                        _ => {}
                    }
                    if matrix[j][i] != m {
                        return Err(bad("matrix is not symmetric"));
                    }
                }
            }
        }
        let commute: Vec<u64> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| matrix[i][j] == Label::Finite(2))
                    .fold(0u64, |acc, j| acc | 1 << j)
            })
            .collect();
        let right_angled = (0..n).all(|i| {
            (0..n).all(|j| i == j || matches!(matrix[i][j], Label::Finite(2) | Label::Infinite))
        });
        let heap = right_angled.then(|| GraphProduct::new(commute.clone(), vec![VertexKind::Involution; n]));
        Ok(Self { names, matrix, commute, right_angled, heap })
    }

    /// The universal Coxeter group of the given rank (all labels `∞`),
    /// with generators `s0, s1, …` or single letters when `rank ≤ 26`.
    pub fn universal(rank: usize) -> Self {
        Self::from_edges(rank, &[], None)
    }

    /// A right-angled system on `rank` generators with the given Coxeter
    /// graph edges (label 2); all other pairs are `∞`.
    pub fn right_angled(rank: usize, edges: &[(usize, usize)]) -> Self {
        Self::from_edges(rank, edges, None)
    }

    /// All pairs share the finite label `m` (triangle groups and friends).
    pub fn uniform(rank: usize, m: u32) -> Self {
        Self::from_edges(rank, &[], Some(m))
    }

    fn from_edges(rank: usize, edges: &[(usize, usize)], default: Option<u32>) -> Self {
        let names = default_names(rank);
        let off = default.map_or(Label::Infinite, Label::Finite);
        let mut matrix = vec![vec![off; rank]; rank];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = Label::Finite(1);
        }
        for &(a, b) in edges {
            matrix[a][b] = Label::Finite(2);
            matrix[b][a] = Label::Finite(2);
        }
        Self::new(names, matrix).expect("generated system is valid")
    }

    /// Parses the contents of a `.cox` file.
    pub fn parse(text: &str) -> Result<Self> {
        let mut names: Option<Vec<String>> = None;
        let mut entries: Vec<(usize, String, String, Label)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut toks = line.split_whitespace();
            match toks.next() {
                Some("generators") => {
                    if names.is_some() {
                        return Err(CoxError::Parse { line: line_no, msg: "second `generators` line".into() });
                    }
                    let list: Vec<String> = toks.map(str::to_owned).collect();
                    if list.is_empty() {
                        return Err(CoxError::Parse { line: line_no, msg: "empty generator list".into() });
                    }
                    names = Some(list);
                }
                Some("m") => {
                    let parts: Vec<&str> = toks.collect();
                    if parts.len() != 3 {
                        return Err(CoxError::Parse { line: line_no, msg: "expected `m <a> <b> <k|inf>`".into() });
                    }
                    let label = parse_label(parts[2]).ok_or_else(|| CoxError::Parse {
                        line: line_no,
                        msg: format!("bad label `{}`", parts[2]),
                    })?;
                    entries.push((line_no, parts[0].to_owned(), parts[1].to_owned(), label));
                }
                Some(other) => {
                    return Err(CoxError::Parse { line: line_no, msg: format!("unknown directive `{other}`") })
                }
                None => {}
            }
        }
        let names = names.ok_or(CoxError::Parse { line: 0, msg: "missing `generators` line".into() })?;
        let n = names.len();
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(CoxError::DuplicateGenerator(name.clone()));
            }
        }
        let index = |s: &str| -> Result<usize> {
            names.iter().position(|x| x == s).ok_or_else(|| CoxError::UnknownLetter(s.to_owned()))
        };
        let mut matrix = vec![vec![Label::Infinite; n]; n];
        let mut seen = vec![vec![None::<Label>; n]; n];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = Label::Finite(1);
        }
        for (line, a, b, label) in entries {
            let (i, j) = (index(&a)?, index(&b)?);
            let invalid = |reason| CoxError::InvalidEntry { a: a.clone(), b: b.clone(), value: label.to_string(), reason };
            if i == j {
                if label != Label::Finite(1) {
                    return Err(invalid("diagonal entries must be 1"));
                }
                continue;
            }
            if label == Label::Finite(1) {
                return Err(invalid("m(s, s') = 1 requires s = s'"));
            }
            if let Label::Finite(0) = label {
                return Err(invalid("labels must be positive"));
            }
            if let Some(prev) = seen[i][j] {
                return Err(if prev == label {
                    CoxError::Parse { line, msg: format!("duplicate entry for ({a}, {b})") }
                } else {
                    invalid("matrix is not symmetric")
                });
            }
            seen[i][j] = Some(label);
            seen[j][i] = Some(label);
            matrix[i][j] = label;
            matrix[j][i] = label;
        }
        Self::new(names, matrix)
    }

    /// Inverse of [`CoxeterSystem::parse`] on the normalized representation.
    pub fn serialize(&self) -> String {
        let mut out = format!("generators {}\n", self.names.join(" "));
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                if let Label::Finite(k) = self.matrix[i][j] {
                    out.push_str(&format!("m {} {} {}\n", self.names[i], self.names[j], k));
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.names[g as usize]
    }

    pub fn m(&self, a: usize, b: usize) -> Label {
        self.matrix[a][b]
    }

    pub fn matrix(&self) -> &[Vec<Label>] {
        &self.matrix
    }

    pub fn generator(&self, name: &str) -> Result<Gen> {
        self.names
            .iter()
            .position(|x| x == name)
            .map(|i| i as Gen)
            .ok_or_else(|| CoxError::UnknownLetter(name.to_owned()))
    }

    /// `m(s, s') ∈ {2, ∞}` for every pair of distinct generators.
    pub fn is_right_angled(&self) -> bool {
        self.right_angled
    }

    /// Graph-product view used for normal forms (right-angled systems only).
    pub(crate) fn heap(&self) -> Option<&GraphProduct> {
        self.heap.as_ref()
    }

    pub fn require_right_angled(&self) -> Result<()> {
        if self.right_angled {
            Ok(())
        } else {
            Err(CoxError::NotRightAngled)
        }
    }

    /// All off-diagonal labels even or `∞`.
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| {
            (0..self.rank()).all(|j| i == j || self.matrix[i][j].finite().is_none_or(|k| k % 2 == 0))
        })
    }

    /// Every pair of generators spans a finite dihedral group.
    pub fn is_two_spherical(&self) -> bool {
        (0..self.rank()).all(|i| (0..self.rank()).all(|j| !self.matrix[i][j].is_infinite()))
    }

    /// Commutation mask of generator `g` (bits of generators `t ≠ g` with `m(g,t) = 2`).
    #[inline]
    pub fn commute_mask(&self, g: Gen) -> u64 {
        self.commute[g as usize]
    }

    #[inline]
    pub fn commutes(&self, a: Gen, b: Gen) -> bool {
        self.commute[a as usize] >> b & 1 == 1
    }

    pub fn view(&self, kind: ViewKind) -> DiagramView {
        let n = self.rank();
        let adjacency = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| {
                        i != j
                            && match kind {
                                ViewKind::Graph => !self.matrix[i][j].is_infinite(),
                                ViewKind::Diagram => self.matrix[i][j] != Label::Finite(2),
                            }
                    })
                    .fold(0u64, |acc, j| acc | 1 << j)
            })
            .collect();
        DiagramView { kind, adjacency }
    }

    pub fn graph(&self) -> DiagramView {
        self.view(ViewKind::Graph)
    }

    pub fn diagram(&self) -> DiagramView {
        self.view(ViewKind::Diagram)
    }

    pub fn is_irreducible(&self) -> bool {
        self.diagram().components().len() == 1
    }

    pub fn require_irreducible(&self) -> Result<()> {
        let k = self.diagram().components().len();
        if k == 1 {
            Ok(())
        } else {
            Err(CoxError::Reducible(k))
        }
    }

    /// Subsystem spanned by the given generators, keeping their names.
    pub fn restrict(&self, gens: &[usize]) -> CoxeterSystem {
        let names = gens.iter().map(|&g| self.names[g].clone()).collect();
        let matrix = gens.iter().map(|&a| gens.iter().map(|&b| self.matrix[a][b]).collect()).collect();
        CoxeterSystem::new(names, matrix).expect("restriction of a valid system is valid")
    }

    pub fn abelianization(&self) -> AbelianizationMap {
        AbelianizationMap::new(self)
    }

    /// Parity vector of a word (see [`AbelianizationMap`]).
    pub fn abelianize(&self, word: &[Gen]) -> u64 {
        self.abelianization().image(word)
    }

    pub fn graph_predicates(&self) -> Result<GraphPredicates> {
        self.require_right_angled()?;
        Ok(GraphPredicates::of(&self.graph()))
    }
}

impl fmt::Display for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

fn parse_label(tok: &str) -> Option<Label> {
    match tok {
        "inf" | "∞" | "infinity" => Some(Label::Infinite),
        _ => tok.parse::<u32>().ok().map(Label::Finite),
    }
}

fn validate_name(name: &str) -> Result<()> {
    if name.is_empty() || name.contains(|c: char| c.is_whitespace() || c == '^' || c == '#') {
        return Err(CoxError::Invalid(format!("bad generator name `{name}`")));
    }
    Ok(())
}

pub(crate) fn default_names(rank: usize) -> Vec<String> {
    if rank <= 26 {
        (0..rank).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (0..rank).map(|i| format!("s{i}")).collect()
    }
}

/// The map `W → (ℤ/2)^{S/∼}` where `∼` is generated by odd labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianizationMap {
    /// Class index of each generator.
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
}

impl AbelianizationMap {
    fn new(sys: &CoxeterSystem) -> Self {
        let n = sys.rank();
        let odd: Vec<u64> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| i != j && sys.m(i, j).finite().is_some_and(|k| k % 2 == 1))
                    .fold(0u64, |acc, j| acc | 1 << j)
            })
            .collect();
        let classes = components_of(&odd, full_mask(n));
        let mut class_of = vec![0; n];
        for (c, members) in classes.iter().enumerate() {
            for &g in members {
                class_of[g] = c;
            }
        }
        Self { class_of, classes }
    }

    pub fn target_rank(&self) -> usize {
        self.classes.len()
    }

    /// Bit `c` is the parity of letters from class `c`.
    pub fn image(&self, word: &[Gen]) -> u64 {
        word.iter().fold(0u64, |acc, &g| acc ^ 1 << self.class_of[g as usize])
    }
}

/// Star predicates of a graph, read on the Coxeter graph of a right-angled system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphPredicates {
    pub star_property: bool,
    pub star_connected: bool,
    /// `N*(v) = N(v) ∪ {v}` as bitmasks.
    pub closed_neighborhoods: Vec<u64>,
}

impl GraphPredicates {
    pub fn of(graph: &DiagramView) -> Self {
        let n = graph.adjacency.len();
        let star: Vec<u64> = (0..n).map(|v| graph.adjacency[v] | 1 << v).collect();
        let star_property = (0..n).all(|v| (0..n).all(|w| v == w || star[v] & !star[w] != 0));
        let star_connected = (0..n).all(|v| {
            let rest = full_mask(n) & !star[v];
            components_of(&graph.adjacency, rest).len() <= 1
        });
        Self { star_property, star_connected, closed_neighborhoods: star }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_simple_entry() {
        let sys = CoxeterSystem::parse("generators a b\nm a b 2").unwrap();
        assert_eq!(sys.rank(), 2);
        assert_eq!(sys.m(0, 1), Label::Finite(2));
        assert!(sys.is_right_angled());
    }

    #[test]
    fn off_diagonal_one_rejected() {
        let err = CoxeterSystem::parse("generators a b\nm a b 1").unwrap_err();
        assert!(matches!(err, CoxError::InvalidEntry { .. }), "{err}");
    }

    #[test]
    fn unspecified_pairs_default_to_infinity() {
        let sys = CoxeterSystem::parse("# D-infinity\ngenerators a b").unwrap();
        assert_eq!(sys.m(0, 1), Label::Infinite);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            CoxeterSystem::parse("generators a a"),
            Err(CoxError::DuplicateGenerator(_))
        ));
        assert!(CoxeterSystem::parse("generators a b\nm a a 2").is_err());
        assert!(CoxeterSystem::parse("generators a b\nm a b 2\nm b a 3").is_err());
        assert!(CoxeterSystem::parse("generators a b\nm a b 2\nm a b 2").is_err());
        assert!(matches!(
            CoxeterSystem::parse("generators a b\nm a c 2"),
            Err(CoxError::UnknownLetter(_))
        ));
        assert!(CoxeterSystem::parse("m a b 2").is_err());
        assert!(CoxeterSystem::parse("generators a\ngenerators b").is_err());
        assert!(CoxeterSystem::parse("generators a b\nm a b x").is_err());
    }

    #[test]
    fn views_differ_on_labels_two_and_infinity() {
        let sys = CoxeterSystem::parse("generators a b c d\nm a b 2\nm b c 3\nm c d 4").unwrap();
        let g = sys.graph();
        let d = sys.diagram();
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                let differ = g.adjacent(i, j) != d.adjacent(i, j);
                let m = sys.m(i, j);
                assert_eq!(differ, m == Label::Finite(2) || m.is_infinite(), "({i},{j})");
            }
        }
    }

    #[test]
    fn abelianization_examples() {
        let u = CoxeterSystem::universal(4);
        let ab = u.abelianization();
        assert_eq!(ab.target_rank(), 4);
        for i in 0..4u8 {
            assert_eq!(ab.image(&[i]), 1 << i);
        }
        let a2 = CoxeterSystem::uniform(2, 3);
        assert_eq!(a2.abelianization().target_rank(), 1);
        assert_eq!(a2.abelianize(&[0, 1]), 0);
        let d = CoxeterSystem::universal(2);
        assert_eq!(d.abelianize(&[0, 1, 0]), d.abelianize(&[1]));
    }

    #[test]
    fn star_predicates() {
        let path = CoxeterSystem::right_angled(3, &[(0, 1), (1, 2)]);
        let p = path.graph_predicates().unwrap();
        assert!(!p.star_property);
        assert_eq!(p.closed_neighborhoods[0], 0b011);

        let discrete = CoxeterSystem::universal(3);
        let p = discrete.graph_predicates().unwrap();
        assert!(p.star_property);
        assert!(!p.star_connected);

        let c5 = CoxeterSystem::right_angled(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert!(c5.graph_predicates().unwrap().star_property);

        assert_eq!(
            CoxeterSystem::uniform(3, 3).graph_predicates().unwrap_err(),
            CoxError::NotRightAngled
        );
    }

    #[test]
    fn serialize_round_trip() {
        let text = "generators x y z\nm x y 2\nm y z 5\n";
        let sys = CoxeterSystem::parse(text).unwrap();
        assert_eq!(sys.serialize(), text);
        assert_eq!(CoxeterSystem::parse(&sys.serialize()).unwrap(), sys);
    }
}
