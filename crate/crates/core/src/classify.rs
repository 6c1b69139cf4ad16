//! Irreducible components and their type, by lookup against the finite
//! lists of spherical and affine diagrams.

use std::fmt;

use serde::Serialize;

use crate::system::{CoxeterSystem, Label};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "name", rename_all = "lowercase")]
pub enum ComponentType {
    Spherical(String),
    Affine(String),
    Other,
}

impl ComponentType {
    pub fn is_spherical(&self) -> bool {
        matches!(self, ComponentType::Spherical(_))
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, ComponentType::Affine(_))
    }
}

impl fmt::Display for ComponentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentType::Spherical(n) => write!(f, "spherical {n}"),
            ComponentType::Affine(n) => write!(f, "affine {n}"),
            ComponentType::Other => f.write_str("other"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub components: Vec<Vec<usize>>,
    pub types: Vec<ComponentType>,
}

impl ComponentReport {
    pub fn is_irreducible(&self) -> bool {
        self.components.len() == 1
    }

    pub fn is_spherical(&self) -> bool {
        self.types.iter().all(ComponentType::is_spherical)
    }
}

pub fn classify(sys: &CoxeterSystem) -> ComponentReport {
    let components = sys.diagram().components();
    let types = components.iter().map(|c| classify_component(sys, c)).collect();
    ComponentReport { components, types }
}

/// Type of a connected diagram on the given vertices.
fn classify_component(sys: &CoxeterSystem, verts: &[usize]) -> ComponentType {
    let n = verts.len();
    let label = |a: usize, b: usize| sys.m(verts[a], verts[b]);
    let mut nbrs = vec![Vec::new(); n];
    let mut edges = 0;
    for a in 0..n {
        for b in a + 1..n {
            if label(a, b) != Label::Finite(2) {
                nbrs[a].push(b);
                nbrs[b].push(a);
                edges += 1;
            }
        }
    }
    match n {
        1 => return ComponentType::Spherical("A1".into()),
        2 => {
            return match label(0, 1) {
                Label::Infinite => ComponentType::Affine("A1~".into()),
                Label::Finite(3) => ComponentType::Spherical("A2".into()),
                Label::Finite(4) => ComponentType::Spherical("B2".into()),
                Label::Finite(6) => ComponentType::Spherical("G2".into()),
                Label::Finite(m) => ComponentType::Spherical(format!("I2({m})")),
            }
        }
        _ => {}
    }
    let mut weights = Vec::new();
    for a in 0..n {
        for &b in &nbrs[a] {
            if a < b {
                match label(a, b) {
                    Label::Finite(k) => weights.push(k),
                    Label::Infinite => return ComponentType::Other,
                }
            }
        }
    }
    let deg: Vec<usize> = nbrs.iter().map(Vec::len).collect();

    if edges == n {
        let cycle = deg.iter().all(|&d| d == 2) && weights.iter().all(|&k| k == 3);
        return if cycle { ComponentType::Affine(format!("A{}~", n - 1)) } else { ComponentType::Other };
    }
    if edges != n - 1 {
        return ComponentType::Other;
    }

    let max_deg = deg.iter().copied().max().unwrap_or(0);
    if max_deg <= 2 {
        let end = (0..n).find(|&v| deg[v] == 1).expect("a path has an end");
        let path = walk(&nbrs, end, usize::MAX);
        let seq: Vec<u32> = path.windows(2).map(|w| label(w[0], w[1]).finite().unwrap()).collect();
        return classify_path(&seq);
    }

    let branch: Vec<usize> = (0..n).filter(|&v| deg[v] >= 3).collect();
    if branch.len() == 1 {
        let c = branch[0];
        if deg[c] == 4 {
            let ok = n == 5 && weights.iter().all(|&k| k == 3);
            return if ok { ComponentType::Affine("D4~".into()) } else { ComponentType::Other };
        }
        if deg[c] != 3 {
            return ComponentType::Other;
        }
        let arms: Vec<Vec<u32>> = nbrs[c]
            .iter()
            .map(|&start| {
                let mut path = vec![c];
                path.extend(walk(&nbrs, start, c));
                path.windows(2).map(|w| label(w[0], w[1]).finite().unwrap()).collect()
            })
            .collect();
        return classify_fork(n, arms);
    }
    if branch.len() == 2 && weights.iter().all(|&k| k == 3) && branch.iter().all(|&b| deg[b] == 3) {
        let leaves_ok = (0..n)
            .filter(|&v| deg[v] == 1)
            .all(|v| branch.contains(&nbrs[v][0]));
        let leaf_count = (0..n).filter(|&v| deg[v] == 1).count();
        if leaves_ok && leaf_count == 4 {
            return ComponentType::Affine(format!("D{}~", n - 1));
        }
    }
    ComponentType::Other
}

/// Vertices along a path starting at `start`, never stepping back to `from`.
fn walk(nbrs: &[Vec<usize>], start: usize, from: usize) -> Vec<usize> {
    let mut out = vec![start];
    let (mut prev, mut cur) = (from, start);
    loop {
        let next: Vec<usize> = nbrs[cur].iter().copied().filter(|&x| x != prev).collect();
        if next.len() != 1 {
            return out;
        }
        out.push(next[0]);
        prev = cur;
        cur = next[0];
    }
}

fn classify_path(seq: &[u32]) -> ComponentType {
    let n = seq.len() + 1;
    let rev: Vec<u32> = seq.iter().rev().copied().collect();
    let sph = |s: String| ComponentType::Spherical(s);
    let aff = |s: String| ComponentType::Affine(s);
    let matches = |pat: &[u32]| seq == pat || rev == pat;
    let special: Vec<u32> = seq.iter().copied().filter(|&k| k != 3).collect();
    if special.is_empty() {
        return sph(format!("A{n}"));
    }
    if matches(&[4, 3]) || matches(&[3, 4]) {
        return sph("B3".into());
    }
    if special == [4] {
        if seq[0] == 4 || seq[seq.len() - 1] == 4 {
            return sph(format!("B{n}"));
        }
        if matches(&[3, 4, 3]) {
            return sph("F4".into());
        }
        if matches(&[3, 3, 4, 3]) {
            return aff("F4~".into());
        }
        return ComponentType::Other;
    }
    if special == [4, 4] && seq[0] == 4 && seq[seq.len() - 1] == 4 {
        return aff(format!("C{}~", n - 1));
    }
    if matches(&[5, 3]) {
        return sph("H3".into());
    }
    if matches(&[5, 3, 3]) {
        return sph("H4".into());
    }
    if matches(&[6, 3]) {
        return aff("G2~".into());
    }
    ComponentType::Other
}

fn classify_fork(n: usize, arms: Vec<Vec<u32>>) -> ComponentType {
    let plain = arms.iter().all(|a| a.iter().all(|&k| k == 3));
    if plain {
        let mut lens: Vec<usize> = arms.iter().map(Vec::len).collect();
        lens.sort_unstable();
        return match lens.as_slice() {
            [1, 1, _] => ComponentType::Spherical(format!("D{n}")),
            [1, 2, 2] => ComponentType::Spherical("E6".into()),
            [1, 2, 3] => ComponentType::Spherical("E7".into()),
            [1, 2, 4] => ComponentType::Spherical("E8".into()),
            [2, 2, 2] => ComponentType::Affine("E6~".into()),
            [1, 3, 3] => ComponentType::Affine("E7~".into()),
            [1, 2, 5] => ComponentType::Affine("E8~".into()),
            _ => ComponentType::Other,
        };
    }
    // B~: two short arms and one arm ending in a 4.
    let short = arms.iter().filter(|a| a.as_slice() == [3]).count();
    let long = arms.iter().find(|a| a.as_slice() != [3]);
    if short == 2 {
        if let Some(arm) = long {
            let (last, rest) = arm.split_last().unwrap();
            if *last == 4 && rest.iter().all(|&k| k == 3) {
                return ComponentType::Affine(format!("B{}~", n - 1));
            }
        }
    }
    ComponentType::Other
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(text: &str) -> CoxeterSystem {
        CoxeterSystem::parse(text).unwrap()
    }

    fn chain(labels: &[u32]) -> CoxeterSystem {
        let n = labels.len() + 1;
        let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
        let mut text = format!("generators {}\n", names.join(" "));
        for i in 0..n {
            for j in i + 1..n {
                let k = if j == i + 1 { labels[i] } else { 2 };
                text.push_str(&format!("m s{i} s{j} {k}\n"));
            }
        }
        sys(&text)
    }

    fn single(s: &CoxeterSystem) -> ComponentType {
        let r = classify(s);
        assert_eq!(r.components.len(), 1);
        r.types[0].clone()
    }

    #[test]
    fn universal_rank_three_is_other() {
        let r = classify(&CoxeterSystem::universal(3));
        assert_eq!(r.components, vec![vec![0, 1, 2]]);
        assert_eq!(r.types, vec![ComponentType::Other]);
    }

    #[test]
    fn commuting_pair_splits() {
        let r = classify(&sys("generators a b\nm a b 2"));
        assert_eq!(r.components.len(), 2);
        assert!(r.types.iter().all(|t| *t == ComponentType::Spherical("A1".into())));
    }

    #[test]
    fn infinite_dihedral_is_affine() {
        assert_eq!(single(&CoxeterSystem::universal(2)), ComponentType::Affine("A1~".into()));
    }

    #[test]
    fn paths() {
        let s = |x: &str| ComponentType::Spherical(x.into());
        let a = |x: &str| ComponentType::Affine(x.into());
        assert_eq!(single(&chain(&[3, 3, 3])), s("A4"));
        assert_eq!(single(&chain(&[4, 3, 3])), s("B4"));
        assert_eq!(single(&chain(&[3, 3, 4])), s("B4"));
        assert_eq!(single(&chain(&[3, 4, 3])), s("F4"));
        assert_eq!(single(&chain(&[5, 3])), s("H3"));
        assert_eq!(single(&chain(&[3, 3, 5])), s("H4"));
        assert_eq!(single(&chain(&[5])), s("I2(5)"));
        assert_eq!(single(&chain(&[4, 4])), a("C2~"));
        assert_eq!(single(&chain(&[4, 3, 4])), a("C3~"));
        assert_eq!(single(&chain(&[3, 6])), a("G2~"));
        assert_eq!(single(&chain(&[3, 4, 3, 3])), a("F4~"));
        assert_eq!(single(&chain(&[5, 3, 3, 3])), ComponentType::Other);
        assert_eq!(single(&chain(&[4, 3, 5])), ComponentType::Other);
    }

    #[test]
    fn cycles_and_forks() {
        let tri = CoxeterSystem::uniform(3, 3);
        assert_eq!(single(&tri), ComponentType::Affine("A2~".into()));
        assert_eq!(single(&CoxeterSystem::uniform(3, 4)), ComponentType::Other);

        let d4 = sys("generators c x y z\nm c x 3\nm c y 3\nm c z 3\nm x y 2\nm x z 2\nm y z 2");
        assert_eq!(single(&d4), ComponentType::Spherical("D4".into()));
        let b3t = sys("generators c x y z\nm c x 3\nm c y 3\nm c z 4\nm x y 2\nm x z 2\nm y z 2");
        assert_eq!(single(&b3t), ComponentType::Affine("B3~".into()));

        let mut text = String::from("generators c a b d e\n");
        for (x, y) in [("c", "a"), ("c", "b"), ("c", "d"), ("c", "e")] {
            text.push_str(&format!("m {x} {y} 3\n"));
        }
        for (x, y) in [("a", "b"), ("a", "d"), ("a", "e"), ("b", "d"), ("b", "e"), ("d", "e")] {
            text.push_str(&format!("m {x} {y} 2\n"));
        }
        assert_eq!(single(&sys(&text)), ComponentType::Affine("D4~".into()));
    }

    fn tree(n: usize, edges: &[(usize, usize)]) -> CoxeterSystem {
        let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let mut text = format!("generators {}\n", names.join(" "));
        for i in 0..n {
            for j in i + 1..n {
                let adj = edges.contains(&(i, j)) || edges.contains(&(j, i));
                text.push_str(&format!("m v{i} v{j} {}\n", if adj { 3 } else { 2 }));
            }
        }
        sys(&text)
    }

    #[test]
    fn exceptional_forks() {
        // arms measured from the branch vertex 0
        let e6 = tree(6, &[(0, 1), (0, 2), (2, 3), (0, 4), (4, 5)]);
        assert_eq!(single(&e6), ComponentType::Spherical("E6".into()));
        let e8 = tree(8, &[(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6), (6, 7)]);
        assert_eq!(single(&e8), ComponentType::Spherical("E8".into()));
        let e6t = tree(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]);
        assert_eq!(single(&e6t), ComponentType::Affine("E6~".into()));
        let d5t = tree(6, &[(0, 1), (0, 2), (0, 3), (3, 4), (3, 5)]);
        assert_eq!(single(&d5t), ComponentType::Affine("D5~".into()));
        let d5 = tree(5, &[(0, 1), (0, 2), (0, 3), (3, 4)]);
        assert_eq!(single(&d5), ComponentType::Spherical("D5".into()));
    }

    #[test]
    fn permutation_invariance() {
        let a = sys("generators a b c d\nm a b 4\nm b c 3\nm c d 3\nm a c 2\nm a d 2\nm b d 2");
        let b = sys("generators d c b a\nm a b 4\nm b c 3\nm c d 3\nm a c 2\nm a d 2\nm b d 2");
        assert_eq!(classify(&a).types, classify(&b).types);
    }
}
