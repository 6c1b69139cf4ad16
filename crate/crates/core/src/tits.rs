//! Word problem for arbitrary Coxeter systems by Tits' theorem: a word is
//! reduced iff no word in its braid-move orbit has two equal adjacent
//! letters, and two reduced words are equal iff they share an orbit.

use std::collections::{HashSet, VecDeque};

use crate::error::{CoxError, Result};
use crate::system::{CoxeterSystem, Gen, Label};

/// Default orbit budget; covers rank ≤ 6 words of length ≤ 16 at desk scale.
pub const DEFAULT_BUDGET: usize = 1 << 20;

fn free_reduce(word: &[Gen]) -> Vec<Gen> {
    let mut out: Vec<Gen> = Vec::with_capacity(word.len());
    for &g in word {
        if out.last() == Some(&g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

/// Words obtained from `w` by one braid move.
fn braid_neighbors(sys: &CoxeterSystem, w: &[Gen], out: &mut Vec<Vec<Gen>>) {
    out.clear();
    let n = w.len();
    for i in 0..n.saturating_sub(1) {
        let (a, b) = (w[i], w[i + 1]);
        if a == b {
            continue;
        }
        let Label::Finite(m) = sys.m(a as usize, b as usize) else { continue };
        let m = m as usize;
        if i + m > n {
            continue;
        }
        let alternates = (0..m).all(|k| w[i + k] == if k % 2 == 0 { a } else { b });
        if !alternates {
            continue;
        }
        let mut v = w.to_vec();
        for k in 0..m {
            v[i + k] = if k % 2 == 0 { b } else { a };
        }
        out.push(v);
    }
}

enum Orbit {
    Reduced(Vec<Gen>),
    Deletable(Vec<Gen>),
}

fn explore(sys: &CoxeterSystem, start: Vec<Gen>, budget: usize) -> Result<Orbit> {
    let mut seen: HashSet<Vec<Gen>> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut best = start.clone();
    seen.insert(start.clone());
    queue.push_back(start);
    let mut scratch = Vec::new();
    while let Some(w) = queue.pop_front() {
        if let Some(i) = w.windows(2).position(|p| p[0] == p[1]) {
            let mut v = w;
            v.drain(i..i + 2);
            return Ok(Orbit::Deletable(free_reduce(&v)));
        }
        if w < best {
            best = w.clone();
        }
        braid_neighbors(sys, &w, &mut scratch);
        for v in scratch.drain(..) {
            if seen.insert(v.clone()) {
                if seen.len() > budget {
                    return Err(CoxError::BudgetExhausted(budget));
                }
                queue.push_back(v);
            }
        }
    }
    Ok(Orbit::Reduced(best))
}

/// Shortlex-least reduced word for the element spelled by `word`.
pub fn reduce(sys: &CoxeterSystem, word: &[Gen], budget: usize) -> Result<Vec<Gen>> {
    let mut w = free_reduce(word);
    loop {
        match explore(sys, w, budget)? {
            Orbit::Reduced(best) => return Ok(best),
            Orbit::Deletable(shorter) => w = shorter,
        }
    }
}

/// Exact equality test in an arbitrary system.
pub fn equals_general(sys: &CoxeterSystem, w1: &[Gen], w2: &[Gen], budget: usize) -> Result<bool> {
    Ok(reduce(sys, w1, budget)? == reduce(sys, w2, budget)?)
}
