//! Corpus generators, independent oracles and CLI plumbing shared by the
//! integration targets.
#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use exclusivity::{Graph, Rational};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, density: f64, weighted: bool) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.random_bool(density))
        .collect();
    let weights = weighted.then(|| random_weights(rng, n));
    Graph::from_edge_list(n, &edges, weights).unwrap()
}

/// Rationals `k/4` in `[1, 5]`.
pub fn random_weights<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| Rational::new(BigInt::from(rng.random_range(4..=20)), BigInt::from(4)))
        .collect()
}

/// Random 2-coloured graph with shuffled labels.
pub fn random_bipartite<R: Rng>(rng: &mut R, n: usize) -> Graph {
    let side: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| side[i] != side[j])
        .filter(|_| rng.random_bool(0.5))
        .collect();
    Graph::from_edge_list(n, &edges, None).unwrap()
}

/// Exhaustive maximum-weight stable set over all `2ⁿ` subsets.
pub fn brute_force_alpha(g: &Graph) -> Rational {
    let n = g.order();
    let mut best = Rational::zero();
    'subsets: for mask in 0u32..1 << n {
        let members: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                if g.adjacent(i, j) {
                    continue 'subsets;
                }
            }
        }
        let total: Rational = members.iter().map(|&v| g.weight(v).clone()).sum();
        if total > best {
            best = total;
        }
    }
    best
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
fn bareiss_det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return 0;
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn next_combination(c: &mut [usize], total: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < total - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Clique-polytope maximum by brute-force vertex enumeration: every choice
/// of `n` tight constraints among `p ≥ 0` and the clique rows is solved by
/// Cramer's rule, feasible vertices are scored. Integer weights only.
pub fn vertex_enumeration_alpha_star(g: &Graph, cliques: &[Vec<usize>], weights: &[i128]) -> Rational {
    let n = g.order();
    if n == 0 {
        return Rational::zero();
    }
    // rows: unit vectors (rhs 0), then clique indicators (rhs 1)
    let mut rows: Vec<(Vec<i128>, i128)> = (0..n)
        .map(|i| ((0..n).map(|j| i128::from(i == j)).collect(), 0))
        .collect();
    for c in cliques {
        rows.push(((0..n).map(|j| i128::from(c.contains(&j))).collect(), 1));
    }
    let mut best: Option<Rational> = None;
    let mut choice: Vec<usize> = (0..n).collect();
    loop {
        let a: Vec<Vec<i128>> = choice.iter().map(|&r| rows[r].0.clone()).collect();
        let det = bareiss_det(a.clone());
        if det != 0 {
            let x: Vec<Rational> = (0..n)
                .map(|col| {
                    let mut ai = a.clone();
                    for (row, &r) in ai.iter_mut().zip(&choice) {
                        row[col] = rows[r].1;
                    }
                    Rational::new(BigInt::from(bareiss_det(ai)), BigInt::from(det))
                })
                .collect();
            let feasible = x.iter().all(|v| *v >= Rational::zero())
                && cliques.iter().all(|c| c.iter().map(|&v| x[v].clone()).sum::<Rational>() <= Rational::from_integer(1.into()));
            if feasible {
                let value: Rational = x.iter().zip(weights).map(|(v, &w)| v * Rational::from_integer(w.into())).sum();
                if best.as_ref().is_none_or(|b| value > *b) {
                    best = Some(value);
                }
            }
        }
        if !next_combination(&mut choice, rows.len()) {
            break;
        }
    }
    best.expect("the origin is always a vertex")
}

/// Whether `members` induces a cycle in `g` (or in its complement).
pub fn induces_cycle(g: &Graph, members: &[usize], complement: bool) -> bool {
    let adj = |i: usize, j: usize| g.adjacent(i, j) != complement;
    if members.len() < 3 {
        return false;
    }
    if members.iter().any(|&v| members.iter().filter(|&&u| u != v && adj(u, v)).count() != 2) {
        return false;
    }
    let mut seen = vec![members[0]];
    let mut stack = vec![members[0]];
    while let Some(v) = stack.pop() {
        for &u in members {
            if u != v && adj(u, v) && !seen.contains(&u) {
                seen.push(u);
                stack.push(u);
            }
        }
    }
    seen.len() == members.len()
}

pub fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

pub struct Run {
    pub stdout: Vec<u8>,
    pub code: i32,
}

impl Run {
    pub fn json(&self) -> serde_json::Value {
        serde_json::from_slice(&self.stdout).expect("stdout is JSON")
    }
}

pub fn run_cli(args: &[String]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_exclusivity"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        stdout: out.stdout,
        code: out.status.code().unwrap_or(-1),
    }
}

/// Named CLI invocations exercised by the golden and determinism checks.
pub fn golden_cases() -> Vec<(&'static str, Vec<String>)> {
    let f = fixture;
    let cases: Vec<(&str, Vec<String>)> = vec![
        ("bounds_chsh", vec!["bounds".into(), "--builtin".into(), "chsh".into()]),
        ("bounds_kcbs", vec!["bounds".into(), "--builtin".into(), "kcbs".into()]),
        ("bounds_cycle7", vec!["bounds".into(), "--cycle".into(), "7".into()]),
        ("bounds_circulant", vec!["bounds".into(), "--circulant".into(), "8".into(), "1,4".into()]),
        ("bounds_graph6", vec!["bounds".into(), "--graph6".into(), "Dhc".into()]),
        ("bounds_weighted", vec!["bounds".into(), "--edges".into(), f("c5_weighted.json")]),
        ("scenario_chsh", vec!["scenario".into(), "--scenario".into(), f("chsh_scenario.json"), "--expression".into(), f("chsh_expression.json")]),
        ("scenario_kcbs", vec!["scenario".into(), "--scenario".into(), f("kcbs_scenario.json")]),
        ("scenario_three_outcomes", vec!["scenario".into(), "--scenario".into(), f("three_outcomes.json")]),
        ("membership_th_umbrella", vec!["membership".into(), "--cycle".into(), "5".into(), "--body".into(), "th".into(), "--p".into(), "0.4472136,0.4472136,0.4472136,0.4472136,0.4472136".into()]),
        ("membership_th_half", vec!["membership".into(), "--edges".into(), f("c5_edges.json"), "--body".into(), "th".into(), "--assignment".into(), f("half.json")]),
        ("membership_stab_half", vec!["membership".into(), "--cycle".into(), "5".into(), "--body".into(), "stab".into(), "--assignment".into(), f("half.json")]),
        ("membership_qstab_half", vec!["membership".into(), "--cycle".into(), "5".into(), "--body".into(), "qstab".into(), "--assignment".into(), f("half.json")]),
        ("perfect_c5", vec!["perfect".into(), "--edges".into(), f("c5_edges.json")]),
        ("perfect_co_c7", vec!["perfect".into(), "--graph6".into(), "FUzro".into()]),
        ("perfect_c6", vec!["perfect".into(), "--cycle".into(), "6".into()]),
        ("or_verify_umbrella", vec!["or-verify".into(), "--cycle".into(), "5".into(), "--or".into(), f("c5_umbrella.json")]),
        ("or_verify_bad", vec!["or-verify".into(), "--cycle".into(), "5".into(), "--or".into(), f("bad_or.json")]),
        ("or_extract_c5", vec!["or-extract".into(), "--cycle".into(), "5".into()]),
        ("error_bad_cycle", vec!["bounds".into(), "--cycle".into(), "2".into()]),
        ("error_missing_file", vec!["bounds".into(), "--edges".into(), f("no_such_file.json")]),
        ("error_nonconvergence", vec!["bounds".into(), "--cycle".into(), "9".into(), "--max-iter".into(), "3".into()]),
    ];
    cases
}
