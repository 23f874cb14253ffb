//! Membership in STAB(G) ⊆ TH(G) ⊆ QSTAB(G) and perfectness.
//!
//! Verdicts follow one boundary policy: a point whose slack is within `tol`
//! of zero is reported inside with `boundary = true`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::bounds_report;
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::graph::{enumerate_maximal_cliques, maximal_stable_sets, Graph, VertexSet};
use crate::lp;
use crate::rational::{self, Rational};
use crate::sdp::{self, TraceSdp};
use crate::settings::{check_cap, Settings};

/// Nonnegative, finite per-vertex probabilities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityAssignment(Vec<f64>);

impl ProbabilityAssignment {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(Error::Assignment(format!("entry {i} is {v}, expected a finite value >= 0")));
        }
        Ok(ProbabilityAssignment(values))
    }

    pub fn uniform(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    /// Indicator vector of a vertex set.
    pub fn labeling(set: &VertexSet) -> Self {
        ProbabilityAssignment((0..set.universe()).map(|v| f64::from(u8::from(set.contains(v)))).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn check_order(&self, g: &Graph) -> Result<()> {
        if self.len() != g.order() {
            return Err(Error::Dimension(format!(
                "assignment has {} entries, graph has order {}",
                self.len(),
                g.order()
            )));
        }
        Ok(())
    }

    fn exact(&self) -> Vec<Rational> {
        self.0
            .iter()
            .map(|&v| rational::from_f64(v).expect("finite by construction"))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Body {
    #[serde(rename = "STAB")]
    Stab,
    #[serde(rename = "TH")]
    Th,
    #[serde(rename = "QSTAB")]
    Qstab,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StableTerm {
    pub set: VertexSet,
    #[serde(serialize_with = "ser_rational")]
    pub coefficient: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Convex combination of stable labelings equal to `gauge · p`
    /// (`gauge = 1` unless the point sits just outside, inside the band).
    StableCombination {
        #[serde(serialize_with = "ser_rational")]
        gauge: Rational,
        terms: Vec<StableTerm>,
    },
    /// `Σ yᵢ xᵢ ≤ bound` holds on every stable labeling but `y·p ≥ 1 > bound`.
    StableSeparator {
        #[serde(serialize_with = "ser_rationals")]
        weights: Vec<Rational>,
        #[serde(serialize_with = "ser_rational")]
        bound: Rational,
    },
    /// `[[1, pᵀ], [p, X]]` with `diag X = p` and `X_ij = 0` on edges.
    MomentMatrix { min_eigenvalue: f64, matrix: Vec<Vec<f64>> },
    /// Feasible `Y ⪰ 0`, `tr Y = 1`, zero off the edges and the diagonal, with
    /// `Σ Y_ii pᵢ − pᵀ Y p = value < 0`; no moment matrix can exist.
    ThetaSeparator { value: f64, matrix: Vec<Vec<f64>> },
    /// The clique with the largest sum (the violated one when outside).
    Clique { clique: VertexSet, sum: f64 },
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format(q))
}

fn ser_rationals<S: serde::Serializer>(qs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(qs.iter().map(rational::format))
}

/// `{"body", "inside", "boundary", "certificate": {...}}`
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipVerdict {
    pub body: Body,
    pub inside: bool,
    pub boundary: bool,
    pub certificate: Certificate,
}

const QSTAB_SLACK: f64 = 1e-12;

/// Every maximal-clique sum at most `1 + 1e-12`, evaluated exactly.
pub fn in_qstab(g: &Graph, p: &ProbabilityAssignment) -> Result<MembershipVerdict> {
    p.check_order(g)?;
    let exact = p.exact();
    let one = Rational::one();
    let slack = rational::from_f64(QSTAB_SLACK)?;
    let cliques = enumerate_maximal_cliques(g);
    let mut best: Option<(VertexSet, Rational)> = None;
    for c in cliques {
        let sum: Rational = c.iter().map(|v| &exact[v]).sum();
        if best.as_ref().is_none_or(|(_, s)| sum > *s) {
            best = Some((c, sum));
        }
    }
    let (clique, sum) = best.unwrap_or_else(|| (VertexSet::empty(0), Rational::zero()));
    let inside = sum <= &one + &slack;
    let boundary = (&sum - &one).abs() <= slack;
    Ok(MembershipVerdict {
        body: Body::Qstab,
        inside,
        boundary,
        certificate: Certificate::Clique {
            clique,
            sum: rational::to_f64(&sum),
        },
    })
}

const GAUGE_CAP: i64 = 2;

/// Exact LP over the maximal stable sets (STAB is down-closed, so dominance
/// by a convex combination suffices): maximize `t` with
/// `Σ λ_S x^S ≥ t·p`, `Σ λ_S ≤ 1`, `t ≤ 2`. Inside iff `t ≥ 1`.
pub fn in_stab(g: &Graph, p: &ProbabilityAssignment, settings: &Settings) -> Result<MembershipVerdict> {
    settings.validate()?;
    p.check_order(g)?;
    check_cap("in_stab", g.order(), settings.limits.stab_membership)?;
    let n = g.order();
    let exact = p.exact();
    let sets = maximal_stable_sets(g);
    let k = sets.len();
    // columns: λ_0..λ_{k-1}, t
    let mut rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = sets
                .iter()
                .map(|s| if s.contains(i) { -Rational::one() } else { Rational::zero() })
                .collect();
            row.push(exact[i].clone());
            row
        })
        .collect();
    let mut total = vec![Rational::one(); k];
    total.push(Rational::zero());
    rows.push(total);
    let mut cap = vec![Rational::zero(); k];
    cap.push(Rational::one());
    rows.push(cap);
    let mut rhs = vec![Rational::zero(); n];
    rhs.push(Rational::one());
    rhs.push(rational::int(GAUGE_CAP));
    let mut objective = vec![Rational::zero(); k];
    objective.push(Rational::one());

    let sol = lp::maximize(&objective, &rows, &rhs)?;
    let gauge = sol.value.clone();
    let max_p = p.values().iter().copied().fold(0.0, f64::max);
    let distance = (rational::to_f64(&gauge) - 1.0).abs() * max_p;
    // at the cap the point is far inside relative to its own scale
    let boundary = gauge < rational::int(GAUGE_CAP) && distance <= settings.tol;
    let inside = gauge >= Rational::one() || boundary;

    let certificate = if inside {
        let target_scale = if gauge >= Rational::one() { Rational::one() } else { gauge.clone() };
        let target: Vec<Rational> = exact.iter().map(|v| v * &target_scale).collect();
        Certificate::StableCombination {
            gauge: target_scale,
            terms: exact_combination(&sets, &sol.x[..k], &target),
        }
    } else {
        Certificate::StableSeparator {
            weights: sol.y[..n].to_vec(),
            bound: sol.y[n].clone(),
        }
    };
    Ok(MembershipVerdict {
        body: Body::Stab,
        inside,
        boundary,
        certificate,
    })
}

/// Turns a dominating combination into one that hits `target` exactly by
/// moving surplus mass from `S` to `S \ {i}`; leftover mass goes to ∅.
fn exact_combination(sets: &[VertexSet], lambda: &[Rational], target: &[Rational]) -> Vec<StableTerm> {
    let n = target.len();
    let mut mass: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for (s, l) in sets.iter().zip(lambda) {
        if l.is_positive() {
            *mass.entry(s.to_vec()).or_insert_with(Rational::zero) += l;
        }
    }
    for (i, want) in target.iter().enumerate() {
        let covered: Rational = mass.iter().filter(|(s, _)| s.contains(&i)).map(|(_, l)| l).sum();
        let mut surplus = covered - want;
        if !surplus.is_positive() {
            continue;
        }
        let holders: Vec<Vec<usize>> = mass.keys().filter(|s| s.contains(&i)).cloned().collect();
        for s in holders {
            if !surplus.is_positive() {
                break;
            }
            let available = mass[&s].clone();
            let moved = if available <= surplus { available } else { surplus.clone() };
            surplus -= &moved;
            let remaining = &mass[&s] - &moved;
            if remaining.is_zero() {
                mass.remove(&s);
            } else {
                mass.insert(s.clone(), remaining);
            }
            let smaller: Vec<usize> = s.into_iter().filter(|&v| v != i).collect();
            *mass.entry(smaller).or_insert_with(Rational::zero) += moved;
        }
    }
    let used: Rational = mass.values().sum();
    let rest = Rational::one() - used;
    if rest.is_positive() {
        *mass.entry(Vec::new()).or_insert_with(Rational::zero) += rest;
    }
    mass.into_iter()
        .map(|(s, coefficient)| StableTerm {
            set: VertexSet::from_members(n, s).expect("members in range"),
            coefficient,
        })
        .collect()
}

/// Theta-body membership through the moment matrix
/// `[[1, pᵀ], [p, X]] ⪰ 0` with `diag X = p` and `X_ij = 0` on edges.
///
/// By a Schur complement this is `max λ_min(Diag(p) − ppᵀ + F) ≥ 0` over
/// symmetric `F` supported on non-edges, which is the trace-normalized SDP
/// with the non-edges as zero pattern.
pub fn in_th(g: &Graph, p: &ProbabilityAssignment, settings: &Settings) -> Result<MembershipVerdict> {
    settings.validate()?;
    p.check_order(g)?;
    check_cap("in_th", g.order(), settings.limits.theta)?;
    let n = g.order();
    let tol = settings.tol;
    let pv = p.values();
    if n == 0 {
        return Ok(MembershipVerdict {
            body: Body::Th,
            inside: true,
            boundary: true,
            certificate: Certificate::MomentMatrix { min_eigenvalue: 0.0, matrix: vec![vec![1.0]] },
        });
    }
    let cost = DMatrix::from_fn(n, n, |i, j| if i == j { pv[i] - pv[i] * pv[i] } else { -pv[i] * pv[j] });
    let non_edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !g.adjacent(i, j))
        .collect();
    let problem = TraceSdp {
        cost: cost.clone(),
        zero_pairs: non_edges.clone(),
    };
    let decided = |lo: f64, up: f64| up < -tol || (lo >= -tol && (lo > tol || up - lo <= tol));
    let out = problem.solve(settings.max_iter, |b| decided(b.lower, b.upper))?;
    let (lo, up) = (out.bracket.lower, out.bracket.upper);
    if !out.converged {
        return Err(Error::Nonconvergence {
            lower: lo,
            upper: up,
            iterations: out.iterations,
        });
    }
    if lo >= -tol {
        let mut block = cost;
        for (&(i, j), y) in non_edges.iter().zip(&out.multipliers) {
            block[(i, j)] -= y;
            block[(j, i)] -= y;
        }
        let mut m = DMatrix::<f64>::zeros(n + 1, n + 1);
        m[(0, 0)] = 1.0;
        for i in 0..n {
            m[(0, i + 1)] = pv[i];
            m[(i + 1, 0)] = pv[i];
            for j in 0..n {
                m[(i + 1, j + 1)] = pv[i] * pv[j] + block[(i, j)];
            }
        }
        for (i, j) in g.edges() {
            m[(i + 1, j + 1)] = 0.0;
            m[(j + 1, i + 1)] = 0.0;
        }
        Ok(MembershipVerdict {
            body: Body::Th,
            inside: true,
            boundary: lo <= tol,
            certificate: Certificate::MomentMatrix {
                min_eigenvalue: sdp::min_eigenvalue(&m),
                matrix: rows_of(&m),
            },
        })
    } else {
        Ok(MembershipVerdict {
            body: Body::Th,
            inside: false,
            boundary: false,
            certificate: Certificate::ThetaSeparator {
                value: up,
                matrix: rows_of(&out.primal),
            },
        })
    }
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HoleKind {
    OddHole,
    OddAntihole,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Perfectness {
    pub perfect: bool,
    pub witness: Option<VertexSet>,
    pub kind: Option<HoleKind>,
}

/// Searches odd vertex subsets of size ≥ 5 (smallest size first, then by
/// bitmask) for an induced odd cycle or its complement.
pub fn is_perfect(g: &Graph, settings: &Settings, exec: Execution) -> Result<Perfectness> {
    check_cap("is_perfect", g.order(), settings.limits.perfectness.min(30))?;
    let n = g.order();
    let nbr: Vec<u64> = (0..n).map(|v| g.neighbors(v).mask()).collect();
    let all = (1u64 << n) - 1;
    let co_nbr: Vec<u64> = (0..n).map(|v| !nbr[v] & all & !(1 << v)).collect();
    for k in (5..=n).step_by(2) {
        let hit = exec::find_first(exec, 0, 1u64 << n, |mask| {
            mask.count_ones() as usize == k && (induced_cycle(&nbr, mask) || induced_cycle(&co_nbr, mask))
        });
        if let Some(mask) = hit {
            let kind = if induced_cycle(&nbr, mask) { HoleKind::OddHole } else { HoleKind::OddAntihole };
            return Ok(Perfectness {
                perfect: false,
                witness: Some(VertexSet::from_mask(n, mask)),
                kind: Some(kind),
            });
        }
    }
    Ok(Perfectness {
        perfect: true,
        witness: None,
        kind: None,
    })
}

/// The subgraph induced on `mask` is a single cycle.
pub(crate) fn induced_cycle(nbr: &[u64], mask: u64) -> bool {
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        if (nbr[v] & mask).count_ones() != 2 {
            return false;
        }
        rest &= rest - 1;
    }
    let start = mask.trailing_zeros() as usize;
    let mut seen = 1u64 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = nbr[v] & mask & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen == mask
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollapseCheck {
    pub perfect: bool,
    /// Whether the bound triples agree with the perfectness verdict.
    pub consistent: bool,
    pub directions: usize,
    /// First weight direction (0 = unit weights) with a strict gap.
    pub separating_direction: Option<usize>,
}

pub const RANDOM_DIRECTIONS: usize = 200;

/// Perfect graphs must give `α = ϑ = α*` in the unit direction and in 200
/// random positive directions; imperfect ones must show a strict gap
/// (beyond `tol`) in at least one of them.
pub fn result3_check(g: &Graph, settings: &Settings, exec: Execution) -> Result<CollapseCheck> {
    check_cap("result3_check", g.order(), settings.limits.collapse_check)?;
    let perfectness = is_perfect(g, settings, exec)?;
    let n = g.order();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut directions = vec![g.clone()];
    for _ in 0..RANDOM_DIRECTIONS {
        let weights = (0..n)
            .map(|_| Rational::new(rng.random_range(4..=20).into(), 4.into()))
            .collect();
        directions.push(g.clone().with_weights(weights)?);
    }
    let reports = exec::map(exec, &directions, |h| bounds_report(h, settings));
    let tol = settings.tol;
    let mut separating = None;
    let mut collapsed = true;
    for (k, r) in reports.into_iter().enumerate() {
        let r = r?;
        let alpha = rational::to_f64(&r.alpha);
        let alpha_star = rational::to_f64(&r.alpha_star.value);
        let gap = alpha < r.theta.lower - tol || r.theta.upper < alpha_star - tol;
        if gap && separating.is_none() {
            separating = Some(k);
        }
        let equal = r.alpha == r.alpha_star.value
            && r.theta.upper <= alpha + tol + 1e-12
            && r.theta.lower >= alpha - tol - 1e-12;
        collapsed &= equal;
    }
    let consistent = if perfectness.perfect { collapsed } else { separating.is_some() };
    Ok(CollapseCheck {
        perfect: perfectness.perfect,
        consistent,
        directions: 1 + RANDOM_DIRECTIONS,
        separating_direction: separating,
    })
}
