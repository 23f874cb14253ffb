//! The three bounds on `S = Σ wᵢ P(eᵢ)`: weighted independence number α
//! (classical), Lovász number ϑ (quantum) and fractional packing number α*
//! (exclusivity principle), with α ≤ ϑ ≤ α*.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::graph::{enumerate_maximal_cliques, Graph, VertexSet};
use crate::lp;
use crate::rational::{self, Rational};
use crate::sdp::{self, TraceSdp};
use crate::settings::{check_cap, Settings};

/// Maximum-weight stable set by branch and bound (default cap 64 vertices).
pub fn independence_number(g: &Graph) -> Result<(Rational, VertexSet)> {
    independence_number_capped(g, Settings::default().limits.independence)
}

pub fn independence_number_capped(g: &Graph, cap: usize) -> Result<(Rational, VertexSet)> {
    check_cap("independence_number", g.order(), cap.min(64))?;
    let n = g.order();
    let (scaled, denominator) = integer_weights(g.weights())?;
    let neighbors: Vec<u64> = (0..n).map(|v| g.neighbors(v).mask()).collect();
    // heaviest first, lowest index on ties
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scaled[b].cmp(&scaled[a]).then(a.cmp(&b)));

    let mut search = StableSearch {
        weights: &scaled,
        neighbors: &neighbors,
        order: &order,
        best: 0,
        best_set: 0,
    };
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let (greedy, greedy_set) = search.greedy(all);
    search.best = greedy;
    search.best_set = greedy_set;
    search.branch(all, 0, 0);

    let value = Rational::new(BigInt::from(search.best), denominator);
    Ok((value, VertexSet::from_mask(n, search.best_set)))
}

/// Weights scaled by the common denominator; fails if the total would not
/// fit in 128 bits.
fn integer_weights(weights: &[Rational]) -> Result<(Vec<u128>, BigInt)> {
    let denominator = weights
        .iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let scaled: Vec<u128> = weights
        .iter()
        .map(|w| (w.numer() * (&denominator / w.denom())).to_u128())
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Numerical("weights too large for exact branch and bound".into()))?;
    scaled
        .iter()
        .try_fold(0u128, |acc, &w| acc.checked_add(w))
        .ok_or_else(|| Error::Numerical("total weight overflows exact branch and bound".into()))?;
    Ok((scaled, denominator))
}

struct StableSearch<'a> {
    weights: &'a [u128],
    neighbors: &'a [u64],
    order: &'a [usize],
    best: u128,
    best_set: u64,
}

impl StableSearch<'_> {
    fn greedy(&self, candidates: u64) -> (u128, u64) {
        let mut cand = candidates;
        let mut total = 0;
        let mut set = 0u64;
        for &v in self.order {
            if cand >> v & 1 == 1 {
                total += self.weights[v];
                set |= 1 << v;
                cand &= !self.neighbors[v] & !(1 << v);
            }
        }
        (total, set)
    }

    /// Greedy clique cover of `candidates`; each clique contributes its
    /// heaviest member, which is an upper bound on any stable subset.
    fn cover_bound(&self, candidates: u64) -> u128 {
        let mut cliques: Vec<u64> = Vec::new();
        let mut bound = 0;
        for &v in self.order {
            if candidates >> v & 1 == 0 {
                continue;
            }
            match cliques.iter_mut().find(|c| **c & !self.neighbors[v] == 0) {
                Some(c) => *c |= 1 << v,
                None => {
                    cliques.push(1 << v);
                    bound += self.weights[v];
                }
            }
        }
        bound
    }

    fn branch(&mut self, candidates: u64, current: u128, chosen: u64) {
        if candidates == 0 {
            if current > self.best {
                self.best = current;
                self.best_set = chosen;
            }
            return;
        }
        if current + self.cover_bound(candidates) <= self.best {
            return;
        }
        let v = *self
            .order
            .iter()
            .find(|&&v| candidates >> v & 1 == 1)
            .expect("candidates nonempty");
        let bit = 1u64 << v;
        self.branch(candidates & !self.neighbors[v] & !bit, current + self.weights[v], chosen | bit);
        self.branch(candidates & !bit, current, chosen);
    }
}

/// Optimal solution of the clique-constrained packing program.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalPacking {
    pub value: Rational,
    /// Optimal `p ≥ 0` with every clique sum at most 1.
    pub assignment: Vec<Rational>,
    /// Maximal cliques used as constraint rows, in enumeration order.
    pub cliques: Vec<VertexSet>,
    /// Dual optimum: a fractional clique cover with total `value`.
    pub cover: Vec<Rational>,
}

pub fn fractional_packing_number(g: &Graph) -> Result<FractionalPacking> {
    fractional_packing_number_capped(g, Settings::default().limits.fractional_packing)
}

pub fn fractional_packing_number_capped(g: &Graph, cap: usize) -> Result<FractionalPacking> {
    check_cap("fractional_packing_number", g.order(), cap)?;
    let n = g.order();
    let cliques = enumerate_maximal_cliques(g);
    let rows: Vec<Vec<Rational>> = cliques
        .iter()
        .map(|c| {
            (0..n)
                .map(|v| if c.contains(v) { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    let rhs = vec![Rational::one(); cliques.len()];
    let sol = lp::maximize(g.weights(), &rows, &rhs)?;
    Ok(FractionalPacking {
        value: sol.value,
        assignment: sol.x,
        cliques,
        cover: sol.y,
    })
}

#[derive(Debug, Clone)]
pub struct ThetaBracket {
    pub lower: f64,
    pub upper: f64,
    /// Feasible matrix of the trace-normalized program attaining `lower`:
    /// PSD, unit trace, zero on every edge.
    pub witness: DMatrix<f64>,
    /// Edge multipliers `y` certifying `upper = λ_max(W + Σ y_ij E_ij)`.
    pub edge_multipliers: Vec<((usize, usize), f64)>,
    pub iterations: usize,
}

/// The weight matrix `W_ij = √(wᵢ wⱼ)`.
pub fn theta_weight_matrix(g: &Graph) -> DMatrix<f64> {
    let roots: Vec<f64> = g.weights_f64().iter().map(|w| w.sqrt()).collect();
    DMatrix::from_fn(g.order(), g.order(), |i, j| roots[i] * roots[j])
}

/// Lovász number `ϑ(G,w) = max ⟨W, X⟩` over `X ⪰ 0`, `tr X = 1`, `X_ij = 0`
/// on edges, bracketed to width `settings.tol`.
pub fn lovasz_theta(g: &Graph, settings: &Settings) -> Result<ThetaBracket> {
    settings.validate()?;
    check_cap("lovasz_theta", g.order(), settings.limits.theta)?;
    let n = g.order();
    if n == 0 {
        return Ok(ThetaBracket {
            lower: 0.0,
            upper: 0.0,
            witness: DMatrix::zeros(0, 0),
            edge_multipliers: vec![],
            iterations: 0,
        });
    }
    let edges = g.edges();
    let problem = TraceSdp {
        cost: -theta_weight_matrix(g),
        zero_pairs: edges.clone(),
    };
    let tol = settings.tol;
    let out = problem.solve(settings.max_iter, |b| b.width() <= tol)?;
    let (lower, upper) = (-out.bracket.upper, -out.bracket.lower);
    if !out.converged {
        return Err(Error::Nonconvergence {
            lower,
            upper,
            iterations: out.iterations,
        });
    }
    Ok(ThetaBracket {
        lower,
        upper,
        witness: out.primal,
        // the dual slack is C - sI - Σ y E with C = -W, so W + Σ y E ⪯ -s I
        edge_multipliers: edges.into_iter().zip(out.multipliers).collect(),
        iterations: out.iterations,
    })
}

/// Upper bound on ϑ implied by a set of edge multipliers.
pub fn theta_upper_from_multipliers(g: &Graph, multipliers: &[((usize, usize), f64)]) -> f64 {
    let mut m = theta_weight_matrix(g);
    for &((i, j), y) in multipliers {
        m[(i, j)] += y;
        m[(j, i)] += y;
    }
    sdp::max_eigenvalue(&m) + sdp::eigen_margin(&m)
}

#[derive(Debug, Clone)]
pub struct BoundsReport {
    pub alpha: Rational,
    pub alpha_witness: VertexSet,
    pub theta: ThetaBracket,
    pub alpha_star: FractionalPacking,
}

impl BoundsReport {
    pub fn theta_lower(&self) -> f64 {
        self.theta.lower
    }

    pub fn theta_upper(&self) -> f64 {
        self.theta.upper
    }

    /// `{"alpha", "alpha_witness", "theta": {"lower", "upper"}, "alpha_star", "alpha_star_witness"}`
    pub fn to_json(&self) -> Value {
        json!({
            "alpha": rational::format(&self.alpha),
            "alpha_witness": self.alpha_witness,
            "theta": {"lower": self.theta.lower, "upper": self.theta.upper},
            "alpha_star": rational::format(&self.alpha_star.value),
            "alpha_star_witness": self.alpha_star.assignment.iter().map(rational::format).collect::<Vec<_>>(),
        })
    }
}

impl Serialize for BoundsReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// All three bounds, checked against `α ≤ ϑ ≤ α*` before returning.
pub fn bounds_report(g: &Graph, settings: &Settings) -> Result<BoundsReport> {
    settings.validate()?;
    let (alpha, alpha_witness) = independence_number_capped(g, settings.limits.independence)?;
    let alpha_star = fractional_packing_number_capped(g, settings.limits.fractional_packing)?;
    let theta = lovasz_theta(g, settings)?;
    let report = BoundsReport {
        alpha,
        alpha_witness,
        theta,
        alpha_star,
    };
    check_ordering(&report, settings.tol)?;
    Ok(report)
}

fn check_ordering(r: &BoundsReport, tol: f64) -> Result<()> {
    let alpha = rational::to_f64(&r.alpha);
    let alpha_star = rational::to_f64(&r.alpha_star.value);
    let slack = tol * alpha_star.max(1.0);
    if alpha > r.theta.upper + slack {
        return Err(Error::OrderingViolation(format!(
            "alpha {alpha} exceeds theta upper bound {}",
            r.theta.upper
        )));
    }
    if r.theta.lower > alpha_star + slack {
        return Err(Error::OrderingViolation(format!(
            "theta lower bound {} exceeds alpha* {alpha_star}",
            r.theta.lower
        )));
    }
    if r.alpha > r.alpha_star.value {
        return Err(Error::OrderingViolation("alpha exceeds alpha*".into()));
    }
    Ok(())
}

/// [`bounds_report`] over many graphs, in input order.
pub fn bounds_many(graphs: &[Graph], settings: &Settings, exec: Execution) -> Vec<Result<BoundsReport>> {
    exec::map(exec, graphs, |g| bounds_report(g, settings))
}
