//! Orthonormal representations with a handle.
//!
//! Convention: a representation of `g` assigns orthogonal unit vectors to
//! every pair of vertices *adjacent* in `g` (it is an orthonormal
//! representation of the complement), and `Σ wᵢ ⟨ψ|vᵢ⟩²` is a lower bound on
//! ϑ(g, w).

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sets::ProbabilityAssignment;

/// `{"dim": d, "handle": [..], "vectors": [[..], ..]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthonormalRepresentation {
    pub dim: usize,
    pub handle: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    HandleNorm { norm: f64 },
    VectorNorm { vertex: usize, norm: f64 },
    NotOrthogonal { i: usize, j: usize, inner: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrCheck {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

impl OrthonormalRepresentation {
    pub fn from_json(text: &str) -> Result<Self> {
        let rep: Self = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        rep.check_shape()?;
        Ok(rep)
    }

    fn check_shape(&self) -> Result<()> {
        if self.handle.len() != self.dim {
            return Err(Error::Dimension(format!(
                "handle has {} coordinates, dim is {}",
                self.handle.len(),
                self.dim
            )));
        }
        if let Some((v, x)) = self.vectors.iter().enumerate().find(|(_, x)| x.len() != self.dim) {
            return Err(Error::Dimension(format!(
                "vector {v} has {} coordinates, dim is {}",
                x.len(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Squared handle projections `|⟨ψ|vᵢ⟩|²`.
    pub fn projections(&self) -> Vec<f64> {
        self.vectors.iter().map(|v| dot(&self.handle, v).powi(2)).collect()
    }
}

/// Checks unit norms and orthogonality across every edge of `g`.
pub fn verify_or(g: &Graph, rep: &OrthonormalRepresentation, tol: f64) -> Result<OrCheck> {
    rep.check_shape()?;
    if rep.vectors.len() != g.order() {
        return Err(Error::Dimension(format!(
            "{} vectors for a graph of order {}",
            rep.vectors.len(),
            g.order()
        )));
    }
    let mut violations = Vec::new();
    let h = norm(&rep.handle);
    if (h - 1.0).abs() > tol {
        violations.push(Violation::HandleNorm { norm: h });
    }
    for (vertex, v) in rep.vectors.iter().enumerate() {
        let nv = norm(v);
        if (nv - 1.0).abs() > tol {
            violations.push(Violation::VectorNorm { vertex, norm: nv });
        }
    }
    for (i, j) in g.edges() {
        let inner = dot(&rep.vectors[i], &rep.vectors[j]);
        if inner.abs() > tol {
            violations.push(Violation::NotOrthogonal { i, j, inner });
        }
    }
    Ok(OrCheck {
        valid: violations.is_empty(),
        violations,
    })
}

/// `Σ wᵢ |⟨ψ|vᵢ⟩|²`
pub fn or_value(rep: &OrthonormalRepresentation, weights: &[f64]) -> f64 {
    rep.projections().iter().zip(weights).map(|(p, w)| p * w).sum()
}

pub fn quantum_assignment(rep: &OrthonormalRepresentation) -> ProbabilityAssignment {
    ProbabilityAssignment::new(rep.projections().into_iter().map(|p| p.max(0.0)).collect())
        .expect("squared projections are finite and nonnegative")
}

/// Lovász umbrella for the odd cycle `C_n` in ℝ³: handle `(0,0,1)`, ribs at
/// angular step `2πk/n` with `k = (n−1)/2`, and common height chosen so that
/// consecutive ribs are orthogonal.
pub fn umbrella_or(n: usize) -> Result<OrthonormalRepresentation> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::Generator(format!("umbrella needs odd n >= 5, got {n}")));
    }
    let cos_pi_n = (std::f64::consts::PI / n as f64).cos();
    let c2 = cos_pi_n / (1.0 + cos_pi_n);
    let (c, s) = (c2.sqrt(), (1.0 - c2).sqrt());
    let k = (n - 1) / 2;
    let vectors = (0..n)
        .map(|i| {
            let angle = 2.0 * std::f64::consts::PI * (i * k) as f64 / n as f64;
            vec![s * angle.cos(), s * angle.sin(), c]
        })
        .collect();
    Ok(OrthonormalRepresentation {
        dim: 3,
        handle: vec![0.0, 0.0, 1.0],
        vectors,
    })
}

/// Result of converting an optimal theta matrix into vectors.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub rep: OrthonormalRepresentation,
    /// Vertices whose Gram row vanished and received a fill-in vector.
    pub degenerate: Vec<usize>,
    /// Numerical rank of the witness.
    pub rank: usize,
}

const NEGLIGIBLE_NORM_SQ: f64 = 1e-10;

/// Builds a representation and handle from a feasible theta matrix `X`
/// (PSD, unit trace, zero on edges): `X = U Uᵀ`, `vᵢ = uᵢ/|uᵢ|`,
/// `ψ ∝ Σ √wᵢ uᵢ`. By Cauchy–Schwarz the value is at least `⟨W, X⟩`.
pub fn or_from_theta_witness(g: &Graph, witness: &DMatrix<f64>, tol: f64) -> Result<Extraction> {
    let n = g.order();
    if witness.nrows() != n || witness.ncols() != n {
        return Err(Error::Dimension(format!(
            "witness is {}x{}, graph has order {n}",
            witness.nrows(),
            witness.ncols()
        )));
    }
    if n == 0 {
        return Ok(Extraction {
            rep: OrthonormalRepresentation { dim: 1, handle: vec![1.0], vectors: vec![] },
            degenerate: vec![],
            rank: 0,
        });
    }
    let eig = crate::sdp::symmetrize(witness).symmetric_eigen();
    let top = eig.eigenvalues.max().max(0.0);
    let keep: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k] > top * 1e-14).collect();
    if keep.is_empty() {
        return Err(Error::Numerical(format!(
            "witness has no positive spectrum (largest eigenvalue {top:e}, tol {tol:e})"
        )));
    }
    let rank = keep.len();
    let mut dim = rank;
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            keep.iter()
                .map(|&k| eig.eigenvalues[k].sqrt() * eig.eigenvectors[(i, k)])
                .collect()
        })
        .collect();

    let roots: Vec<f64> = g.weights_f64().iter().map(|w| w.sqrt()).collect();
    let mut handle = vec![0.0; dim];
    for (u, r) in rows.iter().zip(&roots) {
        for (h, x) in handle.iter_mut().zip(u) {
            *h += r * x;
        }
    }
    let hn = norm(&handle);
    if hn <= f64::EPSILON {
        return Err(Error::Numerical("handle direction vanished".into()));
    }
    handle.iter_mut().for_each(|h| *h /= hn);

    let mut vectors: Vec<Option<Vec<f64>>> = vec![None; n];
    let mut degenerate = Vec::new();
    for j in 0..n {
        if dot(&rows[j], &rows[j]) < NEGLIGIBLE_NORM_SQ {
            degenerate.push(j);
            continue;
        }
        // remove residual overlap with earlier neighbours
        let earlier: Vec<&[f64]> = g
            .neighbors(j)
            .iter()
            .filter(|&i| i < j)
            .filter_map(|i| vectors[i].as_deref())
            .collect();
        let basis = orthonormal_basis(&earlier);
        let v = project_out(&rows[j], &basis);
        let nv = norm(&v);
        if nv < 1e-6 * norm(&rows[j]) {
            degenerate.push(j);
            continue;
        }
        vectors[j] = Some(v.iter().map(|x| x / nv).collect());
    }
    degenerate.sort_unstable();

    for &d in &degenerate {
        let nbrs: Vec<Vec<f64>> = g
            .neighbors(d)
            .iter()
            .filter_map(|i| vectors[i].clone())
            .collect();
        let refs: Vec<&[f64]> = nbrs.iter().map(Vec::as_slice).collect();
        let basis = orthonormal_basis(&refs);
        let best = (0..dim)
            .map(|k| {
                let mut e = vec![0.0; dim];
                e[k] = 1.0;
                project_out(&e, &basis)
            })
            .max_by(|a, b| norm(a).total_cmp(&norm(b)));
        let fill = match best {
            Some(v) if norm(&v) > 1e-8 => {
                let nv = norm(&v);
                v.into_iter().map(|x| x / nv).collect()
            }
            _ => {
                // neighbours span the space: open a fresh axis
                dim += 1;
                handle.push(0.0);
                for v in vectors.iter_mut().flatten() {
                    v.push(0.0);
                }
                let mut e = vec![0.0; dim];
                e[dim - 1] = 1.0;
                e
            }
        };
        vectors[d] = Some(fill);
    }

    let vectors = vectors
        .into_iter()
        .map(|v| {
            let mut v = v.expect("every vertex assigned");
            v.resize(dim, 0.0);
            v
        })
        .collect();
    Ok(Extraction {
        rep: OrthonormalRepresentation { dim, handle, vectors },
        degenerate,
        rank,
    })
}

fn orthonormal_basis(vectors: &[&[f64]]) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let r = project_out(v, &basis);
        let nr = norm(&r);
        if nr > 1e-9 {
            basis.push(r.into_iter().map(|x| x / nr).collect());
        }
    }
    basis
}

fn project_out(v: &[f64], basis: &[Vec<f64>]) -> Vec<f64> {
    let mut r = v.to_vec();
    // two passes of modified Gram–Schmidt
    for _ in 0..2 {
        for b in basis {
            let c = dot(&r, b);
            r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
    }
    r
}

/// Random representation in dimension `max(n, 1)`: each vector is drawn and
/// then made orthogonal to its already placed neighbours. Squared
/// projections of the random handle give a point of TH(g).
pub fn random_or<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> OrthonormalRepresentation {
    let n = g.order();
    let dim = n.max(1);
    let draw = |rng: &mut R| -> Vec<f64> { (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect() };
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(n);
    for j in 0..n {
        let earlier: Vec<&[f64]> = g.neighbors(j).iter().filter(|&i| i < j).map(|i| vectors[i].as_slice()).collect();
        let basis = orthonormal_basis(&earlier);
        let v = loop {
            let v = project_out(&draw(rng), &basis);
            if norm(&v) > 1e-3 {
                break v;
            }
        };
        let nv = norm(&v);
        vectors.push(v.into_iter().map(|x| x / nv).collect());
    }
    let h = loop {
        let h = draw(rng);
        if norm(&h) > 1e-3 {
            break h;
        }
    };
    let nh = norm(&h);
    OrthonormalRepresentation {
        dim,
        handle: h.into_iter().map(|x| x / nh).collect(),
        vectors,
    }
}
