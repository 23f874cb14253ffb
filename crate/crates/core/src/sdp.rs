//! Dense primal-dual interior point method for trace-normalized semidefinite
//! programs with zero-pattern constraints:
//!
//! ```text
//! (P)  minimize ⟨C, X⟩   s.t.  tr X = 1,  X_ij = 0 for (i,j) ∈ F,  X ⪰ 0
//! (D)  maximize s        s.t.  C − s·I − Σ_F y_ij (e_i e_jᵀ + e_j e_iᵀ) ⪰ 0
//! ```
//!
//! Both the Lovász number and theta-body membership reduce to this shape.
//! Iterates follow the HKM search direction with a Mehrotra
//! predictor-corrector; the starting point `X = I/n` is feasible for every
//! zero pattern.
//!
//! Every iteration also produces a certified bracket on the common optimum:
//! the lower end is `λ_min(C − Σ y E)` for the current multipliers (valid for
//! any `y`), the upper end is `⟨C, X̃⟩` for `X̃`, the current primal iterate
//! with the zero pattern imposed exactly and pushed back onto the PSD cone.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct TraceSdp {
    pub cost: DMatrix<f64>,
    pub zero_pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone)]
pub struct SdpOutcome {
    pub bracket: Bracket,
    /// Feasible primal matrix attaining `bracket.upper`.
    pub primal: DMatrix<f64>,
    /// Multipliers on `zero_pairs` attaining `bracket.lower`.
    pub multipliers: Vec<f64>,
    pub iterations: usize,
    /// Whether the caller's stopping rule fired.
    pub converged: bool,
}

const STEP_FRACTION: f64 = 0.95;

impl TraceSdp {
    pub fn order(&self) -> usize {
        self.cost.nrows()
    }

    /// Runs until `stop(&bracket)` holds or `max_iter` iterations elapse.
    /// Returns the best certified bracket seen either way.
    pub fn solve(&self, max_iter: usize, mut stop: impl FnMut(&Bracket) -> bool) -> Result<SdpOutcome> {
        let n = self.order();
        if n == 0 {
            return Err(Error::Dimension("empty semidefinite program".into()));
        }
        if let Some(&(i, j)) = self.zero_pairs.iter().find(|&&(i, j)| i == j || i >= n || j >= n) {
            return Err(Error::Dimension(format!("invalid zero pair ({i}, {j})")));
        }
        let scale = self.cost.amax().max(f64::MIN_POSITIVE);
        let c = &self.cost / scale;
        let m = 1 + self.zero_pairs.len();
        let identity = DMatrix::<f64>::identity(n, n);

        let mut x = &identity / n as f64;
        let s0 = min_eigenvalue(&c) - 1.0;
        let mut y = DVector::<f64>::zeros(m);
        y[0] = s0;
        let mut z = &c - &identity * s0;

        let mut best_lower = (f64::NEG_INFINITY, vec![0.0; m - 1]);
        let mut best_upper = (f64::INFINITY, x.clone());
        let mut iterations = 0;
        let mut converged = false;

        loop {
            let lower = self.certified_lower(&c, &y);
            if lower > best_lower.0 {
                best_lower = (lower, y.iter().skip(1).copied().collect());
            }
            if let Some((upper, xt)) = self.certified_upper(&c, &x) {
                if upper < best_upper.0 {
                    best_upper = (upper, xt);
                }
            }
            let bracket = Bracket {
                lower: best_lower.0 * scale,
                upper: best_upper.0 * scale,
            };
            if stop(&bracket) {
                converged = true;
                break;
            }
            if iterations >= max_iter {
                break;
            }
            iterations += 1;
            match self.step(&c, &mut x, &mut y, &mut z) {
                Ok(()) => {}
                // iterates hit the numerical floor; the bracket is as good as it gets
                Err(_) => break,
            }
        }

        Ok(SdpOutcome {
            bracket: Bracket {
                lower: best_lower.0 * scale,
                upper: best_upper.0 * scale,
            },
            primal: best_upper.1,
            multipliers: best_lower.1.iter().map(|v| v * scale).collect(),
            iterations,
            converged,
        })
    }

    fn adjoint(&self, y: &DVector<f64>, n: usize) -> DMatrix<f64> {
        let mut out = DMatrix::<f64>::identity(n, n) * y[0];
        for (k, &(i, j)) in self.zero_pairs.iter().enumerate() {
            out[(i, j)] += y[k + 1];
            out[(j, i)] += y[k + 1];
        }
        out
    }

    fn apply(&self, p: &DMatrix<f64>) -> DVector<f64> {
        let mut out = DVector::<f64>::zeros(1 + self.zero_pairs.len());
        out[0] = p.trace();
        for (k, &(i, j)) in self.zero_pairs.iter().enumerate() {
            out[k + 1] = p[(i, j)] + p[(j, i)];
        }
        out
    }

    fn certified_lower(&self, c: &DMatrix<f64>, y: &DVector<f64>) -> f64 {
        let mut zy = c.clone();
        for (k, &(i, j)) in self.zero_pairs.iter().enumerate() {
            zy[(i, j)] -= y[k + 1];
            zy[(j, i)] -= y[k + 1];
        }
        min_eigenvalue(&zy) - eigen_margin(&zy)
    }

    fn certified_upper(&self, c: &DMatrix<f64>, x: &DMatrix<f64>) -> Option<(f64, DMatrix<f64>)> {
        let n = x.nrows();
        let mut xt = symmetrize(x);
        for &(i, j) in &self.zero_pairs {
            xt[(i, j)] = 0.0;
            xt[(j, i)] = 0.0;
        }
        let shift = (-min_eigenvalue(&xt)).max(0.0) + eigen_margin(&xt);
        for i in 0..n {
            xt[(i, i)] += shift;
        }
        let trace = xt.trace();
        if !(trace.is_finite() && trace > 0.0) {
            return None;
        }
        xt /= trace;
        Some((c.dot(&xt), xt))
    }

    fn step(&self, c: &DMatrix<f64>, x: &mut DMatrix<f64>, y: &mut DVector<f64>, z: &mut DMatrix<f64>) -> Result<()> {
        let n = x.nrows();
        let identity = DMatrix::<f64>::identity(n, n);
        let mut b = DVector::<f64>::zeros(y.len());
        b[0] = 1.0;

        let z_inv = z
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Numerical("dual slack lost definiteness".into()))?
            .inverse();
        let z_inv = symmetrize(&z_inv);
        let schur = self.schur(x, &z_inv);
        let schur = schur
            .cholesky()
            .ok_or_else(|| Error::Numerical("Schur complement is singular".into()))?;

        let rp = &b - self.apply(x);
        let rd = c - self.adjoint(y, n) - &*z;
        let mu = x.dot(z) / n as f64;
        let base_rhs = &rp + self.apply(x) + self.apply(&(&*x * &rd * &z_inv));

        let direction = |target: &DMatrix<f64>| {
            let rhs = &base_rhs - self.apply(&(target * &z_inv));
            let dy = schur.solve(&rhs);
            let dz = &rd - self.adjoint(&dy, n);
            let dx = symmetrize(&(target * &z_inv - &*x - &*x * &dz * &z_inv));
            (dx, dy, dz)
        };

        // predictor
        let zero = DMatrix::<f64>::zeros(n, n);
        let (dxa, _, dza) = direction(&zero);
        let ap = (STEP_FRACTION * max_step(x, &dxa)?).min(1.0);
        let ad = (STEP_FRACTION * max_step(z, &dza)?).min(1.0);
        let mu_aff = (&*x + &dxa * ap).dot(&(&*z + &dza * ad)) / n as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // corrector
        let target = &identity * (sigma * mu) - &dxa * &dza;
        let (dx, dy, dz) = direction(&target);
        let ap = (STEP_FRACTION * max_step(x, &dx)?).min(1.0);
        let ad = (STEP_FRACTION * max_step(z, &dz)?).min(1.0);
        if !(ap > 0.0 || ad > 0.0) {
            return Err(Error::Numerical("stalled step".into()));
        }
        *x = symmetrize(&(&*x + dx * ap));
        *y += dy * ad;
        *z = symmetrize(&(&*z + dz * ad));
        Ok(())
    }

    /// `M_kl = ⟨A_k, X A_l Z⁻¹⟩` for the trace row and the zero-pattern rows.
    fn schur(&self, x: &DMatrix<f64>, s: &DMatrix<f64>) -> DMatrix<f64> {
        let pairs = &self.zero_pairs;
        let m = 1 + pairs.len();
        let sx = s * x;
        let mut out = DMatrix::<f64>::zeros(m, m);
        out[(0, 0)] = x.dot(s);
        for (k, &(i, j)) in pairs.iter().enumerate() {
            let v = sx[(j, i)] + sx[(i, j)];
            out[(0, k + 1)] = v;
            out[(k + 1, 0)] = v;
        }
        for (l, &(i, j)) in pairs.iter().enumerate() {
            for (k, &(p, q)) in pairs.iter().enumerate().skip(l) {
                let v = x[(p, i)] * s[(j, q)] + x[(p, j)] * s[(i, q)] + x[(q, i)] * s[(j, p)] + x[(q, j)] * s[(i, p)];
                out[(k + 1, l + 1)] = v;
                out[(l + 1, k + 1)] = v;
            }
        }
        out
    }
}

pub fn symmetrize(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

pub fn min_eigenvalue(a: &DMatrix<f64>) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    symmetrize(a).symmetric_eigenvalues().min()
}

pub fn max_eigenvalue(a: &DMatrix<f64>) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    symmetrize(a).symmetric_eigenvalues().max()
}

/// Backward-error allowance for a computed symmetric eigenvalue.
pub fn eigen_margin(a: &DMatrix<f64>) -> f64 {
    8.0 * a.nrows() as f64 * f64::EPSILON * a.norm()
}

/// Largest `α` with `A + α Δ ⪰ 0` (infinite if `Δ ⪰ 0`).
fn max_step(a: &DMatrix<f64>, delta: &DMatrix<f64>) -> Result<f64> {
    let l = a
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Numerical("iterate lost definiteness".into()))?
        .l();
    let left = l
        .solve_lower_triangular(delta)
        .ok_or_else(|| Error::Numerical("singular factor".into()))?;
    let both = l
        .solve_lower_triangular(&left.transpose())
        .ok_or_else(|| Error::Numerical("singular factor".into()))?;
    let lambda = min_eigenvalue(&both);
    Ok(if lambda >= 0.0 { f64::INFINITY } else { -1.0 / lambda })
}
