//! Exact rational simplex for packing-type programs
//!
//! ```text
//! maximize c·x  subject to  A x ≤ b,  x ≥ 0,   with b ≥ 0
//! ```
//!
//! The origin is feasible, so a single phase suffices. Dense tableau with
//! Bland's rule, which cannot cycle on degenerate pivots.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: Rational,
    /// Optimal primal point.
    pub x: Vec<Rational>,
    /// Optimal multipliers of the `A x ≤ b` rows: `y ≥ 0`, `Aᵀy ≥ c`, `b·y = value`.
    pub y: Vec<Rational>,
    pub pivots: usize,
}

pub fn maximize(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> Result<LpSolution> {
    let m = a.len();
    let nvar = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != nvar) {
        return Err(Error::Dimension("constraint matrix shape".into()));
    }
    if b.iter().any(Signed::is_negative) {
        return Err(Error::Dimension("right-hand side must be nonnegative".into()));
    }
    let width = nvar + m;
    // rows: [A | I | b]; objective row holds reduced costs z_j - c_j
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..m).map(|k| if k == i { Rational::from_integer(1.into()) } else { Rational::zero() }));
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut obj: Vec<Rational> = c.iter().map(|v| -v.clone()).collect();
    obj.extend(std::iter::repeat_n(Rational::zero(), m + 1));
    let mut basis: Vec<usize> = (nvar..width).collect();
    let mut pivots = 0;

    while let Some(enter) = (0..width).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in rows.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[width] / &row[enter];
            let better = match &leave {
                None => true,
                Some((k, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*k]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (pr, _) = leave.ok_or(Error::Unbounded)?;
        pivot(&mut rows, &mut obj, pr, enter);
        basis[pr] = enter;
        pivots += 1;
    }

    let mut x = vec![Rational::zero(); nvar];
    for (i, &v) in basis.iter().enumerate() {
        if v < nvar {
            x[v] = rows[i][width].clone();
        }
    }
    let y = obj[nvar..width].to_vec();
    Ok(LpSolution {
        value: obj[width].clone(),
        x,
        y,
        pivots,
    })
}

fn pivot(rows: &mut [Vec<Rational>], obj: &mut [Rational], pr: usize, pc: usize) {
    let inv = rows[pr][pc].recip();
    for v in rows[pr].iter_mut() {
        if !v.is_zero() {
            *v *= &inv;
        }
    }
    let pivot_row = rows[pr].clone();
    let eliminate = |row: &mut [Rational]| {
        let factor = row[pc].clone();
        if factor.is_zero() {
            return;
        }
        for (v, p) in row.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &factor * p;
            }
        }
    };
    for (i, row) in rows.iter_mut().enumerate() {
        if i != pr {
            eliminate(row);
        }
    }
    eliminate(obj);
}
