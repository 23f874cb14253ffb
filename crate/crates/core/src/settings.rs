/// Per-operation size caps (graph order).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub independence: usize,
    pub fractional_packing: usize,
    pub theta: usize,
    pub stab_membership: usize,
    pub perfectness: usize,
    pub collapse_check: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            independence: 64,
            fractional_packing: 64,
            theta: 64,
            stab_membership: 20,
            perfectness: 18,
            collapse_check: 14,
        }
    }
}

/// Numerical settings shared by the SDP-backed operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    /// Target bracket width for the Lovász number; boundary band for membership.
    pub tol: f64,
    pub max_iter: usize,
    pub limits: Limits,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            tol: 1e-6,
            max_iter: 500,
            limits: Limits::default(),
        }
    }
}

impl Settings {
    pub fn with_tol(tol: f64) -> Self {
        Settings { tol, ..Settings::default() }
    }

    pub fn validate(&self) -> crate::Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(crate::Error::Tolerance(self.tol));
        }
        if self.max_iter == 0 {
            return Err(crate::Error::Numerical("iteration budget must be at least 1".into()));
        }
        Ok(())
    }
}

pub(crate) fn check_cap(op: &'static str, n: usize, cap: usize) -> crate::Result<()> {
    if n > cap {
        Err(crate::Error::CapExceeded { op, n, cap })
    } else {
        Ok(())
    }
}
