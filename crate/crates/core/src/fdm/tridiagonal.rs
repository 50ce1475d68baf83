//! Thomas algorithm for tridiagonal systems.

use crate::error::{ensure, Error, Result};

/// Banded system with `sub[i]` at `(i+1, i)`, `main[i]` at `(i, i)` and
/// `sup[i]` at `(i, i+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub sub: Vec<f64>,
    pub main: Vec<f64>,
    pub sup: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    /// Constant-band system `(-delta, 1 + 2 delta, -delta)` of size `len`.
    pub fn heat_implicit(delta: f64, rhs: Vec<f64>) -> Self {
        let len = rhs.len();
        let off = len.saturating_sub(1);
        Self {
            sub: vec![-delta; off],
            main: vec![1.0 + 2.0 * delta; len],
            sup: vec![-delta; off],
            rhs,
        }
    }

    pub fn len(&self) -> usize {
        self.main.len()
    }

    pub fn is_empty(&self) -> bool {
        self.main.is_empty()
    }

    /// Strict row diagonal dominance.
    pub fn is_diagonally_dominant(&self) -> bool {
        let l = self.len();
        (0..l).all(|i| {
            let left = if i > 0 { self.sub[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < l { self.sup[i].abs() } else { 0.0 };
            self.main[i].abs() > left + right
        })
    }

    /// `A x` for the banded matrix.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let l = self.len();
        (0..l)
            .map(|i| {
                let mut v = self.main[i] * x[i];
                if i > 0 {
                    v += self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < l {
                    v += self.sup[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    pub fn solve(&self) -> Result<Vec<f64>> {
        solve_tridiagonal(self)
    }
}

/// Forward elimination and back substitution, O(L).
pub fn solve_tridiagonal(system: &TridiagonalSystem) -> Result<Vec<f64>> {
    let l = system.main.len();
    ensure(l > 0, || "empty tridiagonal system".into())?;
    ensure(system.rhs.len() == l, || {
        format!("rhs has length {}, expected {l}", system.rhs.len())
    })?;
    ensure(system.sub.len() == l - 1 && system.sup.len() == l - 1, || {
        format!(
            "off-diagonals have lengths {}/{}, expected {}",
            system.sub.len(),
            system.sup.len(),
            l - 1
        )
    })?;

    let mut c_prime = vec![0.0; l];
    let mut d_prime = vec![0.0; l];

    let mut pivot = system.main[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(Error::Singular { row: 0 });
    }
    if l > 1 {
        c_prime[0] = system.sup[0] / pivot;
    }
    d_prime[0] = system.rhs[0] / pivot;
    for i in 1..l {
        let a = system.sub[i - 1];
        pivot = system.main[i] - a * c_prime[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::Singular { row: i });
        }
        if i + 1 < l {
            c_prime[i] = system.sup[i] / pivot;
        }
        d_prime[i] = (system.rhs[i] - a * d_prime[i - 1]) / pivot;
    }

    let mut x = d_prime;
    for i in (0..l - 1).rev() {
        x[i] -= c_prime[i] * x[i + 1];
    }
    Ok(x)
}
