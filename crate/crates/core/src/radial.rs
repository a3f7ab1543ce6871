//! Radial profiles `u(x) = ψ(|x|)` and their verification against the radial
//! subequation `a + f(p/t) ≥ 0` in jet coordinates `p = ψ′(t)`, `a = ψ″(t)`.
//!
//! Verification is pointwise on a grid. Kink points carry a flag and are
//! skipped, which is the almost-everywhere reading of the criterion.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::functions::IncreasingFn;
use crate::linalg::{Matrix, SymMatrix};
use crate::numerics::derivative;

/// Tabulated `ψ, ψ′, ψ″` on a positive, strictly increasing grid.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadialFunction {
    pub ts: Vec<f64>,
    pub psi: Vec<f64>,
    pub psi1: Vec<f64>,
    pub psi2: Vec<f64>,
    /// Points where `ψ″` is only defined almost everywhere.
    pub flags: Vec<bool>,
    /// `(t₀, m)`: `ψ ≡ m` for `t ≥ t₀`.
    pub plateau: Option<(f64, f64)>,
}

/// Maximum deviations of the tabulated derivatives from finite differences,
/// relative to the largest magnitude of each column.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Consistency {
    pub psi1_rel_err: f64,
    pub psi2_rel_err: f64,
}

impl Consistency {
    pub fn within(&self, tol: f64) -> bool {
        self.psi1_rel_err <= tol && self.psi2_rel_err <= tol
    }
}

impl RadialFunction {
    pub fn new(ts: Vec<f64>, psi: Vec<f64>, psi1: Vec<f64>, psi2: Vec<f64>) -> Result<Self> {
        let flags = alloc::vec![false; ts.len()];
        Self::with_flags(ts, psi, psi1, psi2, flags, None)
    }

    pub fn with_flags(
        ts: Vec<f64>,
        psi: Vec<f64>,
        psi1: Vec<f64>,
        psi2: Vec<f64>,
        flags: Vec<bool>,
        plateau: Option<(f64, f64)>,
    ) -> Result<Self> {
        let n = ts.len();
        if n < 3 || [psi.len(), psi1.len(), psi2.len(), flags.len()].iter().any(|&l| l != n) {
            return Err(invalid!("radial function needs at least 3 points and equal-length columns"));
        }
        if ts.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
            return Err(invalid!("radial grid must lie in (0, ∞); t = 0 is excluded"));
        }
        if ts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid!("radial grid must be strictly increasing"));
        }
        if psi.iter().chain(&psi1).chain(&psi2).any(|v| !v.is_finite()) {
            return Err(invalid!("radial columns must be finite"));
        }
        Ok(Self { ts, psi, psi1, psi2, flags, plateau })
    }

    /// Tabulates closed-form `ψ, ψ′, ψ″` on `ts`.
    pub fn from_fns(
        ts: Vec<f64>,
        psi: impl Fn(f64) -> f64,
        psi1: impl Fn(f64) -> f64,
        psi2: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let a = ts.iter().map(|&t| psi(t)).collect();
        let b = ts.iter().map(|&t| psi1(t)).collect();
        let c = ts.iter().map(|&t| psi2(t)).collect();
        Self::new(ts, a, b, c)
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    /// Compares `ψ′` and `ψ″` with finite differences of `ψ` and `ψ′`,
    /// ignoring flagged points and their neighbours.
    pub fn consistency(&self) -> Consistency {
        let d1 = derivative(&self.ts, &self.psi);
        let d2 = derivative(&self.ts, &self.psi1);
        let n = self.len();
        let near_flag = |i: usize| self.flags[i.saturating_sub(1)..(i + 2).min(n)].iter().any(|&f| f);
        let rel = |col: &[f64], fd: &[f64]| {
            let scale = col.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
            (1..n - 1).filter(|&i| !near_flag(i)).map(|i| (col[i] - fd[i]).abs()).fold(0.0, f64::max) / scale
        };
        Consistency { psi1_rel_err: rel(&self.psi1, &d1), psi2_rel_err: rel(&self.psi2, &d2) }
    }

    /// The profile `t ↦ ψ(c − t)` on the reflected grid `c − ts`.
    pub fn reflect(&self, c: f64) -> Result<Self> {
        let rev = |v: &[f64], sign: f64| v.iter().rev().map(|x| sign * x).collect::<Vec<_>>();
        Self::with_flags(
            self.ts.iter().rev().map(|t| c - t).collect(),
            rev(&self.psi, 1.0),
            rev(&self.psi1, -1.0),
            rev(&self.psi2, 1.0),
            self.flags.iter().rev().copied().collect(),
            None,
        )
    }
}

/// `a + f(p/t)` along the grid.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResidualReport {
    pub residuals: Vec<f64>,
    /// Number of `p/t` values outside a table's range (clamped to its edge).
    pub clamped: usize,
    /// Minimum over unflagged points.
    pub min: f64,
    /// Maximum `|residual|` over unflagged points.
    pub max_abs: f64,
}

impl ResidualReport {
    /// Radially subharmonic at grid resolution, allowing `tol` of round-off.
    pub fn is_subharmonic(&self, tol: f64) -> bool {
        self.min >= -tol
    }
}

pub fn radial_residual(f: &IncreasingFn, rf: &RadialFunction) -> Result<ResidualReport> {
    let mut clamped = 0;
    let mut residuals = Vec::with_capacity(rf.len());
    let (mut min, mut max_abs) = (f64::INFINITY, 0.0f64);
    for i in 0..rf.len() {
        let (fv, c) = f.eval_clamped(rf.psi1[i] / rf.ts[i]);
        clamped += c as usize;
        let r = rf.psi2[i] + fv;
        if r.is_nan() {
            return Err(Error::Numerical(format!("f undefined at p/t = {}", rf.psi1[i] / rf.ts[i])));
        }
        residuals.push(r);
        if !rf.flags[i] {
            min = min.min(r);
            max_abs = max_abs.max(r.abs());
        }
    }
    Ok(ResidualReport { residuals, clamped, min, max_abs })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "lowercase"))]
pub enum Direction {
    /// `p ≥ 0`
    Up,
    /// `p ≤ 0`
    Down,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MonotoneVerdict {
    pub holds: bool,
    pub sign_violations: usize,
    pub residual: ResidualReport,
}

/// Residual nonnegativity (up to `tol`) together with the sign of `ψ′` at
/// every unflagged point.
pub fn verify_monotone_radial(
    f: &IncreasingFn,
    rf: &RadialFunction,
    direction: Direction,
    tol: f64,
) -> Result<MonotoneVerdict> {
    let residual = radial_residual(f, rf)?;
    let sign_violations = (0..rf.len())
        .filter(|&i| !rf.flags[i])
        .filter(|&i| match direction {
            Direction::Up => rf.psi1[i] < 0.0,
            Direction::Down => rf.psi1[i] > 0.0,
        })
        .count();
    Ok(MonotoneVerdict { holds: sign_violations == 0 && residual.is_subharmonic(tol), sign_violations, residual })
}

const PLATEAU_TOL: f64 = 1e-12;

/// True iff `ψ < max ψ` strictly before some `t₀` and `ψ ≡ max ψ` from `t₀` on,
/// the shape of a profile violating the strong maximum principle.
pub fn smp_witness_check(rf: &RadialFunction) -> bool {
    let n = rf.len();
    let (start, m) = match rf.plateau {
        Some((t0, m)) => (rf.ts.partition_point(|&t| t < t0), m),
        None => {
            let m = rf.psi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let start = n - rf.psi.iter().rev().take_while(|&&v| (v - m).abs() <= PLATEAU_TOL).count();
            (start, m)
        }
    };
    let tail_ok = n - start >= 2 && rf.psi[start..].iter().all(|&v| (v - m).abs() <= PLATEAU_TOL);
    tail_ok && start > 0 && rf.psi[..start].iter().all(|&v| v < m)
}

/// Output of the test-function reduction: `φ̄(t) = ⟨p, t⟩ + ⟨Ā t, t⟩`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReducedTestFunction {
    pub p: Vec<f64>,
    pub a_bar: SymMatrix,
}

impl ReducedTestFunction {
    pub fn eval(&self, t: &[f64]) -> f64 {
        crate::linalg::dot(&self.p, t) + self.a_bar.quadratic_form(t)
    }
}

/// Minimises `φ(t, y) = ⟨p,t⟩ + ⟨q,y⟩ + ⟨At,t⟩ + 2⟨By,t⟩ + ⟨Cy,y⟩` over `y`,
/// giving `Ā = A − BᵀC⁻¹B` when `q = 0` and `C ≻ 0`.
///
/// `B` is `ℓ × k`, so the cross term is `2⟨By, t⟩ = 2 yᵀ B t`.
pub fn reduce_test_function(
    p: &[f64],
    q: &[f64],
    a: &SymMatrix,
    b: &Matrix,
    c: &SymMatrix,
) -> Result<ReducedTestFunction> {
    let (k, l) = (p.len(), q.len());
    if a.dim() != k {
        return Err(Error::DimensionMismatch { expected: k, got: a.dim() });
    }
    if c.dim() != l {
        return Err(Error::DimensionMismatch { expected: l, got: c.dim() });
    }
    if b.rows() != l || b.cols() != k {
        return Err(invalid!("B must be {l}×{k}, got {}×{}", b.rows(), b.cols()));
    }
    if q.iter().any(|&v| v != 0.0) {
        return Err(Error::Precondition(
            "q ≠ 0: the infimum over y of φ is not attained at y = 0 to first order, so no C² test function touches from below"
                .into(),
        ));
    }
    let chol = c.cholesky().ok_or_else(|| {
        Error::Precondition("C is not positive definite: φ is unbounded below or degenerate in y".into())
    })?;
    // columns of C⁻¹B
    let cinv_b: Vec<Vec<f64>> = (0..k).map(|j| chol.cholesky_solve(&b.column(j))).collect();
    let a_bar = SymMatrix::from_fn(k, |i, j| {
        let btcb: f64 = (0..l).map(|r| b.get(r, i) * cinv_b[j][r]).sum();
        a.get(i, j) - btcb
    })?;
    Ok(ReducedTestFunction { p: p.to_vec(), a_bar })
}
