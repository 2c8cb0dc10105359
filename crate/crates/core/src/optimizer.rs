//! Outage-minimizing power splits.
//!
//! Replacing each exponential in the CA-NOMA union outage by its first-order
//! expansion gives `A0^2 / a^2 + 2 A0 / (1 - a)` with `A0 = (2^R0 - 1)/(beta xi)`.
//! Its stationary point solves `a^3 - A0 a^2 + 2 A0 a - A0 = 0`. Shifting
//! `a = b + A0/3` leaves the depressed cubic `b^3 + A3 b = A1`, and Cardano's
//! formula gives `b = s - q`. The result is clamped to `1/(1+2^R0)`.
//!
//! The numeric minimizers work on the exact objectives: a 64-point grid picks
//! a bracket, golden-section search refines it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{PowerSplit, SystemParams};
use crate::outage::{union_outage_ca_noma, union_outage_noma};

pub const DEFAULT_TOL: f64 = 1e-6;

const PRE_GRID_POINTS: usize = 64;

/// Largest `A0` for which `A2 = A0 sqrt(1 - 4 A0 / 27)` is real.
pub const A0_MAX: f64 = 27.0 / 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicIntermediates {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub s: f64,
    pub q: f64,
}

impl CubicIntermediates {
    pub fn from_a0(a0: f64) -> Result<Self> {
        if !(a0.is_finite() && a0 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "A0",
                value: a0,
            });
        }
        if a0 > A0_MAX {
            return Err(Error::OutOfModel(a0));
        }
        let a1 = 2.0 / 27.0 * a0.powi(3) - 2.0 / 3.0 * a0 * a0 + a0;
        let a2 = a0 * (1.0 - 4.0 / 27.0 * a0).sqrt();
        let a3 = 2.0 * a0 - a0 * a0 / 3.0;
        let s = ((a1 + a2) / 2.0).cbrt();
        let q = ((-a1 + a2) / 2.0).cbrt();
        Ok(Self {
            a0,
            a1,
            a2,
            a3,
            s,
            q,
        })
    }

    pub fn from_params(p: &SystemParams) -> Result<Self> {
        Self::from_a0(p.rate_factor() / (p.beta() * p.snr()))
    }

    /// Real root `A0/3 + s - q` of the stationarity cubic, before clamping.
    pub fn root(&self) -> f64 {
        self.a0 / 3.0 + self.s - self.q
    }
}

/// `x^3 - A0 x^2 + 2 A0 x - A0`.
pub fn cubic_residual(a0: f64, x: f64) -> f64 {
    ((x - a0) * x + 2.0 * a0) * x - a0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormMin {
    /// `min(root, 1/(1+2^R0))`.
    pub a: PowerSplit,
    pub unclamped: f64,
    pub clamped: bool,
    pub intermediates: CubicIntermediates,
}

/// Approximate outage-minimizing CA-NOMA power split from the cubic.
///
/// Fails with [`Error::OutOfModel`] when `A0 > 27/4`.
pub fn a_min_closed_form(p: &SystemParams) -> Result<ClosedFormMin> {
    let intermediates = CubicIntermediates::from_params(p)?;
    let unclamped = intermediates.root();
    let cap = p.balanced_split();
    let clamped = unclamped >= cap;
    Ok(ClosedFormMin {
        a: PowerSplit::unchecked(if clamped { cap } else { unclamped }),
        unclamped,
        clamped,
        intermediates,
    })
}

fn check_tol(tol: f64) -> Result<f64> {
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

/// Golden-section search for a minimum of `f` inside `(lo, hi)`.
///
/// Only interior points are evaluated. Stops once the bracket is narrower
/// than `tol`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Minimizes `f` on `(0, hi]` assuming it is unimodal there.
///
/// The pre-grid `hi k / 64`, `k = 1..=64` locates the best cell; golden-section
/// search refines inside its two neighbours. The grid point itself and the
/// right endpoint remain candidates, so a boundary minimum is returned exactly.
fn minimize_on_unit_prefix(f: impl Fn(f64) -> f64, hi: f64, tol: f64) -> f64 {
    let grid: Vec<f64> = (1..=PRE_GRID_POINTS)
        .map(|k| hi * k as f64 / PRE_GRID_POINTS as f64)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("non-empty grid");

    let lo = if best == 0 { 0.0 } else { grid[best - 1] };
    let up = grid[(best + 1).min(PRE_GRID_POINTS - 1)];
    let (x, fx) = golden_section(&f, lo, up, tol);

    let mut winner = (grid[best], values[best]);
    if fx < winner.1 {
        winner = (x, fx);
    }
    winner.0
}

/// Exact minimizer of the CA-NOMA union outage over `(0, 1/(1+2^R0)]`.
pub fn a_min_numeric(p: &SystemParams, tol: f64) -> Result<PowerSplit> {
    let tol = check_tol(tol)?;
    let objective = |a: f64| union_outage_ca_noma(p, PowerSplit::unchecked(a));
    let a = minimize_on_unit_prefix(objective, p.balanced_split(), tol);
    Ok(PowerSplit::unchecked(a))
}

/// Minimizer of the regular-NOMA union outage over `(0, 2^-R0)`.
pub fn a_star_noma_numeric(p: &SystemParams, tol: f64) -> Result<PowerSplit> {
    let tol = check_tol(tol)?;
    let objective = |a: f64| union_outage_noma(p, PowerSplit::unchecked(a));
    // 2^-R0 itself is certain outage and never wins against the interior
    let hi = p.sic_limit().min(1.0 - f64::EPSILON);
    let a = minimize_on_unit_prefix(objective, hi, tol);
    Ok(PowerSplit::unchecked(a))
}
