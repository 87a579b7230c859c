//! Collective dephasing of two-qutrit states and the closed-form witnesses
//! of the Horodecki family.

use crate::baths::{BathSpec, FactorTable, FACTOR_TOL};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::{DensityMatrix, SzLabel, DIM};

/// Bound on the most negative eigenvalue accepted after dephasing.
pub const DEPHASED_PSD_TOL: f64 = 1e-9;

/// Multiplies each coherence between `S_z` sectors `M` and `N` by `F_{M,N}`.
pub fn dephase(rho0: &DensityMatrix, factors: &FactorTable) -> Result<DensityMatrix> {
    let src = rho0.matrix();
    let mut out = ComplexMatrix::zeros(DIM, DIM);
    for i in 0..DIM {
        out[(i, i)] = src[(i, i)];
        let m = SzLabel::of_index(i);
        for j in (i + 1)..DIM {
            let n = SzLabel::of_index(j);
            let v = factors.get(m, n) * src[(i, j)];
            out[(i, j)] = v;
            out[(j, i)] = v.conj();
        }
    }
    DensityMatrix::with_psd_tolerance(out, DEPHASED_PSD_TOL).map_err(|e| match e {
        Error::InvariantViolation(msg) => Error::InvariantViolation(format!(
            "dephased state at t = {} is invalid: {msg}",
            factors.time()
        )),
        other => other,
    })
}

/// A state after dephasing, together with the factors that produced it.
#[derive(Clone, Debug)]
pub struct EvolvedState {
    pub time: f64,
    pub rho: DensityMatrix,
    pub factors: FactorTable,
}

impl EvolvedState {
    pub fn new(rho0: &DensityMatrix, factors: FactorTable) -> Result<Self> {
        let rho = dephase(rho0, &factors)?;
        Ok(Self {
            time: factors.time(),
            rho,
            factors,
        })
    }

    /// Evolves `rho0` in `bath` up to time `t`.
    pub fn in_bath(rho0: &DensityMatrix, bath: &BathSpec, t: f64) -> Result<Self> {
        Self::new(rho0, bath.factor_table(t)?)
    }
}

fn check_closed_inputs(a: f64, fs: [f64; 3]) -> Result<[f64; 3]> {
    if !(2.0..=5.0).contains(&a) {
        return Err(Error::OutOfRange {
            name: "a",
            value: a,
            lo: 2.0,
            hi: 5.0,
        });
    }
    let mut out = fs;
    for f in out.iter_mut() {
        if !(0.0..=1.0 + FACTOR_TOL).contains(f) {
            return Err(Error::OutOfRange {
                name: "|F|",
                value: *f,
                lo: 0.0,
                hi: 1.0,
            });
        }
        *f = f.min(1.0);
    }
    Ok(out)
}

/// Realignment witness of the dephased Horodecki state from the moduli
/// `f_k = |F_k|`: `(2/21) max{0, sqrt(3a^2 - 15a + 19) + 2(f1 + f2 + f3) - 7}`.
pub fn horodecki_r_closed(a: f64, f1: f64, f2: f64, f3: f64) -> Result<f64> {
    let [f1, f2, f3] = check_closed_inputs(a, [f1, f2, f3])?;
    let s = (3.0 * a * a - 15.0 * a + 19.0).sqrt() + 2.0 * (f1 + f2 + f3) - 7.0;
    Ok(2.0 / 21.0 * s.max(0.0))
}

/// Negativity of the dephased Horodecki state:
/// `(1/42) sum_k max{0, sqrt((2a - 5)^2 + 16 f_k^2) - 5}`.
pub fn horodecki_n_closed(a: f64, f1: f64, f2: f64, f3: f64) -> Result<f64> {
    let fs = check_closed_inputs(a, [f1, f2, f3])?;
    let b = 2.0 * a - 5.0;
    Ok(fs
        .iter()
        .map(|f| ((b * b + 16.0 * f * f).sqrt() - 5.0).max(0.0))
        .sum::<f64>()
        / 42.0)
}

/// `2(2x + x^4) + sqrt(7) - 7`: the bracket of the realignment witness at
/// `a = 4` when `|F_2| = |F_1|` and `|F_3| = |F_1|^4`.
fn threshold_polynomial(x: f64) -> f64 {
    2.0 * (2.0 * x + x.powi(4)) + 7f64.sqrt() - 7.0
}

/// Value of `|F_1|` below which the `a = 4` state loses its realignment signature.
pub fn f1_threshold() -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if threshold_polynomial(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Time at which `exp(-gamma t^2)` reaches [`f1_threshold`].
pub fn death_time_gaussian(gamma: f64) -> Result<f64> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::BadRate(gamma));
    }
    Ok((-f1_threshold().ln() / gamma).sqrt())
}
