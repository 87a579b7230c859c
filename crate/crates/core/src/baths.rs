//! Thermal environments and the decoherence factors they induce.
//!
//! The two-qutrit coupling commutes with the total `S_z`, so the reduced
//! dynamics is fully described by complex factors `F_{M,N}(t)` multiplying
//! the coherence between `S_z = M` and `S_z = N` sectors. Units: `hbar = k_B = 1`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::states::SzLabel;

/// Identifier of the frequency sampler, recorded in output metadata.
pub const PRNG_ID: &str = "ChaCha8Rng(rand_chacha 0.3, seed_from_u64) + Uniform::new_inclusive(rand 0.8)";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BathKind {
    Bosonic,
    Spin,
    AnalyticGaussian,
    AnalyticExponential,
}

impl BathKind {
    pub fn name(self) -> &'static str {
        match self {
            BathKind::Bosonic => "bosonic",
            BathKind::Spin => "spin",
            BathKind::AnalyticGaussian => "analytic_gaussian",
            BathKind::AnalyticExponential => "analytic_exponential",
        }
    }

    pub fn is_analytic(self) -> bool {
        matches!(self, BathKind::AnalyticGaussian | BathKind::AnalyticExponential)
    }
}

impl fmt::Display for BathKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BathKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "bosonic" => Ok(BathKind::Bosonic),
            "spin" => Ok(BathKind::Spin),
            "analytic_gaussian" => Ok(BathKind::AnalyticGaussian),
            "analytic_exponential" => Ok(BathKind::AnalyticExponential),
            other => Err(Error::Config(format!("unknown bath kind '{other}'"))),
        }
    }
}

/// Draws `size` frequencies i.i.d. uniform on `[lo, lo + delta]`.
///
/// Exact zeros are rejected and redrawn. `delta == 0` returns `size`
/// copies of `lo` without touching the generator.
pub fn sample_frequencies(lo: f64, delta: f64, size: usize, seed: u64) -> Result<Vec<f64>> {
    if !lo.is_finite() || !delta.is_finite() || lo < 0.0 || delta < 0.0 {
        return Err(Error::BadRange(format!("lo = {lo}, delta = {delta}")));
    }
    if lo == 0.0 && delta == 0.0 {
        return Err(Error::BadRange("zero-width range at zero frequency".into()));
    }
    if size == 0 {
        return Err(Error::BadRange("bath size must be at least 1".into()));
    }
    if delta == 0.0 {
        return Ok(vec![lo; size]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new_inclusive(lo, lo + delta);
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        let w = dist.sample(&mut rng);
        if w > 0.0 {
            out.push(w);
        }
    }
    Ok(out)
}

/// Bose-Einstein occupation `1 / (exp(omega / T) - 1)`; zero at `T = 0`.
pub fn thermal_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        0.0
    } else {
        1.0 / (omega / temperature).exp_m1()
    }
}

/// `tanh(omega / T)` and `sech^2(omega / T)`, with the `T = 0` limits.
fn spin_thermal(omega: f64, temperature: f64) -> (f64, f64) {
    if temperature == 0.0 {
        return (1.0, 0.0);
    }
    let x = omega / temperature;
    let e = (-2.0 * x).exp();
    (x.tanh(), 4.0 * e / ((1.0 + e) * (1.0 + e)))
}

#[derive(Clone, Debug, PartialEq)]
struct Mode {
    omega: f64,
    // bosonic: 2<n> + 1
    thermal_weight: f64,
    tanh: f64,
    sech2: f64,
}

impl Mode {
    fn new(omega: f64, temperature: f64) -> Self {
        let (tanh, sech2) = spin_thermal(omega, temperature);
        Self {
            omega,
            thermal_weight: 2.0 * thermal_occupation(omega, temperature) + 1.0,
            tanh,
            sech2,
        }
    }
}

/// An immutable environment description.
#[derive(Clone, Debug, PartialEq)]
pub struct BathSpec {
    kind: BathKind,
    coupling: f64,
    temperature: f64,
    rate: Option<f64>,
    modes: Vec<Mode>,
}

impl BathSpec {
    /// Bosonic or spin bath over explicit frequencies.
    pub fn new(kind: BathKind, coupling: f64, temperature: f64, frequencies: Vec<f64>) -> Result<Self> {
        if kind.is_analytic() {
            return Err(Error::BadKind {
                kind: kind.name(),
                operation: "explicit frequency lists",
            });
        }
        if !(coupling.is_finite() && coupling > 0.0) {
            return Err(Error::Config(format!("coupling g must be positive, got {coupling}")));
        }
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(Error::Config(format!(
                "temperature must be finite and >= 0, got {temperature}"
            )));
        }
        if frequencies.is_empty() {
            return Err(Error::BadRange("bath needs at least one frequency".into()));
        }
        if let Some(w) = frequencies.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::BadRange(format!("frequency {w} is not strictly positive")));
        }
        let modes = frequencies.iter().map(|&w| Mode::new(w, temperature)).collect();
        Ok(Self {
            kind,
            coupling,
            temperature,
            rate: None,
            modes,
        })
    }

    pub fn bosonic(coupling: f64, temperature: f64, frequencies: Vec<f64>) -> Result<Self> {
        Self::new(BathKind::Bosonic, coupling, temperature, frequencies)
    }

    pub fn spin(coupling: f64, temperature: f64, frequencies: Vec<f64>) -> Result<Self> {
        Self::new(BathKind::Spin, coupling, temperature, frequencies)
    }

    /// Bath whose frequencies are drawn by [`sample_frequencies`].
    pub fn sampled(
        kind: BathKind,
        size: usize,
        coupling: f64,
        temperature: f64,
        lo: f64,
        delta: f64,
        seed: u64,
    ) -> Result<Self> {
        Self::new(kind, coupling, temperature, sample_frequencies(lo, delta, size, seed)?)
    }

    /// Modulus-only phenomenological bath with decay rate `rate`.
    pub fn analytic(kind: BathKind, rate: f64) -> Result<Self> {
        if !kind.is_analytic() {
            return Err(Error::BadKind {
                kind: kind.name(),
                operation: "analytic construction",
            });
        }
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::BadRate(rate));
        }
        Ok(Self {
            kind,
            coupling: 1.0,
            temperature: 0.0,
            rate: Some(rate),
            modes: Vec::new(),
        })
    }

    /// Same modes at a different temperature.
    pub fn with_temperature(&self, temperature: f64) -> Result<Self> {
        if self.kind.is_analytic() {
            return Ok(self.clone());
        }
        Self::new(self.kind, self.coupling, temperature, self.frequencies())
    }

    /// Same modes with a different coupling.
    pub fn with_coupling(&self, coupling: f64) -> Result<Self> {
        if self.kind.is_analytic() {
            return Ok(self.clone());
        }
        Self::new(self.kind, coupling, self.temperature, self.frequencies())
    }

    pub fn kind(&self) -> BathKind {
        self.kind
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn rate(&self) -> Option<f64> {
        self.rate
    }

    pub fn size(&self) -> usize {
        self.modes.len()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.omega).collect()
    }

    /// Log-modulus and phase of `F_{M,N}(t)` for `M != N`.
    fn log_factor(&self, t: f64, m: SzLabel, n: SzLabel) -> (f64, f64) {
        let (mv, nv) = (m.value() as f64, n.value() as f64);
        let d = mv - nv;
        match self.kind {
            BathKind::Bosonic => {
                let (decay, phase) = self.bosonic_sums(t);
                (-d * d * decay, (mv * mv - nv * nv) * phase)
            }
            BathKind::Spin => self.spin_sums(t, -d),
            BathKind::AnalyticGaussian => (-self.rate.unwrap() * t * t * d * d / 4.0, 0.0),
            BathKind::AnalyticExponential => (-self.rate.unwrap() * t * d * d / 4.0, 0.0),
        }
    }

    /// `sum_j (2<n_j>+1) (2g^2/w_j^2) sin^2(w_j t / 2)` and `sum_j Phi_j(t)`.
    fn bosonic_sums(&self, t: f64) -> (f64, f64) {
        let g2 = self.coupling * self.coupling;
        let mut decay = 0.0;
        let mut phase = 0.0;
        for mode in &self.modes {
            let w = mode.omega;
            let s = (0.5 * w * t).sin();
            decay += mode.thermal_weight * 2.0 * g2 / (w * w) * s * s;
            phase += g2 / (w * w) * (w * t - (w * t).sin());
        }
        (decay, phase)
    }

    /// Sum over spins of log-modulus and argument of
    /// `cos(theta) + i tanh(beta w) sin(theta)`, `theta = (g/2) (N - M) w t`.
    fn spin_sums(&self, t: f64, n_minus_m: f64) -> (f64, f64) {
        let mut log_mod = 0.0;
        let mut phase = 0.0;
        for mode in &self.modes {
            let theta = 0.5 * self.coupling * n_minus_m * mode.omega * t;
            let (s, c) = theta.sin_cos();
            log_mod += 0.5 * (-s * s * mode.sech2).ln_1p();
            phase += (mode.tanh * s).atan2(c);
        }
        (log_mod, phase)
    }

    /// `F_{M,N}(t)`.
    pub fn factor(&self, t: f64, m: SzLabel, n: SzLabel) -> Result<C64> {
        check_time(t)?;
        if m == n {
            return Ok(C64::new(1.0, 0.0));
        }
        let (log_mod, phase) = self.log_factor(t, m, n);
        Ok(C64::from_polar(log_mod.exp(), phase))
    }

    /// All 25 factors at time `t`.
    pub fn factor_table(&self, t: f64) -> Result<FactorTable> {
        check_time(t)?;
        let mut entries = [[C64::new(1.0, 0.0); 5]; 5];
        match self.kind {
            BathKind::Bosonic => {
                let (decay, phase) = self.bosonic_sums(t);
                for m in SzLabel::ALL {
                    for n in SzLabel::ALL {
                        if m == n {
                            continue;
                        }
                        let (mv, nv) = (m.value() as f64, n.value() as f64);
                        entries[m.slot()][n.slot()] = C64::from_polar(
                            (-(mv - nv).powi(2) * decay).exp(),
                            (mv * mv - nv * nv) * phase,
                        );
                    }
                }
            }
            BathKind::Spin => {
                // depends only on N - M; one pass over the spins per difference
                let mut by_diff = [C64::new(1.0, 0.0); 5];
                for (d, slot) in by_diff.iter_mut().enumerate().skip(1) {
                    let (log_mod, phase) = self.spin_sums(t, d as f64);
                    *slot = C64::from_polar(log_mod.exp(), phase);
                }
                for m in SzLabel::ALL {
                    for n in SzLabel::ALL {
                        let d = n.value() - m.value();
                        entries[m.slot()][n.slot()] = match d.cmp(&0) {
                            std::cmp::Ordering::Equal => C64::new(1.0, 0.0),
                            std::cmp::Ordering::Greater => by_diff[d as usize],
                            std::cmp::Ordering::Less => by_diff[(-d) as usize].conj(),
                        };
                    }
                }
            }
            BathKind::AnalyticGaussian | BathKind::AnalyticExponential => {
                for m in SzLabel::ALL {
                    for n in SzLabel::ALL {
                        if m != n {
                            let (log_mod, _) = self.log_factor(t, m, n);
                            entries[m.slot()][n.slot()] = C64::new(log_mod.exp(), 0.0);
                        }
                    }
                }
            }
        }
        Ok(FactorTable { time: t, entries })
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "t",
            value: t,
            lo: 0.0,
            hi: f64::INFINITY,
        })
    }
}

/// Decoherence factor of a thermal bosonic bath.
pub fn bosonic_factor(bath: &BathSpec, t: f64, m: SzLabel, n: SzLabel) -> Result<C64> {
    if bath.kind != BathKind::Bosonic {
        return Err(Error::BadKind {
            kind: bath.kind.name(),
            operation: "bosonic_factor",
        });
    }
    bath.factor(t, m, n)
}

/// Decoherence factor of a thermal spin-1/2 bath.
pub fn spin_factor(bath: &BathSpec, t: f64, m: SzLabel, n: SzLabel) -> Result<C64> {
    if bath.kind != BathKind::Spin {
        return Err(Error::BadKind {
            kind: bath.kind.name(),
            operation: "spin_factor",
        });
    }
    bath.factor(t, m, n)
}

/// Early-time Gaussian rate over the `cutoff` lowest frequencies:
/// `2 g^2 sum (2<n>+1)` (bosonic) or `g^2/2 sum w^2 sech^2(w/T)` (spin).
pub fn gaussian_rate(bath: &BathSpec, cutoff: usize) -> Result<f64> {
    if bath.kind.is_analytic() {
        return Err(Error::BadKind {
            kind: bath.kind.name(),
            operation: "gaussian_rate",
        });
    }
    if cutoff == 0 || cutoff > bath.size() {
        return Err(Error::BadCutoff {
            cutoff,
            size: bath.size(),
        });
    }
    let mut modes: Vec<&Mode> = bath.modes.iter().collect();
    modes.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    let g2 = bath.coupling * bath.coupling;
    let lowest = &modes[..cutoff];
    Ok(match bath.kind {
        BathKind::Bosonic => 2.0 * g2 * lowest.iter().map(|m| m.thermal_weight).sum::<f64>(),
        _ => 0.5 * g2 * lowest.iter().map(|m| m.omega * m.omega * m.sech2).sum::<f64>(),
    })
}

/// Phenomenological modulus: `exp(-rate t^2 (M-N)^2 / 4)` (Gaussian) or
/// `exp(-rate t (M-N)^2 / 4)` (exponential).
pub fn analytic_factor(kind: BathKind, rate: f64, t: f64, m: SzLabel, n: SzLabel) -> Result<f64> {
    check_time(t)?;
    let bath = BathSpec::analytic(kind, rate)?;
    Ok(bath.factor(t, m, n)?.re)
}

/// Upper bound on `ln|F_1(t)|` for `n_modes` equally coupled modes spread
/// homogeneously over `[omega1, omega2]`:
/// `-(2 G^2 N / w2^2) [1 - 2 cos((w2+w1) t/2) sin((w2-w1) t/2) / ((w2-w1) t)]`.
pub fn interval_bound(coupling: f64, n_modes: usize, omega1: f64, omega2: f64, t: f64) -> Result<f64> {
    if !(omega1 > 0.0 && omega2 > omega1 && omega2.is_finite()) {
        return Err(Error::BadRange(format!("need 0 < omega1 < omega2, got [{omega1}, {omega2}]")));
    }
    if !(coupling.is_finite() && coupling > 0.0) {
        return Err(Error::BadRange(format!("coupling must be positive, got {coupling}")));
    }
    check_time(t).map_err(|_| Error::BadRange(format!("time must be >= 0, got {t}")))?;
    let half_width = 0.5 * (omega2 - omega1) * t;
    // 2 sin(u) / ((w2 - w1) t) = sin(u) / u
    let sinc = if half_width.abs() < 1e-4 {
        1.0 - half_width * half_width / 6.0
    } else {
        half_width.sin() / half_width
    };
    let bracket = 1.0 - (0.5 * (omega2 + omega1) * t).cos() * sinc;
    Ok(-2.0 * coupling * coupling * n_modes as f64 / (omega2 * omega2) * bracket)
}

/// Decoherence factors `F_{M,N}` for every pair of total-`S_z` labels at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorTable {
    time: f64,
    entries: [[C64; 5]; 5],
}

/// Slack allowed on `|F| <= 1` and on the conjugate symmetry.
pub const FACTOR_TOL: f64 = 1e-12;

impl FactorTable {
    /// Validates unit diagonal, `F_{N,M} = conj F_{M,N}` and `|F| <= 1`.
    pub fn new(time: f64, entries: [[C64; 5]; 5]) -> Result<Self> {
        check_time(time)?;
        for i in 0..5 {
            if entries[i][i] != C64::new(1.0, 0.0) {
                return Err(Error::InvariantViolation(format!(
                    "diagonal factor {} is not 1",
                    entries[i][i]
                )));
            }
            for j in 0..5 {
                let f = entries[i][j];
                if !f.is_finite() || f.norm() > 1.0 + FACTOR_TOL {
                    return Err(Error::InvariantViolation(format!("|F| = {} exceeds 1", f.norm())));
                }
                if (f - entries[j][i].conj()).norm() > FACTOR_TOL {
                    return Err(Error::InvariantViolation(
                        "factor table is not conjugate symmetric".into(),
                    ));
                }
            }
        }
        Ok(Self { time, entries })
    }

    /// Table with every factor equal to one (no decoherence).
    pub fn identity(time: f64) -> Self {
        Self {
            time,
            entries: [[C64::new(1.0, 0.0); 5]; 5],
        }
    }

    /// Table carrying the three factors that act on the Horodecki coherences:
    /// `f1 = F_{-2,0}`, `f2 = F_{2,0}`, `f3 = F_{-2,2}`; others are one.
    pub fn from_horodecki_factors(time: f64, f1: C64, f2: C64, f3: C64) -> Result<Self> {
        let mut entries = [[C64::new(1.0, 0.0); 5]; 5];
        let (m2, z, p2) = (0, 2, 4);
        entries[m2][z] = f1;
        entries[z][m2] = f1.conj();
        entries[p2][z] = f2;
        entries[z][p2] = f2.conj();
        entries[m2][p2] = f3;
        entries[p2][m2] = f3.conj();
        Self::new(time, entries)
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    #[inline]
    pub fn get(&self, m: SzLabel, n: SzLabel) -> C64 {
        self.entries[m.slot()][n.slot()]
    }

    fn at(&self, m: i32, n: i32) -> C64 {
        self.entries[(m + 2) as usize][(n + 2) as usize]
    }

    /// `F_1 = F_{-2,0}`.
    pub fn f1(&self) -> C64 {
        self.at(-2, 0)
    }

    /// `F_2 = F_{2,0}`.
    pub fn f2(&self) -> C64 {
        self.at(2, 0)
    }

    /// `F_3 = F_{-2,2}`.
    pub fn f3(&self) -> C64 {
        self.at(-2, 2)
    }
}

/// Revival time `2 pi n / omega` of a single-frequency bosonic bath.
pub fn revival_time(omega: f64, n: u32) -> f64 {
    2.0 * PI * n as f64 / omega
}
