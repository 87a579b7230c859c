//! Two-qutrit density matrices and the basis convention shared by every
//! other module.
//!
//! Basis state `|m1 m2>` (each `m` in `{0, 1, 2}`) lives at index
//! `3 * m1 + m2`; its total-`S_z` eigenvalue is `m1 + m2 - 2`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, HERMITIAN_TOL};

/// Local dimension of each qutrit.
pub const QUTRIT: usize = 3;
/// Dimension of the joint two-qutrit space.
pub const DIM: usize = QUTRIT * QUTRIT;

/// Trace tolerance for a valid density matrix.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;

#[inline]
pub fn basis_index(m1: usize, m2: usize) -> usize {
    QUTRIT * m1 + m2
}

#[inline]
pub fn split_index(k: usize) -> (usize, usize) {
    (k / QUTRIT, k % QUTRIT)
}

/// Total `S_z` eigenvalue of a basis state, in `{-2, ..., 2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SzLabel(i8);

impl SzLabel {
    pub const ALL: [SzLabel; 5] = [SzLabel(-2), SzLabel(-1), SzLabel(0), SzLabel(1), SzLabel(2)];

    pub fn new(value: i32) -> Result<Self> {
        if (-2..=2).contains(&value) {
            Ok(Self(value as i8))
        } else {
            Err(Error::OutOfRange {
                name: "Sz",
                value: value as f64,
                lo: -2.0,
                hi: 2.0,
            })
        }
    }

    /// Label of the basis state at joint index `k`.
    pub fn of_index(k: usize) -> Self {
        let (m1, m2) = split_index(k);
        Self(m1 as i8 + m2 as i8 - 2)
    }

    #[inline]
    pub fn value(self) -> i32 {
        self.0 as i32
    }

    /// Position in `ALL`.
    #[inline]
    pub fn slot(self) -> usize {
        (self.0 + 2) as usize
    }
}

/// A validated 9x9 two-qutrit density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validates shape, Hermiticity, unit trace and positivity.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_psd_tolerance(m, PSD_TOL)
    }

    /// Like [`DensityMatrix::new`] with a caller-chosen bound on the most
    /// negative eigenvalue.
    pub fn with_psd_tolerance(m: ComplexMatrix, psd_tol: f64) -> Result<Self> {
        if m.rows() != DIM || m.cols() != DIM {
            return Err(Error::Shape(format!(
                "density matrix must be {DIM}x{DIM}, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if !m.is_finite() {
            return Err(Error::InvariantViolation("non-finite density matrix entry".into()));
        }
        let deviation = m.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvariantViolation(format!("trace {tr} differs from 1")));
        }
        let min_eig = hermitian_eigenvalues(&m)?[0];
        if min_eig < -psd_tol {
            return Err(Error::InvariantViolation(format!(
                "smallest eigenvalue {min_eig:e} is negative"
            )));
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    /// Populations `<m1 m2| rho |m1 m2>`.
    pub fn populations(&self) -> Vec<f64> {
        self.0.diagonal().iter().map(|z| z.re).collect()
    }

    /// Exchange of the two qutrits.
    pub fn swap_qutrits(&self) -> Self {
        let swap = |k: usize| {
            let (a, b) = split_index(k);
            basis_index(b, a)
        };
        Self(ComplexMatrix::from_fn(DIM, DIM, |i, j| {
            self.0[(swap(i), swap(j))]
        }))
    }

    /// Product state `rho_a (x) rho_b` of two single-qutrit density matrices.
    pub fn product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        if a.rows() != QUTRIT || a.cols() != QUTRIT || b.rows() != QUTRIT || b.cols() != QUTRIT {
            return Err(Error::Shape("product factors must be 3x3".into()));
        }
        let m = ComplexMatrix::from_fn(DIM, DIM, |i, j| {
            let (i1, i2) = split_index(i);
            let (j1, j2) = split_index(j);
            a[(i1, j1)] * b[(i2, j2)]
        });
        Self::new(m)
    }

    pub fn maximally_mixed() -> Self {
        Self(ComplexMatrix::identity(DIM).scale(C64::new(1.0 / DIM as f64, 0.0)))
    }

    /// Projector onto a normalised two-qutrit vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        if psi.len() != DIM {
            return Err(Error::Shape(format!("state vector must have {DIM} entries")));
        }
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvariantViolation(format!("state norm {norm} differs from 1")));
        }
        Ok(Self(ComplexMatrix::outer(psi, psi)))
    }
}

/// Basis vector `|m1 m2>`.
pub fn basis_ket(m1: usize, m2: usize) -> [C64; DIM] {
    let mut v = [C64::new(0.0, 0.0); DIM];
    v[basis_index(m1, m2)] = C64::new(1.0, 0.0);
    v
}

/// `(|00> + |11> + |22>) / sqrt 3`.
pub fn psi_plus() -> [C64; DIM] {
    let amp = C64::new(1.0 / 3f64.sqrt(), 0.0);
    let mut v = [C64::new(0.0, 0.0); DIM];
    for m in 0..QUTRIT {
        v[basis_index(m, m)] = amp;
    }
    v
}

/// `(|01><01| + |12><12| + |20><20|) / 3`.
pub fn sigma_plus() -> DensityMatrix {
    diagonal_mixture(&[(0, 1), (1, 2), (2, 0)])
}

/// `(|10><10| + |21><21| + |02><02|) / 3`.
pub fn sigma_minus() -> DensityMatrix {
    diagonal_mixture(&[(1, 0), (2, 1), (0, 2)])
}

fn diagonal_mixture(states: &[(usize, usize)]) -> DensityMatrix {
    let mut diag = [0.0; DIM];
    for &(m1, m2) in states {
        diag[basis_index(m1, m2)] = 1.0 / states.len() as f64;
    }
    DensityMatrix(ComplexMatrix::from_real_diagonal(&diag))
}

/// The one-parameter Horodecki family
/// `(2/7) P+ + (a/7) sigma+ + ((5 - a)/7) sigma-`, valid for `2 <= a <= 5`.
pub fn horodecki_state(a: f64) -> Result<DensityMatrix> {
    if !(2.0..=5.0).contains(&a) {
        return Err(Error::OutOfRange {
            name: "a",
            value: a,
            lo: 2.0,
            hi: 5.0,
        });
    }
    let p_plus = ComplexMatrix::outer(&psi_plus(), &psi_plus());
    let m = p_plus
        .scale(C64::new(2.0 / 7.0, 0.0))
        .add(&sigma_plus().0.scale(C64::new(a / 7.0, 0.0)))
        .add(&sigma_minus().0.scale(C64::new((5.0 - a) / 7.0, 0.0)));
    Ok(DensityMatrix(m))
}

/// The five product vectors of the "Tiles" unextendible product basis.
pub fn upb_vectors() -> [[C64; DIM]; 5] {
    let h = 1.0 / 2f64.sqrt();
    let combo = |terms: &[(usize, usize, f64)]| {
        let mut v = [C64::new(0.0, 0.0); DIM];
        for &(m1, m2, amp) in terms {
            v[basis_index(m1, m2)] += C64::new(amp, 0.0);
        }
        v
    };
    let uniform = [C64::new(1.0 / 3.0, 0.0); DIM];
    [
        // |0>(|0> - |1>)
        combo(&[(0, 0, h), (0, 1, -h)]),
        // (|0> - |1>)|2>
        combo(&[(0, 2, h), (1, 2, -h)]),
        // |2>(|1> - |2>)
        combo(&[(2, 1, h), (2, 2, -h)]),
        // (|1> - |2>)|0>
        combo(&[(1, 0, h), (2, 0, -h)]),
        // (|0> + |1> + |2>)(|0> + |1> + |2>) / 3
        uniform,
    ]
}

/// Bound entangled state `(I - sum_j |phi_j><phi_j|) / 4` built from the
/// unextendible product basis.
pub fn upb_state() -> DensityMatrix {
    let projector = upb_projector();
    let m = ComplexMatrix::identity(DIM)
        .sub(&projector)
        .scale(C64::new(0.25, 0.0));
    DensityMatrix(m)
}

/// `sum_j |phi_j><phi_j|` over the UPB vectors.
pub fn upb_projector() -> ComplexMatrix {
    upb_vectors()
        .iter()
        .fold(ComplexMatrix::zeros(DIM, DIM), |acc, v| {
            acc.add(&ComplexMatrix::outer(v, v))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn assert_valid(rho: &DensityMatrix) {
        DensityMatrix::new(rho.matrix().clone()).expect("density matrix invariants");
    }

    #[test]
    fn horodecki_entries_at_a4() {
        let rho = horodecki_state(4.0).unwrap();
        let i00 = basis_index(0, 0);
        let i11 = basis_index(1, 1);
        let i01 = basis_index(0, 1);
        let i10 = basis_index(1, 0);
        assert_abs_diff_eq!(rho.entry(i00, i00).re, 2.0 / 21.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.entry(i00, i11).re, 2.0 / 21.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.entry(i01, i01).re, 4.0 / 21.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.entry(i10, i10).re, 1.0 / 21.0, epsilon = 1e-15);
    }

    #[test]
    fn horodecki_family_is_valid_over_range() {
        for k in 0..=30 {
            let a = 2.0 + 0.1 * k as f64;
            let rho = horodecki_state(a.min(5.0)).unwrap();
            assert_abs_diff_eq!(rho.matrix().trace().re, 1.0, epsilon = 1e-12);
            assert_valid(&rho);
        }
    }

    #[test]
    fn horodecki_rejects_out_of_range() {
        assert!(matches!(horodecki_state(1.99), Err(Error::OutOfRange { .. })));
        assert!(matches!(horodecki_state(5.01), Err(Error::OutOfRange { .. })));
        assert!(horodecki_state(f64::NAN).is_err());
    }

    #[test]
    fn component_states_are_unit_and_valid() {
        let psi = psi_plus();
        let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        assert_abs_diff_eq!(n.sqrt(), 1.0, epsilon = 1e-12);
        for v in upb_vectors() {
            let n: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            assert_abs_diff_eq!(n.sqrt(), 1.0, epsilon = 1e-12);
        }
        for rho in [sigma_plus(), sigma_minus()] {
            assert_abs_diff_eq!(rho.matrix().trace().re, 1.0, epsilon = 1e-15);
            assert_valid(&rho);
        }
    }

    #[test]
    fn upb_projector_is_idempotent() {
        let p = upb_projector();
        let p2 = &p * &p;
        assert!(p2.max_abs_diff(&p) < 1e-10);
        let vs = upb_vectors();
        for i in 0..5 {
            for j in 0..i {
                let ip: C64 = vs[i].iter().zip(&vs[j]).map(|(a, b)| a.conj() * b).sum();
                assert!(ip.norm() < 1e-12, "phi_{i} and phi_{j} overlap");
            }
        }
    }

    #[test]
    fn upb_state_is_valid() {
        let rho = upb_state();
        assert_abs_diff_eq!(rho.matrix().trace().re, 1.0, epsilon = 1e-12);
        assert_valid(&rho);
    }

    #[test]
    fn sz_labels() {
        assert_eq!(SzLabel::of_index(basis_index(0, 0)).value(), -2);
        assert_eq!(SzLabel::of_index(basis_index(1, 1)).value(), 0);
        assert_eq!(SzLabel::of_index(basis_index(2, 2)).value(), 2);
        assert_eq!(SzLabel::of_index(basis_index(0, 1)).value(), -1);
        assert!(SzLabel::new(3).is_err());
        for (k, s) in SzLabel::ALL.iter().enumerate() {
            assert_eq!(s.slot(), k);
        }
    }

    #[test]
    fn density_matrix_validation() {
        let bad_trace = ComplexMatrix::identity(DIM);
        assert!(matches!(
            DensityMatrix::new(bad_trace),
            Err(Error::InvariantViolation(_))
        ));
        let mut not_psd = ComplexMatrix::from_real_diagonal(&[0.5; DIM]);
        not_psd[(0, 0)] = C64::new(-3.0, 0.0);
        assert!(DensityMatrix::new(not_psd).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::identity(3)).is_err());
    }
}
