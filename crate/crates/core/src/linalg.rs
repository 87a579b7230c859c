//! Dense complex linear algebra sized for two-qutrit density matrices.
//!
//! Only what the entanglement witnesses need is here: a row-major complex
//! matrix, Hermitian eigenvalues (cyclic Jacobi), singular values (one-sided
//! Jacobi) and the trace norm.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Entrywise tolerance on `|m - m^dagger|` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// Dense complex matrix stored in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting empty shapes,
    /// mismatched lengths and non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("empty shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(k) = data.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Entrywise sum. Panics on shape mismatch.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// Largest entrywise `|a - b|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise `|m - m^dagger|`; infinite for non-square input.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Eigenvalues of a Hermitian matrix, sorted ascending.
///
/// Cyclic complex Jacobi: each rotation first removes the phase of the
/// pivot `a_pq` and then applies the real symmetric Jacobi rotation.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let deviation = m.hermitian_deviation();
    if !(deviation <= HERMITIAN_TOL) {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.rows;
    // Work on the exactly Hermitian part.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return Ok(vec![0.0; n]);
    }

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * 1e-2 * scale {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                // J = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
                let u_pp = C64::new(c, 0.0);
                let u_pq = C64::new(s, 0.0);
                let u_qp = -phase.conj() * s;
                let u_qq = phase.conj() * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * u_pp + akq * u_qp;
                    a[(k, q)] = akp * u_pq + akq * u_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            routine: "hermitian_eigenvalues",
            sweeps: MAX_SWEEPS,
        });
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Singular values, sorted descending; `min(rows, cols)` of them.
///
/// One-sided (Hestenes) Jacobi on the columns, which keeps small singular
/// values accurate to working precision relative to the largest one.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_finite() {
        let k = m.data.iter().position(|z| !z.is_finite()).unwrap();
        return Err(Error::NonFinite {
            row: k / m.cols,
            col: k % m.cols,
        });
    }
    let work = if m.cols > m.rows { m.adjoint() } else { m.clone() };
    let (rows, cols) = (work.rows, work.cols);
    // Column-major copy so that column rotations touch contiguous memory.
    let mut colv: Vec<Vec<C64>> = (0..cols)
        .map(|j| (0..rows).map(|i| work[(i, j)]).collect())
        .collect();

    // Columns below this squared norm cannot move the singular values
    // beyond rounding and are left alone.
    let negligible = (f64::EPSILON * 1e-3 * work.frobenius_norm()).powi(2);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols.saturating_sub(1) {
            for q in p + 1..cols {
                let alpha: f64 = colv[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = colv[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = colv[p]
                    .iter()
                    .zip(&colv[q])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let g = gamma.norm();
                if g == 0.0
                    || g <= 4.0 * f64::EPSILON * (alpha * beta).sqrt()
                    || alpha.min(beta) <= negligible
                {
                    continue;
                }
                rotated = true;
                let phase_conj = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                let (left, right) = colv.split_at_mut(q);
                let (cp, cq) = (&mut left[p], &mut right[0]);
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    let yq = *y * phase_conj;
                    let xp = *x;
                    *x = xp * c - yq * s;
                    *y = xp * s + yq * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            routine: "singular_values",
            sweeps: MAX_SWEEPS,
        });
    }
    let mut sv: Vec<f64> = colv
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Trace norm `||m||_1`, the sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
        let b = random_matrix(rng, n, n);
        b.add(&b.adjoint()).scale(c(0.5, 0.0))
    }

    // Real roots of a monic cubic with three real roots (trigonometric form).
    fn cubic_real_roots(b: f64, cc: f64, d: f64) -> [f64; 3] {
        let p = cc - b * b / 3.0;
        let q = 2.0 * b.powi(3) / 27.0 - b * cc / 3.0 + d;
        let shift = -b / 3.0;
        if p.abs() < 1e-300 {
            let r = (-q).cbrt() + shift;
            return [r, r, r];
        }
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        let mut roots = [0.0; 3];
        for (k, r) in roots.iter_mut().enumerate() {
            *r = m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift;
        }
        roots.sort_by(f64::total_cmp);
        roots
    }

    // det(h - x I) for Hermitian h via LU with partial pivoting; real up to rounding.
    fn char_poly(h: &ComplexMatrix, x: f64) -> f64 {
        let n = h.rows();
        let mut a = h.sub(&ComplexMatrix::identity(n).scale(c(x, 0.0)));
        let mut det = c(1.0, 0.0);
        for k in 0..n {
            let piv = (k..n)
                .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
                .unwrap();
            if a[(piv, k)].norm() == 0.0 {
                return 0.0;
            }
            if piv != k {
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(piv, j)];
                    a[(piv, j)] = tmp;
                }
                det = -det;
            }
            det *= a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / a[(k, k)];
                for j in k..n {
                    let v = a[(k, j)];
                    a[(i, j)] -= f * v;
                }
            }
        }
        det.re
    }

    #[test]
    fn identity_eigenvalues() {
        let ev = hermitian_eigenvalues(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(ev, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_eigenvalues_sorted() {
        let m = ComplexMatrix::from_real_diagonal(&[2.0, -1.0, 0.5]);
        assert_eq!(hermitian_eigenvalues(&m).unwrap(), vec![-1.0, 0.5, 2.0]);
    }

    #[test]
    fn eigenvalues_reject_bad_input() {
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            hermitian_eigenvalues(&rect),
            Err(Error::NonSquare { rows: 2, cols: 3 })
        ));
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = c(0.0, 1e-9);
        assert!(matches!(
            hermitian_eigenvalues(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn two_by_two_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let h = random_hermitian(&mut rng, 2);
            let (a, d, b) = (h[(0, 0)].re, h[(1, 1)].re, h[(0, 1)]);
            let mid = 0.5 * (a + d);
            let rad = (0.25 * (a - d).powi(2) + b.norm_sqr()).sqrt();
            let ev = hermitian_eigenvalues(&h).unwrap();
            assert_abs_diff_eq!(ev[0], mid - rad, epsilon = 1e-12);
            assert_abs_diff_eq!(ev[1], mid + rad, epsilon = 1e-12);
        }
    }

    #[test]
    fn three_by_three_cubic_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let h = random_hermitian(&mut rng, 3);
            // det(xI - h) = x^3 + b x^2 + c x + d
            let tr = h.trace().re;
            let h2 = &h * &h;
            let e2 = 0.5 * (tr * tr - h2.trace().re);
            let det = char_poly(&h, 0.0);
            let roots = cubic_real_roots(-tr, e2, -det);
            let ev = hermitian_eigenvalues(&h).unwrap();
            for (x, r) in ev.iter().zip(roots) {
                assert_abs_diff_eq!(*x, r, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn five_by_five_bisection_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let h = random_hermitian(&mut rng, 5);
            let bound = h.frobenius_norm() + 1.0;
            let grid = 4000;
            let mut roots = Vec::new();
            let mut prev_x = -bound;
            let mut prev_f = char_poly(&h, prev_x);
            for k in 1..=grid {
                let x = -bound + 2.0 * bound * k as f64 / grid as f64;
                let f = char_poly(&h, x);
                if prev_f == 0.0 {
                    roots.push(prev_x);
                } else if prev_f.signum() != f.signum() {
                    let (mut lo, mut hi, flo) = (prev_x, x, prev_f);
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        if char_poly(&h, mid).signum() == flo.signum() {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    roots.push(0.5 * (lo + hi));
                }
                prev_x = x;
                prev_f = f;
            }
            assert_eq!(roots.len(), 5, "grid did not isolate all roots");
            let ev = hermitian_eigenvalues(&h).unwrap();
            for (x, r) in ev.iter().zip(&roots) {
                assert_abs_diff_eq!(*x, *r, epsilon = 1e-10);
            }
            assert_abs_diff_eq!(ev.iter().sum::<f64>(), h.trace().re, epsilon = 1e-10);
        }
    }

    #[test]
    fn singular_values_trivial_cases() {
        assert_eq!(
            singular_values(&ComplexMatrix::zeros(2, 2)).unwrap(),
            vec![0.0, 0.0]
        );
        let m = ComplexMatrix::from_real_diagonal(&[3.0, -4.0]);
        assert_eq!(singular_values(&m).unwrap(), vec![4.0, 3.0]);
    }

    #[test]
    fn realigned_block_cubic_oracle() {
        // The 3x3 population block of the realigned Horodecki state at a = 4.
        let a = 4.0;
        let block = [[2.0, a, 5.0 - a], [5.0 - a, 2.0, a], [a, 5.0 - a, 2.0]];
        let m = ComplexMatrix::from_fn(3, 3, |i, j| c(block[i][j], 0.0));
        let mtm = &m.adjoint() * &m;
        let tr = mtm.trace().re;
        let e2 = 0.5 * (tr * tr - (&mtm * &mtm).trace().re);
        let det = char_poly(&mtm, 0.0);
        let mut expected: Vec<f64> = cubic_real_roots(-tr, e2, -det)
            .iter()
            .map(|x| x.max(0.0).sqrt())
            .collect();
        expected.reverse();
        let sv = singular_values(&m).unwrap();
        for (s, e) in sv.iter().zip(&expected) {
            assert_abs_diff_eq!(*s, *e, epsilon = 1e-10);
        }
        // circulant: 7, sqrt 7, sqrt 7
        assert_abs_diff_eq!(sv[0], 7.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sv[1], 7f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn rectangular_singular_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let m = random_matrix(&mut rng, 3, 5);
        let sv = singular_values(&m).unwrap();
        assert_eq!(sv.len(), 3);
        let sv_t = singular_values(&m.adjoint()).unwrap();
        for (a, b) in sv.iter().zip(&sv_t) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn trace_norm_of_identity() {
        assert_abs_diff_eq!(
            trace_norm(&ComplexMatrix::identity(9)).unwrap(),
            9.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn non_finite_rejected() {
        let err = ComplexMatrix::new(1, 2, vec![c(0.0, 0.0), c(f64::NAN, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { row: 0, col: 1 }));
        assert!(ComplexMatrix::new(2, 2, vec![c(0.0, 0.0); 3]).is_err());
    }

    fn diagonal_phase_unitary(phases: &[f64]) -> ComplexMatrix {
        let n = phases.len();
        ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::from_polar(1.0, phases[i])
            } else {
                c(0.0, 0.0)
            }
        })
    }

    fn matrix_strategy(n: usize) -> impl Strategy<Value = ComplexMatrix> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
            ComplexMatrix::new(n, n, v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn trace_norm_unitarily_invariant(
            m in matrix_strategy(6),
            left in prop::collection::vec(0.0f64..6.3, 6),
            right in prop::collection::vec(0.0f64..6.3, 6),
        ) {
            let u = diagonal_phase_unitary(&left);
            let v = diagonal_phase_unitary(&right);
            let umv = &(&u * &m) * &v;
            let a = trace_norm(&m).unwrap();
            let b = trace_norm(&umv).unwrap();
            prop_assert!((a - b).abs() <= 1e-9);
        }

        #[test]
        fn gram_matrix_is_psd(b in matrix_strategy(5)) {
            let g = &b.adjoint() * &b;
            let ev = hermitian_eigenvalues(&g).unwrap();
            prop_assert!(ev[0] >= -1e-10);
            prop_assert!((ev.iter().sum::<f64>() - g.trace().re).abs() <= 1e-10);
        }

        #[test]
        fn singular_values_match_gram_eigenvalues(m in matrix_strategy(5)) {
            let sv = singular_values(&m).unwrap();
            let mut ev = hermitian_eigenvalues(&(&m.adjoint() * &m)).unwrap();
            ev.reverse();
            for (s, e) in sv.iter().zip(&ev) {
                prop_assert!((s * s - e).abs() <= 1e-9);
            }
            let sq: f64 = sv.iter().map(|s| s * s).sum();
            prop_assert!((sq - m.frobenius_norm().powi(2)).abs() <= 1e-10);
            prop_assert!(sv.windows(2).all(|w| w[0] >= w[1]) && sv.iter().all(|&s| s >= 0.0));
        }
    }
}
