//! Dense truncations of terraced and factorable matrices, and the O(n)
//! prefix-sum application of the operator itself.

use num_complex::Complex64;

use crate::sequences::SequenceSpec;
use crate::util::fmt_complex;
use crate::{Result, TerracedError};

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        DenseMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn conj_transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for r in 0..self.rows {
            let row = &self.entries[r * self.cols..(r + 1) * self.cols];
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            out[r] = acc;
        }
        out
    }

    /// Adjoint application `A^H x` without materializing the adjoint.
    pub fn matvec_adjoint(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![Complex64::new(0.0, 0.0); self.cols];
        for r in 0..self.rows {
            let row = &self.entries[r * self.cols..(r + 1) * self.cols];
            let xr = x[r];
            for (c, a) in row.iter().enumerate() {
                out[c] += a.conj() * xr;
            }
        }
        out
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
    }

    /// CSV serialization with complex entries rendered as `re+imj`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                if c > 0 {
                    out.push(',');
                }
                out.push_str(&fmt_complex(self.get(r, c)));
            }
            out.push('\n');
        }
        out
    }
}

/// The square section of a terraced matrix on coordinates `0..n`.
#[derive(Debug, Clone)]
pub struct TruncatedRhaly {
    pub spec: SequenceSpec,
    pub n: usize,
    pub matrix: DenseMatrix,
}

/// Applies the terraced operator to a finite vector in one prefix-sum pass:
/// `out[k] = alpha_k * (f(0) + ... + f(k))`.
pub fn apply_rhaly(spec: &SequenceSpec, f: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(f.len());
    let mut prefix = Complex64::new(0.0, 0.0);
    for (k, v) in f.iter().enumerate() {
        prefix += v;
        out.push(spec.eval(k as u64) * prefix);
    }
    out
}

/// Adjoint application on a finite vector: suffix sums of `conj(alpha_k) g(k)`.
pub fn apply_rhaly_adjoint(spec: &SequenceSpec, g: &[Complex64]) -> Vec<Complex64> {
    let n = g.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let mut suffix = Complex64::new(0.0, 0.0);
    for k in (0..n).rev() {
        suffix += spec.eval(k as u64).conj() * g[k];
        out[k] = suffix;
    }
    out
}

/// Dense lower-triangular section with constant rows `alpha_k` on and below
/// the diagonal.
pub fn truncate_rhaly(spec: &SequenceSpec, n: usize) -> Result<TruncatedRhaly> {
    if n == 0 {
        return Err(TerracedError::invalid("truncation size must be at least 1"));
    }
    let alphas: Vec<Complex64> = (0..n as u64).map(|k| spec.eval(k)).collect();
    let matrix = DenseMatrix::from_fn(n, n, |r, c| {
        if c <= r {
            alphas[r]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(TruncatedRhaly {
        spec: spec.clone(),
        n,
        matrix,
    })
}

/// Dense section of the factorable matrix with entries `alpha_k * beta_j`
/// for `j <= k`.
pub fn truncate_factorable(
    alpha: &SequenceSpec,
    beta: &SequenceSpec,
    n: usize,
) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(TerracedError::invalid("truncation size must be at least 1"));
    }
    let a: Vec<Complex64> = (0..n as u64).map(|k| alpha.eval(k)).collect();
    let b: Vec<Complex64> = (0..n as u64).map(|k| beta.eval(k)).collect();
    Ok(DenseMatrix::from_fn(n, n, |r, c| {
        if c <= r {
            a[r] * b[c]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Sections of `R^* R`: the symmetric matrix whose `(m, n)` entry is the tail
/// sum `sum_{k >= max(m, n)} |alpha_k|^2` over the section. Cross-checked
/// against the literal conjugate-transpose product; a mismatch is an
/// implementation fault, not a user error. For large sections the product
/// check runs on random probe vectors instead of all n^3 multiplications.
pub fn gram_lshape(spec: &SequenceSpec, n: usize) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(TerracedError::invalid("truncation size must be at least 1"));
    }
    let mut tail = vec![0.0f64; n + 1];
    for k in (0..n).rev() {
        tail[k] = tail[k + 1] + spec.abs2(k as u64);
    }
    let gram = DenseMatrix::from_fn(n, n, |r, c| Complex64::new(tail[r.max(c)], 0.0));

    let trunc = truncate_rhaly(spec, n)?;
    let tol = 1e-12 * (1.0 + gram.max_abs_entry());
    if n <= 512 {
        let product = trunc.matrix.conj_transpose().matmul(&trunc.matrix);
        for r in 0..n {
            for c in 0..n {
                let diff = (product.get(r, c) - gram.get(r, c)).norm();
                if diff > tol {
                    return Err(TerracedError::Internal(format!(
                        "gram tail-sum entry ({r},{c}) deviates from R^*R by {diff:.3e}"
                    )));
                }
            }
        }
    } else {
        let mut rng = crate::corpus::SplitMix64::new(0x9a3c_55e1 ^ n as u64);
        for _ in 0..8 {
            let x: Vec<Complex64> = (0..n).map(|_| rng.complex_gaussian()).collect();
            let via_product = apply_rhaly_adjoint(&trunc.spec, &apply_rhaly(&trunc.spec, &x));
            let via_gram = gram.matvec(&x);
            let err: f64 = via_product
                .iter()
                .zip(&via_gram)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            let scale: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if err > 1e-10 * (1.0 + gram.max_abs_entry()) * (1.0 + scale) {
                return Err(TerracedError::Internal(format!(
                    "gram tail-sum probe deviates from R^*R by {err:.3e}"
                )));
            }
        }
    }
    Ok(gram)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn apply_cesaro_averages_constants() {
        let out = apply_rhaly(&SequenceSpec::cesaro(), &[c(1.0, 0.0); 3]);
        for v in out {
            assert!((v - c(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn apply_to_e0_reads_alpha() {
        let spec = SequenceSpec::finite_support(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let out = apply_rhaly(&spec, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(out, vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
    }

    #[test]
    fn apply_hand_prefix_sums() {
        let spec = SequenceSpec::finite_support(vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let out = apply_rhaly(&spec, &[c(1.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(out, vec![c(1.0, 0.0), c(0.0, 0.0), c(6.0, 0.0)]);
    }

    #[test]
    fn truncation_matches_definition() {
        let t = truncate_rhaly(&SequenceSpec::cesaro(), 2).unwrap();
        assert_eq!(t.matrix.get(0, 0), c(1.0, 0.0));
        assert_eq!(t.matrix.get(0, 1), c(0.0, 0.0));
        assert_eq!(t.matrix.get(1, 0), c(0.5, 0.0));
        assert_eq!(t.matrix.get(1, 1), c(0.5, 0.0));
    }

    #[test]
    fn truncation_of_e0() {
        let spec = SequenceSpec::moments(vec![(c(1.0, 0.0), 0.0)]).unwrap();
        let t = truncate_rhaly(&spec, 3).unwrap();
        for r in 0..3 {
            for col in 0..3 {
                let want = if r == 0 && col == 0 { 1.0 } else { 0.0 };
                assert_eq!(t.matrix.get(r, col), c(want, 0.0));
            }
        }
    }

    #[test]
    fn factorable_products() {
        let a = SequenceSpec::finite_support(vec![c(1.0, 0.0), c(2.0, 0.0)]);
        let b = SequenceSpec::finite_support(vec![c(3.0, 0.0), c(4.0, 0.0)]);
        let m = truncate_factorable(&a, &b, 2).unwrap();
        assert_eq!(m.get(0, 0), c(3.0, 0.0));
        assert_eq!(m.get(0, 1), c(0.0, 0.0));
        assert_eq!(m.get(1, 0), c(6.0, 0.0));
        assert_eq!(m.get(1, 1), c(8.0, 0.0));
    }

    #[test]
    fn factorable_with_unit_beta_is_rhaly() {
        let alpha = SequenceSpec::cesaro();
        let beta = SequenceSpec::moments(vec![(c(1.0, 0.0), 1.0)]).unwrap();
        let f = truncate_factorable(&alpha, &beta, 6).unwrap();
        let r = truncate_rhaly(&alpha, 6).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert!((f.get(i, j) - r.matrix.get(i, j)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn gram_e0() {
        let spec = SequenceSpec::moments(vec![(c(1.0, 0.0), 0.0)]).unwrap();
        let g = gram_lshape(&spec, 2).unwrap();
        assert_eq!(g.get(0, 0), c(1.0, 0.0));
        assert_eq!(g.get(0, 1), c(0.0, 0.0));
        assert_eq!(g.get(1, 0), c(0.0, 0.0));
        assert_eq!(g.get(1, 1), c(0.0, 0.0));
    }

    #[test]
    fn gram_two_ones() {
        let spec = SequenceSpec::finite_support(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        let g = gram_lshape(&spec, 2).unwrap();
        assert_eq!(g.get(0, 0), c(2.0, 0.0));
        assert_eq!(g.get(0, 1), c(1.0, 0.0));
        assert_eq!(g.get(1, 0), c(1.0, 0.0));
        assert_eq!(g.get(1, 1), c(1.0, 0.0));
    }

    #[test]
    fn apply_agrees_with_truncation_matvec() {
        let mut rng = crate::corpus::SplitMix64::new(42);
        for _ in 0..20 {
            let len = 2 + (rng.next_u64() % 12) as usize;
            let values: Vec<Complex64> = (0..len).map(|_| rng.complex_gaussian()).collect();
            let spec = SequenceSpec::finite_support(values);
            let f: Vec<Complex64> = (0..len).map(|_| rng.complex_gaussian()).collect();
            let via_apply = apply_rhaly(&spec, &f);
            let via_matrix = truncate_rhaly(&spec, len).unwrap().matrix.matvec(&f);
            for (a, b) in via_apply.iter().zip(&via_matrix) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn adjoint_matches_dense_adjoint() {
        let mut rng = crate::corpus::SplitMix64::new(7);
        let values: Vec<Complex64> = (0..9).map(|_| rng.complex_gaussian()).collect();
        let spec = SequenceSpec::finite_support(values);
        let g: Vec<Complex64> = (0..9).map(|_| rng.complex_gaussian()).collect();
        let fast = apply_rhaly_adjoint(&spec, &g);
        let dense = truncate_rhaly(&spec, 9).unwrap().matrix.matvec_adjoint(&g);
        for (a, b) in fast.iter().zip(&dense) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn csv_dump_shape() {
        let m = DenseMatrix::from_fn(2, 2, |r, c_| c((r + c_) as f64, -1.0));
        let csv = m.to_csv();
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.contains('j'));
    }
}
