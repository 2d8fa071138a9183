//! Interval functionals on natural intervals: the measure `mu`, the
//! quadratic form `l(I, f)`, and the derived quantities `L(I)`, `K(I)`,
//! `A_c`, `B_c`, `J(I)`.
//!
//! `L` and `K` are suprema of quadratic forms over the coordinates of `I`;
//! both are computed through matrix-free Lanczos on structured O(n)
//! applications, with the literal double sum `l_form` kept as the
//! independent reference route.

use num_complex::Complex64;

use crate::jsonout::Json;
use crate::linalg;
use crate::operator::DenseMatrix;
use crate::sequences::SequenceSpec;
use crate::{Result, TerracedError};

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Integer interval `[a, b]` of naturals; cardinality `b + 1 - a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NaturalInterval {
    a: u64,
    b: u64,
}

impl NaturalInterval {
    pub fn new(a: u64, b: u64) -> Result<Self> {
        if a > b {
            return Err(TerracedError::invalid(format!(
                "interval endpoints out of order: [{a}, {b}]"
            )));
        }
        Ok(NaturalInterval { a, b })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn cardinality(&self) -> u64 {
        self.b + 1 - self.a
    }

    pub fn contains(&self, k: u64) -> bool {
        self.a <= k && k <= self.b
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> {
        self.a..=self.b
    }
}

/// `mu(I) = sum_{k in I} |alpha_k|^2`.
pub fn mu(spec: &SequenceSpec, iv: NaturalInterval) -> f64 {
    iv.iter().map(|k| spec.abs2(k)).sum()
}

/// The literal double sum
/// `l(I, f) = sum_{k in I} sum_{n in I, n != k} |alpha_k alpha_n sum_{j=min+1}^{max} f(j)|^2`,
/// with `f` given on the coordinates of `I` only. O(#I^3) on purpose; this is
/// the reference route the faster quadratic-form path is checked against.
pub fn l_form(spec: &SequenceSpec, iv: NaturalInterval, f: &[Complex64]) -> Result<f64> {
    let n = iv.cardinality() as usize;
    if f.len() != n {
        return Err(TerracedError::invalid(format!(
            "l_form: f has {} entries but #I = {n}",
            f.len()
        )));
    }
    let alphas: Vec<Complex64> = iv.iter().map(|k| spec.eval(k)).collect();
    let mut total = 0.0;
    for k in 0..n {
        for m in 0..n {
            if m == k {
                continue;
            }
            let (lo, hi) = if k < m { (k, m) } else { (m, k) };
            let mut inner = Complex64::new(0.0, 0.0);
            for j in (lo + 1)..=hi {
                inner += f[j];
            }
            total += (alphas[k] * alphas[m] * inner).norm_sqr();
        }
    }
    Ok(total)
}

/// Prefix sums `pre[i] = sum_{k=a}^{a+i} |alpha_k|^2` and suffix sums
/// `suf[i] = sum_{k=a+i}^{b} |alpha_k|^2` over the interval.
fn prefix_suffix(spec: &SequenceSpec, iv: NaturalInterval) -> (Vec<f64>, Vec<f64>) {
    let n = iv.cardinality() as usize;
    let w: Vec<f64> = iv.iter().map(|k| spec.abs2(k)).collect();
    let mut pre = vec![0.0; n];
    let mut acc = 0.0;
    for i in 0..n {
        acc += w[i];
        pre[i] = acc;
    }
    let mut suf = vec![0.0; n];
    acc = 0.0;
    for i in (0..n).rev() {
        acc += w[i];
        suf[i] = acc;
    }
    (pre, suf)
}

/// Dense Gram matrix of the rewritten form
/// `l(I, f) = 2 sum_{k<n} |alpha_k|^2 |alpha_n|^2 |sum_{j=k+1}^n f(j)|^2`,
/// over the coordinates `a+1..=b` (the first coordinate never enters).
/// Entry `(p, q) = 2 pre(min(p,q)-1) suf(max(p,q))`.
pub fn l_gram_dense(spec: &SequenceSpec, iv: NaturalInterval) -> DenseMatrix {
    let n = iv.cardinality() as usize;
    if n <= 1 {
        return DenseMatrix::zeros(0, 0);
    }
    let (pre, suf) = prefix_suffix(spec, iv);
    DenseMatrix::from_fn(n - 1, n - 1, |i, j| {
        // matrix coordinate i corresponds to interval offset i+1
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        Complex64::new(2.0 * pre[lo] * suf[hi + 1], 0.0)
    })
}

/// O(n) application of the same Gram form, used by Lanczos.
fn l_gram_apply(pre: &[f64], suf: &[f64], x: &[Complex64]) -> Vec<Complex64> {
    // Coordinates are interval offsets 1..=n-1 (0-based slot i <-> offset i+1).
    let m = x.len();
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    // left[i] = sum_{q <= i} pre[q] x_q, right[i] = sum_{q >= i} suf[q+1] x_q
    let mut acc = Complex64::new(0.0, 0.0);
    let mut left = vec![Complex64::new(0.0, 0.0); m];
    for i in 0..m {
        acc += x[i] * pre[i];
        left[i] = acc;
    }
    let mut right = vec![Complex64::new(0.0, 0.0); m];
    acc = Complex64::new(0.0, 0.0);
    for i in (0..m).rev() {
        acc += x[i] * suf[i + 1];
        right[i] = acc;
    }
    for i in 0..m {
        let tail = if i + 1 < m {
            right[i + 1]
        } else {
            Complex64::new(0.0, 0.0)
        };
        out[i] = (left[i] * suf[i + 1] + tail * pre[i]) * 2.0;
    }
    out
}

/// `L(I)`: square root of `sup l(I, f) / mu(I)` over unit vectors supported
/// in `I`. Zero when `mu(I) = 0` or the interval is a singleton.
pub fn l_value(spec: &SequenceSpec, iv: NaturalInterval) -> f64 {
    l_value_impl(spec, iv, None)
}

/// `L(I)` with an early exit once the running lower bound clears
/// `threshold`; sound for "L > threshold" decisions since the iteration
/// approaches the supremum from below.
pub(crate) fn l_value_threshold(spec: &SequenceSpec, iv: NaturalInterval, threshold: f64) -> f64 {
    l_value_impl(spec, iv, Some(threshold))
}

fn l_value_impl(spec: &SequenceSpec, iv: NaturalInterval, threshold: Option<f64>) -> f64 {
    let m = mu(spec, iv);
    if m <= 0.0 || iv.cardinality() == 1 {
        return 0.0;
    }
    let n = iv.cardinality() as usize;
    let (pre, suf) = prefix_suffix(spec, iv);
    let dim = n - 1;
    let lam_threshold = threshold.map(|t| t * t * m);
    let lam = linalg::lambda_max_psd_threshold(
        |x| l_gram_apply(&pre, &suf, x),
        dim,
        lam_threshold,
    );
    (lam.max(0.0) / m).sqrt()
}

/// `K(I)`: largest singular value of `f -> alpha_k (S_f(k) - (S_f)_I)` on
/// vectors supported in `I`, where `S_f` is the cumulative sum and `(S_f)_I`
/// its mu-average. Zero when `mu(I) = 0`.
pub fn k_value(spec: &SequenceSpec, iv: NaturalInterval) -> f64 {
    let m = mu(spec, iv);
    if m <= 0.0 {
        return 0.0;
    }
    let n = iv.cardinality() as usize;
    let alphas: Vec<Complex64> = iv.iter().map(|k| spec.eval(k)).collect();
    let w: Vec<f64> = alphas.iter().map(|z| z.norm_sqr()).collect();
    // suffix of weights: svw[j] = sum_{k >= j} w_k over the interval
    let mut svw = vec![0.0; n + 1];
    for i in (0..n).rev() {
        svw[i] = svw[i + 1] + w[i];
    }
    // Forward map: g(k) = alpha_k (S_f(k) - (1/mu) sum_j svw[j] f_j)
    let apply = |x: &[Complex64]| -> Vec<Complex64> {
        let mut avg = Complex64::new(0.0, 0.0);
        for j in 0..n {
            avg += x[j] * svw[j];
        }
        avg /= m;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        let mut prefix = Complex64::new(0.0, 0.0);
        for k in 0..n {
            prefix += x[k];
            out[k] = alphas[k] * (prefix - avg);
        }
        out
    };
    // Adjoint: (M^H y)_j = sum_{k >= j} conj(alpha_k) y_k
    //                      - (svw[j]/mu) sum_k conj(alpha_k) y_k
    let apply_adjoint = |y: &[Complex64]| -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        let mut suffix = Complex64::new(0.0, 0.0);
        let mut total = Complex64::new(0.0, 0.0);
        for k in (0..n).rev() {
            let t = alphas[k].conj() * y[k];
            suffix += t;
            out[k] = suffix;
        }
        total += suffix;
        for (j, o) in out.iter_mut().enumerate() {
            *o -= total * (svw[j] / m);
        }
        out
    };
    let top = linalg::top_singular_values(apply, apply_adjoint, n, 1, linalg::lanczos_budget(n, 1));
    top.first().copied().unwrap_or(0.0)
}

/// Dense matrix of the centered cumulative map behind `K(I)`; reference
/// route for tests.
pub fn k_matrix_dense(spec: &SequenceSpec, iv: NaturalInterval) -> DenseMatrix {
    let n = iv.cardinality() as usize;
    let m = mu(spec, iv);
    let alphas: Vec<Complex64> = iv.iter().map(|k| spec.eval(k)).collect();
    let w: Vec<f64> = alphas.iter().map(|z| z.norm_sqr()).collect();
    let mut svw = vec![0.0; n + 1];
    for i in (0..n).rev() {
        svw[i] = svw[i + 1] + w[i];
    }
    DenseMatrix::from_fn(n, n, |k, j| {
        let indicator = if j <= k { 1.0 } else { 0.0 };
        let center = if m > 0.0 { svw[j] / m } else { 0.0 };
        alphas[k] * (indicator - center)
    })
}

/// `(A_c, B_c)` for `c` in `I`: exact finite maxima
/// `A_c = max_{a<=s<=c} (c-s)^{1/2} (sum_{k=a}^s |alpha_k|^2)^{1/2}` and
/// `B_c = max_{c<=s<=b} (s-c)^{1/2} (sum_{k=s}^b |alpha_k|^2)^{1/2}`.
pub fn ab_values(spec: &SequenceSpec, iv: NaturalInterval, c: u64) -> Result<(f64, f64)> {
    if !iv.contains(c) {
        return Err(TerracedError::invalid(format!(
            "split point {c} outside interval [{}, {}]",
            iv.a(),
            iv.b()
        )));
    }
    let (pre, suf) = prefix_suffix(spec, iv);
    let off = (c - iv.a()) as usize;
    let n = iv.cardinality() as usize;
    let mut a_val: f64 = 0.0;
    for s in 0..=off {
        a_val = a_val.max(((off - s) as f64 * pre[s]).sqrt());
    }
    let mut b_val: f64 = 0.0;
    for s in off..n {
        b_val = b_val.max(((s - off) as f64 * suf[s]).sqrt());
    }
    Ok((a_val, b_val))
}

/// `J(I) = min_{c in I} max(A_c, B_c)` with the smallest minimizing `c`.
pub fn j_value(spec: &SequenceSpec, iv: NaturalInterval) -> (f64, u64) {
    let (pre, suf) = prefix_suffix(spec, iv);
    let n = iv.cardinality() as usize;
    let mut best = f64::INFINITY;
    let mut best_c = iv.a();
    for off in 0..n {
        let mut a_val: f64 = 0.0;
        for s in 0..=off {
            a_val = a_val.max((off - s) as f64 * pre[s]);
        }
        let mut b_val: f64 = 0.0;
        for s in off..n {
            b_val = b_val.max((s - off) as f64 * suf[s]);
        }
        let cand = a_val.max(b_val).sqrt();
        if cand < best {
            best = cand;
            best_c = iv.a() + off as u64;
        }
    }
    (best, best_c)
}

/// All interval functionals bundled for reporting.
#[derive(Debug, Clone)]
pub struct IntervalReport {
    pub interval: NaturalInterval,
    pub mu: f64,
    pub l: f64,
    pub k: f64,
    pub j: f64,
    pub argmin_c: u64,
}

pub fn interval_report(spec: &SequenceSpec, iv: NaturalInterval) -> IntervalReport {
    let (j, argmin_c) = j_value(spec, iv);
    let report = IntervalReport {
        interval: iv,
        mu: mu(spec, iv),
        l: l_value(spec, iv),
        k: k_value(spec, iv),
        j,
        argmin_c,
    };
    debug_assert!(
        (report.k - report.l / SQRT2).abs() <= 1e-6 * (1.0 + report.l),
        "K = L/sqrt(2) drifted: K={} L={}",
        report.k,
        report.l
    );
    report
}

impl IntervalReport {
    pub fn to_json(&self) -> Json {
        Json::Obj(vec![
            ("a", Json::U64(self.interval.a())),
            ("b", Json::U64(self.interval.b())),
            ("mu", Json::Num(self.mu)),
            ("L", Json::Num(self.l)),
            ("K", Json::Num(self.k)),
            ("J", Json::Num(self.j)),
            ("argmin_c", Json::U64(self.argmin_c)),
        ])
    }
}
