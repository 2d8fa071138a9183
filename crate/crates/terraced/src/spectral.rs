//! Spectral engine over truncation schedules: singular values,
//! approximation-number lower bounds, and Schatten q-norm brackets.
//!
//! Finite sections are compressions, so their singular values never exceed
//! the operator's approximation numbers; everything reported from a section
//! is a certified lower bound. Upper bounds come from the dyadic profile
//! with explicit constants.

use crate::bracket::Bracket;
use crate::criteria::sigma_profile;
use crate::jsonout::Json;
use crate::linalg;
use crate::operator::{apply_rhaly, apply_rhaly_adjoint, DenseMatrix};
use crate::sequences::SequenceSpec;
use crate::util::parallel_map;
use crate::{Result, TerracedError};

const SQRT2: f64 = std::f64::consts::SQRT_2;
/// Largest section whose full spectrum is computed; larger sections go
/// through capped Lanczos for the top of the spectrum only.
const FULL_SPECTRUM_MAX: usize = 768;

/// All singular values of a dense matrix, descending. Errors on non-finite
/// entries.
pub fn singular_values(m: &DenseMatrix) -> Result<Vec<f64>> {
    linalg::singular_values(m)
}

/// Riemann zeta on `(1, inf)` by Euler-Maclaurin summation; absolute error
/// well below 1e-14 for the exponents used here.
pub fn zeta(p: f64) -> f64 {
    debug_assert!(p > 1.0);
    let n = 1000u64;
    let mut sum = 0.0;
    for k in 1..n {
        sum += (k as f64).powf(-p);
    }
    let nf = n as f64;
    sum += nf.powf(1.0 - p) / (p - 1.0);
    sum += 0.5 * nf.powf(-p);
    sum += p * nf.powf(-p - 1.0) / 12.0;
    sum -= p * (p + 1.0) * (p + 2.0) * nf.powf(-p - 3.0) / 720.0;
    sum
}

/// Per-index approximation-number data along a truncation schedule.
#[derive(Debug, Clone)]
pub struct ApproxNumber {
    /// 1-based index; index 1 is the operator norm.
    pub index: usize,
    /// Values along the schedule; nondecreasing in the section size.
    pub along_schedule: Vec<f64>,
    /// Final value: the certified lower bound for `a_index`.
    pub lower_bound: f64,
    /// Relative change below 1e-8 across the last two sections. Heuristic
    /// convergence signal, never a certificate.
    pub stagnated: bool,
}

#[derive(Debug, Clone)]
pub struct SpectralReport {
    pub schedule: Vec<usize>,
    /// Top singular values per section, descending within each row.
    pub singular_values: Vec<Vec<f64>>,
    pub approx_numbers: Vec<ApproxNumber>,
    pub schatten: Vec<(f64, Bracket)>,
}

fn validate_schedule(schedule: &[usize]) -> Result<()> {
    if schedule.is_empty() {
        return Err(TerracedError::invalid("truncation schedule is empty"));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(TerracedError::invalid(
            "truncation schedule must be strictly increasing",
        ));
    }
    if schedule[0] == 0 {
        return Err(TerracedError::invalid("truncation sizes start at 1"));
    }
    Ok(())
}

/// Full spectrum of a structured section: exhaustive Lanczos on the O(n)
/// prefix-sum Gram application, O(n^2) reorthogonalization work in place of
/// a dense O(n^3) decomposition. The Gram route cannot resolve singular
/// values below sqrt(eps) * s_max; eigenvalues under that noise floor are
/// reported as 0, which keeps every value a valid lower bound.
fn section_full_spectrum(spec: &SequenceSpec, n: usize) -> Vec<f64> {
    let lams = linalg::lanczos_psd_top(
        |x| apply_rhaly_adjoint(spec, &apply_rhaly(spec, x)),
        n,
        n,
        n,
    );
    let floor = lams.first().copied().unwrap_or(0.0) * 1e-14;
    lams.into_iter()
        .map(|lam| if lam <= floor { 0.0 } else { lam.sqrt() })
        .collect()
}

/// Top `n_max` singular values of the section `P_N R P_N`.
fn section_top_singulars(spec: &SequenceSpec, n: usize, n_max: usize) -> Vec<f64> {
    if n <= FULL_SPECTRUM_MAX {
        let mut sv = section_full_spectrum(spec, n);
        sv.truncate(n_max);
        sv
    } else {
        linalg::top_singular_values(
            |x| apply_rhaly(spec, x),
            |x| apply_rhaly_adjoint(spec, x),
            n,
            n_max,
            linalg::lanczos_budget(n, n_max),
        )
    }
}

/// Certified lower bounds for the first `n_max` approximation numbers from
/// the sections in `schedule`.
pub fn approx_numbers(
    spec: &SequenceSpec,
    n_max: usize,
    schedule: &[usize],
) -> Result<SpectralReport> {
    validate_schedule(schedule)?;
    if n_max == 0 || n_max > schedule[0] {
        return Err(TerracedError::invalid(format!(
            "n_max must lie in [1, {}], got {n_max}",
            schedule[0]
        )));
    }
    let per_section: Vec<Vec<f64>> =
        parallel_map(schedule.len(), |i| section_top_singulars(spec, schedule[i], n_max));
    let mut approx = Vec::with_capacity(n_max);
    for idx in 0..n_max {
        let along: Vec<f64> = per_section
            .iter()
            .map(|sv| sv.get(idx).copied().unwrap_or(0.0))
            .collect();
        let last = *along.last().unwrap();
        let stagnated = along.len() >= 2 && {
            let prev = along[along.len() - 2];
            (last - prev).abs() <= 1e-8 * (1.0 + last.abs())
        };
        approx.push(ApproxNumber {
            index: idx + 1,
            along_schedule: along,
            lower_bound: last,
            stagnated,
        });
    }
    Ok(SpectralReport {
        schedule: schedule.to_vec(),
        singular_values: per_section,
        approx_numbers: approx,
        schatten: Vec::new(),
    })
}

/// Certified upper bound for the Schatten q-norm through the dyadic route:
/// `||a||_q^q <= 7 ||R||^q + 8 * 6^q * zeta(q) * ||sigma||_q^q` with
/// `||R|| <= 4 sqrt(2) ||sigma||_q`; infinite when `||sigma||_q` has no
/// finite certificate.
fn schatten_hi_via_sigma(spec: &SequenceSpec, q: f64, k_max: u32) -> f64 {
    let profile = sigma_profile(spec, k_max);
    let sigma_q_hi = profile.qsum(q) + spec.sigma_tail_qsum_hi(k_max + 1, q);
    if !sigma_q_hi.is_finite() {
        return f64::INFINITY;
    }
    let sigma_norm = sigma_q_hi.powf(1.0 / q);
    let norm_hi = 4.0 * SQRT2 * sigma_norm;
    let total = 7.0 * norm_hi.powf(q) + 8.0 * (6.0f64).powf(q) * zeta(q) * sigma_q_hi;
    total.powf(1.0 / q)
}

/// Section spectra shared by the Schatten brackets: the full spectrum of
/// the largest dense-sized section plus the top block of the largest
/// section overall. Computed once per schedule.
struct SectionSpectra {
    dense_sv: Vec<f64>,
    top_sv: Vec<f64>,
    largest: usize,
}

fn section_spectra(spec: &SequenceSpec, schedule: &[usize]) -> Result<SectionSpectra> {
    let largest = *schedule.last().unwrap();
    let dense_sv = match schedule.iter().copied().rfind(|&n| n <= FULL_SPECTRUM_MAX) {
        Some(n) => section_full_spectrum(spec, n),
        None => Vec::new(),
    };
    let top_sv = if largest > FULL_SPECTRUM_MAX {
        section_top_singulars(spec, largest, 64.min(largest))
    } else {
        Vec::new()
    };
    Ok(SectionSpectra {
        dense_sv,
        top_sv,
        largest,
    })
}

fn schatten_qnorm_from(spec: &SequenceSpec, q: f64, spectra: &SectionSpectra) -> Bracket {
    // Every route below the true q-norm: section spectra are compressions.
    let mut lo_q: f64 = spectra.dense_sv.iter().map(|s| s.powf(q)).sum();
    lo_q = lo_q.max(spectra.top_sv.iter().map(|s| s.powf(q)).sum());
    // Frobenius route at q = 2: exact entrywise sum of the largest section.
    if q == 2.0 {
        let mut fro2 = 0.0;
        for k in 0..spectra.largest as u64 {
            fro2 += (k + 1) as f64 * spec.abs2(k);
        }
        lo_q = lo_q.max(fro2);
    }
    let lo = lo_q.powf(1.0 / q);
    let hi = schatten_hi_via_sigma(spec, q, 20).max(lo);
    Bracket::new(lo, hi)
}

/// Enclosure of the Schatten q-norm, `1 < q < inf`: singular-value q-sums of
/// sections from below, explicit dyadic constants from above.
pub fn schatten_qnorm(spec: &SequenceSpec, q: f64, schedule: &[usize]) -> Result<Bracket> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(TerracedError::invalid(format!(
            "Schatten exponent must lie in (1, inf), got {q}"
        )));
    }
    validate_schedule(schedule)?;
    let spectra = section_spectra(spec, schedule)?;
    Ok(schatten_qnorm_from(spec, q, &spectra))
}

/// Full spectral report: approximation numbers plus Schatten brackets.
pub fn spectral_report(
    spec: &SequenceSpec,
    n_max: usize,
    schedule: &[usize],
    q_list: &[f64],
) -> Result<SpectralReport> {
    let mut report = approx_numbers(spec, n_max, schedule)?;
    for &q in q_list {
        if !(q > 1.0 && q.is_finite()) {
            return Err(TerracedError::invalid(format!(
                "Schatten exponent must lie in (1, inf), got {q}"
            )));
        }
    }
    let spectra = section_spectra(spec, schedule)?;
    for &q in q_list {
        report.schatten.push((q, schatten_qnorm_from(spec, q, &spectra)));
    }
    Ok(report)
}

impl SpectralReport {
    pub fn to_json(&self) -> Json {
        Json::Obj(vec![
            (
                "schedule",
                Json::Arr(self.schedule.iter().map(|n| Json::U64(*n as u64)).collect()),
            ),
            (
                "singular_values",
                Json::Arr(
                    self.singular_values
                        .iter()
                        .map(|row| Json::Arr(row.iter().map(|s| Json::Num(*s)).collect()))
                        .collect(),
                ),
            ),
            (
                "approx_numbers",
                Json::Arr(
                    self.approx_numbers
                        .iter()
                        .map(|a| {
                            Json::Obj(vec![
                                ("index", Json::U64(a.index as u64)),
                                (
                                    "along_schedule",
                                    Json::Arr(
                                        a.along_schedule.iter().map(|v| Json::Num(*v)).collect(),
                                    ),
                                ),
                                ("lower_bound", Json::Num(a.lower_bound)),
                                ("stagnated", Json::Bool(a.stagnated)),
                            ])
                        })
                        .collect(),
                ),
            ),
            (
                "schatten",
                Json::Arr(
                    self.schatten
                        .iter()
                        .map(|(q, b)| {
                            Json::Obj(vec![("q", Json::Num(*q)), ("qnorm", Json::from(b))])
                        })
                        .collect(),
                ),
            ),
        ])
    }

    /// CSV rows `(N, index, value)` of the per-section singular values.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,index,value\n");
        for (n, row) in self.schedule.iter().zip(&self.singular_values) {
            for (i, v) in row.iter().enumerate() {
                out.push_str(&format!("{n},{},{:.16e}\n", i + 1, v));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn e0() -> SequenceSpec {
        SequenceSpec::finite_support(vec![c(1.0, 0.0)])
    }

    fn two_ones() -> SequenceSpec {
        SequenceSpec::finite_support(vec![c(1.0, 0.0), c(1.0, 0.0)])
    }

    #[test]
    fn zeta_reference_values() {
        // zeta(2) = pi^2 / 6 and zeta(3), zeta(1.5) frozen from independent
        // high-precision references.
        assert!((zeta(2.0) - std::f64::consts::PI * std::f64::consts::PI / 6.0).abs() < 1e-14);
        assert!((zeta(3.0) - 1.2020569031595943).abs() < 1e-14);
        assert!((zeta(1.5) - 2.612375348685488).abs() < 1e-13);
    }

    #[test]
    fn approx_numbers_e0() {
        let report = approx_numbers(&e0(), 3, &[4, 8, 16]).unwrap();
        assert!((report.approx_numbers[0].lower_bound - 1.0).abs() < 1e-12);
        assert_eq!(report.approx_numbers[1].lower_bound, 0.0);
        assert_eq!(report.approx_numbers[2].lower_bound, 0.0);
    }

    #[test]
    fn approx_numbers_two_ones() {
        let report = approx_numbers(&two_ones(), 3, &[4, 8]).unwrap();
        assert!((report.approx_numbers[0].lower_bound - 1.618033988749895).abs() < 1e-10);
        assert!((report.approx_numbers[1].lower_bound - 0.6180339887498949).abs() < 1e-10);
        assert!(report.approx_numbers[2].lower_bound < 1e-9);
        assert!(report.approx_numbers[0].stagnated);
    }

    #[test]
    fn per_index_monotone_along_schedule() {
        let report = approx_numbers(&SequenceSpec::cesaro(), 8, &[16, 32, 64, 128]).unwrap();
        for a in &report.approx_numbers {
            for w in a.along_schedule.windows(2) {
                assert!(w[1] >= w[0] - 1e-10, "index {}: {:?}", a.index, a.along_schedule);
            }
        }
        for row in &report.singular_values {
            for w in row.windows(2) {
                assert!(w[0] >= w[1] - 1e-12);
            }
        }
    }

    #[test]
    fn schedule_validation() {
        assert!(approx_numbers(&e0(), 1, &[]).is_err());
        assert!(approx_numbers(&e0(), 1, &[8, 8]).is_err());
        assert!(approx_numbers(&e0(), 1, &[16, 8]).is_err());
        assert!(approx_numbers(&e0(), 9, &[8, 16]).is_err());
    }

    #[test]
    fn schatten_two_ones_frobenius() {
        // sqrt(phi^2 + phi^{-2}) = sqrt(3).
        let b = schatten_qnorm(&two_ones(), 2.0, &[4, 8]).unwrap();
        assert!((b.lo() - 3.0f64.sqrt()).abs() < 1e-10);
        assert!(b.is_bounded());
    }

    #[test]
    fn schatten_e0() {
        let b = schatten_qnorm(&e0(), 2.0, &[4]).unwrap();
        assert!((b.lo() - 1.0).abs() < 1e-10);
        assert!(b.is_bounded());
    }

    #[test]
    fn schatten_cesaro_q2_unbounded_above() {
        let b = schatten_qnorm(&SequenceSpec::cesaro(), 2.0, &[16, 64, 256]).unwrap();
        assert!(!b.is_bounded());
        // Frobenius lower bound grows like sqrt(H_N).
        assert!(b.lo() > 2.0);
    }

    #[test]
    fn schatten_power_bounded() {
        let spec = SequenceSpec::power(1.5, 1.0).unwrap();
        let b = schatten_qnorm(&spec, 2.0, &[16, 64]).unwrap();
        assert!(b.is_bounded());
        assert!(b.lo() <= b.hi());
    }

    #[test]
    fn schatten_rejects_bad_q() {
        assert!(schatten_qnorm(&e0(), 1.0, &[4]).is_err());
        assert!(schatten_qnorm(&e0(), 0.3, &[4]).is_err());
    }

    #[test]
    fn frobenius_consistency_q2() {
        // q = 2 lower route equals the entrywise norm of the section.
        let spec = SequenceSpec::cesaro();
        let n = 64;
        let b = schatten_qnorm(&spec, 2.0, &[n]).unwrap();
        let trunc = crate::operator::truncate_rhaly(&spec, n).unwrap();
        let fro = trunc.matrix.frobenius_norm();
        assert!((b.lo() - fro).abs() <= 1e-10 * (1.0 + fro));
    }
}
