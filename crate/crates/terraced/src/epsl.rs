//! Threshold cut sequences: the increasing cut points `c_0 < c_1 < ...`
//! where the interval functional `L` first exceeds a threshold `epsilon`,
//! and the approximation-number bounds their count certifies.
//!
//! The construction is sequential: from each cut the next one is the
//! smallest `t` with `L([c_k, t-1]) > epsilon`, located by a doubling scan
//! followed by bisection (valid because `L([a, b])` is nondecreasing in
//! `b`). A sequence is declared finite only on a tail certificate: exact
//! evaluation for finite-support coefficients, or the chain
//! `L([n, inf)) <= 2 sqrt(2) J_n` for families with certified tail bounds.

use crate::bracket::{Bracket, Verdict};
use crate::criteria::{self, jn_bracket};
use crate::interval::{l_value, NaturalInterval};
use crate::jsonout::Json;
use crate::sequences::SequenceSpec;
use crate::{Result, TerracedError};

const SQRT2: f64 = std::f64::consts::SQRT_2;
/// Relative slack applied to the strict comparison `L > epsilon` so that
/// floating-point ties at the threshold never flip a cut.
const TIE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpsLStatus {
    /// The sequence provably ends; `length` is a certified upper bound for
    /// the number of cuts beyond `c_0`, and exact whenever the tail
    /// certificate fired at the final cut (always the case for
    /// finite-support sequences).
    Finite { length: usize },
    /// Certified infinite: the threshold sits below a certified lower bound
    /// for the limiting tail functional.
    InfiniteDetected,
    /// Scan hit the cap without a tail certificate either way.
    Undetermined,
}

/// An `(epsilon, L)` cut sequence.
#[derive(Debug, Clone)]
pub struct EpsLSequence {
    pub epsilon: f64,
    /// `c_0 = 0 < c_1 < ...`, the cuts found within the cap.
    pub cuts: Vec<u64>,
    pub status: EpsLStatus,
    pub cap: u64,
}

impl EpsLSequence {
    /// Number of cuts beyond `c_0` that are certified to exist.
    pub fn certified_length(&self) -> usize {
        self.cuts.len() - 1
    }

    pub fn to_json(&self) -> Json {
        let status = match self.status {
            EpsLStatus::Finite { length } => Json::Obj(vec![
                ("kind", Json::Str("finite".into())),
                ("length", Json::U64(length as u64)),
            ]),
            EpsLStatus::InfiniteDetected => {
                Json::Obj(vec![("kind", Json::Str("infinite_detected".into()))])
            }
            EpsLStatus::Undetermined => {
                Json::Obj(vec![("kind", Json::Str("undetermined".into()))])
            }
        };
        Json::Obj(vec![
            ("epsilon", Json::Num(self.epsilon)),
            (
                "c",
                Json::Arr(self.cuts.iter().map(|c| Json::U64(*c)).collect()),
            ),
            ("status", status),
            ("cap", Json::U64(self.cap)),
        ])
    }
}

/// Certified upper bound for `L([start, inf))`, or `inf` when none exists.
/// For finite-support sequences also returns the endpoint where the exact
/// limiting value was evaluated (L is constant in `b` beyond the support).
fn l_tail_certificate(spec: &SequenceSpec, start: u64, threshold: f64) -> (f64, Option<u64>) {
    if let Some(end) = spec.support_end() {
        let b = end.saturating_sub(1).max(start + 2);
        let value = crate::interval::l_value_threshold(
            spec,
            NaturalInterval::new(start, b).unwrap(),
            threshold,
        );
        return (value, Some(b));
    }
    // Family chain: L([n, b]) <= 2 sqrt(2) J(I) <= 2 sqrt(2) J_n for every b.
    let horizon = criteria::default_horizon(spec).max(start + 1024);
    match jn_bracket(spec, start, horizon) {
        Ok(jn) => (2.0 * SQRT2 * jn.bracket.hi(), None),
        Err(_) => (f64::INFINITY, None),
    }
}

/// Certified lower bound for the limiting tail functional
/// `lim_n L([n, inf)) = sqrt(2) * essential norm`; thresholds below it make
/// every cut sequence infinite.
fn script_l_lower(spec: &SequenceSpec) -> f64 {
    let tail = spec.sigma_tail_facts(21);
    let ess_lo = spec.jn_liminf_lo().max(tail.limsup_lo / 2.0);
    SQRT2 * ess_lo
}

/// Builds the cut sequence for a threshold `epsilon > 0`, scanning cuts up
/// to `cap`.
pub fn build_eps_l(spec: &SequenceSpec, epsilon: f64, cap: u64) -> Result<EpsLSequence> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(TerracedError::invalid(format!(
            "threshold must be positive, got {epsilon}"
        )));
    }
    if cap < 2 {
        return Err(TerracedError::invalid("cut scan cap must be at least 2"));
    }
    let threshold = epsilon * (1.0 + TIE_SLACK);
    let exceeds = |a: u64, b: u64| -> bool {
        crate::interval::l_value_threshold(spec, NaturalInterval::new(a, b).unwrap(), threshold)
            > threshold
    };

    let mut cuts = vec![0u64];
    loop {
        let start = *cuts.last().unwrap();
        // Tail certificate first: if L([start, inf)) <= epsilon no further
        // cut can exist.
        let (cert, cert_b) = l_tail_certificate(spec, start, threshold);
        if cert <= threshold {
            return Ok(EpsLSequence {
                epsilon,
                status: EpsLStatus::Finite {
                    length: cuts.len() - 1,
                },
                cuts,
                cap,
            });
        }
        // Locate the smallest b with L([start, b]) > epsilon; the next cut
        // is b + 1. Singletons have L = 0, so the bracket starts at `start`.
        let mut lo_b = start; // invariant: L([start, lo_b]) <= threshold
        let mut hi_b: Option<u64> = match cert_b {
            // Exact certificate endpoint already exceeds the threshold.
            Some(b) if b <= cap => Some(b),
            _ => None,
        };
        if hi_b.is_none() {
            let mut step = 1u64;
            loop {
                let b = (start + step).min(cap);
                if exceeds(start, b) {
                    hi_b = Some(b);
                    break;
                }
                lo_b = b;
                if b == cap {
                    break;
                }
                step *= 2;
            }
        }
        let Some(mut hi_b) = hi_b else {
            // No exceedance up to the cap. A tail certificate at the cap
            // still pins the sequence finite: any further cut would start
            // past the cap, and intervals starting there are dominated by
            // intervals starting at the cap, so at most one more cut can
            // exist.
            let (cert_at_cap, _) = l_tail_certificate(spec, cap, threshold);
            if cert_at_cap <= threshold {
                return Ok(EpsLSequence {
                    epsilon,
                    status: EpsLStatus::Finite { length: cuts.len() },
                    cuts,
                    cap,
                });
            }
            break;
        };
        while hi_b - lo_b > 1 {
            let mid = lo_b + (hi_b - lo_b) / 2;
            if exceeds(start, mid) {
                hi_b = mid;
            } else {
                lo_b = mid;
            }
        }
        let next = hi_b + 1;
        if next > cap {
            break;
        }
        cuts.push(next);
    }

    // Cap reached without a finite certificate.
    let status = if epsilon < script_l_lower(spec) * (1.0 - 1e-9) {
        EpsLStatus::InfiniteDetected
    } else {
        EpsLStatus::Undetermined
    };
    Ok(EpsLSequence {
        epsilon,
        cuts,
        status,
        cap,
    })
}

/// One emitted approximation-number statement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ApproxBound {
    /// `a_index <= value` (1-based indices, `a_1` is the operator norm).
    Upper { index: usize, value: f64 },
    /// `a_index >= value`.
    Lower { index: usize, value: f64 },
}

/// Approximation-number consequences of one cut sequence: a finite sequence
/// of length `N` gives `a_{2N+2} <= epsilon / sqrt(2)`, and any sequence
/// with at least `N` cuts gives `a_N >= epsilon / sqrt(2)`.
pub fn approx_number_bounds(seq: &EpsLSequence) -> Vec<ApproxBound> {
    let value = seq.epsilon / SQRT2;
    let mut out = Vec::new();
    if let EpsLStatus::Finite { length } = seq.status {
        out.push(ApproxBound::Upper {
            index: 2 * length + 2,
            value,
        });
    }
    let certified = seq.certified_length();
    if certified >= 1 {
        out.push(ApproxBound::Lower {
            index: certified,
            value,
        });
    }
    out
}

/// Report on the limiting tail functional `script L = lim_n L([n, inf))`.
#[derive(Debug, Clone)]
pub struct ScriptLReport {
    /// Certified enclosure of the limit.
    pub bracket: Bracket,
    /// Sampled values `L([n, b])` on the grid; each is a lower bound for
    /// `L([n, inf))`, not for the limit itself.
    pub samples: Vec<(u64, u64, f64)>,
    /// Whether the last two window enlargements changed a sample by less
    /// than 1e-6 relative. A heuristic flag, never a certificate.
    pub stabilized: bool,
    pub bounded: Verdict,
}

impl ScriptLReport {
    pub fn to_json(&self) -> Json {
        Json::Obj(vec![
            ("bracket", Json::from(&self.bracket)),
            (
                "samples",
                Json::Arr(
                    self.samples
                        .iter()
                        .map(|(n, b, l)| {
                            Json::Obj(vec![
                                ("n", Json::U64(*n)),
                                ("b", Json::U64(*b)),
                                ("L", Json::Num(*l)),
                            ])
                        })
                        .collect(),
                ),
            ),
            ("stabilized", Json::Bool(self.stabilized)),
            ("bounded", Json::from(self.bounded)),
        ])
    }
}

/// Encloses `script L` from both sides: family lower certificates and the
/// `2 sqrt(2) J_n` upper chain, with monotone window samples as diagnostics.
pub fn script_l_limit(
    spec: &SequenceSpec,
    n_grid: &[u64],
    window_cap: u64,
) -> Result<ScriptLReport> {
    let lo = script_l_lower(spec);
    if lo.is_infinite() {
        return Err(TerracedError::invalid(
            "tail functional diverges: sequence is certified unbounded",
        ));
    }
    let mut hi = f64::INFINITY;
    for &n in n_grid {
        // Infinite threshold: run the certificate to full convergence.
        hi = hi.min(l_tail_certificate(spec, n, f64::INFINITY).0);
    }
    let mut samples = Vec::new();
    let mut stabilized = false;
    for &n in n_grid {
        let mut w = 2u64;
        let mut last = 0.0f64;
        let mut prev = -1.0f64;
        let mut b = n + 2;
        while w <= window_cap {
            prev = last;
            b = n + w;
            last = l_value(spec, NaturalInterval::new(n, b).unwrap());
            w *= 2;
        }
        samples.push((n, b, last));
        if prev >= 0.0 && (last - prev).abs() <= 1e-6 * (1.0 + last) {
            stabilized = true;
        }
    }
    let hi = hi.max(lo);
    let bounded = if hi.is_finite() {
        Verdict::Yes
    } else {
        Verdict::Undetermined
    };
    Ok(ScriptLReport {
        bracket: Bracket::new(lo, hi),
        samples,
        stabilized,
        bounded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::SplitMix64;
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
    fn e0_sequence_is_trivial() {
        let seq = build_eps_l(&e0(), 0.5, 256).unwrap();
        assert_eq!(seq.cuts, vec![0]);
        assert_eq!(seq.status, EpsLStatus::Finite { length: 0 });
    }

    #[test]
    fn two_ones_small_epsilon() {
        let seq = build_eps_l(&two_ones(), 0.5, 256).unwrap();
        assert_eq!(seq.cuts, vec![0, 2]);
        assert_eq!(seq.status, EpsLStatus::Finite { length: 1 });
    }

    #[test]
    fn two_ones_large_epsilon() {
        let seq = build_eps_l(&two_ones(), 1.5, 256).unwrap();
        assert_eq!(seq.cuts, vec![0]);
        assert_eq!(seq.status, EpsLStatus::Finite { length: 0 });
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(build_eps_l(&e0(), 0.0, 64).is_err());
        assert!(build_eps_l(&e0(), -1.0, 64).is_err());
        assert!(build_eps_l(&e0(), 1.0, 1).is_err());
    }

    #[test]
    fn construction_invariants_on_random() {
        let mut rng = SplitMix64::new(321);
        for _ in 0..15 {
            let len = 4 + (rng.next_u64() % 32) as usize;
            let values: Vec<Complex64> = (0..len).map(|_| rng.complex_gaussian()).collect();
            let spec = SequenceSpec::finite_support(values);
            let eps = 0.3 + rng.uniform() * 2.0;
            let seq = build_eps_l(&spec, eps, 4096).unwrap();
            assert_eq!(seq.cuts[0], 0);
            for w in seq.cuts.windows(2) {
                let (a, b) = (w[0], w[1]);
                assert!(b >= a + 2, "cuts too close: {a}, {b}");
                let inside = l_value(&spec, NaturalInterval::new(a, b - 2).unwrap());
                assert!(inside <= eps + 1e-9 * (1.0 + eps), "L={inside} eps={eps}");
                let at_cut = l_value(&spec, NaturalInterval::new(a, b - 1).unwrap());
                assert!(at_cut > eps - 1e-9 * (1.0 + eps), "L={at_cut} eps={eps}");
            }
            // Finite support means compact: every threshold must certify a
            // finite sequence.
            assert!(matches!(seq.status, EpsLStatus::Finite { .. }));
        }
    }

    #[test]
    fn monotone_length_in_epsilon() {
        let mut rng = SplitMix64::new(654);
        for _ in 0..10 {
            let len = 4 + (rng.next_u64() % 48) as usize;
            let values: Vec<Complex64> = (0..len).map(|_| rng.complex_gaussian()).collect();
            let spec = SequenceSpec::finite_support(values);
            let e1 = 0.2 + rng.uniform();
            let e2 = e1 + 0.5 + rng.uniform();
            let s1 = build_eps_l(&spec, e1, 4096).unwrap();
            let s2 = build_eps_l(&spec, e2, 4096).unwrap();
            assert!(s1.cuts.len() >= s2.cuts.len());
        }
    }

    #[test]
    fn approx_bounds_two_ones() {
        let seq = build_eps_l(&two_ones(), 0.5, 256).unwrap();
        let bounds = approx_number_bounds(&seq);
        let val = 0.5 / SQRT2;
        assert!(bounds.contains(&ApproxBound::Upper {
            index: 4,
            value: val
        }));
        assert!(bounds.contains(&ApproxBound::Lower {
            index: 1,
            value: val
        }));
        // Exact singular values of [[1,0],[1,1]]: 1.618..., 0.618..., then 0;
        // a_1 >= 0.3536 and a_4 = 0 <= 0.3536 both hold.
        let s1 = 1.618033988749895f64;
        assert!(s1 >= val);
    }

    #[test]
    fn e0_upper_bound_any_epsilon() {
        for eps in [0.1, 1.0, 10.0] {
            let seq = build_eps_l(&e0(), eps, 64).unwrap();
            let bounds = approx_number_bounds(&seq);
            assert!(bounds
                .iter()
                .any(|b| matches!(b, ApproxBound::Upper { index: 2, .. })));
        }
    }

    #[test]
    fn cesaro_small_epsilon_detected_infinite() {
        // script L >= sqrt(2) for this family, so thresholds below that are
        // certified infinite.
        let seq = build_eps_l(&SequenceSpec::cesaro(), 0.5, 512).unwrap();
        assert_eq!(seq.status, EpsLStatus::InfiniteDetected);
        assert!(seq.certified_length() >= 1);
    }

    #[test]
    fn cesaro_large_epsilon_finite() {
        // The certificate at the first cut is 2 sqrt(2) J_0.hi = 3.6276;
        // thresholds above it are certified finite with exact length 0.
        let seq = build_eps_l(&SequenceSpec::cesaro(), 4.0, 512).unwrap();
        assert_eq!(seq.status, EpsLStatus::Finite { length: 0 });
        // A threshold of 3 sits inside that certificate's gap (the true
        // tail functional is 2 sqrt(2) = 2.83), but the cap-anchored
        // certificate still pins the sequence finite with at most one
        // further cut.
        let seq = build_eps_l(&SequenceSpec::cesaro(), 3.0, 512).unwrap();
        assert_eq!(seq.status, EpsLStatus::Finite { length: 1 });
        assert_eq!(seq.certified_length(), 0);
    }

    #[test]
    fn power_family_certifies_finite_past_cap() {
        // Compact family: every threshold ends in a finite sequence, and the
        // tail supremum chain certifies it once the anchor moves far enough.
        let spec = SequenceSpec::power(1.5, 1.0).unwrap();
        for eps in [0.4, 0.1] {
            let seq = build_eps_l(&spec, eps, 4096).unwrap();
            assert!(
                matches!(seq.status, EpsLStatus::Finite { .. }),
                "eps = {eps}: {:?}",
                seq.status
            );
            let bounds = approx_number_bounds(&seq);
            assert!(bounds
                .iter()
                .any(|b| matches!(b, ApproxBound::Upper { .. })));
        }
    }

    #[test]
    fn script_l_finite_support_collapses() {
        let spec = two_ones();
        let report = script_l_limit(&spec, &[0, 2, 8], 64).unwrap();
        assert_eq!((report.bracket.lo(), report.bracket.hi()), (0.0, 0.0));
    }

    #[test]
    fn script_l_cesaro_brackets_target() {
        // script L = sqrt(2) * essential norm = 2 sqrt(2) for this family.
        let report = script_l_limit(&SequenceSpec::cesaro(), &[0, 16, 256, 2048], 2048).unwrap();
        assert!(report.bracket.lo() >= SQRT2 - 1e-9);
        assert!(
            report.bracket.contains(2.0 * SQRT2),
            "bracket {:?}",
            report.bracket
        );
    }

    #[test]
    fn script_l_rejects_unbounded() {
        let spec = SequenceSpec::power(0.75, 1.0).unwrap();
        assert!(script_l_limit(&spec, &[0, 8], 64).is_err());
    }
}
