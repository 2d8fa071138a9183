//! Coefficient-space operator tests: dyadic profiles, tail suprema, the
//! factorable-matrix bound, and certified norm / essential-norm / Schatten
//! brackets with three-valued verdicts.

use crate::bracket::{Bracket, Verdict};
use crate::jsonout::Json;
use crate::linalg;
use crate::operator::{apply_rhaly, apply_rhaly_adjoint};
use crate::sequences::SequenceSpec;
use crate::{Result, TerracedError};

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Weighted dyadic block profile: `sigma_{-1} = |alpha_0|` and
/// `sigma_k = (sum_{j in Z_k} (j+1) |alpha_j|^2)^{1/2}` over the blocks
/// `Z_k = [2^k, 2^{k+1})`, together with the plain block energies
/// `sum_{j in Z_k} |alpha_j|^2`.
#[derive(Debug, Clone)]
pub struct DyadicProfile {
    sigma: Vec<f64>,
    block_energy: Vec<f64>,
    k_max: u32,
}

impl DyadicProfile {
    /// `sigma_k` for `k >= -1`.
    pub fn sigma(&self, k: i64) -> f64 {
        self.sigma[(k + 1) as usize]
    }

    /// `sum_{j in Z_k} |alpha_j|^2` for `k >= 0`.
    pub fn block_energy(&self, k: u32) -> f64 {
        self.block_energy[k as usize]
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    /// Largest computed `sigma_k`, `k >= -1`.
    pub fn sup(&self) -> f64 {
        self.sigma.iter().fold(0.0f64, |acc, s| acc.max(*s))
    }

    /// `sum_{k >= -1, k <= k_max} sigma_k^q`.
    pub fn qsum(&self, q: f64) -> f64 {
        self.sigma.iter().map(|s| s.powf(q)).sum()
    }

    /// CSV rows `(k, sigma_k, block_energy_k)`; the `k = -1` row carries
    /// `|alpha_0|^2` as its energy.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,sigma,block_energy\n");
        out.push_str(&format!(
            "-1,{:.16e},{:.16e}\n",
            self.sigma[0],
            self.sigma[0] * self.sigma[0]
        ));
        for k in 0..=self.k_max {
            out.push_str(&format!(
                "{k},{:.16e},{:.16e}\n",
                self.sigma[(k + 1) as usize],
                self.block_energy[k as usize]
            ));
        }
        out
    }

    pub fn to_json(&self) -> Json {
        Json::Obj(vec![
            ("k_max", Json::U64(self.k_max as u64)),
            (
                "sigma",
                Json::Arr(self.sigma.iter().map(|s| Json::Num(*s)).collect()),
            ),
            (
                "block_energy",
                Json::Arr(self.block_energy.iter().map(|e| Json::Num(*e)).collect()),
            ),
        ])
    }
}

/// Exact finite sums for the dyadic profile up to block `k_max`.
pub fn sigma_profile(spec: &SequenceSpec, k_max: u32) -> DyadicProfile {
    let mut sigma = Vec::with_capacity(k_max as usize + 2);
    sigma.push(spec.eval(0).norm());
    let mut block_energy = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        let lo = 1u64 << k;
        let hi = 1u64 << (k + 1);
        let mut weighted = 0.0;
        let mut energy = 0.0;
        for j in lo..hi {
            let a2 = spec.abs2(j);
            weighted += (j + 1) as f64 * a2;
            energy += a2;
        }
        let s = weighted.sqrt();
        debug_assert!(
            lo as f64 * energy <= weighted * (1.0 + 1e-12) + f64::MIN_POSITIVE
                && weighted <= hi as f64 * energy * (1.0 + 1e-12) + f64::MIN_POSITIVE,
            "dyadic block bounds violated at k = {k}"
        );
        sigma.push(s);
        block_energy.push(energy);
    }
    DyadicProfile {
        sigma,
        block_energy,
        k_max,
    }
}

/// Certified enclosure of one tail supremum
/// `J_n = sup_{m >= n} (m+1-n)^{1/2} (sum_{k >= m} |alpha_k|^2)^{1/2}`.
#[derive(Debug, Clone, Copy)]
pub struct JnBracket {
    pub n: u64,
    pub bracket: Bracket,
    /// Maximizer of the scanned lower-bound candidates (largest on ties);
    /// the attained index when the supremum is exact (finite support).
    pub attained_m: Option<u64>,
}

/// Default scan horizon: `max(4096, 4 * support_end)`.
pub fn default_horizon(spec: &SequenceSpec) -> u64 {
    spec.support_end()
        .map(|end| (4 * end).max(4096))
        .unwrap_or(4096)
}

/// Scans `m` in `[n, horizon]` exactly and caps the unscanned region with
/// family tail bounds. Exact (and with the attained `m`) for finite-support
/// sequences once the horizon covers the support.
pub fn jn_bracket(spec: &SequenceSpec, n: u64, horizon: u64) -> Result<JnBracket> {
    if horizon < n {
        return Err(TerracedError::invalid(format!(
            "horizon {horizon} below start {n}"
        )));
    }
    let rem = spec.tail_energy(horizon + 1)?;
    let count = (horizon - n + 1) as usize;
    // suffix[i] = sum_{k = n+i}^{horizon} |alpha_k|^2
    let mut suffix = vec![0.0f64; count + 1];
    for i in (0..count).rev() {
        suffix[i] = suffix[i + 1] + spec.abs2(n + i as u64);
    }
    let mut best_lo = 0.0f64;
    let mut best_hi = 0.0f64;
    let mut attained = n;
    for i in 0..count {
        let m = n + i as u64;
        let weight = (m + 1 - n) as f64;
        let cand_lo = (weight * (suffix[i] + rem.lo())).sqrt();
        let cand_hi = (weight * (suffix[i] + rem.hi())).sqrt();
        if cand_lo >= best_lo {
            best_lo = cand_lo;
            attained = m;
        }
        best_hi = best_hi.max(cand_hi);
    }
    let cap = spec.jn_tail_cap(horizon);
    let hi = best_hi.max(cap);
    Ok(JnBracket {
        n,
        bracket: Bracket::new(best_lo.min(hi), hi),
        attained_m: Some(attained),
    })
}

/// Certified enclosure of the factorable-matrix bound
/// `K_2 = sup_m (sum_{k >= m} |alpha_k|^2)^{1/2} (sum_{j <= m} |beta_j|^2)^{1/2}`.
pub fn bennett_k2(alpha: &SequenceSpec, beta: &SequenceSpec, horizon: u64) -> Result<Bracket> {
    let rem = alpha.tail_energy(horizon + 1)?;
    let count = horizon as usize + 1;
    let mut suffix = vec![0.0f64; count + 1];
    for i in (0..count).rev() {
        suffix[i] = suffix[i + 1] + alpha.abs2(i as u64);
    }
    let mut best_lo = 0.0f64;
    let mut best_hi = 0.0f64;
    let mut head = 0.0f64;
    for m in 0..count {
        head += beta.abs2(m as u64);
        best_lo = best_lo.max(((suffix[m] + rem.lo()) * head).sqrt());
        best_hi = best_hi.max(((suffix[m] + rem.hi()) * head).sqrt());
    }
    // Unscanned region m > horizon: the alpha tail keeps shrinking while the
    // beta head grows toward either ||beta||_2^2 or (m+1) sup|beta|^2.
    let cap_via_beta_norm = match beta.tail_energy(0) {
        Ok(b2) => (rem.hi() * b2.hi()).sqrt(),
        Err(_) => f64::INFINITY,
    };
    let cap_via_beta_sup = alpha.jn_tail_cap(horizon) * beta.abs_sup().hi();
    let cap = cap_via_beta_norm.min(cap_via_beta_sup);
    let hi = best_hi.max(cap);
    Ok(Bracket::new(best_lo.min(hi), hi))
}

/// Parameters shared by the certified criteria computations.
#[derive(Debug, Clone)]
pub struct CriteriaParams {
    /// Scan horizon for tail suprema; `None` picks [`default_horizon`].
    pub horizon: Option<u64>,
    /// Largest dyadic block computed exactly.
    pub k_max: u32,
    /// Section size for the truncation lower bound on the norm.
    pub trunc_n: usize,
    /// Schatten exponents to test.
    pub q_list: Vec<f64>,
}

impl Default for CriteriaParams {
    fn default() -> Self {
        CriteriaParams {
            horizon: None,
            k_max: 20,
            trunc_n: 2048,
            q_list: vec![1.5, 2.0, 3.0],
        }
    }
}

/// Certified enclosure of the operator norm plus a boundedness verdict.
///
/// Lower routes: the scanned `J_0` candidates, `sup sigma / sqrt(2)`, and
/// the largest singular value of a section (compressions never overshoot).
/// Upper routes: `2 sqrt(2) J_0` and `4 sqrt(2) sup sigma`.
pub fn norm_bracket(spec: &SequenceSpec, params: &CriteriaParams) -> (Bracket, Verdict) {
    let horizon = params.horizon.unwrap_or_else(|| default_horizon(spec));
    let profile = sigma_profile(spec, params.k_max);
    let tail = spec.sigma_tail_facts(params.k_max + 1);
    let sigma_sup_lo = profile.sup().max(tail.sup.lo());
    let sigma_sup_hi = profile.sup().max(tail.sup.hi());

    let trunc_n = params.trunc_n.max(4);
    let trunc_lo = linalg::top_singular_values(
        |x| apply_rhaly(spec, x),
        |x| apply_rhaly_adjoint(spec, x),
        trunc_n,
        1,
        linalg::lanczos_budget(trunc_n, 1),
    )
    .first()
    .copied()
    .unwrap_or(0.0);

    match jn_bracket(spec, 0, horizon) {
        Ok(j0) => {
            let lo = j0.bracket.lo().max(sigma_sup_lo / SQRT2).max(trunc_lo);
            let hi = (2.0 * SQRT2 * j0.bracket.hi()).min(4.0 * SQRT2 * sigma_sup_hi);
            let hi = hi.max(lo);
            let verdict = if spec.certified_unbounded() {
                Verdict::No
            } else if hi.is_finite() {
                Verdict::Yes
            } else {
                Verdict::Undetermined
            };
            (Bracket::new(lo, hi), verdict)
        }
        Err(_) => {
            // Not square-summable: certainly not a bounded operator.
            let lo = (sigma_sup_lo / SQRT2).max(trunc_lo);
            (Bracket::unbounded(lo), Verdict::No)
        }
    }
}

/// Certified enclosure of the essential norm plus the compactness verdict.
/// Errors when the sequence is certified unbounded.
pub fn essential_norm_bracket(
    spec: &SequenceSpec,
    params: &CriteriaParams,
) -> Result<(Bracket, Verdict)> {
    let (norm, bounded) = norm_bracket(spec, params);
    if bounded == Verdict::No {
        return Err(TerracedError::invalid(
            "essential norm undefined: sequence is certified unbounded",
        ));
    }
    let horizon = params.horizon.unwrap_or_else(|| default_horizon(spec));
    let tail = spec.sigma_tail_facts(params.k_max + 1);
    let compact = tail.limit_zero;

    // Lower route: lim_n J_n >= max(family liminf, limsup sigma / 2).
    let lo = spec
        .jn_liminf_lo()
        .max(tail.limsup_lo / 2.0)
        .min(norm.hi());

    // Upper routes: 2 sqrt(2) J_n over sampled n, 4 sqrt(2) tail sigma sup.
    let mut hi = norm.hi();
    hi = hi.min(4.0 * SQRT2 * tail.sup.hi());
    let mut grid: Vec<u64> = vec![0, 1, 2];
    let mut n = 4u64;
    while n <= horizon {
        grid.push(n);
        n *= 2;
    }
    if let Some(end) = spec.support_end() {
        grid.push(end);
    }
    for n in grid {
        if n > horizon {
            continue;
        }
        if let Ok(jn) = jn_bracket(spec, n, horizon.max(n)) {
            hi = hi.min(2.0 * SQRT2 * jn.bracket.hi());
        }
    }
    let hi = hi.max(lo);
    Ok((Bracket::new(lo, hi), compact))
}

/// Schatten-class test for `1 < q < infinity`: exact partial `q`-sums of the
/// dyadic profile plus a family tail bound when one exists.
pub fn schatten_test(spec: &SequenceSpec, q: f64, k_max: u32) -> Result<(Verdict, Bracket)> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(TerracedError::invalid(format!(
            "Schatten exponent must lie in (1, inf), got {q}"
        )));
    }
    let profile = sigma_profile(spec, k_max);
    let partial = profile.qsum(q);
    let tail_hi = spec.sigma_tail_qsum_hi(k_max + 1, q);
    let bracket = Bracket::new(partial, partial + tail_hi);
    let verdict = if spec.sigma_qsum_diverges(q) {
        Verdict::No
    } else if bracket.is_bounded() {
        Verdict::Yes
    } else {
        Verdict::Undetermined
    };
    Ok((verdict, bracket))
}

/// Full coefficient-space report for one sequence.
#[derive(Debug, Clone)]
pub struct CriteriaReport {
    pub norm: Bracket,
    pub bounded: Verdict,
    pub essential_norm: Option<Bracket>,
    pub compact: Verdict,
    pub schatten: Vec<(f64, Verdict, Bracket)>,
}

pub fn criteria_report(spec: &SequenceSpec, params: &CriteriaParams) -> Result<CriteriaReport> {
    let (norm, bounded) = norm_bracket(spec, params);
    let (essential_norm, compact) = if bounded == Verdict::No {
        (None, Verdict::No)
    } else {
        let (b, c) = essential_norm_bracket(spec, params)?;
        (Some(b), c)
    };
    let mut schatten = Vec::new();
    for &q in &params.q_list {
        let (v, b) = schatten_test(spec, q, params.k_max)?;
        // Unbounded operators cannot lie in any Schatten class.
        let v = if bounded == Verdict::No { Verdict::No } else { v };
        schatten.push((q, v, b));
    }
    Ok(CriteriaReport {
        norm,
        bounded,
        essential_norm,
        compact,
        schatten,
    })
}

impl CriteriaReport {
    pub fn to_json(&self) -> Json {
        Json::Obj(vec![
            ("norm", Json::from(&self.norm)),
            ("bounded", Json::from(self.bounded)),
            (
                "essential_norm",
                match &self.essential_norm {
                    Some(b) => Json::from(b),
                    None => Json::Null,
                },
            ),
            ("compact", Json::from(self.compact)),
            (
                "schatten",
                Json::Arr(
                    self.schatten
                        .iter()
                        .map(|(q, v, b)| {
                            Json::Obj(vec![
                                ("q", Json::Num(*q)),
                                ("verdict", Json::from(*v)),
                                ("qsum", Json::from(b)),
                            ])
                        })
                        .collect(),
                ),
            ),
        ])
    }
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

    #[test]
    fn sigma_profile_cesaro() {
        let p = sigma_profile(&SequenceSpec::cesaro(), 3);
        assert!((p.sigma(-1) - 1.0).abs() < 1e-15);
        assert!((p.sigma(0) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((p.sigma(1) - 0.7637626158259734).abs() < 1e-12);
    }

    #[test]
    fn sigma_block_bounds_hold_for_random() {
        let mut rng = SplitMix64::new(2024);
        for _ in 0..20 {
            let len = 2 + (rng.next_u64() % 63) as usize;
            let values: Vec<Complex64> = (0..len).map(|_| rng.complex_gaussian()).collect();
            let spec = SequenceSpec::finite_support(values);
            let p = sigma_profile(&spec, 7);
            for k in 0..=7u32 {
                let s2 = p.sigma(k as i64) * p.sigma(k as i64);
                let e = p.block_energy(k);
                let lo = (1u64 << k) as f64 * e;
                let hi = (1u64 << (k + 1)) as f64 * e;
                assert!(lo <= s2 * (1.0 + 1e-12) + 1e-300);
                assert!(s2 <= hi * (1.0 + 1e-12) + 1e-300);
            }
        }
    }

    #[test]
    fn jn_zero_sequence() {
        let spec = SequenceSpec::finite_support(Vec::new());
        let j = jn_bracket(&spec, 0, 32).unwrap();
        assert_eq!((j.bracket.lo(), j.bracket.hi()), (0.0, 0.0));
    }

    #[test]
    fn jn_e0_exact() {
        let j = jn_bracket(&e0(), 0, 64).unwrap();
        assert!(j.bracket.is_exact());
        assert_eq!(j.bracket.lo(), 1.0);
        assert_eq!(j.attained_m, Some(0));
    }

    #[test]
    fn jn_two_ones_tie_goes_to_larger_m() {
        let spec = SequenceSpec::finite_support(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        let j = jn_bracket(&spec, 0, 64).unwrap();
        assert!((j.bracket.lo() - SQRT2).abs() < 1e-15);
        assert!(j.bracket.is_exact());
        assert_eq!(j.attained_m, Some(1));
    }

    #[test]
    fn jn_cesaro_contains_sqrt_zeta2() {
        let j = jn_bracket(&SequenceSpec::cesaro(), 0, 4096).unwrap();
        // sqrt(zeta(2)), frozen from the tail-energy oracle.
        let want = 1.282549830161864f64;
        assert!(j.bracket.contains(want), "bracket {:?}", j.bracket);
        assert!(j.bracket.width() < 1e-4);
        assert_eq!(j.attained_m, Some(0));
    }

    #[test]
    fn jn_nonincreasing_in_n() {
        for spec in [
            SequenceSpec::cesaro(),
            SequenceSpec::power(0.8, 1.1).unwrap(),
        ] {
            let mut prev_hi = f64::INFINITY;
            for n in [0u64, 1, 2, 4, 8, 16, 32] {
                let j = jn_bracket(&spec, n, 4096).unwrap();
                assert!(j.bracket.lo() <= prev_hi * (1.0 + 1e-12));
                prev_hi = j.bracket.hi();
            }
        }
    }

    #[test]
    fn bennett_unit_beta_matches_j0() {
        let alpha = SequenceSpec::cesaro();
        let beta = SequenceSpec::moments(vec![(c(1.0, 0.0), 1.0)]).unwrap();
        let k2 = bennett_k2(&alpha, &beta, 4096).unwrap();
        let j0 = jn_bracket(&alpha, 0, 4096).unwrap();
        assert!((k2.lo() - j0.bracket.lo()).abs() < 1e-12);
        assert!((k2.hi() - j0.bracket.hi()).abs() < 1e-9 * (1.0 + j0.bracket.hi()));
    }

    #[test]
    fn bennett_e0_unit_beta() {
        let beta = SequenceSpec::moments(vec![(c(1.0, 0.0), 1.0)]).unwrap();
        let k2 = bennett_k2(&e0(), &beta, 64).unwrap();
        assert!(k2.is_exact());
        assert_eq!(k2.lo(), 1.0);
    }

    #[test]
    fn norm_bracket_e0() {
        let (b, v) = norm_bracket(
            &e0(),
            &CriteriaParams {
                trunc_n: 8,
                ..Default::default()
            },
        );
        assert_eq!(v, Verdict::Yes);
        assert!(b.contains(1.0));
        assert!((b.lo() - 1.0).abs() < 1e-9);
        assert!((b.hi() - 2.0 * SQRT2).abs() < 1e-9);
    }

    #[test]
    fn norm_bracket_cesaro() {
        let (b, v) = norm_bracket(&SequenceSpec::cesaro(), &CriteriaParams::default());
        assert_eq!(v, Verdict::Yes);
        assert!(b.contains(2.0), "bracket {b:?}");
        assert!(b.lo() >= 1.28);
        assert!(b.hi() <= 3.6276);
    }

    #[test]
    fn norm_bracket_power_below_one_is_no() {
        let spec = SequenceSpec::power(0.75, 1.0).unwrap();
        let (b, v) = norm_bracket(
            &spec,
            &CriteriaParams {
                trunc_n: 256,
                ..Default::default()
            },
        );
        assert_eq!(v, Verdict::No);
        assert!(!b.is_bounded());
    }

    #[test]
    fn norm_bracket_non_l2_is_no() {
        let spec = SequenceSpec::power(0.4, 1.0).unwrap();
        let (b, v) = norm_bracket(
            &spec,
            &CriteriaParams {
                trunc_n: 128,
                ..Default::default()
            },
        );
        assert_eq!(v, Verdict::No);
        assert!(!b.is_bounded());
        assert!(b.lo() > 1.0);
    }

    #[test]
    fn essential_norm_finite_support_exact_zero() {
        let spec = SequenceSpec::finite_support(vec![c(1.0, 0.0), c(0.5, 0.5), c(0.0, 1.0)]);
        let params = CriteriaParams {
            trunc_n: 16,
            ..Default::default()
        };
        let (b, compact) = essential_norm_bracket(&spec, &params).unwrap();
        assert_eq!((b.lo(), b.hi()), (0.0, 0.0));
        assert_eq!(compact, Verdict::Yes);
    }

    #[test]
    fn essential_norm_cesaro() {
        let (b, compact) =
            essential_norm_bracket(&SequenceSpec::cesaro(), &CriteriaParams::default()).unwrap();
        assert_eq!(compact, Verdict::No);
        // lim J_n = 1 for this family; the true essential norm is 2.
        assert!(b.lo() >= 1.0 - 1e-12);
        assert!(b.contains(2.0), "bracket {b:?}");
    }

    #[test]
    fn essential_norm_power_compact() {
        let spec = SequenceSpec::power(1.5, 1.0).unwrap();
        let params = CriteriaParams {
            trunc_n: 512,
            ..Default::default()
        };
        let (b, compact) = essential_norm_bracket(&spec, &params).unwrap();
        assert_eq!(compact, Verdict::Yes);
        // Upper route decays like 2^{-k_max/2} through the dyadic tail cap.
        assert!(b.hi() < 5e-3, "essential hi should collapse, got {b:?}");
    }

    #[test]
    fn essential_norm_rejects_unbounded() {
        let spec = SequenceSpec::power(0.75, 1.0).unwrap();
        assert!(essential_norm_bracket(
            &spec,
            &CriteriaParams {
                trunc_n: 64,
                ..Default::default()
            }
        )
        .is_err());
    }

    #[test]
    fn schatten_finite_support_yes() {
        let spec = SequenceSpec::finite_support(vec![c(1.0, 0.0), c(0.0, 2.0)]);
        for q in [1.5, 2.0, 3.0] {
            let (v, b) = schatten_test(&spec, q, 8).unwrap();
            assert_eq!(v, Verdict::Yes);
            assert!(b.is_exact());
        }
    }

    #[test]
    fn schatten_cesaro_no() {
        let (v, b) = schatten_test(&SequenceSpec::cesaro(), 2.0, 12).unwrap();
        assert_eq!(v, Verdict::No);
        // Partial sums already grow linearly in k_max.
        assert!(b.lo() > 5.0);
    }

    #[test]
    fn schatten_power_yes() {
        let spec = SequenceSpec::power(1.5, 1.0).unwrap();
        let (v, b) = schatten_test(&spec, 2.0, 12).unwrap();
        assert_eq!(v, Verdict::Yes);
        assert!(b.is_bounded());
    }

    #[test]
    fn schatten_rejects_bad_q() {
        assert!(schatten_test(&SequenceSpec::cesaro(), 1.0, 4).is_err());
        assert!(schatten_test(&SequenceSpec::cesaro(), 0.5, 4).is_err());
    }

    #[test]
    fn schatten_log_power_depends_on_q() {
        // s = 1, t = 0.4: sigma_h ~ h^{-0.4}; the q-sum converges iff 0.4 q > 1.
        let spec = SequenceSpec::log_power(1.0, 1.0, 0.4).unwrap();
        let (v3, _) = schatten_test(&spec, 3.0, 12).unwrap();
        assert_eq!(v3, Verdict::Yes);
        let (v2, _) = schatten_test(&spec, 2.0, 12).unwrap();
        assert_eq!(v2, Verdict::No);
    }

    #[test]
    fn norm_scales_linearly() {
        let mut rng = SplitMix64::new(4040);
        let values: Vec<Complex64> = (0..12).map(|_| rng.complex_gaussian()).collect();
        let spec = SequenceSpec::finite_support(values.clone());
        let t = 3.25;
        let scaled = SequenceSpec::finite_support(values.iter().map(|v| v * t).collect());
        let params = CriteriaParams {
            trunc_n: 16,
            ..Default::default()
        };
        let (b1, _) = norm_bracket(&spec, &params);
        let (b2, _) = norm_bracket(&scaled, &params);
        assert!((b2.lo() - t * b1.lo()).abs() < 1e-9 * (1.0 + b2.lo()));
        assert!((b2.hi() - t * b1.hi()).abs() < 1e-9 * (1.0 + b2.hi()));
    }

    #[test]
    fn report_for_custom_is_undetermined() {
        let spec = SequenceSpec::custom(|k| c(((k + 1) as f64).powf(-1.0), 0.0));
        let params = CriteriaParams {
            trunc_n: 64,
            ..Default::default()
        };
        let report = criteria_report(&spec, &params).unwrap();
        assert_eq!(report.bounded, Verdict::Undetermined);
        assert_eq!(report.compact, Verdict::Undetermined);
        for (_, v, _) in &report.schatten {
            assert_eq!(*v, Verdict::Undetermined);
        }
    }
}
