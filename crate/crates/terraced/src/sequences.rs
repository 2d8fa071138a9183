//! Coefficient sequences with certified tail energies.
//!
//! A [`SequenceSpec`] describes a complex coefficient sequence `alpha`
//! evaluable at every natural index. Built-in families (power, log-power,
//! moment sequences of atomic measures) carry analytic tail bounds, so tail
//! energies and dyadic block quantities come back as certified [`Bracket`]s.
//! Finite-support sequences are exact everywhere; user closed forms evaluate
//! but carry no tail certificates.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use crate::bracket::{Bracket, Verdict};
use crate::{Result, TerracedError};

pub const SEQ_FILE_HEADER: &str = "#terraced-seq v1";

const LN2: f64 = std::f64::consts::LN_2;

/// Explicit terms summed before an analytic remainder bound takes over.
/// Sized so family brackets stay near 1e-6 relative width at desk scale.
fn explicit_terms(m: u64) -> u64 {
    (4 * m).max(1024)
}

/// A coefficient sequence `alpha = (alpha_k)` on the naturals.
///
/// Immutable after construction; cheap to clone and safe to evaluate from
/// any number of threads concurrently.
#[derive(Clone)]
pub enum SequenceSpec {
    /// Finitely many stored coefficients; zero beyond.
    FiniteSupport { values: Arc<Vec<Complex64>> },
    /// `alpha_k = scale * (k+1)^{-s}`, `s > 0`. With `s = 1, scale = 1` this
    /// is the classical Cesaro sequence.
    Power { s: f64, scale: f64 },
    /// `alpha_k = scale * (k+1)^{-s} * ln(k+2)^{-t}`, `s > 0`, `t >= 0`.
    LogPower { s: f64, scale: f64, t: f64 },
    /// `alpha_k = sum_i w_i * t_i^k` with nodes `t_i` in `[0, 1]` (`0^0 = 1`).
    Moments { atoms: Arc<Vec<(Complex64, f64)>> },
    /// Deterministic user-supplied closed form; evaluates everywhere but has
    /// no tail certificates, so derived verdicts stay undetermined.
    Custom {
        eval: Arc<dyn Fn(u64) -> Complex64 + Send + Sync>,
    },
    /// First difference `alpha_k = inner_{k+1} - inner_k` of a power or
    /// log-power sequence. Built internally for multiplier analysis.
    Difference { inner: Arc<SequenceSpec> },
}

impl fmt::Debug for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::FiniteSupport { values } => f
                .debug_struct("FiniteSupport")
                .field("len", &values.len())
                .finish(),
            SequenceSpec::Power { s, scale } => f
                .debug_struct("Power")
                .field("s", s)
                .field("scale", scale)
                .finish(),
            SequenceSpec::LogPower { s, scale, t } => f
                .debug_struct("LogPower")
                .field("s", s)
                .field("scale", scale)
                .field("t", t)
                .finish(),
            SequenceSpec::Moments { atoms } => f
                .debug_struct("Moments")
                .field("atoms", &atoms.len())
                .finish(),
            SequenceSpec::Custom { .. } => f.write_str("Custom"),
            SequenceSpec::Difference { inner } => {
                f.debug_struct("Difference").field("inner", inner).finish()
            }
        }
    }
}

impl SequenceSpec {
    /// The classical Cesaro sequence `alpha_k = 1/(k+1)`.
    pub fn cesaro() -> Self {
        SequenceSpec::Power { s: 1.0, scale: 1.0 }
    }

    pub fn power(s: f64, scale: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(TerracedError::invalid(format!(
                "power family needs exponent s > 0, got {s}"
            )));
        }
        if !scale.is_finite() {
            return Err(TerracedError::invalid("power family scale must be finite"));
        }
        Ok(SequenceSpec::Power { s, scale: scale.abs() })
    }

    pub fn log_power(s: f64, scale: f64, t: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(TerracedError::invalid(format!(
                "log-power family needs exponent s > 0, got {s}"
            )));
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(TerracedError::invalid(format!(
                "log-power family needs log-exponent t >= 0, got {t}"
            )));
        }
        if !scale.is_finite() {
            return Err(TerracedError::invalid("log-power scale must be finite"));
        }
        Ok(SequenceSpec::LogPower { s, scale: scale.abs(), t })
    }

    pub fn finite_support(values: Vec<Complex64>) -> Self {
        SequenceSpec::FiniteSupport {
            values: Arc::new(values),
        }
    }

    /// Moment sequence of the atomic measure `sum_i w_i delta_{t_i}`.
    pub fn moments(atoms: Vec<(Complex64, f64)>) -> Result<Self> {
        for (i, (_, t)) in atoms.iter().enumerate() {
            if !(*t >= 0.0 && *t <= 1.0) {
                return Err(TerracedError::NodeOutOfRange { index: i, value: *t });
            }
        }
        Ok(SequenceSpec::Moments {
            atoms: Arc::new(atoms),
        })
    }

    pub fn custom(eval: impl Fn(u64) -> Complex64 + Send + Sync + 'static) -> Self {
        SequenceSpec::Custom {
            eval: Arc::new(eval),
        }
    }

    /// First-difference sequence `k -> inner(k+1) - inner(k)`. Only the
    /// power and log-power families are accepted here; finite-support and
    /// moment sequences have exact closed-form differences built elsewhere.
    pub(crate) fn difference(inner: SequenceSpec) -> Result<Self> {
        match &inner {
            SequenceSpec::Power { .. } | SequenceSpec::LogPower { .. } => {
                Ok(SequenceSpec::Difference {
                    inner: Arc::new(inner),
                })
            }
            _ => Err(TerracedError::invalid(
                "difference wrapper only supports power and log-power families",
            )),
        }
    }

    /// Evaluates `alpha_k`. Deterministic for every `k`.
    pub fn eval(&self, k: u64) -> Complex64 {
        match self {
            SequenceSpec::FiniteSupport { values } => values
                .get(k as usize)
                .copied()
                .unwrap_or(Complex64::new(0.0, 0.0)),
            SequenceSpec::Power { s, scale } => {
                Complex64::new(scale * ((k + 1) as f64).powf(-s), 0.0)
            }
            SequenceSpec::LogPower { s, scale, t } => {
                let x = (k + 1) as f64;
                Complex64::new(scale * x.powf(-s) * ((k + 2) as f64).ln().powf(-t), 0.0)
            }
            SequenceSpec::Moments { atoms } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (w, t) in atoms.iter() {
                    let p = if k == 0 { 1.0 } else { t.powf(k as f64) };
                    acc += w * p;
                }
                acc
            }
            SequenceSpec::Custom { eval } => eval(k),
            SequenceSpec::Difference { inner } => inner.eval(k + 1) - inner.eval(k),
        }
    }

    /// `|alpha_k|^2`.
    pub fn abs2(&self, k: u64) -> f64 {
        self.eval(k).norm_sqr()
    }

    /// One past the last index that can carry a nonzero coefficient, when the
    /// sequence provably vanishes beyond some point.
    pub fn support_end(&self) -> Option<u64> {
        match self {
            SequenceSpec::FiniteSupport { values } => {
                let mut end = values.len();
                while end > 0 && values[end - 1] == Complex64::new(0.0, 0.0) {
                    end -= 1;
                }
                Some(end as u64)
            }
            SequenceSpec::Moments { atoms } => {
                let live: Vec<_> = atoms.iter().filter(|(w, _)| w.norm_sqr() > 0.0).collect();
                if live.is_empty() {
                    Some(0)
                } else if live.iter().all(|(_, t)| *t == 0.0) {
                    Some(1)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Materializes the first `n` coefficients as a finite-support spec.
    pub fn materialize(&self, n: usize) -> SequenceSpec {
        SequenceSpec::finite_support((0..n as u64).map(|k| self.eval(k)).collect())
    }

    /// Net weight sitting on the node `t = 1` of a moment sequence.
    fn moments_weight_at_one(atoms: &[(Complex64, f64)]) -> Complex64 {
        atoms
            .iter()
            .filter(|(_, t)| *t == 1.0)
            .map(|(w, _)| *w)
            .sum()
    }

    /// Certified enclosure of the tail energy `sum_{k >= m} |alpha_k|^2`.
    ///
    /// Exact for finite-support and moment sequences; integral-comparison
    /// brackets for the power families (explicit partial sums first, analytic
    /// remainder beyond); `[partial, +inf)` for custom closed forms.
    pub fn tail_energy(&self, m: u64) -> Result<Bracket> {
        match self {
            SequenceSpec::FiniteSupport { values } => {
                let mut sum = 0.0;
                for k in (m as usize)..values.len() {
                    sum += values[k].norm_sqr();
                }
                Ok(Bracket::exact(sum))
            }
            SequenceSpec::Power { s, scale } => {
                if *s <= 0.5 {
                    return Err(TerracedError::Divergent(format!(
                        "power family with s = {s} <= 1/2 is not in l2"
                    )));
                }
                let horizon = m + explicit_terms(m);
                let partial: f64 = (m..horizon).map(|k| self.abs2(k)).sum();
                // g(k) = scale^2 (k+1)^{-2s} is decreasing, so
                // int_M^inf g <= sum_{k>=M} g(k) <= g(M) + int_M^inf g.
                let integral =
                    scale * scale * ((horizon + 1) as f64).powf(1.0 - 2.0 * s) / (2.0 * s - 1.0);
                let first = self.abs2(horizon);
                Ok(Bracket::new(partial + integral, partial + integral + first))
            }
            SequenceSpec::LogPower { s, scale, t } => {
                if *s < 0.5 || (*s == 0.5 && *t <= 0.5) {
                    return Err(TerracedError::Divergent(format!(
                        "log-power family with s = {s}, t = {t} is not in l2"
                    )));
                }
                let horizon = m + explicit_terms(m);
                let partial: f64 = (m..horizon).map(|k| self.abs2(k)).sum();
                let hm = horizon as f64;
                let rem_hi = if *s == 0.5 {
                    // sum_{k>=M} (k+1)^{-1} ln(k+2)^{-2t}
                    //   <= g(M) + ln(M+1)^{1-2t} / (2t-1)
                    scale * scale * ((hm + 1.0).ln().powf(1.0 - 2.0 * t) / (2.0 * t - 1.0))
                        + self.abs2(horizon)
                } else {
                    let log_cap = ((horizon + 2) as f64).ln().powf(-2.0 * t);
                    scale * scale * log_cap * (hm + 1.0).powf(1.0 - 2.0 * s) / (2.0 * s - 1.0)
                        + self.abs2(horizon)
                };
                Ok(Bracket::new(partial, partial + rem_hi))
            }
            SequenceSpec::Moments { atoms } => {
                let at_one = Self::moments_weight_at_one(atoms);
                if at_one.norm_sqr() > 0.0 {
                    return Err(TerracedError::Divergent(format!(
                        "moment sequence has net weight {at_one} at node 1; coefficients do not vanish"
                    )));
                }
                // Closed form: sum_{k>=m} |alpha_k|^2
                //   = sum_{i,j} w_i conj(w_j) (t_i t_j)^m / (1 - t_i t_j).
                let live: Vec<_> = atoms.iter().filter(|(_, t)| *t < 1.0).collect();
                let mut total = 0.0;
                for (wi, ti) in &live {
                    for (wj, tj) in &live {
                        let tt = ti * tj;
                        let p = if m == 0 { 1.0 } else { tt.powf(m as f64) };
                        total += ((wi * wj.conj()) * p / (1.0 - tt)).re;
                    }
                }
                Ok(Bracket::exact(total.max(0.0)))
            }
            SequenceSpec::Custom { .. } => {
                let horizon = m + explicit_terms(m);
                let partial: f64 = (m..horizon).map(|k| self.abs2(k)).sum();
                Ok(Bracket::unbounded(partial))
            }
            SequenceSpec::Difference { .. } => {
                let (p, coef) = self.difference_envelope().expect("difference envelope");
                let horizon = m + explicit_terms(m);
                let partial: f64 = (m..horizon).map(|k| self.abs2(k)).sum();
                // |alpha_k| <= coef (k+1)^{-p} with p = s+1 > 1.
                let hm = (horizon + 1) as f64;
                let rem_hi =
                    coef * coef * (hm.powf(1.0 - 2.0 * p) / (2.0 * p - 1.0) + hm.powf(-2.0 * p));
                Ok(Bracket::new(partial, partial + rem_hi))
            }
        }
    }

    /// Pointwise envelope `|alpha_k| <= coef * (k+1)^{-p}` for difference
    /// sequences, from the mean value theorem on the parent closed form.
    fn difference_envelope(&self) -> Option<(f64, f64)> {
        match self {
            SequenceSpec::Difference { inner } => match inner.as_ref() {
                SequenceSpec::Power { s, scale } => Some((s + 1.0, scale * s)),
                SequenceSpec::LogPower { s, scale, t } => {
                    // |f'(x)| <= scale x^{-s-1} ln(x+1)^{-t} (s + t/ln(x+1))
                    // and ln(x+1) >= ln 2 on the relevant range.
                    let coef = scale * (s + t / LN2) * LN2.powf(-*t);
                    Some((s + 1.0, coef))
                }
                _ => None,
            },
            _ => None,
        }
    }
}

/// Builds a moment-sequence spec; thin wrapper kept for discoverability.
pub fn moments_spec(atoms: Vec<(Complex64, f64)>) -> Result<SequenceSpec> {
    SequenceSpec::moments(atoms)
}

// ---------------------------------------------------------------------------
// Dyadic tail facts (family-specific certificates)
// ---------------------------------------------------------------------------

/// Certified facts about the dyadic profile `sigma_h` beyond a cutoff.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SigmaTailFacts {
    /// Enclosure of `sup_{h >= cutoff} sigma_h`; `hi` may be infinite.
    pub sup: Bracket,
    /// Whether `lim_h sigma_h = 0` holds.
    pub limit_zero: Verdict,
    /// Certified lower bound for `limsup_h sigma_h` (`inf` when the profile
    /// provably diverges, `0` when nothing is certified).
    pub limsup_lo: f64,
}

/// `int_{2^h}^{2^{h+1}} x^{1-2s} dx`, the integral comparison for one dyadic
/// block of the power family.
fn block_integral(s: f64, h: u32) -> f64 {
    if s == 1.0 {
        LN2
    } else {
        let e = 2.0 - 2.0 * s;
        (2f64).powf(h as f64 * e) * ((2f64).powf(e) - 1.0) / e
    }
}

/// Lower integral bound for one power-family block:
/// `sum_{j in Z_h} (j+1)^{1-2s} >= int_{2^h+1}^{2^{h+1}+1} x^{1-2s} dx`.
fn block_integral_lo(s: f64, h: u32) -> f64 {
    let a = (2f64).powf(h as f64) + 1.0;
    let b = 2.0 * ((2f64).powf(h as f64)) + 1.0;
    if s == 1.0 {
        (b / a).ln()
    } else {
        let e = 2.0 - 2.0 * s;
        (b.powf(e) - a.powf(e)) / e
    }
}

impl SequenceSpec {
    /// Exact `sigma_h` for one dyadic block (finite sum). Usable for every
    /// family; cost is `2^h` evaluations.
    pub(crate) fn sigma_exact(&self, h: i64) -> f64 {
        if h < 0 {
            return self.eval(0).norm();
        }
        let lo = 1u64 << h;
        let hi = 1u64 << (h + 1);
        let mut sum = 0.0;
        for j in lo..hi {
            sum += (j + 1) as f64 * self.abs2(j);
        }
        sum.sqrt()
    }

    /// Family upper bound for `sigma_h` (infinite when none).
    fn sigma_block_hi(&self, h: u32) -> f64 {
        match self {
            SequenceSpec::FiniteSupport { .. } => {
                let end = self.support_end().unwrap();
                if (1u64 << h) >= end {
                    0.0
                } else {
                    self.sigma_exact(h as i64)
                }
            }
            SequenceSpec::Power { s, scale } => scale * block_integral(*s, h).sqrt(),
            SequenceSpec::LogPower { s, scale, t } => {
                let log_cap = (((1u64 << h) + 2) as f64).ln().powf(-*t);
                scale * log_cap * block_integral(*s, h).sqrt()
            }
            SequenceSpec::Moments { atoms } => {
                if Self::moments_weight_at_one(atoms).norm_sqr() > 0.0 {
                    return f64::INFINITY;
                }
                let live: Vec<_> = atoms.iter().filter(|(_, t)| *t < 1.0).collect();
                if live.is_empty() {
                    return 0.0;
                }
                let w: f64 = live.iter().map(|(w, _)| w.norm()).sum();
                let tm: f64 = live.iter().fold(0.0, |acc, (_, t)| acc.max(*t));
                if tm == 0.0 {
                    return 0.0;
                }
                // sigma_h^2 <= W^2 2^{h+1} t^{2^{h+1}} / (1 - t^2)
                let pow2 = (2f64).powf((h + 1) as f64);
                let geom = tm.powf(pow2);
                (w * w * pow2 * geom / (1.0 - tm * tm)).sqrt()
            }
            SequenceSpec::Custom { .. } => f64::INFINITY,
            SequenceSpec::Difference { .. } => {
                let (p, coef) = self.difference_envelope().expect("difference envelope");
                coef * block_integral(p, h).sqrt()
            }
        }
    }

    /// Index from which `sigma_block_hi` is nonincreasing, so suprema over
    /// tails can be read off at the cutoff.
    fn sigma_block_hi_monotone_from(&self) -> Option<u32> {
        match self {
            SequenceSpec::FiniteSupport { .. } => Some(0),
            SequenceSpec::Power { s, .. } | SequenceSpec::LogPower { s, .. } if *s >= 1.0 => {
                Some(0)
            }
            SequenceSpec::Power { .. } | SequenceSpec::LogPower { .. } => None,
            SequenceSpec::Moments { atoms } => {
                if Self::moments_weight_at_one(atoms).norm_sqr() > 0.0 {
                    return None;
                }
                let live: Vec<_> = atoms.iter().filter(|(_, t)| *t < 1.0).collect();
                let tm: f64 = live.iter().fold(0.0, |acc, (_, t)| acc.max(*t));
                if tm == 0.0 {
                    return Some(0);
                }
                // Ratio of consecutive bounds is 2 t^{2^{h+1}} < 1 once
                // 2^{h+1} ln(1/t) > ln 2.
                let need = LN2 / -(tm.ln());
                let mut h = 0u32;
                while (2f64).powf((h + 1) as f64) <= need && h < 1100 {
                    h += 1;
                }
                Some(h)
            }
            SequenceSpec::Custom { .. } => None,
            SequenceSpec::Difference { .. } => Some(0),
        }
    }

    pub(crate) fn sigma_tail_facts(&self, cutoff: u32) -> SigmaTailFacts {
        match self {
            SequenceSpec::FiniteSupport { .. } => {
                let end = self.support_end().unwrap();
                let mut sup = 0.0f64;
                let mut h = cutoff;
                while (1u64 << h) < end.max(1) {
                    sup = sup.max(self.sigma_exact(h as i64));
                    h += 1;
                    if h > 63 {
                        break;
                    }
                }
                SigmaTailFacts {
                    sup: Bracket::exact(sup),
                    limit_zero: Verdict::Yes,
                    limsup_lo: 0.0,
                }
            }
            SequenceSpec::Power { s, scale } => {
                if *s > 1.0 {
                    let hi = self.sigma_block_hi(cutoff);
                    let lo = scale * block_integral_lo(*s, cutoff).sqrt();
                    SigmaTailFacts {
                        sup: Bracket::new(lo.min(hi), hi),
                        limit_zero: Verdict::Yes,
                        limsup_lo: 0.0,
                    }
                } else if *s == 1.0 {
                    let hi = scale * LN2.sqrt();
                    let lo = scale * block_integral_lo(1.0, cutoff).sqrt();
                    // sigma_h^2 >= scale^2 ln((2^{h+1}+1)/(2^h+1)), increasing
                    // toward ln 2; evaluate deep for the limsup certificate.
                    let limsup_lo = scale * block_integral_lo(1.0, 40).sqrt();
                    SigmaTailFacts {
                        sup: Bracket::new(lo.min(hi), hi),
                        limit_zero: Verdict::No,
                        limsup_lo,
                    }
                } else {
                    let lo = scale * block_integral_lo(*s, cutoff).sqrt();
                    SigmaTailFacts {
                        sup: Bracket::unbounded(lo),
                        limit_zero: Verdict::No,
                        limsup_lo: f64::INFINITY,
                    }
                }
            }
            SequenceSpec::LogPower { s, scale, t } => {
                if *s > 1.0 || (*s == 1.0 && *t > 0.0) {
                    SigmaTailFacts {
                        sup: Bracket::new(0.0, self.sigma_block_hi(cutoff)),
                        limit_zero: Verdict::Yes,
                        limsup_lo: 0.0,
                    }
                } else if *s == 1.0 {
                    SequenceSpec::Power { s: 1.0, scale: *scale }.sigma_tail_facts(cutoff)
                } else {
                    // 1/2 <= s < 1: blocks grow despite the log damping.
                    let lo = if cutoff < 40 {
                        scale
                            * (((1u64 << (cutoff + 1)) + 2) as f64).ln().powf(-*t)
                            * block_integral_lo(*s, cutoff).sqrt()
                    } else {
                        0.0
                    };
                    SigmaTailFacts {
                        sup: Bracket::unbounded(lo),
                        limit_zero: Verdict::No,
                        limsup_lo: f64::INFINITY,
                    }
                }
            }
            SequenceSpec::Moments { atoms } => {
                if Self::moments_weight_at_one(atoms).norm_sqr() > 0.0 {
                    // |alpha_k| tends to the nonzero net weight at 1, so the
                    // weighted blocks blow up like 2^h.
                    SigmaTailFacts {
                        sup: Bracket::unbounded(0.0),
                        limit_zero: Verdict::No,
                        limsup_lo: f64::INFINITY,
                    }
                } else {
                    let start = self.sigma_block_hi_monotone_from().unwrap();
                    let mut hi = 0.0f64;
                    for h in cutoff..=start.max(cutoff) + 1 {
                        hi = hi.max(self.sigma_block_hi(h));
                    }
                    SigmaTailFacts {
                        sup: Bracket::new(0.0, hi),
                        limit_zero: Verdict::Yes,
                        limsup_lo: 0.0,
                    }
                }
            }
            SequenceSpec::Custom { .. } => SigmaTailFacts {
                sup: Bracket::unbounded(0.0),
                limit_zero: Verdict::Undetermined,
                limsup_lo: 0.0,
            },
            SequenceSpec::Difference { .. } => SigmaTailFacts {
                sup: Bracket::new(0.0, self.sigma_block_hi(cutoff)),
                limit_zero: Verdict::Yes,
                limsup_lo: 0.0,
            },
        }
    }

    /// Upper bound for `sum_{h >= cutoff} sigma_h^q`; `inf` when no finite
    /// certificate exists.
    pub(crate) fn sigma_tail_qsum_hi(&self, cutoff: u32, q: f64) -> f64 {
        match self {
            SequenceSpec::FiniteSupport { .. } => {
                let end = self.support_end().unwrap();
                let mut sum = 0.0;
                let mut h = cutoff;
                while (1u64 << h) < end.max(1) {
                    sum += self.sigma_exact(h as i64).powf(q);
                    h += 1;
                    if h > 63 {
                        break;
                    }
                }
                sum
            }
            SequenceSpec::Power { s, .. } => {
                if *s > 1.0 {
                    // Geometric: B(h) = B(cutoff) 2^{(1-s)(h-cutoff)}.
                    let b0 = self.sigma_block_hi(cutoff).powf(q);
                    let r = (2f64).powf((1.0 - s) * q);
                    b0 / (1.0 - r)
                } else {
                    f64::INFINITY
                }
            }
            SequenceSpec::LogPower { s, scale, t } => {
                if *s > 1.0 {
                    let b0 = self.sigma_block_hi(cutoff).powf(q);
                    let r = (2f64).powf((1.0 - s) * q);
                    b0 / (1.0 - r)
                } else if *s == 1.0 && *t > 0.0 {
                    // B(h) = scale sqrt(ln2) ln(2^h+2)^{-t} <= c (h ln2)^{-t};
                    // the q-sum converges iff t q > 1.
                    let tq = t * q;
                    if tq <= 1.0 {
                        return f64::INFINITY;
                    }
                    let c = (scale * LN2.sqrt()).powf(q) * LN2.powf(-tq);
                    let x0 = cutoff.max(1) as f64;
                    c * (x0.powf(-tq) + x0.powf(1.0 - tq) / (tq - 1.0))
                } else {
                    f64::INFINITY
                }
            }
            SequenceSpec::Moments { atoms } => {
                if Self::moments_weight_at_one(atoms).norm_sqr() > 0.0 {
                    return f64::INFINITY;
                }
                // Superexponential decay: sum explicit bounds until underflow.
                let mut sum = 0.0;
                let mut h = cutoff;
                loop {
                    let b = self.sigma_block_hi(h).powf(q);
                    sum += b;
                    if b == 0.0 || h > cutoff + 1200 {
                        break;
                    }
                    h += 1;
                }
                sum
            }
            SequenceSpec::Custom { .. } => f64::INFINITY,
            SequenceSpec::Difference { .. } => {
                let (p, _) = self.difference_envelope().expect("difference envelope");
                let b0 = self.sigma_block_hi(cutoff).powf(q);
                let r = (2f64).powf((1.0 - p) * q);
                b0 / (1.0 - r)
            }
        }
    }

    /// Certified divergence of `sum_h sigma_h^q`.
    pub(crate) fn sigma_qsum_diverges(&self, q: f64) -> bool {
        match self {
            SequenceSpec::FiniteSupport { .. } => false,
            SequenceSpec::Power { s, .. } => *s <= 1.0,
            SequenceSpec::LogPower { s, t, .. } => {
                *s < 1.0 || (*s == 1.0 && t * q <= 1.0)
            }
            SequenceSpec::Moments { atoms } => {
                Self::moments_weight_at_one(atoms).norm_sqr() > 0.0
            }
            SequenceSpec::Custom { .. } => false,
            SequenceSpec::Difference { .. } => false,
        }
    }

    /// Upper bound for `sup_{m > horizon} (m+1-n)^{1/2} tail(m)^{1/2}`, the
    /// unscanned region of the tail supremum; `inf` when not certified.
    pub(crate) fn jn_tail_cap(&self, horizon: u64) -> f64 {
        let m = horizon + 1;
        let x = (m + 1) as f64;
        match self {
            SequenceSpec::FiniteSupport { .. } => {
                let end = self.support_end().unwrap();
                if m >= end {
                    0.0
                } else {
                    // Horizon below support end: scan further, cap unknown.
                    f64::INFINITY
                }
            }
            SequenceSpec::Power { s, scale } => {
                if *s < 1.0 {
                    return f64::INFINITY;
                }
                // (m+1) tail_hi(m) is nonincreasing for s >= 1.
                let phi = scale
                    * scale
                    * (x.powf(2.0 - 2.0 * s) / (2.0 * s - 1.0) + x.powf(1.0 - 2.0 * s));
                phi.sqrt()
            }
            SequenceSpec::LogPower { s, scale, t } => {
                if *s < 1.0 {
                    return f64::INFINITY;
                }
                let log_cap = ((m + 2) as f64).ln().powf(-2.0 * t);
                let phi = scale
                    * scale
                    * log_cap
                    * (x.powf(2.0 - 2.0 * s) / (2.0 * s - 1.0) + x.powf(1.0 - 2.0 * s));
                phi.sqrt()
            }
            SequenceSpec::Moments { atoms } => {
                if Self::moments_weight_at_one(atoms).norm_sqr() > 0.0 {
                    return f64::INFINITY;
                }
                let live: Vec<_> = atoms.iter().filter(|(_, t)| *t < 1.0).collect();
                if live.is_empty() {
                    return 0.0;
                }
                let w: f64 = live.iter().map(|(w, _)| w.norm()).sum();
                let tm: f64 = live.iter().fold(0.0, |acc, (_, t)| acc.max(*t));
                if tm == 0.0 {
                    return 0.0;
                }
                // (m+1) W^2 t^{2m} / (1-t^2), decreasing once m > m*.
                let phi = |mm: f64| (mm + 1.0) * w * w * tm.powf(2.0 * mm) / (1.0 - tm * tm);
                let m_star = tm * tm / (1.0 - tm * tm);
                let mut cap = phi(m as f64);
                let mut mm = m as f64;
                while mm < m_star + 2.0 {
                    mm += 1.0;
                    cap = cap.max(phi(mm));
                }
                cap.sqrt()
            }
            SequenceSpec::Custom { .. } => f64::INFINITY,
            SequenceSpec::Difference { .. } => {
                let (p, coef) = self.difference_envelope().expect("difference envelope");
                let phi = coef
                    * coef
                    * (x.powf(2.0 - 2.0 * p) / (2.0 * p - 1.0) + x.powf(1.0 - 2.0 * p));
                phi.sqrt()
            }
        }
    }

    /// Certified lower bound for `lim_n J_n`; `inf` when the tail supremum
    /// provably diverges, `0` when nothing is certified.
    pub(crate) fn jn_liminf_lo(&self) -> f64 {
        match self {
            SequenceSpec::Power { s, scale } => {
                if *s < 1.0 {
                    f64::INFINITY
                } else if *s == 1.0 {
                    // tail(m) >= scale^2/(m+1), so (m+1-n) tail(m) -> scale^2.
                    *scale
                } else {
                    0.0
                }
            }
            SequenceSpec::LogPower { s, t, scale } => {
                if *s < 1.0 {
                    f64::INFINITY
                } else if *s == 1.0 && *t == 0.0 {
                    *scale
                } else {
                    0.0
                }
            }
            SequenceSpec::Moments { atoms }
                if Self::moments_weight_at_one(atoms).norm_sqr() > 0.0 =>
            {
                f64::INFINITY
            }
            _ => 0.0,
        }
    }

    /// Whether the coefficients certifiably fail to produce a bounded
    /// operator (used for "no" verdicts).
    pub(crate) fn certified_unbounded(&self) -> bool {
        self.sigma_tail_facts(0).limsup_lo.is_infinite()
    }

    // Facts about the plain modulus sequence |alpha_k| (diagonal analysis).

    /// Enclosure of `sup_k |alpha_k|`; `hi` may be infinite.
    pub(crate) fn abs_sup(&self) -> Bracket {
        match self {
            SequenceSpec::FiniteSupport { values } => {
                let m = values.iter().fold(0.0f64, |acc, v| acc.max(v.norm()));
                Bracket::exact(m)
            }
            SequenceSpec::Power { scale, .. } => Bracket::exact(*scale),
            SequenceSpec::LogPower { scale, t, .. } => {
                Bracket::exact(scale * LN2.powf(-*t))
            }
            SequenceSpec::Moments { atoms } => {
                let w: f64 = atoms.iter().map(|(w, _)| w.norm()).sum();
                let lo = (0..64u64).fold(0.0f64, |acc, k| acc.max(self.eval(k).norm()));
                Bracket::new(lo.min(w), w)
            }
            SequenceSpec::Custom { .. } => {
                let lo = (0..256u64).fold(0.0f64, |acc, k| acc.max(self.eval(k).norm()));
                Bracket::unbounded(lo)
            }
            SequenceSpec::Difference { .. } => {
                let (_, coef) = self.difference_envelope().expect("difference envelope");
                let lo = (0..64u64).fold(0.0f64, |acc, k| acc.max(self.eval(k).norm()));
                Bracket::new(lo.min(coef), coef)
            }
        }
    }

    /// Whether `|alpha_k| -> 0`.
    pub(crate) fn abs_limit_zero(&self) -> Verdict {
        match self {
            SequenceSpec::FiniteSupport { .. } => Verdict::Yes,
            SequenceSpec::Power { .. } => Verdict::Yes,
            SequenceSpec::LogPower { .. } => Verdict::Yes,
            SequenceSpec::Moments { atoms } => {
                if Self::moments_weight_at_one(atoms).norm_sqr() > 0.0 {
                    Verdict::No
                } else {
                    Verdict::Yes
                }
            }
            SequenceSpec::Custom { .. } => Verdict::Undetermined,
            SequenceSpec::Difference { .. } => Verdict::Yes,
        }
    }

    /// Enclosure and verdict for `sum_k |alpha_k|^q`, `q > 0`.
    pub(crate) fn abs_qsum(&self, q: f64, horizon: u64) -> (Bracket, Verdict) {
        let partial: f64 = (0..horizon).map(|k| self.eval(k).norm().powf(q)).sum();
        match self {
            SequenceSpec::FiniteSupport { values } => {
                let full: f64 = values.iter().map(|v| v.norm().powf(q)).sum();
                (Bracket::exact(full), Verdict::Yes)
            }
            SequenceSpec::Power { s, scale } => {
                let sq = s * q;
                if sq <= 1.0 {
                    (Bracket::unbounded(partial), Verdict::No)
                } else {
                    let x = (horizon + 1) as f64;
                    let rem = scale.powf(q) * (x.powf(1.0 - sq) / (sq - 1.0) + x.powf(-sq));
                    (Bracket::new(partial, partial + rem), Verdict::Yes)
                }
            }
            SequenceSpec::LogPower { s, scale, t } => {
                let sq = s * q;
                let tq = t * q;
                if sq < 1.0 || (sq == 1.0 && tq <= 1.0) {
                    (Bracket::unbounded(partial), Verdict::No)
                } else if sq == 1.0 {
                    let x = (horizon + 1) as f64;
                    let rem = scale.powf(q)
                        * (x.ln().powf(1.0 - tq) / (tq - 1.0) + self.eval(horizon).norm().powf(q));
                    (Bracket::new(partial, partial + rem), Verdict::Yes)
                } else {
                    let x = (horizon + 1) as f64;
                    let log_cap = ((horizon + 2) as f64).ln().powf(-tq);
                    let rem = scale.powf(q) * log_cap * (x.powf(1.0 - sq) / (sq - 1.0) + x.powf(-sq));
                    (Bracket::new(partial, partial + rem), Verdict::Yes)
                }
            }
            SequenceSpec::Moments { atoms } => {
                if Self::moments_weight_at_one(atoms).norm_sqr() > 0.0 {
                    return (Bracket::unbounded(partial), Verdict::No);
                }
                let live: Vec<_> = atoms.iter().filter(|(_, t)| *t < 1.0).collect();
                let w: f64 = live.iter().map(|(w, _)| w.norm()).sum();
                let tm: f64 = live.iter().fold(0.0, |acc, (_, t)| acc.max(*t));
                let rem = if tm == 0.0 || w == 0.0 {
                    0.0
                } else {
                    // |alpha_k| <= W t^k beyond the horizon.
                    w.powf(q) * tm.powf(q * horizon as f64) / (1.0 - tm.powf(q))
                };
                (Bracket::new(partial, partial + rem), Verdict::Yes)
            }
            SequenceSpec::Custom { .. } => (Bracket::unbounded(partial), Verdict::Undetermined),
            SequenceSpec::Difference { .. } => {
                let (p, coef) = self.difference_envelope().expect("difference envelope");
                let pq = p * q;
                let x = (horizon + 1) as f64;
                let rem = coef.powf(q) * (x.powf(1.0 - pq) / (pq - 1.0) + x.powf(-pq));
                (Bracket::new(partial, partial + rem), Verdict::Yes)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Sequence files
// ---------------------------------------------------------------------------

/// Writes a finite-support sequence as UTF-8 text, one `RE IM` pair per line,
/// 17 significant digits. Only finite-support specs are serializable.
pub fn save_sequence(spec: &SequenceSpec, path: impl AsRef<Path>) -> Result<()> {
    let SequenceSpec::FiniteSupport { values } = spec else {
        return Err(TerracedError::invalid(
            "only finite-support sequences can be written to a sequence file; materialize first",
        ));
    };
    let mut out = String::new();
    out.push_str(SEQ_FILE_HEADER);
    out.push('\n');
    for v in values.iter() {
        out.push_str(&format!("{:.16e} {:.16e}\n", v.re, v.im));
    }
    std::fs::write(path.as_ref(), out).map_err(|source| TerracedError::Io {
        path: path.as_ref().to_path_buf(),
        source,
    })
}

/// Reads a sequence file written by [`save_sequence`] (or by hand). Blank
/// lines and `#` comments are ignored; the header line must be present.
pub fn load_sequence(path: impl AsRef<Path>) -> Result<SequenceSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| TerracedError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut saw_header = false;
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if line == SEQ_FILE_HEADER {
                saw_header = true;
            }
            continue;
        }
        if !saw_header {
            return Err(TerracedError::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message: format!("missing \"{SEQ_FILE_HEADER}\" header before data"),
            });
        }
        let mut fields = line.split_whitespace();
        let re_s = fields.next().unwrap();
        let Some(im_s) = fields.next() else {
            return Err(TerracedError::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message: "expected two fields \"RE IM\"".into(),
            });
        };
        if fields.next().is_some() {
            return Err(TerracedError::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message: "expected exactly two fields \"RE IM\"".into(),
            });
        }
        let re: f64 = re_s.parse().map_err(|_| TerracedError::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            message: format!("malformed real part {re_s:?}"),
        })?;
        let im: f64 = im_s.parse().map_err(|_| TerracedError::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            message: format!("malformed imaginary part {im_s:?}"),
        })?;
        values.push(Complex64::new(re, im));
    }
    if !saw_header {
        return Err(TerracedError::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!("missing \"{SEQ_FILE_HEADER}\" header"),
        });
    }
    Ok(SequenceSpec::finite_support(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_cesaro() {
        let spec = SequenceSpec::cesaro();
        assert_eq!(spec.eval(0), c(1.0, 0.0));
        assert_eq!(spec.eval(3), c(0.25, 0.0));
    }

    #[test]
    fn eval_moments_single_atom() {
        let spec = SequenceSpec::moments(vec![(c(1.0, 0.0), 0.5)]).unwrap();
        assert!((spec.eval(2) - c(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn moments_atom_at_one_is_constant() {
        let spec = SequenceSpec::moments(vec![(c(1.0, 0.0), 1.0)]).unwrap();
        for k in [0u64, 1, 5, 100] {
            assert_eq!(spec.eval(k), c(1.0, 0.0));
        }
        assert!(matches!(
            spec.tail_energy(0),
            Err(TerracedError::Divergent(_))
        ));
    }

    #[test]
    fn moments_atom_at_zero_is_e0() {
        let spec = SequenceSpec::moments(vec![(c(1.0, 0.0), 0.0)]).unwrap();
        assert_eq!(spec.eval(0), c(1.0, 0.0));
        assert_eq!(spec.eval(1), c(0.0, 0.0));
        assert_eq!(spec.eval(7), c(0.0, 0.0));
        assert_eq!(spec.support_end(), Some(1));
    }

    #[test]
    fn moments_two_atoms_example() {
        let spec =
            SequenceSpec::moments(vec![(c(0.5, 0.0), 0.5), (c(0.5, 0.0), 0.25)]).unwrap();
        assert!((spec.eval(1) - c(0.375, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn moments_node_validation() {
        let err = SequenceSpec::moments(vec![(c(1.0, 0.0), 1.5)]);
        assert!(matches!(err, Err(TerracedError::NodeOutOfRange { .. })));
    }

    #[test]
    fn tail_energy_finite_support() {
        let spec = SequenceSpec::finite_support(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        let t1 = spec.tail_energy(1).unwrap();
        assert_eq!((t1.lo(), t1.hi()), (1.0, 1.0));
        let t2 = spec.tail_energy(2).unwrap();
        assert_eq!((t2.lo(), t2.hi()), (0.0, 0.0));
    }

    #[test]
    fn tail_energy_cesaro_contains_zeta2() {
        // Independent oracle: partial sums plus integral remainder bounds.
        let mut partial = 0.0;
        let n = 200_000u64;
        for k in 0..n {
            partial += 1.0 / (((k + 1) * (k + 1)) as f64);
        }
        let oracle_lo = partial + 1.0 / ((n + 1) as f64);
        let oracle_hi = partial + 1.0 / (n as f64);
        let b = SequenceSpec::cesaro().tail_energy(0).unwrap();
        assert!(b.lo() <= oracle_hi && oracle_lo <= b.hi());
        // zeta(2) = pi^2/6, frozen from the oracle run.
        let zeta2 = 1.6449340668482264;
        assert!(b.contains(zeta2));
        assert!(b.width() < 1e-5);
    }

    #[test]
    fn tail_energy_power_divergent() {
        let spec = SequenceSpec::power(0.4, 1.0).unwrap();
        assert!(matches!(
            spec.tail_energy(0),
            Err(TerracedError::Divergent(_))
        ));
    }

    #[test]
    fn tail_energy_single_atom_closed_form() {
        // |w|^2 t^{2m} / (1 - t^2) for a single atom.
        let (w, t) = (c(2.0, 1.0), 0.5);
        let spec = SequenceSpec::moments(vec![(w, t)]).unwrap();
        for m in [0u64, 1, 3, 10] {
            let want = w.norm_sqr() * t.powi(2 * m as i32) / (1.0 - t * t);
            let got = spec.tail_energy(m).unwrap();
            assert!(got.is_exact());
            assert!((got.lo() - want).abs() <= 1e-12 * want.max(1.0));
        }
    }

    #[test]
    fn tail_partial_sums_respect_bracket() {
        let spec = SequenceSpec::power(0.8, 1.3).unwrap();
        let m = 5;
        let b = spec.tail_energy(m).unwrap();
        let mut partial = 0.0;
        for k in m..(m + 50_000) {
            partial += spec.abs2(k);
            assert!(partial <= b.hi() * (1.0 + 1e-12));
        }
        // The remainder beyond the scanned horizon is what closes the gap
        // to the certified lower endpoint.
        let remainder = 1.3f64.powi(2) * ((m + 50_000) as f64).powf(-0.6) / 0.6;
        assert!(b.lo() <= partial + remainder);
    }

    #[test]
    fn tail_hi_nonincreasing_in_m() {
        for spec in [
            SequenceSpec::cesaro(),
            SequenceSpec::power(1.7, 0.9).unwrap(),
            SequenceSpec::log_power(1.0, 1.0, 1.2).unwrap(),
        ] {
            let mut prev = f64::INFINITY;
            for m in 0..40u64 {
                let b = spec.tail_energy(m).unwrap();
                assert!(b.hi() <= prev * (1.0 + 1e-12));
                prev = b.hi();
            }
        }
    }

    #[test]
    fn sigma_exact_cesaro_first_blocks() {
        let spec = SequenceSpec::cesaro();
        assert!((spec.sigma_exact(-1) - 1.0).abs() < 1e-15);
        assert!((spec.sigma_exact(0) - (0.5f64).sqrt()).abs() < 1e-15);
        assert!((spec.sigma_exact(1) - (7.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn sigma_block_hi_is_upper_bound() {
        for spec in [
            SequenceSpec::cesaro(),
            SequenceSpec::power(1.5, 1.0).unwrap(),
            SequenceSpec::log_power(1.0, 2.0, 0.7).unwrap(),
            SequenceSpec::moments(vec![(c(1.0, 0.0), 0.9), (c(0.0, 0.5), 0.3)]).unwrap(),
        ] {
            for h in 0..10u32 {
                let exact = spec.sigma_exact(h as i64);
                let hi = spec.sigma_block_hi(h);
                assert!(
                    exact <= hi * (1.0 + 1e-12),
                    "block {h}: exact {exact} vs bound {hi}"
                );
            }
        }
    }

    #[test]
    fn difference_envelope_bounds_hold() {
        let inner = SequenceSpec::power(1.0, 1.0).unwrap();
        let diff = SequenceSpec::difference(inner).unwrap();
        let (p, coef) = diff.difference_envelope().unwrap();
        for k in 0..2000u64 {
            let actual = diff.eval(k).norm();
            let bound = coef * ((k + 1) as f64).powf(-p);
            assert!(actual <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn empty_sequence_behaves() {
        let spec = SequenceSpec::finite_support(Vec::new());
        assert_eq!(spec.support_end(), Some(0));
        assert_eq!(spec.eval(0), c(0.0, 0.0));
        let t = spec.tail_energy(0).unwrap();
        assert_eq!((t.lo(), t.hi()), (0.0, 0.0));
    }

    #[test]
    fn file_round_trip_is_bitwise() {
        let dir = std::env::temp_dir().join(format!("terraced-seq-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cesaro8.seq");
        let spec = SequenceSpec::cesaro().materialize(8);
        save_sequence(&spec, &path).unwrap();
        let loaded = load_sequence(&path).unwrap();
        for k in 0..16u64 {
            assert_eq!(spec.eval(k), loaded.eval(k));
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn file_parse_error_names_line() {
        let dir = std::env::temp_dir().join(format!("terraced-seqerr-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.seq");
        std::fs::write(&path, format!("{SEQ_FILE_HEADER}\n1 0\nnope 0\n")).unwrap();
        match load_sequence(&path) {
            Err(TerracedError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn file_requires_header() {
        let dir = std::env::temp_dir().join(format!("terraced-seqhdr-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("nohdr.seq");
        std::fs::write(&path, "1 0\n").unwrap();
        assert!(matches!(
            load_sequence(&path),
            Err(TerracedError::Parse { .. })
        ));
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn simple_two_line_file() {
        let dir = std::env::temp_dir().join(format!("terraced-seq2-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("two.seq");
        std::fs::write(&path, format!("{SEQ_FILE_HEADER}\n1 0\n0 0\n")).unwrap();
        let spec = load_sequence(&path).unwrap();
        assert_eq!(spec.eval(0), c(1.0, 0.0));
        assert_eq!(spec.eval(1), c(0.0, 0.0));
        assert_eq!(spec.support_end(), Some(1));
        std::fs::remove_dir_all(&dir).ok();
    }
}
