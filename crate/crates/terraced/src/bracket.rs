//! Certified enclosures and three-valued verdicts.
//!
//! Every quantity in this crate that is defined through an infinite supremum
//! or series is reported as a [`Bracket`] `[lo, hi]` rather than a point
//! estimate. Finite computations produce exact brackets (`lo == hi`); tail
//! regions contribute through family-specific analytic bounds, and when no
//! bound is available the upper endpoint is `+inf` and the associated
//! [`Verdict`] stays `Undetermined`.

use std::fmt;

/// Closed interval `[lo, hi]` enclosing a real quantity. `lo` is always
/// finite; `hi` may be `+inf` when no finite upper certificate exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    lo: f64,
    hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo.is_finite(), "bracket lower endpoint must be finite");
        assert!(!hi.is_nan() && hi >= lo, "bracket endpoints out of order");
        Bracket { lo, hi }
    }

    pub fn exact(v: f64) -> Self {
        Self::new(v, v)
    }

    pub fn unbounded(lo: f64) -> Self {
        Self::new(lo, f64::INFINITY)
    }

    pub fn zero() -> Self {
        Self::exact(0.0)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Enclosure of `sqrt(x)` for a nonnegative quantity `x`.
    pub fn sqrt(&self) -> Self {
        Self::new(self.lo.max(0.0).sqrt(), self.hi.max(0.0).sqrt())
    }

    /// Enclosure of `t * x` for a fixed scalar `t >= 0`.
    pub fn scale(&self, t: f64) -> Self {
        debug_assert!(t >= 0.0);
        Self::new(self.lo * t, self.hi * t)
    }

    pub fn add(&self, o: &Bracket) -> Self {
        Self::new(self.lo + o.lo, self.hi + o.hi)
    }

    pub fn add_scalar(&self, x: f64) -> Self {
        Self::new(self.lo + x, self.hi + x)
    }

    /// Enclosure of `max(x, y)` from enclosures of `x` and `y`.
    pub fn join_max(&self, o: &Bracket) -> Self {
        Self::new(self.lo.max(o.lo), self.hi.max(o.hi))
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.6e}, {:.6e}]", self.lo, self.hi)
    }
}

/// Three-valued answer for semi-decidable properties (boundedness,
/// compactness, Schatten membership). `Yes` and `No` are only emitted with a
/// certificate behind them; everything else is `Undetermined`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Undetermined,
}

impl Verdict {
    /// Three-valued conjunction: any `No` wins, `Yes` needs both.
    pub fn and(self, o: Verdict) -> Verdict {
        use Verdict::*;
        match (self, o) {
            (No, _) | (_, No) => No,
            (Yes, Yes) => Yes,
            _ => Undetermined,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
