//! Nonnegative reals carried by their logarithm.
//!
//! Word sums over lengths in the hundreds overflow `f64` long before they
//! become interesting, so every exponential sum in the crate is accumulated
//! here. Zero is an explicit variant rather than `-inf`.

use core::cmp::Ordering;
use core::fmt;

use crate::math::{exp, ln, ln_1p};

/// A nonnegative real `x`, stored as `ln x`.
#[derive(Clone, Copy, PartialEq)]
pub enum LogValue {
    Zero,
    Ln(f64),
}

impl LogValue {
    pub const ONE: LogValue = LogValue::Ln(0.0);

    /// The value `e^x`.
    #[inline]
    pub fn exp(x: f64) -> Self {
        debug_assert!(!x.is_nan());
        LogValue::Ln(x)
    }

    /// Converts a linear nonnegative value.
    pub fn from_linear(x: f64) -> Self {
        debug_assert!(x >= 0.0);
        if x > 0.0 {
            LogValue::Ln(ln(x))
        } else {
            LogValue::Zero
        }
    }

    #[inline]
    pub fn ln(self) -> Option<f64> {
        match self {
            LogValue::Zero => None,
            LogValue::Ln(x) => Some(x),
        }
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        matches!(self, LogValue::Zero)
    }

    /// Linear value; underflows to `0.0` for very small logs.
    pub fn to_linear(self) -> f64 {
        match self {
            LogValue::Zero => 0.0,
            LogValue::Ln(x) => exp(x),
        }
    }

    /// Sum, computed as a stable log-sum-exp.
    #[inline]
    pub fn add(self, other: LogValue) -> LogValue {
        match (self, other) {
            (LogValue::Zero, o) | (o, LogValue::Zero) => o,
            (LogValue::Ln(a), LogValue::Ln(b)) => {
                let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
                LogValue::Ln(hi + ln_1p(exp(lo - hi)))
            }
        }
    }

    /// Product.
    #[inline]
    pub fn mul(self, other: LogValue) -> LogValue {
        match (self, other) {
            (LogValue::Ln(a), LogValue::Ln(b)) => LogValue::Ln(a + b),
            _ => LogValue::Zero,
        }
    }

    /// Multiplies by `e^x`.
    #[inline]
    pub fn mul_exp(self, x: f64) -> LogValue {
        match self {
            LogValue::Zero => LogValue::Zero,
            LogValue::Ln(a) => LogValue::Ln(a + x),
        }
    }

    pub fn min(self, other: LogValue) -> LogValue {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: LogValue) -> LogValue {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Relative difference `|x/y - 1|`, measured in log space.
    pub fn relative_gap(self, other: LogValue) -> f64 {
        match (self, other) {
            (LogValue::Zero, LogValue::Zero) => 0.0,
            (LogValue::Ln(a), LogValue::Ln(b)) => {
                let d = (a - b).abs();
                if d < 1e-3 {
                    d * (1.0 + d)
                } else {
                    exp(d) - 1.0
                }
            }
            _ => f64::INFINITY,
        }
    }
}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (LogValue::Zero, LogValue::Zero) => Some(Ordering::Equal),
            (LogValue::Zero, LogValue::Ln(_)) => Some(Ordering::Less),
            (LogValue::Ln(_), LogValue::Zero) => Some(Ordering::Greater),
            (LogValue::Ln(a), LogValue::Ln(b)) => a.partial_cmp(b),
        }
    }
}

impl fmt::Debug for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogValue::Zero => f.write_str("0"),
            LogValue::Ln(x) => write!(f, "e^{x}"),
        }
    }
}

impl core::iter::Sum for LogValue {
    fn sum<I: Iterator<Item = LogValue>>(iter: I) -> Self {
        let mut acc = LogSum::new();
        for v in iter {
            acc.push(v);
        }
        acc.value()
    }
}

/// Streaming log-sum-exp accumulator.
///
/// Keeps the running maximum and the sum of `e^(x - max)`, rescaling when a
/// larger term arrives.
#[derive(Clone, Copy, Debug)]
pub struct LogSum {
    max: f64,
    scaled: f64,
    empty: bool,
}

impl Default for LogSum {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSum {
    pub fn new() -> Self {
        LogSum {
            max: 0.0,
            scaled: 0.0,
            empty: true,
        }
    }

    /// Adds `e^x`.
    #[inline]
    pub fn push_ln(&mut self, x: f64) {
        if self.empty {
            self.max = x;
            self.scaled = 1.0;
            self.empty = false;
        } else if x <= self.max {
            self.scaled += exp(x - self.max);
        } else {
            self.scaled = self.scaled * exp(self.max - x) + 1.0;
            self.max = x;
        }
    }

    #[inline]
    pub fn push(&mut self, v: LogValue) {
        if let LogValue::Ln(x) = v {
            self.push_ln(x);
        }
    }

    pub fn value(&self) -> LogValue {
        if self.empty {
            LogValue::Zero
        } else {
            LogValue::Ln(self.max + ln(self.scaled))
        }
    }
}
