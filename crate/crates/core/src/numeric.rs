//! Summation and exact-integer helpers used across the crate.

/// Neumaier compensated accumulator.
///
/// Terms are expected to arrive in increasing `x` (decreasing magnitude for
/// harmonic-type sums); the compensation term absorbs the low-order bits.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
    terms: u64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
        self.terms += 1;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn terms(&self) -> u64 {
        self.terms
    }

    /// A conservative bound on the absolute rounding error of [`value`].
    ///
    /// [`value`]: CompensatedSum::value
    pub fn error_bound(&self) -> f64 {
        2.0 * f64::EPSILON * self.value().abs() + (self.terms as f64) * f64::EPSILON * f64::EPSILON * self.value().abs()
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// Unevaluated sum `hi + lo` carrying roughly 106 bits; used for prefix sums
/// whose differences must stay accurate after millions of terms.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn add_f64(self, v: f64) -> Self {
        let (s, e) = two_sum(self.hi, v);
        let (hi, lo) = two_sum(s, e + self.lo);
        Self { hi, lo }
    }

    /// `self - other`, rounded once to `f64`.
    #[inline]
    pub fn diff(self, other: Self) -> f64 {
        let (s, e) = two_sum(self.hi, -other.hi);
        s + (e + (self.lo - other.lo))
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Prefix sums `P[i] = w(x_0) + ... + w(x_{i-1})` in double-double precision.
pub fn prefix_sums(elements: &[u64], weight: impl Fn(u64) -> f64) -> Vec<DoubleDouble> {
    let mut out = Vec::with_capacity(elements.len() + 1);
    let mut acc = DoubleDouble::ZERO;
    out.push(acc);
    for &x in elements {
        acc = acc.add_f64(weight(x));
        out.push(acc);
    }
    out
}

const DIRECT_RUN: u64 = 1 << 16;
const ASYMPTOTIC_FROM: u64 = 1 << 10;

// psi(x) - ln x, asymptotic tail; truncation error below 1/(240 x^8).
fn digamma_tail(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    -0.5 * inv - inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)))
}

/// `sum_{x=a}^{b} 1/x` for `1 <= a <= b`.
///
/// Short runs are summed term by term with compensation. Long runs starting
/// at or above 1024 use `psi(b+1) - psi(a)` with the log difference taken
/// through `ln_1p`, which keeps the relative error near one ulp even for
/// runs of 10^12 terms.
pub fn harmonic_range(a: u64, b: u64) -> f64 {
    debug_assert!(a >= 1 && a <= b);
    if b - a < DIRECT_RUN {
        let mut s = CompensatedSum::new();
        for x in a..=b {
            s.add(1.0 / x as f64);
        }
        return s.value();
    }
    if a < ASYMPTOTIC_FROM {
        let mut s = CompensatedSum::new();
        for x in a..ASYMPTOTIC_FROM {
            s.add(1.0 / x as f64);
        }
        s.add(harmonic_range(ASYMPTOTIC_FROM, b));
        return s.value();
    }
    let af = a as f64;
    let bf = b as f64 + 1.0;
    let span = (b - a + 1) as f64;
    (span / af).ln_1p() + (digamma_tail(bf) - digamma_tail(af))
}

/// `base^exp` or `None` on `u64` overflow.
pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Largest `r` with `r^m <= x`, by integer binary search.
pub fn floor_root(x: u64, m: u32) -> u64 {
    assert!(m >= 1);
    if m == 1 || x < 2 {
        return x;
    }
    let (mut lo, mut hi) = (1u64, 1u64 << (64 / m + 1).min(63));
    // invariant: lo^m <= x < hi^m
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match checked_pow(mid, m) {
            Some(p) if p <= x => lo = mid,
            _ => hi = mid,
        }
    }
    lo
}

/// Smallest `r` with `r^m >= x`.
pub fn ceil_root(x: u64, m: u32) -> u64 {
    let r = floor_root(x, m);
    if checked_pow(r, m) == Some(x) {
        r
    } else {
        r + 1
    }
}

/// `ceil(a / b)` for `b > 0`.
#[inline]
pub fn div_ceil(a: u64, b: u64) -> u64 {
    a / b + u64::from(!a.is_multiple_of(b))
}
