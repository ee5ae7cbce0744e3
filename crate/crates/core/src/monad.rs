//! Harmonic measure on a window `[k, Nk]`, its ratio-cut quotient, and the
//! transformations that preserve it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{capacity, domain, validation, Error, Result};
use crate::intset::{classify, invert_intervals_with_margin, IntervalSet, Window};
use crate::numeric::{ceil_root, checked_pow, harmonic_range, CompensatedSum};

/// Ratio tolerance `rho = num/den >= 1`; `a ~ b` iff `max/min <= rho`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioCut {
    num: u64,
    den: u64,
}

impl RatioCut {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num < den {
            return Err(validation(format!("ratio cut {num}/{den} must be >= 1")));
        }
        Ok(Self { num, den })
    }

    pub fn integer(rho: u64) -> Result<Self> {
        Self::new(rho, 1)
    }

    pub fn rho(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// `rho^2`, the tolerance under which products of equivalent pairs stay
    /// equivalent.
    pub fn squared(&self) -> Result<Self> {
        let num = self.num.checked_mul(self.num).ok_or_else(|| capacity("rho^2 numerator overflows"))?;
        let den = self.den.checked_mul(self.den).ok_or_else(|| capacity("rho^2 denominator overflows"))?;
        Self::new(num, den)
    }

    /// Exact test `max(a,b) * den <= min(a,b) * num`.
    pub fn equivalent_wide(&self, a: u128, b: u128) -> bool {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        // products of u64 pairs with a u64 factor fit in 192 bits; split to stay in u128
        match (hi.checked_mul(self.den as u128), lo.checked_mul(self.num as u128)) {
            (Some(l), Some(r)) => l <= r,
            _ => (hi as f64) / (lo as f64) <= self.rho(),
        }
    }
}

impl fmt::Display for RatioCut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for RatioCut {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| validation(format!("bad ratio cut {s:?}: {e}")));
        match s.split_once('/') {
            Some((n, d)) => Self::new(parse(n)?, parse(d)?),
            None => Self::integer(parse(s)?),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowMeasureReport {
    pub window: Window,
    pub value: f64,
    pub error_bound: f64,
}

fn check_inside(w: &Window, set: &IntervalSet) -> Result<()> {
    match (set.min(), set.max()) {
        (Some(lo), Some(hi)) if lo < w.lo() || hi > w.hi() => Err(domain(format!(
            "set [{lo}, {hi}] leaves window [{}, {}]",
            w.lo(),
            w.hi()
        ))),
        _ => Ok(()),
    }
}

/// `sum_{x in S ∩ [lo, hi]} 1/x`, with an accumulated rounding bound.
fn harmonic_mass(set: &IntervalSet, lo: u64, hi: u64) -> (f64, f64) {
    let mut acc = CompensatedSum::new();
    let mut runs = 0u32;
    for &(a, b) in set.clip(lo, hi).components() {
        acc.add(harmonic_range(a, b));
        runs += 1;
    }
    let v = acc.value();
    (v, acc.error_bound() + 8.0 * f64::from(runs) * f64::EPSILON * v)
}

/// `nu_{k,N}(S) = sum_{a in S} 1/(a ln N)`.
pub fn nu(w: &Window, set: &IntervalSet) -> Result<WindowMeasureReport> {
    check_inside(w, set)?;
    let ln_n = w.ln_span();
    let (mass, err) = harmonic_mass(set, w.lo(), w.hi());
    Ok(WindowMeasureReport { window: *w, value: mass / ln_n, error_bound: err / ln_n + f64::EPSILON * mass / ln_n })
}

/// [`nu`] over an explicit element list (duplicates are counted once).
pub fn nu_elements(w: &Window, elements: &[u64]) -> Result<WindowMeasureReport> {
    let mut els = elements.to_vec();
    els.sort_unstable();
    els.dedup();
    nu(w, &IntervalSet::from_sorted_elements(&els)?)
}

fn require_in(w: &Window, x: u64, what: &str) -> Result<()> {
    if w.contains(x) {
        Ok(())
    } else {
        Err(domain(format!("{what}={x} outside window [{}, {}]", w.lo(), w.hi())))
    }
}

/// `(ln b - ln a) / ln N`.
pub fn interval_measure(w: &Window, a: u64, b: u64) -> Result<f64> {
    require_in(w, a, "a")?;
    require_in(w, b, "b")?;
    if a > b {
        return Err(domain("interval_measure needs a <= b"));
    }
    Ok(((b as f64) / (a as f64)).ln() / w.ln_span())
}

/// Log-length estimate `(1/ln N) sum (ln b_i - ln a_i)` for sets whose
/// components all have ratio at least 2.5.
pub fn big_estimate(w: &Window, set: &IntervalSet) -> Result<f64> {
    check_inside(w, set)?;
    if !classify(set, w.hi(), 2.5).big {
        return Err(domain("big_estimate needs components with b/a >= 2.5"));
    }
    let mut acc = CompensatedSum::new();
    for &(a, b) in set.components() {
        acc.add(((b as f64) / (a as f64)).ln());
    }
    Ok(acc.value() / w.ln_span())
}

/// Tolerance for `|big_estimate - nu|`: the per-component discretization
/// `ln a - ln(a-1)` scaled by `1/ln 2`, summed, plus summation slack.
pub fn big_estimate_tolerance(set: &IntervalSet) -> f64 {
    let max_gap = set
        .components()
        .iter()
        .map(|&(a, _)| if a > 1 { -(-1.0 / a as f64).ln_1p() } else { 1.0 })
        .fold(0.0, f64::max);
    max_gap / std::f64::consts::LN_2 + 1e-9
}

/// Coordinate `(ln a - ln k) / ln N` in `[0, 1]`.
pub fn phi(w: &Window, a: u64) -> Result<f64> {
    require_in(w, a, "a")?;
    Ok(((a as f64) / (w.k as f64)).ln() / w.ln_span())
}

/// The class of `a` clipped to the window:
/// `[max(k, ceil(a/rho)), min(Nk, floor(a*rho))]`.
pub fn monad_of(w: &Window, cut: &RatioCut, a: u64) -> Result<(u64, u64)> {
    require_in(w, a, "a")?;
    let (num, den, a) = (cut.num as u128, cut.den as u128, a as u128);
    let lo = (a * den).div_ceil(num);
    let hi = (a * num) / den;
    Ok((lo.max(w.lo() as u128) as u64, hi.min(w.hi() as u128) as u64))
}

pub fn equivalent(cut: &RatioCut, a: u64, b: u64) -> bool {
    cut.equivalent_wide(a as u128, b as u128)
}

/// Measure before and after an integer scaling `x -> s x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransportCheck {
    pub source: f64,
    pub image: f64,
    pub discrepancy: f64,
    pub tolerance: f64,
}

impl TransportCheck {
    pub fn within_tolerance(&self) -> bool {
        self.discrepancy <= self.tolerance
    }
}

/// Compares `nu_{k,N}(S)` with `nu_{sk,N}(sS)` where `sS` scales each
/// component endpoint.
pub fn scale_check(w: &Window, set: &IntervalSet, s: u64) -> Result<TransportCheck> {
    if s == 0 {
        return Err(validation("scale must be positive"));
    }
    check_inside(w, set)?;
    if !classify(set, w.hi(), 2.5).big {
        return Err(domain("scale_check needs big components"));
    }
    let image_window = Window::new(w.k.checked_mul(s).ok_or_else(|| capacity("s*k overflows"))?, w.span)?;
    let image_set = set.scale_components(s)?;
    let source = nu(w, set)?;
    let image = nu(&image_window, &image_set)?;
    let min_a = set.min().unwrap_or(1) as f64;
    let tolerance = 3.0 * set.components().len() as f64 / (min_a * w.ln_span()) + 1e-6;
    Ok(TransportCheck {
        source: source.value,
        image: image.value,
        discrepancy: (source.value - image.value).abs(),
        tolerance,
    })
}

pub use crate::intset::invert_point;

/// Compares `nu(S)` with `nu(S^{-1})` in the window `(1, N)`.
pub fn inversion_check(w: &Window, set: &IntervalSet, margin: u64) -> Result<TransportCheck> {
    if w.k != 1 {
        return Err(domain("inversion_check needs a window with k = 1"));
    }
    let n = w.span;
    let class = classify(set, n, 2.5);
    if !class.big || !class.separated {
        return Err(domain("inversion_check needs big, separated components"));
    }
    let inverted = invert_intervals_with_margin(set, n, margin)?;
    let source = nu(w, set)?;
    let image = nu(w, &inverted)?;
    let ln_n = w.ln_span();
    let mut tol = CompensatedSum::new();
    for &(a, b) in set.components() {
        let nf = n as f64;
        tol.add(((nf - a as f64) / nf).ln().abs() / ln_n);
        // floor(N/u) differs from N/u by < 1, shifting each endpoint's log by < 1/floor(N/b)
        tol.add(2.0 / ((n / b) as f64 * ln_n) + 2.0 / (a as f64 * ln_n));
    }
    tol.add(1e-4);
    Ok(TransportCheck {
        source: source.value,
        image: image.value,
        discrepancy: (source.value - image.value).abs(),
        tolerance: tol.value(),
    })
}

fn check_grid(cut: &RatioCut, r_grid: &[f64]) -> Result<()> {
    if r_grid.iter().any(|&r| !(r > cut.rho()) || !r.is_finite()) {
        return Err(validation("every grid ratio must exceed rho"));
    }
    Ok(())
}

/// For each `r`, the local measure of `X ∩ [x, floor(x r)]` normalized by
/// `ln r`.
pub fn density_plus(w: &Window, cut: &RatioCut, set: &IntervalSet, x: u64, r_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    require_in(w, x, "x")?;
    check_grid(cut, r_grid)?;
    r_grid
        .iter()
        .map(|&r| {
            let right = (x as f64 * r).floor();
            if right > w.hi() as f64 {
                return Err(domain(format!("x*r = {right} exceeds window end {}", w.hi())));
            }
            let (mass, _) = harmonic_mass(set, x, right as u64);
            Ok((r, mass / r.ln()))
        })
        .collect()
}

/// Mirror of [`density_plus`] over `X ∩ [floor(x/r), x]`.
pub fn density_minus(w: &Window, cut: &RatioCut, set: &IntervalSet, x: u64, r_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    require_in(w, x, "x")?;
    check_grid(cut, r_grid)?;
    r_grid
        .iter()
        .map(|&r| {
            let left = (x as f64 / r).floor() as u64;
            if left < w.lo() || left == 0 {
                return Err(domain(format!("x/r = {left} falls below window start {}", w.lo())));
            }
            let (mass, _) = harmonic_mass(set, left, x);
            Ok((r, mass / r.ln()))
        })
        .collect()
}

/// Finite density estimate: the minimum over the last `tail` grid entries.
pub fn density_estimate(local: &[(f64, f64)], tail: usize) -> Option<f64> {
    let from = local.len().saturating_sub(tail.max(1));
    local[from..].iter().map(|&(_, v)| v).reduce(f64::min)
}

/// End of the root window `(ceil(k^{1/m}) + Nroot)^m`.
pub fn root_window_end(nroot: u64, m: u32, k: u64) -> Result<u64> {
    let c = ceil_root(k, m).checked_add(nroot).ok_or_else(|| capacity("root window overflows"))?;
    checked_pow(c, m).ok_or_else(|| capacity("root window overflows u64"))
}

fn root_weight(m: u32, x: u64) -> f64 {
    match m {
        1 => 1.0,
        2 => 1.0 / (x as f64).sqrt(),
        _ => (x as f64).powf(-((m - 1) as f64) / m as f64),
    }
}

/// `(1/(m Nroot)) sum_{a in S} a^{-(m-1)/m}` for `S` inside
/// `[k, (ceil(k^{1/m}) + Nroot)^m]`.
pub fn nu_m(nroot: u64, m: u32, elements: &[u64], k: u64) -> Result<f64> {
    if m == 0 || nroot == 0 || k == 0 {
        return Err(validation("nu_m needs m, Nroot, k >= 1"));
    }
    let end = root_window_end(nroot, m, k)?;
    let mut acc = CompensatedSum::new();
    for &a in elements {
        if a < k || a > end {
            return Err(domain(format!("element {a} outside root window [{k}, {end}]")));
        }
        acc.add(root_weight(m, a));
    }
    Ok(acc.value() / (m as f64 * nroot as f64))
}

/// [`nu_m`] over the union of intervals, streamed without materializing.
pub fn nu_m_intervals(nroot: u64, m: u32, set: &IntervalSet, k: u64) -> Result<f64> {
    if m == 0 || nroot == 0 || k == 0 {
        return Err(validation("nu_m needs m, Nroot, k >= 1"));
    }
    let end = root_window_end(nroot, m, k)?;
    if set.min().is_some_and(|lo| lo < k) || set.max().is_some_and(|hi| hi > end) {
        return Err(domain(format!("set outside root window [{k}, {end}]")));
    }
    let mut acc = CompensatedSum::new();
    for x in set.iter() {
        acc.add(root_weight(m, x));
    }
    Ok(acc.value() / (m as f64 * nroot as f64))
}

/// Interval form `(b^{1/m} - a^{1/m}) / Nroot`.
pub fn root_interval_measure(nroot: u64, m: u32, a: u64, b: u64) -> f64 {
    let inv = 1.0 / m as f64;
    ((b as f64).powf(inv) - (a as f64).powf(inv)) / nroot as f64
}

/// `(ceil(a^{1/m}) + c)^m`.
pub fn root_shift(a: u64, c: u64, m: u32) -> Result<u64> {
    if m == 0 {
        return Err(validation("root_shift needs m >= 1"));
    }
    let base = ceil_root(a, m).checked_add(c).ok_or_else(|| capacity("root_shift overflows"))?;
    checked_pow(base, m).ok_or_else(|| capacity("root_shift overflows u64"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn win(k: u64, n: u64) -> Window {
        Window::new(k, n).unwrap()
    }

    fn iv(parts: &[(u64, u64)]) -> IntervalSet {
        IntervalSet::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn nu_examples() {
        let w = win(1000, 1_000_000);
        let full = nu(&w, &iv(&[(w.lo(), w.hi())])).unwrap();
        assert!(full.value >= 1.0 && full.value <= 1.0 + 5.0 / w.ln_span());
        assert_eq!(nu(&w, &IntervalSet::empty()).unwrap().value, 0.0);
        let w = win(1, 1_000_000);
        let v = nu(&w, &iv(&[(10, 100)])).unwrap();
        let direct: f64 = (10..=100).map(|x| 1.0 / x as f64).sum::<f64>() / w.ln_span();
        assert!((v.value - direct).abs() < 1e-14);
        assert!((v.value - 0.170_707_354_880_330_8).abs() < 1e-12);
        assert!(v.error_bound >= 0.0 && v.error_bound < 1e-12);
        assert!(nu(&w, &iv(&[(10, 2_000_000)])).is_err());
        assert!(nu_elements(&w, &[10, 10, 20]).unwrap().value > 0.0);
    }

    #[test]
    fn interval_measure_examples() {
        let w = win(1000, 1_000_000_000_000);
        assert!((interval_measure(&w, 1000, 1_000_000_000).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(interval_measure(&w, 5000, 5000).unwrap(), 0.0);
        let w = win(1, 1_000_000);
        assert!((interval_measure(&w, 10, 100).unwrap() - 1.0 / 6.0).abs() < 1e-12);
        assert!(interval_measure(&w, 10, 2_000_000).is_err());
    }

    #[test]
    fn big_estimate_examples() {
        let w = win(1, 1_000_000_000_000);
        let s = iv(&[(1000, 10_000)]);
        let b = big_estimate(&w, &s).unwrap();
        assert!((b - 1.0 / 12.0).abs() < 1e-12);
        assert!((b - nu(&w, &s).unwrap().value).abs() < 1e-4);
        let s2 = iv(&[(100, 1000), (100_000, 1_000_000)]);
        assert!((big_estimate(&w, &s2).unwrap() - 1.0 / 6.0).abs() < 1e-12);
        let w = win(7, 1000);
        assert!((big_estimate(&w, &iv(&[(7, 7000)])).unwrap() - 1.0).abs() < 1e-12);
        assert!(big_estimate(&w, &iv(&[(10, 20)])).is_err());
    }

    #[test]
    fn phi_and_monads() {
        let w = win(1, 1_000_000);
        assert_eq!(phi(&w, 1).unwrap(), 0.0);
        assert!((phi(&w, 1_000_000).unwrap() - 1.0).abs() < 1e-15);
        assert!((phi(&w, 1000).unwrap() - 0.5).abs() < 1e-12);
        let ten = RatioCut::integer(10).unwrap();
        assert_eq!(monad_of(&win(1, 1_000_000_000_000), &ten, 10_000).unwrap(), (1000, 100_000));
        assert_eq!(monad_of(&w, &RatioCut::integer(1).unwrap(), 777).unwrap(), (777, 777));
        assert_eq!(monad_of(&w, &ten, 2).unwrap(), (1, 20));
        assert!(equivalent(&ten, 50, 400));
        assert!(!equivalent(&ten, 50, 5000));
        assert!(equivalent(&ten, 31, 31));
        assert_eq!("3/2".parse::<RatioCut>().unwrap().rho(), 1.5);
        assert!("1/2".parse::<RatioCut>().is_err());
    }

    #[test]
    fn scale_examples() {
        let w = win(1, 1_000_000_000_000);
        let c = scale_check(&w, &iv(&[(1000, 1_000_000)]), 1000).unwrap();
        assert!((c.source - 0.25).abs() < 1e-3 && c.discrepancy < 1e-4);
        let c = scale_check(&w, &iv(&[(1000, 1_000_000)]), 1).unwrap();
        assert_eq!(c.discrepancy, 0.0);
        let c = scale_check(&win(1, 1_000_000), &iv(&[(10, 1000)]), 7).unwrap();
        assert!((c.discrepancy - 0.003_192_146_243_144_844).abs() < 1e-12);
        assert!(c.within_tolerance());
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(invert_point(100, 7), 14);
        assert_eq!(invert_point(100, 14), 7);
        assert_eq!(invert_point(12345, 1), 12345);
        let w = win(1, 1_000_000_000_000);
        let c = inversion_check(&w, &iv(&[(1000, 10_000)]), 1000).unwrap();
        assert!((c.source - 1.0 / 12.0).abs() < 1e-3 && c.discrepancy < 1e-4);
        let c = inversion_check(&w, &iv(&[(10_000, 25_000)]), 1000).unwrap();
        assert!(c.discrepancy < 1e-3);
        // mirrored blocks map onto each other under exact division
        let pair = iv(&[(1000, 10_000), (100_000_000, 1_000_000_000)]);
        let c = inversion_check(&w, &pair, 1000).unwrap();
        assert_eq!(c.source, c.image);
        assert!(inversion_check(&win(2, 1000), &pair, 1000).is_err());
    }

    #[test]
    fn density_examples() {
        let w = win(1, 1_000_000_000_000);
        let rho = RatioCut::integer(10).unwrap();
        let full = iv(&[(1, w.hi())]);
        for (_, v) in density_plus(&w, &rho, &full, 1_000_000, &[100.0, 1000.0]).unwrap() {
            assert!((v - 1.0).abs() < 1e-4);
        }
        let half = iv(&[(1, 1_000_000)]);
        let inside = density_plus(&w, &rho, &half, 1000, &[100.0]).unwrap();
        assert!((inside[0].1 - 1.0).abs() < 1e-2);
        let edge = density_plus(&w, &rho, &half, 1_000_000, &[100.0]).unwrap();
        assert!(edge[0].1 < 1e-3);
        let left = density_minus(&w, &rho, &half, 1_000_000, &[100.0]).unwrap();
        assert!((left[0].1 - 1.0).abs() < 1e-4);
        assert!(density_plus(&w, &rho, &half, 1000, &[5.0]).is_err());
        assert!(density_plus(&w, &rho, &half, w.hi(), &[100.0]).is_err());
        assert_eq!(density_estimate(&[(20.0, 0.5), (50.0, 0.9), (100.0, 0.8)], 2), Some(0.8));
    }

    #[test]
    fn root_examples() {
        assert_eq!(root_shift(100, 5, 2).unwrap(), 225);
        assert_eq!(root_shift(101, 0, 2).unwrap(), 121);
        assert_eq!(root_shift(8, 1, 3).unwrap(), 27);
        assert!(root_shift(u64::MAX, 1, 2).is_err());
        let s = iv(&[(10_000, 1_000_000)]);
        let v = nu_m_intervals(1000, 2, &s, 10_000).unwrap();
        assert!((v - 0.9).abs() < 1e-3);
        assert_eq!(nu_m(1000, 2, &[], 10_000).unwrap(), 0.0);
        // m = 1 is a plain count over the length
        let els = [5u64, 6, 9, 30];
        assert_eq!(nu_m(40, 1, &els, 5).unwrap(), 4.0 / 40.0);
        assert!(nu_m(10, 2, &[1000], 4).is_err());
    }

    proptest! {
        #[test]
        fn phi_orders_classes(a in 1u64..1_000_000, b in 1u64..1_000_000, rho in 1u64..50) {
            let w = win(1, 1_000_000);
            let cut = RatioCut::integer(rho).unwrap();
            let (pa, pb) = (phi(&w, a).unwrap(), phi(&w, b).unwrap());
            if a < b && !equivalent(&cut, a, b) {
                prop_assert!(pa < pb);
            }
            if equivalent(&cut, a, b) {
                prop_assert!((pa - pb).abs() <= (rho as f64).ln() / w.ln_span() + 1e-15);
            }
        }

        #[test]
        fn monad_is_an_interval_of_equivalents(a in 1u64..100_000, num in 1u64..40, den in 1u64..8) {
            prop_assume!(num >= den);
            let w = win(1, 100_000);
            let cut = RatioCut::new(num, den).unwrap();
            let (lo, hi) = monad_of(&w, &cut, a).unwrap();
            prop_assert!(lo <= a && a <= hi);
            for x in [lo, hi, (lo + hi) / 2] {
                prop_assert!(equivalent(&cut, a, x));
            }
            if lo > 1 { prop_assert!(!equivalent(&cut, a, lo - 1)); }
            if hi < w.hi() { prop_assert!(!equivalent(&cut, a, hi + 1)); }
        }

        #[test]
        fn products_respect_squared_cut(a in 1u64..1u64 << 31, b in 1u64..1u64 << 31, x in 0u64..1000, y in 0u64..1000, rho in 2u64..20) {
            let cut = RatioCut::integer(rho).unwrap();
            let a2 = a + x * a / 1000;
            let b2 = b.saturating_sub(y * b / 1000).max(1);
            if equivalent(&cut, a, a2) && equivalent(&cut, b, b2) {
                prop_assert!(cut.squared().unwrap().equivalent_wide(a as u128 * b as u128, a2 as u128 * b2 as u128));
            }
        }

        #[test]
        fn nu_is_additive(a in 1u64..10_000, l1 in 0u64..5000, gap in 1u64..5000, l2 in 0u64..5000) {
            let w = win(1, 1_000_000);
            let s1 = iv(&[(a, a + l1)]);
            let s2 = iv(&[(a + l1 + gap + 1, a + l1 + gap + 1 + l2)]);
            let both = iv(&[(a, a + l1), (a + l1 + gap + 1, a + l1 + gap + 1 + l2)]);
            let (r1, r2, r) = (nu(&w, &s1).unwrap(), nu(&w, &s2).unwrap(), nu(&w, &both).unwrap());
            prop_assert!((r1.value + r2.value - r.value).abs() <= r1.error_bound + r2.error_bound + r.error_bound + 4.0 * f64::EPSILON);
        }

        #[test]
        fn root_shift_preserves_measure(a in 1u64..5000, len in 1u64..5000, c in 0u64..200, m in 1u32..4) {
            let b = a + len;
            let nroot = 1000u64;
            let k = a;
            let (sa, sb) = (root_shift(a, c, m).unwrap(), root_shift(b, c, m).unwrap());
        prop_assume!(b <= root_window_end(nroot, m, a).unwrap() && sb <= root_window_end(nroot, m, sa).unwrap());
            let src = nu_m_intervals(nroot, m, &iv(&[(a, b)]), k).unwrap();
            let img = nu_m_intervals(nroot, m, &iv(&[(sa, sb)]), sa).unwrap();
            let tol = (4.0 / (a as f64).powf(1.0 / m as f64) + 4.0 / m as f64) / nroot as f64;
            prop_assert!((src - img).abs() <= tol, "{src} vs {img}");
        }
    }
}
