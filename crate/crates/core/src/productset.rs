//! Windowed product sets `A·B` and multiplicative gap witnesses.
//!
//! A gap witness for `n` is a start `x` such that every `[u, m u]` inside
//! `[x, n x]` (with `u` up to the last product) meets `A·B`; `m` is the
//! largest ceiling ratio between consecutive products, with `x` itself
//! prepended as the first reference point.

use serde::{Deserialize, Serialize};

use crate::density::geometric_grid;
use crate::error::{capacity, domain, validation, Result};
use crate::intset::{materialize, SetSpec, HORIZON_CAP};
use crate::numeric::div_ceil;
use crate::progressions::Lookup;

fn for_each_member(lookup: &Lookup, lo: u64, hi: u64, mut f: impl FnMut(u64)) {
    if lo > hi {
        return;
    }
    match lookup {
        Lookup::Full => (lo..=hi).for_each(f),
        Lookup::Even => (lo + lo % 2..=hi).step_by(2).for_each(f),
        Lookup::Intervals(s) => s.clip(lo, hi).iter().for_each(f),
        Lookup::Sorted(v) => {
            let start = v.partition_point(|&y| y < lo);
            v[start..].iter().take_while(|&&y| y <= hi).for_each(|&y| f(y));
        }
    }
}

/// Sorted distinct `{a b : a ∈ A, b ∈ B, lo <= a b <= hi}`.
pub fn products_in(a_spec: &SetSpec, b_spec: &SetSpec, lo: u64, hi: u64) -> Result<Vec<u64>> {
    if lo == 0 || lo > hi {
        return Err(validation(format!("need 1 <= lo <= hi, got [{lo}, {hi}]")));
    }
    if hi > HORIZON_CAP {
        return Err(capacity(format!("product window end {hi} exceeds {HORIZON_CAP}")));
    }
    let b_min = b_spec.visit_first(1, hi)?;
    let Some(b_min) = b_min else { return Ok(Vec::new()) };
    let a_lookup = Lookup::new(a_spec, hi / b_min)?;
    let b_lookup = Lookup::new(b_spec, hi)?;
    let mut out = Vec::new();
    for_each_member(&a_lookup, 1, hi / b_min, |a| {
        for_each_member(&b_lookup, div_ceil(lo, a), hi / a, |b| out.push(a * b));
    });
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `max_i ceil(c_{i+1} / c_i)`; 1 for a single entry.
pub fn max_gap_ratio(sorted: &[u64]) -> Result<u64> {
    if sorted.is_empty() {
        return Err(domain("max_gap_ratio of an empty list"));
    }
    if sorted[0] == 0 || sorted.windows(2).any(|w| w[0] >= w[1]) {
        return Err(validation("list must be positive and strictly increasing"));
    }
    Ok(sorted.windows(2).map(|w| div_ceil(w[1], w[0])).max().unwrap_or(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    pub n: u64,
    pub x: u64,
    pub m: u64,
    pub products_examined: u64,
    pub window: (u64, u64),
}

/// Membership bitmap of `A·B ∩ [1, H]`.
#[derive(Debug, Clone)]
pub struct ProductIndex {
    words: Vec<u64>,
    horizon: u64,
    exact_scan: bool,
}

impl ProductIndex {
    pub fn new(a_spec: &SetSpec, b_spec: &SetSpec, horizon: u64) -> Result<Self> {
        if horizon > HORIZON_CAP {
            return Err(capacity(format!("horizon {horizon} exceeds {HORIZON_CAP}")));
        }
        let mut words = vec![0u64; (horizon as usize >> 6) + 1];
        let b_els = materialize(b_spec, 1, horizon.max(1))?;
        if let Some(&b_min) = b_els.first() {
            a_spec.for_each_in(1, horizon / b_min, |a| {
                let limit = horizon / a;
                for &b in b_els.iter().take_while(|&&b| b <= limit) {
                    let p = (a * b) as usize;
                    words[p >> 6] |= 1 << (p & 63);
                }
            })?;
        }
        let exact_scan = matches!(a_spec, SetSpec::Explicit(_)) || matches!(b_spec, SetSpec::Explicit(_));
        Ok(Self { words, horizon, exact_scan })
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn contains(&self, p: u64) -> bool {
        p <= self.horizon && self.words[(p >> 6) as usize] >> (p & 63) & 1 == 1
    }

    /// Smallest product in `[from, to]`.
    pub fn next_product(&self, from: u64, to: u64) -> Option<u64> {
        let to = to.min(self.horizon);
        if from > to {
            return None;
        }
        let mut w = (from >> 6) as usize;
        let mut bits = self.words[w] & (!0u64 << (from & 63));
        let last = (to >> 6) as usize;
        loop {
            if bits != 0 {
                let p = ((w as u64) << 6) + u64::from(bits.trailing_zeros());
                return (p <= to).then_some(p);
            }
            w += 1;
            if w > last {
                return None;
            }
            bits = self.words[w];
        }
    }

    /// `(m, product count)` for the window `[x, n x]`, or `None` if the
    /// window holds no product. Once `m` reaches `stop_at` the scan ends
    /// early and the count is partial.
    pub fn gap_ratio_at(&self, x: u64, n: u64, stop_at: Option<u64>) -> Option<(u64, u64)> {
        let hi = x.checked_mul(n)?.min(self.horizon);
        let mut prev = x;
        let mut m = 1u64;
        let mut count = 0u64;
        let mut from = x;
        while let Some(c) = self.next_product(from, hi) {
            count += 1;
            m = m.max(div_ceil(c, prev));
            if stop_at.is_some_and(|s| m >= s) {
                return Some((m, count));
            }
            prev = c;
            from = c + 1;
        }
        (count > 0).then_some((m, count))
    }

    /// Candidate starts: every `x <= H/n` for explicit inputs, otherwise
    /// the geometric grid with the given ratio.
    pub fn candidates(&self, n: u64, grid_ratio: f64) -> Vec<u64> {
        let top = self.horizon / n;
        if top == 0 {
            Vec::new()
        } else if self.exact_scan {
            (1..=top).collect()
        } else {
            geometric_grid(1, top, grid_ratio)
        }
    }

    /// Report minimizing `m`, ties to the smallest `x`.
    pub fn gap_witness(&self, n: u64, grid_ratio: f64) -> Result<Option<GapReport>> {
        if n < 2 {
            return Err(validation("gap_witness needs n >= 2"));
        }
        if !(grid_ratio > 1.0) {
            return Err(validation("grid ratio must exceed 1"));
        }
        let mut best: Option<(u64, u64)> = None;
        for x in self.candidates(n, grid_ratio) {
            // a later x only wins with a strictly smaller m
            let stop = best.map(|(m, _)| m);
            if stop == Some(1) {
                break;
            }
            if let Some((m, _)) = self.gap_ratio_at(x, n, stop) {
                if stop.is_none_or(|s| m < s) {
                    best = Some((m, x));
                }
            }
        }
        Ok(best.map(|(m, x)| {
            let (_, count) = self.gap_ratio_at(x, n, None).expect("winning window holds products");
            GapReport { n, x, m, products_examined: count, window: (x, x * n) }
        }))
    }
}

pub const DEFAULT_GRID_RATIO: f64 = 1.1;

pub fn gap_witness(a_spec: &SetSpec, b_spec: &SetSpec, n: u64, horizon: u64) -> Result<Option<GapReport>> {
    if n < 2 || n > horizon {
        return Err(validation(format!("need 2 <= n <= horizon, got n={n}")));
    }
    ProductIndex::new(a_spec, b_spec, horizon)?.gap_witness(n, DEFAULT_GRID_RATIO)
}

/// Re-derives a report from scratch: recomputes the products with
/// [`products_in`], checks the reported `m` and count, and checks that
/// `[u, m u]` meets a product for every integer `u` from `x` up to the last
/// product with `m u <= n x`.
pub fn verify_gap_report(a_spec: &SetSpec, b_spec: &SetSpec, report: &GapReport) -> Result<bool> {
    let (lo, hi) = report.window;
    if lo != report.x || hi != report.x * report.n {
        return Ok(false);
    }
    let products = products_in(a_spec, b_spec, lo, hi)?;
    let Some(&last) = products.last() else { return Ok(false) };
    let mut chain = Vec::with_capacity(products.len() + 1);
    if products[0] != lo {
        chain.push(lo);
    }
    chain.extend_from_slice(&products);
    if max_gap_ratio(&chain)? != report.m || products.len() as u64 != report.products_examined {
        return Ok(false);
    }
    let mut idx = 0usize;
    let u_end = last.min(hi / report.m);
    for u in lo..=u_end {
        while products[idx] < u {
            idx += 1;
        }
        if products[idx] > report.m * u {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_products(a: &[u64], b: &[u64], lo: u64, hi: u64) -> Vec<u64> {
        let mut out: Vec<u64> = a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).filter(|&p| p >= lo && p <= hi).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    #[test]
    fn products_examples() {
        let a = SetSpec::Explicit(vec![2, 3]);
        let b = SetSpec::Explicit(vec![5, 7]);
        assert_eq!(products_in(&a, &b, 1, 100).unwrap(), vec![10, 14, 15, 21]);
        assert_eq!(products_in(&SetSpec::Full, &SetSpec::Full, 10, 20).unwrap(), (10..=20).collect::<Vec<_>>());
        let two = SetSpec::Explicit(vec![2]);
        assert!(products_in(&two, &two, 5, 100).unwrap().is_empty());
        assert!(products_in(&two, &two, 5, 2_000_000_000).is_err());
    }

    #[test]
    fn gap_ratio_examples() {
        assert_eq!(max_gap_ratio(&[10, 14, 15, 21]).unwrap(), 2);
        assert_eq!(max_gap_ratio(&[5]).unwrap(), 1);
        assert_eq!(max_gap_ratio(&[3, 9, 10]).unwrap(), 3);
        assert!(max_gap_ratio(&[]).is_err());
    }

    #[test]
    fn witness_examples() {
        let r = gap_witness(&SetSpec::Full, &SetSpec::Full, 16, 1_000_000).unwrap().unwrap();
        assert_eq!(r.m, 2);
        assert!(verify_gap_report(&SetSpec::Full, &SetSpec::Full, &r).unwrap());
        let r = gap_witness(&SetSpec::Squarefree, &SetSpec::Squarefree, 16, 1_000_000).unwrap().unwrap();
        assert_eq!(r.m, 2);
        assert!(verify_gap_report(&SetSpec::Squarefree, &SetSpec::Squarefree, &r).unwrap());
        let ten = SetSpec::Explicit(vec![10]);
        let r = gap_witness(&ten, &ten, 4, 10_000).unwrap().unwrap();
        assert_eq!((r.m, r.x, r.window, r.products_examined), (1, 100, (100, 400), 1));
        assert!(verify_gap_report(&ten, &ten, &r).unwrap());
        assert_eq!(gap_witness(&SetSpec::empty(), &SetSpec::Full, 4, 1000).unwrap(), None);
    }

    #[test]
    fn tampered_report_fails_verification() {
        let ten = SetSpec::Explicit(vec![10]);
        let r = GapReport { n: 4, x: 60, m: 1, products_examined: 1, window: (60, 240) };
        assert!(!verify_gap_report(&ten, &ten, &r).unwrap());
    }

    proptest! {
        #[test]
        fn products_match_double_loop(a in proptest::collection::btree_set(1u64..2000, 0..80), b in proptest::collection::btree_set(1u64..2000, 0..80), lo in 1u64..5000, len in 0u64..200_000) {
            let (a, b): (Vec<u64>, Vec<u64>) = (a.into_iter().collect(), b.into_iter().collect());
            let got = products_in(&SetSpec::Explicit(a.clone()), &SetSpec::Explicit(b.clone()), lo, lo + len).unwrap();
            prop_assert_eq!(got, brute_products(&a, &b, lo, lo + len));
        }

        #[test]
        fn gap_ratio_grows_with_n(a in proptest::collection::btree_set(1u64..300, 1..30), x in 1u64..500, n in 2u64..20, extra in 1u64..20) {
            let spec = SetSpec::Explicit(a.into_iter().collect());
            let idx = ProductIndex::new(&spec, &spec, 20_000).unwrap();
            if let Some((m, _)) = idx.gap_ratio_at(x, n, None) {
                let (m2, _) = idx.gap_ratio_at(x, n + extra, None).unwrap();
                prop_assert!(m2 >= m);
            }
        }

        #[test]
        fn explicit_reports_are_sound(a in proptest::collection::btree_set(1u64..200, 1..25), n in 2u64..12) {
            let spec = SetSpec::Explicit(a.into_iter().collect());
            if let Some(r) = gap_witness(&spec, &spec, n, 5000).unwrap() {
                prop_assert!(verify_gap_report(&spec, &spec, &r).unwrap());
            }
        }
    }
}
