//! Finite-horizon density functionals.
//!
//! Counting and logarithmic densities are reported as checkpoint profiles.
//! The Banach-type functionals maximize a window statistic over every window
//! start that fits below the horizon; the maximization enumerates exactly the
//! starts where the window content changes, so the truncated supremum is
//! exact rather than sampled.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, validation, Result};
use crate::intset::{materialize, SetSpec};
use crate::numeric::{checked_pow, floor_root, prefix_sums, CompensatedSum, DoubleDouble};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Functional {
    UpperCount,
    LowerCount,
    UpperLog,
    LowerLog,
    Banach,
    BanachLog,
    BdM,
}

impl Functional {
    pub fn name(self) -> &'static str {
        match self {
            Functional::UpperCount => "upper_count",
            Functional::LowerCount => "lower_count",
            Functional::UpperLog => "upper_log",
            Functional::LowerLog => "lower_log",
            Functional::Banach => "banach",
            Functional::BanachLog => "banach_log",
            Functional::BdM => "bd_m",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub n: u64,
    pub value: f64,
    /// Maximizing window start, for the Banach-type functionals.
    pub k_star: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub functional: Functional,
    pub checkpoints: Vec<Checkpoint>,
    pub horizon: u64,
    pub m: Option<u32>,
}

impl DensityProfile {
    pub fn final_value(&self) -> Option<f64> {
        self.checkpoints.last().map(|c| c.value)
    }

    /// Minimum over checkpoints with `n >= from`.
    pub fn tail_min(&self, from: u64) -> Option<f64> {
        self.checkpoints.iter().filter(|c| c.n >= from).map(|c| c.value).reduce(f64::min)
    }

    /// Maximum over checkpoints with `n >= from`.
    pub fn tail_max(&self, from: u64) -> Option<f64> {
        self.checkpoints.iter().filter(|c| c.n >= from).map(|c| c.value).reduce(f64::max)
    }

    pub fn running_min(&self) -> Option<f64> {
        self.tail_min(0)
    }

    pub fn running_max(&self) -> Option<f64> {
        self.tail_max(0)
    }

    /// Running extremum profile: at each checkpoint, the max (upper kinds)
    /// or min (lower kinds) of the values seen so far.
    pub fn running(&self) -> Vec<Checkpoint> {
        let upper = matches!(self.functional, Functional::UpperCount | Functional::UpperLog);
        let mut acc: Option<f64> = None;
        self.checkpoints
            .iter()
            .map(|c| {
                let v = match acc {
                    None => c.value,
                    Some(a) if upper => a.max(c.value),
                    Some(a) => a.min(c.value),
                };
                acc = Some(v);
                Checkpoint { value: v, ..*c }
            })
            .collect()
    }
}

/// Powers of two from 2 up to `horizon`, followed by `horizon` itself.
pub fn default_checkpoints(horizon: u64) -> Vec<u64> {
    let mut out: Vec<u64> = std::iter::successors(Some(2u64), |&p| p.checked_mul(2)).take_while(|&p| p <= horizon).collect();
    if out.last() != Some(&horizon) && horizon >= 2 {
        out.push(horizon);
    }
    out
}

/// Geometric grid `round(lo * ratio^i)` up to `hi`, deduplicated, with `hi`
/// appended.
pub fn geometric_grid(lo: u64, hi: u64, ratio: f64) -> Vec<u64> {
    let mut out = Vec::new();
    if lo > hi {
        return out;
    }
    let mut t = lo as f64;
    loop {
        let v = t.round() as u64;
        if v > hi {
            break;
        }
        if out.last() != Some(&v) {
            out.push(v);
        }
        t *= ratio;
    }
    if out.last() != Some(&hi) {
        out.push(hi);
    }
    out
}

/// The default grid for the infimum over `n`: `2, 3, 4, 6, 8, 11, 16, ...`.
pub fn default_n_grid(n_max: u64) -> Vec<u64> {
    geometric_grid(2, n_max, std::f64::consts::SQRT_2)
}

fn sorted_checkpoints(checkpoints: &[u64], horizon: u64, min_n: u64) -> Result<Vec<u64>> {
    let mut cps = checkpoints.to_vec();
    cps.sort_unstable();
    cps.dedup();
    if let Some(&first) = cps.first() {
        if first < min_n {
            return Err(validation(format!("checkpoints must be >= {min_n}")));
        }
    }
    if cps.last().is_some_and(|&l| l > horizon) {
        return Err(validation("checkpoint beyond horizon"));
    }
    Ok(cps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountKind {
    Upper,
    Lower,
}

/// `|A ∩ [1,n]| / n` at each checkpoint.
pub fn counting_profile(spec: &SetSpec, kind: CountKind, horizon: u64, checkpoints: &[u64]) -> Result<DensityProfile> {
    let cps = sorted_checkpoints(checkpoints, horizon, 1)?;
    let mut out = Vec::with_capacity(cps.len());
    let mut count: u64 = 0;
    let mut next = 0usize;
    let last = cps.last().copied().unwrap_or(0);
    let flush = |upto: u64, count: u64, out: &mut Vec<Checkpoint>, next: &mut usize| {
        while *next < cps.len() && cps[*next] < upto {
            let n = cps[*next];
            out.push(Checkpoint { n, value: count as f64 / n as f64, k_star: None });
            *next += 1;
        }
    };
    spec.for_each_in(1, last, |x| {
        flush(x, count, &mut out, &mut next);
        count += 1;
    })?;
    flush(u64::MAX, count, &mut out, &mut next);
    let functional = match kind {
        CountKind::Upper => Functional::UpperCount,
        CountKind::Lower => Functional::LowerCount,
    };
    Ok(DensityProfile { functional, checkpoints: out, horizon, m: None })
}

/// `f_A(n) / ln n` with `f_A(n) = sum_{x in A, x <= n} 1/x`, accumulated in
/// increasing `x` with compensation.
pub fn log_profile(spec: &SetSpec, horizon: u64, checkpoints: &[u64]) -> Result<DensityProfile> {
    log_profile_kind(spec, CountKind::Upper, horizon, checkpoints)
}

pub fn log_profile_kind(spec: &SetSpec, kind: CountKind, horizon: u64, checkpoints: &[u64]) -> Result<DensityProfile> {
    let cps = sorted_checkpoints(checkpoints, horizon, 2)?;
    let mut out = Vec::with_capacity(cps.len());
    let mut sum = CompensatedSum::new();
    let mut next = 0usize;
    let last = cps.last().copied().unwrap_or(0);
    let flush = |upto: u64, s: f64, out: &mut Vec<Checkpoint>, next: &mut usize| {
        while *next < cps.len() && cps[*next] < upto {
            let n = cps[*next];
            out.push(Checkpoint { n, value: s / (n as f64).ln(), k_star: None });
            *next += 1;
        }
    };
    spec.for_each_in(1, last, |x| {
        flush(x, sum.value(), &mut out, &mut next);
        sum.add(1.0 / x as f64);
    })?;
    flush(u64::MAX, sum.value(), &mut out, &mut next);
    let functional = match kind {
        CountKind::Upper => Functional::UpperLog,
        CountKind::Lower => Functional::LowerLog,
    };
    Ok(DensityProfile { functional, checkpoints: out, horizon, m: None })
}

/// Lower and upper counting and logarithmic densities at one horizon.
///
/// Counting bounds are running extrema over all checkpoints; logarithmic
/// bounds are extrema over the tail `n >= horizon / 4`, where the `1/ln n`
/// bias of the harmonic normalization has settled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityChain {
    pub counting_lower: f64,
    pub log_lower: f64,
    pub log_upper: f64,
    pub counting_upper: f64,
}

impl DensityChain {
    pub fn compute(spec: &SetSpec, horizon: u64) -> Result<Self> {
        let cps = default_checkpoints(horizon);
        let count = counting_profile(spec, CountKind::Upper, horizon, &cps)?;
        let log = log_profile(spec, horizon, &cps)?;
        let tail = horizon / 4;
        Ok(Self {
            counting_lower: count.running_min().unwrap_or(0.0),
            log_lower: log.tail_min(tail).unwrap_or(0.0),
            log_upper: log.tail_max(tail).unwrap_or(0.0),
            counting_upper: count.running_max().unwrap_or(0.0),
        })
    }

    /// `ld <= lld <= uld <= ud` with additive slacks on each link.
    pub fn holds(&self, slack: f64) -> bool {
        self.counting_lower <= self.log_lower + slack
            && self.log_lower <= self.log_upper
            && self.log_upper <= self.counting_upper + slack
    }
}

/// Maximum of a window statistic and the smallest start attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSup {
    pub value: f64,
    pub k_star: u64,
}

/// `A ∩ [1, H]` with double-double prefix sums of reciprocals.
#[derive(Debug, Clone)]
pub struct ReciprocalIndex {
    elements: Vec<u64>,
    prefix: Vec<DoubleDouble>,
    horizon: u64,
}

impl ReciprocalIndex {
    pub fn new(spec: &SetSpec, horizon: u64) -> Result<Self> {
        if horizon < 2 {
            return Err(validation("horizon must be at least 2"));
        }
        let elements = materialize(spec, 1, horizon)?;
        Ok(Self::from_elements(elements, horizon))
    }

    pub fn from_elements(mut elements: Vec<u64>, horizon: u64) -> Self {
        elements.retain(|&x| x >= 1 && x <= horizon);
        let prefix = prefix_sums(&elements, |x| 1.0 / x as f64);
        Self { elements, prefix, horizon }
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// `sum_{x in A ∩ [lo, hi)} 1/x` via the prefix table.
    pub fn window_sum(&self, lo: u64, hi_excl: u64) -> f64 {
        let i = self.elements.partition_point(|&x| x < lo);
        let j = self.elements.partition_point(|&x| x < hi_excl);
        if j <= i {
            return 0.0;
        }
        self.prefix[j].diff(self.prefix[i])
    }

    /// `g_H(n) = max_{k : k n <= H+1} sum_{x in A ∩ [k, kn)} 1/x`.
    ///
    /// The content of `[k, kn)` only grows when `kn` passes an element `a`,
    /// i.e. at `k = floor(a/n) + 1`; between such points elements can only
    /// leave. Scanning those starts (plus `k = 1`) with two monotone cursors
    /// makes the sup exact in `O(|A|)`.
    pub fn banach_window_sup(&self, n: u64) -> WindowSup {
        assert!(n >= 2, "window ratio must be at least 2");
        let k_max = (self.horizon + 1) / n;
        let mut best = WindowSup { value: 0.0, k_star: 1 };
        if k_max == 0 {
            return best;
        }
        let els = &self.elements;
        let (mut lo_i, mut hi_i) = (0usize, 0usize);
        let mut last_k = 0u64;
        let candidates = std::iter::once(1u64).chain(els.iter().map(|&a| a / n + 1));
        for k in candidates {
            if k > k_max {
                break;
            }
            if k <= last_k {
                continue;
            }
            last_k = k;
            let right = k * n;
            while lo_i < els.len() && els[lo_i] < k {
                lo_i += 1;
            }
            while hi_i < els.len() && els[hi_i] < right {
                hi_i += 1;
            }
            if hi_i > lo_i {
                let v = self.prefix[hi_i].diff(self.prefix[lo_i]);
                if v > best.value {
                    best = WindowSup { value: v, k_star: k };
                }
            }
        }
        best
    }
}

pub fn banach_window_sup(spec: &SetSpec, n: u64, horizon: u64) -> Result<WindowSup> {
    if n < 2 || n > horizon {
        return Err(validation(format!("need 2 <= n <= horizon, got n={n}")));
    }
    Ok(ReciprocalIndex::new(spec, horizon)?.banach_window_sup(n))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LbdEstimate {
    pub value: f64,
    pub n_star: u64,
    pub k_star: u64,
    /// `(n, g_H(n)/ln n, k_star)` for every grid point.
    pub grid: Vec<(u64, f64, u64)>,
}

/// `min_n g_H(n) / ln n` over `grid`; an upper estimate of the Banach log
/// density whose bias shrinks as the grid and horizon grow.
pub fn lbd_estimate_on_grid(index: &ReciprocalIndex, grid: &[u64]) -> Result<LbdEstimate> {
    if grid.is_empty() || grid.iter().any(|&n| n < 2 || n > index.horizon()) {
        return Err(validation("grid points must lie in [2, horizon]"));
    }
    let values: Vec<(u64, f64, u64)> = grid
        .par_iter()
        .map(|&n| {
            let w = index.banach_window_sup(n);
            (n, w.value / (n as f64).ln(), w.k_star)
        })
        .collect();
    let mut best = values[0];
    for &v in &values[1..] {
        if v.1 < best.1 {
            best = v;
        }
    }
    Ok(LbdEstimate { value: best.1, n_star: best.0, k_star: best.2, grid: values })
}

pub fn lbd_estimate(spec: &SetSpec, n_max: u64, horizon: u64) -> Result<LbdEstimate> {
    if n_max < 2 || n_max > horizon {
        return Err(validation(format!("need 2 <= n_max <= horizon, got {n_max}")));
    }
    let index = ReciprocalIndex::new(spec, horizon)?;
    lbd_estimate_on_grid(&index, &default_n_grid(n_max))
}

/// `max_{1 <= k <= H-n} |A ∩ [k, k+n]| / (n+1)` over sorted elements.
///
/// A window can always be slid right until it starts at an element without
/// losing members, so the starts worth checking are the elements themselves
/// and the last admissible start `H - n`.
pub fn bd_estimate_sorted(elements: &[u64], n: u64, horizon: u64) -> WindowSup {
    let k_last = horizon - n;
    let mut best_count = 0u64;
    let mut best_k = 1u64;
    let mut hi_i = 0usize;
    let starts = elements.iter().copied().take_while(|&a| a <= k_last).chain(std::iter::once(k_last));
    let mut lo_i = 0usize;
    for k in starts {
        while lo_i < elements.len() && elements[lo_i] < k {
            lo_i += 1;
        }
        hi_i = hi_i.max(lo_i);
        while hi_i < elements.len() && elements[hi_i] <= k + n {
            hi_i += 1;
        }
        let c = (hi_i - lo_i) as u64;
        if c > best_count || (c == best_count && c > 0 && k < best_k) {
            best_count = c;
            best_k = k;
        }
    }
    WindowSup { value: best_count as f64 / (n + 1) as f64, k_star: best_k }
}

pub fn bd_estimate(spec: &SetSpec, n: u64, horizon: u64) -> Result<WindowSup> {
    if n == 0 || n >= horizon {
        return Err(validation(format!("need 1 <= n < horizon, got n={n}")));
    }
    let elements = materialize(spec, 1, horizon)?;
    Ok(bd_estimate_sorted(&elements, n, horizon))
}

fn root_weight(m: u32) -> impl Fn(u64) -> f64 {
    move |x: u64| match m {
        1 => 1.0,
        2 => 1.0 / (x as f64).sqrt(),
        _ => (x as f64).powf(-((m - 1) as f64) / m as f64),
    }
}

/// `max_k (1/(mn)) sum_{x in A ∩ [k, (ceil(k^{1/m}) + n)^m]} x^{-(m-1)/m}`
/// over `k` with `(ceil(k^{1/m}) + n)^m <= H`.
///
/// Windows are unions of consecutive root blocks `((c-1)^m, c^m]`, and
/// within a block the earliest start dominates, so the scan runs over block
/// starts `k = (c-1)^m + 1` using block sums streamed in one pass.
pub fn bdm_window_sup(spec: &SetSpec, m: u32, n: u64, horizon: u64) -> Result<WindowSup> {
    if m == 0 || n == 0 {
        return Err(validation("bdm_window_sup needs m >= 1 and n >= 1"));
    }
    let c_max = floor_root(horizon, m);
    if c_max < n + 1 {
        return Err(domain(format!("no window with m={m}, n={n} fits below {horizon}")));
    }
    let top = checked_pow(c_max, m).ok_or_else(|| crate::error::capacity("root block overflows u64"))?;
    let weight = root_weight(m);
    let mut blocks = vec![0.0f64; c_max as usize + 1];
    let mut block = 1u64;
    let mut block_end = 1u64;
    let mut acc = CompensatedSum::new();
    spec.for_each_in(1, top, |x| {
        if x > block_end {
            blocks[block as usize] = acc.value();
            acc = CompensatedSum::new();
            while x > block_end {
                block += 1;
                block_end = checked_pow(block, m).unwrap_or(u64::MAX);
            }
        }
        acc.add(weight(x));
    })?;
    blocks[block as usize] = acc.value();
    let mut prefix = Vec::with_capacity(blocks.len());
    let mut p = DoubleDouble::ZERO;
    for &b in &blocks {
        p = p.add_f64(b);
        prefix.push(p);
    }
    let norm = (m as f64) * (n as f64);
    let mut best = WindowSup { value: 0.0, k_star: 1 };
    for c in 1..=(c_max - n) {
        let s = prefix[(c + n) as usize].diff(prefix[(c - 1) as usize]) / norm;
        if s > best.value {
            let k = checked_pow(c - 1, m).unwrap_or(0) + 1;
            best = WindowSup { value: s, k_star: k };
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_g(elements: &[u64], n: u64, horizon: u64) -> f64 {
        let mut best = 0.0f64;
        for k in 1..=((horizon + 1) / n) {
            let s: f64 = elements.iter().filter(|&&x| x >= k && x < k * n).map(|&x| 1.0 / x as f64).sum();
            best = best.max(s);
        }
        best
    }

    #[test]
    fn counting_examples() {
        let p = counting_profile(&SetSpec::Full, CountKind::Upper, 100, &[1, 7, 100]).unwrap();
        assert!(p.checkpoints.iter().all(|c| c.value == 1.0));
        let p = counting_profile(&SetSpec::Even, CountKind::Lower, 10_000, &[10_000]).unwrap();
        assert_eq!(p.final_value(), Some(0.5));
        let p = counting_profile(&SetSpec::Squarefree, CountKind::Lower, 12, &[12]).unwrap();
        assert_eq!(p.final_value(), Some(8.0 / 12.0));
        let p = counting_profile(&SetSpec::empty(), CountKind::Upper, 50, &[3, 50]).unwrap();
        assert_eq!(p.running_max(), Some(0.0));
    }

    #[test]
    fn log_examples() {
        let p = log_profile(&SetSpec::empty(), 10, &[2, 10]).unwrap();
        assert_eq!(p.final_value(), Some(0.0));
        let p = log_profile(&SetSpec::Full, 10, &[10]).unwrap();
        assert!((p.final_value().unwrap() - (7381.0 / 2520.0) / 10f64.ln()).abs() < 1e-14);
        assert!(log_profile(&SetSpec::Full, 10, &[1]).is_err());
    }

    #[test]
    fn running_extrema() {
        let p = counting_profile(&SetSpec::Explicit(vec![1, 5, 6]), CountKind::Lower, 8, &[1, 2, 4, 8]).unwrap();
        let r: Vec<f64> = p.running().iter().map(|c| c.value).collect();
        assert_eq!(r, vec![1.0, 0.5, 0.25, 0.25]);
    }

    #[test]
    fn banach_matches_exhaustive_scan() {
        let sets: Vec<Vec<u64>> = vec![
            (1..=500).collect(),
            (1..=500).filter(|x| x % 3 != 0).collect(),
            vec![5, 6, 7, 90, 91, 300],
            (100..=200).collect(),
        ];
        for els in sets {
            let idx = ReciprocalIndex::from_elements(els.clone(), 500);
            for n in [2, 3, 5, 10, 37, 250] {
                let got = idx.banach_window_sup(n).value;
                let want = brute_g(&els, n, 500);
                assert!((got - want).abs() < 1e-12, "n={n}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn banach_window_examples() {
        assert_eq!(banach_window_sup(&SetSpec::empty(), 10, 100).unwrap().value, 0.0);
        let idx = ReciprocalIndex::new(&SetSpec::Full, 1_000_000).unwrap();
        let w = idx.banach_window_sup(10);
        assert_eq!(w.k_star, 1);
        assert!((w.value - 7129.0 / 2520.0).abs() < 1e-12);
        let iu: SetSpec = "intervals:100-1000".parse().unwrap();
        let w = banach_window_sup(&iu, 10, 10_000).unwrap();
        assert_eq!(w.k_star, 100);
        assert!((w.value - 2.307_093_342_910_723).abs() < 1e-12);
    }

    #[test]
    fn grid_shape() {
        assert_eq!(&default_n_grid(20)[..], &[2, 3, 4, 6, 8, 11, 16, 20]);
        assert_eq!(default_checkpoints(10), vec![2, 4, 8, 10]);
        assert_eq!(default_checkpoints(16), vec![2, 4, 8, 16]);
    }

    #[test]
    fn bd_examples() {
        assert_eq!(bd_estimate(&SetSpec::Full, 10, 1000).unwrap().value, 1.0);
        let w = bd_estimate(&SetSpec::Even, 101, 100_000).unwrap();
        assert_eq!(w.value, 51.0 / 102.0);
        assert_eq!(bd_estimate(&SetSpec::empty(), 5, 100).unwrap().value, 0.0);
        // a cluster only reachable from the last admissible start
        let w = bd_estimate_sorted(&[97, 98, 99, 100], 3, 100);
        assert_eq!(w.value, 1.0);
        assert_eq!(w.k_star, 97);
    }

    #[test]
    fn bdm_m1_is_window_count() {
        let els: Vec<u64> = vec![3, 4, 5, 9, 10, 11, 12, 40];
        let spec = SetSpec::Explicit(els.clone());
        let w = bdm_window_sup(&spec, 1, 4, 50).unwrap();
        let brute = (1..=46u64)
            .map(|k| els.iter().filter(|&&x| x >= k && x <= k + 4).count())
            .max()
            .unwrap();
        assert_eq!(w.value, brute as f64 / 4.0);
        assert_eq!(bdm_window_sup(&SetSpec::empty(), 3, 2, 10_000).unwrap().value, 0.0);
    }

    #[test]
    fn bdm_matches_direct_window_sum() {
        let spec = SetSpec::Squarefree;
        let (m, n, h) = (2u32, 5u64, 2000u64);
        let els = materialize(&spec, 1, h).unwrap();
        let mut best = 0.0f64;
        for k in 1..=h {
            let right = (crate::numeric::ceil_root(k, m) + n).pow(m);
            if right > h {
                continue;
            }
            let s: f64 = els.iter().filter(|&&x| x >= k && x <= right).map(|&x| 1.0 / (x as f64).sqrt()).sum();
            best = best.max(s / (m as f64 * n as f64));
        }
        let got = bdm_window_sup(&spec, m, n, h).unwrap().value;
        assert!((got - best).abs() < 1e-12, "{got} vs {best}");
    }
}
