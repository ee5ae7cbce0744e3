//! Integer sets: declarative specifications, sorted interval unions,
//! segmented sieves and the floor-inversion algebra `u -> floor(N/u)`.
//!
//! A [`SetSpec`] describes a possibly infinite subset of the positive
//! integers. Everything downstream consumes it through [`SetSpec::visit`],
//! which streams the members of `[lo, hi]` in increasing order without
//! materializing the whole range.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{capacity, domain, validation, Result};
use crate::numeric::{checked_pow, div_ceil, floor_root};

/// Largest `hi` accepted by the sieve-backed kinds and by [`materialize`].
pub const HORIZON_CAP: u64 = 1_000_000_000;

const SEGMENT: u64 = 1 << 17;

/// Sorted union of maximal integer intervals `[a_i, b_i]`, `1 <= a_i <= b_i`,
/// with `a_{i+1} > b_i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<[u64; 2]>", into = "Vec<[u64; 2]>")]
pub struct IntervalSet {
    components: Vec<(u64, u64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a set from arbitrary (possibly overlapping, unsorted)
    /// inclusive intervals, merging overlaps and adjacent runs.
    pub fn new(mut intervals: Vec<(u64, u64)>) -> Result<Self> {
        for &(a, b) in &intervals {
            if a == 0 {
                return Err(validation("interval endpoints must be positive"));
            }
            if a > b {
                return Err(validation(format!("interval [{a}, {b}] is reversed")));
            }
        }
        intervals.sort_unstable();
        let mut components: Vec<(u64, u64)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match components.last_mut() {
                Some(last) if a <= last.1.saturating_add(1) => last.1 = last.1.max(b),
                _ => components.push((a, b)),
            }
        }
        Ok(Self { components })
    }

    pub fn single(a: u64, b: u64) -> Result<Self> {
        Self::new(vec![(a, b)])
    }

    /// Maximal runs of a strictly increasing element list.
    pub fn from_sorted_elements(elements: &[u64]) -> Result<Self> {
        let mut components: Vec<(u64, u64)> = Vec::new();
        let mut prev: Option<u64> = None;
        for &x in elements {
            if x == 0 || prev.is_some_and(|p| x <= p) {
                return Err(validation("elements must be strictly increasing positive integers"));
            }
            match components.last_mut() {
                Some(last) if last.1 + 1 == x => last.1 = x,
                _ => components.push((x, x)),
            }
            prev = Some(x);
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[(u64, u64)] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Number of integers in the set.
    pub fn count(&self) -> u128 {
        self.components.iter().map(|&(a, b)| u128::from(b - a) + 1).sum()
    }

    pub fn min(&self) -> Option<u64> {
        self.components.first().map(|c| c.0)
    }

    pub fn max(&self) -> Option<u64> {
        self.components.last().map(|c| c.1)
    }

    pub fn contains(&self, x: u64) -> bool {
        let idx = self.components.partition_point(|&(_, b)| b < x);
        self.components.get(idx).is_some_and(|&(a, _)| a <= x)
    }

    /// Largest member `<= x`.
    pub fn predecessor(&self, x: u64) -> Option<u64> {
        let idx = self.components.partition_point(|&(a, _)| a <= x);
        idx.checked_sub(1).map(|i| self.components[i].1.min(x))
    }

    /// Smallest member `>= x`.
    pub fn successor(&self, x: u64) -> Option<u64> {
        let idx = self.components.partition_point(|&(_, b)| b < x);
        self.components.get(idx).map(|&(a, _)| a.max(x))
    }

    /// Intersection with `[lo, hi]`.
    pub fn clip(&self, lo: u64, hi: u64) -> Self {
        let components = self
            .components
            .iter()
            .filter(|&&(a, b)| b >= lo && a <= hi)
            .map(|&(a, b)| (a.max(lo), b.min(hi)))
            .collect();
        Self { components }
    }

    /// Component-wise image `[s*a_i, s*b_i]` (not the pointwise dilation).
    pub fn scale_components(&self, s: u64) -> Result<Self> {
        let mut out = Vec::with_capacity(self.components.len());
        for &(a, b) in &self.components {
            let sa = a.checked_mul(s).ok_or_else(|| capacity("scaled interval overflows u64"))?;
            let sb = b.checked_mul(s).ok_or_else(|| capacity("scaled interval overflows u64"))?;
            out.push((sa, sb));
        }
        Self::new(out)
    }

    /// Elements in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.components.iter().flat_map(|&(a, b)| a..=b)
    }
}

impl TryFrom<Vec<[u64; 2]>> for IntervalSet {
    type Error = crate::Error;

    fn try_from(v: Vec<[u64; 2]>) -> Result<Self> {
        Self::new(v.into_iter().map(|[a, b]| (a, b)).collect())
    }
}

impl From<IntervalSet> for Vec<[u64; 2]> {
    fn from(s: IntervalSet) -> Self {
        s.components.into_iter().map(|(a, b)| [a, b]).collect()
    }
}

/// The scan window `[k, N*k]` with normalizer `ln N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub k: u64,
    #[serde(rename = "N")]
    pub span: u64,
}

impl Window {
    pub fn new(k: u64, span: u64) -> Result<Self> {
        if k == 0 {
            return Err(validation("window start k must be positive"));
        }
        if span < 2 {
            return Err(validation("window span N must be at least 2"));
        }
        k.checked_mul(span).ok_or_else(|| capacity("N*k overflows u64"))?;
        Ok(Self { k, span })
    }

    pub fn lo(&self) -> u64 {
        self.k
    }

    pub fn hi(&self) -> u64 {
        self.k * self.span
    }

    pub fn ln_span(&self) -> f64 {
        (self.span as f64).ln()
    }

    pub fn contains(&self, x: u64) -> bool {
        (self.lo()..=self.hi()).contains(&x)
    }
}

/// Declarative description of a subset of the positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpecDocument", into = "SpecDocument")]
pub enum SetSpec {
    /// Strictly increasing positive integers.
    Explicit(Vec<u64>),
    IntervalUnion(IntervalSet),
    Squarefree,
    Primes,
    Full,
    Even,
    /// `[u_0, j u_0] ∪ ... ∪ [u_depth, j u_depth]` with `u_0 = 2` and
    /// `u_{i+1} = (j u_i)^3 + 1`.
    Example2 { j: u64, depth: u32 },
}

impl SetSpec {
    pub fn empty() -> Self {
        SetSpec::Explicit(Vec::new())
    }

    pub fn explicit(elements: Vec<u64>) -> Result<Self> {
        let s = SetSpec::Explicit(elements);
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SetSpec::Explicit(xs) => {
                if xs.first() == Some(&0) || xs.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(validation("explicit elements must be strictly increasing positive integers"));
                }
                Ok(())
            }
            SetSpec::Example2 { j, .. } if *j < 2 => Err(validation("example2 requires j >= 2")),
            _ => Ok(()),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            SetSpec::Explicit(_) => "explicit",
            SetSpec::IntervalUnion(_) => "interval_union",
            SetSpec::Squarefree => "squarefree",
            SetSpec::Primes => "primes",
            SetSpec::Full => "full",
            SetSpec::Even => "even",
            SetSpec::Example2 { .. } => "example2",
        }
    }

    /// Interval form for the kinds that have one. `Example2` components
    /// whose left end does not fit in `u64` are dropped: they lie beyond
    /// every representable query.
    pub fn as_intervals(&self) -> Option<IntervalSet> {
        match self {
            SetSpec::IntervalUnion(s) => Some(s.clone()),
            SetSpec::Example2 { j, depth } => Some(example2_components(*j, *depth).0),
            _ => None,
        }
    }

    pub fn contains(&self, x: u64) -> bool {
        match self {
            _ if x == 0 => false,
            SetSpec::Explicit(xs) => xs.binary_search(&x).is_ok(),
            SetSpec::IntervalUnion(s) => s.contains(x),
            SetSpec::Squarefree => is_squarefree(x),
            SetSpec::Primes => is_prime(x),
            SetSpec::Full => true,
            SetSpec::Even => x.is_multiple_of(2),
            SetSpec::Example2 { j, depth } => example2_components(*j, *depth).0.contains(x),
        }
    }

    /// Streams the members of `[lo, hi]` in increasing order. The visitor
    /// may stop early by returning `ControlFlow::Break`.
    pub fn visit(&self, lo: u64, hi: u64, mut f: impl FnMut(u64) -> ControlFlow<()>) -> Result<()> {
        self.validate()?;
        let lo = lo.max(1);
        if lo > hi {
            return Ok(());
        }
        match self {
            SetSpec::Explicit(xs) => {
                let start = xs.partition_point(|&x| x < lo);
                for &x in xs[start..].iter().take_while(|&&x| x <= hi) {
                    if f(x).is_break() {
                        break;
                    }
                }
            }
            SetSpec::IntervalUnion(_) | SetSpec::Example2 { .. } => {
                let set = self.as_intervals().unwrap_or_default().clip(lo, hi);
                for x in set.iter() {
                    if f(x).is_break() {
                        break;
                    }
                }
            }
            SetSpec::Full => {
                for x in lo..=hi {
                    if f(x).is_break() {
                        break;
                    }
                }
            }
            SetSpec::Even => {
                let start = lo + lo % 2;
                let mut x = start;
                while x <= hi {
                    if f(x).is_break() {
                        break;
                    }
                    x = match x.checked_add(2) {
                        Some(v) => v,
                        None => break,
                    };
                }
            }
            SetSpec::Squarefree => {
                check_horizon(hi)?;
                sieve_segments(lo, hi, SieveKind::Squarefree, &mut f);
            }
            SetSpec::Primes => {
                check_horizon(hi)?;
                sieve_segments(lo, hi, SieveKind::Primes, &mut f);
            }
        }
        Ok(())
    }

    /// Calls `f` on every member of `[lo, hi]`.
    pub fn for_each_in(&self, lo: u64, hi: u64, mut f: impl FnMut(u64)) -> Result<()> {
        self.visit(lo, hi, |x| {
            f(x);
            ControlFlow::Continue(())
        })
    }

    /// Least member of `[lo, hi]`.
    pub fn visit_first(&self, lo: u64, hi: u64) -> Result<Option<u64>> {
        let mut first = None;
        self.visit(lo, hi, |x| {
            first = Some(x);
            ControlFlow::Break(())
        })?;
        Ok(first)
    }
}

fn check_horizon(hi: u64) -> Result<()> {
    if hi > HORIZON_CAP {
        return Err(capacity(format!("horizon {hi} exceeds the sieve cap {HORIZON_CAP}")));
    }
    Ok(())
}

/// Members of `spec` in `[lo, hi]`, strictly increasing.
pub fn materialize(spec: &SetSpec, lo: u64, hi: u64) -> Result<Vec<u64>> {
    if lo == 0 || lo > hi {
        return Err(validation(format!("invalid range [{lo}, {hi}]")));
    }
    let dense = matches!(spec, SetSpec::Full | SetSpec::Even | SetSpec::Squarefree | SetSpec::Primes);
    if dense && hi > HORIZON_CAP {
        return Err(capacity(format!("horizon {hi} exceeds {HORIZON_CAP}")));
    }
    if let Some(set) = spec.as_intervals() {
        if set.clip(lo, hi).count() > u128::from(HORIZON_CAP) {
            return Err(capacity("interval set has too many members in range"));
        }
    }
    let mut out = Vec::new();
    spec.for_each_in(lo, hi, |x| out.push(x))?;
    Ok(out)
}

/// Membership test; `false` for 0.
pub fn contains(spec: &SetSpec, x: u64) -> bool {
    spec.contains(x)
}

/// Components of the interval construction plus a flag telling whether
/// later components were dropped because `u_i` left the `u64` range.
pub fn example2_components(j: u64, depth: u32) -> (IntervalSet, bool) {
    let mut components = Vec::new();
    let mut u: u64 = 2;
    let mut truncated = false;
    for i in 0..=depth {
        let Some(ju) = u.checked_mul(j) else {
            truncated = true;
            break;
        };
        components.push((u, ju));
        if i == depth {
            break;
        }
        match checked_pow(ju, 3).and_then(|c| c.checked_add(1)) {
            Some(next) => u = next,
            None => {
                truncated = true;
                break;
            }
        }
    }
    (IntervalSet { components }, truncated)
}

/// The full construction up to `depth`; a capacity error when any component
/// does not fit in `u64`.
pub fn example2_set(j: u64, depth: u32) -> Result<IntervalSet> {
    if j < 2 {
        return Err(validation("example2 requires j >= 2"));
    }
    let (set, truncated) = example2_components(j, depth);
    if truncated {
        return Err(capacity(format!("example2 with j={j} depth={depth} overflows u64")));
    }
    Ok(set)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    /// Every component satisfies `b_i / a_i >= ratio_floor`.
    pub big: bool,
    /// Adjacent components satisfy `a_{i+1} > 2 b_i`.
    pub separated: bool,
    /// All components lie in `[1, N]`.
    pub within: bool,
}

pub fn classify(set: &IntervalSet, n: u64, ratio_floor: f64) -> Classification {
    let c = set.components();
    let big = c.iter().all(|&(a, b)| b as f64 >= ratio_floor * a as f64);
    let separated = c.windows(2).all(|w| u128::from(w[1].0) > 2 * u128::from(w[0].1));
    let within = set.max().is_none_or(|m| m <= n);
    Classification { big, separated, within }
}

/// `floor(N/u)`.
pub fn invert_point(n: u64, u: u64) -> u64 {
    n / u
}

/// `⊔ [floor(N/b_i), floor(N/a_i)]`, requiring separated components and
/// `b_i <= N / margin`.
pub fn invert_intervals_with_margin(set: &IntervalSet, n: u64, margin: u64) -> Result<IntervalSet> {
    if margin < 2 {
        return Err(validation("inversion margin must be at least 2"));
    }
    let class = classify(set, n, 0.0);
    if !class.separated {
        return Err(domain("inversion requires separated components"));
    }
    if let Some(max) = set.max() {
        if max > n / margin {
            return Err(domain(format!("component end {max} exceeds N/{margin}")));
        }
    }
    let mut out: Vec<(u64, u64)> = set.components().iter().map(|&(a, b)| (n / b, n / a)).collect();
    out.reverse();
    IntervalSet::new(out)
}

/// Inversion under the weakest admissible margin, `b_i <= N/2`.
pub fn invert_intervals(set: &IntervalSet, n: u64) -> Result<IntervalSet> {
    invert_intervals_with_margin(set, n, 2)
}

pub fn is_squarefree(mut x: u64) -> bool {
    if x == 0 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= x {
        if x.is_multiple_of(d) {
            x /= d;
            if x.is_multiple_of(d) {
                return false;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the whole `u64` range.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'bases: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Primes up to `limit` by a plain sieve of Eratosthenes.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

#[derive(Clone, Copy)]
enum SieveKind {
    Squarefree,
    Primes,
}

fn sieve_segments(lo: u64, hi: u64, kind: SieveKind, f: &mut impl FnMut(u64) -> ControlFlow<()>) {
    let base = small_primes(floor_root(hi, 2));
    let mut excluded = vec![false; SEGMENT as usize];
    let mut seg_lo = lo;
    loop {
        let seg_hi = hi.min(seg_lo + SEGMENT - 1);
        let len = (seg_hi - seg_lo + 1) as usize;
        excluded[..len].fill(false);
        for &p in &base {
            let (step, start) = match kind {
                SieveKind::Squarefree => {
                    let p2 = p * p;
                    if p2 > seg_hi {
                        break;
                    }
                    (p2, div_ceil(seg_lo, p2) * p2)
                }
                SieveKind::Primes => {
                    if p * p > seg_hi {
                        break;
                    }
                    (p, (div_ceil(seg_lo, p) * p).max(p * p))
                }
            };
            let mut m = start;
            while m <= seg_hi {
                excluded[(m - seg_lo) as usize] = true;
                m += step;
            }
        }
        for (i, &ex) in excluded[..len].iter().enumerate() {
            let x = seg_lo + i as u64;
            if ex || (matches!(kind, SieveKind::Primes) && x < 2) {
                continue;
            }
            if f(x).is_break() {
                return;
            }
        }
        if seg_hi == hi {
            return;
        }
        seg_lo = seg_hi + 1;
    }
}

/// On-disk form: `{"kind": "...", "params": {...}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct SpecDocument {
    kind: String,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    params: serde_json::Value,
}

impl TryFrom<SpecDocument> for SetSpec {
    type Error = crate::Error;

    fn try_from(doc: SpecDocument) -> Result<Self> {
        let p = &doc.params;
        let field = |name: &str| p.get(name).cloned();
        let spec = match doc.kind.as_str() {
            "explicit" => {
                let list = if p.is_array() { Some(p.clone()) } else { field("elements") };
                let list = list.ok_or_else(|| validation("explicit set needs params.elements"))?;
                let xs: Vec<u64> = serde_json::from_value(list).map_err(|e| validation(e.to_string()))?;
                SetSpec::Explicit(xs)
            }
            "interval_union" => {
                let list = if p.is_array() { Some(p.clone()) } else { field("intervals") };
                let list = list.ok_or_else(|| validation("interval_union needs params.intervals"))?;
                let set: IntervalSet = serde_json::from_value(list).map_err(|e| validation(e.to_string()))?;
                SetSpec::IntervalUnion(set)
            }
            "squarefree" => SetSpec::Squarefree,
            "primes" => SetSpec::Primes,
            "full" => SetSpec::Full,
            "even" => SetSpec::Even,
            "example2" => {
                let j = field("j").and_then(|v| v.as_u64()).ok_or_else(|| validation("example2 needs params.j"))?;
                let depth = field("depth")
                    .and_then(|v| v.as_u64())
                    .ok_or_else(|| validation("example2 needs params.depth"))?;
                let depth = u32::try_from(depth).map_err(|_| validation("example2 depth too large"))?;
                SetSpec::Example2 { j, depth }
            }
            other => return Err(validation(format!("unknown set kind `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl From<SetSpec> for SpecDocument {
    fn from(spec: SetSpec) -> Self {
        let kind = spec.kind_name().to_string();
        let params = match spec {
            SetSpec::Explicit(xs) => serde_json::json!({ "elements": xs }),
            SetSpec::IntervalUnion(s) => serde_json::json!({ "intervals": s }),
            SetSpec::Example2 { j, depth } => serde_json::json!({ "j": j, "depth": depth }),
            _ => serde_json::json!({}),
        };
        SpecDocument { kind, params }
    }
}

impl std::str::FromStr for SetSpec {
    type Err = crate::Error;

    /// Accepts inline JSON, or the shorthand `kind[:params]`:
    /// `squarefree`, `explicit:1,2,3`, `intervals:2-4,65-130`,
    /// `example2:j=2,depth=4`, `empty`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| validation(e.to_string()));
        }
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let parse_u64 = |t: &str| t.trim().parse::<u64>().map_err(|_| validation(format!("bad integer `{t}`")));
        let spec = match kind {
            "squarefree" => SetSpec::Squarefree,
            "primes" => SetSpec::Primes,
            "full" => SetSpec::Full,
            "even" => SetSpec::Even,
            "empty" => SetSpec::empty(),
            "explicit" => SetSpec::Explicit(
                rest.split(',').filter(|t| !t.trim().is_empty()).map(parse_u64).collect::<Result<_>>()?,
            ),
            "intervals" | "interval_union" => {
                let mut v = Vec::new();
                for part in rest.split(',').filter(|t| !t.trim().is_empty()) {
                    let (a, b) = part.split_once('-').ok_or_else(|| validation(format!("bad interval `{part}`")))?;
                    v.push((parse_u64(a)?, parse_u64(b)?));
                }
                SetSpec::IntervalUnion(IntervalSet::new(v)?)
            }
            "example2" => {
                let (mut j, mut depth) = (None, None);
                for kv in rest.split(',').filter(|t| !t.trim().is_empty()) {
                    match kv.split_once('=') {
                        Some(("j", v)) => j = Some(parse_u64(v)?),
                        Some(("depth", v)) => depth = Some(parse_u64(v)?),
                        _ => return Err(validation(format!("bad example2 parameter `{kv}`"))),
                    }
                }
                let j = j.ok_or_else(|| validation("example2 needs j"))?;
                let depth = u32::try_from(depth.unwrap_or(3)).map_err(|_| validation("depth too large"))?;
                SetSpec::Example2 { j, depth }
            }
            other => return Err(validation(format!("unknown set kind `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn materialize_small_families() {
        assert_eq!(materialize(&SetSpec::Full, 1, 5).unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(materialize(&SetSpec::Squarefree, 1, 12).unwrap(), vec![1, 2, 3, 5, 6, 7, 10, 11]);
        assert_eq!(materialize(&SetSpec::Primes, 1, 30).unwrap(), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(materialize(&SetSpec::Even, 3, 9).unwrap(), vec![4, 6, 8]);
        let ex2 = SetSpec::Example2 { j: 2, depth: 2 };
        let want: Vec<u64> = (2..=4).chain(65..=130).collect();
        assert_eq!(materialize(&ex2, 1, 10_000).unwrap(), want);
    }

    #[test]
    fn materialize_rejects_bad_ranges() {
        assert!(matches!(materialize(&SetSpec::Full, 5, 4), Err(crate::Error::Validation(_))));
        assert!(matches!(materialize(&SetSpec::Squarefree, 1, HORIZON_CAP + 1), Err(crate::Error::Capacity(_))));
        assert!(matches!(
            materialize(&SetSpec::Explicit(vec![3, 2]), 1, 10),
            Err(crate::Error::Validation(_))
        ));
    }

    #[test]
    fn membership_examples() {
        assert!(!contains(&SetSpec::Squarefree, 12));
        assert!(!contains(&SetSpec::Even, 7));
        assert!(contains(&SetSpec::Example2 { j: 2, depth: 3 }, 130));
        assert!(!contains(&SetSpec::Example2 { j: 2, depth: 3 }, 131));
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn example2_recursion() {
        assert_eq!(example2_set(2, 1).unwrap().components(), &[(2, 4), (65, 130)]);
        assert_eq!(example2_set(2, 2).unwrap().components(), &[(2, 4), (65, 130), (2_197_001, 4_394_002)]);
        assert_eq!(example2_set(3, 0).unwrap().components(), &[(2, 6)]);
        assert!(matches!(example2_set(2, 3), Err(crate::Error::Capacity(_))));
        assert!(matches!(example2_set(1, 3), Err(crate::Error::Validation(_))));
        let (trunc, flag) = example2_components(2, 4);
        assert!(flag);
        assert_eq!(trunc.components().len(), 3);
    }

    #[test]
    fn classify_examples() {
        let s = IntervalSet::single(10, 30).unwrap();
        let c = classify(&s, 1_000_000, 2.5);
        assert!(c.big && c.separated);
        assert!(!classify(&IntervalSet::single(10, 19).unwrap(), 1_000_000, 2.5).big);
        let two = IntervalSet::new(vec![(10, 30), (50, 200)]).unwrap();
        assert!(!classify(&two, 1_000_000, 2.5).separated);
    }

    #[test]
    fn inversion_examples() {
        let inv = |c: Vec<(u64, u64)>, n| invert_intervals(&IntervalSet::new(c).unwrap(), n).unwrap();
        assert_eq!(inv(vec![(7, 10)], 100).components(), &[(10, 14)]);
        assert_eq!(inv(vec![(1000, 10_000)], 1_000_000_000_000).components(), &[(100_000_000, 1_000_000_000)]);
        assert_eq!(inv(vec![(2, 4), (10, 20)], 1000).components(), &[(50, 100), (250, 500)]);
        let bad = IntervalSet::new(vec![(10, 30), (50, 200)]).unwrap();
        assert!(matches!(invert_intervals(&bad, 10_000), Err(crate::Error::Domain(_))));
        let near = IntervalSet::single(10, 600).unwrap();
        assert!(matches!(invert_intervals(&near, 1000), Err(crate::Error::Domain(_))));
        assert_eq!(invert_point(100, 7), 14);
        assert_eq!(invert_point(100, 14), 7);
        assert_eq!(invert_point(77, 1), 77);
    }

    #[test]
    fn interval_set_normalizes() {
        let s = IntervalSet::new(vec![(5, 9), (1, 3), (4, 4), (20, 25), (22, 30)]).unwrap();
        assert_eq!(s.components(), &[(1, 9), (20, 30)]);
        assert_eq!(s.count(), 20);
        assert_eq!(s.predecessor(15), Some(9));
        assert_eq!(s.successor(15), Some(20));
        assert_eq!(s.successor(31), None);
        assert!(IntervalSet::new(vec![(0, 3)]).is_err());
        assert!(IntervalSet::new(vec![(4, 3)]).is_err());
    }

    #[test]
    fn spec_json_and_shorthand() {
        let spec: SetSpec = serde_json::from_str(r#"{"kind":"example2","params":{"j":2,"depth":4}}"#).unwrap();
        assert_eq!(spec, SetSpec::Example2 { j: 2, depth: 4 });
        let spec: SetSpec = serde_json::from_str(r#"{"kind":"explicit","params":[1,5,9]}"#).unwrap();
        assert_eq!(spec, SetSpec::Explicit(vec![1, 5, 9]));
        let spec: SetSpec = serde_json::from_str(r#"{"kind":"squarefree"}"#).unwrap();
        assert_eq!(spec, SetSpec::Squarefree);
        let iu: SetSpec = "intervals:2-4,65-130".parse().unwrap();
        let text = serde_json::to_string(&iu).unwrap();
        assert_eq!(text, r#"{"kind":"interval_union","params":{"intervals":[[2,4],[65,130]]}}"#);
        assert_eq!(serde_json::from_str::<SetSpec>(&text).unwrap(), iu);
        assert_eq!("example2:j=2,depth=4".parse::<SetSpec>().unwrap(), SetSpec::Example2 { j: 2, depth: 4 });
        assert!("explicit:3,2".parse::<SetSpec>().is_err());
        assert!(serde_json::from_str::<SetSpec>(r#"{"kind":"cubes"}"#).is_err());
    }
}
