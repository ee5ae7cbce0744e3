//! Approximate geometric progressions and powers of arithmetic progressions.
//!
//! `x` is an n-approximation of `a` when `x/n < a < x n`. Searches return
//! the lexicographically least parameters whose progression is an
//! n-approximate subset of the target set, or `None` once the horizon is
//! exhausted.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{capacity, domain, validation, Result};
use crate::intset::{materialize, IntervalSet, SetSpec};
use crate::numeric::{ceil_root, checked_pow, floor_root};

/// Strict `x/n < a < x n`, in integers.
pub fn is_n_approx(x: u64, a: u64, n: u64) -> bool {
    let (x, a, n) = (x as u128, a as u128, n as u128);
    a * n > x && x * n > a
}

/// Nearest-neighbour queries on `A ∩ [1, H]`.
#[derive(Debug, Clone)]
pub enum Lookup {
    Full,
    Even,
    Intervals(IntervalSet),
    Sorted(Vec<u64>),
}

impl Lookup {
    pub fn new(spec: &SetSpec, horizon: u64) -> Result<Self> {
        spec.validate()?;
        Ok(match spec {
            SetSpec::Full => Lookup::Full,
            SetSpec::Even => Lookup::Even,
            SetSpec::Explicit(xs) => Lookup::Sorted(xs.clone()),
            _ => match spec.as_intervals() {
                Some(set) => Lookup::Intervals(set),
                None => Lookup::Sorted(materialize(spec, 1, horizon.max(1))?),
            },
        })
    }

    pub fn contains(&self, x: u64) -> bool {
        match self {
            Lookup::Full => x >= 1,
            Lookup::Even => x >= 2 && x.is_multiple_of(2),
            Lookup::Intervals(s) => s.contains(x),
            Lookup::Sorted(v) => v.binary_search(&x).is_ok(),
        }
    }

    /// Largest member `<= x`.
    pub fn predecessor(&self, x: u64) -> Option<u64> {
        match self {
            Lookup::Full => (x >= 1).then_some(x),
            Lookup::Even => (x >= 2).then_some(x - x % 2),
            Lookup::Intervals(s) => s.predecessor(x),
            Lookup::Sorted(v) => v.partition_point(|&y| y <= x).checked_sub(1).map(|i| v[i]),
        }
    }

    /// Smallest member `>= x`.
    pub fn successor(&self, x: u64) -> Option<u64> {
        match self {
            Lookup::Full => Some(x.max(1)),
            Lookup::Even => x.max(2).checked_add(x % 2),
            Lookup::Intervals(s) => s.successor(x),
            Lookup::Sorted(v) => v.get(v.partition_point(|&y| y < x)).copied(),
        }
    }

    /// The member closest to `x` in log distance among those that `x`
    /// n-approximates; ties go to the smaller member.
    pub fn nearest_approx(&self, x: u64, n: u64) -> Option<u64> {
        let below = self.predecessor(x).filter(|&a| is_n_approx(x, a, n));
        let above = self.successor(x).filter(|&a| is_n_approx(x, a, n));
        match (below, above) {
            (Some(lo), Some(hi)) => {
                // x/lo <= hi/x  <=>  x^2 <= lo*hi
                if (x as u128) * (x as u128) <= (lo as u128) * (hi as u128) {
                    Some(lo)
                } else {
                    Some(hi)
                }
            }
            (a, b) => a.or(b),
        }
    }

    /// `(term, match)` for every term, or `None` if any term is unmatched.
    pub fn match_all(&self, terms: &[u64], n: u64) -> Option<Vec<(u64, u64)>> {
        terms.iter().map(|&x| self.nearest_approx(x, n).map(|a| (x, a))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeoProgression {
    pub a: u64,
    pub r: u64,
    pub l: u32,
}

impl GeoProgression {
    /// `a r^i` for `i < l`; `None` if a term overflows.
    pub fn terms(&self) -> Option<Vec<u64>> {
        let mut out = Vec::with_capacity(self.l as usize);
        let mut t = self.a;
        for i in 0..self.l {
            if i > 0 {
                t = t.checked_mul(self.r)?;
            }
            out.push(t);
        }
        Some(out)
    }
}

/// `(ceil(a^{1/m}) + i d)^m` for `i < l`.
pub fn power_ap_terms(a: u64, d: u64, m: u32, l: u32) -> Option<Vec<u64>> {
    let c = ceil_root(a, m);
    (0..l as u64).map(|i| checked_pow(c.checked_add(i.checked_mul(d)?)?, m)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxWitness {
    pub a: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<u32>,
    pub l: u32,
    pub n: u64,
    pub matches: Vec<(u64, u64)>,
}

impl ApproxWitness {
    pub fn terms(&self) -> Vec<u64> {
        self.matches.iter().map(|&(t, _)| t).collect()
    }

    /// Every match satisfies the approximation relation and is a member.
    pub fn verify(&self, spec: &SetSpec) -> bool {
        let expected = match (self.r, self.d, self.m) {
            (Some(r), None, None) => GeoProgression { a: self.a, r, l: self.l }.terms(),
            (None, Some(d), Some(m)) => power_ap_terms(self.a, d, m, self.l),
            _ => None,
        };
        expected.as_deref() == Some(&self.terms()[..])
            && self.matches.iter().all(|&(x, a)| is_n_approx(x, a, self.n) && spec.contains(a))
    }
}

fn check_common(l: u32, n: u64, horizon: u64) -> Result<()> {
    if l == 0 || n == 0 || horizon == 0 {
        return Err(validation("l, n and horizon must be positive"));
    }
    Ok(())
}

/// Matches for an explicit candidate subset `X`.
pub fn approx_subset(xs: &[u64], spec: &SetSpec, n: u64, horizon: u64) -> Result<Option<Vec<(u64, u64)>>> {
    check_common(1, n, horizon)?;
    if let Some(&x) = xs.iter().find(|&&x| x == 0 || (x as u128) * (n as u128) > horizon as u128) {
        return Err(validation(format!("term {x} violates 1 <= x and x*n <= horizon")));
    }
    Ok(Lookup::new(spec, horizon)?.match_all(xs, n))
}

/// Least `(a, r)` with `a > min_a`, `r > min_r` and `a r^{l-1} n <= H`
/// whose progression n-approximates a subset of `A`.
pub fn find_geo(spec: &SetSpec, l: u32, n: u64, min_a: u64, min_r: u64, horizon: u64) -> Result<Option<ApproxWitness>> {
    check_common(l, n, horizon)?;
    let lookup = Lookup::new(spec, horizon)?;
    find_geo_with(&lookup, l, n, min_a, min_r, horizon)
}

pub fn find_geo_with(lookup: &Lookup, l: u32, n: u64, min_a: u64, min_r: u64, horizon: u64) -> Result<Option<ApproxWitness>> {
    check_common(l, n, horizon)?;
    let r0 = min_r.checked_add(1).ok_or_else(|| capacity("min_r too large"))?;
    let a0 = min_a.checked_add(1).ok_or_else(|| capacity("min_a too large"))?;
    // budget for a * r^{l-1}
    let budget = horizon / n;
    let min_growth = checked_pow(r0, l - 1).filter(|&g| g <= budget);
    let Some(min_growth) = min_growth else {
        return Err(domain(format!("no progression with r > {min_r} fits below horizon {horizon}")));
    };
    let a_max = budget / min_growth;
    if a_max < a0 {
        return Err(domain(format!("no progression with a > {min_a}, r > {min_r} fits below horizon {horizon}")));
    }
    let found = (a0..=a_max).into_par_iter().find_map_first(|a| {
        let r_max = if l == 1 { r0 } else { floor_root(budget / a, l - 1) };
        (r0..=r_max).find_map(|r| {
            let g = GeoProgression { a, r, l };
            let terms = g.terms()?;
            lookup.match_all(&terms, n).map(|matches| ApproxWitness { a, r: Some(r), d: None, m: None, l, n, matches })
        })
    });
    Ok(found)
}

/// Least `(a, d)` with `a > min_a`, `d > min_d` and last term times `n`
/// within the horizon, such that the m-th powers of the progression
/// `ceil(a^{1/m}) + i d` n-approximate a subset of `A`.
///
/// All `a` sharing the same `ceil(a^{1/m})` yield the same terms, so only
/// the least such `a` is tried.
pub fn find_power_ap(spec: &SetSpec, m: u32, l: u32, n: u64, min_a: u64, min_d: u64, horizon: u64) -> Result<Option<ApproxWitness>> {
    check_common(l, n, horizon)?;
    if m == 0 {
        return Err(validation("m must be positive"));
    }
    let lookup = Lookup::new(spec, horizon)?;
    let a0 = min_a.checked_add(1).ok_or_else(|| capacity("min_a too large"))?;
    let d0 = min_d.checked_add(1).ok_or_else(|| capacity("min_d too large"))?;
    let budget = horizon / n;
    let root_budget = floor_root(budget, m);
    let steps = u64::from(l - 1);
    let c0 = ceil_root(a0, m);
    if c0.saturating_add(steps.saturating_mul(d0)) > root_budget {
        return Err(domain(format!("no power progression with a > {min_a}, d > {min_d} fits below horizon {horizon}")));
    }
    let c_max = root_budget - steps * d0;
    let found = (c0..=c_max).into_par_iter().find_map_first(|c| {
        let a = if c == c0 { a0 } else { checked_pow(c - 1, m)? + 1 };
        let d_max = if steps == 0 { d0 } else { (root_budget - c) / steps };
        (d0..=d_max).find_map(|d| {
            let terms = power_ap_terms(a, d, m, l)?;
            lookup.match_all(&terms, n).map(|matches| ApproxWitness { a, r: None, d: Some(d), m: Some(m), l, n, matches })
        })
    });
    Ok(found)
}

/// Least 3-term progression `a < b < c` with `b^2 = a c`, `a, b ∈ A ∩ [1,H]`
/// and `c ∈ A`, ordered by `(b, a)`.
///
/// Each `b` is factored with a smallest-prime-factor table and the divisors
/// of `b^2` below `b` are tried as `a`.
pub fn find_gp3(spec: &SetSpec, horizon: u64) -> Result<Option<[u64; 3]>> {
    const LIMIT: u64 = 1_000_000;
    if horizon > LIMIT {
        return Err(capacity(format!("gp-free certification is limited to horizon {LIMIT}")));
    }
    let elements = materialize(spec, 1, horizon.max(1))?;
    let mut member = vec![false; horizon as usize + 1];
    for &x in &elements {
        member[x as usize] = true;
    }
    let spf = smallest_prime_factors(horizon as usize);
    let found = elements.par_iter().find_map_first(|&b| {
        let mut divisors = square_divisors_below(b, &spf);
        divisors.sort_unstable();
        divisors.into_iter().find_map(|a| {
            let c = ((b as u128) * (b as u128) / a as u128) as u64;
            (member[a as usize] && spec.contains(c)).then_some([a, b, c])
        })
    });
    Ok(found)
}

/// `true` iff `A ∩ [1, H]` extends to no 3-term progression `b^2 = a c`.
pub fn gp_free_certify(spec: &SetSpec, horizon: u64) -> Result<bool> {
    Ok(find_gp3(spec, horizon)?.is_none())
}

fn smallest_prime_factors(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            for j in (i..=limit).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    spf
}

/// Divisors of `b^2` strictly below `b`.
fn square_divisors_below(b: u64, spf: &[u32]) -> Vec<u64> {
    let mut divs = vec![1u64];
    let mut rest = b as usize;
    while rest > 1 {
        let p = spf[rest] as u64;
        let mut e = 0u32;
        while (rest as u64).is_multiple_of(p) {
            rest /= p as usize;
            e += 1;
        }
        let base = divs.len();
        let mut pk = 1u64;
        for _ in 0..2 * e {
            pk *= p;
            for i in 0..base {
                if let Some(v) = divs[i].checked_mul(pk).filter(|&v| v < b) {
                    divs.push(v);
                }
            }
        }
    }
    divs.retain(|&d| d < b);
    divs
}
