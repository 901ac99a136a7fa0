//! Brute-force reference answers for small instances.
//!
//! Everything here enumerates linear extensions outright. It exists to
//! check the dynamic programs and is deliberately written without any of
//! their machinery.

use crate::diverse::{DiverseMode, DiverseQuery};
use crate::error::{Error, Result};
use crate::orders::{kt_distance_linear, CostInstance, LinearOrder, PartialOrder};

/// Largest element count enumerated by default.
pub const DEFAULT_MAX_N: usize = 10;
/// Largest number of solution sets examined by default.
pub const DEFAULT_MAX_SETS: u64 = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_n: usize,
    pub max_sets: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_n: DEFAULT_MAX_N,
            max_sets: DEFAULT_MAX_SETS,
        }
    }
}

impl OracleLimits {
    fn check_n(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::capability(format!(
                "brute force limited to {} elements, got {n}",
                self.max_n
            )));
        }
        Ok(())
    }
}

/// All linear extensions in lexicographic order.
pub fn enumerate_extensions(order: &PartialOrder) -> Result<Vec<LinearOrder>> {
    enumerate_extensions_with(order, &OracleLimits::default())
}

pub fn enumerate_extensions_with(
    order: &PartialOrder,
    limits: &OracleLimits,
) -> Result<Vec<LinearOrder>> {
    let n = order.n();
    limits.check_n(n)?;
    let mut out = Vec::new();
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(
        order: &PartialOrder,
        perm: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<LinearOrder>,
    ) {
        let n = used.len();
        if perm.len() == n {
            out.push(LinearOrder::new(perm.clone()).expect("permutation"));
            return;
        }
        for v in 0..n {
            if !used[v] && (0..n).all(|u| used[u] || u == v || !order.lt(u, v)) {
                used[v] = true;
                perm.push(v);
                rec(order, perm, used, out);
                perm.pop();
                used[v] = false;
            }
        }
    }
    rec(order, &mut perm, &mut used, &mut out);
    Ok(out)
}

/// Number of linear extensions, by dynamic programming over downsets.
pub fn count_extensions(order: &PartialOrder) -> Result<u128> {
    let n = order.n();
    if n > 24 {
        return Err(Error::capability(format!(
            "extension counting limited to 24 elements, got {n}"
        )));
    }
    let below: Vec<u32> = (0..n)
        .map(|v| {
            (0..n)
                .filter(|&u| order.lt(u, v))
                .fold(0, |m, u| m | (1 << u))
        })
        .collect();
    let mut ways = vec![0u128; 1 << n];
    ways[0] = 1;
    for set in 0..(1usize << n) {
        let w = ways[set];
        if w == 0 {
            continue;
        }
        for (v, &under) in below.iter().enumerate() {
            let bit = 1 << v;
            if set & bit == 0 && under as usize & !set == 0 {
                ways[set | bit] += w;
            }
        }
    }
    Ok(ways[(1 << n) - 1])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOptimum {
    pub cost: u64,
    /// Every optimal extension, sorted.
    pub optima: Vec<LinearOrder>,
}

pub fn oracle_optimum(instance: &CostInstance) -> Result<OracleOptimum> {
    oracle_optimum_with(instance, &OracleLimits::default())
}

pub fn oracle_optimum_with(
    instance: &CostInstance,
    limits: &OracleLimits,
) -> Result<OracleOptimum> {
    let all = enumerate_extensions_with(instance.base(), limits)?;
    let costs: Vec<u64> = all.iter().map(|t| instance.extension_cost(t)).collect();
    let cost = *costs.iter().min().expect("every order has an extension");
    let optima = all
        .into_iter()
        .zip(costs)
        .filter(|&(_, c)| c == cost)
        .map(|(t, _)| t)
        .collect();
    Ok(OracleOptimum { cost, optima })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleDiverse {
    pub optimum: u64,
    pub found: bool,
    /// Best total pairwise distance among sets meeting the scatteredness
    /// threshold (the answer when maximizing).
    pub best_diversity: Option<u64>,
    /// Best minimum pairwise distance over all sets.
    pub best_scatter: Option<u64>,
    /// Number of extensions within budget.
    pub candidates: usize,
}

/// Answers a diverse query by trying every set (or, without the
/// distinctness requirement, multiset) of `r` extensions within budget.
pub fn oracle_diverse(instance: &CostInstance, query: &DiverseQuery) -> Result<OracleDiverse> {
    oracle_diverse_with(instance, query, &OracleLimits::default())
}

pub fn oracle_diverse_with(
    instance: &CostInstance,
    query: &DiverseQuery,
    limits: &OracleLimits,
) -> Result<OracleDiverse> {
    query.validate()?;
    let all = enumerate_extensions_with(instance.base(), limits)?;
    let optimum = all
        .iter()
        .map(|t| instance.extension_cost(t))
        .min()
        .expect("non-empty");
    let pool: Vec<LinearOrder> = all
        .into_iter()
        .filter(|t| instance.extension_cost(t) <= optimum.saturating_add(query.delta))
        .collect();
    let r = query.r;
    let repeat = !query.distinct;
    let sets = set_count(pool.len() as u64, r as u64, repeat);
    if sets > limits.max_sets {
        return Err(Error::capability(format!(
            "brute force would examine {sets} solution sets, limit {}",
            limits.max_sets
        )));
    }
    let dist: Vec<Vec<u64>> = pool
        .iter()
        .map(|a| {
            pool.iter()
                .map(|b| kt_distance_linear(a, b).expect("same size"))
                .collect()
        })
        .collect();
    let s = query.effective_s();
    let mut best_diversity: Option<u64> = None;
    let mut best_scatter: Option<u64> = None;
    let mut found = false;
    let mut pick: Vec<usize> = if repeat { vec![0; r] } else { (0..r).collect() };
    let len = pool.len();
    if r <= len || (repeat && len > 0) {
        loop {
            let mut total = 0;
            let mut min = u64::MAX;
            for i in 0..r {
                for j in i + 1..r {
                    let x = dist[pick[i]][pick[j]];
                    total += x;
                    min = min.min(x);
                }
            }
            best_scatter = best_scatter.max(Some(min));
            if min >= s {
                best_diversity = best_diversity.max(Some(total));
                if query.mode == DiverseMode::Decide && total >= query.d {
                    found = true;
                    break;
                }
            }
            if !advance(&mut pick, len, repeat) {
                break;
            }
        }
    }
    if query.mode == DiverseMode::Maximize {
        found = best_diversity.is_some();
    }
    Ok(OracleDiverse {
        optimum,
        found,
        best_diversity,
        best_scatter,
        candidates: len,
    })
}

fn advance(pick: &mut [usize], len: usize, repeat: bool) -> bool {
    let r = pick.len();
    for k in (0..r).rev() {
        let max = if repeat { len - 1 } else { len - r + k };
        if pick[k] < max {
            pick[k] += 1;
            for t in k + 1..r {
                pick[t] = if repeat { pick[k] } else { pick[t - 1] + 1 };
            }
            return true;
        }
    }
    false
}

fn set_count(n: u64, r: u64, repeat: bool) -> u64 {
    let top = if repeat { (n + r).saturating_sub(1) } else { n };
    if r > top {
        return 0;
    }
    let mut c: u128 = 1;
    for i in 0..r {
        c = c * u128::from(top - i) / u128::from(i + 1);
        if c > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    c as u64
}
