//! Approximate lopsided universal sets.
//!
//! A family over `0..n` is `(n,k,p,α)`-universal when for every `X` of size
//! `p` and every `Y` of size `k-p` disjoint from `X`, some member `F` keeps at
//! least `⌈αp⌉` elements of `X` and avoids `Y` entirely. Construction is
//! randomized with exhaustive verification; larger universes are reached by
//! hashing into `k²` elements and by composing narrow families over
//! consecutive blocks.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::hitting::{find_hitting_set, lex_first_hitting_set, Limit};
use crate::model::required_size;
use crate::subset::{binomial, check_universe, Combinations, Subset};

/// Number of seeds tried before a construction gives up.
pub const RETRY_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniversalParams {
    pub n: usize,
    pub k: usize,
    pub p: usize,
    pub alpha: f64,
}

impl UniversalParams {
    pub fn new(n: usize, k: usize, p: usize, alpha: f64) -> Result<Self> {
        check_universe(n)?;
        if !(p <= k && k <= n) {
            return Err(Error::Domain(format!(
                "need 0 <= p <= k <= n, got n={n} k={k} p={p}"
            )));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Domain(format!("alpha={alpha} outside (0, 1]")));
        }
        Ok(UniversalParams { n, k, p, alpha })
    }

    /// Minimum overlap `⌈αp⌉` a member must have with `X`.
    pub fn threshold(&self) -> usize {
        required_size(self.p, self.alpha)
    }

    /// Number of `(X, Y)` pairs an exhaustive check ranges over.
    pub fn verification_cost(&self) -> u128 {
        binomial(self.n, self.p).saturating_mul(binomial(self.n - self.p, self.k - self.p))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    BaseRandom,
    HashLift,
    PartitionCompose,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Base,
    HashLift,
    Partition,
    Pipeline,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniversalFamily {
    pub params: UniversalParams,
    pub members: Vec<Subset>,
    pub provenance: Provenance,
    pub seed: u64,
    pub verified: bool,
}

impl UniversalFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// A pair `(X, Y)` that no member separates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub x: Subset,
    pub y: Subset,
}

/// `Ok(None)` when the family is universal for its parameters, otherwise the
/// lexicographically first violating pair (ordered by `X`, then `Y`).
pub fn verify_universal(
    family: &UniversalFamily,
    budget: &Budget,
) -> Result<Option<Counterexample>> {
    verify_members(&family.params, &family.members, budget)
}

pub(crate) fn verify_members(
    params: &UniversalParams,
    members: &[Subset],
    budget: &Budget,
) -> Result<Option<Counterexample>> {
    budget.check("universal-set verification", params.verification_cost())?;
    let need = params.threshold();
    let q = params.k - params.p;
    let full = Subset::full(params.n);

    // For a fixed X the members that keep enough of X must not all be hit by
    // some Y of size q drawn from the rest of the universe.
    let violation = |x: Subset| -> Option<Counterexample> {
        let rest = full - x;
        let mut blocked: Vec<Subset> = Vec::new();
        for &f in members {
            if (f & x).len() >= need {
                let outside = f & rest;
                if outside.is_empty() {
                    return None;
                }
                blocked.push(outside);
            }
        }
        let hit = find_hitting_set(&blocked, q, &mut Limit::unlimited()).ok()??;
        debug_assert!(hit.len() <= q);
        let y = lex_first_hitting_set(&blocked, rest, q)?;
        Some(Counterexample { x, y })
    };

    const CHUNK: usize = 2048;
    let mut xs = Combinations::new(full, params.p);
    loop {
        let chunk: Vec<Subset> = xs.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return Ok(None);
        }
        if let Some(cx) = chunk
            .par_iter()
            .filter_map(|&x| violation(x))
            .find_first(|_| true)
        {
            return Ok(Some(cx));
        }
    }
}

/// Derives an independent sub-seed for one stage of a composite construction.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Member count of the randomized construction:
/// `k^k / ((αp)^{αp} (k-αp)^{k-αp}) / C(p, αp) · (k+1) · ln n`, with the
/// binomial at real argument taken through the gamma function.
pub fn base_member_bound(params: &UniversalParams) -> f64 {
    let (k, p) = (params.k as f64, params.p as f64);
    let ap = params.alpha * p;
    let ln_ratio = xlnx(k) - xlnx(ap) - xlnx(k - ap);
    let ln_binom = ln_gamma(p + 1.0) - ln_gamma(ap + 1.0) - ln_gamma(p - ap + 1.0);
    (ln_ratio - ln_binom).exp() * (k + 1.0) * (params.n as f64).ln()
}

/// Probability that one random member separates a fixed `(X, Y)` pair.
fn pair_success_probability(params: &UniversalParams) -> f64 {
    let (k, p) = (params.k, params.p);
    if k == 0 {
        return 1.0;
    }
    let q = params.alpha * p as f64 / k as f64;
    let need = params.threshold();
    let mut tail = 0.0;
    for j in need..=p {
        let ln_term =
            ln_gamma(p as f64 + 1.0) - ln_gamma(j as f64 + 1.0) - ln_gamma((p - j) as f64 + 1.0)
                + if j == 0 { 0.0 } else { j as f64 * q.ln() }
                + if p - j == 0 {
                    0.0
                } else {
                    (p - j) as f64 * (1.0 - q).ln()
                };
        tail += ln_term.exp();
    }
    let miss_y = if k == p {
        1.0
    } else {
        (1.0 - q).powi((k - p) as i32)
    };
    tail * miss_y
}

/// Number of members drawn per attempt. When `αp` is fractional the
/// threshold `⌈αp⌉` exceeds the expected overlap and the closed form
/// undercounts, so the count implied by the exact per-pair success
/// probability is used when larger.
pub fn base_member_count(params: &UniversalParams) -> usize {
    let formula = base_member_bound(params);
    let ap = params.alpha * params.p as f64;
    let t = if (ap - ap.round()).abs() < 1e-9 {
        formula
    } else {
        let pr = pair_success_probability(params);
        let exact = (params.k as f64 + 1.0) * (params.n as f64).ln() / pr;
        formula.max(exact)
    };
    let t = (t - 1e-9).ceil();
    if t.is_finite() && t >= 1.0 {
        t.min(usize::MAX as f64) as usize
    } else {
        1
    }
}

fn draw_members(params: &UniversalParams, count: usize, seed: u64) -> Vec<Subset> {
    let q = params.alpha * params.p as f64 / params.k as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let f: Subset = (0..params.n).filter(|_| rng.gen::<f64>() < q).collect();
        if seen.insert(f) {
            out.push(f);
        }
    }
    out
}

fn trivial_family(params: UniversalParams, provenance: Provenance, seed: u64) -> UniversalFamily {
    UniversalFamily {
        params,
        members: vec![Subset::EMPTY],
        provenance,
        seed,
        verified: true,
    }
}

/// Randomized construction: each element joins each member independently
/// with probability `αp/k`. Every attempt is verified exhaustively; failed
/// attempts move on to the next seed. When verification is over budget the
/// first draw is returned with `verified = false`.
pub fn construct_base(
    params: UniversalParams,
    seed: u64,
    budget: &Budget,
) -> Result<UniversalFamily> {
    if params.k == 0 {
        return Ok(trivial_family(params, Provenance::BaseRandom, seed));
    }
    let count = base_member_count(&params);
    budget.check_members("base universal set", count as u128)?;
    let verifiable = budget.allows(params.verification_cost());
    for attempt in 0..RETRY_CAP {
        let s = seed.wrapping_add(attempt as u64);
        let members = draw_members(&params, count, s);
        let mut fam = UniversalFamily {
            params,
            members,
            provenance: Provenance::BaseRandom,
            seed: s,
            verified: false,
        };
        if !verifiable {
            return Ok(fam);
        }
        if verify_universal(&fam, budget)?.is_none() {
            fam.verified = true;
            return Ok(fam);
        }
    }
    Err(Error::RetryCapExceeded {
        what: "base universal set",
        attempts: RETRY_CAP,
    })
}

/// Maps from `0..n` into `0..range` such that every `k`-subset is mapped
/// injectively by at least one of them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectFunctionFamily {
    pub n: usize,
    pub k: usize,
    pub range: usize,
    pub functions: Vec<Vec<u16>>,
    pub verified: bool,
}

fn injective_on(f: &[u16], s: Subset) -> bool {
    let mut seen = Subset::EMPTY;
    for e in s {
        let v = f[e] as usize;
        if seen.contains(v) {
            return false;
        }
        seen.insert(v);
    }
    true
}

/// Random functions into `k²` values, added on demand while sweeping all
/// `k`-subsets until each has an injective function. Falls back to a
/// fixed-size random draw, marked unverified, when the sweep is over budget.
pub fn build_perfect_family(
    n: usize,
    k: usize,
    seed: u64,
    budget: &Budget,
) -> Result<PerfectFunctionFamily> {
    check_universe(n)?;
    if k > n {
        return Err(Error::Domain(format!("k={k} exceeds n={n}")));
    }
    let range = (k * k).max(1);
    if n <= range {
        return Ok(PerfectFunctionFamily {
            n,
            k,
            range,
            functions: vec![(0..n as u16).collect()],
            verified: true,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || -> Vec<u16> { (0..n).map(|_| rng.gen_range(0..range) as u16).collect() };

    if !budget.allows(binomial(n, k)) {
        // probability a random function is injective on a fixed k-set
        let ln_inj: f64 = (0..k)
            .map(|i| ((range - i) as f64 / range as f64).ln())
            .sum();
        let p_inj = ln_inj.exp();
        let m = ((k as f64 * (n as f64).ln() + 3.0) / -(1.0 - p_inj).ln()).ceil() as usize;
        budget.check_members("perfect hash family", m as u128)?;
        return Ok(PerfectFunctionFamily {
            n,
            k,
            range,
            functions: (0..m.max(1)).map(|_| draw()).collect(),
            verified: false,
        });
    }

    let mut functions: Vec<Vec<u16>> = Vec::new();
    const DRAWS_PER_SUBSET: usize = 10_000;
    for s in Combinations::new(Subset::full(n), k) {
        if functions.iter().any(|f| injective_on(f, s)) {
            continue;
        }
        let mut found = false;
        for _ in 0..DRAWS_PER_SUBSET {
            let f = draw();
            if injective_on(&f, s) {
                functions.push(f);
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::RetryCapExceeded {
                what: "perfect hash family",
                attempts: DRAWS_PER_SUBSET,
            });
        }
    }
    Ok(PerfectFunctionFamily {
        n,
        k,
        range,
        functions,
        verified: true,
    })
}

/// All preimages `f⁻¹(F̂)` of inner members under the perfect family.
pub fn lift_by_hashing(
    inner: &UniversalFamily,
    perfect: &PerfectFunctionFamily,
    n: usize,
) -> Result<UniversalFamily> {
    let ip = inner.params;
    if perfect.n != n {
        return Err(Error::ParameterMismatch(format!(
            "perfect family is over {} elements, target universe has {n}",
            perfect.n
        )));
    }
    if ip.k != perfect.k {
        return Err(Error::ParameterMismatch(format!(
            "inner family has k={}, perfect family has k={}",
            ip.k, perfect.k
        )));
    }
    if ip.n != perfect.range {
        return Err(Error::ParameterMismatch(format!(
            "inner family is over {} elements, perfect family maps into {}",
            ip.n, perfect.range
        )));
    }
    let params = UniversalParams::new(n, ip.k, ip.p, ip.alpha)?;
    if ip.k == 0 {
        return Ok(trivial_family(params, Provenance::HashLift, inner.seed));
    }
    let mut seen = HashSet::new();
    let mut members = Vec::new();
    for f in &perfect.functions {
        for &hat in &inner.members {
            let pre: Subset = (0..n).filter(|&e| hat.contains(f[e] as usize)).collect();
            if seen.insert(pre) {
                members.push(pre);
            }
        }
    }
    Ok(UniversalFamily {
        params,
        members,
        provenance: Provenance::HashLift,
        seed: inner.seed,
        verified: inner.verified && perfect.verified,
    })
}

/// Width `s = ⌊(log₂ k)²⌋` of the narrow families, clamped to `1..=k`.
pub fn default_block_width(k: usize) -> usize {
    if k <= 1 {
        return 1;
    }
    let l = (k as f64).log2();
    ((l * l).floor() as usize).clamp(1, k)
}

/// Non-decreasing boundary vectors `0 <= b_1 <= … <= b_{t-1} <= n`.
fn partitions(n: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, left: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for b in lo..=n {
            cur.push(b);
            rec(n, left - 1, b, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, t.saturating_sub(1), 0, &mut Vec::new(), &mut out);
    out
}

/// Tuples `(p_1, …, p_t)` with `0 <= p_i <= s` summing to `p`.
fn composition_tuples(p: usize, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn rec(p: usize, s: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            if p == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if p > s * left {
            return;
        }
        for pi in 0..=s.min(p) {
            cur.push(pi);
            rec(p - pi, s, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(p, s, t, &mut Vec::new(), &mut out);
    out
}

/// Union over all consecutive partitions into `t = ⌈k/s⌉` blocks and all
/// tuples `(p_i)` of the blockwise compositions `∪ (F̂_{p_i} ∩ E_i)`, where
/// `F̂_{p̂}` is `(n, s, p̂, α)`-universal and supplied by `builder`.
pub fn compose_by_partition(
    builder: &mut dyn FnMut(usize) -> Result<UniversalFamily>,
    params: UniversalParams,
    width: Option<usize>,
    budget: &Budget,
) -> Result<UniversalFamily> {
    let UniversalParams { n, k, p, alpha } = params;
    if k == 0 {
        return Ok(trivial_family(params, Provenance::PartitionCompose, 0));
    }
    let s = width.unwrap_or_else(|| default_block_width(k));
    if s == 0 || s > k {
        return Err(Error::Domain(format!("block width {s} outside 1..={k}")));
    }
    let t = k.div_ceil(s);

    let mut narrow: Vec<UniversalFamily> = Vec::new();
    for ph in 0..=s.min(p) {
        let fam = builder(ph)?;
        let fp = fam.params;
        if fp.n != n || fp.k != s || fp.p != ph || (fp.alpha - alpha).abs() > 1e-12 {
            return Err(Error::ParameterMismatch(format!(
                "builder returned ({}, {}, {}, {}) for ({n}, {s}, {ph}, {alpha})",
                fp.n, fp.k, fp.p, fp.alpha
            )));
        }
        narrow.push(fam);
    }

    let parts = partitions(n, t);
    let tuples = composition_tuples(p, s, t);
    let per_partition: u128 = tuples
        .iter()
        .map(|tp| {
            tp.iter().fold(1u128, |acc, &pi| {
                acc.saturating_mul(narrow[pi].len() as u128)
            })
        })
        .fold(0u128, |a, b| a.saturating_add(b));
    budget.check(
        "partition composition",
        per_partition.saturating_mul(parts.len() as u128),
    )?;

    let mut seen = HashSet::new();
    let mut members = Vec::new();
    for bounds in &parts {
        let mut cuts = vec![0];
        cuts.extend_from_slice(bounds);
        cuts.push(n);
        let blocks: Vec<Subset> = cuts.windows(2).map(|w| Subset::range(w[0], w[1])).collect();
        for tp in &tuples {
            // restricted families, deduplicated
            let restricted: Vec<Vec<Subset>> = blocks
                .iter()
                .zip(tp)
                .map(|(&b, &pi)| {
                    let mut local = HashSet::new();
                    narrow[pi]
                        .members
                        .iter()
                        .map(|&f| f & b)
                        .filter(|f| local.insert(*f))
                        .collect()
                })
                .collect();
            let mut acc = vec![Subset::EMPTY];
            for part in &restricted {
                let mut next = Vec::with_capacity(acc.len() * part.len());
                for &a in &acc {
                    for &f in part {
                        next.push(a | f);
                    }
                }
                acc = next;
            }
            for f in acc {
                if seen.insert(f) {
                    members.push(f);
                }
            }
        }
        budget.check_members("partition composition", members.len() as u128)?;
    }
    Ok(UniversalFamily {
        params,
        members,
        provenance: Provenance::PartitionCompose,
        seed: narrow[0].seed,
        verified: narrow.iter().all(|f| f.verified),
    })
}

/// Hash-lift stage: an `(N, k, p, α)` family from a base family over `k²`
/// elements and an `(N, k)`-perfect family.
fn lifted_base(params: UniversalParams, seed: u64, budget: &Budget) -> Result<UniversalFamily> {
    let UniversalParams { n, k, p, alpha } = params;
    let inner = construct_base(
        UniversalParams::new((k * k).max(1), k, p, alpha)?,
        derive_seed(seed, 1),
        budget,
    )?;
    let perfect = build_perfect_family(n, k, derive_seed(seed, 2), budget)?;
    lift_by_hashing(&inner, &perfect, n)
}

fn unchecked(
    params: UniversalParams,
    strategy: Strategy,
    seed: u64,
    budget: &Budget,
) -> Result<UniversalFamily> {
    let UniversalParams { n, k, p, alpha } = params;
    match strategy {
        Strategy::Base => construct_base(params, seed, budget),
        Strategy::HashLift => lifted_base(params, seed, budget),
        Strategy::Partition => {
            let s = default_block_width(k);
            compose_by_partition(
                &mut |ph| {
                    construct_base(
                        UniversalParams::new(n, s, ph, alpha)?,
                        derive_seed(seed, 10 + ph as u64),
                        budget,
                    )
                },
                params,
                None,
                budget,
            )
        }
        Strategy::Pipeline => {
            // base -> hash lift -> partition -> hash lift
            let kk = (k * k).max(1);
            let s = default_block_width(k);
            let middle = compose_by_partition(
                &mut |ph| {
                    lifted_base(
                        UniversalParams::new(kk, s, ph, alpha)?,
                        derive_seed(seed, 20 + ph as u64),
                        budget,
                    )
                },
                UniversalParams::new(kk, k, p, alpha)?,
                None,
                budget,
            )?;
            let perfect = build_perfect_family(n, k, derive_seed(seed, 3), budget)?;
            lift_by_hashing(&middle, &perfect, n)
        }
    }
}

/// Builds a family with the chosen strategy and verifies the final result
/// when the budget allows; a failed final check retries with the next seed.
pub fn build_universal(
    params: UniversalParams,
    strategy: Strategy,
    seed: u64,
    budget: &Budget,
) -> Result<UniversalFamily> {
    if params.k == 0 {
        let prov = match strategy {
            Strategy::Base => Provenance::BaseRandom,
            Strategy::Partition => Provenance::PartitionCompose,
            _ => Provenance::HashLift,
        };
        return Ok(trivial_family(params, prov, seed));
    }
    let verifiable = budget.allows(params.verification_cost());
    for attempt in 0..RETRY_CAP {
        let s = seed.wrapping_add(attempt as u64);
        let mut fam = unchecked(params, strategy, s, budget)?;
        fam.seed = s;
        if strategy == Strategy::Base || !verifiable {
            return Ok(fam);
        }
        if verify_universal(&fam, budget)?.is_none() {
            fam.verified = true;
            return Ok(fam);
        }
    }
    Err(Error::RetryCapExceeded {
        what: "universal set",
        attempts: RETRY_CAP,
    })
}
