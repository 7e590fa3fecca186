//! Representative families and the partial packings built from them.
//!
//! `Ŝ ⊆ S` q-represents `S` with respect to `E′` when for every `X ∈ S` and
//! every `Y ⊆ E′ \ X` with `|Y| <= q` some member of `Ŝ` avoids `Y`.
//!
//! Partial packings are grown by a sweep over the element order: at step
//! `u` every set whose minimum is `u` extends the level-`i` unions, and each
//! level is then reduced to a family that `w·(k-i)`-represents all unions of
//! `i` disjoint sets with minima `<= u`, with respect to the elements still
//! ahead of the sweep (`w = 3` for set packing, `w = 2` for 3D matching,
//! where only `E2 ∪ E3` counts).

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::hitting::{find_hitting_set, Limit};
use crate::model::{SetPacking, ThreeSetFamily, TripartiteFamily};
use crate::subset::{binomial, Subset};

/// Node limit for each hitting-set query made while reducing a sweep level.
/// A query that runs out keeps the candidate, which is always safe.
const SWEEP_NODE_LIMIT: u64 = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepFamily {
    pub base: Vec<Subset>,
    pub sub_universe: Subset,
    pub slack: usize,
    /// Indices into `base`, ascending.
    pub chosen: Vec<usize>,
}

impl RepFamily {
    pub fn members(&self) -> Vec<Subset> {
        self.chosen.iter().map(|&i| self.base[i]).collect()
    }
}

/// First `(X, Y)` for which no member of `chosen` avoids `Y`, found by
/// hitting-set search rather than by listing every `Y`.
pub fn representation_violation(
    base: &[Subset],
    chosen: &[Subset],
    sub_universe: Subset,
    slack: usize,
) -> Option<(Subset, Subset)> {
    for &x in base {
        let blocked: Vec<Subset> = chosen.iter().map(|&c| (c & sub_universe) - x).collect();
        if blocked.iter().any(|b| b.is_empty()) {
            continue;
        }
        if let Ok(Some(y)) = find_hitting_set(&blocked, slack, &mut Limit::unlimited()) {
            return Some((x, y));
        }
    }
    None
}

/// Indices of a representing subfamily: drop sets whose `E′`-part contains
/// another set's, then greedily drop sets in input order while the rest
/// still represents everything dropped so far.
pub(crate) fn reduce(
    family: &[Subset],
    sub: Subset,
    slack: usize,
    node_limit: Option<u64>,
) -> Vec<usize> {
    let mut order: Vec<usize> = (0..family.len()).collect();
    order.sort_by_key(|&i| (family[i] & sub).len());
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        let xi = family[i] & sub;
        if !kept.iter().any(|&j| (family[j] & sub).is_subset(xi)) {
            kept.push(i);
        }
    }
    kept.sort_unstable();

    let mut dropped: Vec<Subset> = Vec::new();
    let mut pos = 0;
    while pos < kept.len() {
        // each remaining set needs its own element of Y once the count is <= slack
        if kept.len() - 1 <= slack {
            break;
        }
        let j = kept[pos];
        let others: Vec<Subset> = kept
            .iter()
            .filter(|&&i| i != j)
            .map(|&i| family[i] & sub)
            .collect();
        let removable = dropped.iter().chain(std::iter::once(&family[j])).all(|&x| {
            let blocked: Vec<Subset> = others.iter().map(|&o| o - x).collect();
            let mut limit = match node_limit {
                Some(n) => Limit::nodes(n),
                None => Limit::unlimited(),
            };
            matches!(find_hitting_set(&blocked, slack, &mut limit), Ok(None))
        });
        if removable {
            dropped.push(family[j]);
            kept.remove(pos);
        } else {
            pos += 1;
        }
    }
    kept
}

/// A subfamily of `family` that `slack`-represents it with respect to
/// `sub_universe`, verified before it is returned.
pub fn compute_representative(
    family: &[Subset],
    sub_universe: Subset,
    slack: usize,
    budget: &Budget,
) -> Result<RepFamily> {
    let ys: u128 = (0..=slack.min(sub_universe.len()))
        .map(|i| binomial(sub_universe.len(), i))
        .fold(0u128, |a, b| a.saturating_add(b));
    budget.check(
        "representative family",
        ys.saturating_mul(family.len() as u128)
            .saturating_mul(family.len().max(1) as u128),
    )?;
    let mut chosen = reduce(family, sub_universe, slack, None);
    let members: Vec<Subset> = chosen.iter().map(|&i| family[i]).collect();
    if representation_violation(family, &members, sub_universe, slack).is_some() {
        // unreachable with exact queries; the whole family always represents itself
        chosen = (0..family.len()).collect();
    }
    Ok(RepFamily {
        base: family.to_vec(),
        sub_universe,
        slack,
        chosen,
    })
}

/// `round(βk)` with ties rounded down.
pub fn level_size(k: usize, beta_star: f64) -> usize {
    let v = (beta_star * k as f64 - 0.5 - 1e-9).ceil();
    if v <= 0.0 {
        0
    } else {
        (v as usize).min(k)
    }
}

/// Packings of equal size with their unions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingCollection {
    pub size: usize,
    pub packings: Vec<SetPacking>,
    pub unions: Vec<Subset>,
}

#[derive(Clone, Debug)]
pub(crate) struct Partial {
    pub union: Subset,
    pub sets: Vec<usize>,
}

/// Sweep state; see the module documentation.
pub(crate) struct Sweep<'a> {
    masks: &'a [Subset],
    by_min: Vec<Vec<usize>>,
    n: usize,
    k: usize,
    width: usize,
    fixed_protected: Option<Subset>,
    levels: Vec<Vec<Partial>>,
    next: usize,
}

impl<'a> Sweep<'a> {
    /// Levels `0..=top` over `n` elements for packings of target size `k`.
    /// With `fixed_protected` set (3D matching), representation is always
    /// with respect to that set and slack is `2(k-i)`.
    pub(crate) fn new(
        masks: &'a [Subset],
        n: usize,
        k: usize,
        top: usize,
        fixed_protected: Option<Subset>,
    ) -> Self {
        let mut by_min = vec![Vec::new(); n];
        for (i, &m) in masks.iter().enumerate() {
            if let Some(u) = m.min() {
                by_min[u].push(i);
            }
        }
        let mut levels = vec![Vec::new(); top + 1];
        levels[0].push(Partial {
            union: Subset::EMPTY,
            sets: Vec::new(),
        });
        Sweep {
            masks,
            by_min,
            n,
            k,
            width: if fixed_protected.is_some() { 2 } else { 3 },
            fixed_protected,
            levels,
            next: 0,
        }
    }

    pub(crate) fn done(&self) -> bool {
        self.next >= self.n
    }

    /// Element processed by the last call to [`Sweep::step`].
    pub(crate) fn position(&self) -> Option<usize> {
        self.next.checked_sub(1)
    }

    pub(crate) fn level(&self, i: usize) -> &[Partial] {
        &self.levels[i]
    }

    fn protected(&self, u: usize) -> Subset {
        self.fixed_protected
            .unwrap_or_else(|| Subset::range(u + 1, self.n))
    }

    pub(crate) fn step(&mut self) {
        let u = self.next;
        self.next += 1;
        if self.by_min[u].is_empty() {
            // nothing new; protected set shrinks but levels stay valid
            return;
        }
        let top = self.levels.len() - 1;
        let mut changed = vec![false; top + 1];
        for i in (0..top).rev() {
            let mut fresh = Vec::new();
            for p in &self.levels[i] {
                for &s in &self.by_min[u] {
                    if self.masks[s].is_disjoint(p.union) {
                        let mut sets = p.sets.clone();
                        sets.push(s);
                        fresh.push(Partial {
                            union: p.union | self.masks[s],
                            sets,
                        });
                    }
                }
            }
            if !fresh.is_empty() {
                self.levels[i + 1].extend(fresh);
                changed[i + 1] = true;
            }
        }
        let sub = self.protected(u);
        for i in 1..=top {
            if !changed[i] {
                continue;
            }
            let slack = self.width * (self.k - i);
            let unions: Vec<Subset> = self.levels[i].iter().map(|p| p.union).collect();
            let keep = reduce(&unions, sub, slack, Some(SWEEP_NODE_LIMIT));
            let old = std::mem::take(&mut self.levels[i]);
            self.levels[i] = keep.into_iter().map(|j| old[j].clone()).collect();
        }
    }
}

fn collection(partials: &[Partial], size: usize) -> PackingCollection {
    PackingCollection {
        size,
        packings: partials
            .iter()
            .map(|p| SetPacking::new(p.sets.clone()))
            .collect(),
        unions: partials.iter().map(|p| p.union).collect(),
    }
}

fn check_tradeoff_inputs(beta_star: f64, c: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&beta_star) {
        return Err(Error::Domain(format!("beta*={beta_star} outside [0, 1]")));
    }
    if !(c >= 1.0 && c.is_finite()) {
        return Err(Error::Domain(format!("c={c} must be >= 1")));
    }
    Ok(())
}

/// Packings of `m = round(β*k)` disjoint sets, all minima `<= pivot`, whose
/// unions `3(k-m)`-represent every such union with respect to
/// `{u > pivot}`. `c` does not affect the computation.
pub fn param_pack(
    family: &ThreeSetFamily,
    k: usize,
    beta_star: f64,
    c: f64,
    pivot: usize,
    budget: &Budget,
) -> Result<PackingCollection> {
    check_tradeoff_inputs(beta_star, c)?;
    if pivot >= family.n {
        return Err(Error::InvalidPivot(pivot));
    }
    budget.check_exact("partial packing", k, family.n)?;
    let m = level_size(k, beta_star);
    let masks = family.masks();
    let mut sweep = Sweep::new(&masks, family.n, k, m, None);
    while sweep.position() != Some(pivot) {
        sweep.step();
    }
    Ok(collection(sweep.level(m), m))
}

/// As [`param_pack`] for tripartite families: the pivot lies in `E1`, and
/// representation is with respect to `E2 ∪ E3` with slack `2(k-m)`.
pub fn param_match(
    family: &TripartiteFamily,
    k: usize,
    beta_star: f64,
    c: f64,
    pivot: usize,
    budget: &Budget,
) -> Result<PackingCollection> {
    check_tradeoff_inputs(beta_star, c)?;
    if pivot >= family.blocks[0] {
        return Err(Error::InvalidPivot(pivot));
    }
    budget.check_exact("partial matching", k, family.n())?;
    let m = level_size(k, beta_star);
    let masks = family.masks();
    let mut sweep = Sweep::new(&masks, family.n(), k, m, Some(family.tail()));
    while sweep.position() != Some(pivot) {
        sweep.step();
    }
    Ok(collection(sweep.level(m), m))
}
