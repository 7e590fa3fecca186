//! Exact and randomized solvers for "is there a packing of exactly `k` sets".
//!
//! The deterministic solvers run the representative-family sweep with top
//! level `k`. The randomized ones use colour coding: colour the relevant
//! elements with `3k` (or `2k`) colours and search for a packing whose sets
//! use pairwise disjoint colour classes.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::Budget;
use crate::error::Result;
use crate::model::{SetPacking, ThreeSetFamily, TripartiteFamily};
use crate::rep::Sweep;
use crate::subset::Subset;

/// Deterministic sweep; indices of `k` disjoint sets if any exist.
pub(crate) fn sweep_solve(
    masks: &[Subset],
    n: usize,
    k: usize,
    fixed_protected: Option<Subset>,
) -> Option<Vec<usize>> {
    if k == 0 {
        return Some(Vec::new());
    }
    if masks.len() < k {
        return None;
    }
    let mut sweep = Sweep::new(masks, n, k, k, fixed_protected);
    while !sweep.done() {
        sweep.step();
        if let Some(p) = sweep.level(k).first() {
            let mut sets = p.sets.clone();
            sets.sort_unstable();
            return Some(sets);
        }
    }
    None
}

pub fn exact_3set_pack(
    family: &ThreeSetFamily,
    k: usize,
    budget: &Budget,
) -> Result<Option<SetPacking>> {
    budget.check_exact("exact 3-set packing", k, family.n)?;
    Ok(sweep_solve(&family.masks(), family.n, k, None).map(SetPacking::new))
}

pub fn exact_3d_match(
    family: &TripartiteFamily,
    k: usize,
    budget: &Budget,
) -> Result<Option<SetPacking>> {
    budget.check_exact("exact 3D matching", k, family.n())?;
    Ok(sweep_solve(&family.masks(), family.n(), k, Some(family.tail())).map(SetPacking::new))
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|i| (i as f64).ln()).sum()
}

/// Trials for a per-trial success probability `colours! / colours^colours`
/// that bring the failure probability under 1/200.
fn trials_for(colours: usize) -> usize {
    if colours == 0 {
        return 1;
    }
    let ln_p = ln_factorial(colours) - colours as f64 * (colours as f64).ln();
    (200f64.ln() / ln_p.exp()).ceil() as usize
}

pub fn default_trials_3set(k: usize) -> usize {
    trials_for(3 * k)
}

pub fn default_trials_3dm(k: usize) -> usize {
    trials_for(2 * k)
}

/// Colour mask of `set` restricted to `coloured`, or `None` when two of its
/// coloured elements share a colour.
fn colour_mask(set: Subset, coloured: Subset, colour: &[u8]) -> Option<u64> {
    let mut mask = 0u64;
    for e in set & coloured {
        let bit = 1u64 << colour[e];
        if mask & bit != 0 {
            return None;
        }
        mask |= bit;
    }
    Some(mask)
}

/// One colour-coding trial for set packing: breadth-first over reachable
/// colour masks, one set per layer. Reachability of a mask does not depend
/// on the order sets were added, so one witness per mask suffices.
fn colourful_packing(
    masks: &[Subset],
    k: usize,
    colour: &[u8],
    coloured: Subset,
) -> Option<Vec<usize>> {
    let sets: Vec<(usize, u64)> = masks
        .iter()
        .enumerate()
        .filter_map(|(i, &m)| colour_mask(m, coloured, colour).map(|c| (i, c)))
        .collect();
    let mut layer: HashMap<u64, Vec<usize>> = HashMap::from([(0, Vec::new())]);
    for _ in 0..k {
        let mut next: HashMap<u64, Vec<usize>> = HashMap::new();
        let mut keys: Vec<&u64> = layer.keys().collect();
        keys.sort_unstable();
        for &used in keys {
            let witness = &layer[&used];
            for &(i, c) in &sets {
                if c & used != 0 {
                    continue;
                }
                next.entry(used | c).or_insert_with(|| {
                    let mut w = witness.clone();
                    w.push(i);
                    w
                });
            }
        }
        if next.is_empty() {
            return None;
        }
        layer = next;
    }
    layer.into_values().min().map(|mut w| {
        w.sort_unstable();
        w
    })
}

/// One colour-coding trial for 3D matching: only `E2 ∪ E3` is coloured and
/// the `E1` elements are handled by sweeping them in order.
fn colourful_matching(
    family: &TripartiteFamily,
    masks: &[Subset],
    k: usize,
    colour: &[u8],
) -> Option<Vec<usize>> {
    let tail = family.tail();
    let mut by_first: Vec<Vec<(usize, u64)>> = vec![Vec::new(); family.blocks[0]];
    for (i, &m) in masks.iter().enumerate() {
        if let Some(c) = colour_mask(m, tail, colour) {
            by_first[m.min().expect("triples are nonempty")].push((i, c));
        }
    }
    let mut reach: HashMap<u64, Vec<usize>> = HashMap::from([(0, Vec::new())]);
    for group in &by_first {
        if group.is_empty() {
            continue;
        }
        let mut keys: Vec<u64> = reach
            .iter()
            .filter(|(_, w)| w.len() < k)
            .map(|(&m, _)| m)
            .collect();
        keys.sort_unstable();
        for used in keys {
            for &(i, c) in group {
                if c & used == 0 && !reach.contains_key(&(used | c)) {
                    let mut w = reach[&used].clone();
                    w.push(i);
                    if w.len() == k {
                        w.sort_unstable();
                        return Some(w);
                    }
                    reach.insert(used | c, w);
                }
            }
        }
    }
    None
}

fn random_colouring(n: usize, colours: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(0..colours) as u8).collect()
}

/// Colour coding with `3k` colours; trial `t` uses seed `seed + t`. Any
/// returned packing is valid; a miss can be a false negative.
pub fn rand_3set_pack(
    family: &ThreeSetFamily,
    k: usize,
    seed: u64,
    trials: Option<usize>,
    budget: &Budget,
) -> Result<Option<SetPacking>> {
    budget.check_exact("randomized 3-set packing", k, family.n)?;
    Ok(rand_pack_masks(&family.masks(), family.n, k, seed, trials).map(SetPacking::new))
}

pub(crate) fn rand_pack_masks(
    masks: &[Subset],
    n: usize,
    k: usize,
    seed: u64,
    trials: Option<usize>,
) -> Option<Vec<usize>> {
    if k == 0 {
        return Some(Vec::new());
    }
    if masks.len() < k {
        return None;
    }
    let trials = trials.unwrap_or_else(|| default_trials_3set(k));
    let everything = Subset::full(n);
    (0..trials).find_map(|t| {
        let colour = random_colouring(n, 3 * k, seed.wrapping_add(t as u64));
        colourful_packing(masks, k, &colour, everything)
    })
}

/// Colour coding with `2k` colours on `E2 ∪ E3`.
pub fn rand_3d_match(
    family: &TripartiteFamily,
    k: usize,
    seed: u64,
    trials: Option<usize>,
    budget: &Budget,
) -> Result<Option<SetPacking>> {
    budget.check_exact("randomized 3D matching", k, family.n())?;
    if k == 0 {
        return Ok(Some(SetPacking::default()));
    }
    if family.len() < k {
        return Ok(None);
    }
    let masks = family.masks();
    let trials = trials.unwrap_or_else(|| default_trials_3dm(k));
    Ok((0..trials)
        .find_map(|t| {
            let colour = random_colouring(family.n(), 2 * k, seed.wrapping_add(t as u64));
            colourful_matching(family, &masks, k, &colour)
        })
        .map(SetPacking::new))
}
