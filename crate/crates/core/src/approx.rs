//! Bounded-swap local search for 3-set packing.
//!
//! Starting from a greedy maximal packing, repeatedly look for `r <= s`
//! chosen sets whose removal lets `r + 1` pairwise disjoint sets in, trying
//! the smallest `r` first. Candidates are scanned in input order.

use crate::model::SetPacking;
use crate::subset::Subset;

pub const DEFAULT_SWAP_SIZE: usize = 3;

/// Local search over sets given as bit masks; returns indices, ascending.
pub fn local_search(sets: &[Subset], swap_size: usize) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    extend_greedily(sets, &mut chosen);
    while improve(sets, &mut chosen, swap_size) {
        extend_greedily(sets, &mut chosen);
    }
    chosen.sort_unstable();
    chosen
}

/// Local search over a list of 3-sets (plain or tripartite).
pub fn local_search_pack(sets: &[[usize; 3]], swap_size: usize) -> SetPacking {
    let masks: Vec<Subset> = sets.iter().map(|s| s.iter().collect()).collect();
    SetPacking::new(local_search(&masks, swap_size))
}

fn union_of(sets: &[Subset], idx: impl IntoIterator<Item = usize>) -> Subset {
    idx.into_iter().fold(Subset::EMPTY, |u, i| u | sets[i])
}

fn extend_greedily(sets: &[Subset], chosen: &mut Vec<usize>) {
    let mut used = union_of(sets, chosen.iter().copied());
    for (i, &s) in sets.iter().enumerate() {
        if s.is_disjoint(used) && !chosen.contains(&i) {
            chosen.push(i);
            used |= s;
        }
    }
    chosen.sort_unstable();
}

fn improve(sets: &[Subset], chosen: &mut Vec<usize>, swap_size: usize) -> bool {
    for r in 1..=swap_size.min(chosen.len()) {
        let mut removal = Vec::with_capacity(r);
        if try_removals(sets, chosen, r, 0, &mut removal) {
            return true;
        }
    }
    false
}

/// Enumerates removal sets of `r` chosen positions in lexicographic order.
fn try_removals(
    sets: &[Subset],
    chosen: &mut Vec<usize>,
    r: usize,
    from: usize,
    removal: &mut Vec<usize>,
) -> bool {
    if removal.len() == r {
        let kept: Vec<usize> = chosen
            .iter()
            .enumerate()
            .filter(|(pos, _)| !removal.contains(pos))
            .map(|(_, &i)| i)
            .collect();
        let blocked = union_of(sets, kept.iter().copied());
        let candidates: Vec<usize> = (0..sets.len())
            .filter(|i| sets[*i].is_disjoint(blocked) && !kept.contains(i))
            .collect();
        if candidates.len() <= r {
            return false;
        }
        let mut picked = Vec::with_capacity(r + 1);
        if pick_disjoint(sets, &candidates, 0, r + 1, Subset::EMPTY, &mut picked) {
            let mut next = kept;
            next.extend(picked);
            next.sort_unstable();
            *chosen = next;
            return true;
        }
        return false;
    }
    for pos in from..chosen.len() {
        removal.push(pos);
        if try_removals(sets, chosen, r, pos + 1, removal) {
            return true;
        }
        removal.pop();
    }
    false
}

fn pick_disjoint(
    sets: &[Subset],
    candidates: &[usize],
    from: usize,
    need: usize,
    used: Subset,
    picked: &mut Vec<usize>,
) -> bool {
    if picked.len() == need {
        return true;
    }
    if candidates.len() - from < need - picked.len() {
        return false;
    }
    for j in from..candidates.len() {
        let i = candidates[j];
        if sets[i].is_disjoint(used) {
            picked.push(i);
            if pick_disjoint(sets, candidates, j + 1, need, used | sets[i], picked) {
                return true;
            }
            picked.pop();
        }
    }
    false
}
