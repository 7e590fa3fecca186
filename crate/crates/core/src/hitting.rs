//! Bounded hitting-set search. Both the universal-set verifier and the
//! representative-family checks reduce to "is there a set of at most `r`
//! elements meeting every set in this list?".

use crate::subset::Subset;

/// Search was cut off by its node limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Aborted;

/// Node counter; `None` means unlimited.
pub(crate) struct Limit(Option<u64>);

impl Limit {
    pub(crate) fn unlimited() -> Self {
        Limit(None)
    }

    pub(crate) fn nodes(n: u64) -> Self {
        Limit(Some(n))
    }

    fn tick(&mut self) -> Result<(), Aborted> {
        match &mut self.0 {
            None => Ok(()),
            Some(0) => Err(Aborted),
            Some(n) => {
                *n -= 1;
                Ok(())
            }
        }
    }
}

/// Drops every set that contains another set of the list; a hitting set of
/// the minimal sets hits them all.
pub(crate) fn minimal_sets(sets: &[Subset]) -> Vec<Subset> {
    let mut v: Vec<Subset> = sets.to_vec();
    v.sort_unstable_by_key(|s| (s.len(), s.bits()));
    v.dedup();
    let mut out: Vec<Subset> = Vec::with_capacity(v.len());
    for s in v {
        if !out.iter().any(|m| m.is_subset(s)) {
            out.push(s);
        }
    }
    out
}

/// A set of at most `r` elements meeting every set of `sets`, if one exists.
pub(crate) fn find_hitting_set(
    sets: &[Subset],
    r: usize,
    limit: &mut Limit,
) -> Result<Option<Subset>, Aborted> {
    let sets = minimal_sets(sets);
    search(&sets, r, limit)
}

fn search(sets: &[Subset], r: usize, limit: &mut Limit) -> Result<Option<Subset>, Aborted> {
    limit.tick()?;
    if sets.is_empty() {
        return Ok(Some(Subset::EMPTY));
    }
    if r == 0 || sets.iter().any(|s| s.is_empty()) {
        return Ok(None);
    }
    // Pairwise disjoint sets each need their own element.
    let mut covered = Subset::EMPTY;
    let mut disjoint = 0;
    let mut branch = sets[0];
    for &s in sets {
        if s.is_disjoint(covered) {
            covered |= s;
            disjoint += 1;
        }
        if s.len() < branch.len() {
            branch = s;
        }
    }
    if disjoint > r {
        return Ok(None);
    }
    let mut excluded = Subset::EMPTY;
    for e in branch {
        let rest: Vec<Subset> = sets
            .iter()
            .filter(|s| !s.contains(e))
            .map(|&s| s - excluded)
            .collect();
        if let Some(h) = search(&rest, r - 1, limit)? {
            return Ok(Some(h.with(e)));
        }
        excluded.insert(e);
    }
    Ok(None)
}

/// Lexicographically first `Y ⊆ allowed` with exactly `size` elements that
/// meets every set of `sets`.
pub(crate) fn lex_first_hitting_set(
    sets: &[Subset],
    allowed: Subset,
    size: usize,
) -> Option<Subset> {
    let sets: Vec<Subset> = minimal_sets(&sets.iter().map(|&s| s & allowed).collect::<Vec<_>>());
    lex_first(&sets, allowed, size)
}

fn lex_first(sets: &[Subset], allowed: Subset, size: usize) -> Option<Subset> {
    if allowed.len() < size {
        return None;
    }
    if size == 0 {
        return sets.is_empty().then_some(Subset::EMPTY);
    }
    for e in allowed {
        let later = allowed - Subset::full(e + 1);
        if later.len() < size - 1 {
            break;
        }
        let rest: Vec<Subset> = sets
            .iter()
            .filter(|s| !s.contains(e))
            .map(|&s| s & later)
            .collect();
        let feasible = matches!(
            search(&minimal_sets(&rest), size - 1, &mut Limit::unlimited()),
            Ok(Some(_))
        );
        if feasible {
            return lex_first(&rest, later, size - 1).map(|y| y.with(e));
        }
    }
    None
}
