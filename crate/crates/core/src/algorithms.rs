//! The composed tradeoff procedures and the dispatchers choosing among them.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{local_search, DEFAULT_SWAP_SIZE};
use crate::bipartite::{max_center_left_p2, BipartiteGraph};
use crate::budget::Budget;
use crate::calc::{self, Branch, ExactScheme, TableKind};
use crate::error::{Error, Result};
use crate::exact::{rand_pack_masks, sweep_solve};
use crate::model::{
    required_size, Graph, P2Packing, P2Path, SetPacking, ThreeSetFamily, TripartiteFamily,
};
use crate::oracles::Solution;
use crate::rep::{level_size, Sweep};
use crate::subset::Subset;
use crate::universal::{build_universal, derive_seed, Strategy, UniversalParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Procedure {
    Pack1,
    Pack2,
    SetPack1,
    SpRand1,
    Match1,
    MatchRand1,
    Match2,
}

/// Every algorithm name accepted by [`solve`], dispatchers included.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Pack,
    Pack1,
    Pack2,
    SetPack,
    SetPack1,
    SpRand,
    SpRand1,
    Match,
    Match1,
    MatchRand,
    MatchRand1,
    Match2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 12] = [
        Algorithm::Pack,
        Algorithm::Pack1,
        Algorithm::Pack2,
        Algorithm::SetPack,
        Algorithm::SetPack1,
        Algorithm::SpRand,
        Algorithm::SpRand1,
        Algorithm::Match,
        Algorithm::Match1,
        Algorithm::MatchRand,
        Algorithm::MatchRand1,
        Algorithm::Match2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Pack => "pack",
            Algorithm::Pack1 => "pack1",
            Algorithm::Pack2 => "pack2",
            Algorithm::SetPack => "setpack",
            Algorithm::SetPack1 => "setpack1",
            Algorithm::SpRand => "sprand",
            Algorithm::SpRand1 => "sprand1",
            Algorithm::Match => "match",
            Algorithm::Match1 => "match1",
            Algorithm::MatchRand => "matchrand",
            Algorithm::MatchRand1 => "matchrand1",
            Algorithm::Match2 => "match2",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub seed: u64,
    pub epsilon: f64,
    /// Fixed `c` for the representative-family procedures; `None` uses the
    /// optimizing value.
    pub c: Option<f64>,
    pub swap_size: usize,
    /// Worker threads; `None` runs serially.
    pub threads: Option<usize>,
    /// Colour-coding trials; `None` uses the default for `k`.
    pub trials: Option<usize>,
    pub strategy: Strategy,
    pub budget: Budget,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            seed: 0,
            epsilon: 0.0,
            c: None,
            swap_size: DEFAULT_SWAP_SIZE,
            threads: None,
            trials: None,
            strategy: Strategy::Base,
            budget: Budget::default(),
        }
    }
}

impl SolveConfig {
    fn c_or_default(&self, table: TableKind, alpha: f64) -> Result<f64> {
        match self.c {
            Some(c) => Ok(c),
            None => calc::base_second(table, alpha, self.epsilon, None).map(|o| o.c_hat),
        }
    }

    fn pool<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads.unwrap_or(1).max(1))
            .build()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
        Ok(pool.install(f))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOutcome {
    pub procedure: Procedure,
    #[serde(flatten)]
    pub solution: Solution,
    pub target: usize,
    pub met: bool,
    pub predicted_base: f64,
    pub elapsed_ms: f64,
}

fn outcome(
    procedure: Procedure,
    solution: Solution,
    target: usize,
    predicted_base: f64,
    start: Instant,
) -> SolveOutcome {
    SolveOutcome {
        procedure,
        met: solution.len() >= target,
        solution,
        target,
        predicted_base,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn check_tradeoff_alpha(alpha: f64) -> Result<()> {
    if (0.75..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha={alpha} outside [0.75, 1]")))
    }
}

/// Universal-set procedure for P2-packing.
pub fn pack1(g: &Graph, k: usize, alpha: f64, config: &SolveConfig) -> Result<SolveOutcome> {
    let start = Instant::now();
    let predicted = calc::base_pack1(alpha)?;
    let target = required_size(k, alpha);
    let empty = || Solution::Paths(P2Packing::default());
    if target == 0 {
        return Ok(outcome(Procedure::Pack1, empty(), target, predicted, start));
    }
    if g.n < 3 * k {
        // no room for k disjoint paths
        return Ok(outcome(Procedure::Pack1, empty(), target, predicted, start));
    }
    let params = UniversalParams::new(g.n, 3 * k, k, alpha)?;
    let family = build_universal(
        params,
        config.strategy,
        derive_seed(config.seed, 1),
        &config.budget,
    )?;
    let all = Subset::full(g.n);
    let found = config.pool(|| {
        family.members.par_iter().find_map_first(|&f| {
            let b = BipartiteGraph::from_graph(g, f, all - f);
            let p = max_center_left_p2(&b);
            (p.len() >= target).then_some(p)
        })
    })?;
    let sol = Solution::Paths(found.unwrap_or_default());
    Ok(outcome(Procedure::Pack1, sol, target, predicted, start))
}

/// Extends partial packings of `m = round(β*k)` sets with local search over
/// the sets disjoint from them, pivot by pivot.
fn pack2_masks(
    masks: &[Subset],
    n: usize,
    k: usize,
    alpha: f64,
    fixed: Option<Subset>,
    config: &SolveConfig,
) -> Result<Option<Vec<usize>>> {
    let target = required_size(k, alpha);
    let m = level_size(k, calc::beta_star(alpha, config.epsilon).clamp(0.0, 1.0));
    let complete = |union: Subset, sets: &[usize]| -> Option<Vec<usize>> {
        let rest: Vec<usize> = (0..masks.len())
            .filter(|&i| masks[i].is_disjoint(union))
            .collect();
        let sub: Vec<Subset> = rest.iter().map(|&i| masks[i]).collect();
        let extra = local_search(&sub, config.swap_size);
        (sets.len() + extra.len() >= target).then(|| {
            let mut all: Vec<usize> = sets.to_vec();
            all.extend(extra.into_iter().map(|j| rest[j]));
            all.sort_unstable();
            all
        })
    };
    if m == 0 || target == 0 {
        return Ok(complete(Subset::EMPTY, &[]));
    }
    config.budget.check_exact("Pack2 partial packings", k, n)?;
    let mut sweep = Sweep::new(masks, n, k, m, fixed);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    while !sweep.done() {
        sweep.step();
        let fresh: Vec<(Subset, Vec<usize>)> = sweep
            .level(m)
            .iter()
            .filter(|p| seen.insert(p.sets.clone()))
            .map(|p| (p.union, p.sets.clone()))
            .collect();
        let hit = config.pool(|| fresh.par_iter().find_map_first(|(u, s)| complete(*u, s)))?;
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

/// Representative-family procedure for 3-set packing.
pub fn pack2(
    family: &ThreeSetFamily,
    k: usize,
    alpha: f64,
    config: &SolveConfig,
) -> Result<SolveOutcome> {
    let start = Instant::now();
    check_tradeoff_alpha(alpha)?;
    let c = config.c_or_default(TableKind::SetPackDet, alpha)?;
    let predicted = calc::base_pack2(alpha, config.epsilon, c)?.base;
    let target = required_size(k, alpha);
    let found = pack2_masks(&family.masks(), family.n, k, alpha, None, config)?;
    let sol = Solution::Sets(SetPacking::new(found.unwrap_or_default()));
    Ok(outcome(Procedure::Pack2, sol, target, predicted, start))
}

/// Middle of a 3-node set: the first node adjacent to both others.
fn path_of(nb: &[Subset], nodes: [usize; 3]) -> Option<P2Path> {
    (0..3).find_map(|i| {
        let m = nodes[i];
        let others: Vec<usize> = (0..3).filter(|&j| j != i).map(|j| nodes[j]).collect();
        (nb[m].contains(others[0]) && nb[m].contains(others[1]))
            .then(|| P2Path::new(others[0], m, others[1]))
    })
}

/// [`pack2`] on the 3-sets of nodes spanned by paths of `g`.
pub fn pack2_graph(g: &Graph, k: usize, alpha: f64, config: &SolveConfig) -> Result<SolveOutcome> {
    let start = Instant::now();
    let sets: Vec<[usize; 3]> = g.p2_node_sets().into_iter().map(|(s, _)| s).collect();
    let family = ThreeSetFamily::new(g.n, sets)?;
    let inner = pack2(&family, k, alpha, config)?;
    let Solution::Sets(chosen) = inner.solution else {
        unreachable!("pack2 returns sets")
    };
    let nb = g.neighbourhoods();
    let paths = chosen
        .chosen
        .iter()
        .map(|&i| path_of(&nb, family.sets[i]).expect("node set spans a path"))
        .collect();
    Ok(outcome(
        Procedure::Pack2,
        Solution::Paths(P2Packing { paths }),
        inner.target,
        inner.predicted_base,
        start,
    ))
}

/// Runs the cheaper of Pack1 and Pack2 at `alpha`.
pub fn pack(g: &Graph, k: usize, alpha: f64, config: &SolveConfig) -> Result<SolveOutcome> {
    match calc::choose(TableKind::P2, alpha, config.epsilon, config.c)?.branch {
        Branch::First => pack1(g, k, alpha, config),
        Branch::Second => pack2_graph(g, k, alpha, config),
    }
}

/// Greedy prefix of `⌊(1-α)k/2⌋` sets followed by an exact (or colour-coding)
/// search for the remaining target on the untouched sets.
fn greedy_then_exact(
    masks: &[Subset],
    k: usize,
    alpha: f64,
    finish: impl FnOnce(&[usize], usize) -> Result<Option<Vec<usize>>>,
) -> Result<Vec<usize>> {
    let target = required_size(k, alpha);
    let g = ((1.0 - alpha) * k as f64 / 2.0 + 1e-9).floor().max(0.0) as usize;
    let mut chosen = Vec::with_capacity(g);
    let mut used = Subset::EMPTY;
    for _ in 0..g {
        match (0..masks.len()).find(|&i| masks[i].is_disjoint(used)) {
            Some(i) => {
                chosen.push(i);
                used |= masks[i];
            }
            None => return Ok(Vec::new()),
        }
    }
    let rest: Vec<usize> = (0..masks.len())
        .filter(|&i| masks[i].is_disjoint(used))
        .collect();
    match finish(&rest, target.saturating_sub(g))? {
        Some(extra) => {
            chosen.extend(extra.into_iter().map(|j| rest[j]));
            chosen.sort_unstable();
            Ok(chosen)
        }
        None => Ok(Vec::new()),
    }
}

/// Greedy plus exact 3-set packing; `randomized` swaps the deterministic
/// solver for colour coding.
pub fn setpack1(
    family: &ThreeSetFamily,
    k: usize,
    alpha: f64,
    randomized: bool,
    config: &SolveConfig,
) -> Result<SolveOutcome> {
    let start = Instant::now();
    check_tradeoff_alpha(alpha)?;
    let (procedure, scheme) = if randomized {
        (Procedure::SpRand1, ExactScheme::SetPackRand)
    } else {
        (Procedure::SetPack1, ExactScheme::SetPackDet)
    };
    let predicted = calc::base_exact_scaled(alpha, scheme)?;
    let masks = family.masks();
    let n = family.n;
    let chosen = greedy_then_exact(&masks, k, alpha, |rest, kk| {
        config.budget.check_exact("exact 3-set packing", kk, n)?;
        let sub: Vec<Subset> = rest.iter().map(|&i| masks[i]).collect();
        Ok(if randomized {
            rand_pack_masks(&sub, n, kk, derive_seed(config.seed, 2), config.trials)
        } else {
            sweep_solve(&sub, n, kk, None)
        })
    })?;
    let sol = Solution::Sets(SetPacking::new(chosen));
    Ok(outcome(
        procedure,
        sol,
        required_size(k, alpha),
        predicted,
        start,
    ))
}

fn dispatch_sets(
    table: TableKind,
    family: &ThreeSetFamily,
    k: usize,
    alpha: f64,
    config: &SolveConfig,
) -> Result<SolveOutcome> {
    match calc::choose(table, alpha, config.epsilon, config.c)?.branch {
        Branch::First => setpack1(family, k, alpha, table == TableKind::SetPackRand, config),
        Branch::Second => pack2(family, k, alpha, config),
    }
}

/// Deterministic dispatcher for 3-set packing.
pub fn setpack(
    family: &ThreeSetFamily,
    k: usize,
    alpha: f64,
    config: &SolveConfig,
) -> Result<SolveOutcome> {
    dispatch_sets(TableKind::SetPackDet, family, k, alpha, config)
}

/// Randomized dispatcher for 3-set packing.
pub fn sprand(
    family: &ThreeSetFamily,
    k: usize,
    alpha: f64,
    config: &SolveConfig,
) -> Result<SolveOutcome> {
    dispatch_sets(TableKind::SetPackRand, family, k, alpha, config)
}

/// Greedy plus exact 3D matching; `randomized` uses colour coding.
pub fn match1(
    family: &TripartiteFamily,
    k: usize,
    alpha: f64,
    randomized: bool,
    config: &SolveConfig,
) -> Result<SolveOutcome> {
    let start = Instant::now();
    check_tradeoff_alpha(alpha)?;
    let (procedure, scheme) = if randomized {
        (Procedure::MatchRand1, ExactScheme::MatchRand)
    } else {
        (Procedure::Match1, ExactScheme::MatchDet)
    };
    let predicted = calc::base_exact_scaled(alpha, scheme)?;
    let masks = family.masks();
    let chosen = greedy_then_exact(&masks, k, alpha, |rest, kk| {
        let sub = TripartiteFamily::new(family.blocks, rest.iter().map(|&i| family.sets[i]))?;
        let found = if randomized {
            crate::exact::rand_3d_match(
                &sub,
                kk,
                derive_seed(config.seed, 3),
                config.trials,
                &config.budget,
            )?
        } else {
            crate::exact::exact_3d_match(&sub, kk, &config.budget)?
        };
        Ok(found.map(|p| p.chosen))
    })?;
    let sol = Solution::Sets(SetPacking::new(chosen));
    Ok(outcome(
        procedure,
        sol,
        required_size(k, alpha),
        predicted,
        start,
    ))
}

/// Representative-family procedure for 3D matching; pivots range over `E1`.
pub fn match2(
    family: &TripartiteFamily,
    k: usize,
    alpha: f64,
    config: &SolveConfig,
) -> Result<SolveOutcome> {
    let start = Instant::now();
    check_tradeoff_alpha(alpha)?;
    let c = config.c_or_default(TableKind::MatchDet, alpha)?;
    let predicted = calc::base_match2(alpha, config.epsilon, c)?.base;
    let target = required_size(k, alpha);
    let found = pack2_masks(
        &family.masks(),
        family.n(),
        k,
        alpha,
        Some(family.tail()),
        config,
    )?;
    let sol = Solution::Sets(SetPacking::new(found.unwrap_or_default()));
    Ok(outcome(Procedure::Match2, sol, target, predicted, start))
}

fn dispatch_match(
    table: TableKind,
    family: &TripartiteFamily,
    k: usize,
    alpha: f64,
    config: &SolveConfig,
) -> Result<SolveOutcome> {
    match calc::choose(table, alpha, config.epsilon, config.c)?.branch {
        Branch::First => match1(family, k, alpha, table == TableKind::MatchRand, config),
        Branch::Second => match2(family, k, alpha, config),
    }
}

/// Deterministic dispatcher for 3D matching.
pub fn match_det(
    family: &TripartiteFamily,
    k: usize,
    alpha: f64,
    config: &SolveConfig,
) -> Result<SolveOutcome> {
    dispatch_match(TableKind::MatchDet, family, k, alpha, config)
}

/// Randomized dispatcher for 3D matching.
pub fn match_rand(
    family: &TripartiteFamily,
    k: usize,
    alpha: f64,
    config: &SolveConfig,
) -> Result<SolveOutcome> {
    dispatch_match(TableKind::MatchRand, family, k, alpha, config)
}

/// Runs `alg` on an instance of the matching kind.
pub fn solve(
    problem: &crate::model::Problem,
    alg: Algorithm,
    k: usize,
    alpha: f64,
    config: &SolveConfig,
) -> Result<SolveOutcome> {
    use crate::model::Problem;
    match (problem, alg) {
        (Problem::P2(g), Algorithm::Pack) => pack(g, k, alpha, config),
        (Problem::P2(g), Algorithm::Pack1) => pack1(g, k, alpha, config),
        (Problem::P2(g), Algorithm::Pack2) => pack2_graph(g, k, alpha, config),
        (Problem::ThreeSet(f), Algorithm::Pack2) => pack2(f, k, alpha, config),
        (Problem::ThreeSet(f), Algorithm::SetPack) => setpack(f, k, alpha, config),
        (Problem::ThreeSet(f), Algorithm::SetPack1) => setpack1(f, k, alpha, false, config),
        (Problem::ThreeSet(f), Algorithm::SpRand) => sprand(f, k, alpha, config),
        (Problem::ThreeSet(f), Algorithm::SpRand1) => setpack1(f, k, alpha, true, config),
        (Problem::Matching(f), Algorithm::Match) => match_det(f, k, alpha, config),
        (Problem::Matching(f), Algorithm::Match1) => match1(f, k, alpha, false, config),
        (Problem::Matching(f), Algorithm::MatchRand) => match_rand(f, k, alpha, config),
        (Problem::Matching(f), Algorithm::MatchRand1) => match1(f, k, alpha, true, config),
        (Problem::Matching(f), Algorithm::Match2) => match2(f, k, alpha, config),
        (p, a) => Err(Error::KindMismatch(format!(
            "{a} does not apply to a {} instance",
            p.kind()
        ))),
    }
}
