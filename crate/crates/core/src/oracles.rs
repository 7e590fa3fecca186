//! Brute-force reference solvers, solution verifiers and a planted-instance
//! generator. Everything here is deliberately naive so it can serve as an
//! independent check on the fast code paths.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bipartite::BipartiteGraph;
use crate::error::{Error, Result};
use crate::model::{
    validate_instance, Graph, Instance, P2Packing, P2Path, Planted, Problem, SetPacking,
    ThreeSetFamily, TripartiteFamily,
};
use crate::subset::{Combinations, Subset};

fn best_packing(sets: &[[usize; 3]]) -> Vec<usize> {
    let masks: Vec<Subset> = sets.iter().map(|s| s.iter().collect()).collect();
    fn rec(
        masks: &[Subset],
        from: usize,
        used: Subset,
        cur: &mut Vec<usize>,
        best: &mut Vec<usize>,
    ) {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        if cur.len() + (masks.len() - from) <= best.len() {
            return;
        }
        for i in from..masks.len() {
            if masks[i].is_disjoint(used) {
                cur.push(i);
                rec(masks, i + 1, used | masks[i], cur, best);
                cur.pop();
            }
        }
    }
    let mut best = Vec::new();
    rec(&masks, 0, Subset::EMPTY, &mut Vec::new(), &mut best);
    best
}

/// Maximum 3-set packing by exhaustive search.
pub fn brute_opt_3set(family: &ThreeSetFamily) -> (usize, SetPacking) {
    let best = best_packing(&family.sets);
    (best.len(), SetPacking::new(best))
}

/// Maximum 3D matching by exhaustive search.
pub fn brute_opt_3dm(family: &TripartiteFamily) -> (usize, SetPacking) {
    let best = best_packing(&family.sets);
    (best.len(), SetPacking::new(best))
}

/// Maximum P2-packing by exhaustive search over all paths.
pub fn brute_opt_p2(g: &Graph) -> (usize, P2Packing) {
    let nb = g.neighbourhoods();
    let mut paths = Vec::new();
    for m in 0..g.n {
        let ns = nb[m].to_vec();
        for (i, &a) in ns.iter().enumerate() {
            for &b in &ns[i + 1..] {
                paths.push(P2Path::new(a, m, b));
            }
        }
    }
    let sets: Vec<[usize; 3]> = paths.iter().map(|p| p.nodes()).collect();
    let best = best_packing(&sets);
    let len = best.len();
    (
        len,
        P2Packing {
            paths: best.into_iter().map(|i| paths[i]).collect(),
        },
    )
}

fn center_left_paths(b: &BipartiteGraph) -> Vec<P2Path> {
    let mut paths = Vec::new();
    for &l in &b.left {
        let mut rs: Vec<usize> = b.edges.iter().filter(|e| e.0 == l).map(|e| e.1).collect();
        rs.sort_unstable();
        for i in 0..rs.len() {
            for j in i + 1..rs.len() {
                paths.push(P2Path::new(rs[i], l, rs[j]));
            }
        }
    }
    paths
}

/// Maximum number of disjoint `r–l–r` paths, by exhaustive search.
pub fn brute_center_left_p2(b: &BipartiteGraph) -> usize {
    let sets: Vec<[usize; 3]> = center_left_paths(b).iter().map(|p| p.nodes()).collect();
    best_packing(&sets).len()
}

/// Lexicographically smallest sorted middle list over all maximum
/// center-left packings.
pub fn brute_center_left_middles(b: &BipartiteGraph) -> Vec<usize> {
    let paths = center_left_paths(b);
    let opt = brute_center_left_p2(b);
    let masks: Vec<Subset> = paths.iter().map(|p| p.nodes().iter().collect()).collect();
    let mut best: Option<Vec<usize>> = None;
    for pick in Combinations::new(Subset::full(paths.len()), opt) {
        let idx = pick.to_vec();
        let union = idx.iter().fold(Subset::EMPTY, |u, &i| u | masks[i]);
        if union.len() != 3 * opt {
            continue;
        }
        let mut mids: Vec<usize> = idx.iter().map(|&i| paths[i].middle).collect();
        mids.sort_unstable();
        if best.as_ref().is_none_or(|b| mids < *b) {
            best = Some(mids);
        }
    }
    best.unwrap_or_default()
}

/// Representation check that lists every `Y ⊆ E′ \ X` with `|Y| <= slack`.
pub fn brute_represents(
    target: &[Subset],
    chosen: &[Subset],
    sub_universe: Subset,
    slack: usize,
) -> bool {
    target.iter().all(|&x| {
        let free = sub_universe - x;
        (0..=slack.min(free.len()))
            .all(|r| Combinations::new(free, r).all(|y| chosen.iter().any(|c| c.is_disjoint(y))))
    })
}

/// Universality check that lists every `(X, Y)` pair and every member.
pub fn brute_universal(n: usize, k: usize, p: usize, alpha: f64, members: &[Subset]) -> bool {
    let need = crate::model::required_size(p, alpha);
    let all = Subset::full(n);
    Combinations::new(all, p).all(|x| {
        Combinations::new(all - x, k - p).all(|y| {
            members
                .iter()
                .any(|f| (*f & x).len() >= need && f.is_disjoint(y))
        })
    })
}

/// A solution in either shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Solution {
    Paths(P2Packing),
    Sets(SetPacking),
}

impl Solution {
    pub fn len(&self) -> usize {
        match self {
            Solution::Paths(p) => p.len(),
            Solution::Sets(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Why a solution is not a valid packing for the instance, if it is not.
pub fn check_solution(
    instance: &Instance,
    solution: &Solution,
) -> std::result::Result<(), Vec<String>> {
    let problems = match (&instance.problem, solution) {
        (Problem::P2(g), Solution::Paths(p)) => p.violations(g),
        (Problem::ThreeSet(f), Solution::Sets(s)) => s.violations(&f.sets),
        (Problem::Matching(f), Solution::Sets(s)) => s.violations(&f.sets),
        (p, _) => vec![format!(
            "solution shape does not fit a {} instance",
            p.kind()
        )],
    };
    if problems.is_empty() {
        Ok(())
    } else {
        Err(problems)
    }
}

pub fn verify_solution(instance: &Instance, solution: &Solution) -> bool {
    check_solution(instance, solution).is_ok()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "p2")]
    P2,
    #[serde(rename = "3sp")]
    ThreeSet,
    #[serde(rename = "3dm")]
    Matching,
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p2" => Ok(Kind::P2),
            "3sp" => Ok(Kind::ThreeSet),
            "3dm" => Ok(Kind::Matching),
            other => Err(Error::Domain(format!("unknown instance kind {other:?}"))),
        }
    }
}

fn random_triple(rng: &mut ChaCha8Rng, n: usize) -> [usize; 3] {
    let mut v: Vec<usize> = (0..n).collect();
    v.partial_shuffle(rng, 3);
    let mut t = [v[0], v[1], v[2]];
    t.sort_unstable();
    t
}

/// An instance containing `k` disjoint sets (or paths) plus `noise` random
/// extra sets (or edges), with the planted solution recorded.
pub fn plant_instance(kind: Kind, k: usize, noise: usize, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (problem, planted) = match kind {
        Kind::ThreeSet => {
            let n = (3 * k + noise.div_ceil(2)).max(3);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let mut sets: Vec<[usize; 3]> = (0..k)
                .map(|i| {
                    let mut t = [perm[3 * i], perm[3 * i + 1], perm[3 * i + 2]];
                    t.sort_unstable();
                    t
                })
                .collect();
            let mut tries = 0;
            while sets.len() < k + noise && tries < 100 * (noise + 1) {
                tries += 1;
                let t = random_triple(&mut rng, n);
                if !sets.contains(&t) {
                    sets.push(t);
                }
            }
            let mut order: Vec<usize> = (0..sets.len()).collect();
            order.shuffle(&mut rng);
            let shuffled: Vec<[usize; 3]> = order.iter().map(|&i| sets[i]).collect();
            let planted: Vec<usize> = (0..shuffled.len()).filter(|&j| order[j] < k).collect();
            (
                Problem::ThreeSet(ThreeSetFamily::new(n, shuffled)?),
                Planted {
                    k,
                    sets: planted,
                    paths: Vec::new(),
                },
            )
        }
        Kind::Matching => {
            let b = (k + noise.div_ceil(3)).max(1);
            let cols: Vec<Vec<usize>> = (0..3)
                .map(|blk| {
                    let mut v: Vec<usize> = (blk * b..(blk + 1) * b).collect();
                    v.shuffle(&mut rng);
                    v
                })
                .collect();
            let mut sets: Vec<[usize; 3]> = (0..k)
                .map(|i| [cols[0][i], cols[1][i], cols[2][i]])
                .collect();
            let mut tries = 0;
            while sets.len() < k + noise && tries < 100 * (noise + 1) {
                tries += 1;
                let t = [
                    rng.gen_range(0..b),
                    b + rng.gen_range(0..b),
                    2 * b + rng.gen_range(0..b),
                ];
                if !sets.contains(&t) {
                    sets.push(t);
                }
            }
            let mut order: Vec<usize> = (0..sets.len()).collect();
            order.shuffle(&mut rng);
            let shuffled: Vec<[usize; 3]> = order.iter().map(|&i| sets[i]).collect();
            let planted: Vec<usize> = (0..shuffled.len()).filter(|&j| order[j] < k).collect();
            (
                Problem::Matching(TripartiteFamily::new([b, b, b], shuffled)?),
                Planted {
                    k,
                    sets: planted,
                    paths: Vec::new(),
                },
            )
        }
        Kind::P2 => {
            let n = (3 * k + noise.div_ceil(3)).max(3);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let paths: Vec<P2Path> = (0..k)
                .map(|i| P2Path::new(perm[3 * i], perm[3 * i + 1], perm[3 * i + 2]))
                .collect();
            let mut edges: Vec<(usize, usize)> = Vec::new();
            let add = |a: usize, b: usize, edges: &mut Vec<(usize, usize)>| {
                let e = (a.min(b), a.max(b));
                if !edges.contains(&e) {
                    edges.push(e);
                }
            };
            for p in &paths {
                add(p.first, p.middle, &mut edges);
                add(p.middle, p.last, &mut edges);
            }
            let target = edges.len() + noise;
            let mut tries = 0;
            while edges.len() < target && tries < 100 * (noise + 1) {
                tries += 1;
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                if a != b {
                    add(a, b, &mut edges);
                }
            }
            edges.shuffle(&mut rng);
            (
                Problem::P2(Graph::new(n, edges)?),
                Planted {
                    k,
                    sets: Vec::new(),
                    paths,
                },
            )
        }
    };
    let inst = Instance {
        problem,
        k,
        planted: Some(planted),
        seed: Some(seed),
    };
    let report = validate_instance(&inst);
    if report.is_empty() {
        Ok(inst)
    } else {
        Err(Error::InvalidInstance(report))
    }
}
