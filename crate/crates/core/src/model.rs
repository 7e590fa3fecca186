//! Domain types: set families, graphs, instances, packings and tradeoff
//! parameters. Elements are dense integers `0..n`, ordered numerically.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subset::{Subset, MAX_ELEMENTS};

/// Smallest integer solution size that is at least `alpha * k`.
pub fn required_size(k: usize, alpha: f64) -> usize {
    let v = (alpha * k as f64 - 1e-9).ceil();
    if v <= 0.0 {
        0
    } else {
        v as usize
    }
}

fn sorted3(s: [usize; 3]) -> [usize; 3] {
    let mut s = s;
    s.sort_unstable();
    s
}

fn mask3(s: &[usize; 3]) -> Subset {
    s.iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeSetFamily {
    pub n: usize,
    pub sets: Vec<[usize; 3]>,
}

impl ThreeSetFamily {
    /// Sorts every set and rejects malformed or duplicated sets.
    pub fn new(n: usize, sets: impl IntoIterator<Item = [usize; 3]>) -> Result<Self> {
        let fam = ThreeSetFamily {
            n,
            sets: sets.into_iter().map(sorted3).collect(),
        };
        let report = fam.violations();
        if report.is_empty() {
            Ok(fam)
        } else {
            Err(Error::InvalidInstance(report))
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn masks(&self) -> Vec<Subset> {
        self.sets.iter().map(mask3).collect()
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.n > MAX_ELEMENTS {
            out.push(format!(
                "universe of {} elements exceeds the supported maximum of {MAX_ELEMENTS}",
                self.n
            ));
        }
        let mut seen = HashSet::new();
        for (i, s) in self.sets.iter().enumerate() {
            let s = sorted3(*s);
            if s[0] == s[1] || s[1] == s[2] {
                out.push(format!("set {i} has <3 distinct elements"));
            }
            if s[2] >= self.n {
                out.push(format!(
                    "set {i} references element {} >= n={}",
                    s[2], self.n
                ));
            }
            if !seen.insert(s) {
                out.push(format!("set {i} duplicates an earlier set"));
            }
        }
        out
    }
}

/// Triples over three contiguous blocks `E1 = 0..b1`, `E2 = b1..b1+b2`,
/// `E3 = b1+b2..n`; each triple is stored as `[e1, e2, e3]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripartiteFamily {
    pub blocks: [usize; 3],
    pub sets: Vec<[usize; 3]>,
}

impl TripartiteFamily {
    pub fn new(blocks: [usize; 3], sets: impl IntoIterator<Item = [usize; 3]>) -> Result<Self> {
        let fam = TripartiteFamily {
            blocks,
            sets: sets.into_iter().map(sorted3).collect(),
        };
        let report = fam.violations();
        if report.is_empty() {
            Ok(fam)
        } else {
            Err(Error::InvalidInstance(report))
        }
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn e1(&self) -> Subset {
        Subset::range(0, self.blocks[0])
    }

    /// `E2 ∪ E3`.
    pub fn tail(&self) -> Subset {
        Subset::range(self.blocks[0], self.n())
    }

    pub fn block_of(&self, e: usize) -> Option<usize> {
        let b1 = self.blocks[0];
        let b2 = b1 + self.blocks[1];
        match e {
            _ if e < b1 => Some(0),
            _ if e < b2 => Some(1),
            _ if e < self.n() => Some(2),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn masks(&self) -> Vec<Subset> {
        self.sets.iter().map(mask3).collect()
    }

    pub fn as_three_set(&self) -> ThreeSetFamily {
        ThreeSetFamily {
            n: self.n(),
            sets: self.sets.clone(),
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.n() > MAX_ELEMENTS {
            out.push(format!(
                "universe of {} elements exceeds the supported maximum of {MAX_ELEMENTS}",
                self.n()
            ));
        }
        let mut seen = HashSet::new();
        for (i, s) in self.sets.iter().enumerate() {
            let s = sorted3(*s);
            let blocks: Vec<Option<usize>> = s.iter().map(|&e| self.block_of(e)).collect();
            if blocks.iter().any(Option::is_none) {
                out.push(format!(
                    "set {i} references an element outside the universe"
                ));
            } else if blocks != [Some(0), Some(1), Some(2)] {
                out.push(format!("set {i} is not one-per-block"));
            }
            if !seen.insert(s) {
                out.push(format!("set {i} duplicates an earlier set"));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Stores every edge as a sorted pair and rejects loops, duplicates and
    /// out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let g = Graph {
            n,
            edges: edges
                .into_iter()
                .map(|(a, b)| (a.min(b), a.max(b)))
                .collect(),
        };
        let report = g.violations();
        if report.is_empty() {
            Ok(g)
        } else {
            Err(Error::InvalidInstance(report))
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.n > MAX_ELEMENTS {
            out.push(format!(
                "graph of {} nodes exceeds the supported maximum of {MAX_ELEMENTS}",
                self.n
            ));
        }
        let mut seen = HashSet::new();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if a == b {
                out.push(format!("edge {i} is a self-loop"));
            }
            if a.max(b) >= self.n {
                out.push(format!(
                    "edge {i} references node {} >= n={}",
                    a.max(b),
                    self.n
                ));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                out.push(format!("edge {i} duplicates an earlier edge"));
            }
        }
        out
    }

    /// Neighbourhood of every node as a bit-set.
    pub fn neighbourhoods(&self) -> Vec<Subset> {
        let mut nb = vec![Subset::EMPTY; self.n];
        for &(a, b) in &self.edges {
            nb[a].insert(b);
            nb[b].insert(a);
        }
        nb
    }

    /// The node sets of all paths on three nodes, deduplicated, in
    /// lexicographic order. Each node set is paired with one valid middle.
    pub fn p2_node_sets(&self) -> Vec<([usize; 3], usize)> {
        let nb = self.neighbourhoods();
        let mut out: Vec<([usize; 3], usize)> = Vec::new();
        let mut seen = HashSet::new();
        for m in 0..self.n {
            let ns = nb[m].to_vec();
            for (i, &a) in ns.iter().enumerate() {
                for &b in &ns[i + 1..] {
                    let key = sorted3([a, m, b]);
                    if seen.insert(key) {
                        out.push((key, m));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// A path on three nodes with an explicit middle; serialized as
/// `[end, middle, end]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 3]", into = "[usize; 3]")]
pub struct P2Path {
    pub first: usize,
    pub middle: usize,
    pub last: usize,
}

impl P2Path {
    pub fn new(first: usize, middle: usize, last: usize) -> Self {
        P2Path {
            first,
            middle,
            last,
        }
    }

    pub fn nodes(&self) -> [usize; 3] {
        [self.first, self.middle, self.last]
    }
}

impl From<[usize; 3]> for P2Path {
    fn from(v: [usize; 3]) -> Self {
        P2Path::new(v[0], v[1], v[2])
    }
}

impl From<P2Path> for [usize; 3] {
    fn from(p: P2Path) -> Self {
        p.nodes()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct P2Packing {
    pub paths: Vec<P2Path>,
}

impl P2Packing {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Reasons the packing is not a valid set of disjoint paths in `g`.
    pub fn violations(&self, g: &Graph) -> Vec<String> {
        let nb = g.neighbourhoods();
        let mut out = Vec::new();
        let mut used = HashSet::new();
        for (i, p) in self.paths.iter().enumerate() {
            if p.nodes().iter().any(|&v| v >= g.n) {
                out.push(format!("path {i} references a node outside the graph"));
                continue;
            }
            if !nb[p.middle].contains(p.first) || !nb[p.middle].contains(p.last) {
                out.push(format!(
                    "path {i} middle {} is not adjacent to both ends",
                    p.middle
                ));
            }
            for v in p.nodes() {
                if !used.insert(v) {
                    out.push(format!("node {v} is used twice"));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetPacking {
    #[serde(rename = "sets")]
    pub chosen: Vec<usize>,
}

impl SetPacking {
    pub fn new(mut chosen: Vec<usize>) -> Self {
        chosen.sort_unstable();
        SetPacking { chosen }
    }

    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }

    /// Reasons the chosen indices do not form a packing of `sets`.
    pub fn violations(&self, sets: &[[usize; 3]]) -> Vec<String> {
        let mut out = Vec::new();
        let mut used = HashSet::new();
        let mut picked = HashSet::new();
        for &i in &self.chosen {
            if !picked.insert(i) {
                out.push(format!("set index {i} chosen twice"));
                continue;
            }
            let Some(s) = sets.get(i) else {
                out.push(format!("set index {i} out of range"));
                continue;
            };
            for &e in s {
                if !used.insert(e) {
                    out.push(format!("element {e} is covered twice"));
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TradeoffParams {
    pub alpha: f64,
    pub epsilon: f64,
    pub c: f64,
    pub beta_star: f64,
}

impl TradeoffParams {
    pub fn new(alpha: f64, epsilon: f64, c: f64) -> Result<Self> {
        if !(0.75..=1.0).contains(&alpha) {
            return Err(Error::Domain(format!("alpha={alpha} outside [0.75, 1]")));
        }
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::Domain(format!("epsilon={epsilon} must be >= 0")));
        }
        if !(c >= 1.0 && c.is_finite()) {
            return Err(Error::Domain(format!("c={c} must be >= 1")));
        }
        let beta_star = (4.0 * alpha - 3.0 + 4.0 * epsilon) / (1.0 + 4.0 * epsilon);
        Ok(TradeoffParams {
            alpha,
            epsilon,
            c,
            beta_star,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Problem {
    P2(Graph),
    ThreeSet(ThreeSetFamily),
    Matching(TripartiteFamily),
}

impl Problem {
    pub fn kind(&self) -> &'static str {
        match self {
            Problem::P2(_) => "p2",
            Problem::ThreeSet(_) => "3sp",
            Problem::Matching(_) => "3dm",
        }
    }
}

/// A solution planted by the generator, kept for diagnostics.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Planted {
    pub k: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub paths: Vec<P2Path>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub problem: Problem,
    pub k: usize,
    pub planted: Option<Planted>,
    pub seed: Option<u64>,
}

/// Every violated structural invariant of the instance; empty when valid.
pub fn validate_instance(instance: &Instance) -> Vec<String> {
    let mut out = match &instance.problem {
        Problem::P2(g) => g.violations(),
        Problem::ThreeSet(f) => f.violations(),
        Problem::Matching(f) => f.violations(),
    };
    if let Some(pl) = &instance.planted {
        let extra = match &instance.problem {
            Problem::P2(g) => P2Packing {
                paths: pl.paths.clone(),
            }
            .violations(g),
            Problem::ThreeSet(f) => SetPacking::new(pl.sets.clone()).violations(&f.sets),
            Problem::Matching(f) => SetPacking::new(pl.sets.clone()).violations(&f.sets),
        };
        out.extend(extra.into_iter().map(|v| format!("planted solution: {v}")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn required_size_rounding() {
        assert_eq!(required_size(10, 0.8), 8);
        assert_eq!(required_size(7, 0.8), 6);
        assert_eq!(required_size(5, 1.0), 5);
        assert_eq!(required_size(0, 0.9), 0);
        // 0.1 * 30 is 3.0000000000000004 in binary floating point
        assert_eq!(required_size(30, 0.1), 3);
    }

    #[test]
    fn family_validation_reports() {
        let bad = ThreeSetFamily {
            n: 4,
            sets: vec![[0, 0, 1], [1, 2, 3], [3, 2, 1]],
        };
        let r = bad.violations();
        assert!(r.iter().any(|v| v.contains("<3 distinct")));
        assert!(r.iter().any(|v| v.contains("duplicates")));
        assert!(ThreeSetFamily::new(4, [[0, 1, 2], [1, 2, 3]]).is_ok());

        let tri = TripartiteFamily {
            blocks: [2, 2, 2],
            sets: vec![[0, 1, 4]],
        };
        assert!(tri.violations()[0].contains("not one-per-block"));
        assert!(TripartiteFamily::new([2, 2, 2], [[0, 2, 4], [1, 3, 5]]).is_ok());
    }

    #[test]
    fn graph_paths() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let sets: Vec<[usize; 3]> = g.p2_node_sets().into_iter().map(|(s, _)| s).collect();
        assert_eq!(sets, vec![[0, 1, 2], [1, 2, 3]]);
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn packing_violations() {
        let g = Graph::new(6, [(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        let ok = P2Packing {
            paths: vec![P2Path::new(0, 1, 2), P2Path::new(3, 4, 5)],
        };
        assert!(ok.violations(&g).is_empty());
        let bad = P2Packing {
            paths: vec![P2Path::new(1, 0, 2)],
        };
        assert_eq!(bad.violations(&g).len(), 1);
        let sets = [[0, 1, 2], [2, 3, 4], [5, 6, 7]];
        assert!(SetPacking::new(vec![0, 2]).violations(&sets).is_empty());
        assert!(!SetPacking::new(vec![0, 1]).violations(&sets).is_empty());
    }

    #[test]
    fn beta_star_formula() {
        let p = TradeoffParams::new(0.8, 0.0, 2.0).unwrap();
        assert!((p.beta_star - 0.2).abs() < 1e-12);
        assert!(TradeoffParams::new(0.7, 0.0, 2.0).is_err());
        assert!(TradeoffParams::new(0.8, 0.0, 0.5).is_err());
    }
}
