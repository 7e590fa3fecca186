//! Maximum P2-packing in a bipartite graph with every path middle in `L`.
//!
//! Each `l ∈ L` is split into two copies joined by an edge, both copies
//! adjacent to the `R`-neighbours of `l`. A maximum matching of this gadget
//! has size `|L| + OPT`, and the centers are the `L`-nodes whose copies are
//! both matched into `R`.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::matching::{matching_size, maximum_matching};
use crate::model::{Graph, P2Packing, P2Path};
use crate::subset::Subset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    /// Edges are `(l, r)` pairs with `l` in `left` and `r` in `right`.
    pub fn new(left: Vec<usize>, right: Vec<usize>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let ls: HashSet<usize> = left.iter().copied().collect();
        let rs: HashSet<usize> = right.iter().copied().collect();
        let mut report = Vec::new();
        if ls.len() != left.len() || rs.len() != right.len() {
            report.push("repeated node label".to_string());
        }
        if ls.intersection(&rs).next().is_some() {
            report.push("L and R overlap".to_string());
        }
        let mut seen = HashSet::new();
        for &(l, r) in &edges {
            if !ls.contains(&l) || !rs.contains(&r) {
                report.push(format!("edge ({l}, {r}) does not go from L to R"));
            }
            if !seen.insert((l, r)) {
                report.push(format!("edge ({l}, {r}) is duplicated"));
            }
        }
        if report.is_empty() {
            Ok(BipartiteGraph { left, right, edges })
        } else {
            Err(Error::InvalidInstance(report))
        }
    }

    /// The edges of `g` between `left` and `right`.
    pub fn from_graph(g: &Graph, left: Subset, right: Subset) -> Self {
        let edges = g
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if left.contains(a) && right.contains(b) {
                    Some((a, b))
                } else if left.contains(b) && right.contains(a) {
                    Some((b, a))
                } else {
                    None
                }
            })
            .collect();
        BipartiteGraph {
            left: left.to_vec(),
            right: right.to_vec(),
            edges,
        }
    }
}

/// Compact form: left nodes sorted by label, right neighbours by position.
struct Gadget {
    left: Vec<usize>,
    right: Vec<usize>,
    nbrs: Vec<Vec<usize>>,
}

impl Gadget {
    fn new(b: &BipartiteGraph) -> Self {
        let mut left = b.left.clone();
        left.sort_unstable();
        let mut right = b.right.clone();
        right.sort_unstable();
        let lpos: HashMap<usize, usize> = left.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let rpos: HashMap<usize, usize> = right.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut nbrs = vec![Vec::new(); left.len()];
        for &(l, r) in &b.edges {
            nbrs[lpos[&l]].push(rpos[&r]);
        }
        for n in &mut nbrs {
            n.sort_unstable();
            n.dedup();
        }
        Gadget { left, right, nbrs }
    }

    fn copy(&self, l: usize, second: bool) -> usize {
        2 * l + second as usize
    }

    fn right_vertex(&self, r: usize) -> usize {
        2 * self.left.len() + r
    }

    /// Gadget restricted to `allowed` left nodes; `forced` ones lose their
    /// internal edge.
    fn adjacency(&self, allowed: &[bool], forced: &[bool], internal: bool) -> Vec<Vec<usize>> {
        let n = 2 * self.left.len() + self.right.len();
        let mut adj = vec![Vec::new(); n];
        for (l, nb) in self.nbrs.iter().enumerate() {
            if !allowed[l] {
                continue;
            }
            let (a, b) = (self.copy(l, false), self.copy(l, true));
            if internal && !forced[l] {
                adj[a].push(b);
                adj[b].push(a);
            }
            for &r in nb {
                let rv = self.right_vertex(r);
                for c in [a, b] {
                    adj[c].push(rv);
                    adj[rv].push(c);
                }
            }
        }
        adj
    }

    fn optimum(&self) -> usize {
        let all = vec![true; self.left.len()];
        let none = vec![false; self.left.len()];
        matching_size(&self.adjacency(&all, &none, true)) - self.left.len()
    }

    fn feasible(&self, forced: &[bool], allowed: &[bool], opt: usize) -> bool {
        let nforced = forced.iter().filter(|&&f| f).count();
        if matching_size(&self.adjacency(forced, forced, false)) != 2 * nforced {
            return false;
        }
        let nallowed = allowed.iter().filter(|&&a| a).count();
        matching_size(&self.adjacency(allowed, forced, true)) == nallowed + opt
    }
}

/// Size of a maximum packing of `r–l–r` paths.
pub fn max_center_left_size(b: &BipartiteGraph) -> usize {
    Gadget::new(b).optimum()
}

/// A maximum packing of `r–l–r` paths; among all maximum packings the one
/// whose sorted middle list is lexicographically smallest.
pub fn max_center_left_p2(b: &BipartiteGraph) -> P2Packing {
    let g = Gadget::new(b);
    let nl = g.left.len();
    let opt = g.optimum();
    let mut forced = vec![false; nl];
    let mut start = 0;
    for _ in 0..opt {
        let mut picked = false;
        for c in start..nl {
            if g.nbrs[c].len() < 2 {
                continue;
            }
            forced[c] = true;
            let allowed: Vec<bool> = (0..nl).map(|l| forced[l] || l > c).collect();
            if g.feasible(&forced, &allowed, opt) {
                start = c + 1;
                picked = true;
                break;
            }
            forced[c] = false;
        }
        debug_assert!(picked, "some center must extend a maximum packing");
    }
    let mate = maximum_matching(&g.adjacency(&forced, &forced, false));
    let mut paths = Vec::with_capacity(opt);
    for l in (0..nl).filter(|&l| forced[l]) {
        let ends: Vec<usize> = [g.copy(l, false), g.copy(l, true)]
            .iter()
            .map(|&c| g.right[mate[c].expect("forced copies are matched") - 2 * nl])
            .collect();
        paths.push(P2Path::new(
            ends[0].min(ends[1]),
            g.left[l],
            ends[0].max(ends[1]),
        ));
    }
    P2Packing { paths }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{brute_center_left_middles, brute_center_left_p2};
    use rand::{Rng, SeedableRng};

    fn check(b: &BipartiteGraph, p: &P2Packing) {
        let ls: HashSet<usize> = b.left.iter().copied().collect();
        let es: HashSet<(usize, usize)> = b.edges.iter().copied().collect();
        let mut used = HashSet::new();
        for path in &p.paths {
            assert!(ls.contains(&path.middle));
            assert!(es.contains(&(path.middle, path.first)));
            assert!(es.contains(&(path.middle, path.last)));
            for v in path.nodes() {
                assert!(used.insert(v));
            }
        }
    }

    #[test]
    fn single_star() {
        // a=0, x=1, y=2
        let b = BipartiteGraph::new(vec![0], vec![1, 2], vec![(0, 1), (0, 2)]).unwrap();
        let p = max_center_left_p2(&b);
        assert_eq!(p.paths, vec![P2Path::new(1, 0, 2)]);
    }

    #[test]
    fn shared_neighbour_allows_one_path() {
        // a=0, b=1, x=2, y=3, z=4
        let b = BipartiteGraph::new(
            vec![0, 1],
            vec![2, 3, 4],
            vec![(0, 2), (0, 3), (1, 3), (1, 4)],
        )
        .unwrap();
        let p = max_center_left_p2(&b);
        assert_eq!(p.len(), 1);
        assert_eq!(p.paths[0].middle, 0);
        assert_eq!(brute_center_left_p2(&b), 1);
    }

    #[test]
    fn empty_graph() {
        let b = BipartiteGraph::new(vec![0, 1], vec![2], vec![]).unwrap();
        assert!(max_center_left_p2(&b).is_empty());
        let b = BipartiteGraph::new(vec![], vec![], vec![]).unwrap();
        assert!(max_center_left_p2(&b).is_empty());
    }

    #[test]
    fn rejects_non_bipartite_edges() {
        assert!(BipartiteGraph::new(vec![0, 1], vec![2], vec![(0, 1)]).is_err());
    }

    #[test]
    fn random_graphs_match_oracle_and_lex_rule() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let nl = rng.gen_range(0..=5);
            let nr = rng.gen_range(0..=7);
            let left: Vec<usize> = (0..nl).collect();
            let right: Vec<usize> = (nl..nl + nr).collect();
            let mut edges = Vec::new();
            for &l in &left {
                for &r in &right {
                    if rng.gen_bool(0.4) {
                        edges.push((l, r));
                    }
                }
            }
            let b = BipartiteGraph::new(left, right, edges).unwrap();
            let p = max_center_left_p2(&b);
            check(&b, &p);
            let opt = brute_center_left_p2(&b);
            assert_eq!(p.len(), opt);
            assert_eq!(max_center_left_size(&b), opt);
            let mut mids: Vec<usize> = p.paths.iter().map(|q| q.middle).collect();
            mids.sort_unstable();
            assert_eq!(mids, brute_center_left_middles(&b));
            // gadget identity
            let g = Gadget::new(&b);
            let all = vec![true; nl];
            let none = vec![false; nl];
            assert_eq!(matching_size(&g.adjacency(&all, &none, true)), nl + opt);
        }
    }
}
