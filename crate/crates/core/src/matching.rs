//! Maximum cardinality matching in general graphs (Edmonds' blossom
//! algorithm, O(V^3)).

const NONE: usize = usize::MAX;

struct Blossom<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a> Blossom<'a> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Endpoint of an augmenting path from `root`, with `parent` links set.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.adj.len();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push(root);
        let mut head = 0;
        while head < self.queue.len() {
            let v = self.queue[head];
            head += 1;
            for &to in &self.adj[v] {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push(next);
                }
            }
        }
        None
    }
}

/// Maximum matching; `mate[v]` is the partner of `v`, if any.
pub fn maximum_matching(adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let n = adj.len();
    let mut b = Blossom {
        adj,
        mate: vec![NONE; n],
        parent: vec![NONE; n],
        base: (0..n).collect(),
        used: vec![false; n],
        in_blossom: vec![false; n],
        queue: Vec::with_capacity(n),
    };
    // greedy start cuts the number of searches
    for v in 0..n {
        if b.mate[v] == NONE {
            if let Some(&u) = adj[v].iter().find(|&&u| b.mate[u] == NONE && u != v) {
                b.mate[v] = u;
                b.mate[u] = v;
            }
        }
    }
    for root in 0..n {
        if b.mate[root] != NONE {
            continue;
        }
        if let Some(mut v) = b.find_path(root) {
            while v != NONE {
                let pv = b.parent[v];
                let ppv = b.mate[pv];
                b.mate[v] = pv;
                b.mate[pv] = v;
                v = ppv;
            }
        }
    }
    b.mate
        .into_iter()
        .map(|m| (m != NONE).then_some(m))
        .collect()
}

pub fn matching_size(adj: &[Vec<usize>]) -> usize {
    maximum_matching(adj).iter().filter(|m| m.is_some()).count() / 2
}

/// Adjacency lists from an edge list over `n` vertices.
pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn brute_matching(n: usize, edges: &[(usize, usize)]) -> usize {
        fn rec(i: usize, used: u32, edges: &[(usize, usize)]) -> usize {
            if i == edges.len() {
                return 0;
            }
            let skip = rec(i + 1, used, edges);
            let (a, b) = edges[i];
            let m = 1 << a | 1 << b;
            if used & m == 0 {
                skip.max(1 + rec(i + 1, used | m, edges))
            } else {
                skip
            }
        }
        let _ = n;
        rec(0, 0, edges)
    }

    #[test]
    fn odd_cycle_and_path() {
        let tri = adjacency(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(matching_size(&tri), 1);
        // blossom needed: a 5-cycle with a pendant
        let g = adjacency(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (4, 5)]);
        assert_eq!(matching_size(&g), 3);
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..400 {
            let n = rng.gen_range(1..10);
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.35) {
                        edges.push((a, b));
                    }
                }
            }
            let adj = adjacency(n, &edges);
            let mate = maximum_matching(&adj);
            for (v, m) in mate.iter().enumerate() {
                if let Some(u) = *m {
                    assert_eq!(mate[u], Some(v));
                    assert!(adj[v].contains(&u));
                }
            }
            assert_eq!(matching_size(&adj), brute_matching(n, &edges));
        }
    }
}
