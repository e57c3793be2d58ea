//! Small graph utilities shared across modules.

/// Union-find with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n], components: n }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.components -= 1;
        true
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

/// True if the edge list connects all `n` vertices.
pub fn is_connected<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> bool {
    if n == 0 {
        return true;
    }
    let mut uf = UnionFind::new(n);
    for (u, v) in edges {
        uf.union(u, v);
    }
    uf.components() == 1
}

/// Global minimum cut of an undirected multigraph given as an edge list.
///
/// Returns the cut value and one side of a minimum cut. Stoer–Wagner, O(n³).
pub fn stoer_wagner<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> (usize, Vec<usize>) {
    assert!(n >= 2, "cut of a graph with fewer than two vertices");
    let mut w = vec![vec![0usize; n]; n];
    for (u, v) in edges {
        if u != v {
            w[u][v] += 1;
            w[v][u] += 1;
        }
    }
    let mut groups: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best = (usize::MAX, Vec::new());
    while active.len() > 1 {
        let mut added = vec![false; n];
        let mut conn = vec![0usize; n];
        let mut prev = active[0];
        let mut last = active[0];
        added[last] = true;
        for &a in &active {
            conn[a] = w[last][a];
        }
        for _ in 1..active.len() {
            let next =
                *active.iter().filter(|&&a| !added[a]).max_by_key(|&&a| (conn[a], std::cmp::Reverse(a))).unwrap();
            added[next] = true;
            prev = last;
            last = next;
            for &a in &active {
                if !added[a] {
                    conn[a] += w[next][a];
                }
            }
        }
        if conn[last] < best.0 {
            best = (conn[last], groups[last].clone());
        }
        // merge last into prev
        let moved = std::mem::take(&mut groups[last]);
        groups[prev].extend(moved);
        for &a in &active {
            w[prev][a] += w[last][a];
            w[a][prev] = w[prev][a];
        }
        w[prev][prev] = 0;
        active.retain(|&a| a != last);
    }
    let mut side = best.1;
    side.sort_unstable();
    (best.0, side)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_cut_of_doubled_cycle_is_four() {
        let n = 6;
        let edges: Vec<_> = (0..n).flat_map(|i| [(i, (i + 1) % n), (i, (i + 1) % n)]).collect();
        let (value, side) = stoer_wagner(n, edges);
        assert_eq!(value, 4);
        assert!(!side.is_empty() && side.len() < n);
    }

    #[test]
    fn disconnected_graph_has_zero_cut() {
        let (value, _) = stoer_wagner(4, [(0, 1), (2, 3)]);
        assert_eq!(value, 0);
        assert!(!is_connected(4, [(0, 1), (2, 3)]));
    }
}
