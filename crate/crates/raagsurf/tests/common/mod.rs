#![allow(dead_code)]

use raagsurf::{SmallGraph, VertexSet};

pub fn vs(items: &[usize]) -> VertexSet {
    items.iter().copied().collect()
}

/// Set given in 1-based labels.
pub fn vs1(items: &[usize]) -> VertexSet {
    items.iter().map(|&v| v - 1).collect()
}

/// Graph on `n` vertices from two-digit 1-based edge codes such as `12`.
pub fn graph1(n: usize, codes: &[usize]) -> SmallGraph {
    let edges: Vec<_> = codes.iter().map(|c| (c / 10 - 1, c % 10 - 1)).collect();
    SmallGraph::from_edges(n, &edges)
}

/// Every labelled graph on `n` vertices.
pub fn all_labeled(n: usize) -> impl Iterator<Item = SmallGraph> {
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        SmallGraph::from_edges(n, &edges)
    })
}

/// Every permutation of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Independent hole test: induced graph on `s` is a single cycle.
pub fn is_induced_cycle(g: &SmallGraph, s: VertexSet) -> bool {
    if s.len() < 3 {
        return false;
    }
    let two_regular = s.iter().all(|v| (g.link(v) & s).len() == 2);
    two_regular && g.components(s).len() == 1
}
