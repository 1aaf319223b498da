//! Graph predicates and constructions used by the reduction moves.
//!
//! Most functions come in two flavours: a public one acting on the whole graph
//! and a `*_within` variant acting on the subgraph induced by a vertex mask of
//! the same host, which avoids relabelling inside the reduction search.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{SmallGraph, VertexId, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OpsError {
    #[error("doubling requires a clique")]
    NotAClique,
    #[error("co-contraction requires two distinct non-adjacent vertices")]
    AdjacentPair,
    #[error("the trichotomy needs a connected and co-connected graph")]
    NotPrime,
}

/// The relativising collection `Y = {Y_1, ..., Y_s}`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct YContext {
    pub sets: Vec<VertexSet>,
}

impl YContext {
    pub fn empty() -> Self {
        YContext { sets: Vec::new() }
    }

    pub fn single(y: VertexSet) -> Self {
        YContext { sets: vec![y] }
    }

    pub fn restricted(&self, p: VertexSet) -> Vec<VertexSet> {
        self.sets.iter().map(|&y| y & p).collect()
    }
}

/// A perfect elimination ordering if `g` is chordal.
pub fn is_chordal(g: &SmallGraph) -> Option<Vec<VertexId>> {
    let mut rest = g.vertices();
    let mut order = Vec::with_capacity(g.n());
    while !rest.is_empty() {
        let v = rest.iter().find(|&v| g.is_clique(g.link(v) & rest))?;
        order.push(v);
        rest.remove(v);
    }
    Some(order)
}

/// `K ∗_L K`: the original vertices, then a copy of each vertex outside `L` in ascending order.
pub fn double_along(g: &SmallGraph, l: VertexSet) -> Result<SmallGraph, OpsError> {
    if !g.is_clique(l) {
        return Err(OpsError::NotAClique);
    }
    let outside: Vec<VertexId> = (g.vertices() - l).iter().collect();
    let n = g.n();
    let copy = |v: VertexId| -> VertexId {
        if l.contains(v) {
            v
        } else {
            n + outside.iter().position(|&w| w == v).unwrap()
        }
    };
    let mut edges = g.edges();
    for (a, b) in g.edges() {
        if !(l.contains(a) && l.contains(b)) {
            edges.push((copy(a), copy(b)));
        }
    }
    Ok(SmallGraph::from_edges(n + outside.len(), &edges))
}

/// `K ∗_L`: one extra vertex adjacent exactly to `L`.
pub fn central_extension(g: &SmallGraph, l: VertexSet) -> Result<SmallGraph, OpsError> {
    if !g.is_clique(l) {
        return Err(OpsError::NotAClique);
    }
    Ok(g.with_vertex(l))
}

/// Merges the non-adjacent pair `u, v` into one vertex adjacent to their common neighbours.
///
/// The remaining vertices keep their relative order; the merged vertex is last.
pub fn cocontract(g: &SmallGraph, u: VertexId, v: VertexId) -> Result<SmallGraph, OpsError> {
    if u == v || g.has_edge(u, v) {
        return Err(OpsError::AdjacentPair);
    }
    let keep = g.vertices().without(u).without(v);
    let common = g.common_neighbors(VertexSet::singleton(u).with(v));
    let base = g.induced(keep);
    let rank = |w: VertexId| (keep & VertexSet::full(w)).len();
    let nbrs: VertexSet = common.iter().map(rank).collect();
    Ok(base.with_vertex(nbrs))
}

/// `[U, V] = U'' ∪ V''`.
pub fn set_commutator(g: &SmallGraph, u: VertexSet, v: VertexSet) -> VertexSet {
    let side = |a: VertexSet, b: VertexSet| -> VertexSet {
        let mut out = VertexSet::EMPTY;
        for part in g.co_components(a) {
            if !g.adjacent_sets(part, b) {
                out |= part;
            }
        }
        out
    };
    side(u, v) | side(v, u)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuclearWitness {
    pub ordering: Vec<VertexId>,
    /// Which of the two conditions each step satisfied (1 or 2).
    pub conditions: Vec<u8>,
}

/// Condition met by adding `x` after the prefix `s`, if either holds.
fn nuclear_step(
    g: &SmallGraph,
    within: VertexSet,
    ys: &[VertexSet],
    s: VertexSet,
    x: VertexId,
) -> Option<u8> {
    let mut lk = g.link(x) & within;
    for &y in ys {
        if y.contains(x) {
            lk |= y;
        }
    }
    let grown = s.with(x);
    let centre = (g.common_neighbors(s) & within)
        | if s.is_empty() {
            within
        } else {
            VertexSet::EMPTY
        };
    if centre.contains(x) {
        g.adjacent_sets(lk - s, grown).then_some(1)
    } else {
        g.adjacent_sets(lk, grown).then_some(2)
    }
}

/// Re-checks a witness step by step.
pub fn check_nuclear_witness(
    g: &SmallGraph,
    within: VertexSet,
    v: VertexSet,
    ys: &[VertexSet],
    w: &NuclearWitness,
) -> bool {
    let set: VertexSet = w.ordering.iter().copied().collect();
    if set != v || w.ordering.len() != v.len() || w.conditions.len() != v.len() {
        return false;
    }
    let mut prefix = VertexSet::EMPTY;
    for (&x, &c) in w.ordering.iter().zip(&w.conditions) {
        if nuclear_step(g, within, ys, prefix, x) != Some(c) {
            return false;
        }
        prefix.insert(x);
    }
    true
}

pub fn is_nuclear(g: &SmallGraph, v: VertexSet, y: &YContext) -> Option<NuclearWitness> {
    nuclear_within(g, g.vertices(), v, &y.sets)
}

/// Nuclearity of `v` in the subgraph induced on `within`, relative to `ys` (already restricted).
///
/// Whether a step is allowed depends only on the set of earlier vertices, so the
/// search runs over subsets; the witness is the lexicographically least ordering.
pub fn nuclear_within(
    g: &SmallGraph,
    within: VertexSet,
    v: VertexSet,
    ys: &[VertexSet],
) -> Option<NuclearWitness> {
    let v = v & within;
    let mut memo: HashMap<u64, bool> = HashMap::new();
    if !completes(g, within, v, ys, VertexSet::EMPTY, &mut memo) {
        return None;
    }
    let mut ordering = Vec::with_capacity(v.len());
    let mut conditions = Vec::with_capacity(v.len());
    let mut prefix = VertexSet::EMPTY;
    while prefix != v {
        let (x, c) = (v - prefix)
            .iter()
            .find_map(|x| {
                let c = nuclear_step(g, within, ys, prefix, x)?;
                completes(g, within, v, ys, prefix.with(x), &mut memo).then_some((x, c))
            })
            .expect("a completable prefix has a completable extension");
        ordering.push(x);
        conditions.push(c);
        prefix.insert(x);
    }
    Some(NuclearWitness {
        ordering,
        conditions,
    })
}

fn completes(
    g: &SmallGraph,
    within: VertexSet,
    v: VertexSet,
    ys: &[VertexSet],
    prefix: VertexSet,
    memo: &mut HashMap<u64, bool>,
) -> bool {
    if prefix == v {
        return true;
    }
    if let Some(&r) = memo.get(&prefix.bits()) {
        return r;
    }
    let r = (v - prefix).iter().any(|x| {
        nuclear_step(g, within, ys, prefix, x).is_some()
            && completes(g, within, v, ys, prefix.with(x), memo)
    });
    memo.insert(prefix.bits(), r);
    r
}

/// An almost-join decomposition: parts `(K_i, L_i)` glued along the core `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlmostJoin {
    pub core: VertexSet,
    pub parts: Vec<(VertexSet, VertexSet)>,
}

impl AlmostJoin {
    /// Checks the defining conditions against `g` restricted to `within`.
    pub fn is_valid(&self, g: &SmallGraph, within: VertexSet) -> bool {
        let l = self.core;
        let mut union = VertexSet::EMPTY;
        let mut factors = VertexSet::EMPTY;
        for (i, &(k, li)) in self.parts.iter().enumerate() {
            if !l.is_subset(k) || !li.is_subset(l) || factors.intersects(li) {
                return false;
            }
            for &(kj, _) in &self.parts[i + 1..] {
                if k & kj != l {
                    return false;
                }
            }
            let outer = k - l;
            if !outer.is_empty() && !((g.link_of_set(outer) & within).is_subset(li)) {
                return false;
            }
            union |= k;
            factors |= li;
        }
        if union != within || factors != l {
            return false;
        }
        let lists: Vec<VertexSet> = self.parts.iter().map(|p| p.1).collect();
        lists
            .iter()
            .enumerate()
            .all(|(i, &a)| lists[i + 1..].iter().all(|&b| g.adjacent_sets(a, b)))
    }
}

/// Components of `within ∖ L`, merged whenever they touch a common co-component of `L`.
///
/// Returns each class with the union of the co-components it touches.
pub fn join_classes(
    g: &SmallGraph,
    within: VertexSet,
    l: VertexSet,
) -> Vec<(VertexSet, VertexSet)> {
    let cocomps = g.co_components(l);
    let mut classes: Vec<(VertexSet, VertexSet)> = Vec::new();
    for comp in g.components(within - l) {
        let nbrs = g.link_of_set(comp) & within;
        let mut touched = VertexSet::EMPTY;
        for &c in &cocomps {
            if c.intersects(nbrs) {
                touched |= c;
            }
        }
        let mut merged = (comp, touched);
        classes.retain(|&(k, t)| {
            if t.intersects(merged.1) {
                merged = (merged.0 | k, merged.1 | t);
                false
            } else {
                true
            }
        });
        classes.push(merged);
    }
    classes.sort_by_key(|c| c.0.first());
    classes
}

/// All set partitions of `0..k`, each as a list of block bitmasks.
pub fn set_partitions(k: usize) -> Vec<Vec<u64>> {
    fn go(i: usize, k: usize, blocks: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == k {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] |= 1 << i;
            go(i + 1, k, blocks, out);
            blocks[b] &= !(1 << i);
        }
        blocks.push(1 << i);
        go(i + 1, k, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, k, &mut Vec::new(), &mut out);
    out
}

/// Almost-join decompositions of `g`.
///
/// For each core `L` the components of `G ∖ L` are merged into classes and
/// every grouping of classes into at least two parts is listed. Co-components
/// of `L` touched by no part are added to the first part's factor. A join is
/// also listed with core `G`, each part equal to its factor.
pub fn almost_join_decompositions(g: &SmallGraph, nontrivial_only: bool) -> Vec<AlmostJoin> {
    let all = g.vertices();
    let mut out = Vec::new();
    if !nontrivial_only {
        out.push(AlmostJoin {
            core: all,
            parts: vec![(all, all)],
        });
    }
    let factors = g.co_components(all);
    for blocks in set_partitions(factors.len()) {
        if blocks.len() < 2 {
            continue;
        }
        let parts = blocks
            .iter()
            .map(|&b| {
                let f = (0..factors.len())
                    .filter(|i| b >> i & 1 == 1)
                    .fold(VertexSet::EMPTY, |a, i| a | factors[i]);
                (f, f)
            })
            .collect();
        out.push(AlmostJoin { core: all, parts });
    }
    for l in all.subsets() {
        if l == all {
            continue;
        }
        let classes = join_classes(g, all, l);
        if classes.len() < 2 {
            continue;
        }
        for blocks in set_partitions(classes.len()) {
            if blocks.len() < 2 {
                continue;
            }
            let mut parts: Vec<(VertexSet, VertexSet)> = blocks
                .iter()
                .map(|&b| {
                    let mut k = l;
                    let mut f = VertexSet::EMPTY;
                    for (i, c) in classes.iter().enumerate() {
                        if b >> i & 1 == 1 {
                            k |= c.0;
                            f |= c.1;
                        }
                    }
                    (k, f)
                })
                .collect();
            let used = parts.iter().fold(VertexSet::EMPTY, |a, p| a | p.1);
            parts[0].1 |= l - used;
            out.push(AlmostJoin { core: l, parts });
        }
    }
    out
}

/// `P_i = L_i` for a part equal to its factor, `P_i = K_i` otherwise.
pub fn characteristic_subgraphs(aj: &AlmostJoin) -> Vec<VertexSet> {
    aj.parts
        .iter()
        .map(|&(k, li)| if k == li { li } else { k })
        .collect()
}

/// Decomposition under which a set is dense: the core and the characteristic subgraphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseWitness {
    pub core: VertexSet,
    pub pieces: Vec<VertexSet>,
}

pub fn is_dense(g: &SmallGraph, x: VertexSet, y: &YContext) -> Option<DenseWitness> {
    dense_within(g, g.vertices(), x, &y.sets)
}

/// Density of `x` in the subgraph induced on `within`, relative to `ys`.
///
/// The one-part decomposition is tried first, then cores in increasing bitmask
/// order with every grouping of their classes.
pub fn dense_within(
    g: &SmallGraph,
    within: VertexSet,
    x: VertexSet,
    ys: &[VertexSet],
) -> Option<DenseWitness> {
    let mut good: HashMap<u64, bool> = HashMap::new();
    let mut piece_ok = |p: VertexSet| -> bool {
        *good.entry(p.bits()).or_insert_with(|| {
            let local: Vec<VertexSet> = ys.iter().map(|&y| y & p).collect();
            nuclear_within(g, p, x & p, &local).is_some()
        })
    };
    if piece_ok(within) {
        return Some(DenseWitness {
            core: within,
            pieces: vec![within],
        });
    }
    // a join: every part equals its factor, so the pieces are groups of co-components
    let cocomps = g.co_components(within);
    if cocomps.len() >= 2 {
        if let Some(blocks) = cover_by_blocks(&cocomps, VertexSet::EMPTY, &mut piece_ok) {
            return Some(DenseWitness {
                core: within,
                pieces: blocks,
            });
        }
    }
    // the relative sets are boundary contents, which must lie in the core
    let rel = ys.iter().fold(VertexSet::EMPTY, |a, &y| a | y) & within;
    for l in within.subsets() {
        if l == within || !rel.is_subset(l) {
            continue;
        }
        let classes = join_classes(g, within, l);
        if classes.len() < 2 {
            continue;
        }
        let sets: Vec<VertexSet> = classes.iter().map(|c| c.0).collect();
        if let Some(blocks) = cover_by_blocks(&sets, l, &mut piece_ok) {
            return Some(DenseWitness {
                core: l,
                pieces: blocks,
            });
        }
    }
    None
}

/// Splits `classes` into blocks whose unions with `core` all pass `ok`.
fn cover_by_blocks(
    classes: &[VertexSet],
    core: VertexSet,
    ok: &mut dyn FnMut(VertexSet) -> bool,
) -> Option<Vec<VertexSet>> {
    fn go(
        mask: u64,
        classes: &[VertexSet],
        core: VertexSet,
        ok: &mut dyn FnMut(VertexSet) -> bool,
        dead: &mut HashMap<u64, bool>,
        chosen: &mut Vec<VertexSet>,
    ) -> bool {
        if mask == 0 {
            return true;
        }
        if dead.contains_key(&mask) {
            return false;
        }
        let low = mask & mask.wrapping_neg();
        let rest = mask & !low;
        let mut sub = rest;
        loop {
            let block = sub | low;
            let piece = (0..classes.len())
                .filter(|i| block >> i & 1 == 1)
                .fold(core, |a, i| a | classes[i]);
            if ok(piece) {
                chosen.push(piece);
                if go(mask & !block, classes, core, ok, dead, chosen) {
                    return true;
                }
                chosen.pop();
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        dead.insert(mask, false);
        false
    }
    let full = (1u64 << classes.len()) - 1;
    let mut chosen = Vec::new();
    let mut dead = HashMap::new();
    go(full, classes, core, ok, &mut dead, &mut chosen).then_some(chosen)
}

/// Pairs `(u, v)` with `u < v` at distance exactly two.
pub fn distance_two_pairs(g: &SmallGraph) -> Vec<(VertexId, VertexId)> {
    let mut out = Vec::new();
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if !g.has_edge(u, v) && g.link(u).intersects(g.link(v)) {
                out.push((u, v));
            }
        }
    }
    out
}

/// For all `u, v` at distance two and every co-component `W` of `C({u,v})`,
/// `W ∪ (C(W) ∖ {u,v})` separates `u` from `v`.
pub fn thcw_predicate(g: &SmallGraph) -> bool {
    distance_two_pairs(g).into_iter().all(|(u, v)| {
        let uv = VertexSet::singleton(u).with(v);
        let c = g.common_neighbors(uv);
        g.co_components(c).into_iter().all(|w| {
            let s = w | (g.common_neighbors(w) - uv);
            g.separates(s, u, v)
                .expect("u, v lie outside the separator")
        })
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrichotomyRow {
    pub u: VertexId,
    pub v: VertexId,
    pub w: VertexSet,
    /// Whether each of the three alternatives holds.
    pub holds: [bool; 3],
}

/// For each `(u, v, W)`: (1) `{u} ∪ W` separates, (2) `{v} ∪ W` separates,
/// (3) `W' = C(W) ∖ {u,v}` is nonempty and `W ∪ W'` separates `u` from `v`.
pub fn thcw2_trichotomy(g: &SmallGraph) -> Result<Vec<TrichotomyRow>, OpsError> {
    if !g.is_connected() || !g.is_coconnected() {
        return Err(OpsError::NotPrime);
    }
    let mut rows = Vec::new();
    for (u, v) in distance_two_pairs(g) {
        let uv = VertexSet::singleton(u).with(v);
        for w in g.co_components(g.common_neighbors(uv)) {
            let wp = g.common_neighbors(w) - uv;
            rows.push(TrichotomyRow {
                u,
                v,
                w,
                holds: [
                    g.is_separator(w.with(u)),
                    g.is_separator(w.with(v)),
                    !wp.is_empty() && g.separates(w | wp, u, v).expect("u, v outside"),
                ],
            });
        }
    }
    Ok(rows)
}

/// First `(A, B)` in increasing order of `A` with `G[A]` disconnected and `complement(G)[B]` disconnected.
pub fn skew_partition(g: &SmallGraph) -> Option<(VertexSet, VertexSet)> {
    let all = g.vertices();
    all.subsets()
        .filter(|&a| !a.is_empty() && a != all)
        .find(|&a| g.components(a).len() >= 2 && g.co_components(all - a).len() >= 2)
        .map(|a| (a, all - a))
}
