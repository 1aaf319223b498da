//! Small simple graphs stored as per-vertex bitmasks.
//!
//! Everything downstream works with vertex subsets of a single host graph, so
//! most accessors take and return [`VertexSet`] values rather than building
//! induced copies.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Sub, SubAssign};

use rayon::prelude::*;
use thiserror::Error;

/// Largest vertex count representable in single-byte graph6.
pub const MAX_VERTICES: usize = 62;

/// Largest vertex count accepted by [`canonical_code`].
pub const CANON_LIMIT: usize = 10;

pub type VertexId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph6 parse error at byte {offset}: {reason}")]
    Parse { offset: usize, reason: String },
    #[error("canonicalization size limit: {n} vertices exceeds {limit}")]
    CanonLimit { n: usize, limit: usize },
    #[error("query vertex inside separator")]
    QueryInSeparator,
    #[error("vertex count {0} exceeds {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: VertexId, n: usize },
}

/// A subset of `0..62` packed into a `u64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: VertexId) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, v: VertexId) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: VertexId) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: VertexId) {
        self.0 &= !(1u64 << v);
    }

    pub fn with(self, v: VertexId) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    pub fn without(self, v: VertexId) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: VertexSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<VertexId> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }

    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(self) -> SubsetIter {
        SubsetIter {
            universe: self.0,
            next: Some(0),
        }
    }

    /// Renders the set with every label shifted by `base`.
    pub fn display_with_base(self, base: usize) -> String {
        let items: Vec<String> = self.iter().map(|v| (v + base).to_string()).collect();
        format!("{{{}}}", items.join(","))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with_base(0))
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with_base(0))
    }
}

impl std::str::FromStr for VertexSet {
    type Err = GraphError;

    /// Parses the `{0,2,5}` notation produced by `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or(GraphError::Parse {
                offset: 0,
                reason: "expected a braced vertex list".into(),
            })?;
        let mut out = VertexSet::EMPTY;
        for item in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let v: usize = item.parse().map_err(|_| GraphError::Parse {
                offset: 0,
                reason: format!("bad vertex {item:?}"),
            })?;
            if v >= MAX_VERTICES {
                return Err(GraphError::VertexOutOfRange { v, n: MAX_VERTICES });
            }
            out.insert(v);
        }
        Ok(out)
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl BitOr for VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 | rhs.0)
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & rhs.0)
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: VertexSet) -> VertexSet {
        VertexSet(self.0 & !rhs.0)
    }
}

impl BitOrAssign for VertexSet {
    fn bitor_assign(&mut self, rhs: VertexSet) {
        self.0 |= rhs.0;
    }
}

impl BitAndAssign for VertexSet {
    fn bitand_assign(&mut self, rhs: VertexSet) {
        self.0 &= rhs.0;
    }
}

impl SubAssign for VertexSet {
    fn sub_assign(&mut self, rhs: VertexSet) {
        self.0 &= !rhs.0;
    }
}

pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = VertexId;
    fn next(&mut self) -> Option<VertexId> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

pub struct SubsetIter {
    universe: u64,
    next: Option<u64>,
}

impl Iterator for SubsetIter {
    type Item = VertexSet;
    fn next(&mut self) -> Option<VertexSet> {
        let cur = self.next?;
        self.next = if cur == self.universe {
            None
        } else {
            Some((cur.wrapping_sub(self.universe)) & self.universe)
        };
        Some(VertexSet(cur))
    }
}

/// Immutable simple graph on at most [`MAX_VERTICES`] vertices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SmallGraph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl fmt::Debug for SmallGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SmallGraph({} {:?})", self.to_graph6(), self.edges())
    }
}

impl SmallGraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "vertex count {n} exceeds {MAX_VERTICES}");
        SmallGraph {
            n,
            adj: vec![VertexSet::EMPTY; n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let full = VertexSet::full(n);
        let mut g = SmallGraph::empty(n);
        for v in 0..n {
            g.adj[v] = full.without(v);
        }
        g
    }

    /// Cycle `0-1-...-(n-1)-0`.
    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        SmallGraph::from_edges(n, &edges)
    }

    /// Path `0-1-...-(n-1)`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        SmallGraph::from_edges(n, &edges)
    }

    /// Builds a graph from an edge list; loops are ignored.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Self {
        let mut g = SmallGraph::empty(n);
        for &(a, b) in edges {
            assert!(a < n && b < n, "edge ({a},{b}) out of range for n={n}");
            if a != b {
                g.adj[a].insert(b);
                g.adj[b].insert(a);
            }
        }
        g
    }

    /// Builds a graph from adjacency rows, validating symmetry and looplessness.
    pub fn from_adjacency(adj: Vec<VertexSet>) -> Result<Self, GraphError> {
        let n = adj.len();
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let full = VertexSet::full(n);
        for (v, row) in adj.iter().enumerate() {
            if !row.is_subset(full) {
                let bad = (*row - full).first().unwrap_or(0);
                return Err(GraphError::VertexOutOfRange { v: bad, n });
            }
            if row.contains(v) {
                return Err(GraphError::VertexOutOfRange { v, n });
            }
            for w in row.iter() {
                if !adj[w].contains(v) {
                    return Err(GraphError::VertexOutOfRange { v: w, n });
                }
            }
        }
        Ok(SmallGraph { n, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn adjacency(&self) -> &[VertexSet] {
        &self.adj
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adj[a].contains(b)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    /// Edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in self.adj[a].iter() {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn with_edge(&self, a: VertexId, b: VertexId) -> SmallGraph {
        let mut g = self.clone();
        if a != b {
            g.adj[a].insert(b);
            g.adj[b].insert(a);
        }
        g
    }

    pub fn without_edge(&self, a: VertexId, b: VertexId) -> SmallGraph {
        let mut g = self.clone();
        g.adj[a].remove(b);
        g.adj[b].remove(a);
        g
    }

    /// Appends a vertex adjacent to `nbrs`.
    pub fn with_vertex(&self, nbrs: VertexSet) -> SmallGraph {
        let v = self.n;
        let mut g = self.clone();
        g.n += 1;
        assert!(g.n <= MAX_VERTICES);
        g.adj.push(nbrs & self.vertices());
        for w in (nbrs & self.vertices()).iter() {
            g.adj[w].insert(v);
        }
        g
    }

    pub fn complement(&self) -> SmallGraph {
        let full = self.vertices();
        let adj = (0..self.n)
            .map(|v| (full - self.adj[v]).without(v))
            .collect();
        SmallGraph { n: self.n, adj }
    }

    /// Induced subgraph on `s`, relabelled order-preservingly onto `0..|s|`.
    pub fn induced(&self, s: VertexSet) -> SmallGraph {
        let verts: Vec<VertexId> = s.iter().collect();
        let mut pos = [usize::MAX; 64];
        for (i, &v) in verts.iter().enumerate() {
            pos[v] = i;
        }
        let adj = verts
            .iter()
            .map(|&v| (self.adj[v] & s).iter().map(|w| pos[w]).collect())
            .collect();
        SmallGraph {
            n: verts.len(),
            adj,
        }
    }

    /// Graph with vertex `v` renamed to `perm[v]`.
    pub fn permute(&self, perm: &[VertexId]) -> SmallGraph {
        assert_eq!(perm.len(), self.n);
        let mut adj = vec![VertexSet::EMPTY; self.n];
        for v in 0..self.n {
            adj[perm[v]] = self.adj[v].iter().map(|w| perm[w]).collect();
        }
        SmallGraph { n: self.n, adj }
    }

    pub fn link(&self, v: VertexId) -> VertexSet {
        self.adj[v]
    }

    pub fn star(&self, v: VertexId) -> VertexSet {
        self.adj[v].with(v)
    }

    pub fn antilink(&self, v: VertexId) -> VertexSet {
        self.vertices() - self.star(v)
    }

    pub fn antistar(&self, v: VertexId) -> VertexSet {
        self.antilink(v).with(v)
    }

    /// `Lk(S)`: the union of the members' links, minus `S` itself.
    pub fn link_of_set(&self, s: VertexSet) -> VertexSet {
        let mut out = VertexSet::EMPTY;
        for v in s.iter() {
            out |= self.adj[v];
        }
        out - s
    }

    /// `C(S)`: common neighbours of every member; `C(∅)` is the full vertex set.
    pub fn common_neighbors(&self, s: VertexSet) -> VertexSet {
        let mut out = self.vertices();
        for v in s.iter() {
            out &= self.adj[v];
        }
        out
    }

    /// `Lk_Y(x)`: the link of `x` together with every `Y_i` containing `x`.
    pub fn link_rel(&self, x: VertexId, ys: &[VertexSet]) -> VertexSet {
        let mut out = self.adj[x];
        for &y in ys {
            if y.contains(x) {
                out |= y;
            }
        }
        out
    }

    /// Set form of [`link_rel`](Self::link_rel), with `Z` removed.
    pub fn link_rel_set(&self, z: VertexSet, ys: &[VertexSet]) -> VertexSet {
        let mut out = VertexSet::EMPTY;
        for x in z.iter() {
            out |= self.link_rel(x, ys);
        }
        out - z
    }

    /// Connected components of the subgraph induced on `s`, ordered by least vertex.
    pub fn components(&self, s: VertexSet) -> Vec<VertexSet> {
        let mut out = Vec::new();
        let mut rest = s;
        while let Some(v) = rest.first() {
            let comp = self.reach(VertexSet::singleton(v), s);
            out.push(comp);
            rest -= comp;
        }
        out
    }

    /// Components of the complement restricted to `s`.
    pub fn co_components(&self, s: VertexSet) -> Vec<VertexSet> {
        let mut out = Vec::new();
        let mut rest = s;
        while let Some(v) = rest.first() {
            let mut comp = VertexSet::singleton(v);
            let mut frontier = comp;
            while let Some(u) = frontier.first() {
                frontier.remove(u);
                let fresh = (s - self.adj[u]) - comp;
                let fresh = fresh.without(u);
                comp |= fresh;
                frontier |= fresh;
            }
            out.push(comp);
            rest -= comp;
        }
        out
    }

    /// Vertices of `within` reachable from `start` inside `within`.
    pub fn reach(&self, start: VertexSet, within: VertexSet) -> VertexSet {
        let mut seen = start & within;
        let mut frontier = seen;
        while let Some(u) = frontier.first() {
            frontier.remove(u);
            let fresh = (self.adj[u] & within) - seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen
    }

    pub fn is_clique(&self, s: VertexSet) -> bool {
        s.iter().all(|v| (s.without(v)).is_subset(self.adj[v]))
    }

    pub fn is_stable(&self, s: VertexSet) -> bool {
        s.iter().all(|v| !self.adj[v].intersects(s))
    }

    /// Set adjacency: every `p ∈ P`, `q ∈ Q` are equal or adjacent.
    pub fn adjacent_sets(&self, p: VertexSet, q: VertexSet) -> bool {
        p.iter().all(|v| q.without(v).is_subset(self.adj[v]))
    }

    /// Whether `u` and `v` lie in different components of `G ∖ S`.
    pub fn separates(&self, s: VertexSet, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        if s.contains(u) || s.contains(v) {
            return Err(GraphError::QueryInSeparator);
        }
        let within = self.vertices() - s;
        Ok(!self.reach(VertexSet::singleton(u), within).contains(v))
    }

    pub fn is_separator(&self, s: VertexSet) -> bool {
        let rest = self.vertices() - s;
        match rest.first() {
            None => false,
            Some(v) => self.reach(VertexSet::singleton(v), rest) != rest,
        }
    }

    pub fn is_connected(&self) -> bool {
        match self.vertices().first() {
            None => true,
            Some(v) => self.reach(VertexSet::singleton(v), self.vertices()) == self.vertices(),
        }
    }

    pub fn is_coconnected(&self) -> bool {
        self.co_components(self.vertices()).len() <= 1
    }

    /// Standard graph6 text, without a trailing newline.
    pub fn to_graph6(&self) -> String {
        graph6_encode(self)
    }

    pub fn from_graph6(text: &str) -> Result<SmallGraph, GraphError> {
        graph6_decode(text)
    }
}

fn graph6_bits(g: &SmallGraph) -> Vec<bool> {
    let mut bits = Vec::with_capacity(g.n * g.n.saturating_sub(1) / 2);
    for j in 1..g.n {
        for i in 0..j {
            bits.push(g.has_edge(i, j));
        }
    }
    bits
}

pub fn graph6_encode(g: &SmallGraph) -> String {
    let mut out = Vec::with_capacity(1 + g.n * g.n / 12 + 1);
    out.push((g.n as u8) + 63);
    for chunk in graph6_bits(g).chunks(6) {
        let mut group = 0u8;
        for (k, &b) in chunk.iter().enumerate() {
            if b {
                group |= 1 << (5 - k);
            }
        }
        out.push(group + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

pub fn graph6_decode(text: &str) -> Result<SmallGraph, GraphError> {
    let mut offset = 0;
    let mut body = text.trim_end_matches(['\n', '\r']);
    if let Some(rest) = body.strip_prefix(">>graph6<<") {
        offset = ">>graph6<<".len();
        body = rest;
    }
    let bytes = body.as_bytes();
    let err = |at: usize, reason: &str| GraphError::Parse {
        offset: offset + at,
        reason: reason.to_string(),
    };
    let Some(&first) = bytes.first() else {
        return Err(err(0, "empty line"));
    };
    if !(63..=126).contains(&first) {
        return Err(err(0, "byte outside the graph6 range 63..=126"));
    }
    if first == 126 {
        return Err(err(
            0,
            "graphs with more than 62 vertices are not supported",
        ));
    }
    let n = (first - 63) as usize;
    let nbits = n * n.saturating_sub(1) / 2;
    let want = nbits.div_ceil(6);
    if bytes.len() - 1 != want {
        return Err(err(
            bytes.len().min(1 + want),
            &format!(
                "expected {} data bytes for n={n}, found {}",
                want,
                bytes.len() - 1
            ),
        ));
    }
    let mut g = SmallGraph::empty(n);
    let mut k = 0;
    'outer: for (idx, &b) in bytes[1..].iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(idx + 1, "byte outside the graph6 range 63..=126"));
        }
        let group = b - 63;
        for bit in 0..6 {
            if k == nbits {
                break 'outer;
            }
            if group >> (5 - bit) & 1 == 1 {
                let (i, j) = bit_position(k);
                g.adj[i].insert(j);
                g.adj[j].insert(i);
            }
            k += 1;
        }
    }
    Ok(g)
}

/// Maps a graph6 bit index to its `(i, j)` pair with `i < j`.
fn bit_position(k: usize) -> (usize, usize) {
    let mut j = 1;
    let mut start = 0;
    while start + j <= k {
        start += j;
        j += 1;
    }
    (k - start, j)
}

/// The lexicographically least graph6 string over all relabelings.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalCode(String);

impl CanonicalCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Wraps a string already known to be canonical (e.g. read from a db file).
    pub fn from_canonical_string(s: String) -> Self {
        CanonicalCode(s)
    }

    pub fn graph(&self) -> SmallGraph {
        graph6_decode(&self.0).expect("canonical codes are valid graph6")
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Branch-and-bound search for the permutation minimising the graph6 bit string.
///
/// Columns of the upper triangle are compared in order, so a position can be
/// fixed greedily up to ties. Ties between vertices swapped by a transposition
/// automorphism (twins) are explored once.
struct CanonSearch<'a> {
    g: &'a SmallGraph,
    twins: Vec<VertexSet>,
    best: Option<Vec<u32>>,
    best_order: Vec<VertexId>,
    cur: Vec<u32>,
    order: Vec<VertexId>,
}

impl<'a> CanonSearch<'a> {
    fn column(&self, v: VertexId) -> u32 {
        let j = self.order.len();
        let mut col = 0u32;
        for (i, &u) in self.order.iter().enumerate() {
            if self.g.has_edge(u, v) {
                col |= 1 << (j - 1 - i);
            }
        }
        col
    }

    fn prefix_cmp(&self) -> Ordering {
        match &self.best {
            None => Ordering::Less,
            Some(b) => self.cur[..].cmp(&b[..self.cur.len()]),
        }
    }

    fn search(&mut self, remaining: VertexSet) {
        if remaining.is_empty() {
            if self.prefix_cmp() == Ordering::Less {
                self.best = Some(self.cur.clone());
                self.best_order = self.order.clone();
            }
            return;
        }
        let mut min = u32::MAX;
        let mut cands = VertexSet::EMPTY;
        for v in remaining.iter() {
            let c = self.column(v);
            if c < min {
                min = c;
                cands = VertexSet::singleton(v);
            } else if c == min {
                cands.insert(v);
            }
        }
        self.cur.push(min);
        let mut tried = VertexSet::EMPTY;
        for v in cands.iter() {
            if self.prefix_cmp() == Ordering::Greater {
                break;
            }
            if self.twins[v].intersects(tried) {
                continue;
            }
            tried.insert(v);
            self.order.push(v);
            self.search(remaining.without(v));
            self.order.pop();
        }
        self.cur.pop();
    }
}

fn twin_sets(g: &SmallGraph) -> Vec<VertexSet> {
    (0..g.n)
        .map(|u| {
            (0..g.n)
                .filter(|&v| v != u && g.adj[u].without(v) == g.adj[v].without(u))
                .collect()
        })
        .collect()
}

/// Permutation `perm` (old label -> new label) giving the canonical relabeling.
pub fn canonical_labeling(g: &SmallGraph) -> Result<Vec<VertexId>, GraphError> {
    if g.n > CANON_LIMIT {
        return Err(GraphError::CanonLimit {
            n: g.n,
            limit: CANON_LIMIT,
        });
    }
    let mut s = CanonSearch {
        g,
        twins: twin_sets(g),
        best: None,
        best_order: Vec::new(),
        cur: Vec::new(),
        order: Vec::new(),
    };
    s.search(g.vertices());
    let mut perm = vec![0; g.n];
    for (pos, &v) in s.best_order.iter().enumerate() {
        perm[v] = pos;
    }
    Ok(perm)
}

pub fn canonical_code(g: &SmallGraph) -> Result<CanonicalCode, GraphError> {
    let perm = canonical_labeling(g)?;
    Ok(CanonicalCode(g.permute(&perm).to_graph6()))
}

pub fn canonical_form(g: &SmallGraph) -> Result<SmallGraph, GraphError> {
    let perm = canonical_labeling(g)?;
    Ok(g.permute(&perm))
}

pub fn is_isomorphic(a: &SmallGraph, b: &SmallGraph) -> Result<bool, GraphError> {
    if a.n != b.n || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    Ok(canonical_code(a)? == canonical_code(b)?)
}

/// One canonical representative per isomorphism class on `n` vertices, sorted by code.
pub fn enumerate_all(n: usize) -> Vec<SmallGraph> {
    enumerate_codes(n)
        .iter()
        .map(CanonicalCode::graph)
        .collect()
}

/// Canonical codes of all graphs on `n` vertices, sorted.
pub fn enumerate_codes(n: usize) -> Vec<CanonicalCode> {
    assert!(
        n <= CANON_LIMIT,
        "enumeration limited to {CANON_LIMIT} vertices"
    );
    let mut level = vec![canonical_code(&SmallGraph::empty(0)).unwrap()];
    for m in 1..=n {
        let prev: Vec<SmallGraph> = level.iter().map(CanonicalCode::graph).collect();
        let mut next: Vec<CanonicalCode> = prev
            .par_iter()
            .flat_map_iter(|g| {
                VertexSet::full(m - 1)
                    .subsets()
                    .map(move |nbrs| canonical_code(&g.with_vertex(nbrs)).unwrap())
            })
            .collect();
        next.par_sort_unstable();
        next.dedup();
        level = next;
    }
    level
}
