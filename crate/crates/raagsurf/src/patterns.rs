//! The forbidden-subgraph catalog: long holes plus eight sporadic graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{graph6_decode, SmallGraph, VertexId, VertexSet};

const CATALOG_DATA: &str = include_str!("../data/catalog.tsv");
const CONSTRAINT_DATA: &str = include_str!("../data/constraints.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternId {
    Hole(usize),
    P1_6,
    P2_6,
    P1_7,
    P2_7,
    P1_8,
    P2_8,
    P3_8,
    P4_8,
}

impl PatternId {
    pub const SPORADIC: [PatternId; 8] = [
        PatternId::P1_6,
        PatternId::P2_6,
        PatternId::P1_7,
        PatternId::P2_7,
        PatternId::P1_8,
        PatternId::P2_8,
        PatternId::P3_8,
        PatternId::P4_8,
    ];

    pub fn name(self) -> String {
        match self {
            PatternId::Hole(k) => format!("C{k}"),
            PatternId::P1_6 => "P1_6".into(),
            PatternId::P2_6 => "P2_6".into(),
            PatternId::P1_7 => "P1_7".into(),
            PatternId::P2_7 => "P2_7".into(),
            PatternId::P1_8 => "P1_8".into(),
            PatternId::P2_8 => "P2_8".into(),
            PatternId::P3_8 => "P3_8".into(),
            PatternId::P4_8 => "P4_8".into(),
        }
    }

    pub fn vertex_count(self) -> usize {
        match self {
            PatternId::Hole(k) => k,
            PatternId::P1_6 | PatternId::P2_6 => 6,
            PatternId::P1_7 | PatternId::P2_7 => 7,
            _ => 8,
        }
    }
}

impl fmt::Display for PatternId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for PatternId {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(k) = s.strip_prefix('C') {
            if let Ok(k) = k.parse::<usize>() {
                if (5..=62).contains(&k) {
                    return Ok(PatternId::Hole(k));
                }
            }
        }
        PatternId::SPORADIC
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| CatalogError::UnknownPattern(s.to_string()))
    }
}

/// Induced embedding: pattern vertex `i` maps to host vertex `map[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Embedding {
    pub map: Vec<VertexId>,
}

impl Embedding {
    pub fn image(&self) -> VertexSet {
        self.map.iter().copied().collect()
    }

    pub fn is_valid(&self, pattern: &SmallGraph, host: &SmallGraph) -> bool {
        if self.map.len() != pattern.n() || self.image().len() != pattern.n() {
            return false;
        }
        if self.map.iter().any(|&v| v >= host.n()) {
            return false;
        }
        (0..pattern.n()).all(|i| {
            (0..i).all(|j| pattern.has_edge(i, j) == host.has_edge(self.map[i], self.map[j]))
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown pattern name {0:?}")]
    UnknownPattern(String),
    #[error("catalog line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("{pattern}: violates constraint {constraint}")]
    Violated {
        pattern: PatternId,
        constraint: String,
    },
    #[error("constraints unsatisfiable: {0}")]
    Unsatisfiable(String),
    #[error("{0} is missing from the catalog")]
    Missing(PatternId),
}

/// Adjacency facts extracted from an embedding proof, in 0-based labels.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProofConstraints {
    pub vertex_count: usize,
    /// Offset between the proof's vertex labels and 0-based indices.
    pub label_base: usize,
    pub required_nonedges: BTreeSet<(VertexId, VertexId)>,
    pub required_edges: BTreeSet<(VertexId, VertexId)>,
    pub antilink_lower_bounds: BTreeMap<VertexId, VertexSet>,
}

fn ordered(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    (a.min(b), a.max(b))
}

impl ProofConstraints {
    pub fn new(vertex_count: usize) -> Self {
        ProofConstraints {
            vertex_count,
            ..Default::default()
        }
    }

    pub fn add_nonedge(&mut self, a: VertexId, b: VertexId) {
        self.required_nonedges.insert(ordered(a, b));
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId) {
        self.required_edges.insert(ordered(a, b));
    }

    /// Records `S ⊆ antilink(v)`, with the implied non-edges.
    pub fn add_antilink_bound(&mut self, v: VertexId, s: VertexSet) {
        *self.antilink_lower_bounds.entry(v).or_default() |= s;
        for w in s.iter() {
            self.add_nonedge(v, w);
        }
    }

    /// Records `antilink(v) = S` exactly.
    pub fn add_antilink_exact(&mut self, v: VertexId, s: VertexSet) {
        self.add_antilink_bound(v, s);
        for w in (0..self.vertex_count).filter(|&w| w != v && !s.contains(w)) {
            self.add_edge(v, w);
        }
    }

    pub fn label(&self, v: VertexId) -> usize {
        v + self.label_base
    }

    /// Checks internal consistency: ranges, and disjoint edge and non-edge sets.
    pub fn validate(&self) -> Result<(), CatalogError> {
        let n = self.vertex_count;
        for &(a, b) in self.required_edges.iter().chain(&self.required_nonedges) {
            if a >= n || b >= n || a == b {
                return Err(CatalogError::Unsatisfiable(format!(
                    "pair {}{} out of range",
                    self.label(a),
                    self.label(b)
                )));
            }
        }
        if let Some(&(a, b)) = self
            .required_edges
            .intersection(&self.required_nonedges)
            .next()
        {
            return Err(CatalogError::Unsatisfiable(format!(
                "pair {}{} is both a required edge and a required non-edge",
                self.label(a),
                self.label(b)
            )));
        }
        Ok(())
    }

    /// Every constraint, rendered with its status on `g`.
    pub fn report(&self, g: &SmallGraph) -> Vec<(String, bool)> {
        let mut out = Vec::new();
        for &(a, b) in &self.required_edges {
            out.push((
                format!("edge {}{}", self.label(a), self.label(b)),
                g.has_edge(a, b),
            ));
        }
        for &(a, b) in &self.required_nonedges {
            out.push((
                format!("nonedge {}{}", self.label(a), self.label(b)),
                !g.has_edge(a, b),
            ));
        }
        for (&v, &s) in &self.antilink_lower_bounds {
            out.push((
                format!(
                    "antilink({}) >= {}",
                    self.label(v),
                    s.display_with_base(self.label_base)
                ),
                s.is_subset(g.antilink(v)),
            ));
        }
        out
    }

    pub fn first_violation(&self, g: &SmallGraph) -> Option<String> {
        if g.n() != self.vertex_count {
            return Some(format!("vertex count {}", self.vertex_count));
        }
        self.report(g)
            .into_iter()
            .find(|(_, ok)| !ok)
            .map(|(c, _)| c)
    }

    pub fn is_satisfied_by(&self, g: &SmallGraph) -> bool {
        self.first_violation(g).is_none()
    }
}

#[derive(Debug, Clone)]
pub struct ForbiddenCatalog {
    pub patterns: Vec<(PatternId, SmallGraph)>,
    pub constraints: BTreeMap<PatternId, ProofConstraints>,
}

impl ForbiddenCatalog {
    pub fn get(&self, id: PatternId) -> Option<&SmallGraph> {
        self.patterns.iter().find(|(p, _)| *p == id).map(|(_, g)| g)
    }

    /// A copy without pattern `id`.
    pub fn without(&self, id: PatternId) -> ForbiddenCatalog {
        ForbiddenCatalog {
            patterns: self
                .patterns
                .iter()
                .filter(|(p, _)| *p != id)
                .cloned()
                .collect(),
            constraints: self.constraints.clone(),
        }
    }

    /// Members of the catalog with fewer than `n` vertices, holes included.
    pub fn smaller_than(&self, n: usize) -> ForbiddenCatalog {
        ForbiddenCatalog {
            patterns: self
                .patterns
                .iter()
                .filter(|(_, g)| g.n() < n)
                .cloned()
                .collect(),
            constraints: self.constraints.clone(),
        }
    }

    pub fn to_tsv(&self) -> String {
        self.patterns
            .iter()
            .map(|(p, g)| format!("{}\t{}\n", p, g.to_graph6()))
            .collect()
    }
}

/// Parses "NAME<TAB>graph6" lines; blank lines and `#` comments are skipped.
pub fn parse_catalog(text: &str) -> Result<Vec<(PatternId, SmallGraph)>, CatalogError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, code) = line
            .split_once('\t')
            .ok_or_else(|| CatalogError::Malformed {
                line: i + 1,
                reason: "expected NAME<TAB>graph6".into(),
            })?;
        let id: PatternId = name.trim().parse()?;
        let g = graph6_decode(code.trim()).map_err(|e| CatalogError::Malformed {
            line: i + 1,
            reason: e.to_string(),
        })?;
        out.push((id, g));
    }
    Ok(out)
}

/// Parses the constraint file format used by `data/constraints.txt`.
pub fn parse_constraints(
    text: &str,
) -> Result<BTreeMap<PatternId, ProofConstraints>, CatalogError> {
    let mut out = BTreeMap::new();
    let mut current: Option<(PatternId, ProofConstraints)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |reason: &str| CatalogError::Malformed {
            line: i + 1,
            reason: reason.to_string(),
        };
        let words: Vec<&str> = line.split_whitespace().collect();
        if words[0] == "pattern" {
            let id: PatternId = words.get(1).ok_or_else(|| bad("missing name"))?.parse()?;
            current = Some((id, ProofConstraints::new(id.vertex_count())));
            continue;
        }
        let (_, c) = current
            .as_mut()
            .ok_or_else(|| bad("directive outside a pattern block"))?;
        let nums = |ws: &[&str]| -> Result<Vec<usize>, CatalogError> {
            ws.iter()
                .map(|w| {
                    w.parse::<usize>()
                        .map_err(|_| bad("expected a vertex label"))
                })
                .collect()
        };
        let base = c.label_base;
        let idx = |label: usize| -> Result<usize, CatalogError> {
            label
                .checked_sub(base)
                .ok_or_else(|| bad("label below base"))
        };
        match words[0] {
            "vertices" => c.vertex_count = nums(&words[1..])?[0],
            "base" => c.label_base = nums(&words[1..])?[0],
            "edge" | "nonedge" => {
                let v = nums(&words[1..])?;
                if v.len() != 2 {
                    return Err(bad("expected two labels"));
                }
                let (a, b) = (idx(v[0])?, idx(v[1])?);
                if words[0] == "edge" {
                    c.add_edge(a, b);
                } else {
                    c.add_nonedge(a, b);
                }
            }
            "stable" => {
                let v = nums(&words[1..])?;
                for (k, &a) in v.iter().enumerate() {
                    for &b in &v[k + 1..] {
                        c.add_nonedge(idx(a)?, idx(b)?);
                    }
                }
            }
            "antilink" => {
                if words.len() < 3 {
                    return Err(bad("expected antilink v (>=|=) labels"));
                }
                let v = idx(nums(&words[1..2])?[0])?;
                let set: VertexSet = nums(&words[3..])?
                    .into_iter()
                    .map(idx)
                    .collect::<Result<_, _>>()?;
                match words[2] {
                    ">=" => c.add_antilink_bound(v, set),
                    "=" => c.add_antilink_exact(v, set),
                    _ => return Err(bad("expected >= or =")),
                }
            }
            "end" => {
                let (id, c) = current.take().expect("inside a block");
                out.insert(id, c);
            }
            _ => return Err(bad("unknown directive")),
        }
    }
    if current.is_some() {
        return Err(CatalogError::Malformed {
            line: text.lines().count(),
            reason: "unterminated pattern block".into(),
        });
    }
    Ok(out)
}

/// The bundled catalog, validated against its proof constraints.
pub fn builtin_catalog() -> Result<ForbiddenCatalog, CatalogError> {
    let patterns = parse_catalog(CATALOG_DATA)?;
    let constraints = parse_constraints(CONSTRAINT_DATA)?;
    for id in PatternId::SPORADIC {
        if !patterns.iter().any(|(p, _)| *p == id) {
            return Err(CatalogError::Missing(id));
        }
    }
    for (id, g) in &patterns {
        if let Some(c) = constraints.get(id) {
            c.validate()?;
            if let Some(violation) = c.first_violation(g) {
                return Err(CatalogError::Violated {
                    pattern: *id,
                    constraint: violation,
                });
            }
        }
    }
    Ok(ForbiddenCatalog {
        patterns,
        constraints,
    })
}

/// Lexicographically least induced embedding of `h` into `g`.
pub fn find_induced(h: &SmallGraph, g: &SmallGraph) -> Option<Embedding> {
    if h.n() > g.n() || h.edge_count() > g.edge_count() {
        return None;
    }
    let hc = h.edge_count();
    let gc = g.n() * (g.n().saturating_sub(1)) / 2 - g.edge_count();
    if h.n() * h.n().saturating_sub(1) / 2 - hc > gc {
        return None;
    }
    let mut map = Vec::with_capacity(h.n());
    if extend_embedding(h, g, &mut map, VertexSet::EMPTY) {
        Some(Embedding { map })
    } else {
        None
    }
}

fn extend_embedding(
    h: &SmallGraph,
    g: &SmallGraph,
    map: &mut Vec<VertexId>,
    used: VertexSet,
) -> bool {
    let i = map.len();
    if i == h.n() {
        return true;
    }
    // Host vertices consistent with every earlier assignment.
    let mut cands = g.vertices() - used;
    for (j, &w) in map.iter().enumerate() {
        if h.has_edge(i, j) {
            cands &= g.link(w);
        } else {
            cands -= g.link(w);
        }
    }
    let need = h.degree(i);
    for v in cands.iter() {
        if g.degree(v) < need {
            continue;
        }
        map.push(v);
        if extend_embedding(h, g, map, used.with(v)) {
            return true;
        }
        map.pop();
    }
    false
}

fn is_cycle(g: &SmallGraph, s: VertexSet) -> bool {
    s.len() >= 3
        && s.iter().all(|v| (g.link(v) & s).len() == 2)
        && g.reach(VertexSet::singleton(s.first().unwrap()), s) == s
}

/// Vertex set of an induced cycle of length at least `min_len`, by subset scan.
///
/// Shorter holes are reported first; ties go to the smaller bitmask.
pub fn long_hole(g: &SmallGraph, min_len: usize) -> Option<VertexSet> {
    assert!(min_len >= 4, "holes shorter than 4 are not holes");
    let n = g.n();
    for k in min_len..=n {
        let mut best: Option<VertexSet> = None;
        for_each_k_subset(n, k, &mut |s| {
            if best.is_none() && is_cycle(g, s) {
                best = Some(s);
            }
            best.is_none()
        });
        if best.is_some() {
            return best;
        }
    }
    None
}

/// Calls `f` on each `k`-subset of `0..n` in increasing bitmask order until it returns false.
fn for_each_k_subset(n: usize, k: usize, f: &mut dyn FnMut(VertexSet) -> bool) {
    if k > n {
        return;
    }
    if k == 0 {
        f(VertexSet::EMPTY);
        return;
    }
    let limit = 1u64 << n;
    let mut s: u64 = (1u64 << k) - 1;
    while s < limit {
        if !f(VertexSet(s)) {
            return;
        }
        // Gosper's hack
        let c = s & s.wrapping_neg();
        let r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
}

/// Orders a hole's vertices cyclically from its least vertex towards the smaller neighbour.
pub fn hole_embedding(g: &SmallGraph, hole: VertexSet) -> Embedding {
    let start = hole.first().expect("nonempty hole");
    let mut map = vec![start];
    let mut prev = start;
    let mut cur = (g.link(start) & hole).first().unwrap();
    while cur != start {
        map.push(cur);
        let next = ((g.link(cur) & hole).without(prev)).first().unwrap();
        prev = cur;
        cur = next;
    }
    Embedding { map }
}

/// First catalog member found in `g`: holes by length, then sporadic graphs in catalog order.
pub fn forbidden_witness(
    g: &SmallGraph,
    catalog: &ForbiddenCatalog,
) -> Option<(PatternId, Embedding)> {
    if let Some(h) = long_hole(g, 5) {
        return Some((PatternId::Hole(h.len()), hole_embedding(g, h)));
    }
    for (id, p) in &catalog.patterns {
        if let PatternId::Hole(_) = id {
            continue;
        }
        if let Some(e) = find_induced(p, g) {
            return Some((*id, e));
        }
    }
    None
}

pub fn is_forbidden_free(g: &SmallGraph, catalog: &ForbiddenCatalog) -> bool {
    forbidden_witness(g, catalog).is_none()
}

/// Extra filter applied by [`resolve_from_constraints`] when minimality is requested.
pub struct Minimality<'a> {
    pub catalog: &'a ForbiddenCatalog,
    /// Decides whether a one-vertex-deleted subgraph is excluded.
    pub deletion_excluded: &'a (dyn Fn(&SmallGraph) -> bool + Sync),
}

/// Every labelled graph meeting the constraints, optionally filtered for minimality.
pub fn resolve_from_constraints(
    c: &ProofConstraints,
    minimality: Option<&Minimality<'_>>,
) -> Result<Vec<SmallGraph>, CatalogError> {
    c.validate()?;
    let n = c.vertex_count;
    let free: Vec<(VertexId, VertexId)> = (1..n)
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .filter(|p| !c.required_edges.contains(p) && !c.required_nonedges.contains(p))
        .collect();
    if free.len() > 24 {
        return Err(CatalogError::Unsatisfiable(format!(
            "{} unconstrained pairs is too many to enumerate",
            free.len()
        )));
    }
    let base_edges: Vec<_> = c.required_edges.iter().copied().collect();
    let base = SmallGraph::from_edges(n, &base_edges);
    let smaller = minimality.map(|m| m.catalog.smaller_than(n));
    let mut out = Vec::new();
    for mask in 0u64..1 << free.len() {
        let mut g = base.clone();
        for (k, &(a, b)) in free.iter().enumerate() {
            if mask >> k & 1 == 1 {
                g = g.with_edge(a, b);
            }
        }
        if !c.is_satisfied_by(&g) {
            continue;
        }
        if let (Some(m), Some(smaller)) = (minimality, smaller.as_ref()) {
            if !g.is_connected() || !g.is_coconnected() {
                continue;
            }
            if !is_forbidden_free_below(&g, smaller, n) {
                continue;
            }
            let all = g.vertices();
            if !all
                .iter()
                .all(|v| (m.deletion_excluded)(&g.induced(all.without(v))))
            {
                continue;
            }
        }
        out.push(g);
    }
    if out.is_empty() {
        return Err(CatalogError::Unsatisfiable(
            "no graph meets every constraint".into(),
        ));
    }
    Ok(out)
}

/// Forbidden-freeness against holes shorter than `n` and the given sporadic members.
fn is_forbidden_free_below(g: &SmallGraph, smaller: &ForbiddenCatalog, n: usize) -> bool {
    if let Some(h) = long_hole(g, 5) {
        if h.len() < n {
            return false;
        }
    }
    smaller
        .patterns
        .iter()
        .all(|(_, p)| find_induced(p, g).is_none())
}
