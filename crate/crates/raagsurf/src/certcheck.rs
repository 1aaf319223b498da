//! Embedding certificates: load structures, simple anti-paths, the sets
//! Θ(p), and coverage of every Θ(p)∖X by a declared family of good sets.
//!
//! Good sets are trusted. The checker only confirms that every anti-path
//! reaches one of them.

use std::fmt;

use thiserror::Error;

use crate::graph::{SmallGraph, VertexId, VertexSet};

const BUNDLED: [(&str, &str); 12] = [
    ("C5", include_str!("../data/certs/c5.cert")),
    ("C6", include_str!("../data/certs/c6.cert")),
    ("C7", include_str!("../data/certs/c7.cert")),
    ("C8", include_str!("../data/certs/c8.cert")),
    ("P1_6", include_str!("../data/certs/p1_6.cert")),
    ("P2_6", include_str!("../data/certs/p2_6.cert")),
    ("P1_7", include_str!("../data/certs/p1_7.cert")),
    ("P2_7", include_str!("../data/certs/p2_7.cert")),
    ("P1_8", include_str!("../data/certs/p1_8.cert")),
    ("P2_8", include_str!("../data/certs/p2_8.cert")),
    ("P3_8", include_str!("../data/certs/p3_8.cert")),
    ("P4_8", include_str!("../data/certs/p4_8.cert")),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("X is not stable")]
    UnstableX,
    #[error("good set {0} meets X")]
    GoodSetMeetsX(String),
    #[error("vertex {0} is out of range")]
    Vertex(usize),
    #[error("order for {v}: {w} is not in its anti-link")]
    NotInAntilink { v: String, w: String },
    #[error("declared orders are cyclic at {0}")]
    Cyclic(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertMode {
    /// Only declared comparabilities count, so a pass holds for every extension.
    Conservative,
    /// The deterministic linear extension is used.
    Extension,
}

/// Whether the first clause of Θ is `v ≻ v₁` or `v ⪰ v₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaClause {
    Strict,
    Inclusive,
}

/// Strict partial order on the vertices, closed under transitivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Order {
    /// `above[v]`: every `w` with `w ≻ v`.
    above: Vec<VertexSet>,
}

impl Order {
    pub fn empty(n: usize) -> Self {
        Order {
            above: vec![VertexSet::EMPTY; n],
        }
    }

    /// The chain `c[0] ≻ c[1] ≻ ...`.
    pub fn chain(n: usize, c: &[VertexId]) -> Self {
        let mut o = Order::empty(n);
        o.add_chain(c);
        o
    }

    /// Adds `c[0] ≻ c[1] ≻ ...` and re-closes.
    pub fn add_chain(&mut self, c: &[VertexId]) {
        for w in c.windows(2) {
            self.above[w[1]].insert(w[0]);
        }
        self.close();
    }

    fn close(&mut self) {
        loop {
            let mut changed = false;
            for v in 0..self.above.len() {
                let mut up = self.above[v];
                for w in self.above[v].iter() {
                    up |= self.above[w];
                }
                if up != self.above[v] {
                    self.above[v] = up;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// A vertex lying above itself, if the declared chains are cyclic.
    pub fn cycle_at(&self) -> Option<VertexId> {
        (0..self.above.len()).find(|&v| self.above[v].contains(v))
    }

    pub fn greater(&self, w: VertexId, v: VertexId) -> bool {
        self.above[v].contains(w)
    }

    /// Every vertex above `v`.
    pub fn above(&self, v: VertexId) -> VertexSet {
        self.above[v]
    }

    /// Linear extension of the order on `within`: greatest first, ties by `tiebreak` position.
    pub fn linearize(&self, within: VertexSet, tiebreak: &[VertexId]) -> Vec<VertexId> {
        let rank = |v: VertexId| tiebreak.iter().position(|&t| t == v).unwrap_or(usize::MAX);
        let mut left = within;
        let mut out = Vec::with_capacity(within.len());
        while !left.is_empty() {
            let v = left
                .iter()
                .filter(|&v| !self.above[v].intersects(left))
                .min_by_key(|&v| (rank(v), v))
                .expect("acyclic order");
            out.push(v);
            left.remove(v);
        }
        out
    }

    /// The total order given by a list, greatest first.
    pub fn from_ranking(n: usize, ranking: &[VertexId]) -> Self {
        let mut o = Order::empty(n);
        for (i, &v) in ranking.iter().enumerate() {
            for &w in &ranking[..i] {
                o.above[v].insert(w);
            }
        }
        o
    }
}

/// A global order and one order on each anti-link.
///
/// Orders may be partial; [`LoadStructure::extend`] gives the total version.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadStructure {
    pub global: Order,
    pub antilink: Vec<Order>,
}

impl LoadStructure {
    pub fn declared(n: usize) -> Self {
        LoadStructure {
            global: Order::empty(n),
            antilink: vec![Order::empty(n); n],
        }
    }

    /// Total orders extending the declared ones. Unranked vertices follow
    /// the ranked ones in index order; anti-link ties follow the global order.
    pub fn extend(&self, g: &SmallGraph) -> LoadStructure {
        let n = g.n();
        let all = g.vertices();
        let ranking = self.global.linearize(all, &[]);
        let global = Order::from_ranking(n, &ranking);
        let antilink = (0..n)
            .map(|v| Order::from_ranking(n, &self.antilink[v].linearize(g.antilink(v), &ranking)))
            .collect();
        LoadStructure { global, antilink }
    }

    /// Declared orders are acyclic and each anti-link order stays inside its anti-link.
    /// Errors name vertices as `v + base`.
    pub fn check(&self, g: &SmallGraph, base: usize) -> Result<(), CertError> {
        if let Some(v) = self.global.cycle_at() {
            return Err(CertError::Cyclic((v + base).to_string()));
        }
        for v in g.vertices().iter() {
            let o = &self.antilink[v];
            if let Some(w) = o.cycle_at() {
                return Err(CertError::Cyclic(format!("{} at {}", w + base, v + base)));
            }
            let mentioned = (0..g.n()).fold(VertexSet::EMPTY, |acc, w| {
                if o.above(w).is_empty() {
                    acc
                } else {
                    acc.with(w) | o.above(w)
                }
            });
            if let Some(w) = (mentioned - g.antilink(v)).first() {
                return Err(CertError::NotInAntilink {
                    v: (v + base).to_string(),
                    w: (w + base).to_string(),
                });
            }
        }
        Ok(())
    }
}

/// A simple path in the complement graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AntiPath(pub Vec<VertexId>);

impl AntiPath {
    pub fn is_valid(&self, g: &SmallGraph) -> bool {
        let v = &self.0;
        !v.is_empty()
            && v.iter().all(|&x| x < g.n())
            && v.iter().copied().collect::<VertexSet>().len() == v.len()
            && v.windows(2).all(|w| !g.has_edge(w[0], w[1]))
    }

    pub fn last(&self) -> VertexId {
        *self.0.last().expect("non-empty anti-path")
    }

    pub fn display_with_base(&self, base: usize) -> String {
        let parts: Vec<String> = self.0.iter().map(|v| (v + base).to_string()).collect();
        format!("({})", parts.join(","))
    }
}

/// Θ(p): vertices above `v₁`, for each step the part of the anti-link of
/// `vᵢ` at or above `vᵢ₊₁`, and the anti-star of the last vertex.
pub fn theta(g: &SmallGraph, load: &LoadStructure, p: &AntiPath, first: ThetaClause) -> VertexSet {
    let v = &p.0;
    let mut out = load.global.above(v[0]);
    if first == ThetaClause::Inclusive {
        out.insert(v[0]);
    }
    for w in v.windows(2) {
        out |= (load.antilink[w[0]].above(w[1]) & g.antilink(w[0])).with(w[1]);
    }
    out | g.antistar(p.last())
}

/// Simple anti-paths whose vertices after the first avoid `x`, in the
/// lexicographic order of the load: larger first vertex first, a path
/// before its extensions.
pub fn enumerate_simple_antipaths(
    g: &SmallGraph,
    x: VertexSet,
    load: &LoadStructure,
) -> Vec<AntiPath> {
    fn go(
        g: &SmallGraph,
        x: VertexSet,
        load: &LoadStructure,
        path: &mut Vec<VertexId>,
        out: &mut Vec<AntiPath>,
    ) {
        out.push(AntiPath(path.clone()));
        let last = *path.last().unwrap();
        let used: VertexSet = path.iter().copied().collect();
        let next = g.antilink(last) - used - x;
        for w in load.antilink[last].linearize(next, &[]) {
            path.push(w);
            go(g, x, load, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    for v in load.global.linearize(g.vertices(), &[]) {
        go(g, x, load, &mut vec![v], &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodSet {
    pub set: VertexSet,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub name: String,
    pub graph: SmallGraph,
    /// Offset between stored vertices and the labels used in the file.
    pub base: usize,
    pub x: VertexSet,
    pub load: LoadStructure,
    pub good_sets: Vec<GoodSet>,
    pub mode: CertMode,
    pub theta: ThetaClause,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertReport {
    pub name: String,
    pub mode: CertMode,
    pub paths: usize,
    /// First anti-path whose Θ∖X contains no good set, with that set.
    pub failure: Option<(AntiPath, VertexSet)>,
    /// How many anti-paths fail in total.
    pub failing: usize,
    pub warnings: Vec<String>,
}

impl CertReport {
    pub fn passes(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for CertMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertMode::Conservative => "conservative",
            CertMode::Extension => "extension",
        })
    }
}

impl Certificate {
    /// Parses the certificate text format.
    ///
    /// ```text
    /// # comment
    /// FhFlo            graph6, first significant line
    /// NAME: P1_7
    /// BASE: 1          labels below are offset by this
    /// X: 2 4
    /// ORDER: 2 4 3 1 5 6 7
    /// ANTIORDER 2: 5 7
    /// GOOD: 1 3 5 # why this set is good
    /// MODE: conservative
    /// THETA: strict
    /// ```
    pub fn parse(text: &str) -> Result<Certificate, CertError> {
        let mut graph: Option<SmallGraph> = None;
        let mut name = String::new();
        let mut base = 0usize;
        let mut x_raw: Vec<usize> = Vec::new();
        let mut order_raw: Vec<usize> = Vec::new();
        let mut anti_raw: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut good_raw: Vec<(usize, Vec<usize>, String)> = Vec::new();
        let mut mode = CertMode::Conservative;
        let mut theta = ThetaClause::Strict;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |reason: String| CertError::Parse { line, reason };
            let (body, note) = match raw.find('#') {
                Some(k) => (raw[..k].trim(), raw[k + 1..].trim()),
                None => (raw.trim(), ""),
            };
            if body.is_empty() {
                continue;
            }
            let nums = |s: &str| -> Result<Vec<usize>, CertError> {
                s.split_whitespace()
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| err(format!("bad vertex {t:?}")))
                    })
                    .collect()
            };
            if graph.is_none() {
                graph = Some(SmallGraph::from_graph6(body).map_err(|e| err(e.to_string()))?);
                continue;
            }
            let (key, value) = body
                .split_once(':')
                .ok_or_else(|| err(format!("expected KEY: value, got {body:?}")))?;
            let value = value.trim();
            match key.trim() {
                "NAME" => name = value.to_string(),
                "BASE" => {
                    base = value
                        .parse()
                        .map_err(|_| err(format!("bad base {value:?}")))?
                }
                "X" => x_raw = nums(value)?,
                "ORDER" => order_raw = nums(value)?,
                "GOOD" => good_raw.push((line, nums(value)?, note.to_string())),
                "MODE" => {
                    mode = match value {
                        "conservative" => CertMode::Conservative,
                        "extension" => CertMode::Extension,
                        _ => return Err(err(format!("unknown mode {value:?}"))),
                    }
                }
                "THETA" => {
                    theta = match value {
                        "strict" => ThetaClause::Strict,
                        "inclusive" => ThetaClause::Inclusive,
                        _ => return Err(err(format!("unknown theta clause {value:?}"))),
                    }
                }
                k if k.starts_with("ANTIORDER") => {
                    let v = k["ANTIORDER".len()..].trim();
                    let v = v
                        .parse::<usize>()
                        .map_err(|_| err(format!("bad vertex {v:?}")))?;
                    anti_raw.push((v, nums(value)?));
                }
                k => return Err(err(format!("unknown key {k:?}"))),
            }
        }
        let graph = graph.ok_or(CertError::Parse {
            line: 0,
            reason: "missing graph6 line".into(),
        })?;
        let n = graph.n();
        let local = |v: usize| -> Result<VertexId, CertError> {
            v.checked_sub(base)
                .filter(|&u| u < n)
                .ok_or(CertError::Vertex(v))
        };
        let locals = |vs: &[usize]| vs.iter().map(|&v| local(v)).collect::<Result<Vec<_>, _>>();
        let x: VertexSet = locals(&x_raw)?.into_iter().collect();
        let mut load = LoadStructure::declared(n);
        load.global.add_chain(&locals(&order_raw)?);
        for (v, chain) in &anti_raw {
            let v = local(*v)?;
            load.antilink[v].add_chain(&locals(chain)?);
        }
        let good_sets = good_raw
            .iter()
            .map(|(_, vs, note)| {
                Ok(GoodSet {
                    set: locals(vs)?.into_iter().collect(),
                    note: note.clone(),
                })
            })
            .collect::<Result<Vec<_>, CertError>>()?;
        Ok(Certificate {
            name,
            graph,
            base,
            x,
            load,
            good_sets,
            mode,
            theta,
        })
    }

    fn label(&self, s: VertexSet) -> String {
        s.display_with_base(self.base)
    }

    /// Checks coverage of every anti-path; `mode` overrides the file's mode.
    pub fn check_with(&self, mode: CertMode) -> Result<CertReport, CertError> {
        let g = &self.graph;
        if !g.is_stable(self.x) {
            return Err(CertError::UnstableX);
        }
        if let Some(s) = self.good_sets.iter().find(|s| s.set.intersects(self.x)) {
            return Err(CertError::GoodSetMeetsX(self.label(s.set)));
        }
        self.load.check(g, self.base)?;
        let mut warnings = Vec::new();
        if self.good_sets.iter().any(|s| s.set.is_empty()) {
            warnings.push("the empty set is listed as good, so every anti-path passes".to_string());
        }
        let total = self.load.extend(g);
        let used = match mode {
            CertMode::Conservative => &self.load,
            CertMode::Extension => &total,
        };
        let paths = enumerate_simple_antipaths(g, self.x, &total);
        let failures: Vec<(AntiPath, VertexSet)> = paths
            .iter()
            .filter_map(|p| {
                let t = theta(g, used, p, self.theta) - self.x;
                (!self.good_sets.iter().any(|s| s.set.is_subset(t))).then(|| (p.clone(), t))
            })
            .collect();
        let failing = failures.len();
        let failure = failures.into_iter().next();
        Ok(CertReport {
            name: self.name.clone(),
            mode,
            paths: paths.len(),
            failure,
            failing,
            warnings,
        })
    }

    pub fn check(&self) -> Result<CertReport, CertError> {
        self.check_with(self.mode)
    }

    pub fn describe_failure(&self, r: &CertReport) -> Option<String> {
        r.failure.as_ref().map(|(p, t)| {
            format!(
                "anti-path {} has Θ∖X = {}",
                p.display_with_base(self.base),
                self.label(*t)
            )
        })
    }
}

pub fn check_certificate(cert: &Certificate) -> Result<CertReport, CertError> {
    cert.check()
}

/// The certificates shipped with the crate, by name.
pub fn bundled_certificates() -> Result<Vec<Certificate>, CertError> {
    BUNDLED
        .iter()
        .map(|(name, text)| {
            let mut c = Certificate::parse(text)?;
            if c.name.is_empty() {
                c.name = name.to_string();
            }
            Ok(c)
        })
        .collect()
}
