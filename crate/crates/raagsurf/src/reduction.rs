//! The reduction calculus: moves R0 to R12, the optional doubling moves, a
//! memoised exclusion database and a classifier that records auditable traces.
//!
//! Every move is evaluated on a concrete instantiation by [`Engine::evaluate`],
//! which returns the derived graphs that must in turn be excluded. The search
//! in [`Engine::find_move`] only enumerates instantiations in a fixed order and
//! defers to `evaluate`, so replaying a trace checks exactly what the search
//! checked.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::RwLock;

use base64::engine::general_purpose::STANDARD as BASE64;
use base64::Engine as _;
use thiserror::Error;

use crate::graph::{canonical_code, CanonicalCode, GraphError, SmallGraph, VertexId, VertexSet};
use crate::ops::{
    central_extension, dense_within, double_along, is_chordal, join_classes, set_commutator,
    set_partitions,
};
use crate::patterns::{find_induced, forbidden_witness, Embedding, ForbiddenCatalog, PatternId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveId {
    R0Chordal,
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    R12,
    D1DoubleSeparatingClique,
    D2DoubleEdgeRemoval,
    SPSeparatingPair,
}

impl MoveId {
    pub const STANDARD: [MoveId; 13] = [
        MoveId::R0Chordal,
        MoveId::R1,
        MoveId::R2,
        MoveId::R3,
        MoveId::R4,
        MoveId::R5,
        MoveId::R6,
        MoveId::R7,
        MoveId::R8,
        MoveId::R9,
        MoveId::R10,
        MoveId::R11,
        MoveId::R12,
    ];

    pub const EXTENDED: [MoveId; 3] = [
        MoveId::D1DoubleSeparatingClique,
        MoveId::D2DoubleEdgeRemoval,
        MoveId::SPSeparatingPair,
    ];

    pub fn code(self) -> &'static str {
        match self {
            MoveId::R0Chordal => "R0",
            MoveId::R1 => "R1",
            MoveId::R2 => "R2",
            MoveId::R3 => "R3",
            MoveId::R4 => "R4",
            MoveId::R5 => "R5",
            MoveId::R6 => "R6",
            MoveId::R7 => "R7",
            MoveId::R8 => "R8",
            MoveId::R9 => "R9",
            MoveId::R10 => "R10",
            MoveId::R11 => "R11",
            MoveId::R12 => "R12",
            MoveId::D1DoubleSeparatingClique => "D1",
            MoveId::D2DoubleEdgeRemoval => "D2",
            MoveId::SPSeparatingPair => "SP",
        }
    }
}

impl fmt::Display for MoveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for MoveId {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MoveId::STANDARD
            .into_iter()
            .chain(MoveId::EXTENDED)
            .find(|m| m.code() == s)
            .ok_or_else(|| EngineError::Format(format!("unknown move {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    Set(VertexSet),
    Vertex(VertexId),
}

/// Named values instantiating a move, in the order they were chosen.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MoveParams(pub Vec<(String, Param)>);

impl MoveParams {
    pub fn new() -> Self {
        MoveParams(Vec::new())
    }

    pub fn with_set(mut self, name: &str, s: VertexSet) -> Self {
        self.0.push((name.to_string(), Param::Set(s)));
        self
    }

    pub fn with_vertex(mut self, name: &str, v: VertexId) -> Self {
        self.0.push((name.to_string(), Param::Vertex(v)));
        self
    }

    pub fn set(&self, name: &str) -> Option<VertexSet> {
        self.0.iter().find_map(|(k, p)| match p {
            Param::Set(s) if k == name => Some(*s),
            _ => None,
        })
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.0.iter().find_map(|(k, p)| match p {
            Param::Vertex(v) if k == name => Some(*v),
            _ => None,
        })
    }
}

impl fmt::Display for MoveParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, p)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match p {
                Param::Set(s) => write!(f, "{k}={s}")?,
                Param::Vertex(v) => write!(f, "{k}={v}")?,
            }
        }
        Ok(())
    }
}

/// One move applied to one graph, with the canonical codes of the graphs it defers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub mv: MoveId,
    pub params: MoveParams,
    pub derived: Vec<CanonicalCode>,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.mv)?;
        if !self.params.0.is_empty() {
            write!(f, " {}", self.params)?;
        }
        if !self.derived.is_empty() {
            let codes: Vec<&str> = self.derived.iter().map(|c| c.as_str()).collect();
            write!(f, " -> {}", codes.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for TraceStep {
    type Err = EngineError;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let (head, tail) = match line.split_once(" -> ") {
            Some((h, t)) => (h, Some(t)),
            None => (line, None),
        };
        let mut words = head.split_whitespace();
        let mv: MoveId = words
            .next()
            .ok_or_else(|| EngineError::Format("empty trace step".into()))?
            .parse()?;
        let mut params = MoveParams::new();
        for w in words {
            let (k, v) = w
                .split_once('=')
                .ok_or_else(|| EngineError::Format(format!("bad parameter {w:?}")))?;
            let p = if v.starts_with('{') {
                Param::Set(
                    v.parse()
                        .map_err(|e: GraphError| EngineError::Format(e.to_string()))?,
                )
            } else {
                Param::Vertex(
                    v.parse()
                        .map_err(|_| EngineError::Format(format!("bad vertex {v:?}")))?,
                )
            };
            params.0.push((k.to_string(), p));
        }
        let derived = tail
            .map(|t| {
                t.split_whitespace()
                    .map(|c| CanonicalCode::from_canonical_string(c.to_string()))
                    .collect()
            })
            .unwrap_or_default();
        Ok(TraceStep {
            mv,
            params,
            derived,
        })
    }
}

/// The move that eliminated a graph. Derived graphs carry their own traces in the db.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Forbidden(PatternId, Embedding),
    Excluded(Trace),
    Irreducible,
}

impl Classification {
    pub fn is_excluded(&self) -> bool {
        matches!(self, Classification::Excluded(_))
    }

    pub fn verdict(&self) -> &'static str {
        match self {
            Classification::Forbidden(..) => "FORBIDDEN",
            Classification::Excluded(_) => "EXCLUDED",
            Classification::Irreducible => "IRREDUCIBLE",
        }
    }

    /// The first move of an exclusion, if any.
    pub fn first_move(&self) -> Option<MoveId> {
        match self {
            Classification::Excluded(t) => t.steps.first().map(|s| s.mv),
            _ => None,
        }
    }

    fn blob(&self) -> String {
        let text = match self {
            Classification::Forbidden(p, e) => {
                let m: Vec<String> = e.map.iter().map(|v| v.to_string()).collect();
                format!("{p} {}", m.join(","))
            }
            Classification::Excluded(t) => t
                .steps
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join("\n"),
            Classification::Irreducible => String::new(),
        };
        BASE64.encode(text)
    }

    fn from_record(verdict: &str, blob: &str) -> Result<Self, EngineError> {
        let bytes = BASE64
            .decode(blob)
            .map_err(|e| EngineError::Format(format!("trace blob: {e}")))?;
        let text = String::from_utf8(bytes)
            .map_err(|_| EngineError::Format("trace blob is not text".into()))?;
        match verdict {
            "FORBIDDEN" => {
                let (name, map) = text.split_once(' ').ok_or_else(|| {
                    EngineError::Format("forbidden record needs a pattern and a map".into())
                })?;
                let id: PatternId = name
                    .parse()
                    .map_err(|e| EngineError::Format(format!("{e}")))?;
                let map = map
                    .split(',')
                    .map(|v| v.parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| EngineError::Format("bad embedding".into()))?;
                Ok(Classification::Forbidden(id, Embedding { map }))
            }
            "EXCLUDED" => {
                let steps = text
                    .lines()
                    .map(str::parse)
                    .collect::<Result<Vec<TraceStep>, _>>()?;
                if steps.is_empty() {
                    return Err(EngineError::Format(
                        "excluded record without a trace".into(),
                    ));
                }
                Ok(Classification::Excluded(Trace { steps }))
            }
            "IRREDUCIBLE" if text.is_empty() => Ok(Classification::Irreducible),
            "IRREDUCIBLE" => Err(EngineError::Format(
                "irreducible record with a trace".into(),
            )),
            other => Err(EngineError::Format(format!("unknown verdict {other:?}"))),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("malformed record: {0}")]
    Format(String),
    #[error("db line {line}: {reason}")]
    InvalidRecord { line: usize, reason: String },
    #[error("conflicting verdicts for {0}")]
    Conflict(CanonicalCode),
    #[error("replay of {code} failed: {reason}")]
    Replay { code: CanonicalCode, reason: String },
    #[error("io error: {0}")]
    Io(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Which vertices are removed before taking links in condition (*).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarReading {
    /// `U_i = (K_i ∖ C(L)) ∪ Lk(K_i ∖ C(L))`.
    CentreComplement,
    /// `U_i = (K_i ∖ L) ∪ Lk(K_i ∖ L)`.
    SetComplement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    pub star_reading: StarReading,
    /// Allow the parts of the amalgam in (*) and R4 to be unions of components.
    pub star_groupings: bool,
    /// Accept a one-part amalgam in (*).
    pub star_single_part: bool,
    /// R4, R6, R8 and R9 also require the vertex-deleted graph to be excluded.
    pub strict_deletions: bool,
    /// Append D1, D2 and SP after R12.
    pub extended: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            star_reading: StarReading::CentreComplement,
            star_groupings: true,
            star_single_part: false,
            strict_deletions: false,
            extended: false,
        }
    }
}

impl EngineConfig {
    pub fn moves(&self) -> Vec<MoveId> {
        let mut v = MoveId::STANDARD.to_vec();
        if self.extended {
            v.extend(MoveId::EXTENDED);
        }
        v
    }

    /// Every reading switch, as `key=value` pairs.
    pub fn fingerprint(&self) -> String {
        let onoff = |b: bool| if b { "on" } else { "off" };
        format!(
            "star={} groupings={} single_part={} strict={} moves={}",
            match self.star_reading {
                StarReading::CentreComplement => "centre-complement",
                StarReading::SetComplement => "set-complement",
            },
            onoff(self.star_groupings),
            onoff(self.star_single_part),
            onoff(self.strict_deletions),
            if self.extended {
                "extended"
            } else {
                "standard"
            }
        )
    }
}

/// Canonical code to classification, safe for concurrent readers and writers.
#[derive(Debug, Default)]
pub struct ExclusionDb {
    map: RwLock<HashMap<CanonicalCode, Classification>>,
}

impl ExclusionDb {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, code: &CanonicalCode) -> Option<Classification> {
        self.map.read().unwrap().get(code).cloned()
    }

    /// Inserts unless present; a different verdict for the same code is a conflict.
    pub fn insert(&self, code: CanonicalCode, c: Classification) -> Result<(), EngineError> {
        let mut map = self.map.write().unwrap();
        if let Some(old) = map.get(&code) {
            if old.verdict() != c.verdict() {
                return Err(EngineError::Conflict(code));
            }
            return Ok(());
        }
        map.insert(code, c);
        Ok(())
    }

    pub fn merge(&self, other: &ExclusionDb) -> Result<(), EngineError> {
        for (code, c) in other.entries() {
            self.insert(code, c)?;
        }
        Ok(())
    }

    /// All records, sorted by code.
    pub fn entries(&self) -> Vec<(CanonicalCode, Classification)> {
        let map = self.map.read().unwrap();
        let sorted: BTreeMap<_, _> = map.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        sorted.into_iter().collect()
    }

    pub fn to_text(&self) -> String {
        self.entries()
            .into_iter()
            .map(|(code, c)| format!("{code}\t{}\t{}\n", c.verdict(), c.blob()))
            .collect()
    }

    /// Parses the line format without replaying anything.
    pub fn from_text(text: &str) -> Result<ExclusionDb, EngineError> {
        let db = ExclusionDb::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let bad = |reason: String| EngineError::InvalidRecord {
                line: i + 1,
                reason,
            };
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(bad("expected CODE<TAB>VERDICT<TAB>TRACE".into()));
            }
            let c = Classification::from_record(fields[1], fields[2])
                .map_err(|e| bad(e.to_string()))?;
            db.insert(
                CanonicalCode::from_canonical_string(fields[0].to_string()),
                c,
            )
            .map_err(|e| bad(e.to_string()))?;
        }
        Ok(db)
    }

    pub fn save(&self, path: &Path) -> Result<(), EngineError> {
        std::fs::write(path, self.to_text()).map_err(|e| EngineError::Io(e.to_string()))
    }
}

type DenseKey = (u64, u64, Vec<u64>);

/// Memoised predicate evaluation on one host graph.
struct Ctx<'a> {
    g: &'a SmallGraph,
    cfg: EngineConfig,
    star: RefCell<HashMap<u64, bool>>,
    dense: RefCell<HashMap<DenseKey, bool>>,
}

impl<'a> Ctx<'a> {
    fn new(g: &'a SmallGraph, cfg: EngineConfig) -> Self {
        Ctx {
            g,
            cfg,
            star: RefCell::new(HashMap::new()),
            dense: RefCell::new(HashMap::new()),
        }
    }

    fn dense(&self, within: VertexSet, x: VertexSet, ys: &[VertexSet]) -> bool {
        let key = (
            within.bits(),
            x.bits(),
            ys.iter().map(|y| y.bits()).collect::<Vec<_>>(),
        );
        if let Some(&r) = self.dense.borrow().get(&key) {
            return r;
        }
        let r = dense_within(self.g, within, x, ys).is_some();
        self.dense.borrow_mut().insert(key, r);
        r
    }

    fn star(&self, l: VertexSet) -> bool {
        if let Some(&r) = self.star.borrow().get(&l.bits()) {
            return r;
        }
        let r = star_parts(self, l).is_some();
        self.star.borrow_mut().insert(l.bits(), r);
        r
    }
}

/// Splits the components in `comps` into blocks that each pass `good`.
fn split_blocks(
    comps: &[VertexSet],
    min_blocks: usize,
    groupings: bool,
    good: &dyn Fn(VertexSet) -> bool,
) -> Option<Vec<VertexSet>> {
    if comps.len() < min_blocks || comps.is_empty() {
        return None;
    }
    if !groupings {
        return comps.iter().all(|&c| good(c)).then(|| comps.to_vec());
    }
    let memo: RefCell<HashMap<u64, bool>> = RefCell::new(HashMap::new());
    let union = |b: u64| {
        (0..comps.len())
            .filter(|i| b >> i & 1 == 1)
            .fold(VertexSet::EMPTY, |a, i| a | comps[i])
    };
    let check = |b: u64| *memo.borrow_mut().entry(b).or_insert_with(|| good(union(b)));
    set_partitions(comps.len())
        .into_iter()
        .filter(|blocks| blocks.len() >= min_blocks)
        .find(|blocks| blocks.iter().all(|&b| check(b)))
        .map(|blocks| blocks.into_iter().map(union).collect())
}

fn star_parts(ctx: &Ctx<'_>, l: VertexSet) -> Option<Vec<VertexSet>> {
    let g = ctx.g;
    if l.is_empty() {
        return None;
    }
    let c = g.common_neighbors(l);
    let comps = g.components(g.vertices() - c);
    let min_blocks = if ctx.cfg.star_single_part { 1 } else { 2 };
    let good = |b: VertexSet| {
        let outside = match ctx.cfg.star_reading {
            StarReading::CentreComplement => b,
            StarReading::SetComplement => (b | c) - l,
        };
        let u = outside | g.link_of_set(outside);
        ctx.dense(u, l & b, &[])
    };
    split_blocks(&comps, min_blocks, ctx.cfg.star_groupings, &good)
        .map(|blocks| blocks.into_iter().map(|b| b | c).collect())
}

/// Condition (*) for `L`: the parts `K_i` of a witnessing amalgam over `C(L)`.
pub fn star_witness(g: &SmallGraph, l: VertexSet, cfg: EngineConfig) -> Option<Vec<VertexSet>> {
    star_parts(&Ctx::new(g, cfg), l)
}

pub fn star_property(g: &SmallGraph, l: VertexSet, cfg: EngineConfig) -> bool {
    star_witness(g, l, cfg).is_some()
}

/// Induced subgraph on `part`, with `l ⊆ part` translated to its labels.
fn induced_with(g: &SmallGraph, part: VertexSet, l: VertexSet) -> (SmallGraph, VertexSet) {
    let rank = |v: VertexId| (part & VertexSet::full(v)).len();
    (g.induced(part), l.iter().map(rank).collect())
}

fn parts_of(g: &SmallGraph, parts: &[VertexSet]) -> Vec<SmallGraph> {
    parts.iter().map(|&p| g.induced(p)).collect()
}

/// A move that fired: its instantiation and the graphs that had to be excluded.
#[derive(Debug, Clone)]
pub struct MoveInstance {
    pub params: MoveParams,
    pub derived: Vec<SmallGraph>,
}

pub struct Engine {
    pub catalog: ForbiddenCatalog,
    pub config: EngineConfig,
    pub db: ExclusionDb,
}

impl Engine {
    pub fn new(catalog: ForbiddenCatalog, config: EngineConfig) -> Self {
        Engine {
            catalog,
            config,
            db: ExclusionDb::new(),
        }
    }

    pub fn with_db(catalog: ForbiddenCatalog, config: EngineConfig, db: ExclusionDb) -> Self {
        Engine {
            catalog,
            config,
            db,
        }
    }

    /// Classifies the canonical form of `g`, consulting and filling the db.
    pub fn classify(&self, g: &SmallGraph) -> Classification {
        let code = canonical_code(g).expect("graph within the canonical labelling limit");
        self.classify_code(&code)
    }

    pub fn classify_code(&self, code: &CanonicalCode) -> Classification {
        if let Some(c) = self.db.get(code) {
            return c;
        }
        let h = code.graph();
        let c = self.compute(&h);
        self.db
            .insert(code.clone(), c.clone())
            .expect("classification is deterministic");
        c
    }

    pub fn is_excluded(&self, g: &SmallGraph) -> bool {
        self.classify(g).is_excluded()
    }

    fn compute(&self, h: &SmallGraph) -> Classification {
        if let Some((p, e)) = forbidden_witness(h, &self.catalog) {
            return Classification::Forbidden(p, e);
        }
        let oracle = |d: &SmallGraph| self.is_excluded(d);
        let ctx = Ctx::new(h, self.config);
        for mv in self.config.moves() {
            if let Some(inst) = self.search(&ctx, mv, &oracle) {
                return Classification::Excluded(Trace {
                    steps: vec![self.step(mv, inst)],
                });
            }
        }
        Classification::Irreducible
    }

    fn step(&self, mv: MoveId, inst: MoveInstance) -> TraceStep {
        TraceStep {
            mv,
            params: inst.params,
            derived: inst
                .derived
                .iter()
                .map(|d| canonical_code(d).expect("derived graphs are small"))
                .collect(),
        }
    }

    /// First instantiation of `mv` on `g` whose derived graphs all satisfy `oracle`.
    pub fn find_move(
        &self,
        g: &SmallGraph,
        mv: MoveId,
        oracle: &dyn Fn(&SmallGraph) -> bool,
    ) -> Option<MoveInstance> {
        self.search(&Ctx::new(g, self.config), mv, oracle)
    }

    /// First move in configured order that fires on `g`.
    pub fn first_move(
        &self,
        g: &SmallGraph,
        moves: &[MoveId],
        oracle: &dyn Fn(&SmallGraph) -> bool,
    ) -> Option<(MoveId, MoveInstance)> {
        let ctx = Ctx::new(g, self.config);
        moves
            .iter()
            .find_map(|&mv| self.search(&ctx, mv, oracle).map(|i| (mv, i)))
    }

    /// Checks one instantiation; returns the derived graphs if the predicate holds.
    pub fn evaluate(
        &self,
        g: &SmallGraph,
        mv: MoveId,
        params: &MoveParams,
    ) -> Option<Vec<SmallGraph>> {
        self.eval(&Ctx::new(g, self.config), mv, params)
    }

    fn search(
        &self,
        ctx: &Ctx<'_>,
        mv: MoveId,
        oracle: &dyn Fn(&SmallGraph) -> bool,
    ) -> Option<MoveInstance> {
        let g = ctx.g;
        let all = g.vertices();
        let attempt = |params: MoveParams| -> Option<MoveInstance> {
            let derived = self.eval(ctx, mv, &params)?;
            derived
                .iter()
                .all(oracle)
                .then_some(MoveInstance { params, derived })
        };
        let stable_pairs = || {
            all.subsets()
                .filter(|&x| !x.is_empty() && g.is_stable(x))
                .flat_map(|x| x.iter().map(move |v| (x, v)))
        };
        match mv {
            MoveId::R0Chordal | MoveId::R1 | MoveId::R2 => attempt(MoveParams::new()),
            MoveId::R3 => all
                .subsets()
                .filter(|&l| l != all)
                .find_map(|l| attempt(MoveParams::new().with_set("L", l))),
            MoveId::R4 => all
                .subsets()
                .filter(|x| !x.is_empty())
                .find_map(|x| attempt(MoveParams::new().with_set("X", x))),
            MoveId::R5 | MoveId::R7 | MoveId::R10 => g.edges().into_iter().find_map(|(x, y)| {
                attempt(MoveParams::new().with_vertex("x", x).with_vertex("y", y))
            }),
            MoveId::R6 | MoveId::R8 | MoveId::R9 => stable_pairs().find_map(|(xs, x)| {
                attempt(MoveParams::new().with_set("X", xs).with_vertex("x", x))
            }),
            MoveId::R11 => {
                for xs in all.subsets().filter(|x| !x.is_empty()) {
                    let lx = g.link_of_set(xs);
                    if lx == all {
                        continue;
                    }
                    for x in lx.iter() {
                        if !ctx.star(set_commutator(g, lx, g.link(x))) || !ctx.star(g.link(x) - xs)
                        {
                            continue;
                        }
                        for z in (all - xs - lx).without(x).iter() {
                            for t in (g.link(z) - lx).without(x).iter() {
                                let p = MoveParams::new()
                                    .with_set("X", xs)
                                    .with_vertex("x", x)
                                    .with_vertex("z", z)
                                    .with_vertex("t", t);
                                if let Some(i) = attempt(p) {
                                    return Some(i);
                                }
                            }
                        }
                    }
                }
                None
            }
            MoveId::R12 => {
                for x in all.iter() {
                    for y in g.link(x).iter() {
                        for z in g.link(x).without(y).iter() {
                            for t in g.link(z).iter() {
                                let p = MoveParams::new()
                                    .with_vertex("x", x)
                                    .with_vertex("y", y)
                                    .with_vertex("z", z)
                                    .with_vertex("t", t);
                                if let Some(i) = attempt(p) {
                                    return Some(i);
                                }
                            }
                        }
                    }
                }
                None
            }
            MoveId::D1DoubleSeparatingClique | MoveId::D2DoubleEdgeRemoval => {
                for l in all.subsets().filter(|&l| l != all && g.is_clique(l)) {
                    for s in g.components(all - l) {
                        if let Some(i) =
                            attempt(MoveParams::new().with_set("L", l).with_set("S", s))
                        {
                            return Some(i);
                        }
                    }
                }
                None
            }
            MoveId::SPSeparatingPair => {
                for (a, c) in g.complement().edges() {
                    if let Some(i) =
                        attempt(MoveParams::new().with_vertex("a", a).with_vertex("c", c))
                    {
                        return Some(i);
                    }
                }
                None
            }
        }
    }

    fn eval(&self, ctx: &Ctx<'_>, mv: MoveId, p: &MoveParams) -> Option<Vec<SmallGraph>> {
        let g = ctx.g;
        let n = g.n();
        let all = g.vertices();
        let strict = |v: VertexSet| {
            if self.config.strict_deletions {
                vec![g.induced(all - v)]
            } else {
                Vec::new()
            }
        };
        let vertex = |name: &str| p.vertex(name).filter(|&v| v < n);
        let set = |name: &str| p.set(name).filter(|s| s.is_subset(all));
        match mv {
            MoveId::R0Chordal => is_chordal(g).map(|_| Vec::new()),
            MoveId::R1 => (n >= 2 && !g.is_connected()).then(|| parts_of(g, &g.components(all))),
            MoveId::R2 => {
                (n >= 2 && !g.is_coconnected()).then(|| parts_of(g, &g.co_components(all)))
            }
            MoveId::R3 => {
                let l = set("L")?;
                if l == all {
                    return None;
                }
                let classes = join_classes(g, all, l);
                (classes.len() >= 2).then(|| classes.iter().map(|c| g.induced(c.0 | l)).collect())
            }
            MoveId::R4 => {
                let xs = set("X")?;
                if xs.is_empty() {
                    return None;
                }
                // X must separate; a single part is X dense in all of K
                if g.components(all - xs).len() < 2 {
                    return None;
                }
                let c = g.common_neighbors(xs);
                let comps = g.components(all - c);
                let good = |b: VertexSet| ctx.dense(b | c, xs & (b | c), &[]);
                split_blocks(&comps, 1, self.config.star_groupings, &good)?;
                Some(strict(xs))
            }
            MoveId::R5 | MoveId::R7 | MoveId::R10 => {
                let (x, y) = (vertex("x")?, vertex("y")?);
                if !g.has_edge(x, y) {
                    return None;
                }
                let ok = match mv {
                    MoveId::R5 => g.adjacent_sets(g.link(x), g.link(y)),
                    MoveId::R7 => ctx.dense(all, set_commutator(g, g.link(x), g.link(y)), &[]),
                    _ => ctx.star(set_commutator(g, g.link(x), g.link(y))),
                };
                ok.then(|| vec![g.without_edge(x, y)])
            }
            MoveId::R6 | MoveId::R8 | MoveId::R9 => {
                let (xs, x) = (set("X")?, vertex("x")?);
                if !xs.contains(x) || !g.is_stable(xs) {
                    return None;
                }
                let ok = match mv {
                    MoveId::R6 => ctx.dense(all, set_commutator(g, g.link(x), all - xs), &[]),
                    MoveId::R8 => ctx.star(set_commutator(g, g.link(x), all - xs)),
                    _ => {
                        let ys: Vec<VertexSet> = xs.iter().map(|y| g.link(y)).collect();
                        ctx.dense(all - xs, g.link(x), &ys)
                    }
                };
                ok.then(|| strict(VertexSet::singleton(x)))
            }
            MoveId::R11 => {
                let (xs, x, z, t) = (set("X")?, vertex("x")?, vertex("z")?, vertex("t")?);
                let lx = g.link_of_set(xs);
                let ok = lx != all
                    && lx.contains(x)
                    && !(xs | lx).with(x).contains(z)
                    && g.has_edge(z, t)
                    && !lx.with(x).contains(t)
                    && ctx.star(set_commutator(g, lx, g.link(x)))
                    && ctx.star(g.link(x) - xs)
                    && {
                        let w = all - xs.with(x).with(z);
                        ctx.star(set_commutator(g, w, w))
                    };
                ok.then(|| vec![g.without_edge(z, t)])
            }
            MoveId::R12 => {
                let (x, y, z, t) = (vertex("x")?, vertex("y")?, vertex("z")?, vertex("t")?);
                let xy = VertexSet::singleton(x).with(y);
                let zt = VertexSet::singleton(z).with(t);
                let near_xy = xy | g.link_of_set(xy);
                let near_zt = zt | g.link_of_set(zt);
                let ok = g.has_edge(x, y)
                    && g.has_edge(z, t)
                    && g.has_edge(x, z)
                    && !near_zt.contains(y)
                    && !near_xy.contains(t)
                    && ctx.star(set_commutator(g, g.link_of_set(xy), g.link_of_set(zt)))
                    && ctx.dense(all, g.link(x) & near_zt, &[])
                    && {
                        let w = near_xy.without(z);
                        ctx.star(set_commutator(g, w, w))
                    };
                ok.then(|| vec![g.without_edge(x, z), g.without_edge(z, t)])
            }
            MoveId::D1DoubleSeparatingClique | MoveId::D2DoubleEdgeRemoval => {
                let (l, s) = (set("L")?, set("S")?);
                if !g.is_clique(l) || s.is_empty() || s.intersects(l) {
                    return None;
                }
                let rest = all - l - s;
                if rest.is_empty() || g.link_of_set(s).intersects(rest) {
                    return None;
                }
                if mv == MoveId::D1DoubleSeparatingClique {
                    if s.len() < 2 || rest.len() < 2 {
                        return None;
                    }
                    let (k1, l1) = induced_with(g, s | l, l);
                    let (k2, l2) = induced_with(g, rest | l, l);
                    Some(vec![
                        central_extension(&k1, l1).ok()?,
                        central_extension(&k2, l2).ok()?,
                    ])
                } else {
                    let inner = g.induced(s);
                    if s.len() >= rest.len() || inner.edge_count() == 0 {
                        return None;
                    }
                    let (k1, l1) = induced_with(g, s | l, l);
                    let mut stripped = g.clone();
                    for a in s.iter() {
                        for b in (g.link(a) & s).iter().filter(|&b| b > a) {
                            stripped = stripped.without_edge(a, b);
                        }
                    }
                    Some(vec![double_along(&k1, l1).ok()?, stripped])
                }
            }
            MoveId::SPSeparatingPair => {
                let (a, c) = (vertex("a")?, vertex("c")?);
                if a == c || g.has_edge(a, c) || !g.is_connected() {
                    return None;
                }
                let pair = VertexSet::singleton(a).with(c);
                let comps = g.components(all - pair);
                (comps.len() >= 2).then(|| comps.iter().map(|&k| g.induced(k | pair)).collect())
            }
        }
    }

    /// Re-checks a stored classification against the graph its code names.
    pub fn replay(&self, code: &CanonicalCode, c: &Classification) -> Result<(), EngineError> {
        let fail = |reason: String| EngineError::Replay {
            code: code.clone(),
            reason,
        };
        let g = crate::graph::graph6_decode(code.as_str())?;
        if canonical_code(&g)? != *code {
            return Err(fail("code is not canonical".into()));
        }
        match c {
            Classification::Forbidden(p, e) => {
                let pattern = match p {
                    PatternId::Hole(k) => SmallGraph::cycle(*k),
                    _ => self
                        .catalog
                        .get(*p)
                        .cloned()
                        .ok_or_else(|| fail(format!("{p} not in catalog")))?,
                };
                if !e.is_valid(&pattern, &g) {
                    return Err(fail(format!("embedding of {p} is not induced")));
                }
                Ok(())
            }
            Classification::Excluded(t) => {
                let step = t.steps.first().ok_or_else(|| fail("empty trace".into()))?;
                let derived = self
                    .evaluate(&g, step.mv, &step.params)
                    .ok_or_else(|| fail(format!("{step} does not hold")))?;
                let codes: Vec<CanonicalCode> = derived
                    .iter()
                    .map(canonical_code)
                    .collect::<Result<_, _>>()?;
                if codes != step.derived {
                    return Err(fail(format!("{step} cites the wrong derived graphs")));
                }
                for (d, dc) in derived.iter().zip(&codes) {
                    if (d.n(), d.edge_count()) >= (g.n(), g.edge_count()) {
                        return Err(fail(format!("{dc} is not smaller")));
                    }
                    if !self.classify_code(dc).is_excluded() {
                        return Err(fail(format!("{dc} is not excluded")));
                    }
                }
                Ok(())
            }
            Classification::Irreducible => {
                if forbidden_witness(&g, &self.catalog).is_some() {
                    return Err(fail(
                        "irreducible graph contains a forbidden pattern".into(),
                    ));
                }
                let oracle = |d: &SmallGraph| self.is_excluded(d);
                match self.first_move(&g, &self.config.moves(), &oracle) {
                    Some((mv, _)) => Err(fail(format!("{mv} applies"))),
                    None => Ok(()),
                }
            }
        }
    }

    /// Reads a db file, replaying every `sample_every`-th record (0 skips replay).
    pub fn load_db(&self, path: &Path, sample_every: usize) -> Result<ExclusionDb, EngineError> {
        let text = std::fs::read_to_string(path).map_err(|e| EngineError::Io(e.to_string()))?;
        let db = ExclusionDb::from_text(&text)?;
        if sample_every > 0 {
            let checker = Engine::with_db(self.catalog.clone(), self.config, ExclusionDb::new());
            checker.db.merge(&db)?;
            let entries = db.entries();
            for (i, (code, c)) in entries.iter().enumerate() {
                if i % sample_every == 0 {
                    checker
                        .replay(code, c)
                        .map_err(|e| EngineError::InvalidRecord {
                            line: i + 1,
                            reason: e.to_string(),
                        })?;
                }
            }
        }
        Ok(db)
    }

    /// The full derivation of an excluded graph, depth first, each code once.
    pub fn explain(&self, code: &CanonicalCode) -> Vec<(CanonicalCode, Classification)> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        let mut stack = vec![code.clone()];
        while let Some(c) = stack.pop() {
            if !seen.insert(c.clone()) {
                continue;
            }
            let cl = self.classify_code(&c);
            if let Classification::Excluded(t) = &cl {
                for s in &t.steps {
                    stack.extend(s.derived.iter().rev().cloned());
                }
            }
            out.push((c, cl));
        }
        out
    }

    /// Confirms a forbidden verdict uses a pattern that the catalog or hole family holds.
    pub fn witness_is_valid(&self, g: &SmallGraph, p: PatternId, e: &Embedding) -> bool {
        match p {
            PatternId::Hole(k) => e.is_valid(&SmallGraph::cycle(k), g),
            _ => self
                .catalog
                .get(p)
                .is_some_and(|h| e.is_valid(h, g) && find_induced(h, g).is_some()),
        }
    }
}
