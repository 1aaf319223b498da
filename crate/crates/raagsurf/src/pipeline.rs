//! Corpus-scale runs: the eight-step elimination at a fixed vertex count,
//! corpus classification and the exhaustive structural verifications.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::sync::RwLock;
use std::time::Instant;

use rayon::prelude::*;

use crate::graph::{canonical_code, enumerate_codes, CanonicalCode, SmallGraph};
use crate::ops::{skew_partition, thcw_predicate};
use crate::patterns::{
    find_induced, forbidden_witness, long_hole, resolve_from_constraints, ForbiddenCatalog,
    Minimality, PatternId,
};
use crate::reduction::{Classification, Engine, MoveId, Trace, TraceStep};

/// The moves applied in each of the eight steps.
pub fn step_moves(step: usize) -> Vec<MoveId> {
    match step {
        1 => vec![
            MoveId::R0Chordal,
            MoveId::R1,
            MoveId::R2,
            MoveId::R3,
            MoveId::R4,
            MoveId::R5,
        ],
        2 => vec![MoveId::R6],
        3 => vec![MoveId::R7],
        4 => vec![MoveId::R8],
        5 => vec![MoveId::R9],
        6 => vec![MoveId::R10],
        7 => vec![MoveId::R11],
        8 => vec![MoveId::R12],
        _ => Vec::new(),
    }
}

#[derive(Debug, Clone)]
pub struct StepResult {
    pub step: usize,
    pub moves: Vec<MoveId>,
    /// Eliminations per move in this step.
    pub applied: BTreeMap<MoveId, usize>,
    pub rounds: usize,
    pub survivors: Vec<CanonicalCode>,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone)]
pub struct StepReport {
    pub n: usize,
    pub fingerprint: String,
    pub total: usize,
    pub forbidden: usize,
    pub steps: Vec<StepResult>,
    pub elapsed_ms: u128,
}

impl StepReport {
    pub fn counts(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.survivors.len()).collect()
    }

    pub fn final_survivors(&self) -> usize {
        self.steps
            .last()
            .map_or(self.total - self.forbidden, |s| s.survivors.len())
    }

    /// Human-readable report ending in the final survivor count.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "n={} graphs={} forbidden={}",
            self.n, self.total, self.forbidden
        );
        let _ = writeln!(out, "config: {}", self.fingerprint);
        for s in &self.steps {
            let moves: Vec<String> = s.moves.iter().map(|m| m.to_string()).collect();
            let applied: Vec<String> = s.applied.iter().map(|(m, c)| format!("{m}:{c}")).collect();
            let _ = writeln!(
                out,
                "step {} [{}] eliminated {} ({}) in {} rounds, survivors {}",
                s.step,
                moves.join(","),
                s.applied.values().sum::<usize>(),
                applied.join(" "),
                s.rounds,
                s.survivors.len()
            );
        }
        let _ = writeln!(out, "survivors: {}", self.final_survivors());
        out
    }

    /// `key=value` lines, one per step, without timings unless asked.
    pub fn to_summary(&self, with_timing: bool) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let applied: Vec<String> = s.applied.iter().map(|(m, c)| format!("{m}:{c}")).collect();
            let _ = write!(
                out,
                "step={} applied={} survivors={}",
                s.step,
                applied.join(","),
                s.survivors.len()
            );
            if with_timing {
                let _ = write!(out, " elapsed_ms={}", s.elapsed_ms);
            }
            out.push('\n');
        }
        out
    }
}

/// Eliminates the `n`-vertex graphs step by step.
///
/// Smaller graphs are decided by the engine's classifier; `n`-vertex graphs
/// count as excluded once an earlier step, or an earlier round of the same
/// step, has removed them. Each step is iterated until no survivor changes.
pub fn run_elimination(engine: &Engine, n: usize, steps: usize) -> StepReport {
    let start = Instant::now();
    let codes = enumerate_codes(n);
    let total = codes.len();
    // warm the db for every smaller graph so the parallel phase mostly reads
    for m in 0..n {
        for c in enumerate_codes(m) {
            engine.classify_code(&c);
        }
    }
    let mut alive: Vec<CanonicalCode> = codes
        .into_par_iter()
        .filter(|c| forbidden_witness(&c.graph(), &engine.catalog).is_none())
        .collect();
    let forbidden = total - alive.len();
    let eliminated: RwLock<HashSet<CanonicalCode>> = RwLock::new(HashSet::new());
    let mut results = Vec::new();
    for step in 1..=steps.min(8) {
        let t = Instant::now();
        let moves = step_moves(step);
        let mut applied = BTreeMap::new();
        let mut rounds = 0;
        loop {
            rounds += 1;
            let snapshot = eliminated.read().unwrap().clone();
            let oracle = |d: &SmallGraph| {
                if d.n() < n {
                    engine.is_excluded(d)
                } else {
                    canonical_code(d).is_ok_and(|c| snapshot.contains(&c))
                }
            };
            let fired: Vec<(CanonicalCode, MoveId, TraceStep)> = alive
                .par_iter()
                .filter_map(|c| {
                    let g = c.graph();
                    engine.first_move(&g, &moves, &oracle).map(|(mv, inst)| {
                        let step = TraceStep {
                            mv,
                            params: inst.params,
                            derived: inst
                                .derived
                                .iter()
                                .map(|d| canonical_code(d).unwrap())
                                .collect(),
                        };
                        (c.clone(), mv, step)
                    })
                })
                .collect();
            if fired.is_empty() {
                break;
            }
            let mut gone = eliminated.write().unwrap();
            for (c, mv, step) in fired {
                *applied.entry(mv).or_insert(0) += 1;
                let _ = engine.db.insert(
                    c.clone(),
                    Classification::Excluded(Trace { steps: vec![step] }),
                );
                gone.insert(c);
            }
            alive.retain(|c| !gone.contains(c));
        }
        results.push(StepResult {
            step,
            moves,
            applied,
            rounds,
            survivors: alive.clone(),
            elapsed_ms: t.elapsed().as_millis(),
        });
    }
    StepReport {
        n,
        fingerprint: engine.config.fingerprint(),
        total,
        forbidden,
        steps: results,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

#[derive(Debug, Clone, Default)]
pub struct CorpusReport {
    pub rows: Vec<(String, Result<Classification, String>)>,
}

impl CorpusReport {
    /// Counts by verdict, including `ERROR` for unparsable lines.
    pub fn by_verdict(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for (_, r) in &self.rows {
            let k = match r {
                Ok(c) => c.verdict().to_string(),
                Err(_) => "ERROR".to_string(),
            };
            *m.entry(k).or_insert(0) += 1;
        }
        m
    }

    /// Counts of exclusions by the move that eliminated the graph.
    pub fn by_first_move(&self) -> BTreeMap<MoveId, usize> {
        let mut m = BTreeMap::new();
        for (_, r) in &self.rows {
            if let Ok(Some(mv)) = r.as_ref().map(|c| c.first_move()) {
                *m.entry(mv).or_insert(0) += 1;
            }
        }
        m
    }
}

/// Classifies each graph6 line; bad lines are reported and skipped.
pub fn classify_corpus(engine: &Engine, text: &str) -> CorpusReport {
    let rows = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|line| {
            let r = SmallGraph::from_graph6(line)
                .map_err(|e| e.to_string())
                .and_then(|g| canonical_code(&g).map_err(|e| e.to_string()))
                .map(|c| engine.classify_code(&c));
            (line.to_string(), r)
        })
        .collect();
    CorpusReport { rows }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyLine {
    pub n: usize,
    pub checked: usize,
    pub passed: usize,
    pub counterexamples: Vec<CanonicalCode>,
}

impl VerifyLine {
    pub fn passes(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Forbidden-free with respect to long holes, `P1(6)` and `P2(6)`.
pub fn is_thcw_free(g: &SmallGraph, catalog: &ForbiddenCatalog) -> bool {
    long_hole(g, 5).is_none()
        && [PatternId::P1_6, PatternId::P2_6]
            .iter()
            .all(|&p| catalog.get(p).is_none_or(|h| find_induced(h, g).is_none()))
}

/// Per vertex count, graphs where the separation predicate and freeness disagree.
pub fn verify_thcw(catalog: &ForbiddenCatalog, max_n: usize) -> Vec<VerifyLine> {
    (1..=max_n)
        .map(|n| {
            let codes = enumerate_codes(n);
            let bad: Vec<CanonicalCode> = codes
                .par_iter()
                .filter(|c| {
                    let g = c.graph();
                    thcw_predicate(&g) != is_thcw_free(&g, catalog)
                })
                .cloned()
                .collect();
            VerifyLine {
                n,
                checked: codes.len(),
                passed: codes.len() - bad.len(),
                counterexamples: bad,
            }
        })
        .collect()
}

/// Prime, non-complete, freeness-satisfying graphs without a skew partition.
pub fn verify_skew(catalog: &ForbiddenCatalog, max_n: usize) -> Vec<VerifyLine> {
    (1..=max_n)
        .map(|n| {
            let codes = enumerate_codes(n);
            let relevant: Vec<CanonicalCode> = codes
                .into_par_iter()
                .filter(|c| {
                    let g = c.graph();
                    g.is_connected()
                        && g.is_coconnected()
                        && g.edge_count() < n * (n - 1) / 2
                        && is_thcw_free(&g, catalog)
                })
                .collect();
            let bad: Vec<CanonicalCode> = relevant
                .par_iter()
                .filter(|c| skew_partition(&c.graph()).is_none())
                .cloned()
                .collect();
            VerifyLine {
                n,
                checked: relevant.len(),
                passed: relevant.len() - bad.len(),
                counterexamples: bad,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogCheck {
    pub pattern: PatternId,
    /// Clause name and whether it held.
    pub clauses: Vec<(String, bool)>,
}

impl CatalogCheck {
    pub fn passes(&self) -> bool {
        self.clauses.iter().all(|(_, ok)| *ok)
    }
}

/// Minimality and uniqueness checks for every sporadic catalog member.
///
/// A member must itself survive the moves when only smaller members are
/// forbidden; uniqueness counts the constrained graphs that do.
pub fn verify_catalog(engine: &Engine) -> Vec<CatalogCheck> {
    let catalog = &engine.catalog;
    let deletion_excluded = |h: &SmallGraph| engine.is_excluded(h);
    let mut below: BTreeMap<usize, Engine> = BTreeMap::new();
    for (_, g) in &catalog.patterns {
        below
            .entry(g.n())
            .or_insert_with(|| Engine::new(catalog.smaller_than(g.n()), engine.config));
    }
    catalog
        .patterns
        .iter()
        .map(|(id, g)| {
            let all = g.vertices();
            let smaller = catalog.smaller_than(g.n());
            let lower = &below[&g.n()];
            let mut clauses = vec![
                ("connected".to_string(), g.is_connected()),
                ("co-connected".to_string(), g.is_coconnected()),
                ("no long hole".to_string(), long_hole(g, 5).is_none()),
                (
                    "no smaller member induced".to_string(),
                    smaller
                        .patterns
                        .iter()
                        .all(|(_, h)| find_induced(h, g).is_none()),
                ),
                (
                    "every vertex deletion excluded".to_string(),
                    all.iter()
                        .all(|v| engine.is_excluded(&g.induced(all.without(v)))),
                ),
                (
                    "not excluded by the moves".to_string(),
                    !lower.is_excluded(g),
                ),
            ];
            if let Some(c) = catalog.constraints.get(id) {
                let m = Minimality {
                    catalog,
                    deletion_excluded: &deletion_excluded,
                };
                let unique = resolve_from_constraints(c, Some(&m)).map(|found| {
                    let codes: HashSet<CanonicalCode> = found
                        .iter()
                        .filter(|h| !lower.is_excluded(h))
                        .filter_map(|h| canonical_code(h).ok())
                        .collect();
                    codes.len() == 1 && canonical_code(g).is_ok_and(|cg| codes.contains(&cg))
                });
                clauses.push((
                    "unique under constraints".to_string(),
                    unique.unwrap_or(false),
                ));
            }
            CatalogCheck {
                pattern: *id,
                clauses,
            }
        })
        .collect()
}
