//! Guided beam search on the full LRX graph.
//!
//! Each step expands every neighbor of the current beam, drops candidates
//! seen in the last `history_depth` frontiers (hashed, so collisions only
//! ever drop states), ranks the survivors by the configured heuristic and
//! keeps the best `width`. Parent links are kept per step for path
//! reconstruction and spill to a temp file when a memory budget is set.

use std::collections::{HashSet, VecDeque};
use std::fs::File;
use std::io::{Read, Seek, SeekFrom, Write};
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimator::DistanceEstimator;
use crate::graph::{GraphKind, GraphSpec};
use crate::perm::{hash_state, GeneratorMove, Permutation, Word};
use crate::rng::derived_seed;
use crate::search::DistanceTable;

/// Ranking signal for beam candidates; lower scores are kept first.
#[derive(Clone, Copy)]
pub enum BeamHeuristic<'a> {
    /// A trained distance estimator.
    Model(&'a DistanceEstimator),
    /// Number of misplaced entries. Model-free baseline.
    Hamming,
    /// Exact BFS distances. With width 1 this is greedy descent and optimal.
    Oracle(&'a DistanceTable),
}

#[derive(Clone, Copy)]
pub struct BeamConfig<'a> {
    /// Beam width W, at least 1.
    pub width: usize,
    /// Maximum number of steps before giving up.
    pub step_limit: usize,
    /// How many recent frontiers ban re-expansion; 0 disables the ban,
    /// 1 bans only the current beam, 2 additionally blocks parent reversals.
    pub history_depth: usize,
    /// Prune the X edge from states whose first two entries are in order.
    pub x_trick: bool,
    /// Seeds the state hash used for dedup, banning, and tie-breaking.
    pub seed: u64,
    pub heuristic: BeamHeuristic<'a>,
    /// Approximate cap on working memory; parent trails spill to disk
    /// before the cap and the search fails with a resource error when the
    /// live structures alone exceed it. `None` means unbounded.
    pub mem_budget_bytes: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepStats {
    pub step: usize,
    /// Neighbors generated from the beam.
    pub expanded: usize,
    /// Candidates dropped by the history ban.
    pub banned: usize,
    /// Candidates dropped as within-step duplicates.
    pub deduped: usize,
    /// Beam size after ranking and truncation.
    pub kept: usize,
    pub best_score: f64,
}

#[derive(Debug)]
pub struct SearchResult {
    pub found: bool,
    /// Replay-validated solving word, present iff `found`.
    pub word: Option<Word>,
    /// Steps actually used; equals the word length when found.
    pub steps: usize,
    pub stats: Vec<StepStats>,
    pub peak_beam: usize,
    pub peak_mem_bytes: u64,
}

fn move_code(mv: GeneratorMove) -> u8 {
    match mv {
        GeneratorMove::L => 0,
        GeneratorMove::R => 1,
        GeneratorMove::X => 2,
    }
}

fn code_move(code: u8) -> GeneratorMove {
    match code {
        0 => GeneratorMove::L,
        1 => GeneratorMove::R,
        _ => GeneratorMove::X,
    }
}

enum StepTrail {
    Ram { parents: Vec<u32>, moves: Vec<u8> },
    Disk { offset: u64, len: u32 },
}

/// Per-step parent links, in memory until a budget pushes them to disk.
struct Trail {
    steps: Vec<StepTrail>,
    ram_bytes: u64,
    file: Option<File>,
    file_len: u64,
    spilling: bool,
}

const LINK_BYTES: u64 = 5;

impl Trail {
    fn new() -> Trail {
        Trail {
            steps: Vec::new(),
            ram_bytes: 0,
            file: None,
            file_len: 0,
            spilling: false,
        }
    }

    fn push(&mut self, parents: Vec<u32>, moves: Vec<u8>) -> Result<()> {
        debug_assert_eq!(parents.len(), moves.len());
        if self.spilling {
            let (offset, len) = self.write_step(&parents, &moves)?;
            self.steps.push(StepTrail::Disk { offset, len });
        } else {
            self.ram_bytes += LINK_BYTES * parents.len() as u64;
            self.steps.push(StepTrail::Ram { parents, moves });
        }
        Ok(())
    }

    fn write_step(&mut self, parents: &[u32], moves: &[u8]) -> Result<(u64, u32)> {
        if self.file.is_none() {
            self.file = Some(tempfile::tempfile()?);
        }
        let file = self.file.as_mut().unwrap();
        file.seek(SeekFrom::Start(self.file_len))?;
        let mut buf = Vec::with_capacity(parents.len() * LINK_BYTES as usize);
        for (&p, &m) in parents.iter().zip(moves) {
            buf.extend_from_slice(&p.to_le_bytes());
            buf.push(m);
        }
        file.write_all(&buf)?;
        let offset = self.file_len;
        self.file_len += buf.len() as u64;
        Ok((offset, parents.len() as u32))
    }

    /// Move every in-memory step to disk; later steps go straight there.
    fn spill(&mut self) -> Result<()> {
        self.spilling = true;
        for i in 0..self.steps.len() {
            if let StepTrail::Ram { parents, moves } = &self.steps[i] {
                let (parents, moves) = (parents.clone(), moves.clone());
                let (offset, len) = self.write_step(&parents, &moves)?;
                self.steps[i] = StepTrail::Disk { offset, len };
            }
        }
        self.ram_bytes = 0;
        Ok(())
    }

    fn link(&mut self, step: usize, idx: u32) -> Result<(u32, GeneratorMove)> {
        match &self.steps[step] {
            StepTrail::Ram { parents, moves } => {
                Ok((parents[idx as usize], code_move(moves[idx as usize])))
            }
            StepTrail::Disk { offset, len } => {
                debug_assert!(idx < *len);
                let at = offset + u64::from(idx) * LINK_BYTES;
                let file = self.file.as_mut().expect("disk step without file");
                file.seek(SeekFrom::Start(at))?;
                let mut buf = [0u8; LINK_BYTES as usize];
                file.read_exact(&mut buf)?;
                let parent = u32::from_le_bytes([buf[0], buf[1], buf[2], buf[3]]);
                Ok((parent, code_move(buf[4])))
            }
        }
    }
}

/// Rough per-state footprint used for the budget accounting.
fn state_bytes(n: usize) -> u64 {
    2 * n as u64 + 56
}

fn validate(spec: &GraphSpec, start: &Permutation, cfg: &BeamConfig) -> Result<()> {
    spec.validate()?;
    if spec.kind != GraphKind::FullCayley {
        return Err(Error::InvalidConfig(
            "beam search runs on the full graph; coset states have no estimator encoding".into(),
        ));
    }
    if start.n() != spec.n {
        return Err(Error::InvalidInput(format!(
            "start has n = {}, graph has n = {}",
            start.n(),
            spec.n
        )));
    }
    if cfg.width == 0 {
        return Err(Error::InvalidConfig("beam width must be at least 1".into()));
    }
    if cfg.step_limit == 0 {
        return Err(Error::InvalidConfig("step limit must be at least 1".into()));
    }
    match cfg.heuristic {
        BeamHeuristic::Model(est) if est.n() != spec.n => Err(Error::InvalidConfig(format!(
            "estimator is for n = {}, graph has n = {}",
            est.n(),
            spec.n
        ))),
        BeamHeuristic::Oracle(table) if table.spec().n != spec.n => {
            Err(Error::InvalidConfig(format!(
                "distance table is for n = {}, graph has n = {}",
                table.spec().n,
                spec.n
            )))
        }
        BeamHeuristic::Oracle(table) if table.spec().kind != GraphKind::FullCayley => Err(
            Error::InvalidConfig("oracle table must cover the full graph".into()),
        ),
        _ => Ok(()),
    }
}

pub fn beam_search(
    spec: &GraphSpec,
    start: &Permutation,
    cfg: &BeamConfig,
) -> Result<SearchResult> {
    validate(spec, start, cfg)?;
    match cfg.heuristic {
        BeamHeuristic::Model(est) => run(spec, start, cfg, |states| est.predict_batch(states)),
        BeamHeuristic::Hamming => run(spec, start, cfg, |states| {
            states.iter().map(|p| hamming(p) as f64).collect()
        }),
        BeamHeuristic::Oracle(table) => run(spec, start, cfg, |states| {
            states
                .iter()
                .map(|p| f64::from(table.distance_perm(p).expect("table validated")))
                .collect()
        }),
    }
}

/// Misplaced-entry count, the model-free baseline heuristic.
fn hamming(p: &Permutation) -> usize {
    p.entries()
        .iter()
        .enumerate()
        .filter(|&(i, &v)| v as usize != i)
        .count()
}

fn run<F>(spec: &GraphSpec, start: &Permutation, cfg: &BeamConfig, score: F) -> Result<SearchResult>
where
    F: Fn(&[Permutation]) -> Vec<f64> + Sync,
{
    let n = spec.n;
    let x_trick = cfg.x_trick || spec.x_trick;
    if start.is_identity() {
        return Ok(SearchResult {
            found: true,
            word: Some(Word::new()),
            steps: 0,
            stats: Vec::new(),
            peak_beam: 1,
            peak_mem_bytes: state_bytes(n),
        });
    }

    let mut beam = vec![start.clone()];
    let mut history: VecDeque<HashSet<u64>> = VecDeque::new();
    if cfg.history_depth > 0 {
        history.push_back(HashSet::from([hash_state(start, cfg.seed)]));
    }
    let mut trail = Trail::new();
    let mut stats = Vec::new();
    let mut peak_beam = 1usize;
    let mut peak_mem = state_bytes(n);

    for step in 1..=cfg.step_limit {
        // Expand, goal-checking each candidate before any ban or dedup so a
        // solution in the banned window is still reported.
        let mut states: Vec<Permutation> = Vec::with_capacity(beam.len() * 3);
        let mut hashes: Vec<u64> = Vec::new();
        let mut parents: Vec<u32> = Vec::new();
        let mut moves: Vec<u8> = Vec::new();
        let mut seen: HashSet<u64> = HashSet::new();
        let (mut expanded, mut banned, mut deduped) = (0usize, 0usize, 0usize);
        for (pi, s) in beam.iter().enumerate() {
            for mv in GeneratorMove::ALL {
                if mv == GeneratorMove::X && x_trick && s.entries()[0] < s.entries()[1] {
                    continue;
                }
                let q = s.apply_move(mv);
                expanded += 1;
                if q.is_identity() {
                    let word = reconstruct(&mut trail, pi as u32, mv, step, start)?;
                    return Ok(SearchResult {
                        found: true,
                        word: Some(word),
                        steps: step,
                        stats,
                        peak_beam,
                        peak_mem_bytes: peak_mem,
                    });
                }
                let h = hash_state(&q, cfg.seed);
                if history.iter().any(|set| set.contains(&h)) {
                    banned += 1;
                    continue;
                }
                if !seen.insert(h) {
                    deduped += 1;
                    continue;
                }
                states.push(q);
                hashes.push(h);
                parents.push(pi as u32);
                moves.push(move_code(mv));
            }
        }
        if states.is_empty() {
            return Ok(SearchResult {
                found: false,
                word: None,
                steps: step,
                stats,
                peak_beam,
                peak_mem_bytes: peak_mem,
            });
        }

        let live = beam.len() as u64 * state_bytes(n)
            + states.len() as u64 * (state_bytes(n) + 24)
            + history.iter().map(|s| s.len() as u64 * 16).sum::<u64>();
        if let Some(budget) = cfg.mem_budget_bytes {
            if live > budget {
                return Err(Error::Resource(format!(
                    "beam step needs about {live} bytes, budget is {budget}"
                )));
            }
            if !trail.spilling && live + trail.ram_bytes > budget {
                trail.spill()?;
            }
        }
        peak_mem = peak_mem.max(live + trail.ram_bytes);

        let scores = score(&states);
        debug_assert_eq!(scores.len(), states.len());
        let mut order: Vec<u32> = (0..states.len() as u32).collect();
        order.sort_unstable_by(|&a, &b| {
            let (a, b) = (a as usize, b as usize);
            scores[a]
                .total_cmp(&scores[b])
                .then(hashes[a].cmp(&hashes[b]))
                .then(a.cmp(&b))
        });
        order.truncate(cfg.width);

        let kept = order.len();
        let best_score = scores[order[0] as usize];
        beam = order.iter().map(|&i| states[i as usize].clone()).collect();
        if cfg.history_depth > 0 {
            history.push_back(order.iter().map(|&i| hashes[i as usize]).collect());
            while history.len() > cfg.history_depth {
                history.pop_front();
            }
        }
        trail.push(
            order.iter().map(|&i| parents[i as usize]).collect(),
            order.iter().map(|&i| moves[i as usize]).collect(),
        )?;
        peak_beam = peak_beam.max(kept);
        stats.push(StepStats {
            step,
            expanded,
            banned,
            deduped,
            kept,
            best_score,
        });
    }

    Ok(SearchResult {
        found: false,
        word: None,
        steps: cfg.step_limit,
        stats,
        peak_beam,
        peak_mem_bytes: peak_mem,
    })
}

fn reconstruct(
    trail: &mut Trail,
    parent: u32,
    last: GeneratorMove,
    steps: usize,
    start: &Permutation,
) -> Result<Word> {
    let mut rev = vec![last];
    let mut idx = parent;
    for j in (0..steps - 1).rev() {
        let (p, m) = trail.link(j, idx)?;
        rev.push(m);
        idx = p;
    }
    debug_assert_eq!(idx, 0);
    rev.reverse();
    let word = Word::from_moves(rev);
    assert!(
        start.apply_word(&word).is_identity(),
        "reconstructed word must solve the start state"
    );
    Ok(word)
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub run: usize,
    pub found: bool,
    pub length: Option<usize>,
    pub seconds: f64,
    pub peak_mem_bytes: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatchReport {
    pub runs: Vec<RunRecord>,
    pub success_rate: f64,
    pub min_length: Option<usize>,
    pub median_length: Option<f64>,
}

impl BatchReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("run,found,length,seconds,peak_mem_bytes\n");
        for r in &self.runs {
            let length = r.length.map(|l| l.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{:.6},{}\n",
                r.run, r.found, length, r.seconds, r.peak_mem_bytes
            ));
        }
        out
    }
}

/// Run the search over each start `repeats` times, re-seeding the state hash
/// per run, and aggregate success rate and found-length statistics.
pub fn solve_batch(
    spec: &GraphSpec,
    starts: &[Permutation],
    cfg: &BeamConfig,
    repeats: usize,
) -> Result<BatchReport> {
    if repeats == 0 {
        return Err(Error::InvalidConfig("repeats must be at least 1".into()));
    }
    let mut runs = Vec::with_capacity(starts.len() * repeats);
    for (si, start) in starts.iter().enumerate() {
        for r in 0..repeats {
            let run_id = si * repeats + r;
            let run_cfg = BeamConfig {
                seed: derived_seed(cfg.seed, "beam-run", run_id as u64),
                ..*cfg
            };
            let clock = Instant::now();
            let result = beam_search(spec, start, &run_cfg)?;
            runs.push(RunRecord {
                run: run_id,
                found: result.found,
                length: result.word.as_ref().map(Word::len),
                seconds: clock.elapsed().as_secs_f64(),
                peak_mem_bytes: result.peak_mem_bytes,
            });
        }
    }
    let mut lengths: Vec<usize> = runs.iter().filter_map(|r| r.length).collect();
    lengths.sort_unstable();
    let successes = lengths.len();
    let median_length = if lengths.is_empty() {
        None
    } else if lengths.len() % 2 == 1 {
        Some(lengths[lengths.len() / 2] as f64)
    } else {
        Some((lengths[lengths.len() / 2 - 1] + lengths[lengths.len() / 2]) as f64 / 2.0)
    };
    Ok(BatchReport {
        success_rate: successes as f64 / runs.len() as f64,
        min_length: lengths.first().copied(),
        median_length,
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::longest_element;
    use crate::search::bfs;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn oracle_cfg<'a>(table: &'a DistanceTable, width: usize) -> BeamConfig<'a> {
        BeamConfig {
            width,
            step_limit: 200,
            history_depth: 1,
            x_trick: false,
            seed: 7,
            heuristic: BeamHeuristic::Oracle(table),
            mem_budget_bytes: None,
        }
    }

    #[test]
    fn identity_start_is_found_at_step_zero() {
        let spec = GraphSpec::full(6).unwrap();
        let table = bfs(&spec, None).unwrap().1;
        let res = beam_search(&spec, &Permutation::identity(6), &oracle_cfg(&table, 4)).unwrap();
        assert!(res.found);
        assert_eq!(res.steps, 0);
        assert_eq!(res.word.unwrap().len(), 0);
        assert!(res.stats.is_empty());
    }

    #[test]
    fn oracle_width_one_walks_a_geodesic() {
        for n in [6usize, 7] {
            let spec = GraphSpec::full(n).unwrap();
            let table = bfs(&spec, None).unwrap().1;
            let mut rng = ChaCha8Rng::seed_from_u64(40 + n as u64);
            let mut starts = vec![longest_element(n).unwrap()];
            for _ in 0..50 {
                starts.push(Permutation::random(n, &mut rng));
            }
            for p in starts {
                let res = beam_search(&spec, &p, &oracle_cfg(&table, 1)).unwrap();
                assert!(res.found);
                let word = res.word.unwrap();
                assert!(p.apply_word(&word).is_identity());
                assert_eq!(word.len() as u8, table.distance_perm(&p).unwrap());
            }
        }
    }

    #[test]
    fn wider_beams_never_lengthen_oracle_paths() {
        let spec = GraphSpec::full(7).unwrap();
        let table = bfs(&spec, None).unwrap().1;
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let p = Permutation::random(7, &mut rng);
            let mut last = None;
            for width in [1usize, 2, 4, 16] {
                let res = beam_search(&spec, &p, &oracle_cfg(&table, width)).unwrap();
                assert!(res.found);
                let len = res.word.unwrap().len();
                if let Some(prev) = last {
                    assert!(len <= prev, "width increase lengthened the path");
                }
                last = Some(len);
            }
        }
    }

    #[test]
    fn ranking_ignores_constant_score_shifts() {
        let spec = GraphSpec::full(8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let p = Permutation::random(8, &mut rng);
        let cfg = BeamConfig {
            width: 8,
            step_limit: 80,
            history_depth: 2,
            x_trick: false,
            seed: 11,
            heuristic: BeamHeuristic::Hamming,
            mem_budget_bytes: None,
        };
        let base = run(&spec, &p, &cfg, |states| {
            states.iter().map(|s| hamming(s) as f64).collect()
        })
        .unwrap();
        let shifted = run(&spec, &p, &cfg, |states| {
            states.iter().map(|s| hamming(s) as f64 + 1000.0).collect()
        })
        .unwrap();
        assert_eq!(base.found, shifted.found);
        assert_eq!(base.steps, shifted.steps);
        assert_eq!(
            base.word.map(|w| w.to_string()),
            shifted.word.map(|w| w.to_string())
        );
        for (a, b) in base.stats.iter().zip(&shifted.stats) {
            assert_eq!(a.kept, b.kept);
            assert_eq!(a.banned, b.banned);
            assert_eq!(a.deduped, b.deduped);
        }
    }

    #[test]
    fn history_depth_two_blocks_parent_reversal() {
        let spec = GraphSpec::full(6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..20 {
            let p = Permutation::random(6, &mut rng);
            if p.is_identity() {
                continue;
            }
            let cfg = BeamConfig {
                width: 1,
                step_limit: 60,
                history_depth: 2,
                x_trick: false,
                seed: 13,
                heuristic: BeamHeuristic::Hamming,
                mem_budget_bytes: None,
            };
            // With width 1 a candidate equal to its grandparent is exactly an
            // adjacent inverse pair in the emitted move sequence, so collect
            // every step's scored pool and check against the beam two back.
            let pools: std::sync::Mutex<Vec<Vec<Permutation>>> =
                std::sync::Mutex::new(Vec::new());
            let res = run(&spec, &p, &cfg, |states| {
                pools.lock().unwrap().push(states.to_vec());
                states.iter().map(|s| hamming(s) as f64).collect()
            })
            .unwrap();
            let pools = pools.into_inner().unwrap();
            let mut beams = vec![p.clone()];
            if let Some(w) = &res.word {
                let mut cur = p.clone();
                for &mv in w.moves() {
                    cur = cur.apply_move(mv);
                    beams.push(cur.clone());
                }
            }
            for t in 1..pools.len() {
                if let Some(grand) = beams.get(t - 1) {
                    assert!(
                        !pools[t].contains(grand),
                        "grandparent re-expanded despite depth-2 history"
                    );
                }
            }
        }
    }

    #[test]
    fn step_limit_reports_failure_with_stats() {
        let spec = GraphSpec::full(7).unwrap();
        let p = longest_element(7).unwrap();
        let cfg = BeamConfig {
            width: 2,
            step_limit: 3,
            history_depth: 1,
            x_trick: false,
            seed: 5,
            heuristic: BeamHeuristic::Hamming,
            mem_budget_bytes: None,
        };
        let res = beam_search(&spec, &p, &cfg).unwrap();
        assert!(!res.found);
        assert!(res.word.is_none());
        assert_eq!(res.steps, 3);
        assert_eq!(res.stats.len(), 3);
    }

    #[test]
    fn tiny_memory_budget_is_a_resource_error() {
        let spec = GraphSpec::full(7).unwrap();
        let p = longest_element(7).unwrap();
        let cfg = BeamConfig {
            width: 64,
            step_limit: 100,
            history_depth: 1,
            x_trick: false,
            seed: 5,
            heuristic: BeamHeuristic::Hamming,
            mem_budget_bytes: Some(200),
        };
        let err = beam_search(&spec, &p, &cfg).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn spilled_trail_reconstructs_the_same_word() {
        let spec = GraphSpec::full(7).unwrap();
        let table = bfs(&spec, None).unwrap().1;
        let p = longest_element(7).unwrap();
        let unbounded = beam_search(&spec, &p, &oracle_cfg(&table, 32)).unwrap();
        let mut tight = oracle_cfg(&table, 32);
        // Enough for the live structures, too small to also hold the trail.
        tight.mem_budget_bytes = Some(12_500);
        let spilled = beam_search(&spec, &p, &tight).unwrap();
        assert!(unbounded.found && spilled.found);
        assert_eq!(
            unbounded.word.unwrap().to_string(),
            spilled.word.unwrap().to_string()
        );
    }

    #[test]
    fn batch_oracle_runs_are_all_optimal() {
        let spec = GraphSpec::full(7).unwrap();
        let table = bfs(&spec, None).unwrap().1;
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let starts: Vec<Permutation> = (0..20).map(|_| Permutation::random(7, &mut rng)).collect();
        let cfg = oracle_cfg(&table, 1);
        let report = solve_batch(&spec, &starts, &cfg, 1).unwrap();
        assert_eq!(report.success_rate, 1.0);
        for (run, start) in report.runs.iter().zip(&starts) {
            assert_eq!(
                run.length.unwrap() as u8,
                table.distance_perm(start).unwrap()
            );
        }
        let csv = report.to_csv();
        assert!(csv.starts_with("run,found,length,seconds,peak_mem_bytes\n"));
        assert_eq!(csv.lines().count(), starts.len() + 1);
    }

    #[test]
    fn batch_from_identity_is_trivially_successful() {
        let spec = GraphSpec::full(6).unwrap();
        let starts = vec![Permutation::identity(6)];
        let cfg = BeamConfig {
            width: 4,
            step_limit: 10,
            history_depth: 0,
            x_trick: false,
            seed: 3,
            heuristic: BeamHeuristic::Hamming,
            mem_budget_bytes: None,
        };
        let report = solve_batch(&spec, &starts, &cfg, 1).unwrap();
        assert_eq!(report.success_rate, 1.0);
        assert_eq!(report.median_length, Some(0.0));
        assert_eq!(report.min_length, Some(0));
    }

    #[test]
    fn coset_graphs_are_rejected() {
        let spec = GraphSpec::coset(8).unwrap();
        let table = bfs(&GraphSpec::full(6).unwrap(), None).unwrap().1;
        let cfg = oracle_cfg(&table, 1);
        assert!(beam_search(&spec, &Permutation::identity(8), &cfg).is_err());
    }
}
