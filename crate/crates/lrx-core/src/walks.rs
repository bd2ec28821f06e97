//! Random walks on the move graph.
//!
//! Three consumers share the walker here: training-label generation for the
//! neural estimator, diffusion distance (exact by occupation sweep, and its
//! Monte Carlo counterpart), and mixing curves for the inversion statistic.

use std::collections::{HashSet, VecDeque};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bellman::neighbor_table;
use crate::error::{Error, Result};
use crate::graph::{GraphKind, GraphSpec};
use crate::perm::{GeneratorMove, Permutation};
use crate::rng::indexed_substream;
use crate::search::{DistanceTable, DEFAULT_MEM_BUDGET};
use crate::space::Space;

/// How the walker picks its next move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkKind {
    /// Uniform over L, R, X at every step.
    Plain,
    /// Uniform over the moves that do not land on any of the last `depth`
    /// states. The trajectory stops early if every move is banned.
    NonBacktracking { depth: usize },
    /// Uniform over the unpruned moves: X is excluded while the first two
    /// positions are already in order.
    XTrick,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WalkConfig {
    pub kind: WalkKind,
    /// Steps per trajectory.
    pub k_max: u32,
    /// Number of trajectories.
    pub n_walks: u32,
    pub seed: u64,
}

impl WalkConfig {
    fn validate(&self) -> Result<()> {
        if self.k_max == 0 || self.n_walks == 0 {
            return Err(Error::InvalidConfig(
                "walks need k_max >= 1 and n_walks >= 1".into(),
            ));
        }
        if let WalkKind::NonBacktracking { depth } = self.kind {
            if depth == 0 {
                return Err(Error::InvalidConfig(
                    "non-backtracking depth must be at least 1".into(),
                ));
            }
        }
        Ok(())
    }
}

/// First-visit labels harvested from random walks: `(state, step)` pairs with
/// the step of the first visit within one trajectory. Upper bounds on the
/// true distance, suitable as regression targets.
#[derive(Clone, Debug)]
pub struct TrainingSet {
    pub spec: GraphSpec,
    pub cfg: WalkConfig,
    pub pairs: Vec<(Permutation, u32)>,
}

/// Runs one trajectory from the identity, calling `visit` at step 0 with the
/// start and after each move with the new state and the move taken.
fn run_trajectory<F: FnMut(u32, &Permutation, Option<GeneratorMove>)>(
    n: usize,
    kind: WalkKind,
    k_max: u32,
    rng: &mut ChaCha8Rng,
    mut visit: F,
) {
    let mut state = Permutation::identity(n);
    let depth = match kind {
        WalkKind::NonBacktracking { depth } => depth,
        _ => 0,
    };
    let mut recent: VecDeque<Permutation> = VecDeque::with_capacity(depth + 1);
    visit(0, &state, None);
    let mut cands: Vec<(GeneratorMove, Permutation)> = Vec::with_capacity(3);
    for k in 1..=k_max {
        cands.clear();
        let e = state.entries();
        for mv in GeneratorMove::ALL {
            if kind == WalkKind::XTrick && mv == GeneratorMove::X && e[0] < e[1] {
                continue;
            }
            let q = state.apply_move(mv);
            if depth > 0 && recent.contains(&q) {
                continue;
            }
            cands.push((mv, q));
        }
        if cands.is_empty() {
            break;
        }
        let pick = rng.gen_range(0..cands.len());
        let (mv, q) = cands.swap_remove(pick);
        if depth > 0 {
            recent.push_back(state);
            if recent.len() > depth {
                recent.pop_front();
            }
        }
        state = q;
        visit(k, &state, Some(mv));
    }
}

/// Generates first-visit training pairs from `n_walks` independent
/// trajectories. Each trajectory contributes every state it sees, labeled
/// with the step of its first visit in that trajectory; the identity appears
/// exactly once with label 0. Trajectories draw from per-index substreams,
/// so the output is independent of thread count.
pub fn generate_walks(spec: &GraphSpec, cfg: &WalkConfig) -> Result<TrainingSet> {
    spec.validate()?;
    cfg.validate()?;
    if spec.kind != GraphKind::FullCayley {
        return Err(Error::InvalidConfig(
            "training walks run on the full graph".into(),
        ));
    }
    let n = spec.n;
    let per_walk: Vec<Vec<(Permutation, u32)>> = (0..cfg.n_walks as u64)
        .into_par_iter()
        .map(|w| {
            let mut rng = indexed_substream(cfg.seed, "walk", w);
            let mut seen: HashSet<Permutation> = HashSet::new();
            let mut out = Vec::new();
            run_trajectory(n, cfg.kind, cfg.k_max, &mut rng, |k, p, _| {
                if !seen.contains(p) {
                    seen.insert(p.clone());
                    if k > 0 {
                        out.push((p.clone(), k));
                    }
                }
            });
            out
        })
        .collect();
    let mut pairs = vec![(Permutation::identity(n), 0u32)];
    for w in per_walk {
        pairs.extend(w);
    }
    Ok(TrainingSet {
        spec: *spec,
        cfg: cfg.clone(),
        pairs,
    })
}

/// Occupation-weighted mean visit step for every state: with p_k the step-k
/// distribution of the uniform L/R/X walk from the identity,
/// dd(v) = sum_k k * p_k(v) / sum_k p_k(v) over the window 0..=k_max.
#[derive(Clone, Debug, Serialize)]
pub struct DiffusionExact {
    pub spec: GraphSpec,
    pub k_max: u32,
    /// Rank-indexed weighted mean visit steps. States the walk cannot reach
    /// within the window hold NaN; the identity's entry reflects its returns.
    pub dd: Vec<f64>,
}

/// Exact diffusion distances over the window `0..=k_max`.
pub fn exact_diffusion(
    spec: &GraphSpec,
    k_max: u32,
    mem_budget: Option<u64>,
) -> Result<DiffusionExact> {
    let mut v = exact_diffusion_scan(spec, &[k_max], mem_budget)?;
    Ok(v.pop().expect("one result per requested horizon"))
}

/// Exact diffusion distances at several horizons in one pass.
///
/// One sweep of the step distribution `p_k` over the whole space serves all
/// requested horizons: each state accumulates `sum k * p_k` and `sum p_k`,
/// and the ratio is snapshotted whenever `k` hits a requested horizon.
/// Pruning would change the walk itself, so only the unpruned full graph
/// qualifies.
pub fn exact_diffusion_scan(
    spec: &GraphSpec,
    k_values: &[u32],
    mem_budget: Option<u64>,
) -> Result<Vec<DiffusionExact>> {
    spec.validate()?;
    if spec.kind != GraphKind::FullCayley || spec.x_trick {
        return Err(Error::InvalidConfig(
            "diffusion distance is defined by the walk on the unpruned full graph".into(),
        ));
    }
    if k_values.is_empty() || k_values.contains(&0) {
        return Err(Error::InvalidConfig(
            "need at least one horizon, all >= 1".into(),
        ));
    }
    let budget = mem_budget.unwrap_or(DEFAULT_MEM_BUDGET);
    let kk = *k_values.iter().max().expect("nonempty");

    let space = Space::for_spec(spec)?;
    let size = space.size() as usize;
    let start = space.start_rank() as usize;
    // neighbor table, four f64 vectors in flight, one snapshot per horizon
    let need = size as u64 * (12 + 32 + 8 * k_values.len() as u64);
    if need > budget {
        return Err(Error::Resource(format!(
            "diffusion sweep needs about {need} bytes, budget is {budget}"
        )));
    }
    let nbt = neighbor_table(&space, size)?;

    let mut results: Vec<Vec<f64>> = k_values.iter().map(|_| Vec::new()).collect();
    let mut cur = vec![0.0f64; size];
    cur[start] = 1.0;
    let mut num = vec![0.0f64; size];
    let mut den = vec![0.0f64; size];
    den[start] = 1.0;
    for k in 1..=kk {
        let next: Vec<f64> = (0..size)
            .into_par_iter()
            .map(|r| {
                let nb = &nbt[r];
                (cur[nb[0] as usize] + cur[nb[1] as usize] + cur[nb[2] as usize]) / 3.0
            })
            .collect();
        cur = next;
        let kf = k as f64;
        num.par_iter_mut()
            .zip(den.par_iter_mut())
            .zip(cur.par_iter())
            .for_each(|((nu, de), &p)| {
                *nu += kf * p;
                *de += p;
            });
        for (vi, &kv) in k_values.iter().enumerate() {
            if kv == k {
                results[vi] = num
                    .par_iter()
                    .zip(den.par_iter())
                    .map(|(&nu, &de)| if de > 0.0 { nu / de } else { f64::NAN })
                    .collect();
            }
        }
    }

    Ok(k_values
        .iter()
        .zip(results)
        .map(|(&k, dd)| DiffusionExact {
            spec: *spec,
            k_max: k,
            dd,
        })
        .collect())
}

/// Mean diffusion distance per breadth-first layer, over the states the walk
/// reached. A layer entirely out of reach within the window averages to NaN.
pub fn layer_mean_dd(table: &DistanceTable, dx: &DiffusionExact) -> Result<Vec<f64>> {
    if *table.spec() != dx.spec {
        return Err(Error::InvalidInput(
            "distance table and diffusion run describe different graphs".into(),
        ));
    }
    if table.size() as usize != dx.dd.len() {
        return Err(Error::InvalidInput("table and diffusion sizes differ".into()));
    }
    let layers = table.diameter() + 1;
    let mut sums = vec![0.0f64; layers];
    let mut counts = vec![0u64; layers];
    for (r, &v) in dx.dd.iter().enumerate() {
        if v.is_finite() {
            let d = table.distance_by_rank(r as u64) as usize;
            sums[d] += v;
            counts[d] += 1;
        }
    }
    Ok(sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| s / c as f64)
        .collect())
}

/// Monte Carlo counterpart of [`exact_diffusion`]: per-state step sums and
/// counts over every visit event in independent plain walks.
#[derive(Clone, Debug, Serialize)]
pub struct DiffusionMc {
    pub spec: GraphSpec,
    pub k_max: u32,
    pub walks: u64,
    /// Rank-indexed sum of steps over all visits, repeats included.
    pub visit_sums: Vec<u64>,
    /// Rank-indexed number of visits within `k_max` steps.
    pub visit_counts: Vec<u64>,
}

impl DiffusionMc {
    /// Mean visit step per state; NaN where no walk got there. Since each
    /// step of each walk contributes one visit event, this is the sampled
    /// version of the occupation-weighted ratio in [`exact_diffusion`].
    pub fn estimates(&self) -> Vec<f64> {
        self.visit_sums
            .iter()
            .zip(&self.visit_counts)
            .map(|(&s, &c)| if c > 0 { s as f64 / c as f64 } else { f64::NAN })
            .collect()
    }
}

/// Estimates diffusion distances from `cfg.n_walks` plain trajectories. The
/// walk kind must be [`WalkKind::Plain`] so the estimate targets the same
/// quantity as the exact sweep.
pub fn mc_diffusion(
    spec: &GraphSpec,
    cfg: &WalkConfig,
    mem_budget: Option<u64>,
) -> Result<DiffusionMc> {
    spec.validate()?;
    cfg.validate()?;
    if spec.kind != GraphKind::FullCayley || spec.x_trick {
        return Err(Error::InvalidConfig(
            "diffusion distance is defined by the walk on the unpruned full graph".into(),
        ));
    }
    if cfg.kind != WalkKind::Plain {
        return Err(Error::InvalidConfig(
            "diffusion estimates use plain walks".into(),
        ));
    }
    let budget = mem_budget.unwrap_or(DEFAULT_MEM_BUDGET);
    let space = Space::for_spec(spec)?;
    let size = space.size() as usize;
    if size as u64 * 16 > budget {
        return Err(Error::Resource(format!(
            "visit accumulators need {} bytes, budget is {budget}",
            size as u64 * 16
        )));
    }
    let full = match &space {
        Space::Full(s) => s,
        Space::Coset(_) => unreachable!("kind checked above"),
    };

    let per_walk: Vec<Vec<(u32, u32)>> = (0..cfg.n_walks as u64)
        .into_par_iter()
        .map(|w| {
            let mut rng = indexed_substream(cfg.seed, "dd-walk", w);
            let mut out = Vec::with_capacity(cfg.k_max as usize + 1);
            run_trajectory(spec.n, cfg.kind, cfg.k_max, &mut rng, |k, p, _| {
                out.push((full.rank_perm(p) as u32, k));
            });
            out
        })
        .collect();

    let mut visit_sums = vec![0u64; size];
    let mut visit_counts = vec![0u64; size];
    for walk in per_walk {
        for (r, k) in walk {
            visit_sums[r as usize] += k as u64;
            visit_counts[r as usize] += 1;
        }
    }
    Ok(DiffusionMc {
        spec: *spec,
        k_max: cfg.k_max,
        walks: cfg.n_walks as u64,
        visit_sums,
        visit_counts,
    })
}

/// Sample mean and standard error of the inversion count at one walk step.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MixingPoint {
    pub step: u32,
    pub trials: u64,
    pub mean: f64,
    pub stderr: f64,
}

/// Inversion-count trace of the walk, averaged over `cfg.n_walks` trials.
///
/// Inversions update in O(1) per move: rotating the front value v to the back
/// changes the count by (n-1) - 2v, the reverse rotation by 2v - (n-1), and a
/// swap by +-1. Per-step accumulation is integer, so results are exact and
/// independent of thread count. Points past a step no trial reached are
/// dropped (deep non-backtracking bans can strand the walker).
pub fn mixing_curve(n: usize, cfg: &WalkConfig) -> Result<Vec<MixingPoint>> {
    GraphSpec::full(n)?;
    cfg.validate()?;
    let steps = cfg.k_max as usize + 1;

    struct Acc {
        sums: Vec<u64>,
        sumsq: Vec<u128>,
        counts: Vec<u64>,
    }

    impl Acc {
        fn zero(steps: usize) -> Acc {
            Acc {
                sums: vec![0u64; steps],
                sumsq: vec![0u128; steps],
                counts: vec![0u64; steps],
            }
        }

        fn merge(mut self, other: Acc) -> Acc {
            for k in 0..self.sums.len() {
                self.sums[k] += other.sums[k];
                self.sumsq[k] += other.sumsq[k];
                self.counts[k] += other.counts[k];
            }
            self
        }
    }

    let trials = cfg.n_walks as u64;
    let chunk = trials.div_ceil(4 * rayon::current_num_threads().max(1) as u64).max(1);
    let starts: Vec<u64> = (0..trials).step_by(chunk as usize).collect();
    let Acc {
        sums,
        sumsq,
        counts,
    } = starts
        .into_par_iter()
        .map(|start| {
            let mut acc = Acc::zero(steps);
            for t in start..(start + chunk).min(trials) {
                let mut rng = indexed_substream(cfg.seed, "mixing", t);
                let mut inv: i64 = 0;
                let mut k = 0usize;
                run_trajectory(n, cfg.kind, cfg.k_max, &mut rng, |_, p, mv| {
                    let e = p.entries();
                    match mv {
                        None => inv = 0,
                        Some(GeneratorMove::L) => {
                            inv += (n - 1) as i64 - 2 * e[n - 1] as i64;
                        }
                        Some(GeneratorMove::R) => {
                            inv += 2 * e[0] as i64 - (n - 1) as i64;
                        }
                        Some(GeneratorMove::X) => {
                            inv += if e[0] > e[1] { 1 } else { -1 };
                        }
                    }
                    debug_assert!(inv >= 0);
                    acc.sums[k] += inv as u64;
                    acc.sumsq[k] += (inv as u128) * (inv as u128);
                    acc.counts[k] += 1;
                    k += 1;
                });
            }
            acc
        })
        .reduce(|| Acc::zero(steps), Acc::merge);

    let mut out = Vec::with_capacity(steps);
    for k in 0..steps {
        let m = counts[k];
        if m == 0 {
            break;
        }
        let mean = sums[k] as f64 / m as f64;
        let stderr = if m > 1 {
            let var = (sumsq[k] as f64 - (sums[k] as f64).powi(2) / m as f64) / (m - 1) as f64;
            (var.max(0.0) / m as f64).sqrt()
        } else {
            0.0
        };
        out.push(MixingPoint {
            step: k as u32,
            trials: m,
            mean,
            stderr,
        });
    }
    Ok(out)
}
