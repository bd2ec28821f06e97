//! Fixed-point distance computation: synchronous value iteration against an
//! exact table, rank correlations for the traces, and min-plus matrix powers
//! as an independent route to all-pairs distances.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::DistanceEstimator;
use crate::graph::GraphSpec;
use crate::rng::substream;
use crate::search::DistanceTable;
use crate::space::Space;

/// How to seed the value function before iterating.
#[derive(Clone, Debug)]
pub enum InitSpec {
    Zero,
    /// Number of displaced positions.
    Hamming,
    /// Sum of |p[i] - i|.
    Manhattan,
    /// Uniform integers in [0, diameter].
    RandomInt,
    /// Gaussian noise, sigma defaults to n.
    RandomGauss { sigma: Option<f64> },
    /// True distances on the first k layers, zero beyond.
    LayerMix { k: usize },
    /// Predictions of a trained estimator.
    Model(DistanceEstimator),
}

#[derive(Clone, Debug)]
pub struct DpConfig {
    /// Update mix-in rate in (0, 1].
    pub alpha: f64,
    /// Stop once the max absolute error against the oracle drops below this.
    pub tolerance: f64,
    pub max_iters: usize,
    pub init: InitSpec,
    pub seed: u64,
}

impl Default for DpConfig {
    fn default() -> DpConfig {
        DpConfig {
            alpha: 1.0,
            tolerance: 1e-9,
            max_iters: 200,
            init: InitSpec::Zero,
            seed: 0,
        }
    }
}

/// Per-iteration agreement with the oracle. Pearson is undefined while the
/// iterate is constant, hence the Option.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DpIterStats {
    pub iteration: usize,
    pub pearson: Option<f64>,
    pub max_abs_err: f64,
}

pub struct DpResult {
    pub distances: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<DpIterStats>,
}

/// Synchronous sweeps of `d(s) <- alpha (1 + min over neighbors) + (1 - alpha) d(s)`
/// with the start state pinned to zero. All updates in a sweep read the
/// previous iterate, so results do not depend on sweep order or thread count.
pub fn dp_solve(spec: &GraphSpec, cfg: &DpConfig, oracle: &DistanceTable) -> Result<DpResult> {
    if spec.x_trick {
        return Err(Error::InvalidConfig(
            "value iteration runs on the unpruned graph".into(),
        ));
    }
    if spec.kind != oracle.spec().kind || spec.n != oracle.spec().n {
        return Err(Error::InvalidConfig(
            "oracle table is for a different graph".into(),
        ));
    }
    if !(cfg.alpha > 0.0 && cfg.alpha <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "alpha must be in (0, 1], got {}",
            cfg.alpha
        )));
    }
    let space = oracle.space();
    let size = oracle.size() as usize;
    let start = oracle.start_rank() as usize;

    let neighbors = neighbor_table(space, size)?;
    let oracle_f: Vec<f64> = oracle.dist_slice().iter().map(|&d| d as f64).collect();

    let mut current = build_init(spec, cfg, oracle)?;
    let mut trace = Vec::new();

    for iteration in 0..=cfg.max_iters {
        let max_abs_err = current
            .par_iter()
            .zip(oracle_f.par_iter())
            .map(|(a, b)| (a - b).abs())
            .reduce(|| 0.0f64, f64::max);
        let p = pearson(&current, &oracle_f).ok();
        trace.push(DpIterStats {
            iteration,
            pearson: p,
            max_abs_err,
        });
        if max_abs_err < cfg.tolerance {
            return Ok(DpResult {
                distances: current,
                iterations: iteration,
                converged: true,
                trace,
            });
        }
        if iteration == cfg.max_iters {
            break;
        }

        let alpha = cfg.alpha;
        let prev = &current;
        let mut next: Vec<f64> = (0..size)
            .into_par_iter()
            .map(|s| {
                let nb = &neighbors[s];
                let m = prev[nb[0] as usize]
                    .min(prev[nb[1] as usize])
                    .min(prev[nb[2] as usize]);
                alpha * (1.0 + m) + (1.0 - alpha) * prev[s]
            })
            .collect();
        next[start] = 0.0;
        current = next;
    }

    Ok(DpResult {
        distances: current,
        iterations: cfg.max_iters,
        converged: false,
        trace,
    })
}

pub(crate) fn neighbor_table(space: &Space, size: usize) -> Result<Vec<[u32; 3]>> {
    if size > u32::MAX as usize {
        return Err(Error::Resource("state space too large to index".into()));
    }
    Ok((0..size as u64)
        .into_par_iter()
        .map(|r| {
            let nb = space.neighbor_ranks(r);
            [nb[0] as u32, nb[1] as u32, nb[2] as u32]
        })
        .collect())
}

fn build_init(spec: &GraphSpec, cfg: &DpConfig, oracle: &DistanceTable) -> Result<Vec<f64>> {
    let space = oracle.space();
    let size = oracle.size() as usize;
    let out = match &cfg.init {
        InitSpec::Zero => vec![0.0; size],
        InitSpec::Hamming => match space {
            Space::Full(s) => (0..size as u64)
                .map(|r| {
                    let p = s.unrank(r);
                    p.entries()
                        .iter()
                        .enumerate()
                        .filter(|(i, &v)| *i != v as usize)
                        .count() as f64
                })
                .collect(),
            Space::Coset(_) => {
                return Err(Error::InvalidConfig(
                    "positional initializers need permutation states".into(),
                ))
            }
        },
        InitSpec::Manhattan => match space {
            Space::Full(s) => (0..size as u64)
                .map(|r| {
                    let p = s.unrank(r);
                    p.entries()
                        .iter()
                        .enumerate()
                        .map(|(i, &v)| (i as f64 - v as f64).abs())
                        .sum()
                })
                .collect(),
            Space::Coset(_) => {
                return Err(Error::InvalidConfig(
                    "positional initializers need permutation states".into(),
                ))
            }
        },
        InitSpec::RandomInt => {
            let mut rng = substream(cfg.seed, "dp-init");
            let diameter = oracle.diameter() as u64;
            (0..size).map(|_| rng.gen_range(0..=diameter) as f64).collect()
        }
        InitSpec::RandomGauss { sigma } => {
            let mut rng = substream(cfg.seed, "dp-init");
            let sigma = sigma.unwrap_or(spec.n as f64);
            if sigma <= 0.0 {
                return Err(Error::InvalidConfig("sigma must be positive".into()));
            }
            let normal = Normal::new(0.0, sigma)
                .map_err(|e| Error::InvalidConfig(format!("bad gaussian: {e}")))?;
            (0..size).map(|_| normal.sample(&mut rng)).collect()
        }
        InitSpec::LayerMix { k } => oracle
            .dist_slice()
            .iter()
            .map(|&d| if (d as usize) < *k { d as f64 } else { 0.0 })
            .collect(),
        InitSpec::Model(est) => match space {
            Space::Full(s) => {
                if est.n() != spec.n {
                    return Err(Error::InvalidConfig(format!(
                        "estimator is for n = {}, graph has n = {}",
                        est.n(),
                        spec.n
                    )));
                }
                let states: Vec<_> = (0..size as u64).map(|r| s.unrank(r)).collect();
                est.predict_batch(&states)
            }
            Space::Coset(_) => {
                return Err(Error::InvalidConfig(
                    "estimator initializer needs permutation states".into(),
                ))
            }
        },
    };
    Ok(out)
}

/// Pearson correlation. Errors on length mismatch, fewer than two points, or
/// zero variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidInput("length mismatch".into()));
    }
    if xs.len() < 2 {
        return Err(Error::Degenerate("need at least two points".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if vx == 0.0 || vy == 0.0 {
        return Err(Error::Degenerate("constant input has no correlation".into()));
    }
    Ok(cov / (vx * vy).sqrt())
}

/// Spearman rank correlation with average ranks on ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidInput("length mismatch".into()));
    }
    pearson(&average_ranks(xs), &average_ranks(ys))
}

fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        // 1-based ranks averaged across the tie group
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Square matrix over the (min, +) semiring. Zero diagonal, +infinity where
/// there is no edge.
#[derive(Clone)]
pub struct TropicalMatrix {
    size: usize,
    data: Vec<f64>,
}

impl TropicalMatrix {
    /// Adjacency matrix of the unpruned graph with unit edge weights.
    pub fn from_graph(spec: &GraphSpec, mem_budget: Option<u64>) -> Result<TropicalMatrix> {
        if spec.x_trick {
            return Err(Error::InvalidConfig(
                "matrix route runs on the unpruned graph".into(),
            ));
        }
        let space = Space::for_spec(spec)?;
        let size = space.size();
        let needed = size.saturating_mul(size).saturating_mul(8 * 2);
        if needed > mem_budget.unwrap_or(crate::search::DEFAULT_MEM_BUDGET) {
            return Err(Error::Resource(format!(
                "dense {size} x {size} matrix exceeds the budget"
            )));
        }
        let size = size as usize;
        let mut m = TropicalMatrix::identity(size);
        for r in 0..size {
            for nb in space.neighbor_ranks(r as u64) {
                let c = nb as usize;
                if c != r {
                    m.data[r * size + c] = 1.0;
                }
            }
        }
        Ok(m)
    }

    /// Tropical identity: zeros on the diagonal, +infinity elsewhere.
    pub fn identity(size: usize) -> TropicalMatrix {
        let mut data = vec![f64::INFINITY; size * size];
        for i in 0..size {
            data[i * size + i] = 0.0;
        }
        TropicalMatrix { size, data }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.size + j]
    }

    /// Min-plus product: out[i][j] = min_k (self[i][k] + other[k][j]).
    pub fn min_plus(&self, other: &TropicalMatrix) -> TropicalMatrix {
        assert_eq!(self.size, other.size);
        let size = self.size;
        let mut data = vec![f64::INFINITY; size * size];
        data.par_chunks_mut(size).enumerate().for_each(|(i, row)| {
            for k in 0..size {
                let a = self.data[i * size + k];
                if !a.is_finite() {
                    continue;
                }
                let other_row = &other.data[k * size..(k + 1) * size];
                for (slot, &b) in row.iter_mut().zip(other_row) {
                    let cand = a + b;
                    if cand < *slot {
                        *slot = cand;
                    }
                }
            }
        });
        TropicalMatrix { size, data }
    }
}

/// k-th min-plus power by repeated squaring. Entry (i, j) is the length of
/// the shortest walk from i to j using at most k edges, thanks to the zero
/// diagonal.
pub fn tropical_power(a: &TropicalMatrix, k: u64) -> TropicalMatrix {
    let mut acc = TropicalMatrix::identity(a.size());
    let mut base = a.clone();
    let mut k = k;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.min_plus(&base);
        }
        k >>= 1;
        if k > 0 {
            base = base.min_plus(&base);
        }
    }
    acc
}
