//! Learned distance estimator: a one-hidden-layer ReLU network over one-hot
//! encoded permutations, trained on random-walk first-visit labels and then
//! refined by bootstrapped one-step targets.

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::GraphSpec;
use crate::perm::{GeneratorMove, Permutation};
use crate::rng::{derived_seed, indexed_substream, substream};
use crate::walks::{generate_walks, TrainingSet, WalkConfig};

const CHECKPOINT_VERSION: u64 = 1;
const PREDICT_CHUNK: usize = 1024;

/// Flat one-hot encoding: slot i*n + p[i] is 1.
pub fn encode_state(p: &Permutation) -> Vec<f64> {
    let n = p.n();
    let mut out = vec![0.0; n * n];
    for (i, &v) in p.entries().iter().enumerate() {
        out[i * n + v as usize] = 1.0;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Optimizer {
    Adam,
    Sgd,
}

#[derive(Clone, Debug)]
pub struct ModelConfig {
    pub hidden_width: usize,
    pub warmup_epochs: usize,
    pub dqn_epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub optimizer: Optimizer,
    pub seed: u64,
}

impl Default for ModelConfig {
    fn default() -> ModelConfig {
        ModelConfig {
            hidden_width: 128,
            warmup_epochs: 20,
            dqn_epochs: 10,
            batch_size: 128,
            learning_rate: 1e-3,
            optimizer: Optimizer::Adam,
            seed: 0,
        }
    }
}

/// n^2 -> hidden -> 1 network with ReLU activation. The first layer is a
/// gather: the one-hot input selects n rows of the weight matrix.
#[derive(Clone, Debug)]
pub struct DistanceEstimator {
    n: usize,
    hidden: usize,
    /// Row-major, one row of length `hidden` per input slot.
    w1: Vec<f64>,
    b1: Vec<f64>,
    w2: Vec<f64>,
    b2: f64,
    seed: u64,
    meta: serde_json::Value,
}

impl DistanceEstimator {
    pub fn new_random(n: usize, hidden: usize, seed: u64) -> Result<DistanceEstimator> {
        if n < 2 || hidden == 0 {
            return Err(Error::InvalidConfig(format!(
                "estimator needs n >= 2 and a nonzero hidden width, got n = {n}, hidden = {hidden}"
            )));
        }
        let mut rng = substream(seed, "model-init");
        let in_dim = n * n;
        let s1 = 1.0 / (in_dim as f64).sqrt();
        let s2 = 1.0 / (hidden as f64).sqrt();
        let w1 = (0..in_dim * hidden).map(|_| rng.gen_range(-s1..s1)).collect();
        let w2 = (0..hidden).map(|_| rng.gen_range(-s2..s2)).collect();
        Ok(DistanceEstimator {
            n,
            hidden,
            w1,
            b1: vec![0.0; hidden],
            w2,
            b2: 0.0,
            seed,
            meta: json!({}),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hidden_width(&self) -> usize {
        self.hidden
    }

    pub fn training_meta(&self) -> &serde_json::Value {
        &self.meta
    }

    fn preactivations(&self, entries: &[u16], pre: &mut [f64]) {
        pre.copy_from_slice(&self.b1);
        let n = self.n;
        for (i, &v) in entries.iter().enumerate() {
            let row = (i * n + v as usize) * self.hidden;
            let w = &self.w1[row..row + self.hidden];
            for (acc, &x) in pre.iter_mut().zip(w) {
                *acc += x;
            }
        }
    }

    fn forward(&self, entries: &[u16], pre: &mut [f64]) -> f64 {
        self.preactivations(entries, pre);
        let mut y = self.b2;
        for (h, &w) in pre.iter().zip(&self.w2) {
            if *h > 0.0 {
                y += h * w;
            }
        }
        y
    }

    pub fn predict(&self, p: &Permutation) -> f64 {
        assert_eq!(p.n(), self.n, "estimator is for n = {}", self.n);
        let mut pre = vec![0.0; self.hidden];
        self.forward(p.entries(), &mut pre)
    }

    /// Batch prediction, parallel over fixed-size chunks.
    pub fn predict_batch(&self, states: &[Permutation]) -> Vec<f64> {
        states
            .par_chunks(PREDICT_CHUNK)
            .flat_map_iter(|chunk| {
                let mut pre = vec![0.0; self.hidden];
                chunk
                    .iter()
                    .map(|p| self.forward(p.entries(), &mut pre))
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        let doc = json!({
            "version": CHECKPOINT_VERSION,
            "n": self.n,
            "hidden_width": self.hidden,
            "activation": "relu",
            "weights": {
                "w1": self.w1,
                "b1": self.b1,
                "w2": self.w2,
                "b2": self.b2,
            },
            "seed": self.seed,
            "training_meta": self.meta,
        });
        fs::write(path, serde_json::to_string(&doc)?)?;
        Ok(())
    }

    pub fn load_json(path: &Path) -> Result<DistanceEstimator> {
        let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(path)?)?;
        let version = doc["version"].as_u64().unwrap_or(0);
        if version != CHECKPOINT_VERSION {
            return Err(Error::InvalidInput(format!(
                "unsupported checkpoint version {version}"
            )));
        }
        let n = doc["n"].as_u64().ok_or_else(|| bad("missing n"))? as usize;
        let hidden = doc["hidden_width"].as_u64().ok_or_else(|| bad("missing hidden_width"))?
            as usize;
        if doc["activation"].as_str() != Some("relu") {
            return Err(bad("unsupported activation"));
        }
        let w = &doc["weights"];
        let w1 = float_vec(&w["w1"])?;
        let b1 = float_vec(&w["b1"])?;
        let w2 = float_vec(&w["w2"])?;
        let b2 = w["b2"].as_f64().ok_or_else(|| bad("missing b2"))?;
        if w1.len() != n * n * hidden || b1.len() != hidden || w2.len() != hidden {
            return Err(bad("weight shapes disagree with n and hidden_width"));
        }
        Ok(DistanceEstimator {
            n,
            hidden,
            w1,
            b1,
            w2,
            b2,
            seed: doc["seed"].as_u64().unwrap_or(0),
            meta: doc["training_meta"].clone(),
        })
    }
}

fn bad(msg: &str) -> Error {
    Error::InvalidInput(format!("checkpoint: {msg}"))
}

fn float_vec(v: &serde_json::Value) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| bad("expected an array of weights"))?
        .iter()
        .map(|x| x.as_f64().ok_or_else(|| bad("non-numeric weight")))
        .collect()
}

struct Grads {
    w1: Vec<f64>,
    b1: Vec<f64>,
    w2: Vec<f64>,
    b2: f64,
}

impl Grads {
    fn zeros(n: usize, hidden: usize) -> Grads {
        Grads {
            w1: vec![0.0; n * n * hidden],
            b1: vec![0.0; hidden],
            w2: vec![0.0; hidden],
            b2: 0.0,
        }
    }

    fn clear(&mut self) {
        self.w1.fill(0.0);
        self.b1.fill(0.0);
        self.w2.fill(0.0);
        self.b2 = 0.0;
    }

    fn scale(&mut self, s: f64) {
        for g in &mut self.w1 {
            *g *= s;
        }
        for g in &mut self.b1 {
            *g *= s;
        }
        for g in &mut self.w2 {
            *g *= s;
        }
        self.b2 *= s;
    }
}

/// Accumulates the gradient of the squared error (y - target)^2 for one
/// sample. Returns the sample loss.
fn accumulate_sample(
    est: &DistanceEstimator,
    entries: &[u16],
    target: f64,
    grads: &mut Grads,
    pre: &mut [f64],
) -> f64 {
    let y = est.forward(entries, pre);
    let err = y - target;
    let dy = 2.0 * err;
    grads.b2 += dy;
    let n = est.n;
    for j in 0..est.hidden {
        if pre[j] > 0.0 {
            grads.w2[j] += dy * pre[j];
            let dh = dy * est.w2[j];
            grads.b1[j] += dh;
        }
    }
    for (i, &v) in entries.iter().enumerate() {
        let row = (i * n + v as usize) * est.hidden;
        for j in 0..est.hidden {
            if pre[j] > 0.0 {
                grads.w1[row + j] += dy * est.w2[j];
            }
        }
    }
    err * err
}

enum OptState {
    Sgd,
    Adam {
        m: Grads,
        v: Grads,
        t: u64,
    },
}

impl OptState {
    fn new(cfg: &ModelConfig, n: usize, hidden: usize) -> OptState {
        match cfg.optimizer {
            Optimizer::Sgd => OptState::Sgd,
            Optimizer::Adam => OptState::Adam {
                m: Grads::zeros(n, hidden),
                v: Grads::zeros(n, hidden),
                t: 0,
            },
        }
    }

    fn step(&mut self, est: &mut DistanceEstimator, grads: &Grads, lr: f64) {
        match self {
            OptState::Sgd => {
                for (p, g) in est.w1.iter_mut().zip(&grads.w1) {
                    *p -= lr * g;
                }
                for (p, g) in est.b1.iter_mut().zip(&grads.b1) {
                    *p -= lr * g;
                }
                for (p, g) in est.w2.iter_mut().zip(&grads.w2) {
                    *p -= lr * g;
                }
                est.b2 -= lr * grads.b2;
            }
            OptState::Adam { m, v, t } => {
                const B1: f64 = 0.9;
                const B2: f64 = 0.999;
                const EPS: f64 = 1e-8;
                *t += 1;
                let bc1 = 1.0 - B1.powi(*t as i32);
                let bc2 = 1.0 - B2.powi(*t as i32);
                let update = |p: &mut f64, g: f64, m: &mut f64, v: &mut f64| {
                    *m = B1 * *m + (1.0 - B1) * g;
                    *v = B2 * *v + (1.0 - B2) * g * g;
                    *p -= lr * (*m / bc1) / ((*v / bc2).sqrt() + EPS);
                };
                for i in 0..est.w1.len() {
                    update(&mut est.w1[i], grads.w1[i], &mut m.w1[i], &mut v.w1[i]);
                }
                for i in 0..est.b1.len() {
                    update(&mut est.b1[i], grads.b1[i], &mut m.b1[i], &mut v.b1[i]);
                }
                for i in 0..est.w2.len() {
                    update(&mut est.w2[i], grads.w2[i], &mut m.w2[i], &mut v.w2[i]);
                }
                update(&mut est.b2, grads.b2, &mut m.b2, &mut v.b2);
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TrainReport {
    /// Dataset MSE before the first epoch.
    pub initial_loss: f64,
    /// Dataset MSE after each epoch.
    pub epoch_loss: Vec<f64>,
}

fn dataset_mse(est: &DistanceEstimator, pairs: &[(Permutation, f64)]) -> f64 {
    // Chunk sums are reduced serially in chunk order so the value does not
    // depend on the thread count.
    let chunk_sums: Vec<f64> = pairs
        .par_chunks(PREDICT_CHUNK)
        .map(|chunk| {
            let mut pre = vec![0.0; est.hidden];
            chunk
                .iter()
                .map(|(p, t)| {
                    let e = est.forward(p.entries(), &mut pre) - t;
                    e * e
                })
                .sum::<f64>()
        })
        .collect();
    chunk_sums.iter().sum::<f64>() / pairs.len() as f64
}

fn run_epochs(
    est: &mut DistanceEstimator,
    pairs: &[(Permutation, f64)],
    cfg: &ModelConfig,
    opt: &mut OptState,
    epochs: usize,
    shuffle_label: &str,
    report: &mut TrainReport,
) {
    let mut grads = Grads::zeros(est.n, est.hidden);
    let mut pre = vec![0.0; est.hidden];
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    for epoch in 0..epochs {
        let mut rng = indexed_substream(cfg.seed, shuffle_label, epoch as u64);
        order.shuffle(&mut rng);
        for batch in order.chunks(cfg.batch_size) {
            grads.clear();
            for &i in batch {
                let (p, t) = &pairs[i];
                accumulate_sample(est, p.entries(), *t, &mut grads, &mut pre);
            }
            grads.scale(1.0 / batch.len() as f64);
            opt.step(est, &grads, cfg.learning_rate);
        }
        report.epoch_loss.push(dataset_mse(est, pairs));
    }
}

/// Supervised warm-up on random-walk labels.
pub fn train_warmup(
    ts: &TrainingSet,
    cfg: &ModelConfig,
) -> Result<(DistanceEstimator, TrainReport)> {
    if ts.pairs.is_empty() {
        return Err(Error::InvalidInput("empty training set".into()));
    }
    let n = ts.spec.n;
    let mut est = DistanceEstimator::new_random(n, cfg.hidden_width, cfg.seed)?;
    let pairs: Vec<(Permutation, f64)> = ts
        .pairs
        .iter()
        .map(|(p, k)| (p.clone(), *k as f64))
        .collect();
    let mut report = TrainReport {
        initial_loss: dataset_mse(&est, &pairs),
        epoch_loss: Vec::new(),
    };
    let mut opt = OptState::new(cfg, n, cfg.hidden_width);
    run_epochs(
        &mut est,
        &pairs,
        cfg,
        &mut opt,
        cfg.warmup_epochs,
        "warmup-shuffle",
        &mut report,
    );
    est.meta = json!({
        "phase": "warmup",
        "epochs": cfg.warmup_epochs,
        "samples": pairs.len(),
        "final_loss": report.epoch_loss.last().copied().unwrap_or(report.initial_loss),
    });
    Ok((est, report))
}

/// Bootstrapped refinement. Each epoch regenerates walks, freezes a snapshot
/// of the network, and regresses toward clip(1 + min over the three
/// neighbors of the frozen prediction, 0, visit step).
pub fn train_dqn(
    spec: &GraphSpec,
    start: &DistanceEstimator,
    cfg: &ModelConfig,
    walk_cfg: &WalkConfig,
) -> Result<(DistanceEstimator, TrainReport)> {
    if start.n() != spec.n {
        return Err(Error::InvalidConfig(format!(
            "estimator is for n = {}, graph has n = {}",
            start.n(),
            spec.n
        )));
    }
    let mut est = start.clone();
    let mut report = TrainReport {
        initial_loss: f64::NAN,
        epoch_loss: Vec::new(),
    };
    let mut opt = OptState::new(cfg, est.n, est.hidden);

    for epoch in 0..cfg.dqn_epochs {
        let mut wc = walk_cfg.clone();
        wc.seed = derived_seed(walk_cfg.seed, "dqn-walks", epoch as u64);
        let ts = generate_walks(spec, &wc)?;

        let frozen = est.clone();
        // all three neighbor predictions, regardless of any walk pruning
        let neighbor_states: Vec<Permutation> = ts
            .pairs
            .iter()
            .flat_map(|(p, _)| {
                GeneratorMove::ALL.iter().map(move |&mv| p.apply_move(mv))
            })
            .collect();
        let preds = frozen.predict_batch(&neighbor_states);
        let pairs: Vec<(Permutation, f64)> = ts
            .pairs
            .iter()
            .zip(preds.chunks(3))
            .map(|((p, k), nb)| {
                let best = nb[0].min(nb[1]).min(nb[2]);
                let target = (1.0 + best).clamp(0.0, *k as f64);
                (p.clone(), target)
            })
            .collect();

        if epoch == 0 {
            report.initial_loss = dataset_mse(&est, &pairs);
        }
        run_epochs(&mut est, &pairs, cfg, &mut opt, 1, "dqn-shuffle", &mut report);
    }

    est.meta = json!({
        "phase": "dqn",
        "epochs": cfg.dqn_epochs,
        "walks_per_epoch": walk_cfg.n_walks,
        "final_loss": report.epoch_loss.last().copied(),
    });
    Ok((est, report))
}

#[derive(Clone, Copy, Debug)]
pub struct GradCheckReport {
    pub max_rel_err: f64,
    /// Worst relative error per parameter group: w1, b1, w2, b2.
    pub per_layer: [f64; 4],
}

/// Central-difference check of the analytic gradient of the summed squared
/// error over a sample set. Relative error uses a small absolute floor so
/// that near-zero gradient pairs do not blow up the ratio.
pub fn gradient_check(
    est: &DistanceEstimator,
    samples: &[(Permutation, f64)],
) -> GradCheckReport {
    const H: f64 = 1e-5;
    let mut analytic = Grads::zeros(est.n, est.hidden);
    let mut pre = vec![0.0; est.hidden];
    for (p, t) in samples {
        accumulate_sample(est, p.entries(), *t, &mut analytic, &mut pre);
    }

    fn summed_loss(est: &DistanceEstimator, samples: &[(Permutation, f64)]) -> f64 {
        let mut pre = vec![0.0; est.hidden];
        samples
            .iter()
            .map(|(p, t)| {
                let e = est.forward(p.entries(), &mut pre) - t;
                e * e
            })
            .sum()
    }

    // flat parameter index -> (slot reference, layer id)
    fn param_mut(est: &mut DistanceEstimator, idx: usize) -> (&mut f64, usize) {
        let n1 = est.w1.len();
        let n2 = n1 + est.b1.len();
        let n3 = n2 + est.w2.len();
        if idx < n1 {
            (&mut est.w1[idx], 0)
        } else if idx < n2 {
            (&mut est.b1[idx - n1], 1)
        } else if idx < n3 {
            (&mut est.w2[idx - n2], 2)
        } else {
            (&mut est.b2, 3)
        }
    }

    let flat_analytic: Vec<f64> = analytic
        .w1
        .iter()
        .chain(&analytic.b1)
        .chain(&analytic.w2)
        .chain(std::iter::once(&analytic.b2))
        .copied()
        .collect();

    let mut probe = est.clone();
    let mut per_layer = [0.0f64; 4];
    for (idx, &a) in flat_analytic.iter().enumerate() {
        let (slot, layer) = param_mut(&mut probe, idx);
        let original = *slot;
        *slot = original + H;
        let up = summed_loss(&probe, samples);
        let (slot, _) = param_mut(&mut probe, idx);
        *slot = original - H;
        let down = summed_loss(&probe, samples);
        let (slot, _) = param_mut(&mut probe, idx);
        *slot = original;
        let numeric = (up - down) / (2.0 * H);
        let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-4);
        if rel > per_layer[layer] {
            per_layer[layer] = rel;
        }
    }

    GradCheckReport {
        max_rel_err: per_layer.iter().cloned().fold(0.0, f64::max),
        per_layer,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walks::WalkKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use tempfile::tempdir;

    fn tiny_net() -> DistanceEstimator {
        DistanceEstimator::new_random(5, 8, 42).unwrap()
    }

    #[test]
    fn encoding_is_one_hot() {
        let p: Permutation = "1,0,2".parse().unwrap();
        let enc = encode_state(&p);
        assert_eq!(enc.len(), 9);
        assert_eq!(enc.iter().sum::<f64>(), 3.0);
        assert_eq!(enc[0 * 3 + 1], 1.0);
        assert_eq!(enc[1 * 3 + 0], 1.0);
        assert_eq!(enc[2 * 3 + 2], 1.0);
    }

    #[test]
    fn forward_matches_explicit_matrix_product() {
        let est = tiny_net();
        let p: Permutation = "3,1,4,0,2".parse().unwrap();
        let enc = encode_state(&p);
        let mut expect = est.b2;
        for j in 0..est.hidden {
            let mut h = est.b1[j];
            for (i, &x) in enc.iter().enumerate() {
                h += x * est.w1[i * est.hidden + j];
            }
            if h > 0.0 {
                expect += h * est.w2[j];
            }
        }
        assert!((est.predict(&p) - expect).abs() < 1e-12);
    }

    #[test]
    fn batch_prediction_matches_single() {
        let est = tiny_net();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let states: Vec<Permutation> = (0..40).map(|_| Permutation::random(5, &mut rng)).collect();
        let batch = est.predict_batch(&states);
        for (p, &b) in states.iter().zip(&batch) {
            assert_eq!(est.predict(p), b);
        }
    }

    #[test]
    fn duplicated_sample_doubles_the_gradient() {
        let est = tiny_net();
        let p: Permutation = "2,0,1,4,3".parse().unwrap();
        let mut pre = vec![0.0; est.hidden];
        let mut single = Grads::zeros(5, 8);
        accumulate_sample(&est, p.entries(), 3.0, &mut single, &mut pre);
        let mut double = Grads::zeros(5, 8);
        accumulate_sample(&est, p.entries(), 3.0, &mut double, &mut pre);
        accumulate_sample(&est, p.entries(), 3.0, &mut double, &mut pre);
        for (a, b) in single.w1.iter().zip(&double.w1) {
            assert_eq!(*b, 2.0 * a);
        }
        assert_eq!(double.b2, 2.0 * single.b2);
    }

    #[test]
    fn gradients_match_central_differences() {
        let est = tiny_net();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let samples: Vec<(Permutation, f64)> = (0..100)
            .map(|_| {
                (
                    Permutation::random(5, &mut rng),
                    rng.gen_range(0..12) as f64,
                )
            })
            .collect();
        let report = gradient_check(&est, &samples);
        for (layer, &err) in ["w1", "b1", "w2", "b2"].iter().zip(&report.per_layer) {
            assert!(err < 1e-4, "layer {layer} relative error {err}");
        }
    }

    #[test]
    fn checkpoint_round_trip_is_bit_exact() {
        let est = tiny_net();
        let dir = tempdir().unwrap();
        let path = dir.path().join("model.json");
        est.save_json(&path).unwrap();
        let back = DistanceEstimator::load_json(&path).unwrap();
        assert_eq!(back.n, est.n);
        assert_eq!(back.hidden, est.hidden);
        assert_eq!(back.w1, est.w1);
        assert_eq!(back.b1, est.b1);
        assert_eq!(back.w2, est.w2);
        assert_eq!(back.b2, est.b2);
        let p: Permutation = "4,3,2,1,0".parse().unwrap();
        assert_eq!(est.predict(&p), back.predict(&p));
    }

    #[test]
    fn checkpoint_rejects_bad_version_and_shapes() {
        let est = tiny_net();
        let dir = tempdir().unwrap();
        let path = dir.path().join("model.json");
        est.save_json(&path).unwrap();

        let mut doc: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        doc["version"] = json!(2);
        fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
        assert!(DistanceEstimator::load_json(&path).is_err());

        doc["version"] = json!(1);
        doc["n"] = json!(6);
        fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
        assert!(DistanceEstimator::load_json(&path).is_err());
    }

    #[test]
    fn warmup_reduces_loss_on_small_walks() {
        let spec = GraphSpec::full(5).unwrap();
        let wc = WalkConfig {
            kind: WalkKind::Plain,
            k_max: 12,
            n_walks: 200,
            seed: 9,
        };
        let ts = generate_walks(&spec, &wc).unwrap();
        let cfg = ModelConfig {
            hidden_width: 32,
            warmup_epochs: 8,
            batch_size: 64,
            seed: 9,
            ..ModelConfig::default()
        };
        let (est, report) = train_warmup(&ts, &cfg).unwrap();
        assert_eq!(report.epoch_loss.len(), 8);
        assert!(report.epoch_loss.last().unwrap() < &report.initial_loss);
        assert_eq!(est.n(), 5);
    }

    #[test]
    fn tiny_learning_rate_never_increases_loss() {
        let spec = GraphSpec::full(5).unwrap();
        let wc = WalkConfig {
            kind: WalkKind::Plain,
            k_max: 10,
            n_walks: 60,
            seed: 4,
        };
        let ts = generate_walks(&spec, &wc).unwrap();
        let cfg = ModelConfig {
            hidden_width: 16,
            warmup_epochs: 5,
            batch_size: 32,
            learning_rate: 1e-6,
            optimizer: Optimizer::Sgd,
            seed: 4,
            ..ModelConfig::default()
        };
        let (_, report) = train_warmup(&ts, &cfg).unwrap();
        let mut last = report.initial_loss;
        for &l in &report.epoch_loss {
            assert!(l <= last + 1e-12, "loss rose from {last} to {l}");
            last = l;
        }
    }

    #[test]
    fn dqn_targets_stay_in_range() {
        let spec = GraphSpec::full(5).unwrap();
        let wc = WalkConfig {
            kind: WalkKind::Plain,
            k_max: 10,
            n_walks: 80,
            seed: 11,
        };
        let ts = generate_walks(&spec, &wc).unwrap();
        let cfg = ModelConfig {
            hidden_width: 16,
            warmup_epochs: 3,
            dqn_epochs: 2,
            batch_size: 64,
            seed: 11,
            ..ModelConfig::default()
        };
        let (warm, _) = train_warmup(&ts, &cfg).unwrap();
        let (tuned, report) = train_dqn(&spec, &warm, &cfg, &wc).unwrap();
        assert_eq!(report.epoch_loss.len(), 2);
        assert_eq!(tuned.n(), 5);
        // identity should score near the bottom of the range
        let e = Permutation::identity(5);
        assert!(tuned.predict(&e) < tuned.predict(&"1,0,4,3,2".parse().unwrap()));
    }

    #[test]
    fn training_is_deterministic() {
        let spec = GraphSpec::full(4).unwrap();
        let wc = WalkConfig {
            kind: WalkKind::Plain,
            k_max: 8,
            n_walks: 50,
            seed: 2,
        };
        let ts = generate_walks(&spec, &wc).unwrap();
        let cfg = ModelConfig {
            hidden_width: 8,
            warmup_epochs: 3,
            batch_size: 16,
            seed: 2,
            ..ModelConfig::default()
        };
        let (a, _) = train_warmup(&ts, &cfg).unwrap();
        let (b, _) = train_warmup(&ts, &cfg).unwrap();
        assert_eq!(a.w1, b.w1);
        assert_eq!(a.b2, b.b2);
    }
}
