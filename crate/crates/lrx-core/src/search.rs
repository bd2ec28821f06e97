//! Exhaustive breadth-first search: layer growth profiles, full distance
//! tables, farthest states and geodesic ensembles.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{CosetState, GraphKind, GraphSpec};
use crate::perm::Permutation;
use crate::space::{FullSpace, Space};

/// Default working-memory budget when the caller does not pass one.
pub const DEFAULT_MEM_BUDGET: u64 = 4 << 30;

const UNSEEN: u8 = u8::MAX;
const EXPAND_CHUNK: usize = 1 << 14;

/// Number of states per distance layer.
#[derive(Clone, Debug, Serialize)]
pub struct LayerProfile {
    pub kind: GraphKind,
    pub n: usize,
    pub layer_sizes: Vec<u64>,
}

impl LayerProfile {
    pub fn diameter(&self) -> usize {
        self.layer_sizes.len() - 1
    }

    pub fn total(&self) -> u64 {
        self.layer_sizes.iter().sum()
    }
}

/// Distance from a fixed start to every state, indexed by rank.
pub struct DistanceTable {
    spec: GraphSpec,
    space: Space,
    start_rank: u64,
    dist: Vec<u8>,
}

impl std::fmt::Debug for DistanceTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DistanceTable")
            .field("spec", &self.spec)
            .field("size", &self.dist.len())
            .finish()
    }
}

impl DistanceTable {
    pub fn spec(&self) -> &GraphSpec {
        &self.spec
    }

    pub fn size(&self) -> u64 {
        self.dist.len() as u64
    }

    pub fn start_rank(&self) -> u64 {
        self.start_rank
    }

    pub fn diameter(&self) -> usize {
        *self.dist.iter().max().expect("nonempty table") as usize
    }

    pub fn distance_by_rank(&self, r: u64) -> u8 {
        self.dist[r as usize]
    }

    pub fn distance_perm(&self, p: &Permutation) -> Result<u8> {
        match &self.space {
            Space::Full(s) => {
                if p.n() != s.n() {
                    return Err(Error::InvalidInput(format!(
                        "table is for n = {}, state has n = {}",
                        s.n(),
                        p.n()
                    )));
                }
                Ok(self.dist[s.rank_perm(p) as usize])
            }
            Space::Coset(_) => Err(Error::InvalidInput(
                "permutation lookup on a coset table".into(),
            )),
        }
    }

    pub fn distance_coset(&self, c: &CosetState) -> Result<u8> {
        match &self.space {
            Space::Coset(s) => {
                if c.n() != s.n() {
                    return Err(Error::InvalidInput(format!(
                        "table is for n = {}, state has n = {}",
                        s.n(),
                        c.n()
                    )));
                }
                Ok(self.dist[s.rank(c) as usize])
            }
            Space::Full(_) => Err(Error::InvalidInput(
                "coset lookup on a permutation table".into(),
            )),
        }
    }

    /// Serialized form of the state at a rank, for dumps and reports.
    pub fn state_label(&self, r: u64) -> String {
        self.space.label(r)
    }

    /// All states at maximal distance, sorted canonically. Permutation ranks
    /// are already lexicographic; coset ranks are re-sorted by string.
    pub fn farthest_perms(&self) -> Result<Vec<Permutation>> {
        let d = self.diameter() as u8;
        match &self.space {
            Space::Full(s) => Ok(self
                .dist
                .iter()
                .enumerate()
                .filter(|(_, &v)| v == d)
                .map(|(r, _)| s.unrank(r as u64))
                .collect()),
            Space::Coset(_) => Err(Error::InvalidInput(
                "permutation listing on a coset table".into(),
            )),
        }
    }

    pub fn farthest_cosets(&self) -> Result<Vec<CosetState>> {
        let d = self.diameter() as u8;
        match &self.space {
            Space::Coset(s) => {
                let mut out: Vec<CosetState> = self
                    .dist
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v == d)
                    .map(|(r, _)| s.unrank(r as u64))
                    .collect();
                out.sort();
                Ok(out)
            }
            Space::Full(_) => Err(Error::InvalidInput(
                "coset listing on a permutation table".into(),
            )),
        }
    }

    /// Farthest states in their serialized form, canonically sorted.
    pub fn farthest_labels(&self) -> Vec<String> {
        match &self.space {
            Space::Full(_) => self
                .farthest_perms()
                .expect("kind checked")
                .iter()
                .map(|p| p.to_string())
                .collect(),
            Space::Coset(_) => self
                .farthest_cosets()
                .expect("kind checked")
                .iter()
                .map(|c| c.to_string())
                .collect(),
        }
    }

    /// Ranks of every state at a given distance.
    pub fn layer_ranks(&self, d: usize) -> Vec<u64> {
        self.dist
            .iter()
            .enumerate()
            .filter(|(_, &v)| v as usize == d)
            .map(|(r, _)| r as u64)
            .collect()
    }

    pub(crate) fn space(&self) -> &Space {
        &self.space
    }

    pub(crate) fn dist_slice(&self) -> &[u8] {
        &self.dist
    }
}

/// Full breadth-first search from the canonical start (identity, or the
/// sorted balanced string). Rejects pruned graphs: exact tables are always
/// built on the unpruned graph.
pub fn bfs(spec: &GraphSpec, mem_budget: Option<u64>) -> Result<(LayerProfile, DistanceTable)> {
    if spec.x_trick {
        return Err(Error::InvalidConfig(
            "exact search runs on the unpruned graph".into(),
        ));
    }
    let space = Space::for_spec(spec)?;
    let start = space.start_rank();
    bfs_from(*spec, space, start, mem_budget.unwrap_or(DEFAULT_MEM_BUDGET))
}

/// Breadth-first search from an arbitrary permutation start.
pub fn bfs_full_from(
    n: usize,
    start: &Permutation,
    mem_budget: Option<u64>,
) -> Result<(LayerProfile, DistanceTable)> {
    if start.n() != n {
        return Err(Error::InvalidInput(format!(
            "start state has n = {}, expected {n}",
            start.n()
        )));
    }
    let spec = GraphSpec::full(n)?;
    let space = Space::for_spec(&spec)?;
    let start_rank = match &space {
        Space::Full(s) => s.rank_perm(start),
        Space::Coset(_) => unreachable!(),
    };
    bfs_from(spec, space, start_rank, mem_budget.unwrap_or(DEFAULT_MEM_BUDGET))
}

fn bfs_from(
    spec: GraphSpec,
    space: Space,
    start_rank: u64,
    mem_budget: u64,
) -> Result<(LayerProfile, DistanceTable)> {
    let size = space.size();
    // one byte per state plus frontier churn, estimated at 2 bytes per state
    let needed = size.saturating_mul(3);
    if needed > mem_budget {
        return Err(Error::Resource(format!(
            "search over {size} states needs about {needed} bytes, budget is {mem_budget}"
        )));
    }
    let mut dist = vec![UNSEEN; size as usize];
    dist[start_rank as usize] = 0;
    let mut frontier = vec![start_rank];
    let mut layer_sizes = vec![1u64];
    let mut depth = 0u8;

    while !frontier.is_empty() {
        if depth == UNSEEN - 1 {
            return Err(Error::Resource("distance exceeds 254 layers".into()));
        }
        // Read-only expansion in deterministic chunks, serial in-order merge.
        let candidate_groups: Vec<Vec<u64>> = frontier
            .par_chunks(EXPAND_CHUNK)
            .map(|chunk| {
                let mut out = Vec::with_capacity(chunk.len() * 3);
                for &r in chunk {
                    for nb in space.neighbor_ranks(r) {
                        if dist[nb as usize] == UNSEEN {
                            out.push(nb);
                        }
                    }
                }
                out
            })
            .collect();

        let mut next = Vec::new();
        for group in candidate_groups {
            for nb in group {
                let slot = &mut dist[nb as usize];
                if *slot == UNSEEN {
                    *slot = depth + 1;
                    next.push(nb);
                }
            }
        }
        depth += 1;
        if next.is_empty() {
            break;
        }
        layer_sizes.push(next.len() as u64);
        frontier = next;
    }

    debug_assert_eq!(layer_sizes.iter().sum::<u64>(), size);
    let profile = LayerProfile {
        kind: spec.kind,
        n: spec.n,
        layer_sizes,
    };
    let table = DistanceTable {
        spec,
        space,
        start_rank,
        dist,
    };
    Ok((profile, table))
}

/// Position averages over all geodesics between two permutations, weighted
/// uniformly over the geodesic ensemble.
pub struct GeodesicEnsemble {
    pub n: usize,
    pub distance: usize,
    pub total_geodesics: BigUint,
    /// `expected_positions[t][v]` is the mean position of value v at step t.
    pub expected_positions: Vec<Vec<f64>>,
}

pub fn geodesic_ensemble(
    n: usize,
    source: &Permutation,
    target: &Permutation,
    mem_budget: Option<u64>,
) -> Result<GeodesicEnsemble> {
    if source.n() != n || target.n() != n {
        return Err(Error::InvalidInput("state sizes disagree with n".into()));
    }
    let budget = mem_budget.unwrap_or(DEFAULT_MEM_BUDGET);
    let space = FullSpace::new(n)?;
    let size = space.size();
    // two distance arrays plus two big-integer count arrays
    let needed = size.saturating_mul(2 + 2 * 40);
    if needed > budget {
        return Err(Error::Resource(format!(
            "geodesic ensemble over {size} states needs about {needed} bytes"
        )));
    }

    let (_, from_source) = bfs_full_from(n, source, Some(budget))?;
    let (_, from_target) = bfs_full_from(n, target, Some(budget))?;
    let ds = from_source.dist_slice();
    let dt = from_target.dist_slice();
    let d = ds[space.rank_perm(target) as usize] as usize;

    // States on geodesics, grouped by distance from the source.
    let mut layers: Vec<Vec<u64>> = vec![Vec::new(); d + 1];
    for r in 0..size {
        let a = ds[r as usize] as usize;
        let b = dt[r as usize] as usize;
        if a + b == d {
            layers[a].push(r);
        }
    }

    let zero = BigUint::zero();
    let mut count_s: Vec<BigUint> = vec![zero.clone(); size as usize];
    let mut count_t: Vec<BigUint> = vec![zero.clone(); size as usize];
    count_s[space.rank_perm(source) as usize] = BigUint::one();
    count_t[space.rank_perm(target) as usize] = BigUint::one();

    for t in 1..=d {
        for &r in &layers[t] {
            let mut acc = BigUint::zero();
            for nb in space.neighbor_ranks(r) {
                let u = nb as usize;
                if ds[u] as usize + 1 == t && ds[u] as usize + (dt[u] as usize) == d {
                    acc += &count_s[u];
                }
            }
            count_s[r as usize] = acc;
        }
        let back = d - t;
        for &r in &layers[back] {
            let mut acc = BigUint::zero();
            for nb in space.neighbor_ranks(r) {
                let u = nb as usize;
                if dt[u] as usize + 1 == t && ds[u] as usize + (dt[u] as usize) == d {
                    acc += &count_t[u];
                }
            }
            count_t[r as usize] = acc;
        }
    }

    let total = count_s[space.rank_perm(target) as usize].clone();
    debug_assert_eq!(total, count_t[space.rank_perm(source) as usize]);
    if total.is_zero() {
        return Err(Error::InvalidInput("no geodesics found".into()));
    }
    let total_f = total.to_f64().unwrap_or(f64::INFINITY);

    let mut expected_positions = Vec::with_capacity(d + 1);
    let mut entries = vec![0u16; n];
    for (t, layer) in layers.iter().enumerate() {
        let mut sums: Vec<BigUint> = vec![BigUint::zero(); n];
        let mut layer_weight = BigUint::zero();
        for &r in layer {
            let w = &count_s[r as usize] * &count_t[r as usize];
            if w.is_zero() {
                continue;
            }
            space.unrank_into(r, &mut entries);
            for (pos, &v) in entries.iter().enumerate() {
                sums[v as usize] += &w * BigUint::from(pos);
            }
            layer_weight += w;
        }
        debug_assert_eq!(layer_weight, total, "layer {t} weight mismatch");
        let row = sums
            .iter()
            .map(|s| s.to_f64().unwrap_or(f64::INFINITY) / total_f)
            .collect();
        expected_positions.push(row);
    }

    Ok(GeodesicEnsemble {
        n,
        distance: d,
        total_geodesics: total,
        expected_positions,
    })
}
