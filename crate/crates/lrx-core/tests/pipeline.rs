//! Cross-module flows: search feeding solvers, learning feeding beams, and
//! the quotient relation between the two graphs.

use lrx_core::beam::{beam_search, BeamConfig, BeamHeuristic};
use lrx_core::bellman::{dp_solve, DpConfig};
use lrx_core::estimator::{train_dqn, train_warmup, DistanceEstimator, ModelConfig};
use lrx_core::graph::{coset_project, dihedral_long_elements, longest_element, GraphSpec};
use lrx_core::perm::Permutation;
use lrx_core::search::bfs;
use lrx_core::solvers::{axial_lower_bound, constructive_solve, longest_word, solve_length_bound};
use lrx_core::walks::{generate_walks, mixing_curve, WalkConfig, WalkKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn diameters_layer_counts_and_farthest_states_through_n9() {
    for n in 4..=9usize {
        let (profile, table) = bfs(&GraphSpec::full(n).unwrap(), None).unwrap();
        let diameter = n * (n - 1) / 2;
        assert_eq!(profile.diameter(), diameter);
        assert_eq!(profile.layer_sizes.len(), diameter + 1);
        assert_eq!(profile.total(), (1..=n as u64).product::<u64>());
        assert_eq!(
            table.farthest_perms().unwrap(),
            vec![longest_element(n).unwrap()]
        );
    }
}

#[test]
fn adjacent_states_differ_by_at_most_one_in_distance() {
    let (_, table) = bfs(&GraphSpec::full(8).unwrap(), None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100_000 {
        let p = Permutation::random(8, &mut rng);
        let mv = lrx_core::perm::GeneratorMove::ALL[rng.gen_range(0..3)];
        let q = p.apply_move(mv);
        let dp = i32::from(table.distance_perm(&p).unwrap());
        let dq = i32::from(table.distance_perm(&q).unwrap());
        assert!((dp - dq).abs() <= 1);
    }
}

#[test]
fn solver_words_sit_between_bfs_distance_and_the_bound() {
    let (_, table) = bfs(&GraphSpec::full(7).unwrap(), None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let p = Permutation::random(7, &mut rng);
        let w = constructive_solve(&p);
        assert!(p.apply_word(&w).is_identity());
        assert!(w.len() as u64 >= u64::from(table.distance_perm(&p).unwrap()));
        assert!(w.len() as u64 <= solve_length_bound(7));
    }
}

#[test]
fn explicit_long_word_is_optimal_where_bfs_can_check() {
    for n in 4..=8usize {
        let (_, table) = bfs(&GraphSpec::full(n).unwrap(), None).unwrap();
        let w = longest_word(n).unwrap();
        let target = longest_element(n).unwrap();
        assert_eq!(
            u64::from(table.distance_perm(&target).unwrap()),
            w.len() as u64
        );
    }
}

#[test]
fn reflections_respect_the_axial_lower_bound_under_bfs() {
    for n in 4..=9usize {
        let (_, table) = bfs(&GraphSpec::full(n).unwrap(), None).unwrap();
        for r in dihedral_long_elements(n).unwrap() {
            let d = u64::from(table.distance_perm(&r).unwrap());
            assert!(d >= axial_lower_bound(n).unwrap());
        }
    }
}

#[test]
fn coset_projection_never_increases_distance() {
    let full = GraphSpec::full(6).unwrap();
    let coset = GraphSpec::coset(6).unwrap();
    let (_, full_table) = bfs(&full, None).unwrap();
    let (_, coset_table) = bfs(&coset, None).unwrap();
    let mut entries: Vec<u16> = (0..6).collect();
    heap_all(&mut entries, 6, &mut |e| {
        let p = Permutation::from_entries(e.to_vec()).unwrap();
        let d_full = full_table.distance_perm(&p).unwrap();
        let d_coset = coset_table
            .distance_coset(&coset_project(&p).unwrap())
            .unwrap();
        assert!(d_coset <= d_full);
    });
}

fn heap_all(entries: &mut Vec<u16>, k: usize, visit: &mut impl FnMut(&[u16])) {
    if k == 1 {
        visit(entries);
        return;
    }
    for i in 0..k {
        heap_all(entries, k - 1, visit);
        if k % 2 == 0 {
            entries.swap(i, k - 1);
        } else {
            entries.swap(0, k - 1);
        }
    }
}

#[test]
fn value_iteration_reaches_exact_bfs_distances_at_n6() {
    let spec = GraphSpec::full(6).unwrap();
    let (_, table) = bfs(&spec, None).unwrap();
    let result = dp_solve(&spec, &DpConfig::default(), &table).unwrap();
    assert!(result.converged);
    for r in 0..table.size() {
        assert_eq!(
            result.distances[r as usize],
            f64::from(table.distance_by_rank(r))
        );
    }
}

#[test]
fn walk_training_feeds_a_beam_that_solves_the_farthest_state() {
    let n = 7;
    let spec = GraphSpec::full(n).unwrap();
    let walk_cfg = WalkConfig {
        kind: WalkKind::Plain,
        k_max: 60,
        n_walks: 4000,
        seed: 9,
    };
    let model_cfg = ModelConfig {
        hidden_width: 64,
        warmup_epochs: 12,
        dqn_epochs: 6,
        ..ModelConfig::default()
    };
    let ts = generate_walks(&spec, &walk_cfg).unwrap();
    let (warm, _) = train_warmup(&ts, &model_cfg).unwrap();
    let (model, _) = train_dqn(&spec, &warm, &model_cfg, &walk_cfg).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    model.save_json(&path).unwrap();
    let reloaded = DistanceEstimator::load_json(&path).unwrap();

    let start = longest_element(n).unwrap();
    let cfg = BeamConfig {
        width: 64,
        step_limit: 80,
        history_depth: 2,
        x_trick: false,
        seed: 5,
        heuristic: BeamHeuristic::Model(&reloaded),
        mem_budget_bytes: None,
    };
    let res = beam_search(&spec, &start, &cfg).unwrap();
    assert!(res.found, "model-guided beam failed on the farthest state");
    let word = res.word.unwrap();
    assert!(start.apply_word(&word).is_identity());
    assert!(word.len() >= n * (n - 1) / 2);
}

#[test]
fn thread_count_does_not_change_results() {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let eight = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap();

    let walk_cfg = WalkConfig {
        kind: WalkKind::Plain,
        k_max: 40,
        n_walks: 500,
        seed: 3,
    };
    let spec = GraphSpec::full(8).unwrap();
    let walks_one = one.install(|| generate_walks(&spec, &walk_cfg).unwrap());
    let walks_eight = eight.install(|| generate_walks(&spec, &walk_cfg).unwrap());
    assert_eq!(walks_one.pairs, walks_eight.pairs);

    let mix_one = one.install(|| mixing_curve(5, &walk_cfg).unwrap());
    let mix_eight = eight.install(|| mixing_curve(5, &walk_cfg).unwrap());
    for (a, b) in mix_one.iter().zip(&mix_eight) {
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }

    let p = {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        Permutation::random(50, &mut rng)
    };
    let w_one = one.install(|| constructive_solve(&p));
    let w_eight = eight.install(|| constructive_solve(&p));
    assert_eq!(w_one.to_string(), w_eight.to_string());
}
