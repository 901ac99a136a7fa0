use kemeny_core::diverse::{pair_count, DiverseQuery};
use kemeny_core::instances::{random_cost_instance, random_partial_profile};
use kemeny_core::oracle::{oracle_diverse, oracle_optimum};
use kemeny_core::orders::{kemeny_score, reduce_to_co};
use kemeny_core::single::{dp_schedule, project_solution, solve_single, SolveOptions, TailTable};
use kemeny_core::width::{consistent_path_decomposition, WidthStrategy};
use kemeny_core::{kt_distance_linear, solve_diverse, solve_single_with, DiverseMode};

#[test]
fn single_matches_brute_force_on_profiles() {
    for seed in 0..150 {
        let n = 2 + (seed as usize % 6);
        let m = 1 + (seed as usize / 6) % 5;
        let profile = random_partial_profile(n, m, seed).unwrap();
        let inst = reduce_to_co(&profile);
        let sol = solve_single(&inst).unwrap();
        let oracle = oracle_optimum(&inst).unwrap();
        assert_eq!(sol.cost, oracle.cost, "seed {seed}");
        assert_eq!(kemeny_score(&profile, &sol.ranking).unwrap(), sol.cost);
        assert!(oracle.optima.contains(&sol.ranking));
    }
}

#[test]
fn single_matches_brute_force_on_raw_costs() {
    for seed in 0..150 {
        let n = 1 + (seed as usize % 7);
        let inst = random_cost_instance(n, 5, false, 1000 + seed);
        let oracle = oracle_optimum(&inst).unwrap();
        for strategy in [WidthStrategy::Exact, WidthStrategy::Heuristic] {
            let opts = SolveOptions {
                strategy,
                deadline: None,
            };
            let sol = solve_single_with(&inst, &opts).unwrap();
            assert_eq!(sol.cost, oracle.cost, "seed {seed} {strategy:?}");
            assert_eq!(sol.stats.triple_bound_violations, 0);
        }
    }
}

#[test]
fn projected_optima_are_generated() {
    for seed in 0..60 {
        let inst = random_cost_instance(2 + seed as usize % 5, 4, false, 5000 + seed);
        let cpd = consistent_path_decomposition(inst.base()).unwrap();
        let schedule = dp_schedule(&cpd.decomposition);
        let probe = TailTable::new(&inst, schedule.clone(), &SolveOptions::default()).unwrap();
        for opt in oracle_optimum(&inst).unwrap().optima {
            for (p, t) in project_solution(&schedule, &inst, &opt).iter().enumerate() {
                assert_eq!(
                    probe.best(p, &t.order),
                    Some(t.cost),
                    "seed {seed} position {p}"
                );
            }
        }
    }
}

#[test]
fn diverse_matches_brute_force() {
    let (mut yes, mut no) = (0, 0);
    for seed in 0..120u64 {
        let n = 2 + (seed as usize % 5);
        let m = 1 + (seed as usize / 5) % 4;
        let profile = random_partial_profile(n, m, 9000 + seed).unwrap();
        let inst = reduce_to_co(&profile);
        let r = 2 + (seed as usize % 2);
        let delta = seed % 3;
        let d = (seed / 3) % 7;
        let s = (seed / 7) % 3;
        for query in [
            DiverseQuery::decide(r, delta, d, s),
            DiverseQuery::maximize(r, delta),
        ] {
            let got = solve_diverse(&inst, query).unwrap();
            let want = oracle_diverse(&inst, &query).unwrap();
            assert_eq!(got.found, want.found, "seed {seed} {query:?}");
            if query.mode == DiverseMode::Decide {
                if got.found {
                    yes += 1
                } else {
                    no += 1
                }
            }
            if query.mode == DiverseMode::Maximize && got.found {
                assert_eq!(Some(got.diversity), want.best_diversity, "seed {seed}");
            }
            if got.found {
                assert_eq!(got.witnesses.len(), r);
                for (w, &c) in got.witnesses.iter().zip(&got.costs) {
                    assert!(inst.base().is_extended_by(w));
                    assert_eq!(inst.extension_cost(w), c);
                    assert!(c <= got.optimum + delta);
                }
                let mut min = u64::MAX;
                for i in 0..r {
                    for j in i + 1..r {
                        min = min
                            .min(kt_distance_linear(&got.witnesses[i], &got.witnesses[j]).unwrap());
                    }
                }
                assert!(min >= query.effective_s());
                assert!(query.mode == DiverseMode::Maximize || got.diversity >= d);
                assert_eq!(pair_count(r), r * (r - 1) / 2);
            }
            assert_eq!(got.stats.triple_bound_violations, 0);
            assert_eq!(got.stats.tuple_bound_violations, 0);
        }
    }
    eprintln!("decide answers: {yes} yes, {no} no");
    assert!(yes > 20 && no > 20);
}
