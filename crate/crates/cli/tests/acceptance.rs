//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs as a plain binary (`harness = false`) so the report is printed in
//! order. Exits non-zero if any criterion fails.

use std::io::Write as _;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use kemeny_cli::run_args;
use kemeny_core::diverse::{scatteredness_increase, DiverseMode, DiverseQuery};
use kemeny_core::instances::{
    fifty_fifty_profile, five_type_profile, generate_bucket_order, random_cost_instance,
    random_partial_order, random_partial_profile, rng, BucketSpec,
};
use kemeny_core::oracle::{oracle_diverse, oracle_optimum};
use kemeny_core::pco::{solve_pco, PcoAnswer, PcoInstance};
use kemeny_core::single::{initial_triples, triple_successors};
use kemeny_core::width::{
    cocomparability_graph, consistent_path_decomposition_with, exact_pathwidth,
    has_long_induced_cycle, PathDecomposition, WidthStrategy,
};
use kemeny_core::{
    kt_distance_linear, reduce_to_co, solve_diverse, solve_single, CostInstance, LinearOrder,
    PartialOrder, VertexSet,
};

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).expect("temp file");
    path.display().to_string()
}

fn cli(args: &[&str]) -> kemeny_cli::Invocation {
    run_args(std::iter::once("kemeny").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Result<(serde_json::Value, i32), String> {
    let mut all = args.to_vec();
    all.push("--json");
    let out = cli(&all);
    let v = serde_json::from_str(&out.stdout)
        .map_err(|e| format!("{args:?}: bad JSON ({e}); stderr: {}", out.stderr))?;
    Ok((v, out.code))
}

fn witnesses(doc: &serde_json::Value) -> Vec<String> {
    doc["witnesses"]
        .as_array()
        .map(|ws| {
            ws.iter()
                .map(|w| w["ranking"].as_str().unwrap_or("").to_string())
                .collect()
        })
        .unwrap_or_default()
}

/// Counters shared between the oracle suites.
#[derive(Default)]
struct BoundLog {
    runs: usize,
    triple_violations: usize,
    max_triples: usize,
}

fn ac1(dir: &tempfile::TempDir) -> Verdict {
    let file = write_temp(
        dir,
        "five.txt",
        &kemeny_cli::serialize_votes(&five_type_profile()),
    );
    let start = Instant::now();
    let (doc, code) = json(&["solve", &file])?;
    let elapsed = start.elapsed();
    ensure(code == 0, || format!("exit code {code}"))?;
    ensure(doc["optimum"] == 10, || {
        format!("optimum {}", doc["optimum"])
    })?;
    let w = witnesses(&doc);
    ensure(w == ["A<B<C<D<E"], || format!("witness {w:?}"))?;
    let oracle = oracle_optimum(&reduce_to_co(&five_type_profile())).map_err(|e| e.to_string())?;
    ensure(oracle.cost == 10, || "oracle disagrees".into())?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "optimum 10, witness A<B<C<D<E, {:.1} ms",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn ac2(dir: &tempfile::TempDir) -> Verdict {
    let file = write_temp(
        dir,
        "ff.txt",
        &kemeny_cli::serialize_votes(&fifty_fifty_profile()),
    );
    let (solve, code) = json(&["solve", &file])?;
    ensure(code == 0 && solve["optimum"] == 50, || {
        format!("solve: {}", solve["optimum"])
    })?;
    let (two, code) = json(&["optima", &file, "--r", "2"])?;
    ensure(code == 0 && two["decision"] == "yes", || {
        "optima --r 2 not YES".into()
    })?;
    let w = witnesses(&two);
    ensure(w == ["A<B<C<D<E", "A<B<D<C<E"], || {
        format!("witnesses {w:?}")
    })?;
    let (three, code) = json(&["optima", &file, "--r", "3"])?;
    ensure(code == 1 && three["decision"] == "no", || {
        "optima --r 3 not NO".into()
    })?;
    let (max, code) = json(&["maxdiv", &file, "--r", "2", "--delta", "0"])?;
    ensure(code == 0 && max["diversity"] == 1, || {
        format!("maxdiv {}", max["diversity"])
    })?;
    let (div, code) = json(&[
        "diverse", &file, "--r", "2", "--delta", "0", "--d", "1", "--s", "1",
    ])?;
    ensure(code == 0 && witnesses(&div).len() == 2, || {
        "diverse --r 2 not YES".into()
    })?;
    Ok("optimum 50; r=2 YES with both optima; r=3 NO; max diversity 1".into())
}

fn ac3(log: &mut BoundLog) -> Verdict {
    let start = Instant::now();
    let mut checked = 0;
    for seed in 0..300u64 {
        let n = 1 + (seed as usize % 7);
        let m = 1 + (seed as usize / 7) % 5;
        let profile = random_partial_profile(n, m, seed).map_err(|e| e.to_string())?;
        let inst = reduce_to_co(&profile);
        check_single(&inst, log).map_err(|e| format!("profile seed {seed}: {e}"))?;
        checked += 1;
    }
    for seed in 0..250u64 {
        let n = 1 + (seed as usize % 7);
        let inst = random_cost_instance(n, 6, false, 10_000 + seed);
        check_single(&inst, log).map_err(|e| format!("cost seed {seed}: {e}"))?;
        checked += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(300), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{checked}/{checked} instances agree, {:.2} s",
        elapsed.as_secs_f64()
    ))
}

fn check_single(inst: &CostInstance, log: &mut BoundLog) -> Result<(), String> {
    let sol = solve_single(inst).map_err(|e| e.to_string())?;
    let oracle = oracle_optimum(inst).map_err(|e| e.to_string())?;
    log.runs += 1;
    log.triple_violations += sol.stats.triple_bound_violations;
    log.max_triples = log.max_triples.max(sol.stats.max_triples);
    ensure(sol.cost == oracle.cost, || {
        format!("dp {} vs oracle {}", sol.cost, oracle.cost)
    })?;
    ensure(inst.extension_cost(&sol.ranking) == sol.cost, || {
        "ranking cost mismatch".into()
    })?;
    ensure(inst.base().is_extended_by(&sol.ranking), || {
        "ranking does not extend base".into()
    })
}

fn ac4(log: &mut BoundLog) -> Verdict {
    let (mut yes, mut no, mut total) = (0, 0, 0);
    for seed in 0..240u64 {
        let mut r = rng(50_000 + seed);
        let n = r.random_range(2..=6);
        let m = r.random_range(1..=4);
        let profile = random_partial_profile(n, m, 60_000 + seed).map_err(|e| e.to_string())?;
        let inst = reduce_to_co(&profile);
        let query = DiverseQuery::decide(
            r.random_range(2..=3),
            r.random_range(0..=2),
            r.random_range(0..=6),
            r.random_range(0..=2),
        );
        let got = solve_diverse(&inst, query).map_err(|e| format!("seed {seed}: {e}"))?;
        let want = oracle_diverse(&inst, &query).map_err(|e| format!("seed {seed}: {e}"))?;
        log.runs += 1;
        log.triple_violations += got.stats.triple_bound_violations;
        log.max_triples = log.max_triples.max(got.stats.max_triples);
        ensure(got.found == want.found, || {
            format!(
                "seed {seed} {query:?}: dp {} oracle {}",
                got.found, want.found
            )
        })?;
        total += 1;
        if got.found {
            yes += 1;
            verify_witnesses(&inst, &query, &got.witnesses, got.optimum)
                .map_err(|e| format!("seed {seed}: {e}"))?;
        } else {
            no += 1;
        }
        // Maximizing must hit the brute-force best exactly.
        let mq = DiverseQuery::maximize(query.r, query.delta);
        let got = solve_diverse(&inst, mq).map_err(|e| e.to_string())?;
        let want = oracle_diverse(&inst, &mq).map_err(|e| e.to_string())?;
        let got_best = got.found.then_some(got.diversity);
        ensure(got_best == want.best_diversity, || {
            format!(
                "seed {seed} maximize: dp {got_best:?} oracle {:?}",
                want.best_diversity
            )
        })?;
    }
    Ok(format!(
        "{total}/{total} decisions agree ({yes} yes, {no} no); witnesses verified"
    ))
}

fn verify_witnesses(
    inst: &CostInstance,
    query: &DiverseQuery,
    ws: &[LinearOrder],
    optimum: u64,
) -> Result<(), String> {
    ensure(ws.len() == query.r, || format!("{} witnesses", ws.len()))?;
    let mut total = 0;
    for (i, a) in ws.iter().enumerate() {
        ensure(inst.base().is_extended_by(a), || {
            "witness does not extend base".into()
        })?;
        let c = inst.extension_cost(a);
        ensure(c <= optimum + query.delta, || {
            format!("witness cost {c} over budget")
        })?;
        for b in &ws[i + 1..] {
            let d = kt_distance_linear(a, b).map_err(|e| e.to_string())?;
            ensure(d >= query.effective_s(), || {
                format!("pair distance {d} below s")
            })?;
            total += d;
        }
    }
    ensure(
        query.mode == DiverseMode::Maximize || total >= query.d,
        || format!("diversity {total} below d"),
    )
}

fn random_order(seed: u64, max_n: usize) -> PartialOrder {
    let mut r = rng(seed);
    let n = r.random_range(1..=max_n);
    let density = r.random_range(0.0..1.0);
    random_partial_order(n, density, &mut r)
}

fn ac5() -> Verdict {
    let mut worst: f64 = 1.0;
    for seed in 0..500u64 {
        let order = random_order(70_000 + seed, 9);
        let g = cocomparability_graph(&order);
        let pw = exact_pathwidth(&g).map_err(|e| e.to_string())?;
        for strategy in [WidthStrategy::Auto, WidthStrategy::Heuristic] {
            let cpd =
                consistent_path_decomposition_with(&order, strategy).map_err(|e| e.to_string())?;
            cpd.validate()
                .map_err(|e| format!("seed {seed} {strategy:?}: {e}"))?;
            ensure(cpd.decomposition.is_nice(), || {
                format!("seed {seed}: not nice")
            })?;
            let w = cpd.width();
            ensure(w >= pw, || {
                format!("seed {seed}: width {w} below pathwidth {pw}")
            })?;
            let ratio = (w.max(1) as f64) / (pw.max(1) as f64);
            worst = worst.max(ratio);
        }
    }
    ensure(worst <= 5.0, || format!("width ratio {worst:.2} exceeds 5"))?;
    Ok(format!(
        "500 orders x 2 strategies valid; worst width/pathwidth {worst:.2} (bound 5)"
    ))
}

fn ac6() -> Verdict {
    for seed in 0..500u64 {
        let g = cocomparability_graph(&random_order(80_000 + seed, 9));
        ensure(
            !has_long_induced_cycle(&g).map_err(|e| e.to_string())?,
            || format!("seed {seed}: induced cycle of length >= 5"),
        )?;
    }
    Ok("500 orders, no induced cycle of length >= 5".into())
}

fn ac7(log: &BoundLog) -> Verdict {
    ensure(log.runs > 0, || "suites 3-4 did not run".into())?;
    ensure(log.triple_violations == 0, || {
        format!("{} violations", log.triple_violations)
    })?;
    Ok(format!(
        "{} runs, 0 violations, largest triple count {}",
        log.runs, log.max_triples
    ))
}

fn ac8() -> Verdict {
    let (mut yes, mut rejected) = (0, 0);
    let total = 220u64;
    for seed in 0..total {
        let mut r = rng(90_000 + seed);
        let n = r.random_range(1..=7);
        let inst = random_cost_instance(n, 3, true, 91_000 + seed);
        let opt = oracle_optimum(&inst).map_err(|e| e.to_string())?.cost;
        let k = r.random_range(opt.saturating_sub(3)..=opt + 3);
        let pco = PcoInstance::new(inst).map_err(|e| e.to_string())?;
        let ans = solve_pco(&pco, k).map_err(|e| e.to_string())?;
        let oracle_yes = opt <= k;
        ensure(ans.is_yes() == oracle_yes, || {
            format!("seed {seed}: dp {ans:?}, oracle optimum {opt} k {k}")
        })?;
        if let PcoAnswer::RejectedByEdges { .. } = ans {
            rejected += 1;
            ensure(!oracle_yes, || {
                format!("seed {seed}: rejected a YES instance")
            })?;
        }
        if let PcoAnswer::Yes { cost, ranking } = &ans {
            yes += 1;
            ensure(
                *cost <= k && pco.instance().extension_cost(ranking) == *cost,
                || format!("seed {seed}: bad YES witness"),
            )?;
        }
    }
    // Width against sqrt(edges) on bucket orders: logged only.
    let mut c: f64 = 0.0;
    for seed in 0..200u64 {
        let mut r = rng(95_000 + seed);
        let k = r.random_range(2..=6);
        let sizes: Vec<usize> = (0..r.random_range(2..=6))
            .map(|_| r.random_range(1..=k))
            .collect();
        let order =
            generate_bucket_order(&BucketSpec { sizes, seed }).map_err(|e| e.to_string())?;
        let edges = cocomparability_graph(&order).edge_count();
        let w = consistent_path_decomposition_with(&order, WidthStrategy::Heuristic)
            .map_err(|e| e.to_string())?
            .width();
        if edges > 0 {
            c = c.max(w as f64 / (edges as f64).sqrt());
        }
    }
    Ok(format!(
        "{total}/{total} decisions agree ({yes} yes, {rejected} rejected by edge count, none wrongly); \
         bucket corpus width <= {c:.3} * sqrt(edges)"
    ))
}

fn ac9() -> Verdict {
    let mut steps = 0;
    let mut seed = 0u64;
    while steps < 1000 {
        seed += 1;
        let mut r = rng(100_000 + seed);
        let n = r.random_range(3..=8);
        let inst = random_cost_instance(n, 3, false, 101_000 + seed);
        let mut verts: Vec<usize> = (0..n).collect();
        verts.shuffle(&mut r);
        let k = r.random_range(2..=n.min(4));
        let fresh: VertexSet = verts[..k].iter().copied().collect();
        let prev: VertexSet = verts[k..]
            .iter()
            .copied()
            .filter(|_| r.random_bool(0.8))
            .collect();
        let schedule = PathDecomposition::new(vec![prev, prev.union(fresh)]);
        let starts = initial_triples(&inst, prev);
        let start = &starts[r.random_range(0..starts.len())];
        let succ = triple_successors(start, &schedule, 0, &inst);
        let a = &succ[r.random_range(0..succ.len())].order;
        let b = &succ[r.random_range(0..succ.len())].order;
        let insertion: Vec<usize> = fresh.iter().collect();
        let base = scatteredness_increase(prev, &insertion, a, b);
        for p in permutations(&insertion) {
            let x = scatteredness_increase(prev, &p, a, b);
            ensure(x == base, || {
                format!("seed {seed}: order {p:?} gives {x}, ascending gives {base}")
            })?;
        }
        steps += 1;
    }
    Ok(format!(
        "{steps} steps with 2-4 introduced vertices, all insertion orders agree"
    ))
}

fn permutations(v: &[usize]) -> Vec<Vec<usize>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn ac10(dir: &tempfile::TempDir) -> Verdict {
    let five = write_temp(
        dir,
        "five10.txt",
        &kemeny_cli::serialize_votes(&five_type_profile()),
    );
    let ff = write_temp(
        dir,
        "ff10.txt",
        &kemeny_cli::serialize_votes(&fifty_fifty_profile()),
    );
    let random = cli(&["gen", "random", "--n", "6", "--votes", "4", "--seed", "11"]).stdout;
    let rand_file = write_temp(dir, "rand10.txt", &random);
    let cases: Vec<Vec<&str>> = vec![
        vec!["solve", &five],
        vec!["solve", &rand_file, "--strategy", "heuristic"],
        vec![
            "diverse", &ff, "--r", "2", "--delta", "1", "--d", "1", "--s", "1",
        ],
        vec![
            "diverse",
            &rand_file,
            "--r",
            "3",
            "--delta",
            "2",
            "--no-scatter",
        ],
        vec!["optima", &ff, "--r", "2"],
        vec!["maxdiv", &rand_file, "--r", "2", "--delta", "1"],
        vec!["pco", &ff, "--k", "60"],
        vec!["oracle", &five],
        vec![
            "oracle",
            &rand_file,
            "--r",
            "2",
            "--delta",
            "1",
            "--maximize",
        ],
        vec![
            "gen", "buckets", "--sizes", "2,3,1", "--votes", "5", "--noise", "2", "--seed", "4",
        ],
        vec!["validate-decomposition", &five],
        vec![
            "bench", "--count", "6", "--corpus", "buckets", "--n", "9", "--seed", "3",
        ],
    ];
    for case in &cases {
        for extra in [None, Some("--json")] {
            let mut args = case.clone();
            args.extend(extra);
            let a = cli(&args);
            let b = cli(&args);
            ensure(a == b, || format!("{args:?} differs between runs"))?;
            ensure(a.code <= 1, || format!("{args:?} failed: {}", a.stderr))?;
        }
    }
    Ok(format!(
        "{} subcommand invocations byte-identical across two runs",
        cases.len() * 2
    ))
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut log = BoundLog::default();
    let results: Vec<(u32, &str, Verdict)> = vec![
        (1, "five-type election", ac1(&dir)),
        (2, "fifty-fifty election", ac2(&dir)),
        (3, "single solution vs brute force", ac3(&mut log)),
        (4, "diverse decision vs brute force", ac4(&mut log)),
        (5, "decomposition validity", ac5()),
        (6, "no long induced cycles", ac6()),
        (7, "triple count bound", ac7(&log)),
        (8, "positive completion pipeline", ac8()),
        (9, "insertion-order invariance", ac9()),
        (10, "determinism", ac10(&dir)),
    ];
    let mut failed = 0;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for (n, name, verdict) in &results {
        match verdict {
            Ok(note) => writeln!(out, "AC-{n} PASS  {name}: {note}"),
            Err(why) => {
                failed += 1;
                writeln!(out, "AC-{n} FAIL  {name}: {why}")
            }
        }
        .expect("stdout");
    }
    writeln!(
        out,
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    )
    .expect("stdout");
    drop(out);
    if failed > 0 {
        std::process::exit(1);
    }
}
