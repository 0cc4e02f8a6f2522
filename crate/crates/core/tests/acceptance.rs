//! Acceptance criteria. Runs as a plain binary so every criterion prints one
//! PASS/FAIL line; exits non-zero if any fails.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gaptour::io::parse_tsplib;
use gaptour::ktp::{self, Board, EulerScheme};
use gaptour::polygon::{self, PolygonSpec};
use gaptour::sat::{self, Knowledge, Link, ListId, SatInstance, SatOutcome};
use gaptour::tsp::{self, find_crossing, is_proper, uncross, GreedyConfig, RasterVerdict, StopReason};
use gaptour::{brute_force_optimum, build_instance, Metric, Point, Tour};

type Verdict = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn random_points(rng: &mut ChaCha8Rng, n: usize, span: f64) -> Vec<Point> {
    (0..n).map(|_| Point::new(rng.gen_range(0.0..span), rng.gen_range(0.0..span))).collect()
}

fn convex_sufficiency() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for case in 0..50 {
        let n = 5 + case % 6;
        // distinct angles on an ellipse, shuffled so input order is not the hull order
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        angles.shuffle(&mut rng);
        let (a, b) = (rng.gen_range(1.0..10.0), rng.gen_range(1.0..10.0));
        let pts: Vec<Point> = angles.iter().map(|t| Point::new(a * t.cos(), b * t.sin())).collect();
        let inst = build_instance(&pts, Metric::Euclidean).map_err(|e| e.to_string())?;
        let run = tsp::solve_tsp(&inst, &GreedyConfig::with_seed(case as u64), tsp::default_max_rounds(n))
            .map_err(|e| e.to_string())?;
        let opt = brute_force_optimum(&inst, false).map_err(|e| e.to_string())?;
        let diff = (run.tour.cost() - opt.cost()).abs();
        worst = worst.max(diff);
        check(run.stop == StopReason::JordanCurve, format!("case {case}: stopped with {:?}", run.stop))?;
        check(diff <= 1e-9, format!("case {case} (n={n}): solve {} vs optimum {}", run.tour.cost(), opt.cost()))?;
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(10), format!("took {t:?}"))?;
    Ok(format!("50 instances, max |cost - optimum| = {worst:.1e}, {:.2} s", t.as_secs_f64()))
}

fn crossing_necessity() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for case in 0..200 {
        let n = 5 + case % 5;
        let pts = random_points(&mut rng, n, 1000.0);
        let inst = build_instance(&pts, Metric::Euclidean).map_err(|e| e.to_string())?;
        let opt = brute_force_optimum(&inst, false).map_err(|e| e.to_string())?;
        let c = find_crossing(&opt, &inst).map_err(|e| e.to_string())?;
        check(c.is_none(), format!("case {case}: optimum has crossing {c:?}"))?;
    }
    let t = start.elapsed();
    check(t < Duration::from_secs(60), format!("took {t:?}"))?;
    Ok(format!("200 optima crossing-free, {:.2} s", t.as_secs_f64()))
}

fn strict_descent() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let (mut crossed, mut proper, mut min_gain) = (0, 0, f64::INFINITY);
    while crossed < 500 {
        let n = rng.gen_range(5..=30);
        let pts = random_points(&mut rng, n, 100.0);
        let inst = build_instance(&pts, Metric::Euclidean).map_err(|e| e.to_string())?;
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let tour = Tour::new(order, &inst).map_err(|e| e.to_string())?;
        let Some(c) = find_crossing(&tour, &inst).map_err(|e| e.to_string())? else { continue };
        crossed += 1;
        if !is_proper(&tour, c, &inst).map_err(|e| e.to_string())? {
            continue;
        }
        proper += 1;
        let after = uncross(&tour, c, &inst).map_err(|e| e.to_string())?;
        min_gain = min_gain.min(tour.cost() - after.cost());
        check(after.cost() < tour.cost() - 1e-12, format!("no descent: {} -> {}", tour.cost(), after.cost()))?;
    }
    Ok(format!("500 crossed tours ({proper} proper), smallest gain {min_gain:.3e}"))
}

fn pcb442() -> Verdict {
    let start = Instant::now();
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/pcb442.tsp"))
        .map_err(|e| e.to_string())?;
    let inst = parse_tsplib(&text, false).map_err(|e| e.to_string())?;
    check(inst.n() == 442, format!("parsed {} vertices", inst.n()))?;
    let config = GreedyConfig { restarts: 200, ..GreedyConfig::with_seed(0) };
    let run = tsp::solve_tsp(&inst, &config, tsp::default_max_rounds(442)).map_err(|e| e.to_string())?;
    let simple = find_crossing(&run.tour, &inst).map_err(|e| e.to_string())?.is_none();
    let t = start.elapsed();
    check(simple, "final tour has a crossing")?;
    check(run.tour.cost() <= 60_200.0, format!("cost {:.4} > 60200", run.tour.cost()))?;
    check(t <= Duration::from_secs(300), format!("took {t:?}"))?;
    Ok(format!(
        "seed 0, 200 restarts: cost {:.4} after {} rounds ({:?}), {:.2} s",
        run.tour.cost(),
        run.rounds.len(),
        run.stop,
        t.as_secs_f64()
    ))
}

fn ktp_stop_condition() -> Verdict {
    let board6 = Board::new(6, 6).map_err(|e| e.to_string())?;
    let r6 = ktp::solve_ktp(&board6, &EulerScheme::uniform(), &GreedyConfig::with_seed(0), 1_000_000)
        .map_err(|e| e.to_string())?;
    check(r6.proven && (r6.tour.cost() - 36.0 * 0.04).abs() < 1e-9, format!("6x6 cost {}", r6.tour.cost()))?;
    check(r6.report.non_knight_edges.is_empty(), "6x6 tour has non-knight edges")?;

    let board8 = Board::new(8, 8).map_err(|e| e.to_string())?;
    let r8 = ktp::solve_ktp(&board8, &EulerScheme::quadrant(), &GreedyConfig::with_seed(0), 10_000_000)
        .map_err(|e| e.to_string())?;
    check(r8.proven && r8.tour.cost() < 4.0, format!("8x8 best cost {}", r8.tour.cost()))?;
    check(r8.report.is_knight_cycle(), "8x8 tour has non-knight edges")?;

    let mut odd = Vec::new();
    for (side, seed) in [(5, 0), (7, 1)] {
        let board = Board::new(side, side).map_err(|e| e.to_string())?;
        let r = ktp::solve_ktp(&board, &EulerScheme::uniform(), &GreedyConfig::with_seed(seed), 40_000)
            .map_err(|e| e.to_string())?;
        let flagged = r.report.non_knight_edges.len();
        check(!r.parity_feasible && !r.proven, format!("{side}x{side} not rejected by parity"))?;
        check(flagged == 1, format!("{side}x{side} best tour has {flagged} non-knight edges"))?;
        odd.push(format!("{side}x{side} seed {seed}: 1 flagged edge"));
    }
    Ok(format!(
        "6x6 cost 1.44 after {} restarts; 8x8 quadrant cost {:.2} after {} restarts; {}",
        r6.restarts_used,
        r8.tour.cost(),
        r8.restarts_used,
        odd.join("; ")
    ))
}

fn star_exactness() -> Verdict {
    let labels = polygon::one_based_labels(&polygon::star_order(13).map_err(|e| e.to_string())?);
    check(labels == [1, 7, 13, 6, 12, 5, 11, 4, 10, 3, 9, 2, 8, 1], format!("star 13 = {labels:?}"))?;
    for n in [5, 7, 9] {
        let spec = PolygonSpec::new(n, 1.0).map_err(|e| e.to_string())?;
        let star = polygon::star_tour(&spec, Metric::Euclidean).map_err(|e| e.to_string())?;
        let max = polygon::max_tour_bruteforce(&polygon::regular_polygon(&spec), Metric::Euclidean)
            .map_err(|e| e.to_string())?;
        check((star.cost() - max.cost()).abs() <= 1e-9, format!("n={n}: star {} vs max {}", star.cost(), max.cost()))?;
    }
    Ok("sequence 1 7 13 6 12 5 11 4 10 3 9 2 8 1; star = maximum for n = 5, 7, 9".into())
}

fn polygon_minimum() -> Verdict {
    for n in 4..=10 {
        let spec = PolygonSpec::new(n, 1.0).map_err(|e| e.to_string())?;
        let pts = polygon::regular_polygon(&spec);
        for metric in Metric::ALL {
            let inst = build_instance(&pts, metric).map_err(|e| e.to_string())?;
            let best = brute_force_optimum(&inst, false).map_err(|e| e.to_string())?;
            let min = polygon::min_polygon_tour(&spec, metric);
            check((best.cost() - min.cost()).abs() <= 1e-9, format!("n={n} {metric}: cost mismatch"))?;
            check(best.order() == min.order(), format!("n={n} {metric}: oracle order {:?}", best.order()))?;
        }
    }
    Ok("n = 4..10 under euclidean, max, abs: equal cost and order".into())
}

fn sat_six_variable_example() -> Verdict {
    let inst = SatInstance::parse(6, &["000000", "000001", "111110", "011011"]).map_err(|e| e.to_string())?;
    let run = sat::solve_deterministic(&inst).map_err(|e| e.to_string())?;
    check(run.outcome == SatOutcome::Solution(0), format!("outcome {:?}", run.outcome))?;
    check(run.evaluations == 1, format!("{} evaluations", run.evaluations))?;
    let k = sat::build_knowledge(&inst).map_err(|e| e.to_string())?;
    check(k.is_solution(0) && k.contains(ListId::Blocked, 0), "000000 not in Y")?;
    Ok("solution 000000 on the first probe; 000000 in Y".into())
}

fn sat_oracle_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let (mut sat_count, mut unsat_count) = (0, 0);
    for case in 0..500 {
        let n = rng.gen_range(1..=10);
        let size = 1u64 << n;
        let values: Vec<u64> = if case % 5 == 0 {
            // full coverage plus duplicates
            let mut v: Vec<u64> = (0..size).collect();
            v.extend((0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..size)));
            v.shuffle(&mut rng);
            v
        } else {
            let m = rng.gen_range(1..=size);
            (0..m).map(|_| rng.gen_range(0..size)).collect()
        };
        let inst = SatInstance::from_values(n, &values).map_err(|e| e.to_string())?;
        let truth = sat::exhaustive_solve(&inst).map_err(|e| e.to_string())?.is_some();
        let det = sat::solve_deterministic(&inst).map_err(|e| e.to_string())?;
        let prob = sat::solve_probabilistic(&inst, case as u64).map_err(|e| e.to_string())?;
        check(det.outcome.is_satisfiable() == truth, format!("case {case}: det {:?}, truth {truth}", det.outcome))?;
        check(prob.outcome.is_satisfiable() == truth, format!("case {case}: prob {:?}, truth {truth}", prob.outcome))?;
        for w in [det.outcome.witness(), prob.outcome.witness()].into_iter().flatten() {
            check(inst.evaluate(w).map_err(|e| e.to_string())?, format!("case {case}: witness {w} fails"))?;
        }
        if case % 5 == 0 {
            check(!truth && sat::is_unsatisfiable_by_coverage(&inst).map_err(|e| e.to_string())?, "coverage")?;
        }
        if truth {
            sat_count += 1;
        } else {
            unsat_count += 1;
        }
    }
    Ok(format!("500 instances ({sat_count} satisfiable, {unsat_count} unsatisfiable) agree with enumeration"))
}

fn l(prev: u32, next: u32) -> Link {
    Link::new(prev, next)
}

fn knowledge_tables() -> Verdict {
    let e = Link::EMPTY;
    let (s, m) = (ListId::Free, ListId::Blocked);
    let mut k = Knowledge::new(3).map_err(|e| e.to_string())?;
    // index 0 is the header, then slots 1..=8
    let steps: [(&str, [Link; 9], [Link; 9]); 4] = [
        (
            "initial",
            [l(8, 1), l(8, 2), l(1, 3), l(2, 4), l(3, 5), l(4, 6), l(5, 7), l(6, 8), l(7, 1)],
            [e; 9],
        ),
        (
            "011",
            [l(8, 1), l(8, 2), l(1, 3), l(2, 5), e, l(3, 6), l(5, 7), l(6, 8), l(7, 1)],
            [l(4, 4), e, e, e, l(4, 4), e, e, e, e],
        ),
        (
            "001",
            [l(8, 1), l(8, 3), e, l(1, 5), e, l(3, 6), l(5, 7), l(6, 8), l(7, 1)],
            [l(4, 2), e, l(4, 4), e, l(2, 2), e, e, e, e],
        ),
        (
            "000",
            [l(8, 3), e, e, l(8, 5), e, l(3, 6), l(5, 7), l(6, 8), l(7, 3)],
            [l(4, 1), l(4, 2), l(1, 4), e, l(2, 1), e, e, e, e],
        ),
    ];
    for (bits, want_s, want_m) in steps {
        if bits != "initial" {
            let v = sat::parse_bits(bits).map_err(|e| e.to_string())?;
            k.ks_move(v, s, m).map_err(|e| e.to_string())?;
        }
        check(k.table(s) == want_s, format!("after {bits}: S table {:?}", k.table(s)))?;
        check(k.table(m) == want_m, format!("after {bits}: M table {:?}", k.table(m)))?;
    }
    Ok("headers and links match after each of 011, 001, 000".into())
}

fn link_integrity_fuzz() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let n = 10;
    let size = 1u64 << n;
    let mut k = Knowledge::new(n).map_err(|e| e.to_string())?;
    let mut blocked: HashSet<u64> = HashSet::new();
    for step in 0..100_000 {
        let v = rng.gen_range(0..size);
        let from = if blocked.contains(&v) { ListId::Blocked } else { ListId::Free };
        let to = if rng.gen_bool(0.5) { ListId::Free } else { ListId::Blocked };
        if rng.gen_ratio(1, 20) {
            let wrong = if from == ListId::Free { ListId::Blocked } else { ListId::Free };
            check(k.ks_move(v, wrong, to).is_err(), format!("step {step}: move from the wrong list accepted"))?;
        }
        k.ks_move(v, from, to).map_err(|e| format!("step {step}: {e}"))?;
        if to == ListId::Blocked {
            blocked.insert(v);
        } else {
            blocked.remove(&v);
        }
        check(k.len(ListId::Free) + k.len(ListId::Blocked) == size, format!("step {step}: sizes"))?;
        check(k.len(ListId::Blocked) == blocked.len() as u64, format!("step {step}: blocked size"))?;
        if step % 500 == 0 {
            k.check_integrity().map_err(|e| format!("step {step}: {e}"))?;
            let fwd: HashSet<u64> = k.forward(ListId::Blocked).into_iter().collect();
            check(fwd == blocked, format!("step {step}: blocked membership"))?;
        }
    }
    k.check_integrity().map_err(|e| e.to_string())?;
    Ok(format!("100000 moves at n=10, final |S| = {}, |M| = {}", k.len(ListId::Free), k.len(ListId::Blocked)))
}

fn raster_agreement() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1212);
    let (mut simple, mut crossed, mut k_max) = (0, 0, 0);
    for case in 0..100 {
        let pts = random_points(&mut rng, 8, 100.0);
        let inst = build_instance(&pts, Metric::Euclidean).map_err(|e| e.to_string())?;
        let tour = if case % 2 == 0 {
            brute_force_optimum(&inst, false).map_err(|e| e.to_string())?
        } else {
            let mut order: Vec<usize> = (0..8).collect();
            order.shuffle(&mut rng);
            Tour::new(order, &inst).map_err(|e| e.to_string())?
        };
        let k = tsp::adequate_resolution(&tour, &inst).map_err(|e| format!("case {case}: {e}"))?;
        k_max = k_max.max(k);
        let raster = tsp::two_color_raster(&tour, &inst, k).map_err(|e| format!("case {case}: {e}"))?;
        let geometric = find_crossing(&tour, &inst).map_err(|e| e.to_string())?.is_none();
        let drawn = raster.verdict == RasterVerdict::Simple;
        check(drawn == geometric, format!("case {case}: raster {:?}, geometry simple = {geometric}", raster.verdict))?;
        if geometric {
            simple += 1;
        } else {
            crossed += 1;
        }
    }
    Ok(format!("100 tours agree ({simple} simple, {crossed} crossed), largest k = {k_max}"))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 12] = [
        ("convex sufficiency", convex_sufficiency),
        ("crossing necessity", crossing_necessity),
        ("strict descent", strict_descent),
        ("pcb442 reproduction", pcb442),
        ("knight's tour stop condition", ktp_stop_condition),
        ("star exactness", star_exactness),
        ("polygon minimum", polygon_minimum),
        ("SAT six-variable example", sat_six_variable_example),
        ("SAT oracle equivalence", sat_oracle_equivalence),
        ("knowledge tables", knowledge_tables),
        ("link integrity fuzz", link_integrity_fuzz),
        ("raster/geometric agreement", raster_agreement),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2} s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.2} s]", i + 1)
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
