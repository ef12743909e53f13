use std::collections::HashMap;
use std::f64::consts::PI;

use hyperwalk::hyperbolic::{hyperbolic_distance, Arc, HLine, HPoint, Side};
use hyperwalk::triangle::TriangleConfig;
use hyperwalk::walk::*;

fn pgl2() -> TriangleConfig {
    TriangleConfig::builtin("pgl2").unwrap()
}

fn all_builtins() -> Vec<TriangleConfig> {
    TriangleConfig::builtin_names()
        .iter()
        .map(|n| TriangleConfig::builtin(n).unwrap())
        .collect()
}

/// Steps a walk until its bracket reaches the precision floor, calling
/// `visit` with the index drawn, the state before and the state after.
fn trace(config: &TriangleConfig, seed: u64, mut visit: impl FnMut(usize, &WalkState, &WalkState)) {
    let mut walker = Walker::new(config, seed, 0);
    while walker.state().bracket.len >= WIDTH_FLOOR && walker.state().step < 10_000 {
        let before = walker.state().clone();
        let i = walker.step().unwrap();
        visit(i, &before, walker.state());
    }
}

fn arc_inside(inner: &Arc, outer: &Arc) -> bool {
    let slack = 1e-12;
    outer.is_full()
        || (outer.contains(inner.start) || outer.contains(inner.start + slack))
            && (outer.contains(inner.end()) || outer.contains(inner.end() - slack))
            && inner.len <= outer.len + slack
}

#[test]
fn never_recrosses_a_line() {
    for config in all_builtins() {
        for seed in 0..100 {
            let mut crossed: Vec<(HLine, Side)> = Vec::new();
            let mut records: HashMap<LineRecord, Side> = HashMap::new();
            trace(&config, seed, |i, before, after| {
                if after.last_lazy {
                    return;
                }
                let image = before.element.isometry().apply_line(config.line(i)).unwrap();
                crossed.push((image, image.side_of(after.z)));
                let c = after.crossed.last().unwrap();
                if let Some(&side) = records.get(&c.line) {
                    assert_eq!(side, c.side, "seed {seed}: record {:?} crossed back", c.line);
                }
                records.insert(c.line, c.side);
                for (line, side) in &crossed {
                    assert_eq!(line.side_of(after.z), *side, "seed {seed}, step {}", after.step);
                }
            });
        }
    }
}

#[test]
fn at_most_two_descents_at_every_state() {
    for config in all_builtins() {
        for seed in 0..50 {
            trace(&config, seed, |_, _, after| {
                let descents = (1..=3)
                    .filter(|&i| config.right_descent(&after.element, i).unwrap())
                    .count();
                assert!(descents <= 2, "seed {seed}");
                if after.element.length() > 0 {
                    assert!(descents >= 1);
                }
            });
        }
    }
}

#[test]
fn lazy_fraction_is_at_most_two_thirds() {
    let config = pgl2();
    let (mut lazy, mut total) = (0usize, 0usize);
    for seed in 0..500 {
        trace(&config, seed, |_, _, after| {
            total += 1;
            lazy += after.last_lazy as usize;
        });
    }
    let p = lazy as f64 / total as f64;
    let se = (p * (1.0 - p) / total as f64).sqrt();
    assert!(p <= 2.0 / 3.0 + 3.0 * se, "lazy fraction {p}");
}

#[test]
fn position_is_the_composed_one_way_reflections() {
    for config in all_builtins() {
        let z0 = config.basepoint();
        for seed in 0..100 {
            let mut drawn: Vec<usize> = Vec::new();
            trace(&config, seed, |i, _, after| {
                drawn.push(i);
                let oracle = drawn.iter().rev().fold(z0, |z, &k| config.one_way_reflect(k, z));
                let gap = (oracle.re - after.z.re).hypot(oracle.im - after.z.im);
                assert!(gap <= 1e-9, "seed {seed}, step {}: {gap:e}", after.step);
                assert!(hyperbolic_distance(after.element.apply(z0), after.z) < 1e-9);
            });
        }
    }
}

#[test]
fn brackets_only_shrink() {
    for config in all_builtins() {
        for seed in 0..100 {
            trace(&config, seed, |_, before, after| {
                assert!(arc_inside(&after.bracket, &before.bracket), "seed {seed}, step {}", after.step);
            });
        }
    }
}

#[test]
fn short_budget_bracket_contains_long_estimate() {
    for config in all_builtins() {
        for seed in 0..100 {
            let short = run_walk(&config, seed, &WalkOptions::new(20, 0.0));
            let long = run_walk(&config, seed, &WalkOptions::new(200, 0.0));
            let zeta = long.zeta_estimate.unwrap();
            assert!(short.bracket.contains(zeta.angle()), "seed {seed}");
            assert!(long.bracket_width <= short.bracket_width);
        }
    }
}

#[test]
fn estimate_is_inside_the_final_bracket() {
    let config = pgl2();
    for seed in 0..200 {
        let r = run_walk(&config, seed, &WalkOptions::new(10_000, 1e-6));
        assert_eq!(r.status, WalkStatus::Converged);
        assert!(r.bracket_width < 1e-6);
        let zeta = r.zeta_estimate.unwrap();
        assert!(zeta.is_finite() && !r.unbounded_side);
        assert!(r.bracket.contains(zeta.angle()));
    }
}

#[test]
fn zero_budget_gives_the_full_circle() {
    let r = run_walk(&pgl2(), 1, &WalkOptions::new(0, 1e-6));
    assert_eq!(r.steps_taken, 0);
    assert!(r.bracket.is_full());
    assert_eq!(r.zeta_estimate, None);
    assert_eq!(r.status, WalkStatus::BudgetExhausted);
    assert_eq!(r.zeta_f64(), f64::INFINITY);
}

#[test]
fn tiny_budget_is_flagged() {
    let r = run_walk(&pgl2(), 1, &WalkOptions::new(5, 1e-6));
    assert_eq!(r.status, WalkStatus::BudgetExhausted);
    assert_eq!(r.steps_taken, 5);
}

#[test]
fn reports_are_deterministic() {
    let config = pgl2();
    let opts = WalkOptions {
        trajectory_stride: Some(3),
        ..WalkOptions::new(10_000, 1e-6)
    };
    for seed in [0, 1, u64::MAX] {
        let a = serde_json::to_string(&run_walk(&config, seed, &opts)).unwrap();
        let b = serde_json::to_string(&run_walk(&config, seed, &opts)).unwrap();
        assert_eq!(a, b);
    }
    assert_ne!(
        run_walk(&config, 1, &opts).zeta_estimate,
        run_walk(&config, 2, &opts).zeta_estimate
    );
}

#[test]
fn batches_do_not_depend_on_thread_count() {
    let config = pgl2();
    let opts = WalkOptions::new(10_000, 1e-6);
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| batch_sample(&config, 42, 300, &opts))
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(7));
}

#[test]
fn disjoint_ranges_concatenate() {
    let config = pgl2();
    let opts = WalkOptions::new(10_000, 1e-6);
    let mut merged = batch_walks(&config, 9, 0..40, &opts);
    merged.extend(batch_walks(&config, 9, 40..100, &opts));
    assert_eq!(merged, batch_walks(&config, 9, 0..100, &opts));
    assert_eq!(batch_sample(&config, 9, 100, &opts).walks, merged);
}

#[test]
fn single_walk_cdf_is_a_step() {
    let b = batch_sample(&pgl2(), 3, 1, &WalkOptions::new(10_000, 1e-6));
    let z = b.walks[0].zeta;
    assert_eq!(b.cdf.len(), 1);
    assert_eq!(b.cdf.eval(z - 1e-9), 0.0);
    assert_eq!(b.cdf.eval(z), 1.0);
}

#[test]
fn coupling_decays() {
    let table = coupling_experiment(&pgl2(), 5, 30, 20_000).unwrap();
    let first = table.rows[0];
    assert!((first.mean - 4.0 / PI).abs() < 4.0 * first.std_error, "{}", first.mean);
    for pair in table.rows.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        assert!(b.mean <= a.mean + 3.0 * (a.std_error + b.std_error), "m = {}", b.m);
    }
    for row in &table.rows {
        assert!(row.mean <= row.bound + 3.0 * row.std_error, "m = {}", row.m);
    }
}

#[test]
fn trajectory_csv_layout() {
    let opts = WalkOptions {
        trajectory_stride: Some(10),
        ..WalkOptions::new(10_000, 1e-6)
    };
    let r = run_walk(&pgl2(), 11, &opts);
    let csv = trajectory_csv(&r.trajectory);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("step,re,im,lazy,bracket_lo,bracket_hi"));
    assert_eq!(lines.count(), r.trajectory.len());
    assert_eq!(r.trajectory[0].step, 0);
    assert_eq!(r.trajectory.last().unwrap().step, r.steps_taken);
    assert_eq!(r.trajectory.len(), r.steps_taken / 10 + 1 + (r.steps_taken % 10 != 0) as usize);
    let z0 = pgl2().basepoint();
    assert_eq!(HPoint::new(r.trajectory[0].re, r.trajectory[0].im).unwrap(), z0);
}
