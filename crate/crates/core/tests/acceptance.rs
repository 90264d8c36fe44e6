//! Acceptance sweep: one PASS/FAIL line per criterion, each run against its
//! tolerance and wall-clock limit. Exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use caliblab::calib::{named_patterns, verify_sign_bounds, Relation, ALTERNATING_BLOCK_BITS};
use caliblab::report::{
    comass_oracle_suite, cones_suite, ffproject_suite, homology_suite, jacobian_suite,
    linking_suite, minimize_suite, pointwise_suite, product_suite, scene_measure_suite,
    unit_comass_suite, Report, SuiteConfig,
};
use caliblab::{build_scene, Tolerances};

type Criterion = (&'static str, u64, Box<dyn Fn() -> Outcome>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn from_report(r: Report) -> Outcome {
    let s = r.summary();
    let detail = match r.failures().next() {
        Some(f) => format!(
            "{} rows, {} failed; first: {} (expected {}, observed {})",
            s.rows, s.failures, f.case, f.expected, f.observed
        ),
        None => format!("{} rows", s.rows),
    };
    Outcome {
        pass: s.pass,
        detail,
    }
}

fn sign_blocks(tol: &Tolerances) -> Outcome {
    let sc = build_scene(0.0, 0.0);
    let (blocks, _) = verify_sign_bounds(&sc, tol);
    let over = blocks.rows.iter().filter(|c| c.value > 3.0 + 1e-9).count();
    let alternating = blocks
        .rows
        .iter()
        .filter(|c| ALTERNATING_BLOCK_BITS.contains(&c.bits))
        .all(|c| (c.value - 3.0).abs() <= 1e-9);
    Outcome {
        pass: blocks.rows.len() == 9 * 16
            && (blocks.maximum - 3.0).abs() <= 1e-9
            && over == 0
            && alternating,
        detail: format!(
            "{} maps, max {}, {} above bound, alternating attain 3: {alternating}",
            blocks.rows.len(),
            blocks.maximum,
            over
        ),
    }
}

fn sign_permutations(tol: &Tolerances) -> Outcome {
    let sc = build_scene(0.0, 0.0);
    let (_, perms) = verify_sign_bounds(&sc, tol);
    let patterns = named_patterns(&sc);
    let bad: Vec<&str> = patterns
        .iter()
        .filter(|p| !p.holds(1e-9))
        .map(|p| p.label)
        .collect();
    let has = |label: &str, value: f64| {
        patterns.iter().any(|p| {
            p.label == label && p.relation == Relation::Equal && (p.value - value).abs() <= 1e-9
        })
    };
    let alternating = has("v12-v13+v23-v21+v31-v32", 1.5 * 3f64.sqrt());
    let half = has("2v11-v23-v32", 1.5);
    Outcome {
        pass: perms.rows.len() == 6 * 64 && perms.maximum <= 3.0 + 1e-9 && bad.is_empty() && alternating && half,
        detail: format!(
            "{} maps, max {}, alternating 3*sqrt(3)/2: {alternating}, 3/2 pattern: {half}, failing sub-cases {bad:?}",
            perms.rows.len(),
            perms.maximum
        ),
    }
}

fn main() {
    let cfg = SuiteConfig {
        seed: 20261018,
        tol: Tolerances::default(),
        refine: 2,
    };
    let tol = cfg.tol;
    let criteria: Vec<Criterion> = vec![
        (
            "unit comass on complex structures",
            1,
            Box::new(move || from_report(unit_comass_suite(&cfg))),
        ),
        (
            "closed-form comass vs optimizer",
            30,
            Box::new(move || from_report(comass_oracle_suite(&cfg))),
        ),
        (
            "block sign-sum bound",
            1,
            Box::new(move || sign_blocks(&tol)),
        ),
        (
            "permutation-complement sign-sum bound",
            2,
            Box::new(move || sign_permutations(&tol)),
        ),
        (
            "pointwise calibration",
            60,
            Box::new(move || from_report(pointwise_suite(&cfg))),
        ),
        (
            "jacobian identity",
            5,
            Box::new(move || from_report(jacobian_suite(&cfg))),
        ),
        (
            "scene measures",
            1,
            Box::new(move || from_report(scene_measure_suite(&cfg))),
        ),
        (
            "homology: fills, exactly-two, degree",
            60,
            Box::new(move || from_report(homology_suite(&cfg))),
        ),
        (
            "linking obstruction",
            1,
            Box::new(move || from_report(linking_suite(&cfg))),
        ),
        (
            "federer-fleming projection at n = 2",
            300,
            Box::new(move || from_report(ffproject_suite(&cfg))),
        ),
        (
            "minimality experiment",
            600,
            Box::new(move || from_report(minimize_suite(&cfg, None))),
        ),
        ("cones", 5, Box::new(move || from_report(cones_suite(&cfg)))),
        (
            "product measure identity",
            60,
            Box::new(move || from_report(product_suite(&cfg))),
        ),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let pass = out.pass && in_time;
        failures += usize::from(!pass);
        println!(
            "{} criterion {:>2} {name}: {} [{:.2}s / {limit}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            elapsed.as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
