//! Verification sweeps, one per command-line subcommand.
//!
//! Each builder runs its checks and returns a [`Report`]; module errors
//! become failing rows instead of aborting the sweep.

use std::fmt::Display;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{Report, Row};
use crate::calib::{
    all_blocks, block, enumerate_set, jacobian_identity_check, max_sign_sum, named_patterns,
    permutation_complement, pointwise_sum_sup, set_label, verify_sign_bounds, Index,
    ALTERNATING_BLOCK_BITS, PERMUTATIONS,
};
use crate::cones::{
    build_net, classify, coplanarity_check, net_conformality, solve_frame, symmetric_root,
    Dichotomy,
};
use crate::config::Tolerances;
use crate::experiments::{
    assemble_competitor, calibration_certificate, demo_ball, grid_setup, minimality_run,
    perturbed_run, product_deformation_demo, BranchDeformation, GridSetup, MinimalityRun,
};
use crate::exterior::{
    comass, comass_numeric_with, det4, random_orthonormal_basis, wedge, TwoVector, Vec4,
};
use crate::ffproj::{build_grid_complex, ff_project, tent_surface, FfOptions};
use crate::geometry::{build_scene, triangulate_yxy, ProductScene};
use crate::homology::SimplicialComplex;
use crate::homology::{
    decompose, linking_obstruction, mod2_degree, obstruction_solutions, solve_boundary, ChainZ2,
};
use crate::io::{write_chain, write_complex, CompetitorFile, Manifest};

/// Settings shared by every sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub tol: Tolerances,
    /// Grid refinement for the homology, projection and minimization sweeps.
    pub refine: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            tol: Tolerances::default(),
            refine: 2,
        }
    }
}

impl SuiteConfig {
    fn report(&self, command: &str) -> Report {
        let mut r = Report::new(command)
            .with("seed", self.seed)
            .with("refine", self.refine);
        for name in Tolerances::NAMES {
            r = r.with(
                &format!("tol.{name}"),
                format!("{:e}", self.tol.get(name).expect("known name")),
            );
        }
        r
    }

    fn scene(&self) -> ProductScene {
        build_scene(0.0, 0.0)
    }
}

fn failed(case: impl Into<String>, anchor: &str, err: impl Display) -> Row {
    Row::check(case, anchor, false, format!("error: {err}"))
}

/// Closed-form and optimizer comass of one 2-vector.
pub fn comass_eval(cfg: &SuiteConfig, alpha: &TwoVector) -> Report {
    let mut r = cfg.report("comass");
    let c = comass(alpha);
    let n = comass_numeric_with(alpha, 32, cfg.seed, cfg.tol.optimizer_step);
    let name = format!("{:?}", alpha.0);
    r.push(Row::record(
        format!("closed form {name}"),
        "comass-closed-form",
        c,
    ));
    r.push(Row::record(
        format!("optimizer {name}"),
        "comass-optimizer",
        n,
    ));
    r.push(Row::near(
        format!("agreement {name}"),
        "comass-closed-form",
        n,
        c,
        cfg.tol.comass_oracle,
    ));
    r.push(Row::record(
        format!("plucker residual {name}"),
        "simple-two-vectors",
        alpha.plucker(),
    ));
    r
}

/// Closed form against the multistart optimizer on 1000 random 2-vectors.
pub fn comass_oracle_suite(cfg: &SuiteConfig) -> Report {
    let mut r = cfg.report("comass");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut worst, mut worst_at, mut above) = (0.0_f64, 0, 0.0_f64);
    for k in 0..1000 {
        let a = TwoVector(std::array::from_fn(|_| rng.sample(StandardNormal)));
        let c = comass(&a);
        let n = comass_numeric_with(
            &a,
            32,
            cfg.seed.wrapping_add(k as u64),
            cfg.tol.optimizer_step,
        );
        if (c - n).abs() > worst {
            (worst, worst_at) = ((c - n).abs(), k);
        }
        above = above.max(n - c);
    }
    r.push(Row::at_most(
        format!("1000 random 2-vectors, 32 starts (worst #{worst_at})"),
        "comass-closed-form",
        worst,
        0.0,
        cfg.tol.comass_oracle,
    ));
    r.push(Row::at_most(
        "optimizer never exceeds the closed form",
        "comass-closed-form",
        above,
        0.0,
        cfg.tol.bound,
    ));
    r
}

/// `comass(x₁∧x₂ ± x₃∧x₄) = 1` with attainment on `x₃∧x₄`, over 100
/// positively oriented orthonormal bases.
pub fn unit_comass_suite(cfg: &SuiteConfig) -> Report {
    let mut r = cfg.report("lemma41");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst = [0.0_f64; 2];
    let mut worst_det = [0.0_f64; 2];
    for _ in 0..100 {
        let mut x = random_orthonormal_basis(&mut rng);
        let top = det4(&wedge(&x[0], &x[1]), &wedge(&x[2], &x[3]));
        if top < 0.0 {
            x[3] = -x[3];
        }
        let (p, q) = (wedge(&x[0], &x[1]), wedge(&x[2], &x[3]));
        for (i, alpha) in [p + q, p - q].iter().enumerate() {
            worst[i] = worst[i].max((comass(alpha) - 1.0).abs());
            worst_det[i] = worst_det[i].max((det4(alpha, &q) - 1.0).abs());
        }
    }
    for (i, sign) in ["+", "-"].iter().enumerate() {
        r.push(Row::at_most(
            format!("comass(x1^x2 {sign} x3^x4), 100 bases"),
            "comass-unit-on-complex-structures",
            worst[i],
            0.0,
            cfg.tol.bound,
        ));
        r.push(Row::at_most(
            format!("det4(x1^x2 {sign} x3^x4, x3^x4) = 1, 100 bases"),
            "comass-unit-on-complex-structures",
            worst_det[i],
            0.0,
            cfg.tol.unit,
        ));
    }
    r
}

/// Exhaustive sign enumerations over blocks and permutation complements,
/// the named sub-case patterns, and the attaining maps. The full case table
/// is attached as `sign_cases.csv`.
pub fn sign_bound_suite(cfg: &SuiteConfig) -> Report {
    let mut r = cfg.report("lemma324");
    let sc = cfg.scene();
    let (blocks, perms) = verify_sign_bounds(&sc, &cfg.tol);
    let anchor = "block-sign-sum-bound";
    for rep in [&blocks, &perms] {
        r.push(Row::at_most(
            format!("max over {} ({} maps)", rep.label, rep.rows.len()),
            anchor,
            rep.maximum,
            rep.bound,
            cfg.tol.bound,
        ));
    }
    r.push(Row::near(
        "block maximum attained",
        anchor,
        blocks.maximum,
        3.0,
        cfg.tol.bound,
    ));
    for (rows, cols) in all_blocks() {
        let set = block(rows, cols);
        let cases = enumerate_set(&sc, &set);
        for bits in ALTERNATING_BLOCK_BITS {
            r.push(Row::near(
                format!("alternating map {bits:04b} on {}", set_label(&set)),
                anchor,
                cases[bits as usize].value,
                3.0,
                cfg.tol.bound,
            ));
        }
    }
    r.push(Row::check(
        "attaining block maps are exactly the alternating ones",
        anchor,
        blocks.attaining.len() == 18
            && blocks
                .attaining
                .iter()
                .all(|(_, b)| ALTERNATING_BLOCK_BITS.contains(b)),
        format!("{} attaining", blocks.attaining.len()),
    ));
    for p in named_patterns(&sc) {
        let row = match p.relation {
            crate::calib::Relation::Equal => {
                Row::near(p.label, anchor, p.value, p.reference, cfg.tol.bound)
            }
            crate::calib::Relation::AtMost => {
                Row::at_most(p.label, anchor, p.value, p.reference, cfg.tol.bound)
            }
        };
        r.push(row);
    }
    let mut table = String::from("case,bits,pattern,value,bound,margin\n");
    for rep in [&blocks, &perms] {
        for c in &rep.rows {
            table.push_str(&format!(
                "\"{}\",{:b},{},{},{},{}\n",
                c.case,
                c.bits,
                c.pattern,
                c.value,
                rep.bound,
                rep.bound - c.value
            ));
        }
    }
    r.attachments.push(("sign_cases.csv".into(), table));
    r
}

/// Numerical plane supremum of `Σ g_jl` against the sign enumeration on
/// every block and permutation complement.
pub fn pointwise_suite(cfg: &SuiteConfig) -> Report {
    let mut r = cfg.report("lemma324");
    let sc = cfg.scene();
    let sets: Vec<Vec<Index>> = all_blocks()
        .into_iter()
        .map(|(a, b)| block(a, b))
        .chain(PERMUTATIONS.iter().map(|&s| permutation_complement(s)))
        .collect();
    for (i, set) in sets.iter().enumerate() {
        let sup = pointwise_sum_sup(&sc, set, 64, cfg.seed.wrapping_add(i as u64));
        let max = max_sign_sum(&sc, set);
        r.push(Row::near(
            format!("sup of sum g over {}", set_label(set)),
            "pointwise-calibration",
            sup,
            max,
            cfg.tol.pointwise,
        ));
    }
    r
}

/// Jacobian identity on random triangles and the exact scene measures at
/// refinements 1 to 4.
pub fn measure_suite(cfg: &SuiteConfig) -> Report {
    let mut r = cfg.report("calibrate");
    r.extend(jacobian_suite(cfg));
    r.extend(scene_measure_suite(cfg));
    r
}

/// `g_jl` against the projected area ratio on 1000 random triangles per
/// square.
pub fn jacobian_suite(cfg: &SuiteConfig) -> Report {
    let mut r = cfg.report("calibrate");
    let sc = cfg.scene();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for j in 0..3 {
        for l in 0..3 {
            let mut worst = 0.0_f64;
            let mut errors = 0;
            for _ in 0..1000 {
                let tri: [Vec4; 3] = std::array::from_fn(|_| {
                    Vec4(std::array::from_fn(|_| rng.random_range(-1.0..1.0)))
                });
                match jacobian_identity_check(&sc, j, l, &tri) {
                    Ok(c) => worst = worst.max(c.difference),
                    Err(_) => errors += 1,
                }
            }
            r.push(Row::at_most(
                format!(
                    "g_{}{} vs area ratio, 1000 triangles ({errors} degenerate skipped)",
                    j + 1,
                    l + 1
                ),
                "jacobian-identity",
                worst,
                0.0,
                cfg.tol.jacobian,
            ));
        }
    }
    r
}

/// Areas of `Y×Y ∩ D`, of its canonical fills and of the squares.
pub fn scene_measure_suite(cfg: &SuiteConfig) -> Report {
    let mut r = cfg.report("calibrate");
    let sc = cfg.scene();
    r.push(Row::near(
        "sum of area(Q_jl)",
        "scene-measures",
        sc.total_square_area(),
        27.0,
        cfg.tol.area,
    ));
    r.push(Row::near(
        "area(YxY in D), closed form",
        "scene-measures",
        sc.yxy_area(),
        9.0,
        cfg.tol.area,
    ));
    for n in 1..=4 {
        match triangulate_yxy(&sc, n) {
            Ok(t) => {
                let all = ChainZ2::from_indices(2, t.complex.len(2), 0..t.complex.len(2));
                r.push(Row::near(
                    format!("area(YxY in D), n = {n}"),
                    "scene-measures",
                    t.complex.chain_area(&all),
                    9.0,
                    cfg.tol.area,
                ));
                let fills: f64 = t
                    .fills
                    .iter()
                    .flatten()
                    .map(|c| t.complex.chain_area(c))
                    .sum();
                // each of the nine quarters lies in four of the fills S_j x R_l
                r.push(Row::near(
                    format!("sum of canonical fill areas, n = {n}"),
                    "scene-measures",
                    fills,
                    36.0,
                    cfg.tol.area,
                ));
            }
            Err(e) => r.push(failed(
                format!("triangulation n = {n}"),
                "scene-measures",
                e,
            )),
        }
    }
    r
}

/// Certificate rows for one assembled competitor.
fn competitor_rows(
    r: &mut Report,
    cfg: &SuiteConfig,
    sc: &ProductScene,
    setup: &GridSetup,
    label: &str,
    fills: [[&ChainZ2; 2]; 2],
) {
    let comp = match assemble_competitor(setup.complex(), &setup.gammas, fills) {
        Ok(c) => c,
        Err(e) => return r.push(failed(format!("{label}: assemble"), "exactly-two", e)),
    };
    r.push(Row::at_least(
        format!("{label}: union area"),
        "union-area-lower-bound",
        comp.area,
        9.0 * (1.0 - cfg.tol.disc),
        0.0,
    ));
    match calibration_certificate(sc, setup.complex(), &comp) {
        Ok(c) => push_certificate(r, cfg, label, c.lhs, c.mid, c.rhs),
        Err(e) => r.push(failed(
            format!("{label}: certificate"),
            "calibration-sandwich",
            e,
        )),
    }
}

fn push_certificate(r: &mut Report, cfg: &SuiteConfig, label: &str, lhs: f64, mid: f64, rhs: f64) {
    r.push(Row::at_least(
        format!("{label}: sum of integrals of g >= sum of area(Q_jl)"),
        "calibration-sandwich",
        mid,
        lhs,
        cfg.tol.bound * lhs,
    ));
    r.push(Row::at_most(
        format!("{label}: sum of integrals of g <= 3 area"),
        "calibration-sandwich",
        mid,
        rhs,
        cfg.tol.bound * rhs,
    ));
}

/// Certificate for a competitor read from a file.
pub fn competitor_suite(cfg: &SuiteConfig, file: &CompetitorFile) -> Report {
    let mut r = cfg
        .report("calibrate")
        .with("competitor.refine", file.refine);
    let sc = cfg.scene();
    let setup = match grid_setup(&sc, file.refine) {
        Ok(s) => s,
        Err(e) => {
            r.push(failed("grid setup", "fill-existence", e));
            return r;
        }
    };
    if let Err(e) = file.check_against(setup.complex()) {
        r.push(failed("competitor matches the grid", "fill-existence", e));
        return r;
    }
    let f = &file.fills;
    competitor_rows(
        &mut r,
        cfg,
        &sc,
        &setup,
        "competitor",
        [[&f[0][0], &f[0][1]], [&f[1][0], &f[1][1]]],
    );
    r
}

/// Fill existence, the exactly-two property on random re-fills and mod-2
/// degrees.
pub fn homology_suite(cfg: &SuiteConfig) -> Report {
    let mut r = cfg.report("homology");
    let sc = cfg.scene();
    let t = match triangulate_yxy(&sc, cfg.refine) {
        Ok(t) => t,
        Err(e) => {
            r.push(failed("triangulation", "fill-existence", e));
            return r;
        }
    };
    for j in 0..3 {
        for l in 0..3 {
            let ok = solve_boundary(&t.complex, &t.gammas[j][l]);
            r.push(Row::check(
                format!("gamma_{}{} bounds in YxY", j + 1, l + 1),
                "fill-existence",
                ok.is_ok(),
                match ok {
                    Ok(c) => format!("fill of {} triangles", c.weight()),
                    Err(e) => e.to_string(),
                },
            ));
        }
    }
    match grid_setup(&sc, cfg.refine) {
        Ok(setup) => {
            let k = setup.complex();
            let mut ok = 0;
            for i in 0..100u64 {
                let seed = cfg.seed.wrapping_add(i);
                let f = setup.perturbed_fills(6, seed);
                match decompose(
                    k,
                    [[&f[0][0], &f[0][1]], [&f[1][0], &f[1][1]]],
                    &setup.gammas,
                ) {
                    Ok(_) => ok += 1,
                    Err(e) => r.push(failed(format!("re-fill seed {seed}"), "exactly-two", e)),
                }
            }
            r.push(Row::check(
                "100 random re-fills decompose",
                "exactly-two",
                ok == 100,
                format!("{ok}/100"),
            ));
            let f = setup.perturbed_fills(6, cfg.seed);
            if let Ok(chains) = decompose(
                k,
                [[&f[0][0], &f[0][1]], [&f[1][0], &f[1][1]]],
                &setup.gammas,
            ) {
                degree_rows(&mut r, cfg, &sc, k, &chains, "re-fill");
            }
        }
        Err(e) => r.push(failed("grid setup", "exactly-two", e)),
    }
    degree_rows(&mut r, cfg, &sc, &t.complex, &t.fills, "canonical");
    r
}

/// Exhaustive enumeration of the linking-class cancellation patterns.
pub fn linking_suite(cfg: &SuiteConfig) -> Report {
    let mut r = cfg.report("homology");
    r.push(Row::check(
        "32 patterns: no cancellation of s11",
        "linking-obstruction",
        obstruction_solutions(true).is_empty(),
        format!("{} solutions", obstruction_solutions(true).len()),
    ));
    r.push(Row::check(
        "homogeneous control solvable",
        "linking-obstruction",
        obstruction_solutions(false).contains(&0),
        format!("{} solutions", obstruction_solutions(false).len()),
    ));
    r.push(Row::check(
        "obstruction",
        "linking-obstruction",
        linking_obstruction(),
        "enumerated",
    ));
    r
}

fn degree_rows(
    r: &mut Report,
    cfg: &SuiteConfig,
    sc: &ProductScene,
    k: &crate::homology::SimplicialComplex,
    chains: &[[ChainZ2; 3]; 3],
    label: &str,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    for j in 0..3 {
        for l in 0..3 {
            let q = sc.square(j, l);
            let h = 0.999 * q.half_side;
            let mut ones = 0;
            let mut perturbed = 0;
            let mut error = None;
            for i in 0..200u64 {
                let y = q.from_coords([rng.random_range(-h..h), rng.random_range(-h..h)]);
                match mod2_degree(k, &chains[j][l], sc, j, l, &y, cfg.seed.wrapping_add(i)) {
                    Ok(d) => {
                        ones += usize::from(d.degree == 1);
                        perturbed += usize::from(d.perturbation.is_some());
                    }
                    Err(e) => error = Some(e),
                }
            }
            let case = format!("{label} fill {}{}: degree at 200 points", j + 1, l + 1);
            match error {
                Some(e) => r.push(failed(case, "projection-degree", e)),
                None => r.push(Row::check(
                    case,
                    "projection-degree",
                    ones == 200,
                    format!("{ones}/200 odd, {perturbed} perturbed"),
                )),
            }
        }
    }
}

/// Boundary and fillability of one chain read from a file.
pub fn chain_check_suite(cfg: &SuiteConfig, k: &SimplicialComplex, chain: &ChainZ2) -> Report {
    let mut r = cfg.report("homology");
    match k.boundary(chain) {
        Ok(b) => {
            r.push(Row::check(
                format!("{}-chain is a cycle", chain.dim),
                "fill-existence",
                b.is_zero(),
                format!("boundary weight {}", b.weight()),
            ));
            if chain.dim < k.dim() {
                let fill = solve_boundary(k, chain);
                r.push(Row::check(
                    "chain bounds",
                    "fill-existence",
                    fill.is_ok(),
                    match fill {
                        Ok(f) => format!("fill of weight {}", f.weight()),
                        Err(e) => e.to_string(),
                    },
                ));
            }
        }
        Err(e) => r.push(failed("boundary", "fill-existence", e)),
    }
    r
}

/// Elimination fill of a cycle, attached as `fill.chain`.
pub fn chain_solve_suite(cfg: &SuiteConfig, k: &SimplicialComplex, chain: &ChainZ2) -> Report {
    let mut r = cfg.report("homology");
    match solve_boundary(k, chain) {
        Ok(f) => {
            r.push(Row::check(
                "fill found",
                "fill-existence",
                true,
                format!("weight {}", f.weight()),
            ));
            r.push(Row::record("fill area", "fill-existence", k.chain_area(&f)));
            r.attachments
                .push(("fill.chain".into(), write_chain(k, &f)));
        }
        Err(e) => r.push(failed("fill found", "fill-existence", e)),
    }
    r
}

/// The nine-piece decomposition of a competitor file.
pub fn decompose_suite(cfg: &SuiteConfig, file: &CompetitorFile) -> Report {
    let mut r = cfg
        .report("homology")
        .with("competitor.refine", file.refine);
    let setup = match grid_setup(&cfg.scene(), file.refine) {
        Ok(s) => s,
        Err(e) => {
            r.push(failed("grid setup", "exactly-two", e));
            return r;
        }
    };
    if let Err(e) = file.check_against(setup.complex()) {
        r.push(failed("competitor matches the grid", "exactly-two", e));
        return r;
    }
    let f = &file.fills;
    match assemble_competitor(
        setup.complex(),
        &setup.gammas,
        [[&f[0][0], &f[0][1]], [&f[1][0], &f[1][1]]],
    ) {
        Ok(c) => {
            r.push(Row::check(
                "nine fills with boundaries gamma_jl",
                "exactly-two",
                true,
                "decomposed",
            ));
            for j in 0..3 {
                for l in 0..3 {
                    r.push(Row::record(
                        format!("area of piece {}{}", j + 1, l + 1),
                        "exactly-two",
                        setup.complex().chain_area(&c.chains[j][l]),
                    ));
                }
            }
            r.push(Row::record("union area", "exactly-two", c.area));
        }
        Err(e) => r.push(failed("decomposition", "exactly-two", e)),
    }
    r
}

/// The triangulated `Y×Y ∩ D` with its cycles and canonical fills, as
/// attachments for the file-based homology commands.
pub fn export_suite(cfg: &SuiteConfig) -> Report {
    let mut r = cfg.report("homology");
    match triangulate_yxy(&cfg.scene(), cfg.refine) {
        Ok(t) => {
            r.push(Row::record(
                "triangles",
                "scene-measures",
                t.complex.len(2) as f64,
            ));
            r.attachments
                .push(("yxy.complex".into(), write_complex(&t.complex)));
            for j in 0..3 {
                for l in 0..3 {
                    let (a, b) = (j + 1, l + 1);
                    r.attachments.push((
                        format!("gamma_{a}{b}.chain"),
                        write_chain(&t.complex, &t.gammas[j][l]),
                    ));
                    r.attachments.push((
                        format!("fill_{a}{b}.chain"),
                        write_chain(&t.complex, &t.fills[j][l]),
                    ));
                }
            }
        }
        Err(e) => r.push(failed("triangulation", "scene-measures", e)),
    }
    r
}

/// Projection of a tent surface onto the aligned grid. The per-cell trace
/// is attached as `ff_trace.csv`.
pub fn ffproject_suite(cfg: &SuiteConfig) -> Report {
    let mut r = cfg.report("ffproject");
    let sc = cfg.scene();
    let n = cfg.refine;
    let run = || -> Result<_, Box<dyn std::error::Error>> {
        let g = build_grid_complex(&sc, n, true)?;
        let t = triangulate_yxy(&sc, n)?;
        let e = tent_surface(&sc, n, 0.15)?;
        let opts = FfOptions {
            seed: cfg.seed,
            tol: cfg.tol.geometric,
            ..FfOptions::default()
        };
        let res = ff_project(&g.poly, &e, &opts)?;
        Ok((g, t, res))
    };
    let (g, t, res) = match run() {
        Ok(v) => v,
        Err(e) => {
            r.push(failed("projection", "full-face", e));
            return r;
        }
    };
    r.push(Row::check(
        "image is a union of full faces",
        "full-face",
        res.full_face,
        format!("{} faces", res.kept.len()),
    ));
    r.push(Row::at_most(
        "largest erosion area ratio",
        "erosion-nonexpansion",
        res.trace.max_erosion_ratio,
        1.0,
        cfg.tol.area,
    ));
    match res.kept_chain(&g.poly, &g.simplicial) {
        Ok(kept) => {
            let sub = g.simplicial.subcomplex(&kept);
            for j in 0..3 {
                for l in 0..3 {
                    let case = format!("gamma_{}{} bounds in the image", j + 1, l + 1);
                    let ok = t
                        .complex
                        .transfer_chain_by_coords(&t.gammas[j][l], &sub, cfg.tol.geometric)
                        .map_err(|e| e.to_string())
                        .and_then(|z| solve_boundary(&sub, &z).map_err(|e| e.to_string()));
                    r.push(match ok {
                        Ok(_) => Row::check(case, "boundary-classes-preserved", true, "bounds"),
                        Err(e) => failed(case, "boundary-classes-preserved", e),
                    });
                }
            }
        }
        Err(e) => r.push(failed("kept faces", "boundary-classes-preserved", e)),
    }
    let tr = &res.trace;
    r.push(Row::record("input area", "full-face", tr.input_area));
    r.push(Row::record("output area", "full-face", tr.output_area));
    r.push(Row::record(
        "composite area ratio",
        "full-face",
        tr.composite_ratio,
    ));
    r.push(Row::record("grid roundness", "full-face", tr.min_roundness));
    r.push(Row::record(
        "K_emp (max stage ratio times R^4)",
        "full-face",
        tr.k_emp,
    ));
    r.push(Row::record(
        "composite ratio times R^8",
        "full-face",
        tr.k1_emp,
    ));
    r.attachments.push(("ff_trace.csv".into(), tr.to_csv()));
    r
}

/// Seeded minimizations and perturbed competitors on the aligned grid. The
/// run ledger is attached as `minimize_runs.csv`.
pub fn minimize_suite(cfg: &SuiteConfig, manifest: Option<&Manifest>) -> Report {
    let default_seeds: Vec<u64> = (0..100).map(|i| cfg.seed.wrapping_add(i)).collect();
    let (refine, budget, moves, seeds) = match manifest {
        Some(m) => (m.refine, m.budget, m.perturb_moves, m.seeds.clone()),
        None => (cfg.refine, 50_000, 6, default_seeds),
    };
    let mut r = cfg
        .report("minimize")
        .with("minimize.refine", refine)
        .with("minimize.budget", budget)
        .with("minimize.perturb_moves", moves)
        .with("minimize.seeds", seeds.len());
    let sc = cfg.scene();
    let setup = match grid_setup(&sc, refine) {
        Ok(s) => s,
        Err(e) => {
            r.push(failed("grid setup", "union-area-lower-bound", e));
            return r;
        }
    };
    match setup.canonical_competitor() {
        Ok(c) => {
            r.push(Row::near(
                "canonical competitor area",
                "union-area-lower-bound",
                c.area,
                9.0,
                cfg.tol.area,
            ));
            match calibration_certificate(&sc, setup.complex(), &c) {
                Ok(cert) => {
                    push_certificate(&mut r, cfg, "canonical", cert.lhs, cert.mid, cert.rhs)
                }
                Err(e) => r.push(failed("canonical certificate", "calibration-sandwich", e)),
            }
        }
        Err(e) => r.push(failed("canonical competitor", "union-area-lower-bound", e)),
    }
    let mut ledger = String::from("kind,seed,fill11,fill12,fill21,fill22,union,lhs,mid,rhs,block_triangles,permutation_triangles\n");
    let mut runs: Vec<Result<MinimalityRun, String>> = Vec::new();
    for &seed in &seeds {
        runs.push(minimality_run(&sc, &setup, budget, seed).map_err(|e| e.to_string()));
        runs.push(perturbed_run(&sc, &setup, moves, seed).map_err(|e| e.to_string()));
    }
    for (i, run) in runs.iter().enumerate() {
        let run = match run {
            Ok(run) => run,
            Err(e) => {
                r.push(failed(format!("run {i}"), "calibration-sandwich", e));
                continue;
            }
        };
        let label = format!("{} seed {}", run.kind, run.seed);
        r.push(Row::at_least(
            format!("{label}: union area"),
            "union-area-lower-bound",
            run.union_area,
            9.0 * (1.0 - cfg.tol.disc),
            0.0,
        ));
        let c = &run.certificate;
        push_certificate(&mut r, cfg, &label, c.lhs, c.mid, c.rhs);
        let a = run.fill_areas;
        ledger.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            run.kind,
            run.seed,
            a[0],
            a[1],
            a[2],
            a[3],
            run.union_area,
            c.lhs,
            c.mid,
            c.rhs,
            c.block_triangles,
            c.permutation_triangles
        ));
    }
    r.attachments.push(("minimize_runs.csv".into(), ledger));
    r
}

/// The product measure identity for the identity deformation and a tip
/// compression, and the ramp bound at radius `R` and `2R`.
pub fn product_suite(cfg: &SuiteConfig) -> Report {
    let mut r = cfg.report("demo-product");
    let sc = cfg.scene();
    let (bc, br) = demo_ball(&sc);
    let (radius, resolution) = (2.0, 8);
    let cases = [
        ("identity", BranchDeformation::identity(0, bc, br), radius),
        (
            "tip compression",
            BranchDeformation::compress_tip(0, 0.6, 0.4, bc, br),
            radius,
        ),
        (
            "tip compression, 2R",
            BranchDeformation::compress_tip(0, 0.6, 0.4, bc, br),
            2.0 * radius,
        ),
    ];
    let mut shares = Vec::new();
    for (label, f, rad) in cases {
        match product_deformation_demo(&sc, &f, rad, resolution, cfg.tol.product_identity) {
            Ok(d) => {
                r.push(Row::record(
                    format!("{label}: length lost c"),
                    "product-measure-identity",
                    d.c,
                ));
                r.push(Row::at_most(
                    format!("{label}: relative error of the measure identity (R = {rad})"),
                    "product-measure-identity",
                    d.relative_error,
                    cfg.tol.product_identity,
                    0.0,
                ));
                r.push(Row::at_most(
                    format!("{label}: ramp area"),
                    "ramp-zone-bound",
                    d.ramp_area,
                    d.ramp_bound,
                    cfg.tol.area * d.ramp_bound.max(1.0),
                ));
                r.push(Row::record(
                    format!("{label}: ramp share"),
                    "ramp-zone-bound",
                    d.ramp_share,
                ));
                shares.push(d.ramp_share);
            }
            Err(e) => r.push(failed(label, "product-measure-identity", e)),
        }
    }
    if shares.len() == 3 {
        r.push(Row::at_most(
            "ramp share decreases when R doubles",
            "ramp-zone-bound",
            shares[2],
            shares[1],
            0.0,
        ));
    }
    r
}

/// Net structure, junction coplanarity, the frame equation and its
/// classifier. The classifier table is attached as `frame_classifier.csv`.
pub fn cones_suite(cfg: &SuiteConfig) -> Report {
    let mut r = cfg.report("cones");
    let net = build_net(&cfg.scene());
    let check = net.check();
    r.push(Row::check(
        "net structure",
        "net-structure",
        check.holds(),
        format!("{check:?}"),
    ));
    for n in 0..6 {
        let t = net.tangents_at(n);
        let case = format!("node {n}: arcs in one great sphere");
        match <[Vec4; 3]>::try_from(t.as_slice()) {
            Ok(t) => match coplanarity_check(&net.nodes[n], &t, cfg.tol.rank) {
                Ok(c) => r.push(Row::check(
                    case,
                    "junction-coplanarity",
                    c.coplanar,
                    format!("rank {}", c.rank),
                )),
                Err(e) => r.push(failed(case, "junction-coplanarity", e)),
            },
            Err(_) => r.push(failed(
                case,
                "junction-coplanarity",
                format!("{} arcs", t.len()),
            )),
        }
    }
    match net_conformality(&net, 5, 200, cfg.seed) {
        Ok(e) => r.push(Row::at_most(
            "stereographic conformality",
            "net-structure",
            e,
            0.0,
            cfg.tol.comass_oracle,
        )),
        Err(e) => r.push(failed("stereographic conformality", "net-structure", e)),
    }
    match solve_frame(1.0, 1.0) {
        Ok(s) => {
            r.push(Row::near(
                "u0 at t = (1, 1)",
                "frame-root",
                s.u0,
                1.0,
                cfg.tol.frame,
            ));
            let theta = s
                .theta_plus
                .iter()
                .chain(&s.theta_minus)
                .fold(0.0_f64, |m, t| m.max(t.abs()));
            r.push(Row::at_most(
                "theta at t = (1, 1)",
                "frame-root",
                theta,
                0.0,
                cfg.tol.frame,
            ));
        }
        Err(e) => r.push(failed("t = (1, 1)", "frame-root", e)),
    }
    for t in [1.1, 1.5, 2.0, 3.7, 10.0] {
        match solve_frame(t, t) {
            Ok(s) => r.push(Row::near(
                format!("symmetric u0 at t = {t}"),
                "frame-root",
                s.u0,
                symmetric_root(t),
                cfg.tol.frame,
            )),
            Err(e) => r.push(failed(format!("symmetric t = {t}"), "frame-root", e)),
        }
    }
    let mut table = String::from("t2,t3,u0,residual,theta_plus,theta_minus,min_derivative,monotone,dichotomy,frame_residual\n");
    let mut audit = (0, 0);
    let grid = [1.1, 1.25, 1.5, 2.0, 3.0, 5.0]
        .into_iter()
        .flat_map(|t2| (0..5).map(move |k| (t2, t2 + 0.24 * k as f64)));
    for (t2, t3) in std::iter::once((1.0, 1.0)).chain(grid) {
        {
            audit.1 += 1;
            match classify(t2, t3) {
                Ok(row) => {
                    let s = &row.solution;
                    audit.0 += usize::from(
                        s.monotone
                            && s.residual <= cfg.tol.frame
                            && row.frame_residual <= cfg.tol.rank,
                    );
                    let fmt3 = |a: [f64; 3]| format!("{} {} {}", a[0], a[1], a[2]);
                    table.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{},{}\n",
                        t2,
                        t3,
                        s.u0,
                        s.residual,
                        fmt3(s.theta_plus),
                        fmt3(s.theta_minus),
                        s.min_derivative,
                        if s.monotone { "pass" } else { "fail" },
                        match row.dichotomy {
                            Some(Dichotomy::Parallel) => "parallel",
                            Some(Dichotomy::Symmetric) => "symmetric",
                            None => "none",
                        },
                        row.frame_residual
                    ));
                }
                Err(e) => r.push(failed(format!("classify ({t2}, {t3})"), "frame-root", e)),
            }
        }
    }
    r.push(Row::check(
        "f' > 0 audit and frame residuals",
        "frame-root",
        audit.0 == audit.1,
        format!("{}/{}", audit.0, audit.1),
    ));
    r.attachments.push(("frame_classifier.csv".into(), table));
    r
}

/// Every sweep above, in a fixed order.
pub fn report_all(cfg: &SuiteConfig) -> Report {
    let mut r = cfg.report("report-all");
    for part in [
        unit_comass_suite(cfg),
        comass_oracle_suite(cfg),
        sign_bound_suite(cfg),
        pointwise_suite(cfg),
        measure_suite(cfg),
        homology_suite(cfg),
        linking_suite(cfg),
        ffproject_suite(cfg),
        minimize_suite(cfg, None),
        product_suite(cfg),
        cones_suite(cfg),
    ] {
        r.extend(part);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_suites_pass() {
        let cfg = SuiteConfig::default();
        for r in [
            unit_comass_suite(&cfg),
            sign_bound_suite(&cfg),
            cones_suite(&cfg),
            product_suite(&cfg),
        ] {
            let fails: Vec<_> = r.failures().collect();
            assert!(fails.is_empty(), "{}: {fails:?}", r.command);
        }
    }

    #[test]
    fn comass_eval_rows() {
        let a = TwoVector::basis(0, 1) + TwoVector::basis(2, 3);
        let r = comass_eval(&SuiteConfig::default(), &a);
        assert!(r.all_pass());
        assert_eq!(r.rows.len(), 4);
    }
}
