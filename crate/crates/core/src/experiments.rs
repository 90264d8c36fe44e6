//! Discrete competitors on the aligned grid, area minimization over fill
//! cosets, the calibration certificate and the product-deformation demo.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::calib::integrate_g;
use crate::exterior::Vec4;
use crate::ffproj::{build_grid_complex, FfError, GridComplex};
use crate::geometry::{triangulate_yxy, GeometryError, Point2, ProductScene, YxyTriangulation};
use crate::homology::{
    decompose, solve_boundary, ChainZ2, ColumnReduction, HomologyError, SimplicialComplex,
};

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ExperimentError {
    #[error("cycle is not a boundary in the complex")]
    NotNullhomologous,
    #[error("multiplicity pattern violation: {0}")]
    MultiplicityViolation(String),
    #[error("bad deformation: {0}")]
    BadDeformation(String),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Projection(#[from] FfError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn area_of(areas: &[f64], c: &ChainZ2) -> f64 {
    c.support().map(|t| areas[t]).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SearchMethod {
    /// Budget 0: the elimination fill itself.
    Elimination,
    Exhaustive,
    LocalSearch,
}

/// A fill found by [`minimize_chain`].
#[derive(Debug, Clone, PartialEq)]
pub struct MinimizedChain {
    pub chain: ChainZ2,
    pub area: f64,
    /// Area of the elimination fill the search started from.
    pub initial_area: f64,
    pub evaluations: usize,
    pub method: SearchMethod,
}

/// Largest kernel dimension searched exhaustively.
pub const EXHAUSTIVE_MAX_NULLITY: usize = 20;

/// Searches the coset `Γ₀ + ker ∂₂` for a small-area fill of `gamma`, where
/// `Γ₀` is the elimination fill. Exhaustive when `dim ker ∂₂` is at most
/// [`EXHAUSTIVE_MAX_NULLITY`], otherwise a seeded first-improvement search
/// over boundaries of 3-simplices (and a kernel basis when `H₂ ≠ 0`) with
/// random kicks between descents; `budget` caps the move evaluations.
pub fn minimize_chain(
    k: &SimplicialComplex,
    gamma: &ChainZ2,
    budget: usize,
    seed: u64,
) -> Result<MinimizedChain, ExperimentError> {
    let red = ColumnReduction::new(&k.boundary_matrix(2));
    let start = match crate::homology::solve_with(k, &red, gamma) {
        Ok(c) => c,
        Err(HomologyError::NotABoundary) => return Err(ExperimentError::NotNullhomologous),
        Err(e) => return Err(e.into()),
    };
    let areas: Vec<f64> = (0..k.len(2)).map(|t| k.triangle_area(t)).collect();
    let initial_area = area_of(&areas, &start);
    if budget == 0 {
        return Ok(MinimizedChain {
            chain: start,
            area: initial_area,
            initial_area,
            evaluations: 0,
            method: SearchMethod::Elimination,
        });
    }
    let result = if red.nullity() <= EXHAUSTIVE_MAX_NULLITY {
        exhaustive(
            &areas,
            start,
            red.kernel_basis()
                .into_iter()
                .map(|b| ChainZ2 { dim: 2, bits: b })
                .collect(),
        )
    } else {
        let mut moves: Vec<Vec<usize>> = (0..k.len(3)).map(|i| k.faces(3, i).to_vec()).collect();
        let rank3 = if k.len(3) == 0 {
            0
        } else {
            k.boundary_matrix(3).rank()
        };
        if red.nullity() > rank3 {
            moves.extend(red.kernel_basis().iter().map(|b| b.iter_ones().collect()));
        }
        local_search(&areas, start, &moves, budget, seed)
    };
    if k.boundary(&result.0)? != *gamma {
        return Err(HomologyError::Degenerate("search left the fill coset".into()).into());
    }
    let method = if red.nullity() <= EXHAUSTIVE_MAX_NULLITY {
        SearchMethod::Exhaustive
    } else {
        SearchMethod::LocalSearch
    };
    Ok(MinimizedChain {
        area: area_of(&areas, &result.0),
        chain: result.0,
        initial_area,
        evaluations: result.1,
        method,
    })
}

/// Gray-code walk over the whole coset.
fn exhaustive(areas: &[f64], start: ChainZ2, basis: Vec<ChainZ2>) -> (ChainZ2, usize) {
    let mut cur = start;
    let mut area = area_of(areas, &cur);
    let mut best = (cur.clone(), area);
    let total = 1usize << basis.len();
    for step in 1..total {
        let b = &basis[step.trailing_zeros() as usize];
        for t in b.support() {
            area += if cur.contains(t) { -areas[t] } else { areas[t] };
        }
        cur.add_assign(b);
        if area < best.1 - 1e-12 {
            best = (cur.clone(), area);
        }
    }
    (best.0, total - 1)
}

fn delta(areas: &[f64], cur: &ChainZ2, mv: &[usize]) -> f64 {
    mv.iter()
        .map(|&t| if cur.contains(t) { -areas[t] } else { areas[t] })
        .sum()
}

fn apply(cur: &mut ChainZ2, mv: &[usize]) {
    for &t in mv {
        cur.bits.flip(t);
    }
}

fn local_search(
    areas: &[f64],
    start: ChainZ2,
    moves: &[Vec<usize>],
    budget: usize,
    seed: u64,
) -> (ChainZ2, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = start;
    let mut cur_area = area_of(areas, &cur);
    let mut best = (cur.clone(), cur_area);
    let mut evals = 0;
    let mut order: Vec<usize> = (0..moves.len()).collect();
    if moves.is_empty() {
        return (cur, 0);
    }
    while evals < budget {
        let mut improved = true;
        while improved && evals < budget {
            improved = false;
            order.shuffle(&mut rng);
            for &m in &order {
                evals += 1;
                let d = delta(areas, &cur, &moves[m]);
                if d < -1e-12 {
                    apply(&mut cur, &moves[m]);
                    cur_area += d;
                    improved = true;
                }
                if evals >= budget {
                    break;
                }
            }
        }
        if cur_area < best.1 - 1e-12 {
            best = (cur.clone(), cur_area);
        }
        cur = best.0.clone();
        for _ in 0..3 {
            apply(&mut cur, &moves[rng.random_range(0..moves.len())]);
        }
        cur_area = area_of(areas, &cur);
    }
    (best.0, evals)
}

/// Nine fills of the cycles `γ_jl` inside one complex, and their union.
#[derive(Debug, Clone)]
pub struct Competitor {
    pub chains: [[ChainZ2; 3]; 3],
    /// Every triangle in some fill, counted once.
    pub union: ChainZ2,
    pub area: f64,
}

/// Completes four generator fills to a competitor.
pub fn assemble_competitor(
    k: &SimplicialComplex,
    gammas: &[[ChainZ2; 3]; 3],
    fills: [[&ChainZ2; 2]; 2],
) -> Result<Competitor, ExperimentError> {
    let chains = decompose(k, fills, gammas)?;
    let mut union = ChainZ2::zero(2, k.len(2));
    for c in chains.iter().flatten() {
        union.bits = union.bits.or(&c.bits);
    }
    let area = k.chain_area(&union);
    Ok(Competitor {
        chains,
        union,
        area,
    })
}

/// The aligned grid with the cycles `γ_jl` and the canonical fills
/// `S_j × R_l` transferred onto it.
#[derive(Debug, Clone)]
pub struct GridSetup {
    pub grid: GridComplex,
    pub yxy: YxyTriangulation,
    pub gammas: [[ChainZ2; 3]; 3],
    pub canonical: [[ChainZ2; 3]; 3],
}

pub fn grid_setup(scene: &ProductScene, n: usize) -> Result<GridSetup, ExperimentError> {
    let grid = build_grid_complex(scene, n, true)?;
    let yxy = triangulate_yxy(scene, n)?;
    let mut gammas: [[ChainZ2; 3]; 3] =
        std::array::from_fn(|_| std::array::from_fn(|_| ChainZ2::zero(1, 0)));
    let mut canonical = gammas.clone();
    for j in 0..3 {
        for l in 0..3 {
            gammas[j][l] =
                yxy.complex
                    .transfer_chain_by_coords(&yxy.gammas[j][l], &grid.simplicial, 1e-9)?;
            canonical[j][l] =
                yxy.complex
                    .transfer_chain_by_coords(&yxy.fills[j][l], &grid.simplicial, 1e-9)?;
        }
    }
    Ok(GridSetup {
        grid,
        yxy,
        gammas,
        canonical,
    })
}

impl GridSetup {
    pub fn complex(&self) -> &SimplicialComplex {
        &self.grid.simplicial
    }

    pub fn canonical_competitor(&self) -> Result<Competitor, ExperimentError> {
        let c = &self.canonical;
        assemble_competitor(
            self.complex(),
            &self.gammas,
            [[&c[0][0], &c[0][1]], [&c[1][0], &c[1][1]]],
        )
    }

    /// Canonical generator fills plus a random sum of `moves` boundaries of
    /// 3-simplices each.
    pub fn perturbed_fills(&self, moves: usize, seed: u64) -> [[ChainZ2; 2]; 2] {
        let k = self.complex();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        std::array::from_fn(|j| {
            std::array::from_fn(|l| {
                let mut c = self.canonical[j][l].clone();
                for _ in 0..moves {
                    apply(&mut c, k.faces(3, rng.random_range(0..k.len(3))));
                }
                c
            })
        })
    }

    /// Minimizes the four generator fills with seeds `seed..seed+4`.
    pub fn minimized_fills(
        &self,
        budget: usize,
        seed: u64,
    ) -> Result<[[MinimizedChain; 2]; 2], ExperimentError> {
        let mut out = Vec::with_capacity(4);
        for j in 0..2 {
            for l in 0..2 {
                out.push(minimize_chain(
                    self.complex(),
                    &self.gammas[j][l],
                    budget,
                    seed + (2 * j + l) as u64,
                )?);
            }
        }
        let mut it = out.into_iter();
        let mut next = || it.next().expect("four fills");
        let a = [next(), next()];
        let b = [next(), next()];
        Ok([a, b])
    }
}

/// Which pieces contain a triangle: empty, a 2×2 block, or the complement
/// of a permutation diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MembershipCase {
    Block { rows: [usize; 2], cols: [usize; 2] },
    PermutationComplement { sigma: [usize; 3] },
}

/// Classifies a 3×3 membership table.
pub fn membership_case(m: &[[bool; 3]; 3]) -> Option<MembershipCase> {
    let count = m.iter().flatten().filter(|&&b| b).count();
    let rows: Vec<usize> = (0..3).filter(|&j| m[j].iter().any(|&b| b)).collect();
    let cols: Vec<usize> = (0..3).filter(|&l| (0..3).any(|j| m[j][l])).collect();
    if count == 4
        && rows.len() == 2
        && cols.len() == 2
        && rows.iter().all(|&j| cols.iter().all(|&l| m[j][l]))
    {
        return Some(MembershipCase::Block {
            rows: [rows[0], rows[1]],
            cols: [cols[0], cols[1]],
        });
    }
    if count == 6 {
        let mut sigma = [usize::MAX; 3];
        for (j, s) in sigma.iter_mut().enumerate() {
            let missing: Vec<usize> = (0..3).filter(|&l| !m[j][l]).collect();
            if missing.len() != 1 {
                return None;
            }
            *s = missing[0];
        }
        let mut sorted = sigma;
        sorted.sort_unstable();
        if sorted == [0, 1, 2] {
            return Some(MembershipCase::PermutationComplement { sigma });
        }
    }
    None
}

/// The sandwich `Σ area(Q_jl) ≤ Σ ∫_{Γ_jl} g_jl ≤ 3·area(F)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub lhs: f64,
    pub mid: f64,
    pub rhs: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
    pub block_triangles: usize,
    pub permutation_triangles: usize,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

pub fn calibration_certificate(
    scene: &ProductScene,
    k: &SimplicialComplex,
    competitor: &Competitor,
) -> Result<Certificate, ExperimentError> {
    let mut block_triangles = 0;
    let mut permutation_triangles = 0;
    for t in competitor.union.support() {
        let m: [[bool; 3]; 3] =
            std::array::from_fn(|j| std::array::from_fn(|l| competitor.chains[j][l].contains(t)));
        match membership_case(&m) {
            Some(MembershipCase::Block { .. }) => block_triangles += 1,
            Some(MembershipCase::PermutationComplement { .. }) => permutation_triangles += 1,
            None => {
                return Err(ExperimentError::MultiplicityViolation(format!(
                    "triangle {t} has membership {m:?}"
                )))
            }
        }
    }
    let lhs = scene.total_square_area();
    let mut mid = 0.0;
    for j in 0..3 {
        for l in 0..3 {
            mid += integrate_g(scene, j, l, k, &competitor.chains[j][l]);
        }
    }
    let rhs = 3.0 * competitor.area;
    Ok(Certificate {
        lhs,
        mid,
        rhs,
        lower_holds: lhs <= mid * (1.0 + 1e-9),
        upper_holds: mid <= rhs * (1.0 + 1e-9),
        block_triangles,
        permutation_triangles,
    })
}

/// One seeded minimality run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimalityRun {
    pub seed: u64,
    /// `minimized` or `perturbed`.
    pub kind: &'static str,
    pub fill_areas: [f64; 4],
    pub union_area: f64,
    pub certificate: Certificate,
}

/// Minimized competitor for `seed`.
pub fn minimality_run(
    scene: &ProductScene,
    setup: &GridSetup,
    budget: usize,
    seed: u64,
) -> Result<MinimalityRun, ExperimentError> {
    let m = setup.minimized_fills(budget, seed)?;
    let comp = assemble_competitor(
        setup.complex(),
        &setup.gammas,
        [
            [&m[0][0].chain, &m[0][1].chain],
            [&m[1][0].chain, &m[1][1].chain],
        ],
    )?;
    Ok(MinimalityRun {
        seed,
        kind: "minimized",
        fill_areas: [m[0][0].area, m[0][1].area, m[1][0].area, m[1][1].area],
        union_area: comp.area,
        certificate: calibration_certificate(scene, setup.complex(), &comp)?,
    })
}

/// Canonical fills perturbed by `moves` random 3-simplex boundaries each.
pub fn perturbed_run(
    scene: &ProductScene,
    setup: &GridSetup,
    moves: usize,
    seed: u64,
) -> Result<MinimalityRun, ExperimentError> {
    let f = setup.perturbed_fills(moves, seed);
    let comp = assemble_competitor(
        setup.complex(),
        &setup.gammas,
        [[&f[0][0], &f[0][1]], [&f[1][0], &f[1][1]]],
    )?;
    let k = setup.complex();
    Ok(MinimalityRun {
        seed,
        kind: "perturbed",
        fill_areas: [
            k.chain_area(&f[0][0]),
            k.chain_area(&f[0][1]),
            k.chain_area(&f[1][0]),
            k.chain_area(&f[1][1]),
        ],
        union_area: comp.area,
        certificate: calibration_certificate(scene, k, &comp)?,
    })
}

/// A PL deformation of the first factor `Y₁` that moves points only along
/// one branch: the point at distance `t` from the center on branch `arm`
/// goes to distance `τ(t)`, with `τ` interpolating `knots`, and `τ(t) = t`
/// outside the knot range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchDeformation {
    pub arm: usize,
    pub knots: Vec<(f64, f64)>,
    pub ball_center: Point2,
    pub ball_radius: f64,
}

impl BranchDeformation {
    pub fn identity(arm: usize, ball_center: Point2, ball_radius: f64) -> Self {
        Self {
            arm,
            knots: vec![(0.0, 0.0), (1.0, 1.0)],
            ball_center,
            ball_radius,
        }
    }

    /// Compresses the part of the branch beyond `from` by `lambda`.
    pub fn compress_tip(
        arm: usize,
        from: f64,
        lambda: f64,
        ball_center: Point2,
        ball_radius: f64,
    ) -> Self {
        Self {
            arm,
            knots: vec![(from, from), (1.0, from + lambda * (1.0 - from))],
            ball_center,
            ball_radius,
        }
    }

    pub fn tau(&self, t: f64) -> f64 {
        let k = &self.knots;
        if t <= k[0].0 || t > k[k.len() - 1].0 {
            return t;
        }
        let i = k
            .iter()
            .position(|&(a, _)| a >= t)
            .unwrap_or(k.len() - 1)
            .max(1);
        let ((t0, s0), (t1, s1)) = (k[i - 1], k[i]);
        s0 + (s1 - s0) * (t - t0) / (t1 - t0)
    }

    fn in_ball(&self, p: Point2) -> bool {
        let d = [p[0] - self.ball_center[0], p[1] - self.ball_center[1]];
        (d[0] * d[0] + d[1] * d[1]).sqrt() <= self.ball_radius * (1.0 + 1e-12)
    }

    /// Checks monotonicity, that moved points lie in the ball, and that the
    /// ball is mapped into itself.
    pub fn validate(&self, scene: &ProductScene) -> Result<(), ExperimentError> {
        let k = &self.knots;
        if k.len() < 2 || self.arm > 2 {
            return Err(ExperimentError::BadDeformation(
                "need an arm and two knots".into(),
            ));
        }
        if k.windows(2).any(|w| w[1].0 <= w[0].0 || w[1].1 <= w[0].1) {
            return Err(ExperimentError::BadDeformation(
                "knots must be strictly increasing".into(),
            ));
        }
        if k[0].0 < 0.0 || k[k.len() - 1].0 > 1.0 || k[0].1 < 0.0 {
            return Err(ExperimentError::BadDeformation(
                "knots leave the branch".into(),
            ));
        }
        let dir = scene.y1.directions[self.arm];
        let o = scene.y1.center;
        let at = |t: f64| [o[0] + t * dir[0], o[1] + t * dir[1]];
        for i in 0..=1000 {
            let t = i as f64 / 1000.0;
            let s = self.tau(t);
            if (s - t).abs() > 1e-15 && !(self.in_ball(at(t)) && self.in_ball(at(s))) {
                return Err(ExperimentError::BadDeformation(format!(
                    "moves the point at t = {t} outside the ball"
                )));
            }
            if self.in_ball(at(t)) && !self.in_ball(at(s)) {
                return Err(ExperimentError::BadDeformation(format!(
                    "maps t = {t} out of the ball"
                )));
            }
        }
        Ok(())
    }
}

/// Measures of the product-deformation identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductDemoReport {
    pub radius: f64,
    pub resolution: usize,
    /// Length lost in the ball, `H¹(E₁∩B) − H¹(f(E₁)∩B)`.
    pub c: f64,
    /// `H²(E ∩ (B × B(0,R)))`.
    pub area_before: f64,
    /// `H²(φ(E) ∩ (B × B(0,R)))` from the image triangulation.
    pub area_after: f64,
    /// `area_before − c·H¹(E₂∩B(0,R))`.
    pub predicted: f64,
    pub relative_error: f64,
    /// Image area over `B × (B(0,R+1) ∖ B(0,R))`.
    pub ramp_area: f64,
    /// Largest singular value of `φ` over the triangulation.
    pub lipschitz: f64,
    /// `L²·H¹(E₁∩B)·H¹(E₂ ∩ annulus)`.
    pub ramp_bound: f64,
    /// `ramp_area / area_before`.
    pub ramp_share: f64,
    pub identity_holds: bool,
    pub ramp_holds: bool,
}

/// The cut-off `ψ`: 1 up to `radius`, linear down to 0 at `radius + 1`.
pub fn psi(y: f64, radius: f64) -> f64 {
    (radius + 1.0 - y).clamp(0.0, 1.0)
}

fn sorted_knots(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    v
}

/// Builds `φ(x,y) = (x + ψ(y)(f(x) − x), y)` on `E = Y₁ × Y₂` (second
/// factor branches extended to length `radius + 2`), triangulates each
/// branch product at `resolution` points per unit length, and compares
/// image areas with the coarea prediction. `tolerance` is relative.
///
/// The alternative form `ψf + (1 − ψ)(f − x)` is not used: it is not the
/// identity where `ψ = 0`.
pub fn product_deformation_demo(
    scene: &ProductScene,
    f: &BranchDeformation,
    radius: f64,
    resolution: usize,
    tolerance: f64,
) -> Result<ProductDemoReport, ExperimentError> {
    f.validate(scene)?;
    if radius <= 0.0 || resolution == 0 {
        return Err(ExperimentError::BadDeformation(
            "radius and resolution must be positive".into(),
        ));
    }
    let (o1, o2) = (scene.y1.center, scene.y2.center);
    let len2 = radius + 2.0;
    // the branch of Y₁ inside B as an interval of distances from o₁
    let ball_interval = |arm: usize| -> Option<(f64, f64)> {
        let d = scene.y1.directions[arm];
        let q = [o1[0] - f.ball_center[0], o1[1] - f.ball_center[1]];
        let b = q[0] * d[0] + q[1] * d[1];
        let c = q[0] * q[0] + q[1] * q[1] - f.ball_radius * f.ball_radius;
        let disc = b * b - c;
        if disc <= 0.0 {
            return None;
        }
        let (lo, hi) = ((-b - disc.sqrt()).max(0.0), (-b + disc.sqrt()).min(1.0));
        (hi > lo).then_some((lo, hi))
    };
    let mut len_e1_ball = 0.0;
    let mut len_f_ball = 0.0;
    for arm in 0..3 {
        if let Some((lo, hi)) = ball_interval(arm) {
            len_e1_ball += hi - lo;
            len_f_ball += if arm == f.arm {
                // f is increasing and maps the ball's interval into itself
                f.tau(hi) - f.tau(lo)
            } else {
                hi - lo
            };
        }
    }
    let c = len_e1_ball - len_f_ball;
    let len_e2_ball = 3.0 * radius;
    let len_e2_ramp = 3.0;

    let phi = |arm: usize, t: f64, k: usize, s: f64| -> Vec4 {
        let d1 = scene.y1.directions[arm];
        let d2 = scene.y2.directions[k];
        let t2 = if arm == f.arm { f.tau(t) } else { t };
        let shift = psi(s, radius) * (t2 - t);
        Vec4::new(
            o1[0] + (t + shift) * d1[0],
            o1[1] + (t + shift) * d1[1],
            o2[0] + s * d2[0],
            o2[1] + s * d2[1],
        )
    };
    let mut area_before = 0.0;
    let mut area_after = 0.0;
    let mut ramp_area = 0.0;
    let mut ramp_source = 0.0;
    let mut lipschitz = 0.0_f64;
    let ts_knots_s = sorted_knots(
        (0..=(resolution as f64 * len2).ceil() as usize)
            .map(|i| (i as f64 / resolution as f64).min(len2))
            .chain([radius, radius + 1.0, len2])
            .collect(),
    );
    for arm in 0..3 {
        let Some((lo, hi)) = ball_interval(arm) else {
            continue;
        };
        let mut tk: Vec<f64> = (0..=resolution)
            .map(|i| i as f64 / resolution as f64)
            .collect();
        tk.extend([lo, hi]);
        if arm == f.arm {
            tk.extend(f.knots.iter().map(|&(t, _)| t));
        }
        let tk: Vec<f64> = sorted_knots(tk)
            .into_iter()
            .filter(|&t| t >= lo - 1e-12 && t <= hi + 1e-12)
            .collect();
        for k in 0..3 {
            for w in tk.windows(2) {
                for v in ts_knots_s.windows(2) {
                    let (t0, t1, s0, s1) = (w[0], w[1], v[0], v[1]);
                    let sm = 0.5 * (s0 + s1);
                    let cell = (t1 - t0) * (s1 - s0);
                    let corners = [
                        phi(arm, t0, k, s0),
                        phi(arm, t1, k, s0),
                        phi(arm, t1, k, s1),
                        phi(arm, t0, k, s1),
                    ];
                    let image =
                        crate::homology::triangle_area(&corners[0], &corners[1], &corners[2])
                            + crate::homology::triangle_area(&corners[0], &corners[2], &corners[3]);
                    for (a, b, cc) in [(0, 1, 2), (0, 2, 3)] {
                        let (p, q, r) = (corners[a], corners[b], corners[cc]);
                        // legs along t and s for the two halves
                        let (dt, ds) = if (a, b, cc) == (0, 1, 2) {
                            ((q - p) * (1.0 / (t1 - t0)), (r - q) * (1.0 / (s1 - s0)))
                        } else {
                            ((q - r) * (1.0 / (t1 - t0)), (r - p) * (1.0 / (s1 - s0)))
                        };
                        lipschitz = lipschitz.max(max_singular(&dt, &ds));
                    }
                    if sm < radius {
                        area_before += cell;
                        area_after += image;
                    } else if sm < radius + 1.0 {
                        ramp_area += image;
                        ramp_source += cell;
                    }
                }
            }
        }
    }
    let predicted = area_before - c * len_e2_ball;
    let relative_error = if predicted.abs() > 0.0 {
        (area_after - predicted).abs() / predicted.abs()
    } else {
        (area_after - predicted).abs()
    };
    let ramp_bound = lipschitz * lipschitz * len_e1_ball * len_e2_ramp;
    debug_assert!((ramp_source - len_e1_ball * len_e2_ramp).abs() < 1e-9);
    Ok(ProductDemoReport {
        radius,
        resolution,
        c,
        area_before,
        area_after,
        predicted,
        relative_error,
        ramp_area,
        lipschitz,
        ramp_bound,
        ramp_share: if area_before > 0.0 {
            ramp_area / area_before
        } else {
            0.0
        },
        identity_holds: relative_error <= tolerance,
        ramp_holds: ramp_area <= ramp_bound * (1.0 + 1e-12),
    })
}

/// Operator norm of the 4×2 matrix with columns `a`, `b`.
fn max_singular(a: &Vec4, b: &Vec4) -> f64 {
    let (p, q, r) = (a.dot(a), b.dot(b), a.dot(b));
    let tr = 0.5 * (p + q);
    let det = p * q - r * r;
    (tr + (tr * tr - det).max(0.0).sqrt()).sqrt()
}

/// Default ball for the demo: centered on the first branch of `Y₁` at
/// distance 0.8 with radius 0.3, so it contains the branch tip.
pub fn demo_ball(scene: &ProductScene) -> (Point2, f64) {
    let d = scene.y1.directions[0];
    let o = scene.y1.center;
    ([o[0] + 0.8 * d[0], o[1] + 0.8 * d[1]], 0.3)
}

/// Checks that a chain is a fill of `gamma`.
pub fn is_fill(
    k: &SimplicialComplex,
    chain: &ChainZ2,
    gamma: &ChainZ2,
) -> Result<bool, ExperimentError> {
    Ok(k.boundary(chain)? == *gamma)
}

/// Elimination fill, or [`ExperimentError::NotNullhomologous`].
pub fn elimination_fill(
    k: &SimplicialComplex,
    gamma: &ChainZ2,
) -> Result<ChainZ2, ExperimentError> {
    solve_boundary(k, gamma).map_err(|e| match e {
        HomologyError::NotABoundary => ExperimentError::NotNullhomologous,
        e => e.into(),
    })
}
