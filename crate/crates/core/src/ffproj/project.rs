//! Radial projections, center selection and the staged projection of a PL
//! surface onto the 2-skeleton.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::cell::ConvexCell;
use super::complex::{CellId, PolyComplex};
use super::polygon::{convex_order, coverage, Polygon, P2};
use super::FfError;
use crate::exterior::Vec4;
use crate::homology::{ChainZ2, SimplicialComplex};

/// Relative area below which a piece is treated as empty.
const AREA_EPS: f64 = 1e-14;

/// Tuning of [`ff_project`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FfOptions {
    /// Candidate centers per cell.
    pub trials: usize,
    pub seed: u64,
    /// Relative geometric tolerance (incidence, coverage).
    pub tol: f64,
}

impl Default for FfOptions {
    fn default() -> Self {
        Self {
            trials: 32,
            seed: 0,
            tol: 1e-9,
        }
    }
}

/// Projects pieces lying in `cell` radially from `center` onto `∂cell`.
/// Each piece is split by the regions where a given facet is hit first and
/// every part is mapped by the corresponding projective map, so the output
/// is exact. Returns `(facet index, image)` pairs with nonzero area.
pub fn radial_project(
    cell: &ConvexCell,
    center: &Vec4,
    pieces: &[Polygon],
    tol: f64,
) -> Result<Vec<(usize, Polygon)>, FfError> {
    let scale = cell.diameter.max(1e-300);
    let heights: Vec<f64> = cell.facets.iter().map(|f| -f.eval(center)).collect();
    if heights.iter().any(|&h| h <= tol * scale) || cell.hull_distance(center) > tol * scale {
        return Err(FfError::CenterNotInterior);
    }
    for p in pieces {
        if p.distance_to(center) <= tol * scale {
            return Err(FfError::CenterOnSet);
        }
    }
    let mut out = Vec::new();
    for piece in pieces {
        for (i, fi) in cell.facets.iter().enumerate() {
            let mut region = piece.clone();
            for (k, fk) in cell.facets.iter().enumerate() {
                if k == i || region.vertices().len() < 3 {
                    continue;
                }
                // facet i is reached no later than facet k
                let n = fk.normal * (1.0 / heights[k]) - fi.normal * (1.0 / heights[i]);
                let len = n.norm();
                if len == 0.0 {
                    continue;
                }
                let n = n * (1.0 / len);
                region = region.clip(&n, n.dot(center), tol * scale);
            }
            if region.vertices().len() < 3 {
                continue;
            }
            let image = Polygon(
                region
                    .vertices()
                    .iter()
                    .map(|y| {
                        let d = *y - *center;
                        let s = fi.normal.dot(&d);
                        let z = *center + d * (heights[i] / s);
                        // land exactly on the facet hyperplane
                        z - fi.normal * fi.eval(&z)
                    })
                    .collect(),
            )
            .dedup(tol * scale);
            if image.area() > AREA_EPS * scale * scale {
                out.push((i, image));
            }
        }
    }
    Ok(out)
}

fn total_area(pieces: &[Polygon]) -> f64 {
    pieces.iter().map(Polygon::area).sum()
}

/// Result of [`choose_center`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterChoice {
    pub center: Vec4,
    /// Projected area from the chosen center.
    pub area: f64,
    /// Largest projected area among the valid candidates.
    pub worst_area: f64,
    pub valid_candidates: usize,
}

/// Best of `trials` random interior centers (uniform Dirichlet weights on
/// the vertices) that stay off the pieces, by projected area.
pub fn choose_center(
    cell: &ConvexCell,
    pieces: &[Polygon],
    trials: usize,
    rng: &mut ChaCha8Rng,
    tol: f64,
) -> Result<CenterChoice, FfError> {
    if pieces.is_empty() {
        return Ok(CenterChoice {
            center: cell.centroid(),
            area: 0.0,
            worst_area: 0.0,
            valid_candidates: 0,
        });
    }
    let mut best: Option<CenterChoice> = None;
    let mut worst = 0.0_f64;
    let mut valid = 0;
    for _ in 0..trials.max(1) {
        let c = cell.sample_interior(rng);
        let Ok(images) = radial_project(cell, &c, pieces, tol) else {
            continue;
        };
        valid += 1;
        let area: f64 = images.iter().map(|(_, p)| p.area()).sum();
        worst = worst.max(area);
        if best.is_none_or(|b| area < b.area) {
            best = Some(CenterChoice {
                center: c,
                area,
                worst_area: 0.0,
                valid_candidates: 0,
            });
        }
    }
    let mut b = best.ok_or(FfError::NoValidCenter)?;
    b.worst_area = worst;
    b.valid_candidates = valid;
    Ok(b)
}

/// Phase of the projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Stage {
    /// Radial projection out of cells of the given dimension.
    Radial(usize),
    Erosion,
}

impl Stage {
    pub fn label(&self) -> String {
        match self {
            Stage::Radial(d) => format!("{}->{}", d, d - 1),
            Stage::Erosion => "erosion".to_string(),
        }
    }
}

/// One processed cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    pub stage: Stage,
    pub cell: CellId,
    pub roundness: f64,
    pub center: [f64; 4],
    pub area_in: f64,
    pub area_out: f64,
    pub ratio: f64,
    /// Erosion only: whether the face was kept.
    pub kept: Option<bool>,
}

/// Record of a full projection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectionTrace {
    pub entries: Vec<TraceEntry>,
    pub input_area: f64,
    pub output_area: f64,
    /// `output_area / input_area`.
    pub composite_ratio: f64,
    /// Smallest roundness over the complex.
    pub min_roundness: f64,
    /// `max ratio·R(cell)⁴` over the radial stages.
    pub k_emp: f64,
    /// `composite_ratio·R(K)⁸`.
    pub k1_emp: f64,
    /// Largest erosion ratio.
    pub max_erosion_ratio: f64,
}

impl ProjectionTrace {
    pub fn stage(&self, stage: Stage) -> impl Iterator<Item = &TraceEntry> {
        self.entries.iter().filter(move |e| e.stage == stage)
    }

    /// `stage,cell_dim,cell,roundness,c0,c1,c2,c3,area_in,area_out,ratio`.
    pub fn to_csv(&self) -> String {
        let mut s =
            String::from("stage,cell_dim,cell,roundness,c0,c1,c2,c3,area_in,area_out,ratio\n");
        for e in &self.entries {
            s.push_str(&format!(
                "{},{},{},{:.12},{:.12},{:.12},{:.12},{:.12},{:.12},{:.12},{:.12}\n",
                e.stage.label(),
                e.cell.0,
                e.cell.1,
                e.roundness,
                e.center[0],
                e.center[1],
                e.center[2],
                e.center[3],
                e.area_in,
                e.area_out,
                e.ratio
            ));
        }
        s
    }
}

/// Output of [`ff_project`].
#[derive(Debug, Clone)]
pub struct FfResult {
    /// 2-cells forming the image.
    pub kept: Vec<CellId>,
    pub trace: ProjectionTrace,
    /// Every 2-face met by the image in its interior is entirely covered,
    /// verified independently after erosion.
    pub full_face: bool,
}

impl FfResult {
    /// The kept faces as a 2-chain of the simplicial complex the cell
    /// complex was built from.
    pub fn kept_chain(
        &self,
        poly: &PolyComplex,
        k: &SimplicialComplex,
    ) -> Result<ChainZ2, FfError> {
        let tuples: Vec<&[usize]> = self
            .kept
            .iter()
            .map(|&id| poly.cell(id).vertices.as_slice())
            .collect();
        Ok(k.chain_from_tuples(2, tuples)?)
    }
}

/// Minimal face of `cell` containing `piece`, as a complex cell id.
fn support_face(k: &PolyComplex, cell_id: CellId, piece: &Polygon, tol: f64) -> CellId {
    let cell = k.cell(cell_id);
    let mut ids: Option<Vec<usize>> = None;
    for f in &cell.facets {
        if piece.vertices().iter().all(|p| f.eval(p).abs() <= tol) {
            ids = Some(match ids {
                None => f.vertices.clone(),
                Some(cur) => cur.into_iter().filter(|v| f.vertices.contains(v)).collect(),
            });
        }
    }
    match ids {
        None => cell_id,
        Some(v) => k.find(&v).unwrap_or(cell_id),
    }
}

fn bbox_overlap(a: &([f64; 4], [f64; 4]), b: &([f64; 4], [f64; 4]), tol: f64) -> bool {
    (0..4).all(|i| a.0[i] <= b.1[i] + tol && b.0[i] <= a.1[i] + tol)
}

/// Maps a PL surface `E ⊂ |K|` onto a union of 2-faces of `K`: radial
/// projections out of the 4-cells, then out of the 3-cells, then erosion of
/// partially covered 2-faces from an uncovered point.
pub fn ff_project(k: &PolyComplex, e: &[Polygon], opts: &FfOptions) -> Result<FfResult, FfError> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let input_area = total_area(e);
    let mut pieces: BTreeMap<CellId, Vec<Polygon>> = BTreeMap::new();
    let e_boxes: Vec<_> = e.iter().map(Polygon::bounding_box).collect();
    let mut distributed = 0.0;
    for &m in k.maximal_cells() {
        let cell = k.cell(m);
        if cell.dim < 2 {
            continue;
        }
        let tol = opts.tol * cell.diameter;
        let cbox = Polygon(cell.points.clone()).bounding_box();
        for (poly, pbox) in e.iter().zip(&e_boxes) {
            if !bbox_overlap(&cbox, pbox, tol) {
                continue;
            }
            if cell.dim < 4 && poly.vertices().iter().any(|p| cell.hull_distance(p) > tol) {
                continue;
            }
            let mut piece = poly.clone();
            for f in &cell.facets {
                piece = piece.clip(&f.normal, f.offset, tol);
                if piece.vertices().len() < 3 {
                    break;
                }
            }
            if piece.area() <= AREA_EPS * cell.diameter * cell.diameter {
                continue;
            }
            let face = support_face(k, m, &piece, tol);
            if face != m && k.owner(face) != m {
                continue;
            }
            distributed += piece.area();
            pieces.entry(face).or_default().push(piece);
        }
    }
    if (distributed - input_area).abs() > 1e-9 * input_area.max(1.0) {
        return Err(FfError::OutsideComplex {
            input: input_area,
            inside: distributed,
        });
    }

    let mut entries = Vec::new();
    let mut k_emp = 0.0_f64;
    for d in (3..=k.dim()).rev() {
        let cells: Vec<CellId> = pieces.keys().copied().filter(|c| c.0 == d).collect();
        for c in cells {
            let list = pieces.remove(&c).expect("key listed");
            let cell = k.cell(c);
            let tol = opts.tol * cell.diameter;
            let choice = choose_center(cell, &list, opts.trials, &mut rng, opts.tol)?;
            let images = radial_project(cell, &choice.center, &list, opts.tol)?;
            let area_in = total_area(&list);
            let mut area_out = 0.0;
            for (_, img) in images {
                let face = support_face(k, c, &img, tol);
                if face.0 < 2 || face == c {
                    continue;
                }
                area_out += img.area();
                pieces.entry(face).or_default().push(img);
            }
            let roundness = k.roundness(c);
            let ratio = if area_in > 0.0 {
                area_out / area_in
            } else {
                0.0
            };
            k_emp = k_emp.max(ratio * roundness.powi(2 * 2));
            entries.push(TraceEntry {
                stage: Stage::Radial(d),
                cell: c,
                roundness,
                center: choice.center.0,
                area_in,
                area_out,
                ratio,
                kept: None,
            });
        }
    }

    let mut kept = Vec::new();
    let mut full_face = true;
    let mut output_area = 0.0;
    let mut max_erosion_ratio = 0.0_f64;
    let faces: Vec<CellId> = pieces.keys().copied().filter(|c| c.0 == 2).collect();
    for c in faces {
        let list = &pieces[&c];
        let cell = k.cell(c);
        let to2 = |p: &Vec4| -> P2 {
            let x = cell.local(p);
            [x[0], x[1]]
        };
        let region = convex_order(&cell.points.iter().map(to2).collect::<Vec<_>>());
        let local: Vec<Vec<P2>> = list
            .iter()
            .map(|p| p.vertices().iter().map(to2).collect())
            .collect();
        let cov = coverage(&region, &local, opts.tol * cell.diameter);
        let face_area = cell.volume();
        let area_in = total_area(list);
        let covered = cov.union_area >= face_area * (1.0 - opts.tol);
        let (center, area_out) = if covered {
            kept.push(c);
            (cell.centroid(), face_area)
        } else {
            let g = cov.gap_point.ok_or(FfError::Degenerate(format!(
                "face {c:?} is partly covered but no gap was located"
            )))?;
            let x = cell.from_local(&g);
            // the image of the cleaning projection must be 1-dimensional
            let images = radial_project(cell, &x, list, opts.tol * 1e-3)?;
            if images.iter().any(|(_, p)| p.area() > 0.0) {
                full_face = false;
            }
            (x, 0.0)
        };
        if covered && cov.union_area < face_area * (1.0 - opts.tol) {
            full_face = false;
        }
        output_area += area_out;
        let ratio = if area_in > 0.0 {
            area_out / area_in
        } else {
            0.0
        };
        max_erosion_ratio = max_erosion_ratio.max(ratio);
        entries.push(TraceEntry {
            stage: Stage::Erosion,
            cell: c,
            roundness: k.roundness(c),
            center: center.0,
            area_in,
            area_out,
            ratio,
            kept: Some(covered),
        });
    }
    let min_roundness = k.min_roundness();
    let composite_ratio = if input_area > 0.0 {
        output_area / input_area
    } else {
        0.0
    };
    Ok(FfResult {
        kept,
        trace: ProjectionTrace {
            entries,
            input_area,
            output_area,
            composite_ratio,
            min_roundness,
            k_emp,
            k1_emp: composite_ratio * min_roundness.powi(8),
            max_erosion_ratio,
        },
        full_face,
    })
}
