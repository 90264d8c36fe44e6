//! The spherical net `K = Y×Y ∩ S³`, stereographic projection, the
//! coplanarity of triple junctions and the half-plane frame equations.

use std::f64::consts::FRAC_PI_2;

use nalgebra::Matrix4;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::exterior::Vec4;
use crate::geometry::ProductScene;

pub type Vec3 = [f64; 3];

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum ConeError {
    #[error("projection of the pole itself")]
    PoleInput,
    #[error("bad incidence: {0}")]
    BadIncidence(String),
    #[error("f has no sign change on (0, 1/t3²] for t2 = {t2}, t3 = {t3}")]
    NoRoot { t2: f64, t3: f64 },
    #[error("(t2, t3) = ({t2}, {t3}) is not normalized to 0 < t2 <= t3")]
    NotNormalized { t2: f64, t3: f64 },
    #[error("no unit frame v1 + t2·v2 + t3·v3 = 0 for t2 = {t2}, t3 = {t3}")]
    NoFrame { t2: f64, t3: f64 },
    #[error("frames differ in (w, v, t)")]
    FrameMismatch,
    #[error("angles {a:?} and {b:?} are neither equal nor opposite")]
    DichotomyViolation { a: [f64; 3], b: [f64; 3] },
}

/// A quarter great-circle arc `cos s·x + sin s·y`, `s ∈ [0, π/2]`, from the
/// node `x_i = (a_i, 0)` to the node `y_j = (0, b_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Arc {
    pub i: usize,
    pub j: usize,
    pub from: Vec4,
    pub to: Vec4,
}

impl Arc {
    pub fn point(&self, s: f64) -> Vec4 {
        self.from * s.cos() + self.to * s.sin()
    }

    /// Unit tangent at parameter `s`.
    pub fn tangent(&self, s: f64) -> Vec4 {
        self.to * s.cos() - self.from * s.sin()
    }

    pub fn length(&self) -> f64 {
        self.from.dot(&self.to).clamp(-1.0, 1.0).acos()
    }
}

/// Nodes `x_0..x_2, y_0..y_2` and the nine arcs `K_ij`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphericalNet {
    pub nodes: [Vec4; 6],
    pub arcs: Vec<Arc>,
}

/// Residuals of the net's structural checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NetCheck {
    pub sphere_residual: f64,
    pub great_circle_residual: f64,
    /// Largest deviation of a junction angle from 120°, radians.
    pub angle_error: f64,
    pub arc_length_error: f64,
    pub degrees_ok: bool,
    pub bipartite_ok: bool,
}

impl NetCheck {
    pub fn holds(&self) -> bool {
        self.sphere_residual < 1e-12
            && self.great_circle_residual < 1e-12
            && self.angle_error < 1e-9
            && self.arc_length_error < 1e-12
            && self.degrees_ok
            && self.bipartite_ok
    }
}

pub fn build_net(scene: &ProductScene) -> SphericalNet {
    let unit = |p: [f64; 2], o: [f64; 2]| {
        let d = [p[0] - o[0], p[1] - o[1]];
        let n = (d[0] * d[0] + d[1] * d[1]).sqrt();
        [d[0] / n, d[1] / n]
    };
    let xs: [Vec4; 3] =
        std::array::from_fn(|i| Vec4::from_first(unit(scene.y1.endpoints[i], scene.y1.center)));
    let ys: [Vec4; 3] =
        std::array::from_fn(|j| Vec4::from_second(unit(scene.y2.endpoints[j], scene.y2.center)));
    let arcs = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| Arc {
            i,
            j,
            from: xs[i],
            to: ys[j],
        })
        .collect();
    SphericalNet {
        nodes: [xs[0], xs[1], xs[2], ys[0], ys[1], ys[2]],
        arcs,
    }
}

impl SphericalNet {
    /// Outgoing unit tangents of the arcs at node `n` (0..3 are `x_i`,
    /// 3..6 are `y_j`).
    pub fn tangents_at(&self, n: usize) -> Vec<Vec4> {
        self.arcs
            .iter()
            .filter_map(|a| {
                if n < 3 && a.i == n {
                    Some(a.tangent(0.0))
                } else if n >= 3 && a.j == n - 3 {
                    Some(-a.tangent(a.length()))
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn check(&self) -> NetCheck {
        let mut sphere: f64 = 0.0;
        let mut circle: f64 = 0.0;
        let mut length: f64 = 0.0;
        for a in &self.arcs {
            length = length.max((a.length() - FRAC_PI_2).abs());
            for k in 0..=16 {
                let s = FRAC_PI_2 * k as f64 / 16.0;
                let p = a.point(s);
                sphere = sphere.max((p.norm() - 1.0).abs());
                // distance from the plane spanned by the endpoints
                let c1 = p.dot(&a.from);
                let c2 = p.dot(&a.to);
                circle = circle.max((p - a.from * c1 - a.to * c2).norm());
            }
        }
        for n in &self.nodes {
            sphere = sphere.max((n.norm() - 1.0).abs());
        }
        let mut angle: f64 = 0.0;
        let mut degrees_ok = true;
        for n in 0..6 {
            let t = self.tangents_at(n);
            if t.len() != 3 {
                degrees_ok = false;
                continue;
            }
            for p in 0..3 {
                for q in p + 1..3 {
                    let c = t[p].dot(&t[q]) / (t[p].norm() * t[q].norm());
                    angle = angle
                        .max((c.clamp(-1.0, 1.0).acos() - 2.0 * std::f64::consts::FRAC_PI_3).abs());
                }
            }
        }
        let mut pairs: Vec<(usize, usize)> = self.arcs.iter().map(|a| (a.i, a.j)).collect();
        pairs.sort_unstable();
        pairs.dedup();
        NetCheck {
            sphere_residual: sphere,
            great_circle_residual: circle,
            angle_error: angle,
            arc_length_error: length,
            degrees_ok,
            bipartite_ok: pairs.len() == 9 && self.arcs.len() == 9,
        }
    }
}

/// Orthonormal basis of the complement of a unit vector, by Gram–Schmidt
/// on the standard basis.
fn complement_basis(n: &Vec4) -> [Vec4; 3] {
    let mut out: Vec<Vec4> = Vec::with_capacity(3);
    for k in 0..4 {
        let mut e = Vec4::basis(k) - *n * n.0[k];
        for b in &out {
            e = e - *b * b.dot(&e);
        }
        if e.norm() > 0.5 && out.len() < 3 {
            out.push(e * (1.0 / e.norm()));
        }
    }
    [out[0], out[1], out[2]]
}

/// Projection from `pole` onto the tangent hyperplane at `−pole`, in an
/// orthonormal frame of that hyperplane centered at `−pole`.
pub fn stereographic(p: &Vec4, pole: &Vec4) -> Result<Vec3, ConeError> {
    if (*p - *pole).norm() < 1e-12 {
        return Err(ConeError::PoleInput);
    }
    let s = 2.0 / (1.0 - p.dot(pole));
    let q = *pole * 2.0 + (*p - *pole) * s;
    let b = complement_basis(pole);
    Ok([q.dot(&b[0]), q.dot(&b[1]), q.dot(&b[2])])
}

fn sub3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot3(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm3(a: Vec3) -> f64 {
    dot3(a, a).sqrt()
}

/// Largest distance of the images of sampled points of the great circle
/// through `pole` with tangent `tau` from the line through the origin.
pub fn great_circle_line_residual(
    pole: &Vec4,
    tau: &Vec4,
    samples: usize,
) -> Result<f64, ConeError> {
    let pts: Vec<Vec3> = (1..samples)
        .map(|k| {
            let s = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
            stereographic(&(*pole * s.cos() + *tau * s.sin()), pole)
        })
        .collect::<Result<_, _>>()?;
    let d = pts
        .iter()
        .copied()
        .max_by(|a, b| norm3(*a).total_cmp(&norm3(*b)))
        .unwrap_or([1.0, 0.0, 0.0]);
    let dn = norm3(d);
    Ok(pts
        .iter()
        .map(|p| {
            let along = dot3(*p, d) / (dn * dn);
            norm3(std::array::from_fn(|k| p[k] - along * d[k])) / norm3(*p).max(1.0)
        })
        .fold(0.0, f64::max))
}

/// Difference between the angle of two tangents at `p` and the angle of
/// their stereographic images, by central differences along great circles.
pub fn conformality_error(p: &Vec4, t1: &Vec4, t2: &Vec4, pole: &Vec4) -> Result<f64, ConeError> {
    let h: f64 = 1e-5;
    let image_tangent = |t: &Vec4| -> Result<Vec3, ConeError> {
        let a = stereographic(&(*p * h.cos() + *t * h.sin()), pole)?;
        let b = stereographic(&(*p * h.cos() - *t * h.sin()), pole)?;
        Ok(sub3(a, b))
    };
    let (a, b) = (image_tangent(t1)?, image_tangent(t2)?);
    let before = (t1.dot(t2) / (t1.norm() * t2.norm()))
        .clamp(-1.0, 1.0)
        .acos();
    let after = (dot3(a, b) / (norm3(a) * norm3(b))).clamp(-1.0, 1.0).acos();
    Ok((before - after).abs())
}

/// Random unit tangent to `S³` at `p`.
pub fn random_tangent(p: &Vec4, rng: &mut ChaCha8Rng) -> Vec4 {
    loop {
        let g = Vec4(std::array::from_fn(|_| rng.sample(StandardNormal)));
        let t = g - *p * g.dot(p);
        let n = t.norm();
        if n > 1e-6 {
            return t * (1.0 / n);
        }
    }
}

/// Largest conformality error over `count` random points of the net, each
/// paired with its arc tangent and a random tangent, projected from `pole`.
pub fn net_conformality(
    net: &SphericalNet,
    pole: usize,
    count: usize,
    seed: u64,
) -> Result<f64, ConeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pole_p = net.nodes[pole];
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < count {
        let a = net.arcs[rng.random_range(0..net.arcs.len())];
        let s = rng.random_range(0.05..FRAC_PI_2 - 0.05);
        let p = a.point(s);
        if (p - pole_p).norm() < 0.1 {
            continue;
        }
        let t2 = random_tangent(&p, &mut rng);
        worst = worst.max(conformality_error(&p, &a.tangent(s), &t2, &pole_p)?);
        done += 1;
    }
    Ok(worst)
}

/// Rank test of `{node, t₁, t₂, t₃}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coplanarity {
    pub singular_values: [f64; 4],
    pub rank: usize,
    /// Rank exactly 3: the arcs lie in one great 2-sphere.
    pub coplanar: bool,
}

/// Whether three arcs leaving `node` with the given tangents lie in one
/// great 2-sphere. Tangents must be nonzero and orthogonal to the unit
/// vector `node`.
pub fn coplanarity_check(
    node: &Vec4,
    tangents: &[Vec4; 3],
    tol: f64,
) -> Result<Coplanarity, ConeError> {
    if (node.norm() - 1.0).abs() > 1e-9 {
        return Err(ConeError::BadIncidence(
            "node is not on the unit sphere".into(),
        ));
    }
    for t in tangents {
        if t.norm() < 1e-12 || (t.dot(node) / t.norm()).abs() > 1e-9 {
            return Err(ConeError::BadIncidence(
                "tangent is not tangent at the node".into(),
            ));
        }
    }
    let cols = [
        *node,
        tangents[0] * (1.0 / tangents[0].norm()),
        tangents[1] * (1.0 / tangents[1].norm()),
        tangents[2] * (1.0 / tangents[2].norm()),
    ];
    let m = Matrix4::from_fn(|r, c| cols[c].0[r]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let rank = sv.iter().filter(|&&s| s > tol * sv[0]).count();
    Ok(Coplanarity {
        singular_values: [sv[0], sv[1], sv[2], sv[3]],
        rank,
        coplanar: rank == 3,
    })
}

/// `f(u) = √(1−u) − √(1−u·t2²) − √(1−u·t3²)`.
pub fn frame_f(u: f64, t2: f64, t3: f64) -> f64 {
    (1.0 - u).max(0.0).sqrt()
        - (1.0 - u * t2 * t2).max(0.0).sqrt()
        - (1.0 - u * t3 * t3).max(0.0).sqrt()
}

/// Derivative of [`frame_f`] on the open domain.
pub fn frame_f_prime(u: f64, t2: f64, t3: f64) -> f64 {
    0.5 * (-1.0 / (1.0 - u).sqrt()
        + t2 * t2 / (1.0 - u * t2 * t2).sqrt()
        + t3 * t3 / (1.0 - u * t3 * t3).sqrt())
}

/// Left end of the root bracket.
pub const BRACKET_EPS: f64 = 1e-14;

/// Root `u₀` of [`frame_f`] and both angle triples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameSolution {
    pub t2: f64,
    pub t3: f64,
    pub u0: f64,
    pub residual: f64,
    /// `(arcsin√(1−u₀), −arcsin√(1−u₀t2²), −arcsin√(1−u₀t3²))`.
    pub theta_plus: [f64; 3],
    pub theta_minus: [f64; 3],
    /// `f′ > 0` at 1000 interior grid points.
    pub monotone: bool,
    pub min_derivative: f64,
}

/// Solves `f(u) = 0` on `(ε, 1/t3²]` by bisection. Requires the
/// normalization `0 < t2 ≤ t3`; `t2 < 1` leaves no sign change.
pub fn solve_frame(t2: f64, t3: f64) -> Result<FrameSolution, ConeError> {
    if !(t2.is_finite() && t3.is_finite()) || t2 <= 0.0 || t3 < t2 {
        return Err(ConeError::NotNormalized { t2, t3 });
    }
    let f = |u: f64| frame_f(u, t2, t3);
    let (mut lo, mut hi) = (BRACKET_EPS, 1.0 / (t3 * t3));
    let (flo, fhi) = (f(lo), f(hi));
    if flo >= 0.0 || fhi < 0.0 {
        return Err(ConeError::NoRoot { t2, t3 });
    }
    let u0 = if fhi == 0.0 {
        hi
    } else {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if f(hi).abs() <= f(lo).abs() {
            hi
        } else {
            lo
        }
    };
    let top = 1.0 / (t3 * t3);
    let min_derivative = (1..1000)
        .map(|k| frame_f_prime(top * k as f64 / 1000.0, t2, t3))
        .fold(f64::INFINITY, f64::min);
    let s = [
        (1.0 - u0).max(0.0).sqrt().asin(),
        (1.0 - u0 * t2 * t2).max(0.0).sqrt().asin(),
        (1.0 - u0 * t3 * t3).max(0.0).sqrt().asin(),
    ];
    // +0.0 keeps the zero triple free of negative zeros
    let theta_plus = [s[0], -s[1] + 0.0, -s[2] + 0.0];
    let theta_minus = [-s[0] + 0.0, s[1], s[2]];
    Ok(FrameSolution {
        t2,
        t3,
        u0,
        residual: f(u0).abs(),
        theta_plus,
        theta_minus,
        monotone: min_derivative > 0.0,
        min_derivative,
    })
}

/// `u₀ = 3/(4t²−1)` for `t2 = t3 = t`.
pub fn symmetric_root(t: f64) -> f64 {
    3.0 / (4.0 * t * t - 1.0)
}

/// Unit `w` and the half-plane directions `v_i ⊥ w` with
/// `v₁ + t2·v₂ + t3·v₃ = 0`, plus the angles `θ_i` of `q_i = cosθ_i·v_i + sinθ_i·w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfPlaneFrame {
    pub w: Vec3,
    pub v: [Vec3; 3],
    pub t2: f64,
    pub t3: f64,
    pub theta: [f64; 3],
}

impl HalfPlaneFrame {
    /// The frame with `w = e₃`, `v₁ = e₁` and `v₂` in the upper half plane.
    pub fn new(t2: f64, t3: f64, theta: [f64; 3]) -> Result<Self, ConeError> {
        let c = (t3 * t3 - 1.0 - t2 * t2) / (2.0 * t2);
        if !(-1.0..=1.0).contains(&c) {
            return Err(ConeError::NoFrame { t2, t3 });
        }
        let v1 = [1.0, 0.0, 0.0];
        let v2 = [c, (1.0 - c * c).max(0.0).sqrt(), 0.0];
        let v3 = [-(1.0 + t2 * v2[0]) / t3, -(t2 * v2[1]) / t3, 0.0];
        Ok(Self {
            w: [0.0, 0.0, 1.0],
            v: [v1, v2, v3],
            t2,
            t3,
            theta,
        })
    }

    pub fn q(&self, i: usize) -> Vec3 {
        let (c, s) = (self.theta[i].cos(), self.theta[i].sin());
        std::array::from_fn(|k| c * self.v[i][k] + s * self.w[k])
    }

    /// `(|Σ sinθ_i|, |Σ cosθ_i·v_i|, |Σ q_i|, max ||q_i| − 1|, |v₁+t2v₂+t3v₃|)`.
    pub fn residuals(&self) -> [f64; 5] {
        let sin_sum: f64 = self.theta.iter().map(|t| t.sin()).sum();
        let cos_sum: Vec3 =
            std::array::from_fn(|k| (0..3).map(|i| self.theta[i].cos() * self.v[i][k]).sum());
        let q_sum: Vec3 = std::array::from_fn(|k| (0..3).map(|i| self.q(i)[k]).sum());
        let unit = (0..3)
            .map(|i| (norm3(self.q(i)) - 1.0).abs())
            .fold(0.0, f64::max);
        let rel: Vec3 =
            std::array::from_fn(|k| self.v[0][k] + self.t2 * self.v[1][k] + self.t3 * self.v[2][k]);
        [
            sin_sum.abs(),
            norm3(cos_sum),
            norm3(q_sum),
            unit,
            norm3(rel),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Dichotomy {
    Parallel,
    Symmetric,
}

/// Classifies two frames over the same `(w, v, t)`; equal angles win ties.
pub fn frame_dichotomy(
    a: &HalfPlaneFrame,
    b: &HalfPlaneFrame,
    tol: f64,
) -> Result<Dichotomy, ConeError> {
    let close = |x: Vec3, y: Vec3| norm3(sub3(x, y)) <= 1e-12;
    if !(close(a.w, b.w)
        && (0..3).all(|i| close(a.v[i], b.v[i]))
        && (a.t2 - b.t2).abs() <= 1e-12
        && (a.t3 - b.t3).abs() <= 1e-12)
    {
        return Err(ConeError::FrameMismatch);
    }
    if (0..3).all(|i| (a.theta[i] - b.theta[i]).abs() <= tol) {
        Ok(Dichotomy::Parallel)
    } else if (0..3).all(|i| (a.theta[i] + b.theta[i]).abs() <= tol) {
        Ok(Dichotomy::Symmetric)
    } else {
        Err(ConeError::DichotomyViolation {
            a: a.theta,
            b: b.theta,
        })
    }
}

/// One classifier row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifierRow {
    pub solution: FrameSolution,
    pub dichotomy: Option<Dichotomy>,
    /// Largest frame residual over both triples.
    pub frame_residual: f64,
}

/// Solves and classifies one `(t2, t3)`.
pub fn classify(t2: f64, t3: f64) -> Result<ClassifierRow, ConeError> {
    let solution = solve_frame(t2, t3)?;
    let a = HalfPlaneFrame::new(t2, t3, solution.theta_plus)?;
    let b = HalfPlaneFrame::new(t2, t3, solution.theta_minus)?;
    let frame_residual = a
        .residuals()
        .into_iter()
        .chain(b.residuals())
        .fold(0.0, f64::max);
    Ok(ClassifierRow {
        solution,
        dichotomy: Some(frame_dichotomy(&a, &b, 1e-9)?),
        frame_residual,
    })
}
