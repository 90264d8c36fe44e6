//! Planar convex polygons embedded in R⁴, half-space clipping, and exact
//! union areas in a 2D chart.

use crate::exterior::Vec4;
use crate::homology::triangle_area;

/// Convex polygon with vertices in cyclic order, lying in a 2-plane of R⁴.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon(pub Vec<Vec4>);

impl Polygon {
    pub fn triangle(a: Vec4, b: Vec4, c: Vec4) -> Self {
        Polygon(vec![a, b, c])
    }

    pub fn vertices(&self) -> &[Vec4] {
        &self.0
    }

    pub fn area(&self) -> f64 {
        let p = &self.0;
        if p.len() < 3 {
            return 0.0;
        }
        (1..p.len() - 1)
            .map(|i| triangle_area(&p[0], &p[i], &p[i + 1]))
            .sum()
    }

    pub fn diameter(&self) -> f64 {
        let mut d = 0.0_f64;
        for (i, a) in self.0.iter().enumerate() {
            for b in &self.0[i + 1..] {
                d = d.max(a.distance(b));
            }
        }
        d
    }

    /// Fan triangulation.
    pub fn triangles(&self) -> Vec<[Vec4; 3]> {
        let p = &self.0;
        if p.len() < 3 {
            return Vec::new();
        }
        (1..p.len() - 1).map(|i| [p[0], p[i], p[i + 1]]).collect()
    }

    pub fn bounding_box(&self) -> ([f64; 4], [f64; 4]) {
        let mut lo = [f64::INFINITY; 4];
        let mut hi = [f64::NEG_INFINITY; 4];
        for p in &self.0 {
            for k in 0..4 {
                lo[k] = lo[k].min(p.0[k]);
                hi[k] = hi[k].max(p.0[k]);
            }
        }
        (lo, hi)
    }

    /// Keeps the part where `f(y) = normal·y − offset ≤ 0`. Values within
    /// `tol` of zero are snapped so that pieces on a face stay exactly on it.
    pub fn clip(&self, normal: &Vec4, offset: f64, tol: f64) -> Polygon {
        let n = self.0.len();
        if n == 0 {
            return Polygon(Vec::new());
        }
        let vals: Vec<f64> = self
            .0
            .iter()
            .map(|p| {
                let v = normal.dot(p) - offset;
                if v.abs() <= tol {
                    0.0
                } else {
                    v
                }
            })
            .collect();
        if vals.iter().all(|&v| v <= 0.0) {
            return self.clone();
        }
        if vals.iter().all(|&v| v >= 0.0) {
            return Polygon(Vec::new());
        }
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let (p, q) = (self.0[i], self.0[(i + 1) % n]);
            let (fp, fq) = (vals[i], vals[(i + 1) % n]);
            if fp <= 0.0 {
                out.push(p);
            }
            if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
                let t = fp / (fp - fq);
                out.push(p + (q - p) * t);
            }
        }
        Polygon(out).dedup(tol)
    }

    /// Removes consecutive vertices closer than `tol`.
    pub fn dedup(mut self, tol: f64) -> Polygon {
        let mut out: Vec<Vec4> = Vec::with_capacity(self.0.len());
        for p in self.0.drain(..) {
            if out.last().is_none_or(|q| q.distance(&p) > tol) {
                out.push(p);
            }
        }
        while out.len() > 1 && out[0].distance(out.last().expect("nonempty")) <= tol {
            out.pop();
        }
        Polygon(out)
    }

    /// Euclidean distance from `p` to the polygon.
    pub fn distance_to(&self, p: &Vec4) -> f64 {
        match self.0.len() {
            0 => f64::INFINITY,
            1 => self.0[0].distance(p),
            2 => segment_distance(&self.0[0], &self.0[1], p),
            _ => self
                .triangles()
                .iter()
                .map(|t| point_triangle_distance(p, t))
                .fold(f64::INFINITY, f64::min),
        }
    }
}

pub fn segment_distance(a: &Vec4, b: &Vec4, p: &Vec4) -> f64 {
    let d = *b - *a;
    let len2 = d.dot(&d);
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((*p - *a).dot(&d) / len2).clamp(0.0, 1.0)
    };
    (*a + d * t).distance(p)
}

/// Distance from `p` to the closed triangle `t` in R⁴.
pub fn point_triangle_distance(p: &Vec4, t: &[Vec4; 3]) -> f64 {
    let (e1, e2, r) = (t[1] - t[0], t[2] - t[0], *p - t[0]);
    let (a, b, c) = (e1.dot(&e1), e1.dot(&e2), e2.dot(&e2));
    let (d, e) = (e1.dot(&r), e2.dot(&r));
    let det = a * c - b * b;
    if det > 1e-300 {
        let s = (c * d - b * e) / det;
        let u = (a * e - b * d) / det;
        if s >= 0.0 && u >= 0.0 && s + u <= 1.0 {
            return (t[0] + e1 * s + e2 * u).distance(p);
        }
    }
    segment_distance(&t[0], &t[1], p)
        .min(segment_distance(&t[1], &t[2], p))
        .min(segment_distance(&t[2], &t[0], p))
}

pub type P2 = [f64; 2];

/// Area of a planar polygon (shoelace, absolute value).
pub fn area2d(p: &[P2]) -> f64 {
    if p.len() < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..p.len() {
        let (a, b) = (p[i], p[(i + 1) % p.len()]);
        s += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * s.abs()
}

/// Orders points of a convex set counter-clockwise around their centroid.
pub fn convex_order(points: &[P2]) -> Vec<P2> {
    let n = points.len() as f64;
    let c = points
        .iter()
        .fold([0.0, 0.0], |a, p| [a[0] + p[0] / n, a[1] + p[1] / n]);
    let mut out = points.to_vec();
    out.sort_by(|a, b| {
        let ta = (a[1] - c[1]).atan2(a[0] - c[0]);
        let tb = (b[1] - c[1]).atan2(b[0] - c[0]);
        ta.total_cmp(&tb)
    });
    out
}

fn cross_section(poly: &[P2], x: f64) -> Option<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        let (x0, x1) = (a[0].min(b[0]), a[0].max(b[0]));
        if x < x0 || x > x1 || x1 == x0 {
            continue;
        }
        let t = (x - a[0]) / (b[0] - a[0]);
        let y = a[1] + t * (b[1] - a[1]);
        lo = lo.min(y);
        hi = hi.max(y);
    }
    (lo <= hi).then_some((lo, hi))
}

fn segment_crossing_x(p: P2, q: P2, r: P2, s: P2) -> Option<f64> {
    let d1 = [q[0] - p[0], q[1] - p[1]];
    let d2 = [s[0] - r[0], s[1] - r[1]];
    let den = d1[0] * d2[1] - d1[1] * d2[0];
    if den.abs() < 1e-300 {
        return None;
    }
    let w = [r[0] - p[0], r[1] - p[1]];
    let t = (w[0] * d2[1] - w[1] * d2[0]) / den;
    let u = (w[0] * d1[1] - w[1] * d1[0]) / den;
    ((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u)).then(|| p[0] + t * d1[0])
}

/// Coverage of a convex region by a family of convex polygons inside it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coverage {
    pub region_area: f64,
    pub union_area: f64,
    /// Midpoint of the widest uncovered gap, if any gap is wider than `tol`.
    pub gap_point: Option<P2>,
    /// Width of that gap.
    pub gap_width: f64,
}

/// Exact area of `region ∩ ⋃ pieces` by a slab sweep: between consecutive
/// event abscissae (vertices and edge crossings) the union's cross-section
/// length is affine, so the midpoint rule is exact.
pub fn coverage(region: &[P2], pieces: &[Vec<P2>], tol: f64) -> Coverage {
    let mut xs: Vec<f64> = region.iter().map(|p| p[0]).collect();
    let mut edges: Vec<(P2, P2)> = Vec::new();
    for poly in std::iter::once(region).chain(pieces.iter().map(Vec::as_slice)) {
        for i in 0..poly.len() {
            xs.push(poly[i][0]);
            edges.push((poly[i], poly[(i + 1) % poly.len()]));
        }
    }
    for i in 0..edges.len() {
        for k in (i + 1)..edges.len() {
            if let Some(x) = segment_crossing_x(edges[i].0, edges[i].1, edges[k].0, edges[k].1) {
                xs.push(x);
            }
        }
    }
    let (rx0, rx1) = region
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
            (a.min(p[0]), b.max(p[0]))
        });
    xs.retain(|&x| x >= rx0 && x <= rx1);
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * (1.0 + b.abs()));
    let mut union_area = 0.0;
    let mut region_area = 0.0;
    let mut best_gap: Option<(f64, P2)> = None;
    for w in xs.windows(2) {
        let width = w[1] - w[0];
        if width <= 0.0 {
            continue;
        }
        let xm = 0.5 * (w[0] + w[1]);
        let Some((rlo, rhi)) = cross_section(region, xm) else {
            continue;
        };
        region_area += width * (rhi - rlo);
        let mut ivs: Vec<(f64, f64)> = pieces
            .iter()
            .filter_map(|p| cross_section(p, xm))
            .map(|(a, b)| (a.max(rlo), b.min(rhi)))
            .filter(|(a, b)| b > a)
            .collect();
        ivs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut covered = 0.0;
        let mut cursor = rlo;
        let mut consider_gap = |from: f64, to: f64| {
            let g = (to - from).min(width);
            if to - from > tol && width > tol && best_gap.is_none_or(|(bg, _)| g > bg) {
                best_gap = Some((g, [xm, 0.5 * (from + to)]));
            }
        };
        for (a, b) in ivs {
            if a > cursor {
                consider_gap(cursor, a);
            }
            if b > cursor {
                covered += b - a.max(cursor);
                cursor = b;
            }
        }
        if rhi > cursor {
            consider_gap(cursor, rhi);
        }
        union_area += width * covered;
    }
    Coverage {
        region_area,
        union_area,
        gap_point: best_gap.map(|(_, p)| p),
        gap_width: best_gap.map_or(0.0, |(g, _)| g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Vec<P2> {
        vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
    }

    #[test]
    fn clip_square_in_r4() {
        let sq = Polygon(
            unit_square()
                .iter()
                .map(|p| Vec4::new(p[0], p[1], 0.5, 0.0))
                .collect(),
        );
        assert!((sq.area() - 1.0).abs() < 1e-15);
        let half = sq.clip(&Vec4::basis(0), 0.5, 1e-12);
        assert!((half.area() - 0.5).abs() < 1e-15);
        let tri = sq.clip(&Vec4::new(1.0, 1.0, 0.0, 0.0), 1.0, 1e-12);
        assert_eq!(tri.vertices().len(), 3);
        assert!((tri.area() - 0.5).abs() < 1e-15);
        assert!(sq.clip(&Vec4::basis(2), 0.0, 1e-12).vertices().is_empty());
    }

    #[test]
    fn distances() {
        let t = [Vec4::ZERO, Vec4::basis(0), Vec4::basis(1)];
        assert!((point_triangle_distance(&Vec4::new(0.2, 0.2, 1.0, 0.0), &t) - 1.0).abs() < 1e-15);
        assert!((point_triangle_distance(&Vec4::new(-1.0, 0.0, 0.0, 0.0), &t) - 1.0).abs() < 1e-15);
        let p = Polygon(t.to_vec());
        assert_eq!(p.distance_to(&Vec4::new(0.1, 0.1, 0.0, 0.0)), 0.0);
    }

    #[test]
    fn union_of_overlapping_squares() {
        let a = vec![[0.0, 0.0], [0.6, 0.0], [0.6, 1.0], [0.0, 1.0]];
        let b = vec![[0.4, 0.0], [1.0, 0.0], [1.0, 1.0], [0.4, 1.0]];
        let c = coverage(&unit_square(), &[a.clone(), b], 1e-12);
        assert!((c.union_area - 1.0).abs() < 1e-14);
        assert!(c.gap_point.is_none());
        let c = coverage(&unit_square(), &[a], 1e-12);
        assert!((c.union_area - 0.6).abs() < 1e-14);
        let g = c.gap_point.unwrap();
        assert!(g[0] > 0.6 && g[0] < 1.0);
    }

    #[test]
    fn union_of_crossing_triangles() {
        let region = vec![[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]];
        let t1 = vec![[0.0, 0.0], [2.0, 0.0], [0.0, 1.0]];
        let t2 = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 2.0]];
        // inclusion–exclusion: each area 1, intersection is the quadrilateral
        // below both hypotenuses with area 2/3
        let c = coverage(&region, &[t1, t2], 1e-12);
        assert!(
            (c.union_area - (2.0 - 2.0 / 3.0)).abs() < 1e-13,
            "{}",
            c.union_area
        );
        assert!((c.region_area - 2.0).abs() < 1e-13);
    }

    #[test]
    fn area2d_and_order() {
        let sq = convex_order(&[[1.0, 1.0], [0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        assert!((area2d(&sq) - 1.0).abs() < 1e-15);
    }
}
