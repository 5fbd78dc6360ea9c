//! Planar convex geometry: hulls, tolerant membership, extreme points.
//!
//! Points are complex numbers; the x-axis is the real part. Tolerances are
//! scaled by the diameter of the point set, floored at one.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::ToleranceConfig;
use crate::linalg::Cplx;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConvexError {
    #[error("convex hull requires a nonempty point set")]
    EmptyInput,
}

/// How a convex point set degenerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Degeneracy {
    FullPolygon,
    Segment,
    Point,
}

/// Membership verdict for [`point_location`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    OnBoundary,
    Outside,
}

/// Convex polygon with counterclockwise vertices; segments and single points
/// are carried explicitly rather than as thin polygons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon2D {
    #[serde(with = "crate::report::cplx_seq")]
    vertices: Vec<Cplx>,
    degeneracy: Degeneracy,
    /// Diameter of the generating point set, floored at 1; fixes the length
    /// scale for every tolerant comparison against this polygon.
    scale: f64,
}

impl Polygon2D {
    pub fn vertices(&self) -> &[Cplx] {
        &self.vertices
    }

    pub fn degeneracy(&self) -> Degeneracy {
        self.degeneracy
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

fn cross(o: Cplx, a: Cplx, b: Cplx) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

fn lex_less(a: Cplx, b: Cplx) -> std::cmp::Ordering {
    a.re.partial_cmp(&b.re)
        .expect("finite coordinates")
        .then(a.im.partial_cmp(&b.im).expect("finite coordinates"))
}

/// Distance from `p` to the segment [a, b].
pub fn dist_to_segment(p: Cplx, a: Cplx, b: Cplx) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p.re - a.re) * ab.re + (p.im - a.im) * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    let proj = a + ab * t;
    (p - proj).norm()
}

/// Exact monotone-chain hull (strict corners only), counterclockwise.
fn exact_hull(points: &[Cplx]) -> Vec<Cplx> {
    let mut pts: Vec<Cplx> = points.to_vec();
    pts.sort_by(|a, b| lex_less(*a, *b));
    pts.dedup_by(|a, b| a.re == b.re && a.im == b.im);
    let n = pts.len();
    if n <= 2 {
        return pts;
    }
    let mut lower: Vec<Cplx> = Vec::with_capacity(n);
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Cplx> = Vec::with_capacity(n);
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Convex hull with tolerance `eps_hull` scaled by the diameter of the input
/// (floored at 1). Near-coincident points collapse to a point, near-collinear
/// input collapses to a segment.
///
/// The exact monotone chain already keeps only strictly convex corners, so no
/// further edge pruning happens here; the boundary therefore stays within one
/// tolerance band of the true hull of the input.
pub fn convex_hull(points: &[Cplx], cfg: &ToleranceConfig) -> Result<Polygon2D, ConvexError> {
    if points.is_empty() {
        return Err(ConvexError::EmptyInput);
    }
    let mut hull = exact_hull(points);
    // The diameter of a set equals the diameter of its hull vertices.
    let mut diameter = 0.0f64;
    let mut diam_pair = (hull[0], hull[0]);
    for i in 0..hull.len() {
        for j in (i + 1)..hull.len() {
            let d = (hull[i] - hull[j]).norm();
            if d > diameter {
                diameter = d;
                diam_pair = (hull[i], hull[j]);
            }
        }
    }
    let scale = diameter.max(1.0);
    let band = ToleranceConfig::tol(cfg.eps_hull, scale);

    // Everything within one band of a single point.
    if diameter <= band {
        let mut min = points[0];
        for &p in points {
            if lex_less(p, min) == std::cmp::Ordering::Less {
                min = p;
            }
        }
        return Ok(Polygon2D {
            vertices: vec![min],
            degeneracy: Degeneracy::Point,
            scale,
        });
    }

    // Everything within one band of the diameter segment.
    let flat = hull
        .iter()
        .all(|&v| dist_to_segment(v, diam_pair.0, diam_pair.1) <= band);
    if hull.len() == 2 || flat {
        let (a, b) = if hull.len() == 2 {
            (hull[0], hull[1])
        } else {
            diam_pair
        };
        let (a, b) = if lex_less(a, b) == std::cmp::Ordering::Less {
            (a, b)
        } else {
            (b, a)
        };
        return Ok(Polygon2D {
            vertices: vec![a, b],
            degeneracy: Degeneracy::Segment,
            scale,
        });
    }

    // Greedy merge of vertices within the band of the last kept one,
    // wrapping once around; the boundary moves by at most one band.
    let mut kept: Vec<Cplx> = Vec::with_capacity(hull.len());
    for &v in &hull {
        match kept.last() {
            Some(&last) if (v - last).norm() <= band => {}
            _ => kept.push(v),
        }
    }
    if kept.len() > 2 && (kept[0] - *kept.last().expect("nonempty")).norm() <= band {
        kept.pop();
    }
    hull = kept;
    if hull.len() == 2 {
        let (a, b) = if lex_less(hull[0], hull[1]) == std::cmp::Ordering::Less {
            (hull[0], hull[1])
        } else {
            (hull[1], hull[0])
        };
        return Ok(Polygon2D {
            vertices: vec![a, b],
            degeneracy: Degeneracy::Segment,
            scale,
        });
    }

    Ok(Polygon2D {
        vertices: hull,
        degeneracy: Degeneracy::FullPolygon,
        scale,
    })
}

/// Tolerant membership test. `OnBoundary` means within `eps_hull · scale` of
/// the boundary (on either side); `Inside` means strictly interior beyond
/// that band. Degenerate shapes only ever yield `OnBoundary` or `Outside`.
pub fn point_location(p: Cplx, poly: &Polygon2D, cfg: &ToleranceConfig) -> Location {
    let band = ToleranceConfig::tol(cfg.eps_hull, poly.scale);
    match poly.degeneracy {
        Degeneracy::Point => {
            if (p - poly.vertices[0]).norm() <= band {
                Location::OnBoundary
            } else {
                Location::Outside
            }
        }
        Degeneracy::Segment => {
            if dist_to_segment(p, poly.vertices[0], poly.vertices[1]) <= band {
                Location::OnBoundary
            } else {
                Location::Outside
            }
        }
        Degeneracy::FullPolygon => {
            if boundary_distance(p, poly) <= band {
                Location::OnBoundary
            } else if is_strictly_inside(p, poly) {
                Location::Inside
            } else {
                Location::Outside
            }
        }
    }
}

/// Distance from `p` to the boundary of the polygon (or to the set itself for
/// degenerate shapes).
pub fn boundary_distance(p: Cplx, poly: &Polygon2D) -> f64 {
    let v = &poly.vertices;
    match poly.degeneracy {
        Degeneracy::Point => (p - v[0]).norm(),
        Degeneracy::Segment => dist_to_segment(p, v[0], v[1]),
        Degeneracy::FullPolygon => {
            let m = v.len();
            let mut best = f64::INFINITY;
            for i in 0..m {
                best = best.min(dist_to_segment(p, v[i], v[(i + 1) % m]));
            }
            best
        }
    }
}

/// Signed distance to the hull: negative inside, positive outside, zero-ish on
/// the boundary. For degenerate shapes this is the plain distance to the set.
pub fn signed_distance(p: Cplx, poly: &Polygon2D) -> f64 {
    let d = boundary_distance(p, poly);
    if poly.degeneracy == Degeneracy::FullPolygon && is_strictly_inside(p, poly) {
        -d
    } else {
        d
    }
}

fn is_strictly_inside(p: Cplx, poly: &Polygon2D) -> bool {
    let v = &poly.vertices;
    let m = v.len();
    for i in 0..m {
        if cross(v[i], v[(i + 1) % m], p) <= 0.0 {
            return false;
        }
    }
    true
}

/// Distance from `p` to the polygon viewed as a convex body (zero inside).
pub fn body_distance(p: Cplx, poly: &Polygon2D) -> f64 {
    if poly.degeneracy == Degeneracy::FullPolygon && is_strictly_inside(p, poly) {
        0.0
    } else {
        boundary_distance(p, poly)
    }
}

/// Hausdorff distance between two convex bodies; the maximum over each
/// vertex set of the distance to the other body.
pub fn hausdorff_distance(a: &Polygon2D, b: &Polygon2D) -> f64 {
    let mut best = 0.0_f64;
    for &v in &a.vertices {
        best = best.max(body_distance(v, b));
    }
    for &v in &b.vertices {
        best = best.max(body_distance(v, a));
    }
    best
}

/// Vertices that survive collinear pruning: each kept vertex is farther than
/// `eps_hull · scale` from the segment joining its neighbours. Segments yield
/// their endpoints, points themselves.
pub fn extreme_points_of_polygon(poly: &Polygon2D, cfg: &ToleranceConfig) -> Vec<Cplx> {
    match poly.degeneracy {
        Degeneracy::Point => vec![poly.vertices[0]],
        Degeneracy::Segment => poly.vertices.clone(),
        Degeneracy::FullPolygon => {
            let band = ToleranceConfig::tol(cfg.eps_hull, poly.scale);
            let v = &poly.vertices;
            let m = v.len();
            let mut out = Vec::with_capacity(m);
            for i in 0..m {
                let prev = v[(i + m - 1) % m];
                let next = v[(i + 1) % m];
                if dist_to_segment(v[i], prev, next) > band {
                    out.push(v[i]);
                }
            }
            out
        }
    }
}
