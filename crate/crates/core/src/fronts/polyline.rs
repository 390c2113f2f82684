//! Planar polyline utilities: distances, tangent reversals and crossings.

use crate::real::{dot, Real};

fn sub<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| *x - *y).collect()
}

/// Euclidean distance from `p` to the segment `[a, b]`.
pub fn segment_distance<T: Real>(p: &[T], a: &[T], b: &[T]) -> T {
    let d = sub(p, a);
    let e = sub(b, a);
    let ee = dot(&e, &e);
    let s = if ee > T::zero() {
        (dot(&d, &e) / ee).max(T::zero()).min(T::one())
    } else {
        T::zero()
    };
    d.iter()
        .zip(&e)
        .map(|(x, y)| {
            let r = *x - s * *y;
            r * r
        })
        .sum::<T>()
        .sqrt()
}

/// Distance from `p` to a polyline; a single vertex counts as a point.
pub fn polyline_distance<T: Real>(p: &[T], line: &[Vec<T>]) -> T {
    match line.len() {
        0 => T::infinity(),
        1 => segment_distance(p, &line[0], &line[0]),
        _ => line
            .windows(2)
            .map(|w| segment_distance(p, &w[0], &w[1]))
            .fold(T::infinity(), T::min),
    }
}

/// Distance from `p` to the nearest of several polylines.
pub fn distance_to_polylines<T: Real>(p: &[T], lines: &[Vec<Vec<T>>]) -> T {
    lines
        .iter()
        .map(|l| polyline_distance(p, l))
        .fold(T::infinity(), T::min)
}

/// One-sided Hausdorff distance: the farthest vertex of `from` from the polylines `to`.
pub fn directed_hausdorff<T: Real>(from: &[Vec<T>], to: &[Vec<Vec<T>>]) -> T {
    from.iter()
        .map(|p| distance_to_polylines(p, to))
        .fold(T::zero(), T::max)
}

/// Vertices where consecutive segment directions make an obtuse angle.
///
/// Zero-length segments are skipped, so a cusp sampled exactly at a vertex
/// is still found once.
pub fn tangent_reversals<T: Real>(points: &[Vec<T>], closed: bool) -> Vec<usize> {
    let n = points.len();
    if n < 3 {
        return Vec::new();
    }
    let count = if closed { n } else { n - 1 };
    let seg = |i: usize| sub(&points[(i + 1) % n], &points[i % n]);
    let nonzero: Vec<usize> = (0..count).filter(|&i| seg(i).iter().any(|v| *v != T::zero())).collect();
    let mut out = Vec::new();
    let pairs = if closed { nonzero.len() } else { nonzero.len().saturating_sub(1) };
    for j in 0..pairs {
        let a = nonzero[j];
        let b = nonzero[(j + 1) % nonzero.len()];
        if dot(&seg(a), &seg(b)) < T::zero() {
            out.push(b % n);
        }
    }
    out
}

/// A proper crossing of two non-adjacent segments.
#[derive(Clone, Debug, PartialEq)]
pub struct Crossing<T> {
    pub point: Vec<T>,
    pub first_segment: usize,
    pub second_segment: usize,
}

fn cross2<T: Real>(a: &[T], b: &[T]) -> T {
    a[0] * b[1] - a[1] * b[0]
}

/// Self-intersections of a planar polyline. Segments are taken half-open, so a
/// crossing through a vertex is reported once.
pub fn self_intersections<T: Real>(points: &[Vec<T>], closed: bool) -> Vec<Crossing<T>> {
    let n = points.len();
    if n < 4 {
        return Vec::new();
    }
    let count = if closed { n } else { n - 1 };
    let seg = |i: usize| (&points[i], &points[(i + 1) % n]);
    let bbox = |i: usize| {
        let (a, b) = seg(i);
        (a[0].min(b[0]), a[0].max(b[0]), a[1].min(b[1]), a[1].max(b[1]))
    };
    let boxes: Vec<_> = (0..count).map(bbox).collect();
    let mut out = Vec::new();
    for i in 0..count {
        for j in i + 2..count {
            if closed && i == 0 && j == count - 1 {
                continue;
            }
            let (bi, bj) = (boxes[i], boxes[j]);
            if bi.1 < bj.0 || bj.1 < bi.0 || bi.3 < bj.2 || bj.3 < bi.2 {
                continue;
            }
            let (p, p2) = seg(i);
            let (q, q2) = seg(j);
            let r = sub(p2, p);
            let s = sub(q2, q);
            let denom = cross2(&r, &s);
            if denom == T::zero() {
                continue;
            }
            let qp = sub(q, p);
            let u = cross2(&qp, &s) / denom;
            let v = cross2(&qp, &r) / denom;
            let inside = |w: T| w >= T::zero() && w < T::one();
            if inside(u) && inside(v) {
                out.push(Crossing {
                    point: p.iter().zip(&r).map(|(a, d)| *a + u * *d).collect(),
                    first_segment: i,
                    second_segment: j,
                });
            }
        }
    }
    out
}

/// Proper crossings between two different polylines.
pub fn crossings_between<T: Real>(a: &[Vec<T>], b: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    for sa in a.windows(2) {
        for sb in b.windows(2) {
            let r = sub(&sa[1], &sa[0]);
            let s = sub(&sb[1], &sb[0]);
            let denom = cross2(&r, &s);
            if denom == T::zero() {
                continue;
            }
            let qp = sub(&sb[0], &sa[0]);
            let u = cross2(&qp, &s) / denom;
            let v = cross2(&qp, &r) / denom;
            if u >= T::zero() && u < T::one() && v >= T::zero() && v < T::one() {
                out.push(sa[0].iter().zip(&r).map(|(p, d)| *p + u * *d).collect());
            }
        }
    }
    out
}
