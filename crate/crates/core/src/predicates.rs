//! Exact orientation / in-circle / in-sphere tests, plus symbolically
//! perturbed variants that never report a tie.
//!
//! The perturbation lifts every point to `|p|^2 - eps^prio(p)`; a smaller
//! priority dominates. Because both the planar and the spatial tests use the
//! same lifting, a Delaunay triangulation of a planar facet agrees with the
//! restriction of a spatial one to that facet.

use robust::{Coord, Coord3D};

pub type P2 = [f64; 2];
pub type P3 = [f64; 3];

#[inline]
fn c2(p: P2) -> Coord<f64> {
    Coord { x: p[0], y: p[1] }
}

#[inline]
fn c3(p: P3) -> Coord3D<f64> {
    Coord3D { x: p[0], y: p[1], z: p[2] }
}

/// Positive when `a, b, c` turn counter-clockwise.
#[inline]
pub fn orient2d(a: P2, b: P2, c: P2) -> f64 {
    robust::orient2d(c2(a), c2(b), c2(c))
}

/// `det[a - d, b - d, c - d]`: positive when `d` lies below the plane of a
/// counter-clockwise (seen from above) `a, b, c`.
#[inline]
pub fn orient3d(a: P3, b: P3, c: P3, d: P3) -> f64 {
    robust::orient3d(c3(a), c3(b), c3(c), c3(d))
}

/// Positive when `d` is inside the circle through counter-clockwise `a, b, c`.
#[inline]
pub fn incircle(a: P2, b: P2, c: P2, d: P2) -> f64 {
    robust::incircle(c2(a), c2(b), c2(c), c2(d))
}

/// Positive when `e` is inside the sphere through `a, b, c, d`, provided
/// `orient3d(a, b, c, d) > 0`.
#[inline]
pub fn insphere(a: P3, b: P3, c: P3, d: P3, e: P3) -> f64 {
    robust::insphere(c3(a), c3(b), c3(c), c3(d), c3(e))
}

#[inline]
fn sign(x: f64) -> i32 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Returns the sign of the first nonzero coefficient, scanning points from
/// most to least significant.
fn sos_resolve<const N: usize>(coeffs: [f64; N], prio: [u64; N]) -> i32 {
    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by_key(|&i| prio[i]);
    for i in order {
        let s = sign(coeffs[i]);
        if s != 0 {
            return s;
        }
    }
    0
}

/// Perturbed [`incircle`]. Nonzero whenever `a, b, c` are not collinear.
pub fn incircle_sos(p: [P2; 4], prio: [u64; 4]) -> i32 {
    let [a, b, c, d] = p;
    let s = sign(incircle(a, b, c, d));
    if s != 0 {
        return s;
    }
    let coeffs = [
        -orient2d(b, c, d),
        orient2d(a, c, d),
        -orient2d(a, b, d),
        orient2d(a, b, c),
    ];
    sos_resolve(coeffs, prio)
}

/// Perturbed [`insphere`]. Nonzero whenever `a, b, c, d` are not coplanar.
pub fn insphere_sos(p: [P3; 5], prio: [u64; 5]) -> i32 {
    let [a, b, c, d, e] = p;
    let s = sign(insphere(a, b, c, d, e));
    if s != 0 {
        return s;
    }
    let coeffs = [
        orient3d(b, c, d, e),
        -orient3d(a, c, d, e),
        orient3d(a, b, d, e),
        -orient3d(a, b, c, e),
        orient3d(a, b, c, d),
    ];
    sos_resolve(coeffs, prio)
}
