use std::collections::BTreeMap;

use rayon::prelude::*;

use super::SpacetimeMesh;
use crate::linalg::sub;
use crate::scalar::{CompensatedSum, Real};

const CHUNK: usize = 4096;

fn det3<T: Real>(m: [[T; 3]; 3]) -> T {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn drop_col<T: Real>(rows: [[T; 4]; 3], k: usize) -> [[T; 3]; 3] {
    rows.map(|r| {
        let mut out = [T::zero(); 3];
        let mut j = 0;
        for (i, &x) in r.iter().enumerate() {
            if i != k {
                out[j] = x;
                j += 1;
            }
        }
        out
    })
}

/// 3-volume of a tetrahedron in R^4: `sqrt(det(G^T G)) / 6` for the edge
/// matrix `G`, evaluated as a sum of squared 3x3 minors.
pub fn tet_measure3<T: Real>(p: [[T; 4]; 4]) -> T {
    let e = [sub(p[1], p[0]), sub(p[2], p[0]), sub(p[3], p[0])];
    let mut s = T::zero();
    for k in 0..4 {
        let m = det3(drop_col(e, k));
        s += m * m;
    }
    s.sqrt() / T::lit(6.0)
}

/// Vector `N` with `N . x = det[x; b - a; c - a; d - a]`.
pub fn tet_normal<T: Real>(p: [[T; 4]; 4]) -> [T; 4] {
    let e = [sub(p[1], p[0]), sub(p[2], p[0]), sub(p[3], p[0])];
    std::array::from_fn(|k| {
        let m = det3(drop_col(e, k));
        if k % 2 == 0 {
            m
        } else {
            -m
        }
    })
}

/// Signed `det[p1 - p0, ..., p4 - p0]` (24 times the oriented 4-volume).
pub fn pentatope_det<T: Real>(p: [[T; 4]; 5]) -> T {
    let e = [sub(p[1], p[0]), sub(p[2], p[0]), sub(p[3], p[0]), sub(p[4], p[0])];
    let mut d = T::zero();
    for k in 0..4 {
        let minor = det3(drop_col([e[1], e[2], e[3]], k));
        let term = e[0][k] * minor;
        d = if k % 2 == 0 { d + term } else { d - term };
    }
    d
}

pub fn pentatope_measure4<T: Real>(p: [[T; 4]; 5]) -> T {
    pentatope_det(p).abs() / T::lit(24.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolumeReport<T> {
    pub total: T,
    /// Subtotal per tet tag, ascending by tag.
    pub per_tag: Vec<(u32, T)>,
    pub expected: Option<T>,
    pub abs_error: Option<T>,
    pub rel_error: Option<T>,
}

/// Total 3-volume of the mesh tets with compensated, order-deterministic accumulation.
pub fn mesh_volume<T: Real>(mesh: &SpacetimeMesh<T>, expected: Option<T>) -> VolumeReport<T> {
    let partial: Vec<(CompensatedSum<T>, BTreeMap<u32, CompensatedSum<T>>)> = mesh
        .tets
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut total = CompensatedSum::new();
            let mut tags: BTreeMap<u32, CompensatedSum<T>> = BTreeMap::new();
            for t in chunk {
                let v = tet_measure3(t.vertices.map(|i| mesh.vertices[i as usize]));
                total.add(v);
                tags.entry(t.tag).or_default().add(v);
            }
            (total, tags)
        })
        .collect();
    let mut total = CompensatedSum::new();
    let mut tags: BTreeMap<u32, CompensatedSum<T>> = BTreeMap::new();
    for (t, m) in partial {
        total.merge(t);
        for (k, v) in m {
            tags.entry(k).or_default().merge(v);
        }
    }
    let total = total.value();
    let abs_error = expected.map(|e| (total - e).abs());
    let rel_error = expected.zip(abs_error).map(|(e, a)| a / e.abs());
    VolumeReport {
        total,
        per_tag: tags.into_iter().map(|(k, v)| (k, v.value())).collect(),
        expected,
        abs_error,
        rel_error,
    }
}
