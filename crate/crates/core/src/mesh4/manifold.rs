use std::collections::HashMap;

use super::SpacetimeMesh;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ManifoldMode<T> {
    /// Every face shared by exactly two tets.
    Closed,
    /// Faces lying entirely at `t0` or entirely at `tf` may be shared by one tet.
    WithBoundary { t0: T, tf: T },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ManifoldReport {
    pub pass: bool,
    pub faces_checked: usize,
    pub boundary_faces: usize,
    /// Total number of offending faces (the lists below are truncated).
    pub failures: usize,
    /// Faces (sorted vertex triple) with an illegal tet count.
    pub bad_adjacency: Vec<([u32; 3], usize)>,
    /// Faces whose two tets induce the same orientation.
    pub bad_orientation: Vec<[u32; 3]>,
}

const MAX_REPORTED: usize = 32;

/// Sorted triple and the parity (+1 / -1) of the sorting permutation.
fn sort3(mut f: [u32; 3]) -> ([u32; 3], i8) {
    let mut s = 1;
    for (i, j) in [(0, 1), (1, 2), (0, 1)] {
        if f[i] > f[j] {
            f.swap(i, j);
            s = -s;
        }
    }
    (f, s)
}

/// Audits face adjacency and orientation consistency of the mesh tets
/// (pentatopes contribute their boundary tets).
pub fn check_manifold<T: Real>(mesh: &SpacetimeMesh<T>, mode: ManifoldMode<T>) -> ManifoldReport {
    let tets = mesh.all_tets();
    let mut faces: HashMap<[u32; 3], (usize, i32)> = HashMap::with_capacity(tets.len() * 2);
    for t in &tets {
        let v = t.vertices;
        for i in 0..4 {
            let mut f = [0u32; 3];
            let mut k = 0;
            for (j, &x) in v.iter().enumerate() {
                if j != i {
                    f[k] = x;
                    k += 1;
                }
            }
            let (key, parity) = sort3(f);
            let sign = if i % 2 == 0 { parity } else { -parity };
            let e = faces.entry(key).or_insert((0, 0));
            e.0 += 1;
            e.1 += sign as i32;
        }
    }
    let mut report = ManifoldReport { faces_checked: faces.len(), ..Default::default() };
    let on_cap = |f: &[u32; 3], t: T| f.iter().all(|&v| mesh.vertices[v as usize][3] == t);
    let mut keys: Vec<_> = faces.into_iter().collect();
    keys.sort_unstable_by_key(|k| k.0);
    let mut failures = 0usize;
    for (f, (count, orient)) in keys {
        match (count, mode) {
            (2, _) if orient == 0 => {}
            (2, _) => {
                failures += 1;
                if report.bad_orientation.len() < MAX_REPORTED {
                    report.bad_orientation.push(f);
                }
            }
            (1, ManifoldMode::WithBoundary { t0, tf }) if on_cap(&f, t0) || on_cap(&f, tf) => {
                report.boundary_faces += 1;
            }
            _ => {
                failures += 1;
                if report.bad_adjacency.len() < MAX_REPORTED {
                    report.bad_adjacency.push((f, count));
                }
            }
        }
    }
    report.failures = failures;
    report.pass = failures == 0 && !tets.is_empty();
    report
}
