use super::{Element, SpacetimeMesh};
use crate::scalar::Real;

fn permutations4() -> Vec<([usize; 4], bool)> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| p[..i].iter().all(|&x| x != p[i])) {
                        let inversions = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                        out.push((p, inversions % 2 == 0));
                    }
                }
            }
        }
    }
    out
}

/// Coxeter–Kuhn–Freudenthal triangulation of `[0, 1]^4` with `n` cells per axis:
/// `24 n^4` positively oriented pentatopes.
pub fn kuhn_pentatopes<T: Real>(n: usize) -> SpacetimeMesh<T> {
    assert!(n >= 1, "kuhn_pentatopes needs n >= 1");
    let m = n + 1;
    let id = |c: [usize; 4]| (c[0] + m * (c[1] + m * (c[2] + m * c[3]))) as u32;
    let mut mesh = SpacetimeMesh::new();
    let scale = T::lit(n as f64);
    for w in 0..m {
        for z in 0..m {
            for y in 0..m {
                for x in 0..m {
                    let p = [x, y, z, w].map(|k| T::lit(k as f64) / scale);
                    mesh.push_vertex(p, false);
                }
            }
        }
    }
    let perms = permutations4();
    for w in 0..n {
        for z in 0..n {
            for y in 0..n {
                for x in 0..n {
                    for (perm, even) in &perms {
                        let mut c = [x, y, z, w];
                        let mut v = [id(c); 5];
                        for (k, &axis) in perm.iter().enumerate() {
                            c[axis] += 1;
                            v[k + 1] = id(c);
                        }
                        if !even {
                            v.swap(3, 4);
                        }
                        mesh.pentatopes.push(Element::new(v, 0));
                    }
                }
            }
        }
    }
    mesh
}

/// The five vertex-omitting tets of a pentatope, oriented so their normals
/// (see [`super::tet_normal`]) point away from the omitted vertex when the
/// pentatope is positively oriented.
pub fn pentatope_boundary_tets(p: [u32; 5]) -> [[u32; 4]; 5] {
    std::array::from_fn(|i| {
        let mut t = [0u32; 4];
        let mut k = 0;
        for (j, &v) in p.iter().enumerate() {
            if j != i {
                t[k] = v;
                k += 1;
            }
        }
        if i % 2 == 1 {
            t.swap(0, 1);
        }
        t
    })
}
