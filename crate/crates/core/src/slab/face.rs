//! Tetrahedralization of one Face over one time slab, in (u, v, t).

use std::collections::{HashMap, HashSet};

use crate::predicates::{insphere_sos, orient3d, P3};

/// Boundary surface of the prism `(u, v)-rectangle x [t_lo, t_hi]`.
pub(crate) struct PrismBoundary<'a> {
    /// Vertex id -> (u, v, t).
    pub coords: &'a HashMap<u32, P3>,
    /// Bottom and top triangulations (ids), any orientation.
    pub bottom: &'a [[u32; 3]],
    pub top: &'a [[u32; 3]],
    /// Wall triangles from the four Edge strips.
    pub walls: &'a [[u32; 3]],
    /// Prism volume `du * dv * dt`.
    pub volume: f64,
}

fn sorted3(mut f: [u32; 3]) -> [u32; 3] {
    f.sort_unstable();
    f
}

fn sorted4(mut f: [u32; 4]) -> [u32; 4] {
    f.sort_unstable();
    f
}

fn edge_key(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

/// Six times the right-handed volume of `(a, b, c, d)`.
#[inline]
pub(crate) fn rh_volume6(a: P3, b: P3, c: P3, d: P3) -> f64 {
    -orient3d(a, b, c, d)
}

impl PrismBoundary<'_> {
    fn p(&self, v: u32) -> P3 {
        self.coords[&v]
    }

    /// Every boundary edge shared by exactly two boundary triangles.
    pub fn check_closed(&self) -> Result<(), String> {
        let mut count: HashMap<(u32, u32), u32> = HashMap::new();
        for t in self.bottom.iter().chain(self.top).chain(self.walls) {
            for i in 0..3 {
                *count.entry(edge_key(t[i], t[(i + 1) % 3])).or_default() += 1;
            }
        }
        match count.into_iter().find(|&(_, c)| c != 2) {
            Some((e, c)) => Err(format!("boundary edge {e:?} used by {c} triangles")),
            None => Ok(()),
        }
    }

    /// Orients a tet right-handed in (u, v, t); rejects flat ones.
    fn orient(&self, mut t: [u32; 4]) -> Result<[u32; 4], String> {
        let v = rh_volume6(self.p(t[0]), self.p(t[1]), self.p(t[2]), self.p(t[3]));
        if v == 0.0 {
            return Err(format!("flat tetrahedron {t:?}"));
        }
        if v < 0.0 {
            t.swap(0, 1);
        }
        Ok(t)
    }

    fn check_volume(&self, tets: &[[u32; 4]], apex: Option<P3>) -> Result<(), String> {
        let mut sum = 0.0;
        for t in tets {
            let q = t.map(|i| if i == super::APEX { apex.expect("apex coordinates") } else { self.p(i) });
            sum += rh_volume6(q[0], q[1], q[2], q[3]) / 6.0;
        }
        let rel = (sum - self.volume).abs() / self.volume;
        if rel > 1e-10 {
            return Err(format!("tet volumes sum to {sum}, prism volume {}", self.volume));
        }
        Ok(())
    }

    /// Cones every boundary triangle to `apex`, which must be interior.
    pub fn cone(&self, apex: P3) -> Result<Vec<[u32; 4]>, String> {
        self.check_closed()?;
        let mut tets = Vec::with_capacity(self.bottom.len() + self.top.len() + self.walls.len());
        for t in self.bottom.iter().chain(self.top).chain(self.walls) {
            let [a, b, c] = t.map(|i| self.p(i));
            let v = rh_volume6(a, b, c, apex);
            if v == 0.0 {
                return Err(format!("flat coned tetrahedron on {t:?}"));
            }
            tets.push(if v > 0.0 { [t[0], t[1], t[2], super::APEX] } else { [t[1], t[0], t[2], super::APEX] });
        }
        self.check_volume(&tets, Some(apex))?;
        Ok(tets)
    }

    /// Delaunay tetrahedralization of the bottom and top vertex layers,
    /// with ties broken by symbolic perturbation on vertex id. Its bottom, top
    /// and wall faces reproduce the given triangulations exactly; any
    /// mismatch is reported as an error.
    pub fn delaunay(&self) -> Result<Vec<[u32; 4]>, String> {
        self.check_closed()?;
        let bottom_ids: Vec<u32> = {
            let mut v: Vec<u32> = self.bottom.iter().flatten().copied().collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let top_ids: Vec<u32> = {
            let mut v: Vec<u32> = self.top.iter().flatten().copied().collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let is_bottom: HashSet<u32> = bottom_ids.iter().copied().collect();
        let adjacency = |tris: &[[u32; 3]]| {
            let mut apex: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
            let mut nbrs: HashMap<u32, Vec<u32>> = HashMap::new();
            for t in tris {
                for i in 0..3 {
                    let (a, b, c) = (t[i], t[(i + 1) % 3], t[(i + 2) % 3]);
                    apex.entry(edge_key(a, b)).or_default().push(c);
                    nbrs.entry(a).or_default().push(b);
                    nbrs.entry(b).or_default().push(a);
                }
            }
            for n in nbrs.values_mut() {
                n.sort_unstable();
                n.dedup();
            }
            (apex, nbrs)
        };
        let (b_apex, b_nbrs) = adjacency(self.bottom);
        let (t_apex, t_nbrs) = adjacency(self.top);

        let mut tets: Vec<[u32; 4]> = Vec::new();
        let mut tet_set: HashSet<[u32; 4]> = HashSet::new();
        let mut face_count: HashMap<[u32; 3], u8> = HashMap::new();
        let mut queue: Vec<([u32; 3], u32)> = Vec::new();

        fn add_tet(
            t: [u32; 4],
            tets: &mut Vec<[u32; 4]>,
            tet_set: &mut HashSet<[u32; 4]>,
            face_count: &mut HashMap<[u32; 3], u8>,
            queue: &mut Vec<([u32; 3], u32)>,
        ) -> Result<(), String> {
            let key = sorted4(t);
            if !tet_set.insert(key) {
                return Ok(());
            }
            for i in 0..4 {
                let f = sorted3([key[(i + 1) % 4], key[(i + 2) % 4], key[(i + 3) % 4]]);
                let c = face_count.entry(f).or_default();
                *c += 1;
                if *c > 2 {
                    return Err(format!("face {f:?} shared by more than two tetrahedra"));
                }
                if *c == 1 {
                    queue.push((f, key[i]));
                }
            }
            tets.push(key);
            Ok(())
        }

        let best_of = |face: [u32; 3], cands: &[u32]| -> Option<u32> {
            let [mut a, mut b, c] = face;
            let first = *cands.first()?;
            if orient3d(self.p(a), self.p(b), self.p(c), self.p(first)) < 0.0 {
                std::mem::swap(&mut a, &mut b);
            }
            let mut best = first;
            for &y in &cands[1..] {
                let q = [a, b, c, best, y];
                if insphere_sos(q.map(|i| self.p(i)), q.map(u64::from)) > 0 {
                    best = y;
                }
            }
            Some(best)
        };

        let seed = sorted3(*self.bottom.first().ok_or("empty bottom triangulation")?);
        let first = best_of(seed, &top_ids).ok_or("empty top layer")?;
        add_tet([seed[0], seed[1], seed[2], first], &mut tets, &mut tet_set, &mut face_count, &mut queue)?;

        while let Some((f, x)) = queue.pop() {
            if face_count.get(&f) == Some(&2) {
                continue;
            }
            let nb = f.iter().filter(|v| is_bottom.contains(v)).count();
            let mut cands: Vec<u32> = Vec::new();
            match nb {
                2 => {
                    let (p, q): (Vec<u32>, Vec<u32>) = f.iter().partition(|v| is_bottom.contains(v));
                    cands.extend(b_apex.get(&edge_key(p[0], p[1])).into_iter().flatten());
                    cands.extend(t_nbrs.get(&q[0]).into_iter().flatten());
                }
                1 => {
                    let (p, q): (Vec<u32>, Vec<u32>) = f.iter().partition(|v| is_bottom.contains(v));
                    cands.extend(b_nbrs.get(&p[0]).into_iter().flatten());
                    cands.extend(t_apex.get(&edge_key(q[0], q[1])).into_iter().flatten());
                }
                _ => continue, // bottom or top hull face
            }
            let [a, b, c] = f.map(|i| self.p(i));
            let side_x = orient3d(a, b, c, self.p(x));
            cands.retain(|&y| {
                let s = orient3d(a, b, c, self.p(y));
                s != 0.0 && (s > 0.0) != (side_x > 0.0)
            });
            cands.sort_unstable();
            cands.dedup();
            if let Some(y) = best_of(f, &cands) {
                add_tet([f[0], f[1], f[2], y], &mut tets, &mut tet_set, &mut face_count, &mut queue)?;
            }
        }

        // hull faces must reproduce the prescribed boundary exactly
        let hull: HashSet<[u32; 3]> = face_count.iter().filter(|&(_, &c)| c == 1).map(|(f, _)| *f).collect();
        let expected: HashSet<[u32; 3]> = self.bottom.iter().chain(self.top).chain(self.walls).map(|&t| sorted3(t)).collect();
        if hull != expected {
            let missing = expected.difference(&hull).next();
            let extra = hull.difference(&expected).next();
            return Err(format!(
                "layer tetrahedralization does not conform to the boundary (missing {missing:?}, extra {extra:?})"
            ));
        }
        let tets = tets.into_iter().map(|t| self.orient(t)).collect::<Result<Vec<_>, _>>()?;
        self.check_volume(&tets, None)?;
        Ok(tets)
    }
}
