//! Time-dependent placement of a shell about its center.

use crate::linalg::{add, cross, dot, lerp, lerp1, scale};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub enum Motion<T> {
    Static,
    /// Uniform scaling by a factor interpolated linearly in time.
    LinearScale { factor0: T, factor1: T },
    /// Rotation about `axis` (unit) through the shell center.
    Rotation { axis: [T; 3], angle0: T, angle1: T },
    Translation { offset0: [T; 3], offset1: [T; 3] },
}

impl<T: Real> Motion<T> {
    /// Linear map applied to local vectors (positions relative to the center or derivatives).
    pub fn apply_linear(&self, v: [T; 3], w: T) -> [T; 3] {
        match self {
            Motion::Static | Motion::Translation { .. } => v,
            Motion::LinearScale { factor0, factor1 } => scale(v, lerp1(*factor0, *factor1, w)),
            Motion::Rotation { axis, angle0, angle1 } => {
                let a = lerp1(*angle0, *angle1, w);
                let (s, c) = a.sin_cos();
                // Rodrigues
                let k = *axis;
                let kv = cross(k, v);
                let kd = dot(k, v) * (T::one() - c);
                std::array::from_fn(|i| v[i] * c + kv[i] * s + k[i] * kd)
            }
        }
    }

    /// Position of a local point at normalized time `w`.
    pub fn apply_point(&self, center: [T; 3], local: [T; 3], w: T) -> [T; 3] {
        let moved = self.apply_linear(local, w);
        match self {
            Motion::Translation { offset0, offset1 } => add(add(center, moved), lerp(*offset0, *offset1, w)),
            _ => add(center, moved),
        }
    }
}
