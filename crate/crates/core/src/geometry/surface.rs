//! Closed-form patch parametrizations in a shell's local frame.

use crate::linalg::{dot, scale, sub};
use crate::scalar::Real;

/// Orientation of one face of the cube `[-1, 1]^3`: the face `x_axis = sign`,
/// parametrized by `u` along `axes()[0]` and `v` along `axes()[1]` so that
/// `e_u x e_v` points outward.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CubeFrame {
    pub axis: usize,
    pub positive: bool,
}

impl CubeFrame {
    /// Face index `2 * axis + positive`.
    pub fn from_index(f: usize) -> Self {
        CubeFrame { axis: f / 2, positive: f % 2 == 1 }
    }

    pub fn axes(self) -> [usize; 2] {
        let (a1, a2) = ((self.axis + 1) % 3, (self.axis + 2) % 3);
        if self.positive {
            [a1, a2]
        } else {
            [a2, a1]
        }
    }

    fn sign<T: Real>(self) -> T {
        if self.positive {
            T::one()
        } else {
            -T::one()
        }
    }

    /// Point on the cube face and its two (constant) tangents.
    fn cube_point<T: Real>(self, u: T, v: T) -> ([T; 3], [T; 3], [T; 3]) {
        let [a1, a2] = self.axes();
        let mut q = [T::zero(); 3];
        q[self.axis] = self.sign();
        q[a1] = u;
        q[a2] = v;
        let mut du = [T::zero(); 3];
        du[a1] = T::one();
        let mut dv = [T::zero(); 3];
        dv[a2] = T::one();
        (q, du, dv)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Surface<T> {
    /// `radius * q / |q|` for `q` on a cube face, `(u, v)` in `[-1, 1]^2`.
    CubeSphere { frame: CubeFrame, radius: T },
    /// `half_side * q`, `(u, v)` in `[-1, 1]^2`.
    CubeFace { frame: CubeFrame, half_side: T },
    /// Face of the box `[0, side]^3` with `(u, v)` the two in-face coordinates.
    Plane { frame: CubeFrame, side: T },
    /// Standard torus about the z axis.
    Torus { major: T, minor: T },
}

impl<T: Real> Surface<T> {
    /// Local point and partial derivatives at `(u, v)`.
    pub fn eval(&self, u: T, v: T) -> ([T; 3], [T; 3], [T; 3]) {
        match *self {
            Surface::CubeSphere { frame, radius } => {
                let (q, du, dv) = frame.cube_point(u, v);
                let n2 = dot(q, q);
                let n = n2.sqrt();
                let p = scale(q, radius / n);
                let k = radius / n;
                let dpu = scale(sub(du, scale(q, u / n2)), k);
                let dpv = scale(sub(dv, scale(q, v / n2)), k);
                (p, dpu, dpv)
            }
            Surface::CubeFace { frame, half_side } => {
                let (q, du, dv) = frame.cube_point(u, v);
                (scale(q, half_side), scale(du, half_side), scale(dv, half_side))
            }
            Surface::Plane { frame, side } => {
                let [a1, a2] = frame.axes();
                let mut p = [T::zero(); 3];
                p[frame.axis] = if frame.positive { side } else { T::zero() };
                p[a1] = u;
                p[a2] = v;
                let mut du = [T::zero(); 3];
                du[a1] = T::one();
                let mut dv = [T::zero(); 3];
                dv[a2] = T::one();
                (p, du, dv)
            }
            Surface::Torus { major, minor } => {
                let (su, cu) = u.sin_cos();
                let (sv, cv) = v.sin_cos();
                let ring = major + minor * cv;
                let p = [ring * cu, ring * su, minor * sv];
                let du = [-ring * su, ring * cu, T::zero()];
                let dv = [-minor * sv * cu, -minor * sv * su, minor * cv];
                (p, du, dv)
            }
        }
    }
}
