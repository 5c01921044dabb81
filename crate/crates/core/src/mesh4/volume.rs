//! Closed-form spacetime 3-volumes of the analytic cases.

use super::CapMode;
use crate::geometry::AnalyticCase;
use crate::scalar::Real;

/// Lateral 3-volume of a hypercone over a sphere of radius `r` and height `h`.
pub fn hcs<T: Real>(r: T, h: T) -> T {
    T::lit(4.0) * T::PI() * r * r / T::lit(3.0) * (r * r + h * h).sqrt()
}

/// Lateral 3-volume of a hypercone over a torus (minor `r`, major `big_r`) of height `h`.
pub fn hct<T: Real>(r: T, big_r: T, h: T) -> T {
    T::lit(4.0) * T::PI() * T::PI() * r * big_r / T::lit(3.0) * (big_r * big_r + h * h).sqrt()
}

fn sphere_volume<T: Real>(r: T) -> T {
    T::lit(4.0) / T::lit(3.0) * T::PI() * r * r * r
}

fn torus_volume<T: Real>(r: T, big_r: T) -> T {
    T::lit(2.0) * T::PI() * T::PI() * r * r * big_r
}

/// Box walls traced over time, plus the body's lateral volume, plus both caps
/// when closed.
pub fn expected_volume<T: Real>(case: &AnalyticCase<T>, caps: CapMode) -> T {
    let closed = caps == CapMode::Closed;
    match *case {
        AnalyticCase::StaticSphere { r0, side, t0, tf } => {
            let dt = tf - t0;
            let mut v = T::lit(6.0) * side * side * dt + T::lit(4.0) * T::PI() * r0 * r0 * dt;
            if closed {
                v += T::lit(2.0) * (side * side * side - sphere_volume(r0));
            }
            v
        }
        AnalyticCase::ExpandingSphere { r0, rf, side, t0, tf } => {
            let dt = tf - t0;
            // height of the cone apex below t0
            let a = r0 * dt / (rf - r0);
            let vi = hcs(rf, a + dt) - hcs(r0, a);
            let mut v = T::lit(6.0) * side * side * dt + vi;
            if closed {
                v += T::lit(2.0) * side * side * side - sphere_volume(r0) - sphere_volume(rf);
            }
            v
        }
        AnalyticCase::ExpandingTorus { r0, big_r0, rf, big_rf, side, t0, tf } => {
            let dt = tf - t0;
            let a = big_r0 * dt / (big_rf - big_r0);
            let vi = hct(rf, big_rf, a + dt) - hct(r0, big_r0, a);
            let mut v = T::lit(6.0) * side * side * dt + vi;
            if closed {
                v += T::lit(2.0) * side * side * side - torus_volume(r0, big_r0) - torus_volume(rf, big_rf);
            }
            v
        }
        AnalyticCase::Box { side, t0, tf } => {
            let mut v = T::lit(6.0) * side * side * (tf - t0);
            if closed {
                v += T::lit(2.0) * side * side * side;
            }
            v
        }
    }
}
