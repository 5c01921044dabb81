//! Fixed-size vector helpers on plain arrays.

use crate::scalar::Real;

#[inline]
pub fn add<T: Real, const N: usize>(a: [T; N], b: [T; N]) -> [T; N] {
    std::array::from_fn(|i| a[i] + b[i])
}

#[inline]
pub fn sub<T: Real, const N: usize>(a: [T; N], b: [T; N]) -> [T; N] {
    std::array::from_fn(|i| a[i] - b[i])
}

#[inline]
pub fn scale<T: Real, const N: usize>(a: [T; N], s: T) -> [T; N] {
    a.map(|x| x * s)
}

#[inline]
pub fn dot<T: Real, const N: usize>(a: [T; N], b: [T; N]) -> T {
    let mut s = T::zero();
    for i in 0..N {
        s += a[i] * b[i];
    }
    s
}

#[inline]
pub fn norm<T: Real, const N: usize>(a: [T; N]) -> T {
    dot(a, a).sqrt()
}

/// `(1 - w) a + w b`, exact at both endpoints.
#[inline]
pub fn lerp<T: Real, const N: usize>(a: [T; N], b: [T; N], w: T) -> [T; N] {
    std::array::from_fn(|i| lerp1(a[i], b[i], w))
}

#[inline]
pub fn lerp1<T: Real>(a: T, b: T, w: T) -> T {
    if a == b {
        return a;
    }
    (T::one() - w) * a + w * b
}

#[inline]
pub fn cross<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn det3<T: Real>(a: [T; 3], b: [T; 3], c: [T; 3]) -> T {
    dot(a, cross(b, c))
}

pub fn to_f64<T: Real, const N: usize>(a: [T; N]) -> [f64; N] {
    a.map(Real::as_f64)
}

pub fn from_f64<T: Real, const N: usize>(a: [f64; N]) -> [T; N] {
    a.map(T::lit)
}
