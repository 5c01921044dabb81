//! Gauss–Legendre arclength integration and inversion.

use std::sync::OnceLock;

const ORDER: usize = 64;
const MAX_LEVEL: u32 = 12;

struct Rule {
    nodes: [f64; ORDER],
    weights: [f64; ORDER],
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = ORDER;
        let mut nodes = [0.0; ORDER];
        let mut weights = [0.0; ORDER];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        Rule { nodes, weights }
    })
}

fn gauss(f: &impl Fn(f64) -> f64, a: f64, b: f64, pieces: usize) -> f64 {
    let r = rule();
    let h = (b - a) / pieces as f64;
    let mut total = 0.0;
    for k in 0..pieces {
        let (lo, hi) = (a + k as f64 * h, a + (k + 1) as f64 * h);
        let (m, c) = (0.5 * (hi - lo), 0.5 * (hi + lo));
        let mut s = 0.0;
        for i in 0..ORDER {
            s += r.weights[i] * f(c + m * r.nodes[i]);
        }
        total += m * s;
    }
    total
}

/// Integral of `speed` over `[a, b]` by composite 64-point Gauss–Legendre,
/// doubling the panel count until successive estimates agree to `tol`
/// (relative). Returns the value and the panel count used.
pub fn integrate(speed: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, usize) {
    let mut pieces = 1;
    let mut prev = gauss(&speed, a, b, pieces);
    for _ in 0..MAX_LEVEL {
        pieces *= 2;
        let next = gauss(&speed, a, b, pieces);
        if (next - prev).abs() <= tol * next.abs().max(f64::MIN_POSITIVE) {
            return (next, pieces);
        }
        prev = next;
    }
    (prev, pieces)
}

/// Parameters `s_0 = a < s_1 < ... < s_m = b` splitting `[a, b]` into `m`
/// pieces of equal arclength.
pub fn equal_arclength(speed: impl Fn(f64) -> f64, a: f64, b: f64, m: usize, tol: f64) -> Vec<f64> {
    let (total, pieces) = integrate(&speed, a, b, tol);
    let mut out = Vec::with_capacity(m + 1);
    out.push(a);
    let mut lo_prev = a;
    for k in 1..m {
        let target = total * k as f64 / m as f64;
        // cumulative length from a, bracket [lo, hi]
        let (mut lo, mut hi) = (lo_prev, b);
        let mut s = a + (b - a) * k as f64 / m as f64;
        s = s.clamp(lo, hi);
        for _ in 0..200 {
            let sub = ((pieces as f64 * (s - a) / (b - a)).ceil() as usize).max(1);
            let g = gauss(&speed, a, s, sub) - target;
            if g.abs() <= tol * total {
                break;
            }
            if g > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            let v = speed(s);
            let newton = s - g / v;
            s = if v > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo <= f64::EPSILON * (b - a).abs() {
                break;
            }
        }
        out.push(s);
        lo_prev = s;
    }
    out.push(b);
    out
}
