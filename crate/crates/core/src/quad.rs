//! One-dimensional quadrature helpers.

/// Composite Simpson rule on `[a, b]` with `panels` (rounded up to even) panels.
pub fn simpson(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = (panels.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for k in 1..n {
        let y = f(a + k as f64 * h);
        if k % 2 == 1 {
            odd += y;
        } else {
            even += y;
        }
    }
    (f(a) + f(b) + 4.0 * odd + 2.0 * even) * h / 3.0
}

/// Simpson on the geometric blocks `[a·2^k, a·2^(k+1)]` covering `[a, b]`,
/// for integrands spanning many orders of magnitude.
pub fn simpson_geometric(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, panels_per_octave: usize) -> f64 {
    debug_assert!(a > 0.0 && b >= a);
    let mut total = 0.0;
    let mut lo = a;
    while lo < b {
        let hi = (2.0 * lo).min(b);
        total += simpson(&mut f, lo, hi, panels_per_octave);
        lo = hi;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_is_exact() {
        let v = simpson(|x| x * x * x - 2.0 * x, 0.0, 3.0, 2);
        assert!((v - (81.0 / 4.0 - 9.0)).abs() < 1e-12);
    }

    #[test]
    fn geometric_blocks() {
        let v = simpson_geometric(|x| 1.0 / (x * x), 1.0, 1024.0, 256);
        assert!((v - (1.0 - 1.0 / 1024.0)).abs() < 1e-9);
    }
}
