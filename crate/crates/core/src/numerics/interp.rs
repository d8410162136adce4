//! Local cubic interpolation on uniform grids and monotone inverse lookup.

/// Four-point Lagrange interpolation on a uniform grid.
///
/// `x` must lie within the grid extent; the stencil is clamped near the
/// boundary so the formula degrades gracefully to one-sided cubics there.
pub fn cubic_uniform(x0: f64, h: f64, values: &[f64], x: f64) -> f64 {
    let n = values.len();
    debug_assert!(n >= 4);
    let t = (x - x0) / h;
    let i = (t.floor() as isize).clamp(1, n as isize - 3) as usize;
    let s = t - i as f64;
    let (a, b, c, d) = (values[i - 1], values[i], values[i + 1], values[i + 2]);
    cubic_weights_apply(a, b, c, d, s)
}

/// Same stencil with periodic index wrap; `period_len` is the number of
/// distinct samples (grid step h, period = h * period_len).
pub fn cubic_periodic(x0: f64, h: f64, values: &[f64], x: f64) -> f64 {
    let n = values.len() as isize;
    let t = (x - x0) / h;
    let i = t.floor() as isize;
    let s = t - i as f64;
    let wrap = |k: isize| -> f64 { values[(k.rem_euclid(n)) as usize] };
    cubic_weights_apply(wrap(i - 1), wrap(i), wrap(i + 1), wrap(i + 2), s)
}

#[inline]
fn cubic_weights_apply(a: f64, b: f64, c: f64, d: f64, s: f64) -> f64 {
    let wa = -s * (s - 1.0) * (s - 2.0) / 6.0;
    let wb = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    let wc = -(s + 1.0) * s * (s - 2.0) / 2.0;
    let wd = (s + 1.0) * s * (s - 1.0) / 6.0;
    wa * a + wb * b + wc * c + wd * d
}

/// Inverse of a strictly increasing sampled map: find x with f(x) = target,
/// where f is the cubic interpolant of (xs, ys).
///
/// Bisection brackets the root, Newton polishes it; the result round-trips
/// through the forward interpolant to ~1e-12 on smooth desk-scale maps.
pub fn invert_monotone(xs: &[f64], ys: &[f64], h: f64, target: f64) -> Option<f64> {
    let n = ys.len();
    if target < ys[0] || target > ys[n - 1] {
        return None;
    }
    // bracketing interval by binary search on the samples
    let mut lo = xs[ys.partition_point(|&v| v < target).saturating_sub(1).min(n - 2)];
    let mut hi = lo + h;
    let f = |x: f64| cubic_uniform(xs[0], h, ys, x);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..60 {
        let fx = f(x) - target;
        if fx.abs() <= 1e-15 * (1.0 + target.abs()) {
            break;
        }
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        // secant-style derivative estimate from a small offset
        let dx = 1e-6 * h.max(1e-12);
        let d = (f(x + dx) - f(x - dx)) / (2.0 * dx);
        let mut next = if d > 0.0 { x - fx / d } else { 0.5 * (lo + hi) };
        if !(next >= lo && next <= hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-16 * (1.0 + x.abs()) {
            break;
        }
        x = next;
    }
    Some(x)
}
