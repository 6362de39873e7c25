//! Scalar optimization and projection kernels shared across modules.

/// Golden-section maximization of a unimodal (or concave) function on
/// `[lo, hi]`, refined until the bracketing window is below `window`.
/// Endpoints are always evaluated and included in the result.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, window: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = lo;
    let mut b = hi;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > window {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    let xm = 0.5 * (a + b);
    let candidates = [(lo, f(lo)), (hi, f(hi)), (xm, f(xm)), (x1, f1), (x2, f2)];
    candidates
        .into_iter()
        .fold((lo, f64::NEG_INFINITY), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        })
}

pub(crate) fn golden_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, window: f64) -> (f64, f64) {
    let (x, v) = golden_max(|t| -f(t), lo, hi, window);
    (x, -v)
}

/// Grid scan followed by golden-section refinement around the grid argmax.
/// Returns `(argmax, max)`.
///
/// The tabulated `grid_values` are trusted only for *locating* the argmax
/// (they may carry fast-path roundoff); every reported value is re-evaluated
/// through `f`.
pub(crate) fn grid_then_golden_max(
    f: impl Fn(f64) -> f64,
    grid: &[f64],
    grid_values: &[f64],
    window: f64,
) -> (f64, f64) {
    debug_assert_eq!(grid.len(), grid_values.len());
    let mut best = 0;
    for (i, &v) in grid_values.iter().enumerate() {
        if v > grid_values[best] {
            best = i;
        }
    }
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let (x, v) = golden_max(&f, lo, hi, window);
    let exact_grid = f(grid[best]);
    if exact_grid > v {
        (grid[best], exact_grid)
    } else {
        (x, v)
    }
}

/// Bisection for `f(x) = target` on a decreasing function, given a bracket
/// with `f(lo) ≥ target ≥ f(hi)`. Stops when the bracket is below `tol`.
pub(crate) fn bisect_decreasing(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    target: f64,
    tol: f64,
) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Euclidean projection onto the probability simplex (exact, sort-based).
/// Ties broken deterministically by index order.
pub(crate) fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut sorted: Vec<f64> = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite weights"));
    let mut acc = 0.0;
    let mut theta = 0.0;
    let mut found = false;
    for (k, &x) in sorted.iter().enumerate() {
        acc += x;
        let candidate = (acc - 1.0) / (k as f64 + 1.0);
        if x - candidate > 0.0 {
            theta = candidate;
        } else {
            found = true;
            break;
        }
    }
    let _ = found;
    let mut out: Vec<f64> = v.iter().map(|&x| (x - theta).max(0.0)).collect();
    // renormalize away roundoff so downstream sums hit 1 within 1e-15
    let s: f64 = out.iter().sum();
    if s > 0.0 {
        for x in out.iter_mut() {
            *x /= s;
        }
    } else {
        out = vec![1.0 / n as f64; n];
    }
    out
}
