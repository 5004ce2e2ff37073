//! Scalar root finding: a cancellation-free quadratic formula and a
//! bracketed Newton iteration for monotone decreasing functions.

use crate::error::{BoundError, Result};

/// Both real roots of `a·x² + b·x + c`, ascending.
///
/// Uses `q = −(b + sign(b)·√disc)/2` with roots `q/a` and `c/q`, so neither
/// root is formed by subtracting nearly equal quantities.
pub fn solve_quadratic_stable(a: f64, b: f64, c: f64) -> Result<(f64, f64)> {
    if a == 0.0 {
        return Err(BoundError::DegenerateQuadratic);
    }
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(BoundError::InvalidArgument(format!(
            "non-finite quadratic coefficients ({a}, {b}, {c})"
        )));
    }
    // b² − 4ac via fma keeps one rounding in the product.
    let disc = b.mul_add(b, -4.0 * a * c);
    if disc < 0.0 {
        return Err(BoundError::NegativeDiscriminant(disc));
    }
    let sqrt_disc = disc.sqrt();
    let q = -0.5 * (b + sqrt_disc.copysign(b));
    if q == 0.0 {
        // b = 0 and c = 0.
        return Ok((0.0, 0.0));
    }
    let r1 = q / a;
    let r2 = c / q;
    Ok(if r1 <= r2 { (r1, r2) } else { (r2, r1) })
}

/// Outcome of [`solve_decreasing`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Root {
    pub x: f64,
    /// `f(x) − target`.
    pub residual: f64,
}

/// Finds `x` in `[lo, hi]` with `f(x) = target` for a strictly decreasing
/// `f`, given `f(lo) > target ≥ f(hi)`. `eval` returns `(f(x), f'(x))`.
///
/// Newton steps that leave the current bracket (or have a useless
/// derivative) are replaced by bisection. Iteration continues past
/// `|residual| ≤ tol` until the Newton correction is at rounding level, so
/// the result is accurate to a few ulps whenever the function is.
pub(crate) fn solve_decreasing<F>(
    eval: F,
    target: f64,
    mut lo: f64,
    mut hi: f64,
    start: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Root>
where
    F: Fn(f64) -> (f64, f64),
{
    let mut hi_residual = eval(hi).0 - target;
    let mut x = if start > lo && start < hi {
        start
    } else {
        0.5 * (lo + hi)
    };
    for _ in 0..max_iter {
        let (value, slope) = eval(x);
        let g = value - target;
        if g == 0.0 {
            return Ok(Root { x, residual: 0.0 });
        }
        if g > 0.0 {
            lo = x;
        } else {
            hi = x;
            hi_residual = g;
        }
        let newton = x - g / slope;
        let next = if newton.is_finite() && slope < 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        if g.abs() <= tol && step <= 4.0 * f64::EPSILON * x.abs() {
            return Ok(Root { x, residual: g });
        }
        if hi - lo <= 2.0 * f64::EPSILON * hi {
            // Bracket exhausted; hi is the side that satisfies f ≤ target.
            return Ok(Root {
                x: hi,
                residual: hi_residual,
            });
        }
        x = next;
    }
    Err(BoundError::NoConvergence {
        iterations: max_iter,
    })
}
