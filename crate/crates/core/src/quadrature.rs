//! Adaptive Simpson quadrature with a relative error target.

use crate::error::{Error, Result};

/// Subdivision budget shared by one integration call.
pub const MAX_SUBDIVISIONS: usize = 1_000_000;

const MAX_DEPTH: u32 = 64;

struct Budget {
    used: usize,
    limit: usize,
}

/// Integrates `f` over `[a, b]` to relative accuracy `rel_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    integrate_with_nodes(f, a, b, &[], rel_tol)
}

/// Like [`integrate`], but splits the range at every interior `node`, which
/// is where the integrand may fail to be smooth.
pub fn integrate_with_nodes<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    nodes: &[f64],
    rel_tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate_with_nodes(f, b, a, nodes, rel_tol).map(|v| -v);
    }
    let mut cuts = vec![a];
    let mut inner: Vec<f64> = nodes.iter().copied().filter(|&t| t > a && t < b).collect();
    inner.sort_by(f64::total_cmp);
    cuts.extend(inner);
    cuts.push(b);

    // Coarse composite Simpson pass to fix the absolute tolerance.
    let coarse: f64 = cuts
        .windows(2)
        .map(|w| composite_simpson(&f, w[0], w[1], 16))
        .sum();
    let abs_tol = rel_tol * coarse.abs().max(f64::MIN_POSITIVE);

    let mut budget = Budget {
        used: 0,
        limit: MAX_SUBDIVISIONS,
    };
    let total_len = b - a;
    let mut sum = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let tol = abs_tol * (hi - lo) / total_len;
        let fa = f(lo);
        let fm = f(0.5 * (lo + hi));
        let fb = f(hi);
        let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        sum += refine(&f, lo, hi, fa, fm, fb, whole, tol, MAX_DEPTH, &mut budget)?;
    }
    if !sum.is_finite() {
        return Err(Error::Numerical(format!(
            "quadrature over [{a}, {b}] produced {sum}"
        )));
    }
    Ok(sum)
}

fn composite_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + i as f64 * h;
            h / 6.0 * (f(lo) + 4.0 * f(lo + 0.5 * h) + f(lo + h))
        })
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    budget: &mut Budget,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    budget.used += 1;
    if budget.used > budget.limit {
        return Err(Error::Numerical(format!(
            "adaptive Simpson exceeded {} subdivisions",
            budget.limit
        )));
    }
    Ok(refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, budget)?
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, budget)?)
}
