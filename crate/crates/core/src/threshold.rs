//! Threshold functions `ψ_{N,α}` at large `N`.
//!
//! The level coefficients come from the generating identity
//!
//! ```text
//! Σ_{n=1}^N C(N-1,n-1) ψ̂([n]) z^{n-1} = C(N-1,b) 2^{-(N-1)} (1+z)^a (1-z)^b
//! ```
//!
//! with `a = (N+α-1)/2`, `b = (N-α-1)/2`, expanded in exact integers. The rest
//! of the module holds the functions `G`, `I`, `Y` that sandwich the radius,
//! the McKay residual of the binomial tail, the majority constant `γ` and the
//! root `t_N`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::cube::SymmetricSpectrum;
use crate::error::{invalid, Error, Result};
use crate::exact;
use crate::families::{self, ThresholdSpec};
use crate::parallel;
use crate::quadrature;
use crate::radius::{boolean_radius_symmetric, radius_of};
use crate::special::{y_function, SQRT_PI_OVER_2};

/// Largest `N` accepted by the exact spectrum.
pub const MAX_EXACT_N: usize = 4001;

/// Relative slack for the sandwich inequalities and the McKay range.
pub const SLACK: f64 = 1e-9;

/// Largest `N` at which threshold radii are cross-checked on the dense path.
pub const DENSE_CHECK_N: usize = 12;

const DENSE_AGREEMENT: f64 = 1e-9;
const I_REL_TOL: f64 = 1e-12;
const GAMMA_REL_TOL: f64 = 1e-14;

/// Radius of one threshold function and the quantities bounding it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub n: usize,
    /// Representative threshold with `n - alpha` odd actually analysed.
    pub alpha: i64,
    pub radius: f64,
    /// `radius · (alpha + √n)`.
    pub ratio: f64,
    pub mckay_c: f64,
    pub sandwich_ok: bool,
    /// `Y((alpha + 1)/√n)`.
    pub y_value: f64,
}

/// `(a, b)` for a valid `(n, alpha)` with `-1 ≤ alpha < n`.
fn exponents(n: usize, alpha: i64, min_alpha: i64) -> Result<(usize, usize)> {
    if n == 0 || n > MAX_EXACT_N {
        return Err(Error::DimensionOutOfRange {
            n,
            min: 1,
            max: MAX_EXACT_N,
        });
    }
    if alpha < min_alpha || alpha >= n as i64 {
        return Err(invalid(
            "alpha",
            format!("need {min_alpha} <= alpha < {n}, got {alpha}"),
        ));
    }
    if (n as i64 - alpha) % 2 == 0 {
        return Err(Error::ParityViolation { n, alpha });
    }
    let a = ((n as i64 + alpha - 1) / 2) as usize;
    let b = ((n as i64 - alpha - 1) / 2) as usize;
    Ok((a, b))
}

/// Coefficients of `(1+z)^a (1-z)^b`.
///
/// From `(1-z²) p' = ((a-b) - (a+b) z) p`:
/// `(k+1) c_{k+1} = (a-b) c_k - (a+b-k+1) c_{k-1}`, every division exact.
fn generating_coeffs(a: usize, b: usize) -> Vec<BigInt> {
    let len = a + b + 1;
    let diff = BigInt::from(a as i64 - b as i64);
    let mut c = Vec::with_capacity(len);
    c.push(BigInt::one());
    if len > 1 {
        c.push(diff.clone());
    }
    for k in 1..len - 1 {
        let next = (&diff * &c[k] - BigInt::from(a + b + 1 - k) * &c[k - 1]) / BigInt::from(k + 1);
        c.push(next);
    }
    c
}

/// Number of points with `x_1 + … + x_n > α`, i.e. with at most `b` coordinates equal to `-1`.
fn upper_tail_count(row: &[BigUint], b: usize) -> BigUint {
    row[..=b].iter().sum()
}

/// Exact level coefficients of `ψ_{n,α}` for `n - α` odd.
///
/// `α = -1` is accepted as well: it is the representative of `ψ_{n,0}` for
/// even `n`, where `sign(0) = +1` puts the balanced points on the `+1` side.
pub fn threshold_spectrum_exact(n: usize, alpha: i64) -> Result<SymmetricSpectrum> {
    let (a, b) = exponents(n, alpha, -1)?;
    let c = generating_coeffs(a, b);
    let row_n = exact::binomial_row(n);
    let row = exact::binomial_row(n - 1);
    let half = BigUint::one() << (n - 1);

    let mut levels = Vec::with_capacity(n + 1);
    let tail = BigInt::from(upper_tail_count(&row_n, b));
    levels.push(BigRational::new(tail - BigInt::from(half.clone()), BigInt::from(half.clone())));
    let scale = BigInt::from(row[b].clone());
    for m in 1..=n {
        let den = BigInt::from(&half * &row[m - 1]);
        levels.push(BigRational::new(&scale * &c[m - 1], den));
    }
    SymmetricSpectrum::from_levels(n, levels)
}

/// `C(N-1,(N-1)/2) 2^{-(N-1)} (1+r²)^{(N-1)/2}`, the majority case of the
/// identity with every coefficient replaced by its modulus.
pub fn maj_identity_eval(n: usize, r: f64) -> Result<f64> {
    if n % 2 == 0 {
        return Err(invalid("n", format!("majority needs odd n, got {n}")));
    }
    let h = (n - 1) / 2;
    let ln = exact::ln_big(&exact::binomial(n - 1, h)) - (n - 1) as f64 * std::f64::consts::LN_2
        + h as f64 * (r * r).ln_1p();
    Ok(ln.exp())
}

fn check_g_params(n: usize, alpha: i64) -> Result<()> {
    if n == 0 {
        return Err(Error::DimensionOutOfRange {
            n,
            min: 1,
            max: usize::MAX,
        });
    }
    if alpha < 0 || alpha > n as i64 - 1 {
        return Err(invalid("alpha", format!("need 0 <= alpha <= {}, got {alpha}", n - 1)));
    }
    Ok(())
}

/// Branch point `r_α = α/((N-1) + √((N-1)² - α²))`; zero for `α = 0`.
pub fn r_alpha(n: usize, alpha: i64) -> Result<f64> {
    check_g_params(n, alpha)?;
    if alpha == 0 {
        return Ok(0.0);
    }
    let m = (n - 1) as f64;
    let al = alpha as f64;
    Ok(al / (m + ((m - al) * (m + al)).sqrt()))
}

// `e · ln(x)` with the convention `0 · ln 0 = 0`.
fn xlogy(e: f64, x: f64) -> f64 {
    if e == 0.0 {
        0.0
    } else {
        e * x.ln()
    }
}

/// Logs of the two closed forms of `G` at `r`: the outer branch
/// `(1+r)^a |1-r|^b` and the inner branch
/// `(1+r²)^{(N-1)/2} (1+α/(N-1))^{(N+α-1)/4} (1-α/(N-1))^{(N-α-1)/4}`.
fn ln_g_branches(n: usize, alpha: i64, r: f64) -> (f64, f64) {
    let al = alpha as f64;
    let nf = n as f64;
    let a = (nf + al - 1.0) / 2.0;
    let b = (nf - al - 1.0) / 2.0;
    let outer = xlogy(a, 1.0 + r) + xlogy(b, (1.0 - r).abs());
    let inner = if n == 1 {
        0.0
    } else {
        let m = nf - 1.0;
        m / 2.0 * (r * r).ln_1p() + xlogy(a / 2.0, 1.0 + al / m) + xlogy(b / 2.0, 1.0 - al / m)
    };
    (outer, inner)
}

/// `ln G(r)` for any `r ≥ 0`. Since `G(r) = r^{N-1} G(1/r)`, the outer
/// branch applies on `[0, r_α] ∪ [1/r_α, ∞)` and the inner one in between.
fn ln_g(n: usize, alpha: i64, ra: f64, r: f64) -> f64 {
    let (outer, inner) = ln_g_branches(n, alpha, r);
    if ra > 0.0 && (r <= ra || r * ra >= 1.0) {
        outer
    } else {
        inner
    }
}

/// `G(r) = sup_{|z|=1} |1+zr|^{(N+α-1)/2} |1-zr|^{(N-α-1)/2}` on `[0, 1]`.
pub fn g_function(n: usize, alpha: i64, r: f64) -> Result<f64> {
    let ra = r_alpha(n, alpha)?;
    if !(0.0..=1.0).contains(&r) {
        return Err(invalid("r", format!("G is evaluated on [0, 1], got {r}")));
    }
    Ok(ln_g(n, alpha, ra, r).exp())
}

/// Both closed forms of `G` at `r`, `(outer, inner)`. They agree at `r_α`.
pub fn g_branch_values(n: usize, alpha: i64, r: f64) -> Result<(f64, f64)> {
    check_g_params(n, alpha)?;
    if !(r >= 0.0) {
        return Err(invalid("r", format!("need r >= 0, got {r}")));
    }
    let (outer, inner) = ln_g_branches(n, alpha, r);
    Ok((outer.exp(), inner.exp()))
}

// `∫_0^upper G` for any `upper ≥ 0`, splitting at both branch points.
fn integrate_g(n: usize, alpha: i64, upper: f64, rel_tol: f64) -> Result<f64> {
    let ra = r_alpha(n, alpha)?;
    let nodes: Vec<f64> = if ra > 0.0 { vec![ra, 1.0 / ra] } else { vec![] };
    quadrature::integrate_with_nodes(|r| ln_g(n, alpha, ra, r).exp(), 0.0, upper, &nodes, rel_tol)
}

/// `I(ρ) = ∫_0^ρ G(r) dr` for `ρ ∈ [0, 1]`.
pub fn i_integral(n: usize, alpha: i64, rho: f64) -> Result<f64> {
    check_g_params(n, alpha)?;
    if !(0.0..=1.0).contains(&rho) {
        return Err(invalid("rho", format!("I is evaluated on [0, 1], got {rho}")));
    }
    integrate_g(n, alpha, rho, I_REL_TOL)
}

/// `Σ_{k ≤ b} C(N,k)` and `C(N-1,b)` for a parity-valid `(n, alpha ≥ 0)`.
fn tail_and_central(n: usize, alpha: i64) -> Result<(BigUint, BigUint)> {
    let (_, b) = exponents(n, alpha, 0)?;
    let tail = upper_tail_count(&exact::binomial_row(n), b);
    Ok((tail, exact::binomial(n - 1, b)))
}

/// `c_{α,N} = √N ln( T / (√N C(N-1,b) Y((α+1)/√N)) )` with
/// `T = Σ_{k ≤ b} C(N,k)`, which lies in `[0, √(π/2)]`.
pub fn mckay_residual(n: usize, alpha: i64) -> Result<f64> {
    let (tail, central) = tail_and_central(n, alpha)?;
    let sqrt_n = (n as f64).sqrt();
    let y = y_function((alpha as f64 + 1.0) / sqrt_n)?;
    let c = sqrt_n * (exact::ln_big(&tail) - exact::ln_big(&central) - sqrt_n.ln() - y.ln());
    if !(-SLACK..=SQRT_PI_OVER_2 + SLACK).contains(&c) {
        return Err(Error::Numerical(format!(
            "McKay residual {c} for n={n}, alpha={alpha} is outside [0, sqrt(pi/2)]"
        )));
    }
    Ok(c)
}

/// The three terms `I(ρ) ≤ M ≤ I(3ρ)/3` at the radius `ρ` of `ψ_{N,α}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sandwich {
    pub radius: f64,
    pub lower: f64,
    pub middle: f64,
    pub upper: f64,
}

impl Sandwich {
    pub fn holds(&self) -> bool {
        self.lower <= self.middle * (1.0 + SLACK) && self.middle <= self.upper * (1.0 + SLACK)
    }
}

/// Evaluates the sandwich with `M = T / (N C(N-1,b))`. The upper term
/// integrates `G` past `r = 1` when `3ρ > 1`.
pub fn sandwich_terms(n: usize, alpha: i64) -> Result<Sandwich> {
    let (tail, central) = tail_and_central(n, alpha)?;
    let middle = exact::ratio_to_f64(&BigInt::from(tail), &(central * BigUint::from(n)));
    let radius = boolean_radius_symmetric(&threshold_spectrum_exact(n, alpha)?, 1.0)?.radius;
    let lower = integrate_g(n, alpha, radius, I_REL_TOL)?;
    let upper = integrate_g(n, alpha, 3.0 * radius, I_REL_TOL)? / 3.0;
    Ok(Sandwich {
        radius,
        lower,
        middle,
        upper,
    })
}

pub fn sandwich_check(n: usize, alpha: i64) -> Result<bool> {
    sandwich_terms(n, alpha).map(|s| s.holds())
}

/// Radius of `ψ_{N,α}` with its ratio, McKay residual and sandwich status.
///
/// `α` is replaced by its representative with `N - α` odd. For even `N` and
/// `α < 1` that representative is `-1`; the report then describes `α = 1`,
/// which has the same radius because `ψ_{N,-1}(x) = -ψ_{N,1}(-x)`.
/// For `N ≤ 12` the radius is cross-checked against the dense transform.
pub fn threshold_radius(n: usize, alpha: f64) -> Result<ThresholdReport> {
    let spec = ThresholdSpec::new(n, alpha)?;
    if n > MAX_EXACT_N {
        return Err(Error::DimensionOutOfRange {
            n,
            min: 1,
            max: MAX_EXACT_N,
        });
    }
    let alpha_eff = families::canonical_alpha(n, alpha)?.abs();
    let radius = boolean_radius_symmetric(&threshold_spectrum_exact(n, alpha_eff)?, 1.0)?.radius;
    if n <= DENSE_CHECK_N {
        let dense = radius_of(&families::threshold(spec)?)?.radius;
        if (dense - radius).abs() > DENSE_AGREEMENT {
            return Err(Error::Numerical(format!(
                "symmetric radius {radius} and dense radius {dense} disagree at n={n}, alpha={alpha}"
            )));
        }
    }
    let sqrt_n = (n as f64).sqrt();
    Ok(ThresholdReport {
        n,
        alpha: alpha_eff,
        radius,
        ratio: radius * (alpha_eff as f64 + sqrt_n),
        mckay_c: mckay_residual(n, alpha_eff)?,
        sandwich_ok: sandwich_check(n, alpha_eff)?,
        y_value: y_function((alpha_eff as f64 + 1.0) / sqrt_n)?,
    })
}

/// `∫_0^x e^{u²/2} du` by adaptive quadrature.
pub fn gauss_growth_integral(x: f64) -> f64 {
    quadrature::integrate(|u| (0.5 * u * u).exp(), 0.0, x, GAMMA_REL_TOL)
        .expect("smooth integrand on a bounded interval")
}

/// The root `γ` of `∫_0^γ e^{u²/2} du = √(π/2)`, about `1.0354`.
pub fn gamma_constant() -> f64 {
    let (mut lo, mut hi) = (0.5f64, 2.0f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gauss_growth_integral(mid) < SQRT_PI_OVER_2 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    [lo, hi]
        .into_iter()
        .min_by(|x, y| {
            let rx = (gauss_growth_integral(*x) - SQRT_PI_OVER_2).abs();
            let ry = (gauss_growth_integral(*y) - SQRT_PI_OVER_2).abs();
            rx.total_cmp(&ry)
        })
        .expect("two candidates")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MajorityRow {
    pub n: usize,
    pub radius: f64,
    /// `radius · √n`.
    pub scaled: f64,
    /// `radius · √n / γ`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorityScan {
    pub gamma: f64,
    pub rows: Vec<MajorityRow>,
}

/// `ρ(Maj_N)` for each odd `N` in `ns`, through exact symmetric spectra.
pub fn majority_scan(ns: &[usize], workers: usize) -> Result<MajorityScan> {
    if let Some(&n) = ns.iter().find(|&&n| n % 2 == 0 || n > MAX_EXACT_N) {
        return Err(invalid("n", format!("majority scan needs odd n <= {MAX_EXACT_N}, got {n}")));
    }
    let gamma = gamma_constant();
    let rows = parallel::map_indexed(ns.len(), workers, |i| {
        let n = ns[i];
        let radius = boolean_radius_symmetric(&threshold_spectrum_exact(n, 0)?, 1.0)?.radius;
        let scaled = radius * (n as f64).sqrt();
        Ok(MajorityRow {
            n,
            radius,
            scaled,
            ratio: scaled / gamma,
        })
    });
    Ok(MajorityScan {
        gamma,
        rows: rows.into_iter().collect::<Result<_>>()?,
    })
}

/// Whether `P(x_1 + … + x_N > α) ≥ exp(-6 (1 + α/√N)²)` holds, with the
/// left side an exact binomial tail.
pub fn tail_lower_bound_check(n: usize, alpha: f64) -> Result<bool> {
    ThresholdSpec::new(n, alpha)?;
    let row = exact::binomial_row(n);
    let count: BigUint = (0..=n)
        .filter(|&k| n as f64 - 2.0 * k as f64 > alpha)
        .map(|k| &row[k])
        .sum();
    let ln_tail = exact::ln_ratio(&BigInt::from(count), &(BigUint::one() << n));
    let bound = -6.0 * (1.0 + alpha / (n as f64).sqrt()).powi(2);
    Ok(ln_tail >= bound)
}

/// The root `t_N ∈ (0, 1]` of `Σ_{k=1}^N cos(π/(⌊N/k⌋+2)) t^k = 1/2`.
pub fn tn_lower_bound(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::DimensionOutOfRange {
            n,
            min: 1,
            max: usize::MAX,
        });
    }
    let weights: Vec<f64> = (1..=n)
        .map(|k| (std::f64::consts::PI / ((n / k) as f64 + 2.0)).cos())
        .collect();
    let excess = |t: f64| weights.iter().rev().fold(0.0, |acc, w| (acc + w) * t) - 0.5;
    if excess(1.0) <= 0.0 {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if excess(lo).abs() < excess(hi).abs() { lo } else { hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{majority, threshold_table};
    use num_traits::{Signed, ToPrimitive, Zero};
    use proptest::prelude::*;

    /// `(1+z)^a (1-z)^b` by repeated convolution with signed binomial rows.
    fn convolution_oracle(a: usize, b: usize) -> Vec<BigInt> {
        let plus: Vec<BigInt> = exact::binomial_row(a).into_iter().map(BigInt::from).collect();
        let minus: Vec<BigInt> = exact::binomial_row(b)
            .into_iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { BigInt::from(c) } else { -BigInt::from(c) })
            .collect();
        let mut out = vec![BigInt::zero(); a + b + 1];
        for (i, p) in plus.iter().enumerate() {
            for (j, m) in minus.iter().enumerate() {
                out[i + j] += p * m;
            }
        }
        out
    }

    fn valid_alphas(n: usize) -> impl Iterator<Item = i64> {
        (0..n as i64).filter(move |a| (n as i64 - a) % 2 == 1)
    }

    #[test]
    fn recurrence_matches_convolution() {
        for a in 0..40 {
            for b in 0..40 {
                assert_eq!(generating_coeffs(a, b), convolution_oracle(a, b), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn spectrum_examples() {
        let s = threshold_spectrum_exact(3, 0).unwrap();
        assert_eq!(s.levels_f64(), vec![0.0, 0.5, 0.0, -0.5]);
        for n in (1..60).step_by(2) {
            let s = threshold_spectrum_exact(n, 0).unwrap();
            for m in (0..=n).step_by(2) {
                assert!(s.is_zero_level(m), "n={n} level {m}");
            }
        }
        assert!(matches!(threshold_spectrum_exact(4, 0), Err(Error::ParityViolation { .. })));
        assert!(threshold_spectrum_exact(3, 3).is_err());
        assert!(threshold_spectrum_exact(3, -2).is_err());
        assert!(threshold_spectrum_exact(MAX_EXACT_N + 2, 0).is_err());
    }

    #[test]
    fn spectrum_matches_dense_transform() {
        for n in 1..=12 {
            for alpha in std::iter::once(-1).chain(valid_alphas(n)) {
                if (n as i64 - alpha) % 2 == 0 {
                    continue;
                }
                let exact = threshold_spectrum_exact(n, alpha).unwrap().levels_f64();
                let dense = threshold_table(n, alpha as f64).unwrap().walsh_transform();
                for (subset, c) in dense.coeffs().iter().enumerate() {
                    let level = subset.count_ones() as usize;
                    assert!((exact[level] - c).abs() < 1e-12, "n={n} alpha={alpha} subset={subset}");
                }
            }
        }
    }

    #[test]
    fn maj_identity_examples() {
        assert!((maj_identity_eval(3, 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((maj_identity_eval(3, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((maj_identity_eval(1, 0.7).unwrap() - 1.0).abs() < 1e-15);
        assert!(maj_identity_eval(4, 0.5).is_err());
    }

    #[test]
    fn maj_identity_matches_exact_spectrum() {
        for n in (1..=25).step_by(2) {
            let s = threshold_spectrum_exact(n, 0).unwrap();
            let row = exact::binomial_row(n - 1);
            for r in [0.0f64, 0.1, 0.37, 0.8, 1.0] {
                let sum: f64 = (1..=n)
                    .map(|m| {
                        let c = s.level_coeffs()[m].abs() * BigRational::from(BigInt::from(row[m - 1].clone()));
                        c.to_f64().unwrap() * r.powi(m as i32 - 1)
                    })
                    .sum();
                let id = maj_identity_eval(n, r).unwrap();
                assert!((sum - id).abs() <= 1e-9 * id, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn g_examples() {
        assert_eq!(g_function(5, 2, 0.0).unwrap(), 1.0);
        for r in [0.0, 0.2, 0.5, 1.0] {
            let g = g_function(7, 0, r).unwrap();
            assert!((g - (1.0 + r * r).powi(3)).abs() < 1e-12 * g);
        }
        assert!((g_function(3, 0, 1.0).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(g_function(1, 0, 0.6).unwrap(), 1.0);
        assert!((g_function(4, 3, 0.5).unwrap() - 1.5f64.powi(3)).abs() < 1e-12);
        assert!(g_function(3, 0, 1.5).is_err());
        assert!(g_function(3, 3, 0.5).is_err());
        assert!(g_function(3, -1, 0.5).is_err());
    }

    /// Brute supremum over a fine grid of the unit circle.
    fn g_by_torus_sup(n: usize, alpha: i64, r: f64) -> f64 {
        let a = (n as f64 + alpha as f64 - 1.0) / 2.0;
        let b = (n as f64 - alpha as f64 - 1.0) / 2.0;
        let steps = 200_000;
        (0..=steps)
            .map(|j| {
                let t = std::f64::consts::PI * j as f64 / steps as f64;
                let (s, c) = t.sin_cos();
                let plus = ((1.0 + r * c).powi(2) + (r * s).powi(2)).sqrt();
                let minus = ((1.0 - r * c).powi(2) + (r * s).powi(2)).sqrt();
                plus.powf(a) * minus.powf(b)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn g_matches_torus_supremum() {
        for &(n, alpha) in &[(5, 2), (8, 3), (9, 4), (12, 5), (6, 1)] {
            let ra = r_alpha(n, alpha).unwrap();
            for r in [0.5 * ra, ra, 0.3, 0.7, 1.0, 1.7, 1.0 / ra + 0.5] {
                let g = ln_g(n, alpha, ra, r).exp();
                let sup = g_by_torus_sup(n, alpha, r);
                assert!((g - sup).abs() <= 1e-6 * sup, "n={n} alpha={alpha} r={r}: {g} vs {sup}");
            }
        }
    }

    #[test]
    fn g_monotone_and_at_least_one() {
        for &(n, alpha) in &[(3, 0), (10, 3), (25, 12), (101, 10), (2001, 1000)] {
            let mut prev = 0.0;
            for i in 0..=1000 {
                let g = g_function(n, alpha, i as f64 / 1000.0).unwrap();
                assert!(g >= 1.0 && g >= prev, "n={n} alpha={alpha} i={i}");
                prev = g;
            }
        }
    }

    #[test]
    fn i_examples() {
        assert_eq!(i_integral(9, 2, 0.0).unwrap(), 0.0);
        for rho in [0.1f64, 0.5, 1.0] {
            let closed = rho + rho.powi(3) / 3.0;
            assert!((i_integral(3, 0, rho).unwrap() - closed).abs() < 1e-10 * closed);
        }
        assert!((i_integral(3, 0, 1.0).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert!(i_integral(3, 0, 1.2).is_err());
    }

    #[test]
    fn i_over_r_nondecreasing() {
        for &(n, alpha) in &[(5, 0), (12, 5), (101, 30)] {
            let mut prev = 0.0;
            for i in 1..=100 {
                let r = i as f64 / 100.0;
                let v = i_integral(n, alpha, r).unwrap() / r;
                assert!(v >= 1.0 && v >= prev * (1.0 - 1e-12), "n={n} alpha={alpha} r={r}");
                prev = v;
            }
        }
    }

    #[test]
    fn mckay_examples() {
        let c = mckay_residual(3, 0).unwrap();
        let y = y_function(1.0 / 3f64.sqrt()).unwrap();
        let direct = 3f64.sqrt() * (4.0 / (3f64.sqrt() * 2.0 * y)).ln();
        assert!((c - direct).abs() < 1e-12);
        assert!((c - 0.56).abs() < 0.05);
        for (n, alpha) in [(101, 0), (15, 4), (2001, 44), (1, 0)] {
            let c = mckay_residual(n, alpha).unwrap();
            assert!((0.0..=SQRT_PI_OVER_2).contains(&c), "n={n} alpha={alpha}: {c}");
        }
        assert!(matches!(mckay_residual(4, 0), Err(Error::ParityViolation { .. })));
    }

    #[test]
    fn sandwich_examples() {
        for (n, alpha) in [(3, 0), (21, 0), (15, 8), (1, 0), (2, 1), (25, 24)] {
            let s = sandwich_terms(n, alpha).unwrap();
            assert!(s.holds(), "n={n} alpha={alpha}: {s:?}");
        }
        // For majority the lower inequality is an equality.
        let s = sandwich_terms(21, 0).unwrap();
        assert!((s.lower - s.middle).abs() < 1e-9 * s.middle);
        assert!(sandwich_check(6, 0).is_err());
    }

    #[test]
    fn threshold_radius_examples() {
        let r = threshold_radius(3, 0.0).unwrap();
        let cubic = majority(3).map(|f| radius_of(&f).unwrap().radius).unwrap();
        assert!((r.radius - cubic).abs() < 1e-12);
        assert!((r.radius - 0.596).abs() < 1e-3);
        assert!((r.ratio - 1.03).abs() < 0.01);
        assert!(r.sandwich_ok);
        let r = threshold_radius(12, 3.0).unwrap();
        assert_eq!(r.alpha, 3);
        let r = threshold_radius(4, 0.0).unwrap();
        assert_eq!(r.alpha, 1);
        let dense = radius_of(&threshold_table(4, 0.0).unwrap()).unwrap().radius;
        assert!((r.radius - dense).abs() < 1e-12);
        assert!(threshold_radius(3, 3.0).is_err());
        assert!(threshold_radius(0, 0.0).is_err());
    }

    /// `P(ρ) - 1` in exact rational arithmetic.
    fn exact_excess(s: &SymmetricSpectrum, rho: f64) -> BigRational {
        let rho = BigRational::from_float(rho).unwrap();
        let row = exact::binomial_row(s.n());
        let mut power = BigRational::one();
        let mut total = -BigRational::one();
        for (m, q) in s.level_coeffs().iter().enumerate() {
            total += q.abs() * BigRational::from(BigInt::from(row[m].clone())) * &power;
            power *= &rho;
        }
        total
    }

    #[test]
    fn strongly_biased_radii_bracket_the_exact_root() {
        for (n, alpha) in [(501, 250), (101, 80), (25, 24)] {
            let s = threshold_spectrum_exact(n, alpha).unwrap();
            let r = boolean_radius_symmetric(&s, 1.0).unwrap().radius;
            assert!(exact_excess(&s, r * (1.0 - 1e-9)).is_negative(), "n={n} alpha={alpha}");
            assert!(exact_excess(&s, r * (1.0 + 1e-9)).is_positive(), "n={n} alpha={alpha}");
        }
    }

    #[test]
    fn threshold_radius_agrees_with_dense_for_real_alpha() {
        for n in 1..=10 {
            for k in 0..(4 * n) {
                let alpha = k as f64 / 4.0;
                threshold_radius(n, alpha).unwrap();
            }
        }
    }

    #[test]
    fn gamma_examples() {
        // Power series ∫_0^x e^{u²/2} du = Σ x^{2k+1} / ((2k+1) 2^k k!).
        let series = |x: f64| {
            let mut term = x;
            let mut sum = 0.0;
            for k in 0..60 {
                sum += term / (2 * k + 1) as f64;
                term *= x * x / (2.0 * (k + 1) as f64);
            }
            sum
        };
        let g = gamma_constant();
        assert!((series(g) - SQRT_PI_OVER_2).abs() <= 1e-12);
        assert!(g > 1.0 && g < 1.1);
        assert!(series(1.0) < SQRT_PI_OVER_2 && series(1.1) > SQRT_PI_OVER_2);
        assert!((g - 1.035).abs() < 1e-3);
    }

    #[test]
    fn majority_scan_examples() {
        let scan = majority_scan(&[1, 3, 5, 101], 2).unwrap();
        assert_eq!(scan.rows[0].scaled, 1.0);
        assert!((scan.rows[0].ratio - 1.0 / scan.gamma).abs() < 1e-15);
        assert!((scan.rows[1].scaled - 1.032).abs() < 1e-3);
        assert_eq!(scan, majority_scan(&[1, 3, 5, 101], 1).unwrap());
        assert!(majority_scan(&[3, 4], 1).is_err());
    }

    #[test]
    fn tail_bound_examples() {
        assert!(tail_lower_bound_check(3, 0.0).unwrap());
        assert!(tail_lower_bound_check(100, 50.0).unwrap());
        for n in 1..=60 {
            for k in 0..n {
                assert!(tail_lower_bound_check(n, k as f64).unwrap(), "n={n} alpha={k}");
            }
        }
        assert!(tail_lower_bound_check(3, 3.0).is_err());
    }

    #[test]
    fn tn_examples() {
        assert!((tn_lower_bound(1).unwrap() - 1.0).abs() < 1e-12);
        let disc = (0.5f64.sqrt().powi(2) + 4.0 * 0.5 * 0.5).sqrt();
        let t2 = (-(0.5f64.sqrt()) + disc) / (2.0 * 0.5);
        assert!((tn_lower_bound(2).unwrap() - t2).abs() < 1e-12);
        assert!((t2 - 0.5176).abs() < 1e-4);
        let mut prev = 1.0;
        for n in 1..=50 {
            let t = tn_lower_bound(n).unwrap();
            assert!(t > 0.0 && t <= prev + 1e-15, "n={n}");
            prev = t;
        }
        assert!(tn_lower_bound(0).is_err());
    }

    proptest! {
        #[test]
        fn g_branches_meet_at_branch_point(n in 2usize..300, frac in 0.0f64..1.0) {
            let alpha = ((n - 1) as f64 * frac).floor() as i64;
            let ra = r_alpha(n, alpha).unwrap();
            let (outer, inner) = g_branch_values(n, alpha, ra).unwrap();
            prop_assert!((outer - inner).abs() <= 1e-9 * outer);
        }

        #[test]
        fn level_weights_positive_for_nonzero_levels(n in 1usize..200, frac in 0.0f64..1.0) {
            let mut alpha = ((n - 1) as f64 * frac).floor() as i64;
            if (n as i64 - alpha) % 2 == 0 { alpha -= 1; }
            let s = threshold_spectrum_exact(n, alpha).unwrap();
            // |ψ̂| ≤ 1 on every level.
            for m in 0..=n {
                prop_assert!(s.log_abs()[m] <= 1e-12);
            }
        }
    }
}
