//! The Boolean radius: the unique `ρ ∈ (0,1]` where the majorant
//! `P(ρ) = Σ_m W_m ρ^m` meets `‖f‖_∞`, with `W_m = Σ_{|S|=m} |f̂(S)|`.
//!
//! `P(0) = |f̂(∅)| ≤ ‖f‖_∞ ≤ Σ_S |f̂(S)| = P(1)` and `P` is increasing for
//! nonconstant `f`, so bisection on `[0,1]` always brackets the root.
//! Constant functions (including zero) have no finite root and get the
//! `+inf` sentinel.

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Serialize, Serializer};

use crate::cube::{BooleanFunction, Spectrum, SymmetricSpectrum, ZERO_TOL};
use crate::error::{invalid, Error, Result};
use crate::exact;
use crate::families;
use crate::parallel;

/// Width at which the bracketing interval is considered converged. The
/// solver keeps halving past this until the interval can no longer be split.
pub const ROOT_TOL: f64 = 1e-12;

/// Bound on `|P(ρ) - ‖f‖_∞|` relative to `max(1, ‖f‖_∞)` for every finite
/// result.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Profiles with a log-weight above this are evaluated in the log domain.
pub const LOG_DOMAIN_THRESHOLD: f64 = 700.0;

const MAX_BISECTION_STEPS: u32 = 200;

/// Relative slack on `P(1) ≥ ‖f‖_∞` before a profile is rejected.
const PROFILE_SLACK: f64 = 1e-9;

/// Per-degree absolute coefficient sums together with the sup norm.
///
/// The solver works with the gap `‖f‖_∞ - W_0` and the higher levels
/// `H(ρ) = Σ_{m≥1} W_m ρ^m`, since `P(ρ) = ‖f‖_∞` is `H(ρ) = gap`. Keeping
/// the gap separate matters for strongly biased functions, where `W_0` agrees
/// with `‖f‖_∞` to far more digits than `f64` holds.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelProfile {
    n: usize,
    weights: Vec<f64>,
    log_weights: Vec<f64>,
    sup_norm: f64,
    log_gap: f64,
    /// Weights are exact, so any nonzero higher weight is significant.
    exact: bool,
}

fn check_sup(sup: f64) -> Result<()> {
    if !(sup >= 0.0) || sup.is_infinite() {
        return Err(invalid("sup", format!("sup norm must be finite and >= 0, got {sup}")));
    }
    Ok(())
}

// `ln(sup - w0)`, `-inf` when the difference is not positive.
fn float_log_gap(sup: f64, w0: f64) -> f64 {
    let gap = sup - w0;
    if gap > 0.0 {
        gap.ln()
    } else {
        f64::NEG_INFINITY
    }
}

impl LevelProfile {
    pub fn from_weights(n: usize, weights: Vec<f64>, sup: f64) -> Result<Self> {
        check_sup(sup)?;
        if weights.len() != n + 1 {
            return Err(Error::LengthMismatch {
                n,
                expected: n + 1,
                got: weights.len(),
            });
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || w.is_infinite()) {
            return Err(invalid("weights", format!("weights must be finite and >= 0, got {w}")));
        }
        let log_weights = weights.iter().map(|w| w.ln()).collect();
        let log_gap = float_log_gap(sup, weights[0]);
        Ok(Self {
            n,
            weights,
            log_weights,
            sup_norm: sup,
            log_gap,
            exact: false,
        })
    }

    /// Builds a profile from `ln W_m` (`-inf` for empty levels). The linear
    /// view may overflow to `+inf`; the solver then works on the logs.
    pub fn from_log_weights(n: usize, log_weights: Vec<f64>, sup: f64) -> Result<Self> {
        check_sup(sup)?;
        if log_weights.len() != n + 1 {
            return Err(Error::LengthMismatch {
                n,
                expected: n + 1,
                got: log_weights.len(),
            });
        }
        if let Some(l) = log_weights.iter().find(|l| l.is_nan() || **l == f64::INFINITY) {
            return Err(invalid("log_weights", format!("invalid log weight {l}")));
        }
        let weights: Vec<f64> = log_weights.iter().map(|l| l.exp()).collect();
        let log_gap = float_log_gap(sup, weights[0]);
        Ok(Self {
            n,
            weights,
            log_weights,
            sup_norm: sup,
            log_gap,
            exact: false,
        })
    }

    /// Replaces the gap `‖f‖_∞ - W_0` by an exactly computed `ln` value and
    /// marks the weights as exact: the profile is then constant only if every
    /// higher weight is zero.
    pub fn with_exact_log_gap(mut self, log_gap: f64) -> Self {
        self.log_gap = log_gap;
        self.exact = true;
        self
    }

    pub fn of_function(f: &BooleanFunction) -> Self {
        level_profile(&f.walsh_transform(), f.sup_norm()).expect("sup norm of a table is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    /// `ln(‖f‖_∞ - W_0)`.
    pub fn log_gap(&self) -> f64 {
        self.log_gap
    }

    fn log_domain(&self) -> bool {
        let extreme = |l: f64| l.is_finite() && l.abs() > LOG_DOMAIN_THRESHOLD;
        self.log_weights.iter().any(|&l| extreme(l)) || extreme(self.log_gap)
    }

    fn is_constant(&self) -> bool {
        let higher = &self.log_weights[1..];
        if higher.iter().all(|&l| l == f64::NEG_INFINITY) {
            return true;
        }
        if self.exact || self.log_domain() {
            return false;
        }
        let sum: f64 = self.weights[1..].iter().sum();
        sum <= ZERO_TOL * self.sup_norm
    }

    fn log_majorant(&self, rho: f64) -> f64 {
        let ln_rho = rho.ln();
        let terms = self
            .log_weights
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_finite())
            .map(|(m, &l)| if m == 0 { l } else { l + m as f64 * ln_rho });
        log_sum_exp(terms)
    }

    fn linear_majorant(&self, rho: f64) -> f64 {
        self.weights.iter().rev().fold(0.0, |acc, &w| acc * rho + w)
    }

    /// `ln H(ρ)`.
    fn log_higher(&self, rho: f64) -> f64 {
        let ln_rho = rho.ln();
        log_sum_exp(
            self.log_weights
                .iter()
                .enumerate()
                .skip(1)
                .map(|(m, &l)| l + m as f64 * ln_rho),
        )
    }

    /// `H(ρ)`.
    fn higher(&self, rho: f64) -> f64 {
        self.weights[1..].iter().rev().fold(0.0, |acc, &w| acc * rho + w) * rho
    }

    /// `H(ρ) - gap` in whichever domain the profile is evaluated; only the
    /// sign is comparable across domains.
    fn excess(&self, rho: f64, log_domain: bool) -> f64 {
        if log_domain {
            self.log_higher(rho) - self.log_gap
        } else {
            self.higher(rho) - self.log_gap.exp()
        }
    }

    /// `|H(ρ) - gap|`, which equals `|P(ρ) - ‖f‖_∞|`.
    fn residual(&self, rho: f64, log_domain: bool) -> f64 {
        let gap = self.log_gap.exp();
        if log_domain {
            let h = self.log_higher(rho);
            gap * (h - self.log_gap).exp_m1().abs()
        } else {
            (self.higher(rho) - gap).abs()
        }
    }
}

fn log_sum_exp(terms: impl Iterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.filter(|t| *t > f64::NEG_INFINITY).collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// Groups `|f̂(S)|` by `|S|`.
pub fn level_profile(s: &Spectrum, sup: f64) -> Result<LevelProfile> {
    let mut weights = vec![0.0; s.n() + 1];
    for (subset, c) in s.coeffs().iter().enumerate() {
        weights[subset.count_ones() as usize] += c.abs();
    }
    LevelProfile::from_weights(s.n(), weights, sup)
}

/// `P(ρ) = Σ_m W_m ρ^m`, switching to log-domain evaluation for profiles
/// whose weights would overflow.
pub fn majorant(p: &LevelProfile, rho: f64) -> f64 {
    assert!(rho >= 0.0, "majorant needs rho >= 0, got {rho}");
    if p.log_domain() {
        p.log_majorant(rho).exp()
    } else {
        p.linear_majorant(rho)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Bisection,
    ClosedForm,
    BruteForce,
}

/// Solved radius with diagnostics. `radius` is `+inf` for constant functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusResult {
    pub radius: f64,
    pub residual: f64,
    pub iterations: u32,
    pub method: Method,
}

impl RadiusResult {
    pub fn is_finite(&self) -> bool {
        self.radius.is_finite()
    }

    fn infinite() -> Self {
        Self {
            radius: f64::INFINITY,
            residual: 0.0,
            iterations: 0,
            method: Method::ClosedForm,
        }
    }
}

impl Serialize for RadiusResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(untagged)]
        enum Radius {
            Finite(f64),
            Text(&'static str),
        }
        #[derive(Serialize)]
        struct Json {
            radius: Radius,
            residual: f64,
            iterations: u32,
            method: Method,
        }
        Json {
            radius: if self.radius.is_finite() {
                Radius::Finite(self.radius)
            } else {
                Radius::Text("inf")
            },
            residual: self.residual,
            iterations: self.iterations,
            method: self.method,
        }
        .serialize(serializer)
    }
}

pub fn boolean_radius(p: &LevelProfile) -> Result<RadiusResult> {
    if p.is_constant() {
        return Ok(RadiusResult::infinite());
    }
    let sup = p.sup_norm;
    let log_domain = p.log_domain();
    // Rounding scale of H(1) - gap: the gap itself for exact weights, the
    // sup norm for weights summed in floating point.
    let noise = if p.exact { p.log_gap.exp() } else { sup };

    if p.log_gap == f64::NEG_INFINITY {
        if p.weights[0] > sup * (1.0 + PROFILE_SLACK) {
            return Err(Error::NotAFunctionProfile {
                total: majorant(p, 1.0),
                sup,
            });
        }
        return Err(Error::Numerical(format!(
            "level-0 weight {} equals the sup norm {sup} of a nonconstant profile",
            p.weights[0]
        )));
    }
    let at_one = p.excess(1.0, log_domain);
    let rel_at_one = if log_domain {
        at_one.exp_m1() * p.log_gap.exp() / noise
    } else {
        at_one / noise
    };
    if rel_at_one < -PROFILE_SLACK {
        return Err(Error::NotAFunctionProfile {
            total: majorant(p, 1.0),
            sup,
        });
    }
    if rel_at_one <= ZERO_TOL {
        return Ok(RadiusResult {
            radius: 1.0,
            residual: p.residual(1.0, log_domain),
            iterations: 0,
            method: Method::ClosedForm,
        });
    }

    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut iterations = 0;
    while iterations < MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if p.excess(mid, log_domain) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    debug_assert!(hi - lo <= ROOT_TOL);
    let (radius, residual) = [hi, lo]
        .into_iter()
        .filter(|&r| r > 0.0)
        .map(|r| (r, p.residual(r, log_domain)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("hi is positive");
    if !(residual <= RESIDUAL_TOL * sup.max(1.0)) {
        return Err(Error::Numerical(format!(
            "radius {radius} leaves residual {residual} after {iterations} steps"
        )));
    }
    Ok(RadiusResult {
        radius,
        residual,
        iterations,
        method: Method::Bisection,
    })
}

/// Radius of a permutation-invariant function from its exact level
/// coefficients, with level weights `C(N,m) |ψ̂([m])|` taken in log form.
pub fn boolean_radius_symmetric(s: &SymmetricSpectrum, sup: f64) -> Result<RadiusResult> {
    check_sup(sup)?;
    let profile = LevelProfile::from_log_weights(s.n(), s.log_level_weights(), sup)?;
    // The gap sup - |ψ̂(∅)| in exact arithmetic.
    let sup_q = BigRational::from_float(sup).expect("finite sup");
    let gap = sup_q - s.level_coeffs()[0].abs();
    let log_gap = if gap.is_positive() {
        exact::ln_ratio(gap.numer(), gap.denom().magnitude())
    } else {
        f64::NEG_INFINITY
    };
    boolean_radius(&profile.with_exact_log_gap(log_gap))
}

pub fn radius_of(f: &BooleanFunction) -> Result<RadiusResult> {
    boolean_radius(&LevelProfile::of_function(f))
}

/// Infimum of the member radii; constant members do not constrain it.
pub fn class_radius(profiles: &[LevelProfile]) -> Result<f64> {
    if profiles.is_empty() {
        return Err(invalid("profiles", "class must be nonempty"));
    }
    profiles.iter().try_fold(f64::INFINITY, |best, p| {
        Ok(best.min(boolean_radius(p)?.radius))
    })
}

/// `2^{1/N} - 1`, the radius of the class of all real functions on `N` variables.
pub fn bn_radius_formula(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::DimensionOutOfRange {
            n,
            min: 1,
            max: usize::MAX,
        });
    }
    Ok((std::f64::consts::LN_2 / n as f64).exp_m1())
}

/// Largest dimension for exhaustive enumeration (`2^{2^4}` functions).
pub const MAX_BRUTE_FORCE_N: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForce {
    pub radius: RadiusResult,
    pub minimizer: BooleanFunction,
    /// Enumeration index of the minimizer; bit `i` set means value `-1` at point `i`.
    pub index: u64,
    pub functions: u64,
}

/// Minimum radius over every nonconstant `±1`-valued function on `n ≤ 4`
/// variables.
///
/// Function `k` takes the value `-1` at point `i` exactly when bit `i` of `k`
/// is set. Ties go to the smallest `k`, so the one-point flip at the all-ones
/// point (`k = 1`) is reported when it attains the minimum.
pub fn brute_force_bn_radius(n: usize, workers: usize) -> Result<BruteForce> {
    if n == 0 || n > MAX_BRUTE_FORCE_N {
        return Err(Error::DimensionOutOfRange {
            n,
            min: 1,
            max: MAX_BRUTE_FORCE_N,
        });
    }
    let points = 1usize << n;
    let total: u64 = 1 << points;
    // Skip k = 0 and k = total - 1, the two constants.
    let count = (total - 2) as usize;
    let table = |k: u64| -> Vec<f64> {
        (0..points)
            .map(|i| if k >> i & 1 == 1 { -1.0 } else { 1.0 })
            .collect()
    };
    let workers = workers.max(1);
    let block = count.div_ceil(workers);
    let best_per_block = parallel::map_indexed(workers, workers, |w| {
        let mut best: Option<(f64, u64)> = None;
        for offset in (w * block).min(count)..((w + 1) * block).min(count) {
            let k = offset as u64 + 1;
            let f = BooleanFunction::from_truth_table(n, table(k))?;
            let r = radius_of(&f)?.radius;
            if best.map_or(true, |(b, _)| r < b) {
                best = Some((r, k));
            }
        }
        Ok::<_, Error>(best)
    });
    let mut best: Option<(f64, u64)> = None;
    for candidate in best_per_block {
        if let Some((r, k)) = candidate? {
            let better = match best {
                None => true,
                Some((b, bk)) => r < b || (r == b && k < bk),
            };
            if better {
                best = Some((r, k));
            }
        }
    }
    let (_, index) = best.expect("at least two nonconstant functions");
    let minimizer = BooleanFunction::from_truth_table(n, table(index))?;
    let solved = radius_of(&minimizer)?;
    Ok(BruteForce {
        radius: RadiusResult {
            method: Method::BruteForce,
            ..solved
        },
        minimizer,
        index,
        functions: count as u64,
    })
}

/// Smallest radius over `trials` random-sign `m`-homogeneous functions with
/// unit coefficients: an upper-bound estimate for the radius of the class of
/// `m`-homogeneous functions on `n` variables.
///
/// Trial `t` draws its signs from `derive_seed(seed, t)`, so the result does
/// not depend on `workers`.
pub fn homogeneous_class_scan(
    n: usize,
    m: usize,
    trials: usize,
    seed: u64,
    workers: usize,
) -> Result<f64> {
    if n == 0 || n > families::MAX_RANDOM_SIGN_N {
        return Err(Error::DimensionOutOfRange {
            n,
            min: 1,
            max: families::MAX_RANDOM_SIGN_N,
        });
    }
    if m == 0 || m > n {
        return Err(invalid("m", format!("need 1 <= m <= {n}, got {m}")));
    }
    if trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    let unit = vec![1.0; families::subsets_of_size(n, m).len()];
    let radii = parallel::map_indexed(trials, workers, |t| {
        let (f, _) =
            families::random_sign_homogeneous(n, m, &unit, parallel::derive_seed(seed, t as u64))?;
        radius_of(&f).map(|r| r.radius)
    });
    radii
        .into_iter()
        .try_fold(f64::INFINITY, |best, r| Ok(best.min(r?)))
}

/// Reference scale `N^{1/(2m)} C(N,m)^{-1/(2m)}` for the radius of the
/// `m`-homogeneous class.
pub fn homogeneous_scale(n: usize, m: usize) -> f64 {
    let ln_binom = crate::exact::ln_big(&crate::exact::binomial(n, m));
    (((n as f64).ln() - ln_binom) / (2.0 * m as f64)).exp()
}
