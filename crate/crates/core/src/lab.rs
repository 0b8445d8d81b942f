//! Randomized and exhaustive checks of the inequalities behind the radii.
//!
//! Every check returns an [`InequalityReport`] whose margin is `rhs - lhs`
//! (minimised over the instances it covers). An instance fails when
//! `lhs > rhs + SLACK · max(1, |rhs|)`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cube::{BooleanFunction, Spectrum};
use crate::error::{invalid, Error, Result};
use crate::families;
use crate::parallel;
use crate::radius::radius_of;

pub const SLACK: f64 = 1e-9;

/// Largest dimension for random draws.
pub const MAX_LAB_N: usize = 14;

/// Tolerance on `‖f‖_∞ ≤ 1` preconditions, covering rescaling round-off.
const SUP_TOL: f64 = 1e-12;

/// Hypercontractive `(p, q)` pairs; each is checked at `ρ = 0`, half the
/// admissible bound and the bound itself.
pub const HYPER_GRID: [(f64, f64); 7] = [
    (1.0, 1.0),
    (1.5, 2.0),
    (2.0, 4.0),
    (1.5, 3.0),
    (2.0, 2.0),
    (1.25, 5.0),
    (3.0, 6.0),
];

/// `ε` values used by the level-`m` suite.
pub const EPSILON_GRID: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub suite: String,
    pub samples: u64,
    pub failures: u64,
    pub worst_margin: f64,
    pub witness: Option<BooleanFunction>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<InequalityReport>,
}

impl InequalityReport {
    pub fn empty(suite: &str) -> Self {
        Self {
            suite: suite.to_string(),
            samples: 0,
            failures: 0,
            worst_margin: f64::INFINITY,
            witness: None,
            parts: Vec::new(),
        }
    }

    fn record(&mut self, lhs: f64, rhs: f64, f: &BooleanFunction) {
        let margin = rhs - lhs;
        if lhs > rhs + SLACK * rhs.abs().max(1.0) || margin.is_nan() {
            self.failures += 1;
        }
        if margin < self.worst_margin || (margin.is_nan() && !self.worst_margin.is_nan()) {
            self.worst_margin = margin;
            self.witness = Some(f.clone());
        }
    }

    fn single(suite: &str, lhs: f64, rhs: f64, f: &BooleanFunction) -> Self {
        let mut r = Self::empty(suite);
        r.samples = 1;
        r.record(lhs, rhs, f);
        r
    }

    /// Sums counts and keeps the smaller margin; on ties the receiver's
    /// witness wins, so merging in a fixed order is deterministic.
    pub fn merge(&mut self, other: InequalityReport) {
        self.samples += other.samples;
        self.failures += other.failures;
        if other.worst_margin < self.worst_margin {
            self.worst_margin = other.worst_margin;
            self.witness = other.witness;
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn check_sup_at_most_one(f: &BooleanFunction) -> Result<()> {
    let sup = f.sup_norm();
    if sup > 1.0 + SUP_TOL {
        return Err(Error::SupNormAboveOne { sup });
    }
    Ok(())
}

fn check_degree(s: &Spectrum, d: usize) -> Result<()> {
    let degree = s.degree();
    if degree > d {
        return Err(Error::DegreeExceeded { degree, bound: d });
    }
    Ok(())
}

/// `|f̂(A)| + |f̂(B)| ≤ 1` for all `A ≠ B` when `‖f‖_∞ ≤ 1`.
pub fn wiener_pair_check(f: &BooleanFunction) -> Result<InequalityReport> {
    check_sup_at_most_one(f)?;
    let mut abs: Vec<f64> = f.walsh_transform().coeffs().iter().map(|c| c.abs()).collect();
    abs.sort_by(|a, b| b.total_cmp(a));
    Ok(InequalityReport::single("wiener_pair", abs[0] + abs[1], 1.0, f))
}

/// `|f̂(∅) + g(x)/2| + |g(x)/2| ≤ ‖f‖_∞` at every point, `g = f - f̂(∅)`.
pub fn split_pointwise_check(f: &BooleanFunction) -> Result<InequalityReport> {
    let mean = f.expectation();
    let sup = f.sup_norm();
    let mut r = InequalityReport::empty("split_pointwise");
    r.samples = 1;
    let lhs = f
        .values()
        .iter()
        .map(|v| {
            let half = 0.5 * (v - mean);
            (mean + half).abs() + half.abs()
        })
        .fold(f64::NEG_INFINITY, f64::max);
    r.record(lhs, sup, f);
    Ok(r)
}

/// `E|f - f̂(∅)| ≤ 2(1 - |f̂(∅)|)` when `‖f‖_∞ ≤ 1`.
pub fn caratheodory_check(f: &BooleanFunction) -> Result<InequalityReport> {
    check_sup_at_most_one(f)?;
    let mean = f.expectation();
    let lhs = f.values().iter().map(|v| (v - mean).abs()).sum::<f64>() / f.values().len() as f64;
    Ok(InequalityReport::single("caratheodory", lhs, 2.0 * (1.0 - mean.abs()), f))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharpnessRow {
    pub lambda: f64,
    /// `E|f - f̂(∅)|^p` for the biased indicator.
    pub lhs: f64,
    /// `2 (1 - |f̂(∅)|) = 4λ`.
    pub scale: f64,
    /// `lhs^{1/p} / scale`.
    pub ratio: f64,
}

/// Evaluates `E|f - f̂(∅)|^p = (2-2λ)^p λ + (2λ)^p (1-λ)` on the biased
/// indicators with dyadic `λ` and reports it against `2(1 - |f̂(∅)|)`.
/// At `p = 1` the ratio is `1 - λ`, which tends to 1: the constant 2 cannot
/// be lowered. For `p > 1` the ratio is unbounded as `λ → 0`.
pub fn caratheodory_sharpness(lambdas: &[f64], p: f64) -> Result<Vec<SharpnessRow>> {
    if !(p >= 1.0) || p.is_infinite() {
        return Err(invalid("p", format!("need finite p >= 1, got {p}")));
    }
    lambdas
        .iter()
        .map(|&lambda| {
            let n = dyadic_dimension(lambda)?;
            let f = families::biased_indicator(n, lambda)?;
            let mean = f.expectation();
            let lhs = f.values().iter().map(|v| (v - mean).abs().powf(p)).sum::<f64>()
                / f.values().len() as f64;
            let scale = 2.0 * (1.0 - mean.abs());
            Ok(SharpnessRow {
                lambda,
                lhs,
                scale,
                ratio: lhs.powf(1.0 / p) / scale,
            })
        })
        .collect()
}

/// Smallest `n ≥ 1` with `λ 2^n` integral.
fn dyadic_dimension(lambda: f64) -> Result<usize> {
    (1..=crate::cube::MAX_DENSE_N)
        .find(|&n| (lambda * (1u64 << n) as f64).fract() == 0.0)
        .ok_or_else(|| invalid("lambda", format!("{lambda} is not dyadic with denominator <= 2^24")))
}

/// `(Σ_{0<|S|≤d} f̂(S)²)^{1/2} ≤ 2 e^d (1 - |f̂(∅)|)` for `‖f‖_∞ ≤ 1`, `deg f ≤ d`.
pub fn degree_l2_check(f: &BooleanFunction, d: usize) -> Result<InequalityReport> {
    check_sup_at_most_one(f)?;
    let s = f.walsh_transform();
    check_degree(&s, d)?;
    let lhs = s.coeffs()[1..].iter().map(|c| c * c).sum::<f64>().sqrt();
    let rhs = 2.0 * (d as f64).exp() * (1.0 - s.coeff(0).abs());
    Ok(InequalityReport::single("degree_l2", lhs, rhs, f))
}

/// `‖f‖_2 ≤ e^d ‖f‖_1` for `deg f ≤ d`.
pub fn norm_comparison_check(f: &BooleanFunction, d: usize) -> Result<InequalityReport> {
    check_degree(&f.walsh_transform(), d)?;
    let lhs = f.p_norm(2.0)?;
    let rhs = (d as f64).exp() * f.p_norm(1.0)?;
    Ok(InequalityReport::single("norm_comparison", lhs, rhs, f))
}

/// Largest admissible noise rate `√((p-1)/(q-1))`, or 1 when `p = q`.
pub fn hyper_bound(p: f64, q: f64) -> Result<f64> {
    if !(p >= 1.0 && q >= p) || q.is_infinite() {
        return Err(invalid("p, q", format!("need 1 <= p <= q < inf, got p={p}, q={q}")));
    }
    Ok(if p == q { 1.0 } else { ((p - 1.0) / (q - 1.0)).sqrt() })
}

/// `‖T_ρ f‖_q ≤ ‖f‖_p` for `ρ ≤ √((p-1)/(q-1))`.
pub fn hypercontractivity_check(f: &BooleanFunction, p: f64, q: f64, rho: f64) -> Result<InequalityReport> {
    let bound = hyper_bound(p, q)?;
    if !(rho >= 0.0) || rho > bound * (1.0 + 1e-12) {
        return Err(invalid(
            "rho",
            format!("rho = {rho} is outside the admissible range [0, {bound}] for p={p}, q={q}"),
        ));
    }
    let noisy = f.walsh_transform().noise_operator(rho).inverse_walsh();
    let lhs = noisy.p_norm(q)?;
    let rhs = f.p_norm(p)?;
    Ok(InequalityReport::single("hypercontractivity", lhs, rhs, f))
}

/// `(Σ_S |f̂(S)|^{2d/(d+1)})^{(d+1)/(2d)} / ‖f‖_∞` for `deg f ≤ d`.
pub fn bh_ratio(f: &BooleanFunction, d: usize) -> Result<f64> {
    if d == 0 {
        return Err(invalid("d", "need d >= 1"));
    }
    let s = f.walsh_transform();
    check_degree(&s, d)?;
    let sup = f.sup_norm();
    if sup == 0.0 {
        return Err(Error::Precondition("bh_ratio of the zero function".into()));
    }
    let e = 2.0 * d as f64 / (d as f64 + 1.0);
    let sum: f64 = s.coeffs().iter().map(|c| c.abs().powf(e)).sum();
    Ok(sum.powf(1.0 / e) / sup)
}

/// `(Σ_{|S|=m} f̂(S)²)^{1/2} ≤ 2 ε^{-m/2} (δ/2)^{1/(1+ε)}` for `‖f‖_∞ = 1`,
/// `E f = 1 - δ ∈ [0, 1)`, `m ≥ 1` and `0 < ε < 1`.
pub fn level_m_bound_check(f: &BooleanFunction, m: usize, epsilon: f64) -> Result<InequalityReport> {
    let sup = f.sup_norm();
    if (sup - 1.0).abs() > SUP_TOL {
        return Err(Error::Precondition(format!("need sup norm 1, got {sup}")));
    }
    let mean = f.expectation();
    if !(0.0..1.0).contains(&mean) {
        return Err(Error::Precondition(format!("need 0 <= E f < 1, got {mean}")));
    }
    if m == 0 || m > f.n() {
        return Err(invalid("m", format!("need 1 <= m <= {}, got {m}", f.n())));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid("epsilon", format!("need 0 < epsilon < 1, got {epsilon}")));
    }
    let delta = 1.0 - mean;
    let s = f.walsh_transform();
    let lhs = s
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(subset, _)| subset.count_ones() as usize == m)
        .map(|(_, c)| c * c)
        .sum::<f64>()
        .sqrt();
    let rhs = 2.0 * epsilon.powf(-(m as f64) / 2.0) * (delta / 2.0).powf(1.0 / (1.0 + epsilon));
    Ok(InequalityReport::single("level_m_bound", lhs, rhs, f))
}

/// `f / ‖f‖_∞`, negated if needed so that `E f ≥ 0`. `None` for zero.
pub fn normalize(f: &BooleanFunction) -> Option<BooleanFunction> {
    let sup = f.sup_norm();
    if sup == 0.0 {
        return None;
    }
    let sign = if f.expectation() < 0.0 { -1.0 } else { 1.0 };
    f.scaled(sign / sup).ok()
}

/// `ρ(f) ≥ 1/(5 √N √log(2/δ))` with `δ = 1 - |E f|/‖f‖_∞`.
pub fn biased_radius_lower_check(f: &BooleanFunction) -> Result<InequalityReport> {
    let sup = f.sup_norm();
    let delta = if sup == 0.0 { 0.0 } else { 1.0 - f.expectation().abs() / sup };
    if !(delta > 0.0) {
        return Err(Error::Precondition("constant function has delta = 0".into()));
    }
    let bound = 1.0 / (5.0 * (f.n() as f64).sqrt() * (2.0 / delta).ln().sqrt());
    let radius = radius_of(f)?.radius;
    Ok(InequalityReport::single("biased_radius_lower", bound, radius, f))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Independent uniform values in `[-1, 1]`.
    TableUniform,
    /// Independent uniform signs.
    BooleanPm1,
    /// Independent uniform coefficients in `[-1, 1]` on every subset.
    SpectralRandom,
    /// Uniform coefficients on the subsets of size at most `d`.
    LowDegree(usize),
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::TableUniform => write!(f, "table_uniform"),
            Mode::BooleanPm1 => write!(f, "boolean_pm1"),
            Mode::SpectralRandom => write!(f, "spectral_random"),
            Mode::LowDegree(d) => write!(f, "low_degree({d})"),
        }
    }
}

/// A random function rescaled to `‖f‖_∞ = 1` (unless it is zero).
pub fn random_bounded_function(n: usize, seed: u64, mode: Mode) -> Result<BooleanFunction> {
    if n == 0 || n > MAX_LAB_N {
        return Err(Error::DimensionOutOfRange {
            n,
            min: 1,
            max: MAX_LAB_N,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = 1usize << n;
    let f = match mode {
        Mode::TableUniform => {
            BooleanFunction::from_truth_table(n, (0..size).map(|_| rng.gen_range(-1.0..=1.0)).collect())?
        }
        Mode::BooleanPm1 => BooleanFunction::from_truth_table(
            n,
            (0..size).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect(),
        )?,
        Mode::SpectralRandom => {
            Spectrum::from_coeffs(n, (0..size).map(|_| rng.gen_range(-1.0..=1.0)).collect())?.inverse_walsh()
        }
        Mode::LowDegree(d) => {
            if d > n {
                return Err(invalid("d", format!("degree {d} exceeds n = {n}")));
            }
            let coeffs = (0..size)
                .map(|s| {
                    let c = rng.gen_range(-1.0..=1.0);
                    if s.count_ones() as usize <= d {
                        c
                    } else {
                        0.0
                    }
                })
                .collect();
            Spectrum::from_coeffs(n, coeffs)?.inverse_walsh()
        }
    };
    let sup = f.sup_norm();
    if sup == 0.0 {
        return Ok(f);
    }
    f.scaled(1.0 / sup)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    WienerPair,
    SplitPointwise,
    Caratheodory,
    DegreeL2,
    NormComparison,
    Hypercontractivity,
    LevelMBound,
    BiasedRadiusLower,
    All,
}

impl Suite {
    pub const PROVEN: [Suite; 8] = [
        Suite::WienerPair,
        Suite::SplitPointwise,
        Suite::Caratheodory,
        Suite::DegreeL2,
        Suite::NormComparison,
        Suite::Hypercontractivity,
        Suite::LevelMBound,
        Suite::BiasedRadiusLower,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::WienerPair => "wiener_pair",
            Suite::SplitPointwise => "split_pointwise",
            Suite::Caratheodory => "caratheodory",
            Suite::DegreeL2 => "degree_l2",
            Suite::NormComparison => "norm_comparison",
            Suite::Hypercontractivity => "hypercontractivity",
            Suite::LevelMBound => "level_m_bound",
            Suite::BiasedRadiusLower => "biased_radius_lower",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let normalized = s.trim().to_ascii_lowercase().replace('-', "_");
        Ok(match normalized.as_str() {
            "wiener" | "wiener_pair" => Suite::WienerPair,
            "split" | "split_pointwise" => Suite::SplitPointwise,
            "caratheodory" => Suite::Caratheodory,
            "degree_l2" | "degree" => Suite::DegreeL2,
            "norm_comparison" | "norm" => Suite::NormComparison,
            "hyper" | "hypercontractivity" => Suite::Hypercontractivity,
            "level_m" | "level_m_bound" => Suite::LevelMBound,
            "biased" | "biased_radius" | "biased_radius_lower" => Suite::BiasedRadiusLower,
            "all" => Suite::All,
            _ => return Err(Error::Input(format!("unknown suite '{s}'"))),
        })
    }
}

/// Runs one proven suite on one function. Functions outside a check's
/// hypotheses (zero, constants where `δ = 0`) are skipped, not failed.
fn check_one(suite: Suite, f: &BooleanFunction) -> Result<InequalityReport> {
    let mut report = InequalityReport::empty(suite.name());
    let mut absorb = |r: Result<InequalityReport>| -> Result<()> {
        match r {
            Ok(r) => {
                report.merge(r);
                Ok(())
            }
            Err(Error::Precondition(_)) => Ok(()),
            Err(e) => Err(e),
        }
    };
    let degree = f.walsh_transform().degree();
    match suite {
        Suite::WienerPair => absorb(wiener_pair_check(f))?,
        Suite::SplitPointwise => absorb(split_pointwise_check(f))?,
        Suite::Caratheodory => absorb(caratheodory_check(f))?,
        Suite::DegreeL2 => absorb(degree_l2_check(f, degree))?,
        Suite::NormComparison => absorb(norm_comparison_check(f, degree))?,
        Suite::Hypercontractivity => {
            for (p, q) in HYPER_GRID {
                let bound = hyper_bound(p, q)?;
                for rho in [0.0, 0.5 * bound, bound] {
                    absorb(hypercontractivity_check(f, p, q, rho))?;
                }
            }
        }
        Suite::LevelMBound => {
            if let Some(g) = normalize(f) {
                if g.expectation() < 1.0 {
                    for m in 1..=g.n() {
                        for eps in EPSILON_GRID {
                            absorb(level_m_bound_check(&g, m, eps))?;
                        }
                    }
                }
            }
        }
        Suite::BiasedRadiusLower => absorb(biased_radius_lower_check(f))?,
        Suite::All => unreachable!("aggregate suite is expanded by the caller"),
    }
    // A function covered by several instances still counts as one sample.
    report.samples = report.samples.min(1);
    Ok(report)
}

/// The named families on `n` variables: extremal flip, dictators, parities,
/// every threshold, majority, biased indicators, and two constants.
pub fn family_corpus(n: usize) -> Result<Vec<BooleanFunction>> {
    let mut out = vec![
        families::extremal_indicator_flip(n)?,
        families::dictator(n, 1)?,
        families::dictator(n, n)?,
        families::parity(n, (1 << n) - 1)?,
        families::parity(n, (1 << n.div_ceil(2)) - 1)?,
        BooleanFunction::from_truth_table(n, vec![1.0; 1 << n])?,
        BooleanFunction::from_truth_table(n, vec![0.0; 1 << n])?,
    ];
    for alpha in 0..n {
        out.push(families::threshold(families::ThresholdSpec::new(n, alpha as f64)?)?);
    }
    if n % 2 == 1 {
        out.push(families::majority(n)?);
    }
    for k in 1..=n {
        out.push(families::biased_indicator(n, 0.5f64.powi(k as i32))?);
    }
    Ok(out)
}

const MODES: usize = 4;

fn mode_for(index: usize, n: usize, sample: usize) -> Mode {
    match index {
        0 => Mode::TableUniform,
        1 => Mode::BooleanPm1,
        2 => Mode::SpectralRandom,
        _ => Mode::LowDegree(1 + sample % n.min(3)),
    }
}

/// Stream index of random sample `i` of mode `mode` on `n` variables. Fixed
/// per `(n, mode, i)`, so draws do not depend on `n_max` or the worker count.
fn stream(n: usize, mode: usize, i: usize) -> u64 {
    ((n as u64) << 40) | ((mode as u64) << 32) | i as u64
}

enum Item {
    Family(BooleanFunction),
    Random { n: usize, mode: usize, i: usize },
}

/// Runs `suite` over [`family_corpus`] for `1 ≤ n ≤ n_max` and `samples`
/// random draws per mode for `2 ≤ n ≤ n_max`.
///
/// The aggregate suite `all` reports the sum of the proven suites with
/// each one listed under `parts`.
pub fn run_suite(suite: Suite, n_max: usize, samples: usize, seed: u64, workers: usize) -> Result<InequalityReport> {
    if n_max == 0 || n_max > MAX_LAB_N {
        return Err(Error::DimensionOutOfRange {
            n: n_max,
            min: 1,
            max: MAX_LAB_N,
        });
    }
    let suites: Vec<Suite> = if suite == Suite::All {
        Suite::PROVEN.to_vec()
    } else {
        vec![suite]
    };

    let mut items = Vec::new();
    for n in 1..=n_max {
        items.extend(family_corpus(n)?.into_iter().map(Item::Family));
    }
    for n in 2..=n_max {
        for mode in 0..MODES {
            items.extend((0..samples).map(|i| Item::Random { n, mode, i }));
        }
    }

    let per_item = parallel::map_indexed(items.len(), workers, |k| -> Result<Vec<InequalityReport>> {
        let owned;
        let f = match &items[k] {
            Item::Family(f) => f,
            Item::Random { n, mode, i } => {
                let seed = parallel::derive_seed(seed, stream(*n, *mode, *i));
                owned = random_bounded_function(*n, seed, mode_for(*mode, *n, *i))?;
                &owned
            }
        };
        suites.iter().map(|&s| check_one(s, f)).collect()
    });

    let mut parts: Vec<InequalityReport> = suites.iter().map(|s| InequalityReport::empty(s.name())).collect();
    for reports in per_item {
        for (part, r) in parts.iter_mut().zip(reports?) {
            part.merge(r);
        }
    }
    if suite != Suite::All {
        return Ok(parts.pop().expect("one suite"));
    }
    let mut total = InequalityReport::empty("all");
    for part in &parts {
        total.merge(part.clone());
    }
    total.parts = parts;
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WienerQuestionRow {
    pub d: usize,
    pub samples: u64,
    /// Largest observed `‖f - f̂(∅)‖_∞ / (1 - |f̂(∅)|)`.
    pub max_ratio: f64,
}

/// Exploratory scan: for degree `d ≤ d_max` functions with `‖f‖_∞ ≤ 1`,
/// how large can `‖f - f̂(∅)‖_∞ / (1 - |f̂(∅)|)` get? Nothing is asserted.
pub fn wiener_question_scan(d_max: usize, n: usize, samples: usize, seed: u64, workers: usize) -> Result<Vec<WienerQuestionRow>> {
    if d_max == 0 || d_max > n {
        return Err(invalid("d_max", format!("need 1 <= d_max <= n = {n}")));
    }
    (1..=d_max)
        .map(|d| {
            let ratios = parallel::map_indexed(samples, workers, |i| -> Result<Option<f64>> {
                let s = parallel::derive_seed(seed, ((d as u64) << 32) | i as u64);
                let f = random_bounded_function(n, s, Mode::LowDegree(d))?;
                let mean = f.expectation();
                let gap = 1.0 - mean.abs();
                if gap <= SUP_TOL {
                    return Ok(None);
                }
                let osc = f.values().iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
                Ok(Some(osc / gap))
            });
            let mut row = WienerQuestionRow {
                d,
                samples: 0,
                max_ratio: 0.0,
            };
            for r in ratios {
                if let Some(r) = r? {
                    row.samples += 1;
                    row.max_ratio = row.max_ratio.max(r);
                }
            }
            Ok(row)
        })
        .collect()
}

/// Largest [`bh_ratio`] over random degree-`d` draws on `n` variables.
pub fn bh_ratio_scan(n: usize, d: usize, samples: usize, seed: u64, workers: usize) -> Result<f64> {
    let ratios = parallel::map_indexed(samples, workers, |i| {
        let f = random_bounded_function(n, parallel::derive_seed(seed, i as u64), Mode::LowDegree(d))?;
        bh_ratio(&f, d)
    });
    ratios.into_iter().try_fold(0.0f64, |acc, r| Ok(acc.max(r?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{biased_indicator, dictator, extremal_indicator_flip, majority, parity};
    use proptest::prelude::*;

    #[test]
    fn wiener_pair_examples() {
        let r = wiener_pair_check(&extremal_indicator_flip(2).unwrap()).unwrap();
        assert_eq!(r.worst_margin, 0.0);
        assert!(r.passed());
        let r = wiener_pair_check(&dictator(4, 2).unwrap()).unwrap();
        assert_eq!(r.worst_margin, 0.0);
        let big = BooleanFunction::from_truth_table(1, vec![2.0, 0.0]).unwrap();
        assert!(matches!(wiener_pair_check(&big), Err(Error::SupNormAboveOne { .. })));
    }

    #[test]
    fn split_pointwise_examples() {
        let c = BooleanFunction::from_truth_table(2, vec![-0.3; 4]).unwrap();
        assert_eq!(split_pointwise_check(&c).unwrap().worst_margin, 0.0);
        let r = split_pointwise_check(&parity(3, 0b101).unwrap()).unwrap();
        assert_eq!(r.worst_margin, 0.0);
        assert!(r.passed());
    }

    #[test]
    fn caratheodory_examples() {
        let f = biased_indicator(2, 0.25).unwrap();
        let r = caratheodory_check(&f).unwrap();
        assert!((r.worst_margin - (1.0 - 0.75)).abs() < 1e-15);
        let r = caratheodory_check(&parity(3, 0b111).unwrap()).unwrap();
        assert_eq!(r.worst_margin, 1.0);
    }

    #[test]
    fn sharpness_examples() {
        let lambdas = [0.25, 1.0 / 16.0, 1.0 / 64.0];
        let rows = caratheodory_sharpness(&lambdas, 1.0).unwrap();
        for (row, l) in rows.iter().zip(lambdas) {
            let closed = (2.0 - 2.0 * l) * l + 2.0 * l * (1.0 - l);
            assert_eq!(row.lhs, closed);
            assert_eq!(row.ratio, 1.0 - l);
        }
        let rows = caratheodory_sharpness(&lambdas, 2.0).unwrap();
        for (row, l) in rows.iter().zip(lambdas) {
            let closed = ((1.0 - l) / (4.0 * l)).sqrt();
            assert!((row.ratio - closed).abs() < 1e-14);
        }
        assert!(rows[0].ratio < rows[1].ratio && rows[1].ratio < rows[2].ratio);
        assert!(rows[2].ratio > 2.0 * rows[0].ratio);
        assert!(caratheodory_sharpness(&[0.3], 1.0).is_err());
        assert!(caratheodory_sharpness(&[0.25], 0.5).is_err());
    }

    #[test]
    fn degree_and_norm_examples() {
        let d = degree_l2_check(&dictator(3, 1).unwrap(), 1).unwrap();
        assert!((d.worst_margin - (2.0 * 1f64.exp() - 1.0)).abs() < 1e-12);
        let m = degree_l2_check(&majority(3).unwrap(), 3).unwrap();
        assert!((m.worst_margin - (2.0 * 3f64.exp() - 1.0)).abs() < 1e-12);
        assert!(matches!(
            degree_l2_check(&majority(3).unwrap(), 2),
            Err(Error::DegreeExceeded { degree: 3, bound: 2 })
        ));
        let c = BooleanFunction::from_truth_table(2, vec![0.5; 4]).unwrap();
        assert_eq!(norm_comparison_check(&c, 0).unwrap().worst_margin, 0.0);
        let p = norm_comparison_check(&parity(4, 0b1111).unwrap(), 4).unwrap();
        assert!((p.worst_margin - (4f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn hyper_examples() {
        let x1 = dictator(3, 1).unwrap();
        for (p, q) in HYPER_GRID {
            let b = hyper_bound(p, q).unwrap();
            let r = hypercontractivity_check(&x1, p, q, b).unwrap();
            assert!((r.worst_margin - (1.0 - b)).abs() < 1e-12);
        }
        let f = random_bounded_function(6, 3, Mode::TableUniform).unwrap();
        let r = hypercontractivity_check(&f, 1.5, 3.0, 0.0).unwrap();
        assert!((r.worst_margin - (f.p_norm(1.5).unwrap() - f.expectation().abs())).abs() < 1e-12);
        assert!(hypercontractivity_check(&x1, 2.0, 4.0, 0.6).is_err());
        assert!(hypercontractivity_check(&x1, 2.0, 4.0, 1.0 / 3f64.sqrt()).is_ok());
        assert!(hyper_bound(3.0, 2.0).is_err());
    }

    #[test]
    fn bh_examples() {
        assert_eq!(bh_ratio(&dictator(4, 3).unwrap(), 1).unwrap(), 1.0);
        assert!((bh_ratio(&parity(5, 0b11111).unwrap(), 5).unwrap() - 1.0).abs() < 1e-15);
        assert!(bh_ratio(&majority(3).unwrap(), 1).is_err());
        let max = bh_ratio_scan(10, 2, 50, 1, 2).unwrap();
        assert!(max.is_finite() && max > 0.0);
    }

    #[test]
    fn level_m_examples() {
        let x1 = dictator(2, 1).unwrap();
        let r = level_m_bound_check(&x1, 1, 0.99).unwrap();
        assert!((r.worst_margin - (2.0 * 0.99f64.powf(-0.5) * 0.5f64.powf(1.0 / 1.99) - 1.0)).abs() < 1e-12);
        let b = normalize(&biased_indicator(3, 0.125).unwrap()).unwrap();
        assert!((b.expectation() - 0.75).abs() < 1e-15);
        for eps in EPSILON_GRID {
            assert!(level_m_bound_check(&b, 1, eps).unwrap().passed());
        }
        assert!(level_m_bound_check(&majority(3).unwrap(), 3, 0.5).unwrap().passed());
        assert!(level_m_bound_check(&x1, 0, 0.5).is_err());
        assert!(level_m_bound_check(&x1, 1, 1.0).is_err());
        assert!(level_m_bound_check(&biased_indicator(2, 0.25).unwrap(), 1, 0.5).is_err());
    }

    #[test]
    fn biased_radius_examples() {
        let m = biased_radius_lower_check(&majority(3).unwrap()).unwrap();
        let bound = 1.0 / (5.0 * 3f64.sqrt() * 2f64.ln().sqrt());
        assert!((bound - 0.139).abs() < 1e-3);
        assert!(m.passed() && m.worst_margin > 0.4);
        let f = biased_radius_lower_check(&extremal_indicator_flip(2).unwrap()).unwrap();
        let bound = 1.0 / (5.0 * 2f64.sqrt() * 4f64.ln().sqrt());
        assert!((f.worst_margin - (2f64.sqrt() - 1.0 - bound)).abs() < 1e-12);
        let c = BooleanFunction::from_truth_table(2, vec![1.0; 4]).unwrap();
        assert!(biased_radius_lower_check(&c).is_err());
    }

    #[test]
    fn random_function_modes() {
        let f = random_bounded_function(5, 1, Mode::BooleanPm1).unwrap();
        assert!(f.values().iter().all(|v| v.abs() == 1.0));
        for d in 0..=3 {
            let g = random_bounded_function(6, 9, Mode::LowDegree(d)).unwrap();
            assert!(g.walsh_transform().degree() <= d);
        }
        for mode in [Mode::TableUniform, Mode::SpectralRandom, Mode::LowDegree(2)] {
            let f = random_bounded_function(7, 4, mode).unwrap();
            assert!((f.sup_norm() - 1.0).abs() <= 1e-15);
            assert_eq!(f, random_bounded_function(7, 4, mode).unwrap());
        }
        assert!(random_bounded_function(15, 0, Mode::BooleanPm1).is_err());
        assert!(random_bounded_function(3, 0, Mode::LowDegree(4)).is_err());
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!("wiener".parse::<Suite>().unwrap(), Suite::WienerPair);
        assert_eq!("level-m".parse::<Suite>().unwrap(), Suite::LevelMBound);
        assert_eq!("ALL".parse::<Suite>().unwrap(), Suite::All);
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn suites_pass_and_are_worker_independent() {
        let a = run_suite(Suite::All, 6, 20, 7, 1).unwrap();
        let b = run_suite(Suite::All, 6, 20, 7, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.passed(), "{a:?}");
        assert_eq!(a.parts.len(), Suite::PROVEN.len());
        let w = run_suite(Suite::WienerPair, 4, 10, 7, 2).unwrap();
        assert_eq!(w.worst_margin, 0.0);
        assert!(w.parts.is_empty());
        let json = serde_json::to_value(&w).unwrap();
        assert!(json["witness"]["values"].is_array());
        assert!(run_suite(Suite::WienerPair, 15, 1, 0, 1).is_err());
    }

    #[test]
    fn wiener_question_scan_reports() {
        let rows = wiener_question_scan(3, 6, 30, 2, 2).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.max_ratio >= 0.0 && r.max_ratio.is_finite()));
        assert_eq!(rows, wiener_question_scan(3, 6, 30, 2, 1).unwrap());
    }

    proptest! {
        #[test]
        fn proven_checks_hold_on_random_functions(n in 1usize..=7, seed in any::<u64>(), mode in 0usize..4) {
            let f = random_bounded_function(n, seed, mode_for(mode, n, seed as usize)).unwrap();
            for suite in Suite::PROVEN {
                let r = check_one(suite, &f).unwrap();
                prop_assert!(r.passed(), "{} failed: {r:?}", suite.name());
            }
        }

        #[test]
        fn single_coefficient_bh_ratio_is_one(n in 1usize..=6, subset in any::<usize>(), c in prop_oneof![-3.0f64..-0.1, 0.1f64..3.0]) {
            let subset = subset % (1 << n);
            let mut coeffs = vec![0.0; 1 << n];
            coeffs[subset] = c;
            let f = Spectrum::from_coeffs(n, coeffs).unwrap().inverse_walsh();
            let d = (subset.count_ones() as usize).max(1);
            prop_assert!((bh_ratio(&f, d).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
