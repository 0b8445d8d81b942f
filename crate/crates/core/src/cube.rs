//! Real functions on `{-1,+1}^n`, their Fourier-Walsh spectra and the basic
//! operators on them.
//!
//! Point convention: the point with index `i` has `x_{k+1} = -1` exactly when
//! bit `k` of `i` is set, so index 0 is the all-ones point. A subset `S ⊂ [n]`
//! is the bitmask with bit `k` set when `k+1 ∈ S`. With these conventions the
//! character `x^S` at point `i` is `(-1)^{popcount(S & i)}`.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact;

/// Largest dimension accepted for dense truth tables and spectra.
pub const MAX_DENSE_N: usize = 24;

/// Coefficients with absolute value at or below this are treated as zero when
/// computing degrees and homogeneity.
pub const ZERO_TOL: f64 = 1e-12;

fn check_dense_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DENSE_N {
        return Err(Error::DimensionOutOfRange {
            n,
            min: 1,
            max: MAX_DENSE_N,
        });
    }
    Ok(())
}

fn check_table(n: usize, values: &[f64]) -> Result<()> {
    check_dense_n(n)?;
    let expected = 1usize << n;
    if values.len() != expected {
        return Err(Error::LengthMismatch {
            n,
            expected,
            got: values.len(),
        });
    }
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    Ok(())
}

/// Value of the character `x^S` at the point with index `point`.
#[inline]
pub fn character(subset: usize, point: usize) -> f64 {
    if (subset & point).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Coordinates `(x_1, …, x_n)` of the point with index `point`.
pub fn point_coords(n: usize, point: usize) -> Vec<i8> {
    (0..n)
        .map(|k| if point >> k & 1 == 1 { -1 } else { 1 })
        .collect()
}

/// In-place unnormalized Walsh-Hadamard butterfly. Applying it twice
/// multiplies by `len`.
pub fn fwht_in_place(data: &mut [f64]) {
    let len = data.len();
    assert!(len.is_power_of_two(), "FWHT requires a power of two, got {len}");
    let mut half = 1;
    while half < len {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*a + *b, *a - *b);
                *a = s;
                *b = d;
            }
        }
        half *= 2;
    }
}

/// A real function on the Boolean cube, stored as its truth table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct BooleanFunction {
    n: usize,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    n: usize,
    values: Vec<f64>,
}

impl TryFrom<RawTable> for BooleanFunction {
    type Error = Error;
    fn try_from(raw: RawTable) -> Result<Self> {
        BooleanFunction::from_truth_table(raw.n, raw.values)
    }
}

impl From<BooleanFunction> for RawTable {
    fn from(f: BooleanFunction) -> Self {
        RawTable {
            n: f.n,
            values: f.values,
        }
    }
}

impl BooleanFunction {
    pub fn from_truth_table(n: usize, values: Vec<f64>) -> Result<Self> {
        check_table(n, &values)?;
        Ok(Self { n, values })
    }

    /// Tabulates `f` over all points, passing the point index and coordinates.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, &[i8]) -> f64) -> Result<Self> {
        check_dense_n(n)?;
        let values = (0..1usize << n)
            .map(|i| f(i, &point_coords(n, i)))
            .collect();
        Self::from_truth_table(n, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Value at the point `x`, given as coordinates in `{-1,+1}`.
    pub fn eval(&self, x: &[i8]) -> f64 {
        assert_eq!(x.len(), self.n);
        let index = x
            .iter()
            .enumerate()
            .fold(0usize, |acc, (k, &xk)| if xk < 0 { acc | 1 << k } else { acc });
        self.values[index]
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::from_truth_table(self.n, self.values.iter().map(|v| c * v).collect())
    }

    pub fn walsh_transform(&self) -> Spectrum {
        let mut coeffs = self.values.clone();
        fwht_in_place(&mut coeffs);
        let scale = 1.0 / coeffs.len() as f64;
        coeffs.iter_mut().for_each(|c| *c *= scale);
        Spectrum { n: self.n, coeffs }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `(E|f|^p)^{1/p}`; `p = +inf` gives the sup norm.
    pub fn p_norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(invalid("p", format!("p-norms need p >= 1, got {p}")));
        }
        if p.is_infinite() {
            return Ok(self.sup_norm());
        }
        let sup = self.sup_norm();
        if sup == 0.0 {
            return Ok(0.0);
        }
        // Factor out the sup norm so large p cannot overflow.
        let mean = self
            .values
            .iter()
            .map(|v| (v.abs() / sup).powf(p))
            .sum::<f64>()
            / self.values.len() as f64;
        Ok(sup * mean.powf(1.0 / p))
    }

    pub fn expectation(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Dense Fourier-Walsh spectrum indexed by subset bitmask.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpectrum", into = "RawSpectrum")]
pub struct Spectrum {
    n: usize,
    coeffs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawSpectrum {
    n: usize,
    coeffs: Vec<f64>,
}

impl TryFrom<RawSpectrum> for Spectrum {
    type Error = Error;
    fn try_from(raw: RawSpectrum) -> Result<Self> {
        Spectrum::from_coeffs(raw.n, raw.coeffs)
    }
}

impl From<Spectrum> for RawSpectrum {
    fn from(s: Spectrum) -> Self {
        RawSpectrum {
            n: s.n,
            coeffs: s.coeffs,
        }
    }
}

impl Spectrum {
    pub fn from_coeffs(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_table(n, &coeffs)?;
        Ok(Self { n, coeffs })
    }

    pub fn zero(n: usize) -> Result<Self> {
        check_dense_n(n)?;
        Ok(Self {
            n,
            coeffs: vec![0.0; 1 << n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, subset: usize) -> f64 {
        self.coeffs[subset]
    }

    pub fn inverse_walsh(&self) -> BooleanFunction {
        let mut values = self.coeffs.clone();
        fwht_in_place(&mut values);
        BooleanFunction { n: self.n, values }
    }

    /// Largest `|S|` with `|f̂(S)| > ZERO_TOL`; 0 for constant and zero spectra.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() > ZERO_TOL)
            .map(|(s, _)| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// `T_ρ`: multiplies level `m` by `ρ^m`.
    pub fn noise_operator(&self, rho: f64) -> Spectrum {
        let powers: Vec<f64> = (0..=self.n as i32).map(|m| rho.powi(m)).collect();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(s, c)| c * powers[s.count_ones() as usize])
            .collect();
        Spectrum { n: self.n, coeffs }
    }

    /// Keeps only level `m`.
    pub fn homogeneous_part(&self, m: usize) -> Result<Spectrum> {
        if m > self.n {
            return Err(invalid("m", format!("level {m} exceeds dimension {}", self.n)));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(s, &c)| if s.count_ones() as usize == m { c } else { 0.0 })
            .collect();
        Ok(Spectrum { n: self.n, coeffs })
    }

    /// Whether every coefficient outside level `m` is zero (up to `ZERO_TOL`).
    pub fn is_homogeneous_of(&self, m: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(s, c)| s.count_ones() as usize == m || c.abs() <= ZERO_TOL)
    }

    /// `Σ_S f̂(S)²`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

/// Spectrum of a permutation-invariant function: one exact rational
/// coefficient per level, `f̂(S) = level_coeffs[|S|]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSpectrum {
    n: usize,
    level_coeffs: Vec<BigRational>,
    log_abs: Vec<f64>,
}

impl SymmetricSpectrum {
    pub fn from_levels(n: usize, level_coeffs: Vec<BigRational>) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionOutOfRange {
                n,
                min: 1,
                max: usize::MAX,
            });
        }
        if level_coeffs.len() != n + 1 {
            return Err(Error::LengthMismatch {
                n,
                expected: n + 1,
                got: level_coeffs.len(),
            });
        }
        let log_abs = level_coeffs
            .iter()
            .map(|q| exact::ln_ratio(q.numer(), &q.denom().magnitude().clone()))
            .collect();
        Ok(Self {
            n,
            level_coeffs,
            log_abs,
        })
    }

    /// Reads a dense spectrum that is constant on every level. Coefficients
    /// are converted to rationals exactly.
    pub fn from_dense(s: &Spectrum) -> Result<Self> {
        let n = s.n();
        let mut levels: Vec<Option<f64>> = vec![None; n + 1];
        for (subset, &c) in s.coeffs().iter().enumerate() {
            let m = subset.count_ones() as usize;
            match levels[m] {
                None => levels[m] = Some(c),
                Some(first) if (first - c).abs() > ZERO_TOL => {
                    return Err(Error::Precondition(format!(
                        "spectrum is not symmetric: level {m} has {first} and {c}"
                    )))
                }
                Some(_) => {}
            }
        }
        let level_coeffs = levels
            .into_iter()
            .map(|c| BigRational::from_float(c.unwrap_or(0.0)).expect("finite coefficient"))
            .collect();
        Self::from_levels(n, level_coeffs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level_coeffs(&self) -> &[BigRational] {
        &self.level_coeffs
    }

    /// `ln |ψ̂([m])|`, `-inf` for vanishing levels.
    pub fn log_abs(&self) -> &[f64] {
        &self.log_abs
    }

    pub fn level_f64(&self, m: usize) -> f64 {
        let q = &self.level_coeffs[m];
        exact::ratio_to_f64(q.numer(), q.denom().magnitude())
    }

    pub fn levels_f64(&self) -> Vec<f64> {
        (0..=self.n).map(|m| self.level_f64(m)).collect()
    }

    /// Level weight `C(n,m) |ψ̂([m])|` in log form.
    pub fn log_level_weights(&self) -> Vec<f64> {
        let row = exact::binomial_row(self.n);
        row.iter()
            .zip(&self.log_abs)
            .map(|(c, &l)| if l.is_finite() { exact::ln_big(c) + l } else { l })
            .collect()
    }

    pub fn to_dense(&self) -> Result<Spectrum> {
        check_dense_n(self.n)?;
        let levels = self.levels_f64();
        let coeffs = (0..1usize << self.n)
            .map(|s| levels[s.count_ones() as usize])
            .collect();
        Spectrum::from_coeffs(self.n, coeffs)
    }

    pub fn is_zero_level(&self, m: usize) -> bool {
        self.level_coeffs[m].is_zero()
    }
}

#[derive(Serialize)]
struct SymmetricSpectrumJson {
    n: usize,
    level_coeffs: Vec<String>,
    values: Vec<f64>,
    log_abs: Vec<Option<f64>>,
}

impl Serialize for SymmetricSpectrum {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SymmetricSpectrumJson {
            n: self.n,
            level_coeffs: self.level_coeffs.iter().map(|q| q.to_string()).collect(),
            values: self.levels_f64(),
            log_abs: self
                .log_abs
                .iter()
                .map(|&l| l.is_finite().then_some(l))
                .collect(),
        }
        .serialize(serializer)
    }
}
