//! Named function families: dictators, parities, the one-point flip,
//! unit-weight thresholds, majority, biased indicators and random-sign
//! homogeneous functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cube::{BooleanFunction, Spectrum, MAX_DENSE_N};
use crate::error::{invalid, Error, Result};

fn check_n(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        return Err(Error::DimensionOutOfRange { n, min: 1, max });
    }
    Ok(())
}

/// `+1` everywhere except `-1` at the all-ones point.
///
/// Its spectrum is `1 - 2^{1-n}` at `∅` and `-2^{1-n}` at every other set,
/// and its radius is `2^{1/n} - 1`, the smallest radius of any function
/// on `n` variables.
pub fn extremal_indicator_flip(n: usize) -> Result<BooleanFunction> {
    check_n(n, MAX_DENSE_N)?;
    BooleanFunction::from_fn(n, |i, _| if i == 0 { -1.0 } else { 1.0 })
}

/// The coordinate function `x_i`, `1 ≤ i ≤ n`.
pub fn dictator(n: usize, i: usize) -> Result<BooleanFunction> {
    check_n(n, MAX_DENSE_N)?;
    if i == 0 || i > n {
        return Err(invalid("i", format!("coordinate {i} outside 1..={n}")));
    }
    BooleanFunction::from_fn(n, |_, x| x[i - 1] as f64)
}

/// The character `x^S` for the subset bitmask `subset`.
pub fn parity(n: usize, subset: usize) -> Result<BooleanFunction> {
    check_n(n, MAX_DENSE_N)?;
    if subset >> n != 0 {
        return Err(invalid("subset", format!("bitmask {subset:#b} has bits beyond n = {n}")));
    }
    BooleanFunction::from_fn(n, |i, _| crate::cube::character(subset, i))
}

/// Converts 1-based coordinates into a subset bitmask.
pub fn subset_mask(n: usize, coords: &[usize]) -> Result<usize> {
    coords.iter().try_fold(0usize, |mask, &k| {
        if k == 0 || k > n {
            Err(invalid("subset", format!("coordinate {k} outside 1..={n}")))
        } else {
            Ok(mask | 1 << (k - 1))
        }
    })
}

/// Parameters of `ψ_{n,α}(x) = sign(x_1 + … + x_n - α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSpec {
    n: usize,
    alpha: f64,
}

impl ThresholdSpec {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionOutOfRange {
                n,
                min: 1,
                max: usize::MAX,
            });
        }
        if !(alpha >= 0.0 && alpha < n as f64) {
            return Err(invalid("alpha", format!("need 0 <= alpha < {n}, got {alpha}")));
        }
        Ok(Self { n, alpha })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// `sign(y)` with `sign(0) = +1`.
#[inline]
pub fn sign(y: f64) -> f64 {
    if y >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

pub fn threshold(spec: ThresholdSpec) -> Result<BooleanFunction> {
    threshold_table(spec.n, spec.alpha)
}

/// Dense table of `sign(x_1 + … + x_n - alpha)` for any real `alpha`.
pub(crate) fn threshold_table(n: usize, alpha: f64) -> Result<BooleanFunction> {
    check_n(n, MAX_DENSE_N)?;
    BooleanFunction::from_fn(n, |i, _| {
        let sum = n as f64 - 2.0 * i.count_ones() as f64;
        sign(sum - alpha)
    })
}

/// The integer `α'` with `n - α'` odd and `ψ_{n,α} = ψ_{n,α'}` as functions.
///
/// Coordinate sums take the values `n - 2k`, and with `sign(0) = +1` every
/// `α ∈ (n-2k-2, n-2k]` selects the same points. The representative is
/// `α' = n - 2⌊(n-α)/2⌋ - 1`, so `|α - α'| < 1`. For even `n` and `α = 0`
/// this is `α' = -1`.
pub fn canonical_alpha(n: usize, alpha: f64) -> Result<i64> {
    ThresholdSpec::new(n, alpha)?;
    let k = ((n as f64 - alpha) / 2.0).floor() as i64;
    Ok(n as i64 - 2 * k - 1)
}

/// `Maj_n = ψ_{n,0}` for odd `n`.
pub fn majority(n: usize) -> Result<BooleanFunction> {
    if n % 2 == 0 {
        return Err(invalid("n", format!("majority needs odd n, got {n}")));
    }
    threshold(ThresholdSpec::new(n, 0.0)?)
}

/// Subsets of size `m` of `[n]` as bitmasks, in increasing order.
pub fn subsets_of_size(n: usize, m: usize) -> Vec<usize> {
    (0..1usize << n)
        .filter(|s| s.count_ones() as usize == m)
        .collect()
}

/// `6 √(log 2) √n (Σ c_S²)^{1/2}`.
pub fn salem_zygmund_bound(n: usize, coeffs: &[f64]) -> f64 {
    let l2 = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    6.0 * std::f64::consts::LN_2.sqrt() * (n as f64).sqrt() * l2
}

/// Largest dimension for random-sign homogeneous constructions.
pub const MAX_RANDOM_SIGN_N: usize = 20;

/// `Σ_{|S|=m} ξ_S c_S x^S` with i.i.d. uniform signs `ξ_S` drawn from `seed`.
///
/// `coeffs` lists `c_S` for the subsets of size `m` in increasing bitmask
/// order. The flag reports whether this draw meets the Salem-Zygmund bound;
/// a single draw may miss it.
pub fn random_sign_homogeneous(
    n: usize,
    m: usize,
    coeffs: &[f64],
    seed: u64,
) -> Result<(BooleanFunction, bool)> {
    check_n(n, MAX_RANDOM_SIGN_N)?;
    if m > n {
        return Err(invalid("m", format!("level {m} exceeds n = {n}")));
    }
    let subsets = subsets_of_size(n, m);
    if coeffs.len() != subsets.len() {
        return Err(Error::LengthMismatch {
            n,
            expected: subsets.len(),
            got: coeffs.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spectrum = vec![0.0; 1 << n];
    for (&s, &c) in subsets.iter().zip(coeffs) {
        let xi = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        spectrum[s] = xi * c;
    }
    let f = Spectrum::from_coeffs(n, spectrum)?.inverse_walsh();
    let ok = f.sup_norm() <= salem_zygmund_bound(n, coeffs);
    Ok((f, ok))
}

/// `+1` on the first `λ 2^n` points in index order and `-1` elsewhere, so
/// `E f = 2λ - 1`. Requires `0 < λ ≤ 1/2` and `λ 2^n` integral.
pub fn biased_indicator(n: usize, lambda: f64) -> Result<BooleanFunction> {
    check_n(n, MAX_DENSE_N)?;
    let count = lambda * (1u64 << n) as f64;
    if !(lambda > 0.0 && lambda <= 0.5) {
        return Err(invalid("lambda", format!("need 0 < lambda <= 1/2, got {lambda}")));
    }
    if count.fract() != 0.0 {
        return Err(invalid(
            "lambda",
            format!("lambda * 2^{n} = {count} is not an integer"),
        ));
    }
    let count = count as usize;
    BooleanFunction::from_fn(n, |i, _| if i < count { 1.0 } else { -1.0 })
}
