use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Pow;

/// Pascal's triangle through row `n` in `u128`; exact for `n ≤ 127`.
#[derive(Clone, Debug)]
pub struct Pascal {
    rows: Vec<Vec<u128>>,
}

impl Pascal {
    pub fn new(n: usize) -> Self {
        assert!(n <= 127, "binomials overflow u128 past row 127");
        let mut rows: Vec<Vec<u128>> = Vec::with_capacity(n + 1);
        for r in 0..=n {
            let mut row = vec![1u128; r + 1];
            for k in 1..r {
                row[k] = rows[r - 1][k - 1] + rows[r - 1][k];
            }
            rows.push(row);
        }
        Self { rows }
    }

    /// `C(n, k)`, zero when `k > n`.
    pub fn get(&self, n: usize, k: usize) -> u128 {
        if k > n {
            0
        } else {
            self.rows[n][k]
        }
    }
}

/// `C(n, k)` as a big integer.
pub fn big_binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// The rational with the same shortest decimal expansion as `x`, so that
/// `0.1` means one tenth rather than the nearest double.
pub fn decimal(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let s = x.to_string();
    let (int_part, frac) = s.split_once('.').unwrap_or((&s, ""));
    let digits: BigInt = format!("{int_part}{frac}").parse().ok()?;
    Some(BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32)))
}
