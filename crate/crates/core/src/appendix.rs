//! Numerical checks of the three auxiliary binomial and balance lemmas.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use crate::binom::{big_binomial, decimal, Pascal};
use crate::error::{invalid, Result};
use crate::rng::stream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lemma {
    A1,
    A2,
    A3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "<")]
    Below,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheckReport {
    pub lemma: Lemma,
    pub parameters: BTreeMap<String, f64>,
    /// Holds iff `lhs relation rhs`.
    pub relation: Relation,
    pub lhs: String,
    pub rhs: String,
    /// `lhs - rhs`.
    pub margin: String,
    pub lhs_value: f64,
    pub rhs_value: f64,
    pub margin_value: f64,
    pub pass: bool,
    pub samples: Option<u64>,
    /// 95% Clopper-Pearson interval for a sampled proportion.
    pub confidence_interval: Option<[f64; 2]>,
    pub premise_holds: Option<bool>,
    pub first_passing_n: Option<u64>,
}

fn rat(x: f64) -> BigRational {
    decimal(x).expect("finite parameter")
}

fn int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

fn f(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn report(lemma: Lemma, parameters: BTreeMap<String, f64>, relation: Relation, lhs: BigRational, rhs: BigRational) -> LemmaCheckReport {
    let margin = &lhs - &rhs;
    let pass = match relation {
        Relation::AtLeast => lhs >= rhs,
        Relation::Below => lhs < rhs,
    };
    LemmaCheckReport {
        lemma,
        parameters,
        relation,
        lhs_value: f(&lhs),
        rhs_value: f(&rhs),
        margin_value: f(&margin),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        margin: margin.to_string(),
        pass,
        samples: None,
        confidence_interval: None,
        premise_holds: None,
        first_passing_n: None,
    }
}

/// `C(⌊(α-η)n⌋, k)` against `(α^k - ε) C(n, k)`.
fn binomial_fraction_sides(alpha: &BigRational, eps: &BigRational, k: u64, eta: &BigRational, n: u64) -> (BigRational, BigRational) {
    let m = ((alpha - eta) * int(n)).floor().to_integer();
    let m = m.to_u64().unwrap_or(0);
    let lhs = int(big_binomial(m, k));
    let rhs = (num_traits::pow(alpha.clone(), k as usize) - eps) * int(big_binomial(n, k));
    (lhs, rhs)
}

pub fn check_binomial_fraction(alpha: f64, eps: f64, k: u64, eta: f64, n: u64) -> Result<LemmaCheckReport> {
    if !(alpha > 0.0 && alpha <= 1.0) || !(eps > 0.0) || k == 0 || !(eta > 0.0 && eta < alpha) || n < k {
        return invalid("need 0 < α <= 1, ε > 0, k >= 1, 0 < η < α and n >= k");
    }
    let (a, e, h) = (rat(alpha), rat(eps), rat(eta));
    let (lhs, rhs) = binomial_fraction_sides(&a, &e, k, &h, n);
    let mut r = report(Lemma::A1, params(&[("alpha", alpha), ("epsilon", eps), ("k", k as f64), ("eta", eta), ("n", n as f64)]), Relation::AtLeast, lhs, rhs);
    r.first_passing_n = first_passing_n(alpha, eps, k, k, n)?;
    Ok(r)
}

/// Least `n` in `from..=to` passing with `η = ε/(2k)`.
pub fn first_passing_n(alpha: f64, eps: f64, k: u64, from: u64, to: u64) -> Result<Option<u64>> {
    if k == 0 {
        return invalid("k must be positive");
    }
    let (a, e) = (rat(alpha), rat(eps));
    let h = &e / int(2 * k);
    Ok((from.max(k)..=to).find(|&n| {
        let (lhs, rhs) = binomial_fraction_sides(&a, &e, k, &h, n);
        lhs >= rhs
    }))
}

pub fn balance_window(n: usize) -> usize {
    ((n as f64).ln().powi(2).ceil() as usize).max(1)
}

/// Whether some run of at least `min_len` bits has `|Σ x_i - |J|/2| ≥ ε|J|`.
/// With `c_i = ±1` and `2ε = p/q` this asks for a run of `q c_i - p` (or
/// `-q c_i - p`) with nonnegative sum, i.e. a maximum subarray question.
pub fn has_unbalanced_window(bits: &[bool], eps: f64, min_len: usize) -> bool {
    let n = bits.len();
    let min_len = min_len.max(1);
    if n < min_len {
        return false;
    }
    let two_eps = rat(eps) * int(2u32);
    let (p, q) = (two_eps.numer().to_i128().expect("ε too fine"), two_eps.denom().to_i128().expect("ε too fine"));
    for sign in [1i128, -1] {
        let mut pre = vec![0i128; n + 1];
        for i in 0..n {
            let c = if bits[i] { 1 } else { -1 };
            pre[i + 1] = pre[i] + sign * c * q - p;
        }
        let mut lowest = i128::MAX;
        for e in min_len..=n {
            lowest = lowest.min(pre[e - min_len]);
            if pre[e] - lowest >= 0 {
                return true;
            }
        }
    }
    false
}

fn clopper_pearson(hits: u64, n: u64) -> [f64; 2] {
    if n == 0 {
        return [0.0, 1.0];
    }
    let (k, n) = (hits as f64, n as f64);
    let lo = if hits == 0 { 0.0 } else { Beta::new(k, n - k + 1.0).expect("shape").inverse_cdf(0.025) };
    let hi = if hits as f64 == n { 1.0 } else { Beta::new(k + 1.0, n - k).expect("shape").inverse_cdf(0.975) };
    [lo, hi]
}

fn balanced_report(n: usize, eps: f64, violating: u64, total: u64, extra: &[(&str, f64)]) -> LemmaCheckReport {
    let mut p = params(&[("n", n as f64), ("epsilon", eps), ("min_window", balance_window(n) as f64)]);
    p.extend(extra.iter().map(|&(k, v)| (k.to_string(), v)));
    let lhs = BigRational::new(BigInt::from(violating), BigInt::from(total.max(1)));
    let mut r = report(Lemma::A2, p, Relation::Below, lhs, rat(eps));
    r.samples = Some(total);
    r.confidence_interval = Some(clopper_pearson(violating, total));
    r
}

/// Monte Carlo estimate of the share of strings with an unbalanced window
/// of length at least `⌈ln² n⌉`.
pub fn check_locally_balanced(n: usize, eps: f64, samples: u64, seed: u64) -> Result<LemmaCheckReport> {
    if n < 4 || !(eps >= 1e-6) {
        return invalid("need n >= 4 and ε >= 1e-6");
    }
    let m = balance_window(n);
    let violating = (0..samples)
        .into_par_iter()
        .filter(|&s| {
            let mut rng = stream(seed, s);
            let bits: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
            has_unbalanced_window(&bits, eps, m)
        })
        .count() as u64;
    Ok(balanced_report(n, eps, violating, samples, &[("seed", seed as f64)]))
}

pub const EXHAUSTIVE_BALANCE_MAX: usize = 22;

/// The exact share over all `2^n` strings.
pub fn check_locally_balanced_exhaustive(n: usize, eps: f64) -> Result<LemmaCheckReport> {
    if !(4..=EXHAUSTIVE_BALANCE_MAX).contains(&n) || !(eps >= 1e-6) {
        return invalid(format!("exhaustive mode needs 4 <= n <= {EXHAUSTIVE_BALANCE_MAX} and ε >= 1e-6"));
    }
    let m = balance_window(n);
    let violating = (0..1u64 << n)
        .into_par_iter()
        .filter(|&x| {
            let bits: Vec<bool> = (0..n).map(|i| x >> i & 1 == 1).collect();
            has_unbalanced_window(&bits, eps, m)
        })
        .count() as u64;
    let mut r = balanced_report(n, eps, violating, 1 << n, &[]);
    r.confidence_interval = None;
    Ok(r)
}

/// `|E_{t∈J} f(t) - α| ≤ η` for every run `J` of length at least `⌊ηn⌋`.
fn premise_holds(vals: &[BigRational], alpha: &BigRational, eta: &BigRational) -> bool {
    let n = vals.len();
    let min_len = (eta * int(n as u64)).floor().to_integer().to_usize().unwrap_or(0).max(1);
    let mut pre = vec![BigRational::zero(); n + 1];
    for i in 0..n {
        pre[i + 1] = &pre[i] + &vals[i];
    }
    (0..n).all(|s| (s + min_len..=n).all(|e| {
        let len = int((e - s) as u64);
        (&pre[e] - &pre[s] - alpha * &len).abs() <= eta * &len
    }))
}

/// `Σ_{⌈ηn⌉ ≤ t ≤ ⌊(1-η)n⌋} f(t) C(t-1,x) C(n-t,y)` against
/// `(1-ε) α C(n, x+y+1)`; `table[t-1] = f(t)`.
pub fn check_binomial_average(table: &[f64], x: u64, y: u64, alpha: f64, eps: f64, eta: f64) -> Result<LemmaCheckReport> {
    let n = table.len() as u64;
    if n == 0 || table.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return invalid("f must be a nonempty table with values in [0, 1]");
    }
    if !(alpha > 0.0) || !(eps > 0.0) || !(eta > 0.0 && eta < 0.5) {
        return invalid("need α > 0, ε > 0 and 0 < η < 1/2");
    }
    let vals: Vec<BigRational> = table.iter().map(|&v| rat(v)).collect();
    let (a, e, h) = (rat(alpha), rat(eps), rat(eta));
    let nn = int(n);
    let lo = (&h * &nn).ceil().to_integer().to_u64().unwrap_or(1).max(1);
    let hi = ((BigRational::one() - &h) * &nn).floor().to_integer().to_u64().unwrap_or(0);
    let lhs = (lo..=hi).fold(BigRational::zero(), |acc, t| acc + &vals[t as usize - 1] * int(big_binomial(t - 1, x) * big_binomial(n - t, y)));
    let rhs = (BigRational::one() - e) * &a * int(big_binomial(n, x + y + 1));
    let mut r = report(Lemma::A3, params(&[("n", n as f64), ("x", x as f64), ("y", y as f64), ("alpha", alpha), ("epsilon", eps), ("eta", eta)]), Relation::AtLeast, lhs, rhs);
    r.premise_holds = Some(premise_holds(&vals, &a, &h));
    Ok(r)
}

/// `Σ_{t=1}^{n} C(t-1,x) C(n-t,y) = C(n, x+y+1)` for all `x + y + 1 ≤ n ≤ n_max`.
pub fn check_vandermonde(n_max: usize) -> Result<LemmaCheckReport> {
    if n_max > 127 {
        return invalid("n_max above 127");
    }
    let pas = Pascal::new(n_max);
    let mut cases = 0u64;
    let mut failures = 0u64;
    for n in 1..=n_max {
        for x in 0..n {
            for y in 0..n - x {
                let sum: u128 = (1..=n).map(|t| pas.get(t - 1, x) * pas.get(n - t, y)).sum();
                cases += 1;
                if sum != pas.get(n, x + y + 1) {
                    failures += 1;
                }
            }
        }
    }
    let holding = int(cases - failures);
    let mut r = report(Lemma::A3, params(&[("n_max", n_max as f64)]), Relation::AtLeast, holding, int(cases));
    r.samples = Some(cases);
    Ok(r)
}

/// `C(n, k)` over `C(m, k)` as an exact rational, for reporting.
pub fn binomial_ratio(m: u64, n: u64, k: u64) -> BigRational {
    let den = big_binomial(n, k);
    if den.is_zero() {
        return BigRational::zero();
    }
    let num = big_binomial(m, k);
    let g = num.gcd(&den);
    BigRational::new(BigInt::from(num / &g), BigInt::from(den / g))
}
