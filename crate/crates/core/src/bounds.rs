//! Size bounds for packing sets: the syndrome-count (sphere-packing style)
//! upper bound, the lower bound every maximal set satisfies, their
//! closed-form relaxations, and the ratio-set refinement for `t = 1`.
//!
//! Integer sums are exact until they leave the `u128` range, after which
//! they saturate; every caller only compares them against `q < 2^62`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::ntheory::gcd;
use crate::packing::ErrorAlphabet;

fn gcd128(a: u128, b: u128) -> u128 {
    if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
        return gcd(a as u64, b as u64) as u128;
    }
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `sum_{j=0}^{min(t,n)} C(n, j) a^j`: the number of error vectors of
/// weight at most `t` over `n` positions and an alphabet of size `a`.
pub fn error_count(n: u64, a: u64, t: u32) -> u128 {
    let top = (t as u64).min(n);
    let mut binom: u128 = 1;
    let mut apow: u128 = 1;
    let mut sum: u128 = 1;
    for j in 1..=top {
        let g = gcd128(binom, j as u128);
        let factor = (n - j + 1) as u128 / (j as u128 / g);
        binom = match (binom / g).checked_mul(factor) {
            Some(b) => b,
            None => return u128::MAX,
        };
        apow = match apow.checked_mul(a as u128) {
            Some(p) => p,
            None => return u128::MAX,
        };
        let term = match binom.checked_mul(apow) {
            Some(x) => x,
            None => return u128::MAX,
        };
        sum = sum.saturating_add(term);
    }
    sum
}

/// Upper bound: a packing set of size `b` needs `sum_{j<=t} C(b,j) a^j <= q`.
pub fn hamming_like_bound_holds(b: u64, a: u64, t: u32, q: u64) -> bool {
    error_count(b, a, t) <= q as u128
}

/// Left-hand side of the maximal-set inequality,
/// `sum_{h=0}^t C(b+1,h) a^h * sum_{k=1}^t C(b,k-1) a^k + b + 1`.
pub fn maximal_lower_lhs(b: u64, a: u64, t: u32) -> u128 {
    let first = error_count(b + 1, a, t);
    let second = error_count(b, a, t - 1).saturating_mul(a as u128);
    first.saturating_mul(second).saturating_add(b as u128 + 1)
}

/// Necessary condition for a maximal packing set of size `b`.
pub fn maximal_lower_bound_holds(b: u64, a: u64, t: u32, q: u64) -> bool {
    t >= 1 && maximal_lower_lhs(b, a, t) >= q as u128
}

fn check_params(a: u64, t: u32, q: u64) -> Result<()> {
    if a == 0 || t == 0 || q < 2 {
        return Err(Error::InvalidParameter(format!(
            "need A >= 1, t >= 1, q >= 2; got A = {a}, t = {t}, q = {q}"
        )));
    }
    Ok(())
}

/// Closed-form relaxation of the upper bound: `B < t (q^(1/t) / A + 1)`.
pub fn upper_closed(a: u64, t: u32, q: u64) -> f64 {
    t as f64 * ((q as f64).powf(1.0 / t as f64) / a as f64 + 1.0)
}

/// Closed-form lower bound for maximal sets:
/// `B > (q / (5A))^(1/(2t-1)) / A - 1`.
pub fn lower_closed(a: u64, t: u32, q: u64) -> f64 {
    (q as f64 / (5.0 * a as f64)).powf(1.0 / (2 * t - 1) as f64) / a as f64 - 1.0
}

/// Largest `B` allowed by the upper bound (binary search; the sum is
/// monotone in `B`).
pub fn max_b_upper(a: u64, t: u32, q: u64) -> Result<u64> {
    check_params(a, t, q)?;
    let mut hi = 1u64;
    while hamming_like_bound_holds(hi, a, t, q) {
        hi *= 2;
    }
    let mut lo = 0u64;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if hamming_like_bound_holds(mid, a, t, q) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Smallest `B` for which the maximal-set inequality holds. Every maximal
/// `(t, A, q)`-packing set has at least this many elements.
pub fn min_b_maximal(a: u64, t: u32, q: u64) -> Result<u64> {
    check_params(a, t, q)?;
    // b = q - 1 always satisfies the inequality
    let (mut lo, mut hi) = (0u64, q - 1);
    if maximal_lower_bound_holds(0, a, t, q) {
        return Ok(0);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if maximal_lower_bound_holds(mid, a, t, q) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `{x / y : x, y in A}`.
pub fn ratio_set(alphabet: &ErrorAlphabet, ctx: &FieldCtx) -> BTreeSet<Elem> {
    let inverses: Vec<Elem> = alphabet
        .elements()
        .iter()
        .map(|&y| ctx.inv(y).expect("alphabet elements are nonzero"))
        .collect();
    alphabet
        .elements()
        .iter()
        .flat_map(|&x| inverses.iter().map(move |&yi| ctx.mul(x, yi)))
        .collect()
}

/// For `t = 1` every maximal set has `B >= (q - 1) / #(A/A)`; returns the
/// ceiling.
pub fn ratio_lower_bound(q: u64, ratio_set_size: u64) -> u64 {
    (q - 1).div_ceil(ratio_set_size)
}

fn six_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let digits = 5 - x.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits);
    (x * scale).round() / scale
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub q: u64,
    #[serde(rename = "A")]
    pub a: u64,
    pub t: u32,
    /// Number of weight-`<= t` error vectors at `B = upper_exact`.
    #[serde(rename = "M")]
    pub m: u128,
    pub upper_exact: u64,
    /// Advisory, 6 significant digits.
    pub upper_closed: f64,
    pub lower_maximal_exact: u64,
    /// Advisory, 6 significant digits.
    pub lower_closed: f64,
    /// False for `q < 11`, where the closed form is not established.
    pub lower_closed_applies: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ratio_set_size: Option<u64>,
    /// `ceil((q - 1) / #(A/A))`, only for `t = 1`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lower_ratio_t1: Option<u64>,
}

impl BoundsReport {
    pub fn new(q: u64, a: u64, t: u32) -> Result<Self> {
        let upper_exact = max_b_upper(a, t, q)?;
        Ok(BoundsReport {
            q,
            a,
            t,
            m: error_count(upper_exact, a, t),
            upper_exact,
            upper_closed: six_significant(upper_closed(a, t, q)),
            lower_maximal_exact: min_b_maximal(a, t, q)?,
            lower_closed: six_significant(lower_closed(a, t, q)),
            lower_closed_applies: q >= 11,
            ratio_set_size: None,
            lower_ratio_t1: None,
        })
    }

    /// Report for a concrete alphabet, including the ratio-set refinement.
    pub fn for_alphabet(ctx: &FieldCtx, alphabet: &ErrorAlphabet, t: u32) -> Result<Self> {
        let mut r = Self::new(ctx.q(), alphabet.len() as u64, t)?;
        let ratios = ratio_set(alphabet, ctx).len() as u64;
        r.ratio_set_size = Some(ratios);
        if t == 1 {
            r.lower_ratio_t1 = Some(ratio_lower_bound(ctx.q(), ratios));
        }
        Ok(r)
    }
}

impl fmt::Display for BoundsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut rows: Vec<(&str, String)> = vec![
            ("q", self.q.to_string()),
            ("A", self.a.to_string()),
            ("t", self.t.to_string()),
            ("M (at upper_exact)", self.m.to_string()),
            ("upper_exact", self.upper_exact.to_string()),
            ("upper_closed (advisory)", format!("{}", self.upper_closed)),
            ("lower_maximal_exact", self.lower_maximal_exact.to_string()),
            (
                "lower_closed (advisory)",
                if self.lower_closed_applies {
                    format!("{}", self.lower_closed)
                } else {
                    format!("{} (vacuous, q < 11)", self.lower_closed)
                },
            ),
        ];
        if let Some(r) = self.ratio_set_size {
            rows.push(("ratio_set_size", r.to_string()));
        }
        if let Some(r) = self.lower_ratio_t1 {
            rows.push(("lower_ratio_t1", r.to_string()));
        }
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in rows {
            writeln!(f, "{k:<width$}  {v:>12}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_count(n: u64, a: u64, t: u32) -> u128 {
        // sum over subsets of size <= t, counted directly
        (0u64..1 << n)
            .filter(|s| s.count_ones() <= t)
            .map(|s| (a as u128).pow(s.count_ones()))
            .sum()
    }

    #[test]
    fn error_count_matches_subset_enumeration() {
        for n in 0..=12 {
            for a in 1..=4 {
                for t in 0..=4 {
                    assert_eq!(error_count(n, a, t), brute_count(n, a, t), "{n} {a} {t}");
                }
            }
        }
        assert_eq!(error_count(4, 15, 4), 65536);
        assert_eq!(error_count(1000, 1000, 20), u128::MAX);
        // binomials up to C(100, 50) ~ 1e29 stay exact
        assert_eq!(error_count(100, 1, 100), 1u128 << 100);
        assert_eq!(error_count(200, 1, 200), u128::MAX);
    }

    #[test]
    fn upper_bound_examples() {
        assert!(hamming_like_bound_holds(5, 2, 1, 11));
        assert_eq!(error_count(5, 2, 1), 11);
        assert!(hamming_like_bound_holds(4, 1, 2, 101));
        assert!(!hamming_like_bound_holds(4, 15, 4, 16));

        assert_eq!(max_b_upper(2, 1, 11).unwrap(), 5);
        assert!((upper_closed(2, 1, 11) - 6.5).abs() < 1e-12);
        assert_eq!(max_b_upper(1, 2, 101).unwrap(), 13);
        assert_eq!(max_b_upper(15, 4, 65536).unwrap(), 4);
        assert_eq!(error_count(4, 15, 4), 65536);
        assert!(max_b_upper(0, 1, 11).is_err());
    }

    #[test]
    fn maximal_lower_examples() {
        assert_eq!(maximal_lower_lhs(3, 1, 2), 48);
        assert!(maximal_lower_bound_holds(3, 1, 2, 11));
        assert_eq!(maximal_lower_lhs(1, 2, 1), 12);
        assert!(maximal_lower_bound_holds(1, 2, 1, 11));
        assert!(!maximal_lower_bound_holds(0, 1, 1, 11));

        assert_eq!(min_b_maximal(2, 1, 11).unwrap(), 1);
        assert!(lower_closed(2, 1, 11) < 0.0);
        let c = lower_closed(3, 2, 1_000_000);
        assert!((c - 12.516).abs() < 0.001, "{c}");
        assert_eq!(min_b_maximal(1, 1, 101).unwrap(), 49);
        assert_eq!(ratio_lower_bound(101, 1), 100);
    }

    #[test]
    fn closed_forms_dominate_exact() {
        for q in [11u64, 101, 1009, 65536, 1_000_003, 1 << 40] {
            for a in 1..=5 {
                for t in 1..=4 {
                    let up = max_b_upper(a, t, q).unwrap();
                    assert!((up as f64) < upper_closed(a, t, q), "{q} {a} {t}");
                    let lo = min_b_maximal(a, t, q).unwrap();
                    assert!(lo <= up.max(1) || lo <= q, "{q} {a} {t}");
                    if q >= 11 {
                        // the exact inversion is at least as strong as the closed form
                        assert!(lo as f64 > lower_closed(a, t, q) - 1e-9, "{q} {a} {t}");
                    }
                }
            }
        }
    }

    #[test]
    fn ratio_set_examples() {
        let f13 = FieldCtx::prime(13).unwrap();
        let a = ErrorAlphabet::from_values(&f13, &[1, 5]).unwrap();
        let r: Vec<u64> = ratio_set(&a, &f13).into_iter().map(Elem::value).collect();
        assert_eq!(r, vec![1, 5, 8]);
        assert_eq!(ratio_lower_bound(13, 3), 4);
        let f11 = FieldCtx::prime(11).unwrap();
        let a = ErrorAlphabet::from_values(&f11, &[1, 2]).unwrap();
        let r: Vec<u64> = ratio_set(&a, &f11).into_iter().map(Elem::value).collect();
        assert_eq!(r, vec![1, 2, 6]);
        let a = ErrorAlphabet::from_values(&f11, &[7]).unwrap();
        assert_eq!(ratio_set(&a, &f11).len(), 1);
    }

    #[test]
    fn report_rounding_and_json() {
        let r = BoundsReport::new(1_000_000, 3, 2).unwrap();
        assert_eq!(r.lower_closed, 12.516);
        let r = BoundsReport::new(11, 2, 1).unwrap();
        assert_eq!(r.upper_exact, 5);
        assert_eq!(r.m, 11);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["upper_exact"], 5);
        assert_eq!(json["M"], 11);
        assert!(json.get("lower_ratio_t1").is_none());
        let r = BoundsReport::new(7, 1, 1).unwrap();
        assert!(!r.lower_closed_applies);
        assert!(r.to_string().contains("vacuous"));
    }
}
