//! Explicit packing-set constructions: digit powers, polynomial bases,
//! quadratic residues, ratio-set alphabets, and the randomized
//! roots-of-unity construction with its sufficient-condition certifier.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bounds::error_count;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::ntheory::{
    find_primitive_root, is_prime, random_factored_integer, random_prime_in_step1_interval,
    FactoredInteger,
};
use crate::packing::{
    verify_packing_with_cap, ErrorAlphabet, PackingConfig, PackingSet, PatternCursor, Status,
};
use crate::rng;

fn verify_if_feasible(ps: PackingSet, cap: u64) -> Result<PackingSet> {
    if ps.error_count() > cap as u128 {
        return Ok(ps);
    }
    let status = verify_packing_with_cap(&ps, cap)?.into();
    Ok(ps.with_status(status))
}

/// Largest `L` with `(lambda + 1)^L <= p`.
pub fn powers_length(p: u64, lambda: u64) -> u32 {
    let base = lambda as u128 + 1;
    let mut l = 0;
    let mut acc: u128 = base;
    while acc <= p as u128 {
        l += 1;
        acc *= base;
    }
    l
}

/// `B = {(lambda+1)^i : 0 <= i < L}` with alphabet `{1..lambda}` over `F_p`.
/// Every weight-`<= L` combination is a base-`(lambda+1)` numeral below `p`,
/// so distinct errors give distinct syndromes.
pub fn powers_packing_set(p: u64, lambda: u64, t: u32, cap: u64) -> Result<PackingSet> {
    let field = FieldCtx::prime(p)?;
    if lambda == 0 {
        return Err(Error::InvalidParameter("lambda must be at least 1".into()));
    }
    let l = powers_length(p, lambda);
    if l == 0 {
        return Err(Error::InvalidParameter(format!(
            "lambda + 1 = {} exceeds p",
            lambda + 1
        )));
    }
    let config = PackingConfig::new(t)?;
    if t > l {
        return Err(Error::TExceedsL { t, l });
    }
    let mut b = Vec::with_capacity(l as usize);
    let mut x = 1u64;
    for _ in 0..l {
        b.push(field.elem(x)?);
        x = x.saturating_mul(lambda + 1);
    }
    let alphabet = ErrorAlphabet::limited_magnitude(&field, lambda)?;
    verify_if_feasible(PackingSet::new(field, b, alphabet, config)?, cap)
}

/// Power basis `{1, x, ..., x^(k-1)}` of `F_{p^k}` over `F_p`, with alphabet
/// `F_p^*` and `t = k`. Its syndromes are exactly the `p^k` field elements.
pub fn basis_packing_set(p: u64, k: u32, seed: u64, cap: u64) -> Result<PackingSet> {
    let field = FieldCtx::extension(p, k, seed)?;
    let basis = (0..k as usize)
        .map(|i| {
            let mut c = vec![0u64; k as usize];
            c[i] = 1;
            field.from_coeffs(&c)
        })
        .collect::<Result<Vec<_>>>()?;
    let alphabet = ErrorAlphabet::new(&field, (1..p).map(|a| field.from_int(a)).collect())?;
    let config = PackingConfig::new(k)?;
    verify_if_feasible(PackingSet::new(field, basis, alphabet, config)?, cap)
}

/// Quadratic residues modulo `p` as a `(1, {1,2}, p)`-packing set; requires
/// `p = 3, 5 (mod 8)` so that 2 is a non-residue.
pub fn quadratic_residue_packing_set(p: u64, cap: u64) -> Result<PackingSet> {
    let field = FieldCtx::prime(p)?;
    if !matches!(p % 8, 3 | 5) {
        return Err(Error::WrongResidueClass(p));
    }
    let residues: BTreeSet<u64> = (1..=(p - 1) / 2).map(|x| x * x % p).collect();
    let b = residues
        .into_iter()
        .map(|r| field.elem(r))
        .collect::<Result<Vec<_>>>()?;
    let alphabet = ErrorAlphabet::from_values(&field, &[1, 2])?;
    verify_if_feasible(
        PackingSet::new(field, b, alphabet, PackingConfig::new(1)?)?,
        cap,
    )
}

/// Alphabet `{g, g^2, ..., g^d, g^{2d}, ..., g^{(d-1)d}, g^{d^2}}` for `g` of
/// order `k` and `d = ceil(sqrt(k))`, whose ratio set is the whole subgroup
/// generated by `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioSetAlphabet {
    pub g: Elem,
    pub order: u64,
    pub d: u64,
    pub alphabet: ErrorAlphabet,
    /// Set when some exponents coincided modulo the order and were merged.
    pub degenerate: bool,
    /// Any `(1, A, q)`-packing set has at most `(q - 1) / order` elements.
    pub packing_cap: u64,
}

pub fn ratio_set_alphabet(
    ctx: &FieldCtx,
    g: Elem,
    fact: &FactoredInteger,
) -> Result<RatioSetAlphabet> {
    let order = ctx.element_order(g, fact)?;
    if order < 2 {
        return Err(Error::InvalidParameter(
            "generator must have order at least 2".into(),
        ));
    }
    let mut d = 1u64;
    while d * d < order {
        d += 1;
    }
    let exponents = (1..=d)
        .chain((2..d).map(|j| j * d))
        .chain(std::iter::once(d * d));
    let mut elems: Vec<Elem> = Vec::new();
    let mut degenerate = false;
    for e in exponents {
        let x = ctx.pow(g, e);
        if elems.contains(&x) {
            degenerate = true;
        } else {
            elems.push(x);
        }
    }
    Ok(RatioSetAlphabet {
        g,
        order,
        d,
        alphabet: ErrorAlphabet::new(ctx, elems)?,
        degenerate,
        packing_cap: (ctx.q() - 1) / order,
    })
}

/// Result of the sufficient-condition check: no combination
/// `sum a_b b` with coefficients in `{-lambda..lambda}` and weight
/// `1..=2t` vanishes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum SufficientVerdict {
    VerifiedSufficient,
    /// A vanishing combination. This does not refute the packing property.
    SufficientCheckFailed {
        support: Vec<usize>,
        coefficients: Vec<i64>,
    },
    TooLarge {
        count: u128,
        cap: u64,
    },
}

/// Number of signed combinations the sufficient check must rule out,
/// `sum_{i=1}^{2t} C(n, i) (2 lambda)^i`.
pub fn sufficient_count(n: usize, lambda: u64, t: u32) -> u128 {
    error_count(n as u64, 2 * lambda, 2 * t).saturating_sub(1)
}

/// Checks the sufficient condition for `elements` to be a
/// `(t, {1..lambda}, p)`-packing set. Negative coefficients are realized
/// as field negation. Only combinations with a positive leading
/// coefficient are enumerated, since a combination and its negation vanish
/// together; the reported witness is the first vanishing one in
/// enumeration order.
pub fn sufficient_check(
    ctx: &FieldCtx,
    elements: &[Elem],
    lambda: u64,
    t: u32,
    cap: u64,
) -> SufficientVerdict {
    let count = sufficient_count(elements.len(), lambda, t);
    if count > cap as u128 {
        return SufficientVerdict::TooLarge { count, cap };
    }
    let lam = lambda as usize;
    // coefficient index v < lambda means +(v+1), otherwise -(v-lambda+1)
    let coefficient = |v: usize| -> i64 {
        if v < lam {
            v as i64 + 1
        } else {
            -((v - lam) as i64 + 1)
        }
    };
    let products: Vec<Vec<Elem>> = elements
        .iter()
        .map(|&b| {
            (0..2 * lam)
                .map(|v| {
                    let c = coefficient(v);
                    let m = ctx.mul(ctx.from_int(c.unsigned_abs()), b);
                    if c > 0 {
                        m
                    } else {
                        ctx.neg(m)
                    }
                })
                .collect()
        })
        .collect();
    let mut cur = PatternCursor::new(elements.len(), 2 * lam, 2 * t);
    while cur.advance() {
        if cur.support.is_empty() || cur.values[0] >= lam {
            continue;
        }
        let s = cur
            .support
            .iter()
            .zip(&cur.values)
            .fold(ctx.zero(), |s, (&i, &v)| ctx.add(s, products[i][v]));
        if s == ctx.zero() {
            return SufficientVerdict::SufficientCheckFailed {
                support: cur.support.clone(),
                coefficients: cur.values.iter().map(|&v| coefficient(v)).collect(),
            };
        }
    }
    SufficientVerdict::VerifiedSufficient
}

/// One execution of the randomized roots-of-unity construction, with every
/// intermediate value needed to replay it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicRun {
    pub seed: u64,
    #[serde(rename = "K")]
    pub k_scale: u64,
    #[serde(rename = "Q")]
    pub q_scale: u64,
    pub lambda: u64,
    pub t: u32,
    /// Prime order of the subgroup.
    pub ell: u64,
    /// Integer range `[ceil((Q-1)/ell), floor(2(Q-1)/ell)]` sampled for `m`.
    pub m_range: (u64, u64),
    pub m: FactoredInteger,
    pub step2_draws: u64,
    pub p: u64,
    /// Primitive root of `F_p^*`.
    pub g: u64,
    /// `g^((p-1)/ell)`, an element of order `ell`.
    pub b0: u64,
    /// `b0, b0^2, ..., b0^(ell-1)`.
    #[serde(rename = "B0")]
    pub b0_powers: Vec<u64>,
    /// Finite proxy `lambda^{2t} (4K)^{2t+2} max(ln(t lambda), 1) < Q` of the
    /// asymptotic size condition. Advisory only.
    pub kq_condition: bool,
    pub sufficient: SufficientVerdict,
    pub packing: PackingSet,
}

/// Finite proxy for the asymptotic scale condition on `K` and `Q`.
pub fn kq_condition(k_scale: u64, q_scale: u64, lambda: u64, t: u32) -> bool {
    let t2 = 2 * t as i32;
    let lhs = (lambda as f64).powi(t2)
        * (4.0 * k_scale as f64).powi(t2 + 2)
        * (t as f64 * lambda as f64).ln().max(1.0);
    lhs < q_scale as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclotomicParams {
    pub k_scale: u64,
    pub q_scale: u64,
    pub lambda: u64,
    pub t: u32,
    pub seed: u64,
}

/// Step 2 integer range for a given `Q` and `ell`.
pub fn step2_range(q_scale: u64, ell: u64) -> (u64, u64) {
    let lo = (q_scale - 1).div_ceil(ell).max(2);
    let hi = 2 * (q_scale - 1) / ell;
    (lo, hi)
}

/// Runs the four steps: a random prime `ell` near `K`; a random factored
/// `m` with `p = m ell + 1` prime; a primitive root `g` of `F_p^*` found with
/// the known factorization of `p - 1`; and `b0 = g^((p-1)/ell)`. The set
/// `B0` of nontrivial powers of `b0` is then certified: by the sufficient
/// condition when affordable, otherwise (or when that check is
/// inconclusive) by exhaustive verification, otherwise left unverified.
pub fn cyclotomic_construct(params: CyclotomicParams, cap: u64) -> Result<CyclotomicRun> {
    let CyclotomicParams {
        k_scale,
        q_scale,
        lambda,
        t,
        seed,
    } = params;
    if k_scale < 3 || q_scale <= 2 * k_scale || lambda == 0 || t == 0 {
        return Err(Error::InvalidParameter(format!(
            "need K >= 3, Q > 2K, lambda >= 1, t >= 1; got K = {k_scale}, Q = {q_scale}, lambda = {lambda}, t = {t}"
        )));
    }
    let ell = random_prime_in_step1_interval(k_scale, &mut rng::stream(seed, 1))?;

    let (lo, hi) = step2_range(q_scale, ell);
    if lo > hi {
        return Err(Error::InvalidParameter(format!(
            "empty range for m: [{lo}, {hi}]"
        )));
    }
    let budget = (40.0 * (q_scale as f64).ln()).ceil() as u64;
    let mut step2 = rng::stream(seed, 2);
    let mut draws = 0;
    let (m, p) = loop {
        if draws == budget {
            return Err(Error::StepBudgetExceeded(budget));
        }
        draws += 1;
        let m = random_factored_integer(lo, hi, &mut step2)?;
        if let Some(p) = m.value.checked_mul(ell).and_then(|x| x.checked_add(1)) {
            if is_prime(p) {
                break (m, p);
            }
        }
    };

    let ctx = FieldCtx::prime(p)?;
    let fact = m.times_prime(ell)?;
    let g = find_primitive_root(&ctx, &fact, &mut rng::stream(seed, 3))?;
    assemble(params, ell, (lo, hi), m, draws, g.value(), cap)
}

/// Builds the run record from the random choices of steps 1 to 3.
pub fn assemble(
    params: CyclotomicParams,
    ell: u64,
    m_range: (u64, u64),
    m: FactoredInteger,
    step2_draws: u64,
    g: u64,
    cap: u64,
) -> Result<CyclotomicRun> {
    let p = m.value * ell + 1;
    let ctx = FieldCtx::prime(p)?;
    if params.lambda >= p {
        return Err(Error::InvalidParameter(format!(
            "lambda = {} must be below p = {p}",
            params.lambda
        )));
    }
    let b0 = ctx.pow(ctx.elem(g)?, m.value);
    let mut powers = Vec::with_capacity(ell as usize - 1);
    let mut x = b0;
    for _ in 1..ell {
        powers.push(x);
        x = ctx.mul(x, b0);
    }
    let alphabet = ErrorAlphabet::limited_magnitude(&ctx, params.lambda)?;
    let packing = PackingSet::new(
        ctx.clone(),
        powers.clone(),
        alphabet,
        PackingConfig::new(params.t)?,
    )?;
    let sufficient = sufficient_check(&ctx, &powers, params.lambda, params.t, cap);
    let status = match &sufficient {
        SufficientVerdict::VerifiedSufficient => Status::VerifiedSufficient,
        _ if packing.error_count() <= cap as u128 => verify_packing_with_cap(&packing, cap)?.into(),
        _ => Status::Unverified,
    };
    Ok(CyclotomicRun {
        seed: params.seed,
        k_scale: params.k_scale,
        q_scale: params.q_scale,
        lambda: params.lambda,
        t: params.t,
        ell,
        m_range,
        m,
        step2_draws,
        p,
        g,
        b0: b0.value(),
        b0_powers: powers.iter().map(|e| e.value()).collect(),
        kq_condition: kq_condition(params.k_scale, params.q_scale, params.lambda, params.t),
        sufficient,
        packing: packing.with_status(status),
    })
}

/// Re-runs the sufficient check on a recorded run.
pub fn certify_sufficient(run: &CyclotomicRun, cap: u64) -> Result<SufficientVerdict> {
    let ctx = FieldCtx::prime(run.p)?;
    let elems = run
        .b0_powers
        .iter()
        .map(|&v| ctx.elem(v))
        .collect::<Result<Vec<_>>>()?;
    Ok(sufficient_check(&ctx, &elems, run.lambda, run.t, cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntheory::factor;
    use crate::packing::{verify_packing, Verdict, DEFAULT_ENUM_CAP};

    const CAP: u64 = DEFAULT_ENUM_CAP;

    fn values(ps: &PackingSet) -> Vec<u64> {
        ps.elements().iter().map(|e| e.value()).collect()
    }

    #[test]
    fn powers_examples() {
        let ps = powers_packing_set(11, 1, 3, CAP).unwrap();
        assert_eq!(values(&ps), vec![1, 2, 4]);
        assert_eq!(ps.status(), &Status::VerifiedExhaustive);
        let ps = powers_packing_set(101, 2, 4, CAP).unwrap();
        assert_eq!(values(&ps), vec![1, 3, 9, 27]);
        assert_eq!(ps.status(), &Status::VerifiedExhaustive);
        assert!(matches!(
            powers_packing_set(11, 1, 4, CAP),
            Err(Error::TExceedsL { t: 4, l: 3 })
        ));
        assert_eq!(powers_length(11, 1), 3);
        assert_eq!(powers_length(257, 3), 4);
        assert_eq!(powers_length(7, 7), 0);
        assert!(powers_packing_set(7, 7, 1, CAP).is_err());
        // t = 1 is accepted
        assert!(powers_packing_set(11, 1, 1, CAP)
            .unwrap()
            .status()
            .is_certified());
    }

    #[test]
    fn powers_unverified_above_cap() {
        let ps = powers_packing_set(101, 2, 4, 5).unwrap();
        assert_eq!(ps.status(), &Status::Unverified);
    }

    #[test]
    fn basis_examples() {
        let ps = basis_packing_set(3, 2, 0, CAP).unwrap();
        assert_eq!(ps.field().q(), 9);
        assert_eq!(ps.len(), 2);
        assert_eq!(ps.error_count(), 9);
        assert_eq!(ps.status(), &Status::VerifiedExhaustive);
        let ps = basis_packing_set(2, 4, 3, CAP).unwrap();
        assert_eq!(ps.error_count(), 16);
        assert_eq!(ps.status(), &Status::VerifiedExhaustive);
        assert!(basis_packing_set(2, 1, 0, CAP).is_err());
    }

    #[test]
    fn quadratic_residue_examples() {
        let ps = quadratic_residue_packing_set(11, CAP).unwrap();
        assert_eq!(values(&ps), vec![1, 3, 4, 5, 9]);
        assert_eq!(ps.status(), &Status::VerifiedExhaustive);
        assert_eq!(ps.error_count(), 11);
        let ps = quadratic_residue_packing_set(19, CAP).unwrap();
        assert_eq!(values(&ps), vec![1, 4, 5, 6, 7, 9, 11, 16, 17]);
        assert_eq!(ps.status(), &Status::VerifiedExhaustive);
        assert!(matches!(
            quadratic_residue_packing_set(17, CAP),
            Err(Error::WrongResidueClass(17))
        ));
        assert!(matches!(
            quadratic_residue_packing_set(15, CAP),
            Err(Error::NotPrime(15))
        ));
    }

    #[test]
    fn ratio_alphabet_examples() {
        let f13 = FieldCtx::prime(13).unwrap();
        let r = ratio_set_alphabet(&f13, f13.elem(3).unwrap(), &factor(12).unwrap()).unwrap();
        assert_eq!((r.order, r.d), (3, 2));
        assert_eq!(
            r.alphabet
                .elements()
                .iter()
                .map(|e| e.value())
                .collect::<Vec<_>>(),
            vec![3, 9]
        );
        assert!(r.degenerate);
        let ratios: Vec<u64> = crate::bounds::ratio_set(&r.alphabet, &f13)
            .into_iter()
            .map(|e| e.value())
            .collect();
        assert_eq!(ratios, vec![1, 3, 9]);
        assert_eq!(r.packing_cap, 4);

        let f11 = FieldCtx::prime(11).unwrap();
        let r = ratio_set_alphabet(&f11, f11.elem(10).unwrap(), &factor(10).unwrap()).unwrap();
        assert_eq!(r.order, 2);
        assert_eq!(
            r.alphabet
                .elements()
                .iter()
                .map(|e| e.value())
                .collect::<Vec<_>>(),
            vec![10, 1]
        );
        assert!(r.degenerate);
        assert_eq!(crate::bounds::ratio_set(&r.alphabet, &f11).len(), 2);

        assert!(ratio_set_alphabet(&f11, f11.one(), &factor(10).unwrap()).is_err());
    }

    #[test]
    fn ratio_alphabet_generates_subgroup() {
        for p in [31u64, 97, 101, 211] {
            let ctx = FieldCtx::prime(p).unwrap();
            let fact = factor(p - 1).unwrap();
            for g in ctx.elements().skip(2) {
                let r = ratio_set_alphabet(&ctx, g, &fact).unwrap();
                let subgroup: BTreeSet<Elem> = (0..r.order).map(|i| ctx.pow(g, i)).collect();
                assert_eq!(crate::bounds::ratio_set(&r.alphabet, &ctx), subgroup);
                assert!((r.alphabet.len() as u64) < 2 * r.d);
            }
        }
    }

    fn example_params(t: u32) -> CyclotomicParams {
        CyclotomicParams {
            k_scale: 4,
            q_scale: 100,
            lambda: 1,
            t,
            seed: 0,
        }
    }

    #[test]
    fn assemble_worked_example() {
        let m = factor(20).unwrap();
        let run = assemble(example_params(2), 5, (20, 39), m, 1, 2, CAP).unwrap();
        assert_eq!(run.p, 101);
        assert_eq!(run.b0, 95);
        assert_eq!(run.b0_powers, vec![95, 36, 87, 84]);
        assert_eq!(run.sufficient, SufficientVerdict::VerifiedSufficient);
        assert_eq!(run.packing.status(), &Status::VerifiedSufficient);
        assert_eq!(
            verify_packing(&run.packing).unwrap(),
            Verdict::VerifiedExhaustive
        );
        assert_eq!((95 + 36 + 87 + 84) % 101, 100);
    }

    #[test]
    fn construct_invariants() {
        for seed in 0..10 {
            let run = cyclotomic_construct(
                CyclotomicParams {
                    seed,
                    ..example_params(2)
                },
                CAP,
            )
            .unwrap();
            assert_eq!(run.ell, 5);
            assert!(is_prime(run.p));
            assert_eq!(run.p % run.ell, 1);
            assert!((100..=199).contains(&run.p));
            let ctx = FieldCtx::prime(run.p).unwrap();
            let b0 = ctx.elem(run.b0).unwrap();
            assert_eq!(ctx.pow(b0, run.ell), ctx.one());
            assert_ne!(b0, ctx.one());
            assert_eq!(run.b0_powers.len() as u64, run.ell - 1);
            let set: BTreeSet<u64> = run.b0_powers.iter().copied().collect();
            assert_eq!(set.len() as u64, run.ell - 1);
            assert!(!set.contains(&1));
            if run.p == 101 {
                assert_eq!(set, BTreeSet::from([36, 84, 87, 95]));
            }
            assert_eq!(certify_sufficient(&run, CAP).unwrap(), run.sufficient);
            let again = cyclotomic_construct(
                CyclotomicParams {
                    seed,
                    ..example_params(2)
                },
                CAP,
            )
            .unwrap();
            assert_eq!(run, again);
        }
    }

    #[test]
    fn construct_t1_always_certified() {
        for seed in 0..10 {
            let run = cyclotomic_construct(
                CyclotomicParams {
                    seed,
                    ..example_params(1)
                },
                CAP,
            )
            .unwrap();
            assert_eq!(run.sufficient, SufficientVerdict::VerifiedSufficient);
        }
    }

    #[test]
    fn construct_rejects_bad_parameters() {
        let bad = |k, q, l, t| {
            cyclotomic_construct(
                CyclotomicParams {
                    k_scale: k,
                    q_scale: q,
                    lambda: l,
                    t,
                    seed: 0,
                },
                CAP,
            )
            .is_err()
        };
        assert!(bad(2, 100, 1, 1));
        assert!(bad(4, 8, 1, 1));
        assert!(bad(4, 100, 0, 1));
        assert!(bad(4, 100, 1, 0));
        // [8, 10] holds no prime
        assert!(matches!(
            cyclotomic_construct(
                CyclotomicParams {
                    k_scale: 7,
                    q_scale: 1000,
                    lambda: 1,
                    t: 1,
                    seed: 0
                },
                CAP
            ),
            Err(Error::NoPrimeFound { .. })
        ));
    }

    #[test]
    fn sufficient_check_finds_opposite_pair() {
        let ctx = FieldCtx::prime(11).unwrap();
        let elems = vec![
            ctx.elem(3).unwrap(),
            ctx.elem(5).unwrap(),
            ctx.elem(8).unwrap(),
        ];
        assert_eq!(
            sufficient_check(&ctx, &elems, 1, 1, CAP),
            SufficientVerdict::SufficientCheckFailed {
                support: vec![0, 2],
                coefficients: vec![1, 1]
            }
        );
        let elems = vec![ctx.elem(3).unwrap(), ctx.elem(5).unwrap()];
        assert_eq!(
            sufficient_check(&ctx, &elems, 1, 1, CAP),
            SufficientVerdict::VerifiedSufficient
        );
        assert!(matches!(
            sufficient_check(&ctx, &elems, 3, 2, 3),
            SufficientVerdict::TooLarge { .. }
        ));
        assert_eq!(sufficient_count(4, 1, 2), 80);
    }

    #[test]
    fn kq_flag() {
        assert!(!kq_condition(4, 100, 1, 2));
        assert!(kq_condition(4, 1 << 40, 1, 1));
    }

    #[test]
    fn run_json_has_replay_fields() {
        let run = cyclotomic_construct(
            CyclotomicParams {
                seed: 3,
                ..example_params(2)
            },
            CAP,
        )
        .unwrap();
        let v = serde_json::to_value(&run).unwrap();
        for key in [
            "seed",
            "K",
            "Q",
            "ell",
            "m",
            "p",
            "g",
            "b0",
            "B0",
            "sufficient",
            "packing",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        let back: CyclotomicRun = serde_json::from_value(v).unwrap();
        assert_eq!(back, run);
    }
}
