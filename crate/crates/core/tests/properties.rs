mod common;

use common::{pairwise_is_packing, syndrome, RefField};
use packset::bounds::{error_count, lower_closed, max_b_upper, min_b_maximal, upper_closed};
use packset::codec::{build_syndrome_table, decode, DecodeOutcome, RestrictedCode};
use packset::packing::{
    enumerate_error_vectors, verify_packing, verify_packing_by_sort, DEFAULT_ENUM_CAP,
};
use packset::{FieldCtx, PackingSet, Verdict};
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = FieldCtx> {
    prop_oneof![
        prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 31, 97, 101])
            .prop_map(|p| FieldCtx::prime(p).unwrap()),
        (
            prop::sample::select(vec![(2u64, 2u32), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)]),
            any::<u64>()
        )
            .prop_map(|((p, k), seed)| FieldCtx::extension(p, k, seed).unwrap()),
    ]
}

/// A field with distinct nonzero `B` and `A` of the requested sizes.
fn instance(
    max_b: usize,
    max_a: usize,
    max_t: u32,
) -> impl Strategy<Value = (FieldCtx, Vec<u64>, Vec<u64>, u32)> {
    field_strategy().prop_flat_map(move |f| {
        let q = f.q();
        let pool: Vec<u64> = (1..q).collect();
        let nb = max_b.min(pool.len());
        let na = max_a.min(pool.len());
        (
            Just(f),
            prop::sample::subsequence(pool.clone(), 1..=nb).prop_shuffle(),
            prop::sample::subsequence(pool, 1..=na),
            1..=max_t,
        )
    })
}

fn build(f: &FieldCtx, b: &[u64], a: &[u64], t: u32) -> PackingSet {
    let elems = b.iter().map(|&v| f.elem(v).unwrap()).collect();
    let alphabet = packset::ErrorAlphabet::from_values(f, a).unwrap();
    PackingSet::new(
        f.clone(),
        elems,
        alphabet,
        packset::PackingConfig::new(t).unwrap(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(f in field_strategy(), x in any::<u64>(), y in any::<u64>(), z in any::<u64>()) {
        let q = f.q();
        let (x, y, z) = (f.elem(x % q).unwrap(), f.elem(y % q).unwrap(), f.elem(z % q).unwrap());
        let r = RefField::of(&f);
        prop_assert_eq!(f.mul(x, y).value(), r.mul(x.value(), y.value()));
        prop_assert_eq!(f.add(x, y).value(), r.add(x.value(), y.value()));
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        prop_assert_eq!(f.add(x, f.neg(x)), f.zero());
        prop_assert_eq!(f.pow(x, q), x);
        if x != f.zero() {
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one());
        }
    }

    #[test]
    fn verifier_matches_pairwise_oracle((f, b, a, t) in instance(6, 3, 3)) {
        let ps = build(&f, &b, &a, t);
        let verdict = verify_packing(&ps).unwrap();
        let oracle = pairwise_is_packing(&RefField::of(&f), &b, &a, t as usize);
        prop_assert_eq!(verdict == Verdict::VerifiedExhaustive, oracle);
        prop_assert_eq!(verify_packing_by_sort(&ps, DEFAULT_ENUM_CAP).unwrap() == Verdict::VerifiedExhaustive, oracle);
    }

    #[test]
    fn refutation_witness_replays((f, b, a, t) in instance(8, 3, 3)) {
        let ps = build(&f, &b, &a, t);
        if let Verdict::Refuted(w) = verify_packing(&ps).unwrap() {
            prop_assert_ne!(&w.first, &w.second);
            let r = RefField::of(&f);
            let s1 = syndrome(&r, &b, &w.first.to_dense(&f, b.len()).iter().map(|e| e.value()).collect::<Vec<_>>());
            let s2 = syndrome(&r, &b, &w.second.to_dense(&f, b.len()).iter().map(|e| e.value()).collect::<Vec<_>>());
            prop_assert_eq!(s1, s2);
            let dense = |e: &packset::ErrorVector| -> Vec<u64> {
                e.to_dense(&f, b.len()).iter().map(|x| x.value()).collect()
            };
            let all: Vec<_> = enumerate_error_vectors(b.len(), ps.alphabet(), t).collect();
            let syn: Vec<u64> = all.iter().map(|e| syndrome(&r, &b, &dense(e))).collect();
            let i = (0..syn.len()).find(|&i| (0..syn.len()).any(|j| j != i && syn[j] == syn[i])).unwrap();
            let j = (i + 1..syn.len()).find(|&j| syn[j] == syn[i]).unwrap();
            prop_assert_eq!(&w.first, &all[i]);
            prop_assert_eq!(&w.second, &all[j]);
            prop_assert_eq!(verify_packing_by_sort(&ps, DEFAULT_ENUM_CAP).unwrap(), Verdict::Refuted(w.clone()));
            for e in [&w.first, &w.second] {
                prop_assert!(e.weight() <= t as usize);
                prop_assert!(e.entries().iter().all(|&(_, v)| a.contains(&v.value())));
            }
        }
    }

    #[test]
    fn codec_is_linear_and_roundtrips((f, b, a, t) in instance(5, 2, 2), seed in any::<u64>()) {
        let ps = build(&f, &b, &a, t);
        let Verdict::VerifiedExhaustive = verify_packing(&ps).unwrap() else { return Ok(()) };
        let code = RestrictedCode::new(ps.with_status(packset::Status::VerifiedExhaustive)).unwrap();
        let table = build_syndrome_table(&code).unwrap();
        let mut r = packset::rng::stream(seed, 0);
        use rand::Rng;
        let q = f.q();
        let m1: Vec<_> = (0..code.dimension()).map(|_| f.elem(r.gen_range(0..q)).unwrap()).collect();
        let m2: Vec<_> = (0..code.dimension()).map(|_| f.elem(r.gen_range(0..q)).unwrap()).collect();
        let sum: Vec<_> = m1.iter().zip(&m2).map(|(&x, &y)| f.add(x, y)).collect();
        let (c1, c2, cs) = (code.encode(&m1).unwrap(), code.encode(&m2).unwrap(), code.encode(&sum).unwrap());
        let added: Vec<_> = c1.iter().zip(&c2).map(|(&x, &y)| f.add(x, y)).collect();
        prop_assert_eq!(&cs, &added);
        prop_assert_eq!(code.syndrome(&c1).unwrap(), f.zero());
        for e in enumerate_error_vectors(code.len(), code.packing().alphabet(), t) {
            let rx = packset::codec::add_error(&f, &c1, &e);
            match decode(&code, &table, &rx).unwrap() {
                DecodeOutcome::Corrected { message, error } => {
                    prop_assert_eq!(&message, &m1);
                    prop_assert_eq!(&error, &e);
                }
                DecodeOutcome::Uncorrectable { .. } => prop_assert!(false, "in-model error not corrected"),
            }
        }
    }

    #[test]
    fn bounds_sandwich(q in 3u64..2_000_000, a in 1u64..6, t in 1u32..4) {
        let a = a.min(q - 1);
        let hi = max_b_upper(a, t, q).unwrap();
        let lo = min_b_maximal(a, t, q).unwrap();
        prop_assert!(lo <= hi);
        prop_assert!(error_count(hi, a, t) <= q as u128);
        prop_assert!(error_count(hi + 1, a, t) > q as u128 || hi + 1 >= q);
        prop_assert!((hi as f64) < upper_closed(a, t, q));
        if q >= 11 {
            prop_assert!(lower_closed(a, t, q) <= lo as f64 + 1.0);
        }
    }
}
