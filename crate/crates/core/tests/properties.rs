use proptest::prelude::*;

use trimmed_mpe::algo::{naive_trimmed_eval, trimmed_eval, trimmed_interp, EvalTable, Grid};
use trimmed_mpe::combinat::{ebc_cum, rank, unrank, EbcTable};
use trimmed_mpe::field::PrimeModulus;
use trimmed_mpe::io::{EvalTableDoc, SparsePolyDoc};
use trimmed_mpe::poly::TrimmedPoly;

fn instance() -> impl Strategy<Value = (u64, usize, usize, i64, u64)> {
    (
        prop_oneof![Just(5u64), Just(7), Just(65537), Just(2_147_483_647)],
        0..=4usize,
        1..=3usize,
        any::<u64>(),
    )
        .prop_flat_map(|(p, n, d, seed)| {
            (
                Just(p),
                Just(n),
                Just(d),
                -1..=(n * d) as i64 + 1,
                Just(seed),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn eval_matches_oracle_and_interp_inverts((p, n, d, total, seed) in instance()) {
        let f = PrimeModulus::new(p).unwrap();
        let poly = TrimmedPoly::random(n, d, total, f, seed).unwrap();
        let grid = Grid::random(n, d, f, seed.rotate_left(17)).unwrap();
        let table = trimmed_eval(&poly, &grid).unwrap();
        prop_assert_eq!(&table, &naive_trimmed_eval(&poly, &grid).unwrap());
        prop_assert_eq!(trimmed_interp(&table, &grid).unwrap(), poly);
    }

    #[test]
    fn interp_then_eval_is_identity((p, n, d, total, seed) in instance()) {
        let f = PrimeModulus::new(p).unwrap();
        let values = TrimmedPoly::random(n, d, total, f, seed).unwrap().into_coeffs();
        let table = EvalTable::new(n, d, total, f, values).unwrap();
        let grid = Grid::random(n, d, f, !seed).unwrap();
        let back = trimmed_eval(&trimmed_interp(&table, &grid).unwrap(), &grid).unwrap();
        prop_assert_eq!(back, table);
    }

    #[test]
    fn split_then_join_is_identity((p, n, d, total, seed) in instance()) {
        prop_assume!(n >= 1);
        let f = PrimeModulus::new(p).unwrap();
        let poly = TrimmedPoly::random(n, d, total, f, seed).unwrap();
        let parts = poly.split_top().unwrap();
        prop_assert_eq!(parts.len(), d + 1);
        for (i, part) in parts.iter().enumerate() {
            prop_assert_eq!(part.n(), n - 1);
            prop_assert!(part.total() <= poly.total() - i as i64 || part.is_empty());
        }
        prop_assert_eq!(TrimmedPoly::join_top(&parts, poly.total()).unwrap(), poly);
    }

    #[test]
    fn evaluation_is_linear((p, n, d, total, seed) in instance(), c in any::<u64>()) {
        let f = PrimeModulus::new(p).unwrap();
        let a = TrimmedPoly::random(n, d, total, f, seed).unwrap();
        let b = TrimmedPoly::random(n, d, total, f, seed ^ 1).unwrap();
        let c = f.elem(c);
        let combo: Vec<_> = a.coeffs().iter().zip(b.coeffs()).map(|(&x, &y)| x + c * y).collect();
        let combo = TrimmedPoly::new(n, d, total, f, combo).unwrap();
        let grid = Grid::random(n, d, f, seed ^ 2).unwrap();
        let (ea, eb, ec) = (
            trimmed_eval(&a, &grid).unwrap(),
            trimmed_eval(&b, &grid).unwrap(),
            trimmed_eval(&combo, &grid).unwrap(),
        );
        for ((&x, &y), &z) in ea.values().iter().zip(eb.values()).zip(ec.values()) {
            prop_assert_eq!(x + c * y, z);
        }
    }

    #[test]
    fn rank_unrank_roundtrip(n in 0..=6usize, d in 1..=4usize, frac in 0.0..=1.0f64, pick in any::<prop::sample::Index>()) {
        let total = ((n * d) as f64 * frac).round() as i64;
        let table = EbcTable::for_instance(n, d, total).unwrap();
        let size = ebc_cum(n, total, d).unwrap() as usize;
        let r = pick.index(size);
        let l = unrank(&table, r, n, total).unwrap();
        prop_assert!(l.total() as i64 <= total);
        prop_assert!(l.exponents().iter().all(|&e| e as usize <= d));
        prop_assert_eq!(rank(&table, &l, n, total).unwrap(), r);
    }

    #[test]
    fn json_documents_roundtrip((p, n, d, total, seed) in instance()) {
        let f = PrimeModulus::new(p).unwrap();
        let poly = TrimmedPoly::random(n, d, total, f, seed).unwrap();
        let text = serde_json::to_string(&SparsePolyDoc::from_sparse(&poly.to_sparse())).unwrap();
        let doc: SparsePolyDoc = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(doc.to_poly().unwrap(), poly.clone());

        let table = EvalTable::new(n, d, total, f, poly.into_coeffs()).unwrap();
        let text = serde_json::to_string(&EvalTableDoc::from_table(&table)).unwrap();
        let doc: EvalTableDoc = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(doc.to_table().unwrap(), table);
    }
}
