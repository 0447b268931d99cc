use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use walshframe_core::{
    build_sylvester, build_walsh, etf_from_hadamard, normalize_first_row, welch_bound_sq,
    IntMatrix, Rational, RealFrame, ScaledFrame, SignMatrix,
};

fn q(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

/// Gram entries by the column-orthogonality identity: `(n·δ − 1)/(n − 1)`.
fn expected_gram(n: i128, i: usize, j: usize) -> Rational {
    let delta = if i == j { 1 } else { 0 };
    q(n * delta - 1, n - 1)
}

#[test]
fn etf_gram_matches_closed_form() {
    for k in 1..=5u32 {
        let f = etf_from_hadamard(build_walsh(k).unwrap().base()).unwrap();
        let n = 1i128 << k;
        let g = f.gram();
        for i in 0..f.count() {
            for j in 0..f.count() {
                assert_eq!(g.get(i, j), expected_gram(n, i, j));
            }
        }
    }
}

#[test]
fn order_eight_etf_off_diagonals() {
    let f = etf_from_hadamard(build_walsh(3).unwrap().base()).unwrap();
    let g = f.gram();
    for i in 0..8 {
        for j in 0..8 {
            if i != j {
                assert_eq!(g.get(i, j), q(-1, 7));
            }
        }
    }
    assert_eq!(f.coherence().unwrap().max_corr_sq, q(1, 49));
    assert_eq!(welch_bound_sq(8, 7).unwrap(), q(1, 49));
}

#[test]
fn etf_invariants_up_to_order_128() {
    for k in 1..=7u32 {
        let n = 1i128 << k;
        for h in [
            build_walsh(k).unwrap().into_base(),
            build_sylvester(k).unwrap(),
        ] {
            let f = etf_from_hadamard(&normalize_first_row(&h)).unwrap();
            assert_eq!(f.is_tight(), Some(q(n, n - 1)));
            assert_eq!(f.is_equiangular().unwrap(), Some(q(1, (n - 1) * (n - 1))));
            assert_eq!(
                f.coherence().unwrap().max_corr_sq,
                welch_bound_sq(n as usize, n as usize - 1).unwrap()
            );
            let cert = f.grassmannian_certificate().unwrap();
            assert!(
                cert.tight && cert.equiangular && cert.welch_equality && cert.grassmannian_by_etf
            );
        }
    }
}

#[test]
fn etf_from_scrambled_hadamard_of_order_sixteen() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = build_sylvester(4).unwrap();
    let flips: Vec<i64> = (0..16).map(|_| if rng.random() { 1 } else { -1 }).collect();
    let rows: Vec<Vec<i64>> = (0..16)
        .map(|r| (0..16).map(|c| flips[c] * h.get(r, c) as i64).collect())
        .collect();
    let scrambled = SignMatrix::from_rows(&rows)
        .unwrap()
        .into_validated()
        .unwrap();
    let f = etf_from_hadamard(&normalize_first_row(&scrambled)).unwrap();
    assert_eq!(f.is_tight(), Some(q(16, 15)));
    assert_eq!(f.is_equiangular().unwrap(), Some(q(1, 225)));
}

#[test]
fn float_round_trip_on_order_eight_etf() {
    let f = etf_from_hadamard(build_walsh(3).unwrap().base()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let x: Vec<f64> = (0..7).map(|_| rng.random_range(-1.0..1.0)).collect();
        let back = f.reconstruct_tight(&f.analyze(&x).unwrap()).unwrap();
        for (a, b) in back.iter().zip(&x) {
            worst = worst.max((a - b).abs());
        }
    }
    assert!(worst < 1e-12, "max error {worst}");
}

#[test]
fn diagnostic_bounds_agree_with_exact_tightness() {
    let f = etf_from_hadamard(build_walsh(3).unwrap().base()).unwrap();
    let (a, b) = f.frame_bounds();
    assert!((a - 8.0 / 7.0).abs() < 1e-10);
    assert!((b - 8.0 / 7.0).abs() < 1e-10);
}

/// Random ±1 matrices with scale `1/M` are unit-norm; rejects rank-deficient
/// draws.
fn sign_frame() -> impl Strategy<Value = ScaledFrame> {
    (1usize..6, 0usize..6)
        .prop_flat_map(|(m, extra)| {
            let n = (m + extra).max(2);
            (
                Just(m),
                Just(n),
                prop::collection::vec(any::<bool>(), m * n),
            )
        })
        .prop_filter_map("columns must span", |(m, n, bits)| {
            let data = bits.iter().map(|&b| if b { 1 } else { -1 }).collect();
            let raw = IntMatrix::new(m, n, data).ok()?;
            ScaledFrame::from_integer_columns(raw, q(1, m as i128)).ok()
        })
}

fn unit_frame() -> impl Strategy<Value = RealFrame> {
    (1usize..7, 1usize..8).prop_flat_map(|(m, extra)| {
        let n = m + extra;
        prop::collection::vec(prop::collection::vec(-1.0f64..1.0, m), n)
            .prop_filter_map("nonzero vectors", move |vs| {
                RealFrame::normalized(m, vs).ok()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn welch_bound_holds_exactly_on_sign_frames(f in sign_frame()) {
        let welch = welch_bound_sq(f.count(), f.ambient_dim()).unwrap();
        prop_assert!(f.coherence().unwrap().max_corr_sq >= welch);
        let cert = f.grassmannian_certificate().unwrap();
        prop_assert_eq!(cert.grassmannian_by_etf, cert.tight && cert.equiangular);
        prop_assert_eq!(cert.welch_equality, cert.grassmannian_by_etf);
    }

    #[test]
    fn welch_bound_holds_on_real_frames(f in unit_frame()) {
        let welch = welch_bound_sq(f.count(), f.dim()).unwrap();
        let welch = *welch.numer() as f64 / *welch.denom() as f64;
        prop_assert!(f.coherence_sq().unwrap() >= welch - 1e-12);
    }

    #[test]
    fn exact_round_trip_on_tight_frames(
        k in 1u32..5,
        x in prop::collection::vec((-20i128..20, 1i128..9), 15),
    ) {
        let f = etf_from_hadamard(build_walsh(k).unwrap().base()).unwrap();
        let x: Vec<Rational> = x[..f.ambient_dim()].iter().map(|&(n, d)| q(n, d)).collect();
        let back = f.reconstruct_tight_exact(&f.analyze_exact(&x).unwrap()).unwrap();
        prop_assert_eq!(back, x);
    }
}
