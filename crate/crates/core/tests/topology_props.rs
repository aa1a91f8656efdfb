use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topocheck_core::{
    betti_number_error, betti_numbers, euler_characteristic, BinaryMask, ConnectivityPair,
    Construction,
};
use topocheck_testkit as oracle;

const BOTH: [ConnectivityPair; 2] = [ConnectivityPair::A, ConnectivityPair::D];

fn random(rng: &mut ChaCha8Rng, three_d: bool) -> BinaryMask {
    let dims = if three_d {
        oracle::random_dims_3d(rng, 6)
    } else {
        oracle::random_dims_2d(rng, 12)
    };
    let density = rng.gen_range(0.2..0.8);
    BinaryMask::new(&dims, oracle::random_mask(rng, &dims, density)).unwrap()
}

#[test]
fn euler_identity_2d() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let m = random(&mut rng, false);
        for conn in BOTH {
            let s = betti_numbers(&m, conn);
            assert_eq!(
                s.betti[0] as i64 - s.betti[1] as i64,
                s.euler,
                "{m:?} {conn:?}"
            );
            // padded-complement b1 against b0 - chi
            assert_eq!(s.betti[1] as i64, s.betti[0] as i64 - s.euler);
        }
    }
}

#[test]
fn euler_identity_3d() {
    let mut rng = ChaCha8Rng::seed_from_u64(3033);
    for _ in 0..1000 {
        let m = random(&mut rng, true);
        for conn in BOTH {
            let s = betti_numbers(&m, conn);
            let alt = s.betti[0] as i64 - s.betti[1] as i64 + s.betti[2] as i64;
            assert_eq!(alt, s.euler);
        }
    }
}

#[test]
fn cell_counts_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..600 {
        let m = random(&mut rng, i % 2 == 1);
        assert_eq!(
            euler_characteristic(&m, Construction::T),
            oracle::euler_t(m.dims(), m.data())
        );
        assert_eq!(
            euler_characteristic(&m, Construction::V),
            oracle::euler_v(m.dims(), m.data())
        );
    }
}

#[test]
fn betti_matches_flood_fill_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..600 {
        let m = random(&mut rng, i % 3 == 0);
        for conn in BOTH {
            let expected = oracle::betti(m.dims(), m.data(), conn == ConnectivityPair::A);
            assert_eq!(betti_numbers(&m, conn).betti, expected);
        }
    }
}

#[test]
fn construction_follows_connectivity() {
    let m = BinaryMask::from_ascii(&["#."]).unwrap();
    assert_eq!(
        betti_numbers(&m, ConnectivityPair::A).construction,
        Construction::T
    );
    assert_eq!(
        betti_numbers(&m, ConnectivityPair::D).construction,
        Construction::V
    );
}

fn mask_2d() -> impl Strategy<Value = BinaryMask> {
    (1usize..10, 1usize..10).prop_flat_map(|(r, c)| {
        proptest::collection::vec(any::<bool>(), r * c)
            .prop_map(move |data| BinaryMask::new(&[r, c], data).unwrap())
    })
}

proptest! {
    #[test]
    fn padding_changes_no_betti_number(m in mask_2d(), width in 1usize..3) {
        for conn in BOTH {
            prop_assert_eq!(betti_numbers(&m, conn).betti, betti_numbers(&m.pad_with_background(width), conn).betti);
        }
    }

    #[test]
    fn betti_error_is_symmetric((p, g) in (1usize..9, 1usize..9).prop_flat_map(|(r, c)| {
        let gen = proptest::collection::vec(any::<bool>(), r * c)
            .prop_map(move |d| BinaryMask::new(&[r, c], d).unwrap());
        (gen.clone(), gen)
    })) {
        for conn in BOTH {
            for dim in 0..2 {
                prop_assert_eq!(
                    betti_number_error(&p, &g, conn, dim).unwrap(),
                    betti_number_error(&g, &p, conn, dim).unwrap()
                );
                prop_assert_eq!(betti_number_error(&p, &p, conn, dim).unwrap(), 0);
            }
        }
    }
}
