use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topocheck_core::{
    build_contingency, label_components, rand_scores, susceptibility_beta,
    susceptibility_partition, variation_of_information, BinaryMask, ConnectivityPair, LogBase,
    PartitionMetric, Scope,
};
use topocheck_testkit as oracle;

#[test]
fn values_do_not_depend_on_partition_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e);
    for _ in 0..1000 {
        let dims = oracle::random_dims_2d(&mut rng, 12);
        let density = rng.gen_range(0.2..0.8);
        let m = BinaryMask::new(&dims, oracle::random_mask(&mut rng, &dims, density)).unwrap();
        let pd = label_components(&m, ConnectivityPair::D);
        let pa = label_components(&m, ConnectivityPair::A);
        let da = build_contingency(&pd, &pa, Scope::Full).unwrap();
        let ad = build_contingency(&pa, &pd, Scope::Full).unwrap();
        let voi = susceptibility_partition(&m, PartitionMetric::Voi, LogBase::E).unwrap();
        assert!((voi - variation_of_information(&ad, LogBase::E)).abs() <= 1e-12);
        assert!(
            (variation_of_information(&da, LogBase::E) - variation_of_information(&ad, LogBase::E))
                .abs()
                <= 1e-12
        );
        if m.len() >= 2 {
            let are = susceptibility_partition(&m, PartitionMetric::Are, LogBase::E).unwrap();
            assert!((are - rand_scores(&ad).unwrap().are).abs() <= 1e-12);
            assert!(are >= 0.0);
        }
        for dim in 0..2 {
            let fwd = susceptibility_beta(&m, dim).unwrap();
            let bd = oracle::betti(&dims, m.data(), false)[dim];
            let ba = oracle::betti(&dims, m.data(), true)[dim];
            assert_eq!(fwd, ba.abs_diff(bd));
        }
    }
}

#[test]
fn zero_on_insensitive_masks() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5f);
    let mut checked = 0;
    while checked < 1000 {
        let dims = oracle::random_dims_2d(&mut rng, 12);
        let density = rng.gen_range(0.1..0.6);
        let mut data = oracle::random_mask(&mut rng, &dims, density);
        oracle::remove_diagonal_contacts(&dims, &mut data);
        assert!(!oracle::has_diagonal_contact(&dims, &data));
        let m = BinaryMask::new(&dims, data).unwrap();
        for dim in 0..2 {
            assert_eq!(susceptibility_beta(&m, dim).unwrap(), 0);
        }
        assert_eq!(
            susceptibility_partition(&m, PartitionMetric::Voi, LogBase::E).unwrap(),
            0.0
        );
        if m.len() >= 2 {
            assert_eq!(
                susceptibility_partition(&m, PartitionMetric::Are, LogBase::E).unwrap(),
                0.0
            );
        }
        checked += 1;
    }
}
