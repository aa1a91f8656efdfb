use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topocheck_core::{
    build_contingency, label_components, rand_scores, variation_of_information, BinaryMask,
    ConnectivityPair, ContingencyTable, LogBase, Scope,
};
use topocheck_testkit as oracle;

fn random_labels(rng: &mut ChaCha8Rng, n: usize) -> Vec<u32> {
    let k = rng.gen_range(1..=n.min(6));
    (0..n).map(|_| rng.gen_range(0..k as u32)).collect()
}

fn voi(x: &[u32], y: &[u32]) -> f64 {
    variation_of_information(&ContingencyTable::from_labels(x, y).unwrap(), LogBase::E)
}

fn widen(x: &[u32]) -> Vec<usize> {
    x.iter().map(|&v| v as usize).collect()
}

#[test]
fn voi_axioms_and_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x701);
    for _ in 0..1000 {
        let n = rng.gen_range(2..40);
        let x = random_labels(&mut rng, n);
        let y = random_labels(&mut rng, n);
        let z = random_labels(&mut rng, n);
        let xy = voi(&x, &y);
        assert!((xy - voi(&y, &x)).abs() <= 1e-12);
        assert!((xy - oracle::voi(&widen(&x), &widen(&y))).abs() <= 1e-12);
        assert!(xy <= voi(&x, &z) + voi(&z, &y) + 1e-12);
        assert_eq!(voi(&x, &x), 0.0);
        let same = oracle::same_partition(&widen(&x), &widen(&y));
        assert_eq!(xy.abs() <= 1e-12, same);
    }
}

#[test]
fn relabeling_changes_nothing() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x702);
    for _ in 0..500 {
        let n = rng.gen_range(2..40);
        let x = random_labels(&mut rng, n);
        let y = random_labels(&mut rng, n);
        let mut perm: Vec<u32> = (0..6).collect();
        perm.shuffle(&mut rng);
        let x2: Vec<u32> = x.iter().map(|&v| perm[v as usize] + 100).collect();
        let t1 = ContingencyTable::from_labels(&x, &y).unwrap();
        let t2 = ContingencyTable::from_labels(&x2, &y).unwrap();
        assert!(
            (variation_of_information(&t1, LogBase::E) - variation_of_information(&t2, LogBase::E))
                .abs()
                <= 1e-12
        );
        let (r1, r2) = (rand_scores(&t1).unwrap(), rand_scores(&t2).unwrap());
        assert!((r1.ri - r2.ri).abs() <= 1e-12);
        assert!((r1.ari - r2.ari).abs() <= 1e-12);
        assert!((r1.are - r2.are).abs() <= 1e-12);
    }
}

#[test]
fn rand_scores_match_pair_enumeration_and_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x703);
    for _ in 0..1000 {
        let n = rng.gen_range(2..40);
        let x = random_labels(&mut rng, n);
        let y = random_labels(&mut rng, n);
        let r = rand_scores(&ContingencyTable::from_labels(&x, &y).unwrap()).unwrap();
        let (ri, ari) = oracle::rand_by_pairs(&widen(&x), &widen(&y));
        assert!((r.ri - ri).abs() <= 1e-12);
        assert!((r.ari - ari).abs() <= 1e-12);
        assert!((0.0..=1.0).contains(&r.ri));
        assert!(r.ari <= 1.0 + 1e-12);
        assert!((0.0..=1.0).contains(&r.are));
        let same = oracle::same_partition(&widen(&x), &widen(&y));
        assert_eq!((r.ari - 1.0).abs() <= 1e-12, same);
        assert_eq!(r.are.abs() <= 1e-12, same);
    }
}

#[test]
fn base_two_rescales() {
    let t = ContingencyTable::from_labels(&[0, 1, 1, 2, 2, 2], &[0, 0, 1, 1, 2, 2]).unwrap();
    let e = variation_of_information(&t, LogBase::E);
    let two = variation_of_information(&t, LogBase::Two);
    assert!((two - e / std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn mask_partitions_agree_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x704);
    for _ in 0..200 {
        let dims = oracle::random_dims_2d(&mut rng, 12);
        let m = BinaryMask::new(&dims, oracle::random_mask(&mut rng, &dims, 0.5)).unwrap();
        let pd = label_components(&m, ConnectivityPair::D);
        let pa = label_components(&m, ConnectivityPair::A);
        let t = build_contingency(&pd, &pa, Scope::Full).unwrap();
        let expected = oracle::voi(
            &oracle::partition(&dims, m.data(), false),
            &oracle::partition(&dims, m.data(), true),
        );
        assert!((variation_of_information(&t, LogBase::E) - expected).abs() <= 1e-12);
    }
}
