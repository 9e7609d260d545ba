use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

use odometer_homology::abelian::{cokernel, iso_equal, smith_normal_form, IntMatrix};
use odometer_homology::fullgroup::{ah_certificate, AhLevel, FullGroupElement, FullGroupLevel};
use odometer_homology::homology::{transfer_between, z2_homology, InvolutionModule};
use odometer_homology::odometer::{
    coset_action, fixed_points_extendable, translation_orbit_size, GroupElement, GroupKind, Horizon, OdometerSpec,
};

fn kind_strategy() -> impl Strategy<Value = GroupKind> {
    prop_oneof![Just(GroupKind::Integers), Just(GroupKind::Dihedral), Just(GroupKind::DirectProduct)]
}

fn element(kind: GroupKind, t: i64, s: bool) -> GroupElement {
    GroupElement::from_ints(kind, t, s && kind.has_flip())
}

fn matrix_strategy() -> impl Strategy<Value = IntMatrix> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec(-20i64..=20, r * c).prop_map(move |v| IntMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()))
    })
}

/// A unimodular matrix as a product of elementary row operations.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for &(i, j, k) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let row_j: Vec<BigInt> = m.row(j).to_vec();
        for (c, x) in row_j.iter().enumerate() {
            m[(i, c)] += x * k;
        }
    }
    m
}

/// Arrows of a random element of the level's full group: `perm` is any
/// permutation and each arrow moves `x` to `perm[x]`.
fn random_full_element(level: &FullGroupLevel, perm: &[usize], flips: &[bool], shifts: &[i64]) -> FullGroupElement {
    let kind = level.kind();
    let n = level.modulus() as i64;
    let arrows: Vec<GroupElement> = (0..level.modulus())
        .map(|x| {
            let s = flips[x] && kind.has_flip();
            let image = match kind {
                GroupKind::Dihedral if s => -(x as i64),
                _ => x as i64,
            };
            let t = perm[x] as i64 - image + n * shifts[x];
            GroupElement::from_ints(kind, t, s)
        })
        .collect();
    level.from_arrows(&arrows).expect("arrows form a bisection")
}

/// Sum of two abelian coordinate vectors, reduced where the coordinate is 2-torsion.
fn add_coordinates(kind: GroupKind, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let two = BigInt::from(2);
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(i, (x, y))| {
            let sum = x + y;
            let torsion = i > 0 || kind == GroupKind::Dihedral;
            if torsion {
                sum.mod_floor(&two)
            } else {
                sum
            }
        })
        .collect()
}

fn full_group_case() -> impl Strategy<Value = (GroupKind, u64, Vec<usize>, Vec<usize>, Vec<bool>, Vec<i64>)> {
    (kind_strategy(), 3u64..=7).prop_flat_map(|(kind, n)| {
        let m = n as usize;
        (
            Just(kind),
            Just(n),
            Just((0..m).collect::<Vec<_>>()).prop_shuffle(),
            Just((0..m).collect::<Vec<_>>()).prop_shuffle(),
            prop::collection::vec(any::<bool>(), 2 * m),
            prop::collection::vec(-3i64..=3, 2 * m),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cokernel_is_invariant_under_unimodular_change(
        a in matrix_strategy(),
        row_ops in prop::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..8),
        col_ops in prop::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..8),
    ) {
        let u = unimodular(a.rows(), &row_ops);
        let v = unimodular(a.cols(), &col_ops).transpose();
        let b = u.mul(&a).mul(&v);
        prop_assert!(iso_equal(&cokernel(&a), &cokernel(&b)));
        let d = smith_normal_form(&a);
        prop_assert_eq!(d.nonzero_diagonal(), smith_normal_form(&b).nonzero_diagonal());
        prop_assert!(d.is_valid());
    }

    #[test]
    fn coset_action_is_an_action(
        kind in kind_strategy(),
        (t1, s1, t2, s2) in (-50i64..=50, any::<bool>(), -50i64..=50, any::<bool>()),
        level in 1usize..=4,
        x in 0u64..1000,
    ) {
        let spec = OdometerSpec::geometric(kind, 2, 3, 4).unwrap();
        let (g, h) = (element(kind, t1, s1), element(kind, t2, s2));
        let n = spec.modulus(level).unwrap();
        let x = BigInt::from(x) % &n;
        let gh = coset_action(&spec, level, &(&g * &h), &x).unwrap();
        let g_of_h = coset_action(&spec, level, &g, &coset_action(&spec, level, &h, &x).unwrap()).unwrap();
        prop_assert_eq!(gh, g_of_h);
        let e = coset_action(&spec, level, &GroupElement::identity(kind), &x).unwrap();
        prop_assert_eq!(e, x);
    }

    #[test]
    fn translations_are_minimal(kind in kind_strategy(), start in 1u64..=6, ratio in 2u64..=5, level in 1usize..=3) {
        let spec = OdometerSpec::geometric(kind, start, ratio, 3).unwrap();
        prop_assert_eq!(translation_orbit_size(&spec, level).unwrap(), spec.modulus_usize(level).unwrap());
    }

    #[test]
    fn extendable_counts_are_monotone(start in 1u64..=6, ratio in 2u64..=4, t in 0i64..=1, d in 1usize..=2) {
        let spec = OdometerSpec::geometric(GroupKind::Dihedral, start, ratio, 6).unwrap();
        let g = GroupElement::from_ints(GroupKind::Dihedral, t, true);
        let counts: Vec<_> = (d..=d + 3)
            .map(|big| fixed_points_extendable(&spec, &g, d, Horizon::Level(big)).unwrap())
            .collect();
        for w in counts.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
        for c in &counts[1..] {
            prop_assert_eq!(c, &counts[1]);
        }
    }

    #[test]
    fn abelianization_is_a_homomorphism((kind, n, p, q, flips, shifts) in full_group_case()) {
        let spec = OdometerSpec::geometric(kind, n, 2, 1).unwrap();
        let level = FullGroupLevel::new(&spec, 1).unwrap();
        let m = n as usize;
        let u = random_full_element(&level, &p, &flips[..m], &shifts[..m]);
        let v = random_full_element(&level, &q, &flips[m..], &shifts[m..]);
        let uv = u.multiply(&v).unwrap();
        prop_assert!(uv.is_consistent());
        prop_assert_eq!(
            uv.abelian_coordinates(),
            add_coordinates(kind, &u.abelian_coordinates(), &v.abelian_coordinates())
        );
        // the index map is the first block of the same coordinates
        prop_assert_eq!(uv.index_map(), add_coordinates(kind, &u.index_map(), &v.index_map()));
        let c = u.commutator(&v).unwrap();
        prop_assert!(c.abelian_coordinates().iter().all(|x| x == &BigInt::from(0)));
        prop_assert!(u.multiply(&u.inverse()).unwrap().is_identity());
    }

    #[test]
    fn transfer_degree_zero_is_the_index(kind in kind_strategy(), start in 1u64..=4, ratio in 2u64..=4, level in 1usize..=2) {
        let spec = OdometerSpec::geometric(kind, start, ratio, 3).unwrap();
        let m = transfer_between(&spec, level, level + 1, 0).unwrap();
        prop_assert_eq!(m.matrix()[(0, 0)].clone(), BigInt::from(ratio));
    }

    #[test]
    fn reflections_have_two_periodic_homology(n in 1usize..=40, t in 0usize..40) {
        let m = InvolutionModule::reflection(n, t);
        prop_assert_eq!(z2_homology(&m, 1), z2_homology(&m, 3));
        prop_assert_eq!(z2_homology(&m, 2), z2_homology(&m, 4));
    }
}

#[test]
fn exact_across_the_chain_matrix() {
    for kind in [GroupKind::Dihedral, GroupKind::Integers, GroupKind::DirectProduct] {
        for (start, ratio) in [(3, 2), (2, 3), (5, 2), (3, 3)] {
            let spec = OdometerSpec::geometric(kind, start, ratio, 3).unwrap();
            for level in 1..=3 {
                if !(3..=30).contains(&spec.modulus_usize(level).unwrap()) {
                    continue;
                }
                let c = ah_certificate(&spec, AhLevel::Level(level)).unwrap();
                assert!(c.exact, "{} {}*{}^i level {}", kind.name(), start, ratio, level);
            }
        }
    }
}
