use hocolim::abelian::{smith_decompose, AbGroup, AbHom, FinAb, IntMatrix, LimResult};
use hocolim::bar::{bar_homology, induced_homology_map, BarOptions};
use hocolim::gmod::{constant_trivial_tower, make_module, restrict_along, GModule};
use hocolim::groups::{cyclic_p_tower, make_quotient, FiniteGroup, QuotientMap};
use hocolim::profinite::{continuous_homology_range, validate_tower_pair};
use hocolim::{SmallMatrix, ZMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(seed: u64, max_dim: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (r, c) = (rng.gen_range(1..=max_dim), rng.gen_range(1..=max_dim));
    let density: f64 = rng.gen_range(0.1..1.0);
    (0..r).map(|_| (0..c).map(|_| if rng.gen_bool(density) { rng.gen_range(-bound..=bound) } else { 0 }).collect()).collect()
}

/// Rank over the rationals by Bareiss elimination.
fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            let (a, b) = (m[rank][c].clone(), m[i][c].clone());
            for j in 0..cols {
                m[i][j] = (&m[i][j] * &a - &m[rank][j] * &b) / &prev;
            }
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smith_form_up_to_40(seed in any::<u64>()) {
        let rows = random_matrix(seed, 40, 50);
        let m = ZMatrix::from_i64_rows(&rows).unwrap();
        let s = smith_decompose(&m);
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert!(s.d.is_diagonal());
        prop_assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(m.rows()));
        prop_assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(m.cols()));
        let diag = s.diagonal();
        prop_assert!(diag.iter().all(|x| !x.is_negative()));
        prop_assert!(diag.windows(2).all(|w| w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0]))));
        prop_assert_eq!(s.rank, rational_rank(&rows));
        let g = rows.iter().flatten().fold(BigInt::zero(), |g, &x| g.gcd(&BigInt::from(x)));
        prop_assert_eq!(&diag[0], &g);
    }

    #[test]
    fn smith_form_is_scalar_generic(seed in any::<u64>()) {
        let rows = random_matrix(seed, 6, 5);
        let small = smith_decompose(&SmallMatrix::from_i64_rows(&rows).unwrap());
        let big = smith_decompose(&ZMatrix::from_i64_rows(&rows).unwrap());
        let as_big: Vec<BigInt> = small.diagonal().into_iter().map(BigInt::from).collect();
        prop_assert_eq!(as_big, big.diagonal());
    }
}

fn group_pool() -> Vec<FiniteGroup> {
    let c = FiniteGroup::cyclic;
    vec![
        c(6),
        c(8),
        c(12),
        c(16),
        FiniteGroup::dihedral(4),
        FiniteGroup::dihedral(6),
        FiniteGroup::dihedral(8),
        FiniteGroup::quaternion(),
        FiniteGroup::symmetric3(),
        c(2).direct_product(&c(2)).direct_product(&c(2)),
        c(2).direct_product(&c(4)),
        c(4).direct_product(&c(4)),
        c(2).direct_product(&FiniteGroup::dihedral(4)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn quotients_are_coherent(k in 0usize..13, pick in any::<prop::sample::Index>()) {
        let g = &group_pool()[k];
        let normals = g.normal_subgroups();
        let n = pick.get(&normals);
        let (q, map) = make_quotient(g, n).unwrap();
        prop_assert_eq!(q.order() * n.len(), g.order());
        let mut kernel: Vec<usize> = (0..g.order()).filter(|&x| map.apply(x) == 0).collect();
        kernel.sort_unstable();
        prop_assert_eq!(&kernel, n);
        for a in 0..g.order() {
            for b in 0..g.order() {
                prop_assert_eq!(map.apply(g.mul(a, b)), q.mul(map.apply(a), map.apply(b)));
            }
        }
        prop_assert!((0..q.order()).all(|y| (0..g.order()).any(|x| map.apply(x) == y)));
    }

    #[test]
    fn restriction_is_functorial(k in 0usize..13, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = &group_pool()[k];
        let normals = g.normal_subgroups();
        let n1 = normals.choose(&mut rng).unwrap();
        let (q1, f1) = make_quotient(g, n1).unwrap();
        let (q2, f2) = make_quotient(&q1, &q1.normal_subgroups().choose(&mut rng).unwrap().clone()).unwrap();
        let a = AbGroup::cyclic(*[3u64, 4, 5].choose(&mut rng).unwrap());
        let m = if q2.order() % 2 == 0 && a.order_of(0) > 2 {
            let half = q2.subgroups().into_iter().find(|h| 2 * h.len() == q2.order());
            match half {
                Some(h) => {
                    let act = (0..q2.order())
                        .map(|x| AbHom::from_dense(a.clone(), a.clone(), &[vec![if h.contains(&x) { 1 } else { -1 }]]).unwrap())
                        .collect();
                    GModule::from_action(&q2, a.clone(), act).unwrap()
                }
                None => GModule::trivial(&q2, a.clone()).unwrap(),
            }
        } else {
            GModule::trivial(&q2, a.clone()).unwrap()
        };
        let composite = f2.compose(&f1).unwrap();
        let direct = restrict_along(&composite, &m).unwrap();
        let stepwise = restrict_along(&f1, &restrict_along(&f2, &m).unwrap()).unwrap();
        prop_assert_eq!(direct, stepwise);
    }

    #[test]
    fn normalized_and_moore_agree(k in 0usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::cyclic(4), FiniteGroup::symmetric3(),
            FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2)), FiniteGroup::cyclic(5)][k].clone();
        let a = AbGroup::new(vec![*[2u64, 3, 4, 6].choose(&mut rng).unwrap()]);
        let m = if rng.gen_bool(0.5) && g.order() % 2 == 0 {
            let h = g.subgroups().into_iter().find(|h| 2 * h.len() == g.order()).unwrap();
            let act = (0..g.order())
                .map(|x| AbHom::from_dense(a.clone(), a.clone(), &[vec![if h.contains(&x) { 1 } else { -1 }]]).unwrap())
                .collect();
            GModule::from_action(&g, a, act).unwrap()
        } else {
            GModule::trivial(&g, a).unwrap()
        };
        for p in 0..=3 {
            let n = bar_homology(&m, p, BarOptions::default()).unwrap();
            let u = bar_homology(&m, p, BarOptions::moore()).unwrap();
            prop_assert_eq!(n.group(), u.group());
        }
    }
}

fn reduction(from: usize, to: usize) -> QuotientMap {
    QuotientMap::new(FiniteGroup::cyclic(from), FiniteGroup::cyclic(to), (0..from).map(|x| x % to).collect()).unwrap()
}

#[test]
fn induced_maps_compose_along_z8_z4_z2() {
    let (q84, q42) = (reduction(8, 4), reduction(4, 2));
    let q82 = q42.compose(&q84).unwrap();
    let coefficients: Vec<(AbGroup, Vec<Vec<i64>>, Vec<Vec<i64>>)> = vec![
        (AbGroup::cyclic(2), vec![vec![1]], vec![vec![1]]),
        (AbGroup::cyclic(4), vec![vec![1]], vec![vec![-1]]),
    ];
    for (a, trivial_act, sign_act) in coefficients {
        for act in [trivial_act, sign_act] {
            let m8 = make_module(&FiniteGroup::cyclic(8), a.clone(), &[act.clone()]).unwrap();
            let m4 = make_module(&FiniteGroup::cyclic(4), a.clone(), &[act.clone()]).unwrap();
            let m2 = make_module(&FiniteGroup::cyclic(2), a.clone(), &[act]).unwrap();
            let id = AbHom::identity(a.clone());
            for p in 0..=3 {
                let f = induced_homology_map(&q84, &m8, &m4, &id, p).unwrap();
                let g = induced_homology_map(&q42, &m4, &m2, &id, p).unwrap();
                let h = induced_homology_map(&q82, &m8, &m2, &id, p).unwrap();
                assert_eq!(g.compose(&f).unwrap(), h, "degree {p} over {:?}", a.orders());
            }
        }
    }
}

#[test]
fn identity_induces_identity() {
    let m = GModule::trivial(&FiniteGroup::cyclic(4), AbGroup::cyclic(2)).unwrap();
    let q = QuotientMap::identity(m.group());
    for p in 0..=3 {
        let f = induced_homology_map(&q, &m, &m, &AbHom::identity(AbGroup::cyclic(2)), p).unwrap();
        assert_eq!(f, AbHom::identity(f.source().clone()));
    }
}

#[test]
fn z4_to_z2_degree_one_is_an_isomorphism() {
    let m4 = GModule::trivial(&FiniteGroup::cyclic(4), AbGroup::cyclic(2)).unwrap();
    let m2 = GModule::trivial(&FiniteGroup::cyclic(2), AbGroup::cyclic(2)).unwrap();
    let id = AbHom::identity(AbGroup::cyclic(2));
    let f1 = induced_homology_map(&reduction(4, 2), &m4, &m2, &id, 1).unwrap();
    assert!(f1.is_isomorphism());
    let f2 = induced_homology_map(&reduction(4, 2), &m4, &m2, &id, 2).unwrap();
    assert_eq!(f2.source().canonical(), FinAb::cyclic(2));
    assert!(f2.is_zero());
}

#[test]
fn stabilization_persists_with_depth() {
    for (p, coeff, levels) in [(2usize, 2u64, 6), (2, 4, 6), (3, 3, 5)] {
        let deep = cyclic_p_tower(p, levels).unwrap();
        let mt = constant_trivial_tower(&deep, &AbGroup::cyclic(coeff)).unwrap();
        let pair = validate_tower_pair(&deep, &mt).unwrap();
        for d in 2..levels - 1 {
            let shallow = continuous_homology_range(&pair.truncate(d).unwrap(), 0, 2, BarOptions::default()).unwrap();
            let deeper = continuous_homology_range(&pair.truncate((d + 2).min(levels)).unwrap(), 0, 2, BarOptions::default()).unwrap();
            for (s, t) in shallow.iter().zip(&deeper) {
                if let LimResult::Stable { value, index } = &s.value {
                    assert_eq!(&t.value, &LimResult::Stable { value: value.clone(), index: *index }, "Z/{p}^i, depth {d}");
                }
                if let Some(v) = s.value.value() {
                    assert_eq!(t.value.value(), Some(v));
                }
            }
        }
    }
}
