//! Property suites for the exact layers: isometry invariance of vector
//! invariants, splitting post-conditions on random instances, and the
//! algebraic identities of the truncated Stiefel–Whitney ring.

use proptest::prelude::*;

use exocert_core::charclass::{total_sw, SignPattern};
use exocert_core::lattice::{
    eichler_transvection, split_off_hyperbolic, vector_invariants, LatticeForm,
};

fn small_form() -> impl Strategy<Value = LatticeForm> {
    (1usize..=3, 0usize..=1, prop_oneof![Just(-1i64), Just(1i64)])
        .prop_map(|(p, q, s)| LatticeForm::new(p, q, s).expect("valid form"))
}

fn vector_for(form: &LatticeForm) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, form.rank())
}

/// A transvection pair (u, w): u is an isotropic basis vector of a
/// hyperbolic block, w an arbitrary vector projected into u-perp using the
/// dual basis vector of the same block.
fn transvection_for(form: &LatticeForm) -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
    let p = form.num_hyperbolic();
    let rank = form.rank();
    let form = form.clone();
    (0usize..2 * p, prop::collection::vec(-3i64..=3, rank)).prop_map(move |(u_idx, w0)| {
        let u = form.basis_vector(u_idx);
        let dual_idx = u_idx ^ 1; // partner within the hyperbolic block
        let dual = form.basis_vector(dual_idx);
        let w0u = form.inner(&w0, &u).expect("inner");
        let w: Vec<i64> = w0.iter().zip(dual.iter()).map(|(&x, &d)| x - w0u * d).collect();
        (u, w)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn invariants_are_isometry_invariant(
        (form, v, moves) in small_form().prop_flat_map(|f| {
            let v = vector_for(&f);
            let moves = prop::collection::vec(transvection_for(&f), 1..5);
            (Just(f), v, moves)
        })
    ) {
        let before = vector_invariants(&form, &v).unwrap();
        let mut image = v.clone();
        for (u, w) in moves {
            let t = eichler_transvection(&form, &u, &w).unwrap();
            image = t.apply(&image).unwrap();
        }
        let after = vector_invariants(&form, &image).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn transvections_are_isometries(
        (form, u, w) in small_form().prop_flat_map(|f| {
            let t = transvection_for(&f);
            (Just(f), t).prop_map(|(f, (u, w))| (f, u, w))
        })
    ) {
        let t = eichler_transvection(&form, &u, &w).unwrap();
        prop_assert!(form.is_isometry(t.matrix()).unwrap());
        // E_{u,w} fixes u.
        prop_assert_eq!(t.apply(&u).unwrap(), u);
    }

    #[test]
    fn split_postcondition_holds(
        (form, c) in (2usize..=4, 0usize..=2, prop_oneof![Just(-1i64), Just(1i64)])
            .prop_map(|(p, q, s)| LatticeForm::new(p, q, s).expect("valid form"))
            .prop_flat_map(|f| {
                let c = vector_for(&f);
                (Just(f), c)
            })
    ) {
        let phi = split_off_hyperbolic(&form, &c, 0).unwrap();
        prop_assert!(form.is_isometry(phi.matrix()).unwrap());
        let image = phi.apply(&c).unwrap();
        prop_assert!(image[2..].iter().all(|&x| x == 0), "support must lie in the first block");
        let d = c.iter().fold(0i64, |g, &x| exocert_core::lattice::gcd(g, x));
        prop_assert_eq!(image[1], d);
        if d != 0 {
            let norm = form.inner(&c, &c).unwrap();
            prop_assert_eq!(image[0], d * (norm / (2 * d * d)));
        }
    }

    #[test]
    fn total_sw_is_permutation_invariant(
        lines in prop::collection::vec((prop_oneof![Just(-1i64), Just(1i64)], prop_oneof![Just(-1i64), Just(1i64)]), 1..7),
        rotation in 0usize..6,
        trivial in 0usize..4,
    ) {
        let p = SignPattern::new(lines.clone(), trivial).unwrap();
        let mut rotated = lines.clone();
        rotated.rotate_left(rotation % lines.len());
        let q = SignPattern::new(rotated, trivial).unwrap();
        prop_assert_eq!(total_sw(&p), total_sw(&q));
    }

    #[test]
    fn trivial_lines_do_not_change_sw(
        lines in prop::collection::vec((prop_oneof![Just(-1i64), Just(1i64)], prop_oneof![Just(-1i64), Just(1i64)]), 1..7),
        trivial in 0usize..4,
        extra_trivial in 1usize..4,
    ) {
        let base = total_sw(&SignPattern::new(lines.clone(), trivial).unwrap());
        let mut padded = lines.clone();
        padded.resize(lines.len() + extra_trivial, (1, 1));
        let with_lines = total_sw(&SignPattern::new(padded, trivial).unwrap());
        let with_rank = total_sw(&SignPattern::new(lines, trivial + extra_trivial).unwrap());
        prop_assert_eq!(base, with_lines);
        prop_assert_eq!(base, with_rank);
    }

    #[test]
    fn single_line_has_no_w2(
        e1 in prop_oneof![Just(-1i64), Just(1i64)],
        e2 in prop_oneof![Just(-1i64), Just(1i64)],
    ) {
        let p = SignPattern::new(vec![(e1, e2)], 0).unwrap();
        prop_assert_eq!(total_sw(&p).w2, 0);
    }

    #[test]
    fn w2_is_symmetric_under_duality(
        lines in prop::collection::vec((prop_oneof![Just(-1i64), Just(1i64)], prop_oneof![Just(-1i64), Just(1i64)]), 1..7),
    ) {
        let p = SignPattern::new(lines.clone(), 0).unwrap();
        let swapped: Vec<(i64, i64)> = lines.iter().map(|&(a, b)| (b, a)).collect();
        let q = SignPattern::new(swapped, 0).unwrap();
        prop_assert_eq!(total_sw(&p).w2, total_sw(&q).w2);
    }

    #[test]
    fn split_never_returns_wrong_answers_under_entry_growth(
        seed in 0u64..200,
    ) {
        // Large coordinates can overflow the accumulated isometry entries;
        // the contract is a clean Overflow error, never a bad matrix.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let p = rng.gen_range(2..=6usize);
        let q = rng.gen_range(0..=3usize);
        let sign = if rng.gen_bool(0.5) { -1 } else { 1 };
        let form = LatticeForm::new(p, q, sign).unwrap();
        let c: Vec<i64> = (0..form.rank()).map(|_| rng.gen_range(-500..=500)).collect();
        match split_off_hyperbolic(&form, &c, 0) {
            Ok(phi) => {
                prop_assert!(form.is_isometry(phi.matrix()).unwrap());
                let image = phi.apply(&c).unwrap();
                prop_assert!(image[2..].iter().all(|&x| x == 0));
            }
            Err(exocert_core::Error::Overflow(_)) => {}
            Err(e) => return Err(TestCaseError::fail(format!("unexpected error: {e}"))),
        }
    }

    #[test]
    fn w2_matches_closed_form(
        lines in prop::collection::vec((prop_oneof![Just(-1i64), Just(1i64)], prop_oneof![Just(-1i64), Just(1i64)]), 1..7),
    ) {
        // Independent oracle: the x1x2 coefficient of the product is
        // sum over unordered pairs of a_i b_j + a_j b_i mod 2.
        let bits: Vec<(u8, u8)> = lines
            .iter()
            .map(|&(e1, e2)| (((1 - e1) / 2) as u8, ((1 - e2) / 2) as u8))
            .collect();
        let mut w2 = 0u8;
        for i in 0..bits.len() {
            for j in i + 1..bits.len() {
                w2 = (w2 + bits[i].0 * bits[j].1 + bits[j].0 * bits[i].1) % 2;
            }
        }
        let w1a: u8 = bits.iter().map(|b| b.0).sum::<u8>() % 2;
        let w1b: u8 = bits.iter().map(|b| b.1).sum::<u8>() % 2;
        let p = SignPattern::new(lines, 0).unwrap();
        let sw = total_sw(&p);
        prop_assert_eq!(sw.w2, w2);
        prop_assert_eq!(sw.w1, (w1a, w1b));
    }
}
