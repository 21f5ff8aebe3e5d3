//! Invariant checks: high-volume seeded properties of the exact scalar
//! field, invariance laws of the lattice operations, and the combinatorial
//! slope layer, plus proptest coverage of the algebraic laws.

use proptest::prelude::*;

use latticework::harness::gen::Generator;
use latticework::harness::{FieldChoice, TrialConfig};
use latticework::kmat::KMat;
use latticework::polygon::{
    mazur_member, newton_of_levi, polygon_of_slopes, polygon_of_type, rational_from, SlopeVector,
};
use latticework::{
    dominance_leq, CocharType, Field, LatticeBasis, LaurentScalar, Rat, Valuation,
};

fn cfg() -> TrialConfig {
    TrialConfig {
        seed: 42,
        trials: 64,
        dim_max: 4,
        valuation_window: 3,
        field: FieldChoice::Rationals,
    }
}

#[test]
fn scalar_valuation_laws_on_a_thousand_pairs() {
    let cfg = cfg();
    let mut checked = 0;
    let mut trial = 0;
    while checked < 1200 {
        let mut g = Generator::<Rat>::new((), &cfg, trial);
        trial += 1;
        let x = g.scalar_nonzero();
        let y = g.scalar_nonzero();
        let vx = x.valuation();
        let vy = y.valuation();
        // v(xy) = v(x) + v(y)
        assert_eq!(
            x.mul(&y).valuation(),
            Valuation::Finite(vx.finite().unwrap() + vy.finite().unwrap())
        );
        // ultrametric: v(x+y) >= min, equality when v(x) != v(y)
        let vsum = x.add(&y).valuation();
        assert!(vsum >= vx.min(vy));
        if vx != vy {
            assert_eq!(vsum, vx.min(vy));
        }
        checked += 1;
    }
}

#[test]
fn expand_is_a_ring_homomorphism_to_truncated_series() {
    let cfg = cfg();
    for trial in 0..200 {
        let mut g = Generator::<Rat>::new((), &cfg, trial);
        let x = g.scalar_nonzero();
        let y = g.scalar_nonzero();
        let lo = -6;
        let hi = 6;
        let prod = x.mul(&y);
        let expanded = prod.expand(lo, hi);
        // truncated convolution of the factor expansions
        let deep = -12;
        let xs = x.expand(deep, hi);
        let ys = y.expand(deep, hi);
        for e in lo..=hi {
            let mut acc = Rat::zero(());
            for i in deep..=hi {
                let j = e - i;
                if j < deep || j > hi {
                    continue;
                }
                acc = acc.add(&xs[(i - deep) as usize].mul(&ys[(j - deep) as usize]));
            }
            assert_eq!(acc, expanded[(e - lo) as usize], "coefficient of t^{e}");
        }
        // x * inv(x) expands to 1
        let inv = x.inv().unwrap();
        let one = x.mul(&inv).expand(0, 8);
        assert!(one[0].is_one() && one[1..].iter().all(|c| c.is_zero()));
    }
}

#[test]
fn relative_type_is_unit_invariant_and_additive() {
    let cfg = cfg();
    for trial in 0..60 {
        let mut g = Generator::<Rat>::new((), &cfg, trial);
        let n = g.dim();
        let a = g.lattice(n).unwrap();
        let b = g.lattice(n).unwrap();
        let ty = a.relative_type(&b).unwrap();
        // self-type is zero; swap negates and reverses
        assert_eq!(
            a.relative_type(&a).unwrap(),
            CocharType::zero(n)
        );
        assert_eq!(b.relative_type(&a).unwrap(), ty.neg_reversed());
        // sum of the entries is the valuation of det(A^-1 B)
        let det_a = a.basis_matrix().det();
        let det_b = b.basis_matrix().det();
        let quot = det_b.div(&det_a).unwrap();
        assert_eq!(Valuation::Finite(ty.sum()), quot.valuation());
        // multiplying either basis by units of the valuation ring changes
        // nothing
        let u1 = g.integral_unit(n).unwrap();
        let u2 = g.integral_unit(n).unwrap();
        let a2 = LatticeBasis::new(a.basis_matrix().mul(&u1)).unwrap();
        let b2 = LatticeBasis::new(b.basis_matrix().mul(&u2)).unwrap();
        assert_eq!(a2.relative_type(&b2).unwrap(), ty);
    }
}

#[test]
fn lattice_absorption_and_duality() {
    let cfg = cfg();
    for trial in 0..40 {
        let mut g = Generator::<Rat>::new((), &cfg, trial);
        let n = g.dim();
        let a = g.lattice(n).unwrap();
        let b = g.lattice(n).unwrap();
        let join = a.join(&b).unwrap();
        let meet = a.meet(&b).unwrap();
        // absorption
        assert!(a.join(&meet).unwrap().eq_lattice(&a).unwrap());
        assert!(a.meet(&join).unwrap().eq_lattice(&a).unwrap());
        // containments
        assert!(join.contains_lattice(&a).unwrap());
        assert!(join.contains_lattice(&b).unwrap());
        assert!(a.contains_lattice(&meet).unwrap());
        assert!(b.contains_lattice(&meet).unwrap());
        // dual is an involution exchanging meet and join
        assert!(a.dual().unwrap().dual().unwrap().eq_lattice(&a).unwrap());
        let dual_meet = meet.dual().unwrap();
        let join_duals = a.dual().unwrap().join(&b.dual().unwrap()).unwrap();
        assert!(dual_meet.eq_lattice(&join_duals).unwrap());
    }
}

#[test]
fn newton_data_depends_only_on_the_levi_part() {
    // slope invariants of a block element survive integral-unit moves and
    // agree with those of the block-diagonal part
    let cfg = cfg();
    for trial in 0..40 {
        let mut g = Generator::<Rat>::new((), &cfg, trial);
        let n = g.dim();
        let shape = g.shape(n);
        let element = g.parabolic_element(&shape).unwrap();
        let newton = newton_of_levi(&element, &shape).unwrap();
        // strip the off-diagonal part
        let mut diag = latticework::matrix::Mat::zeros((), n, n);
        let offsets = shape.offsets();
        for (bi, &oi) in offsets.iter().enumerate() {
            let b = shape.blocks[bi];
            diag.set_block(oi, oi, &element.block(oi, oi, b, b));
        }
        assert_eq!(newton_of_levi(&diag, &shape).unwrap(), newton);
        // blockwise integral-unit sandwich: build k1, k2 with unit blocks
        let mut k1 = latticework::matrix::Mat::zeros((), n, n);
        let mut k2 = latticework::matrix::Mat::zeros((), n, n);
        for (bi, &oi) in offsets.iter().enumerate() {
            let b = shape.blocks[bi];
            k1.set_block(oi, oi, &g.integral_unit(b).unwrap());
            k2.set_block(oi, oi, &g.integral_unit(b).unwrap());
        }
        let moved = k1.mul(&element).mul(&k2);
        assert_eq!(newton_of_levi(&moved, &shape).unwrap(), newton);
    }
}

#[test]
fn flag_chain_validation_from_random_subspaces() {
    let cfg = cfg();
    for trial in 0..40 {
        let mut g = Generator::<Rat>::new((), &cfg, trial);
        let n = g.dim();
        let flag = g.flag(n);
        // type has length n and matches the graded dimensions
        let ty = flag.flag_type();
        assert_eq!(ty.len(), n);
        let total: usize = (flag.min_jump()..=flag.max_jump())
            .map(|j| flag.graded_dim(j))
            .sum();
        assert_eq!(total, n);
        assert_eq!(flag.dual().flag_type(), ty.neg_reversed());
    }
}

proptest! {
    #[test]
    fn dominance_is_a_partial_order(
        a in proptest::collection::vec(-4i64..=4, 1..5),
        b in proptest::collection::vec(-4i64..=4, 1..5),
        c in proptest::collection::vec(-4i64..=4, 1..5),
    ) {
        let n = a.len().min(b.len()).min(c.len());
        let mu = CocharType::new(a[..n].to_vec());
        let nu = CocharType::new(b[..n].to_vec());
        let rho = CocharType::new(c[..n].to_vec());
        prop_assert!(dominance_leq(&mu, &mu).unwrap());
        if dominance_leq(&mu, &nu).unwrap() && dominance_leq(&nu, &mu).unwrap() {
            prop_assert_eq!(mu.partial_sums(), nu.partial_sums());
        }
        if dominance_leq(&mu, &nu).unwrap() && dominance_leq(&nu, &rho).unwrap() {
            prop_assert!(dominance_leq(&mu, &rho).unwrap());
        }
    }

    #[test]
    fn scalar_parse_print_round_trip(
        coeffs in proptest::collection::vec((-9i64..=9, 1i64..=4), 1..4),
        exps in proptest::collection::vec(-5i64..=5, 1..4),
    ) {
        let mut x = LaurentScalar::<Rat>::zero(());
        for ((num, den), e) in coeffs.iter().zip(exps.iter()) {
            let c = latticework::Rat::from_ratio(*num, *den);
            x = x.add(&LaurentScalar::monomial(c, *e));
        }
        let text = x.to_string();
        let back = LaurentScalar::<Rat>::parse((), &text).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn slope_tensor_laws(
        a in proptest::collection::vec(-3i64..=3, 1..4),
        b in proptest::collection::vec(-3i64..=3, 1..4),
        c in proptest::collection::vec(-3i64..=3, 1..3),
    ) {
        let to_slopes = |v: &[i64]| {
            SlopeVector::new(v.iter().map(|&x| rational_from(x, 1)).collect()).unwrap()
        };
        let (x, y, z) = (to_slopes(&a), to_slopes(&b), to_slopes(&c));
        prop_assert_eq!(x.tensor(&y).unwrap(), y.tensor(&x).unwrap());
        prop_assert_eq!(
            x.tensor(&y).unwrap().tensor(&z).unwrap(),
            x.tensor(&y.tensor(&z).unwrap()).unwrap()
        );
        let unit = to_slopes(&[0]);
        prop_assert_eq!(x.tensor(&unit).unwrap(), x.clone());
        prop_assert_eq!(x.dual().dual(), x);
    }

    #[test]
    fn mazur_matches_the_polygon_picture(
        mu_raw in proptest::collection::vec(-3i64..=3, 1..4),
        nu_ints in proptest::collection::vec(-3i64..=3, 1..4),
    ) {
        let n = mu_raw.len().min(nu_ints.len());
        let mu = CocharType::new(mu_raw[..n].to_vec());
        let nu = SlopeVector::new(
            nu_ints[..n].iter().map(|&x| rational_from(x, 1)).collect()
        ).unwrap();
        let member = mazur_member(&nu, &mu).unwrap();
        let pn = polygon_of_slopes(&nu);
        let pm = polygon_of_type(&mu);
        let same_end = pn.vertices().last() == pm.vertices().last();
        let above = pn
            .vertices()
            .iter()
            .all(|(x, y)| y <= &pm.height_at(x).unwrap());
        prop_assert_eq!(member, same_end && above);
    }
}

#[test]
fn generated_streams_are_reproducible_across_kinds() {
    use latticework::harness::gen::{gen, GenKind, GenValue};
    let cfg = TrialConfig {
        trials: 8,
        ..cfg()
    };
    for kind in [
        GenKind::Lattice,
        GenKind::Flag,
        GenKind::BorelElement,
        GenKind::ParabolicElement,
        GenKind::StrictExtension,
    ] {
        let once: Vec<_> = gen::<Rat>(kind, &cfg, ()).collect::<Result<_, _>>().unwrap();
        let twice: Vec<_> = gen::<Rat>(kind, &cfg, ()).collect::<Result<_, _>>().unwrap();
        assert_eq!(once.len(), twice.len());
        for (a, b) in once.iter().zip(twice.iter()) {
            match (a, b) {
                (GenValue::Lattice(x), GenValue::Lattice(y)) => {
                    assert!(x.eq_lattice(y).unwrap())
                }
                (GenValue::Flag(x), GenValue::Flag(y)) => assert_eq!(x, y),
                (
                    GenValue::BorelElement { element: x, .. },
                    GenValue::BorelElement { element: y, .. },
                ) => assert_eq!(x, y),
                (
                    GenValue::ParabolicElement { element: x, .. },
                    GenValue::ParabolicElement { element: y, .. },
                ) => assert_eq!(x, y),
                (
                    GenValue::StrictExtension { total: x, .. },
                    GenValue::StrictExtension { total: y, .. },
                ) => {
                    assert!(x.first().eq_lattice(y.first()).unwrap());
                    assert!(x.second().eq_lattice(y.second()).unwrap());
                }
                _ => panic!("mismatched kinds"),
            }
        }
    }
}

#[test]
fn strict_extensions_validate_by_construction() {
    use latticework::harness::gen::{gen, GenKind, GenValue};
    let cfg = TrialConfig {
        trials: 24,
        dim_max: 4,
        ..cfg()
    };
    for item in gen::<Rat>(GenKind::StrictExtension, &cfg, ()) {
        let GenValue::StrictExtension {
            sub,
            total,
            quotient,
            incl,
            proj,
        } = item.unwrap()
        else {
            panic!("wrong kind");
        };
        assert!(latticework::is_strict_bl_map(&incl, &sub, &total).unwrap());
        assert!(latticework::is_strict_bl_map(&proj, &total, &quotient).unwrap());
    }
}

#[test]
fn residue_images_match_brute_force_on_the_wild_example() {
    // oracle: enumerate integral combinations with coefficients of bounded
    // t-degree and row-reduce the resulting coefficient vectors per degree
    let l0 = LatticeBasis::<Rat>::standard((), 2);
    let mut cols = latticework::matrix::Mat::identity((), 2);
    cols.set(0, 1, LaurentScalar::t_power((), -1));
    let wild = LatticeBasis::new(cols).unwrap();
    let meet = l0.meet(&wild).unwrap();
    let img = latticework::image_mod_t(&meet, &l0).unwrap();

    // brute force: vectors a*e1 + b*(t^-1 e1 + e2) with integral monomial
    // coefficients up to degree 2 that also lie in the standard lattice,
    // reduced at t = 0
    let mut residues: Vec<Vec<Rat>> = Vec::new();
    let window: Vec<LaurentScalar<Rat>> = (0..=2)
        .flat_map(|e| {
            [-1i64, 1]
                .into_iter()
                .map(move |c| LaurentScalar::monomial(Rat::from_ratio(c, 1), e))
        })
        .chain([LaurentScalar::zero(())])
        .collect();
    for a in &window {
        for b in &window {
            let x0 = a.add(&b.mul_t_power(-1));
            let x1 = b.clone();
            if x0.is_integral() && x1.is_integral() {
                residues.push(vec![
                    x0.residue_at_zero().unwrap(),
                    x1.residue_at_zero().unwrap(),
                ]);
            }
        }
    }
    let brute = latticework::kmat::Subspace::from_span(
        &KMat::from_cols((), 2, residues).unwrap(),
    );
    assert_eq!(img, brute);
}
