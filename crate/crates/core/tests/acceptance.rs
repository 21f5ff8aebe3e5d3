//! Acceptance gate: each test pins one criterion at its stated tolerance
//! and prints a pass line. A global lock keeps the wall-clock assertions
//! honest under the parallel test runner.

use std::sync::{Mutex, PoisonError};
use std::time::{Duration, Instant};

use latticework::bilattice::GroupShape;
use latticework::harness::gen::Generator;
use latticework::harness::{
    run_all, run_suite, FieldChoice, TrialConfig, BROKEN_FIXTURE_SUITE,
};
use latticework::json as wire;
use latticework::matrix::Mat;
use latticework::polygon::{
    basic_element, is_basic_for_shape, is_compact_mod_center, mazur_member, rational_from,
    tate_anchor, BasicScope, SlopeVector,
};
use latticework::{
    borel_unipotent_report, dominance_leq, filtration, is_good, BilatticedSpace, CocharType, Fp,
    LatticeBasis, LaurentScalar, Prime, Rat,
};

static GATE: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(PoisonError::into_inner)
}

fn assert_within(elapsed: Duration, budget: Duration, label: &str) {
    assert!(
        elapsed <= budget,
        "{label} took {elapsed:?}, budget {budget:?}"
    );
}

fn ext_lattice() -> LatticeBasis<Rat> {
    let mut cols = Mat::identity((), 2);
    cols.set(0, 1, LaurentScalar::t_power((), -1));
    LatticeBasis::new(cols).unwrap()
}

#[test]
fn criterion_1_wild_pair_exactness() {
    let _guard = serial();
    // warm once so the measured run reflects arithmetic, not lazy init
    let _ = ext_lattice().relative_type(&LatticeBasis::standard((), 2));
    let start = Instant::now();
    let l0 = LatticeBasis::<Rat>::standard((), 2);
    let pair = BilatticedSpace::new(ext_lattice(), l0).unwrap();
    let ty = pair.bl_type().unwrap();
    assert_eq!(ty.entries(), &[1, -1]);
    let flag = pair.bb_side(2).unwrap();
    assert_eq!(flag.graded_dim(1), 1);
    assert_eq!(flag.graded_dim(0), 0);
    assert_eq!(flag.graded_dim(-1), 1);
    let elapsed = start.elapsed();
    assert_within(elapsed, Duration::from_millis(1), "criterion 1");
    println!("ACCEPTANCE 1 (wild pair exactness): PASS ({elapsed:?})");
}

#[test]
fn criterion_2_two_algorithm_cartan_agreement() {
    let _guard = serial();
    let start = Instant::now();
    for field in [FieldChoice::Rationals, FieldChoice::Prime(5)] {
        let cfg = TrialConfig {
            seed: 0,
            trials: 500,
            dim_max: 5,
            valuation_window: 3,
            field,
        };
        let report = run_suite("cartan_oracle", &cfg).unwrap();
        assert_eq!(report.trials_run, 500);
        assert!(
            report.pass(),
            "disagreements over {}: {:?}",
            field.label(),
            report.failures[0]
        );
    }
    let elapsed = start.elapsed();
    assert_within(elapsed, Duration::from_secs(30), "criterion 2");
    println!("ACCEPTANCE 2 (two-algorithm Cartan, 1000 draws): PASS ({elapsed:?})");
}

#[test]
fn criterion_3_bb_rees_round_trips() {
    let _guard = serial();
    let start = Instant::now();
    let cfg = TrialConfig {
        seed: 0,
        trials: 500,
        dim_max: 4,
        valuation_window: 3,
        field: FieldChoice::Rationals,
    };
    let forward = run_suite("bb_rees_roundtrip", &cfg).unwrap();
    assert!(forward.pass(), "{:?}", forward.failures[0]);
    assert_eq!(forward.trials_run, 500);
    let backward = run_suite("minuscule_bijection", &cfg).unwrap();
    assert!(backward.pass(), "{:?}", backward.failures[0]);

    // the recorded counterexample off the minuscule locus
    let l0 = LatticeBasis::<Rat>::standard((), 2);
    let wild = ext_lattice();
    let back = filtration::rees_lattice(&filtration::bb_filtration(&wild, &l0).unwrap());
    assert!(!back.eq_lattice(&wild).unwrap());
    let elapsed = start.elapsed();
    assert_within(elapsed, Duration::from_secs(60), "criterion 3");
    println!("ACCEPTANCE 3 (round trips, 500 + 500 + counterexample): PASS ({elapsed:?})");
}

#[test]
fn criterion_4_type_inversion() {
    let _guard = serial();
    let cfg = TrialConfig {
        seed: 0,
        trials: 500,
        dim_max: 4,
        valuation_window: 3,
        field: FieldChoice::Rationals,
    };
    let report = run_suite("type_inversion", &cfg).unwrap();
    assert_eq!(report.trials_run, 500);
    assert!(report.pass(), "{:?}", report.failures[0]);
    println!("ACCEPTANCE 4 (type inversion, 500 spaces): PASS");
}

#[test]
fn criterion_5_extension_dominance() {
    let _guard = serial();
    let start = Instant::now();
    let cfg = TrialConfig {
        seed: 0,
        trials: 1000,
        dim_max: 4,
        valuation_window: 3,
        field: FieldChoice::Rationals,
    };
    let report = run_suite("extension_dominance", &cfg).unwrap();
    assert_eq!(report.trials_run, 1000);
    assert!(report.pass(), "{:?}", report.failures[0]);
    // the exterior-power ord chain on a reduced count, it repeats the
    // dominance construction with the direct-sum comparison
    let chain_cfg = TrialConfig {
        trials: 200,
        ..cfg
    };
    let chain = run_suite("exterior_ord", &chain_cfg).unwrap();
    assert!(chain.pass(), "{:?}", chain.failures[0]);
    let elapsed = start.elapsed();
    assert_within(elapsed, Duration::from_secs(120), "criterion 5");
    println!("ACCEPTANCE 5 (extension dominance, 1000 strict extensions): PASS ({elapsed:?})");
}

#[test]
fn criterion_6_goodness_equivalence_gl3() {
    let _guard = serial();
    let cfg = TrialConfig {
        seed: 0,
        trials: 1000,
        dim_max: 3,
        valuation_window: 3,
        field: FieldChoice::Rationals,
    };
    let borel = GroupShape::borel(3);
    for trial in 0..cfg.trials {
        let mut g = Generator::<Rat>::new((), &cfg, trial);
        let (u, mu, element) = g.borel_element(3).unwrap();
        let by_type = is_good(&element, &borel).unwrap();
        let by_conditions = borel_unipotent_report(&u, &mu).unwrap();
        assert_eq!(
            by_type.is_good, by_conditions.verdict,
            "checkers disagree on trial {trial}"
        );
        assert!(dominance_leq(&by_type.levi_type, &by_type.full_type).unwrap());
        if !by_type.is_good {
            assert!(
                by_type.strict_dominance_witness.is_some(),
                "no strict partial sum on trial {trial}"
            );
        }
    }

    // the pinned instances around u = 1 + t^-1 E12
    let mut u = Mat::<Rat>::identity((), 2);
    u.set(0, 1, LaurentScalar::t_power((), -1));
    // as a Borel element with trivial Levi part it is not good
    assert!(!is_good(&u, &GroupShape::borel(2)).unwrap().is_good);
    // u t^mu stays outside the cell of t^mu for mu = (1,0)...
    let mu = CocharType::new(vec![1, 0]);
    let report = borel_unipotent_report(&u, &mu).unwrap();
    assert!(!report.verdict);
    assert!(!is_good(&u.mul(&Mat::t_diag((), &[1, 0])), &GroupShape::borel(2))
        .unwrap()
        .is_good);
    // ...while the conjugated instance t^mu u = (t^mu u t^-mu) t^mu is good
    assert!(is_good(&Mat::t_diag((), &[1, 0]).mul(&u), &GroupShape::borel(2))
        .unwrap()
        .is_good);
    println!("ACCEPTANCE 6 (goodness two ways on GL3, 1000 draws + pinned instances): PASS");
}

#[test]
fn criterion_7_mazur_kottwitz_layer() {
    let _guard = serial();
    // exhaustive dominance minimum for n <= 3, entries in [-2, 2]
    let cfg = TrialConfig {
        seed: 0,
        trials: 1,
        dim_max: 3,
        valuation_window: 3,
        field: FieldChoice::Rationals,
    };
    let report = run_suite("mazur_min", &cfg).unwrap();
    assert!(report.pass(), "{:?}", report.failures[0]);

    // diag(1, 0) slopes: basic for the Levi interpretation only
    let nu = SlopeVector::new(vec![rational_from(1, 1), rational_from(0, 1)]).unwrap();
    let borel = GroupShape::borel(2);
    assert!(!is_basic_for_shape(&nu, &borel, BasicScope::FullGroup).unwrap());
    assert!(is_basic_for_shape(&nu, &borel, BasicScope::LeviBlockwise).unwrap());

    // compact-mod-center matches the gcd criterion up to rank 6
    for n in 1..=6usize {
        for a in -6i64..=6 {
            let Ok(nu) = SlopeVector::new(vec![rational_from(a, n as i64); n]) else {
                continue;
            };
            let expect = num_gcd(a.unsigned_abs(), n as u64) == 1;
            assert_eq!(is_compact_mod_center(&nu), expect, "a={a} n={n}");
        }
    }

    // the basic element is itself a member
    let mu = CocharType::new(vec![2, 0, -1]);
    assert!(mazur_member(&basic_element(&mu), &mu).unwrap());
    println!("ACCEPTANCE 7 (Mazur/Kottwitz layer, exhaustive n<=3): PASS");
}

fn num_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

#[test]
fn criterion_8_tate_anchors() {
    let _guard = serial();
    let start = Instant::now();
    for k in -5i64..=5 {
        let anchor = tate_anchor(k);
        assert_eq!(anchor.hodge_degree, -k);
        assert_eq!(anchor.hodge_tate_degree, k);
        let report =
            latticework::polygon::admissibility_report(&anchor.nu, &anchor.etale_type).unwrap();
        assert!(report.modified_degree == rational_from(0, 1), "k={k}");
        assert!(report.verdict_necessary, "k={k}");
        assert_eq!(tate_anchor(-k), anchor.dual(), "k={k}");
    }
    let elapsed = start.elapsed();
    assert_within(elapsed, Duration::from_secs(1), "criterion 8");
    println!("ACCEPTANCE 8 (orientation anchors, k in [-5,5]): PASS ({elapsed:?})");
}

#[test]
fn criterion_9_full_verify_and_replay() {
    let _guard = serial();
    let start = Instant::now();
    let cfg = TrialConfig::default(); // seed 0, 500 trials, dim <= 4, window 3
    let reports = run_all(&cfg).unwrap();
    for report in &reports {
        assert!(
            report.pass(),
            "suite {} failed: {:?}",
            report.suite,
            report.failures[0]
        );
    }
    let elapsed = start.elapsed();
    assert_within(elapsed, Duration::from_secs(600), "criterion 9");

    // failure replay: the deliberately broken comparator collects
    // counterexamples whose serialized inputs reproduce the mismatch
    let broken = run_suite(
        BROKEN_FIXTURE_SUITE,
        &TrialConfig {
            trials: 3,
            ..TrialConfig::default()
        },
    )
    .unwrap();
    assert!(!broken.pass());
    let failure = &broken.failures[0];
    let replayed = wire::pair_from_value::<Rat>((), &failure.inputs["pair"]).unwrap();
    let got = replayed.bl_type().unwrap();
    assert_eq!(format!("{got}"), failure.got, "replay must reproduce");
    assert_ne!(failure.expected, failure.got);

    // prime-field replay path exercises the same machinery
    let broken_fp = run_suite(
        BROKEN_FIXTURE_SUITE,
        &TrialConfig {
            trials: 3,
            field: FieldChoice::Prime(5),
            ..TrialConfig::default()
        },
    )
    .unwrap();
    assert!(!broken_fp.pass());
    let failure = &broken_fp.failures[0];
    let prime = Prime::new(5).unwrap();
    let replayed = wire::pair_from_value::<Fp>(prime, &failure.inputs["pair"]).unwrap();
    assert_eq!(format!("{}", replayed.bl_type().unwrap()), failure.got);

    println!(
        "ACCEPTANCE 9 (verify --all at defaults + replay): PASS ({elapsed:?} for {} suites)",
        reports.len()
    );
}
