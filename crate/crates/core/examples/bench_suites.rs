use latticework::harness::gen::Generator;
use latticework::harness::{oracle_type_via_diagonalization, run_suite, FieldChoice, TrialConfig, SUITE_NAMES};
use latticework::{LatticeBasis, Rat};
use std::time::Instant;

fn main() {
    let cfg = TrialConfig {
        seed: 0,
        trials: 100,
        dim_max: 5,
        field: FieldChoice::Rationals,
        valuation_window: 3,
    };
    let mut total_fast = std::time::Duration::ZERO;
    let mut total_slow = std::time::Duration::ZERO;
    for trial in 0..50 {
        let mut g = Generator::<Rat>::new((), &cfg, trial);
        let n = 5;
        let gm = g.invertible_matrix(n).unwrap();
        let l0 = LatticeBasis::<Rat>::standard((), n);
        let t4 = Instant::now();
        let fast = l0.relative_type(&l0.apply(&gm).unwrap()).unwrap();
        let t5 = Instant::now();
        let slow = oracle_type_via_diagonalization(&gm).unwrap();
        let t6 = Instant::now();
        assert_eq!(fast, slow);
        total_fast += t5 - t4;
        total_slow += t6 - t5;
    }
    println!("50 trials n=5 Q: rel_type {total_fast:?}, oracle {total_slow:?}");

    let cfg = TrialConfig { trials: 100, dim_max: 4, ..cfg };
    for name in SUITE_NAMES {
        let t = Instant::now();
        let rep = run_suite(name, &cfg).unwrap();
        println!("{name}: {} trials, pass={}, {:?}", rep.trials_run, rep.pass(), t.elapsed());
    }
    let cfg5 = TrialConfig { field: FieldChoice::Prime(5), ..cfg };
    for name in ["cartan_oracle", "extension_dominance", "goodness_two_ways"] {
        let t = Instant::now();
        let rep = run_suite(name, &cfg5).unwrap();
        println!("F5 {name}: pass={}, {:?}", rep.pass(), t.elapsed());
    }
}
