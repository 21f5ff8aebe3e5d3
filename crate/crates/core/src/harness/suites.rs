//! The named verification suites. Each suite draws seeded samples, checks
//! one structural statement, and records any counterexample with its inputs
//! serialized in the same formats the command-line tools consume.

use serde_json::{json, Value};

use crate::bilattice::{
    borel_unipotent_report, is_good, BilatticedSpace, GroupShape,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::filtration::{bb_filtration, dominance_leq, rees_lattice};
use crate::json;
use crate::lattice::{CocharType, LatticeBasis};
use crate::matrix::Mat;
use crate::polygon::{basic_element, mazur_member, rational_from, tate_anchor, SlopeVector};
use crate::scalar::LaurentScalar;

use super::gen::Generator;
use super::{Failure, SuiteReport, TrialConfig, BROKEN_FIXTURE_SUITE};

pub fn dispatch<F: Field>(name: &str, cfg: &TrialConfig, ctx: F::Ctx) -> Result<SuiteReport> {
    let mut s = Suite::<F> {
        cfg: *cfg,
        ctx,
        failures: Vec::new(),
        trials_run: 0,
    };
    match name {
        "cartan_oracle" => s.cartan_oracle()?,
        "bb_rees_roundtrip" => s.bb_rees_roundtrip()?,
        "minuscule_bijection" => s.minuscule_bijection()?,
        "type_inversion" => s.type_inversion()?,
        "extension_dominance" => s.extension_dominance()?,
        "exterior_ord" => s.exterior_ord()?,
        "goodness_two_ways" => s.goodness_two_ways()?,
        "specialization_strict" => s.specialization_strict()?,
        "mazur_min" => s.mazur_min()?,
        "tate_anchors" => s.tate_anchors()?,
        BROKEN_FIXTURE_SUITE => s.broken_fixture()?,
        other => return Err(Error::UnknownSuite(other.to_string())),
    }
    Ok(SuiteReport {
        suite: name.to_string(),
        trials_run: s.trials_run,
        failures: s.failures,
        elapsed_ms: 0,
    })
}

struct Suite<F: Field> {
    cfg: TrialConfig,
    ctx: F::Ctx,
    failures: Vec<Failure>,
    trials_run: u32,
}

impl<F: Field> Suite<F> {
    fn generator(&self, trial: u32) -> Generator<F> {
        Generator::new(self.ctx, &self.cfg, trial)
    }

    fn fail(&mut self, trial: u32, inputs: Value, expected: impl ToString, got: impl ToString) {
        self.failures.push(Failure {
            trial,
            inputs,
            expected: expected.to_string(),
            got: got.to_string(),
        });
    }

    /// relative_type agrees with the diagonalization oracle on random
    /// invertible matrices.
    fn cartan_oracle(&mut self) -> Result<()> {
        for trial in 0..self.cfg.trials {
            self.trials_run += 1;
            let mut g = self.generator(trial);
            let n = g.dim();
            let gmat = g.invertible_matrix(n)?;
            let l0 = LatticeBasis::<F>::standard(self.ctx, n);
            let fast = l0.relative_type(&l0.apply(&gmat)?)?;
            let slow = super::oracle_type_via_diagonalization(&gmat)?;
            if fast != slow {
                let inputs = json!({ "g": json::matrix_to_value(&gmat) });
                self.fail(trial, inputs, slow, fast);
            }
        }
        Ok(())
    }

    /// The residue filtration of the canonical lattice recovers the flag.
    fn bb_rees_roundtrip(&mut self) -> Result<()> {
        for trial in 0..self.cfg.trials {
            self.trials_run += 1;
            let mut g = self.generator(trial);
            let n = g.dim();
            let flag = g.flag(n);
            let lattice = rees_lattice(&flag);
            let back = bb_filtration(&lattice, &LatticeBasis::standard(self.ctx, n))?;
            if back != flag {
                let inputs = json!({ "flag": json::flag_to_value(&flag) });
                self.fail(
                    trial,
                    inputs,
                    json::flag_to_value(&flag),
                    json::flag_to_value(&back),
                );
            }
        }
        Ok(())
    }

    /// The canonical lattice of the residue filtration recovers a lattice of
    /// minuscule type, and fails on the recorded wild counterexample.
    fn minuscule_bijection(&mut self) -> Result<()> {
        // pinned counterexample off the minuscule locus: the round trip must
        // NOT recover the lattice of type (1,-1)
        let l0 = LatticeBasis::<F>::standard(self.ctx, 2);
        let mut cols = Mat::identity(self.ctx, 2);
        cols.set(0, 1, LaurentScalar::t_power(self.ctx, -1));
        let wild = LatticeBasis::new(cols)?;
        let back = rees_lattice(&bb_filtration(&wild, &l0)?);
        self.trials_run += 1;
        if back.eq_lattice(&wild)? {
            self.fail(
                0,
                json!({ "lattice": json::lattice_to_value(&wild) }),
                "round trip must fail off the minuscule locus",
                "round trip recovered the lattice",
            );
        }
        for trial in 0..self.cfg.trials {
            self.trials_run += 1;
            let mut g = self.generator(trial);
            let n = g.dim();
            let (mu, lattice) = g.minuscule_lattice(n)?;
            let back = rees_lattice(&bb_filtration(
                &lattice,
                &LatticeBasis::standard(self.ctx, n),
            )?);
            if !back.eq_lattice(&lattice)? {
                let inputs = json!({
                    "mu": json::cochar_to_value(&mu),
                    "lattice": json::lattice_to_value(&lattice),
                });
                self.fail(
                    trial,
                    inputs,
                    json::lattice_to_value(&lattice),
                    json::lattice_to_value(&back),
                );
            }
        }
        Ok(())
    }

    /// dim gr^j of the second residue filtration equals dim gr^-j of the
    /// first.
    fn type_inversion(&mut self) -> Result<()> {
        for trial in 0..self.cfg.trials {
            self.trials_run += 1;
            let mut g = self.generator(trial);
            let n = g.dim();
            let bs = BilatticedSpace::new(g.lattice(n)?, g.lattice(n)?)?;
            let f1 = bs.bb_side(1)?;
            let f2 = bs.bb_side(2)?;
            let lo = f1.min_jump().min(-f2.max_jump()) - 1;
            let hi = f1.max_jump().max(-f2.min_jump()) + 1;
            for j in lo..=hi {
                if f2.graded_dim(j) != f1.graded_dim(-j) {
                    let inputs = json!({ "pair": json::pair_to_value(&bs) });
                    self.fail(
                        trial,
                        inputs,
                        format!("dim gr^{j} side2 = dim gr^{} side1", -j),
                        format!("{} vs {}", f2.graded_dim(j), f1.graded_dim(-j)),
                    );
                    break;
                }
            }
        }
        Ok(())
    }

    /// The type of the graded lies below the type of a strict extension.
    fn extension_dominance(&mut self) -> Result<()> {
        for trial in 0..self.cfg.trials {
            self.trials_run += 1;
            let mut g = self.generator(trial);
            let n = g.dim_at_least(2);
            let (sub, total, quotient, incl, proj) = g.strict_extension(n)?;
            let rep =
                crate::bilattice::check_extension_dominance(&sub, &total, &quotient, &incl, &proj)?;
            if !rep.dominance_holds {
                let inputs = json!({
                    "sub": json::pair_to_value(&sub),
                    "total": json::pair_to_value(&total),
                    "quotient": json::pair_to_value(&quotient),
                });
                self.fail(
                    trial,
                    inputs,
                    format!("{} <= {}", rep.graded_type, rep.total_type),
                    "dominance violated",
                );
            }
        }
        Ok(())
    }

    /// ord of each exterior power of a strict extension dominates that of
    /// the direct sum, and equals the top-k type sum.
    fn exterior_ord(&mut self) -> Result<()> {
        for trial in 0..self.cfg.trials {
            self.trials_run += 1;
            let mut g = self.generator(trial);
            let n = g.dim_at_least(2);
            let (sub, total, quotient, _, _) = g.strict_extension(n)?;
            let graded = sub.direct_sum(&quotient)?;
            let ty = total.bl_type()?;
            for k in 1..=n {
                let ord_total = total.exterior(k)?.bl_ord()?;
                let ord_graded = graded.exterior(k)?.bl_ord()?;
                let top_k: i64 = ty.entries()[..k].iter().sum();
                if ord_total < ord_graded || ord_total != top_k {
                    let inputs = json!({
                        "total": json::pair_to_value(&total),
                        "graded": json::pair_to_value(&graded),
                        "k": k,
                    });
                    self.fail(
                        trial,
                        inputs,
                        format!("ord {ord_graded} <= ord = top-{k} sum {top_k}"),
                        format!("ord {ord_total}"),
                    );
                    break;
                }
            }
        }
        Ok(())
    }

    /// The type-equality checker and the unipotent-conditions checker agree
    /// on Borel elements.
    fn goodness_two_ways(&mut self) -> Result<()> {
        for trial in 0..self.cfg.trials {
            self.trials_run += 1;
            let mut g = self.generator(trial);
            let n = g.dim();
            let (u, mu, element) = g.borel_element(n)?;
            let by_type = is_good(&element, &GroupShape::borel(n))?;
            let by_conditions = borel_unipotent_report(&u, &mu)?;
            if by_type.is_good != by_conditions.verdict {
                let inputs = json!({
                    "element": json::matrix_to_value(&element),
                    "u": json::matrix_to_value(&u),
                    "mu": json::cochar_to_value(&mu),
                });
                self.fail(
                    trial,
                    inputs,
                    format!("is_good = {}", by_type.is_good),
                    format!("conditions verdict = {}", by_conditions.verdict),
                );
            }
        }
        Ok(())
    }

    /// The Levi type always lies below the full type, strictly at some
    /// partial sum whenever the element is not good.
    fn specialization_strict(&mut self) -> Result<()> {
        for trial in 0..self.cfg.trials {
            self.trials_run += 1;
            let mut g = self.generator(trial);
            let n = g.dim();
            let shape = g.shape(n);
            let element = g.parabolic_element(&shape)?;
            let rep = is_good(&element, &shape)?;
            let dominated = dominance_leq(&rep.levi_type, &rep.full_type)?;
            let strict_ok = rep.is_good || rep.strict_dominance_witness.is_some();
            if !dominated || !strict_ok {
                let inputs = json!({
                    "element": json::matrix_to_value(&element),
                    "shape": json::shape_to_value(&shape),
                });
                self.fail(
                    trial,
                    inputs,
                    format!("{} <= {} (strict somewhere if not good)", rep.levi_type, rep.full_type),
                    format!(
                        "dominated = {dominated}, witness = {:?}",
                        rep.strict_dominance_witness
                    ),
                );
            }
        }
        Ok(())
    }

    /// basic_element is the dominance-minimum of the enumerated members:
    /// exhaustive over types with entries in [-2, 2], n <= 3, and slope
    /// denominators <= 3.
    fn mazur_min(&mut self) -> Result<()> {
        for n in 1..=3usize {
            for mu in enumerate_types(n, -2, 2) {
                self.trials_run += 1;
                let basic = basic_element(&mu);
                if !mazur_member(&basic, &mu)? {
                    self.fail(
                        0,
                        json!({ "mu": json::cochar_to_value(&mu) }),
                        "basic element is a member",
                        "not a member",
                    );
                    continue;
                }
                for nu in enumerate_members(&mu, 3)? {
                    let below = basic
                        .partial_sums()
                        .iter()
                        .zip(nu.partial_sums().iter())
                        .all(|(a, b)| a <= b);
                    if !below {
                        self.fail(
                            0,
                            json!({
                                "mu": json::cochar_to_value(&mu),
                                "nu": json::slopes_to_value(&nu),
                            }),
                            "basic element below every member",
                            "member found below the basic element",
                        );
                    }
                }
            }
        }
        Ok(())
    }

    /// Degree and orientation anchors for the rank-one twists.
    fn tate_anchors(&mut self) -> Result<()> {
        for k in -5i64..=5 {
            self.trials_run += 1;
            let anchor = tate_anchor(k);
            let rep = crate::polygon::admissibility_report(&anchor.nu, &anchor.etale_type)?;
            let dual_ok = tate_anchor(-k) == anchor.dual();
            let ok = rep.modified_degree == rational_from(0, 1)
                && rep.verdict_necessary
                && anchor.hodge_degree == -k
                && anchor.hodge_tate_degree == k
                && dual_ok;
            if !ok {
                self.fail(
                    0,
                    json!({ "k": k }),
                    "degree 0, hodge -k, hodge-tate k, dual anchors match",
                    format!(
                        "degree {}, hodge {}, hodge-tate {}, dual_ok {dual_ok}",
                        crate::polygon::rational_to_string(&rep.modified_degree),
                        anchor.hodge_degree,
                        anchor.hodge_tate_degree
                    ),
                );
            }
        }
        Ok(())
    }

    /// Deliberately broken comparator: asserts that every generated pair has
    /// the zero type. Exists to exercise failure collection and replay.
    fn broken_fixture(&mut self) -> Result<()> {
        for trial in 0..self.cfg.trials {
            self.trials_run += 1;
            let mut g = self.generator(trial);
            let n = g.dim();
            let bs = BilatticedSpace::new(g.lattice(n)?, g.lattice(n)?)?;
            let ty = bs.bl_type()?;
            let zero = CocharType::zero(n);
            if ty != zero {
                let inputs = json!({ "pair": json::pair_to_value(&bs) });
                self.fail(trial, inputs, zero, ty);
            }
        }
        Ok(())
    }
}

/// All weakly decreasing integer vectors of the given length with entries in
/// [lo, hi].
fn enumerate_types(n: usize, lo: i64, hi: i64) -> Vec<CocharType> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, lo: i64, next_max: i64, cur: &mut Vec<i64>, out: &mut Vec<CocharType>) {
        if cur.len() == n {
            out.push(CocharType::from_sorted(cur.clone()).unwrap());
            return;
        }
        let mut v = next_max;
        while v >= lo {
            cur.push(v);
            rec(n, lo, v, cur, out);
            cur.pop();
            v -= 1;
        }
    }
    rec(n, lo, hi, &mut cur, &mut out);
    out
}

/// All admissible slope vectors below mu with the same endpoint and slope
/// denominators at most `max_den`.
fn enumerate_members(mu: &CocharType, max_den: i64) -> Result<Vec<SlopeVector>> {
    let n = mu.len();
    let lo = *mu.entries().last().unwrap();
    let hi = mu.entries()[0];
    // candidate slope values in [mu_n, mu_1]
    let mut values = Vec::new();
    for den in 1..=max_den {
        let mut num = lo * den;
        while num <= hi * den {
            let v = rational_from(num, den);
            if !values.contains(&v) {
                values.push(v);
            }
            num += 1;
        }
    }
    values.sort_by(|a, b| b.cmp(a));
    let mut out = Vec::new();
    let mut cur: Vec<crate::polygon::Rational> = Vec::with_capacity(n);
    fn rec(
        n: usize,
        values: &[crate::polygon::Rational],
        start: usize,
        cur: &mut Vec<crate::polygon::Rational>,
        out: &mut Vec<Vec<crate::polygon::Rational>>,
    ) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for (i, v) in values.iter().enumerate().skip(start) {
            cur.push(v.clone());
            rec(n, values, i, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(n, &values, 0, &mut cur, &mut raw);
    for candidate in raw {
        let Ok(nu) = SlopeVector::new(candidate) else {
            continue; // integrality violation
        };
        if mazur_member(&nu, mu)? {
            out.push(nu);
        }
    }
    Ok(out)
}
