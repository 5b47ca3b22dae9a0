//! Randomised invariant suites: decider against oracle, and internal identities.

use std::fmt;

use serde_json::{json, Value};

use crate::character::{dead_cliques, Character};
use crate::decider::{
    cross_check_p1_p2, fg_corollary_e, fp_codim1, fp_ideal, thm_g_sufficient, verify_witness,
    Convention,
};
use crate::error::Result;
use crate::exactfield::FieldSpec;
use crate::fixtures;
use crate::graph::{Graph, Limits};
use crate::oracle::{decomposition_check, fp_oracle, split_check};
use crate::random::{Instance, InstanceGenerator};

#[derive(Clone, Debug)]
pub struct SelftestConfig {
    pub seed: u64,
    pub instances: usize,
    pub max_vertices: usize,
    pub fields: Vec<FieldSpec>,
    pub convention: Convention,
    pub limits: Limits,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 1,
            instances: 100,
            max_vertices: 7,
            fields: vec![FieldSpec::Rationals, FieldSpec::Prime(5)],
            convention: Convention::Shifted,
            limits: Limits::default(),
        }
    }
}

/// Pass/fail tally of one invariant, with the first few failures described.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

const KEPT_FAILURES: usize = 5;

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult {
            name,
            ..Default::default()
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(describe());
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SelftestReport {
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.failed == 0)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> Value {
        let suites: Vec<Value> = self
            .suites
            .iter()
            .map(|s| json!({"suite": s.name, "passed": s.passed, "failed": s.failed, "failures": s.failures}))
            .collect();
        json!({"all_passed": self.all_passed(), "suites": suites})
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            let status = if s.failed == 0 { "PASS" } else { "FAIL" };
            writeln!(
                f,
                "{status} {}: {} passed, {} failed",
                s.name, s.passed, s.failed
            )?;
            for msg in &s.failures {
                writeln!(f, "    {msg}")?;
            }
        }
        Ok(())
    }
}

fn describe(g: &Graph, chi: &Character, n: usize) -> String {
    format!(
        "edges {:?} chi {:?} n {n}",
        g.edges().collect::<Vec<_>>(),
        chi.values()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
    )
}

/// Instances that separate the two readings of the link condition.
pub fn discriminating_instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for field in [FieldSpec::Rationals, FieldSpec::Prime(5)] {
        for n in [1, 2] {
            out.push(Instance {
                graph: fixtures::discriminator(),
                character: fixtures::discriminator_character(field),
                n,
            });
        }
    }
    out
}

/// Runs every suite on `instances` random instances (plus the fixed
/// discriminating ones when `instances > 0`).
pub fn run(cfg: &SelftestConfig) -> Result<SelftestReport> {
    let mut gen = InstanceGenerator::new(cfg.seed, cfg.max_vertices, cfg.fields.clone());
    let mut instances: Vec<Instance> = (0..cfg.instances).map(|_| gen.instance()).collect();
    if cfg.instances > 0 {
        instances.extend(discriminating_instances());
    }
    let spaces: Vec<_> = (0..cfg.instances).map(|_| gen.space_instance()).collect();
    let limits = &cfg.limits;
    let conv = cfg.convention;

    let mut arbitration = SuiteResult::new("decider agrees with oracle");
    let mut fg_suite = SuiteResult::new("finite generation agrees with FP_1");
    let mut decomposition = SuiteResult::new("decomposition identity");
    let mut split = SuiteResult::new("split and stabilization identity");
    let mut witnesses = SuiteResult::new("witnesses re-verify");
    let mut cross = SuiteResult::new("clique poset matches living links");
    let mut thm_g = SuiteResult::new("sufficient condition implies FP_n");

    for inst in &instances {
        let (g, chi, n) = (&inst.graph, &inst.character, inst.n);
        let decided = fp_codim1(g, chi, n, conv, limits)?;
        let oracle = fp_oracle(g, chi, n, limits)?;
        arbitration.record(decided.holds == oracle.holds, || {
            format!(
                "{}: decider {} oracle {}",
                describe(g, chi, n),
                decided.holds,
                oracle.holds
            )
        });

        let fg = fg_corollary_e(g, chi)?;
        let fp1 = fp_codim1(g, chi, 1, conv, limits)?;
        fg_suite.record(fg.holds == fp1.holds, || {
            format!(
                "{}: fg {} FP_1 {}",
                describe(g, chi, 1),
                fg.holds,
                fp1.holds
            )
        });

        let mut ok = true;
        for i in -1..=4 {
            ok &= decomposition_check(g, chi, i, limits)?;
        }
        decomposition.record(ok, || describe(g, chi, n));

        let report = split_check(g, chi, n.max(1), limits)?;
        split.record(report.holds(), || {
            format!("{}: {:?}", describe(g, chi, n), report.mismatches)
        });

        for verdict in [&decided, &fg] {
            if let Some(w) = &verdict.witness {
                let ok = verify_witness(g, chi.support(), chi.field(), w, conv, limits)?;
                witnesses.record(ok, || format!("{}: {w:?}", describe(g, chi, n)));
            }
        }
    }

    for inst in &spaces {
        let (g, sp, n) = (&inst.graph, &inst.space, inst.n);
        let sufficient = thm_g_sufficient(g, sp, n, limits)?;
        let ideal = fp_ideal(g, sp, n, conv, limits)?;
        thm_g.record(!sufficient.holds || ideal.holds, || {
            format!(
                "edges {:?} space dim {} n {n}",
                g.edges().collect::<Vec<_>>(),
                sp.dim()
            )
        });
        if sp.dim() == 1 {
            let chi = &sp.characters()[0];
            for z in dead_cliques(g, chi, usize::MAX, limits)? {
                let ok = cross_check_p1_p2(g, chi, &z, limits)?;
                cross.record(ok, || {
                    format!("{}: Z = {:?}", describe(g, chi, n), z.members())
                });
            }
        }
    }

    Ok(SelftestReport {
        suites: vec![
            arbitration,
            fg_suite,
            decomposition,
            split,
            witnesses,
            cross,
            thm_g,
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let cfg = SelftestConfig {
            instances: 15,
            max_vertices: 5,
            ..Default::default()
        };
        let report = run(&cfg).unwrap();
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn uniform_reading_fails() {
        let cfg = SelftestConfig {
            instances: 3,
            convention: Convention::Uniform,
            ..Default::default()
        };
        let report = run(&cfg).unwrap();
        assert!(!report.all_passed());
        assert!(report.suite("decider agrees with oracle").unwrap().failed > 0);
    }

    #[test]
    fn no_instances_is_vacuous() {
        let cfg = SelftestConfig {
            instances: 0,
            ..Default::default()
        };
        let report = run(&cfg).unwrap();
        assert!(report.all_passed());
        assert!(report.suites.iter().all(|s| s.passed == 0));
    }
}
