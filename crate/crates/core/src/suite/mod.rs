//! Seeded property suites over random finite instances.
//!
//! Each law is checked on many instances; a [`Tally`] records how many
//! checks ran and keeps the first failure of each law.

pub mod cocycle_laws;
pub mod dynamics_laws;
pub mod groupoid_laws;
pub mod random;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawResult {
    pub name: String,
    pub checks: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

impl LawResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checks > 0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    results: Vec<LawResult>,
}

impl Tally {
    pub fn new() -> Self {
        Self::default()
    }

    fn entry(&mut self, name: &str) -> &mut LawResult {
        let i = match self.results.iter().position(|r| r.name == name) {
            Some(i) => i,
            None => {
                self.results.push(LawResult {
                    name: name.to_string(),
                    checks: 0,
                    failures: 0,
                    first_failure: None,
                });
                self.results.len() - 1
            }
        };
        &mut self.results[i]
    }

    pub fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        let e = self.entry(name);
        e.checks += 1;
        if !ok {
            e.failures += 1;
            if e.first_failure.is_none() {
                e.first_failure = Some(detail());
            }
        }
    }

    pub fn results(&self) -> &[LawResult] {
        &self.results
    }

    pub fn get(&self, name: &str) -> Option<&LawResult> {
        self.results.iter().find(|r| r.name == name)
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(LawResult::passed)
    }

    pub fn merge(&mut self, other: Tally) {
        for r in other.results {
            let e = self.entry(&r.name);
            e.checks += r.checks;
            e.failures += r.failures;
            if e.first_failure.is_none() {
                e.first_failure = r.first_failure;
            }
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.all_passed(),
            "laws": self.results,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let status = if r.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {:<64} {:>8} checks", r.name, r.checks));
            if let Some(f) = &r.first_failure {
                out.push_str(&format!("  first failure: {f}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("law,checks,failures,passed\n");
        for r in &self.results {
            out.push_str(&format!("\"{}\",{},{},{}\n", r.name, r.checks, r.failures, r.passed()));
        }
        out
    }
}

/// Instance counts for the lemma suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LemmaCounts {
    pub index: usize,
    pub towers: usize,
    pub group_actions: usize,
    pub quotients: usize,
    pub cohomology: usize,
    pub mackey: usize,
}

impl Default for LemmaCounts {
    fn default() -> Self {
        LemmaCounts {
            index: 500,
            towers: 200,
            group_actions: 50,
            quotients: 100,
            cohomology: 100,
            mackey: 50,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Groupoid and cocycle laws. Each family draws from its own stream so that
/// changing one count leaves the other families' instances unchanged.
pub fn run_lemmas(seed: u64, counts: &LemmaCounts) -> Tally {
    let mut t = Tally::new();
    let mut r = rng(seed);
    for _ in 0..counts.index {
        groupoid_laws::index_laws(&mut t, &mut r);
    }
    let mut r = rng(seed ^ 0x1);
    for _ in 0..counts.towers {
        groupoid_laws::local_index_laws(&mut t, &mut r);
    }
    let mut r = rng(seed ^ 0x2);
    for _ in 0..counts.group_actions {
        groupoid_laws::local_index_group_law(&mut t, &mut r);
    }
    let mut r = rng(seed ^ 0x3);
    for _ in 0..counts.quotients {
        groupoid_laws::quotient_laws(&mut t, &mut r);
    }
    let mut r = rng(seed ^ 0x4);
    for _ in 0..counts.cohomology {
        cocycle_laws::cohomology_laws(&mut t, &mut r);
    }
    let mut r = rng(seed ^ 0x5);
    for _ in 0..counts.mackey {
        cocycle_laws::mackey_laws(&mut t, &mut r);
    }
    cocycle_laws::flow_product_laws(&mut t);
    cocycle_laws::type_laws(&mut t);
    t
}

pub fn run_dynamics(seed: u64) -> Tally {
    dynamics_laws::run(seed)
}
