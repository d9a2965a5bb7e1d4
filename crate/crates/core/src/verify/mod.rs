//! Reproducible checks of computed homology, chain maps and certificates,
//! grouped into named suites.

mod appendix;
mod certificate;
mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::abelian::GroupSummary;
use crate::chain::{Chain, Theory};
use crate::complex::RackComplex;
use crate::error::{Error, Result};
use crate::homology::{EnginePool, HomologyEngine};
use crate::int::Int;
use crate::rack::FiniteRack;

pub use appendix::{symmetric_split, SymmetricReport};
pub use certificate::FourCycleCertificate;

/// `f_1 = f_2 = 0`, `f_3 = 1`, `f_n = f_{n-1} + f_{n-3}`.
#[derive(Clone, Debug)]
pub struct DelayedFibonacci {
    window: [u64; 3],
}

impl DelayedFibonacci {
    pub fn new() -> Self {
        DelayedFibonacci { window: [0, 0, 1] }
    }

    /// `f_n` for `n ≥ 1`.
    pub fn term(n: usize) -> u64 {
        assert!(n >= 1, "the sequence starts at f_1");
        DelayedFibonacci::new().nth(n - 1).expect("unbounded")
    }
}

impl Default for DelayedFibonacci {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for DelayedFibonacci {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let [a, b, c] = self.window;
        self.window = [b, c, c + a];
        Some(a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Match,
    Mismatch,
    /// A computation outside the ranges claimed by the source; reported,
    /// never counted as agreement.
    Finding,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Match => "match",
            Verdict::Mismatch => "mismatch",
            Verdict::Finding => "finding",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inputs {
    pub rack: String,
    pub theory: String,
    pub degrees: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub id: String,
    pub inputs: Inputs,
    pub expected: String,
    pub computed: String,
    pub verdict: Verdict,
    pub time_ms: u64,
}

/// What a check found, before timing and identification are attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub expected: String,
    pub computed: String,
    pub verdict: Verdict,
}

impl Outcome {
    /// `match` iff the two renderings agree.
    pub fn compare(expected: impl fmt::Display, computed: impl fmt::Display) -> Self {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        let verdict = if expected == computed { Verdict::Match } else { Verdict::Mismatch };
        Outcome { expected, computed, verdict }
    }

    pub fn holds(expected: impl fmt::Display, computed: impl fmt::Display, ok: bool) -> Self {
        Outcome {
            expected: expected.to_string(),
            computed: computed.to_string(),
            verdict: if ok { Verdict::Match } else { Verdict::Mismatch },
        }
    }

    pub fn finding(expected: impl fmt::Display, computed: impl fmt::Display) -> Self {
        Outcome {
            expected: expected.to_string(),
            computed: computed.to_string(),
            verdict: Verdict::Finding,
        }
    }
}

/// The suites understood by [`Verifier::run_suite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Thm12,
    Thm13,
    Frs,
    Sec2,
    Sec4,
    Sec5,
    Sec6,
    App1,
    App2,
    All,
}

impl Suite {
    pub const EACH: [Suite; 9] = [
        Suite::Thm12,
        Suite::Thm13,
        Suite::Frs,
        Suite::Sec2,
        Suite::Sec4,
        Suite::Sec5,
        Suite::Sec6,
        Suite::App1,
        Suite::App2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm12 => "thm12",
            Suite::Thm13 => "thm13",
            Suite::Frs => "frs",
            Suite::Sec2 => "sec2",
            Suite::Sec4 => "sec4",
            Suite::Sec5 => "sec5",
            Suite::Sec6 => "sec6",
            Suite::App1 => "app1",
            Suite::App2 => "app2",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain(&[Suite::All])
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

/// Key of one stored homology result.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CacheKey {
    pub digest: String,
    pub theory: Theory,
    pub n: usize,
    /// `0` for integral homology.
    pub modulus: u64,
}

/// Persistent store for homology groups, consulted before computing.
pub trait ResultCache: Send + Sync {
    fn load(&self, key: &CacheKey) -> Option<GroupSummary>;

    fn store(&self, key: &CacheKey, group: &GroupSummary, generators: &[Chain]);
}

pub(crate) type Job = Box<dyn Fn(&Verifier) -> Result<Outcome> + Send + Sync>;

pub(crate) struct Check {
    id: String,
    inputs: Inputs,
    job: Job,
}

impl Check {
    pub(crate) fn new(
        id: impl Into<String>,
        rack: impl Into<String>,
        theory: impl Into<String>,
        degrees: Vec<usize>,
        job: impl Fn(&Verifier) -> Result<Outcome> + Send + Sync + 'static,
    ) -> Self {
        Check {
            id: id.into(),
            inputs: Inputs { rack: rack.into(), theory: theory.into(), degrees },
            job: Box::new(job),
        }
    }
}

/// Runs checks against a shared pool of homology engines and an optional
/// result cache.
pub struct Verifier {
    pool: EnginePool,
    racks: Mutex<BTreeMap<String, Arc<FiniteRack>>>,
    cache: Option<Arc<dyn ResultCache>>,
    threads: usize,
}

impl Default for Verifier {
    fn default() -> Self {
        Self::new()
    }
}

impl Verifier {
    pub fn new() -> Self {
        Verifier {
            pool: EnginePool::new(),
            racks: Mutex::new(BTreeMap::new()),
            cache: None,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }

    pub fn with_cache(mut self, cache: Arc<dyn ResultCache>) -> Self {
        self.cache = Some(cache);
        self
    }

    /// Number of checks run at once.
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn pool(&self) -> &EnginePool {
        &self.pool
    }

    /// A rack from its CLI spec, shared between checks.
    pub fn rack(&self, spec: &str) -> Result<Arc<FiniteRack>> {
        if let Some(r) = self.racks.lock().unwrap().get(spec) {
            return Ok(r.clone());
        }
        let rack = Arc::new(FiniteRack::from_spec(spec)?);
        Ok(self.racks.lock().unwrap().entry(spec.to_string()).or_insert(rack).clone())
    }

    pub fn dihedral(&self, k: usize) -> Result<Arc<FiniteRack>> {
        self.rack(&format!("dihedral:{k}"))
    }

    pub fn engine(&self, rack: &Arc<FiniteRack>, theory: Theory) -> Result<Arc<HomologyEngine<RackComplex>>> {
        self.pool.engine(rack, theory)
    }

    /// `H_n(rack; Z_m)` (`m = 0` for integral homology), from the cache when
    /// present. Integral results are stored with their generators.
    pub fn homology(&self, rack: &Arc<FiniteRack>, theory: Theory, n: usize, modulus: u64) -> Result<GroupSummary> {
        let key = CacheKey { digest: rack.digest(), theory, n, modulus };
        if let Some(g) = self.cache.as_ref().and_then(|c| c.load(&key)) {
            return Ok(g);
        }
        let engine = self.engine(rack, theory)?;
        let (group, generators) = if modulus == 0 {
            (engine.summary(n), engine.generator_chains(n))
        } else {
            (engine.homology_mod(n, modulus)?, Vec::new())
        };
        if let Some(c) = &self.cache {
            c.store(&key, &group, &generators);
        }
        Ok(group)
    }

    /// Integral `H_n`, with the engine's generators recorded in the cache.
    pub fn group(&self, rack: &Arc<FiniteRack>, theory: Theory, n: usize) -> Result<GroupSummary> {
        self.homology(rack, theory, n, 0)
    }

    fn run(&self, checks: Vec<Check>) -> Vec<VerificationReport> {
        let slots: Mutex<Vec<Option<VerificationReport>>> = Mutex::new(vec![None; checks.len()]);
        let next = AtomicUsize::new(0);
        let workers = self.threads.min(checks.len()).max(1);
        // Plain threads rather than rayon tasks: a check blocked on a
        // memoised reduction must not hold a rayon worker that the reduction
        // itself needs.
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(check) = checks.get(i) else { break };
                    let start = Instant::now();
                    let outcome = (check.job)(self).unwrap_or_else(|e| Outcome {
                        expected: "a result".into(),
                        computed: format!("error: {e}"),
                        verdict: Verdict::Mismatch,
                    });
                    let report = VerificationReport {
                        id: check.id.clone(),
                        inputs: check.inputs.clone(),
                        expected: outcome.expected,
                        computed: outcome.computed,
                        verdict: outcome.verdict,
                        time_ms: start.elapsed().as_millis() as u64,
                    };
                    slots.lock().unwrap()[i] = Some(report);
                });
            }
        });
        slots.into_inner().unwrap().into_iter().map(|r| r.expect("every check ran")).collect()
    }

    pub fn run_suite(&self, suite: Suite) -> Vec<VerificationReport> {
        let checks = match suite {
            Suite::All => Suite::EACH.iter().flat_map(|&s| suites::checks(s)).collect(),
            s => suites::checks(s),
        };
        self.run(checks)
    }

    /// `tor H_n^Q(R_k)` against `Z_k^{f_n}` for `1 ≤ n ≤ n_max`. Degrees
    /// outside the tabulated ranges are findings.
    pub fn fibonacci(&self, k: usize, n_max: usize) -> Result<Vec<VerificationReport>> {
        if k % 2 == 0 {
            return Err(Error::Precondition(format!("k = {k} must be odd")));
        }
        Ok(self.run((1..=n_max).map(|n| suites::fibonacci_check(k, n)).collect()))
    }

    /// The symmetric-subcomplex comparison in one degree.
    pub fn appendix2(&self, k: usize, a: usize, n: usize) -> Result<VerificationReport> {
        let rack = self.dihedral(k)?;
        if !rack.is_kei() {
            return Err(Error::RequiresKei);
        }
        if a >= k {
            return Err(Error::Precondition(format!("element {a} outside R_{k}")));
        }
        Ok(self.run(vec![suites::appendix_check(k, a, n)]).remove(0))
    }
}

/// `-1`, `0` or `1` rendered with sign, for reports.
pub(crate) fn signed(s: i64) -> String {
    if s >= 0 {
        format!("+{s}")
    } else {
        s.to_string()
    }
}

pub(crate) fn coords(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}
