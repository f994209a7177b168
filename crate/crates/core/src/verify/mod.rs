//! Executable checks of the structure of covers over a corpus of groups.

mod checks;

use std::fmt;
use std::path::Path;

pub use checks::*;

use crate::cover::{build_cover, CoverResult};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::limits::Limits;
use crate::spec::{construct_group, parse_spec, pq_scalar, GroupSpec};
use crate::subgroup::{is_nonabelian_simple, structure_predicates};

/// Outcome of one check, with named values in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub check: String,
    pub group: String,
    pub n: usize,
    pub passed: bool,
    pub details: Vec<(String, String)>,
    /// Counterexample for a failure, or certificate for a pass.
    pub witness: Option<String>,
}

impl CheckReport {
    pub(crate) fn new(check: &str, group: &FiniteGroup, n: usize) -> Self {
        CheckReport {
            check: check.to_string(),
            group: group.name().to_string(),
            n,
            passed: true,
            details: Vec::new(),
            witness: None,
        }
    }

    pub(crate) fn detail(&mut self, key: &str, value: impl fmt::Display) {
        self.details.push((key.to_string(), value.to_string()));
    }

    /// Records a failed condition; the first failure becomes the witness.
    pub(crate) fn require(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if !ok {
            if self.passed {
                self.witness = Some(witness());
            }
            self.passed = false;
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.details.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// `χ(z) = ω^{<e, z>}` on `Z_p^n`, with `ω` the fixed element of order `p`
/// in the units mod `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub p: u64,
    pub q: u64,
    pub omega: u64,
    pub exponents: Vec<u64>,
}

impl Character {
    /// All `p^n` characters, exponent vectors in lexicographic order.
    pub fn all(p: u64, q: u64, n: usize) -> Result<Vec<Character>> {
        let omega = pq_scalar(p, q)?;
        let count = (p as usize).pow(n as u32);
        Ok((0..count)
            .map(|mut code| {
                let mut exponents = vec![0; n];
                for e in exponents.iter_mut().rev() {
                    *e = (code % p as usize) as u64;
                    code /= p as usize;
                }
                Character { p, q, omega, exponents }
            })
            .collect())
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// `χ(z)` for `z` given by its coordinates.
    pub fn value(&self, z: &[u64]) -> u64 {
        let e: u64 = self.exponents.iter().zip(z).map(|(a, b)| a * b).sum::<u64>() % self.p;
        pow_mod(self.omega, e, self.q)
    }

    /// `χ(z_i)` for the `i`-th basis vector.
    pub fn on_basis(&self, i: usize) -> u64 {
        pow_mod(self.omega, self.exponents[i], self.q)
    }
}

fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    let mut b = base % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Named groups of checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    FreeAction,
    Abelian,
    Nilpotent,
    Simple,
    Pq,
    Coprime,
    Lifting,
    Tower,
    Invariants,
}

impl Suite {
    pub const NAMES: [&'static str; 10] = [
        "all",
        "free-action",
        "abelian",
        "nilpotent",
        "simple",
        "pq",
        "coprime",
        "lifting",
        "tower",
        "invariants",
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        const ALL: [Suite; 10] = [
            Suite::All,
            Suite::FreeAction,
            Suite::Abelian,
            Suite::Nilpotent,
            Suite::Simple,
            Suite::Pq,
            Suite::Coprime,
            Suite::Lifting,
            Suite::Tower,
            Suite::Invariants,
        ];
        ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            Error::PreconditionViolated(format!("unknown suite '{s}'; expected one of {}", Self::NAMES.join(", ")))
        })
    }
}

/// A check that ran, or the error that stopped it.
#[derive(Debug)]
pub enum SuiteRecord {
    Report(CheckReport),
    Error { check: String, group: String, n: usize, error: Error },
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { samples: 200, seed: 0 }
    }
}

/// The two factors a product spec splits into, first factor first.
fn split_product(spec: &GroupSpec) -> Option<(GroupSpec, GroupSpec)> {
    match spec {
        GroupSpec::Product(fs) if fs.len() >= 2 => {
            let rest = if fs.len() == 2 {
                fs[1].clone()
            } else {
                GroupSpec::Product(fs[1..].to_vec())
            };
            Some((fs[0].clone(), rest))
        }
        GroupSpec::Power(base, k) if *k >= 2 => {
            let rest = if *k == 2 {
                (**base).clone()
            } else {
                GroupSpec::Power(base.clone(), k - 1)
            };
            Some(((**base).clone(), rest))
        }
        _ => None,
    }
}

/// Runs the checks of `suite` that apply to the group of `spec`.
pub fn run_suite(spec: &GroupSpec, n: usize, suite: Suite, limits: &Limits, options: &SuiteOptions) -> Result<Vec<SuiteRecord>> {
    let g = construct_group(spec, limits)?;
    let flags = structure_predicates(&g);
    let simple = is_nonabelian_simple(&g);
    let wants = |s: Suite| suite == Suite::All || suite == s;
    let mut out = Vec::new();
    let mut record = |check: &str, r: Result<CheckReport>| {
        out.push(match r {
            Ok(report) => SuiteRecord::Report(report),
            Err(error) => SuiteRecord::Error {
                check: check.to_string(),
                group: g.name().to_string(),
                n,
                error,
            },
        })
    };
    let uses_cover = [Suite::Abelian, Suite::Nilpotent, Suite::Lifting, Suite::Invariants]
        .into_iter()
        .any(wants);
    let cover = if uses_cover { Some(build_cover(&g, n, limits)) } else { None };
    let with_cover = |f: &dyn Fn(&CoverResult) -> Result<CheckReport>| match cover.as_ref().expect("built above") {
        Ok(c) => f(c),
        Err(e) => Err(e.clone()),
    };

    if wants(Suite::FreeAction) {
        record("free_action", check_free_action(&g, n, limits));
    }
    if wants(Suite::Abelian) && (flags.is_abelian || suite == Suite::Abelian) {
        record("abelian_formula", with_cover(&|c| abelian_formula_with(&g, n, c, limits)));
    }
    if wants(Suite::Nilpotent) && (flags.is_nilpotent || suite == Suite::Nilpotent) {
        record("nilpotent_sylow", with_cover(&|c| nilpotent_sylow_with(&g, n, c, limits)));
    }
    if wants(Suite::Coprime) {
        match split_product(spec) {
            Some((a, b)) => {
                let r = construct_group(&a, limits)
                    .and_then(|a| Ok((a, construct_group(&b, limits)?)))
                    .and_then(|(a, b)| check_coprime_factorization(&a, &b, n, limits));
                record("coprime_factorization", r);
            }
            None if suite == Suite::Coprime => record(
                "coprime_factorization",
                Err(Error::PreconditionViolated(format!("{} is not written as a product", g.name()))),
            ),
            None => {}
        }
    }
    if wants(Suite::Simple) && (simple || suite == Suite::Simple) {
        for k in 2..=3 {
            record("hall_independence", check_hall_independence(&g, n, k, limits));
        }
        record("simple_cover_order", check_simple_cover_order(&g, n, limits));
    }
    if wants(Suite::Pq) {
        match spec {
            GroupSpec::PQ { p, q } => record("pq_structure", check_pq_structure(*p, *q, n, limits)),
            _ if suite == Suite::Pq => record(
                "pq_structure",
                Err(Error::PreconditionViolated(format!("{} is not written as pq(p,q)", g.name()))),
            ),
            _ => {}
        }
    }
    if wants(Suite::Lifting) {
        let c = cover.as_ref().expect("built above");
        record("universal_lifting", universal_lifting_with(&g, n, c, options, limits));
    }
    if suite == Suite::Tower {
        record("tower", check_tower(&g, n + 1, n, limits));
    }
    if wants(Suite::Invariants) && !simple {
        record("cover_invariants", with_cover(&|c| cover_invariants_with(&g, n, c, limits)));
    }
    Ok(out)
}

/// One corpus entry: a spec and the sequence length to check it at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub spec: GroupSpec,
    pub n: usize,
}

/// The default suite corpus.
pub const SUITE_CORPUS: &str = include_str!("../../data/suite_corpus.txt");

/// Every group of order at most 48 written with the named constructors.
pub const SMALL_CORPUS: &str = include_str!("../../data/small_corpus.txt");

/// Lines of `spec[@n]`; `#` starts a comment.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (spec, n) = match line.rsplit_once('@') {
            Some((s, n)) => (
                s,
                n.trim().parse().map_err(|_| Error::InvalidSpec {
                    position: s.len() + 1,
                    message: format!("expected a sequence length after '@' in '{line}'"),
                })?,
            ),
            None => (line, 0),
        };
        out.push(CorpusEntry {
            spec: parse_spec(spec)?,
            n,
        });
    }
    Ok(out)
}

pub fn read_corpus(path: &Path) -> Result<Vec<CorpusEntry>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_corpus(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characters() {
        let chars = Character::all(2, 3, 2).unwrap();
        assert_eq!(chars.len(), 4);
        assert!(chars[0].is_trivial());
        assert_eq!(chars[3].exponents, vec![1, 1]);
        assert_eq!(chars[3].value(&[1, 1]), 1);
        assert_eq!(chars[3].value(&[1, 0]), 2);
        let c7 = Character::all(3, 7, 1).unwrap();
        assert_eq!(c7[1].omega, 2);
        assert_eq!(c7[2].on_basis(0), 4);
        assert!(Character::all(3, 5, 1).is_err());
    }

    #[test]
    fn corpora_parse() {
        let suite = parse_corpus(SUITE_CORPUS).unwrap();
        assert!(suite.len() > 60);
        assert!(suite.iter().all(|e| e.n >= 1));
        let small = parse_corpus(SMALL_CORPUS).unwrap();
        assert!(small.iter().all(|e| crate::spec::predicted_order(&e.spec).unwrap() <= 48));
        assert!(parse_corpus("C2@x").is_err());
    }

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().name(), name);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
