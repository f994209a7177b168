use std::fmt::Write as _;
use std::path::Path;

use homcover::subgroup::{conjugacy_classes, is_nonabelian_simple, structure_predicates};
use homcover::verify::{check_tower, read_corpus, run_suite, CheckReport, CorpusEntry, Suite, SuiteOptions, SuiteRecord};
use homcover::{
    aut_order, build_cover, construct_group, count_gamma, h_n, orbit_decompose, parse_spec, rank, Element,
    FiniteGroup, GroupSpec, Limits,
};
use thiserror::Error;

use crate::command::{Command, Subcommand};
use crate::output::{Record, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] homcover::Error),
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "Usage",
            CliError::Library(e) => e.name(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(e) if e.is_cap_exceeded() => EXIT_CAP,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome { report, exit_code: EXIT_OK }
    }
}

/// Environment caps, then flag overrides.
pub fn limits_for(cmd: &Command) -> Limits {
    let mut limits = Limits::from_env();
    if let Some(v) = cmd.max_order {
        limits.max_order = v;
    }
    if let Some(v) = cmd.max_closure {
        limits.max_closure = v;
    }
    if let Some(v) = cmd.max_candidates {
        limits.max_candidates = v;
    }
    limits
}

pub fn run_command(cmd: &Command) -> Result<Outcome, CliError> {
    let limits = limits_for(cmd);
    if cmd.subcommand == Subcommand::Verify {
        return verify(cmd, &limits);
    }
    let spec = parse_spec(group_arg(cmd)?)?;
    let g = construct_group(&spec, &limits)?;
    match cmd.subcommand {
        Subcommand::Info => Ok(Outcome::ok(info(&spec, &g))),
        Subcommand::Rank => {
            let r = rank(&g);
            Ok(Outcome::ok(headline(
                r.to_string(),
                base_record("rank", &g).with("rank", r),
            )))
        }
        Subcommand::GammaCount => {
            let n = n_arg(cmd)?;
            let count = count_gamma(&g, n)?;
            Ok(Outcome::ok(headline(
                count.to_string(),
                base_record("gamma-count", &g).with("n", n).with("gamma_count", count),
            )))
        }
        Subcommand::Hn => {
            let n = n_arg(cmd)?;
            let h = h_n(&g, n)?;
            Ok(Outcome::ok(headline(
                h.to_string(),
                base_record("hn", &g).with("n", n).with("hn", h),
            )))
        }
        Subcommand::Orbits => orbits(&g, n_arg(cmd)?, &limits),
        Subcommand::Cover => cover(cmd, &spec, &g, n_arg(cmd)?, &limits),
        Subcommand::Tower => {
            let n = n_arg(cmd)?;
            let m = cmd.m.ok_or_else(|| CliError::Usage("tower needs --m".into()))?;
            let report = check_tower(&g, n, m, &limits)?;
            let failed = !report.passed;
            let mut out = Outcome::ok(check_report(vec![report_record("tower", &report)]));
            if failed {
                out.exit_code = EXIT_CHECK_FAILED;
            }
            Ok(out)
        }
        Subcommand::Verify => unreachable!("handled above"),
    }
}

fn group_arg(cmd: &Command) -> Result<&str, CliError> {
    cmd.group.as_deref().ok_or_else(|| CliError::Usage("missing --group".into()))
}

fn n_arg(cmd: &Command) -> Result<usize, CliError> {
    cmd.n.ok_or_else(|| CliError::Usage("missing --n".into()))
}

fn headline(text: String, record: Record) -> Report {
    Report {
        text: Some(text + "\n"),
        records: vec![record],
    }
}

fn base_record(command: &str, g: &FiniteGroup) -> Record {
    Record::new().with("command", command).with("group", g.name())
}

fn sequence(g: &FiniteGroup, s: &[Element]) -> String {
    let labels: Vec<String> = s.iter().map(|&a| g.label(a)).collect();
    format!("({})", labels.join(", "))
}

fn info(spec: &GroupSpec, g: &FiniteGroup) -> Report {
    let flags = structure_predicates(g);
    let record = base_record("info", g)
        .with("spec", spec.to_string())
        .with("order", g.order())
        .with("exponent", g.exponent())
        .with("abelian", flags.is_abelian)
        .with("nilpotent", flags.is_nilpotent)
        .with("solvable", flags.is_solvable)
        .with("simple", is_nonabelian_simple(g))
        .with("classes", conjugacy_classes(g).len())
        .with("rank", rank(g))
        .with("aut_order", aut_order(g))
        .with("generators", sequence(g, g.generators()));
    Report {
        text: None,
        records: vec![record],
    }
}

fn orbits(g: &FiniteGroup, n: usize, limits: &Limits) -> Result<Outcome, CliError> {
    let d = orbit_decompose(g, n, limits)?;
    let summary = base_record("orbits", g)
        .with("n", n)
        .with("gamma_count", d.gamma_count)
        .with("aut_order", d.orbit_size)
        .with("hn", d.h_n);
    let mut text = format!(
        "{} n={n}: {} generating sequences, {} orbits of size {}\n",
        g.name(),
        d.gamma_count,
        d.h_n,
        d.orbit_size
    );
    let mut records = vec![summary];
    for (i, rep) in d.representatives.iter().enumerate() {
        let s = sequence(g, rep.entries());
        let _ = writeln!(text, "{:>4}  {s}", i + 1);
        records.push(
            Record::new()
                .with("orbit", i + 1)
                .with("representative", s)
                .with("size", d.orbit_size),
        );
    }
    Ok(Outcome::ok(Report { text: Some(text), records }))
}

fn cover(cmd: &Command, spec: &GroupSpec, g: &FiniteGroup, n: usize, limits: &Limits) -> Result<Outcome, CliError> {
    let c = build_cover(g, n, limits)?;
    let mut record = base_record("cover", g)
        .with("n", n)
        .with("h", c.h())
        .with("order", c.order())
        .with("generators", c.generator_tuples.len());
    if let Some(path) = &cmd.export {
        write_file(path, &c.export_text(&spec.to_string(), cmd.elements))?;
        record.push("export", path.display().to_string());
    }
    Ok(Outcome::ok(Report {
        text: None,
        records: vec![record],
    }))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| {
        homcover::Error::Io {
            path: path.to_path_buf(),
            source,
        }
        .into()
    })
}

fn report_record(command: &str, r: &CheckReport) -> Record {
    let mut rec = Record::new()
        .with("command", command)
        .with("check", r.check.as_str())
        .with("group", r.group.as_str())
        .with("n", r.n)
        .with("status", if r.passed { "pass" } else { "fail" });
    for (k, v) in &r.details {
        rec.push(k, v.as_str());
    }
    if let Some(w) = &r.witness {
        rec.push("witness", w.as_str());
    }
    rec
}

fn error_record(check: &str, group: &str, n: usize, error: &homcover::Error) -> Record {
    Record::new()
        .with("command", "verify")
        .with("check", check)
        .with("group", group)
        .with("n", n)
        .with("status", "error")
        .with("error", error.name())
        .with("message", error.to_string())
}

/// Text rendering of check records: one status line each, with the witness
/// or error message indented below.
fn check_report(records: Vec<Record>) -> Report {
    let mut text = String::new();
    for r in &records {
        let field = |k: &str| r.get(k).map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            text,
            "{:<5} {} {}@{}",
            field("status").to_uppercase(),
            field("check"),
            field("group"),
            field("n")
        );
        for key in ["witness", "message"] {
            if r.get(key).is_some() {
                let label = if key == "witness" && field("status") == "pass" { "certificate" } else { key };
                let _ = writeln!(text, "      {label}: {}", field(key));
            }
        }
    }
    Report {
        text: Some(text),
        records,
    }
}

fn verify(cmd: &Command, limits: &Limits) -> Result<Outcome, CliError> {
    let suite: Suite = cmd.suite.parse()?;
    let entries = match (&cmd.corpus, &cmd.group) {
        (Some(path), None) => read_corpus(path)?,
        (None, Some(g)) => vec![CorpusEntry {
            spec: parse_spec(g)?,
            n: 0,
        }],
        (Some(_), Some(_)) => return Err(CliError::Usage("give --group or --corpus, not both".into())),
        (None, None) => return Err(CliError::Usage("verify needs --group or --corpus".into())),
    };
    let options = SuiteOptions {
        samples: cmd.samples,
        seed: cmd.seed,
    };
    let (mut failed, mut errored, mut capped) = (false, false, false);
    let mut records = Vec::new();
    for entry in entries {
        let n = match (entry.n, cmd.n) {
            (0, Some(n)) => n,
            (0, None) => rank(&construct_group(&entry.spec, limits)?).max(1),
            (n, _) => n,
        };
        for record in run_suite(&entry.spec, n, suite, limits, &options)? {
            match record {
                SuiteRecord::Report(r) => {
                    failed |= !r.passed;
                    records.push(report_record("verify", &r));
                }
                SuiteRecord::Error { check, group, n, error } => {
                    if error.is_cap_exceeded() {
                        capped = true;
                    } else {
                        errored = true;
                    }
                    records.push(error_record(&check, &group, n, &error));
                }
            }
        }
    }
    let exit_code = if failed {
        EXIT_CHECK_FAILED
    } else if errored {
        EXIT_USAGE
    } else if capped {
        EXIT_CAP
    } else {
        EXIT_OK
    };
    Ok(Outcome {
        report: check_report(records),
        exit_code,
    })
}

#[cfg(test)]
mod tests {
    use clap::Parser;

    use super::*;
    use crate::command::Format;

    fn run(args: &[&str]) -> Result<Outcome, CliError> {
        let mut full = vec!["homcover"];
        full.extend_from_slice(args);
        run_command(&Command::try_parse_from(full).unwrap())
    }

    #[test]
    fn hn_headline() {
        let out = run(&["hn", "--group", "C2xC3", "--n", "2"]).unwrap();
        assert_eq!(out.exit_code, EXIT_OK);
        assert_eq!(out.report.render(Format::Text), "12\n");
        assert_eq!(out.report.render(Format::Kv), "command=hn group=C2xC3 n=2 hn=12\n");
    }

    #[test]
    fn below_rank_is_zero() {
        let out = run(&["gamma-count", "--group", "C2^3", "--n", "2"]).unwrap();
        assert_eq!(out.report.render(Format::Text), "0\n");
    }

    #[test]
    fn orbit_records() {
        let out = run(&["orbits", "--group", "S3", "--n", "2"]).unwrap();
        assert_eq!(out.report.records.len(), 4);
        assert_eq!(
            out.report.render(Format::Kv).lines().next().unwrap(),
            "command=orbits group=S3 n=2 gamma_count=18 aut_order=6 hn=3"
        );
    }

    #[test]
    fn missing_arguments_are_usage_errors() {
        let e = run(&["hn", "--group", "C2"]).unwrap_err();
        assert_eq!((e.name(), e.exit_code()), ("Usage", EXIT_USAGE));
        let e = run(&["rank"]).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_USAGE);
        let e = run(&["tower", "--group", "C2", "--n", "3"]).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_USAGE);
    }

    #[test]
    fn library_errors_keep_names() {
        let e = run(&["info", "--group", "pq(3,5)"]).unwrap_err();
        assert_eq!(e.name(), "InvalidPQ");
        let e = run(&["info", "--group", "C2xx"]).unwrap_err();
        assert_eq!(e.name(), "InvalidSpec");
        let e = run(&["info", "--group", "S6", "--max-order", "100"]).unwrap_err();
        assert_eq!((e.name(), e.exit_code()), ("OrderCapExceeded", EXIT_CAP));
        let e = run(&["verify", "--group", "S3", "--suite", "nope"]).unwrap_err();
        assert_eq!(e.name(), "PreconditionViolated");
    }

    #[test]
    fn verify_exit_codes() {
        let out = run(&["verify", "--group", "pq(2,3)", "--n", "2", "--suite", "pq"]).unwrap();
        assert_eq!(out.exit_code, EXIT_OK);
        assert!(out.report.render(Format::Text).starts_with("PASS  pq_structure"));
        let out = run(&["verify", "--group", "S3", "--suite", "pq"]).unwrap();
        assert_eq!(out.exit_code, EXIT_USAGE);
        let out = run(&["verify", "--group", "S3", "--n", "2", "--suite", "tower"]).unwrap();
        assert_eq!(out.exit_code, EXIT_CAP);
    }
}
