use std::fmt;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Subcommand {
    Info,
    Rank,
    GammaCount,
    Hn,
    Orbits,
    Cover,
    Tower,
    Verify,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Kv,
    Json,
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

/// Generating sequences, automorphism orbits and homogeneous covers of
/// small finite groups.
#[derive(Clone, Debug, PartialEq, Eq, Parser)]
#[command(name = "homcover", version)]
pub struct Command {
    /// What to compute.
    #[arg(value_enum)]
    pub subcommand: Subcommand,

    /// Group spec, e.g. C2xC3, S4, pq(2,3), perm:(1 2 3);(1 2), table:path.
    #[arg(long, short = 'g')]
    pub group: Option<String>,

    /// Sequence length.
    #[arg(long, short = 'n')]
    pub n: Option<usize>,

    /// Target sequence length for `tower`.
    #[arg(long, short = 'm')]
    pub m: Option<usize>,

    /// Write the cover in export format to this path.
    #[arg(long)]
    pub export: Option<PathBuf>,

    /// Include the element list in the cover export.
    #[arg(long)]
    pub elements: bool,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[arg(long)]
    pub max_order: Option<usize>,

    /// Closure cap; overrides HOMCOVER_MAX_CLOSURE.
    #[arg(long)]
    pub max_closure: Option<usize>,

    #[arg(long)]
    pub max_candidates: Option<u128>,

    /// Upper bound on worker threads.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,

    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Sampled pairs per lifting check.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,

    /// Checks to run for `verify`.
    #[arg(long, default_value = "all")]
    pub suite: String,

    /// Corpus file of `spec[@n]` lines for `verify`.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
}

impl Command {
    /// Arguments that parse back to `self`, program name first.
    pub fn to_args(&self) -> Vec<String> {
        let mut out = vec!["homcover".to_string(), value_name(self.subcommand)];
        let mut push = |flag: &str, value: String| {
            out.push(format!("--{flag}"));
            out.push(value);
        };
        if let Some(g) = &self.group {
            push("group", g.clone());
        }
        if let Some(n) = self.n {
            push("n", n.to_string());
        }
        if let Some(m) = self.m {
            push("m", m.to_string());
        }
        if let Some(p) = &self.export {
            push("export", p.display().to_string());
        }
        push("format", value_name(self.format));
        if let Some(v) = self.max_order {
            push("max-order", v.to_string());
        }
        if let Some(v) = self.max_closure {
            push("max-closure", v.to_string());
        }
        if let Some(v) = self.max_candidates {
            push("max-candidates", v.to_string());
        }
        if let Some(v) = self.threads {
            push("threads", v.to_string());
        }
        push("seed", self.seed.to_string());
        push("samples", self.samples.to_string());
        push("suite", self.suite.clone());
        if let Some(p) = &self.corpus {
            push("corpus", p.display().to_string());
        }
        if self.elements {
            out.push("--elements".to_string());
        }
        out
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args = self.to_args();
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if a.is_empty() || a.chars().any(|c| c.is_whitespace() || "'\"();\\$`".contains(c)) {
                write!(f, "'{}'", a.replace('\'', r"'\''"))?;
            } else {
                write!(f, "{a}")?;
            }
        }
        Ok(())
    }
}
