use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "hesse-lab", version, about = "Exact analysis of hypersurfaces with vanishing Hessian")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Root seed; every random choice is derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Sampling domain for probabilistic tests: `rational` or `p:<modulus>`.
    #[arg(long, global = true, default_value = "p:2305843009213693951")]
    pub field: FieldChoice,
    /// Force symbolic Hessian determinants.
    #[arg(long, global = true)]
    pub symbolic: bool,
    /// Trials for probabilistic Hessian tests.
    #[arg(long, global = true, default_value_t = hesse_core::hessian::DEFAULT_TRIALS)]
    pub trials: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pipeline on one form.
    Analyze {
        #[arg(long)]
        poly: String,
        /// Largest degree searched for a polar relation.
        #[arg(long, default_value_t = hesse_core::psi::DEFAULT_MAX_RELATION_DEGREE)]
        max_relation_degree: u32,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Build a Gordan-Noether instance.
    Generate(GenerateArgs),
    /// Run an invariant suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Instances per suite; each suite has its own default.
        #[arg(long)]
        count: Option<usize>,
        /// Corrupt the psi map to check that the suites notice.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Write a catalog of seeded instances.
    Catalog {
        /// Skeletons as `n,t,m,hdeg,psideg,d` separated by `;`.
        #[arg(long)]
        types: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    /// Explicit instance data (JSON); overrides the skeleton flags.
    #[arg(long, value_name = "PATH")]
    pub params: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 2)]
    pub hdeg: u32,
    #[arg(long, default_value_t = 1)]
    pub psideg: u32,
    #[arg(long, default_value_t = 3)]
    pub d: u32,
    /// Write the instance (data and form) to this file.
    #[arg(long, value_name = "PATH")]
    pub instance: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lowdim,
    Gn,
    Psi,
    P4,
    Kernels,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldChoice {
    Rational,
    Prime(u64),
}

impl FromStr for FieldChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "rational" {
            return Ok(FieldChoice::Rational);
        }
        let p = s
            .strip_prefix("p:")
            .ok_or_else(|| format!("expected `rational` or `p:<modulus>`, got `{s}`"))?;
        let p: u64 = p.parse().map_err(|e| format!("bad modulus `{p}`: {e}"))?;
        hesse_core::PrimeField::new(p).map_err(|e| e.to_string())?;
        Ok(FieldChoice::Prime(p))
    }
}

impl std::fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldChoice::Rational => f.write_str("rational"),
            FieldChoice::Prime(p) => write!(f, "p:{p}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_choices() {
        assert_eq!("rational".parse::<FieldChoice>(), Ok(FieldChoice::Rational));
        assert_eq!("p:2305843009213693951".parse::<FieldChoice>(), Ok(FieldChoice::Prime(2305843009213693951)));
        assert!("p:7".parse::<FieldChoice>().is_err());
        assert!("p:2305843009213693953".parse::<FieldChoice>().is_err());
        assert!("q".parse::<FieldChoice>().is_err());
    }

    #[test]
    fn parses_verify() {
        let cli = Cli::try_parse_from(["hesse-lab", "verify", "--suite", "p4", "--seed", "3"]).unwrap();
        assert_eq!(cli.common.seed, 3);
        assert!(matches!(cli.command, Command::Verify { suite: Suite::P4, count: None, .. }));
        assert!(Cli::try_parse_from(["hesse-lab", "verify", "--suite", "nope"]).is_err());
    }
}
