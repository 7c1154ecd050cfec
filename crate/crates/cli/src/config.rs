use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use lhode::derivation::{instances, Instance};
use lhode::family::LHFamily;
use lhode::reduction::Format;
use lhode::Rational;

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Family file, or the name of a bundled family.
    #[arg(long)]
    pub family: String,

    /// `all`, or one residue of the family's period.
    #[arg(long, default_value = "all")]
    pub branch: String,

    /// Largest polynomial index the oracle checks.
    #[arg(long, default_value_t = 8)]
    pub n_max: i64,

    /// Numeric value for a parameter, `name=p/q`. Repeatable.
    #[arg(long = "assign", value_name = "NAME=P/Q")]
    pub assign: Vec<String>,

    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    /// Directory for artifact files. Without it everything goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Reduced equations to compare against (verify and all).
    #[arg(long)]
    pub golden: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Latex,
}

/// Everything a command needs, validated.
pub struct RunConfig {
    pub family: LHFamily,
    pub instances: Vec<Instance>,
    pub n_max: i64,
    pub assign: BTreeMap<String, Rational>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub golden: Option<PathBuf>,
}

impl RunConfig {
    pub fn ext(&self) -> &'static str {
        match self.format {
            Format::Text => "txt",
            Format::Latex => "tex",
        }
    }
}

pub fn load_family(spec: &str) -> Result<LHFamily, String> {
    let path = Path::new(spec);
    if path.exists() {
        return LHFamily::load(path).map_err(|e| format!("{}: {e}", path.display()));
    }
    LHFamily::bundled(spec).map_err(|_| {
        format!(
            "`{spec}` is neither a readable file nor a bundled family ({})",
            lhode::family::bundled_names().join(", ")
        )
    })
}

fn parse_assignment(item: &str, family: &LHFamily) -> Result<(String, Rational), String> {
    let (name, value) = item
        .split_once('=')
        .ok_or_else(|| format!("--assign `{item}`: expected name=p/q"))?;
    let name = name.trim();
    if !family.params.iter().any(|p| p == name) {
        return Err(format!("--assign `{item}`: `{name}` is not a parameter of {}", family.name));
    }
    let value = Rational::from_str(value.trim()).map_err(|_| format!("--assign `{item}`: `{value}` is not a rational"))?;
    Ok((name.to_string(), value))
}

pub fn build(opts: &Opts) -> Result<RunConfig, String> {
    let family = load_family(&opts.family)?;
    let residues = match opts.branch.as_str() {
        "all" => None,
        r => {
            let r: i64 = r.parse().map_err(|_| format!("--branch `{r}`: expected `all` or a residue"))?;
            if !(0..family.modulus()).contains(&r) {
                return Err(format!("--branch {r}: {} has period {}", family.name, family.modulus()));
            }
            Some(vec![r])
        }
    };
    let instances = instances(&family, residues.as_deref()).map_err(|e| e.to_string())?;
    if opts.n_max < 0 {
        return Err("--n-max must be nonnegative".into());
    }
    let assign = opts
        .assign
        .iter()
        .map(|a| parse_assignment(a, &family))
        .collect::<Result<BTreeMap<_, _>, _>>()?;
    Ok(RunConfig {
        family,
        instances,
        n_max: opts.n_max,
        assign,
        format: match opts.format {
            OutputFormat::Text => Format::Text,
            OutputFormat::Latex => Format::Latex,
        },
        out: opts.out.clone(),
        golden: opts.golden.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assignments_parse_as_exact_rationals() {
        let f = LHFamily::bundled("hermite_case2").unwrap();
        let (name, v) = parse_assignment(" rho = -6/4 ", &f).unwrap();
        assert_eq!(name, "rho");
        assert_eq!(v, Rational::new((-3).into(), 2.into()));
        assert!(parse_assignment("rho=0.5", &f).is_err());
        assert!(parse_assignment("tau=1", &f).is_err());
    }
}
