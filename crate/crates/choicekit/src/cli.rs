//! The `choicekit` command line.
//!
//! Exit codes: 0 for a positive verdict, 1 for a negative one, 2 for bad
//! input, 3 when a resource limit is hit and 4 when `--verify` finds the
//! two feasibility procedures disagreeing.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Mutex;

use choicekit_core::assessment::{AssessmentFamily, Membership, NaturalExtension, DEFAULT_SELECTION_LIMIT};
use choicekit_core::choice::{Binarity, ChoiceModel};
use choicekit_core::cone::ProperCone;
use choicekit_core::geometry::set_query_observer;
use choicekit_core::oracle::fm_conic_feasible;
use choicekit_core::rules::{
    archimedean_exact, coherent_exact, compatible_with, instantiate_scheme, CoherenceVariant, Compatibility, RuleSet,
    Scheme,
};
use choicekit_core::{Error, Vector};
use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::format::{
    self, AssessmentJson, ConeJson, FormatError, ModelJson, ParsedModel, OptionSetJson, RulesJson, SchemeParamsJson,
};
use crate::parallel;

pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_LIMIT: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "choicekit", version, about = "Choice functions from sets of strict partial vector orders")]
pub struct Cli {
    /// Replay every feasibility decision through Fourier-Motzkin elimination.
    #[arg(long, global = true)]
    pub verify: bool,
    /// Upper bound on enumerated selection maps.
    #[arg(long, global = true, env = "CHOICEKIT_MAX_SELECTIONS", default_value_t = DEFAULT_SELECTION_LIMIT)]
    pub max_selections: u128,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Strict,
    Weak,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Is the cone blunt?
    CheckProper { cone: PathBuf },
    /// Options chosen from a finite set.
    Choose { model: PathBuf, options: PathBuf },
    /// Membership of an option set in the natural extension of an assessment.
    Extend {
        assessment: PathBuf,
        options: PathBuf,
        /// Print the refuting selection cone for non-members.
        #[arg(long)]
        certificate: bool,
    },
    /// Does the assessment avoid the empty set?
    Consistent { assessment: PathBuf },
    /// The selection cones of an assessment as a cones model.
    Represent { assessment: PathBuf },
    /// Rule compatibility of a model's rejection sets.
    CheckRules { model: PathBuf, rules: PathBuf },
    /// Does the cone contain every uniformly positive option?
    Coherent {
        cone: PathBuf,
        #[arg(long, value_enum, default_value_t = Variant::Strict)]
        variant: Variant,
    },
    /// Can every member of the cone be lowered by a positive constant?
    Archimedean { cone: PathBuf },
    /// Adds the rules obtained by joining a finite set to every rule with premises.
    Monotonify { rules: PathBuf, set: PathBuf },
    /// The order read off a binary model's pairwise choices on the probes.
    ExtractOrder { model: PathBuf, probes: PathBuf },
    /// Substitutes probes into a rule scheme.
    Instantiate { scheme: String, params: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Input(String),
    Limit(String),
    Verification(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Input(_) => EXIT_INPUT,
            Self::Limit(_) => EXIT_LIMIT,
            Self::Verification(_) => EXIT_VERIFY,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Input(m) | Self::Limit(m) | Self::Verification(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CombinatorialLimit { .. } | Error::VariableLimit { .. } => Self::Limit(e.to_string()),
            _ => Self::Input(e.to_string()),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Self::Input(e.0)
    }
}

/// A verdict with its two renderings.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub positive: bool,
}

impl Report {
    fn verdict(word: &str, positive: bool) -> Self {
        Self {
            text: format!("{word}\n"),
            json: json!({ "verdict": word }),
            positive,
        }
    }

    /// A JSON document printed as such in both formats.
    fn document(value: Value) -> Self {
        Self {
            text: format::to_pretty(&value),
            json: value,
            positive: true,
        }
    }

    pub fn render(&self, output: OutputFormat) -> String {
        match output {
            OutputFormat::Text => self.text.clone(),
            OutputFormat::Json => format::to_pretty(&self.json),
        }
    }
}

struct Context {
    limit: u128,
    workers: usize,
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    format::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_cone(path: &Path) -> Result<ProperCone, Failure> {
    Ok(read::<ConeJson>(path)?.to_cone()?)
}

fn to_value<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("JSON values always serialize")
}

impl Context {
    fn extension(&self, family: &AssessmentFamily) -> Result<NaturalExtension, Failure> {
        Ok(family.natural_extension_by(self.limit, |selections, cone| {
            parallel::map(self.workers, selections, |s| cone(s))
        })?)
    }

    fn model(&self, path: &Path) -> Result<ChoiceModel, Failure> {
        Ok(match read::<ModelJson>(path)?.to_model()? {
            ParsedModel::Cones(cones) => ChoiceModel::from_cones(cones)?,
            ParsedModel::Assessment(family) => ChoiceModel::Assessment(self.extension(&family)?),
        })
    }

    fn run(&self, command: &Command) -> Result<Report, Failure> {
        match command {
            Command::CheckProper { cone } => {
                let file: ConeJson = read(cone)?;
                let generators = file.generators()?;
                Ok(match ProperCone::new(file.dim, generators) {
                    Ok(c) => Report {
                        json: json!({ "verdict": "proper", "cone": to_value(&ConeJson::from_cone(&c)) }),
                        ..Report::verdict("proper", true)
                    },
                    Err(Error::NotBlunt) => Report::verdict("not-blunt", false),
                    Err(e) => return Err(e.into()),
                })
            }
            Command::Choose { model, options } => {
                let model = self.model(model)?;
                let mut options = read::<OptionSetJson>(options)?.to_points()?;
                if options.is_empty() {
                    return Err(Error::EmptyOptionSet.into());
                }
                options.sort();
                options.dedup();
                let rejected = parallel::map(self.workers, &options, |u| model.is_rejected(&options, u));
                let mut chosen = Vec::new();
                for (u, rejected) in options.iter().zip(rejected) {
                    if !rejected? {
                        chosen.push(u.clone());
                    }
                }
                Ok(Report {
                    text: chosen.iter().map(|u| format!("{u}\n")).collect(),
                    json: to_value(&format::vectors_to_json(&chosen)),
                    positive: true,
                })
            }
            Command::Extend {
                assessment,
                options,
                certificate,
            } => {
                let family = read::<AssessmentJson>(assessment)?.to_family()?;
                let set = read::<OptionSetJson>(options)?.to_set()?;
                let ext = self.extension(&family)?;
                Ok(match ext.membership(&set)? {
                    Membership::Member => Report::verdict("member", true),
                    Membership::NonMember { certificate: cone } => {
                        let mut report = Report::verdict("non-member", false);
                        if *certificate {
                            report.text.push_str(&format!("certificate: {cone}\n"));
                            report.json["certificate"] = to_value(&ConeJson::from_cone(&cone));
                        }
                        report
                    }
                })
            }
            Command::Consistent { assessment } => {
                let family = read::<AssessmentJson>(assessment)?.to_family()?;
                let cones = family.selection_cones_by(self.limit, |selections, cone| {
                    parallel::map(self.workers, selections, |s| cone(s))
                })?;
                let consistent = family.basis().is_empty() || !cones.is_empty();
                Ok(match consistent {
                    true => Report::verdict("consistent", true),
                    false => Report::verdict("inconsistent", false),
                })
            }
            Command::Represent { assessment } => {
                let family = read::<AssessmentJson>(assessment)?.to_family()?;
                let model = ChoiceModel::Assessment(self.extension(&family)?);
                Ok(Report::document(to_value(&ModelJson::from_cones(&model.represent()))))
            }
            Command::CheckRules { model, rules } => {
                let model = self.model(model)?;
                let rules = read::<RulesJson>(rules)?.to_rules()?;
                if rules.dim() != model.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: model.dim(),
                        found: rules.dim(),
                    }
                    .into());
                }
                let verdicts = parallel::map(self.workers, rules.rules(), |rule| {
                    compatible_with(&model, &RuleSet::new(rules.dim(), vec![rule.clone()])?)
                });
                for (index, verdict) in verdicts.into_iter().enumerate() {
                    if let Compatibility::Violated { .. } = verdict? {
                        let mut report = Report::verdict("incompatible", false);
                        report.text.push_str(&format!("violated rule {index}: {}\n", rules.rules()[index]));
                        report.json["rule"] = json!(index);
                        return Ok(report);
                    }
                }
                Ok(Report::verdict("compatible", true))
            }
            Command::Coherent { cone, variant } => {
                let variant = match variant {
                    Variant::Strict => CoherenceVariant::Strict,
                    Variant::Weak => CoherenceVariant::Weak,
                };
                let holds = coherent_exact(&read_cone(cone)?, variant)?;
                Ok(Report::verdict(if holds { "true" } else { "false" }, holds))
            }
            Command::Archimedean { cone } => {
                let holds = archimedean_exact(&read_cone(cone)?)?;
                Ok(Report::verdict(if holds { "true" } else { "false" }, holds))
            }
            Command::Monotonify { rules, set } => {
                let rules = read::<RulesJson>(rules)?.to_rules()?;
                let extra = read::<OptionSetJson>(set)?.to_points()?;
                let grown = rules.monotonified(&[extra])?;
                Ok(Report::document(to_value(&RulesJson::from_rules(&grown))))
            }
            Command::ExtractOrder { model, probes } => {
                let model = self.model(model)?;
                let probes = read::<OptionSetJson>(probes)?.to_points()?;
                match model.extract_order(&probes) {
                    Ok(cone) => Ok(Report::document(to_value(&ConeJson::from_cone(&cone)))),
                    Err(Error::NotBinary) => {
                        let Binarity::Counterexample { set, option } = model.is_binary_on(&probes, probes.len())? else {
                            unreachable!("extract_order reported a binarity failure");
                        };
                        let set_text = choicekit_core::rules::OptionSet::Finite(set.clone());
                        Ok(Report {
                            text: format!("not-binary\nset: {set_text}\noption: {option}\n"),
                            json: json!({
                                "verdict": "not-binary",
                                "set": to_value(&format::vectors_to_json(&set)),
                                "option": to_value(&format::vector_to_json(&option)),
                            }),
                            positive: false,
                        })
                    }
                    Err(e) => Err(e.into()),
                }
            }
            Command::Instantiate { scheme, params } => {
                let scheme = Scheme::from_str(scheme)?;
                let params: SchemeParamsJson = read(params)?;
                let rules = instantiate_scheme(scheme, params.dim, &params.to_params()?)?;
                Ok(Report::document(to_value(&RulesJson::from_rules(&rules))))
            }
        }
    }
}

type Query = (Vec<Vector>, Vector, bool);

static QUERIES: Mutex<Vec<Query>> = Mutex::new(Vec::new());

fn record_query(generators: &[Vector], target: &Vector, verdict: bool) {
    let mut log = QUERIES.lock().unwrap_or_else(|e| e.into_inner());
    log.push((generators.to_vec(), target.clone(), verdict));
}

/// Checks every distinct logged query against elimination. Returns the
/// number checked.
fn replay(queries: Vec<Query>) -> Result<usize, Failure> {
    let distinct: BTreeSet<Query> = queries.into_iter().collect();
    for (generators, target, verdict) in &distinct {
        if fm_conic_feasible(generators, target)? != *verdict {
            return Err(Failure::Verification(format!(
                "verification failed: simplex and elimination disagree on {target} against {} generators",
                generators.len()
            )));
        }
    }
    Ok(distinct.len())
}

/// Runs a parsed command line and returns the report to print.
pub fn run(cli: &Cli) -> Result<Report, Failure> {
    let ctx = Context {
        limit: cli.max_selections,
        workers: cli.workers.unwrap_or_else(parallel::available_workers),
    };
    if !cli.verify {
        return ctx.run(&cli.command);
    }
    QUERIES.lock().unwrap_or_else(|e| e.into_inner()).clear();
    set_query_observer(Some(record_query));
    let result = ctx.run(&cli.command);
    set_query_observer(None);
    let queries = std::mem::take(&mut *QUERIES.lock().unwrap_or_else(|e| e.into_inner()));
    let checked = replay(queries)?;
    eprintln!("verified {checked} feasibility queries by elimination");
    result
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(cli.output));
            if report.positive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_NEGATIVE)
            }
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
