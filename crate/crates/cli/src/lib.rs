//! Command-line front end for `abelk`.
//!
//! [`run`] does all the work and returns the exit code together with the
//! report, so the binary is a thin wrapper and tests can drive it directly.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use abelk::format::{parse_gallery_config, parse_group_file, parse_witness_file, GroupFile};
use abelk::gallery::{builtin_gallery, default_config, verify_gallery, Status};
use abelk::tower::{rank1_type, GroupElement};
use abelk::uginv::{as_tower, compare_k1, compare_unitary, witness_report, ComparisonResult, Witness};
use abelk::wedge::{k0, k1, KGroupDesc};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_GALLERY_FAIL: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "abelk", version, about = "Invariants of abelian group C*-algebras")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// K1 of the group C*-algebra.
    K1 { group: PathBuf },
    /// K0 of the group C*-algebra.
    K0 { group: PathBuf },
    /// Type of a rank-one torsion-free part.
    Type { group: PathBuf },
    /// p-height (with --prime) or full characteristic of an element.
    Height {
        group: PathBuf,
        #[arg(long)]
        prime: Option<u64>,
        /// Stage coordinates, comma separated; defaults to the first basis vector.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        element: Option<Vec<i64>>,
        #[arg(long, default_value_t = 0)]
        stage: usize,
    },
    /// Compare the unitary-group invariants of two groups.
    CompareUnitary {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        witness: Vec<PathBuf>,
    },
    /// Compare K1 of two groups.
    CompareK1 {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        witness: Vec<PathBuf>,
    },
    /// Check a witness file.
    CheckWitness {
        #[arg(long)]
        witness: PathBuf,
    },
    /// Verify the built-in gallery of examples.
    VerifyGallery {
        /// Rank-2 pair configuration; `none` leaves the pair entries out.
        #[arg(long)]
        gallery_config: Option<PathBuf>,
    },
}

/// One verdict line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub subject: String,
    pub verdict: String,
    pub evidence: String,
}

/// Everything a command produced, in a form that serialises to JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<String>,
    pub verdicts: Vec<Verdict>,
    pub notices: Vec<String>,
    pub summary: Option<String>,
    pub timing_us: u64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialise")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for n in &self.notices {
            let _ = writeln!(out, "notice: {n}");
        }
        for v in &self.verdicts {
            if v.evidence.is_empty() {
                let _ = writeln!(out, "{}: {}", v.subject, v.verdict);
            } else {
                let _ = writeln!(out, "{}: {} ({})", v.subject, v.verdict, v.evidence);
            }
        }
        if let Some(s) = &self.summary {
            let _ = writeln!(out, "{s}");
        }
        out
    }
}

/// Result of one invocation.
#[derive(Clone, Debug)]
pub struct Run {
    pub exit_code: i32,
    pub report: Option<Report>,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    fn failure(code: i32, stdout: String, stderr: String) -> Self {
        Run { exit_code: code, report: None, stdout, stderr }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Run
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Run::failure(EXIT_INPUT_ERROR, String::new(), text)
            } else {
                Run::failure(EXIT_OK, text, String::new())
            };
        }
    };
    let start = Instant::now();
    match execute(&cli.command) {
        Ok((mut report, code)) => {
            report.timing_us = u64::try_from(start.elapsed().as_micros()).unwrap_or(u64::MAX);
            let stdout = match cli.format {
                OutputFormat::Text => report.to_text(),
                OutputFormat::Json => report.to_json() + "\n",
            };
            Run { exit_code: code, report: Some(report), stdout, stderr: String::new() }
        }
        Err(message) => Run::failure(EXIT_INPUT_ERROR, String::new(), format!("error: {message}\n")),
    }
}

type Outcome = Result<(Report, i32), String>;

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_group(path: &Path) -> Result<GroupFile, String> {
    parse_group_file(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_witness(path: &Path) -> Result<Witness, String> {
    parse_witness_file(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn input(path: &Path, g: &GroupFile) -> String {
    format!("{} ({}: {})", path.display(), g.name, g.desc)
}

fn report(command: &str, inputs: Vec<String>, verdicts: Vec<Verdict>) -> Report {
    Report { command: command.into(), inputs, verdicts, notices: Vec::new(), summary: None, timing_us: 0 }
}

fn verdict(subject: impl Into<String>, verdict: impl Into<String>, evidence: impl Into<String>) -> Verdict {
    Verdict { subject: subject.into(), verdict: verdict.into(), evidence: evidence.into() }
}

fn comparison(subject: String, r: &ComparisonResult) -> Verdict {
    verdict(subject, r.verdict(), r.evidence())
}

fn execute(command: &Command) -> Outcome {
    match command {
        Command::K1 { group } | Command::K0 { group } => {
            let g = load_group(group)?;
            let (name, value) = match command {
                Command::K1 { .. } => ("k1", k1(&g.desc)),
                _ => ("k0", k0(&g.desc)),
            };
            let value = value.map_err(|e| e.to_string())?;
            let evidence = match value {
                KGroupDesc::FreeOfRank(_) => String::new(),
                _ => format!("rank {}", value.rank()),
            };
            let v = verdict(format!("{name}({})", g.name), value.to_string(), evidence);
            Ok((report(name, vec![input(group, &g)], vec![v]), EXIT_OK))
        }
        Command::Type { group } => {
            let g = load_group(group)?;
            let t = as_tower(&g.desc.free_part).map_err(|e| e.to_string())?;
            let ty = rank1_type(&t).map_err(|e| e.to_string())?;
            let v = verdict(format!("type({})", g.name), ty.to_string(), ty.canonical().to_string());
            Ok((report("type", vec![input(group, &g)], vec![v]), EXIT_OK))
        }
        Command::Height { group, prime, element, stage } => {
            let g = load_group(group)?;
            let t = as_tower(&g.desc.free_part).map_err(|e| e.to_string())?;
            let e = match element {
                Some(coords) if coords.len() != t.rank() => {
                    return Err(format!("element has {} coordinates, group has rank {}", coords.len(), t.rank()))
                }
                Some(coords) => GroupElement::from_i64(*stage, coords),
                None if t.rank() == 0 => return Err("the torsion-free part is trivial".into()),
                None => GroupElement { stage: *stage, ..GroupElement::basis(t.rank(), 0) },
            };
            let coords: Vec<String> = e.coords.iter().map(ToString::to_string).collect();
            let subject = format!("{}[stage {}: ({})]", g.name, e.stage, coords.join(", "));
            let v = match prime {
                Some(p) => {
                    let h = t.height(&e, *p).map_err(|e| e.to_string())?;
                    verdict(format!("height_{p}({subject})"), h.to_string(), "")
                }
                None => {
                    let c = t.characteristic(&e).map_err(|e| e.to_string())?;
                    verdict(format!("characteristic({subject})"), c.to_string(), "unlisted primes have height 0")
                }
            };
            Ok((report("height", vec![input(group, &g)], vec![v]), EXIT_OK))
        }
        Command::CompareUnitary { first, second, witness } | Command::CompareK1 { first, second, witness } => {
            let (a, b) = (load_group(first)?, load_group(second)?);
            let witnesses: Vec<Witness> = witness.iter().map(|p| load_witness(p)).collect::<Result<_, _>>()?;
            let (name, r) = match command {
                Command::CompareUnitary { .. } => ("compare-unitary", compare_unitary(&a.desc, &b.desc, &witnesses)),
                _ => ("compare-k1", compare_k1(&a.desc, &b.desc, &witnesses)),
            };
            let mut inputs = vec![input(first, &a), input(second, &b)];
            inputs.extend(witness.iter().map(|p| p.display().to_string()));
            Ok((report(name, inputs, vec![comparison(format!("{} vs {}", a.name, b.name), &r)]), EXIT_OK))
        }
        Command::CheckWitness { witness } => {
            let w = load_witness(witness)?;
            let r = witness_report(&w).map_err(|e| e.to_string())?;
            let evidence = match &r.first_violation {
                Some(v) => v.clone(),
                None if r.periodic_certificate => format!("{} stages checked; stage maps repeat", r.stages_checked),
                None => format!("{} stages checked", r.stages_checked),
            };
            let v =
                verdict(format!("witness {}", witness.display()), if r.valid { "valid" } else { "invalid" }, evidence);
            Ok((report("check-witness", vec![witness.display().to_string()], vec![v]), EXIT_OK))
        }
        Command::VerifyGallery { gallery_config } => {
            let (config, source) = match gallery_config {
                Some(p) if p.as_os_str() == "none" => (None, "none".to_string()),
                Some(p) => {
                    let cfg = parse_gallery_config(&read(p)?).map_err(|e| format!("{}: {e}", p.display()))?;
                    (Some(cfg), p.display().to_string())
                }
                None => (Some(default_config()), "shipped configuration".to_string()),
            };
            let (entries, notices) = builtin_gallery(config.as_ref());
            let g = verify_gallery(&entries, &notices);
            let verdicts = g
                .claims
                .iter()
                .map(|c| verdict(format!("{} {}", c.entry, c.claim), c.status.to_string(), c.evidence.clone()))
                .collect();
            let mut r = report("verify-gallery", vec![source], verdicts);
            r.notices = g.notices.clone();
            r.summary = Some(format!(
                "{} passed, {} failed, {} skipped, {} unknown",
                g.count(Status::Pass),
                g.count(Status::Fail),
                g.count(Status::Skipped),
                g.count(Status::Unknown)
            ));
            Ok((r, if g.has_failures() { EXIT_GALLERY_FAIL } else { EXIT_OK }))
        }
    }
}
