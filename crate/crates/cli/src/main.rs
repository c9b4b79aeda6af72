mod plan;
mod recipe;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mrd_core::anticode::verify_mrd_by_anticodes;
use mrd_core::code::{coset_decomposition, distinct_members};
use mrd_core::invariants::{signature, Signature};
use mrd_core::io::{read_code, write_code};
use mrd_core::switching::{apply_with_decomposition, enumerate_switched};
use mrd_core::{CodeParams, Error, RankCode};

#[derive(Parser)]
#[command(name = "mrdcode", version, about = "Build, switch and verify MRD codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Level::Cardinality)]
    level: Level,
    /// Largest code enumerated member by member.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    cap_members: u128,
    /// Largest number of anticode membership checks.
    #[arg(long, global = true, default_value_t = 1 << 24)]
    cap_anticode: u128,
    /// Largest number of census plans.
    #[arg(long, global = true, default_value_t = 1 << 12)]
    cap_census: u128,
    /// Reserved for randomized selection. No command draws randomness yet.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code from a recipe file.
    Construct { recipe: PathBuf },
    /// Check a code file for the MRD property.
    Verify { code: PathBuf },
    /// Apply a switch plan to a code file.
    Switch { code: PathBuf, plan: PathBuf },
    /// Replace every coset by each combination of the given MRD codes.
    Census {
        code: PathBuf,
        #[arg(long)]
        rows: usize,
        /// Replacement code files, one per choice.
        #[arg(long = "choice", required = true)]
        choices: Vec<PathBuf>,
        /// Stop after this many plans.
        #[arg(long)]
        limit: Option<u128>,
    },
    /// Signatures and pairwise inequivalence certificates.
    Invariants {
        #[arg(required = true)]
        codes: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Level {
    Cardinality,
    AnticodeOracle,
}

/// An error with its exit code.
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn io(path: &Path, e: std::io::Error) -> Failure {
        Failure { code: 4, message: format!("{}: {e}", path.display()) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Parse(_) => 4,
            Error::TooLarge { .. } => 5,
            Error::NotMrdInput | Error::SubcodeNotMrd | Error::SwitchedNotMrd => 3,
            _ => 2,
        };
        Failure { code, message: format!("{e:?}: {e}") }
    }
}

#[derive(Serialize)]
struct Verdict {
    params: CodeParams,
    kind: &'static str,
    cardinality: u128,
    mindist: Option<usize>,
    mrd_cardinality: bool,
    mrd_anticode: Option<bool>,
    anticodes_checked: Option<u128>,
}

impl Verdict {
    fn passes(&self) -> bool {
        self.mrd_cardinality && self.mrd_anticode != Some(false)
    }
}

fn verify(cli: &Cli, c: &RankCode) -> Result<Verdict, Failure> {
    let cardinality = c.cardinality();
    if cardinality > cli.cap_members {
        return Err(Error::TooLarge { what: "code members", needed: cardinality, cap: cli.cap_members }.into());
    }
    let mindist = if cardinality >= 2 { Some(c.min_rank_distance()?) } else { None };
    let (mrd_anticode, anticodes_checked) = match cli.level {
        Level::Cardinality => (None, None),
        Level::AnticodeOracle => {
            let v = verify_mrd_by_anticodes(c, cli.cap_anticode)?;
            (Some(v.mrd), Some(v.anticodes_checked))
        }
    };
    Ok(Verdict {
        params: c.params(),
        kind: if c.is_linear() { "linear" } else { "explicit" },
        cardinality,
        mindist,
        mrd_cardinality: c.is_mrd(),
        mrd_anticode,
        anticodes_checked,
    })
}

fn load(path: &Path) -> Result<RankCode, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    Ok(read_code(&text)?)
}

fn save(cli: &Cli, name: &str, text: &str) -> Result<String, Failure> {
    fs::create_dir_all(&cli.out).map_err(|e| Failure::io(&cli.out, e))?;
    let path = cli.out.join(name);
    fs::write(&path, text).map_err(|e| Failure::io(&path, e))?;
    Ok(name.to_string())
}

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

fn not_mrd(what: &str) -> Failure {
    Failure { code: 3, message: format!("{what} is not MRD") }
}

fn construct(cli: &Cli, recipe: &Path) -> Result<String, Failure> {
    #[derive(Serialize)]
    struct Report {
        construction: String,
        dim: Option<usize>,
        code: Verdict,
        code_file: String,
        subcode: Option<Verdict>,
        subcode_file: Option<String>,
    }
    let r = recipe::Recipe::read(recipe)?;
    let built = r.build()?;
    let code_file = save(cli, "code.mrd", &write_code(&built.code))?;
    let (subcode, subcode_file) = match &built.subcode {
        Some(s) => (Some(verify(cli, s)?), Some(save(cli, "subcode.mrd", &write_code(s))?)),
        None => (None, None),
    };
    let report = Report {
        construction: r.construction.clone(),
        dim: built.code.dim(),
        code: verify(cli, &built.code)?,
        code_file,
        subcode,
        subcode_file,
    };
    let json = to_json(&report);
    save(cli, "report.json", &json)?;
    if !report.code.passes() || report.subcode.as_ref().is_some_and(|s| !s.passes()) {
        print!("{json}");
        return Err(not_mrd("constructed code"));
    }
    Ok(json)
}

fn verify_cmd(cli: &Cli, path: &Path) -> Result<String, Failure> {
    let v = verify(cli, &load(path)?)?;
    let json = to_json(&v);
    if !v.passes() {
        print!("{json}");
        return Err(not_mrd(&path.display().to_string()));
    }
    Ok(json)
}

fn switch(cli: &Cli, code: &Path, plan: &Path) -> Result<String, Failure> {
    #[derive(Serialize)]
    struct Report {
        rows: usize,
        cosets: usize,
        output: String,
        verdict: Verdict,
    }
    let c = load(code)?;
    let plan = plan::read_plan(plan, &c)?;
    let dec = coset_decomposition(&c, plan.rows)?;
    if plan.directives.len() != dec.cosets.len() {
        return Err(Error::Parse(format!(
            "plan has {} directives for {} cosets",
            plan.directives.len(),
            dec.cosets.len()
        ))
        .into());
    }
    let switched = apply_with_decomposition(&c, &dec, &plan)?;
    let output = save(cli, "switched.mrd", &write_code(&switched))?;
    let verdict = verify(cli, &switched)?;
    if !verdict.passes() {
        return Err(Error::SwitchedNotMrd.into());
    }
    Ok(to_json(&Report { rows: plan.rows, cosets: dec.cosets.len(), output, verdict }))
}

fn census(cli: &Cli, code: &Path, rows: usize, choices: &[PathBuf], limit: Option<u128>) -> Result<String, Failure> {
    #[derive(Serialize)]
    struct Entry {
        index: usize,
        choice: Vec<usize>,
        file: String,
        signature: Signature,
    }
    #[derive(Serialize)]
    struct Manifest {
        rows: usize,
        cosets: usize,
        choices: Vec<String>,
        plans: u128,
        entries: Vec<Entry>,
        distinct_count: usize,
    }
    let c = load(code)?;
    let reps = choices.iter().map(|p| load(p)).collect::<Result<Vec<_>, _>>()?;
    let iter = enumerate_switched(&c, rows, reps)?;
    let cosets = iter.decomposition().cosets.len();
    let plans = limit.map_or(iter.total(), |l| l.min(iter.total()));
    if plans > cli.cap_census {
        return Err(Error::TooLarge { what: "census plans", needed: plans, cap: cli.cap_census }.into());
    }
    let mut entries = Vec::new();
    let mut codes = Vec::new();
    for (index, item) in iter.take(plans as usize).enumerate() {
        let (choice, switched) = item?;
        if !switched.is_mrd() {
            return Err(Error::SwitchedNotMrd.into());
        }
        let file = save(cli, &format!("census_{index:04}.mrd"), &write_code(&switched))?;
        entries.push(Entry { index, choice, file, signature: signature(&switched)? });
        codes.push(switched);
    }
    let manifest = Manifest {
        rows,
        cosets,
        choices: choices.iter().map(|p| p.display().to_string()).collect(),
        plans,
        entries,
        distinct_count: distinct_members(&codes)?,
    };
    let json = to_json(&manifest);
    save(cli, "manifest.json", &json)?;
    Ok(json)
}

fn invariants(paths: &[PathBuf]) -> Result<String, Failure> {
    #[derive(Serialize)]
    struct Entry {
        file: String,
        signature: Signature,
    }
    #[derive(Serialize)]
    struct Report {
        signatures: Vec<Entry>,
        /// `certificates[i][j]`: first differing signature field, or "indistinguishable".
        certificates: Vec<Vec<&'static str>>,
    }
    let mut signatures = Vec::new();
    for p in paths {
        signatures.push(Entry { file: p.display().to_string(), signature: signature(&load(p)?)? });
    }
    let certificates = signatures
        .iter()
        .map(|a| {
            signatures
                .iter()
                .map(|b| a.signature.first_difference(&b.signature).unwrap_or("indistinguishable"))
                .collect()
        })
        .collect();
    Ok(to_json(&Report { signatures, certificates }))
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Construct { recipe } => construct(cli, recipe),
        Command::Verify { code } => verify_cmd(cli, code),
        Command::Switch { code, plan } => switch(cli, code, plan),
        Command::Census { code, rows, choices, limit } => census(cli, code, *rows, choices, *limit),
        Command::Invariants { codes } => invariants(codes),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(json) => {
            print!("{json}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
