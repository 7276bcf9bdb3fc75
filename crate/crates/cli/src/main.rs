//! `matchstab`: verify, construct, search and generate k-stable matching instances.
//!
//! Exit status: 0 verdict true or success, 1 verdict false or unsupported
//! regime, 2 usage or input error, 3 refused as too large for the oracle.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use matchstab::construct::{solve, SolveOutcome};
use matchstab::generators::{
    complete_transform, gen_condorcet, gen_random, lift_to_complete, scale_to_c, write_corpus, x3c_to_hai,
    x3c_to_hatc_dich, x3c_to_hati_single_tie, x3c_to_maj_hai, x3c_to_sm, RandomSpec, ReductionOutput, Restriction,
    SmVariant,
};
use matchstab::io::{parse_instance, parse_matching, parse_x3c, write_instance, write_instance_with_names, write_matching};
use matchstab::oracle::{exists_k_stable_parallel, min_k_parallel, OracleBudget};
use matchstab::{stability_number, Error, Fraction, Instance, Matching, ModelKind, Threshold};

#[derive(Parser)]
#[command(name = "matchstab", version, about = "k-stable matchings: verification, construction, exact search, generators")]
struct Cli {
    /// Human-readable table instead of key: value lines.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stability number of a matching and the k-stability verdict.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        matching: PathBuf,
        #[command(flatten)]
        threshold: ThresholdArgs,
        /// Also write the witness matching to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Construct a matching whose guarantee covers the threshold.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        threshold: ThresholdArgs,
        /// Write the matching here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact search by enumeration (small instances only; see MATCHSTAB_BUDGET).
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        /// Worker threads; results do not depend on it.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(subcommand)]
        query: OracleQuery,
    },
    /// Generate instances.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Build reduction instances from an exact-cover input.
    Reduce {
        #[command(subcommand)]
        from: ReduceCommand,
    },
}

#[derive(Args, Clone)]
#[group(multiple = false)]
struct ThresholdArgs {
    /// Explicit coalition size k.
    #[arg(long)]
    k: Option<usize>,
    /// Fraction of the agents as P/Q; k = ceil(c*n).
    #[arg(long, value_parser = parse_fraction)]
    c: Option<Fraction>,
    /// k = floor(n/2) + 1 (the default).
    #[arg(long)]
    majority: bool,
}

impl ThresholdArgs {
    fn threshold(&self) -> Threshold {
        match (self.k, self.c) {
            (Some(k), _) => Threshold::Agents(k),
            (_, Some(c)) => Threshold::Fraction(c),
            _ => Threshold::Majority,
        }
    }
}

#[derive(Subcommand)]
enum OracleQuery {
    /// Smallest k admitting a k-stable matching.
    #[command(name = "minK", alias = "min-k")]
    MinK,
    /// Whether a k-stable matching exists.
    Exists {
        #[command(flatten)]
        threshold: ThresholdArgs,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// n agents with identical complete lists over n objects.
    Condorcet {
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random instance.
    Random {
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Agents (HA, SR) or U side (SM).
        #[arg(long)]
        n: usize,
        /// Objects (HA) or W side (SM).
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        min_len: usize,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        tie_density: f64,
        #[arg(long)]
        complete: bool,
        #[arg(long, value_enum, default_value_t = RestrictionArg::None)]
        restriction: RestrictionArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every reduction family for one exact-cover input, as a directory tree.
    Corpus {
        x3c: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ReduceCommand {
    X3c {
        file: PathBuf,
        #[arg(long, value_enum)]
        target: Target,
        /// hai: `complete`; sm: base, max-maj, pad4, single-tie, dich-complete.
        #[arg(long)]
        variant: Option<String>,
        /// Pad to threshold ceil(c*n).
        #[arg(long, value_parser = parse_fraction)]
        c: Option<Fraction>,
        /// Cover for the witness, as comma-separated triple indices; found by search if omitted.
        #[arg(long, value_delimiter = ',')]
        cover: Option<Vec<usize>>,
        /// Output directory for instance.txt, target_k.txt and witness.txt.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    #[value(name = "HA", alias = "ha")]
    Ha,
    #[value(name = "SM", alias = "sm")]
    Sm,
    #[value(name = "SR", alias = "sr")]
    Sr,
}

#[derive(Clone, Copy, ValueEnum)]
enum RestrictionArg {
    None,
    SingleTie,
    DichComplete,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Hai,
    MajHai,
    HatiTie,
    HatcDich,
    Sm,
    Sr,
}

fn parse_fraction(s: &str) -> Result<Fraction, String> {
    let (p, q) = s.split_once('/').ok_or_else(|| format!("expected P/Q, found {s:?}"))?;
    let p: u64 = p.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let q: u64 = q.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if q == 0 {
        return Err("zero denominator".into());
    }
    Ok(Fraction::new(p, q))
}

// Failure modes mapped to exit codes.
enum Failure {
    Usage(String),
    Refused(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::RefusedTooLarge(msg) => Failure::Refused(msg),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

// key: value lines, or an aligned table with --pretty.
struct Report {
    rows: Vec<(String, String)>,
}

impl Report {
    fn new() -> Report {
        Report { rows: Vec::new() }
    }

    fn put(&mut self, key: &str, value: impl ToString) {
        self.rows.push((key.to_string(), value.to_string()));
    }

    fn print(&self, pretty: bool) {
        let mut out = String::new();
        if pretty {
            let width = self.rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in &self.rows {
                let label = k.replace('_', " ");
                let _ = writeln!(out, "{label:<width$}  {v}");
            }
        } else {
            for (k, v) in &self.rows {
                let _ = writeln!(out, "{k}: {v}");
            }
        }
        print!("{out}");
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn pairs_inline(inst: &Instance, m: &Matching) -> String {
    let ha = inst.model() == ModelKind::HouseAllocation;
    let items: Vec<String> =
        m.pairs().iter().map(|&(a, b)| if ha { format!("{a}-o{b}") } else { format!("{a}-{b}") }).collect();
    if items.is_empty() { "(empty)".into() } else { items.join(" ") }
}

fn join_ids(ids: &[usize]) -> String {
    if ids.is_empty() { "(none)".into() } else { ids.iter().map(usize::to_string).collect::<Vec<_>>().join(" ") }
}

fn budget() -> Result<OracleBudget, Failure> {
    Ok(OracleBudget::from_env()?)
}

fn run(cli: Cli) -> Outcome {
    let pretty = cli.pretty;
    match cli.cmd {
        Command::Verify { instance, matching, threshold, report } => {
            let inst = load_instance(&instance)?;
            let m = parse_matching(&read(&matching)?, &inst)
                .map_err(|e| Failure::Usage(format!("{}: {e}", matching.display())))?;
            let r = stability_number(&inst, &m)?;
            let verdict = r.verdict(&threshold.threshold(), inst.n_agents())?;
            let mut out = Report::new();
            out.put("stability_number", r.stability_number);
            out.put("k", verdict.k);
            out.put("stable", verdict.stable);
            out.put("improvers", join_ids(&r.improvers));
            out.put("witness", pairs_inline(&inst, &r.witness));
            out.print(pretty);
            if let Some(path) = report {
                write(&path, &write_matching(&inst, &r.witness))?;
            }
            Ok(verdict.stable)
        }
        Command::Solve { instance, threshold, out } => {
            let inst = load_instance(&instance)?;
            let mut rep = Report::new();
            match solve(&inst, &threshold.threshold())? {
                SolveOutcome::Solved(c) => {
                    rep.put("k", threshold.threshold().resolve(inst.n_agents())?);
                    rep.put("guaranteed_k", c.guaranteed_k);
                    rep.put("certificate", c.certificate);
                    match &out {
                        Some(path) => {
                            write(path, &write_matching(&inst, &c.matching))?;
                            rep.put("matching_file", path.display());
                        }
                        None => rep.put("matching", pairs_inline(&inst, &c.matching)),
                    }
                    rep.print(pretty);
                    Ok(true)
                }
                SolveOutcome::Unsupported { k, reason } => {
                    rep.put("k", k);
                    rep.put("unsupported", reason);
                    rep.print(pretty);
                    Ok(false)
                }
            }
        }
        Command::Oracle { instance, jobs, query } => {
            let inst = load_instance(&instance)?;
            let b = budget()?;
            let mut rep = Report::new();
            let verdict = match query {
                OracleQuery::MinK => {
                    let r = min_k_parallel(&inst, &b, jobs.max(1))?;
                    rep.put("min_k", r.k);
                    rep.put("witness", pairs_inline(&inst, &r.witness));
                    true
                }
                OracleQuery::Exists { threshold } => {
                    let t = threshold.threshold();
                    let k = t.resolve(inst.n_agents())?;
                    let found = exists_k_stable_parallel(&inst, &t, &b, jobs.max(1))?;
                    rep.put("k", k);
                    rep.put("exists", found.is_some());
                    if let Some(m) = &found {
                        rep.put("witness", pairs_inline(&inst, m));
                    }
                    found.is_some()
                }
            };
            rep.print(pretty);
            Ok(verdict)
        }
        Command::Gen { what } => gen(what, pretty),
        Command::Reduce { from: ReduceCommand::X3c { file, target, variant, c, cover, out } } => {
            let x = parse_x3c(&read(&file)?).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
            let (output, completed) = build_reduction(&x, target, variant.as_deref(), c)?;
            let cover = match cover {
                Some(c) => {
                    x.check_cover(&c)?;
                    Some(c)
                }
                None => x.find_cover(),
            };
            let witness = match &cover {
                Some(c) if output.has_witness_builder() => {
                    let m = output.witness(c)?;
                    match &completed {
                        Some(done) => Some(lift_to_complete(&output.instance, done, &m)?),
                        None => Some(m),
                    }
                }
                _ => None,
            };
            let inst = completed.as_ref().unwrap_or(&output.instance);
            let text = match &completed {
                Some(done) => write_instance(done),
                None => write_instance_with_names(inst, &output.names),
            };
            let mut rep = Report::new();
            rep.put("model", inst.model());
            rep.put("agents", inst.n_agents());
            if inst.model() == ModelKind::HouseAllocation {
                rep.put("objects", inst.n_objects());
            }
            rep.put("target_k", output.k);
            for (kind, count) in &output.pads {
                rep.put(&format!("pad_{kind}"), count);
            }
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
                    write(&dir.join("instance.txt"), &text)?;
                    write(&dir.join("target_k.txt"), &format!("{}\n", output.k))?;
                    if let Some(m) = &witness {
                        write(&dir.join("witness.txt"), &write_matching(inst, m))?;
                    }
                    rep.put("witness", witness.is_some());
                    rep.put("out", dir.display());
                    rep.print(pretty);
                }
                None => {
                    // Instance on stdout, summary as leading comments.
                    for (k, v) in &rep.rows {
                        println!("# {k}: {v}");
                    }
                    print!("{text}");
                }
            }
            Ok(true)
        }
    }
}

// The reduction and, for `--variant complete`, its completed instance.
fn build_reduction(
    x: &matchstab::x3c::X3cInstance,
    target: Target,
    variant: Option<&str>,
    c: Option<Fraction>,
) -> Result<(ReductionOutput, Option<Instance>), Failure> {
    let no_variant = |name: &str| match variant {
        None => Ok(()),
        Some(v) => Err(Failure::Usage(format!("target {name} takes no variant (got {v})"))),
    };
    let out = match target {
        Target::Hai => {
            let complete = match variant {
                None => false,
                Some("complete") => true,
                Some(v) => return Err(Failure::Usage(format!("unknown hai variant {v}"))),
            };
            let mut r = x3c_to_hai(x)?;
            if let Some(c) = c {
                r = scale_to_c(r, c)?;
            }
            if complete {
                let done = complete_transform(&r.instance)?;
                return Ok((r, Some(done)));
            }
            r
        }
        Target::MajHai => {
            no_variant("maj-hai")?;
            let r = x3c_to_maj_hai(x)?;
            match c {
                Some(c) => scale_to_c(r, c)?,
                None => r,
            }
        }
        Target::HatiTie => {
            no_variant("hati-tie")?;
            x3c_to_hati_single_tie(x, c)?
        }
        Target::HatcDich => {
            no_variant("hatc-dich")?;
            x3c_to_hatc_dich(x, c)?
        }
        Target::Sm => {
            let v = SmVariant::parse(variant.unwrap_or("base"), c)?;
            if matches!(v, SmVariant::RoommatesTriangles(_)) {
                return Err(Failure::Usage("use --target sr for the roommates variant".into()));
            }
            x3c_to_sm(x, v)?
        }
        Target::Sr => {
            let v = SmVariant::parse(variant.unwrap_or("sr-triangles"), c)?;
            if !matches!(v, SmVariant::RoommatesTriangles(_)) {
                return Err(Failure::Usage("target sr supports only the sr-triangles variant".into()));
            }
            x3c_to_sm(x, v)?
        }
    };
    Ok((out, None))
}

fn gen(what: GenCommand, pretty: bool) -> Outcome {
    let emit = |inst: &Instance, out: Option<PathBuf>| -> Result<(), Failure> {
        let text = write_instance(inst);
        match out {
            Some(path) => write(&path, &text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    };
    match what {
        GenCommand::Condorcet { n, out } => emit(&gen_condorcet(n)?, out)?,
        GenCommand::Random {
            model,
            n,
            m,
            min_len,
            max_len,
            tie_density,
            complete,
            restriction,
            seed,
            out,
        } => {
            let model = match model {
                ModelArg::Ha => ModelKind::HouseAllocation,
                ModelArg::Sm => ModelKind::Marriage,
                ModelArg::Sr => ModelKind::Roommates,
            };
            let mut spec = RandomSpec::new(model, n, m, seed);
            spec.min_len = min_len;
            spec.max_len = max_len.unwrap_or(usize::MAX);
            spec.tie_density = tie_density;
            spec.complete = complete;
            spec.restriction = match restriction {
                RestrictionArg::None => Restriction::None,
                RestrictionArg::SingleTie => Restriction::SingleTie,
                RestrictionArg::DichComplete => Restriction::DichotomousComplete,
            };
            emit(&gen_random(&spec)?, out)?;
        }
        GenCommand::Corpus { x3c, out } => {
            let x = parse_x3c(&read(&x3c)?).map_err(|e| Failure::Usage(format!("{}: {e}", x3c.display())))?;
            let dirs = write_corpus(&out, &x)?;
            let mut rep = Report::new();
            rep.put("entries", dirs.len());
            for d in dirs {
                rep.put("entry", d.display());
            }
            rep.print(pretty);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Refused(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(3)
        }
    }
}
