//! Command-line front end for the classification toolkit.

use std::collections::HashSet;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;
use std::time::Instant;

use clap::{Parser, Subcommand};

use percode::audit::{audit_orders, AuditInput};
use percode::canon::analyze;
use percode::code::Code;
use percode::cover::{solve_all, ExactCoverInstance};
use percode::hamming::extended_hamming;
use percode::pipeline::{
    derive_families, process_input, read_family_file, read_records, write_family_file,
    write_record, Family, InputRecord, PipelineConfig, RunReport,
};
use percode::steiner::{neighborhood_system, CatalogReader, SteinerSystem};
use percode::word::Codeword;

#[derive(Parser)]
#[command(name = "percode", version, about = "Classification toolkit for perfect binary codes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Steiner system utilities.
    Steiner {
        #[command(subcommand)]
        cmd: SteinerCmd,
    },
    /// Exact cover utilities.
    Cover {
        #[command(subcommand)]
        cmd: CoverCmd,
    },
    /// Print the canonical equivalence representative and certificate of a
    /// code in the text format.
    Canon { file: PathBuf },
    /// Print generators and orders of the automorphism group of a code.
    Aut { file: PathBuf },
    /// Classify extended 1-perfect codes from a quadruple-system catalog,
    /// deriving the perfect, shortened and halved families.
    Classify {
        /// Extended code length (8 for the desk-scale run, 16 for the real
        /// one).
        #[arg(long, value_parser = clap::value_parser!(usize))]
        length: usize,
        /// Catalog file; when omitted a built-in single-system catalog is
        /// used (the Boolean quadruple system of the given order).
        #[arg(long)]
        catalog: Option<PathBuf>,
        /// Output directory for records, family files and the summary.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Cross-validation mode: plain global deduplication by canonical
        /// representative instead of the two-test acceptance.
        #[arg(long)]
        plain_dedup: bool,
        /// Skip catalog entries already present in the output records file.
        #[arg(long)]
        resume: bool,
    },
    /// Re-check a classification output directory by orbit-stabilizer
    /// double counting.
    Audit {
        #[arg(long)]
        reports: PathBuf,
    },
}

#[derive(Subcommand)]
enum SteinerCmd {
    /// Verify every record of a catalog file, reporting pass/fail per line.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        t: usize,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 16)]
        v: usize,
    },
}

#[derive(Subcommand)]
enum CoverCmd {
    /// Enumerate all exact covers of an instance file, one solution per
    /// line as subset indices.
    Solve { file: PathBuf },
}

fn main() -> ExitCode {
    match run_cli(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run_cli(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.cmd {
        Cmd::Steiner { cmd: SteinerCmd::Verify { file, t, k, v } } => {
            steiner_verify(&file, t, k, v)
        }
        Cmd::Cover { cmd: CoverCmd::Solve { file } } => cover_solve(&file),
        Cmd::Canon { file } => canon_cmd(&file),
        Cmd::Aut { file } => aut_cmd(&file),
        Cmd::Classify { length, catalog, out, jobs, plain_dedup, resume } => {
            classify_cmd(length, catalog.as_deref(), &out, jobs, plain_dedup, resume)
        }
        Cmd::Audit { reports } => audit_cmd(&reports),
    }
}

fn steiner_verify(
    file: &Path,
    t: usize,
    k: usize,
    v: usize,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let reader = CatalogReader::new(BufReader::new(File::open(file)?), t, k, v);
    let mut failures = 0usize;
    let mut total = 0usize;
    for (i, item) in reader.enumerate() {
        total += 1;
        match item {
            Ok(sys) => println!("record {}: ok ({} blocks)", i + 1, sys.block_count()),
            Err(e) => {
                failures += 1;
                println!("record {}: FAIL ({e})", i + 1);
            }
        }
    }
    eprintln!("{} records, {} failures", total, failures);
    Ok(if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cover_solve(file: &Path) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let inst = ExactCoverInstance::read(BufReader::new(File::open(file)?))?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut write_err = None;
    let stats = solve_all(&inst, |rows| {
        if write_err.is_some() {
            return;
        }
        let line: Vec<String> = rows.iter().map(|r| r.to_string()).collect();
        if let Err(e) = writeln!(out, "{}", line.join(" ")) {
            write_err = Some(e);
        }
    });
    out.flush()?;
    if let Some(e) = write_err {
        return Err(e.into());
    }
    eprintln!("nodes {} solutions {}", stats.nodes, stats.solutions);
    Ok(ExitCode::SUCCESS)
}

fn read_code_file(file: &Path) -> Result<Code, Box<dyn std::error::Error>> {
    Ok(Code::read_text(BufReader::new(File::open(file)?))?)
}

fn canon_cmd(file: &Path) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let code = read_code_file(file)?;
    let analysis = analyze(&code);
    let perm_text: Vec<String> =
        analysis.certificate.perm().images().iter().map(|i| i.to_string()).collect();
    println!("# certificate perm {}", perm_text.join(","));
    println!("# certificate translation {}", analysis.certificate.translation());
    print!("{}", analysis.representative.to_text());
    Ok(ExitCode::SUCCESS)
}

fn aut_cmd(file: &Path) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let code = read_code_file(file)?;
    let analysis = analyze(&code);
    println!("sym {}", analysis.sym_order());
    println!("ker {}", analysis.ker_size);
    println!("aut {}", analysis.aut_order);
    for g in &analysis.aut_gens {
        let images: Vec<String> = g.perm().images().iter().map(|i| i.to_string()).collect();
        println!("gen perm {} translation {}", images.join(","), g.translation());
    }
    Ok(ExitCode::SUCCESS)
}

/// The built-in one-system catalog: the neighborhood quadruple system of
/// the extended Hamming code of the requested length.
fn builtin_system(v: usize) -> Result<SteinerSystem, Box<dyn std::error::Error>> {
    let m = match v {
        8 => 3,
        16 => 4,
        _ => return Err(format!("no built-in catalog for length {v}; pass --catalog").into()),
    };
    Ok(neighborhood_system(&extended_hamming(m), Codeword::zero(v), 4)?)
}

fn classify_cmd(
    length: usize,
    catalog: Option<&Path>,
    out_dir: &Path,
    jobs: Option<usize>,
    plain_dedup: bool,
    resume: bool,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    if length != 8 && length != 16 {
        return Err("supported lengths are 8 and 16".into());
    }
    let started = Instant::now();
    fs::create_dir_all(out_dir)?;
    let cfg = PipelineConfig { v: length, plain_dedup };

    let records_path = out_dir.join("records.txt");
    let mut done: Vec<InputRecord> = Vec::new();
    if resume && records_path.exists() {
        done = read_records(BufReader::new(File::open(&records_path)?))?;
        eprintln!("resuming: {} inputs already processed", done.len());
    }
    let done_set: HashSet<usize> = done.iter().map(|r| r.index).collect();

    let catalog_iter: Box<dyn Iterator<Item = _>> = match catalog {
        Some(path) => Box::new(CatalogReader::new(BufReader::new(File::open(path)?), 3, 4, length)),
        None => Box::new(std::iter::once(Ok(builtin_system(length)?))),
    };

    let mut open_opts = fs::OpenOptions::new();
    open_opts.create(true);
    if resume {
        open_opts.append(true);
    } else {
        open_opts.write(true).truncate(true);
    }
    let writer = Mutex::new(BufWriter::new(open_opts.open(&records_path)?));
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.unwrap_or(0)).build()?;

    let mut records = done;
    let mut pending = Vec::new();
    const CHUNK: usize = 512;
    let flush_chunk = |pending: &mut Vec<(usize, SteinerSystem)>,
                       records: &mut Vec<InputRecord>|
     -> Result<(), Box<dyn std::error::Error>> {
        use rayon::prelude::*;
        let fresh: Result<Vec<InputRecord>, _> =
            pool.install(|| pending.par_iter().map(|(i, q)| process_input(*i, q, &cfg)).collect());
        let fresh = fresh?;
        let mut w = writer.lock().unwrap();
        for rec in &fresh {
            write_record(&mut *w, rec)?;
        }
        w.flush()?;
        records.extend(fresh);
        pending.clear();
        Ok(())
    };

    for (i, item) in catalog_iter.enumerate() {
        let q = item.map_err(|e| format!("catalog record {}: {e}", i + 1))?;
        if done_set.contains(&i) {
            continue;
        }
        pending.push((i, q));
        if pending.len() >= CHUNK {
            flush_chunk(&mut pending, &mut records)?;
        }
    }
    flush_chunk(&mut pending, &mut records)?;

    records.sort_by_key(|r| r.index);
    if plain_dedup {
        percode::pipeline::dedup_plain(&mut records);
    }
    let report = pool.install(|| derive_families(&mut records, &cfg))?;

    for family in Family::ALL {
        let data = report.family_data(family);
        let file = File::create(out_dir.join(format!("{}.txt", family_stem(family))))?;
        write_family_file(BufWriter::new(file), &data)?;
    }
    write_summary(&report, out_dir)?;

    println!(
        "{} inputs, {} augmentable, {} extensions",
        report.records.len(),
        report.augmentable_inputs(),
        report.total_extensions()
    );
    for family in Family::ALL {
        println!("{}: {} classes", report.family_tag(family), report.aut_orders(family).len());
    }
    eprintln!("classified in {:.1?}", started.elapsed());
    Ok(ExitCode::SUCCESS)
}

fn family_stem(family: Family) -> &'static str {
    match family {
        Family::Extended => "extended",
        Family::Perfect => "perfect",
        Family::Shortened => "shortened",
        Family::Halved => "halved",
    }
}

fn write_summary(report: &RunReport, out_dir: &Path) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(out_dir.join("summary.tsv"))?);
    writeln!(w, "inputs\t{}", report.records.len())?;
    writeln!(w, "augmentable\t{}", report.augmentable_inputs())?;
    writeln!(w, "extensions\t{}", report.total_extensions())?;
    for family in Family::ALL {
        let tag = report.family_tag(family);
        writeln!(w, "family\t{tag}\tclasses\t{}", report.aut_orders(family).len())?;
        for (order, count) in report.aut_histogram(family) {
            writeln!(w, "hist\t{tag}\t{order}\t{count}")?;
        }
    }
    w.flush()
}

fn audit_cmd(dir: &Path) -> Result<ExitCode, Box<dyn std::error::Error>> {
    // designs come from the per-input records; class group orders from the
    // family files (which hold the post-deduplication classification)
    let records = read_records(BufReader::new(File::open(dir.join("records.txt"))?))?;
    let designs = records.iter().map(|r| (r.aut_q_order, r.extension_count)).collect();

    let mut family_orders = Vec::new();
    let mut v = None;
    for family in Family::ALL {
        let stem = family_stem(family);
        let data = read_family_file(BufReader::new(File::open(dir.join(format!("{stem}.txt")))?))?;
        if family == Family::Extended {
            v = Some(data.v);
        }
        family_orders.push(data.classes.iter().map(|c| c.3).collect::<Vec<u128>>());
    }
    let mut orders = family_orders.into_iter();
    let input = AuditInput {
        v: v.expect("extended family file carries v"),
        designs,
        extended: orders.next().unwrap(),
        perfect: orders.next().unwrap(),
        shortened: orders.next().unwrap(),
        halved: orders.next().unwrap(),
    };

    let outcome = audit_orders(&input)?;
    print!("{outcome}");
    Ok(if outcome.passed() {
        println!("AUDIT PASS");
        ExitCode::SUCCESS
    } else {
        println!("AUDIT FAIL");
        ExitCode::FAILURE
    })
}
