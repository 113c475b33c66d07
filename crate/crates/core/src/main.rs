use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fca_reduct::attr::{apply_reduct, greedy_attr_reduce, rotation_reducts};
use fca_reduct::bitvec::BitVec;
use fca_reduct::context::FormalContext;
use fca_reduct::error::Error;
use fca_reduct::lattice::{enumerate_concepts_capped, ConceptList, DEFAULT_CONCEPT_CAP};
use fca_reduct::reduction::{
    classification_tsv, classify, gen_bound_context, greedy_reduction, BoundKind,
    ClassificationReport,
};
use fca_reduct::DefaultWord;

type Ctx = FormalContext<DefaultWord>;

const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_CONTRACT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "fca-reduct",
    about = "Concept lattices, concept reduction, and attribute reduction for formal contexts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Json,
    Tsv,
}

#[derive(Args)]
struct InputArgs {
    /// Context file (.cxt, or .csv with 0/1 cells)
    context: PathBuf,
    /// CSV input: do not treat the first row as attribute names
    #[arg(long)]
    no_csv_header: bool,
    /// CSV input: do not treat the first column as object names
    #[arg(long)]
    no_csv_names: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all formal concepts in canonical order
    Concepts {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
        /// Abort once more than this many concepts exist
        #[arg(long, default_value_t = DEFAULT_CONCEPT_CAP)]
        cap: usize,
        #[arg(long)]
        time: bool,
    },
    /// Classify every concept as core, relatively necessary, or unnecessary
    Classify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: OutFormat,
        #[arg(long, default_value_t = DEFAULT_CONCEPT_CAP)]
        cap: usize,
        #[arg(long)]
        time: bool,
    },
    /// Greedy concept reduction: an irredundant cover of the relation
    ReduceConcepts {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
        #[arg(long, default_value_t = DEFAULT_CONCEPT_CAP)]
        cap: usize,
        /// Shuffle the elimination order with this seed (default: canonical)
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        time: bool,
    },
    /// Remove context columns while preserving the given concept extents
    ReduceAttrs {
        #[command(flatten)]
        input: InputArgs,
        /// Extent file: one JSON array of object indices per line
        #[arg(long, conflicts_with = "first_k", required_unless_present = "first_k")]
        extents: Option<PathBuf>,
        /// Use the extents of the first K concepts in canonical order
        #[arg(long)]
        first_k: Option<usize>,
        /// Column to test first
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// Run every start column and report each distinct reduct
        #[arg(long)]
        all_starts: bool,
        /// Write the reduced context (removed columns dropped) here
        #[arg(long)]
        reduced_out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CONCEPT_CAP)]
        cap: usize,
        #[arg(long)]
        time: bool,
    },
    /// Generate an extremal bound context as .cxt
    Gen {
        /// Attribute count (2..=20)
        n: usize,
        #[arg(value_enum)]
        kind: GenKind,
        /// Output file (default stdout)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Attribute-reduction timing run on a seeded random context
    Bench {
        #[arg(long, default_value_t = 8124)]
        objects: usize,
        #[arg(long, default_value_t = 115)]
        attrs: usize,
        #[arg(long, default_value_t = 512)]
        extents: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        start: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Relative,
    Unnecessary,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::DimensionMismatch { .. }
        | Error::OutOfRange { .. }
        | Error::InvalidArgument(_) => EXIT_INPUT,
        Error::ResourceLimit { .. } => EXIT_CAP,
        Error::InvalidConcept { .. }
        | Error::NotFullLattice
        | Error::InactiveColumn(_)
        | Error::ExtentNotClosed { .. } => EXIT_CONTRACT,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {}", e);
    ExitCode::from(exit_code(&e))
}

fn fail_io(path: &Path, e: std::io::Error) -> ExitCode {
    eprintln!("error: {}: {}", path.display(), e);
    ExitCode::from(EXIT_INPUT)
}

fn load_context(input: &InputArgs) -> Result<Ctx, ExitCode> {
    let text = fs::read_to_string(&input.context).map_err(|e| fail_io(&input.context, e))?;
    let is_csv = input
        .context
        .extension()
        .map_or(false, |ext| ext.eq_ignore_ascii_case("csv"));
    let parsed = if is_csv {
        Ctx::parse_csv(&text, !input.no_csv_header, !input.no_csv_names)
    } else {
        Ctx::parse_cxt(&text)
    };
    parsed.map_err(fail)
}

fn parse_extent_file(path: &Path, m: usize) -> Result<Vec<BitVec<DefaultWord>>, ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| fail_io(path, e))?;
    let mut extents = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let indices: Vec<usize> = serde_json::from_str(line).map_err(|e| {
            fail(Error::Parse {
                line: i + 1,
                msg: format!("expected a JSON array of object indices: {}", e),
            })
        })?;
        for &g in &indices {
            if g >= m {
                return Err(fail(Error::Parse {
                    line: i + 1,
                    msg: format!("object index {} out of range (m = {})", g, m),
                }));
            }
        }
        extents.push(BitVec::from_indices(m, indices));
    }
    Ok(extents)
}

fn print_timing(label: &str, enabled: bool, started: Instant) {
    if enabled {
        eprintln!("{} time_ms={}", label, started.elapsed().as_millis());
    }
}

fn concept_lines(ctx: &Ctx, list: &ConceptList<DefaultWord>, format: OutFormat) -> String {
    match format {
        OutFormat::Json => list.to_jsonl(),
        _ => {
            let mut out = String::new();
            for c in list {
                out.push_str(&c.compact(ctx));
                out.push('\n');
            }
            out
        }
    }
}

fn cmd_concepts(input: InputArgs, format: OutFormat, cap: usize, time: bool) -> ExitCode {
    let started = Instant::now();
    let ctx = match load_context(&input) {
        Ok(ctx) => ctx,
        Err(code) => return code,
    };
    let list = match enumerate_concepts_capped(&ctx, cap) {
        Ok(list) => list,
        Err(e) => return fail(e),
    };
    print!("{}", concept_lines(&ctx, &list, format));
    eprintln!("concepts={}", list.len());
    print_timing("concepts", time, started);
    ExitCode::SUCCESS
}

fn cmd_classify(input: InputArgs, format: OutFormat, cap: usize, time: bool) -> ExitCode {
    let started = Instant::now();
    let ctx = match load_context(&input) {
        Ok(ctx) => ctx,
        Err(code) => return code,
    };
    let list = match enumerate_concepts_capped(&ctx, cap) {
        Ok(list) => list,
        Err(e) => return fail(e),
    };
    let labels = match classify(&ctx, &list) {
        Ok(labels) => labels,
        Err(e) => return fail(e),
    };
    let report = ClassificationReport::new(&list, &labels);
    match format {
        OutFormat::Json => {
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"))
        }
        _ => print!("{}", classification_tsv(&ctx, &list, &labels)),
    }
    let (core, relnec, unnec) = report.counts();
    eprintln!("core={} relnec={} unnec={}", core, relnec, unnec);
    print_timing("classify", time, started);
    ExitCode::SUCCESS
}

fn cmd_reduce_concepts(
    input: InputArgs,
    format: OutFormat,
    cap: usize,
    seed: Option<u64>,
    time: bool,
) -> ExitCode {
    let started = Instant::now();
    let ctx = match load_context(&input) {
        Ok(ctx) => ctx,
        Err(code) => return code,
    };
    let list = match enumerate_concepts_capped(&ctx, cap) {
        Ok(list) => list,
        Err(e) => return fail(e),
    };
    let mut order: Vec<usize> = (0..list.len()).collect();
    if let Some(seed) = seed {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let kept = match greedy_reduction(&ctx, &list, &order) {
        Ok(kept) => kept,
        Err(e) => return fail(e),
    };
    let reduced = ConceptList::from_concepts(kept.iter().map(|&i| list[i].clone()).collect());
    print!("{}", concept_lines(&ctx, &reduced, format));
    eprintln!("kept={} of={}", reduced.len(), list.len());
    print_timing("reduce-concepts", time, started);
    ExitCode::SUCCESS
}

#[allow(clippy::too_many_arguments)]
fn cmd_reduce_attrs(
    input: InputArgs,
    extents: Option<PathBuf>,
    first_k: Option<usize>,
    start: usize,
    all_starts: bool,
    reduced_out: Option<PathBuf>,
    cap: usize,
    time: bool,
) -> ExitCode {
    let started = Instant::now();
    let ctx = match load_context(&input) {
        Ok(ctx) => ctx,
        Err(code) => return code,
    };
    let extent_sets = if let Some(path) = extents {
        match parse_extent_file(&path, ctx.m()) {
            Ok(sets) => sets,
            Err(code) => return code,
        }
    } else {
        // first K concepts in canonical order; this order differs from
        // other enumerators' output orders
        let k = first_k.expect("clap enforces one extent source");
        let list = match enumerate_concepts_capped(&ctx, cap) {
            Ok(list) => list,
            Err(e) => return fail(e),
        };
        list.iter().take(k).map(|c| c.extent.clone()).collect()
    };
    if all_starts {
        let reports = match rotation_reducts(&ctx, &extent_sets) {
            Ok(reports) => reports,
            Err(e) => return fail(e),
        };
        println!("{}", serde_json::to_string_pretty(&reports).expect("serializable"));
        eprintln!("reducts={}", reports.len());
    } else {
        let report = match greedy_attr_reduce(&ctx, &extent_sets, start) {
            Ok(report) => report,
            Err(e) => return fail(e),
        };
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
        eprintln!("removed={} kept={}", report.removed.len(), report.kept.len());
        if let Some(path) = reduced_out {
            let reduced = match apply_reduct(&ctx, &report.kept) {
                Ok(reduced) => reduced,
                Err(e) => return fail(e),
            };
            if let Err(e) = fs::write(&path, reduced.to_cxt()) {
                return fail_io(&path, e);
            }
        }
    }
    print_timing("reduce-attrs", time, started);
    ExitCode::SUCCESS
}

fn cmd_gen(n: usize, kind: GenKind, output: Option<PathBuf>) -> ExitCode {
    let kind = match kind {
        GenKind::Relative => BoundKind::Relative,
        GenKind::Unnecessary => BoundKind::Unnecessary,
    };
    let ctx = match gen_bound_context::<DefaultWord>(n, kind) {
        Ok(ctx) => ctx,
        Err(e) => return fail(e),
    };
    let text = ctx.to_cxt();
    match output {
        Some(path) => {
            if let Err(e) = fs::write(&path, text) {
                return fail_io(&path, e);
            }
            eprintln!("wrote {}x{} context to {}", ctx.m(), ctx.n(), path.display());
        }
        None => print!("{}", text),
    }
    ExitCode::SUCCESS
}

fn cmd_bench(
    objects: usize,
    attrs: usize,
    extents: usize,
    seed: u64,
    density: f64,
    start: usize,
) -> ExitCode {
    let ctx = Ctx::random(objects, attrs, density, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut sets = Vec::with_capacity(extents);
    for _ in 0..extents {
        // closure of a random attribute pair: always a closed extent
        let mut b = BitVec::new(attrs);
        b.insert(rng.gen_range(0..attrs));
        b.insert(rng.gen_range(0..attrs));
        sets.push(ctx.derive_attrs(&b).expect("dimension matches"));
    }
    let started = Instant::now();
    let report = match greedy_attr_reduce(&ctx, &sets, start) {
        Ok(report) => report,
        Err(e) => return fail(e),
    };
    let millis = started.elapsed().as_millis();
    println!(
        "{}",
        serde_json::json!({
            "objects": objects,
            "attrs": attrs,
            "extents": extents,
            "seed": seed,
            "density": density,
            "removed": report.removed.len(),
            "kept": report.kept.len(),
            "millis": millis as u64,
        })
    );
    eprintln!("bench time_ms={}", millis);
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Concepts {
            input,
            format,
            cap,
            time,
        } => cmd_concepts(input, format, cap, time),
        Command::Classify {
            input,
            format,
            cap,
            time,
        } => cmd_classify(input, format, cap, time),
        Command::ReduceConcepts {
            input,
            format,
            cap,
            seed,
            time,
        } => cmd_reduce_concepts(input, format, cap, seed, time),
        Command::ReduceAttrs {
            input,
            extents,
            first_k,
            start,
            all_starts,
            reduced_out,
            cap,
            time,
        } => cmd_reduce_attrs(
            input,
            extents,
            first_k,
            start,
            all_starts,
            reduced_out,
            cap,
            time,
        ),
        Command::Gen { n, kind, output } => cmd_gen(n, kind, output),
        Command::Bench {
            objects,
            attrs,
            extents,
            seed,
            density,
            start,
        } => cmd_bench(objects, attrs, extents, seed, density, start),
    }
}
