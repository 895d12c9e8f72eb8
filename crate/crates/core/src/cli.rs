//! Command line front end.
//!
//! Eleven subcommands map one-to-one onto the library operations. Output
//! is deterministic: every listing is sorted before printing, `--json`
//! switches to JSON-lines, and exit codes are 0 for success, 1 for
//! domain errors (bad class, bad type, rank too small), 2 for usage
//! errors.

use std::collections::HashSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use crate::catalog::{closed_form_size, config_size, inventory, thresholds};
use crate::cremona::{
    cremona_reduce, enumerate_neg1, orbit_ball_seeded, OrbitBudget,
};
use crate::error::{Error, Result};
use crate::io::{
    emit_chain_json, emit_chain_text, emit_class_json, emit_class_text, emit_word,
    format_rational, parse_class, parse_local_type,
};
use crate::lattice::{DivisorClass, LatticeContext};
use crate::rays::{
    build_candidate_class, classify_ray, conjecture_screen, orbit_k_invariance_check,
    search_candidate_degrees, WeightAssignment,
};
use crate::resolution::resolved_chain;

#[derive(Parser)]
#[command(
    name = "conelab",
    version,
    about = "Integer laboratory for divisor classes on blown-up planes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report every lattice number attached to one class
    Classify {
        /// Lattice rank; a shorter class is padded with zeros
        #[arg(long)]
        n: Option<usize>,
        /// Class as `d;m1,...,mn` or `{"n":..,"d":..,"m":[..]}`
        class: String,
        /// Emit one JSON object instead of text
        #[arg(long)]
        json: bool,
    },
    /// Sort one class into the negativity screen's verdict shapes
    Screen {
        #[arg(long)]
        n: Option<usize>,
        class: String,
        #[arg(long)]
        json: bool,
    },
    /// Drive a class to its canonical orbit representative
    Reduce {
        #[arg(long)]
        n: Option<usize>,
        class: String,
        #[arg(long)]
        json: bool,
    },
    /// Breadth-first orbit ball around a class
    Orbit {
        #[arg(long)]
        n: Option<usize>,
        class: String,
        /// Maximum number of distinct classes kept
        #[arg(long)]
        budget: usize,
        /// Maximum word length measured from the seeds
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        json: bool,
        /// Write the ball to this file as JSON-lines; stdout gets a summary
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON-lines cache of known orbit members, append-only; entries in
        /// the seed's orbit warm-start the search
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// All classes with self-intersection -1 and canonical degree -1 up
    /// to a degree bound
    Neg1 {
        /// Lattice rank
        #[arg(long)]
        n: usize,
        /// Largest class degree to enumerate
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pencil family catalog with configuration sizes
    Families {
        #[arg(long, default_value_t = 20)]
        max_degree: u64,
        #[arg(long)]
        json: bool,
    },
    /// Resolution chain of a local type `a/b`
    Resolve {
        r#type: String,
        #[arg(long)]
        json: bool,
    },
    /// Assemble the class of a weighted pencil guess
    BuildClass {
        /// Lattice rank; defaults to the family's configuration size
        #[arg(long)]
        n: Option<usize>,
        /// Family degree (at least 2)
        #[arg(long)]
        family: u64,
        /// Degree of the pencil members
        #[arg(long)]
        m: u64,
        /// Comma-separated weight per base point, inventory order
        #[arg(long)]
        weights: String,
        #[arg(long)]
        json: bool,
    },
    /// Search weight assignments whose class lands on the null cone
    SearchClasses {
        #[arg(long)]
        family: u64,
        #[arg(long)]
        m_bound: u64,
        #[arg(long)]
        k_bound: u64,
        /// Additionally require canonical degree zero
        #[arg(long)]
        elliptic: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check canonical-degree invariance over orbit balls of seed classes
    OrbitCheck {
        /// Lattice rank; defaults to the longest seed
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        budget: usize,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        json: bool,
        /// Seed classes
        #[arg(required = true)]
        classes: Vec<String>,
    },
    /// The two smallest configuration sizes: all families, then degree 5 up
    Thresholds {
        #[arg(long)]
        json: bool,
    },
}

/// Entry point used by the binary and by tests. `args` includes the
/// program name.
pub fn run(
    args: impl IntoIterator<Item = String>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp
                | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{rendered}");
                    2
                }
            };
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            1
        }
    }
}

/// Parses a class and settles the working rank: the flag wins, a missing
/// flag means the class's own length, and padding only ever adds zeros.
fn resolve_class(text: &str, n_flag: Option<usize>) -> Result<(LatticeContext, DivisorClass)> {
    let parsed = parse_class(text)?;
    let n = n_flag.unwrap_or_else(|| parsed.n());
    if n < parsed.n() {
        return Err(Error::DimensionMismatch { expected: n, found: parsed.n() });
    }
    Ok((LatticeContext::new(n)?, pad_to(&parsed, n)))
}

fn pad_to(x: &DivisorClass, n: usize) -> DivisorClass {
    let mut m = x.mults().to_vec();
    m.resize(n, BigInt::from(0));
    DivisorClass::new(x.degree().clone(), m)
}

fn make_budget(max_classes: usize, depth: Option<usize>) -> Result<OrbitBudget> {
    match depth {
        Some(d) => OrbitBudget::bounded(max_classes, d),
        None => OrbitBudget::classes(max_classes),
    }
}

fn parse_weight_list(text: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let mut start = 0;
    loop {
        let end = text[start..].find(',').map(|i| start + i).unwrap_or(text.len());
        let slice = &text[start..end];
        let token = slice.trim();
        let pos = start + (slice.len() - slice.trim_start().len());
        if token.is_empty() {
            return Err(Error::parse(pos, "expected a weight"));
        }
        let k: u64 = token
            .parse()
            .map_err(|_| Error::parse(pos, format!("invalid weight '{token}'")))?;
        out.push(k);
        if end == text.len() {
            break;
        }
        start = end + 1;
    }
    Ok(out)
}

/// Loads every class in a JSON-lines cache file. A missing file is an
/// empty cache; a malformed line is an error naming it.
fn load_cache(path: &Path) -> Result<Vec<DivisorClass>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let body = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in body.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let x = parse_class(line).map_err(|e| {
            Error::parse(0, format!("{} line {}: {e}", path.display(), i + 1))
        })?;
        out.push(x);
    }
    Ok(out)
}

fn write_class_lines(
    classes: &[DivisorClass],
    json: bool,
    out: &mut dyn Write,
) -> Result<()> {
    for x in classes {
        if json {
            writeln!(out, "{}", emit_class_json(x))?;
        } else {
            writeln!(out, "{}", emit_class_text(x))?;
        }
    }
    Ok(())
}

fn dump_or_print(
    classes: &[DivisorClass],
    json: bool,
    out_file: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<()> {
    match out_file {
        Some(path) => {
            let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
            write_class_lines(classes, true, &mut file)?;
            file.flush()?;
            writeln!(stdout, "wrote {} classes to {}", classes.len(), path.display())?;
        }
        None => write_class_lines(classes, json, stdout)?,
    }
    Ok(())
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Classify { n, class, json } => {
            let (ctx, x) = resolve_class(&class, n)?;
            let r = classify_ray(&ctx, &x)?;
            if json {
                writeln!(
                    out,
                    "{{\"input\":{},\"primitive\":{},\"self_int\":{},\"k_degree\":{},\"support\":{},\"q\":\"{}\",\"k_region\":\"{}\",\"genus\":\"{}\"}}",
                    emit_class_json(&r.input),
                    emit_class_json(&r.primitive_gen),
                    r.self_int,
                    r.k_degree,
                    r.support,
                    r.q_region,
                    r.k_region,
                    format_rational(&r.genus),
                )?;
            } else {
                writeln!(
                    out,
                    "self_int={} k_degree={} support={} q={} k_region={} genus={} primitive={}",
                    r.self_int,
                    r.k_degree,
                    r.support,
                    r.q_region,
                    r.k_region,
                    format_rational(&r.genus),
                    emit_class_text(&r.primitive_gen),
                )?;
            }
            Ok(())
        }
        Command::Screen { n, class, json } => {
            let (ctx, x) = resolve_class(&class, n)?;
            let verdict = conjecture_screen(&ctx, &x)?;
            if json {
                writeln!(
                    out,
                    "{{\"class\":{},\"verdict\":\"{verdict}\"}}",
                    emit_class_json(&x)
                )?;
            } else {
                writeln!(out, "{verdict}")?;
            }
            Ok(())
        }
        Command::Reduce { n, class, json } => {
            let (ctx, x) = resolve_class(&class, n)?;
            let red = cremona_reduce(&ctx, &x)?;
            if json {
                writeln!(
                    out,
                    "{{\"canonical\":{},\"witness\":{}}}",
                    emit_class_json(&red.canonical),
                    emit_word(&red.witness)
                )?;
            } else {
                writeln!(
                    out,
                    "canonical={} witness={}",
                    emit_class_text(&red.canonical),
                    emit_word(&red.witness)
                )?;
            }
            Ok(())
        }
        Command::Orbit { n, class, budget, depth, json, out: out_file, cache } => {
            let (ctx, x) = resolve_class(&class, n)?;
            let budget = make_budget(budget, depth)?;
            let cached = match &cache {
                Some(path) => load_cache(path)?,
                None => Vec::new(),
            };
            let mut seeds = vec![x.clone()];
            for c in &cached {
                if c.n() == ctx.n() && in_same_orbit(&ctx, &x, c)? {
                    seeds.push(c.clone());
                }
            }
            let ball = orbit_ball_seeded(&ctx, &seeds, budget)?;
            if let Some(path) = &cache {
                let known: HashSet<&DivisorClass> = cached.iter().collect();
                let fresh: Vec<&DivisorClass> =
                    ball.classes.iter().filter(|c| !known.contains(c)).collect();
                if !fresh.is_empty() {
                    let mut file = std::io::BufWriter::new(
                        std::fs::OpenOptions::new().create(true).append(true).open(path)?,
                    );
                    for c in fresh {
                        writeln!(file, "{}", emit_class_json(c))?;
                    }
                    file.flush()?;
                }
            }
            dump_or_print(&ball.classes, json, out_file.as_deref(), out)?;
            if ball.truncated {
                writeln!(err, "note: ball truncated at budget {}", budget.max_classes())?;
            }
            Ok(())
        }
        Command::Neg1 { n, bound, json, out: out_file } => {
            let ctx = LatticeContext::new(n)?;
            let classes = enumerate_neg1(&ctx, bound);
            dump_or_print(&classes, json, out_file.as_deref(), out)
        }
        Command::Families { max_degree, json } => {
            if !json {
                writeln!(
                    out,
                    "{:<7} {:<34} {:>6} {:>6}  match",
                    "degree", "inventory", "size", "closed"
                )?;
            }
            for d in 2..=max_degree {
                let inv = inventory(d)?;
                let size = config_size(d)?;
                let closed = closed_form_size(d)?;
                let agree = size == closed;
                let entries: Vec<String> = inv
                    .entries()
                    .iter()
                    .map(|e| format!("{}x{}", e.count, e.local_type))
                    .collect();
                if json {
                    let parts: Vec<String> = inv
                        .entries()
                        .iter()
                        .map(|e| {
                            format!(
                                "{{\"count\":{},\"type\":\"{}\"}}",
                                e.count, e.local_type
                            )
                        })
                        .collect();
                    writeln!(
                        out,
                        "{{\"degree\":{d},\"entries\":[{}],\"size\":{size},\"closed\":{closed},\"match\":{agree}}}",
                        parts.join(",")
                    )?;
                } else {
                    writeln!(
                        out,
                        "{:<7} {:<34} {:>6} {:>6}  {}",
                        d,
                        entries.join("+"),
                        size,
                        closed,
                        if agree { "yes" } else { "NO" }
                    )?;
                }
            }
            Ok(())
        }
        Command::Resolve { r#type, json } => {
            let t = parse_local_type(&r#type)?;
            let chain = resolved_chain(&t);
            if json {
                let body = emit_chain_json(&chain);
                // Splice the input type into the chain object.
                writeln!(out, "{{\"type\":\"{t}\",{}", &body[1..])?;
            } else {
                writeln!(out, "{}", emit_chain_text(&chain))?;
            }
            Ok(())
        }
        Command::BuildClass { n, family, m, weights, json } => {
            let weights = parse_weight_list(&weights)?;
            let w = WeightAssignment {
                family_degree: family,
                pencil_degree: m,
                weights,
            };
            let rank = match n {
                Some(v) => v,
                None => config_size(family)? as usize,
            };
            let ctx = LatticeContext::new(rank)?;
            let x = build_candidate_class(&ctx, &w)?;
            if json {
                writeln!(out, "{}", emit_class_json(&x))?;
            } else {
                writeln!(out, "{}", emit_class_text(&x))?;
            }
            Ok(())
        }
        Command::SearchClasses { family, m_bound, k_bound, elliptic, json } => {
            let found = search_candidate_degrees(family, m_bound, k_bound, elliptic)?;
            for w in &found {
                if json {
                    let ks: Vec<String> = w.weights.iter().map(|k| k.to_string()).collect();
                    writeln!(
                        out,
                        "{{\"family\":{},\"m\":{},\"weights\":[{}]}}",
                        w.family_degree,
                        w.pencil_degree,
                        ks.join(",")
                    )?;
                } else {
                    let ks: Vec<String> = w.weights.iter().map(|k| k.to_string()).collect();
                    writeln!(out, "m={} weights={}", w.pencil_degree, ks.join(","))?;
                }
            }
            Ok(())
        }
        Command::OrbitCheck { n, budget, depth, json, classes } => {
            let parsed: Vec<DivisorClass> = classes
                .iter()
                .map(|c| parse_class(c))
                .collect::<Result<_>>()?;
            let rank = n.unwrap_or_else(|| parsed.iter().map(|x| x.n()).max().unwrap_or(1));
            let ctx = LatticeContext::new(rank)?;
            let mut xs = Vec::with_capacity(parsed.len());
            for x in &parsed {
                if rank < x.n() {
                    return Err(Error::DimensionMismatch { expected: rank, found: x.n() });
                }
                xs.push(pad_to(x, rank));
            }
            let report = orbit_k_invariance_check(&ctx, &xs, make_budget(budget, depth)?)?;
            // Seeds are numbered as given on the command line, from 1.
            let cells: Vec<String> = report
                .partition
                .iter()
                .map(|cell| {
                    let ids: Vec<String> = cell.iter().map(|i| (i + 1).to_string()).collect();
                    format!("[{}]", ids.join(","))
                })
                .collect();
            for s in &report.seeds {
                if json {
                    writeln!(
                        out,
                        "{{\"seed\":{},\"ball\":{},\"truncated\":{},\"k_degree\":{},\"primitive_k_degree\":{},\"k_constant\":{},\"primitive_k_constant\":{}}}",
                        emit_class_json(&s.seed),
                        s.ball_size,
                        s.truncated,
                        s.k_degree,
                        s.primitive_k_degree,
                        s.k_constant,
                        s.primitive_k_constant,
                    )?;
                } else {
                    writeln!(
                        out,
                        "seed={} ball={} truncated={} k_degree={} primitive_k_degree={} constant={}",
                        emit_class_text(&s.seed),
                        s.ball_size,
                        s.truncated,
                        s.k_degree,
                        s.primitive_k_degree,
                        if s.k_constant && s.primitive_k_constant { "yes" } else { "NO" },
                    )?;
                }
            }
            if json {
                writeln!(
                    out,
                    "{{\"partition\":[{}],\"all_invariant\":{}}}",
                    cells.join(","),
                    report.all_invariant()
                )?;
            } else {
                writeln!(out, "partition=[{}]", cells.join(","))?;
            }
            Ok(())
        }
        Command::Thresholds { json } => {
            let (all, high) = thresholds();
            if json {
                writeln!(out, "{{\"min_all\":{all},\"min_degree_ge5\":{high}}}")?;
            } else {
                writeln!(out, "{all} {high}")?;
            }
            Ok(())
        }
    }
}

/// Orbit test that stays within each rank's means: canonical forms where
/// reduction exists, degree plus multiplicity multiset below rank 3.
fn in_same_orbit(ctx: &LatticeContext, x: &DivisorClass, y: &DivisorClass) -> Result<bool> {
    if ctx.n() >= 3 {
        return Ok(cremona_reduce(ctx, x)?.canonical == cremona_reduce(ctx, y)?.canonical);
    }
    if x.degree() != y.degree() {
        return Ok(false);
    }
    let mut a = x.mults().to_vec();
    let mut b = y.mults().to_vec();
    a.sort();
    b.sort();
    Ok(a == b)
}
