use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use latpoly::ehrhart::{ehrhart_count, quasipolynomial};
use latpoly::enumerate::{EnumerationBox, EnumerationConfig};
use latpoly::exact::{fmt_rational, Polygon};
use latpoly::extremal::{
    area_maximizers, area_minimizers, half_integral_max_area, maximizer_families, scott_maximizer, FamilyId, HullDim,
};
use latpoly::io::{parse_polygon, read_polygon, write_polygon, PolygonFile};
use latpoly::lattice::{integer_hull, lattice_stats, lattice_width};
use latpoly::render::{render_svg, FigureSpec};
use latpoly::verify::{self, Census};
use latpoly::Error;

const EXIT_USAGE: u8 = 64;
const EXIT_DOMAIN: u8 = 65;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(name = "latpoly", version, about = "Exact toolkit for rational polygons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice statistics, lattice width and integer hull of a polygon file
    Stats { file: PathBuf },
    /// Write the members of an extremal family with a manifest
    Extremal {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(short)]
        k: u64,
        #[arg(short)]
        i: u64,
        #[arg(short)]
        b: Option<u64>,
        /// integer hull case for `--kind min`
        #[arg(long, value_enum, default_value = "two")]
        dim: Dim,
        #[arg(short, long, default_value = ".")]
        out: PathBuf,
    },
    /// Ehrhart quasipolynomial and counts of a polygon file
    Ehrhart {
        file: PathBuf,
        #[arg(long)]
        tmax: Option<u64>,
    },
    /// Replay a bound over a complete enumeration and write a JSON report
    Verify {
        #[arg(long, value_enum)]
        task: Task,
        #[arg(short, default_value_t = 2)]
        k: u64,
        #[arg(short)]
        i: u64,
        /// horizontal and vertical box extents in grid units
        #[arg(long = "box", num_args = 2, value_names = ["X", "Y"])]
        bx: Option<Vec<i64>>,
        /// grow the box by this many grid units (saturation check)
        #[arg(long, default_value_t = 0)]
        grow: i64,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Enumerate all classes in a box into DIR/classes.jsonl
    Enumerate {
        #[arg(short)]
        k: u64,
        #[arg(short)]
        i: u64,
        #[arg(long = "box", num_args = 2, value_names = ["X", "Y"])]
        bx: Option<Vec<i64>>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Render a figure spec to SVG
    Render {
        spec: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Scott,
    Min,
    Max,
    HalfMax,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dim {
    Two,
    Collinear,
}

#[derive(Clone, Copy, ValueEnum)]
enum Task {
    Scott,
    AreaLower,
    AreaUpper,
    HalfIntegral,
    B2p,
    MaximizerStructure,
    Conjecture,
}

enum Failure {
    Lib(Error),
    Io(String),
    Exit(u8),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Exit(c)) => ExitCode::from(c),
        Err(Failure::Io(msg)) => {
            eprintln!("latpoly: {msg}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("latpoly: {e}");
            ExitCode::from(match e {
                Error::Parse(_) => EXIT_USAGE,
                Error::ResourceLimit { .. } => 2,
                _ => EXIT_DOMAIN,
            })
        }
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Stats { file } => {
            let p = load(&file)?;
            print!("{}", stats_text(&p));
            Ok(())
        }
        Command::Extremal { kind, k, i, b, dim, out } => extremal(kind, k, i, b, dim, &out),
        Command::Ehrhart { file, tmax } => {
            let p = load(&file)?;
            let q = quasipolynomial(&p);
            let tmax = tmax.unwrap_or(4 * q.period);
            let counts: Vec<_> = (1..=tmax).map(|t| json!([t, ehrhart_count(&p, t)])).collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({"quasipolynomial": q, "counts": counts})).expect("json")
            );
            Ok(())
        }
        Command::Verify { task, k, i, bx, grow, budget, out } => verify_cmd(task, k, i, bx, grow, budget, out),
        Command::Enumerate { k, i, bx, budget, out } => enumerate_cmd(k, i, bx, budget, &out),
        Command::Render { spec, out } => {
            let text = std::fs::read_to_string(&spec)?;
            let spec: FigureSpec = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            std::fs::write(out, render_svg(&spec)?)?;
            Ok(())
        }
    }
}

/// Unreadable files are io failures; bad contents are parse failures.
fn load(path: &Path) -> Result<Polygon, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_polygon(&text)?)
}

fn stats_text(p: &Polygon) -> String {
    let s = lattice_stats(p);
    let (lw, dir) = lattice_width(p);
    let hull = integer_hull(p);
    let pts: Vec<String> =
        hull.points().iter().map(|v| format!("({},{})", fmt_rational(&v.x), fmt_rational(&v.y))).collect();
    format!(
        "i={} b={} k={} area={}\nArea_k={}\nlw={} direction=({},{})\ninteger_hull={} {}\n",
        s.i,
        s.b,
        s.k,
        fmt_rational(&s.area),
        s.area_k,
        fmt_rational(&lw),
        dir.0,
        dir.1,
        hull.kind(),
        pts.join(" ")
    )
}

fn extremal(kind: Kind, k: u64, i: u64, b: Option<u64>, dim: Dim, out: &Path) -> Result<(), Failure> {
    let need_b = || b.ok_or_else(|| Error::Parse("this kind needs -b".into()));
    let members: Vec<(FamilyId, Polygon)> = match kind {
        Kind::Scott => {
            let p = scott_maximizer(k, i)?;
            let bm = latpoly::extremal::b_max(k, i)?;
            vec![(FamilyId::new(latpoly::extremal::FamilyKind::ScottMax, "tri", k, i, bm, None), p)]
        }
        Kind::Min => {
            let d = match dim {
                Dim::Two => HullDim::Two,
                Dim::Collinear => HullDim::Collinear,
            };
            area_minimizers(k, i, need_b()?, d)?.into_iter().map(|m| (m.id, m.polygon)).collect()
        }
        Kind::Max => area_maximizers(k, i, need_b()?)?,
        Kind::HalfMax => {
            if k != 2 {
                return Err(Error::Domain("half-max needs k = 2".into()).into());
            }
            let b = need_b()?;
            let bound = half_integral_max_area(i, b)?;
            let fams: Vec<_> = maximizer_families(2, i, b)?.into_iter().filter(|(_, p)| p.area() == bound).collect();
            if fams.is_empty() {
                return Err(Error::Domain(format!(
                    "the maximizers at (i,b) = ({i},{b}) lie outside R x [-1,1/2]; \
                     `latpoly verify --task maximizer-structure -i {i}` lists them"
                ))
                .into());
            }
            fams
        }
    };
    std::fs::create_dir_all(out)?;
    let mut manifest = serde_json::Map::new();
    for (n, (id, p)) in members.iter().enumerate() {
        let name = format!("{:03}.json", n);
        let path = out.join(&name);
        write_polygon(&path, p)?;
        // re-read and re-check before listing the file
        let back = read_polygon(&path)?;
        let (s, t) = (lattice_stats(&back), lattice_stats(p));
        if back != *p || (s.i, s.b, &s.k) != (id.i, id.b, &t.k) {
            return Err(Error::InvalidPolygon(format!("{id} did not survive the round trip")).into());
        }
        manifest.insert(id.to_string(), json!(name));
    }
    let text = serde_json::to_string_pretty(&manifest).expect("json");
    std::fs::write(out.join("manifest.json"), text + "\n")?;
    println!("wrote {} polygon files to {}", members.len(), out.display());
    Ok(())
}

fn config(budget: Option<u64>) -> EnumerationConfig {
    EnumerationConfig { budget, ..Default::default() }
}

fn custom_box(k: u64, i: u64, bx: Option<Vec<i64>>) -> Result<Option<EnumerationBox>, Failure> {
    Ok(match bx.as_deref() {
        None => None,
        Some([x, y]) => Some(EnumerationBox::lattice_width(k as i64, i, *y, *x, "box given on the command line")),
        Some(_) => return Err(Error::Parse("--box takes X and Y".into()).into()),
    })
}

#[allow(clippy::too_many_arguments)]
fn verify_cmd(
    task: Task,
    k: u64,
    i: u64,
    bx: Option<Vec<i64>>,
    grow: i64,
    budget: Option<u64>,
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let k = match task {
        Task::HalfIntegral | Task::B2p | Task::MaximizerStructure | Task::Conjecture => 2,
        _ => k,
    };
    let base = match (custom_box(k, i, bx)?, task) {
        (Some(mut b), Task::MaximizerStructure) => {
            b.exact_denominator = false;
            b
        }
        (None, Task::AreaUpper) if k >= 4 => verify::upper_strip_box(k, i)?,
        (None, Task::MaximizerStructure) => verify::half_integral_box(i)?,
        (Some(b), _) => b,
        (None, _) => verify::certified_box(k, i)?,
    };
    let census = Census::run(if grow > 0 { base.grown(grow) } else { base }, &config(budget))?;
    let report = match task {
        Task::Scott => verify::check_scott(k, i, &census)?,
        Task::AreaLower => verify::check_area_lower(k, i, &census)?,
        Task::AreaUpper => verify::check_area_upper(k, i, &census)?,
        Task::HalfIntegral => verify::check_half_integral(i, &census)?,
        Task::B2p => verify::check_b2p(i, &census)?,
        Task::MaximizerStructure => verify::check_maximizer_structure(i, &census)?,
        Task::Conjecture => verify::check_conjecture(i, &census)?,
    };
    let text = serde_json::to_string_pretty(&report).expect("json") + "\n";
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    eprintln!(
        "{}: {} classes, {} violations, complete = {}",
        report.task,
        report.polygons_examined,
        report.violations.len(),
        report.complete
    );
    match report.exit_code() {
        0 => Ok(()),
        c => Err(Failure::Exit(c as u8)),
    }
}

fn enumerate_cmd(k: u64, i: u64, bx: Option<Vec<i64>>, budget: Option<u64>, out: &Path) -> Result<(), Failure> {
    let bx = match custom_box(k, i, bx)? {
        Some(b) => b,
        None => verify::certified_box(k, i)?,
    };
    let census = Census::run(bx, &config(budget))?;
    std::fs::create_dir_all(out)?;
    let mut lines = String::new();
    for c in census.classes() {
        let row = json!({"b": c.b, "area_k": c.area_k, "vertices": PolygonFile::from_polygon(&c.polygon()).vertices});
        lines.push_str(&row.to_string());
        lines.push('\n');
    }
    std::fs::write(out.join("classes.jsonl"), lines)?;
    let summary = json!({
        "box": census.bx,
        "classes": census.classes().len(),
        "nodes": census.enumeration.nodes,
        "complete": census.complete(),
        "elapsed_ms": census.elapsed_ms,
    });
    std::fs::write(out.join("summary.json"), serde_json::to_string_pretty(&summary).expect("json") + "\n")?;
    println!("{} classes written to {}", census.classes().len(), out.display());
    if census.complete() {
        Ok(())
    } else {
        Err(Failure::Exit(2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn stats_text_lists_every_field() {
        let p = scott_maximizer(2, 1).unwrap();
        let text = stats_text(&p);
        assert!(text.starts_with("i=1 b=9 k=2 area=9/2\nArea_k=36\n"), "{text}");
        assert!(text.contains("lw=3/2"));
        assert!(text.contains("integer_hull="));
    }

    #[test]
    fn box_arguments_need_two_values() {
        assert!(custom_box(2, 1, Some(vec![4])).is_err());
        let bx = custom_box(2, 1, Some(vec![12, 6])).ok().flatten().unwrap();
        assert_eq!((bx.x_max, bx.y_max), (13, 7));
    }
}
