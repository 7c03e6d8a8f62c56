//! Command-line surface over the Fano threefold atlas: query records,
//! regenerate the classification tables, run the verifier, and emit
//! machine-readable artifacts.
//!
//! Exit codes: 0 on success, 1 on verification failure, 2 on usage errors.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fano3::atlas::{Atlas, Delta, FanoRecord, Flag, RayType};
use fano3::enumerate::{
    self, DisjointPairRow, FibreBlowupRow, FibreLiftRow, FibreSquareRow, TransformRow, DEFAULT_CAP,
};
use fano3::surfaces::{Base, SurfaceClass};

#[derive(Parser)]
#[command(name = "fano3", version, about = "Fano threefold atlas and table generator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Markdown,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Stage {
    P2,
    #[value(name = "p1p1-4")]
    P1p1Rho4,
    #[value(name = "f1-3")]
    F1Rho3,
    #[value(name = "f1-4")]
    F1Rho4,
    #[value(name = "fibre-4")]
    FibreRho4,
    Rho5,
    DisjointP3,
    DisjointQ,
}

#[derive(Subcommand)]
enum Command {
    /// Print one record
    Show {
        id: String,
        #[arg(long, value_enum, default_value = "markdown")]
        format: Format,
    },
    /// List records matching the filters
    List {
        #[arg(long)]
        rho: Option<u32>,
        #[arg(long)]
        degree: Option<i64>,
        /// Extremal ray type: C1, C2, D1, D2, D3, E1, E2, E3_or_E4, E5
        #[arg(long)]
        has_ray: Option<String>,
        /// primitive, wild_conic_bundle_possible, existence_unknown
        #[arg(long)]
        flag: Option<String>,
        #[arg(long, value_enum, default_value = "markdown")]
        format: Format,
    },
    /// Regenerate a classification table
    Enumerate {
        #[arg(value_enum)]
        stage: Stage,
        #[arg(long, value_enum, default_value = "markdown")]
        format: Format,
        /// Search cap override (testing only)
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: i64,
    },
    /// Cross-check the database against the intersection calculi
    Verify {
        /// Check every record
        #[arg(long, conflicts_with = "id")]
        all: bool,
        id: Option<String>,
    },
    /// Emit the blowdown graph
    Graph {
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Dump a seed-space intersection ring as JSON
    Ring { name: String },
    /// List the seed-space catalog
    Seeds,
}

fn main() -> ExitCode {
    // die quietly when the reader closes the pipe
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> fano3::Result<ExitCode> {
    let atlas = Atlas::get();
    match cli.command {
        Command::Show { id, format } => {
            let r = atlas.lookup(&id)?;
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(r).unwrap()),
                _ => print_record(r),
            }
        }
        Command::List {
            rho,
            degree,
            has_ray,
            flag,
            format,
        } => {
            let ray = has_ray.map(|s| parse_ray(&s)).transpose()?;
            let flag = flag.map(|s| parse_flag(&s)).transpose()?;
            let rows = atlas.list(|r| {
                rho.is_none_or(|x| r.rho == x)
                    && degree.is_none_or(|x| r.degree == x)
                    && ray.is_none_or(|t| r.has_ray(t))
                    && flag.is_none_or(|f| r.has_flag(f))
            });
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&rows).unwrap()),
                Format::Csv => {
                    println!("id,rho,index,degree,description");
                    for r in rows {
                        println!(
                            "{},{},{},{},\"{}\"",
                            r.id, r.rho, r.index, r.degree, r.description
                        );
                    }
                }
                _ => {
                    println!("| id | rho | degree | description |");
                    println!("|---|---|---|---|");
                    for r in rows {
                        println!("| {} | {} | {} | {} |", r.id, r.rho, r.degree, r.description);
                    }
                }
            }
        }
        Command::Enumerate { stage, format, cap } => print_stage(stage, format, cap)?,
        Command::Verify { all, id } => {
            let report = if all || id.is_none() {
                atlas.verify_all()
            } else {
                atlas.verify_one(id.as_deref().unwrap())?
            };
            let failures: Vec<_> = report.failures().collect();
            for f in &failures {
                println!("FAIL {} [{}]: {}", f.record, f.check, f.detail);
            }
            println!("{} checks, {} failures", report.entries.len(), failures.len());
            if !failures.is_empty() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Graph { format } => {
            let edges = atlas.blowdown_graph();
            match format {
                Format::Dot => {
                    println!("digraph blowdowns {{");
                    println!("  rankdir=TB;");
                    for (src, e) in edges {
                        println!(
                            "  \"{}\" -> \"{}\" [label=\"pa={},kc={}\"];",
                            src, e.target, e.pa, e.kc
                        );
                    }
                    println!("}}");
                }
                Format::Json => {
                    let rows: Vec<_> = edges
                        .iter()
                        .map(|(src, e)| {
                            serde_json::json!({
                                "from": src, "to": e.target, "pa": e.pa, "kc": e.kc
                            })
                        })
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&rows).unwrap());
                }
                _ => {
                    println!("from,to,pa,kc");
                    for (src, e) in edges {
                        println!("{},{},{},{}", src, e.target, e.pa, e.kc);
                    }
                }
            }
        }
        Command::Ring { name } => {
            let ring = fano3::numring::seed_space(&name)?;
            println!("{}", serde_json::to_string_pretty(&ring.dump_json()).unwrap());
        }
        Command::Seeds => {
            for n in fano3::numring::seed_names() {
                let deg = fano3::numring::seed_space(&n)?.anticanonical_degree();
                println!("{n}\t(-K)^3 = {deg}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_ray(s: &str) -> fano3::Result<RayType> {
    Ok(match s {
        "C1" => RayType::C1,
        "C2" => RayType::C2,
        "D1" => RayType::D1,
        "D2" => RayType::D2,
        "D3" => RayType::D3,
        "E1" => RayType::E1,
        "E2" => RayType::E2,
        "E3_or_E4" | "E3" | "E4" => RayType::E3orE4,
        "E5" => RayType::E5,
        other => return Err(fano3::Error::BadAtlas(format!("unknown ray type `{other}`"))),
    })
}

fn parse_flag(s: &str) -> fano3::Result<Flag> {
    Ok(match s {
        "primitive" => Flag::Primitive,
        "wild_conic_bundle_possible" => Flag::WildConicBundlePossible,
        "existence_unknown" => Flag::ExistenceUnknown,
        other => return Err(fano3::Error::BadAtlas(format!("unknown flag `{other}`"))),
    })
}

fn print_record(r: &FanoRecord) {
    println!("# {}", r.id);
    println!("rho: {}   index: {}   (-K)^3: {}", r.rho, r.index, r.degree);
    if let Some(g) = r.genus_g {
        println!("genus: {g}");
    }
    println!("description: {}", r.description);
    println!("provenance: {}", r.provenance);
    if !r.flags.is_empty() {
        let flags: Vec<_> = r.flags.iter().map(|f| f.to_string()).collect();
        println!("flags: {}", flags.join(", "));
    }
    for ray in &r.rays {
        let mut line = format!("ray {}: -> {}", ray.ray_type, ray.target);
        if let Some(d) = &ray.delta {
            line += &format!(", Delta {d}");
        }
        if let Some(k2) = ray.fibre_k2 {
            line += &format!(", (-K)^2.X_t = {k2}");
        }
        if let (Some(pa), Some(kc)) = (ray.pa, ray.kc) {
            line += &format!(", pa = {pa}, -K.C = {kc}");
        }
        println!("{line}");
    }
    for cb in &r.conic_bundles {
        let delta = match &cb.delta {
            Delta::Class(c) => format!("{c}"),
            Delta::Wild(s) => s.clone(),
        };
        let pair = cb
            .pair
            .as_ref()
            .map(|p| format!(" [{} vs {}]", p[0], p[1]))
            .unwrap_or_default();
        println!("conic bundle over {}: Delta {}{}", cb.base, delta, pair);
    }
    for e in &r.blowdowns {
        println!("blowdown -> {} (pa = {}, -K.C = {})", e.target, e.pa, e.kc);
    }
    if let Some(p) = &r.ring_path {
        println!("ring path: {} with {} centre(s)", p.seed, p.centers.len());
    }
    for n in &r.notes {
        println!("note: {n}");
    }
}

/// Render a curve class the way the tables print them.
fn curve_cell(c: &SurfaceClass) -> String {
    match c.base {
        Base::P2 => format!("{}", c.coords()[0]),
        Base::P1xP1 => format!("({},{})", c.coords()[0], c.coords()[1]),
        Base::F1 => match (c.coords()[0], c.coords()[1]) {
            (0, 1) => "Gamma".to_string(),
            (0, 0) => "0".to_string(),
            (k, 0) => format!("tau*O({k})"),
            (a, b) => format!("({a},{b})"),
        },
    }
}

fn x_cell(r: &TransformRow) -> String {
    if r.x_candidates.is_empty() {
        "?".to_string()
    } else {
        r.x_candidates.join("|")
    }
}

struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn print(&self, format: Format) {
        match format {
            Format::Csv => {
                println!("{}", self.headers.join(","));
                for row in &self.rows {
                    println!("{}", row.join(","));
                }
            }
            _ => {
                println!("| {} |", self.headers.join(" | "));
                println!("|{}|", vec!["---"; self.headers.len()].join("|"));
                for row in &self.rows {
                    println!("| {} |", row.join(" | "));
                }
            }
        }
    }
}

fn transform_table(rows: &[TransformRow], curve_header: &str) -> Table {
    let headers = [
        "X",
        "Y",
        "Y'",
        "(-K_X)^3",
        curve_header,
        "p_a(B)",
        "-K_Y.B_Y",
        "-K_Y'.B_Y'",
    ]
    .map(String::from)
    .to_vec();
    let rows = rows
        .iter()
        .map(|r| {
            vec![
                x_cell(r),
                r.y_id.clone(),
                r.yp.to_string(),
                r.deg_x.to_string(),
                curve_cell(&r.curve),
                r.pa.to_string(),
                r.k_yb.to_string(),
                r.k_ypbp.to_string(),
            ]
        })
        .collect();
    Table { headers, rows }
}

fn print_stage(stage: Stage, format: Format, cap: i64) -> fano3::Result<()> {
    if format == Format::Dot {
        return Err(fano3::Error::BadAtlas(
            "dot output is only for the graph command".into(),
        ));
    }
    match stage {
        Stage::P2 => {
            let rows = enumerate::enumerate_p2(cap)?;
            emit(format, &rows, || transform_table(&rows, "deg B"));
        }
        Stage::P1p1Rho4 => {
            let rows = enumerate::enumerate_p1p1_rho4(cap)?;
            emit(format, &rows, || transform_table(&rows, "deg B"));
        }
        Stage::F1Rho3 => {
            let rows = enumerate::enumerate_f1_rho3()?;
            emit(format, &rows, || Table {
                headers: ["X", "(-K_X)^3", "X'", "(-K_X')^3", "deg Delta'"]
                    .map(String::from)
                    .to_vec(),
                rows: rows
                    .iter()
                    .map(|r: &FibreLiftRow| {
                        vec![
                            r.x_id.clone(),
                            r.deg_x.to_string(),
                            r.source_id.clone(),
                            r.deg_source.to_string(),
                            r.delta_deg.to_string(),
                        ]
                    })
                    .collect(),
            });
        }
        Stage::F1Rho4 => {
            let rows = enumerate::enumerate_f1_rho4(cap)?;
            emit(format, &rows, || transform_table(&rows, "Delta_f"));
        }
        Stage::FibreRho4 => {
            let rows = enumerate::enumerate_fibre_blowups_rho4(cap)?;
            emit(format, &rows, || Table {
                headers: ["X", "X'", "(-K_X)^3", "(-K_X')^3", "S'", "Delta'"]
                    .map(String::from)
                    .to_vec(),
                rows: rows
                    .iter()
                    .map(|r: &FibreBlowupRow| {
                        vec![
                            r.x_id.clone(),
                            r.source_id.clone(),
                            r.deg_x.to_string(),
                            r.deg_source.to_string(),
                            r.base.to_string(),
                            curve_cell(&r.delta),
                        ]
                    })
                    .collect(),
            });
        }
        Stage::Rho5 => {
            let rows = enumerate::enumerate_rho5(cap)?;
            emit(format, &rows, || Table {
                headers: ["Y", "Y'", "Z", "(-K_X)^3"].map(String::from).to_vec(),
                rows: rows
                    .iter()
                    .map(|r: &FibreSquareRow| {
                        vec![
                            r.y_id.clone(),
                            r.yp_id.clone(),
                            r.z_id.clone(),
                            r.deg_x.to_string(),
                        ]
                    })
                    .collect(),
            });
        }
        Stage::DisjointP3 | Stage::DisjointQ => {
            let v = if stage == Stage::DisjointP3 { "P3" } else { "Q" };
            let rows = enumerate::enumerate_disjoint_pairs(v)?;
            emit(format, &rows, || Table {
                headers: ["V", "Y1", "Y2", "X", "(-K_X)^3", "Delta"]
                    .map(String::from)
                    .to_vec(),
                rows: rows
                    .iter()
                    .map(|r: &DisjointPairRow| {
                        vec![
                            r.v.clone(),
                            r.y1_id.clone(),
                            r.y2_id.clone(),
                            r.x_id.clone(),
                            r.deg_x.to_string(),
                            curve_cell(&r.delta),
                        ]
                    })
                    .collect(),
            });
        }
    }
    Ok(())
}

fn emit<T: serde::Serialize>(format: Format, rows: &[T], table: impl FnOnce() -> Table) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(rows).unwrap()),
        _ => table().print(format),
    }
}
