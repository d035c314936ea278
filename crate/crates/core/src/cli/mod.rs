//! Command-line interface: file formats, reports, SVG output and the
//! command dispatcher used by the `origami` binary.

pub mod report;
pub mod svg;
pub mod text;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand};

use crate::aut::{automorphism_group, bounded_aut_search};
use crate::cover::{build_cover, check_cover_connected, check_flat, CoverError, Region};
use crate::perm::SquareId;
use crate::realize::{
    monster_heuristics, realize_countable, realize_finite, CountableOptions, FiniteOptions,
    RealizationCertificate, RealizeError, DEFAULT_MAX_SQUARES, DEFAULT_RADIUS, DEFAULT_RETRIES,
    DEFAULT_SEED_RADIUS, DEFAULT_VERTEX_BUDGET,
};
use crate::surface::{
    ball, euler_characteristic, genus, lemma1_origami, singularities, singularities_meeting,
    singularity_profile, Origami, SquareTiled, DEFAULT_CYCLE_BUDGET,
};

use report::{
    render_text, AutReport, BallReport, CoverReport, OrigamiReport, Report, SeedReport,
    SingularityReport, Status, SvgReport,
};
use text::{parse_group_spec, parse_origami_text, parse_voltages, render_voltages};

pub const EXIT_USAGE: i32 = 64;

/// Ball radius drawn for countable origamis and shown by `lemma1`.
pub const DEFAULT_BALL_RADIUS: usize = 4;

#[derive(Debug, Parser)]
#[command(
    name = "origami",
    version,
    about = "Square-tiled surfaces and their automorphisms"
)]
pub struct Cli {
    /// Print a JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and validate an origami file
    Validate { file: PathBuf },
    /// Vertex profile, genus and Euler characteristic
    Info { file: PathBuf },
    /// Translation automorphisms (exact if finite, bounded search otherwise)
    Aut {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: usize,
        #[arg(long, default_value_t = DEFAULT_SEED_RADIUS)]
        seed_radius: usize,
    },
    /// Build the voltage cover of a base origami
    Cover {
        base: PathBuf,
        voltages: PathBuf,
        /// Group specification, e.g. "perm: (1,2); (1,3)", "Z^2" or "F_2"
        group: String,
        /// Vertices checked for flatness on countable bases
        #[arg(long, default_value_t = DEFAULT_VERTEX_BUDGET)]
        budget: usize,
    },
    /// The staircase origami and a ball around square 1
    Lemma1 {
        #[arg(long = "ball", default_value_t = DEFAULT_BALL_RADIUS)]
        ball: usize,
    },
    /// Build an origami whose automorphism group is the given group
    Realize {
        group: String,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: usize,
        /// Vertex budget for flatness checks on infinite covers
        #[arg(long, default_value_t = DEFAULT_VERTEX_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = DEFAULT_SEED_RADIUS)]
        seed_radius: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_SQUARES)]
        max_squares: usize,
    },
    /// Draw an origami (or a ball of a countable one) as SVG
    Render {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long = "ball", default_value_t = DEFAULT_BALL_RADIUS)]
        ball: usize,
    },
}

/// Exit code and captured streams of one command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run_command<I, T>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandOutput {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                _ => CommandOutput {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: format!("{e}\n{}", Cli::command().render_help()),
                },
            };
        }
    };
    let report = execute(&cli.command);
    let code = report.status.exit_code();
    let stdout = if cli.json {
        let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
        s.push('\n');
        s
    } else {
        render_text(&report)
    };
    let stderr = match (&report.error, cli.json) {
        (Some(e), true) => format!("error: {e}\n"),
        _ => String::new(),
    };
    CommandOutput {
        code,
        stdout,
        stderr,
    }
}

fn read_origami(path: &Path) -> Result<Origami, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_origami_text(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn execute(cmd: &Command) -> Report {
    match cmd {
        Command::Validate { file } => {
            let r = Report::new("validate");
            match read_origami(file) {
                Ok(o) => Report {
                    origami: Some(OrigamiReport::of(&o)),
                    ..r
                },
                Err(e) => r.failed(Status::ValidationFailed, e),
            }
        }
        Command::Info { file } => {
            let r = Report::new("info");
            match read_origami(file) {
                Ok(o) if o.is_finite() => finite_info(r, &o),
                Ok(o) => Report {
                    origami: Some(OrigamiReport::of(&o)),
                    ..r
                }
                .failed(
                    Status::ValidationFailed,
                    "genus and profile need a finite origami; use `lemma1 --ball r` for the staircase",
                ),
                Err(e) => r.failed(Status::ValidationFailed, e),
            }
        }
        Command::Aut {
            file,
            radius,
            seed_radius,
        } => match read_origami(file) {
            Ok(o) => aut_report(&o, *radius, *seed_radius),
            Err(e) => Report::new("aut").failed(Status::ValidationFailed, e),
        },
        Command::Cover {
            base,
            voltages,
            group,
            budget,
        } => cover_report(base, voltages, group, *budget),
        Command::Lemma1 { ball: radius } => lemma1_report(*radius),
        Command::Realize {
            group,
            radius,
            budget,
            seed_radius,
            max_squares,
        } => realize_report(group, *radius, *budget, *seed_radius, *max_squares),
        Command::Render {
            file,
            output,
            ball: radius,
        } => render_report(file, output, *radius),
    }
}

fn finite_info(r: Report, o: &Origami) -> Report {
    Report {
        origami: Some(OrigamiReport::of(o)),
        profile: singularity_profile(o).ok(),
        genus: genus(o).ok(),
        chi: euler_characteristic(o).ok(),
        ..r
    }
}

fn aut_report(o: &Origami, radius: usize, seed_radius: usize) -> Report {
    let r = Report::new("aut");
    if o.is_finite() {
        return match automorphism_group(o) {
            Ok(elements) => Report {
                origami: Some(OrigamiReport::of(o)),
                aut: Some(AutReport::Exact {
                    order: elements.len(),
                    elements,
                }),
                ..r
            },
            Err(e) => r.failed(Status::ValidationFailed, e.to_string()),
        };
    }
    let base = SquareId::new(1);
    let seeds: Vec<SquareId> = ball(o, &base, seed_radius).iter().copied().collect();
    let verdicts = bounded_aut_search(o, &base, radius, &seeds);
    let surviving = verdicts
        .iter()
        .filter(|v| !v.verdict.is_refuted())
        .map(|v| v.seed.to_string())
        .collect();
    Report {
        origami: Some(OrigamiReport::of(o)),
        aut: Some(AutReport::Bounded {
            base,
            radius,
            seed_radius,
            seeds: verdicts.iter().map(SeedReport::of).collect(),
            surviving,
        }),
        ..r
    }
}

fn cover_report(base: &Path, voltages: &Path, group: &str, budget: usize) -> Report {
    let r = Report::new("cover");
    let load = || -> Result<_, String> {
        let o = read_origami(base)?;
        let g = parse_group_spec(group).map_err(|e| e.to_string())?;
        let text = std::fs::read_to_string(voltages)
            .map_err(|e| format!("{}: {e}", voltages.display()))?;
        let v = parse_voltages(&g, &text).map_err(|e| format!("{}: {e}", voltages.display()))?;
        Ok((o, g, v))
    };
    let (o, g, v) = match load() {
        Ok(x) => x,
        Err(e) => return r.failed(Status::ValidationFailed, e),
    };
    let flat = if o.is_finite() {
        check_flat(&o, &v, Region::All)
    } else {
        let mut upto = v
            .support()
            .iter()
            .map(|s| s.get() as usize + 3)
            .max()
            .unwrap_or(0)
            .max(budget)
            .max(1);
        loop {
            let squares: Vec<SquareId> = (1..=upto as u32).map(SquareId::new).collect();
            match check_flat(&o, &v, Region::Squares(&squares)) {
                Ok(f) if f.vertices.len() < budget => upto *= 2,
                other => break other,
            }
        }
    };
    let flat = match flat {
        Ok(f) => f,
        Err(e) => return r.failed(Status::ValidationFailed, e.to_string()),
    };
    if let Some(bad) = flat.offending().next() {
        let e = CoverError::NotFlat {
            anchor: *bad.singularity.anchor(),
            word: bad.word.clone(),
        };
        return r.failed(Status::ValidationFailed, e.to_string());
    }
    let cover = match build_cover(&o, &v) {
        Ok(c) => c,
        Err(e) => return r.failed(Status::ValidationFailed, e.to_string()),
    };
    let connectivity = check_cover_connected(&cover, budget);
    let group_order = g
        .elements(crate::group::DEFAULT_CLOSURE_CAP)
        .ok()
        .map(|e| e.len());
    let cr = CoverReport {
        group: g.to_string(),
        group_order,
        voltages: render_voltages(&v),
        flat_vertices_checked: flat.vertices.len(),
        connectivity,
        origami: Some(OrigamiReport::of(&o)),
    };
    if cover.is_finite() {
        return match cover.to_origami() {
            Ok((co, _)) => Report {
                cover: Some(cr),
                ..finite_info(r, &co)
            },
            Err(e) => Report {
                cover: Some(cr),
                ..r
            }
            .failed(Status::ValidationFailed, e.to_string()),
        };
    }
    let growth = monster_heuristics(&cover, &[2, 4, 6]);
    Report {
        cover: Some(cr),
        growth: Some(growth),
        ..r
    }
}

fn lemma1_report(radius: usize) -> Report {
    let o = lemma1_origami();
    let base = SquareId::new(1);
    let b = ball(&o, &base, radius);
    let sings =
        singularities_meeting(&o, b.iter().copied(), DEFAULT_CYCLE_BUDGET).unwrap_or_default();
    let radii: Vec<usize> = (1..=radius.max(1))
        .filter(|r| r % 2 == 0 || *r == radius)
        .collect();
    Report {
        origami: Some(OrigamiReport::of(&o)),
        ball: Some(BallReport {
            base: base.to_string(),
            radius,
            closed: b.closed,
            squares: b.iter().map(|s| s.to_string()).collect(),
        }),
        singularities: Some(sings.iter().map(SingularityReport::of).collect()),
        growth: Some(monster_heuristics(&o, &radii)),
        ..Report::new("lemma1")
    }
}

fn realize_report(
    group: &str,
    radius: usize,
    budget: usize,
    seed_radius: usize,
    max_squares: usize,
) -> Report {
    let r = Report::new("realize");
    let g = match parse_group_spec(group) {
        Ok(g) => g,
        Err(e) => return r.failed(Status::ValidationFailed, e.to_string()),
    };
    let fail = |r: Report, e: RealizeError| r.failed(Status::CertificateFailed, e.to_string());
    if g.is_finite() {
        let opts = FiniteOptions {
            max_squares,
            retries: DEFAULT_RETRIES,
        };
        return match realize_finite(&g, opts) {
            Ok(res) => {
                let order = match &res.certificate {
                    RealizationCertificate::Exact { order, .. } => Some(*order),
                    RealizationCertificate::Bounded(_) => None,
                };
                let cover = CoverReport {
                    group: g.to_string(),
                    group_order: order,
                    voltages: render_voltages(&res.voltages),
                    flat_vertices_checked: singularities(&res.base.origami)
                        .map(|s| s.len())
                        .unwrap_or(0),
                    connectivity: crate::cover::CoverConnectivity::Connected,
                    origami: Some(OrigamiReport::of(&res.base.origami)),
                };
                Report {
                    cover: Some(cover),
                    certificate: Some(res.certificate),
                    ..finite_info(r, &res.origami)
                }
            }
            Err(e) => fail(r, e),
        };
    }
    let opts = CountableOptions {
        radius,
        vertex_budget: budget,
        seed_radius,
    };
    match realize_countable(&g, opts) {
        Ok(res) => {
            let cover = CoverReport {
                group: g.to_string(),
                group_order: None,
                voltages: render_voltages(&res.voltages),
                flat_vertices_checked: res.certificate.flat_vertices,
                connectivity: res.connectivity.clone(),
                origami: Some(OrigamiReport::of(&lemma1_origami())),
            };
            Report {
                cover: Some(cover),
                certificate: Some(RealizationCertificate::Bounded(res.certificate)),
                growth: Some(monster_heuristics(&res.cover, &[2, 4, 6])),
                ..r
            }
        }
        Err(e) => fail(r, e),
    }
}

fn render_report(file: &Path, output: &Path, radius: usize) -> Report {
    let r = Report::new("render");
    let o = match read_origami(file) {
        Ok(o) => o,
        Err(e) => return r.failed(Status::ValidationFailed, e),
    };
    let squares: Vec<SquareId> = match o.square_count() {
        Some(n) => (0..n).map(SquareId::from_index).collect(),
        None => ball(&o, &SquareId::new(1), radius)
            .iter()
            .copied()
            .collect(),
    };
    let layout = svg::layout(&o, &squares);
    let text = match o.square_count() {
        Some(_) => svg::render_svg(&o),
        None => svg::render_ball_svg(&o, &ball(&o, &SquareId::new(1), radius)),
    };
    if let Err(e) = std::fs::write(output, text) {
        return r.failed(
            Status::ValidationFailed,
            format!("{}: {e}", output.display()),
        );
    }
    Report {
        svg: Some(SvgReport {
            path: output.display().to_string(),
            squares: squares.len(),
            components: layout.components,
        }),
        ..r
    }
}
