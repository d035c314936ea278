//! Structured command output. Field order here is the JSON field order.

use std::fmt::Write as _;

use serde::Serialize;

use crate::aut::{AutVerdict, SeedVerdict};
use crate::cover::CoverConnectivity;
use crate::perm::{FinitePerm, SquareId};
use crate::realize::{MonsterReport, RealizationCertificate};
use crate::surface::{Connectivity, Origami, Singularity, SquareTiled};

use super::text::render_origami_text;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    ValidationFailed,
    CertificateFailed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ValidationFailed => 2,
            Status::CertificateFailed => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub origami: Option<OrigamiReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ball: Option<BallReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singularities: Option<Vec<SingularityReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aut: Option<AutReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<RealizationCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<MonsterReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub svg: Option<SvgReport>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            status: Status::Ok,
            error: None,
            origami: None,
            profile: None,
            genus: None,
            chi: None,
            ball: None,
            singularities: None,
            aut: None,
            cover: None,
            certificate: None,
            growth: None,
            svg: None,
        }
    }

    pub fn failed(mut self, status: Status, error: impl Into<String>) -> Self {
        self.status = status;
        self.error = Some(error.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrigamiReport {
    pub squares: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub builtin: Option<&'static str>,
    pub connectivity: &'static str,
    pub text: String,
}

impl OrigamiReport {
    pub fn of(o: &Origami) -> Self {
        OrigamiReport {
            squares: o.square_count(),
            builtin: o.builtin_name(),
            connectivity: match o.validation().connectivity {
                Connectivity::Connected => "connected",
                Connectivity::ByConstruction => "connected by construction",
                Connectivity::Unverified => "unverified",
            },
            text: render_origami_text(o),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BallReport {
    pub base: String,
    pub radius: usize,
    pub closed: bool,
    pub squares: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularityReport {
    pub degree: usize,
    pub cycle: Vec<String>,
}

impl SingularityReport {
    pub fn of<S: std::fmt::Display>(s: &Singularity<S>) -> Self {
        SingularityReport {
            degree: s.degree,
            cycle: s.cycle.iter().map(|x| x.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AutReport {
    Exact {
        order: usize,
        elements: Vec<FinitePerm>,
    },
    Bounded {
        base: SquareId,
        radius: usize,
        seed_radius: usize,
        seeds: Vec<SeedReport>,
        surviving: Vec<String>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct SeedReport {
    pub seed: String,
    pub verdict: &'static str,
    pub summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

impl SeedReport {
    pub fn of<S>(v: &SeedVerdict<S>) -> Self
    where
        S: std::hash::Hash + Eq + std::fmt::Display + std::fmt::Debug,
    {
        let seed = v.seed.to_string();
        match &v.verdict {
            AutVerdict::Total(_) => SeedReport {
                seed,
                verdict: "total",
                summary: "extends to an automorphism".into(),
                depth: None,
            },
            AutVerdict::CertifiedToRadius(_, r) => SeedReport {
                seed,
                verdict: "no_obstruction",
                summary: format!("no obstruction found within radius {r}"),
                depth: None,
            },
            AutVerdict::RefutedAtDepth { depth, conflict } => SeedReport {
                seed,
                verdict: "refuted",
                summary: conflict.to_string(),
                depth: Some(*depth),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverReport {
    pub group: String,
    pub group_order: Option<usize>,
    pub voltages: String,
    pub flat_vertices_checked: usize,
    pub connectivity: CoverConnectivity,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub origami: Option<OrigamiReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SvgReport {
    pub path: String,
    pub squares: usize,
    pub components: usize,
}

fn join<T: std::fmt::Display>(xs: &[T], sep: &str) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

/// Human-readable rendering.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    if let Some(e) = &r.error {
        let _ = writeln!(out, "error: {e}");
    }
    if let Some(o) = &r.origami {
        match o.squares {
            Some(n) => {
                let _ = writeln!(out, "squares: {n}");
            }
            None => {
                let _ = writeln!(
                    out,
                    "squares: countable ({})",
                    o.builtin.unwrap_or("custom")
                );
            }
        }
        let _ = writeln!(out, "connectivity: {}", o.connectivity);
    }
    if let Some(p) = &r.profile {
        let _ = writeln!(out, "profile: {{{}}}", join(p, ", "));
    }
    if let Some(g) = r.genus {
        let _ = writeln!(out, "genus: {g}");
    }
    if let Some(c) = r.chi {
        let _ = writeln!(out, "chi: {c}");
    }
    if let Some(b) = &r.ball {
        let closed = if b.closed { ", closed" } else { "" };
        let _ = writeln!(
            out,
            "ball({}, {}): {} squares{closed}: {}",
            b.base,
            b.radius,
            b.squares.len(),
            b.squares.join(" ")
        );
    }
    if let Some(sings) = &r.singularities {
        for s in sings {
            let _ = writeln!(out, "vertex degree {}: ({})", s.degree, s.cycle.join(","));
        }
    }
    match &r.aut {
        Some(AutReport::Exact { order, elements }) => {
            let _ = writeln!(out, "aut order: {order}");
            for e in elements {
                let _ = writeln!(out, "  {e}");
            }
        }
        Some(AutReport::Bounded {
            base,
            radius,
            seed_radius,
            seeds,
            surviving,
        }) => {
            let _ = writeln!(
                out,
                "aut (bounded): base {base}, radius {radius}, seeds within {seed_radius}"
            );
            for s in seeds {
                let _ = writeln!(out, "  {} -> {}: {}", base, s.seed, s.summary);
            }
            let _ = writeln!(out, "surviving seeds: {}", surviving.join(" "));
        }
        None => {}
    }
    if let Some(c) = &r.cover {
        let _ = writeln!(out, "group: {}", c.group);
        if let Some(order) = c.group_order {
            let _ = writeln!(out, "group order: {order}");
        }
        let _ = writeln!(out, "flat: checked {} vertices", c.flat_vertices_checked);
        let conn = match &c.connectivity {
            CoverConnectivity::Connected => "connected".to_string(),
            CoverConnectivity::Disconnected { witness } => {
                format!("disconnected ({witness} unreachable)")
            }
            CoverConnectivity::Unknown { explored, .. } => {
                format!("unknown after {explored} base squares")
            }
        };
        let _ = writeln!(out, "cover: {conn}");
        if let Some(o) = &c.origami {
            let _ = writeln!(out, "base:");
            out.push_str(&o.text);
        }
    }
    match &r.certificate {
        Some(RealizationCertificate::Exact { order, .. }) => {
            let _ = writeln!(out, "certificate: exact, Aut = deck group of order {order}");
        }
        Some(RealizationCertificate::Bounded(b)) => {
            let _ = writeln!(out, "certificate: bounded (not a proof)");
            let _ = writeln!(out, "  flat vertices checked: {}", b.flat_vertices);
            let _ = writeln!(
                out,
                "  deck maps verified on radius-{} ball: {}",
                b.radius,
                join(&b.verified_deck_elems, " ")
            );
            let _ = writeln!(
                out,
                "  seeds within radius {}: {} examined, {} refuted (max depth {})",
                b.seed_radius, b.seeds_examined, b.refuted_seed_count, b.max_refutation_depth
            );
            let _ = writeln!(
                out,
                "  deck seeds with no obstruction found within radius {}: {}",
                b.radius,
                join(&b.certified_deck_seeds, " ")
            );
        }
        None => {}
    }
    if let Some(g) = &r.growth {
        for row in &g.rows {
            let _ = writeln!(
                out,
                "radius {}: {} squares, {} branched vertices",
                row.radius, row.squares, row.branched_vertices
            );
        }
        let _ = writeln!(out, "({})", g.disclaimer);
    }
    if let Some(s) = &r.svg {
        let _ = writeln!(
            out,
            "wrote {} ({} squares, {} component{})",
            s.path,
            s.squares,
            s.components,
            if s.components == 1 { "" } else { "s" }
        );
    }
    if let (Some(o), "realize" | "cover") = (&r.origami, r.command) {
        let _ = writeln!(out, "origami:");
        out.push_str(&o.text);
    }
    out
}
