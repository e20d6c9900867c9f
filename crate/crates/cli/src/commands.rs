//! Command implementations. Each returns module results plus a residual
//! summary, or a failure with diagnostics.

use std::cell::OnceCell;

use cubic_core::eigen::{eigen_real_census, eigenpoints, EigenConfig};
use cubic_core::lines::{
    double_sixes, eckardt_points, find_lines, incidence_graph, real_line_census, tritangent_planes, IncidenceGraph,
    LineConfig, LineSet27, TritangentPlane,
};
use cubic_core::normal_forms::{brundu_logar, cayley_salmon_all, pentahedral, BrunduLogarConfig, PentaConfig};
use cubic_core::resultant::is_singular;
use cubic_core::tropical::{is_tropically_smooth, regular_subdivision, smoothness_search, valuation_vector, ValuationVector};
use cubic_core::CubicForm;
use serde_json::{json, Map, Value};

pub const DEFAULT_BUDGET: usize = 16;

#[derive(Clone, Debug)]
pub struct Options {
    pub seed: u64,
    pub tol: Option<f64>,
    pub prime: u64,
    pub budget: usize,
}

pub struct Section {
    pub results: Value,
    pub residuals: Map<String, Value>,
}

pub struct Failure {
    pub error: String,
    pub diagnostic: Value,
}

impl Failure {
    fn new<E: std::fmt::Display + std::fmt::Debug>(error: E) -> Self {
        Self {
            error: error.to_string(),
            diagnostic: json!({"detail": format!("{error:?}")}),
        }
    }

    fn with(error: impl ToString, diagnostic: Value) -> Self {
        Self {
            error: error.to_string(),
            diagnostic,
        }
    }
}

pub type Outcome = Result<Section, Failure>;

fn exact() -> Value {
    json!("exact")
}

fn residuals<const N: usize>(items: [(&str, Value); N]) -> Map<String, Value> {
    items.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

/// Per-run state; lines and their combinatorics are computed at most once.
pub struct Ctx {
    pub f: Option<CubicForm>,
    pub valuation: Option<ValuationVector>,
    pub opts: Options,
    lines: OnceCell<Result<LineSet27, String>>,
    graph: OnceCell<Result<(IncidenceGraph, Vec<TritangentPlane>), String>>,
}

impl Ctx {
    pub fn new(f: Option<CubicForm>, valuation: Option<ValuationVector>, opts: Options) -> Self {
        Self {
            f,
            valuation,
            opts,
            lines: OnceCell::new(),
            graph: OnceCell::new(),
        }
    }

    fn f(&self) -> Result<&CubicForm, Failure> {
        self.f.as_ref().ok_or_else(|| Failure::new("this command needs --poly or --coeffs"))
    }

    fn line_config(&self) -> LineConfig {
        let mut c = LineConfig::with_seed(self.opts.seed);
        if let Some(t) = self.opts.tol {
            c.restriction_tol = t;
        }
        c
    }

    fn line_set(&self) -> Result<&LineSet27, Failure> {
        let f = self.f()?;
        self.lines
            .get_or_init(|| find_lines(f, &self.line_config()).map_err(|e| e.to_string()))
            .as_ref()
            .map_err(Failure::new)
    }

    fn complete_lines(&self) -> Result<&LineSet27, Failure> {
        let set = self.line_set()?;
        if set.is_complete() {
            Ok(set)
        } else {
            Err(Failure::with(
                format!("fewer than 27 lines found ({})", set.len()),
                json!({"found": set.len(), "stats": to_json(&set.stats), "singular_solutions": set.singular_solutions}),
            ))
        }
    }

    fn graph_planes(&self) -> Result<(&IncidenceGraph, &[TritangentPlane]), Failure> {
        let set = self.complete_lines()?;
        let r = self.graph.get_or_init(|| {
            let g = incidence_graph(set).map_err(|e| e.to_string())?;
            let p = tritangent_planes(set, &g).map_err(|e| e.to_string())?;
            Ok((g, p))
        });
        match r {
            Ok((g, p)) => Ok((g, p.as_slice())),
            Err(e) => Err(Failure::new(e)),
        }
    }
}

fn line_residuals(set: &LineSet27) -> Map<String, Value> {
    residuals([
        ("max_restriction_residual", json!(set.max_restriction_residual)),
        ("max_solver_residual", json!(set.max_solver_residual)),
    ])
}

pub fn lines(ctx: &Ctx) -> Outcome {
    let set = ctx.line_set()?;
    let census = if set.is_complete() {
        to_json(&real_line_census(set).map_err(Failure::new)?)
    } else {
        Value::Null
    };
    Ok(Section {
        results: json!({
            "count": set.len(),
            "complete": set.is_complete(),
            "real_count": set.lines.iter().filter(|l| l.is_real).count(),
            "census": census,
            "singular_solutions": set.singular_solutions,
            "rejected": set.rejected,
            "attempts": set.attempts,
            "stats": to_json(&set.stats),
            "lines": to_json(&set.lines),
        }),
        residuals: line_residuals(set),
    })
}

fn incidence_results(ctx: &Ctx) -> Result<(Map<String, Value>, Map<String, Value>), Failure> {
    let set = ctx.complete_lines()?;
    let (g, planes) = ctx.graph_planes()?;
    let ds = double_sixes(g).map_err(Failure::new)?;
    let mut res = Map::new();
    res.insert("edges".into(), to_json(&g.edges));
    res.insert("edge_count".into(), json!(g.edges.len()));
    res.insert("degrees".into(), to_json(&g.degrees()));
    res.insert("rechecked".into(), to_json(&g.rechecked));
    res.insert("tritangent_planes".into(), to_json(&planes));
    res.insert("plane_count".into(), json!(planes.len()));
    res.insert("double_sixes".into(), to_json(&ds));
    res.insert("double_six_count".into(), json!(ds.len()));
    res.insert("census".into(), to_json(&real_line_census(set).map_err(Failure::new)?));
    let mut r = line_residuals(set);
    r.insert("max_plane_residual".into(), json!(max_of(planes.iter().map(|p| p.residual))));
    r.insert("incidence".into(), exact());
    Ok((res, r))
}

pub fn incidence(ctx: &Ctx) -> Outcome {
    let (res, r) = incidence_results(ctx)?;
    Ok(Section {
        results: Value::Object(res),
        residuals: r,
    })
}

pub fn eckardt(ctx: &Ctx) -> Outcome {
    let (mut res, mut r) = incidence_results(ctx)?;
    let set = ctx.complete_lines()?;
    let (_, planes) = ctx.graph_planes()?;
    let points = eckardt_points(set, planes).map_err(Failure::new)?;
    r.insert("max_concurrency_distance".into(), json!(max_of(points.iter().map(|p| p.distance))));
    res.insert("eckardt_count".into(), json!(points.len()));
    res.insert("eckardt_points".into(), to_json(&points));
    Ok(Section {
        results: Value::Object(res),
        residuals: r,
    })
}

pub fn eigen(ctx: &Ctx) -> Outcome {
    let f = ctx.f()?;
    let mut cfg = EigenConfig::with_seed(ctx.opts.seed);
    if let Some(t) = ctx.opts.tol {
        cfg.filter_tol = t;
    }
    let conf = eigenpoints(f, &cfg).map_err(Failure::new)?;
    let census = eigen_real_census(&conf, cfg.reality_tol).map_err(Failure::new)?;
    Ok(Section {
        results: json!({
            "count": conf.len(),
            "census": to_json(&census),
            "flags": to_json(&conf.flags),
            "stats": to_json(&conf.stats),
            "points": to_json(&conf.points),
        }),
        residuals: residuals([
            ("max_residual", json!(max_of(conf.points.iter().map(|p| p.residual)))),
            ("max_fixed_point_residual", json!(max_of(conf.points.iter().map(|p| p.fixed_point_residual)))),
        ]),
    })
}

pub fn discriminant(ctx: &Ctx) -> Outcome {
    let rep = is_singular(ctx.f()?, ctx.opts.seed).map_err(Failure::new)?;
    let mut r = residuals([("value", exact())]);
    if let Some(w) = &rep.witness {
        r.insert("max_witness_residual".into(), json!(max_of(w.residuals.iter().copied())));
    }
    Ok(Section {
        results: json!({
            "value": rep.discriminant.value.to_string(),
            "singular": rep.singular,
            "witness": to_json(&rep.witness),
        }),
        residuals: r,
    })
}

pub fn pentahedron(ctx: &Ctx) -> Outcome {
    let mut cfg = PentaConfig::with_seed(ctx.opts.seed);
    if let Some(t) = ctx.opts.tol {
        cfg.residual_tol = t;
    }
    let p = pentahedral(ctx.f()?, &cfg).map_err(Failure::new)?;
    Ok(Section {
        results: to_json(&p),
        residuals: residuals([("reconstruction", json!(p.residual))]),
    })
}

pub fn cayley_salmon(ctx: &Ctx) -> Outcome {
    let (_, planes) = ctx.graph_planes()?;
    let reps = cayley_salmon_all(ctx.f()?, planes, ctx.opts.tol.unwrap_or(1e-8)).map_err(Failure::new)?;
    Ok(Section {
        results: json!({"count": reps.len(), "representations": to_json(&reps)}),
        residuals: residuals([("max_reconstruction", json!(max_of(reps.iter().map(|r| r.residual))))]),
    })
}

pub fn brundu_logar_cmd(ctx: &Ctx) -> Outcome {
    let set = ctx.complete_lines()?;
    let (g, _) = ctx.graph_planes()?;
    let mut cfg = BrunduLogarConfig::with_seed(ctx.opts.seed);
    if let Some(t) = ctx.opts.tol {
        cfg.tol = t;
    }
    let r = brundu_logar(ctx.f()?, set, g, &cfg).map_err(Failure::new)?;
    let span = if r.tuple.is_none() { exact() } else { json!(r.residual) };
    Ok(Section {
        results: to_json(&r),
        residuals: residuals([("span", span)]),
    })
}

pub fn tropical(ctx: &Ctx) -> Outcome {
    let v = match &ctx.valuation {
        Some(v) => v.clone(),
        None => valuation_vector(ctx.f()?, ctx.opts.prime).map_err(Failure::new)?,
    };
    let s = regular_subdivision(&v).map_err(Failure::new)?;
    let cert = is_tropically_smooth(&s);
    Ok(Section {
        results: json!({
            "valuation": to_json(&v),
            "smooth": cert.smooth,
            "cells": s.cells.len(),
            "total_volume": s.total_volume(),
            "certificate": to_json(&cert),
            "subdivision": to_json(&s.cells),
            "verified": s.verify(),
        }),
        residuals: residuals([("subdivision", exact())]),
    })
}

pub fn smooth_search(ctx: &Ctx) -> Outcome {
    let r = smoothness_search(ctx.f()?, ctx.opts.prime, ctx.opts.budget, ctx.opts.seed).map_err(Failure::new)?;
    Ok(Section {
        results: json!({
            "index": r.index,
            "smooth": r.smooth,
            "score": to_json(&r.score),
            "transform": to_json(&r.transform),
            "valuation": to_json(&r.valuation),
            "improvements": to_json(&r.improvements),
            "budget": r.budget,
            "cells": to_json(&r.subdivision.cells),
        }),
        residuals: residuals([("subdivision", exact())]),
    })
}

pub type Command = fn(&Ctx) -> Outcome;

/// Sections of the full report, in output order.
pub const REPORT_SECTIONS: [(&str, Command, bool); 9] = [
    ("discriminant", discriminant, false),
    ("lines", lines, false),
    ("eckardt", eckardt, true),
    ("eigenpoints", eigen, false),
    ("pentahedron", pentahedron, true),
    ("cayley_salmon", cayley_salmon, true),
    ("brundu_logar", brundu_logar_cmd, true),
    ("tropical", tropical, false),
    ("smooth_search", smooth_search, false),
];

/// Runs every applicable section. Sections marked as needing a smooth surface
/// are skipped (with the reason) when the discriminant vanishes.
pub fn report(ctx: &Ctx) -> Outcome {
    let mut results = Map::new();
    let mut summary = Map::new();
    let mut singular = None;
    for (name, cmd, needs_smooth) in REPORT_SECTIONS {
        let entry = if needs_smooth && singular == Some(true) {
            json!({"status": "skipped", "reason": "surface is singular"})
        } else {
            match cmd(ctx) {
                Ok(s) => {
                    if name == "discriminant" {
                        singular = s.results["singular"].as_bool();
                    }
                    for (k, v) in &s.residuals {
                        summary.insert(format!("{name}.{k}"), v.clone());
                    }
                    json!({"status": "ok", "results": s.results, "residuals": s.residuals})
                }
                Err(f) => json!({"status": "failed", "error": f.error, "diagnostic": f.diagnostic}),
            }
        };
        results.insert(name.to_string(), entry);
    }
    Ok(Section {
        results: Value::Object(results),
        residuals: summary,
    })
}
