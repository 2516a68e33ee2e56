//! CSV and SVG artifacts. Numbers are written with fixed precision so identical inputs give
//! identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use starnav::{NodeStatus, Point2d};
use starnav_sim::{Obstacle, World};

use crate::batch::BatchSummary;
use crate::episode::RunRecord;
use crate::BenchError;

pub const TRAJECTORY_HEADER: [&str; 7] = ["t", "x", "y", "heading", "v", "w", "control_ms"];

/// Something that can be written to an output directory.
pub enum Artifact<'a> {
    Record(&'a RunRecord),
    Summary(&'a BatchSummary, &'a [RunRecord]),
}

fn io(path: &Path, e: impl std::fmt::Display) -> BenchError {
    BenchError::Io(format!("{}: {e}", path.display()))
}

fn csv_err(path: &Path, e: csv::Error) -> BenchError {
    io(path, e)
}

pub fn export_artifacts(artifact: Artifact<'_>, out_dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    fs::create_dir_all(out_dir).map_err(|e| io(out_dir, e))?;
    match artifact {
        Artifact::Record(r) => export_record(r, out_dir),
        Artifact::Summary(s, records) => {
            let mut paths = vec![write_summary_csv(s, &out_dir.join("summary.csv"))?];
            paths.push(write_runs_csv(records, &out_dir.join("runs.csv"))?);
            Ok(paths)
        }
    }
}

fn export_record(r: &RunRecord, out_dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    let stem = format!("run_{}", r.seed);
    let csv_path = out_dir.join(format!("{stem}.csv"));
    write_trajectory_csv(r, &csv_path)?;
    let svg_path = out_dir.join(format!("{stem}.svg"));
    fs::write(&svg_path, render_svg(r)).map_err(|e| io(&svg_path, e))?;
    let json_path = out_dir.join(format!("{stem}.json"));
    fs::write(&json_path, r.to_json()).map_err(|e| io(&json_path, e))?;
    Ok(vec![csv_path, svg_path, json_path])
}

pub fn write_trajectory_csv(r: &RunRecord, path: &Path) -> Result<PathBuf, BenchError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(TRAJECTORY_HEADER).map_err(|e| csv_err(path, e))?;
    for s in &r.trajectory {
        w.write_record([
            format!("{:.3}", s.t),
            format!("{:.6}", s.x),
            format!("{:.6}", s.y),
            format!("{:.6}", s.heading),
            format!("{:.6}", s.v),
            format!("{:.6}", s.w),
            format!("{:.4}", s.control_ms),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| io(path, e))?;
    Ok(path.to_path_buf())
}

fn write_summary_csv(s: &BatchSummary, path: &Path) -> Result<PathBuf, BenchError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record([
        "scenario_hash",
        "n_runs",
        "successes",
        "success_rate",
        "collisions",
        "timeouts",
        "no_paths",
        "travel_time_mean",
        "travel_time_std",
        "path_length_mean",
        "path_length_std",
        "control_ms_mean",
        "control_ms_std",
        "fit_ms_mean",
        "fit_ms_std",
    ])
    .map_err(|e| csv_err(path, e))?;
    w.write_record([
        s.scenario_hash.clone(),
        s.n_runs.to_string(),
        s.successes.to_string(),
        format!("{:.3}", s.success_rate),
        s.collisions.to_string(),
        s.timeouts.to_string(),
        s.no_paths.to_string(),
        format!("{:.3}", s.travel_time.mean),
        format!("{:.3}", s.travel_time.stddev),
        format!("{:.3}", s.path_length.mean),
        format!("{:.3}", s.path_length.stddev),
        format!("{:.4}", s.control_ms.mean),
        format!("{:.4}", s.control_ms.stddev),
        format!("{:.4}", s.fit_ms.mean),
        format!("{:.4}", s.fit_ms.stddev),
    ])
    .map_err(|e| csv_err(path, e))?;
    w.flush().map_err(|e| io(path, e))?;
    Ok(path.to_path_buf())
}

fn write_runs_csv(records: &[RunRecord], path: &Path) -> Result<PathBuf, BenchError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(["seed", "outcome", "travel_time", "path_length", "entered_trap", "stuck_events", "nodes"])
        .map_err(|e| csv_err(path, e))?;
    let mut sorted: Vec<&RunRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.seed);
    for r in sorted {
        let stuck = r.count_events(|k| matches!(k, crate::episode::EventKind::MarkStuck { .. }));
        w.write_record([
            r.seed.to_string(),
            r.outcome.as_str().to_string(),
            format!("{:.3}", r.travel_time),
            format!("{:.3}", r.path_length),
            r.entered_trap.to_string(),
            stuck.to_string(),
            r.roadmap.as_ref().map_or(0, |m| m.nodes().len()).to_string(),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| io(path, e))?;
    Ok(path.to_path_buf())
}

const SCALE: f64 = 40.0;

struct Canvas {
    min_x: f64,
    max_y: f64,
}

impl Canvas {
    fn x(&self, p: Point2d) -> f64 {
        (p.x - self.min_x) * SCALE
    }

    fn y(&self, p: Point2d) -> f64 {
        (self.max_y - p.y) * SCALE
    }

    fn points(&self, pts: &[Point2d]) -> String {
        let mut s = String::new();
        for (i, p) in pts.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{:.2},{:.2}", self.x(*p), self.y(*p));
        }
        s
    }
}

fn status_colour(s: NodeStatus) -> &'static str {
    match s {
        NodeStatus::Expanded => "#1f77b4",
        NodeStatus::Extendable => "#2ca02c",
        NodeStatus::Stuck => "#d62728",
    }
}

fn draw_world(svg: &mut String, c: &Canvas, world: &World) {
    let b = world.bounds;
    let _ = writeln!(
        svg,
        r##"<rect x="0" y="0" width="{:.2}" height="{:.2}" fill="#ffffff" stroke="#000000" stroke-width="2"/>"##,
        b.width() * SCALE,
        b.height() * SCALE
    );
    for o in &world.obstacles {
        match o {
            Obstacle::Circle { center, radius } => {
                let _ = writeln!(
                    svg,
                    r##"<circle class="obstacle" cx="{:.2}" cy="{:.2}" r="{:.2}" fill="#555555"/>"##,
                    c.x(*center),
                    c.y(*center),
                    radius * SCALE
                );
            }
            other => {
                let outline = other.outline();
                if outline.len() == 2 {
                    let _ = writeln!(
                        svg,
                        r##"<line class="obstacle" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#555555" stroke-width="2"/>"##,
                        c.x(outline[0]),
                        c.y(outline[0]),
                        c.x(outline[1]),
                        c.y(outline[1])
                    );
                } else {
                    let _ = writeln!(svg, r##"<polygon class="obstacle" points="{}" fill="#555555"/>"##, c.points(&outline));
                }
            }
        }
    }
}

/// SVG overlay of the world, fitted regions, roadmap and trajectory. Each roadmap edge is
/// the only `<path>` element type used.
pub fn render_svg(r: &RunRecord) -> String {
    let b = r.world.bounds;
    let c = Canvas {
        min_x: b.min.x,
        max_y: b.max.y,
    };
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.2} {:.2}">"#,
        b.width() * SCALE,
        b.height() * SCALE,
        b.width() * SCALE,
        b.height() * SCALE
    );
    let _ = writeln!(svg, "<title>seed {} outcome {}</title>", r.seed, r.outcome.as_str());
    draw_world(&mut svg, &c, &r.world);
    if let Some(trap) = r.trap {
        let _ = writeln!(
            svg,
            r##"<polygon class="trap" points="{}" fill="none" stroke="#ff7f0e" stroke-dasharray="6 4"/>"##,
            c.points(&trap.corners())
        );
    }
    if let Some(rm) = &r.roadmap {
        for region in rm.regions() {
            let pts: Vec<Point2d> = (0..360)
                .map(|k| region.boundary_point((-180.0 + k as f64).to_radians()))
                .collect();
            let _ = writeln!(
                svg,
                r##"<polygon class="region" points="{}" fill="#1f77b4" fill-opacity="0.08" stroke="#1f77b4" stroke-opacity="0.5"/>"##,
                c.points(&pts)
            );
        }
        for (a, bn) in rm.edges() {
            let (pa, pb) = (rm.nodes()[a.index()].position, rm.nodes()[bn.index()].position);
            let _ = writeln!(
                svg,
                r##"<path class="edge" d="M {:.2} {:.2} L {:.2} {:.2}" stroke="#7f7f7f" stroke-width="1.5"/>"##,
                c.x(pa),
                c.y(pa),
                c.x(pb),
                c.y(pb)
            );
        }
        for n in rm.nodes() {
            let _ = writeln!(
                svg,
                r#"<circle class="node" cx="{:.2}" cy="{:.2}" r="4" fill="{}"/>"#,
                c.x(n.position),
                c.y(n.position),
                status_colour(n.status)
            );
        }
    }
    let traj: Vec<Point2d> = r.trajectory.iter().map(|s| Point2d::new(s.x, s.y)).collect();
    // thin the polyline so large runs stay small
    let step = (traj.len() / 2000).max(1);
    let mut thinned: Vec<Point2d> = traj.iter().copied().step_by(step).collect();
    if let Some(last) = traj.last() {
        if thinned.last() != Some(last) {
            thinned.push(*last);
        }
    }
    let _ = writeln!(
        svg,
        r##"<polyline class="trajectory" points="{}" fill="none" stroke="#9467bd" stroke-width="2"/>"##,
        c.points(&thinned)
    );
    let _ = writeln!(
        svg,
        r##"<circle class="start" cx="{:.2}" cy="{:.2}" r="6" fill="#ff0000"/>"##,
        c.x(r.start),
        c.y(r.start)
    );
    let _ = writeln!(
        svg,
        r##"<circle class="goal" cx="{:.2}" cy="{:.2}" r="6" fill="#00aa00"/>"##,
        c.x(r.goal),
        c.y(r.goal)
    );
    svg.push_str("</svg>\n");
    svg
}
