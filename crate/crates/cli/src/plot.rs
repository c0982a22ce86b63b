//! Deterministic SVG figures of a recorded trace.
//!
//! `plane` draws planar instances: each set is clipped to the viewing box
//! and shaded, and the iterates are joined by a polyline with numbered
//! markers. `sphere_orthographic` draws S² seen from `+z`: points are
//! normalized and mapped to `(x, y)`, and anything on the far hemisphere is
//! dashed.

use std::fmt::Write as _;
use std::path::Path;

use circumfeas::sphere::{build_spherical_polytope, GreatArc, UnitVec3};
use circumfeas::{ConvexSet, Error, Vector};

use crate::{write, CliResult, TraceFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PlotStyle {
    Plane,
    SphereOrthographic,
}

const SIZE: f64 = 480.0;
const MARGIN: f64 = 20.0;
const COLORS: [&str; 2] = ["#1f77b4", "#d62728"];
const PATH_COLOR: &str = "#222222";

pub fn cmd_plot(trace_path: &Path, style: PlotStyle, out: &Path) -> CliResult<()> {
    let file = TraceFile::load(trace_path)?;
    let svg = render(&file, style)?;
    write(out, svg)
}

pub fn render(file: &TraceFile, style: PlotStyle) -> circumfeas::Result<String> {
    match style {
        PlotStyle::Plane => render_plane(file),
        PlotStyle::SphereOrthographic => render_sphere(file),
    }
}

fn header(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn legend(s: &mut String, method: &str, with_path: bool) {
    for (i, (label, color)) in [("A", COLORS[0]), ("B", COLORS[1])].iter().enumerate() {
        let y = MARGIN + 14.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{}" y="{}" width="10" height="10" fill="{color}" fill-opacity="0.3" stroke="{color}"/><text x="{}" y="{}">{label}</text>"#,
            SIZE - 110.0,
            y,
            SIZE - 95.0,
            y + 9.0
        );
    }
    if with_path {
        let y = MARGIN + 28.0;
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{PATH_COLOR}"/><text x="{}" y="{}">iterates ({})</text>"#,
            SIZE - 110.0,
            y + 5.0,
            SIZE - 100.0,
            y + 5.0,
            SIZE - 95.0,
            y + 9.0,
            escape(method)
        );
    }
}

/// `{x : ⟨a, x⟩ ≤ b}` constraints describing a planar set.
fn halfplanes(set: &ConvexSet) -> Vec<([f64; 2], f64)> {
    let pair = |v: &Vector| [v[0], v[1]];
    let conic = |gens: Vec<[f64; 2]>| {
        let gens: Vec<[f64; 2]> = gens
            .into_iter()
            .map(|g| {
                let n = g[0].hypot(g[1]);
                [g[0] / n, g[1] / n]
            })
            .collect();
        let mut candidates = Vec::new();
        for g in &gens {
            candidates.extend([[-g[1], g[0]], [g[1], -g[0]], [-g[0], -g[1]]]);
        }
        candidates
            .into_iter()
            .filter(|n| gens.iter().all(|g| n[0] * g[0] + n[1] * g[1] <= 1e-12))
            .map(|n| (n, 0.0))
            .collect::<Vec<_>>()
    };
    match set {
        ConvexSet::HalfSpace(h) => vec![(pair(h.normal()), h.offset())],
        ConvexSet::Polyhedron(p) => p.halfspaces().iter().map(|h| (pair(h.normal()), h.offset())).collect(),
        ConvexSet::Cone(c) => conic(c.generators().iter().map(pair).collect()),
        ConvexSet::Ray(r) => conic(vec![pair(r.direction())]),
        ConvexSet::Subspace(s) => match s.basis() {
            [] => vec![([1.0, 0.0], 0.0), ([-1.0, 0.0], 0.0), ([0.0, 1.0], 0.0), ([0.0, -1.0], 0.0)],
            [b] => vec![([-b[1], b[0]], 0.0), ([b[1], -b[0]], 0.0)],
            _ => Vec::new(),
        },
    }
}

/// Sutherland–Hodgman clipping of a convex polygon by `⟨a, x⟩ ≤ b`.
fn clip(poly: Vec<[f64; 2]>, a: [f64; 2], b: f64) -> Vec<[f64; 2]> {
    let f = |p: &[f64; 2]| a[0] * p[0] + a[1] * p[1] - b;
    let mut out = Vec::new();
    for (i, p) in poly.iter().enumerate() {
        let q = &poly[(i + 1) % poly.len()];
        let (fp, fq) = (f(p), f(q));
        if fp <= 0.0 {
            out.push(*p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let t = fp / (fp - fq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

fn render_plane(file: &TraceFile) -> circumfeas::Result<String> {
    let s = &file.scenario;
    if s.dim != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: s.dim });
    }
    let pts: Vec<[f64; 2]> = if file.trace.steps.is_empty() {
        Vec::new()
    } else {
        file.trace.iterates().map(|(x, _, _)| [x[0], x[1]]).collect()
    };
    let x0 = &s.initial_points[file.start_index];
    let extent = pts.iter().chain(std::iter::once(&[x0[0], x0[1]])).fold(1.0_f64, |m, p| m.max(p[0].abs()).max(p[1].abs()));
    let r = 1.15 * extent;
    let span = SIZE - 2.0 * MARGIN;
    let map = |p: &[f64; 2]| (MARGIN + (p[0] + r) / (2.0 * r) * span, MARGIN + (r - p[1]) / (2.0 * r) * span);

    let mut svg = header(&format!("{} / {}", s.name, file.method.name()));
    let (ox, oy) = map(&[0.0, 0.0]);
    let _ = writeln!(
        svg,
        r##"<g stroke="#bbbbbb" stroke-width="0.5"><line x1="{MARGIN}" y1="{oy:.2}" x2="{:.2}" y2="{oy:.2}"/><line x1="{ox:.2}" y1="{MARGIN}" x2="{ox:.2}" y2="{:.2}"/></g>"##,
        SIZE - MARGIN,
        SIZE - MARGIN
    );
    for (set, color) in [(&s.set_a, COLORS[0]), (&s.set_b, COLORS[1])] {
        let bx = vec![[-r, -r], [r, -r], [r, r], [-r, r]];
        let poly = halfplanes(set).into_iter().fold(bx, |p, (a, b)| if p.is_empty() { p } else { clip(p, a, b) });
        if poly.is_empty() {
            continue;
        }
        let coords: Vec<String> = poly.iter().map(&map).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(
            svg,
            r#"<polygon points="{}" fill="{color}" fill-opacity="0.18" stroke="{color}" stroke-width="1.5"/>"#,
            coords.join(" ")
        );
    }
    if !pts.is_empty() {
        let coords: Vec<String> = pts.iter().map(&map).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{PATH_COLOR}" stroke-width="1.2"/>"#, coords.join(" "));
        for (k, p) in pts.iter().enumerate() {
            let (x, y) = map(p);
            let _ = writeln!(
                svg,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{PATH_COLOR}"/><text x="{:.2}" y="{:.2}">{k}</text>"#,
                x + 5.0,
                y - 5.0
            );
        }
    }
    legend(&mut svg, file.method.name(), !pts.is_empty());
    svg.push_str("</svg>\n");
    Ok(svg)
}

const RADIUS: f64 = 200.0;

fn project(u: &UnitVec3) -> (f64, f64, bool) {
    let c = u.coords();
    (SIZE / 2.0 + RADIUS * c[0], SIZE / 2.0 - RADIUS * c[1], c[2] < 0.0)
}

/// Draws a sampled curve, splitting it into solid (front) and dashed (back)
/// runs.
fn curve(svg: &mut String, pts: &[UnitVec3], color: &str, width: f64) {
    let mut run: Vec<(f64, f64)> = Vec::new();
    let mut hidden = None;
    let flush = |svg: &mut String, run: &[(f64, f64)], hidden: bool| {
        if run.len() < 2 {
            return;
        }
        let coords: Vec<String> = run.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let dash = if hidden { r#" stroke-dasharray="4 3""# } else { "" };
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="{width}"{dash}/>"#,
            coords.join(" ")
        );
    };
    for u in pts {
        let (x, y, h) = project(u);
        if hidden.is_some_and(|prev| prev != h) {
            let last = *run.last().expect("run is nonempty once visibility is set");
            flush(svg, &run, hidden.expect("set"));
            run = vec![last];
        }
        hidden = Some(h);
        run.push((x, y));
    }
    if let Some(h) = hidden {
        flush(svg, &run, h);
    }
}

fn arc_samples(a: &UnitVec3, b: &UnitVec3, n: usize) -> Vec<UnitVec3> {
    match GreatArc::new(*a, *b) {
        Ok(arc) => (0..=n).map(|k| arc.point_at(k as f64 / n as f64)).collect(),
        Err(_) => vec![*a, *b],
    }
}

fn render_sphere(file: &TraceFile) -> circumfeas::Result<String> {
    let s = &file.scenario;
    if s.dim != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: s.dim });
    }
    let mut svg = header(&format!("{} / {}", s.name, file.method.name()));
    let c = SIZE / 2.0;
    let _ = writeln!(svg, r##"<circle cx="{c}" cy="{c}" r="{RADIUS}" fill="none" stroke="#888888"/>"##);
    for (set, color) in [(&s.set_a, COLORS[0]), (&s.set_b, COLORS[1])] {
        let ConvexSet::Cone(cone) = set else { continue };
        let Ok(poly) = build_spherical_polytope(cone, &s.tol) else { continue };
        for e in poly.edges() {
            curve(&mut svg, &arc_samples(&e.start(), &e.end(), 48), color, 1.5);
        }
    }
    let pts: Vec<UnitVec3> = if file.trace.steps.is_empty() {
        Vec::new()
    } else {
        file.trace.iterates().filter_map(|(x, _, _)| UnitVec3::from_vector(x).ok()).collect()
    };
    if !pts.is_empty() {
        let mut path = vec![pts[0]];
        for w in pts.windows(2) {
            path.extend(arc_samples(&w[0], &w[1], 32).into_iter().skip(1));
        }
        curve(&mut svg, &path, PATH_COLOR, 1.2);
        for (k, u) in pts.iter().enumerate() {
            let (x, y, hidden) = project(u);
            let fill = if hidden { "none" } else { PATH_COLOR };
            let _ = writeln!(
                svg,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{fill}" stroke="{PATH_COLOR}"/><text x="{:.2}" y="{:.2}">{k}</text>"#,
                x + 5.0,
                y - 5.0
            );
        }
    }
    legend(&mut svg, file.method.name(), !pts.is_empty());
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clipping_a_box_to_a_quadrant() {
        let bx = vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
        let q = clip(clip(bx, [-1.0, 0.0], 0.0), [0.0, -1.0], 0.0);
        assert_eq!(q.len(), 4);
        assert!(q.iter().all(|p| p[0] >= 0.0 && p[1] >= 0.0));
    }

    #[test]
    fn cone_halfplanes() {
        let wedge = ConvexSet::Cone(
            circumfeas::ConeV::new(vec![Vector::from([1.0, 0.0]), Vector::from([1.0, 1.0])]).unwrap(),
        );
        let hp = halfplanes(&wedge);
        assert!(hp.iter().any(|(n, _)| n == &[-0.0, 1.0] || n == &[0.0, -1.0]));
        let full = ConvexSet::Cone(
            circumfeas::ConeV::new(vec![
                Vector::from([1.0, 0.0]),
                Vector::from([-0.5, 0.8]),
                Vector::from([-0.5, -0.8]),
            ])
            .unwrap(),
        );
        assert!(halfplanes(&full).is_empty());
    }
}
