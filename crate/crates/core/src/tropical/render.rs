//! SVG and Graphviz output. Floating point appears only here, formatted at
//! fixed precision so output is byte-stable.

use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::lattice::{Rational, RationalPoint};
use crate::tropical::{DualSubdivision, TropicalDiagram};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Svg,
    Dot,
}

impl FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svg" => Ok(RenderFormat::Svg),
            "dot" => Ok(RenderFormat::Dot),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

pub fn render(
    diag: &TropicalDiagram,
    dual: Option<&DualSubdivision>,
    format: RenderFormat,
) -> Result<String> {
    if diag.is_empty() {
        return Err(Error::EmptyDiagram);
    }
    Ok(match format {
        RenderFormat::Svg => svg(diag, dual),
        RenderFormat::Dot => dot(diag, dual),
    })
}

fn f(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

fn xy(p: &RationalPoint) -> (f64, f64) {
    (f(p.get(0)), if p.dim() > 1 { f(p.get(1)) } else { 0.0 })
}

const SCALE: f64 = 40.0;

struct Frame {
    min_x: f64,
    max_y: f64,
    pad: f64,
}

impl Frame {
    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        ((x - self.min_x + self.pad) * SCALE, (self.max_y - y + self.pad) * SCALE)
    }
}

fn svg(diag: &TropicalDiagram, dual: Option<&DualSubdivision>) -> String {
    let pts: Vec<(f64, f64)> = diag.vertices().iter().map(xy).collect();
    let min_x = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let max_x = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let min_y = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let max_y = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let ray_len = ((max_x - min_x).max(max_y - min_y) * 0.5).max(1.0) + 1.0;
    let frame = Frame { min_x, max_y, pad: ray_len + 0.5 };
    let width = (max_x - min_x + 2.0 * frame.pad) * SCALE;
    let height = (max_y - min_y + 2.0 * frame.pad) * SCALE;

    let dual_width = dual.map_or(0.0, |d| {
        let xs = d.lattice_points().iter().map(|p| p.get(0));
        (xs.clone().max().unwrap_or(0) - xs.min().unwrap_or(0) + 2) as f64 * SCALE
    });
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.2}\" height=\"{:.2}\">",
        width + dual_width,
        height.max(dual.map_or(0.0, |_| 4.0 * SCALE))
    );
    let _ = writeln!(out, "<g class=\"diagram\" stroke=\"black\" fill=\"black\">");
    if diag.dim() == 1 {
        let (x0, y0) = frame.map((min_x - ray_len, 0.0));
        let (x1, _) = frame.map((max_x + ray_len, 0.0));
        let _ = writeln!(
            out,
            "<line class=\"axis\" x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y0:.2}\"/>"
        );
    }
    for &(a, b) in diag.edges() {
        let (x1, y1) = frame.map(pts[a]);
        let (x2, y2) = frame.map(pts[b]);
        let _ = writeln!(
            out,
            "<line class=\"edge\" x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\"/>"
        );
    }
    for r in diag.rays() {
        let (dx, dy) = (r.dir.get(0) as f64, r.dir.get(1) as f64);
        let norm = (dx * dx + dy * dy).sqrt();
        let start = pts[r.at];
        let end = (start.0 + dx / norm * ray_len, start.1 + dy / norm * ray_len);
        let (x1, y1) = frame.map(start);
        let (x2, y2) = frame.map(end);
        let _ = writeln!(
            out,
            "<line class=\"ray\" x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\"/>"
        );
    }
    for p in &pts {
        let (x, y) = frame.map(*p);
        let _ = writeln!(out, "<circle class=\"vertex\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\"/>");
    }
    let _ = writeln!(out, "</g>");

    if let Some(d) = dual {
        let ox = width;
        let min_dx = d.lattice_points().iter().map(|p| p.get(0)).min().unwrap_or(0) as f64;
        let max_dy = d
            .lattice_points()
            .iter()
            .map(|p| if p.dim() > 1 { p.get(1) } else { 0 })
            .max()
            .unwrap_or(0) as f64;
        let place = |p: &crate::lattice::LatticeVec| {
            let y = if p.dim() > 1 { p.get(1) as f64 } else { 0.0 };
            (ox + (p.get(0) as f64 - min_dx + 1.0) * SCALE, (max_dy - y + 1.0) * SCALE)
        };
        let _ = writeln!(out, "<g class=\"dual\" stroke=\"gray\" fill=\"none\">");
        for cell in d.cells() {
            let coords: Vec<String> = cell
                .iter()
                .map(|&i| {
                    let (x, y) = place(d.point(i));
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let tag = if d.dim() == 1 { "polyline" } else { "polygon" };
            let _ = writeln!(out, "<{tag} class=\"dual-cell\" points=\"{}\"/>", coords.join(" "));
        }
        for p in d.lattice_points() {
            let (x, y) = place(p);
            let _ = writeln!(out, "<circle class=\"dual-point\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2\"/>");
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

fn dot(diag: &TropicalDiagram, dual: Option<&DualSubdivision>) -> String {
    let mut out = String::from("graph diagram {\n");
    for (i, v) in diag.vertices().iter().enumerate() {
        let _ = writeln!(out, "  v{i} [label=\"{v}\"];");
    }
    for (i, r) in diag.rays().iter().enumerate() {
        let _ = writeln!(out, "  r{i} [shape=point, label=\"{}\"];", r.dir);
    }
    for &(a, b) in diag.edges() {
        let _ = writeln!(out, "  v{a} -- v{b};");
    }
    for (i, r) in diag.rays().iter().enumerate() {
        let _ = writeln!(out, "  v{} -- r{i};", r.at);
    }
    if let Some(d) = dual {
        out.push_str("  subgraph cluster_dual {\n");
        for (i, p) in d.lattice_points().iter().enumerate() {
            let _ = writeln!(out, "    a{i} [label=\"{p}\"];");
        }
        for (e, &(l, r)) in d.edge_duality() {
            let _ = writeln!(out, "    a{l} -- a{r} [label=\"{e}\"];");
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeVec;
    use crate::tropical::{dual_subdivision, Ray};

    fn conifold() -> TropicalDiagram {
        let r = |at, d: [i64; 2]| Ray { at, dir: LatticeVec::new(d.to_vec()) };
        TropicalDiagram::new(
            2,
            vec![RationalPoint::origin(2), RationalPoint::from_ints(&[-1, -1])],
            vec![(0, 1)],
            vec![r(0, [1, 0]), r(0, [0, 1]), r(1, [-1, 0]), r(1, [0, -1])],
        )
        .unwrap()
    }

    #[test]
    fn c3_svg_has_three_lines() {
        let s = render(&TropicalDiagram::c3(), None, RenderFormat::Svg).unwrap();
        assert_eq!(s.matches("<line").count(), 3);
        let d = dual_subdivision(&TropicalDiagram::c3()).unwrap();
        let with_dual = render(&TropicalDiagram::c3(), Some(&d), RenderFormat::Svg).unwrap();
        assert_eq!(with_dual.matches("<line").count(), 3);
        assert_eq!(with_dual.matches("<polygon").count(), 1);
    }

    #[test]
    fn conifold_dot_counts() {
        let s = render(&conifold(), None, RenderFormat::Dot).unwrap();
        assert_eq!(s.matches("[label=\"(").count(), 2);
        assert_eq!(s.matches("shape=point").count(), 4);
        assert_eq!(s.matches("v0 -- v1").count(), 1);
    }

    #[test]
    fn deterministic_and_errors() {
        let a = render(&conifold(), None, RenderFormat::Svg).unwrap();
        let b = render(&conifold(), None, RenderFormat::Svg).unwrap();
        assert_eq!(a, b);
        assert!("png".parse::<RenderFormat>().is_err());
        let empty = TropicalDiagram::new(2, vec![], vec![], vec![]).unwrap();
        assert_eq!(render(&empty, None, RenderFormat::Dot), Err(Error::EmptyDiagram));
    }

    #[test]
    fn number_line() {
        let s = render(&TropicalDiagram::focus_focus(), None, RenderFormat::Svg).unwrap();
        assert_eq!(s.matches("class=\"axis\"").count(), 1);
        assert_eq!(s.matches("<circle").count(), 1);
    }
}
