//! SVG rendering of `B_n` at true scale.

use std::fmt::Write as _;

use leastgrad_core::barrier::{Barrier, BarrierComponent, BottomRegion, CircularSegment};
use leastgrad_core::cantor::arcs;
use leastgrad_core::cut_height;
use leastgrad_core::planar::{ConvexPolygon, Point2};

use crate::error::Result;

const SEGMENT_FILL: &str = "#6baed6";
const POLYGON_FILL: &str = "#c6dbef";
const BOTTOM_FILL: &str = "#deebf7";
const OUTLINE: &str = "#08306b";
const ARC_STROKE: &str = "#d62728";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Style {
    pub labels: bool,
}

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

fn pt(p: Point2) -> String {
    format!("{},{}", num(p.x), num(p.y))
}

/// Boundary path of a circular segment: along the arc, back along the chord.
fn segment_path(seg: &CircularSegment) -> String {
    let a = Point2::on_circle(seg.start_angle);
    let b = Point2::on_circle(seg.end_angle);
    let large = u8::from(seg.span() > std::f64::consts::PI);
    format!("M{} A1,1 0 {large} 1 {} Z", pt(a), pt(b))
}

fn polygon_points(poly: &ConvexPolygon) -> String {
    poly.vertices().iter().map(|v| pt(*v)).collect::<Vec<_>>().join(" ")
}

/// Boundary path of `Bot`: the top edge, down the right side, back along the
/// lower circle and up the left side.
fn bottom_path(bot: &BottomRegion) -> String {
    let floor = |x: f64| Point2::new(x, -(1.0 - x * x).sqrt());
    format!(
        "M{} L{} L{} A1,1 0 0 0 {} Z",
        pt(Point2::new(bot.x_lo, bot.cut_height)),
        pt(Point2::new(bot.x_hi, bot.cut_height)),
        pt(floor(bot.x_hi)),
        pt(floor(bot.x_lo)),
    )
}

fn label_size(area: f64) -> f64 {
    (0.5 * area.sqrt()).clamp(0.002, 0.05)
}

fn push_label(out: &mut String, at: Point2, area: f64, text: &str) {
    // labels sit outside the flipped group, so y changes sign
    let _ = writeln!(
        out,
        r#"    <text x="{}" y="{}" font-size="{}">{text}</text>"#,
        num(at.x),
        num(-at.y),
        num(label_size(area))
    );
}

fn component_labels(out: &mut String, comp: &BarrierComponent) {
    let seg = &comp.segment;
    let w = seg.mid_direction() * (0.5 * (1.0 + seg.chord_distance()));
    push_label(out, w, seg.area(), "W");
    for (k, poly) in comp.polygons.iter().enumerate() {
        let vs = poly.vertices();
        let sum = vs.iter().fold(Point2::ORIGIN, |acc, v| acc + *v);
        push_label(out, sum * (1.0 / vs.len() as f64), poly.area(), &format!("T{k}"));
    }
    let bot = &comp.bottom;
    let x = 0.5 * (bot.x_lo + bot.x_hi);
    let y = 0.5 * (bot.cut_height - (1.0 - x * x).sqrt());
    push_label(out, Point2::new(x, y), bot.area(), "Bot");
}

pub fn render(barrier: &Barrier, style: Style, provenance: &str) -> Result<String> {
    let n = barrier.depth();
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.1 -1.1 2.2 2.2\" width=\"880\" height=\"880\">\n",
    );
    let _ = writeln!(out, "  <!-- {} -->", provenance.replace("--", "- -"));
    out.push_str("  <g transform=\"scale(1,-1)\" stroke-linejoin=\"round\">\n");
    out.push_str("    <circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#404040\" stroke-width=\"0.004\"/>\n");
    let c = cut_height();
    let half = (1.0 - c * c).sqrt();
    let _ = writeln!(
        out,
        "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#808080\" stroke-width=\"0.002\" stroke-dasharray=\"0.02 0.01\"/>",
        num(-half),
        num(c),
        num(half),
        num(c)
    );
    let width = num((0.003 / (n as f64).sqrt()).max(0.0005));
    let _ = writeln!(out, "    <g stroke=\"{OUTLINE}\" stroke-width=\"{width}\">");
    for comp in barrier.components() {
        let path = crate::geometry::path_string(&comp.address);
        let _ = writeln!(out, "      <g id=\"B-{path}\">");
        let _ = writeln!(
            out,
            "        <path d=\"{}\" fill=\"{SEGMENT_FILL}\"/>",
            segment_path(&comp.segment)
        );
        for poly in &comp.polygons {
            let _ = writeln!(
                out,
                "        <polygon points=\"{}\" fill=\"{POLYGON_FILL}\"/>",
                polygon_points(poly)
            );
        }
        let _ = writeln!(
            out,
            "        <path d=\"{}\" fill=\"{BOTTOM_FILL}\"/>",
            bottom_path(&comp.bottom)
        );
        out.push_str("      </g>\n");
    }
    out.push_str("    </g>\n");
    let _ = writeln!(
        out,
        "    <g fill=\"none\" stroke=\"{ARC_STROKE}\" stroke-width=\"0.012\">"
    );
    for arc in arcs(n)? {
        let a = Point2::on_circle(arc.start_angle());
        let b = Point2::on_circle(arc.end_angle());
        let _ = writeln!(out, "      <path d=\"M{} A1,1 0 0 1 {}\"/>", pt(a), pt(b));
    }
    out.push_str("    </g>\n  </g>\n");
    if style.labels {
        out.push_str(
            "  <g font-family=\"serif\" text-anchor=\"middle\" dominant-baseline=\"middle\" fill=\"#000000\">\n",
        );
        for comp in barrier.components() {
            component_labels(&mut out, comp);
        }
        out.push_str("  </g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(hay: &str, needle: &str) -> usize {
        hay.matches(needle).count()
    }

    #[test]
    fn labels_only_add_text() {
        let b = Barrier::new(2).unwrap();
        let plain = render(&b, Style { labels: false }, "p").unwrap();
        let labelled = render(&b, Style { labels: true }, "p").unwrap();
        assert_eq!(count(&plain, "<text"), 0);
        // W, T0, T1, Bot for each of four components
        assert_eq!(count(&labelled, "<text"), 16);
        let stripped: String = labelled
            .lines()
            .filter(|l| !l.contains("<text") && !l.contains("font-family") && *l != "  </g>")
            .collect::<Vec<_>>()
            .join("\n");
        let plain_body: String = plain.lines().filter(|l| *l != "  </g>").collect::<Vec<_>>().join("\n");
        assert_eq!(stripped, plain_body);
    }

    #[test]
    fn every_component_and_arc_is_drawn() {
        for n in 1..=3 {
            let svg = render(&Barrier::new(n).unwrap(), Style::default(), "p").unwrap();
            assert_eq!(count(&svg, "<g id=\"B-"), 1 << n);
            assert_eq!(count(&svg, "<polygon"), n << n);
            assert_eq!(count(&svg, " A1,1 0 0 1 "), 2 << n);
        }
    }
}
