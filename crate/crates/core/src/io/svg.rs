//! Deterministic SVG scatter plots: persistence diagrams (H0 black, H1 red,
//! diagonal reference line, infinite deaths pinned to the top edge) and
//! pairwise-axis point-cloud projections.

use crate::collection::PointCloud;
use crate::persistence::PersistenceDiagram;

pub const CANVAS: f64 = 800.0;
const MARGIN: f64 = 70.0;

fn fmt(x: f64) -> String {
    format!("{:.2}", x)
}

fn header(out: &mut String) {
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{c}\" height=\"{c}\" viewBox=\"0 0 {c} {c}\">\n",
        c = CANVAS
    ));
    out.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{c}\" height=\"{c}\" fill=\"white\"/>\n",
        c = CANVAS
    ));
}

fn axes(out: &mut String, x_label: &str, y_label: &str, max_label: &str) {
    let lo = MARGIN;
    let hi = CANVAS - MARGIN;
    out.push_str(&format!(
        "<line x1=\"{lo}\" y1=\"{hi}\" x2=\"{hi}\" y2=\"{hi}\" stroke=\"black\" stroke-width=\"1\"/>\n"
    ));
    out.push_str(&format!(
        "<line x1=\"{lo}\" y1=\"{hi}\" x2=\"{lo}\" y2=\"{lo}\" stroke=\"black\" stroke-width=\"1\"/>\n"
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
        (lo + hi) / 2.0,
        CANVAS - 20.0,
        x_label
    ));
    out.push_str(&format!(
        "<text x=\"20\" y=\"{}\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 {})\">{}</text>\n",
        (lo + hi) / 2.0,
        (lo + hi) / 2.0,
        y_label
    ));
    out.push_str(&format!(
        "<text x=\"{lo}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"start\">0</text>\n",
        hi + 16.0
    ));
    out.push_str(&format!(
        "<text x=\"{hi}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\">{max_label}</text>\n",
        hi + 16.0
    ));
}

/// Birth/death scatter of a persistence diagram on a square canvas.
pub fn diagram_svg(diagram: &PersistenceDiagram) -> String {
    let lo = MARGIN;
    let hi = CANVAS - MARGIN;
    let span = hi - lo;

    let mut max_value: f64 = 0.0;
    for p in diagram.pairs() {
        max_value = max_value.max(p.birth);
        if p.death.is_finite() {
            max_value = max_value.max(p.death);
        }
    }
    let scale = if max_value > 0.0 { 1.05 * max_value } else { 1.0 };

    let to_x = |v: f64| lo + v / scale * span;
    let to_y = |v: f64| hi - v / scale * span;

    let mut out = String::new();
    header(&mut out);
    axes(&mut out, "birth", "death", &format!("{:.3e}", scale));
    // diagonal birth = death
    out.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"gray\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n",
        fmt(lo),
        fmt(hi),
        fmt(hi),
        fmt(lo)
    ));
    // dashed top band for infinite deaths
    out.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"gray\" stroke-width=\"0.5\"/>\n",
        fmt(lo),
        fmt(lo - 18.0),
        fmt(hi),
        fmt(lo - 18.0)
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"start\">inf</text>\n",
        fmt(hi + 6.0),
        fmt(lo - 14.0)
    ));

    for p in diagram.pairs() {
        let color = if p.dim == 0 { "black" } else { "red" };
        if p.death.is_finite() {
            out.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{color}\" fill-opacity=\"0.75\"/>\n",
                fmt(to_x(p.birth)),
                fmt(to_y(p.death)),
            ));
        } else {
            // infinite pairs sit on the top band; censored ones are hollow
            let x = fmt(to_x(p.birth));
            let y = fmt(lo - 18.0);
            if p.censored {
                out.push_str(&format!(
                    "<circle cx=\"{x}\" cy=\"{y}\" r=\"4\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n"
                ));
            } else {
                out.push_str(&format!(
                    "<circle cx=\"{x}\" cy=\"{y}\" r=\"4\" fill=\"{color}\" fill-opacity=\"0.75\"/>\n"
                ));
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Scatter of two coordinates of a point cloud, axes chosen by index.
pub fn cloud_svg(cloud: &PointCloud, axis_x: usize, axis_y: usize) -> String {
    let lo = MARGIN;
    let hi = CANVAS - MARGIN;
    let span = hi - lo;

    let mut max_abs: f64 = 0.0;
    for p in cloud.points() {
        max_abs = max_abs.max(p[axis_x].abs()).max(p[axis_y].abs());
    }
    let scale = if max_abs > 0.0 { 1.05 * max_abs } else { 1.0 };
    let center = (lo + hi) / 2.0;
    let to_x = |v: f64| center + v / scale * span / 2.0;
    let to_y = |v: f64| center - v / scale * span / 2.0;

    let mut out = String::new();
    header(&mut out);
    axes(
        &mut out,
        &format!("c{}", axis_x + 1),
        &format!("c{}", axis_y + 1),
        &format!("{:.3e}", scale),
    );
    for p in cloud.points() {
        out.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"steelblue\" fill-opacity=\"0.6\"/>\n",
            fmt(to_x(p[axis_x])),
            fmt(to_y(p[axis_y])),
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::DiagramPair;

    #[test]
    fn empty_diagram_still_draws_axes_and_diagonal() {
        let svg = diagram_svg(&PersistenceDiagram::default());
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("stroke-dasharray"));
        assert!(!svg.contains("circle"));
    }

    #[test]
    fn identical_inputs_give_identical_bytes() {
        let dgm = PersistenceDiagram::new(vec![
            DiagramPair { dim: 0, birth: 0.0, death: 1.0, censored: false },
            DiagramPair { dim: 1, birth: 1.0, death: 2.0_f64.sqrt(), censored: false },
            DiagramPair { dim: 0, birth: 0.0, death: f64::INFINITY, censored: false },
        ]);
        assert_eq!(diagram_svg(&dgm), diagram_svg(&dgm));
    }

    #[test]
    fn colors_follow_dimension() {
        let dgm = PersistenceDiagram::new(vec![
            DiagramPair { dim: 0, birth: 0.0, death: 1.0, censored: false },
            DiagramPair { dim: 1, birth: 1.0, death: 1.5, censored: false },
        ]);
        let svg = diagram_svg(&dgm);
        assert!(svg.contains("fill=\"black\""));
        assert!(svg.contains("fill=\"red\""));
    }
}
