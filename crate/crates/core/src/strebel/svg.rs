//! SVG net of a flat tile complex truncated at a finite height.
//!
//! Each cylinder is one row of tiles in `σ∞` order, so vertical gluings are
//! shared sides (the last tile of a row wraps to the first). Bottom-edge
//! gluings between `→α` and `←α` are drawn as dashed curves; the critical
//! graph runs along the bottom of every row.

use std::fmt::Write;

use super::{FlatTileComplex, Weight};

const MARGIN: f64 = 40.0;
const ROW_WIDTH: f64 = 640.0;
const ROW_GAP: f64 = 70.0;

pub fn render_svg<W: Weight>(c: &FlatTileComplex<W>, truncation_height: f64) -> String {
    assert!(truncation_height > 0.0, "truncation height must be positive");
    let widest = c
        .cylinders
        .iter()
        .filter_map(|cyl| cyl.circumference.to_f64())
        .fold(0.0, f64::max);
    let scale = if widest > 0.0 { ROW_WIDTH / widest } else { 1.0 };
    let height = truncation_height * scale;

    // bottom-left corner of each tile
    let mut corner = vec![(0.0, 0.0); c.tiles.len()];
    let mut row_base = MARGIN + height;
    for cyl in &c.cylinders {
        let mut x = MARGIN;
        for d in &cyl.boundary_word {
            corner[d.index()] = (x, row_base);
            x += c.tiles[d.index()].width.to_f64().unwrap_or(0.0) * scale;
        }
        row_base += height + ROW_GAP;
    }
    let total_height = row_base - height - ROW_GAP + MARGIN;
    let total_width = ROW_WIDTH + 2.0 * MARGIN;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_width:.1}" height="{total_height:.1}" viewBox="0 0 {total_width:.1} {total_height:.1}">"#
    );
    let _ = writeln!(
        out,
        r#"<style>.tile{{fill:#eef3fb;stroke:#345;stroke-width:1}} .critical-graph{{stroke:#b22;stroke-width:2.5}} .gluing{{fill:none;stroke:#888;stroke-dasharray:4 3}} text{{font-family:monospace;font-size:11px}}</style>"#
    );
    for (k, cyl) in c.cylinders.iter().enumerate() {
        let first = cyl.boundary_word[0].index();
        let (x0, base) = corner[first];
        let p = cyl.circumference.to_f64().unwrap_or(f64::NAN);
        let _ = writeln!(
            out,
            r#"<g class="cylinder" data-circle="{}"><text x="{:.2}" y="{:.2}">cylinder {k}, circle {}, p = {p:.6}</text>"#,
            cyl.circle,
            x0,
            base - height - 6.0,
            cyl.circle
        );
        for d in &cyl.boundary_word {
            let tile = &c.tiles[d.index()];
            let (x, y) = corner[d.index()];
            let w = tile.width.to_f64().unwrap_or(0.0) * scale;
            let _ = writeln!(
                out,
                r#"<rect class="tile" data-dart="{d}" x="{x:.2}" y="{:.2}" width="{w:.2}" height="{height:.2}"/>"#,
                y - height
            );
            let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{d}</text>"#, x + 3.0, y - 5.0);
        }
        let x1 = x0 + p * scale;
        let _ = writeln!(
            out,
            r#"<line class="critical-graph" x1="{x0:.2}" y1="{base:.2}" x2="{x1:.2}" y2="{base:.2}"/>"#
        );
        for d in &cyl.boundary_word {
            let (x, y) = corner[d.index()];
            let v = c.tiles[d.index()].left_vertex;
            let _ = writeln!(
                out,
                r#"<circle class="vertex" data-vertex="{v}" cx="{x:.2}" cy="{y:.2}" r="3"/><text x="{:.2}" y="{:.2}">v{v}</text>"#,
                x - 4.0,
                y + 14.0
            );
        }
        let _ = writeln!(out, "</g>");
    }
    for edge in &c.edges {
        let fwd = 2 * edge.arc;
        let half = |d: usize| {
            let (x, y) = corner[d];
            (x + 0.5 * c.tiles[d].width.to_f64().unwrap_or(0.0) * scale, y)
        };
        let (xa, ya) = half(fwd);
        let (xb, yb) = half(fwd + 1);
        let sag = 0.5 * ROW_GAP;
        let _ = writeln!(
            out,
            r#"<path class="gluing" data-arc="{}" d="M {xa:.2} {ya:.2} C {xa:.2} {:.2}, {xb:.2} {:.2}, {xb:.2} {yb:.2}"/>"#,
            edge.host_arc,
            ya + sag,
            yb + sag
        );
    }
    out.push_str("</svg>\n");
    out
}
