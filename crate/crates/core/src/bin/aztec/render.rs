use std::fmt::Write;

use aztec_dimers::lattice::{AztecGraph, EdgeKind, Matching};

/// Fill colours of the four domino types.
fn colour(kind: EdgeKind) -> &'static str {
    match kind {
        EdgeKind::Alpha => "#d62728",
        EdgeKind::Beta => "#1f77b4",
        EdgeKind::Gamma => "#2ca02c",
        EdgeKind::Reference => "#ffbf00",
    }
}

/// The tiling as an SVG; each matched edge becomes the domino formed by
/// the two unit squares around its endpoints.
pub fn tiling_svg(graph: &AztecGraph, m: &Matching) -> String {
    let side = 2 * graph.order() as i64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="-1 -1 {} {}" width="800" height="800">"#,
        side + 2,
        side + 2
    );
    for e in m.edges(graph) {
        let e = graph.edge(e);
        let w = graph.white_position(e.white);
        let b = graph.black_position(e.black);
        let (dx, dy) = (b.x - w.x, b.y - w.y);
        let corners = [
            (w.x, w.y - dy),
            (w.x - dx, w.y),
            (w.x, w.y + dy),
            (b.x, b.y + dy),
            (b.x + dx, b.y),
            (w.x + dx, w.y),
        ];
        let pts: Vec<String> = corners.iter().map(|(x, y)| format!("{},{}", x, side - y)).collect();
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{}" stroke="black" stroke-width="0.05"/>"#,
            pts.join(" "),
            colour(e.kind)
        );
    }
    out.push_str("</svg>\n");
    out
}
