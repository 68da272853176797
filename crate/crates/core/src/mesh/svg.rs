use std::fmt::Write as _;

use super::SimplicialMesh;

/// Rendering options for [`write_svg`].
#[derive(Clone, Debug)]
pub struct SvgOptions {
    /// Width of the picture in pixels; the height follows the aspect ratio.
    pub width: f64,
    pub stroke_width: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self { width: 1200.0, stroke_width: 0.4 }
    }
}

/// Blue-white-red ramp on `s ∈ [0, 1]`.
fn color(s: f64) -> (u8, u8, u8) {
    let s = s.clamp(0.0, 1.0);
    let (r, g, b) = if s < 0.5 {
        let u = 2.0 * s;
        (u, u, 1.0)
    } else {
        let u = 2.0 * (1.0 - s);
        (1.0, u, u)
    };
    ((r * 255.0) as u8, (g * 255.0) as u8, (b * 255.0) as u8)
}

/// Renders the mesh edges, optionally over triangles filled with the mean of
/// a per-vertex scalar.
pub fn write_svg(mesh: &SimplicialMesh, values: Option<&[f64]>, opts: &SvgOptions) -> String {
    let [x0, x1, y0, y1] = mesh.bounds();
    let w = opts.width;
    let scale = w / (x1 - x0).max(f64::MIN_POSITIVE);
    let h = ((y1 - y0) * scale).ceil();
    let px = |p: [f64; 2]| ((p[0] - x0) * scale, (y1 - p[1]) * scale);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    if let Some(vals) = values {
        let (lo, hi) = vals
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let span = if hi > lo { hi - lo } else { 1.0 };
        for tri in mesh.triangles() {
            let mean = tri.iter().map(|&v| vals[v]).sum::<f64>() / 3.0;
            let (r, g, b) = color((mean - lo) / span);
            let pts: Vec<String> = tri
                .iter()
                .map(|&v| {
                    let (x, y) = px(mesh.vertex(v));
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(
                s,
                r#"<polygon points="{}" fill="rgb({r},{g},{b})" stroke="none"/>"#,
                pts.join(" ")
            );
        }
    }
    for e in mesh.edges() {
        let (xa, ya) = px(mesh.vertex(e[0]));
        let (xb, yb) = px(mesh.vertex(e[1]));
        let _ = writeln!(
            s,
            r#"<line x1="{xa:.2}" y1="{ya:.2}" x2="{xb:.2}" y2="{yb:.2}" stroke="black" stroke-width="{}"/>"#,
            opts.stroke_width
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_line_per_edge() {
        let m = SimplicialMesh::structured_rect(3, 2, [0.0, 3.0, 0.0, 2.0]).unwrap();
        let svg = write_svg(&m, None, &SvgOptions::default());
        assert_eq!(svg.matches("<line").count(), m.num_edges());
        let vals: Vec<f64> = m.vertices().iter().map(|p| p[0]).collect();
        let svg = write_svg(&m, Some(&vals), &SvgOptions::default());
        assert_eq!(svg.matches("<polygon").count(), m.num_triangles());
    }
}
