use std::fmt::Write;

use nodalkit::nodal::{Segment, SingularPoint};

const SIZE: f64 = 512.0;

/// Standalone SVG: disk outline, nodal segments, and singular points as
/// dots labelled with their order.
pub fn render_svg(radius: f64, segments: &[Segment], singular: &[SingularPoint]) -> String {
    let scale = SIZE / (2.2 * radius);
    let map = |x: f64, y: f64| (SIZE / 2.0 + scale * x, SIZE / 2.0 - scale * y);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(
        out,
        r##"<circle cx="{c}" cy="{c}" r="{r:.3}" fill="none" stroke="#555555" stroke-width="1.5"/>"##,
        c = SIZE / 2.0,
        r = scale * radius
    );
    if !segments.is_empty() {
        let mut d = String::new();
        for s in segments {
            let (x0, y0) = map(s[0].0, s[0].1);
            let (x1, y1) = map(s[1].0, s[1].1);
            let _ = write!(d, "M{x0:.2} {y0:.2}L{x1:.2} {y1:.2}");
        }
        let _ = writeln!(out, r##"<path d="{d}" fill="none" stroke="#1f4e9c" stroke-width="1.5"/>"##);
    }
    for p in singular {
        let (x, y) = map(p.x, p.y);
        let _ = writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="#c0392b"/>"##);
        let _ = writeln!(
            out,
            r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13" fill="#c0392b">{}</text>"##,
            x + 6.0,
            y - 6.0,
            p.order
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outline_only() {
        let s = render_svg(1.0, &[], &[]);
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<circle").count(), 1);
        assert!(!s.contains("<path"));
    }

    #[test]
    fn labelled_dots() {
        let p = SingularPoint { x: 0.0, y: 0.0, exact: None, order: 3, residual: 0.0 };
        let s = render_svg(1.0, &[[(-1.0, 0.0), (1.0, 0.0)]], &[p]);
        assert!(s.contains(">3</text>"));
        assert!(s.contains("<path d=\"M"));
    }
}
