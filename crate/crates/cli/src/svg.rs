//! Minimal SVG line charts: one panel for the real part, one for the
//! imaginary part.

use std::fmt::Write;

pub struct Series<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub dashed: bool,
    pub points: Vec<(f64, f64)>,
}

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 300.0;
const MARGIN: f64 = 50.0;

fn bounds(series: &[Series]) -> (f64, f64, f64, f64) {
    let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in series.iter().flat_map(|s| s.points.iter()) {
        if x.is_finite() && y.is_finite() {
            b = (b.0.min(*x), b.1.max(*x), b.2.min(*y), b.3.max(*y));
        }
    }
    if !b.0.is_finite() {
        return (0.0, 1.0, -1.0, 1.0);
    }
    if b.1 - b.0 < 1e-300 {
        b.1 = b.0 + 1.0;
    }
    if b.3 - b.2 < 1e-12 * (b.2.abs() + b.3.abs()).max(1e-300) {
        b.2 -= 0.5;
        b.3 += 0.5;
    }
    let pad = 0.05 * (b.3 - b.2);
    (b.0, b.1, b.2 - pad, b.3 + pad)
}

fn panel(out: &mut String, x0: f64, title: &str, series: &[Series]) {
    let (xmin, xmax, ymin, ymax) = bounds(series);
    let w = PANEL_W - 2.0 * MARGIN;
    let h = PANEL_H - 2.0 * MARGIN;
    let px = |x: f64| x0 + MARGIN + (x - xmin) / (xmax - xmin) * w;
    let py = |y: f64| MARGIN + (ymax - y) / (ymax - ymin) * h;
    let _ = writeln!(
        out,
        r#"<rect x="{:.1}" y="{MARGIN:.1}" width="{w:.1}" height="{h:.1}" fill="none" stroke="black"/>"#,
        x0 + MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="14">{title}</text>"#,
        x0 + PANEL_W / 2.0,
        MARGIN - 15.0
    );
    for (v, anchor_y) in [(ymin, py(ymin)), (ymax, py(ymax))] {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-size="10">{v:.3e}</text>"#,
            x0 + MARGIN - 4.0,
            anchor_y + 3.0
        );
    }
    for v in [xmin, xmax] {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="10">{v:.3}</text>"#,
            px(v),
            MARGIN + h + 14.0
        );
    }
    for (k, s) in series.iter().enumerate() {
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let dash = if s.dashed { r#" stroke-dasharray="5,4""# } else { "" };
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5"{dash} points="{}"/>"#,
            s.color,
            pts.join(" ")
        );
        let ly = MARGIN + h + 30.0 + 14.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{ly:.1}" font-size="11" fill="{}">{}</text>"#,
            x0 + MARGIN,
            s.color,
            s.label
        );
    }
}

/// Two side-by-side panels; `re` and `im` hold the series for each part.
pub fn two_panel(title: &str, re: &[Series], im: &[Series]) -> String {
    let rows = re.len().max(im.len()) as f64;
    let height = PANEL_H + 20.0 + 14.0 * rows;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{height:.0}" font-family="sans-serif">"#,
        2.0 * PANEL_W
    );
    let _ = writeln!(out, r#"<title>{title}</title>"#);
    panel(&mut out, 0.0, &format!("Re {title}"), re);
    panel(&mut out, PANEL_W, &format!("Im {title}"), im);
    out.push_str("</svg>\n");
    out
}
