//! Static SVG heatmaps of pairwise similarity, one small matrix per SDG.

use std::fmt::Write;

use sdglens_core::analytics::SimilarityReport;

const CELL: usize = 18;
const LABEL_W: usize = 70;
const HEADER_H: usize = 70;
const GAP: usize = 24;
const COLUMNS: usize = 6;
const NA_FILL: &str = "#bdbdbd";

/// Sequential fill, white at 0 to dark blue at `clamp`; values above saturate.
fn fill(v: f64, clamp: f64) -> String {
    let t = (v / clamp).clamp(0.0, 1.0);
    let mix = |lo: f64, hi: f64| (lo + (hi - lo) * t).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(255.0, 8.0),
        mix(255.0, 48.0),
        mix(255.0, 107.0)
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn render(report: &SimilarityReport, clamp: f64) -> String {
    let n = report.systems.len();
    let panel_w = LABEL_W + n * CELL + GAP;
    let panel_h = HEADER_H + n * CELL + GAP;
    let rows = report.per_sdg.len().div_ceil(COLUMNS);
    let bar_h = 60;
    let width = COLUMNS * panel_w + GAP;
    let height = rows * panel_h + bar_h + GAP;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="10" data-level="{}" data-scale-max="{clamp}">"#,
        report.level
    )
    .unwrap();
    s.push_str("<defs><linearGradient id=\"scale\" x1=\"0\" x2=\"1\" y1=\"0\" y2=\"0\">");
    for i in 0..=10 {
        let t = i as f64 / 10.0;
        write!(s, r#"<stop offset="{t}" stop-color="{}"/>"#, fill(t * clamp, clamp)).unwrap();
    }
    s.push_str("</linearGradient></defs>\n");

    for (k, m) in report.per_sdg.iter().enumerate() {
        let x0 = GAP + (k % COLUMNS) * panel_w;
        let y0 = GAP + (k / COLUMNS) * panel_h;
        writeln!(s, r#"<g transform="translate({x0},{y0})">"#).unwrap();
        writeln!(
            s,
            r#"<text x="{LABEL_W}" y="10" font-size="12" font-weight="bold">SDG {}</text>"#,
            m.sdg
        )
        .unwrap();
        for (j, name) in report.systems.iter().enumerate() {
            let cx = LABEL_W + j * CELL + CELL / 2;
            writeln!(
                s,
                r#"<text transform="translate({cx},{}) rotate(-60)">{}</text>"#,
                HEADER_H - 4,
                escape(name)
            )
            .unwrap();
        }
        for (i, a) in report.systems.iter().enumerate() {
            let y = HEADER_H + i * CELL;
            writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
                LABEL_W - 4,
                y + CELL - 5,
                escape(a)
            )
            .unwrap();
            for (j, b) in report.systems.iter().enumerate() {
                let x = LABEL_W + j * CELL;
                let (color, value) = match m.values[i][j] {
                    Some(v) => (fill(v, clamp), format!("{v:.3}")),
                    None => (NA_FILL.to_string(), "NA".to_string()),
                };
                writeln!(
                    s,
                    r##"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{color}" stroke="#ffffff"><title>{} / {}: {value}</title></rect>"##,
                    escape(a),
                    escape(b)
                )
                .unwrap();
            }
        }
        s.push_str("</g>\n");
    }

    let by = height - bar_h;
    writeln!(s, r#"<g transform="translate({GAP},{by})">"#).unwrap();
    s.push_str("<rect x=\"0\" y=\"0\" width=\"200\" height=\"12\" fill=\"url(#scale)\"/>\n");
    s.push_str("<text x=\"0\" y=\"26\">0</text>\n");
    writeln!(s, r#"<text x="200" y="26" text-anchor="end">{clamp}</text>"#).unwrap();
    writeln!(s, r#"<rect x="230" y="0" width="12" height="12" fill="{NA_FILL}"/>"#).unwrap();
    s.push_str("<text x=\"248\" y=\"10\">NA</text>\n");
    writeln!(
        s,
        r#"<text x="0" y="44">cosine similarity ({} level), colour scale clamped at {clamp}</text>"#,
        report.level
    )
    .unwrap();
    s.push_str("</g>\n</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fill_endpoints_and_saturation() {
        assert_eq!(fill(0.0, 0.5), "#ffffff");
        assert_eq!(fill(0.5, 0.5), "#08306b");
        assert_eq!(fill(0.9, 0.5), "#08306b");
    }

    #[test]
    fn escapes_markup() {
        assert_eq!(escape("a<b&\"c\""), "a&lt;b&amp;&quot;c&quot;");
    }
}
