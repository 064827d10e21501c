//! Dependency-free SVG charts: scatter, bar, heatmap, and pie.
//!
//! Output is plain SVG markup, deterministic for identical inputs, so chart
//! files can be diffed byte-for-byte and checked structurally in tests.

use std::fmt::Write as _;

/// Ten-color categorical palette.
pub const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 70.0;

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn color_for(index: usize) -> &'static str {
    PALETTE[index % PALETTE.len()]
}

fn svg_open(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"white\"/>"
    );
}

fn title_text(out: &mut String, title: &str, width: f64) {
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">{}</text>",
        width / 2.0,
        escape(title)
    );
}

struct Range {
    min: f64,
    max: f64,
}

impl Range {
    fn of(values: impl Iterator<Item = f64>) -> Self {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values {
            min = min.min(v);
            max = max.max(v);
        }
        if !min.is_finite() || !max.is_finite() {
            return Self { min: 0.0, max: 1.0 };
        }
        if (max - min).abs() < f64::EPSILON {
            // Degenerate span: pad so scaling stays finite.
            return Self {
                min: min - 0.5,
                max: max + 0.5,
            };
        }
        Self { min, max }
    }

    fn scale(&self, value: f64, lo: f64, hi: f64) -> f64 {
        lo + (value - self.min) / (self.max - self.min) * (hi - lo)
    }

    fn ticks(&self, count: usize) -> Vec<f64> {
        (0..=count)
            .map(|i| self.min + (self.max - self.min) * i as f64 / count as f64)
            .collect()
    }
}

fn axes(out: &mut String, x_range: &Range, y_range: &Range, x_label: &str, y_label: &str) {
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    let _ = writeln!(
        out,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        out,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>"
    );
    for tick in x_range.ticks(5) {
        let x = x_range.scale(tick, x0, x1);
        let _ = writeln!(
            out,
            "<line x1=\"{x:.2}\" y1=\"{y0}\" x2=\"{x:.2}\" y2=\"{}\" stroke=\"black\"/>",
            y0 + 6.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{x:.2}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">{tick:.3}</text>",
            y0 + 20.0
        );
    }
    for tick in y_range.ticks(5) {
        let y = y_range.scale(tick, y0, y1);
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{y:.2}\" x2=\"{x0}\" y2=\"{y:.2}\" stroke=\"black\"/>",
            x0 - 6.0
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">{tick:.3}</text>",
            x0 - 10.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{}</text>",
        (x0 + x1) / 2.0,
        HEIGHT - 20.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        "<text x=\"18\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 {:.1})\">{}</text>",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
}

/// Scatter plot; points are optionally colored by a label per point.
pub fn scatter(
    points: &[(f64, f64)],
    labels: Option<&[usize]>,
    title: &str,
    x_label: &str,
    y_label: &str,
) -> String {
    let mut out = String::new();
    svg_open(&mut out, WIDTH, HEIGHT);
    title_text(&mut out, title, WIDTH);
    let x_range = Range::of(points.iter().map(|p| p.0));
    let y_range = Range::of(points.iter().map(|p| p.1));
    axes(&mut out, &x_range, &y_range, x_label, y_label);
    for (i, &(x, y)) in points.iter().enumerate() {
        let px = x_range.scale(x, MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
        let py = y_range.scale(y, HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);
        let color = labels.map(|l| color_for(l[i])).unwrap_or(PALETTE[0]);
        let _ = writeln!(
            &mut out,
            "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"4\" fill=\"{color}\" fill-opacity=\"0.8\"/>"
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Vertical bar chart with one bar per label.
pub fn bar_chart(labels: &[String], values: &[usize], title: &str, y_label: &str) -> String {
    assert_eq!(labels.len(), values.len());
    let mut out = String::new();
    svg_open(&mut out, WIDTH, HEIGHT);
    title_text(&mut out, title, WIDTH);
    let max = values.iter().copied().max().unwrap_or(1).max(1) as f64;
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    let _ = writeln!(
        &mut out,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>"
    );
    let n = labels.len().max(1);
    let slot = (x1 - x0) / n as f64;
    let bar_width = slot * 0.7;
    for (i, (label, &value)) in labels.iter().zip(values).enumerate() {
        let height = (value as f64 / max) * (y0 - y1);
        let x = x0 + slot * i as f64 + slot * 0.15;
        let y = y0 - height;
        let _ = writeln!(
            &mut out,
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{bar_width:.2}\" height=\"{height:.2}\" fill=\"{}\" class=\"bar\"/>",
            color_for(i)
        );
        let _ = writeln!(
            &mut out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{value}</text>",
            x + bar_width / 2.0,
            y - 6.0
        );
        let _ = writeln!(
            &mut out,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" transform=\"rotate(-35 {:.2} {:.2})\">{}</text>",
            x + bar_width / 2.0,
            y0 + 16.0,
            x + bar_width / 2.0,
            y0 + 16.0,
            escape(label)
        );
    }
    let _ = writeln!(
        &mut out,
        "<text x=\"18\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 {:.1})\">{}</text>",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(y_label)
    );
    out.push_str("</svg>\n");
    out
}

/// Word-by-cluster heatmap with counts printed in the cells.
pub fn heatmap(words: &[String], counts: &[Vec<usize>], title: &str) -> String {
    let num_clusters = counts.first().map(Vec::len).unwrap_or(0);
    let cell = 34.0;
    let left = 130.0;
    let top = 70.0;
    let width = left + num_clusters as f64 * cell + 40.0;
    let height = top + words.len() as f64 * cell + 30.0;
    let max = counts
        .iter()
        .flat_map(|row| row.iter())
        .copied()
        .max()
        .unwrap_or(1)
        .max(1) as f64;

    let mut out = String::new();
    svg_open(&mut out, width, height);
    title_text(&mut out, title, width);
    for c in 0..num_clusters {
        let _ = writeln!(
            &mut out,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{c}</text>",
            left + c as f64 * cell + cell / 2.0,
            top - 10.0
        );
    }
    for (row, (word, row_counts)) in words.iter().zip(counts).enumerate() {
        let y = top + row as f64 * cell;
        let _ = writeln!(
            &mut out,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            left - 8.0,
            y + cell / 2.0 + 4.0,
            escape(word)
        );
        for (c, &value) in row_counts.iter().enumerate() {
            let x = left + c as f64 * cell;
            let intensity = value as f64 / max;
            let shade = (255.0 - intensity * 175.0) as u8;
            let _ = writeln!(
                &mut out,
                "<rect x=\"{x:.1}\" y=\"{y:.1}\" width=\"{cell}\" height=\"{cell}\" fill=\"rgb({shade},{shade},255)\" stroke=\"#ccc\" class=\"cell\"/>"
            );
            let _ = writeln!(
                &mut out,
                "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">{value}</text>",
                x + cell / 2.0,
                y + cell / 2.0 + 3.0
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Pie chart of labeled values; zero-total input renders an empty chart.
pub fn pie_chart(labels: &[String], values: &[usize], title: &str) -> String {
    assert_eq!(labels.len(), values.len());
    let mut out = String::new();
    svg_open(&mut out, WIDTH, HEIGHT);
    title_text(&mut out, title, WIDTH);
    let total: usize = values.iter().sum();
    let cx = 300.0;
    let cy = 320.0;
    let r = 190.0;
    if total == 0 {
        let _ = writeln!(
            &mut out,
            "<text x=\"{cx}\" y=\"{cy}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">no data</text>"
        );
        out.push_str("</svg>\n");
        return out;
    }

    let nonzero: Vec<(usize, (&String, &usize))> = labels
        .iter()
        .zip(values)
        .enumerate()
        .filter(|(_, (_, &v))| v > 0)
        .collect();
    if nonzero.len() == 1 {
        let (i, (label, &value)) = nonzero[0];
        let _ = writeln!(
            &mut out,
            "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"{r}\" fill=\"{}\" class=\"slice\"/>",
            color_for(i)
        );
        let _ = writeln!(
            &mut out,
            "<text x=\"{cx}\" y=\"{cy}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">{} ({value})</text>",
            escape(label)
        );
        out.push_str("</svg>\n");
        return out;
    }

    let mut angle = -std::f64::consts::FRAC_PI_2;
    for (i, (label, &value)) in nonzero {
        let sweep = value as f64 / total as f64 * std::f64::consts::TAU;
        let end = angle + sweep;
        let (x0, y0) = (cx + r * angle.cos(), cy + r * angle.sin());
        let (x1, y1) = (cx + r * end.cos(), cy + r * end.sin());
        let large = if sweep > std::f64::consts::PI { 1 } else { 0 };
        let _ = writeln!(
            &mut out,
            "<path d=\"M {cx} {cy} L {x0:.2} {y0:.2} A {r} {r} 0 {large} 1 {x1:.2} {y1:.2} Z\" fill=\"{}\" stroke=\"white\" class=\"slice\"/>",
            color_for(i)
        );
        // Legend row.
        let ly = 90.0 + i as f64 * 22.0;
        let _ = writeln!(
            &mut out,
            "<rect x=\"540\" y=\"{:.1}\" width=\"14\" height=\"14\" fill=\"{}\"/>",
            ly - 11.0,
            color_for(i)
        );
        let _ = writeln!(
            &mut out,
            "<text x=\"560\" y=\"{ly:.1}\" font-family=\"sans-serif\" font-size=\"12\">{} ({value})</text>",
            escape(label)
        );
        angle = end;
    }
    out.push_str("</svg>\n");
    out
}
