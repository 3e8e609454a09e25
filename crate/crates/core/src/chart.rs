//! Static SVG bar charts with a fixed 960×540 viewport.
//!
//! Output depends only on the inputs: coordinates are printed with two
//! decimals and nothing is measured from fonts.

use std::fmt::Write as _;
use std::path::Path;

pub const WIDTH: f64 = 960.0;
pub const HEIGHT: f64 = 540.0;

const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 56.0;
const BOTTOM: f64 = 110.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

#[derive(Debug, thiserror::Error)]
pub enum ChartError {
    #[error("chart has no categories")]
    Empty,
    #[error("chart has no series")]
    NoSeries,
    #[error("series {name:?} has {got} values for {expected} categories")]
    LengthMismatch { name: String, got: usize, expected: usize },
    #[error("series {name:?} has a negative or non-finite value {value}")]
    BadValue { name: String, value: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarSeries {
    pub name: String,
    pub values: Vec<f64>,
    /// Fill colour; a palette colour is used when `None`.
    pub color: Option<String>,
}

impl BarSeries {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            values,
            color: None,
        }
    }

    pub fn with_color(mut self, color: impl Into<String>) -> Self {
        self.color = Some(color.into());
        self
    }
}

pub fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            // characters XML 1.0 cannot carry
            c if (c as u32) < 0x20 && !matches!(c, '\t' | '\n' | '\r') => {}
            c => out.push(c),
        }
    }
    out
}

fn fmt_tick(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn header(svg: &mut String, title: &str) {
    let _ = write!(
        svg,
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <title>{t}</title>\n\
         <g font-family=\"sans-serif\" font-size=\"12\" fill=\"#222222\">\n\
         <text x=\"{x:.2}\" y=\"30\" font-size=\"18\" text-anchor=\"middle\">{t}</text>\n",
        t = escape_xml(title),
        x = WIDTH / 2.0,
    );
}

fn footer(svg: &mut String) {
    svg.push_str("</g>\n</svg>\n");
}

fn validate(categories: &[String], series: &[BarSeries]) -> Result<f64, ChartError> {
    if categories.is_empty() {
        return Err(ChartError::Empty);
    }
    if series.is_empty() {
        return Err(ChartError::NoSeries);
    }
    let mut max = 0.0f64;
    for s in series {
        if s.values.len() != categories.len() {
            return Err(ChartError::LengthMismatch {
                name: s.name.clone(),
                got: s.values.len(),
                expected: categories.len(),
            });
        }
        for &v in &s.values {
            if !v.is_finite() || v < 0.0 {
                return Err(ChartError::BadValue {
                    name: s.name.clone(),
                    value: v,
                });
            }
            max = max.max(v);
        }
    }
    Ok(max)
}

/// Vertical bar chart, one group of bars per category and one bar per
/// series inside each group. The value axis runs from 0 to the largest
/// value, so the tallest bar spans the whole plot height.
pub fn render_svg_bar(categories: &[String], series: &[BarSeries], title: &str) -> Result<String, ChartError> {
    let max = validate(categories, series)?;
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let base = TOP + plot_h;

    let mut svg = String::new();
    header(&mut svg, title);

    // grid and value labels
    svg.push_str("<g class=\"grid\" stroke=\"#dddddd\" stroke-width=\"1\">\n");
    for i in 1..=4 {
        let y = base - plot_h * i as f64 / 4.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{LEFT:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\"/>",
            LEFT + plot_w
        );
    }
    svg.push_str("</g>\n<g class=\"ticks\" text-anchor=\"end\">\n");
    for i in 0..=4 {
        let y = base - plot_h * i as f64 / 4.0;
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
            LEFT - 6.0,
            y + 4.0,
            fmt_tick(max * i as f64 / 4.0)
        );
    }
    svg.push_str("</g>\n");

    let slot = plot_w / categories.len() as f64;
    let group_w = slot * 0.8;
    let bar_w = group_w / series.len() as f64;
    svg.push_str("<g class=\"bars\">\n");
    for (si, s) in series.iter().enumerate() {
        let color = s.color.as_deref().unwrap_or(PALETTE[si % PALETTE.len()]);
        for (ci, &v) in s.values.iter().enumerate() {
            let h = if max > 0.0 { plot_h * v / max } else { 0.0 };
            let x = LEFT + slot * ci as f64 + slot * 0.1 + bar_w * si as f64;
            let _ = writeln!(
                svg,
                "<rect class=\"bar\" x=\"{x:.2}\" y=\"{:.2}\" width=\"{bar_w:.2}\" height=\"{h:.2}\" fill=\"{}\"><title>{}: {}</title></rect>",
                base - h,
                escape_xml(color),
                escape_xml(&categories[ci]),
                fmt_tick(v),
            );
        }
    }
    svg.push_str("</g>\n");

    // category labels, rotated so long dates do not collide
    svg.push_str("<g class=\"labels\" text-anchor=\"end\">\n");
    for (ci, c) in categories.iter().enumerate() {
        let x = LEFT + slot * (ci as f64 + 0.5);
        let y = base + 14.0;
        let _ = writeln!(
            svg,
            "<text x=\"{x:.2}\" y=\"{y:.2}\" transform=\"rotate(-45 {x:.2} {y:.2})\">{}</text>",
            escape_xml(c)
        );
    }
    svg.push_str("</g>\n");

    let _ = writeln!(
        svg,
        "<g class=\"axes\" stroke=\"#222222\" stroke-width=\"1\">\n\
         <line x1=\"{LEFT:.2}\" y1=\"{TOP:.2}\" x2=\"{LEFT:.2}\" y2=\"{base:.2}\"/>\n\
         <line x1=\"{LEFT:.2}\" y1=\"{base:.2}\" x2=\"{:.2}\" y2=\"{base:.2}\"/>\n</g>",
        LEFT + plot_w
    );

    if series.len() > 1 {
        svg.push_str("<g class=\"legend\">\n");
        for (si, s) in series.iter().enumerate() {
            let color = s.color.as_deref().unwrap_or(PALETTE[si % PALETTE.len()]);
            let x = LEFT + 10.0 + 130.0 * si as f64;
            let _ = writeln!(
                svg,
                "<rect class=\"swatch\" x=\"{x:.2}\" y=\"38\" width=\"12\" height=\"12\" fill=\"{}\"/>\n<text x=\"{:.2}\" y=\"48\">{}</text>",
                escape_xml(color),
                x + 16.0,
                escape_xml(&s.name)
            );
        }
        svg.push_str("</g>\n");
    }
    footer(&mut svg);
    Ok(svg)
}

/// One small horizontal bar chart per topic, laid out on a grid.
pub fn render_topic_panel(topics: &[Vec<(String, f64)>], title: &str) -> Result<String, ChartError> {
    if topics.is_empty() {
        return Err(ChartError::Empty);
    }
    for (k, words) in topics.iter().enumerate() {
        if let Some(&(_, v)) = words.iter().find(|(_, v)| !v.is_finite() || *v < 0.0) {
            return Err(ChartError::BadValue {
                name: format!("topic {k}"),
                value: v,
            });
        }
    }
    let cols = topics.len().min(5);
    let rows = topics.len().div_ceil(cols);
    let cell_w = (WIDTH - 20.0) / cols as f64;
    let cell_h = (HEIGHT - 50.0) / rows as f64;
    let max = topics.iter().flatten().map(|(_, v)| *v).fold(0.0f64, f64::max);

    let mut svg = String::new();
    header(&mut svg, title);
    for (k, words) in topics.iter().enumerate() {
        let x0 = 10.0 + cell_w * (k % cols) as f64;
        let y0 = 50.0 + cell_h * (k / cols) as f64;
        let label_w = cell_w * 0.45;
        let bar_max = cell_w - label_w - 12.0;
        let line_h = ((cell_h - 22.0) / words.len().max(1) as f64).min(16.0);
        let _ = writeln!(
            svg,
            "<g class=\"topic\">\n<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" font-weight=\"bold\">Topic {k}</text>",
            x0 + 4.0,
            y0 + 14.0
        );
        for (i, (word, v)) in words.iter().enumerate() {
            let y = y0 + 20.0 + line_h * i as f64;
            let w = if max > 0.0 { bar_max * v / max } else { 0.0 };
            let _ = writeln!(
                svg,
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\" text-anchor=\"end\">{}</text>\n\
                 <rect class=\"bar\" x=\"{:.2}\" y=\"{:.2}\" width=\"{w:.2}\" height=\"{:.2}\" fill=\"{}\"/>",
                x0 + label_w,
                y + line_h * 0.75,
                escape_xml(word),
                x0 + label_w + 4.0,
                y + line_h * 0.15,
                line_h * 0.7,
                PALETTE[k % PALETTE.len()],
            );
        }
        svg.push_str("</g>\n");
    }
    footer(&mut svg);
    Ok(svg)
}

pub fn write_svg(svg: &str, path: &Path) -> Result<(), ChartError> {
    std::fs::write(path, svg)?;
    Ok(())
}
