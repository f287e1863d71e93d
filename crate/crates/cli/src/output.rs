//! CSV, JSON and SVG emission.
//!
//! Numbers render through Rust's shortest-round-trip formatter, so a
//! parser recovers the exact f64 and identical runs produce identical
//! bytes. CSV follows RFC 4180 (the csv crate handles quoting); JSON goes
//! through serde_json; SVG is a built-in minimal polyline renderer.

use std::io::Write;
use std::path::Path;

use crate::CliError;

/// Shortest representation that round-trips the value.
pub fn fmt_f64(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x}")
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display())))?;
    writer
        .write_record(header)
        .and_then(|_| {
            for row in rows {
                writer.write_record(row)?;
            }
            writer.flush().map_err(csv::Error::from)
        })
        .map_err(|e| CliError::validation(format!("csv write failed: {e}")))
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::validation(format!("json encoding failed: {e}")))?;
    text.push('\n');
    std::fs::write(path, text)
        .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display())))
}

/// Minimal SVG 1.1 line plot: axes, ticks, one polyline.
pub struct LinePlot<'a> {
    pub xs: &'a [f64],
    pub ys: &'a [f64],
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub log_x: bool,
}

impl LinePlot<'_> {
    pub fn render(&self) -> String {
        const W: f64 = 800.0;
        const H: f64 = 500.0;
        const ML: f64 = 70.0; // margins
        const MR: f64 = 20.0;
        const MT: f64 = 20.0;
        const MB: f64 = 50.0;
        let tx = |x: f64| if self.log_x { x.ln() } else { x };
        let (x_min, x_max) = min_max(self.xs.iter().map(|&x| tx(x)));
        let (y_min, y_max) = min_max(self.ys.iter().copied());
        let x_span = (x_max - x_min).max(f64::MIN_POSITIVE);
        let y_span = (y_max - y_min).max(f64::MIN_POSITIVE);
        let px = |x: f64| ML + (tx(x) - x_min) / x_span * (W - ML - MR);
        let py = |y: f64| H - MB - (y - y_min) / y_span * (H - MT - MB);

        let mut svg = String::new();
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
        ));
        svg.push_str(&format!(
            "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
        ));
        // axes
        svg.push_str(&format!(
            "<line x1=\"{ML}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
            H - MB,
            W - MR,
            H - MB
        ));
        svg.push_str(&format!(
            "<line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{}\" stroke=\"black\"/>\n",
            H - MB
        ));
        // ticks: five per axis in data space
        for i in 0..=4 {
            let f = i as f64 / 4.0;
            let xd = x_min + f * x_span;
            let x_data = if self.log_x { xd.exp() } else { xd };
            let xp = ML + f * (W - ML - MR);
            svg.push_str(&format!(
                "<line x1=\"{xp}\" y1=\"{}\" x2=\"{xp}\" y2=\"{}\" stroke=\"black\"/>\n",
                H - MB,
                H - MB + 5.0
            ));
            svg.push_str(&format!(
                "<text x=\"{xp}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{:.3e}</text>\n",
                H - MB + 18.0,
                x_data
            ));
            let yd = y_min + f * y_span;
            let yp = H - MB - f * (H - MT - MB);
            svg.push_str(&format!(
                "<line x1=\"{}\" y1=\"{yp}\" x2=\"{ML}\" y2=\"{yp}\" stroke=\"black\"/>\n",
                ML - 5.0
            ));
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{:.3e}</text>\n",
                ML - 8.0,
                yp + 4.0,
                yd
            ));
        }
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
            (ML + W - MR) / 2.0,
            H - 10.0,
            self.x_label
        ));
        svg.push_str(&format!(
            "<text x=\"15\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 15 {})\">{}</text>\n",
            (MT + H - MB) / 2.0,
            (MT + H - MB) / 2.0,
            self.y_label
        ));
        let points: Vec<String> = self
            .xs
            .iter()
            .zip(self.ys)
            .map(|(&x, &y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\"/>\n",
            points.join(" ")
        ));
        svg.push_str("</svg>\n");
        svg
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut file = std::fs::File::create(path)
            .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display())))?;
        file.write_all(self.render().as_bytes())
            .map_err(|e| CliError::validation(format!("svg write failed: {e}")))
    }
}

fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}
