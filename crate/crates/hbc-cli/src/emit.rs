//! Frontier artifacts: CSV files and a minimal self-contained SVG scatter.

use std::path::Path;

use hbc::region::Frontier;

use crate::{Category, CliError};

/// Write the frontier CSV (header `lambda,rate_b,rate_c`, 9 decimals,
/// rows ascending in rate_c). Byte-stable for identical frontiers.
pub fn emit_frontier_csv(frontier: &Frontier, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, frontier.to_csv_string()).map_err(|e| {
        CliError::new(
            Category::Io,
            format!("cannot write {}: {e}", path.display()),
        )
    })
}

/// Scatter of (rate_c, rate_b) with a connecting polyline; no external
/// renderer, axes included.
pub fn frontier_svg(frontier: &Frontier) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const M: f64 = 56.0;

    let points = frontier.points();
    let max_c = points
        .iter()
        .map(|p| p.rate_c)
        .fold(0.0f64, f64::max)
        .max(1e-9);
    let max_b = points
        .iter()
        .map(|p| p.rate_b)
        .fold(0.0f64, f64::max)
        .max(1e-9);
    let sx = |c: f64| M + (c / max_c) * (W - 2.0 * M);
    let sy = |b: f64| H - M - (b / max_b) * (H - 2.0 * M);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
    ));
    // axes
    svg.push_str(&format!(
        "  <line x1=\"{M}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        H - M,
        W - M,
        H - M
    ));
    svg.push_str(&format!(
        "  <line x1=\"{M}\" y1=\"{M}\" x2=\"{M}\" y2=\"{}\" stroke=\"black\"/>\n",
        H - M
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">rate_c (bits)</text>\n",
        W / 2.0,
        H - 14.0
    ));
    svg.push_str(&format!(
        "  <text x=\"16\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\" \
         transform=\"rotate(-90 16 {})\">rate_b (bits)</text>\n",
        H / 2.0,
        H / 2.0
    ));
    svg.push_str(&format!(
        "  <text x=\"{M}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">0</text>\n",
        H - M + 16.0
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{max_c:.3}</text>\n",
        W - M,
        H - M + 16.0
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{max_b:.3}</text>\n",
        M - 6.0,
        M + 4.0
    ));

    if points.len() > 1 {
        let path: Vec<String> = points
            .iter()
            .map(|p| format!("{:.2},{:.2}", sx(p.rate_c), sy(p.rate_b)))
            .collect();
        svg.push_str(&format!(
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"#3366cc\" stroke-width=\"1.5\"/>\n",
            path.join(" ")
        ));
    }
    for p in points {
        svg.push_str(&format!(
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3.5\" fill=\"#cc3333\"/>\n",
            sx(p.rate_c),
            sy(p.rate_b)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn emit_frontier_svg(frontier: &Frontier, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, frontier_svg(frontier)).map_err(|e| {
        CliError::new(
            Category::Io,
            format!("cannot write {}: {e}", path.display()),
        )
    })
}
