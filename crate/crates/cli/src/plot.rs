//! Abnormality-versus-frame line chart as a standalone SVG.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::path::{Path, PathBuf};

use motion_novelty::score::parse_score_csv;
use motion_novelty::NoveltyScore;

use crate::config::{write_run_record, Overrides, RunConfig};
use crate::error::CliError;

/// Identifies the renderer; the only line allowed to differ between
/// otherwise identical plots.
pub const GENERATOR: &str = concat!("novelty-plot ", env!("CARGO_PKG_VERSION"));
pub const PLOT_FILE: &str = "abnormality.svg";

const WIDTH: f64 = 1200.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 4] = ["#1f77b4", "#2ca02c", "#9467bd", "#8c564b"];

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub label: String,
    pub scores: Vec<NoveltyScore>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Value range shown on the y axis, always containing the threshold.
fn y_range(segments: &[Segment], threshold: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (threshold, threshold);
    for a in segments.iter().flat_map(|s| s.scores.iter().filter_map(|x| x.abnormality)) {
        lo = lo.min(a);
        hi = hi.max(a);
    }
    if hi - lo < 1e-9 {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Renders segments side by side in the given order. Unscored frames leave
/// gaps in the trace.
pub fn render_svg(segments: &[Segment], threshold: f64) -> String {
    let total: usize = segments.iter().map(|s| s.scores.len()).sum::<usize>().max(1);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let (lo, hi) = y_range(segments, threshold);
    let x_at = |i: usize| LEFT + (i as f64 + 0.5) / total as f64 * plot_w;
    let y_at = |v: f64| TOP + (hi - v) / (hi - lo) * plot_h;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, "<!-- generator: {GENERATOR} -->").unwrap();
    writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r##"<rect class="frame" x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#444"/>"##
    )
    .unwrap();
    for tick in 0..=4 {
        let v = lo + (hi - lo) * tick as f64 / 4.0;
        let y = y_at(v);
        writeln!(
            s,
            r##"<text class="tick" x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            LEFT - 6.0,
            y + 4.0,
            format_tick(v)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">frame</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">abnormality</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    )
    .unwrap();

    let mut offset = 0;
    for (n, seg) in segments.iter().enumerate() {
        let start_x = LEFT + offset as f64 / total as f64 * plot_w;
        let end_x = LEFT + (offset + seg.scores.len()) as f64 / total as f64 * plot_w;
        if n > 0 {
            writeln!(
                s,
                r##"<line class="segment-boundary" x1="{start_x:.2}" y1="{TOP}" x2="{start_x:.2}" y2="{:.2}" stroke="#999"/>"##,
                TOP + plot_h
            )
            .unwrap();
        }
        writeln!(
            s,
            r#"<text class="segment-label" x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            (start_x + end_x) / 2.0,
            TOP + plot_h + 18.0,
            escape(&seg.label)
        )
        .unwrap();
        let color = COLORS[n % COLORS.len()];
        let mut run: Vec<String> = Vec::new();
        let flush = |run: &mut Vec<String>, s: &mut String| {
            if !run.is_empty() {
                writeln!(
                    s,
                    r#"<polyline class="trace" fill="none" stroke="{color}" stroke-width="1.2" points="{}"/>"#,
                    run.join(" ")
                )
                .unwrap();
                run.clear();
            }
        };
        for (i, score) in seg.scores.iter().enumerate() {
            match score.abnormality {
                Some(a) => run.push(format!("{:.2},{:.2}", x_at(offset + i), y_at(a))),
                None => flush(&mut run, &mut s),
            }
        }
        flush(&mut run, &mut s);
        offset += seg.scores.len();
    }

    let ty = y_at(threshold);
    writeln!(
        s,
        r##"<line class="threshold" x1="{LEFT}" y1="{ty:.2}" x2="{:.2}" y2="{ty:.2}" stroke="#d62728" stroke-dasharray="6 4"/>"##,
        LEFT + plot_w
    )
    .unwrap();
    writeln!(
        s,
        r##"<text class="threshold-label" x="{:.2}" y="{:.2}" text-anchor="end" fill="#d62728">threshold {threshold}</text>"##,
        LEFT + plot_w - 4.0,
        ty - 4.0
    )
    .unwrap();
    s.push_str("</svg>\n");
    s
}

fn format_tick(v: f64) -> String {
    if v.abs() >= 1e4 || (v != 0.0 && v.abs() < 1e-3) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

/// Segment label for a score file: its name without `.scores.csv`.
pub fn segment_label(path: &Path) -> String {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    name.strip_suffix(".scores.csv")
        .or_else(|| name.strip_suffix(".csv"))
        .unwrap_or(&name)
        .to_string()
}

pub fn load_segments(paths: &[PathBuf]) -> Result<Vec<Segment>, CliError> {
    let mut segments = Vec::with_capacity(paths.len());
    for p in paths {
        let file = File::open(p).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
        let scores = parse_score_csv(file).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
        segments.push(Segment { label: segment_label(p), scores });
    }
    Ok(segments)
}

/// Writes the chart to `--out/abnormality.svg` or stdout; returns the SVG text.
pub fn run(flags: &Overrides, paths: &[PathBuf]) -> Result<String, CliError> {
    let cfg = RunConfig::resolve(flags)?;
    if paths.is_empty() {
        return Err(CliError::usage("plot needs at least one score CSV"));
    }
    let segments = load_segments(paths)?;
    if segments.iter().all(|s| s.scores.is_empty()) {
        return Err(CliError::input("score CSVs hold no frames to plot"));
    }
    let svg = render_svg(&segments, cfg.threshold);
    match &cfg.out {
        Some(out) => {
            fs::create_dir_all(out).map_err(|e| CliError::output(out, e))?;
            let path = out.join(PLOT_FILE);
            fs::write(&path, &svg).map_err(|e| CliError::output(&path, e))?;
            write_run_record(out, "plot", &cfg, serde_json::json!({ "inputs": paths }))?;
        }
        None => print!("{svg}"),
    }
    Ok(svg)
}
