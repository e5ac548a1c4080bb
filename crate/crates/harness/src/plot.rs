//! SVG rendering of result files.
//!
//! Both plots are pure functions of the CSV text they are given.

use std::collections::BTreeMap;
use std::path::Path;

use plotters::prelude::*;

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Selection rate against sample count, one line per setting.
    Rates,
    /// Centrality around the ring, one panel per `p`.
    Profile,
}

impl std::str::FromStr for PlotKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rates" => Ok(PlotKind::Rates),
            "profile" => Ok(PlotKind::Profile),
            other => Err(HarnessError::Usage(format!(
                "unknown plot kind `{other}` (expected rates|profile)"
            ))),
        }
    }
}

fn plot_err<E: std::fmt::Display>(e: E) -> HarnessError {
    HarnessError::Plot(e.to_string())
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let header = reader.headers()?.iter().map(str::to_string).collect();
        let rows = reader
            .records()
            .map(|r| r.map(|r| r.iter().map(str::to_string).collect()))
            .collect::<std::result::Result<_, _>>()?;
        Ok(Table { header, rows })
    }

    fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.column(name)
            .ok_or_else(|| HarnessError::Plot(format!("missing column `{name}`")))
    }
}

fn number(field: &str, column: &str) -> Result<f64> {
    field
        .parse()
        .map_err(|_| HarnessError::Plot(format!("bad number `{field}` in column `{column}`")))
}

/// `0.04605170185988092` -> `0.04605`; non-numbers pass through.
fn short_number(s: &str) -> String {
    match s.parse::<f64>() {
        Ok(x) if x != 0.0 && x.abs() < 1e-3 => format!("{x:.3e}"),
        Ok(x) => {
            let t = format!("{x:.5}");
            t.trim_end_matches('0').trim_end_matches('.').to_string()
        }
        Err(_) => s.to_string(),
    }
}

/// A named polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Selection-rate series from either a per-trial results file or a summary.
///
/// Rows with `m = inf` have no place on the sample-count axis and are skipped.
pub fn rate_series(text: &str) -> Result<Vec<Series>> {
    let t = Table::parse(text)?;
    let m_col = t.require("m")?;
    let filter_col = t.column("filter");
    let p_col = t.column("p");
    let label_of = |row: &[String]| {
        let filter = filter_col.map(|c| row[c].as_str()).unwrap_or("");
        match p_col.map(|c| row[c].as_str()) {
            Some(p) if !p.is_empty() => format!("{filter} p={}", short_number(p)),
            _ => filter.to_string(),
        }
    };

    // (label order of first appearance, m) -> (hits, total) or a given rate
    let mut order: Vec<String> = Vec::new();
    let mut points: BTreeMap<(usize, u64), (f64, f64)> = BTreeMap::new();
    let rate_col = t.column("rate");
    let correct_col = t.column("correct");
    if rate_col.is_none() && correct_col.is_none() {
        return Err(HarnessError::Plot(
            "need a `rate` or `correct` column".into(),
        ));
    }
    for row in &t.rows {
        if row[m_col] == "inf" {
            continue;
        }
        let m = number(&row[m_col], "m")?;
        let label = label_of(row);
        let li = order.iter().position(|l| *l == label).unwrap_or_else(|| {
            order.push(label);
            order.len() - 1
        });
        let slot = points.entry((li, m.to_bits())).or_insert((0.0, 0.0));
        match (rate_col, correct_col) {
            (Some(c), _) => *slot = (number(&row[c], "rate")?, 1.0),
            (None, Some(c)) => {
                slot.0 += f64::from(u8::from(row[c] == "true"));
                slot.1 += 1.0;
            }
            (None, None) => unreachable!(),
        }
    }
    let mut series: Vec<Series> = order
        .into_iter()
        .map(|label| Series {
            label,
            points: Vec::new(),
        })
        .collect();
    for ((li, m_bits), (hits, total)) in points {
        series[li]
            .points
            .push((f64::from_bits(m_bits), hits / total));
    }
    for s in &mut series {
        s.points.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    Ok(series)
}

/// Per-`p` centrality profiles: `(p label, reference, [(angle, value)])`.
pub fn profile_series(text: &str) -> Result<Vec<(Series, f64)>> {
    let t = Table::parse(text)?;
    let p_col = t.require("p")?;
    let angle_col = t.require("angle")?;
    let value_col = t.require("centrality")?;
    let ref_col = t.require("reference")?;
    let mut out: Vec<(Series, f64)> = Vec::new();
    for row in &t.rows {
        let label = format!("p={}", short_number(&row[p_col]));
        let point = (
            number(&row[angle_col], "angle")?,
            number(&row[value_col], "centrality")?,
        );
        let reference = number(&row[ref_col], "reference")?;
        match out.iter_mut().find(|(s, _)| s.label == label) {
            Some((s, _)) => s.points.push(point),
            None => out.push((
                Series {
                    label,
                    points: vec![point],
                },
                reference,
            )),
        }
    }
    Ok(out)
}

const COLORS: [RGBColor; 8] = [
    RGBColor(31, 119, 180),
    RGBColor(255, 127, 14),
    RGBColor(44, 160, 44),
    RGBColor(214, 39, 40),
    RGBColor(148, 103, 189),
    RGBColor(140, 86, 75),
    RGBColor(227, 119, 194),
    RGBColor(127, 127, 127),
];

pub fn render_rates(series: &[Series], out: &Path) -> Result<()> {
    let root = SVGBackend::new(out, (800, 560)).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let xs = series.iter().flat_map(|s| s.points.iter().map(|p| p.0));
    let (lo, hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
        (lo.min(x), hi.max(x))
    });
    let (lo, hi) = if lo.is_finite() {
        let pad = ((hi - lo) * 0.05).max(1.0);
        (lo - pad, hi + pad)
    } else {
        (0.0, 1.0)
    };
    let mut chart = ChartBuilder::on(&root)
        .caption("Selection rate by sample size", ("sans-serif", 22))
        .margin(16)
        .x_label_area_size(44)
        .y_label_area_size(56)
        .build_cartesian_2d(lo..hi, 0.0..1.02)
        .map_err(plot_err)?;
    chart
        .configure_mesh()
        .x_desc("number of signals m")
        .x_label_formatter(&|x| format!("{x:.0}"))
        .y_desc("selection rate")
        .draw()
        .map_err(plot_err)?;
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        chart
            .draw_series(LineSeries::new(
                s.points.iter().copied(),
                color.stroke_width(2),
            ))
            .map_err(plot_err)?
            .label(s.label.clone())
            .legend(move |(x, y)| {
                PathElement::new(vec![(x, y), (x + 18, y)], color.stroke_width(2))
            });
        chart
            .draw_series(s.points.iter().map(|&p| Circle::new(p, 3, color.filled())))
            .map_err(plot_err)?;
    }
    if !series.is_empty() {
        chart
            .configure_series_labels()
            .position(SeriesLabelPosition::LowerRight)
            .background_style(WHITE.mix(0.85))
            .border_style(BLACK)
            .draw()
            .map_err(plot_err)?;
    }
    root.present().map_err(plot_err)?;
    Ok(())
}

/// Each profile is drawn as a closed curve with radius equal to the node's
/// centrality; the dashed circle has radius `1/√n`.
pub fn render_profiles(profiles: &[(Series, f64)], out: &Path) -> Result<()> {
    let cols = profiles.len().clamp(1, 3);
    let rows = profiles.len().div_ceil(cols).max(1);
    let root = SVGBackend::new(out, (320 * cols as u32, 340 * rows as u32)).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let panels = root.split_evenly((rows, cols));
    if profiles.is_empty() {
        ChartBuilder::on(&panels[0])
            .caption("centrality profile", ("sans-serif", 18))
            .margin(12)
            .build_cartesian_2d(-1.0..1.0, -1.0..1.0)
            .map_err(plot_err)?
            .configure_mesh()
            .draw()
            .map_err(plot_err)?;
    }
    for (i, ((s, reference), panel)) in profiles.iter().zip(&panels).enumerate() {
        let peak = s
            .points
            .iter()
            .map(|p| p.1.abs())
            .fold(*reference, f64::max)
            * 1.1;
        let mut chart = ChartBuilder::on(panel)
            .caption(&s.label, ("sans-serif", 18))
            .margin(12)
            .build_cartesian_2d(-peak..peak, -peak..peak)
            .map_err(plot_err)?;
        let circle: Vec<(f64, f64)> = (0..=180)
            .map(|t| {
                let a = std::f64::consts::TAU * t as f64 / 180.0;
                (reference * a.cos(), reference * a.sin())
            })
            .collect();
        chart
            .draw_series(DashedLineSeries::new(circle, 4, 4, BLACK.stroke_width(1)))
            .map_err(plot_err)?;
        let mut curve: Vec<(f64, f64)> = s
            .points
            .iter()
            .map(|&(a, r)| (r * a.cos(), r * a.sin()))
            .collect();
        if let Some(&first) = curve.first() {
            curve.push(first);
        }
        let color = COLORS[i % COLORS.len()];
        chart
            .draw_series(LineSeries::new(curve, color.stroke_width(2)))
            .map_err(plot_err)?;
    }
    root.present().map_err(plot_err)?;
    Ok(())
}

/// Render `text` (CSV) to an SVG at `out`.
pub fn plot_csv(text: &str, kind: PlotKind, out: &Path) -> Result<()> {
    match kind {
        PlotKind::Rates => render_rates(&rate_series(text)?, out),
        PlotKind::Profile => render_profiles(&profile_series(text)?, out),
    }
}
