//! CSV and SVG renderings of the workbench's illustrative curves.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use diffeo_core::fibrancy::{candidate_h, r_map, CircleSection, SectionVariant};
use diffeo_core::smoothcalc::make_cutoff;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Curve {
    /// `φ_ε` on `[0, 1]`.
    Cutoff { epsilon: f64 },
    /// `R(θ)` on `[−½, ½]`.
    R { epsilon: f64 },
    /// Barycentric coordinates of the circle section on `θ ∈ [−½, 3/2)`.
    Section { epsilon: f64 },
    /// `h(t) = F(t, t, t)` for the half-line candidate, on `[−1, 1]`.
    Obstruction,
}

impl Curve {
    pub fn parse(name: &str, epsilon: f64) -> Result<Self> {
        Ok(match name {
            "cutoff" => Curve::Cutoff { epsilon },
            "r" | "r-theta" => Curve::R { epsilon },
            "section" => Curve::Section { epsilon },
            "obstruction" | "h" => Curve::Obstruction,
            other => bail!("unknown curve `{other}` (expected cutoff, r-theta, section, obstruction)"),
        })
    }

    pub fn stem(&self) -> &'static str {
        match self {
            Curve::Cutoff { .. } => "cutoff",
            Curve::R { .. } => "r_theta",
            Curve::Section { .. } => "section",
            Curve::Obstruction => "obstruction_h",
        }
    }
}

/// Sampled columns: the first is the abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

fn grid(lo: f64, hi: f64, samples: usize) -> impl Iterator<Item = f64> {
    let steps = samples.max(2) - 1;
    (0..=steps).map(move |k| if k == steps { hi } else { lo + (hi - lo) * k as f64 / steps as f64 })
}

pub fn sample(curve: Curve, samples: usize) -> Result<Table> {
    let cols = |names: &[&str]| names.iter().map(|s| s.to_string()).collect();
    Ok(match curve {
        Curve::Cutoff { epsilon } => {
            let phi = make_cutoff(epsilon)?;
            Table { header: cols(&["t", "phi"]), rows: grid(0.0, 1.0, samples).map(|t| vec![t, phi.eval(t)]).collect() }
        }
        Curve::R { epsilon } => {
            make_cutoff(epsilon)?;
            let r = r_map(epsilon, SectionVariant::Blended);
            let rows = grid(-0.5, 0.5, samples).map(|t| Ok(vec![t, r.eval(&[t])?[0]])).collect::<Result<_>>()?;
            Table { header: cols(&["theta", "R"]), rows }
        }
        Curve::Section { epsilon } => {
            let s = CircleSection::new(epsilon, SectionVariant::Blended)?;
            let b = s.model().cell_b.clone();
            // the last sample stays below 3/2, which wraps to −1/2
            let hi = 1.5 - 1.0 / samples.max(2) as f64;
            let rows = grid(-0.5, hi, samples)
                .map(|t| {
                    let p = s.point(t);
                    let mut row = vec![t, f64::from(u8::from(p.cell == b))];
                    row.extend(p.coords);
                    row
                })
                .collect();
            Table { header: cols(&["theta", "cell_b", "x0", "x1", "x2"]), rows }
        }
        Curve::Obstruction => Table {
            header: cols(&["t", "h"]),
            rows: grid(-1.0, 1.0, samples).map(|t| vec![t, candidate_h(t)]).collect(),
        },
    })
}

pub fn to_csv(t: &Table) -> String {
    let mut s = t.header.join(",");
    s.push('\n');
    for row in &t.rows {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 40.0;
const COLORS: [&str; 4] = ["steelblue", "firebrick", "seagreen", "rebeccapurple"];

/// One polyline per non-abscissa column, sharing a common y range.
pub fn to_svg(t: &Table, title: &str) -> String {
    let (x0, x1) = bounds(t.rows.iter().map(|r| r[0]));
    let (y0, y1) = bounds(t.rows.iter().flat_map(|r| r[1..].iter().copied()));
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{PAD}" y="24" font-family="sans-serif" font-size="14">{title}</text>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="gray"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    let _ = writeln!(
        s,
        r#"<text x="{PAD}" y="{}" font-family="sans-serif" font-size="11">{}: [{x0}, {x1}], y: [{y0:.4}, {y1:.4}]</text>"#,
        H - 12.0,
        t.header[0]
    );
    for (c, name) in t.header.iter().enumerate().skip(1) {
        let pts: Vec<String> = t.rows.iter().map(|r| format!("{:.2},{:.2}", sx(r[0]), sy(r[c]))).collect();
        let color = COLORS[(c - 1) % COLORS.len()];
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"><title>{name}</title></polyline>"#,
            pts.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}

fn bounds(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}

/// Writes `<dir>/<stem>.csv` and `<dir>/<stem>.svg`.
pub fn emit_plot(curve: Curve, samples: usize, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    let table = sample(curve, samples)?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let csv = dir.join(format!("{}.csv", curve.stem()));
    let svg = dir.join(format!("{}.svg", curve.stem()));
    fs::write(&csv, to_csv(&table)).with_context(|| format!("writing {}", csv.display()))?;
    fs::write(&svg, to_svg(&table, curve.stem())).with_context(|| format!("writing {}", svg.display()))?;
    Ok((csv, svg))
}
