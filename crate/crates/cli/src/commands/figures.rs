use std::path::{Path, PathBuf};

use jacobi_spectral::{Estimate, Policy};

use crate::commands::{density, weights_for};
use crate::output::{flag, num, write_table};
use crate::svg::{render, PlotSpec};
use crate::{CliError, Outcome};

pub const HEADER: [&str; 8] = ["x", "delta", "f", "n_used", "spread", "amplitude_delta", "converged", "excluded"];
pub const SHAPE_HEADER: [&str; 6] = ["alpha", "check", "value", "lower", "upper", "passed"];

/// Panels drawn, with the display name used in titles and file names.
pub const PANELS: [(f64, &str); 3] = [(0.6, "0.6"), (2.0 / 3.0, "2/3"), (0.8, "0.8")];

pub fn default_policy() -> Policy {
    Policy { n_max: 20_000_000, ..Policy::default() }
}

/// Positive half of the grid: a log ladder on `[0.01, 0.05)` then steps of `0.05` up to 3.
pub fn half_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (0..8).map(|i| 0.01 * 5f64.powf(i as f64 / 8.0)).collect();
    g[0] = 0.01;
    g.extend((1..=60).map(|i| i as f64 / 20.0));
    g
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShapeCheck {
    pub alpha: f64,
    pub panel: &'static str,
    pub check: String,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl ShapeCheck {
    pub fn passed(&self) -> bool {
        self.value > self.lower && self.value < self.upper
    }
}

#[derive(Clone, Debug)]
pub struct Panel {
    pub alpha: f64,
    pub name: &'static str,
    /// Full grid on `[-3, 3]`, negative half mirrored.
    pub estimates: Vec<Estimate>,
    /// Smallest converged `|x|`.
    pub hole_radius: f64,
    pub svg: PathBuf,
    pub csv: PathBuf,
}

impl Panel {
    pub fn f_at(&self, x: f64) -> f64 {
        self.estimates.iter().find(|e| e.x == x && e.converged).map_or(f64::NAN, |e| e.f)
    }
}

#[derive(Clone, Debug)]
pub struct FiguresRun {
    pub panels: Vec<Panel>,
    pub shapes: Vec<ShapeCheck>,
    pub shapes_csv: PathBuf,
}

impl FiguresRun {
    pub fn outcome(&self) -> Outcome {
        let mut summary: Vec<String> = self
            .panels
            .iter()
            .map(|p| format!("alpha = {}: {} (hole radius {})", p.name, p.svg.display(), p.hole_radius))
            .collect();
        for s in &self.shapes {
            summary.push(format!(
                "{} alpha = {}: {} = {:.4} in ({}, {})",
                if s.passed() { "PASS" } else { "FAIL" },
                s.panel,
                s.check,
                s.value,
                s.lower,
                s.upper
            ));
        }
        Outcome { ok: self.shapes.iter().all(ShapeCheck::passed), summary }
    }
}

fn file_stem(name: &str) -> String {
    format!("density_alpha_{}", name.replace('/', "_"))
}

fn shape_checks(p: &Panel) -> Vec<ShapeCheck> {
    let mk = |check: &str, value: f64, lower: f64, upper: f64| ShapeCheck {
        alpha: p.alpha,
        panel: p.name,
        check: check.into(),
        value,
        lower,
        upper,
    };
    match p.name {
        "0.6" => vec![mk("f(0.01)/f(1)", p.f_at(0.01) / p.f_at(1.0), 3.0, f64::INFINITY)],
        "0.8" => vec![mk("f(0.01)/f(1)", p.f_at(0.01) / p.f_at(1.0), 0.0, 1.0 / 3.0)],
        _ => vec![mk("f(0.01)/f(0.5)", p.f_at(0.01) / p.f_at(0.5), 0.2, 5.0)],
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Compute, tabulate and draw the three panels into `dir`.
pub fn run(b0: f64, policy: &Policy, dir: &Path) -> Result<FiguresRun, CliError> {
    let mut seqs = Vec::new();
    for (alpha, name) in PANELS {
        seqs.push((weights_for(alpha, b0)?, alpha, name));
    }
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let half = half_grid();
    let mut panels = Vec::new();
    let mut shapes = Vec::new();
    for (seq, alpha, name) in seqs {
        // The density is even, so the negative half reuses the positive estimates.
        let pos = density::estimate(&seq, policy, &half)?;
        let mut estimates: Vec<Estimate> = pos.iter().rev().map(|e| Estimate { x: -e.x, ..*e }).collect();
        estimates.extend(pos.iter().copied());
        let hole = pos.iter().filter(|e| e.converged).map(|e| e.x).fold(f64::INFINITY, f64::min);

        let stem = file_stem(name);
        let csv = dir.join(format!("{stem}.csv"));
        let svg = dir.join(format!("{stem}.svg"));
        let row = |e: &Estimate| {
            let mut r = density::row(e);
            r.push(flag(!e.converged || e.x.abs() < hole).into());
            r
        };
        let split = estimates.len() / 2;
        let origin = vec![num(0.0), String::new(), String::new(), "0".into(), String::new(), String::new(), "0".into(), "1".into()];
        let rows: Vec<Vec<String>> = estimates[..split]
            .iter()
            .map(row)
            .chain(std::iter::once(origin))
            .chain(estimates[split..].iter().map(row))
            .collect();
        let mut sink = std::io::sink();
        write_table(Some(&csv), &mut sink, &HEADER, &rows)?;

        let side = |neg: bool| -> Vec<(f64, f64)> {
            estimates.iter().filter(|e| e.converged && (e.x < 0.0) == neg).map(|e| (e.x, e.f)).collect()
        };
        let plot = PlotSpec {
            title: format!("Spectral density f(x), alpha = {name}"),
            x_label: "x".into(),
            y_label: "f(x)".into(),
            segments: vec![side(true), side(false)],
            path: svg.clone(),
        }
        .cleaned();
        write(&plot.path, &render(&plot))?;

        let panel = Panel { alpha, name, estimates, hole_radius: hole, svg, csv };
        shapes.extend(shape_checks(&panel));
        panels.push(panel);
    }
    let shapes_csv = dir.join("shapes.csv");
    let rows: Vec<Vec<String>> = shapes
        .iter()
        .map(|s| {
            vec![num(s.alpha), s.check.clone(), num(s.value), num(s.lower), num(s.upper), flag(s.passed()).into()]
        })
        .collect();
    let mut sink = std::io::sink();
    write_table(Some(&shapes_csv), &mut sink, &SHAPE_HEADER, &rows)?;
    Ok(FiguresRun { panels, shapes, shapes_csv })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_grid_contains_check_points() {
        let g = half_grid();
        for x in [0.01, 0.5, 1.0, 3.0] {
            assert!(g.contains(&x));
        }
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
