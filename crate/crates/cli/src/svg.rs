//! Standalone SVG scatter of neuron positions with active sites highlighted.

use std::fmt::Write;

use active_sites::sites::ActiveSiteMap;
use active_sites::training::ProximityModel;

use crate::error::{CliError, CliResult};

const PLOT: f64 = 360.0;
const MARGIN: f64 = 20.0;
const LEGEND_WIDTH: f64 = 150.0;
const RADIUS: f64 = 6.0;
const RING_STEP: f64 = 3.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

fn color(memory: usize) -> &'static str {
    PALETTE[memory % PALETTE.len()]
}

/// Renders the site map. The output depends only on its inputs.
pub fn render(prox: &ProximityModel, map: &ActiveSiteMap) -> CliResult<String> {
    if prox.dims() != 2 {
        return Err(CliError::UnsupportedProjection { dims: prox.dims() });
    }
    let n = prox.n();
    // Memories owning each neuron, in memory order.
    let mut owners: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (memory, entry) in map.entries().iter().enumerate() {
        for site in &entry.sites {
            let slot = owners.get_mut(site.neuron).ok_or_else(|| {
                active_sites::Error::Validation(format!(
                    "site {} of memory {memory} is outside the {n}-neuron network",
                    site.neuron
                ))
            })?;
            slot.push(memory);
        }
    }

    let pos = prox.positions();
    let (min_x, max_x) = extent(pos.iter().map(|p| p[0]));
    let (min_y, max_y) = extent(pos.iter().map(|p| p[1]));
    let span = (max_x - min_x).max(max_y - min_y);
    let scale = if span > 0.0 { PLOT / span } else { 0.0 };
    let project = |p: &[f64; 3]| {
        let x = MARGIN + (p[0] - min_x) * scale + (PLOT - (max_x - min_x) * scale) / 2.0;
        // SVG y grows downward.
        let y = MARGIN + PLOT - ((p[1] - min_y) * scale + (PLOT - (max_y - min_y) * scale) / 2.0);
        (x, y)
    };

    let width = PLOT + 2.0 * MARGIN + LEGEND_WIDTH;
    let height = (PLOT + 2.0 * MARGIN).max(MARGIN * 2.0 + 18.0 * map.m() as f64);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#
    );
    for (i, p) in pos.iter().enumerate() {
        let (x, y) = project(p);
        let fill = owners[i].first().map_or("white", |&m| color(m));
        let _ = writeln!(
            out,
            r#"<circle class="neuron" data-index="{i}" cx="{x:.2}" cy="{y:.2}" r="{RADIUS}" fill="{fill}" stroke="black" stroke-width="1"/>"#
        );
        for (k, &m) in owners[i].iter().enumerate().skip(1) {
            let r = RADIUS + RING_STEP * k as f64;
            let _ = writeln!(
                out,
                r#"<circle class="ring" data-index="{i}" cx="{x:.2}" cy="{y:.2}" r="{r}" fill="none" stroke="{}" stroke-width="2"/>"#,
                color(m)
            );
        }
    }
    let legend_x = PLOT + 2.0 * MARGIN;
    for (memory, entry) in map.entries().iter().enumerate() {
        let y = MARGIN + 18.0 * memory as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{legend_x}" y="{y}" width="12" height="12" fill="{}"/>"#,
            color(memory)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">level {} : memory {memory}</text>"#,
            legend_x + 18.0,
            y + 10.0,
            entry.level
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}
