//! Static SVG figures: support chains as stacked segments, and map graphs.

use std::fmt::Write;

use chaintool_core::rational::to_f64;
use chaintool_core::{ExtPoint, PlMap, Rational};

const WIDTH: f64 = 640.0;
const MARGIN: f64 = 48.0;
const ROW: f64 = 26.0;
const PANEL: f64 = 320.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

fn f(r: &Rational) -> f64 {
    to_f64(r)
}

struct Scale {
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Scale {
    fn at(&self, x: f64) -> f64 {
        self.px_lo + (x - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)
    }
}

fn window(gens: &[PlMap]) -> (f64, f64) {
    let mut pts: Vec<f64> = Vec::new();
    for g in gens {
        for iv in g.support().parts() {
            pts.extend(
                [&iv.lo, &iv.hi]
                    .into_iter()
                    .filter_map(ExtPoint::finite)
                    .map(f),
            );
        }
        pts.extend(g.knots().iter().map(|(x, _)| f(x)));
    }
    let lo = pts.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = pts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo.is_finite() && hi > lo {
        let pad = ((hi - lo) * 0.15).max(0.5);
        (lo - pad, hi + pad)
    } else if lo.is_finite() {
        (lo - 1.0, lo + 1.0)
    } else {
        (-1.0, 1.0)
    }
}

/// Supports as stacked segments; with `graphs`, one panel per map below them.
pub fn render(gens: &[PlMap], graphs: bool) -> String {
    let (lo, hi) = window(gens);
    let sx = Scale {
        lo,
        hi,
        px_lo: MARGIN,
        px_hi: WIDTH - MARGIN,
    };
    let chain_height = MARGIN + ROW * gens.len() as f64 + 24.0;
    let height = if graphs {
        chain_height + (PANEL + 24.0) * gens.len() as f64
    } else {
        chain_height
    };
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.0}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();

    // Axis with integer ticks.
    let axis_y = chain_height - 12.0;
    writeln!(
        s,
        r##"<line x1="{:.2}" y1="{axis_y:.2}" x2="{:.2}" y2="{axis_y:.2}" stroke="#888"/>"##,
        sx.px_lo, sx.px_hi
    )
    .unwrap();
    let step = ((hi - lo) / 10.0).ceil().max(1.0);
    let mut t = (lo / step).ceil() * step;
    while t <= hi {
        let x = sx.at(t);
        writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#888"/>"##,
            axis_y - 3.0,
            axis_y + 3.0
        )
        .unwrap();
        writeln!(
            s,
            r##"<text x="{x:.2}" y="{:.2}" text-anchor="middle" fill="#555">{t}</text>"##,
            axis_y + 15.0
        )
        .unwrap();
        t += step;
    }

    for (i, g) in gens.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let y = MARGIN + ROW * i as f64;
        writeln!(
            s,
            r#"<text x="8" y="{:.2}" fill="{color}">f{i}</text>"#,
            y + 4.0
        )
        .unwrap();
        for iv in g.support().parts() {
            let (x1, open_left) = match &iv.lo {
                ExtPoint::Finite(r) => (sx.at(f(r)), false),
                _ => (sx.px_lo - 16.0, true),
            };
            let (x2, open_right) = match &iv.hi {
                ExtPoint::Finite(r) => (sx.at(f(r)), false),
                _ => (sx.px_hi + 16.0, true),
            };
            let cap = if open_left || open_right {
                r#" stroke-linecap="round""#
            } else {
                ""
            };
            writeln!(s, r#"<line x1="{x1:.2}" y1="{y:.2}" x2="{x2:.2}" y2="{y:.2}" stroke="{color}" stroke-width="4"{cap}/>"#).unwrap();
            for (x, open) in [(x1, open_left), (x2, open_right)] {
                if !open {
                    writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="white" stroke="{color}" stroke-width="2"/>"#).unwrap();
                }
            }
        }
    }

    if graphs {
        for (i, g) in gens.iter().enumerate() {
            let top = chain_height + 12.0 + (PANEL + 24.0) * i as f64;
            graph_panel(&mut s, g, i, top, lo, hi);
        }
    }
    s.push_str("</svg>\n");
    s
}

fn graph_panel(s: &mut String, g: &PlMap, i: usize, top: f64, lo: f64, hi: f64) {
    let color = COLORS[i % COLORS.len()];
    let left = (WIDTH - PANEL) / 2.0;
    let images: Vec<f64> = [lo, hi]
        .iter()
        .map(|x| f(&g.eval(&rational_near(*x))))
        .collect();
    let ylo = lo.min(images[0]);
    let yhi = hi.max(images[1]);
    let sx = Scale {
        lo,
        hi,
        px_lo: left,
        px_hi: left + PANEL,
    };
    let sy = Scale {
        lo: ylo,
        hi: yhi,
        px_lo: top + PANEL,
        px_hi: top,
    };
    writeln!(s, r##"<rect x="{left:.2}" y="{top:.2}" width="{PANEL:.0}" height="{PANEL:.0}" fill="none" stroke="#ccc"/>"##).unwrap();
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" fill="{color}">graph of f{i}</text>"#,
        left,
        top - 4.0
    )
    .unwrap();
    let d0 = lo.max(ylo);
    let d1 = hi.min(yhi);
    writeln!(
        s,
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#aaa" stroke-dasharray="4 3"/>"##,
        sx.at(d0), sy.at(d0), sx.at(d1), sy.at(d1)
    )
    .unwrap();
    let mut pts: Vec<(f64, f64)> = vec![(lo, images[0])];
    let knots: Vec<(f64, f64)> = g
        .knots()
        .iter()
        .map(|(x, y)| (f(x), f(y)))
        .filter(|(x, _)| *x > lo && *x < hi)
        .collect();
    pts.extend(&knots);
    pts.push((hi, images[1]));
    let path: Vec<String> = pts
        .iter()
        .map(|(x, y)| format!("{:.2},{:.2}", sx.at(*x), sy.at(*y)))
        .collect();
    writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
        path.join(" ")
    )
    .unwrap();
    for (x, y) in knots {
        writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
            sx.at(x),
            sy.at(y)
        )
        .unwrap();
    }
}

fn rational_near(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_default()
}
