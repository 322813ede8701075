//! SVG rendering of an arrangement.
//!
//! Line `i` is drawn through the centre at direction `θ_i / 2` (the particle
//! angle lives on the double cover), with stroke width proportional to its
//! multiplicity. An inset circle shows the particles at the full angles `θ_i`,
//! labelled by charge. Output is deterministic: coordinates are printed with
//! fixed precision and nothing depends on time or randomness.

use std::fmt::Write;

use crate::arrangement::Arrangement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Theme {
    #[default]
    Light,
    Dark,
}

impl std::str::FromStr for Theme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "light" => Ok(Theme::Light),
            "dark" => Ok(Theme::Dark),
            other => Err(format!("unknown style '{other}' (expected light or dark)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotStyle {
    pub size: f64,
    /// Stroke width of a multiplicity-one line.
    pub unit_stroke: f64,
    pub theme: Theme,
}

impl Default for PlotStyle {
    fn default() -> Self {
        Self {
            size: 480.0,
            unit_stroke: 1.5,
            theme: Theme::Light,
        }
    }
}

struct Palette {
    background: &'static str,
    line: &'static str,
    accent: &'static str,
    text: &'static str,
}

fn palette(theme: Theme) -> Palette {
    match theme {
        Theme::Light => Palette {
            background: "#ffffff",
            line: "#1f3b73",
            accent: "#c0392b",
            text: "#222222",
        },
        Theme::Dark => Palette {
            background: "#111418",
            line: "#8ab4f8",
            accent: "#f28b82",
            text: "#e8eaed",
        },
    }
}

pub fn render_svg(a: &Arrangement, style: &PlotStyle) -> String {
    let s = style.size;
    let p = palette(style.theme);
    let (cx, cy) = (0.5 * s, 0.5 * s);
    let reach = 0.42 * s;
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{s:.0}" height="{s:.0}" viewBox="0 0 {s:.0} {s:.0}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="{}"/>"#, p.background);
    let _ = writeln!(out, r#"<g id="lines" stroke="{}" stroke-linecap="round">"#, p.line);
    let mults = a.multiplicities().as_slice();
    for (i, (&theta, &m)) in a.thetas().iter().zip(mults).enumerate() {
        let (sin, cos) = (0.5 * theta).sin_cos();
        let (dx, dy) = (reach * cos, -reach * sin);
        let _ = writeln!(
            out,
            r#"<line id="line-{i}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke-width="{:.3}"/>"#,
            cx - dx,
            cy - dy,
            cx + dx,
            cy + dy,
            style.unit_stroke * f64::from(m)
        );
    }
    let _ = writeln!(out, "</g>");

    let r = 0.1 * s;
    let (ix, iy) = (s - 0.14 * s, 0.14 * s);
    let _ = writeln!(out, r#"<g id="particles" font-family="sans-serif" font-size="{:.1}" fill="{}">"#, 0.025 * s, p.text);
    let _ = writeln!(
        out,
        r#"<circle cx="{ix:.3}" cy="{iy:.3}" r="{r:.3}" fill="none" stroke="{}" stroke-width="1"/>"#,
        p.line
    );
    for (i, (&theta, &q)) in a.thetas().iter().zip(a.ensemble().charges()).enumerate() {
        let (sin, cos) = theta.sin_cos();
        let (px, py) = (ix + r * cos, iy - r * sin);
        let (lx, ly) = (ix + 1.35 * r * cos, iy - 1.35 * r * sin);
        let _ = writeln!(
            out,
            r#"<circle id="particle-{i}" cx="{px:.3}" cy="{py:.3}" r="{:.3}" fill="{}"/>"#,
            0.012 * s,
            p.accent
        );
        let _ = writeln!(
            out,
            r#"<text x="{lx:.3}" y="{ly:.3}" text-anchor="middle" dominant-baseline="middle">{q}</text>"#
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    out
}
