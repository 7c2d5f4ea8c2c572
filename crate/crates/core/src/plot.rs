//! Minimal SVG line-plot writer for the figure presets. No styling knobs
//! beyond what the presets need: linear/log axes, a legend, an optional
//! inset panel.

use std::fmt::Write as _;

pub(crate) struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

pub(crate) struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
    pub inset: Option<Box<Plot>>,
}

const COLORS: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];
const W: f64 = 640.0;
const H: f64 = 440.0;
const ML: f64 = 62.0; // margins
const MR: f64 = 16.0;
const MT: f64 = 34.0;
const MB: f64 = 46.0;

fn finite_points(s: &Series, log_x: bool, log_y: bool) -> Vec<(f64, f64)> {
    s.points
        .iter()
        .filter(|(x, y)| {
            x.is_finite() && y.is_finite() && (!log_x || *x > 0.0) && (!log_y || *y > 0.0)
        })
        .map(|&(x, y)| {
            (
                if log_x { x.log10() } else { x },
                if log_y { y.log10() } else { y },
            )
        })
        .collect()
}

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    if !(hi > lo) {
        return vec![lo];
    }
    let span = hi - lo;
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let step = mag
        * if norm < 1.5 {
            1.0
        } else if norm < 3.5 {
            2.0
        } else if norm < 7.5 {
            5.0
        } else {
            10.0
        };
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-12 * span {
        out.push(t);
        t += step;
    }
    out
}

fn fmt_tick(v: f64, log: bool) -> String {
    if log {
        // v is an exponent
        if (v - v.round()).abs() < 1e-9 {
            return format!("1e{}", v.round() as i64);
        }
        return format!("{:.1}", 10f64.powf(v));
    }
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-3..1e4).contains(&a) {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{v:.1e}")
    }
}

impl Plot {
    fn render_into(
        &self,
        svg: &mut String,
        x0: f64,
        y0: f64,
        w: f64,
        h: f64,
        with_labels: bool,
    ) {
        let data: Vec<Vec<(f64, f64)>> = self
            .series
            .iter()
            .map(|s| finite_points(s, self.log_x, self.log_y))
            .collect();
        let (mut xlo, mut xhi) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut ylo, mut yhi) = (f64::INFINITY, f64::NEG_INFINITY);
        for pts in &data {
            for &(x, y) in pts {
                xlo = xlo.min(x);
                xhi = xhi.max(x);
                ylo = ylo.min(y);
                yhi = yhi.max(y);
            }
        }
        if !xlo.is_finite() {
            return;
        }
        if xhi == xlo {
            xhi = xlo + 1.0;
        }
        if yhi == ylo {
            yhi = ylo + 1.0;
        }
        let pad = 0.04 * (yhi - ylo);
        ylo -= pad;
        yhi += pad;
        let (ml, mr, mt, mb) = if with_labels {
            (ML, MR, MT, MB)
        } else {
            (34.0, 6.0, 8.0, 22.0)
        };
        let (px, py, pw, ph) = (x0 + ml, y0 + mt, w - ml - mr, h - mt - mb);
        let sx = move |x: f64| px + (x - xlo) / (xhi - xlo) * pw;
        let sy = move |y: f64| py + ph - (y - ylo) / (yhi - ylo) * ph;

        let _ = write!(
            svg,
            r#"<rect x="{px:.1}" y="{py:.1}" width="{pw:.1}" height="{ph:.1}" fill="white" stroke="black" stroke-width="1"/>"#
        );
        let fs = if with_labels { 12.0 } else { 9.0 };
        for t in nice_ticks(xlo, xhi) {
            let x = sx(t);
            let _ = write!(
                svg,
                r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/><text x="{x:.1}" y="{:.1}" font-size="{fs}" text-anchor="middle">{}</text>"#,
                py + ph,
                py + ph + 4.0,
                py + ph + 4.0 + fs,
                fmt_tick(t, self.log_x)
            );
        }
        for t in nice_ticks(ylo, yhi) {
            let y = sy(t);
            let _ = write!(
                svg,
                r#"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" font-size="{fs}" text-anchor="end">{}</text>"#,
                px - 4.0,
                px,
                px - 6.0,
                y + 0.35 * fs,
                fmt_tick(t, self.log_y)
            );
        }
        for (k, pts) in data.iter().enumerate() {
            if pts.is_empty() {
                continue;
            }
            let color = COLORS[k % COLORS.len()];
            let mut path = String::new();
            for (i, &(x, y)) in pts.iter().enumerate() {
                let _ = write!(
                    path,
                    "{}{:.2},{:.2} ",
                    if i == 0 { "M" } else { "L" },
                    sx(x),
                    sy(y)
                );
            }
            let _ = write!(
                svg,
                r#"<path d="{path}" fill="none" stroke="{color}" stroke-width="1.6"/>"#
            );
        }
        if with_labels {
            let _ = write!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" font-size="14" text-anchor="middle" font-weight="bold">{}</text>"#,
                px + pw / 2.0,
                y0 + 20.0,
                xml_escape(&self.title)
            );
            let _ = write!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" font-size="13" text-anchor="middle">{}</text>"#,
                px + pw / 2.0,
                py + ph + 36.0,
                xml_escape(&self.x_label)
            );
            let _ = write!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" font-size="13" text-anchor="middle" transform="rotate(-90 {:.1} {:.1})">{}</text>"#,
                px - 46.0,
                py + ph / 2.0,
                px - 46.0,
                py + ph / 2.0,
                xml_escape(&self.y_label)
            );
            for (k, s) in self.series.iter().enumerate() {
                let color = COLORS[k % COLORS.len()];
                let ly = py + 14.0 + 16.0 * k as f64;
                let _ = write!(
                    svg,
                    r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}" font-size="11">{}</text>"#,
                    px + pw - 150.0,
                    px + pw - 126.0,
                    px + pw - 120.0,
                    ly + 3.5,
                    xml_escape(&s.name)
                );
            }
        }
        if let Some(inset) = &self.inset {
            inset.render_into(svg, px + 0.08 * pw, py + ph - 0.52 * ph - 8.0, 0.45 * pw, 0.52 * ph, false);
        }
    }

    pub(crate) fn to_svg(&self) -> String {
        let mut svg = format!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}"><rect width="{W}" height="{H}" fill="white"/>"#
        );
        self.render_into(&mut svg, 0.0, 0.0, W, H, true);
        svg.push_str("</svg>");
        svg
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
