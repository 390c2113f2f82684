//! CSV and SVG writers with stable number formatting.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

/// Nine significant digits, shortest form, `-0` written as `0`.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim(&format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// One labelled point of a geometric output.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub t: f64,
    pub x: Vec<f64>,
    pub q: Vec<f64>,
    pub label: &'static str,
}

pub fn csv_string(n: usize, k: usize, rows: &[Row]) -> String {
    let mut head: Vec<String> = vec!["t".into()];
    head.extend((1..=n).map(|i| format!("x{i}")));
    head.extend((1..=k).map(|i| format!("q{i}")));
    head.push("label".into());
    let mut out = head.join(",");
    out.push('\n');
    for r in rows {
        let mut cells = vec![fmt_num(r.t)];
        cells.extend(r.x.iter().map(|v| fmt_num(*v)));
        cells.extend(r.q.iter().map(|v| fmt_num(*v)));
        cells.push(r.label.into());
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// A table with an arbitrary header, for outputs outside the front format.
pub fn table_string(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.iter().map(|v| fmt_num(*v)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

pub fn write(path: &Path, text: &str) -> io::Result<()> {
    std::fs::write(path, text)
}

/// Curves and isolated points drawn with one stroke class.
#[derive(Clone, Debug, Default)]
pub struct Layer {
    pub class: &'static str,
    pub curves: Vec<Vec<[f64; 2]>>,
    pub points: Vec<[f64; 2]>,
}

impl Layer {
    pub fn new(class: &'static str) -> Self {
        Self {
            class,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Viewport {
    pub fn parse(text: &str) -> Option<Self> {
        let v: Vec<f64> = text.split(':').map(|s| s.trim().parse().ok()).collect::<Option<_>>()?;
        match v[..] {
            [xmin, xmax, ymin, ymax] if xmax > xmin && ymax > ymin => Some(Self { xmin, xmax, ymin, ymax }),
            _ => None,
        }
    }

    fn fit(layers: &[Layer]) -> Self {
        let mut b = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
        let all = layers
            .iter()
            .flat_map(|l| l.curves.iter().flatten().chain(l.points.iter()));
        for p in all.filter(|p| p[0].is_finite() && p[1].is_finite()) {
            b = [b[0].min(p[0]), b[1].max(p[0]), b[2].min(p[1]), b[3].max(p[1])];
        }
        if !b[0].is_finite() {
            return Self { xmin: -1.0, xmax: 1.0, ymin: -1.0, ymax: 1.0 };
        }
        let pad = 0.05 * (b[1] - b[0]).max(b[3] - b[2]).max(1e-9);
        Self {
            xmin: b[0] - pad,
            xmax: b[1] + pad,
            ymin: b[2] - pad,
            ymax: b[3] + pad,
        }
    }
}

const WIDTH: f64 = 800.0;

const STYLE: &str = "polyline{fill:none;stroke-linejoin:round}\
.front{stroke:#1f4e9a;stroke-width:1}\
.caustic{stroke:#c0392b;stroke-width:2.5}\
.maxwell{stroke:#2e8b57;fill:#2e8b57;stroke-width:2.5}\
.delta{stroke:#8e44ad;fill:#8e44ad;stroke-width:2.5}";

/// SVG 1.1 with the plane's `y` axis pointing up.
pub fn svg_string(layers: &[Layer], viewport: Option<Viewport>) -> String {
    let v = viewport.unwrap_or_else(|| Viewport::fit(layers));
    let scale = WIDTH / (v.xmax - v.xmin);
    let height = ((v.ymax - v.ymin) * scale).round().max(1.0);
    let px = |p: &[f64; 2]| {
        format!(
            "{},{}",
            fmt_num(((p[0] - v.xmin) * scale * 100.0).round() / 100.0),
            fmt_num(((v.ymax - p[1]) * scale * 100.0).round() / 100.0)
        )
    };
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        WIDTH,
        height,
        WIDTH,
        height
    );
    let _ = writeln!(s, "<style>{STYLE}</style>");
    for layer in layers {
        for c in layer.curves.iter().filter(|c| !c.is_empty()) {
            let pts: Vec<String> = c.iter().map(px).collect();
            let _ = writeln!(s, "<polyline class=\"{}\" points=\"{}\"/>", layer.class, pts.join(" "));
        }
        for p in &layer.points {
            let xy = px(p);
            let (x, y) = xy.split_once(',').expect("pair");
            let _ = writeln!(s, "<circle class=\"{}\" cx=\"{x}\" cy=\"{y}\" r=\"1.5\"/>", layer.class);
        }
    }
    s.push_str("</svg>\n");
    s
}
