//! Deterministic SVG output for divides and link diagrams.

use std::fmt::Write as _;

use crate::diagram::Diagram;
use crate::divide::{curves_f64, Curve, CurveKind, DivideWithCusps, Domain, Role};
use crate::rational::to_f64;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum RenderError {
    #[error("style field {0} must be positive")]
    BadStyle(&'static str),
    #[error("diagram has no planar data to draw")]
    NoPlanar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderStyle {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    pub stroke: f64,
    pub dotted_stroke: f64,
    pub dot_radius: f64,
    pub cusp_radius: f64,
    /// Length of the break left in an under strand.
    pub gap: f64,
    pub shade_strips: bool,
    /// Show only the part of a rectangle domain the curves use.
    pub crop: bool,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            width: 800.0,
            height: 500.0,
            margin: 30.0,
            stroke: 1.2,
            dotted_stroke: 2.0,
            dot_radius: 5.0,
            cusp_radius: 2.5,
            gap: 8.0,
            shade_strips: true,
            crop: true,
        }
    }
}

impl RenderStyle {
    pub fn check(&self) -> Result<(), RenderError> {
        let fields = [
            ("width", self.width),
            ("height", self.height),
            ("stroke", self.stroke),
            ("dotted_stroke", self.dotted_stroke),
            ("dot_radius", self.dot_radius),
            ("cusp_radius", self.cusp_radius),
            ("gap", self.gap),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(RenderError::BadStyle(name));
            }
        }
        if !(self.margin >= 0.0 && 2.0 * self.margin < self.width.min(self.height)) {
            return Err(RenderError::BadStyle("margin"));
        }
        Ok(())
    }
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2", "#bcbd22", "#7f7f7f",
];

/// Colour for a component, fixed by its label alone.
pub fn label_color(label: &str) -> &'static str {
    if label.starts_with("dotted:") {
        return "#000000";
    }
    // FNV-1a
    let mut h: u32 = 0x811c_9dc5;
    for b in label.trim_end_matches('\'').bytes() {
        h ^= b as u32;
        h = h.wrapping_mul(0x0100_0193);
    }
    PALETTE[h as usize % PALETTE.len()]
}

/// Maps a box of the plane onto the page, y up.
struct Frame {
    x0: f64,
    y1: f64,
    sx: f64,
    sy: f64,
    margin: f64,
}

impl Frame {
    fn new(bbox: [f64; 4], style: &RenderStyle, uniform: bool) -> Self {
        let [x0, y0, x1, y1] = bbox;
        let w = (x1 - x0).max(1e-12);
        let h = (y1 - y0).max(1e-12);
        let mut sx = (style.width - 2.0 * style.margin) / w;
        let mut sy = (style.height - 2.0 * style.margin) / h;
        if uniform {
            sx = sx.min(sy);
            sy = sx;
        }
        Frame {
            x0,
            y1,
            sx,
            sy,
            margin: style.margin,
        }
    }

    fn map(&self, p: [f64; 2]) -> [f64; 2] {
        [self.margin + (p[0] - self.x0) * self.sx, self.margin + (self.y1 - p[1]) * self.sy]
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

fn path_data(pts: &[[f64; 2]], closed: bool) -> String {
    let mut d = String::new();
    for (i, p) in pts.iter().enumerate() {
        let _ = write!(d, "{}{} {} ", if i == 0 { "M" } else { "L" }, num(p[0]), num(p[1]));
    }
    if closed {
        d.push('Z');
    }
    d.trim_end().to_string()
}

fn header(style: &RenderStyle) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<rect width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>\n",
        w = num(style.width),
        h = num(style.height)
    )
}

fn curve_label(c: &Curve, idx: usize) -> String {
    c.role.label(idx)
}

/// SVG picture of a divide. Dotted segments carry a dot near their top end,
/// cusps are ringed and every attaching curve gets the label 0.
pub fn render_divide_svg(d: &DivideWithCusps, style: &RenderStyle) -> Result<String, RenderError> {
    style.check()?;
    let (bbox, uniform) = match &d.domain {
        Domain::Rect(r) => {
            let r = to_f64(r);
            let (mut lo, mut hi) = (-r, r);
            if style.crop {
                let xs = curves_f64(d).into_iter().flatten().map(|p| p[0]);
                let (a, b) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
                if a < b {
                    let pad = 0.25 * (b - a);
                    (lo, hi) = ((a - pad).max(-r), (b + pad).min(r));
                }
            }
            ([lo, -1.0, hi, 1.0], false)
        }
        Domain::Disk => ([-1.0, -1.0, 1.0, 1.0], true),
    };
    let fr = Frame::new(bbox, style, uniform);
    let mut out = header(style);

    match &d.domain {
        Domain::Rect(_) => {
            let a = fr.map([bbox[0], bbox[3]]);
            let b = fr.map([bbox[2], bbox[1]]);
            let _ = writeln!(
                out,
                "<rect class=\"domain\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"/>",
                num(a[0]),
                num(a[1]),
                num(b[0] - a[0]),
                num(b[1] - a[1])
            );
        }
        Domain::Disk => {
            let c = fr.map([0.0, 0.0]);
            let _ = writeln!(
                out,
                "<circle class=\"domain\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"/>",
                num(c[0]),
                num(c[1]),
                num(fr.sx)
            );
        }
    }

    if style.shade_strips {
        for c in &d.curves {
            if let Some(w) = &c.strip {
                let top = to_f64(&(&w.level + &w.half_width));
                let bottom = to_f64(&(&w.level - &w.half_width));
                let a = fr.map([bbox[0], top]);
                let b = fr.map([bbox[2], bottom]);
                let _ = writeln!(
                    out,
                    "<rect class=\"strip\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#f0f0f0\"/>",
                    num(a[0]),
                    num(a[1]),
                    num(b[0] - a[0]),
                    num(b[1] - a[1])
                );
            }
        }
    }

    for (idx, c) in d.curves.iter().enumerate() {
        let label = curve_label(c, idx);
        let pts: Vec<[f64; 2]> = c.to_f64().into_iter().map(|p| fr.map(p)).collect();
        let color = label_color(&label);
        let width = if matches!(c.role, Role::Dotted(_)) { style.dotted_stroke } else { style.stroke };
        let _ = writeln!(
            out,
            "<path class=\"curve\" data-label=\"{label}\" d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{}\"/>",
            path_data(&pts, c.kind == CurveKind::Closed),
            num(width)
        );
        match c.role {
            Role::Dotted(_) if !pts.is_empty() => {
                // the dot sits a tenth of the way down from the upper end
                let (hi, lo) = if pts[0][1] <= pts[pts.len() - 1][1] {
                    (pts[0], pts[pts.len() - 1])
                } else {
                    (pts[pts.len() - 1], pts[0])
                };
                let at = [hi[0] + (lo[0] - hi[0]) * 0.1, hi[1] + (lo[1] - hi[1]) * 0.1];
                let _ = writeln!(
                    out,
                    "<circle class=\"dot\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#000000\"/>",
                    num(at[0]),
                    num(at[1]),
                    num(style.dot_radius)
                );
            }
            Role::Attaching(_) => {
                let right = pts.iter().copied().fold([f64::MIN, 0.0], |m, p| if p[0] > m[0] { p } else { m });
                let _ = writeln!(
                    out,
                    "<text class=\"framing\" x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{color}\">0</text>",
                    num(right[0] + 4.0),
                    num(right[1] + 4.0)
                );
            }
            _ => {}
        }
        for &v in &c.cusps {
            let p = pts[v];
            let _ = writeln!(
                out,
                "<circle class=\"cusp\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"0.8\"/>",
                num(p[0]),
                num(p[1]),
                num(style.cusp_radius)
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Pieces of a closed polyline left after cutting out `[s - g, s + g]`
/// around each arclength position `s`.
fn cut_closed(pts: &[[f64; 2]], cuts: &[f64], g: f64) -> Vec<Vec<[f64; 2]>> {
    let n = pts.len();
    if n < 2 {
        return vec![pts.to_vec()];
    }
    let mut acc = vec![0.0];
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        acc.push(acc[i] + (b[0] - a[0]).hypot(b[1] - a[1]));
    }
    let total = acc[n];
    if cuts.is_empty() || total <= 0.0 {
        let mut v = pts.to_vec();
        v.push(pts[0]);
        return vec![v];
    }
    let at = |s: f64| -> [f64; 2] {
        let s = s.rem_euclid(total);
        let i = acc.partition_point(|&x| x <= s).saturating_sub(1).min(n - 1);
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        let len = acc[i + 1] - acc[i];
        let t = if len > 0.0 { (s - acc[i]) / len } else { 0.0 };
        [a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t]
    };
    let mut cuts: Vec<f64> = cuts.to_vec();
    cuts.sort_by(f64::total_cmp);
    let g = g.min(total / (4.0 * cuts.len() as f64));
    let mut pieces = Vec::new();
    for k in 0..cuts.len() {
        let start = cuts[k] + g;
        let mut end = if k + 1 < cuts.len() { cuts[k + 1] - g } else { cuts[0] + total - g };
        if end <= start {
            continue;
        }
        if end > start + total {
            end = start + total;
        }
        let mut piece = vec![at(start)];
        // vertices strictly inside (start, end), walking around once or twice
        for lap in 0..2 {
            for i in 0..n {
                let s = acc[i] + lap as f64 * total;
                if s > start && s < end {
                    piece.push(pts[i % n]);
                }
            }
        }
        piece.push(at(end));
        pieces.push(piece);
    }
    pieces
}

/// Arclength position of the point of the closed polyline nearest to `p`.
fn arclength_of(pts: &[[f64; 2]], p: [f64; 2]) -> f64 {
    let n = pts.len();
    let mut best = (f64::INFINITY, 0.0);
    let mut acc = 0.0;
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        let d = [b[0] - a[0], b[1] - a[1]];
        let len2 = d[0] * d[0] + d[1] * d[1];
        let t = if len2 > 0.0 {
            (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let q = [a[0] + d[0] * t, a[1] + d[1] * t];
        let dist = (q[0] - p[0]).hypot(q[1] - p[1]);
        if dist < best.0 {
            best = (dist, acc + t * len2.sqrt());
        }
        acc += len2.sqrt();
    }
    best.1
}

/// SVG picture of a projected diagram, with breaks in the under strands.
pub fn render_diagram_svg(dg: &Diagram, style: &RenderStyle) -> Result<String, RenderError> {
    style.check()?;
    let planar = dg.planar.as_ref().ok_or(RenderError::NoPlanar)?;
    let mut bbox = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for p in planar.curves.iter().flatten() {
        bbox[0] = bbox[0].min(p[0]);
        bbox[1] = bbox[1].min(p[1]);
        bbox[2] = bbox[2].max(p[0]);
        bbox[3] = bbox[3].max(p[1]);
    }
    if !bbox[0].is_finite() {
        bbox = [-1.0, -1.0, 1.0, 1.0];
    }
    let fr = Frame::new(bbox, style, true);
    let mut out = header(style);
    for (k, curve) in planar.curves.iter().enumerate() {
        let label = &dg.labels[k];
        let pts: Vec<[f64; 2]> = curve.iter().map(|&p| fr.map(p)).collect();
        let cuts: Vec<f64> = planar
            .crossings
            .iter()
            .filter(|c| c.under == k)
            .map(|c| arclength_of(&pts, fr.map(c.at)))
            .collect();
        let mut d = String::new();
        for piece in cut_closed(&pts, &cuts, style.gap / 2.0) {
            if !d.is_empty() {
                d.push(' ');
            }
            d.push_str(&path_data(&piece, false));
        }
        let _ = writeln!(
            out,
            "<path class=\"component\" data-label=\"{label}\" d=\"{d}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\" stroke-linejoin=\"round\"/>",
            label_color(label),
            num(style.stroke)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutting_leaves_one_piece_per_gap() {
        let square = [[0.0, 0.0], [10.0, 0.0], [10.0, 10.0], [0.0, 10.0]];
        assert_eq!(cut_closed(&square, &[], 1.0).len(), 1);
        let pieces = cut_closed(&square, &[5.0, 25.0], 1.0);
        assert_eq!(pieces.len(), 2);
        assert_eq!(pieces[0].first(), Some(&[6.0, 0.0]));
        assert_eq!(pieces[1].len(), 4);
        assert_eq!(pieces[0].last(), Some(&[6.0, 10.0]));
        // the piece after the last gap wraps past the start
        assert_eq!(pieces[1].last(), Some(&[4.0, 0.0]));
        assert!((arclength_of(&square, [10.0, 5.0]) - 15.0).abs() < 1e-12);
    }

    #[test]
    fn colors_ignore_the_companion_mark() {
        assert_eq!(label_color("attaching:2"), label_color("attaching:2'"));
        assert_eq!(label_color("dotted:1"), "#000000");
    }

    #[test]
    fn bad_style_is_rejected() {
        let style = RenderStyle { gap: 0.0, ..RenderStyle::default() };
        assert_eq!(style.check(), Err(RenderError::BadStyle("gap")));
    }
}
