//! Static SVG charts: axes, bars and polylines, nothing more.

use std::fmt::Write;

use crate::separability::theoretical_p_alpha;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;

/// A single chart with linear x and linear or log10 y.
#[derive(Debug, Clone)]
pub struct Chart {
    title: String,
    x_label: String,
    y_label: String,
    x_range: (f64, f64),
    y_range: (f64, f64),
    log_y: bool,
    body: String,
}

impl Chart {
    pub fn new(title: &str, x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        Self {
            title: title.to_string(),
            x_label: String::new(),
            y_label: String::new(),
            x_range,
            y_range,
            log_y: false,
            body: String::new(),
        }
    }

    pub fn labels(mut self, x: &str, y: &str) -> Self {
        self.x_label = x.to_string();
        self.y_label = y.to_string();
        self
    }

    /// Log10 y axis; `y_range` must be positive.
    pub fn log_y(mut self) -> Self {
        self.log_y = true;
        self
    }

    fn ty(&self, y: f64) -> f64 {
        if self.log_y {
            y.log10()
        } else {
            y
        }
    }

    fn px(&self, x: f64) -> f64 {
        let (lo, hi) = self.x_range;
        MARGIN_LEFT + (x - lo) / (hi - lo) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        let (lo, hi) = (self.ty(self.y_range.0), self.ty(self.y_range.1));
        let t = ((self.ty(y) - lo) / (hi - lo)).clamp(0.0, 1.0);
        HEIGHT - MARGIN_BOTTOM - t * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }

    /// Vertical bar from the x-axis to `height` over `[x0, x1]`.
    pub fn bar(&mut self, x0: f64, x1: f64, height: f64, fill: &str) {
        let (a, b) = (self.px(x0), self.px(x1));
        let top = self.py(height);
        let base = self.py(self.y_range.0);
        let _ = writeln!(
            self.body,
            r#"<rect x="{a:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="{fill}" stroke="white" stroke-width="0.5"/>"#,
            (b - a).max(0.0),
            (base - top).max(0.0)
        );
    }

    /// Points outside a log axis (`y <= 0`) are skipped.
    pub fn polyline(&mut self, pts: &[(f64, f64)], stroke: &str, width: f64) {
        let coords: Vec<String> = pts
            .iter()
            .filter(|(_, y)| !self.log_y || *y > 0.0)
            .map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect();
        if coords.len() < 2 {
            return;
        }
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#,
            coords.join(" ")
        );
    }

    pub fn markers(&mut self, pts: &[(f64, f64)], fill: &str) {
        for &(x, y) in pts {
            if self.log_y && y <= 0.0 {
                continue;
            }
            let _ = writeln!(
                self.body,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{fill}"/>"#,
                self.px(x),
                self.py(y)
            );
        }
    }

    /// Text anchored at data coordinates.
    pub fn label(&mut self, x: f64, y: f64, text: &str, fill: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{:.2}" y="{:.2}" font-size="10" fill="{fill}">{}</text>"#,
            self.px(x) + 3.0,
            self.py(y) - 3.0,
            escape(text)
        );
    }

    fn ticks(&self) -> (Vec<f64>, Vec<f64>) {
        let (x0, x1) = self.x_range;
        let xs = (0..=5).map(|i| x0 + (x1 - x0) * f64::from(i) / 5.0).collect();
        let ys = if self.log_y {
            let lo = self.y_range.0.log10().floor() as i32;
            let hi = self.y_range.1.log10().ceil() as i32;
            let step = ((hi - lo) / 6).max(1);
            (lo..=hi).step_by(step as usize).map(|e| 10f64.powi(e)).collect()
        } else {
            let (y0, y1) = self.y_range;
            (0..=5).map(|i| y0 + (y1 - y0) * f64::from(i) / 5.0).collect()
        };
        (xs, ys)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let (left, right) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
        let (top, bottom) = (MARGIN_TOP, HEIGHT - MARGIN_BOTTOM);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="24" font-size="14" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let (xs, ys) = self.ticks();
        for x in xs {
            let p = self.px(x);
            let _ = writeln!(
                s,
                r#"<line x1="{p:.2}" y1="{bottom}" x2="{p:.2}" y2="{:.1}" stroke="black"/><text x="{p:.2}" y="{:.1}" font-size="10" text-anchor="middle">{}</text>"#,
                bottom + 4.0,
                bottom + 16.0,
                tick_text(x)
            );
        }
        for y in ys {
            let p = self.py(y);
            let _ = writeln!(
                s,
                r##"<line x1="{left}" y1="{p:.2}" x2="{right}" y2="{p:.2}" stroke="#e0e0e0"/><text x="{:.1}" y="{:.2}" font-size="10" text-anchor="end">{}</text>"##,
                left - 6.0,
                p + 3.0,
                tick_text(y)
            );
        }
        s.push_str(&self.body);
        let _ = writeln!(
            s,
            r#"<polyline points="{left},{top} {left},{bottom} {right},{bottom}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">{}</text>"#,
            (left + right) / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{:.1}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
            (top + bottom) / 2.0,
            (top + bottom) / 2.0,
            escape(&self.y_label)
        );
        s.push_str("</svg>\n");
        s
    }
}

fn tick_text(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.0e}")
    } else {
        let t = format!("{v:.3}");
        t.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Histogram of per-point unseparability probabilities.
pub fn histogram_svg(probs: &[f64], bins: usize, alpha: f64) -> String {
    let bins = bins.max(1);
    let hi = probs.iter().copied().fold(0.0, f64::max);
    let hi = if hi > 0.0 { hi } else { 1.0 };
    let mut counts = vec![0usize; bins];
    for &p in probs {
        let b = ((p / hi) * bins as f64) as usize;
        counts[b.min(bins - 1)] += 1;
    }
    let top = counts.iter().copied().max().unwrap_or(1).max(1) as f64;
    let mut c = Chart::new(
        &format!("unseparability probability, alpha = {alpha}"),
        (0.0, hi),
        (0.0, top * 1.05),
    )
    .labels("p_alpha", "points");
    let w = hi / bins as f64;
    for (i, &n) in counts.iter().enumerate() {
        c.bar(i as f64 * w, (i + 1) as f64 * w, n as f64, "#4c72b0");
    }
    c.render()
}

/// Empirical `p_bar_alpha` over the uniform-sphere curves of the given
/// dimensions, on a log scale.
pub fn sweep_svg(sweep: &[(f64, f64)], dims: &[f64]) -> String {
    let a_lo = sweep.first().map_or(0.6, |p| p.0);
    let a_hi = sweep.last().map_or(1.0, |p| p.0);
    let mut curves = Vec::new();
    let mut y_lo = f64::INFINITY;
    let mut y_hi = 0.0f64;
    for &n in dims {
        let pts: Vec<(f64, f64)> = (0..=60)
            .map(|i| a_lo + (a_hi - a_lo) * f64::from(i) / 60.0)
            .filter_map(|a| theoretical_p_alpha(n, a).ok().map(|p| (a, p)))
            .collect();
        curves.push((n, pts));
    }
    for &(_, p) in sweep.iter().filter(|p| p.1 > 0.0) {
        y_lo = y_lo.min(p);
        y_hi = y_hi.max(p);
    }
    if !y_lo.is_finite() {
        y_lo = 1e-6;
        y_hi = 1.0;
    }
    let y_lo = (y_lo / 10.0).max(1e-300);
    let y_hi = (y_hi * 10.0).min(10.0);
    let mut c = Chart::new("mean unseparability vs alpha", (a_lo, a_hi), (y_lo, y_hi))
        .labels("alpha", "p_bar_alpha")
        .log_y();
    for (n, pts) in &curves {
        let visible: Vec<(f64, f64)> = pts.iter().copied().filter(|p| p.1 >= y_lo && p.1 <= y_hi).collect();
        c.polyline(&visible, "#c44e52", 1.0);
        if let Some(&(a, p)) = visible.last() {
            c.label(a, p, &format!("n={n}"), "#c44e52");
        }
    }
    c.polyline(sweep, "#4c72b0", 2.0);
    c.markers(sweep, "#4c72b0");
    c.render()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_has_one_bar_per_bin() {
        let s = histogram_svg(&[0.0, 0.1, 0.1, 0.2, 0.5], 10, 0.8);
        assert!(s.starts_with("<svg"));
        assert!(s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<rect x=").count(), 10);
    }

    #[test]
    fn sweep_plot_skips_zero_means() {
        let sweep = [(0.6, 0.01), (0.7, 0.001), (0.8, 0.0)];
        let s = sweep_svg(&sweep, &[2.0, 5.0, 10.0]);
        assert_eq!(s.matches("<circle").count(), 2);
        assert!(s.contains("n=5"));
        assert!(!s.contains("NaN"));
    }
}
