use std::fmt::Write;

use crate::pvp::{SecondPhaseFit, VarianceProfile};
use crate::scalar::Real;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

/// Line plot of `log2 σ(t)` with the fitted second-phase line drawn over its
/// window. Points with zero spread are skipped.
pub fn profile_svg<T: Real>(
    profile: &VarianceProfile<T>,
    fit: Option<&SecondPhaseFit<T>>,
) -> String {
    let pts: Vec<(f64, f64)> = profile
        .t
        .iter()
        .zip(&profile.sigma)
        .filter(|(_, s)| **s > T::zero())
        .map(|(t, s)| (t.to_f64_lossy(), s.to_f64_lossy().log2()))
        .collect();
    let line = fit.map(|f| {
        let (a, b) = (f.fit_window.0.to_f64_lossy(), f.fit_window.1.to_f64_lossy());
        let (c, i) = (f.c_prime.to_f64_lossy(), f.intercept.to_f64_lossy());
        [(a, i - c * a), (b, i - c * b)]
    });

    let all = pts.iter().chain(line.iter().flatten());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 <= 0.0 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 <= 0.0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{m} {b} H{r} M{m} {b} V{m}" stroke="black" fill="none"/>"#,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">t (s) [{x0:.3}, {x1:.3}]</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{}" font-size="12" transform="rotate(-90 15 {})" text-anchor="middle">log2 sigma [{y0:.2}, {y1:.2}]</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    if !pts.is_empty() {
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" stroke="steelblue" stroke-width="1.5" fill="none"/>"#,
            coords.join(" ")
        );
    }
    if let Some([(ax, ay), (bx, by)]) = line {
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="firebrick" stroke-dasharray="6 3"/>"#,
            sx(ax),
            sy(ay),
            sx(bx),
            sy(by)
        );
    }
    s.push_str("</svg>\n");
    s
}
