use std::fmt::Write as _;

use upsilon_core::{PiecewiseLinear, Rational};

const WIDTH: i64 = 480;
const HEIGHT: i64 = 320;
const MARGIN: i64 = 40;

/// SVG polyline of `f` over `[0, 2]` with singularities circled. Coordinates
/// are computed exactly and rounded to three decimals, so the output bytes
/// depend only on `f`.
pub fn svg(f: &PiecewiseLinear, title: &str) -> String {
    let int = Rational::from_integer;
    let values = f.breakpoints().iter().map(|(_, v)| v);
    let lo = values.clone().min().cloned().unwrap_or_default().min(Rational::zero());
    let hi = values.max().cloned().unwrap_or_default().max(Rational::zero());
    let span = if hi == lo { Rational::one() } else { &hi - &lo };
    let x = |t: &Rational| (int(MARGIN) + t / Rational::two() * int(WIDTH - 2 * MARGIN)).to_decimal(3);
    let y = |v: &Rational| (int(MARGIN) + (&hi - v) / &span * int(HEIGHT - 2 * MARGIN)).to_decimal(3);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, "  <title>{}</title>", escape(title));
    let zero = Rational::zero();
    let _ = writeln!(
        out,
        r#"  <line x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray" stroke-width="1"/>"#,
        x(&zero),
        y(&zero),
        x(&Rational::two()),
        y(&zero)
    );
    let points: Vec<String> = f
        .breakpoints()
        .iter()
        .map(|(t, v)| format!("{},{}", x(t), y(v)))
        .collect();
    let _ = writeln!(
        out,
        r#"  <polyline fill="none" stroke="black" stroke-width="2" points="{}"/>"#,
        points.join(" ")
    );
    for (t, _) in f.singularities() {
        let v = f.eval(&t).expect("singularity lies in [0, 2]");
        let _ = writeln!(
            out,
            r#"  <circle cx="{}" cy="{}" r="4" fill="red"><title>t = {t}</title></circle>"#,
            x(&t),
            y(&v)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
