//! Minimal SVG 1.1 text writer with fixed two-decimal coordinates.

use alloc::string::String;
use core::fmt::{self, Write};

/// Coordinate formatted with two decimals; negative zero prints as `0.00`.
#[derive(Clone, Copy)]
pub(crate) struct Num(pub f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rounded = libm::round(self.0 * 100.0) / 100.0;
        write!(f, "{:.2}", rounded + 0.0)
    }
}

pub(crate) fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Accumulates the body of one `<g>` layer.
#[derive(Default)]
pub(crate) struct Group {
    pub body: String,
}

impl Group {
    pub fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, attrs: &str) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" {attrs}/>"#,
            Num(x1),
            Num(y1),
            Num(x2),
            Num(y2)
        );
    }

    pub fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, attrs: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect x="{}" y="{}" width="{}" height="{}" {attrs}/>"#,
            Num(x),
            Num(y),
            Num(w),
            Num(h)
        );
    }

    pub fn text(&mut self, x: f64, y: f64, attrs: &str, content: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{}" y="{}" {attrs}>{}</text>"#,
            Num(x),
            Num(y),
            escape(content)
        );
    }

    pub fn points(&mut self, element: &str, points: &[(f64, f64)], attrs: &str) {
        let _ = write!(self.body, r#"<{element} points=""#);
        for (i, (x, y)) in points.iter().enumerate() {
            if i > 0 {
                self.body.push(' ');
            }
            let _ = write!(self.body, "{},{}", Num(*x), Num(*y));
        }
        let _ = writeln!(self.body, r#"" {attrs}/>"#);
    }
}
