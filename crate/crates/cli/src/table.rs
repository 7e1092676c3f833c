//! Column tables written as CSV, with an optional SVG polyline plot.

use std::fmt::Write;

/// Named columns sharing the first column as abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Builds a table from equal-length columns.
    pub fn from_columns(names: &[&str], cols: &[&[f64]]) -> Self {
        let n = cols.first().map_or(0, |c| c.len());
        debug_assert!(cols.iter().all(|c| c.len() == n));
        let rows = (0..n)
            .map(|i| cols.iter().map(|c| c[i]).collect())
            .collect();
        Table {
            columns: names.iter().map(|c| c.to_string()).collect(),
            rows,
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// Shortest round-trip decimal for every value.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// Every non-abscissa column as a polyline against the first column.
    pub fn to_svg(&self, title: &str) -> String {
        const W: f64 = 640.0;
        const H: f64 = 400.0;
        const PAD: f64 = 48.0;
        const COLORS: [&str; 6] = [
            "#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d35400", "#555555",
        ];

        let finite = |v: &f64| v.is_finite();
        let xs: Vec<f64> = self.rows.iter().map(|r| r[0]).collect();
        let (x0, x1) = range(xs.iter().copied().filter(finite));
        let (y0, y1) = range(
            self.rows
                .iter()
                .flat_map(|r| r[1..].iter().copied())
                .filter(finite),
        );
        let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
        let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
        );
        let _ = writeln!(
            s,
            r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#
        );
        let _ = writeln!(
            s,
            r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            W - 2.0 * PAD,
            H - 2.0 * PAD
        );
        let _ = writeln!(
            s,
            r#"<text x="{PAD}" y="24" font-family="sans-serif" font-size="14">{}</text>"#,
            escape(title)
        );
        let _ = writeln!(
            s,
            r#"<text x="{PAD}" y="{}" font-family="sans-serif" font-size="11">{} in [{x0:.4}, {x1:.4}], values in [{y0:.4e}, {y1:.4e}]</text>"#,
            H - 16.0,
            escape(&self.columns[0])
        );
        for (j, name) in self.columns.iter().enumerate().skip(1) {
            let color = COLORS[(j - 1) % COLORS.len()];
            let pts: Vec<String> = self
                .rows
                .iter()
                .filter(|r| r[0].is_finite() && r[j].is_finite())
                .map(|r| format!("{:.2},{:.2}", sx(r[0]), sy(r[j])))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                pts.join(" ")
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" fill="{color}">{}</text>"#,
                W - PAD + 4.0 - 120.0,
                PAD + 14.0 * j as f64,
                escape(name)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
        (a.min(v), b.max(v))
    });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= 1e-12 * (1.0 + lo.abs()) {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
