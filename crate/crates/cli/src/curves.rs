//! Zero-curve documents for the type 2 and 3 systems, and an SVG plot.
//!
//! ```text
//! dodecatile-curves 1
//! type 2
//! grid 400
//! accept <a_lo> <a_hi> <beta_lo> <beta_hi>
//! scan <a_lo> <a_hi> <beta_lo> <beta_hi>
//! polyline r1 <n>
//! <a> <beta>
//! ...
//! root <label> <a> <beta> <tag> <residual> <condition>
//! ```

use std::fmt::Write as _;

use dodecatile::solver::{Domain, Point2, Rect, RootTag, Scan2D};

use crate::CliError;

pub const CURVE_FORMAT: &str = "dodecatile-curves";
pub const CURVE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct CurveRoot {
    pub label: char,
    pub a: f64,
    pub beta: f64,
    pub tag: RootTag,
    pub residual: f64,
    pub condition: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveDocument {
    pub type_id: u8,
    pub grid_n: usize,
    pub domain: Domain,
    /// Polylines of r1 = 0 and r2 = 0.
    pub curves: [Vec<Vec<Point2>>; 2],
    pub roots: Vec<CurveRoot>,
}

fn seg_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
}

/// Distance from `p` to the nearest polyline of a family.
pub fn distance_to_family(p: Point2, family: &[Vec<Point2>]) -> f64 {
    family
        .iter()
        .flat_map(|line| line.windows(2).map(|w| seg_distance(p, w[0], w[1])))
        .fold(f64::INFINITY, f64::min)
}

/// Splits the segment nearest to `p` at `p`.
fn insert_point(family: &mut [Vec<Point2>], p: Point2) {
    let mut best = (f64::INFINITY, 0, 0);
    for (l, line) in family.iter().enumerate() {
        for (k, w) in line.windows(2).enumerate() {
            let d = seg_distance(p, w[0], w[1]);
            if d < best.0 {
                best = (d, l, k);
            }
        }
    }
    if best.0.is_finite() {
        family[best.1].insert(best.2 + 1, p);
    }
}

impl CurveDocument {
    /// The refined roots are exact points of both zero sets; they are
    /// spliced into the marching-squares polylines, whose chords otherwise
    /// sit up to ~h^2 away from the true curves.
    pub fn from_scan(type_id: u8, scan: &Scan2D) -> Self {
        let mut curves = scan.curves.clone();
        let roots: Vec<CurveRoot> = scan
            .roots
            .iter()
            .map(|r| CurveRoot {
                label: r.label.unwrap_or('?'),
                a: r.a.value(),
                beta: r.beta,
                tag: r.tag,
                residual: r.residual_norm,
                condition: r.condition,
            })
            .collect();
        for r in &roots {
            for family in curves.iter_mut() {
                insert_point(family, (r.a, r.beta));
            }
        }
        CurveDocument { type_id, grid_n: scan.grid_n, domain: scan.domain, curves, roots }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{CURVE_FORMAT} {CURVE_VERSION}\n");
        let _ = writeln!(s, "type {}", self.type_id);
        let _ = writeln!(s, "grid {}", self.grid_n);
        for (key, r) in [("accept", self.domain.accept), ("scan", self.domain.scan)] {
            let _ = writeln!(s, "{key} {:?} {:?} {:?} {:?}", r.a.0, r.a.1, r.beta.0, r.beta.1);
        }
        for (k, family) in self.curves.iter().enumerate() {
            for line in family {
                let _ = writeln!(s, "polyline r{} {}", k + 1, line.len());
                for (a, b) in line {
                    let _ = writeln!(s, "{a:?} {b:?}");
                }
            }
        }
        for r in &self.roots {
            let _ = writeln!(s, "root {} {:?} {:?} {} {:e} {:e}", r.label, r.a, r.beta, r.tag.name(), r.residual, r.condition);
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let err = |n: usize, m: &str| CliError::Parse(format!("line {}: {m}", n + 1));
        let lines: Vec<&str> = text.lines().collect();
        if lines.first().map(|l| l.trim()) != Some(&format!("{CURVE_FORMAT} {CURVE_VERSION}")) {
            return Err(CliError::Parse("unsupported curve document header".into()));
        }
        let mut type_id = None;
        let mut grid_n = None;
        let mut rects = [None, None];
        let mut curves: [Vec<Vec<Point2>>; 2] = [Vec::new(), Vec::new()];
        let mut roots = Vec::new();
        let mut n = 1;
        let num = |n: usize, s: &str| s.parse::<f64>().map_err(|_| err(n, "bad number"));
        while n < lines.len() {
            let words: Vec<&str> = lines[n].split_whitespace().collect();
            match words.as_slice() {
                [] => {}
                ["type", t] => type_id = Some(t.parse().map_err(|_| err(n, "bad type"))?),
                ["grid", g] => grid_n = Some(g.parse().map_err(|_| err(n, "bad grid"))?),
                [key @ ("accept" | "scan"), a0, a1, b0, b1] => {
                    let r = Rect { a: (num(n, a0)?, num(n, a1)?), beta: (num(n, b0)?, num(n, b1)?) };
                    rects[usize::from(*key == "scan")] = Some(r);
                }
                ["polyline", which, count] => {
                    let k = match *which {
                        "r1" => 0,
                        "r2" => 1,
                        _ => return Err(err(n, "unknown residual")),
                    };
                    let count: usize = count.parse().map_err(|_| err(n, "bad count"))?;
                    let mut line = Vec::with_capacity(count);
                    for _ in 0..count {
                        n += 1;
                        let p: Vec<&str> = lines.get(n).ok_or_else(|| err(n, "polyline cut short"))?.split_whitespace().collect();
                        let [a, b] = p.as_slice() else { return Err(err(n, "expected two numbers")) };
                        line.push((num(n, a)?, num(n, b)?));
                    }
                    curves[k].push(line);
                }
                ["root", label, a, beta, tag, residual, condition] => roots.push(CurveRoot {
                    label: label.chars().next().ok_or_else(|| err(n, "bad label"))?,
                    a: num(n, a)?,
                    beta: num(n, beta)?,
                    tag: RootTag::parse(tag).ok_or_else(|| err(n, "bad tag"))?,
                    residual: num(n, residual)?,
                    condition: num(n, condition)?,
                }),
                _ => return Err(err(n, "unrecognized line")),
            }
            n += 1;
        }
        let missing = |what: &str| CliError::Parse(format!("missing '{what}' line"));
        Ok(CurveDocument {
            type_id: type_id.ok_or_else(|| missing("type"))?,
            grid_n: grid_n.ok_or_else(|| missing("grid"))?,
            domain: Domain { accept: rects[0].ok_or_else(|| missing("accept"))?, scan: rects[1].ok_or_else(|| missing("scan"))? },
            curves,
            roots,
        })
    }

    /// Largest distance from a root to either curve family.
    pub fn max_root_offset(&self) -> f64 {
        self.roots
            .iter()
            .flat_map(|r| self.curves.iter().map(move |f| distance_to_family((r.a, r.beta), f)))
            .fold(0.0, f64::max)
    }

    /// Both families over (a, beta) with the roots marked and labelled.
    pub fn to_svg(&self) -> String {
        let (w, h, m) = (640.0, 640.0, 50.0);
        let r = self.domain.scan;
        let x = |a: f64| m + (a - r.a.0) / (r.a.1 - r.a.0) * (w - 2.0 * m);
        let y = |b: f64| h - m - (b - r.beta.0) / (r.beta.1 - r.beta.0) * (h - 2.0 * m);
        let mut s = String::new();
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let acc = self.domain.accept;
        let _ = writeln!(
            s,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#888" stroke-dasharray="4 3"/>"##,
            x(acc.a.0),
            y(acc.beta.1),
            x(acc.a.1) - x(acc.a.0),
            y(acc.beta.0) - y(acc.beta.1)
        );
        for (family, colour) in self.curves.iter().zip(["#1f5fbf", "#c0392b"]) {
            for line in family {
                let pts: Vec<String> = line.iter().map(|&(a, b)| format!("{:.2},{:.2}", x(a), y(b))).collect();
                let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#, pts.join(" "));
            }
        }
        for root in &self.roots {
            let (cx, cy) = (x(root.a), y(root.beta));
            let _ = writeln!(s, r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="4" fill="black"/>"#);
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-family="serif" font-size="16">{}</text>"#, cx + 6.0, cy - 6.0, root.label);
        }
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-family="serif" font-size="16">a</text>"#, w / 2.0, h - 15.0);
        let _ = writeln!(s, r#"<text x="15" y="{:.2}" font-family="serif" font-size="16">β</text>"#, h / 2.0);
        let _ = writeln!(s, r#"<text x="{m}" y="30" font-family="serif" font-size="16">type {}</text>"#, self.type_id);
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dodecatile::solver::solve_type;

    #[test]
    fn round_trip_and_roots_sit_on_both_families() {
        let scan = solve_type(3, 120, 1e-12).unwrap();
        let doc = CurveDocument::from_scan(3, &scan);
        assert_eq!(doc.roots.len(), 4);
        assert!(doc.max_root_offset() < 1e-12);
        let back = CurveDocument::parse(&doc.to_text()).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn svg_labels_every_root() {
        let doc = CurveDocument::from_scan(2, &solve_type(2, 120, 1e-12).unwrap());
        let svg = doc.to_svg();
        for l in ["P", "Q", "R", "S"] {
            assert!(svg.contains(&format!(">{l}</text>")), "{l}");
        }
        assert!(svg.matches("<polyline").count() >= 2);
    }

    #[test]
    fn bad_headers_and_lines_fail() {
        assert!(CurveDocument::parse("dodecatile-curves 2\n").is_err());
        assert!(CurveDocument::parse("dodecatile-curves 1\ntype 2\nbogus\n").is_err());
        assert!(CurveDocument::parse("dodecatile-curves 1\ngrid 4\n").is_err());
    }
}
