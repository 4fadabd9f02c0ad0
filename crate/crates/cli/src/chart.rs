//! Chart emission: an SVG scatter chart in the usual Adams-chart layout
//! (stem rightward, filtration upward) and an exact TSV dump of the
//! dimension table. Output bytes are deterministic for a fixed checkpoint.

use motex::f2::row_reduce;
use motex::resolution::ExtTable;

/// Fixed palette. Tau-free classes are filled dots, tau-torsion classes
/// open diamonds.
pub mod palette {
    pub const GRID: &str = "#d8d8d8";
    pub const FREE: &str = "#1f5fa8";
    pub const TORSION: &str = "#c23b22";
    pub const TEXT: &str = "#202020";
}

/// TSV rows `(s, f, w, dim, tau_rank)`, tab-separated with a header,
/// sorted by (s, f, w).
pub fn chart_tsv(table: &ExtTable) -> String {
    let mut out = String::from("s\tf\tw\tdim\ttau_rank\n");
    for (s, f, w, dim, tau_rank) in table.rows() {
        out.push_str(&format!("{s}\t{f}\t{w}\t{dim}\t{tau_rank}\n"));
    }
    out
}

/// Parses a chart TSV back into rows; inverse of [`chart_tsv`] (used by the
/// round-trip check).
#[cfg(test)]
pub fn parse_tsv(text: &str) -> Option<Vec<(i64, u32, i64, usize, usize)>> {
    let mut lines = text.lines();
    if lines.next()? != "s\tf\tw\tdim\ttau_rank" {
        return None;
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let mut it = line.split('\t');
        rows.push((
            it.next()?.parse().ok()?,
            it.next()?.parse().ok()?,
            it.next()?.parse().ok()?,
            it.next()?.parse().ok()?,
            it.next()?.parse().ok()?,
        ));
    }
    Some(rows)
}

/// Per (s, f): generator counts of the F2[tau]-module, split into tau-free
/// and tau-torsion, with the birth weights of the generators.
fn module_generators(table: &ExtTable, s: i64, f: u32) -> Option<(usize, usize, Vec<i64>)> {
    // Find the band by probing the rows of the table.
    let rows = table.rows();
    let band: Vec<(i64, usize)> = rows
        .iter()
        .filter(|r| r.0 == s && r.1 == f)
        .map(|r| (r.2, r.3))
        .collect();
    if band.is_empty() {
        return None;
    }
    let w_hi = band.iter().map(|b| b.0).max().unwrap();
    let w_lo = band.iter().map(|b| b.0).min().unwrap();
    let dim_at = |w: i64| -> usize {
        if w > w_hi {
            0
        } else {
            table.dim(s, f, w).unwrap_or(0)
        }
    };
    // New module generators at weight w: dim(w) - rank(tau: w+1 -> w).
    let mut births = Vec::new();
    for w in (w_lo..=w_hi).rev() {
        let rank_in = if w == w_hi {
            0
        } else {
            match table.group(s, f, w + 1) {
                None => 0,
                Some(g) => row_reduce(&g.tau_matrix).rank(),
            }
        };
        for _ in 0..dim_at(w).saturating_sub(rank_in) {
            births.push(w);
        }
    }
    // Far below every band the dimension is tau-stable; that stable value
    // counts the tau-free module generators.
    let free = table.dim(s, f, w_lo - 1000).unwrap_or(0);
    let torsion = births.len().saturating_sub(free);
    Some((free, torsion, births))
}

/// Renders the chart as an SVG document.
pub fn chart_svg(table: &ExtTable, max_stem: i64, max_f: u32) -> String {
    let cell = 28i64;
    let margin = 40i64;
    let width = margin * 2 + (max_stem + 1) * cell;
    let height = margin * 2 + (max_f as i64 + 1) * cell;
    let x_of = |s: i64| margin + s * cell + cell / 2;
    let y_of = |f: i64| height - margin - f * cell - cell / 2;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for s in 0..=max_stem {
        svg.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{y0}\" x2=\"{x}\" y2=\"{y1}\" stroke=\"{g}\" stroke-width=\"1\"/>\n",
            x = x_of(s),
            y0 = y_of(-1),
            y1 = y_of(max_f as i64 + 1),
            g = palette::GRID,
        ));
        if s % 5 == 0 {
            svg.push_str(&format!(
                "<text x=\"{x}\" y=\"{y}\" font-size=\"11\" text-anchor=\"middle\" fill=\"{c}\">{s}</text>\n",
                x = x_of(s),
                y = height - margin / 2,
                c = palette::TEXT,
            ));
        }
    }
    for f in 0..=max_f as i64 {
        svg.push_str(&format!(
            "<line x1=\"{x0}\" y1=\"{y}\" x2=\"{x1}\" y2=\"{y}\" stroke=\"{g}\" stroke-width=\"1\"/>\n",
            x0 = x_of(-1) + cell / 2,
            x1 = x_of(max_stem) + cell / 2,
            y = y_of(f),
            g = palette::GRID,
        ));
        if f % 2 == 0 {
            svg.push_str(&format!(
                "<text x=\"{x}\" y=\"{y}\" font-size=\"11\" text-anchor=\"middle\" fill=\"{c}\">{f}</text>\n",
                x = margin / 2,
                y = y_of(f) + 4,
                c = palette::TEXT,
            ));
        }
    }

    // A dot per F2[tau]-module generator at (s, f), tau-free first.
    for s in 0..=max_stem {
        for f in 0..=max_f {
            if f == 0 {
                if s == 0 {
                    svg.push_str(&format!(
                        "<circle cx=\"{x}\" cy=\"{y}\" r=\"4\" fill=\"{c}\"><title>(0,0) ground module</title></circle>\n",
                        x = x_of(0),
                        y = y_of(0),
                        c = palette::FREE,
                    ));
                }
                continue;
            }
            let Some((free, torsion, births)) = module_generators(table, s, f) else {
                continue;
            };
            let total = free + torsion;
            for i in 0..total {
                let dx = (i as i64 - (total as i64 - 1) / 2) * 9 - i64::from(total % 2 == 0) * 4;
                let x = x_of(s) + dx;
                let y = y_of(f as i64);
                let w = births.get(i).copied().unwrap_or(0);
                if i < free {
                    svg.push_str(&format!(
                        "<circle cx=\"{x}\" cy=\"{y}\" r=\"4\" fill=\"{c}\"><title>({s},{f}) w={w} tau-free</title></circle>\n",
                        c = palette::FREE,
                    ));
                } else {
                    svg.push_str(&format!(
                        "<path d=\"M {x} {y0} L {x1} {y} L {x} {y1} L {x2} {y} Z\" fill=\"none\" stroke=\"{c}\" stroke-width=\"1.5\"><title>({s},{f}) w={w} tau-torsion</title></path>\n",
                        y0 = y - 5,
                        y1 = y + 5,
                        x1 = x + 5,
                        x2 = x - 5,
                        c = palette::TORSION,
                    ));
                }
            }
        }
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use motex::hopf::{Algebra, MotivicProfile};
    use motex::resolution::Resolution;

    #[test]
    fn tsv_round_trips_the_dimension_table() {
        let alg = Algebra::new(MotivicProfile::preset("B", 38).unwrap());
        let mut res = Resolution::new(alg);
        res.extend(12, 6).unwrap();
        let table = ExtTable::new(&res, 5, 17).unwrap();
        let tsv = chart_tsv(&table);
        let parsed = parse_tsv(&tsv).expect("well-formed TSV");
        assert_eq!(parsed, table.rows());
        assert!(parse_tsv("bogus\n1\t2").is_none());
    }

    #[test]
    fn svg_is_deterministic_and_marks_torsion() {
        let alg = Algebra::new(MotivicProfile::preset("A", 24).unwrap());
        let mut res = Resolution::new(alg);
        res.extend(8, 6).unwrap();
        let table = ExtTable::new(&res, 5, 13).unwrap();
        let one = chart_svg(&table, 8, 5);
        let two = chart_svg(&table, 8, 5);
        assert_eq!(one, two);
        // h1^4 at (4, 4, 4) is tau-torsion over the full algebra.
        assert!(one.contains("(4,4) w=4 tau-torsion"), "torsion marker missing");
        assert!(one.contains("tau-free"));
    }
}
