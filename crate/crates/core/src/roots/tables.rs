//! Plain-text rendering of the label tables.

use super::{CuspTriad, D4RootRow, LambdaRow, LongRayRow, RootError, RootSystem, ShortRayRow, Surface, Tritangent};
use crate::toricfan::WeylFan;
use std::str::FromStr;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TableKind {
    Boundary,
    Tritangent,
    Cusp,
    Lambda,
    Triads,
}

impl TableKind {
    pub const ALL: [TableKind; 5] = [TableKind::Boundary, TableKind::Tritangent, TableKind::Cusp, TableKind::Lambda, TableKind::Triads];

    pub fn name(self) -> &'static str {
        match self {
            TableKind::Boundary => "bd",
            TableKind::Tritangent => "td",
            TableKind::Cusp => "cd",
            TableKind::Lambda => "lambda",
            TableKind::Triads => "triads",
        }
    }
}

impl FromStr for TableKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TableKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| format!("unknown table {s}"))
    }
}

pub fn render(rs: &RootSystem, w: &WeylFan, kind: TableKind) -> Result<String, RootError> {
    Ok(match kind {
        TableKind::Boundary => render_bd(rs, &rs.d4_rows(), &rs.short_rows(w)?),
        TableKind::Tritangent => render_td(&rs.tritangents()?),
        TableKind::Cusp => render_cd(rs, &rs.surfaces()?, &rs.long_rows(w)?),
        TableKind::Lambda => render_lambda(&rs.lambda_rows(w)?),
        TableKind::Triads => render_triads(rs, &rs.cusp_triads()?),
    })
}

/// Left-aligns columns; the last column is not padded.
fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(|r| r.len()).max().unwrap_or(0);
    let width: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let n = r.len();
        for (c, cell) in r.iter().enumerate() {
            if c + 1 == n {
                out.push_str(cell);
            } else {
                out.push_str(cell);
                out.push_str(&" ".repeat(width[c] - cell.chars().count() + 2));
            }
        }
        out.push('\n');
    }
    out
}

pub fn render_bd(rs: &RootSystem, d4: &[D4RootRow], short: &[ShortRayRow]) -> String {
    let a: Vec<Vec<String>> = d4
        .iter()
        .map(|r| vec![r.vector.to_string(), r.character.to_string(), rs.root(r.root).label.to_string(), r.point.to_string()])
        .collect();
    let b: Vec<Vec<String>> =
        short.iter().map(|r| vec![r.ray.to_string(), rs.root(r.root).label.to_string(), r.point.to_string()]).collect();
    format!("# D4 roots\n{}# short rays\n{}", align(&a), align(&b))
}

pub fn render_td(rows: &[Tritangent]) -> String {
    let a: Vec<Vec<String>> = rows.iter().map(|t| vec![t.label.to_string(), t.point.to_string()]).collect();
    format!("# tritangents\n{}", align(&a))
}

pub fn render_cd(rs: &RootSystem, surfaces: &[Surface], long: &[LongRayRow]) -> String {
    let a: Vec<Vec<String>> = surfaces
        .iter()
        .map(|s| {
            vec![
                s.equation(),
                format!("{},{}", rs.root(s.alpha).label, rs.root(s.beta).label),
                s.label.to_string(),
                s.cusp.to_string(),
            ]
        })
        .collect();
    let b: Vec<Vec<String>> = long.iter().map(|r| vec![r.ray.to_string(), r.label.to_string(), r.cusp.to_string()]).collect();
    format!("# surfaces\n{}# long rays\n{}", align(&a), align(&b))
}

pub fn render_lambda(rows: &[LambdaRow]) -> String {
    let a: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![r.ray.to_string(), r.multiplicity.to_string(), r.divisor.class().name().to_string(), r.label.clone(), r.point.to_string()]
        })
        .collect();
    format!("# divisor of lambda\n{}", align(&a))
}

/// All 40 triads with their three root triples, in table order.
pub fn render_triads(rs: &RootSystem, triads: &[CuspTriad]) -> String {
    let mut sorted: Vec<&CuspTriad> = triads.iter().collect();
    sorted.sort_by_key(|t| t.point.table_key());
    let a: Vec<Vec<String>> = sorted
        .iter()
        .map(|t| {
            let rows: Vec<String> =
                t.triples.iter().map(|tr| tr.iter().map(|&i| rs.root(i).label.to_string()).collect::<Vec<_>>().join(" ")).collect();
            vec![t.label.to_string(), t.point.to_string(), rows.join(" | ")]
        })
        .collect();
    format!("# cusp triads\n{}", align(&a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alignment() {
        let rows = vec![vec!["a".to_string(), "μ".into(), "x".into()], vec!["bbb".into(), "cc".into(), "y".into()]];
        assert_eq!(align(&rows), "a    μ   x\nbbb  cc  y\n");
    }
}
