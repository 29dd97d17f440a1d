//! Text formats shared by the command-line tool, with parsers.
//!
//! Every emitter here has a parser that reproduces its input exactly, so
//! emitted files can serve as golden outputs.

use std::fmt;
use std::str::FromStr;

use crate::codec::{split_index, DecodeCase, DecodePlan};
use crate::error::{Error, Result};
use crate::rates::{Rate, RatePair, SniProblem, TableRow};
use crate::sim::SymbolUsage;

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

fn parse_num<T: FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| parse_err(line, format!("expected {what}, found {s:?}")))
}

fn split_list(field: &str, sep: char) -> Vec<&str> {
    if field == "-" {
        Vec::new()
    } else {
        field.split(sep).collect()
    }
}

/// One line of the decode-plan text format:
/// `t j CASE tag codes i1,i2 side (t1,j1);(t2,j2)`, with `-` for an empty list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanLine {
    pub t: usize,
    pub j: usize,
    pub case: DecodeCase,
    pub codes: Vec<usize>,
    pub side: Vec<(usize, usize)>,
}

impl PlanLine {
    fn parse_at(s: &str, line: usize) -> Result<Self> {
        let words: Vec<&str> = s.split_whitespace().collect();
        let [t, j, "CASE", case, "codes", codes, "side", side] = words[..] else {
            return Err(parse_err(line, format!("malformed plan line {s:?}")));
        };
        let case = case.parse().map_err(|_| parse_err(line, format!("unknown case tag {case:?}")))?;
        let codes = split_list(codes, ',')
            .into_iter()
            .map(|c| parse_num(c, line, "a code index"))
            .collect::<Result<_>>()?;
        let side = split_list(side, ';')
            .into_iter()
            .map(|p| {
                let inner = p
                    .strip_prefix('(')
                    .and_then(|p| p.strip_suffix(')'))
                    .ok_or_else(|| parse_err(line, format!("expected (t,j), found {p:?}")))?;
                let (a, b) = inner
                    .split_once(',')
                    .ok_or_else(|| parse_err(line, format!("expected (t,j), found {p:?}")))?;
                Ok((parse_num(a, line, "t")?, parse_num(b, line, "j")?))
            })
            .collect::<Result<_>>()?;
        Ok(PlanLine {
            t: parse_num(t, line, "t")?,
            j: parse_num(j, line, "j")?,
            case,
            codes,
            side,
        })
    }
}

impl fmt::Display for PlanLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let codes: Vec<String> = self.codes.iter().map(usize::to_string).collect();
        let side: Vec<String> = self.side.iter().map(|(t, j)| format!("({t},{j})")).collect();
        let or_dash = |v: Vec<String>, sep: &str| if v.is_empty() { "-".to_string() } else { v.join(sep) };
        write!(
            f,
            "{} {} CASE {} codes {} side {}",
            self.t,
            self.j,
            self.case,
            or_dash(codes, ","),
            or_dash(side, ";")
        )
    }
}

impl FromStr for PlanLine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_at(s, 1)
    }
}

/// The lines of a plan, ascending in `t` then `j`.
pub fn plan_lines(plan: &DecodePlan) -> Vec<PlanLine> {
    plan.entries()
        .iter()
        .map(|e| PlanLine {
            t: e.t,
            j: e.j,
            case: e.case,
            codes: e.codes.clone(),
            side: e.side_terms.iter().map(|&s| split_index(plan.b(), s)).collect(),
        })
        .collect()
}

pub fn plan_to_text(plan: &DecodePlan) -> String {
    plan_lines(plan).iter().map(|l| format!("{l}\n")).collect()
}

pub fn parse_plan_text(text: &str) -> Result<Vec<PlanLine>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| PlanLine::parse_at(l, i + 1))
        .collect()
}

/// Parses `c_i = x_{t,j} + …` into `i` and its `(t, j)` terms.
pub fn parse_symbolic_line(s: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    parse_symbolic_at(s, 1)
}

fn parse_symbolic_at(s: &str, line: usize) -> Result<(usize, Vec<(usize, usize)>)> {
    let (lhs, rhs) = s
        .split_once(" = ")
        .ok_or_else(|| parse_err(line, format!("expected `c_i = …`, found {s:?}")))?;
    let index = lhs
        .strip_prefix("c_")
        .ok_or_else(|| parse_err(line, format!("expected c_i, found {lhs:?}")))?;
    let terms = rhs
        .split(" + ")
        .map(|term| {
            let inner = term
                .strip_prefix("x_{")
                .and_then(|t| t.strip_suffix('}'))
                .ok_or_else(|| parse_err(line, format!("expected x_{{t,j}}, found {term:?}")))?;
            let (t, j) = inner
                .split_once(',')
                .ok_or_else(|| parse_err(line, format!("expected x_{{t,j}}, found {term:?}")))?;
            Ok((parse_num(t, line, "t")?, parse_num(j, line, "j")?))
        })
        .collect::<Result<_>>()?;
    Ok((parse_num(index, line, "a code index")?, terms))
}

/// Parses a whole listing, requiring the code indices to run `0, 1, …`.
pub fn parse_symbolic_listing(text: &str) -> Result<Vec<Vec<(usize, usize)>>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| {
            let (c, terms) = parse_symbolic_at(l, i + 1)?;
            if c != i {
                return Err(parse_err(i + 1, format!("expected c_{i}, found c_{c}")));
            }
            Ok(terms)
        })
        .collect()
}

/// A rate truncated (not rounded) to four decimals, e.g. `71/35` → `2.0285`.
pub fn rate_decimal(rate: Rate) -> String {
    let scaled = rate.numer() * 10_000 / rate.denom();
    format!("{}.{:04}", scaled / 10_000, scaled % 10_000)
}

pub const TABLE_HEADER: &str = "K,D,U,a,b,rate,m,n";

pub fn table_row_to_csv(row: &TableRow) -> String {
    let (p, pair) = (&row.problem, &row.pair);
    format!(
        "{},{},{},{},{},{},{},{}",
        p.k(),
        p.d(),
        p.u(),
        pair.a(),
        pair.b(),
        rate_decimal(pair.rate()),
        pair.m(),
        pair.n()
    )
}

pub fn table_to_csv(rows: &[TableRow]) -> String {
    let mut s = format!("{TABLE_HEADER}\n");
    for r in rows {
        s.push_str(&table_row_to_csv(r));
        s.push('\n');
    }
    s
}

/// Parses a table, re-certifying each pair and checking the derived columns.
pub fn parse_table_csv(text: &str) -> Result<Vec<TableRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == TABLE_HEADER => {}
        _ => return Err(parse_err(1, format!("expected header {TABLE_HEADER:?}"))),
    }
    lines
        .map(|(i, l)| {
            let line = i + 1;
            let cols: Vec<&str> = l.split(',').collect();
            let [k, d, u, a, b, rate, m, n] = cols[..] else {
                return Err(parse_err(line, format!("expected 8 columns, found {}", cols.len())));
            };
            let problem = SniProblem::new(parse_num(k, line, "K")?, parse_num(d, line, "D")?, parse_num(u, line, "U")?)?;
            let pair = RatePair::new(&problem, parse_num(a, line, "a")?, parse_num(b, line, "b")?)?;
            let row = TableRow { problem, pair };
            if table_row_to_csv(&row) != l {
                return Err(parse_err(
                    line,
                    format!("rate {rate} or size {m}x{n} does not match the pair"),
                ));
            }
            Ok(row)
        })
        .collect()
}

/// `# key,value` lines that follow the rows of a usage CSV.
pub type Footer = Vec<(String, String)>;

/// Parses the CSV written by [`crate::sim::SimReport::to_csv`] into the
/// per-symbol rows and the `# key,value` footer.
pub fn parse_usage_csv(text: &str) -> Result<(Vec<SymbolUsage>, Footer)> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, "t,j,case,num_codes,gamma")) => {}
        _ => return Err(parse_err(1, "expected header \"t,j,case,num_codes,gamma\"")),
    }
    let mut usage = Vec::new();
    let mut footer = Vec::new();
    for (i, l) in lines {
        let line = i + 1;
        if let Some(rest) = l.strip_prefix("# ") {
            let (k, v) = rest
                .split_once(',')
                .ok_or_else(|| parse_err(line, format!("expected `# key,value`, found {l:?}")))?;
            footer.push((k.to_string(), v.to_string()));
            continue;
        }
        if !footer.is_empty() {
            return Err(parse_err(line, "symbol row after the summary footer"));
        }
        let cols: Vec<&str> = l.split(',').collect();
        let [t, j, case, codes, gamma] = cols[..] else {
            return Err(parse_err(line, format!("expected 5 columns, found {}", cols.len())));
        };
        let case = match case {
            "-" => None,
            c => Some(c.parse().map_err(|_| parse_err(line, format!("unknown case tag {c:?}")))?),
        };
        usage.push(SymbolUsage {
            t: parse_num(t, line, "t")?,
            j: parse_num(j, line, "j")?,
            case,
            num_codes: parse_num(codes, line, "a code count")?,
            gamma: parse_num(gamma, line, "a side-information count")?,
        });
    }
    Ok((usage, footer))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::air::build_air;
    use crate::codec::{decode_plan, symbolic_listing};
    use crate::rates::rate_table;

    #[test]
    fn plan_line_format() {
        let line = PlanLine {
            t: 7,
            j: 5,
            case: DecodeCase::II,
            codes: vec![0, 13],
            side: vec![(5, 2), (10, 3)],
        };
        let text = line.to_string();
        assert_eq!(text, "7 5 CASE II codes 0,13 side (5,2);(10,3)");
        assert_eq!(text.parse::<PlanLine>().unwrap(), line);
        let empty = PlanLine { side: vec![], ..line };
        assert_eq!(empty.to_string(), "7 5 CASE II codes 0,13 side -");
        assert_eq!(empty.to_string().parse::<PlanLine>().unwrap(), empty);
        assert!("7 5 CASE V codes 0 side -".parse::<PlanLine>().is_err());
        assert!("7 5 codes 0 side -".parse::<PlanLine>().is_err());
    }

    #[test]
    fn plan_text_round_trips() {
        let p = SniProblem::new(13, 4, 1).unwrap();
        let plan = decode_plan(&p, &RatePair::new(&p, 1, 5).unwrap()).unwrap();
        let text = plan_to_text(&plan);
        assert_eq!(parse_plan_text(&text).unwrap(), plan_lines(&plan));
        assert!(text.lines().any(|l| l.starts_with("7 5 CASE II codes 0,13 side ")));
    }

    #[test]
    fn symbolic_listing_round_trips() {
        let air = build_air(65, 26).unwrap();
        let lines = symbolic_listing(&air, 5);
        let parsed = parse_symbolic_listing(&lines.join("\n")).unwrap();
        for (c, terms) in parsed.iter().enumerate() {
            let rows: Vec<usize> = terms.iter().map(|&(t, j)| 5 * t + j - 1).collect();
            let want: Vec<usize> = air.col_support(c).iter().map(|&r| r as usize).collect();
            assert_eq!(rows, want);
        }
        assert!(parse_symbolic_line("c_0 = x_{0,1} +").is_err());
        assert!(parse_symbolic_listing("c_1 = x_{0,1}").is_err());
    }

    #[test]
    fn rates_are_truncated() {
        assert_eq!(rate_decimal(Rate::new(71, 35)), "2.0285");
        assert_eq!(rate_decimal(Rate::new(71, 11)), "6.4545");
        assert_eq!(rate_decimal(Rate::from_integer(4)), "4.0000");
    }

    #[test]
    fn table_round_trips() {
        let rows = rate_table(13, 4, 6).unwrap();
        let text = table_to_csv(&rows);
        assert_eq!(parse_table_csv(&text).unwrap(), rows);
        let first = table_row_to_csv(&rows[0]);
        let rate = rate_decimal(rows[0].pair.rate());
        let tampered = format!("{TABLE_HEADER}\n{}\n", first.replace(&rate, "0.0000"));
        assert!(matches!(parse_table_csv(&tampered), Err(Error::Parse { line: 2, .. })));
        assert!(parse_table_csv("K,D\n").is_err());
    }
}
