use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use super::{EdgeRecord, SignedDigraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputFormat {
    /// `source,target,rating[,time]` (Bitcoin-style trust ratings)
    #[value(name = "csv-rating")]
    CsvRating,
    /// `source<TAB>target<TAB>sign`
    #[value(name = "tsv-sign")]
    TsvSign,
    /// square integer matrix, rows are senders
    #[value(name = "signed-matrix")]
    SignedMatrix,
}

impl InputFormat {
    pub fn name(self) -> &'static str {
        match self {
            InputFormat::CsvRating => "csv-rating",
            InputFormat::TsvSign => "tsv-sign",
            InputFormat::SignedMatrix => "signed-matrix",
        }
    }
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv-rating" => Ok(InputFormat::CsvRating),
            "tsv-sign" => Ok(InputFormat::TsvSign),
            "signed-matrix" => Ok(InputFormat::SignedMatrix),
            other => Err(Error::InvalidArgument(format!(
                "unknown input format `{other}`"
            ))),
        }
    }
}

/// Parse raw edge records. Node ids are kept verbatim.
pub fn load_edge_records<R: Read>(input: R, format: InputFormat) -> Result<Vec<EdgeRecord>> {
    match format {
        InputFormat::CsvRating => load_csv_rating(input),
        InputFormat::TsvSign => load_tsv_sign(BufReader::new(input)),
        InputFormat::SignedMatrix => load_matrix(BufReader::new(input)),
    }
}

fn parse_weight(field: &str, line: usize) -> Result<f64> {
    let weight: f64 = field.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("weight `{field}` is not a number"),
    })?;
    if !weight.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("weight `{field}` is not finite"),
        });
    }
    Ok(weight)
}

fn parse_timestamp(field: &str, line: usize) -> Result<i64> {
    field.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("timestamp `{field}` is not an integer"),
    })
}

fn load_csv_rating<R: Read>(input: R) -> Result<Vec<EdgeRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| Error::Parse {
            line: e.position().map(|p| p.line() as usize).unwrap_or(0),
            message: e.to_string(),
        })?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
        if row.iter().all(|f| f.is_empty()) {
            continue;
        }
        if !(3..=4).contains(&row.len()) {
            return Err(Error::Parse {
                line,
                message: format!("expected 3 or 4 fields, found {}", row.len()),
            });
        }
        // tolerate a header row such as `source,target,rating,time`
        if line == 1
            && row[2].chars().any(|c| c.is_ascii_alphabetic())
            && row[2].parse::<f64>().is_err()
        {
            continue;
        }
        if row[0].is_empty() || row[1].is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty node id".into(),
            });
        }
        let timestamp = match row.get(3) {
            Some(t) if !t.is_empty() => Some(parse_timestamp(t, line)?),
            _ => None,
        };
        records.push(EdgeRecord {
            source: row[0].to_string(),
            target: row[1].to_string(),
            weight: parse_weight(&row[2], line)?,
            timestamp,
        });
    }
    Ok(records)
}

fn is_skippable(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#') || t.starts_with('%')
}

fn load_tsv_sign<R: BufRead>(input: R) -> Result<Vec<EdgeRecord>> {
    let mut records = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if is_skippable(&line) {
            continue;
        }
        let trimmed = line.trim_end_matches(['\r', '\n']);
        let fields: Vec<&str> = if trimmed.contains('\t') {
            trimmed.split('\t').map(str::trim).collect()
        } else {
            trimmed.split_whitespace().collect()
        };
        if !(3..=4).contains(&fields.len()) || fields[0].is_empty() || fields[1].is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `source<TAB>target<TAB>sign`, got `{trimmed}`"),
            });
        }
        let timestamp = match fields.get(3) {
            Some(t) => Some(parse_timestamp(t, line_no)?),
            None => None,
        };
        records.push(EdgeRecord {
            source: fields[0].to_string(),
            target: fields[1].to_string(),
            weight: parse_weight(fields[2], line_no)?,
            timestamp,
        });
    }
    Ok(records)
}

fn load_matrix<R: BufRead>(input: R) -> Result<Vec<EdgeRecord>> {
    let mut rows: Vec<(usize, Vec<i64>)> = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if is_skippable(&line) {
            continue;
        }
        let cells = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|c| !c.is_empty())
            .map(|c| {
                c.parse::<i64>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("matrix cell `{c}` is not an integer"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((line_no, cells));
    }
    let n = rows.len();
    if let Some((line, row)) = rows.iter().find(|(_, r)| r.len() != n) {
        return Err(Error::Format(format!(
            "matrix is not square: {n} rows but line {line} has {} columns",
            row.len()
        )));
    }
    let mut records = Vec::new();
    for (sender, (_, row)) in rows.iter().enumerate() {
        for (receiver, &cell) in row.iter().enumerate() {
            if cell != 0 {
                records.push(EdgeRecord::new(
                    sender.to_string(),
                    receiver.to_string(),
                    cell as f64,
                ));
            }
        }
    }
    Ok(records)
}

/// Write the canonical dump: `source<TAB>target<TAB>±1`, LF endings, edges in
/// (source, target) index order.
pub fn write_dump<W: Write>(graph: &SignedDigraph, mut out: W) -> Result<()> {
    for (u, v, s) in graph.edges() {
        writeln!(out, "{}\t{}\t{}", graph.id(u), graph.id(v), s)?;
    }
    Ok(())
}

pub fn dump_tsv(graph: &SignedDigraph) -> String {
    let mut buf = Vec::new();
    write_dump(graph, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ids are UTF-8")
}
