use std::io::{self, Write};

use anyhow::{anyhow, bail, Result};
use serde::{Deserialize, Serialize};

pub const CSV_HEADER: [&str; 11] = [
    "tau", "xi", "x0", "x1", "x2", "x3", "u0", "u1", "u2", "u3", "norm_err",
];

/// One trajectory sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub tau: f64,
    pub xi: f64,
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub u0: f64,
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
    pub norm_err: f64,
}

impl Record {
    pub fn values(&self) -> [f64; 11] {
        [
            self.tau,
            self.xi,
            self.x0,
            self.x1,
            self.x2,
            self.x3,
            self.u0,
            self.u1,
            self.u2,
            self.u3,
            self.norm_err,
        ]
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub fn from_values(v: [f64; 11]) -> Self {
        Self {
            tau: v[0],
            xi: v[1],
            x0: v[2],
            x1: v[3],
            x2: v[4],
            x3: v[5],
            u0: v[6],
            u1: v[7],
            u2: v[8],
            u3: v[9],
            norm_err: v[10],
        }
    }
}

/// Header row plus one line per record, 17 significant digits per value.
pub fn write_csv<W: Write>(mut w: W, records: &[Record]) -> io::Result<()> {
    writeln!(w, "{}", CSV_HEADER.join(","))?;
    for r in records {
        let line: Vec<String> = r.values().iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn write_json<W: Write>(mut w: W, records: &[Record]) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, records)?;
    writeln!(w)
}

#[cfg_attr(not(test), allow(dead_code))]
pub fn parse_csv(text: &str) -> Result<Vec<Record>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| anyhow!("empty CSV"))?;
    if header.split(',').map(str::trim).ne(CSV_HEADER) {
        bail!("unexpected CSV header `{header}`");
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(n, line)| {
            let vals = line
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| anyhow!("row {}: {e}", n + 1))?;
            let arr: [f64; 11] = vals
                .try_into()
                .map_err(|v: Vec<f64>| anyhow!("row {}: {} columns", n + 1, v.len()))?;
            Ok(Record::from_values(arr))
        })
        .collect()
}
