//! Rendering of the bounds table as text, JSON or CSV.

use crate::formats::TableRowDoc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

fn interval(lower: usize, upper: usize) -> String {
    if lower == upper {
        lower.to_string()
    } else {
        format!("[{lower},{upper}]")
    }
}

fn cells(r: &TableRowDoc) -> [String; 9] {
    [
        r.q.n.to_string(),
        interval(r.q.lower, r.q.upper),
        r.q.exact.to_string(),
        r.q.witness_label.clone().unwrap_or_else(|| "-".into()),
        r.q.provenance.join("|"),
        interval(r.q_so.lower, r.q_so.upper),
        interval(r.q_u.lower, r.q_u.upper),
        interval(r.m_r.0, r.m_r.1),
        interval(r.m_c.0, r.m_c.1),
    ]
}

const HEADER: [&str; 9] = ["n", "q", "exact", "witness", "rules", "q_SO", "q_U", "m_R", "m_C"];

pub fn render(rows: &[TableRowDoc], format: Format) -> String {
    match format {
        Format::Json => crate::io::to_json_pretty(&rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(HEADER).expect("in-memory write");
            for r in rows {
                w.write_record(cells(r)).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        Format::Text => {
            let body: Vec<[String; 9]> = rows.iter().map(cells).collect();
            let mut widths = HEADER.map(str::len);
            for row in &body {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.len());
                }
            }
            let line = |cols: Vec<&str>| {
                let padded: Vec<String> = cols.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
                padded.join("  ").trim_end().to_string() + "\n"
            };
            let mut out = line(HEADER.to_vec());
            for row in &body {
                out += &line(row.iter().map(String::as_str).collect());
            }
            out
        }
    }
}
