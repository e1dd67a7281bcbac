//! Result files: a kind, a digest of the inputs and a list of tables.
//!
//! Text layout:
//!
//! ```text
//! format: equihom-result 1
//! kind: bbur
//! digest: sha256:…
//!
//! [generators]
//! name    degree    source
//! y1    1*rho[C2]+1    [a1]
//! ```
//!
//! Cells are tab separated; `\t`, `\n` and `\\` are escaped, an empty
//! cell is written `\e` and a leading `[` as `\[`.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::freebasis::Basis;
use crate::specseq::{RingPresentation, TorPage};

pub const RESULT_FORMAT: &str = "equihom-result 1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Text,
}

impl OutputFormat {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "json" => Ok(OutputFormat::Json),
            "text" => Ok(OutputFormat::Text),
            _ => Err(Error::Model(format!("unknown format `{text}` (json|text)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Section {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Section {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn from_basis(name: &str, b: &Basis) -> Self {
        let mut s = Section::new(name, &["label", "stabilizer", "degree", "underlying"]);
        for c in b.cells() {
            s.push(vec![
                c.label.clone(),
                c.stabilizer().to_string(),
                c.degree.to_string(),
                c.underlying_dim().to_string(),
            ]);
        }
        s
    }

    pub fn from_page(name: &str, page: &TorPage) -> Self {
        let mut s = Section::new(name, &["filtration", "degree", "group", "classes"]);
        for (k, e) in &page.entries {
            s.push(vec![
                k.filtration().to_string(),
                k.degree.to_string(),
                e.group.to_string(),
                e.labels.join(", "),
            ]);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultFile {
    pub format: String,
    pub kind: String,
    pub digest: String,
    pub sections: Vec<Section>,
}

pub fn digest(input: &str) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(input.as_bytes())))
}

impl ResultFile {
    /// A result whose digest is taken over a canonical description of the inputs.
    pub fn new(kind: &str, input: &str) -> Self {
        ResultFile {
            format: RESULT_FORMAT.to_string(),
            kind: kind.to_string(),
            digest: digest(input),
            sections: Vec::new(),
        }
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn add_presentation(&mut self, p: &RingPresentation) {
        let mut info = Section::new("presentation", &["key", "value"]);
        info.push(vec!["name".into(), p.name.clone()]);
        info.push(vec!["group".into(), p.group.to_string()]);
        info.push(vec!["coeff".into(), p.coeff.tag().into()]);
        info.push(vec!["truncation".into(), p.truncation.to_string()]);
        info.push(vec!["collapse".into(), p.certificate.clone()]);
        self.sections.push(info);
        let mut gens = Section::new("generators", &["name", "degree", "pretty", "source"]);
        for g in &p.generators {
            gens.push(vec![g.name.clone(), g.degree.to_string(), g.degree.pretty(), g.source.clone()]);
        }
        self.sections.push(gens);
        let mut rels = Section::new("relations", &["relation"]);
        for r in &p.relations {
            rels.push(vec![p.relation_text(r)]);
        }
        self.sections.push(rels);
        let mut omitted = Section::new("beyond truncation", &["square"]);
        for o in &p.omitted {
            omitted.push(vec![o.clone()]);
        }
        self.sections.push(omitted);
    }
}

fn escape(cell: &str) -> String {
    if cell.is_empty() {
        return "\\e".to_string();
    }
    let mut out = String::with_capacity(cell.len());
    if cell.starts_with('[') {
        out.push('\\');
    }
    for ch in cell.chars() {
        match ch {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(cell: &str, line: usize) -> Result<String> {
    let mut out = String::with_capacity(cell.len());
    let mut chars = cell.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('[') => out.push('['),
            Some('e') => {}
            _ => return Err(Error::parse_at(line, 1, "bad escape")),
        }
    }
    Ok(out)
}

fn row_text(cells: &[String]) -> String {
    cells.iter().map(|c| escape(c)).collect::<Vec<_>>().join("\t")
}

pub fn emit_result(r: &ResultFile, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            // going through Value sorts the keys
            let value = serde_json::to_value(r).expect("result files serialize");
            let mut s = serde_json::to_string_pretty(&value).expect("result files serialize");
            s.push('\n');
            s
        }
        OutputFormat::Text => {
            let mut s = format!("format: {}\nkind: {}\ndigest: {}\n", r.format, escape(&r.kind), r.digest);
            for sec in &r.sections {
                s.push_str(&format!("\n[{}]\n{}\n", escape(&sec.name), row_text(&sec.columns)));
                for row in &sec.rows {
                    s.push_str(&row_text(row));
                    s.push('\n');
                }
            }
            s
        }
    }
}

pub fn parse_result(text: &str) -> Result<ResultFile> {
    if text.trim_start().starts_with('{') {
        return serde_json::from_str(text).map_err(|e| Error::parse_at(e.line(), e.column(), e.to_string()));
    }
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
    let mut header = |key: &str| -> Result<String> {
        let (n, l) = lines.next().ok_or_else(|| Error::parse_at(0, 1, format!("missing `{key}:`")))?;
        l.strip_prefix(key)
            .and_then(|r| r.strip_prefix(": "))
            .map(|v| v.to_string())
            .ok_or_else(|| Error::parse_at(n, 1, format!("expected `{key}: …`")))
    };
    let format = header("format")?;
    if format != RESULT_FORMAT {
        return Err(Error::parse_at(1, 9, format!("unsupported format `{format}`")));
    }
    let kind = unescape(&header("kind")?, 2)?;
    let digest = header("digest")?;
    let mut sections: Vec<Section> = Vec::new();
    for (n, line) in lines {
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            sections.push(Section {
                name: unescape(name, n)?,
                columns: Vec::new(),
                rows: Vec::new(),
            });
            continue;
        }
        let sec = sections
            .last_mut()
            .ok_or_else(|| Error::parse_at(n, 1, "row outside a section"))?;
        let cells = line.split('\t').map(|c| unescape(c, n)).collect::<Result<Vec<_>>>()?;
        if sec.columns.is_empty() {
            sec.columns = cells;
        } else if cells.len() != sec.columns.len() {
            return Err(Error::parse_at(
                n,
                1,
                format!("{} cells, section [{}] has {} columns", cells.len(), sec.name, sec.columns.len()),
            ));
        } else {
            sec.rows.push(cells);
        }
    }
    Ok(ResultFile {
        format,
        kind,
        digest,
        sections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultFile {
        let mut r = ResultFile::new("demo", "flags");
        let mut s = Section::new("table", &["a", "b"]);
        s.push(vec!["x\ty".into(), "back\\slash".into()]);
        s.push(vec!["".into(), "2".into()]);
        r.sections.push(s);
        let mut s = Section::new("one", &["c"]);
        s.push(vec!["[a1]".into()]);
        s.push(vec!["".into()]);
        r.sections.push(s);
        r.sections.push(Section::new("empty", &["c"]));
        r
    }

    #[test]
    fn round_trips() {
        let r = sample();
        for f in [OutputFormat::Json, OutputFormat::Text] {
            let text = emit_result(&r, f);
            assert_eq!(parse_result(&text).unwrap(), r);
            assert_eq!(emit_result(&parse_result(&text).unwrap(), f), text);
        }
    }

    #[test]
    fn json_keys_sorted() {
        let text = emit_result(&sample(), OutputFormat::Json);
        let d = text.find("\"digest\"").unwrap();
        let k = text.find("\"kind\"").unwrap();
        let s = text.find("\"sections\"").unwrap();
        assert!(d < k && k < s);
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            digest(""),
            "sha256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn ragged_row_rejected() {
        let text = "format: equihom-result 1\nkind: k\ndigest: d\n\n[t]\na\tb\n1\n";
        assert!(matches!(parse_result(text), Err(Error::Parse(d)) if d[0].line == 7));
    }
}
