use std::collections::BTreeMap;

use qserre::suites::RunConfig;
use qserre::Report;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub key: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub title: String,
    pub entries: Vec<Entry>,
}

impl Section {
    pub fn new(title: impl Into<String>) -> Self {
        Section {
            title: title.into(),
            entries: Vec::new(),
        }
    }

    pub fn add(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.push(Entry {
            key: key.into(),
            value: value.into(),
        });
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Document {
    pub command: String,
    pub config: RunConfig,
    pub sections: Vec<Section>,
    pub reports: Vec<Report>,
    pub data: BTreeMap<String, Value>,
    pub passed: bool,
}

impl Document {
    pub fn new(command: &str, config: RunConfig) -> Self {
        Document {
            command: command.to_string(),
            config,
            sections: Vec::new(),
            reports: Vec::new(),
            data: BTreeMap::new(),
            passed: true,
        }
    }

    pub fn report(&mut self, r: Report) {
        self.passed &= r.passed;
        self.reports.push(r);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

pub fn render(doc: &Document, format: Format) -> Result<String, String> {
    match format {
        Format::Json => serde_json::to_string_pretty(doc)
            .map(|s| s + "\n")
            .map_err(|e| e.to_string()),
        Format::Csv => render_csv(doc),
        Format::Markdown => Ok(render_markdown(doc)),
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn render_csv(doc: &Document) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| e.to_string();
    w.write_record(["kind", "group", "key", "value", "detail"]).map_err(err)?;
    for s in &doc.sections {
        for e in &s.entries {
            w.write_record(["value", &s.title, &e.key, &e.value, ""]).map_err(err)?;
        }
    }
    for r in &doc.reports {
        for c in &r.checks {
            w.write_record(["check", &r.name, &c.label, verdict(c.passed), &c.detail])
                .map_err(err)?;
        }
    }
    w.write_record(["overall", &doc.command, "", verdict(doc.passed), ""]).map_err(err)?;
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

fn render_markdown(doc: &Document) -> String {
    let c = &doc.config;
    let suites: Vec<&str> = c.suites.iter().map(|s| s.name()).collect();
    let mut out = format!(
        "# qserre {}\n\nn = {}, order = {}, worder = {}, tol = {:e}, suites = {}\n",
        doc.command,
        c.n,
        c.order,
        c.worder,
        c.tol,
        suites.join(",")
    );
    for s in &doc.sections {
        out += &format!("\n## {}\n\n| key | value |\n|---|---|\n", s.title);
        for e in &s.entries {
            out += &format!("| {} | {} |\n", cell(&e.key), cell(&e.value));
        }
    }
    for r in &doc.reports {
        out += &format!(
            "\n## Checks: {} ({})\n\n| check | result | detail |\n|---|---|---|\n",
            r.name,
            verdict(r.passed)
        );
        for ch in &r.checks {
            out += &format!("| {} | {} | {} |\n", cell(&ch.label), verdict(ch.passed), cell(&ch.detail));
        }
    }
    out += &format!("\nOverall: {}\n", verdict(doc.passed));
    out
}
