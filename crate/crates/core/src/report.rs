//! Certificates, run reports, and their JSON / text serializations.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::filters::{GateVerdict, Outcome};
use crate::group_data::FamilyKind;
use crate::tables::TableCheck;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    NoDtg,
    Undetermined,
}

/// Gate records for one `(case, n, X)` triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub case: FamilyKind,
    pub n: u32,
    pub q: String,
    pub x_order: u32,
    pub x_graph: bool,
    pub gates: Vec<GateVerdict>,
    pub conclusion: Conclusion,
    pub assumptions: Vec<String>,
}

impl Certificate {
    pub fn is_no_dtg(&self) -> bool {
        self.conclusion == Conclusion::NoDtg
    }

    pub fn gate(&self, name: &str) -> Option<&GateVerdict> {
        self.gates.iter().find(|g| g.name == name)
    }

    pub fn gate_names(&self) -> Vec<&str> {
        self.gates.iter().map(|g| g.name.as_str()).collect()
    }

    pub fn count(&self, outcome: Outcome) -> usize {
        self.gates.iter().filter(|g| g.outcome == outcome).count()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub certificates: usize,
    pub no_dtg: usize,
    pub undetermined: usize,
    pub with_assumed_external: usize,
}

impl Summary {
    pub fn of(certs: &[Certificate]) -> Self {
        Summary {
            certificates: certs.len(),
            no_dtg: certs.iter().filter(|c| c.is_no_dtg()).count(),
            undetermined: certs.iter().filter(|c| !c.is_no_dtg()).count(),
            with_assumed_external: certs
                .iter()
                .filter(|c| c.count(Outcome::AssumedExternal) > 0)
                .count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool_version: String,
    pub case: FamilyKind,
    pub n_min: u32,
    pub n_max: u32,
    pub strict: bool,
    pub certificates: Vec<Certificate>,
    pub summary: Summary,
}

impl RunReport {
    pub fn new(case: FamilyKind, n_min: u32, n_max: u32, strict: bool, certificates: Vec<Certificate>) -> Self {
        RunReport {
            tool_version: TOOL_VERSION.to_string(),
            case,
            n_min,
            n_max,
            strict,
            summary: Summary::of(&certificates),
            certificates,
        }
    }

    pub fn all_no_dtg(&self) -> bool {
        self.summary.undetermined == 0
    }
}

/// One line of `verify-tables` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub n: u32,
    pub param: String,
    pub q: String,
    pub total: String,
    pub index: String,
    pub residual: String,
    pub suborbit_count: String,
    pub non_dividing_rows: Vec<String>,
    pub regular_rows: Vec<String>,
    pub ok: bool,
}

impl From<&TableCheck> for TableEntry {
    fn from(c: &TableCheck) -> Self {
        TableEntry {
            n: c.params.n,
            param: c.params.param().to_string(),
            q: c.params.q.to_string(),
            total: c.mass.total.to_string(),
            index: c.mass.index.to_string(),
            residual: c.mass.residual.to_string(),
            suborbit_count: c.suborbit_count.to_string(),
            non_dividing_rows: c.non_dividing_rows.clone(),
            regular_rows: c.regular_rows.clone(),
            ok: c.ok(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub tool_version: String,
    pub case: FamilyKind,
    pub entries: Vec<TableEntry>,
    pub failures: Vec<String>,
    /// `None` when the symbolic identity was not requested.
    pub symbolic: Option<SymbolicCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicCheck {
    pub variable: String,
    pub mass: String,
    pub index: String,
    pub holds: bool,
}

impl TableReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
            && self.entries.iter().all(|e| e.ok)
            && self.symbolic.as_ref().is_none_or(|s| s.holds)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(crate::Error::Usage(format!("unknown format {s:?}"))),
        }
    }
}

pub fn emit(report: &RunReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => to_json(report),
        Format::Text => render_text(report).into_bytes(),
    }
}

pub fn emit_tables(report: &TableReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => to_json(report),
        Format::Text => render_tables(report).into_bytes(),
    }
}

fn to_json<T: Serialize>(v: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("report types serialize infallibly");
    out.push(b'\n');
    out
}

/// The witness shown next to the verdict on the `gate:` line.
fn headline(g: &GateVerdict) -> Option<(&'static str, &str)> {
    if let Some(step) = g.witness("failed_step") {
        return Some(("failed_step", step));
    }
    let key = match g.name.as_str() {
        crate::filters::MULTIPLICITY_FREE => "q_power_of_3",
        crate::filters::SIGMA_IN_X => "distinct_lengths",
        crate::filters::INVOLUTION => "order4",
        crate::filters::BCN_SMALL_CASE => "diameter_lower_bound",
        crate::filters::BHK => "inequality",
        crate::filters::KERNEL_CHAIN => "primes",
        _ => return None,
    };
    g.witness(key).map(|v| (key, v))
}

pub fn render_text(report: &RunReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "g2dtg {}  case: {}  n: {}..{}{}",
        report.tool_version,
        report.case,
        report.n_min,
        report.n_max,
        if report.strict { "  (strict)" } else { "" }
    );
    for c in &report.certificates {
        let _ = writeln!(
            s,
            "\ncertificate: {} n={} q={} |X|={}{}",
            c.case,
            c.n,
            c.q,
            c.x_order,
            if c.x_graph { " (graph)" } else { "" }
        );
        for g in &c.gates {
            let _ = write!(s, "gate: {}  verdict: {}", g.name, g.outcome);
            if let Some((k, v)) = headline(g) {
                let _ = write!(s, "  {k}: {v}");
            }
            s.push('\n');
            let _ = writeln!(s, "    anchor: {}", g.anchor);
            for (k, v) in &g.witnesses {
                let _ = writeln!(s, "    {k} = {v}");
            }
        }
        for a in &c.assumptions {
            let _ = writeln!(s, "assumes: {a}");
        }
        let _ = writeln!(
            s,
            "conclusion: {}",
            match c.conclusion {
                Conclusion::NoDtg => "no_dtg",
                Conclusion::Undetermined => "undetermined",
            }
        );
    }
    let m = &report.summary;
    let _ = writeln!(
        s,
        "\nsummary: {} certificates, {} no_dtg, {} undetermined, {} with assumed_external",
        m.certificates, m.no_dtg, m.undetermined, m.with_assumed_external
    );
    s
}

fn render_tables(report: &TableReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "g2dtg {}  verify-tables  case: {}", report.tool_version, report.case);
    for e in &report.entries {
        let _ = writeln!(
            s,
            "{} {}={}{} total={} index={} residual={} suborbits={}{}",
            if e.ok { "ok  " } else { "FAIL" },
            report.case.param_name(),
            e.param,
            if e.param == e.q { String::new() } else { format!(" q={}", e.q) },
            e.total,
            e.index,
            e.residual,
            e.suborbit_count,
            if e.regular_rows.is_empty() {
                String::new()
            } else {
                format!(" regular: {}", e.regular_rows.join(", "))
            }
        );
        if !e.non_dividing_rows.is_empty() {
            let _ = writeln!(s, "    lengths not dividing |H|: {}", e.non_dividing_rows.join(", "));
        }
    }
    if let Some(sym) = &report.symbolic {
        let _ = writeln!(
            s,
            "symbolic mass identity in {}: {}\n    mass  = {}\n    index = {}",
            sym.variable,
            if sym.holds { "holds" } else { "FAILS" },
            sym.mass,
            sym.index
        );
    }
    for f in &report.failures {
        let _ = writeln!(s, "error: {f}");
    }
    s
}
