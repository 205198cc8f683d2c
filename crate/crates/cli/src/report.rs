use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Serialize)]
pub struct VerdictOut {
    pub axiom: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instances: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_skipped: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct AuditOut {
    pub space: String,
    pub params: String,
    pub stems: u64,
    pub max_depth: usize,
    pub max_len: usize,
    pub a6: bool,
    pub passed: bool,
    pub verdicts: Vec<VerdictOut>,
    #[serde(skip)]
    pub text: String,
}

#[derive(Debug, Serialize)]
pub struct GalvinOut {
    pub space: String,
    pub params: String,
    pub base: String,
    pub length_bound: usize,
    pub members: usize,
    pub outcome: &'static str,
    pub stem: String,
    pub stem_length: usize,
    pub hits: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocking: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub nodes: u64,
    pub certificate: String,
}

#[derive(Debug, Serialize)]
pub struct LevelOut {
    pub level: usize,
    pub keys: usize,
    pub configs: usize,
    pub checked: u64,
    pub result: &'static str,
}

#[derive(Debug, Serialize)]
pub struct RamseyOut {
    pub instance: String,
    pub mode: &'static str,
    pub outcome: &'static str,
    pub value: usize,
    pub checked: u64,
    pub levels: Vec<LevelOut>,
    /// `None` when verification was not requested.
    pub verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay: Option<String>,
    pub certificate: String,
}

#[derive(Debug, Serialize)]
pub struct VerifyOut {
    pub kind: &'static str,
    pub accepted: bool,
    pub outcome: String,
    pub detail: String,
}

#[derive(Debug, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Report {
    Audit(AuditOut),
    Galvin(GalvinOut),
    Ramsey(RamseyOut),
    Verify(VerifyOut),
}

#[derive(Serialize)]
struct Timed<'a> {
    #[serde(flatten)]
    report: &'a Report,
    seconds: f64,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    instance: &'a str,
    outcome: &'a str,
    value: usize,
    count_checked: u64,
    seconds: f64,
}

impl Report {
    /// `(instance, outcome, value, count_checked)` for the CSV row.
    fn row(&self) -> (String, String, usize, u64) {
        match self {
            Report::Audit(a) => {
                let total = a.verdicts.iter().filter_map(|v| v.instances).sum();
                let passed = a.verdicts.iter().filter(|v| v.status == "bounded-pass").count();
                let outcome = if a.passed { "bounded-pass" } else { "counterexample" };
                (format!("audit {} {}", a.space, a.params), outcome.into(), passed, total)
            }
            Report::Galvin(g) => (format!("galvin {} {}", g.space, g.params), g.outcome.into(), g.stem_length, g.nodes),
            Report::Ramsey(r) => (r.instance.clone(), r.outcome.into(), r.value, r.checked),
            Report::Verify(v) => (format!("verify {}", v.kind), v.outcome.clone(), usize::from(v.accepted), 0),
        }
    }

    pub fn render(&self, format: Format, seconds: f64) -> Result<String, String> {
        match format {
            Format::Text => Ok(match self {
                Report::Audit(a) => a.text.clone(),
                Report::Galvin(g) => g.certificate.clone(),
                Report::Ramsey(r) => r.certificate.clone(),
                Report::Verify(v) => {
                    format!("{} {} {}\n", if v.accepted { "accepted" } else { "rejected" }, v.outcome, v.detail)
                }
            }),
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&Timed { report: self, seconds }).map_err(|e| e.to_string())?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let (instance, outcome, value, count_checked) = self.row();
                let mut w = csv::Writer::from_writer(Vec::new());
                w.serialize(CsvRow { instance: &instance, outcome: &outcome, value, count_checked, seconds })
                    .map_err(|e| e.to_string())?;
                String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())
            }
        }
    }
}
