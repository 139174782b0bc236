//! Rendering result records as CSV, JSON or an aligned text table.

use serde::{Deserialize, Serialize};

use crate::bounds::StageReport;
use crate::model::ModelKind;

/// Output format for [`render_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

/// One record of a batch: a stage report, or an instance that failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RunRecord {
    Stage(StageReport),
    Failed { instance: String, error: String },
    /// A model written to disk instead of solved.
    Exported { instance: String, model: ModelKind, path: String },
}

impl RunRecord {
    pub fn instance(&self) -> &str {
        match self {
            RunRecord::Stage(r) => &r.instance,
            RunRecord::Failed { instance, .. } | RunRecord::Exported { instance, .. } => instance,
        }
    }

    /// Sort key: instance name, then stage and model, failures last.
    fn key(&self) -> (String, u8, &'static str) {
        match self {
            RunRecord::Stage(r) => (r.instance.clone(), r.stage, r.model_used.as_str()),
            RunRecord::Exported { instance, model, .. } => (instance.clone(), 0, model.as_str()),
            RunRecord::Failed { instance, .. } => (instance.clone(), u8::MAX, ""),
        }
    }
}

/// Stable sort applied before rendering a batch.
pub fn sort_records(records: &mut [RunRecord]) {
    records.sort_by_key(RunRecord::key);
}

pub const CSV_HEADER: [&str; 14] = [
    "instance", "n", "m", "lb", "ub", "beta0", "lb_star", "time_s", "mode", "stage", "model", "chi_eq_proved",
    "lb_trace", "remark",
];

const ABSENT: &str = "-";

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| ABSENT.to_string(), |x| x.to_string())
}

fn remark(r: &StageReport) -> String {
    match (r.stage, r.chi_eq_proved) {
        (_, Some(p)) => format!("step {}, χ_eq = {p}", r.stage),
        (stage, None) => format!("step {stage}"),
    }
}

fn fields(record: &RunRecord) -> Vec<String> {
    match record {
        RunRecord::Stage(r) => vec![
            r.instance.clone(),
            r.n.to_string(),
            r.m.to_string(),
            r.lb_in.to_string(),
            r.ub_in.to_string(),
            opt(r.beta0),
            r.lb_star.to_string(),
            format!("{:.2}", r.time_s),
            opt(r.mode_marker.map(|m| m.to_string())),
            r.stage.to_string(),
            r.model_used.to_string(),
            opt(r.chi_eq_proved),
            r.lb_trace.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
            remark(r),
        ],
        RunRecord::Failed { instance, error } => {
            let mut row = vec![ABSENT.to_string(); CSV_HEADER.len()];
            row[0] = instance.clone();
            row[13] = format!("error: {error}");
            row
        }
        RunRecord::Exported { instance, model, path } => {
            let mut row = vec![ABSENT.to_string(); CSV_HEADER.len()];
            row[0] = instance.clone();
            row[10] = model.to_string();
            row[13] = format!("exported to {path}");
            row
        }
    }
}

/// Renders records. An empty slice gives header-only CSV, `[]` JSON, or a
/// header-only table.
pub fn render_report(records: &[RunRecord], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER).expect("writing to memory");
            for r in records {
                w.write_record(fields(r)).expect("writing to memory");
            }
            String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 fields")
        }
        Format::Json => serde_json::to_string_pretty(records).expect("records serialize") + "\n",
        Format::Table => render_table(records),
    }
}

fn render_table(records: &[RunRecord]) -> String {
    let header = ["Instance", "n", "m", "LB", "UB", "β₀", "LB*", "time(s)", "mode", "model", "remark"];
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            let f = fields(r);
            // instance n m lb ub beta0 lb_star time mode, model, remark
            let mut row: Vec<String> = f[..9].to_vec();
            row.push(f[10].clone());
            row.push(f[13].clone());
            row
        })
        .collect();
    let width = |i: usize| {
        rows.iter().map(|r| r[i].chars().count()).chain([header[i].chars().count()]).max().unwrap_or(0)
    };
    let widths: Vec<usize> = (0..header.len()).map(width).collect();
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (i, c) in cells.iter().enumerate() {
            let pad = widths[i] - c.chars().count();
            if i == 0 || i == cells.len() - 1 {
                s.push_str(c);
                s.extend(std::iter::repeat_n(' ', pad));
            } else {
                s.extend(std::iter::repeat_n(' ', pad));
                s.push_str(c);
            }
            s.push_str("  ");
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(&header.map(String::from));
    for r in &rows {
        out.push_str(&line(r));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::ModeMarker;

    fn r125() -> StageReport {
        StageReport {
            instance: "R125.1".into(),
            n: 125,
            m: 209,
            lb_in: 3,
            ub_in: 5,
            model_used: ModelKind::M2,
            beta0: Some(30),
            lb_star: 5,
            mode_marker: Some(ModeMarker::Integer),
            time_s: 0.04,
            stage: 1,
            chi_eq_proved: None,
            lb_trace: vec![],
            iteration_times: vec![],
        }
    }

    #[test]
    fn csv_row_layout() {
        let text = render_report(&[RunRecord::Stage(r125())], Format::Csv);
        let row = text.lines().nth(1).unwrap();
        assert!(row.starts_with("R125.1,125,209,3,5,30,5,"));
        assert!(row.contains(",i,1,M2,"));
    }

    #[test]
    fn empty_lists() {
        assert_eq!(render_report(&[], Format::Csv), CSV_HEADER.join(",") + "\n");
        assert_eq!(render_report(&[], Format::Json).trim(), "[]");
        assert_eq!(render_report(&[], Format::Table).lines().count(), 1);
    }

    #[test]
    fn remark_and_absent_values() {
        let mut r = r125();
        r.stage = 2;
        r.chi_eq_proved = Some(8);
        r.beta0 = None;
        let table = render_report(&[RunRecord::Stage(r.clone())], Format::Table);
        assert!(table.contains("step 2, χ_eq = 8"));
        let csv = render_report(&[RunRecord::Stage(r)], Format::Csv);
        assert!(csv.lines().nth(1).unwrap().starts_with("R125.1,125,209,3,5,-,"));
    }

    #[test]
    fn csv_and_json_agree() {
        let records = vec![RunRecord::Stage(r125()), RunRecord::Failed { instance: "bad".into(), error: "line 2".into() }];
        let json: Vec<RunRecord> = serde_json::from_str(&render_report(&records, Format::Json)).unwrap();
        assert_eq!(json, records);
        let csv = render_report(&records, Format::Csv);
        let mut rdr = csv::Reader::from_reader(csv.as_bytes());
        let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
        assert_eq!(&rows[0][5], "30");
        assert_eq!(&rows[1][13], "error: line 2");
    }

    #[test]
    fn stable_sort() {
        let mut a = r125();
        a.stage = 2;
        let mut records = vec![
            RunRecord::Failed { instance: "R125.1".into(), error: "x".into() },
            RunRecord::Stage(a),
            RunRecord::Stage(r125()),
        ];
        sort_records(&mut records);
        let stages: Vec<_> = records.iter().map(|r| r.key().1).collect();
        assert_eq!(stages, vec![1, 2, u8::MAX]);
    }
}
