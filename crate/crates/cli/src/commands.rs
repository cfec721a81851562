use rayon::prelude::*;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::Value;

use nctrap_core::dirac;
use nctrap_core::fock::run_oracle_with;
use nctrap_core::format::{csv_num, Sig17};
use nctrap_core::planner::sensitivity;
use nctrap_core::SpectrumReport;

use crate::config::{set_path, Format, RunConfig};
use crate::error::{error_tag, Failure};

/// Rendered report plus a failure to raise after it has been written.
pub struct Output {
    pub body: String,
    pub after: Option<Failure>,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, after: None }
    }
}

fn json_line(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

pub fn spectra(cfg: &RunConfig, format: Format) -> Result<Output, Failure> {
    let m = cfg.model()?;
    let report = SpectrumReport::compute(&m.trap, &m.nc, cfg.spectra.n_max, cfg.precision()?, m.units)?;
    Ok(Output::ok(match format {
        Format::Json => json_line(report.to_json()),
        Format::Csv => report.to_csv(),
    }))
}

pub fn verify(cfg: &RunConfig, format: Format) -> Result<Output, Failure> {
    let m = cfg.model()?;
    let o = &cfg.oracle;
    let report = run_oracle_with(&m.trap, &m.nc, o.n_per_mode, o.levels, &o.tolerances)?;
    let body = match format {
        Format::Json => json_line(report.to_json()),
        Format::Csv => {
            let mut s = String::from("check,value,tolerance,pass\n");
            for c in &report.checks {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    c.name,
                    csv_num(c.value),
                    csv_num(c.tolerance),
                    c.pass
                ));
            }
            s
        }
    };
    let failed: Vec<String> = report
        .failed()
        .iter()
        .map(|c| format!("{} = {:e} (tolerance {:e})", c.name, c.value, c.tolerance))
        .collect();
    let after = (!failed.is_empty()).then(|| Failure::Verification(failed.join("; ")));
    Ok(Output { body, after })
}

/// Text unless JSON is requested explicitly.
pub fn dirac(format: Option<Format>) -> Result<Output, Failure> {
    let report = dirac::replay().map_err(|e| Failure::Regression(e.to_string()))?;
    let body = match format {
        None => report.to_text(),
        Some(Format::Json) => json_line(report.to_json()),
        Some(Format::Csv) => return Err(Failure::Config("dirac output is text or json".into())),
    };
    let failed: Vec<String> = report.checks().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
    let after = (!failed.is_empty()).then(|| Failure::Regression(format!("mismatched: {}", failed.join(", "))));
    Ok(Output { body, after })
}

pub fn sensitivity_cmd(cfg: &RunConfig, format: Format) -> Result<Output, Failure> {
    let (inputs, bounds) = cfg.sensitivity_inputs()?;
    let s = &cfg.sensitivity;
    let report = sensitivity(&inputs, &bounds, &s.fields, &s.rate)?;
    Ok(Output::ok(match format {
        Format::Json => json_line(report.to_json()),
        Format::Csv => report.to_csv(),
    }))
}

pub struct SweepRow {
    pub value: f64,
    pub result: Result<Vec<f64>, Failure>,
}

/// Evaluates every sweep point against `base` with the swept path replaced.
/// Rows are computed in parallel and returned in sweep order.
pub fn sweep_rows(base: &Value, cfg: &RunConfig) -> Result<(String, Vec<SweepRow>), Failure> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Failure::Config("sweep section missing".into()))?;
    let values = sweep.values()?;
    let precision = cfg.precision()?;
    let eval = |v: f64| -> Result<Vec<f64>, Failure> {
        let mut doc = base.clone();
        let num = serde_json::Number::from_f64(v).ok_or_else(|| Failure::Config(format!("bad sweep value {v}")))?;
        set_path(&mut doc, &sweep.path, Value::Number(num))?;
        let row_cfg = RunConfig::from_value(&doc)?;
        let m = row_cfg.model()?;
        let r = SpectrumReport::compute(&m.trap, &m.nc, row_cfg.spectra.n_max, precision, m.units)?;
        Ok(r.scalars().into_iter().map(|(_, x)| x).collect())
    };
    let rows = values
        .par_iter()
        .map(|&value| SweepRow {
            value,
            result: eval(value),
        })
        .collect();
    Ok((sweep.path.clone(), rows))
}

struct JsonRow<'a>(&'a SweepRow);

impl Serialize for JsonRow<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let row = self.0;
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("value", &Sig17(row.value))?;
        match &row.result {
            Ok(xs) => {
                map.serialize_entry("status", "ok")?;
                for (name, x) in SpectrumReport::scalar_names().into_iter().zip(xs) {
                    map.serialize_entry(name, &Sig17(*x))?;
                }
            }
            Err(e) => {
                map.serialize_entry("status", error_tag(e))?;
                map.serialize_entry("error", &e.to_string())?;
            }
        }
        map.end()
    }
}

#[derive(Serialize)]
struct JsonSweep<'a> {
    path: &'a str,
    rows: Vec<JsonRow<'a>>,
}

pub fn sweep(base: &Value, cfg: &RunConfig, format: Format) -> Result<Output, Failure> {
    let (path, rows) = sweep_rows(base, cfg)?;
    let body = match format {
        Format::Json => {
            let doc = JsonSweep {
                path: &path,
                rows: rows.iter().map(JsonRow).collect(),
            };
            json_line(serde_json::to_string_pretty(&doc).map_err(|e| Failure::Io(e.to_string()))?)
        }
        Format::Csv => {
            let names = SpectrumReport::scalar_names();
            let mut s = format!("{path},status,{}\n", names.join(","));
            for row in &rows {
                let mut cells = vec![csv_num(row.value)];
                match &row.result {
                    Ok(xs) => {
                        cells.push("ok".into());
                        cells.extend(xs.iter().map(|&x| csv_num(x)));
                    }
                    Err(e) => {
                        cells.push(error_tag(e).into());
                        cells.extend(names.iter().map(|_| String::new()));
                    }
                }
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            s
        }
    };
    Ok(Output::ok(body))
}
