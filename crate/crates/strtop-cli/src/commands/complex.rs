use serde_json::json;
use strtop::complex::{homology, retract_to_homology, verify_complex};
use strtop::error::AlgebraError;
use strtop::io;
use strtop::report::Report;

use crate::{read_file, ComplexCmd};

pub fn run(cmd: &ComplexCmd, seed: u64) -> Result<Report, AlgebraError> {
    match cmd {
        ComplexCmd::Verify { file } => {
            let c = io::parse_doc::<io::ComplexDoc>(&read_file(file)?)?.decode()?;
            let mut report = Report::new("complex verify").with_seed(seed);
            report.push(verify_complex(&c));
            Ok(report)
        }
        ComplexCmd::Homology { file } => {
            let c = io::parse_doc::<io::ComplexDoc>(&read_file(file)?)?.decode()?;
            let mut report = Report::new("complex homology").with_seed(seed);
            let check = verify_complex(&c);
            let valid = check.passed;
            report.push(check);
            if valid {
                let h = homology(&c);
                let dims: serde_json::Map<String, serde_json::Value> = h
                    .space
                    .degrees()
                    .map(|q| (q.to_string(), json!(h.space.dim(q))))
                    .collect();
                let reps: serde_json::Map<String, serde_json::Value> = h
                    .representatives
                    .iter()
                    .map(|(&(q, i), rep)| {
                        (format!("{}", h.space.label(q, i)), json!(rep.to_string()))
                    })
                    .collect();
                report.set_data(json!({
                    "dimensions": dims,
                    "representatives": reps,
                }));
            }
            Ok(report)
        }
        ComplexCmd::Retract { file } => {
            let c = io::parse_doc::<io::ComplexDoc>(&read_file(file)?)?.decode()?;
            let mut report = Report::new("complex retract").with_seed(seed);
            let check = verify_complex(&c);
            let valid = check.passed;
            report.push(check);
            if valid {
                let r = retract_to_homology(&c);
                report.extend(r.verify());
                let dims: serde_json::Map<String, serde_json::Value> = r
                    .small
                    .space
                    .degrees()
                    .map(|q| (q.to_string(), json!(r.small.space.dim(q))))
                    .collect();
                report.set_data(json!({ "homology_dimensions": dims }));
            }
            Ok(report)
        }
    }
}
