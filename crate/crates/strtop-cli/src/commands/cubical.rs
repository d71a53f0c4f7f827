use serde_json::json;
use strtop::cubical::{boundary, serre_diagonal, CubicalChain};
use strtop::error::AlgebraError;
use strtop::io;
use strtop::report::{Check, Report};
use strtop::scalar::format_scalar;

use crate::{read_file, CubicalCmd};

pub fn run(cmd: &CubicalCmd, seed: u64) -> Result<Report, AlgebraError> {
    match cmd {
        CubicalCmd::Verify { file } => {
            let set = io::parse_doc::<io::CubicalSetDoc>(&read_file(file)?)?.decode()?;
            let mut report = Report::new("cubical verify").with_seed(seed);
            report.extend(set.verify());
            match set.chain_complex() {
                Ok(_) => report.push(Check::pass("normalized chains satisfy d\u{b2} = 0")),
                Err(e) => report.push(Check::fail(
                    "normalized chains satisfy d\u{b2} = 0",
                    0,
                    "-",
                    e.to_string(),
                )),
            }
            Ok(report)
        }
        CubicalCmd::Diagonal { file, dim, cube } => {
            let set = io::parse_doc::<io::CubicalSetDoc>(&read_file(file)?)?.decode()?;
            let mut report = Report::new("cubical diagonal").with_seed(seed);
            let cubes = set
                .cubes
                .get(dim)
                .map(|cs| cs.iter().filter(|c| !c.degenerate).collect::<Vec<_>>())
                .unwrap_or_default();
            let selected: Vec<_> = match cube {
                Some(label) => {
                    let found: Vec<_> =
                        cubes.iter().filter(|c| &c.label == label).copied().collect();
                    if found.is_empty() {
                        return Err(AlgebraError::UnknownLabel {
                            degree: *dim as i64,
                            label: label.clone(),
                        });
                    }
                    found
                }
                None => cubes,
            };
            let mut rows = serde_json::Map::new();
            for c in selected {
                let chain = CubicalChain::generator(&set, *dim, &c.label)?;
                let d = serre_diagonal(&set, &chain);
                let terms: Vec<serde_json::Value> = d
                    .terms
                    .iter()
                    .map(|(((da, la), (db, lb)), coeff)| {
                        json!({
                            "left": {"dim": da, "cube": la},
                            "right": {"dim": db, "cube": lb},
                            "coeff": format_scalar(coeff),
                        })
                    })
                    .collect();
                rows.insert(c.label.clone(), json!(terms));
            }
            report.set_data(json!({ "diagonal": rows }));
            Ok(report)
        }
        CubicalCmd::Boundary { file, dim, cube } => {
            let set = io::parse_doc::<io::CubicalSetDoc>(&read_file(file)?)?.decode()?;
            let mut report = Report::new("cubical boundary").with_seed(seed);
            if *dim == 0 {
                return Err(AlgebraError::BadInput(
                    "boundary needs dimension at least 1".into(),
                ));
            }
            let cubes = set
                .cubes
                .get(dim)
                .map(|cs| cs.iter().filter(|c| !c.degenerate).collect::<Vec<_>>())
                .unwrap_or_default();
            let selected: Vec<_> = match cube {
                Some(label) => {
                    let found: Vec<_> =
                        cubes.iter().filter(|c| &c.label == label).copied().collect();
                    if found.is_empty() {
                        return Err(AlgebraError::UnknownLabel {
                            degree: *dim as i64,
                            label: label.clone(),
                        });
                    }
                    found
                }
                None => cubes,
            };
            let mut rows = serde_json::Map::new();
            for c in selected {
                let chain = CubicalChain::generator(&set, *dim, &c.label)?;
                let b = boundary(&set, &chain);
                let terms: Vec<serde_json::Value> = b
                    .terms
                    .iter()
                    .map(|(label, coeff)| json!({"cube": label, "coeff": format_scalar(coeff)}))
                    .collect();
                rows.insert(c.label.clone(), json!(terms));
            }
            report.set_data(json!({ "boundary": rows }));
            Ok(report)
        }
    }
}
