use serde_json::json;
use strtop::error::AlgebraError;
use strtop::io;
use strtop::pathmod::{
    compose_path, invert_path_iso, split_retract, transfer_path, verify_path_module,
    verify_path_morphism,
};
use strtop::report::{Check, Report};

use crate::{read_file, write_file, PathmodCmd};

pub fn run(cmd: &PathmodCmd, seed: u64) -> Result<Report, AlgebraError> {
    match cmd {
        PathmodCmd::Verify { file } => {
            let text = read_file(file)?;
            let mut report = Report::new("pathmod verify").with_seed(seed);
            if let Ok(doc) = io::parse_doc::<io::PathMorphismDoc>(&text) {
                let f = doc.decode()?;
                report.extend(verify_path_morphism(&f));
                // the fiber restriction must be a valid A-infinity
                // morphism whenever the path morphism verifies
                let fiber = f.fiber_morphism()?;
                report.extend(
                    strtop::ainfty::verify_morphism(&fiber)
                        .into_iter()
                        .map(|c| c.prefixed("fiber restriction")),
                );
            } else if let Ok(doc) = io::parse_doc::<io::PathModuleDoc>(&text) {
                let m = doc.decode()?;
                report.extend(verify_path_module(&m));
                let fiber = m.fiber_module()?;
                report.extend(
                    strtop::ainfty::verify_ainfty_module(&fiber)
                        .into_iter()
                        .map(|c| c.prefixed("fiber module")),
                );
            } else {
                return Err(AlgebraError::BadInput(
                    "file is not a path module or path morphism document".into(),
                ));
            }
            Ok(report)
        }
        PathmodCmd::Compose { outer, inner, output } => {
            let g = io::parse_doc::<io::PathMorphismDoc>(&read_file(outer)?)?.decode()?;
            let f = io::parse_doc::<io::PathMorphismDoc>(&read_file(inner)?)?.decode()?;
            let gf = compose_path(&g, &f)?;
            let mut report = Report::new("pathmod compose").with_seed(seed);
            report.extend(verify_path_morphism(&gf));
            report.set_data(json!({
                "shift": gf.shift,
                "nonzero_components": gf.etas.keys().collect::<Vec<_>>(),
            }));
            if let Some(path) = output {
                write_file(path, &io::render_doc(&io::PathMorphismDoc::encode(&gf)))?;
            }
            Ok(report)
        }
        PathmodCmd::Invert { file, output } => {
            let f = io::parse_doc::<io::PathMorphismDoc>(&read_file(file)?)?.decode()?;
            let g = invert_path_iso(&f)?;
            let mut report = Report::new("pathmod invert").with_seed(seed);
            let gf = compose_path(&g, &f)?;
            let fg = compose_path(&f, &g)?;
            report.push(if gf.is_identity() {
                Check::pass("inverse o original = identity")
            } else {
                Check::fail("inverse o original = identity", 0, "-", "roundtrip fails")
            });
            report.push(if fg.is_identity() {
                Check::pass("original o inverse = identity")
            } else {
                Check::fail("original o inverse = identity", 0, "-", "roundtrip fails")
            });
            if let Some(path) = output {
                write_file(path, &io::render_doc(&io::PathMorphismDoc::encode(&g)))?;
            }
            Ok(report)
        }
        PathmodCmd::Transfer { file, max_arity, output } => {
            let m = io::parse_doc::<io::PathModuleDoc>(&read_file(file)?)?.decode()?;
            let mut report = Report::new("pathmod transfer").with_seed(seed);
            for check in verify_path_module(&m) {
                if !check.passed {
                    report.push(check);
                    return Ok(report);
                }
            }
            let r = split_retract(&m)?;
            let (t, inc, proj) = transfer_path(&m, &r, *max_arity)?;
            report.extend(
                verify_path_module(&t)
                    .into_iter()
                    .map(|c| c.prefixed("transferred")),
            );
            report.extend(
                verify_path_morphism(&inc)
                    .into_iter()
                    .map(|c| c.prefixed("inclusion")),
            );
            report.extend(
                verify_path_morphism(&proj)
                    .into_iter()
                    .map(|c| c.prefixed("projection")),
            );
            report.set_data(json!({
                "total_dimension": t.total.space.total_dim(),
                "fiber_dimension": t.fiber_space().total_dim(),
                "nonzero_operations": t.ops.keys().collect::<Vec<_>>(),
            }));
            if let Some(path) = output {
                write_file(path, &io::render_doc(&io::PathModuleDoc::encode(&t)))?;
            }
            Ok(report)
        }
    }
}
