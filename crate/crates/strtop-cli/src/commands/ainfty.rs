use std::sync::Arc;

use serde_json::json;
use strtop::ainfty::{
    compose_morphisms, homotopy_transfer, invert_infty_iso, verify_ainfty_module, verify_dga,
    verify_morphism, verify_morphism_strict_form, verify_strict_module,
};
use strtop::complex::retract_to_homology;
use strtop::error::AlgebraError;
use strtop::io;
use strtop::report::{Check, Report};

use crate::{read_file, write_file, AinftyCmd};

/// Auto-detected content of an `ainfty verify` input.
enum Loaded {
    Morphism(strtop::ainfty::AInftyMorphism),
    Module(strtop::ainfty::AInftyModule),
    Strict(strtop::ainfty::StrictModule),
    Algebra(Arc<strtop::ainfty::DGAlgebra>),
}

fn load_any(text: &str) -> Result<Loaded, AlgebraError> {
    if let Ok(doc) = io::parse_doc::<io::MorphismDoc>(text) {
        return Ok(Loaded::Morphism(doc.decode()?));
    }
    if let Ok(doc) = io::parse_doc::<io::AInftyModuleDoc>(text) {
        return Ok(Loaded::Module(doc.decode()?));
    }
    if let Ok(doc) = io::parse_doc::<io::ModuleDoc>(text) {
        return Ok(Loaded::Strict(doc.decode()?));
    }
    if let Ok(doc) = io::parse_doc::<io::DgaDoc>(text) {
        return Ok(Loaded::Algebra(doc.decode()?));
    }
    Err(AlgebraError::BadInput(
        "file is not a morphism, module or algebra document".into(),
    ))
}

pub fn run(cmd: &AinftyCmd, seed: u64) -> Result<Report, AlgebraError> {
    match cmd {
        AinftyCmd::Verify { file, max_arity } => {
            let mut report = Report::new("ainfty verify").with_seed(seed);
            match load_any(&read_file(file)?)? {
                Loaded::Morphism(mut f) => {
                    if let Some(k) = max_arity {
                        f.arity_bound = f.arity_bound.min(*k);
                    }
                    report.extend(verify_morphism(&f));
                    // cross-check the strict-case rendering whenever it
                    // applies; the two organizations must agree
                    if f.source.is_strict() && f.target.is_strict() {
                        let strict = verify_morphism_strict_form(&f);
                        let canonical = verify_morphism(&f);
                        let agree = strict
                            .iter()
                            .zip(canonical.iter())
                            .all(|(a, b)| a.passed == b.passed);
                        report.push(if agree {
                            Check::pass("strict-form rendering agrees")
                        } else {
                            Check::fail(
                                "strict-form rendering agrees",
                                0,
                                "-",
                                "the two equation renderings disagree",
                            )
                        });
                    }
                }
                Loaded::Module(mut m) => {
                    if let Some(k) = max_arity {
                        m.arity_bound = m.arity_bound.min(*k);
                    }
                    report.extend(verify_ainfty_module(&m));
                }
                Loaded::Strict(m) => {
                    report.extend(verify_strict_module(&m));
                    let promoted = m.promote(max_arity.unwrap_or(4));
                    report.extend(verify_ainfty_module(&promoted));
                }
                Loaded::Algebra(a) => {
                    report.extend(verify_dga(&a));
                }
            }
            Ok(report)
        }
        AinftyCmd::Compose { outer, inner, output } => {
            let g = io::parse_doc::<io::MorphismDoc>(&read_file(outer)?)?.decode()?;
            let f = io::parse_doc::<io::MorphismDoc>(&read_file(inner)?)?.decode()?;
            let gf = compose_morphisms(&g, &f)?;
            let mut report = Report::new("ainfty compose").with_seed(seed);
            report.extend(verify_morphism(&gf));
            report.set_data(json!({
                "shift": gf.shift,
                "arity_bound": gf.arity_bound,
                "nonzero_components": gf.maps.keys().collect::<Vec<_>>(),
            }));
            if let Some(path) = output {
                write_file(path, &io::render_doc(&io::MorphismDoc::encode(&gf)))?;
            }
            Ok(report)
        }
        AinftyCmd::Invert { file, output } => {
            let f = io::parse_doc::<io::MorphismDoc>(&read_file(file)?)?.decode()?;
            let g = invert_infty_iso(&f)?;
            let mut report = Report::new("ainfty invert").with_seed(seed);
            let gf = compose_morphisms(&g, &f)?;
            let fg = compose_morphisms(&f, &g)?;
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
                write_file(path, &io::render_doc(&io::MorphismDoc::encode(&g)))?;
            }
            Ok(report)
        }
        AinftyCmd::Transfer { file, max_arity, output } => {
            let m = io::parse_doc::<io::ModuleDoc>(&read_file(file)?)?.decode()?;
            let mut report = Report::new("ainfty transfer").with_seed(seed);
            for check in verify_strict_module(&m) {
                if !check.passed {
                    report.push(check);
                    return Ok(report);
                }
            }
            let r = retract_to_homology(&m.complex);
            let (t, inc, proj) = homotopy_transfer(&m, &r, *max_arity)?;
            report.extend(
                verify_ainfty_module(&t)
                    .into_iter()
                    .map(|c| c.prefixed("transferred")),
            );
            report.extend(
                verify_morphism(&inc)
                    .into_iter()
                    .map(|c| c.prefixed("inclusion")),
            );
            report.extend(
                verify_morphism(&proj)
                    .into_iter()
                    .map(|c| c.prefixed("projection")),
            );
            let dims: serde_json::Map<String, serde_json::Value> = t
                .space()
                .degrees()
                .map(|q| (q.to_string(), json!(t.space().dim(q))))
                .collect();
            report.set_data(json!({
                "homology_dimensions": dims,
                "nonzero_operations": t.ops.keys().collect::<Vec<_>>(),
            }));
            if let Some(path) = output {
                let bundle = json!({
                    "schema": 1,
                    "module": serde_json::to_value(io::AInftyModuleDoc::encode(&t)).unwrap(),
                    "inclusion": serde_json::to_value(io::MorphismDoc::encode(&inc)).unwrap(),
                    "projection": serde_json::to_value(io::MorphismDoc::encode(&proj)).unwrap(),
                });
                write_file(path, &serde_json::to_string_pretty(&bundle).unwrap())?;
            }
            Ok(report)
        }
    }
}
