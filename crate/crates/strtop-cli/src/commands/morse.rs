use std::sync::Arc;

use serde_json::json;
use strtop::ainfty::DGAlgebra;
use strtop::error::AlgebraError;
use strtop::io;
use strtop::morse::{build_enriched, spectral_sequence, verify_twisting_cocycle};
use strtop::report::{Check, Report};
use strtop::sng::FiniteGroup;

use crate::{module_from_fiber_arg, read_file, MorseCmd};

/// Recovers a finite group from a group algebra: all basis in degree 0
/// and every product of basis elements a single basis element with
/// coefficient 1.
fn group_from_algebra(a: &Arc<DGAlgebra>) -> Option<FiniteGroup> {
    use strtop::graded::Chain;
    let space = a.space();
    if space.degrees().any(|q| q != 0) {
        return None;
    }
    let labels: Vec<String> = space.labels(0).to_vec();
    let n = labels.len();
    let mut table = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            let x = Chain::basis(space.clone(), 0, &labels[i]).ok()?;
            let y = Chain::basis(space.clone(), 0, &labels[j]).ok()?;
            let prod = a.mul_chains(&x, &y);
            if prod.terms.len() != 1 {
                return None;
            }
            let (&(q, idx), coeff) = prod.terms.iter().next()?;
            if q != 0 || *coeff != strtop::scalar::int(1) {
                return None;
            }
            table[i][j] = idx;
        }
    }
    FiniteGroup::new(labels, table).ok()
}

pub fn run(cmd: &MorseCmd, seed: u64) -> Result<Report, AlgebraError> {
    match cmd {
        MorseCmd::Verify { file } => {
            let t = io::parse_doc::<io::CocycleDoc>(&read_file(file)?)?.decode()?;
            let mut report = Report::new("morse verify").with_seed(seed);
            report.extend(verify_twisting_cocycle(&t));
            Ok(report)
        }
        MorseCmd::Build { file, fiber } => {
            let t = io::parse_doc::<io::CocycleDoc>(&read_file(file)?)?.decode()?;
            let mut report = Report::new("morse build").with_seed(seed);
            for check in verify_twisting_cocycle(&t) {
                let ok = check.passed;
                report.push(check);
                if !ok {
                    return Ok(report);
                }
            }
            let group = group_from_algebra(&t.algebra);
            let fiber = module_from_fiber_arg(&fiber.fiber, &t.algebra, group.as_ref())?;
            let enriched = build_enriched(&fiber, &t)?;
            report.push(strtop::complex::verify_complex(&enriched.complex).prefixed("d_F"));
            let h = strtop::complex::homology(&enriched.complex);
            let dims: serde_json::Map<String, serde_json::Value> = h
                .space
                .degrees()
                .map(|q| (q.to_string(), json!(h.space.dim(q))))
                .collect();
            report.set_data(json!({
                "enriched_dimension": enriched.complex.space.total_dim(),
                "homology_dimensions": dims,
            }));
            Ok(report)
        }
        MorseCmd::Induce { morphism, cocycle } => {
            let eta = io::parse_doc::<io::MorphismDoc>(&read_file(morphism)?)?.decode()?;
            let t = io::parse_doc::<io::CocycleDoc>(&read_file(cocycle)?)?.decode()?;
            let mut report = Report::new("morse induce").with_seed(seed);
            let src = eta.source.as_strict().ok_or_else(|| {
                AlgebraError::BadInput("enriched complexes need strict fiber modules".into())
            })?;
            let tgt = eta.target.as_strict().ok_or_else(|| {
                AlgebraError::BadInput("enriched complexes need strict fiber modules".into())
            })?;
            let e1 = build_enriched(&src, &t)?;
            let e2 = build_enriched(&tgt, &t)?;
            let induced = strtop::morse::induce_morphism(&eta, &e1, &e2)?;
            report.push(induced.verify().prefixed("induced map"));
            report.set_data(json!({
                "shift": induced.shift(),
                "entries": induced.map.entry_count(),
            }));
            Ok(report)
        }
        MorseCmd::Specseq { file, fiber, page } => {
            let t = io::parse_doc::<io::CocycleDoc>(&read_file(file)?)?.decode()?;
            let mut report = Report::new("morse specseq").with_seed(seed);
            for check in verify_twisting_cocycle(&t) {
                let ok = check.passed;
                report.push(check);
                if !ok {
                    return Ok(report);
                }
            }
            let group = group_from_algebra(&t.algebra);
            let fiber = module_from_fiber_arg(&fiber.fiber, &t.algebra, group.as_ref())?;
            let enriched = build_enriched(&fiber, &t)?;
            let pages = spectral_sequence(&enriched, *page);
            report.push(if pages.converges() {
                Check::pass("E-infinity converges to total homology")
            } else {
                Check::fail(
                    "E-infinity converges to total homology",
                    0,
                    "-",
                    "dimension mismatch",
                )
            });
            let render_page = |grid: &std::collections::BTreeMap<(i64, i64), usize>| {
                grid.iter()
                    .map(|(&(p, q), &d)| (format!("({p},{q})"), json!(d)))
                    .collect::<serde_json::Map<String, serde_json::Value>>()
            };
            let mut page_docs = serde_json::Map::new();
            for (r, grid) in pages.pages.iter().enumerate().take(*page + 1) {
                page_docs.insert(format!("E{r}"), json!(render_page(grid)));
            }
            page_docs.insert("Einf".into(), json!(render_page(&pages.infinity)));
            let homology: serde_json::Map<String, serde_json::Value> = pages
                .total_homology
                .iter()
                .map(|(q, d)| (q.to_string(), json!(d)))
                .collect();
            report.set_data(json!({
                "pages": page_docs,
                "total_homology": homology,
            }));
            Ok(report)
        }
    }
}
