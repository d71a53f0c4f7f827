use rayon::prelude::*;
use serde_json::json;
use strtop::error::AlgebraError;
use strtop::morse::{build_enriched, conjugation_slices_module, lens_cocycle, spectral_sequence};
use strtop::report::{Check, Report};
use strtop::scalar::format_scalar;
use strtop::sng::{
    class_name, conjugacy_classes, lifted_coproduct, loop_basis, verify_sng_properties,
    FiniteGroup, FreeLoopClass, LoopKind,
};

use crate::{load_group, SngCmd};

fn parse_class(
    spec: &str,
    group: &FiniteGroup,
) -> Result<FreeLoopClass, AlgebraError> {
    // shape: "x,[g],1"
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        return Err(AlgebraError::BadInput(
            "class must have the form \"x,[g],k\" or \"y,[g],k\"".into(),
        ));
    }
    let kind = match parts[0].trim() {
        "x" => LoopKind::X,
        "y" => LoopKind::Y,
        other => {
            return Err(AlgebraError::BadInput(format!(
                "class kind must be x or y, got {other}"
            )))
        }
    };
    let rep = parts[1].trim();
    let rep = rep
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| AlgebraError::BadInput("class representative must be [g]".into()))?;
    let level: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| AlgebraError::BadInput("class level must be a nonnegative integer".into()))?;
    let elem = group
        .position(rep)
        .ok_or_else(|| AlgebraError::UnknownLabel {
            degree: 0,
            label: rep.to_string(),
        })?;
    let classes = conjugacy_classes(group);
    Ok(FreeLoopClass {
        kind,
        class: classes.class_of[elem],
        level,
    })
}

/// Cross-check of the spectral sequence against the loop-space Betti
/// numbers: for cyclic `G` and `n = 3` the conjugation-module grid must
/// be `|G|` at `(p, q) in {0, 3} x {0, 2, ..., 2 max_k}` and the total
/// `E-infinity` dimensions must match `loop_basis` degree by degree.
fn cross_check_cyclic(m: usize, max_k: usize) -> Vec<Check> {
    let mut checks = Vec::new();
    let group = FiniteGroup::cyclic(m);
    let t = lens_cocycle(m, 3);
    let fiber = conjugation_slices_module(&t.algebra, &group, 3, max_k);
    let e = match build_enriched(&fiber, &t) {
        Ok(e) => e,
        Err(err) => {
            checks.push(Check::fail(
                format!("Z/{m} enriched complex builds"),
                0,
                "-",
                err.to_string(),
            ));
            return checks;
        }
    };
    let pages = spectral_sequence(&e, 2);
    let e2 = &pages.pages[2];
    let mut grid_ok = true;
    for p in [0i64, 3] {
        for k in 0..=max_k as i64 {
            if e2.get(&(p, 2 * k)).copied().unwrap_or(0) != m {
                grid_ok = false;
            }
        }
    }
    let expected_total = 2 * (max_k + 1) * m;
    let total: usize = e2.values().sum();
    grid_ok &= total == expected_total;
    checks.push(if grid_ok {
        Check::pass(format!("Z/{m} E2 grid is {m} on {{0,3}} x even rows"))
    } else {
        Check::fail(
            format!("Z/{m} E2 grid is {m} on {{0,3}} x even rows"),
            0,
            "-",
            format!("grid {e2:?}"),
        )
    });

    // E-infinity totals against sng betti: the slice module covers loop
    // degrees up to 2 max_k, so compare in the window where the slice
    // truncation does not cut classes: degrees 0..=2 max_k
    let (_, betti) = loop_basis(&group, 3, max_k, false).expect("n = 3 is valid");
    let mut einf_by_degree = std::collections::BTreeMap::new();
    for (&(p, q), &d) in &pages.infinity {
        *einf_by_degree.entry(p + q).or_insert(0usize) += d;
    }
    let window = 2 * max_k as i64;
    let ok = (0..=window).all(|deg| {
        einf_by_degree.get(&deg).copied().unwrap_or(0)
            == betti.get(&(deg as usize)).copied().unwrap_or(0)
    });
    checks.push(if ok {
        Check::pass(format!("Z/{m} E-infinity totals match loop Betti numbers"))
    } else {
        Check::fail(
            format!("Z/{m} E-infinity totals match loop Betti numbers"),
            0,
            "-",
            format!("Einf {einf_by_degree:?} vs betti {betti:?}"),
        )
    });
    checks
}

pub fn run(cmd: &SngCmd, seed: u64) -> Result<Report, AlgebraError> {
    match cmd {
        SngCmd::Betti {
            group,
            n,
            max_k,
            relative,
        } => {
            let g = load_group(group)?;
            let (basis, betti) = loop_basis(&g, *n, *max_k, *relative)?;
            let classes = conjugacy_classes(&g);
            let mut report = Report::new("sng betti").with_seed(seed);
            let table: Vec<serde_json::Value> = betti
                .iter()
                .map(|(deg, dim)| json!([deg, dim]))
                .collect();
            let class_list: Vec<String> = basis
                .iter()
                .map(|c| format!("{} (deg {})", class_name(c, &g, &classes), c.degree(*n)))
                .collect();
            report.set_data(json!({
                "group_order": g.order(),
                "conjugacy_classes": classes.classes.len(),
                "betti": table,
                "classes": class_list,
            }));
            Ok(report)
        }
        SngCmd::Coproduct { group, n, class } => {
            let g = load_group(group)?;
            let c = parse_class(class, &g)?;
            let row = lifted_coproduct(&c, &g, *n)?;
            let classes = conjugacy_classes(&g);
            let mut report = Report::new("sng coproduct").with_seed(seed);
            let terms: Vec<serde_json::Value> = row
                .terms
                .iter()
                .map(|(&(a, b), coeff)| {
                    json!({
                        "left": class_name(&a, &g, &classes),
                        "right": class_name(&b, &g, &classes),
                        "coeff": format_scalar(coeff),
                    })
                })
                .collect();
            report.set_data(json!({
                "class": class_name(&c, &g, &classes),
                "degree": c.degree(*n),
                "terms": terms,
            }));
            Ok(report)
        }
        SngCmd::Check {
            all,
            group,
            n,
            max_k,
        } => {
            let mut report = Report::new("sng check").with_seed(seed);
            if *all {
                // battery over the built-in families; instances run in
                // parallel and merge in declared order
                let instances: Vec<(String, FiniteGroup, usize)> = vec![
                    ("Z/2,n=3".into(), FiniteGroup::cyclic(2), 3),
                    ("Z/2,n=5".into(), FiniteGroup::cyclic(2), 5),
                    ("Z/3,n=3".into(), FiniteGroup::cyclic(3), 3),
                    ("Z/3,n=5".into(), FiniteGroup::cyclic(3), 5),
                    ("Z/5,n=3".into(), FiniteGroup::cyclic(5), 3),
                    ("Q8,n=3".into(), FiniteGroup::quaternion(2), 3),
                ];
                let results: Vec<Vec<Check>> = instances
                    .par_iter()
                    .map(|(name, g, n)| {
                        verify_sng_properties(g, *n, *max_k)
                            .map(|checks| {
                                checks.into_iter().map(|c| c.prefixed(name)).collect()
                            })
                            .unwrap_or_else(|e| {
                                vec![Check::fail(name.clone(), 0, "-", e.to_string())]
                            })
                    })
                    .collect();
                for checks in results {
                    report.extend(checks);
                }
                for m in [2usize, 3, 5] {
                    report.extend(cross_check_cyclic(m, 4));
                }
            } else {
                let gspec = group.as_ref().ok_or_else(|| {
                    AlgebraError::BadInput("provide --group and --n, or --all".into())
                })?;
                let n = n.ok_or_else(|| {
                    AlgebraError::BadInput("provide --group and --n, or --all".into())
                })?;
                let g = load_group(gspec)?;
                report.extend(verify_sng_properties(&g, n, *max_k)?);
            }
            Ok(report)
        }
    }
}
