//! Soundness of the sparse equation verifiers against the independent
//! brute-force expansion oracle, on random instances with dims <= 2 per
//! degree and arity <= 3, valid and corrupted, for zero and nonzero
//! shifts. Engine and oracle must agree on the defect of every equation
//! at every basis tensor.

use std::sync::Arc;

use strtop::ainfty::{verify_ainfty_module, verify_morphism, AInftyMorphism};
use strtop::graded::{Degree, GradedMap, TENSOR_SEP};
use strtop::random::{random_dga, random_map, random_strict_module, rng_from_seed};
use strtop::scalar;

#[path = "common/oracle.rs"]
mod oracle;
use oracle::*;

#[test]
fn module_verifier_agrees_with_oracle() {
    let mut rng = rng_from_seed(2024);
    let mut disagreements = 0usize;
    let mut nontrivial_failures = 0usize;
    for case in 0..25 {
        let a = random_dga(&mut rng);
        let m = random_strict_module(&mut rng, &a, "M.");
        let mut module = m.promote(3);
        // half the cases: corrupt with random higher operations
        if case % 2 == 1 {
            for k in 2..=3usize {
                let dom = module.domain(k);
                let op = random_map(&mut rng, &dom, module.space(), k as Degree - 2, 0.3);
                let mut merged = module.op(k).cloned().unwrap_or_else(|| {
                    GradedMap::zero(dom.clone(), module.space().clone(), k as Degree - 2)
                });
                merged = merged.add(&op).unwrap();
                module.set_op(k, merged).unwrap();
            }
        }
        let checks = verify_ainfty_module(&module);
        for n in 1..=3usize {
            let oracle = oracle_module_defects(&module, n);
            let oracle_pass = oracle.iter().all(|(_, d)| d.is_empty());
            let engine_pass = checks[n - 1].passed;
            assert_eq!(
                engine_pass, oracle_pass,
                "case {case} N={n}: engine {engine_pass} oracle {oracle_pass}"
            );
            if !engine_pass {
                nontrivial_failures += 1;
            }
            // compare full defects through the engine's equation map
            let lhs = strtop::ainfty::module_equation_map(&module, n).unwrap();
            for (tensor, odef) in &oracle {
                let degree: Degree = tensor.iter().map(|(q, _)| q).sum();
                let label = tensor
                    .iter()
                    .map(|(_, l)| l.as_str())
                    .collect::<Vec<_>>()
                    .join(TENSOR_SEP);
                let edef = match &lhs {
                    Some(map) => engine_defect_column(map, degree, &label),
                    None => Default::default(),
                };
                if edef != *odef {
                    disagreements += 1;
                }
            }
        }
    }
    assert_eq!(disagreements, 0);
    assert!(nontrivial_failures > 0, "corrupted cases must exercise failures");
}

#[test]
fn morphism_verifier_agrees_with_oracle() {
    let mut rng = rng_from_seed(4048);
    let mut nontrivial_failures = 0usize;
    for case in 0..25 {
        let a = random_dga(&mut rng);
        let m = Arc::new(random_strict_module(&mut rng, &a, "M.").promote(3));
        let ncar = Arc::new(random_strict_module(&mut rng, &a, "N.").promote(3));
        let shift: Degree = [-1, 0, 1, 2][case % 4];
        let mut f = AInftyMorphism::new(m.clone(), ncar.clone(), shift, 3);
        for k in 1..=3usize {
            let dom = m.domain(k);
            let map = random_map(
                &mut rng,
                &dom,
                ncar.space(),
                shift + k as Degree - 1,
                0.5,
            );
            f.set_component(k, map).unwrap();
        }
        let checks = verify_morphism(&f);
        for n in 0..3usize {
            let oracle = oracle_morphism_defects(&f, n);
            let oracle_pass = oracle.iter().all(|(_, d)| d.is_empty());
            let engine_pass = checks[n].passed;
            assert_eq!(
                engine_pass, oracle_pass,
                "case {case} shift {shift} N={n}"
            );
            if !engine_pass {
                nontrivial_failures += 1;
            }
            // the engine's canonical organization is the
            // (-1)^{n+1}-multiple of the strict-style oracle organization
            let lhs = strtop::ainfty::morphism_equation_map(&f, n).unwrap();
            for (tensor, odef) in oracle {
                let degree: Degree = tensor.iter().map(|(q, _)| q).sum();
                let label = tensor
                    .iter()
                    .map(|(_, l)| l.as_str())
                    .collect::<Vec<_>>()
                    .join(TENSOR_SEP);
                let edef = match &lhs {
                    Some(map) => engine_defect_column(map, degree, &label),
                    None => Default::default(),
                };
                let expected = scale_defect(odef, &scalar::sign(n as i64 + 1));
                assert_eq!(edef, expected, "case {case} N={n} tensor {label}");
            }
        }
    }
    assert!(nontrivial_failures > 0, "random families must exercise failures");
}
