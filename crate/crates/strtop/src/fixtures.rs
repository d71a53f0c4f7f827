//! Built-in algebra and module families used by tests, the CLI and the
//! property suites.

use std::sync::Arc;

use crate::ainfty::{DGAlgebra, StrictModule};
use crate::complex::ChainComplex;
use crate::error::AlgebraError;
use crate::graded::{
    tensor_maps_all, tensor_spaces, Degree, GradedMap, GradedSpace, TENSOR_SEP,
};
use crate::scalar::int;

/// Group algebra of `Z/m` in degree 0 with zero differential. Labels are
/// `e, g1, .., g{m-1}`.
pub fn group_algebra(m: usize) -> Arc<DGAlgebra> {
    assert!(m >= 1);
    let labels: Vec<String> = (0..m)
        .map(|i| if i == 0 { "e".to_string() } else { format!("g{i}") })
        .collect();
    let pairs: Vec<(Degree, &str)> = labels.iter().map(|l| (0, l.as_str())).collect();
    let space = GradedSpace::from_pairs(&pairs);
    let complex = ChainComplex::zero_differential(space.clone());
    let aa = tensor_spaces(&space, &space);
    let mut mu = GradedMap::zero(aa, space.clone(), 0);
    for i in 0..m {
        for j in 0..m {
            let prod = (i + j) % m;
            let label = format!("{}{}{}", labels[i], TENSOR_SEP, labels[j]);
            mu.add_entry(0, &labels[prod], &label, int(1)).unwrap();
        }
    }
    Arc::new(DGAlgebra::new(complex, mu, "e").unwrap())
}

/// `Lambda(s) (x) R[t]/(t^r)` with `|s| = 1`, `|t| = 0` and `ds = t`: the
/// smallest DGA family in this crate with nonzero differential and
/// nonzero products, so its regular module has genuinely higher
/// transferred structure.
pub fn exterior_poly_dga(r: usize) -> Arc<DGAlgebra> {
    assert!(r >= 2);
    let name_t = |i: usize| -> Option<String> {
        (i < r).then(|| if i == 0 { "1".to_string() } else { format!("t{i}") })
    };
    let name_st = |i: usize| -> Option<String> {
        (i < r).then(|| if i == 0 { "s".to_string() } else { format!("st{i}") })
    };
    let mut pairs: Vec<(Degree, String)> = Vec::new();
    for i in 0..r {
        pairs.push((0, name_t(i).unwrap()));
    }
    for i in 0..r {
        pairs.push((1, name_st(i).unwrap()));
    }
    let refs: Vec<(Degree, &str)> = pairs.iter().map(|(q, l)| (*q, l.as_str())).collect();
    let space = GradedSpace::from_pairs(&refs);
    // d(s t^i) = t^{i+1}
    let mut d = GradedMap::zero(space.clone(), space.clone(), -1);
    for i in 0..r {
        if let (Some(st), Some(t)) = (name_st(i), name_t(i + 1)) {
            d.add_entry(1, &t, &st, int(1)).unwrap();
        }
    }
    let complex = ChainComplex::new(space.clone(), d).unwrap();
    let aa = tensor_spaces(&space, &space);
    let mut mu = GradedMap::zero(aa, space.clone(), 0);
    for i in 0..r {
        for j in 0..r {
            let ti = name_t(i).unwrap();
            let tj = name_t(j).unwrap();
            let si = name_st(i).unwrap();
            let sj = name_st(j).unwrap();
            if let Some(p) = name_t(i + j) {
                mu.add_entry(0, &p, &format!("{ti}{TENSOR_SEP}{tj}"), int(1))
                    .unwrap();
            }
            if let Some(p) = name_st(i + j) {
                mu.add_entry(1, &p, &format!("{si}{TENSOR_SEP}{tj}"), int(1))
                    .unwrap();
                mu.add_entry(1, &p, &format!("{ti}{TENSOR_SEP}{sj}"), int(1))
                    .unwrap();
            }
        }
    }
    Arc::new(DGAlgebra::new(complex, mu, "1").unwrap())
}

/// Truncated polynomial algebra `R[x]/(x^t)` on a generator of even
/// degree `deg`, zero differential.
pub fn truncated_poly_dga(deg: Degree, t: usize) -> Arc<DGAlgebra> {
    assert!(t >= 1 && deg >= 0 && deg % 2 == 0);
    let labels: Vec<String> = (0..t)
        .map(|i| if i == 0 { "1".into() } else { format!("x{i}") })
        .collect();
    let pairs: Vec<(Degree, &str)> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (deg * i as Degree, l.as_str()))
        .collect();
    let space = GradedSpace::from_pairs(&pairs);
    let complex = ChainComplex::zero_differential(space.clone());
    let aa = tensor_spaces(&space, &space);
    let mut mu = GradedMap::zero(aa, space.clone(), 0);
    for i in 0..t {
        for j in 0..t {
            if i + j < t {
                let label = format!("{}{}{}", labels[i], TENSOR_SEP, labels[j]);
                mu.add_entry(deg * (i + j) as Degree, &labels[i + j], &label, int(1))
                    .unwrap();
            }
        }
    }
    Arc::new(DGAlgebra::new(complex, mu, "1").unwrap())
}

/// The DGA as a right module over itself.
pub fn regular_module(a: &Arc<DGAlgebra>) -> StrictModule {
    StrictModule::new(a.clone(), a.complex.clone(), a.mu.clone()).unwrap()
}

/// Free module `V (x) A` over a complex `V`: Koszul differential and
/// action through the product of `A`.
pub fn free_module(a: &Arc<DGAlgebra>, v: &ChainComplex) -> StrictModule {
    let space = tensor_spaces(&v.space, a.space());
    let id_v = GradedMap::identity(v.space.clone());
    let id_a = GradedMap::identity(a.space().clone());
    let d =
        tensor_maps_all(&[&v.d, &id_a]).add(&tensor_maps_all(&[&id_v, &a.complex.d])).unwrap();
    let complex = ChainComplex::new(space, d).expect("Koszul differential squares to zero");
    let action = tensor_maps_all(&[&id_v, &a.mu]);
    StrictModule::new(a.clone(), complex, action).unwrap()
}

/// Direct sum of two strict modules over the same algebra. Labels are
/// prefixed to stay distinct; the first summand keeps its labels when
/// `keep_first` is set.
pub fn module_direct_sum(
    m1: &StrictModule,
    m2: &StrictModule,
    prefix2: &str,
) -> Result<StrictModule, AlgebraError> {
    if m1.algebra.as_ref() != m2.algebra.as_ref() {
        return Err(AlgebraError::BadInput(
            "direct sum needs a common algebra".into(),
        ));
    }
    let mut pairs: Vec<(Degree, String)> = Vec::new();
    for (q, _, l) in m1.space().iter_basis() {
        pairs.push((q, l.to_string()));
    }
    for (q, _, l) in m2.space().iter_basis() {
        pairs.push((q, format!("{prefix2}{l}")));
    }
    let refs: Vec<(Degree, &str)> = pairs.iter().map(|(q, l)| (*q, l.as_str())).collect();
    let space = GradedSpace::from_pairs(&refs);

    let relabel = |part: usize, sp: &GradedSpace, q: Degree, i: usize| -> String {
        let l = sp.label(q, i);
        if part == 0 {
            l.to_string()
        } else {
            format!("{prefix2}{l}")
        }
    };

    let mut d = GradedMap::zero(space.clone(), space.clone(), -1);
    for (part, m) in [(0usize, m1), (1usize, m2)] {
        for (q, row, col, coeff) in m.complex.d.iter_entries() {
            d.add_entry(
                q,
                &relabel(part, m.space(), q - 1, row),
                &relabel(part, m.space(), q, col),
                coeff.clone(),
            )?;
        }
    }
    let complex = ChainComplex::new(space.clone(), d)?;

    let algebra = m1.algebra.clone();
    let sum_domain = tensor_spaces(&space, algebra.space());
    let mut action = GradedMap::zero(sum_domain, space.clone(), 0);
    for (part, m) in [(0usize, m1), (1usize, m2)] {
        for (q, row, col, coeff) in m.action.iter_entries() {
            // decode the source label "x (x) a" of the summand action;
            // module labels may contain the separator, algebra labels
            // are atomic, so split at the last occurrence
            let src_label = m.action.source.label(q, col);
            let (x, aa) = src_label
                .rsplit_once(TENSOR_SEP)
                .expect("action source labels are pairs");
            let new_src = format!(
                "{}{}{}",
                if part == 0 {
                    x.to_string()
                } else {
                    format!("{prefix2}{x}")
                },
                TENSOR_SEP,
                aa
            );
            action.add_entry(
                q,
                &relabel(part, m.space(), q, row),
                &new_src,
                coeff.clone(),
            )?;
        }
    }
    StrictModule::new(algebra, complex, action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::{verify_dga, verify_strict_module};
    use crate::complex::verify_complex;

    #[test]
    fn builtin_algebras_verify() {
        for a in [
            group_algebra(2),
            group_algebra(5),
            exterior_poly_dga(3),
            truncated_poly_dga(2, 4),
            truncated_poly_dga(0, 3),
        ] {
            for c in verify_dga(&a) {
                assert!(c.passed, "{}: {:?}", c.name, c.witness);
            }
        }
    }

    #[test]
    fn free_modules_verify() {
        let a = exterior_poly_dga(2);
        let v_space = GradedSpace::from_pairs(&[(0, "v0"), (1, "v1"), (2, "v2")]);
        let mut dv = GradedMap::zero(v_space.clone(), v_space.clone(), -1);
        dv.add_entry(2, "v1", "v2", int(1)).unwrap();
        let v = ChainComplex::new(v_space, dv).unwrap();
        let m = free_module(&a, &v);
        for c in verify_strict_module(&m) {
            assert!(c.passed, "{}: {:?}", c.name, c.witness);
        }
        assert!(verify_complex(&m.complex).passed);
    }

    #[test]
    fn direct_sum_verifies() {
        let a = exterior_poly_dga(2);
        let m1 = regular_module(&a);
        let v = ChainComplex::zero_differential(GradedSpace::from_pairs(&[(0, "w0")]));
        let m2 = free_module(&a, &v);
        let sum = module_direct_sum(&m1, &m2, "B.").unwrap();
        for c in verify_strict_module(&sum) {
            assert!(c.passed, "{}: {:?}", c.name, c.witness);
        }
        assert_eq!(
            sum.space().total_dim(),
            m1.space().total_dim() + m2.space().total_dim()
        );
    }
}
