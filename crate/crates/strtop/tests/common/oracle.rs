//! Brute-force expansion oracle for the A-infinity equations: evaluates
//! every term on every basis tensor by direct function application with
//! its own Koszul sign bookkeeping. Shares only the raw data (spaces and
//! per-column map entries) with the engine, none of the map-algebra.

use std::sync::Arc;

use strtop::ainfty::{AInftyModule, AInftyMorphism};
use strtop::graded::{Degree, GradedMap, GradedSpace, TENSOR_SEP};
use strtop::scalar::{self, Scalar};

/// A formal sum of pure tensors, each a list of (degree, label) factors.
#[derive(Debug, Clone, Default)]
pub struct Sum {
    terms: Vec<(Scalar, Vec<(Degree, String)>)>,
}

impl Sum {
    fn single(factors: Vec<(Degree, String)>) -> Self {
        Sum {
            terms: vec![(scalar::int(1), factors)],
        }
    }

    fn scaled(mut self, c: &Scalar) -> Self {
        for (coeff, _) in &mut self.terms {
            *coeff *= c.clone();
        }
        self
    }

    fn add(&mut self, other: Sum) {
        self.terms.extend(other.terms);
    }

    /// Collapses to a sparse vector keyed by the joined factor labels.
    fn collect(&self) -> std::collections::BTreeMap<(Degree, String), Scalar> {
        use num_traits::Zero;
        let mut out: std::collections::BTreeMap<(Degree, String), Scalar> =
            std::collections::BTreeMap::new();
        for (coeff, factors) in &self.terms {
            let degree: Degree = factors.iter().map(|(q, _)| q).sum();
            let label = factors
                .iter()
                .map(|(_, l)| l.as_str())
                .collect::<Vec<_>>()
                .join(TENSOR_SEP);
            let e = out
                .entry((degree, label))
                .or_insert_with(|| scalar::int(0));
            *e += coeff.clone();
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

/// Applies a stored map to the first `arity` factors of each tensor,
/// by looking up the joined label in the map's source space. Data access
/// only; no engine composition.
pub fn apply_op(op: Option<&GradedMap>, arity: usize, input: &Sum) -> Sum {
    let mut out = Sum::default();
    let Some(op) = op else { return out };
    for (coeff, factors) in &input.terms {
        assert!(factors.len() >= arity);
        let head = &factors[..arity];
        let degree: Degree = head.iter().map(|(q, _)| q).sum();
        let label = head
            .iter()
            .map(|(_, l)| l.as_str())
            .collect::<Vec<_>>()
            .join(TENSOR_SEP);
        let Some(col) = op.source.position(degree, &label) else {
            continue;
        };
        for (row, c) in op.apply_basis(degree, col) {
            let mut new_factors = vec![(
                degree + op.degree,
                op.target.label(degree + op.degree, row).to_string(),
            )];
            new_factors.extend_from_slice(&factors[arity..]);
            out.terms.push((coeff.clone() * c, new_factors));
        }
    }
    out
}

/// Applies a map to factors `[pos, pos + arity)`, with the Koszul sign
/// `(-1)^{|op| * (deg of factors before pos)}`.
pub fn apply_op_at(op: Option<&GradedMap>, pos: usize, arity: usize, input: &Sum) -> Sum {
    let mut out = Sum::default();
    let Some(op) = op else { return out };
    for (coeff, factors) in &input.terms {
        assert!(factors.len() >= pos + arity);
        let prefix_deg: Degree = factors[..pos].iter().map(|(q, _)| q).sum();
        let sign = scalar::sign(op.degree * prefix_deg);
        let slice = &factors[pos..pos + arity];
        let degree: Degree = slice.iter().map(|(q, _)| q).sum();
        let label = slice
            .iter()
            .map(|(_, l)| l.as_str())
            .collect::<Vec<_>>()
            .join(TENSOR_SEP);
        let Some(col) = op.source.position(degree, &label) else {
            continue;
        };
        for (row, c) in op.apply_basis(degree, col) {
            let mut new_factors = factors[..pos].to_vec();
            new_factors.push((
                degree + op.degree,
                op.target.label(degree + op.degree, row).to_string(),
            ));
            new_factors.extend_from_slice(&factors[pos + arity..]);
            out.terms
                .push((coeff.clone() * c.clone() * sign.clone(), new_factors));
        }
    }
    out
}

/// The Koszul tensor differential: apply each factor differential in
/// place with the sign of the preceding total degree.
pub fn apply_tensor_d(module_d: &GradedMap, algebra_d: &GradedMap, input: &Sum) -> Sum {
    let mut out = Sum::default();
    for (coeff, factors) in &input.terms {
        for pos in 0..factors.len() {
            let d = if pos == 0 { module_d } else { algebra_d };
            let single = Sum {
                terms: vec![(coeff.clone(), factors.clone())],
            };
            out.add(apply_op_at(Some(d), pos, 1, &single));
        }
    }
    out
}

pub fn basis_tensors(
    carrier: &Arc<GradedSpace>,
    algebra: &Arc<GradedSpace>,
    letters: usize,
) -> Vec<Vec<(Degree, String)>> {
    let mut tensors: Vec<Vec<(Degree, String)>> = carrier
        .iter_basis()
        .map(|(q, _, l)| vec![(q, l.to_string())])
        .collect();
    for _ in 0..letters {
        let mut next = Vec::new();
        for t in &tensors {
            for (q, _, l) in algebra.iter_basis() {
                let mut t = t.clone();
                t.push((q, l.to_string()));
                next.push(t);
            }
        }
        tensors = next;
    }
    tensors
}

/// Oracle for the module structure equation at arity `n`: the defect on
/// each basis tensor of `M (x) A^{(x) n-1}`.
pub fn oracle_module_defects(
    module: &AInftyModule,
    n: usize,
) -> Vec<(Vec<(Degree, String)>, std::collections::BTreeMap<(Degree, String), Scalar>)> {
    let carrier = module.space();
    let algebra_space = module.algebra.space();
    let d_m = &module.complex.d;
    let d_a = &module.algebra.complex.d;
    let mut out = Vec::new();
    for tensor in basis_tensors(carrier, algebra_space, n - 1) {
        let input = Sum::single(tensor.clone());
        let mut defect = Sum::default();
        // d m_n
        defect.add(apply_op(
            Some(d_m),
            1,
            &apply_op(module.op(n), n, &input),
        ));
        // (-1)^{n+1} m_n d
        defect.add(
            apply_op(module.op(n), n, &apply_tensor_d(d_m, d_a, &input))
                .scaled(&scalar::sign(n as i64 + 1)),
        );
        // sum_t (-1)^{(n-t)t} m_{t+1} (m_{n-t} (x) id^t)
        for t in 1..=n.saturating_sub(2) {
            let inner = apply_op(module.op(n - t), n - t, &input);
            defect.add(
                apply_op(module.op(t + 1), t + 1, &inner)
                    .scaled(&scalar::sign(((n - t) * t) as i64)),
            );
        }
        // sum_r (-1)^r m_{n-1} (id^r (x) mu (x) id^{n-r-2})
        if n >= 3 {
            for r in 1..=n - 2 {
                let merged = apply_op_at(Some(&module.algebra.mu), r, 2, &input);
                defect.add(
                    apply_op(module.op(n - 1), n - 1, &merged).scaled(&scalar::sign(r as i64)),
                );
            }
        }
        out.push((tensor, defect.collect()));
    }
    out
}

/// Oracle for the morphism equation at index `n`, written in the
/// strict-style organization
/// `g_{n+1} d + (-1)^{n+1+m} d g_{n+1}
///  - sum_s (-1)^{s(n-s)+s+1} g_{n-s+1}(m^src_{s+1} (x) id^{n-s})
///  - (-1)^n sum_k (-1)^{k(n-k)} m^tgt_{k+1}(g_{n-k+1} (x) id^k)
///  - sum_r (-1)^{n+1+r} g_n (id^r (x) mu (x) id^{n-1-r}) = 0`,
/// which is the (-1)^{n+1}-multiple of the inverse-construction form the
/// engine implements, so defects differ by that global sign.
pub fn oracle_morphism_defects(
    f: &AInftyMorphism,
    n: usize,
) -> Vec<(Vec<(Degree, String)>, std::collections::BTreeMap<(Degree, String), Scalar>)> {
    let src = &f.source;
    let tgt = &f.target;
    let carrier = src.space();
    let algebra_space = src.algebra.space();
    let d_src = &src.complex.d;
    let d_tgt = &tgt.complex.d;
    let d_a = &src.algebra.complex.d;
    let mut out = Vec::new();
    for tensor in basis_tensors(carrier, algebra_space, n) {
        let input = Sum::single(tensor.clone());
        let mut defect = Sum::default();
        // g_{n+1} d
        defect.add(apply_op(
            f.component(n + 1),
            n + 1,
            &apply_tensor_d(d_src, d_a, &input),
        ));
        // (-1)^{n+1+m} d g_{n+1}
        defect.add(
            apply_op(Some(d_tgt), 1, &apply_op(f.component(n + 1), n + 1, &input))
                .scaled(&scalar::sign(n as i64 + 1 + f.shift)),
        );
        // source-structure terms
        for s in 1..=n {
            let inner = apply_op(src.op(s + 1), s + 1, &input);
            defect.add(
                apply_op(f.component(n - s + 1), n - s + 1, &inner)
                    .scaled(&scalar::sign((s * (n - s)) as i64 + s as i64)),
            );
        }
        // target-structure terms
        for k in 1..=n {
            let inner = apply_op(f.component(n - k + 1), n - k + 1, &input);
            defect.add(
                apply_op(tgt.op(k + 1), k + 1, &inner)
                    .scaled(&scalar::sign((n + k * (n - k)) as i64 + 1)),
            );
        }
        // algebra-multiplication terms
        if n >= 2 {
            for r in 1..=n - 1 {
                let merged = apply_op_at(Some(&src.algebra.mu), r, 2, &input);
                defect.add(
                    apply_op(f.component(n), n, &merged)
                        .scaled(&scalar::sign(n as i64 + r as i64)),
                );
            }
        }
        out.push((tensor, defect.collect()));
    }
    out
}

/// Reads the defect column of the engine's equation map at one basis
/// tensor, as a sparse vector over the target carrier.
pub fn engine_defect_column(
    lhs: &GradedMap,
    tensor_degree: Degree,
    tensor_label: &str,
) -> std::collections::BTreeMap<(Degree, String), Scalar> {
    let mut out = std::collections::BTreeMap::new();
    let Some(col) = lhs.source.position(tensor_degree, tensor_label) else {
        return out;
    };
    for (row, coeff) in lhs.apply_basis(tensor_degree, col) {
        out.insert(
            (
                tensor_degree + lhs.degree,
                lhs.target.label(tensor_degree + lhs.degree, row).to_string(),
            ),
            coeff,
        );
    }
    out
}

pub fn scale_defect(
    d: std::collections::BTreeMap<(Degree, String), Scalar>,
    s: &Scalar,
) -> std::collections::BTreeMap<(Degree, String), Scalar> {
    d.into_iter().map(|(k, v)| (k, v * s.clone())).collect()
}

