//! Path modules over a pair `(A, P)` and their morphisms (coherent chain
//! homotopies in algebraic form): verification, composition, inversion
//! and homotopy transfer.
//!
//! A path module is a total complex `E` with a fiber subcomplex `F`
//! spanned by a subset of the basis labels, and operations
//! `m_k : F (x) A^{(x) k-2} (x) P -> E` of degree `k - 2` whose
//! restrictions along the embedding `A -> P` land back in `F`. The
//! structure and morphism equations are the A-infinity module equations
//! with the last tensor slot widened from `A` to `P`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::ainfty::{
    acc_add, check_from_defect, AInftyModule, AInftyMorphism, DGAlgebra, StrictModule,
};
use crate::complex::{ChainComplex, HomotopyRetract};
use crate::error::AlgebraError;
use crate::graded::{compose, tensor_all, tensor_maps_all, Degree, GradedMap, GradedSpace};
use crate::linalg::invert_map;
use crate::report::Check;
use crate::scalar::{self, Scalar};

/// The coefficient pair: a DGA `A` together with a left `A`-module `P`
/// and an embedding `A -> P` of left modules.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPair {
    pub algebra: Arc<DGAlgebra>,
    pub path: ChainComplex,
    /// left action `A (x) P -> P`, degree 0
    pub action: GradedMap,
    /// embedding `A -> P`, degree 0
    pub embed: GradedMap,
}

impl PathPair {
    pub fn new(
        algebra: Arc<DGAlgebra>,
        path: ChainComplex,
        action: GradedMap,
        embed: GradedMap,
    ) -> Result<Arc<Self>, AlgebraError> {
        let ap = tensor_all(&[algebra.space(), &path.space]);
        if action.source.as_ref() != ap.as_ref()
            || action.target.as_ref() != path.space.as_ref()
            || action.degree != 0
        {
            return Err(AlgebraError::ShapeMismatch {
                degree: 0,
                detail: "left action must map A(x)P to P with degree 0".into(),
            });
        }
        if embed.source.as_ref() != algebra.space().as_ref()
            || embed.target.as_ref() != path.space.as_ref()
            || embed.degree != 0
        {
            return Err(AlgebraError::ShapeMismatch {
                degree: 0,
                detail: "embedding must map A to P with degree 0".into(),
            });
        }
        Ok(Arc::new(PathPair {
            algebra,
            path,
            action,
            embed,
        }))
    }

    /// The pair `(A, A)` with the product as action and the identity as
    /// embedding.
    pub fn over_self(algebra: &Arc<DGAlgebra>) -> Arc<Self> {
        PathPair::new(
            algebra.clone(),
            algebra.complex.clone(),
            algebra.mu.clone(),
            GradedMap::identity(algebra.space().clone()),
        )
        .expect("self pair is well-shaped")
    }

    pub fn path_space(&self) -> &Arc<GradedSpace> {
        &self.path.space
    }
}

/// Verifies the pair axioms: `P` a complex, left action associative,
/// unital and Leibniz, embedding a chain map of left modules.
pub fn verify_path_pair(pair: &PathPair) -> Vec<Check> {
    let mut checks = Vec::new();
    checks.push(crate::complex::verify_complex(&pair.path).prefixed("path space"));
    let a = &pair.algebra;
    let id_a = GradedMap::identity(a.space().clone());
    let id_p = GradedMap::identity(pair.path_space().clone());

    let d_tensor = crate::ainfty::koszul_differential(&[
        (a.space(), &a.complex.d),
        (pair.path_space(), &pair.path.d),
    ]);
    let leibniz = compose(&pair.action, &d_tensor)
        .and_then(|l| l.sub(&compose(&pair.path.d, &pair.action)?))
        .map(Some);
    checks.push(check_from_defect("left action Leibniz rule".into(), leibniz));

    let assoc = compose(&pair.action, &tensor_maps_all(&[&a.mu, &id_p]))
        .and_then(|l| l.sub(&compose(&pair.action, &tensor_maps_all(&[&id_a, &pair.action]))?))
        .map(Some);
    checks.push(check_from_defect("left action associativity".into(), assoc));

    // unitality on the basis
    let mut unit_check = Check::pass("unital left action");
    let one = a.unit_chain();
    for (q, _, label) in pair.path_space().iter_basis() {
        let x = crate::graded::Chain::basis(pair.path_space().clone(), q, label).unwrap();
        let ox = crate::ainfty::apply_bilinear(&pair.action, &one, &x);
        if ox != x {
            unit_check = Check::fail("unital left action", q, label, format!("1\u{b7}x = {ox}"));
            break;
        }
    }
    checks.push(unit_check);

    let emb_chain = compose(&pair.embed, &a.complex.d)
        .and_then(|l| l.sub(&compose(&pair.path.d, &pair.embed)?))
        .map(Some);
    checks.push(check_from_defect(
        "embedding is a chain map".into(),
        emb_chain,
    ));

    let emb_mod = compose(&pair.embed, &a.mu)
        .and_then(|l| l.sub(&compose(&pair.action, &tensor_maps_all(&[&id_a, &pair.embed]))?))
        .map(Some);
    checks.push(check_from_defect(
        "embedding is a map of left modules".into(),
        emb_mod,
    ));
    checks
}

/// A path module over a pair, with fiber given by a basis-label subset.
#[derive(Debug, Clone)]
pub struct PathModule {
    pub pair: Arc<PathPair>,
    pub total: ChainComplex,
    pub fiber_labels: BTreeMap<Degree, Vec<String>>,
    fiber_space: Arc<GradedSpace>,
    /// inclusion `F -> E`
    include: GradedMap,
    /// projection `E -> F` killing non-fiber labels
    project: GradedMap,
    /// full operations `m_k : F (x) A^{k-2} (x) P -> E`, `k >= 2`
    pub ops: BTreeMap<usize, GradedMap>,
    pub arity_bound: usize,
}

impl PathModule {
    pub fn new(
        pair: Arc<PathPair>,
        total: ChainComplex,
        fiber_labels: BTreeMap<Degree, Vec<String>>,
        ops: BTreeMap<usize, GradedMap>,
        arity_bound: usize,
    ) -> Result<Self, AlgebraError> {
        let mut pairs: Vec<(Degree, &str)> = Vec::new();
        for (q, labels) in &fiber_labels {
            for l in labels {
                if total.space.position(*q, l).is_none() {
                    return Err(AlgebraError::UnknownLabel {
                        degree: *q,
                        label: l.clone(),
                    });
                }
                pairs.push((*q, l.as_str()));
            }
        }
        let fiber_space = GradedSpace::from_pairs(&pairs);
        let mut include = GradedMap::zero(fiber_space.clone(), total.space.clone(), 0);
        let mut project = GradedMap::zero(total.space.clone(), fiber_space.clone(), 0);
        for (q, _, l) in fiber_space.iter_basis() {
            include.add_entry(q, l, l, scalar::int(1))?;
            project.add_entry(q, l, l, scalar::int(1))?;
        }
        let mut module = PathModule {
            pair,
            total,
            fiber_labels,
            fiber_space,
            include,
            project,
            ops: BTreeMap::new(),
            arity_bound,
        };
        for (k, op) in ops {
            module.set_op(k, op)?;
        }
        Ok(module)
    }

    pub fn set_op(&mut self, k: usize, op: GradedMap) -> Result<(), AlgebraError> {
        if k < 2 {
            return Err(AlgebraError::BadInput(
                "path module operations start at arity 2".into(),
            ));
        }
        let expected = self.dom_full(k);
        if op.source.as_ref() != expected.as_ref()
            || op.target.as_ref() != self.total.space.as_ref()
        {
            return Err(AlgebraError::ShapeMismatch {
                degree: 0,
                detail: format!("m_{k} must map F(x)A^(x){}(x)P to E", k - 2),
            });
        }
        if op.degree != k as Degree - 2 {
            return Err(AlgebraError::WrongDegree {
                expected: k as Degree - 2,
                found: op.degree,
            });
        }
        if op.is_zero_map() {
            self.ops.remove(&k);
        } else {
            self.ops.insert(k, op);
        }
        Ok(())
    }

    /// Domain `F (x) A^{(x) k-2} (x) P` of the full operation `m_k`.
    pub fn dom_full(&self, k: usize) -> Arc<GradedSpace> {
        assert!(k >= 2);
        let mut parts: Vec<&GradedSpace> = vec![self.fiber_space.as_ref()];
        parts.extend(std::iter::repeat(self.pair.algebra.space().as_ref()).take(k - 2));
        parts.push(self.pair.path_space().as_ref());
        tensor_all(&parts)
    }

    pub fn fiber_space(&self) -> &Arc<GradedSpace> {
        &self.fiber_space
    }

    pub fn include(&self) -> &GradedMap {
        &self.include
    }

    pub fn project(&self) -> &GradedMap {
        &self.project
    }

    pub fn op_full(&self, k: usize) -> Option<&GradedMap> {
        self.ops.get(&k).filter(|m| !m.is_zero_map())
    }

    pub fn is_strict(&self) -> bool {
        self.ops.keys().all(|&k| k <= 2)
    }

    /// The fiber differential `pi o d o iota`.
    pub fn fiber_d(&self) -> GradedMap {
        compose(
            &self.project,
            &compose(&self.total.d, &self.include).unwrap(),
        )
        .unwrap()
    }

    /// `m_k` restricted along the embedding, projected to the fiber:
    /// `F (x) A^{(x) k-1} -> F`. Equals the true restriction whenever the
    /// containment checks of `verify_path_module` pass.
    pub fn op_restricted(&self, k: usize) -> Option<GradedMap> {
        let op = self.op_full(k)?;
        let restricted = compose(op, &self.embed_last(k)).unwrap();
        let projected = compose(&self.project, &restricted).unwrap();
        (!projected.is_zero_map()).then_some(projected)
    }

    /// `id_F (x) id_A^{k-2} (x) embed : F (x) A^{k-1} -> F (x) A^{k-2} (x) P`.
    fn embed_last(&self, k: usize) -> GradedMap {
        let id_f = GradedMap::identity(self.fiber_space.clone());
        let id_a = GradedMap::identity(self.pair.algebra.space().clone());
        let mut parts: Vec<&GradedMap> = vec![&id_f];
        parts.extend(std::iter::repeat(&id_a).take(k - 2));
        parts.push(&self.pair.embed);
        tensor_maps_all(&parts)
    }

    /// The fiber with its restricted operations, as an A-infinity module
    /// over `A`.
    pub fn fiber_module(&self) -> Result<AInftyModule, AlgebraError> {
        let complex = ChainComplex::new(self.fiber_space.clone(), self.fiber_d())?;
        let mut module = AInftyModule {
            algebra: self.pair.algebra.clone(),
            complex,
            ops: BTreeMap::new(),
            arity_bound: self.arity_bound,
        };
        for k in 2..=self.arity_bound {
            if let Some(op) = self.op_restricted(k) {
                module.set_op(k, op)?;
            }
        }
        Ok(module)
    }

    /// Koszul tensor differential on `F (x) A^{(x) k-2} (x) P`.
    fn tensor_d(&self, k: usize) -> GradedMap {
        let fiber_d = self.fiber_d();
        let a = &self.pair.algebra;
        let mut factors: Vec<(&Arc<GradedSpace>, &GradedMap)> =
            vec![(&self.fiber_space, &fiber_d)];
        factors.extend(std::iter::repeat((a.space(), &a.complex.d)).take(k - 2));
        factors.push((self.pair.path_space(), &self.pair.path.d));
        crate::ainfty::koszul_differential(&factors)
    }

    /// `id^{(x) r+1} (x) mu (x) id^{(x) n-r-3}` on the equation domain
    /// `F (x) A^{(x) n-2} (x) P`; the last position multiplies into `P`
    /// through the left action.
    fn mu_at(&self, n: usize, r: usize) -> GradedMap {
        assert!(n >= 3 && r <= n - 3);
        let id_f = GradedMap::identity(self.fiber_space.clone());
        let id_a = GradedMap::identity(self.pair.algebra.space().clone());
        let id_p = GradedMap::identity(self.pair.path_space().clone());
        let mut parts: Vec<&GradedMap> = vec![&id_f];
        if r < n - 3 {
            parts.extend(std::iter::repeat(&id_a).take(r));
            parts.push(&self.pair.algebra.mu);
            parts.extend(std::iter::repeat(&id_a).take(n - 4 - r));
            parts.push(&id_p);
        } else {
            parts.extend(std::iter::repeat(&id_a).take(n - 3));
            parts.push(&self.pair.action);
        }
        tensor_maps_all(&parts)
    }

    /// `(op_restricted_s (x) id_A^{(x) n-s-1} (x) id_P)` on the equation
    /// domain, for the structure-equation composition term.
    fn restricted_padded(&self, s: usize, n: usize) -> Option<GradedMap> {
        let op = self.op_restricted(s)?;
        let id_a = GradedMap::identity(self.pair.algebra.space().clone());
        let id_p = GradedMap::identity(self.pair.path_space().clone());
        let mut parts: Vec<&GradedMap> = vec![&op];
        parts.extend(std::iter::repeat(&id_a).take(n - s - 1));
        parts.push(&id_p);
        Some(tensor_maps_all(&parts))
    }
}

/// Left-hand side of the path-module structure equation at arity `n >= 3`
/// (the `n = 2` case is the chain-map condition on `m_2`):
///
/// `d m_n + (-1)^{n+1} m_n d
///  + sum_{s=2}^{n-1} (-1)^{s(n-s)} m_{n-s+1} (m_s^F (x) id^{n-s})
///  - sum_{r=0}^{n-3} (-1)^r m_{n-1} (id^{r+1} (x) mu (x) id^{n-r-3})`.
fn path_equation_lhs(module: &PathModule, n: usize) -> Result<Option<GradedMap>, AlgebraError> {
    let mut acc: Option<GradedMap> = None;
    if let Some(m_n) = module.op_full(n) {
        acc_add(&mut acc, compose(&module.total.d, m_n)?)?;
        acc_add(
            &mut acc,
            compose(m_n, &module.tensor_d(n))?.scale(&scalar::sign(n as i64 + 1)),
        )?;
    }
    for s in 2..=n - 1 {
        let (Some(outer), Some(inner)) =
            (module.op_full(n - s + 1), module.restricted_padded(s, n))
        else {
            continue;
        };
        let term = compose(outer, &inner)?;
        acc_add(&mut acc, term.scale(&scalar::sign(((n - s) * s) as i64)))?;
    }
    if let Some(m_prev) = module.op_full(n - 1) {
        for r in 0..=n - 3 {
            let term = compose(m_prev, &module.mu_at(n, r))?;
            acc_add(&mut acc, term.scale(&scalar::sign(r as i64 + 1)))?;
        }
    }
    Ok(acc)
}

/// Verifies the path-module axioms: fiber closure under `d`, the
/// chain-map condition on `m_2`, fiber containment of every restriction,
/// and the structure equations for `3 <= N <= arity_bound`.
pub fn verify_path_module(module: &PathModule) -> Vec<Check> {
    let mut checks = Vec::new();
    checks.push(crate::complex::verify_complex(&module.total).prefixed("total complex"));

    // fiber closed under d: (id - iota pi) d iota = 0
    let closure = (|| {
        let di = compose(&module.total.d, &module.include)?;
        let proj_part = compose(&module.include, &compose(&module.project, &di)?)?;
        di.sub(&proj_part).map(Some)
    })();
    checks.push(check_from_defect("fiber closed under d".into(), closure));

    // restrictions land in the fiber
    for k in 2..=module.arity_bound {
        let Some(op) = module.op_full(k) else { continue };
        let name = format!("m_{k} restricts to the fiber");
        let contain = (|| {
            let restricted = compose(op, &module.embed_last(k))?;
            let back = compose(&module.include, &compose(&module.project, &restricted)?)?;
            restricted.sub(&back).map(Some)
        })();
        checks.push(check_from_defect(name, contain));
    }

    // m_2 is a chain map
    let m2_chain = (|| match module.op_full(2) {
        Some(m2) => {
            let lhs = compose(m2, &module.tensor_d(2))?;
            let rhs = compose(&module.total.d, m2)?;
            lhs.sub(&rhs).map(Some)
        }
        None => Ok(None),
    })();
    checks.push(check_from_defect("m_2 is a chain map".into(), m2_chain));

    for n in 3..=module.arity_bound {
        let name = format!("path module equation N={n}");
        checks.push(check_from_defect(name, path_equation_lhs(module, n)));
    }
    checks
}

/// A morphism of path modules of degree `shift`: a chain map
/// `eta_1 : E1 -> E2` and maps
/// `eta_k : F1 (x) A^{(x) k-2} (x) P -> E2` of degree `shift + k - 1`.
#[derive(Debug, Clone)]
pub struct PathMorphism {
    pub source: Arc<PathModule>,
    pub target: Arc<PathModule>,
    pub shift: Degree,
    pub eta1: GradedMap,
    pub etas: BTreeMap<usize, GradedMap>,
    pub arity_bound: usize,
}

impl PathMorphism {
    pub fn new(
        source: Arc<PathModule>,
        target: Arc<PathModule>,
        shift: Degree,
        eta1: GradedMap,
        arity_bound: usize,
    ) -> Result<Self, AlgebraError> {
        if eta1.source.as_ref() != source.total.space.as_ref()
            || eta1.target.as_ref() != target.total.space.as_ref()
            || eta1.degree != shift
        {
            return Err(AlgebraError::ShapeMismatch {
                degree: shift,
                detail: "eta_1 must map E1 to E2 with the stated degree".into(),
            });
        }
        Ok(PathMorphism {
            source,
            target,
            shift,
            eta1,
            etas: BTreeMap::new(),
            arity_bound,
        })
    }

    pub fn identity(module: Arc<PathModule>) -> Self {
        let id = GradedMap::identity(module.total.space.clone());
        let arity = module.arity_bound;
        let mut m = PathMorphism::new(module.clone(), module, 0, id, arity)
            .expect("identity is well-shaped");
        m.arity_bound = arity;
        m
    }

    pub fn set_component(&mut self, k: usize, map: GradedMap) -> Result<(), AlgebraError> {
        if k < 2 {
            return Err(AlgebraError::BadInput(
                "higher components start at k = 2; eta_1 is fixed at construction".into(),
            ));
        }
        let expected = self.source.dom_full(k);
        if map.source.as_ref() != expected.as_ref()
            || map.target.as_ref() != self.target.total.space.as_ref()
        {
            return Err(AlgebraError::ShapeMismatch {
                degree: 0,
                detail: format!("eta_{k} must map F1(x)A^(x){}(x)P to E2", k - 2),
            });
        }
        if map.degree != self.shift + k as Degree - 1 {
            return Err(AlgebraError::WrongDegree {
                expected: self.shift + k as Degree - 1,
                found: map.degree,
            });
        }
        if map.is_zero_map() {
            self.etas.remove(&k);
        } else {
            self.etas.insert(k, map);
        }
        Ok(())
    }

    pub fn component(&self, k: usize) -> Option<&GradedMap> {
        if k == 1 {
            (!self.eta1.is_zero_map()).then_some(&self.eta1)
        } else {
            self.etas.get(&k).filter(|m| !m.is_zero_map())
        }
    }

    /// `eta_k` restricted along the embedding and projected to the target
    /// fiber: `F1 (x) A^{(x) k-1} -> F2`. For `k = 1` this is
    /// `pi2 o eta_1 o iota1`.
    pub fn restricted(&self, k: usize) -> Option<GradedMap> {
        if k == 1 {
            let r = compose(
                &self.target.project,
                &compose(&self.eta1, &self.source.include).unwrap(),
            )
            .unwrap();
            return (!r.is_zero_map()).then_some(r);
        }
        let op = self.component(k)?;
        let id_f = GradedMap::identity(self.source.fiber_space.clone());
        let id_a = GradedMap::identity(self.source.pair.algebra.space().clone());
        let mut parts: Vec<&GradedMap> = vec![&id_f];
        parts.extend(std::iter::repeat(&id_a).take(k - 2));
        parts.push(&self.source.pair.embed);
        let restricted = compose(op, &tensor_maps_all(&parts)).unwrap();
        let projected = compose(&self.target.project, &restricted).unwrap();
        (!projected.is_zero_map()).then_some(projected)
    }

    /// The restricted family as an A-infinity morphism between the fiber
    /// modules.
    pub fn fiber_morphism(&self) -> Result<AInftyMorphism, AlgebraError> {
        let src = Arc::new(self.source.fiber_module()?);
        let tgt = Arc::new(self.target.fiber_module()?);
        let mut f = AInftyMorphism::new(src, tgt, self.shift, self.arity_bound);
        for k in 1..=self.arity_bound {
            if let Some(map) = self.restricted(k) {
                f.set_component(k, map)?;
            }
        }
        Ok(f)
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0
            && self.etas.is_empty()
            && self.source.total.space == self.target.total.space
            && self.eta1 == GradedMap::identity(self.source.total.space.clone())
    }

    /// `(restricted eta_r) (x) id_A^{(x) pad_a} (x) id_P`.
    fn restricted_padded(&self, r: usize, pad_a: usize) -> Option<GradedMap> {
        let op = self.restricted(r)?;
        let id_a = GradedMap::identity(self.source.pair.algebra.space().clone());
        let id_p = GradedMap::identity(self.source.pair.path_space().clone());
        let mut parts: Vec<&GradedMap> = vec![&op];
        parts.extend(std::iter::repeat(&id_a).take(pad_a));
        parts.push(&id_p);
        Some(tensor_maps_all(&parts))
    }
}

/// `id_F (x) ... (x) mu (x) ... (x) id` on the morphism-equation domain
/// `F1 (x) A^{(x) n-1} (x) P`; position `r = n-1` multiplies into `P`.
fn morphism_mu_at(module: &PathModule, n: usize, r: usize) -> GradedMap {
    assert!(n >= 2 && (1..=n - 1).contains(&r));
    let id_f = GradedMap::identity(module.fiber_space.clone());
    let id_a = GradedMap::identity(module.pair.algebra.space().clone());
    let id_p = GradedMap::identity(module.pair.path_space().clone());
    let mut parts: Vec<&GradedMap> = vec![&id_f];
    if r < n - 1 {
        parts.extend(std::iter::repeat(&id_a).take(r - 1));
        parts.push(&module.pair.algebra.mu);
        parts.extend(std::iter::repeat(&id_a).take(n - 2 - r));
        parts.push(&id_p);
    } else {
        parts.extend(std::iter::repeat(&id_a).take(n - 2));
        parts.push(&module.pair.action);
    }
    tensor_maps_all(&parts)
}

/// Left-hand side of the path-morphism equation at index `n >= 1`, in the
/// same canonical organization as the A-infinity morphism equation:
///
/// `(-1)^m d eta_{n+1}
///  + sum_{k=1}^{n} (-1)^{(n-k)k}   m^tgt_{k+1} (eta_{n-k+1}^F (x) id^k)
///  - sum_{s=1}^{n} (-1)^{(n-s)(s+1)} eta_{n-s+1} (m^src_{s+1} (x) id^{n-s})
///  - (-1)^n eta_{n+1} d
///  - sum_{r=1}^{n-1} (-1)^r eta_n (id^r (x) mu (x) id^{n-1-r})  = 0`,
///
/// where the target-side sum uses the fiber restrictions of `eta` and the
/// source-side sum the fiber restrictions of `m^src`; the top terms
/// `s = n` and `k = n` go through the full forms and `eta_1`.
fn path_morphism_equation_lhs(
    f: &PathMorphism,
    n: usize,
) -> Result<Option<GradedMap>, AlgebraError> {
    let src = &f.source;
    let tgt = &f.target;
    let mut acc: Option<GradedMap> = None;

    if let Some(top) = f.component(n + 1) {
        acc_add(
            &mut acc,
            compose(&tgt.total.d, top)?.scale(&scalar::sign(f.shift)),
        )?;
        acc_add(
            &mut acc,
            compose(top, &src.tensor_d(n + 1))?.scale(&scalar::sign(n as i64 + 1)),
        )?;
    }

    for k in 1..=n {
        // m^tgt_{k+1} (eta_{n-k+1}^restricted (x) id^k); the innermost
        // eta is eta_1 restricted to the fiber when k = n
        if let Some(m_tgt) = tgt.op_full(k + 1) {
            if let Some(inner) = f.restricted_padded(n - k + 1, k - 1) {
                let term = compose(m_tgt, &inner)?;
                acc_add(&mut acc, term.scale(&scalar::sign(((n - k) * k) as i64)))?;
            }
        }
        // eta_{n-s+1} (m^src_{s+1}^restricted (x) id^{n-s}); full source
        // op through eta_1 when s = n
        let s = k;
        if s == n {
            if let Some(m_src) = src.op_full(n + 1) {
                let term = compose(&f.eta1, m_src)?;
                acc_add(&mut acc, term.scale(&scalar::sign(1)))?;
            }
        } else if let (Some(eta), Some(inner)) =
            (f.component(n - s + 1), src.restricted_padded(s + 1, n + 1))
        {
            let term = compose(eta, &inner)?;
            acc_add(
                &mut acc,
                term.scale(&scalar::sign(((n - s) * (s + 1)) as i64 + 1)),
            )?;
        }
    }

    if n >= 2 {
        if let Some(eta_n) = f.component(n) {
            for r in 1..=n - 1 {
                let term = compose(eta_n, &morphism_mu_at(src, n, r))?;
                acc_add(&mut acc, term.scale(&scalar::sign(r as i64 + 1)))?;
            }
        }
    }
    Ok(acc)
}

/// Verifies a path morphism: `eta_1` a shifted chain map preserving the
/// fiber, each `eta_k` restricting into the target fiber, and the
/// morphism equations for `1 <= N <= arity_bound - 1`.
pub fn verify_path_morphism(f: &PathMorphism) -> Vec<Check> {
    let mut checks = Vec::new();

    // N = 0: shifted chain-map contract for eta_1
    let chain = (|| {
        let lhs = compose(&f.eta1, &f.source.total.d)?;
        let rhs = compose(&f.target.total.d, &f.eta1)?.scale(&scalar::sign(f.shift));
        lhs.sub(&rhs).map(Some)
    })();
    checks.push(check_from_defect(
        "eta_1 is a chain map of the stated degree".into(),
        chain,
    ));

    // eta_1 preserves the fiber
    let preserve = (|| {
        let on_fiber = compose(&f.eta1, &f.source.include)?;
        let back = compose(&f.target.include, &compose(&f.target.project, &on_fiber)?)?;
        on_fiber.sub(&back).map(Some)
    })();
    checks.push(check_from_defect(
        "eta_1 preserves the fiber".into(),
        preserve,
    ));

    for k in 2..=f.arity_bound {
        let Some(op) = f.component(k) else { continue };
        let name = format!("eta_{k} restricts to the fiber");
        let contain = (|| {
            let id_f = GradedMap::identity(f.source.fiber_space.clone());
            let id_a = GradedMap::identity(f.source.pair.algebra.space().clone());
            let mut parts: Vec<&GradedMap> = vec![&id_f];
            parts.extend(std::iter::repeat(&id_a).take(k - 2));
            parts.push(&f.source.pair.embed);
            let restricted = compose(op, &tensor_maps_all(&parts))?;
            let back = compose(&f.target.include, &compose(&f.target.project, &restricted)?)?;
            restricted.sub(&back).map(Some)
        })();
        checks.push(check_from_defect(name, contain));
    }

    for n in 1..f.arity_bound {
        let name = format!("path morphism equation N={n}");
        checks.push(check_from_defect(name, path_morphism_equation_lhs(f, n)));
    }
    checks
}

/// Composition of path morphisms:
/// `(eta' o eta)_k = sum_{r=1}^{k} (-1)^{(r-1)(k-r)} eta'_{k-r+1} (eta_r (x) id^{k-r})`.
pub fn compose_path(
    outer: &PathMorphism,
    inner: &PathMorphism,
) -> Result<PathMorphism, AlgebraError> {
    if inner.target.total.space != outer.source.total.space {
        return Err(AlgebraError::ShapeMismatch {
            degree: 0,
            detail: "target of inner path morphism differs from source of outer".into(),
        });
    }
    let arity_bound = inner.arity_bound.min(outer.arity_bound);
    let eta1 = compose(&outer.eta1, &inner.eta1)?;
    let mut out = PathMorphism::new(
        inner.source.clone(),
        outer.target.clone(),
        inner.shift + outer.shift,
        eta1,
        arity_bound,
    )?;
    for k in 2..=arity_bound {
        let mut acc: Option<GradedMap> = None;
        for r in 1..=k {
            let sign = scalar::sign(((r - 1) * (k - r)) as i64);
            if r == k {
                if let Some(inner_k) = inner.component(k) {
                    acc_add(&mut acc, compose(&outer.eta1, inner_k)?.scale(&sign))?;
                }
            } else if let Some(outer_part) = outer.component(k - r + 1) {
                if let Some(padded) = inner.restricted_padded(r, k - r - 1) {
                    acc_add(&mut acc, compose(outer_part, &padded)?.scale(&sign))?;
                }
            }
        }
        if let Some(map) = acc {
            out.set_component(k, map)?;
        }
    }
    Ok(out)
}

/// Inverts a path-module morphism whose `eta_1` is an isomorphism
/// carrying the source fiber onto the target fiber:
/// `zeta_1 = eta_1^{-1}`,
/// `zeta_{N+1} = -eta_1^{-1} ( sum_r (-1)^{r(N-r)} eta_{N-r+1} (zeta_{r+1} (x) id^{N-r}) )`.
///
/// Both composites with the original equal the identity family exactly.
pub fn invert_path_iso(f: &PathMorphism) -> Result<PathMorphism, AlgebraError> {
    let eta1_inv = invert_map(&f.eta1)?;
    // eta_1 must carry F1 onto F2: its fiber restriction must be
    // invertible as a map of fiber spaces
    let fiber_part = compose(&f.target.project, &compose(&f.eta1, &f.source.include)?)?;
    invert_map(&fiber_part).map_err(|_| {
        AlgebraError::BadInput("eta_1 does not restrict to an isomorphism of fibers".into())
    })?;

    let mut g = PathMorphism::new(
        f.target.clone(),
        f.source.clone(),
        -f.shift,
        eta1_inv.clone(),
        f.arity_bound,
    )?;
    for big_n in 1..f.arity_bound {
        let mut acc: Option<GradedMap> = None;
        for r in 0..=big_n - 1 {
            let sign = scalar::sign((r * (big_n - r)) as i64);
            let Some(f_part) = f.component(big_n - r + 1) else {
                continue;
            };
            let Some(padded) = g.restricted_padded(r + 1, big_n - r - 1) else {
                continue;
            };
            acc_add(&mut acc, compose(f_part, &padded)?.scale(&sign))?;
        }
        if let Some(sum) = acc {
            let next = compose(&eta1_inv, &sum)?.scale(&scalar::int(-1));
            g.set_component(big_n + 1, next)?;
        }
    }
    Ok(g)
}

/// A homotopy retract of the total complex of a path module that
/// restricts to the fiber: the small complex carries a designated fiber
/// label subset, and `i`, `p`, `h` all preserve fibers.
#[derive(Debug, Clone)]
pub struct PathRetract {
    pub retract: HomotopyRetract,
    pub small_fiber: BTreeMap<Degree, Vec<String>>,
}

/// Builds a fiber-preserving retract onto homology for a path module
/// whose non-fiber labels also span a subcomplex (the split case): the
/// retract is the direct sum of retracts of the two parts. Small labels
/// are prefixed `F.` and `C.`.
pub fn split_retract(module: &PathModule) -> Result<PathRetract, AlgebraError> {
    let total = &module.total;
    let fiber = &module.fiber_space;
    let is_fiber = |q: Degree, l: &str| -> bool { fiber.position(q, l).is_some() };

    // complement labels
    let mut comp_pairs: Vec<(Degree, String)> = Vec::new();
    for (q, _, l) in total.space.iter_basis() {
        if !is_fiber(q, l) {
            comp_pairs.push((q, l.to_string()));
        }
    }
    let comp_refs: Vec<(Degree, &str)> =
        comp_pairs.iter().map(|(q, l)| (*q, l.as_str())).collect();
    let comp_space = GradedSpace::from_pairs(&comp_refs);

    // build the two subcomplexes, checking that d preserves each part
    let sub_d = |space: &Arc<GradedSpace>| -> Result<GradedMap, AlgebraError> {
        let mut d = GradedMap::zero(space.clone(), space.clone(), -1);
        for (q, row, col, coeff) in total.d.iter_entries() {
            let src = total.space.label(q, col);
            let tgt = total.space.label(q - 1, row);
            match (space.position(q, src), space.position(q - 1, tgt)) {
                (Some(_), Some(_)) => d.add_entry(q, tgt, src, coeff.clone())?,
                (Some(_), None) => {
                    return Err(AlgebraError::BadRetract(format!(
                        "differential leaks out of the subcomplex at {src}"
                    )))
                }
                _ => {}
            }
        }
        Ok(d)
    };
    let fiber_cx = ChainComplex::new(fiber.clone(), sub_d(fiber)?)?;
    let comp_cx = ChainComplex::new(comp_space.clone(), sub_d(&comp_space)?)?;

    let rf = crate::complex::retract_to_homology(&fiber_cx);
    let rc = crate::complex::retract_to_homology(&comp_cx);

    // assemble the small space with prefixed labels
    let mut small_pairs: Vec<(Degree, String)> = Vec::new();
    let mut small_fiber: BTreeMap<Degree, Vec<String>> = BTreeMap::new();
    for (q, _, l) in rf.small.space.iter_basis() {
        small_pairs.push((q, format!("F.{l}")));
        small_fiber.entry(q).or_default().push(format!("F.{l}"));
    }
    for (q, _, l) in rc.small.space.iter_basis() {
        small_pairs.push((q, format!("C.{l}")));
    }
    let small_refs: Vec<(Degree, &str)> =
        small_pairs.iter().map(|(q, l)| (*q, l.as_str())).collect();
    let small_space = GradedSpace::from_pairs(&small_refs);
    let small = Arc::new(ChainComplex::zero_differential(small_space.clone()));

    let mut i = GradedMap::zero(small_space.clone(), total.space.clone(), 0);
    let mut p = GradedMap::zero(total.space.clone(), small_space.clone(), 0);
    let mut h = GradedMap::zero(total.space.clone(), total.space.clone(), 1);
    for (part, r, prefix) in [(0usize, &rf, "F."), (1usize, &rc, "C.")] {
        let part_space = if part == 0 { fiber } else { &comp_space };
        for (q, row, col, coeff) in r.i.iter_entries() {
            let small_l = format!("{prefix}{}", r.small.space.label(q, col));
            let big_l = part_space.label(q, row);
            i.add_entry(q, big_l, &small_l, coeff.clone())?;
        }
        for (q, row, col, coeff) in r.p.iter_entries() {
            let small_l = format!("{prefix}{}", r.small.space.label(q, row));
            let big_l = part_space.label(q, col);
            p.add_entry(q, &small_l, big_l, coeff.clone())?;
        }
        for (q, row, col, coeff) in r.h.iter_entries() {
            let from = part_space.label(q, col);
            let to = part_space.label(q + 1, row);
            h.add_entry(q, to, from, coeff.clone())?;
        }
    }
    let retract = HomotopyRetract {
        big: Arc::new(total.clone()),
        small,
        i,
        p,
        h,
    };
    Ok(PathRetract {
        retract,
        small_fiber,
    })
}

fn fiber_preserving_defect(
    map: &GradedMap,
    src_include: &GradedMap,
    tgt_include: &GradedMap,
    tgt_project: &GradedMap,
) -> Result<GradedMap, AlgebraError> {
    let on_fiber = compose(map, src_include)?;
    let back = compose(tgt_include, &compose(tgt_project, &on_fiber)?)?;
    on_fiber.sub(&back)
}

/// Homotopy transfer for strict path modules: transports the structure
/// across a fiber-preserving retract onto a smaller complex, returning
/// the transferred path module together with inclusion and projection as
/// path morphisms. Rejects retracts that do not preserve fibers.
pub fn transfer_path(
    module: &PathModule,
    retract: &PathRetract,
    arity_bound: usize,
) -> Result<(Arc<PathModule>, PathMorphism, PathMorphism), AlgebraError> {
    if !module.is_strict() {
        return Err(AlgebraError::BadInput(
            "homotopy transfer starts from a strict path module".into(),
        ));
    }
    let r = &retract.retract;
    if r.big.space.as_ref() != module.total.space.as_ref() {
        return Err(AlgebraError::BadRetract(
            "retract is not over the total complex".into(),
        ));
    }
    if !r.is_valid() {
        return Err(AlgebraError::BadRetract(
            "retract identities do not hold".into(),
        ));
    }

    // small fiber inclusion/projection
    let mut small_fiber_pairs: Vec<(Degree, &str)> = Vec::new();
    for (q, labels) in &retract.small_fiber {
        for l in labels {
            small_fiber_pairs.push((*q, l.as_str()));
        }
    }
    let small_fiber_space = GradedSpace::from_pairs(&small_fiber_pairs);
    let mut inc_small = GradedMap::zero(small_fiber_space.clone(), r.small.space.clone(), 0);
    let mut proj_small = GradedMap::zero(r.small.space.clone(), small_fiber_space.clone(), 0);
    for (q, _, l) in small_fiber_space.iter_basis() {
        inc_small.add_entry(q, l, l, scalar::int(1))?;
        proj_small.add_entry(q, l, l, scalar::int(1))?;
    }

    // fiber preservation of i, p, h
    for (name, defect) in [
        (
            "i",
            fiber_preserving_defect(&r.i, &inc_small, &module.include, &module.project)?,
        ),
        (
            "p",
            fiber_preserving_defect(&r.p, &module.include, &inc_small, &proj_small)?,
        ),
        (
            "h",
            fiber_preserving_defect(&r.h, &module.include, &module.include, &module.project)?,
        ),
    ] {
        if !defect.is_zero_map() {
            return Err(AlgebraError::BadRetract(format!(
                "retract does not preserve fibers: {name} leaks"
            )));
        }
    }

    // fiber-restricted retract maps
    let i_f = compose(&module.project, &compose(&r.i, &inc_small)?)?;
    let p_f = compose(&proj_small, &compose(&r.p, &module.include)?)?;
    let h_f = compose(&module.project, &compose(&r.h, &module.include)?)?;
    let _ = &p_f;

    let m2_full = module
        .op_full(2)
        .cloned()
        .unwrap_or_else(|| GradedMap::zero(module.dom_full(2), module.total.space.clone(), 0));
    let m2_rest = module.op_restricted(2).unwrap_or_else(|| {
        GradedMap::zero(
            crate::ainfty::module_domain(&module.fiber_space, module.pair.algebra.space(), 2),
            module.fiber_space.clone(),
            0,
        )
    });

    let id_a = GradedMap::identity(module.pair.algebra.space().clone());
    let id_p = GradedMap::identity(module.pair.path_space().clone());
    let pad_a = |op: &GradedMap| tensor_maps_all(&[op, &id_a]);
    let pad_p = |op: &GradedMap| tensor_maps_all(&[op, &id_p]);

    // restricted words w_k^r : Fs (x) A^{k-1} -> F and full words
    // w_k^f : Fs (x) A^{k-2} (x) P -> E
    let mut w_rest: BTreeMap<usize, GradedMap> = BTreeMap::new();
    let mut w_full: BTreeMap<usize, GradedMap> = BTreeMap::new();
    if arity_bound >= 2 {
        w_rest.insert(2, compose(&m2_rest, &pad_a(&i_f))?);
        w_full.insert(2, compose(&m2_full, &pad_p(&i_f))?);
    }
    for k in 3..=arity_bound {
        let hw = compose(&h_f, &w_rest[&(k - 1)])?;
        w_rest.insert(k, compose(&m2_rest, &pad_a(&hw))?);
        w_full.insert(k, compose(&m2_full, &pad_p(&hw))?);
    }

    // transferred operations on the small side
    let small_total = r.small.as_ref().clone();
    let pair = module.pair.clone();
    let mut small_ops: BTreeMap<usize, GradedMap> = BTreeMap::new();
    for k in 2..=arity_bound {
        let m_k = compose(&r.p, &w_full[&k])?.scale(&transfer_sign_m(k));
        if !m_k.is_zero_map() {
            small_ops.insert(k, m_k);
        }
    }
    let transferred = Arc::new(PathModule::new(
        pair,
        small_total,
        retract.small_fiber.clone(),
        small_ops,
        arity_bound,
    )?);

    let big = Arc::new(module.clone());

    // inclusion morphism: eta_1 = i, eta_k = sign * h w_k^f
    let mut inc = PathMorphism::new(
        transferred.clone(),
        big.clone(),
        0,
        r.i.clone(),
        arity_bound,
    )?;
    for k in 2..=arity_bound {
        let i_k = compose(&r.h, &w_full[&k])?.scale(&transfer_sign_i(k));
        inc.set_component(k, i_k)?;
    }

    // projection morphism: eta_1 = p, words u_k with h innermost
    let mut proj = PathMorphism::new(big, transferred.clone(), 0, r.p.clone(), arity_bound)?;
    let mut u_rest: BTreeMap<usize, GradedMap> = BTreeMap::new();
    let mut u_full: BTreeMap<usize, GradedMap> = BTreeMap::new();
    if arity_bound >= 2 {
        u_rest.insert(2, compose(&m2_rest, &pad_a(&h_f))?);
        u_full.insert(2, compose(&m2_full, &pad_p(&h_f))?);
    }
    for k in 3..=arity_bound {
        let hu = compose(&h_f, &u_rest[&(k - 1)])?;
        u_rest.insert(k, compose(&m2_rest, &pad_a(&hu))?);
        u_full.insert(k, compose(&m2_full, &pad_p(&hu))?);
    }
    for k in 2..=arity_bound {
        let p_k = compose(&r.p, &u_full[&k])?.scale(&transfer_sign_p(k));
        proj.set_component(k, p_k)?;
    }

    Ok((transferred, inc, proj))
}

// same sign families as the module-level homotopy transfer
fn choose2(k: i64) -> i64 {
    k * (k - 1) / 2
}

fn transfer_sign_m(k: usize) -> Scalar {
    scalar::sign(choose2(k as i64) + 1)
}

fn transfer_sign_i(k: usize) -> Scalar {
    scalar::sign(choose2(k as i64))
}

fn transfer_sign_p(k: usize) -> Scalar {
    scalar::sign(choose2(k as i64 - 1))
}

/// Inverts a path morphism whose `eta_1` is a quasi-isomorphism, up to
/// homotopy: transfer both sides onto homology, invert there, transport
/// back. The result satisfies `H(zeta_1) = H(eta_1)^{-1}`.
pub fn invert_path_quasi(
    f: &PathMorphism,
    r_src: &PathRetract,
    r_tgt: &PathRetract,
) -> Result<PathMorphism, AlgebraError> {
    let k = f.arity_bound;
    let (_, i_src, _) = transfer_path(&f.source, r_src, k)?;
    let (_, _, p_tgt) = transfer_path(&f.target, r_tgt, k)?;
    let eps = compose_path(&p_tgt, &compose_path(f, &i_src)?)?;
    let eps_inv = invert_path_iso(&eps)?;
    compose_path(&i_src, &compose_path(&eps_inv, &p_tgt)?)
}

/// A strict path module from a strict module over `A` with `P = A`:
/// total = fiber = the module carrier, `m_2` = the action.
pub fn path_module_over_self(
    module: &StrictModule,
    arity_bound: usize,
) -> Result<PathModule, AlgebraError> {
    let pair = PathPair::over_self(&module.algebra);
    let mut fiber_labels: BTreeMap<Degree, Vec<String>> = BTreeMap::new();
    for (q, _, l) in module.space().iter_basis() {
        fiber_labels.entry(q).or_default().push(l.to_string());
    }
    let mut out = PathModule::new(
        pair,
        module.complex.clone(),
        fiber_labels,
        BTreeMap::new(),
        arity_bound,
    )?;
    // the action lives over M (x) A while the path domain is built over
    // the relabeled fiber space; the label sets agree, the orderings may
    // not (for tensor-product carriers), so re-express by labels
    let action = module
        .action
        .reindexed(out.dom_full(2), out.total.space.clone())?;
    out.set_op(2, action)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{exterior_poly_dga, group_algebra, regular_module};
    use crate::random::{random_map, rng_from_seed};
    use crate::scalar::int;
    use rand::Rng;

    fn self_path_module(r: usize, arity: usize) -> Arc<PathModule> {
        let a = exterior_poly_dga(r);
        let m = regular_module(&a);
        Arc::new(path_module_over_self(&m, arity).unwrap())
    }

    /// Path module with genuine fiber `M (x) v0` inside `M (x) V'` over
    /// `P = A (x) V'`, for `V'` a pointed complex with `d v0 = 0`.
    pub(crate) fn free_path_module(arity: usize) -> Arc<PathModule> {
        let a = exterior_poly_dga(2);
        // V': v0 in degree 0 (the basepoint cycle), w1 -> w0 an interval
        let v_space = GradedSpace::from_pairs(&[(0, "v0"), (0, "w0"), (1, "w1")]);
        let mut dv = GradedMap::zero(v_space.clone(), v_space.clone(), -1);
        dv.add_entry(1, "w0", "w1", int(1)).unwrap();
        let v = ChainComplex::new(v_space.clone(), dv).unwrap();

        // P = A (x) V' as a left A-module, embed a -> a (x) v0
        let p_space = tensor_all(&[a.space().as_ref(), v_space.as_ref()]);
        let id_v = GradedMap::identity(v_space.clone());
        let dp = crate::ainfty::koszul_differential(&[
            (a.space(), &a.complex.d),
            (&v_space, &v.d),
        ]);
        let p_cx = ChainComplex::new(p_space.clone(), dp).unwrap();
        let action = tensor_maps_all(&[&a.mu, &id_v]);
        let mut embed = GradedMap::zero(a.space().clone(), p_space.clone(), 0);
        let sep = crate::graded::TENSOR_SEP;
        for (q, _, l) in a.space().iter_basis() {
            embed
                .add_entry(q, &format!("{l}{sep}v0"), l, int(1))
                .unwrap();
        }
        let pair = PathPair::new(a.clone(), p_cx, action, embed).unwrap();
        for c in verify_path_pair(&pair) {
            assert!(c.passed, "pair: {} {:?}", c.name, c.witness);
        }

        // E = M (x) V' with M the regular module; fiber = M (x) v0
        let m = regular_module(&a);
        let e_space = tensor_all(&[m.space().as_ref(), v_space.as_ref()]);
        let de = crate::ainfty::koszul_differential(&[
            (m.space(), &m.complex.d),
            (&v_space, &v.d),
        ]);
        let e_cx = ChainComplex::new(e_space.clone(), de).unwrap();
        let mut fiber_labels: BTreeMap<Degree, Vec<String>> = BTreeMap::new();
        for (q, _, l) in m.space().iter_basis() {
            fiber_labels
                .entry(q)
                .or_default()
                .push(format!("{l}{sep}v0"));
        }
        // m_2 : (m (x) v0) (x) (a (x) v) -> (m a) (x) v; |v0| = 0 so no
        // Koszul signs appear in this assignment
        let dom = {
            let mut fiber_pairs: Vec<(Degree, String)> = Vec::new();
            for (q, labels) in &fiber_labels {
                for l in labels {
                    fiber_pairs.push((*q, l.clone()));
                }
            }
            let refs: Vec<(Degree, &str)> =
                fiber_pairs.iter().map(|(q, l)| (*q, l.as_str())).collect();
            let fiber_space = GradedSpace::from_pairs(&refs);
            tensor_all(&[fiber_space.as_ref(), p_space.as_ref()])
        };
        let mut m2 = GradedMap::zero(dom.clone(), e_space.clone(), 0);
        for (qm, _, lm) in m.space().iter_basis() {
            for (qa, _, la) in a.space().iter_basis() {
                for (qv, _, lv) in v_space.iter_basis() {
                    let prod = crate::ainfty::apply_bilinear(
                        &a.mu,
                        &crate::graded::Chain::basis(a.space().clone(), qm, lm).unwrap(),
                        &crate::graded::Chain::basis(a.space().clone(), qa, la).unwrap(),
                    );
                    for (&(qp, ip), coeff) in &prod.terms {
                        let lp = a.space().label(qp, ip);
                        m2.add_entry(
                            qm + qa + qv,
                            &format!("{lp}{sep}{lv}"),
                            &format!("{lm}{sep}v0{sep}{la}{sep}{lv}"),
                            coeff.clone(),
                        )
                        .unwrap();
                    }
                }
            }
        }
        let mut ops = BTreeMap::new();
        ops.insert(2, m2);
        Arc::new(PathModule::new(pair, e_cx, fiber_labels, ops, arity).unwrap())
    }

    #[test]
    fn strict_self_path_module_verifies() {
        let e = self_path_module(2, 4);
        for c in verify_path_module(&e) {
            assert!(c.passed, "{} {:?}", c.name, c.witness);
        }
    }

    #[test]
    fn free_path_module_verifies() {
        let e = free_path_module(4);
        for c in verify_path_module(&e) {
            assert!(c.passed, "{} {:?}", c.name, c.witness);
        }
        // genuine proper fiber
        assert!(e.fiber_space().total_dim() < e.total.space.total_dim());
    }

    #[test]
    fn identity_and_trivial_morphisms_verify() {
        let e = free_path_module(4);
        let id = PathMorphism::identity(e.clone());
        for c in verify_path_morphism(&id) {
            assert!(c.passed, "{} {:?}", c.name, c.witness);
        }
        assert!(id.is_identity());
        // trivial coherent chain homotopy on a strictly equivariant
        // eta_1: scaling by 3 is equivariant and fiber-preserving
        let scaled = GradedMap::identity(e.total.space.clone()).scale(&int(3));
        let triv = PathMorphism::new(e.clone(), e.clone(), 0, scaled, 4).unwrap();
        for c in verify_path_morphism(&triv) {
            assert!(c.passed, "{} {:?}", c.name, c.witness);
        }
    }

    #[test]
    fn perturbed_m3_fails() {
        let e = free_path_module(4);
        let mut bad = e.as_ref().clone();
        let dom = bad.dom_full(3);
        let m3 = {
            let mut rng = rng_from_seed(7);
            loop {
                let cand = random_map(&mut rng, &dom, &bad.total.space, 1, 0.3);
                if !cand.is_zero_map() {
                    break cand;
                }
            }
        };
        bad.set_op(3, m3).unwrap();
        let checks = verify_path_module(&bad);
        assert!(checks.iter().any(|c| !c.passed
            && (c.name.ends_with("N=3")
                || c.name.ends_with("N=4")
                || c.name.contains("restricts"))));
    }

    #[test]
    fn fiber_restriction_is_an_ainfty_morphism() {
        let e = free_path_module(4);
        let id = PathMorphism::identity(e.clone());
        let fm = id.fiber_morphism().unwrap();
        for c in crate::ainfty::verify_morphism(&fm) {
            assert!(c.passed, "{} {:?}", c.name, c.witness);
        }
        let module = e.fiber_module().unwrap();
        for c in crate::ainfty::verify_ainfty_module(&module) {
            assert!(c.passed, "{} {:?}", c.name, c.witness);
        }
    }

    #[test]
    fn compose_with_identity() {
        let e = free_path_module(4);
        let id = PathMorphism::identity(e.clone());
        let scaled = GradedMap::identity(e.total.space.clone()).scale(&int(-2));
        let f = PathMorphism::new(e.clone(), e.clone(), 0, scaled, 4).unwrap();
        let left = compose_path(&id, &f).unwrap();
        let right = compose_path(&f, &id).unwrap();
        assert_eq!(left.eta1, f.eta1);
        assert_eq!(right.eta1, f.eta1);
        assert!(left.etas.is_empty() && right.etas.is_empty());
    }

    #[test]
    fn strict_iso_inverts_trivially() {
        let e = self_path_module(2, 4);
        let scaled = GradedMap::identity(e.total.space.clone()).scale(&int(5));
        let f = PathMorphism::new(e.clone(), e.clone(), 0, scaled, 4).unwrap();
        let g = invert_path_iso(&f).unwrap();
        assert!(g.etas.is_empty());
        let gf = compose_path(&g, &f).unwrap();
        assert!(gf.is_identity());
    }

    #[test]
    fn inversion_roundtrip_random_families() {
        // arbitrary eta_k with invertible fiber-preserving eta_1: the
        // roundtrip is formal; use a genuine fiber so restriction logic
        // is exercised
        let e = free_path_module(4);
        let mut rng = rng_from_seed(99);
        for case in 0..6 {
            // eta_1 = id plus random fiber <- complement mixing (block
            // triangular, hence invertible and fiber-preserving)
            let mut eta1 = GradedMap::identity(e.total.space.clone());
            for (q, col, l) in e.total.space.iter_basis() {
                if e.fiber_space().position(q, l).is_some() {
                    continue;
                }
                if rng.gen_bool(0.4) {
                    let rows = e.fiber_space().dim(q);
                    if rows > 0 {
                        let fl = e.fiber_space().labels(q)[rng.gen_range(0..rows)].clone();
                        let row = e.total.space.position(q, &fl).unwrap();
                        eta1.add_entry_idx(q, row, col, int(1));
                    }
                }
            }
            let mut f = PathMorphism::new(e.clone(), e.clone(), 0, eta1, 4).unwrap();
            for k in 2..=4 {
                let dom = e.dom_full(k);
                let map = random_map(&mut rng, &dom, &e.total.space, k as Degree - 1, 0.3);
                f.set_component(k, map).unwrap();
            }
            let g = invert_path_iso(&f).unwrap();
            let gf = compose_path(&g, &f).unwrap();
            let fg = compose_path(&f, &g).unwrap();
            assert!(
                gf.is_identity(),
                "case {case}: g o f keys {:?}",
                gf.etas.keys()
            );
            assert!(
                fg.is_identity(),
                "case {case}: f o g keys {:?}",
                fg.etas.keys()
            );
        }
    }

    #[test]
    fn path_composition_is_associative() {
        // random path morphisms whose components genuinely restrict to
        // the fibers (composition of path morphisms is only functorial
        // through the fiber restrictions)
        let e = free_path_module(4);
        let mut rng = rng_from_seed(77);

        // splitting rho : P -> A with rho o embed = id, available for
        // the free fixture where P = A (x) V' and embed hits v0
        let a_space = e.pair.algebra.space().clone();
        let p_space = e.pair.path_space().clone();
        let mut rho = GradedMap::zero(p_space.clone(), a_space.clone(), 0);
        let sep = crate::graded::TENSOR_SEP;
        for (q, _, l) in a_space.iter_basis() {
            rho.add_entry(q, l, &format!("{l}{sep}v0"), int(1)).unwrap();
        }
        let complement = GradedMap::identity(p_space.clone())
            .sub(&compose(&e.pair.embed, &rho).unwrap())
            .unwrap();

        let random_morphism = |rng: &mut rand_chacha::ChaCha8Rng| {
            let mut eta1 = GradedMap::identity(e.total.space.clone());
            for (q, col, l) in e.total.space.iter_basis() {
                if e.fiber_space().position(q, l).is_some() {
                    continue;
                }
                if rng.gen_bool(0.3) {
                    let rows = e.fiber_space().dim(q);
                    if rows > 0 {
                        let fl = e.fiber_space().labels(q)[rng.gen_range(0..rows)].clone();
                        let row = e.total.space.position(q, &fl).unwrap();
                        eta1.add_entry_idx(q, row, col, int(1));
                    }
                }
            }
            let mut f = PathMorphism::new(e.clone(), e.clone(), 0, eta1, 4).unwrap();
            for k in 2..=4usize {
                let dom = e.dom_full(k);
                let id_f = GradedMap::identity(e.fiber_space().clone());
                let id_a = GradedMap::identity(a_space.clone());
                // fiber part: lands in the fiber after the embedding
                let rest_dom =
                    crate::ainfty::module_domain(e.fiber_space(), &a_space, k);
                let r_map =
                    random_map(rng, &rest_dom, e.fiber_space(), k as Degree - 1, 0.4);
                let mut parts: Vec<&GradedMap> = vec![&id_f];
                parts.extend(std::iter::repeat(&id_a).take(k - 2));
                parts.push(&rho);
                let to_rest = tensor_maps_all(&parts);
                let fiber_part = compose(
                    e.include(),
                    &compose(&r_map, &to_rest).unwrap(),
                )
                .unwrap();
                // complement part: vanishes on the embedded copy of A
                let s_map =
                    random_map(rng, &dom, &e.total.space, k as Degree - 1, 0.4);
                let mut parts: Vec<&GradedMap> = vec![&id_f];
                parts.extend(std::iter::repeat(&id_a).take(k - 2));
                parts.push(&complement);
                let kill_embed = tensor_maps_all(&parts);
                let comp_part = compose(&s_map, &kill_embed).unwrap();
                f.set_component(k, fiber_part.add(&comp_part).unwrap())
                    .unwrap();
            }
            // the components must restrict to the fibers
            for c in verify_path_morphism(&f) {
                if c.name.contains("restricts") || c.name.contains("preserves") {
                    assert!(c.passed, "{} {:?}", c.name, c.witness);
                }
            }
            f
        };
        for case in 0..4 {
            let f = random_morphism(&mut rng);
            let g = random_morphism(&mut rng);
            let h = random_morphism(&mut rng);
            let left = compose_path(&compose_path(&h, &g).unwrap(), &f).unwrap();
            let right = compose_path(&h, &compose_path(&g, &f).unwrap()).unwrap();
            assert_eq!(left.eta1, right.eta1, "case {case}");
            for k in 2..=4 {
                assert_eq!(left.component(k), right.component(k), "case {case} k={k}");
            }
        }
    }

    #[test]
    fn transfer_on_zero_homotopy_keeps_only_m2() {
        // group algebra: zero differential, trivial retract
        let a = group_algebra(3);
        let m = regular_module(&a);
        let e = Arc::new(path_module_over_self(&m, 4).unwrap());
        let r = split_retract(&e).unwrap();
        assert!(r.retract.h.is_zero_map());
        let (t, inc, proj) = transfer_path(&e, &r, 4).unwrap();
        assert!(t.is_strict());
        assert!(inc.etas.is_empty());
        assert!(proj.etas.is_empty());
    }

    #[test]
    fn identity_retract_transfer_keeps_structure() {
        let a = group_algebra(2);
        let m = regular_module(&a);
        let e = Arc::new(path_module_over_self(&m, 3).unwrap());
        let r = split_retract(&e).unwrap();
        // zero differential: small = big up to labels, transfer = m_2
        let (t, _, _) = transfer_path(&e, &r, 3).unwrap();
        assert_eq!(t.total.space.total_dim(), e.total.space.total_dim());
        assert!(t.op_full(2).is_some());
        for c in verify_path_module(&t) {
            assert!(c.passed, "{} {:?}", c.name, c.witness);
        }
    }

    #[test]
    fn transfer_output_verifies() {
        let e = free_path_module(5);
        let r = split_retract(&e).unwrap();
        assert!(r.retract.is_valid());
        let (t, inc, proj) = transfer_path(&e, &r, 5).unwrap();
        for c in verify_path_module(&t) {
            assert!(c.passed, "module: {} {:?}", c.name, c.witness);
        }
        for c in verify_path_morphism(&inc) {
            assert!(c.passed, "inclusion: {} {:?}", c.name, c.witness);
        }
        for c in verify_path_morphism(&proj) {
            assert!(c.passed, "projection: {} {:?}", c.name, c.witness);
        }
    }

    #[test]
    fn quasi_inverse_roundtrips_on_homology() {
        let e = free_path_module(4);
        let r = split_retract(&e).unwrap();
        let id = PathMorphism::identity(e.clone());
        let g = invert_path_quasi(&id, &r, &r).unwrap();
        // H(g_1) o H(id) = id on homology of the total complex
        let h_g = compose(&r.retract.p, &compose(&g.eta1, &r.retract.i).unwrap()).unwrap();
        let idh = GradedMap::identity(r.retract.small.space.clone());
        assert_eq!(h_g, idh);
    }
}
