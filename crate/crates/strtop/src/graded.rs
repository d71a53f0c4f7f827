//! Finite graded vector spaces with labeled bases, degree-shifting sparse
//! linear maps, and tensor products with Koszul signs.
//!
//! Sign contract used throughout the crate:
//!   - a degree-shifting map `f` is a chain map when `f(da) = (-1)^{|f|} d f(a)`;
//!   - tensor maps evaluate as `(f (x) g)(v (x) w) = (-1)^{|g||v|} f(v) (x) g(w)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::AlgebraError;
use num_traits::Zero;
use crate::scalar::{self, Scalar};

pub type Degree = i64;

/// Separator used when naming basis elements of tensor products.
pub const TENSOR_SEP: &str = "\u{2297}";

/// A finite graded vector space: an ordered list of distinct basis labels
/// in each supported degree. Immutable after construction.
///
/// Tensor products remember a flat sort key per basis element so that
/// nested products flatten to identical ordered spaces:
/// `(V (x) W) (x) U == V (x) (W (x) U)`.
#[derive(Debug, Clone)]
pub struct GradedSpace {
    basis: BTreeMap<Degree, Vec<String>>,
    index: HashMap<(Degree, String), usize>,
    /// flat tensor keys aligned with `basis`; empty for atomic spaces
    keys: BTreeMap<Degree, Vec<Vec<(Degree, usize)>>>,
    /// flat key -> (degree, index); empty for atomic spaces
    key_index: HashMap<Vec<(Degree, usize)>, (Degree, usize)>,
    /// unique id for product spaces (0 = atomic); never reused
    uid: u64,
}

impl PartialEq for GradedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl Eq for GradedSpace {}

impl GradedSpace {
    pub fn new(basis: BTreeMap<Degree, Vec<String>>) -> Result<Arc<Self>, AlgebraError> {
        let mut index = HashMap::new();
        let mut cleaned = BTreeMap::new();
        for (q, labels) in basis {
            if labels.is_empty() {
                continue;
            }
            for (i, label) in labels.iter().enumerate() {
                if index.insert((q, label.clone()), i).is_some() {
                    return Err(AlgebraError::DuplicateLabel {
                        degree: q,
                        label: label.clone(),
                    });
                }
            }
            cleaned.insert(q, labels);
        }
        Ok(Arc::new(GradedSpace {
            basis: cleaned,
            index,
            keys: BTreeMap::new(),
            key_index: HashMap::new(),
            uid: 0,
        }))
    }

    /// Space with a single list of labels per degree, given as pairs.
    pub fn from_pairs(pairs: &[(Degree, &str)]) -> Arc<Self> {
        let mut basis: BTreeMap<Degree, Vec<String>> = BTreeMap::new();
        for (q, label) in pairs {
            basis.entry(*q).or_default().push((*label).to_string());
        }
        GradedSpace::new(basis).expect("labels in from_pairs must be distinct")
    }

    pub fn zero() -> Arc<Self> {
        GradedSpace::new(BTreeMap::new()).unwrap()
    }

    pub fn degrees(&self) -> impl Iterator<Item = Degree> + '_ {
        self.basis.keys().copied()
    }

    pub fn dim(&self, q: Degree) -> usize {
        self.basis.get(&q).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.basis.values().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn labels(&self, q: Degree) -> &[String] {
        self.basis.get(&q).map_or(&[], Vec::as_slice)
    }

    pub fn label(&self, q: Degree, i: usize) -> &str {
        &self.basis[&q][i]
    }

    pub fn position(&self, q: Degree, label: &str) -> Option<usize> {
        self.index.get(&(q, label.to_string())).copied()
    }

    /// Iterates `(degree, index, label)` over the whole basis in
    /// declared order.
    pub fn iter_basis(&self) -> impl Iterator<Item = (Degree, usize, &str)> + '_ {
        self.basis.iter().flat_map(|(q, labels)| {
            labels
                .iter()
                .enumerate()
                .map(move |(i, l)| (*q, i, l.as_str()))
        })
    }

    pub fn min_degree(&self) -> Option<Degree> {
        self.basis.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<Degree> {
        self.basis.keys().next_back().copied()
    }

    /// Same labels, degrees shifted up by `k`. The result is atomic for
    /// tensor-ordering purposes.
    pub fn shifted(&self, k: Degree) -> Arc<Self> {
        let basis = self
            .basis
            .iter()
            .map(|(q, labels)| (q + k, labels.clone()))
            .collect();
        GradedSpace::new(basis).unwrap()
    }

    /// Flat tensor sort key of one basis element.
    fn flat_key(&self, q: Degree, i: usize) -> Vec<(Degree, usize)> {
        match self.keys.get(&q) {
            Some(ks) => ks[i].clone(),
            None => vec![(q, i)],
        }
    }

    /// Resolves a flat tensor key to `(degree, index)`.
    fn position_by_key(&self, key: &[(Degree, usize)]) -> Option<(Degree, usize)> {
        if self.key_index.is_empty() {
            // atomic space
            if key.len() == 1 && key[0].1 < self.dim(key[0].0) {
                return Some(key[0]);
            }
            return None;
        }
        self.key_index.get(key).copied()
    }
}

/// Tensor product of a list of graded spaces.
///
/// The basis in degree `n` consists of all tuples with degree sum `n`,
/// ordered lexicographically by the flat key
/// `(deg_1, idx_1, deg_2, idx_2, ...)` over atomic factors. Labels are
/// joined with the tensor glyph, so nested products flatten both in
/// labels and in ordering.
/// Cache key for one tensor factor. Product spaces carry a unique id
/// assigned at creation and never reused; atomic spaces are small and
/// keyed by content.
#[derive(PartialEq, Eq, Hash)]
enum FactorKey {
    Product(u64),
    Atomic(Vec<(Degree, Vec<String>)>),
}

fn factor_key(space: &GradedSpace) -> FactorKey {
    if space.uid == 0 {
        FactorKey::Atomic(
            space
                .basis
                .iter()
                .map(|(q, labels)| (*q, labels.clone()))
                .collect(),
        )
    } else {
        FactorKey::Product(space.uid)
    }
}

static NEXT_UID: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(1);

pub fn tensor_all(factors: &[&GradedSpace]) -> Arc<GradedSpace> {
    assert!(!factors.is_empty(), "tensor_all needs at least one factor");

    // products are rebuilt constantly by the equation assemblers; cache
    // them per thread
    thread_local! {
        static CACHE: std::cell::RefCell<HashMap<Vec<FactorKey>, Arc<GradedSpace>>> =
            std::cell::RefCell::new(HashMap::new());
    }
    let cache_key: Vec<FactorKey> = factors.iter().map(|f| factor_key(f)).collect();
    if let Some(hit) = CACHE.with(|c| c.borrow().get(&cache_key).cloned()) {
        return hit;
    }

    // tuples: (flat key, total degree, label)
    let mut tuples: Vec<(Vec<(Degree, usize)>, Degree, String)> =
        vec![(Vec::new(), 0, String::new())];
    for factor in factors {
        let mut next = Vec::with_capacity(tuples.len() * factor.total_dim().max(1));
        for (key, total, label) in &tuples {
            for (q, i, l) in factor.iter_basis() {
                let mut key = key.clone();
                key.extend(factor.flat_key(q, i));
                let joined = if label.is_empty() {
                    l.to_string()
                } else {
                    format!("{label}{TENSOR_SEP}{l}")
                };
                next.push((key, total + q, joined));
            }
        }
        tuples = next;
        if tuples.is_empty() {
            return GradedSpace::zero();
        }
    }
    tuples.sort_by(|a, b| a.0.cmp(&b.0));
    let mut basis: BTreeMap<Degree, Vec<String>> = BTreeMap::new();
    let mut keys: BTreeMap<Degree, Vec<Vec<(Degree, usize)>>> = BTreeMap::new();
    let mut key_index = HashMap::new();
    for (key, total, label) in tuples {
        let slot = keys.entry(total).or_default();
        key_index.insert(key.clone(), (total, slot.len()));
        slot.push(key);
        basis.entry(total).or_default().push(label);
    }
    let space = GradedSpace::new(basis).expect("tensor labels of distinct labels are distinct");
    let mut space = Arc::try_unwrap(space).expect("fresh space has one owner");
    space.keys = keys;
    space.key_index = key_index;
    space.uid = NEXT_UID.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
    let space = Arc::new(space);
    CACHE.with(|c| c.borrow_mut().insert(cache_key, space.clone()));
    space
}

/// Binary tensor product; equals `tensor_all(&[v, w])`.
pub fn tensor_spaces(v: &GradedSpace, w: &GradedSpace) -> Arc<GradedSpace> {
    tensor_all(&[v, w])
}

/// A degree-homogeneous sparse linear map between graded spaces.
///
/// For each source degree `q` the block maps into target degree
/// `q + degree`; entries are keyed by `(target index, source index)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    pub source: Arc<GradedSpace>,
    pub target: Arc<GradedSpace>,
    pub degree: Degree,
    blocks: BTreeMap<Degree, BTreeMap<(usize, usize), Scalar>>,
}

impl GradedMap {
    pub fn zero(source: Arc<GradedSpace>, target: Arc<GradedSpace>, degree: Degree) -> Self {
        GradedMap {
            source,
            target,
            degree,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(space: Arc<GradedSpace>) -> Self {
        let mut map = GradedMap::zero(space.clone(), space.clone(), 0);
        for (q, i, _) in space.iter_basis() {
            map.blocks
                .entry(q)
                .or_default()
                .insert((i, i), scalar::int(1));
        }
        map
    }

    /// Adds `coeff * (target basis elem <- source basis elem)`, resolving
    /// labels. Entries that cancel to zero are dropped.
    pub fn add_entry(
        &mut self,
        source_degree: Degree,
        target_label: &str,
        source_label: &str,
        coeff: Scalar,
    ) -> Result<(), AlgebraError> {
        if coeff.is_zero() {
            return Ok(());
        }
        let col = self.source.position(source_degree, source_label).ok_or(
            AlgebraError::UnknownLabel {
                degree: source_degree,
                label: source_label.to_string(),
            },
        )?;
        let row = self
            .target
            .position(source_degree + self.degree, target_label)
            .ok_or(AlgebraError::UnknownLabel {
                degree: source_degree + self.degree,
                label: target_label.to_string(),
            })?;
        self.add_entry_idx(source_degree, row, col, coeff);
        Ok(())
    }

    pub fn add_entry_idx(&mut self, source_degree: Degree, row: usize, col: usize, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let block = self.blocks.entry(source_degree).or_default();
        let entry = block.entry((row, col)).or_insert_with(|| scalar::int(0));
        *entry += coeff;
        if entry.is_zero() {
            block.remove(&(row, col));
        }
        if self.blocks[&source_degree].is_empty() {
            self.blocks.remove(&source_degree);
        }
    }

    pub fn entry(&self, source_degree: Degree, row: usize, col: usize) -> Scalar {
        self.blocks
            .get(&source_degree)
            .and_then(|b| b.get(&(row, col)))
            .cloned()
            .unwrap_or_else(|| scalar::int(0))
    }

    pub fn is_zero_map(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Iterates `(source_degree, target_index, source_index, coeff)`.
    pub fn iter_entries(&self) -> impl Iterator<Item = (Degree, usize, usize, &Scalar)> + '_ {
        self.blocks.iter().flat_map(|(q, block)| {
            block
                .iter()
                .map(move |(&(row, col), coeff)| (*q, row, col, coeff))
        })
    }

    pub fn entry_count(&self) -> usize {
        self.blocks.values().map(BTreeMap::len).sum()
    }

    pub fn scale(&self, c: &Scalar) -> GradedMap {
        if c.is_zero() {
            return GradedMap::zero(self.source.clone(), self.target.clone(), self.degree);
        }
        let mut out = self.clone();
        for block in out.blocks.values_mut() {
            for value in block.values_mut() {
                *value *= c;
            }
        }
        out
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap, AlgebraError> {
        if self.source != other.source || self.target != other.target {
            return Err(AlgebraError::ShapeMismatch {
                degree: self.degree,
                detail: "sum of maps with different source or target".to_string(),
            });
        }
        if self.degree != other.degree {
            return Err(AlgebraError::WrongDegree {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut out = self.clone();
        for (q, row, col, coeff) in other.iter_entries() {
            out.add_entry_idx(q, row, col, coeff.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap, AlgebraError> {
        self.add(&other.scale(&scalar::int(-1)))
    }

    /// Applies the map to a single source basis element, returning sparse
    /// target coordinates in degree `q + self.degree`.
    pub fn apply_basis(&self, q: Degree, col: usize) -> Vec<(usize, Scalar)> {
        let mut out = Vec::new();
        if let Some(block) = self.blocks.get(&q) {
            for (&(row, c), coeff) in block {
                if c == col {
                    out.push((row, coeff.clone()));
                }
            }
        }
        out
    }

    pub fn apply(&self, chain: &Chain) -> Chain {
        debug_assert_eq!(chain.space.as_ref(), self.source.as_ref());
        let mut out = Chain::zero(self.target.clone());
        for (&(q, col), coeff) in &chain.terms {
            if let Some(block) = self.blocks.get(&q) {
                for (&(row, c), value) in block {
                    if c == col {
                        out.add_term(q + self.degree, row, coeff.clone() * value.clone());
                    }
                }
            }
        }
        out
    }

    /// The same map re-expressed over label-equal spaces (possibly with
    /// different basis orderings, as when an atomic space shadows a
    /// tensor product with the same labels).
    pub fn reindexed(
        &self,
        source: Arc<GradedSpace>,
        target: Arc<GradedSpace>,
    ) -> Result<GradedMap, AlgebraError> {
        let mut out = GradedMap::zero(source, target, self.degree);
        for (q, row, col, coeff) in self.iter_entries() {
            out.add_entry(
                q,
                self.target.label(q + self.degree, row),
                self.source.label(q, col),
                coeff.clone(),
            )?;
        }
        Ok(out)
    }

    /// First nonzero column of the map in declared basis order, as a
    /// verification witness: `(degree, source label, image chain)`.
    pub fn first_nonzero_column(&self) -> Option<(Degree, String, Chain)> {
        // blocks and entry keys are BTree-ordered, but entries are keyed
        // (row, col); scan columns in declared order instead.
        for (&q, block) in &self.blocks {
            let mut best: Option<usize> = None;
            for &(_, col) in block.keys() {
                best = Some(best.map_or(col, |b| b.min(col)));
            }
            if let Some(col) = best {
                let mut image = Chain::zero(self.target.clone());
                for (&(row, c), coeff) in block {
                    if c == col {
                        image.add_term(q + self.degree, row, coeff.clone());
                    }
                }
                return Some((q, self.source.label(q, col).to_string(), image));
            }
        }
        None
    }
}

/// Composition `g o f`. Degrees add; fails unless `f` lands in the
/// source of `g`.
pub fn compose(g: &GradedMap, f: &GradedMap) -> Result<GradedMap, AlgebraError> {
    if g.source.as_ref() != f.target.as_ref() {
        return Err(AlgebraError::ShapeMismatch {
            degree: f.degree,
            detail: "source of outer map differs from target of inner map".to_string(),
        });
    }
    let mut out = GradedMap::zero(f.source.clone(), g.target.clone(), f.degree + g.degree);
    for (q, block_f) in &f.blocks {
        if let Some(block_g) = g.blocks.get(&(q + f.degree)) {
            // index g's block by source index for the join
            let mut by_col: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
            for (&(row, col), coeff) in block_g {
                by_col.entry(col).or_default().push((row, coeff));
            }
            for (&(mid, col), cf) in block_f {
                if let Some(rows) = by_col.get(&mid) {
                    for (row, cg) in rows {
                        out.add_entry_idx(*q, *row, col, cf.clone() * (*cg).clone());
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Tensor product of maps with the Koszul sign: on `v (x) w` the result is
/// `(-1)^{|g| |v|} f(v) (x) g(w)`. Generalizes to any number of factors
/// with sign exponent `sum_j |f_j| (|v_1| + ... + |v_{j-1}|)`.
pub fn tensor_maps_all(factors: &[&GradedMap]) -> GradedMap {
    assert!(!factors.is_empty());
    let source_factors: Vec<&GradedSpace> = factors.iter().map(|f| f.source.as_ref()).collect();
    let target_factors: Vec<&GradedSpace> = factors.iter().map(|f| f.target.as_ref()).collect();
    let source = tensor_all(&source_factors);
    let target = tensor_all(&target_factors);
    let degree: Degree = factors.iter().map(|f| f.degree).sum();
    let mut out = GradedMap::zero(source.clone(), target.clone(), degree);
    if source.is_zero() || target.is_zero() {
        return out;
    }

    // entries per factor: (src_deg, src_idx, tgt_idx, coeff)
    let entry_lists: Vec<Vec<(Degree, usize, usize, &Scalar)>> = factors
        .iter()
        .map(|f| {
            f.iter_entries()
                .map(|(q, row, col, c)| (q, col, row, c))
                .collect()
        })
        .collect();
    if entry_lists.iter().any(Vec::is_empty) {
        return out;
    }

    let mut picks = vec![0usize; factors.len()];
    loop {
        let mut src_key: Vec<(Degree, usize)> = Vec::new();
        let mut tgt_key: Vec<(Degree, usize)> = Vec::new();
        let mut src_total = 0;
        let mut coeff = scalar::int(1);
        let mut sign_exp: i64 = 0;
        let mut prefix_deg: i64 = 0;
        for (j, f) in factors.iter().enumerate() {
            let (q, col, row, c) = entry_lists[j][picks[j]];
            sign_exp += f.degree * prefix_deg;
            prefix_deg += q;
            src_total += q;
            coeff *= (*c).clone();
            src_key.extend(f.source.flat_key(q, col));
            tgt_key.extend(f.target.flat_key(q + f.degree, row));
        }
        coeff *= scalar::sign(sign_exp);
        let (sq, col) = source
            .position_by_key(&src_key)
            .expect("tensor source key exists");
        debug_assert_eq!(sq, src_total);
        let (tq, row) = target
            .position_by_key(&tgt_key)
            .expect("tensor target key exists");
        debug_assert_eq!(tq, src_total + degree);
        out.add_entry_idx(src_total, row, col, coeff);

        // advance the multi-index
        let mut j = factors.len();
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            picks[j] += 1;
            if picks[j] < entry_lists[j].len() {
                break;
            }
            picks[j] = 0;
        }
    }
}

pub fn tensor_maps(f: &GradedMap, g: &GradedMap) -> GradedMap {
    tensor_maps_all(&[f, g])
}

/// A sparse vector in a graded space; terms may mix degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub space: Arc<GradedSpace>,
    pub terms: BTreeMap<(Degree, usize), Scalar>,
}

impl Chain {
    pub fn zero(space: Arc<GradedSpace>) -> Self {
        Chain {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(space: Arc<GradedSpace>, q: Degree, label: &str) -> Result<Self, AlgebraError> {
        let i = space
            .position(q, label)
            .ok_or_else(|| AlgebraError::UnknownLabel {
                degree: q,
                label: label.to_string(),
            })?;
        let mut c = Chain::zero(space);
        c.add_term(q, i, scalar::int(1));
        Ok(c)
    }

    pub fn add_term(&mut self, q: Degree, i: usize, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry((q, i))
            .or_insert_with(|| scalar::int(0));
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&(q, i));
        }
    }

    pub fn add(&mut self, other: &Chain) {
        for (&(q, i), coeff) in &other.terms {
            self.add_term(q, i, coeff.clone());
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Chain {
        let mut out = Chain::zero(self.space.clone());
        for (&(q, i), coeff) in &self.terms {
            out.add_term(q, i, coeff.clone() * c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of a homogeneous chain; `None` for zero or mixed chains.
    pub fn homogeneous_degree(&self) -> Option<Degree> {
        let mut degs = self.terms.keys().map(|(q, _)| *q);
        let first = degs.next()?;
        degs.all(|q| q == first).then_some(first)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(q, i), coeff) in &self.terms {
            let label = self.space.label(q, i);
            let c = scalar::format_scalar(coeff);
            if first {
                write!(f, "{c}\u{b7}{label}")?;
                first = false;
            } else {
                write!(f, " + {c}\u{b7}{label}")?;
            }
        }
        Ok(())
    }
}
