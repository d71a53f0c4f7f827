//! Exact string-topology calculator for spherical space forms `S^n/G`:
//! conjugacy classes, the Pontryagin ring `R[G][x]` with `|x| = n - 1`,
//! the based coproduct, free-loop Betti numbers, and the lifted
//! coproduct on `H_*(Lambda(S^n/G); R)`.
//!
//! Basis classes are `x_{[g],k}` of degree `k(n-1)` and `y_{[g],k}` of
//! degree `k(n-1) + n`, indexed by conjugacy classes `[g]` and levels
//! `k >= 0`. The lifted coproduct is
//!
//! `cop(x_{[g],k}) = sum_{i+j=k-1} sum_{h in G} x_{[g h^-1],i} (x) x_{[h],j}`
//! `cop(y_{[g],k}) = sum_{i+j=k-1} sum_{h in G} ( x_{[g h^-1],i} (x) y_{[h],j}
//!                                              + y_{[g h^-1],i} (x) x_{[h],j} )`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::AlgebraError;
use crate::report::Check;
use crate::scalar::{self, Scalar};

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Builds and verifies a group from labels and a multiplication
    /// table (`table[i][j]` = index of `g_i g_j`).
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, AlgebraError> {
        let n = labels.len();
        if n == 0 {
            return Err(AlgebraError::BadInput("empty group".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(AlgebraError::DuplicateLabel {
                    degree: 0,
                    label: l.clone(),
                });
            }
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(AlgebraError::BadInput(
                "multiplication table must be square of the group order".into(),
            ));
        }
        if table
            .iter()
            .any(|row| row.iter().any(|&v| v >= n))
        {
            return Err(AlgebraError::BadInput(
                "multiplication table entry out of range".into(),
            ));
        }
        // identity
        let identity = (0..n)
            .find(|&e| (0..n).all(|i| table[e][i] == i && table[i][e] == i))
            .ok_or_else(|| AlgebraError::BadInput("no identity element".into()))?;
        // associativity
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(AlgebraError::BadInput(format!(
                            "associativity fails at ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        // inverses
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| {
                    AlgebraError::BadInput(format!("no inverse for {}", labels[a]))
                })?;
        }
        Ok(FiniteGroup {
            labels,
            table,
            identity,
            inverse,
        })
    }

    /// Cyclic group `Z/m` with labels `1, g, g^2, ...`.
    pub fn cyclic(m: usize) -> Self {
        assert!(m >= 1);
        let labels: Vec<String> = (0..m)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            })
            .collect();
        let table: Vec<Vec<usize>> = (0..m)
            .map(|i| (0..m).map(|j| (i + j) % m).collect())
            .collect();
        FiniteGroup::new(labels, table).expect("cyclic group is a group")
    }

    /// Generalized quaternion group `Q_{4m}` of order `4m`, presented as
    /// `a^{2m} = 1, b^2 = a^m, b a b^{-1} = a^{-1}`; elements `a^i` and
    /// `a^i b`. `Q8 = quaternion(2)`.
    pub fn quaternion(m: usize) -> Self {
        assert!(m >= 1);
        let n = 4 * m;
        let order_a = 2 * m;
        // encode: 0..2m-1 = a^i; 2m..4m-1 = a^{i-2m} b
        let label = |idx: usize| -> String {
            if idx < order_a {
                match idx {
                    0 => "1".to_string(),
                    1 => "a".to_string(),
                    _ => format!("a^{idx}"),
                }
            } else {
                match idx - order_a {
                    0 => "b".to_string(),
                    1 => "ab".to_string(),
                    i => format!("a^{i}b"),
                }
            }
        };
        let labels: Vec<String> = (0..n).map(label).collect();
        let mul = |x: usize, y: usize| -> usize {
            let (i, xb) = if x < order_a {
                (x, false)
            } else {
                (x - order_a, true)
            };
            let (j, yb) = if y < order_a {
                (y, false)
            } else {
                (y - order_a, true)
            };
            match (xb, yb) {
                // a^i a^j = a^{i+j}
                (false, false) => (i + j) % order_a,
                // a^i (a^j b) = a^{i+j} b
                (false, true) => order_a + (i + j) % order_a,
                // (a^i b) a^j = a^{i-j} b
                (true, false) => order_a + (i + order_a - j % order_a) % order_a,
                // (a^i b)(a^j b) = a^{i-j+m}
                (true, true) => (i + order_a - j % order_a + m) % order_a,
            }
        };
        let table: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).map(|j| mul(i, j)).collect())
            .collect();
        FiniteGroup::new(labels, table).expect("quaternion group is a group")
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The group algebra in degree 0, with the group labels as basis.
    pub fn group_algebra(&self) -> std::sync::Arc<crate::ainfty::DGAlgebra> {
        use crate::complex::ChainComplex;
        use crate::graded::{tensor_spaces, GradedMap, GradedSpace};
        let pairs: Vec<(i64, &str)> = self.labels.iter().map(|l| (0, l.as_str())).collect();
        let space = GradedSpace::from_pairs(&pairs);
        let complex = ChainComplex::zero_differential(space.clone());
        let aa = tensor_spaces(&space, &space);
        let mut mu = GradedMap::zero(aa, space.clone(), 0);
        for i in 0..self.order() {
            for j in 0..self.order() {
                let label = format!(
                    "{}{}{}",
                    self.labels[i],
                    crate::graded::TENSOR_SEP,
                    self.labels[j]
                );
                mu.add_entry(0, &self.labels[self.mul(i, j)], &label, scalar::int(1))
                    .unwrap();
            }
        }
        std::sync::Arc::new(
            crate::ainfty::DGAlgebra::new(complex, mu, &self.labels[self.identity]).unwrap(),
        )
    }
}

/// Partition of the elements into conjugacy classes. Class ids are
/// assigned in order of the lexicographically least member label, which
/// is also the canonical representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClasses {
    /// member element indices per class, sorted
    pub classes: Vec<Vec<usize>>,
    /// representative = least label of the class
    pub representatives: Vec<usize>,
    /// class id of each element
    pub class_of: Vec<usize>,
}

pub fn conjugacy_classes(g: &FiniteGroup) -> ConjugacyClasses {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut raw: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        if seen[a] {
            continue;
        }
        let mut class: Vec<usize> = (0..n)
            .map(|t| g.mul(g.mul(g.inv(t), a), t))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        class.sort();
        for &m in &class {
            seen[m] = true;
        }
        raw.push(class);
    }
    // canonical order: by least label
    raw.sort_by_key(|class| {
        class
            .iter()
            .map(|&i| g.labels()[i].clone())
            .min()
            .unwrap()
    });
    let representatives: Vec<usize> = raw
        .iter()
        .map(|class| {
            *class
                .iter()
                .min_by_key(|&&i| g.labels()[i].clone())
                .unwrap()
        })
        .collect();
    let mut class_of = vec![0usize; n];
    for (cid, class) in raw.iter().enumerate() {
        for &m in class {
            class_of[m] = cid;
        }
    }
    ConjugacyClasses {
        classes: raw,
        representatives,
        class_of,
    }
}

/// An element of the Pontryagin ring `R[G][x]`: a sparse rational
/// combination of monomials `g x^k` with `|g x^k| = k (n-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BasedLoopElement {
    /// (element index, level) -> coefficient
    pub terms: BTreeMap<(usize, usize), Scalar>,
}

impl BasedLoopElement {
    pub fn monomial(g: usize, k: usize) -> Self {
        let mut e = BasedLoopElement::default();
        e.terms.insert((g, k), scalar::int(1));
        e
    }

    pub fn add_term(&mut self, g: usize, k: usize, coeff: Scalar) {
        let e = self.terms.entry((g, k)).or_insert_with(|| scalar::int(0));
        *e += coeff;
        if e.is_zero() {
            self.terms.remove(&(g, k));
        }
    }

    /// Left multiplication by a group element.
    pub fn left_mul(&self, group: &FiniteGroup, g: usize) -> Self {
        let mut out = BasedLoopElement::default();
        for (&(h, k), c) in &self.terms {
            out.add_term(group.mul(g, h), k, c.clone());
        }
        out
    }

    /// Right multiplication by a group element (`x` is central).
    pub fn right_mul(&self, group: &FiniteGroup, g: usize) -> Self {
        let mut out = BasedLoopElement::default();
        for (&(h, k), c) in &self.terms {
            out.add_term(group.mul(h, g), k, c.clone());
        }
        out
    }
}

/// A sparse element of `R[G][x] (x) R[G][x]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BasedTensor {
    pub terms: BTreeMap<((usize, usize), (usize, usize)), Scalar>,
}

impl BasedTensor {
    pub fn add_term(&mut self, left: (usize, usize), right: (usize, usize), coeff: Scalar) {
        let key = (left, right);
        let e = self.terms.entry(key).or_insert_with(|| scalar::int(0));
        *e += coeff;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `(g' (x) 1) . t`
    pub fn left_mul_first(&self, group: &FiniteGroup, g: usize) -> Self {
        let mut out = BasedTensor::default();
        for (&((a, i), rk), c) in &self.terms {
            out.add_term((group.mul(g, a), i), rk, c.clone());
        }
        out
    }

    /// `t . (1 (x) g'')`
    pub fn right_mul_second(&self, group: &FiniteGroup, g: usize) -> Self {
        let mut out = BasedTensor::default();
        for (&(lk, (b, j)), c) in &self.terms {
            out.add_term(lk, (group.mul(b, g), j), c.clone());
        }
        out
    }
}

fn check_n(n: usize) -> Result<(), AlgebraError> {
    if n <= 1 || n % 2 == 0 {
        return Err(AlgebraError::BadInput(format!(
            "n must be odd and greater than 1, got {n}"
        )));
    }
    Ok(())
}

/// The based coproduct on `R[G][x]`:
/// `g x^k -> sum_{i+j=k-1} sum_{h in G} g h^{-1} x^i (x) h x^j`,
/// of degree `1 - n` (the output monomial degrees sum to the input
/// degree minus `n - 1`).
pub fn based_coproduct(
    e: &BasedLoopElement,
    group: &FiniteGroup,
    n: usize,
) -> Result<BasedTensor, AlgebraError> {
    check_n(n)?;
    let mut out = BasedTensor::default();
    for (&(g, k), c) in &e.terms {
        if k == 0 {
            continue; // empty sum
        }
        for i in 0..k {
            let j = k - 1 - i;
            for h in 0..group.order() {
                out.add_term((group.mul(g, group.inv(h)), i), (h, j), c.clone());
            }
        }
    }
    Ok(out)
}

/// A free-loop homology class `x_{[g],k}` or `y_{[g],k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LoopKind {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct FreeLoopClass {
    pub kind: LoopKind,
    /// conjugacy class id
    pub class: usize,
    pub level: usize,
}

impl FreeLoopClass {
    pub fn degree(&self, n: usize) -> usize {
        match self.kind {
            LoopKind::X => self.level * (n - 1),
            LoopKind::Y => self.level * (n - 1) + n,
        }
    }
}

/// Renders a class as `x_{[g],k}` with the canonical representative.
pub fn class_name(c: &FreeLoopClass, group: &FiniteGroup, classes: &ConjugacyClasses) -> String {
    let kind = match c.kind {
        LoopKind::X => "x",
        LoopKind::Y => "y",
    };
    let rep = &group.labels()[classes.representatives[c.class]];
    format!("{kind}_[{rep}],{}", c.level)
}

/// Basis of `H_*(Lambda(S^n/G); R)` up to level `max_k`, with the Betti
/// table. In relative mode the classes `x_{[1],0}` and `y_{[1],0}` are
/// removed (the absolute classes absorbed by the constant loops).
pub fn loop_basis(
    group: &FiniteGroup,
    n: usize,
    max_k: usize,
    relative: bool,
) -> Result<(Vec<FreeLoopClass>, BTreeMap<usize, usize>), AlgebraError> {
    check_n(n)?;
    let classes = conjugacy_classes(group);
    let identity_class = classes.class_of[group.identity()];
    let mut basis = Vec::new();
    for k in 0..=max_k {
        for kind in [LoopKind::X, LoopKind::Y] {
            for class in 0..classes.classes.len() {
                let c = FreeLoopClass { kind, class, level: k };
                if relative && k == 0 && class == identity_class {
                    continue;
                }
                basis.push(c);
            }
        }
    }
    basis.sort_by_key(|c| (c.degree(n), c.kind, c.class, c.level));
    let mut betti: BTreeMap<usize, usize> = BTreeMap::new();
    for c in &basis {
        *betti.entry(c.degree(n)).or_default() += 1;
    }
    Ok((basis, betti))
}

/// A sparse combination of ordered pairs of free-loop classes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoproductRow {
    pub terms: BTreeMap<(FreeLoopClass, FreeLoopClass), Scalar>,
}

impl CoproductRow {
    pub fn add_term(&mut self, a: FreeLoopClass, b: FreeLoopClass, coeff: Scalar) {
        let e = self.terms.entry((a, b)).or_insert_with(|| scalar::int(0));
        *e += coeff;
        if e.is_zero() {
            self.terms.remove(&(a, b));
        }
    }
}

impl fmt::Display for CoproductRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "<sparse row with {} terms>", self.terms.len())
    }
}

/// The lifted coproduct on one basis class, with integer multiplicities
/// from collapsing elements to conjugacy classes.
pub fn lifted_coproduct(
    c: &FreeLoopClass,
    group: &FiniteGroup,
    n: usize,
) -> Result<CoproductRow, AlgebraError> {
    check_n(n)?;
    let classes = conjugacy_classes(group);
    let mut out = CoproductRow::default();
    let k = c.level;
    if k == 0 {
        return Ok(out);
    }
    // a representative g of the class
    let g = classes.representatives[c.class];
    for i in 0..k {
        let j = k - 1 - i;
        for h in 0..group.order() {
            let left_class = classes.class_of[group.mul(g, group.inv(h))];
            let right_class = classes.class_of[h];
            match c.kind {
                LoopKind::X => {
                    out.add_term(
                        FreeLoopClass { kind: LoopKind::X, class: left_class, level: i },
                        FreeLoopClass { kind: LoopKind::X, class: right_class, level: j },
                        scalar::int(1),
                    );
                }
                LoopKind::Y => {
                    out.add_term(
                        FreeLoopClass { kind: LoopKind::X, class: left_class, level: i },
                        FreeLoopClass { kind: LoopKind::Y, class: right_class, level: j },
                        scalar::int(1),
                    );
                    out.add_term(
                        FreeLoopClass { kind: LoopKind::Y, class: left_class, level: i },
                        FreeLoopClass { kind: LoopKind::X, class: right_class, level: j },
                        scalar::int(1),
                    );
                }
            }
        }
    }
    Ok(out)
}

/// Extends the lifted coproduct linearly over rows of pairs, applying it
/// to the stated factor.
fn coproduct_on_factor(
    row: &CoproductRow,
    group: &FiniteGroup,
    n: usize,
    first: bool,
) -> Result<BTreeMap<(FreeLoopClass, FreeLoopClass, FreeLoopClass), Scalar>, AlgebraError> {
    let mut out: BTreeMap<(FreeLoopClass, FreeLoopClass, FreeLoopClass), Scalar> =
        BTreeMap::new();
    for (&(a, b), c) in &row.terms {
        let inner = lifted_coproduct(if first { &a } else { &b }, group, n)?;
        for (&(u, v), c2) in &inner.terms {
            let key = if first { (u, v, b) } else { (a, u, v) };
            let e = out.entry(key).or_insert_with(|| scalar::int(0));
            *e += c.clone() * c2.clone();
            if e.is_zero() {
                out.remove(&key);
            }
        }
    }
    Ok(out)
}

/// Property report for the coproduct calculus:
/// (a) degree law `deg(out) = deg(in) + 1 - n` on every class;
/// (b) left/right equivariance of the based coproduct;
/// (c) strict coassociativity of the lifted coproduct;
/// (d) cocommutativity on `x`-classes (and the observed `y`-class
///     symmetry, reported but not asserted).
pub fn verify_sng_properties(
    group: &FiniteGroup,
    n: usize,
    max_k: usize,
) -> Result<Vec<Check>, AlgebraError> {
    check_n(n)?;
    let classes = conjugacy_classes(group);
    let mut checks = Vec::new();

    // (a) degree law
    let mut degree_law = Check::pass("degree law deg + 1 - n");
    'deg: for k in 0..=max_k {
        for kind in [LoopKind::X, LoopKind::Y] {
            for class in 0..classes.classes.len() {
                let c = FreeLoopClass { kind, class, level: k };
                let row = lifted_coproduct(&c, group, n)?;
                for (a, b) in row.terms.keys() {
                    if a.degree(n) + b.degree(n) + n != c.degree(n) + 1 {
                        degree_law = Check::fail(
                            "degree law deg + 1 - n",
                            c.degree(n) as i64,
                            class_name(&c, group, &classes),
                            format!(
                                "output degrees {} + {}",
                                a.degree(n),
                                b.degree(n)
                            ),
                        );
                        break 'deg;
                    }
                }
            }
        }
    }
    checks.push(degree_law);

    // (b) equivariance of the based coproduct
    let mut equiv = Check::pass("based coproduct equivariance");
    'equ: for k in 0..=max_k {
        for g in 0..group.order() {
            let e = BasedLoopElement::monomial(g, k);
            let cop = based_coproduct(&e, group, n)?;
            for t in 0..group.order() {
                let left = based_coproduct(&e.left_mul(group, t), group, n)?;
                if left != cop.left_mul_first(group, t) {
                    equiv = Check::fail(
                        "based coproduct equivariance",
                        (k * (n - 1)) as i64,
                        format!("{} x^{k}, left by {}", group.labels()[g], group.labels()[t]),
                        "left equivariance fails",
                    );
                    break 'equ;
                }
                let right = based_coproduct(&e.right_mul(group, t), group, n)?;
                if right != cop.right_mul_second(group, t) {
                    equiv = Check::fail(
                        "based coproduct equivariance",
                        (k * (n - 1)) as i64,
                        format!("{} x^{k}, right by {}", group.labels()[g], group.labels()[t]),
                        "right equivariance fails",
                    );
                    break 'equ;
                }
            }
        }
    }
    checks.push(equiv);

    // (c) coassociativity of the lifted coproduct
    let mut coassoc = Check::pass("lifted coproduct coassociativity");
    'coa: for k in 0..=max_k {
        for kind in [LoopKind::X, LoopKind::Y] {
            for class in 0..classes.classes.len() {
                let c = FreeLoopClass { kind, class, level: k };
                let row = lifted_coproduct(&c, group, n)?;
                let left = coproduct_on_factor(&row, group, n, true)?;
                let right = coproduct_on_factor(&row, group, n, false)?;
                if left != right {
                    coassoc = Check::fail(
                        "lifted coproduct coassociativity",
                        c.degree(n) as i64,
                        class_name(&c, group, &classes),
                        "the two iterates differ",
                    );
                    break 'coa;
                }
            }
        }
    }
    checks.push(coassoc);

    // (d) cocommutativity on x-classes
    let mut cocomm = Check::pass("cocommutativity on x-classes");
    'coc: for k in 0..=max_k {
        for class in 0..classes.classes.len() {
            let c = FreeLoopClass { kind: LoopKind::X, class, level: k };
            let row = lifted_coproduct(&c, group, n)?;
            let mut swapped = CoproductRow::default();
            for (&(a, b), coeff) in &row.terms {
                swapped.add_term(b, a, coeff.clone());
            }
            if swapped != row {
                cocomm = Check::fail(
                    "cocommutativity on x-classes",
                    c.degree(n) as i64,
                    class_name(&c, group, &classes),
                    "swap changes the row",
                );
                break 'coc;
            }
        }
    }
    checks.push(cocomm);

    // observed symmetry on y-classes, reported but not part of the
    // contract
    let mut y_sym = Check::pass("observed swap symmetry on y-classes");
    'ysy: for k in 0..=max_k {
        for class in 0..classes.classes.len() {
            let c = FreeLoopClass { kind: LoopKind::Y, class, level: k };
            let row = lifted_coproduct(&c, group, n)?;
            let mut swapped = CoproductRow::default();
            for (&(a, b), coeff) in &row.terms {
                swapped.add_term(b, a, coeff.clone());
            }
            if swapped != row {
                y_sym = Check::fail(
                    "observed swap symmetry on y-classes",
                    c.degree(n) as i64,
                    class_name(&c, group, &classes),
                    "swap changes the row",
                );
                break 'ysy;
            }
        }
    }
    checks.push(y_sym);

    Ok(checks)
}
