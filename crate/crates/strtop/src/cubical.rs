//! Combinatorial cubical sets, normalized cubical chains, the boundary
//! operator, cross products and the Serre diagonal.
//!
//! Boundary convention: `d = sum_i (-1)^{i-1} (face_i^1 - face_i^0)`,
//! with degenerate faces dropped. The Serre diagonal is
//! `D(s) = sum_{J u K = {1..n}} sgn(J,K) s|_{I^J x {0}^K} (x) s|_{{1}^J x I^K}`
//! with `sgn(J,K) = (-1)^{#{j > k : j in J, k in K}}`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::complex::ChainComplex;
use crate::error::AlgebraError;
use crate::graded::{Degree, GradedMap, GradedSpace};
use crate::report::Check;
use crate::scalar::{self, Scalar};

/// One cube of a combinatorial cubical set.
#[derive(Debug, Clone)]
pub struct Cube {
    pub label: String,
    pub dim: usize,
    pub degenerate: bool,
    /// `faces[i] = (face at 0, face at 1)` for direction `i+1`
    pub faces: Vec<(String, String)>,
}

/// A finite combinatorial cubical set: labeled cubes per dimension with
/// face maps and degeneracy flags. Degeneracy maps may be recorded as a
/// table `s_i(cube) = cube` for validating the face-degeneracy
/// identities; cubes in the image of a degeneracy must be flagged.
#[derive(Debug, Clone, Default)]
pub struct CubicalSet {
    /// cubes per dimension, in declared order
    pub cubes: BTreeMap<usize, Vec<Cube>>,
    /// degeneracy table: (label of k-cube, direction i in 1..=k+1) -> label of (k+1)-cube
    pub degeneracies: HashMap<(String, usize), String>,
}

impl CubicalSet {
    pub fn cube(&self, dim: usize, label: &str) -> Option<&Cube> {
        self.cubes
            .get(&dim)
            .and_then(|cs| cs.iter().find(|c| c.label == label))
    }

    pub fn dims(&self) -> impl Iterator<Item = usize> + '_ {
        self.cubes.keys().copied()
    }

    pub fn top_dim(&self) -> usize {
        self.cubes.keys().next_back().copied().unwrap_or(0)
    }

    /// Face of a cube: direction `i` in `1..=dim`, side `eps` in `{0,1}`.
    pub fn face(&self, dim: usize, label: &str, i: usize, eps: usize) -> Option<&str> {
        let cube = self.cube(dim, label)?;
        let (lo, hi) = cube.faces.get(i - 1)?;
        Some(if eps == 0 { lo } else { hi })
    }

    /// Validates the cubical identities
    /// `face_i^e face_j^d = face_{j-1}^d face_i^e` for `i < j`, and the
    /// face-degeneracy relations for every recorded degeneracy.
    pub fn verify(&self) -> Vec<Check> {
        let mut checks = Vec::new();
        let mut face_check = Check::pass("cubical face identities");
        'outer: for (&k, cubes) in &self.cubes {
            if k < 2 {
                continue;
            }
            for cube in cubes {
                for j in 2..=k {
                    for i in 1..j {
                        for (eps_i, eps_j) in
                            [(0, 0), (0, 1), (1, 0), (1, 1)]
                        {
                            let via_j = self
                                .face(k, &cube.label, j, eps_j)
                                .and_then(|f| self.face(k - 1, f, i, eps_i));
                            let via_i = self
                                .face(k, &cube.label, i, eps_i)
                                .and_then(|f| self.face(k - 1, f, j - 1, eps_j));
                            if via_j != via_i || via_j.is_none() {
                                face_check = Check::fail(
                                    "cubical face identities",
                                    k as Degree,
                                    cube.label.clone(),
                                    format!(
                                        "face_{i}^{eps_i} face_{j}^{eps_j} mismatch: {via_j:?} vs {via_i:?}"
                                    ),
                                );
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        checks.push(face_check);

        let mut degen_check = Check::pass("face-degeneracy identities");
        'outer2: for ((label, dir), target) in &self.degeneracies {
            // locate the source cube
            let Some((&k, _)) = self
                .cubes
                .iter()
                .find(|(_, cs)| cs.iter().any(|c| &c.label == label))
            else {
                degen_check = Check::fail(
                    "face-degeneracy identities",
                    0,
                    label.clone(),
                    "degeneracy source not found",
                );
                break;
            };
            let Some(target_cube) = self.cube(k + 1, target) else {
                degen_check = Check::fail(
                    "face-degeneracy identities",
                    (k + 1) as Degree,
                    target.clone(),
                    "degeneracy target not found",
                );
                break;
            };
            if !target_cube.degenerate {
                degen_check = Check::fail(
                    "face-degeneracy identities",
                    (k + 1) as Degree,
                    target.clone(),
                    "degeneracy image must be flagged degenerate",
                );
                break;
            }
            // face_i s_j relations on the target
            for i in 1..=k + 1 {
                for eps in [0, 1] {
                    let lhs = self.face(k + 1, target, i, eps).map(str::to_string);
                    let expected: Option<String> = if i == *dir {
                        Some(label.clone())
                    } else if i < *dir {
                        // face_i s_j = s_{j-1} face_i for i < j
                        self.face(k, label, i, eps)
                            .map(|f| {
                                self.degeneracies
                                    .get(&(f.to_string(), dir - 1))
                                    .cloned()
                                    .unwrap_or_else(|| f.to_string())
                            })
                    } else {
                        // face_i s_j = s_j face_{i-1} for i > j
                        self.face(k, label, i - 1, eps).map(|f| {
                            self.degeneracies
                                .get(&(f.to_string(), *dir))
                                .cloned()
                                .unwrap_or_else(|| f.to_string())
                        })
                    };
                    // only check when the expected degeneracy is recorded
                    if let (Some(l), Some(e)) = (lhs, expected) {
                        let expected_recorded = i == *dir
                            || self
                                .degeneracies
                                .values()
                                .any(|v| v == &e);
                        if expected_recorded && l != e {
                            degen_check = Check::fail(
                                "face-degeneracy identities",
                                (k + 1) as Degree,
                                target.clone(),
                                format!("face_{i}^{eps} of degeneracy: {l} vs {e}"),
                            );
                            break 'outer2;
                        }
                    }
                }
            }
        }
        checks.push(degen_check);
        checks
    }

    /// The normalized chain complex: one generator per nondegenerate
    /// cube, with the boundary convention of this module.
    pub fn chain_complex(&self) -> Result<ChainComplex, AlgebraError> {
        let mut pairs: Vec<(Degree, &str)> = Vec::new();
        for (&k, cubes) in &self.cubes {
            for c in cubes {
                if !c.degenerate {
                    pairs.push((k as Degree, c.label.as_str()));
                }
            }
        }
        let space = GradedSpace::from_pairs(&pairs);
        let mut d = GradedMap::zero(space.clone(), space.clone(), -1);
        for (&k, cubes) in &self.cubes {
            if k == 0 {
                continue;
            }
            for c in cubes {
                if c.degenerate {
                    continue;
                }
                let b = self.boundary_of_cube(k, &c.label);
                for (label, coeff) in b {
                    d.add_entry(k as Degree, &label, &c.label, coeff)?;
                }
            }
        }
        ChainComplex::new(space, d)
    }

    /// Signed, normalized boundary of one nondegenerate cube.
    fn boundary_of_cube(&self, dim: usize, label: &str) -> Vec<(String, Scalar)> {
        let mut out: BTreeMap<String, Scalar> = BTreeMap::new();
        let cube = self.cube(dim, label).expect("cube exists");
        for i in 1..=dim {
            let sign = scalar::sign(i as i64 - 1);
            let (lo, hi) = &cube.faces[i - 1];
            for (face, s) in [(hi, sign.clone()), (lo, -sign)] {
                if let Some(fc) = self.cube(dim - 1, face) {
                    if !fc.degenerate {
                        let e = out.entry(face.clone()).or_insert_with(|| scalar::int(0));
                        *e += s;
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out.into_iter().collect()
    }
}

/// A normalized cubical chain of fixed dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicalChain {
    pub dim: usize,
    pub terms: BTreeMap<String, Scalar>,
}

impl CubicalChain {
    pub fn zero(dim: usize) -> Self {
        CubicalChain {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn generator(set: &CubicalSet, dim: usize, label: &str) -> Result<Self, AlgebraError> {
        let cube = set
            .cube(dim, label)
            .ok_or_else(|| AlgebraError::UnknownLabel {
                degree: dim as Degree,
                label: label.to_string(),
            })?;
        let mut c = CubicalChain::zero(dim);
        if !cube.degenerate {
            c.terms.insert(label.to_string(), scalar::int(1));
        }
        Ok(c)
    }

    pub fn add_term(&mut self, label: &str, coeff: Scalar) {
        let e = self
            .terms
            .entry(label.to_string())
            .or_insert_with(|| scalar::int(0));
        *e += coeff;
        if e.is_zero() {
            self.terms.remove(label);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Boundary of a normalized chain, degenerate faces dropped.
pub fn boundary(set: &CubicalSet, chain: &CubicalChain) -> CubicalChain {
    assert!(chain.dim >= 1, "boundary needs dimension >= 1");
    let mut out = CubicalChain::zero(chain.dim - 1);
    for (label, coeff) in &chain.terms {
        for (face, s) in set.boundary_of_cube(chain.dim, label) {
            out.add_term(&face, s * coeff.clone());
        }
    }
    out
}

/// The product cubical set: `k`-cubes are pairs of cubes with dimension
/// sum `k`, labeled `a x b`; a pair is degenerate when either factor is.
pub const PRODUCT_SEP: &str = "\u{d7}";

pub fn product_set(x: &CubicalSet, y: &CubicalSet) -> CubicalSet {
    let mut cubes: BTreeMap<usize, Vec<Cube>> = BTreeMap::new();
    for (&ka, xs) in &x.cubes {
        for (&kb, ys) in &y.cubes {
            for a in xs {
                for b in ys {
                    let label = format!("{}{}{}", a.label, PRODUCT_SEP, b.label);
                    let mut faces = Vec::with_capacity(ka + kb);
                    for i in 1..=ka {
                        let (lo, hi) = &a.faces[i - 1];
                        faces.push((
                            format!("{}{}{}", lo, PRODUCT_SEP, b.label),
                            format!("{}{}{}", hi, PRODUCT_SEP, b.label),
                        ));
                    }
                    for j in 1..=kb {
                        let (lo, hi) = &b.faces[j - 1];
                        faces.push((
                            format!("{}{}{}", a.label, PRODUCT_SEP, lo),
                            format!("{}{}{}", a.label, PRODUCT_SEP, hi),
                        ));
                    }
                    cubes.entry(ka + kb).or_default().push(Cube {
                        label,
                        dim: ka + kb,
                        degenerate: a.degenerate || b.degenerate,
                        faces,
                    });
                }
            }
        }
    }
    CubicalSet {
        cubes,
        degeneracies: HashMap::new(),
    }
}

/// Cross product of normalized chains, landing in the product set.
pub fn cross_product(a: &CubicalChain, b: &CubicalChain) -> CubicalChain {
    let mut out = CubicalChain::zero(a.dim + b.dim);
    for (la, ca) in &a.terms {
        for (lb, cb) in &b.terms {
            out.add_term(
                &format!("{la}{PRODUCT_SEP}{lb}"),
                ca.clone() * cb.clone(),
            );
        }
    }
    out
}

/// A chain in a tensor product of cubical chain groups: terms are pairs
/// of nondegenerate cubes with bidegree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorChain {
    pub terms: BTreeMap<((usize, String), (usize, String)), Scalar>,
}

impl TensorChain {
    pub fn add_term(&mut self, left: (usize, String), right: (usize, String), coeff: Scalar) {
        let key = (left, right);
        let e = self.terms.entry(key.clone()).or_insert_with(|| scalar::int(0));
        *e += coeff;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Koszul tensor boundary `d (x) id + (-1)^{|left|} id (x) d`.
    pub fn boundary(&self, set: &CubicalSet) -> TensorChain {
        let mut out = TensorChain::default();
        for (((da, la), (db, lb)), coeff) in &self.terms {
            if *da >= 1 {
                let left = CubicalChain {
                    dim: *da,
                    terms: BTreeMap::from([(la.clone(), scalar::int(1))]),
                };
                for (f, s) in boundary(set, &left).terms {
                    out.add_term((da - 1, f), (*db, lb.clone()), s * coeff.clone());
                }
            }
            if *db >= 1 {
                let right = CubicalChain {
                    dim: *db,
                    terms: BTreeMap::from([(lb.clone(), scalar::int(1))]),
                };
                let sgn = scalar::sign(*da as i64);
                for (f, s) in boundary(set, &right).terms {
                    out.add_term(
                        (*da, la.clone()),
                        (db - 1, f),
                        s * sgn.clone() * coeff.clone(),
                    );
                }
            }
        }
        out
    }
}

/// Iterated-face restriction `s|`: coordinates in `fixed` are set to the
/// stated side, faces applied from the highest direction down so that
/// lower indices keep their positions.
fn restrict(
    set: &CubicalSet,
    dim: usize,
    label: &str,
    fixed: &[(usize, usize)], // (direction, side), directions distinct
) -> Option<(usize, String)> {
    let mut current = label.to_string();
    let mut d = dim;
    let mut order: Vec<(usize, usize)> = fixed.to_vec();
    order.sort_by(|a, b| b.0.cmp(&a.0));
    for (dir, side) in order {
        let f = set.face(d, &current, dir, side)?;
        current = f.to_string();
        d -= 1;
    }
    Some((d, current))
}

/// `sgn(J, K) = (-1)^{#{(j,k) : j in J, k in K, j > k}}`.
fn serre_sign(j_set: &[usize], k_set: &[usize]) -> Scalar {
    let mut count = 0i64;
    for &j in j_set {
        for &k in k_set {
            if j > k {
                count += 1;
            }
        }
    }
    scalar::sign(count)
}

/// Serre diagonal of a normalized chain:
/// `D(s) = sum_{J u K} sgn(J,K) s|_{I^J x {0}^K} (x) s|_{{1}^J x I^K}`,
/// normalized (terms with a degenerate factor are dropped).
pub fn serre_diagonal(set: &CubicalSet, chain: &CubicalChain) -> TensorChain {
    let n = chain.dim;
    let mut out = TensorChain::default();
    for (label, coeff) in &chain.terms {
        for mask in 0u32..(1 << n) {
            let mut j_set = Vec::new();
            let mut k_set = Vec::new();
            for dir in 1..=n {
                if mask & (1 << (dir - 1)) != 0 {
                    j_set.push(dir);
                } else {
                    k_set.push(dir);
                }
            }
            // first factor: K-coordinates at 0; second: J-coordinates at 1
            let left_fix: Vec<(usize, usize)> = k_set.iter().map(|&k| (k, 0)).collect();
            let right_fix: Vec<(usize, usize)> = j_set.iter().map(|&j| (j, 1)).collect();
            let Some((dl, left)) = restrict(set, n, label, &left_fix) else {
                continue;
            };
            let Some((dr, right)) = restrict(set, n, label, &right_fix) else {
                continue;
            };
            // normalization
            let left_degen = set.cube(dl, &left).map_or(true, |c| c.degenerate);
            let right_degen = set.cube(dr, &right).map_or(true, |c| c.degenerate);
            if left_degen || right_degen {
                continue;
            }
            let s = serre_sign(&j_set, &k_set);
            out.add_term((dl, left), (dr, right), s * coeff.clone());
        }
    }
    out
}

/// Collapses one tensor factor with the augmentation (0-cubes to 1) and
/// returns the other factor; `left = true` collapses the first factor.
pub fn counit_collapse(t: &TensorChain, left: bool) -> CubicalChain {
    let mut dims: Vec<usize> = Vec::new();
    let mut out_terms: BTreeMap<String, Scalar> = BTreeMap::new();
    for (((da, la), (db, lb)), coeff) in &t.terms {
        let (aug_dim, keep_dim, keep_label) = if left {
            (*da, *db, lb)
        } else {
            (*db, *da, la)
        };
        if aug_dim != 0 {
            continue;
        }
        dims.push(keep_dim);
        let e = out_terms
            .entry(keep_label.clone())
            .or_insert_with(|| scalar::int(0));
        *e += coeff.clone();
        if e.is_zero() {
            out_terms.remove(keep_label);
        }
    }
    let dim = dims.into_iter().max().unwrap_or(0);
    CubicalChain {
        dim,
        terms: out_terms,
    }
}

/// The standard combinatorial `n`-cube: cells are words in `{0, 1, I}`
/// of length `n`, the cell dimension is the number of `I`s, and the face
/// maps substitute `0`/`1` for the `i`-th `I`. All cells nondegenerate.
pub fn standard_cube(n: usize) -> CubicalSet {
    assert!(n <= 10);
    let mut cubes: BTreeMap<usize, Vec<Cube>> = BTreeMap::new();
    // enumerate all words in {0,1,I}^n
    let mut words: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &words {
            for c in [b'0', b'1', b'I'] {
                let mut w = w.clone();
                w.push(c);
                next.push(w);
            }
        }
        words = next;
    }
    for w in words {
        let label = String::from_utf8(w.clone()).unwrap();
        let dim = w.iter().filter(|&&c| c == b'I').count();
        let mut faces = Vec::new();
        for i in 1..=dim {
            // position of the i-th I
            let pos = w
                .iter()
                .enumerate()
                .filter(|(_, &c)| c == b'I')
                .map(|(p, _)| p)
                .nth(i - 1)
                .unwrap();
            let mut lo = w.clone();
            lo[pos] = b'0';
            let mut hi = w.clone();
            hi[pos] = b'1';
            faces.push((
                String::from_utf8(lo).unwrap(),
                String::from_utf8(hi).unwrap(),
            ));
        }
        cubes.entry(dim).or_default().push(Cube {
            label,
            dim,
            degenerate: false,
            faces,
        });
    }
    // the empty word for n = 0
    if n == 0 {
        cubes.entry(0).or_default().push(Cube {
            label: "pt".into(),
            dim: 0,
            degenerate: false,
            faces: Vec::new(),
        });
        cubes.get_mut(&0).unwrap().retain(|c| c.label == "pt");
    }
    CubicalSet {
        cubes,
        degeneracies: HashMap::new(),
    }
}

/// A circle: one vertex and one nondegenerate loop edge, plus the
/// degenerate edge on the vertex.
pub fn circle() -> CubicalSet {
    let mut cubes: BTreeMap<usize, Vec<Cube>> = BTreeMap::new();
    cubes.insert(
        0,
        vec![Cube {
            label: "v".into(),
            dim: 0,
            degenerate: false,
            faces: Vec::new(),
        }],
    );
    cubes.insert(
        1,
        vec![
            Cube {
                label: "e".into(),
                dim: 1,
                degenerate: false,
                faces: vec![("v".into(), "v".into())],
            },
            Cube {
                label: "sv".into(),
                dim: 1,
                degenerate: true,
                faces: vec![("v".into(), "v".into())],
            },
        ],
    );
    let mut degeneracies = HashMap::new();
    degeneracies.insert(("v".to_string(), 1), "sv".to_string());
    CubicalSet { cubes, degeneracies }
}

/// A torus-like square with identified edges: one vertex, two loop
/// edges, one square whose horizontal faces are `a` and vertical are
/// `b`, plus the degenerate cells needed for the degeneracy table.
pub fn torus_square() -> CubicalSet {
    let mut cubes: BTreeMap<usize, Vec<Cube>> = BTreeMap::new();
    cubes.insert(
        0,
        vec![Cube {
            label: "v".into(),
            dim: 0,
            degenerate: false,
            faces: Vec::new(),
        }],
    );
    cubes.insert(
        1,
        vec![
            Cube {
                label: "a".into(),
                dim: 1,
                degenerate: false,
                faces: vec![("v".into(), "v".into())],
            },
            Cube {
                label: "b".into(),
                dim: 1,
                degenerate: false,
                faces: vec![("v".into(), "v".into())],
            },
        ],
    );
    cubes.insert(
        2,
        vec![Cube {
            label: "T".into(),
            dim: 2,
            degenerate: false,
            // direction 1 faces: a at both ends; direction 2 faces: b
            faces: vec![("a".into(), "a".into()), ("b".into(), "b".into())],
        }],
    );
    CubicalSet {
        cubes,
        degeneracies: HashMap::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn gen(set: &CubicalSet, dim: usize, label: &str) -> CubicalChain {
        CubicalChain::generator(set, dim, label).unwrap()
    }

    #[test]
    fn standard_cubes_verify_and_square_to_zero() {
        for n in 0..=4 {
            let set = standard_cube(n);
            for c in set.verify() {
                assert!(c.passed, "n={n}: {} {:?}", c.name, c.witness);
            }
            let cx = set.chain_complex().unwrap();
            assert!(crate::complex::verify_complex(&cx).passed, "n={n}");
        }
    }

    #[test]
    fn boundary_of_interval() {
        // d(c) = c(1) - c(0)
        let set = standard_cube(1);
        let b = boundary(&set, &gen(&set, 1, "I"));
        assert_eq!(b.terms.get("1"), Some(&int(1)));
        assert_eq!(b.terms.get("0"), Some(&int(-1)));
    }

    #[test]
    fn boundary_squares_to_zero_on_two_cube() {
        let set = standard_cube(2);
        let bb = boundary(&set, &boundary(&set, &gen(&set, 2, "II")));
        assert!(bb.is_zero());
    }

    #[test]
    fn boundary_of_degenerate_edge_is_zero_after_normalization() {
        let set = circle();
        for c in set.verify() {
            assert!(c.passed, "{} {:?}", c.name, c.witness);
        }
        let sv = CubicalChain::generator(&set, 1, "sv").unwrap();
        // the generator of a degenerate cube is already zero in the
        // normalized complex
        assert!(sv.is_zero());
        let e = gen(&set, 1, "e");
        assert!(boundary(&set, &e).is_zero()); // loop: v - v = 0
    }

    #[test]
    fn cross_product_with_point_is_identity() {
        let set = circle();
        let pt = standard_cube(0);
        let prod = product_set(&pt, &set);
        let e = gen(&set, 1, "e");
        let p = gen(&pt, 0, "pt");
        let pe = cross_product(&p, &e);
        assert_eq!(pe.terms.len(), 1);
        assert!(pe.terms.contains_key(&format!("pt{PRODUCT_SEP}e")));
        let cx = prod.chain_complex().unwrap();
        assert!(crate::complex::verify_complex(&cx).passed);
    }

    #[test]
    fn leibniz_for_cross_product() {
        // d(a x b) = da x b + (-1)^{|a|} a x db on generators of I x I
        let i1 = standard_cube(1);
        let prod = product_set(&i1, &i1);
        let a = gen(&i1, 1, "I");
        let b = gen(&i1, 1, "I");
        let lhs = boundary(&prod, &cross_product(&a, &b));
        let mut rhs = cross_product(&boundary(&i1, &a), &b);
        let tail = cross_product(&a, &boundary(&i1, &b));
        for (l, c) in tail.terms {
            rhs.add_term(&l, c * scalar::sign(a.dim as i64));
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn boundary_of_interval_times_chain() {
        // d(I x b) = (1 x b) - (0 x b) - I x db for |I| = 1
        let i1 = standard_cube(1);
        let s2 = standard_cube(2);
        let prod = product_set(&i1, &s2);
        let b = gen(&s2, 2, "II");
        let i = gen(&i1, 1, "I");
        let lhs = boundary(&prod, &cross_product(&i, &b));
        let mut rhs = cross_product(&gen(&i1, 0, "1"), &b);
        for (l, c) in cross_product(&gen(&i1, 0, "0"), &b).terms {
            rhs.add_term(&l, -c);
        }
        for (l, c) in cross_product(&i, &boundary(&s2, &b)).terms {
            rhs.add_term(&l, -c);
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn diagonal_of_vertex() {
        let set = standard_cube(0);
        let x = gen(&set, 0, "pt");
        let d = serre_diagonal(&set, &x);
        assert_eq!(d.terms.len(), 1);
        assert_eq!(
            d.terms.get(&((0, "pt".into()), (0, "pt".into()))),
            Some(&int(1))
        );
    }

    #[test]
    fn diagonal_of_interval() {
        // D(c) = c(0) (x) c + c (x) c(1)
        let set = standard_cube(1);
        let c = gen(&set, 1, "I");
        let d = serre_diagonal(&set, &c);
        assert_eq!(d.terms.len(), 2);
        assert_eq!(d.terms.get(&((0, "0".into()), (1, "I".into()))), Some(&int(1)));
        assert_eq!(d.terms.get(&((1, "I".into()), (0, "1".into()))), Some(&int(1)));
    }

    #[test]
    fn diagonal_of_square_matches_sign_table() {
        // D(s) = s(0,0) (x) s + s|_{I x 0} (x) s|_{1 x I}
        //        - s|_{0 x I} (x) s|_{I x 1} + s (x) s(1,1)
        let set = standard_cube(2);
        let s = gen(&set, 2, "II");
        let d = serre_diagonal(&set, &s);
        assert_eq!(d.terms.len(), 4);
        assert_eq!(d.terms.get(&((0, "00".into()), (2, "II".into()))), Some(&int(1)));
        assert_eq!(d.terms.get(&((1, "I0".into()), (1, "1I".into()))), Some(&int(1)));
        assert_eq!(d.terms.get(&((1, "0I".into()), (1, "I1".into()))), Some(&int(-1)));
        assert_eq!(d.terms.get(&((2, "II".into()), (0, "11".into()))), Some(&int(1)));
    }

    fn diagonal_is_chain_map_on(set: &CubicalSet) {
        for (&k, cubes) in &set.cubes {
            for cube in cubes {
                if cube.degenerate {
                    continue;
                }
                let c = gen(set, k, &cube.label);
                let lhs = serre_diagonal(set, &c).boundary(set);
                let rhs = if k >= 1 {
                    let b = boundary(set, &c);
                    let mut acc = TensorChain::default();
                    for (l, coeff) in &b.terms {
                        let part = serre_diagonal(
                            set,
                            &CubicalChain {
                                dim: k - 1,
                                terms: BTreeMap::from([(l.clone(), coeff.clone())]),
                            },
                        );
                        for (key, c2) in part.terms {
                            acc.add_term(key.0, key.1, c2);
                        }
                    }
                    acc
                } else {
                    TensorChain::default()
                };
                assert_eq!(lhs, rhs, "cube {} of dim {k}", cube.label);
            }
        }
    }

    #[test]
    fn diagonal_is_a_chain_map() {
        for n in 0..=4 {
            diagonal_is_chain_map_on(&standard_cube(n));
        }
        diagonal_is_chain_map_on(&circle());
        diagonal_is_chain_map_on(&torus_square());
    }

    #[test]
    fn diagonal_is_coassociative() {
        // (D (x) id) D = (id (x) D) D termwise on all cubes of dim <= 4
        for set in [standard_cube(3), standard_cube(4), torus_square()] {
            for (&k, cubes) in &set.cubes {
                for cube in cubes {
                    if cube.degenerate {
                        continue;
                    }
                    let c = gen(&set, k, &cube.label);
                    let d = serre_diagonal(&set, &c);
                    // triple tensors as maps label -> coeff
                    let mut left: BTreeMap<
                        ((usize, String), (usize, String), (usize, String)),
                        Scalar,
                    > = BTreeMap::new();
                    let mut right = left.clone();
                    for (((da, la), (db, lb)), coeff) in &d.terms {
                        let dl = serre_diagonal(
                            &set,
                            &CubicalChain {
                                dim: *da,
                                terms: BTreeMap::from([(la.clone(), coeff.clone())]),
                            },
                        );
                        for ((x, y), c2) in dl.terms {
                            let e = left
                                .entry((x, y, (*db, lb.clone())))
                                .or_insert_with(|| int(0));
                            *e += c2;
                        }
                        let dr = serre_diagonal(
                            &set,
                            &CubicalChain {
                                dim: *db,
                                terms: BTreeMap::from([(lb.clone(), coeff.clone())]),
                            },
                        );
                        for ((y, z), c2) in dr.terms {
                            let e = right
                                .entry(((*da, la.clone()), y, z))
                                .or_insert_with(|| int(0));
                            *e += c2;
                        }
                    }
                    left.retain(|_, v| !v.is_zero());
                    right.retain(|_, v| !v.is_zero());
                    assert_eq!(left, right, "cube {} of dim {k}", cube.label);
                }
            }
        }
    }

    #[test]
    fn counit_identities() {
        for set in [standard_cube(2), standard_cube(3), circle(), torus_square()] {
            for (&k, cubes) in &set.cubes {
                for cube in cubes {
                    if cube.degenerate {
                        continue;
                    }
                    let c = gen(&set, k, &cube.label);
                    let d = serre_diagonal(&set, &c);
                    assert_eq!(counit_collapse(&d, true), c, "left counit on {}", cube.label);
                    assert_eq!(
                        counit_collapse(&d, false),
                        c,
                        "right counit on {}",
                        cube.label
                    );
                }
            }
        }
    }
}
