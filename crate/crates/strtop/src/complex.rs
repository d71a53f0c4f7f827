//! Chain complexes over the rationals, degree-shifting chain maps,
//! homology with explicit cycle representatives, and the homotopy
//! retract of a complex onto its homology.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::AlgebraError;
use crate::graded::{compose, Chain, Degree, GradedMap, GradedSpace};
use crate::linalg::{dense_block, kernel_basis, rref};
use crate::report::Check;
use crate::scalar::{self, Scalar};

/// A chain complex `(C, d)` with `d` of degree -1 and `d o d = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    pub space: Arc<GradedSpace>,
    pub d: GradedMap,
}

impl ChainComplex {
    /// Builds a complex, checking `d^2 = 0` and the shape of `d`.
    pub fn new(space: Arc<GradedSpace>, d: GradedMap) -> Result<Self, AlgebraError> {
        let c = ChainComplex::new_unchecked(space, d)?;
        if let Some((q, label, _)) = compose(&c.d, &c.d)?.first_nonzero_column() {
            return Err(AlgebraError::NotAComplex { degree: q, label });
        }
        Ok(c)
    }

    /// Builds a complex without the `d^2 = 0` check. Intended for
    /// fixtures that are fed to `verify_complex`.
    pub fn new_unchecked(space: Arc<GradedSpace>, d: GradedMap) -> Result<Self, AlgebraError> {
        if d.degree != -1 {
            return Err(AlgebraError::WrongDegree {
                expected: -1,
                found: d.degree,
            });
        }
        if d.source.as_ref() != space.as_ref() || d.target.as_ref() != space.as_ref() {
            return Err(AlgebraError::ShapeMismatch {
                degree: 0,
                detail: "differential must be an endomorphism of the carrier".to_string(),
            });
        }
        Ok(ChainComplex { space, d })
    }

    pub fn zero_differential(space: Arc<GradedSpace>) -> Self {
        let d = GradedMap::zero(space.clone(), space.clone(), -1);
        ChainComplex { space, d }
    }

    /// The shifted complex: degrees relabeled by `+k`, differential
    /// scaled by `(-1)^k`.
    pub fn shift(&self, k: Degree) -> ChainComplex {
        let space = self.space.shifted(k);
        let mut d = GradedMap::zero(space.clone(), space.clone(), -1);
        for (q, row, col, coeff) in self.d.iter_entries() {
            d.add_entry_idx(q + k, row, col, coeff.clone() * scalar::sign(k));
        }
        ChainComplex { space, d }
    }
}

/// Reports whether `d^2 = 0`, with the first offending basis vector as
/// witness. Never fails.
pub fn verify_complex(c: &ChainComplex) -> Check {
    match compose(&c.d, &c.d) {
        Ok(dd) => match dd.first_nonzero_column() {
            None => Check::pass("d\u{b2} = 0"),
            Some((q, label, image)) => Check::fail(
                "d\u{b2} = 0",
                q,
                label,
                format!("d\u{b2} maps it to {image}"),
            ),
        },
        Err(e) => Check::fail("d\u{b2} = 0", 0, "-", e.to_string()),
    }
}

/// A degree-shifting map between complexes. The chain-map contract is
/// `f o d = (-1)^{|f|} d o f`.
#[derive(Debug, Clone)]
pub struct ShiftedChainMap {
    pub map: GradedMap,
    pub source: Arc<ChainComplex>,
    pub target: Arc<ChainComplex>,
}

impl ShiftedChainMap {
    pub fn shift(&self) -> Degree {
        self.map.degree
    }

    /// Checks `f(d a) = (-1)^{|f|} d f(a)` on the whole basis.
    pub fn verify(&self) -> Check {
        let name = "degree-shifted chain map";
        let lhs = match compose(&self.map, &self.source.d) {
            Ok(m) => m,
            Err(e) => return Check::fail(name, 0, "-", e.to_string()),
        };
        let rhs = match compose(&self.target.d, &self.map) {
            Ok(m) => m.scale(&scalar::sign(self.map.degree)),
            Err(e) => return Check::fail(name, 0, "-", e.to_string()),
        };
        match lhs.sub(&rhs).map(|d| d.first_nonzero_column()) {
            Ok(None) => Check::pass(name),
            Ok(Some((q, label, image))) => Check::fail(
                name,
                q,
                label,
                format!("f d - (-1)^|f| d f maps it to {image}"),
            ),
            Err(e) => Check::fail(name, 0, "-", e.to_string()),
        }
    }
}

/// Homology of a complex: a graded space of classes together with chosen
/// cycle representatives (one chain per class, in the big complex).
#[derive(Debug, Clone)]
pub struct Homology {
    pub space: Arc<GradedSpace>,
    pub representatives: BTreeMap<(Degree, usize), Chain>,
}

impl Homology {
    pub fn dims(&self) -> BTreeMap<Degree, usize> {
        self.space
            .degrees()
            .map(|q| (q, self.space.dim(q)))
            .collect()
    }
}

/// Homology of `c` with explicit cycle representatives, labeled
/// `h{q}_{i}` in each degree.
pub fn homology(c: &ChainComplex) -> Homology {
    retract_to_homology(c).into_homology()
}

/// The full splitting data behind `retract_to_homology`.
#[derive(Debug, Clone)]
pub struct HomotopyRetract {
    pub big: Arc<ChainComplex>,
    pub small: Arc<ChainComplex>,
    /// inclusion of the small complex, degree 0
    pub i: GradedMap,
    /// projection onto the small complex, degree 0
    pub p: GradedMap,
    /// homotopy on the big complex, degree +1, with `dh + hd = id - ip`
    pub h: GradedMap,
}

impl HomotopyRetract {
    /// Checks every retract identity: `i`, `p` chain maps,
    /// `dh + hd = id - ip`, `p i = id`, and the side conditions
    /// `h^2 = 0`, `h i = 0`, `p h = 0`.
    pub fn verify(&self) -> Vec<Check> {
        let mut checks = Vec::new();
        let into = |name: &str, diff: Result<GradedMap, AlgebraError>| match diff {
            Ok(m) => match m.first_nonzero_column() {
                None => Check::pass(name),
                Some((q, label, image)) => {
                    Check::fail(name, q, label, format!("defect {image}"))
                }
            },
            Err(e) => Check::fail(name, 0, "-", e.to_string()),
        };
        let d_big = &self.big.d;
        let d_small = &self.small.d;
        checks.push(into(
            "i is a chain map",
            compose(&self.i, d_small).and_then(|l| l.sub(&compose(d_big, &self.i)?)),
        ));
        checks.push(into(
            "p is a chain map",
            compose(&self.p, d_big).and_then(|l| l.sub(&compose(d_small, &self.p)?)),
        ));
        checks.push(into(
            "dh + hd = id - ip",
            (|| {
                let dh = compose(d_big, &self.h)?;
                let hd = compose(&self.h, d_big)?;
                let ip = compose(&self.i, &self.p)?;
                let id = GradedMap::identity(self.big.space.clone());
                dh.add(&hd)?.sub(&id.sub(&ip)?)
            })(),
        ));
        checks.push(into(
            "p i = id",
            compose(&self.p, &self.i)
                .and_then(|pi| pi.sub(&GradedMap::identity(self.small.space.clone()))),
        ));
        checks.push(into("h h = 0", compose(&self.h, &self.h)));
        checks.push(into("h i = 0", compose(&self.h, &self.i)));
        checks.push(into("p h = 0", compose(&self.p, &self.h)));
        checks
    }

    pub fn is_valid(&self) -> bool {
        self.verify().iter().all(|c| c.passed)
    }

    fn into_homology(self) -> Homology {
        let mut representatives = BTreeMap::new();
        for (q, idx, _) in self.small.space.iter_basis() {
            let mut rep = Chain::zero(self.big.space.clone());
            for (row, coeff) in self.i.apply_basis(q, idx) {
                rep.add_term(q, row, coeff);
            }
            representatives.insert((q, idx), rep);
        }
        Homology {
            space: self.small.space.clone(),
            representatives,
        }
    }
}

/// Splits each `C_q = B_q (+) H_q (+) A_q` with `d : A_q ~ B_{q-1}` and
/// returns the homotopy retract onto homology. The homotopy `h` is
/// `(d|_A)^{-1}` on `B` and zero on `H (+) A`, which forces the side
/// conditions `h^2 = hi = ph = 0`.
///
/// All choices are made by declared basis order, so the output is
/// deterministic.
pub fn retract_to_homology(c: &ChainComplex) -> HomotopyRetract {
    let space = &c.space;
    let degrees: Vec<Degree> = space.degrees().collect();

    // Per degree: columns of d_q in dense form and a basis of ker d_q.
    let mut kernels: BTreeMap<Degree, Vec<Vec<Scalar>>> = BTreeMap::new();
    for &q in &degrees {
        let block = dense_block(&c.d, q);
        kernels.insert(q, kernel_basis(block, space.dim(q)));
    }

    // Choose A_q: source vectors whose images form a basis of B_{q-1};
    // take standard basis columns e_j in declared order whenever d e_j is
    // independent from the images chosen so far.
    let mut chosen_a: BTreeMap<Degree, Vec<usize>> = BTreeMap::new(); // columns e_j
    let mut image_b: BTreeMap<Degree, Vec<Vec<Scalar>>> = BTreeMap::new(); // basis of B_{q-1}
    for &q in &degrees {
        let n = space.dim(q);
        let m = space.dim(q - 1);
        let block = dense_block(&c.d, q);
        let mut picked_cols = Vec::new();
        let mut picked_images: Vec<Vec<Scalar>> = Vec::new();
        for j in 0..n {
            let img: Vec<Scalar> = (0..m).map(|r| block[r][j].clone()).collect();
            if img.iter().all(Scalar::is_zero) {
                continue;
            }
            let mut trial: Vec<Vec<Scalar>> =
                picked_images.iter().cloned().chain([img.clone()]).collect();
            // rank check via rref on the transpose (rows = vectors)
            let rank = {
                let mat: Vec<Vec<Scalar>> = trial.drain(..).collect();
                rref(mat).1.len()
            };
            if rank == picked_images.len() + 1 {
                picked_images.push(img);
                picked_cols.push(j);
            }
        }
        chosen_a.insert(q, picked_cols);
        image_b.insert(q - 1, picked_images);
    }

    // H_q representatives: extend B_q to a basis of Z_q = ker d_q by
    // kernel vectors in declared order.
    let mut h_reps: BTreeMap<Degree, Vec<Vec<Scalar>>> = BTreeMap::new();
    for &q in &degrees {
        let b = image_b.get(&q).cloned().unwrap_or_default();
        let z = kernels.get(&q).cloned().unwrap_or_default();
        let mut reps = Vec::new();
        let mut span: Vec<Vec<Scalar>> = b.clone();
        let mut rank = rref(span.clone()).1.len();
        for v in z {
            let mut trial = span.clone();
            trial.push(v.clone());
            let new_rank = rref(trial.clone()).1.len();
            if new_rank > rank {
                span = trial;
                rank = new_rank;
                reps.push(v);
            }
        }
        h_reps.insert(q, reps);
    }

    // Small space with labels h{q}_{i}.
    let mut small_basis: BTreeMap<Degree, Vec<String>> = BTreeMap::new();
    for (&q, reps) in &h_reps {
        if !reps.is_empty() {
            small_basis.insert(q, (0..reps.len()).map(|i| format!("h{q}_{i}")).collect());
        }
    }
    let small_space = GradedSpace::new(small_basis).unwrap();
    let small = Arc::new(ChainComplex::zero_differential(small_space.clone()));

    // i : small -> big sends h{q}_{i} to its representative cycle.
    let mut i_map = GradedMap::zero(small_space.clone(), space.clone(), 0);
    for (&q, reps) in &h_reps {
        for (idx, rep) in reps.iter().enumerate() {
            for (row, coeff) in rep.iter().enumerate() {
                if !coeff.is_zero() {
                    i_map.add_entry_idx(q, row, idx, coeff.clone());
                }
            }
        }
    }

    // For p and h, express each big basis vector in the split basis
    // [B_q | H_q | A_q] by solving the change-of-basis system per degree.
    let mut p_map = GradedMap::zero(space.clone(), small_space.clone(), 0);
    let mut h_map = GradedMap::zero(space.clone(), space.clone(), 1);
    for &q in &degrees {
        let n = space.dim(q);
        if n == 0 {
            continue;
        }
        let b = image_b.get(&q).cloned().unwrap_or_default();
        let hs = h_reps.get(&q).cloned().unwrap_or_default();
        let a_cols = chosen_a.get(&q).cloned().unwrap_or_default();
        let nb = b.len();
        let nh = hs.len();
        let na = a_cols.len();
        debug_assert_eq!(nb + nh + na, n, "splitting must exhaust C_{q}");

        // columns of the split basis as vectors in C_q
        let mut basis_cols: Vec<Vec<Scalar>> = Vec::with_capacity(n);
        basis_cols.extend(b.iter().cloned());
        basis_cols.extend(hs.iter().cloned());
        for &j in &a_cols {
            let mut e = vec![scalar::int(0); n];
            e[j] = scalar::int(1);
            basis_cols.push(e);
        }
        // solve M * x = e_k for every k at once: rref of [M | I]
        let mut aug: Vec<Vec<Scalar>> = (0..n)
            .map(|r| {
                let mut row: Vec<Scalar> =
                    basis_cols.iter().map(|colv| colv[r].clone()).collect();
                for k in 0..n {
                    row.push(if k == r {
                        scalar::int(1)
                    } else {
                        scalar::int(0)
                    });
                }
                row
            })
            .collect();
        let (red, pivots) = rref(std::mem::take(&mut aug));
        debug_assert_eq!(pivots.len(), n, "split basis must be invertible");
        // coords[j][k]: coefficient of split vector j in e_k
        let coords = |j: usize, k: usize| -> Scalar {
            // row with pivot j holds the j-th coordinate
            let row = pivots.iter().position(|&pc| pc == j).unwrap();
            red[row][n + k].clone()
        };

        for k in 0..n {
            // p: the H-part coordinates
            for j in 0..nh {
                let coeff = coords(nb + j, k);
                if !coeff.is_zero() {
                    p_map.add_entry_idx(q, j, k, coeff);
                }
            }
            // h: on the B-part, h(b_j) = a_j in degree q+1
            for j in 0..nb {
                let coeff = coords(j, k);
                if coeff.is_zero() {
                    continue;
                }
                // a_j is the standard basis column chosen_a[q+1][j]
                let a_cols_up = chosen_a.get(&(q + 1)).cloned().unwrap_or_default();
                debug_assert!(j < a_cols_up.len());
                h_map.add_entry_idx(q, a_cols_up[j], k, coeff);
            }
        }
    }

    HomotopyRetract {
        big: Arc::new(c.clone()),
        small,
        i: i_map,
        p: p_map,
        h: h_map,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::tensor_all;
    use crate::scalar::int;

    fn two_term_identity() -> ChainComplex {
        let space = GradedSpace::from_pairs(&[(0, "a"), (1, "b")]);
        let mut d = GradedMap::zero(space.clone(), space.clone(), -1);
        d.add_entry(1, "a", "b", int(1)).unwrap();
        ChainComplex::new(space, d).unwrap()
    }

    /// Lens-space style complex with trivial coefficients:
    /// degrees 0..=top, differentials alternating 0 and *m.
    pub fn lens_trivial(m: i64, top: i64) -> ChainComplex {
        let pairs: Vec<(Degree, String)> = (0..=top).map(|q| (q, format!("c{q}"))).collect();
        let refs: Vec<(Degree, &str)> = pairs.iter().map(|(q, l)| (*q, l.as_str())).collect();
        let space = GradedSpace::from_pairs(&refs);
        let mut d = GradedMap::zero(space.clone(), space.clone(), -1);
        for q in 1..=top {
            // d_q = 0 for odd q (the g-1 direction dies rationally), *m for even q
            if q % 2 == 0 {
                d.add_entry(q, &format!("c{}", q - 1), &format!("c{q}"), int(m))
                    .unwrap();
            }
        }
        ChainComplex::new(space, d).unwrap()
    }

    #[test]
    fn zero_differential_verifies() {
        let c = ChainComplex::zero_differential(GradedSpace::from_pairs(&[(0, "x"), (2, "y")]));
        assert!(verify_complex(&c).passed);
    }

    #[test]
    fn two_term_identity_verifies() {
        assert!(verify_complex(&two_term_identity()).passed);
    }

    #[test]
    fn corrupted_lens_complex_fails_with_witness() {
        // lens complex for m=3, top=3, then flip one sign so that an
        // extra entry creates d^2 != 0
        let space = GradedSpace::from_pairs(&[(0, "c0"), (1, "c1"), (2, "c2"), (3, "c3")]);
        let mut d = GradedMap::zero(space.clone(), space.clone(), -1);
        d.add_entry(2, "c1", "c2", int(3)).unwrap();
        // corruption: a stray entry in degree 1
        d.add_entry(1, "c0", "c1", int(1)).unwrap();
        let c = ChainComplex::new_unchecked(space, d).unwrap();
        let check = verify_complex(&c);
        assert!(!check.passed);
        let w = check.witness.expect("needs witness");
        assert_eq!(w.degree, 2);
        assert_eq!(w.basis, "c2");
    }

    #[test]
    fn shift_zero_is_identity() {
        let c = two_term_identity();
        assert_eq!(c.shift(0), c);
    }

    #[test]
    fn shift_twice_restores_sign() {
        let c = two_term_identity();
        let shifted = c.shift(1).shift(1);
        for (q, row, col, coeff) in c.d.iter_entries() {
            assert_eq!(shifted.d.entry(q + 2, row, col), coeff.clone());
        }
        assert!(verify_complex(&c.shift(1)).passed);
    }

    #[test]
    fn homology_of_zero_differential_is_the_space() {
        let space = GradedSpace::from_pairs(&[(0, "x"), (0, "y"), (2, "z")]);
        let c = ChainComplex::zero_differential(space.clone());
        let h = homology(&c);
        assert_eq!(h.space.dim(0), 2);
        assert_eq!(h.space.dim(2), 1);
    }

    #[test]
    fn homology_of_acyclic_complex_vanishes() {
        let h = homology(&two_term_identity());
        assert_eq!(h.space.total_dim(), 0);
    }

    // LENS(m=3, top=3) with trivial coefficients: R <- 0 <- *3 <- 0,
    // homology dims (1, 0, 0, 1) by hand row-reduction
    #[test]
    fn lens_3_3_homology_dims() {
        let h = homology(&lens_trivial(3, 3));
        let dims: Vec<usize> = (0..=3).map(|q| h.space.dim(q)).collect();
        assert_eq!(dims, [1, 0, 0, 1]);
    }

    #[test]
    fn retract_of_zero_differential_is_identity() {
        let space = GradedSpace::from_pairs(&[(0, "x"), (1, "y")]);
        let c = ChainComplex::zero_differential(space);
        let r = retract_to_homology(&c);
        assert!(r.is_valid());
        assert!(r.h.is_zero_map());
        assert_eq!(compose(&r.i, &r.p).unwrap(), GradedMap::identity(c.space));
    }

    #[test]
    fn retract_of_acyclic_complex() {
        let c = two_term_identity();
        let r = retract_to_homology(&c);
        assert!(r.is_valid());
        assert_eq!(r.small.space.total_dim(), 0);
        assert!(r.i.is_zero_map());
        assert!(r.p.is_zero_map());
        // dh + hd = id since ip = 0
        let dh = compose(&c.d, &r.h).unwrap();
        let hd = compose(&r.h, &c.d).unwrap();
        assert_eq!(
            dh.add(&hd).unwrap(),
            GradedMap::identity(c.space.clone())
        );
    }

    #[test]
    fn retract_identities_on_random_sparse_complexes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for case in 0..40 {
            let degrees: Vec<Degree> = (-1..=5).collect();
            let mut pairs = Vec::new();
            let mut names = Vec::new();
            for &q in &degrees {
                let dim = rng.gen_range(0..=3usize);
                for i in 0..dim {
                    names.push((q, format!("e{q}_{i}")));
                }
            }
            for (q, name) in &names {
                pairs.push((*q, name.as_str()));
            }
            if pairs.is_empty() {
                continue;
            }
            let space = GradedSpace::from_pairs(&pairs);
            // build a valid differential: random strictly "upper" map u of
            // degree -1 with u^2 = 0 via u = v composed with projection...
            // simplest exact recipe: d = s o t where t kills enough; here
            // we instead build d from a random bipartition so that d^2 = 0
            // structurally: source-only columns map to target-only rows.
            let mut d = GradedMap::zero(space.clone(), space.clone(), -1);
            for &q in &degrees {
                let cols = space.dim(q);
                let rows = space.dim(q - 1);
                if cols == 0 || rows == 0 {
                    continue;
                }
                // only odd q get nonzero blocks, so d^2 = 0 automatically
                if q.rem_euclid(2) == 1 {
                    for c in 0..cols {
                        for r in 0..rows {
                            if rng.gen_bool(0.5) {
                                d.add_entry_idx(q, r, c, int(rng.gen_range(-3..=3)));
                            }
                        }
                    }
                }
            }
            let c = ChainComplex::new(space, d).unwrap_or_else(|e| panic!("case {case}: {e}"));
            let r = retract_to_homology(&c);
            for check in r.verify() {
                assert!(check.passed, "case {case}: {}", check.name);
            }
            // Euler characteristic check
            let h = homology(&c);
            let euler_c: i64 = c
                .space
                .degrees()
                .map(|q| (c.space.dim(q) as i64) * if q % 2 == 0 { 1 } else { -1 })
                .sum();
            let euler_h: i64 = h
                .space
                .degrees()
                .map(|q| (h.space.dim(q) as i64) * if q % 2 == 0 { 1 } else { -1 })
                .sum();
            assert_eq!(euler_c, euler_h, "case {case}");
        }
    }

    #[test]
    fn homology_commutes_with_shift() {
        let c = lens_trivial(2, 3);
        let h = homology(&c);
        let hs = homology(&c.shift(2));
        for q in h.space.degrees() {
            assert_eq!(h.space.dim(q), hs.space.dim(q + 2));
        }
    }

    #[test]
    fn shifted_chain_map_contract() {
        // d itself is a chain map of odd degree: d(d a) = -d(d a) = 0
        let c = Arc::new(lens_trivial(2, 3));
        let f = ShiftedChainMap {
            map: c.d.clone(),
            source: c.clone(),
            target: c.clone(),
        };
        assert!(f.verify().passed);
    }

    #[test]
    fn tensor_of_complexes_is_a_complex() {
        // Koszul tensor differential squares to zero
        let c = lens_trivial(2, 3);
        let space = tensor_all(&[&c.space, &c.space]);
        let id = GradedMap::identity(c.space.clone());
        let d1 = crate::graded::tensor_maps(&c.d, &id);
        let d2 = crate::graded::tensor_maps(&id, &c.d);
        let d = d1.add(&d2).unwrap();
        let cc = ChainComplex::new(space, d);
        assert!(cc.is_ok());
    }
}
