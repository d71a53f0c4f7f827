//! Seeded random instance generators for property sweeps and the
//! acceptance suite. Everything is deterministic in the seed.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ainfty::{AInftyModule, AInftyMorphism, DGAlgebra, StrictModule};
use crate::complex::{retract_to_homology, ChainComplex, HomotopyRetract};
use crate::error::AlgebraError;
use crate::fixtures;
use crate::graded::{compose, tensor_maps_all, Degree, GradedMap, GradedSpace};
use crate::linalg::invert_map;
use crate::scalar::{self, Scalar};

pub type Seed = u64;

pub fn rng_from_seed(seed: Seed) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small nonzero scalar: integers and halves, biased toward units.
pub fn small_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let n = [1i64, -1, 1, -1, 2, -2, 3][rng.gen_range(0..7)];
    let d = [1i64, 1, 1, 2][rng.gen_range(0..4)];
    scalar::ratio(n, d)
}

/// A random complex supported in `degrees`, built from dots and
/// two-term intervals, then scrambled by an exact base change.
pub fn random_complex(
    rng: &mut ChaCha8Rng,
    degrees: std::ops::RangeInclusive<Degree>,
    max_dim: usize,
    label_prefix: &str,
) -> ChainComplex {
    let degs: Vec<Degree> = degrees.collect();
    let mut pairs: Vec<(Degree, String)> = Vec::new();
    let mut intervals: Vec<(Degree, String, String)> = Vec::new(); // (q, top, bottom)
    for &q in &degs {
        let dots = rng.gen_range(0..=max_dim.min(2));
        for i in 0..dots {
            pairs.push((q, format!("{label_prefix}d{q}_{i}")));
        }
    }
    for &q in &degs {
        if !degs.contains(&(q - 1)) {
            continue;
        }
        let ivs = rng.gen_range(0..=max_dim.min(2));
        for i in 0..ivs {
            let top = format!("{label_prefix}i{q}_{i}");
            let bot = format!("{label_prefix}j{q}_{i}");
            pairs.push((q, top.clone()));
            pairs.push((q - 1, bot.clone()));
            intervals.push((q, top, bot));
        }
    }
    if pairs.is_empty() {
        // never return an empty complex; keep one dot
        let q = degs[rng.gen_range(0..degs.len())];
        pairs.push((q, format!("{label_prefix}d{q}_0")));
    }
    let refs: Vec<(Degree, &str)> = pairs.iter().map(|(q, l)| (*q, l.as_str())).collect();
    let space = GradedSpace::from_pairs(&refs);
    let mut d = GradedMap::zero(space.clone(), space.clone(), -1);
    for (q, top, bot) in &intervals {
        d.add_entry(*q, bot, top, scalar::int(1)).unwrap();
    }
    let c = ChainComplex::new(space, d).unwrap();
    conjugate_complex(rng, &c)
}

/// A random invertible degree-0 endomorphism together with its inverse,
/// built from elementary shears and unit scalings. When `fix` is given,
/// that basis element is never modified (its column stays standard).
pub fn random_invertible(
    rng: &mut ChaCha8Rng,
    space: &Arc<GradedSpace>,
    fix: Option<(Degree, usize)>,
) -> (GradedMap, GradedMap) {
    let mut psi = GradedMap::identity(space.clone());
    let mut inv = GradedMap::identity(space.clone());
    let degrees: Vec<Degree> = space.degrees().collect();
    for &q in &degrees {
        let n = space.dim(q);
        if n == 0 {
            continue;
        }
        let ops = rng.gen_range(0..=n.min(3) * 2);
        for _ in 0..ops {
            let j = rng.gen_range(0..n);
            if fix == Some((q, j)) {
                continue;
            }
            if n >= 2 && rng.gen_bool(0.7) {
                // shear: e_j -> e_j + c e_i
                let mut i = rng.gen_range(0..n);
                if i == j {
                    i = (i + 1) % n;
                }
                if fix == Some((q, i)) && i == j {
                    continue;
                }
                let c = small_scalar(rng);
                let mut shear = GradedMap::identity(space.clone());
                shear.add_entry_idx(q, i, j, c.clone());
                let mut unshear = GradedMap::identity(space.clone());
                unshear.add_entry_idx(q, i, j, -c);
                psi = compose(&shear, &psi).unwrap();
                inv = compose(&inv, &unshear).unwrap();
            } else {
                // scale e_j by a unit
                let c = small_scalar(rng);
                let mut sc = GradedMap::identity(space.clone());
                sc.add_entry_idx(q, j, j, c.clone() - scalar::int(1));
                let mut unsc = GradedMap::identity(space.clone());
                unsc.add_entry_idx(q, j, j, scalar::int(1) / c - scalar::int(1));
                psi = compose(&sc, &psi).unwrap();
                inv = compose(&inv, &unsc).unwrap();
            }
        }
    }
    debug_assert_eq!(
        compose(&psi, &inv).unwrap(),
        GradedMap::identity(space.clone())
    );
    (psi, inv)
}

/// Conjugates the differential by a random base change.
pub fn conjugate_complex(rng: &mut ChaCha8Rng, c: &ChainComplex) -> ChainComplex {
    let (psi, inv) = random_invertible(rng, &c.space, None);
    let d = compose(&psi, &compose(&c.d, &inv).unwrap()).unwrap();
    ChainComplex::new(c.space.clone(), d).expect("conjugation preserves d^2 = 0")
}

/// A random DGA: one of the built-in families, scrambled by a
/// unit-preserving base change.
pub fn random_dga(rng: &mut ChaCha8Rng) -> Arc<DGAlgebra> {
    let a = match rng.gen_range(0..4) {
        0 => fixtures::group_algebra(rng.gen_range(2..=4)),
        1 => fixtures::exterior_poly_dga(rng.gen_range(2..=3)),
        2 => fixtures::truncated_poly_dga(2, rng.gen_range(2..=3)),
        _ => fixtures::truncated_poly_dga(0, rng.gen_range(2..=3)),
    };
    if rng.gen_bool(0.5) {
        return a;
    }
    // conjugate by phi with phi(1) = 1
    let unit_pos = a.space().position(0, &a.unit).unwrap();
    let (phi, phi_inv) = random_invertible(rng, a.space(), Some((0, unit_pos)));
    let d = compose(&phi, &compose(&a.complex.d, &phi_inv).unwrap()).unwrap();
    let complex = ChainComplex::new(a.space().clone(), d).unwrap();
    let mu = compose(
        &phi,
        &compose(&a.mu, &tensor_maps_all(&[&phi_inv, &phi_inv])).unwrap(),
    )
    .unwrap();
    Arc::new(DGAlgebra::new(complex, mu, &a.unit).unwrap())
}

/// A random strict module over `a`: a free module on a random complex,
/// scrambled by a base change of the carrier.
pub fn random_strict_module(
    rng: &mut ChaCha8Rng,
    a: &Arc<DGAlgebra>,
    label_prefix: &str,
) -> StrictModule {
    let lo = rng.gen_range(-2..=0);
    let hi = lo + rng.gen_range(1..=3);
    let v = random_complex(rng, lo..=hi, 2, label_prefix);
    let m = fixtures::free_module(a, &v);
    conjugate_module(rng, &m)
}

/// Conjugates carrier differential and action by a random base change.
pub fn conjugate_module(rng: &mut ChaCha8Rng, m: &StrictModule) -> StrictModule {
    let (psi, inv) = random_invertible(rng, m.space(), None);
    let d = compose(&psi, &compose(&m.complex.d, &inv).unwrap()).unwrap();
    let complex = ChainComplex::new(m.space().clone(), d).unwrap();
    let id_a = GradedMap::identity(m.algebra.space().clone());
    let action = compose(
        &psi,
        &compose(&m.action, &tensor_maps_all(&[&inv, &id_a])).unwrap(),
    )
    .unwrap();
    StrictModule::new(m.algebra.clone(), complex, action).unwrap()
}

/// A retract onto homology, perturbed by a random chain automorphism
/// `chi = id + d x + x d` of the big complex (falls back to the plain
/// retract when the perturbation is singular).
pub fn random_retract(rng: &mut ChaCha8Rng, c: &ChainComplex) -> HomotopyRetract {
    let base = retract_to_homology(c);
    let x = random_map(rng, &c.space, &c.space, 1, 0.4);
    let chi = GradedMap::identity(c.space.clone())
        .add(&compose(&c.d, &x).unwrap())
        .unwrap()
        .add(&compose(&x, &c.d).unwrap())
        .unwrap();
    let Ok(chi_inv) = invert_map(&chi) else {
        return base;
    };
    let i = compose(&chi, &base.i).unwrap();
    let p = compose(&base.p, &chi_inv).unwrap();
    let h = compose(&chi, &compose(&base.h, &chi_inv).unwrap()).unwrap();
    let out = HomotopyRetract {
        big: base.big.clone(),
        small: base.small.clone(),
        i,
        p,
        h,
    };
    debug_assert!(out.is_valid());
    out
}

/// A random sparse map of the given degree.
pub fn random_map(
    rng: &mut ChaCha8Rng,
    source: &Arc<GradedSpace>,
    target: &Arc<GradedSpace>,
    degree: Degree,
    density: f64,
) -> GradedMap {
    let mut out = GradedMap::zero(source.clone(), target.clone(), degree);
    for (q, col, _) in source.iter_basis() {
        let rows = target.dim(q + degree);
        if rows == 0 {
            continue;
        }
        if rng.gen_bool(density) {
            let row = rng.gen_range(0..rows);
            out.add_entry_idx(q, row, col, small_scalar(rng));
        }
    }
    out
}

/// An arbitrary component family `f_k` with invertible `f_1`, from a
/// module to itself. Not required to satisfy the morphism equations:
/// inversion roundtrips are formal identities that hold regardless.
pub fn random_iso_family(
    rng: &mut ChaCha8Rng,
    module: &Arc<AInftyModule>,
    arity_bound: usize,
) -> AInftyMorphism {
    let mut f = AInftyMorphism::new(module.clone(), module.clone(), 0, arity_bound);
    let (f1, _) = random_invertible(rng, module.space(), None);
    f.set_component(1, f1).unwrap();
    for k in 2..=arity_bound {
        let dom = module.domain(k);
        let map = random_map(rng, &dom, module.space(), k as Degree - 1, 0.35);
        f.set_component(k, map).unwrap();
    }
    f
}

/// A valid infinity-isomorphism between two transferred structures on
/// homology, built as `p2 o i1` for two independently perturbed retracts
/// of the same strict module.
pub fn random_valid_infty_iso(
    rng: &mut ChaCha8Rng,
    module: &StrictModule,
    arity_bound: usize,
) -> Result<AInftyMorphism, AlgebraError> {
    let r1 = random_retract(rng, &module.complex);
    let r2 = random_retract(rng, &module.complex);
    let (_, i1, _) = crate::ainfty::homotopy_transfer(module, &r1, arity_bound)?;
    let (_, _, p2) = crate::ainfty::homotopy_transfer(module, &r2, arity_bound)?;
    crate::ainfty::compose_morphisms(&p2, &i1)
}

/// A valid strict quasi-isomorphism that is not an isomorphism: the
/// inclusion of a random module `m` into `m (+) acyclic`.
pub fn random_quasi_iso(
    rng: &mut ChaCha8Rng,
    a: &Arc<DGAlgebra>,
    arity_bound: usize,
) -> Result<(AInftyMorphism, StrictModule, StrictModule), AlgebraError> {
    let m = random_strict_module(rng, a, "M.");
    // acyclic complement: free module on an interval complex
    let lo: Degree = rng.gen_range(-1..=1);
    let pairs = [(lo + 1, "top"), (lo, "bot")];
    let v_space = GradedSpace::from_pairs(&pairs);
    let mut dv = GradedMap::zero(v_space.clone(), v_space.clone(), -1);
    dv.add_entry(lo + 1, "bot", "top", scalar::int(1)).unwrap();
    let v = ChainComplex::new(v_space, dv).unwrap();
    let e = fixtures::free_module(a, &v);
    let sum = fixtures::module_direct_sum(&m, &e, "E.")?;

    let src = Arc::new(m.promote(arity_bound));
    let tgt = Arc::new(sum.promote(arity_bound));
    let mut inc = GradedMap::zero(
        src.as_ref().space().clone(),
        tgt.as_ref().space().clone(),
        0,
    );
    for (q, _, label) in m.space().iter_basis() {
        inc.add_entry(q, label, label, scalar::int(1))?;
    }
    let mut f = AInftyMorphism::new(src, tgt, 0, arity_bound);
    f.set_component(1, inc)?;
    Ok((f, m, sum))
}
