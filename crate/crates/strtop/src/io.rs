//! JSON wire formats. Every document carries `"schema": 1`; scalars are
//! strings `"p"` or `"p/q"`; maps are sparse triplet lists
//! `[source degree, target label, source label, coefficient]`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ainfty::{AInftyModule, AInftyMorphism, DGAlgebra, StrictModule};
use crate::complex::ChainComplex;
use crate::cubical::{Cube, CubicalSet};
use crate::error::AlgebraError;
use crate::graded::{Chain, Degree, GradedMap, GradedSpace};
use crate::morse::{CriticalSet, TwistingCocycle};
use crate::pathmod::{PathModule, PathMorphism, PathPair};
use crate::scalar::{format_scalar, parse_scalar};
use crate::sng::FiniteGroup;

pub const SCHEMA_VERSION: u32 = 1;

fn check_schema(schema: u32) -> Result<(), AlgebraError> {
    if schema != SCHEMA_VERSION {
        return Err(AlgebraError::BadInput(format!(
            "unsupported schema version {schema}, expected {SCHEMA_VERSION}"
        )));
    }
    Ok(())
}

fn bad(e: impl std::fmt::Display) -> AlgebraError {
    AlgebraError::BadInput(e.to_string())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub schema: u32,
    pub degrees: Vec<Degree>,
    pub basis: BTreeMap<String, Vec<String>>,
}

impl SpaceDoc {
    pub fn encode(space: &GradedSpace) -> Self {
        SpaceDoc {
            schema: SCHEMA_VERSION,
            degrees: space.degrees().collect(),
            basis: space
                .degrees()
                .map(|q| (q.to_string(), space.labels(q).to_vec()))
                .collect(),
        }
    }

    pub fn decode(&self) -> Result<Arc<GradedSpace>, AlgebraError> {
        check_schema(self.schema)?;
        let mut basis: BTreeMap<Degree, Vec<String>> = BTreeMap::new();
        for (q, labels) in &self.basis {
            let q: Degree = q.parse().map_err(bad)?;
            if !self.degrees.contains(&q) {
                return Err(AlgebraError::BadInput(format!(
                    "degree {q} has basis entries but is not listed in `degrees`"
                )));
            }
            basis.insert(q, labels.clone());
        }
        GradedSpace::new(basis)
    }
}

/// Sparse map entries; the source and target spaces come from context.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapDoc {
    pub schema: u32,
    pub degree: Degree,
    /// `[source degree, target label, source label, coefficient]`
    pub entries: Vec<(Degree, String, String, String)>,
}

impl MapDoc {
    pub fn encode(map: &GradedMap) -> Self {
        MapDoc {
            schema: SCHEMA_VERSION,
            degree: map.degree,
            entries: map
                .iter_entries()
                .map(|(q, row, col, coeff)| {
                    (
                        q,
                        map.target.label(q + map.degree, row).to_string(),
                        map.source.label(q, col).to_string(),
                        format_scalar(coeff),
                    )
                })
                .collect(),
        }
    }

    pub fn decode(
        &self,
        source: Arc<GradedSpace>,
        target: Arc<GradedSpace>,
    ) -> Result<GradedMap, AlgebraError> {
        check_schema(self.schema)?;
        let mut map = GradedMap::zero(source, target, self.degree);
        for (q, row, col, coeff) in &self.entries {
            map.add_entry(*q, row, col, parse_scalar(coeff)?)?;
        }
        Ok(map)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub schema: u32,
    pub space: SpaceDoc,
    pub differential: MapDoc,
}

impl ComplexDoc {
    pub fn encode(c: &ChainComplex) -> Self {
        ComplexDoc {
            schema: SCHEMA_VERSION,
            space: SpaceDoc::encode(&c.space),
            differential: MapDoc::encode(&c.d),
        }
    }

    /// Decodes without the `d^2 = 0` check so that broken fixtures can be
    /// loaded and verified.
    pub fn decode(&self) -> Result<ChainComplex, AlgebraError> {
        check_schema(self.schema)?;
        let space = self.space.decode()?;
        let d = self.differential.decode(space.clone(), space.clone())?;
        ChainComplex::new_unchecked(space, d)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DgaDoc {
    pub schema: u32,
    pub complex: ComplexDoc,
    pub product: MapDoc,
    pub unit: String,
}

impl DgaDoc {
    pub fn encode(a: &DGAlgebra) -> Self {
        DgaDoc {
            schema: SCHEMA_VERSION,
            complex: ComplexDoc::encode(&a.complex),
            product: MapDoc::encode(&a.mu),
            unit: a.unit.clone(),
        }
    }

    pub fn decode(&self) -> Result<Arc<DGAlgebra>, AlgebraError> {
        check_schema(self.schema)?;
        let complex = self.complex.decode()?;
        let space = complex.space.clone();
        let aa = crate::graded::tensor_spaces(&space, &space);
        let mu = self.product.decode(aa, space)?;
        Ok(Arc::new(DGAlgebra::new(complex, mu, &self.unit)?))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleDoc {
    pub schema: u32,
    pub algebra: DgaDoc,
    pub complex: ComplexDoc,
    pub action: MapDoc,
}

impl ModuleDoc {
    pub fn encode(m: &StrictModule) -> Self {
        ModuleDoc {
            schema: SCHEMA_VERSION,
            algebra: DgaDoc::encode(&m.algebra),
            complex: ComplexDoc::encode(&m.complex),
            action: MapDoc::encode(&m.action),
        }
    }

    pub fn decode(&self) -> Result<StrictModule, AlgebraError> {
        check_schema(self.schema)?;
        let algebra = self.algebra.decode()?;
        let complex = self.complex.decode()?;
        let dom = crate::graded::tensor_spaces(&complex.space, algebra.space());
        let action = self.action.decode(dom, complex.space.clone())?;
        StrictModule::new(algebra, complex, action)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AInftyModuleDoc {
    pub schema: u32,
    pub algebra: DgaDoc,
    pub complex: ComplexDoc,
    pub arity_bound: usize,
    /// per-arity sparse maps, keys "2", "3", ...
    pub ops: BTreeMap<String, MapDoc>,
}

impl AInftyModuleDoc {
    pub fn encode(m: &AInftyModule) -> Self {
        AInftyModuleDoc {
            schema: SCHEMA_VERSION,
            algebra: DgaDoc::encode(&m.algebra),
            complex: ComplexDoc::encode(&m.complex),
            arity_bound: m.arity_bound,
            ops: m
                .ops
                .iter()
                .map(|(k, op)| (k.to_string(), MapDoc::encode(op)))
                .collect(),
        }
    }

    pub fn decode(&self) -> Result<AInftyModule, AlgebraError> {
        check_schema(self.schema)?;
        let algebra = self.algebra.decode()?;
        let complex = self.complex.decode()?;
        let mut module = AInftyModule {
            algebra,
            complex,
            ops: BTreeMap::new(),
            arity_bound: self.arity_bound,
        };
        for (k, doc) in &self.ops {
            let k: usize = k.parse().map_err(bad)?;
            let dom = module.domain(k);
            let op = doc.decode(dom, module.space().clone())?;
            module.set_op(k, op)?;
        }
        Ok(module)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorphismDoc {
    pub schema: u32,
    pub shift: Degree,
    pub arity_bound: usize,
    pub source: AInftyModuleDoc,
    pub target: AInftyModuleDoc,
    /// per-arity sparse maps, keys "1", "2", ...
    pub maps: BTreeMap<String, MapDoc>,
}

impl MorphismDoc {
    pub fn encode(f: &AInftyMorphism) -> Self {
        MorphismDoc {
            schema: SCHEMA_VERSION,
            shift: f.shift,
            arity_bound: f.arity_bound,
            source: AInftyModuleDoc::encode(&f.source),
            target: AInftyModuleDoc::encode(&f.target),
            maps: f
                .maps
                .iter()
                .map(|(k, m)| (k.to_string(), MapDoc::encode(m)))
                .collect(),
        }
    }

    pub fn decode(&self) -> Result<AInftyMorphism, AlgebraError> {
        check_schema(self.schema)?;
        let source = Arc::new(self.source.decode()?);
        let target = Arc::new(self.target.decode()?);
        let mut f = AInftyMorphism::new(source, target, self.shift, self.arity_bound);
        for (k, doc) in &self.maps {
            let k: usize = k.parse().map_err(bad)?;
            let dom = f.source.domain(k);
            let map = doc.decode(dom, f.target.space().clone())?;
            f.set_component(k, map)?;
        }
        Ok(f)
    }
}

/// One algebra element as a sparse list `[degree, label, coefficient]`.
pub type ChainEntries = Vec<(Degree, String, String)>;

fn encode_chain(c: &Chain) -> ChainEntries {
    c.terms
        .iter()
        .map(|(&(q, i), coeff)| (q, c.space.label(q, i).to_string(), format_scalar(coeff)))
        .collect()
}

fn decode_chain(space: Arc<GradedSpace>, entries: &ChainEntries) -> Result<Chain, AlgebraError> {
    let mut c = Chain::zero(space.clone());
    for (q, label, coeff) in entries {
        let i = space
            .position(*q, label)
            .ok_or_else(|| AlgebraError::UnknownLabel {
                degree: *q,
                label: label.clone(),
            })?;
        c.add_term(*q, i, parse_scalar(coeff)?);
    }
    Ok(c)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriticalPointDoc {
    pub label: String,
    pub index: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CocycleEntryDoc {
    pub from: String,
    pub to: String,
    pub value: ChainEntries,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CocycleDoc {
    pub schema: u32,
    pub algebra: DgaDoc,
    pub critical: Vec<CriticalPointDoc>,
    pub entries: Vec<CocycleEntryDoc>,
}

impl CocycleDoc {
    pub fn encode(t: &TwistingCocycle) -> Self {
        CocycleDoc {
            schema: SCHEMA_VERSION,
            algebra: DgaDoc::encode(&t.algebra),
            critical: t
                .crit
                .points
                .iter()
                .map(|(label, index)| CriticalPointDoc {
                    label: label.clone(),
                    index: *index,
                })
                .collect(),
            entries: t
                .entries
                .iter()
                .map(|((from, to), value)| CocycleEntryDoc {
                    from: from.clone(),
                    to: to.clone(),
                    value: encode_chain(value),
                })
                .collect(),
        }
    }

    pub fn decode(&self) -> Result<TwistingCocycle, AlgebraError> {
        check_schema(self.schema)?;
        let algebra = self.algebra.decode()?;
        let crit = CriticalSet::new(
            self.critical
                .iter()
                .map(|p| (p.label.clone(), p.index))
                .collect(),
        )?;
        let mut entries = BTreeMap::new();
        for e in &self.entries {
            let value = decode_chain(algebra.space().clone(), &e.value)?;
            entries.insert((e.from.clone(), e.to.clone()), value);
        }
        TwistingCocycle::new(algebra, crit, entries)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CubeDoc {
    pub label: String,
    #[serde(default)]
    pub degenerate: bool,
    /// `[face at 0, face at 1]` per direction
    pub faces: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegeneracyDoc {
    pub from: String,
    pub direction: usize,
    pub to: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CubicalSetDoc {
    pub schema: u32,
    pub cubes: BTreeMap<String, Vec<CubeDoc>>,
    #[serde(default)]
    pub degeneracies: Vec<DegeneracyDoc>,
}

impl CubicalSetDoc {
    pub fn encode(set: &CubicalSet) -> Self {
        CubicalSetDoc {
            schema: SCHEMA_VERSION,
            cubes: set
                .cubes
                .iter()
                .map(|(k, cubes)| {
                    (
                        k.to_string(),
                        cubes
                            .iter()
                            .map(|c| CubeDoc {
                                label: c.label.clone(),
                                degenerate: c.degenerate,
                                faces: c.faces.clone(),
                            })
                            .collect(),
                    )
                })
                .collect(),
            degeneracies: set
                .degeneracies
                .iter()
                .map(|((from, dir), to)| DegeneracyDoc {
                    from: from.clone(),
                    direction: *dir,
                    to: to.clone(),
                })
                .collect(),
        }
    }

    pub fn decode(&self) -> Result<CubicalSet, AlgebraError> {
        check_schema(self.schema)?;
        let mut cubes: BTreeMap<usize, Vec<Cube>> = BTreeMap::new();
        for (k, docs) in &self.cubes {
            let k: usize = k.parse().map_err(bad)?;
            for doc in docs {
                if doc.faces.len() != k {
                    return Err(AlgebraError::BadInput(format!(
                        "cube {} of dimension {k} must list {k} face pairs",
                        doc.label
                    )));
                }
                cubes.entry(k).or_default().push(Cube {
                    label: doc.label.clone(),
                    dim: k,
                    degenerate: doc.degenerate,
                    faces: doc.faces.clone(),
                });
            }
        }
        let degeneracies = self
            .degeneracies
            .iter()
            .map(|d| ((d.from.clone(), d.direction), d.to.clone()))
            .collect();
        Ok(CubicalSet {
            cubes,
            degeneracies,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupDoc {
    pub schema: u32,
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

impl GroupDoc {
    pub fn encode(g: &FiniteGroup) -> Self {
        GroupDoc {
            schema: SCHEMA_VERSION,
            elements: g.labels().to_vec(),
            table: (0..g.order())
                .map(|i| (0..g.order()).map(|j| g.mul(i, j)).collect())
                .collect(),
        }
    }

    pub fn decode(&self) -> Result<FiniteGroup, AlgebraError> {
        check_schema(self.schema)?;
        FiniteGroup::new(self.elements.clone(), self.table.clone())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathPairDoc {
    pub schema: u32,
    pub algebra: DgaDoc,
    pub path: ComplexDoc,
    pub action: MapDoc,
    pub embed: MapDoc,
}

impl PathPairDoc {
    pub fn encode(p: &PathPair) -> Self {
        PathPairDoc {
            schema: SCHEMA_VERSION,
            algebra: DgaDoc::encode(&p.algebra),
            path: ComplexDoc::encode(&p.path),
            action: MapDoc::encode(&p.action),
            embed: MapDoc::encode(&p.embed),
        }
    }

    pub fn decode(&self) -> Result<Arc<PathPair>, AlgebraError> {
        check_schema(self.schema)?;
        let algebra = self.algebra.decode()?;
        let path = self.path.decode()?;
        let dom = crate::graded::tensor_spaces(algebra.space(), &path.space);
        let action = self.action.decode(dom, path.space.clone())?;
        let embed = self
            .embed
            .decode(algebra.space().clone(), path.space.clone())?;
        PathPair::new(algebra, path, action, embed)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathModuleDoc {
    pub schema: u32,
    pub pair: PathPairDoc,
    pub total: ComplexDoc,
    pub fiber: BTreeMap<String, Vec<String>>,
    pub arity_bound: usize,
    pub ops: BTreeMap<String, MapDoc>,
}

impl PathModuleDoc {
    pub fn encode(m: &PathModule) -> Self {
        PathModuleDoc {
            schema: SCHEMA_VERSION,
            pair: PathPairDoc::encode(&m.pair),
            total: ComplexDoc::encode(&m.total),
            fiber: m
                .fiber_labels
                .iter()
                .map(|(q, labels)| (q.to_string(), labels.clone()))
                .collect(),
            arity_bound: m.arity_bound,
            ops: m
                .ops
                .iter()
                .map(|(k, op)| (k.to_string(), MapDoc::encode(op)))
                .collect(),
        }
    }

    pub fn decode(&self) -> Result<PathModule, AlgebraError> {
        check_schema(self.schema)?;
        let pair = self.pair.decode()?;
        let total = self.total.decode()?;
        let mut fiber: BTreeMap<Degree, Vec<String>> = BTreeMap::new();
        for (q, labels) in &self.fiber {
            fiber.insert(q.parse().map_err(bad)?, labels.clone());
        }
        let mut module = PathModule::new(pair, total, fiber, BTreeMap::new(), self.arity_bound)?;
        for (k, doc) in &self.ops {
            let k: usize = k.parse().map_err(bad)?;
            let dom = module.dom_full(k);
            let op = doc.decode(dom, module.total.space.clone())?;
            module.set_op(k, op)?;
        }
        Ok(module)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathMorphismDoc {
    pub schema: u32,
    pub shift: Degree,
    pub arity_bound: usize,
    pub source: PathModuleDoc,
    pub target: PathModuleDoc,
    pub eta1: MapDoc,
    pub etas: BTreeMap<String, MapDoc>,
}

impl PathMorphismDoc {
    pub fn encode(f: &PathMorphism) -> Self {
        PathMorphismDoc {
            schema: SCHEMA_VERSION,
            shift: f.shift,
            arity_bound: f.arity_bound,
            source: PathModuleDoc::encode(&f.source),
            target: PathModuleDoc::encode(&f.target),
            eta1: MapDoc::encode(&f.eta1),
            etas: f
                .etas
                .iter()
                .map(|(k, m)| (k.to_string(), MapDoc::encode(m)))
                .collect(),
        }
    }

    pub fn decode(&self) -> Result<PathMorphism, AlgebraError> {
        check_schema(self.schema)?;
        let source = Arc::new(self.source.decode()?);
        let target = Arc::new(self.target.decode()?);
        let eta1 = self
            .eta1
            .decode(source.total.space.clone(), target.total.space.clone())?;
        let mut f = PathMorphism::new(source, target, self.shift, eta1, self.arity_bound)?;
        for (k, doc) in &self.etas {
            let k: usize = k.parse().map_err(bad)?;
            let dom = f.source.dom_full(k);
            let map = doc.decode(dom, f.target.total.space.clone())?;
            f.set_component(k, map)?;
        }
        Ok(f)
    }
}

/// Parses a JSON document of the given DTO type with input errors mapped
/// to `BadInput`.
pub fn parse_doc<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, AlgebraError> {
    serde_json::from_str(text).map_err(bad)
}

pub fn render_doc<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn space_and_map_roundtrip() {
        let a = fixtures::exterior_poly_dga(3);
        let doc = SpaceDoc::encode(a.space());
        let back = doc.decode().unwrap();
        assert_eq!(back.as_ref(), a.space().as_ref());

        let mdoc = MapDoc::encode(&a.complex.d);
        let dback = mdoc.decode(back.clone(), back.clone()).unwrap();
        assert_eq!(dback, a.complex.d);
    }

    #[test]
    fn dga_and_module_roundtrip() {
        let a = fixtures::group_algebra(3);
        let doc = DgaDoc::encode(&a);
        let back = doc.decode().unwrap();
        assert_eq!(back.mu, a.mu);
        assert_eq!(back.unit, a.unit);

        let m = fixtures::regular_module(&a);
        let mdoc = ModuleDoc::encode(&m);
        let mback = mdoc.decode().unwrap();
        assert_eq!(mback.action, m.action);
    }

    #[test]
    fn morphism_roundtrip() {
        let a = fixtures::exterior_poly_dga(2);
        let m = fixtures::regular_module(&a);
        let r = crate::complex::retract_to_homology(&m.complex);
        let (_, inc, _) = crate::ainfty::homotopy_transfer(&m, &r, 4).unwrap();
        let doc = MorphismDoc::encode(&inc);
        let text = render_doc(&doc);
        let parsed: MorphismDoc = parse_doc(&text).unwrap();
        let back = parsed.decode().unwrap();
        for k in 1..=4 {
            assert_eq!(back.component(k), inc.component(k), "component {k}");
        }
    }

    #[test]
    fn cocycle_roundtrip() {
        let t = crate::morse::lens_cocycle(3, 3);
        let doc = CocycleDoc::encode(&t);
        let back = parse_doc::<CocycleDoc>(&render_doc(&doc))
            .unwrap()
            .decode()
            .unwrap();
        assert_eq!(back.entries.len(), t.entries.len());
        for (key, value) in &t.entries {
            assert_eq!(back.entries.get(key).map(|c| c.terms.clone()), Some(value.terms.clone()));
        }
    }

    #[test]
    fn cubical_and_group_roundtrip() {
        let set = crate::cubical::circle();
        let doc = CubicalSetDoc::encode(&set);
        let back = parse_doc::<CubicalSetDoc>(&render_doc(&doc))
            .unwrap()
            .decode()
            .unwrap();
        assert!(back.verify().iter().all(|c| c.passed));
        assert_eq!(back.cubes.len(), set.cubes.len());

        let g = FiniteGroup::quaternion(2);
        let gdoc = GroupDoc::encode(&g);
        let gback = gdoc.decode().unwrap();
        assert_eq!(gback, g);
    }

    #[test]
    fn bad_schema_is_rejected() {
        let a = fixtures::group_algebra(2);
        let mut doc = DgaDoc::encode(&a);
        doc.schema = 99;
        assert!(matches!(doc.decode(), Err(AlgebraError::BadInput(_))));
    }

    #[test]
    fn path_module_roundtrip() {
        let a = fixtures::group_algebra(2);
        let m = fixtures::regular_module(&a);
        let e = crate::pathmod::path_module_over_self(&m, 3).unwrap();
        let doc = PathModuleDoc::encode(&e);
        let back = parse_doc::<PathModuleDoc>(&render_doc(&doc))
            .unwrap()
            .decode()
            .unwrap();
        assert_eq!(back.total.space, e.total.space);
        assert_eq!(back.ops.len(), e.ops.len());
        assert!(crate::pathmod::verify_path_module(&back)
            .iter()
            .all(|c| c.passed));
    }
}
