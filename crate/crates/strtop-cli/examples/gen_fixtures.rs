//! Regenerates the shipped JSON fixtures under `fixtures/`.
//!
//! Run with `cargo run -p strtop-cli --example gen_fixtures`.

use std::collections::BTreeMap;
use std::path::Path;

use strtop::ainfty::homotopy_transfer;
use strtop::complex::retract_to_homology;
use strtop::fixtures::{exterior_poly_dga, regular_module};
use strtop::graded::GradedMap;
use strtop::io;
use strtop::morse::lens_cocycle;
use strtop::pathmod::path_module_over_self;
use strtop::sng::FiniteGroup;

fn write(dir: &Path, name: &str, text: String) {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap_or_else(|e| panic!("write {}: {e}", path.display()));
    println!("wrote {}", path.display());
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir).unwrap();

    // twisting cocycles for S^3 / Z_m
    for m in [2usize, 3, 5] {
        let t = lens_cocycle(m, 3);
        write(
            &dir,
            &format!("lens{m}.json"),
            io::render_doc(&io::CocycleDoc::encode(&t)),
        );
    }

    // groups
    write(
        &dir,
        "group_c2.json",
        io::render_doc(&io::GroupDoc::encode(&FiniteGroup::cyclic(2))),
    );
    write(
        &dir,
        "group_q8.json",
        io::render_doc(&io::GroupDoc::encode(&FiniteGroup::quaternion(2))),
    );

    // cubical sets
    write(
        &dir,
        "square.json",
        io::render_doc(&io::CubicalSetDoc::encode(&strtop::cubical::standard_cube(2))),
    );
    write(
        &dir,
        "cube3.json",
        io::render_doc(&io::CubicalSetDoc::encode(&strtop::cubical::standard_cube(3))),
    );
    write(
        &dir,
        "circle.json",
        io::render_doc(&io::CubicalSetDoc::encode(&strtop::cubical::circle())),
    );
    write(
        &dir,
        "torus_square.json",
        io::render_doc(&io::CubicalSetDoc::encode(&strtop::cubical::torus_square())),
    );

    // a DGA with nonzero differential and its regular module
    let a = exterior_poly_dga(2);
    write(&dir, "dga_ext2.json", io::render_doc(&io::DgaDoc::encode(&a)));
    let m = regular_module(&a);
    write(
        &dir,
        "module_ext2_regular.json",
        io::render_doc(&io::ModuleDoc::encode(&m)),
    );

    // morphisms: an HTT inclusion (genuinely higher) and its projection
    let r = retract_to_homology(&m.complex);
    let (_, inc, proj) = homotopy_transfer(&m, &r, 4).unwrap();
    write(
        &dir,
        "morphism_inclusion.json",
        io::render_doc(&io::MorphismDoc::encode(&inc)),
    );
    write(
        &dir,
        "morphism_projection.json",
        io::render_doc(&io::MorphismDoc::encode(&proj)),
    );

    // an invertible morphism for `ainfty invert`: identity plus a valid
    // degree-shift-free component family built from p o i round trips
    let iso = strtop::ainfty::compose_morphisms(&proj, &inc).unwrap();
    write(
        &dir,
        "morphism_iso.json",
        io::render_doc(&io::MorphismDoc::encode(&iso)),
    );

    // an identity morphism over the Z/2 group algebra whose labels match
    // the lens cocycles, for `morse induce`
    let c2_algebra = FiniteGroup::cyclic(2).group_algebra();
    let c2_module = regular_module(&c2_algebra);
    let promoted = std::sync::Arc::new(c2_module.promote(4));
    let ident = strtop::ainfty::AInftyMorphism::identity(promoted);
    write(
        &dir,
        "morphism_c2_identity.json",
        io::render_doc(&io::MorphismDoc::encode(&ident)),
    );

    // strict path module over (A, A) from the regular module
    let e = path_module_over_self(&m, 4).unwrap();
    write(
        &dir,
        "path_module_self.json",
        io::render_doc(&io::PathModuleDoc::encode(&e)),
    );
    let id = strtop::pathmod::PathMorphism::identity(std::sync::Arc::new(e));
    write(
        &dir,
        "path_morphism_identity.json",
        io::render_doc(&io::PathMorphismDoc::encode(&id)),
    );

    // the lens complex for `complex homology`
    let t = lens_cocycle(3, 3);
    let fiber = strtop::morse::trivial_group_module(&t.algebra);
    let enriched = strtop::morse::build_enriched(&fiber, &t).unwrap();
    write(
        &dir,
        "complex_lens3.json",
        io::render_doc(&io::ComplexDoc::encode(&enriched.complex)),
    );

    // a deliberately corrupted complex: one stray sign so that d^2 != 0
    let mut bad = enriched.complex.clone();
    let mut d = bad.d.clone();
    // add an extra entry turning d^2 nonzero
    let space = bad.space.clone();
    let top_label = space.labels(3)[0].clone();
    let bot_label = space.labels(2)[0].clone();
    d.add_entry(3, &bot_label, &top_label, strtop::scalar::int(1))
        .unwrap();
    bad = strtop::complex::ChainComplex::new_unchecked(space, d).unwrap();
    write(
        &dir,
        "complex_bad.json",
        io::render_doc(&io::ComplexDoc::encode(&bad)),
    );

    // a corrupted cocycle: norm entry replaced by a single group element
    let mut broken = lens_cocycle(3, 3);
    let mut g = strtop::graded::Chain::zero(broken.algebra.space().clone());
    g.add_term(0, 1, strtop::scalar::int(1));
    broken.entries.insert(("x2".into(), "x1".into()), g);
    write(
        &dir,
        "lens3_bad.json",
        io::render_doc(&io::CocycleDoc::encode(&broken)),
    );

    // malformed document for the schema-error path
    write(
        &dir,
        "malformed.json",
        "{ \"schema\": 1, \"this is\": \"not a known document\" }".to_string(),
    );

    // a small custom group given by a table (S3) to exercise file input
    let s3 = symmetric3();
    write(&dir, "group_s3.json", io::render_doc(&io::GroupDoc::encode(&s3)));

    let _ = BTreeMap::<String, GradedMap>::new();
}

/// The symmetric group on three letters, from its multiplication table.
fn symmetric3() -> FiniteGroup {
    // elements: e, r, r2 (rotations), s, sr, sr2 (reflections)
    let labels: Vec<String> = ["e", "r", "r2", "s", "sr", "sr2"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    // r^3 = e, s^2 = e, s r = r^2 s
    let mul = |a: usize, b: usize| -> usize {
        // encode a = (i, t): rotation r^i, t = reflection flag
        let (ia, ta) = if a < 3 { (a, false) } else { (a - 3, true) };
        let (ib, tb) = if b < 3 { (b, false) } else { (b - 3, true) };
        // (r^i s^ta)(r^j s^tb) = r^{i + j'} s^{ta xor tb}, with j' = j or -j
        let j = if ta { (3 - ib) % 3 } else { ib };
        let i = (ia + j) % 3;
        let t = ta ^ tb;
        if t {
            i + 3
        } else {
            i
        }
    };
    let table: Vec<Vec<usize>> = (0..6).map(|a| (0..6).map(|b| mul(a, b)).collect()).collect();
    FiniteGroup::new(labels, table).expect("S3 is a group")
}
