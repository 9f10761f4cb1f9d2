//! Cross-validation of the degreewise classifier and dependent product
//! against the brute-force oracles, plus the matching-object and coskeleton
//! worked examples.

use std::collections::BTreeMap;

use glutop_core::corpus;
use glutop_core::diagcat::{restrict_diagram, DiagCat, Diagram, NatTrans};
use glutop_core::fincat::{truncate_structure, FinFunctor};
use glutop_core::logicat::{FinSetMap, FinSetObj, LogicalCategory};
use glutop_core::matching::{
    char_inverse, coskeleton, glue_equivalence, matching_object, omega_inverse, pi_inverse,
    sharp_inverse, verify_restriction_compat, InverseResult,
};
use glutop_core::oracle::{
    classifier_iso, classifier_mutual_iso, gen_mono_into, natural_iso_search, omega_oracle,
    pi_oracle_sections, verify_classifier, verify_dependent_product,
};

const CAP: usize = 1_000_000;

fn component_sizes(d: &Diagram) -> BTreeMap<String, usize> {
    d.sets.iter().map(|(o, s)| (o.clone(), s.len())).collect()
}

#[test]
fn horn_matching_object_has_four_simplices() {
    let inv = corpus::semi_simplex_inverse(3);
    let horn = corpus::horn_3_2();
    let m = matching_object(&inv, &horn, "[2]", CAP).unwrap();
    assert_eq!(m.object().len(), 4);
    // the matching map is the inclusion of the three present triangles
    let mm = m.matching_map.as_ref().unwrap();
    assert!(mm.is_injective());
    assert_eq!(mm.src.len(), 3);
}

#[test]
fn matching_at_minimal_degree_is_singleton() {
    let inv = corpus::span_inverse();
    let x = corpus::counterexample_x();
    let m = matching_object(&inv, &x, "0", CAP).unwrap();
    assert_eq!(m.object().len(), 1);
}

#[test]
fn span_matching_is_product_on_discrete_coslice() {
    let inv = corpus::span_inverse();
    let index = corpus::span_category();
    let mut sets = BTreeMap::new();
    sets.insert("0".to_string(), FinSetObj::from_tags(&["a", "b"]));
    sets.insert("1".to_string(), FinSetObj::from_tags(&["u", "v", "w"]));
    sets.insert("2".to_string(), FinSetObj::from_tags(&["z"]));
    let mut maps = BTreeMap::new();
    for m in index.morphisms() {
        let (s, t) = (sets[&m.src].clone(), sets[&m.tgt].clone());
        let table = if index.is_identity(&m.id) {
            s.elements()
                .iter()
                .map(|e| (e.clone(), e.clone()))
                .collect()
        } else {
            s.elements()
                .iter()
                .map(|e| (e.clone(), t.elements()[0].clone()))
                .collect()
        };
        maps.insert(m.id.clone(), FinSetMap::new(s, t, table).unwrap());
    }
    let x = Diagram::new(index, sets, maps).unwrap();
    let m = matching_object(&inv, &x, "2", CAP).unwrap();
    assert_eq!(m.object().len(), 6);
}

#[test]
fn coskeleton_of_horn_skeleton_is_full_simplex() {
    // cosk_2 of the edge skeleton has component sizes (4, 6, 4)
    let inv2 = corpus::semi_simplex_inverse(2);
    let horn = corpus::horn_3_2();
    let below = truncate_structure(&inv2, 2, true).unwrap();
    let incl = FinFunctor::inclusion(&below.category, &corpus::semi_simplex_category(3));
    let skeleton = restrict_diagram(&horn, &incl).unwrap();
    let cosk = coskeleton(&inv2, &skeleton, 2, CAP).unwrap();
    let sizes = component_sizes(&cosk);
    assert_eq!(sizes["[0]"], 4);
    assert_eq!(sizes["[1]"], 6);
    assert_eq!(sizes["[2]"], 4);
}

#[test]
fn span_coskeleton_fills_product() {
    // cosk_1 over the span of (X0, X1) has X2-component |X0|·|X1|
    let inv = corpus::span_inverse();
    let below = truncate_structure(&inv, 1, true).unwrap();
    let mut sets = BTreeMap::new();
    sets.insert("0".to_string(), FinSetObj::from_tags(&["a", "b"]));
    sets.insert("1".to_string(), FinSetObj::from_tags(&["u", "v", "w"]));
    let maps: BTreeMap<String, FinSetMap> = below
        .category
        .morphisms()
        .iter()
        .map(|m| (m.id.clone(), FinSetMap::identity(&sets[&m.src])))
        .collect();
    let x_below = Diagram::new(below.category.clone(), sets, maps).unwrap();
    let cosk = coskeleton(&inv, &x_below, 1, CAP).unwrap();
    assert_eq!(cosk.sets["2"].len(), 6);
}

#[test]
fn omega_inverse_sizes_on_worked_examples() {
    let arrow = corpus::walking_arrow_inverse();
    let cls = omega_inverse(&arrow, CAP).unwrap();
    assert_eq!(cls.omega.sets["a"].len(), 3);
    assert_eq!(cls.omega.sets["b"].len(), 2);

    let span = corpus::span_inverse();
    let cls = omega_inverse(&span, CAP).unwrap();
    assert_eq!(cls.omega.sets["0"].len(), 2);
    assert_eq!(cls.omega.sets["1"].len(), 2);
    assert_eq!(cls.omega.sets["2"].len(), 5);

    let faces1 = corpus::semi_simplex_inverse(1);
    let cls = omega_inverse(&faces1, CAP).unwrap();
    assert_eq!(cls.omega.sets["[0]"].len(), 2);
    assert_eq!(cls.omega.sets["[1]"].len(), 5);

    // discrete: constant 2
    let disc = corpus::discrete_category(&["x", "y"]);
    let deg = disc.objects().iter().map(|o| (o.clone(), 0u32)).collect();
    let inv = glutop_core::fincat::InverseStructure::new(disc, deg).unwrap();
    let cls = omega_inverse(&inv, CAP).unwrap();
    assert!(cls.omega.sets.values().all(|s| s.len() == 2));
}

#[test]
fn omega_inverse_matches_cosieve_oracle() {
    for inv in [
        corpus::walking_arrow_inverse(),
        corpus::span_inverse(),
        corpus::semi_simplex_inverse(1),
        corpus::semi_simplex_inverse(2),
        corpus::iso_pair_inverse(),
    ] {
        let built = omega_inverse(&inv, CAP).unwrap();
        let oracle = omega_oracle(&inv.category, CAP).unwrap();
        let iso = classifier_mutual_iso(&inv, &built, &oracle, CAP).unwrap();
        assert!(iso.is_iso());
    }
    // the small cases also admit an enumerated truth-compatible iso
    let inv = corpus::span_inverse();
    let built = omega_inverse(&inv, CAP).unwrap();
    let oracle = omega_oracle(&inv.category, CAP).unwrap();
    assert!(classifier_iso(&built, &oracle, CAP).unwrap().is_some());
}

#[test]
fn omega_inverse_classifies_uniquely() {
    let inv = corpus::span_inverse();
    let cls = omega_inverse(&inv, CAP).unwrap();
    let x = corpus::counterexample_x();
    let monos: Vec<NatTrans> = (0..6).map(|s| gen_mono_into(s, &x, CAP).unwrap()).collect();
    verify_classifier(&inv.category, &cls, &monos, CAP).unwrap();
}

#[test]
fn char_inverse_recovers_the_horn_inclusion() {
    let inv = corpus::semi_simplex_inverse(3);
    let horn = corpus::horn_3_2();
    let simplex = corpus::simplex_3();
    let components = simplex
        .index
        .objects()
        .iter()
        .map(|o| {
            let table = horn.sets[o]
                .elements()
                .iter()
                .map(|e| (e.clone(), e.clone()))
                .collect();
            (
                o.clone(),
                FinSetMap::new(horn.sets[o].clone(), simplex.sets[o].clone(), table).unwrap(),
            )
        })
        .collect();
    let mono = NatTrans::new(horn.clone(), simplex.clone(), components).unwrap();
    assert!(mono.is_mono());
    let chi = char_inverse(&inv, &mono, CAP).unwrap();
    // pullback of truth along chi recovers the horn componentwise
    let cls = omega_inverse(&inv, CAP).unwrap();
    let handle = DiagCat::inverse(inv.clone());
    let pb = handle.pullback(&cls.truth, &chi).unwrap();
    for o in simplex.index.objects() {
        let picked: Vec<&str> = pb.apex.sets[o]
            .elements()
            .iter()
            .map(|e| pb.right.component(o).unwrap().apply(e).unwrap())
            .collect();
        let expected: Vec<&str> = horn.sets[o].elements().iter().map(|s| s.as_str()).collect();
        assert_eq!(picked, expected, "at object {o}");
    }
}

#[test]
fn char_inverse_identity_mono_is_constant_true() {
    let inv = corpus::span_inverse();
    let x = corpus::counterexample_x();
    let mono = NatTrans::identity(&x);
    let chi = char_inverse(&inv, &mono, CAP).unwrap();
    let cls = omega_inverse(&inv, CAP).unwrap();
    for o in inv.category.objects() {
        let t = cls.truth.component(o).unwrap().apply("*").unwrap();
        assert!(chi.component(o).unwrap().table().values().all(|v| v == t));
    }
}

#[test]
fn char_inverse_of_empty_subobject_matches_enumeration() {
    let inv = corpus::span_inverse();
    let x = corpus::counterexample_x();
    let empty_sets: BTreeMap<String, FinSetObj> = inv
        .category
        .objects()
        .iter()
        .map(|o| (o.clone(), FinSetObj::initial()))
        .collect();
    let empty_maps: BTreeMap<String, FinSetMap> = inv
        .category
        .morphisms()
        .iter()
        .map(|m| {
            (
                m.id.clone(),
                FinSetMap::new(FinSetObj::initial(), FinSetObj::initial(), BTreeMap::new())
                    .unwrap(),
            )
        })
        .collect();
    let empty = Diagram::new(inv.category.clone(), empty_sets, empty_maps).unwrap();
    let mono = NatTrans::new(
        empty,
        x.clone(),
        inv.category
            .objects()
            .iter()
            .map(|o| {
                (
                    o.clone(),
                    FinSetMap::new(FinSetObj::initial(), x.sets[o].clone(), BTreeMap::new())
                        .unwrap(),
                )
            })
            .collect(),
    )
    .unwrap();
    let chi = char_inverse(&inv, &mono, CAP).unwrap();
    // uniqueness: the constructed map is the only classifier
    verify_classifier(
        &inv.category,
        &omega_inverse(&inv, CAP).unwrap(),
        &[mono],
        CAP,
    )
    .unwrap();
    // and it avoids the truth value everywhere
    let cls = omega_inverse(&inv, CAP).unwrap();
    for o in inv.category.objects() {
        let t = cls.truth.component(o).unwrap().apply("*").unwrap();
        assert!(chi.component(o).unwrap().table().values().all(|v| v != t));
    }
}

fn arrow_exponential_instance() -> (glutop_core::fincat::InverseStructure, NatTrans, NatTrans) {
    // X with sizes (1, 2) and Y with sizes (2, 1) over the walking arrow
    let inv = corpus::walking_arrow_inverse();
    let xa = FinSetObj::from_tags(&["x0"]);
    let xb = FinSetObj::from_tags(&["y0", "y1"]);
    let x = Diagram::new(
        inv.category.clone(),
        [("a".to_string(), xa.clone()), ("b".to_string(), xb.clone())]
            .into_iter()
            .collect(),
        [
            ("id_a".to_string(), FinSetMap::identity(&xa)),
            ("id_b".to_string(), FinSetMap::identity(&xb)),
            (
                "f".to_string(),
                FinSetMap::constant(&xa, &xb, "y0").unwrap(),
            ),
        ]
        .into_iter()
        .collect(),
    )
    .unwrap();
    let ya = FinSetObj::from_tags(&["p0", "p1"]);
    let yb = FinSetObj::from_tags(&["q0"]);
    let y = Diagram::new(
        inv.category.clone(),
        [("a".to_string(), ya.clone()), ("b".to_string(), yb.clone())]
            .into_iter()
            .collect(),
        [
            ("id_a".to_string(), FinSetMap::identity(&ya)),
            ("id_b".to_string(), FinSetMap::identity(&yb)),
            (
                "f".to_string(),
                FinSetMap::constant(&ya, &yb, "q0").unwrap(),
            ),
        ]
        .into_iter()
        .collect(),
    )
    .unwrap();
    let handle = DiagCat::inverse(inv.clone());
    let product = handle.product(&x, &y).unwrap();
    let f = handle.bang(&x);
    (inv, f, product.left)
}

#[test]
fn arrow_exponential_component_sizes() {
    let (inv, f, g) = arrow_exponential_instance();
    let pi = pi_inverse(&inv, &f, &g, CAP).unwrap();
    assert_eq!(pi.total.sets["a"].len(), 2);
    assert_eq!(pi.total.sets["b"].len(), 1);
    // agrees with the sections oracle
    let oracle = pi_oracle_sections(&inv.category, &f, &g, CAP).unwrap();
    assert!(natural_iso_search(&pi.total, &oracle.total, CAP)
        .unwrap()
        .is_some());
}

#[test]
fn pi_inverse_identity_base_is_fibers() {
    // f pointwise identity: Π ≅ C
    let inv = corpus::span_inverse();
    let x = corpus::counterexample_x();
    let y = corpus::counterexample_y();
    let handle = DiagCat::inverse(inv.clone());
    let homs = glutop_core::diagcat::enumerate_nat_trans(&y, &x, CAP).unwrap();
    let g = homs[0].clone();
    let f = handle.identity(&x);
    let pi = pi_inverse(&inv, &f, &g, CAP).unwrap();
    assert!(natural_iso_search(&pi.total, &y, CAP).unwrap().is_some());
}

#[test]
fn pi_inverse_satisfies_adjunction_on_span() {
    let inv = corpus::span_inverse();
    let x = corpus::counterexample_x();
    let y = corpus::counterexample_y();
    let handle = DiagCat::inverse(inv.clone());
    let product = handle.product(&x, &y).unwrap();
    let f = handle.bang(&x);
    let g = product.left.clone();
    let pi = pi_inverse(&inv, &f, &g, CAP).unwrap();
    // test objects over the terminal diagram: the terminal and x itself
    let one = handle.terminal();
    let test_ds = vec![handle.identity(&one), handle.bang(&x), handle.bang(&y)];
    verify_dependent_product(&inv.category, &pi, &test_ds, CAP).unwrap();
    // and the explicit transposes round-trip
    let d = handle.bang(&y);
    let ups: Vec<NatTrans> = glutop_core::diagcat::enumerate_nat_trans(&y, &pi.total, CAP)
        .unwrap()
        .into_iter()
        .filter(|u| pi.projection.compose(u).unwrap() == d)
        .collect();
    assert!(!ups.is_empty());
    for u in &ups {
        let flat = handle.pi_flat(&pi, &d, u).unwrap();
        let back = sharp_inverse(&inv, &pi, &d, &flat, CAP).unwrap();
        assert_eq!(&back, u);
    }
}

#[test]
fn pi_inverse_matches_oracle_on_iso_pair_category() {
    // non-discrete stratum: transport along the degree-1 isomorphism
    let inv = corpus::iso_pair_inverse();
    let (f, g) = glutop_core::oracle::gen_pi_instance(11, &inv, 2, CAP).unwrap();
    let pi = pi_inverse(&inv, &f, &g, CAP).unwrap();
    let oracle = pi_oracle_sections(&inv.category, &f, &g, CAP).unwrap();
    assert!(natural_iso_search(&pi.total, &oracle.total, CAP)
        .unwrap()
        .is_some());
}

#[test]
fn restriction_compat_omega_and_pi() {
    for inv in [
        corpus::span_inverse(),
        corpus::semi_simplex_inverse(2),
        corpus::iso_pair_inverse(),
    ] {
        let cls = omega_inverse(&inv, CAP).unwrap();
        verify_restriction_compat(&inv, InverseResult::Omega(&cls), CAP).unwrap();
    }
    let (inv, f, g) = arrow_exponential_instance();
    let pi = pi_inverse(&inv, &f, &g, CAP).unwrap();
    verify_restriction_compat(&inv, InverseResult::Pi(&pi), CAP).unwrap();
}

#[test]
fn glue_equivalence_round_trips() {
    let inv = corpus::semi_simplex_inverse(2);
    let eq = glue_equivalence(&inv, 2, CAP).unwrap();
    let horn = corpus::horn_3_2();
    let incl = FinFunctor::inclusion(
        &glutop_core::fincat::truncation(&inv, 2, false).unwrap(),
        &corpus::semi_simplex_category(3),
    );
    let horn2 = restrict_diagram(&horn, &incl).unwrap();
    let glued = eq.to_glued(&horn2).unwrap();
    let back = eq.from_glued(&glued).unwrap();
    assert_eq!(back, horn2);

    // constant diagram round trip
    let c = Diagram::constant(
        &glutop_core::fincat::truncation(&inv, 2, false).unwrap(),
        &FinSetObj::from_tags(&["t0", "t1"]),
    );
    let glued = eq.to_glued(&c).unwrap();
    assert_eq!(eq.from_glued(&glued).unwrap(), c);
}

#[test]
fn glue_extension_by_empty_boundary() {
    // backward of an empty boundary component extends by empty sets
    let inv = corpus::span_inverse();
    let eq = glue_equivalence(&inv, 1, CAP).unwrap();
    let below = truncate_structure(&inv, 1, true).unwrap();
    let shadow = Diagram::constant(&below.category, &FinSetObj::from_tags(&["s"]));
    let m_shadow = {
        use glutop_core::gluing::LexFunctor;
        eq.functor.on_obj(&shadow).unwrap()
    };
    let stratum_cat = glutop_core::fincat::stratum(&inv, 1).unwrap();
    let apex = Diagram::constant(&stratum_cat, &FinSetObj::initial());
    let structure = NatTrans::new(
        apex.clone(),
        m_shadow.clone(),
        [(
            "2".to_string(),
            FinSetMap::new(
                FinSetObj::initial(),
                m_shadow.sets["2"].clone(),
                BTreeMap::new(),
            )
            .unwrap(),
        )]
        .into_iter()
        .collect(),
    )
    .unwrap();
    let glued = glutop_core::gluing::GlObj {
        apex,
        shadow,
        structure,
    };
    let x = eq.from_glued(&glued).unwrap();
    assert!(x.sets["2"].is_empty());
    assert_eq!(x.sets["0"].len(), 1);
}

#[test]
fn deep_truncation_decomposition_and_classifier() {
    // four strata: decomposition certificate and classifier agreement on
    // the dimension-3 truncation
    let inv = corpus::semi_simplex_inverse(3);
    let dec = glutop_core::fincat::strata_decomposition(&inv).unwrap();
    assert_eq!(dec.layers.len(), 4);
    let built = omega_inverse(&inv, CAP).unwrap();
    verify_restriction_compat(&inv, InverseResult::Omega(&built), CAP).unwrap();
    let oracle = omega_oracle(&inv.category, CAP).unwrap();
    assert!(classifier_mutual_iso(&inv, &built, &oracle, CAP)
        .unwrap()
        .is_iso());
}
