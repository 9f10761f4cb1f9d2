//! The glued classifier and dependent product: worked sizes, transpose
//! round trips, characteristic maps, and agreement with the degreewise
//! construction at the top stratum through the gluing equivalence.

use std::collections::BTreeMap;

use glutop_core::corpus;
use glutop_core::diagcat::{Diagram, NatTrans};
use glutop_core::fincat::truncate_structure;
use glutop_core::gluing::{
    gl_char, gl_flat, gl_handle, gl_omega, gl_pi, gl_sharp, GlObj, IdFunctor, LimitFunctor,
};
use glutop_core::logicat::{finset_handle, FinSetMap, FinSetObj, LogicalCategory};
use glutop_core::matching::{glue_equivalence, omega_inverse, pi_inverse};
use glutop_core::oracle::{gen_pi_instance, natural_iso_search, omega_oracle};

const CAP: usize = 1_000_000;

fn finset_map(src: &FinSetObj, tgt: &FinSetObj, pairs: &[(&str, &str)]) -> FinSetMap {
    FinSetMap::new(
        src.clone(),
        tgt.clone(),
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect(),
    )
    .unwrap()
}

#[test]
fn arrow_category_exponential_sizes() {
    // exponential of (X0 -> X1, sizes 1, 2) into (Y0 -> Y1, sizes 2, 1)
    // over Gl(id): component sizes (2, 1)
    let f = IdFunctor::new(finset_handle());
    let cat = gl_handle(IdFunctor::new(finset_handle()), CAP);
    let x0 = FinSetObj::from_tags(&["x"]);
    let x1 = FinSetObj::from_tags(&["u", "v"]);
    let xo = GlObj {
        apex: x0.clone(),
        shadow: x1.clone(),
        structure: finset_map(&x0, &x1, &[("x", "u")]),
    };
    let y0 = FinSetObj::from_tags(&["p", "q"]);
    let y1 = FinSetObj::from_tags(&["w"]);
    let yo = GlObj {
        apex: y0.clone(),
        shadow: y1.clone(),
        structure: finset_map(&y0, &y1, &[("p", "w"), ("q", "w")]),
    };
    // exponential = Π along X -> 1 of the projection X × Y -> X
    let one = cat.terminal();
    let bang = cat.bang(&xo);
    let product = cat.product(&xo, &yo).unwrap();
    let pi = gl_pi(&f, &bang, &product.left, CAP).unwrap();
    assert_eq!(pi.total.apex.len(), 2);
    assert_eq!(pi.total.shadow.len(), 1);
    let _ = one;
}

#[test]
fn gl_pi_with_iso_fiber_is_singleton() {
    // γ an isomorphism onto β: the sections object is fiberwise singleton
    let f = IdFunctor::new(finset_handle());
    let cat = gl_handle(IdFunctor::new(finset_handle()), CAP);
    let a0 = FinSetObj::from_tags(&["a0", "a1"]);
    let a1 = FinSetObj::from_tags(&["b"]);
    let alpha = GlObj {
        apex: a0.clone(),
        shadow: a1.clone(),
        structure: finset_map(&a0, &a1, &[("a0", "b"), ("a1", "b")]),
    };
    let p = cat.product(&alpha, &cat.terminal()).unwrap();
    let h_k = p.left.clone();
    let ident = cat.identity(&p.apex);
    let pi = gl_pi(&f, &h_k, &ident, CAP).unwrap();
    // one section per point of the base apex
    assert_eq!(pi.total.apex.len(), alpha.apex.len());
}

#[test]
fn gl_transposes_round_trip_exhaustively() {
    let f = IdFunctor::new(finset_handle());
    let cat = gl_handle(IdFunctor::new(finset_handle()), CAP);
    let x0 = FinSetObj::from_tags(&["x"]);
    let x1 = FinSetObj::from_tags(&["u", "v"]);
    let xo = GlObj {
        apex: x0.clone(),
        shadow: x1.clone(),
        structure: finset_map(&x0, &x1, &[("x", "u")]),
    };
    let y0 = FinSetObj::from_tags(&["p", "q"]);
    let y1 = FinSetObj::from_tags(&["w"]);
    let yo = GlObj {
        apex: y0.clone(),
        shadow: y1.clone(),
        structure: finset_map(&y0, &y1, &[("p", "w"), ("q", "w")]),
    };
    let bang = cat.bang(&xo);
    let product = cat.product(&xo, &yo).unwrap();
    let pi = gl_pi(&f, &bang, &product.left, CAP).unwrap();
    // δ over α = terminal: test objects are glued objects with a map to 1
    let delta = cat.product(&yo, &cat.terminal()).unwrap().apex;
    let d_over_a = cat.bang(&delta);
    let q = cat.pullback(&pi.f, &d_over_a).unwrap();
    let ups: Vec<_> = cat
        .hom(&delta, &pi.total, CAP)
        .unwrap()
        .into_iter()
        .filter(|u| cat.compose(&pi.projection, u).unwrap() == d_over_a)
        .collect();
    assert!(!ups.is_empty());
    for u in &ups {
        let flat = gl_flat(&f, &pi, &d_over_a, u, CAP).unwrap();
        // flat agrees with the generic pullback-then-counit transpose
        let generic = cat.pi_flat(&pi, &d_over_a, u).unwrap();
        assert_eq!(flat, generic);
        let back = gl_sharp(&f, &pi, &d_over_a, &flat, CAP).unwrap();
        assert_eq!(&back, u);
    }
    let downs: Vec<_> = cat
        .hom(&q.apex, &pi.g.src, CAP)
        .unwrap()
        .into_iter()
        .filter(|s| cat.compose(&pi.g, s).unwrap() == q.left)
        .collect();
    assert_eq!(downs.len(), ups.len());
    for s in &downs {
        let u = gl_sharp(&f, &pi, &d_over_a, s, CAP).unwrap();
        let back = gl_flat(&f, &pi, &d_over_a, &u, CAP).unwrap();
        assert_eq!(&back, s);
    }
    // flat of the identity on Π is the counit
    let id_pi = cat.identity(&pi.total);
    let flat_id = gl_flat(&f, &pi, &pi.projection, &id_pi, CAP).unwrap();
    assert_eq!(flat_id.apex_map, pi.counit.apex_map);
    assert_eq!(flat_id.shadow_map, pi.counit.shadow_map);
}

#[test]
fn gl_char_identity_mono_is_truth_composite() {
    let f = IdFunctor::new(finset_handle());
    let cat = gl_handle(IdFunctor::new(finset_handle()), CAP);
    let x0 = FinSetObj::from_tags(&["x"]);
    let x1 = FinSetObj::from_tags(&["u", "v"]);
    let xo = GlObj {
        apex: x0.clone(),
        shadow: x1.clone(),
        structure: finset_map(&x0, &x1, &[("x", "u")]),
    };
    let mono = cat.identity(&xo);
    let chi = gl_char(&f, &mono, CAP).unwrap();
    let (_, truth) = gl_omega(&f, CAP).unwrap();
    let via_truth = cat.compose(&truth, &cat.bang(&xo)).unwrap();
    assert_eq!(chi.apex_map, via_truth.apex_map);
    assert_eq!(chi.shadow_map, via_truth.shadow_map);
}

#[test]
fn gl_char_classifies_glued_horn_inclusion() {
    // the horn into the simplex at the gluing level n = 2
    let inv = corpus::semi_simplex_inverse(2);
    let eq = glue_equivalence(&inv, 2, CAP).unwrap();
    let ambient = corpus::semi_simplex_category(3);
    let trunc = glutop_core::fincat::truncation(&inv, 2, false).unwrap();
    let incl = glutop_core::fincat::FinFunctor::inclusion(&trunc, &ambient);
    let horn = glutop_core::diagcat::restrict_diagram(&corpus::horn_3_2(), &incl).unwrap();
    let simplex = glutop_core::diagcat::restrict_diagram(&corpus::simplex_3(), &incl).unwrap();
    let components: BTreeMap<String, FinSetMap> = trunc
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
    let glued_mono = eq.mor_to_glued(&mono).unwrap();
    let chi = gl_char(&eq.functor, &glued_mono, CAP).unwrap();
    // the truth pullback recovers the mono componentwise at the stratum
    let cat = gl_handle(glue_equivalence(&inv, 2, CAP).unwrap().functor, CAP);
    let cls = cat.omega(CAP).unwrap();
    let pb = cat.pullback(&cls.truth, &chi).unwrap();
    // apex side: the present 2-simplices
    let apex_picked: Vec<&str> = pb.apex.apex.sets["[2]"]
        .elements()
        .iter()
        .map(|e| {
            pb.right
                .apex_map
                .component("[2]")
                .unwrap()
                .apply(e)
                .unwrap()
        })
        .collect();
    assert_eq!(apex_picked, vec!["012", "023", "123"]);
}

#[test]
fn cone_classifier_matches_span_classifier_under_collage() {
    // gl_omega over limit-over-discrete-2 vs the span classifier
    let f = LimitFunctor::new(corpus::discrete_category(&["1", "2"]), CAP);
    let (omega_gl, truth_gl) = gl_omega(&f, CAP).unwrap();
    assert_eq!(omega_gl.apex.len(), 5);
    // translate to a span diagram: X2 = apex, X0/X1 = shadow components,
    // p/q = structure followed by the limit projections
    let span = corpus::span_inverse();
    let lim = glutop_core::logicat::limit(
        &corpus::discrete_category(&["1", "2"]),
        &omega_gl.shadow.sets,
        &omega_gl.shadow.maps,
        CAP,
    )
    .unwrap();
    let to_span = |g: &GlObj<FinSetObj, FinSetMap, Diagram>| -> Diagram {
        let mut sets = BTreeMap::new();
        sets.insert("2".to_string(), g.apex.clone());
        sets.insert("0".to_string(), g.shadow.sets["2"].clone());
        sets.insert("1".to_string(), g.shadow.sets["1"].clone());
        let mut maps = BTreeMap::new();
        maps.insert("id2".to_string(), FinSetMap::identity(&g.apex));
        maps.insert("id0".to_string(), FinSetMap::identity(&sets["0"]));
        maps.insert("id1".to_string(), FinSetMap::identity(&sets["1"]));
        maps.insert(
            "p".to_string(),
            lim.legs["2"].compose(&g.structure).unwrap(),
        );
        maps.insert(
            "q".to_string(),
            lim.legs["1"].compose(&g.structure).unwrap(),
        );
        Diagram::new(corpus::span_category(), sets, maps).unwrap()
    };
    let omega_translated = to_span(&omega_gl);
    let cls_span = omega_inverse(&span, CAP).unwrap();
    let iso = natural_iso_search(&omega_translated, &cls_span.omega, CAP)
        .unwrap()
        .expect("classifier iso under the collage equivalence");
    // truth-compatible
    for o in ["0", "1", "2"] {
        let truth_translated = match o {
            "2" => truth_gl.apex_map.apply("*").unwrap().to_string(),
            "0" => truth_gl
                .shadow_map
                .component("2")
                .unwrap()
                .apply("*")
                .unwrap()
                .to_string(),
            _ => truth_gl
                .shadow_map
                .component("1")
                .unwrap()
                .apply("*")
                .unwrap()
                .to_string(),
        };
        let lhs = iso.component(o).unwrap().apply(&truth_translated).unwrap();
        let rhs = cls_span.truth.component(o).unwrap().apply("*").unwrap();
        assert_eq!(lhs, rhs, "truth mismatch at {o}");
    }
    // the cosieve oracle agrees as well
    let oracle = omega_oracle(&span.category, CAP).unwrap();
    assert!(natural_iso_search(&omega_translated, &oracle.omega, CAP)
        .unwrap()
        .is_some());
}

#[test]
fn gl_pi_agrees_with_pi_inverse_at_top_stratum() {
    // random instances over the span: the glued product through Gl(M_1)
    // matches the degreewise product at the top stratum
    let inv = corpus::span_inverse();
    let mut checked = 0;
    for seed in 0..30u64 {
        let Ok((f, g)) = gen_pi_instance(seed, &inv, 2, CAP) else {
            continue;
        };
        if checked == 10 {
            break;
        }
        let pi = pi_inverse(&inv, &f, &g, CAP).unwrap();
        let eq = glue_equivalence(&inv, 1, CAP).unwrap();
        let h_k = eq.mor_to_glued(&f).unwrap();
        let f_h = eq.mor_to_glued(&g).unwrap();
        let glpi = gl_pi(&eq.functor, &h_k, &f_h, CAP).unwrap();
        // compare component sizes and exhibit an isomorphism at the stratum
        let top_built = &pi.total.sets["2"];
        let top_glued = &glpi.total.apex.sets["2"];
        assert_eq!(top_built.len(), top_glued.len(), "seed {seed}");
        // shadow part must be the restriction of the built product
        let below = truncate_structure(&inv, 1, true).unwrap();
        let incl = glutop_core::fincat::FinFunctor::inclusion(&below.category, &inv.category);
        let restricted = glutop_core::diagcat::restrict_diagram(&pi.total, &incl).unwrap();
        assert!(
            natural_iso_search(&restricted, &glpi.total.shadow, CAP)
                .unwrap()
                .is_some(),
            "seed {seed}"
        );
        checked += 1;
    }
    assert_eq!(checked, 10);
}

#[test]
fn glued_classifier_is_unique_among_enumerated_maps() {
    let f = IdFunctor::new(finset_handle());
    let cat = gl_handle(IdFunctor::new(finset_handle()), CAP);
    let cls = cat.omega(CAP).unwrap();
    // a small glued object with a proper subobject
    let g0 = FinSetObj::from_tags(&["g0", "g1"]);
    let g1 = FinSetObj::from_tags(&["h0", "h1"]);
    let big = GlObj {
        apex: g0.clone(),
        shadow: g1.clone(),
        structure: finset_map(&g0, &g1, &[("g0", "h0"), ("g1", "h1")]),
    };
    let s0 = FinSetObj::from_tags(&["g0"]);
    let s1 = FinSetObj::from_tags(&["h0"]);
    let small = GlObj {
        apex: s0.clone(),
        shadow: s1.clone(),
        structure: finset_map(&s0, &s1, &[("g0", "h0")]),
    };
    let mono = cat
        .mor(
            small.clone(),
            big.clone(),
            finset_map(&s0, &g0, &[("g0", "g0")]),
            finset_map(&s1, &g1, &[("h0", "h0")]),
        )
        .unwrap();
    assert!(cat.is_mono(&mono));
    let truth_point = (
        cls.truth.apex_map.apply("*").unwrap().to_string(),
        cls.truth.shadow_map.apply("*").unwrap().to_string(),
    );
    let mut classifying = Vec::new();
    for chi in cat.hom(&big, &cls.omega, CAP).unwrap() {
        // truth pullback picks the elements sent to the truth point
        let apex_picked: Vec<&String> = g0
            .elements()
            .iter()
            .filter(|e| chi.apex_map.apply(e).unwrap() == truth_point.0)
            .collect();
        let shadow_picked: Vec<&String> = g1
            .elements()
            .iter()
            .filter(|e| chi.shadow_map.apply(e).unwrap() == truth_point.1)
            .collect();
        if apex_picked == vec!["g0"] && shadow_picked == vec!["h0"] {
            classifying.push(chi);
        }
    }
    assert_eq!(classifying.len(), 1);
    assert_eq!(classifying[0], gl_char(&f, &mono, CAP).unwrap());
}

#[test]
fn glued_classifier_matches_degreewise_one_at_top_stratum() {
    let inv = corpus::span_inverse();
    let eq = glue_equivalence(&inv, 1, CAP).unwrap();
    let cat = gl_handle(glue_equivalence(&inv, 1, CAP).unwrap().functor, CAP);
    let cls_gl = cat.omega(CAP).unwrap();
    let rebuilt = eq.from_glued(&cls_gl.omega).unwrap();
    let cls_inv = omega_inverse(&inv, CAP).unwrap();
    assert_eq!(
        rebuilt.sets["2"].len(),
        cls_inv.omega.sets["2"].len(),
        "top-stratum classifier sizes differ"
    );
    assert!(natural_iso_search(&rebuilt, &cls_inv.omega, CAP)
        .unwrap()
        .is_some());
}
