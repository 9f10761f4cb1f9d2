//! Properties of the localization layer over seeded random instances:
//! soundness of the saturation output, the matching-comparison
//! factorization, κ bijectivity where initiality holds, and oracle
//! agreement for the homotopical product.

use std::collections::BTreeSet;

use glutop_core::diagcat::{DiagCat, Diagram};
use glutop_core::homotopy::{
    bounded_localization, check_all_epi, check_initiality, matching_comparison, pi_comparison,
    pi_homotopical, validate_weq, LocalizationData, WeqPolicy,
};
use glutop_core::logicat::{FinSetObj, LogicalCategory};
use glutop_core::oracle::{gen_diagram, gen_inverse_category, natural_iso_search, pi_oracle_sections};
use glutop_core::rng::SplitMix64;
use glutop_core::{DEFAULT_HOMSET_CAP, DEFAULT_WORD_CAP};

const CAP: usize = 1_000_000;

/// Seeded random localizations: a generated inverse category with a random
/// two-of-three-valid class of weak equivalences whose saturation fits the
/// default budgets.
fn random_localizations(seed: u64, want: usize) -> Vec<LocalizationData> {
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < want && attempts < 400 {
        attempts += 1;
        let Ok(inv) = gen_inverse_category(rng.next_u64(), 3, 2, 2) else {
            continue;
        };
        let mut weq: BTreeSet<String> = inv.category.identities().values().cloned().collect();
        for m in inv.category.morphisms() {
            if !inv.category.is_identity(&m.id) && rng.chance(1, 3) {
                weq.insert(m.id.clone());
            }
        }
        if !validate_weq(&inv.category, &weq, WeqPolicy::TwoOfThree).is_clean() {
            continue;
        }
        let Ok(loc) = bounded_localization(&inv, &weq, DEFAULT_WORD_CAP, DEFAULT_HOMSET_CAP)
        else {
            continue;
        };
        out.push(loc);
    }
    out
}

/// A seeded weak-equivalence-inverting diagram on the base, lifted.
fn random_homotopical_diagram(loc: &LocalizationData, seed: u64) -> Option<Diagram> {
    let mut rng = SplitMix64::new(seed);
    for _ in 0..30 {
        let Ok(d) = gen_diagram(rng.next_u64(), &loc.base, 2) else {
            continue;
        };
        if let Ok(lifted) = loc.lift(&d) {
            return Some(lifted);
        }
    }
    None
}

#[test]
fn localization_soundness_over_random_instances() {
    let locs = random_localizations(31, 12);
    assert!(locs.len() >= 6, "too few localizations generated");
    for loc in &locs {
        // every weak equivalence becomes invertible
        for w in &loc.weq {
            let gw = loc.gamma.on_morphism(w).unwrap();
            assert!(loc.target.is_iso(gw));
        }
        // every localized morphism is certified by its zigzag word: the
        // word evaluates back to the morphism through γ and inversion
        for m in loc.target.morphisms() {
            let word = &loc.words[&m.id];
            let mut acc = loc.target.identity_of(&m.src).unwrap().to_string();
            for letter in word {
                let step = match letter {
                    glutop_core::homotopy::ZigzagLetter::Fwd(f) => {
                        loc.gamma.on_morphism(f).unwrap().to_string()
                    }
                    glutop_core::homotopy::ZigzagLetter::Inv(w) => {
                        let gw = loc.gamma.on_morphism(w).unwrap();
                        loc.target.inverse_of(gw).unwrap().to_string()
                    }
                };
                acc = loc.target.compose(&step, &acc).unwrap().to_string();
            }
            assert_eq!(acc, m.id, "word does not evaluate to the morphism");
        }
        assert!(glutop_core::fincat::validate_category(&loc.target).is_clean());
    }
}

#[test]
fn kappa_is_bijective_where_initiality_holds() {
    let locs = random_localizations(57, 12);
    let mut objects_checked = 0;
    for (k, loc) in locs.iter().enumerate() {
        let initial = check_initiality(loc).unwrap();
        let Some(x) = random_homotopical_diagram(loc, 1000 + k as u64) else {
            continue;
        };
        for i in loc.base.category.objects() {
            if !initial.holds_at(i) {
                continue;
            }
            let kappa = matching_comparison(loc, &x, i, CAP).unwrap();
            assert!(kappa.is_bijective(), "κ not bijective at `{i}` despite initiality");
            objects_checked += 1;
        }
    }
    assert!(objects_checked > 0, "no initial objects reached");
}

#[test]
fn homotopical_product_agrees_with_oracle_on_random_instances() {
    let locs = random_localizations(73, 10);
    let mut instances = 0;
    for (k, loc) in locs.iter().enumerate() {
        if !check_all_epi(&loc.target).is_clean() {
            continue;
        }
        let Some(x) = random_homotopical_diagram(loc, 2000 + k as u64) else {
            continue;
        };
        let Some(y) = random_homotopical_diagram(loc, 3000 + k as u64) else {
            continue;
        };
        let handle = DiagCat::bare(loc.target.clone());
        let product = handle.product(&x, &y).unwrap();
        let f = handle.bang(&x);
        let ho = match pi_homotopical(loc, &f, &product.left, CAP) {
            Ok(p) => p,
            Err(glutop_core::Error::ExplosionLimit { .. }) => continue,
            Err(e) => panic!("instance {k}: {e}"),
        };
        let oracle = match pi_oracle_sections(&loc.target, &f, &product.left, CAP) {
            Ok(p) => p,
            Err(glutop_core::Error::ExplosionLimit { .. }) => continue,
            Err(e) => panic!("instance {k}: {e}"),
        };
        assert!(
            natural_iso_search(&ho.total, &oracle.total, CAP).unwrap().is_some(),
            "instance {k}: homotopical product disagrees with the oracle"
        );
        instances += 1;
    }
    assert!(instances >= 3, "too few instances exercised ({instances})");
}

#[test]
fn phi_is_bijective_when_both_assumptions_hold() {
    // epi + initiality everywhere force φ to be an isomorphism; trivial
    // localizations always qualify, found nontrivial ones must too
    let mut qualifying = 0;
    for loc in random_localizations(91, 12) {
        if !check_all_epi(&loc.target).is_clean() {
            continue;
        }
        if !check_initiality(&loc).unwrap().holds_everywhere() {
            continue;
        }
        let Some(x) = random_homotopical_diagram(&loc, 4000) else {
            continue;
        };
        let constant = loc
            .lift(&Diagram::constant(
                &loc.base.category,
                &FinSetObj::from_tags(&["k0", "k1"]),
            ))
            .unwrap();
        let handle = DiagCat::bare(loc.target.clone());
        let product = handle.product(&x, &constant).unwrap();
        let bundle = match pi_comparison(&loc, &handle.bang(&x), &product.left, CAP) {
            Ok(b) => b,
            Err(glutop_core::Error::ExplosionLimit { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        assert!(
            bundle.per_object.values().all(|o| o.phi_bijective),
            "φ not bijective under both assumptions"
        );
        qualifying += 1;
    }
    assert!(qualifying > 0, "no qualifying localizations generated");
}
