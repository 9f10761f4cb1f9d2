//! The acceptance suite as an integration-test target: one test per
//! criterion, each printing its pass/fail line. Every expected value and
//! time budget is pinned in the suite module; everything is exact.

use glutop_cli::suite;
use glutop_cli::RunConfig;

const CORPUS_COUNT: usize = 100;

fn run(name: &str, check: impl FnOnce(&RunConfig) -> Result<(), String>) {
    let cfg = RunConfig::default();
    let start = std::time::Instant::now();
    match check(&cfg) {
        Ok(()) => println!("PASS {name} ({:?})", start.elapsed()),
        Err(detail) => {
            println!("FAIL {name}: {detail} ({:?})", start.elapsed());
            panic!("criterion failed: {name}: {detail}");
        }
    }
}

#[test]
fn criterion_1_horn_matching_and_coskeleton() {
    run("criterion 1: horn matching and coskeleton", |cfg| {
        suite::criterion_horn_matching(cfg)
    });
}

#[test]
fn criterion_2_classifier_cross_validation() {
    run("criterion 2: classifier cross-validation", |cfg| {
        suite::criterion_classifier_cross_validation(cfg, CORPUS_COUNT)
    });
}

#[test]
fn criterion_3_product_cross_validation() {
    run("criterion 3: dependent-product cross-validation", |cfg| {
        suite::criterion_product_cross_validation(cfg, CORPUS_COUNT)
    });
}

#[test]
fn criterion_4_gluing_consistency() {
    run("criterion 4: gluing consistency", |cfg| {
        suite::criterion_gluing_consistency(cfg)
    });
}

#[test]
fn criterion_5_transpose_round_trips() {
    run("criterion 5: transpose round trips", |cfg| {
        suite::criterion_transpose_round_trips(cfg)
    });
}

#[test]
fn criterion_6_homotopical_counterexample() {
    run("criterion 6: homotopical counterexample", |cfg| {
        suite::criterion_homotopical_counterexample(cfg)
    });
}

#[test]
fn criterion_7_full_inversion_preservation() {
    run("criterion 7: full-inversion preservation", |cfg| {
        suite::criterion_full_inversion(cfg)
    });
}

#[test]
fn criterion_8_restriction_compatibility() {
    run("criterion 8: restriction compatibility", |cfg| {
        suite::criterion_restriction_compat(cfg)
    });
}

#[test]
fn criterion_9_localization_soundness() {
    run("criterion 9: localization soundness", |cfg| {
        suite::criterion_localization_soundness(cfg)
    });
}
