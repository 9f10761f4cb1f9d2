//! Command implementations. Each returns the canonical JSON value it would
//! print; the binary handles formatting and exit codes.

use std::path::Path;

use serde_json::{json, Value};

use glutop_core::diagcat::{DiagCat, NatTrans};
use glutop_core::gluing::{gl_omega, IdFunctor, LimitFunctor};
use glutop_core::homotopy::{
    bounded_localization, check_all_epi, check_initiality, pi_comparison, LocalizationData,
};
use glutop_core::logicat::{finset_handle, LogicalCategory};
use glutop_core::matching::{char_inverse, coskeleton, matching_object, omega_inverse, pi_inverse};
use glutop_core::oracle::{
    classifier_mutual_iso, gen_mono_into, natural_iso_search, omega_oracle, pi_oracle_sections,
    verify_classifier, verify_dependent_product,
};

use crate::schema::{
    diagram_json, finset_json, finsetmap_json, load_category, nat_json, CategoryFile,
    LocalizationFile, NatTransFile,
};
use crate::{CliError, CliResult, RunConfig};

fn read_nat(path: &Path) -> CliResult<NatTrans> {
    let file: NatTransFile = serde_json::from_str(
        &std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?,
    )
    .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    file.build(path)
}

/// Runs every applicable validator over the given files; the report lists
/// one entry per file.
pub fn cmd_validate(paths: &[std::path::PathBuf]) -> CliResult<(Value, bool)> {
    let mut entries = Vec::new();
    let mut clean = true;
    for path in paths {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        let problems: Vec<String> = if let Ok(cat) = serde_json::from_str::<CategoryFile>(&text) {
            cat.validate()?
        } else if let Ok(diag) = serde_json::from_str::<crate::schema::DiagramFile>(&text) {
            diag.validate(path)?
        } else if let Ok(nat) = serde_json::from_str::<NatTransFile>(&text) {
            nat.validate(path)?
        } else {
            return Err(CliError::Parse(format!(
                "{}: not a category, diagram, or transformation file",
                path.display()
            )));
        };
        clean = clean && problems.is_empty();
        entries.push(json!({
            "file": path.display().to_string(),
            "violations": problems,
        }));
    }
    Ok((Value::Array(entries), clean))
}

/// The classifier of the file's diagram category: degreewise by default,
/// the cosieve oracle with `--oracle`, cross-verified with `--check`.
pub fn cmd_omega(path: &Path, use_oracle: bool, check: bool, cfg: &RunConfig) -> CliResult<Value> {
    let file = load_category(path)?;
    let cat = file.build()?;
    let cls = if use_oracle {
        omega_oracle(&cat, cfg.candidate_cap)?
    } else {
        omega_inverse(&file.build_inverse()?, cfg.candidate_cap)?
    };
    let mut out = json!({
        "omega": diagram_json(&cls.omega),
        "truth": nat_json(&cls.truth),
        "sizes": cls.omega.sets.iter().map(|(o, s)| (o.clone(), s.len())).collect::<std::collections::BTreeMap<_, _>>(),
    });
    if check {
        let inv = file.build_inverse()?;
        let built = omega_inverse(&inv, cfg.candidate_cap)?;
        let oracle = omega_oracle(&cat, cfg.candidate_cap)?;
        let iso = classifier_mutual_iso(&inv, &built, &oracle, cfg.candidate_cap)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        out["iso"] = nat_json(&iso);
    }
    Ok(out)
}

/// The dependent product of `g: C -> B` along `f: B -> A`.
pub fn cmd_pi(
    category: &Path,
    f_path: &Path,
    g_path: &Path,
    use_oracle: bool,
    check: bool,
    cfg: &RunConfig,
) -> CliResult<Value> {
    let file = load_category(category)?;
    let cat = file.build()?;
    let f = read_nat(f_path)?;
    let g = read_nat(g_path)?;
    if f.src.index != cat || g.tgt != f.src {
        return Err(CliError::Validation(
            "transformations do not form a bundle over the category".into(),
        ));
    }
    let pi = if use_oracle {
        pi_oracle_sections(&cat, &f, &g, cfg.candidate_cap)?
    } else {
        pi_inverse(&file.build_inverse()?, &f, &g, cfg.candidate_cap)?
    };
    let mut out = json!({
        "total": diagram_json(&pi.total),
        "projection": nat_json(&pi.projection),
        "counit": nat_json(&pi.counit),
        "sizes": pi.total.sets.iter().map(|(o, s)| (o.clone(), s.len())).collect::<std::collections::BTreeMap<_, _>>(),
    });
    if check {
        let other = if use_oracle {
            pi_inverse(&file.build_inverse()?, &f, &g, cfg.candidate_cap)?
        } else {
            pi_oracle_sections(&cat, &f, &g, cfg.candidate_cap)?
        };
        let iso = natural_iso_search(&pi.total, &other.total, cfg.candidate_cap)?
            .ok_or_else(|| CliError::Validation("construction disagrees with the oracle".into()))?;
        let handle = DiagCat::bare(cat.clone());
        verify_dependent_product(&cat, &pi, &[handle.identity(&f.tgt)], cfg.candidate_cap)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        out["iso"] = nat_json(&iso);
        out["adjunction"] = json!("clean");
    }
    Ok(out)
}

/// The characteristic map of a pointwise mono.
pub fn cmd_char(category: &Path, mono_path: &Path, cfg: &RunConfig) -> CliResult<Value> {
    let file = load_category(category)?;
    let inv = file.build_inverse()?;
    let mono = read_nat(mono_path)?;
    let chi = char_inverse(&inv, &mono, cfg.candidate_cap)?;
    Ok(json!({ "char": nat_json(&chi) }))
}

/// The matching object of a diagram at one index object, with its legs.
pub fn cmd_matching(
    category: &Path,
    diagram: &Path,
    object: &str,
    cfg: &RunConfig,
) -> CliResult<Value> {
    let file = load_category(category)?;
    let inv = file.build_inverse()?;
    let dfile: crate::schema::DiagramFile = serde_json::from_str(
        &std::fs::read_to_string(diagram)
            .map_err(|e| CliError::Parse(format!("{}: {e}", diagram.display())))?,
    )
    .map_err(|e| CliError::Parse(e.to_string()))?;
    let d = dfile.build(diagram)?;
    let m = matching_object(&inv, &d, object, cfg.candidate_cap)?;
    Ok(json!({
        "object": finset_json(m.object()),
        "legs": m.limit.legs.iter().map(|(f, t)| (f.clone(), finsetmap_json(t))).collect::<std::collections::BTreeMap<_, _>>(),
        "matching_map": m.matching_map.as_ref().map(finsetmap_json),
    }))
}

/// Extends a diagram on the strict truncation by matching objects.
pub fn cmd_cosk(category: &Path, diagram: &Path, n: u32, cfg: &RunConfig) -> CliResult<Value> {
    let file = load_category(category)?;
    let inv = file.build_inverse()?;
    let dfile: crate::schema::DiagramFile = serde_json::from_str(
        &std::fs::read_to_string(diagram)
            .map_err(|e| CliError::Parse(format!("{}: {e}", diagram.display())))?,
    )
    .map_err(|e| CliError::Parse(e.to_string()))?;
    let d = dfile.build(diagram)?;
    let cosk = coskeleton(&inv, &d, n, cfg.candidate_cap)?;
    Ok(json!({
        "coskeleton": diagram_json(&cosk),
        "sizes": cosk.sets.iter().map(|(o, s)| (o.clone(), s.len())).collect::<std::collections::BTreeMap<_, _>>(),
    }))
}

/// The two demo gluings: the identity functor on finite sets and the limit
/// functor over the discrete two-object category.
pub fn cmd_glue_demo(functor: &str, cfg: &RunConfig) -> CliResult<Value> {
    match functor {
        "identity" => {
            let f = IdFunctor::new(finset_handle());
            let (omega, _truth) = gl_omega(&f, cfg.candidate_cap)?;
            Ok(json!({
                "functor": "identity",
                "omega_apex": finset_json(&omega.apex),
                "omega_shadow": finset_json(&omega.shadow),
                "apex_size": omega.apex.len(),
            }))
        }
        "limit2" => {
            let f = LimitFunctor::new(
                glutop_core::corpus::discrete_category(&["1", "2"]),
                cfg.candidate_cap,
            );
            let (omega, _truth) = gl_omega(&f, cfg.candidate_cap)?;
            Ok(json!({
                "functor": "limit2",
                "omega_apex": finset_json(&omega.apex),
                "apex_size": omega.apex.len(),
            }))
        }
        other => Err(CliError::Parse(format!(
            "unknown demo functor `{other}` (expected identity or limit2)"
        ))),
    }
}

fn load_localization(path: &Path, cfg: &RunConfig) -> CliResult<LocalizationData> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    if let Ok(catfile) = serde_json::from_str::<CategoryFile>(&text) {
        let inv = catfile.build_inverse()?;
        let weq = catfile
            .weq_set()
            .ok_or_else(|| CliError::Parse("category file has no weak_equivalences".into()))?;
        return Ok(bounded_localization(
            &inv,
            &weq,
            cfg.word_cap,
            cfg.homset_cap,
        )?);
    }
    if let Ok(locfile) = serde_json::from_str::<LocalizationFile>(&text) {
        return locfile.build(path);
    }
    Err(CliError::Parse(format!(
        "{}: neither a category-with-weak-equivalences nor a localization file",
        path.display()
    )))
}

/// The per-object comparison verdict between the homotopical and ordinary
/// dependent products.
pub fn cmd_homotopy(
    loc_path: &Path,
    f_path: &Path,
    g_path: &Path,
    cfg: &RunConfig,
) -> CliResult<Value> {
    let loc = load_localization(loc_path, cfg)?;
    let f = read_nat(f_path)?;
    let g = read_nat(g_path)?;
    // transformations may be supplied on the base (weak-equivalence
    // inverting) or directly on the localization
    let (f, g) = if f.src.index == loc.base.category {
        (loc.lift_map(&f)?, loc.lift_map(&g)?)
    } else {
        (f, g)
    };
    let bundle = pi_comparison(&loc, &f, &g, cfg.candidate_cap)?;
    let verdict: Vec<Value> = bundle
        .per_object
        .iter()
        .map(|(o, cmp)| {
            json!({
                "object": o,
                "phi_bijective": cmp.phi_bijective,
                "kappa_bijective": cmp.kappa_bijective,
                "initiality": cmp.initial,
            })
        })
        .collect();
    Ok(json!({
        "all_epi": bundle.all_epi,
        "verdict": verdict,
    }))
}

/// Runs the bounded localization and emits the localized category, the
/// localization functor, and the zigzag words.
pub fn cmd_localize(path: &Path, cfg: &RunConfig) -> CliResult<Value> {
    let loc = load_localization(path, cfg)?;
    let epi = check_all_epi(&loc.target).is_clean();
    let initial = check_initiality(&loc)?;
    Ok(json!({
        "target": serde_json::to_value(CategoryFile::from_category(&loc.target))?,
        "gamma": {
            "object_map": loc.gamma.object_map,
            "morphism_map": loc.gamma.morphism_map,
        },
        "words": loc
            .words
            .iter()
            .map(|(m, w)| {
                (
                    m.clone(),
                    w.iter()
                        .map(|l| match l {
                            glutop_core::homotopy::ZigzagLetter::Fwd(f) => json!({"fwd": f}),
                            glutop_core::homotopy::ZigzagLetter::Inv(f) => json!({"inv": f}),
                        })
                        .collect::<Vec<_>>(),
                )
            })
            .collect::<std::collections::BTreeMap<_, _>>(),
        "all_epi": epi,
        "initiality": initial
            .per_object
            .iter()
            .map(|(o, v)| (o.clone(), v.holds))
            .collect::<std::collections::BTreeMap<_, _>>(),
    }))
}

/// Cross-verifies both classifier routes on sampled monos.
pub fn cmd_oracle_verify(path: &Path, monos: usize, cfg: &RunConfig) -> CliResult<Value> {
    let file = load_category(path)?;
    let inv = file.build_inverse()?;
    let built = omega_inverse(&inv, cfg.candidate_cap)?;
    let oracle = omega_oracle(&inv.category, cfg.candidate_cap)?;
    classifier_mutual_iso(&inv, &built, &oracle, cfg.candidate_cap)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let mut sampled = Vec::new();
    let mut k = 0u64;
    while sampled.len() < monos && k < 20 * monos as u64 + 20 {
        k += 1;
        if let Ok(d) = glutop_core::oracle::gen_diagram(cfg.seed.wrapping_add(k), &inv, 3) {
            if let Ok(m) = gen_mono_into(k, &d, cfg.candidate_cap) {
                sampled.push(m);
            }
        }
    }
    verify_classifier(&inv.category, &built, &sampled, cfg.candidate_cap)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    verify_classifier(&inv.category, &oracle, &sampled, cfg.candidate_cap)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(json!({
        "classifier_iso": "mutually-inverse characteristic maps",
        "monos_checked": sampled.len(),
    }))
}
