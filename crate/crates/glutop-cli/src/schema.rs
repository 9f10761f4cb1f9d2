//! JSON file formats and their conversions into the core types. Unknown
//! keys are rejected; paths inside files resolve relative to the referencing
//! file.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use glutop_core::diagcat::{validate_diagram_tables, Diagram, NatTrans};
use glutop_core::fincat::{
    validate_category, validate_inverse_structure, FinCategory, FinFunctor, InverseStructure,
    MorInfo,
};
use glutop_core::homotopy::{validate_weq, WeqPolicy};
use glutop_core::logicat::{FinSetMap, FinSetObj};

use crate::{CliError, CliResult};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismEntry {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismEntry>,
    pub identities: BTreeMap<String, String>,
    pub composition: Vec<(String, String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degrees: Option<BTreeMap<String, u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weak_equivalences: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CategoryRef {
    Path(String),
    Inline(Box<CategoryFile>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub category: CategoryRef,
    pub sets: BTreeMap<String, Vec<String>>,
    pub maps: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DiagramRef {
    Path(String),
    Inline(Box<DiagramFile>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NatTransFile {
    pub src: DiagramRef,
    pub tgt: DiagramRef,
    pub components: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorFile {
    pub object_map: BTreeMap<String, String>,
    pub morphism_map: BTreeMap<String, String>,
}

/// An explicit localization: the base category (with degrees and weak
/// equivalences), the target, and the functor onto it.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalizationFile {
    pub base: CategoryRef,
    pub target: CategoryFile,
    pub gamma: FunctorFile,
}

impl LocalizationFile {
    pub fn build(&self, path: &Path) -> CliResult<glutop_core::homotopy::LocalizationData> {
        let base_file = self.base.load(path)?;
        let inv = base_file.build_inverse()?;
        let weq = base_file
            .weq_set()
            .ok_or_else(|| CliError::Parse("base category has no weak_equivalences".into()))?;
        let target = self.target.build()?;
        let gamma = self.gamma.build(&inv.category, &target)?;
        glutop_core::homotopy::localization_from_parts(inv, weq, target, gamma)
            .map_err(|e| CliError::Validation(e.to_string()))
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn resolve(base: &Path, rel: &str) -> PathBuf {
    let p = Path::new(rel);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.parent().unwrap_or(Path::new(".")).join(p)
    }
}

impl CategoryFile {
    pub fn from_category(cat: &FinCategory) -> CategoryFile {
        CategoryFile {
            objects: cat.objects().to_vec(),
            morphisms: cat
                .morphisms()
                .iter()
                .map(|m| MorphismEntry {
                    id: m.id.clone(),
                    src: m.src.clone(),
                    tgt: m.tgt.clone(),
                })
                .collect(),
            identities: cat.identities().clone(),
            composition: cat
                .composition()
                .iter()
                .map(|((g, f), gf)| (g.clone(), f.clone(), gf.clone()))
                .collect(),
            degrees: None,
            weak_equivalences: None,
        }
    }

    pub fn from_inverse(inv: &InverseStructure, weq: Option<&BTreeSet<String>>) -> CategoryFile {
        let mut f = CategoryFile::from_category(&inv.category);
        f.degrees = Some(inv.deg.clone());
        f.weak_equivalences = weq.map(|w| w.iter().cloned().collect());
        f
    }

    /// Builds the category, reporting table-shape problems as parse errors
    /// and law violations as validation failures.
    pub fn build(&self) -> CliResult<FinCategory> {
        let cat = FinCategory::new(
            self.objects.clone(),
            self.morphisms
                .iter()
                .map(|m| MorInfo {
                    id: m.id.clone(),
                    src: m.src.clone(),
                    tgt: m.tgt.clone(),
                })
                .collect(),
            self.identities.clone(),
            self.composition
                .iter()
                .map(|(g, f, gf)| ((g.clone(), f.clone()), gf.clone()))
                .collect(),
        )
        .map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(cat)
    }

    /// Full validation report for `cmd_validate`.
    pub fn validate(&self) -> CliResult<Vec<String>> {
        let cat = self.build()?;
        let mut problems: Vec<String> = validate_category(&cat)
            .violations
            .iter()
            .map(|v| v.to_string())
            .collect();
        if let Some(deg) = &self.degrees {
            match InverseStructure::new(cat.clone(), deg.clone()) {
                Ok(inv) => {
                    problems.extend(
                        validate_inverse_structure(&inv)
                            .violations
                            .iter()
                            .map(|v| v.to_string()),
                    );
                }
                Err(e) => problems.push(e.to_string()),
            }
        }
        if let Some(weq) = &self.weak_equivalences {
            let w: BTreeSet<String> = weq.iter().cloned().collect();
            problems.extend(
                validate_weq(&cat, &w, WeqPolicy::TwoOfThree)
                    .violations
                    .iter()
                    .map(|v| v.to_string()),
            );
        }
        Ok(problems)
    }

    pub fn build_inverse(&self) -> CliResult<InverseStructure> {
        let cat = self.build()?;
        let inv = match &self.degrees {
            Some(deg) => InverseStructure::new(cat, deg.clone())
                .map_err(|e| CliError::Validation(e.to_string()))?,
            None => InverseStructure::infer(&cat)
                .map_err(|e| CliError::Validation(format!("no inverse structure: {e}")))?,
        };
        let report = validate_inverse_structure(&inv);
        if !report.is_clean() {
            return Err(CliError::Validation(format!("{}", report.violations[0])));
        }
        Ok(inv)
    }

    pub fn weq_set(&self) -> Option<BTreeSet<String>> {
        self.weak_equivalences
            .as_ref()
            .map(|w| w.iter().cloned().collect())
    }
}

pub fn load_category(path: &Path) -> CliResult<CategoryFile> {
    read_json(path)
}

impl CategoryRef {
    pub fn load(&self, base: &Path) -> CliResult<CategoryFile> {
        match self {
            CategoryRef::Path(p) => load_category(&resolve(base, p)),
            CategoryRef::Inline(f) => Ok((**f).clone()),
        }
    }
}

impl DiagramFile {
    pub fn from_diagram(d: &Diagram) -> DiagramFile {
        DiagramFile {
            category: CategoryRef::Inline(Box::new(CategoryFile::from_category(&d.index))),
            sets: d
                .sets
                .iter()
                .map(|(o, s)| (o.clone(), s.elements().to_vec()))
                .collect(),
            maps: d
                .maps
                .iter()
                .map(|(m, t)| (m.clone(), t.table().clone()))
                .collect(),
        }
    }

    pub fn build(&self, base: &Path) -> CliResult<Diagram> {
        let cat = self.category.load(base)?.build()?;
        let report = validate_diagram_tables(&cat, &self.sets, &self.maps);
        if !report.is_clean() {
            return Err(CliError::Validation(format!("{}", report.violations[0])));
        }
        let sets: BTreeMap<String, FinSetObj> = self
            .sets
            .iter()
            .map(|(o, tags)| Ok((o.clone(), FinSetObj::new(tags.clone()).map_err(cli_parse)?)))
            .collect::<CliResult<_>>()?;
        let maps: BTreeMap<String, FinSetMap> = self
            .maps
            .iter()
            .map(|(m, table)| {
                let info = cat.morphism(m).map_err(cli_parse)?;
                let map = FinSetMap::new(
                    sets[&info.src].clone(),
                    sets[&info.tgt].clone(),
                    table.clone(),
                )
                .map_err(cli_parse)?;
                Ok((m.clone(), map))
            })
            .collect::<CliResult<_>>()?;
        Diagram::new(cat, sets, maps).map_err(|e| CliError::Validation(e.to_string()))
    }

    pub fn validate(&self, base: &Path) -> CliResult<Vec<String>> {
        let cat = self.category.load(base)?.build()?;
        Ok(validate_diagram_tables(&cat, &self.sets, &self.maps)
            .violations
            .iter()
            .map(|v| v.to_string())
            .collect())
    }
}

fn cli_parse(e: glutop_core::Error) -> CliError {
    CliError::Parse(e.to_string())
}

impl DiagramRef {
    pub fn load(&self, base: &Path) -> CliResult<(DiagramFile, PathBuf)> {
        match self {
            DiagramRef::Path(p) => {
                let full = resolve(base, p);
                Ok((read_json(&full)?, full))
            }
            DiagramRef::Inline(f) => Ok(((**f).clone(), base.to_path_buf())),
        }
    }
}

impl NatTransFile {
    pub fn from_nat(t: &NatTrans) -> NatTransFile {
        NatTransFile {
            src: DiagramRef::Inline(Box::new(DiagramFile::from_diagram(&t.src))),
            tgt: DiagramRef::Inline(Box::new(DiagramFile::from_diagram(&t.tgt))),
            components: t
                .components
                .iter()
                .map(|(o, c)| (o.clone(), c.table().clone()))
                .collect(),
        }
    }

    pub fn build(&self, base: &Path) -> CliResult<NatTrans> {
        let (src_file, src_base) = self.src.load(base)?;
        let (tgt_file, tgt_base) = self.tgt.load(base)?;
        let src = src_file.build(&src_base)?;
        let tgt = tgt_file.build(&tgt_base)?;
        let components: BTreeMap<String, FinSetMap> = self
            .components
            .iter()
            .map(|(o, table)| {
                let map = FinSetMap::new(
                    src.set(o).map_err(cli_parse)?.clone(),
                    tgt.set(o).map_err(cli_parse)?.clone(),
                    table.clone(),
                )
                .map_err(cli_parse)?;
                Ok((o.clone(), map))
            })
            .collect::<CliResult<_>>()?;
        NatTrans::new(src, tgt, components).map_err(|e| CliError::Validation(e.to_string()))
    }

    pub fn validate(&self, base: &Path) -> CliResult<Vec<String>> {
        match self.build(base) {
            Ok(_) => Ok(Vec::new()),
            Err(CliError::Validation(m)) => Ok(vec![m]),
            Err(other) => Err(other),
        }
    }
}

impl FunctorFile {
    pub fn build(&self, source: &FinCategory, target: &FinCategory) -> CliResult<FinFunctor> {
        let f = FinFunctor {
            source: source.clone(),
            target: target.clone(),
            object_map: self.object_map.clone(),
            morphism_map: self.morphism_map.clone(),
        };
        let report = f.validate();
        if !report.is_clean() {
            return Err(CliError::Validation(format!("{}", report.violations[0])));
        }
        Ok(f)
    }
}

/// Serialization of finite sets and maps in command outputs.
pub fn finset_json(s: &FinSetObj) -> serde_json::Value {
    serde_json::json!({ "elements": s.elements() })
}

pub fn finsetmap_json(m: &FinSetMap) -> serde_json::Value {
    serde_json::json!({
        "src": finset_json(&m.src),
        "tgt": finset_json(&m.tgt),
        "table": m.table(),
    })
}

pub fn diagram_json(d: &Diagram) -> serde_json::Value {
    serde_json::to_value(DiagramFile::from_diagram(d)).unwrap_or(serde_json::Value::Null)
}

pub fn nat_json(t: &NatTrans) -> serde_json::Value {
    serde_json::json!({
        "components": t
            .components
            .iter()
            .map(|(o, c)| (o.clone(), serde_json::to_value(c.table()).unwrap()))
            .collect::<serde_json::Map<String, serde_json::Value>>(),
    })
}
