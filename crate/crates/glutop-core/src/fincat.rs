//! Finite categories as explicit tables, plus the index-side machinery:
//! functors, inverse structures, coslices, strata, truncations, profunctor
//! collages, and the strata decomposition with its reconstruction
//! certificate.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::encode::encode_tuple;
use crate::error::{Error, Result, ValidationReport, Violation};
use crate::MAX_MORPHISMS;

/// A morphism record: identifier plus endpoints.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MorInfo {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// A finite category given by explicit object/morphism/composition tables.
///
/// Identifiers are case-sensitive strings; all stored sequences are kept
/// sorted so derived structures are canonical and runs are deterministic.
/// The composition table is total on composable pairs: `(g, f)` is a key
/// exactly when `tgt(f) = src(g)`, and maps to the id of `g∘f`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<MorInfo>,
    identities: BTreeMap<String, String>,
    composition: BTreeMap<(String, String), String>,
}

impl FinCategory {
    /// Builds a category from raw tables. This only checks that the tables
    /// are well-formed references; the category *laws* are checked by
    /// [`validate_category`].
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<MorInfo>,
        identities: BTreeMap<String, String>,
        composition: BTreeMap<(String, String), String>,
    ) -> Result<Self> {
        if morphisms.len() > MAX_MORPHISMS {
            return Err(Error::ExplosionLimit {
                needed: morphisms.len() as u128,
                cap: MAX_MORPHISMS,
            });
        }
        let mut objects = objects;
        objects.sort();
        let obj_set: BTreeSet<&String> = objects.iter().collect();
        if obj_set.len() != objects.len() {
            return Err(Error::Invalid("duplicate object id".into()));
        }
        let mut morphisms = morphisms;
        morphisms.sort();
        let mor_ids: BTreeSet<&String> = morphisms.iter().map(|m| &m.id).collect();
        if mor_ids.len() != morphisms.len() {
            return Err(Error::Invalid("duplicate morphism id".into()));
        }
        for m in &morphisms {
            if !obj_set.contains(&m.src) {
                return Err(Error::UnknownObject(m.src.clone()));
            }
            if !obj_set.contains(&m.tgt) {
                return Err(Error::UnknownObject(m.tgt.clone()));
            }
        }
        for o in &objects {
            let id = identities
                .get(o)
                .ok_or_else(|| Error::Invalid(format!("object `{o}` has no identity")))?;
            if !mor_ids.contains(id) {
                return Err(Error::UnknownMorphism(id.clone()));
            }
        }
        for ((g, f), gf) in &composition {
            for id in [g, f, gf] {
                if !mor_ids.contains(id) {
                    return Err(Error::UnknownMorphism(id.clone()));
                }
            }
        }
        Ok(FinCategory {
            objects,
            morphisms,
            identities,
            composition,
        })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[MorInfo] {
        &self.morphisms
    }

    pub fn has_object(&self, o: &str) -> bool {
        self.objects.binary_search_by(|x| x.as_str().cmp(o)).is_ok()
    }

    pub fn morphism(&self, id: &str) -> Result<&MorInfo> {
        self.morphisms
            .binary_search_by(|m| m.id.as_str().cmp(id))
            .map(|ix| &self.morphisms[ix])
            .map_err(|_| Error::UnknownMorphism(id.to_string()))
    }

    pub fn src(&self, id: &str) -> Result<&str> {
        Ok(self.morphism(id)?.src.as_str())
    }

    pub fn tgt(&self, id: &str) -> Result<&str> {
        Ok(self.morphism(id)?.tgt.as_str())
    }

    pub fn identity_of(&self, o: &str) -> Result<&str> {
        self.identities
            .get(o)
            .map(|s| s.as_str())
            .ok_or_else(|| Error::UnknownObject(o.to_string()))
    }

    pub fn is_identity(&self, id: &str) -> bool {
        self.identities.values().any(|v| v == id)
    }

    pub fn identities(&self) -> &BTreeMap<String, String> {
        &self.identities
    }

    pub fn composition(&self) -> &BTreeMap<(String, String), String> {
        &self.composition
    }

    /// `g∘f` (apply `f` first).
    pub fn compose(&self, g: &str, f: &str) -> Result<&str> {
        let gm = self.morphism(g)?;
        let fm = self.morphism(f)?;
        if fm.tgt != gm.src {
            return Err(Error::NotComposable {
                g: g.to_string(),
                f: f.to_string(),
            });
        }
        self.composition
            .get(&(g.to_string(), f.to_string()))
            .map(|s| s.as_str())
            .ok_or_else(|| Error::Invalid(format!("composite ({g}, {f}) missing from table")))
    }

    pub fn hom(&self, a: &str, b: &str) -> Vec<&str> {
        self.morphisms
            .iter()
            .filter(|m| m.src == a && m.tgt == b)
            .map(|m| m.id.as_str())
            .collect()
    }

    pub fn morphisms_from(&self, a: &str) -> Vec<&str> {
        self.morphisms
            .iter()
            .filter(|m| m.src == a)
            .map(|m| m.id.as_str())
            .collect()
    }

    /// Exhaustive two-sided inverse search.
    pub fn inverse_of(&self, f: &str) -> Option<&str> {
        let fm = self.morphism(f).ok()?;
        let id_src = self.identities.get(&fm.src)?;
        let id_tgt = self.identities.get(&fm.tgt)?;
        for g in self.hom(&fm.tgt, &fm.src) {
            let gf = self.composition.get(&(g.to_string(), f.to_string()));
            let fg = self.composition.get(&(f.to_string(), g.to_string()));
            if gf == Some(id_src) && fg == Some(id_tgt) {
                return Some(self.morphism(g).unwrap().id.as_str());
            }
        }
        None
    }

    pub fn is_iso(&self, f: &str) -> bool {
        self.inverse_of(f).is_some()
    }

    pub fn is_groupoid(&self) -> bool {
        self.morphisms.iter().all(|m| self.is_iso(&m.id))
    }

    /// The full subcategory spanned by `keep`.
    pub fn full_subcategory(&self, keep: &BTreeSet<String>) -> Result<FinCategory> {
        for o in keep {
            if !self.has_object(o) {
                return Err(Error::UnknownObject(o.clone()));
            }
        }
        let objects: Vec<String> = self
            .objects
            .iter()
            .filter(|o| keep.contains(*o))
            .cloned()
            .collect();
        let morphisms: Vec<MorInfo> = self
            .morphisms
            .iter()
            .filter(|m| keep.contains(&m.src) && keep.contains(&m.tgt))
            .cloned()
            .collect();
        let kept: BTreeSet<&String> = morphisms.iter().map(|m| &m.id).collect();
        let identities = self
            .identities
            .iter()
            .filter(|(o, _)| keep.contains(*o))
            .map(|(o, m)| (o.clone(), m.clone()))
            .collect();
        let composition = self
            .composition
            .iter()
            .filter(|((g, f), _)| kept.contains(g) && kept.contains(f))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        FinCategory::new(objects, morphisms, identities, composition)
    }
}

/// Checks the category laws; empty report iff the tables present a category.
pub fn validate_category(cat: &FinCategory) -> ValidationReport {
    let mut report = ValidationReport::default();
    // composition total and well-typed
    for g in cat.morphisms() {
        for f in cat.morphisms() {
            if f.tgt != g.src {
                continue;
            }
            match cat.composition().get(&(g.id.clone(), f.id.clone())) {
                None => report.push(Violation::MissingComposite {
                    g: g.id.clone(),
                    f: f.id.clone(),
                }),
                Some(gf) => match cat.morphism(gf) {
                    Ok(m) if m.src == f.src && m.tgt == g.tgt => {}
                    _ => report.push(Violation::IllTypedComposite {
                        g: g.id.clone(),
                        f: f.id.clone(),
                        gf: gf.clone(),
                    }),
                },
            }
        }
    }
    // identity endpoints and laws
    for (o, id) in cat.identities() {
        match cat.morphism(id) {
            Ok(m) if m.src == *o && m.tgt == *o => {}
            _ => report.push(Violation::Other {
                detail: format!("identity of `{o}` is not an endomorphism of `{o}`"),
            }),
        }
    }
    for f in cat.morphisms() {
        let id_src = match cat.identity_of(&f.src) {
            Ok(i) => i.to_string(),
            Err(_) => continue,
        };
        let id_tgt = match cat.identity_of(&f.tgt) {
            Ok(i) => i.to_string(),
            Err(_) => continue,
        };
        let right = cat.composition().get(&(f.id.clone(), id_src));
        let left = cat.composition().get(&(id_tgt, f.id.clone()));
        if right.is_some_and(|r| *r != f.id) || left.is_some_and(|l| *l != f.id) {
            report.push(Violation::BrokenIdentity { f: f.id.clone() });
        }
    }
    // associativity on all composable triples
    for h in cat.morphisms() {
        for g in cat.morphisms() {
            if g.tgt != h.src {
                continue;
            }
            let hg = match cat.composition().get(&(h.id.clone(), g.id.clone())) {
                Some(x) => x,
                None => continue,
            };
            for f in cat.morphisms() {
                if f.tgt != g.src {
                    continue;
                }
                let gf = match cat.composition().get(&(g.id.clone(), f.id.clone())) {
                    Some(x) => x,
                    None => continue,
                };
                let left = cat.composition().get(&(hg.clone(), f.id.clone()));
                let right = cat.composition().get(&(h.id.clone(), gf.clone()));
                if let (Some(l), Some(r)) = (left, right) {
                    if l != r {
                        report.push(Violation::BrokenAssociativity {
                            h: h.id.clone(),
                            g: g.id.clone(),
                            f: f.id.clone(),
                        });
                    }
                }
            }
        }
    }
    report
}

/// A functor between finite categories, given by explicit maps.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FinFunctor {
    pub source: FinCategory,
    pub target: FinCategory,
    pub object_map: BTreeMap<String, String>,
    pub morphism_map: BTreeMap<String, String>,
}

impl FinFunctor {
    pub fn identity(cat: &FinCategory) -> FinFunctor {
        FinFunctor {
            source: cat.clone(),
            target: cat.clone(),
            object_map: cat
                .objects()
                .iter()
                .map(|o| (o.clone(), o.clone()))
                .collect(),
            morphism_map: cat
                .morphisms()
                .iter()
                .map(|m| (m.id.clone(), m.id.clone()))
                .collect(),
        }
    }

    /// The inclusion of a full subcategory whose tables are literal subsets.
    pub fn inclusion(sub: &FinCategory, ambient: &FinCategory) -> FinFunctor {
        FinFunctor {
            source: sub.clone(),
            target: ambient.clone(),
            object_map: sub
                .objects()
                .iter()
                .map(|o| (o.clone(), o.clone()))
                .collect(),
            morphism_map: sub
                .morphisms()
                .iter()
                .map(|m| (m.id.clone(), m.id.clone()))
                .collect(),
        }
    }

    pub fn on_object(&self, o: &str) -> Result<&str> {
        self.object_map
            .get(o)
            .map(|s| s.as_str())
            .ok_or_else(|| Error::UnknownObject(o.to_string()))
    }

    pub fn on_morphism(&self, m: &str) -> Result<&str> {
        self.morphism_map
            .get(m)
            .map(|s| s.as_str())
            .ok_or_else(|| Error::UnknownMorphism(m.to_string()))
    }

    /// Exhaustive functor-law check: endpoints, identities, composites.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for o in self.source.objects() {
            match self.object_map.get(o) {
                Some(fo) if self.target.has_object(fo) => {}
                _ => report.push(Violation::BrokenFunctoriality {
                    detail: format!("object `{o}` not mapped into the target"),
                }),
            }
        }
        for m in self.source.morphisms() {
            let fm = match self.morphism_map.get(&m.id) {
                Some(x) => x,
                None => {
                    report.push(Violation::BrokenFunctoriality {
                        detail: format!("morphism `{}` unmapped", m.id),
                    });
                    continue;
                }
            };
            match (
                self.target.morphism(fm),
                self.object_map.get(&m.src),
                self.object_map.get(&m.tgt),
            ) {
                (Ok(t), Some(fs), Some(ft)) => {
                    if t.src != *fs || t.tgt != *ft {
                        report.push(Violation::BrokenFunctoriality {
                            detail: format!("endpoints of `{}` not preserved", m.id),
                        });
                    }
                }
                _ => report.push(Violation::BrokenFunctoriality {
                    detail: format!("image of `{}` missing", m.id),
                }),
            }
        }
        for (o, id) in self.source.identities() {
            let fo = match self.object_map.get(o) {
                Some(x) => x,
                None => continue,
            };
            let want = match self.target.identity_of(fo) {
                Ok(x) => x,
                Err(_) => continue,
            };
            if self.morphism_map.get(id).map(|s| s.as_str()) != Some(want) {
                report.push(Violation::BrokenFunctoriality {
                    detail: format!("identity at `{o}` not preserved"),
                });
            }
        }
        for ((g, f), gf) in self.source.composition() {
            let (fg, ff, fgf) = match (
                self.morphism_map.get(g),
                self.morphism_map.get(f),
                self.morphism_map.get(gf),
            ) {
                (Some(a), Some(b), Some(c)) => (a, b, c),
                _ => continue,
            };
            match self.target.compose(fg, ff) {
                Ok(c) if c == fgf => {}
                _ => report.push(Violation::BrokenFunctoriality {
                    detail: format!("composite ({g}, {f}) not preserved"),
                }),
            }
        }
        report
    }
}

/// A degree function making the category a generalized inverse category:
/// non-isomorphisms strictly lower degree, isomorphisms preserve it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct InverseStructure {
    pub category: FinCategory,
    pub deg: BTreeMap<String, u32>,
}

impl InverseStructure {
    pub fn new(category: FinCategory, deg: BTreeMap<String, u32>) -> Result<Self> {
        for o in category.objects() {
            if !deg.contains_key(o) {
                return Err(Error::Invalid(format!("object `{o}` has no degree")));
            }
        }
        Ok(InverseStructure { category, deg })
    }

    pub fn degree(&self, o: &str) -> Result<u32> {
        self.deg
            .get(o)
            .copied()
            .ok_or_else(|| Error::UnknownObject(o.to_string()))
    }

    /// Occupied degrees, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self.deg.values().copied().collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    /// Infers the canonical degree function (longest chain of non-isos out of
    /// each object). Fails when the category admits no inverse structure.
    pub fn infer(category: &FinCategory) -> Result<InverseStructure> {
        // Longest-path over the non-iso arrows; a cycle of non-isos means no
        // inverse structure exists.
        let mut deg: BTreeMap<String, u32> = BTreeMap::new();
        fn depth(
            cat: &FinCategory,
            o: &str,
            deg: &mut BTreeMap<String, u32>,
            seen: &mut BTreeSet<String>,
        ) -> Result<u32> {
            if let Some(d) = deg.get(o) {
                return Ok(*d);
            }
            if !seen.insert(o.to_string()) {
                return Err(Error::Invalid(format!(
                    "cycle of non-isomorphisms through `{o}`"
                )));
            }
            let mut best = 0;
            for m in cat.morphisms_from(o) {
                let info = cat.morphism(m)?;
                if cat.is_iso(m) {
                    continue;
                }
                let d = depth(cat, &info.tgt, deg, seen)? + 1;
                best = best.max(d);
            }
            seen.remove(o);
            deg.insert(o.to_string(), best);
            Ok(best)
        }
        for o in category.objects() {
            let mut seen = BTreeSet::new();
            depth(category, o, &mut deg, &mut seen)?;
        }
        // Isomorphic objects must agree; take the induced structure and
        // validate it.
        let inv = InverseStructure::new(category.clone(), deg)?;
        validate_inverse_structure(&inv).into_result()?;
        Ok(inv)
    }
}

/// Checks the degree invariants by exhaustive inverse search.
pub fn validate_inverse_structure(inv: &InverseStructure) -> ValidationReport {
    let mut report = ValidationReport::default();
    for m in inv.category.morphisms() {
        let (ds, dt) = match (inv.deg.get(&m.src), inv.deg.get(&m.tgt)) {
            (Some(a), Some(b)) => (*a, *b),
            _ => {
                report.push(Violation::Other {
                    detail: format!("morphism `{}` touches an object without a degree", m.id),
                });
                continue;
            }
        };
        if inv.category.is_iso(&m.id) {
            if ds != dt {
                report.push(Violation::IsoDegreeMismatch { f: m.id.clone() });
            }
        } else if ds <= dt {
            report.push(Violation::NonDecreasingMap { f: m.id.clone() });
        }
    }
    report
}

/// A coslice-style category whose objects are morphisms out of an anchor,
/// with the projection labeling used to form limits over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coslice {
    /// The coslice as a category: objects are base-morphism ids, morphisms
    /// are commuting triangles.
    pub category: FinCategory,
    /// Coslice object -> codomain object in the base.
    pub codomain_of: BTreeMap<String, String>,
    /// Coslice morphism -> the base morphism `h` witnessing the triangle.
    pub witness_of: BTreeMap<String, String>,
}

fn coslice_on(cat: &FinCategory, anchor: &str, objects: Vec<String>) -> Result<Coslice> {
    // objects: ids of morphisms out of `anchor` forming the coslice objects.
    let obj_set: BTreeSet<String> = objects.iter().cloned().collect();
    let mut codomain_of = BTreeMap::new();
    for f in &objects {
        codomain_of.insert(f.clone(), cat.tgt(f)?.to_string());
    }
    // triangle (f, h): h ∘ f = f' with f' also a coslice object
    let mut morphisms = Vec::new();
    let mut witness_of = BTreeMap::new();
    let mut identities = BTreeMap::new();
    for f in &objects {
        let cod_f = cat.tgt(f)?;
        for h in cat.morphisms_from(cod_f) {
            let hf = cat.compose(h, f)?;
            if !obj_set.contains(hf) {
                continue;
            }
            let id = encode_tuple(&[f.as_str(), h]);
            morphisms.push(MorInfo {
                id: id.clone(),
                src: f.clone(),
                tgt: hf.to_string(),
            });
            witness_of.insert(id.clone(), h.to_string());
            if cat.is_identity(h) {
                identities.insert(f.clone(), id);
            }
        }
    }
    let mut composition = BTreeMap::new();
    for second in &morphisms {
        for first in &morphisms {
            if first.tgt != second.src {
                continue;
            }
            let h1 = &witness_of[&first.id];
            let h2 = &witness_of[&second.id];
            let h21 = cat.compose(h2, h1)?;
            let result_id = encode_tuple(&[first.src.as_str(), h21]);
            composition.insert((second.id.clone(), first.id.clone()), result_id);
        }
    }
    let category = FinCategory::new(objects, morphisms, identities, composition)?;
    let _ = anchor;
    Ok(Coslice {
        category,
        codomain_of,
        witness_of,
    })
}

/// `I^-(i)`: the coslice at `i` spanned by the strictly degree-lowering maps.
pub fn strict_coslice(inv: &InverseStructure, i: &str) -> Result<Coslice> {
    let deg_i = inv.degree(i)?;
    let mut objects = Vec::new();
    for m in inv.category.morphisms_from(i) {
        let tgt = inv.category.tgt(m)?;
        if inv.degree(tgt)? < deg_i {
            objects.push(m.to_string());
        }
    }
    coslice_on(&inv.category, i, objects)
}

/// `(c/C)°`: the coslice at `c` with the initial object `id_c` removed.
pub fn punctured_coslice(cat: &FinCategory, c: &str) -> Result<Coslice> {
    if !cat.has_object(c) {
        return Err(Error::UnknownObject(c.to_string()));
    }
    let idc = cat.identity_of(c)?;
    let objects: Vec<String> = cat
        .morphisms_from(c)
        .into_iter()
        .filter(|m| *m != idc)
        .map(|m| m.to_string())
        .collect();
    coslice_on(cat, c, objects)
}

/// `G_n(I)`: the full subcategory on degree-`n` objects (a groupoid by the
/// inverse invariants).
pub fn stratum(inv: &InverseStructure, n: u32) -> Result<FinCategory> {
    let keep: BTreeSet<String> = inv
        .category
        .objects()
        .iter()
        .filter(|o| inv.deg.get(*o) == Some(&n))
        .cloned()
        .collect();
    inv.category.full_subcategory(&keep)
}

/// `I_{≤n}` (or `I_{<n}` when `strict`).
pub fn truncation(inv: &InverseStructure, n: u32, strict: bool) -> Result<FinCategory> {
    let keep: BTreeSet<String> = inv
        .category
        .objects()
        .iter()
        .filter(|o| {
            let d = inv.deg[*o];
            if strict {
                d < n
            } else {
                d <= n
            }
        })
        .cloned()
        .collect();
    inv.category.full_subcategory(&keep)
}

/// Restricts an inverse structure to a truncation.
pub fn truncate_structure(
    inv: &InverseStructure,
    n: u32,
    strict: bool,
) -> Result<InverseStructure> {
    let cat = truncation(inv, n, strict)?;
    let deg = cat
        .objects()
        .iter()
        .map(|o| (o.clone(), inv.deg[o]))
        .collect();
    InverseStructure::new(cat, deg)
}

/// A profunctor between finite categories: heteromorphism sets `H(c, d)` for
/// `c` in the source and `d` in the target, with the two composition
/// actions. In the collage, heteromorphisms run from source objects to
/// target objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profunctor {
    pub source: FinCategory,
    pub target: FinCategory,
    /// `(source object, target object)` -> element tags (sorted).
    pub elements: BTreeMap<(String, String), Vec<String>>,
    /// Precomposition: `(element, source morphism g)` -> element (`e∘g`).
    pub left_action: BTreeMap<(String, String), String>,
    /// Postcomposition: `(target morphism h, element)` -> element (`h∘e`).
    pub right_action: BTreeMap<(String, String), String>,
}

impl Profunctor {
    /// Exhaustive action-law check.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut tag_seen: BTreeSet<&String> = BTreeSet::new();
        for tags in self.elements.values() {
            for t in tags {
                if !tag_seen.insert(t) {
                    report.push(Violation::Other {
                        detail: format!("duplicate profunctor element `{t}`"),
                    });
                }
            }
        }
        for ((c, d), tags) in &self.elements {
            if !self.source.has_object(c) || !self.target.has_object(d) {
                report.push(Violation::Other {
                    detail: format!("profunctor position ({c}, {d}) outside the categories"),
                });
                continue;
            }
            for e in tags {
                // left action along every g: c' -> c
                for g in self.source.morphisms() {
                    if g.tgt != *c {
                        continue;
                    }
                    match self.left_action.get(&(e.clone(), g.id.clone())) {
                        Some(eg) => {
                            if self
                                .elements
                                .get(&(g.src.clone(), d.clone()))
                                .is_none_or(|ts| !ts.contains(eg))
                            {
                                report.push(Violation::Other {
                                    detail: format!(
                                        "left action of `{}` on `{e}` mistargeted",
                                        g.id
                                    ),
                                });
                            }
                        }
                        None => report.push(Violation::Other {
                            detail: format!("left action of `{}` on `{e}` missing", g.id),
                        }),
                    }
                }
                // right action along every h: d -> d'
                for h in self.target.morphisms() {
                    if h.src != *d {
                        continue;
                    }
                    match self.right_action.get(&(h.id.clone(), e.clone())) {
                        Some(he) => {
                            if self
                                .elements
                                .get(&(c.clone(), h.tgt.clone()))
                                .is_none_or(|ts| !ts.contains(he))
                            {
                                report.push(Violation::Other {
                                    detail: format!(
                                        "right action of `{}` on `{e}` mistargeted",
                                        h.id
                                    ),
                                });
                            }
                        }
                        None => report.push(Violation::Other {
                            detail: format!("right action of `{}` on `{e}` missing", h.id),
                        }),
                    }
                }
            }
        }
        // identity and composition compatibility
        for ((e, g), eg) in &self.left_action {
            if self.source.is_identity(g) && eg != e {
                report.push(Violation::Other {
                    detail: format!("left identity action moves `{e}`"),
                });
            }
            // (e∘g)∘g' = e∘(g∘g')
            let g_info = match self.source.morphism(g) {
                Ok(x) => x,
                Err(_) => continue,
            };
            for g2 in self.source.morphisms() {
                if g2.tgt != g_info.src {
                    continue;
                }
                let gg2 = match self.source.compose(g, &g2.id) {
                    Ok(x) => x.to_string(),
                    Err(_) => continue,
                };
                let lhs = self.left_action.get(&(eg.clone(), g2.id.clone()));
                let rhs = self.left_action.get(&(e.clone(), gg2));
                if lhs.is_some() && rhs.is_some() && lhs != rhs {
                    report.push(Violation::Other {
                        detail: format!("left action not associative at `{e}`"),
                    });
                }
            }
        }
        for ((h, e), he) in &self.right_action {
            if self.target.is_identity(h) && he != e {
                report.push(Violation::Other {
                    detail: format!("right identity action moves `{e}`"),
                });
            }
            let h_info = match self.target.morphism(h) {
                Ok(x) => x,
                Err(_) => continue,
            };
            for h2 in self.target.morphisms() {
                if h2.src != h_info.tgt {
                    continue;
                }
                let h2h = match self.target.compose(&h2.id, h) {
                    Ok(x) => x.to_string(),
                    Err(_) => continue,
                };
                let lhs = self.right_action.get(&(h2.id.clone(), he.clone()));
                let rhs = self.right_action.get(&(h2h, e.clone()));
                if lhs.is_some() && rhs.is_some() && lhs != rhs {
                    report.push(Violation::Other {
                        detail: format!("right action not associative at `{e}`"),
                    });
                }
            }
        }
        // middle associativity (h∘e)∘g = h∘(e∘g)
        for ((c, d), tags) in &self.elements {
            for e in tags {
                for g in self.source.morphisms() {
                    if g.tgt != *c {
                        continue;
                    }
                    for h in self.target.morphisms() {
                        if h.src != *d {
                            continue;
                        }
                        let eg = self.left_action.get(&(e.clone(), g.id.clone()));
                        let he = self.right_action.get(&(h.id.clone(), e.clone()));
                        if let (Some(eg), Some(he)) = (eg, he) {
                            let lhs = self.right_action.get(&(h.id.clone(), eg.clone()));
                            let rhs = self.left_action.get(&(he.clone(), g.id.clone()));
                            if lhs != rhs {
                                report.push(Violation::Other {
                                    detail: format!("actions do not commute at `{e}`"),
                                });
                            }
                        }
                    }
                }
            }
        }
        report
    }
}

/// The collage `[H]`: source and target side by side, heteromorphisms from
/// source objects to target objects given by the profunctor elements, and
/// composition through the actions. Identifiers must be globally disjoint.
pub fn collage(h: &Profunctor) -> Result<FinCategory> {
    let mut objects: Vec<String> = h.source.objects().to_vec();
    for o in h.target.objects() {
        if h.source.has_object(o) {
            return Err(Error::Invalid(format!(
                "object id `{o}` in both categories"
            )));
        }
        objects.push(o.clone());
    }
    let mut morphisms: Vec<MorInfo> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for m in h.source.morphisms().iter().chain(h.target.morphisms()) {
        if !seen.insert(m.id.clone()) {
            return Err(Error::Invalid(format!("morphism id `{}` duplicated", m.id)));
        }
        morphisms.push(m.clone());
    }
    for ((c, d), tags) in &h.elements {
        for e in tags {
            if !seen.insert(e.clone()) {
                return Err(Error::Invalid(format!(
                    "profunctor element `{e}` collides with a morphism id"
                )));
            }
            morphisms.push(MorInfo {
                id: e.clone(),
                src: c.clone(),
                tgt: d.clone(),
            });
        }
    }
    let mut identities = h.source.identities().clone();
    identities.extend(h.target.identities().clone());
    let mut composition = h.source.composition().clone();
    composition.extend(h.target.composition().clone());
    // hetero ∘ source-map, target-map ∘ hetero
    for ((c, d), tags) in &h.elements {
        for e in tags {
            for g in h.source.morphisms() {
                if g.tgt == *c {
                    let eg = h
                        .left_action
                        .get(&(e.clone(), g.id.clone()))
                        .ok_or_else(|| Error::Invalid(format!("left action missing at `{e}`")))?;
                    composition.insert((e.clone(), g.id.clone()), eg.clone());
                }
            }
            for t in h.target.morphisms() {
                if t.src == *d {
                    let te = h
                        .right_action
                        .get(&(t.id.clone(), e.clone()))
                        .ok_or_else(|| Error::Invalid(format!("right action missing at `{e}`")))?;
                    composition.insert((t.id.clone(), e.clone()), te.clone());
                }
            }
        }
    }
    FinCategory::new(objects, morphisms, identities, composition)
}

/// One layer of the degreewise decomposition.
#[derive(Debug, Clone)]
pub struct StratumLayer {
    pub degree: u32,
    /// `G_n(I)`, the boundary groupoid.
    pub boundary: FinCategory,
    /// `I_{<n}`, the interior.
    pub interior: FinCategory,
    /// Attaching profunctor with `H(i, j) = I_{≤n}(i, j)`.
    pub attaching: Profunctor,
}

/// An isomorphism of categories, as object and morphism bijections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryIso {
    pub object_map: BTreeMap<String, String>,
    pub morphism_map: BTreeMap<String, String>,
}

/// The iterated-gluing presentation of a generalized inverse category: one
/// layer per occupied degree plus a reconstruction certificate equating the
/// iterated collage with the input.
#[derive(Debug, Clone)]
pub struct StrataDecomposition {
    pub layers: Vec<StratumLayer>,
    /// Isomorphism from the iterated collage onto the input category.
    pub certificate: CategoryIso,
}

/// Decomposes a valid inverse category into per-degree boundaries,
/// interiors, and attaching profunctors, then reconstructs the category as
/// an iterated collage and certifies the reconstruction by isomorphism
/// search. `ReconstructionFailed` signals an implementation bug.
pub fn strata_decomposition(inv: &InverseStructure) -> Result<StrataDecomposition> {
    let degrees = inv.degrees();
    let mut layers = Vec::new();
    for &n in &degrees {
        let boundary = stratum(inv, n)?;
        let interior = truncation(inv, n, true)?;
        let mut elements: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
        let mut left_action = BTreeMap::new();
        let mut right_action = BTreeMap::new();
        for m in inv.category.morphisms() {
            if inv.deg[&m.src] == n && inv.deg[&m.tgt] < n {
                elements
                    .entry((m.src.clone(), m.tgt.clone()))
                    .or_default()
                    .push(m.id.clone());
            }
        }
        for tags in elements.values_mut() {
            tags.sort();
        }
        for tags in elements.values() {
            for e in tags {
                for g in boundary.morphisms() {
                    if g.tgt == *inv.category.src(e)? {
                        left_action.insert(
                            (e.clone(), g.id.clone()),
                            inv.category.compose(e, &g.id)?.to_string(),
                        );
                    }
                }
                for h in interior.morphisms() {
                    if h.src == *inv.category.tgt(e)? {
                        right_action.insert(
                            (h.id.clone(), e.clone()),
                            inv.category.compose(&h.id, e)?.to_string(),
                        );
                    }
                }
            }
        }
        layers.push(StratumLayer {
            degree: n,
            boundary: boundary.clone(),
            interior: interior.clone(),
            attaching: Profunctor {
                source: boundary,
                target: interior,
                elements,
                left_action,
                right_action,
            },
        });
    }
    // iterated collage, lowest degree first
    let mut rebuilt: Option<FinCategory> = None;
    for layer in &layers {
        rebuilt = Some(match rebuilt {
            None => layer.boundary.clone(),
            Some(acc) => {
                // The interior recorded in the layer is I_{<n}; the
                // accumulator must agree with it up to iterated collage,
                // so attach along the recorded profunctor with the
                // accumulator substituted as target.
                let prof = Profunctor {
                    source: layer.attaching.source.clone(),
                    target: acc,
                    elements: layer.attaching.elements.clone(),
                    left_action: layer.attaching.left_action.clone(),
                    right_action: layer.attaching.right_action.clone(),
                };
                collage(&prof)?
            }
        });
    }
    let rebuilt = rebuilt.unwrap_or(FinCategory::new(
        Vec::new(),
        Vec::new(),
        BTreeMap::new(),
        BTreeMap::new(),
    )?);
    let degree_of = |o: &str| inv.deg.get(o).copied();
    let certificate = category_iso_search(&rebuilt, &inv.category, &degree_of, &degree_of)
        .ok_or_else(|| {
            Error::ReconstructionFailed("no isomorphism between collage and input".into())
        })?;
    Ok(StrataDecomposition {
        layers,
        certificate,
    })
}

/// Backtracking category-isomorphism search, pruned by degree labels (when
/// given) and hom-set cardinalities.
pub fn category_iso_search(
    a: &FinCategory,
    b: &FinCategory,
    deg_a: &dyn Fn(&str) -> Option<u32>,
    deg_b: &dyn Fn(&str) -> Option<u32>,
) -> Option<CategoryIso> {
    if a.objects().len() != b.objects().len() || a.morphisms().len() != b.morphisms().len() {
        return None;
    }
    let a_objs: Vec<&String> = a.objects().iter().collect();
    let b_objs: Vec<&String> = b.objects().iter().collect();

    fn extend_morphisms(
        a: &FinCategory,
        b: &FinCategory,
        obj_map: &BTreeMap<String, String>,
    ) -> Option<BTreeMap<String, String>> {
        // Build per-hom-set bijections by backtracking, checking identity and
        // composition constraints.
        let mut hom_pairs: Vec<(Vec<String>, Vec<String>)> = Vec::new();
        for x in a.objects() {
            for y in a.objects() {
                let ha: Vec<String> = a.hom(x, y).into_iter().map(String::from).collect();
                let hb: Vec<String> = b
                    .hom(&obj_map[x], &obj_map[y])
                    .into_iter()
                    .map(String::from)
                    .collect();
                if ha.len() != hb.len() {
                    return None;
                }
                if !ha.is_empty() {
                    hom_pairs.push((ha, hb));
                }
            }
        }
        fn rec(
            a: &FinCategory,
            b: &FinCategory,
            hom_pairs: &[(Vec<String>, Vec<String>)],
            ix: usize,
            map: &mut BTreeMap<String, String>,
        ) -> bool {
            if ix == hom_pairs.len() {
                // full check of composition preservation
                for ((g, f), gf) in a.composition() {
                    let (bg, bf, bgf) = (&map[g], &map[f], &map[gf]);
                    match b.compose(bg, bf) {
                        Ok(c) if c == bgf => {}
                        _ => return false,
                    }
                }
                return true;
            }
            let (ha, hb) = &hom_pairs[ix];
            // try all bijections ha -> hb
            fn bijections(n: usize) -> Vec<Vec<usize>> {
                fn go(used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                    let n = used.len();
                    if cur.len() == n {
                        out.push(cur.clone());
                        return;
                    }
                    for k in 0..n {
                        if !used[k] {
                            used[k] = true;
                            cur.push(k);
                            go(used, cur, out);
                            cur.pop();
                            used[k] = false;
                        }
                    }
                }
                let mut out = Vec::new();
                go(&mut vec![false; n], &mut Vec::new(), &mut out);
                out
            }
            for perm in bijections(ha.len()) {
                let mut ok = true;
                for (k, &p) in perm.iter().enumerate() {
                    // identities must map to identities
                    if a.is_identity(&ha[k]) != b.is_identity(&hb[p]) {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    continue;
                }
                for (k, &p) in perm.iter().enumerate() {
                    map.insert(ha[k].clone(), hb[p].clone());
                }
                // partial composition check against already-assigned maps
                let mut consistent = true;
                'outer: for ((g, f), gf) in a.composition() {
                    if let (Some(bg), Some(bf), Some(bgf)) = (map.get(g), map.get(f), map.get(gf)) {
                        match b.compose(bg, bf) {
                            Ok(c) if c == bgf => {}
                            _ => {
                                consistent = false;
                                break 'outer;
                            }
                        }
                    }
                }
                if consistent && rec(a, b, hom_pairs, ix + 1, map) {
                    return true;
                }
                for (k, _) in perm.iter().enumerate() {
                    map.remove(&ha[k]);
                }
            }
            false
        }
        let mut map = BTreeMap::new();
        if rec(a, b, &hom_pairs, 0, &mut map) {
            Some(map)
        } else {
            None
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn rec_obj(
        a: &FinCategory,
        b: &FinCategory,
        a_objs: &[&String],
        b_objs: &[&String],
        deg_a: &dyn Fn(&str) -> Option<u32>,
        deg_b: &dyn Fn(&str) -> Option<u32>,
        ix: usize,
        used: &mut Vec<bool>,
        map: &mut BTreeMap<String, String>,
    ) -> Option<CategoryIso> {
        if ix == a_objs.len() {
            let morphism_map = extend_morphisms(a, b, map)?;
            return Some(CategoryIso {
                object_map: map.clone(),
                morphism_map,
            });
        }
        let x = a_objs[ix];
        for (k, y) in b_objs.iter().enumerate() {
            if used[k] {
                continue;
            }
            if deg_a(x) != deg_b(y) {
                continue;
            }
            // hom-cardinality pruning against already-assigned objects
            let mut ok = a.hom(x, x).len() == b.hom(y, y).len();
            if ok {
                for (px, py) in map.iter() {
                    if a.hom(x, px).len() != b.hom(y, py).len()
                        || a.hom(px, x).len() != b.hom(py, y).len()
                    {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            used[k] = true;
            map.insert(x.to_string(), y.to_string());
            if let Some(iso) = rec_obj(a, b, a_objs, b_objs, deg_a, deg_b, ix + 1, used, map) {
                return Some(iso);
            }
            map.remove(x.as_str());
            used[k] = false;
        }
        None
    }

    let mut used = vec![false; b_objs.len()];
    let mut map = BTreeMap::new();
    rec_obj(a, b, &a_objs, &b_objs, deg_a, deg_b, 0, &mut used, &mut map)
}
