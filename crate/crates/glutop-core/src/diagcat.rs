//! Finite-set diagrams over a finite index category, natural
//! transformations, exhaustive transformation enumeration, and the
//! groupoid-indexed classifier and dependent product (both pointwise).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::encode::encode_pair;
use crate::error::{Error, Result, ValidationReport, Violation};
use crate::fincat::{FinCategory, FinFunctor, InverseStructure};
use crate::logicat::{
    pi_finset, section_element, Classifier, ClassifierOf, EqualizerOf, FinSetCat, FinSetMap,
    FinSetObj, LogicalCategory, Pi, PiOf, ProductOf, PullbackOf, TRUE_TAG,
};
use crate::matching;

/// A functor from a finite index category into finite sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagram {
    pub index: FinCategory,
    pub sets: BTreeMap<String, FinSetObj>,
    pub maps: BTreeMap<String, FinSetMap>,
}

impl Diagram {
    pub fn new(
        index: FinCategory,
        sets: BTreeMap<String, FinSetObj>,
        maps: BTreeMap<String, FinSetMap>,
    ) -> Result<Self> {
        let d = Diagram { index, sets, maps };
        validate_diagram(&d).into_result()?;
        Ok(d)
    }

    pub fn set(&self, o: &str) -> Result<&FinSetObj> {
        self.sets
            .get(o)
            .ok_or_else(|| Error::UnknownObject(o.to_string()))
    }

    pub fn map(&self, m: &str) -> Result<&FinSetMap> {
        self.maps
            .get(m)
            .ok_or_else(|| Error::UnknownMorphism(m.to_string()))
    }

    /// The constant diagram at one set (every action an identity).
    pub fn constant(index: &FinCategory, value: &FinSetObj) -> Diagram {
        let sets = index
            .objects()
            .iter()
            .map(|o| (o.clone(), value.clone()))
            .collect();
        let maps = index
            .morphisms()
            .iter()
            .map(|m| (m.id.clone(), FinSetMap::identity(value)))
            .collect();
        Diagram {
            index: index.clone(),
            sets,
            maps,
        }
    }

    pub fn terminal(index: &FinCategory) -> Diagram {
        Diagram::constant(index, &FinSetObj::terminal())
    }
}

/// Checks functoriality of an assembled diagram.
pub fn validate_diagram(d: &Diagram) -> ValidationReport {
    let mut report = ValidationReport::default();
    for o in d.index.objects() {
        if !d.sets.contains_key(o) {
            report.push(Violation::Other {
                detail: format!("object `{o}` has no set"),
            });
        }
    }
    for m in d.index.morphisms() {
        let t = match d.maps.get(&m.id) {
            Some(t) => t,
            None => {
                report.push(Violation::BrokenFunctoriality {
                    detail: format!("morphism `{}` has no map", m.id),
                });
                continue;
            }
        };
        let (ss, ts) = match (d.sets.get(&m.src), d.sets.get(&m.tgt)) {
            (Some(a), Some(b)) => (a, b),
            _ => continue,
        };
        if t.src != *ss || t.tgt != *ts {
            report.push(Violation::BrokenFunctoriality {
                detail: format!("map `{}` does not match the object sets", m.id),
            });
        }
    }
    if !report.is_clean() {
        return report;
    }
    for (o, idm) in d.index.identities() {
        if d.maps[idm] != FinSetMap::identity(&d.sets[o]) {
            report.push(Violation::BrokenFunctoriality {
                detail: format!("identity at `{o}` is not the identity table"),
            });
        }
    }
    for ((g, f), gf) in d.index.composition() {
        let composed = match d.maps[g].compose(&d.maps[f]) {
            Ok(c) => c,
            Err(_) => continue,
        };
        if composed != d.maps[gf] {
            report.push(Violation::BrokenFunctoriality {
                detail: format!("composite ({g}, {f}) not preserved"),
            });
        }
    }
    report
}

/// Validates raw diagram tables before construction (totality, codomain
/// membership, functoriality), so broken inputs get a full report.
pub fn validate_diagram_tables(
    index: &FinCategory,
    sets: &BTreeMap<String, Vec<String>>,
    maps: &BTreeMap<String, BTreeMap<String, String>>,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut objs: BTreeMap<String, FinSetObj> = BTreeMap::new();
    for o in index.objects() {
        match sets.get(o) {
            None => report.push(Violation::Other {
                detail: format!("object `{o}` has no set"),
            }),
            Some(tags) => match FinSetObj::new(tags.clone()) {
                Ok(s) => {
                    objs.insert(o.clone(), s);
                }
                Err(e) => report.push(Violation::Other {
                    detail: format!("set at `{o}`: {e}"),
                }),
            },
        }
    }
    let mut built: BTreeMap<String, FinSetMap> = BTreeMap::new();
    for m in index.morphisms() {
        let table = match maps.get(&m.id) {
            None => {
                report.push(Violation::BrokenFunctoriality {
                    detail: format!("morphism `{}` has no table", m.id),
                });
                continue;
            }
            Some(t) => t,
        };
        let (ss, ts) = match (objs.get(&m.src), objs.get(&m.tgt)) {
            (Some(a), Some(b)) => (a.clone(), b.clone()),
            _ => continue,
        };
        match FinSetMap::new(ss, ts, table.clone()) {
            Ok(mp) => {
                built.insert(m.id.clone(), mp);
            }
            Err(e) => report.push(Violation::BrokenFunctoriality {
                detail: format!("map `{}`: {e}", m.id),
            }),
        }
    }
    if report.is_clean() {
        let d = Diagram {
            index: index.clone(),
            sets: objs,
            maps: built,
        };
        for v in validate_diagram(&d).violations {
            report.push(v);
        }
    }
    report
}

/// A family of component functions between two diagrams over one index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NatTrans {
    pub src: Diagram,
    pub tgt: Diagram,
    pub components: BTreeMap<String, FinSetMap>,
}

impl NatTrans {
    pub fn new(
        src: Diagram,
        tgt: Diagram,
        components: BTreeMap<String, FinSetMap>,
    ) -> Result<Self> {
        let t = NatTrans {
            src,
            tgt,
            components,
        };
        validate_nat(&t).into_result()?;
        Ok(t)
    }

    pub fn identity(d: &Diagram) -> NatTrans {
        NatTrans {
            src: d.clone(),
            tgt: d.clone(),
            components: d
                .sets
                .iter()
                .map(|(o, s)| (o.clone(), FinSetMap::identity(s)))
                .collect(),
        }
    }

    pub fn component(&self, o: &str) -> Result<&FinSetMap> {
        self.components
            .get(o)
            .ok_or_else(|| Error::UnknownObject(o.to_string()))
    }

    /// `self ∘ other` componentwise.
    pub fn compose(&self, other: &NatTrans) -> Result<NatTrans> {
        if other.tgt != self.src {
            return Err(Error::ShapeMismatch(
                "transformations not composable".into(),
            ));
        }
        let components = self
            .components
            .iter()
            .map(|(o, c)| Ok((o.clone(), c.compose(other.component(o)?)?)))
            .collect::<Result<_>>()?;
        Ok(NatTrans {
            src: other.src.clone(),
            tgt: self.tgt.clone(),
            components,
        })
    }

    /// Pointwise mono criterion; exact because the value category is finite
    /// sets (which has an initial object, so no connectivity hypothesis on
    /// the index is needed).
    pub fn is_mono(&self) -> bool {
        self.components.values().all(|c| c.is_injective())
    }

    pub fn is_iso(&self) -> bool {
        self.components.values().all(|c| c.is_bijective())
    }

    pub fn inverse(&self) -> Result<NatTrans> {
        let components = self
            .components
            .iter()
            .map(|(o, c)| Ok((o.clone(), c.inverse()?)))
            .collect::<Result<_>>()?;
        Ok(NatTrans {
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            components,
        })
    }
}

/// Checks shape agreement and all naturality squares.
pub fn validate_nat(t: &NatTrans) -> ValidationReport {
    let mut report = ValidationReport::default();
    if t.src.index != t.tgt.index {
        report.push(Violation::Other {
            detail: "source and target have different indexes".into(),
        });
        return report;
    }
    for o in t.src.index.objects() {
        match t.components.get(o) {
            None => report.push(Violation::Other {
                detail: format!("component at `{o}` missing"),
            }),
            Some(c) => {
                if c.src != t.src.sets[o] || c.tgt != t.tgt.sets[o] {
                    report.push(Violation::Other {
                        detail: format!("component at `{o}` has wrong endpoints"),
                    });
                }
            }
        }
    }
    if !report.is_clean() {
        return report;
    }
    for m in t.src.index.morphisms() {
        let lhs = t.components[&m.tgt].compose(&t.src.maps[&m.id]);
        let rhs = t.tgt.maps[&m.id].compose(&t.components[&m.src]);
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if l == r => {}
            _ => report.push(Violation::BrokenNaturality {
                morphism: m.id.clone(),
                detail: "square does not commute".into(),
            }),
        }
    }
    report
}

/// All natural transformations `X -> Y`, canonically ordered.
pub fn enumerate_nat_trans(x: &Diagram, y: &Diagram, cap: usize) -> Result<Vec<NatTrans>> {
    enumerate_nat_trans_where(x, y, cap, &|_, _, _| true)
}

/// All natural transformations `X -> Y` whose element images all satisfy
/// `admissible(object, element, image)` — slice conditions prune during the
/// search rather than after it. Backtracking assigns one element image at a
/// time, checking every naturality square whose other corner is fixed;
/// `cap` bounds the nodes visited.
pub fn enumerate_nat_trans_where(
    x: &Diagram,
    y: &Diagram,
    cap: usize,
    admissible: &dyn Fn(&str, &str, &str) -> bool,
) -> Result<Vec<NatTrans>> {
    if x.index != y.index {
        return Err(Error::ShapeMismatch("indexes differ".into()));
    }
    // small target components first: their assignments prune the wider
    // choices at the later objects through the naturality squares
    let mut obj_order: Vec<&String> = x.index.objects().iter().collect();
    obj_order.sort_by_key(|o| (y.sets[o.as_str()].len(), (*o).clone()));
    let mut slots: Vec<(String, String)> = Vec::new();
    for o in obj_order {
        for e in x.sets[o.as_str()].elements() {
            slots.push((o.clone(), e.clone()));
        }
    }

    struct Search<'s> {
        x: &'s Diagram,
        y: &'s Diagram,
        slots: &'s [(String, String)],
        admissible: &'s dyn Fn(&str, &str, &str) -> bool,
        visited: usize,
        cap: usize,
        out: Vec<BTreeMap<(String, String), String>>,
    }

    impl<'s> Search<'s> {
        fn consistent_at(
            &self,
            o: &str,
            e: &str,
            v: &str,
            assigned: &BTreeMap<(String, String), String>,
        ) -> Result<bool> {
            // the candidate itself counts as assigned, so endomorphism
            // squares landing back on the same slot are checked too
            let lookup = |oo: &str, ee: &str| -> Option<String> {
                if oo == o && ee == e {
                    Some(v.to_string())
                } else {
                    assigned.get(&(oo.to_string(), ee.to_string())).cloned()
                }
            };
            for m in self.x.index.morphisms() {
                if m.src == o {
                    let e2 = self.x.maps[&m.id].apply(e)?;
                    if let Some(v2) = lookup(&m.tgt, e2) {
                        if self.y.maps[&m.id].apply(v)? != v2 {
                            return Ok(false);
                        }
                    }
                }
                if m.tgt == o {
                    for e0 in self.x.sets[&m.src].elements() {
                        if self.x.maps[&m.id].apply(e0)? != e {
                            continue;
                        }
                        if let Some(v0) = lookup(&m.src, e0) {
                            if self.y.maps[&m.id].apply(&v0)? != v {
                                return Ok(false);
                            }
                        }
                    }
                }
            }
            Ok(true)
        }

        fn rec(
            &mut self,
            ix: usize,
            assigned: &mut BTreeMap<(String, String), String>,
        ) -> Result<()> {
            self.visited += 1;
            if self.visited > self.cap {
                return Err(Error::ExplosionLimit {
                    needed: self.visited as u128,
                    cap: self.cap,
                });
            }
            if ix == self.slots.len() {
                self.out.push(assigned.clone());
                return Ok(());
            }
            let (o, e) = &self.slots[ix];
            let candidates: Vec<String> = self.y.sets[o.as_str()].elements().to_vec();
            for v in candidates {
                if (self.admissible)(o, e, &v) && self.consistent_at(o, e, &v, assigned)? {
                    assigned.insert((o.clone(), e.clone()), v);
                    self.rec(ix + 1, assigned)?;
                    assigned.remove(&(o.clone(), e.clone()));
                }
            }
            Ok(())
        }
    }

    let mut search = Search {
        x,
        y,
        slots: &slots,
        admissible,
        visited: 0,
        cap,
        out: Vec::new(),
    };
    search.rec(0, &mut BTreeMap::new())?;
    let mut out = Vec::new();
    for assignment in search.out {
        let components = x
            .index
            .objects()
            .iter()
            .map(|o| {
                let table = x.sets[o]
                    .elements()
                    .iter()
                    .map(|e| (e.clone(), assignment[&(o.clone(), e.clone())].clone()))
                    .collect();
                Ok((
                    o.clone(),
                    FinSetMap::new(x.sets[o].clone(), y.sets[o].clone(), table)?,
                ))
            })
            .collect::<Result<_>>()?;
        out.push(NatTrans {
            src: x.clone(),
            tgt: y.clone(),
            components,
        });
    }
    out.sort();
    Ok(out)
}

/// Precomposition of a diagram with a functor into its index.
pub fn restrict_diagram(d: &Diagram, f: &FinFunctor) -> Result<Diagram> {
    if f.target != d.index {
        return Err(Error::ShapeMismatch(
            "functor does not target the index".into(),
        ));
    }
    let sets = f
        .source
        .objects()
        .iter()
        .map(|o| Ok((o.clone(), d.set(f.on_object(o)?)?.clone())))
        .collect::<Result<_>>()?;
    let maps = f
        .source
        .morphisms()
        .iter()
        .map(|m| Ok((m.id.clone(), d.map(f.on_morphism(&m.id)?)?.clone())))
        .collect::<Result<_>>()?;
    Ok(Diagram {
        index: f.source.clone(),
        sets,
        maps,
    })
}

/// Precomposition of a natural transformation with a functor.
pub fn restrict_nat(t: &NatTrans, f: &FinFunctor) -> Result<NatTrans> {
    let src = restrict_diagram(&t.src, f)?;
    let tgt = restrict_diagram(&t.tgt, f)?;
    let components = f
        .source
        .objects()
        .iter()
        .map(|o| Ok((o.clone(), t.component(f.on_object(o)?)?.clone())))
        .collect::<Result<_>>()?;
    Ok(NatTrans {
        src,
        tgt,
        components,
    })
}

/// The constant subobject classifier of a groupoid-indexed diagram
/// category: constant `{⊥, ⊤}` with constant truth.
pub fn omega_groupoid(g: &FinCategory) -> Result<ClassifierOf<DiagCat>> {
    for m in g.morphisms() {
        if !g.is_iso(&m.id) {
            return Err(Error::NotGroupoid(m.id.clone()));
        }
    }
    let omega = Diagram::constant(g, &FinSetObj::omega());
    let one = Diagram::terminal(g);
    let truth_component =
        FinSetMap::constant(&FinSetObj::terminal(), &FinSetObj::omega(), TRUE_TAG)?;
    let truth = NatTrans {
        src: one,
        tgt: omega.clone(),
        components: g
            .objects()
            .iter()
            .map(|o| (o.clone(), truth_component.clone()))
            .collect(),
    };
    Ok(Classifier { omega, truth })
}

/// Pointwise characteristic map for a mono between groupoid-indexed
/// diagrams; natural because characteristic maps are unique.
pub fn char_groupoid(g: &FinCategory, mono: &NatTrans) -> Result<NatTrans> {
    let cls = omega_groupoid(g)?;
    if !mono.is_mono() {
        return Err(Error::NotMono("component not injective".into()));
    }
    let components = mono
        .components
        .iter()
        .map(|(o, c)| Ok((o.clone(), FinSetCat.char_map(c, crate::DEFAULT_CAP)?)))
        .collect::<Result<_>>()?;
    Ok(NatTrans {
        src: mono.tgt.clone(),
        tgt: cls.omega,
        components,
    })
}

/// Groupoid-indexed dependent product: pointwise section spaces, with the
/// transport along `u: x -> y` given by section conjugation
/// `s ↦ C(u) ∘ s ∘ B(u)⁻¹` over the transported base point.
pub fn pi_groupoid(
    g: &FinCategory,
    h: &NatTrans,
    k: &NatTrans,
    cap: usize,
) -> Result<PiOf<DiagCat>> {
    for m in g.morphisms() {
        if !g.is_iso(&m.id) {
            return Err(Error::NotGroupoid(m.id.clone()));
        }
    }
    if k.tgt != h.src {
        return Err(Error::ShapeMismatch(
            "k must land in the domain of h".into(),
        ));
    }
    let b = &h.src;
    let a = &h.tgt;
    let c = &k.src;
    let mut pis: BTreeMap<String, PiOf<FinSetCat>> = BTreeMap::new();
    for o in g.objects() {
        pis.insert(o.clone(), pi_finset(h.component(o)?, k.component(o)?, cap)?);
    }
    let mut sets = BTreeMap::new();
    let mut proj_components = BTreeMap::new();
    for (o, pi) in &pis {
        sets.insert(o.clone(), pi.total.clone());
        proj_components.insert(o.clone(), pi.projection.clone());
    }
    let mut maps = BTreeMap::new();
    for m in g.morphisms() {
        let pi_src = &pis[&m.src];
        let pi_tgt = &pis[&m.tgt];
        let u_inv = g
            .inverse_of(&m.id)
            .ok_or_else(|| Error::NotGroupoid(m.id.clone()))?;
        let b_back = b.map(u_inv)?;
        let a_fwd = a.map(&m.id)?;
        let c_fwd = c.map(&m.id)?;
        let table = pi_src
            .total
            .elements()
            .iter()
            .map(|s| {
                let base = pi_src.projection.apply(s)?;
                let new_base = a_fwd.apply(base)?;
                let mut graph = BTreeMap::new();
                for b_new in h.component(&m.tgt)?.src.elements() {
                    if h.component(&m.tgt)?.apply(b_new)? != new_base {
                        continue;
                    }
                    let b_old = b_back.apply(b_new)?;
                    let pair = encode_pair(b_old, s);
                    let c_old = pi_src.counit.apply(&pair)?;
                    graph.insert(b_new.clone(), c_fwd.apply(c_old)?.to_string());
                }
                Ok((s.clone(), section_element(pi_tgt, new_base, &graph)?))
            })
            .collect::<Result<_>>()?;
        maps.insert(
            m.id.clone(),
            FinSetMap::new(pi_src.total.clone(), pi_tgt.total.clone(), table)?,
        );
    }
    let total = Diagram::new(g.clone(), sets, maps)?;
    let projection = NatTrans::new(total.clone(), a.clone(), proj_components)?;
    let handle = DiagCat::groupoid(g.clone())?;
    let counit_src = handle.pullback(h, &projection)?;
    // The pointwise pullback and the pointwise counit source coincide, so
    // the FinSet counits assemble directly.
    let counit_components = g
        .objects()
        .iter()
        .map(|o| Ok((o.clone(), pis[o].counit.clone())))
        .collect::<Result<_>>()?;
    let counit = NatTrans::new(counit_src.apex.clone(), c.clone(), counit_components)?;
    Ok(Pi {
        f: h.clone(),
        g: k.clone(),
        total,
        projection,
        counit,
        counit_src,
    })
}

/// Which classifier/product formers apply to the index.
#[derive(Debug, Clone, PartialEq, Eq)]
enum IndexKind {
    Groupoid,
    Inverse(InverseStructure),
    Bare,
}

/// `FinSet^I` as a logical-category handle. Limits are pointwise; the
/// classifier and dependent-product formers dispatch on the index: constant
/// formers for groupoids, degreewise induction for inverse structures, and
/// `MissingCapability`/`NotPowerful` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagCat {
    index: FinCategory,
    kind: IndexKind,
}

/// Builds the handle for `FinSet^I`, attaching formers according to whether
/// `I` is a groupoid or admits an inverse structure.
pub fn diagram_handle(index: &FinCategory) -> DiagCat {
    if index.is_groupoid() {
        return DiagCat {
            index: index.clone(),
            kind: IndexKind::Groupoid,
        };
    }
    match InverseStructure::infer(index) {
        Ok(inv) => DiagCat {
            index: index.clone(),
            kind: IndexKind::Inverse(inv),
        },
        Err(_) => DiagCat {
            index: index.clone(),
            kind: IndexKind::Bare,
        },
    }
}

impl DiagCat {
    pub fn groupoid(index: FinCategory) -> Result<DiagCat> {
        for m in index.morphisms() {
            if !index.is_iso(&m.id) {
                return Err(Error::NotGroupoid(m.id.clone()));
            }
        }
        Ok(DiagCat {
            index,
            kind: IndexKind::Groupoid,
        })
    }

    pub fn inverse(inv: InverseStructure) -> DiagCat {
        DiagCat {
            index: inv.category.clone(),
            kind: IndexKind::Inverse(inv),
        }
    }

    pub fn bare(index: FinCategory) -> DiagCat {
        DiagCat {
            index,
            kind: IndexKind::Bare,
        }
    }

    pub fn index(&self) -> &FinCategory {
        &self.index
    }

    fn check_diagram(&self, d: &Diagram) -> Result<()> {
        if d.index != self.index {
            return Err(Error::ShapeMismatch(
                "diagram over a different index".into(),
            ));
        }
        Ok(())
    }

    /// Pointwise binary former: combines two diagrams objectwise through a
    /// finite-set construction and induces the actions on canonical tags.
    fn pointwise_pullback(&self, f: &NatTrans, g: &NatTrans) -> Result<PullbackOf<Self>> {
        if f.tgt != g.tgt {
            return Err(Error::ShapeMismatch("cospan targets differ".into()));
        }
        let cat = FinSetCat;
        let mut data: BTreeMap<String, PullbackOf<FinSetCat>> = BTreeMap::new();
        for o in self.index.objects() {
            data.insert(o.clone(), cat.pullback(f.component(o)?, g.component(o)?)?);
        }
        let mut sets = BTreeMap::new();
        let mut left = BTreeMap::new();
        let mut right = BTreeMap::new();
        for (o, pb) in &data {
            sets.insert(o.clone(), pb.apex.clone());
            left.insert(o.clone(), pb.left.clone());
            right.insert(o.clone(), pb.right.clone());
        }
        let mut maps = BTreeMap::new();
        for m in self.index.morphisms() {
            let src_pb = &data[&m.src];
            let tgt_pb = &data[&m.tgt];
            let fx = f.src.map(&m.id)?;
            let gx = g.src.map(&m.id)?;
            let table = src_pb
                .apex
                .elements()
                .iter()
                .map(|pair| {
                    let x = src_pb.left.apply(pair)?;
                    let y = src_pb.right.apply(pair)?;
                    let tag = encode_pair(fx.apply(x)?, gx.apply(y)?);
                    if !tgt_pb.apex.contains(&tag) {
                        return Err(Error::Invalid("pullback action mistargeted".into()));
                    }
                    Ok((pair.clone(), tag))
                })
                .collect::<Result<_>>()?;
            maps.insert(
                m.id.clone(),
                FinSetMap::new(src_pb.apex.clone(), tgt_pb.apex.clone(), table)?,
            );
        }
        let apex = Diagram::new(self.index.clone(), sets, maps)?;
        Ok(PullbackOf::<Self> {
            left: NatTrans::new(apex.clone(), f.src.clone(), left)?,
            right: NatTrans::new(apex.clone(), g.src.clone(), right)?,
            apex,
            f: f.clone(),
            g: g.clone(),
        })
    }
}

impl LogicalCategory for DiagCat {
    type Obj = Diagram;
    type Mor = NatTrans;

    fn src(&self, m: &NatTrans) -> Diagram {
        m.src.clone()
    }

    fn tgt(&self, m: &NatTrans) -> Diagram {
        m.tgt.clone()
    }

    fn identity(&self, o: &Diagram) -> NatTrans {
        NatTrans::identity(o)
    }

    fn compose(&self, g: &NatTrans, f: &NatTrans) -> Result<NatTrans> {
        g.compose(f)
    }

    fn terminal(&self) -> Diagram {
        Diagram::terminal(&self.index)
    }

    fn bang(&self, o: &Diagram) -> NatTrans {
        let one = self.terminal();
        NatTrans {
            src: o.clone(),
            tgt: one.clone(),
            components: o
                .sets
                .iter()
                .map(|(k, s)| (k.clone(), FinSetCat.bang(s)))
                .collect(),
        }
    }

    fn hom(&self, a: &Diagram, b: &Diagram, cap: usize) -> Result<Vec<NatTrans>> {
        enumerate_nat_trans(a, b, cap)
    }

    fn is_mono(&self, m: &NatTrans) -> bool {
        m.is_mono()
    }

    fn invert(&self, m: &NatTrans) -> Result<NatTrans> {
        m.inverse()
    }

    fn product(&self, a: &Diagram, b: &Diagram) -> Result<ProductOf<Self>> {
        self.check_diagram(a)?;
        self.check_diagram(b)?;
        let one = self.terminal();
        let pb = self.pointwise_pullback(&self.bang(a), &self.bang(b))?;
        let _ = one;
        Ok(ProductOf::<Self> {
            apex: pb.apex,
            left: pb.left,
            right: pb.right,
        })
    }

    fn product_factor(&self, p: &ProductOf<Self>, l: &NatTrans, r: &NatTrans) -> Result<NatTrans> {
        if l.src != r.src {
            return Err(Error::ShapeMismatch(
                "cone legs with different domains".into(),
            ));
        }
        let components = self
            .index
            .objects()
            .iter()
            .map(|o| {
                let table = l
                    .src
                    .set(o)?
                    .elements()
                    .iter()
                    .map(|q| {
                        let tag = encode_pair(l.component(o)?.apply(q)?, r.component(o)?.apply(q)?);
                        if !p.apex.set(o)?.contains(&tag) {
                            return Err(Error::ShapeMismatch("cone outside the product".into()));
                        }
                        Ok((q.clone(), tag))
                    })
                    .collect::<Result<_>>()?;
                Ok((
                    o.clone(),
                    FinSetMap::new(l.src.set(o)?.clone(), p.apex.set(o)?.clone(), table)?,
                ))
            })
            .collect::<Result<_>>()?;
        NatTrans::new(l.src.clone(), p.apex.clone(), components)
    }

    fn equalizer(&self, f: &NatTrans, g: &NatTrans) -> Result<EqualizerOf<Self>> {
        if f.src != g.src || f.tgt != g.tgt {
            return Err(Error::ShapeMismatch("maps are not parallel".into()));
        }
        let cat = FinSetCat;
        let mut data: BTreeMap<String, EqualizerOf<FinSetCat>> = BTreeMap::new();
        for o in self.index.objects() {
            data.insert(o.clone(), cat.equalizer(f.component(o)?, g.component(o)?)?);
        }
        let mut sets = BTreeMap::new();
        let mut include = BTreeMap::new();
        for (o, eq) in &data {
            sets.insert(o.clone(), eq.apex.clone());
            include.insert(o.clone(), eq.include.clone());
        }
        let mut maps = BTreeMap::new();
        for m in self.index.morphisms() {
            let src_eq = &data[&m.src];
            let tgt_eq = &data[&m.tgt];
            let act = f.src.map(&m.id)?;
            let table = src_eq
                .apex
                .elements()
                .iter()
                .map(|x| {
                    let v = act.apply(x)?;
                    if !tgt_eq.apex.contains(v) {
                        return Err(Error::Invalid("equalizer action mistargeted".into()));
                    }
                    Ok((x.clone(), v.to_string()))
                })
                .collect::<Result<_>>()?;
            maps.insert(
                m.id.clone(),
                FinSetMap::new(src_eq.apex.clone(), tgt_eq.apex.clone(), table)?,
            );
        }
        let apex = Diagram::new(self.index.clone(), sets, maps)?;
        Ok(EqualizerOf::<Self> {
            include: NatTrans::new(apex.clone(), f.src.clone(), include)?,
            apex,
            f: f.clone(),
            g: g.clone(),
        })
    }

    fn equalizer_factor(&self, e: &EqualizerOf<Self>, cone: &NatTrans) -> Result<NatTrans> {
        let components = self
            .index
            .objects()
            .iter()
            .map(|o| {
                let table = cone
                    .src
                    .set(o)?
                    .elements()
                    .iter()
                    .map(|q| {
                        let v = cone.component(o)?.apply(q)?;
                        if !e.apex.set(o)?.contains(v) {
                            return Err(Error::ShapeMismatch(
                                "cone component does not equalize".into(),
                            ));
                        }
                        Ok((q.clone(), v.to_string()))
                    })
                    .collect::<Result<_>>()?;
                Ok((
                    o.clone(),
                    FinSetMap::new(cone.src.set(o)?.clone(), e.apex.set(o)?.clone(), table)?,
                ))
            })
            .collect::<Result<_>>()?;
        NatTrans::new(cone.src.clone(), e.apex.clone(), components)
    }

    fn pullback(&self, f: &NatTrans, g: &NatTrans) -> Result<PullbackOf<Self>> {
        self.pointwise_pullback(f, g)
    }

    fn pullback_factor(
        &self,
        p: &PullbackOf<Self>,
        l: &NatTrans,
        r: &NatTrans,
    ) -> Result<NatTrans> {
        if l.src != r.src {
            return Err(Error::ShapeMismatch(
                "cone legs with different domains".into(),
            ));
        }
        let components = self
            .index
            .objects()
            .iter()
            .map(|o| {
                let table = l
                    .src
                    .set(o)?
                    .elements()
                    .iter()
                    .map(|q| {
                        let tag = encode_pair(l.component(o)?.apply(q)?, r.component(o)?.apply(q)?);
                        if !p.apex.set(o)?.contains(&tag) {
                            return Err(Error::ShapeMismatch(
                                "cone does not commute with the cospan".into(),
                            ));
                        }
                        Ok((q.clone(), tag))
                    })
                    .collect::<Result<_>>()?;
                Ok((
                    o.clone(),
                    FinSetMap::new(l.src.set(o)?.clone(), p.apex.set(o)?.clone(), table)?,
                ))
            })
            .collect::<Result<_>>()?;
        NatTrans::new(l.src.clone(), p.apex.clone(), components)
    }

    fn omega(&self, cap: usize) -> Result<ClassifierOf<Self>> {
        match &self.kind {
            IndexKind::Groupoid => omega_groupoid(&self.index),
            IndexKind::Inverse(inv) => matching::omega_inverse(inv, cap),
            IndexKind::Bare => Err(Error::MissingCapability(
                "classifier former needs a groupoid or inverse index",
            )),
        }
    }

    fn char_map(&self, mono: &NatTrans, cap: usize) -> Result<NatTrans> {
        match &self.kind {
            IndexKind::Groupoid => char_groupoid(&self.index, mono),
            IndexKind::Inverse(inv) => matching::char_inverse(inv, mono, cap),
            IndexKind::Bare => Err(Error::MissingCapability(
                "characteristic former needs a groupoid or inverse index",
            )),
        }
    }

    fn pi(&self, f: &NatTrans, g: &NatTrans, cap: usize) -> Result<PiOf<Self>> {
        match &self.kind {
            IndexKind::Groupoid => pi_groupoid(&self.index, f, g, cap),
            IndexKind::Inverse(inv) => matching::pi_inverse(inv, f, g, cap),
            IndexKind::Bare => Err(Error::NotPowerful(
                "no dependent-product former for this index".into(),
            )),
        }
    }

    fn pi_sharp(&self, pi: &PiOf<Self>, d_over_a: &NatTrans, s: &NatTrans) -> Result<NatTrans> {
        match &self.kind {
            IndexKind::Groupoid => {
                // pointwise transposes assemble to a natural transformation
                let q = self.pullback(&pi.f, d_over_a)?;
                if s.src != q.apex {
                    return Err(Error::SliceMismatch(
                        "transpose argument is not on the canonical pullback".into(),
                    ));
                }
                let components = self
                    .index
                    .objects()
                    .iter()
                    .map(|o| {
                        let pi_o =
                            pi_finset(pi.f.component(o)?, pi.g.component(o)?, crate::DEFAULT_CAP)?;
                        let u = crate::logicat::transpose_sharp_finset(
                            &pi_o,
                            d_over_a.component(o)?,
                            s.component(o)?,
                        )?;
                        Ok((o.clone(), u))
                    })
                    .collect::<Result<_>>()?;
                NatTrans::new(d_over_a.src.clone(), pi.total.clone(), components)
            }
            IndexKind::Inverse(inv) => {
                matching::sharp_inverse(inv, pi, d_over_a, s, crate::DEFAULT_CAP)
            }
            IndexKind::Bare => Err(Error::NotPowerful("no transpose for this index".into())),
        }
    }
}
