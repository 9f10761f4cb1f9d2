//! Matching objects and maps, coskeleta, the equivalence between diagrams
//! on a truncation and glued objects over the matching functor, and the
//! degreewise induction that builds the classifier and dependent product
//! over a generalized inverse category.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::diagcat::{restrict_diagram, restrict_nat, DiagCat, Diagram, NatTrans};
use crate::encode::encode_pair;
use crate::error::{Error, Result};
use crate::fincat::{
    strict_coslice, truncate_structure, truncation, Coslice, FinFunctor, InverseStructure,
};
use crate::gluing::{GlMorOf, GlObj, GlObjOf, LexFunctor};
use crate::logicat::{
    limit, pi_finset, section_element, Classifier, FinSetCat, FinSetMap, FinSetObj, LimitResult,
    LogicalCategory, Pi, PiOf, PullbackOf, FALSE_TAG, TRUE_TAG,
};

/// The matching object of a diagram at one index object: the limit over the
/// strictly-degree-lowering coslice, its legs (keyed by the lowering
/// morphism), and, when the diagram carries the level itself, the matching
/// map into it.
#[derive(Debug, Clone)]
pub struct MatchingResult {
    pub coslice: Coslice,
    pub limit: LimitResult,
    pub matching_map: Option<FinSetMap>,
}

impl MatchingResult {
    pub fn object(&self) -> &FinSetObj {
        &self.limit.apex
    }

    /// The projection onto the component at a lowering morphism.
    pub fn leg(&self, f: &str) -> Result<&FinSetMap> {
        self.limit
            .legs
            .get(f)
            .ok_or_else(|| Error::UnknownMorphism(f.to_string()))
    }
}

/// `M_i X`: the limit of `X` over `I^-(i)`. `X` must be defined on every
/// object strictly below `deg i`; if it also has the level at `i`, the
/// matching map `X_i -> M_i X` is included.
pub fn matching_object(
    inv: &InverseStructure,
    x: &Diagram,
    i: &str,
    cap: usize,
) -> Result<MatchingResult> {
    let coslice = strict_coslice(inv, i)?;
    let mut sets = BTreeMap::new();
    for f in coslice.category.objects() {
        sets.insert(f.clone(), x.set(&coslice.codomain_of[f])?.clone());
    }
    let mut maps = BTreeMap::new();
    for m in coslice.category.morphisms() {
        maps.insert(m.id.clone(), x.map(&coslice.witness_of[&m.id])?.clone());
    }
    let lim = limit(&coslice.category, &sets, &maps, cap)?;
    let matching_map = if x.sets.contains_key(i)
        && coslice
            .category
            .objects()
            .iter()
            .all(|f| x.maps.contains_key(f))
    {
        let xi = x.set(i)?;
        let table = xi
            .elements()
            .iter()
            .map(|e| {
                let comps = coslice
                    .category
                    .objects()
                    .iter()
                    .map(|f| Ok((f.clone(), x.map(f)?.apply(e)?.to_string())))
                    .collect::<Result<_>>()?;
                Ok((e.clone(), lim.element_from_components(&comps)?))
            })
            .collect::<Result<_>>()?;
        Some(FinSetMap::new(xi.clone(), lim.apex.clone(), table)?)
    } else {
        None
    };
    Ok(MatchingResult {
        coslice,
        limit: lim,
        matching_map,
    })
}

/// The induced map `M_i X -> M_i Y` of a family of component maps.
pub fn matching_induced(
    m_src: &MatchingResult,
    m_tgt: &MatchingResult,
    component: &dyn Fn(&str) -> Result<FinSetMap>,
) -> Result<FinSetMap> {
    let table = m_src
        .object()
        .elements()
        .iter()
        .map(|e| {
            let comps = m_src
                .coslice
                .category
                .objects()
                .iter()
                .map(|f| {
                    let j = &m_src.coslice.codomain_of[f];
                    let v = component(j)?.apply(m_src.leg(f)?.apply(e)?)?.to_string();
                    Ok((f.clone(), v))
                })
                .collect::<Result<_>>()?;
            Ok((e.clone(), m_tgt.limit.element_from_components(&comps)?))
        })
        .collect::<Result<_>>()?;
    FinSetMap::new(m_src.object().clone(), m_tgt.object().clone(), table)
}

/// Reindexing `M_i X -> M_{i'} X` along an in-stratum isomorphism
/// `u: i -> i'`: the component at `f': i' -> j` is the `f'∘u`-component.
pub fn matching_reindex(
    inv: &InverseStructure,
    u: &str,
    m_i: &MatchingResult,
    m_i2: &MatchingResult,
) -> Result<FinSetMap> {
    let table = m_i
        .object()
        .elements()
        .iter()
        .map(|e| {
            let comps = m_i2
                .coslice
                .category
                .objects()
                .iter()
                .map(|f2| {
                    let back = inv.category.compose(f2, u)?;
                    Ok((f2.clone(), m_i.leg(back)?.apply(e)?.to_string()))
                })
                .collect::<Result<_>>()?;
            Ok((e.clone(), m_i2.limit.element_from_components(&comps)?))
        })
        .collect::<Result<_>>()?;
    FinSetMap::new(m_i.object().clone(), m_i2.object().clone(), table)
}

fn partial_diagram(
    inv: &InverseStructure,
    n: u32,
    sets: &BTreeMap<String, FinSetObj>,
    maps: &BTreeMap<String, FinSetMap>,
) -> Result<Diagram> {
    let index = truncation(inv, n, true)?;
    let sub_sets = index
        .objects()
        .iter()
        .map(|o| {
            Ok((
                o.clone(),
                sets.get(o)
                    .cloned()
                    .ok_or_else(|| Error::UnknownObject(o.clone()))?,
            ))
        })
        .collect::<Result<_>>()?;
    let sub_maps = index
        .morphisms()
        .iter()
        .map(|m| {
            Ok((
                m.id.clone(),
                maps.get(&m.id)
                    .cloned()
                    .ok_or_else(|| Error::UnknownMorphism(m.id.clone()))?,
            ))
        })
        .collect::<Result<_>>()?;
    Diagram::new(index, sub_sets, sub_maps)
}

/// `cosk_n`: extends a diagram on `I_{<n}` to `I_{≤n}` by matching objects,
/// with legs as the new lowering actions and reindexing as the stratum
/// action.
pub fn coskeleton(
    inv: &InverseStructure,
    x_below: &Diagram,
    n: u32,
    cap: usize,
) -> Result<Diagram> {
    let below = truncation(inv, n, true)?;
    if x_below.index != below {
        return Err(Error::ShapeMismatch(
            "diagram is not on the strict truncation".into(),
        ));
    }
    let upto = truncation(inv, n, false)?;
    let mut matchings: BTreeMap<String, MatchingResult> = BTreeMap::new();
    for i in upto.objects() {
        if inv.degree(i)? == n {
            matchings.insert(i.clone(), matching_object(inv, x_below, i, cap)?);
        }
    }
    let mut sets = x_below.sets.clone();
    for (i, m) in &matchings {
        sets.insert(i.clone(), m.object().clone());
    }
    let mut maps = x_below.maps.clone();
    for m in upto.morphisms() {
        if maps.contains_key(&m.id) {
            continue;
        }
        let deg_src = inv.degree(&m.src)?;
        let deg_tgt = inv.degree(&m.tgt)?;
        if deg_src == n && deg_tgt < n {
            maps.insert(m.id.clone(), matchings[&m.src].leg(&m.id)?.clone());
        } else if deg_src == n && deg_tgt == n {
            if upto.is_identity(&m.id) {
                maps.insert(
                    m.id.clone(),
                    FinSetMap::identity(matchings[&m.src].object()),
                );
            } else {
                maps.insert(
                    m.id.clone(),
                    matching_reindex(inv, &m.id, &matchings[&m.src], &matchings[&m.tgt])?,
                );
            }
        }
    }
    Diagram::new(upto, sets, maps)
}

// ---------------------------------------------------------------------------
// The matching functor and the gluing equivalence
// ---------------------------------------------------------------------------

/// `M_n : FinSet^{I_{<n}} -> FinSet^{G_n(I)}` as a lex functor.
pub struct MatchingFunctor {
    inv: InverseStructure,
    dom: DiagCat,
    cod: DiagCat,
    cap: usize,
}

impl MatchingFunctor {
    pub fn new(inv: &InverseStructure, n: u32, cap: usize) -> Result<Self> {
        let below = truncate_structure(inv, n, true)?;
        let stratum_cat = crate::fincat::stratum(inv, n)?;
        Ok(MatchingFunctor {
            inv: inv.clone(),
            dom: DiagCat::inverse(below),
            cod: DiagCat::groupoid(stratum_cat)?,
            cap,
        })
    }

    pub fn stratum_objects(&self) -> Vec<String> {
        self.cod.index().objects().to_vec()
    }
}

impl LexFunctor for MatchingFunctor {
    type Dom = DiagCat;
    type Cod = DiagCat;

    fn dom(&self) -> &DiagCat {
        &self.dom
    }

    fn cod(&self) -> &DiagCat {
        &self.cod
    }

    fn on_obj(&self, x: &Diagram) -> Result<Diagram> {
        if x.index != *self.dom.index() {
            return Err(Error::ShapeMismatch("diagram not on the truncation".into()));
        }
        let stratum_cat = self.cod.index();
        let mut matchings: BTreeMap<String, MatchingResult> = BTreeMap::new();
        for i in stratum_cat.objects() {
            matchings.insert(i.clone(), matching_object(&self.inv, x, i, self.cap)?);
        }
        let mut sets = BTreeMap::new();
        for (i, m) in &matchings {
            sets.insert(i.clone(), m.object().clone());
        }
        let mut maps = BTreeMap::new();
        for m in stratum_cat.morphisms() {
            if stratum_cat.is_identity(&m.id) {
                maps.insert(
                    m.id.clone(),
                    FinSetMap::identity(matchings[&m.src].object()),
                );
            } else {
                maps.insert(
                    m.id.clone(),
                    matching_reindex(&self.inv, &m.id, &matchings[&m.src], &matchings[&m.tgt])?,
                );
            }
        }
        Diagram::new(stratum_cat.clone(), sets, maps)
    }

    fn on_mor(&self, t: &NatTrans) -> Result<NatTrans> {
        let src = self.on_obj(&t.src)?;
        let tgt = self.on_obj(&t.tgt)?;
        let components = self
            .cod
            .index()
            .objects()
            .iter()
            .map(|i| {
                let m_src = matching_object(&self.inv, &t.src, i, self.cap)?;
                let m_tgt = matching_object(&self.inv, &t.tgt, i, self.cap)?;
                let induced = matching_induced(&m_src, &m_tgt, &|j| Ok(t.component(j)?.clone()))?;
                Ok((i.clone(), induced))
            })
            .collect::<Result<_>>()?;
        NatTrans::new(src, tgt, components)
    }
}

/// One gluing level: the matching functor at degree `n` together with the
/// two translators of the equivalence `FinSet^{I_{≤n}} ≃ Gl(M_n)`.
pub struct GlueInstance {
    pub inv: InverseStructure,
    pub n: u32,
    pub functor: MatchingFunctor,
    cap: usize,
}

pub fn glue_equivalence(inv: &InverseStructure, n: u32, cap: usize) -> Result<GlueInstance> {
    Ok(GlueInstance {
        inv: inv.clone(),
        n,
        functor: MatchingFunctor::new(inv, n, cap)?,
        cap,
    })
}

impl GlueInstance {
    /// Sends `X` on `I_{≤n}` to `(X|_{=n}, X|_{<n}, matching map)`.
    pub fn to_glued(&self, x: &Diagram) -> Result<GlObjOf<MatchingFunctor>> {
        let upto = truncation(&self.inv, self.n, false)?;
        if x.index != upto {
            return Err(Error::ShapeMismatch(
                "diagram is not on the truncation".into(),
            ));
        }
        let below_incl = FinFunctor::inclusion(self.functor.dom().index(), &upto);
        let stratum_incl = FinFunctor::inclusion(self.functor.cod().index(), &upto);
        let shadow = restrict_diagram(x, &below_incl)?;
        let apex = restrict_diagram(x, &stratum_incl)?;
        let m_shadow = self.functor.on_obj(&shadow)?;
        let components = self
            .functor
            .cod()
            .index()
            .objects()
            .iter()
            .map(|i| {
                let m = matching_object(&self.inv, x, i, self.cap)?;
                let mm = m
                    .matching_map
                    .clone()
                    .ok_or_else(|| Error::ShapeMismatch(format!("no matching map at `{i}`")))?;
                Ok((i.clone(), mm))
            })
            .collect::<Result<_>>()?;
        let structure = NatTrans::new(apex.clone(), m_shadow, components)?;
        Ok(GlObj {
            apex,
            shadow,
            structure,
        })
    }

    /// Extends `(X_{=n}, X_{<n}, X_{=n} -> M_n X_{<n})` to the unique
    /// diagram on `I_{≤n}` with those restrictions.
    pub fn from_glued(&self, g: &GlObjOf<MatchingFunctor>) -> Result<Diagram> {
        let upto = truncation(&self.inv, self.n, false)?;
        let mut sets = g.shadow.sets.clone();
        for (i, s) in &g.apex.sets {
            sets.insert(i.clone(), s.clone());
        }
        let mut maps = g.shadow.maps.clone();
        for (m, t) in &g.apex.maps {
            maps.insert(m.clone(), t.clone());
        }
        for m in upto.morphisms() {
            if maps.contains_key(&m.id) {
                continue;
            }
            // lowering map out of the new stratum: structure then leg
            let mr = matching_object(&self.inv, &g.shadow, &m.src, self.cap)?;
            let leg = mr.leg(&m.id)?;
            maps.insert(m.id.clone(), leg.compose(g.structure.component(&m.src)?)?);
        }
        Diagram::new(upto, sets, maps)
    }

    /// Translates a map of diagrams on `I_{≤n}` into a glued morphism.
    pub fn mor_to_glued(&self, t: &NatTrans) -> Result<GlMorOf<MatchingFunctor>> {
        let src = self.to_glued(&t.src)?;
        let tgt = self.to_glued(&t.tgt)?;
        let upto = truncation(&self.inv, self.n, false)?;
        let below_incl = FinFunctor::inclusion(self.functor.dom().index(), &upto);
        let stratum_incl = FinFunctor::inclusion(self.functor.cod().index(), &upto);
        let shadow_map = restrict_nat(t, &below_incl)?;
        let apex_map = restrict_nat(t, &stratum_incl)?;
        Ok(crate::gluing::GlMor {
            src,
            tgt,
            apex_map,
            shadow_map,
        })
    }
}

// ---------------------------------------------------------------------------
// Classifier by degreewise induction
// ---------------------------------------------------------------------------

/// Per-object data the classifier induction produces.
pub struct OmegaLevel {
    /// Matching of the partial classifier at this object.
    pub matching: MatchingResult,
    /// The canonical element `M_i(true)` of `M_i Ω`.
    pub true_tuple: String,
}

/// `omega_inverse` plus its per-object internals.
pub fn omega_inverse_parts(
    inv: &InverseStructure,
    cap: usize,
) -> Result<(Classifier<Diagram, NatTrans>, BTreeMap<String, OmegaLevel>)> {
    let cat = &inv.category;
    let _omega_e = FinSetObj::omega();
    let mut sets: BTreeMap<String, FinSetObj> = BTreeMap::new();
    let mut maps: BTreeMap<String, FinSetMap> = BTreeMap::new();
    let mut truth_components: BTreeMap<String, FinSetMap> = BTreeMap::new();
    let mut levels: BTreeMap<String, OmegaLevel> = BTreeMap::new();

    for n in inv.degrees() {
        let partial = partial_diagram(inv, n, &sets, &maps)?;
        // components at every degree-n object
        for i in cat.objects() {
            if inv.degree(i)? != n {
                continue;
            }
            let mr = matching_object(inv, &partial, i, cap)?;
            let true_comps = mr
                .coslice
                .category
                .objects()
                .iter()
                .map(|f| {
                    let j = &mr.coslice.codomain_of[f];
                    Ok((f.clone(), truth_components[j].apply("*")?.to_string()))
                })
                .collect::<Result<BTreeMap<_, _>>>()?;
            let true_tuple = mr.limit.element_from_components(&true_comps)?;
            // Ω_i: pairs (b, s) with b = b ∧ χ_{M_i(true)}(s)
            let mut elems = Vec::new();
            for s in mr.object().elements() {
                elems.push(encode_pair(FALSE_TAG, s));
            }
            elems.push(encode_pair(TRUE_TAG, &true_tuple));
            sets.insert(i.clone(), FinSetObj::new(elems)?);
            truth_components.insert(
                i.clone(),
                FinSetMap::constant(
                    &FinSetObj::terminal(),
                    &sets[i],
                    &encode_pair(TRUE_TAG, &true_tuple),
                )?,
            );
            levels.insert(
                i.clone(),
                OmegaLevel {
                    matching: mr,
                    true_tuple,
                },
            );
        }
        // actions of all morphisms whose source has degree n
        for m in cat.morphisms() {
            if inv.degree(&m.src)? != n || maps.contains_key(&m.id) {
                continue;
            }
            let src_set = &sets[&m.src];
            if cat.is_identity(&m.id) {
                maps.insert(m.id.clone(), FinSetMap::identity(src_set));
                continue;
            }
            let level = &levels[&m.src];
            if inv.degree(&m.tgt)? < n {
                // lowering: project the matching tuple at this morphism
                let table = src_set
                    .elements()
                    .iter()
                    .map(|e| {
                        let s = split_pair_second(e);
                        Ok((e.clone(), level.matching.leg(&m.id)?.apply(&s)?.to_string()))
                    })
                    .collect::<Result<_>>()?;
                maps.insert(
                    m.id.clone(),
                    FinSetMap::new(src_set.clone(), sets[&m.tgt].clone(), table)?,
                );
            } else {
                // in-stratum isomorphism: reindex the matching tuple
                let tgt_level = &levels[&m.tgt];
                let reindex = matching_reindex(inv, &m.id, &level.matching, &tgt_level.matching)?;
                let table = src_set
                    .elements()
                    .iter()
                    .map(|e| {
                        let b = split_pair_first(e);
                        let s = split_pair_second(e);
                        Ok((e.clone(), encode_pair(&b, reindex.apply(&s)?)))
                    })
                    .collect::<Result<_>>()?;
                maps.insert(
                    m.id.clone(),
                    FinSetMap::new(src_set.clone(), sets[&m.tgt].clone(), table)?,
                );
            }
        }
    }
    let omega = Diagram::new(cat.clone(), sets, maps)?;
    let one = Diagram::terminal(cat);
    let truth = NatTrans::new(one, omega.clone(), truth_components)?;
    Ok((Classifier { omega, truth }, levels))
}

fn split_pair_first(tag: &str) -> String {
    crate::encode::decode_tuple(tag)[0].clone()
}

fn split_pair_second(tag: &str) -> String {
    crate::encode::decode_tuple(tag)[1].clone()
}

/// The subobject classifier of `FinSet^I` for a generalized inverse `I`:
/// ascending-degree induction, with the component at `i` the equalizer of
/// `π₁` and `∧ ∘ (id × χ_{M_i(true)})` on `Ω × M_i Ω`.
pub fn omega_inverse(inv: &InverseStructure, cap: usize) -> Result<Classifier<Diagram, NatTrans>> {
    Ok(omega_inverse_parts(inv, cap)?.0)
}

/// The characteristic map of a pointwise mono, built by the same induction:
/// the component at `i` pairs the finite-set characteristic map with the
/// matching image of the lower components.
pub fn char_inverse(inv: &InverseStructure, mono: &NatTrans, cap: usize) -> Result<NatTrans> {
    if !mono.is_mono() {
        return Err(Error::NotMono("component not injective".into()));
    }
    let (cls, levels) = omega_inverse_parts(inv, cap)?;
    let g = &mono.tgt;
    let mut components: BTreeMap<String, FinSetMap> = BTreeMap::new();
    let mut objs: Vec<&String> = inv.category.objects().iter().collect();
    objs.sort_by_key(|o| (inv.deg[*o], (*o).clone()));
    for i in objs {
        let chi_i = FinSetCat.char_map(mono.component(i)?, cap)?;
        let m_g = matching_object(inv, g, i, cap)?;
        let level = &levels[i];
        let m_chi = matching_induced(&m_g, &level.matching, &|j| {
            components
                .get(j)
                .cloned()
                .ok_or_else(|| Error::UnknownObject(j.to_string()))
        })?;
        let m_ig = m_g
            .matching_map
            .as_ref()
            .ok_or_else(|| Error::ShapeMismatch("target diagram misses a level".into()))?;
        let table = g
            .set(i)?
            .elements()
            .iter()
            .map(|x| {
                let tag = encode_pair(chi_i.apply(x)?, m_chi.apply(m_ig.apply(x)?)?);
                if !cls.omega.set(i)?.contains(&tag) {
                    return Err(Error::ClassifierViolation(format!(
                        "characteristic pair escapes the classifier at `{i}`"
                    )));
                }
                Ok((x.clone(), tag))
            })
            .collect::<Result<_>>()?;
        components.insert(
            i.clone(),
            FinSetMap::new(g.set(i)?.clone(), cls.omega.set(i)?.clone(), table)?,
        );
    }
    NatTrans::new(g.clone(), cls.omega, components)
}

// ---------------------------------------------------------------------------
// Dependent product by degreewise induction
// ---------------------------------------------------------------------------

/// Per-object data the product induction produces, enough to reconstruct
/// every canonical tag involved and to compare against the homotopical
/// construction face by face.
pub struct PiLevel {
    /// Sections at the object itself.
    pub pi_i: PiOf<FinSetCat>,
    /// Matchings of the three diagrams and of the partial product.
    pub m_a: MatchingResult,
    pub m_b: MatchingResult,
    pub m_c: MatchingResult,
    pub m_pi: MatchingResult,
    /// `M_i f` and `M_i g`.
    pub m_if: FinSetMap,
    pub m_ig: FinSetMap,
    /// `Π_{M_iB} M_iC`.
    pub pi_m: PiOf<FinSetCat>,
    /// `M_i(ev)‡ : M_i Π -> Π_{M_iB} M_iC`.
    pub m_ev_sharp: FinSetMap,
    /// `A_i ×_{M_i A} M_i Π` with legs to `A_i` and `M_i Π`.
    pub pb1: PullbackOf<FinSetCat>,
    /// `A_i ×_{M_i A} Π_{M_iB} M_iC`.
    pub pb2: PullbackOf<FinSetCat>,
    /// `pb1 -> pb2`.
    pub step1: FinSetMap,
    /// `B_i ×_{M_iB} M_iC`.
    pub pbz: PullbackOf<FinSetCat>,
    /// `Π_{Bi}(B_i ×_{M_iB} M_iC)`.
    pub pi_bz: PiOf<FinSetCat>,
    /// `(f_i ×_{M_iB} ev)‡ : pb2 -> Π_{Bi}(B_i ×_{M_iB} M_iC)`.
    pub step2: FinSetMap,
    /// `Π_{Bi}(g_i, m_i C)`.
    pub post: FinSetMap,
    /// Π_i tag -> section tag.
    pub s_of: BTreeMap<String, String>,
    /// Π_i tag -> matching tag in `M_i Π`.
    pub m_of: BTreeMap<String, String>,
    /// Π_i tag -> base point in `A_i`.
    pub a_of: BTreeMap<String, String>,
}

/// `pi_inverse` plus its per-object internals.
pub fn pi_inverse_parts(
    inv: &InverseStructure,
    f: &NatTrans,
    g: &NatTrans,
    cap: usize,
) -> Result<(PiOf<DiagCat>, BTreeMap<String, PiLevel>)> {
    if g.tgt != f.src {
        return Err(Error::ShapeMismatch(
            "g must land in the domain of f".into(),
        ));
    }
    let cat = &inv.category;
    let a = &f.tgt;
    let b = &f.src;
    let c = &g.src;
    let mut sets: BTreeMap<String, FinSetObj> = BTreeMap::new();
    let mut maps: BTreeMap<String, FinSetMap> = BTreeMap::new();
    let mut proj_components: BTreeMap<String, FinSetMap> = BTreeMap::new();
    let mut counit_components: BTreeMap<String, FinSetMap> = BTreeMap::new();
    let mut levels: BTreeMap<String, PiLevel> = BTreeMap::new();

    for n in inv.degrees() {
        let partial = partial_diagram(inv, n, &sets, &maps)?;
        for i in cat.objects() {
            if inv.degree(i)? != n {
                continue;
            }
            let level = pi_level(
                inv,
                f,
                g,
                &partial,
                &proj_components,
                &counit_components,
                i,
                cap,
            )?;
            let mut elems: Vec<String> = level.s_of.keys().cloned().collect();
            elems.sort();
            sets.insert(i.clone(), FinSetObj::new(elems)?);
            let proj = FinSetMap::new(
                sets[i].clone(),
                a.set(i)?.clone(),
                level.a_of.clone().into_iter().collect(),
            )?;
            proj_components.insert(i.clone(), proj);
            // counit at i: on the pointwise pullback B_i ×_{A_i} Π_i
            let pb = FinSetCat.pullback(f.component(i)?, &proj_components[i])?;
            let counit_table = pb
                .apex
                .elements()
                .iter()
                .map(|pair| {
                    let b_elt = pb.left.apply(pair)?;
                    let pi_elt = pb.right.apply(pair)?;
                    let s = &level.s_of[pi_elt];
                    let v = level.pi_i.counit.apply(&encode_pair(b_elt, s))?;
                    Ok((pair.clone(), v.to_string()))
                })
                .collect::<Result<_>>()?;
            counit_components.insert(
                i.clone(),
                FinSetMap::new(pb.apex.clone(), c.set(i)?.clone(), counit_table)?,
            );
            levels.insert(i.clone(), level);
        }
        // actions out of degree-n objects
        for m in cat.morphisms() {
            if inv.degree(&m.src)? != n || maps.contains_key(&m.id) {
                continue;
            }
            let src_set = sets[&m.src].clone();
            if cat.is_identity(&m.id) {
                maps.insert(m.id.clone(), FinSetMap::identity(&src_set));
                continue;
            }
            let level = &levels[&m.src];
            if inv.degree(&m.tgt)? < n {
                let table = src_set
                    .elements()
                    .iter()
                    .map(|e| {
                        let mtag = &level.m_of[e];
                        Ok((e.clone(), level.m_pi.leg(&m.id)?.apply(mtag)?.to_string()))
                    })
                    .collect::<Result<_>>()?;
                maps.insert(
                    m.id.clone(),
                    FinSetMap::new(src_set, sets[&m.tgt].clone(), table)?,
                );
            } else {
                // in-stratum isomorphism: conjugate the section, reindex the
                // matching tuple, transport the base point
                let tgt_level = &levels[&m.tgt];
                let u_inv = cat
                    .inverse_of(&m.id)
                    .ok_or_else(|| Error::NotGroupoid(m.id.clone()))?;
                let reindex = matching_reindex(inv, &m.id, &level.m_pi, &tgt_level.m_pi)?;
                let a_fwd = a.map(&m.id)?;
                let b_back = b.map(u_inv)?;
                let c_fwd = c.map(&m.id)?;
                let f_tgt = f.component(&m.tgt)?;
                let table = src_set
                    .elements()
                    .iter()
                    .map(|e| {
                        let base = a_fwd.apply(&level.a_of[e])?.to_string();
                        let mtag = reindex.apply(&level.m_of[e])?.to_string();
                        let s = &level.s_of[e];
                        let mut graph = BTreeMap::new();
                        for b_new in f_tgt.src.elements() {
                            if f_tgt.apply(b_new)? != base {
                                continue;
                            }
                            let b_old = b_back.apply(b_new)?;
                            let c_old = level.pi_i.counit.apply(&encode_pair(b_old, s))?;
                            graph.insert(b_new.clone(), c_fwd.apply(c_old)?.to_string());
                        }
                        let s_new = section_element(&tgt_level.pi_i, &base, &graph)?;
                        let pb1_tag = encode_pair(&base, &mtag);
                        let tag = encode_pair(&s_new, &pb1_tag);
                        if !tgt_level.s_of.contains_key(&tag) {
                            return Err(Error::Invalid(format!(
                                "stratum transport escapes the product at `{}`",
                                m.tgt
                            )));
                        }
                        Ok((e.clone(), tag))
                    })
                    .collect::<Result<_>>()?;
                maps.insert(
                    m.id.clone(),
                    FinSetMap::new(src_set, sets[&m.tgt].clone(), table)?,
                );
            }
        }
    }
    let total = Diagram::new(cat.clone(), sets, maps)?;
    let projection = NatTrans::new(total.clone(), a.clone(), proj_components)?;
    let handle = DiagCat::inverse(inv.clone());
    let counit_src = handle.pullback(f, &projection)?;
    let counit = NatTrans::new(counit_src.apex.clone(), c.clone(), counit_components)?;
    Ok((
        Pi {
            f: f.clone(),
            g: g.clone(),
            total,
            projection,
            counit,
            counit_src,
        },
        levels,
    ))
}

/// Builds the component of the product at one object: the pullback of
/// `Π_{Bi}(g_i, m_i C)` along `(f_i ×_{M_iB} ev)‡ ∘ (A_i ×_{M_iA} M_i(ev)‡)`.
#[allow(clippy::too_many_arguments)]
fn pi_level(
    inv: &InverseStructure,
    f: &NatTrans,
    g: &NatTrans,
    partial_pi: &Diagram,
    proj_components: &BTreeMap<String, FinSetMap>,
    counit_components: &BTreeMap<String, FinSetMap>,
    i: &str,
    cap: usize,
) -> Result<PiLevel> {
    let cat = FinSetCat;
    let a = &f.tgt;
    let b = &f.src;
    let c = &g.src;
    let f_i = f.component(i)?;
    let g_i = g.component(i)?;
    let m_a = matching_object(inv, a, i, cap)?;
    let m_b = matching_object(inv, b, i, cap)?;
    let m_c = matching_object(inv, c, i, cap)?;
    let m_if = matching_induced(&m_b, &m_a, &|j| Ok(f.component(j)?.clone()))?;
    let m_ig = matching_induced(&m_c, &m_b, &|j| Ok(g.component(j)?.clone()))?;
    let m_ia = m_a
        .matching_map
        .clone()
        .ok_or_else(|| Error::ShapeMismatch("base diagram misses a level".into()))?;
    let m_ib = m_b
        .matching_map
        .clone()
        .ok_or_else(|| Error::ShapeMismatch("domain diagram misses a level".into()))?;
    let m_ic = m_c
        .matching_map
        .clone()
        .ok_or_else(|| Error::ShapeMismatch("fiber diagram misses a level".into()))?;

    let pi_i = pi_finset(f_i, g_i, cap)?;
    let pi_m = pi_finset(&m_if, &m_ig, cap)?;
    let m_pi = matching_object(inv, partial_pi, i, cap)?;

    // M_i of the projection: M_i Π -> M_i A
    let m_proj = matching_induced(&m_pi, &m_a, &|j| {
        proj_components
            .get(j)
            .cloned()
            .ok_or_else(|| Error::UnknownObject(j.to_string()))
    })?;

    // M_i(ev)‡ : M_i Π -> Π_{M_iB} M_iC
    let coslice_objs: Vec<String> = m_pi.coslice.category.objects().to_vec();
    let m_ev_sharp_table = m_pi
        .object()
        .elements()
        .iter()
        .map(|s| {
            let base = m_proj.apply(s)?.to_string();
            let mut graph = BTreeMap::new();
            for t in m_b.object().elements() {
                if m_if.apply(t)? != base {
                    continue;
                }
                let comps = coslice_objs
                    .iter()
                    .map(|w| {
                        let j = &m_pi.coslice.codomain_of[w];
                        let t_w = m_b.leg(w)?.apply(t)?;
                        let s_w = m_pi.leg(w)?.apply(s)?;
                        let ev_j = counit_components
                            .get(j)
                            .ok_or_else(|| Error::UnknownObject(j.clone()))?;
                        Ok((w.clone(), ev_j.apply(&encode_pair(t_w, s_w))?.to_string()))
                    })
                    .collect::<Result<_>>()?;
                graph.insert(t.clone(), m_c.limit.element_from_components(&comps)?);
            }
            Ok((s.clone(), section_element(&pi_m, &base, &graph)?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let m_ev_sharp = FinSetMap::new(m_pi.object().clone(), pi_m.total.clone(), m_ev_sharp_table)?;

    // pb1 = A_i ×_{M_iA} M_iΠ, pb2 = A_i ×_{M_iA} Π_{M_iB}M_iC
    let pb1 = cat.pullback(&m_ia, &m_proj)?;
    let pb2 = cat.pullback(&m_ia, &pi_m.projection)?;
    let step1 = cat.pullback_factor(&pb2, &pb1.left, &m_ev_sharp.compose(&pb1.right)?)?;

    // pbz = B_i ×_{M_iB} M_iC and Π_{Bi} of its projection
    let pbz = cat.pullback(&m_ib, &m_ig)?;
    let pi_bz = pi_finset(f_i, &pbz.left, cap)?;

    // (f_i ×_{M_iB} ev)‡ : pb2 -> Π_{Bi}(B_i ×_{M_iB} M_iC)
    let step2_table = pb2
        .apex
        .elements()
        .iter()
        .map(|pair| {
            let a_elt = pb2.left.apply(pair)?;
            let sigma = pb2.right.apply(pair)?;
            let mut graph = BTreeMap::new();
            for b_elt in f_i.src.elements() {
                if f_i.apply(b_elt)? != a_elt {
                    continue;
                }
                let t = m_ib.apply(b_elt)?;
                let mc = pi_m.counit.apply(&encode_pair(t, sigma))?;
                graph.insert(b_elt.clone(), encode_pair(b_elt, mc));
            }
            Ok((pair.clone(), section_element(&pi_bz, a_elt, &graph)?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let step2 = FinSetMap::new(pb2.apex.clone(), pi_bz.total.clone(), step2_table)?;

    // Π_{Bi}(g_i, m_i C) : Π_{Bi}C_i -> Π_{Bi}(B_i ×_{M_iB} M_iC)
    let post_table = pi_i
        .total
        .elements()
        .iter()
        .map(|s| {
            let a_elt = pi_i.projection.apply(s)?;
            let mut graph = BTreeMap::new();
            for b_elt in f_i.src.elements() {
                if f_i.apply(b_elt)? != a_elt {
                    continue;
                }
                let c_elt = pi_i.counit.apply(&encode_pair(b_elt, s))?;
                graph.insert(b_elt.clone(), encode_pair(b_elt, m_ic.apply(c_elt)?));
            }
            Ok((s.clone(), section_element(&pi_bz, a_elt, &graph)?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let post = FinSetMap::new(pi_i.total.clone(), pi_bz.total.clone(), post_table)?;

    // the defining pullback: sections against compatible matching data
    let route = step2.compose(&step1)?;
    let pb = cat.pullback(&post, &route)?;
    let mut s_of = BTreeMap::new();
    let mut m_of = BTreeMap::new();
    let mut a_of = BTreeMap::new();
    for e in pb.apex.elements() {
        let s = pb.left.apply(e)?.to_string();
        let pb1_tag = pb.right.apply(e)?;
        let a_elt = pb1.left.apply(pb1_tag)?.to_string();
        let mtag = pb1.right.apply(pb1_tag)?.to_string();
        s_of.insert(e.clone(), s);
        m_of.insert(e.clone(), mtag);
        a_of.insert(e.clone(), a_elt);
    }
    Ok(PiLevel {
        pi_i,
        m_a,
        m_b,
        m_c,
        m_pi,
        m_if,
        m_ig,
        pi_m,
        m_ev_sharp,
        pb1,
        pb2,
        step1,
        pbz,
        pi_bz,
        step2,
        post,
        s_of,
        m_of,
        a_of,
    })
}

/// The dependent product over a generalized inverse category.
pub fn pi_inverse(
    inv: &InverseStructure,
    f: &NatTrans,
    g: &NatTrans,
    cap: usize,
) -> Result<PiOf<DiagCat>> {
    Ok(pi_inverse_parts(inv, f, g, cap)?.0)
}

/// The sharp transpose for products built by [`pi_inverse`]: ascending over
/// degrees, each component pairs the pointwise section with the matching
/// tuple of the already-built lower components.
pub fn sharp_inverse(
    inv: &InverseStructure,
    pi: &PiOf<DiagCat>,
    d_over_a: &NatTrans,
    s: &NatTrans,
    cap: usize,
) -> Result<NatTrans> {
    let (rebuilt, levels) = pi_inverse_parts(inv, &pi.f, &pi.g, cap)?;
    if rebuilt.total != pi.total {
        return Err(Error::ShapeMismatch(
            "product was not built by this former".into(),
        ));
    }
    let handle = DiagCat::inverse(inv.clone());
    let q = handle.pullback(&pi.f, d_over_a)?;
    if s.src != q.apex || s.tgt != pi.g.src {
        return Err(Error::SliceMismatch(
            "transpose argument is not on the canonical pullback".into(),
        ));
    }
    for i in inv.category.objects() {
        // over B: g ∘ s = projection to B
        let lhs = pi.g.component(i)?.compose(s.component(i)?)?;
        if lhs != *q.left.component(i)? {
            return Err(Error::SliceMismatch("argument is not a map over B".into()));
        }
    }
    let d = &d_over_a.src;
    let mut components: BTreeMap<String, FinSetMap> = BTreeMap::new();
    let mut objs: Vec<&String> = inv.category.objects().iter().collect();
    objs.sort_by_key(|o| (inv.deg[*o], (*o).clone()));
    for i in objs {
        let level = &levels[i.as_str()];
        let f_i = pi.f.component(i)?;
        let table = d
            .set(i)?
            .elements()
            .iter()
            .map(|x| {
                let a_elt = d_over_a.component(i)?.apply(x)?.to_string();
                // matching tuple from the lower components
                let comps = level
                    .m_pi
                    .coslice
                    .category
                    .objects()
                    .iter()
                    .map(|w| {
                        let j = &level.m_pi.coslice.codomain_of[w];
                        let xw = d.map(w)?.apply(x)?;
                        Ok((w.clone(), components[j.as_str()].apply(xw)?.to_string()))
                    })
                    .collect::<Result<_>>()?;
                let mtag = level.m_pi.limit.element_from_components(&comps)?;
                let mut graph = BTreeMap::new();
                for b_elt in f_i.src.elements() {
                    if f_i.apply(b_elt)? != a_elt {
                        continue;
                    }
                    let v = s.component(i)?.apply(&encode_pair(b_elt, x))?;
                    graph.insert(b_elt.clone(), v.to_string());
                }
                let sec = section_element(&level.pi_i, &a_elt, &graph)?;
                let tag = encode_pair(&sec, &encode_pair(&a_elt, &mtag));
                if !level.s_of.contains_key(&tag) {
                    return Err(Error::SliceMismatch(format!(
                        "transpose escapes the product at `{i}`"
                    )));
                }
                Ok((x.clone(), tag))
            })
            .collect::<Result<_>>()?;
        components.insert(
            i.clone(),
            FinSetMap::new(d.set(i)?.clone(), pi.total.set(i)?.clone(), table)?,
        );
    }
    NatTrans::new(d.clone(), pi.total.clone(), components)
}

// ---------------------------------------------------------------------------
// Restriction compatibility
// ---------------------------------------------------------------------------

/// A structure whose truncation behavior is checked.
pub enum InverseResult<'a> {
    Omega(&'a Classifier<Diagram, NatTrans>),
    Pi(&'a PiOf<DiagCat>),
}

/// Recomputes the structure on every truncation `I_{≤n}` and checks it
/// equals the restriction of the global one, componentwise on canonical
/// encodings. A failure signals an implementation bug.
pub fn verify_restriction_compat(
    inv: &InverseStructure,
    structure: InverseResult<'_>,
    cap: usize,
) -> Result<()> {
    for n in inv.degrees() {
        let trunc = truncate_structure(inv, n, false)?;
        let incl = FinFunctor::inclusion(&trunc.category, &inv.category);
        match &structure {
            InverseResult::Omega(cls) => {
                let recomputed = omega_inverse(&trunc, cap)?;
                if restrict_diagram(&cls.omega, &incl)? != recomputed.omega {
                    return Err(Error::CompatibilityViolation(format!(
                        "classifier at truncation {n}"
                    )));
                }
                if restrict_nat(&cls.truth, &incl)? != recomputed.truth {
                    return Err(Error::CompatibilityViolation(format!(
                        "truth map at truncation {n}"
                    )));
                }
            }
            InverseResult::Pi(pi) => {
                let f_r = restrict_nat(&pi.f, &incl)?;
                let g_r = restrict_nat(&pi.g, &incl)?;
                let recomputed = pi_inverse(&trunc, &f_r, &g_r, cap)?;
                if restrict_diagram(&pi.total, &incl)? != recomputed.total {
                    return Err(Error::CompatibilityViolation(format!(
                        "product at truncation {n}"
                    )));
                }
                if restrict_nat(&pi.projection, &incl)? != recomputed.projection {
                    return Err(Error::CompatibilityViolation(format!(
                        "projection at truncation {n}"
                    )));
                }
                if restrict_nat(&pi.counit, &incl)? != recomputed.counit {
                    return Err(Error::CompatibilityViolation(format!(
                        "counit at truncation {n}"
                    )));
                }
            }
        }
    }
    Ok(())
}
