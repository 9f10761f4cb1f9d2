//! The computable logical-category interface and its base instance on
//! finite sets: enumerable homs, finite limits, the two-valued classifier,
//! characteristic maps, and fiberwise-section dependent products with both
//! transposes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::encode::{encode_pair, encode_tuple};
use crate::error::{Error, Result};
use crate::fincat::FinCategory;

pub const FALSE_TAG: &str = "⊥";
pub const TRUE_TAG: &str = "⊤";
pub const POINT_TAG: &str = "*";

/// A finite set: distinct element tags in canonical (sorted) order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FinSetObj {
    elements: Vec<String>,
}

impl FinSetObj {
    pub fn new(mut elements: Vec<String>) -> Result<Self> {
        elements.sort();
        for w in elements.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Invalid(format!("duplicate element tag `{}`", w[0])));
            }
        }
        Ok(FinSetObj { elements })
    }

    pub fn from_tags(tags: &[&str]) -> Self {
        FinSetObj::new(tags.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, tag: &str) -> bool {
        self.elements
            .binary_search_by(|e| e.as_str().cmp(tag))
            .is_ok()
    }

    pub fn terminal() -> Self {
        FinSetObj::from_tags(&[POINT_TAG])
    }

    pub fn initial() -> Self {
        FinSetObj {
            elements: Vec::new(),
        }
    }

    pub fn omega() -> Self {
        FinSetObj::from_tags(&[FALSE_TAG, TRUE_TAG])
    }
}

/// A total function between finite sets, as an explicit table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FinSetMap {
    pub src: FinSetObj,
    pub tgt: FinSetObj,
    table: BTreeMap<String, String>,
}

impl FinSetMap {
    pub fn new(src: FinSetObj, tgt: FinSetObj, table: BTreeMap<String, String>) -> Result<Self> {
        for e in src.elements() {
            match table.get(e) {
                None => return Err(Error::Invalid(format!("map not total: `{e}` unmapped"))),
                Some(v) if !tgt.contains(v) => {
                    return Err(Error::Invalid(format!(
                        "value `{v}` of `{e}` outside the target"
                    )))
                }
                _ => {}
            }
        }
        if table.len() != src.len() {
            return Err(Error::Invalid("table keys outside the source".into()));
        }
        Ok(FinSetMap { src, tgt, table })
    }

    pub fn identity(s: &FinSetObj) -> Self {
        let table = s
            .elements()
            .iter()
            .map(|e| (e.clone(), e.clone()))
            .collect();
        FinSetMap {
            src: s.clone(),
            tgt: s.clone(),
            table,
        }
    }

    pub fn constant(src: &FinSetObj, tgt: &FinSetObj, value: &str) -> Result<Self> {
        let table = src
            .elements()
            .iter()
            .map(|e| (e.clone(), value.to_string()))
            .collect();
        FinSetMap::new(src.clone(), tgt.clone(), table)
    }

    pub fn apply(&self, e: &str) -> Result<&str> {
        self.table
            .get(e)
            .map(|s| s.as_str())
            .ok_or_else(|| Error::UnknownElement(e.to_string()))
    }

    pub fn table(&self) -> &BTreeMap<String, String> {
        &self.table
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FinSetMap) -> Result<FinSetMap> {
        if other.tgt != self.src {
            return Err(Error::NotComposable {
                g: "finset map".into(),
                f: "finset map".into(),
            });
        }
        let table = other
            .table
            .iter()
            .map(|(k, v)| Ok((k.clone(), self.apply(v)?.to_string())))
            .collect::<Result<_>>()?;
        Ok(FinSetMap {
            src: other.src.clone(),
            tgt: self.tgt.clone(),
            table,
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen: Vec<&String> = self.table.values().collect();
        seen.sort();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    pub fn is_bijective(&self) -> bool {
        self.src.len() == self.tgt.len() && self.is_injective()
    }

    pub fn inverse(&self) -> Result<FinSetMap> {
        if !self.is_bijective() {
            return Err(Error::NotIso("finite-set map".into()));
        }
        let table = self
            .table
            .iter()
            .map(|(k, v)| (v.clone(), k.clone()))
            .collect();
        Ok(FinSetMap {
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            table,
        })
    }
}

/// Product data: apex with its two projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductData<Ob, Mo> {
    pub apex: Ob,
    pub left: Mo,
    pub right: Mo,
}

/// Equalizer data: apex with its inclusion, and the equalized pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualizerData<Ob, Mo> {
    pub apex: Ob,
    pub include: Mo,
    pub f: Mo,
    pub g: Mo,
}

/// Pullback data: apex with the two legs over the cospan `f: X -> Z <- Y :g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackData<Ob, Mo> {
    pub apex: Ob,
    /// apex -> src(f)
    pub left: Mo,
    /// apex -> src(g)
    pub right: Mo,
    pub f: Mo,
    pub g: Mo,
}

/// Subobject classifier with its truth map `1 -> Ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classifier<Ob, Mo> {
    pub omega: Ob,
    pub truth: Mo,
}

/// Dependent product of `g: C -> B` along `f: B -> A`: total object over
/// `A`, counit on the canonical pullback `B ×_A Π`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pi<Ob, Mo> {
    pub f: Mo,
    pub g: Mo,
    pub total: Ob,
    /// Π -> A
    pub projection: Mo,
    /// B ×_A Π -> C
    pub counit: Mo,
    /// The canonical pullback of `f` and `projection`; `left` lands in `B`,
    /// `right` in `Π`.
    pub counit_src: PullbackData<Ob, Mo>,
}

pub type ProductOf<C> = ProductData<<C as LogicalCategory>::Obj, <C as LogicalCategory>::Mor>;
pub type EqualizerOf<C> = EqualizerData<<C as LogicalCategory>::Obj, <C as LogicalCategory>::Mor>;
pub type PullbackOf<C> = PullbackData<<C as LogicalCategory>::Obj, <C as LogicalCategory>::Mor>;
pub type ClassifierOf<C> = Classifier<<C as LogicalCategory>::Obj, <C as LogicalCategory>::Mor>;
pub type PiOf<C> = Pi<<C as LogicalCategory>::Obj, <C as LogicalCategory>::Mor>;

/// The capability bundle of a computable logical category: enumeration,
/// finite limits, classifier, characteristic maps, and dependent products
/// with transposes. Formers that a handle cannot supply return
/// `MissingCapability` or `NotPowerful`; for the finite-set-rooted handles
/// in this crate everything is total.
pub trait LogicalCategory {
    type Obj: Clone + Ord + core::fmt::Debug;
    type Mor: Clone + Ord + core::fmt::Debug;

    fn src(&self, m: &Self::Mor) -> Self::Obj;
    fn tgt(&self, m: &Self::Mor) -> Self::Obj;
    fn identity(&self, o: &Self::Obj) -> Self::Mor;
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;

    fn terminal(&self) -> Self::Obj;
    /// The unique map to the terminal object.
    fn bang(&self, o: &Self::Obj) -> Self::Mor;

    /// All morphisms `a -> b`, canonically ordered; `cap` bounds the
    /// enumeration.
    fn hom(&self, a: &Self::Obj, b: &Self::Obj, cap: usize) -> Result<Vec<Self::Mor>>;

    fn is_mono(&self, m: &Self::Mor) -> bool;

    fn invert(&self, m: &Self::Mor) -> Result<Self::Mor>;

    fn is_iso(&self, m: &Self::Mor) -> bool {
        self.invert(m).is_ok()
    }

    fn product(&self, a: &Self::Obj, b: &Self::Obj) -> Result<ProductOf<Self>>;
    fn product_factor(
        &self,
        p: &ProductOf<Self>,
        l: &Self::Mor,
        r: &Self::Mor,
    ) -> Result<Self::Mor>;

    fn equalizer(&self, f: &Self::Mor, g: &Self::Mor) -> Result<EqualizerOf<Self>>;
    fn equalizer_factor(&self, e: &EqualizerOf<Self>, cone: &Self::Mor) -> Result<Self::Mor>;

    fn pullback(&self, f: &Self::Mor, g: &Self::Mor) -> Result<PullbackOf<Self>>;
    fn pullback_factor(
        &self,
        p: &PullbackOf<Self>,
        l: &Self::Mor,
        r: &Self::Mor,
    ) -> Result<Self::Mor>;

    fn omega(&self, cap: usize) -> Result<ClassifierOf<Self>>;
    fn char_map(&self, mono: &Self::Mor, cap: usize) -> Result<Self::Mor>;

    fn pi(&self, f: &Self::Mor, g: &Self::Mor, cap: usize) -> Result<PiOf<Self>>;

    /// One direction of the adjunction: sends `u: D -> Π` over `A` to
    /// `B ×_A D -> C`, as pullback-then-counit. The domain is the canonical
    /// pullback of `pi.f` and `d_over_a`.
    fn pi_flat(&self, pi: &PiOf<Self>, d_over_a: &Self::Mor, u: &Self::Mor) -> Result<Self::Mor> {
        if self.compose(&pi.projection, u)? != *d_over_a {
            return Err(Error::SliceMismatch(
                "transpose argument is not over A".into(),
            ));
        }
        let q = self.pullback(&pi.f, d_over_a)?;
        let into_counit_src =
            self.pullback_factor(&pi.counit_src, &q.left, &self.compose(u, &q.right)?)?;
        self.compose(&pi.counit, &into_counit_src)
    }

    /// The other direction: sends `s: B ×_A D -> C` over `B` to
    /// `D -> Π` over `A`. Mutually inverse with [`LogicalCategory::pi_flat`].
    fn pi_sharp(&self, pi: &PiOf<Self>, d_over_a: &Self::Mor, s: &Self::Mor) -> Result<Self::Mor>;

    /// Functorial action of `Π_B` on a map over `B`: given two products
    /// along the same `f` and `m: C -> C'` with `g' ∘ m = g`, produce
    /// `Π(m): Π -> Π'`.
    fn pi_post(&self, from: &PiOf<Self>, to: &PiOf<Self>, m: &Self::Mor) -> Result<Self::Mor> {
        if from.f != to.f {
            return Err(Error::SliceMismatch("products along different maps".into()));
        }
        let composed = self.compose(m, &from.counit)?;
        self.pi_sharp(to, &from.projection, &composed)
    }
}

/// The conjunction `Ω × Ω -> Ω`: characteristic map of `(true, true)`.
pub fn conjunction<C: LogicalCategory>(
    cat: &C,
    omega: &ClassifierOf<C>,
    cap: usize,
) -> Result<(ProductOf<C>, C::Mor)> {
    let prod = cat.product(&omega.omega, &omega.omega)?;
    let pair = cat.product_factor(&prod, &omega.truth, &omega.truth)?;
    let and = cat.char_map(&pair, cap)?;
    Ok((prod, and))
}

// ---------------------------------------------------------------------------
// FinSet
// ---------------------------------------------------------------------------

/// The category of finite sets. All formers are total; derived elements get
/// canonical tuple encodings so equality is string equality.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FinSetCat;

/// The ambient-category handle on finite sets.
pub fn finset_handle() -> FinSetCat {
    FinSetCat
}

impl FinSetCat {
    fn check_parallel(f: &FinSetMap, g: &FinSetMap) -> Result<()> {
        if f.src != g.src || f.tgt != g.tgt {
            return Err(Error::ShapeMismatch("maps are not parallel".into()));
        }
        Ok(())
    }
}

impl LogicalCategory for FinSetCat {
    type Obj = FinSetObj;
    type Mor = FinSetMap;

    fn src(&self, m: &FinSetMap) -> FinSetObj {
        m.src.clone()
    }

    fn tgt(&self, m: &FinSetMap) -> FinSetObj {
        m.tgt.clone()
    }

    fn identity(&self, o: &FinSetObj) -> FinSetMap {
        FinSetMap::identity(o)
    }

    fn compose(&self, g: &FinSetMap, f: &FinSetMap) -> Result<FinSetMap> {
        g.compose(f)
    }

    fn terminal(&self) -> FinSetObj {
        FinSetObj::terminal()
    }

    fn bang(&self, o: &FinSetObj) -> FinSetMap {
        FinSetMap::constant(o, &FinSetObj::terminal(), POINT_TAG).unwrap()
    }

    fn hom(&self, a: &FinSetObj, b: &FinSetObj, cap: usize) -> Result<Vec<FinSetMap>> {
        if a.is_empty() {
            return Ok(vec![FinSetMap::new(a.clone(), b.clone(), BTreeMap::new())?]);
        }
        if b.is_empty() {
            return Ok(Vec::new());
        }
        let count = (b.len() as u128).checked_pow(a.len() as u32);
        match count {
            Some(c) if c <= cap as u128 => {}
            _ => {
                return Err(Error::ExplosionLimit {
                    needed: count.unwrap_or(u128::MAX),
                    cap,
                })
            }
        }
        let mut out = Vec::new();
        let mut odometer = vec![0usize; a.len()];
        loop {
            let table: BTreeMap<String, String> = a
                .elements()
                .iter()
                .enumerate()
                .map(|(i, e)| (e.clone(), b.elements()[odometer[i]].clone()))
                .collect();
            out.push(FinSetMap::new(a.clone(), b.clone(), table)?);
            let mut i = 0;
            loop {
                if i == odometer.len() {
                    out.sort();
                    return Ok(out);
                }
                odometer[i] += 1;
                if odometer[i] < b.len() {
                    break;
                }
                odometer[i] = 0;
                i += 1;
            }
        }
    }

    fn is_mono(&self, m: &FinSetMap) -> bool {
        m.is_injective()
    }

    fn invert(&self, m: &FinSetMap) -> Result<FinSetMap> {
        m.inverse()
    }

    fn product(&self, a: &FinSetObj, b: &FinSetObj) -> Result<ProductOf<Self>> {
        let mut elems = Vec::new();
        let mut left = BTreeMap::new();
        let mut right = BTreeMap::new();
        for x in a.elements() {
            for y in b.elements() {
                let tag = encode_pair(x, y);
                left.insert(tag.clone(), x.clone());
                right.insert(tag.clone(), y.clone());
                elems.push(tag);
            }
        }
        let apex = FinSetObj::new(elems)?;
        Ok(ProductData {
            left: FinSetMap::new(apex.clone(), a.clone(), left)?,
            right: FinSetMap::new(apex.clone(), b.clone(), right)?,
            apex,
        })
    }

    fn product_factor(
        &self,
        p: &ProductOf<Self>,
        l: &FinSetMap,
        r: &FinSetMap,
    ) -> Result<FinSetMap> {
        if l.src != r.src {
            return Err(Error::ShapeMismatch(
                "cone legs with different domains".into(),
            ));
        }
        let table = l
            .src
            .elements()
            .iter()
            .map(|q| {
                let tag = encode_pair(l.apply(q)?, r.apply(q)?);
                if !p.apex.contains(&tag) {
                    return Err(Error::ShapeMismatch(
                        "cone lands outside the product".into(),
                    ));
                }
                Ok((q.clone(), tag))
            })
            .collect::<Result<_>>()?;
        FinSetMap::new(l.src.clone(), p.apex.clone(), table)
    }

    fn equalizer(&self, f: &FinSetMap, g: &FinSetMap) -> Result<EqualizerOf<Self>> {
        Self::check_parallel(f, g)?;
        let elems: Vec<String> = f
            .src
            .elements()
            .iter()
            .filter(|x| f.apply(x).ok() == g.apply(x).ok())
            .cloned()
            .collect();
        let apex = FinSetObj::new(elems)?;
        let include = FinSetMap::new(
            apex.clone(),
            f.src.clone(),
            apex.elements()
                .iter()
                .map(|e| (e.clone(), e.clone()))
                .collect(),
        )?;
        Ok(EqualizerData {
            apex,
            include,
            f: f.clone(),
            g: g.clone(),
        })
    }

    fn equalizer_factor(&self, e: &EqualizerOf<Self>, cone: &FinSetMap) -> Result<FinSetMap> {
        let table = cone
            .src
            .elements()
            .iter()
            .map(|q| {
                let v = cone.apply(q)?;
                if !e.apex.contains(v) {
                    return Err(Error::ShapeMismatch(format!(
                        "cone value `{v}` does not equalize"
                    )));
                }
                Ok((q.clone(), v.to_string()))
            })
            .collect::<Result<_>>()?;
        FinSetMap::new(cone.src.clone(), e.apex.clone(), table)
    }

    fn pullback(&self, f: &FinSetMap, g: &FinSetMap) -> Result<PullbackOf<Self>> {
        if f.tgt != g.tgt {
            return Err(Error::ShapeMismatch("cospan targets differ".into()));
        }
        let mut elems = Vec::new();
        let mut left = BTreeMap::new();
        let mut right = BTreeMap::new();
        for x in f.src.elements() {
            for y in g.src.elements() {
                if f.apply(x)? == g.apply(y)? {
                    let tag = encode_pair(x, y);
                    left.insert(tag.clone(), x.clone());
                    right.insert(tag.clone(), y.clone());
                    elems.push(tag);
                }
            }
        }
        let apex = FinSetObj::new(elems)?;
        Ok(PullbackData {
            left: FinSetMap::new(apex.clone(), f.src.clone(), left)?,
            right: FinSetMap::new(apex.clone(), g.src.clone(), right)?,
            apex,
            f: f.clone(),
            g: g.clone(),
        })
    }

    fn pullback_factor(
        &self,
        p: &PullbackOf<Self>,
        l: &FinSetMap,
        r: &FinSetMap,
    ) -> Result<FinSetMap> {
        if l.src != r.src {
            return Err(Error::ShapeMismatch(
                "cone legs with different domains".into(),
            ));
        }
        let table = l
            .src
            .elements()
            .iter()
            .map(|q| {
                let tag = encode_pair(l.apply(q)?, r.apply(q)?);
                if !p.apex.contains(&tag) {
                    return Err(Error::ShapeMismatch(
                        "cone does not commute with the cospan".into(),
                    ));
                }
                Ok((q.clone(), tag))
            })
            .collect::<Result<_>>()?;
        FinSetMap::new(l.src.clone(), p.apex.clone(), table)
    }

    fn omega(&self, _cap: usize) -> Result<ClassifierOf<Self>> {
        let omega = FinSetObj::omega();
        let truth = FinSetMap::constant(&FinSetObj::terminal(), &omega, TRUE_TAG)?;
        Ok(Classifier { omega, truth })
    }

    fn char_map(&self, mono: &FinSetMap, _cap: usize) -> Result<FinSetMap> {
        if !mono.is_injective() {
            return Err(Error::NotMono("finite-set map".into()));
        }
        let image: Vec<&String> = mono.table().values().collect();
        let table = mono
            .tgt
            .elements()
            .iter()
            .map(|x| {
                let v = if image.contains(&x) {
                    TRUE_TAG
                } else {
                    FALSE_TAG
                };
                (x.clone(), v.to_string())
            })
            .collect();
        FinSetMap::new(mono.tgt.clone(), FinSetObj::omega(), table)
    }

    fn pi(&self, f: &FinSetMap, g: &FinSetMap, cap: usize) -> Result<PiOf<Self>> {
        pi_finset(f, g, cap)
    }

    fn pi_sharp(&self, pi: &PiOf<Self>, d_over_a: &FinSetMap, s: &FinSetMap) -> Result<FinSetMap> {
        transpose_sharp_finset(pi, d_over_a, s)
    }
}

/// Result of a finite limit: apex plus one projection leg per shape object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitResult {
    pub apex: FinSetObj,
    pub legs: BTreeMap<String, FinSetMap>,
}

impl LimitResult {
    /// Rebuilds the canonical apex tag from per-shape-object components;
    /// errors if the components do not form a point of the limit.
    pub fn element_from_components(&self, components: &BTreeMap<String, String>) -> Result<String> {
        let mut parts: Vec<String> = Vec::new();
        for (obj, leg) in &self.legs {
            let v = components
                .get(obj)
                .ok_or_else(|| Error::Invalid(format!("missing component at `{obj}`")))?;
            let _ = leg;
            parts.push(obj.clone());
            parts.push(v.clone());
        }
        let tag = encode_tuple(&parts);
        if !self.apex.contains(&tag) {
            return Err(Error::Invalid(format!(
                "components do not satisfy the limit equations: {tag}"
            )));
        }
        Ok(tag)
    }
}

/// The limit of a finite-set diagram over `shape`: tuples over the object
/// sets satisfying every naturality equation, with coordinate projections.
/// Tuples interleave shape-object ids with component values.
///
/// Enumeration is by backtracking with propagation: a component forced by
/// an already-assigned one (through some shape morphism) is filled in
/// rather than branched over, so forced coordinates never multiply the
/// search. `cap` bounds the number of search nodes visited.
pub fn limit(
    shape: &FinCategory,
    sets: &BTreeMap<String, FinSetObj>,
    maps: &BTreeMap<String, FinSetMap>,
    cap: usize,
) -> Result<LimitResult> {
    for o in shape.objects() {
        if !sets.contains_key(o) {
            return Err(Error::UnknownObject(o.clone()));
        }
    }
    for m in shape.morphisms() {
        let t = maps
            .get(&m.id)
            .ok_or_else(|| Error::UnknownMorphism(m.id.clone()))?;
        if t.src != sets[&m.src] || t.tgt != sets[&m.tgt] {
            return Err(Error::ShapeMismatch(format!(
                "map `{}` does not match the object sets",
                m.id
            )));
        }
    }
    let objs: Vec<&String> = shape.objects().iter().collect();

    struct Search<'a> {
        shape: &'a FinCategory,
        sets: &'a BTreeMap<String, FinSetObj>,
        maps: &'a BTreeMap<String, FinSetMap>,
        objs: &'a [&'a String],
        visited: usize,
        cap: usize,
        tuples: Vec<BTreeMap<String, String>>,
    }

    impl<'a> Search<'a> {
        fn consistent(&self, assigned: &BTreeMap<String, String>) -> bool {
            for m in self.shape.morphisms() {
                if let (Some(sv), Some(tv)) = (assigned.get(&m.src), assigned.get(&m.tgt)) {
                    match self.maps[&m.id].apply(sv) {
                        Ok(v) if v == tv => {}
                        _ => return false,
                    }
                }
            }
            true
        }

        fn rec(&mut self, assigned: &mut BTreeMap<String, String>) -> Result<()> {
            self.visited += 1;
            if self.visited > self.cap {
                return Err(Error::ExplosionLimit {
                    needed: self.visited as u128,
                    cap: self.cap,
                });
            }
            if assigned.len() == self.objs.len() {
                self.tuples.push(assigned.clone());
                return Ok(());
            }
            // a component forced through a morphism from an assigned object
            for m in self.shape.morphisms() {
                if assigned.contains_key(&m.tgt) || !assigned.contains_key(&m.src) {
                    continue;
                }
                let forced = self.maps[&m.id].apply(&assigned[&m.src])?.to_string();
                assigned.insert(m.tgt.clone(), forced);
                if self.consistent(assigned) {
                    self.rec(assigned)?;
                }
                assigned.remove(&m.tgt);
                return Ok(());
            }
            // otherwise branch on the first unassigned object
            let o = self
                .objs
                .iter()
                .find(|o| !assigned.contains_key(**o))
                .unwrap()
                .to_string();
            let candidates: Vec<String> = self.sets[&o].elements().to_vec();
            for v in candidates {
                assigned.insert(o.clone(), v);
                if self.consistent(assigned) {
                    self.rec(assigned)?;
                }
                assigned.remove(&o);
            }
            Ok(())
        }
    }

    let mut search = Search {
        shape,
        sets,
        maps,
        objs: &objs,
        visited: 0,
        cap,
        tuples: Vec::new(),
    };
    let mut assigned = BTreeMap::new();
    search.rec(&mut assigned)?;

    let mut elems = Vec::new();
    let mut legs_tables: BTreeMap<String, BTreeMap<String, String>> = objs
        .iter()
        .map(|o| ((*o).clone(), BTreeMap::new()))
        .collect();
    for t in &search.tuples {
        let mut parts = Vec::new();
        for o in &objs {
            parts.push((*o).clone());
            parts.push(t[*o].clone());
        }
        let tag = encode_tuple(&parts);
        for o in &objs {
            legs_tables
                .get_mut(*o)
                .unwrap()
                .insert(tag.clone(), t[*o].clone());
        }
        elems.push(tag);
    }
    let apex = FinSetObj::new(elems)?;
    let legs = legs_tables
        .into_iter()
        .map(|(o, table)| {
            let m = FinSetMap::new(apex.clone(), sets[&o].clone(), table)?;
            Ok((o, m))
        })
        .collect::<Result<_>>()?;
    Ok(LimitResult { apex, legs })
}

/// The characteristic map of an injection, into the two-valued classifier.
pub fn char_map(mono: &FinSetMap) -> Result<FinSetMap> {
    FinSetCat.char_map(mono, crate::DEFAULT_CAP)
}

/// Section-space dependent product in finite sets: the fiber of `Π` over
/// `a ∈ A` is the set of sections of `g` over the `f`-fiber of `a`.
pub fn pi_finset(f: &FinSetMap, g: &FinSetMap, cap: usize) -> Result<PiOf<FinSetCat>> {
    if g.tgt != f.src {
        return Err(Error::ShapeMismatch(
            "g must land in the domain of f".into(),
        ));
    }
    let mut b_of_a: BTreeMap<String, Vec<&String>> = f
        .tgt
        .elements()
        .iter()
        .map(|a| (a.clone(), Vec::new()))
        .collect();
    for b in f.src.elements() {
        b_of_a.get_mut(f.apply(b)?).unwrap().push(b);
    }
    let mut c_of_b: BTreeMap<String, Vec<&String>> = g
        .tgt
        .elements()
        .iter()
        .map(|b| (b.clone(), Vec::new()))
        .collect();
    for c in g.src.elements() {
        c_of_b.get_mut(g.apply(c)?).unwrap().push(c);
    }

    let mut elems: Vec<String> = Vec::new();
    let mut proj_table: BTreeMap<String, String> = BTreeMap::new();
    // For the counit we remember each section's graph.
    let mut graphs: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    for a in f.tgt.elements() {
        let fiber = &b_of_a[a];
        let mut count: u128 = 1;
        for b in fiber {
            count = count.saturating_mul(c_of_b[b.as_str()].len() as u128);
        }
        if count > cap as u128 {
            return Err(Error::ExplosionLimit { needed: count, cap });
        }
        // enumerate sections: one choice of c per b in the fiber
        let mut partial: Vec<Vec<&String>> = vec![Vec::new()];
        for b in fiber {
            let mut next = Vec::new();
            for p in &partial {
                for c in &c_of_b[b.as_str()] {
                    let mut p2 = p.clone();
                    p2.push(*c);
                    next.push(p2);
                }
            }
            partial = next;
        }
        for choice in &partial {
            let mut parts: Vec<String> = vec![a.clone()];
            let mut graph = BTreeMap::new();
            for (i, b) in fiber.iter().enumerate() {
                parts.push((*b).clone());
                parts.push(choice[i].clone());
                graph.insert((*b).clone(), choice[i].clone());
            }
            let tag = encode_tuple(&parts);
            proj_table.insert(tag.clone(), a.clone());
            graphs.insert(tag.clone(), graph);
            elems.push(tag);
        }
    }
    let total = FinSetObj::new(elems)?;
    let projection = FinSetMap::new(total.clone(), f.tgt.clone(), proj_table)?;
    let counit_src = FinSetCat.pullback(f, &projection)?;
    let counit_table = counit_src
        .apex
        .elements()
        .iter()
        .map(|pair| {
            let b = counit_src.left.apply(pair)?;
            let s = counit_src.right.apply(pair)?;
            let v = graphs[s]
                .get(b)
                .ok_or_else(|| Error::Invalid("section missing a fiber point".into()))?;
            Ok((pair.clone(), v.clone()))
        })
        .collect::<Result<_>>()?;
    let counit = FinSetMap::new(counit_src.apex.clone(), g.src.clone(), counit_table)?;
    Ok(Pi {
        f: f.clone(),
        g: g.clone(),
        total,
        projection,
        counit,
        counit_src,
    })
}

/// Rebuilds a section tag of `pi` from its base point and graph.
pub fn section_element(
    pi: &PiOf<FinSetCat>,
    a: &str,
    graph: &BTreeMap<String, String>,
) -> Result<String> {
    let mut fiber: Vec<&String> = Vec::new();
    for b in pi.f.src.elements() {
        if pi.f.apply(b)? == a {
            fiber.push(b);
        }
    }
    let mut parts: Vec<String> = vec![a.to_string()];
    for b in fiber {
        let c = graph
            .get(b)
            .ok_or_else(|| Error::Invalid(format!("graph missing fiber point `{b}`")))?;
        parts.push(b.clone());
        parts.push(c.clone());
    }
    let tag = encode_tuple(&parts);
    if !pi.total.contains(&tag) {
        return Err(Error::SliceMismatch(format!("not a section of g: {tag}")));
    }
    Ok(tag)
}

/// `Hom_{/A}(D, Π) -> Hom_{/B}(B ×_A D, C)`.
pub fn transpose_flat_finset(
    pi: &PiOf<FinSetCat>,
    d_over_a: &FinSetMap,
    u: &FinSetMap,
) -> Result<FinSetMap> {
    FinSetCat.pi_flat(pi, d_over_a, u)
}

/// `Hom_{/B}(B ×_A D, C) -> Hom_{/A}(D, Π)`; the domain of `s` must be the
/// canonical pullback of `pi.f` and `d_over_a`.
pub fn transpose_sharp_finset(
    pi: &PiOf<FinSetCat>,
    d_over_a: &FinSetMap,
    s: &FinSetMap,
) -> Result<FinSetMap> {
    let q = FinSetCat.pullback(&pi.f, d_over_a)?;
    if s.src != q.apex {
        return Err(Error::SliceMismatch(
            "transpose argument is not on the canonical pullback".into(),
        ));
    }
    if s.tgt != pi.g.src {
        return Err(Error::SliceMismatch(
            "transpose argument must land in C".into(),
        ));
    }
    // over B: g ∘ s = projection to B
    for pair in q.apex.elements() {
        if pi.g.apply(s.apply(pair)?)? != q.left.apply(pair)? {
            return Err(Error::SliceMismatch("argument is not a map over B".into()));
        }
    }
    let table = d_over_a
        .src
        .elements()
        .iter()
        .map(|x| {
            let a = d_over_a.apply(x)?;
            let mut graph = BTreeMap::new();
            for b in pi.f.src.elements() {
                if pi.f.apply(b)? == a {
                    let pair = encode_pair(b, x);
                    graph.insert(b.clone(), s.apply(&pair)?.to_string());
                }
            }
            Ok((x.clone(), section_element(pi, a, &graph)?))
        })
        .collect::<Result<_>>()?;
    FinSetMap::new(d_over_a.src.clone(), pi.total.clone(), table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn terminal_and_omega() {
        let cat = finset_handle();
        assert_eq!(cat.terminal().elements(), &[POINT_TAG.to_string()]);
        let cls = cat.omega(100).unwrap();
        assert_eq!(cls.omega.len(), 2);
        assert_eq!(cls.truth.apply(POINT_TAG).unwrap(), TRUE_TAG);
        assert!(FinSetObj::initial().is_empty());
    }

    #[test]
    fn char_map_cases() {
        let two = FinSetObj::from_tags(&["0", "1"]);
        let one = FinSetObj::from_tags(&["0"]);
        let incl = FinSetMap::new(
            one.clone(),
            two.clone(),
            [("0".to_string(), "0".to_string())].into_iter().collect(),
        )
        .unwrap();
        let chi = char_map(&incl).unwrap();
        assert_eq!(chi.apply("0").unwrap(), TRUE_TAG);
        assert_eq!(chi.apply("1").unwrap(), FALSE_TAG);

        let ident = FinSetMap::identity(&two);
        let chi = char_map(&ident).unwrap();
        assert!(two
            .elements()
            .iter()
            .all(|e| chi.apply(e).unwrap() == TRUE_TAG));

        let empty = FinSetMap::new(FinSetObj::initial(), two.clone(), BTreeMap::new()).unwrap();
        let chi = char_map(&empty).unwrap();
        assert!(two
            .elements()
            .iter()
            .all(|e| chi.apply(e).unwrap() == FALSE_TAG));

        let collapse = FinSetMap::constant(&two, &two, "0").unwrap();
        assert!(matches!(char_map(&collapse), Err(Error::NotMono(_))));
    }

    #[test]
    fn char_map_pullback_recovers_mono() {
        let cat = finset_handle();
        let three = FinSetObj::from_tags(&["0", "1", "2"]);
        let sub = FinSetObj::from_tags(&["0", "2"]);
        let incl = FinSetMap::new(
            sub.clone(),
            three.clone(),
            sub.elements()
                .iter()
                .map(|e| (e.clone(), e.clone()))
                .collect(),
        )
        .unwrap();
        let chi = cat.char_map(&incl, 100).unwrap();
        let cls = cat.omega(100).unwrap();
        let pb = cat.pullback(&chi, &cls.truth).unwrap();
        let image: Vec<&str> = pb
            .apex
            .elements()
            .iter()
            .map(|pair| pb.left.apply(pair).unwrap())
            .collect();
        assert_eq!(image, vec!["0", "2"]);
    }

    #[test]
    fn limit_over_cospan_of_points_is_product() {
        // cospan 2 -> 1 <- 2: pullback over a point is the product
        let shape = corpus::span_category();
        // use the span shape reversed? cospan: use sets on objects of a
        // cospan-shaped category: reuse span with sets arranged so both
        // maps are the unique map to a point.
        let two = FinSetObj::from_tags(&["x", "y"]);
        let one = FinSetObj::terminal();
        let sets: BTreeMap<String, FinSetObj> = [
            ("0".to_string(), two.clone()),
            ("1".to_string(), two.clone()),
            ("2".to_string(), one.clone()),
        ]
        .into_iter()
        .collect();
        // span has maps out of "2"; a limit over the span with singleton at
        // the apex of the span is the product of the feet.
        let maps: BTreeMap<String, FinSetMap> = [
            ("id0".to_string(), FinSetMap::identity(&two)),
            ("id1".to_string(), FinSetMap::identity(&two)),
            ("id2".to_string(), FinSetMap::identity(&one)),
            (
                "p".to_string(),
                FinSetMap::constant(&one, &two, "x").unwrap(),
            ),
            (
                "q".to_string(),
                FinSetMap::constant(&one, &two, "y").unwrap(),
            ),
        ]
        .into_iter()
        .collect();
        let lim = limit(&shape, &sets, &maps, 1000).unwrap();
        // tuples: component at 2 forced, components at 0 and 1 forced by p, q
        assert_eq!(lim.apex.len(), 1);
    }

    #[test]
    fn limit_of_equalizer_shape() {
        // equalizer of (identity, constant-to-x) over {x, y} is {x}
        let cat = finset_handle();
        let two = FinSetObj::from_tags(&["x", "y"]);
        let f = FinSetMap::identity(&two);
        let g = FinSetMap::constant(&two, &two, "x").unwrap();
        let eq = cat.equalizer(&f, &g).unwrap();
        assert_eq!(eq.apex.elements(), &["x".to_string()]);
    }

    #[test]
    fn limit_over_discrete_coslice_is_product() {
        let inv = corpus::span_inverse();
        let cs = crate::fincat::strict_coslice(&inv, "2").unwrap();
        let x0 = FinSetObj::from_tags(&["a", "b"]);
        let x1 = FinSetObj::from_tags(&["u", "v", "w"]);
        let sets: BTreeMap<String, FinSetObj> =
            [("p".to_string(), x0.clone()), ("q".to_string(), x1.clone())]
                .into_iter()
                .collect();
        let maps: BTreeMap<String, FinSetMap> = cs
            .category
            .morphisms()
            .iter()
            .map(|m| (m.id.clone(), FinSetMap::identity(&sets[&m.src])))
            .collect();
        let lim = limit(&cs.category, &sets, &maps, 1000).unwrap();
        assert_eq!(lim.apex.len(), 6);
        // universal property: every cone from a 2-element set factors once
        let d = FinSetObj::from_tags(&["s", "t"]);
        let cone_p = FinSetMap::constant(&d, &x0, "a").unwrap();
        let cone_q = FinSetMap::new(
            d.clone(),
            x1.clone(),
            [
                ("s".to_string(), "u".to_string()),
                ("t".to_string(), "w".to_string()),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap();
        let cat = finset_handle();
        let candidates = cat.hom(&d, &lim.apex, 10_000).unwrap();
        let factoring: Vec<&FinSetMap> = candidates
            .iter()
            .filter(|h| {
                lim.legs["p"].compose(h).unwrap() == cone_p
                    && lim.legs["q"].compose(h).unwrap() == cone_q
            })
            .collect();
        assert_eq!(factoring.len(), 1);
    }

    #[test]
    fn pi_finset_counts_sections() {
        // A singleton, |B| = 2, fibers of g of sizes 2 and 3 -> |Π| = 6
        let a = FinSetObj::terminal();
        let b = FinSetObj::from_tags(&["b0", "b1"]);
        let c = FinSetObj::from_tags(&["c0", "c1", "c2", "c3", "c4"]);
        let f = FinSetMap::constant(&b, &a, POINT_TAG).unwrap();
        let g = FinSetMap::new(
            c.clone(),
            b.clone(),
            [
                ("c0".to_string(), "b0".to_string()),
                ("c1".to_string(), "b0".to_string()),
                ("c2".to_string(), "b1".to_string()),
                ("c3".to_string(), "b1".to_string()),
                ("c4".to_string(), "b1".to_string()),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap();
        let pi = pi_finset(&f, &g, 1000).unwrap();
        assert_eq!(pi.total.len(), 6);
    }

    #[test]
    fn pi_finset_identity_base() {
        // f identity: Π is fiberwise the fibers of g
        let b = FinSetObj::from_tags(&["b0", "b1"]);
        let c = FinSetObj::from_tags(&["c0", "c1", "c2"]);
        let f = FinSetMap::identity(&b);
        let g = FinSetMap::new(
            c.clone(),
            b.clone(),
            [
                ("c0".to_string(), "b0".to_string()),
                ("c1".to_string(), "b0".to_string()),
                ("c2".to_string(), "b1".to_string()),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap();
        let pi = pi_finset(&f, &g, 1000).unwrap();
        assert_eq!(pi.total.len(), 3);
    }

    #[test]
    fn pi_finset_empty_fiber() {
        // a g-fiber over B empty -> the affected A-fiber of Π empty
        let a = FinSetObj::from_tags(&["a0", "a1"]);
        let b = FinSetObj::from_tags(&["b0", "b1"]);
        let c = FinSetObj::from_tags(&["c0"]);
        let f = FinSetMap::new(
            b.clone(),
            a.clone(),
            [
                ("b0".to_string(), "a0".to_string()),
                ("b1".to_string(), "a1".to_string()),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap();
        let g = FinSetMap::new(
            c.clone(),
            b.clone(),
            [("c0".to_string(), "b0".to_string())].into_iter().collect(),
        )
        .unwrap();
        let pi = pi_finset(&f, &g, 1000).unwrap();
        // fiber over a0 has the single section; fiber over a1 empty
        assert_eq!(pi.total.len(), 1);
        assert_eq!(pi.projection.apply(&pi.total.elements()[0]).unwrap(), "a0");
    }

    #[test]
    fn transposes_round_trip_exhaustively() {
        let cat = finset_handle();
        let a = FinSetObj::from_tags(&["a0", "a1"]);
        let b = FinSetObj::from_tags(&["b0", "b1", "b2"]);
        let c = FinSetObj::from_tags(&["c0", "c1", "c2"]);
        let f = FinSetMap::new(
            b.clone(),
            a.clone(),
            [
                ("b0".to_string(), "a0".to_string()),
                ("b1".to_string(), "a0".to_string()),
                ("b2".to_string(), "a1".to_string()),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap();
        let g = FinSetMap::new(
            c.clone(),
            b.clone(),
            [
                ("c0".to_string(), "b0".to_string()),
                ("c1".to_string(), "b1".to_string()),
                ("c2".to_string(), "b2".to_string()),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap();
        let pi = pi_finset(&f, &g, 1000).unwrap();
        let d = FinSetObj::from_tags(&["d0", "d1"]);
        let d_over_a = FinSetMap::new(
            d.clone(),
            a.clone(),
            [
                ("d0".to_string(), "a0".to_string()),
                ("d1".to_string(), "a1".to_string()),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap();
        // sharp(flat(u)) = u for every u over A
        let mut over_a = 0;
        for u in cat.hom(&d, &pi.total, 100_000).unwrap() {
            if pi.projection.compose(&u).unwrap() != d_over_a {
                continue;
            }
            over_a += 1;
            let s = transpose_flat_finset(&pi, &d_over_a, &u).unwrap();
            let back = transpose_sharp_finset(&pi, &d_over_a, &s).unwrap();
            assert_eq!(back, u);
        }
        assert!(over_a > 0);
        // flat(sharp(s)) = s for every s over B on the canonical pullback
        let q = cat.pullback(&f, &d_over_a).unwrap();
        let mut over_b = 0;
        for s in cat.hom(&q.apex, &c, 100_000).unwrap() {
            if g.compose(&s).unwrap() != q.left {
                continue;
            }
            over_b += 1;
            let u = transpose_sharp_finset(&pi, &d_over_a, &s).unwrap();
            let back = transpose_flat_finset(&pi, &d_over_a, &u).unwrap();
            assert_eq!(back, s);
        }
        assert_eq!(over_a, over_b);
        // flat of the identity on Π is the counit
        let id_pi = FinSetMap::identity(&pi.total);
        let flat_id = transpose_flat_finset(&pi, &pi.projection, &id_pi).unwrap();
        assert_eq!(flat_id, pi.counit);
    }

    #[test]
    fn fiber_size_formula() {
        let a = FinSetObj::from_tags(&["a0", "a1"]);
        let b = FinSetObj::from_tags(&["b0", "b1", "b2"]);
        let c = FinSetObj::from_tags(&["c0", "c1", "c2", "c3"]);
        let f = FinSetMap::new(
            b.clone(),
            a.clone(),
            [
                ("b0".to_string(), "a0".to_string()),
                ("b1".to_string(), "a0".to_string()),
                ("b2".to_string(), "a1".to_string()),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap();
        let g = FinSetMap::new(
            c.clone(),
            b.clone(),
            [
                ("c0".to_string(), "b0".to_string()),
                ("c1".to_string(), "b0".to_string()),
                ("c2".to_string(), "b1".to_string()),
                ("c3".to_string(), "b2".to_string()),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap();
        let pi = pi_finset(&f, &g, 1000).unwrap();
        let count_over = |a_tag: &str| {
            pi.total
                .elements()
                .iter()
                .filter(|s| pi.projection.apply(s).unwrap() == a_tag)
                .count()
        };
        assert_eq!(count_over("a0"), 2); // fibers of sizes 2 and 1
        assert_eq!(count_over("a1"), 1);
    }
}
