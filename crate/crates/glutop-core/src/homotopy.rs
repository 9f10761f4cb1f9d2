//! Localization of an inverse index category at a class of weak
//! equivalences, the assumption checkers (all-epi, initiality), homotopical
//! matching objects, the dependent product of homotopical diagrams, and the
//! comparison maps between the homotopical and ordinary constructions.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::diagcat::{restrict_diagram, restrict_nat, DiagCat, Diagram, NatTrans};
use crate::encode::{encode_pair, encode_tuple};
use crate::error::{Error, Result, ValidationReport, Violation};
use crate::fincat::{
    punctured_coslice, strict_coslice, Coslice, FinCategory, FinFunctor, InverseStructure, MorInfo,
};
use crate::logicat::{
    limit, pi_finset, section_element, FinSetCat, FinSetMap, FinSetObj, LogicalCategory, Pi, PiOf,
    PullbackOf,
};
use crate::matching::{matching_object, pi_inverse_parts, MatchingResult, PiLevel};
use crate::rng::SplitMix64;

/// One step of a zigzag: a base morphism forwards, or a weak equivalence
/// backwards.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ZigzagLetter {
    Fwd(String),
    Inv(String),
}

impl ZigzagLetter {
    fn render(&self) -> String {
        match self {
            ZigzagLetter::Fwd(f) => f.clone(),
            ZigzagLetter::Inv(w) => format!("{w}⁻¹"),
        }
    }
}

/// A finite presentation of the localization `W⁻¹I`: the base inverse
/// category, the class of weak equivalences, the localized category, the
/// localization functor, and one zigzag word per localized morphism (the
/// saturation certificate).
#[derive(Debug, Clone)]
pub struct LocalizationData {
    pub base: InverseStructure,
    pub weq: BTreeSet<String>,
    pub target: FinCategory,
    pub gamma: FinFunctor,
    /// Localized morphism id -> zigzag word, first-applied letter first.
    pub words: BTreeMap<String, Vec<ZigzagLetter>>,
}

/// Whether the weak-equivalence validator enforces the 2-of-3 property or
/// only wideness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeqPolicy {
    TwoOfThree,
    WideOnly,
}

/// Checks wideness (all identities present) and, under the default policy,
/// the 2-of-3 property on all composable pairs.
pub fn validate_weq(
    base: &FinCategory,
    weq: &BTreeSet<String>,
    policy: WeqPolicy,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    for w in weq {
        if base.morphism(w).is_err() {
            report.push(Violation::Other {
                detail: format!("weak equivalence `{w}` is not a morphism"),
            });
        }
    }
    for (o, id) in base.identities() {
        if !weq.contains(id) {
            report.push(Violation::NotWide { object: o.clone() });
        }
    }
    if policy == WeqPolicy::TwoOfThree {
        for ((g, f), gf) in base.composition() {
            let m = [weq.contains(g), weq.contains(f), weq.contains(gf)];
            let count = m.iter().filter(|b| **b).count();
            if count == 2 {
                report.push(Violation::TwoOfThreeViolation {
                    g: g.clone(),
                    f: f.clone(),
                });
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Bounded localization by congruence saturation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Node {
    Eps(String),
    Gen(ZigzagLetter),
    Comp(usize, usize), // Comp(second, first): second ∘ first
}

struct Saturation {
    parent: Vec<usize>,
    src: Vec<String>,
    tgt: Vec<String>,
    rep: Vec<Vec<ZigzagLetter>>, // shortlex-minimal known word
    is_eps: Vec<bool>,
    memo: BTreeMap<Node, usize>,
    class_nodes: Vec<Vec<Node>>,
    word_cap: usize,
    node_budget: usize,
}

fn shortlex_less(a: &[ZigzagLetter], b: &[ZigzagLetter]) -> bool {
    (a.len(), a) < (b.len(), b)
}

impl Saturation {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn new_class(
        &mut self,
        node: Node,
        src: String,
        tgt: String,
        rep: Vec<ZigzagLetter>,
    ) -> Result<usize> {
        if self.parent.len() >= self.node_budget {
            return Err(Error::SaturationBudgetExceeded {
                detail: format!("class budget {} exhausted", self.node_budget),
            });
        }
        let id = self.parent.len();
        self.parent.push(id);
        self.src.push(src);
        self.tgt.push(tgt);
        self.is_eps.push(matches!(node, Node::Eps(_)));
        self.rep.push(rep);
        self.class_nodes.push(vec![node.clone()]);
        self.memo.insert(node, id);
        Ok(id)
    }

    fn canon(&mut self, node: &Node) -> Node {
        match node {
            Node::Comp(v, u) => Node::Comp(self.find(*v), self.find(*u)),
            other => other.clone(),
        }
    }

    /// The class of a composition node, creating it if necessary.
    fn comp(&mut self, second: usize, first: usize) -> Result<usize> {
        let second = self.find(second);
        let first = self.find(first);
        let node = Node::Comp(second, first);
        if let Some(c) = self.memo.get(&node) {
            let c = *c;
            return Ok(self.find(c));
        }
        if self.tgt[first] != self.src[second] {
            return Err(Error::Invalid("composing non-composable classes".into()));
        }
        let mut rep = self.rep[first].clone();
        rep.extend(self.rep[second].iter().cloned());
        let src = self.src[first].clone();
        let tgt = self.tgt[second].clone();
        self.new_class(node, src, tgt, rep)
    }

    fn merge(&mut self, a: usize, b: usize) -> Result<bool> {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return Ok(false);
        }
        if self.src[ra] != self.src[rb] || self.tgt[ra] != self.tgt[rb] {
            return Err(Error::Invalid("merging non-parallel classes".into()));
        }
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[drop] = keep;
        if shortlex_less(&self.rep[drop].clone(), &self.rep[keep]) {
            self.rep[keep] = self.rep[drop].clone();
        }
        self.is_eps[keep] = self.is_eps[keep] || self.is_eps[drop];
        let moved = core::mem::take(&mut self.class_nodes[drop]);
        self.class_nodes[keep].extend(moved);
        Ok(true)
    }

    /// Restores congruence: nodes equal after canonicalization force their
    /// classes equal.
    fn rebuild(&mut self) -> Result<bool> {
        let mut changed = false;
        loop {
            let mut pending: Vec<(usize, usize)> = Vec::new();
            let mut fresh: BTreeMap<Node, usize> = BTreeMap::new();
            let entries: Vec<(Node, usize)> =
                self.memo.iter().map(|(n, c)| (n.clone(), *c)).collect();
            for (node, class) in entries {
                let cn = self.canon(&node);
                let cls = self.find(class);
                match fresh.get(&cn) {
                    Some(other) => {
                        let other = *other;
                        if self.find(other) != cls {
                            pending.push((other, cls));
                        }
                    }
                    None => {
                        fresh.insert(cn, cls);
                    }
                }
            }
            self.memo = fresh;
            if pending.is_empty() {
                return Ok(changed);
            }
            changed = true;
            for (a, b) in pending {
                self.merge(a, b)?;
            }
        }
    }

    fn classes(&mut self) -> Vec<usize> {
        let n = self.parent.len();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for i in 0..n {
            let r = self.find(i);
            if seen.insert(r) {
                out.push(r);
            }
        }
        out
    }
}

/// Builds `W⁻¹I` by congruence saturation over zigzag classes. The word cap
/// bounds canonical representative length, the hom-set cap bounds distinct
/// classes per hom-set, and saturation fails loudly rather than returning a
/// partial category.
pub fn bounded_localization(
    base: &InverseStructure,
    weq: &BTreeSet<String>,
    word_cap: usize,
    homset_cap: usize,
) -> Result<LocalizationData> {
    validate_weq(&base.category, weq, WeqPolicy::TwoOfThree).into_result()?;
    let cat = &base.category;
    let node_budget = (homset_cap * cat.objects().len() * cat.objects().len())
        .saturating_mul(4)
        .max(4096);
    let mut sat = Saturation {
        parent: Vec::new(),
        src: Vec::new(),
        tgt: Vec::new(),
        rep: Vec::new(),
        is_eps: Vec::new(),
        memo: BTreeMap::new(),
        class_nodes: Vec::new(),
        word_cap,
        node_budget,
    };
    // seeds
    let mut eps_class: BTreeMap<String, usize> = BTreeMap::new();
    for o in cat.objects() {
        let id = sat.new_class(Node::Eps(o.clone()), o.clone(), o.clone(), Vec::new())?;
        eps_class.insert(o.clone(), id);
    }
    let mut letter_class: BTreeMap<ZigzagLetter, usize> = BTreeMap::new();
    for m in cat.morphisms() {
        let l = ZigzagLetter::Fwd(m.id.clone());
        let id = sat.new_class(
            Node::Gen(l.clone()),
            m.src.clone(),
            m.tgt.clone(),
            vec![l.clone()],
        )?;
        letter_class.insert(l, id);
    }
    for w in weq {
        let info = cat.morphism(w)?;
        let l = ZigzagLetter::Inv(w.clone());
        let id = sat.new_class(
            Node::Gen(l.clone()),
            info.tgt.clone(),
            info.src.clone(),
            vec![l.clone()],
        )?;
        letter_class.insert(l, id);
    }
    // identity letters collapse to the empty word
    for (o, idm) in cat.identities() {
        let c = letter_class[&ZigzagLetter::Fwd(idm.clone())];
        sat.merge(c, eps_class[o])?;
        if weq.contains(idm) {
            let c = letter_class[&ZigzagLetter::Inv(idm.clone())];
            sat.merge(c, eps_class[o])?;
        }
    }
    // base composition relations
    let comp_entries: Vec<((String, String), String)> = cat
        .composition()
        .iter()
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    for ((g, f), gf) in &comp_entries {
        let cg = letter_class[&ZigzagLetter::Fwd(g.clone())];
        let cf = letter_class[&ZigzagLetter::Fwd(f.clone())];
        let comp = sat.comp(cg, cf)?;
        sat.merge(comp, letter_class[&ZigzagLetter::Fwd(gf.clone())])?;
    }
    // cancellation relations
    for w in weq {
        let info = cat.morphism(w)?;
        let fwd = letter_class[&ZigzagLetter::Fwd(w.clone())];
        let inv = letter_class[&ZigzagLetter::Inv(w.clone())];
        let a = sat.comp(inv, fwd)?;
        sat.merge(a, eps_class[&info.src])?;
        let b = sat.comp(fwd, inv)?;
        sat.merge(b, eps_class[&info.tgt])?;
    }

    // saturation loop
    loop {
        sat.rebuild()?;
        let mut changed = false;
        // totality: composites of all composable representative classes
        let classes = sat.classes();
        for &v in &classes {
            for &u in &classes {
                if sat.find(u) == u && sat.find(v) == v && sat.tgt[u] == sat.src[v] {
                    let before = sat.parent.len();
                    let _ = sat.comp(v, u)?;
                    if sat.parent.len() != before {
                        changed = true;
                    }
                }
            }
        }
        // unit rule
        let entries: Vec<(Node, usize)> = sat.memo.iter().map(|(n, c)| (n.clone(), *c)).collect();
        for (node, class) in &entries {
            if let Node::Comp(v, u) = node {
                let (v, u, class) = (sat.find(*v), sat.find(*u), sat.find(*class));
                if sat.is_eps[u] {
                    changed |= sat.merge(class, v)?;
                }
                if sat.is_eps[v] {
                    changed |= sat.merge(class, u)?;
                }
            }
        }
        // associativity in both directions
        let entries: Vec<(Node, usize)> = sat.memo.iter().map(|(n, c)| (n.clone(), *c)).collect();
        for (node, class) in &entries {
            let Node::Comp(v, u) = node else { continue };
            let (v, u, class) = (sat.find(*v), sat.find(*u), sat.find(*class));
            // u's members of shape Comp(b, a): v ∘ (b ∘ a) = (v ∘ b) ∘ a
            let members: Vec<Node> = sat.class_nodes[u].clone();
            for m in members {
                if let Node::Comp(b, a) = m {
                    let (b, a) = (sat.find(b), sat.find(a));
                    let vb = sat.comp(v, b)?;
                    let vba = sat.comp(vb, a)?;
                    changed |= sat.merge(vba, class)?;
                }
            }
            // v's members of shape Comp(c, b): (c ∘ b) ∘ u = c ∘ (b ∘ u)
            let members: Vec<Node> = sat.class_nodes[v].clone();
            for m in members {
                if let Node::Comp(c, b) = m {
                    let (c, b) = (sat.find(c), sat.find(b));
                    let bu = sat.comp(b, u)?;
                    let cbu = sat.comp(c, bu)?;
                    changed |= sat.merge(cbu, class)?;
                }
            }
        }
        changed |= sat.rebuild()?;
        if !changed {
            break;
        }
    }

    // extract the category
    let classes = sat.classes();
    let mut per_hom: BTreeMap<(String, String), Vec<usize>> = BTreeMap::new();
    for &c in &classes {
        if sat.rep[c].len() > sat.word_cap {
            return Err(Error::SaturationBudgetExceeded {
                detail: format!("representative exceeds word cap {}", sat.word_cap),
            });
        }
        per_hom
            .entry((sat.src[c].clone(), sat.tgt[c].clone()))
            .or_default()
            .push(c);
    }
    for (pair, cs) in &per_hom {
        if cs.len() > homset_cap {
            return Err(Error::SaturationBudgetExceeded {
                detail: format!(
                    "hom-set ({}, {}) has {} classes, cap {homset_cap}",
                    pair.0,
                    pair.1,
                    cs.len()
                ),
            });
        }
    }
    // names: empty word -> base identity id; otherwise the rendered word,
    // disambiguated against collisions deterministically
    let mut names: BTreeMap<usize, String> = BTreeMap::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    for &c in &classes {
        let mut name = if sat.rep[c].is_empty() {
            cat.identity_of(&sat.src[c])?.to_string()
        } else {
            let mut parts: Vec<String> = sat.rep[c].iter().map(|l| l.render()).collect();
            parts.reverse(); // display in application order, rightmost first
            parts.join("∘")
        };
        while !used.insert(name.clone()) {
            name.push('\'');
        }
        names.insert(c, name);
    }
    let mut morphisms = Vec::new();
    let mut identities = BTreeMap::new();
    for &c in &classes {
        morphisms.push(MorInfo {
            id: names[&c].clone(),
            src: sat.src[c].clone(),
            tgt: sat.tgt[c].clone(),
        });
        if sat.rep[c].is_empty() {
            identities.insert(sat.src[c].clone(), names[&c].clone());
        }
    }
    let mut composition = BTreeMap::new();
    for &v in &classes {
        for &u in &classes {
            if sat.tgt[u] == sat.src[v] {
                let comp = sat.comp(v, u)?;
                let comp = sat.find(comp);
                let name = names
                    .get(&comp)
                    .ok_or_else(|| Error::SaturationBudgetExceeded {
                        detail: "composition escaped the saturated classes".into(),
                    })?;
                composition.insert((names[&v].clone(), names[&u].clone()), name.clone());
            }
        }
    }
    let target = FinCategory::new(cat.objects().to_vec(), morphisms, identities, composition)?;
    crate::fincat::validate_category(&target).into_result()?;
    let mut morphism_map = BTreeMap::new();
    for m in cat.morphisms() {
        let c = sat.find(letter_class[&ZigzagLetter::Fwd(m.id.clone())]);
        morphism_map.insert(m.id.clone(), names[&c].clone());
    }
    let gamma = FinFunctor {
        source: cat.clone(),
        target: target.clone(),
        object_map: cat
            .objects()
            .iter()
            .map(|o| (o.clone(), o.clone()))
            .collect(),
        morphism_map,
    };
    gamma.validate().into_result()?;
    let words = classes
        .iter()
        .map(|c| (names[c].clone(), sat.rep[*c].clone()))
        .collect();
    let loc = LocalizationData {
        base: base.clone(),
        weq: weq.clone(),
        target,
        gamma,
        words,
    };
    // soundness: every inverted map has a two-sided inverse
    for w in weq {
        let gw = loc.gamma.on_morphism(w)?;
        if !loc.target.is_iso(gw) {
            return Err(Error::Invalid(format!("γ({w}) is not invertible")));
        }
    }
    Ok(loc)
}

/// Validates a user-supplied localization: functor laws, identity on
/// objects, weak equivalences inverted, and generation (every localized
/// morphism reachable from images of base morphisms and inverses of
/// images of weak equivalences); the reachability closure also yields the
/// zigzag words.
pub fn localization_from_parts(
    base: InverseStructure,
    weq: BTreeSet<String>,
    target: FinCategory,
    gamma: FinFunctor,
) -> Result<LocalizationData> {
    validate_weq(&base.category, &weq, WeqPolicy::TwoOfThree).into_result()?;
    gamma.validate().into_result()?;
    if gamma.source != base.category || gamma.target != target {
        return Err(Error::ShapeMismatch(
            "functor endpoints do not match".into(),
        ));
    }
    for o in base.category.objects() {
        if gamma.on_object(o)? != o {
            return Err(Error::Invalid(format!(
                "localization functor moves object `{o}`"
            )));
        }
    }
    // seed words with generator images and inverted weak equivalences
    let mut words: BTreeMap<String, Vec<ZigzagLetter>> = BTreeMap::new();
    for (o, idm) in target.identities() {
        let _ = o;
        words.entry(idm.clone()).or_default();
    }
    for m in base.category.morphisms() {
        let gm = gamma.on_morphism(&m.id)?.to_string();
        words
            .entry(gm)
            .or_insert_with(|| vec![ZigzagLetter::Fwd(m.id.clone())]);
    }
    for w in &weq {
        let gw = gamma.on_morphism(w)?;
        let inv_gw = target
            .inverse_of(gw)
            .ok_or_else(|| Error::Invalid(format!("γ({w}) is not invertible")))?
            .to_string();
        words
            .entry(inv_gw)
            .or_insert_with(|| vec![ZigzagLetter::Inv(w.clone())]);
    }
    // closure under composition
    loop {
        let mut added: Vec<(String, Vec<ZigzagLetter>)> = Vec::new();
        let known: Vec<(String, Vec<ZigzagLetter>)> =
            words.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        for (m1, w1) in &known {
            for (m2, w2) in &known {
                if target.tgt(m1)? != target.src(m2)? {
                    continue;
                }
                let composite = target.compose(m2, m1)?.to_string();
                if !words.contains_key(&composite) && !added.iter().any(|(m, _)| *m == composite) {
                    let mut w = w1.clone();
                    w.extend(w2.iter().cloned());
                    added.push((composite, w));
                }
            }
        }
        if added.is_empty() {
            break;
        }
        for (m, w) in added {
            words.insert(m, w);
        }
    }
    for m in target.morphisms() {
        if !words.contains_key(&m.id) {
            return Err(Error::Invalid(format!(
                "localized morphism `{}` is not generated",
                m.id
            )));
        }
    }
    Ok(LocalizationData {
        base,
        weq,
        target,
        gamma,
        words,
    })
}

impl LocalizationData {
    /// The trivial localization at the identities.
    pub fn trivial(base: &InverseStructure) -> Result<LocalizationData> {
        let weq: BTreeSet<String> = base.category.identities().values().cloned().collect();
        bounded_localization(
            base,
            &weq,
            crate::DEFAULT_WORD_CAP,
            crate::DEFAULT_HOMSET_CAP,
        )
    }

    /// Restricts a localized diagram to an ordinary one on the base.
    pub fn restrict(&self, x: &Diagram) -> Result<Diagram> {
        restrict_diagram(x, &self.gamma)
    }

    pub fn restrict_map(&self, t: &NatTrans) -> Result<NatTrans> {
        restrict_nat(t, &self.gamma)
    }

    /// Lifts a weak-equivalence-inverting diagram on the base to the
    /// localization by evaluating zigzag words.
    pub fn lift(&self, x: &Diagram) -> Result<Diagram> {
        if x.index != self.base.category {
            return Err(Error::ShapeMismatch("diagram is not on the base".into()));
        }
        let sets: BTreeMap<String, FinSetObj> = x.sets.clone();
        let mut maps = BTreeMap::new();
        for m in self.target.morphisms() {
            let word = self
                .words
                .get(&m.id)
                .ok_or_else(|| Error::UnknownMorphism(m.id.clone()))?;
            let mut acc = FinSetMap::identity(&sets[&m.src]);
            for letter in word {
                let step = match letter {
                    ZigzagLetter::Fwd(f) => x.map(f)?.clone(),
                    ZigzagLetter::Inv(w) => x.map(w)?.inverse().map_err(|_| {
                        Error::ShapeMismatch(format!(
                            "diagram does not invert the weak equivalence `{w}`"
                        ))
                    })?,
                };
                acc = step.compose(&acc)?;
            }
            maps.insert(m.id.clone(), acc);
        }
        Diagram::new(self.target.clone(), sets, maps)
    }

    /// Lifts a natural transformation between lifted diagrams.
    pub fn lift_map(&self, t: &NatTrans) -> Result<NatTrans> {
        let src = self.lift(&t.src)?;
        let tgt = self.lift(&t.tgt)?;
        NatTrans::new(src, tgt, t.components.clone())
    }
}

/// Checks that every morphism of the category is an epimorphism.
pub fn check_all_epi(h: &FinCategory) -> ValidationReport {
    let mut report = ValidationReport::default();
    for f in h.morphisms() {
        for g in h.morphisms() {
            if g.src != f.tgt {
                continue;
            }
            for k in h.morphisms() {
                if k.src != g.src || k.tgt != g.tgt || k.id <= g.id {
                    continue;
                }
                let gf = h.compose(&g.id, &f.id);
                let kf = h.compose(&k.id, &f.id);
                if let (Ok(a), Ok(b)) = (gf, kf) {
                    if a == b {
                        report.push(Violation::Other {
                            detail: format!(
                                "`{}` is not epi: `{}` and `{}` agree after it",
                                f.id, g.id, k.id
                            ),
                        });
                    }
                }
            }
        }
    }
    report
}

/// Why initiality failed at one localized map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitialityFailure {
    EmptyComma,
    DisconnectedComma,
}

#[derive(Debug, Clone)]
pub struct ObjectInitiality {
    pub holds: bool,
    /// First failing localized map in canonical order, with the reason.
    pub failing: Option<(String, InitialityFailure)>,
}

#[derive(Debug, Clone)]
pub struct InitialityReport {
    pub per_object: BTreeMap<String, ObjectInitiality>,
}

impl InitialityReport {
    pub fn holds_at(&self, i: &str) -> bool {
        self.per_object.get(i).map(|o| o.holds).unwrap_or(false)
    }

    pub fn holds_everywhere(&self) -> bool {
        self.per_object.values().all(|o| o.holds)
    }
}

/// For each object `i`, checks that `γ|_i : I^-(i) -> (i/Ho I)°` is initial:
/// the comma category over every non-identity localized map out of `i` is
/// non-empty and connected.
pub fn check_initiality(loc: &LocalizationData) -> Result<InitialityReport> {
    let base = &loc.base;
    let h = &loc.target;
    let mut per_object = BTreeMap::new();
    for i in base.category.objects() {
        let coslice = strict_coslice(base, i)?;
        let idh = h.identity_of(i)?;
        let mut verdict = ObjectInitiality {
            holds: true,
            failing: None,
        };
        let mut out: Vec<&str> = h
            .morphisms_from(i)
            .into_iter()
            .filter(|m| *m != idh)
            .collect();
        out.sort();
        for f in out {
            let f_tgt = h.tgt(f)?;
            // comma objects: (u in I^-(i), localized h with h ∘ γu = f)
            let mut comma: Vec<(String, String)> = Vec::new();
            for u in coslice.category.objects() {
                let gu = loc.gamma.on_morphism(u)?;
                let cod_u = base.category.tgt(u)?;
                for hmor in h.hom(cod_u, f_tgt) {
                    if h.compose(hmor, gu)? == f {
                        comma.push((u.clone(), hmor.to_string()));
                    }
                }
            }
            if comma.is_empty() {
                verdict.holds = false;
                verdict.failing = Some((f.to_string(), InitialityFailure::EmptyComma));
                break;
            }
            // connectivity by union-find over comma morphisms
            let mut parent: Vec<usize> = (0..comma.len()).collect();
            fn find(parent: &mut [usize], mut x: usize) -> usize {
                while parent[x] != x {
                    parent[x] = parent[parent[x]];
                    x = parent[x];
                }
                x
            }
            for m in coslice.category.morphisms() {
                let v = &coslice.witness_of[&m.id];
                let gv = loc.gamma.on_morphism(v)?;
                for (a, (u1, h1)) in comma.iter().enumerate() {
                    if *u1 != m.src {
                        continue;
                    }
                    for (b, (u2, h2)) in comma.iter().enumerate() {
                        if *u2 != m.tgt {
                            continue;
                        }
                        // v : u1 -> u2 in the coslice; need h1 = h2 ∘ γv
                        if h.compose(h2, gv)? == *h1 {
                            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                            if ra != rb {
                                parent[ra] = rb;
                            }
                        }
                    }
                }
            }
            let root = find(&mut parent, 0);
            let connected = (0..comma.len()).all(|k| find(&mut parent, k) == root);
            if !connected {
                verdict.holds = false;
                verdict.failing = Some((f.to_string(), InitialityFailure::DisconnectedComma));
                break;
            }
        }
        per_object.insert(i.clone(), verdict);
    }
    Ok(InitialityReport { per_object })
}

/// The homotopical matching object `M̄_c X`: the limit of `X` over the
/// punctured coslice `(c/H)°`, with its matching map.
pub fn homotopical_matching(
    h: &FinCategory,
    x: &Diagram,
    c: &str,
    cap: usize,
) -> Result<MatchingResult> {
    if x.index != *h {
        return Err(Error::ShapeMismatch(
            "diagram is not on the category".into(),
        ));
    }
    let coslice = punctured_coslice(h, c)?;
    let mut sets = BTreeMap::new();
    for f in coslice.category.objects() {
        sets.insert(f.clone(), x.set(&coslice.codomain_of[f])?.clone());
    }
    let mut maps = BTreeMap::new();
    for m in coslice.category.morphisms() {
        maps.insert(m.id.clone(), x.map(&coslice.witness_of[&m.id])?.clone());
    }
    let lim = limit(&coslice.category, &sets, &maps, cap)?;
    let xc = x.set(c)?;
    let table = xc
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
    let matching_map = Some(FinSetMap::new(xc.clone(), lim.apex.clone(), table)?);
    Ok(MatchingResult {
        coslice,
        limit: lim,
        matching_map,
    })
}

/// The canonical comparison `κ_{X,i} : M̄_{[i]} X -> M_i(γ*X)`, by
/// restricting the limiting cone along `I^-(i) -> ([i]/Ho I)°`.
pub fn matching_comparison(
    loc: &LocalizationData,
    x: &Diagram,
    i: &str,
    cap: usize,
) -> Result<FinSetMap> {
    let m_ho = homotopical_matching(&loc.target, x, i, cap)?;
    let gx = loc.restrict(x)?;
    let m_base = matching_object(&loc.base, &gx, i, cap)?;
    let table = m_ho
        .object()
        .elements()
        .iter()
        .map(|e| {
            let comps = m_base
                .coslice
                .category
                .objects()
                .iter()
                .map(|u| {
                    let gu = loc.gamma.on_morphism(u)?;
                    Ok((u.clone(), m_ho.leg(gu)?.apply(e)?.to_string()))
                })
                .collect::<Result<_>>()?;
            Ok((e.clone(), m_base.limit.element_from_components(&comps)?))
        })
        .collect::<Result<_>>()?;
    let kappa = FinSetMap::new(m_ho.object().clone(), m_base.object().clone(), table)?;
    // factorization m_i(γ*X) = κ ∘ m̄_{[i]}X
    let m_bar = m_ho
        .matching_map
        .as_ref()
        .ok_or_else(|| Error::ShapeMismatch("no homotopical matching map".into()))?;
    let m_low = m_base
        .matching_map
        .as_ref()
        .ok_or_else(|| Error::ShapeMismatch("no base matching map".into()))?;
    if kappa.compose(m_bar)? != *m_low {
        return Err(Error::Invalid(format!(
            "matching comparison does not factor the matching map at `{i}`"
        )));
    }
    Ok(kappa)
}

// ---------------------------------------------------------------------------
// The homotopical dependent product
// ---------------------------------------------------------------------------

/// The comma coslice `(c ↓ γ)`: objects are all localized maps out of `c`
/// (including the identity), morphisms are base-morphism witnesses.
fn gamma_comma(loc: &LocalizationData, c: &str) -> Result<Coslice> {
    let h = &loc.target;
    let base = &loc.base.category;
    let objects: Vec<String> = h.morphisms_from(c).into_iter().map(String::from).collect();
    let obj_set: BTreeSet<&String> = objects.iter().collect();
    let mut codomain_of = BTreeMap::new();
    for f in &objects {
        codomain_of.insert(f.clone(), h.tgt(f)?.to_string());
    }
    let mut morphisms = Vec::new();
    let mut witness_of = BTreeMap::new();
    let mut identities = BTreeMap::new();
    for f in &objects {
        let cod_f = h.tgt(f)?;
        for v in base.morphisms_from(cod_f) {
            let gv = loc.gamma.on_morphism(v)?;
            let vf = h.compose(gv, f)?.to_string();
            if !obj_set.contains(&vf) {
                continue;
            }
            let id = encode_tuple(&[f.as_str(), v]);
            morphisms.push(MorInfo {
                id: id.clone(),
                src: f.clone(),
                tgt: vf,
            });
            witness_of.insert(id.clone(), v.to_string());
            if base.is_identity(v) {
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
            let v1 = &witness_of[&first.id];
            let v2 = &witness_of[&second.id];
            let v21 = base.compose(v2, v1)?;
            composition.insert(
                (second.id.clone(), first.id.clone()),
                encode_tuple(&[first.src.as_str(), v21]),
            );
        }
    }
    let category = FinCategory::new(objects, morphisms, identities, composition)?;
    Ok(Coslice {
        category,
        codomain_of,
        witness_of,
    })
}

/// The right Kan extension `Ran_γ X` of a base diagram along γ, as a
/// localized diagram, together with the per-object comma limits.
struct RanGamma {
    diagram: Diagram,
    limits: BTreeMap<String, (Coslice, crate::logicat::LimitResult)>,
}

fn ran_gamma(loc: &LocalizationData, x: &Diagram) -> Result<RanGamma> {
    if x.index != loc.base.category {
        return Err(Error::ShapeMismatch("diagram is not on the base".into()));
    }
    let h = &loc.target;
    let mut limits = BTreeMap::new();
    let mut sets = BTreeMap::new();
    for c in h.objects() {
        let comma = gamma_comma(loc, c)?;
        let mut comma_sets = BTreeMap::new();
        for f in comma.category.objects() {
            comma_sets.insert(f.clone(), x.set(&comma.codomain_of[f])?.clone());
        }
        let mut comma_maps = BTreeMap::new();
        for m in comma.category.morphisms() {
            comma_maps.insert(m.id.clone(), x.map(&comma.witness_of[&m.id])?.clone());
        }
        let lim = limit(
            &comma.category,
            &comma_sets,
            &comma_maps,
            crate::DEFAULT_CAP,
        )?;
        sets.insert(c.clone(), lim.apex.clone());
        limits.insert(c.clone(), (comma, lim));
    }
    let mut maps = BTreeMap::new();
    for m in h.morphisms() {
        let (_, src_lim) = &limits[&m.src];
        let (tgt_comma, tgt_lim) = &limits[&m.tgt];
        let table = src_lim
            .apex
            .elements()
            .iter()
            .map(|e| {
                let comps = tgt_comma
                    .category
                    .objects()
                    .iter()
                    .map(|f2| {
                        let back = h.compose(f2, &m.id)?;
                        Ok((f2.clone(), src_lim.legs[back].apply(e)?.to_string()))
                    })
                    .collect::<Result<_>>()?;
                Ok((e.clone(), tgt_lim.element_from_components(&comps)?))
            })
            .collect::<Result<_>>()?;
        maps.insert(
            m.id.clone(),
            FinSetMap::new(src_lim.apex.clone(), tgt_lim.apex.clone(), table)?,
        );
    }
    Ok(RanGamma {
        diagram: Diagram::new(h.clone(), sets, maps)?,
        limits,
    })
}

/// Induced map `Ran_γ X -> Ran_γ Y` of a base-level transformation.
fn ran_gamma_map(
    loc: &LocalizationData,
    t: &NatTrans,
    src: &RanGamma,
    tgt: &RanGamma,
) -> Result<NatTrans> {
    let h = &loc.target;
    let components = h
        .objects()
        .iter()
        .map(|c| {
            let (comma, src_lim) = &src.limits[c];
            let (_, tgt_lim) = &tgt.limits[c];
            let table = src_lim
                .apex
                .elements()
                .iter()
                .map(|e| {
                    let comps = comma
                        .category
                        .objects()
                        .iter()
                        .map(|f| {
                            let j = &comma.codomain_of[f];
                            Ok((
                                f.clone(),
                                t.component(j)?
                                    .apply(src_lim.legs[f].apply(e)?)?
                                    .to_string(),
                            ))
                        })
                        .collect::<Result<_>>()?;
                    Ok((e.clone(), tgt_lim.element_from_components(&comps)?))
                })
                .collect::<Result<_>>()?;
            Ok((
                c.clone(),
                FinSetMap::new(src_lim.apex.clone(), tgt_lim.apex.clone(), table)?,
            ))
        })
        .collect::<Result<_>>()?;
    NatTrans::new(src.diagram.clone(), tgt.diagram.clone(), components)
}

/// The unit `X -> Ran_γ(γ*X)` of `γ* ⊣ Ran_γ` at a localized diagram.
fn ran_unit(loc: &LocalizationData, x: &Diagram, ran: &RanGamma) -> Result<NatTrans> {
    let h = &loc.target;
    let components = h
        .objects()
        .iter()
        .map(|c| {
            let (comma, lim) = &ran.limits[c];
            let table = x
                .set(c)?
                .elements()
                .iter()
                .map(|e| {
                    let comps = comma
                        .category
                        .objects()
                        .iter()
                        .map(|f| Ok((f.clone(), x.map(f)?.apply(e)?.to_string())))
                        .collect::<Result<_>>()?;
                    Ok((e.clone(), lim.element_from_components(&comps)?))
                })
                .collect::<Result<_>>()?;
            Ok((
                c.clone(),
                FinSetMap::new(x.set(c)?.clone(), lim.apex.clone(), table)?,
            ))
        })
        .collect::<Result<_>>()?;
    NatTrans::new(x.clone(), ran.diagram.clone(), components)
}

/// The homotopical dependent product: the pullback of
/// `Ran_γ(Π_{γ*B} γ*C) -> Ran_γ(γ*A)` along the unit `A -> Ran_γ(γ*A)`.
/// The per-object pullback characterization through homotopical matching
/// objects is verified before returning.
pub fn pi_homotopical(
    loc: &LocalizationData,
    f: &NatTrans,
    g: &NatTrans,
    cap: usize,
) -> Result<PiOf<DiagCat>> {
    let h = &loc.target;
    let epi_report = check_all_epi(h);
    if !epi_report.is_clean() {
        return Err(Error::EpiAssumptionFailed(format!(
            "{}",
            epi_report.violations[0]
        )));
    }
    if f.src.index != *h || g.tgt != f.src {
        return Err(Error::ShapeMismatch(
            "maps are not a bundle over the localization".into(),
        ));
    }
    let gf = loc.restrict_map(f)?;
    let gg = loc.restrict_map(g)?;
    let pi_i = crate::matching::pi_inverse(&loc.base, &gf, &gg, cap)?;
    // assemble the Kan-extension pullback
    let ran_a = ran_gamma(loc, &gf.tgt)?;
    let ran_pi = ran_gamma(loc, &pi_i.total)?;
    let ran_proj = ran_gamma_map(loc, &pi_i.projection, &ran_pi, &ran_a)?;
    let unit_a = ran_unit(loc, &f.tgt, &ran_a)?;
    let handle = DiagCat::bare(h.clone());
    let pb = handle.pullback(&unit_a, &ran_proj)?;
    let total = pb.apex.clone();
    let projection = pb.left.clone();
    // counit: evaluate the Kan tuple at the identity, then the base counit
    let counit_src = handle.pullback(f, &projection)?;
    let c_diag = &g.src;
    let counit_components = h
        .objects()
        .iter()
        .map(|cobj| {
            let (_, lim) = &ran_pi.limits[cobj];
            let idh = h.identity_of(cobj)?;
            let table = counit_src
                .apex
                .set(cobj)?
                .elements()
                .iter()
                .map(|pair| {
                    let b_elt = counit_src.left.component(cobj)?.apply(pair)?;
                    let p_elt = counit_src.right.component(cobj)?.apply(pair)?;
                    let ran_elt = pb.right.component(cobj)?.apply(p_elt)?;
                    let pi_elt = lim.legs[idh].apply(ran_elt)?;
                    let v = pi_i
                        .counit
                        .component(cobj)?
                        .apply(&encode_pair(b_elt, pi_elt))?;
                    Ok((pair.clone(), v.to_string()))
                })
                .collect::<Result<_>>()?;
            Ok((
                cobj.clone(),
                FinSetMap::new(
                    counit_src.apex.set(cobj)?.clone(),
                    c_diag.set(cobj)?.clone(),
                    table,
                )?,
            ))
        })
        .collect::<Result<_>>()?;
    let counit = NatTrans::new(counit_src.apex.clone(), c_diag.clone(), counit_components)?;
    let pi = Pi {
        f: f.clone(),
        g: g.clone(),
        total,
        projection,
        counit,
        counit_src,
    };
    // the per-object matching-pullback characterization must hold
    for c in h.objects() {
        verify_ho_pi_characterization(loc, &pi, c, cap)?;
    }
    Ok(pi)
}

/// The per-object construction pieces on the homotopical side, mirroring
/// the ordinary degreewise induction with `M̄` in place of `M`.
pub struct HoPiLevel {
    pub pi_i: PiOf<FinSetCat>,
    pub m_a: MatchingResult,
    pub m_b: MatchingResult,
    pub m_c: MatchingResult,
    pub m_pi: MatchingResult,
    pub m_if: FinSetMap,
    pub m_ig: FinSetMap,
    pub pi_m: PiOf<FinSetCat>,
    pub m_ev_sharp: FinSetMap,
    pub pb1: PullbackOf<FinSetCat>,
    pub pb2: PullbackOf<FinSetCat>,
    pub step1: FinSetMap,
    pub pbz: PullbackOf<FinSetCat>,
    pub pi_bz: PiOf<FinSetCat>,
    pub step2: FinSetMap,
    pub post: FinSetMap,
}

/// Builds the `M̄`-side pieces at one object from a completed homotopical
/// product.
pub fn ho_pi_level(
    loc: &LocalizationData,
    pi: &PiOf<DiagCat>,
    c: &str,
    cap: usize,
) -> Result<HoPiLevel> {
    let h = &loc.target;
    let cat = FinSetCat;
    let f = &pi.f;
    let g = &pi.g;
    let a = &f.tgt;
    let b = &f.src;
    let cd = &g.src;
    let f_c = f.component(c)?;
    let g_c = g.component(c)?;
    let m_a = homotopical_matching(h, a, c, cap)?;
    let m_b = homotopical_matching(h, b, c, cap)?;
    let m_c = homotopical_matching(h, cd, c, cap)?;
    let m_pi = homotopical_matching(h, &pi.total, c, cap)?;
    let m_if = crate::matching::matching_induced(&m_b, &m_a, &|j| Ok(f.component(j)?.clone()))?;
    let m_ig = crate::matching::matching_induced(&m_c, &m_b, &|j| Ok(g.component(j)?.clone()))?;
    let m_proj = crate::matching::matching_induced(&m_pi, &m_a, &|j| {
        Ok(pi.projection.component(j)?.clone())
    })?;
    let pi_i = pi_finset(f_c, g_c, cap)?;
    let pi_m = pi_finset(&m_if, &m_ig, cap)?;
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
                        let ev_j = pi.counit.component(j)?;
                        Ok((w.clone(), ev_j.apply(&encode_pair(t_w, s_w))?.to_string()))
                    })
                    .collect::<Result<_>>()?;
                graph.insert(t.clone(), m_c.limit.element_from_components(&comps)?);
            }
            Ok((s.clone(), section_element(&pi_m, &base, &graph)?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let m_ev_sharp = FinSetMap::new(m_pi.object().clone(), pi_m.total.clone(), m_ev_sharp_table)?;
    let m_ia = m_a.matching_map.clone().unwrap();
    let m_ib = m_b.matching_map.clone().unwrap();
    let m_ic = m_c.matching_map.clone().unwrap();
    let pb1 = cat.pullback(&m_ia, &m_proj)?;
    let pb2 = cat.pullback(&m_ia, &pi_m.projection)?;
    let step1 = cat.pullback_factor(&pb2, &pb1.left, &m_ev_sharp.compose(&pb1.right)?)?;
    let pbz = cat.pullback(&m_ib, &m_ig)?;
    let pi_bz = pi_finset(f_c, &pbz.left, cap)?;
    let step2_table = pb2
        .apex
        .elements()
        .iter()
        .map(|pair| {
            let a_elt = pb2.left.apply(pair)?;
            let sigma = pb2.right.apply(pair)?;
            let mut graph = BTreeMap::new();
            for b_elt in f_c.src.elements() {
                if f_c.apply(b_elt)? != a_elt {
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
    let post_table = pi_i
        .total
        .elements()
        .iter()
        .map(|s| {
            let a_elt = pi_i.projection.apply(s)?;
            let mut graph = BTreeMap::new();
            for b_elt in f_c.src.elements() {
                if f_c.apply(b_elt)? != a_elt {
                    continue;
                }
                let c_elt = pi_i.counit.apply(&encode_pair(b_elt, s))?;
                graph.insert(b_elt.clone(), encode_pair(b_elt, m_ic.apply(c_elt)?));
            }
            Ok((s.clone(), section_element(&pi_bz, a_elt, &graph)?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let post = FinSetMap::new(pi_i.total.clone(), pi_bz.total.clone(), post_table)?;
    Ok(HoPiLevel {
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
    })
}

/// The canonical maps from a product component into the two corners of the
/// matching-pullback square.
fn ho_component_maps(
    pi: &PiOf<DiagCat>,
    level: &HoPiLevel,
    c: &str,
) -> Result<(FinSetMap, FinSetMap)> {
    let total_c = pi.total.set(c)?;
    let f_c = pi.f.component(c)?;
    let m_bar = level.m_pi.matching_map.as_ref().unwrap();
    let to_sec_table = total_c
        .elements()
        .iter()
        .map(|x| {
            let a_elt = pi.projection.component(c)?.apply(x)?;
            let mut graph = BTreeMap::new();
            for b_elt in f_c.src.elements() {
                if f_c.apply(b_elt)? != a_elt {
                    continue;
                }
                let v = pi.counit.component(c)?.apply(&encode_pair(b_elt, x))?;
                graph.insert(b_elt.clone(), v.to_string());
            }
            Ok((x.clone(), section_element(&level.pi_i, a_elt, &graph)?))
        })
        .collect::<Result<_>>()?;
    let to_sec = FinSetMap::new(total_c.clone(), level.pi_i.total.clone(), to_sec_table)?;
    let to_pb1_table = total_c
        .elements()
        .iter()
        .map(|x| {
            let a_elt = pi.projection.component(c)?.apply(x)?;
            let tag = encode_pair(a_elt, m_bar.apply(x)?);
            if !level.pb1.apex.contains(&tag) {
                return Err(Error::Invalid("matching pair escapes the pullback".into()));
            }
            Ok((x.clone(), tag))
        })
        .collect::<Result<_>>()?;
    let to_pb1 = FinSetMap::new(total_c.clone(), level.pb1.apex.clone(), to_pb1_table)?;
    Ok((to_sec, to_pb1))
}

/// Asserts that the component at `c` is the pullback of
/// `Π_{Bc}(g_c, m̄_c C)` along `(f_c ×_{M̄B} ev)‡ ∘ (A_c ×_{M̄A} M̄(ev)‡)`.
fn verify_ho_pi_characterization(
    loc: &LocalizationData,
    pi: &PiOf<DiagCat>,
    c: &str,
    cap: usize,
) -> Result<()> {
    let level = ho_pi_level(loc, pi, c, cap)?;
    let (to_sec, to_pb1) = ho_component_maps(pi, &level, c)?;
    let route = level.step2.compose(&level.step1)?;
    let total_c = pi.total.set(c)?;
    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
    for x in total_c.elements() {
        let sec = to_sec.apply(x)?.to_string();
        let pb1_tag = to_pb1.apply(x)?.to_string();
        if level.post.apply(&sec)? != route.apply(&pb1_tag)? {
            return Err(Error::Invalid(format!(
                "homotopical product square does not commute at `{c}`"
            )));
        }
        if !seen.insert((sec, pb1_tag)) {
            return Err(Error::Invalid(format!(
                "homotopical product is not monic into the corner at `{c}`"
            )));
        }
    }
    // surjectivity onto the fiber product
    for sec in level.pi_i.total.elements() {
        for pb1_tag in level.pb1.apex.elements() {
            if level.post.apply(sec)? == route.apply(pb1_tag)?
                && !seen.contains(&(sec.clone(), pb1_tag.clone()))
            {
                return Err(Error::Invalid(format!(
                    "homotopical product misses a compatible pair at `{c}`"
                )));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// The comparison bundle
// ---------------------------------------------------------------------------

/// Per-object comparison data between the homotopical and ordinary
/// products.
pub struct ObjectComparison {
    pub kappa_a: FinSetMap,
    pub kappa_b: FinSetMap,
    pub kappa_c: FinSetMap,
    /// `φ̃ : M̄_i(Π_B C) -> M_i(Π_{γ*B} γ*C)`.
    pub tphi: FinSetMap,
    /// `ψ : A_i ×_{M̄A} M̄(Π) -> A_i ×_{MA} M(Π')`.
    pub psi: FinSetMap,
    /// `ρ̃` and `σ`, present when the three κ's are invertible.
    pub rho_tilde: Option<FinSetMap>,
    pub sigma: Option<FinSetMap>,
    pub phi_bijective: bool,
    pub kappa_bijective: bool,
    pub initial: bool,
}

/// The comparison between `γ*(Π_B C)` and `Π_{γ*B} γ*C`: the natural map
/// `φ`, the matching comparisons, the decomposition maps where available,
/// and the per-object verdict.
pub struct ComparisonBundle {
    pub loc: LocalizationData,
    pub ho_pi: PiOf<DiagCat>,
    pub inv_pi: PiOf<DiagCat>,
    /// `φ : γ*(Π_B C) -> Π_{γ*B} γ*C` over `γ*A`.
    pub phi: NatTrans,
    pub per_object: BTreeMap<String, ObjectComparison>,
    pub all_epi: bool,
    pub initiality: InitialityReport,
}

/// Builds the comparison bundle for a homotopical bundle `g: C -> B`,
/// `f: B -> A`.
pub fn pi_comparison(
    loc: &LocalizationData,
    f: &NatTrans,
    g: &NatTrans,
    cap: usize,
) -> Result<ComparisonBundle> {
    let ho_pi = pi_homotopical(loc, f, g, cap)?;
    let gf = loc.restrict_map(f)?;
    let gg = loc.restrict_map(g)?;
    let (inv_pi, inv_levels) = pi_inverse_parts(&loc.base, &gf, &gg, cap)?;
    // φ: the sharp transpose of γ*(ev) under the base adjunction
    let restricted_proj = loc.restrict_map(&ho_pi.projection)?;
    let restricted_ev = loc.restrict_map(&ho_pi.counit)?;
    let phi =
        crate::matching::sharp_inverse(&loc.base, &inv_pi, &restricted_proj, &restricted_ev, cap)?;
    let initiality = check_initiality(loc)?;
    let all_epi = check_all_epi(&loc.target).is_clean();
    let mut per_object = BTreeMap::new();
    for i in loc.base.category.objects() {
        let level = ho_pi_level(loc, &ho_pi, i, cap)?;
        let inv_level = &inv_levels[i.as_str()];
        let kappa_a = matching_comparison(loc, &f.tgt, i, cap)?;
        let kappa_b = matching_comparison(loc, &f.src, i, cap)?;
        let kappa_c = matching_comparison(loc, &g.src, i, cap)?;
        // φ̃: tuple-wise application of φ through the coslice comparison
        let tphi = tphi_at(loc, &level, inv_level, &phi, i)?;
        // ψ = (id, φ̃) on the pullbacks
        let psi_table = level
            .pb1
            .apex
            .elements()
            .iter()
            .map(|pair| {
                let a_elt = level.pb1.left.apply(pair)?;
                let mbar = level.pb1.right.apply(pair)?;
                let tag = encode_pair(a_elt, tphi.apply(mbar)?);
                if !inv_level.pb1.apex.contains(&tag) {
                    return Err(Error::Invalid(format!(
                        "ψ escapes the ordinary pullback at `{i}`"
                    )));
                }
                Ok((pair.clone(), tag))
            })
            .collect::<Result<_>>()?;
        let psi = FinSetMap::new(
            level.pb1.apex.clone(),
            inv_level.pb1.apex.clone(),
            psi_table,
        )?;
        let kappa_bijective =
            kappa_a.is_bijective() && kappa_b.is_bijective() && kappa_c.is_bijective();
        let (rho_tilde, sigma) = if kappa_bijective {
            let rho = rho_at(&level, inv_level, &kappa_a, &kappa_b, &kappa_c)?;
            let rho_tilde_table = level
                .pb2
                .apex
                .elements()
                .iter()
                .map(|pair| {
                    let a_elt = level.pb2.left.apply(pair)?;
                    let sigma_elt = level.pb2.right.apply(pair)?;
                    let tag = encode_pair(a_elt, rho.apply(sigma_elt)?);
                    if !inv_level.pb2.apex.contains(&tag) {
                        return Err(Error::Invalid(format!("ρ̃ escapes the pullback at `{i}`")));
                    }
                    Ok((pair.clone(), tag))
                })
                .collect::<Result<_>>()?;
            let rho_tilde = FinSetMap::new(
                level.pb2.apex.clone(),
                inv_level.pb2.apex.clone(),
                rho_tilde_table,
            )?;
            let sigma = sigma_at(&level, inv_level, &kappa_c)?;
            (Some(rho_tilde), Some(sigma))
        } else {
            (None, None)
        };
        let phi_bijective = phi.component(i)?.is_bijective();
        per_object.insert(
            i.clone(),
            ObjectComparison {
                kappa_a,
                kappa_b,
                kappa_c,
                tphi,
                psi,
                rho_tilde,
                sigma,
                phi_bijective,
                kappa_bijective,
                initial: initiality.holds_at(i),
            },
        );
    }
    Ok(ComparisonBundle {
        loc: loc.clone(),
        ho_pi,
        inv_pi,
        phi,
        per_object,
        all_epi,
        initiality,
    })
}

/// `φ̃` at one object: the unique map making the legs commute with `φ`.
fn tphi_at(
    loc: &LocalizationData,
    level: &HoPiLevel,
    inv_level: &PiLevel,
    phi: &NatTrans,
    i: &str,
) -> Result<FinSetMap> {
    let table = level
        .m_pi
        .object()
        .elements()
        .iter()
        .map(|e| {
            let comps = inv_level
                .m_pi
                .coslice
                .category
                .objects()
                .iter()
                .map(|u| {
                    let j = &inv_level.m_pi.coslice.codomain_of[u];
                    let gu = loc.gamma.on_morphism(u)?;
                    let v = phi.component(j)?.apply(level.m_pi.leg(gu)?.apply(e)?)?;
                    Ok((u.clone(), v.to_string()))
                })
                .collect::<Result<_>>()?;
            Ok((
                e.clone(),
                inv_level.m_pi.limit.element_from_components(&comps)?,
            ))
        })
        .collect::<Result<_>>()?;
    let _ = i;
    FinSetMap::new(
        level.m_pi.object().clone(),
        inv_level.m_pi.object().clone(),
        table,
    )
}

/// `ρ : Π_{M̄B} M̄C -> Π_{MB} MC` through the matching comparisons.
fn rho_at(
    level: &HoPiLevel,
    inv_level: &PiLevel,
    kappa_a: &FinSetMap,
    kappa_b: &FinSetMap,
    kappa_c: &FinSetMap,
) -> Result<FinSetMap> {
    let kappa_b_inv = kappa_b.inverse()?;
    let table = level
        .pi_m
        .total
        .elements()
        .iter()
        .map(|sigma| {
            let base = level.pi_m.projection.apply(sigma)?;
            let new_base = kappa_a.apply(base)?.to_string();
            let mut graph = BTreeMap::new();
            for t in inv_level.m_b.object().elements() {
                if inv_level.m_if.apply(t)? != new_base {
                    continue;
                }
                let t_bar = kappa_b_inv.apply(t)?;
                let c_bar = level.pi_m.counit.apply(&encode_pair(t_bar, sigma))?;
                graph.insert(t.clone(), kappa_c.apply(c_bar)?.to_string());
            }
            Ok((
                sigma.clone(),
                section_element(&inv_level.pi_m, &new_base, &graph)?,
            ))
        })
        .collect::<Result<_>>()?;
    FinSetMap::new(
        level.pi_m.total.clone(),
        inv_level.pi_m.total.clone(),
        table,
    )
}

/// `σ : Π_{Bi}(B_i ×_{M̄B} M̄C) -> Π_{Bi}(B_i ×_{MB} MC)`, the functorial
/// action of `Π_{Bi}` on `(id, κ_C)`.
fn sigma_at(level: &HoPiLevel, inv_level: &PiLevel, kappa_c: &FinSetMap) -> Result<FinSetMap> {
    let table = level
        .pi_bz
        .total
        .elements()
        .iter()
        .map(|s| {
            let a_elt = level.pi_bz.projection.apply(s)?;
            let mut graph = BTreeMap::new();
            for b_elt in level.pi_bz.f.src.elements() {
                if level.pi_bz.f.apply(b_elt)? != a_elt {
                    continue;
                }
                let pair = level.pi_bz.counit.apply(&encode_pair(b_elt, s))?;
                let mc_bar = level.pbz.right.apply(pair)?;
                graph.insert(b_elt.clone(), encode_pair(b_elt, kappa_c.apply(mc_bar)?));
            }
            Ok((s.clone(), section_element(&inv_level.pi_bz, a_elt, &graph)?))
        })
        .collect::<Result<_>>()?;
    FinSetMap::new(
        level.pi_bz.total.clone(),
        inv_level.pi_bz.total.clone(),
        table,
    )
}

/// Checks the four faces of the comparison cube and that `ρ̃`, `σ` are
/// bijections. Uses the maps recorded in the bundle (so corrupting a table
/// is detected) against freshly recomputed environments.
pub fn verify_phi_decomposition(bundle: &ComparisonBundle, cap: usize) -> Result<()> {
    let loc = &bundle.loc;
    let (_, inv_levels) = pi_inverse_parts(&loc.base, &bundle.inv_pi.f, &bundle.inv_pi.g, cap)?;
    for (i, cmp) in &bundle.per_object {
        let rho_tilde = cmp
            .rho_tilde
            .as_ref()
            .ok_or_else(|| Error::DecompositionUnavailable(format!("ρ̃ missing at `{i}`")))?;
        let sigma = cmp
            .sigma
            .as_ref()
            .ok_or_else(|| Error::DecompositionUnavailable(format!("σ missing at `{i}`")))?;
        let level = ho_pi_level(loc, &bundle.ho_pi, i, cap)?;
        let inv_level = &inv_levels[i.as_str()];
        if !rho_tilde.is_bijective() {
            return Err(Error::FaceViolation {
                face: "bottom-left",
                witness: format!("ρ̃ not bijective at `{i}`"),
            });
        }
        if !sigma.is_bijective() {
            return Err(Error::FaceViolation {
                face: "right-face",
                witness: format!("σ not bijective at `{i}`"),
            });
        }
        // left face: ((Πg)_i, m̄) then ψ  ==  φ_i then ((Π'g)_i, m)
        let (_, to_pb1) = ho_component_maps(&bundle.ho_pi, &level, i)?;
        let phi_i = bundle.phi.component(i)?;
        for x in bundle.ho_pi.total.set(i)?.elements() {
            let lhs = cmp.psi.apply(to_pb1.apply(x)?)?;
            let y = phi_i.apply(x)?;
            let rhs = encode_pair(&inv_level.a_of[y], &inv_level.m_of[y]);
            if lhs != rhs {
                return Err(Error::FaceViolation {
                    face: "left-face",
                    witness: format!("element `{x}` at `{i}`"),
                });
            }
        }
        // bottom-left face: step1 then ρ̃  ==  ψ then step1'
        for pair in level.pb1.apex.elements() {
            let lhs = rho_tilde.apply(level.step1.apply(pair)?)?;
            let rhs = inv_level.step1.apply(cmp.psi.apply(pair)?)?;
            if lhs != rhs {
                return Err(Error::FaceViolation {
                    face: "bottom-left",
                    witness: format!("element `{pair}` at `{i}`"),
                });
            }
        }
        // bottom-right face: step2 then σ  ==  ρ̃ then step2'
        for pair in level.pb2.apex.elements() {
            let lhs = sigma.apply(level.step2.apply(pair)?)?;
            let rhs = inv_level.step2.apply(rho_tilde.apply(pair)?)?;
            if lhs != rhs {
                return Err(Error::FaceViolation {
                    face: "bottom-right",
                    witness: format!("element `{pair}` at `{i}`"),
                });
            }
        }
        // right face: post then σ  ==  post'
        for s in level.pi_i.total.elements() {
            let lhs = sigma.apply(level.post.apply(s)?)?;
            let rhs = inv_level.post.apply(s)?;
            if lhs != rhs {
                return Err(Error::FaceViolation {
                    face: "right-face",
                    witness: format!("section `{s}` at `{i}`"),
                });
            }
        }
    }
    Ok(())
}

/// Seeded search for a localization with `W` strictly larger than the
/// identities that still passes both assumption checkers. Returns the first
/// hit, if any; the question of whether nontrivial finite instances exist
/// is open, so absence is an acceptable outcome.
pub fn search_nontrivial_initial(
    seed: u64,
    attempts: usize,
    cap: usize,
) -> Result<Option<LocalizationData>> {
    let mut rng = SplitMix64::new(seed);
    for _ in 0..attempts {
        let inv = match crate::oracle::gen_inverse_category(rng.next_u64(), 3, 2, 2) {
            Ok(inv) => inv,
            Err(_) => continue,
        };
        let non_identities: Vec<String> = inv
            .category
            .morphisms()
            .iter()
            .filter(|m| !inv.category.is_identity(&m.id))
            .map(|m| m.id.clone())
            .collect();
        if non_identities.is_empty() {
            continue;
        }
        let mut weq: BTreeSet<String> = inv.category.identities().values().cloned().collect();
        let mut added = false;
        for m in &non_identities {
            if rng.chance(1, 3) {
                weq.insert(m.clone());
                added = true;
            }
        }
        if !added {
            continue;
        }
        if !validate_weq(&inv.category, &weq, WeqPolicy::TwoOfThree).is_clean() {
            continue;
        }
        let loc = match bounded_localization(
            &inv,
            &weq,
            crate::DEFAULT_WORD_CAP,
            crate::DEFAULT_HOMSET_CAP,
        ) {
            Ok(loc) => loc,
            Err(_) => continue,
        };
        if !check_all_epi(&loc.target).is_clean() {
            continue;
        }
        if check_initiality(&loc)?.holds_everywhere() {
            let _ = cap;
            return Ok(Some(loc));
        }
    }
    Ok(None)
}
