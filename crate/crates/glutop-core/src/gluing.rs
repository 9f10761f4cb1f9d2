//! Artin gluing `Gl(F)` over a limit-preserving functor as a logical
//! category: componentwise limits, the equalizer classifier, and the
//! pullback dependent product with both transposes.
//!
//! Everything is generic over [`LogicalCategory`] handles; preservation
//! witnesses are materialized as explicit comparison isomorphisms computed
//! through the universal properties, never assumed definitional.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::diagcat::{DiagCat, Diagram, NatTrans};
use crate::error::{Error, Result};
use crate::fincat::FinCategory;
use crate::logicat::{
    limit, Classifier, ClassifierOf, EqualizerOf, FinSetCat, FinSetMap, FinSetObj, LimitResult,
    LogicalCategory, Pi, PiOf, ProductOf, PullbackOf,
};

type DomObj<F> = <<F as LexFunctor>::Dom as LogicalCategory>::Obj;
type DomMor<F> = <<F as LexFunctor>::Dom as LogicalCategory>::Mor;
type CodObj<F> = <<F as LexFunctor>::Cod as LogicalCategory>::Obj;
type CodMor<F> = <<F as LexFunctor>::Cod as LogicalCategory>::Mor;

/// A functor between two logical-category handles, assumed to preserve the
/// finite limits the constructions use; preservation is certified on demand
/// by [`terminal_witness`] and [`pullback_witness`].
pub trait LexFunctor {
    type Dom: LogicalCategory;
    type Cod: LogicalCategory;

    fn dom(&self) -> &Self::Dom;
    fn cod(&self) -> &Self::Cod;
    fn on_obj(&self, o: &DomObj<Self>) -> Result<CodObj<Self>>;
    fn on_mor(&self, m: &DomMor<Self>) -> Result<CodMor<Self>>;
}

/// The comparison isomorphism `1 -> F(1)`, verified by inversion.
pub fn terminal_witness<F: LexFunctor>(f: &F) -> Result<CodMor<F>> {
    let f_one = f.on_obj(&f.dom().terminal())?;
    let to_terminal = f.cod().bang(&f_one);
    f.cod().invert(&to_terminal)
}

/// A certified pullback-preservation witness: the canonical comparison
/// `F(X ×_Z Y) -> FX ×_{FZ} FY` together with its inverse.
pub struct PullbackWitness<F: LexFunctor> {
    pub pb_dom: PullbackOf<F::Dom>,
    pub pb_cod: PullbackOf<F::Cod>,
    /// `F(apex_dom) -> apex_cod`
    pub fwd: CodMor<F>,
    /// `apex_cod -> F(apex_dom)`
    pub bwd: CodMor<F>,
}

pub fn pullback_witness<F: LexFunctor>(
    f: &F,
    p: &DomMor<F>,
    q: &DomMor<F>,
) -> Result<PullbackWitness<F>> {
    let pb_dom = f.dom().pullback(p, q)?;
    let pb_cod = f.cod().pullback(&f.on_mor(p)?, &f.on_mor(q)?)?;
    let fwd =
        f.cod()
            .pullback_factor(&pb_cod, &f.on_mor(&pb_dom.left)?, &f.on_mor(&pb_dom.right)?)?;
    let bwd = f.cod().invert(&fwd)?;
    Ok(PullbackWitness {
        pb_dom,
        pb_cod,
        fwd,
        bwd,
    })
}

/// An object of `Gl(F)`: apex in the codomain, shadow in the domain, and a
/// structure map `apex -> F(shadow)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GlObj<EO, EM, CO> {
    pub apex: EO,
    pub shadow: CO,
    pub structure: EM,
}

/// A morphism of `Gl(F)`; carries its endpoints so the gluing square is
/// checkable without extra context.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GlMor<EO, EM, CO, CM> {
    pub src: GlObj<EO, EM, CO>,
    pub tgt: GlObj<EO, EM, CO>,
    pub apex_map: EM,
    pub shadow_map: CM,
}

pub type GlObjOf<F> = GlObj<CodObj<F>, CodMor<F>, DomObj<F>>;
pub type GlMorOf<F> = GlMor<CodObj<F>, CodMor<F>, DomObj<F>, DomMor<F>>;

/// The gluing category `Gl(F)` as a logical-category handle.
pub struct GlCat<F: LexFunctor> {
    functor: F,
    /// Enumeration budget used by internal formers.
    cap: usize,
}

/// Builds the handle for `Gl(F)`.
pub fn gl_handle<F: LexFunctor>(functor: F, cap: usize) -> GlCat<F> {
    GlCat { functor, cap }
}

impl<F: LexFunctor> GlCat<F> {
    pub fn functor(&self) -> &F {
        &self.functor
    }

    fn e(&self) -> &F::Cod {
        self.functor.cod()
    }

    fn c(&self) -> &F::Dom {
        self.functor.dom()
    }

    /// Checks the gluing square and assembles a morphism.
    pub fn mor(
        &self,
        src: GlObjOf<F>,
        tgt: GlObjOf<F>,
        apex_map: CodMor<F>,
        shadow_map: DomMor<F>,
    ) -> Result<GlMorOf<F>> {
        let lhs = self
            .e()
            .compose(&self.functor.on_mor(&shadow_map)?, &src.structure)?;
        let rhs = self.e().compose(&tgt.structure, &apex_map)?;
        if lhs != rhs {
            return Err(Error::ShapeMismatch(
                "gluing square does not commute".into(),
            ));
        }
        Ok(GlMor {
            src,
            tgt,
            apex_map,
            shadow_map,
        })
    }
}

impl<F: LexFunctor> LogicalCategory for GlCat<F> {
    type Obj = GlObjOf<F>;
    type Mor = GlMorOf<F>;

    fn src(&self, m: &Self::Mor) -> Self::Obj {
        m.src.clone()
    }

    fn tgt(&self, m: &Self::Mor) -> Self::Obj {
        m.tgt.clone()
    }

    fn identity(&self, o: &Self::Obj) -> Self::Mor {
        GlMor {
            src: o.clone(),
            tgt: o.clone(),
            apex_map: self.e().identity(&o.apex),
            shadow_map: self.c().identity(&o.shadow),
        }
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor> {
        if f.tgt != g.src {
            return Err(Error::ShapeMismatch("glued maps not composable".into()));
        }
        Ok(GlMor {
            src: f.src.clone(),
            tgt: g.tgt.clone(),
            apex_map: self.e().compose(&g.apex_map, &f.apex_map)?,
            shadow_map: self.c().compose(&g.shadow_map, &f.shadow_map)?,
        })
    }

    fn terminal(&self) -> Self::Obj {
        let one_c = self.c().terminal();
        let one_e = self.e().terminal();
        let structure = terminal_witness(&self.functor).expect("terminal witness");
        GlObj {
            apex: one_e,
            shadow: one_c,
            structure,
        }
    }

    fn bang(&self, o: &Self::Obj) -> Self::Mor {
        GlMor {
            src: o.clone(),
            tgt: self.terminal(),
            apex_map: self.e().bang(&o.apex),
            shadow_map: self.c().bang(&o.shadow),
        }
    }

    fn hom(&self, a: &Self::Obj, b: &Self::Obj, cap: usize) -> Result<Vec<Self::Mor>> {
        let apex_homs = self.e().hom(&a.apex, &b.apex, cap)?;
        let shadow_homs = self.c().hom(&a.shadow, &b.shadow, cap)?;
        let count = (apex_homs.len() as u128) * (shadow_homs.len() as u128);
        if count > cap as u128 {
            return Err(Error::ExplosionLimit { needed: count, cap });
        }
        let mut out = Vec::new();
        for am in &apex_homs {
            for sm in &shadow_homs {
                if let Ok(m) = self.mor(a.clone(), b.clone(), am.clone(), sm.clone()) {
                    out.push(m);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    fn is_mono(&self, m: &Self::Mor) -> bool {
        self.e().is_mono(&m.apex_map) && self.c().is_mono(&m.shadow_map)
    }

    fn invert(&self, m: &Self::Mor) -> Result<Self::Mor> {
        Ok(GlMor {
            src: m.tgt.clone(),
            tgt: m.src.clone(),
            apex_map: self.e().invert(&m.apex_map)?,
            shadow_map: self.c().invert(&m.shadow_map)?,
        })
    }

    fn product(&self, a: &Self::Obj, b: &Self::Obj) -> Result<ProductOf<Self>> {
        let pe = self.e().product(&a.apex, &b.apex)?;
        let pc = self.c().product(&a.shadow, &b.shadow)?;
        // F(x × y) ≅ Fx × Fy, certified by factorization + inversion
        let pfe = self.e().product(
            &self.functor.on_obj(&a.shadow)?,
            &self.functor.on_obj(&b.shadow)?,
        )?;
        let cmp = self.e().product_factor(
            &pfe,
            &self.functor.on_mor(&pc.left)?,
            &self.functor.on_mor(&pc.right)?,
        )?;
        let cmp_inv = self.e().invert(&cmp)?;
        let into_pfe = self.e().product_factor(
            &pfe,
            &self.e().compose(&a.structure, &pe.left)?,
            &self.e().compose(&b.structure, &pe.right)?,
        )?;
        let structure = self.e().compose(&cmp_inv, &into_pfe)?;
        let apex = GlObj {
            apex: pe.apex.clone(),
            shadow: pc.apex.clone(),
            structure,
        };
        let left = self.mor(apex.clone(), a.clone(), pe.left, pc.left)?;
        let right = self.mor(apex.clone(), b.clone(), pe.right, pc.right)?;
        Ok(ProductOf::<Self> { apex, left, right })
    }

    fn product_factor(
        &self,
        p: &ProductOf<Self>,
        l: &Self::Mor,
        r: &Self::Mor,
    ) -> Result<Self::Mor> {
        if l.src != r.src {
            return Err(Error::ShapeMismatch(
                "cone legs with different domains".into(),
            ));
        }
        let pe = self.e().product(&p.left.tgt.apex, &p.right.tgt.apex)?;
        let pc = self.c().product(&p.left.tgt.shadow, &p.right.tgt.shadow)?;
        if pe.apex != p.apex.apex || pc.apex != p.apex.shadow {
            return Err(Error::ShapeMismatch("not the canonical product".into()));
        }
        let apex_map = self.e().product_factor(&pe, &l.apex_map, &r.apex_map)?;
        let shadow_map = self.c().product_factor(&pc, &l.shadow_map, &r.shadow_map)?;
        self.mor(l.src.clone(), p.apex.clone(), apex_map, shadow_map)
    }

    fn equalizer(&self, f: &Self::Mor, g: &Self::Mor) -> Result<EqualizerOf<Self>> {
        if f.src != g.src || f.tgt != g.tgt {
            return Err(Error::ShapeMismatch("maps are not parallel".into()));
        }
        let ee = self.e().equalizer(&f.apex_map, &g.apex_map)?;
        let ec = self.c().equalizer(&f.shadow_map, &g.shadow_map)?;
        // F preserves the shadow equalizer; certify and transport.
        let efc = self.e().equalizer(
            &self.functor.on_mor(&f.shadow_map)?,
            &self.functor.on_mor(&g.shadow_map)?,
        )?;
        let cmp = self
            .e()
            .equalizer_factor(&efc, &self.functor.on_mor(&ec.include)?)?;
        let cmp_inv = self.e().invert(&cmp)?;
        let cone = self.e().compose(&f.src.structure, &ee.include)?;
        let into_efc = self.e().equalizer_factor(&efc, &cone)?;
        let structure = self.e().compose(&cmp_inv, &into_efc)?;
        let apex = GlObj {
            apex: ee.apex.clone(),
            shadow: ec.apex.clone(),
            structure,
        };
        let include = self.mor(apex.clone(), f.src.clone(), ee.include, ec.include)?;
        Ok(EqualizerOf::<Self> {
            apex,
            include,
            f: f.clone(),
            g: g.clone(),
        })
    }

    fn equalizer_factor(&self, e: &EqualizerOf<Self>, cone: &Self::Mor) -> Result<Self::Mor> {
        let ee = self.e().equalizer(&e.f.apex_map, &e.g.apex_map)?;
        let ec = self.c().equalizer(&e.f.shadow_map, &e.g.shadow_map)?;
        let apex_map = self.e().equalizer_factor(&ee, &cone.apex_map)?;
        let shadow_map = self.c().equalizer_factor(&ec, &cone.shadow_map)?;
        self.mor(cone.src.clone(), e.apex.clone(), apex_map, shadow_map)
    }

    fn pullback(&self, f: &Self::Mor, g: &Self::Mor) -> Result<PullbackOf<Self>> {
        if f.tgt != g.tgt {
            return Err(Error::ShapeMismatch("cospan targets differ".into()));
        }
        let pe = self.e().pullback(&f.apex_map, &g.apex_map)?;
        let w = pullback_witness(&self.functor, &f.shadow_map, &g.shadow_map)?;
        let into_fcod = self.e().pullback_factor(
            &w.pb_cod,
            &self.e().compose(&f.src.structure, &pe.left)?,
            &self.e().compose(&g.src.structure, &pe.right)?,
        )?;
        let structure = self.e().compose(&w.bwd, &into_fcod)?;
        let apex = GlObj {
            apex: pe.apex.clone(),
            shadow: w.pb_dom.apex.clone(),
            structure,
        };
        let left = self.mor(apex.clone(), f.src.clone(), pe.left, w.pb_dom.left)?;
        let right = self.mor(apex.clone(), g.src.clone(), pe.right, w.pb_dom.right)?;
        Ok(PullbackOf::<Self> {
            apex,
            left,
            right,
            f: f.clone(),
            g: g.clone(),
        })
    }

    fn pullback_factor(
        &self,
        p: &PullbackOf<Self>,
        l: &Self::Mor,
        r: &Self::Mor,
    ) -> Result<Self::Mor> {
        if l.src != r.src {
            return Err(Error::ShapeMismatch(
                "cone legs with different domains".into(),
            ));
        }
        let pe = self.e().pullback(&p.f.apex_map, &p.g.apex_map)?;
        let pc = self.c().pullback(&p.f.shadow_map, &p.g.shadow_map)?;
        let apex_map = self.e().pullback_factor(&pe, &l.apex_map, &r.apex_map)?;
        let shadow_map = self
            .c()
            .pullback_factor(&pc, &l.shadow_map, &r.shadow_map)?;
        self.mor(l.src.clone(), p.apex.clone(), apex_map, shadow_map)
    }

    fn omega(&self, cap: usize) -> Result<ClassifierOf<Self>> {
        let parts = gl_omega_parts(&self.functor, cap)?;
        Ok(Classifier {
            omega: parts.omega,
            truth: parts.truth,
        })
    }

    fn char_map(&self, mono: &Self::Mor, cap: usize) -> Result<Self::Mor> {
        gl_char(&self.functor, mono, cap)
    }

    fn pi(&self, f: &Self::Mor, g: &Self::Mor, cap: usize) -> Result<PiOf<Self>> {
        gl_pi(&self.functor, f, g, cap)
    }

    fn pi_sharp(&self, pi: &PiOf<Self>, d_over_a: &Self::Mor, s: &Self::Mor) -> Result<Self::Mor> {
        gl_sharp(&self.functor, pi, d_over_a, s, self.cap)
    }
}

/// Everything `gl_omega` builds, kept for reuse by the characteristic-map
/// former.
pub struct GlOmegaParts<F: LexFunctor> {
    pub cls_cod: ClassifierOf<F::Cod>,
    pub cls_dom: ClassifierOf<F::Dom>,
    /// `F(true): 1 -> FΩ_C` (with the terminal witness precomposed).
    pub f_true: CodMor<F>,
    /// `χ_{F(true)}: FΩ_C -> Ω_E`.
    pub chi_f_true: CodMor<F>,
    /// `Ω_E × FΩ_C`.
    pub prod: ProductOf<F::Cod>,
    /// The equalizer of `π₁` and `∧ ∘ (id × χ_{F(true)})`.
    pub eq: EqualizerOf<F::Cod>,
    pub omega: GlObjOf<F>,
    pub truth: GlMorOf<F>,
}

/// The classifier of `Gl(F)`: apex the equalizer of `π₁` and
/// `∧ ∘ (id × χ_{F(true)})` on `Ω_E × FΩ_C`, shadow `Ω_C`, structure the
/// inclusion followed by the second projection.
pub fn gl_omega_parts<F: LexFunctor>(f: &F, cap: usize) -> Result<GlOmegaParts<F>> {
    let e = f.cod();
    let c = f.dom();
    let cls_cod = e.omega(cap)?;
    let cls_dom = c.omega(cap)?;
    let w1 = terminal_witness(f)?;
    let f_true = e.compose(&f.on_mor(&cls_dom.truth)?, &w1)?;
    if !e.is_mono(&f_true) {
        return Err(Error::NotMono("F(true) must be monic".into()));
    }
    let chi_f_true = e.char_map(&f_true, cap)?;
    let prod = e.product(&cls_cod.omega, &e.tgt(&f_true))?;
    let (prod2, and_map) = crate::logicat::conjunction(e, &cls_cod, cap)?;
    let id_times_chi =
        e.product_factor(&prod2, &prod.left, &e.compose(&chi_f_true, &prod.right)?)?;
    let second = e.compose(&and_map, &id_times_chi)?;
    let eq = e.equalizer(&prod.left, &second)?;
    let structure = e.compose(&prod.right, &eq.include)?;
    let omega = GlObj {
        apex: eq.apex.clone(),
        shadow: cls_dom.omega.clone(),
        structure,
    };
    // true_Gl induced by (true, F(true))
    let pair = e.product_factor(&prod, &cls_cod.truth, &f_true)?;
    let truth_apex = e.equalizer_factor(&eq, &pair)?;
    let one = GlObj {
        apex: e.terminal(),
        shadow: c.terminal(),
        structure: w1,
    };
    let truth = GlMor {
        src: one,
        tgt: omega.clone(),
        apex_map: truth_apex,
        shadow_map: cls_dom.truth.clone(),
    };
    Ok(GlOmegaParts {
        cls_cod,
        cls_dom,
        f_true,
        chi_f_true,
        prod,
        eq,
        omega,
        truth,
    })
}

/// The classifier and truth map of `Gl(F)`.
pub fn gl_omega<F: LexFunctor>(f: &F, cap: usize) -> Result<(GlObjOf<F>, GlMorOf<F>)> {
    let parts = gl_omega_parts(f, cap)?;
    Ok((parts.omega, parts.truth))
}

/// The characteristic map of a glued mono: apex induced into the equalizer
/// by `(χ_g, Fχ_k ∘ α)`, shadow `χ_k`.
pub fn gl_char<F: LexFunctor>(f: &F, mono: &GlMorOf<F>, cap: usize) -> Result<GlMorOf<F>> {
    let e = f.cod();
    let c = f.dom();
    if !e.is_mono(&mono.apex_map) || !c.is_mono(&mono.shadow_map) {
        return Err(Error::NotMono(
            "glued map must be componentwise monic".into(),
        ));
    }
    let parts = gl_omega_parts(f, cap)?;
    let chi_g = e.char_map(&mono.apex_map, cap)?;
    let chi_k = c.char_map(&mono.shadow_map, cap)?;
    let alpha = &mono.tgt.structure;
    let cospan_right = e.compose(&f.on_mor(&chi_k)?, alpha)?;
    let pair = e.product_factor(&parts.prod, &chi_g, &cospan_right)?;
    let chi_apex = e.equalizer_factor(&parts.eq, &pair)?;
    Ok(GlMor {
        src: mono.tgt.clone(),
        tgt: parts.omega,
        apex_map: chi_apex,
        shadow_map: chi_k,
    })
}

/// Everything `gl_pi` builds along the way, exposed so the transposes can
/// be recomputed deterministically.
pub struct GlPiParts<F: LexFunctor> {
    /// `Π_y z` in the domain category.
    pub pi_dom: PiOf<F::Dom>,
    /// `Π_{Fy} Fz` in the codomain category.
    pub pi_cod: PiOf<F::Cod>,
    /// `F(ev)‡ : F(Π_y z) -> Π_{Fy} Fz`, through the pullback witness.
    pub f_ev_sharp: CodMor<F>,
    /// `a ×_{Fx} F(Π_y z)` with legs to `a` and `F(Π_y z)`.
    pub pb1: PullbackOf<F::Cod>,
    /// `a ×_{Fx} Π_{Fy} Fz`.
    pub pb2: PullbackOf<F::Cod>,
    /// `pb1 -> pb2`.
    pub step1: CodMor<F>,
    /// `b ×_{Fy} Fz`.
    pub pbz: PullbackOf<F::Cod>,
    /// `Π_b (b ×_{Fy} Fz)`.
    pub pi_b_bfz: PiOf<F::Cod>,
    /// `(b ×_{Fy} ev)‡ : pb2 -> Π_b(b ×_{Fy} Fz)`.
    pub step2: CodMor<F>,
    /// `Π_b c`.
    pub pi_bc: PiOf<F::Cod>,
    /// `Π_b(f, γ) : Π_b c -> Π_b(b ×_{Fy} Fz)`.
    pub pi_bc_post: CodMor<F>,
    /// The defining pullback of the glued product.
    pub p: PullbackOf<F::Cod>,
}

/// The dependent product in `Gl(F)` along `h_k: β -> α` of `f_h: γ -> β`:
/// apex the pullback of `Π_b(f,γ)` along
/// `(b ×_{Fy} ev)‡ ∘ (a ×_{Fx} F(ev)‡)`, shadow `Π_y z`.
pub fn gl_pi_parts<F: LexFunctor>(
    f: &F,
    h_k: &GlMorOf<F>,
    f_h: &GlMorOf<F>,
    cap: usize,
) -> Result<GlPiParts<F>> {
    let e = f.cod();
    let c = f.dom();
    if f_h.tgt != h_k.src {
        return Err(Error::ShapeMismatch("maps do not compose through β".into()));
    }
    let g_map = &h_k.apex_map; // g: b -> a
    let k_map = &h_k.shadow_map; // k: y -> x
    let f_map = &f_h.apex_map; // f: c -> b
    let h_map = &f_h.shadow_map; // h: z -> y
    let alpha = &h_k.tgt.structure; // a -> Fx
    let beta = &h_k.src.structure; // b -> Fy
    let gamma = &f_h.src.structure; // c -> Fz

    // domain-side product Π_y z
    let pi_dom = c.pi(k_map, h_map, cap)?;
    // codomain-side product Π_{Fy} Fz
    let fk = f.on_mor(k_map)?;
    let fh = f.on_mor(h_map)?;
    let pi_cod = e.pi(&fk, &fh, cap)?;

    // F(ev)‡: transpose of F(ev) through the pullback witness
    // F preserves the pullback y ×_x Π_y z (the counit source).
    let w = pullback_witness(f, &pi_dom.counit_src.f, &pi_dom.counit_src.g)?;
    // the codomain-side canonical pullback Fy ×_{Fx} F(Π_y z)
    let f_proj = f.on_mor(&pi_dom.projection)?;
    let theta_dagger = e.compose(&f.on_mor(&pi_dom.counit)?, &w.bwd)?;
    let f_ev_sharp = e.pi_sharp(&pi_cod, &f_proj, &theta_dagger)?;

    // pb1 = a ×_{Fx} F(Π_y z), pb2 = a ×_{Fx} Π_{Fy} Fz
    let pb1 = e.pullback(alpha, &f_proj)?;
    let pb2 = e.pullback(alpha, &pi_cod.projection)?;
    let step1 = e.pullback_factor(&pb2, &pb1.left, &e.compose(&f_ev_sharp, &pb1.right)?)?;

    // pbz = b ×_{Fy} Fz
    let pbz = e.pullback(beta, &fh)?;
    // Π_b(b ×_{Fy} Fz) along g, of the bundle pbz -> b
    let pi_b_bfz = e.pi(g_map, &pbz.left, cap)?;
    // (b ×_{Fy} ev)‡: transpose over a of the evaluation through β
    // q = b ×_a pb2 (canonical pullback of g and pb2 -> a)
    let q = e.pullback(g_map, &pb2.left)?;
    // q -> counit source of pi_cod = Fy ×_{Fx} Π_{Fy}Fz
    let into_cs = e.pullback_factor(
        &pi_cod.counit_src,
        &e.compose(beta, &q.left)?,
        &e.compose(&pb2.right, &q.right)?,
    )?;
    let to_fz = e.compose(&pi_cod.counit, &into_cs)?;
    let u_tilde = e.pullback_factor(&pbz, &q.left, &to_fz)?;
    let step2 = e.pi_sharp(&pi_b_bfz, &pb2.left, &u_tilde)?;

    // Π_b c and Π_b(f, γ)
    let pi_bc = e.pi(g_map, f_map, cap)?;
    let into_pbz = e.pullback_factor(&pbz, f_map, gamma)?;
    let pi_bc_post = e.pi_post(&pi_bc, &pi_b_bfz, &into_pbz)?;

    // the defining pullback
    let left_route = e.compose(&step2, &step1)?;
    let p = e.pullback(&pi_bc_post, &left_route)?;
    Ok(GlPiParts {
        pi_dom,
        pi_cod,
        f_ev_sharp,
        pb1,
        pb2,
        step1,
        pbz,
        pi_b_bfz,
        step2,
        pi_bc,
        pi_bc_post,
        p,
    })
}

/// Assembles the glued dependent product from its parts.
pub fn gl_pi<F: LexFunctor>(
    f: &F,
    h_k: &GlMorOf<F>,
    f_h: &GlMorOf<F>,
    cap: usize,
) -> Result<PiOf<GlCat<F>>> {
    let e = f.cod();
    let parts = gl_pi_parts(f, h_k, f_h, cap)?;
    // p.left lands in Π_b c, p.right in pb1 (pullback of (pi_bc_post, route))
    let to_pb1 = parts.p.right.clone();
    let to_pibc = parts.p.left.clone();
    let structure = e.compose(&parts.pb1.right, &to_pb1)?;
    let total = GlObj {
        apex: parts.p.apex.clone(),
        shadow: parts.pi_dom.total.clone(),
        structure,
    };
    let cat = gl_handle(DupLex { inner: f }, cap);
    // Reconstruct projection and counit in Gl(F) directly.
    let proj_apex = e.compose(&parts.pb1.left, &to_pb1)?;
    let projection = cat.mor(
        total.clone(),
        h_k.tgt.clone(),
        proj_apex,
        parts.pi_dom.projection.clone(),
    )?;
    let counit_src = cat.pullback(h_k, &projection)?;
    // apex counit: b ×_a p -> b ×_a Π_b c -> c
    let qe = e.pullback(&h_k.apex_map, &projection.apex_map)?;
    let into_bc_cs = e.pullback_factor(
        &parts.pi_bc.counit_src,
        &qe.left,
        &e.compose(&to_pibc, &qe.right)?,
    )?;
    let counit_apex = e.compose(&parts.pi_bc.counit, &into_bc_cs)?;
    let counit = cat.mor(
        counit_src.apex.clone(),
        f_h.src.clone(),
        counit_apex,
        parts.pi_dom.counit.clone(),
    )?;
    Ok(Pi {
        f: h_k.clone(),
        g: f_h.clone(),
        total,
        projection,
        counit,
        counit_src,
    })
}

/// A forwarding lex functor so `gl_pi` can build `GlCat` helpers on a
/// borrowed functor.
struct DupLex<'a, F: LexFunctor> {
    inner: &'a F,
}

impl<'a, F: LexFunctor> LexFunctor for DupLex<'a, F> {
    type Dom = F::Dom;
    type Cod = F::Cod;

    fn dom(&self) -> &Self::Dom {
        self.inner.dom()
    }

    fn cod(&self) -> &Self::Cod {
        self.inner.cod()
    }

    fn on_obj(&self, o: &DomObj<Self>) -> Result<CodObj<Self>> {
        self.inner.on_obj(o)
    }

    fn on_mor(&self, m: &DomMor<Self>) -> Result<CodMor<Self>> {
        self.inner.on_mor(m)
    }
}

/// `(u, v)^♭ = (u₂‡, v†)`: sends `δ -> Π_β γ` over `α` to
/// `β ×_α δ -> γ` over `β`.
pub fn gl_flat<F: LexFunctor>(
    f: &F,
    pi: &PiOf<GlCat<F>>,
    d_over_a: &GlMorOf<F>,
    u: &GlMorOf<F>,
    cap: usize,
) -> Result<GlMorOf<F>> {
    let e = f.cod();
    let c = f.dom();
    if u.src != d_over_a.src || u.tgt != pi.total {
        return Err(Error::SliceMismatch("transpose argument endpoints".into()));
    }
    let parts = gl_pi_parts(f, &pi.f, &pi.g, cap)?;
    // u2 = (p -> Π_b c) ∘ u on apexes
    let u2 = e.compose(&parts.p.left, &u.apex_map)?;
    let u2_flat = e.pi_flat(&parts.pi_bc, &d_over_a.apex_map, &u2)?;
    let v_flat = c.pi_flat(&parts.pi_dom, &d_over_a.shadow_map, &u.shadow_map)?;
    let cat = gl_handle(DupLex { inner: f }, cap);
    let q = cat.pullback(&pi.f, d_over_a)?;
    cat.mor(q.apex.clone(), pi.g.src.clone(), u2_flat, v_flat)
}

/// `(ũ, ṽ)^♯`: sends `β ×_α δ -> γ` over `β` to `δ -> Π_β γ` over `α`; the
/// two components are assembled through the defining pullback.
pub fn gl_sharp<F: LexFunctor>(
    f: &F,
    pi: &PiOf<GlCat<F>>,
    d_over_a: &GlMorOf<F>,
    s: &GlMorOf<F>,
    cap: usize,
) -> Result<GlMorOf<F>> {
    let e = f.cod();
    let c = f.dom();
    let parts = gl_pi_parts(f, &pi.f, &pi.g, cap)?;
    let cat = gl_handle(DupLex { inner: f }, cap);
    let q = cat.pullback(&pi.f, d_over_a)?;
    if s.src != q.apex || s.tgt != pi.g.src {
        return Err(Error::SliceMismatch(
            "transpose argument is not on the canonical pullback".into(),
        ));
    }
    let v = c.pi_sharp(&parts.pi_dom, &d_over_a.shadow_map, &s.shadow_map)?;
    let u2 = e.pi_sharp(&parts.pi_bc, &d_over_a.apex_map, &s.apex_map)?;
    let fv = f.on_mor(&v)?;
    let u1 = e.pullback_factor(
        &parts.pb1,
        &d_over_a.apex_map,
        &e.compose(&fv, &d_over_a.src.structure)?,
    )?;
    let u_apex = e.pullback_factor(&parts.p, &u2, &u1)?;
    cat.mor(d_over_a.src.clone(), pi.total.clone(), u_apex, v)
}

// ---------------------------------------------------------------------------
// Demo lex functors
// ---------------------------------------------------------------------------

/// The identity functor on a logical category; `Gl(id)` is the arrow
/// category.
pub struct IdFunctor<C: LogicalCategory> {
    cat: C,
}

impl<C: LogicalCategory> IdFunctor<C> {
    pub fn new(cat: C) -> Self {
        IdFunctor { cat }
    }
}

impl<C: LogicalCategory> LexFunctor for IdFunctor<C> {
    type Dom = C;
    type Cod = C;

    fn dom(&self) -> &C {
        &self.cat
    }

    fn cod(&self) -> &C {
        &self.cat
    }

    fn on_obj(&self, o: &C::Obj) -> Result<C::Obj> {
        Ok(o.clone())
    }

    fn on_mor(&self, m: &C::Mor) -> Result<C::Mor> {
        Ok(m.clone())
    }
}

/// The limit functor `FinSet^J -> FinSet`; gluing along it presents
/// `FinSet^{J◁}` (the cone category over `J`).
pub struct LimitFunctor {
    index: FinCategory,
    dom: DiagCat,
    cod: FinSetCat,
    cap: usize,
}

impl LimitFunctor {
    pub fn new(index: FinCategory, cap: usize) -> Self {
        LimitFunctor {
            dom: crate::diagcat::diagram_handle(&index),
            cod: FinSetCat,
            index,
            cap,
        }
    }

    fn limit_of(&self, d: &Diagram) -> Result<LimitResult> {
        limit(&self.index, &d.sets, &d.maps, self.cap)
    }
}

impl LexFunctor for LimitFunctor {
    type Dom = DiagCat;
    type Cod = FinSetCat;

    fn dom(&self) -> &DiagCat {
        &self.dom
    }

    fn cod(&self) -> &FinSetCat {
        &self.cod
    }

    fn on_obj(&self, o: &Diagram) -> Result<FinSetObj> {
        Ok(self.limit_of(o)?.apex)
    }

    fn on_mor(&self, m: &NatTrans) -> Result<FinSetMap> {
        let src_lim = self.limit_of(&m.src)?;
        let tgt_lim = self.limit_of(&m.tgt)?;
        let table = src_lim
            .apex
            .elements()
            .iter()
            .map(|t| {
                let comps = self
                    .index
                    .objects()
                    .iter()
                    .map(|o| {
                        Ok((
                            o.clone(),
                            m.component(o)?
                                .apply(src_lim.legs[o].apply(t)?)?
                                .to_string(),
                        ))
                    })
                    .collect::<Result<_>>()?;
                Ok((t.clone(), tgt_lim.element_from_components(&comps)?))
            })
            .collect::<Result<_>>()?;
        FinSetMap::new(src_lim.apex, tgt_lim.apex, table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::logicat::finset_handle;

    #[test]
    fn arrow_category_classifier_has_three_points() {
        let f = IdFunctor::new(finset_handle());
        let (omega, truth) = gl_omega(&f, 10_000).unwrap();
        assert_eq!(omega.apex.len(), 3);
        assert_eq!(omega.shadow.len(), 2);
        let _ = truth;
    }

    #[test]
    fn cone_classifier_over_two_points_has_five() {
        let f = LimitFunctor::new(corpus::discrete_category(&["1", "2"]), 10_000);
        let (omega, _) = gl_omega(&f, 10_000).unwrap();
        assert_eq!(omega.apex.len(), 5);
        assert_eq!(omega.shadow.sets["1"].len(), 2);
        assert_eq!(omega.shadow.sets["2"].len(), 2);
    }

    #[test]
    fn constant_terminal_functor_degenerates() {
        // F = limit over the empty category: F(X) = 1, so the equalizer
        // condition trivializes and the apex is Ω_E.
        let f = LimitFunctor::new(corpus::discrete_category(&[]), 10_000);
        let (omega, _) = gl_omega(&f, 10_000).unwrap();
        assert_eq!(omega.apex.len(), 2);
    }
}
