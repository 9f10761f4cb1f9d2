//! Shared error and validation-report types.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Hard operational errors. Law violations detected by the validators are
/// reported as [`Violation`]s instead, so that a single run can list every
/// broken law with witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Object id not present in the category.
    UnknownObject(String),
    /// Morphism id not present in the category.
    UnknownMorphism(String),
    /// Element tag not present in the finite set.
    UnknownElement(String),
    /// Attempt to compose maps with mismatched endpoints.
    NotComposable { g: String, f: String },
    /// An enumeration would exceed the configured candidate budget.
    ExplosionLimit { needed: u128, cap: usize },
    /// A map required to be monic is not.
    NotMono(String),
    /// The index category is not a groupoid.
    NotGroupoid(String),
    /// The morphism has no two-sided inverse.
    NotIso(String),
    /// A transpose argument does not live in the stated slice.
    SliceMismatch(String),
    /// Diagram or transformation shapes do not match.
    ShapeMismatch(String),
    /// A handle lacks a former required by the construction.
    MissingCapability(&'static str),
    /// No dependent-product former applies to the map.
    NotPowerful(String),
    /// Localization saturation hit a budget before reaching a fixed point.
    SaturationBudgetExceeded { detail: String },
    /// Random generation could not satisfy the invariants within the retry budget.
    GenerationFailed(String),
    /// Strata reconstruction found no certificate; signals an implementation bug.
    ReconstructionFailed(String),
    /// A structure recomputed on a truncation disagrees with the restriction.
    CompatibilityViolation(String),
    /// A candidate classifier failed the unique-characteristic-map property.
    ClassifierViolation(String),
    /// A candidate dependent product failed the adjunction bijection.
    AdjunctionViolation(String),
    /// Maps in the localized category are required to be epis but are not.
    EpiAssumptionFailed(String),
    /// The comparison decomposition needs an invertible matching comparison.
    DecompositionUnavailable(String),
    /// A comparison-cube face fails to commute.
    FaceViolation { face: &'static str, witness: String },
    /// Malformed input tables.
    Invalid(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownObject(id) => write!(f, "unknown object `{id}`"),
            Error::UnknownMorphism(id) => write!(f, "unknown morphism `{id}`"),
            Error::UnknownElement(tag) => write!(f, "unknown element `{tag}`"),
            Error::NotComposable { g, f: ff } => {
                write!(f, "`{g}` and `{ff}` are not composable")
            }
            Error::ExplosionLimit { needed, cap } => {
                write!(f, "enumeration needs {needed} candidates, cap is {cap}")
            }
            Error::NotMono(m) => write!(f, "`{m}` is not a monomorphism"),
            Error::NotGroupoid(w) => write!(f, "not a groupoid: `{w}` has no inverse"),
            Error::NotIso(m) => write!(f, "`{m}` has no two-sided inverse"),
            Error::SliceMismatch(d) => write!(f, "slice mismatch: {d}"),
            Error::ShapeMismatch(d) => write!(f, "shape mismatch: {d}"),
            Error::MissingCapability(c) => write!(f, "handle lacks capability: {c}"),
            Error::NotPowerful(d) => write!(f, "no dependent-product former applies: {d}"),
            Error::SaturationBudgetExceeded { detail } => {
                write!(f, "localization saturation budget exceeded: {detail}")
            }
            Error::GenerationFailed(d) => write!(f, "generation failed: {d}"),
            Error::ReconstructionFailed(d) => write!(f, "strata reconstruction failed: {d}"),
            Error::CompatibilityViolation(d) => write!(f, "restriction compatibility: {d}"),
            Error::ClassifierViolation(d) => write!(f, "classifier property violated: {d}"),
            Error::AdjunctionViolation(d) => write!(f, "adjunction violated: {d}"),
            Error::EpiAssumptionFailed(d) => write!(f, "non-epi map in localization: {d}"),
            Error::DecompositionUnavailable(d) => {
                write!(f, "comparison decomposition unavailable: {d}")
            }
            Error::FaceViolation { face, witness } => {
                write!(f, "face `{face}` fails to commute at {witness}")
            }
            Error::Invalid(d) => write!(f, "invalid input: {d}"),
        }
    }
}

/// One broken law with its witnesses.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// A composable pair is absent from the composition table.
    MissingComposite { g: String, f: String },
    /// `(h∘g)∘f ≠ h∘(g∘f)` for the witnessing triple.
    BrokenAssociativity { h: String, g: String, f: String },
    /// An identity law fails at the witnessing morphism.
    BrokenIdentity { f: String },
    /// The composition table names endpoints that do not match.
    IllTypedComposite { g: String, f: String, gf: String },
    /// A non-isomorphism fails to strictly lower degree.
    NonDecreasingMap { f: String },
    /// An isomorphism connects objects of different degree.
    IsoDegreeMismatch { f: String },
    /// A functor law fails at the witnessing morphism(s).
    BrokenFunctoriality { detail: String },
    /// A naturality square fails at the witnessing morphism.
    BrokenNaturality { morphism: String, detail: String },
    /// The class of weak equivalences misses an identity.
    NotWide { object: String },
    /// Two of `{f, g, g∘f}` are weak equivalences but the third is not.
    TwoOfThreeViolation { g: String, f: String },
    /// Anything else, with a human-readable description.
    Other { detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingComposite { g, f: ff } => {
                write!(f, "MissingComposite: ({g}, {ff}) absent from table")
            }
            Violation::BrokenAssociativity { h, g, f: ff } => {
                write!(f, "BrokenAssociativity: witnesses ({h}, {g}, {ff})")
            }
            Violation::BrokenIdentity { f: ff } => write!(f, "BrokenIdentity: witness {ff}"),
            Violation::IllTypedComposite { g, f: ff, gf } => {
                write!(f, "IllTypedComposite: ({g}, {ff}) -> {gf}")
            }
            Violation::NonDecreasingMap { f: ff } => write!(f, "NonDecreasingMap: witness {ff}"),
            Violation::IsoDegreeMismatch { f: ff } => write!(f, "IsoDegreeMismatch: witness {ff}"),
            Violation::BrokenFunctoriality { detail } => write!(f, "BrokenFunctoriality: {detail}"),
            Violation::BrokenNaturality { morphism, detail } => {
                write!(f, "BrokenNaturality at {morphism}: {detail}")
            }
            Violation::NotWide { object } => write!(f, "NotWide: identity at {object} missing"),
            Violation::TwoOfThreeViolation { g, f: ff } => {
                write!(f, "TwoOfThreeViolation: witnesses ({g}, {ff})")
            }
            Violation::Other { detail } => write!(f, "{detail}"),
        }
    }
}

/// Result of a validator: empty iff every law holds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    /// Turns a non-clean report into a hard error.
    pub fn into_result(self) -> Result<()> {
        if self.is_clean() {
            Ok(())
        } else {
            let mut msg = String::new();
            for v in &self.violations {
                use core::fmt::Write;
                let _ = write!(msg, "{v}; ");
            }
            Err(Error::Invalid(msg))
        }
    }
}
