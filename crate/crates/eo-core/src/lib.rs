//! Ekedahl-Oort stratum combinatorics for orthogonal and unitary Shimura
//! varieties at good reduction, in exact arithmetic.

pub mod error;
pub mod gf;
pub mod weyl;
pub mod zipcox;
pub mod sogroup;
pub mod strata_orth;
pub mod clifford_newton;
pub mod unitary_dd;

pub use error::{Error, Result};
pub use gf::{FieldSpec, Gf, GfMatrix};
pub use weyl::{Family, WeylElement, WeylGroupSpec, Word};
pub use zipcox::{CoxeterZipDatum, PsiKind, PsiSpec, StratumLabel};
pub use sogroup::{GramKind, GramSpec, OrthMatrix, Splitness};
pub use strata_orth::{CdClass, EOStratumInfo, OrthCase, SourceCase};
pub use clifford_newton::{CliffordElement, CliffordGram, NewtonCocharacter, QpCase, SlopeMultiset};
pub use unitary_dd::{Behavior, EllipticKind, FiltrationChain, KappaTilde, UnitaryDieudonneModule};
