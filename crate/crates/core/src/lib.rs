pub mod ct;
pub mod endo;
pub mod error;
pub mod field;
pub mod hom;
pub mod linalg;
pub mod mf;
pub mod modspec;
pub mod parse;
pub mod poly;
pub mod seed;
pub mod suite;
pub mod tools;
pub mod trunc;

pub use ct::{build_s_omega, ct_check, CtConfig, CtOverall, CtReport, OmegaObject};
pub use endo::{ApproxResolution, EndRing, EndoConfig, PdResult};
pub use error::{Error, Result};
pub use field::{FieldElem, DEFAULT_PRIME};
pub use hom::{ExtKind, ExtResult, HomSpace, Schedule, StableDim, TorsionReport, TorsionVerdict, TruncationBasis};
pub use linalg::{Echelon, ScalarMatrix, SparseVec};
pub use mf::{s_ideal, validate_mf, FactoredEquation, MatrixFactorization, MfJson, MfVerdict, SubsetModuleSpec};
pub use modspec::ModuleSpec;
pub use parse::{parse_factors, parse_poly};
pub use poly::{Monomial, Poly, PolyMatrix, RingCtx};
pub use suite::{run_suite, CheckSpec, Envelope, SuiteConfig, SuiteReport, ARTIFACT_VERSION};
pub use tools::{IsoVerdict, IsoWitness, Membership, PushforwardResult, SplitVerdict, ToolConfig};
pub use trunc::{Engine, EngineConfig, PresentedModule, TruncatedModule};
