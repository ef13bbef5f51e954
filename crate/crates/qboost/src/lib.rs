//! Quantum Lorentz boosts: spinor and four-vector metrics, R-matrices, boost
//! representations on `|l, m⟩` blocks and q-Clebsch-Gordan coupling.

pub mod report;
pub mod tolerances;
pub mod qnum;
pub mod linalg;
pub mod frame;
pub mod spinor_kit;
pub mod boost_rep;
pub mod coupling;
pub mod suite;

pub use boost_rep::{build_generator, verify_relations, BasisState, BlockLabel, BoostError, GeneratorId, RepMatrix};
pub use coupling::cg::{cg_decompose, cg_recursion_check, verify_coupling, CGTable, CouplingError};
pub use coupling::classical::cg_classical_limit;
pub use coupling::coproduct::{coproduct_matrix, TensorBlock};
pub use coupling::tables::{embedded_golden, paper_tables, GoldenTable, Variant};
pub use qnum::{CQuad, DeformationParameter, QScalar, QnumError};
pub use report::{ReportEntry, Verdict, VerificationReport};
pub use spinor_kit::{check_spinor_identities, SpinorError};
pub use suite::{run_suite, SuiteConfig};
