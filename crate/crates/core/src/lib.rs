//! Exact homological algebra over graded quotients of F_p[x_1..x_n]:
//! Groebner-driven resolutions, Ext/Tor, duality invariants, and
//! prime-indexed depth functions, all with checkable certificates.

pub mod error;
pub mod fp;
pub mod fpmodule;
pub mod functors;
pub mod groebner;
pub mod homalg;
pub mod iso;
pub mod linalg;
pub mod maps;
pub mod modelem;
pub mod monomial;
pub mod poly;
pub mod rescache;
pub mod ring;
pub mod spectrum;
pub mod subquot;

pub use error::{Error, Result};
pub use fp::{FieldChar, Fp};
pub use fpmodule::{minimal_generators, FpModule, MinimalData};
pub use functors::{ext, hom, hom_induced, hom_with_data, tensor_induced, tor, HomData};
pub use homalg::{
    biduality_map, cosyzygy, depth, ext_vanishing_dim, gc_dim, homothety_map, is_semidualizing,
    is_totally_reflexive, stable_equiv_mod_add, transpose, transpose_decompose, transpose_ses,
    transpose_wrt, w_words, AbData, Bounded, BoundedVerdict, DecomposeData, Dualizer,
    GcDimVerdict, SemidualFailure, SemidualVerdict, SixJunctions, SixTermData, StableEquivVerdict,
    StableWitness, SummandKind, TotRefFailure, TotRefVerdict,
};
pub use iso::{is_isomorphic, IsoVerdict, IsoWitness, NotIsoReason};
pub use maps::{certify_ses, exact_at, ExactnessReport, ModuleMap, SesReport};
pub use modelem::{ArithCtx, Matrix, ModElem};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::{parse_polynomial, poly_to_string, Homogeneity, Polynomial};
pub use rescache::{free_resolution, syzygy, Resolution};
pub use ring::{make_ring, parse_ring, Ring};
pub use spectrum::{
    check_resolving_witness, grade, is_grade_consistent, lambda_member, local_depth, local_gcdim,
    local_pd, phi, validate_primes, GradeConsistency, GradeFnTable, GradeViolation, LambdaVerdict,
    MKind, Prime, PrimeRecord, ResolvingWitness, WitnessNode, WitnessVerdict,
};
pub use subquot::SubQuot;
