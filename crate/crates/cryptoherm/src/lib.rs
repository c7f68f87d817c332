//! An exactly solvable non-Hermitian lattice model and its metric operators.
//!
//! The model is an N-site tridiagonal Hamiltonian H whose characteristic
//! polynomial is a generalized Laguerre polynomial, so its spectrum is real
//! for every admissible coupling a even though H is manifestly asymmetric.
//! This crate makes that "hidden Hermiticity" computable:
//!
//! - [`laguerre_hamiltonian`] builds H over floats or exact rationals;
//!   [`compute_spectrum`] and [`spectral_data`] produce the real energies
//!   and the biorthogonal eigenvector system.
//! - [`closed_form_pseudometric`] evaluates the (2j+1)-diagonal pseudometric
//!   tables P_0..P_3, and [`solve_band_pseudometrics`] re-derives them from
//!   scratch by solving the intertwining equation HᵀΘ = ΘH band by band —
//!   two independent routes to the same operators.
//! - [`assemble_metric`] superposes them into a candidate metric
//!   Θ = P_0 + α·P_1 + …; [`check_positive_definite`] classifies it with an
//!   exact witness, and [`find_alpha_boundary`] locates the edge of the
//!   positivity domain along a coefficient ray.
//! - [`dyson_sqrt`] factorizes Θ = Ω·Ω, which turns H into an ordinary
//!   symmetric Hamiltonian; [`position_operator`] and [`evolve`] then answer
//!   physical questions (where is the particle?) in the metric's geometry.
//!
//! # Quickstart
//!
//! ```
//! use cryptoherm::{
//!     assemble_metric, check_positive_definite, compute_spectrum, laguerre_hamiltonian,
//!     ModelParams,
//! };
//!
//! // six sites, coupling a = 1
//! let params = ModelParams::new(6, 1.0).unwrap();
//! let h = laguerre_hamiltonian(&params);
//! assert_eq!(h.diag()[0], 2.0); // a + 1
//!
//! // the spectrum is real and simple …
//! let energies = compute_spectrum(&params).unwrap();
//! assert_eq!(energies.len(), 6);
//! assert!((energies[0] - 0.5276681217).abs() < 1e-9);
//!
//! // … and a pentadiagonal metric certifies the hidden Hermiticity
//! let family = assemble_metric(&params, 2, &[0.1, 0.05]).unwrap();
//! assert!(check_positive_definite(&family.theta).is_positive_definite());
//! ```
//!
//! Everything numeric is generic over the [`Scalar`] backend: `f64` for
//! speed, [`Rational`] for exact certificates (the solver, the closed-form
//! tables, and the positivity check are all exact in that backend).

pub mod analysis;
pub mod banded;
pub mod closed_form;
pub mod dieudonne;
pub mod error;
pub mod io;
pub mod model;
pub mod scalar;
pub mod spectrum;

/// Exact-arithmetic backend: arbitrary-precision fractions.
pub type Rational = num_rational::BigRational;

pub use analysis::{
    check_positive_definite, default_sites, dyson_first_order, dyson_sqrt, evolve,
    find_alpha_boundary, hidden_conjugate, position_operator, pseudometrics_f64,
    spectral_decompose, AlphaBoundary, DysonMap, DysonVariant, EvolutionResult, LdltFactor,
    MetricFamily, PositionModel, PositivityCheck, PositivityStatus,
};
pub use banded::BandedSymmetricMatrix;
pub use closed_form::{
    assemble_metric, closed_form_pseudometric, closed_form_set, p0, p1, p2, p3, ClosedFormTable,
    Provenance,
};
pub use dieudonne::{
    dieudonne_commutator, dieudonne_residual, solve_band_pseudometrics, solve_general_metric,
    PseudometricSet,
};
pub use error::{Error, Result};
pub use io::{
    analysis_report_json, closed_set_json, csv_escape, csv_line, format_significant,
    hamiltonian_json, json_f64, oracle_set_json, parse_f64_or_ratio, parse_rational,
    positivity_label, spectrum_csv, spectrum_json, to_json_string, trajectory_csv, JsonScalar,
    SpectrumRow,
};
pub use model::{laguerre_hamiltonian, ModelParams, TridiagonalHamiltonian};
pub use scalar::Scalar;
pub use spectrum::{
    compute_spectrum, laguerre_eval, right_eigenvector, right_eigenvector_normalized,
    spectral_data, SpectralData,
};
