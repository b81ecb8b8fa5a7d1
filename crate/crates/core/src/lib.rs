// Copyright 2026 The epr-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Measurement and conditional prediction for two identical finite-level
//! systems.
//!
//! A factor observable `A` with nondegenerate spectrum is copied onto both
//! factors of `C^N ⊗ C^N`. Measuring the conserved sum `S = A1 + A2`
//! collapses the state onto an anti-diagonal eigenspace; predictions in the
//! collapsed state coincide with classical conditioning of the joint
//! distribution of `(A1, A2)`. After a further measurement of `A1` the value
//! of `A2` is certain, and the uncertainty relation for `(A2, B2, C2)` stays
//! intact because `⟨C⟩` vanishes on eigenvectors of `A`.
//!
//! ```
//! use epr_core::lab::{build_pauli_scenario, run_epr_analysis};
//! use epr_core::linalg::C64;
//!
//! let z = C64::new(0.0, 0.0);
//! let sc = build_pauli_scenario([z, C64::new(0.8f64.sqrt(), 0.0), C64::new(0.2f64.sqrt(), 0.0), z]).unwrap();
//! let report = run_epr_analysis(&sc).unwrap();
//! let s0 = report.sum_report(0.0, 1e-9).unwrap();
//! assert!((s0.a1.mean - 0.6).abs() < 1e-12);
//! assert!(report.all_audits_satisfied());
//! ```

pub mod composite;
pub mod conditional;
pub mod error;
pub mod function;
pub mod lab;
pub mod linalg;
pub mod observable;
pub mod oracle;
pub mod random;
pub mod state;

pub use composite::{CompositeSpace, JointSystem, Slot};
pub use error::{Error, Result};
pub use function::{PairFunction, SpectrumFunction};
pub use linalg::{ComplexMatrix, C64};
pub use observable::Observable;
pub use state::{OutcomeDistribution, PureState, UncertaintyReport};
