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

//! Scenarios, the end-to-end analysis pipeline and the shot sampler.

pub mod analysis;
pub mod sampling;
pub mod scenario;

pub use analysis::{run_epr_analysis, ChainReport, EprReport, SumReport};
pub use sampling::{compare_empirical, sample_chain, EmpiricalComparison, OutcomeComparison, ShotRecord};
pub use scenario::{build_pauli_scenario, Scenario};
