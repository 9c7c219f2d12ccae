// Copyright 2026 belldisc contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "belldisc/circuit.hpp"
#include "belldisc/detection.hpp"
#include "belldisc/discrimination.hpp"

namespace belldisc {

enum class ProtocolId {
    HyperMomentum,
    HyperPolarization,
    HyperOam,
    Timebin,
    Ancilla,
    Sfg,
    Baseline,
};

enum class RunMode { Circuit, Literal };

struct ProtocolParams {
    double theta1 = 0.0;  // theta for the single-parameter protocols
    double theta2 = 0.0;
    int pairs = 1;  // ancilla pair count (1 or 2)
};

std::string protocol_name(ProtocolId id);
ProtocolId protocol_from_name(const std::string& name);

/// A fully wired analyzer: four input states, the discrimination circuit,
/// and the detector bank reading its outputs.
struct ProtocolInstance {
    ProtocolId id = ProtocolId::Baseline;
    RunMode mode = RunMode::Circuit;
    ProtocolParams params;
    std::vector<std::pair<std::string, PhotonState>> inputs;
    Circuit circuit;
    /// Elements [0, fixture_stage) evolve up to the point the source
    /// expansions are written at; the remainder is detector relabeling.
    std::size_t fixture_stage = 0;
    DetectorSpec detectors;
};

ProtocolInstance build(ProtocolId id, const ProtocolParams& params,
                       RunMode mode = RunMode::Circuit);

ProtocolInstance ancilla_instance(double theta1, double theta2, int pairs);

/// The printed post-circuit expansion for one input state (1-based index).
/// Supported for the four hyperentanglement/time-bin protocols.
PhotonState literal_output(ProtocolId id, int state_index, const ProtocolParams& params);

struct ProtocolRun {
    std::vector<std::pair<std::string, PhotonState>> outputs;
    std::vector<double> discarded;
};

/// Evolves every input through the instance (circuit mode) or substitutes
/// the printed expansions (literal mode) and finishes detector relabeling.
ProtocolRun run_protocol(const ProtocolInstance& instance);

DiscriminationReport analyze_protocol(const ProtocolInstance& instance,
                                      const std::vector<double>& priors = {});

/// Per-theta least-squares fit of the vertical-arm beam-splitter
/// transmission in the time-bin circuit against the printed expansions.
struct TimebinFit {
    std::vector<double> thetas;
    std::vector<double> transmissions;
    double max_residual = 0.0;
    bool verified = false;  // max_residual <= 1e-6
};

TimebinFit fit_timebin_transmission(const std::vector<double>& thetas);

/// Interior grid of `points` angles in (0, pi/2), never touching the
/// endpoints (and, for 64-point grids, never pi/4).
std::vector<double> theta_grid(int points);

}  // namespace belldisc
