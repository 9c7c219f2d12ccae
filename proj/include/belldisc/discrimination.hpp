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

#include "belldisc/detection.hpp"

namespace belldisc {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An event is a signature for state i when its probability under i
/// exceeds kTauPositive while every other state sits below kTauZero.
inline constexpr double kTauZero = 1e-12;
inline constexpr double kTauPositive = 1e-10;

struct EventRow {
    DetectionEvent event;
    std::vector<double> probability;  // one column per input state
    int unambiguous_for = -1;         // index into inputs, -1 if ambiguous
};

struct DiscriminationReport {
    std::vector<std::string> inputs;
    std::vector<double> priors;
    std::vector<EventRow> event_table;
    std::vector<double> per_state_success;
    double success_probability = 0.0;
    std::vector<double> discarded;  // per input state

    std::string to_json() const;
    std::string event_table_csv() const;
};

DiscriminationReport analyze(
    const std::vector<std::pair<std::string, PhotonState>>& outputs,
    const DetectorSpec& detectors, const std::vector<double>& priors,
    const std::vector<double>& discarded = {});

std::vector<double> uniform_priors(std::size_t n);

enum class ClosedForm {
    HyperMomentum,     // 1/2, independent of theta
    HyperPolarization, // 1/2
    HyperOam,          // 1/2
    Timebin,           // (1 + sin^2 theta)/4, theta != pi/4
    AncillaGeneral,    // two-parameter expression over (theta1, theta2)
    AncillaEqual,      // single-parameter expression at theta1 == theta2
    Sfg,               // 1
};

/// Evaluates the printed success-probability expression for a protocol.
/// Angles must lie in (0, pi/2); Timebin additionally excludes pi/4.
double closed_form(ClosedForm which, double theta1, double theta2 = 0.0);

}  // namespace belldisc
