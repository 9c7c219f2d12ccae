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

#include <cstdint>
#include <string>
#include <vector>

#include "belldisc/discrimination.hpp"

namespace belldisc {

/// Triangular mesh of two-mode mixers: one (rotation, phase) pair per mode
/// pair plus one output phase per mode. Realizes a unitary for any
/// parameter values.
struct ReckNetwork {
    int n_modes = 0;
    std::vector<double> params;

    static std::size_t param_count(int n_modes) {
        const std::size_t p = static_cast<std::size_t>(n_modes) *
                              static_cast<std::size_t>(n_modes - 1) / 2;
        return 2 * p + static_cast<std::size_t>(n_modes);
    }
};

Eigen::MatrixXcd realize(const ReckNetwork& net);

struct OptimizerTracePoint {
    int restart = 0;
    std::uint64_t evaluations = 0;
    double best_success = 0.0;
};

struct OptimizerResult {
    ReckNetwork network;
    double success = 0.0;
    std::vector<OptimizerTracePoint> trace;
    std::uint64_t evaluations_used = 0;

    std::string to_json() const;
};

struct OptimizeOptions {
    std::uint64_t budget = 10000;  // total objective evaluations
    int restarts = 20;
    std::uint64_t seed = 0;
    int threads = 0;  // 0: use BELLDISC_THREADS or hardware_concurrency
};

/// Derivative-free search (annealed simplex with random restarts plus a
/// finite-difference signature-sharpening polish) over the network's
/// interferometer parameters, maximizing unambiguous-discrimination
/// success for the given inputs under number-resolving detection on
/// `modes`. Deterministic for a fixed seed.
OptimizerResult optimize(const std::vector<std::pair<std::string, PhotonState>>& inputs,
                         const std::vector<Mode>& modes, const std::vector<double>& priors,
                         const OptimizeOptions& options);

/// The analyze() success probability of a fixed network on the inputs.
double network_success(const ReckNetwork& net,
                       const std::vector<std::pair<std::string, PhotonState>>& inputs,
                       const std::vector<Mode>& modes, const std::vector<double>& priors);

int thread_budget(int requested);

}  // namespace belldisc
