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

#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "belldisc/protocols.hpp"

using namespace belldisc;

namespace {

// Brute-force substitution oracle: expands every index assignment over the
// full mode list and keys results by sorted label strings, with no merging
// shortcuts shared with apply_mode_map.
std::map<std::string, Complex> oracle_apply(const PhotonState& s, const ModeMap& map) {
    std::map<std::string, Complex> out;
    const int n = static_cast<int>(map.modes.size());
    for (const auto& [mono, amp] : s.terms()) {
        const auto& ops = mono.modes();
        std::vector<int> cols;
        for (const Mode& op : ops) {
            int col = -1;
            for (int j = 0; j < n; ++j)
                if (map.modes[j] == op) col = j;
            cols.push_back(col);
        }
        std::vector<int> digits(ops.size(), 0);
        while (true) {
            Complex coeff = amp;
            std::vector<std::string> labels;
            for (std::size_t k = 0; k < ops.size(); ++k) {
                if (cols[k] < 0) {
                    labels.push_back(ops[k].str());
                } else {
                    coeff *= map.matrix(digits[k], cols[k]);
                    labels.push_back(map.modes[static_cast<std::size_t>(digits[k])].str());
                }
            }
            if (coeff != Complex(0.0)) {
                std::sort(labels.begin(), labels.end());
                std::string key;
                for (const auto& l : labels) key += l + "|";
                out[key] += coeff;
            }
            // Odometer over substituted operators only.
            std::size_t k = 0;
            for (; k < ops.size(); ++k) {
                if (cols[k] < 0) continue;
                if (++digits[k] < n) break;
                digits[k] = 0;
            }
            if (k == ops.size()) break;
        }
    }
    return out;
}

std::map<std::string, Complex> keyed_terms(const PhotonState& s) {
    std::map<std::string, Complex> out;
    for (const auto& [mono, amp] : s.terms()) {
        std::string key;
        for (const Mode& m : mono.modes()) key += m.str() + "|";
        out[key] = amp;
    }
    return out;
}

struct Rng {
    std::mt19937_64 gen{20260810};
    std::uniform_real_distribution<double> uni{-1.0, 1.0};
    double real() { return uni(gen); }
    std::size_t index(std::size_t n) { return gen() % n; }
};

Eigen::MatrixXcd random_unitary(Rng& rng, int n) {
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex(rng.real(), rng.real());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
    return qr.householderQ();
}

}  // namespace

TEST_CASE("thousand-case randomized property suite") {
    Rng rng;
    const std::vector<Mode> pool = {path_mode("m1"), path_mode("m2"), path_mode("m3"),
                                    path_mode("m4"), path_mode("m5"), path_mode("m6")};
    int cases = 0;

    // 400 cases: substitution oracle + unitarity on up to 4 photons over up
    // to 6 modes.
    for (int rep = 0; rep < 400; ++rep) {
        const int photons = 2 + static_cast<int>(rng.index(3));  // 2..4
        const int n_modes = 3 + static_cast<int>(rng.index(4));  // 3..6
        std::vector<Mode> modes(pool.begin(), pool.begin() + n_modes);

        PhotonState s;
        for (int t = 0; t < 3; ++t) {
            std::vector<Mode> ops;
            for (int p = 0; p < photons; ++p)
                ops.push_back(modes[rng.index(modes.size())]);
            s = add(s, PhotonState::term(Monomial(ops), Complex(rng.real(), rng.real())));
        }
        const ModeMap map{modes, random_unitary(rng, n_modes)};
        const PhotonState fast = apply_mode_map(s, map);

        const auto expect = oracle_apply(s, map);
        const auto got = keyed_terms(fast);
        for (const auto& [key, amp] : expect) {
            auto it = got.find(key);
            const Complex have = it == got.end() ? Complex(0.0) : it->second;
            REQUIRE(std::abs(have - amp) < 1e-12);
        }
        for (const auto& [key, amp] : got) REQUIRE(expect.count(key) == 1);

        REQUIRE(squared_norm(fast) == doctest::Approx(squared_norm(s)).epsilon(1e-10));
        ++cases;
    }

    // 300 cases: inner-product oracle equivalence via conjugate symmetry and
    // positivity on random superpositions.
    for (int rep = 0; rep < 300; ++rep) {
        PhotonState s, t;
        for (int k = 0; k < 3; ++k) {
            std::vector<Mode> ops1, ops2;
            const int photons = 1 + static_cast<int>(rng.index(4));
            for (int p = 0; p < photons; ++p) {
                ops1.push_back(pool[rng.index(4)]);
                ops2.push_back(pool[rng.index(4)]);
            }
            s = add(s, PhotonState::term(Monomial(ops1), Complex(rng.real(), rng.real())));
            t = add(t, PhotonState::term(Monomial(ops2), Complex(rng.real(), rng.real())));
        }
        REQUIRE(std::abs(inner_product(s, t) - std::conj(inner_product(t, s))) < 1e-12);
        REQUIRE(inner_product(s, s).real() >= -1e-15);
        REQUIRE(std::abs(inner_product(s, s).imag()) < 1e-13);
        REQUIRE(inner_product(s, s).real() ==
                doctest::Approx(squared_norm(s)).epsilon(1e-12));
        ++cases;
    }

    // 300 cases: protocol-level accounting. Event probabilities plus the
    // discarded probability recover the unit input norm, and orthogonal
    // inputs stay orthogonal through the loss-free analyzers.
    std::uniform_real_distribution<double> theta_dist(0.05, 1.52);
    for (int rep = 0; rep < 300; ++rep) {
        const double theta = theta_dist(rng.gen);
        const ProtocolId ids[] = {ProtocolId::HyperMomentum, ProtocolId::HyperPolarization,
                                  ProtocolId::HyperOam, ProtocolId::Timebin,
                                  ProtocolId::Sfg, ProtocolId::Baseline};
        const ProtocolId id = ids[rng.index(6)];
        ProtocolParams p;
        p.theta1 = theta;
        p.theta2 = theta_dist(rng.gen);
        const ProtocolInstance inst = build(id, p);
        const ProtocolRun run = run_protocol(inst);
        for (std::size_t i = 0; i < run.outputs.size(); ++i) {
            double total = run.discarded[i];
            for (const auto& [ev, prob] :
                 enumerate_events(run.outputs[i].second, inst.detectors))
                total += prob;
            REQUIRE(total == doctest::Approx(1.0).epsilon(1e-10));
        }
        if (inst.circuit.declared_loss_points().empty()) {
            // Loss-free analyzers: images stay orthogonal.
            for (std::size_t i = 0; i < run.outputs.size(); ++i)
                for (std::size_t j = i + 1; j < run.outputs.size(); ++j)
                    REQUIRE(std::abs(inner_product(run.outputs[i].second,
                                                   run.outputs[j].second)) < 1e-10);
        }
        ++cases;
    }

    CHECK(cases == 1000);
}
