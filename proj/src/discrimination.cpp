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

#include "belldisc/discrimination.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace belldisc {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

std::vector<double> uniform_priors(std::size_t n) {
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

DiscriminationReport analyze(
    const std::vector<std::pair<std::string, PhotonState>>& outputs,
    const DetectorSpec& detectors, const std::vector<double>& priors,
    const std::vector<double>& discarded) {
    const std::size_t n = outputs.size();
    if (priors.size() != n) throw InputError("one prior per input state required");
    double psum = 0.0;
    for (double p : priors) {
        if (!(p >= 0.0)) throw InputError("priors must be nonnegative");
        psum += p;
    }
    if (std::abs(psum - 1.0) > 1e-12) throw InputError("priors must sum to 1");
    {
        std::set<std::string> ids;
        for (const auto& [id, st] : outputs)
            if (!ids.insert(id).second) throw InputError("duplicate state id: " + id);
    }

    std::map<DetectionEvent, std::vector<double>> table;
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [ev, p] : enumerate_events(outputs[i].second, detectors)) {
            auto [it, inserted] = table.try_emplace(ev, std::vector<double>(n, 0.0));
            it->second[i] += p;
        }
    }

    DiscriminationReport rep;
    for (const auto& [id, st] : outputs) rep.inputs.push_back(id);
    rep.priors = priors;
    rep.per_state_success.assign(n, 0.0);
    rep.discarded = discarded.empty() ? std::vector<double>(n, 0.0) : discarded;
    if (rep.discarded.size() != n)
        throw InputError("one discarded probability per input state required");

    for (const auto& [ev, probs] : table) {
        EventRow row{ev, probs, -1};
        for (std::size_t i = 0; i < n; ++i) {
            if (probs[i] <= kTauPositive) continue;
            bool exclusive = true;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i && probs[j] >= kTauZero) {
                    exclusive = false;
                    break;
                }
            }
            if (exclusive) {
                row.unambiguous_for = static_cast<int>(i);
                rep.per_state_success[i] += probs[i];
                rep.success_probability += priors[i] * probs[i];
                break;
            }
        }
        rep.event_table.push_back(std::move(row));
    }
    return rep;
}

std::string DiscriminationReport::to_json() const {
    nlohmann::json j;
    j["inputs"] = inputs;
    j["priors"] = priors;
    j["success_probability"] = success_probability;
    j["per_state_success"] = per_state_success;
    j["discarded"] = discarded;
    nlohmann::json rows = nlohmann::json::array();
    for (const EventRow& row : event_table) {
        nlohmann::json r;
        r["event"] = row.event.str();
        r["probability"] = row.probability;
        if (row.unambiguous_for >= 0)
            r["unambiguous_for"] = inputs[static_cast<std::size_t>(row.unambiguous_for)];
        rows.push_back(r);
    }
    j["event_table"] = rows;
    return j.dump(2);
}

std::string DiscriminationReport::event_table_csv() const {
    std::string s = "event";
    for (const std::string& id : inputs) s += ",P(event|" + id + ")";
    s += ",unambiguous_for\n";
    for (const EventRow& row : event_table) {
        s += row.event.str();
        for (double p : row.probability) s += "," + fmt_double(p);
        s += ",";
        if (row.unambiguous_for >= 0)
            s += inputs[static_cast<std::size_t>(row.unambiguous_for)];
        s += "\n";
    }
    return s;
}

double closed_form(ClosedForm which, double theta1, double theta2) {
    const double pi2 = std::asin(1.0);  // pi/2
    auto in_open_domain = [&](double t) { return t > 0.0 && t < pi2; };
    switch (which) {
        case ClosedForm::HyperMomentum:
        case ClosedForm::HyperPolarization:
        case ClosedForm::HyperOam:
            if (!in_open_domain(theta1))
                throw DomainError("theta must lie in (0, pi/2)");
            return 0.5;
        case ClosedForm::Timebin: {
            if (!in_open_domain(theta1))
                throw DomainError("theta must lie in (0, pi/2)");
            if (std::abs(theta1 - pi2 / 2.0) < 1e-12)
                throw DomainError("timebin expression is not valid at theta = pi/4");
            const double s = std::sin(theta1);
            return (1.0 + s * s) / 4.0;
        }
        case ClosedForm::AncillaGeneral: {
            if (!in_open_domain(theta1) || !in_open_domain(theta2))
                throw DomainError("theta1, theta2 must lie in (0, pi/2)");
            return (1.0 / 32.0) *
                   (-2.0 * std::cos(4.0 * theta2) -
                    std::cos(2.0 * theta1) * (std::cos(4.0 * theta2) + 3.0) + 6.0);
        }
        case ClosedForm::AncillaEqual: {
            // Single-parameter form at theta1 == theta2; the angle rides in
            // the first argument.
            if (!in_open_domain(theta1))
                throw DomainError("theta must lie in (0, pi/2)");
            const double s = std::sin(theta1);
            return (1.0 / 16.0) * s * s *
                   (7.0 * std::cos(2.0 * theta1) + std::cos(4.0 * theta1) + 10.0);
        }
        case ClosedForm::Sfg:
            if (!in_open_domain(theta1) || !in_open_domain(theta2))
                throw DomainError("theta1, theta2 must lie in (0, pi/2)");
            return 1.0;
    }
    throw DomainError("unknown closed form");
}

}  // namespace belldisc
