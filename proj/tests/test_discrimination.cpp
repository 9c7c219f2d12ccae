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

#include "belldisc/discrimination.hpp"

using namespace belldisc;

namespace {
constexpr double kPi = 3.14159265358979323846;

DetectorSpec path_detectors(const std::vector<std::string>& paths) {
    DetectorSpec spec;
    for (const auto& p : paths)
        spec.detectors.push_back({p, p, std::nullopt, std::nullopt, std::nullopt});
    return spec;
}
}  // namespace

TEST_CASE("analyze separates exclusive signatures") {
    const Mode x = path_mode("x"), y = path_mode("y"), z = path_mode("z");
    const DetectorSpec spec = path_detectors({"x", "y", "z"});

    // State A owns event x+y; both share x+z.
    const PhotonState sa = add(PhotonState::term({x, y}, std::sqrt(0.5)),
                               PhotonState::term({x, z}, std::sqrt(0.5)));
    const PhotonState sb = PhotonState::term({x, z}, 1.0);
    const auto rep = analyze({{"A", sa}, {"B", sb}}, spec, uniform_priors(2));
    CHECK(rep.success_probability == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(rep.per_state_success[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.per_state_success[1] == doctest::Approx(0.0));

    // Identical states cannot be told apart at all.
    const auto same = analyze({{"A", sb}, {"B", sb}}, spec, uniform_priors(2));
    CHECK(same.success_probability == doctest::Approx(0.0));

    CHECK_THROWS_AS(analyze({{"A", sa}, {"A", sb}}, spec, uniform_priors(2)), InputError);
    CHECK_THROWS_AS(analyze({{"A", sa}, {"B", sb}}, spec, {0.4, 0.4}), InputError);
    CHECK_THROWS_AS(analyze({{"A", sa}, {"B", sb}}, spec, {1.5, -0.5}), InputError);
}

TEST_CASE("report serializes to JSON and CSV") {
    const Mode x = path_mode("x"), y = path_mode("y");
    const DetectorSpec spec = path_detectors({"x", "y"});
    const auto rep = analyze({{"A", PhotonState::term({x, x}, 1.0 / std::sqrt(2.0))},
                              {"B", PhotonState::term({x, y})}},
                             spec, uniform_priors(2));
    CHECK(rep.success_probability == doctest::Approx(1.0).epsilon(1e-12));
    const std::string j = rep.to_json();
    CHECK(j.find("\"success_probability\"") != std::string::npos);
    CHECK(j.find("\"unambiguous_for\": \"A\"") != std::string::npos);
    const std::string csv = rep.event_table_csv();
    CHECK(csv.find("event,P(event|A),P(event|B),unambiguous_for") != std::string::npos);
    CHECK(csv.find("x(x2),1,0,A") != std::string::npos);
}

TEST_CASE("closed forms evaluate the printed expressions") {
    CHECK(closed_form(ClosedForm::HyperMomentum, 0.3) == doctest::Approx(0.5));
    CHECK(closed_form(ClosedForm::Timebin, kPi / 6.0) == doctest::Approx(0.3125));
    CHECK(closed_form(ClosedForm::AncillaGeneral, kPi / 4.0, kPi / 4.0) ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK(closed_form(ClosedForm::AncillaEqual, kPi / 4.0) ==
          doctest::Approx(0.28125).epsilon(1e-12));
    CHECK(closed_form(ClosedForm::Sfg, 0.3, 1.1) == doctest::Approx(1.0));

    CHECK_THROWS_AS(closed_form(ClosedForm::Timebin, kPi / 4.0), DomainError);
    CHECK_THROWS_AS(closed_form(ClosedForm::Timebin, 0.0), DomainError);
    CHECK_THROWS_AS(closed_form(ClosedForm::HyperOam, kPi), DomainError);
    CHECK_THROWS_AS(closed_form(ClosedForm::AncillaGeneral, 0.5, -0.1), DomainError);
}
