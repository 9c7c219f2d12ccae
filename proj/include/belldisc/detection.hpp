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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "belldisc/fock.hpp"

namespace belldisc {

struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Matches one family of operators onto a named detector. Unset fields
/// match anything; `path` is always required.
struct DetectorPattern {
    std::string id;
    std::string path;
    std::optional<Pol> pol;
    std::optional<Band> band;
    std::optional<Oam> oam;

    bool matches(const Mode& m) const;
};

/// Number-resolving detector bank. Operators matching `ignore` patterns are
/// bookkeeping companions and do not click.
struct DetectorSpec {
    std::vector<DetectorPattern> detectors;
    std::vector<DetectorPattern> ignore;

    /// Detectors resolve click arrival times. The delays are classical and
    /// known, so each click carries its time tag into the signature.
    bool resolve_arrival = false;
};

enum class Arrival { Same, Delayed };

struct DetectionEvent {
    /// Clicks keyed by (detector id, arrival tag).
    std::map<std::pair<std::string, TimeTag>, int> counts;

    auto operator<=>(const DetectionEvent&) const = default;

    /// Delayed when clicks span more than one arrival time.
    Arrival arrival() const;

    /// Canonical rendering, e.g. "b1V+b2H", "Av1(x2,delay)" or
    /// "Ah1[th]+Bh2[tv]".
    std::string str() const;
};

std::vector<std::pair<DetectionEvent, double>> enumerate_events(const PhotonState& s,
                                                                const DetectorSpec& d);

/// Convenience: one pol-resolving detector pair per path ("a1" -> a1H, a1V).
void add_pol_detectors(DetectorSpec& spec, const std::string& path,
                       const std::string& id_h, const std::string& id_v);

}  // namespace belldisc
