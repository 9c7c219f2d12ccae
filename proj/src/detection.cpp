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

#include "belldisc/detection.hpp"

#include <set>

namespace belldisc {

bool DetectorPattern::matches(const Mode& m) const {
    if (m.path != path) return false;
    if (pol && m.pol != *pol) return false;
    if (band && m.band != *band) return false;
    if (oam && m.oam != *oam) return false;
    return true;
}

Arrival DetectionEvent::arrival() const {
    std::set<TimeTag> tags;
    for (const auto& [key, n] : counts)
        if (key.second != TimeTag::Untagged) tags.insert(key.second);
    return tags.size() > 1 ? Arrival::Delayed : Arrival::Same;
}

std::string DetectionEvent::str() const {
    // Group clicks by detector so a two-tag double renders as one part.
    std::map<std::string, std::map<TimeTag, int>> by_id;
    for (const auto& [key, n] : counts) by_id[key.first][key.second] += n;

    std::string s;
    bool first = true;
    for (const auto& [id, tags] : by_id) {
        if (!first) s += '+';
        first = false;
        int total = 0;
        for (const auto& [tag, n] : tags) total += n;
        if (tags.size() == 1) {
            const TimeTag tag = tags.begin()->first;
            s += id;
            if (tag == TimeTag::Th) s += "[th]";
            if (tag == TimeTag::Tv) s += "[tv]";
            if (total > 1) s += "(x" + std::to_string(total) + ")";
        } else {
            s += id + "(x" + std::to_string(total) + ",delay)";
        }
    }
    return s;
}

std::vector<std::pair<DetectionEvent, double>> enumerate_events(const PhotonState& s,
                                                                const DetectorSpec& d) {
    std::map<DetectionEvent, double> acc;
    for (const auto& [mono, amp] : s.terms()) {
        DetectionEvent ev;
        for (const Mode& op : mono.modes()) {
            const DetectorPattern* hit = nullptr;
            for (const DetectorPattern& p : d.detectors) {
                if (p.matches(op)) {
                    hit = &p;
                    break;
                }
            }
            if (!hit) {
                bool ignored = false;
                for (const DetectorPattern& p : d.ignore) {
                    if (p.matches(op)) {
                        ignored = true;
                        break;
                    }
                }
                if (ignored) continue;
                throw SpecError("no detector resolves operator " + op.str());
            }
            const TimeTag tag = d.resolve_arrival ? op.tag : TimeTag::Untagged;
            ++ev.counts[{hit->id, tag}];
        }
        acc[ev] += std::norm(amp) * mono.weight();
    }
    return {acc.begin(), acc.end()};
}

void add_pol_detectors(DetectorSpec& spec, const std::string& path,
                       const std::string& id_h, const std::string& id_v) {
    spec.detectors.push_back(DetectorPattern{id_h, path, Pol::H, std::nullopt, std::nullopt});
    spec.detectors.push_back(DetectorPattern{id_v, path, Pol::V, std::nullopt, std::nullopt});
}

}  // namespace belldisc
