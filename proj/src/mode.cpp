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

#include "belldisc/mode.hpp"

#include <array>
#include <vector>

namespace belldisc {

namespace {

const char* pol_name(Pol p) {
    switch (p) {
        case Pol::H: return "H";
        case Pol::V: return "V";
        default: return "-";
    }
}

const char* oam_name(Oam o) {
    switch (o) {
        case Oam::Plus: return "+1";
        case Oam::Minus: return "-1";
        case Oam::Zero: return "0";
        default: return "-";
    }
}

const char* tag_name(TimeTag t) {
    switch (t) {
        case TimeTag::Th: return "th";
        case TimeTag::Tv: return "tv";
        default: return "-";
    }
}

const char* band_name(Band b) {
    return b == Band::Doubled ? "2w" : "-";
}

}  // namespace

std::string Mode::str() const {
    std::string s = path;
    s += ':';
    s += pol_name(pol);
    s += ':';
    s += oam_name(oam);
    s += ':';
    s += tag_name(tag);
    s += ':';
    s += band_name(band);
    return s;
}

Mode path_mode(std::string_view path) {
    Mode m;
    m.path = std::string(path);
    return m;
}

Mode pol_mode(std::string_view path, Pol pol) {
    Mode m;
    m.path = std::string(path);
    m.pol = pol;
    return m;
}

Mode oam_mode(std::string_view path, Oam oam) {
    Mode m;
    m.path = std::string(path);
    m.oam = oam;
    return m;
}

Mode parse_mode(std::string_view text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 5 || parts[0].empty())
        throw ModeError("bad mode label: " + std::string(text));
    Mode m;
    m.path = parts[0];
    if (parts[1] == "H") m.pol = Pol::H;
    else if (parts[1] == "V") m.pol = Pol::V;
    else if (parts[1] == "-") m.pol = Pol::None;
    else throw ModeError("bad polarization in mode label: " + std::string(text));
    if (parts[2] == "+1") m.oam = Oam::Plus;
    else if (parts[2] == "-1") m.oam = Oam::Minus;
    else if (parts[2] == "0") m.oam = Oam::Zero;
    else if (parts[2] == "-") m.oam = Oam::None;
    else throw ModeError("bad OAM in mode label: " + std::string(text));
    if (parts[3] == "th") m.tag = TimeTag::Th;
    else if (parts[3] == "tv") m.tag = TimeTag::Tv;
    else if (parts[3] == "-") m.tag = TimeTag::Untagged;
    else throw ModeError("bad time tag in mode label: " + std::string(text));
    if (parts[4] == "2w") m.band = Band::Doubled;
    else if (parts[4] == "-") m.band = Band::Fundamental;
    else throw ModeError("bad frequency band in mode label: " + std::string(text));
    return m;
}

}  // namespace belldisc
