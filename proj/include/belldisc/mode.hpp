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

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace belldisc {

enum class Pol : std::uint8_t { None = 0, H, V };
enum class Oam : std::int8_t { None = 0, Plus, Minus, Zero };
enum class TimeTag : std::uint8_t { Untagged = 0, Th, Tv };
enum class Band : std::uint8_t { Fundamental = 0, Doubled };

/// One physical mode label: spatial path plus the polarization / OAM /
/// time-bin / frequency labels a creation operator can carry.
struct Mode {
    std::string path;
    Pol pol = Pol::None;
    Oam oam = Oam::None;
    TimeTag tag = TimeTag::Untagged;
    Band band = Band::Fundamental;

    auto operator<=>(const Mode&) const = default;
    bool operator==(const Mode&) const = default;

    Mode with_path(std::string p) const {
        Mode m = *this;
        m.path = std::move(p);
        return m;
    }
    Mode with_pol(Pol p) const {
        Mode m = *this;
        m.pol = p;
        return m;
    }
    Mode with_tag(TimeTag t) const {
        Mode m = *this;
        m.tag = t;
        return m;
    }

    /// Canonical "path:pol:oam:tag:band" form, "-" for unset labels.
    std::string str() const;
};

/// Shorthand constructors for the common label combinations.
Mode path_mode(std::string_view path);
Mode pol_mode(std::string_view path, Pol pol);
Mode oam_mode(std::string_view path, Oam oam);

/// Parses the canonical "path:pol:oam:tag:band" form produced by Mode::str().
Mode parse_mode(std::string_view text);

struct ModeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace belldisc
