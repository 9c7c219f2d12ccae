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

struct ParameterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BindingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct RoutingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ElementKind {
    BeamSplitter,
    PolarizingBS,
    HalfWavePlate,
    Hologram,
    Delay,
    TimeCoalesce,
    PhaseShift,
    DichroicRouter,
    SFGTypeI,
    SFGTypeII,
    EffectiveMap,
    Relabel,
};

/// A rewrite of one operator pair into another. Used by the PBS routing
/// rules, the path-conditioned wave plates and the hologram.
struct PairRule {
    std::array<Mode, 2> pattern;      // unordered match
    std::array<Mode, 2> replacement;  // emitted in normal form later
};

/// Two fundamental operators merge into one doubled-frequency operator.
struct SfgRule {
    std::array<Mode, 2> pattern;
    Mode replacement;
};

struct DelayTarget {
    Mode mode;  // untagged pattern
    TimeTag tag = TimeTag::Th;
};

/// One optical element. Linear kinds carry (modes, matrix); rewrite kinds
/// carry rule lists. Immutable once built.
struct ElementOp {
    ElementKind kind = ElementKind::BeamSplitter;
    std::string label;

    // Linear kinds.
    std::vector<Mode> modes;
    Eigen::MatrixXcd matrix;

    // Pair-rewrite kinds. Any operator matching `domain` that cannot be
    // paired by a rule is a routing error; operators outside pass through.
    std::vector<PairRule> pair_rules;
    std::vector<Mode> domain;

    std::vector<SfgRule> sfg_rules;
    std::vector<DelayTarget> delay_targets;
    std::map<Band, std::string> band_prefix;

    // Builder parameters, retained for serialization.
    double param = 0.0;

    bool is_linear() const;
    bool may_decrease_norm() const;
};

PhotonState apply_element(const ElementOp& e, const PhotonState& s);

/// a -> sqrt(t) a + sqrt(1-t) b,  b -> sqrt(1-t) a - sqrt(t) b.
ElementOp beam_splitter(const Mode& a, const Mode& b, double transmission);

/// Plate mounted at `plate_angle`; the polarization rotation angle is twice
/// that: h -> cos r h + sin r v, v -> sin r h - cos r v.
ElementOp half_wave_plate(const Mode& h_mode, const Mode& v_mode, double plate_angle);

ElementOp phase_shift(const Mode& m, double phi);

/// Conditional path relabeling over (path operator, companion operator)
/// pairs, given as explicit rewrite rules.
ElementOp polarizing_bs(std::vector<PairRule> rules, std::string label = "pbs");

/// Forked hologram: consumes the OAM companion into a path label on the
/// polarization operator and leaves a zero-OAM carrier behind.
ElementOp hologram(std::vector<PairRule> rules, std::string label = "hologram");

ElementOp delay(std::vector<DelayTarget> targets);
ElementOp time_coalesce();

enum class SfgType { TypeI, TypeII };
ElementOp sfg(SfgType type, std::vector<SfgRule> rules);

ElementOp dichroic_router(std::map<Band, std::string> band_prefix);

/// Arbitrary contractive linear mode map; singular values must not
/// exceed 1 (within 1e-12).
ElementOp effective_map(std::vector<Mode> modes, Eigen::MatrixXcd matrix);

/// Same shape as effective_map but skipping the contractivity check: used
/// for the split/rotate/merge stages the source material prints already
/// compensated for the discarded merge arm.
ElementOp post_selected_map(std::vector<Mode> modes, Eigen::MatrixXcd matrix);

/// Unitary permutation relabel (mode -> mode, bijective).
ElementOp relabel(std::vector<std::pair<Mode, Mode>> moves, std::string label = "relabel");

}  // namespace belldisc
