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

#include "belldisc/elements.hpp"

#include <algorithm>
#include <cmath>

namespace belldisc {

bool ElementOp::is_linear() const {
    switch (kind) {
        case ElementKind::BeamSplitter:
        case ElementKind::HalfWavePlate:
        case ElementKind::PhaseShift:
        case ElementKind::EffectiveMap:
        case ElementKind::Relabel:
            return true;
        default:
            return false;
    }
}

bool ElementOp::may_decrease_norm() const {
    if (kind == ElementKind::TimeCoalesce) return true;
    if (kind == ElementKind::EffectiveMap) return !is_unitary(matrix, 1e-12);
    return false;
}

namespace {

PhotonState apply_pair_rules(const ElementOp& e, const PhotonState& s) {
    PhotonState out;
    for (const auto& [mono, amp] : s.terms()) {
        std::vector<Mode> ops = mono.modes();
        std::vector<bool> used(ops.size(), false);
        std::vector<Mode> result;
        result.reserve(ops.size());
        for (const PairRule& rule : e.pair_rules) {
            while (true) {
                int ia = -1, ib = -1;
                for (std::size_t k = 0; k < ops.size(); ++k) {
                    if (used[k]) continue;
                    if (ia < 0 && ops[k] == rule.pattern[0]) {
                        ia = static_cast<int>(k);
                        continue;
                    }
                    if (ib < 0 && ops[k] == rule.pattern[1]) ib = static_cast<int>(k);
                }
                if (ia < 0 || ib < 0) break;
                used[ia] = used[ib] = true;
                result.push_back(rule.replacement[0]);
                result.push_back(rule.replacement[1]);
            }
        }
        for (std::size_t k = 0; k < ops.size(); ++k) {
            if (used[k]) continue;
            if (std::find(e.domain.begin(), e.domain.end(), ops[k]) != e.domain.end())
                throw RoutingError(e.label + ": unpaired operator " + ops[k].str() +
                                   " in " + mono.str());
            if (e.kind == ElementKind::Hologram && ops[k].oam != Oam::None)
                throw RoutingError(e.label + ": OAM value not covered by bindings: " +
                                   ops[k].str());
            result.push_back(ops[k]);
        }
        out.accumulate(Monomial(std::move(result)), amp);
    }
    out.prune();
    return out;
}

PhotonState apply_sfg(const ElementOp& e, const PhotonState& s) {
    PhotonState out;
    for (const auto& [mono, amp] : s.terms()) {
        std::vector<Mode> ops = mono.modes();
        std::vector<bool> used(ops.size(), false);
        std::vector<Mode> result;
        for (const SfgRule& rule : e.sfg_rules) {
            while (true) {
                int ia = -1, ib = -1;
                for (std::size_t k = 0; k < ops.size(); ++k) {
                    if (used[k]) continue;
                    if (ia < 0 && ops[k] == rule.pattern[0]) {
                        ia = static_cast<int>(k);
                        continue;
                    }
                    if (ib < 0 && ops[k] == rule.pattern[1]) ib = static_cast<int>(k);
                }
                if (ia < 0 || ib < 0) break;
                used[ia] = used[ib] = true;
                result.push_back(rule.replacement);
            }
        }
        for (std::size_t k = 0; k < ops.size(); ++k)
            if (!used[k]) result.push_back(ops[k]);
        out.accumulate(Monomial(std::move(result)), amp);
    }
    out.prune();
    return out;
}

PhotonState apply_delay(const ElementOp& e, const PhotonState& s) {
    PhotonState out;
    for (const auto& [mono, amp] : s.terms()) {
        std::vector<Mode> result;
        result.reserve(mono.modes().size());
        for (const Mode& op : mono.modes()) {
            Mode next = op;
            for (const DelayTarget& t : e.delay_targets) {
                Mode untagged = op;
                untagged.tag = TimeTag::Untagged;
                if (untagged == t.mode) {
                    if (op.tag != TimeTag::Untagged)
                        throw RoutingError("delay: operator already tagged: " + op.str());
                    next.tag = t.tag;
                    break;
                }
            }
            result.push_back(next);
        }
        out.accumulate(Monomial(std::move(result)), amp);
    }
    out.prune();
    return out;
}

PhotonState apply_coalesce(const PhotonState& s) {
    PhotonState out;
    for (const auto& [mono, amp] : s.terms()) {
        if (mono.photons() != 2)
            throw ContractError("time_coalesce expects two-photon terms, got " +
                                mono.str());
        const Mode& a = mono.modes()[0];
        const Mode& b = mono.modes()[1];
        if (a.tag != TimeTag::Untagged && a.tag == b.tag) {
            Mode a2 = a.with_tag(TimeTag::Untagged);
            Mode b2 = b.with_tag(TimeTag::Untagged);
            out.accumulate(Monomial({a2, b2}), amp);
        } else {
            out.accumulate(mono, amp);
        }
    }
    out.prune();
    return out;
}

PhotonState apply_dichroic(const ElementOp& e, const PhotonState& s) {
    PhotonState out;
    for (const auto& [mono, amp] : s.terms()) {
        std::vector<Mode> result;
        result.reserve(mono.modes().size());
        for (const Mode& op : mono.modes()) {
            auto it = e.band_prefix.find(op.band);
            if (it == e.band_prefix.end()) {
                result.push_back(op);
            } else {
                result.push_back(op.with_path(it->second + op.path));
            }
        }
        out.accumulate(Monomial(std::move(result)), amp);
    }
    out.prune();
    return out;
}

}  // namespace

PhotonState apply_element(const ElementOp& e, const PhotonState& s) {
    if (s.empty()) return s;
    if (e.is_linear()) return apply_mode_map(s, ModeMap{e.modes, e.matrix});
    switch (e.kind) {
        case ElementKind::PolarizingBS:
        case ElementKind::Hologram:
            return apply_pair_rules(e, s);
        case ElementKind::SFGTypeI:
        case ElementKind::SFGTypeII:
            return apply_sfg(e, s);
        case ElementKind::Delay:
            return apply_delay(e, s);
        case ElementKind::TimeCoalesce:
            return apply_coalesce(s);
        case ElementKind::DichroicRouter:
            return apply_dichroic(e, s);
        default:
            throw ShapeError("unhandled element kind");
    }
}

ElementOp beam_splitter(const Mode& a, const Mode& b, double transmission) {
    if (!(transmission >= 0.0 && transmission <= 1.0))
        throw ParameterError("beam splitter transmission must lie in [0,1]");
    ElementOp e;
    e.kind = ElementKind::BeamSplitter;
    e.label = "bs";
    e.modes = {a, b};
    e.param = transmission;
    const double ct = std::sqrt(transmission);
    const double st = std::sqrt(1.0 - transmission);
    e.matrix.resize(2, 2);
    e.matrix << ct, st, st, -ct;
    return e;
}

ElementOp half_wave_plate(const Mode& h_mode, const Mode& v_mode, double plate_angle) {
    if (h_mode.path != v_mode.path || h_mode.pol != Pol::H || v_mode.pol != Pol::V ||
        h_mode.tag != v_mode.tag || h_mode.band != v_mode.band ||
        h_mode.oam != v_mode.oam)
        throw BindingError("half_wave_plate modes must share a path and differ only "
                           "in polarization");
    ElementOp e;
    e.kind = ElementKind::HalfWavePlate;
    e.label = "hwp";
    e.modes = {h_mode, v_mode};
    e.param = plate_angle;
    const double r = 2.0 * plate_angle;
    e.matrix.resize(2, 2);
    e.matrix << std::cos(r), std::sin(r), std::sin(r), -std::cos(r);
    return e;
}

ElementOp phase_shift(const Mode& m, double phi) {
    ElementOp e;
    e.kind = ElementKind::PhaseShift;
    e.label = "phase";
    e.modes = {m};
    e.param = phi;
    e.matrix.resize(1, 1);
    e.matrix(0, 0) = std::polar(1.0, phi);
    return e;
}

namespace {
ElementOp pair_element(ElementKind kind, std::vector<PairRule> rules, std::string label) {
    ElementOp e;
    e.kind = kind;
    e.label = std::move(label);
    e.pair_rules = std::move(rules);
    for (const PairRule& r : e.pair_rules) {
        for (const Mode& m : r.pattern) {
            if (std::find(e.domain.begin(), e.domain.end(), m) == e.domain.end())
                e.domain.push_back(m);
        }
    }
    return e;
}
}  // namespace

ElementOp polarizing_bs(std::vector<PairRule> rules, std::string label) {
    return pair_element(ElementKind::PolarizingBS, std::move(rules), std::move(label));
}

ElementOp hologram(std::vector<PairRule> rules, std::string label) {
    return pair_element(ElementKind::Hologram, std::move(rules), std::move(label));
}

ElementOp delay(std::vector<DelayTarget> targets) {
    ElementOp e;
    e.kind = ElementKind::Delay;
    e.label = "delay";
    e.delay_targets = std::move(targets);
    for (const DelayTarget& t : e.delay_targets) {
        if (t.tag == TimeTag::Untagged)
            throw ParameterError("delay target tag must be t_h or t_v");
        if (t.mode.tag != TimeTag::Untagged)
            throw ParameterError("delay pattern must be untagged");
    }
    return e;
}

ElementOp time_coalesce() {
    ElementOp e;
    e.kind = ElementKind::TimeCoalesce;
    e.label = "coalesce";
    return e;
}

ElementOp sfg(SfgType type, std::vector<SfgRule> rules) {
    ElementOp e;
    e.kind = type == SfgType::TypeI ? ElementKind::SFGTypeI : ElementKind::SFGTypeII;
    e.label = type == SfgType::TypeI ? "sfg1" : "sfg2";
    e.sfg_rules = std::move(rules);
    for (const SfgRule& r : e.sfg_rules) {
        if (r.replacement.band != Band::Doubled)
            throw ParameterError("sfg output must be at the doubled frequency");
    }
    return e;
}

ElementOp dichroic_router(std::map<Band, std::string> band_prefix) {
    ElementOp e;
    e.kind = ElementKind::DichroicRouter;
    e.label = "dichroic";
    e.band_prefix = std::move(band_prefix);
    return e;
}

ElementOp effective_map(std::vector<Mode> modes, Eigen::MatrixXcd matrix) {
    if (static_cast<int>(modes.size()) != matrix.rows() || matrix.rows() != matrix.cols())
        throw ShapeError("effective map matrix does not match its mode list");
    if (max_singular_value(matrix) > 1.0 + 1e-12)
        throw ParameterError("effective map must be contractive (singular values <= 1)");
    ElementOp e;
    e.kind = ElementKind::EffectiveMap;
    e.label = "effective";
    e.modes = std::move(modes);
    e.matrix = std::move(matrix);
    return e;
}

ElementOp post_selected_map(std::vector<Mode> modes, Eigen::MatrixXcd matrix) {
    if (static_cast<int>(modes.size()) != matrix.rows() || matrix.rows() != matrix.cols())
        throw ShapeError("post-selected map matrix does not match its mode list");
    ElementOp e;
    e.kind = ElementKind::EffectiveMap;
    e.label = "postsel";
    e.modes = std::move(modes);
    e.matrix = std::move(matrix);
    return e;
}

ElementOp relabel(std::vector<std::pair<Mode, Mode>> moves, std::string label) {
    ElementOp e;
    e.kind = ElementKind::Relabel;
    e.label = std::move(label);
    std::vector<Mode> from, to;
    for (auto& [src, dst] : moves) {
        from.push_back(src);
        to.push_back(dst);
    }
    // The relabel is a permutation matrix over the union of sources and
    // destinations.
    e.modes = from;
    for (const Mode& m : to)
        if (std::find(e.modes.begin(), e.modes.end(), m) == e.modes.end())
            e.modes.push_back(m);
    const int n = static_cast<int>(e.modes.size());
    e.matrix = Eigen::MatrixXcd::Zero(n, n);
    std::vector<bool> is_source(n, false), used_row(n, false);
    for (std::size_t k = 0; k < moves.size(); ++k) {
        auto col = std::find(e.modes.begin(), e.modes.end(), moves[k].first) - e.modes.begin();
        auto row = std::find(e.modes.begin(), e.modes.end(), moves[k].second) - e.modes.begin();
        e.matrix(row, col) = 1.0;
        is_source[col] = true;
        used_row[row] = true;
    }
    for (int j = 0; j < n; ++j) {
        if (!is_source[j]) {
            if (used_row[j])
                throw BindingError("relabel moves must form a permutation");
            e.matrix(j, j) = 1.0;
        }
    }
    if (!is_unitary(e.matrix))
        throw BindingError("relabel moves must form a permutation");
    return e;
}

}  // namespace belldisc
