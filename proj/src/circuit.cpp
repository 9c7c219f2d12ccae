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

#include "belldisc/circuit.hpp"

#include <json.hpp>

namespace belldisc {

using nlohmann::json;

Circuit::Circuit(std::vector<ElementOp> elements) {
    for (auto& e : elements) push_back(std::move(e));
}

void Circuit::push_back(ElementOp e) {
    if (e.may_decrease_norm()) loss_points_.push_back(elements_.size());
    elements_.push_back(std::move(e));
}

ApplyResult Circuit::apply(const PhotonState& input) const {
    return apply_prefix(input, elements_.size());
}

ApplyResult Circuit::apply_prefix(const PhotonState& input, std::size_t count) const {
    const double initial = squared_norm(input);
    PhotonState s = input;
    for (std::size_t i = 0; i < count && i < elements_.size(); ++i) {
        try {
            s = apply_element(elements_[i], s);
        } catch (const std::exception& err) {
            throw ApplyError(i, err.what());
        }
    }
    const double discarded = initial - squared_norm(s);
    return ApplyResult{std::move(s), discarded};
}

namespace {

json mode_json(const Mode& m) { return m.str(); }
Mode mode_from(const json& j, const std::string& where) {
    if (!j.is_string()) throw ParseError(where + ": expected a mode label string");
    try {
        return parse_mode(j.get<std::string>());
    } catch (const ModeError& e) {
        throw ParseError(where + ": " + e.what());
    }
}

json matrix_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

Eigen::MatrixXcd matrix_from(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a matrix");
    const auto rows = j.size();
    const auto cols = j[0].size();
    Eigen::MatrixXcd m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (j[r].size() != cols) throw ParseError(where + ": ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) {
            const auto& cell = j[r][c];
            if (!cell.is_array() || cell.size() != 2)
                throw ParseError(where + ": matrix entries are [re, im] pairs");
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                Complex(cell[0].get<double>(), cell[1].get<double>());
        }
    }
    return m;
}

json element_json(const ElementOp& e) {
    json j;
    switch (e.kind) {
        case ElementKind::BeamSplitter:
            j["kind"] = "bs";
            j["a"] = mode_json(e.modes[0]);
            j["b"] = mode_json(e.modes[1]);
            j["t"] = e.param;
            break;
        case ElementKind::HalfWavePlate:
            j["kind"] = "hwp";
            j["h"] = mode_json(e.modes[0]);
            j["v"] = mode_json(e.modes[1]);
            j["plate_angle"] = e.param;
            break;
        case ElementKind::PhaseShift:
            j["kind"] = "phase";
            j["mode"] = mode_json(e.modes[0]);
            j["phi"] = e.param;
            break;
        case ElementKind::PolarizingBS:
        case ElementKind::Hologram: {
            j["kind"] = e.kind == ElementKind::PolarizingBS ? "pbs" : "hologram";
            json rules = json::array();
            for (const PairRule& r : e.pair_rules)
                rules.push_back({{"in", {mode_json(r.pattern[0]), mode_json(r.pattern[1])}},
                                 {"out", {mode_json(r.replacement[0]),
                                          mode_json(r.replacement[1])}}});
            j["rules"] = rules;
            break;
        }
        case ElementKind::Delay: {
            j["kind"] = "delay";
            json targets = json::array();
            for (const DelayTarget& t : e.delay_targets)
                targets.push_back({{"mode", mode_json(t.mode)},
                                   {"tag", t.tag == TimeTag::Th ? "th" : "tv"}});
            j["targets"] = targets;
            break;
        }
        case ElementKind::TimeCoalesce:
            j["kind"] = "coalesce";
            break;
        case ElementKind::DichroicRouter: {
            j["kind"] = "dichroic";
            for (const auto& [band, prefix] : e.band_prefix)
                j[band == Band::Doubled ? "doubled" : "fundamental"] = prefix;
            break;
        }
        case ElementKind::SFGTypeI:
        case ElementKind::SFGTypeII: {
            j["kind"] = e.kind == ElementKind::SFGTypeI ? "sfg1" : "sfg2";
            json rules = json::array();
            for (const SfgRule& r : e.sfg_rules)
                rules.push_back({{"in", {mode_json(r.pattern[0]), mode_json(r.pattern[1])}},
                                 {"out", mode_json(r.replacement)}});
            j["rules"] = rules;
            break;
        }
        case ElementKind::EffectiveMap: {
            j["kind"] = e.label == "postsel" ? "postsel" : "effective";
            json modes = json::array();
            for (const Mode& m : e.modes) modes.push_back(mode_json(m));
            j["modes"] = modes;
            j["matrix"] = matrix_json(e.matrix);
            break;
        }
        case ElementKind::Relabel: {
            j["kind"] = "relabel";
            json moves = json::array();
            const int n = static_cast<int>(e.modes.size());
            for (int c = 0; c < n; ++c)
                for (int r = 0; r < n; ++r)
                    if (e.matrix(r, c) != Complex(0.0) && r != c)
                        moves.push_back({{"from", mode_json(e.modes[c])},
                                         {"to", mode_json(e.modes[r])}});
            j["moves"] = moves;
            break;
        }
    }
    return j;
}

ElementOp element_from(const json& j, std::size_t idx) {
    const std::string where = "elements[" + std::to_string(idx) + "]";
    if (!j.is_object() || !j.contains("kind"))
        throw ParseError(where + ": expected an object with a \"kind\" field");
    const std::string kind = j.at("kind").get<std::string>();
    auto need = [&](const char* key) -> const json& {
        if (!j.contains(key))
            throw ParseError(where + ": missing \"" + key + "\"");
        return j.at(key);
    };
    try {
        if (kind == "bs")
            return beam_splitter(mode_from(need("a"), where), mode_from(need("b"), where),
                                 need("t").get<double>());
        if (kind == "hwp")
            return half_wave_plate(mode_from(need("h"), where), mode_from(need("v"), where),
                                   need("plate_angle").get<double>());
        if (kind == "phase")
            return phase_shift(mode_from(need("mode"), where), need("phi").get<double>());
        if (kind == "pbs" || kind == "hologram") {
            std::vector<PairRule> rules;
            for (const auto& rj : need("rules")) {
                PairRule r;
                r.pattern = {mode_from(rj.at("in")[0], where), mode_from(rj.at("in")[1], where)};
                r.replacement = {mode_from(rj.at("out")[0], where),
                                 mode_from(rj.at("out")[1], where)};
                rules.push_back(std::move(r));
            }
            return kind == "pbs" ? polarizing_bs(std::move(rules))
                                 : hologram(std::move(rules));
        }
        if (kind == "delay") {
            std::vector<DelayTarget> targets;
            for (const auto& tj : need("targets")) {
                DelayTarget t;
                t.mode = mode_from(tj.at("mode"), where);
                const std::string tag = tj.at("tag").get<std::string>();
                if (tag == "th") t.tag = TimeTag::Th;
                else if (tag == "tv") t.tag = TimeTag::Tv;
                else throw ParseError(where + ": delay tag must be th or tv");
                targets.push_back(std::move(t));
            }
            return delay(std::move(targets));
        }
        if (kind == "coalesce") return time_coalesce();
        if (kind == "dichroic") {
            std::map<Band, std::string> prefix;
            if (j.contains("doubled")) prefix[Band::Doubled] = j.at("doubled").get<std::string>();
            if (j.contains("fundamental"))
                prefix[Band::Fundamental] = j.at("fundamental").get<std::string>();
            return dichroic_router(std::move(prefix));
        }
        if (kind == "sfg1" || kind == "sfg2") {
            std::vector<SfgRule> rules;
            for (const auto& rj : need("rules")) {
                SfgRule r;
                r.pattern = {mode_from(rj.at("in")[0], where), mode_from(rj.at("in")[1], where)};
                r.replacement = mode_from(rj.at("out"), where);
                rules.push_back(std::move(r));
            }
            return sfg(kind == "sfg1" ? SfgType::TypeI : SfgType::TypeII, std::move(rules));
        }
        if (kind == "effective" || kind == "postsel") {
            std::vector<Mode> modes;
            for (const auto& mj : need("modes")) modes.push_back(mode_from(mj, where));
            Eigen::MatrixXcd m = matrix_from(need("matrix"), where);
            return kind == "effective" ? effective_map(std::move(modes), std::move(m))
                                       : post_selected_map(std::move(modes), std::move(m));
        }
        if (kind == "relabel") {
            std::vector<std::pair<Mode, Mode>> moves;
            for (const auto& mj : need("moves"))
                moves.emplace_back(mode_from(mj.at("from"), where),
                                   mode_from(mj.at("to"), where));
            return relabel(std::move(moves));
        }
    } catch (const json::exception& err) {
        throw ParseError(where + ": " + err.what());
    }
    throw ParseError(where + ": unknown element kind \"" + kind + "\"");
}

}  // namespace

std::string serialize_circuit(const Circuit& c) {
    json j;
    j["schema_version"] = 1;
    json elems = json::array();
    for (const ElementOp& e : c.elements()) elems.push_back(element_json(e));
    j["elements"] = elems;
    return j.dump(2);
}

Circuit parse_circuit(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& err) {
        throw ParseError(std::string("document: ") + err.what());
    }
    if (!j.is_object() || !j.contains("elements") || !j.at("elements").is_array())
        throw ParseError("document: expected an object with an \"elements\" array");
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != 1)
        throw ParseError("document: unsupported schema_version");
    Circuit c;
    std::size_t idx = 0;
    for (const auto& ej : j.at("elements")) c.push_back(element_from(ej, idx++));
    return c;
}

bool operator==(const Circuit& a, const Circuit& b) {
    return serialize_circuit(a) == serialize_circuit(b);
}

}  // namespace belldisc
