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

#include "belldisc/protocols.hpp"

#include <algorithm>
#include <cmath>

namespace belldisc {

namespace {

constexpr double kPi = 3.14159265358979323846;

const Mode A1 = path_mode("a1");
const Mode B1 = path_mode("b1");
const Mode A2 = path_mode("a2");
const Mode B2 = path_mode("b2");

Mode Q(int photon, Pol pol) { return pol_mode(photon == 1 ? "q1" : "q2", pol); }
Mode O(int photon, Oam oam) { return oam_mode(photon == 1 ? "o1" : "o2", oam); }

// --- input state families -------------------------------------------------

PhotonState pair_state(const Mode& x1, const Mode& x2, const Mode& y1, const Mode& y2,
                       double amp_x, double amp_y) {
    return add(PhotonState::term({x1, x2}, amp_x), PhotonState::term({y1, y2}, amp_y));
}

// Eqs. 1-4 family over two dual-rail path qubits.
PhotonState momentum_bell_like(int index, double theta) {
    const double s = std::sin(theta), c = std::cos(theta);
    switch (index) {
        case 1: return pair_state(A1, A2, B1, B2, s, c);
        case 2: return pair_state(A1, A2, B1, B2, c, -s);
        case 3: return pair_state(A1, B2, B1, A2, s, c);
        case 4: return pair_state(A1, B2, B1, A2, c, -s);
    }
    throw ParameterError("state index must be 1..4");
}

// Same family in the polarization companions.
PhotonState pol_bell_like(int index, double theta) {
    const double s = std::sin(theta), c = std::cos(theta);
    const Mode h1 = Q(1, Pol::H), v1 = Q(1, Pol::V);
    const Mode h2 = Q(2, Pol::H), v2 = Q(2, Pol::V);
    switch (index) {
        case 1: return pair_state(h1, h2, v1, v2, s, c);
        case 2: return pair_state(h1, h2, v1, v2, c, -s);
        case 3: return pair_state(h1, v2, v1, h2, s, c);
        case 4: return pair_state(h1, v2, v1, h2, c, -s);
    }
    throw ParameterError("state index must be 1..4");
}

const double kInvSqrt2 = 0.7071067811865475244;

PhotonState pol_ancilla_pair() {
    return pair_state(Q(1, Pol::H), Q(2, Pol::V), Q(1, Pol::V), Q(2, Pol::H),
                      kInvSqrt2, kInvSqrt2);
}

PhotonState momentum_ancilla_pair() {
    return pair_state(A1, B2, B1, A2, kInvSqrt2, kInvSqrt2);
}

PhotonState oam_ancilla_pair() {
    return pair_state(O(1, Oam::Plus), O(2, Oam::Minus), O(1, Oam::Minus),
                      O(2, Oam::Plus), kInvSqrt2, kInvSqrt2);
}

// --- shared circuit pieces ------------------------------------------------

// Wave plates in paths b1, b2 flip the same-index polarization companion;
// photons in paths a1, a2 pass them by.
ElementOp momentum_cnot() {
    std::vector<PairRule> rules;
    for (int i = 1; i <= 2; ++i) {
        const Mode a = i == 1 ? A1 : A2;
        const Mode b = i == 1 ? B1 : B2;
        rules.push_back({{a, Q(i, Pol::H)}, {a, Q(i, Pol::H)}});
        rules.push_back({{a, Q(i, Pol::V)}, {a, Q(i, Pol::V)}});
        rules.push_back({{b, Q(i, Pol::H)}, {b, Q(i, Pol::V)}});
        rules.push_back({{b, Q(i, Pol::V)}, {b, Q(i, Pol::H)}});
    }
    return polarizing_bs(std::move(rules), "cnot-hwp45");
}

// Path flip conditioned on a vertical same-index polarization companion.
ElementOp polarization_cnot() {
    std::vector<PairRule> rules;
    for (int i = 1; i <= 2; ++i) {
        const Mode a = i == 1 ? A1 : A2;
        const Mode b = i == 1 ? B1 : B2;
        rules.push_back({{Q(i, Pol::H), a}, {Q(i, Pol::H), a}});
        rules.push_back({{Q(i, Pol::H), b}, {Q(i, Pol::H), b}});
        rules.push_back({{Q(i, Pol::V), a}, {Q(i, Pol::V), b}});
        rules.push_back({{Q(i, Pol::V), b}, {Q(i, Pol::V), a}});
    }
    return polarizing_bs(std::move(rules), "cnot-pbs");
}

// Final polarizing splitter: the path operator inherits the companion's
// polarization as a detector label ("a1" + H -> "a1H").
ElementOp detection_pbs() {
    std::vector<PairRule> rules;
    for (int i = 1; i <= 2; ++i) {
        for (const Mode& p : {i == 1 ? A1 : A2, i == 1 ? B1 : B2}) {
            for (Pol pol : {Pol::H, Pol::V}) {
                const Mode q = Q(i, pol);
                rules.push_back({{p, q}, {path_mode(p.path + (pol == Pol::H ? "H" : "V")), q}});
            }
        }
    }
    return polarizing_bs(std::move(rules), "detection-pbs");
}

// The printed split/rotate/merge stage: h -> cos t h + sin t v,
// v -> cos t h - sin t v, written with the discarded merge arm already
// compensated.
ElementOp split_merge_stage(const Mode& h, const Mode& v, double theta) {
    Eigen::MatrixXcd m(2, 2);
    m << std::cos(theta), std::cos(theta), std::sin(theta), -std::sin(theta);
    return post_selected_map({h, v}, std::move(m));
}

DetectorSpec pbs_detector_bank() {
    DetectorSpec spec;
    for (const char* p : {"a1H", "a1V", "b1H", "b1V", "a2H", "a2V", "b2H", "b2V"})
        spec.detectors.push_back(DetectorPattern{p, p, std::nullopt, std::nullopt,
                                                 std::nullopt});
    spec.ignore.push_back(DetectorPattern{"", "q1", std::nullopt, std::nullopt, std::nullopt});
    spec.ignore.push_back(DetectorPattern{"", "q2", std::nullopt, std::nullopt, std::nullopt});
    return spec;
}

// --- per-protocol wiring ----------------------------------------------------

void wire_hyper_momentum(ProtocolInstance& inst, double theta) {
    for (int i = 1; i <= 4; ++i)
        inst.inputs.emplace_back("Theta" + std::to_string(i),
                                 tensor(momentum_bell_like(i, theta), pol_ancilla_pair()));
    inst.circuit.push_back(momentum_cnot());
    inst.circuit.push_back(beam_splitter(A1, B1, 0.5));
    const double c = std::cos(theta);
    inst.circuit.push_back(beam_splitter(A2, B2, c * c));
    inst.fixture_stage = inst.circuit.size();
    inst.circuit.push_back(detection_pbs());
    inst.detectors = pbs_detector_bank();
}

void wire_hyper_polarization(ProtocolInstance& inst, double theta) {
    for (int i = 1; i <= 4; ++i)
        inst.inputs.emplace_back("Xi" + std::to_string(i),
                                 tensor(pol_bell_like(i, theta), momentum_ancilla_pair()));
    inst.circuit.push_back(polarization_cnot());
    inst.circuit.push_back(half_wave_plate(Q(2, Pol::H), Q(2, Pol::V), theta / 2.0));
    inst.circuit.push_back(split_merge_stage(Q(1, Pol::H), Q(1, Pol::V), theta));
    inst.fixture_stage = inst.circuit.size();
    inst.circuit.push_back(detection_pbs());
    inst.detectors = pbs_detector_bank();
}

void wire_hyper_oam(ProtocolInstance& inst, double theta) {
    for (int i = 1; i <= 4; ++i)
        inst.inputs.emplace_back("Pi" + std::to_string(i),
                                 tensor(pol_bell_like(i, theta), oam_ancilla_pair()));

    std::vector<PairRule> holo;
    const Mode g1 = oam_mode("g1", Oam::Zero), g2 = oam_mode("g2", Oam::Zero);
    for (int i = 1; i <= 2; ++i) {
        const Mode g = i == 1 ? g1 : g2;
        const std::string up = i == 1 ? "u1" : "u2";
        const std::string dn = i == 1 ? "d1" : "d2";
        for (Pol pol : {Pol::H, Pol::V}) {
            holo.push_back({{Q(i, pol), O(i, Oam::Plus)}, {pol_mode(up, pol), g}});
            holo.push_back({{Q(i, pol), O(i, Oam::Minus)}, {pol_mode(dn, pol), g}});
        }
    }
    inst.circuit.push_back(hologram(std::move(holo)));

    // Polarizing reroute between the arms: vertical light of the first
    // photon and horizontal light of the second photon swap arms.
    inst.circuit.push_back(relabel({{pol_mode("u1", Pol::V), pol_mode("d1", Pol::V)},
                                    {pol_mode("d1", Pol::V), pol_mode("u1", Pol::V)}},
                                   "pbs-arm1"));
    inst.circuit.push_back(relabel({{pol_mode("u2", Pol::H), pol_mode("d2", Pol::H)},
                                    {pol_mode("d2", Pol::H), pol_mode("u2", Pol::H)}},
                                   "pbs-arm2"));

    for (const char* arm : {"u1", "d1"})
        inst.circuit.push_back(
            split_merge_stage(pol_mode(arm, Pol::H), pol_mode(arm, Pol::V), theta));
    for (const char* arm : {"u2", "d2"})
        inst.circuit.push_back(half_wave_plate(pol_mode(arm, Pol::H), pol_mode(arm, Pol::V),
                                               kPi / 4.0 - theta / 2.0));
    for (const char* arm : {"u2", "d2"})
        inst.circuit.push_back(
            half_wave_plate(pol_mode(arm, Pol::H), pol_mode(arm, Pol::V), 0.0));
    inst.fixture_stage = inst.circuit.size();

    for (const char* arm : {"u1", "d1", "u2", "d2"})
        add_pol_detectors(inst.detectors, arm, std::string(arm) + "H",
                          std::string(arm) + "V");
    inst.detectors.ignore.push_back(
        DetectorPattern{"", "g1", std::nullopt, std::nullopt, std::nullopt});
    inst.detectors.ignore.push_back(
        DetectorPattern{"", "g2", std::nullopt, std::nullopt, std::nullopt});
}

PhotonState timebin_input(int index, double theta) {
    const double s = std::sin(theta), c = std::cos(theta);
    const Mode h1 = pol_mode("1", Pol::H), v1 = pol_mode("1", Pol::V);
    const Mode h2 = pol_mode("2", Pol::H), v2 = pol_mode("2", Pol::V);
    switch (index) {
        case 1: return pair_state(h1, v2, v1, h2, s, c);
        case 2: return pair_state(h1, v2, v1, h2, c, -s);
        case 3: return pair_state(h1, h2, v1, v2, s, c);
        case 4: return pair_state(h1, h2, v1, v2, c, -s);
    }
    throw ParameterError("state index must be 1..4");
}

void wire_timebin(ProtocolInstance& inst, double theta) {
    for (int i = 1; i <= 4; ++i)
        inst.inputs.emplace_back("psi" + std::to_string(i), timebin_input(i, theta));

    const Mode h1 = pol_mode("1", Pol::H), v1 = pol_mode("1", Pol::V);
    const Mode h2 = pol_mode("2", Pol::H), v2 = pol_mode("2", Pol::V);
    inst.circuit.push_back(beam_splitter(h1, h2, 0.5));
    const double c = std::cos(theta);
    // Vertical-arm transmission recovered by fit_timebin_transmission.
    inst.circuit.push_back(beam_splitter(v1, v2, c * c));
    inst.circuit.push_back(delay({{h1, TimeTag::Th},
                                  {h2, TimeTag::Th},
                                  {v1, TimeTag::Tv},
                                  {v2, TimeTag::Tv}}));
    for (const char* p : {"1", "2"})
        inst.circuit.push_back(half_wave_plate(pol_mode(p, Pol::H).with_tag(TimeTag::Th),
                                               pol_mode(p, Pol::V).with_tag(TimeTag::Th),
                                               theta / 2.0));
    for (const char* p : {"1", "2"})
        inst.circuit.push_back(half_wave_plate(pol_mode(p, Pol::H).with_tag(TimeTag::Tv),
                                               pol_mode(p, Pol::V).with_tag(TimeTag::Tv),
                                               kPi / 8.0));
    inst.circuit.push_back(time_coalesce());
    inst.fixture_stage = inst.circuit.size();

    add_pol_detectors(inst.detectors, "1", "Ah1", "Av1");
    add_pol_detectors(inst.detectors, "2", "Bh2", "Bv2");
    inst.detectors.resolve_arrival = true;
}

PhotonState gamma_input(int index, double theta1, double theta2, int pairs) {
    const double s1 = std::sin(theta1), c1 = std::cos(theta1);
    const double s2 = std::sin(theta2), c2 = std::cos(theta2);
    auto P = [](int k) { return path_mode(std::to_string(k)); };
    PhotonState sys;
    switch (index) {
        case 1: sys = pair_state(P(1), P(4), P(2), P(3), s2, c2); break;
        case 2: sys = pair_state(P(1), P(4), P(2), P(3), c2, -s2); break;
        case 3: sys = pair_state(P(1), P(3), P(2), P(4), s1, c1); break;
        case 4: sys = pair_state(P(1), P(3), P(2), P(4), c1, -s1); break;
        default: throw ParameterError("state index must be 1..4");
    }
    PhotonState anc = pair_state(P(5), P(7), P(6), P(8), s1, c1);
    PhotonState state = tensor(sys, anc);
    if (pairs == 2) {
        PhotonState extra = add(
            PhotonState::term({P(9), P(11), P(13), P(15)}, s1),
            PhotonState::term({P(10), P(12), P(14), P(16)}, c1));
        state = tensor(state, extra);
    }
    return state;
}

void wire_ancilla(ProtocolInstance& inst, double theta1, double theta2, int pairs) {
    if (pairs != 1 && pairs != 2)
        throw ParameterError("ancilla pair count must be 1 or 2");
    for (int i = 1; i <= 4; ++i)
        inst.inputs.emplace_back("Gamma" + std::to_string(i),
                                 gamma_input(i, theta1, theta2, pairs));

    auto P = [](int k) { return path_mode(std::to_string(k)); };
    auto bs_layer = [&](std::vector<std::pair<int, int>> pairs_list) {
        for (auto [i, j] : pairs_list)
            inst.circuit.push_back(beam_splitter(P(i), P(j), 0.5));
    };
    auto phase_layer = [&](int n_modes, double odd, double even) {
        for (int m = 1; m <= n_modes; ++m)
            inst.circuit.push_back(phase_shift(P(m), m % 2 == 1 ? odd : even));
    };

    bs_layer({{1, 3}, {2, 4}, {5, 7}, {6, 8}});
    phase_layer(8, kPi / 4.0, theta2);
    bs_layer({{1, 5}, {2, 6}, {3, 7}, {4, 8}});
    if (pairs == 2) {
        bs_layer({{9, 11}, {10, 12}, {13, 15}, {14, 16}});
        phase_layer(16, kPi / 4.0, theta2);
        bs_layer({{1, 9}, {2, 10}, {3, 11}, {4, 12}, {5, 13}, {6, 14}, {7, 15}, {8, 16}});
    }
    inst.fixture_stage = inst.circuit.size();

    const int n_modes = pairs == 2 ? 16 : 8;
    for (int m = 1; m <= n_modes; ++m) {
        const std::string p = std::to_string(m);
        inst.detectors.detectors.push_back(
            DetectorPattern{p, p, std::nullopt, std::nullopt, std::nullopt});
    }
}

void wire_sfg(ProtocolInstance& inst, double theta1, double theta2) {
    const double s1 = std::sin(theta1), c1 = std::cos(theta1);
    const double s2 = std::sin(theta2), c2 = std::cos(theta2);
    const Mode h1 = pol_mode("1", Pol::H), v1 = pol_mode("1", Pol::V);
    const Mode h2 = pol_mode("2", Pol::H), v2 = pol_mode("2", Pol::V);
    inst.inputs.emplace_back("psi1", pair_state(h1, h2, v1, v2, s1, c1));
    inst.inputs.emplace_back("psi2", pair_state(h1, h2, v1, v2, c1, -s1));
    inst.inputs.emplace_back("psi3", pair_state(h1, v2, v1, h2, s2, c2));
    inst.inputs.emplace_back("psi4", pair_state(h1, v2, v1, h2, c2, -s2));

    auto doubled = [](const char* path, Pol pol) {
        Mode m = pol_mode(path, pol);
        m.band = Band::Doubled;
        return m;
    };
    inst.circuit.push_back(sfg(SfgType::TypeI, {{{h1, h2}, doubled("3", Pol::V)},
                                                {{v1, v2}, doubled("3", Pol::H)}}));
    inst.circuit.push_back(dichroic_router({{Band::Doubled, "a"}, {Band::Fundamental, "b"}}));
    inst.circuit.push_back(
        half_wave_plate(doubled("a3", Pol::H), doubled("a3", Pol::V), theta1 / 2.0));
    inst.circuit.push_back(sfg(
        SfgType::TypeII, {{{pol_mode("b1", Pol::V), pol_mode("b2", Pol::H)},
                           doubled("b3", Pol::V)},
                          {{pol_mode("b1", Pol::H), pol_mode("b2", Pol::V)},
                           doubled("b3", Pol::H)}}));
    inst.circuit.push_back(half_wave_plate(doubled("b3", Pol::H), doubled("b3", Pol::V),
                                           kPi / 4.0 - theta2 / 2.0));
    inst.fixture_stage = inst.circuit.size();

    add_pol_detectors(inst.detectors, "a3", "a3H", "a3V");
    add_pol_detectors(inst.detectors, "b3", "b3H", "b3V");
}

void wire_baseline(ProtocolInstance& inst, double theta) {
    for (int i = 1; i <= 4; ++i)
        inst.inputs.emplace_back("psi" + std::to_string(i), momentum_bell_like(i, theta));
    inst.circuit.push_back(beam_splitter(A1, A2, 0.5));
    inst.circuit.push_back(beam_splitter(B1, B2, 0.5));
    inst.fixture_stage = inst.circuit.size();
    for (const char* p : {"a1", "b1", "a2", "b2"})
        inst.detectors.detectors.push_back(
            DetectorPattern{p, p, std::nullopt, std::nullopt, std::nullopt});
}

void check_angle(double t, const char* name) {
    if (!(t > 0.0 && t < kPi / 2.0))
        throw ParameterError(std::string(name) + " must lie in (0, pi/2)");
}

}  // namespace

std::string protocol_name(ProtocolId id) {
    switch (id) {
        case ProtocolId::HyperMomentum: return "hyper_momentum";
        case ProtocolId::HyperPolarization: return "hyper_polarization";
        case ProtocolId::HyperOam: return "hyper_oam";
        case ProtocolId::Timebin: return "timebin";
        case ProtocolId::Ancilla: return "ancilla";
        case ProtocolId::Sfg: return "sfg";
        case ProtocolId::Baseline: return "baseline";
    }
    throw ParameterError("unknown protocol id");
}

ProtocolId protocol_from_name(const std::string& name) {
    for (ProtocolId id :
         {ProtocolId::HyperMomentum, ProtocolId::HyperPolarization, ProtocolId::HyperOam,
          ProtocolId::Timebin, ProtocolId::Ancilla, ProtocolId::Sfg, ProtocolId::Baseline})
        if (protocol_name(id) == name) return id;
    throw ParameterError("unknown protocol: " + name);
}

ProtocolInstance build(ProtocolId id, const ProtocolParams& params, RunMode mode) {
    ProtocolInstance inst;
    inst.id = id;
    inst.mode = mode;
    inst.params = params;
    switch (id) {
        case ProtocolId::HyperMomentum:
            check_angle(params.theta1, "theta");
            wire_hyper_momentum(inst, params.theta1);
            break;
        case ProtocolId::HyperPolarization:
            check_angle(params.theta1, "theta");
            wire_hyper_polarization(inst, params.theta1);
            break;
        case ProtocolId::HyperOam:
            check_angle(params.theta1, "theta");
            wire_hyper_oam(inst, params.theta1);
            break;
        case ProtocolId::Timebin:
            check_angle(params.theta1, "theta");
            wire_timebin(inst, params.theta1);
            break;
        case ProtocolId::Ancilla:
            check_angle(params.theta1, "theta1");
            check_angle(params.theta2, "theta2");
            wire_ancilla(inst, params.theta1, params.theta2, params.pairs);
            break;
        case ProtocolId::Sfg:
            check_angle(params.theta1, "theta1");
            check_angle(params.theta2, "theta2");
            wire_sfg(inst, params.theta1, params.theta2);
            break;
        case ProtocolId::Baseline:
            check_angle(params.theta1, "theta");
            wire_baseline(inst, params.theta1);
            break;
    }
    if (mode == RunMode::Literal && id != ProtocolId::HyperMomentum &&
        id != ProtocolId::HyperPolarization && id != ProtocolId::HyperOam &&
        id != ProtocolId::Timebin)
        throw ParameterError("literal mode is only available for the protocols with "
                             "printed expansions");
    return inst;
}

ProtocolInstance ancilla_instance(double theta1, double theta2, int pairs) {
    ProtocolParams p;
    p.theta1 = theta1;
    p.theta2 = theta2;
    p.pairs = pairs;
    return build(ProtocolId::Ancilla, p);
}

ProtocolRun run_protocol(const ProtocolInstance& instance) {
    ProtocolRun run;
    for (std::size_t i = 0; i < instance.inputs.size(); ++i) {
        const auto& [id, input] = instance.inputs[i];
        PhotonState out;
        double discarded = 0.0;
        if (instance.mode == RunMode::Literal) {
            PhotonState printed = literal_output(
                instance.id, static_cast<int>(i) + 1, instance.params);
            // Detector relabeling past the fixture stage still applies.
            Circuit tail;
            for (std::size_t k = instance.fixture_stage; k < instance.circuit.size(); ++k)
                tail.push_back(instance.circuit.elements()[k]);
            ApplyResult res = tail.apply(printed);
            out = std::move(res.state);
            discarded = 1.0 - squared_norm(out);
        } else {
            ApplyResult res = instance.circuit.apply(input);
            out = std::move(res.state);
            discarded = res.discarded_probability;
        }
        run.outputs.emplace_back(id, std::move(out));
        run.discarded.push_back(discarded);
    }
    return run;
}

DiscriminationReport analyze_protocol(const ProtocolInstance& instance,
                                      const std::vector<double>& priors) {
    ProtocolRun run = run_protocol(instance);
    const std::vector<double> pr =
        priors.empty() ? uniform_priors(run.outputs.size()) : priors;
    return analyze(run.outputs, instance.detectors, pr, run.discarded);
}

// --- printed expansions -----------------------------------------------------

namespace {

struct Term {
    std::vector<Mode> modes;
    double amp;
};

PhotonState from_terms(const std::vector<Term>& terms) {
    PhotonState s;
    for (const Term& t : terms) s.accumulate(Monomial(t.modes), t.amp);
    s.prune();
    return s;
}

PhotonState literal_hyper_momentum(int index, double theta) {
    const double s2t = std::sin(2.0 * theta), c2t = std::cos(2.0 * theta);
    const Mode h1 = Q(1, Pol::H), v1 = Q(1, Pol::V);
    const Mode h2 = Q(2, Pol::H), v2 = Q(2, Pol::V);
    auto sym = [&](const Mode& p, const Mode& q, double amp) {
        return std::vector<Term>{{{p, q, h1, v2}, amp}, {{p, q, h2, v1}, amp}};
    };
    auto par = [&](const Mode& p, const Mode& q, Pol pol, double amp) {
        const Mode x1 = Q(1, pol), x2 = Q(2, pol);
        return std::vector<Term>{{{p, q, x1, x2}, amp}};
    };
    std::vector<Term> terms;
    auto append = [&](std::vector<Term> t) {
        terms.insert(terms.end(), t.begin(), t.end());
    };
    switch (index) {
        case 1:
            append(sym(A1, A2, 0.5 * s2t));
            append(sym(A1, B2, -0.5 * c2t));
            append(sym(B1, B2, 0.5));
            break;
        case 2:
            append(sym(A1, A2, 0.5 * c2t));
            append(sym(A1, B2, 0.5 * s2t));
            append(sym(A2, B1, 0.5));
            break;
        case 3:
            append(par(A1, A2, Pol::H, 0.5));
            append(par(A1, A2, Pol::V, 0.5));
            append(par(A2, B1, Pol::H, -0.5 * c2t));
            append(par(A2, B1, Pol::V, -0.5 * c2t));
            append(par(B1, B2, Pol::H, -0.5 * s2t));
            append(par(B1, B2, Pol::V, -0.5 * s2t));
            break;
        case 4:
            append(par(A1, B2, Pol::H, -0.5));
            append(par(A1, B2, Pol::V, -0.5));
            append(par(A2, B1, Pol::H, 0.5 * s2t));
            append(par(A2, B1, Pol::V, 0.5 * s2t));
            append(par(B1, B2, Pol::H, -0.5 * c2t));
            append(par(B1, B2, Pol::V, -0.5 * c2t));
            break;
        default:
            throw ParameterError("state index must be 1..4");
    }
    return from_terms(terms);
}

PhotonState literal_hyper_polarization(int index, double theta) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const double c2t = std::cos(2.0 * theta);
    const double s3t = std::sin(3.0 * theta), c3t = std::cos(3.0 * theta);
    const double r2 = kInvSqrt2, r8 = 0.5 * kInvSqrt2;
    const Mode h1 = Q(1, Pol::H), v1 = Q(1, Pol::V);
    const Mode h2 = Q(2, Pol::H), v2 = Q(2, Pol::V);

    // Path-operator pairs the four-term families ride on.
    const std::array<std::pair<Mode, Mode>, 2> anti = {{{A1, B2}, {B1, A2}}};
    const std::array<std::pair<Mode, Mode>, 2> same = {{{A1, A2}, {B1, B2}}};

    std::vector<Term> terms;
    auto fam = [&](const std::array<std::pair<Mode, Mode>, 2>& paths, const Mode& qa,
                   const Mode& qb, double amp) {
        for (const auto& [p, q] : paths) terms.push_back({{p, q, qa, qb}, amp});
    };
    switch (index) {
        case 1:
            fam(anti, h1, h2, st * r2 * (1.0 + c2t));
            fam(anti, h1, v2, -(ct + c3t) * r8);
            fam(anti, v1, v2, st * r2);
            break;
        case 2:
            fam(anti, h1, h2, (ct + c3t) * r8);
            fam(anti, h1, v2, st * r2 * (1.0 + c2t));
            fam(anti, v1, h2, st * r2);
            break;
        case 3:
            fam(same, h1, h2, ct * r2);
            fam(same, v1, h2, (st - s3t) * r8);
            fam(same, v1, v2, -(ct - c3t) * r8);
            break;
        case 4:
            fam(same, h1, v2, -ct * r2);
            fam(same, v1, h2, (ct - c3t) * r8);
            fam(same, v1, v2, (st - s3t) * r8);
            break;
        default:
            throw ParameterError("state index must be 1..4");
    }
    return from_terms(terms);
}

PhotonState literal_hyper_oam(int index, double theta) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const double c2t = std::cos(2.0 * theta);
    const double s3t = std::sin(3.0 * theta), c3t = std::cos(3.0 * theta);
    const double r2 = kInvSqrt2, r8 = 0.5 * kInvSqrt2;
    const Mode g1 = oam_mode("g1", Oam::Zero), g2 = oam_mode("g2", Oam::Zero);

    // Arm pairs: same-arm (u1,u2)/(d1,d2) for the first two states,
    // anti-arm (u1,d2)/(d1,u2) for the last two.
    using Arms = std::array<std::pair<std::string, std::string>, 2>;
    const Arms same = {{{"u1", "u2"}, {"d1", "d2"}}};
    const Arms anti = {{{"u1", "d2"}, {"d1", "u2"}}};

    std::vector<Term> terms;
    auto fam = [&](const Arms& arms, Pol p1, Pol p2, double amp) {
        for (const auto& [arm1, arm2] : arms)
            terms.push_back({{pol_mode(arm1, p1), pol_mode(arm2, p2), g1, g2}, amp});
    };
    switch (index) {
        case 1:
            fam(same, Pol::H, Pol::H, ct * r2);
            fam(same, Pol::V, Pol::H, (st - s3t) * r8);
            fam(same, Pol::V, Pol::V, (-ct + c3t) * r8);
            break;
        case 2:
            fam(same, Pol::H, Pol::V, -ct * r2);
            fam(same, Pol::V, Pol::H, (ct - c3t) * r8);
            fam(same, Pol::V, Pol::V, (st - s3t) * r8);
            break;
        case 3:
            fam(anti, Pol::H, Pol::H, st * r2 * (1.0 + c2t));
            fam(anti, Pol::H, Pol::V, -(ct + c3t) * r8);
            fam(anti, Pol::V, Pol::V, st * r2);
            break;
        case 4:
            fam(anti, Pol::H, Pol::H, (ct + c3t) * r8);
            fam(anti, Pol::H, Pol::V, (st + s3t) * r8);
            fam(anti, Pol::V, Pol::H, st * r2);
            break;
        default:
            throw ParameterError("state index must be 1..4");
    }
    return from_terms(terms);
}

PhotonState literal_timebin(int index, double theta) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const double c2t = std::cos(2.0 * theta);
    auto m = [&](const char* path, Pol pol, TimeTag tag) {
        return pol_mode(path, pol).with_tag(tag);
    };
    std::vector<Term> terms;
    switch (index) {
        case 1:
            terms = {
                {{m("1", Pol::H, TimeTag::Th), m("1", Pol::H, TimeTag::Tv)}, 0.5 * ct},
                {{m("1", Pol::H, TimeTag::Th), m("1", Pol::V, TimeTag::Tv)}, -0.5 * ct},
                {{m("1", Pol::V, TimeTag::Th), m("1", Pol::H, TimeTag::Tv)}, 0.5 * st},
                {{m("1", Pol::V, TimeTag::Th), m("1", Pol::V, TimeTag::Tv)}, -0.5 * st},
                {{m("2", Pol::H, TimeTag::Th), m("1", Pol::H, TimeTag::Tv)}, -0.5 * ct * c2t},
                {{m("2", Pol::H, TimeTag::Th), m("1", Pol::V, TimeTag::Tv)}, 0.5 * ct * c2t},
                {{m("2", Pol::V, TimeTag::Th), m("1", Pol::H, TimeTag::Tv)}, -0.5 * st * c2t},
                {{m("2", Pol::V, TimeTag::Th), m("1", Pol::V, TimeTag::Tv)}, 0.5 * st * c2t},
                {{m("2", Pol::H, TimeTag::Th), m("2", Pol::H, TimeTag::Tv)}, -ct * ct * st},
                {{m("2", Pol::H, TimeTag::Th), m("2", Pol::V, TimeTag::Tv)}, ct * ct * st},
                {{m("2", Pol::V, TimeTag::Th), m("2", Pol::H, TimeTag::Tv)}, -st * st * ct},
                {{m("2", Pol::V, TimeTag::Th), m("2", Pol::V, TimeTag::Tv)}, st * st * ct},
            };
            break;
        case 2:
            terms = {
                {{m("1", Pol::H, TimeTag::Th), m("2", Pol::H, TimeTag::Tv)}, -0.5 * ct},
                {{m("1", Pol::H, TimeTag::Th), m("2", Pol::V, TimeTag::Tv)}, -0.5 * ct},
                {{m("1", Pol::V, TimeTag::Th), m("2", Pol::H, TimeTag::Tv)}, 0.5 * st},
                {{m("1", Pol::V, TimeTag::Th), m("2", Pol::V, TimeTag::Tv)}, -0.5 * st},
                {{m("2", Pol::H, TimeTag::Th), m("2", Pol::H, TimeTag::Tv)}, 0.5 * ct * c2t},
                {{m("2", Pol::H, TimeTag::Th), m("2", Pol::V, TimeTag::Tv)}, -0.5 * ct * c2t},
                {{m("2", Pol::V, TimeTag::Th), m("2", Pol::H, TimeTag::Tv)}, 0.5 * st * c2t},
                {{m("2", Pol::V, TimeTag::Th), m("2", Pol::V, TimeTag::Tv)}, -0.5 * st * c2t},
                {{m("2", Pol::H, TimeTag::Th), m("1", Pol::H, TimeTag::Tv)}, -ct * ct * st},
                {{m("2", Pol::H, TimeTag::Th), m("1", Pol::V, TimeTag::Tv)}, ct * ct * st},
                {{m("2", Pol::V, TimeTag::Th), m("1", Pol::H, TimeTag::Tv)}, -st * st * ct},
                {{m("2", Pol::V, TimeTag::Th), m("1", Pol::V, TimeTag::Tv)}, st * st * ct},
            };
            break;
        case 3: {
            auto u = [&](const char* path, Pol pol) { return pol_mode(path, pol); };
            const double cross = st * st * ct - ct * ct * st;
            terms = {
                {{u("1", Pol::H), u("1", Pol::H)}, st * ct * ct},
                {{u("2", Pol::H), u("2", Pol::H)}, -st * ct * ct},
                {{u("1", Pol::V), u("1", Pol::V)}, 0.5 * st},
                {{u("2", Pol::V), u("2", Pol::V)}, -0.5 * st},
                {{u("1", Pol::H), u("1", Pol::V)}, cross},
                {{u("2", Pol::H), u("2", Pol::V)}, -cross},
                {{u("1", Pol::H), u("2", Pol::H)}, -0.5 * ct * c2t},
                {{u("1", Pol::H), u("2", Pol::V)}, 0.5 * ct * c2t},
                {{u("1", Pol::V), u("2", Pol::H)}, 0.5 * ct * c2t},
                {{u("1", Pol::V), u("2", Pol::V)}, -0.5 * ct * c2t},
            };
            break;
        }
        case 4: {
            auto u = [&](const char* path, Pol pol) { return pol_mode(path, pol); };
            const double cross = st * st * ct + ct * ct * st;
            terms = {
                {{u("1", Pol::H), u("1", Pol::H)}, 0.5 * ct * c2t},
                {{u("2", Pol::H), u("2", Pol::H)}, -0.5 * ct * c2t},
                {{u("1", Pol::H), u("1", Pol::V)}, cross},
                {{u("2", Pol::H), u("2", Pol::V)}, -cross},
                {{u("1", Pol::H), u("2", Pol::H)}, 0.5 * st * c2t},
                {{u("1", Pol::H), u("2", Pol::V)}, -0.5 * st * c2t},
                {{u("1", Pol::V), u("2", Pol::H)}, -0.5 * st * c2t},
                {{u("1", Pol::V), u("2", Pol::V)}, 0.5 * st * c2t},
            };
            break;
        }
        default:
            throw ParameterError("state index must be 1..4");
    }
    return from_terms(terms);
}

}  // namespace

PhotonState literal_output(ProtocolId id, int state_index, const ProtocolParams& params) {
    switch (id) {
        case ProtocolId::HyperMomentum:
            return literal_hyper_momentum(state_index, params.theta1);
        case ProtocolId::HyperPolarization:
            return literal_hyper_polarization(state_index, params.theta1);
        case ProtocolId::HyperOam:
            return literal_hyper_oam(state_index, params.theta1);
        case ProtocolId::Timebin:
            return literal_timebin(state_index, params.theta1);
        default:
            throw ParameterError("no printed expansion for protocol " + protocol_name(id));
    }
}

TimebinFit fit_timebin_transmission(const std::vector<double>& thetas) {
    TimebinFit fit;
    fit.thetas = thetas;
    for (double theta : thetas) {
        ProtocolParams params;
        params.theta1 = theta;
        // Residual of circuit output against the printed expansions as a
        // function of the vertical-arm transmission. Compared per monomial
        // on amplitude magnitudes: the printed second state carries sign
        // typos that no linear circuit can reproduce alongside the other
        // three, while every detection probability depends on magnitudes
        // only.
        auto residual = [&](double t) {
            ProtocolInstance inst = build(ProtocolId::Timebin, params);
            // Element 1 is the vertical-arm splitter.
            Circuit patched;
            for (std::size_t k = 0; k < inst.circuit.size(); ++k) {
                if (k == 1) {
                    const auto& orig = inst.circuit.elements()[k];
                    patched.push_back(beam_splitter(orig.modes[0], orig.modes[1], t));
                } else {
                    patched.push_back(inst.circuit.elements()[k]);
                }
            }
            double r = 0.0;
            for (int i = 1; i <= 4; ++i) {
                PhotonState out = patched.apply(inst.inputs[i - 1].second).state;
                PhotonState expect = literal_output(ProtocolId::Timebin, i, params);
                for (const auto& [mono, amp] : expect.terms()) {
                    const double d = std::abs(out.amplitude(mono)) - std::abs(amp);
                    r += d * d;
                }
                for (const auto& [mono, amp] : out.terms()) {
                    if (expect.terms().find(mono) == expect.terms().end())
                        r += std::norm(amp);
                }
            }
            return r;
        };
        // Golden-section line search over [0, 1].
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = 0.0, b = 1.0;
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = residual(x1), f2 = residual(x2);
        for (int it = 0; it < 80; ++it) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = residual(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = residual(x2);
            }
        }
        const double t = 0.5 * (a + b);
        fit.transmissions.push_back(t);
        fit.max_residual = std::max(fit.max_residual, std::sqrt(residual(t)));
    }
    fit.verified = fit.max_residual <= 1e-6;
    return fit;
}

std::vector<double> theta_grid(int points) {
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(points));
    for (int k = 1; k <= points; ++k)
        grid.push_back(kPi / 2.0 * static_cast<double>(k) /
                       static_cast<double>(points + 1));
    return grid;
}

}  // namespace belldisc
