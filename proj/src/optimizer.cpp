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

#include "belldisc/optimizer.hpp"

#include "belldisc/elements.hpp"
#include "belldisc/detection.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <random>
#include <thread>

namespace belldisc {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<std::pair<int, int>> mode_pairs(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    return pairs;
}

}  // namespace

Eigen::MatrixXcd realize(const ReckNetwork& net) {
    if (net.params.size() != ReckNetwork::param_count(net.n_modes))
        throw ParameterError("network parameter vector length does not match n_modes");
    const int n = net.n_modes;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
    const auto pairs = mode_pairs(n);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [i, j] = pairs[k];
        const double trans = std::clamp(net.params[2 * k], 0.0, 1.0);
        const double ph = net.params[2 * k + 1];
        // Phase plate on the first input followed by the standard splitter
        // (second input carries the minus sign).
        const double ct = std::sqrt(trans);
        const double st = std::sqrt(1.0 - trans);
        Eigen::MatrixXcd t = Eigen::MatrixXcd::Identity(n, n);
        const Complex e = std::polar(1.0, ph);
        t(i, i) = e * ct;
        t(i, j) = st;
        t(j, i) = e * st;
        t(j, j) = -ct;
        u = t * u;
    }
    Eigen::VectorXcd d(n);
    for (int m = 0; m < n; ++m)
        d(m) = std::polar(1.0, net.params[2 * pairs.size() + static_cast<std::size_t>(m)]);
    return d.asDiagonal() * u;
}

int thread_budget(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("BELLDISC_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

struct EventTable {
    // Rows: per event; columns: per input state.
    std::vector<std::array<double, 8>> probs;
    std::size_t n_states = 0;
};

// Optimizer objective: fast dense path for two-photon states over a small
// mode list, generic Fock-algebra path otherwise. Detection is
// number-resolving per mode.
class Objective {
  public:
    Objective(const std::vector<std::pair<std::string, PhotonState>>& inputs,
              const std::vector<Mode>& modes, std::vector<double> priors)
        : priors_(std::move(priors)), modes_(modes), n_(static_cast<int>(modes.size())) {
        two_photon_ = true;
        for (const auto& [id, st] : inputs)
            for (const auto& [mono, amp] : st.terms())
                if (mono.photons() != 2) two_photon_ = false;
        if (two_photon_) {
            for (const auto& [id, st] : inputs) {
                StateRep rep;
                for (const auto& [mono, amp] : st.terms()) {
                    MonoRep m;
                    m.u = mode_index(modes, mono.modes()[0]);
                    m.v = mode_index(modes, mono.modes()[1]);
                    m.amp = amp;
                    rep.monos.push_back(m);
                }
                states_.push_back(std::move(rep));
            }
        } else {
            generic_inputs_ = inputs;
            for (const Mode& m : modes)
                generic_detectors_.detectors.push_back(DetectorPattern{
                    m.str(), m.path, m.pol == Pol::None ? std::nullopt
                                                        : std::optional<Pol>(m.pol),
                    std::nullopt, std::nullopt});
        }
        if (priors_.size() != inputs.size())
            throw InputError("one prior per optimizer input required");
    }

    std::size_t n_states() const {
        return two_photon_ ? states_.size() : generic_inputs_.size();
    }
    int n_modes() const { return n_; }

    EventTable event_table(const Eigen::MatrixXcd& u) const {
        return two_photon_ ? dense_table(u) : generic_table(u);
    }

    double success(const EventTable& table) const {
        double acc = 0.0;
        for (const auto& row : table.probs) {
            for (std::size_t i = 0; i < table.n_states; ++i) {
                if (row[i] <= kTauPositive) continue;
                bool exclusive = true;
                for (std::size_t j = 0; j < table.n_states; ++j) {
                    if (j != i && row[j] >= kTauZero) {
                        exclusive = false;
                        break;
                    }
                }
                if (exclusive) acc += priors_[i] * row[i];
                break;
            }
        }
        return acc;
    }

    /// Smooth surrogate: every event credits state i with its probability,
    /// discounted by how strongly other states populate the same event.
    double guide(const EventTable& table, double eps) const {
        double acc = 0.0;
        for (const auto& row : table.probs) {
            for (std::size_t i = 0; i < table.n_states; ++i) {
                double others = 0.0;
                for (std::size_t j = 0; j < table.n_states; ++j)
                    if (j != i) others = std::max(others, row[j]);
                acc += priors_[i] * row[i] / (1.0 + others / eps);
            }
        }
        return acc;
    }

    int event_index(int p, int q) const {  // p <= q
        return p * n_ - p * (p - 1) / 2 + (q - p);
    }

  private:
    struct MonoRep {
        int u = 0, v = 0;
        Complex amp;
    };
    struct StateRep {
        std::vector<MonoRep> monos;
    };

    static int mode_index(const std::vector<Mode>& modes, const Mode& m) {
        auto it = std::find(modes.begin(), modes.end(), m);
        if (it == modes.end())
            throw InputError("input state uses a mode outside the network: " + m.str());
        return static_cast<int>(it - modes.begin());
    }

    EventTable dense_table(const Eigen::MatrixXcd& u) const {
        EventTable table;
        table.n_states = states_.size();
        const std::size_t n_events =
            static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_ + 1) / 2;
        table.probs.assign(n_events, {});
        for (std::size_t s = 0; s < states_.size(); ++s) {
            // amp(p<=q) accumulated densely.
            std::vector<Complex> amp(n_events, Complex(0.0));
            for (const MonoRep& m : states_[s].monos) {
                for (int p = 0; p < n_; ++p) {
                    const Complex up_u = u(p, m.u);
                    const Complex up_v = u(p, m.v);
                    // diagonal event (p,p)
                    amp[event_index(p, p)] += m.amp * up_u * up_v;
                    for (int q = p + 1; q < n_; ++q)
                        amp[event_index(p, q)] +=
                            m.amp * (up_u * u(q, m.v) + up_v * u(q, m.u));
                }
            }
            for (int p = 0; p < n_; ++p) {
                for (int q = p; q < n_; ++q) {
                    const double w = p == q ? 2.0 : 1.0;
                    table.probs[event_index(p, q)][s] = std::norm(amp[event_index(p, q)]) * w;
                }
            }
        }
        return table;
    }

    EventTable generic_table(const Eigen::MatrixXcd& u) const {
        EventTable table;
        table.n_states = generic_inputs_.size();
        std::map<DetectionEvent, std::size_t> index;
        const ModeMap map{modes_, u};
        for (std::size_t s = 0; s < generic_inputs_.size(); ++s) {
            const PhotonState out = apply_mode_map(generic_inputs_[s].second, map);
            for (const auto& [ev, prob] : enumerate_events(out, generic_detectors_)) {
                auto [it, inserted] = index.try_emplace(ev, table.probs.size());
                if (inserted) table.probs.push_back({});
                table.probs[it->second][s] += prob;
            }
        }
        return table;
    }

    std::vector<StateRep> states_;
    std::vector<std::pair<std::string, PhotonState>> generic_inputs_;
    DetectorSpec generic_detectors_;
    std::vector<double> priors_;
    std::vector<Mode> modes_;
    int n_;
    bool two_photon_ = true;
};

struct RestartOutcome {
    double success = 0.0;
    ReckNetwork network;
    std::uint64_t evaluations = 0;
};

class BudgetedSearch {
  public:
    BudgetedSearch(const Objective& obj, int n_modes)
        : obj_(obj), n_modes_(n_modes) {}

    // Search dimension: pair rotations and internal phases. Output phases
    // never move detection probabilities, so they stay at zero.
    std::size_t dim() const {
        return static_cast<std::size_t>(n_modes_) * static_cast<std::size_t>(n_modes_ - 1);
    }

    // Search coordinates are mixing angles; the stored network parameters
    // are transmissions cos^2(angle), so any search point is realizable.
    ReckNetwork network_from(const std::vector<double>& x) const {
        ReckNetwork net;
        net.n_modes = n_modes_;
        net.params.assign(ReckNetwork::param_count(n_modes_), 0.0);
        for (std::size_t k = 0; k + 1 < x.size(); k += 2) {
            const double c = std::cos(x[k]);
            net.params[k] = c * c;
            net.params[k + 1] = x[k + 1];
        }
        return net;
    }

    double true_success(const std::vector<double>& x) const {
        return obj_.success(obj_.event_table(realize(network_from(x))));
    }

    RestartOutcome run_restart(std::uint64_t seed, std::uint64_t eval_budget) const {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uni(-kPi, kPi);
        std::vector<double> x(dim());
        for (double& v : x) v = uni(rng);

        std::uint64_t used = 0;
        const std::uint64_t polish_budget =
            std::min<std::uint64_t>(eval_budget / 4, 8 * (dim() + 1));
        const double stages[] = {3e-1, 1e-2, 3e-4};
        const std::uint64_t stage_budget = (eval_budget - polish_budget) / 3;
        for (double eps : stages)
            x = nelder_mead(x, eps, stage_budget, used);
        x = polish(x, polish_budget, used);

        RestartOutcome out;
        out.network = network_from(x);
        out.success = true_success(x);
        out.evaluations = used;
        return out;
    }

  private:
    std::vector<double> nelder_mead(std::vector<double> x0, double eps,
                                    std::uint64_t max_evals, std::uint64_t& used) const {
        const std::size_t n = dim();
        std::uint64_t local = 0;
        auto f = [&](const std::vector<double>& x) {
            ++local;
            return -obj_.guide(obj_.event_table(realize(network_from(x))), eps);
        };
        std::vector<std::vector<double>> simplex{x0};
        for (std::size_t i = 0; i < n; ++i) {
            auto xi = x0;
            xi[i] += 0.5;
            simplex.push_back(std::move(xi));
        }
        std::vector<double> fv(n + 1);
        for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

        while (local + 2 <= max_evals) {
            std::vector<std::size_t> order(n + 1);
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(),
                      [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
            std::vector<std::vector<double>> sx(n + 1);
            std::vector<double> sf(n + 1);
            for (std::size_t i = 0; i <= n; ++i) {
                sx[i] = simplex[order[i]];
                sf[i] = fv[order[i]];
            }
            simplex = std::move(sx);
            fv = std::move(sf);
            if (std::abs(fv[n] - fv[0]) < 1e-15) break;

            std::vector<double> centroid(n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;
            auto blend = [&](double alpha) {
                std::vector<double> p(n);
                for (std::size_t j = 0; j < n; ++j)
                    p[j] = centroid[j] + alpha * (centroid[j] - simplex[n][j]);
                return p;
            };
            auto xr = blend(1.0);
            const double fr = f(xr);
            if (fr < fv[0]) {
                if (local >= max_evals) {
                    simplex[n] = std::move(xr);
                    fv[n] = fr;
                    break;
                }
                auto xe = blend(2.0);
                const double fe = f(xe);
                if (fe < fr) {
                    simplex[n] = std::move(xe);
                    fv[n] = fe;
                } else {
                    simplex[n] = std::move(xr);
                    fv[n] = fr;
                }
            } else if (fr < fv[n - 1]) {
                simplex[n] = std::move(xr);
                fv[n] = fr;
            } else {
                auto xc = blend(-0.5);
                const double fc = f(xc);
                if (fc < fv[n]) {
                    simplex[n] = std::move(xc);
                    fv[n] = fc;
                } else {
                    for (std::size_t i = 1; i <= n && local < max_evals; ++i) {
                        for (std::size_t j = 0; j < n; ++j)
                            simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                        fv[i] = f(simplex[i]);
                    }
                }
            }
        }
        used += local;
        std::size_t best = 0;
        for (std::size_t i = 1; i <= n; ++i)
            if (fv[i] < fv[best]) best = i;
        return simplex[best];
    }

    // Candidate signature events: strongly populated by exactly one state.
    // The polish drives the other states' probabilities there to zero with
    // finite-difference Gauss-Newton steps on sqrt-probabilities.
    std::vector<double> polish(std::vector<double> x, std::uint64_t max_evals,
                               std::uint64_t& used) const {
        const double pick = 0.02;
        std::uint64_t local = 0;
        auto targets_of = [&](const std::vector<double>& p) {
            EventTable t = obj_.event_table(realize(network_from(p)));
            std::vector<std::pair<std::size_t, std::size_t>> targets;  // (event, state)
            for (std::size_t e = 0; e < t.probs.size(); ++e) {
                for (std::size_t i = 0; i < t.n_states; ++i) {
                    double others = 0.0;
                    for (std::size_t j = 0; j < t.n_states; ++j)
                        if (j != i) others = std::max(others, t.probs[e][j]);
                    if (t.probs[e][i] > 5 * pick && others < pick) targets.emplace_back(e, i);
                }
            }
            return targets;
        };
        auto targets = targets_of(x);
        if (targets.empty()) {
            used += local;
            return x;
        }
        const std::size_t n = dim();
        auto residuals = [&](const std::vector<double>& p) {
            ++local;
            EventTable t = obj_.event_table(realize(network_from(p)));
            Eigen::VectorXd r(static_cast<Eigen::Index>(targets.size() * (t.n_states - 1)));
            Eigen::Index k = 0;
            for (const auto& [e, i] : targets)
                for (std::size_t j = 0; j < t.n_states; ++j)
                    if (j != i) r(k++) = std::sqrt(t.probs[e][j]);
            return r;
        };
        const double h = 1e-7;
        double best_success = true_success(x);
        std::vector<double> best_x = x;
        for (int iter = 0; iter < 8; ++iter) {
            if (local + n + 2 > max_evals) break;
            Eigen::VectorXd r0 = residuals(x);
            if (r0.lpNorm<Eigen::Infinity>() < 1e-9) break;
            Eigen::MatrixXd jac(r0.size(), static_cast<Eigen::Index>(n));
            for (std::size_t k = 0; k < n; ++k) {
                auto xk = x;
                xk[k] += h;
                jac.col(static_cast<Eigen::Index>(k)) = (residuals(xk) - r0) / h;
            }
            Eigen::MatrixXd normal = jac.transpose() * jac;
            normal.diagonal().array() += 1e-9;
            Eigen::VectorXd step = normal.ldlt().solve(-jac.transpose() * r0);
            for (std::size_t k = 0; k < n; ++k) x[k] += step(static_cast<Eigen::Index>(k));
            const double s = true_success(x);
            if (s > best_success) {
                best_success = s;
                best_x = x;
            }
        }
        used += local;
        return best_x;
    }

    const Objective& obj_;
    int n_modes_;
};

}  // namespace

double network_success(const ReckNetwork& net,
                       const std::vector<std::pair<std::string, PhotonState>>& inputs,
                       const std::vector<Mode>& modes, const std::vector<double>& priors) {
    Objective obj(inputs, modes, priors);
    return obj.success(obj.event_table(realize(net)));
}

OptimizerResult optimize(const std::vector<std::pair<std::string, PhotonState>>& inputs,
                         const std::vector<Mode>& modes, const std::vector<double>& priors,
                         const OptimizeOptions& options) {
    if (options.budget < 1) throw ParameterError("optimizer budget must be at least 1");
    Objective obj(inputs, modes, priors);
    const int n = static_cast<int>(modes.size());
    BudgetedSearch search(obj, n);

    const int restarts = std::max(1, options.restarts);
    const std::uint64_t per_restart = std::max<std::uint64_t>(1, options.budget / restarts);

    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(restarts));
    if (options.budget <= static_cast<std::uint64_t>(restarts)) {
        // Degenerate budget: evaluate a single random candidate.
        std::mt19937_64 rng(options.seed);
        std::uniform_real_distribution<double> uni(-kPi, kPi);
        std::vector<double> x(search.dim());
        for (double& v : x) v = uni(rng);
        OptimizerResult res;
        res.network = search.network_from(x);
        res.success = search.true_success(x);
        res.evaluations_used = 1;
        res.trace.push_back({0, 1, res.success});
        return res;
    }

    const int threads = std::min(thread_budget(options.threads), restarts);
    std::atomic<int> next{0};
    auto worker = [&]() {
        while (true) {
            const int r = next.fetch_add(1);
            if (r >= restarts) break;
            outcomes[static_cast<std::size_t>(r)] = search.run_restart(
                options.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(r) + 1,
                per_restart);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    OptimizerResult res;
    res.success = -1.0;
    std::uint64_t evals = 0;
    for (int r = 0; r < restarts; ++r) {
        const auto& out = outcomes[static_cast<std::size_t>(r)];
        evals += out.evaluations;
        const double best = std::max(res.success, out.success);
        res.trace.push_back({r, evals, best});
        if (out.success > res.success) {
            res.success = out.success;
            res.network = out.network;
        }
    }
    res.evaluations_used = evals;
    return res;
}

std::string OptimizerResult::to_json() const {
    nlohmann::json j;
    j["n_modes"] = network.n_modes;
    j["params"] = network.params;
    j["success"] = success;
    j["evaluations_used"] = evaluations_used;
    nlohmann::json tr = nlohmann::json::array();
    for (const auto& p : trace)
        tr.push_back({{"restart", p.restart},
                      {"evaluations", p.evaluations},
                      {"best_success", p.best_success}});
    j["trace"] = tr;
    return j.dump(2);
}

}  // namespace belldisc
