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

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <mutex>
#include <sstream>
#include <thread>

#include "belldisc/optimizer.hpp"
#include "belldisc/protocols.hpp"

namespace {

using namespace belldisc;

constexpr double kPi = 3.14159265358979323846;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct CliError : std::runtime_error {
    CliError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
    int code;
};

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError(kExitIo, "cannot open output file: " + path);
    out << content;
    if (!out) throw CliError(kExitIo, "write failed: " + path);
}

std::vector<double> parse_priors(const std::string& text) {
    std::vector<double> priors;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) priors.push_back(std::stod(item));
    return priors;
}

std::optional<ClosedForm> closed_form_of(ProtocolId id, int pairs, bool equal_thetas) {
    switch (id) {
        case ProtocolId::HyperMomentum: return ClosedForm::HyperMomentum;
        case ProtocolId::HyperPolarization: return ClosedForm::HyperPolarization;
        case ProtocolId::HyperOam: return ClosedForm::HyperOam;
        case ProtocolId::Timebin: return ClosedForm::Timebin;
        case ProtocolId::Sfg: return ClosedForm::Sfg;
        case ProtocolId::Ancilla:
            if (pairs != 1) return std::nullopt;  // printed formulas are one-pair
            return equal_thetas ? ClosedForm::AncillaEqual : ClosedForm::AncillaGeneral;
        default: return std::nullopt;
    }
}

double evaluate_closed_form(ProtocolId id, const ProtocolParams& p) {
    auto which = closed_form_of(id, p.pairs, p.theta1 == p.theta2);
    if (!which) throw DomainError("no closed form for this configuration");
    switch (*which) {
        case ClosedForm::AncillaGeneral: return closed_form(*which, p.theta1, p.theta2);
        case ClosedForm::AncillaEqual: return closed_form(*which, p.theta2);
        case ClosedForm::Sfg: return closed_form(*which, p.theta1, p.theta2);
        default: return closed_form(*which, p.theta1);
    }
}

void validate_run(const DiscriminationReport& rep) {
    // Event probabilities plus discarded probability account for the whole
    // input norm, and claimed signatures are exclusive.
    for (std::size_t i = 0; i < rep.inputs.size(); ++i) {
        double total = rep.discarded[i];
        for (const EventRow& row : rep.event_table) total += row.probability[i];
        if (std::abs(total - 1.0) > 1e-10)
            throw CliError(kExitValidation,
                           "probability accounting failed for " + rep.inputs[i] + ": " +
                               fmt(total));
    }
    for (const EventRow& row : rep.event_table) {
        if (row.unambiguous_for < 0) continue;
        for (std::size_t j = 0; j < rep.inputs.size(); ++j) {
            if (static_cast<int>(j) == row.unambiguous_for) continue;
            if (row.probability[j] >= kTauZero)
                throw CliError(kExitValidation,
                               "signature event " + row.event.str() + " is not exclusive");
        }
    }
}

struct RunArgs {
    std::string protocol;
    double theta = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    int pairs = 1;
    std::string mode = "circuit";
    std::string priors;
    std::string format = "json";
    std::string out;
    std::uint64_t seed = 0;  // reports are deterministic; kept for config parity
};

ProtocolParams params_from(const RunArgs& args, ProtocolId id) {
    ProtocolParams p;
    p.pairs = args.pairs;
    if (id == ProtocolId::Ancilla || id == ProtocolId::Sfg) {
        p.theta1 = args.theta1 != 0.0 ? args.theta1 : args.theta;
        p.theta2 = args.theta2 != 0.0 ? args.theta2 : p.theta1;
    } else {
        p.theta1 = args.theta != 0.0 ? args.theta : args.theta1;
        p.theta2 = p.theta1;
    }
    return p;
}

int cmd_run(const RunArgs& args) {
    const ProtocolId id = protocol_from_name(args.protocol);
    const ProtocolParams params = params_from(args, id);
    const RunMode mode = args.mode == "literal" ? RunMode::Literal : RunMode::Circuit;

    // Domain validation up front; the timebin expression excludes pi/4.
    double cf = std::numeric_limits<double>::quiet_NaN();
    if (auto which = closed_form_of(id, params.pairs, params.theta1 == params.theta2);
        which)
        cf = evaluate_closed_form(id, params);

    ProtocolInstance inst = build(id, params, mode);
    std::vector<double> priors =
        args.priors.empty() ? uniform_priors(inst.inputs.size()) : parse_priors(args.priors);
    DiscriminationReport rep = analyze_protocol(inst, priors);
    validate_run(rep);

    std::string content;
    if (args.format == "csv") {
        content = rep.event_table_csv();
        content += "success," + fmt(rep.success_probability) + "\n";
        if (!std::isnan(cf)) content += "closed_form," + fmt(cf) + "\n";
    } else {
        nlohmann::json j = nlohmann::json::parse(rep.to_json());
        j["protocol"] = protocol_name(id);
        j["theta1"] = params.theta1;
        j["theta2"] = params.theta2;
        j["pairs"] = params.pairs;
        j["mode"] = args.mode;
        if (!std::isnan(cf)) j["closed_form"] = cf;
        if (id == ProtocolId::Timebin) {
            const TimebinFit fit = fit_timebin_transmission({params.theta1});
            j["circuit_reconstruction"] = {{"vertical_arm_transmission",
                                            fit.transmissions[0]},
                                           {"fit_residual", fit.max_residual},
                                           {"status", fit.verified ? "verified"
                                                                   : "unverified"}};
        }
        content = j.dump(2);
    }
    write_output(args.out, content);
    return kExitOk;
}

struct SweepArgs : RunArgs {
    std::string sweep;  // start:end:points
    int points = 64;
};

int cmd_sweep(const SweepArgs& args) {
    const ProtocolId id = protocol_from_name(args.protocol);
    if (args.points < 2) throw CliError(kExitUsage, "sweep needs at least 2 points");
    std::vector<double> grid;
    if (!args.sweep.empty()) {
        double start = 0.0, end = 0.0;
        int points = 0;
        if (std::sscanf(args.sweep.c_str(), "%lf:%lf:%d", &start, &end, &points) != 3 ||
            points < 2)
            throw CliError(kExitUsage, "--sweep expects start:end:points with points >= 2");
        if (!(start > 0.0 && end < kPi / 2.0 && start < end))
            throw CliError(kExitUsage, "sweep range must lie inside (0, pi/2)");
        for (int k = 0; k < points; ++k) {
            const double theta = start + (end - start) * k / (points - 1);
            if (id == ProtocolId::Timebin && std::abs(theta - kPi / 4.0) < 1e-9)
                throw CliError(kExitUsage, "timebin sweep may not include pi/4");
            grid.push_back(theta);
        }
    } else {
        grid = theta_grid(args.points);
        if (id == ProtocolId::Timebin) {
            std::erase_if(grid,
                          [](double t) { return std::abs(t - kPi / 4.0) < 1e-9; });
        }
    }

    const RunMode mode = args.mode == "literal" ? RunMode::Literal : RunMode::Circuit;
    std::vector<double> achieved(grid.size()), reference(grid.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error_text;
    std::mutex error_mutex;
    auto worker = [&]() {
        while (!failed.load()) {
            const std::size_t k = next.fetch_add(1);
            if (k >= grid.size()) break;
            try {
                RunArgs point = args;
                point.theta = grid[k];
                point.theta1 = grid[k];
                point.theta2 = grid[k];
                const ProtocolParams params = params_from(point, id);
                ProtocolInstance inst = build(id, params, mode);
                DiscriminationReport rep = analyze_protocol(inst);
                achieved[k] = rep.success_probability;
                const bool has_form =
                    closed_form_of(id, params.pairs, params.theta1 == params.theta2)
                        .has_value();
                reference[k] = has_form ? evaluate_closed_form(id, params)
                                        : std::numeric_limits<double>::quiet_NaN();
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                failed.store(true);
                error_text = e.what();
            }
        }
    };
    const int threads = std::min<int>(thread_budget(0), static_cast<int>(grid.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) throw CliError(kExitUsage, "sweep failed: " + error_text);

    std::string csv = "theta,achieved,closed_form,abs_diff\n";
    double max_diff = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        csv += fmt(grid[k]) + "," + fmt(achieved[k]);
        if (std::isnan(reference[k])) {
            csv += ",,\n";
        } else {
            const double diff = std::abs(achieved[k] - reference[k]);
            max_diff = std::max(max_diff, diff);
            csv += "," + fmt(reference[k]) + "," + fmt(diff) + "\n";
        }
    }
    csv += "max_abs_diff,,," + fmt(max_diff) + "\n";
    write_output(args.out, csv);
    return kExitOk;
}

int cmd_table(const std::string& out_path) {
    struct Row {
        std::string system;
        std::string ancilla;
        ProtocolId id;
        std::string bell_cited;
    };
    const std::vector<Row> rows = {
        {"Spatial DOF", "Polarisation DOF", ProtocolId::HyperMomentum, "100% [cited]"},
        {"Polarisation DOF", "Spatial DOF", ProtocolId::HyperPolarization, "100% [cited]"},
        {"Polarisation DOF", "OAM DOF", ProtocolId::HyperOam, "100% [cited]"},
        {"Polarisation DOF", "Time DOF", ProtocolId::Timebin, "100% [cited]"},
        {"Extra ancillary photon pair", "", ProtocolId::Ancilla, "75% [cited]"},
        {"Using SFG", "", ProtocolId::Sfg, ""},
    };
    std::string text =
        "protocol                                   bell(achieved)  bell(cited)   "
        "bell-like(theta=pi/6)\n";
    for (const Row& row : rows) {
        ProtocolParams bell, like;
        bell.theta1 = bell.theta2 = kPi / 4.0;
        like.theta1 = like.theta2 = kPi / 6.0;
        const double bell_val =
            analyze_protocol(build(row.id, bell)).success_probability;
        const double like_val =
            analyze_protocol(build(row.id, like)).success_probability;
        std::string name = row.system + (row.ancilla.empty() ? "" : " / " + row.ancilla);
        name.resize(42, ' ');
        std::string bell_s = fmt(bell_val);
        bell_s.resize(15, ' ');
        std::string cited = row.bell_cited.empty() ? fmt(bell_val) : row.bell_cited;
        cited.resize(13, ' ');
        text += name + " " + bell_s + " " + cited + " " + fmt(like_val) + "\n";
    }
    write_output(out_path, text);
    return kExitOk;
}

struct OptArgs {
    double theta = 0.5;
    int modes = 4;
    std::uint64_t budget = 10000;
    int restarts = 20;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_optimize(const OptArgs& args) {
    if (args.modes < 4)
        throw CliError(kExitUsage, "the optimizer probe needs at least the four "
                                   "dual-rail modes");
    ProtocolParams p;
    p.theta1 = args.theta;
    ProtocolInstance base = build(ProtocolId::Baseline, p);
    std::vector<Mode> modes = {path_mode("a1"), path_mode("b1"), path_mode("a2"),
                               path_mode("b2")};
    for (int m = 5; m <= args.modes; ++m)
        modes.push_back(path_mode("v" + std::to_string(m)));  // vacuum ports
    OptimizeOptions opt;
    opt.budget = args.budget;
    opt.restarts = args.restarts;
    opt.seed = args.seed;
    OptimizerResult res =
        optimize(base.inputs, modes, uniform_priors(base.inputs.size()), opt);
    write_output(args.out, res.to_json());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Few-photon linear-optics discrimination toolkit"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "Run one protocol and report");
    run->add_option("--protocol", run_args.protocol)->required();
    run->add_option("--theta", run_args.theta);
    run->add_option("--theta1", run_args.theta1);
    run->add_option("--theta2", run_args.theta2);
    run->add_option("--pairs", run_args.pairs);
    run->add_option("--mode", run_args.mode)->check(CLI::IsMember({"circuit", "literal"}));
    run->add_option("--priors", run_args.priors);
    run->add_option("--format", run_args.format)->check(CLI::IsMember({"csv", "json"}));
    run->add_option("--out", run_args.out);
    run->add_option("--seed", run_args.seed);

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "Sweep theta and compare closed forms");
    sweep->add_option("--protocol", sweep_args.protocol)->required();
    sweep->add_option("--sweep", sweep_args.sweep);
    sweep->add_option("--points", sweep_args.points);
    sweep->add_option("--pairs", sweep_args.pairs);
    sweep->add_option("--mode", sweep_args.mode)
        ->check(CLI::IsMember({"circuit", "literal"}));
    sweep->add_option("--out", sweep_args.out);
    sweep->add_option("--seed", sweep_args.seed);

    std::string table_out;
    CLI::App* table = app.add_subcommand("table", "Summary table from fresh runs");
    table->add_option("--out", table_out);

    OptArgs opt_args;
    CLI::App* opt = app.add_subcommand("optimize", "Search networks for discrimination");
    opt->add_option("--theta", opt_args.theta);
    opt->add_option("--modes", opt_args.modes);
    opt->add_option("--budget", opt_args.budget);
    opt->add_option("--restarts", opt_args.restarts);
    opt->add_option("--seed", opt_args.seed);
    opt->add_option("--out", opt_args.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (table->parsed()) return cmd_table(table_out);
        if (opt->parsed()) return cmd_optimize(opt_args);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
