// Copyright 2026 The qoblivion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qob/acceptance.h"
#include "qob/cli.h"
#include "qob/dsl.h"

namespace qob::cli {

namespace {

struct ScenarioFailure {
    std::string message;
};

struct IoFailure {
    std::string message;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoFailure{"cannot read '" + path + "'"};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw IoFailure{"error reading '" + path + "'"};
    }
    return buf.str();
}

/// Parses a scenario file (or an embedded copy); diagnostics go to `err`.
dsl::ScenarioSpec load_spec(const std::string &source_name, const std::string &text, std::ostream &err) {
    dsl::ParseResult pr = dsl::parse(text);
    for (const auto &d : pr.diagnostics) {
        err << dsl::format_diagnostic(d, source_name) << "\n";
    }
    if (!pr.ok()) {
        throw ScenarioFailure{source_name + ": scenario rejected"};
    }
    if (pr.spec->id.empty()) {
        pr.spec->id = std::filesystem::path(source_name).stem().string();
    }
    return *pr.spec;
}

dsl::Evaluation evaluate_spec(const std::string &source_name, const dsl::ScenarioSpec &spec) {
    try {
        return dsl::evaluate_full(spec);
    } catch (const dsl::EvaluationError &e) {
        throw ScenarioFailure{fmt::format(
            "{}:{}: evaluation error: {}", source_name, dsl::to_string(e.pos()), e.what())};
    }
}

/// Resolves a non-built-in id to (source name, text): a file on disk, else an embedded scenario file.
std::pair<std::string, std::string> scenario_source(const std::string &id) {
    std::filesystem::path path(id);
    if (std::filesystem::exists(path)) {
        return {id, read_file(id)};
    }
    std::string stem = path.extension() == ".scn" && !path.has_parent_path() ? path.stem().string() : id;
    if (auto text = dsl::shipped_scenario(stem)) {
        return {stem + ".scn", *text};
    }
    if (path.has_parent_path() || path.extension() == ".scn") {
        throw IoFailure{"cannot read '" + id + "'"};
    }
    throw ScenarioFailure{"unknown scenario '" + id + "' (see qob list)"};
}

std::string default_sweep_observable(const std::string &id) {
    if (id == "hardy") {
        return "NO_NO";
    }
    return "P3";
}

std::string run_scenario(const RunConfig &cfg, std::ostream &err, bool color) {
    EmitOptions emit_opt{cfg.seed, color};
    if (cfg.g_sweep) {
        const SweepSpec &sw = *cfg.g_sweep;
        std::vector<double> gs = sweep_values(sw.g_min, sw.g_max, sw.steps, sw.log_spaced);
        WeakContext ctx = [&] {
            if (is_builtin(cfg.scenario)) {
                return weak_context(cfg.scenario);
            }
            auto [name, text] = scenario_source(cfg.scenario);
            dsl::Evaluation ev = evaluate_spec(name, load_spec(name, text, err));
            if (!ev.tsv || ev.observables.empty()) {
                throw ScenarioFailure{name + ": a sweep needs POSTSELECT and at least one observable"};
            }
            return WeakContext{*ev.tsv, ev.observables, ev.observables.front().first};
        }();
        std::string observable = cfg.observable;
        if (observable.empty()) {
            observable = is_builtin(cfg.scenario) ? default_sweep_observable(cfg.scenario) : ctx.default_observable;
        }
        auto rows = g_sweep(ctx, observable, gs);
        return emit_sweep(cfg.scenario, rows, cfg.format, emit_opt);
    }

    ScenarioResult result;
    if (is_builtin(cfg.scenario)) {
        RunParams params;
        params.seed = cfg.seed;
        params.trials = cfg.trials;
        params.round_trips = cfg.round_trips;
        params.g = cfg.g;
        params.option = cfg.option;
        params.threads = cfg.threads;
        result = run_builtin(cfg.scenario, params);
    } else {
        auto [name, text] = scenario_source(cfg.scenario);
        result = evaluate_spec(name, load_spec(name, text, err)).result;
    }
    return emit(result, cfg.format, emit_opt);
}

void write_output(const std::string &text, const std::optional<std::string> &path, std::ostream &out) {
    if (!path) {
        out << text;
        out.flush();
        if (!out) {
            throw IoFailure{"error writing to standard output"};
        }
        return;
    }
    std::ofstream f(*path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoFailure{"cannot open '" + *path + "' for writing"};
    }
    f << text;
    f.close();
    if (!f) {
        throw IoFailure{"error writing '" + *path + "'"};
    }
}

std::string list_text() {
    std::string out;
    size_t width = 0;
    for (const auto &info : catalog()) {
        width = std::max(width, info.id.size());
    }
    for (const auto &info : catalog()) {
        out += fmt::format("{:<{}}  {}\n{:<{}}  reproduces: {}\n", info.id, width, info.description, "", width, info.reproduces);
    }
    out += "\nScenario files (run by name or path):\n";
    for (const auto &[stem, text] : dsl::shipped_scenario_files()) {
        out += "  " + stem + ".scn\n";
    }
    return out;
}

}  // namespace

std::optional<SweepSpec> parse_sweep(const std::string &text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) {
        parts.push_back(part);
    }
    if (parts.size() < 3 || parts.size() > 4) {
        return std::nullopt;
    }
    SweepSpec s{};
    try {
        size_t used = 0;
        s.g_min = std::stod(parts[0], &used);
        if (used != parts[0].size()) {
            return std::nullopt;
        }
        s.g_max = std::stod(parts[1], &used);
        if (used != parts[1].size()) {
            return std::nullopt;
        }
        s.steps = std::stoi(parts[2], &used);
        if (used != parts[2].size()) {
            return std::nullopt;
        }
    } catch (const std::exception &) {
        return std::nullopt;
    }
    if (parts.size() == 4) {
        if (parts[3] != "log") {
            return std::nullopt;
        }
        s.log_spaced = true;
    }
    if (!(s.g_min > 0) || !(s.g_max >= s.g_min) || s.steps < 1 || !std::isfinite(s.g_max)) {
        return std::nullopt;
    }
    return s;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err, bool out_is_tty) {
    CLI::App app("Simulates pre- and post-selected interferometer experiments and their weak values.", "qob");
    app.require_subcommand(0, 1);
    bool list_flag = false;
    app.add_flag("--list", list_flag, "List built-in scenarios");

    RunConfig cfg;
    std::string format_text = "table";
    std::string option_text = "recombine_all";
    std::string sweep_text;
    std::string out_path;
    auto *run = app.add_subcommand("run", "Run a built-in scenario or a .scn file");
    run->add_option("scenario", cfg.scenario, "Scenario id or path to a .scn file")->required();
    run->add_option("--seed", cfg.seed, "Monte Carlo seed")->capture_default_str();
    run->add_option("--trials", cfg.trials, "Monte Carlo trials")->check(CLI::PositiveNumber)->capture_default_str();
    run->add_option("--round-trips", cfg.round_trips, "Round trips after double silence (four_mirror)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    run->add_option("--g", cfg.g, "Pointer coupling strength (three_path_photon)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    run->add_option("--option", option_text, "Recombination (three_path_photon)")
        ->check(CLI::IsMember({"recombine_all", "recombine_two", "all", "two"}))
        ->capture_default_str();
    run->add_option("--g-sweep", sweep_text, "Coupling sweep gmin:gmax:steps[:log]");
    run->add_option("--observable", cfg.observable, "Observable swept by --g-sweep");
    run->add_option("--format", format_text, "Output format")
        ->check(CLI::IsMember({"table", "csv", "jsonl"}))
        ->capture_default_str();
    run->add_option("--out", out_path, "Write output to this file");
    run->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");

    auto *list = app.add_subcommand("list", "List built-in scenarios");
    auto *check = app.add_subcommand("check", "Run the acceptance checks");
    int fuzz_inputs = 100000;
    check->add_option("--fuzz-inputs", fuzz_inputs, "Random parser inputs")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError &e) {
        err << "qob: " << e.what() << "\n";
        err << "Run 'qob --help' for usage.\n";
        return exit_usage;
    }

    try {
        if (list_flag || list->parsed()) {
            write_output(list_text(), std::nullopt, out);
            return exit_ok;
        }
        if (check->parsed()) {
            acceptance::Options opt;
            opt.fuzz_inputs = fuzz_inputs;
            bool all = true;
            for (const auto &o : acceptance::run_all(opt)) {
                out << acceptance::format_outcome(o) << "\n";
                all = all && o.passed;
            }
            return all ? exit_ok : exit_check_failed;
        }
        if (!run->parsed()) {
            out << app.help();
            return exit_usage;
        }
        cfg.format = *parse_output_format(format_text);
        cfg.option = *parse_recombine_option(option_text);
        if (!sweep_text.empty()) {
            cfg.g_sweep = parse_sweep(sweep_text);
            if (!cfg.g_sweep) {
                err << "qob: --g-sweep expects gmin:gmax:steps[:log] with 0 < gmin <= gmax and steps >= 1\n";
                return exit_usage;
            }
        }
        if (!cfg.observable.empty() && !cfg.g_sweep) {
            err << "qob: --observable only applies to --g-sweep\n";
            return exit_usage;
        }
        if (!out_path.empty()) {
            cfg.out_path = out_path;
        }
        bool color = out_is_tty && !cfg.out_path && cfg.format == OutputFormat::table && !std::getenv("NO_COLOR");
        std::string text = run_scenario(cfg, err, color);
        write_output(text, cfg.out_path, out);
        return exit_ok;
    } catch (const IoFailure &e) {
        err << "qob: " << e.message << "\n";
        return exit_io;
    } catch (const ScenarioFailure &e) {
        err << "qob: " << e.message << "\n";
        return exit_scenario;
    } catch (const Error &e) {
        err << "qob: " << e.what() << "\n";
        return e.kind() == ErrorKind::invalid_argument && !cfg.observable.empty() ? exit_usage : exit_scenario;
    }
}

}  // namespace qob::cli
