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

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "qob/emit.h"

namespace qob {

namespace {

constexpr double amplitude_cutoff = 1e-12;

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

std::string json_string(const std::string &s) {
    return nlohmann::json(s).dump();
}

// A flat list of (section, name, kind, re, im) rows shared by every format.
struct Row {
    std::string name;
    double re;
    double im;
};

struct Block {
    std::string title;
    std::string kind;
    std::vector<std::string> csv_header;
    bool complex;
    std::vector<Row> rows;
};

void add_state(Block &b, const std::string &prefix, const Ket &k) {
    for (size_t i = 0; i < k.dim(); i++) {
        cplx a = k.amplitude(i);
        if (std::abs(a) > amplitude_cutoff) {
            b.rows.push_back({prefix + "|" + k.space().basis_name(i), a.real(), a.imag()});
        }
    }
}

std::vector<Block> blocks_of(const ScenarioResult &r) {
    std::vector<Block> out;

    Block states{"states", "amplitude", {"epoch", "basis", "re", "im"}, true, {}};
    for (const auto &[e, k] : r.states_by_epoch) {
        add_state(states, epoch_name(e), k);
    }
    if (r.post_selection) {
        add_state(states, "postselect", *r.post_selection);
    }
    out.push_back(std::move(states));

    Block branches{"branch states", "branch_amplitude", {"branch", "basis", "re", "im"}, true, {}};
    for (const auto &[name, k] : r.branch_states) {
        add_state(branches, name, k);
    }
    out.push_back(std::move(branches));

    Block ranks{"schmidt ranks", "schmidt_rank", {"epoch", "schmidt_rank"}, false, {}};
    for (const auto &[e, rank] : r.schmidt_ranks) {
        ranks.rows.push_back({epoch_name(e), static_cast<double>(rank), 0});
    }
    out.push_back(std::move(ranks));

    Block probs{"probabilities", "probability", {"name", "probability"}, false, {}};
    for (const auto &[name, p] : r.probabilities) {
        probs.rows.push_back({name, p, 0});
    }
    out.push_back(std::move(probs));

    Block weak{"weak values", "weak_value", {"name", "re", "im"}, true, {}};
    for (const auto &[name, w] : r.weak_values) {
        weak.rows.push_back({name, w.real(), w.imag()});
    }
    out.push_back(std::move(weak));

    Block expect{"expectations", "expectation", {"name", "expectation"}, false, {}};
    for (const auto &[name, v] : r.expectations) {
        expect.rows.push_back({name, v, 0});
    }
    out.push_back(std::move(expect));

    Block stats{"trial statistics", "trial_stat", {"name", "value"}, false, {}};
    for (const auto &[name, v] : r.trial_stats) {
        stats.rows.push_back({name, v, 0});
    }
    out.push_back(std::move(stats));

    std::erase_if(out, [](const Block &b) {
        return b.rows.empty();
    });
    return out;
}

std::string rank_text(const Block &b, double v) {
    return b.kind == "schmidt_rank" ? fmt::format("{}", static_cast<int>(v)) : format_real(v);
}

std::string emit_csv(const ScenarioResult &r, const EmitOptions &opt) {
    std::string out = fmt::format("# scenario={},seed={}\n", r.scenario, opt.seed);
    for (const auto &b : blocks_of(r)) {
        out += "\n# " + b.title + "\n";
        for (size_t k = 0; k < b.csv_header.size(); k++) {
            out += (k ? "," : "") + b.csv_header[k];
        }
        out += "\n";
        for (const auto &row : b.rows) {
            std::string name = row.name;
            if (b.csv_header.size() == 4) {
                auto bar = name.find('|');
                name = csv_field(name.substr(0, bar)) + "," + csv_field(name.substr(bar + 1));
            } else {
                name = csv_field(name);
            }
            out += name + "," + rank_text(b, row.re);
            if (b.complex) {
                out += "," + format_real(row.im);
            }
            out += "\n";
        }
    }
    return out;
}

std::string jsonl_record(const std::string &scenario, const std::string &name, const std::string &kind, const std::string &re, const std::string &im) {
    return fmt::format(
        "{{\"scenario\":{},\"name\":{},\"kind\":{},\"re\":{},\"im\":{}}}\n",
        json_string(scenario),
        json_string(name),
        json_string(kind),
        re,
        im);
}

std::string emit_jsonl(const ScenarioResult &r, const EmitOptions &opt) {
    std::string out = jsonl_record(r.scenario, "seed", "header", fmt::format("{}", opt.seed), "0");
    for (const auto &b : blocks_of(r)) {
        for (const auto &row : b.rows) {
            out += jsonl_record(r.scenario, row.name, b.kind, rank_text(b, row.re), format_real(row.im));
        }
    }
    return out;
}

struct Style {
    bool color;
    std::string title(const std::string &s) const {
        return color ? "\x1b[1;36m" + s + "\x1b[0m" : s;
    }
    std::string dim(const std::string &s) const {
        return color ? "\x1b[2m" + s + "\x1b[0m" : s;
    }
};

std::string emit_table(const ScenarioResult &r, const EmitOptions &opt) {
    Style style{opt.color};
    std::string out = style.title("scenario " + r.scenario) + style.dim(fmt::format("  (seed {})", opt.seed)) + "\n";
    for (const auto &b : blocks_of(r)) {
        size_t width = 4;
        for (const auto &row : b.rows) {
            width = std::max(width, row.name.size());
        }
        out += "\n" + style.title(b.title) + "\n";
        for (const auto &row : b.rows) {
            out += fmt::format("  {:<{}}  {:>14}", row.name, width, rank_text(b, row.re));
            if (b.complex) {
                out += fmt::format("  {:>14}", format_real(row.im) + "i");
            }
            out += "\n";
        }
    }
    return out;
}

}  // namespace

std::optional<OutputFormat> parse_output_format(std::string_view text) {
    if (text == "table") {
        return OutputFormat::table;
    }
    if (text == "csv") {
        return OutputFormat::csv;
    }
    if (text == "jsonl") {
        return OutputFormat::jsonl;
    }
    return std::nullopt;
}

std::string format_real(double x) {
    std::string s = fmt::format("{:.9f}", x);
    if (s == "-0.000000000") {
        s.erase(0, 1);
    }
    return s;
}

std::string emit(const ScenarioResult &result, OutputFormat format, const EmitOptions &options) {
    switch (format) {
        case OutputFormat::table:
            return emit_table(result, options);
        case OutputFormat::csv:
            return emit_csv(result, options);
        case OutputFormat::jsonl:
            return emit_jsonl(result, options);
    }
    return {};
}

std::string emit_sweep(
    const std::string &scenario,
    const std::vector<SweepRow> &rows,
    OutputFormat format,
    const EmitOptions &options) {
    std::string out;
    switch (format) {
        case OutputFormat::csv:
            out = fmt::format("# scenario={},seed={}\ng,observable,shift_over_g,weak_value_re,weak_value_im\n", scenario, options.seed);
            for (const auto &r : rows) {
                out += fmt::format(
                    "{},{},{},{},{}\n",
                    format_real(r.g),
                    csv_field(r.observable),
                    format_real(r.shift_over_g),
                    format_real(r.weak_value.real()),
                    format_real(r.weak_value.imag()));
            }
            return out;
        case OutputFormat::jsonl:
            out = jsonl_record(scenario, "seed", "header", fmt::format("{}", options.seed), "0");
            for (const auto &r : rows) {
                out += fmt::format(
                    "{{\"scenario\":{},\"name\":{},\"kind\":\"shift_over_g\",\"re\":{},\"im\":{},\"g\":{}}}\n",
                    json_string(scenario),
                    json_string(r.observable),
                    format_real(r.shift_over_g),
                    format_real(0),
                    format_real(r.g));
            }
            return out;
        case OutputFormat::table: {
            Style style{options.color};
            out = style.title("scenario " + scenario) + style.dim(fmt::format("  (seed {})", options.seed)) + "\n\n";
            out += style.title(fmt::format("  {:>12}  {:>14}  {:>14}", "g", "shift/g", "weak value")) + "\n";
            for (const auto &r : rows) {
                out += fmt::format(
                    "  {:>12}  {:>14}  {:>14}   {}\n",
                    format_real(r.g),
                    format_real(r.shift_over_g),
                    format_real(r.weak_value.real()),
                    r.observable);
            }
            return out;
        }
    }
    return out;
}

}  // namespace qob
