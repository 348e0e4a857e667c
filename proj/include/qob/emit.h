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

#ifndef QOB_EMIT_H
#define QOB_EMIT_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qob/scenarios.h"

namespace qob {

enum class OutputFormat { table, csv, jsonl };

std::optional<OutputFormat> parse_output_format(std::string_view text);

struct EmitOptions {
    uint64_t seed = default_seed;
    /// ANSI colour in table output.
    bool color = false;
};

/// Fixed-point with nine decimals; negative zero prints as zero.
std::string format_real(double x);

std::string emit(const ScenarioResult &result, OutputFormat format, const EmitOptions &options = {});

std::string emit_sweep(
    const std::string &scenario,
    const std::vector<SweepRow> &rows,
    OutputFormat format,
    const EmitOptions &options = {});

}  // namespace qob

#endif
