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

#include "qob/errors.h"

namespace qob {

const char *error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::dimension_mismatch:
            return "DimensionMismatch";
        case ErrorKind::unknown_label:
            return "UnknownLabel";
        case ErrorKind::invalid_space:
            return "InvalidSpace";
        case ErrorKind::invalid_bipartition:
            return "InvalidBipartition";
        case ErrorKind::invalid_operator:
            return "InvalidOperator";
        case ErrorKind::not_normalized:
            return "NotNormalized";
        case ErrorKind::orthogonal_selection:
            return "OrthogonalSelection";
        case ErrorKind::zero_probability_branch:
            return "ZeroProbabilityBranch";
        case ErrorKind::incomplete_set:
            return "IncompleteSet";
        case ErrorKind::shift_out_of_grid:
            return "ShiftOutOfGrid";
        case ErrorKind::invalid_argument:
            return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string &message)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {
}

}  // namespace qob
