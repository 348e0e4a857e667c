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

#ifndef QOB_ERRORS_H
#define QOB_ERRORS_H

#include <stdexcept>
#include <string>

namespace qob {

enum class ErrorKind {
    dimension_mismatch,
    unknown_label,
    invalid_space,
    invalid_bipartition,
    invalid_operator,
    not_normalized,
    orthogonal_selection,
    zero_probability_branch,
    incomplete_set,
    shift_out_of_grid,
    invalid_argument,
};

const char *error_kind_name(ErrorKind kind);

/// Every recoverable failure in the library is reported as a qob::Error tagged with its kind.
class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &message);

    ErrorKind kind() const noexcept {
        return kind_;
    }

   private:
    ErrorKind kind_;
};

}  // namespace qob

#endif
