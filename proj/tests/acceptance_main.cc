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

// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.

#include <iostream>

#include "qob/acceptance.h"

int main() {
    bool all = true;
    for (const auto &o : qob::acceptance::run_all()) {
        std::cout << qob::acceptance::format_outcome(o) << std::endl;
        all = all && o.passed;
    }
    return all ? 0 : 1;
}
