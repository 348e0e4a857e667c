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

#ifndef QOB_ACCEPTANCE_H
#define QOB_ACCEPTANCE_H

#include <string>
#include <vector>

namespace qob::acceptance {

struct Outcome {
    int id;
    std::string title;
    bool passed;
    std::string detail;
    double millis;
};

struct Options {
    /// Random parser inputs for the fuzz part of the fixture check.
    int fuzz_inputs = 100000;
    unsigned threads = 0;
};

Outcome three_boxes_weak_values();
Outcome hardy_weak_values();
Outcome oblivion_evolution();
Outcome elastic_collision_states();
Outcome four_mirror_statistics(unsigned threads = 0);
Outcome weak_limit_convergence();
Outcome weak_to_projective(unsigned threads = 0);
Outcome dsl_fixtures(int fuzz_inputs = 100000, unsigned threads = 0);
Outcome property_suites();

std::vector<Outcome> run_all(const Options &options = {});

/// "PASS [n] title: detail (t ms)".
std::string format_outcome(const Outcome &o);

}  // namespace qob::acceptance

#endif
