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

#ifndef QOB_PARALLEL_H
#define QOB_PARALLEL_H

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace qob {

/// Evaluates fn(i) for i in [0, count) on worker threads and returns the results in index order.
/// Results do not depend on the number of threads.
template <typename T, typename Fn>
std::vector<T> parallel_map(size_t count, Fn fn, unsigned threads = 0) {
    std::vector<T> out(count);
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<size_t>(threads, std::max<size_t>(count, 1)));
    if (threads <= 1) {
        for (size_t i = 0; i < count; i++) {
            out[i] = fn(i);
        }
        return out;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < threads; w++) {
        workers.emplace_back([&, w] {
            try {
                for (size_t i = w; i < count; i += threads) {
                    out[i] = fn(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &t : workers) {
        t.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

}  // namespace qob

#endif
