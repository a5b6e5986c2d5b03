// Copyright 2026 The vqc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file instrumentation.hpp
 * Per-thread work counters. Cheap enough to stay enabled in release builds;
 * tests read them to assert the sweep structure of the gradient backends.
 */
#pragma once

#include <cstdint>

namespace vqc {

struct SimCounters {
    std::uint64_t gate_applications = 0;
    /// Full forward evolutions |0> -> U|0>.
    std::uint64_t forward_evolutions = 0;
    /// Reverse sweeps applied to the ket (the evolved state).
    std::uint64_t reverse_ket_sweeps = 0;
    /// Reverse sweeps applied to observable-seeded bra states.
    std::uint64_t reverse_bra_sweeps = 0;
    std::uint64_t pauli_applications = 0;
};

/// Counters of the calling thread.
inline SimCounters &counters() noexcept {
    thread_local SimCounters c;
    return c;
}

inline void reset_counters() noexcept { counters() = SimCounters{}; }

} // namespace vqc
