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
 * @file thread_pool.hpp
 * Fixed-size pool that runs one indexed job per worker and joins on a
 * barrier. Workers are spawned once and reused across calls.
 */
#pragma once

#include <algorithm>
#include <condition_variable>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#if defined(__linux__)
#include <sched.h>
#endif

namespace vqc {

class ThreadPool {
  public:
    explicit ThreadPool(std::size_t num_threads)
        : size_(std::max<std::size_t>(1, num_threads)) {
        workers_.reserve(size_);
        for (std::size_t w = 0; w < size_; ++w) {
            workers_.emplace_back([this, w] { worker_loop(w); });
        }
    }

    ThreadPool(const ThreadPool &) = delete;
    ThreadPool &operator=(const ThreadPool &) = delete;

    ~ThreadPool() {
        {
            std::lock_guard lock(mutex_);
            stopping_ = true;
        }
        start_cv_.notify_all();
        for (auto &t : workers_) {
            t.join();
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return size_; }

    /// Runs job(w) on worker w for w in [0, size()) and blocks until all
    /// return. The first exception thrown by any job is rethrown here.
    void run(const std::function<void(std::size_t)> &job) {
        std::unique_lock lock(mutex_);
        job_ = &job;
        remaining_ = size_;
        error_ = nullptr;
        ++generation_;
        start_cv_.notify_all();
        done_cv_.wait(lock, [this] { return remaining_ == 0; });
        job_ = nullptr;
        if (error_) {
            std::rethrow_exception(std::exchange(error_, nullptr));
        }
    }

  private:
    void worker_loop(std::size_t w) {
        std::size_t seen = 0;
        for (;;) {
            const std::function<void(std::size_t)> *job = nullptr;
            {
                std::unique_lock lock(mutex_);
                start_cv_.wait(lock, [&] {
                    return stopping_ || generation_ != seen;
                });
                if (stopping_) {
                    return;
                }
                seen = generation_;
                job = job_;
            }
            std::exception_ptr err;
            try {
                (*job)(w);
            } catch (...) {
                err = std::current_exception();
            }
            std::lock_guard lock(mutex_);
            if (err && !error_) {
                error_ = err;
            }
            if (--remaining_ == 0) {
                done_cv_.notify_one();
            }
        }
    }

    std::size_t size_;
    std::vector<std::thread> workers_;
    std::mutex mutex_;
    std::condition_variable start_cv_;
    std::condition_variable done_cv_;
    const std::function<void(std::size_t)> *job_ = nullptr;
    std::size_t remaining_ = 0;
    std::size_t generation_ = 0;
    bool stopping_ = false;
    std::exception_ptr error_;
};

/// CPUs this process may run on.
inline std::size_t available_cpus() {
#if defined(__linux__)
    cpu_set_t set;
    CPU_ZERO(&set);
    if (sched_getaffinity(0, sizeof(set), &set) == 0) {
        return std::max(1, CPU_COUNT(&set));
    }
#endif
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Physical cores (hyperthread siblings counted once), capped by the
/// process affinity mask.
inline std::size_t physical_core_count() {
    std::size_t cores = 0;
#if defined(__linux__)
    std::ifstream cpuinfo("/proc/cpuinfo");
    std::set<std::pair<std::string, std::string>> seen;
    std::string line;
    std::string physical_id = "0";
    while (std::getline(cpuinfo, line)) {
        const auto colon = line.find(':');
        if (colon == std::string::npos) {
            continue;
        }
        auto key = line.substr(0, line.find_last_not_of(" \t", colon - 1) + 1);
        auto value = colon + 2 <= line.size() ? line.substr(colon + 2) : "";
        if (key == "physical id") {
            physical_id = value;
        } else if (key == "core id") {
            seen.emplace(physical_id, value);
        }
    }
    cores = seen.size();
#endif
    if (cores == 0) {
        cores = std::max(1u, std::thread::hardware_concurrency());
    }
    return std::min(cores, available_cpus());
}

/// Worker count used when none is requested: VQC_NUM_THREADS if set to a
/// positive integer, otherwise the physical core count.
inline std::size_t default_thread_count() {
    if (const char *env = std::getenv("VQC_NUM_THREADS")) {
        char *end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    return physical_core_count();
}

} // namespace vqc
