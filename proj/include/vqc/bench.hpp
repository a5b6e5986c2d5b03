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
 * @file bench.hpp
 * Timing harness for batched forward/backward passes and the three-way
 * gradient agreement check. Timers wrap only the batch-engine calls;
 * circuit construction and parameter initialization are excluded.
 */
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "batch.hpp"
#include "circuit.hpp"
#include "error.hpp"
#include "gradients.hpp"
#include "observables.hpp"
#include "tensor.hpp"

namespace vqc::bench {

struct TimingStats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;

    static TimingStats from(const std::vector<double> &samples) {
        if (samples.empty()) {
            return {};
        }
        TimingStats s;
        s.min = *std::min_element(samples.begin(), samples.end());
        s.max = *std::max_element(samples.begin(), samples.end());
        double sum = 0.0;
        for (double v : samples) {
            sum += v;
        }
        s.mean = sum / static_cast<double>(samples.size());
        return s;
    }

    bool operator==(const TimingStats &) const = default;
};

inline double median(std::vector<double> v) {
    if (v.empty()) {
        return 0.0;
    }
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct BenchRecord {
    std::size_t qubits = 0;
    std::size_t depth = 0;
    std::size_t batch = 0;
    std::size_t observables = 0;
    std::string method;
    std::size_t threads = 1;
    TimingStats forward;
    TimingStats backward;
    TimingStats total;

    bool operator==(const BenchRecord &) const = default;
};

inline const char *kCsvHeader =
    "qubits,depth,batch,observables,method,threads,forward,forward_min,"
    "forward_max,backward,backward_min,backward_max,total,total_min,total_max";

/// Writes "# key=value" header comments, the column header and one row per
/// record. Values are printed with 17 significant digits.
inline void write_csv(std::ostream &out, const std::vector<BenchRecord> &records,
                      const std::vector<std::string> &comments = {}) {
    for (const auto &c : comments) {
        out << "# " << c << '\n';
    }
    out << kCsvHeader << '\n';
    out.precision(17);
    for (const auto &r : records) {
        out << r.qubits << ',' << r.depth << ',' << r.batch << ','
            << r.observables << ',' << r.method << ',' << r.threads << ','
            << r.forward.mean << ',' << r.forward.min << ',' << r.forward.max
            << ',' << r.backward.mean << ',' << r.backward.min << ','
            << r.backward.max << ',' << r.total.mean << ',' << r.total.min
            << ',' << r.total.max << '\n';
    }
}

inline std::vector<BenchRecord> read_csv(std::istream &in) {
    std::vector<BenchRecord> out;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (!header_seen) {
            if (line != kCsvHeader) {
                detail::raise<ParseError>("unexpected CSV header '", line, "'");
            }
            header_seen = true;
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            f.push_back(cell);
        }
        if (f.size() != 15) {
            detail::raise<ParseError>("CSV row has ", f.size(),
                                      " fields, expected 15");
        }
        BenchRecord r;
        try {
            r.qubits = std::stoul(f[0]);
            r.depth = std::stoul(f[1]);
            r.batch = std::stoul(f[2]);
            r.observables = std::stoul(f[3]);
            r.method = f[4];
            r.threads = std::stoul(f[5]);
            r.forward = {std::stod(f[6]), std::stod(f[7]), std::stod(f[8])};
            r.backward = {std::stod(f[9]), std::stod(f[10]), std::stod(f[11])};
            r.total = {std::stod(f[12]), std::stod(f[13]), std::stod(f[14])};
        } catch (const std::logic_error &) {
            detail::raise<ParseError>("malformed CSV row '", line, "'");
        }
        out.push_back(std::move(r));
    }
    return out;
}

struct BenchConfig {
    std::size_t qubits = 4;
    std::size_t depth = 3;
    std::size_t batch = 48;
    /// Unset: one single-qubit Z per qubit.
    std::optional<std::size_t> observables;
    GradientMethod method = GradientMethod::Adjoint;
    /// Unset: engine default (VQC_NUM_THREADS or physical cores).
    std::optional<std::size_t> threads;
    std::size_t repeats = 10;
    std::uint64_t seed = 42;
    bool compare_naive = false;
    /// Replaces the generated ansatz when set.
    std::shared_ptr<const Circuit> circuit;
    std::vector<Observable> circuit_observables;
};

/// Problem instance shared by the benchmark and training front ends.
struct Workload {
    std::shared_ptr<const Circuit> circuit;
    std::vector<Observable> observables;
    std::string encoding_set;
    Binding trainable;
    std::vector<std::string> trainable_sets;
    Matrix inputs;
};

/// Builds the ansatz (or takes config.circuit), draws trainable values
/// uniform(0, 2pi) and inputs uniform(-1, 1) from config.seed.
inline Workload make_workload(const BenchConfig &config) {
    Workload w;
    if (config.circuit) {
        w.circuit = config.circuit;
    } else {
        w.circuit = std::make_shared<const Circuit>(build_reuploading_ansatz(
            config.qubits, config.depth, config.qubits));
    }
    const Circuit &c = *w.circuit;
    const std::size_t m = config.observables.value_or(c.num_qubits());
    if (!config.circuit_observables.empty() && !config.observables) {
        w.observables = config.circuit_observables;
    } else {
        w.observables = single_qubit_z(m, c.num_qubits());
    }
    std::mt19937_64 rng(config.seed);
    auto uniform = [&](double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    std::optional<std::size_t> enc;
    for (std::size_t i = 0; i < c.parameter_sets().size(); ++i) {
        const auto &s = c.parameter_sets()[i];
        if (s.role == ParameterRole::Encoding) {
            if (enc) {
                throw ArgumentError(
                    "benchmark circuits need exactly one encoding set");
            }
            enc = i;
            continue;
        }
        std::vector<double> v(s.size);
        for (auto &x : v) {
            x = uniform(0.0, 2 * std::numbers::pi);
        }
        w.trainable.emplace(s.name, std::move(v));
        w.trainable_sets.push_back(s.name);
    }
    if (!enc) {
        throw ArgumentError("benchmark circuits need exactly one encoding set");
    }
    w.encoding_set = c.parameter_sets()[*enc].name;
    w.inputs = Matrix(config.batch, c.parameter_sets()[*enc].size);
    for (auto &x : w.inputs.data()) {
        x = uniform(-1.0, 1.0);
    }
    return w;
}

inline BatchRequest make_request(const Workload &w, bool with_gradients,
                                 const GradientOptions &options,
                                 std::size_t threads) {
    BatchRequest req;
    req.circuit = w.circuit;
    req.observables = w.observables;
    req.trainable_values = w.trainable;
    req.encoding_set = w.encoding_set;
    req.inputs = w.inputs;
    if (with_gradients) {
        req.wrt = w.trainable_sets;
    }
    req.gradient = options;
    req.threads = threads;
    return req;
}

template <class F> double time_seconds(F &&f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

enum class Variant {
    /// Single evolution per input for all observables.
    Joint,
    /// One evolution (forward) or one gradient call (backward) per observable.
    PerObservable,
};

/// Times `repeats` forward and backward passes of the workload.
inline BenchRecord time_workload(const Workload &w, const BenchConfig &config,
                                 std::size_t threads, Variant variant,
                                 const std::string &label) {
    BatchEngine engine(threads);
    GradientOptions opts;
    opts.method = config.method;
    opts.seed = config.seed;
    std::vector<double> fwd;
    std::vector<double> bwd;
    std::vector<double> tot;
    for (std::size_t r = 0; r < config.repeats; ++r) {
        double tf = 0.0;
        double tb = 0.0;
        if (variant == Variant::Joint) {
            const auto freq = make_request(w, false, opts, threads);
            const auto breq = make_request(w, true, opts, threads);
            tf = time_seconds([&] { engine.run(freq); });
            tb = time_seconds([&] { engine.run(breq); });
        } else {
            auto freq = make_request(w, false, opts, threads);
            freq.forward_mode = ForwardMode::PerObservable;
            tf = time_seconds([&] { engine.run(freq); });
            std::vector<BatchRequest> per_obs;
            for (const auto &obs : w.observables) {
                auto req = make_request(w, true, opts, threads);
                req.observables = {obs};
                per_obs.push_back(std::move(req));
            }
            tb = time_seconds([&] {
                for (const auto &req : per_obs) {
                    engine.run(req);
                }
            });
        }
        fwd.push_back(tf);
        bwd.push_back(tb);
        tot.push_back(tf + tb);
    }
    BenchRecord rec;
    rec.qubits = w.circuit->num_qubits();
    rec.depth = config.circuit ? 0 : config.depth;
    rec.batch = w.inputs.rows();
    rec.observables = w.observables.size();
    rec.method = label;
    rec.threads = threads;
    rec.forward = TimingStats::from(fwd);
    rec.backward = TimingStats::from(bwd);
    rec.total = TimingStats::from(tot);
    return rec;
}

struct BenchReport {
    std::vector<BenchRecord> records;
    /// Present with compare_naive: per-observable / joint, both sequential.
    std::optional<double> forward_improvement;
    std::optional<double> backward_improvement;
    /// Present with compare_naive: sequential / parallel total time.
    std::optional<double> parallel_speedup;
};

inline BenchReport run_bench(const BenchConfig &config) {
    if (config.repeats < 1) {
        throw ArgumentError("repeats must be >= 1");
    }
    const auto w = make_workload(config);
    const std::size_t threads = config.threads.value_or(default_thread_count());
    const std::string method(to_string(config.method));
    BenchReport report;
    report.records.push_back(
        time_workload(w, config, threads, Variant::Joint, method));
    if (config.compare_naive) {
        const auto seq =
            time_workload(w, config, 1, Variant::Joint, method + "[seq]");
        const auto naive = time_workload(w, config, 1, Variant::PerObservable,
                                         method + "[naive-seq]");
        report.forward_improvement = naive.forward.mean / seq.forward.mean;
        report.backward_improvement = naive.backward.mean / seq.backward.mean;
        report.parallel_speedup =
            seq.total.mean / report.records.front().total.mean;
        report.records.push_back(seq);
        report.records.push_back(naive);
    }
    return report;
}

struct GradCheckConfig {
    std::size_t qubits = 4;
    std::size_t depth = 2;
    std::optional<std::size_t> observables;
    /// adjoint / param-shift: exact three-way check; spsa: stochastic check.
    GradientMethod method = GradientMethod::Adjoint;
    std::uint64_t seed = 42;
    std::size_t spsa_samples = 2000;
    double spsa_c = 0.01;
    /// Negates the adjoint gradients (negative control).
    bool inject_fault = false;
};

struct GradCheckEntry {
    std::string comparison;
    std::string set;
    std::size_t observable = 0;
    std::size_t index = 0;
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
};

struct GradCheckReport {
    bool passed = true;
    std::size_t compared = 0;
    double max_adjoint_vs_shift = 0.0;
    double max_vs_finite_difference = 0.0;
    std::vector<GradCheckEntry> failures;
};

/// Three-way agreement on one random re-uploading instance:
/// adjoint vs parameter shift within 1e-9, both vs central differences
/// (h = 1e-4) within 1e-5. In SPSA mode, the estimate averaged over
/// `spsa_samples` directions must satisfy |est - adjoint| <=
/// 0.1 * max(1, |adjoint|) on components with |adjoint| > 0.1.
inline GradCheckReport run_grad_check(const GradCheckConfig &config) {
    if (config.qubits < 1 || config.qubits > 10) {
        throw ArgumentError("grad-check supports 1..10 qubits");
    }
    const auto circuit =
        build_reuploading_ansatz(config.qubits, config.depth, config.qubits);
    const auto observables = single_qubit_z(
        config.observables.value_or(config.qubits), config.qubits);
    std::mt19937_64 rng(config.seed);
    auto uniform = [&](double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    Binding binding;
    std::vector<std::string> wrt;
    for (const auto &s : circuit.parameter_sets()) {
        std::vector<double> v(s.size);
        for (auto &x : v) {
            x = s.name == "s"        ? uniform(-1.0, 1.0)
                : s.name == "lambda" ? uniform(0.5, 1.5)
                                     : uniform(0.0, 2 * std::numbers::pi);
        }
        binding.emplace(s.name, std::move(v));
        if (config.method != GradientMethod::Spsa ||
            s.role == ParameterRole::Trainable) {
            wrt.push_back(s.name);
        }
    }

    auto adjoint = adjoint_gradients(circuit, binding, observables, wrt);
    if (config.inject_fault) {
        for (auto &[name, m] : adjoint.gradients) {
            for (auto &v : m.data()) {
                v = -v;
            }
        }
    }

    GradCheckReport report;
    auto compare = [&](const std::string &label, const GradientResult &expected,
                       const GradientResult &actual, double tol, bool relative,
                       double *max_diff) {
        for (const auto &[name, em] : expected.gradients) {
            const auto &am = actual.gradients.at(name);
            for (std::size_t i = 0; i < em.rows(); ++i) {
                for (std::size_t p = 0; p < em.cols(); ++p) {
                    const double e = em(i, p);
                    const double a = am(i, p);
                    if (relative && std::abs(e) <= 0.1) {
                        continue;
                    }
                    const double t =
                        relative ? tol * std::max(1.0, std::abs(e)) : tol;
                    const double diff = std::abs(e - a);
                    ++report.compared;
                    if (max_diff) {
                        *max_diff = std::max(*max_diff, diff);
                    }
                    if (!(diff <= t)) {
                        report.passed = false;
                        report.failures.push_back({label, name, i, p, e, a, t});
                    }
                }
            }
        }
    };

    if (config.method == GradientMethod::Spsa) {
        const auto spsa =
            spsa_gradients(circuit, binding, observables, wrt, config.spsa_c,
                           config.spsa_samples, config.seed);
        compare("spsa-vs-adjoint", adjoint, spsa, 0.1, true, nullptr);
        return report;
    }
    const auto shift =
        parameter_shift_gradients(circuit, binding, observables, wrt);
    const auto fd =
        finite_difference_gradients(circuit, binding, observables, wrt, 1e-4);
    compare("adjoint-vs-param-shift", shift, adjoint, 1e-9, false,
            &report.max_adjoint_vs_shift);
    compare("adjoint-vs-finite-difference", fd, adjoint, 1e-5, false,
            &report.max_vs_finite_difference);
    compare("param-shift-vs-finite-difference", fd, shift, 1e-5, false,
            &report.max_vs_finite_difference);
    return report;
}

} // namespace vqc::bench
