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
#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include <catch_amalgamated.hpp>

#include <vqc/vqc.hpp>

using namespace vqc;
using namespace vqc::tasks;

namespace {

QuantumModule classifier_module(std::size_t classes, std::uint64_t seed) {
    auto c = std::make_shared<const Circuit>(build_reuploading_ansatz(4, 2, 4));
    return init_module(c, single_qubit_z(classes, 4), "s", reuploading_specs(),
                       seed);
}

} // namespace

TEST_CASE("parse_dataset examples") {
    std::istringstream four("0.1,0.2,0\n0.3,0.4,1\n-0.5,0.6,1\n0.7,-0.8,0\n");
    const auto d = parse_dataset(four, 1);
    CHECK(d.size() == 4);
    CHECK(d.num_features() == 2);
    CHECK(d.num_classes == 2);
    CHECK(d.features(2, 0) == -0.5);
    CHECK(d.labels == std::vector<int>{0, 1, 1, 0});

    std::istringstream empty("");
    CHECK_THROWS_AS(parse_dataset(empty, 1), ParseError);
    std::istringstream only_comments("# nothing\n\n");
    CHECK_THROWS_AS(parse_dataset(only_comments, 1), ParseError);
}

TEST_CASE("dataset split is deterministic, disjoint and covering") {
    const auto a = make_blobs(20, 3, 2, 1.0, 0.5, 9);
    const auto b = make_blobs(20, 3, 2, 1.0, 0.5, 9);
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);
    CHECK(a.train.size() == 32);
    CHECK(a.test.size() == 8);
    std::set<std::size_t> all(a.train.begin(), a.train.end());
    all.insert(a.test.begin(), a.test.end());
    CHECK(all.size() == 40);
    CHECK(*all.rbegin() == 39);
    for (int label : a.labels) {
        CHECK((label >= 0 && label < 2));
    }
    auto c = a;
    split_dataset(c, 10);
    CHECK_FALSE(c.train == a.train);
}

TEST_CASE("parse_dataset formats and errors") {
    std::istringstream header("f1;f2;label\n1;2;0\n3;4;2\n");
    const auto h = parse_dataset(header, 0);
    CHECK(h.size() == 2);
    CHECK(h.num_classes == 3);
    std::istringstream mixed("# comment\n1 2 0\n\n3\t4\t1\n");
    CHECK(parse_dataset(mixed, 0).size() == 2);
    std::istringstream spaces("1  2 0\n3 4   1\n");
    CHECK(parse_dataset(spaces, 0).size() == 2);
    std::istringstream tabs("1\t2\t0\n3\t4\t1\n");
    CHECK(parse_dataset(tabs, 0).size() == 2);

    for (const char *bad : {"1,2,0\n1,0\n", "1,2,0\n1,x,0\n",
                            "1,2,0.5\n", "1,2,-1\n", "1\n"}) {
        std::istringstream in(bad);
        CHECK_THROWS_AS(parse_dataset(in, 0), ParseError);
    }
    CHECK_THROWS_AS(load_dataset("/nonexistent/data.csv", 0), IoError);
}

TEST_CASE("write_dataset round-trips") {
    const auto a = make_blobs(5, 2, 3, 1.0, 0.3, 4);
    std::stringstream buf;
    write_dataset(buf, a);
    const auto b = parse_dataset(buf, 4);
    CHECK(b.features == a.features);
    CHECK(b.labels == a.labels);
}

TEST_CASE("softmax and cross-entropy") {
    const auto p = softmax(std::vector<double>{1.0, 2.0, 3.0});
    CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) <= 1e-15);
    CHECK(p[2] > p[1]);
    const auto big = softmax(std::vector<double>{1000.0, 1000.0});
    CHECK(big[0] == 0.5);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix logits(6, 3);
    for (auto &v : logits.data()) {
        v = u(rng);
    }
    const std::vector<int> labels{0, 1, 2, 2, 1, 0};
    const auto ce = cross_entropy(logits, labels);
    for (std::size_t b = 0; b < 6; ++b) {
        const auto row = ce.upstream.row(b);
        CHECK(std::abs(std::accumulate(row.begin(), row.end(), 0.0)) <= 1e-12);
    }
    // Finite-difference check of the logit gradient.
    const double h = 1e-6;
    for (std::size_t i = 0; i < logits.data().size(); ++i) {
        auto plus = logits;
        auto minus = logits;
        plus.data()[i] += h;
        minus.data()[i] -= h;
        const double fd = (cross_entropy(plus, labels).loss -
                           cross_entropy(minus, labels).loss) /
                          (2 * h);
        CHECK(std::abs(fd - ce.upstream.data()[i]) <= 1e-8);
    }
    CHECK_THROWS_AS(cross_entropy(logits, std::vector<int>{0}), ShapeError);
    CHECK_THROWS_AS(cross_entropy(logits, std::vector<int>{0, 1, 2, 3, 0, 0}),
                    ShapeError);
}

TEST_CASE("cart-pole examples") {
    CartPoleEnv env;
    env.set_state({0, 0, 0, 0});
    const auto right = env.step(1);
    CHECK(right.state[1] > 0.0);
    CHECK(right.reward == 1.0);
    CHECK_FALSE(right.terminated);

    CartPoleEnv left;
    left.set_state({0, 0, 0, 0});
    const auto l = left.step(0);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(l.state[k] == -right.state[k]);
    }

    CartPoleEnv tilted;
    tilted.set_state({0, 0, 13.0 * std::numbers::pi / 180.0, 0});
    CHECK(tilted.terminated());
    CHECK_THROWS_AS(tilted.step(0), StateError);
    CHECK_THROWS_AS(env.step(2), ArgumentError);
}

TEST_CASE("cart-pole terminates on position and step limits") {
    CartPoleEnv off;
    off.set_state({2.5, 0, 0, 0});
    CHECK(off.terminated());

    CartPoleEnv env;
    env.set_state({0, 0, 0, 0});
    std::size_t steps = 0;
    // Alternating pushes keep the pole up long enough to hit either limit.
    while (!env.terminated()) {
        env.step(static_cast<int>(steps % 2));
        ++steps;
    }
    CHECK(steps <= CartPoleEnv::kStepLimit);
    CHECK(env.steps() == steps);
}

TEST_CASE("cart-pole is deterministic per seed and action sequence") {
    auto trajectory = [](std::uint64_t seed) {
        CartPoleEnv env;
        std::mt19937_64 rng(seed);
        env.reset(rng);
        std::vector<CartPoleState> out{env.state()};
        for (int t = 0; t < 20 && !env.terminated(); ++t) {
            out.push_back(env.step(t % 3 == 0 ? 1 : 0).state);
        }
        return out;
    };
    CHECK(trajectory(3) == trajectory(3));
    CHECK_FALSE(trajectory(3) == trajectory(4));
    const auto start = trajectory(5).front();
    for (double v : start) {
        CHECK(std::abs(v) <= 0.05);
    }
}

TEST_CASE("returns-to-go and policy-gradient rows") {
    CHECK(returns_to_go(std::vector<double>{1, 1, 1}, 1.0) ==
          std::vector<double>{3, 2, 1});
    const auto g = returns_to_go(std::vector<double>{1, 1, 1}, 0.5);
    CHECK(g == std::vector<double>{1.75, 1.5, 1.0});
    const auto row =
        policy_gradient_row(std::vector<double>{0.3, 0.7}, 1, 2.5);
    CHECK(std::abs(row[0] + row[1]) <= 1e-12);
    CHECK(row[1] == Catch::Approx(0.75));
    for (double v : encode_state({100.0, -100.0, 0.0, 1.0})) {
        CHECK(std::abs(v) < std::numbers::pi / 2);
    }
}

TEST_CASE("classifier loss descends under small-rate full-batch SGD") {
    auto data = make_blobs(20, 4, 2, 1.5, 0.3, 2);
    auto module = classifier_module(2, 3);
    auto opt = Optimizer::sgd(1e-3);
    ClassifierConfig cfg;
    cfg.epochs = 20;
    cfg.batch_size = data.train.size();
    cfg.seed = 4;
    const auto log = train_classifier(data, module, opt, cfg);
    REQUIRE(log.size() == 20);
    std::size_t rises = 0;
    for (std::size_t e = 1; e < log.size(); ++e) {
        rises += log[e].loss > log[e - 1].loss ? 1 : 0;
    }
    CHECK(rises <= 2);
    CHECK(log.back().loss < log.front().loss);
}

TEST_CASE("classifier training is deterministic per seed") {
    auto data = make_blobs(12, 4, 2, 1.0, 0.5, 5);
    auto run = [&](std::uint64_t seed) {
        auto module = classifier_module(2, 6);
        auto opt = Optimizer::adam(0.01);
        ClassifierConfig cfg;
        cfg.epochs = 3;
        cfg.batch_size = 8;
        cfg.seed = seed;
        return train_classifier(data, module, opt, cfg);
    };
    CHECK(run(7) == run(7));
    CHECK_FALSE(run(7) == run(8));
}

TEST_CASE("classifier validates shapes") {
    auto data = make_blobs(5, 4, 3, 1.0, 0.5, 5);
    auto two = classifier_module(2, 1);
    auto opt = Optimizer::adam(0.01);
    CHECK_THROWS_AS(train_classifier(data, two, opt, {}), ShapeError);
    auto narrow = make_blobs(5, 3, 2, 1.0, 0.5, 5);
    CHECK_THROWS_AS(train_classifier(narrow, two, opt, {}), ShapeError);
}

TEST_CASE("REINFORCE runs deterministically and logs returns") {
    auto run = [](std::uint64_t seed) {
        auto c = std::make_shared<const Circuit>(
            build_reuploading_ansatz(4, 1, 4));
        auto policy = init_module(c, default_policy_observables(4), "s",
                                  reuploading_specs(), seed);
        auto opt = Optimizer::adam(0.01, {{"theta", 0.01}, {"lambda", 0.1}});
        ReinforceConfig cfg;
        cfg.epochs = 2;
        cfg.episodes_per_epoch = 2;
        cfg.seed = seed;
        return train_reinforce(policy, opt, cfg);
    };
    const auto a = run(1);
    REQUIRE(a.size() == 2);
    CHECK(a == run(1));
    for (const auto &r : a) {
        CHECK(r.metric >= 1.0);
        CHECK(r.metric <= 500.0);
    }
    const auto obs = default_policy_observables(4);
    REQUIRE(obs.size() == 2);
    CHECK(obs[0].terms()[0].coefficient == 1.0);
    CHECK(obs[1].terms()[0].coefficient == -1.0);
}

TEST_CASE("training log CSV") {
    std::ostringstream out;
    write_log_csv(out, {{1, 0.5, 0.25}, {2, 0.4, 0.5}});
    CHECK(out.str() == "epoch,loss,metric\n1,0.5,0.25\n2,0.40000000000000002,0.5\n");
}
