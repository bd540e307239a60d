#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "strokelab/metrics.hpp"

using namespace strokelab;

TEST_CASE("perfect predictions") {
    const std::vector<int> y = {0, 1, 1, 0, 1};
    const auto r = metrics::compute_metrics(y, y);
    CHECK(r.accuracy == 1.0);
    CHECK(r.f1 == 1.0);
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 1.0);
}

TEST_CASE("all-negative predictions on 92% negative data") {
    std::vector<int> y(100, 0);
    for (int i = 0; i < 8; ++i) {
        y[i] = 1;
    }
    const std::vector<int> pred(100, 0);
    const auto r = metrics::compute_metrics(y, pred);
    CHECK(r.accuracy == doctest::Approx(0.92));
    CHECK(r.f1 == 0.0);
    CHECK(r.precision == 0.0);
    CHECK(r.recall == 0.0);
}

TEST_CASE("confusion arithmetic tp=2 fp=1 fn=2") {
    const std::vector<int> y = {1, 1, 1, 1, 0, 0};
    const std::vector<int> pred = {1, 1, 0, 0, 1, 0};
    const auto r = metrics::compute_metrics(y, pred);
    CHECK(r.counts.tp == 2);
    CHECK(r.counts.fp == 1);
    CHECK(r.counts.fn == 2);
    CHECK(r.precision == doctest::Approx(2.0 / 3.0));
    CHECK(r.recall == doctest::Approx(0.5));
    CHECK(r.f1 == doctest::Approx(4.0 / 7.0));
}

TEST_CASE("compute_metrics rejects bad input") {
    const std::vector<int> y = {1};
    CHECK_THROWS(metrics::compute_metrics({}, {}));
    CHECK_THROWS(metrics::compute_metrics(y, std::vector<int>{1, 0}));
}

TEST_CASE("label swap exchanges precision and recall roles") {
    const std::vector<int> y = {1, 1, 1, 0, 0, 0, 0};
    const std::vector<int> pred = {1, 0, 0, 1, 1, 0, 0};
    const auto r = metrics::compute_metrics(y, pred);
    std::vector<int> y_sw(y.size());
    std::vector<int> pred_sw(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        y_sw[i] = 1 - y[i];
        pred_sw[i] = 1 - pred[i];
    }
    const auto s = metrics::compute_metrics(y_sw, pred_sw);
    // tp of the swapped problem is tn of the original.
    CHECK(s.counts.tp == r.counts.tn);
    CHECK(s.counts.fp == r.counts.fn);
    CHECK(s.counts.fn == r.counts.fp);
    CHECK(s.accuracy == doctest::Approx(r.accuracy));
}

TEST_CASE("roc_auc worked example") {
    const std::vector<int> y = {0, 0, 1, 1};
    const std::vector<double> s = {0.1, 0.4, 0.35, 0.8};
    CHECK(metrics::roc_auc(y, s) == doctest::Approx(0.75));
}

TEST_CASE("roc_auc perfect ranking and all ties") {
    const std::vector<int> y = {0, 0, 1, 1, 1};
    CHECK(metrics::roc_auc(y, std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5}) == 1.0);
    CHECK(metrics::roc_auc(y, std::vector<double>(5, 0.7)) == 0.5);
}

TEST_CASE("roc_auc undefined for single-class truth") {
    const std::vector<int> y = {1, 1, 1};
    const std::vector<double> s = {0.1, 0.2, 0.3};
    CHECK_THROWS(metrics::roc_auc(y, s));
}

TEST_CASE("roc_auc equals the pairwise oracle on random instances") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<int> size_dist(2, 100);
        const int n = size_dist(rng);
        std::vector<int> y(n);
        std::vector<double> s(n);
        bool has_pos = false;
        bool has_neg = false;
        std::uniform_int_distribution<int> coin(0, 1);
        std::uniform_int_distribution<int> quant(0, 9);
        for (int i = 0; i < n; ++i) {
            y[i] = coin(rng);
            s[i] = quant(rng) / 10.0;  // coarse grid forces ties
            has_pos |= y[i] == 1;
            has_neg |= y[i] == 0;
        }
        if (!has_pos || !has_neg) {
            continue;
        }
        CHECK(metrics::roc_auc(y, s) == oracles::pairwise_auc(y, s));
    }
}

TEST_CASE("roc_auc invariances") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<int> y(60);
    std::vector<double> s(60);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = i % 3 == 0 ? 1 : 0;
        s[i] = u(rng);
    }
    const double base = metrics::roc_auc(y, s);

    std::vector<double> transformed(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        transformed[i] = std::exp(3.0 * s[i]) + 5.0;  // strictly increasing
    }
    CHECK(metrics::roc_auc(y, transformed) == doctest::Approx(base).epsilon(1e-12));

    std::vector<double> negated(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        negated[i] = -s[i];
    }
    CHECK(metrics::roc_auc(y, s) + metrics::roc_auc(y, negated) == doctest::Approx(1.0));
}

TEST_CASE("metrics report serializes to json") {
    const std::vector<int> y = {1, 0, 1};
    const std::vector<int> pred = {1, 0, 0};
    auto r = metrics::compute_metrics(y, pred);
    r.auc = 0.75;
    const std::string json = r.to_json();
    CHECK(json.find("\"f1\"") != std::string::npos);
    CHECK(json.find("\"tp\":1") != std::string::npos);
}
