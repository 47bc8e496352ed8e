#include <doctest.h>

#include "oracles.hpp"
#include "tsclust/errors.hpp"
#include "tsclust/softdtw.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace tsclust;
using Vec = std::vector<double>;

TEST_CASE("cost_matrix squared differences") {
    const auto c = cost_matrix(Vec{0, 1}, Vec{1, 3});
    CHECK(c(0, 0) == 1);
    CHECK(c(0, 1) == 9);
    CHECK(c(1, 0) == 0);
    CHECK(c(1, 1) == 4);

    const Vec x{0.3, -1.2, 2.5};
    const auto self = cost_matrix(x, x);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(self(i, i) == 0.0);

    std::mt19937_64 rng(3);
    const auto a = oracle::random_series(rng, 7), b = oracle::random_series(rng, 5);
    const auto got = cost_matrix(a, b);
    const auto want = oracle::squared_costs(a, b);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) CHECK(got(i, j) == doctest::Approx(want[i][j]).epsilon(1e-15));
}

TEST_CASE("soft_min") {
    CHECK(soft_min(Vec{1, 2}, 0.0) == 1.0);
    CHECK(soft_min(Vec{0, 0}, 1.0) == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
    CHECK(soft_min(Vec{0, 1, 1}, 1.0) == doctest::Approx(-std::log(1 + 2 * std::exp(-1.0))).epsilon(1e-15));
    CHECK(-std::log(1 + 2 * std::exp(-1.0)) == doctest::Approx(-0.551445).epsilon(1e-6));
    CHECK_THROWS_AS(soft_min(Vec{1, 2}, -0.1), ParameterError);
    CHECK_THROWS_AS(soft_min(Vec{}, 1.0), ParameterError);
    // Large values do not overflow thanks to the max shift.
    CHECK(soft_min(Vec{1e6, 1e6}, 1e-3) == doctest::Approx(1e6 - 1e-3 * std::log(2.0)));
}

TEST_CASE("dtw on hand examples") {
    const auto same = dtw(Vec{1, 2, 3}, Vec{1, 2, 3});
    CHECK(same.value == 0.0);
    const std::vector<AlignmentMatrix::Cell> diagonal{{0, 0}, {1, 1}, {2, 2}};
    CHECK(same.path.path() == diagonal);

    const auto single = dtw(Vec{0, 1}, Vec{1});
    CHECK(single.value == 1.0);
    CHECK(single.path.path().size() == 2);
}

TEST_CASE("dtw equals the exhaustive minimum and its path achieves it") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::size_t> len(1, 5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = oracle::random_series(rng, len(rng)), y = oracle::random_series(rng, len(rng));
        const auto costs = oracle::path_costs(x, y);
        const auto r = dtw(x, y);
        CHECK(r.value == *std::min_element(costs.begin(), costs.end()));
        CHECK(r.path.inner_product(cost_matrix(x, y)) == doctest::Approx(r.value).epsilon(1e-14));
    }
}

TEST_CASE("soft_dtw on hand examples") {
    const Vec x{0.5, -1.0, 2.0};
    CHECK(soft_dtw_value(x, x, 0.0) == 0.0);
    // Alignments of [0,1] with itself have costs {0, 1, 1}.
    CHECK(soft_dtw_value(Vec{0, 1}, Vec{0, 1}, 1.0) ==
          doctest::Approx(-std::log(1 + 2 * std::exp(-1.0))).epsilon(1e-14));
    CHECK_THROWS_AS(soft_dtw(x, x, -1.0), ParameterError);

    const auto eval = soft_dtw(x, Vec{1, 2}, 0.5);
    CHECK(eval.forward.rows() == 4);
    CHECK(eval.forward.cols() == 3);
    CHECK(eval.forward(0, 0) == 0.0);
    CHECK(std::isinf(eval.forward(0, 1)));
    CHECK(std::isinf(eval.forward(1, 0)));
}

TEST_CASE("soft_dtw matches the soft-min over enumerated alignments") {
    std::mt19937_64 rng(17);
    for (std::size_t tx = 1; tx <= 5; ++tx) {
        for (std::size_t ty = 1; ty <= 5; ++ty) {
            const auto x = oracle::random_series(rng, tx), y = oracle::random_series(rng, ty);
            const auto cost = cost_matrix(x, y);
            std::vector<double> inner;
            for (const auto& a : enumerate_alignments(tx, ty)) inner.push_back(a.inner_product(cost));
            for (double gamma : {0.01, 0.1, 1.0}) {
                CHECK(std::abs(soft_dtw_value(x, y, gamma) - oracle::brute_soft_min(inner, gamma)) < 1e-8);
            }
            CHECK(dtw(x, y).value == *std::min_element(inner.begin(), inner.end()));
        }
    }
}

TEST_CASE("soft_dtw properties") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<std::size_t> len(2, 12);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = oracle::random_series(rng, len(rng)), y = oracle::random_series(rng, len(rng));
        const double hard = dtw(x, y).value;
        double previous_gap = std::numeric_limits<double>::infinity();
        for (double gamma : {1.0, 0.1, 0.01, 0.001}) {
            const double v = soft_dtw_value(x, y, gamma);
            CHECK(std::abs(v - soft_dtw_value(y, x, gamma)) < 1e-10);
            CHECK(v <= hard);
            const double gap = hard - v;
            CHECK(gap <= previous_gap);
            previous_gap = gap;
            CHECK(soft_dtw_value(x, x, gamma) <= 0.0);
        }
        CHECK(soft_dtw_value(x, y, 0.0) == hard);
    }
}

TEST_CASE("gak") {
    CHECK(gak(Vec{0, 1}, Vec{0, 1}, 1.0) == doctest::Approx(1 + 2 * std::exp(-1.0)).epsilon(1e-14));
    CHECK(1 + 2 * std::exp(-1.0) == doctest::Approx(1.735759).epsilon(1e-6));
    CHECK(gak(Vec{0.7}, Vec{0.7}, 0.3) == doctest::Approx(1.0));
    CHECK_THROWS_AS(gak(Vec{0, 1}, Vec{0, 1}, 0.0), ParameterError);

    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = oracle::random_series(rng, 6, 0.5), y = oracle::random_series(rng, 4, 0.5);
        const double direct = oracle::gak_direct(x, y, 1.0);
        CHECK(std::abs(gak(x, y, 1.0) - direct) <= 1e-10 * direct);
    }
}

TEST_CASE("soft_dtw_grad on hand examples") {
    const auto zero = soft_dtw_grad(Vec{0, 0}, Vec{0, 0}, 0.01);
    CHECK(zero == Vec{0, 0});

    // Closed form for 2x2: f = c11 + c22 + softmin(0, c21, c12).
    const Vec x{0.3, -0.8}, y{1.1, 0.4};
    const double gamma = 0.7;
    const double c12 = std::pow(x[0] - y[1], 2), c21 = std::pow(x[1] - y[0], 2);
    const double z = 1 + std::exp(-c21 / gamma) + std::exp(-c12 / gamma);
    const double w12 = std::exp(-c12 / gamma) / z, w21 = std::exp(-c21 / gamma) / z;
    const Vec expected{2 * (x[0] - y[0]) + w12 * 2 * (x[0] - y[1]),
                       2 * (x[1] - y[1]) + w21 * 2 * (x[1] - y[0])};
    const auto g = soft_dtw_grad(x, y, gamma);
    CHECK(g[0] == doctest::Approx(expected[0]).epsilon(1e-12));
    CHECK(g[1] == doctest::Approx(expected[1]).epsilon(1e-12));
    CHECK_THROWS_AS(soft_dtw_grad(x, y, 0.0), ParameterError);
}

TEST_CASE("soft_dtw_grad matches finite differences") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<std::size_t> len(1, 10);
    for (int trial = 0; trial < 100; ++trial) {
        const double gamma = trial % 2 == 0 ? 0.1 : 1.0;
        const auto x = oracle::random_series(rng, len(rng)), y = oracle::random_series(rng, len(rng));
        const auto g = soft_dtw_grad(x, y, gamma);
        const auto fd = oracle::finite_difference(
            [&](std::span<const double> p) { return soft_dtw_value(p, y, gamma); }, x);
        CHECK(oracle::relative_error(g, fd) < 1e-4);

        const auto gy = soft_dtw_grad_y(x, y, gamma);
        const auto fdy = oracle::finite_difference(
            [&](std::span<const double> p) { return soft_dtw_value(x, p, gamma); }, y);
        CHECK(oracle::relative_error(gy, fdy) < 1e-4);
    }
}

TEST_CASE("expected alignment is a Gibbs average over alignments") {
    std::mt19937_64 rng(37);
    const auto x = oracle::random_series(rng, 4), y = oracle::random_series(rng, 3);
    const double gamma = 0.5;
    const auto cost = cost_matrix(x, y);
    const auto all = enumerate_alignments(4, 3);
    Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(4, 3);
    double z = 0.0;
    for (const auto& a : all) {
        const double w = std::exp(-a.inner_product(cost) / gamma);
        avg += w * a.dense();
        z += w;
    }
    avg /= z;
    const auto e = expected_alignment(soft_dtw(x, y, gamma));
    CHECK((e - avg).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("enumerate_alignments") {
    CHECK(enumerate_alignments(1, 1).size() == 1);
    CHECK(enumerate_alignments(2, 2).size() == 3);
    CHECK(enumerate_alignments(3, 3).size() == 13);  // central Delannoy D(2,2)
    CHECK(enumerate_alignments(8, 8).size() == 48639);
    CHECK(enumerate_alignments(1, 5).size() == 1);
    CHECK_THROWS_AS(enumerate_alignments(9, 2), ParameterError);
    CHECK_THROWS_AS(enumerate_alignments(0, 2), ParameterError);

    // Every enumerated path is distinct and a valid alignment.
    const auto all = enumerate_alignments(4, 5);
    std::set<std::vector<AlignmentMatrix::Cell>> unique;
    for (const auto& a : all) unique.insert(a.path());
    CHECK(unique.size() == all.size());
}
