#include <doctest.h>

#include <cmath>

#include "linalg.hpp"

using namespace cutheat;

namespace {

double rnd01(unsigned& state) {
    state = state * 1664525u + 1013904223u;
    return (state >> 8) * (1.0 / 16777216.0);
}

SparseMatrix random_diag_dominant(int n, unsigned seed) {
    std::vector<Eigen::Triplet<double>> t;
    unsigned state = seed;
    for (int i = 0; i < n; ++i) {
        double offdiag = 0.0;
        for (int k = 0; k < 4; ++k) {
            const int j = static_cast<int>(rnd01(state) * n) % n;
            if (j == i) continue;
            const double v = rnd01(state) - 0.5;
            t.emplace_back(i, j, v);
            offdiag += std::abs(v);
        }
        t.emplace_back(i, i, offdiag + 1.0 + rnd01(state));
    }
    SparseMatrix A;
    A.set_from_triplets(n, n, t);
    return A;
}

}  // namespace

TEST_CASE("identity system") {
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < 5; ++i) t.emplace_back(i, i, 1.0);
    SparseMatrix A;
    A.set_from_triplets(5, 5, t);
    const std::vector<double> b = {1.0, -2.0, 0.5, 3.0, 0.0};
    const auto x = solve(A, b);
    for (int i = 0; i < 5; ++i) CHECK(x[i] == doctest::Approx(b[i]).epsilon(1e-14));
}

TEST_CASE("2x2 upper triangular system") {
    std::vector<Eigen::Triplet<double>> t = {{0, 0, 2.0}, {0, 1, 1.0}, {1, 1, 3.0}};
    SparseMatrix A;
    A.set_from_triplets(2, 2, t);
    const auto x = solve(A, {3.0, 3.0});
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("zero right-hand side yields the zero vector with residual 0") {
    SparseMatrix A = random_diag_dominant(20, 5u);
    double res = -1.0;
    const auto x = solve(A, std::vector<double>(20, 0.0), 1e-10, 20, &res);
    CHECK(res == 0.0);
    for (double v : x) CHECK(v == 0.0);
}

TEST_CASE("random 200x200 diagonally dominant system meets the residual contract") {
    SparseMatrix A = random_diag_dominant(200, 42u);
    unsigned state = 17u;
    std::vector<double> b(200);
    for (double& v : b) v = rnd01(state) - 0.5;
    double res = -1.0;
    const auto x = solve(A, b, 1e-10, 20, &res);
    CHECK(res <= 1e-10);

    // recompute the residual independently of the solver's report
    const auto ax = A.matvec(x);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 200; ++i) {
        num += (ax[i] - b[i]) * (ax[i] - b[i]);
        den += b[i] * b[i];
    }
    CHECK(std::sqrt(num / den) <= 1e-10);
}

TEST_CASE("matvec is linear") {
    SparseMatrix A = random_diag_dominant(50, 9u);
    unsigned state = 23u;
    std::vector<double> x(50), y(50);
    for (int i = 0; i < 50; ++i) {
        x[i] = rnd01(state) - 0.5;
        y[i] = rnd01(state) - 0.5;
    }
    const double alpha = 1.3, beta = -0.7;
    std::vector<double> combo(50);
    for (int i = 0; i < 50; ++i) combo[i] = alpha * x[i] + beta * y[i];
    const auto lhs = A.matvec(combo);
    const auto ax = A.matvec(x), ay = A.matvec(y);
    for (int i = 0; i < 50; ++i)
        CHECK(lhs[i] == doctest::Approx(alpha * ax[i] + beta * ay[i]).epsilon(1e-12));
}

TEST_CASE("transpose matvec matches the transposed action") {
    std::vector<Eigen::Triplet<double>> t = {{0, 1, 2.0}, {1, 0, -1.0}, {1, 1, 4.0}};
    SparseMatrix A;
    A.set_from_triplets(2, 2, t);
    const auto y = A.matvec_transpose({1.0, 1.0});
    CHECK(y[0] == doctest::Approx(-1.0));
    CHECK(y[1] == doctest::Approx(6.0));
}

TEST_CASE("solve-matvec round trip") {
    SparseMatrix A = random_diag_dominant(120, 77u);
    unsigned state = 31u;
    std::vector<double> x0(120);
    for (double& v : x0) v = rnd01(state) - 0.5;
    const auto b = A.matvec(x0);
    const auto x = solve(A, b, 1e-12, 20);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 120; ++i) {
        num += (x[i] - x0[i]) * (x[i] - x0[i]);
        den += x0[i] * x0[i];
    }
    CHECK(std::sqrt(num / den) <= 1e-7);
}

TEST_CASE("dimension mismatches are rejected") {
    SparseMatrix A = random_diag_dominant(4, 1u);
    CHECK_THROWS_AS(solve(A, std::vector<double>(5, 1.0)), std::invalid_argument);
}

TEST_CASE("duplicate triplets consolidate by summation") {
    std::vector<Eigen::Triplet<double>> t = {{0, 0, 1.0}, {0, 0, 2.5}, {1, 1, 1.0}};
    SparseMatrix A;
    A.set_from_triplets(2, 2, t);
    CHECK(A.nonzeros() == 2);
    const auto y = A.matvec({1.0, 1.0});
    CHECK(y[0] == doctest::Approx(3.5));
}
