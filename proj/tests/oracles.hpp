#pragma once

// Brute-force reference implementations the tests check the library
// against. These deliberately take the slow, obvious route and share no
// code with the implementations they verify.

#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "strokelab/matrix.hpp"

namespace oracles {

/// O(n^2) pairwise AUC: (wins + 0.5 ties) / (n_pos * n_neg).
inline double pairwise_auc(std::span<const int> y, std::span<const double> scores) {
    double wins = 0.0;
    double ties = 0.0;
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != 1) {
            continue;
        }
        ++n_pos;
        for (std::size_t j = 0; j < y.size(); ++j) {
            if (y[j] == 1) {
                continue;
            }
            if (scores[i] > scores[j]) {
                wins += 1.0;
            } else if (scores[i] == scores[j]) {
                ties += 1.0;
            }
        }
    }
    for (int v : y) {
        n_neg += (v != 1);
    }
    if (n_pos == 0 || n_neg == 0) {
        throw std::invalid_argument("pairwise_auc: single-class truth");
    }
    return (wins + 0.5 * ties) / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

/// Gauss-Jordan solve with partial pivoting; returns false when singular.
inline bool gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b,
                        std::vector<double>& x) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) {
                pivot = r;
            }
        }
        if (std::abs(a[pivot][col]) < 1e-12) {
            return false;
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        const double d = a[col][col];
        for (std::size_t c = 0; c < n; ++c) {
            a[col][c] /= d;
        }
        b[col] /= d;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0.0) {
                continue;
            }
            const double factor = a[r][col];
            for (std::size_t c = 0; c < n; ++c) {
                a[r][c] -= factor * a[col][c];
            }
            b[r] -= factor * b[col];
        }
    }
    x = b;
    return true;
}

/// OLS coefficients by normal equations + Gauss-Jordan.
inline bool ols(const strokelab::Matrix& design, const std::vector<double>& target,
                std::vector<double>& coef) {
    const std::size_t d = design.cols();
    std::vector<std::vector<double>> xtx(d, std::vector<double>(d, 0.0));
    std::vector<double> xty(d, 0.0);
    for (std::size_t r = 0; r < design.rows(); ++r) {
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                xtx[i][j] += design(r, i) * design(r, j);
            }
            xty[i] += design(r, i) * target[r];
        }
    }
    return gauss_solve(std::move(xtx), std::move(xty), coef);
}

/// VIF by explicit interceptful OLS of column j on the other columns.
inline std::vector<double> vif(const strokelab::Matrix& m) {
    const std::size_t d = m.cols();
    const std::size_t n = m.rows();
    std::vector<double> out(d);
    for (std::size_t j = 0; j < d; ++j) {
        strokelab::Matrix design(n, d);  // intercept + d-1 predictors
        std::vector<double> target(n);
        for (std::size_t r = 0; r < n; ++r) {
            design(r, 0) = 1.0;
            std::size_t col = 1;
            for (std::size_t c = 0; c < d; ++c) {
                if (c != j) {
                    design(r, col++) = m(r, c);
                }
            }
            target[r] = m(r, j);
        }
        std::vector<double> coef;
        if (!ols(design, target, coef)) {
            out[j] = std::numeric_limits<double>::infinity();
            continue;
        }
        double mean = 0.0;
        for (double v : target) {
            mean += v;
        }
        mean /= static_cast<double>(n);
        double tss = 0.0;
        double rss = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            double fit = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                fit += design(r, c) * coef[c];
            }
            rss += (target[r] - fit) * (target[r] - fit);
            tss += (target[r] - mean) * (target[r] - mean);
        }
        const double r2 = 1.0 - rss / tss;
        out[j] = r2 >= 1.0 - 1e-9 ? std::numeric_limits<double>::infinity() : 1.0 / (1.0 - r2);
    }
    return out;
}

/// Eigenpairs of a symmetric PSD matrix by power iteration with Hotelling
/// deflation. Values descending.
inline void power_eigen(strokelab::Matrix a, std::size_t count, std::vector<double>& values,
                        std::vector<std::vector<double>>& vectors) {
    const std::size_t n = a.rows();
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> normal(0.0, 1.0);
    values.clear();
    vectors.clear();
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<double> v(n);
        for (auto& x : v) {
            x = normal(rng);
        }
        double lambda = 0.0;
        for (int iter = 0; iter < 5000; ++iter) {
            std::vector<double> next(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    next[i] += a(i, j) * v[j];
                }
            }
            double norm = 0.0;
            for (double x : next) {
                norm += x * x;
            }
            norm = std::sqrt(norm);
            if (norm < 1e-300) {
                break;
            }
            for (auto& x : next) {
                x /= norm;
            }
            double diff = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                diff += std::abs(next[i] - v[i]);
            }
            v = next;
            lambda = norm;
            if (diff < 1e-13) {
                break;
            }
        }
        values.push_back(lambda);
        vectors.push_back(v);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= lambda * v[i] * v[j];
            }
        }
    }
}

/// Distance from point p to the segment [a, b].
inline double segment_distance(std::span<const double> p, std::span<const double> a,
                               std::span<const double> b) {
    double ab2 = 0.0;
    double ap_ab = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        ab2 += (b[i] - a[i]) * (b[i] - a[i]);
        ap_ab += (p[i] - a[i]) * (b[i] - a[i]);
    }
    const double t = ab2 > 0.0 ? std::clamp(ap_ab / ab2, 0.0, 1.0) : 0.0;
    double d2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double proj = a[i] + t * (b[i] - a[i]);
        d2 += (p[i] - proj) * (p[i] - proj);
    }
    return std::sqrt(d2);
}

}  // namespace oracles
