#include "strokelab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace strokelab {

SymmetricEigen symmetric_eigen(const Matrix& a, int max_sweeps) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("symmetric_eigen: matrix not square");
    }
    const std::size_t n = a.rows();
    Matrix d = a;
    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        v(i, i) = 1.0;
    }

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += d(p, q) * d(p, q);
            }
        }
        if (off < 1e-24) {
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = d(p, q);
                if (std::abs(apq) < 1e-300) {
                    continue;
                }
                const double theta = (d(q, q) - d(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double dkp = d(k, p);
                    const double dkq = d(k, q);
                    d(k, p) = c * dkp - s * dkq;
                    d(k, q) = s * dkp + c * dkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double dpk = d(p, k);
                    const double dqk = d(q, k);
                    d(p, k) = c * dpk - s * dqk;
                    d(q, k) = s * dpk + c * dqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return d(i, i) > d(j, j); });

    SymmetricEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        out.values[r] = d(order[r], order[r]);
        for (std::size_t k = 0; k < n; ++k) {
            out.vectors(r, k) = v(k, order[r]);
        }
    }
    return out;
}

std::vector<double> solve_spd(const Matrix& a, const std::vector<double>& b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) {
        throw std::invalid_argument("solve_spd: dimension mismatch");
    }
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                s -= l(i, k) * l(j, k);
            }
            if (i == j) {
                if (s <= 0.0 || !std::isfinite(s)) {
                    throw std::runtime_error("solve_spd: matrix not positive definite");
                }
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) {
            s -= l(i, k) * y[k];
        }
        y[i] = s / l(i, i);
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = y[i];
        for (std::size_t k = i + 1; k < n; ++k) {
            s -= l(k, i) * x[k];
        }
        x[i] = s / l(i, i);
    }
    return x;
}

LeastSquaresResult least_squares(const Matrix& x, const std::vector<double>& y,
                                 double ridge_fallback) {
    if (x.rows() != y.size()) {
        throw std::invalid_argument("least_squares: row count mismatch");
    }
    const std::size_t d = x.cols();
    Matrix xtx = matmul_at(x, x);
    std::vector<double> xty(d, 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        auto row = x.row(r);
        for (std::size_t c = 0; c < d; ++c) {
            xty[c] += row[c] * y[r];
        }
    }
    LeastSquaresResult out;
    try {
        out.coefficients = solve_spd(xtx, xty);
        return out;
    } catch (const std::runtime_error&) {
        for (std::size_t i = 0; i < d; ++i) {
            xtx(i, i) += ridge_fallback;
        }
        out.coefficients = solve_spd(xtx, xty);
        out.used_ridge_fallback = true;
        return out;
    }
}

Matrix covariance_matrix(const Matrix& x, const std::vector<double>& means) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (n < 2) {
        throw std::invalid_argument("covariance_matrix: need at least 2 rows");
    }
    Matrix cov(d, d);
    for (std::size_t r = 0; r < n; ++r) {
        auto row = x.row(r);
        for (std::size_t i = 0; i < d; ++i) {
            const double di = row[i] - means[i];
            for (std::size_t j = i; j < d; ++j) {
                cov(i, j) += di * (row[j] - means[j]);
            }
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            cov(i, j) /= static_cast<double>(n - 1);
            cov(j, i) = cov(i, j);
        }
    }
    return cov;
}

}  // namespace strokelab
