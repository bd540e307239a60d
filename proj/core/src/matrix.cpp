#include "strokelab/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace strokelab {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m;
    for (const auto& r : rows) {
        m.push_row(r);
    }
    return m;
}

void Matrix::push_row(std::span<const double> values) {
    if (rows_ == 0 && cols_ == 0) {
        cols_ = values.size();
    }
    if (values.size() != cols_) {
        throw std::invalid_argument("Matrix::push_row: row width mismatch");
    }
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
}

Matrix Matrix::take_rows(const std::vector<std::size_t>& indices) const {
    Matrix out(indices.size(), cols_);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= rows_) {
            throw std::out_of_range("Matrix::take_rows: index out of range");
        }
        auto src = row(indices[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

std::vector<double> Matrix::column(std::size_t c) const {
    if (c >= cols_) {
        throw std::out_of_range("Matrix::column: index out of range");
    }
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        out[r] = (*this)(r, c);
    }
    return out;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul: inner dimensions differ");
    }
    Matrix c(a.rows(), b.cols());
    const std::size_t n = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* ci = &c.data()[i * n];
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            const double* bk = &b.data()[k * n];
            for (std::size_t j = 0; j < n; ++j) {
                ci[j] += aik * bk[j];
            }
        }
    }
    return c;
}

Matrix matmul_bt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        throw std::invalid_argument("matmul_bt: inner dimensions differ");
    }
    Matrix c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) {
            c(i, j) = dot(a.row(i), b.row(j));
        }
    }
    return c;
}

Matrix matmul_at(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw std::invalid_argument("matmul_at: inner dimensions differ");
    }
    Matrix c(a.cols(), b.cols());
    const std::size_t n = b.cols();
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const double* ar = &a.data()[r * a.cols()];
        const double* br = &b.data()[r * n];
        for (std::size_t i = 0; i < a.cols(); ++i) {
            double* ci = &c.data()[i * n];
            const double ari = ar[i];
            for (std::size_t j = 0; j < n; ++j) {
                ci[j] += ari * br[j];
            }
        }
    }
    return c;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double minkowski_distance(std::span<const double> a, std::span<const double> b, double p) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::pow(std::abs(a[i] - b[i]), p);
    }
    return std::pow(s, 1.0 / p);
}

std::vector<double> column_means(const Matrix& m) {
    std::vector<double> means(m.cols(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        for (std::size_t c = 0; c < m.cols(); ++c) {
            means[c] += row[c];
        }
    }
    for (auto& v : means) {
        v /= static_cast<double>(m.rows());
    }
    return means;
}

std::vector<double> column_stddevs(const Matrix& m, const std::vector<double>& means) {
    std::vector<double> sq(m.cols(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row(r);
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const double d = row[c] - means[c];
            sq[c] += d * d;
        }
    }
    for (auto& v : sq) {
        v = std::sqrt(v / static_cast<double>(m.rows()));
    }
    return sq;
}

}  // namespace strokelab
