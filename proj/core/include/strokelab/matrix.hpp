#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace strokelab {

/// Dense row-major matrix of doubles. The one numeric container every
/// stage of the pipeline passes around.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    /// Append a row; the first append on an empty matrix fixes the width.
    void push_row(std::span<const double> values);

    Matrix take_rows(const std::vector<std::size_t>& indices) const;
    std::vector<double> column(std::size_t c) const;

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// C = A * B
Matrix matmul(const Matrix& a, const Matrix& b);
/// C = A * B^T
Matrix matmul_bt(const Matrix& a, const Matrix& b);
/// C = A^T * B
Matrix matmul_at(const Matrix& a, const Matrix& b);

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
/// Minkowski distance of order p (p = 2 is Euclidean, p = 1 Manhattan).
double minkowski_distance(std::span<const double> a, std::span<const double> b, double p);

std::vector<double> column_means(const Matrix& m);
/// Population standard deviation (divide by n) per column.
std::vector<double> column_stddevs(const Matrix& m, const std::vector<double>& means);

}  // namespace strokelab
