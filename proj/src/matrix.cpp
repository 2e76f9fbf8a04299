#include "scelab/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace scelab {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0)
{
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("ragged matrix initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::uniform_rows(std::size_t n)
{
    return Matrix(n, n, 1.0 / static_cast<double>(n));
}

double Matrix::sum() const
{
    return std::accumulate(data_.begin(), data_.end(), 0.0);
}

double Matrix::max_abs() const
{
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool is_row_stochastic(const Matrix& m, double tol)
{
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double total = 0.0;
        for (double v : m.row(r)) {
            if (v < 0.0 || !std::isfinite(v)) return false;
            total += v;
        }
        if (std::abs(total - 1.0) > tol) return false;
    }
    return true;
}

}  // namespace scelab
