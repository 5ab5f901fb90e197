#include "kron/rat_matrix.hpp"

#include <stdexcept>
#include <utility>

namespace kron {

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols, std::vector<Rat> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw std::invalid_argument("RatMatrix: entry count does not match shape");
    }
}

RatMatrix RatMatrix::identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

RatMatrix RatMatrix::zero(std::size_t rows, std::size_t cols) {
    return RatMatrix(rows, cols);
}

RatMatrix RatMatrix::from_ints(std::size_t rows, std::size_t cols,
                               std::initializer_list<long> entries) {
    std::vector<Rat> data;
    data.reserve(entries.size());
    for (long v : entries) data.emplace_back(v);
    return RatMatrix(rows, cols, std::move(data));
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
}

RatMatrix RatMatrix::operator*(const RatMatrix& rhs) const {
    if (cols_ != rhs.rows_) {
        throw std::invalid_argument("RatMatrix: incompatible shapes for product");
    }
    RatMatrix out(rows_, rhs.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rat& a = at(r, k);
            if (a == 0) continue;
            for (std::size_t c = 0; c < rhs.cols_; ++c) {
                out.at(r, c) += a * rhs.at(k, c);
            }
        }
    }
    return out;
}

RatMatrix RatMatrix::operator+(const RatMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
        throw std::invalid_argument("RatMatrix: incompatible shapes for sum");
    }
    RatMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + rhs.data_[i];
    return out;
}

RatMatrix RatMatrix::operator-() const {
    RatMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = -data_[i];
    return out;
}

bool RatMatrix::operator==(const RatMatrix& rhs) const {
    return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
}

void RatMatrix::set_block(std::size_t r0, std::size_t c0, const RatMatrix& block) {
    if (r0 + block.rows_ > rows_ || c0 + block.cols_ > cols_) {
        throw std::invalid_argument("RatMatrix: block out of range");
    }
    for (std::size_t r = 0; r < block.rows_; ++r)
        for (std::size_t c = 0; c < block.cols_; ++c) at(r0 + r, c0 + c) = block.at(r, c);
}

RatMatrix RatMatrix::block(std::size_t r0, std::size_t c0,
                           std::size_t nrows, std::size_t ncols) const {
    if (r0 + nrows > rows_ || c0 + ncols > cols_) {
        throw std::invalid_argument("RatMatrix: block out of range");
    }
    RatMatrix out(nrows, ncols);
    for (std::size_t r = 0; r < nrows; ++r)
        for (std::size_t c = 0; c < ncols; ++c) out.at(r, c) = at(r0 + r, c0 + c);
    return out;
}

RatMatrix RatMatrix::column(std::size_t c) const {
    return block(0, c, rows_, 1);
}

RatMatrix RatMatrix::hcat(const RatMatrix& rhs) const {
    if (rows_ != rhs.rows_) {
        throw std::invalid_argument("RatMatrix: hcat row mismatch");
    }
    RatMatrix out(rows_, cols_ + rhs.cols_);
    out.set_block(0, 0, *this);
    out.set_block(0, cols_, rhs);
    return out;
}

bool RatMatrix::is_skew_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = r; c < cols_; ++c)
            if (at(r, c) != -at(c, r)) return false;
    return true;
}

bool RatMatrix::is_zero() const {
    for (const Rat& v : data_)
        if (v != 0) return false;
    return true;
}

namespace {

// Row echelon elimination in place; returns the pivot columns. `aug` is the
// number of trailing columns excluded from pivot search (for solves).
std::vector<std::size_t> eliminate(RatMatrix& m, std::size_t pivot_cols) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < pivot_cols && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && m.at(p, col) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != row) {
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(p, c), m.at(row, c));
        }
        Rat inv = 1 / m.at(row, col);
        for (std::size_t c = col; c < m.cols(); ++c) m.at(row, c) *= inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m.at(r, col) == 0) continue;
            Rat f = m.at(r, col);
            for (std::size_t c = col; c < m.cols(); ++c) m.at(r, c) -= f * m.at(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

std::size_t RatMatrix::rank() const {
    RatMatrix work = *this;
    return eliminate(work, cols_).size();
}

Rat RatMatrix::determinant() const {
    if (rows_ != cols_) {
        throw std::invalid_argument("RatMatrix: determinant of non-square matrix");
    }
    RatMatrix work = *this;
    Rat det = 1;
    for (std::size_t col = 0; col < cols_; ++col) {
        std::size_t p = col;
        while (p < rows_ && work.at(p, col) == 0) ++p;
        if (p == rows_) return Rat(0);
        if (p != col) {
            for (std::size_t c = 0; c < cols_; ++c) std::swap(work.at(p, c), work.at(col, c));
            det = -det;
        }
        det *= work.at(col, col);
        Rat inv = 1 / work.at(col, col);
        for (std::size_t r = col + 1; r < rows_; ++r) {
            if (work.at(r, col) == 0) continue;
            Rat f = work.at(r, col) * inv;
            for (std::size_t c = col; c < cols_; ++c) work.at(r, c) -= f * work.at(col, c);
        }
    }
    return det;
}

RatMatrix RatMatrix::inverse() const {
    if (rows_ != cols_) {
        throw std::invalid_argument("RatMatrix: inverse of non-square matrix");
    }
    RatMatrix work = hcat(identity(rows_));
    auto pivots = eliminate(work, cols_);
    if (pivots.size() != cols_) {
        throw Error(ErrorCode::SingularJ, "matrix is singular");
    }
    return work.block(0, cols_, rows_, cols_);
}

RatMatrix RatMatrix::nullspace() const {
    RatMatrix work = *this;
    auto pivots = eliminate(work, cols_);
    std::vector<bool> is_pivot(cols_, false);
    for (std::size_t c : pivots) is_pivot[c] = true;

    std::size_t nfree = cols_ - pivots.size();
    RatMatrix basis(cols_, nfree);
    std::size_t out = 0;
    for (std::size_t free_col = 0; free_col < cols_; ++free_col) {
        if (is_pivot[free_col]) continue;
        basis.at(free_col, out) = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) {
            basis.at(pivots[i], out) = -work.at(i, free_col);
        }
        ++out;
    }
    return basis;
}

bool RatMatrix::column_space_contains(const RatMatrix& other) const {
    if (other.empty()) return true;
    return joint_column_rank(*this, other) == rank();
}

std::size_t joint_column_rank(const RatMatrix& a, const RatMatrix& b) {
    if (a.empty()) return b.rank();
    if (b.empty()) return a.rank();
    return a.hcat(b).rank();
}

bool same_column_space(const RatMatrix& a, const RatMatrix& b) {
    std::size_t ra = a.rank();
    std::size_t rb = b.rank();
    return ra == rb && joint_column_rank(a, b) == ra;
}

}  // namespace kron
