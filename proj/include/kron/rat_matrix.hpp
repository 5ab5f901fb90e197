#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "kron/rational.hpp"

namespace kron {

/// Dense matrix over arbitrary-precision rationals. Rank, determinant,
/// inverse and nullspace are exact and take no tolerance parameter. Sizes
/// stay small (tens of rows), so plain Gaussian elimination with exact
/// pivoting is adequate.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}
    RatMatrix(std::size_t rows, std::size_t cols, std::vector<Rat> entries);

    static RatMatrix identity(std::size_t n);
    static RatMatrix zero(std::size_t rows, std::size_t cols);
    /// Row-major convenience constructor from long integers (tests mostly).
    static RatMatrix from_ints(std::size_t rows, std::size_t cols,
                               std::initializer_list<long> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    const Rat& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    Rat& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    RatMatrix transpose() const;
    RatMatrix operator*(const RatMatrix& rhs) const;
    RatMatrix operator+(const RatMatrix& rhs) const;
    RatMatrix operator-() const;
    bool operator==(const RatMatrix& rhs) const;

    void set_block(std::size_t r0, std::size_t c0, const RatMatrix& block);
    RatMatrix block(std::size_t r0, std::size_t c0,
                    std::size_t nrows, std::size_t ncols) const;
    RatMatrix column(std::size_t c) const;

    /// Horizontal concatenation [this | rhs]; row counts must agree.
    RatMatrix hcat(const RatMatrix& rhs) const;

    bool is_skew_symmetric() const;
    bool is_zero() const;

    std::size_t rank() const;
    Rat determinant() const;  // square only
    /// Exact inverse; throws Error(SingularJ) when singular.
    RatMatrix inverse() const;
    /// Columns form a basis of {v : this * v = 0}.
    RatMatrix nullspace() const;

    /// True when every column of other lies in the column space of this.
    bool column_space_contains(const RatMatrix& other) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rat> data_;
};

/// dim of the span of the columns of [a | b].
std::size_t joint_column_rank(const RatMatrix& a, const RatMatrix& b);

/// True when two matrices span the same column space.
bool same_column_space(const RatMatrix& a, const RatMatrix& b);

}  // namespace kron
