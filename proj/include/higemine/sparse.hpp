#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace higemine::sparse {

// Row-major dense matrix of doubles. All accumulation in the project happens
// in 64-bit floats; reduction order is left-to-right so results are
// bit-deterministic.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return at(r, c); }
    double operator()(std::size_t r, std::size_t c) const { return at(r, c); }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const DenseMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
    bool all_finite() const;
    void fill(double v);

    bool operator==(const DenseMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct Coord {
    std::size_t row;
    std::size_t col;
    double value;
};

// Immutable sparse matrix. Built from coordinates (duplicates are an error),
// stored in CSR with entries sorted by (row, col).
class SparseMatrix {
public:
    SparseMatrix() = default;
    // Validates indices, finiteness, and duplicate coordinates.
    SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Coord> entries);

    static SparseMatrix identity(std::size_t n);
    static SparseMatrix zero(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
    const std::vector<std::size_t>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }

    double at(std::size_t r, std::size_t c) const;
    std::vector<Coord> coords() const;
    DenseMatrix to_dense() const;

    bool is_symmetric(double tol = 0.0) const;

    bool operator==(const SparseMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && row_ptr_ == o.row_ptr_ &&
               col_idx_ == o.col_idx_ && values_ == o.values_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> col_idx_;
    std::vector<double> values_;
};

// Sparse-dense product A * X.
DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& x);

// Transposed sparse-dense product A^T * X (used by the gradient tape).
DenseMatrix spmm_transposed(const SparseMatrix& a, const DenseMatrix& x);

// Symmetric normalization with self-loops: A' = A + I, D_ii = sum_j A'_ij,
// out_ij = A'_ij / sqrt(D_ii * D_jj). Requires a square, non-negative matrix.
SparseMatrix normalize_adjacency(const SparseMatrix& a);

// Horizontal concatenation of equal-row-count blocks, in list order.
DenseMatrix concat_cols(const std::vector<DenseMatrix>& blocks);

// Dense helpers used by the model code. All are shape-checked.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_transposed_b(const DenseMatrix& a, const DenseMatrix& b);  // a * b^T
DenseMatrix matmul_transposed_a(const DenseMatrix& a, const DenseMatrix& b);  // a^T * b

// Matrix Market coordinate serialization (for graph-stats debugging dumps).
void write_matrix_market(const SparseMatrix& a, std::ostream& os);

}  // namespace higemine::sparse
