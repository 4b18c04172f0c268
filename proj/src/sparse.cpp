#include "higemine/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "higemine/errors.hpp"

namespace higemine::sparse {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw DataError("dense matrix buffer length does not match rows*cols");
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

bool DenseMatrix::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void DenseMatrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Coord> entries)
    : rows_(rows), cols_(cols) {
    for (const Coord& e : entries) {
        if (e.row >= rows_ || e.col >= cols_) {
            throw DataError("sparse entry (" + std::to_string(e.row) + "," +
                            std::to_string(e.col) + ") out of range for " +
                            std::to_string(rows_) + "x" + std::to_string(cols_));
        }
        if (!std::isfinite(e.value)) {
            throw NumericError("non-finite sparse entry at (" + std::to_string(e.row) + "," +
                               std::to_string(e.col) + ")");
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Coord& a, const Coord& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].row == entries[i - 1].row && entries[i].col == entries[i - 1].col) {
            throw DataError("duplicate sparse coordinate (" + std::to_string(entries[i].row) +
                            "," + std::to_string(entries[i].col) + ")");
        }
    }
    row_ptr_.assign(rows_ + 1, 0);
    col_idx_.reserve(entries.size());
    values_.reserve(entries.size());
    for (const Coord& e : entries) {
        ++row_ptr_[e.row + 1];
        col_idx_.push_back(e.col);
        values_.push_back(e.value);
    }
    for (std::size_t r = 0; r < rows_; ++r) row_ptr_[r + 1] += row_ptr_[r];
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    std::vector<Coord> entries;
    entries.reserve(n);
    for (std::size_t i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
    return SparseMatrix(n, n, std::move(entries));
}

SparseMatrix SparseMatrix::zero(std::size_t rows, std::size_t cols) {
    return SparseMatrix(rows, cols, {});
}

double SparseMatrix::at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw DataError("sparse at() out of range");
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
        if (col_idx_[p] == c) return values_[p];
    }
    return 0.0;
}

std::vector<Coord> SparseMatrix::coords() const {
    std::vector<Coord> out;
    out.reserve(nnz());
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
            out.push_back({r, col_idx_[p], values_[p]});
        }
    }
    return out;
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix m(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
            m.at(r, col_idx_[p]) = values_[p];
        }
    }
    return m;
}

bool SparseMatrix::is_symmetric(double tol) const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
            if (std::abs(values_[p] - at(col_idx_[p], r)) > tol) return false;
        }
    }
    return true;
}

DenseMatrix spmm(const SparseMatrix& a, const DenseMatrix& x) {
    if (a.cols() != x.rows()) {
        throw DataError("spmm shape mismatch: " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " * " + std::to_string(x.rows()) + "x" +
                        std::to_string(x.cols()));
    }
    DenseMatrix out(a.rows(), x.cols());
    const auto& row_ptr = a.row_ptr();
    const auto& col_idx = a.col_idx();
    const auto& vals = a.values();
    const std::size_t n = x.cols();
    for (std::size_t r = 0; r < a.rows(); ++r) {
        double* out_row = &out.data()[r * n];
        for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
            const double v = vals[p];
            const double* x_row = &x.data()[col_idx[p] * n];
            for (std::size_t j = 0; j < n; ++j) out_row[j] += v * x_row[j];
        }
    }
    return out;
}

DenseMatrix spmm_transposed(const SparseMatrix& a, const DenseMatrix& x) {
    if (a.rows() != x.rows()) {
        throw DataError("spmm_transposed shape mismatch");
    }
    DenseMatrix out(a.cols(), x.cols());
    const auto& row_ptr = a.row_ptr();
    const auto& col_idx = a.col_idx();
    const auto& vals = a.values();
    const std::size_t n = x.cols();
    // Scatter rows of A in order; single-threaded so accumulation order is fixed.
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const double* x_row = &x.data()[r * n];
        for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
            double* out_row = &out.data()[col_idx[p] * n];
            const double v = vals[p];
            for (std::size_t j = 0; j < n; ++j) out_row[j] += v * x_row[j];
        }
    }
    return out;
}

SparseMatrix normalize_adjacency(const SparseMatrix& a) {
    if (a.rows() != a.cols()) throw DataError("normalize_adjacency requires a square matrix");
    const std::size_t n = a.rows();
    for (double v : a.values()) {
        if (v < 0.0) throw DataError("normalize_adjacency requires non-negative entries");
    }
    // Degrees of A + I. The self-loop guarantees D_ii >= 1.
    std::vector<double> degree(n, 1.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t p = a.row_ptr()[r]; p < a.row_ptr()[r + 1]; ++p) {
            degree[r] += a.values()[p];
        }
    }
    std::vector<double> inv_sqrt(n);
    for (std::size_t i = 0; i < n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(degree[i]);

    std::vector<Coord> out;
    out.reserve(a.nnz() + n);
    for (std::size_t r = 0; r < n; ++r) {
        bool diag_seen = false;
        for (std::size_t p = a.row_ptr()[r]; p < a.row_ptr()[r + 1]; ++p) {
            const std::size_t c = a.col_idx()[p];
            double v = a.values()[p];
            if (c == r) {
                v += 1.0;
                diag_seen = true;
            }
            out.push_back({r, c, v * inv_sqrt[r] * inv_sqrt[c]});
        }
        if (!diag_seen) out.push_back({r, r, inv_sqrt[r] * inv_sqrt[r]});
    }
    return SparseMatrix(n, n, std::move(out));
}

DenseMatrix concat_cols(const std::vector<DenseMatrix>& blocks) {
    if (blocks.empty()) throw DataError("concat_cols needs at least one block");
    const std::size_t rows = blocks.front().rows();
    std::size_t cols = 0;
    for (const DenseMatrix& b : blocks) {
        if (b.rows() != rows) throw DataError("concat_cols row count mismatch");
        cols += b.cols();
    }
    DenseMatrix out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        std::size_t offset = 0;
        for (const DenseMatrix& b : blocks) {
            for (std::size_t c = 0; c < b.cols(); ++c) out.at(r, offset + c) = b.at(r, c);
            offset += b.cols();
        }
    }
    return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw DataError("matmul shape mismatch");
    DenseMatrix out(a.rows(), b.cols());
    const std::size_t n = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* out_row = &out.data()[i * n];
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double v = a.at(i, k);
            if (v == 0.0) continue;
            const double* b_row = &b.data()[k * n];
            for (std::size_t j = 0; j < n; ++j) out_row[j] += v * b_row[j];
        }
    }
    return out;
}

DenseMatrix matmul_transposed_b(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) throw DataError("matmul_transposed_b shape mismatch");
    DenseMatrix out(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a.at(i, k) * b.at(j, k);
            out.at(i, j) = acc;
        }
    }
    return out;
}

DenseMatrix matmul_transposed_a(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) throw DataError("matmul_transposed_a shape mismatch");
    DenseMatrix out(a.cols(), b.cols());
    const std::size_t n = b.cols();
    for (std::size_t k = 0; k < a.rows(); ++k) {
        const double* b_row = &b.data()[k * n];
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double v = a.at(k, i);
            if (v == 0.0) continue;
            double* out_row = &out.data()[i * n];
            for (std::size_t j = 0; j < n; ++j) out_row[j] += v * b_row[j];
        }
    }
    return out;
}

void write_matrix_market(const SparseMatrix& a, std::ostream& os) {
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << a.rows() << " " << a.cols() << " " << a.nnz() << "\n";
    for (const Coord& e : a.coords()) {
        os << (e.row + 1) << " " << (e.col + 1) << " " << e.value << "\n";
    }
}

}  // namespace higemine::sparse
