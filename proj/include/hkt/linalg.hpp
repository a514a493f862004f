#pragma once
// Exact linear algebra over Q(i): dense row reduction, sparse matrices,
// incremental spans with coordinates, Hermitian signature.

#include "hkt/scalar.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hkt {

class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols) {}
    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Scalar& operator()(int r, int c) { return data_[std::size_t(r) * cols_ + c]; }
    const Scalar& operator()(int r, int c) const { return data_[std::size_t(r) * cols_ + c]; }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
        Matrix out(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const Scalar& a = (*this)(i, k);
                if (a.is_zero()) continue;
                for (int j = 0; j < o.cols_; ++j)
                    if (!o(k, j).is_zero()) out(i, j) += a * o(k, j);
            }
        return out;
    }
    Matrix operator+(const Matrix& o) const {
        check_same(o);
        Matrix out = *this;
        for (std::size_t t = 0; t < data_.size(); ++t) out.data_[t] += o.data_[t];
        return out;
    }
    Matrix operator-(const Matrix& o) const {
        check_same(o);
        Matrix out = *this;
        for (std::size_t t = 0; t < data_.size(); ++t) out.data_[t] -= o.data_[t];
        return out;
    }
    Matrix operator*(const Scalar& s) const {
        Matrix out = *this;
        for (auto& x : out.data_) x *= s;
        return out;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
    }
    Matrix transpose() const {
        Matrix out(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }
    Matrix adjoint() const {
        Matrix out(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j).conj();
        return out;
    }
    Matrix conj() const {
        Matrix out = *this;
        for (auto& x : out.data_) x = x.conj();
        return out;
    }
    bool is_real() const {
        return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_real(); });
    }

private:
    void check_same(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("Matrix: shape mismatch");
    }
    int rows_ = 0, cols_ = 0;
    std::vector<Scalar> data_;
};

// Reduced row echelon form in place; returns pivot columns.
inline std::vector<int> rref_in_place(Matrix& m) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
        int p = -1;
        for (int i = r; i < m.rows(); ++i)
            if (!m(i, c).is_zero()) { p = i; break; }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        Scalar inv = Scalar(1) / m(r, c);
        for (int j = c; j < m.cols(); ++j)
            if (!m(r, j).is_zero()) m(r, j) *= inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c).is_zero()) continue;
            Scalar f = m(i, c);
            for (int j = c; j < m.cols(); ++j)
                if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline int rank(Matrix m) { return int(rref_in_place(m).size()); }

// Basis of the null space, one column vector per element.
inline std::vector<std::vector<Scalar>> kernel(Matrix m) {
    auto piv = rref_in_place(m);
    std::vector<char> is_piv(m.cols(), 0);
    for (int c : piv) is_piv[c] = 1;
    std::vector<std::vector<Scalar>> out;
    for (int f = 0; f < m.cols(); ++f) {
        if (is_piv[f]) continue;
        std::vector<Scalar> v(m.cols());
        v[f] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(int(r), f);
        out.push_back(std::move(v));
    }
    return out;
}

inline std::optional<Matrix> inverse(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("inverse: matrix not square");
    int n = a.rows();
    Matrix aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = 1;
    }
    auto piv = rref_in_place(aug);
    if (int(piv.size()) < n || piv[n - 1] != n - 1) return std::nullopt;
    Matrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
    return out;
}

inline Scalar determinant(Matrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
    int n = m.rows();
    Scalar det = 1;
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (!m(i, c).is_zero()) { p = i; break; }
        if (p < 0) return 0;
        if (p != c) {
            for (int j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        Scalar inv = Scalar(1) / m(c, c);
        for (int i = c + 1; i < n; ++i) {
            if (m(i, c).is_zero()) continue;
            Scalar f = m(i, c) * inv;
            for (int j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

struct Signature {
    int positive = 0, negative = 0, zero = 0;
    friend bool operator==(const Signature&, const Signature&) = default;
};

// Inertia of a Hermitian matrix by congruence.
inline Signature signature(Matrix a) {
    int n = a.rows();
    if (a.cols() != n || !(a.adjoint() == a)) throw std::invalid_argument("signature: matrix not Hermitian");
    Signature s;
    std::vector<char> done(n, 0);
    for (int step = 0; step < n; ++step) {
        int p = -1;
        for (int i = 0; i < n; ++i)
            if (!done[i] && !a(i, i).is_zero()) { p = i; break; }
        if (p < 0) {
            int pi = -1, pj = -1;
            for (int i = 0; i < n && pi < 0; ++i)
                for (int j = 0; j < n; ++j)
                    if (!done[i] && !done[j] && i != j && !a(i, j).is_zero()) { pi = i; pj = j; break; }
            if (pi < 0) break;
            // e_i <- e_i + t e_j with t chosen to make the diagonal nonzero
            Scalar t = sgn(a(pi, pj).re()) != 0 ? Scalar(1) : Scalar::i();
            for (int k = 0; k < n; ++k) a(pi, k) += t.conj() * a(pj, k);
            for (int k = 0; k < n; ++k) a(k, pi) += t * a(k, pj);
            p = pi;
        }
        const Scalar piv = a(p, p);
        if (sgn(piv.re()) > 0) ++s.positive;
        else ++s.negative;
        done[p] = 1;
        for (int i = 0; i < n; ++i) {
            if (done[i] || a(i, p).is_zero()) continue;
            Scalar f = a(i, p) / piv;
            for (int k = 0; k < n; ++k) a(i, k) -= f * a(p, k);
            for (int k = 0; k < n; ++k) a(k, i) -= f.conj() * a(k, p);
        }
    }
    s.zero = n - s.positive - s.negative;
    return s;
}

// Column-sparse matrix; each column is sorted by row.
class SparseMatrix {
public:
    using Entry = std::pair<int, Scalar>;
    using Column = std::vector<Entry>;

    SparseMatrix() = default;
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), columns_(cols) {}
    static SparseMatrix identity(int n) {
        SparseMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.columns_[i].emplace_back(i, Scalar(1));
        return m;
    }
    static SparseMatrix from_dense(const Matrix& d) {
        SparseMatrix m(d.rows(), d.cols());
        for (int j = 0; j < d.cols(); ++j)
            for (int i = 0; i < d.rows(); ++i)
                if (!d(i, j).is_zero()) m.columns_[j].emplace_back(i, d(i, j));
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Column& column(int j) const { return columns_[j]; }
    // Replace column j; entries need not be sorted or unique.
    void set_column(int j, std::vector<Entry> entries) {
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
        Column col;
        for (auto& e : entries) {
            if (!col.empty() && col.back().first == e.first) col.back().second += e.second;
            else col.push_back(std::move(e));
        }
        std::erase_if(col, [](const Entry& e) { return e.second.is_zero(); });
        columns_[j] = std::move(col);
    }
    Scalar at(int i, int j) const {
        for (auto& [r, v] : columns_[j])
            if (r == i) return v;
        return 0;
    }
    std::size_t nnz() const {
        std::size_t n = 0;
        for (auto& c : columns_) n += c.size();
        return n;
    }
    bool is_zero() const {
        return std::all_of(columns_.begin(), columns_.end(), [](const Column& c) { return c.empty(); });
    }
    bool is_real() const {
        for (auto& c : columns_)
            for (auto& [_, v] : c)
                if (!v.is_real()) return false;
        return true;
    }

    Matrix to_dense() const {
        Matrix d(rows_, cols_);
        for (int j = 0; j < cols_; ++j)
            for (auto& [i, v] : columns_[j]) d(i, j) = v;
        return d;
    }

    SparseMatrix operator*(const SparseMatrix& b) const {
        if (cols_ != b.rows_) throw std::invalid_argument("SparseMatrix: shape mismatch in product");
        SparseMatrix out(rows_, b.cols_);
        std::vector<Scalar> acc(rows_);
        std::vector<char> touched(rows_, 0);
        std::vector<int> list;
        for (int j = 0; j < b.cols_; ++j) {
            list.clear();
            for (auto& [k, bv] : b.columns_[j])
                for (auto& [i, av] : columns_[k]) {
                    if (!touched[i]) { touched[i] = 1; list.push_back(i); }
                    acc[i] += av * bv;
                }
            std::sort(list.begin(), list.end());
            Column col;
            for (int i : list) {
                if (!acc[i].is_zero()) col.emplace_back(i, std::move(acc[i]));
                acc[i] = Scalar();
                touched[i] = 0;
            }
            out.columns_[j] = std::move(col);
        }
        return out;
    }
    SparseMatrix& axpy(const Scalar& s, const SparseMatrix& b) {
        if (rows_ != b.rows_ || cols_ != b.cols_) throw std::invalid_argument("SparseMatrix: shape mismatch");
        if (s.is_zero()) return *this;
        for (int j = 0; j < cols_; ++j) {
            if (b.columns_[j].empty()) continue;
            Column merged;
            auto& a = columns_[j];
            auto& c = b.columns_[j];
            std::size_t p = 0, q = 0;
            while (p < a.size() || q < c.size()) {
                if (q == c.size() || (p < a.size() && a[p].first < c[q].first)) {
                    merged.push_back(std::move(a[p++]));
                } else if (p == a.size() || c[q].first < a[p].first) {
                    merged.emplace_back(c[q].first, s * c[q].second);
                    ++q;
                } else {
                    Scalar v = a[p].second + s * c[q].second;
                    if (!v.is_zero()) merged.emplace_back(a[p].first, std::move(v));
                    ++p;
                    ++q;
                }
            }
            a = std::move(merged);
        }
        return *this;
    }
    SparseMatrix operator+(const SparseMatrix& b) const { SparseMatrix o = *this; return o.axpy(1, b); }
    SparseMatrix operator-(const SparseMatrix& b) const { SparseMatrix o = *this; return o.axpy(-1, b); }
    SparseMatrix operator*(const Scalar& s) const {
        if (s.is_zero()) return SparseMatrix(rows_, cols_);
        SparseMatrix o = *this;
        for (auto& c : o.columns_)
            for (auto& e : c) e.second *= s;
        return o;
    }
    friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.columns_ == b.columns_;
    }

    // Conjugate transpose.
    SparseMatrix adjoint() const {
        SparseMatrix out(cols_, rows_);
        for (int j = 0; j < cols_; ++j)
            for (auto& [i, v] : columns_[j]) out.columns_[i].emplace_back(j, v.conj());
        return out;
    }
    SparseMatrix transpose() const {
        SparseMatrix out(cols_, rows_);
        for (int j = 0; j < cols_; ++j)
            for (auto& [i, v] : columns_[j]) out.columns_[i].emplace_back(j, v);
        return out;
    }
    SparseMatrix conj() const {
        SparseMatrix o = *this;
        for (auto& c : o.columns_)
            for (auto& e : c) e.second = e.second.conj();
        return o;
    }

    std::vector<Scalar> apply(const std::vector<Scalar>& x) const {
        std::vector<Scalar> y(rows_);
        for (int j = 0; j < cols_; ++j) {
            if (x[j].is_zero()) continue;
            for (auto& [i, v] : columns_[j]) y[i] += v * x[j];
        }
        return y;
    }

    // Restrict to the given row and column index sets.
    SparseMatrix block(const std::vector<int>& row_idx, const std::vector<int>& col_idx) const {
        std::vector<int> where(rows_, -1);
        for (std::size_t t = 0; t < row_idx.size(); ++t) where[row_idx[t]] = int(t);
        SparseMatrix out(int(row_idx.size()), int(col_idx.size()));
        for (std::size_t t = 0; t < col_idx.size(); ++t)
            for (auto& [i, v] : columns_[col_idx[t]])
                if (where[i] >= 0) out.columns_[t].emplace_back(where[i], v);
        for (auto& c : out.columns_)
            std::sort(c.begin(), c.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
        return out;
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Column> columns_;
};

// Sparse vector keyed by 64-bit indices.
using SparseVector = std::map<std::uint64_t, Scalar>;

inline void axpy(SparseVector& y, const Scalar& a, const SparseVector& x) {
    if (a.is_zero()) return;
    for (auto& [k, v] : x) {
        auto [it, fresh] = y.emplace(k, a * v);
        if (!fresh) {
            it->second += a * v;
            if (it->second.is_zero()) y.erase(it);
        }
    }
}

// Incrementally built span with coordinates relative to the accepted generators.
class LinearSpan {
public:
    std::size_t dimension() const { return rows_.size(); }

    // Coordinates of v in the accepted generators, or nullopt if v is outside the span.
    std::optional<std::vector<Scalar>> coordinates(const SparseVector& v) const {
        auto [rest, comb] = reduce(v);
        if (!rest.empty()) return std::nullopt;
        std::vector<Scalar> out(rows_.size());
        for (auto& [k, c] : comb) out[k] = c;
        return out;
    }
    bool contains(const SparseVector& v) const { return reduce(v).first.empty(); }

    // Adds v if independent; returns true when the span grew.
    bool add(const SparseVector& v) {
        auto [rest, comb] = reduce(v);
        if (rest.empty()) return false;
        std::size_t id = rows_.size();
        // rest = v - sum comb_j gen_j
        SparseVector total;
        total[id] = 1;
        axpy(total, -1, comb);
        Scalar inv = Scalar(1) / rest.begin()->second;
        for (auto& [k, x] : rest) x *= inv;
        for (auto& [k, x] : total) x *= inv;
        pivot_[rest.begin()->first] = rows_.size();
        rows_.push_back(std::move(rest));
        combos_.push_back(std::move(total));
        return true;
    }

private:
    // Returns the remainder and the coefficients (in generator coordinates) removed.
    std::pair<SparseVector, SparseVector> reduce(const SparseVector& v) const {
        SparseVector w = v;
        SparseVector used;  // keyed by row index
        auto it = w.begin();
        while (it != w.end()) {
            auto pv = pivot_.find(it->first);
            if (pv == pivot_.end()) { ++it; continue; }
            std::uint64_t key = it->first;
            Scalar c = it->second;
            axpy(w, -c, rows_[pv->second]);
            axpy(used, c, combos_[pv->second]);
            it = w.upper_bound(key);
        }
        return {std::move(w), std::move(used)};
    }

    std::vector<SparseVector> rows_;
    std::vector<SparseVector> combos_;
    std::map<std::uint64_t, std::size_t> pivot_;
};

}  // namespace hkt
