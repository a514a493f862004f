#pragma once
// exterior_core: forms, exact linear algebra, graded operators and their
// standard constructors on the full exterior algebra.

#include "hkt/form.hpp"
#include "hkt/linalg.hpp"
#include "hkt/operator.hpp"
#include "hkt/polynomial.hpp"
#include "hkt/scalar.hpp"

#include <stdexcept>
#include <vector>

namespace hkt {

// <e^A, e^B> = det(G[A,B]) for a covector Gram matrix G.
inline SparseMatrix blade_gram(int N, const Matrix& cov_gram) {
    auto blades = all_blades(N);
    bool identity = cov_gram == Matrix::identity(N);
    if (identity) return SparseMatrix::identity(int(blades.size()));
    SparseMatrix g(int(blades.size()), int(blades.size()));
    std::vector<std::vector<SparseMatrix::Entry>> cols(blades.size());
    for (std::size_t i = 0; i < blades.size(); ++i)
        for (std::size_t j = 0; j < blades.size(); ++j) {
            if (blades[i].degree() != blades[j].degree()) continue;
            auto a = blades[i].indices(), b = blades[j].indices();
            Matrix m(int(a.size()), int(b.size()));
            for (std::size_t r = 0; r < a.size(); ++r)
                for (std::size_t c = 0; c < b.size(); ++c) m(int(r), int(c)) = cov_gram(a[r], b[c]);
            Scalar d = a.empty() ? Scalar(1) : determinant(m);
            if (!d.is_zero()) cols[j].emplace_back(int(i), d);
        }
    for (std::size_t j = 0; j < blades.size(); ++j) g.set_column(int(j), std::move(cols[j]));
    return g;
}

inline FiberPtr full_fiber(int N, const Matrix& cov_gram) { return FiberSpace::full(N, blade_gram(N, cov_gram)); }
inline FiberPtr full_fiber(int N) { return full_fiber(N, Matrix::identity(N)); }

// Matrix of L_phi (left wedge by a constant form) on the full fiber.
inline SparseMatrix wedge_matrix(const FiberPtr& fib, const Form& phi) {
    if (!fib->is_full()) throw std::invalid_argument("wedge_matrix: needs the full fiber");
    if (!phi.is_constant()) throw std::invalid_argument("wedge_matrix: non-constant form");
    int D = fib->dim();
    SparseMatrix m(D, D);
    for (int j = 0; j < D; ++j) {
        std::vector<SparseMatrix::Entry> col;
        Blade b = fib->blade(j);
        for (auto& [a, c] : phi.coeffs()) {
            int s = wedge_sign(a, b);
            if (s == 0) continue;
            col.emplace_back(fib->blade_index(Blade{a.mask | b.mask}), c.constant_term() * Scalar(s));
        }
        m.set_column(j, std::move(col));
    }
    return m;
}

inline Parity form_parity(const Form& phi) {
    auto d = phi.degree();
    if (!d) {
        if (phi.is_zero()) return Parity::even;
        throw std::invalid_argument("form_parity: inhomogeneous form");
    }
    return Parity(*d & 1);
}

inline GradedOperator wedge_operator(const FiberPtr& fib, const Form& phi) {
    return GradedOperator(fib, form_parity(phi), wedge_matrix(fib, phi));
}

// Interior product = Hermitian adjoint of wedge.
inline GradedOperator contraction_operator(const FiberPtr& fib, const Form& phi) {
    return wedge_operator(fib, phi).adjoint();
}

// Graded derivation with D(e^i) = images[i] (constant forms of common parity).
inline GradedOperator derivation_extension(const FiberPtr& fib, const std::vector<Form>& images, Parity p) {
    if (!fib->is_full()) throw std::invalid_argument("derivation_extension: needs the full fiber");
    int N = fib->base_dim(), D = fib->dim();
    if (int(images.size()) != N) throw std::invalid_argument("derivation_extension: need one image per covector");
    SparseMatrix m(D, D);
    for (int j = 0; j < D; ++j) {
        auto idx = fib->blade(j).indices();
        Form acc(N);
        for (std::size_t t = 0; t < idx.size(); ++t) {
            if (images[idx[t]].is_zero()) continue;
            std::vector<int> pre(idx.begin(), idx.begin() + t), post(idx.begin() + t + 1, idx.end());
            Form left = Form::term(N, Blade::from_indices(pre), Polynomial(Scalar(1)));
            Form right = Form::term(N, Blade::from_indices(post), Polynomial(Scalar(1)));
            Form piece = wedge(wedge(left, images[idx[t]]), right);
            if (p == Parity::odd && (t & 1)) piece *= Scalar(-1);
            acc += piece;
        }
        auto x = fib->coords(acc);
        std::vector<SparseMatrix::Entry> col;
        for (int i = 0; i < D; ++i)
            if (!x[i].is_zero()) col.emplace_back(i, x[i]);
        m.set_column(j, std::move(col));
    }
    return GradedOperator(fib, p, m);
}

// Algebra automorphism with e^a -> sum_c M(a,c) e^c.
inline GradedOperator multiplicative_extension(const FiberPtr& fib, const Matrix& M) {
    if (!fib->is_full()) throw std::invalid_argument("multiplicative_extension: needs the full fiber");
    int N = fib->base_dim(), D = fib->dim();
    if (M.rows() != N || M.cols() != N) throw std::invalid_argument("multiplicative_extension: shape");
    std::vector<Form> rows;
    for (int a = 0; a < N; ++a) {
        Form r(N);
        for (int c = 0; c < N; ++c)
            if (!M(a, c).is_zero()) r.add(Blade::single(c), Polynomial(M(a, c)));
        rows.push_back(r);
    }
    SparseMatrix m(D, D);
    for (int j = 0; j < D; ++j) {
        Form acc = Form::one(N);
        for (int a : fib->blade(j).indices()) acc = wedge(acc, rows[a]);
        auto x = fib->coords(acc);
        std::vector<SparseMatrix::Entry> col;
        for (int i = 0; i < D; ++i)
            if (!x[i].is_zero()) col.emplace_back(i, x[i]);
        m.set_column(j, std::move(col));
    }
    return GradedOperator(fib, Parity::even, m);
}

// Projector onto forms of degree k (algebraic, on any fiber).
inline GradedOperator degree_projector(const FiberPtr& fib, int k) {
    SparseMatrix m(fib->dim(), fib->dim());
    for (int i : fib->indices_of_degree(k)) m.set_column(i, {{i, Scalar(1)}});
    return GradedOperator(fib, Parity::even, m);
}

// Basis of ker(A) restricted to degree k of the fiber (algebraic part only
// when nvars = 0; otherwise on the polynomial test space).
inline std::vector<Form> kernel_basis(const GradedOperator& A, int k, int nvars = 0, int max_poly_degree = 0) {
    const auto& fib = A.space();
    auto monos = monomials_up_to(nvars, nvars == 0 ? 0 : max_poly_degree);
    int M = int(monos.size());
    auto deg_idx = fib->indices_of_degree(k);
    std::vector<int> cols;
    for (int i : deg_idx)
        for (int m = 0; m < M; ++m) cols.push_back(i * M + m);
    SparseMatrix full = nvars == 0 ? A.algebraic_part() : A.test_matrix(nvars, max_poly_degree);
    std::vector<int> rows(full.rows());
    for (int r = 0; r < full.rows(); ++r) rows[r] = r;
    Matrix dense = full.block(rows, cols).to_dense();
    std::vector<Form> out;
    for (auto& v : kernel(dense)) {
        Form f(fib->base_dim());
        for (std::size_t t = 0; t < cols.size(); ++t) {
            if (v[t].is_zero()) continue;
            int fi = cols[t] / M, mi = cols[t] % M;
            std::vector<Scalar> x(fib->dim());
            x[fi] = v[t];
            f += fib->to_form(x).times(Polynomial::monomial(monos[mi]));
        }
        out.push_back(f);
    }
    return out;
}

}  // namespace hkt
