#pragma once
// Fiber spaces of constant forms and parity-graded operators
//   D = sum_alpha A_alpha (x) d^alpha
// with constant fiber matrices A_alpha. Chevalley-Eilenberg operators only
// carry alpha = 0; flat-space differential operators carry first or higher
// order symbols.

#include "hkt/form.hpp"
#include "hkt/linalg.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace hkt {

class FiberSpace;
using FiberPtr = std::shared_ptr<const FiberSpace>;

// A finite-dimensional space of constant forms on R^N together with the
// induced Hermitian inner product.  Either the full exterior algebra (basis =
// blades in graded order) or a subspace spanned by explicit forms.
class FiberSpace {
public:
    // Full exterior algebra with Hermitian Gram matrix on blades.
    static FiberPtr full(int N, const SparseMatrix& gram) {
        auto f = std::shared_ptr<FiberSpace>(new FiberSpace());
        f->N_ = N;
        f->blades_ = all_blades(N);
        f->blade_index_.reserve(f->blades_.size());
        for (std::size_t t = 0; t < f->blades_.size(); ++t) {
            f->blade_index_.emplace(f->blades_[t].mask, int(t));
            f->degrees_.push_back(f->blades_[t].degree());
        }
        f->set_gram(gram);
        return f;
    }

    // Subspace of `parent` spanned by independent constant forms.
    static FiberPtr sub(const FiberPtr& parent, const std::vector<Form>& basis, std::string label = {}) {
        auto f = std::shared_ptr<FiberSpace>(new FiberSpace());
        f->N_ = parent->N_;
        f->parent_ = parent;
        f->label_ = std::move(label);
        for (const auto& b : basis) {
            auto v = parent->coords(b);
            SparseVector sv;
            for (std::size_t t = 0; t < v.size(); ++t)
                if (!v[t].is_zero()) sv[t] = v[t];
            if (!f->span_.add(sv)) throw std::invalid_argument("FiberSpace::sub: dependent basis");
            f->embed_.push_back(std::move(v));
            auto d = b.degree();
            f->degrees_.push_back(d ? *d : -1);
        }
        // Gram of the subspace: G(i,j) = <b_j, b_i>
        int m = int(basis.size());
        Matrix g(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) g(i, j) = parent->inner(f->embed_[j], f->embed_[i]);
        f->set_gram(SparseMatrix::from_dense(g));
        return f;
    }

    int base_dim() const { return N_; }
    int dim() const { return int(degrees_.size()); }
    int degree(int i) const { return degrees_[i]; }
    bool is_full() const { return parent_ == nullptr; }
    const FiberPtr& parent() const { return parent_; }
    const std::string& label() const { return label_; }
    const SparseMatrix& gram() const { return gram_; }
    const SparseMatrix& gram_inverse() const { return gram_inv_; }
    bool orthonormal() const { return orthonormal_; }

    std::vector<int> indices_of_degree(int k) const {
        std::vector<int> out;
        for (int i = 0; i < dim(); ++i)
            if (degrees_[i] == k) out.push_back(i);
        return out;
    }

    // Basis element i as a constant form.
    Form basis_form(int i) const {
        if (is_full()) return Form::term(N_, blades_[i], Polynomial(Scalar(1)));
        return parent_->to_form(embed_[i]);
    }
    const Blade& blade(int i) const { return blades_.at(i); }
    int blade_index(Blade b) const {
        auto it = blade_index_.find(b.mask);
        if (it == blade_index_.end()) throw std::out_of_range("blade outside fiber");
        return it->second;
    }

    Form to_form(const std::vector<Scalar>& x) const {
        if (!is_full()) {
            std::vector<Scalar> y(parent_->dim());
            for (int i = 0; i < dim(); ++i)
                if (!x[i].is_zero())
                    for (std::size_t t = 0; t < y.size(); ++t)
                        if (!embed_[i][t].is_zero()) y[t] += x[i] * embed_[i][t];
            return parent_->to_form(y);
        }
        Form f(N_);
        for (int i = 0; i < dim(); ++i)
            if (!x[i].is_zero()) f.add(blades_[i], Polynomial(x[i]));
        return f;
    }

    // Coordinates of a constant form; throws if the form leaves the space.
    std::vector<Scalar> coords(const Form& f) const {
        if (!f.is_constant()) throw std::invalid_argument("FiberSpace::coords: non-constant form");
        if (is_full()) {
            std::vector<Scalar> x(dim());
            for (auto& [b, c] : f.coeffs()) x[blade_index(b)] = c.constant_term();
            return x;
        }
        return coords_from_parent(parent_->coords(f));
    }
    std::vector<Scalar> coords_from_parent(const std::vector<Scalar>& y) const {
        SparseVector sv;
        for (std::size_t t = 0; t < y.size(); ++t)
            if (!y[t].is_zero()) sv[t] = y[t];
        auto c = span_.coordinates(sv);
        if (!c) throw std::invalid_argument("FiberSpace::coords: vector outside subspace " + label_);
        return *c;
    }
    const std::vector<Scalar>& embedding(int i) const { return embed_.at(i); }

    // <x, y>, linear in x, conjugate-linear in y.
    Scalar inner(const std::vector<Scalar>& x, const std::vector<Scalar>& y) const {
        auto gx = gram_.apply(x);
        Scalar s;
        for (std::size_t t = 0; t < y.size(); ++t)
            if (!y[t].is_zero() && !gx[t].is_zero()) s += y[t].conj() * gx[t];
        return s;
    }

private:
    FiberSpace() = default;

    void set_gram(const SparseMatrix& g) {
        if (g.rows() != dim() || g.cols() != dim()) throw std::invalid_argument("FiberSpace: Gram shape");
        gram_ = g;
        orthonormal_ = (g == SparseMatrix::identity(dim()));
        if (orthonormal_) {
            gram_inv_ = g;
            return;
        }
        // Gram is block diagonal by degree; invert per block.
        gram_inv_ = SparseMatrix(dim(), dim());
        std::vector<std::vector<SparseMatrix::Entry>> cols(dim());
        for (int k = -1; k <= N_; ++k) {
            auto idx = indices_of_degree(k);
            if (idx.empty()) continue;
            auto inv = inverse(g.block(idx, idx).to_dense());
            if (!inv) throw std::invalid_argument("FiberSpace: singular Gram matrix");
            for (std::size_t a = 0; a < idx.size(); ++a)
                for (std::size_t b = 0; b < idx.size(); ++b)
                    if (!(*inv)(int(a), int(b)).is_zero()) cols[idx[b]].emplace_back(idx[a], (*inv)(int(a), int(b)));
        }
        for (int j = 0; j < dim(); ++j) gram_inv_.set_column(j, std::move(cols[j]));
    }

    int N_ = 0;
    FiberPtr parent_;
    std::string label_;
    std::vector<Blade> blades_;
    std::unordered_map<std::uint32_t, int> blade_index_;
    std::vector<int> degrees_;
    std::vector<std::vector<Scalar>> embed_;
    LinearSpan span_;
    SparseMatrix gram_, gram_inv_;
    bool orthonormal_ = true;
};

enum class Parity { even = 0, odd = 1 };
inline Parity operator+(Parity a, Parity b) { return Parity((int(a) + int(b)) & 1); }

class GradedOperator {
public:
    using Terms = std::map<Monomial, SparseMatrix>;

    GradedOperator() = default;
    GradedOperator(FiberPtr space, Parity parity) : space_(std::move(space)), parity_(parity) {}
    GradedOperator(FiberPtr space, Parity parity, SparseMatrix algebraic)
        : space_(std::move(space)), parity_(parity) {
        add_term(Monomial{}, algebraic);
    }

    static GradedOperator zero(FiberPtr space, Parity p = Parity::even) { return GradedOperator(std::move(space), p); }
    static GradedOperator identity(FiberPtr space) {
        int d = space->dim();
        return GradedOperator(std::move(space), Parity::even, SparseMatrix::identity(d));
    }

    const FiberPtr& space() const { return space_; }
    Parity parity() const { return parity_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_algebraic() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }
    int differential_order() const {
        int o = 0;
        for (auto& [a, _] : terms_) o = std::max(o, a.degree());
        return o;
    }
    SparseMatrix symbol(Monomial alpha) const {
        auto it = terms_.find(alpha);
        return it == terms_.end() ? SparseMatrix(space_->dim(), space_->dim()) : it->second;
    }
    SparseMatrix algebraic_part() const { return symbol(Monomial{}); }

    // Form-degree shift if homogeneous.
    std::optional<int> degree_shift() const {
        std::optional<int> shift;
        for (auto& [a, m] : terms_)
            for (int j = 0; j < m.cols(); ++j)
                for (auto& [i, _] : m.column(j)) {
                    int s = space_->degree(i) - space_->degree(j);
                    if (shift && *shift != s) return std::nullopt;
                    shift = s;
                }
        return shift;
    }

    void add_term(Monomial alpha, const SparseMatrix& m, const Scalar& c = 1) {
        if (m.rows() != space_->dim() || m.cols() != space_->dim())
            throw std::invalid_argument("GradedOperator: symbol shape mismatch");
        if (c.is_zero() || m.is_zero()) return;
        auto it = terms_.find(alpha);
        if (it == terms_.end()) {
            terms_.emplace(alpha, c.is_one() ? m : m * c);
            return;
        }
        it->second.axpy(c, m);
        if (it->second.is_zero()) terms_.erase(it);
    }

    GradedOperator& operator+=(const GradedOperator& o) { return axpy(1, o); }
    GradedOperator& operator-=(const GradedOperator& o) { return axpy(-1, o); }
    GradedOperator& axpy(const Scalar& c, const GradedOperator& o) {
        check_compatible(o);
        if (is_zero()) parity_ = o.parity_;
        else if (!o.is_zero() && parity_ != o.parity_) throw std::invalid_argument("GradedOperator: parity mismatch in sum");
        for (auto& [a, m] : o.terms_) add_term(a, m, c);
        return *this;
    }
    friend GradedOperator operator+(GradedOperator a, const GradedOperator& b) { return a += b; }
    friend GradedOperator operator-(GradedOperator a, const GradedOperator& b) { return a -= b; }
    friend GradedOperator operator*(const Scalar& c, const GradedOperator& a) {
        GradedOperator out(a.space_, a.parity_);
        for (auto& [al, m] : a.terms_) out.add_term(al, m, c);
        return out;
    }
    friend GradedOperator operator*(const GradedOperator& a, const GradedOperator& b) {
        a.check_compatible(b);
        GradedOperator out(a.space_, a.parity_ + b.parity_);
        for (auto& [x, ma] : a.terms_)
            for (auto& [y, mb] : b.terms_) out.add_term(x * y, ma * mb);
        return out;
    }
    friend bool operator==(const GradedOperator& a, const GradedOperator& b) {
        if (a.space_ != b.space_) return false;
        if (a.is_zero() && b.is_zero()) return true;
        return a.parity_ == b.parity_ && a.terms_ == b.terms_;
    }
    GradedOperator operator-() const { return Scalar(-1) * *this; }

    // Formal L^2 adjoint: (A d^alpha)^* = (-1)^{|alpha|} A^dagger d^alpha.
    GradedOperator adjoint() const {
        GradedOperator out(space_, parity_);
        for (auto& [a, m] : terms_) {
            SparseMatrix h = m.adjoint();
            if (!space_->orthonormal()) h = space_->gram_inverse() * h * space_->gram();
            out.add_term(a, h, (a.degree() & 1) ? Scalar(-1) : Scalar(1));
        }
        return out;
    }

    GradedOperator power(int k) const {
        GradedOperator out = identity(space_);
        for (int t = 0; t < k; ++t) out = out * *this;
        return out;
    }

    // Apply to a form with polynomial coefficients.
    Form apply(const Form& f) const {
        // group coefficients by monomial into fiber vectors
        std::map<Monomial, Form> by_mono;
        for (auto& [b, p] : f.coeffs())
            for (auto& [m, c] : p.terms()) {
                auto [it, _] = by_mono.try_emplace(m, Form(f.dim()));
                it->second.add(b, Polynomial(c));
            }
        Form out(space_->base_dim());
        for (auto& [m, fib] : by_mono) {
            auto x = space_->coords(fib);
            for (auto& [alpha, mat] : terms_) {
                if (!alpha.divides(m)) continue;
                Polynomial dm = Polynomial::monomial(m).derivative(alpha);
                auto y = mat.apply(x);
                out += space_->to_form(y).times(dm);
            }
        }
        return out;
    }
    std::vector<Scalar> apply_algebraic(const std::vector<Scalar>& x) const { return algebraic_part().apply(x); }

    // Exact matrix on the test space  fiber x {monomials of degree <= max_degree}.
    // Column/row index = fiber_index * M + monomial_index.
    SparseMatrix test_matrix(int nvars, int max_degree) const {
        auto monos = monomials_up_to(nvars, max_degree);
        std::map<Monomial, int> mindex;
        for (std::size_t t = 0; t < monos.size(); ++t) mindex[monos[t]] = int(t);
        int F = space_->dim(), M = int(monos.size());
        SparseMatrix out(F * M, F * M);
        for (int j = 0; j < F; ++j)
            for (int mj = 0; mj < M; ++mj) {
                std::vector<SparseMatrix::Entry> col;
                for (auto& [alpha, mat] : terms_) {
                    if (!alpha.divides(monos[mj])) continue;
                    Polynomial dm = Polynomial::monomial(monos[mj]).derivative(alpha);
                    for (auto& [m, c] : dm.terms()) {
                        auto it = mindex.find(m);
                        if (it == mindex.end()) continue;
                        for (auto& [i, v] : mat.column(j)) col.emplace_back(i * M + it->second, v * c);
                    }
                }
                out.set_column(j * M + mj, std::move(col));
            }
        return out;
    }

    // Flattened coordinates for span computations.
    SparseVector flatten() const {
        SparseVector v;
        for (auto& [a, m] : terms_) {
            std::uint64_t akey = 0;
            for (int j = 0; j < kMaxVariables; ++j) {
                int e = a.exponent(j);
                if (e > 7) throw std::overflow_error("GradedOperator::flatten: symbol order too large");
                akey |= std::uint64_t(e) << (3 * j);
            }
            for (int c = 0; c < m.cols(); ++c)
                for (auto& [r, x] : m.column(c))
                    v.emplace((akey << 40) | (std::uint64_t(r) << 20) | std::uint64_t(c), x);
        }
        return v;
    }

    // Restriction to an invariant subspace of the operator's fiber.
    GradedOperator restrict_to(const FiberPtr& sub) const {
        if (sub->parent() != space_) throw std::invalid_argument("restrict_to: subspace of a different fiber");
        GradedOperator out(sub, parity_);
        for (auto& [a, m] : terms_) {
            SparseMatrix r(sub->dim(), sub->dim());
            for (int j = 0; j < sub->dim(); ++j) {
                auto y = m.apply(sub->embedding(j));
                auto c = sub->coords_from_parent(y);
                std::vector<SparseMatrix::Entry> col;
                for (int i = 0; i < sub->dim(); ++i)
                    if (!c[i].is_zero()) col.emplace_back(i, c[i]);
                r.set_column(j, std::move(col));
            }
            out.add_term(a, r);
        }
        return out;
    }

    // Whether the operator maps the subspace into itself.
    bool preserves(const FiberPtr& sub) const {
        try {
            (void)restrict_to(sub);
            return true;
        } catch (const std::invalid_argument&) {
            return false;
        }
    }

private:
    void check_compatible(const GradedOperator& o) const {
        if (space_ != o.space_) throw std::invalid_argument("GradedOperator: incompatible domains");
    }

    FiberPtr space_;
    Parity parity_ = Parity::even;
    Terms terms_;
};

// AB - (-1)^{|A||B|} BA
inline GradedOperator supercommutator(const GradedOperator& a, const GradedOperator& b) {
    GradedOperator out = a * b;
    Scalar s = (a.parity() == Parity::odd && b.parity() == Parity::odd) ? Scalar(1) : Scalar(-1);
    out.axpy(s, b * a);
    return out;
}

// [x_j, D]: bracket with multiplication by a coordinate function (even).
inline GradedOperator coordinate_bracket(int j, const GradedOperator& d) {
    GradedOperator out(d.space(), d.parity());
    for (auto& [a, m] : d.terms()) {
        int e = a.exponent(j);
        if (e == 0) continue;
        out.add_term(a / Monomial::var(j), m, Scalar(-e));
    }
    return out;
}

// Whether A = c B for some scalar c; returns c (0 when A = 0).
inline std::optional<Scalar> proportionality(const GradedOperator& a, const GradedOperator& b) {
    auto va = a.flatten(), vb = b.flatten();
    if (va.empty()) return Scalar(0);
    if (vb.empty()) return std::nullopt;
    auto& [k0, x0] = *vb.begin();
    auto it = va.find(k0);
    if (it == va.end()) return std::nullopt;
    Scalar c = it->second / x0;
    SparseVector diff = va;
    axpy(diff, -c, vb);
    if (!diff.empty()) return std::nullopt;
    return c;
}

}  // namespace hkt
