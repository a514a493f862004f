#pragma once
// quaternionic_frame: the quaternion triple on the base space, its action on
// forms, bigradings, su(2) weights and the Lambda^+ identifications.

#include "hkt/exterior.hpp"

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hkt {

struct StructureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Vector-level endomorphisms: (L v)_a = sum_c L(a,c) v_c.
struct QuaternionTriple {
    Matrix I, J, K;

    static QuaternionTriple from_IJ(const Matrix& I, const Matrix& J) {
        QuaternionTriple t{I, J, I * J};
        t.validate();
        return t;
    }

    void validate() const {
        int N = I.rows();
        if (N == 0 || N % 4 != 0 || I.cols() != N || J.rows() != N || J.cols() != N)
            throw StructureError("quaternion-relations: frame matrices must be 4n x 4n");
        Matrix minus = Matrix::identity(N) * Scalar(-1);
        if (!(I * I == minus)) throw StructureError("quaternion-relations: I^2 != -Id");
        if (!(J * J == minus)) throw StructureError("quaternion-relations: J^2 != -Id");
        if (!(K * K == minus)) throw StructureError("quaternion-relations: K^2 != -Id");
        if (!(I * J == K) || !(J * I == K * Scalar(-1))) throw StructureError("quaternion-relations: IJ = -JI = K fails");
        if (!I.is_real() || !J.is_real()) throw StructureError("quaternion-relations: frame must be real");
    }

    // a I + b J + c K
    Matrix induced(const Scalar& a, const Scalar& b, const Scalar& c) const { return I * a + J * b + K * c; }

    // (I', J', K') = R (I, J, K) for R in SO(3).
    QuaternionTriple rotated(const Matrix& R) const {
        if (R.rows() != 3 || R.cols() != 3) throw std::invalid_argument("rotation must be 3x3");
        if (!(R * R.transpose() == Matrix::identity(3)) || determinant(R) != Scalar(1))
            throw std::invalid_argument("rotation must lie in SO(3)");
        QuaternionTriple t{induced(R(0, 0), R(0, 1), R(0, 2)), induced(R(1, 0), R(1, 1), R(1, 2)),
                           induced(R(2, 0), R(2, 1), R(2, 2))};
        t.validate();
        return t;
    }
};

// Rational rotation attached to an integer quaternion (a,b,c,d) != 0.
inline Matrix rotation_from_quaternion(long a, long b, long c, long d) {
    long m = a * a + b * b + c * c + d * d;
    if (m == 0) throw std::invalid_argument("zero quaternion");
    long e[3][3] = {{a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)},
                    {2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)},
                    {2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d}};
    Matrix R(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) R(i, j) = Scalar::rational(e[i][j], m);
    return R;
}

// Lagrange projector onto the eigenvalue `target` of a diagonalizable block
// whose spectrum lies in `spectrum`.
inline Matrix lagrange_projector(const Matrix& A, const Scalar& target, const std::vector<Scalar>& spectrum) {
    int d = A.rows();
    Matrix P = Matrix::identity(d);
    for (auto& s : spectrum) {
        if (s == target) continue;
        Matrix f = (A - Matrix::identity(d) * s) * (Scalar(1) / (target - s));
        P = P * f;
    }
    return P;
}

// Assemble a block-diagonal (by degree) fiber operator.
inline SparseMatrix assemble_degree_blocks(const FiberPtr& fib, const std::map<int, Matrix>& blocks) {
    std::vector<std::vector<SparseMatrix::Entry>> cols(fib->dim());
    for (auto& [k, B] : blocks) {
        auto idx = fib->indices_of_degree(k);
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = 0; b < idx.size(); ++b)
                if (!B(int(a), int(b)).is_zero()) cols[idx[b]].emplace_back(idx[a], B(int(a), int(b)));
    }
    SparseMatrix m(fib->dim(), fib->dim());
    for (int j = 0; j < fib->dim(); ++j) m.set_column(j, std::move(cols[j]));
    return m;
}

inline Matrix degree_block(const FiberPtr& fib, const SparseMatrix& m, int k) {
    auto idx = fib->indices_of_degree(k);
    return m.block(idx, idx).to_dense();
}

// Bigrade projectors pi^{p,q} for a complex structure L.
struct BigradeDecomposition {
    int n = 0;
    std::map<std::pair<int, int>, GradedOperator> projectors;
    std::map<std::pair<int, int>, int> dims;

    const GradedOperator& pi(int p, int q) const {
        auto it = projectors.find({p, q});
        if (it == projectors.end()) throw std::out_of_range("bigrade out of range");
        return it->second;
    }
};

struct WeightDecomposition {
    // per degree: weight -> isotypic projector
    std::map<int, std::map<int, GradedOperator>> projectors;
    std::map<int, std::map<int, int>> dims;
};

class QuaternionicFrame {
public:
    QuaternionicFrame(FiberPtr fib, QuaternionTriple t, Matrix cov_gram)
        : fib_(std::move(fib)), t_(std::move(t)), cov_gram_(std::move(cov_gram)) {
        t_.validate();
        N_ = t_.I.rows();
        if (fib_->base_dim() != N_ || !fib_->is_full()) throw std::invalid_argument("frame/fiber mismatch");
        n_ = N_ / 4;
    }

    const FiberPtr& fiber() const { return fib_; }
    const QuaternionTriple& triple() const { return t_; }
    const Matrix& covector_gram() const { return cov_gram_; }
    int n() const { return n_; }
    int N() const { return N_; }

    // Derivation extension of the pullback alpha -> alpha o L; (p-q) i on (p,q)-forms of L.
    GradedOperator ad(const Matrix& L) const {
        check_complex_structure(L);
        std::vector<Form> img;
        for (int a = 0; a < N_; ++a) {
            Form r(N_);
            for (int c = 0; c < N_; ++c)
                if (!L(a, c).is_zero()) r.add(Blade::single(c), Polynomial(L(a, c)));
            img.push_back(r);
        }
        return derivation_extension(fib_, img, Parity::even);
    }
    const GradedOperator& ad_I() const { return cached("ad_I", [&] { return ad(t_.I); }); }
    const GradedOperator& ad_J() const { return cached("ad_J", [&] { return ad(t_.J); }); }
    const GradedOperator& ad_K() const { return cached("ad_K", [&] { return ad(t_.K); }); }

    // Multiplicative extension of the group action alpha -> alpha o L^{-1}.
    GradedOperator extend_multiplicative(const Matrix& L) const {
        auto inv = inverse(L);
        if (!inv) throw StructureError("extend_multiplicative: singular endomorphism");
        return multiplicative_extension(fib_, *inv);
    }
    const GradedOperator& act_I() const { return cached("act_I", [&] { return extend_multiplicative(t_.I); }); }
    const GradedOperator& act_J() const { return cached("act_J", [&] { return extend_multiplicative(t_.J); }); }
    const GradedOperator& act_K() const { return cached("act_K", [&] { return extend_multiplicative(t_.K); }); }
    const GradedOperator& act_I_inverse() const {
        return cached("act_I_inv", [&] { return extend_multiplicative(t_.I * Scalar(-1)); });
    }
    const GradedOperator& act_J_inverse() const {
        return cached("act_J_inv", [&] { return extend_multiplicative(t_.J * Scalar(-1)); });
    }

    // J_c(eta) = J(conj(eta)) on constant forms.
    Form J_c(const Form& eta) const { return act_J().apply(eta.conj()); }

    const BigradeDecomposition& bigrade() const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        if (!bigrade_) bigrade_ = std::make_unique<BigradeDecomposition>(make_bigrade(ad_I()));
        return *bigrade_;
    }
    BigradeDecomposition bigrade_for(const Matrix& L) const { return make_bigrade(ad(L)); }
    const GradedOperator& pi(int p, int q) const { return bigrade().pi(p, q); }

    // Projector onto Lambda^{*,0}.
    const GradedOperator& pi_star0() const {
        return cached("pi_star0", [&] {
            GradedOperator s = GradedOperator::zero(fib_);
            for (int p = 0; p <= 2 * n_; ++p) s += pi(p, 0);
            return s;
        });
    }

    // Covector basis of Lambda^{1,0}_L, orthogonal for the Hermitian product.
    std::vector<Form> type10_basis(const Matrix& L) const {
        check_complex_structure(L);
        Matrix A = L.transpose() - Matrix::identity(N_) * Scalar::i();
        auto ker = kernel(A);
        if (int(ker.size()) != 2 * n_) throw StructureError("type (1,0) space has wrong dimension");
        // Gram-Schmidt with <u,v> = sum u_a conj(v_b) G(a,b)
        auto herm = [&](const std::vector<Scalar>& u, const std::vector<Scalar>& v) {
            Scalar s;
            for (int a = 0; a < N_; ++a)
                for (int b = 0; b < N_; ++b)
                    if (!u[a].is_zero() && !v[b].is_zero()) s += u[a] * v[b].conj() * cov_gram_(a, b);
            return s;
        };
        std::vector<std::vector<Scalar>> orth;
        for (auto& v : ker) {
            auto w = v;
            for (auto& o : orth) {
                Scalar c = herm(w, o) / herm(o, o);
                for (int a = 0; a < N_; ++a) w[a] -= c * o[a];
            }
            orth.push_back(w);
        }
        std::vector<Form> out;
        for (auto& v : orth) {
            Form f(N_);
            for (int a = 0; a < N_; ++a)
                if (!v[a].is_zero()) f.add(Blade::single(a), Polynomial(v[a]));
            out.push_back(f);
        }
        return out;
    }
    const std::vector<Form>& type10() const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        if (type10_.empty()) type10_ = type10_basis(t_.I);
        return type10_;
    }

    // Basis of Lambda^{p,0}_I for all p: wedges of the (1,0) basis.
    std::vector<Form> holomorphic_basis() const {
        const auto& z = type10();
        std::vector<Form> out;
        int m = int(z.size());
        for (int p = 0; p <= m; ++p)
            for (auto& b : blades_of_degree(m, p)) {
                Form f = Form::one(N_);
                for (int a : b.indices()) f = wedge(f, z[a]);
                out.push_back(f);
            }
        return out;
    }
    const FiberPtr& holomorphic_fiber() const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        if (!hol_) hol_ = FiberSpace::sub(fib_, holomorphic_basis(), "Lambda^{*,0}");
        return hol_;
    }

    const GradedOperator& casimir() const {
        return cached("casimir", [&] { return ad_I() * ad_I() + ad_J() * ad_J() + ad_K() * ad_K(); });
    }

    const WeightDecomposition& weights() const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        if (!weights_) weights_ = std::make_unique<WeightDecomposition>(make_weights());
        return *weights_;
    }

    // Projector onto Lambda^p_+ (top weight p), p <= 2n.
    const GradedOperator& plus_projector(int p) const {
        if (p < 0 || p > 2 * n_) throw std::out_of_range("plus_projector: degree out of range");
        return weights().projectors.at(p).at(p);
    }
    // Sum over p of the plus projectors.
    const GradedOperator& plus_projector_all() const {
        return cached("plus_all", [&] {
            GradedOperator s = GradedOperator::zero(fib_);
            for (int p = 0; p <= 2 * n_; ++p) s += plus_projector(p);
            return s;
        });
    }

    // R raises the ad_I eigenvalue by 2i; Rbar lowers it.
    const GradedOperator& raising() const {
        return cached("R", [&] { return Scalar::rational(1, 2) * (ad_J() + Scalar::i() * ad_K()); });
    }
    const GradedOperator& lowering() const {
        return cached("Rbar", [&] { return Scalar::rational(1, 2) * (ad_J() - Scalar::i() * ad_K()); });
    }

    // Normalization of the Lambda^{p,q}_+ -> Lambda^{p+q,0} iso: (i/2)^q / q!.
    static Scalar iso_constant(int q) {
        Scalar c = 1;
        for (int t = 1; t <= q; ++t) c *= Scalar(mpq_class(0), mpq_class(1, 2)) / Scalar(t);
        return c;
    }
    GradedOperator plus_bigrade_iso(int p, int q) const {
        if (p < 0 || q < 0 || p + q > 2 * n_) throw std::out_of_range("plus_bigrade_iso: bigrade out of range");
        return iso_constant(q) * raising().power(q);
    }
    // Inverse iso Lambda^{p+q,0} -> Lambda^{p,q}_+, computed from Rbar^q and the sl(2) scalar.
    GradedOperator plus_bigrade_iso_inverse(int p, int q) const {
        int w = p + q;
        // [R, Rbar] = -h with h = -i ad_I, so R^q Rbar^q = (-1)^q prod t(w-t+1)
        // on highest weight vectors of weight w.
        Scalar s = 1;
        for (int t = 1; t <= q; ++t) s *= Scalar(-t * (w - t + 1));
        return (Scalar(1) / (iso_constant(q) * s)) * lowering().power(q);
    }

    // pi^{0,2} o d vanishes on (1,0)-forms of L, symbol by symbol.
    bool nijenhuis_check(const Matrix& L, const GradedOperator& d) const {
        auto bg = (L == t_.I) ? bigrade() : bigrade_for(L);
        const auto& p02 = bg.pi(0, 2);
        const auto& p10 = bg.pi(1, 0);
        for (auto& [alpha, m] : d.terms()) {
            SparseMatrix t = p02.algebraic_part() * m * p10.algebraic_part();
            if (!t.is_zero()) return false;
        }
        return true;
    }

private:
    void check_complex_structure(const Matrix& L) const {
        if (L.rows() != N_ || !(L * L == Matrix::identity(N_) * Scalar(-1)))
            throw StructureError("complex structure: L^2 != -Id");
    }

    template <class F>
    const GradedOperator& cached(const std::string& key, F&& make) const {
        {
            std::lock_guard<std::recursive_mutex> lock(mu_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return *it->second;
        }
        auto op = std::make_shared<GradedOperator>(make());
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto [it, _] = cache_.emplace(key, std::move(op));
        return *it->second;
    }

    BigradeDecomposition make_bigrade(const GradedOperator& adL) const {
        BigradeDecomposition bd;
        bd.n = n_;
        SparseMatrix A = adL.algebraic_part();
        for (int k = 0; k <= N_; ++k) {
            Matrix block = degree_block(fib_, A, k);
            int pmin = std::max(0, k - 2 * n_), pmax = std::min(k, 2 * n_);
            std::vector<Scalar> spec;
            for (int p = pmin; p <= pmax; ++p) spec.push_back(Scalar(mpq_class(0), mpq_class(2 * p - k)));
            for (int p = pmin; p <= pmax; ++p) {
                Matrix P = lagrange_projector(block, Scalar(mpq_class(0), mpq_class(2 * p - k)), spec);
                auto op = GradedOperator(fib_, Parity::even, assemble_degree_blocks(fib_, {{k, P}}));
                bd.dims[{p, k - p}] = rank(P);
                bd.projectors.emplace(std::make_pair(p, k - p), std::move(op));
            }
        }
        return bd;
    }

    WeightDecomposition make_weights() const {
        WeightDecomposition wd;
        SparseMatrix C = casimir().algebraic_part();
        for (int k = 0; k <= N_; ++k) {
            Matrix block = degree_block(fib_, C, k);
            int top = std::min(k, N_ - k);
            std::vector<Scalar> spec;
            std::vector<int> ws;
            for (int w = top; w >= 0; w -= 2) {
                ws.push_back(w);
                spec.push_back(Scalar(-w * (w + 2)));
            }
            for (std::size_t t = 0; t < ws.size(); ++t) {
                Matrix P = lagrange_projector(block, spec[t], spec);
                wd.dims[k][ws[t]] = rank(P);
                wd.projectors[k].emplace(ws[t], GradedOperator(fib_, Parity::even, assemble_degree_blocks(fib_, {{k, P}})));
            }
        }
        return wd;
    }

    FiberPtr fib_;
    QuaternionTriple t_;
    Matrix cov_gram_;
    int N_ = 0, n_ = 0;
    mutable std::recursive_mutex mu_;
    mutable std::map<std::string, std::shared_ptr<GradedOperator>> cache_;
    mutable std::unique_ptr<BigradeDecomposition> bigrade_;
    mutable std::unique_ptr<WeightDecomposition> weights_;
    mutable std::vector<Form> type10_;
    mutable FiberPtr hol_;
};

}  // namespace hkt
