#pragma once
// metric_hodge: quaternionic Hermitian metrics, fundamental forms, Lefschetz
// triples, the Hodge star and the so(1,4) closure.

#include "hkt/closure.hpp"
#include "hkt/quaternionic.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hkt {

// Exact square root of a nonnegative rational, if it is a square.
inline std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
    if (sgn(q) < 0) return std::nullopt;
    mpz_class n = q.get_num(), d = q.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    return mpq_class(rn, rd);
}

// a = c b for a scalar c; nullopt when not proportional or b = 0.
inline std::optional<Scalar> form_ratio(const Form& a, const Form& b) {
    if (b.is_zero()) return std::nullopt;
    if (a.is_zero()) return Scalar(0);
    auto& [blade, poly] = *b.coeffs().begin();
    auto& [mono, coef] = *poly.terms().begin();
    Scalar c = a.coefficient(blade).coefficient(mono) / coef;
    if (!(a == c * b)) return std::nullopt;
    return c;
}

inline long factorial(int n) {
    long r = 1;
    for (int t = 2; t <= n; ++t) r *= t;
    return r;
}

// Vector-level Gram matrix g and the induced covector Gram g^{-1}.
struct HermitianData {
    Matrix gram;
    Matrix cov_gram;

    static HermitianData make(const Matrix& g, const QuaternionTriple& t) {
        int N = t.I.rows();
        if (g.rows() != N || g.cols() != N) throw StructureError("metric-shape: Gram matrix must be 4n x 4n");
        if (!g.is_real() || !(g.transpose() == g)) throw StructureError("metric-shape: Gram matrix must be real symmetric");
        for (int k = 1; k <= N; ++k) {
            Matrix m(k, k);
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) m(a, b) = g(a, b);
            if (sgn(determinant(m).re()) <= 0)
                throw StructureError("metric-positivity: leading minor " + std::to_string(k) + " is not positive");
        }
        const char* names[] = {"I", "J", "K"};
        const Matrix* Ls[] = {&t.I, &t.J, &t.K};
        for (int s = 0; s < 3; ++s)
            if (!(Ls[s]->transpose() * g * *Ls[s] == g))
                throw StructureError(std::string("metric-invariance: g(") + names[s] + "x, " + names[s] + "y) != g(x,y)");
        return HermitianData{g, *inverse(g)};
    }
};

struct FundamentalForms {
    Form omega_I, omega_J, omega_K, Omega, Omega_bar;
    Form vol;  // unit volume form, oriented so that Omega^n ^ Omega_bar^n is positive
};

enum class FormName { omega_I, omega_J, omega_K, Omega, Omega_bar };

inline const char* to_string(FormName f) {
    switch (f) {
        case FormName::omega_I: return "omega_I";
        case FormName::omega_J: return "omega_J";
        case FormName::omega_K: return "omega_K";
        case FormName::Omega: return "Omega";
        case FormName::Omega_bar: return "Omega_bar";
    }
    return "?";
}

struct LefschetzTriple {
    GradedOperator L, Lambda, H;
};

// One star identity, as written, versus the coefficient actually found.
struct StarClaim {
    std::string name;
    Scalar stated;                  // coefficient of the identity as written
    std::optional<Scalar> actual;   // nullopt when the two sides are not proportional
    bool holds() const { return actual && *actual == stated; }
};

class MetricHodge {
public:
    MetricHodge(const QuaternionTriple& t, const Matrix& g)
        : herm_(HermitianData::make(g, t)),
          fib_(full_fiber(t.I.rows(), herm_.cov_gram)),
          frame_(std::make_shared<QuaternionicFrame>(fib_, t, herm_.cov_gram)) {
        N_ = t.I.rows();
        n_ = N_ / 4;
        build_forms();
    }

    const HermitianData& hermitian() const { return herm_; }
    const FiberPtr& fiber() const { return fib_; }
    const QuaternionicFrame& frame() const { return *frame_; }
    const std::shared_ptr<QuaternionicFrame>& frame_ptr() const { return frame_; }
    const FundamentalForms& forms() const { return forms_; }
    int n() const { return n_; }
    int N() const { return N_; }

    // omega_L(x,y) = g(x, Ly)
    Form fundamental_form(const Matrix& L) const {
        Matrix w = herm_.gram * L;
        Form f(N_);
        for (int a = 0; a < N_; ++a)
            for (int b = a + 1; b < N_; ++b)
                if (!w(a, b).is_zero()) f.add(Blade::from_indices({a, b}), Polynomial(w(a, b)));
        return f;
    }

    const Form& form(FormName f) const {
        switch (f) {
            case FormName::omega_I: return forms_.omega_I;
            case FormName::omega_J: return forms_.omega_J;
            case FormName::omega_K: return forms_.omega_K;
            case FormName::Omega: return forms_.Omega;
            case FormName::Omega_bar: return forms_.Omega_bar;
        }
        throw std::invalid_argument("unknown form");
    }

    // L = wedge, Lambda = Hermitian adjoint, H = [L, Lambda].
    LefschetzTriple lefschetz_triple(const Form& phi) const {
        if (phi.degree() != 2 || !phi.is_constant())
            throw std::invalid_argument("type error: Lefschetz triple needs a constant 2-form");
        auto L = wedge_operator(fib_, phi);
        auto Lambda = L.adjoint();
        auto H = supercommutator(L, Lambda);
        return {L, Lambda, H};
    }
    const LefschetzTriple& triple(FormName f) const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        auto it = triples_.find(f);
        if (it == triples_.end()) it = triples_.emplace(f, lefschetz_triple(form(f))).first;
        return it->second;
    }

    // Complex-linear star S on the real blade basis; the Hodge star is S o conj.
    const GradedOperator& star_linear() const {
        std::lock_guard<std::recursive_mutex> lock(mu_);
        if (!star_) star_ = std::make_unique<GradedOperator>(make_star());
        return *star_;
    }
    // Conjugate-linear: alpha ^ *beta = <alpha, beta> vol.
    Form hodge_star(const Form& beta) const { return star_linear().apply(beta.conj()); }

    // [L_Omega, Lambda_eta] for a (1,0)-form eta.
    GradedOperator inner_mult_commutator(const Form& eta) const {
        check_type10(eta);
        auto Lambda_eta = contraction_operator(fib_, eta);
        return supercommutator(triple(FormName::Omega).L, Lambda_eta);
    }
    // [L_Omega, Lambda_eta] = L_{J(conj eta)}
    bool inner_mult_identity(const Form& eta) const {
        check_type10(eta);
        return inner_mult_commutator(eta) == wedge_operator(fib_, frame_->J_c(eta));
    }

    // The star identities as written, with their actual coefficients.
    std::vector<StarClaim> star_claims() const {
        std::vector<StarClaim> out;
        Scalar nf2 = Scalar(mpq_class(1, factorial(n_) * factorial(n_)));
        Form On = wedge_power(forms_.Omega, n_), Obn = wedge_power(forms_.Omega_bar, n_);
        Form On1 = wedge_power(forms_.Omega, n_ - 1);
        Form top = wedge(On, Obn), sub = wedge(On1, Obn);
        out.push_back({"star(1) = (1/n!^2) Omega^n Omega_bar^n", nf2, form_ratio(hodge_star(Form::one(N_)), top)});
        out.push_back({"star(Omega) = 2n (1/n!^2) Omega^(n-1) Omega_bar^n", Scalar(2 * n_) * nf2,
                       form_ratio(hodge_star(forms_.Omega), sub)});
        std::optional<Scalar> c;
        bool consistent = true;
        for (auto& eta : frame_->type10()) {
            auto r = form_ratio(hodge_star(eta), wedge(sub, frame_->J_c(eta)));
            if (!r || (c && *c != *r)) consistent = false;
            c = r;
        }
        out.push_back({"star(eta) = -(1/n!^2) Omega^(n-1) Omega_bar^n J(conj eta)", -nf2,
                       consistent ? c : std::nullopt});
        return out;
    }

    // Lambda_Omega L_Omega^n Omega_bar^n = c Omega^(n-1) Omega_bar^n; returns c.
    std::optional<Scalar> lambda_omega_coefficient() const {
        const auto& t = triple(FormName::Omega);
        Form Obn = wedge_power(forms_.Omega_bar, n_);
        Form lhs = t.Lambda.apply(t.L.power(n_).apply(Obn));
        return form_ratio(lhs, wedge(wedge_power(forms_.Omega, n_ - 1), Obn));
    }

    // vol / (omega_I^{2n} / (2n)!)
    Scalar volume_ratio() const {
        Form sym = Scalar(mpq_class(1, factorial(2 * n_))) * wedge_power(forms_.omega_I, 2 * n_);
        return *form_ratio(forms_.vol, sym);
    }

    static std::vector<std::string> so14_names() {
        return {"H", "L_I", "L_J", "L_K", "Lambda_I", "Lambda_J", "Lambda_K", "ad_I", "ad_J", "ad_K"};
    }
    std::vector<GradedOperator> so14_family() const {
        const auto& tI = triple(FormName::omega_I);
        return {tI.H,
                tI.L,
                triple(FormName::omega_J).L,
                triple(FormName::omega_K).L,
                tI.Lambda,
                triple(FormName::omega_J).Lambda,
                triple(FormName::omega_K).Lambda,
                frame_->ad_I(),
                frame_->ad_J(),
                frame_->ad_K()};
    }
    ClosureResult so14_closure(int cap = 64) const { return close_and_extract(so14_family(), so14_names(), cap); }

private:
    void check_type10(const Form& eta) const {
        if (!eta.is_zero() && (eta.degree() != 1 || !(frame_->pi(1, 0).apply(eta) == eta)))
            throw std::invalid_argument("type error: expected a (1,0)-form");
    }

    void build_forms() {
        const auto& t = frame_->triple();
        forms_.omega_I = fundamental_form(t.I);
        forms_.omega_J = fundamental_form(t.J);
        forms_.omega_K = fundamental_form(t.K);
        forms_.Omega = Scalar::rational(1, 2) * (forms_.omega_J + Scalar::i() * forms_.omega_K);
        forms_.Omega_bar = forms_.Omega.conj();
        if (!(frame_->pi(2, 0).apply(forms_.Omega) == forms_.Omega))
            throw StructureError("fundamental forms: Omega is not of type (2,0)");
        Blade topb{(std::uint32_t{1} << N_) - 1};
        Scalar c = wedge(wedge_power(forms_.Omega, n_), wedge_power(forms_.Omega_bar, n_)).coefficient(topb).constant_term();
        if (c.is_zero() || !c.is_real()) throw StructureError("fundamental forms: Omega^n is degenerate");
        auto root = rational_sqrt(determinant(herm_.gram).re());
        if (!root) throw StructureError("metric-shape: det g is not a rational square");
        Scalar v = sgn(c.re()) > 0 ? Scalar(*root) : Scalar(-*root);
        forms_.vol = Form::term(N_, topb, Polynomial(v));
        vol_coef_ = v;
    }

    // *e_B = sum_A <e^A, e^B> v sign(A, A^c) e^{A^c}
    GradedOperator make_star() const {
        int D = fib_->dim();
        std::uint32_t full = (std::uint32_t{1} << N_) - 1;
        const auto& G = fib_->gram();
        SparseMatrix m(D, D);
        for (int j = 0; j < D; ++j) {
            std::vector<SparseMatrix::Entry> col;
            for (int i = 0; i < D; ++i) {
                Scalar gij = G.at(j, i);  // <e_i, e_j>
                if (gij.is_zero()) continue;
                Blade A = fib_->blade(i), Ac{full & ~A.mask};
                col.emplace_back(fib_->blade_index(Ac), gij * vol_coef_ * Scalar(wedge_sign(A, Ac)));
            }
            m.set_column(j, std::move(col));
        }
        return GradedOperator(fib_, Parity::even, m);
    }

    HermitianData herm_;
    FiberPtr fib_;
    std::shared_ptr<QuaternionicFrame> frame_;
    FundamentalForms forms_;
    Scalar vol_coef_;
    int N_ = 0, n_ = 0;
    mutable std::recursive_mutex mu_;
    mutable std::map<FormName, LefschetzTriple> triples_;
    mutable std::unique_ptr<GradedOperator> star_;
};

// so(1,4) in the basis M_ab (a<b), eta = diag(-1,1,1,1,1):
// [M_ab, M_cd] = eta_bc M_ad - eta_ac M_bd - eta_bd M_ac + eta_ad M_bc.
inline SuperAlgebraPresentation so14_reference() {
    std::vector<std::pair<int, int>> idx;
    std::vector<std::string> names;
    for (int a = 0; a < 5; ++a)
        for (int b = a + 1; b < 5; ++b) {
            idx.emplace_back(a, b);
            names.push_back("M" + std::to_string(a) + std::to_string(b));
        }
    auto p = SuperAlgebraPresentation::empty_with(names, std::vector<Parity>(10, Parity::even));
    auto eta = [](int a, int b) { return a != b ? 0 : (a == 0 ? -1 : 1); };
    auto put = [&](std::vector<Scalar>& v, int a, int b, int c) {
        if (a == b || c == 0) return;
        int s = a < b ? 1 : -1;
        auto key = std::make_pair(std::min(a, b), std::max(a, b));
        for (int k = 0; k < 10; ++k)
            if (idx[k] == key) v[k] += Scalar(s * c);
    };
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            auto [a, b] = idx[i];
            auto [c, d] = idx[j];
            std::vector<Scalar> v(10);
            put(v, a, d, eta(b, c));
            put(v, b, d, -eta(a, c));
            put(v, a, c, -eta(b, d));
            put(v, b, c, eta(a, d));
            p.table[i][j] = v;
        }
    return p;
}

}  // namespace hkt
