#pragma once
// spinor_lefschetz: the torsion 1-form theta, the normalized Dolbeault complex
// on half-forms, harmonic spaces, the hard Lefschetz action and the pairing.

#include "hkt/model.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hkt {

struct ThetaData {
    Form theta, theta_bar, theta_J;
    bool del_closed = false;       // del theta = 0
    bool mixed_closed = false;     // del theta_J + del_J theta = 0
};

// del Omega_bar^n = theta ^ Omega_bar^n, solved monomial by monomial.
inline ThetaData extract_theta(const ManifoldModel& m) {
    const auto& fr = m.frame();
    const auto& D = m.dolbeault();
    int N = m.N(), n = m.n();
    Form Obn = wedge_power(m.metric().forms().Omega_bar, n);
    const auto& z = fr.type10();
    // columns: z_a ^ Omega_bar^n
    const auto& fib = m.fiber();
    Matrix A(fib->dim(), int(z.size()));
    for (std::size_t a = 0; a < z.size(); ++a) {
        auto c = fib->coords(wedge(z[a], Obn));
        for (int i = 0; i < fib->dim(); ++i) A(i, int(a)) = c[i];
    }
    if (rank(A) != int(z.size())) throw StructureError("degeneracy: wedge with Omega_bar^n is not injective on (1,0)-forms");
    Form rhs = D.del.apply(Obn);
    // group the right side by monomial
    std::map<Monomial, Form> by_mono;
    for (auto& [b, poly] : rhs.coeffs())
        for (auto& [mono, c] : poly.terms()) {
            auto it = by_mono.emplace(mono, Form(N)).first;
            it->second.add(b, Polynomial(c));
        }
    ThetaData t{Form(N), Form(N), Form(N)};
    for (auto& [mono, F] : by_mono) {
        auto y = fib->coords(F);
        Matrix aug(fib->dim(), int(z.size()) + 1);
        for (int i = 0; i < fib->dim(); ++i) {
            for (int a = 0; a < int(z.size()); ++a) aug(i, a) = A(i, a);
            aug(i, int(z.size())) = -y[i];
        }
        auto ker = kernel(aug);
        std::optional<std::vector<Scalar>> sol;
        for (auto& v : ker)
            if (!v.back().is_zero()) {
                Scalar s = Scalar(1) / v.back();
                for (auto& x : v) x *= s;
                sol = v;
                break;
            }
        if (!sol) throw StructureError("theta: del Omega_bar^n is not of the form theta ^ Omega_bar^n");
        for (std::size_t a = 0; a < z.size(); ++a)
            if (!(*sol)[a].is_zero()) t.theta += ((*sol)[a] * z[a]).times(Polynomial::monomial(mono));
    }
    if (!(wedge(t.theta, Obn) == rhs)) throw StructureError("theta: defining identity fails");
    t.theta_bar = t.theta.conj();
    t.theta_J = fr.act_J().apply(t.theta_bar);
    t.del_closed = D.del.apply(t.theta).is_zero();
    t.mixed_closed = (D.del.apply(t.theta_J) + D.del_J.apply(t.theta)).is_zero();
    return t;
}

// Wedge by a form with polynomial coefficients, as a graded operator on the full fiber.
// Only constant coefficients are supported: the operator algebra is constant-coefficient.
inline GradedOperator wedge_by(const ManifoldModel& m, const Form& f, Parity p) {
    if (!f.is_constant()) throw std::invalid_argument("wedge_by: non-constant coefficients");
    return GradedOperator(m.fiber(), p, wedge_matrix(m.fiber(), f));
}

struct NormalizedComplex {
    FiberPtr space;  // Lambda^{*,0}_I
    GradedOperator del, del_J, del_star, del_J_star, laplacian;
    GradedOperator L, Lambda, H;  // Lefschetz triple of Omega restricted to Lambda^{*,0}
    Scalar theta_coefficient;    // 1/2
};

// ndel = del + (1/2) theta ^, ndel_J = del_J + (1/2) theta_J ^, on Lambda^{*,0}.
inline NormalizedComplex normalized_complex(const ManifoldModel& m, const ThetaData& t) {
    const auto& fr = m.frame();
    const auto& D = m.dolbeault();
    const auto& hol = fr.holomorphic_fiber();
    NormalizedComplex c;
    c.space = hol;
    c.theta_coefficient = Scalar::rational(1, 2);
    auto nd = D.del + c.theta_coefficient * wedge_by(m, t.theta, Parity::odd);
    auto ndJ = D.del_J + c.theta_coefficient * wedge_by(m, t.theta_J, Parity::odd);
    c.del = nd.restrict_to(hol);
    c.del_J = ndJ.restrict_to(hol);
    c.del_star = c.del.adjoint();
    c.del_J_star = c.del_J.adjoint();
    c.laplacian = supercommutator(c.del, c.del_star);
    const auto& tr = m.metric().triple(FormName::Omega);
    c.L = tr.L.restrict_to(hol);
    c.Lambda = tr.Lambda.restrict_to(hol);
    c.H = tr.H.restrict_to(hol);
    return c;
}

// Consistency of the +1/2 sign: with delta* := [L_Omega, del_J*] on Lambda^{*,0},
// delta* - del = theta ^ and so ndel = (del + delta*)/2. Both signs square to zero.
struct HalfSumCheck {
    bool delta_minus_del_is_theta = false;
    bool half_sum = false;
    bool plus_half_squares_zero = false, minus_half_squares_zero = false;
};

inline HalfSumCheck half_sum_check(const ManifoldModel& m, const ThetaData& t, const NormalizedComplex& c) {
    HalfSumCheck r;
    const auto& hol = c.space;
    const auto& D = m.dolbeault();
    auto del = D.del.restrict_to(hol);
    auto delta = supercommutator(c.L, D.del_J.restrict_to(hol).adjoint());
    auto theta = wedge_by(m, t.theta, Parity::odd).restrict_to(hol);
    r.delta_minus_del_is_theta = (delta - del) == theta;
    r.half_sum = c.del == Scalar::rational(1, 2) * (del + delta);
    auto plus = del + Scalar::rational(1, 2) * theta, minus = del - Scalar::rational(1, 2) * theta;
    r.plus_half_squares_zero = (plus * plus).is_zero();
    r.minus_half_squares_zero = (minus * minus).is_zero();
    return r;
}

struct ComplexInvariants {
    bool del_squared = false, del_J_squared = false, anticommute = false, laplacian_self_adjoint = false;
    // nullopt on the flat backend: truncated polynomial spaces are not invariant
    // under the Laplacian, so positivity is only assessed on CE models
    std::optional<bool> laplacian_psd;
    bool all() const {
        return del_squared && del_J_squared && anticommute && laplacian_self_adjoint && laplacian_psd.value_or(true);
    }
};

inline ComplexInvariants check_invariants(const ManifoldModel& m, const NormalizedComplex& c) {
    ComplexInvariants r;
    r.del_squared = (c.del * c.del).is_zero();
    r.del_J_squared = (c.del_J * c.del_J).is_zero();
    r.anticommute = supercommutator(c.del, c.del_J).is_zero();
    r.laplacian_self_adjoint = c.laplacian.adjoint() == c.laplacian;
    if (!m.is_flat()) {
        // Hermitian form <x, Delta y> = x^H G Delta y
        Matrix form = (c.space->gram() * c.laplacian.algebraic_part()).to_dense();
        r.laplacian_psd = signature(form).negative == 0;
    }
    return r;
}

struct HarmonicSpace {
    std::map<int, std::vector<Form>> basis;  // degree p -> basis of ker Delta on Lambda^{p,0}
    std::vector<int> dims;                   // h^0 .. h^{2n}
    std::vector<int> rank_nullity_dims;      // dim ker ndel_p - rank ndel_{p-1}
};

inline HarmonicSpace harmonic_spinors(const ManifoldModel& m, const NormalizedComplex& c) {
    HarmonicSpace hs;
    int n = m.n();
    int nv = m.nvars(), md = m.max_poly_degree();
    auto block_rank = [&](int p) -> int {
        // rank of ndel restricted to degree p
        if (p < 0 || p >= 2 * n) return 0;
        auto Pp = degree_projector(c.space, p);
        SparseMatrix M = m.materialize(c.del * Pp);
        return rank(M.to_dense());
    };
    for (int p = 0; p <= 2 * n; ++p) {
        auto ker = kernel_basis(c.laplacian, p, nv, md);
        hs.dims.push_back(int(ker.size()));
        hs.basis[p] = std::move(ker);
    }
    for (int p = 0; p <= 2 * n; ++p) {
        int dimp = int(c.space->indices_of_degree(p).size()) * int(monomials_up_to(nv, nv ? md : 0).size());
        int kerp = dimp - block_rank(p);
        hs.rank_nullity_dims.push_back(kerp - block_rank(p - 1));
    }
    return hs;
}

// Coordinates of a (2n,0)-form against Omega^n.
inline std::optional<Scalar> top_coefficient(const ManifoldModel& m, const Form& top) {
    return form_ratio(top, wedge_power(m.metric().forms().Omega, m.n()));
}

struct LefschetzReport {
    bool L_commutes = false, Lambda_commutes = false, H_commutes = false, J_c_commutes = false;
    std::map<int, int> lefschetz_rank;             // i -> rank of L^{n-i}: H^i -> H^{2n-i}
    std::map<int, bool> lefschetz_iso;
    std::map<int, Matrix> pairing;                 // i -> pairing matrix on H^i (i <= n)
    std::map<int, int> pairing_rank;
    bool all() const {
        bool ok = L_commutes && Lambda_commutes && H_commutes && J_c_commutes;
        for (auto& [i, v] : lefschetz_iso) ok = ok && v;
        return ok;
    }
};

// alpha with L_Omega^{n-i}(eta ^ J_c(eta')) = alpha Omega^n.
inline Scalar serre_pairing(const ManifoldModel& m, const NormalizedComplex& c, const HarmonicSpace& hs,
                            const Form& eta, const Form& eta2) {
    auto deg = eta.degree();
    if (!deg || eta2.degree() != deg) throw std::invalid_argument("domain error: pairing needs two i-forms");
    int i = *deg;
    if (i > m.n()) throw std::invalid_argument("domain error: pairing needs i <= n");
    for (const Form* f : {&eta, &eta2})
        if (!c.laplacian.apply(*f).is_zero() || !(m.frame().pi(i, 0).apply(*f) == *f))
            throw std::invalid_argument("domain error: input is not harmonic");
    (void)hs;
    Form x = wedge(eta, m.frame().J_c(eta2));
    const auto& L = m.metric().triple(FormName::Omega).L;
    Form y = L.power(m.n() - i).apply(x);
    auto a = top_coefficient(m, y);
    if (!a) throw StructureError("pairing: result is not a multiple of Omega^n");
    return *a;
}

inline LefschetzReport lefschetz_action(const ManifoldModel& m, const NormalizedComplex& c, const HarmonicSpace& hs) {
    LefschetzReport r;
    r.L_commutes = supercommutator(c.L, c.laplacian).is_zero();
    r.Lambda_commutes = supercommutator(c.Lambda, c.laplacian).is_zero();
    r.H_commutes = supercommutator(c.H, c.laplacian).is_zero();
    // J_c is antilinear: check on x and i x for each basis form
    r.J_c_commutes = true;
    for (int j = 0; j < c.space->dim() && r.J_c_commutes; ++j)
        for (Scalar s : {Scalar(1), Scalar::i()}) {
            Form x = s * c.space->basis_form(j);
            Form lhs = m.frame().J_c(c.laplacian.apply(x));
            Form rhs = c.laplacian.apply(m.frame().J_c(x));
            if (!(lhs == rhs)) r.J_c_commutes = false;
        }
    int n = m.n();
    for (int i = 0; i <= n; ++i) {
        const auto& src = hs.basis.at(i);
        const auto& dst = hs.basis.at(2 * n - i);
        LinearSpan target;
        for (auto& f : dst) {
            auto v = c.space->coords(f);
            SparseVector sv;
            for (std::size_t t = 0; t < v.size(); ++t)
                if (!v[t].is_zero()) sv[t] = v[t];
            target.add(sv);
        }
        LinearSpan image;
        bool inside = true;
        for (auto& f : src) {
            Form y = c.L.power(n - i).apply(f);
            auto v = c.space->coords(y);
            SparseVector sv;
            for (std::size_t t = 0; t < v.size(); ++t)
                if (!v[t].is_zero()) sv[t] = v[t];
            if (!target.contains(sv)) inside = false;
            image.add(sv);
        }
        r.lefschetz_rank[i] = int(image.dimension());
        r.lefschetz_iso[i] = inside && int(src.size()) == int(dst.size()) && int(image.dimension()) == int(src.size());
        Matrix P(int(src.size()), int(src.size()));
        for (std::size_t a = 0; a < src.size(); ++a)
            for (std::size_t b = 0; b < src.size(); ++b) P(int(a), int(b)) = serre_pairing(m, c, hs, src[a], src[b]);
        r.pairing_rank[i] = rank(P);
        r.pairing[i] = std::move(P);
    }
    return r;
}

}  // namespace hkt
