#pragma once
// superalgebra_lab: Kahler-de Rham matching, the hyperkahler-de Rham family,
// odd pairings, Grothendieck order and the delta*_J theorem.

#include "hkt/closure.hpp"
#include "hkt/spinor.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hkt {

// Short exact description of a nonzero operator: support size and first entry.
inline std::string residual_witness(const GradedOperator& r) {
    auto v = r.flatten();
    if (v.empty()) return "0";
    auto& [k, x] = *v.begin();
    std::ostringstream os;
    std::uint64_t akey = k >> 40;
    os << "nnz=" << v.size() << " first(symbol=" << akey << ", row=" << ((k >> 20) & 0xFFFFF) << ", col=" << (k & 0xFFFFF)
       << ")=" << x;
    return os.str();
}

struct OperatorRealization {
    std::string space;
    std::vector<std::string> names;
    std::vector<GradedOperator> ops;

    void add(std::string name, GradedOperator op) {
        names.push_back(std::move(name));
        ops.push_back(std::move(op));
    }
    const GradedOperator& at(const std::string& name) const {
        for (std::size_t t = 0; t < names.size(); ++t)
            if (names[t] == name) return ops[t];
        throw std::out_of_range("realization has no generator " + name);
    }
    bool has(const std::string& name) const { return std::find(names.begin(), names.end(), name) != names.end(); }
};

struct RelationCheck {
    std::string relation;
    bool holds = false;
    std::string residual;  // "0" when it holds
};

// [L, Lambda] = H, [H, d] = d, d* := [Lambda, d^c], (d^c)* := -[Lambda, d].
// The Kodaira signs follow from these definitions by graded Jacobi:
// [L, d*] = d^c and [L, (d^c)*] = -d.
inline SuperAlgebraPresentation kdr_reference() {
    using P = Parity;
    auto p = SuperAlgebraPresentation::empty_with({"L", "Lambda", "H", "d", "dc", "d*", "dc*", "Delta"},
                                                  {P::even, P::even, P::even, P::odd, P::odd, P::odd, P::odd, P::even});
    Scalar one(1), m1(-1), two(2), m2(-2);
    p.set("L", "Lambda", {{"H", one}});
    p.set("H", "L", {{"L", two}});
    p.set("H", "Lambda", {{"Lambda", m2}});
    p.set("H", "d", {{"d", one}});
    p.set("H", "dc", {{"dc", one}});
    p.set("H", "d*", {{"d*", m1}});
    p.set("H", "dc*", {{"dc*", m1}});
    p.set("Lambda", "dc", {{"d*", one}});
    p.set("Lambda", "d", {{"dc*", m1}});
    p.set("L", "d*", {{"dc", one}});
    p.set("L", "dc*", {{"d", m1}});
    p.set("d", "d*", {{"Delta", one}});
    p.set("dc", "dc*", {{"Delta", one}});
    return p;
}

// The same table with the opposite Kodaira signs:
// [L, d*] = -d^c and [L, (d^c)*] = d. Kept to document the Jacobi failure.
inline SuperAlgebraPresentation kdr_opposite_signs() {
    auto p = kdr_reference();
    p.set("L", "d*", {{"dc", Scalar(-1)}});
    p.set("L", "dc*", {{"d", Scalar(1)}});
    return p;
}

struct KdrReport {
    std::vector<RelationCheck> relations;
    int closure_dimension = 0;
    bool closure_jacobi = false;
    bool matches_reference = false;  // generator-respecting map satisfies every reference bracket
    std::optional<GradedOperator> d_star, dc_star, Delta;
    bool all_pass() const {
        for (auto& r : relations)
            if (!r.holds) return false;
        return matches_reference && closure_dimension == 8 && closure_jacobi;
    }
};

inline KdrReport match_kdr(const OperatorRealization& real, int cap = 64) {
    KdrReport rep;
    const auto& L = real.at("L");
    auto Lambda = real.has("Lambda") ? real.at("Lambda") : L.adjoint();
    auto H = real.has("H") ? real.at("H") : supercommutator(L, Lambda);
    const auto& d = real.at("d");
    const auto& dc = real.at("dc");
    if (d.parity() != Parity::odd || dc.parity() != Parity::odd || L.parity() != Parity::even)
        throw std::invalid_argument("match_kdr: parity mismatch");
    auto ds = supercommutator(Lambda, dc);
    auto dcs = Scalar(-1) * supercommutator(Lambda, d);
    auto Delta = supercommutator(d, ds);
    rep.d_star = ds;
    rep.dc_star = dcs;
    rep.Delta = Delta;

    auto check = [&](const std::string& name, const GradedOperator& lhs, const GradedOperator& rhs) {
        GradedOperator diff = lhs - rhs;
        rep.relations.push_back({name, diff.is_zero(), residual_witness(diff)});
    };
    auto zero = [&](Parity p) { return GradedOperator::zero(L.space(), p); };
    check("[L,Lambda] = H", supercommutator(L, Lambda), H);
    check("[H,L] = 2L", supercommutator(H, L), Scalar(2) * L);
    check("[H,Lambda] = -2Lambda", supercommutator(H, Lambda), Scalar(-2) * Lambda);
    check("[L,d] = 0", supercommutator(L, d), zero(Parity::odd));
    check("[L,dc] = 0", supercommutator(L, dc), zero(Parity::odd));
    check("[H,d] = d", supercommutator(H, d), d);
    check("[H,dc] = dc", supercommutator(H, dc), dc);
    check("d^2 = 0", d * d, zero(Parity::even));
    check("dc^2 = 0", dc * dc, zero(Parity::even));
    check("[L,d*] = dc", supercommutator(L, ds), dc);
    check("[L,dc*] = -d", supercommutator(L, dcs), Scalar(-1) * d);
    check("{d,dc*} = 0", supercommutator(d, dcs), zero(Parity::even));
    check("{d*,dc} = 0", supercommutator(ds, dc), zero(Parity::even));
    check("{d,dc} = 0", supercommutator(d, dc), zero(Parity::even));
    check("{d*,dc*} = 0", supercommutator(ds, dcs), zero(Parity::even));
    check("{d,d*} = {dc,dc*}", Delta, supercommutator(dc, dcs));
    const GradedOperator* all[] = {&L, &Lambda, &H, &d, &dc, &ds, &dcs};
    const char* names[] = {"L", "Lambda", "H", "d", "dc", "d*", "dc*"};
    for (int t = 0; t < 7; ++t)
        check(std::string("[Delta,") + names[t] + "] = 0", supercommutator(Delta, *all[t]), zero(all[t]->parity()));

    // every bracket of the reference table under the generator-respecting map
    auto ref = kdr_reference();
    std::vector<GradedOperator> gen = {L, Lambda, H, d, dc, ds, dcs, Delta};
    rep.matches_reference = true;
    for (int i = 0; i < ref.dim() && rep.matches_reference; ++i)
        for (int j = 0; j < ref.dim(); ++j) {
            GradedOperator rhs = zero(gen[i].parity() + gen[j].parity());
            for (int k = 0; k < ref.dim(); ++k)
                if (!ref.table[i][j][k].is_zero()) rhs.axpy(ref.table[i][j][k], gen[k]);
            if (!(supercommutator(gen[i], gen[j]) == rhs)) {
                rep.matches_reference = false;
                break;
            }
        }

    auto cl = close_and_extract({L, Lambda, H, d, dc}, {"L", "Lambda", "H", "d", "dc"}, cap);
    rep.closure_dimension = cl.closed ? cl.dimension : -1;
    rep.closure_jacobi = cl.closed && !cl.presentation.jacobi_violation() && !cl.presentation.antisymmetry_violation();
    return rep;
}

struct ProportionalityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OddPairing {
    Matrix pairing;  // {v_i, v_j} = pairing(i,j) Delta
    Signature signature;
};

inline OddPairing odd_pairing_signature(const std::vector<GradedOperator>& odd, const std::vector<std::string>& names,
                                        const GradedOperator& Delta) {
    if (Delta.is_zero()) throw ProportionalityError("odd pairing: Delta is zero");
    int m = int(odd.size());
    OddPairing out{Matrix(m, m), {}};
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            auto b = supercommutator(odd[i], odd[j]);
            auto c = proportionality(b, Delta);
            if (!c)
                throw ProportionalityError("odd pairing: {" + names[i] + "," + names[j] + "} is not a multiple of Delta; " +
                                           residual_witness(b));
            out.pairing(i, j) = *c;
            out.pairing(j, i) = *c;
        }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (!out.pairing(i, j).is_real()) throw ProportionalityError("odd pairing: non-real pairing entry");
    out.signature = signature(out.pairing);
    return out;
}

// Grothendieck order over a form algebra: the full exterior algebra, or the
// holomorphic subalgebra Lambda^{*,0}. Generators: multiplication by covectors
// (e^a, resp. the (1,0)-basis), and on the flat backend also by the
// coordinates x_j. Testing generators suffices because
// ad_{ab} = L_a ad_b +- ad_a L_b and the L's have order 0.
class OrderOracle {
public:
    OrderOracle(const ManifoldModel& m, FiberPtr space) : m_(m), space_(std::move(space)) {
        if (space_->is_full()) {
            for (int a = 0; a < m.N(); ++a) generators_.push_back(wedge_operator(space_, Form::covector(m.N(), a)));
        } else if (space_ == m.frame().holomorphic_fiber()) {
            for (auto& z : m.frame().type10()) generators_.push_back(wedge_operator(m.fiber(), z).restrict_to(space_));
        } else {
            throw std::invalid_argument("operator_order: unsupported form algebra");
        }
        for (int i = 0; i < space_->dim(); ++i)
            if (space_->degree(i) == 0) unit_ = i;
    }
    explicit OrderOracle(const ManifoldModel& m) : OrderOracle(m, m.fiber()) {}

    // D = wedge by D(1)
    bool order_zero(const GradedOperator& D) const {
        if (D.space() != space_) throw std::invalid_argument("operator_order: operator lives on another space");
        if (!D.is_algebraic()) return false;
        SparseMatrix A = D.algebraic_part();
        std::vector<Scalar> e(space_->dim());
        e[unit_] = 1;
        Form image = space_->to_form(A.apply(e));
        if (image.is_zero()) return D.is_zero();
        GradedOperator W(m_.fiber(), D.parity(), wedge_matrix(m_.fiber(), image));
        if (!space_->is_full()) {
            if (!W.preserves(space_)) return false;
            W = W.restrict_to(space_);
        }
        return W.algebraic_part() == A;
    }

    bool order_at_most(const GradedOperator& D, int i) const {
        if (D.is_zero()) return true;
        if (i == 0) return order_zero(D);
        for (auto& c : generators_)
            if (!order_at_most(supercommutator(c, D), i - 1)) return false;
        if (m_.is_flat())
            for (int j = 0; j < m_.nvars(); ++j)
                if (!order_at_most(coordinate_bracket(j, D), i - 1)) return false;
        return true;
    }

    // Minimal order <= bound, or nullopt ("exceeds bound").
    std::optional<int> order(const GradedOperator& D, int bound) const {
        if (bound < 0 || bound > 3) throw std::invalid_argument("operator_order: bound must be in [0, 3]");
        for (int i = 0; i <= bound; ++i)
            if (order_at_most(D, i)) return i;
        return std::nullopt;
    }

private:
    const ManifoldModel& m_;
    FiberPtr space_;
    std::vector<GradedOperator> generators_;
    int unit_ = 0;
};

inline std::optional<int> operator_order(const GradedOperator& D, const ManifoldModel& m, int bound) {
    return OrderOracle(m, D.space()).order(D, bound);
}

struct DeltaJReport {
    GradedOperator del_star, delta_star_J, h;  // on Lambda^{*,0}
    Form theta_J;
    bool h_order_zero = false;
    bool h_equals_theta_J = false;
    std::string residual;
};

// On Lambda^{*,0}: delta*_J := -[L_Omega, del*], h := delta*_J - del_J; expects h = theta_J ^.
inline DeltaJReport delta_j_theorem(const ManifoldModel& m, const ThetaData& t) {
    DeltaJReport r;
    const auto& hol = m.frame().holomorphic_fiber();
    const auto& D = m.dolbeault();
    auto del = D.del.restrict_to(hol);
    auto L = m.metric().triple(FormName::Omega).L.restrict_to(hol);
    r.del_star = del.adjoint();
    r.delta_star_J = Scalar(-1) * supercommutator(L, r.del_star);
    r.h = r.delta_star_J - D.del_J.restrict_to(hol);
    r.theta_J = t.theta_J;
    r.h_order_zero = OrderOracle(m, hol).order_zero(r.h);
    auto diff = r.h - wedge_by(m, t.theta_J, Parity::odd).restrict_to(hol);
    r.h_equals_theta_J = diff.is_zero();
    r.residual = residual_witness(diff);
    return r;
}

// Hyperkahler-de Rham family {H, L_X, Lambda_X, ad_X, d}.
inline OperatorRealization hk_de_rham_family(const ManifoldModel& m) {
    OperatorRealization r;
    r.space = "Lambda*";
    auto names = MetricHodge::so14_names();
    auto ops = m.metric().so14_family();
    for (std::size_t t = 0; t < ops.size(); ++t) r.add(names[t], ops[t]);
    r.add("d", m.d());
    return r;
}

// Odd span {d, d_I, d_J, d_K, d*, d_I*, d_J*, d_K*} with d_X = [ad_X, d].
inline OperatorRealization hk_odd_span(const ManifoldModel& m) {
    OperatorRealization r;
    r.space = "Lambda*";
    const auto& fr = m.frame();
    GradedOperator d = m.d();
    std::vector<std::pair<std::string, GradedOperator>> odd = {{"d", d},
                                                               {"d_I", supercommutator(fr.ad_I(), d)},
                                                               {"d_J", supercommutator(fr.ad_J(), d)},
                                                               {"d_K", supercommutator(fr.ad_K(), d)}};
    for (auto& [nm, op] : odd) r.add(nm, op);
    for (auto& [nm, op] : odd) r.add(nm + "*", op.adjoint());
    return r;
}

// (L_Omega, Lambda_Omega, H_Omega, d, dc) on Lambda^{*,0} with d, dc given
// on the full fiber.
inline OperatorRealization dolbeault_realization(const ManifoldModel& m, const GradedOperator& d, const GradedOperator& dc) {
    const auto& hol = m.frame().holomorphic_fiber();
    const auto& t = m.metric().triple(FormName::Omega);
    OperatorRealization r;
    r.space = "Lambda^{*,0}";
    r.add("L", t.L.restrict_to(hol));
    r.add("Lambda", t.Lambda.restrict_to(hol));
    r.add("H", t.H.restrict_to(hol));
    r.add("d", d.restrict_to(hol));
    r.add("dc", dc.restrict_to(hol));
    return r;
}

// The normalized realization (L_Omega, Lambda_Omega, H_Omega, ndel, ndel_J).
inline OperatorRealization normalized_realization(const NormalizedComplex& c) {
    OperatorRealization r;
    r.space = "Lambda^{*,0} (x) K^{1/2}";
    r.add("L", c.L);
    r.add("Lambda", c.Lambda);
    r.add("H", c.H);
    r.add("d", c.del);
    r.add("dc", c.del_J);
    return r;
}

}  // namespace hkt
