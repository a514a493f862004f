#include "hkt/superalgebra.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hkt;
using hkt::testing::load;

namespace {

NormalizedComplex normalized(const std::string& name) {
    auto m = load(name);
    return normalized_complex(*m, extract_theta(*m));
}

std::vector<std::string> failing(const KdrReport& r) {
    std::vector<std::string> out;
    for (auto& c : r.relations)
        if (!c.holds) out.push_back(c.relation);
    return out;
}

bool fails(const KdrReport& r, const std::string& rel) {
    auto f = failing(r);
    return std::find(f.begin(), f.end(), rel) != f.end();
}

}  // namespace

TEST(KdrReference, IsASuperLieAlgebra) {
    auto p = kdr_reference();
    EXPECT_EQ(p.dim(), 8);
    EXPECT_FALSE(p.antisymmetry_violation().has_value());
    EXPECT_FALSE(p.jacobi_violation().has_value());
}

TEST(KdrReference, OppositeKodairaSignsBreakJacobi) {
    auto p = kdr_opposite_signs();
    EXPECT_FALSE(p.antisymmetry_violation().has_value());
    EXPECT_TRUE(p.jacobi_violation().has_value());
}

TEST(Closure, Sl2FromLefschetzPair) {
    auto m = load("torus4");
    const auto& t = m->metric().triple(FormName::Omega);
    auto cl = close_and_extract({t.L, t.Lambda}, {"L", "Lambda"});
    ASSERT_TRUE(cl.closed);
    EXPECT_EQ(cl.dimension, 3);
    EXPECT_FALSE(cl.presentation.jacobi_violation().has_value());
}

TEST(Kdr, NormalizedHopfMatchesReference) {
    auto rep = match_kdr(normalized_realization(normalized("hopf")));
    EXPECT_TRUE(failing(rep).empty()) << ::testing::PrintToString(failing(rep));
    EXPECT_EQ(rep.closure_dimension, 8);
    EXPECT_TRUE(rep.closure_jacobi);
    EXPECT_TRUE(rep.matches_reference);
    EXPECT_TRUE(rep.all_pass());
}

TEST(Kdr, DolbeaultOnFlat) {
    auto m = load("flat-h1");
    const auto& D = m->dolbeault();
    auto rep = match_kdr(dolbeault_realization(*m, D.del, D.del_J));
    EXPECT_TRUE(rep.all_pass()) << ::testing::PrintToString(failing(rep));
}

// Invariant forms on a torus are closed, so only sl2 survives in the closure.
TEST(Kdr, TorusIsADegenerateImage) {
    auto m = load("torus4");
    const auto& D = m->dolbeault();
    auto rep = match_kdr(dolbeault_realization(*m, D.del, D.del_J));
    EXPECT_TRUE(failing(rep).empty());
    EXPECT_TRUE(rep.matches_reference);
    EXPECT_EQ(rep.closure_dimension, 3);
    EXPECT_FALSE(rep.all_pass());
}

TEST(Kdr, NonHktMetricBreaksLefschetzHypothesis) {
    auto spec = ModelSpec::load(hkt::testing::fixture("hopf-torus8"));
    using hkt::testing::Quat;
    Quat q{mpq_class(1, 4), mpq_class(-1, 2), 0, mpq_class(3, 4)};
    spec.metric = hkt::testing::quaternionic_metric({{Quat{2, 0, 0, 0}, q}, {hkt::testing::qconj(q), Quat{3, 0, 0, 0}}});
    auto m = ManifoldModel::compile(spec);
    ASSERT_NE(m->hkt_status().status, HktStatus::hkt);
    const auto& D = m->dolbeault();
    auto rep = match_kdr(dolbeault_realization(*m, D.del, D.del_J));
    EXPECT_FALSE(rep.all_pass());
    EXPECT_TRUE(fails(rep, "[L,d] = 0"));
    for (auto& c : rep.relations)
        if (c.relation == "[L,d] = 0") EXPECT_NE(c.residual, "0");
}

TEST(HkDeRham, FlatClosureDimension) {
    auto m = load("flat-h1");
    auto fam = hk_de_rham_family(*m);
    auto cl = close_and_extract(fam.ops, fam.names);
    ASSERT_TRUE(cl.closed);
    EXPECT_EQ(cl.dimension, 19);
    EXPECT_FALSE(cl.presentation.jacobi_violation().has_value());
}

TEST(OddPairing, FlatHkSpanIsSplit) {
    auto m = load("flat-h1");
    auto odd = hk_odd_span(*m);
    auto Delta = supercommutator(odd.at("d"), odd.at("d*"));
    auto pr = odd_pairing_signature(odd.ops, odd.names, Delta);
    EXPECT_EQ(pr.signature, (Signature{4, 4, 0}));
}

TEST(OddPairing, DolbeaultAndSinglePair) {
    auto c = normalized("hopf");
    auto four = odd_pairing_signature({c.del, c.del_J, c.del_star, c.del_J_star}, {"d", "dJ", "d*", "dJ*"}, c.laplacian);
    EXPECT_EQ(four.signature, (Signature{2, 2, 0}));
    auto two = odd_pairing_signature({c.del, c.del_star}, {"d", "d*"}, c.laplacian);
    EXPECT_EQ(two.signature, (Signature{1, 1, 0}));
    EXPECT_EQ(two.pairing(0, 1), Scalar(1));
}

TEST(OddPairing, NonProportionalBracketIsRejected) {
    auto c = normalized("hopf");
    EXPECT_THROW(odd_pairing_signature({c.del, c.del_star}, {"d", "d*"}, c.H), ProportionalityError);
    EXPECT_THROW(odd_pairing_signature({c.del}, {"d"}, GradedOperator::zero(c.space)), ProportionalityError);
}

TEST(Order, KnownOperators) {
    for (auto name : {"hopf", "flat-h1"}) {
        auto m = load(name);
        const auto& hol = m->frame().holomorphic_fiber();
        OrderOracle oo(*m, hol);
        auto z = wedge_operator(m->fiber(), m->frame().type10()[0]).restrict_to(hol);
        auto del_star = m->dolbeault().del.restrict_to(hol).adjoint();
        EXPECT_EQ(oo.order(z, 3), std::optional<int>(0)) << name;
        EXPECT_EQ(oo.order(del_star, 3), std::optional<int>(2)) << name;
        EXPECT_EQ(oo.order(supercommutator(z, del_star), 3), std::optional<int>(1)) << name;
        EXPECT_EQ(oo.order(del_star, 1), std::nullopt) << name;
    }
}

TEST(Order, FullAlgebraDifferentialAndBoundCheck) {
    auto m = load("hopf");
    OrderOracle of(*m);
    EXPECT_EQ(of.order(m->d(), 3), std::optional<int>(1));
    EXPECT_EQ(of.order(GradedOperator::zero(m->fiber()), 3), std::optional<int>(0));
    EXPECT_THROW(of.order(m->d(), 4), std::invalid_argument);
    EXPECT_THROW(OrderOracle(*m, m->frame().holomorphic_fiber()).order_zero(m->d()), std::invalid_argument);
}

TEST(Order, MonotoneOnRandomCompositions) {
    auto m = load("hopf");
    OrderOracle of(*m);
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> k(0, 3);
    std::vector<GradedOperator> pool = {m->d(), m->d().adjoint(), m->metric().triple(FormName::omega_I).L,
                                        m->metric().triple(FormName::omega_I).Lambda};
    for (int it = 0; it < 12; ++it) {
        auto D = pool[k(rng)] * pool[k(rng)];
        for (int i = 0; i < 3; ++i)
            if (of.order_at_most(D, i)) EXPECT_TRUE(of.order_at_most(D, i + 1)) << it;
    }
}

TEST(DeltaJ, HoldsOnHolomorphicForms) {
    for (auto name : {"hopf", "torus4", "flat-h1", "hopf-torus8"}) {
        auto m = load(name);
        auto r = delta_j_theorem(*m, extract_theta(*m));
        EXPECT_TRUE(r.h_order_zero) << name;
        EXPECT_TRUE(r.h_equals_theta_J) << name << " " << r.residual;
        EXPECT_EQ(r.residual, "0") << name;
    }
}

TEST(DeltaJ, HopfDifferenceIsNonzero) {
    auto m = load("hopf");
    auto r = delta_j_theorem(*m, extract_theta(*m));
    EXPECT_FALSE(r.h.is_zero());
    EXPECT_FALSE(r.theta_J.is_zero());
    auto t = load("torus4");
    EXPECT_TRUE(delta_j_theorem(*t, extract_theta(*t)).h.is_zero());
}
