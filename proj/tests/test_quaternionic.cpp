#include "hkt/quaternionic.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace hkt;
using hkt::testing::fundamental;
using hkt::testing::right_triple;

namespace {

long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
    return r;
}

struct Frame1 : ::testing::Test {
    FiberPtr fib = full_fiber(4);
    QuaternionicFrame qf{fib, right_triple(1), Matrix::identity(4)};
};

}  // namespace

TEST(QuaternionTriple, RejectsBrokenRelations) {
    auto t = right_triple(1);
    t.K = t.K * Scalar(-1);
    try {
        t.validate();
        FAIL() << "expected StructureError";
    } catch (const StructureError& e) {
        EXPECT_NE(std::string(e.what()).find("quaternion-relations"), std::string::npos);
    }
}

TEST(QuaternionTriple, RotationsStayQuaternionic) {
    auto t = right_triple(1);
    for (auto q : {std::array<long, 4>{1, 1, 0, 0}, {1, 2, 3, 4}, {3, -1, 2, 5}}) {
        Matrix R = rotation_from_quaternion(q[0], q[1], q[2], q[3]);
        EXPECT_EQ(R * R.transpose(), Matrix::identity(3));
        EXPECT_EQ(determinant(R), Scalar(1));
        EXPECT_NO_THROW(t.rotated(R));
    }
}

TEST_F(Frame1, Su2Table) {
    EXPECT_EQ(supercommutator(qf.ad_I(), qf.ad_J()), Scalar(-2) * qf.ad_K());
    EXPECT_EQ(supercommutator(qf.ad_J(), qf.ad_K()), Scalar(-2) * qf.ad_I());
    EXPECT_EQ(supercommutator(qf.ad_K(), qf.ad_I()), Scalar(-2) * qf.ad_J());
}

TEST_F(Frame1, RaisingShiftsBigrade) {
    auto c = supercommutator(qf.ad_I(), qf.raising());
    EXPECT_EQ(c, Scalar(mpq_class(0), mpq_class(2)) * qf.raising());
    auto cl = supercommutator(qf.ad_I(), qf.lowering());
    EXPECT_EQ(cl, Scalar(mpq_class(0), mpq_class(-2)) * qf.lowering());
    // [R, Rbar] = i ad_I
    EXPECT_EQ(supercommutator(qf.raising(), qf.lowering()), Scalar::i() * qf.ad_I());
}

TEST_F(Frame1, BigradeProjectorsResolveIdentity) {
    GradedOperator sum = GradedOperator::zero(fib);
    for (int p = 0; p <= 2; ++p)
        for (int q = 0; q <= 2; ++q) {
            EXPECT_EQ(qf.bigrade().dims.at({p, q}), binom(2, p) * binom(2, q));
            const auto& P = qf.pi(p, q);
            EXPECT_EQ(P * P, P);
            sum += P;
        }
    EXPECT_EQ(sum, GradedOperator::identity(fib));
}

TEST_F(Frame1, JSquaresToParitySign) {
    auto J2 = qf.act_J() * qf.act_J();
    for (int k = 0; k <= 4; ++k) {
        auto P = degree_projector(fib, k);
        EXPECT_EQ(J2 * P, Scalar(k % 2 ? -1 : 1) * P) << k;
    }
    EXPECT_EQ(qf.act_J() * qf.act_J_inverse(), GradedOperator::identity(fib));
}

TEST_F(Frame1, JMapsOmegaToConjugate) {
    Matrix g = Matrix::identity(4);
    const auto& t = qf.triple();
    Form Omega = Scalar::rational(1, 2) * (fundamental(g, t.J) + Scalar::i() * fundamental(g, t.K));
    EXPECT_EQ(qf.act_J().apply(Omega), Omega.conj());
    // Omega is of type (2,0) for I
    EXPECT_EQ(qf.pi(2, 0).apply(Omega), Omega);
}

TEST_F(Frame1, JSwapsBigrade) {
    // J maps (p,q) to (q,p)
    for (int p = 0; p <= 2; ++p)
        for (int q = 0; q <= 2; ++q)
            EXPECT_EQ(qf.act_J() * qf.pi(p, q), qf.pi(q, p) * qf.act_J());
}

TEST_F(Frame1, PlusIsoSendsOmegaIToOmega) {
    Matrix g = Matrix::identity(4);
    const auto& t = qf.triple();
    Form wI = fundamental(g, t.I);
    Form Omega = Scalar::rational(1, 2) * (fundamental(g, t.J) + Scalar::i() * fundamental(g, t.K));
    EXPECT_EQ(qf.plus_projector(2).apply(wI), wI);
    EXPECT_EQ(qf.plus_bigrade_iso(1, 1).apply(wI), Omega);
}

TEST_F(Frame1, PlusIsoOnType01IsScaledJ) {
    // R = -J on (0,1)-forms, so the iso is -(i/2) J there
    Scalar c(mpq_class(0), mpq_class(-1, 2));
    for (auto& z : qf.type10()) {
        Form zb = z.conj();
        EXPECT_EQ(qf.raising().apply(zb), Scalar(-1) * qf.act_J().apply(zb));
        EXPECT_EQ(qf.plus_bigrade_iso(0, 1).apply(zb), c * qf.act_J().apply(zb));
    }
}

TEST_F(Frame1, PlusIsoRoundTrips) {
    for (int p = 0; p <= 2; ++p)
        for (int q = 0; p + q <= 2; ++q) {
            auto P = qf.pi(p, q) * qf.plus_projector(p + q);
            auto fwd = qf.plus_bigrade_iso(p, q);
            auto back = qf.plus_bigrade_iso_inverse(p, q);
            EXPECT_EQ(back * fwd * P, P) << p << "," << q;
            auto H = qf.pi(p + q, 0);
            EXPECT_EQ(fwd * back * H, H) << p << "," << q;
        }
}

TEST_F(Frame1, TypeTenAndHolomorphicFiber) {
    EXPECT_EQ(qf.type10().size(), 2u);
    for (auto& z : qf.type10()) EXPECT_EQ(qf.pi(1, 0).apply(z), z);
    EXPECT_EQ(qf.holomorphic_fiber()->dim(), 4);
}

TEST_F(Frame1, FlatDifferentialIsIntegrableForEveryRotation) {
    GradedOperator d = GradedOperator::zero(fib, Parity::odd);
    for (int i = 0; i < 4; ++i) d.add_term(Monomial::var(i), wedge_matrix(fib, Form::covector(4, i)));
    EXPECT_TRUE(qf.nijenhuis_check(qf.triple().I, d));
    auto rt = qf.triple().rotated(rotation_from_quaternion(1, 2, -1, 3));
    for (const Matrix* L : {&rt.I, &rt.J, &rt.K}) EXPECT_TRUE(qf.nijenhuis_check(*L, d));
}

TEST(QuaternionicFrame, PlusDimensionsTwoQuaternionicDims) {
    auto fib = full_fiber(8);
    QuaternionicFrame qf(fib, right_triple(2), Matrix::identity(8));
    for (int p = 0; p <= 4; ++p) {
        EXPECT_EQ(qf.weights().dims.at(p).at(p), (p + 1) * binom(4, p)) << p;
        const auto& P = qf.plus_projector(p);
        EXPECT_EQ(P * P, P);
    }
    // Lambda^2 = Lambda^2_+ + Lambda^0_+ omega-type: weights 2 and 0
    EXPECT_EQ(qf.weights().dims.at(2).at(0), binom(8, 2) - 3 * binom(4, 2));
}
