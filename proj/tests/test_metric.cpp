#include "hkt/metric.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace hkt;
using hkt::testing::right_triple;
using hkt::testing::sample_metric_n2;

namespace {

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

Scalar coef(long num, long den) { return Scalar(mpq_class(num, den)); }

// Fixture: n = 1 with the standard metric and n = 2 with a non-diagonal one.
struct Metrics : ::testing::Test {
    static const MetricHodge& flat1() {
        static MetricHodge m(right_triple(1), Matrix::identity(4));
        return m;
    }
    static const MetricHodge& curved2() {
        static MetricHodge m(right_triple(2), sample_metric_n2());
        return m;
    }
};

}  // namespace

TEST(HermitianData, RejectsBadMetrics) {
    auto t = right_triple(1);
    Matrix g = Matrix::identity(4);
    g(0, 0) = 2;
    EXPECT_EQ(error_of([&] { HermitianData::make(g, t); }).rfind("metric-invariance", 0), 0u);
    Matrix neg = Matrix::identity(4) * Scalar(-1);
    EXPECT_EQ(error_of([&] { HermitianData::make(neg, t); }).rfind("metric-positivity", 0), 0u);
    Matrix asym = Matrix::identity(4);
    asym(0, 1) = 1;
    EXPECT_EQ(error_of([&] { HermitianData::make(asym, t); }).rfind("metric-shape", 0), 0u);
}

TEST(HermitianData, QuaternionicMetricIsInvariant) {
    EXPECT_NO_THROW(HermitianData::make(sample_metric_n2(), right_triple(2)));
}

TEST_F(Metrics, FundamentalFormsAreNondegenerate) {
    for (const MetricHodge* m : {&flat1(), &curved2()}) {
        const auto& f = m->forms();
        for (auto* w : {&f.omega_I, &f.omega_J, &f.omega_K}) {
            EXPECT_FALSE(wedge_power(*w, 2 * m->n()).is_zero());
            EXPECT_EQ(w->conj(), *w);
        }
        EXPECT_EQ(m->frame().pi(2, 0).apply(f.Omega), f.Omega);
        EXPECT_TRUE(m->volume_ratio().is_real());
        EXPECT_GT(sgn(m->volume_ratio().re()), 0);
    }
}

TEST_F(Metrics, LefschetzAdjointness) {
    const auto& m = curved2();
    const auto& fib = m.fiber();
    std::mt19937 rng(7);
    for (auto name : {FormName::omega_I, FormName::Omega, FormName::Omega_bar}) {
        const auto& t = m.triple(name);
        for (int k = 0; k + 2 <= 8; k += 3) {
            Form a = hkt::testing::random_constant_form(8, k, rng);
            Form b = hkt::testing::random_constant_form(8, k + 2, rng);
            auto La = fib->coords(t.L.apply(a));
            auto Lb = fib->coords(t.Lambda.apply(b));
            EXPECT_EQ(fib->inner(La, fib->coords(b)), fib->inner(fib->coords(a), Lb));
        }
    }
}

TEST_F(Metrics, Sl2Tables) {
    for (const MetricHodge* m : {&flat1(), &curved2()})
        for (auto name : {FormName::omega_I, FormName::omega_J, FormName::omega_K, FormName::Omega}) {
            const auto& t = m->triple(name);
            EXPECT_EQ(supercommutator(t.H, t.L), Scalar(2) * t.L) << to_string(name);
            EXPECT_EQ(supercommutator(t.H, t.Lambda), Scalar(-2) * t.Lambda) << to_string(name);
        }
}

TEST_F(Metrics, HOmegaOnHolomorphicForms) {
    // with Lambda the adjoint, [L_Omega, Lambda_Omega] = (p - n) on Lambda^{p,0}
    for (const MetricHodge* m : {&flat1(), &curved2()}) {
        const auto& H = m->triple(FormName::Omega).H;
        for (int p = 0; p <= 2 * m->n(); ++p) {
            const auto& P = m->frame().pi(p, 0);
            EXPECT_EQ(H * P, Scalar(p - m->n()) * P) << p;
        }
    }
}

TEST_F(Metrics, LambdaOmegaPowerCoefficient) {
    // derived: Lambda_Omega L_Omega^n Omega_bar^n = n Omega^(n-1) Omega_bar^n
    EXPECT_EQ(flat1().lambda_omega_coefficient(), Scalar(1));
    EXPECT_EQ(curved2().lambda_omega_coefficient(), Scalar(2));
}

TEST_F(Metrics, StarDefiningIdentity) {
    std::mt19937 rng(11);
    for (const MetricHodge* m : {&flat1(), &curved2()}) {
        int N = m->N();
        const auto& fib = m->fiber();
        for (int k = 0; k <= N; ++k) {
            Form a = hkt::testing::random_constant_form(N, k, rng);
            Form b = hkt::testing::random_constant_form(N, k, rng);
            Scalar ip = fib->inner(fib->coords(a), fib->coords(b));
            EXPECT_EQ(wedge(a, m->hodge_star(b)), ip * m->forms().vol) << k;
        }
    }
}

TEST_F(Metrics, StarSquareSignAndBigrades) {
    for (const MetricHodge* m : {&flat1(), &curved2()}) {
        int N = m->N(), n = m->n();
        const auto& S = m->star_linear();
        for (int k = 0; k <= N; ++k) {
            auto P = degree_projector(m->fiber(), k);
            EXPECT_EQ(S * S * P, Scalar((k * (N - k)) % 2 ? -1 : 1) * P);
        }
        // complex-linear S: (p,q) -> (2n-q, 2n-p); the Hodge star S o conj: (p,q) -> (2n-p, 2n-q)
        for (int p = 0; p <= 2 * n; ++p)
            for (int q = 0; q <= 2 * n; ++q)
                EXPECT_EQ(S * m->frame().pi(p, q), m->frame().pi(2 * n - q, 2 * n - p) * S);
    }
}

TEST_F(Metrics, AdjointMatchesStarConjugation) {
    // Lambda_phi = S^{-1} L_phi S uniformly, with S the complex-linear star
    for (const MetricHodge* m : {&flat1(), &curved2()}) {
        const auto& S = m->star_linear();
        GradedOperator Sinv = GradedOperator::zero(m->fiber());
        for (int k = 0; k <= m->N(); ++k)
            Sinv += Scalar((k * (m->N() - k)) % 2 ? -1 : 1) * (S * degree_projector(m->fiber(), k));
        for (auto name : {FormName::omega_I, FormName::omega_K, FormName::Omega, FormName::Omega_bar}) {
            const auto& t = m->triple(name);
            auto Lbar = wedge_operator(m->fiber(), m->form(name).conj());
            EXPECT_EQ(t.Lambda, Sinv * Lbar * S) << to_string(name);
        }
    }
}

TEST_F(Metrics, StarClaims) {
    auto c1 = flat1().star_claims();
    ASSERT_EQ(c1.size(), 3u);
    EXPECT_TRUE(c1[0].holds());
    EXPECT_EQ(c1[1].actual, Scalar(1));
    EXPECT_EQ(c1[2].actual, Scalar(-1));
    auto c2 = curved2().star_claims();
    EXPECT_TRUE(c2[0].holds());
    // derived: n / n!^2 and -n / n!^2
    EXPECT_EQ(c2[1].actual, coef(2, 4));
    EXPECT_EQ(c2[2].actual, coef(-2, 4));
    EXPECT_FALSE(c2[2].holds());
}

TEST_F(Metrics, InnerMultiplicationLemma) {
    for (const MetricHodge* m : {&flat1(), &curved2()}) {
        for (auto& eta : m->frame().type10()) EXPECT_TRUE(m->inner_mult_identity(eta));
        EXPECT_TRUE(m->inner_mult_commutator(Form(m->N())).is_zero());
    }
    EXPECT_THROW(flat1().inner_mult_commutator(flat1().frame().type10()[0].conj()), std::invalid_argument);
}

TEST(So14, ReferenceOracle) {
    auto ref = so14_reference();
    EXPECT_FALSE(ref.antisymmetry_violation());
    EXPECT_FALSE(ref.jacobi_violation());
    auto sig = signature(ref.killing_form());
    EXPECT_EQ(sig.positive, 4);
    EXPECT_EQ(sig.negative, 6);
    EXPECT_EQ(sig.zero, 0);
}

TEST_F(Metrics, So14Closure) {
    for (const MetricHodge* m : {&flat1(), &curved2()}) {
        auto res = m->so14_closure();
        ASSERT_TRUE(res.closed);
        EXPECT_EQ(res.dimension, 10);
        EXPECT_FALSE(res.presentation.jacobi_violation());
        auto sig = signature(res.presentation.killing_form());
        auto ref = signature(so14_reference().killing_form());
        EXPECT_EQ(sig.positive, ref.positive);
        EXPECT_EQ(sig.negative, ref.negative);
        EXPECT_EQ(sig.zero, 0);
        for (auto name : {FormName::omega_I, FormName::omega_J, FormName::omega_K})
            EXPECT_EQ(m->triple(name).H, m->triple(FormName::omega_I).H);
    }
}
