#include "hkt/model.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace hkt;
using hkt::testing::fixture;
using hkt::testing::load;

namespace {

std::string compile_error(const std::string& name) {
    try {
        ManifoldModel::compile(ModelSpec::load(fixture(name)));
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

// d(a ^ b) = da ^ b + (-1)^{deg a} a ^ db on all basis pairs (constant forms).
bool leibniz_on_basis(const ModelPtr& m, const GradedOperator& D) {
    int N = m->N();
    auto blades = all_blades(N);
    for (auto& a : blades)
        for (auto& b : blades) {
            if (a.mask & b.mask) continue;
            Form fa = Form::term(N, a, Polynomial(Scalar(1))), fb = Form::term(N, b, Polynomial(Scalar(1)));
            Form lhs = D.apply(wedge(fa, fb));
            Form rhs = wedge(D.apply(fa), fb) + Scalar(a.degree() % 2 ? -1 : 1) * wedge(fa, D.apply(fb));
            if (!(lhs == rhs)) return false;
        }
    return true;
}

}  // namespace

TEST(ModelSpec, JsonRoundTrip) {
    for (auto name : {"hopf", "flat-h1", "torus8"}) {
        auto s = ModelSpec::load(fixture(name));
        auto again = ModelSpec::from_json(s.to_json());
        EXPECT_EQ(again.to_json(), s.to_json()) << name;
    }
}

TEST(ModelSpec, ParsesRationalStrings) {
    auto j = ModelSpec::load(fixture("torus4")).to_json();
    j["metric"] = nlohmann::json::array();
    for (int r = 0; r < 4; ++r) {
        auto row = nlohmann::json::array();
        for (int c = 0; c < 4; ++c) row.push_back(r == c ? nlohmann::json("3/2") : nlohmann::json(0));
        j["metric"].push_back(row);
    }
    auto s = ModelSpec::from_json(j);
    EXPECT_EQ((*s.metric)(1, 1), Scalar::rational(3, 2));
    auto m = ManifoldModel::compile(s);
    EXPECT_EQ(m->metric().hermitian().gram(0, 0), Scalar::rational(3, 2));
}

TEST(ModelSpec, RejectsMalformedInput) {
    auto j = ModelSpec::load(fixture("hopf")).to_json();
    j["backend"] = "moduli";
    EXPECT_THROW(ModelSpec::from_json(j), SpecError);
    j = ModelSpec::load(fixture("hopf")).to_json();
    j["structure_constants"][0]["i"] = 3;
    EXPECT_THROW(ModelSpec::from_json(j), SpecError);
    j = ModelSpec::load(fixture("hopf")).to_json();
    j["frame"]["I"][0][0] = "x/y";
    EXPECT_THROW(ModelSpec::from_json(j), SpecError);
    EXPECT_THROW(ModelSpec::load(fixture("missing")), SpecError);
}

TEST(Compile, NamedValidationErrors) {
    EXPECT_EQ(compile_error("bad-jacobi").rfind("jacobi:", 0), 0u);
    EXPECT_EQ(compile_error("bad-metric").rfind("metric-invariance:", 0), 0u);
    EXPECT_EQ(compile_error("bad-frame").rfind("quaternion-relations:", 0), 0u);
    // su(2) + R has a degenerate Killing form
    auto s = ModelSpec::load(fixture("hopf"));
    s.killing_metric = true;
    EXPECT_EQ([&] {
        try {
            ManifoldModel::compile(s);
        } catch (const std::exception& e) {
            return std::string(e.what());
        }
        return std::string();
    }().rfind("metric-positivity:", 0), 0u);
}

TEST(Compile, TorusIsTrivial) {
    for (auto name : {"torus4", "torus8"}) {
        auto m = load(name);
        EXPECT_TRUE(m->d().is_zero());
        EXPECT_TRUE(m->hypercomplex());
        const auto& D = m->dolbeault();
        for (auto* op : {&D.del, &D.delbar, &D.dc, &D.del_J, &D.d_plus}) EXPECT_TRUE(op->is_zero());
        EXPECT_EQ(m->hkt_status().status, HktStatus::hyperkahler);
        auto T = m->bismut_torsion();
        EXPECT_TRUE(T.T_I.is_zero());
        EXPECT_TRUE(T.agree);
    }
}

TEST(Compile, DifferentialIsOddDerivationSquaringToZero) {
    for (auto name : {"hopf", "flat-h1", "torus4"}) {
        auto m = load(name);
        EXPECT_TRUE((m->d() * m->d()).is_zero()) << name;
        EXPECT_EQ(m->d().parity(), Parity::odd);
        EXPECT_TRUE(leibniz_on_basis(m, m->d())) << name;
    }
}

TEST(Compile, FlatLeibnizOnPolynomialForms) {
    auto m = load("flat-h1");
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> coef(-2, 2);
    auto random_form = [&](int k) {
        Form f(4);
        for (auto& b : blades_of_degree(4, k))
            for (auto& mono : monomials_up_to(4, 2)) {
                int c = coef(rng);
                if (c) f.add(b, mono, Scalar(c));
            }
        return f;
    };
    for (int k = 0; k < 3; ++k) {
        Form a = random_form(k), b = random_form(1);
        Form lhs = m->d().apply(wedge(a, b));
        Form rhs = wedge(m->d().apply(a), b) + Scalar(k % 2 ? -1 : 1) * wedge(a, m->d().apply(b));
        EXPECT_EQ(lhs, rhs);
    }
}

TEST(Compile, HopfIsHypercomplex) {
    auto m = load("hopf");
    EXPECT_FALSE(m->d().is_zero());
    EXPECT_TRUE(m->integrable('I'));
    EXPECT_TRUE(m->integrable('J'));
    EXPECT_TRUE(m->integrable('K'));
    // a rotated triple stays integrable
    auto rt = m->frame().triple().rotated(rotation_from_quaternion(2, 1, 0, -1));
    EXPECT_TRUE(m->nijenhuis(rt.I));
}

TEST(Compile, NonIntegrableFrameIsFlagged) {
    // conjugate the Hopf frame by a shear that is not a Lie algebra automorphism;
    // the metric is carried along so that it stays invariant
    auto s = ModelSpec::load(fixture("hopf"));
    Matrix A = Matrix::identity(4);
    A(1, 0) = 1;
    Matrix Ainv = *inverse(A);
    s.I = A * s.I * Ainv;
    s.J = A * s.J * Ainv;
    s.metric = Ainv.transpose() * Ainv;
    auto m = ManifoldModel::compile(s);
    EXPECT_FALSE(m->hypercomplex());
    EXPECT_THROW(m->dolbeault(), StructureError);
}

TEST(Dolbeault, ProjectorDefinitionAgrees) {
    for (auto name : {"hopf", "flat-h1"}) {
        auto m = load(name);
        const auto& fr = m->frame();
        GradedOperator del = GradedOperator::zero(m->fiber(), Parity::odd), delbar = del;
        for (int p = 0; p <= 2; ++p)
            for (int q = 0; q <= 2; ++q) {
                if (p < 2) del += fr.pi(p + 1, q) * m->d() * fr.pi(p, q);
                if (q < 2) delbar += fr.pi(p, q + 1) * m->d() * fr.pi(p, q);
            }
        EXPECT_EQ(m->dolbeault().del, del) << name;
        EXPECT_EQ(m->dolbeault().delbar, delbar) << name;
    }
}

TEST(Dolbeault, Identities) {
    for (auto name : {"hopf", "flat-h1", "flat-h2"}) {
        auto m = load(name);
        const auto& D = m->dolbeault();
        EXPECT_TRUE((D.del * D.del).is_zero()) << name;
        EXPECT_TRUE((D.delbar * D.delbar).is_zero()) << name;
        EXPECT_TRUE(supercommutator(D.del, D.del_J).is_zero()) << name;
        EXPECT_TRUE((D.del_J * D.del_J).is_zero()) << name;
        EXPECT_TRUE(supercommutator(m->d(), D.dc).is_zero()) << name;
        EXPECT_TRUE((D.dc * D.dc).is_zero()) << name;
        // with the group action of I, d^c = i(del - delbar)
        EXPECT_EQ(D.dc, Scalar::i() * (D.del - D.delbar)) << name;
    }
}

TEST(Dolbeault, DelbarLeibniz) {
    auto m = load("hopf");
    EXPECT_TRUE(leibniz_on_basis(m, m->dolbeault().delbar));
    EXPECT_TRUE(leibniz_on_basis(m, m->dolbeault().del_J));
}

TEST(Dolbeault, DelJSignTable) {
    // del_J = J delbar J^{-1} = (-1)^k J delbar J on k-forms
    for (auto name : {"flat-h1", "hopf"}) {
        auto m = load(name);
        for (auto& [k, s] : m->dolbeault().del_J_sign) {
            if (s == SignFit::vacuous) continue;
            EXPECT_EQ(s, k % 2 ? SignFit::minus : SignFit::plus) << name << " k=" << k;
        }
    }
    EXPECT_EQ(load("flat-h1")->dolbeault().del_J_sign.at(3), SignFit::minus);
}

TEST(Dolbeault, DelJOnFunctions) {
    // del_J f = J(delbar f)
    auto m = load("flat-h1");
    Form f(4);
    f.add(Blade{}, Polynomial::variable(0) * Polynomial::variable(2) + Polynomial::variable(1));
    const auto& D = m->dolbeault();
    EXPECT_EQ(D.del_J.apply(f), m->frame().act_J().apply(D.delbar.apply(f)));
}

TEST(Dolbeault, PlusCorrespondence) {
    for (auto name : {"hopf", "flat-h1", "flat-h2"}) {
        auto m = load(name);
        for (auto& c : m->plus_dolbeault_correspondence()) {
            if (!c.del_vacuous) EXPECT_EQ(c.del_constant, Scalar(1)) << name << " " << c.p << "," << c.q;
            if (!c.del_J_vacuous) EXPECT_EQ(c.del_J_constant, ManifoldModel::plus_del_J_constant()) << name;
        }
    }
}

TEST(Dolbeault, WeightIncreaseAtMostOne) {
    for (auto name : {"hopf", "flat-h2"}) {
        auto m = load(name);
        const auto& w = m->frame().weights();
        for (auto& [k, byw] : w.projectors) {
            if (k + 1 > m->N()) continue;
            for (auto& [wt, P] : byw)
                for (auto& [wt2, Q] : w.projectors.at(k + 1))
                    if (wt2 > wt + 1) EXPECT_TRUE((Q * m->d() * P).is_zero()) << name << " " << k << " " << wt;
        }
    }
}

TEST(HktStatus, HopfIsHktButNotHyperkahler) {
    auto m = load("hopf");
    auto ev = m->hkt_status();
    EXPECT_EQ(ev.status, HktStatus::hkt);
    EXPECT_FALSE(ev.d_Omega.is_zero());
    EXPECT_TRUE(ev.del_Omega.is_zero());
    EXPECT_TRUE(ev.weight_one);
    EXPECT_TRUE(ev.d_plus_omega_I_zero);
    EXPECT_TRUE(ev.equivalence_holds());
}

TEST(HktStatus, FlatIsHyperkahler) {
    for (auto name : {"flat-h1", "flat-h2", "torus8"}) {
        auto ev = load(name)->hkt_status();
        EXPECT_EQ(ev.status, HktStatus::hyperkahler);
        EXPECT_TRUE(ev.equivalence_holds());
    }
}

TEST(Torsion, HopfTorsionFormsAgree) {
    auto T = load("hopf")->bismut_torsion();
    EXPECT_TRUE(T.agree);
    EXPECT_FALSE(T.T_I.is_zero());
    // T = -(structure 3-form) = -2 e^{123} for the identity metric
    EXPECT_EQ(T.scale, Scalar(-1));
    EXPECT_EQ(T.T_I, Form::term(4, Blade::from_indices({1, 2, 3}), Polynomial(Scalar(-2))));
}

TEST(Torsion, ScaledMetricScalesTorsion) {
    auto s = ModelSpec::load(fixture("hopf"));
    s.metric = Matrix::identity(4) * Scalar(3);
    auto T = ManifoldModel::compile(s)->bismut_torsion();
    EXPECT_TRUE(T.agree);
    EXPECT_EQ(T.scale, Scalar(-1));
    EXPECT_EQ(T.T_I, Form::term(4, Blade::from_indices({1, 2, 3}), Polynomial(Scalar(-6))));
}
