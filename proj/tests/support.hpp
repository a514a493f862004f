#pragma once
// Shared helpers for the unit tests.

#include "hkt/model.hpp"
#include "hkt/quaternionic.hpp"

#include <array>
#include <map>
#include <random>

namespace hkt::testing {

// Right multiplication by i and j on H = span(1, i, j, k), repeated n times.
inline QuaternionTriple right_triple(int n) {
    int N = 4 * n;
    Matrix I(N, N), J(N, N);
    for (int b = 0; b < n; ++b) {
        int o = 4 * b;
        I(o + 1, o + 0) = 1;
        I(o + 0, o + 1) = -1;
        I(o + 3, o + 2) = -1;
        I(o + 2, o + 3) = 1;
        J(o + 2, o + 0) = 1;
        J(o + 3, o + 1) = 1;
        J(o + 0, o + 2) = -1;
        J(o + 1, o + 3) = -1;
    }
    return QuaternionTriple::from_IJ(I, J);
}

// omega_L = sum_{a<b} (gL)(a,b) e^a ^ e^b
inline Form fundamental(const Matrix& g, const Matrix& L) {
    Matrix w = g * L;
    int N = g.rows();
    Form f(N);
    for (int a = 0; a < N; ++a)
        for (int b = a + 1; b < N; ++b)
            if (!w(a, b).is_zero()) f.add(Blade::from_indices({a, b}), Polynomial(w(a, b)));
    return f;
}

inline Form random_constant_form(int N, int k, std::mt19937& rng) {
    std::uniform_int_distribution<int> dist(-3, 3);
    Form f(N);
    for (auto& b : blades_of_degree(N, k)) {
        Scalar c(mpq_class(dist(rng)), mpq_class(dist(rng)));
        if (!c.is_zero()) f.add(b, Polynomial(c));
    }
    return f;
}

// Quaternion (w, x, y, z) = w + x i + y j + z k.
using Quat = std::array<mpq_class, 4>;
inline Quat qmul(const Quat& a, const Quat& b) {
    return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3], a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1], a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}
inline Quat qconj(const Quat& a) { return {a[0], -a[1], -a[2], -a[3]}; }

// g(x, y) = Re(sum conj(x_s) h_st y_t) for a quaternionic Hermitian h; this is
// invariant under right multiplication by unit quaternions.
inline Matrix quaternionic_metric(const std::vector<std::vector<Quat>>& h) {
    int n = int(h.size()), N = 4 * n;
    Matrix g(N, N);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            Quat ua{}, ub{};
            ua[a % 4] = 1;
            ub[b % 4] = 1;
            g(a, b) = qmul(qmul(qconj(ua), h[a / 4][b / 4]), ub)[0];
        }
    return g;
}

// Positive definite 2x2 example: diag(2, 3) with off-diagonal 1/2 + i/3 - k/4.
inline Matrix sample_metric_n2() {
    Quat q{mpq_class(1, 2), mpq_class(1, 3), 0, mpq_class(-1, 4)};
    return quaternionic_metric({{Quat{2, 0, 0, 0}, q}, {qconj(q), Quat{3, 0, 0, 0}}});
}

inline std::vector<Scalar> coords_of(const FiberPtr& fib, const Form& f) { return fib->coords(f); }

#ifdef HKT_FIXTURE_DIR
inline std::string fixture(const std::string& name) { return std::string(HKT_FIXTURE_DIR) + "/" + name + ".json"; }

// Compiled fixtures are cached per test binary.
inline ModelPtr load(const std::string& name) {
    static std::map<std::string, ModelPtr> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, ManifoldModel::compile(ModelSpec::load(fixture(name)))).first;
    return it->second;
}
#endif

}  // namespace hkt::testing

namespace hkt {
inline void PrintTo(const Form& f, std::ostream* os) { *os << f.to_string(); }
inline void PrintTo(const Scalar& s, std::ostream* os) { *os << s.to_string(); }
}  // namespace hkt
