#pragma once
// Polynomials over Q(i) in at most 8 real variables.

#include "hkt/scalar.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hkt {

constexpr int kMaxVariables = 8;

// Exponent vector, 8 bits per variable.
struct Monomial {
    std::uint64_t packed = 0;

    static Monomial var(int j) { return Monomial{std::uint64_t{1} << (8 * j)}; }
    int exponent(int j) const { return int((packed >> (8 * j)) & 0xff); }
    int degree() const {
        int d = 0;
        for (int j = 0; j < kMaxVariables; ++j) d += exponent(j);
        return d;
    }
    bool is_one() const { return packed == 0; }
    bool divides(const Monomial& o) const {
        for (int j = 0; j < kMaxVariables; ++j)
            if (exponent(j) > o.exponent(j)) return false;
        return true;
    }
    friend Monomial operator*(Monomial a, Monomial b) { return Monomial{a.packed + b.packed}; }
    // pre: b divides a
    friend Monomial operator/(Monomial a, Monomial b) { return Monomial{a.packed - b.packed}; }
    friend auto operator<=>(const Monomial&, const Monomial&) = default;

    std::string to_string(int nvars) const {
        std::string out;
        for (int j = 0; j < nvars; ++j) {
            int e = exponent(j);
            if (e == 0) continue;
            if (!out.empty()) out += "*";
            out += "x" + std::to_string(j);
            if (e > 1) out += "^" + std::to_string(e);
        }
        return out.empty() ? "1" : out;
    }
};

// All monomials in nvars variables of total degree <= max_degree, graded order.
inline std::vector<Monomial> monomials_up_to(int nvars, int max_degree) {
    std::vector<Monomial> out{Monomial{}};
    std::vector<Monomial> layer{Monomial{}};
    for (int d = 1; d <= max_degree; ++d) {
        std::map<Monomial, int> next;
        for (const auto& m : layer)
            for (int j = 0; j < nvars; ++j) next.emplace(m * Monomial::var(j), 0);
        layer.clear();
        for (auto& [m, _] : next) layer.push_back(m);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

class Polynomial {
public:
    using Terms = std::map<Monomial, Scalar>;

    Polynomial() = default;
    Polynomial(Scalar c) {  // NOLINT
        if (!c.is_zero()) terms_.emplace(Monomial{}, std::move(c));
    }
    static Polynomial monomial(Monomial m, Scalar c = 1) {
        Polynomial p;
        if (!c.is_zero()) p.terms_.emplace(m, std::move(c));
        return p;
    }
    static Polynomial variable(int j) { return monomial(Monomial::var(j)); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }
    Scalar coefficient(Monomial m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Scalar{} : it->second;
    }
    Scalar constant_term() const {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? Scalar{} : it->second;
    }
    int degree() const {
        int d = -1;
        for (auto& [m, _] : terms_) d = std::max(d, m.degree());
        return d;
    }

    void add_term(Monomial m, const Scalar& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        for (auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Polynomial& operator*=(const Scalar& s) {
        if (s.is_zero()) { terms_.clear(); return *this; }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Scalar& s) { return a *= s; }
    friend Polynomial operator*(const Scalar& s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial out;
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
        return out;
    }
    Polynomial operator-() const { return *this * Scalar(-1); }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

    Polynomial conj() const {
        Polynomial out;
        for (auto& [m, c] : terms_) out.terms_.emplace(m, c.conj());
        return out;
    }

    // d/dx_j
    Polynomial derivative(int j) const {
        Polynomial out;
        for (auto& [m, c] : terms_) {
            int e = m.exponent(j);
            if (e == 0) continue;
            out.add_term(m / Monomial::var(j), c * Scalar(e));
        }
        return out;
    }
    // Multi-index derivative d^alpha.
    Polynomial derivative(Monomial alpha) const {
        Polynomial out;
        for (auto& [m, c] : terms_) {
            if (!alpha.divides(m)) continue;
            Scalar f = c;
            for (int j = 0; j < kMaxVariables; ++j) {
                int e = m.exponent(j), a = alpha.exponent(j);
                for (int t = 0; t < a; ++t) f *= Scalar(e - t);
            }
            out.add_term(m / alpha, f);
        }
        return out;
    }

    Polynomial truncated(int max_degree) const {
        Polynomial out;
        for (auto& [m, c] : terms_)
            if (m.degree() <= max_degree) out.terms_.emplace(m, c);
        return out;
    }

    std::string to_string(int nvars) const {
        if (terms_.empty()) return "0";
        std::string out;
        for (auto& [m, c] : terms_) {
            if (!out.empty()) out += " + ";
            out += "(" + c.to_string() + ")";
            if (!m.is_one()) out += "*" + m.to_string(nvars);
        }
        return out;
    }

private:
    Terms terms_;
};

}  // namespace hkt
