#pragma once
// Exterior forms on R^N with polynomial coefficients.

#include "hkt/polynomial.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hkt {

constexpr int kMaxDimension = 32;

// Basis blade e^{i1}^...^e^{ik}, i1 < ... < ik, stored as a bitmask.
struct Blade {
    std::uint32_t mask = 0;

    static Blade single(int i) { return Blade{std::uint32_t{1} << i}; }
    static Blade from_indices(const std::vector<int>& idx) {
        Blade b;
        int last = -1;
        for (int i : idx) {
            if (i <= last) throw std::invalid_argument("blade indices must be strictly increasing");
            if (i >= kMaxDimension) throw std::invalid_argument("blade index out of range");
            b.mask |= std::uint32_t{1} << i;
            last = i;
        }
        return b;
    }
    int degree() const { return std::popcount(mask); }
    bool contains(int i) const { return (mask >> i) & 1u; }
    std::vector<int> indices() const {
        std::vector<int> out;
        for (std::uint32_t m = mask; m; m &= m - 1) out.push_back(std::countr_zero(m));
        return out;
    }
    // Graded order: degree first, then lexicographic on index lists.
    friend bool operator<(const Blade& a, const Blade& b) {
        int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        std::uint32_t diff = a.mask ^ b.mask;
        return diff != 0 && (a.mask & (diff & (~diff + 1))) != 0;
    }
    friend bool operator==(const Blade&, const Blade&) = default;

    std::string to_string() const {
        if (mask == 0) return "1";
        std::string out = "e";
        bool first = true;
        for (int i : indices()) {
            if (!first) out += ",";
            out += std::to_string(i);
            first = false;
        }
        return out;
    }
};

// Sign of e^a ^ e^b relative to e^{a|b}; zero when they overlap.
inline int wedge_sign(Blade a, Blade b) {
    if (a.mask & b.mask) return 0;
    int swaps = 0;
    for (std::uint32_t m = b.mask; m; m &= m - 1) {
        int j = std::countr_zero(m);
        swaps += std::popcount(a.mask >> (j + 1));
    }
    return (swaps & 1) ? -1 : 1;
}

inline std::vector<Blade> blades_of_degree(int N, int k) {
    std::vector<Blade> out;
    if (k < 0 || k > N) return out;
    std::vector<int> idx(k);
    for (int t = 0; t < k; ++t) idx[t] = t;
    while (true) {
        out.push_back(Blade::from_indices(idx));
        int t = k - 1;
        while (t >= 0 && idx[t] == N - k + t) --t;
        if (t < 0) break;
        ++idx[t];
        for (int s = t + 1; s < k; ++s) idx[s] = idx[s - 1] + 1;
    }
    return out;
}

inline std::vector<Blade> all_blades(int N) {
    std::vector<Blade> out;
    for (int k = 0; k <= N; ++k) {
        auto layer = blades_of_degree(N, k);
        out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
}

class Form {
public:
    struct BladeLess {
        bool operator()(const Blade& a, const Blade& b) const { return a < b; }
    };
    using Coeffs = std::map<Blade, Polynomial, BladeLess>;

    Form() = default;
    explicit Form(int dim) : dim_(dim) {
        if (dim < 0 || dim > kMaxDimension) throw std::invalid_argument("form dimension out of range");
    }
    static Form one(int dim) { return term(dim, Blade{}, Polynomial(Scalar(1))); }
    static Form term(int dim, Blade b, Polynomial c) {
        Form f(dim);
        f.add(b, c);
        return f;
    }
    static Form covector(int dim, int i, Scalar c = 1) { return term(dim, Blade::single(i), Polynomial(c)); }

    int dim() const { return dim_; }
    const Coeffs& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    Polynomial coefficient(Blade b) const {
        auto it = coeffs_.find(b);
        return it == coeffs_.end() ? Polynomial{} : it->second;
    }

    void add(Blade b, const Polynomial& c) {
        if (c.is_zero()) return;
        if (std::bit_width(b.mask) > dim_) throw std::invalid_argument("blade exceeds form dimension");
        auto [it, fresh] = coeffs_.emplace(b, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }
    void add(Blade b, Monomial m, const Scalar& c) { add(b, Polynomial::monomial(m, c)); }

    // Degree if homogeneous; nullopt for zero or mixed forms.
    std::optional<int> degree() const {
        std::optional<int> d;
        for (auto& [b, _] : coeffs_) {
            if (d && *d != b.degree()) return std::nullopt;
            d = b.degree();
        }
        return d;
    }
    bool is_constant() const {
        for (auto& [_, c] : coeffs_)
            if (!c.is_constant()) return false;
        return true;
    }
    Form component(int k) const {
        Form out(dim_);
        for (auto& [b, c] : coeffs_)
            if (b.degree() == k) out.coeffs_.emplace(b, c);
        return out;
    }

    Form& operator+=(const Form& o) {
        check_dim(o);
        for (auto& [b, c] : o.coeffs_) add(b, c);
        return *this;
    }
    Form& operator-=(const Form& o) {
        check_dim(o);
        for (auto& [b, c] : o.coeffs_) add(b, -c);
        return *this;
    }
    Form& operator*=(const Scalar& s) {
        if (s.is_zero()) { coeffs_.clear(); return *this; }
        for (auto& [b, c] : coeffs_) c *= s;
        return *this;
    }
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator*(Form a, const Scalar& s) { return a *= s; }
    friend Form operator*(const Scalar& s, Form a) { return a *= s; }
    Form operator-() const { return *this * Scalar(-1); }
    friend bool operator==(const Form& a, const Form& b) { return a.dim_ == b.dim_ && a.coeffs_ == b.coeffs_; }

    Form conj() const {
        Form out(dim_);
        for (auto& [b, c] : coeffs_) out.coeffs_.emplace(b, c.conj());
        return out;
    }
    Form times(const Polynomial& p) const {
        Form out(dim_);
        for (auto& [b, c] : coeffs_) out.add(b, c * p);
        return out;
    }

    std::string to_string() const {
        if (coeffs_.empty()) return "0";
        std::string out;
        for (auto& [b, c] : coeffs_) {
            if (!out.empty()) out += " + ";
            out += "[" + c.to_string(dim_) + "]" + b.to_string();
        }
        return out;
    }

private:
    void check_dim(const Form& o) const {
        if (o.dim_ != dim_) throw std::invalid_argument("form dimension mismatch");
    }
    int dim_ = 0;
    Coeffs coeffs_;
};

inline Form wedge(const Form& a, const Form& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("wedge: dimension mismatch");
    Form out(a.dim());
    for (auto& [ba, ca] : a.coeffs())
        for (auto& [bb, cb] : b.coeffs()) {
            int s = wedge_sign(ba, bb);
            if (s == 0) continue;
            out.add(Blade{ba.mask | bb.mask}, (ca * cb) * Scalar(s));
        }
    return out;
}

inline Form wedge_power(const Form& a, int k) {
    Form out = Form::one(a.dim());
    for (int t = 0; t < k; ++t) out = wedge(out, a);
    return out;
}

}  // namespace hkt
