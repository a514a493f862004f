#pragma once
// Gaussian rationals Q(i) on top of gmpxx.

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hkt {

class Scalar {
public:
    Scalar() = default;
    Scalar(long v) : re_(v) {}  // NOLINT: implicit from integers is intended
    Scalar(int v) : re_(v) {}   // NOLINT
    Scalar(mpq_class re) : re_(std::move(re)) { re_.canonicalize(); }  // NOLINT
    Scalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
        re_.canonicalize();
        im_.canonicalize();
    }

    static Scalar i() { return Scalar(mpq_class(0), mpq_class(1)); }
    static Scalar rational(long p, long q) { return Scalar(mpq_class(p, q)); }

    // Accepts "p", "p/q", and a trailing imaginary part "a+b*i", "b*i", "i", "-i".
    static Scalar parse(std::string_view text);

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

    Scalar conj() const { return Scalar(re_, -im_); }
    mpq_class norm2() const { return re_ * re_ + im_ * im_; }

    Scalar operator-() const { return Scalar(-re_, -im_); }
    Scalar& operator+=(const Scalar& o) { re_ += o.re_; im_ += o.im_; return *this; }
    Scalar& operator-=(const Scalar& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
    Scalar& operator*=(const Scalar& o) {
        if (sgn(im_) == 0 && sgn(o.im_) == 0) {
            re_ *= o.re_;
            return *this;
        }
        mpq_class r = re_ * o.re_ - im_ * o.im_;
        mpq_class m = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(m);
        return *this;
    }
    Scalar& operator/=(const Scalar& o) {
        if (o.is_zero()) throw std::domain_error("Scalar: division by zero");
        if (sgn(o.im_) == 0) {
            re_ /= o.re_;
            im_ /= o.re_;
            return *this;
        }
        mpq_class d = o.norm2();
        mpq_class r = (re_ * o.re_ + im_ * o.im_) / d;
        mpq_class m = (im_ * o.re_ - re_ * o.im_) / d;
        re_ = std::move(r);
        im_ = std::move(m);
        return *this;
    }
    // Multiply in place by a*i^k style units without generic products.
    void mul_i() { std::swap(re_, im_); re_ = -re_; }

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    friend bool operator==(const Scalar& a, const Scalar& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    std::string to_string() const;
    friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

    std::size_t hash() const {
        std::size_t h = std::hash<std::string>{}(re_.get_str());
        return h ^ (std::hash<std::string>{}(im_.get_str()) * 1000003u);
    }

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

inline std::string Scalar::to_string() const {
    if (sgn(im_) == 0) return re_.get_str();
    std::string ims;
    if (im_ == 1) ims = "i";
    else if (im_ == -1) ims = "-i";
    else ims = im_.get_str() + "*i";
    if (sgn(re_) == 0) return ims;
    if (ims[0] == '-') return re_.get_str() + ims;
    return re_.get_str() + "+" + ims;
}

namespace detail {
inline mpq_class parse_rational(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty rational");
    std::string t(s);
    if (t[0] == '+') t.erase(0, 1);
    auto slash = t.find('/');
    auto digits_ok = [](std::string_view d) {
        if (!d.empty() && d[0] == '-') d.remove_prefix(1);
        if (d.empty()) return false;
        for (char c : d)
            if (c < '0' || c > '9') return false;
        return true;
    };
    if (slash == std::string::npos) {
        if (!digits_ok(t)) throw std::invalid_argument("malformed rational '" + std::string(s) + "'");
        return mpq_class(mpz_class(t));
    }
    std::string num = t.substr(0, slash), den = t.substr(slash + 1);
    if (!digits_ok(num) || !digits_ok(den) || den[0] == '-')
        throw std::invalid_argument("malformed rational '" + std::string(s) + "'");
    mpz_class d(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
    mpq_class q(mpz_class(num), d);
    q.canonicalize();
    return q;
}
}  // namespace detail

inline Scalar Scalar::parse(std::string_view text) {
    std::string s;
    for (char c : text)
        if (c != ' ') s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty scalar");
    if (s.back() != 'i') return Scalar(detail::parse_rational(s));
    s.pop_back();
    if (!s.empty() && s.back() == '*') s.pop_back();
    // split at the last sign that is not leading
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;)
        if (s[k] == '+' || s[k] == '-') { split = k; break; }
    std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
    std::string im_part = split == std::string::npos ? s : s.substr(split);
    mpq_class im;
    if (im_part.empty() || im_part == "+") im = 1;
    else if (im_part == "-") im = -1;
    else im = detail::parse_rational(im_part);
    mpq_class re = re_part.empty() ? mpq_class(0) : detail::parse_rational(re_part);
    return Scalar(re, im);
}

}  // namespace hkt
