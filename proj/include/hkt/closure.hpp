#pragma once
// Lie superalgebra presentations and bracket closure of operator families.

#include "hkt/operator.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hkt {

// Generators with parity and a bracket table
//   [g_i, g_j] = sum_k table[i][j][k] g_k.
struct SuperAlgebraPresentation {
    std::vector<std::string> names;
    std::vector<Parity> parities;
    std::vector<std::vector<std::vector<Scalar>>> table;

    int dim() const { return int(names.size()); }

    static SuperAlgebraPresentation empty_with(std::vector<std::string> names, std::vector<Parity> parities) {
        SuperAlgebraPresentation p;
        int d = int(names.size());
        p.names = std::move(names);
        p.parities = std::move(parities);
        p.table.assign(d, std::vector<std::vector<Scalar>>(d, std::vector<Scalar>(d)));
        return p;
    }
    int index(const std::string& name) const {
        for (int i = 0; i < dim(); ++i)
            if (names[i] == name) return i;
        throw std::out_of_range("unknown generator " + name);
    }
    // Sets [a,b] and the graded-antisymmetric partner [b,a].
    void set(const std::string& a, const std::string& b, const std::vector<std::pair<std::string, Scalar>>& value) {
        int i = index(a), j = index(b);
        std::vector<Scalar> v(dim());
        for (auto& [nm, c] : value) v[index(nm)] += c;
        table[i][j] = v;
        Scalar s = sign(i, j);
        for (auto& x : v) x *= -s;
        table[j][i] = v;
    }
    // (-1)^{|a||b|}
    Scalar sign(int i, int j) const {
        return (parities[i] == Parity::odd && parities[j] == Parity::odd) ? Scalar(-1) : Scalar(1);
    }

    // Bracket of two elements given in coordinates.
    std::vector<Scalar> bracket(const std::vector<Scalar>& x, const std::vector<Scalar>& y) const {
        std::vector<Scalar> out(dim());
        for (int i = 0; i < dim(); ++i) {
            if (x[i].is_zero()) continue;
            for (int j = 0; j < dim(); ++j) {
                if (y[j].is_zero()) continue;
                Scalar c = x[i] * y[j];
                for (int k = 0; k < dim(); ++k)
                    if (!table[i][j][k].is_zero()) out[k] += c * table[i][j][k];
            }
        }
        return out;
    }
    std::vector<Scalar> unit(int i) const {
        std::vector<Scalar> v(dim());
        v[i] = 1;
        return v;
    }

    // First violation of graded antisymmetry, or nullopt.
    std::optional<std::string> antisymmetry_violation() const {
        for (int i = 0; i < dim(); ++i)
            for (int j = 0; j < dim(); ++j)
                for (int k = 0; k < dim(); ++k)
                    if (table[i][j][k] != -sign(i, j) * table[j][i][k])
                        return "[" + names[i] + "," + names[j] + "]";
        return std::nullopt;
    }
    // First violation of [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|}[b,[a,c]], or nullopt.
    std::optional<std::string> jacobi_violation() const {
        for (int a = 0; a < dim(); ++a)
            for (int b = 0; b < dim(); ++b)
                for (int c = 0; c < dim(); ++c) {
                    auto ea = unit(a), eb = unit(b), ec = unit(c);
                    auto lhs = bracket(ea, table[b][c]);
                    auto r1 = bracket(table[a][b], ec);
                    auto r2 = bracket(eb, table[a][c]);
                    Scalar s = sign(a, b);
                    for (int k = 0; k < dim(); ++k)
                        if (lhs[k] != r1[k] + s * r2[k])
                            return "(" + names[a] + ", " + names[b] + ", " + names[c] + ")";
                }
        return std::nullopt;
    }

    // Supertrace form str(ad x ad y) on the generators.
    Matrix killing_form() const {
        int d = dim();
        std::vector<Matrix> ad(d, Matrix(d, d));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) ad[i](k, j) = table[i][j][k];
        Matrix kf(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                Matrix p = ad[i] * ad[j];
                Scalar s;
                for (int k = 0; k < d; ++k) s += (parities[k] == Parity::odd ? -p(k, k) : p(k, k));
                kf(i, j) = s;
            }
        return kf;
    }

    std::string bracket_string(int i, int j) const {
        std::ostringstream os;
        bool first = true;
        for (int k = 0; k < dim(); ++k) {
            const Scalar& c = table[i][j][k];
            if (c.is_zero()) continue;
            if (!first) os << " + ";
            os << "(" << c << ")" << names[k];
            first = false;
        }
        return first ? "0" : os.str();
    }
};

struct ClosureResult {
    bool closed = false;
    int dimension = 0;
    SuperAlgebraPresentation presentation;
    std::vector<GradedOperator> basis;
    std::string offending;  // last bracket that pushed past the cap
};

// Spans brackets until closure. Basis: independent inputs first, then new
// bracket products in discovery order.
inline ClosureResult close_and_extract(const std::vector<GradedOperator>& ops, const std::vector<std::string>& names,
                                       int cap = 64) {
    if (ops.size() != names.size()) throw std::invalid_argument("close_and_extract: one name per operator");
    ClosureResult res;
    LinearSpan span;
    std::vector<std::string> bnames;
    for (std::size_t t = 0; t < ops.size(); ++t) {
        if (t > 0 && ops[t].space() != ops[0].space()) throw std::invalid_argument("close_and_extract: incompatible domains");
        if (span.add(ops[t].flatten())) {
            res.basis.push_back(ops[t]);
            bnames.push_back(names[t]);
        }
    }
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Scalar>> coords;
    std::size_t done = 0;  // pairs (i,j) with j < done already processed for every i <= j
    bool grew = true;
    while (grew) {
        grew = false;
        std::size_t cur = res.basis.size();
        for (std::size_t j = 0; j < cur; ++j)
            for (std::size_t i = 0; i <= j; ++i) {
                if (j < done) continue;
                if (coords.count({i, j})) continue;
                GradedOperator b = supercommutator(res.basis[i], res.basis[j]);
                auto v = b.flatten();
                if (span.add(v)) {
                    res.basis.push_back(b);
                    bnames.push_back("[" + bnames[i] + "," + bnames[j] + "]");
                    grew = true;
                    if (int(res.basis.size()) > cap) {
                        res.closed = false;
                        res.dimension = int(res.basis.size());
                        res.offending = bnames.back();
                        return res;
                    }
                }
                auto c = span.coordinates(v);
                coords[{i, j}] = *c;
            }
        done = cur;
    }
    int d = int(res.basis.size());
    std::vector<Parity> par;
    for (auto& b : res.basis) par.push_back(b.parity());
    res.presentation = SuperAlgebraPresentation::empty_with(bnames, par);
    for (auto& [ij, c] : coords) {
        auto [i, j] = ij;
        std::vector<Scalar> v(d);
        for (std::size_t k = 0; k < c.size(); ++k) v[k] = c[k];
        res.presentation.table[i][j] = v;
        Scalar s = res.presentation.sign(int(i), int(j));
        for (auto& x : v) x *= -s;
        res.presentation.table[j][i] = v;
    }
    res.closed = true;
    res.dimension = d;
    return res;
}

}  // namespace hkt
