// Prints the Hodge star of 1, Omega and a (1,0)-covector on flat H^n as
// multiples of Omega^n Omega-bar^n, Omega^(n-1) Omega-bar^n and
// Omega^(n-1) Omega-bar^n J(conj eta), next to the stated coefficients.

#include "hkt/metric.hpp"

#include <iostream>

namespace {

hkt::QuaternionTriple right_triple(int n) {
    using hkt::Matrix;
    Matrix I(4 * n, 4 * n), J(4 * n, 4 * n);
    for (int b = 0; b < n; ++b) {
        int o = 4 * b;
        I(o + 1, o) = 1, I(o, o + 1) = -1, I(o + 2, o + 3) = 1, I(o + 3, o + 2) = -1;
        J(o + 2, o) = 1, J(o + 3, o + 1) = 1, J(o, o + 2) = -1, J(o + 1, o + 3) = -1;
    }
    return hkt::QuaternionTriple::from_IJ(I, J);
}

}  // namespace

int main() {
    for (int n = 1; n <= 2; ++n) {
        hkt::MetricHodge mh(right_triple(n), hkt::Matrix::identity(4 * n));
        std::cout << "n = " << n << "\n";
        for (auto& c : mh.star_claims())
            std::cout << "  " << c.name << "\n    stated " << c.stated.to_string() << ", actual "
                      << (c.actual ? c.actual->to_string() : "none") << "\n";
    }
}
