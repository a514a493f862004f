// Searches signed-permutation frames (I, J) on a 4-dimensional Lie algebra
// for hypercomplex structures compatible with the identity metric.
//
//   frame_search fixtures/hopf.json            summary plus the first integrable frame
//   frame_search fixtures/hopf.json --all      every candidate with its flags

#include "hkt/model.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace hkt;

namespace {

std::vector<Matrix> signed_permutations() {
    std::vector<Matrix> out;
    std::array<int, 4> perm{0, 1, 2, 3};
    do {
        for (int signs = 0; signs < 16; ++signs) {
            Matrix m(4, 4);
            for (int c = 0; c < 4; ++c) m(perm[c], c) = (signs >> c) & 1 ? -1 : 1;
            out.push_back(m);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"signed-permutation frame search"};
    std::string path;
    bool all = false;
    app.add_option("spec", path, "lie-algebra model spec with n = 1")->required();
    app.add_flag("--all", all, "print every candidate");
    CLI11_PARSE(app, argc, argv);

    ModelSpec spec;
    try {
        spec = ModelSpec::load(path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    if (spec.n != 1 || spec.backend != Backend::lie_algebra) {
        std::cerr << "frame_search: needs a lie-algebra spec with n = 1\n";
        return 2;
    }

    Matrix minus = Matrix::identity(4) * Scalar(-1);
    std::vector<Matrix> cx;
    for (auto& m : signed_permutations())
        if (m * m == minus) cx.push_back(m);

    int candidates = 0, integrable = 0;
    std::optional<ModelSpec> first;
    for (auto& I : cx)
        for (auto& J : cx) {
            if (!(I * J == (J * I) * Scalar(-1))) continue;
            ++candidates;
            ModelSpec s = spec;
            s.I = I;
            s.J = J;
            s.metric = Matrix::identity(4);
            auto m = ManifoldModel::compile(s);
            bool ok = m->hypercomplex();
            integrable += ok;
            if (ok && !first) first = s;
            if (all) std::cout << (ok ? "integrable " : "non-integrable ") << s.to_json()["frame"].dump() << "\n";
        }
    std::cout << "candidates " << candidates << " integrable " << integrable << "\n";
    if (first) std::cout << "first " << first->to_json()["frame"].dump() << "\n";
    return first ? 0 : 1;
}
