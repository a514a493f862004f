// Walks through the Hopf surface model: HKT status, torsion, the canonical
// class form theta and harmonic spinors.
//
//   hopf_tour [fixtures/hopf.json]

#include "hkt/spinor.hpp"

#include <iostream>

int main(int argc, char** argv) {
    using namespace hkt;
    std::string path = argc > 1 ? argv[1] : HKT_FIXTURE_DIR "/hopf.json";
    auto m = ManifoldModel::compile(ModelSpec::load(path));

    auto ev = m->hkt_status();
    std::cout << "status      " << to_string(ev.status) << "\n";
    std::cout << "d Omega     " << ev.d_Omega.to_string() << "\n";

    auto t = m->bismut_torsion();
    std::cout << "torsion     " << t.T_I.to_string() << (t.agree ? "  (I, J, K agree)" : "") << "\n";
    if (t.scale) std::cout << "scale       " << t.scale->to_string() << " x structure 3-form\n";

    auto th = extract_theta(*m);
    std::cout << "theta       " << th.theta.to_string() << "\n";
    std::cout << "theta_J     " << th.theta_J.to_string() << "\n";

    auto c = normalized_complex(*m, th);
    auto hs = harmonic_spinors(*m, c);
    std::cout << "h^i        ";
    for (int d : hs.dims) std::cout << " " << d;
    std::cout << "\n";
}
