#pragma once
// Check reports and the suites behind the hkt-lab command line.
//
// A report is a list of named checks plus a free-form data object. Output is
// deterministic: checks are sorted by id, JSON keys are sorted, and timings are
// left out unless asked for.

#include "hkt/superalgebra.hpp"

#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <random>

namespace hkt {

enum class CheckStatus { pass, fail, skipped };

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::skipped: return "skipped";
    }
    return "?";
}

struct CheckReport {
    std::string model;
    std::string id;
    CheckStatus status = CheckStatus::skipped;
    std::string residual;  // exact witness, failing checks only
    std::string note;
    double seconds = 0;
};

struct Report {
    std::string command;
    std::string model;
    std::optional<std::uint64_t> seed;
    std::vector<CheckReport> checks;
    nlohmann::json data = nlohmann::json::object();

    bool passed() const {
        for (auto& c : checks)
            if (c.status == CheckStatus::fail) return false;
        return true;
    }

    const CheckReport* find(const std::string& id) const {
        for (auto& c : checks)
            if (c.id == id) return &c;
        return nullptr;
    }

    void sort() {
        std::stable_sort(checks.begin(), checks.end(), [](auto& a, auto& b) { return a.id < b.id; });
    }

    // Records a check; a pass never keeps a residual.
    void add(const std::string& id, bool ok, const std::string& residual = {}, const std::string& note = {}) {
        CheckReport c{model, id, ok ? CheckStatus::pass : CheckStatus::fail, ok ? "" : residual, note, 0};
        if (!ok && c.residual.empty()) c.residual = "nonzero";
        checks.push_back(std::move(c));
    }

    void skip(const std::string& id, const std::string& note) {
        checks.push_back(CheckReport{model, id, CheckStatus::skipped, "", note, 0});
    }

    void stamp(double s) {
        for (auto& c : checks) c.seconds = s;
    }

    nlohmann::json to_json(bool timings = false) const {
        nlohmann::json j;
        j["command"] = command;
        j["model"] = model;
        if (seed) j["seed"] = *seed;
        j["passed"] = passed();
        j["checks"] = nlohmann::json::array();
        for (auto& c : checks) {
            nlohmann::json e{{"id", c.id}, {"model", c.model}, {"status", hkt::to_string(c.status)}};
            if (!c.residual.empty()) e["residual"] = c.residual;
            if (!c.note.empty()) e["note"] = c.note;
            if (timings) e["seconds"] = c.seconds;
            j["checks"].push_back(std::move(e));
        }
        j["data"] = data;
        return j;
    }

    std::string to_markdown(bool timings = false) const {
        std::ostringstream os;
        os << "## " << command << ": " << model << "\n\n";
        if (seed) os << "seed: " << *seed << "\n\n";
        os << "| check | status | residual |" << (timings ? " seconds |" : "") << "\n";
        os << "|---|---|---|" << (timings ? "---|" : "") << "\n";
        for (auto& c : checks) {
            os << "| " << c.id << " | " << hkt::to_string(c.status) << " | " << (c.residual.empty() ? c.note : c.residual)
               << " |";
            if (timings) os << " " << c.seconds << " |";
            os << "\n";
        }
        int fails = 0;
        for (auto& c : checks) fails += c.status == CheckStatus::fail;
        os << "\n" << checks.size() << " checks, " << fails << " failed\n";
        if (!data.empty()) os << "\n```json\n" << data.dump(2) << "\n```\n";
        return os.str();
    }
};

namespace detail {

inline nlohmann::json scalars_json(const std::vector<Scalar>& v) {
    auto j = nlohmann::json::array();
    for (auto& s : v) j.push_back(s.to_string());
    return j;
}

inline nlohmann::json dense_json(const Matrix& m) {
    auto j = nlohmann::json::array();
    for (int r = 0; r < m.rows(); ++r) {
        auto row = nlohmann::json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c).to_string());
        j.push_back(std::move(row));
    }
    return j;
}

inline std::string form_witness(const Form& f) { return f.is_zero() ? "0" : f.to_string(); }

inline void add_relations(Report& r, const std::string& prefix, const std::vector<RelationCheck>& rel) {
    for (auto& c : rel) r.add(prefix + c.relation, c.holds, c.residual);
}

}  // namespace detail

// Random forms for property checks: small Gaussian-rational coefficients, and
// polynomial coefficients on the flat backend.
inline Form random_form(const ManifoldModel& m, int k, std::mt19937_64& rng) {
    int N = m.N();
    std::uniform_int_distribution<int> coef(-3, 3);
    auto monos = monomials_up_to(m.nvars(), m.nvars() ? std::max(0, m.max_poly_degree() - 1) : 0);
    std::uniform_int_distribution<std::size_t> pick(0, monos.size() - 1);
    Form f(N);
    for (std::uint32_t b = 0; b < (std::uint32_t{1} << N); ++b) {
        if (std::popcount(b) != k) continue;
        Scalar c(mpq_class(coef(rng)), mpq_class(coef(rng)));
        if (!c.is_zero()) f.add(Blade{b}, monos[pick(rng)], c);
    }
    return f;
}

// Structural validation, in dependency order; later steps are skipped after a
// failure.
inline Report validate_spec(const ModelSpec& spec) {
    Report r;
    r.command = "validate";
    r.model = spec.name;
    std::optional<QuaternionTriple> triple;
    std::vector<std::pair<std::string, std::function<void()>>> steps = {
        {"quaternion-relations", [&] { triple = QuaternionTriple::from_IJ(spec.I, spec.J); }},
        {"jacobi", [&] { spec.check_jacobi(); }},
        {"metric",
         [&] {
             Matrix g = spec.metric ? *spec.metric : spec.killing_metric ? spec.negative_killing() : Matrix::identity(spec.N());
             HermitianData::make(g, *triple);
         }},
        {"model",
         [&] {
             auto m = ManifoldModel::compile(spec);
             r.add("integrability.I", m->integrable('I'));
             r.add("integrability.J", m->integrable('J'));
             r.add("integrability.K", m->integrable('K'));
         }},
    };
    bool blocked = false;
    for (auto& [id, step] : steps) {
        if (blocked) {
            r.skip(id == "model" ? "d-squared" : id, "blocked by an earlier failure");
            continue;
        }
        if (id == "jacobi" && spec.backend == Backend::flat_polynomial) {
            r.skip(id, "flat backend");
            continue;
        }
        try {
            step();
            // "model" covers d^2 = 0; metric failures surface here with their named prefix
            r.add(id == "model" ? "d-squared" : id, true);
        } catch (const StructureError& e) {
            // metric failures are named by their prefix, e.g. metric-invariance
            std::string what = e.what(), named = id == "model" ? "d-squared" : id;
            if (id == "metric") named = what.substr(0, what.find(':'));
            r.add(named, false, what);
            blocked = true;
        }
    }
    r.sort();
    return r;
}

struct SuiteOptions {
    std::uint64_t seed = 0;
    int random_forms = 100;
};

// hkt: the equivalence of the three HKT conditions, plus seeded identities.
inline Report suite_hkt(const ManifoldModel& m, const SuiteOptions& o) {
    Report r;
    r.command = "check hkt";
    r.model = m.name();
    r.seed = o.seed;
    auto ev = m.hkt_status();
    r.data["status"] = to_string(ev.status);
    r.data["d_Omega"] = detail::form_witness(ev.d_Omega);
    r.data["del_Omega"] = detail::form_witness(ev.del_Omega);
    r.data["weight_one"] = ev.weight_one;
    r.data["d_plus_omega_I_zero"] = ev.d_plus_omega_I_zero;
    r.add("hkt.equivalence", ev.equivalence_holds(),
          std::string("del Omega = 0: ") + (ev.del_Omega.is_zero() ? "yes" : "no") +
              ", weight one: " + (ev.weight_one ? "yes" : "no") +
              ", d+ omega_I = 0: " + (ev.d_plus_omega_I_zero ? "yes" : "no"));

    std::mt19937_64 rng(o.seed);
    const auto& D = m.dolbeault();
    std::string d2, anti;
    for (int t = 0; t < o.random_forms; ++t) {
        std::uniform_int_distribution<int> deg(0, m.N());
        Form f = random_form(m, deg(rng), rng);
        Form a = m.d().apply(m.d().apply(f));
        if (d2.empty() && !a.is_zero()) d2 = a.to_string();
        Form b = D.del.apply(D.del_J.apply(f)) + D.del_J.apply(D.del.apply(f));
        if (anti.empty() && !b.is_zero()) anti = b.to_string();
    }
    r.add("identity.d_squared", d2.empty(), d2);
    r.add("identity.del_del_J_anticommute", anti.empty(), anti);

    auto corr = m.plus_dolbeault_correspondence();
    bool corr_ok = true;
    std::string bad;
    for (auto& c : corr) {
        bool a = c.del_vacuous || c.del_constant == Scalar(1);
        bool b = c.del_J_vacuous || c.del_J_constant == ManifoldModel::plus_del_J_constant();
        if (!(a && b) && bad.empty()) bad = "bigrade (" + std::to_string(c.p) + "," + std::to_string(c.q) + ")";
        corr_ok = corr_ok && a && b;
    }
    r.add("plus.dolbeault_correspondence", corr_ok, bad);
    r.sort();
    return r;
}

// Kodaira relations on the normalized complex (HKT models) or on the plain
// Dolbeault realization (otherwise), closures and odd-pairing signatures.
inline Report suite_superalgebra(const ManifoldModel& m) {
    Report r;
    r.command = "check superalgebra";
    r.model = m.name();
    auto ev = m.hkt_status();
    bool hkt = ev.status != HktStatus::hermitian_only;
    OperatorRealization real;
    std::optional<NormalizedComplex> nc;
    if (hkt) {
        nc = normalized_complex(m, extract_theta(m));
        real = normalized_realization(*nc);
    } else {
        real = dolbeault_realization(m, m.dolbeault().del, m.dolbeault().del_J);
    }
    r.data["realization"] = real.space;
    auto rep = match_kdr(real);
    detail::add_relations(r, "kdr.", rep.relations);
    r.add("kdr.closure_jacobi", rep.closure_jacobi);
    r.add("kdr.matches_reference", rep.matches_reference);
    r.data["kdr_closure_dimension"] = rep.closure_dimension;

    if (nc && nc->laplacian.is_zero()) {
        r.skip("pairing.dolbeault_proportional", "Laplacian is zero");
    } else if (nc) {
        try {
            auto pr = odd_pairing_signature({nc->del, nc->del_J, nc->del_star, nc->del_J_star},
                                            {"ndel", "ndel_J", "ndel*", "ndel_J*"}, nc->laplacian);
            r.data["dolbeault_odd_signature"] = {pr.signature.positive, pr.signature.negative, pr.signature.zero};
            r.add("pairing.dolbeault_proportional", true);
        } catch (const ProportionalityError& e) {
            r.add("pairing.dolbeault_proportional", false, e.what());
        }
    }

    // the hyperkahler-de Rham family is only expected to close on hyperkahler models
    if (ev.status != HktStatus::hyperkahler) {
        r.skip("hk_de_rham.closure", std::string("model is ") + to_string(ev.status));
    } else {
        auto fam = hk_de_rham_family(m);
        auto cl = close_and_extract(fam.ops, fam.names);
        r.add("hk_de_rham.closure", cl.closed, cl.offending);
        if (cl.closed) {
            r.data["hk_de_rham_dimension"] = cl.dimension;
            auto v = cl.presentation.jacobi_violation();
            r.add("hk_de_rham.jacobi", !v, v.value_or(""));
        }
        auto odd = hk_odd_span(m);
        auto Delta = supercommutator(odd.at("d"), odd.at("d*"));
        if (Delta.is_zero()) {
            r.skip("pairing.hk_proportional", "d is zero on invariant forms");
        } else {
            try {
                auto pr = odd_pairing_signature(odd.ops, odd.names, Delta);
                r.data["hk_odd_signature"] = {pr.signature.positive, pr.signature.negative, pr.signature.zero};
                r.add("pairing.hk_proportional", true);
            } catch (const ProportionalityError& e) {
                r.add("pairing.hk_proportional", false, e.what());
            }
        }
    }
    r.sort();
    return r;
}

// Hodge star identities, the inner-multiplication identity and so(1,4).
inline Report suite_star(const ManifoldModel& m) {
    Report r;
    r.command = "check star";
    r.model = m.name();
    const auto& mh = m.metric();
    for (auto& c : mh.star_claims()) {
        r.add("star." + c.name, c.holds(),
              "stated " + c.stated.to_string() + ", actual " + (c.actual ? c.actual->to_string() : "not proportional"));
        r.data["star_coefficients"][c.name] = {{"stated", c.stated.to_string()},
                                               {"actual", c.actual ? c.actual->to_string() : "none"}};
    }
    const auto& z = m.frame().type10();
    for (std::size_t a = 0; a < z.size(); ++a)
        r.add("inner_mult.z" + std::to_string(a), mh.inner_mult_identity(z[a]),
              residual_witness(mh.inner_mult_commutator(z[a])));
    auto cl = mh.so14_closure();
    r.add("so14.closure", cl.closed && cl.dimension == 10, cl.closed ? "dimension " + std::to_string(cl.dimension) : cl.offending);
    if (cl.closed) {
        auto K = cl.presentation.killing_form();
        auto s = signature(K), ref = signature(so14_reference().killing_form());
        r.add("so14.killing_rank", rank(K) == 10, "rank " + std::to_string(rank(K)));
        r.add("so14.killing_signature", s == ref,
              "(" + std::to_string(s.positive) + "," + std::to_string(s.negative) + ")");
        r.data["so14_killing_signature"] = {s.positive, s.negative, s.zero};
    }
    r.sort();
    return r;
}

inline Report suite_torsion(const ManifoldModel& m) {
    Report r;
    r.command = "check torsion";
    r.model = m.name();
    auto t = m.bismut_torsion();
    r.data["T_I"] = detail::form_witness(t.T_I);
    r.data["T_J"] = detail::form_witness(t.T_J);
    r.data["T_K"] = detail::form_witness(t.T_K);
    if (!m.is_flat()) r.data["structure_form"] = detail::form_witness(t.structure_form);
    r.data["scale"] = t.scale ? t.scale->to_string() : "none";
    auto hkt = m.hkt_status().status != HktStatus::hermitian_only;
    // only HKT models are required to agree
    if (hkt)
        r.add("torsion.agree", t.agree, "T_I = " + t.T_I.to_string() + ", T_J = " + t.T_J.to_string());
    else
        r.skip("torsion.agree", t.agree ? "agree (not required)" : "differ (not required: non-HKT)");
    r.sort();
    return r;
}

inline Report suite_order(const ManifoldModel& m) {
    Report r;
    r.command = "check order";
    r.model = m.name();
    const auto& hol = m.frame().holomorphic_fiber();
    OrderOracle oo(m, hol);
    auto del_star = m.dolbeault().del.restrict_to(hol).adjoint();
    auto show = [](std::optional<int> k) { return k ? std::to_string(*k) : std::string("> 3"); };
    auto o1 = oo.order(del_star, 3);
    r.add("order.del_star_le_2", o1 && *o1 <= 2, "order " + show(o1));
    r.data["order"]["del_star"] = show(o1);
    int worst = 0;
    for (std::size_t a = 0; a < m.frame().type10().size(); ++a) {
        auto z = wedge_operator(m.fiber(), m.frame().type10()[a]).restrict_to(hol);
        auto o = oo.order(supercommutator(z, del_star), 3);
        worst = std::max(worst, o ? *o : 4);
    }
    r.add("order.bracket_le_1", worst <= 1, "order " + show(worst > 3 ? std::nullopt : std::optional<int>(worst)));
    r.data["order"]["bracket"] = worst;
    std::optional<ThetaData> theta;
    try {
        theta = extract_theta(m);
    } catch (const StructureError& e) {
        r.add("delta_j.theta", false, e.what());
        r.sort();
        return r;
    }
    const auto& th = *theta;
    auto dj = delta_j_theorem(m, th);
    auto o3 = oo.order(dj.delta_star_J, 3);
    r.data["order"]["delta_star_J"] = show(o3);
    r.data["theta_J"] = detail::form_witness(th.theta_J);
    r.add("delta_j.h_order_zero", dj.h_order_zero, residual_witness(dj.h));
    r.add("delta_j.h_is_theta_J", dj.h_equals_theta_J, dj.residual);
    r.sort();
    return r;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"hkt", "superalgebra", "star", "torsion", "order"};
    return names;
}

// Checks carry the wall time of the whole suite.
inline Report run_suite(const ManifoldModel& m, const std::string& suite, const SuiteOptions& o) {
    auto t0 = std::chrono::steady_clock::now();
    Report r;
    if (suite == "hkt") r = suite_hkt(m, o);
    else if (suite == "superalgebra") r = suite_superalgebra(m);
    else if (suite == "star") r = suite_star(m);
    else if (suite == "torsion") r = suite_torsion(m);
    else if (suite == "order") r = suite_order(m);
    else throw std::invalid_argument("unknown suite '" + suite + "'");
    r.stamp(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return r;
}

struct SpinorResult {
    std::vector<int> dims;
    LefschetzReport lefschetz;
};

inline SpinorResult spinor_dimensions(const ManifoldModel& m) {
    auto th = extract_theta(m);
    auto c = normalized_complex(m, th);
    auto hs = harmonic_spinors(m, c);
    return {hs.dims, lefschetz_action(m, c, hs)};
}

// Seeded rational rotation of (I, J, K); the metric is unchanged.
inline ModelSpec rotated_spec(const ModelSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> u(-3, 3);
    long a = 0, b = 0, c = 0, d = 0;
    // skip the identity and its sign flip so the frame actually moves
    while (b == 0 && c == 0 && d == 0) a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    auto t = QuaternionTriple::from_IJ(spec.I, spec.J).rotated(rotation_from_quaternion(a, b, c, d));
    ModelSpec s = spec;
    s.I = t.I;
    s.J = t.J;
    return s;
}

// Harmonic spinors on an HKT model; non-HKT models are refused with evidence.
inline Report spinor_report(const ManifoldModel& m, std::uint64_t seed) {
    Report r;
    r.command = "spinors";
    r.model = m.name();
    r.seed = seed;
    auto ev = m.hkt_status();
    r.data["hkt_status"] = to_string(ev.status);
    if (ev.status == HktStatus::hermitian_only) {
        r.add("spinors.hkt_required", false, "del Omega = " + ev.del_Omega.to_string());
        return r;
    }
    auto th = extract_theta(m);
    auto c = normalized_complex(m, th);
    r.data["theta"] = detail::form_witness(th.theta);
    r.data["theta_J"] = detail::form_witness(th.theta_J);
    r.add("theta.del_closed", th.del_closed);
    r.add("theta.mixed_closed", th.mixed_closed);
    auto inv = check_invariants(m, c);
    r.add("complex.del_squared", inv.del_squared);
    r.add("complex.del_J_squared", inv.del_J_squared);
    r.add("complex.anticommute", inv.anticommute);
    r.add("complex.laplacian_self_adjoint", inv.laplacian_self_adjoint);
    if (inv.laplacian_psd)
        r.add("complex.laplacian_psd", *inv.laplacian_psd);
    else
        r.skip("complex.laplacian_psd", "polynomial truncation");

    if (m.is_flat()) {
        // kernels of a truncated polynomial Laplacian are truncation artifacts
        r.skip("harmonic", "flat backend: no compact harmonic theory");
        r.sort();
        return r;
    }
    auto hs = harmonic_spinors(m, c);
    r.data["h"] = hs.dims;
    r.data["rank_nullity"] = hs.rank_nullity_dims;
    r.add("harmonic.rank_nullity", hs.dims == hs.rank_nullity_dims);
    auto lr = lefschetz_action(m, c, hs);
    r.add("lefschetz.commutes_L", lr.L_commutes);
    r.add("lefschetz.commutes_Lambda", lr.Lambda_commutes);
    r.add("lefschetz.commutes_H", lr.H_commutes);
    r.add("lefschetz.commutes_J_c", lr.J_c_commutes);
    for (auto& [i, ok] : lr.lefschetz_iso) {
        r.add("lefschetz.iso_" + std::to_string(i), ok, "rank " + std::to_string(lr.lefschetz_rank.at(i)));
        r.data["lefschetz_rank"][std::to_string(i)] = lr.lefschetz_rank.at(i);
    }
    for (auto& [i, P] : lr.pairing) {
        int dim = hs.dims[std::size_t(i)];
        r.add("pairing.nondegenerate_" + std::to_string(i), lr.pairing_rank.at(i) == dim,
              "rank " + std::to_string(lr.pairing_rank.at(i)) + " of " + std::to_string(dim));
        r.data["pairing"][std::to_string(i)] = detail::dense_json(P);
    }
    nlohmann::json basis;
    for (auto& [p, b] : hs.basis) {
        auto arr = nlohmann::json::array();
        for (auto& f : b) arr.push_back(f.to_string());
        basis[std::to_string(p)] = arr;
    }
    r.data["harmonic_basis"] = basis;

    auto rot = ManifoldModel::compile(rotated_spec(m.spec(), seed));
    auto rd = spinor_dimensions(*rot).dims;
    r.data["h_rotated"] = rd;
    r.add("harmonic.basis_independent", rd == hs.dims);
    r.sort();
    return r;
}

}  // namespace hkt
