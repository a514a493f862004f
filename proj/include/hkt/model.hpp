#pragma once
// model_backends: model specs, flat and Chevalley-Eilenberg form algebras, the
// Dolbeault family, HKT status and the Bismut torsion form.

#include "hkt/metric.hpp"

#include <json.hpp>

#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hkt {

enum class Backend { flat_polynomial, lie_algebra };

// [e_i, e_j] = sum_k c e_k, stored for i < j.
struct StructureConstant {
    int i, j, k;
    Scalar c;
};

struct SpecError : StructureError {
    using StructureError::StructureError;
};

namespace detail {

inline Scalar json_scalar(const nlohmann::json& v) {
    if (v.is_number_integer()) return Scalar(long(v.get<long long>()));
    if (v.is_string()) return Scalar::parse(v.get<std::string>());
    throw SpecError("spec: numbers must be integers or \"p/q\" strings");
}

inline nlohmann::json scalar_json(const Scalar& s) {
    if (s.is_real() && s.re().get_den() == 1 && s.re().get_num().fits_slong_p()) return s.re().get_num().get_si();
    return s.to_string();
}

inline Matrix json_matrix(const nlohmann::json& v, int N, const char* what) {
    if (!v.is_array() || int(v.size()) != N) throw SpecError(std::string("spec: ") + what + " must have " + std::to_string(N) + " rows");
    Matrix m(N, N);
    for (int r = 0; r < N; ++r) {
        if (!v[r].is_array() || int(v[r].size()) != N) throw SpecError(std::string("spec: ") + what + " row has wrong length");
        for (int c = 0; c < N; ++c) m(r, c) = json_scalar(v[r][c]);
    }
    return m;
}

inline nlohmann::json matrix_json(const Matrix& m) {
    auto out = nlohmann::json::array();
    for (int r = 0; r < m.rows(); ++r) {
        auto row = nlohmann::json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(scalar_json(m(r, c)));
        out.push_back(row);
    }
    return out;
}

}  // namespace detail

struct ModelSpec {
    std::string name;
    Backend backend = Backend::lie_algebra;
    int n = 1;
    std::vector<StructureConstant> structure_constants;
    Matrix I, J;
    std::optional<Matrix> metric;    // explicit Gram matrix
    bool killing_metric = false;     // "metric": "killing" (negative Killing form)
    int max_poly_degree = 3;

    int N() const { return 4 * n; }

    static ModelSpec from_json(const nlohmann::json& j) {
        ModelSpec s;
        try {
            s.name = j.value("name", std::string("model"));
            std::string b = j.at("backend").get<std::string>();
            if (b == "flat-polynomial") s.backend = Backend::flat_polynomial;
            else if (b == "lie-algebra") s.backend = Backend::lie_algebra;
            else throw SpecError("spec: unknown backend '" + b + "'");
            s.n = j.at("n").get<int>();
            if (s.n < 1 || s.n > 2) throw SpecError("spec: n must be 1 or 2");
            int N = s.N();
            if (j.contains("structure_constants")) {
                if (s.backend == Backend::flat_polynomial) throw SpecError("spec: structure constants need the lie-algebra backend");
                for (auto& e : j.at("structure_constants")) {
                    StructureConstant c{e.at("i").get<int>(), e.at("j").get<int>(), e.at("k").get<int>(), detail::json_scalar(e.at("c"))};
                    if (c.i < 0 || c.j < 0 || c.k < 0 || c.i >= N || c.j >= N || c.k >= N)
                        throw SpecError("spec: structure constant index out of range");
                    if (c.i >= c.j) throw SpecError("spec: structure constants need i < j");
                    s.structure_constants.push_back(c);
                }
            }
            const auto& fr = j.at("frame");
            s.I = detail::json_matrix(fr.at("I"), N, "frame.I");
            s.J = detail::json_matrix(fr.at("J"), N, "frame.J");
            if (j.contains("metric")) {
                const auto& m = j.at("metric");
                if (m.is_string()) {
                    auto k = m.get<std::string>();
                    if (k == "killing") s.killing_metric = true;
                    else if (k != "identity") throw SpecError("spec: unknown metric '" + k + "'");
                } else {
                    s.metric = detail::json_matrix(m, N, "metric");
                }
            }
            s.max_poly_degree = j.value("max_poly_degree", 3);
            if (s.max_poly_degree < 0 || s.max_poly_degree > 6) throw SpecError("spec: max_poly_degree must be in [0, 6]");
        } catch (const nlohmann::json::exception& e) {
            throw SpecError(std::string("spec: ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw SpecError(std::string("spec: ") + e.what());
        }
        return s;
    }

    static ModelSpec load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw SpecError("spec: cannot open " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw SpecError(std::string("spec: ") + e.what());
        }
        return from_json(j);
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["name"] = name;
        j["backend"] = backend == Backend::flat_polynomial ? "flat-polynomial" : "lie-algebra";
        j["n"] = n;
        if (backend == Backend::lie_algebra) {
            auto sc = nlohmann::json::array();
            for (auto& c : structure_constants) sc.push_back({{"i", c.i}, {"j", c.j}, {"k", c.k}, {"c", detail::scalar_json(c.c)}});
            j["structure_constants"] = sc;
        }
        j["frame"] = {{"I", detail::matrix_json(I)}, {"J", detail::matrix_json(J)}};
        if (metric) j["metric"] = detail::matrix_json(*metric);
        else if (killing_metric) j["metric"] = "killing";
        if (backend == Backend::flat_polynomial) j["max_poly_degree"] = max_poly_degree;
        return j;
    }

    // c[k][i][j] for all i, j (antisymmetric).
    std::vector<Matrix> structure_tensor() const {
        std::vector<Matrix> c(N(), Matrix(N(), N()));
        for (auto& s : structure_constants) {
            c[s.k](s.i, s.j) += s.c;
            c[s.k](s.j, s.i) -= s.c;
        }
        return c;
    }

    // Throws "jacobi: ..." on failure.
    void check_jacobi() const {
        auto c = structure_tensor();
        int N = this->N();
        for (auto& s : structure_constants)
            if (!s.c.is_real()) throw SpecError("spec: structure constants must be real");
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j)
                for (int k = j + 1; k < N; ++k)
                    for (int l = 0; l < N; ++l) {
                        Scalar t;
                        for (int m = 0; m < N; ++m)
                            t += c[m](i, j) * c[l](m, k) + c[m](j, k) * c[l](m, i) + c[m](k, i) * c[l](m, j);
                        if (!t.is_zero())
                            throw StructureError("jacobi: fails for (e" + std::to_string(i) + ", e" + std::to_string(j) +
                                                 ", e" + std::to_string(k) + ")");
                    }
    }

    // -tr(ad x ad y)
    Matrix negative_killing() const {
        auto c = structure_tensor();
        int N = this->N();
        Matrix g(N, N);
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                Scalar t;
                for (int k = 0; k < N; ++k)
                    for (int m = 0; m < N; ++m) t += c[m](a, k) * c[k](b, m);
                g(a, b) = -t;
            }
        return g;
    }
};

// How del_J compares with J delbar J on k-forms.
enum class SignFit { plus, minus, vacuous, none };

inline const char* to_string(SignFit s) {
    switch (s) {
        case SignFit::plus: return "+";
        case SignFit::minus: return "-";
        case SignFit::vacuous: return "0";
        case SignFit::none: return "none";
    }
    return "?";
}

struct DolbeaultFamily {
    GradedOperator del, delbar, dc, del_J, d_plus;
    std::map<int, SignFit> del_J_sign;
};

enum class HktStatus { hyperkahler, hkt, hermitian_only };

inline const char* to_string(HktStatus s) {
    switch (s) {
        case HktStatus::hyperkahler: return "hyperkahler";
        case HktStatus::hkt: return "hkt";
        case HktStatus::hermitian_only: return "hermitian-only";
    }
    return "?";
}

struct HktEvidence {
    HktStatus status = HktStatus::hermitian_only;
    Form d_Omega, del_Omega;
    bool weight_one = false;      // d omega_L has SU(2)-weight 1 for L = I, J, K
    bool d_plus_omega_I_zero = false;
    bool equivalence_holds() const { return (del_Omega.is_zero() == weight_one) && (weight_one == d_plus_omega_I_zero); }
};

struct TorsionReport {
    Form T_I, T_J, T_K;
    bool agree = false;
    Form structure_form;              // sum_{i<j<k} g([e_i,e_j], e_k) e^{ijk}; CE backend only
    std::optional<Scalar> scale;      // T_I = scale * structure_form
};

// Psi o d_plus versus del o Psi and del_J o Psi on Lambda^{p,q}_+.
struct PlusCorrespondence {
    int p = 0, q = 0;
    std::optional<Scalar> del_constant, del_J_constant;  // nullopt when not proportional
    bool del_vacuous = false, del_J_vacuous = false;      // both sides zero
};

class ManifoldModel {
public:
    static std::shared_ptr<const ManifoldModel> compile(const ModelSpec& spec) {
        return std::shared_ptr<const ManifoldModel>(new ManifoldModel(spec));
    }

    const ModelSpec& spec() const { return spec_; }
    const std::string& name() const { return spec_.name; }
    int n() const { return spec_.n; }
    int N() const { return spec_.N(); }
    bool is_flat() const { return spec_.backend == Backend::flat_polynomial; }
    // Coefficient variables: 4n coordinates on the flat backend, none on CE.
    int nvars() const { return is_flat() ? N() : 0; }
    int max_poly_degree() const { return is_flat() ? spec_.max_poly_degree : 0; }

    const MetricHodge& metric() const { return *metric_; }
    const QuaternionicFrame& frame() const { return metric_->frame(); }
    const FiberPtr& fiber() const { return metric_->fiber(); }
    const GradedOperator& d() const { return d_; }

    bool integrable(char L) const { return integrable_[L == 'I' ? 0 : L == 'J' ? 1 : 2]; }
    bool hypercomplex() const { return integrable_[0] && integrable_[1] && integrable_[2]; }

    const DolbeaultFamily& dolbeault() const {
        std::lock_guard<std::mutex> lock(mu_);
        if (!dolb_) dolb_ = std::make_unique<DolbeaultFamily>(make_dolbeault());
        return *dolb_;
    }

    HktEvidence hkt_status() const {
        HktEvidence ev;
        const auto& f = metric_->forms();
        ev.d_Omega = d_.apply(f.Omega);
        ev.del_Omega = dolbeault().del.apply(f.Omega);
        ev.weight_one = true;
        const auto& w = frame().weights();
        for (auto* om : {&f.omega_I, &f.omega_J, &f.omega_K}) {
            Form x = d_.apply(*om);
            if (x.is_zero()) continue;
            auto it = w.projectors.at(3).find(1);
            if (it == w.projectors.at(3).end() || !(it->second.apply(x) == x)) ev.weight_one = false;
        }
        ev.d_plus_omega_I_zero = dolbeault().d_plus.apply(f.omega_I).is_zero();
        if (ev.d_Omega.is_zero()) ev.status = HktStatus::hyperkahler;
        else if (ev.del_Omega.is_zero()) ev.status = HktStatus::hkt;
        return ev;
    }

    TorsionReport bismut_torsion() const {
        TorsionReport r;
        const auto& f = metric_->forms();
        r.T_I = frame().act_I().apply(d_.apply(f.omega_I));
        r.T_J = frame().act_J().apply(d_.apply(f.omega_J));
        r.T_K = frame().act_K().apply(d_.apply(f.omega_K));
        r.agree = r.T_I == r.T_J && r.T_J == r.T_K;
        if (!is_flat()) {
            auto c = spec_.structure_tensor();
            const Matrix& g = metric_->hermitian().gram;
            Form s(N());
            for (int i = 0; i < N(); ++i)
                for (int j = i + 1; j < N(); ++j)
                    for (int k = j + 1; k < N(); ++k) {
                        Scalar v;
                        for (int m = 0; m < N(); ++m) v += c[m](i, j) * g(m, k);
                        if (!v.is_zero()) s.add(Blade::from_indices({i, j, k}), Polynomial(v));
                    }
            r.structure_form = s;
            if (!s.is_zero()) r.scale = form_ratio(r.T_I, s);
        }
        return r;
    }

    // Expected constants: 1 for del and -i/2 for del_J (the (0,1) iso constant).
    std::vector<PlusCorrespondence> plus_dolbeault_correspondence() const {
        const auto& fr = frame();
        const auto& D = dolbeault();
        std::vector<PlusCorrespondence> out;
        for (int p = 0; p <= 2 * n(); ++p)
            for (int q = 0; p + q + 1 <= 2 * n(); ++q) {
                PlusCorrespondence c{p, q};
                auto in = fr.pi(p, q) * fr.plus_projector(p + q);
                auto Psi = fr.plus_bigrade_iso(p, q) * in;
                auto dp = D.d_plus * in;
                auto a = fr.plus_bigrade_iso(p + 1, q) * fr.pi(p + 1, q) * dp;
                auto b = D.del * Psi;
                auto a2 = fr.plus_bigrade_iso(p, q + 1) * fr.pi(p, q + 1) * dp;
                auto b2 = D.del_J * Psi;
                c.del_vacuous = a.is_zero() && b.is_zero();
                c.del_J_vacuous = a2.is_zero() && b2.is_zero();
                c.del_constant = proportionality(a, b);
                c.del_J_constant = proportionality(a2, b2);
                out.push_back(c);
            }
        return out;
    }
    static Scalar plus_del_J_constant() { return Scalar(mpq_class(0), mpq_class(-1, 2)); }

    // Nijenhuis check of an endomorphism against d.
    bool nijenhuis(const Matrix& L) const { return frame().nijenhuis_check(L, d_); }

    // Every operator is materialized on forms with polynomial coefficients of
    // degree <= max_poly_degree (a single point on the CE backend).
    SparseMatrix materialize(const GradedOperator& A) const {
        return is_flat() ? A.test_matrix(nvars(), max_poly_degree()) : A.algebraic_part();
    }

private:
    explicit ManifoldModel(const ModelSpec& spec) : spec_(spec) {
        auto triple = QuaternionTriple{spec.I, spec.J, spec.I * spec.J};
        triple.validate();
        if (!is_flat()) spec.check_jacobi();
        Matrix g = Matrix::identity(N());
        if (spec.metric) g = *spec.metric;
        else if (spec.killing_metric) g = spec.negative_killing();
        metric_ = std::make_unique<MetricHodge>(triple, g);
        d_ = make_d();
        if (!(d_ * d_).is_zero()) throw StructureError("differential: d^2 != 0");
        const auto& t = frame().triple();
        integrable_[0] = nijenhuis(t.I);
        integrable_[1] = nijenhuis(t.J);
        integrable_[2] = nijenhuis(t.K);
    }

    GradedOperator make_d() const {
        const auto& fib = fiber();
        if (is_flat()) {
            GradedOperator d = GradedOperator::zero(fib, Parity::odd);
            for (int i = 0; i < N(); ++i) d.add_term(Monomial::var(i), wedge_matrix(fib, Form::covector(N(), i)));
            return d;
        }
        // d e^k = -sum_{i<j} c^k_ij e^i ^ e^j
        std::vector<Form> img(N(), Form(N()));
        for (auto& c : spec_.structure_constants) img[c.k].add(Blade::from_indices({c.i, c.j}), Polynomial(-c.c));
        return derivation_extension(fib, img, Parity::odd);
    }

    DolbeaultFamily make_dolbeault() const {
        if (!integrable_[0] || !integrable_[1])
            throw StructureError("integrability: Dolbeault operators need integrable I and J");
        const auto& fr = frame();
        DolbeaultFamily f;
        // [ad_I, del] = i del and [ad_I, delbar] = -i delbar
        auto c = supercommutator(fr.ad_I(), d_);
        f.del = Scalar::rational(1, 2) * (d_ - Scalar::i() * c);
        f.delbar = Scalar::rational(1, 2) * (d_ + Scalar::i() * c);
        // I^{-1} d I; equals -I d I on even degrees
        f.dc = fr.act_I_inverse() * d_ * fr.act_I();
        f.del_J = fr.act_J() * f.delbar * fr.act_J_inverse();
        const auto& P = fr.plus_projector_all();
        f.d_plus = P * d_ * P;
        auto JdJ = fr.act_J() * f.delbar * fr.act_J();
        for (int k = 0; k <= N(); ++k) {
            auto Pk = degree_projector(fiber(), k);
            auto a = f.del_J * Pk, b = JdJ * Pk;
            f.del_J_sign[k] = a.is_zero() && b.is_zero() ? SignFit::vacuous
                              : a == b                   ? SignFit::plus
                              : a == Scalar(-1) * b      ? SignFit::minus
                                                         : SignFit::none;
        }
        return f;
    }

    ModelSpec spec_;
    std::unique_ptr<MetricHodge> metric_;
    GradedOperator d_;
    bool integrable_[3] = {false, false, false};
    mutable std::mutex mu_;
    mutable std::unique_ptr<DolbeaultFamily> dolb_;
};

using ModelPtr = std::shared_ptr<const ManifoldModel>;

}  // namespace hkt
