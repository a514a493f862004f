// hkt-lab: validate model specs and run exact check suites on them.
//
//   hkt-lab validate fixtures/hopf.json
//   hkt-lab check fixtures/hopf.json superalgebra --format md
//   hkt-lab spinors fixtures/torus4.json --out torus4.json
//
// Exit codes: 0 every check passed, 1 some check failed, 2 usage or parse error.

#include "hkt/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <variant>

using namespace hkt;

namespace {

struct Options {
    std::string path;
    std::string suite;
    std::string format = "json";
    std::uint64_t seed = 0;
    std::optional<int> max_poly_degree;
    std::string out;
    bool timings = false;
};

int emit(const Report& r, const Options& o) {
    std::string text = o.format == "md" ? r.to_markdown(o.timings) : r.to_json(o.timings).dump(2) + "\n";
    if (o.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(o.out);
        if (!f) {
            std::cerr << "hkt-lab: cannot write " << o.out << "\n";
            return 2;
        }
        f << text;
    }
    return r.passed() ? 0 : 1;
}

// Loads the spec; a model that fails validation is reported as such.
std::variant<ModelPtr, Report> open_model(const Options& o, const std::string& command) {
    auto spec = ModelSpec::load(o.path);
    if (o.max_poly_degree) spec.max_poly_degree = *o.max_poly_degree;
    try {
        return ManifoldModel::compile(spec);
    } catch (const StructureError&) {
        Report r = validate_spec(spec);
        r.command = command;
        return r;
    }
}

int run(const std::string& command, const Options& o) {
    if (command == "validate") {
        auto spec = ModelSpec::load(o.path);
        if (o.max_poly_degree) spec.max_poly_degree = *o.max_poly_degree;
        return emit(validate_spec(spec), o);
    }
    auto opened = open_model(o, command == "check" ? "check " + o.suite : command);
    if (auto* r = std::get_if<Report>(&opened)) return emit(*r, o);
    const auto& m = *std::get<ModelPtr>(opened);
    if (command == "check") return emit(run_suite(m, o.suite, SuiteOptions{o.seed}), o);
    auto t0 = std::chrono::steady_clock::now();
    Report r = spinor_report(m, o.seed);
    r.stamp(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return emit(r, o);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact checks for hypercomplex and HKT models"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("spec", o.path, "model spec (JSON)")->required();
        sub->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json", "md"}));
        sub->add_option("--seed", o.seed, "seed for randomized checks");
        sub->add_option("--max-poly-degree", o.max_poly_degree, "polynomial truncation on the flat backend")
            ->check(CLI::Range(0, 6));
        sub->add_option("--out", o.out, "write the report here instead of stdout");
        sub->add_flag("--timings", o.timings, "include wall times (output is no longer reproducible)");
    };
    auto* validate = app.add_subcommand("validate", "structural checks on a model spec");
    common(validate);
    auto* check = app.add_subcommand("check", "run one check suite");
    common(check);
    check->add_option("suite", o.suite, "hkt|superalgebra|star|torsion|order")
        ->required()
        ->check(CLI::IsMember(suite_names()));
    auto* spinors = app.add_subcommand("spinors", "harmonic spinors and Lefschetz data (HKT models)");
    common(spinors);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return run(app.get_subcommands().front()->get_name(), o);
    } catch (const SpecError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "hkt-lab: " << e.what() << "\n";
        return 2;
    }
}
