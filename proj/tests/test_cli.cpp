#include <json.hpp>

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <memory>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run hkt_lab(const std::string& args) {
    std::string cmd = std::string(HKT_LAB) + " " + args + " 2>/dev/null";
    Run r;
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe.get())) > 0) r.out.append(buf.data(), n);
    int status = pclose(pipe.release());
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string fx(const std::string& name) { return std::string(HKT_FIXTURE_DIR) + "/" + name + ".json"; }

std::string status_of(const nlohmann::json& report, const std::string& id) {
    for (auto& c : report["checks"])
        if (c["id"] == id) return c["status"];
    return "missing";
}

}  // namespace

TEST(Cli, ValidateFixtures) {
    for (auto name : {"torus4", "hopf", "flat-h1"}) EXPECT_EQ(hkt_lab("validate " + fx(name)).code, 0) << name;
}

TEST(Cli, ValidateNamesTheFailure) {
    auto r = hkt_lab("validate " + fx("bad-metric"));
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(status_of(nlohmann::json::parse(r.out), "metric-invariance"), "fail");
    EXPECT_EQ(status_of(nlohmann::json::parse(hkt_lab("validate " + fx("bad-jacobi")).out), "jacobi"), "fail");
    EXPECT_EQ(status_of(nlohmann::json::parse(hkt_lab("validate " + fx("bad-frame")).out), "quaternion-relations"), "fail");
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(hkt_lab("").code, 2);
    EXPECT_EQ(hkt_lab("check " + fx("hopf") + " nonsense").code, 2);
    EXPECT_EQ(hkt_lab("validate " + fx("does-not-exist")).code, 2);
    EXPECT_EQ(hkt_lab("validate " + fx("hopf") + " --format xml").code, 2);
    EXPECT_EQ(hkt_lab("validate " + fx("hopf") + " --max-poly-degree 9").code, 2);
}

TEST(Cli, HktSuite) {
    auto hopf = nlohmann::json::parse(hkt_lab("check " + fx("hopf") + " hkt").out);
    EXPECT_EQ(hopf["data"]["status"], "hkt");
    EXPECT_NE(hopf["data"]["d_Omega"], "0");
    EXPECT_EQ(hopf["data"]["del_Omega"], "0");
    auto torus = nlohmann::json::parse(hkt_lab("check " + fx("torus4") + " hkt").out);
    EXPECT_EQ(torus["data"]["status"], "hyperkahler");
    EXPECT_TRUE(torus["passed"].get<bool>());
}

TEST(Cli, SuperalgebraOnHopf) {
    auto r = hkt_lab("check " + fx("hopf") + " superalgebra");
    EXPECT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["data"]["kdr_closure_dimension"], 8);
    for (auto& c : j["checks"])
        if (c["id"].get<std::string>().rfind("kdr.", 0) == 0) EXPECT_EQ(c["status"], "pass") << c["id"];
}

TEST(Cli, ChecksAreSortedAndPassesCarryNoResidual) {
    auto j = nlohmann::json::parse(hkt_lab("check " + fx("flat-h2") + " star").out);
    std::string prev;
    for (auto& c : j["checks"]) {
        std::string id = c["id"];
        EXPECT_LE(prev, id);
        prev = id;
        if (c["status"] == "pass") EXPECT_FALSE(c.contains("residual")) << id;
        if (c["status"] == "fail") EXPECT_TRUE(c.contains("residual")) << id;
    }
}

TEST(Cli, SpinorsOnTorusAndHopf) {
    auto t = nlohmann::json::parse(hkt_lab("spinors " + fx("torus4")).out);
    EXPECT_EQ(t["data"]["h"], nlohmann::json({1, 2, 1}));
    EXPECT_EQ(t["data"]["lefschetz_rank"]["0"], 1);
    auto h = nlohmann::json::parse(hkt_lab("spinors " + fx("hopf")).out);
    EXPECT_EQ(h["data"]["h"], nlohmann::json({0, 0, 0}));
    EXPECT_TRUE(h["passed"].get<bool>());
}

TEST(Cli, SpinorsRefusesNonHkt) {
    auto r = hkt_lab("spinors " + fx("hopf-torus8-mixed"));
    EXPECT_EQ(r.code, 1);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["data"]["hkt_status"], "hermitian-only");
    EXPECT_EQ(status_of(j, "spinors.hkt_required"), "fail");
}

TEST(Cli, ByteIdenticalReruns) {
    for (auto args : {"check " + fx("hopf") + " order --format md", "spinors " + fx("torus4") + " --seed 5",
                      "check " + fx("flat-h1") + " hkt --seed 3"}) {
        auto a = hkt_lab(args), b = hkt_lab(args);
        EXPECT_EQ(a.out, b.out) << args;
        EXPECT_EQ(a.code, b.code) << args;
    }
}

TEST(Cli, OutFileMatchesStdout) {
    std::string path = ::testing::TempDir() + "hkt_lab_out.json";
    auto a = hkt_lab("check " + fx("hopf") + " torsion --out " + path);
    EXPECT_EQ(a.code, 0);
    EXPECT_TRUE(a.out.empty());
    std::unique_ptr<FILE, int (*)(FILE*)> f(fopen(path.c_str(), "r"), fclose);
    ASSERT_TRUE(f);
    std::string text;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), f.get())) > 0) text.append(buf.data(), n);
    EXPECT_EQ(text, hkt_lab("check " + fx("hopf") + " torsion").out);
}
