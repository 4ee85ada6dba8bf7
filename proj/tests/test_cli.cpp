#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#ifndef SPINFORM_BIN
#error "SPINFORM_BIN must point at the CLI binary"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(SPINFORM_BIN) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

fs::path sandbox() {
    const fs::path p = fs::temp_directory_path() / "spinform_cli_test";
    fs::create_directories(p);
    return p;
}

fs::path write_config(const json& j, const std::string& name) {
    const fs::path p = sandbox() / name;
    std::ofstream out(p);
    out << j.dump(2);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json small_config(int resolution = 16) {
    return json{{"data", {{"family", "constant"}, {"theta", 0.0}}},
                {"grid", {{"type", "disk"}, {"radius", 0.5}, {"resolution", resolution}}},
                {"init", {{"z0", {0.0, 0.0}}, {"theta0", {0.0, 0.0}}, {"h0", 0.0}}}};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("exit code contract") {
    // missing subcommand / bad flags -> parse error
    CHECK(run("") == 2);
    CHECK(run("generate") == 2);
    CHECK(run("generate --config /nonexistent.json") == 2);

    const fs::path bad = sandbox() / "bad.json";
    std::ofstream(bad) << "{ not json";
    CHECK(run("validate --config " + bad.string()) == 2);

    // malformed phase
    const fs::path cfg = write_config(small_config(), "ok.json");
    CHECK(run("generate --config " + cfg.string() + " --phase 3 --out " +
              (sandbox() / "o").string()) == 2);
}

TEST_CASE("validate passes for the built-in families") {
    const fs::path cfg = write_config(small_config(), "validate.json");
    CHECK(run("validate --config " + cfg.string() + " --out " + (sandbox() / "v").string()) == 0);

    json rot = small_config();
    rot["data"]["family"] = "rotational";
    const fs::path cfg2 = write_config(rot, "validate_rot.json");
    CHECK(run("validate --config " + cfg2.string() + " --out " + (sandbox() / "v2").string()) == 0);
}

TEST_CASE("validate rejects a tabulated tau0 sign error") {
    // build a tabulated data file with a negative tau0 entry
    json data;
    data["family"] = "tabulated";
    data["grid"] = {{"x0", -0.5}, {"y0", -0.5}, {"hx", 0.125}, {"hy", 0.125}, {"nx", 9}, {"ny", 9}};
    std::vector<double> q0(81, 1.0), zero(81, 0.0), tau(81, 4.0);
    tau[40] = -1.0;
    data["tables"] = {{"Q0_re", q0}, {"Q0_im", zero}, {"tau0", tau}};
    const fs::path dfile = sandbox() / "bad_tau.json";
    std::ofstream(dfile) << data.dump();

    json cfg = small_config();
    cfg["data"] = {{"family", "tabulated"}, {"file", dfile.string()}};
    const fs::path cfile = write_config(cfg, "badtau_cfg.json");
    CHECK(run("validate --config " + cfile.string() + " --out " + (sandbox() / "vb").string()) == 2);
}

TEST_CASE("strict validate fails on incompatible data") {
    json data;
    data["family"] = "tabulated";
    data["grid"] = {{"x0", -0.5}, {"y0", -0.5}, {"hx", 1.0 / 16}, {"hy", 1.0 / 16},
                    {"nx", 17}, {"ny", 17}};
    std::vector<double> q0(289, 2.0), zero(289, 0.0), tau(289, 4.0);
    data["tables"] = {{"Q0_re", q0}, {"Q0_im", zero}, {"tau0", tau}};
    const fs::path dfile = sandbox() / "incompatible.json";
    std::ofstream(dfile) << data.dump();

    json cfg = small_config(16);
    cfg["data"] = {{"family", "tabulated"}, {"file", dfile.string()}};
    cfg["grid"] = {{"type", "rect"}, {"x0", -0.4}, {"y0", -0.4}, {"width", 0.8},
                   {"height", 0.8}, {"nx", 13}, {"ny", 13}};
    const fs::path cfile = write_config(cfg, "incompatible_cfg.json");
    CHECK(run("validate --config " + cfile.string() + " --strict --out " +
              (sandbox() / "vs").string()) == 3);
    // without --strict the same run only reports
    CHECK(run("validate --config " + cfile.string() + " --out " +
              (sandbox() / "vns").string()) == 0);
}

TEST_CASE("generate is deterministic and writes the contracted files") {
    const fs::path cfg = write_config(small_config(), "gen.json");
    const fs::path o1 = sandbox() / "g1", o2 = sandbox() / "g2";
    REQUIRE(run("generate --config " + cfg.string() + " --out " + o1.string()) == 0);
    REQUIRE(run("generate --config " + cfg.string() + " --out " + o2.string()) == 0);
    for (const char* f : {"surface.obj", "fields.csv", "gauss.csv", "height.csv",
                          "generate_report.json"}) {
        CAPTURE(f);
        REQUIRE(fs::exists(o1 / f));
        CHECK(slurp(o1 / f) == slurp(o2 / f));
    }
    // vertex count equals the unmasked node count (65x65 disk at res 16 -> count from report)
    const json report = json::parse(slurp(o1 / "generate_report.json"));
    int nv = 0;
    std::istringstream obj(slurp(o1 / "surface.obj"));
    std::string line;
    while (std::getline(obj, line))
        if (line.rfind("v ", 0) == 0) ++nv;
    CHECK(nv == report.at("vertices").get<int>());
}

TEST_CASE("theta0 changes the height but not the gauss map") {
    json c0 = small_config(), c1 = small_config();
    c1["init"]["theta0"] = {1.0, 0.0};
    const fs::path f0 = write_config(c0, "t0.json"), f1 = write_config(c1, "t1.json");
    const fs::path o0 = sandbox() / "t0", o1 = sandbox() / "t1";
    REQUIRE(run("generate --config " + f0.string() + " --out " + o0.string()) == 0);
    REQUIRE(run("generate --config " + f1.string() + " --out " + o1.string()) == 0);
    CHECK(slurp(o0 / "gauss.csv") == slurp(o1 / "gauss.csv"));
    CHECK(slurp(o0 / "height.csv") != slurp(o1 / "height.csv"));
}

TEST_CASE("diagnose and correspond pass on the constant family") {
    const fs::path cfg = write_config(small_config(32), "diag.json");
    CHECK(run("diagnose --config " + cfg.string() + " --out " + (sandbox() / "d").string()) == 0);
    CHECK(run("correspond --config " + cfg.string() + " --out " + (sandbox() / "c").string()) == 0);
}

TEST_CASE("compat batch evaluation") {
    // empty batch -> empty report, exit 0
    const fs::path empty = sandbox() / "empty.json";
    std::ofstream(empty) << "[]";
    CHECK(run("compat --config " + empty.string() + " --out " + (sandbox() / "ce").string()) == 0);
    const json rep = json::parse(slurp(sandbox() / "ce" / "compat_report.json"));
    CHECK(rep.at("count").get<int>() == 0);

    const fs::path broken = sandbox() / "broken.json";
    std::ofstream(broken) << "{\"x\": 1}";
    CHECK(run("compat --config " + broken.string()) == 2);
}

}  // TEST_SUITE
