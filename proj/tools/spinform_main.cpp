#include <CLI11.hpp>
#include <json.hpp>

#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "spinform/compat.hpp"
#include "spinform/fieldsolve.hpp"
#include "spinform/io.hpp"
#include "spinform/minkowski.hpp"
#include "spinform/spinsurface.hpp"
#include "spinform/weierstrass.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spinform;

namespace {

constexpr const char* kVersion = "spinform 0.1.0";

// exit codes per the interface contract
enum : int { kOk = 0, kParseError = 2, kResidualBreach = 3, kBlowup = 4, kInvariantBreach = 5 };

void write_report(const json& report, const fs::path& out_dir, const std::string& name) {
    fs::create_directories(out_dir);
    std::ofstream out(out_dir / name, std::ios::binary);
    out << report.dump(2) << "\n";
}

json base_report(const RunConfig& cfg) {
    json r;
    r["version"] = kVersion;
    r["command"] = cfg.command;
    r["config"] = config_to_json(cfg);
    r["config_hash"] = config_hash(config_to_json(cfg));
    return r;
}

struct PipelineResult {
    PlanarGrid grid;
    PathPlan plan;
    SpinorComponentField g1p;
    HzField hz;
    ProductStructureField ps;
    std::vector<ComplexQuaternion> g;
    HeightField height;
    SurfaceSample surface;
};

PipelineResult run_pipeline(const RunConfig& cfg, const WeierstrassData& data, int refine_level,
                            bool with_diagnostics) {
    PipelineResult r;
    r.grid = cfg.make_grid(refine_level);
    r.plan = PathPlan::column_rows(r.grid, cfg.z0);
    r.plan.validate(r.grid);
    r.hz = solve_hz(data, r.grid, r.plan, cfg.theta0, cfg.z0, par::Exec::openmp, cfg.strict);
    r.g1p = flow_g1(data, r.grid, r.plan, default_g1_init(data, r.grid.z_of(r.plan.seed), cfg.phase_sign));
    r.ps = product_structure(data, r.hz);
    const auto g2p = reconstruct_g2(r.g1p, r.ps);
    r.g = assemble_spinor(r.g1p, g2p, r.ps);
    r.height = integrate_height(r.hz, r.plan, cfg.h0);
    r.surface = immerse(r.grid, r.g, r.height.h);
    if (with_diagnostics) diagnose(r.surface, r.ps, data);
    return r;
}

int cmd_validate(const RunConfig& cfg) {
    const WeierstrassData data = cfg.make_data();
    json report = base_report(cfg);
    json levels = json::array();
    double prev_h = 0.0, prev_v = 0.0;
    bool breach = false;
    // configured resolution and half resolution, plus extra refinements if asked
    for (int level = -1; level < cfg.refine; ++level) {
        PlanarGrid grid =
            (level < 0) ? [&] {
                RunConfig half = cfg;
                if (half.grid_type == "disk") half.resolution = std::max(8, half.resolution / 2);
                else { half.nx = std::max(9, (half.nx - 1) / 2 + 1); half.ny = std::max(9, (half.ny - 1) / 2 + 1); }
                return half.make_grid();
            }()
            : cfg.make_grid(level);
        const auto rh = residual_holomorphic(data, grid);
        const auto rv = residual_vortex(data, grid);
        const double mh = max_residual(rh, grid), mv = max_residual(rv, grid);
        const double thr = compatibility_threshold(data, grid);
        json l;
        l["nx"] = grid.nx;
        l["h"] = grid.hx;
        l["max_residual_holomorphic"] = mh;
        l["max_residual_vortex"] = mv;
        l["mean_residual_holomorphic"] = mean_residual(rh, grid);
        l["mean_residual_vortex"] = mean_residual(rv, grid);
        l["threshold"] = thr;
        l["compatible"] = (mh <= thr && mv <= thr);
        if (mh > thr || mv > thr) breach = true;
        if (level >= 0 && prev_h > 0.0) {
            l["ratio_holomorphic"] = (mh > 0.0) ? prev_h / mh : 0.0;
            l["ratio_vortex"] = (mv > 0.0) ? prev_v / mv : 0.0;
        }
        prev_h = mh;
        prev_v = mv;
        levels.push_back(l);
    }
    report["levels"] = levels;
    report["pass"] = !breach;
    write_report(report, cfg.out_dir, "validate_report.json");
    std::cout << (breach ? "FAIL" : "PASS") << " validate (report in " << cfg.out_dir << ")\n";
    return (breach && cfg.strict) ? kResidualBreach : kOk;
}

int cmd_generate(const RunConfig& cfg) {
    const WeierstrassData data = cfg.make_data();
    const PipelineResult r = run_pipeline(cfg, data, 0, true);
    const PlanarGrid& grid = r.grid;

    // Poincare-disk projection of F1 plus scaled height
    std::vector<std::array<double, 3>> verts(grid.count(), {0.0, 0.0, 0.0});
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        const H2Point& p = r.surface.F1[n];
        verts[n] = {p.x2 / (1.0 + p.x0), p.x3 / (1.0 + p.x0), r.surface.h[n] * cfg.height_scale};
    }
    fs::create_directories(cfg.out_dir);
    write_obj(grid, verts, fs::path(cfg.out_dir) / "surface.obj");

    // raw 5-coordinate CSV plus the pipeline fields
    std::vector<double> f0(grid.count(), 0.0), f1(grid.count(), 0.0), f2(grid.count(), 0.0),
        f3(grid.count(), 0.0), hzre(grid.count(), 0.0), hzim(grid.count(), 0.0);
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        f0[n] = r.surface.F1[n].x0;
        f2[n] = r.surface.F1[n].x2;
        f3[n] = r.surface.F1[n].x3;
        hzre[n] = r.hz.hz[n].real();
        hzim[n] = r.hz.hz[n].imag();
    }
    write_csv(grid, {"F_x0", "F_x1", "F_x2", "F_x3", "h", "mu", "nu", "hz_re", "hz_im"},
              {&f0, &f1, &f2, &f3, &r.surface.h, &r.ps.mu, &r.ps.nu, &hzre, &hzim},
              fs::path(cfg.out_dir) / "fields.csv");

    // gauss map and height as separate files
    std::vector<double> g0(grid.count(), 0.0), g2c(grid.count(), 0.0), g3(grid.count(), 0.0);
    const auto G = gauss_map(r.g1p);
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        g0[n] = G[n].x0;
        g2c[n] = G[n].x2;
        g3[n] = G[n].x3;
    }
    write_csv(grid, {"G_x0", "G_x2", "G_x3"}, {&g0, &g2c, &g3},
              fs::path(cfg.out_dir) / "gauss.csv");
    write_csv(grid, {"h"}, {&r.surface.h}, fs::path(cfg.out_dir) / "height.csv");

    const auto holo = holonomy_residual(g1_flow_rhs(data),
                                        [&] {
                                            FlowField f;
                                            f.grid = grid;
                                            f.dim = 4;
                                            f.values.resize(std::size_t(grid.count()) * 4);
                                            for (int n = 0; n < grid.count(); ++n) {
                                                auto st = f.at(n);
                                                st[0] = r.g1p.g1p[n].a.real();
                                                st[1] = r.g1p.g1p[n].a.imag();
                                                st[2] = r.g1p.g1p[n].b.real();
                                                st[3] = r.g1p.g1p[n].b.imag();
                                            }
                                            return f;
                                        }());
    json report = base_report(cfg);
    report["vertices"] = grid.unmasked_count();
    report["norm_drift"] = r.g1p.max_norm_drift;
    report["hyperboloid_err"] = r.surface.max_hyperboloid_err;
    report["height_imag_drift"] = r.height.imag_drift;
    report["height_loop_residual"] = r.height.max_loop_residual;
    report["hz_mixed_partial_residual"] = r.hz.mixed_partial_residual;
    report["max_holonomy"] = max_residual(holo, grid);
    report["H_max_err"] = r.surface.diag.max_H_err;
    report["nu_max_err"] = r.surface.diag.max_nu_err;
    report["mu_rel_err"] = r.surface.diag.max_mu_rel_err;
    report["Q0_rel_err"] = r.surface.diag.max_Q0_rel_err;
    report["pass"] = true;
    write_report(report, cfg.out_dir, "generate_report.json");
    std::cout << "PASS generate: " << grid.unmasked_count() << " vertices, H err "
              << r.surface.diag.max_H_err << "\n";
    return kOk;
}

int cmd_diagnose(const RunConfig& cfg) {
    const WeierstrassData data = cfg.make_data();
    json report = base_report(cfg);
    json levels = json::array();
    double prev_err = 0.0;
    bool breach = false;
    for (int level = 0; level < cfg.refine; ++level) {
        const PipelineResult r = run_pipeline(cfg, data, level, true);
        json l;
        l["nx"] = r.grid.nx;
        l["H_max_err"] = r.surface.diag.max_H_err;
        l["nu_max_err"] = r.surface.diag.max_nu_err;
        l["mu_rel_err"] = r.surface.diag.max_mu_rel_err;
        l["Q0_rel_err"] = r.surface.diag.max_Q0_rel_err;
        l["conformality"] = r.surface.diag.max_conformality;
        if (level > 0 && r.surface.diag.max_H_err > 0.0)
            l["H_err_ratio"] = prev_err / r.surface.diag.max_H_err;
        prev_err = r.surface.diag.max_H_err;
        levels.push_back(l);
        if (level == 0) {
            // tolerances quoted at h = 1/64; scale quadratically with h
            const double scale = (cfg.grid_type == "disk")
                                     ? (64.0 / cfg.resolution) * (64.0 / cfg.resolution)
                                     : 1.0;
            if (r.surface.diag.max_H_err > 1e-3 * std::max(1.0, scale) ||
                r.surface.diag.max_nu_err > 1e-4 * std::max(1.0, scale) ||
                r.surface.diag.max_Q0_rel_err > 1e-3 * std::max(1.0, scale))
                breach = true;
        }
    }
    report["levels"] = levels;
    report["pass"] = !breach;
    write_report(report, cfg.out_dir, "diagnose_report.json");
    std::cout << (breach ? "FAIL" : "PASS") << " diagnose\n";
    return breach ? kInvariantBreach : kOk;
}

int cmd_correspond(const RunConfig& cfg) {
    const WeierstrassData data = cfg.make_data();
    if (cfg.strict) {
        const PlanarGrid grid = cfg.make_grid();
        const double thr = compatibility_threshold(data, grid);
        if (max_residual(residual_holomorphic(data, grid), grid) > thr ||
            max_residual(residual_vortex(data, grid), grid) > thr) {
            std::cerr << "correspond: incompatible Weierstrass data (strict mode)\n";
            return kResidualBreach;
        }
    }
    const PlanarGrid grid = cfg.make_grid();
    PathPlan plan = PathPlan::column_rows(grid, cfg.z0);
    plan.validate(grid);

    // R^{1,2} side
    const SpinFrameField v =
        flow_v(data, grid, plan, default_v_init(data, grid.z_of(plan.seed), cfg.phase_sign));
    MinkSurface msurf = mink_immerse(v, plan);
    mink_diagnose(msurf, data);
    const auto Gm = mink_gauss(v);

    // correspondence and the H^2 x R pipeline on the produced g1'
    const SpinorComponentField g1p = correspond_to_h2r(v, data);
    const double corr_residual = correspondence_flow_residual(v, data);
    const auto Gh = gauss_map(g1p);
    double gauss_agree = 0.0;
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        gauss_agree = std::max(gauss_agree,
                               std::max(std::abs(Gm[n].x0 - Gh[n].x0),
                                        std::max(std::abs(Gm[n].x2 - Gh[n].x2),
                                                 std::abs(Gm[n].x3 - Gh[n].x3))));
    }
    // round trip v' -> g1' -> v'
    const SpinFrameField v2 = correspond_from_g1(g1p, data);
    double round_trip = 0.0;
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        round_trip = std::max(round_trip, (v2.vprime[n] - v.vprime[n]).max_abs());
    }

    const HzField hz = solve_hz(data, grid, plan, cfg.theta0, cfg.z0);
    const ProductStructureField ps = product_structure(data, hz);
    const auto g2p = reconstruct_g2(g1p, ps);
    const auto g = assemble_spinor(g1p, g2p, ps);
    const HeightField height = integrate_height(hz, plan, cfg.h0);
    SurfaceSample surf = immerse(grid, g, height.h);
    diagnose(surf, ps, data);

    // export the Minkowski mesh with the timelike coordinate vertical
    std::vector<std::array<double, 3>> verts(grid.count(), {0.0, 0.0, 0.0});
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        verts[n] = {msurf.F[n][1], msurf.F[n][2], msurf.F[n][0]};
    }
    fs::create_directories(cfg.out_dir);
    write_obj(grid, verts, fs::path(cfg.out_dir) / "surface_r12.obj");

    json report = base_report(cfg);
    report["gauss_agreement"] = gauss_agree;
    report["round_trip"] = round_trip;
    report["correspondence_residual"] = corr_residual;
    report["H_err_r12"] = msurf.max_H_err;
    report["H_err_h2r"] = surf.diag.max_H_err;
    report["metric_rel_err_r12"] = msurf.max_metric_rel_err;
    report["closedness"] = msurf.max_closedness;
    const bool breach = gauss_agree > 1e-8 || round_trip > 1e-10 || corr_residual > 1e-8;
    report["pass"] = !breach;
    write_report(report, cfg.out_dir, "correspond_report.json");
    std::cout << (breach ? "FAIL" : "PASS") << " correspond: gauss agreement " << gauss_agree
              << ", H errs " << msurf.max_H_err << " / " << surf.diag.max_H_err << "\n";
    return breach ? kInvariantBreach : kOk;
}

int cmd_compat(const fs::path& config_path, const std::string& out_dir) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "compat: cannot open " << config_path << "\n";
        return kParseError;
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        std::cerr << "compat: JSON parse error: " << e.what() << "\n";
        return kParseError;
    }
    json batch;
    try {
        if (j.is_array()) {
            batch = j;
        } else if (j.contains("instances")) {
            batch = j.at("instances");
        } else if (j.contains("input")) {
            std::ifstream bin(j.at("input").get<std::string>());
            if (!bin) {
                std::cerr << "compat: cannot open input batch\n";
                return kParseError;
            }
            bin >> batch;
        } else {
            std::cerr << "compat: config must be an array, or carry 'instances' or 'input'\n";
            return kParseError;
        }
        const auto instances = load_pointdata_batch(batch);
        json out = json::array();
        for (const auto& d : instances) out.push_back(residuals_to_json(fundamental_residuals(d)));
        json report;
        report["version"] = kVersion;
        report["command"] = "compat";
        report["count"] = instances.size();
        report["residuals"] = out;
        write_report(report, out_dir, "compat_report.json");
        std::cout << "compat: " << instances.size() << " instance(s) evaluated\n";
        return kOk;  // reporting tool: exit 0 always once input parses
    } catch (const std::invalid_argument& e) {
        std::cerr << "compat: " << e.what() << "\n";
        return kParseError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spinform: spinorial Weierstrass representation of H=1/2 surfaces"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    int phase_override = 0;
    int refine_override = 0;
    bool strict_flag = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "config JSON path")->required();
        sub->add_flag("--strict", strict_flag, "escalate compatibility warnings to errors");
        sub->add_option("--out", out_override, "output directory (overrides config)");
        sub->add_option("--phase", phase_override, "initial spinor sign, +1 or -1");
        sub->add_option("--refine", refine_override, "refinement levels");
    };
    CLI::App* validate = app.add_subcommand("validate", "check Weierstrass data compatibility");
    CLI::App* generate = app.add_subcommand("generate", "produce the H^2 x R surface mesh");
    CLI::App* diagnose_cmd = app.add_subcommand("diagnose", "finite-difference surface diagnostics");
    CLI::App* correspond = app.add_subcommand("correspond", "R^{1,2} pipeline and correspondence");
    CLI::App* compat = app.add_subcommand("compat", "fundamental-equation residuals for a batch");
    for (CLI::App* sub : {validate, generate, diagnose_cmd, correspond, compat}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kParseError;
    }

    try {
        if (compat->parsed())
            return cmd_compat(config_path, out_override.empty() ? "out" : out_override);

        RunConfig cfg = parse_config(config_path);
        if (!out_override.empty()) cfg.out_dir = out_override;
        if (strict_flag) cfg.strict = true;
        if (phase_override != 0) {
            if (phase_override != 1 && phase_override != -1)
                throw std::invalid_argument("--phase must be +1 or -1");
            cfg.phase_sign = phase_override;
        }
        if (refine_override > 0) cfg.refine = refine_override;

        if (validate->parsed()) {
            cfg.command = "validate";
            return cmd_validate(cfg);
        }
        if (generate->parsed()) {
            cfg.command = "generate";
            return cmd_generate(cfg);
        }
        if (diagnose_cmd->parsed()) {
            cfg.command = "diagnose";
            return cmd_diagnose(cfg);
        }
        if (correspond->parsed()) {
            cfg.command = "correspond";
            return cmd_correspond(cfg);
        }
        return kParseError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParseError;
    } catch (const FlowBlowup& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBlowup;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvariantBreach;
    }
}
