#pragma once

#include <array>
#include <complex>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinform/compat.hpp"
#include "spinform/cquat.hpp"
#include "spinform/grid.hpp"
#include "spinform/weierstrass.hpp"

namespace spinform {

struct RunConfig {
    std::string command;  // filled by the CLI

    // data
    std::string family = "constant";  // constant | rotational | tabulated
    double theta = 0.0;
    std::string data_file;  // for tabulated

    // grid
    std::string grid_type = "disk";  // disk | rect
    double radius = 0.5;
    int resolution = 64;  // intervals per axis (disk)
    double rect_x0 = -0.5, rect_y0 = -0.5, rect_width = 1.0, rect_height = 1.0;
    int nx = 65, ny = 65;

    // initial conditions
    std::complex<double> z0{0.0, 0.0};
    std::complex<double> theta0{0.0, 0.0};
    double h0 = 0.0;
    int phase_sign = 1;

    std::string out_dir = "out";
    bool strict = false;
    int refine = 1;
    double height_scale = 1.0;

    PlanarGrid make_grid(int refine_level = 0) const;  // each level halves the spacing
    WeierstrassData make_data() const;
};

// Parse the config JSON; throws std::invalid_argument with a message on any
// schema violation (the CLI maps this to exit code 2).
RunConfig parse_config(const std::filesystem::path& file);
RunConfig parse_config_json(const nlohmann::json& j);

// FNV-1a hash of the canonical config serialization, hex string.
std::string config_hash(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

// Tabulated Weierstrass data files:
// {grid:{...}, family:"constant"|"rotational"|"tabulated", theta, tables:{Q0_re,Q0_im,tau0}}
WeierstrassData load_weierstrass(const std::filesystem::path& file);
void save_weierstrass(const WeierstrassData& d, const PlanarGrid& grid,
                      const std::filesystem::path& file);

// Deterministic float formatting: shortest form at 17 significant digits.
std::string fmt17(double v);

// ASCII OBJ: one vertex per unmasked node in node order, quads split into two
// triangles, faces dropped when any corner is masked.
void write_obj(const PlanarGrid& grid, const std::vector<std::array<double, 3>>& vertices,
               const std::filesystem::path& file);

// CSV with header "z_re,z_im,<names...>", one row per unmasked node.
void write_csv(const PlanarGrid& grid, const std::vector<std::string>& names,
               const std::vector<const std::vector<double>*>& columns,
               const std::filesystem::path& file);

// PointData batch I/O for the compat verifier.
std::vector<PointData> load_pointdata_batch(const nlohmann::json& j);
nlohmann::json residuals_to_json(const Residuals& r);

}  // namespace spinform
