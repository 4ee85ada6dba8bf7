#include "spinform/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>

namespace spinform {

using nlohmann::json;

PlanarGrid RunConfig::make_grid(int refine_level) const {
    const int factor = 1 << refine_level;
    if (grid_type == "disk") {
        if (resolution < 8) throw std::invalid_argument("config: grid resolution must be >= 8");
        return PlanarGrid::disk(radius, resolution * factor);
    }
    if (grid_type == "rect") {
        if (nx < 9 || ny < 9) throw std::invalid_argument("config: grid resolution must be >= 8");
        const int rnx = (nx - 1) * factor + 1, rny = (ny - 1) * factor + 1;
        return PlanarGrid::rect({rect_x0, rect_y0}, rect_width, rect_height, rnx, rny);
    }
    throw std::invalid_argument("config: unknown grid type '" + grid_type + "'");
}

WeierstrassData RunConfig::make_data() const {
    if (family == "constant") return family_constant(theta);
    if (family == "rotational") return family_rotational();
    if (family == "tabulated") {
        if (data_file.empty()) throw std::invalid_argument("config: tabulated data needs a file");
        return load_weierstrass(data_file);
    }
    throw std::invalid_argument("config: unknown family '" + family + "'");
}

RunConfig parse_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("config: cannot open " + file.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }
    return parse_config_json(j);
}

RunConfig parse_config_json(const json& j) {
    RunConfig c;
    try {
        if (j.contains("data")) {
            const json& d = j.at("data");
            c.family = d.value("family", c.family);
            c.theta = d.value("theta", c.theta);
            c.data_file = d.value("file", c.data_file);
        }
        if (j.contains("grid")) {
            const json& g = j.at("grid");
            c.grid_type = g.value("type", c.grid_type);
            c.radius = g.value("radius", c.radius);
            c.resolution = g.value("resolution", c.resolution);
            c.rect_x0 = g.value("x0", c.rect_x0);
            c.rect_y0 = g.value("y0", c.rect_y0);
            c.rect_width = g.value("width", c.rect_width);
            c.rect_height = g.value("height", c.rect_height);
            c.nx = g.value("nx", c.nx);
            c.ny = g.value("ny", c.ny);
        }
        if (j.contains("init")) {
            const json& i = j.at("init");
            if (i.contains("z0")) c.z0 = {i.at("z0").at(0).get<double>(), i.at("z0").at(1).get<double>()};
            if (i.contains("theta0"))
                c.theta0 = {i.at("theta0").at(0).get<double>(), i.at("theta0").at(1).get<double>()};
            c.h0 = i.value("h0", c.h0);
            c.phase_sign = i.value("phase_sign", c.phase_sign);
        }
        c.out_dir = j.value("out", c.out_dir);
        c.strict = j.value("strict", c.strict);
        c.refine = j.value("refine", c.refine);
        c.height_scale = j.value("height_scale", c.height_scale);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: schema error: ") + e.what());
    }
    if (c.phase_sign != 1 && c.phase_sign != -1)
        throw std::invalid_argument("config: phase_sign must be +1 or -1");
    if (c.refine < 1 || c.refine > 4) throw std::invalid_argument("config: refine must be in 1..4");
    c.make_grid();  // validates resolution bounds
    return c;
}

json config_to_json(const RunConfig& c) {
    json j;
    j["data"] = {{"family", c.family}, {"theta", c.theta}};
    if (!c.data_file.empty()) j["data"]["file"] = c.data_file;
    if (c.grid_type == "disk")
        j["grid"] = {{"type", "disk"}, {"radius", c.radius}, {"resolution", c.resolution}};
    else
        j["grid"] = {{"type", "rect"}, {"x0", c.rect_x0}, {"y0", c.rect_y0},
                     {"width", c.rect_width}, {"height", c.rect_height}, {"nx", c.nx}, {"ny", c.ny}};
    j["init"] = {{"z0", {c.z0.real(), c.z0.imag()}},
                 {"theta0", {c.theta0.real(), c.theta0.imag()}},
                 {"h0", c.h0},
                 {"phase_sign", c.phase_sign}};
    j["strict"] = c.strict;
    j["refine"] = c.refine;
    j["height_scale"] = c.height_scale;
    return j;
}

std::string config_hash(const json& j) {
    const std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

WeierstrassData load_weierstrass(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("data: cannot open " + file.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("data: JSON parse error: ") + e.what());
    }
    const std::string family = j.value("family", "tabulated");
    if (family == "constant") return family_constant(j.value("theta", 0.0));
    if (family == "rotational") return family_rotational();
    if (family != "tabulated")
        throw std::invalid_argument("data: unknown family '" + family + "'");
    const json& g = j.at("grid");
    PlanarGrid grid({g.at("x0").get<double>(), g.at("y0").get<double>()}, g.at("hx").get<double>(),
                    g.at("hy").get<double>(), g.at("nx").get<int>(), g.at("ny").get<int>());
    WeierstrassData d;
    d.name = "tabulated";
    d.table_grid = grid;
    const json& t = j.at("tables");
    const auto q0re = t.at("Q0_re").get<std::vector<double>>();
    const auto q0im = t.at("Q0_im").get<std::vector<double>>();
    d.tau0_table = t.at("tau0").get<std::vector<double>>();
    if (q0re.size() != std::size_t(grid.count()) || q0im.size() != q0re.size())
        throw std::invalid_argument("data: Q0 table size mismatch");
    d.Q0_table.resize(q0re.size());
    for (std::size_t i = 0; i < q0re.size(); ++i) d.Q0_table[i] = {q0re[i], q0im[i]};
    d.validate_tables();
    return d;
}

void save_weierstrass(const WeierstrassData& d, const PlanarGrid& grid,
                      const std::filesystem::path& file) {
    const WeierstrassData tab = d.table_grid ? d : tabulate(d, grid);
    const PlanarGrid& g = *tab.table_grid;
    json j;
    j["family"] = "tabulated";
    j["grid"] = {{"x0", g.origin.real()}, {"y0", g.origin.imag()}, {"hx", g.hx},
                 {"hy", g.hy},            {"nx", g.nx},            {"ny", g.ny}};
    std::vector<double> re(tab.Q0_table.size()), im(tab.Q0_table.size());
    for (std::size_t i = 0; i < tab.Q0_table.size(); ++i) {
        re[i] = tab.Q0_table[i].real();
        im[i] = tab.Q0_table[i].imag();
    }
    j["tables"] = {{"Q0_re", re}, {"Q0_im", im}, {"tau0", tab.tau0_table}};
    std::ofstream out(file);
    out << j.dump(2) << "\n";
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_obj(const PlanarGrid& grid, const std::vector<std::array<double, 3>>& vertices,
               const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("write_obj: cannot open " + file.string());
    out << "# spinform surface mesh\n";
    std::vector<int> vid(grid.count(), 0);
    int next = 1;
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        vid[n] = next++;
        const auto& v = vertices[n];
        out << "v " << fmt17(v[0]) << " " << fmt17(v[1]) << " " << fmt17(v[2]) << "\n";
    }
    for (int iy = 0; iy + 1 < grid.ny; ++iy)
        for (int ix = 0; ix + 1 < grid.nx; ++ix) {
            const int a = grid.index(ix, iy), b = grid.index(ix + 1, iy),
                      c = grid.index(ix + 1, iy + 1), d = grid.index(ix, iy + 1);
            if (!vid[a] || !vid[b] || !vid[c] || !vid[d]) continue;
            out << "f " << vid[a] << " " << vid[b] << " " << vid[c] << "\n";
            out << "f " << vid[a] << " " << vid[c] << " " << vid[d] << "\n";
        }
}

void write_csv(const PlanarGrid& grid, const std::vector<std::string>& names,
               const std::vector<const std::vector<double>*>& columns,
               const std::filesystem::path& file) {
    if (names.size() != columns.size())
        throw std::invalid_argument("write_csv: name/column count mismatch");
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + file.string());
    out << "z_re,z_im";
    for (const auto& n : names) out << "," << n;
    out << "\n";
    for (int n = 0; n < grid.count(); ++n) {
        if (!grid.unmasked(n)) continue;
        const auto z = grid.z_of(n);
        out << fmt17(z.real()) << "," << fmt17(z.imag());
        for (const auto* col : columns) out << "," << fmt17((*col)[n]);
        out << "\n";
    }
}

std::vector<PointData> load_pointdata_batch(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("compat: expected a JSON array of instances");
    std::vector<PointData> out;
    for (const json& e : j) {
        PointData d;
        try {
            d.p = e.at("p").get<int>();
            d.q = e.at("q").get<int>();
            d.c1 = e.value("c1", 1.0);
            d.c2 = e.value("c2", 1.0);
            d.B = e.at("B").get<std::vector<double>>();
            d.f = e.at("f").get<std::vector<double>>();
            d.h = e.at("h").get<std::vector<double>>();
            d.s = e.at("s").get<std::vector<double>>();
            d.t = e.at("t").get<std::vector<double>>();
            d.nablaB = e.at("nablaB").get<std::vector<double>>();
            d.nablaf = e.at("nablaf").get<std::vector<double>>();
            d.nablah = e.at("nablah").get<std::vector<double>>();
            d.nablas = e.at("nablas").get<std::vector<double>>();
            d.nablat = e.at("nablat").get<std::vector<double>>();
            d.RT = e.at("RT").get<std::vector<double>>();
            d.RN = e.at("RN").get<std::vector<double>>();
        } catch (const json::exception& ex) {
            throw std::invalid_argument(std::string("compat: schema error: ") + ex.what());
        }
        out.push_back(std::move(d));
    }
    return out;
}

json residuals_to_json(const Residuals& r) {
    return json{{"gauss", r.gauss},
                {"ricci", r.ricci},
                {"codazzi", r.codazzi},
                {"fhst1", r.fhst1},
                {"fhst2", r.fhst2},
                {"fhst3", r.fhst3},
                {"fhst4", r.fhst4},
                {"frobenius",
                 {{"gauss", r.gauss_fro},
                  {"ricci", r.ricci_fro},
                  {"codazzi", r.codazzi_fro},
                  {"fhst1", r.fhst1_fro},
                  {"fhst2", r.fhst2_fro},
                  {"fhst3", r.fhst3_fro},
                  {"fhst4", r.fhst4_fro}}}};
}

}  // namespace spinform
