#include "fil/report.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace fil {

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string RunConfig::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["n_max"] = n_max;
    j["trunc"] = trunc;
    j["weight"] = weight;
    j["eps"] = eps;
    j["delta"] = delta;
    j["grid"] = grid;
    j["function"] = function;
    j["precision"] = precision;
    j["jobs"] = jobs;
    j["seed"] = seed;
    j["quad"] = {{"contour_nodes", quad.contour_nodes},
                 {"contour_levels", quad.contour_levels},
                 {"ray_panels", quad.ray_panels},
                 {"ray_nodes", quad.ray_nodes},
                 {"ray_mp_nodes", quad.ray_mp_nodes},
                 {"t_height", quad.t_height},
                 {"trapezoid_points", quad.trapezoid_points}};
    return j.dump();
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("RunConfig: cannot open " + path);
    nlohmann::json j;
    f >> j;
    RunConfig c;
    c.command = j.value("command", c.command);
    c.n_max = j.value("n_max", c.n_max);
    c.trunc = j.value("trunc", c.trunc);
    c.weight = j.value("weight", c.weight);
    c.eps = j.value("eps", c.eps);
    c.delta = j.value("delta", c.delta);
    c.grid = j.value("grid", c.grid);
    c.function = j.value("function", c.function);
    c.precision = j.value("precision", c.precision);
    c.jobs = j.value("jobs", c.jobs);
    c.seed = j.value("seed", c.seed);
    if (j.contains("quad")) {
        const auto& q = j["quad"];
        c.quad.contour_nodes = q.value("contour_nodes", c.quad.contour_nodes);
        c.quad.contour_levels = q.value("contour_levels", c.quad.contour_levels);
        c.quad.ray_panels = q.value("ray_panels", c.quad.ray_panels);
        c.quad.ray_nodes = q.value("ray_nodes", c.quad.ray_nodes);
        c.quad.ray_mp_nodes = q.value("ray_mp_nodes", c.quad.ray_mp_nodes);
        c.quad.t_height = q.value("t_height", c.quad.t_height);
        c.quad.trapezoid_points = q.value("trapezoid_points", c.quad.trapezoid_points);
    }
    return c;
}

std::string RunConfig::hash() const {
    std::ostringstream os;
    os << std::hex << fnv1a64(to_json());
    return os.str();
}

std::vector<double> parse_grid(const std::string& spec) {
    double a, b, step;
    char c1, c2;
    std::istringstream is(spec);
    if (!(is >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0)
        throw std::invalid_argument("parse_grid: expected a:b:step, got " + spec);
    std::vector<double> g;
    long count = static_cast<long>(std::floor((b - a) / step + 0.5)) + 1;
    for (long i = 0; i < count; ++i) g.push_back(a + static_cast<double>(i) * step);
    return g;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_text_file: cannot open " + path);
    f << content;
}

} // namespace fil
