#include "cavac/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cavac {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& v) {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("not a number: " + v);
    return d;
}

std::size_t to_size(const std::string& v) {
    std::size_t pos = 0;
    long long n = std::stoll(v, &pos);
    if (pos != v.size() || n < 0)
        throw std::invalid_argument("not a nonnegative integer: " + v);
    return static_cast<std::size_t>(n);
}

bool to_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("not a boolean: " + v);
}

std::vector<LineSpec> parse_lines(const std::string& v) {
    // "h:0.6;v:1.2" -> horizontal line at y=0.6, vertical line at x=1.2
    std::vector<LineSpec> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        if (item.size() < 3 || item[1] != ':' ||
            (item[0] != 'h' && item[0] != 'v'))
            throw std::invalid_argument("bad line spec \"" + item +
                                        "\" (expected h:<y> or v:<x>)");
        out.push_back({item[0] == 'h', to_double(item.substr(2))});
    }
    return out;
}

std::vector<GridIndex> parse_probe_cols(const std::string& v,
                                        std::size_t probe_row) {
    std::vector<GridIndex> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back({to_size(item), probe_row});
    }
    return out;
}

using Setter = std::function<void(PipelineConfig&, const std::string&)>;

const std::map<std::string, Setter>& key_table() {
    static const std::map<std::string, Setter> table = {
        {"transport.nx", [](PipelineConfig& c, const std::string& v) { c.transport.nx = to_size(v); }},
        {"transport.ny", [](PipelineConfig& c, const std::string& v) { c.transport.ny = to_size(v); }},
        {"transport.dx", [](PipelineConfig& c, const std::string& v) { c.transport.dx = to_double(v); }},
        {"transport.dy", [](PipelineConfig& c, const std::string& v) { c.transport.dy = to_double(v); }},
        {"transport.u", [](PipelineConfig& c, const std::string& v) { c.transport.u = to_double(v); }},
        {"transport.diffusivity", [](PipelineConfig& c, const std::string& v) { c.transport.diffusivity = to_double(v); }},
        {"transport.dt", [](PipelineConfig& c, const std::string& v) { c.transport.dt = to_double(v); }},
        {"transport.steps", [](PipelineConfig& c, const std::string& v) { c.transport.steps = to_size(v); }},
        {"transport.w0", [](PipelineConfig& c, const std::string& v) { c.transport.disturbance.W0 = to_double(v); }},
        {"transport.freq_hz", [](PipelineConfig& c, const std::string& v) { c.transport.disturbance.freq_hz = to_double(v); }},
        {"transport.probe_row",
         [](PipelineConfig& c, const std::string& v) {
             const std::size_t row = to_size(v);
             for (GridIndex& p : c.transport.probes) p.iy = row;
         }},
        {"transport.probe_cols",
         [](PipelineConfig& c, const std::string& v) {
             const std::size_t row =
                 c.transport.probes.empty() ? 0 : c.transport.probes[0].iy;
             c.transport.probes = parse_probe_cols(v, row);
         }},
        {"transport.roof_begin", [](PipelineConfig& c, const std::string& v) { c.transport.roof_begin = to_size(v); }},
        {"transport.roof_end", [](PipelineConfig& c, const std::string& v) { c.transport.roof_end = to_size(v); }},
        {"scheme", [](PipelineConfig& c, const std::string& v) { c.scheme = scheme_from_name(v); }},
        {"fft.n", [](PipelineConfig& c, const std::string& v) { c.fft_n = to_size(v); }},
        {"fft.allow_padding", [](PipelineConfig& c, const std::string& v) { c.fft_allow_padding = to_bool(v); }},
        {"cavity.width", [](PipelineConfig& c, const std::string& v) { c.cavity.width = to_double(v); }},
        {"cavity.height", [](PipelineConfig& c, const std::string& v) { c.cavity.height = to_double(v); }},
        {"cavity.h", [](PipelineConfig& c, const std::string& v) { c.cavity.h = to_double(v); }},
        {"cavity.roof_start", [](PipelineConfig& c, const std::string& v) { c.cavity.roof_start = to_double(v); }},
        {"cavity.roof_end", [](PipelineConfig& c, const std::string& v) { c.cavity.roof_end = to_double(v); }},
        {"cavity.admittance_re", [](PipelineConfig& c, const std::string& v) { c.cavity.admittance = Complex(to_double(v), c.cavity.admittance.imag()); }},
        {"cavity.admittance_im", [](PipelineConfig& c, const std::string& v) { c.cavity.admittance = Complex(c.cavity.admittance.real(), to_double(v)); }},
        {"physics.c", [](PipelineConfig& c, const std::string& v) { c.sound_speed = to_double(v); }},
        {"solver", [](PipelineConfig& c, const std::string& v) { c.solver = solver_from_name(v); }},
        {"solver_opts.tol", [](PipelineConfig& c, const std::string& v) { c.solver_opts.tol = to_double(v); }},
        {"solver_opts.max_iter", [](PipelineConfig& c, const std::string& v) { c.solver_opts.max_iter = to_size(v); }},
        {"solver_opts.l", [](PipelineConfig& c, const std::string& v) { c.solver_opts.l = to_size(v); }},
        {"ddm.enabled", [](PipelineConfig& c, const std::string& v) { c.ddm.enabled = to_bool(v); }},
        {"ddm.n_sub", [](PipelineConfig& c, const std::string& v) { c.ddm.n_sub = to_size(v); }},
        {"ddm.s_left_re", [](PipelineConfig& c, const std::string& v) { c.ddm.params.s_left = Complex(to_double(v), c.ddm.params.s_left.imag()); }},
        {"ddm.s_left_im", [](PipelineConfig& c, const std::string& v) { c.ddm.params.s_left = Complex(c.ddm.params.s_left.real(), to_double(v)); }},
        {"ddm.s_right_re", [](PipelineConfig& c, const std::string& v) { c.ddm.params.s_right = Complex(to_double(v), c.ddm.params.s_right.imag()); }},
        {"ddm.s_right_im", [](PipelineConfig& c, const std::string& v) { c.ddm.params.s_right = Complex(c.ddm.params.s_right.real(), to_double(v)); }},
        {"ddm.tol", [](PipelineConfig& c, const std::string& v) { c.ddm.tol = to_double(v); }},
        {"ddm.max_outer", [](PipelineConfig& c, const std::string& v) { c.ddm.max_outer = to_size(v); }},
        {"lines", [](PipelineConfig& c, const std::string& v) { c.lines = parse_lines(v); }},
        {"output_dir", [](PipelineConfig& c, const std::string& v) { c.output_dir = v; }},
    };
    return table;
}

void validate(const PipelineConfig& c) {
    auto fail = [](const std::string& key, const std::string& why) {
        throw std::invalid_argument("config validation: " + key + ": " + why);
    };
    if (c.fft_n == 0 || (c.fft_n & (c.fft_n - 1)) != 0)
        fail("fft.n", "must be a power of two");
    if (c.transport.steps < c.fft_n && !c.fft_allow_padding)
        fail("fft.n",
             "transport.steps is shorter than the transform length; set "
             "fft.allow_padding = true to zero-pad");
    if (c.transport.dt <= 0) fail("transport.dt", "must be > 0");
    if (c.transport.u * c.transport.dt / c.transport.dx > 0.9)
        fail("transport.u", "CFL number exceeds 0.9");
    for (const GridIndex& p : c.transport.probes)
        if (p.ix >= c.transport.nx || p.iy >= c.transport.ny)
            fail("transport.probe_cols", "probe outside grid");
    if (c.transport.roof_end > c.transport.probes.size() ||
        c.transport.roof_begin >= c.transport.roof_end)
        fail("transport.roof_begin", "roof probe range empty or out of range");
    if (!(0.0 <= c.cavity.roof_start && c.cavity.roof_start < c.cavity.roof_end &&
          c.cavity.roof_end <= 1.0))
        fail("cavity.roof_start", "need 0 <= start < end <= 1");
    if (c.solver_opts.tol <= 0) fail("solver_opts.tol", "must be > 0");
    if (c.solver_opts.l < 1) fail("solver_opts.l", "must be >= 1");
    if (c.ddm.enabled && c.ddm.n_sub < 1) fail("ddm.n_sub", "must be >= 1");
}

}  // namespace

PipelineConfig default_config() {
    PipelineConfig c;
    c.transport.nx = 200;
    c.transport.ny = 4;
    c.transport.dx = 0.025;
    c.transport.dy = 0.025;
    c.transport.u = 10.0;
    c.transport.diffusivity = 1e-4;
    c.transport.dt = 1e-3;
    c.transport.steps = 512;
    c.transport.disturbance = {-1.2, 50.0};
    for (std::size_t ix : {60, 70, 80, 90, 100, 110, 120})
        c.transport.probes.push_back({ix, 2});
    c.transport.roof_begin = 0;
    c.transport.roof_end = 7;
    c.lines = {{true, 1.0}, {true, 0.6}, {true, 0.2},
               {false, 0.6}, {false, 1.2}, {false, 1.8}};
    return c;
}

PipelineConfig parse_config(const std::string& text) {
    PipelineConfig cfg = default_config();
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = key_table().find(key);
        if (it == key_table().end())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key \"" + key + "\"");
        try {
            it->second(cfg, value);
        } catch (const std::exception& e) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        " (" + key + "): " + e.what());
        }
    }
    validate(cfg);
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string dump_config(const PipelineConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << "transport.nx = " << c.transport.nx << "\n";
    os << "transport.ny = " << c.transport.ny << "\n";
    os << "transport.dx = " << c.transport.dx << "\n";
    os << "transport.dy = " << c.transport.dy << "\n";
    os << "transport.u = " << c.transport.u << "\n";
    os << "transport.diffusivity = " << c.transport.diffusivity << "\n";
    os << "transport.dt = " << c.transport.dt << "\n";
    os << "transport.steps = " << c.transport.steps << "\n";
    os << "transport.w0 = " << c.transport.disturbance.W0 << "\n";
    os << "transport.freq_hz = " << c.transport.disturbance.freq_hz << "\n";
    os << "transport.probe_row = "
       << (c.transport.probes.empty() ? 0 : c.transport.probes[0].iy) << "\n";
    os << "transport.probe_cols = ";
    for (std::size_t i = 0; i < c.transport.probes.size(); ++i)
        os << (i ? "," : "") << c.transport.probes[i].ix;
    os << "\n";
    os << "transport.roof_begin = " << c.transport.roof_begin << "\n";
    os << "transport.roof_end = " << c.transport.roof_end << "\n";
    os << "scheme = " << scheme_name(c.scheme) << "\n";
    os << "fft.n = " << c.fft_n << "\n";
    os << "fft.allow_padding = " << (c.fft_allow_padding ? "true" : "false")
       << "\n";
    os << "cavity.width = " << c.cavity.width << "\n";
    os << "cavity.height = " << c.cavity.height << "\n";
    os << "cavity.h = " << c.cavity.h << "\n";
    os << "cavity.roof_start = " << c.cavity.roof_start << "\n";
    os << "cavity.roof_end = " << c.cavity.roof_end << "\n";
    os << "cavity.admittance_re = " << c.cavity.admittance.real() << "\n";
    os << "cavity.admittance_im = " << c.cavity.admittance.imag() << "\n";
    os << "physics.c = " << c.sound_speed << "\n";
    os << "solver = " << solver_name(c.solver) << "\n";
    os << "solver_opts.tol = " << c.solver_opts.tol << "\n";
    os << "solver_opts.max_iter = " << c.solver_opts.max_iter << "\n";
    os << "solver_opts.l = " << c.solver_opts.l << "\n";
    os << "ddm.enabled = " << (c.ddm.enabled ? "true" : "false") << "\n";
    os << "ddm.n_sub = " << c.ddm.n_sub << "\n";
    os << "ddm.s_left_re = " << c.ddm.params.s_left.real() << "\n";
    os << "ddm.s_left_im = " << c.ddm.params.s_left.imag() << "\n";
    os << "ddm.s_right_re = " << c.ddm.params.s_right.real() << "\n";
    os << "ddm.s_right_im = " << c.ddm.params.s_right.imag() << "\n";
    os << "ddm.tol = " << c.ddm.tol << "\n";
    os << "ddm.max_outer = " << c.ddm.max_outer << "\n";
    os << "lines = ";
    for (std::size_t i = 0; i < c.lines.size(); ++i)
        os << (i ? ";" : "") << (c.lines[i].horizontal ? "h:" : "v:")
           << c.lines[i].coordinate;
    os << "\n";
    os << "output_dir = " << c.output_dir << "\n";
    return os.str();
}

std::string config_reference() {
    PipelineConfig def = default_config();
    return "Configuration keys (flat \"key = value\" lines, '#' comments).\n"
           "Defaults:\n" +
           dump_config(def);
}

}  // namespace cavac
