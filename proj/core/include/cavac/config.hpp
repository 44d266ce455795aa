#ifndef CAVAC_CONFIG_HPP
#define CAVAC_CONFIG_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "cavac/fvschemes.hpp"
#include "cavac/helmholtz.hpp"
#include "cavac/krylov.hpp"
#include "cavac/numkit.hpp"
#include "cavac/schwarz.hpp"

namespace cavac {

struct CavityConfig {
    double width = 2.4;
    double height = 1.2;
    double h = 0.05;
    double roof_start = 0.4;
    double roof_end = 0.65;
    Complex admittance{0.0, 0.0};
};

struct DdmConfig {
    bool enabled = false;
    std::size_t n_sub = 2;
    TransmissionParams params{Complex(0.0), Complex(0.0)};  // 0 -> use i*k
    double tol = 1e-8;
    std::size_t max_outer = 200;
};

struct PipelineConfig {
    TransportConfig transport;
    SchemeId scheme = SchemeId::QUICK;
    std::size_t fft_n = 512;
    bool fft_allow_padding = false;
    CavityConfig cavity;
    double sound_speed = 340.0;
    SolverId solver = SolverId::BiCGStab;
    SolverOptions solver_opts;
    DdmConfig ddm;
    std::vector<LineSpec> lines;
    std::string output_dir = "out";
};

PipelineConfig default_config();

/// Flat "section.key = value" format, '#' comments. Unknown keys are
/// rejected; parse errors carry the line number, validation errors the
/// key path.
PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::string& path);

/// One "key = value" line per setting, parseable by parse_config.
std::string dump_config(const PipelineConfig& cfg);

/// Key listing with defaults, for --help.
std::string config_reference();

}  // namespace cavac

#endif
