#ifndef CAVAC_FVSCHEMES_HPP
#define CAVAC_FVSCHEMES_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cavac/spectra.hpp"

namespace cavac {

enum class SchemeId { UDS, CDS, QUICK, SMART, HQUICK };

SchemeId scheme_from_name(const std::string& name);
std::string scheme_name(SchemeId id);

enum class FlowDirection { WtoP, PtoW };

/// Three cell-centre values feeding a face interpolation. The middle
/// value is always the upwind cell; for PtoW the outer two values are
/// swapped before the formulas are applied.
struct FaceStencil {
    double phi_WW;
    double phi_W;
    double phi_P;
    FlowDirection direction = FlowDirection::WtoP;
};

/// Gradient ratio r = (phi_P - phi_W)/(phi_W - phi_WW) on the oriented
/// stencil. A vanishing denominator yields a sign-consistent infinity.
double ratio_r(const FaceStencil& s);

/// B = max(0, min(2r, (3r+1)/4, 4)). Accepts +-infinity.
double limiter_B(double r);

/// Face value phi_w for the given scheme.
double face_value(SchemeId scheme, const FaceStencil& s);

struct PecletDiagnostic {
    bool ok;
    double peclet;  // +inf for zero diffusivity
};

/// Pe = |u|*dx/diffusivity; warns when Pe >= 2 (central differencing
/// stability limit).
PecletDiagnostic peclet_check(double u, double diffusivity, double dx);

struct Disturbance {
    double W0 = -1.2;       // amplitude, m/s
    double freq_hz = 50.0;  // the paper's parameter a
};

struct GridIndex {
    std::size_t ix;
    std::size_t iy;
};

struct TransportConfig {
    std::size_t nx = 200;
    std::size_t ny = 1;
    double dx = 0.025;
    double dy = 0.025;
    double u = 10.0;            // horizontal velocity, m/s, >= 0
    double diffusivity = 0.0;   // m^2/s
    double dt = 1e-3;
    std::size_t steps = 512;
    Disturbance disturbance;
    std::vector<GridIndex> probes;
    std::size_t roof_begin = 0;  // probe-index range on the roof line
    std::size_t roof_end = 0;
};

struct ProbeRecord {
    std::size_t probe_id;
    TimeSeries samples;
};

struct TransportResult {
    std::vector<ProbeRecord> probes;
    std::vector<double> final_field;  // row-major, iy*nx + ix
    std::optional<PecletDiagnostic> warning;
};

/// Explicit 2D advection-diffusion of a scalar with a sinusoidal
/// disturbance added at the inflow column. Refuses to step when the CFL
/// number exceeds 0.9 or the diffusion number exceeds 0.5. Deterministic
/// for fixed inputs.
TransportResult advect(const TransportConfig& cfg, SchemeId scheme,
                       const std::vector<double>& initial_field = {});

/// Probe CSV, header "probe_id,t,value".
void write_probe_csv(const std::string& path,
                     const std::vector<ProbeRecord>& probes);

}  // namespace cavac

#endif
