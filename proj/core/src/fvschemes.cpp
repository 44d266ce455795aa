#include "cavac/fvschemes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cavac {

namespace {

constexpr double kDenGuard = 1e-300;

struct Oriented {
    double up_up;
    double up;
    double down;
};

Oriented orient(const FaceStencil& s) {
    if (s.direction == FlowDirection::WtoP)
        return {s.phi_WW, s.phi_W, s.phi_P};
    return {s.phi_P, s.phi_W, s.phi_WW};
}

}  // namespace

SchemeId scheme_from_name(const std::string& name) {
    if (name == "uds") return SchemeId::UDS;
    if (name == "cds") return SchemeId::CDS;
    if (name == "quick") return SchemeId::QUICK;
    if (name == "smart") return SchemeId::SMART;
    if (name == "hquick") return SchemeId::HQUICK;
    throw std::invalid_argument(
        "unknown scheme \"" + name +
        "\" (allowed: uds, cds, quick, smart, hquick)");
}

std::string scheme_name(SchemeId id) {
    switch (id) {
        case SchemeId::UDS: return "uds";
        case SchemeId::CDS: return "cds";
        case SchemeId::QUICK: return "quick";
        case SchemeId::SMART: return "smart";
        case SchemeId::HQUICK: return "hquick";
    }
    return "?";
}

double ratio_r(const FaceStencil& s) {
    const Oriented o = orient(s);
    const double num = o.down - o.up;
    const double den = o.up - o.up_up;
    if (std::abs(den) < kDenGuard) {
        return num >= 0 ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity();
    }
    return num / den;
}

double limiter_B(double r) {
    // IEEE infinities fall through correctly: r -> +inf gives 4, r -> -inf
    // gives 0.
    return std::max(0.0, std::min({2.0 * r, (3.0 * r + 1.0) / 4.0, 4.0}));
}

double face_value(SchemeId scheme, const FaceStencil& s) {
    const Oriented o = orient(s);
    switch (scheme) {
        case SchemeId::UDS:
            return o.up;
        case SchemeId::CDS:
            return 0.5 * (o.up + o.down);
        case SchemeId::QUICK:
            return 0.375 * o.down + 0.75 * o.up - 0.125 * o.up_up;
        case SchemeId::SMART: {
            const double B = limiter_B(ratio_r(s));
            const double jump = o.up - o.up_up;
            // B is finite and bounded; jump = 0 whenever r is the sentinel
            return o.up + 0.5 * B * jump;
        }
        case SchemeId::HQUICK: {
            const double r = ratio_r(s);
            if (!(r > 0)) return o.up;
            const double den = o.down + 2.0 * o.up - 3.0 * o.up_up;
            if (std::abs(den) < kDenGuard) return o.up;
            return o.up + 2.0 * (o.down - o.up) * (o.up - o.up_up) / den;
        }
    }
    throw std::logic_error("face_value: unreachable");
}

PecletDiagnostic peclet_check(double u, double diffusivity, double dx) {
    if (dx <= 0) throw std::invalid_argument("peclet_check: dx must be > 0");
    double pe;
    if (diffusivity <= 0.0)
        pe = std::numeric_limits<double>::infinity();
    else
        pe = std::abs(u) * dx / diffusivity;
    return {pe < 2.0, pe};
}

TransportResult advect(const TransportConfig& cfg, SchemeId scheme,
                       const std::vector<double>& initial_field) {
    const std::size_t nx = cfg.nx, ny = cfg.ny;
    if (nx < 3 || ny < 1)
        throw std::invalid_argument("advect: grid too small");
    if (cfg.dt <= 0 || cfg.dx <= 0 || cfg.dy <= 0)
        throw std::invalid_argument("advect: nonpositive step sizes");
    if (cfg.u < 0)
        throw std::invalid_argument("advect: u must be >= 0");
    const double cfl = cfg.u * cfg.dt / cfg.dx;
    if (cfl > 0.9)
        throw std::invalid_argument("advect: CFL number " + std::to_string(cfl) +
                                    " exceeds 0.9, refusing to step");
    const double dnum = cfg.diffusivity * cfg.dt *
                        (1.0 / (cfg.dx * cfg.dx) + 1.0 / (cfg.dy * cfg.dy));
    if (dnum > 0.5)
        throw std::invalid_argument("advect: diffusion number " +
                                    std::to_string(dnum) +
                                    " exceeds 0.5, refusing to step");
    for (const GridIndex& p : cfg.probes)
        if (p.ix >= nx || p.iy >= ny)
            throw std::invalid_argument("advect: probe outside grid");

    std::vector<double> field(nx * ny, 0.0);
    if (!initial_field.empty()) {
        if (initial_field.size() != nx * ny)
            throw std::invalid_argument("advect: initial field size mismatch");
        field = initial_field;
    }
    std::vector<double> next(nx * ny, 0.0);

    TransportResult result;
    result.probes.resize(cfg.probes.size());
    for (std::size_t p = 0; p < cfg.probes.size(); ++p) {
        result.probes[p].probe_id = p;
        result.probes[p].samples.dt = cfg.dt;
        result.probes[p].samples.samples.reserve(cfg.steps);
    }
    if (scheme == SchemeId::CDS) {
        PecletDiagnostic d = peclet_check(cfg.u, cfg.diffusivity, cfg.dx);
        if (!d.ok) result.warning = d;
    }

    const double cdx = cfg.u * cfg.dt / cfg.dx;
    const double kx = cfg.diffusivity * cfg.dt / (cfg.dx * cfg.dx);
    const double ky = cfg.diffusivity * cfg.dt / (cfg.dy * cfg.dy);
    std::vector<double> face(nx + 1, 0.0);

    auto at = [&](std::size_t ix, std::size_t iy) -> double& {
        return field[iy * nx + ix];
    };

    for (std::size_t step = 0; step < cfg.steps; ++step) {
        const double t = static_cast<double>(step) * cfg.dt;
        const double disturb =
            cfg.disturbance.W0 *
            std::sin(2.0 * std::numbers::pi * cfg.disturbance.freq_hz * t);

        for (std::size_t iy = 0; iy < ny; ++iy) {
            // x-face values, flow left to right
            face[0] = at(0, iy) + disturb;
            if (scheme == SchemeId::CDS)
                face[1] = 0.5 * (at(0, iy) + at(1, iy));
            else
                face[1] = at(0, iy);  // no phi_WW at the first interior face
            for (std::size_t i = 2; i < nx; ++i) {
                FaceStencil s{at(i - 2, iy), at(i - 1, iy), at(i, iy),
                              FlowDirection::WtoP};
                face[i] = face_value(scheme, s);
            }
            face[nx] = at(nx - 1, iy);  // outflow, upwind copy

            for (std::size_t i = 0; i < nx; ++i) {
                double v = at(i, iy) - cdx * (face[i + 1] - face[i]);
                if (kx != 0.0) {
                    const double w = i > 0 ? at(i - 1, iy) : at(i, iy);
                    const double e = i + 1 < nx ? at(i + 1, iy) : at(i, iy);
                    v += kx * (w - 2.0 * at(i, iy) + e);
                }
                if (ky != 0.0 && ny > 1) {
                    const double sv = iy > 0 ? at(i, iy - 1) : at(i, iy);
                    const double nv = iy + 1 < ny ? at(i, iy + 1) : at(i, iy);
                    v += ky * (sv - 2.0 * at(i, iy) + nv);
                }
                next[iy * nx + i] = v;
            }
        }
        field.swap(next);

        for (std::size_t p = 0; p < cfg.probes.size(); ++p)
            result.probes[p].samples.samples.push_back(
                at(cfg.probes[p].ix, cfg.probes[p].iy));
    }

    result.final_field = std::move(field);
    return result;
}

void write_probe_csv(const std::string& path,
                     const std::vector<ProbeRecord>& probes) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "probe_id,t,value\n";
    char buf[64];
    for (const ProbeRecord& pr : probes) {
        for (std::size_t n = 0; n < pr.samples.samples.size(); ++n) {
            const double t = static_cast<double>(n + 1) * pr.samples.dt;
            std::snprintf(buf, sizeof buf, "%zu,%.9g,%.17g\n", pr.probe_id, t,
                          pr.samples.samples[n]);
            os << buf;
        }
    }
}

}  // namespace cavac
