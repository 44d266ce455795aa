#include "cavac/helmholtz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace cavac {

namespace {

std::size_t interior_count(double extent, double h, const char* what) {
    const double cells = extent / h;
    const double rounded = std::round(cells);
    if (rounded < 4.0)
        throw std::invalid_argument(std::string("build_grid: ") + what +
                                    " too coarse, fewer than 3 interior nodes");
    return static_cast<std::size_t>(rounded) - 1;
}

}  // namespace

CavityGrid build_grid(double width, double height, double h,
                      double roof_fraction_start, double roof_fraction_end,
                      Complex wall_admittance) {
    if (width <= 0 || height <= 0 || h <= 0)
        throw std::invalid_argument("build_grid: nonpositive dimension");
    if (!(0.0 <= roof_fraction_start && roof_fraction_start < roof_fraction_end &&
          roof_fraction_end <= 1.0))
        throw std::invalid_argument("build_grid: bad roof fractions");

    CavityGrid g;
    g.width = width;
    g.height = height;
    g.h = h;
    g.nx = interior_count(width, h, "width");
    g.ny = interior_count(height, h, "height");
    g.wall_admittance = wall_admittance;

    const double x0 = roof_fraction_start * width;
    const double x1 = roof_fraction_end * width;
    std::size_t begin = g.nx, end = 0;
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
        const double x = g.x_of(ix);
        if (x >= x0 - 1e-9 && x <= x1 + 1e-9) {
            begin = std::min(begin, ix);
            end = std::max(end, ix + 1);
        }
    }
    if (begin >= end)
        throw std::invalid_argument("build_grid: empty roof span");
    g.roof_begin = begin;
    g.roof_end = end;
    return g;
}

HelmholtzProblem assemble(const CavityGrid& grid, double omega, double c,
                          const CVector& dirichlet) {
    if (dirichlet.size() != grid.roof_size())
        throw std::invalid_argument(
            "assemble: dirichlet length does not match roof span");
    const std::size_t n = grid.size();
    const double k2 = c * c / (grid.h * grid.h);

    // Elimination weight of a wall neighbor: 1 for a rigid (mirror) wall,
    // 1/(1 + i omega beta h) for an admittance wall.
    Complex wall_weight(1.0);
    if (grid.wall_admittance != Complex(0.0))
        wall_weight = 1.0 / (Complex(1.0) + Complex(0.0, omega * grid.h) *
                                                grid.wall_admittance);

    HelmholtzProblem p;
    p.grid = grid;
    p.omega = omega;
    p.c = c;
    p.dirichlet = dirichlet;
    p.b.assign(n, Complex(0.0));

    std::vector<Triplet> trip;
    trip.reserve(5 * n);
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
        for (std::size_t ix = 0; ix < grid.nx; ++ix) {
            const std::size_t row = grid.node(ix, iy);
            Complex diag = 4.0 * k2 - omega * omega;
            // left
            if (ix > 0)
                trip.push_back({row, grid.node(ix - 1, iy), Complex(-k2)});
            else
                diag -= k2 * wall_weight;
            // right
            if (ix + 1 < grid.nx)
                trip.push_back({row, grid.node(ix + 1, iy), Complex(-k2)});
            else
                diag -= k2 * wall_weight;
            // below
            if (iy > 0)
                trip.push_back({row, grid.node(ix, iy - 1), Complex(-k2)});
            else
                diag -= k2 * wall_weight;
            // above: roof Dirichlet segment or rigid wall
            if (iy + 1 < grid.ny) {
                trip.push_back({row, grid.node(ix, iy + 1), Complex(-k2)});
            } else if (ix >= grid.roof_begin && ix < grid.roof_end) {
                p.b[row] += k2 * dirichlet[ix - grid.roof_begin];
            } else {
                diag -= k2 * wall_weight;
            }
            trip.push_back({row, row, diag});
        }
    }
    p.A = csr_from_triplets(trip, n, n);
    return p;
}

ManufacturedProblem manufactured_problem(const CavityGrid& grid,
                                         std::size_t m, std::size_t n,
                                         double omega, double c) {
    if (m == 0 || n == 0)
        throw std::invalid_argument("manufactured_problem: mode must be >= 1");
    const double W = grid.width, H = grid.height;
    const double pi = std::numbers::pi;
    const double lambda =
        pi * pi * (static_cast<double>(m * m) / (W * W) +
                   static_cast<double>(n * n) / (H * H));
    const double factor = -omega * omega + c * c * lambda;
    if (std::abs(factor) < 1e-10 * c * c * lambda)
        throw std::invalid_argument(
            "manufactured_problem: omega is resonant for mode (" +
            std::to_string(m) + ", " + std::to_string(n) + ")");

    const std::size_t nn = grid.size();
    const double k2 = c * c / (grid.h * grid.h);

    ManufacturedProblem mp;
    mp.problem.grid = grid;
    mp.problem.omega = omega;
    mp.problem.c = c;
    mp.problem.b.assign(nn, Complex(0.0));
    mp.exact.resize(nn);

    std::vector<Triplet> trip;
    trip.reserve(5 * nn);
    for (std::size_t iy = 0; iy < grid.ny; ++iy) {
        for (std::size_t ix = 0; ix < grid.nx; ++ix) {
            const std::size_t row = grid.node(ix, iy);
            const double x = grid.x_of(ix), y = grid.y_of(iy);
            const double psi = std::sin(static_cast<double>(m) * pi * x / W) *
                               std::sin(static_cast<double>(n) * pi * y / H);
            mp.exact[row] = Complex(psi);
            mp.problem.b[row] = Complex(factor * psi);

            trip.push_back({row, row, Complex(4.0 * k2 - omega * omega)});
            if (ix > 0)
                trip.push_back({row, grid.node(ix - 1, iy), Complex(-k2)});
            if (ix + 1 < grid.nx)
                trip.push_back({row, grid.node(ix + 1, iy), Complex(-k2)});
            if (iy > 0)
                trip.push_back({row, grid.node(ix, iy - 1), Complex(-k2)});
            if (iy + 1 < grid.ny)
                trip.push_back({row, grid.node(ix, iy + 1), Complex(-k2)});
            // boundary neighbors carry exact value 0, nothing to add to b
        }
    }
    mp.problem.A = csr_from_triplets(trip, nn, nn);
    return mp;
}

CVector dirichlet_from_spectrum(const std::vector<Spectrum>& roof_spectra,
                                std::size_t bin) {
    if (roof_spectra.empty())
        throw std::invalid_argument("dirichlet_from_spectrum: no spectra");
    CVector out;
    out.reserve(roof_spectra.size());
    for (const Spectrum& s : roof_spectra) {
        if (bin >= s.size())
            throw std::invalid_argument(
                "dirichlet_from_spectrum: bin out of range");
        out.push_back(s.bins[bin]);
    }
    return out;
}

std::vector<LineProfile> sample_lines(const HelmholtzProblem& problem,
                                      const CVector& solution,
                                      const std::vector<LineSpec>& lines) {
    const CavityGrid& g = problem.grid;
    if (solution.size() != g.size())
        throw std::invalid_argument("sample_lines: solution size mismatch");

    auto value_at = [&](double x, double y) {
        // bilinear interpolation on the interior-node lattice, clamped to
        // the outermost interior nodes
        double fx = x / g.h - 1.0;
        double fy = y / g.h - 1.0;
        fx = std::clamp(fx, 0.0, static_cast<double>(g.nx - 1));
        fy = std::clamp(fy, 0.0, static_cast<double>(g.ny - 1));
        const std::size_t ix = std::min(static_cast<std::size_t>(fx), g.nx - 2);
        const std::size_t iy = std::min(static_cast<std::size_t>(fy), g.ny - 2);
        const double tx = fx - static_cast<double>(ix);
        const double ty = fy - static_cast<double>(iy);
        const Complex v00 = solution[g.node(ix, iy)];
        const Complex v10 = solution[g.node(ix + 1, iy)];
        const Complex v01 = solution[g.node(ix, iy + 1)];
        const Complex v11 = solution[g.node(ix + 1, iy + 1)];
        return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 +
               (1 - tx) * ty * v01 + tx * ty * v11;
    };

    std::vector<LineProfile> out;
    out.reserve(lines.size());
    for (const LineSpec& spec : lines) {
        const double extent = spec.horizontal ? g.height : g.width;
        if (spec.coordinate <= 0.0 || spec.coordinate >= extent)
            throw std::invalid_argument("sample_lines: line outside cavity");
        LineProfile prof;
        prof.horizontal = spec.horizontal;
        prof.coordinate = spec.coordinate;
        const std::size_t count = spec.horizontal ? g.nx : g.ny;
        for (std::size_t i = 0; i < count; ++i) {
            const double pos = static_cast<double>(i + 1) * g.h;
            const Complex v = spec.horizontal
                                  ? value_at(pos, spec.coordinate)
                                  : value_at(spec.coordinate, pos);
            prof.samples.emplace_back(pos, std::abs(v));
        }
        out.push_back(std::move(prof));
    }
    return out;
}

void write_profiles_csv(const std::string& path,
                        const std::vector<LineProfile>& profiles) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "orientation,coordinate,position,abs_psi\n";
    char buf[96];
    for (const LineProfile& p : profiles) {
        for (const auto& [pos, val] : p.samples) {
            std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g\n",
                          p.horizontal ? "horizontal" : "vertical",
                          p.coordinate, pos, val);
            os << buf;
        }
    }
}

void write_rhs_csv(const std::string& path, const CVector& b) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << "index,re,im\n";
    char buf[96];
    for (std::size_t i = 0; i < b.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, b[i].real(),
                      b[i].imag());
        os << buf;
    }
}

}  // namespace cavac
