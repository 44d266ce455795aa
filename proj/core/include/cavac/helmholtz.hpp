#ifndef CAVAC_HELMHOLTZ_HPP
#define CAVAC_HELMHOLTZ_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cavac/numkit.hpp"
#include "cavac/spectra.hpp"

namespace cavac {

/// Rectangular cavity discretized on a uniform grid. Unknowns are the
/// nx*ny interior nodes; the sun-roof segment on the top boundary
/// carries Dirichlet data, the remaining walls are rigid (homogeneous
/// Neumann) unless a nonzero wall admittance is set.
struct CavityGrid {
    double width = 2.4;
    double height = 1.2;
    double h = 0.05;
    std::size_t nx = 0;  // interior node counts
    std::size_t ny = 0;
    std::size_t roof_begin = 0;  // interior column indices on the top edge
    std::size_t roof_end = 0;    // half-open
    Complex wall_admittance{0.0, 0.0};

    std::size_t size() const { return nx * ny; }
    std::size_t node(std::size_t ix, std::size_t iy) const {
        return iy * nx + ix;
    }
    double x_of(std::size_t ix) const {
        return static_cast<double>(ix + 1) * h;
    }
    double y_of(std::size_t iy) const {
        return static_cast<double>(iy + 1) * h;
    }
    std::size_t roof_size() const { return roof_end - roof_begin; }
};

struct HelmholtzProblem {
    CavityGrid grid;
    double omega = 0.0;  // rad/s
    double c = 340.0;    // m/s
    CVector dirichlet;   // values on roof span
    CsrMatrix A;
    CVector b;
};

struct LineSpec {
    bool horizontal;    // otherwise vertical
    double coordinate;  // y for horizontal lines, x for vertical ones
};

struct LineProfile {
    bool horizontal;
    double coordinate;
    std::vector<std::pair<double, double>> samples;  // (position, |psi|)
};

/// Grid constructor; h must divide width and height to within 1e-9 and
/// leave at least 3 interior nodes per direction. The roof span covers
/// [start, end]*width on the top boundary.
CavityGrid build_grid(double width, double height, double h,
                      double roof_fraction_start, double roof_fraction_end,
                      Complex wall_admittance = Complex(0.0));

/// Discrete -omega^2 psi - c^2 lap(psi) = 0 with the 5-point Laplacian;
/// Dirichlet data eliminated into b, rigid walls via mirror ghosts.
HelmholtzProblem assemble(const CavityGrid& grid, double omega, double c,
                          const CVector& dirichlet);

struct ManufacturedProblem {
    HelmholtzProblem problem;
    CVector exact;
};

/// Verification oracle: exact field sin(m pi x / W) sin(n pi y / H) with
/// zero Dirichlet data on all boundaries and the matching source term.
/// Throws when omega sits on the (m, n) eigenvalue.
ManufacturedProblem manufactured_problem(const CavityGrid& grid,
                                         std::size_t m, std::size_t n,
                                         double omega, double c);

/// Complex Fourier coefficient at the given bin of each roof-node
/// spectrum, magnitude and phase retained.
CVector dirichlet_from_spectrum(const std::vector<Spectrum>& roof_spectra,
                                std::size_t bin);

/// |psi| sampled by bilinear interpolation at grid-aligned stations.
std::vector<LineProfile> sample_lines(const HelmholtzProblem& problem,
                                      const CVector& solution,
                                      const std::vector<LineSpec>& lines);

void write_profiles_csv(const std::string& path,
                        const std::vector<LineProfile>& profiles);
void write_rhs_csv(const std::string& path, const CVector& b);

}  // namespace cavac

#endif
