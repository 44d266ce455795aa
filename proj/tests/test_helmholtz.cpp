#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "cavac/helmholtz.hpp"
#include "cavac/krylov.hpp"

using namespace cavac;

namespace {

constexpr double kPi = std::numbers::pi;

CVector solve_tight(const HelmholtzProblem& p) {
    SolverOptions opts;
    opts.tol = 1e-12;
    opts.max_iter = 50000;
    SolveResult r = bicgstab(p.A, p.b, jacobi(p.A), opts);
    REQUIRE(r.report.converged);
    return r.x;
}

double rel_l2_error(const CVector& got, const CVector& want) {
    CVector diff = got;
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= want[i];
    return norm2(diff) / norm2(want);
}

}  // namespace

TEST_CASE("build_grid node counts") {
    CavityGrid small = build_grid(1.0, 1.0, 0.25, 0.3, 0.7);
    CHECK(small.nx == 3);
    CHECK(small.ny == 3);

    CavityGrid coarse = build_grid(2.4, 1.2, 0.133425, 0.4, 0.65);
    CHECK(coarse.nx == 17);
    CHECK(coarse.ny == 8);
    CHECK(coarse.size() == 136);
}

TEST_CASE("roof span covers 0.6 m on the default cavity") {
    CavityGrid g = build_grid(2.4, 1.2, 0.05, 0.4, 0.65);
    const double span = static_cast<double>(g.roof_size()) * g.h;
    CHECK(std::abs(span - 0.6) <= g.h);
    CHECK(g.x_of(g.roof_begin) >= 0.4 * 2.4 - 1e-9);
    CHECK(g.x_of(g.roof_end - 1) <= 0.65 * 2.4 + 1e-9);
}

TEST_CASE("build_grid rejects bad input") {
    CHECK_THROWS_AS(build_grid(1.0, 1.0, 0.5, 0.3, 0.7),
                    std::invalid_argument);  // fewer than 3 interior nodes
    CHECK_THROWS_AS(build_grid(1.0, 1.0, 0.25, 0.7, 0.3),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_grid(-1.0, 1.0, 0.25, 0.3, 0.7),
                    std::invalid_argument);
}

TEST_CASE("assemble stencil coefficients") {
    CavityGrid g = build_grid(1.0, 1.0, 0.125, 0.4, 0.6);  // 7 x 7 interior
    const double omega = 3.0, c = 2.0;
    const double k2 = c * c / (g.h * g.h);
    HelmholtzProblem p = assemble(g, omega, c, CVector(g.roof_size()));

    const std::size_t row = g.node(3, 3);  // fully interior
    std::size_t nnz_row = p.A.row_offsets[row + 1] - p.A.row_offsets[row];
    CHECK(nnz_row == 5);
    for (std::size_t k = p.A.row_offsets[row]; k < p.A.row_offsets[row + 1];
         ++k) {
        if (p.A.col_indices[k] == row) {
            CHECK(p.A.values[k].real() ==
                  doctest::Approx(4.0 * k2 - omega * omega).epsilon(1e-14));
            CHECK(p.A.values[k].imag() == 0.0);
        } else
            CHECK(p.A.values[k].real() == doctest::Approx(-k2).epsilon(1e-14));
    }
}

TEST_CASE("every fully interior row has exactly 5 nonzeros") {
    CavityGrid g = build_grid(2.4, 1.2, 0.1, 0.4, 0.65);
    HelmholtzProblem p = assemble(g, 10.0, 340.0, CVector(g.roof_size()));
    for (std::size_t iy = 1; iy + 1 < g.ny; ++iy)
        for (std::size_t ix = 1; ix + 1 < g.nx; ++ix) {
            const std::size_t row = g.node(ix, iy);
            CHECK(p.A.row_offsets[row + 1] - p.A.row_offsets[row] == 5);
        }
}

TEST_CASE("dirichlet length mismatch") {
    CavityGrid g = build_grid(1.0, 1.0, 0.125, 0.4, 0.6);
    CHECK_THROWS_AS(assemble(g, 1.0, 1.0, CVector(g.roof_size() + 1)),
                    std::invalid_argument);
}

TEST_CASE("zero dirichlet gives the zero solution") {
    CavityGrid g = build_grid(2.4, 1.2, 0.1, 0.4, 0.65);
    HelmholtzProblem p =
        assemble(g, 2.0 * kPi * 13.0, 340.0, CVector(g.roof_size()));
    CHECK(norm2(p.b) == 0.0);
    SolverOptions opts;
    SolveResult r = bicgstab(p.A, p.b, jacobi(p.A), opts);
    CHECK(norm2(r.x) <= 1e-12);
}

TEST_CASE("solution is linear in the dirichlet data") {
    CavityGrid g = build_grid(2.4, 1.2, 0.1, 0.4, 0.65);
    CVector data(g.roof_size());
    for (std::size_t i = 0; i < data.size(); ++i)
        data[i] = Complex(1.0 + 0.2 * double(i), -0.4);
    const Complex alpha(2.0, 1.0);
    CVector scaled = data;
    scale_inplace(alpha, scaled);

    CVector x1 = solve_tight(assemble(g, 2.0 * kPi * 13.0, 340.0, data));
    CVector x2 = solve_tight(assemble(g, 2.0 * kPi * 13.0, 340.0, scaled));
    scale_inplace(alpha, x1);
    CHECK(rel_l2_error(x2, x1) <= 1e-10);
}

TEST_CASE("real operator keeps a real dirichlet solve real") {
    CavityGrid g = build_grid(2.4, 1.2, 0.1, 0.4, 0.65);
    CVector data(g.roof_size(), Complex(1.0));
    CVector x = solve_tight(assemble(g, 2.0 * kPi * 13.0, 340.0, data));
    double imag2 = 0.0;
    for (const Complex& z : x) imag2 += z.imag() * z.imag();
    CHECK(std::sqrt(imag2) <= 1e-10 * norm2(x));
}

TEST_CASE("wall admittance makes the operator genuinely complex") {
    CavityGrid g =
        build_grid(2.4, 1.2, 0.1, 0.4, 0.65, Complex(0.01, 0.0));
    HelmholtzProblem p =
        assemble(g, 2.0 * kPi * 13.0, 340.0, CVector(g.roof_size()));
    double imag_mass = 0.0;
    for (const Complex& v : p.A.values) imag_mass += std::abs(v.imag());
    CHECK(imag_mass > 0.0);
}

TEST_CASE("manufactured problem rejects resonant omega and bad modes") {
    CavityGrid g = build_grid(1.0, 1.0, 0.125, 0.4, 0.6);
    const double c = 1.0;
    const double omega_res = c * kPi * std::sqrt(2.0);  // (1,1) eigenvalue
    CHECK_THROWS_AS(manufactured_problem(g, 1, 1, omega_res, c),
                    std::invalid_argument);
    CHECK_THROWS_AS(manufactured_problem(g, 0, 1, 1.0, c),
                    std::invalid_argument);
}

TEST_CASE("manufactured (1,1) Poisson oracle converges at order 2") {
    double e_coarse = 0.0, e_fine = 0.0;
    {
        ManufacturedProblem mp = manufactured_problem(
            build_grid(2.4, 1.2, 0.1, 0.4, 0.65), 1, 1, 0.0, 340.0);
        e_coarse = rel_l2_error(solve_tight(mp.problem), mp.exact);
    }
    {
        ManufacturedProblem mp = manufactured_problem(
            build_grid(2.4, 1.2, 0.05, 0.4, 0.65), 1, 1, 0.0, 340.0);
        e_fine = rel_l2_error(solve_tight(mp.problem), mp.exact);
    }
    const double ratio = e_coarse / e_fine;
    CHECK(ratio >= 3.6);
    CHECK(ratio <= 4.4);
}

TEST_CASE("manufactured (2,1) off-resonance converges at order 2") {
    // omega midway between the (2,1) and (2,2) eigenfrequencies
    const double c = 340.0, W = 2.4, H = 1.2;
    const double w21 = c * kPi * std::sqrt(4.0 / (W * W) + 1.0 / (H * H));
    const double w22 = c * kPi * std::sqrt(4.0 / (W * W) + 4.0 / (H * H));
    const double omega = 0.5 * (w21 + w22);
    double e_coarse = 0.0, e_fine = 0.0;
    {
        ManufacturedProblem mp = manufactured_problem(
            build_grid(W, H, 0.1, 0.4, 0.65), 2, 1, omega, c);
        e_coarse = rel_l2_error(solve_tight(mp.problem), mp.exact);
    }
    {
        ManufacturedProblem mp = manufactured_problem(
            build_grid(W, H, 0.05, 0.4, 0.65), 2, 1, omega, c);
        e_fine = rel_l2_error(solve_tight(mp.problem), mp.exact);
    }
    const double ratio = e_coarse / e_fine;
    CHECK(ratio >= 3.6);
    CHECK(ratio <= 4.4);
}

TEST_CASE("dirichlet_from_spectrum") {
    std::vector<Spectrum> zeros(4, Spectrum{CVector(8, Complex(0.0)), 1.0});
    for (const Complex& z : dirichlet_from_spectrum(zeros, 3))
        CHECK(z == Complex(0.0));

    // per-node phase ramp is preserved
    std::vector<Spectrum> ramp;
    for (std::size_t j = 0; j < 5; ++j) {
        Spectrum s{CVector(8, Complex(0.0)), 1.0};
        const double phase = 0.4 * double(j);
        s.bins[2] = std::polar(3.0, phase);
        ramp.push_back(std::move(s));
    }
    CVector d = dirichlet_from_spectrum(ramp, 2);
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(std::abs(d[j]) == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(std::arg(d[j]) == doctest::Approx(0.4 * double(j)).epsilon(1e-14));
    }

    CHECK_THROWS_AS(dirichlet_from_spectrum(ramp, 99), std::invalid_argument);
    CHECK_THROWS_AS(dirichlet_from_spectrum({}, 0), std::invalid_argument);
}

TEST_CASE("sample_lines zero field and validation") {
    CavityGrid g = build_grid(2.4, 1.2, 0.1, 0.4, 0.65);
    HelmholtzProblem p = assemble(g, 10.0, 340.0, CVector(g.roof_size()));
    CVector zero(g.size(), Complex(0.0));
    std::vector<LineProfile> profs =
        sample_lines(p, zero, {{true, 0.6}, {false, 1.2}});
    REQUIRE(profs.size() == 2);
    for (const LineProfile& lp : profs)
        for (const auto& [pos, v] : lp.samples) CHECK(v == 0.0);

    CHECK_THROWS_AS(sample_lines(p, zero, {{true, 5.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_lines(p, CVector(3), {{true, 0.6}}),
                    std::invalid_argument);
}

TEST_CASE("sample_lines reproduces the (1,1) mode midline profile") {
    CavityGrid g = build_grid(2.4, 1.2, 0.05, 0.4, 0.65);
    ManufacturedProblem mp = manufactured_problem(g, 1, 1, 0.0, 340.0);
    CVector x = solve_tight(mp.problem);
    std::vector<LineProfile> profs = sample_lines(mp.problem, x, {{true, 0.6}});
    REQUIRE(profs.size() == 1);
    const auto& samples = profs[0].samples;

    // peak within one spacing of the centre, profile symmetric-ish
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (samples[i].second > samples[argmax].second) argmax = i;
    CHECK(std::abs(samples[argmax].first - 1.2) <= g.h + 1e-12);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double expect = std::abs(std::sin(kPi * samples[i].first / 2.4) *
                                       std::sin(kPi * 0.6 / 1.2));
        CHECK(samples[i].second == doctest::Approx(expect).epsilon(0.01));
    }
}

TEST_CASE("driven field decays away from the roof in the static limit") {
    // omega = 0 keeps the operator elliptic, so the maximum principle
    // pins the largest magnitude at the driven roof segment
    CavityGrid g = build_grid(2.4, 1.2, 0.05, 0.4, 0.65);
    CVector data(g.roof_size(), Complex(1.0));
    HelmholtzProblem p = assemble(g, 0.0, 340.0, data);
    CVector x = solve_tight(p);
    std::vector<LineProfile> profs = sample_lines(p, x, {{false, 1.2}});
    const auto& s = profs[0].samples;  // vertical line through the roof span
    CHECK(s.front().second <= s.back().second);  // deepest <= nearest roof
    for (const auto& [pos, mag] : s) CHECK(mag <= 1.0 + 1e-8);
}

TEST_CASE("profiles and rhs csv headers") {
    CavityGrid g = build_grid(2.4, 1.2, 0.1, 0.4, 0.65);
    HelmholtzProblem p = assemble(g, 10.0, 340.0, CVector(g.roof_size()));
    const auto tmp = std::filesystem::temp_directory_path();

    const std::string ppath = (tmp / "cavac_profiles_test.csv").string();
    write_profiles_csv(ppath,
                       sample_lines(p, CVector(g.size()), {{true, 0.6}}));
    std::ifstream pis(ppath);
    std::string line;
    std::getline(pis, line);
    CHECK(line == "orientation,coordinate,position,abs_psi");
    std::getline(pis, line);
    CHECK(line.substr(0, 11) == "horizontal,");

    const std::string rpath = (tmp / "cavac_rhs_test.csv").string();
    write_rhs_csv(rpath, p.b);
    std::ifstream ris(rpath);
    std::getline(ris, line);
    CHECK(line == "index,re,im");

    std::filesystem::remove(ppath);
    std::filesystem::remove(rpath);
}
