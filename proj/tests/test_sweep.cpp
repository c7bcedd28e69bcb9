#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ferdisc/errors.hpp"
#include "ferdisc/sweep.hpp"

using namespace ferdisc;

namespace {

// Closed-form gap for the example family, derived by hand from the two
// sector weights of Delta(eps). With
//   dE = p0/2 - q0 alpha^2,  dO = p0/2 - q0 gamma^2/2  (dE < 0 < dO),
//   aE = 1/2 + alpha^2,      aO = 1/2 + gamma^2/2,
// the stale-POVM gap is zero until a sector weight changes sign at
// eps* = -dE/aE > 0 or eps** = -dO/aO < 0, and grows linearly beyond:
//   gap(eps) = aE (eps - eps*)   for eps > eps*
//   gap(eps) = aO (eps** - eps)  for eps < eps**
struct ClosedForm {
    double p0, d_e, d_o, a_e, a_o, eps_star, eps_star2, g, kappa;

    explicit ClosedForm(double xi) {
        const double alpha = std::sqrt(0.5) + xi;
        const double gamma2 = 1.0 - 2.0 * std::sqrt(2.0) * xi - 2.0 * xi * xi;
        const double gamma = std::sqrt(gamma2);
        p0 = (gamma + std::sqrt(2.0) * gamma * xi) / (1.0 + gamma + std::sqrt(2.0) * gamma * xi);
        const double q0 = 1.0 - p0;
        d_e = p0 / 2.0 - q0 * alpha * alpha;
        d_o = p0 / 2.0 - q0 * gamma2 / 2.0;
        a_e = 0.5 + alpha * alpha;
        a_o = 0.5 + gamma2 / 2.0;
        eps_star = -d_e / a_e;
        eps_star2 = -d_o / a_o;
        g = (1.0 - gamma2) / 2.0;
        kappa = 0.5 + alpha * gamma * std::sqrt(0.5);
    }

    double gap(double eps) const {
        if (eps > eps_star) return a_e * (eps - eps_star);
        if (eps < eps_star2) return a_o * (eps_star2 - eps);
        return 0.0;
    }
};

} // namespace

TEST_CASE("example family degenerates to equal states at xi = 0") {
    const ExampleFamily fam = example_states(0.0);
    CHECK(norm(sub(fam.phi.amplitudes, fam.psi.amplitudes)) < 1e-14);
    CHECK(fam.p0 == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("example family is normalized and critically tuned") {
    for (double xi : {0.02, 0.05, 0.1, 0.2, 0.28}) {
        const ExampleFamily fam = example_states(xi);
        CHECK(std::abs(fam.phi.norm() - 1.0) < 1e-12);
        CHECK(std::abs(fam.psi.norm() - 1.0) < 1e-12);

        const DeltaOperator d0 = delta(make_instance(fam.psi, fam.phi, fam.p0));
        const SectorProjectors proj = sector_projectors(fam.psi.partition);
        CHECK(is_locc_optimal(d0, proj));

        // the library's critical prior agrees with the closed form
        const CriticalPrior cp = critical_prior(fam.psi, fam.phi);
        REQUIRE(cp.kind == CriticalPrior::Kind::Unique);
        CHECK(cp.p == doctest::Approx(fam.p0).epsilon(1e-10));
    }
    CHECK_THROWS_AS(example_states(-0.01), ValidationError);
    CHECK_THROWS_AS(example_states(0.3), ValidationError);
    CHECK_THROWS_AS(example_states(kExampleXiMax), ValidationError);
}

TEST_CASE("perturbed Delta obeys its affine identity") {
    const ExampleFamily fam = example_states(0.1);
    const Mat d0 = perturbed_delta(fam.psi, fam.phi, fam.p0, 0.0).matrix;
    CHECK((d0 - delta(make_instance(fam.psi, fam.phi, fam.p0)).matrix).max_abs() == 0.0);

    // eps = q0 removes phi entirely
    const double q0 = 1.0 - fam.p0;
    const Mat dq = perturbed_delta(fam.psi, fam.phi, fam.p0, q0 - 1e-12).matrix;
    CHECK((dq - density(fam.psi)).max_abs() < 1e-9);

    for (double eps : {-0.3, 0.17, 0.05}) {
        const Mat de = perturbed_delta(fam.psi, fam.phi, fam.p0, eps).matrix;
        const Mat shift = (density(fam.psi) + density(fam.phi)) * cplx(eps, 0.0);
        CHECK((de - d0 - shift).max_abs() < 1e-12);
    }
    CHECK_THROWS_AS(perturbed_delta(fam.psi, fam.phi, fam.p0, 1.0), ValidationError);
    CHECK_THROWS_AS(perturbed_delta(fam.psi, fam.phi, fam.p0, -fam.p0), ValidationError);
}

TEST_CASE("stale-POVM gap matches the hand-derived piecewise form") {
    for (double xi : {0.05, 0.1}) {
        const ExampleFamily fam = example_states(xi);
        const ClosedForm cf(xi);
        const SectorProjectors proj = sector_projectors(fam.psi.partition);
        CHECK(cf.p0 == doctest::Approx(fam.p0).epsilon(1e-13));

        CHECK(std::abs(delta_perr(fam.psi, fam.phi, fam.p0, 0.0, proj)) < 1e-14);
        for (double eps : {-0.09, -0.05, -0.01, 0.01, 0.05, 0.09}) {
            const double got = delta_perr(fam.psi, fam.phi, fam.p0, eps, proj);
            CHECK(got == doctest::Approx(cf.gap(eps)).epsilon(1e-9).scale(1.0));
            CHECK(got >= -1e-12);
        }
        // the corner is asymmetric
        const double plus = delta_perr(fam.psi, fam.phi, fam.p0, 0.09, proj);
        const double minus = delta_perr(fam.psi, fam.phi, fam.p0, -0.09, proj);
        CHECK(std::abs(plus - minus) > 1e-3);
    }
}

TEST_CASE("unassisted-vs-assisted gap stays inside kappa |eps|") {
    const ExampleFamily fam = example_states(0.1);
    const ClosedForm cf(0.1);
    const SectorProjectors proj = sector_projectors(fam.psi.partition);
    CHECK(std::abs(delta_perr_prime(fam.psi, fam.phi, fam.p0, 0.0, proj)) < 1e-12);
    for (double eps : {-0.09, -0.02, 0.02, 0.05, 0.09}) {
        const double gap = delta_perr_prime(fam.psi, fam.phi, fam.p0, eps, proj);
        CHECK(gap >= -1e-12);
        CHECK(gap <= cf.kappa * std::abs(eps) + 1e-10);
    }
}

TEST_CASE("bound constants match their closed forms on the family") {
    for (double xi : {0.02, 0.1, 0.2}) {
        const ExampleFamily fam = example_states(xi);
        const ClosedForm cf(xi);
        const SectorProjectors proj = sector_projectors(fam.psi.partition);
        const DeltaOperator d0 = delta(make_instance(fam.psi, fam.phi, fam.p0));
        const GlobalPovm povm = compose_global(build_optimal_locc_protocol(d0, proj));
        const BoundConstants bc = bound_constants(fam.psi, fam.phi, fam.p0, 0.05, povm);
        // the pinched pair of projectors is PSD with trace 2, so k = 1
        CHECK(bc.k == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(bc.g == doctest::Approx(cf.g).epsilon(1e-10));
        CHECK(bc.kappa == doctest::Approx(cf.kappa).epsilon(1e-10));
    }
}

TEST_CASE("pinching a commuting Delta changes nothing") {
    const ExampleFamily fam = example_states(0.1);
    const SectorProjectors proj = sector_projectors(fam.psi.partition);
    const Mat d0 = delta(make_instance(fam.psi, fam.phi, fam.p0)).matrix;
    CHECK((sector_pinch(d0, proj) - d0).max_abs() < 1e-12);
}

TEST_CASE("grid over the standard ladder passes all checks") {
    const Fig1Grid grid = fig1_grid({0.2, 0.1, 0.05, 0.02}, -0.1, 0.1, 41);
    REQUIRE(grid.points.size() == 4 * 41);
    const Fig1Checks& ck = grid.checks;
    CHECK(ck.zero_line_ok);
    CHECK(ck.max_abs_at_eps0 <= 1e-13);
    CHECK(ck.nonnegative_ok);
    CHECK(ck.bounds_ok);
    CHECK(ck.corner_monotone_ok);
    REQUIRE(ck.corner_slope_plus.size() == 4);
    // the widest family member never leaves the flat region on this range
    CHECK(ck.corner_slope_plus[0] == doctest::Approx(0.0));
    CHECK(ck.corner_slope_plus[3] > ck.corner_slope_plus[1]);

    // epsilon = 0 is hit exactly by the symmetric linspace
    int zeros = 0;
    for (const PerturbationPoint& pt : grid.points)
        if (pt.epsilon == 0.0) ++zeros;
    CHECK(zeros == 4);
}

TEST_CASE("grid validation errors") {
    CHECK_THROWS_AS(fig1_grid({}, -0.1, 0.1, 11), ValidationError);
    CHECK_THROWS_AS(fig1_grid({0.1}, -0.1, 0.1, 1), ValidationError);
    CHECK_THROWS_AS(fig1_grid({0.1}, 0.1, -0.1, 11), ValidationError);
    CHECK_THROWS_AS(fig1_grid({0.5}, -0.1, 0.1, 11), ValidationError); // xi out of range
}

TEST_CASE("csv and plot emission") {
    const Fig1Grid grid = fig1_grid({0.1}, -0.02, 0.02, 5);
    std::ostringstream csv;
    write_grid_csv(csv, grid.points);
    const std::string text = csv.str();
    CHECK(text.rfind("xi,epsilon,p0,delta_perr,delta_perr_prime,k,g,kappa\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines == 6);

    std::ostringstream plot;
    emit_gnuplot_script(plot, "grid.csv");
    CHECK(plot.str().find("splot") != std::string::npos);
    CHECK(plot.str().find("grid.csv") != std::string::npos);
}
