#include "ferdisc/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "ferdisc/errors.hpp"

namespace ferdisc {

ExampleFamily example_states(double xi) {
    if (!(xi >= 0.0 && xi < kExampleXiMax))
        throw ValidationError("example_states: xi must lie in [0, 1 - sqrt(2)/2)");
    const double inv_sqrt2 = std::sqrt(0.5);
    const double gamma = std::sqrt(1.0 - 2.0 * std::sqrt(2.0) * xi - 2.0 * xi * xi);
    const double alpha = inv_sqrt2 + xi;

    const ModePartition part = make_partition(1, 1);
    ExampleFamily fam;
    fam.gamma = gamma;
    fam.psi = make_state(part, {{"00", inv_sqrt2}, {"11", inv_sqrt2}});
    fam.phi = make_state(part, {{"00", alpha}, {"11", gamma * inv_sqrt2}});
    fam.p0 = (gamma + std::sqrt(2.0) * gamma * xi) / (1.0 + gamma + std::sqrt(2.0) * gamma * xi);
    return fam;
}

DeltaOperator perturbed_delta(const FockVector& psi, const FockVector& phi, double p0,
                              double epsilon) {
    const double p = p0 + epsilon;
    if (!(p > 0.0 && p < 1.0))
        throw ValidationError("perturbed_delta: perturbed prior leaves (0, 1)");
    DeltaOperator d = delta(make_instance(psi, phi, p));
    // Delta(eps) - Delta(0) - eps (psi psi + phi phi) vanishes identically;
    // guard against a mismatched p0.
    const Mat d0 = delta(make_instance(psi, phi, p0)).matrix;
    const Mat shift = (density(psi) + density(phi)) * cplx(epsilon, 0.0);
    if ((d.matrix - d0 - shift).max_abs() > 1e-12)
        throw ValidationError("perturbed_delta: perturbation identity violated");
    return d;
}

namespace {

double stale_error(const FockVector& psi, const FockVector& phi, double p,
                   const GlobalPovm& povm0) {
    const double miss_psi = dot(psi.amplitudes, mat_vec(povm0.pi_phi, psi.amplitudes)).real();
    const double miss_phi = dot(phi.amplitudes, mat_vec(povm0.pi_psi, phi.amplitudes)).real();
    return p * miss_psi + (1.0 - p) * miss_phi;
}

GlobalPovm optimal_povm_at(const FockVector& psi, const FockVector& phi, double p0,
                           const SectorProjectors& proj) {
    const DeltaOperator d0 = delta(make_instance(psi, phi, p0));
    return compose_global(build_optimal_locc_protocol(d0, proj));
}

} // namespace

double delta_perr(const FockVector& psi, const FockVector& phi, double p0, double epsilon,
                  const SectorProjectors& proj, const GlobalPovm& povm0) {
    const DeltaOperator de = perturbed_delta(psi, phi, p0, epsilon);
    return stale_error(psi, phi, p0 + epsilon, povm0) - locc_error(de, proj);
}

double delta_perr(const FockVector& psi, const FockVector& phi, double p0, double epsilon,
                  const SectorProjectors& proj) {
    return delta_perr(psi, phi, p0, epsilon, proj, optimal_povm_at(psi, phi, p0, proj));
}

double delta_perr_prime(const FockVector& psi, const FockVector& phi, double p0, double epsilon,
                        const SectorProjectors& proj) {
    const DeltaOperator de = perturbed_delta(psi, phi, p0, epsilon);
    return locc_error(de, proj) - helstrom_error(de);
}

BoundConstants bound_constants(const FockVector& psi, const FockVector& phi, double p0,
                               double epsilon, const GlobalPovm& povm0) {
    const SectorProjectors proj = sector_projectors(psi.partition);
    const Mat pair_sum = density(psi) + density(phi);
    const Mat pinched = sector_pinch(pair_sum, proj);

    BoundConstants c;
    c.k = 0.5 * trace_norm_hermitian(pinched);
    c.kappa = 0.5 * trace_norm_hermitian(pair_sum - pinched);
    c.g = 0.5 * (pair_sum * (povm0.pi_phi - povm0.pi_psi)).trace().real();

    if (epsilon != 0.0) {
        // the perturbed-operator route must agree with the slope constant
        const Mat de = perturbed_delta(psi, phi, p0, epsilon).matrix;
        const Mat d0 = delta(make_instance(psi, phi, p0)).matrix;
        const double k_at_eps =
            0.5 * trace_norm_hermitian(sector_pinch(de, proj) - d0) / std::abs(epsilon);
        if (std::abs(k_at_eps - c.k) > 1e-8)
            throw ValidationError("bound_constants: k cross-check failed");
    }
    return c;
}

Fig1Grid fig1_grid(const std::vector<double>& xis, double eps_lo, double eps_hi,
                   std::size_t resolution) {
    if (xis.empty()) throw ValidationError("fig1_grid: empty xi ladder");
    if (resolution < 2) throw ValidationError("fig1_grid: need at least two epsilon samples");
    if (!(eps_lo < eps_hi)) throw ValidationError("fig1_grid: empty epsilon range");

    Fig1Grid grid;
    Fig1Checks& ck = grid.checks;
    ck.min_delta_perr = 0.0;
    ck.min_delta_perr_prime = 0.0;
    ck.worst_bound_slack = 1e300;
    ck.worst_prime_slack = 1e300;

    for (double xi : xis) {
        const ExampleFamily fam = example_states(xi);
        const SectorProjectors proj = sector_projectors(fam.psi.partition);
        const GlobalPovm povm0 = optimal_povm_at(fam.psi, fam.phi, fam.p0, proj);
        const BoundConstants bc = bound_constants(fam.psi, fam.phi, fam.p0, 0.0, povm0);

        double slope_plus = 0.0, slope_minus = 0.0;
        for (std::size_t i = 0; i < resolution; ++i) {
            // weighted endpoints so a symmetric range hits eps = 0 exactly
            const double w = static_cast<double>(i) / static_cast<double>(resolution - 1);
            const double eps = eps_lo * (1.0 - w) + eps_hi * w;

            PerturbationPoint pt;
            pt.xi = xi;
            pt.epsilon = eps;
            pt.p0 = fam.p0;
            pt.delta_perr = delta_perr(fam.psi, fam.phi, fam.p0, eps, proj, povm0);
            pt.delta_perr_prime = delta_perr_prime(fam.psi, fam.phi, fam.p0, eps, proj);
            pt.k = bc.k;
            pt.g = bc.g;
            pt.kappa = bc.kappa;
            grid.points.push_back(pt);

            if (eps == 0.0)
                ck.max_abs_at_eps0 = std::max(ck.max_abs_at_eps0, std::abs(pt.delta_perr));
            ck.min_delta_perr = std::min(ck.min_delta_perr, pt.delta_perr);
            ck.min_delta_perr_prime = std::min(ck.min_delta_perr_prime, pt.delta_perr_prime);
            const double slack = bc.k * std::abs(eps) + bc.g * eps - pt.delta_perr;
            ck.worst_bound_slack = std::min(ck.worst_bound_slack, slack);
            ck.worst_prime_slack =
                std::min(ck.worst_prime_slack, bc.kappa * std::abs(eps) - pt.delta_perr_prime);
            if (eps > 0.0) slope_plus = std::max(slope_plus, pt.delta_perr / eps);
            if (eps < 0.0) slope_minus = std::max(slope_minus, pt.delta_perr / -eps);
        }
        ck.xi_ladder.push_back(xi);
        ck.corner_slope_plus.push_back(slope_plus);
        ck.corner_slope_minus.push_back(slope_minus);
    }

    ck.zero_line_ok = ck.max_abs_at_eps0 <= 1e-12;
    ck.nonnegative_ok = ck.min_delta_perr >= -1e-10 && ck.min_delta_perr_prime >= -1e-10;
    ck.bounds_ok = ck.worst_bound_slack >= -1e-10 && ck.worst_prime_slack >= -1e-10;

    ck.corner_monotone_ok = true;
    for (std::size_t i = 0; i + 1 < ck.xi_ladder.size(); ++i) {
        if (ck.xi_ladder[i + 1] >= ck.xi_ladder[i]) {
            ck.corner_monotone_ok = false; // not a descending ladder
            break;
        }
        if (ck.corner_slope_plus[i + 1] < ck.corner_slope_plus[i] - 1e-12) {
            ck.corner_monotone_ok = false;
            break;
        }
    }
    return grid;
}

namespace {

std::string sig12(double x) {
    char buf[64];
    const int n = std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::string(buf, static_cast<std::size_t>(n));
}

} // namespace

void write_grid_csv(std::ostream& out, const std::vector<PerturbationPoint>& points) {
    out << "xi,epsilon,p0,delta_perr,delta_perr_prime,k,g,kappa\n";
    for (const PerturbationPoint& p : points)
        out << sig12(p.xi) << ',' << sig12(p.epsilon) << ',' << sig12(p.p0) << ','
            << sig12(p.delta_perr) << ',' << sig12(p.delta_perr_prime) << ',' << sig12(p.k) << ','
            << sig12(p.g) << ',' << sig12(p.kappa) << '\n';
}

void emit_gnuplot_script(std::ostream& out, const std::string& csv_path) {
    out << "set datafile separator ','\n"
        << "set xlabel 'epsilon'\n"
        << "set ylabel 'xi'\n"
        << "set zlabel 'delta P_err'\n"
        << "set dgrid3d 41,41\n"
        << "set hidden3d\n"
        << "splot '" << csv_path << "' every ::1 using 2:1:4 with lines title 'delta P_err'\n";
}

} // namespace ferdisc
