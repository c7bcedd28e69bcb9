#pragma once

#include <iosfwd>
#include <vector>

#include "ferdisc/protocol.hpp"

namespace ferdisc {

/// The two-mode example family: psi = (|00> + |11>)/sqrt(2),
/// phi = (1/sqrt(2) + xi)|00> + (gamma/sqrt(2))|11> with
/// gamma = sqrt(1 - 2 sqrt(2) xi - 2 xi^2), on a 1+1 partition. p0 is the
/// critical prior at which unassisted LOCC discrimination is optimal.
struct ExampleFamily {
    FockVector psi;
    FockVector phi;
    double p0 = 0.5;
    double gamma = 1.0;
};

inline constexpr double kExampleXiMax = 0.29289321881345248; // 1 - sqrt(2)/2

ExampleFamily example_states(double xi);

/// Delta at prior p0 + epsilon for the given pair.
DeltaOperator perturbed_delta(const FockVector& psi, const FockVector& phi, double p0,
                              double epsilon);

/// Error of the stale POVM (optimal at epsilon = 0) on the perturbed
/// instance, minus the LOCC-optimal error at the perturbed prior. Always
/// >= 0 up to numerical noise.
double delta_perr(const FockVector& psi, const FockVector& phi, double p0, double epsilon,
                  const SectorProjectors& proj, const GlobalPovm& povm0);

/// Convenience overload deriving the epsilon = 0 POVM internally.
double delta_perr(const FockVector& psi, const FockVector& phi, double p0, double epsilon,
                  const SectorProjectors& proj);

/// LOCC-optimal error minus the unconstrained (Helstrom) error at the
/// perturbed prior.
double delta_perr_prime(const FockVector& psi, const FockVector& phi, double p0, double epsilon,
                        const SectorProjectors& proj);

/// Slope constants of the perturbation bounds, all independent of epsilon:
///   delta_perr       <= k |eps| + g eps
///   delta_perr_prime <= kappa |eps|
/// k and kappa are half trace norms of the sector-pinched and off-sector
/// parts of psi psi + phi phi; g is the stale-POVM bias trace. Passing a
/// nonzero epsilon additionally cross-checks k against the perturbed-operator
/// route.
struct BoundConstants {
    double k = 0.0;
    double g = 0.0;
    double kappa = 0.0;
};

BoundConstants bound_constants(const FockVector& psi, const FockVector& phi, double p0,
                               double epsilon, const GlobalPovm& povm0);

struct PerturbationPoint {
    double xi = 0.0;
    double epsilon = 0.0;
    double p0 = 0.0;
    double delta_perr = 0.0;
    double delta_perr_prime = 0.0;
    double k = 0.0, g = 0.0, kappa = 0.0;
};

struct Fig1Checks {
    double max_abs_at_eps0 = 0.0;     // max |delta_perr| on the eps = 0 line
    double min_delta_perr = 0.0;      // most negative gap anywhere
    double min_delta_perr_prime = 0.0;
    double worst_bound_slack = 0.0;   // min of (k|e| + g e - dP); >= -1e-10 required
    double worst_prime_slack = 0.0;   // min of (kappa |e| - dP')
    std::vector<double> xi_ladder;            // as sampled, descending
    std::vector<double> corner_slope_plus;    // max dP/eps over eps > 0, per xi
    std::vector<double> corner_slope_minus;   // max dP/|eps| over eps < 0, per xi
    bool zero_line_ok = false;
    bool nonnegative_ok = false;
    bool bounds_ok = false;
    bool corner_monotone_ok = false; // positive-side slope grows as xi shrinks

    bool all_ok() const {
        return zero_line_ok && nonnegative_ok && bounds_ok && corner_monotone_ok;
    }
};

struct Fig1Grid {
    std::vector<PerturbationPoint> points; // ordered by (xi index, eps index)
    Fig1Checks checks;
};

/// Dense evaluation of the perturbation gaps over the example family.
/// xis is a descending ladder; epsilons run over a symmetric linspace that
/// hits 0 exactly when the range is symmetric.
Fig1Grid fig1_grid(const std::vector<double>& xis, double eps_lo, double eps_hi,
                   std::size_t resolution);

/// CSV with 12 significant digits and a fixed header.
void write_grid_csv(std::ostream& out, const std::vector<PerturbationPoint>& points);

/// Text of a gnuplot script that renders the delta_perr surface from the CSV.
void emit_gnuplot_script(std::ostream& out, const std::string& csv_path);

} // namespace ferdisc
