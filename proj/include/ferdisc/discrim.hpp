#pragma once

#include <optional>
#include <string>

#include "ferdisc/decomp.hpp"
#include "ferdisc/fock.hpp"

namespace ferdisc {

/// A pair of normalized states with a prior: psi occurs with probability
/// prior_p, phi with 1 - prior_p.
struct DiscriminationInstance {
    FockVector psi;
    FockVector phi;
    double prior_p = 0.5;

    double prior_q() const { return 1.0 - prior_p; }
};

DiscriminationInstance make_instance(FockVector psi, FockVector phi, double prior_p);

/// Delta = p |psi><psi| - q |phi><phi| with its two nonzero eigenpairs cached.
/// When the operator is rank deficient the missing eigenpair is (0, some unit
/// vector orthogonal to the other one).
struct DeltaOperator {
    ModePartition partition;
    Mat matrix;
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    Vec plus_vec;
    Vec minus_vec;
    bool rank_deficient = false;
    // cached inputs; the sector reductions need them
    FockVector psi;
    FockVector phi;
    double p = 0.5, q = 0.5;

    double trace_norm() const { return lambda_plus - lambda_minus; }
};

DeltaOperator delta(const DiscriminationInstance& inst);

/// Eigensystem of p u u^dag - q v v^dag on its span (u, v may be unnormalized
/// or zero). The two eigenvalues always straddle zero; a side with eigenvalue
/// zero comes back with an empty vector.
struct RankTwoEig {
    double lam_plus = 0.0;  // >= 0
    double lam_minus = 0.0; // <= 0
    Vec plus;
    Vec minus;

    double trace_norm() const { return lam_plus - lam_minus; }
};

RankTwoEig rank_two_eig(double p, const Vec& u, double q, const Vec& v);

/// 1/2 (1 - |Delta|_1), the unconstrained minimum error probability.
double helstrom_error(const DeltaOperator& d);

/// 1/2 (1 - |Delta_E + Delta_O|_1) with Delta_X = P_X Delta P_X; the minimum
/// over separable (hence over LOCC) protocols for even-sector states.
double locc_error(const DeltaOperator& d, const SectorProjectors& proj);

enum class VerdictTag {
    DifferentGlobalParity,
    ComplementaryComponents,
    SingleSubspace,
    EoOrthogonal,
    NotPerfectlyLocc,
};

std::string to_string(VerdictTag tag);

struct DiscriminabilityVerdict {
    VerdictTag tag = VerdictTag::NotPerfectlyLocc;
    cplx sigma_E{};
    cplx sigma_O{};
    bool psi_E_zero = false, psi_O_zero = false;
    bool phi_E_zero = false, phi_O_zero = false;
    bool odd_pair_mapped = false; // both inputs were odd; overlaps refer to the mapped pair

    bool perfect() const { return tag != VerdictTag::NotPerfectlyLocc; }
};

/// Case analysis for perfect discriminability of an orthogonal pair. The
/// verdict is perfect exactly when the E and O overlaps both vanish (or the
/// global parities differ).
DiscriminabilityVerdict classify_perfect(const FockVector& psi, const FockVector& phi,
                                         double tol = kDefaultTol);

struct OptimalityReport {
    bool commutator_test = false; // |[Delta, P_E]|_F small
    bool eigvec_test = false;     // <+|P_E|-> and <+|P_O|-> small
    bool difference_test = false; // <+|(P_E - P_O)|-> small
    double commutator_residual = 0.0;
    double eigvec_residual = 0.0;
    double difference_residual = 0.0;
    bool degenerate = false; // rank < 2: only the commutator test is meaningful
};

OptimalityReport optimality_report(const DeltaOperator& d, const SectorProjectors& proj,
                                   double tol = kDefaultTol);

/// True iff [Delta, P_E] = 0 up to tol, i.e. unassisted LOCC reaches the
/// Helstrom error.
bool is_locc_optimal(const DeltaOperator& d, const SectorProjectors& proj,
                     double tol = kDefaultTol);

struct CriticalPrior {
    enum class Kind { AllPriors, Unique, None } kind = Kind::None;
    double p = 0.0; // meaningful for Kind::Unique
};

/// The prior that makes unassisted LOCC optimal, when one exists: solves
/// [psi psi, P_E] = ((1-p)/p) [phi phi, P_E].
CriticalPrior critical_prior(const FockVector& psi, const FockVector& phi,
                             double tol = kDefaultTol);

/// psi (x) (a|00> + b|11>) with one ancilla mode appended to each party's
/// block. Reordering signs are folded into the amplitudes.
FockVector attach_ancilla(const FockVector& psi, cplx a, cplx b);

} // namespace ferdisc
