#pragma once

#include <utility>
#include <vector>

#include "ferdisc/fock.hpp"

namespace ferdisc {

inline constexpr double kDefaultTol = 1e-10;

/// Unnormalized components of an even-sector vector on the E and O subspaces.
struct SectorSplit {
    FockVector psi_E;
    FockVector psi_O;
    double norm_E = 0.0;
    double norm_O = 0.0;
};

SectorSplit sector_split(const FockVector& psi);

/// (Sigma_E, Sigma_O) = (<psi_E|phi_E>, <psi_O|phi_O>); their sum is <psi|phi>.
std::pair<cplx, cplx> sector_overlaps(const FockVector& psi, const FockVector& phi);

/// Unitary V such that V C V^dag has (numerically) zero diagonal, for traceless
/// square C. Repeated two-index rotations average the largest-magnitude
/// diagonal entry against the most opposed one until the diagonal is gone;
/// ties break toward the lowest index. Throws ConvergenceError after 10*d^2
/// rotations. scale_hint widens the reference scale for the trace check and
/// the convergence target (used when C comes from vectors of known norm).
Mat zero_diagonal_basis(const Mat& c, double tol = kDefaultTol, double scale_hint = 0.0);

/// Joint local decomposition of two orthogonal vectors supported on one of
/// the E/O subspaces: psi = sum_i |i>_A |eta_i>_B, phi = sum_i |i>_A |nu_i>_B
/// with <eta_i|nu_i> = 0 for every i. Alice's basis vectors have definite
/// local parity.
struct WalgateDecomposition {
    ModePartition partition;
    SectorClass subspace = SectorClass::EE;
    std::vector<Vec> alice_basis; // orthonormal, Alice-local
    std::vector<Vec> bob_eta;     // Bob-local, unnormalized
    std::vector<Vec> bob_nu;
};

WalgateDecomposition walgate_decompose(const FockVector& psi, const FockVector& phi,
                                       double tol = kDefaultTol);

/// Local product vector |a>_A |b>_B as a global amplitude vector (the fixed
/// Alice-first mode order makes this a plain product, no extra signs).
Vec compose_local(const ModePartition& partition, const Vec& alice, const Vec& bob);

/// Sum_i |i>_A |eta_i>_B over the decomposition rows, for reconstruction checks.
Vec walgate_reconstruct(const WalgateDecomposition& d, bool use_nu);

} // namespace ferdisc
