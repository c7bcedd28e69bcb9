#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ferdisc/discrim.hpp"

namespace ferdisc {

enum class Decision { Psi, Phi };

struct AliceOutcome {
    std::string label;
    Mat effect; // Alice-local, parity-block-diagonal
};

struct BobOutcome {
    Decision decision = Decision::Psi;
    Mat effect; // Bob-local, parity-block-diagonal
};

/// Two-round measurement tree: Alice measures, sends the outcome label, Bob
/// measures the POVM filed under that label and announces the decision.
/// Coin-flip branches are encoded as a pair of half-weight effects, one per
/// decision, which keeps every POVM exactly complete.
struct LoccProtocol {
    ModePartition partition;
    std::vector<AliceOutcome> alice_povm;
    std::map<std::string, std::vector<BobOutcome>> bob_povms;
    std::string construction;
};

struct SimulationReport {
    std::uint64_t shots = 0;
    std::uint64_t errors = 0;
    double empirical_error = 0.0;
    double std_err = 0.0;
    std::uint64_t seed = 0;
};

/// Zero-error protocol for a pair classified as perfectly discriminable:
/// local parity measurements where the case needs them, then Alice's rotated
/// basis and Bob's two-outcome discrimination. Verified to have zero analytic
/// error at build time.
LoccProtocol build_perfect_protocol(const DiscriminabilityVerdict& verdict, const FockVector& psi,
                                    const FockVector& phi, double tol = kDefaultTol);

/// Protocol measuring the eigenbases of the sector compressions Delta_E and
/// Delta_O; its analytic error equals locc_error(d).
LoccProtocol build_optimal_locc_protocol(const DeltaOperator& d, const SectorProjectors& proj,
                                         double tol = kDefaultTol);

/// Global two-outcome POVM {Pi_psi, Pi_phi} the tree composes to.
struct GlobalPovm {
    Mat pi_psi;
    Mat pi_phi;
};

GlobalPovm compose_global(const LoccProtocol& protocol);

/// p Tr[psi psi Pi_phi] + q Tr[phi phi Pi_psi].
double analytic_error(const LoccProtocol& protocol, const DiscriminationInstance& inst);

/// Checks PSD-ness, completeness and the local parity block structure of
/// every effect; throws ValidationError on violation.
void validate_protocol(const LoccProtocol& protocol, double tol = kDefaultTol);

/// Alice effect (x) Bob effect on the global space. Valid for parity-block-
/// diagonal local effects, for which the Jordan-Wigner strings cancel.
Mat local_to_global_effect(const ModePartition& partition, const Mat& alice, const Mat& bob);

/// Samples the true state by prior, Alice's outcome by the Born rule, then
/// Bob's outcome from the POVM selected by Alice's message. Deterministic for
/// a fixed seed.
SimulationReport simulate(const LoccProtocol& protocol, const DiscriminationInstance& inst,
                          std::uint64_t shots, std::uint64_t seed);

} // namespace ferdisc
