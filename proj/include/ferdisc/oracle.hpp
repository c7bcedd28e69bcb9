#pragma once

#include <cstdint>
#include <random>

#include "ferdisc/discrim.hpp"

namespace ferdisc {

/// A random effect with the separable block structure: S_E + S_O, PSD, and
/// S_E + S_O <= I after rescaling.
struct SepEffectSample {
    Mat s_E; // full-dimension, supported on the E indices only
    Mat s_O;
    double score = 0.0; // Tr[(S_E + S_O) Delta]
};

/// max Tr[Pi Delta] over Pi = Pi_E + Pi_O with 0 <= Pi <= I, computed from a
/// dense eigensolve of each sector block. This is a path independent of
/// locc_error: p - best_sep_value(d) == locc_error(d).
double best_sep_value(const DeltaOperator& d, const SectorProjectors& proj);

/// max Tr[Pi Delta] over all 0 <= Pi <= I (dense eigensolve of the full
/// matrix): p - unconstrained_best_value(d) == helstrom_error(d).
double unconstrained_best_value(const DeltaOperator& d);

SepEffectSample random_sep_effect(const DeltaOperator& d, const SectorProjectors& proj,
                                  std::mt19937_64& rng);

/// Best score over `trials` random block-structured effects. Never exceeds
/// best_sep_value(d) beyond numerical noise; used to falsify the closed form.
double random_sep_sample(const DeltaOperator& d, const SectorProjectors& proj,
                         std::uint64_t trials, std::uint64_t seed);

} // namespace ferdisc
