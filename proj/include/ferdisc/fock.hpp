#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ferdisc/linalg.hpp"

namespace ferdisc {

inline constexpr int kDefaultModeCap = 8;
inline constexpr double kAmplitudeTol = 1e-12;

enum class Parity { Even, Odd };

/// Bipartition of N Fermionic modes: Alice owns modes 0..n_alice-1 (low bits
/// of the basis index), Bob owns the rest. Jordan-Wigner strings follow this
/// fixed order.
struct ModePartition {
    int n_alice = 0;
    int n_bob = 0;

    int total_modes() const { return n_alice + n_bob; }
    std::size_t dim() const { return std::size_t{1} << total_modes(); }
    std::size_t alice_dim() const { return std::size_t{1} << n_alice; }
    std::size_t bob_dim() const { return std::size_t{1} << n_bob; }

    std::size_t alice_bits(std::size_t idx) const { return idx & (alice_dim() - 1); }
    std::size_t bob_bits(std::size_t idx) const { return idx >> n_alice; }
    std::size_t compose_index(std::size_t a, std::size_t b) const { return a | (b << n_alice); }

    bool operator==(const ModePartition&) const = default;
};

ModePartition make_partition(int n_alice, int n_bob, int mode_cap = kDefaultModeCap);

Parity parity_of_bits(std::size_t bits);

/// Occupation bitstring as text, mode 0 first ("0101" sets modes 1 and 3).
std::string bitstring_of(std::size_t idx, int n_modes);
std::size_t index_of_bitstring(const std::string& bits);

/// Complex amplitude vector over occupation bitstrings, confined to one
/// global parity sector by the superselection rule.
struct FockVector {
    ModePartition partition;
    Vec amplitudes;
    Parity sector = Parity::Even;

    double norm() const { return ferdisc::norm(amplitudes); }
    bool is_normalized(double tol = kAmplitudeTol) const;
};

/// Wraps raw amplitudes, inferring the sector and enforcing superselection.
FockVector fock_vector_from_amplitudes(const ModePartition& partition, Vec amplitudes);

enum class Normalize { No, Yes };

/// Builds a state from {bitstring -> amplitude}. Throws on mixed-parity
/// support or an (effectively) zero vector.
FockVector make_state(const ModePartition& partition, const std::map<std::string, cplx>& terms,
                      Normalize normalize = Normalize::No);

/// Jordan-Wigner matrix of the annihilation operator for mode i:
/// Z^i (x) sigma_minus (x) I^(N-i-1) in the fixed mode order.
Mat jw_mode_operator(const ModePartition& partition, int i);
Mat jw_mode_operator_dagger(const ModePartition& partition, int i);

/// Classification of a basis index inside the global parity structure.
enum class SectorClass : std::uint8_t {
    EE = 0,  // both local parities even (the E space)
    OO = 1,  // both local parities odd (the O space)
    Odd = 2, // global odd sector
};

struct SectorProjectors {
    ModePartition partition;
    std::vector<SectorClass> clazz;           // per basis index
    std::vector<std::size_t> even_indices;    // E plus O
    std::vector<std::size_t> ee_indices, oo_indices;

    Mat P_e() const;
    Mat P_o() const;
    Mat P_E() const;
    Mat P_O() const;
};

SectorProjectors sector_projectors(const ModePartition& partition);

/// P_E m P_E + P_O m P_O: zeroes every entry that connects different sector
/// classes or touches the odd sector.
Mat sector_pinch(const Mat& m, const SectorProjectors& proj);

/// Occupation flip on Bob's last mode (the Jordan-Wigner string signs are
/// applied). Unitary, swaps the global sector; this is the fixed map used to
/// reduce odd-sector pairs to even-sector ones.
FockVector flip_last_bob_mode(const FockVector& v);

Mat density(const FockVector& v); // |v><v|

} // namespace ferdisc
