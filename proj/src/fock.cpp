#include "ferdisc/fock.hpp"

#include <bit>
#include <cmath>

#include "ferdisc/errors.hpp"

namespace ferdisc {

ModePartition make_partition(int n_alice, int n_bob, int mode_cap) {
    if (n_alice < 1 || n_bob < 1)
        throw ValidationError("partition: each party needs at least one mode");
    if (n_alice + n_bob > mode_cap)
        throw ValidationError("partition: " + std::to_string(n_alice + n_bob) +
                              " modes exceed the cap of " + std::to_string(mode_cap));
    return ModePartition{n_alice, n_bob};
}

Parity parity_of_bits(std::size_t bits) {
    return (std::popcount(bits) % 2 == 0) ? Parity::Even : Parity::Odd;
}

std::string bitstring_of(std::size_t idx, int n_modes) {
    std::string s(static_cast<std::size_t>(n_modes), '0');
    for (int i = 0; i < n_modes; ++i)
        if (idx & (std::size_t{1} << i)) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

std::size_t index_of_bitstring(const std::string& bits) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
            idx |= std::size_t{1} << i;
        else if (bits[i] != '0')
            throw ValidationError("bitstring contains a character other than 0/1: " + bits);
    }
    return idx;
}

bool FockVector::is_normalized(double tol) const {
    return std::abs(norm2(amplitudes) - 1.0) <= tol;
}

FockVector fock_vector_from_amplitudes(const ModePartition& partition, Vec amplitudes) {
    if (amplitudes.size() != partition.dim())
        throw ValidationError("fock vector: amplitude count does not match the partition dimension");
    bool have_even = false, have_odd = false;
    for (std::size_t idx = 0; idx < amplitudes.size(); ++idx) {
        if (std::abs(amplitudes[idx]) == 0.0) continue;
        (parity_of_bits(idx) == Parity::Even ? have_even : have_odd) = true;
    }
    if (have_even && have_odd)
        throw ValidationError("superselection violation: support mixes even and odd parity");
    FockVector v;
    v.partition = partition;
    v.amplitudes = std::move(amplitudes);
    v.sector = have_odd ? Parity::Odd : Parity::Even;
    return v;
}

FockVector make_state(const ModePartition& partition, const std::map<std::string, cplx>& terms,
                      Normalize normalize) {
    if (terms.empty()) throw ValidationError("make_state: empty amplitude map (zero vector)");
    Vec amp(partition.dim());
    for (const auto& [bits, value] : terms) {
        if (static_cast<int>(bits.size()) != partition.total_modes())
            throw ValidationError("make_state: bitstring '" + bits + "' has wrong length, expected " +
                                  std::to_string(partition.total_modes()) + " modes");
        amp[index_of_bitstring(bits)] += value;
    }
    FockVector v = fock_vector_from_amplitudes(partition, std::move(amp));
    const double n = v.norm();
    if (n <= kAmplitudeTol) throw ValidationError("make_state: amplitudes sum to the zero vector");
    if (normalize == Normalize::Yes && std::abs(n - 1.0) > kAmplitudeTol)
        v.amplitudes = scaled(v.amplitudes, 1.0 / n);
    return v;
}

Mat jw_mode_operator(const ModePartition& partition, int i) {
    if (i < 0 || i >= partition.total_modes())
        throw ValidationError("jw_mode_operator: mode index " + std::to_string(i) + " out of range");
    const std::size_t d = partition.dim();
    const std::size_t bit = std::size_t{1} << i;
    const std::size_t string_mask = bit - 1;
    Mat m(d, d);
    for (std::size_t n = 0; n < d; ++n) {
        if (!(n & bit)) continue;
        const double sign = (std::popcount(n & string_mask) % 2 == 0) ? 1.0 : -1.0;
        m(n ^ bit, n) = sign;
    }
    return m;
}

Mat jw_mode_operator_dagger(const ModePartition& partition, int i) {
    return jw_mode_operator(partition, i).adjoint();
}

namespace {
Mat diag_on(const std::vector<std::size_t>& indices, std::size_t dim) {
    Mat m(dim, dim);
    for (std::size_t idx : indices) m(idx, idx) = 1.0;
    return m;
}
} // namespace

Mat SectorProjectors::P_e() const { return diag_on(even_indices, partition.dim()); }

Mat SectorProjectors::P_o() const {
    std::vector<std::size_t> odd;
    for (std::size_t idx = 0; idx < partition.dim(); ++idx)
        if (clazz[idx] == SectorClass::Odd) odd.push_back(idx);
    return diag_on(odd, partition.dim());
}

Mat SectorProjectors::P_E() const { return diag_on(ee_indices, partition.dim()); }
Mat SectorProjectors::P_O() const { return diag_on(oo_indices, partition.dim()); }

SectorProjectors sector_projectors(const ModePartition& partition) {
    SectorProjectors p;
    p.partition = partition;
    p.clazz.resize(partition.dim());
    for (std::size_t idx = 0; idx < partition.dim(); ++idx) {
        const Parity pa = parity_of_bits(partition.alice_bits(idx));
        const Parity pb = parity_of_bits(partition.bob_bits(idx));
        if (pa == Parity::Even && pb == Parity::Even) {
            p.clazz[idx] = SectorClass::EE;
            p.ee_indices.push_back(idx);
            p.even_indices.push_back(idx);
        } else if (pa == Parity::Odd && pb == Parity::Odd) {
            p.clazz[idx] = SectorClass::OO;
            p.oo_indices.push_back(idx);
            p.even_indices.push_back(idx);
        } else {
            p.clazz[idx] = SectorClass::Odd;
        }
    }
    return p;
}

Mat sector_pinch(const Mat& m, const SectorProjectors& proj) {
    const std::size_t d = m.rows();
    Mat r(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        if (proj.clazz[i] == SectorClass::Odd) continue;
        for (std::size_t j = 0; j < d; ++j)
            if (proj.clazz[j] == proj.clazz[i]) r(i, j) = m(i, j);
    }
    return r;
}

FockVector flip_last_bob_mode(const FockVector& v) {
    const int last = v.partition.total_modes() - 1;
    const std::size_t bit = std::size_t{1} << last;
    const std::size_t string_mask = bit - 1;
    Vec amp(v.amplitudes.size());
    for (std::size_t n = 0; n < v.amplitudes.size(); ++n) {
        if (std::abs(v.amplitudes[n]) == 0.0) continue;
        const double sign = (std::popcount(n & string_mask) % 2 == 0) ? 1.0 : -1.0;
        amp[n ^ bit] = sign * v.amplitudes[n];
    }
    return fock_vector_from_amplitudes(v.partition, std::move(amp));
}

Mat density(const FockVector& v) { return outer(v.amplitudes, v.amplitudes); }

} // namespace ferdisc
