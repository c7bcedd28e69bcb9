#include <doctest.h>

#include <random>

#include "ferdisc/decomp.hpp"
#include "ferdisc/discrim.hpp"
#include "ferdisc/errors.hpp"
#include "test_helpers.hpp"

using namespace ferdisc;
using namespace ferdisc::testing;

namespace {

FockVector pm_state(int sign) {
    const double isq = std::sqrt(0.5);
    return make_state(make_partition(2, 2), {{"0000", isq}, {"0101", sign * isq}});
}

} // namespace

TEST_CASE("sector split of the textbook pair") {
    const FockVector psi = pm_state(+1);
    const SectorSplit s = sector_split(psi);
    CHECK(s.norm_E == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(s.norm_O == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(std::abs(s.psi_E.amplitudes[index_of_bitstring("0000")] - cplx(std::sqrt(0.5), 0)) < 1e-15);
    CHECK(std::abs(s.psi_O.amplitudes[index_of_bitstring("0101")] - cplx(std::sqrt(0.5), 0)) < 1e-15);

    // reconstruction and Pythagoras
    CHECK(norm(sub(add(s.psi_E.amplitudes, s.psi_O.amplitudes), psi.amplitudes)) == 0.0);
    CHECK(s.norm_E * s.norm_E + s.norm_O * s.norm_O == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sector split of a pure-E vector and idempotence") {
    const FockVector v = make_state(make_partition(2, 2), {{"0000", 1.0}});
    const SectorSplit s = sector_split(v);
    CHECK(norm(sub(s.psi_E.amplitudes, v.amplitudes)) == 0.0);
    CHECK(s.norm_O == 0.0);

    const SectorSplit again = sector_split(s.psi_E);
    CHECK(norm(sub(again.psi_E.amplitudes, s.psi_E.amplitudes)) == 0.0);
    CHECK(again.norm_O == 0.0);
}

TEST_CASE("sector split rejects odd input") {
    const FockVector odd = make_state(make_partition(1, 1), {{"10", 1.0}});
    CHECK_THROWS_AS(sector_split(odd), ValidationError);
}

TEST_CASE("random even vectors satisfy Pythagoras") {
    std::mt19937_64 rng(31);
    const ModePartition part = make_partition(2, 2);
    for (int it = 0; it < 50; ++it) {
        const FockVector v = random_sector_state(part, Parity::Even, rng);
        const SectorSplit s = sector_split(v);
        CHECK(s.norm_E * s.norm_E + s.norm_O * s.norm_O == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("sector overlaps of the textbook pair are (1/2, -1/2)") {
    const auto [se, so] = sector_overlaps(pm_state(+1), pm_state(-1));
    CHECK(std::abs(se - cplx(0.5, 0.0)) < 1e-12);
    CHECK(std::abs(so - cplx(-0.5, 0.0)) < 1e-12);
}

TEST_CASE("disjoint supports give zero overlaps") {
    const ModePartition part = make_partition(2, 2);
    const FockVector a = make_state(part, {{"0000", 1.0}});
    const FockVector b = make_state(part, {{"0101", 1.0}});
    const auto [se, so] = sector_overlaps(a, b);
    CHECK(std::abs(se) == 0.0);
    CHECK(std::abs(so) == 0.0);
}

TEST_CASE("overlap sum rule: Sigma_E + Sigma_O = <psi|phi>") {
    std::mt19937_64 rng(32);
    const ModePartition part = make_partition(2, 2);
    for (int it = 0; it < 100; ++it) {
        const FockVector a = random_sector_state(part, Parity::Even, rng);
        const FockVector b = random_sector_state(part, Parity::Even, rng);
        const auto [se, so] = sector_overlaps(a, b);
        CHECK(std::abs(se + so - dot(a.amplitudes, b.amplitudes)) < 1e-12);
    }
}

TEST_CASE("zero_diagonal_basis on diag(1, -1) is the quarter turn") {
    Mat c(2, 2);
    c(0, 0) = 1.0;
    c(1, 1) = -1.0;
    const Mat v = zero_diagonal_basis(c);
    const Mat r = v * c * v.adjoint();
    CHECK(std::abs(r(0, 0)) < 1e-12);
    CHECK(std::abs(r(1, 1)) < 1e-12);
    CHECK(std::abs(std::abs(r(0, 1)) - 1.0) < 1e-12);
    CHECK(std::abs(std::abs(r(1, 0)) - 1.0) < 1e-12);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(std::abs(v(i, j)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("zero_diagonal_basis fixes the zero matrix") {
    const Mat v = zero_diagonal_basis(Mat(3, 3));
    CHECK((v - Mat::identity(3)).max_abs() == 0.0);
}

TEST_CASE("zero_diagonal_basis rejects bad input") {
    CHECK_THROWS_AS(zero_diagonal_basis(Mat(2, 3)), ValidationError);
    CHECK_THROWS_AS(zero_diagonal_basis(Mat::identity(2)), ValidationError);
}

TEST_CASE("zero_diagonal_basis clears random traceless matrices") {
    std::mt19937_64 rng(33);
    for (std::size_t n : {2u, 3u, 6u}) {
        for (int it = 0; it < 25; ++it) {
            const Mat c = random_traceless(n, rng);
            const Mat v = zero_diagonal_basis(c);
            CHECK((v.adjoint() * v - Mat::identity(n)).max_abs() < 1e-12);
            const Mat r = v * c * v.adjoint();
            double worst = 0.0;
            for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(r(k, k)));
            CHECK(worst < 1e-10 * c.frob_norm());
        }
    }
}

namespace {

void check_walgate_invariants(const FockVector& a, const FockVector& b) {
    const WalgateDecomposition wd = walgate_decompose(a, b);
    const double scale = std::max({a.norm(), b.norm(), 1e-30});

    CHECK(norm(sub(walgate_reconstruct(wd, false), a.amplitudes)) < 1e-10 * scale);
    CHECK(norm(sub(walgate_reconstruct(wd, true), b.amplitudes)) < 1e-10 * scale);
    for (std::size_t i = 0; i < wd.alice_basis.size(); ++i) {
        CHECK(std::abs(dot(wd.bob_eta[i], wd.bob_nu[i])) < 1e-10 * scale * scale);
        // basis orthonormal and of definite local parity
        CHECK(std::abs(norm(wd.alice_basis[i]) - 1.0) < 1e-12);
        const Parity want = wd.subspace == SectorClass::EE ? Parity::Even : Parity::Odd;
        for (std::size_t x = 0; x < wd.alice_basis[i].size(); ++x)
            if (parity_of_bits(x) != want) CHECK(std::abs(wd.alice_basis[i][x]) == 0.0);
        for (std::size_t j = i + 1; j < wd.alice_basis.size(); ++j)
            CHECK(std::abs(dot(wd.alice_basis[i], wd.alice_basis[j])) < 1e-12);
    }
}

} // namespace

TEST_CASE("walgate on orthogonal product states is immediate") {
    const ModePartition part = make_partition(2, 2);
    const FockVector a = make_state(part, {{"0000", 1.0}});
    const FockVector b = make_state(part, {{"1100", 1.0}}); // alice 11 (even), bob 00
    check_walgate_invariants(a, b);
}

TEST_CASE("walgate on the ancilla-attached textbook pair") {
    const double isq = std::sqrt(0.5);
    const FockVector psi2 = attach_ancilla(pm_state(+1), isq, isq);
    const FockVector phi2 = attach_ancilla(pm_state(-1), isq, isq);
    const SectorSplit sp = sector_split(psi2);
    const SectorSplit sf = sector_split(phi2);
    CHECK(std::abs(dot(sp.psi_E.amplitudes, sf.psi_E.amplitudes)) < 1e-12);
    check_walgate_invariants(sp.psi_E, sf.psi_E);
    check_walgate_invariants(sp.psi_O, sf.psi_O);
}

TEST_CASE("walgate invariants hold on random orthogonal same-subspace pairs") {
    std::mt19937_64 rng(34);
    const ModePartition part = make_partition(2, 2);
    for (int it = 0; it < 200; ++it) {
        const SectorClass cls = it % 2 == 0 ? SectorClass::EE : SectorClass::OO;
        const FockVector a = random_subspace_state(part, cls, rng);
        const FockVector b = orthogonalize(a, random_subspace_state(part, cls, rng));
        check_walgate_invariants(a, b);
    }
}

TEST_CASE("walgate rejects non-orthogonal or mixed-subspace input") {
    std::mt19937_64 rng(35);
    const ModePartition part = make_partition(2, 2);
    const FockVector a = random_subspace_state(part, SectorClass::EE, rng);
    const FockVector b = random_subspace_state(part, SectorClass::EE, rng);
    if (std::abs(dot(a.amplitudes, b.amplitudes)) > 1e-6)
        CHECK_THROWS_AS(walgate_decompose(a, b), ValidationError);
    const FockVector c = orthogonalize(a, random_sector_state(part, Parity::Even, rng));
    CHECK_THROWS_AS(walgate_decompose(a, c), ValidationError); // c straddles E and O
}
