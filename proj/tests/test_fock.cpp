#include <doctest.h>

#include <random>

#include "ferdisc/errors.hpp"
#include "ferdisc/fock.hpp"
#include "ferdisc/rng.hpp"
#include "test_helpers.hpp"

using namespace ferdisc;

namespace {

Mat anticommutator(const Mat& a, const Mat& b) { return a * b + b * a; }

} // namespace

TEST_CASE("single-mode annihilation operator") {
    const ModePartition p11 = make_partition(1, 1);
    const Mat phi0 = jw_mode_operator(p11, 0);
    // maps |1> (bit 0 set) to |0>, kills |0>
    CHECK(phi0(0, 1) == cplx(1.0, 0.0));
    CHECK(phi0(0, 0) == cplx(0.0, 0.0));
    CHECK(phi0(1, 1) == cplx(0.0, 0.0));
    CHECK_THROWS_AS(jw_mode_operator(p11, 2), ValidationError);
    CHECK_THROWS_AS(jw_mode_operator(p11, -1), ValidationError);
}

TEST_CASE("canonical anticommutation relations hold exhaustively up to 4 modes") {
    for (int na = 1; na <= 2; ++na)
        for (int nb = 1; nb <= 2; ++nb) {
            const ModePartition part = make_partition(na, nb);
            const int n = part.total_modes();
            const Mat id = Mat::identity(part.dim());
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const Mat ai = jw_mode_operator(part, i);
                    const Mat aj = jw_mode_operator(part, j);
                    const Mat mixed = anticommutator(ai, aj.adjoint());
                    if (i == j)
                        CHECK((mixed - id).max_abs() < 1e-12);
                    else
                        CHECK(mixed.max_abs() < 1e-12);
                    CHECK(anticommutator(ai, aj).max_abs() < 1e-12);
                }
        }
}

TEST_CASE("creation order flips the sign through the string") {
    const ModePartition part = make_partition(1, 1);
    const Mat c0 = jw_mode_operator_dagger(part, 0);
    const Mat c1 = jw_mode_operator_dagger(part, 1);
    Vec vac(part.dim());
    vac[0] = 1.0;
    const Vec a = mat_vec(c1, mat_vec(c0, vac)); // c1^dag c0^dag |Omega>
    const Vec b = mat_vec(c0, mat_vec(c1, vac)); // c0^dag c1^dag |Omega>
    CHECK(norm(add(a, b)) < 1e-12); // opposite signs
    CHECK(std::abs(b[3] - cplx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("Fock states built by ordered creation operators are unit basis vectors") {
    const ModePartition part = make_partition(2, 2);
    for (std::size_t target = 0; target < part.dim(); ++target) {
        Vec v(part.dim());
        v[0] = 1.0;
        // fixed-order product: highest mode applied to the vacuum first
        for (int mode = part.total_modes() - 1; mode >= 0; --mode)
            if (target & (std::size_t{1} << mode))
                v = mat_vec(jw_mode_operator_dagger(part, mode), v);
        CHECK(std::abs(v[target] - cplx(1.0, 0.0)) < 1e-15);
        CHECK(std::abs(norm(v) - 1.0) < 1e-15);
    }
}

TEST_CASE("make_state infers sectors and rejects bad input") {
    const ModePartition p22 = make_partition(2, 2);
    const double isq = std::sqrt(0.5);

    const FockVector psi = make_state(p22, {{"0000", isq}, {"0101", isq}});
    CHECK(psi.sector == Parity::Even);
    CHECK(psi.is_normalized());

    const ModePartition p11 = make_partition(1, 1);
    const FockVector vac = make_state(p11, {{"00", 1.0}});
    CHECK(vac.sector == Parity::Even);

    CHECK_THROWS_WITH_AS(make_state(p11, {{"00", 0.6}, {"01", 0.8}}),
                         doctest::Contains("superselection"), ValidationError);
    CHECK_THROWS_AS(make_state(p11, {}), ValidationError);
    CHECK_THROWS_AS(make_state(p11, {{"00", 0.0}}), ValidationError);
    CHECK_THROWS_AS(make_state(p11, {{"000", 1.0}}), ValidationError);

    const FockVector scaledup = make_state(p11, {{"00", 2.0}}, Normalize::Yes);
    CHECK(scaledup.is_normalized());
}

TEST_CASE("random states from any operation satisfy superselection") {
    std::mt19937_64 rng(21);
    const ModePartition part = make_partition(2, 2);
    for (int it = 0; it < 50; ++it) {
        const Parity sector = it % 2 == 0 ? Parity::Even : Parity::Odd;
        const FockVector v = ferdisc::testing::random_sector_state(part, sector, rng);
        CHECK(v.sector == sector);
        for (std::size_t idx = 0; idx < v.amplitudes.size(); ++idx)
            if (parity_of_bits(idx) != sector) CHECK(std::abs(v.amplitudes[idx]) == 0.0);
    }
}

TEST_CASE("sector projectors on one mode per party") {
    const ModePartition part = make_partition(1, 1);
    const SectorProjectors proj = sector_projectors(part);
    CHECK(proj.ee_indices == std::vector<std::size_t>{0});   // "00"
    CHECK(proj.oo_indices == std::vector<std::size_t>{3});   // "11"
    const Mat pe = proj.P_E();
    CHECK(pe(0, 0) == cplx(1.0, 0.0));
    CHECK(pe.max_abs() == 1.0);
}

TEST_CASE("sector projector ranks and algebra on 2+2 modes") {
    const ModePartition part = make_partition(2, 2);
    const SectorProjectors proj = sector_projectors(part);
    CHECK(proj.ee_indices.size() == 4);
    CHECK(proj.oo_indices.size() == 4);
    CHECK(proj.even_indices.size() == 8);

    const Mat pe = proj.P_E(), po = proj.P_O(), pev = proj.P_e(), pod = proj.P_o();
    CHECK((pe + po - pev).max_abs() < 1e-12);
    CHECK((pe * po).max_abs() < 1e-12);
    for (const Mat& m : {pe, po, pev, pod}) {
        CHECK((m * m - m).max_abs() < 1e-12);
        CHECK((m - m.adjoint()).max_abs() < 1e-12);
    }
    CHECK((pev + pod - Mat::identity(part.dim())).max_abs() < 1e-12);
}

TEST_CASE("flip_last_bob_mode is a sector-swapping involution preserving inner products") {
    std::mt19937_64 rng(22);
    const ModePartition part = make_partition(2, 2);
    for (int it = 0; it < 20; ++it) {
        const FockVector v = ferdisc::testing::random_sector_state(part, Parity::Odd, rng);
        const FockVector w = ferdisc::testing::random_sector_state(part, Parity::Odd, rng);
        const FockVector fv = flip_last_bob_mode(v);
        const FockVector fw = flip_last_bob_mode(w);
        CHECK(fv.sector == Parity::Even);
        CHECK(std::abs(dot(fv.amplitudes, fw.amplitudes) - dot(v.amplitudes, w.amplitudes)) < 1e-12);
        const FockVector back = flip_last_bob_mode(fv);
        CHECK(norm(sub(back.amplitudes, v.amplitudes)) < 1e-12);
    }
}

TEST_CASE("bitstring indexing is little-endian in the mode order") {
    CHECK(index_of_bitstring("0101") == 10);
    CHECK(bitstring_of(10, 4) == "0101");
    CHECK(index_of_bitstring("1000") == 1);
    CHECK_THROWS_AS(index_of_bitstring("01x1"), ValidationError);
}

TEST_CASE("partition cap is enforced") {
    CHECK_THROWS_AS(make_partition(5, 4), ValidationError);
    CHECK_THROWS_AS(make_partition(0, 2), ValidationError);
    CHECK_NOTHROW(make_partition(4, 4));
    CHECK_NOTHROW(make_partition(5, 4, 10));
}
