#include "ferdisc/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "ferdisc/errors.hpp"
#include "ferdisc/rng.hpp"

namespace ferdisc {

namespace {

Mat local_parity_projector(std::size_t dim, Parity parity) {
    Mat m(dim, dim);
    for (std::size_t a = 0; a < dim; ++a)
        if (parity_of_bits(a) == parity) m(a, a) = 1.0;
    return m;
}

// Bob-local occupation flip on his last mode, with his internal
// Jordan-Wigner string sign.
Mat bob_flip_matrix(const ModePartition& part) {
    const std::size_t dim = part.bob_dim();
    const std::size_t top = dim >> 1;
    Mat x(dim, dim);
    for (std::size_t b = 0; b < dim; ++b) {
        const double sign = parity_of_bits(b & (top - 1)) == Parity::Even ? 1.0 : -1.0;
        x(b ^ top, b) = sign;
    }
    return x;
}

// Branches for one sector: Alice measures the rotated basis of her parity
// block, Bob discriminates the conditional vectors. u carries the decide-psi
// state of this sector, v the decide-phi one; either may be zero.
void append_sector_branches(LoccProtocol& proto, SectorClass cls, const Vec& u, const Vec& v,
                            double tol) {
    const ModePartition& part = proto.partition;
    const std::string prefix = cls == SectorClass::EE ? "E" : "O";
    const Parity alice_parity = cls == SectorClass::EE ? Parity::Even : Parity::Odd;
    const Mat bob_id = Mat::identity(part.bob_dim());
    const double nu = u.empty() ? 0.0 : norm(u);
    const double nv = v.empty() ? 0.0 : norm(v);

    if (nu <= kAmplitudeTol && nv <= kAmplitudeTol) {
        // nothing to distinguish here: cover the block, flip a coin
        proto.alice_povm.push_back(
            {prefix + ":all", local_parity_projector(part.alice_dim(), alice_parity)});
        proto.bob_povms[prefix + ":all"] = {{Decision::Psi, bob_id * cplx(0.5, 0.0)},
                                            {Decision::Phi, bob_id * cplx(0.5, 0.0)}};
        return;
    }

    const Vec zero(part.dim());
    const FockVector fu = fock_vector_from_amplitudes(part, nu > kAmplitudeTol ? u : zero);
    const FockVector fv = fock_vector_from_amplitudes(part, nv > kAmplitudeTol ? v : zero);
    const WalgateDecomposition wd = walgate_decompose(fu, fv, tol);

    // Each branch projects onto the dominant conditional vector. Ranking by
    // norm matters: the rotated rows are orthogonal pairs only up to an
    // absolute tolerance, so a noise-level eta may face a full-weight nu and
    // must not claim the branch.
    const double cutoff = 1e-12 * std::max(nu, nv);
    for (std::size_t i = 0; i < wd.alice_basis.size(); ++i) {
        const std::string label = prefix + ":" + std::to_string(i);
        proto.alice_povm.push_back({label, outer(wd.alice_basis[i], wd.alice_basis[i])});

        const double ne = norm(wd.bob_eta[i]);
        const double nn = norm(wd.bob_nu[i]);
        std::vector<BobOutcome> povm;
        if (ne <= cutoff && nn <= cutoff) {
            povm.push_back({Decision::Psi, bob_id * cplx(0.5, 0.0)});
            povm.push_back({Decision::Phi, bob_id * cplx(0.5, 0.0)});
        } else if (ne >= nn) {
            const Vec eta_hat = scaled(wd.bob_eta[i], 1.0 / ne);
            const Mat on = outer(eta_hat, eta_hat);
            povm.push_back({Decision::Psi, on});
            povm.push_back({Decision::Phi, bob_id - on});
        } else {
            const Vec nu_hat = scaled(wd.bob_nu[i], 1.0 / nn);
            const Mat on = outer(nu_hat, nu_hat);
            povm.push_back({Decision::Phi, on});
            povm.push_back({Decision::Psi, bob_id - on});
        }
        proto.bob_povms[label] = std::move(povm);
    }
}

void conjugate_bob_effects(LoccProtocol& proto) {
    const Mat x = bob_flip_matrix(proto.partition);
    for (auto& [label, povm] : proto.bob_povms)
        for (auto& outcome : povm) outcome.effect = x * outcome.effect * x;
}

void verify_built_error(const LoccProtocol& proto, const DiscriminationInstance& inst,
                        double expected, double tol, const char* who) {
    const double got = analytic_error(proto, inst);
    if (std::abs(got - expected) > tol)
        throw ConvergenceError(std::string(who) + ": built protocol misses the target error by " +
                               std::to_string(got - expected));
}

} // namespace

LoccProtocol build_perfect_protocol(const DiscriminabilityVerdict& verdict, const FockVector& psi,
                                    const FockVector& phi, double tol) {
    if (!verdict.perfect())
        throw ValidationError("build_perfect_protocol: pair is not perfectly discriminable");
    if (!(psi.partition == phi.partition))
        throw ValidationError("build_perfect_protocol: states live on different partitions");

    LoccProtocol proto;
    proto.partition = psi.partition;
    const ModePartition& part = proto.partition;

    if (verdict.tag == VerdictTag::DifferentGlobalParity) {
        proto.construction = "parity";
        const Mat pae = local_parity_projector(part.alice_dim(), Parity::Even);
        const Mat pao = local_parity_projector(part.alice_dim(), Parity::Odd);
        const Mat pbe = local_parity_projector(part.bob_dim(), Parity::Even);
        const Mat pbo = local_parity_projector(part.bob_dim(), Parity::Odd);
        const Decision even_state = psi.sector == Parity::Even ? Decision::Psi : Decision::Phi;
        const Decision odd_state = even_state == Decision::Psi ? Decision::Phi : Decision::Psi;
        proto.alice_povm.push_back({"parity:e", pae});
        proto.alice_povm.push_back({"parity:o", pao});
        // matching local parities mean the global state was even
        proto.bob_povms["parity:e"] = {{even_state, pbe}, {odd_state, pbo}};
        proto.bob_povms["parity:o"] = {{odd_state, pbe}, {even_state, pbo}};
    } else {
        FockVector a = psi, b = phi;
        if (verdict.odd_pair_mapped) {
            a = flip_last_bob_mode(psi);
            b = flip_last_bob_mode(phi);
        }
        const SectorSplit sa = sector_split(a);
        const SectorSplit sb = sector_split(b);
        append_sector_branches(proto, SectorClass::EE, sa.psi_E.amplitudes, sb.psi_E.amplitudes, tol);
        append_sector_branches(proto, SectorClass::OO, sa.psi_O.amplitudes, sb.psi_O.amplitudes, tol);
        proto.construction = verdict.odd_pair_mapped ? "parity+walgate (odd pair, Bob-flip conjugated)"
                                                     : "parity+walgate";
        if (verdict.odd_pair_mapped) conjugate_bob_effects(proto);
    }

    verify_built_error(proto, make_instance(psi, phi, 0.5), 0.0, std::max(tol, 1e-10),
                       "build_perfect_protocol");
    return proto;
}

LoccProtocol build_optimal_locc_protocol(const DeltaOperator& d, const SectorProjectors& proj,
                                         double tol) {
    if (d.psi.sector != Parity::Even || d.phi.sector != Parity::Even)
        throw ValidationError("build_optimal_locc_protocol: Delta must live on the even sector");

    LoccProtocol proto;
    proto.partition = d.partition;
    proto.construction = "sector-eigenbasis";

    const SectorSplit sp = sector_split(d.psi);
    const SectorSplit sf = sector_split(d.phi);
    const RankTwoEig ee = rank_two_eig(d.p, sp.psi_E.amplitudes, d.q, sf.psi_E.amplitudes);
    const RankTwoEig oo = rank_two_eig(d.p, sp.psi_O.amplitudes, d.q, sf.psi_O.amplitudes);
    append_sector_branches(proto, SectorClass::EE, ee.plus, ee.minus, tol);
    append_sector_branches(proto, SectorClass::OO, oo.plus, oo.minus, tol);

    verify_built_error(proto, make_instance(d.psi, d.phi, d.p), locc_error(d, proj),
                       std::max(tol, 1e-10), "build_optimal_locc_protocol");
    return proto;
}

Mat local_to_global_effect(const ModePartition& partition, const Mat& alice, const Mat& bob) {
    Mat m(partition.dim(), partition.dim());
    for (std::size_t a1 = 0; a1 < alice.rows(); ++a1)
        for (std::size_t a2 = 0; a2 < alice.cols(); ++a2) {
            const cplx av = alice(a1, a2);
            if (av == cplx{}) continue;
            for (std::size_t b1 = 0; b1 < bob.rows(); ++b1)
                for (std::size_t b2 = 0; b2 < bob.cols(); ++b2)
                    m(partition.compose_index(a1, b1), partition.compose_index(a2, b2)) +=
                        av * bob(b1, b2);
        }
    return m;
}

GlobalPovm compose_global(const LoccProtocol& protocol) {
    const std::size_t dim = protocol.partition.dim();
    GlobalPovm g{Mat(dim, dim), Mat(dim, dim)};
    for (const AliceOutcome& alice : protocol.alice_povm) {
        const auto it = protocol.bob_povms.find(alice.label);
        if (it == protocol.bob_povms.end())
            throw ValidationError("protocol: no Bob POVM for message '" + alice.label + "'");
        for (const BobOutcome& bob : it->second) {
            Mat& target = bob.decision == Decision::Psi ? g.pi_psi : g.pi_phi;
            target = target + local_to_global_effect(protocol.partition, alice.effect, bob.effect);
        }
    }
    return g;
}

double analytic_error(const LoccProtocol& protocol, const DiscriminationInstance& inst) {
    const GlobalPovm g = compose_global(protocol);
    const double miss_psi = dot(inst.psi.amplitudes, mat_vec(g.pi_phi, inst.psi.amplitudes)).real();
    const double miss_phi = dot(inst.phi.amplitudes, mat_vec(g.pi_psi, inst.phi.amplitudes)).real();
    return inst.prior_p * miss_psi + inst.prior_q() * miss_phi;
}

namespace {

void check_effect(const Mat& e, std::size_t dim, double tol, const std::string& what) {
    if (e.rows() != dim || e.cols() != dim)
        throw ValidationError("protocol: " + what + " has the wrong dimension");
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            if (std::abs(e(i, j) - std::conj(e(j, i))) > tol)
                throw ValidationError("protocol: " + what + " is not Hermitian");
            if (parity_of_bits(i) != parity_of_bits(j) && std::abs(e(i, j)) > tol)
                throw ValidationError("protocol: " + what + " breaks the local parity blocks");
        }
    const auto eig = hermitian_eig(e);
    if (eig.values.front() < -tol)
        throw ValidationError("protocol: " + what + " is not positive semidefinite");
}

} // namespace

void validate_protocol(const LoccProtocol& protocol, double tol) {
    const std::size_t da = protocol.partition.alice_dim();
    const std::size_t db = protocol.partition.bob_dim();
    if (protocol.alice_povm.empty()) throw ValidationError("protocol: Alice POVM is empty");

    Mat alice_sum(da, da);
    for (const AliceOutcome& a : protocol.alice_povm) {
        check_effect(a.effect, da, tol, "Alice effect '" + a.label + "'");
        alice_sum = alice_sum + a.effect;
        if (!protocol.bob_povms.count(a.label))
            throw ValidationError("protocol: no Bob POVM for message '" + a.label + "'");
    }
    if ((alice_sum - Mat::identity(da)).max_abs() > tol)
        throw ValidationError("protocol: Alice effects do not sum to the identity");

    for (const auto& [label, povm] : protocol.bob_povms) {
        if (povm.empty()) throw ValidationError("protocol: empty Bob POVM for '" + label + "'");
        Mat bob_sum(db, db);
        for (std::size_t j = 0; j < povm.size(); ++j) {
            check_effect(povm[j].effect, db, tol, "Bob effect " + std::to_string(j) + " for '" + label + "'");
            bob_sum = bob_sum + povm[j].effect;
        }
        if ((bob_sum - Mat::identity(db)).max_abs() > tol)
            throw ValidationError("protocol: Bob effects for '" + label + "' do not sum to the identity");
    }
}

namespace {

Vec apply_alice_local(const ModePartition& part, const Mat& m, const Vec& v) {
    Vec out(v.size());
    for (std::size_t b = 0; b < part.bob_dim(); ++b)
        for (std::size_t a1 = 0; a1 < part.alice_dim(); ++a1) {
            cplx s = 0.0;
            for (std::size_t a2 = 0; a2 < part.alice_dim(); ++a2)
                s += m(a1, a2) * v[part.compose_index(a2, b)];
            out[part.compose_index(a1, b)] = s;
        }
    return out;
}

Vec apply_bob_local(const ModePartition& part, const Mat& m, const Vec& v) {
    Vec out(v.size());
    for (std::size_t a = 0; a < part.alice_dim(); ++a)
        for (std::size_t b1 = 0; b1 < part.bob_dim(); ++b1) {
            cplx s = 0.0;
            for (std::size_t b2 = 0; b2 < part.bob_dim(); ++b2)
                s += m(b1, b2) * v[part.compose_index(a, b2)];
            out[part.compose_index(a, b1)] = s;
        }
    return out;
}

std::size_t sample_cumulative(const std::vector<double>& cum, double u) {
    for (std::size_t i = 0; i + 1 < cum.size(); ++i)
        if (u < cum[i]) return i;
    return cum.size() - 1;
}

} // namespace

SimulationReport simulate(const LoccProtocol& protocol, const DiscriminationInstance& inst,
                          std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) throw ValidationError("simulate: need at least one shot");
    if (!(inst.psi.partition == protocol.partition))
        throw ValidationError("simulate: instance and protocol partitions differ");
    validate_protocol(protocol);

    const ModePartition& part = protocol.partition;
    const std::size_t n_alice_outcomes = protocol.alice_povm.size();

    // Lueders update per Alice outcome, then Bob's Born-rule distribution per
    // (true state, message). Everything is precomputed once; the shot loop
    // only draws from the cached discrete distributions.
    struct TruthData {
        std::vector<double> alice_cum;
        std::vector<std::vector<double>> bob_cum;         // per alice outcome
        std::vector<const std::vector<BobOutcome>*> povm; // per alice outcome
    };
    TruthData data[2];
    for (int truth = 0; truth < 2; ++truth) {
        const Vec& state = truth == 0 ? inst.psi.amplitudes : inst.phi.amplitudes;
        TruthData& td = data[truth];
        td.alice_cum.resize(n_alice_outcomes);
        td.bob_cum.resize(n_alice_outcomes);
        td.povm.resize(n_alice_outcomes);
        double acc = 0.0;
        for (std::size_t k = 0; k < n_alice_outcomes; ++k) {
            const AliceOutcome& ao = protocol.alice_povm[k];
            const Vec post = apply_alice_local(part, psd_sqrt(ao.effect), state);
            double pk = norm2(post);
            if (pk < -1e-10 || pk > 1.0 + 1e-10)
                throw ValidationError("simulate: Alice branch probability out of range");
            pk = std::clamp(pk, 0.0, 1.0);
            acc += pk;
            td.alice_cum[k] = acc;
            td.povm[k] = &protocol.bob_povms.at(ao.label);

            std::vector<double>& bc = td.bob_cum[k];
            bc.resize(td.povm[k]->size());
            if (pk > 1e-300) {
                const Vec collapsed = scaled(post, 1.0 / std::sqrt(pk));
                double bacc = 0.0;
                for (std::size_t j = 0; j < td.povm[k]->size(); ++j) {
                    double qj =
                        dot(collapsed, apply_bob_local(part, (*td.povm[k])[j].effect, collapsed)).real();
                    if (qj < -1e-10 || qj > 1.0 + 1e-10)
                        throw ValidationError("simulate: Bob branch probability out of range");
                    bacc += std::clamp(qj, 0.0, 1.0);
                    bc[j] = bacc;
                }
                if (std::abs(bacc - 1.0) > 1e-10)
                    throw ValidationError("simulate: Bob branch probabilities do not sum to 1");
            } else {
                // unreachable branch; keep a valid distribution anyway
                for (std::size_t j = 0; j < bc.size(); ++j)
                    bc[j] = static_cast<double>(j + 1) / static_cast<double>(bc.size());
            }
        }
        if (std::abs(acc - 1.0) > 1e-10)
            throw ValidationError("simulate: Alice branch probabilities do not sum to 1");
    }

    std::mt19937_64 rng(seed);
    std::uint64_t errors = 0;
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        const int truth = uniform01(rng) < inst.prior_p ? 0 : 1;
        const TruthData& td = data[truth];
        const std::size_t k = sample_cumulative(td.alice_cum, uniform01(rng) * td.alice_cum.back());
        const std::size_t j = sample_cumulative(td.bob_cum[k], uniform01(rng) * td.bob_cum[k].back());
        const Decision decided = (*td.povm[k])[j].decision;
        const Decision actual = truth == 0 ? Decision::Psi : Decision::Phi;
        if (decided != actual) ++errors;
    }

    SimulationReport rep;
    rep.shots = shots;
    rep.errors = errors;
    rep.empirical_error = static_cast<double>(errors) / static_cast<double>(shots);
    rep.std_err = std::sqrt(rep.empirical_error * (1.0 - rep.empirical_error) /
                            static_cast<double>(shots));
    rep.seed = seed;
    return rep;
}

} // namespace ferdisc
