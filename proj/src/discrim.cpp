#include "ferdisc/discrim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "ferdisc/errors.hpp"

namespace ferdisc {

DiscriminationInstance make_instance(FockVector psi, FockVector phi, double prior_p) {
    if (!(psi.partition == phi.partition))
        throw ValidationError("instance: states live on different partitions");
    if (!psi.is_normalized() || !phi.is_normalized())
        throw ValidationError("instance: states must be normalized within 1e-12");
    if (!(prior_p > 0.0 && prior_p < 1.0))
        throw ValidationError("instance: prior must lie strictly inside (0, 1)");
    return DiscriminationInstance{std::move(psi), std::move(phi), prior_p};
}

namespace {

struct TwoByTwoEig {
    double lam_lo = 0.0, lam_hi = 0.0;
    cplx lo0, lo1, hi0, hi1; // eigenvector coordinates in the reduction basis
};

// Closed-form eigensystem of the Hermitian 2x2 [[m11, m12], [conj(m12), m22]].
// Each eigenvector is taken from the residual column whose pivot stays of
// order dev, which avoids cancellation for near-diagonal input.
TwoByTwoEig eig_2x2(double m11, cplx m12, double m22) {
    TwoByTwoEig e;
    const double mean = 0.5 * (m11 + m22);
    const double dev = std::hypot(0.5 * (m11 - m22), std::abs(m12));
    e.lam_hi = mean + dev;
    e.lam_lo = mean - dev;
    if (std::abs(m12) > 1e-300 && dev > 1e-300) {
        cplx hi0, hi1, lo0, lo1;
        if (m11 >= m22) {
            hi0 = cplx(e.lam_hi - m22, 0.0);
            hi1 = std::conj(m12);
            lo0 = m12;
            lo1 = cplx(e.lam_lo - m11, 0.0);
        } else {
            hi0 = m12;
            hi1 = cplx(e.lam_hi - m11, 0.0);
            lo0 = cplx(e.lam_lo - m22, 0.0);
            lo1 = std::conj(m12);
        }
        double n = std::sqrt(std::norm(hi0) + std::norm(hi1));
        e.hi0 = hi0 / n;
        e.hi1 = hi1 / n;
        n = std::sqrt(std::norm(lo0) + std::norm(lo1));
        e.lo0 = lo0 / n;
        e.lo1 = lo1 / n;
    } else if (m11 >= m22) {
        e.hi0 = 1.0;
        e.lo1 = 1.0;
    } else {
        e.hi1 = 1.0;
        e.lo0 = 1.0;
    }
    return e;
}

// Any unit vector orthogonal to u (used to pad rank-deficient eigendata).
Vec some_orthogonal_unit(const Vec& u) {
    std::size_t k = 0;
    double smallest = std::abs(u[0]);
    for (std::size_t i = 1; i < u.size(); ++i)
        if (std::abs(u[i]) < smallest) {
            smallest = std::abs(u[i]);
            k = i;
        }
    Vec v(u.size());
    v[k] = 1.0;
    const cplx overlap = dot(u, v);
    v = sub(v, scaled(u, overlap));
    return scaled(v, 1.0 / norm(v));
}

} // namespace

RankTwoEig rank_two_eig(double p, const Vec& u, double q, const Vec& v) {
    RankTwoEig r;
    const double nu = norm(u), nv = norm(v);
    if (nu <= kAmplitudeTol && nv <= kAmplitudeTol) return r;
    if (nv <= kAmplitudeTol) {
        r.lam_plus = p * nu * nu;
        r.plus = scaled(u, 1.0 / nu);
        return r;
    }
    if (nu <= kAmplitudeTol) {
        r.lam_minus = -q * nv * nv;
        r.minus = scaled(v, 1.0 / nv);
        return r;
    }
    const Vec u1 = scaled(u, 1.0 / nu);
    const cplx c = dot(u1, v);
    const Vec w = sub(v, scaled(u1, c));
    const double s = norm(w);
    const double m11 = p * nu * nu - q * std::norm(c);
    if (s <= kAmplitudeTol * nv) {
        // v is parallel to u: a single eigenvalue of either sign
        if (m11 > kAmplitudeTol) {
            r.lam_plus = m11;
            r.plus = u1;
        } else if (m11 < -kAmplitudeTol) {
            r.lam_minus = m11;
            r.minus = u1;
        }
        return r;
    }
    const Vec u2 = scaled(w, 1.0 / s);
    const cplx m12 = -q * c * s;
    const double m22 = -q * s * s;
    const TwoByTwoEig e = eig_2x2(m11, m12, m22);
    r.lam_plus = e.lam_hi;
    r.lam_minus = e.lam_lo;
    r.plus = add(scaled(u1, e.hi0), scaled(u2, e.hi1));
    r.minus = add(scaled(u1, e.lo0), scaled(u2, e.lo1));
    return r;
}

DeltaOperator delta(const DiscriminationInstance& inst) {
    DeltaOperator d;
    d.partition = inst.psi.partition;
    d.psi = inst.psi;
    d.phi = inst.phi;
    d.p = inst.prior_p;
    d.q = inst.prior_q();

    const Mat psi_proj = density(inst.psi);
    const Mat phi_proj = density(inst.phi);
    d.matrix = psi_proj * cplx(d.p, 0.0) - phi_proj * cplx(d.q, 0.0);

    RankTwoEig e = rank_two_eig(d.p, inst.psi.amplitudes, d.q, inst.phi.amplitudes);
    d.lambda_plus = e.lam_plus;
    d.lambda_minus = e.lam_minus;
    d.rank_deficient = e.plus.empty() || e.minus.empty();
    // pad a missing eigenpair with (0, arbitrary orthogonal unit vector)
    if (e.plus.empty() && e.minus.empty()) {
        d.plus_vec = inst.psi.amplitudes;
        d.minus_vec = some_orthogonal_unit(d.plus_vec);
    } else if (e.plus.empty()) {
        d.minus_vec = std::move(e.minus);
        d.plus_vec = some_orthogonal_unit(d.minus_vec);
    } else if (e.minus.empty()) {
        d.plus_vec = std::move(e.plus);
        d.minus_vec = some_orthogonal_unit(d.plus_vec);
    } else {
        d.plus_vec = std::move(e.plus);
        d.minus_vec = std::move(e.minus);
    }
    return d;
}

double helstrom_error(const DeltaOperator& d) { return 0.5 * (1.0 - d.trace_norm()); }

double locc_error(const DeltaOperator& d, const SectorProjectors& proj) {
    if (d.psi.sector != Parity::Even || d.phi.sector != Parity::Even)
        throw ValidationError("locc_error: Delta must be supported on the global even sector");
    const std::size_t dim = d.partition.dim();
    Vec psi_e(dim), psi_o(dim), phi_e(dim), phi_o(dim);
    for (std::size_t idx = 0; idx < dim; ++idx) {
        if (proj.clazz[idx] == SectorClass::EE) {
            psi_e[idx] = d.psi.amplitudes[idx];
            phi_e[idx] = d.phi.amplitudes[idx];
        } else if (proj.clazz[idx] == SectorClass::OO) {
            psi_o[idx] = d.psi.amplitudes[idx];
            phi_o[idx] = d.phi.amplitudes[idx];
        }
    }
    const double tn_e = rank_two_eig(d.p, psi_e, d.q, phi_e).trace_norm();
    const double tn_o = rank_two_eig(d.p, psi_o, d.q, phi_o).trace_norm();
    return 0.5 * (1.0 - (tn_e + tn_o));
}

std::string to_string(VerdictTag tag) {
    switch (tag) {
        case VerdictTag::DifferentGlobalParity: return "different-global-parity";
        case VerdictTag::ComplementaryComponents: return "complementary-components";
        case VerdictTag::SingleSubspace: return "single-subspace";
        case VerdictTag::EoOrthogonal: return "eo-orthogonal";
        case VerdictTag::NotPerfectlyLocc: return "not-perfectly-locc";
    }
    return "?";
}

DiscriminabilityVerdict classify_perfect(const FockVector& psi, const FockVector& phi, double tol) {
    if (!(psi.partition == phi.partition))
        throw ValidationError("classify_perfect: states live on different partitions");
    if (!psi.is_normalized() || !phi.is_normalized())
        throw ValidationError("classify_perfect: states must be normalized");
    if (std::abs(dot(psi.amplitudes, phi.amplitudes)) > tol)
        throw ValidationError("classify_perfect: states are not orthogonal");

    DiscriminabilityVerdict v;
    if (psi.sector != phi.sector) {
        v.tag = VerdictTag::DifferentGlobalParity;
        return v;
    }

    FockVector a = psi, b = phi;
    if (psi.sector == Parity::Odd) {
        a = flip_last_bob_mode(psi);
        b = flip_last_bob_mode(phi);
        v.odd_pair_mapped = true;
    }

    const SectorSplit sa = sector_split(a);
    const SectorSplit sb = sector_split(b);
    v.psi_E_zero = sa.norm_E <= tol;
    v.psi_O_zero = sa.norm_O <= tol;
    v.phi_E_zero = sb.norm_E <= tol;
    v.phi_O_zero = sb.norm_O <= tol;
    const auto [sig_e, sig_o] = sector_overlaps(a, b);
    v.sigma_E = sig_e;
    v.sigma_O = sig_o;

    const bool psi_single = v.psi_E_zero || v.psi_O_zero;
    const bool phi_single = v.phi_E_zero || v.phi_O_zero;
    if (psi_single && phi_single) {
        const bool psi_in_e = v.psi_O_zero;
        const bool phi_in_e = v.phi_O_zero;
        v.tag = (psi_in_e != phi_in_e) ? VerdictTag::ComplementaryComponents
                                       : VerdictTag::SingleSubspace;
        return v;
    }
    if (std::abs(sig_e) <= tol && std::abs(sig_o) <= tol) {
        v.tag = VerdictTag::EoOrthogonal;
        return v;
    }
    v.tag = VerdictTag::NotPerfectlyLocc;
    return v;
}

namespace {

// Frobenius norm of [m, P_E] without building the projector: the commutator
// entry at (i, j) is m(i, j) scaled by chi_E(j) - chi_E(i).
double commutator_with_pe_frob(const Mat& m, const SectorProjectors& proj) {
    double s = 0.0;
    const std::size_t d = m.rows();
    for (std::size_t i = 0; i < d; ++i) {
        const bool ie = proj.clazz[i] == SectorClass::EE;
        for (std::size_t j = 0; j < d; ++j) {
            const bool je = proj.clazz[j] == SectorClass::EE;
            if (ie != je) s += std::norm(m(i, j));
        }
    }
    return std::sqrt(s);
}

cplx sandwich(const Vec& x, const std::vector<std::size_t>& indices, const Vec& y) {
    cplx s = 0.0;
    for (std::size_t idx : indices) s += std::conj(x[idx]) * y[idx];
    return s;
}

} // namespace

OptimalityReport optimality_report(const DeltaOperator& d, const SectorProjectors& proj,
                                   double tol) {
    if (d.psi.sector != Parity::Even || d.phi.sector != Parity::Even)
        throw ValidationError("optimality tests need even-sector support; map odd pairs first");
    OptimalityReport r;
    const double scale = d.matrix.frob_norm();
    if (scale <= kAmplitudeTol) {
        r.commutator_test = r.eigvec_test = r.difference_test = true;
        r.degenerate = true;
        return r;
    }
    r.commutator_residual = commutator_with_pe_frob(d.matrix, proj) / scale;
    r.commutator_test = r.commutator_residual <= tol;

    if (d.rank_deficient) {
        r.degenerate = true;
        r.eigvec_test = r.difference_test = r.commutator_test;
        return r;
    }

    const cplx pe = sandwich(d.plus_vec, proj.ee_indices, d.minus_vec);
    const cplx po = sandwich(d.plus_vec, proj.oo_indices, d.minus_vec);
    r.eigvec_residual = std::max(std::abs(pe), std::abs(po));
    r.eigvec_test = r.eigvec_residual <= tol;
    r.difference_residual = std::abs(pe - po);
    r.difference_test = r.difference_residual <= 2.0 * tol;
    return r;
}

bool is_locc_optimal(const DeltaOperator& d, const SectorProjectors& proj, double tol) {
    if (tol <= 0.0) throw ValidationError("is_locc_optimal: tolerance must be positive");
    return optimality_report(d, proj, tol).commutator_test;
}

CriticalPrior critical_prior(const FockVector& psi_in, const FockVector& phi_in, double tol) {
    if (!psi_in.is_normalized() || !phi_in.is_normalized())
        throw ValidationError("critical_prior: states must be normalized");
    if (psi_in.sector != phi_in.sector) {
        // cross-parity pairs are orthogonal and perfectly LOCC-discriminable
        CriticalPrior out;
        out.kind = CriticalPrior::Kind::AllPriors;
        return out;
    }
    const FockVector psi = psi_in.sector == Parity::Odd ? flip_last_bob_mode(psi_in) : psi_in;
    const FockVector phi = phi_in.sector == Parity::Odd ? flip_last_bob_mode(phi_in) : phi_in;
    const SectorProjectors proj = sector_projectors(psi.partition);

    auto commutator = [&](const FockVector& v) {
        const Mat rho = density(v);
        Mat k(rho.rows(), rho.cols());
        for (std::size_t i = 0; i < rho.rows(); ++i) {
            const bool ie = proj.clazz[i] == SectorClass::EE;
            for (std::size_t j = 0; j < rho.cols(); ++j) {
                const bool je = proj.clazz[j] == SectorClass::EE;
                if (ie != je) k(i, j) = rho(i, j) * (je ? 1.0 : -1.0);
            }
        }
        return k;
    };

    const Mat k_psi = commutator(psi);
    const Mat k_phi = commutator(phi);
    const double n_psi = k_psi.frob_norm();
    const double n_phi = k_phi.frob_norm();

    CriticalPrior out;
    if (n_psi <= tol && n_phi <= tol) {
        out.kind = CriticalPrior::Kind::AllPriors;
        return out;
    }
    if (n_psi <= tol || n_phi <= tol) return out; // Kind::None

    // ratio from the largest-magnitude entry of [phi phi, P_E]
    std::size_t pivot = 0;
    double best = -1.0;
    for (std::size_t idx = 0; idx < k_phi.data().size(); ++idx)
        if (std::abs(k_phi.data()[idx]) > best) {
            best = std::abs(k_phi.data()[idx]);
            pivot = idx;
        }
    const cplx ratio = k_psi.data()[pivot] / k_phi.data()[pivot];

    double max_dev = 0.0;
    for (std::size_t idx = 0; idx < k_phi.data().size(); ++idx)
        max_dev = std::max(max_dev, std::abs(k_psi.data()[idx] - ratio * k_phi.data()[idx]));
    const double scale = std::max(n_psi, n_phi);
    if (max_dev > tol * scale) return out;
    if (std::abs(ratio.imag()) > tol * std::max(std::abs(ratio), 1.0) || ratio.real() <= 0.0)
        return out;

    out.kind = CriticalPrior::Kind::Unique;
    out.p = 1.0 / (1.0 + ratio.real());
    return out;
}

FockVector attach_ancilla(const FockVector& psi, cplx a, cplx b) {
    if (std::abs(std::norm(a) + std::norm(b) - 1.0) > kAmplitudeTol)
        throw ValidationError("attach_ancilla: |a|^2 + |b|^2 must equal 1");
    const ModePartition old = psi.partition;
    const ModePartition part = make_partition(old.n_alice + 1, old.n_bob + 1);

    // New mode layout: [alice block][alice ancilla][bob block][bob ancilla].
    // Moving the alice-ancilla creation operator past Bob's occupied modes
    // contributes the (-1)^popcount(bob bits) reordering sign on the b term.
    Vec amp(part.dim());
    const std::size_t anc_a = std::size_t{1} << old.n_alice;
    const std::size_t anc_b = std::size_t{1} << (old.total_modes() + 1);
    for (std::size_t idx = 0; idx < psi.amplitudes.size(); ++idx) {
        const cplx w = psi.amplitudes[idx];
        if (w == cplx{}) continue;
        const std::size_t abits = old.alice_bits(idx);
        const std::size_t bbits = old.bob_bits(idx);
        const std::size_t base = abits | (bbits << (old.n_alice + 1));
        amp[base] += w * a;
        const double sign = (std::popcount(bbits) % 2 == 0) ? 1.0 : -1.0;
        amp[base | anc_a | anc_b] += w * b * sign;
    }
    return fock_vector_from_amplitudes(part, std::move(amp));
}

} // namespace ferdisc
