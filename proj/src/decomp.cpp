#include "ferdisc/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ferdisc/errors.hpp"

namespace ferdisc {

SectorSplit sector_split(const FockVector& psi) {
    if (psi.sector != Parity::Even)
        throw ValidationError("sector_split: input is in the odd sector; map it to the even one first");
    const SectorProjectors proj = sector_projectors(psi.partition);
    Vec e(psi.amplitudes.size()), o(psi.amplitudes.size());
    for (std::size_t idx = 0; idx < psi.amplitudes.size(); ++idx) {
        if (proj.clazz[idx] == SectorClass::EE)
            e[idx] = psi.amplitudes[idx];
        else if (proj.clazz[idx] == SectorClass::OO)
            o[idx] = psi.amplitudes[idx];
    }
    SectorSplit s;
    s.psi_E = fock_vector_from_amplitudes(psi.partition, std::move(e));
    s.psi_O = fock_vector_from_amplitudes(psi.partition, std::move(o));
    s.norm_E = s.psi_E.norm();
    s.norm_O = s.psi_O.norm();
    return s;
}

std::pair<cplx, cplx> sector_overlaps(const FockVector& psi, const FockVector& phi) {
    if (!(psi.partition == phi.partition))
        throw ValidationError("sector_overlaps: states live on different partitions");
    if (psi.sector != Parity::Even || phi.sector != Parity::Even)
        throw ValidationError("sector_overlaps: both states must be in the even sector");
    const SectorProjectors proj = sector_projectors(psi.partition);
    cplx sig_e = 0.0, sig_o = 0.0;
    for (std::size_t idx : proj.ee_indices) sig_e += std::conj(psi.amplitudes[idx]) * phi.amplitudes[idx];
    for (std::size_t idx : proj.oo_indices) sig_o += std::conj(psi.amplitudes[idx]) * phi.amplitudes[idx];
    return {sig_e, sig_o};
}

Mat zero_diagonal_basis(const Mat& c, double tol, double scale_hint) {
    const std::size_t n = c.rows();
    if (n != c.cols()) throw ValidationError("zero_diagonal_basis: matrix is not square");
    const double scale = std::max(c.frob_norm(), scale_hint);
    if (scale == 0.0) return Mat::identity(n);
    const cplx tr = c.trace();
    if (std::abs(tr) > 1e-10 * scale)
        throw ValidationError("zero_diagonal_basis: trace is not negligible");

    // Work on the exactly traceless part; the removed tr/n diagonal shift is
    // covered by the trace precondition.
    Mat b = c;
    for (std::size_t k = 0; k < n; ++k) b(k, k) -= tr / static_cast<double>(n);
    Mat v = Mat::identity(n);
    const double target = std::min(tol, 1e-11) * scale;
    const std::size_t cap = 10 * n * n;

    for (std::size_t rot = 0;; ++rot) {
        // largest-magnitude diagonal entry, lowest index on ties
        std::size_t i = 0;
        double best = -1.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double m = std::abs(b(k, k));
            if (m > best) {
                best = m;
                i = k;
            }
        }
        if (best <= target) break;
        if (rot >= cap)
            throw ConvergenceError("zero_diagonal_basis: rotation cap reached before convergence");

        // partner whose diagonal points most against d_i (most negative real
        // part in the frame where d_i is real positive)
        const cplx di = b(i, i);
        std::size_t j = n;
        double proj = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            const double r = (b(k, k) * std::conj(di)).real();
            if (j == n || r < proj) {
                proj = r;
                j = k;
            }
        }

        const cplx alpha = b(i, i), delta = b(j, j);
        const cplx beta = b(i, j), gamma = b(j, i);
        const cplx diff = alpha - delta;
        const double sigma = std::arg(diff);
        const cplx rot_dir = std::polar(1.0, -sigma);
        const cplx bp = beta * rot_dir, gp = gamma * rot_dir;

        // phase making e^{i phi} beta + e^{-i phi} gamma parallel to diff
        const double num = -(bp.imag() + gp.imag());
        const double den = bp.real() - gp.real();
        const double phi = (num == 0.0 && den == 0.0) ? 0.0 : std::atan2(num, den);

        const cplx eiphi = std::polar(1.0, phi);
        const double w = (eiphi * bp + std::conj(eiphi) * gp).real();
        const double amp = std::abs(diff) / 2.0;

        // angle zeroing amp*cos(2t) + (w/2)*sin(2t); both new diagonal
        // entries land on the pair average
        const double zeta = std::atan2(w / 2.0, amp);
        const double theta = 0.5 * (zeta + std::numbers::pi / 2.0);
        const double ct = std::cos(theta), st = std::sin(theta);
        const cplx x_ji = eiphi * st;         // X(j,i)
        const cplx x_ij = -std::conj(eiphi) * st; // X(i,j)

        // b <- X^dag b X
        for (std::size_t r = 0; r < n; ++r) {
            const cplx bri = b(r, i), brj = b(r, j);
            b(r, i) = bri * ct + brj * x_ji;
            b(r, j) = bri * x_ij + brj * ct;
        }
        for (std::size_t col = 0; col < n; ++col) {
            const cplx bic = b(i, col), bjc = b(j, col);
            b(i, col) = ct * bic + std::conj(x_ji) * bjc;
            b(j, col) = std::conj(x_ij) * bic + ct * bjc;
        }
        // v <- X^dag v
        for (std::size_t col = 0; col < n; ++col) {
            const cplx vic = v(i, col), vjc = v(j, col);
            v(i, col) = ct * vic + std::conj(x_ji) * vjc;
            v(j, col) = std::conj(x_ij) * vic + ct * vjc;
        }
    }
    return v;
}

namespace {

SectorClass support_class(const FockVector& v, const SectorProjectors& proj, double tol) {
    const double scale = std::max(v.norm(), 1.0);
    bool in_ee = false, in_oo = false;
    for (std::size_t idx = 0; idx < v.amplitudes.size(); ++idx) {
        if (std::abs(v.amplitudes[idx]) <= tol * scale) continue;
        switch (proj.clazz[idx]) {
            case SectorClass::EE: in_ee = true; break;
            case SectorClass::OO: in_oo = true; break;
            case SectorClass::Odd:
                throw ValidationError("walgate_decompose: support leaks into the odd sector");
        }
    }
    if (in_ee && in_oo)
        throw ValidationError("walgate_decompose: support mixes the E and O subspaces");
    return in_oo ? SectorClass::OO : SectorClass::EE;
}

} // namespace

Vec compose_local(const ModePartition& partition, const Vec& alice, const Vec& bob) {
    Vec out(partition.dim());
    for (std::size_t a = 0; a < alice.size(); ++a) {
        if (alice[a] == cplx{}) continue;
        for (std::size_t b = 0; b < bob.size(); ++b)
            out[partition.compose_index(a, b)] = alice[a] * bob[b];
    }
    return out;
}

WalgateDecomposition walgate_decompose(const FockVector& psi, const FockVector& phi, double tol) {
    if (!(psi.partition == phi.partition))
        throw ValidationError("walgate_decompose: states live on different partitions");
    const ModePartition part = psi.partition;
    const SectorProjectors proj = sector_projectors(part);

    const double npsi = psi.norm(), nphi = phi.norm();
    if (npsi <= kAmplitudeTol && nphi <= kAmplitudeTol)
        throw ValidationError("walgate_decompose: both inputs are zero vectors");
    if (std::abs(dot(psi.amplitudes, phi.amplitudes)) > tol * std::max(npsi * nphi, 1e-300))
        throw ValidationError("walgate_decompose: inputs are not orthogonal");

    SectorClass cls;
    if (npsi <= kAmplitudeTol)
        cls = support_class(phi, proj, kAmplitudeTol);
    else if (nphi <= kAmplitudeTol)
        cls = support_class(psi, proj, kAmplitudeTol);
    else {
        cls = support_class(psi, proj, kAmplitudeTol);
        if (cls != support_class(phi, proj, kAmplitudeTol))
            throw ValidationError("walgate_decompose: inputs live in different subspaces");
    }

    // Alice basis states of the parity this subspace requires
    const Parity alice_parity = (cls == SectorClass::EE) ? Parity::Even : Parity::Odd;
    std::vector<std::size_t> alice_states;
    for (std::size_t a = 0; a < part.alice_dim(); ++a)
        if (parity_of_bits(a) == alice_parity) alice_states.push_back(a);
    const std::size_t m = alice_states.size();

    // Bob rows of each state in that initial basis
    std::vector<Vec> eta(m, Vec(part.bob_dim())), nu(m, Vec(part.bob_dim()));
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t b = 0; b < part.bob_dim(); ++b) {
            const std::size_t idx = part.compose_index(alice_states[k], b);
            eta[k][b] = psi.amplitudes[idx];
            nu[k][b] = phi.amplitudes[idx];
        }

    Mat c(m, m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) c(k, l) = dot(eta[k], nu[l]);

    const Mat v = zero_diagonal_basis(c, tol, std::max(npsi * nphi, kAmplitudeTol));

    WalgateDecomposition d;
    d.partition = part;
    d.subspace = cls;
    d.alice_basis.assign(m, Vec(part.alice_dim()));
    d.bob_eta.assign(m, Vec(part.bob_dim()));
    d.bob_nu.assign(m, Vec(part.bob_dim()));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            const cplx w = v(i, k);
            if (w == cplx{}) continue;
            d.alice_basis[i][alice_states[k]] += w;
            for (std::size_t b = 0; b < part.bob_dim(); ++b) {
                d.bob_eta[i][b] += std::conj(w) * eta[k][b];
                d.bob_nu[i][b] += std::conj(w) * nu[k][b];
            }
        }
    }
    return d;
}

Vec walgate_reconstruct(const WalgateDecomposition& d, bool use_nu) {
    Vec out(d.partition.dim());
    for (std::size_t i = 0; i < d.alice_basis.size(); ++i) {
        const Vec term = compose_local(d.partition, d.alice_basis[i], use_nu ? d.bob_nu[i] : d.bob_eta[i]);
        out = add(out, term);
    }
    return out;
}

} // namespace ferdisc
