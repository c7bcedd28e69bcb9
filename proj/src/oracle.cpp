#include "ferdisc/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "ferdisc/errors.hpp"
#include "ferdisc/rng.hpp"

namespace ferdisc {

namespace {

void require_even_support(const DeltaOperator& d, const char* who) {
    if (d.psi.sector != Parity::Even || d.phi.sector != Parity::Even)
        throw ValidationError(std::string(who) + ": Delta must be supported on the even sector");
}

} // namespace

double best_sep_value(const DeltaOperator& d, const SectorProjectors& proj) {
    require_even_support(d, "best_sep_value");
    double total = 0.0;
    if (!proj.ee_indices.empty())
        total += sum_positive_eigenvalues(submatrix(d.matrix, proj.ee_indices));
    if (!proj.oo_indices.empty())
        total += sum_positive_eigenvalues(submatrix(d.matrix, proj.oo_indices));
    return total;
}

double unconstrained_best_value(const DeltaOperator& d) {
    return sum_positive_eigenvalues(d.matrix);
}

namespace {

// G G^dag for a complex Gaussian square factor of the given size
Mat random_psd(std::size_t n, std::mt19937_64& rng) {
    Mat g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
    return g * g.adjoint();
}

double max_eigenvalue(const Mat& m) {
    if (m.rows() == 0) return 0.0;
    const auto e = hermitian_eig(m);
    return e.values.back();
}

cplx block_trace_product(const Mat& full, const Mat& block, const std::vector<std::size_t>& idx) {
    // Tr[block * full_block] over the given index set
    cplx s = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b) s += block(a, b) * full(idx[b], idx[a]);
    return s;
}

} // namespace

SepEffectSample random_sep_effect(const DeltaOperator& d, const SectorProjectors& proj,
                                  std::mt19937_64& rng) {
    const std::size_t ne = proj.ee_indices.size();
    const std::size_t no = proj.oo_indices.size();
    Mat se = random_psd(ne, rng);
    Mat so = random_psd(no, rng);
    const double lam = std::max(max_eigenvalue(se), max_eigenvalue(so));
    if (lam > 0.0) {
        se = se * cplx(1.0 / lam, 0.0);
        so = so * cplx(1.0 / lam, 0.0);
    }

    SepEffectSample sample;
    sample.score = (block_trace_product(d.matrix, se, proj.ee_indices) +
                    block_trace_product(d.matrix, so, proj.oo_indices))
                       .real();
    sample.s_E = embed(se, proj.ee_indices, d.partition.dim());
    sample.s_O = embed(so, proj.oo_indices, d.partition.dim());
    return sample;
}

double random_sep_sample(const DeltaOperator& d, const SectorProjectors& proj,
                         std::uint64_t trials, std::uint64_t seed) {
    require_even_support(d, "random_sep_sample");
    if (trials < 1) throw ValidationError("random_sep_sample: need at least one trial");
    std::mt19937_64 rng(seed);
    double best = -1.0; // every score of a PSD pair against any Delta beats this at 0
    for (std::uint64_t t = 0; t < trials; ++t)
        best = std::max(best, random_sep_effect(d, proj, rng).score);
    return best;
}

} // namespace ferdisc
