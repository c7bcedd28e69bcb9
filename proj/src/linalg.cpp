#include "ferdisc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ferdisc/errors.hpp"

namespace ferdisc {

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::operator+(const Mat& o) const {
    Mat r(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] + o.data_[k];
    return r;
}

Mat Mat::operator-(const Mat& o) const {
    Mat r(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] - o.data_[k];
    return r;
}

Mat Mat::operator*(const Mat& o) const {
    Mat r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const cplx a = (*this)(i, k);
            if (a == cplx{}) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
        }
    }
    return r;
}

Mat Mat::operator*(cplx s) const {
    Mat r(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = data_[k] * s;
    return r;
}

Mat Mat::adjoint() const {
    Mat r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

cplx Mat::trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

double Mat::frob_norm() const {
    double s = 0.0;
    for (const cplx& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

double Mat::max_abs() const {
    double m = 0.0;
    for (const cplx& z : data_) m = std::max(m, std::abs(z));
    return m;
}

cplx dot(const Vec& a, const Vec& b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm2(const Vec& v) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return s;
}

double norm(const Vec& v) { return std::sqrt(norm2(v)); }

Vec scaled(const Vec& v, cplx s) {
    Vec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] * s;
    return r;
}

Vec add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec mat_vec(const Mat& m, const Vec& v) {
    Vec r(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

Mat outer(const Vec& u, const Vec& v) {
    Mat r(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) r(i, j) = u[i] * std::conj(v[j]);
    return r;
}

Mat submatrix(const Mat& m, const std::vector<std::size_t>& idx) {
    Mat r(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b) r(a, b) = m(idx[a], idx[b]);
    return r;
}

Mat embed(const Mat& block, const std::vector<std::size_t>& idx, std::size_t n) {
    Mat r(n, n);
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b) r(idx[a], idx[b]) = block(a, b);
    return r;
}

// One complex Jacobi rotation on the (p, q) plane. The phase factor f turns
// the 2x2 block into a real symmetric one, then a standard Givens angle kills
// the off-diagonal entry. Updates a <- J^dag a J and v <- v J.
namespace {
void jacobi_rotate(Mat& a, Mat& v, std::size_t p, std::size_t q) {
    const std::size_t n = a.rows();
    const cplx apq = a(p, q);
    const double m = std::abs(apq);
    if (m <= 1e-300) return;
    const cplx f = apq / m;
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * m);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const cplx sfc = s * std::conj(f);
    const cplx cfc = c * std::conj(f);

    for (std::size_t r = 0; r < n; ++r) {
        if (r == p || r == q) continue;
        const cplx arp = a(r, p), arq = a(r, q);
        a(r, p) = c * arp - sfc * arq;
        a(r, q) = s * arp + cfc * arq;
        a(p, r) = std::conj(a(r, p));
        a(q, r) = std::conj(a(r, q));
    }
    a(p, p) = app - t * m;
    a(q, q) = aqq + t * m;
    a(p, q) = 0.0;
    a(q, p) = 0.0;

    for (std::size_t r = 0; r < v.rows(); ++r) {
        const cplx vrp = v(r, p), vrq = v(r, q);
        v(r, p) = c * vrp - sfc * vrq;
        v(r, q) = s * vrp + cfc * vrq;
    }
}
} // namespace

EigResult hermitian_eig(const Mat& input) {
    const std::size_t n = input.rows();
    if (n != input.cols()) throw ValidationError("hermitian_eig: matrix is not square");

    Mat a = input;
    Mat v = Mat::identity(n);
    const double scale = std::max(a.frob_norm(), 1e-300);

    auto off_norm2 = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a(i, j));
        return s;
    };

    const double tol2 = 1e-28 * scale * scale;
    constexpr int kMaxSweeps = 64;
    int sweep = 0;
    while (off_norm2() > tol2) {
        if (++sweep > kMaxSweeps) throw ConvergenceError("hermitian_eig: Jacobi sweeps exhausted");
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigResult res;
    res.values.resize(n);
    res.vectors = Mat(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        res.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) res.vectors(r, k) = v(r, order[k]);
    }
    return res;
}

double trace_norm_hermitian(const Mat& a) {
    double s = 0.0;
    for (double lam : hermitian_eig(a).values) s += std::abs(lam);
    return s;
}

double sum_positive_eigenvalues(const Mat& a) {
    double s = 0.0;
    for (double lam : hermitian_eig(a).values) s += std::max(lam, 0.0);
    return s;
}

Mat psd_sqrt(const Mat& a) {
    const EigResult e = hermitian_eig(a);
    const std::size_t n = a.rows();
    Mat r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = std::sqrt(std::max(e.values[k], 0.0));
        if (lam == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += lam * e.vectors(i, k) * std::conj(e.vectors(j, k));
    }
    return r;
}

} // namespace ferdisc
