#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ferdisc {

using cplx = std::complex<double>;
using Vec = std::vector<cplx>;

/// Dense row-major complex matrix. All operators in this project are small
/// (dimension <= 256), so everything is kept dense and exact.
class Mat {
  public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Mat identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<cplx>& data() const { return data_; }
    std::vector<cplx>& data() { return data_; }

    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat operator*(const Mat& o) const;
    Mat operator*(cplx s) const;

    Mat adjoint() const;
    cplx trace() const;
    double frob_norm() const;
    double max_abs() const;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> data_;
};

cplx dot(const Vec& a, const Vec& b); // conjugate-linear in the first argument
double norm2(const Vec& v);
double norm(const Vec& v);
Vec scaled(const Vec& v, cplx s);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);

Vec mat_vec(const Mat& m, const Vec& v);
Mat outer(const Vec& u, const Vec& v); // |u><v|

/// A[idx[a], idx[b]] as a dense block.
Mat submatrix(const Mat& m, const std::vector<std::size_t>& idx);
/// Inverse of submatrix: writes block into an n x n zero matrix at idx positions.
Mat embed(const Mat& block, const std::vector<std::size_t>& idx, std::size_t n);

struct EigResult {
    std::vector<double> values; // ascending
    Mat vectors;                // column k is the eigenvector of values[k]
};

/// Cyclic Jacobi eigensolver for complex Hermitian matrices.
/// Throws ConvergenceError if the off-diagonal mass does not vanish.
EigResult hermitian_eig(const Mat& a);

double trace_norm_hermitian(const Mat& a);
double sum_positive_eigenvalues(const Mat& a);
Mat psd_sqrt(const Mat& a);

} // namespace ferdisc
