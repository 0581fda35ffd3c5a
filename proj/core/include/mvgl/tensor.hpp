#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mvgl {

using Index = Eigen::Index;

/// Dense third-order tensor stored as n3 column-major n1 x n2 frontal slices.
///
/// Entry (i, j, k) lives at i + n1 * (j + n2 * k), so a frontal slice is a
/// contiguous block and a lateral slice (fixed j) is an n1 x n3 matrix with
/// outer stride n1 * n2. The solver uses dims N x V x M: lateral slice v is
/// view v's anchor graph, frontal slices are N x V.
template <typename Scalar>
class Tensor3 {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using SliceMap = Eigen::Map<Matrix>;
  using ConstSliceMap = Eigen::Map<const Matrix>;
  using LateralMap = Eigen::Map<Matrix, 0, Eigen::OuterStride<>>;
  using ConstLateralMap = Eigen::Map<const Matrix, 0, Eigen::OuterStride<>>;

  Tensor3() = default;
  Tensor3(Index n1, Index n2, Index n3)
      : n1_(n1), n2_(n2), n3_(n3), values_(static_cast<std::size_t>(n1 * n2 * n3), Scalar(0)) {}

  Index dim1() const { return n1_; }
  Index dim2() const { return n2_; }
  Index dim3() const { return n3_; }
  std::size_t size() const { return values_.size(); }

  Scalar& operator()(Index i, Index j, Index k) { return values_[offset(i, j, k)]; }
  const Scalar& operator()(Index i, Index j, Index k) const { return values_[offset(i, j, k)]; }

  SliceMap slice(Index k) { return SliceMap(values_.data() + k * n1_ * n2_, n1_, n2_); }
  ConstSliceMap slice(Index k) const {
    return ConstSliceMap(values_.data() + k * n1_ * n2_, n1_, n2_);
  }

  LateralMap lateral(Index j) {
    return LateralMap(values_.data() + j * n1_, n1_, n3_, Eigen::OuterStride<>(n1_ * n2_));
  }
  ConstLateralMap lateral(Index j) const {
    return ConstLateralMap(values_.data() + j * n1_, n1_, n3_, Eigen::OuterStride<>(n1_ * n2_));
  }

  std::span<Scalar> values() { return values_; }
  std::span<const Scalar> values() const { return values_; }
  Scalar* data() { return values_.data(); }
  const Scalar* data() const { return values_.data(); }

  bool same_shape(const Tensor3& other) const {
    return n1_ == other.n1_ && n2_ == other.n2_ && n3_ == other.n3_;
  }

  Tensor3& operator+=(const Tensor3& other) {
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
  }
  Tensor3& operator-=(const Tensor3& other) {
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
  }
  Tensor3& operator*=(Scalar c) {
    for (auto& x : values_) x *= c;
    return *this;
  }
  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
  friend Tensor3 operator*(Scalar c, Tensor3 a) { return a *= c; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& x : values_) m = std::max(m, static_cast<double>(std::abs(x)));
    return m;
  }
  double squared_norm() const {
    double s = 0.0;
    for (const auto& x : values_) s += std::norm(x);
    return s;
  }
  bool all_finite() const {
    for (const auto& x : values_) {
      if (!std::isfinite(std::real(x)) || !std::isfinite(std::imag(x))) return false;
    }
    return true;
  }

 private:
  std::size_t offset(Index i, Index j, Index k) const {
    return static_cast<std::size_t>(i + n1_ * (j + n2_ * k));
  }

  Index n1_ = 0;
  Index n2_ = 0;
  Index n3_ = 0;
  std::vector<Scalar> values_;
};

using RealTensor3 = Tensor3<double>;
using ComplexTensor3 = Tensor3<std::complex<double>>;

/// Thin SVD of one (spectral) frontal slice; singulars descending.
struct SliceSVD {
  Eigen::MatrixXcd left;
  Eigen::VectorXd singulars;
  Eigen::MatrixXcd right;
};

SliceSVD slice_svd(const Eigen::Ref<const Eigen::MatrixXcd>& slice);

/// DFT of every tube t(i, j, :). Throws InvalidInput on non-finite entries.
ComplexTensor3 fft_mode3(const RealTensor3& t);

/// Inverse of fft_mode3. The input must be conjugate symmetric along mode 3
/// (slice k == conj(slice n3 - k)) to 1e-8 relative to its largest entry;
/// otherwise InvalidInput. Imaginary round-off is dropped.
RealTensor3 ifft_mode3(const ComplexTensor3& t);

/// Half spectrum: slices 0 .. n3/2 of fft_mode3(t). The rest follow by
/// conjugate symmetry.
ComplexTensor3 half_spectrum(const RealTensor3& t);

/// Real tensor with n3 slices whose half spectrum is `half`.
RealTensor3 from_half_spectrum(const ComplexTensor3& half, Index n3);

/// Tensor Schatten p-norm: (sum over spectral slices and their singular
/// values of sigma^p)^(1/p). Requires 0 < p <= 1.
double schatten_p_norm(const RealTensor3& t, double p);

/// The same sum without the outer 1/p power, i.e. ||t||_Sp^p. This is the
/// quantity that appears in the clustering objective.
double schatten_p_power(const RealTensor3& t, double p);

/// Generalized soft-thresholding: argmin_{d >= 0} 0.5 (d - sigma)^2 + w d^p.
double gst_scalar(double sigma, double w, double p);

/// argmin_J 0.5 ||J - x||_F^2 + tau ||J||_Sp^p, computed slice-wise in the
/// Fourier domain with shrinkage weight tau * n3 on every singular value.
RealTensor3 prox_schatten_p(const RealTensor3& x, double tau, double p);

}  // namespace mvgl
