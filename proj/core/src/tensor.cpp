#include "mvgl/tensor.hpp"

#include "mvgl/error.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <string>

namespace mvgl {
namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan {
 public:
  explicit Plan(fftw_plan plan) : plan_(plan) {}
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    if (plan_ != nullptr) {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(plan_);
    }
  }
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

void require_finite(const RealTensor3& t, const char* what) {
  if (!t.all_finite()) {
    throw InvalidInput(std::string(what) + ": tensor has non-finite entries");
  }
}

void require_p(double p, const char* what) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw InvalidParameter(std::string(what) + ": p must lie in (0, 1], got " +
                           std::to_string(p));
  }
}

// Number of mode-3 spectral slices kept by the real transforms.
Index half_length(Index n3) { return n3 / 2 + 1; }

// Slices 0 and n3/2 (even n3) are their own conjugates; every other slice in
// the half spectrum stands for itself and its mirror.
double mirror_weight(Index k, Index n3) {
  if (k == 0) return 1.0;
  if (n3 % 2 == 0 && k == n3 / 2) return 1.0;
  return 2.0;
}

}  // namespace

SliceSVD slice_svd(const Eigen::Ref<const Eigen::MatrixXcd>& slice) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(slice, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

ComplexTensor3 half_spectrum(const RealTensor3& t) {
  require_finite(t, "fft_mode3");
  const Index n1 = t.dim1(), n2 = t.dim2(), n3 = t.dim3();
  const Index nh = half_length(n3);
  ComplexTensor3 out(n1, n2, nh);
  if (t.size() == 0) return out;

  const int n = static_cast<int>(n3);
  const int howmany = static_cast<int>(n1 * n2);
  const int stride = howmany;
  std::vector<double> in(t.values().begin(), t.values().end());
  fftw_plan raw;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    raw = fftw_plan_many_dft_r2c(1, &n, howmany, in.data(), nullptr, stride, 1,
                                 reinterpret_cast<fftw_complex*>(out.data()), nullptr, stride, 1,
                                 FFTW_ESTIMATE);
  }
  Plan plan(raw);
  plan.execute();
  return out;
}

RealTensor3 from_half_spectrum(const ComplexTensor3& half, Index n3) {
  const Index n1 = half.dim1(), n2 = half.dim2();
  if (half.dim3() != half_length(n3)) {
    throw InvalidInput("from_half_spectrum: expected " + std::to_string(half_length(n3)) +
                       " spectral slices, got " + std::to_string(half.dim3()));
  }
  RealTensor3 out(n1, n2, n3);
  if (out.size() == 0) return out;

  const int n = static_cast<int>(n3);
  const int howmany = static_cast<int>(n1 * n2);
  const int stride = howmany;
  // c2r overwrites its input.
  std::vector<std::complex<double>> in(half.values().begin(), half.values().end());
  fftw_plan raw;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    raw = fftw_plan_many_dft_c2r(1, &n, howmany, reinterpret_cast<fftw_complex*>(in.data()),
                                 nullptr, stride, 1, out.data(), nullptr, stride, 1,
                                 FFTW_ESTIMATE);
  }
  Plan plan(raw);
  plan.execute();
  out *= 1.0 / static_cast<double>(n3);
  return out;
}

ComplexTensor3 fft_mode3(const RealTensor3& t) {
  const Index n1 = t.dim1(), n2 = t.dim2(), n3 = t.dim3();
  if (n3 < 1) throw InvalidInput("fft_mode3: n3 must be at least 1");
  const ComplexTensor3 half = half_spectrum(t);
  ComplexTensor3 full(n1, n2, n3);
  for (Index k = 0; k < half.dim3(); ++k) full.slice(k) = half.slice(k);
  for (Index k = half.dim3(); k < n3; ++k) full.slice(k) = half.slice(n3 - k).conjugate();
  return full;
}

RealTensor3 ifft_mode3(const ComplexTensor3& t) {
  const Index n3 = t.dim3();
  if (n3 < 1) throw InvalidInput("ifft_mode3: n3 must be at least 1");
  if (!t.all_finite()) throw InvalidInput("ifft_mode3: tensor has non-finite entries");

  const double tol = 1e-8 * std::max(1.0, t.max_abs());
  for (Index k = 0; k < n3; ++k) {
    const Index mirror = (n3 - k) % n3;
    if (mirror < k) continue;
    const double gap = (t.slice(k) - t.slice(mirror).conjugate()).cwiseAbs().maxCoeff();
    if (gap > tol) {
      throw InvalidInput("ifft_mode3: spectral slices " + std::to_string(k) + " and " +
                         std::to_string(mirror) + " are not conjugate symmetric (gap " +
                         std::to_string(gap) + ")");
    }
  }

  ComplexTensor3 half(t.dim1(), t.dim2(), half_length(n3));
  for (Index k = 0; k < half.dim3(); ++k) half.slice(k) = t.slice(k);
  return from_half_spectrum(half, n3);
}

double schatten_p_power(const RealTensor3& t, double p) {
  require_p(p, "schatten_p_norm");
  const ComplexTensor3 half = half_spectrum(t);
  const Index n3 = t.dim3();

  std::vector<Eigen::VectorXd> singulars;
  singulars.reserve(static_cast<std::size_t>(half.dim3()));
  double largest = 0.0;
  for (Index k = 0; k < half.dim3(); ++k) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(half.slice(k));
    singulars.push_back(svd.singularValues());
    if (singulars.back().size() > 0) largest = std::max(largest, singulars.back()(0));
  }

  const double floor = 1e-14 * largest;
  double sum = 0.0;
  for (Index k = 0; k < half.dim3(); ++k) {
    double slice_sum = 0.0;
    for (const double s : singulars[static_cast<std::size_t>(k)]) {
      if (s > floor) slice_sum += std::pow(s, p);
    }
    sum += mirror_weight(k, n3) * slice_sum;
  }
  return sum;
}

double schatten_p_norm(const RealTensor3& t, double p) {
  const double power = schatten_p_power(t, p);
  return power > 0.0 ? std::pow(power, 1.0 / p) : 0.0;
}

double gst_scalar(double sigma, double w, double p) {
  if (p >= 1.0) return std::max(sigma - w, 0.0);
  if (w <= 0.0) return sigma;

  const double base = 2.0 * w * (1.0 - p);
  const double threshold =
      std::pow(base, 1.0 / (2.0 - p)) + w * p * std::pow(base, (p - 1.0) / (2.0 - p));
  if (sigma <= threshold) return 0.0;

  double delta = sigma;
  for (int step = 0; step < 50; ++step) {
    const double next = sigma - w * p * std::pow(delta, p - 1.0);
    const double change = std::abs(next - delta);
    delta = next;
    if (change < 1e-12) break;
  }
  return std::clamp(delta, 0.0, sigma);
}

RealTensor3 prox_schatten_p(const RealTensor3& x, double tau, double p) {
  require_p(p, "prox_schatten_p");
  if (!(tau >= 0.0)) {
    throw InvalidParameter("prox_schatten_p: tau must be nonnegative, got " + std::to_string(tau));
  }
  require_finite(x, "prox_schatten_p");
  if (tau == 0.0) return x;

  const Index n3 = x.dim3();
  const double weight = tau * static_cast<double>(n3);
  ComplexTensor3 half = half_spectrum(x);

  for (Index k = 0; k < half.dim3(); ++k) {
    const SliceSVD svd = slice_svd(half.slice(k));
    Eigen::VectorXd shrunk(svd.singulars.size());
    for (Index j = 0; j < shrunk.size(); ++j) {
      const double s = svd.singulars(j) < 1e-14 ? 0.0 : svd.singulars(j);
      shrunk(j) = s == 0.0 ? 0.0 : gst_scalar(s, weight, p);
    }
    half.slice(k) = svd.left * shrunk.asDiagonal() * svd.right.adjoint();
  }
  // The DC slice (and the Nyquist slice for even n3) of a real tensor is real;
  // the SVD reconstruction above may leave round-off in its imaginary part,
  // which c2r ignores.
  return from_half_spectrum(half, n3);
}

}  // namespace mvgl
