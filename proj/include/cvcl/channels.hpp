// Copyright 2026 The cvcl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cvcl/common.hpp"
#include "cvcl/eig.hpp"
#include "cvcl/grid.hpp"
#include "cvcl/state.hpp"

namespace cvcl {

/// Relative-coordinate suppression function g sampled on the difference
/// lattice xi_k = k*dx, k = -(n-1)..(n-1). Conventions enforced at
/// construction: g(0) = 1 exactly, |g| <= 1, and the unbiased-noise symmetry
/// g(-xi) = g(xi)^*.
class DephasingKernel {
 public:
  enum class Kind { gaussian, from_kicks, from_pointer, step, custom };

  struct Metadata {
    std::optional<double> ell_g;
    std::optional<double> epsilon;
    std::optional<double> eta;
    std::optional<double> pointer_scale;
  };

  static DephasingKernel from_values(const Grid& grid, Eigen::VectorXcd values,
                                     Kind kind, Metadata meta = {}) {
    const int n = grid.n_points;
    if (values.size() != 2 * n - 1)
      throw invalid_kernel_error("DephasingKernel: need 2n-1 difference-lattice values");
    DephasingKernel k(grid, std::move(values), kind, meta);
    k.validate();
    return k;
  }

  const Grid& grid() const { return grid_; }
  Kind kind() const { return kind_; }
  const Metadata& metadata() const { return meta_; }
  const Eigen::VectorXcd& values() const { return values_; }

  /// Kernel value at integer offset k = i - j.
  complex_t at_offset(int k) const { return values_(k + grid_.n_points - 1); }

  /// Kernel value at a physical separation, linearly interpolated between
  /// difference-lattice samples.
  complex_t at_separation(double xi) const {
    const int n = grid_.n_points;
    const double u = xi / grid_.dx;
    if (u < -(n - 1.0) || u > (n - 1.0))
      throw resolution_error("DephasingKernel: separation outside difference lattice");
    const double fl = std::floor(u);
    int k0 = static_cast<int>(fl);
    if (k0 >= n - 1) k0 = n - 2;
    const double t = u - k0;
    return (1.0 - t) * at_offset(k0) + t * at_offset(k0 + 1);
  }

  /// Entrywise square, i.e. the kernel of the twice-applied channel.
  DephasingKernel squared() const {
    Eigen::VectorXcd v = values_.array() * values_.array();
    return DephasingKernel(grid_, std::move(v), kind_ == Kind::step ? Kind::step : Kind::custom,
                           meta_);
  }

 private:
  DephasingKernel(const Grid& grid, Eigen::VectorXcd values, Kind kind, Metadata meta)
      : grid_(grid), values_(std::move(values)), kind_(kind), meta_(meta) {}

  void validate() const {
    const int n = grid_.n_points;
    if (values_(n - 1) != complex_t(1.0, 0.0))
      throw invalid_kernel_error("DephasingKernel: g(0) must equal 1 exactly");
    for (int k = -(n - 1); k <= n - 1; ++k) {
      if (std::abs(at_offset(k)) > 1.0 + tol::kernel_bound())
        throw invalid_kernel_error("DephasingKernel: |g| exceeds 1 at offset " +
                                   std::to_string(k));
      if (std::abs(at_offset(-k) - std::conj(at_offset(k))) > tol::kernel_bound())
        throw invalid_kernel_error("DephasingKernel: conjugate symmetry violated at offset " +
                                   std::to_string(k));
    }
  }

  Grid grid_;
  Eigen::VectorXcd values_;
  Kind kind_;
  Metadata meta_;
};

inline DephasingKernel gaussian_kernel(const Grid& grid, double ell_g) {
  if (!(ell_g > 0.0))
    throw invalid_kernel_error("gaussian_kernel: ell_g must be positive");
  const int n = grid.n_points;
  Eigen::VectorXcd v(2 * n - 1);
  for (int k = -(n - 1); k <= n - 1; ++k) {
    const double xi = k * grid.dx;
    v(k + n - 1) = std::exp(-xi * xi / (2.0 * ell_g * ell_g));
  }
  v(n - 1) = 1.0;
  DephasingKernel::Metadata meta;
  meta.ell_g = ell_g;
  return DephasingKernel::from_values(grid, std::move(v), DephasingKernel::Kind::gaussian,
                                      meta);
}

namespace detail {

/// Integer step count of a closed strip |x_i - x_j| <= epsilon; lattice ties
/// are included, so epsilon = k*dx keeps offset k.
inline int strip_offset_count(const Grid& grid, double epsilon) {
  if (epsilon < 0.0) throw domain_error("strip mask: epsilon must be >= 0");
  const double u = epsilon / grid.dx + 1e-9;
  const int n = grid.n_points;
  if (u >= n - 1.0) return n - 1;  // clamp before the cast can overflow
  return static_cast<int>(std::floor(u));
}

}  // namespace detail

/// Hard 0/1 mask kernel keeping |xi| <= epsilon.
inline DephasingKernel step_kernel(const Grid& grid, double epsilon) {
  const int n = grid.n_points;
  const int kmax = detail::strip_offset_count(grid, epsilon);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * n - 1);
  for (int k = -kmax; k <= kmax; ++k) v(k + n - 1) = 1.0;
  DephasingKernel::Metadata meta;
  meta.epsilon = epsilon;
  return DephasingKernel::from_values(grid, std::move(v), DephasingKernel::Kind::step, meta);
}

/// Momentum-kick distribution: analytic Gaussian of spread eta, or a sampled
/// set {p_j, w_j}. Weights are normalized probabilities and, by the
/// unbiased-noise convention, the mean kick vanishes.
class KickDistribution {
 public:
  static KickDistribution gaussian(double eta) {
    if (!(eta > 0.0)) throw domain_error("KickDistribution: eta must be positive");
    KickDistribution k;
    k.eta_ = eta;
    return k;
  }

  static KickDistribution sampled(std::vector<double> momenta, std::vector<double> weights) {
    if (momenta.empty() || momenta.size() != weights.size())
      throw weight_sum_error("KickDistribution: momenta/weights mismatch");
    double wsum = 0.0, mean = 0.0, msq = 0.0;
    for (std::size_t j = 0; j < momenta.size(); ++j) {
      if (weights[j] < 0.0) throw weight_sum_error("KickDistribution: negative weight");
      wsum += weights[j];
      mean += weights[j] * momenta[j];
      msq += weights[j] * momenta[j] * momenta[j];
    }
    if (std::abs(wsum - 1.0) > tol::weight_sum())
      throw weight_sum_error("KickDistribution: weights sum to " + std::to_string(wsum));
    const double rms = std::sqrt(msq);
    if (std::abs(mean) > 1e-10 * std::max(rms, 1e-300))
      throw weight_sum_error("KickDistribution: nonzero mean momentum " +
                             std::to_string(mean));
    KickDistribution k;
    k.momenta_ = std::move(momenta);
    k.weights_ = std::move(weights);
    return k;
  }

  bool is_gaussian() const { return eta_.has_value(); }
  double eta() const {
    if (!eta_) throw domain_error("KickDistribution: not an analytic Gaussian");
    return *eta_;
  }
  const std::vector<double>& momenta() const { return momenta_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  KickDistribution() = default;
  std::optional<double> eta_;
  std::vector<double> momenta_;
  std::vector<double> weights_;
};

/// Meter wavepacket m(z) on its own lattice, with the interaction strength
/// folded into the single dimensionless factor scale = lambda*t.
struct PointerState {
  Grid grid;
  Eigen::VectorXcd amplitudes;
  double scale = 1.0;

  static PointerState from_samples(const Grid& g, Eigen::VectorXcd amps, double scale) {
    WaveFunction w = WaveFunction::from_samples(g, std::move(amps));
    return PointerState{g, w.amplitudes(), scale};
  }
};

namespace detail {

// Counter-based deterministic stream: a splitmix64 output function applied
// to seed + (index+1)*gamma. Stateless per index, so sample streams are
// nested across sample counts and batches can run concurrently.
inline std::uint64_t mix64(std::uint64_t state) {
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t stream_u64(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + (index + 1) * 0x9E3779B97F4A7C15ull);
}

inline double standard_normal(std::uint64_t seed, std::uint64_t sample) {
  const std::uint64_t u1 = stream_u64(seed, 2 * sample);
  const std::uint64_t u2 = stream_u64(seed, 2 * sample + 1);
  const double d1 = static_cast<double>((u1 >> 11) + 1) * 0x1.0p-53;  // (0,1]
  const double d2 = static_cast<double>(u2 >> 11) * 0x1.0p-53;        // [0,1)
  return std::sqrt(-2.0 * std::log(d1)) * std::cos(2.0 * std::numbers::pi * d2);
}

inline double uniform01(std::uint64_t seed, std::uint64_t index) {
  return static_cast<double>(stream_u64(seed, index) >> 11) * 0x1.0p-53;
}

inline double draw_kick(const KickDistribution& kicks, std::uint64_t seed,
                        std::uint64_t sample) {
  if (kicks.is_gaussian()) return kicks.eta() * standard_normal(seed, sample);
  const double u = uniform01(seed, 2 * sample);
  double acc = 0.0;
  const auto& w = kicks.weights();
  for (std::size_t j = 0; j < w.size(); ++j) {
    acc += w[j];
    if (u < acc) return kicks.momenta()[j];
  }
  return kicks.momenta().back();
}

}  // namespace detail

inline DephasingKernel kernel_from_kicks(const Grid& grid, const KickDistribution& kicks,
                                         const Units& units) {
  const int n = grid.n_points;
  if (kicks.is_gaussian()) {
    // characteristic function of the Gaussian kick density
    const double ell = units.hbar / kicks.eta();
    Eigen::VectorXcd v(2 * n - 1);
    for (int k = -(n - 1); k <= n - 1; ++k) {
      const double xi = k * grid.dx;
      v(k + n - 1) = std::exp(-xi * xi / (2.0 * ell * ell));
    }
    v(n - 1) = 1.0;
    DephasingKernel::Metadata meta;
    meta.eta = kicks.eta();
    meta.ell_g = ell;
    return DephasingKernel::from_values(grid, std::move(v),
                                        DephasingKernel::Kind::from_kicks, meta);
  }
  Eigen::VectorXcd v(2 * n - 1);
  for (int k = 0; k <= n - 1; ++k) {
    const double xi = k * grid.dx;
    complex_t g = 0.0;
    for (std::size_t j = 0; j < kicks.momenta().size(); ++j)
      g += kicks.weights()[j] *
           std::exp(complex_t(0.0, kicks.momenta()[j] * xi / units.hbar));
    v(k + n - 1) = g;
    v(-k + n - 1) = std::conj(g);
  }
  v(n - 1) = 1.0;
  DephasingKernel::Metadata meta;
  double msq = 0.0;
  for (std::size_t j = 0; j < kicks.momenta().size(); ++j)
    msq += kicks.weights()[j] * kicks.momenta()[j] * kicks.momenta()[j];
  if (msq > 0.0) meta.eta = std::sqrt(msq);
  return DephasingKernel::from_values(grid, std::move(v),
                                      DephasingKernel::Kind::from_kicks, meta);
}

/// Kernel induced by a finite-resolution pointer: the autocorrelation
/// G(z) = int du m(u) m^*(u+z) is evaluated on the meter lattice and read out
/// at z = scale * xi by linear interpolation.
inline DephasingKernel kernel_from_pointer(const PointerState& pointer, const Grid& grid) {
  const int nm = pointer.grid.n_points;
  const double dz = pointer.grid.dx;
  const auto& m = pointer.amplitudes;

  Eigen::VectorXcd G(2 * nm - 1);
  for (int k = 0; k <= nm - 1; ++k) {
    complex_t acc = 0.0;
    for (int j = 0; j + k < nm; ++j) acc += m(j) * std::conj(m(j + k));
    acc *= dz;
    G(k + nm - 1) = acc;
    G(-k + nm - 1) = std::conj(acc);
  }
  const complex_t g0 = G(nm - 1);
  if (std::abs(g0) <= 0.0)
    throw normalization_error("kernel_from_pointer: pointer has zero norm");
  G /= g0;  // exact g(0)=1 on the lattice

  const int n = grid.n_points;
  const double reach = std::abs(pointer.scale) * (n - 1) * grid.dx;
  if (reach > (nm - 1) * dz * (1.0 + 1e-12))
    throw resolution_error(
        "kernel_from_pointer: scale*span exceeds the pointer lattice; widen the "
        "meter grid or reduce the scale");

  Eigen::VectorXcd v(2 * n - 1);
  for (int k = 0; k <= n - 1; ++k) {
    const double z = pointer.scale * k * grid.dx;
    const double u = z / dz;
    int k0 = static_cast<int>(std::floor(u));
    if (k0 >= nm - 1) k0 = nm - 2;
    if (k0 < -(nm - 1)) k0 = -(nm - 1);
    const double t = u - k0;
    complex_t g = (1.0 - t) * G(k0 + nm - 1) + t * G(k0 + nm);
    if (std::abs(g) > 1.0) g /= std::abs(g);  // clamp interpolation overshoot
    v(k + n - 1) = g;
    v(-k + n - 1) = std::conj(g);
  }
  v(n - 1) = 1.0;
  DephasingKernel::Metadata meta;
  meta.pointer_scale = pointer.scale;
  return DephasingKernel::from_values(grid, std::move(v),
                                      DephasingKernel::Kind::from_pointer, meta);
}

/// Position-basis dephasing: rho(x,y) -> g(x-y) rho(x,y). Diagonal (and thus
/// the trace) is preserved exactly because g(0) = 1 exactly.
inline DensityMatrix apply_dephasing(const DensityMatrix& rho, const DephasingKernel& kernel) {
  require_same_grid(rho.grid(), kernel.grid(), "apply_dephasing");
  const int n = rho.dim();
  Eigen::MatrixXcd m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = kernel.at_offset(i - j) * rho.matrix()(i, j);
  return DensityMatrix(rho.grid(), std::move(m));
}

inline DensityMatrix apply_dephasing_twice(const DensityMatrix& rho,
                                           const DephasingKernel& kernel) {
  return apply_dephasing(apply_dephasing(rho, kernel), kernel);
}

/// Monte Carlo realization of the random-kick channel: the empirical mean of
/// U_p rho U_p^dagger over kicks drawn from the distribution. On a uniform
/// lattice each sampled conjugation is the Hadamard mask e^{i p (x_i-x_j)/hbar},
/// so the sample average is accumulated on the difference lattice. Samples are
/// keyed by a counter-based stream, partitioned into fixed batches whose
/// partial sums are combined in index order; results are deterministic for a
/// given seed and independent of scheduling.
inline DensityMatrix apply_random_kicks_mc(const DensityMatrix& rho,
                                           const KickDistribution& kicks, long n_samples,
                                           std::uint64_t seed, const Units& units) {
  if (n_samples < 1) throw domain_error("apply_random_kicks_mc: n_samples must be >= 1");
  const int n = rho.dim();
  const double dx = rho.grid().dx;
  constexpr long kBatch = 16384;
  const long n_batches = (n_samples + kBatch - 1) / kBatch;

  auto batch_sum = [&](long b) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(n);  // offsets k = 0..n-1
    const long lo = b * kBatch;
    const long hi = std::min(n_samples, lo + kBatch);
    for (long s = lo; s < hi; ++s) {
      const double p = detail::draw_kick(kicks, seed, static_cast<std::uint64_t>(s));
      const complex_t w = std::exp(complex_t(0.0, p * dx / units.hbar));
      complex_t z = 1.0;
      for (int k = 0; k < n; ++k) {
        acc(k) += z;
        z *= w;
      }
    }
    return acc;
  };

  std::vector<std::future<Eigen::VectorXcd>> futures;
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  Eigen::VectorXcd total = Eigen::VectorXcd::Zero(n);
  for (long b0 = 0; b0 < n_batches; b0 += workers) {
    futures.clear();
    const long b1 = std::min(n_batches, b0 + static_cast<long>(workers));
    for (long b = b0; b < b1; ++b)
      futures.push_back(std::async(std::launch::async, batch_sum, b));
    for (auto& f : futures) total += f.get();  // fixed batch order
  }

  Eigen::VectorXcd v(2 * n - 1);
  for (int k = 0; k < n; ++k) {
    const complex_t g = total(k) / static_cast<double>(n_samples);
    v(k + n - 1) = g;
    v(-k + n - 1) = std::conj(g);
  }
  v(n - 1) = 1.0;  // each sample contributes exactly 1 at zero offset
  auto kernel = DephasingKernel::from_values(rho.grid(), std::move(v),
                                             DephasingKernel::Kind::from_kicks, {});
  return apply_dephasing(rho, kernel);
}

/// Result of the sharp strip mask. The mask is trace preserving and
/// idempotent but not completely positive, so the output is reported as a raw
/// kernel matrix with its spectral validity.
struct StepMaskResult {
  Grid grid;
  Eigen::MatrixXcd matrix;
  double trace = 0.0;
  double min_eigenvalue = 0.0;
  bool is_state = false;
};

inline StepMaskResult apply_step_projector(const DensityMatrix& rho, double epsilon) {
  const int n = rho.dim();
  const int kmax = detail::strip_offset_count(rho.grid(), epsilon);
  Eigen::MatrixXcd m = rho.matrix();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (std::abs(i - j) > kmax) m(i, j) = complex_t(0.0, 0.0);
  StepMaskResult r;
  r.grid = rho.grid();
  r.trace = m.trace().real();
  r.min_eigenvalue = eig::min_eigenvalue(m);
  r.is_state = r.min_eigenvalue >= -tol::positivity() &&
               std::abs(r.trace - 1.0) <= tol::trace();
  r.matrix = std::move(m);
  return r;
}

/// Entrywise division by the kernel; a partial inverse that exists only where
/// |g| stays above the floor, and whose output need not be a state.
struct InverseDephasingResult {
  Grid grid;
  Eigen::MatrixXcd matrix;
  bool is_state = false;
  double min_eigenvalue = 0.0;
  double trace_hs = 0.0;  // Tr(rho~^2)
};

inline InverseDephasingResult inverse_dephasing(const DensityMatrix& rho,
                                                const DephasingKernel& kernel,
                                                double floor = 1e-12) {
  require_same_grid(rho.grid(), kernel.grid(), "inverse_dephasing");
  const int n = rho.dim();
  for (int k = -(n - 1); k <= n - 1; ++k)
    if (std::abs(kernel.at_offset(k)) < floor)
      throw singular_kernel_error("inverse_dephasing: |g| below floor at offset " +
                                  std::to_string(k));
  Eigen::MatrixXcd m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = rho.matrix()(i, j) / kernel.at_offset(i - j);
  InverseDephasingResult r;
  r.grid = rho.grid();
  r.trace_hs = m.squaredNorm();
  r.min_eigenvalue = eig::min_eigenvalue(m);
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const double trace_defect = std::abs(m.trace() - complex_t(1.0, 0.0));
  r.is_state = herm <= tol::hermiticity() && trace_defect <= tol::trace() &&
               r.min_eigenvalue >= -tol::state_positivity_report();
  r.matrix = std::move(m);
  return r;
}

}  // namespace cvcl
