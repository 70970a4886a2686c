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
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "cvcl/common.hpp"
#include "cvcl/eig.hpp"
#include "cvcl/grid.hpp"

namespace cvcl {

/// Gaussian packet parameters. The packet must keep a 6-sigma margin from
/// both grid edges; the margin is validated when a wavefunction is built.
struct GaussianParams {
  double x0 = 0.0;
  double sigma = 1.0;

  GaussianParams(double center, double width) : x0(center), sigma(width) {
    if (!(sigma > 0.0))
      throw domain_error("GaussianParams: sigma must be positive");
  }
};

/// Discretized wavefunction. Normalized so that sum_i |psi_i|^2 * dx = 1.
class WaveFunction {
 public:
  static WaveFunction from_samples(const Grid& grid, Eigen::VectorXcd amplitudes) {
    if (amplitudes.size() != grid.n_points)
      throw invalid_range_error("WaveFunction: amplitude count does not match grid");
    const double nrm2 = amplitudes.squaredNorm() * grid.dx;
    if (!(nrm2 > 0.0))
      throw normalization_error("WaveFunction: zero-norm amplitudes");
    amplitudes /= std::sqrt(nrm2);
    return WaveFunction(grid, std::move(amplitudes));
  }

  const Grid& grid() const { return grid_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  double norm_squared() const { return amplitudes_.squaredNorm() * grid_.dx; }

 private:
  WaveFunction(const Grid& grid, Eigen::VectorXcd amplitudes)
      : grid_(grid), amplitudes_(std::move(amplitudes)) {}

  Grid grid_;
  Eigen::VectorXcd amplitudes_;
};

/// Raw lattice samples of the analytic Gaussian, before renormalization.
/// Useful for convergence studies of the discrete norm.
inline Eigen::VectorXcd gaussian_samples(const Grid& grid, const GaussianParams& p) {
  Eigen::VectorXcd v(grid.n_points);
  const double pref = std::pow(2.0 * std::numbers::pi * p.sigma * p.sigma, -0.25);
  for (int i = 0; i < grid.n_points; ++i) {
    const double u = grid.point(i) - p.x0;
    v(i) = pref * std::exp(-u * u / (4.0 * p.sigma * p.sigma));
  }
  return v;
}

inline WaveFunction gaussian_wavefunction(const Grid& grid, const GaussianParams& p) {
  const double margin_lo = p.x0 - grid.x_min;
  const double margin_hi = grid.x_max - p.x0;
  const double required = 6.0 * p.sigma * (1.0 - 1e-12);
  if (margin_lo < required || margin_hi < required)
    throw packet_clipped_error(
        "gaussian_wavefunction: packet at x0=" + std::to_string(p.x0) +
        " needs a 6*sigma margin inside [" + std::to_string(grid.x_min) + ", " +
        std::to_string(grid.x_max) + "]");
  return WaveFunction::from_samples(grid, gaussian_samples(grid, p));
}

/// Discretized density operator with the convention M_ij = rho(x_i, x_j)*dx,
/// so traces, Hilbert-Schmidt norms and eigenvalues are plain matrix
/// quantities with no further dx weighting.
class DensityMatrix {
 public:
  DensityMatrix(const Grid& grid, Eigen::MatrixXcd entries)
      : grid_(grid), m_(std::move(entries)) {
    if (m_.rows() != m_.cols())
      throw invalid_range_error("DensityMatrix: matrix not square");
    if (m_.rows() != grid_.n_points)
      throw invalid_range_error("DensityMatrix: size does not match grid");
    const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol::hermiticity())
      throw numeric_error("DensityMatrix: Hermiticity defect " + std::to_string(herm));
    const complex_t tr = m_.trace();
    if (std::abs(tr - 1.0) > tol::trace())
      throw normalization_error("DensityMatrix: trace defect " +
                                std::to_string(std::abs(tr - 1.0)));
  }

  const Grid& grid() const { return grid_; }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

  double trace() const { return m_.trace().real(); }
  double purity() const { return m_.squaredNorm(); }

  /// Smallest eigenvalue; O(n^3), meant for validation and reports.
  double min_eigenvalue() const { return eig::min_eigenvalue(m_); }

 private:
  Grid grid_;
  Eigen::MatrixXcd m_;
};

inline DensityMatrix pure_state_density(const WaveFunction& psi) {
  const auto& a = psi.amplitudes();
  Eigen::MatrixXcd m = a * a.adjoint() * psi.grid().dx;
  return DensityMatrix(psi.grid(), std::move(m));
}

inline DensityMatrix mix(const std::vector<DensityMatrix>& states,
                         const std::vector<double>& weights) {
  if (states.empty() || states.size() != weights.size())
    throw weight_sum_error("mix: states and weights must be non-empty and match");
  double wsum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw weight_sum_error("mix: negative weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > tol::weight_sum())
    throw weight_sum_error("mix: weights sum to " + std::to_string(wsum));
  const Grid& g = states.front().grid();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(g.n_points, g.n_points);
  for (std::size_t k = 0; k < states.size(); ++k) {
    require_same_grid(g, states[k].grid(), "mix");
    m += weights[k] * states[k].matrix();
  }
  return DensityMatrix(g, std::move(m));
}

/// Product state on the composite lattice. The composite index lattice is
/// synthetic (unit spacing); it only supports trace/spectral operations, not
/// position-kernel channels.
inline DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b,
                                    int max_dim = 4096) {
  const long na = a.dim(), nb = b.dim();
  if (na * nb > max_dim)
    throw size_cap_error("tensor_product: " + std::to_string(na) + "x" +
                         std::to_string(nb) + " exceeds cap " + std::to_string(max_dim));
  const int n = static_cast<int>(na * nb);
  Eigen::MatrixXcd m(n, n);
  for (long ia = 0; ia < na; ++ia)
    for (long ja = 0; ja < na; ++ja)
      m.block(ia * nb, ja * nb, nb, nb) = a.matrix()(ia, ja) * b.matrix();
  return DensityMatrix(make_grid(0.0, n - 1.0, n), std::move(m));
}

}  // namespace cvcl
