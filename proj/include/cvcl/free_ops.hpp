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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cvcl/channels.hpp"
#include "cvcl/common.hpp"
#include "cvcl/grid.hpp"
#include "cvcl/measures.hpp"
#include "cvcl/state.hpp"

namespace cvcl {

/// Finite Kraus instrument {K_k}. Construction enforces the completeness
/// relation sum_k K_k^dag K_k = 1.
class KrausInstrument {
 public:
  KrausInstrument(const Grid& grid, std::vector<Eigen::MatrixXcd> branches,
                  std::vector<std::string> labels = {})
      : grid_(grid), branches_(std::move(branches)), labels_(std::move(labels)) {
    if (branches_.empty())
      throw completeness_error("KrausInstrument: no branches");
    const int n = grid_.n_points;
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& k : branches_) {
      if (k.rows() != n || k.cols() != n)
        throw invalid_range_error("KrausInstrument: branch size does not match grid");
      acc += k.adjoint() * k;
    }
    const double defect =
        (acc - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (defect > tol::completeness())
      throw completeness_error("KrausInstrument: completeness defect " +
                               std::to_string(defect));
    if (labels_.empty())
      for (std::size_t i = 0; i < branches_.size(); ++i)
        labels_.push_back("K_" + std::to_string(i));
  }

  const Grid& grid() const { return grid_; }
  const std::vector<Eigen::MatrixXcd>& branches() const { return branches_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return branches_.size(); }

 private:
  Grid grid_;
  std::vector<Eigen::MatrixXcd> branches_;
  std::vector<std::string> labels_;
};

struct InstrumentOutcome {
  std::vector<double> probabilities;
  // normalized post-measurement states, present only where p_k is significant
  std::vector<std::optional<DensityMatrix>> post_states;
  DensityMatrix unconditional;
};

struct LatticeOperator {
  Eigen::MatrixXcd matrix;
  int truncated_sites = 0;  // lattice sites whose image falls off the grid
};

/// Lattice translation by an integer number of steps; sites translated past
/// the edge are dropped, so the operator is an isometry on the interior only.
inline LatticeOperator translation_operator(const Grid& grid, int shift_steps) {
  const int n = grid.n_points;
  if (shift_steps <= -n || shift_steps >= n)
    throw shift_error("translation_operator: |shift| must be below n_points");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int j = i + shift_steps;
    if (j >= 0 && j < n) m(j, i) = 1.0;
  }
  return LatticeOperator{std::move(m), std::abs(shift_steps)};
}

/// Diagonal projector onto lattice sites inside the closed interval.
inline Eigen::MatrixXcd projection_operator(const Grid& grid, double lo, double hi) {
  if (!(lo <= hi)) throw interval_error("projection_operator: empty interval");
  const int n = grid.n_points;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  int hits = 0;
  const double pad = 1e-9 * grid.dx;
  for (int i = 0; i < n; ++i) {
    const double x = grid.point(i);
    if (x >= lo - pad && x <= hi + pad) {
      m(i, i) = 1.0;
      ++hits;
    }
  }
  if (hits == 0)
    throw interval_error("projection_operator: interval does not intersect the grid");
  return m;
}

namespace detail {

inline int lattice_steps(const Grid& grid, double shift, const char* where) {
  const double u = shift / grid.dx;
  const double r = std::round(u);
  if (std::abs(u - r) > 1e-9)
    throw shift_error(std::string(where) + ": shift " + std::to_string(shift) +
                      " is not an integer multiple of dx");
  return static_cast<int>(r);
}

}  // namespace detail

/// Gaussian packet hard-truncated at 6 sigma, renormalized on the lattice.
/// Gives exactly compact support, as the disjoint-support constructions
/// require.
inline WaveFunction compact_gaussian_wavefunction(const Grid& grid,
                                                  const GaussianParams& p) {
  const double required = 6.0 * p.sigma * (1.0 - 1e-12);
  if (p.x0 - grid.x_min < required || grid.x_max - p.x0 < required)
    throw packet_clipped_error("compact_gaussian_wavefunction: 6*sigma support must fit");
  Eigen::VectorXcd v = gaussian_samples(grid, p);
  for (int i = 0; i < grid.n_points; ++i)
    if (std::abs(grid.point(i) - p.x0) > 6.0 * p.sigma) v(i) = 0.0;
  return WaveFunction::from_samples(grid, std::move(v));
}

/// Three-branch instrument {K_A, K_B, K_0}: translate the interval A = C + a
/// back onto the base support C, likewise for B = C + b, and absorb the rest.
/// C is the interval of the given width centered at x = 0.
inline KrausInstrument build_counterexample_instrument(const Grid& grid,
                                                       double support_width, double a,
                                                       double b) {
  if (!(support_width > 0.0))
    throw interval_error("build_counterexample_instrument: support_width must be > 0");
  const int steps_a = detail::lattice_steps(grid, a, "build_counterexample_instrument");
  const int steps_b = detail::lattice_steps(grid, b, "build_counterexample_instrument");
  const double half = support_width / 2.0;
  const double pad = 1e-9 * grid.dx;

  auto inside = [&](double lo, double hi) {
    return lo >= grid.x_min - pad && hi <= grid.x_max + pad;
  };
  if (!inside(-half, half) || !inside(a - half, a + half) || !inside(b - half, b + half))
    throw interval_error("build_counterexample_instrument: supports must lie inside the grid");
  if (std::min(a, b) + half >= std::max(a, b) - half - pad)
    throw overlap_error("build_counterexample_instrument: translated supports overlap");

  const Eigen::MatrixXcd pa = projection_operator(grid, a - half, a + half);
  const Eigen::MatrixXcd pb = projection_operator(grid, b - half, b + half);
  if ((pa * pb).cwiseAbs().maxCoeff() > 0.0)
    throw overlap_error("build_counterexample_instrument: site sets overlap");

  const Eigen::MatrixXcd va = translation_operator(grid, -steps_a).matrix;
  const Eigen::MatrixXcd vb = translation_operator(grid, -steps_b).matrix;
  const int n = grid.n_points;
  std::vector<Eigen::MatrixXcd> branches;
  branches.push_back(va * pa);
  branches.push_back(vb * pb);
  branches.push_back(Eigen::MatrixXcd::Identity(n, n) - pa - pb);
  return KrausInstrument(grid, std::move(branches), {"K_A", "K_B", "K_0"});
}

/// Single-branch instrument wrapping a unitary channel.
inline KrausInstrument unitary_channel(const Grid& grid, Eigen::MatrixXcd u,
                                       const std::string& label = "U") {
  std::vector<Eigen::MatrixXcd> b;
  b.push_back(std::move(u));
  return KrausInstrument(grid, std::move(b), {label});
}

/// Translation channel completed with the projector onto the sites whose
/// translate falls off the grid, so the instrument is exactly complete.
inline KrausInstrument translation_instrument(const Grid& grid, int shift_steps) {
  const auto v = translation_operator(grid, shift_steps);
  const int n = grid.n_points;
  Eigen::MatrixXcd rest = Eigen::MatrixXcd::Identity(n, n) - v.matrix.adjoint() * v.matrix;
  std::vector<Eigen::MatrixXcd> b;
  b.push_back(v.matrix);
  b.push_back(std::move(rest));
  return KrausInstrument(grid, std::move(b), {"V", "P_edge"});
}

/// Diagonal phase e^{i alpha x^2}; commutes with every difference kernel.
inline Eigen::MatrixXcd quadratic_phase_position_unitary(const Grid& grid, double alpha) {
  const int n = grid.n_points;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double x = grid.point(i);
    m(i, i) = std::exp(complex_t(0.0, alpha * x * x));
  }
  return m;
}

/// Quadratic phase in the momentum variable: exp(-i alpha K) with K the
/// lattice kinetic operator -(1/2) d^2/dx^2. This free-propagation unitary
/// does not commute with position dephasing.
inline Eigen::MatrixXcd quadratic_phase_momentum_unitary(const Grid& grid, double alpha) {
  const int n = grid.n_points;
  const double inv = 1.0 / (2.0 * grid.dx * grid.dx);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    k(i, i) = 2.0 * inv;
    if (i + 1 < n) {
      k(i, i + 1) = -inv;
      k(i + 1, i) = -inv;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
  const Eigen::MatrixXcd v = es.eigenvectors().cast<complex_t>();
  Eigen::VectorXcd phases(n);
  for (int i = 0; i < n; ++i)
    phases(i) = std::exp(complex_t(0.0, -alpha * es.eigenvalues()(i)));
  return v * phases.asDiagonal() * v.adjoint();
}

inline InstrumentOutcome apply_instrument(const DensityMatrix& rho,
                                          const KrausInstrument& instrument) {
  require_same_grid(rho.grid(), instrument.grid(), "apply_instrument");
  const int n = rho.dim();
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(n, n);
  std::vector<double> probs;
  std::vector<std::optional<DensityMatrix>> posts;
  double prob_sum = 0.0;
  for (const auto& k : instrument.branches()) {
    Eigen::MatrixXcd out = k * rho.matrix() * k.adjoint();
    const double p = out.trace().real();
    probs.push_back(p);
    prob_sum += p;
    if (p > tol::probability())
      posts.emplace_back(DensityMatrix(rho.grid(), out / p));
    else
      posts.emplace_back(std::nullopt);
    total += out;
  }
  if (std::abs(prob_sum - 1.0) > tol::trace())
    throw numeric_error("apply_instrument: outcome probabilities sum to " +
                        std::to_string(prob_sum));
  return InstrumentOutcome{std::move(probs), std::move(posts),
                           DensityMatrix(rho.grid(), std::move(total))};
}

enum class CovarianceMode { branchwise, unconditional };

/// Largest Frobenius commutation defect || Lambda(Delta rho) - Delta(Lambda rho) ||
/// over the test states. Branchwise mode checks every branch map K (.) K^dag
/// separately, which is the hypothesis the flagged-instrument arguments need.
inline double check_dephasing_covariance(const KrausInstrument& instrument,
                                         const DephasingKernel& kernel,
                                         const std::vector<DensityMatrix>& test_states,
                                         CovarianceMode mode = CovarianceMode::branchwise) {
  require_same_grid(instrument.grid(), kernel.grid(), "check_dephasing_covariance");
  const int n = instrument.grid().n_points;

  auto mask = [&](const Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd out(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) out(i, j) = kernel.at_offset(i - j) * m(i, j);
    return out;
  };

  double worst = 0.0;
  for (const auto& rho : test_states) {
    require_same_grid(rho.grid(), instrument.grid(), "check_dephasing_covariance");
    const Eigen::MatrixXcd dephased = mask(rho.matrix());
    if (mode == CovarianceMode::branchwise) {
      for (const auto& k : instrument.branches()) {
        const Eigen::MatrixXcd lhs = k * dephased * k.adjoint();
        const Eigen::MatrixXcd rhs = mask(k * rho.matrix() * k.adjoint());
        worst = std::max(worst, (lhs - rhs).norm());
      }
    } else {
      Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Zero(n, n);
      Eigen::MatrixXcd rhs_in = Eigen::MatrixXcd::Zero(n, n);
      for (const auto& k : instrument.branches()) {
        lhs += k * dephased * k.adjoint();
        rhs_in += k * rho.matrix() * k.adjoint();
      }
      worst = std::max(worst, (lhs - mask(rhs_in)).norm());
    }
  }
  return worst;
}

struct MonotonicityReport {
  double before = 0.0;
  double after = 0.0;
  bool holds = false;
  double covariance_defect = 0.0;
  bool in_dio = false;  // covariance defect within the gate
};

/// Checks that the relative-entropy loss does not increase under the
/// (unconditional) channel. The covariance defect is measured on the input
/// state; a large defect flags the verdict as outside the covariant class
/// rather than aborting.
inline MonotonicityReport verify_crel_monotonicity(const DensityMatrix& rho,
                                                   const KrausInstrument& channel,
                                                   const DephasingKernel& kernel) {
  MonotonicityReport r;
  r.covariance_defect =
      check_dephasing_covariance(channel, kernel, {rho}, CovarianceMode::unconditional);
  r.in_dio = r.covariance_defect <= tol::covariance_gate();
  r.before = c_rel_g(rho, kernel).value;
  const InstrumentOutcome out = apply_instrument(rho, channel);
  r.after = c_rel_g(out.unconditional, kernel).value;
  r.holds = r.after <= r.before + tol::monotonicity_slack();
  return r;
}

struct C2ViolationReport {
  double c2_in = 0.0;
  double c2_out = 0.0;
  double ratio = 0.0;
};

/// Reproduces the HS-loss monotonicity failure: an even mixture of two
/// disjoint translated packets is mapped by the translate-back instrument
/// onto the single packet, doubling the HS loss.
inline C2ViolationReport verify_c2_monotonicity_violation(const Grid& grid,
                                                          const GaussianParams& phi_params,
                                                          double a, double b,
                                                          const DephasingKernel& kernel) {
  // base support wide enough to hold the truncated packet even off-center
  const double width = 12.0 * phi_params.sigma + 2.0 * std::abs(phi_params.x0);
  const KrausInstrument instrument =
      build_counterexample_instrument(grid, width, a, b);

  const WaveFunction phi_a = compact_gaussian_wavefunction(
      grid, GaussianParams(phi_params.x0 + a, phi_params.sigma));
  const WaveFunction phi_b = compact_gaussian_wavefunction(
      grid, GaussianParams(phi_params.x0 + b, phi_params.sigma));
  const complex_t overlap =
      phi_a.amplitudes().dot(phi_b.amplitudes()) * grid.dx;
  if (std::abs(overlap) > 1e-8)
    throw overlap_error("verify_c2_monotonicity_violation: packets overlap");

  const DensityMatrix rho =
      mix({pure_state_density(phi_a), pure_state_density(phi_b)}, {0.5, 0.5});
  const InstrumentOutcome out = apply_instrument(rho, instrument);

  C2ViolationReport r;
  r.c2_in = c2_g(rho, kernel).value;
  r.c2_out = c2_g(out.unconditional, kernel).value;
  r.ratio = r.c2_in > 0.0 ? r.c2_out / r.c2_in : 0.0;
  return r;
}

enum class MonotoneMeasure { crel, c2 };

struct StrongMonotonicityReport {
  double lhs = 0.0;  // sum_k p_k C(rho_k)
  double rhs = 0.0;  // C(rho)
  bool holds = false;
  double covariance_defect = 0.0;
};

inline StrongMonotonicityReport verify_strong_monotonicity(const DensityMatrix& rho,
                                                           const KrausInstrument& instrument,
                                                           const DephasingKernel& kernel,
                                                           MonotoneMeasure measure) {
  StrongMonotonicityReport r;
  r.covariance_defect =
      check_dephasing_covariance(instrument, kernel, {rho}, CovarianceMode::branchwise);
  const InstrumentOutcome out = apply_instrument(rho, instrument);
  auto eval = [&](const DensityMatrix& s) {
    return measure == MonotoneMeasure::crel ? c_rel_g(s, kernel).value
                                            : c2_g(s, kernel).value;
  };
  r.rhs = eval(rho);
  for (std::size_t k = 0; k < out.probabilities.size(); ++k)
    if (out.post_states[k]) r.lhs += out.probabilities[k] * eval(*out.post_states[k]);
  r.holds = r.lhs <= r.rhs + tol::monotonicity_slack();
  return r;
}

}  // namespace cvcl
