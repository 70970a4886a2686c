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

#include <cmath>
#include <complex>
#include <string>

#include "cvcl/channels.hpp"
#include "cvcl/common.hpp"
#include "cvcl/measures.hpp"
#include "cvcl/state.hpp"

namespace cvcl {

/// State restricted to the span of two localized packets L, R separated by d:
/// rho = [[p, c], [c*, 1-p]] in the {L, R} block. Valid when the 2x2 block is
/// positive semidefinite. The packet width is carried as metadata for the
/// narrow-packet approximation behind the sector algebra.
struct TwoPacketState {
  double p = 0.5;
  complex_t c = 0.0;
  double separation = 0.0;
  double packet_width = 0.0;

  TwoPacketState(double population, complex_t coherence, double d, double width)
      : p(population), c(coherence), separation(d), packet_width(width) {
    if (p < -1e-12 || p > 1.0 + 1e-12)
      throw domain_error("TwoPacketState: population outside [0,1]");
    if (std::norm(c) > p * (1.0 - p) + 1e-12)
      throw domain_error("TwoPacketState: |c|^2 exceeds p(1-p), block not PSD");
    if (!(separation > 0.0) || !(width > 0.0))
      throw domain_error("TwoPacketState: separation and width must be positive");
  }

  double width_to_separation() const { return packet_width / separation; }
};

/// Sector value of the HS dephasing loss: 2 (1 - |g(d)|^2) |c|^2.
inline double c2_two_packet(const TwoPacketState& state, complex_t g_at_d) {
  const double g2 = std::norm(g_at_d);
  if (g2 > 1.0 + 1e-12)
    throw domain_error("c2_two_packet: |g(d)| must not exceed 1");
  return 2.0 * (1.0 - g2) * std::norm(state.c);
}

/// Interference quadrature Tr(X_theta rho) = 2 Re(e^{-i theta} c); maximized
/// over theta it equals the visibility 2|c|.
inline double x_theta_expectation(const TwoPacketState& state, double theta) {
  return 2.0 * std::real(std::exp(complex_t(0.0, -theta)) * state.c);
}

/// Threshold on |Tr(X_theta rho)| below which the HS loss can still be <= c0.
inline double witness_bound(double c0, complex_t g_at_d) {
  if (!(c0 > 0.0)) throw domain_error("witness_bound: c0 must be positive");
  const double g2 = std::norm(g_at_d);
  if (g2 > 1.0 + 1e-12)
    throw domain_error("witness_bound: |g(d)| must not exceed 1");
  if (1.0 - g2 <= 0.0)
    throw degenerate_kernel_error("witness_bound: |g(d)| = 1 leaves nothing to certify");
  return std::sqrt(2.0 * c0 / (1.0 - g2));
}

struct CertificationResult {
  double witness_value = 0.0;  // bound - Tr(X_theta rho)
  bool certified = false;      // witness_value < 0 implies C2 > c0
};

inline CertificationResult certify(const TwoPacketState& state, double theta, double c0,
                                   complex_t g_at_d) {
  CertificationResult r;
  r.witness_value = witness_bound(c0, g_at_d) - x_theta_expectation(state, theta);
  r.certified = r.witness_value < 0.0;
  return r;
}

/// Far-field double-slit geometry; theta(x) = k d x / L.
struct SlitGeometry {
  double wavevector = 0.0;
  double slit_separation = 0.0;
  double screen_distance = 0.0;

  SlitGeometry(double k, double d, double L)
      : wavevector(k), slit_separation(d), screen_distance(L) {
    if (!(k > 0.0) || !(d > 0.0) || !(L > 0.0))
      throw domain_error("SlitGeometry: all lengths must be positive");
  }

  double phase_at(double x) const {
    return wavevector * slit_separation * x / screen_distance;
  }
  double fringe_period() const {
    return 2.0 * std::numbers::pi * screen_distance / (wavevector * slit_separation);
  }
  double fresnel_parameter() const {
    return wavevector * slit_separation * slit_separation / screen_distance;
  }
  bool far_field() const { return fresnel_parameter() < 0.1; }
};

/// Normalized fringe intensity I(x) = 1/2 + Re(e^{-i theta(x)} c).
inline double fringe_intensity(double x, const SlitGeometry& geometry, complex_t c) {
  return 0.5 + std::real(std::exp(complex_t(0.0, -geometry.phase_at(x))) * c);
}

/// HS loss inferred from a measured visibility V: (1 - |g(d)|^2)/2 * V^2.
inline double visibility_to_c2(double visibility, complex_t g_at_d) {
  if (visibility < 0.0 || visibility > 1.0 + 1e-12)
    throw domain_error("visibility_to_c2: visibility must lie in [0,1]");
  const double g2 = std::norm(g_at_d);
  if (g2 > 1.0 + 1e-12)
    throw domain_error("visibility_to_c2: |g(d)| must not exceed 1");
  return 0.5 * (1.0 - g2) * visibility * visibility;
}

struct CrosscheckResult {
  double c2_grid = 0.0;
  double c2_sector = 0.0;
  double rel_error = 0.0;
  double packet_overlap = 0.0;
  bool overlap_warning = false;
};

/// Builds the two-packet state on the kernel's grid (balanced populations,
/// packets at -d/2 and +d/2) and compares the exact grid HS loss against the
/// sector formula, quantifying the narrow-packet approximation.
inline CrosscheckResult full_grid_crosscheck(double separation, double packet_width,
                                             complex_t c, const DephasingKernel& kernel) {
  const Grid& grid = kernel.grid();
  const double half = separation / 2.0;
  const WaveFunction left =
      gaussian_wavefunction(grid, GaussianParams(-half, packet_width));
  const WaveFunction right =
      gaussian_wavefunction(grid, GaussianParams(half, packet_width));

  CrosscheckResult r;
  r.packet_overlap = std::abs(left.amplitudes().dot(right.amplitudes()) * grid.dx);
  r.overlap_warning = r.packet_overlap > 1e-8;

  const double p = 0.5;
  Eigen::MatrixXcd m =
      p * left.amplitudes() * left.amplitudes().adjoint() +
      (1.0 - p) * right.amplitudes() * right.amplitudes().adjoint() +
      c * left.amplitudes() * right.amplitudes().adjoint() +
      std::conj(c) * right.amplitudes() * left.amplitudes().adjoint();
  m *= grid.dx;
  const DensityMatrix rho(grid, std::move(m));

  r.c2_grid = c2_g(rho, kernel).value;
  const TwoPacketState sector(p, c, separation, packet_width);
  r.c2_sector = c2_two_packet(sector, kernel.at_separation(separation));
  r.rel_error = r.c2_sector != 0.0
                    ? std::abs(r.c2_grid - r.c2_sector) / std::abs(r.c2_sector)
                    : std::abs(r.c2_grid);
  return r;
}

}  // namespace cvcl
