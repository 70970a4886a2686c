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
#include <string>
#include <vector>

#include "cvcl/channels.hpp"
#include "cvcl/common.hpp"
#include "cvcl/grid.hpp"
#include "cvcl/measures.hpp"
#include "cvcl/state.hpp"

namespace cvcl {

/// Gaussian packet of mass m falling toward a source mass M from x0, with the
/// potential expanded to second order around x0. Valid while the packet stays
/// well localized, which requires x0 >> sigma0.
struct NewtonianScenario {
  double m = 0.0;       // test mass (kg)
  double M = 0.0;       // source mass (kg)
  double x0 = 0.0;      // initial center (m)
  double sigma0 = 0.0;  // initial width (m)
  double ell_g = 0.0;   // monitoring scale (m)
  double t_max = 0.0;   // duration (s)
  int n_steps = 1;
  Units units = Units::si();

  NewtonianScenario(double m_, double M_, double x0_, double sigma0_, double ell_g_,
                    double t_max_, int n_steps_, Units units_ = Units::si())
      : m(m_), M(M_), x0(x0_), sigma0(sigma0_), ell_g(ell_g_), t_max(t_max_),
        n_steps(n_steps_), units(units_) {
    if (!(m > 0.0) || M < 0.0 || !(x0 > 0.0) || !(sigma0 > 0.0) || !(ell_g > 0.0))
      throw domain_error("NewtonianScenario: masses, x0, sigma0, ell_g must be positive"
                         " (M may be zero for the free limit)");
    if (t_max < 0.0 || n_steps < 1)
      throw domain_error("NewtonianScenario: need t_max >= 0 and n_steps >= 1");
    if (x0 / sigma0 < 10.0)
      throw domain_error("NewtonianScenario: quadratic expansion requires x0 >= 10 sigma0");
  }
};

/// Inverted-oscillator rate kappa = sqrt(2 G M / x0^3).
inline double kappa(const NewtonianScenario& s) {
  return std::sqrt(2.0 * s.units.gravitational_constant * s.M / (s.x0 * s.x0 * s.x0));
}

namespace detail {

// sinh(z)^2 / z^2, series-evaluated near zero so the kappa -> 0 limit is the
// free-spreading formula without 0/0.
inline double sinh_sq_over_sq(double z) {
  const double z2 = z * z;
  if (z2 < 1e-6) return 1.0 + z2 / 3.0 + 2.0 * z2 * z2 / 45.0 + z2 * z2 * z2 / 315.0;
  const double sh = std::sinh(z);
  return sh * sh / z2;
}

}  // namespace detail

/// Width growth sigma_t^2 - sigma0^2, evaluated in the factored form
/// [sigma0^2 + (hbar/(2 m sigma0 kappa))^2] sinh^2(kappa t) that is exact at
/// t = 0. The naive difference of squares loses everything: at the scales of
/// the Newtonian example the growth sits ~13 orders below sigma0^2.
inline double sigma_sq_growth(const NewtonianScenario& s, double t) {
  const double k = kappa(s);
  const double q = s.units.hbar / (2.0 * s.m * s.sigma0);
  const double z = k * t;
  // sinh^2(kt) (sigma0^2 + q^2/kappa^2) = t^2 sinh^2(z)/z^2 (sigma0^2 kappa^2 + q^2)
  return t * t * detail::sinh_sq_over_sq(z) * (s.sigma0 * s.sigma0 * k * k + q * q);
}

inline double sigma_t(const NewtonianScenario& s, double t) {
  if (t < 0.0 || t > s.t_max * (1.0 + 1e-12))
    throw domain_error("sigma_t: t outside [0, t_max]");
  return std::sqrt(s.sigma0 * s.sigma0 + sigma_sq_growth(s, t));
}

/// Classical center x_c(t) = x0 + (1/2) a0 t^2 with a0 = -G M / x0^2.
inline double classical_center(const NewtonianScenario& s, double t) {
  const double a0 = -s.units.gravitational_constant * s.M / (s.x0 * s.x0);
  return s.x0 + 0.5 * a0 * t * t;
}

struct TimeSeriesRow {
  double t = 0.0;
  double sigma_t = 0.0;
  double c2 = 0.0;
  double crel_bound = 0.0;
  double delta_crel_bound = 0.0;
};

/// Closed-form coherence trajectory. The delta column is the bound relative
/// to its initial value, evaluated via log1p of the growth ratio so that the
/// ~1e-14 nat signals of the desk-scale scenario survive double precision.
inline std::vector<TimeSeriesRow> coherence_time_series(const NewtonianScenario& s) {
  const int rows = s.t_max == 0.0 ? 1 : s.n_steps;
  const double denom = 1.0 + 2.0 * s.sigma0 * s.sigma0 / (s.ell_g * s.ell_g);
  std::vector<TimeSeriesRow> out;
  out.reserve(rows);
  for (int i = 0; i < rows; ++i) {
    const double t = rows == 1 ? 0.0 : s.t_max * i / (rows - 1);
    TimeSeriesRow r;
    r.t = t;
    const double growth = sigma_sq_growth(s, t);
    const double st2 = s.sigma0 * s.sigma0 + growth;
    r.sigma_t = std::sqrt(st2);
    r.c2 = 1.0 - 1.0 / std::sqrt(1.0 + 4.0 * st2 / (s.ell_g * s.ell_g));
    r.crel_bound = 0.5 * std::log1p(2.0 * st2 / (s.ell_g * s.ell_g));
    r.delta_crel_bound =
        0.5 * std::log1p(2.0 * growth / (s.ell_g * s.ell_g * denom));
    out.push_back(r);
  }
  return out;
}

struct GridConsistencyReport {
  double rel_error = 0.0;          // lattice c2 vs closed form at sigma_t
  double center_dependence = 0.0;  // |c2(center x_c) - c2(center x0)|
};

/// Builds the instantaneous Gaussian on a lattice and checks the closed form,
/// plus the center-independence of the difference-kernel loss.
inline GridConsistencyReport grid_consistency_check(const NewtonianScenario& s,
                                                    double t_sample, int n_points = 512) {
  const double st = sigma_t(s, t_sample);
  const double xc = classical_center(s, t_sample);
  const double margin = 7.0 * st;
  const double lo = std::min(xc, s.x0) - margin;
  const double hi = std::max(xc, s.x0) + margin;
  const Grid grid = make_grid(lo, hi, n_points);
  const DephasingKernel kernel = gaussian_kernel(grid, s.ell_g);

  auto c2_at = [&](double center) {
    const WaveFunction psi = gaussian_wavefunction(grid, GaussianParams(center, st));
    return c2_g(pure_state_density(psi), kernel).value;
  };
  const double at_xc = c2_at(xc);
  const double at_x0 = c2_at(s.x0);
  const double closed = c2_gaussian_closed_form(st, s.ell_g);

  GridConsistencyReport r;
  r.rel_error = std::abs(at_xc - closed) / closed;
  r.center_dependence = std::abs(at_xc - at_x0);
  return r;
}

}  // namespace cvcl
