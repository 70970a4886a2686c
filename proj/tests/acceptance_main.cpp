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

// End-to-end verification suite. Each criterion prints exactly one line:
//   [PASS|FAIL] criterion N: <what was checked> (<measured numbers>)
// The process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "cvcl/cvcl.hpp"

using namespace cvcl;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const auto t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

DensityMatrix gaussian_state(const Grid& g, double x0, double sigma) {
  return pure_state_density(gaussian_wavefunction(g, GaussianParams(x0, sigma)));
}

DensityMatrix random_mixture(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> center(-2.0, 2.0);
  std::uniform_real_distribution<double> width(0.5, 1.1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int parts = 1 + static_cast<int>(unit(rng) * 2.0);
  std::vector<DensityMatrix> states;
  std::vector<double> weights;
  double wsum = 0.0;
  for (int i = 0; i < parts; ++i) {
    states.push_back(gaussian_state(g, center(rng), width(rng)));
    const double w = 0.25 + unit(rng);
    weights.push_back(w);
    wsum += w;
  }
  for (auto& w : weights) w /= wsum;
  double acc = 0.0;
  for (double w : weights) acc += w;
  weights.back() += 1.0 - acc;
  return mix(states, weights);
}

const double kSweep[] = {0.1, 0.25, 0.5, 1.0, 2.0, 3.0};

// ---------------------------------------------------------------------------

void criterion_1_c2_oracle() {
  const double t0 = now_seconds();
  double worst = 0.0;
  for (double ratio : kSweep) {
    const double sigma = 1.0, ell = sigma / ratio;
    const Grid g = make_grid(-6.0 * sigma, 6.0 * sigma, 2048);
    const double numeric = c2_g(gaussian_state(g, 0.0, sigma), gaussian_kernel(g, ell)).value;
    worst = std::max(worst, std::abs(numeric - c2_gaussian_closed_form(sigma, ell)));
  }
  const double elapsed = now_seconds() - t0;
  const bool pass = worst <= 1e-6 && elapsed < 30.0;
  report(1, pass,
         fmt("closed-form C2 oracle on 2048-point grids, 6 sweep points "
             "(max defect %.3e, tol 1e-6; %.1f s, cap 30 s)", worst, elapsed));
}

void criterion_2_jensen_bound() {
  double worst_margin = 1e300;
  for (double ratio : kSweep) {
    const double sigma = 1.0, ell = sigma / ratio;
    const Grid g = make_grid(-6.0 * sigma, 6.0 * sigma, 2048);
    const double value = c_rel_g(gaussian_state(g, 0.0, sigma), gaussian_kernel(g, ell)).value;
    worst_margin = std::min(worst_margin, value - crel_jensen_bound(sigma, ell));
  }
  const bool pass = worst_margin >= -1e-8;
  report(2, pass,
         fmt("entropic loss dominates the Jensen bound on the same sweep "
             "(min margin %.3e, slack 1e-8)", worst_margin));
}

void criterion_3_erf_oracle() {
  double worst = 0.0;
  const double sigma = 1.0;
  for (double r : {0.5, 1.0, 2.0, 4.0}) {
    const double eps = r * sigma;
    // place epsilon halfway between lattice offsets; resolution ~ sigma/180
    const int k = static_cast<int>(std::lround(eps / (sigma / 180.0)));
    const double dx = eps / (k + 0.5);
    const int n = static_cast<int>(std::ceil(16.0 * sigma / dx)) + 1;
    const Grid g = make_grid(-8.0 * sigma, -8.0 * sigma + (n - 1) * dx, n);
    const DensityMatrix rho = gaussian_state(g, g.point(n / 2), sigma);
    const double expected = 1.0 - std::erf(eps / (2.0 * sigma));
    worst = std::max(worst, std::abs(c2_epsilon(rho, eps) - expected));
  }
  const bool pass = worst <= 1e-6;
  report(3, pass,
         fmt("finite-resolution diagnostic against the erf closed form "
             "(max defect %.3e, tol 1e-6)", worst));
}

void criterion_4_step_projector() {
  const Grid g = make_grid(-12.0, 12.0, 257);
  const WaveFunction l = gaussian_wavefunction(g, GaussianParams(-4.0, 0.5));
  const WaveFunction r = gaussian_wavefunction(g, GaussianParams(4.0, 0.5));
  const DensityMatrix rho =
      pure_state_density(WaveFunction::from_samples(g, l.amplitudes() + r.amplitudes()));

  const StepMaskResult once = apply_step_projector(rho, 2.0);
  const StepMaskResult twice = apply_step_projector(DensityMatrix(g, once.matrix), 2.0);
  const bool idempotent =
      once.matrix.size() == twice.matrix.size() &&
      std::memcmp(once.matrix.data(), twice.matrix.data(),
                  sizeof(complex_t) * once.matrix.size()) == 0;
  const bool noncp = once.min_eigenvalue < -1e-6;
  report(4, idempotent && noncp,
         fmt("strip mask bitwise idempotent and non-CP on a two-packet state "
             "(min eigenvalue %.3e, threshold -1e-6)", once.min_eigenvalue));
}

void criterion_5_counterexample() {
  const Grid g = make_grid(-15.0, 15.0, 601);
  const DephasingKernel kernel = gaussian_kernel(g, 1.0);
  const GaussianParams phi(0.0, 0.5);
  const double a = -6.0, b = 6.0;

  const C2ViolationReport c2rep = verify_c2_monotonicity_violation(g, phi, a, b, kernel);
  const bool ratio_ok = c2rep.ratio >= 1.99 && c2rep.ratio <= 2.01;

  const KrausInstrument inst = build_counterexample_instrument(g, 6.0, a, b);
  const WaveFunction pa = compact_gaussian_wavefunction(g, GaussianParams(a, 0.5));
  const WaveFunction pb = compact_gaussian_wavefunction(g, GaussianParams(b, 0.5));
  const DensityMatrix rho =
      mix({pure_state_density(pa), pure_state_density(pb)}, {0.5, 0.5});

  const StrongMonotonicityReport strong_c2 =
      verify_strong_monotonicity(rho, inst, kernel, MonotoneMeasure::c2);
  const bool sum_doubles = std::abs(strong_c2.lhs / (2.0 * strong_c2.rhs) - 1.0) <= 0.01;

  const MonotonicityReport crel = verify_crel_monotonicity(rho, inst, kernel);
  const StrongMonotonicityReport strong_crel =
      verify_strong_monotonicity(rho, inst, kernel, MonotoneMeasure::crel);
  const bool entropic_ok = crel.holds && strong_crel.holds;

  report(5, ratio_ok && sum_doubles && entropic_ok,
         fmt("translate-back instrument: C2 ratio %.4f in [1.99,2.01], "
             "branch sum / 2 C2 = %.4f, entropic monotonicity %s",
             c2rep.ratio, strong_c2.lhs / (2.0 * strong_c2.rhs),
             entropic_ok ? "holds" : "broken"));
}

void criterion_6_covariance() {
  const Grid g = make_grid(-15.0, 15.0, 601);
  const DephasingKernel kernel = gaussian_kernel(g, 1.0);
  std::mt19937_64 rng(606);
  std::vector<DensityMatrix> probes;
  for (int i = 0; i < 3; ++i) probes.push_back(random_mixture(g, rng));

  const double d_shift = check_dephasing_covariance(
      translation_instrument(g, 44), kernel, probes, CovarianceMode::branchwise);
  const double d_inst = check_dephasing_covariance(
      build_counterexample_instrument(g, 6.0, -6.0, 6.0), kernel, probes,
      CovarianceMode::branchwise);

  const Grid g2 = make_grid(-8.0, 8.0, 129);
  const std::vector<DensityMatrix> probe2 = {gaussian_state(g2, 0.0, 1.0)};
  const double d_kinetic = check_dephasing_covariance(
      unitary_channel(g2, quadratic_phase_momentum_unitary(g2, 0.5)),
      gaussian_kernel(g2, 1.0), probe2, CovarianceMode::branchwise);

  const bool pass = d_shift <= 1e-10 && d_inst <= 1e-10 && d_kinetic >= 1e-2;
  report(6, pass,
         fmt("covariance defects: translation %.1e, instrument branches %.1e "
             "(tol 1e-10); quadratic-phase non-example %.3f (floor 1e-2)",
             d_shift, d_inst, d_kinetic));
}

void criterion_7_convexity() {
  const Grid g = make_grid(-9.0, 9.0, 96);
  const DephasingKernel kernel = gaussian_kernel(g, 1.0);
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = -1e300;
  for (int trial = 0; trial < 200; ++trial) {
    const DensityMatrix r1 = random_mixture(g, rng);
    const DensityMatrix r2 = random_mixture(g, rng);
    const double t = 0.05 + 0.9 * unit(rng);
    const DensityMatrix blend = mix({r1, r2}, {t, 1.0 - t});
    const double v_c2 = c2_g(blend, kernel).value -
                        (t * c2_g(r1, kernel).value + (1.0 - t) * c2_g(r2, kernel).value);
    const double v_crel =
        c_rel_g(blend, kernel).value -
        (t * c_rel_g(r1, kernel).value + (1.0 - t) * c_rel_g(r2, kernel).value);
    worst = std::max(worst, std::max(v_c2, v_crel));
  }
  const bool pass = worst <= 1e-9;
  report(7, pass,
         fmt("convexity over 200 random triples for both measures "
             "(worst violation %.3e, tol 1e-9)", worst));
}

void criterion_8_additivity() {
  const Grid ga = make_grid(-7.0, 7.0, 41);
  const Grid gb = make_grid(-8.0, 8.0, 37);
  const AdditivityReport r =
      additivity_check(gaussian_state(ga, 0.0, 1.0), gaussian_kernel(ga, 1.2),
                       gaussian_state(gb, 0.5, 1.1), gaussian_kernel(gb, 0.8));
  const bool pass = r.crel_sum_defect <= 1e-6 && r.c2_product_defect <= 1e-10;
  report(8, pass,
         fmt("additivity on a 41x37 product lattice (crel defect %.3e tol 1e-6, "
             "c2 product defect %.3e tol 1e-10)", r.crel_sum_defect, r.c2_product_defect));
}

void criterion_9_witness() {
  const double ell = 1.0, d = 3.0 * ell;
  const complex_t g_at_d = std::exp(-d * d / (2.0 * ell * ell));
  const double c0 = 0.12;
  const double cmax = std::sqrt(c0 / (2.0 * (1.0 - std::norm(g_at_d))));

  std::mt19937_64 rng(909);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_witness = 1e300;
  bool sound = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const double p = unit(rng);
    const double cap = std::min(cmax, std::sqrt(p * (1.0 - p)));
    const double mag = cap * unit(rng);
    const double phase = 2.0 * std::numbers::pi * unit(rng);
    const TwoPacketState s(p, mag * std::exp(complex_t(0.0, phase)), d, ell / 20.0);
    const double w = certify(s, phase, c0, g_at_d).witness_value;  // worst theta
    worst_witness = std::min(worst_witness, w);
    sound = sound && w >= -1e-12;
  }

  const TwoPacketState balanced(0.5, complex_t(0.5, 0.0), d, ell / 20.0);
  const double threshold = (1.0 - std::norm(g_at_d)) / 2.0;
  bool balanced_ok = true;
  for (double f : {0.1, 0.5, 0.9, 0.99, 0.999})
    balanced_ok = balanced_ok && certify(balanced, 0.0, f * threshold, g_at_d).certified;

  const double width = ell / 20.0;
  const Grid grid = make_grid(-(d / 2.0 + 10.0 * width), d / 2.0 + 10.0 * width, 1201);
  const CrosscheckResult cross =
      full_grid_crosscheck(d, width, complex_t(0.5, 0.0), gaussian_kernel(grid, ell));
  const bool cross_ok = cross.rel_error < 0.02;

  report(9, sound && balanced_ok && cross_ok,
         fmt("witness soundness over 1000 sub-threshold states (min value %.2e, "
             "slack -1e-12), balanced certification, grid crosscheck %.3f%% (cap 2%%)",
             worst_witness, 100.0 * cross.rel_error));
}

void criterion_10_monte_carlo() {
  const Units u = Units::natural();
  const Grid g = make_grid(-7.0, 7.0, 257);
  const double ell = 1.0;
  const DensityMatrix rho = gaussian_state(g, 0.0, 1.0);
  const DensityMatrix exact = apply_dephasing(rho, gaussian_kernel(g, ell));
  const KickDistribution kicks = KickDistribution::gaussian(u.hbar / ell);

  const double err4 =
      (apply_random_kicks_mc(rho, kicks, 10000, 42, u).matrix() - exact.matrix()).norm();
  const double err5 =
      (apply_random_kicks_mc(rho, kicks, 100000, 42, u).matrix() - exact.matrix()).norm();
  const double ratio = err4 / err5;
  const bool pass = err5 < 5e-3 && ratio >= 2.5 && ratio <= 4.0;
  report(10, pass,
         fmt("seed-42 kick sampling: error at 1e5 = %.3e (cap 5e-3), "
             "1e4 to 1e5 ratio %.3f (window [2.5, 4.0])", err5, ratio));
}

void criterion_11_newtonian_curve() {
  const double t0 = now_seconds();
  const NewtonianScenario s(1e-14, 1e-14, 200e-6, 10e-6, 20e-6, 1.0, 201);
  const auto rows = coherence_time_series(s);

  bool nonneg = true, monotone = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    nonneg = nonneg && rows[i].delta_crel_bound >= 0.0;
    if (i) monotone = monotone && rows[i].delta_crel_bound >= rows[i - 1].delta_crel_bound;
  }

  const double k = kappa(s);
  const double q = s.units.hbar / (2.0 * s.m * s.sigma0);
  const double denom = 1.0 + 2.0 * s.sigma0 * s.sigma0 / (s.ell_g * s.ell_g);
  const double coeff = (s.sigma0 * s.sigma0 * k * k + q * q) / (s.ell_g * s.ell_g * denom);
  double worst_rel = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double taylor = coeff * rows[i].t * rows[i].t;
    worst_rel = std::max(worst_rel,
                         std::abs(rows[i].delta_crel_bound - taylor) / taylor);
  }
  const bool taylor_ok = worst_rel <= 1e-6;

  // byte reproducibility of the emitted table
  auto render = [&] {
    CsvTable t({{"t"}, {"sigma_t"}, {"c2"}, {"crel_bound"}, {"delta_crel_bound"}});
    for (const auto& r : coherence_time_series(s))
      t.add_row({r.t, r.sigma_t, r.c2, r.crel_bound, r.delta_crel_bound});
    return t.to_string();
  };
  const bool reproducible = render() == render();
  const double elapsed = now_seconds() - t0;

  report(11, nonneg && monotone && taylor_ok && reproducible && elapsed < 5.0,
         fmt("Newtonian coherence curve: nonnegative, monotone, Taylor match "
             "%.2e rel (tol 1e-6), byte-stable, %.2f s (cap 5 s)",
             worst_rel, elapsed));
}

void criterion_12_pure_state_identities() {
  const Grid g = make_grid(-10.0, 10.0, 193);
  const DephasingKernel kernel = gaussian_kernel(g, 1.0);
  std::mt19937_64 rng(1212);
  std::uniform_real_distribution<double> center(-1.5, 1.5);
  std::uniform_real_distribution<double> width(0.6, 1.5);

  double worst_crel = 0.0, worst_purity = 0.0;
  for (int trial = 0; trial < 8; ++trial) {
    const GaussianParams p(center(rng), width(rng));
    const WaveFunction psi = gaussian_wavefunction(g, p);
    const DensityMatrix rho = pure_state_density(psi);
    worst_crel = std::max(worst_crel, std::abs(c_rel_pure(psi, kernel) -
                                               c_rel_g(rho, kernel).value));
    worst_purity = std::max(worst_purity,
                            std::abs(c2_g(rho, kernel).value -
                                     (1.0 - apply_dephasing(rho, kernel).purity())));
  }
  const bool pass = worst_crel <= 1e-8 && worst_purity <= 1e-10;
  report(12, pass,
         fmt("pure-state reductions (crel route split %.2e tol 1e-8, "
             "purity identity %.2e tol 1e-10)", worst_crel, worst_purity));
}

}  // namespace

int main() {
  std::printf("acceptance suite: position-dephasing coherence toolkit\n");
  struct Entry {
    int number;
    void (*run)();
  };
  const Entry entries[] = {
      {1, criterion_1_c2_oracle},        {2, criterion_2_jensen_bound},
      {3, criterion_3_erf_oracle},       {4, criterion_4_step_projector},
      {5, criterion_5_counterexample},   {6, criterion_6_covariance},
      {7, criterion_7_convexity},        {8, criterion_8_additivity},
      {9, criterion_9_witness},          {10, criterion_10_monte_carlo},
      {11, criterion_11_newtonian_curve}, {12, criterion_12_pure_state_identities}};
  for (const Entry& e : entries) {
    try {
      e.run();
    } catch (const std::exception& ex) {
      report(e.number, false, std::string("unexpected exception: ") + ex.what());
    }
  }
  if (g_failures == 0)
    std::printf("all 12 criteria passed\n");
  else
    std::printf("%d criteria FAILED\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
