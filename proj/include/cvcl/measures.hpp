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
#include <limits>
#include <string>

#include "cvcl/channels.hpp"
#include "cvcl/common.hpp"
#include "cvcl/eig.hpp"
#include "cvcl/grid.hpp"
#include "cvcl/state.hpp"

namespace cvcl {

enum class Method { eigendecomposition, integral_form, closed_form };

/// Outcome of a coherence functional. Entropic values are in nats. When the
/// reference state has insufficient support the value is infinite; the weight
/// of rho outside the retained support is reported instead of being clamped
/// away.
struct MeasureReport {
  double value = 0.0;
  bool finite = true;
  Method method = Method::eigendecomposition;
  double support_defect = 0.0;
};

inline double von_neumann_entropy(const DensityMatrix& rho,
                                  double floor = tol::eigenvalue_floor) {
  const Eigen::VectorXd w = eig::hermitian_eigenvalues(rho.matrix());
  double s = 0.0;
  for (int k = 0; k < w.size(); ++k)
    if (w(k) > floor) s -= w(k) * std::log(w(k));
  return s;
}

/// Quantum relative entropy S(rho||sigma) = Tr rho ln rho - Tr rho ln sigma,
/// evaluated through both eigendecompositions. Eigenvalues of sigma at or
/// below the floor are excluded from the logarithm; the weight of rho on the
/// excluded subspace is reported, and the value is declared infinite when
/// that weight is non-negligible.
inline MeasureReport relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                                      double floor = tol::eigenvalue_floor) {
  require_same_grid(rho.grid(), sigma.grid(), "relative_entropy");

  const Eigen::VectorXd wr = eig::hermitian_eigenvalues(rho.matrix());
  double tr_rho_ln_rho = 0.0;
  for (int k = 0; k < wr.size(); ++k)
    if (wr(k) > floor) tr_rho_ln_rho += wr(k) * std::log(wr(k));

  const eig::Eigensystem es = eig::hermitian_eigensystem(sigma.matrix());
  double tr_rho_ln_sigma = 0.0;
  double defect = 0.0;
  for (int k = 0; k < es.values.size(); ++k) {
    const Eigen::VectorXcd v = es.vectors.col(k);
    const double overlap = std::real(v.dot(rho.matrix() * v));
    if (es.values(k) > floor)
      tr_rho_ln_sigma += std::log(es.values(k)) * overlap;
    else
      defect += overlap;
  }

  MeasureReport r;
  r.method = Method::eigendecomposition;
  r.support_defect = defect;
  if (defect > tol::support_defect()) {
    r.finite = false;
    r.value = std::numeric_limits<double>::infinity();
  } else {
    r.value = tr_rho_ln_rho - tr_rho_ln_sigma;
  }
  return r;
}

/// Relative-entropy dephasing loss S(rho || Delta_g(rho)).
inline MeasureReport c_rel_g(const DensityMatrix& rho, const DephasingKernel& kernel) {
  return relative_entropy(rho, apply_dephasing(rho, kernel));
}

/// Pure-state reduction -<psi| ln Delta_g(|psi><psi|) |psi>.
inline double c_rel_pure(const WaveFunction& psi, const DephasingKernel& kernel,
                         double floor = tol::eigenvalue_floor) {
  const DensityMatrix rho = pure_state_density(psi);
  const DensityMatrix sigma = apply_dephasing(rho, kernel);
  const eig::Eigensystem es = eig::hermitian_eigensystem(sigma.matrix());
  const Eigen::VectorXcd phi = psi.amplitudes() * std::sqrt(psi.grid().dx);
  double acc = 0.0;
  double defect = 0.0;
  for (int k = 0; k < es.values.size(); ++k) {
    const double overlap = std::norm(es.vectors.col(k).dot(phi));
    if (es.values(k) > floor)
      acc -= std::log(es.values(k)) * overlap;
    else
      defect += overlap;
  }
  if (defect > tol::support_defect())
    throw numeric_error("c_rel_pure: state leaks outside the dephased support");
  return acc;
}

namespace detail {

inline double hs_norm_sq(const Eigen::MatrixXcd& m) {
  KahanSum s;
  const complex_t* p = m.data();
  const auto n = m.size();
  for (Eigen::Index i = 0; i < n; ++i) s.add(std::norm(p[i]));
  return s.value();
}

}  // namespace detail

/// Hilbert-Schmidt dephasing loss Tr(rho^2) - Tr((Delta_g rho)^2), computed
/// both as the difference of purities and as the suppression-weighted sum
/// sum_ij (1-|g|^2)|rho_ij|^2. The two routes must agree; the trace-form
/// value is reported.
inline MeasureReport c2_g(const DensityMatrix& rho, const DephasingKernel& kernel) {
  require_same_grid(rho.grid(), kernel.grid(), "c2_g");
  const int n = rho.dim();

  KahanSum purity_in, purity_out, integral;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double r2 = std::norm(rho.matrix()(i, j));
      const double g2 = std::norm(kernel.at_offset(i - j));
      purity_in.add(r2);
      purity_out.add(g2 * r2);
      integral.add((1.0 - g2) * r2);
    }
  const double trace_form = purity_in.value() - purity_out.value();
  const double integral_form = integral.value();
  if (std::abs(trace_form - integral_form) > tol::route_agreement())
    throw numeric_error("c2_g: trace and integral routes disagree by " +
                        std::to_string(std::abs(trace_form - integral_form)));
  MeasureReport r;
  r.value = trace_form;
  r.method = Method::integral_form;
  return r;
}

/// Hilbert-Schmidt weight of rho outside the strip |x-y| <= epsilon.
inline double c2_epsilon(const DensityMatrix& rho, double epsilon) {
  const int n = rho.dim();
  const int kmax = detail::strip_offset_count(rho.grid(), epsilon);
  KahanSum out;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (std::abs(i - j) > kmax) out.add(std::norm(rho.matrix()(i, j)));
  return out.value();
}

/// Closed form of the HS loss for a pure Gaussian of width sigma under a
/// Gaussian kernel of scale ell_g.
inline double c2_gaussian_closed_form(double sigma, double ell_g) {
  if (!(sigma > 0.0) || !(ell_g > 0.0))
    throw domain_error("c2_gaussian_closed_form: need sigma > 0 and ell_g > 0");
  const double r = sigma / ell_g;
  return 1.0 - 1.0 / std::sqrt(1.0 + 4.0 * r * r);
}

/// Lower bound on the relative-entropy loss for the same Gaussian family.
inline double crel_jensen_bound(double sigma, double ell_g) {
  if (!(sigma > 0.0) || !(ell_g > 0.0))
    throw domain_error("crel_jensen_bound: need sigma > 0 and ell_g > 0");
  const double r = sigma / ell_g;
  return 0.5 * std::log1p(2.0 * r * r);
}

struct AdditivityReport {
  double crel_sum_defect = 0.0;
  double c2_product_defect = 0.0;
};

/// Product-state checks: the relative-entropy loss adds over factors, while
/// the HS loss follows a product formula in the factor purities.
inline AdditivityReport additivity_check(const DensityMatrix& rho_a,
                                         const DephasingKernel& kernel_a,
                                         const DensityMatrix& rho_b,
                                         const DephasingKernel& kernel_b,
                                         int max_dim = 4096) {
  const DensityMatrix da = apply_dephasing(rho_a, kernel_a);
  const DensityMatrix db = apply_dephasing(rho_b, kernel_b);
  const DensityMatrix rho_ab = tensor_product(rho_a, rho_b, max_dim);
  // the product dephasing factorizes entrywise over the Kronecker blocks
  const DensityMatrix deph_ab = tensor_product(da, db, max_dim);

  const MeasureReport crel_ab = relative_entropy(rho_ab, deph_ab);
  const MeasureReport crel_a = c_rel_g(rho_a, kernel_a);
  const MeasureReport crel_b = c_rel_g(rho_b, kernel_b);

  AdditivityReport rep;
  rep.crel_sum_defect = std::abs(crel_ab.value - crel_a.value - crel_b.value);

  const double c2_ab =
      detail::hs_norm_sq(rho_ab.matrix()) - detail::hs_norm_sq(deph_ab.matrix());
  const double product_formula =
      detail::hs_norm_sq(rho_a.matrix()) * detail::hs_norm_sq(rho_b.matrix()) -
      detail::hs_norm_sq(da.matrix()) * detail::hs_norm_sq(db.matrix());
  rep.c2_product_defect = std::abs(c2_ab - product_formula);
  return rep;
}

}  // namespace cvcl
