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

#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace cvcl {

using complex_t = std::complex<double>;

/// Base class for all library errors.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct invalid_range_error : error { using error::error; };
struct packet_clipped_error : error { using error::error; };
struct normalization_error : error { using error::error; };
struct grid_mismatch_error : error { using error::error; };
struct weight_sum_error : error { using error::error; };
struct size_cap_error : error { using error::error; };
struct invalid_kernel_error : error { using error::error; };
struct singular_kernel_error : error { using error::error; };
struct degenerate_kernel_error : error { using error::error; };
struct resolution_error : error { using error::error; };
struct shift_error : error { using error::error; };
struct interval_error : error { using error::error; };
struct overlap_error : error { using error::error; };
struct completeness_error : error { using error::error; };
struct domain_error : error { using error::error; };
struct numeric_error : error { using error::error; };
struct config_error : error { using error::error; };

namespace tol {

/// Global tolerance multiplier, read once from CVCL_TOLERANCE_SCALE.
inline double scale() {
  static const double s = [] {
    const char* env = std::getenv("CVCL_TOLERANCE_SCALE");
    if (!env) return 1.0;
    const double v = std::atof(env);
    return v > 0 ? v : 1.0;
  }();
  return s;
}

inline double hermiticity() { return 1e-12 * scale(); }
inline double trace() { return 1e-10 * scale(); }
inline double positivity() { return 1e-10 * scale(); }
inline double normalization() { return 1e-10 * scale(); }
inline double weight_sum() { return 1e-12 * scale(); }
inline double kernel_bound() { return 1e-12 * scale(); }
inline double route_agreement() { return 1e-10 * scale(); }
inline double support_defect() { return 1e-8 * scale(); }
inline double completeness() { return 1e-10 * scale(); }
inline double covariance_gate() { return 1e-8 * scale(); }
inline double monotonicity_slack() { return 1e-8 * scale(); }
inline double probability() { return 1e-12 * scale(); }
inline double state_positivity_report() { return 1e-8 * scale(); }

/// Spectral floor for matrix logarithms; a numerical cutoff, not a tolerance,
/// so it is not affected by CVCL_TOLERANCE_SCALE.
inline constexpr double eigenvalue_floor = 1e-14;

}  // namespace tol

/// Compensated (Kahan-Neumaier) accumulator. The coherence functionals
/// subtract sums of ~4e6 terms that agree to 10+ digits; plain accumulation
/// would eat the budget of the route-agreement checks.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace cvcl
