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
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/Dense>
#include <string>

#include "cvcl/common.hpp"

namespace cvcl::eig {

struct Eigensystem {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // columns, matching values
};

namespace detail {

inline void zheevd_inplace(char jobz, Eigen::MatrixXcd& a, Eigen::VectorXd& w) {
  const auto n = static_cast<lapack_int>(a.rows());
  w.resize(n);
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, jobz, 'L', n, a.data(), n, w.data());
  if (info != 0)
    throw numeric_error("zheevd failed with info=" + std::to_string(info));
}

}  // namespace detail

/// Full eigensystem of a Hermitian matrix (lower triangle is referenced).
inline Eigensystem hermitian_eigensystem(Eigen::MatrixXcd a) {
  if (a.rows() != a.cols())
    throw numeric_error("hermitian_eigensystem: matrix not square");
  Eigensystem r;
  detail::zheevd_inplace('V', a, r.values);
  r.vectors = std::move(a);
  return r;
}

inline Eigen::VectorXd hermitian_eigenvalues(Eigen::MatrixXcd a) {
  if (a.rows() != a.cols())
    throw numeric_error("hermitian_eigenvalues: matrix not square");
  Eigen::VectorXd w;
  detail::zheevd_inplace('N', a, w);
  return w;
}

inline double min_eigenvalue(const Eigen::MatrixXcd& a) {
  return hermitian_eigenvalues(a)(0);
}

}  // namespace cvcl::eig
