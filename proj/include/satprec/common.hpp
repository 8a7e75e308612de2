// SPDX-License-Identifier: Apache-2.0
//
// satprec — frame-based multigroup multicast precoding for multibeam satellites
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace satprec {

using cxd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;

/// Invalid configuration or domain input (bad layout, non-positive physical
/// quantity, ragged schedule, ...). Maps to CLI exit code 1.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure inside a solver (non-convergence, singular system).
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }

constexpr double kSpeedOfLight = 299792458.0;      // m/s
constexpr double kBoltzmann = 1.380649e-23;        // J/K

/// Frobenius-type real inner product on complex matrices, Re tr(A^H B).
inline double re_inner(const CMat& a, const CMat& b) {
  return a.cwiseProduct(b.conjugate()).sum().real();
}

}  // namespace satprec
