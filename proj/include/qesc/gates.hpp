// Copyright 2026 The qesc developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace qesc {

template <typename Scalar = double>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar = double>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;
template <typename Scalar = double>
using Vector2c = Eigen::Matrix<std::complex<Scalar>, 2, 1>;
template <typename Scalar = double>
using Vector4c = Eigen::Matrix<std::complex<Scalar>, 4, 1>;

// Equatorial Pauli operator sigma_phi = cos(phi) X + sin(phi) Y.
template <typename Scalar>
Matrix2c<Scalar> pauli_axis(Scalar phi) {
  using C = std::complex<Scalar>;
  Matrix2c<Scalar> sigma;
  sigma << C(0, 0), std::polar<Scalar>(1, -phi),  //
      std::polar<Scalar>(1, phi), C(0, 0);
  return sigma;
}

// Single-qubit rotation R(theta, phi) = exp(-i theta/2 sigma_phi)
//                                     = cos(theta/2) I - i sin(theta/2) sigma_phi.
template <typename Scalar>
Matrix2c<Scalar> rot_gate(Scalar theta, Scalar phi) {
  using C = std::complex<Scalar>;
  const Scalar c = std::cos(theta / 2);
  const Scalar s = std::sin(theta / 2);
  return c * Matrix2c<Scalar>::Identity() - C(0, s) * pauli_axis(phi);
}

// Kronecker product, row-major qubit order: bit 0 of the index is the last
// factor, so kron(A, B) acts with A on qubit 0 and B on qubit 1.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(
      a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

// Molmer-Sorensen gate MS(chi, phi1, phi2) = exp(-i chi/2 sigma_phi1 x sigma_phi2)
//                     = cos(chi/2) I4 - i sin(chi/2) sigma_phi1 x sigma_phi2.
template <typename Scalar>
Matrix4c<Scalar> ms_gate(Scalar chi, Scalar phi1, Scalar phi2) {
  using C = std::complex<Scalar>;
  const Scalar c = std::cos(chi / 2);
  const Scalar s = std::sin(chi / 2);
  const Matrix4c<Scalar> axes = kron(pauli_axis(phi1), pauli_axis(phi2));
  return c * Matrix4c<Scalar>::Identity() - C(0, s) * axes;
}

// Average gate fidelity between two unitaries on a d-dimensional space:
// (|Tr(U_ideal^dag U_actual)|^2 + d) / (d^2 + d).
template <typename DerivedA, typename DerivedB>
typename DerivedA::RealScalar average_gate_fidelity(
    const Eigen::MatrixBase<DerivedA>& actual,
    const Eigen::MatrixBase<DerivedB>& ideal) {
  if (actual.rows() != actual.cols() || ideal.rows() != ideal.cols() ||
      actual.rows() != ideal.rows())
    throw std::invalid_argument(
        "average_gate_fidelity: operands must be square and same size");
  using Real = typename DerivedA::RealScalar;
  const Real d = static_cast<Real>(actual.rows());
  const Real overlap = std::norm((ideal.adjoint() * actual).trace());
  return (overlap + d) / (d * d + d);
}

// Largest absolute entry of U^dag U - I.
template <typename Derived>
typename Derived::RealScalar unitarity_defect(
    const Eigen::MatrixBase<Derived>& u) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic,
                            Eigen::Dynamic>;
  const Mat defect =
      u.adjoint() * u - Mat::Identity(u.rows(), u.cols());
  return defect.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u,
                typename Derived::RealScalar tol) {
  return u.rows() == u.cols() && unitarity_defect(u) <= tol;
}

}  // namespace qesc
