// Copyright 2026 The ionet Authors
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

// Regionalization of absorption data and Leontief-style multipliers.

#pragma once

#include "ionet/errors.hpp"
#include "ionet/graph.hpp"
#include "ionet/types.hpp"

#include <Eigen/LU>

#include <string>

namespace ionet {

/// regional_ij = gross_ij * rpc_ij.
template <typename Scalar>
FlowMatrix<Scalar> apply_rpc(const FlowMatrix<Scalar>& gross, const MatrixX<Scalar>& rpc) {
  if (rpc.rows() != gross.size() || rpc.cols() != gross.size())
    throw DimensionMismatch("RPC matrix is " + std::to_string(rpc.rows()) + "x" +
                            std::to_string(rpc.cols()) + ", flows are " +
                            std::to_string(gross.size()) + "x" + std::to_string(gross.size()));
  if (!rpc.allFinite() || (rpc.array() < Scalar(0)).any() || (rpc.array() > Scalar(1)).any())
    throw DomainError("regional purchase coefficients must lie in [0,1]");
  return FlowMatrix<Scalar>(gross.values().cwiseProduct(rpc), gross.sectors());
}

/// Per-commodity RPC: the coefficient of supplying sector j scales column j.
template <typename Scalar>
FlowMatrix<Scalar> apply_rpc(const FlowMatrix<Scalar>& gross, const VectorX<Scalar>& rpc) {
  if (rpc.size() != gross.size())
    throw DimensionMismatch("RPC vector has " + std::to_string(rpc.size()) + " entries, flows have " +
                            std::to_string(gross.size()) + " sectors");
  if (!rpc.allFinite() || (rpc.array() < Scalar(0)).any() || (rpc.array() > Scalar(1)).any())
    throw DomainError("regional purchase coefficients must lie in [0,1]");
  return FlowMatrix<Scalar>(gross.values() * rpc.asDiagonal(), gross.sectors());
}

/// inputs_ij = absorption_ij * output_i (row i is what sector i buys per unit
/// of its own output).
template <typename Scalar>
FlowMatrix<Scalar> regional_inputs(const FlowMatrix<Scalar>& absorption, const VectorX<Scalar>& output) {
  if (output.size() != absorption.size())
    throw DimensionMismatch("output vector has " + std::to_string(output.size()) +
                            " entries, absorption has " + std::to_string(absorption.size()) +
                            " sectors");
  if (!output.allFinite()) throw NonFinite("output vector");
  if ((output.array() < Scalar(0)).any()) throw DomainError("negative industry output");
  return FlowMatrix<Scalar>(output.asDiagonal() * absorption.values(), absorption.sectors());
}

/// Inverse of regional_inputs; sectors with zero output keep zero rows.
template <typename Scalar>
FlowMatrix<Scalar> absorption_from_inputs(const FlowMatrix<Scalar>& inputs, const VectorX<Scalar>& output) {
  if (output.size() != inputs.size()) throw DimensionMismatch("output vector length");
  MatrixX<Scalar> a = inputs.values();
  for (Index i = 0; i < a.rows(); ++i) {
    if (output[i] > Scalar(0))
      a.row(i) /= output[i];
    else
      a.row(i).setZero();
  }
  return FlowMatrix<Scalar>(std::move(a), inputs.sectors());
}

/// (I - A)^{-1}. Requires spectral radius of A below one, which for a
/// nonnegative A is equivalent to the inverse existing and being nonnegative.
template <typename Scalar>
MatrixX<Scalar> leontief_inverse(const MatrixX<Scalar>& a, double tol = 1e-9) {
  const Index n = a.rows();
  const MatrixX<Scalar> system = MatrixX<Scalar>::Identity(n, n) - a;
  Eigen::PartialPivLU<MatrixX<Scalar>> lu(system);
  const MatrixX<Scalar> identity = MatrixX<Scalar>::Identity(n, n);
  MatrixX<Scalar> inverse = lu.solve(identity);
  if (!inverse.allFinite()) throw NonProductive("I - A is singular");
  if (n > 0) {
    const double res = static_cast<double>((system * inverse - identity).cwiseAbs().maxCoeff());
    if (!(res <= tol))
      throw NonProductive("I - A is numerically singular (residual " + std::to_string(res) + ")");
    if (inverse.minCoeff() < -Scalar(tol))
      throw NonProductive("spectral radius of A is not below one");
  }
  return inverse;
}

/// Column sums of the Leontief inverse.
template <typename Scalar>
CentralityVector<Scalar> output_multiplier(const FlowMatrix<Scalar>& absorption, double tol = 1e-9) {
  const MatrixX<Scalar> l = leontief_inverse<Scalar>(absorption.values(), tol);
  MeasureMeta meta;
  meta.tol = tol;
  return CentralityVector<Scalar>(Measure::OutputMultiplier, l.colwise().sum().transpose(), meta);
}

/// multiplier_j = sum_i e_i L_ij / e_j, undefined (flagged) where e_j = 0.
template <typename Scalar>
CentralityVector<Scalar> employment_multiplier(const FlowMatrix<Scalar>& absorption,
                                               const VectorX<Scalar>& emp_coeff, double tol = 1e-9) {
  if (emp_coeff.size() != absorption.size())
    throw DimensionMismatch("employment vector has " + std::to_string(emp_coeff.size()) +
                            " entries, absorption has " + std::to_string(absorption.size()) +
                            " sectors");
  if (!emp_coeff.allFinite()) throw NonFinite("employment coefficients");
  if ((emp_coeff.array() < Scalar(0)).any()) throw DomainError("negative employment coefficient");

  const MatrixX<Scalar> l = leontief_inverse<Scalar>(absorption.values(), tol);
  const VectorX<Scalar> weighted = l.transpose() * emp_coeff;
  MeasureMeta meta;
  meta.tol = tol;
  CentralityVector<Scalar> c(Measure::EmploymentMultiplier, VectorX<Scalar>::Zero(absorption.size()), meta);
  for (Index j = 0; j < absorption.size(); ++j) {
    if (emp_coeff[j] > Scalar(0)) {
      c.scores[j] = weighted[j] / emp_coeff[j];
    } else {
      c.undefined[static_cast<std::size_t>(j)] = true;
    }
  }
  return c;
}

}  // namespace ionet
