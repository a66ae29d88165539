#pragma once

#include <array>

#include "so3seek/so3.hpp"

namespace so3seek {

/// Eigenvalues of a symmetric 3x3 matrix in ascending order.
///
/// Closed-form trigonometric solution of the characteristic cubic. When two
/// roots land within 1e-10 (relative to the spectral scale) the closed form
/// loses digits, so the result is refined with an iterative self-adjoint
/// solver instead.
std::array<double, 3> symmetric_eigenvalues(const Matrix3& a);

/// Same as symmetric_eigenvalues, reporting which route produced the result.
struct EigenResult {
  std::array<double, 3> values{};
  bool refined = false;
};
EigenResult symmetric_eigenvalues_detailed(const Matrix3& a);

/// Spectral norm of a symmetric matrix, max |lambda_i|.
double symmetric_spectral_norm(const Matrix3& a);

}  // namespace so3seek
