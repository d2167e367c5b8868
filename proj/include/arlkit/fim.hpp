#pragma once

#include <array>

#include "arlkit/array_model.hpp"

namespace arlkit {

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Parameter order used by every 3x3 quantity.
enum FimIndex : int { kOmega1 = 0, kOmega2 = 1, kPhi = 2 };

/// Fisher information for (omega1, omega2, phi) with known signals and sigma2.
struct FisherMatrix {
  Matrix3 entries{};
  double sigma2 = 1.0;

  double operator()(int i, int j) const { return entries[i][j]; }
};

struct CrbNumeric {
  double crb_omega1 = 0.0;
  double crb_omega2 = 0.0;
  double crb_phi = 0.0;
  double crb_cross_12 = 0.0;
  Matrix3 inverse{};
  double rcond = 0.0;  // 1-norm reciprocal condition number of the FIM
};

/// Slepian-Bangs sum over snapshots using the structured derivatives of A.
/// Zero-energy sources and delta = 0 are accepted; the matrix is then singular.
FisherMatrix fim_slepian_bangs(const Scenario& scenario);

/// Same matrix from the Gram identities (moment sums, zeta, eta).
FisherMatrix fim_gram(const Scenario& scenario);

/// Default threshold on the reciprocal condition number.
inline constexpr double kSingularRcond = 1e-12;

/// Inverts the FIM by Gaussian elimination with partial pivoting.
/// Throws kSingularFim when rcond < rcond_threshold.
CrbNumeric crb_numeric(const FisherMatrix& fim,
                       double rcond_threshold = kSingularRcond);

/// e^T J^{-1} e with e = (-1, 1, 0): the bound on delta = omega2 - omega1.
double crb_delta_numeric(const CrbNumeric& crb);

}  // namespace arlkit
