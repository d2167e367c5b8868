#include "arlkit/fim.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "arlkit/crb.hpp"
#include "arlkit/errors.hpp"

namespace arlkit {

namespace {

double norm1(const Matrix3& m) {
  double best = 0.0;
  for (int j = 0; j < 3; ++j) {
    double col = 0.0;
    for (int i = 0; i < 3; ++i) col += std::abs(m[i][j]);
    best = std::max(best, col);
  }
  return best;
}

// Returns false when a pivot is exactly zero.
bool invert_pivoted(const Matrix3& in, Matrix3& out) {
  std::array<std::array<double, 6>, 3> aug{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) aug[i][j] = in[i][j];
    aug[i][3 + i] = 1.0;
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(aug[r][col]) > std::abs(aug[pivot][col])) pivot = r;
    }
    if (aug[pivot][col] == 0.0) return false;
    std::swap(aug[pivot], aug[col]);
    const double inv_p = 1.0 / aug[col][col];
    for (auto& v : aug[col]) v *= inv_p;
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = aug[r][col];
      if (f == 0.0) continue;
      for (int k = 0; k < 6; ++k) aug[r][k] -= f * aug[col][k];
    }
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = aug[i][3 + j];
  return true;
}

}  // namespace

namespace {

void check_inputs(const Scenario& scenario) {
  scenario.geometry.validate();
  const auto& sig = scenario.signals;
  if (sig.s1.empty() || sig.s1.size() != sig.s2.size()) {
    throw Error(ErrorCode::kInvalidArgument, "signal lengths must match and be >= 1");
  }
  if (!(scenario.sigma2 > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma2 must be positive");
  }
}

}  // namespace

FisherMatrix fim_slepian_bangs(const Scenario& scenario) {
  check_inputs(scenario);
  const auto& e = scenario.electrical;
  const int L = scenario.geometry.num_sensors;
  const SteeringDerivatives der =
      steering_derivatives(e.omega1, e.omega2(), e.phi, L);
  const auto& sig = scenario.signals;

  // Per snapshot dA/dtheta_i s(t) is a single column scaled by one source.
  Matrix3 acc{};
  CVector cols[3];
  for (std::size_t t = 0; t < sig.snapshots(); ++t) {
    cols[kOmega1].resize(L);
    cols[kOmega2].resize(L);
    cols[kPhi].resize(L);
    for (int l = 0; l < L; ++l) {
      cols[kOmega1][l] = der.d_omega1[l] * sig.s1[t];
      cols[kOmega2][l] = der.d_omega2[l] * sig.s2[t];
      cols[kPhi][l] = der.d_phi[l] * sig.s2[t];
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        cplx dot{};
        for (int l = 0; l < L; ++l) dot += std::conj(cols[i][l]) * cols[j][l];
        acc[i][j] += dot.real();
      }
    }
  }
  FisherMatrix fim;
  fim.sigma2 = scenario.sigma2;
  const double scale = 2.0 / scenario.sigma2;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      fim.entries[i][j] = scale * acc[i][j];
      fim.entries[j][i] = fim.entries[i][j];
    }
  }
  return fim;
}

FisherMatrix fim_gram(const Scenario& scenario) {
  check_inputs(scenario);
  const SignalStats st = scenario.signals.stats();
  const SpectralSums sums = spectral_sums(scenario.geometry.num_sensors,
                                          scenario.electrical, st.cross);
  const double scale = 2.0 / scenario.sigma2;
  FisherMatrix fim;
  fim.sigma2 = scenario.sigma2;
  auto& J = fim.entries;
  J[0][0] = scale * st.energy1 * sums.moment[2];
  J[1][1] = scale * st.energy2 * sums.moment[2];
  J[2][2] = scale * st.energy2 * sums.moment[4];
  J[1][2] = J[2][1] = scale * st.energy2 * sums.moment[3];
  J[0][1] = J[1][0] = scale * sums.zeta;
  J[0][2] = J[2][0] = scale * sums.eta;
  return fim;
}

CrbNumeric crb_numeric(const FisherMatrix& fim, double rcond_threshold) {
  CrbNumeric out;
  if (!invert_pivoted(fim.entries, out.inverse)) {
    throw Error(ErrorCode::kSingularFim, "singular FIM: zero pivot");
  }
  out.rcond = 1.0 / (norm1(fim.entries) * norm1(out.inverse));
  if (!(out.rcond >= rcond_threshold)) {
    std::ostringstream msg;
    msg << "singular FIM: reciprocal condition number " << out.rcond;
    throw Error(ErrorCode::kSingularFim, msg.str());
  }
  out.crb_omega1 = out.inverse[kOmega1][kOmega1];
  out.crb_omega2 = out.inverse[kOmega2][kOmega2];
  out.crb_phi = out.inverse[kPhi][kPhi];
  out.crb_cross_12 = out.inverse[kOmega1][kOmega2];
  return out;
}

double crb_delta_numeric(const CrbNumeric& crb) {
  const auto& C = crb.inverse;
  return C[0][0] + C[1][1] - C[0][1] - C[1][0];
}

}  // namespace arlkit
