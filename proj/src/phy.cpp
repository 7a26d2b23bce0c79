#include "mmsched/phy.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mmsched/errors.h"

namespace mmsched {

namespace {

// Inverts the Gram matrix G = H^H H through its eigendecomposition and
// reports the condition number. One Newton step X <- X (2I - G X) polishes
// the inverse so the ZF residual stays far below the 1e-9 contract.
bool InvertGram(const Eigen::MatrixXcd& gram, Eigen::MatrixXcd* inv,
                double* condition) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
  if (eig.info() != Eigen::Success) {
    *condition = std::numeric_limits<double>::infinity();
    return false;
  }
  const auto& evals = eig.eigenvalues();
  const double lambda_min = evals(0);
  const double lambda_max = evals(evals.size() - 1);
  if (!(lambda_min > 0.0) || !std::isfinite(lambda_max)) {
    *condition = std::numeric_limits<double>::infinity();
    return false;
  }
  *condition = lambda_max / lambda_min;
  if (*condition > kZfConditionLimit) {
    return false;
  }
  const Eigen::VectorXd inv_evals = evals.cwiseInverse();
  *inv = eig.eigenvectors() * inv_evals.asDiagonal() *
         eig.eigenvectors().adjoint();
  const Eigen::MatrixXcd identity =
      Eigen::MatrixXcd::Identity(gram.rows(), gram.cols());
  *inv = *inv * (2.0 * identity - gram * (*inv));
  return true;
}

}  // namespace

ZfResult ZfBeamformer(const Eigen::MatrixXcd& h_scheduled) {
  if (h_scheduled.cols() < 1 || h_scheduled.rows() < 1) {
    throw std::invalid_argument("ZfBeamformer: empty channel matrix");
  }
  if (h_scheduled.cols() > h_scheduled.rows()) {
    throw SingularChannelError(
        "ZfBeamformer: more users than antennas, Gram matrix is singular",
        std::numeric_limits<double>::infinity());
  }
  const Eigen::MatrixXcd gram = h_scheduled.adjoint() * h_scheduled;
  ZfResult result;
  if (!InvertGram(gram, &result.gram_inv, &result.condition)) {
    throw SingularChannelError(
        "ZfBeamformer: Gram matrix condition number exceeds limit",
        result.condition);
  }
  result.w = h_scheduled * result.gram_inv;
  return result;
}

std::vector<double> PostZfSinr(const Eigen::MatrixXcd& h_scheduled,
                               double noise_var) {
  if (!(noise_var > 0.0)) {
    throw std::invalid_argument("PostZfSinr: noise_var must be > 0");
  }
  const ZfResult zf = ZfBeamformer(h_scheduled);
  std::vector<double> sinr(static_cast<size_t>(h_scheduled.cols()));
  for (Eigen::Index k = 0; k < h_scheduled.cols(); ++k) {
    sinr[static_cast<size_t>(k)] =
        1.0 / (noise_var * zf.gram_inv(k, k).real());
  }
  return sinr;
}

std::vector<double> SubsetRates(const Eigen::MatrixXcd& h_scheduled,
                                double noise_var, bool* singular) {
  if (singular != nullptr) {
    *singular = false;
  }
  try {
    const std::vector<double> sinr = PostZfSinr(h_scheduled, noise_var);
    std::vector<double> rates(sinr.size());
    for (size_t k = 0; k < sinr.size(); ++k) {
      rates[k] = std::log2(1.0 + sinr[k]);
    }
    return rates;
  } catch (const SingularChannelError&) {
    if (singular != nullptr) {
      *singular = true;
    }
    return std::vector<double>(static_cast<size_t>(h_scheduled.cols()), 0.0);
  }
}

double SuMimoRate(const Eigen::VectorXcd& h_user, double noise_var) {
  if (!(noise_var > 0.0)) {
    throw std::invalid_argument("SuMimoRate: noise_var must be > 0");
  }
  return std::log2(1.0 + h_user.squaredNorm() / noise_var);
}

std::vector<double> SuRates(const Eigen::MatrixXcd& h_full, double noise_var) {
  std::vector<double> rates(static_cast<size_t>(h_full.cols()));
  for (Eigen::Index l = 0; l < h_full.cols(); ++l) {
    rates[static_cast<size_t>(l)] = SuMimoRate(h_full.col(l), noise_var);
  }
  return rates;
}

double NormalizationFactor(const std::vector<double>& su_rates,
                           int num_scheduled) {
  if (num_scheduled < 1 ||
      num_scheduled > static_cast<int>(su_rates.size())) {
    throw std::invalid_argument(
        "NormalizationFactor: num_scheduled out of range");
  }
  std::vector<double> sorted = su_rates;
  std::partial_sort(sorted.begin(), sorted.begin() + num_scheduled,
                    sorted.end(), std::greater<double>());
  double sum = 0.0;
  for (int i = 0; i < num_scheduled; ++i) {
    sum += sorted[static_cast<size_t>(i)];
  }
  return sum;
}

double NormalizedSumRate(const std::vector<double>& subset_rates,
                         const std::vector<double>& su_rates,
                         int num_scheduled, bool clip, bool* clipped) {
  if (clipped != nullptr) {
    *clipped = false;
  }
  const double denom = NormalizationFactor(su_rates, num_scheduled);
  double sum = 0.0;
  for (const double r : subset_rates) {
    sum += r;
  }
  if (denom <= 0.0) {
    return 0.0;
  }
  double ratio = sum / denom;
  if (clip && ratio > 1.0) {
    ratio = 1.0;
    if (clipped != nullptr) {
      *clipped = true;
    }
  }
  return ratio;
}

}  // namespace mmsched
