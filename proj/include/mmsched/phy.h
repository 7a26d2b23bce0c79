/**
 * @file phy.h
 * @brief Zero-forcing uplink PHY: beamforming, post-ZF SINR, rates.
 */
#ifndef MMSCHED_PHY_H_
#define MMSCHED_PHY_H_

#include <vector>

#include <Eigen/Dense>

namespace mmsched {

// Condition-number cutoff above which the scheduled Gram matrix is treated
// as singular and ZF separation is declared infeasible.
inline constexpr double kZfConditionLimit = 1e12;

struct ZfResult {
  Eigen::MatrixXcd w;         // M x K combiner, one column per scheduled user
  Eigen::MatrixXcd gram_inv;  // (H^H H)^{-1}, K x K
  double condition;           // lambda_max / lambda_min of the Gram matrix
};

// Zero-forcing receive combiner W = H (H^H H)^{-1} for the M x K channel of
// the scheduled users. Throws SingularChannelError when the Gram matrix
// condition number exceeds kZfConditionLimit (e.g. K > M or repeated users).
ZfResult ZfBeamformer(const Eigen::MatrixXcd& h_scheduled);

// Post-ZF SINR of each scheduled user: 1 / (noise_var * [(H^H H)^{-1}]_kk).
std::vector<double> PostZfSinr(const Eigen::MatrixXcd& h_scheduled,
                               double noise_var);

// Rates log2(1 + SINR_k) for the scheduled subset. Sets *singular (when
// non-null) and returns all-zero rates if ZF separation is infeasible,
// instead of throwing.
std::vector<double> SubsetRates(const Eigen::MatrixXcd& h_scheduled,
                                double noise_var, bool* singular = nullptr);

// Single-user matched-filter rate log2(1 + ||h||^2 / noise_var).
double SuMimoRate(const Eigen::VectorXcd& h_user, double noise_var);

// SU rate of every user for one (tti, rb) channel matrix (M x L).
std::vector<double> SuRates(const Eigen::MatrixXcd& h_full, double noise_var);

// Sum of the num_scheduled largest SU rates; the reward normalizer.
double NormalizationFactor(const std::vector<double>& su_rates,
                           int num_scheduled);

// sum(rates) / NormalizationFactor, clipped to 1 when clip is set.
// *clipped (when non-null) reports whether clipping fired.
double NormalizedSumRate(const std::vector<double>& subset_rates,
                         const std::vector<double>& su_rates,
                         int num_scheduled, bool clip = true,
                         bool* clipped = nullptr);

}  // namespace mmsched

#endif  // MMSCHED_PHY_H_
