/**
 * @file channel.h
 * @brief Synthetic channel trace generation and trace file I/O.
 *
 * A ChannelTrace is the simulator's ground truth: the complex gain tensor
 * h[t][b][m][l] over TTIs, resource blocks, base-station antennas and users,
 * together with the receiver noise variance. Generators cover static random
 * placement, clustered users with correlated channels, and Gauss-Markov
 * mobility. Traces round-trip through a binary file format and can be
 * imported from CSV measurement dumps.
 */
#ifndef MMSCHED_CHANNEL_H_
#define MMSCHED_CHANNEL_H_

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace mmsched {

// Default noise variance. With unit-variance channel entries this puts the
// median single-user SNR near 20 dB at M=16 antennas.
inline constexpr double kDefaultNoiseVar = 0.16;

enum class Topology { kClustered, kRandomStatic, kMobile };
enum class RbMode { kIndependent, kTappedDelay };

struct ChannelTrace {
  int num_ttis = 0;         // T
  int num_rbs = 0;          // B
  int num_bs_antennas = 0;  // M
  int num_users = 0;        // L
  double noise_var = kDefaultNoiseVar;
  // Layout: t-major, then b, then m, with l fastest.
  std::vector<std::complex<double>> h;

  size_t Index(int t, int b, int m, int l) const {
    return ((static_cast<size_t>(t) * num_rbs + b) * num_bs_antennas + m) *
               num_users +
           l;
  }
  std::complex<double>& At(int t, int b, int m, int l) {
    return h[Index(t, b, m, l)];
  }
  const std::complex<double>& At(int t, int b, int m, int l) const {
    return h[Index(t, b, m, l)];
  }

  // Channel matrix of one (TTI, RB): M x L, column l is user l's vector.
  Eigen::MatrixXcd Slice(int t, int b) const;

  // Checks dimensions, tensor length, finiteness and noise variance;
  // throws std::invalid_argument on violation.
  void Validate() const;
};

struct ScenarioConfig {
  Topology topology = Topology::kRandomStatic;
  int num_clusters = 4;            // clustered only
  double intra_cluster_corr = 0.9;  // clustered only
  double temporal_corr = 0.9;      // mobile only
  RbMode rb_mode = RbMode::kIndependent;
  int num_taps = 4;  // tapped-delay only
  uint64_t rng_seed = 1;
};

// I.i.d. CN(0,1) entries, constant over TTIs. RBs are independent draws in
// kIndependent mode and a num_taps-point frequency response in
// kTappedDelay mode.
ChannelTrace GenRandomStatic(int num_bs_antennas, int num_users, int num_rbs,
                             int num_ttis, uint64_t seed,
                             RbMode rb_mode = RbMode::kIndependent,
                             int num_taps = 4);

// Users share a per-cluster direction mixed with a private component:
//   h_user = sqrt(corr) * h_cluster + sqrt(1 - corr) * h_private
// so expected intra-cluster correlation tracks intra_cluster_corr. Users are
// assigned to clusters round-robin by index.
ChannelTrace GenClustered(int num_bs_antennas, int num_users, int num_rbs,
                          int num_ttis, int num_clusters,
                          double intra_cluster_corr, uint64_t seed,
                          RbMode rb_mode = RbMode::kIndependent,
                          int num_taps = 4);

// First-order Gauss-Markov evolution of a static trace:
//   h[t+1] = rho * h[t] + sqrt(1 - rho^2) * CN(0,1)
// The input trace must be constant over TTIs; the marginal distribution is
// preserved at every step.
ChannelTrace EvolveGaussMarkov(const ChannelTrace& trace, double rho,
                               uint64_t seed);

// Builds a trace from a scenario description (dispatcher over the above).
ChannelTrace MakeTrace(const ScenarioConfig& scenario, int num_bs_antennas,
                       int num_users, int num_rbs, int num_ttis,
                       double noise_var = kDefaultNoiseVar);

// Binary trace format, little-endian:
//   magic "MMTR", u16 version=1, u32 T, B, M, L, f64 noise_var,
//   then T*B*M*L entries as interleaved f64 (re, im), t-major, then b,
//   then m, l fastest.
void SaveTrace(const ChannelTrace& trace, const std::string& path);
ChannelTrace LoadTrace(const std::string& path);

// CSV import for measurement dumps: header row
//   t,b,re_m0_l0,im_m0_l0,re_m0_l1,...   (m outer, l inner)
// then one row per (t, b). Dimensions are inferred from the header and the
// t/b columns; noise_var is supplied by the caller.
ChannelTrace LoadTraceCsv(const std::string& path,
                          double noise_var = kDefaultNoiseVar);
void SaveTraceCsv(const ChannelTrace& trace, const std::string& path);

}  // namespace mmsched

#endif  // MMSCHED_CHANNEL_H_
