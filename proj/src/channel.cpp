#include "mmsched/channel.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "mmsched/errors.h"
#include "mmsched/rng.h"

namespace mmsched {

namespace {

constexpr char kTraceMagic[4] = {'M', 'M', 'T', 'R'};
constexpr uint16_t kTraceVersion = 1;
// Keeps T*B*M*L*16 bytes within a sane bound (64 GiB of payload).
constexpr uint64_t kMaxTraceEntries = 1ULL << 32;

void CheckDims(int num_bs_antennas, int num_users, int num_rbs, int num_ttis) {
  if (num_ttis < 1 || num_rbs < 1 || num_bs_antennas < 1 || num_users < 1) {
    throw std::invalid_argument("channel: all dimensions must be >= 1");
  }
  const uint64_t total = static_cast<uint64_t>(num_ttis) * num_rbs *
                         num_bs_antennas * num_users;
  if (total > kMaxTraceEntries) {
    throw std::invalid_argument("channel: trace dimensions too large");
  }
}

// Draws the per-RB channel matrices for one user-direction matrix slot.
// In tapped-delay mode the B responses come from num_taps i.i.d. taps with
// total unit power, so per-entry variance stays 1 while RBs are correlated.
class RbDrawer {
 public:
  RbDrawer(RbMode mode, int num_rbs, int num_taps, Rng& rng)
      : mode_(mode), num_rbs_(num_rbs), num_taps_(num_taps), rng_(rng) {
    if (mode_ == RbMode::kTappedDelay) {
      if (num_taps_ < 1) {
        throw std::invalid_argument("channel: num_taps must be >= 1");
      }
      taps_.resize(num_taps_);
    }
  }

  // Fills out[b] for b = 0..B-1 with one scalar gain per RB.
  void Draw(std::vector<std::complex<double>>& out) {
    out.resize(num_rbs_);
    if (mode_ == RbMode::kIndependent) {
      for (int b = 0; b < num_rbs_; ++b) {
        out[b] = rng_.NextComplexGaussian();
      }
      return;
    }
    const double tap_scale = 1.0 / std::sqrt(static_cast<double>(num_taps_));
    for (int p = 0; p < num_taps_; ++p) {
      taps_[p] = rng_.NextComplexGaussian() * tap_scale;
    }
    for (int b = 0; b < num_rbs_; ++b) {
      std::complex<double> sum = 0.0;
      for (int p = 0; p < num_taps_; ++p) {
        const double phase =
            -2.0 * std::numbers::pi * p * b / static_cast<double>(num_rbs_);
        sum += taps_[p] * std::complex<double>(std::cos(phase), std::sin(phase));
      }
      out[b] = sum;
    }
  }

 private:
  RbMode mode_;
  int num_rbs_;
  int num_taps_;
  Rng& rng_;
  std::vector<std::complex<double>> taps_;
};

// Copies the t=0 block over every remaining TTI.
void ReplicateOverTtis(ChannelTrace& trace) {
  const size_t block =
      static_cast<size_t>(trace.num_rbs) * trace.num_bs_antennas *
      trace.num_users;
  for (int t = 1; t < trace.num_ttis; ++t) {
    std::copy(trace.h.begin(), trace.h.begin() + block,
              trace.h.begin() + static_cast<size_t>(t) * block);
  }
}

}  // namespace

Eigen::MatrixXcd ChannelTrace::Slice(int t, int b) const {
  Eigen::MatrixXcd out(num_bs_antennas, num_users);
  for (int m = 0; m < num_bs_antennas; ++m) {
    for (int l = 0; l < num_users; ++l) {
      out(m, l) = At(t, b, m, l);
    }
  }
  return out;
}

void ChannelTrace::Validate() const {
  if (num_ttis < 1 || num_rbs < 1 || num_bs_antennas < 1 || num_users < 1) {
    throw std::invalid_argument("ChannelTrace: all dimensions must be >= 1");
  }
  const size_t expected = static_cast<size_t>(num_ttis) * num_rbs *
                          num_bs_antennas * num_users;
  if (h.size() != expected) {
    throw std::invalid_argument("ChannelTrace: tensor length mismatch");
  }
  if (!(noise_var > 0.0)) {
    throw std::invalid_argument("ChannelTrace: noise_var must be > 0");
  }
  for (const auto& gain : h) {
    if (!std::isfinite(gain.real()) || !std::isfinite(gain.imag())) {
      throw std::invalid_argument("ChannelTrace: non-finite gain");
    }
  }
}

ChannelTrace GenRandomStatic(int num_bs_antennas, int num_users, int num_rbs,
                             int num_ttis, uint64_t seed, RbMode rb_mode,
                             int num_taps) {
  CheckDims(num_bs_antennas, num_users, num_rbs, num_ttis);
  ChannelTrace trace;
  trace.num_ttis = num_ttis;
  trace.num_rbs = num_rbs;
  trace.num_bs_antennas = num_bs_antennas;
  trace.num_users = num_users;
  trace.h.resize(static_cast<size_t>(num_ttis) * num_rbs * num_bs_antennas *
                 num_users);

  Rng rng(seed);
  RbDrawer drawer(rb_mode, num_rbs, num_taps, rng);
  std::vector<std::complex<double>> gains;
  for (int m = 0; m < num_bs_antennas; ++m) {
    for (int l = 0; l < num_users; ++l) {
      drawer.Draw(gains);
      for (int b = 0; b < num_rbs; ++b) {
        trace.At(0, b, m, l) = gains[b];
      }
    }
  }
  ReplicateOverTtis(trace);
  return trace;
}

ChannelTrace GenClustered(int num_bs_antennas, int num_users, int num_rbs,
                          int num_ttis, int num_clusters,
                          double intra_cluster_corr, uint64_t seed,
                          RbMode rb_mode, int num_taps) {
  CheckDims(num_bs_antennas, num_users, num_rbs, num_ttis);
  if (num_clusters < 1 || num_clusters > num_users) {
    throw std::invalid_argument("GenClustered: num_clusters must be in [1, L]");
  }
  if (!(intra_cluster_corr >= 0.0) || intra_cluster_corr >= 1.0) {
    throw std::invalid_argument(
        "GenClustered: intra_cluster_corr must be in [0, 1)");
  }
  ChannelTrace trace;
  trace.num_ttis = num_ttis;
  trace.num_rbs = num_rbs;
  trace.num_bs_antennas = num_bs_antennas;
  trace.num_users = num_users;
  trace.h.resize(static_cast<size_t>(num_ttis) * num_rbs * num_bs_antennas *
                 num_users);

  Rng rng(seed);
  RbDrawer drawer(rb_mode, num_rbs, num_taps, rng);
  const double shared_w = std::sqrt(intra_cluster_corr);
  const double private_w = std::sqrt(1.0 - intra_cluster_corr);

  // Cluster directions first, indexed [cluster][antenna][rb].
  std::vector<std::complex<double>> gains;
  std::vector<std::vector<std::complex<double>>> cluster_dirs(
      static_cast<size_t>(num_clusters));
  for (int c = 0; c < num_clusters; ++c) {
    cluster_dirs[c].resize(static_cast<size_t>(num_bs_antennas) * num_rbs);
    for (int m = 0; m < num_bs_antennas; ++m) {
      drawer.Draw(gains);
      for (int b = 0; b < num_rbs; ++b) {
        cluster_dirs[c][static_cast<size_t>(m) * num_rbs + b] = gains[b];
      }
    }
  }

  for (int l = 0; l < num_users; ++l) {
    const int cluster = l % num_clusters;
    for (int m = 0; m < num_bs_antennas; ++m) {
      drawer.Draw(gains);
      for (int b = 0; b < num_rbs; ++b) {
        const auto shared =
            cluster_dirs[cluster][static_cast<size_t>(m) * num_rbs + b];
        trace.At(0, b, m, l) = shared_w * shared + private_w * gains[b];
      }
    }
  }
  ReplicateOverTtis(trace);
  return trace;
}

ChannelTrace EvolveGaussMarkov(const ChannelTrace& trace, double rho,
                               uint64_t seed) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw std::invalid_argument("EvolveGaussMarkov: rho must be in [0, 1]");
  }
  trace.Validate();
  const size_t block = static_cast<size_t>(trace.num_rbs) *
                       trace.num_bs_antennas * trace.num_users;
  for (int t = 1; t < trace.num_ttis; ++t) {
    for (size_t i = 0; i < block; ++i) {
      if (trace.h[static_cast<size_t>(t) * block + i] != trace.h[i]) {
        throw std::invalid_argument(
            "EvolveGaussMarkov: input trace must be static over TTIs");
      }
    }
  }

  ChannelTrace out = trace;
  if (rho == 1.0) {
    return out;
  }
  Rng rng(seed);
  const double innov_w = std::sqrt(1.0 - rho * rho);
  for (int t = 1; t < out.num_ttis; ++t) {
    const size_t prev = static_cast<size_t>(t - 1) * block;
    const size_t cur = static_cast<size_t>(t) * block;
    for (size_t i = 0; i < block; ++i) {
      out.h[cur + i] =
          rho * out.h[prev + i] + innov_w * rng.NextComplexGaussian();
    }
  }
  return out;
}

ChannelTrace MakeTrace(const ScenarioConfig& scenario, int num_bs_antennas,
                       int num_users, int num_rbs, int num_ttis,
                       double noise_var) {
  if (!(noise_var > 0.0)) {
    throw std::invalid_argument("MakeTrace: noise_var must be > 0");
  }
  ChannelTrace trace;
  switch (scenario.topology) {
    case Topology::kClustered:
      trace = GenClustered(num_bs_antennas, num_users, num_rbs, num_ttis,
                           scenario.num_clusters, scenario.intra_cluster_corr,
                           scenario.rng_seed, scenario.rb_mode,
                           scenario.num_taps);
      break;
    case Topology::kRandomStatic:
      trace = GenRandomStatic(num_bs_antennas, num_users, num_rbs, num_ttis,
                              scenario.rng_seed, scenario.rb_mode,
                              scenario.num_taps);
      break;
    case Topology::kMobile: {
      ChannelTrace base =
          GenRandomStatic(num_bs_antennas, num_users, num_rbs, num_ttis,
                          scenario.rng_seed, scenario.rb_mode,
                          scenario.num_taps);
      trace = EvolveGaussMarkov(base, scenario.temporal_corr,
                                DeriveSeed(scenario.rng_seed, 0x6d6f62ULL));
      break;
    }
  }
  trace.noise_var = noise_var;
  return trace;
}

namespace {

template <typename T>
void WriteLe(std::ofstream& out, T value) {
  // The build targets little-endian hosts; byte order is the file's.
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool ReadLe(std::ifstream& in, T* value) {
  in.read(reinterpret_cast<char*>(value), sizeof(T));
  return in.gcount() == static_cast<std::streamsize>(sizeof(T));
}

}  // namespace

void SaveTrace(const ChannelTrace& trace, const std::string& path) {
  trace.Validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("SaveTrace: cannot open " + path);
  }
  out.write(kTraceMagic, 4);
  WriteLe(out, kTraceVersion);
  WriteLe(out, static_cast<uint32_t>(trace.num_ttis));
  WriteLe(out, static_cast<uint32_t>(trace.num_rbs));
  WriteLe(out, static_cast<uint32_t>(trace.num_bs_antennas));
  WriteLe(out, static_cast<uint32_t>(trace.num_users));
  WriteLe(out, trace.noise_var);
  for (const auto& gain : trace.h) {
    WriteLe(out, gain.real());
    WriteLe(out, gain.imag());
  }
  if (!out) {
    throw std::runtime_error("SaveTrace: write failed for " + path);
  }
}

ChannelTrace LoadTrace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("LoadTrace: cannot open " + path);
  }
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kTraceMagic, 4) != 0) {
    throw TraceFormatError("LoadTrace: bad magic", 0);
  }
  uint16_t version = 0;
  if (!ReadLe(in, &version)) {
    throw TraceFormatError("LoadTrace: truncated header", 4);
  }
  if (version != kTraceVersion) {
    throw TraceFormatError(
        "LoadTrace: unsupported version " + std::to_string(version), 4);
  }
  uint32_t dims[4];
  uint64_t offset = 6;
  for (auto& d : dims) {
    if (!ReadLe(in, &d)) {
      throw TraceFormatError("LoadTrace: truncated header", offset);
    }
    offset += 4;
  }
  double noise_var = 0.0;
  if (!ReadLe(in, &noise_var)) {
    throw TraceFormatError("LoadTrace: truncated header", offset);
  }
  offset += 8;

  for (int i = 0; i < 4; ++i) {
    if (dims[i] == 0) {
      throw TraceFormatError("LoadTrace: zero dimension in header", 6 + 4 * i);
    }
  }
  const uint64_t total = static_cast<uint64_t>(dims[0]) * dims[1] * dims[2] *
                         dims[3];
  if (total > kMaxTraceEntries ||
      total / dims[0] / dims[1] / dims[2] != dims[3]) {
    throw TraceFormatError("LoadTrace: dimension overflow", 6);
  }
  if (!(noise_var > 0.0) || !std::isfinite(noise_var)) {
    throw TraceFormatError("LoadTrace: invalid noise variance", offset - 8);
  }

  ChannelTrace trace;
  trace.num_ttis = static_cast<int>(dims[0]);
  trace.num_rbs = static_cast<int>(dims[1]);
  trace.num_bs_antennas = static_cast<int>(dims[2]);
  trace.num_users = static_cast<int>(dims[3]);
  trace.noise_var = noise_var;
  trace.h.resize(total);
  for (uint64_t i = 0; i < total; ++i) {
    double re = 0.0;
    double im = 0.0;
    if (!ReadLe(in, &re) || !ReadLe(in, &im)) {
      std::ostringstream msg;
      msg << "LoadTrace: payload truncated, expected " << total
          << " entries (" << total * 16 << " bytes), got " << i;
      throw TraceFormatError(msg.str(), offset + i * 16);
    }
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw TraceFormatError("LoadTrace: non-finite gain", offset + i * 16);
    }
    trace.h[i] = {re, im};
  }
  // Anything after the payload means the header undercounts.
  char extra;
  in.read(&extra, 1);
  if (in.gcount() == 1) {
    throw TraceFormatError("LoadTrace: trailing bytes after payload",
                           offset + total * 16);
  }
  return trace;
}

void SaveTraceCsv(const ChannelTrace& trace, const std::string& path) {
  trace.Validate();
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("SaveTraceCsv: cannot open " + path);
  }
  out << "t,b";
  for (int m = 0; m < trace.num_bs_antennas; ++m) {
    for (int l = 0; l < trace.num_users; ++l) {
      out << ",re_m" << m << "_l" << l << ",im_m" << m << "_l" << l;
    }
  }
  out << "\n";
  out.precision(17);
  for (int t = 0; t < trace.num_ttis; ++t) {
    for (int b = 0; b < trace.num_rbs; ++b) {
      out << t << "," << b;
      for (int m = 0; m < trace.num_bs_antennas; ++m) {
        for (int l = 0; l < trace.num_users; ++l) {
          const auto& gain = trace.At(t, b, m, l);
          out << "," << gain.real() << "," << gain.imag();
        }
      }
      out << "\n";
    }
  }
}

ChannelTrace LoadTraceCsv(const std::string& path, double noise_var) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("LoadTraceCsv: cannot open " + path);
  }
  std::string header;
  if (!std::getline(in, header)) {
    throw TraceFormatError("LoadTraceCsv: empty file", 0);
  }
  // Header gives M and L via the largest re_m{m}_l{l} column.
  int num_antennas = 0;
  int num_users = 0;
  {
    std::stringstream ss(header);
    std::string col;
    int col_idx = 0;
    while (std::getline(ss, col, ',')) {
      if (col_idx == 0 && col != "t") {
        throw TraceFormatError("LoadTraceCsv: first column must be t", 0);
      }
      if (col_idx == 1 && col != "b") {
        throw TraceFormatError("LoadTraceCsv: second column must be b", 0);
      }
      if (col_idx >= 2 && col.rfind("re_m", 0) == 0) {
        int m = 0;
        int l = 0;
        if (std::sscanf(col.c_str(), "re_m%d_l%d", &m, &l) == 2) {
          num_antennas = std::max(num_antennas, m + 1);
          num_users = std::max(num_users, l + 1);
        }
      }
      ++col_idx;
    }
  }
  if (num_antennas < 1 || num_users < 1) {
    throw TraceFormatError("LoadTraceCsv: no channel columns in header", 0);
  }
  const size_t values_per_row = 2 + 2 * static_cast<size_t>(num_antennas) *
                                        num_users;

  struct Row {
    int t = -1;
    int b = -1;
    std::vector<double> values;
  };
  std::vector<Row> rows;
  int max_t = -1;
  int max_b = -1;
  std::string line;
  uint64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::stringstream ss(line);
    std::string field;
    Row row;
    std::vector<double> values;
    size_t field_idx = 0;
    while (std::getline(ss, field, ',')) {
      try {
        const double v = std::stod(field);
        if (field_idx == 0) {
          row.t = static_cast<int>(v);
        } else if (field_idx == 1) {
          row.b = static_cast<int>(v);
        } else {
          values.push_back(v);
        }
      } catch (const std::exception&) {
        throw TraceFormatError(
            "LoadTraceCsv: bad numeric field on line " + std::to_string(line_no),
            line_no);
      }
      ++field_idx;
    }
    if (field_idx != values_per_row) {
      throw TraceFormatError(
          "LoadTraceCsv: wrong column count on line " + std::to_string(line_no),
          line_no);
    }
    row.values = std::move(values);
    max_t = std::max(max_t, row.t);
    max_b = std::max(max_b, row.b);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw TraceFormatError("LoadTraceCsv: no data rows", 1);
  }
  const int num_ttis = max_t + 1;
  const int num_rbs = max_b + 1;
  if (rows.size() != static_cast<size_t>(num_ttis) * num_rbs) {
    throw TraceFormatError("LoadTraceCsv: incomplete (t, b) coverage",
                           line_no);
  }

  ChannelTrace trace;
  trace.num_ttis = num_ttis;
  trace.num_rbs = num_rbs;
  trace.num_bs_antennas = num_antennas;
  trace.num_users = num_users;
  trace.noise_var = noise_var;
  trace.h.resize(static_cast<size_t>(num_ttis) * num_rbs * num_antennas *
                 num_users);
  std::vector<bool> seen(rows.size(), false);
  for (const auto& row : rows) {
    if (row.t < 0 || row.b < 0) {
      throw TraceFormatError("LoadTraceCsv: negative t or b", 1);
    }
    const size_t slot = static_cast<size_t>(row.t) * num_rbs + row.b;
    if (seen[slot]) {
      throw TraceFormatError("LoadTraceCsv: duplicate (t, b) row", 1);
    }
    seen[slot] = true;
    size_t v = 0;
    for (int m = 0; m < num_antennas; ++m) {
      for (int l = 0; l < num_users; ++l) {
        trace.At(row.t, row.b, m, l) = {row.values[v], row.values[v + 1]};
        v += 2;
      }
    }
  }
  trace.Validate();
  return trace;
}

}  // namespace mmsched
