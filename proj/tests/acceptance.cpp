/**
 * @file acceptance.cpp
 * @brief End-to-end acceptance gate. Each criterion prints exactly one
 *        [PASS]/[FAIL] line; the exit code is the number of failures.
 *
 * Run all criteria with no arguments, or name a subset:
 *   acceptance oracle-equivalence codec bounds
 *
 * Runs write artifacts under acceptance_out/ in the working directory and
 * register every CSV they emit in acceptance_out/runs.tsv; the `bounds`
 * criterion rescans that manifest on top of its own sweep, so it audits
 * whatever ran before it in the same directory.
 */
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mmsched/action_codec.h"
#include "mmsched/channel.h"
#include "mmsched/errors.h"
#include "mmsched/fairness.h"
#include "mmsched/harness.h"
#include "mmsched/phy.h"
#include "mmsched/rng.h"
#include "mmsched/sac.h"
#include "mmsched/schedulers.h"

using namespace mmsched;

namespace {

namespace fs = std::filesystem;

const char* kOutRoot = "acceptance_out";

// Training budgets for the learning criteria. The 4x4 budget is the preset
// default; the 8x8 budgets were calibrated on held-out seeds so that a
// healthy build clears the thresholds with margin inside the timeout.
struct Budgets {
  int mobility_epochs = 150;
  int mobility_decay = 75;
  int multirb_epochs = 150;
  int multirb_decay = 75;
  int multirb_ttis = 400;
};
const Budgets kBudgets;

std::string OutDir(const std::string& name) {
  const fs::path dir = fs::path(kOutRoot) / name;
  fs::create_directories(dir);
  return dir.string();
}

void RecordCsv(int num_users, const std::string& path) {
  fs::create_directories(kOutRoot);
  std::ofstream out(fs::path(kOutRoot) / "runs.tsv", std::ios::app);
  out << num_users << '\t' << path << '\n';
}

void RecordEvalDir(const ExperimentConfig& config) {
  for (const std::string& name : config.schedulers) {
    RecordCsv(config.users,
              (fs::path(config.out_dir) / ("eval_" + name + ".csv")).string());
  }
}

double RelErr(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

Eigen::MatrixXcd RandomChannel(int m, int l, Rng& rng) {
  Eigen::MatrixXcd h(m, l);
  const double scale = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < l; ++j) {
      h(i, j) = std::complex<double>(rng.NextGaussian() * scale,
                                     rng.NextGaussian() * scale);
    }
  }
  return h;
}

// PF objective of a concrete decision: sum of achieved rates over ledger
// totals. Recomputed from primitives so scheduler claims are not trusted.
double PfObjective(const Eigen::MatrixXcd& h_full,
                   const std::vector<int>& subset,
                   const std::vector<double>& totals, double noise_var) {
  Eigen::MatrixXcd h_sel(h_full.rows(),
                         static_cast<Eigen::Index>(subset.size()));
  for (size_t j = 0; j < subset.size(); ++j) {
    h_sel.col(static_cast<Eigen::Index>(j)) = h_full.col(subset[j]);
  }
  const std::vector<double> rates = SubsetRates(h_sel, noise_var);
  double obj = 0.0;
  for (size_t j = 0; j < subset.size(); ++j) {
    obj += rates[j] / totals[static_cast<size_t>(subset[j])];
  }
  return obj;
}

double SumRateOf(const Eigen::MatrixXcd& h_full, const std::vector<int>& subset,
                 double noise_var) {
  Eigen::MatrixXcd h_sel(h_full.rows(),
                         static_cast<Eigen::Index>(subset.size()));
  for (size_t j = 0; j < subset.size(); ++j) {
    h_sel.col(static_cast<Eigen::Index>(j)) = h_full.col(subset[j]);
  }
  const std::vector<double> rates = SubsetRates(h_sel, noise_var);
  double sum = 0.0;
  for (const double r : rates) {
    sum += r;
  }
  return sum;
}

// Next ascending k-combination of {0..n-1} in lexicographic order.
bool NextCombination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  for (int i = k - 1; i >= 0; --i) {
    if (c[static_cast<size_t>(i)] < n - k + i) {
      ++c[static_cast<size_t>(i)];
      for (int j = i + 1; j < k; ++j) {
        c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
      }
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// oracle-equivalence

bool OracleEquivalence(std::string* detail) {
  Rng rng(20260819);
  const int num_users = 8, num_antennas = 8, max_scheduled = 4;
  const double noise_var = kDefaultNoiseVar;
  int mismatches = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const Eigen::MatrixXcd h = RandomChannel(num_antennas, num_users, rng);
    std::vector<double> totals(num_users);
    for (double& f : totals) {
      f = 0.1 + 9.9 * rng.NextUnit();
    }

    // Reference: plain scan by rising cardinality, lexicographic inside a
    // cardinality, strict improvement only. First best found wins ties.
    std::vector<int> best;
    double best_obj = -1.0;
    for (int k = 1; k <= max_scheduled; ++k) {
      std::vector<int> subset(static_cast<size_t>(k));
      for (int i = 0; i < k; ++i) {
        subset[static_cast<size_t>(i)] = i;
      }
      do {
        const double obj = PfObjective(h, subset, totals, noise_var);
        if (obj > best_obj) {
          best_obj = obj;
          best = subset;
        }
      } while (NextCombination(subset, num_users));
    }

    const ScheduleDecision got = OptPfSchedule(
        MakeZfSubsetRatesFn(h, noise_var), totals, num_users, max_scheduled);
    if (got.selected != best) {
      ++mismatches;
    }
  }
  std::ostringstream ss;
  ss << "200 instances, " << mismatches << " decision mismatches";
  *detail = ss.str();
  return mismatches == 0;
}

// ---------------------------------------------------------------------------
// dominance

bool Dominance(std::string* detail) {
  Rng rng(424242);
  const double noise_var = kDefaultNoiseVar;
  const int max_scheduled = 4;
  int sum_rate_violations = 0, pf_violations = 0, approx_violations = 0;
  for (int inst = 0; inst < 500; ++inst) {
    const int num_users = 6 + 2 * static_cast<int>(rng.NextBelow(3));
    const Eigen::MatrixXcd h = RandomChannel(num_users, num_users, rng);
    FairnessLedger ledger(num_users, 1);
    for (int l = 0; l < num_users; ++l) {
      ledger.Deliver(l, 0, 0.1 + 9.9 * rng.NextUnit());
    }
    const std::vector<double> totals = ledger.Totals();
    const std::vector<double> su = SuRates(h, noise_var);
    const SubsetRatesFn rates_fn = MakeZfSubsetRatesFn(h, noise_var);

    std::vector<std::vector<int>> decisions;
    const ScheduleDecision mr =
        OptMrSchedule(rates_fn, num_users, max_scheduled);
    const ScheduleDecision pf =
        OptPfSchedule(rates_fn, totals, num_users, max_scheduled);
    Rng approx_rng(DeriveSeed(1000, static_cast<uint64_t>(inst)));
    const ScheduleDecision approx =
        ApproxPfSchedule(h, su, ledger, max_scheduled, max_scheduled, 0.5,
                         noise_var, approx_rng);
    RrUgScheduler rr(num_users, 1, max_scheduled, 0.5,
                     DeriveSeed(2000, static_cast<uint64_t>(inst)));
    const ScheduleDecision rrd = rr.Schedule(0, h);
    const ActionCodec codec(num_users, max_scheduled);
    Rng rand_rng(DeriveSeed(3000, static_cast<uint64_t>(inst)));
    const ScheduleDecision rnd = RandomSchedule(codec, rand_rng);

    decisions = {mr.selected, pf.selected, approx.selected, rrd.selected,
                 rnd.selected};
    const double mr_rate = SumRateOf(h, mr.selected, noise_var);
    const double pf_obj = PfObjective(h, pf.selected, totals, noise_var);
    for (const std::vector<int>& d : decisions) {
      if (SumRateOf(h, d, noise_var) > mr_rate) {
        ++sum_rate_violations;
      }
      if (PfObjective(h, d, totals, noise_var) > pf_obj) {
        ++pf_violations;
      }
    }
    if (PfObjective(h, approx.selected, totals, noise_var) > pf_obj) {
      ++approx_violations;
    }
  }
  std::ostringstream ss;
  ss << "500 instances: " << sum_rate_violations << " sum-rate, "
     << pf_violations << " PF, " << approx_violations << " approx violations";
  *detail = ss.str();
  return sum_rate_violations == 0 && pf_violations == 0 &&
         approx_violations == 0;
}

// ---------------------------------------------------------------------------
// zf

bool ZfCorrectness(std::string* detail) {
  Rng rng(777);
  double worst = 0.0;
  for (int inst = 0; inst < 10000; ++inst) {
    const int m = 1 + static_cast<int>(rng.NextBelow(32));
    const int n_cap = std::min(m, 8);
    const int n = 1 + static_cast<int>(rng.NextBelow(
                          static_cast<uint64_t>(n_cap)));
    Eigen::MatrixXcd h = RandomChannel(m, n, rng);
    ZfResult zf;
    for (;;) {
      try {
        zf = ZfBeamformer(h);
        if (zf.condition <= 1e9) {
          break;
        }
      } catch (const SingularChannelError&) {
      }
      h = RandomChannel(m, n, rng);
    }
    const Eigen::MatrixXcd prod = zf.w.adjoint() * h;
    const double err =
        (prod - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    worst = std::max(worst, err);
  }
  std::ostringstream ss;
  ss << "worst |W^H H - I| = " << worst << " over 10000 instances";
  *detail = ss.str();
  return worst < 1e-9;
}

// ---------------------------------------------------------------------------
// codec

bool Codec(std::string* detail) {
  // Exhaustive round trips at the two small geometries.
  const ActionCodec c63(6, 3);
  if (c63.num_actions() != 41) {
    *detail = "L=6 N=3 action count != 41";
    return false;
  }
  for (uint64_t a = 0; a < 41; ++a) {
    if (c63.Encode(c63.Decode(a)) != a) {
      *detail = "L=6 N=3 round trip failed";
      return false;
    }
  }
  const ActionCodec c42(4, 2);
  if (c42.num_actions() != 10) {
    *detail = "L=4 N=2 action count != 10";
    return false;
  }
  for (uint64_t a = 0; a < 10; ++a) {
    if (c42.Encode(c42.Decode(a)) != a) {
      *detail = "L=4 N=2 round trip failed";
      return false;
    }
  }

  // Dimension split/join on sampled indices at D=8, 256 per dimension.
  const uint64_t space = uint64_t(1) << 60;
  const DimensionCodec dims(space, std::vector<int>(8, 256));
  Rng rng(99);
  for (int i = 0; i < 10000; ++i) {
    const uint64_t a = rng.NextBelow(space);
    if (dims.Join(dims.Split(a)) != a) {
      *detail = "dimension split/join round trip failed";
      return false;
    }
  }

  const double count = static_cast<double>(ActionCodec(64, 16).num_actions());
  const double expect = 7e14;
  std::ostringstream ss;
  ss << "A(64,16) = " << count;
  *detail = ss.str();
  return std::abs(count - expect) / expect < 0.01;
}

// ---------------------------------------------------------------------------
// gradients

bool Gradients(std::string* detail) {
  SacConfig config;
  config.state_dim = 6;
  config.action_dim = 2;
  config.hidden = {64, 32};
  config.batch_size = 8;
  config.buffer_capacity = 64;
  config.min_fill = 8;
  config.knn_k = 2;
  config.max_candidates = 16;
  SacAgent agent(config, DimensionCodec(10, {4, 4}), 12345);

  Rng rng(54321);
  std::vector<Transition> storage;
  for (int i = 0; i < 8; ++i) {
    Transition t;
    for (int j = 0; j < 6; ++j) {
      t.state.push_back(rng.NextUnit());
      t.next_state.push_back(rng.NextUnit());
    }
    for (const int sub : agent.codec().Split(rng.NextBelow(10))) {
      t.action.push_back(CellCenter(sub, 4));
    }
    t.reward = rng.NextUnit();
    t.done = (i % 4) == 3;
    storage.push_back(std::move(t));
  }
  std::vector<const Transition*> batch;
  for (const Transition& t : storage) {
    batch.push_back(&t);
  }
  std::vector<std::vector<double>> noise;
  for (int i = 0; i < 8; ++i) {
    noise.push_back({rng.NextGaussian(), rng.NextGaussian()});
  }

  const double h = 1e-5;
  double worst = 0.0;

  std::vector<double> g1(agent.critic1().num_params(), 0.0);
  std::vector<double> g2(agent.critic2().num_params(), 0.0);
  agent.CriticLoss(batch, noise, &g1, &g2);
  for (Mlp* critic : {&agent.critic1(), &agent.critic2()}) {
    const std::vector<double>& grads = critic == &agent.critic1() ? g1 : g2;
    for (size_t p = 0; p < critic->num_params(); ++p) {
      const double save = critic->params()[p];
      critic->params()[p] = save + h;
      const double up = agent.CriticLoss(batch, noise, nullptr, nullptr);
      critic->params()[p] = save - h;
      const double down = agent.CriticLoss(batch, noise, nullptr, nullptr);
      critic->params()[p] = save;
      const double fd = (up - down) / (2.0 * h);
      if (std::abs(fd) > 1e-7 || std::abs(grads[p]) > 1e-7) {
        worst = std::max(worst, RelErr(fd, grads[p]));
      }
    }
  }

  std::vector<double> actor_grads(agent.actor().num_params(), 0.0);
  double mean_logp = 0.0;
  agent.ActorLoss(batch, noise, &actor_grads, &mean_logp);
  for (size_t p = 0; p < agent.actor().num_params(); ++p) {
    const double save = agent.actor().params()[p];
    agent.actor().params()[p] = save + h;
    const double up = agent.ActorLoss(batch, noise, nullptr, nullptr);
    agent.actor().params()[p] = save - h;
    const double down = agent.ActorLoss(batch, noise, nullptr, nullptr);
    agent.actor().params()[p] = save;
    const double fd = (up - down) / (2.0 * h);
    if (std::abs(fd) > 1e-7 || std::abs(actor_grads[p]) > 1e-7) {
      worst = std::max(worst, RelErr(fd, actor_grads[p]));
    }
  }

  const double ha = 1e-6;
  const double save = agent.log_alpha();
  agent.set_log_alpha(save + ha);
  const double up = agent.AlphaLoss(mean_logp);
  agent.set_log_alpha(save - ha);
  const double down = agent.AlphaLoss(mean_logp);
  agent.set_log_alpha(save);
  worst = std::max(
      worst, RelErr((up - down) / (2.0 * ha), agent.AlphaGrad(mean_logp)));

  std::ostringstream ss;
  ss << "worst relative error " << worst;
  *detail = ss.str();
  return worst < 1e-4;
}

// ---------------------------------------------------------------------------
// learning-4x4

bool Learning4x4(std::string* detail) {
  int wins = 0;
  std::ostringstream ss;
  for (const uint64_t seed : {101, 202, 303}) {
    ExperimentConfig config = ExperimentConfig::Preset("preset-4x4");
    config.seed = seed;
    config.out_dir = OutDir("learning-4x4/seed" + std::to_string(seed));
    const TrainResult train = Train(config);
    RecordCsv(config.users, train.curve_path);
    if (train.diverged) {
      ss << " seed" << seed << ":diverged";
      continue;
    }
    double tail = 0.0;
    const size_t n = train.epoch_rewards.size();
    for (size_t e = n - 20; e < n; ++e) {
      tail += train.epoch_rewards[e] / 20.0;
    }
    const double final_jfi = train.epoch_jfi.back();

    ExperimentConfig eval_config = config;
    eval_config.schedulers = {"opt-pf"};
    eval_config.out_dir =
        OutDir("learning-4x4/seed" + std::to_string(seed) + "_ref");
    const RunSummary ref = Evaluate(eval_config);
    RecordEvalDir(eval_config);
    const double opt_reward = ref.Find("opt-pf")->reward_mean;

    const bool ok = tail >= 0.90 * opt_reward && final_jfi >= 0.90;
    wins += ok ? 1 : 0;
    ss << " seed" << seed << ":" << (ok ? "ok" : "FAIL") << " r=" << tail
       << "/" << opt_reward << " jfi=" << final_jfi;
  }
  *detail = "2-of-3 needed:" + ss.str();
  return wins >= 2;
}

// ---------------------------------------------------------------------------
// mobility-8x8

ExperimentConfig MobilityConfig(uint64_t seed) {
  ExperimentConfig config = ExperimentConfig::Preset("preset-8x8-2rb");
  config.topology = "mobile";
  config.rbs = 1;
  config.train.epochs = kBudgets.mobility_epochs;
  config.train.epsilon_decay_epochs = kBudgets.mobility_decay;
  config.seed = seed;
  return config;
}

bool Mobility8x8(std::string* detail) {
  int wins = 0;
  std::ostringstream ss;
  for (const uint64_t seed : {11, 22, 33}) {
    ExperimentConfig config = MobilityConfig(seed);
    config.out_dir = OutDir("mobility/seed" + std::to_string(seed));
    const TrainResult train = Train(config);
    RecordCsv(config.users, train.curve_path);
    if (train.diverged) {
      ss << " seed" << seed << ":diverged";
      continue;
    }
    ExperimentConfig eval_config = config;
    eval_config.schedulers = {"smart", "rr-ug"};
    eval_config.checkpoint_path = train.checkpoint_path;
    eval_config.out_dir =
        OutDir("mobility/seed" + std::to_string(seed) + "_eval");
    const RunSummary summary = Evaluate(eval_config);
    RecordEvalDir(eval_config);
    const SchedulerStats* smart = summary.Find("smart");
    const SchedulerStats* rrug = summary.Find("rr-ug");
    const bool ok = smart->se_mean >= 1.10 * rrug->se_mean &&
                    smart->jfi_mean >= rrug->jfi_mean;
    wins += ok ? 1 : 0;
    ss << " seed" << seed << ":" << (ok ? "ok" : "FAIL")
       << " se=" << smart->se_mean << "/" << rrug->se_mean
       << " jfi=" << smart->jfi_mean << "/" << rrug->jfi_mean;
  }
  *detail = "2-of-3 needed:" + ss.str();
  return wins >= 2;
}

// ---------------------------------------------------------------------------
// multi-rb

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool MultiRb(std::string* detail) {
  std::ostringstream ss;

  // Degeneracy: with one RB the two variants are the same computation.
  bool identical = true;
  {
    std::vector<std::string> curves, ckpts;
    for (const std::string variant : {"sa", "ma"}) {
      ExperimentConfig config = ExperimentConfig::Preset("preset-8x8-2rb");
      config.rbs = 1;
      config.smart_variant = variant;
      config.train.epochs = 6;
      config.train.iters_per_epoch = 50;
      config.smart.min_fill = 100;
      config.seed = 404;
      config.out_dir = OutDir("multi-rb/b1_" + variant);
      const TrainResult train = Train(config);
      RecordCsv(config.users, train.curve_path);
      curves.push_back(Slurp(train.curve_path));
      ckpts.push_back(Slurp(train.checkpoint_path));
    }
    identical = curves[0] == curves[1] && ckpts[0] == ckpts[1] &&
                !ckpts[0].empty();
    ss << " b1-identical:" << (identical ? "yes" : "NO");
  }

  int wins = 0;
  for (const uint64_t seed : {51, 62, 73}) {
    std::map<std::string, SchedulerStats> stats;
    bool diverged = false;
    for (const std::string variant : {"sa", "ma"}) {
      ExperimentConfig config = ExperimentConfig::Preset("preset-8x8-2rb");
      config.smart_variant = variant;
      config.ttis = kBudgets.multirb_ttis;
      config.train.epochs = kBudgets.multirb_epochs;
      config.train.epsilon_decay_epochs = kBudgets.multirb_decay;
      config.seed = seed;
      config.out_dir =
          OutDir("multi-rb/" + variant + "_seed" + std::to_string(seed));
      const TrainResult train = Train(config);
      RecordCsv(config.users, train.curve_path);
      if (train.diverged) {
        diverged = true;
        break;
      }
      ExperimentConfig eval_config = config;
      eval_config.schedulers = {"smart"};
      eval_config.checkpoint_path = train.checkpoint_path;
      eval_config.out_dir = OutDir("multi-rb/" + variant + "_seed" +
                                   std::to_string(seed) + "_eval");
      const RunSummary summary = Evaluate(eval_config);
      RecordEvalDir(eval_config);
      stats[variant] = *summary.Find("smart");
    }
    if (diverged) {
      ss << " seed" << seed << ":diverged";
      continue;
    }
    const bool ok = stats["sa"].se_mean >= stats["ma"].se_mean &&
                    stats["sa"].jfi_mean >= 0.9 && stats["ma"].jfi_mean >= 0.9;
    wins += ok ? 1 : 0;
    ss << " seed" << seed << ":" << (ok ? "ok" : "FAIL")
       << " se=" << stats["sa"].se_mean << "/" << stats["ma"].se_mean
       << " jfi=" << stats["sa"].jfi_mean << "/" << stats["ma"].jfi_mean;
  }
  *detail = "b1 identity + 2-of-3 needed:" + ss.str();
  return identical && wins >= 2;
}

// ---------------------------------------------------------------------------
// fairness-floor

bool FairnessFloor(std::string* detail) {
  const int num_users = 8, ttis = 400, max_scheduled = 4;
  const double noise_var = kDefaultNoiseVar;
  ChannelTrace trace = GenRandomStatic(8, num_users, 1, ttis, 20260819);
  const double boost = std::sqrt(10.0);
  for (int t = 0; t < ttis; ++t) {
    for (int m = 0; m < 8; ++m) {
      trace.At(t, 0, m, 0) *= boost;
    }
  }

  const auto deliver = [noise_var](const Eigen::MatrixXcd& h,
                                   const std::vector<int>& subset,
                                   FairnessLedger* ledger) {
    Eigen::MatrixXcd h_sel(h.rows(), static_cast<Eigen::Index>(subset.size()));
    for (size_t j = 0; j < subset.size(); ++j) {
      h_sel.col(static_cast<Eigen::Index>(j)) = h.col(subset[j]);
    }
    const std::vector<double> rates = SubsetRates(h_sel, noise_var);
    for (size_t j = 0; j < subset.size(); ++j) {
      ledger->Deliver(subset[j], 0, rates[j]);
    }
  };

  FairnessLedger mr_ledger(num_users, 1);
  FairnessLedger pf_ledger(num_users, 1);
  for (int t = 0; t < ttis; ++t) {
    const Eigen::MatrixXcd h = trace.Slice(t, 0);
    const SubsetRatesFn rates_fn = MakeZfSubsetRatesFn(h, noise_var);
    const ScheduleDecision mr =
        OptMrSchedule(rates_fn, num_users, max_scheduled);
    const ScheduleDecision pf = OptPfSchedule(rates_fn, pf_ledger.Totals(),
                                              num_users, max_scheduled);
    deliver(h, mr.selected, &mr_ledger);
    deliver(h, pf.selected, &pf_ledger);
  }
  const double jfi_mr = Jfi(mr_ledger.Totals());
  const double jfi_pf = Jfi(pf_ledger.Totals());
  std::ostringstream ss;
  ss << "JFI opt-mr " << jfi_mr << " < opt-pf " << jfi_pf;
  *detail = ss.str();
  return jfi_mr < jfi_pf;
}

// ---------------------------------------------------------------------------
// bounds

bool ScanCsvBounds(const std::string& path, int num_users, int* rows,
                   std::string* why) {
  std::ifstream in(path);
  if (!in) {
    *why = "missing " + path;
    return false;
  }
  std::string header;
  std::getline(in, header);
  std::vector<std::string> cols;
  {
    std::stringstream hs(header);
    std::string c;
    while (std::getline(hs, c, ',')) {
      cols.push_back(c);
    }
  }
  int jfi_col = -1;
  std::vector<int> reward_cols;
  for (size_t i = 0; i < cols.size(); ++i) {
    if (cols[i] == "jfi") {
      jfi_col = static_cast<int>(i);
    }
    if (cols[i] == "sa_reward" || cols[i] == "reward" ||
        cols[i] == "random_reward") {
      reward_cols.push_back(static_cast<int>(i));
    }
  }
  const double jfi_floor = 1.0 / num_users;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) {
      fields.push_back(f);
    }
    ++*rows;
    if (jfi_col >= 0) {
      const double jfi = std::stod(fields[static_cast<size_t>(jfi_col)]);
      if (!(jfi >= jfi_floor && jfi <= 1.0)) {
        *why = path + ": jfi " + std::to_string(jfi);
        return false;
      }
    }
    for (const int rc : reward_cols) {
      const double r = std::stod(fields[static_cast<size_t>(rc)]);
      if (!(r >= 0.0 && r <= 1.0)) {
        *why = path + ": reward " + std::to_string(r);
        return false;
      }
    }
  }
  return true;
}

bool Bounds(std::string* detail) {
  // Own sweep: the three presets plus RB-correlation and mobility variants,
  // classical schedulers only, shortened horizon.
  struct SweepEntry {
    std::string preset;
    std::function<void(ExperimentConfig*)> tweak;
    std::string tag;
  };
  const std::vector<SweepEntry> sweep = {
      {"preset-4x4", [](ExperimentConfig*) {}, "p4"},
      {"preset-8x8-2rb", [](ExperimentConfig*) {}, "p8"},
      {"preset-16x16", [](ExperimentConfig*) {}, "p16"},
      {"preset-8x8-2rb",
       [](ExperimentConfig* c) {
         c->rb_mode = "tapped-delay";
         c->num_taps = 2;
       },
       "p8tap"},
      {"preset-8x8-2rb",
       [](ExperimentConfig* c) {
         c->topology = "mobile";
         c->rbs = 1;
       },
       "p8mob"},
  };
  for (size_t i = 0; i < sweep.size(); ++i) {
    const SweepEntry& entry = sweep[i];
    ExperimentConfig config = ExperimentConfig::Preset(entry.preset);
    entry.tweak(&config);
    config.ttis = 120;
    config.eval_ttis = 120;
    config.seed = 60 + static_cast<uint64_t>(i);
    config.schedulers = {"opt-mr", "opt-pf", "approx-pf", "rr-ug", "random"};
    config.out_dir = OutDir("bounds/" + entry.tag);
    Evaluate(config);
    RecordEvalDir(config);
  }

  // Audit everything registered so far, this sweep included.
  std::ifstream manifest(fs::path(kOutRoot) / "runs.tsv");
  int files = 0, rows = 0;
  std::string line;
  while (std::getline(manifest, line)) {
    if (line.empty()) {
      continue;
    }
    const size_t tab = line.find('\t');
    const int num_users = std::stoi(line.substr(0, tab));
    const std::string path = line.substr(tab + 1);
    std::string why;
    if (!ScanCsvBounds(path, num_users, &rows, &why)) {
      *detail = why;
      return false;
    }
    ++files;
  }
  std::ostringstream ss;
  ss << files << " files, " << rows << " rows, zero violations";
  *detail = ss.str();
  return files > 0;
}

// ---------------------------------------------------------------------------
// online-updates

bool OnlineUpdates(std::string* detail) {
  ExperimentConfig config = MobilityConfig(2026);
  config.out_dir = OutDir("online/train");
  const TrainResult train = Train(config);
  RecordCsv(config.users, train.curve_path);
  if (train.diverged) {
    *detail = "training diverged";
    return false;
  }
  config.schedulers = {"smart"};
  config.checkpoint_path = train.checkpoint_path;

  config.online_updates = false;
  config.out_dir = OutDir("online/frozen");
  const RunSummary frozen = Evaluate(config);
  RecordEvalDir(config);

  config.online_updates = true;
  config.out_dir = OutDir("online/online");
  const RunSummary online = Evaluate(config);
  RecordEvalDir(config);

  const double se_frozen = frozen.Find("smart")->se_mean;
  const double se_online = online.Find("smart")->se_mean;
  const double rel = std::abs(se_online - se_frozen) / se_frozen;
  std::ostringstream ss;
  ss << "se frozen " << se_frozen << " vs online " << se_online
     << " (rel diff " << rel << ")";
  *detail = ss.str();
  return rel < 0.10;
}

}  // namespace

int main(int argc, char** argv) {
  using Criterion = std::function<bool(std::string*)>;
  const std::vector<std::pair<std::string, Criterion>> criteria = {
      {"oracle-equivalence", OracleEquivalence},
      {"dominance", Dominance},
      {"zf", ZfCorrectness},
      {"codec", Codec},
      {"gradients", Gradients},
      {"learning-4x4", Learning4x4},
      {"mobility-8x8", Mobility8x8},
      {"multi-rb", MultiRb},
      {"fairness-floor", FairnessFloor},
      {"bounds", Bounds},
      {"online-updates", OnlineUpdates},
  };

  std::vector<std::string> wanted;
  for (int i = 1; i < argc; ++i) {
    wanted.push_back(argv[i]);
  }
  int failures = 0;
  bool matched_any = false;
  for (const auto& [name, fn] : criteria) {
    if (!wanted.empty() &&
        std::find(wanted.begin(), wanted.end(), name) == wanted.end()) {
      continue;
    }
    matched_any = true;
    const auto start = std::chrono::steady_clock::now();
    std::string csv_detail;
    bool ok = false;
    try {
      ok = fn(&csv_detail);
    } catch (const std::exception& e) {
      csv_detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << csv_detail
              << " (" << secs << " s)" << std::endl;
    failures += ok ? 0 : 1;
  }
  if (!matched_any) {
    std::cerr << "no criterion matches; known names:";
    for (const auto& [name, fn] : criteria) {
      std::cerr << ' ' << name;
    }
    std::cerr << '\n';
    return 2;
  }
  return failures;
}
