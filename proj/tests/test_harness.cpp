#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "mmsched/harness.h"

using namespace mmsched;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("mmsched_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string File(const std::string& name) const {
    return (path / name).string();
  }
  static int counter;
};

int TempDir::counter = 0;

ExperimentConfig TinyConfig() {
  ExperimentConfig config;
  config.topology = "random-static";
  config.bs_antennas = 4;
  config.users = 4;
  config.rbs = 1;
  config.ttis = 20;
  config.eval_ttis = 20;
  config.max_scheduled = 2;
  config.schedulers = {"opt-pf", "rr-ug", "random"};
  config.seed = 5;
  return config;
}

}  // namespace

TEST_CASE("all shipped presets validate") {
  for (const std::string name :
       {"preset-4x4", "preset-8x8-2rb", "preset-16x16"}) {
    CAPTURE(name);
    CHECK(ExperimentConfig::IsPresetName(name));
    const ExperimentConfig config = ExperimentConfig::Preset(name);
    CHECK_NOTHROW(config.Validate());
  }
  CHECK(!ExperimentConfig::IsPresetName("preset-128x128"));
  CHECK_THROWS(ExperimentConfig::Preset("preset-128x128"));
}

TEST_CASE("preset shapes match their names") {
  const ExperimentConfig small = ExperimentConfig::Preset("preset-4x4");
  CHECK(small.bs_antennas == 4);
  CHECK(small.users == 4);
  CHECK(small.rbs == 1);
  CHECK(small.max_scheduled == 2);

  const ExperimentConfig mid = ExperimentConfig::Preset("preset-8x8-2rb");
  CHECK(mid.bs_antennas == 8);
  CHECK(mid.users == 8);
  CHECK(mid.rbs == 2);

  const ExperimentConfig big = ExperimentConfig::Preset("preset-16x16");
  CHECK(big.bs_antennas == 16);
  CHECK(big.users == 16);
}

TEST_CASE("derived smart defaults follow the user count") {
  ExperimentConfig config = TinyConfig();
  config.users = 8;
  config.bs_antennas = 8;
  CHECK(config.EffectiveNumDims() == 2);
  CHECK(config.EffectiveDimSize() == 16);  // 2^(8/2) = 16 per dimension
  config.users = 16;
  config.bs_antennas = 16;
  CHECK(config.EffectiveNumDims() == 4);
  CHECK(config.EffectiveDimSize() == 16);  // 2^(16/4)
  config.users = 64;
  config.bs_antennas = 64;
  CHECK(config.EffectiveNumDims() == 8);
  CHECK(config.EffectiveDimSize() == 256);  // 2^(64/8)
  config.smart.num_dims = 4;
  CHECK(config.EffectiveNumDims() == 4);
  CHECK(config.EffectiveDimSize() == 65536);  // 2^(64/4)
  config.smart.dim_size = 17;
  CHECK(config.EffectiveDimSize() == 17);
  config.smart.knn_k = 50;
  CHECK(config.EffectiveKnnK() == 17);
}

TEST_CASE("config overrides parse typed values and reject junk") {
  ExperimentConfig config = TinyConfig();
  ApplyOverride(&config, "users", "12");
  CHECK(config.users == 12);
  ApplyOverride(&config, "noise_var", "0.25");
  CHECK(config.noise_var == 0.25);
  ApplyOverride(&config, "schedulers", "opt-mr,smart");
  CHECK(config.schedulers == std::vector<std::string>{"opt-mr", "smart"});
  ApplyOverride(&config, "hidden", "32,16");
  CHECK(config.smart.hidden == std::vector<int>{32, 16});
  ApplyOverride(&config, "auto_alpha", "false");
  CHECK(!config.smart.auto_alpha);
  ApplyOverride(&config, "online_updates", "1");
  CHECK(config.online_updates);
  ApplyOverride(&config, "out_dir", "/tmp/somewhere");
  CHECK(config.out_dir == "/tmp/somewhere");

  CHECK_THROWS_AS(ApplyOverride(&config, "no_such_key", "1"),
                  std::invalid_argument);
  CHECK_THROWS_AS(ApplyOverride(&config, "users", "twelve"),
                  std::invalid_argument);
  CHECK_THROWS_AS(ApplyOverride(&config, "auto_alpha", "perhaps"),
                  std::invalid_argument);
}

TEST_CASE("config files round trip through save and load") {
  TempDir dir;
  ExperimentConfig config = ExperimentConfig::Preset("preset-8x8-2rb");
  config.schedulers = {"opt-pf", "smart"};
  config.smart.hidden = {48, 24};
  config.noise_var = 0.2;
  config.seed = 4242;
  config.pf_fixed_rates = true;
  const std::string path = dir.File("config.cfg");
  SaveConfigFile(config, path);

  const ExperimentConfig loaded = LoadConfigFile(path);
  CHECK(loaded.topology == config.topology);
  CHECK(loaded.bs_antennas == config.bs_antennas);
  CHECK(loaded.users == config.users);
  CHECK(loaded.rbs == config.rbs);
  CHECK(loaded.schedulers == config.schedulers);
  CHECK(loaded.smart.hidden == config.smart.hidden);
  CHECK(loaded.noise_var == config.noise_var);
  CHECK(loaded.seed == config.seed);
  CHECK(loaded.pf_fixed_rates == config.pf_fixed_rates);
  CHECK(loaded.train.epochs == config.train.epochs);
  CHECK(loaded.smart.knn_k == config.smart.knn_k);
}

TEST_CASE("config files accept comments and equals signs") {
  TempDir dir;
  const std::string path = dir.File("hand.cfg");
  {
    std::ofstream out(path);
    out << "# a hand-written config\n"
        << "topology random-static\n"
        << "users = 6\n"
        << "bs_antennas 8\n"
        << "\n"
        << "max_scheduled 3   # trailing comment\n";
  }
  const ExperimentConfig config = LoadConfigFile(path);
  CHECK(config.topology == "random-static");
  CHECK(config.users == 6);
  CHECK(config.bs_antennas == 8);
  CHECK(config.max_scheduled == 3);
}

TEST_CASE("config file errors carry the line number") {
  TempDir dir;
  const std::string path = dir.File("bad.cfg");
  {
    std::ofstream out(path);
    out << "users 8\n"
        << "bogus_key 3\n";
  }
  try {
    LoadConfigFile(path);
    FAIL("expected a parse error");
  } catch (const std::exception& err) {
    const std::string what = err.what();
    CHECK(what.find("2") != std::string::npos);
    CHECK(what.find("bogus_key") != std::string::npos);
  }
  CHECK_THROWS(LoadConfigFile(dir.File("missing.cfg")));
}

TEST_CASE("validation rejects incoherent configs") {
  ExperimentConfig config = TinyConfig();
  CHECK_NOTHROW(config.Validate());

  ExperimentConfig bad = config;
  bad.topology = "hexagonal";
  CHECK_THROWS_AS(bad.Validate(), std::invalid_argument);

  bad = config;
  bad.max_scheduled = 5;  // > min(M, L)
  CHECK_THROWS_AS(bad.Validate(), std::invalid_argument);

  bad = config;
  bad.schedulers = {"opt-pf", "dqn"};
  CHECK_THROWS_AS(bad.Validate(), std::invalid_argument);

  bad = config;
  bad.eval_ttis = 21;  // > ttis
  CHECK_THROWS_AS(bad.Validate(), std::invalid_argument);

  bad = config;
  bad.beta = -0.1;
  CHECK_THROWS_AS(bad.Validate(), std::invalid_argument);

  bad = config;
  bad.smart.batch_size = 512;
  bad.smart.buffer_capacity = 256;  // smaller than a batch
  CHECK_THROWS_AS(bad.Validate(), std::invalid_argument);
}

TEST_CASE("trace construction is deterministic in the seed") {
  ExperimentConfig config = TinyConfig();
  const ChannelTrace a = BuildTrace(config);
  const ChannelTrace b = BuildTrace(config);
  REQUIRE(a.h.size() == b.h.size());
  CHECK(a.h == b.h);
  config.seed = 6;
  const ChannelTrace c = BuildTrace(config);
  CHECK(a.h != c.h);
  CHECK(a.num_bs_antennas == 4);
  CHECK(a.num_users == 4);
  CHECK(a.num_ttis == 20);
}

TEST_CASE("a saved trace loads back through trace_path") {
  TempDir dir;
  ExperimentConfig config = TinyConfig();
  const ChannelTrace generated = BuildTrace(config);
  const std::string path = dir.File("trace.mmtr");
  SaveTrace(generated, path);

  config.trace_path = path;
  const ChannelTrace loaded = BuildTrace(config);
  CHECK(loaded.h == generated.h);

  // Dimension mismatch between config and the stored trace is an error.
  config.users = 8;
  CHECK_THROWS(BuildTrace(config));
}

TEST_CASE("evaluation is deterministic and writes its artifacts") {
  TempDir dir;
  ExperimentConfig config = TinyConfig();
  config.out_dir = dir.File("run_a");
  const RunSummary first = Evaluate(config);
  config.out_dir = dir.File("run_b");
  const RunSummary second = Evaluate(config);

  REQUIRE(first.rows.size() == 3);
  REQUIRE(second.rows.size() == 3);
  for (size_t i = 0; i < first.rows.size(); ++i) {
    CHECK(first.rows[i].name == second.rows[i].name);
    CHECK(first.rows[i].se_mean == second.rows[i].se_mean);
    CHECK(first.rows[i].jfi_mean == second.rows[i].jfi_mean);
    CHECK(first.rows[i].reward_mean == second.rows[i].reward_mean);
    CHECK(first.rows[i].final_jfi == second.rows[i].final_jfi);
  }
  CHECK(fs::exists(dir.File("run_a") + "/eval_opt-pf.csv"));
  CHECK(fs::exists(dir.File("run_a") + "/eval_rr-ug.csv"));
  CHECK(fs::exists(dir.File("run_a") + "/eval_random.csv"));
  CHECK(fs::exists(dir.File("run_a") + "/summary.csv"));

  // Per-TTI CSV layout: pinned header, one row per (tti, rb).
  std::ifstream csv(dir.File("run_a") + "/eval_opt-pf.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header ==
        "tti,rb,scheduled_set,sum_rate,norm_sum_rate,jfi,reward,clamp_count");
  int rows = 0;
  std::string line;
  while (std::getline(csv, line)) {
    if (!line.empty()) {
      ++rows;
    }
  }
  CHECK(rows == 20);
}

TEST_CASE("evaluating smart without a checkpoint is an error") {
  TempDir dir;
  ExperimentConfig config = TinyConfig();
  config.schedulers = {"smart"};
  config.out_dir = dir.File("out");
  CHECK_THROWS(Evaluate(config));
}

TEST_CASE("summary lookups and formatting cover every scheduler") {
  TempDir dir;
  ExperimentConfig config = TinyConfig();
  config.out_dir = dir.File("out");
  const RunSummary summary = Evaluate(config);
  REQUIRE(summary.Find("rr-ug") != nullptr);
  CHECK(summary.Find("rr-ug")->name == "rr-ug");
  CHECK(summary.Find("dqn") == nullptr);

  const std::string table = FormatSummaryTable(summary);
  for (const std::string name : {"opt-pf", "rr-ug", "random"}) {
    CHECK(table.find(name) != std::string::npos);
  }
  CHECK(table.find("se_mean") != std::string::npos);

  const std::string csv_path = dir.File("table.csv");
  WriteSummaryCsv(summary, csv_path);
  std::ifstream in(csv_path);
  std::string header;
  std::getline(in, header);
  CHECK(header.find("scheduler") == 0);
  CHECK(header.find("se_mean") != std::string::npos);
  CHECK(header.find("clamp_count") != std::string::npos);
}

TEST_CASE("stats are internally coherent") {
  TempDir dir;
  ExperimentConfig config = TinyConfig();
  config.out_dir = dir.File("out");
  const RunSummary summary = Evaluate(config);
  for (const SchedulerStats& row : summary.rows) {
    CAPTURE(row.name);
    CHECK(row.se_min <= row.se_mean);
    CHECK(row.se_mean <= row.se_max);
    CHECK(row.jfi_min <= row.jfi_mean);
    CHECK(row.jfi_mean <= row.jfi_max);
    CHECK(row.jfi_min >= 1.0 / 4 - 1e-12);
    CHECK(row.jfi_max <= 1.0 + 1e-12);
    CHECK(row.reward_mean >= 0.0);
    CHECK(row.reward_mean <= 1.0);
    CHECK(row.se_std >= 0.0);
  }
}
