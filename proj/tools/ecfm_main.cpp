#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ecfm/clusterer.hpp"
#include "ecfm/corpus.hpp"
#include "ecfm/eval.hpp"
#include "ecfm/pipeline.hpp"
#include "ecfm/synthgen.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

struct TrainFlags {
  std::string mode = "ecfm";
  std::string characterizer = "text_cnn";
  std::string selector_order = "largest";
  std::string config_path;
};

// One entry per flat config-file key: the CLI option (so command-line use
// can be detected) and a setter parsing the file value into the bound
// variable.
struct ConfigBinding {
  CLI::Option* opt = nullptr;
  std::function<void(const std::string&)> set;
};
using ConfigBindings = std::map<std::string, ConfigBinding>;

template <typename T>
void parse_into(const std::string& value, T& target) {
  if constexpr (std::is_same_v<T, std::string>) {
    target = value;
  } else if constexpr (std::is_same_v<T, int>) {
    target = std::stoi(value);
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    target = std::stoull(value);
  } else {
    target = std::stod(value);
  }
}

template <typename T>
CLI::Option* bind_option(CLI::App* cmd, ConfigBindings& bindings,
                         const std::string& flag, T& target,
                         const std::string& help) {
  CLI::Option* opt = cmd->add_option(flag, target, help)->capture_default_str();
  ConfigBinding binding;
  binding.opt = opt;
  binding.set = [&target](const std::string& v) { parse_into(v, target); };
  bindings.emplace(flag.substr(2), std::move(binding));
  return opt;
}

// Flat key=value config file (# comments, blank lines allowed). Keys mirror
// the long option names without the leading dashes; values given on the
// command line win.
void apply_config_file(const std::string& path,
                       const ConfigBindings& bindings) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto from = s.find_first_not_of(" \t");
    const auto to = s.find_last_not_of(" \t\r");
    return from == std::string::npos ? std::string()
                                     : s.substr(from, to - from + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    auto it = bindings.find(key);
    if (it == bindings.end()) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": unknown config key \"" + key + "\"");
    }
    if (it->second.opt->count() == 0) {
      try {
        it->second.set(value);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": bad value \"" + value + "\" for \"" + key +
                                 "\"");
      }
    }
  }
}

// Pipeline knobs shared by `train` and `sweep`.
void add_pipeline_options(CLI::App* cmd, ecfm::PipelineConfig& cfg,
                          TrainFlags& flags, ConfigBindings& bindings) {
  bind_option(cmd, bindings, "--alpha", cfg.alpha,
              "Trade-off between news and event credibility");
  bind_option(cmd, bindings, "--updates", cfg.updates,
              "Self-training updates");
  bind_option(cmd, bindings, "--mode", flags.mode, "ecfm or ecfm_minus")
      ->check(CLI::IsMember({"ecfm", "ecfm_minus", "ecfm-minus"}));
  bind_option(cmd, bindings, "--learning-rate", cfg.learning_rate,
              "SGD learning rate");
  bind_option(cmd, bindings, "--batch-size", cfg.batch_size,
              "Mini-batch size");
  bind_option(cmd, bindings, "--seed", cfg.seed, "Run seed");
  bind_option(cmd, bindings, "--characterizer", flags.characterizer,
              "text_cnn or linear")
      ->check(CLI::IsMember({"text_cnn", "linear"}));
  bind_option(cmd, bindings, "--selector-order", flags.selector_order,
              "largest, smallest, or symmetric")
      ->check(CLI::IsMember({"largest", "smallest", "symmetric"}));
  bind_option(cmd, bindings, "--lambda-l", cfg.lambda_l,
              "Labeled loss weight");
  bind_option(cmd, bindings, "--lambda-s", cfg.lambda_s,
              "Pseudo loss weight");
  bind_option(cmd, bindings, "--kalman-q", cfg.kalman.q,
              "Prediction noise covariance");
  bind_option(cmd, bindings, "--kalman-r", cfg.kalman.r,
              "Observation noise covariance");
  bind_option(cmd, bindings, "--kalman-b", cfg.kalman.b,
              "Observation transition scalar");
  bind_option(cmd, bindings, "--kalman-p0", cfg.kalman.p0,
              "Initial error covariance");
  bind_option(cmd, bindings, "--kalman-c0", cfg.kalman.c0,
              "Initial corrected credibility");
  bind_option(cmd, bindings, "--tau", cfg.tau,
              "Clustering cosine threshold (echo only)");
  cmd->add_option("--config", flags.config_path,
                  "Flat key=value config file; flags win")
      ->check(CLI::ExistingFile);
}

void finalize_config(ecfm::PipelineConfig& cfg, const TrainFlags& flags) {
  cfg.mode = ecfm::mode_from_string(flags.mode);
  cfg.characterizer = ecfm::characterizer_kind_from_string(flags.characterizer);
  cfg.selector_order = ecfm::selector_order_from_string(flags.selector_order);
}

std::vector<double> parse_alpha_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    out.push_back(std::stod(part));
  }
  if (out.empty()) {
    throw std::runtime_error("--alphas produced an empty grid");
  }
  return out;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void print_metrics(const ecfm::Metrics& m, std::ostream& os) {
  os << "accuracy  " << m.accuracy << "\n"
     << "auc_roc   " << m.auc_roc << "\n"
     << "precision " << m.precision << "\n"
     << "recall    " << m.recall << "\n"
     << "f1        " << m.f1 << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-correlation filtering for fake news detection"};
  app.require_subcommand(1);
  app.fallthrough();  // app-level flags may follow the subcommand name
  bool verbose = false;
  app.add_flag("--verbose", verbose, "Per-update progress on stderr");

  // cluster ---------------------------------------------------------------
  auto* cluster_cmd =
      app.add_subcommand("cluster", "Assign event ids by single-pass clustering");
  std::string cluster_in, cluster_out;
  double cluster_tau = 0.5;
  cluster_cmd->add_option("--input", cluster_in, "Input JSONL dataset")
      ->required()
      ->check(CLI::ExistingFile);
  cluster_cmd->add_option("--tau", cluster_tau, "Cosine similarity threshold")
      ->capture_default_str();
  cluster_cmd->add_option("--output", cluster_out, "Output JSONL dataset")
      ->required();
  cluster_cmd->callback([&] {
    const ecfm::Dataset in = ecfm::ingest(cluster_in);
    const ecfm::Dataset out = ecfm::assign_events(in, cluster_tau);
    ecfm::write_dataset(out, cluster_out);
    if (verbose) {
      std::cerr << "clustered " << out.size() << " items into "
                << out.event_index().size() << " events\n";
    }
  });

  // synth -----------------------------------------------------------------
  auto* synth_cmd =
      app.add_subcommand("synth", "Generate a synthetic event-correlated corpus");
  ecfm::SynthConfig synth_cfg;
  std::string synth_out;
  synth_cmd->add_option("--events", synth_cfg.n_events, "Number of events")
      ->capture_default_str();
  synth_cmd->add_option("--news-per-event", synth_cfg.news_per_event,
                        "News per event")
      ->capture_default_str();
  synth_cmd->add_option("--labeled-frac", synth_cfg.labeled_frac,
                        "Fraction of news carrying labels")
      ->capture_default_str();
  synth_cmd->add_option("--purity", synth_cfg.purity,
                        "Probability a news inherits its event's class")
      ->capture_default_str();
  synth_cmd->add_option("--balance", synth_cfg.class_balance,
                        "Probability an event is Real")
      ->capture_default_str();
  synth_cmd->add_option("--shared-tokens", synth_cfg.shared_tokens,
                        "Shared vocabulary size")
      ->capture_default_str();
  synth_cmd->add_option("--class-tokens", synth_cfg.class_tokens,
                        "Signal tokens per class")
      ->capture_default_str();
  synth_cmd->add_option("--tokens-per-news", synth_cfg.tokens_per_news,
                        "Tokens drawn per news")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth_cfg.seed, "Generator seed")
      ->capture_default_str();
  synth_cmd->add_option("--output", synth_out, "Output JSONL dataset")
      ->required();
  synth_cmd->callback([&] {
    const ecfm::SynthOutput out = ecfm::generate(synth_cfg);
    ecfm::write_dataset(out.dataset, synth_out);
    if (verbose) {
      std::cerr << "wrote " << out.dataset.size() << " news across "
                << out.dataset.event_index().size() << " events\n";
    }
  });

  // train -----------------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "Run the self-training pipeline");
  ecfm::PipelineConfig train_cfg;
  TrainFlags train_flags;
  ConfigBindings train_bindings;
  std::string train_data, train_report_out, train_resume, train_ckpt_out;
  std::string train_model_out, train_embeddings;
  int ckpt_every = 0;
  train_cmd->add_option("--data", train_data, "Input JSONL dataset")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train_report_out, "Report JSON path")
      ->required();
  add_pipeline_options(train_cmd, train_cfg, train_flags, train_bindings);
  train_cmd->add_option("--embeddings", train_embeddings,
                        "Plain-text word vectors to seed the embedding layer")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--checkpoint-out", train_ckpt_out,
                        "Checkpoint file path");
  train_cmd->add_option("--checkpoint-every", ckpt_every,
                        "Checkpoint every N updates (0 = only at the end)");
  train_cmd->add_option("--resume", train_resume,
                        "Resume from a checkpoint (ignores other flags)")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--model-out", train_model_out,
                        "Save the final characterizer checkpoint");
  train_cmd->callback([&] {
    const auto start = std::chrono::steady_clock::now();
    std::unique_ptr<ecfm::PipelineRun> pr;
    if (!train_resume.empty()) {
      pr = std::make_unique<ecfm::PipelineRun>(
          ecfm::PipelineRun::resume(train_resume));
    } else {
      if (train_data.empty()) {
        throw std::runtime_error("train: --data is required unless --resume");
      }
      if (!train_flags.config_path.empty()) {
        apply_config_file(train_flags.config_path, train_bindings);
      }
      finalize_config(train_cfg, train_flags);
      pr = std::make_unique<ecfm::PipelineRun>(train_cfg,
                                               ecfm::ingest(train_data));
      if (!train_embeddings.empty()) {
        const int n =
            pr->apply_word_vectors(ecfm::load_word_vectors(train_embeddings));
        if (verbose) std::cerr << "applied " << n << " word vectors\n";
      }
    }
    if (verbose) {
      pr->on_update = [](const ecfm::EpochLog& log) {
        std::cerr << "update " << log.t << ": dt=" << log.dt
                  << " selected=" << log.selected_count
                  << " positive_fraction=" << log.positive_fraction
                  << " labeled_loss=" << log.labeled_loss << "\n";
      };
    }
    while (!pr->done()) {
      pr->step();
      if (!train_ckpt_out.empty() && ckpt_every > 0 &&
          pr->completed_updates() % ckpt_every == 0) {
        pr->checkpoint(train_ckpt_out);
      }
    }
    if (!train_ckpt_out.empty()) pr->checkpoint(train_ckpt_out);
    if (!train_model_out.empty()) pr->characterizer().save(train_model_out);
    ecfm::RunReport report = pr->finish();
    report.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    report.save(train_report_out);
    print_metrics(report.metrics, std::cout);
  });

  // sweep -----------------------------------------------------------------
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Alpha sweep with repeated seeded runs");
  ecfm::PipelineConfig sweep_cfg;
  TrainFlags sweep_flags;
  ConfigBindings sweep_bindings;
  std::string sweep_data, sweep_out;
  std::string sweep_alphas = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
  int sweep_runs = 5;
  int sweep_jobs = 0;
  sweep_cmd->add_option("--data", sweep_data, "Input JSONL dataset")
      ->required()
      ->check(CLI::ExistingFile);
  sweep_cmd->add_option("--alphas", sweep_alphas, "Comma-separated alpha grid")
      ->capture_default_str();
  sweep_cmd->add_option("--runs", sweep_runs, "Runs per alpha")
      ->capture_default_str();
  sweep_cmd
      ->add_option("--jobs", sweep_jobs,
                   "Worker threads (0 = hardware concurrency)")
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "Output prefix (.json and .csv)")
      ->required();
  add_pipeline_options(sweep_cmd, sweep_cfg, sweep_flags, sweep_bindings);
  sweep_cmd->callback([&] {
    if (!sweep_flags.config_path.empty()) {
      apply_config_file(sweep_flags.config_path, sweep_bindings);
    }
    finalize_config(sweep_cfg, sweep_flags);
    const ecfm::Dataset data = ecfm::ingest(sweep_data);
    const std::vector<double> grid = parse_alpha_list(sweep_alphas);
    const std::vector<ecfm::SweepRow> rows =
        ecfm::sweep_alpha(grid, sweep_runs, sweep_cfg, data, sweep_jobs);
    ojson j;
    j["version"] = 1;
    j["base_config"] = sweep_cfg.to_json();
    j["runs_per_alpha"] = sweep_runs;
    j["rows"] = ecfm::sweep_to_json(rows);
    write_text_file(sweep_out + ".json", j.dump(2) + "\n");
    write_text_file(sweep_out + ".csv", ecfm::sweep_to_csv(rows));
    std::cout << ecfm::sweep_to_csv(rows);
  });

  // eval ------------------------------------------------------------------
  auto* eval_cmd =
      app.add_subcommand("eval", "Inspect a report, optionally against a baseline");
  std::string eval_report, eval_baseline, eval_out;
  eval_cmd->add_option("--report", eval_report, "RunReport JSON")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--baseline", eval_baseline, "Baseline RunReport JSON")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", eval_out, "Write deltas CSV here");
  eval_cmd->callback([&] {
    const ecfm::RunReport report = ecfm::RunReport::load(eval_report);
    print_metrics(report.metrics, std::cout);
    if (!eval_baseline.empty()) {
      const ecfm::RunReport base = ecfm::RunReport::load(eval_baseline);
      const ecfm::MetricDeltas d = ecfm::compare(report, base);
      std::cout << "deltas vs baseline (report - baseline):\n"
                << "accuracy  " << d.accuracy << "\n"
                << "auc_roc   " << d.auc_roc << "\n"
                << "precision " << d.precision << "\n"
                << "recall    " << d.recall << "\n"
                << "f1        " << d.f1 << "\n";
      if (!eval_out.empty()) write_text_file(eval_out, ecfm::deltas_to_csv(d));
    }
  });

  // report ----------------------------------------------------------------
  auto* report_cmd =
      app.add_subcommand("report", "Emit metrics and plot-data files");
  std::string report_run, report_sweep, report_dir;
  std::string report_format = "json";
  report_cmd->add_option("--run", report_run, "RunReport JSON to export")
      ->check(CLI::ExistingFile);
  report_cmd->add_option("--sweep", report_sweep, "Sweep JSON to export")
      ->check(CLI::ExistingFile);
  report_cmd->add_option("--out-dir", report_dir, "Output directory")
      ->required();
  report_cmd->add_option("--format", report_format, "Stdout format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  report_cmd->callback([&] {
    if (report_run.empty() && report_sweep.empty()) {
      throw std::runtime_error("report: need --run and/or --sweep");
    }
    fs::create_directories(report_dir);
    const fs::path dir(report_dir);
    if (!report_run.empty()) {
      const ecfm::RunReport report = ecfm::RunReport::load(report_run);
      write_text_file(dir / "report.json", report.to_json().dump(2) + "\n");
      write_text_file(dir / "metrics.csv", ecfm::metrics_to_csv(report.metrics));
      write_text_file(dir / "positive_fraction.csv",
                      ecfm::positive_fraction_csv(report.epoch_logs));
      if (report_format == "json") {
        std::cout << report.to_json().dump(2) << "\n";
      } else {
        std::cout << ecfm::metrics_to_csv(report.metrics);
      }
    }
    if (!report_sweep.empty()) {
      std::ifstream in(report_sweep);
      ojson j;
      in >> j;
      std::vector<ecfm::SweepRow> rows;
      for (const auto& rj : j.at("rows")) {
        ecfm::SweepRow row;
        row.alpha = rj.at("alpha").get<double>();
        row.mean.accuracy = rj.at("accuracy").get<double>();
        row.mean.auc_roc = rj.at("auc_roc").get<double>();
        row.mean.precision = rj.at("precision").get<double>();
        row.mean.recall = rj.at("recall").get<double>();
        row.mean.f1 = rj.at("f1").get<double>();
        rows.push_back(row);
      }
      write_text_file(dir / "alpha_metrics.csv", ecfm::sweep_to_csv(rows));
      if (report_format == "csv" && report_run.empty()) {
        std::cout << ecfm::sweep_to_csv(rows);
      }
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
