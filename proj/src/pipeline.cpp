#include "ecfm/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ecfm/annotator.hpp"
#include "ecfm/eval.hpp"
#include "ecfm/selector.hpp"

namespace ecfm {

using ojson = nlohmann::ordered_json;

namespace {

// FNV-1a over the (event id, corrected credibility) pairs in event order.
std::string credibility_digest(const std::map<std::int64_t, double>& creds) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  for (const auto& [event_id, c] : creds) {
    mix(&event_id, sizeof(event_id));
    std::uint64_t bits;
    std::memcpy(&bits, &c, sizeof(bits));
    mix(&bits, sizeof(bits));
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

double label01(Label label) { return label == Label::Real ? 1.0 : 0.0; }

}  // namespace

PipelineRun::PipelineRun(PipelineConfig config, Dataset dataset)
    : cfg_(std::move(config)), data_(std::move(dataset)) {
  cfg_.validate();

  labeled_idx_ = data_.indices_of(Split::Train);
  unlabeled_idx_ = data_.indices_of(Split::Unlabeled);
  test_idx_ = data_.indices_of(Split::Test);

  if (labeled_idx_.empty()) {
    throw std::runtime_error("pipeline: no labeled training news");
  }
  bool has_real = false, has_fake = false;
  for (std::size_t i : labeled_idx_) {
    (data_.at(i).label == Label::Real ? has_real : has_fake) = true;
  }
  if (!has_real || !has_fake) {
    throw std::runtime_error(
        "pipeline: labeled training set must contain both classes "
        "(threshold search degenerates)");
  }
  for (const NewsItem& item : data_.items()) {
    if (!item.event_id) {
      throw std::runtime_error("pipeline: news \"" + item.id +
                               "\" has no event id; run `cluster` first");
    }
  }

  eng_.seed(cfg_.seed);

  // Vocabulary from training-time texts only; test tokens stay unknown.
  Vocabulary vocab(60);
  for (std::size_t i : labeled_idx_) {
    for (const std::string& tok : tokenize(data_.at(i).text)) vocab.add(tok);
  }
  for (std::size_t i : unlabeled_idx_) {
    for (const std::string& tok : tokenize(data_.at(i).text)) vocab.add(tok);
  }
  model_ = Characterizer::create(cfg_.characterizer, std::move(vocab),
                                 TextCnnConfig{}, eng_);
  prepare_texts();
}

void PipelineRun::prepare_texts() {
  prepared_.clear();
  prepared_.reserve(data_.size());
  for (const NewsItem& item : data_.items()) {
    PreparedText p = model_.prepare(item.text);
    if (p.empty) {
      std::fprintf(stderr,
                   "warning: news \"%s\" has an empty token list; scoring "
                   "neutral 0.5\n",
                   item.id.c_str());
    }
    prepared_.push_back(std::move(p));
  }
}

std::vector<double> PipelineRun::score_all() const {
  std::vector<double> scores(data_.size(), 0.5);
  for (std::size_t i : labeled_idx_) scores[i] = model_.score(prepared_[i]);
  for (std::size_t i : unlabeled_idx_) scores[i] = model_.score(prepared_[i]);
  return scores;
}

std::map<std::int64_t, double> PipelineRun::observed_event_credibility(
    const std::vector<double>& scores) const {
  // Known credibility per member: labeled news contribute their label value,
  // unlabeled news their current descriptive credibility. Test items never
  // participate.
  std::map<std::int64_t, double> observations;
  for (const auto& [event_id, member_ids] : data_.event_index()) {
    std::vector<double> creds;
    creds.reserve(member_ids.size());
    for (const std::string& id : member_ids) {
      const NewsItem* item = data_.find(id);
      if (item->split == Split::Test) continue;
      if (item->split == Split::Train) {
        creds.push_back(label01(*item->label));
      } else {
        creds.push_back(scores[item - data_.items().data()]);
      }
    }
    if (!creds.empty()) {
      observations[event_id] = event_credibility(creds);
    }
  }
  return observations;
}

void PipelineRun::step() {
  if (done()) throw std::logic_error("pipeline: all updates already run");
  const int t = t_done_ + 1;

  // (a) descriptive credibility for every training-time news
  const std::vector<double> scores = score_all();

  // (b) observed event credibility, Kalman-corrected in ECFM mode
  const std::map<std::int64_t, double> observations =
      observed_event_credibility(scores);
  std::map<std::int64_t, double> event_cred;
  if (cfg_.mode == Mode::Ecfm) {
    update_all(kalman_states_, observations, cfg_.kalman);
    for (const auto& [event_id, state] : kalman_states_) {
      event_cred[event_id] = state.c_hat;
    }
  }

  // (c) fuse into the optimized credibility Ce
  std::map<std::string, double> news_cred;
  std::map<std::string, std::int64_t> event_of_news;
  for (std::size_t i : labeled_idx_) {
    news_cred[data_.at(i).id] = scores[i];
    event_of_news[data_.at(i).id] = *data_.at(i).event_id;
  }
  for (std::size_t i : unlabeled_idx_) {
    news_cred[data_.at(i).id] = scores[i];
    event_of_news[data_.at(i).id] = *data_.at(i).event_id;
  }
  const CredibilityView view = build_credibility_view(
      std::move(news_cred), std::move(event_cred), cfg_.alpha, event_of_news,
      cfg_.mode == Mode::Ecfm);

  // (d) threshold on labeled Ce, pseudo labels for X^u
  std::vector<LabeledCredibility> labeled_ce;
  labeled_ce.reserve(labeled_idx_.size());
  for (std::size_t i : labeled_idx_) {
    labeled_ce.push_back({view.optimized.at(data_.at(i).id), *data_.at(i).label});
  }
  const ThresholdModel threshold = find_threshold(std::move(labeled_ce));

  std::vector<std::string> unlabeled_ids;
  for (std::size_t i : unlabeled_idx_) {
    unlabeled_ids.push_back(data_.at(i).id);
  }
  const std::map<std::string, Label> pseudo_labels =
      assign_pseudo_labels(unlabeled_ids, view.optimized, threshold.dt);

  // (e) entropy-scheduled high-quality sample selection
  std::vector<EntropyScore> entropy_scores;
  entropy_scores.reserve(unlabeled_idx_.size());
  for (std::size_t i : unlabeled_idx_) {
    const std::string& id = data_.at(i).id;
    entropy_scores.push_back(
        make_score(id, scores[i], pseudo_labels.at(id), cfg_.selector_order));
  }
  std::vector<EntropyScore> selected;
  if (!entropy_scores.empty()) {
    selected = select_top(std::move(entropy_scores), t, cfg_.selector_order);
  }

  // (f) one combined-loss training pass over X^l and X^s
  std::vector<Characterizer::Example> labeled_examples;
  labeled_examples.reserve(labeled_idx_.size());
  for (std::size_t i : labeled_idx_) {
    labeled_examples.push_back(
        {&prepared_[i], data_.at(i).label == Label::Real ? 1 : 0});
  }
  std::vector<Characterizer::Example> pseudo_examples;
  pseudo_examples.reserve(selected.size());
  for (const EntropyScore& s : selected) {
    const NewsItem* item = data_.find(s.id);
    pseudo_examples.push_back(
        {&prepared_[item - data_.items().data()],
         s.pseudo_label == Label::Real ? 1 : 0});
  }

  // Losses logged at scoring time, before the parameter update.
  double labeled_loss = 0.0;
  for (std::size_t i : labeled_idx_) {
    labeled_loss += bce_loss(scores[i], data_.at(i).label == Label::Real);
  }
  labeled_loss /= static_cast<double>(labeled_idx_.size());
  double pseudo_loss = 0.0;
  for (const EntropyScore& s : selected) {
    const NewsItem* item = data_.find(s.id);
    pseudo_loss += bce_loss(scores[item - data_.items().data()],
                            s.pseudo_label == Label::Real);
  }
  if (!selected.empty()) pseudo_loss /= static_cast<double>(selected.size());

  model_.train_update(labeled_examples, pseudo_examples, cfg_.lambda_l,
                      cfg_.lambda_s, cfg_.learning_rate, cfg_.batch_size,
                      /*epochs=*/1, eng_);

  EpochLog log;
  log.t = t;
  std::size_t pseudo_real = 0;
  for (const auto& [id, label] : pseudo_labels) {
    if (label == Label::Real) ++pseudo_real;
  }
  log.positive_fraction =
      pseudo_labels.empty()
          ? 0.0
          : static_cast<double>(pseudo_real) / pseudo_labels.size();
  log.dt = threshold.dt;
  log.selected_count = static_cast<int>(selected.size());
  log.labeled_loss = labeled_loss;
  log.pseudo_loss = pseudo_loss;
  log.event_cred_digest = credibility_digest(view.event_credibility);
  logs_.push_back(log);
  t_done_ = t;
  if (on_update) on_update(log);
}

RunReport PipelineRun::finish() const {
  if (logs_.empty()) {
    throw std::logic_error("pipeline: finish() before any update");
  }
  RunReport report;
  report.config = cfg_;
  report.epoch_logs = logs_;

  if (test_idx_.empty()) {
    report.metrics.degenerate_auc = true;
    report.metrics.auc_roc = 0.5;
    return report;
  }

  const double dt = logs_.back().dt;
  std::vector<Label> predictions, truth;
  std::vector<double> fakeness;
  for (std::size_t i : test_idx_) {
    const NewsItem& item = data_.at(i);
    const double p = model_.score(prepared_[i]);
    double ce = p;
    if (cfg_.mode == Mode::Ecfm) {
      auto it = kalman_states_.find(*item.event_id);
      const double ec =
          it == kalman_states_.end() ? kNeutralCredibility : it->second.c_hat;
      ce = optimized_credibility(p, ec, cfg_.alpha);
    }
    predictions.push_back(ce >= dt ? Label::Real : Label::Fake);
    fakeness.push_back(1.0 - ce);
    truth.push_back(*item.label);
  }

  const ConfusionMetrics cm = confusion_metrics(predictions, truth);
  report.metrics.accuracy = cm.accuracy;
  report.metrics.precision = cm.precision;
  report.metrics.recall = cm.recall;
  report.metrics.f1 = cm.f1;
  report.metrics.zero_denominator_precision = cm.zero_denominator_precision;
  report.metrics.zero_denominator_recall = cm.zero_denominator_recall;
  const bool single_class =
      std::all_of(truth.begin(), truth.end(),
                  [&truth](Label l) { return l == truth.front(); });
  if (single_class) {
    report.metrics.degenerate_auc = true;
    report.metrics.auc_roc = 0.5;
  } else {
    report.metrics.auc_roc = auc_roc(fakeness, truth);
  }
  return report;
}

void PipelineRun::checkpoint(const std::filesystem::path& path) const {
  ojson j;
  j["version"] = 1;
  j["config"] = cfg_.to_json();
  j["t_done"] = t_done_;
  {
    std::ostringstream os;
    os << eng_;
    j["rng"] = os.str();
  }
  j["model"] = model_.to_json();
  ojson states = ojson::array();
  for (const auto& [event_id, s] : kalman_states_) {
    states.push_back(ojson{{"event_id", s.event_id},
                           {"c_hat", s.c_hat},
                           {"p_hat", s.p_hat},
                           {"t", s.t}});
  }
  j["kalman_states"] = std::move(states);
  ojson logs = ojson::array();
  for (const EpochLog& log : logs_) logs.push_back(epoch_log_to_json(log));
  j["epoch_logs"] = std::move(logs);
  ojson items = ojson::array();
  for (const NewsItem& item : data_.items()) {
    ojson obj;
    obj["id"] = item.id;
    obj["text"] = item.text;
    if (item.label) obj["label"] = to_string(*item.label);
    if (item.event_id) obj["event_id"] = *item.event_id;
    obj["split"] = to_string(item.split);
    items.push_back(std::move(obj));
  }
  j["dataset"] = std::move(items);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump() << '\n';
}

PipelineRun PipelineRun::resume(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  ojson j;
  try {
    in >> j;
  } catch (const ojson::parse_error& e) {
    throw std::runtime_error(path.string() + ": corrupt checkpoint: " +
                             e.what());
  }
  if (!j.contains("version") || j.at("version").get<int>() != 1) {
    throw std::runtime_error(path.string() +
                             ": unsupported checkpoint version");
  }

  PipelineRun run;
  run.cfg_ = PipelineConfig::from_json(j.at("config"));

  std::vector<NewsItem> items;
  for (const auto& obj : j.at("dataset")) {
    NewsItem item;
    item.id = obj.at("id").get<std::string>();
    item.text = obj.at("text").get<std::string>();
    if (obj.contains("label")) {
      item.label = obj.at("label").get<std::string>() == "real" ? Label::Real
                                                                : Label::Fake;
    }
    if (obj.contains("event_id")) {
      item.event_id = obj.at("event_id").get<std::int64_t>();
    }
    const std::string split = obj.at("split").get<std::string>();
    item.split = split == "train"
                     ? Split::Train
                     : (split == "test" ? Split::Test : Split::Unlabeled);
    items.push_back(std::move(item));
  }
  run.data_ = Dataset::from_items(std::move(items));
  run.labeled_idx_ = run.data_.indices_of(Split::Train);
  run.unlabeled_idx_ = run.data_.indices_of(Split::Unlabeled);
  run.test_idx_ = run.data_.indices_of(Split::Test);

  run.t_done_ = j.at("t_done").get<int>();
  {
    std::istringstream is(j.at("rng").get<std::string>());
    is >> run.eng_;
    if (!is) throw std::runtime_error("corrupt RNG state in checkpoint");
  }
  run.model_ = Characterizer::from_json(j.at("model"));
  for (const auto& sj : j.at("kalman_states")) {
    EventCredState s;
    s.event_id = sj.at("event_id").get<std::int64_t>();
    s.c_hat = sj.at("c_hat").get<double>();
    s.p_hat = sj.at("p_hat").get<double>();
    s.t = sj.at("t").get<std::int64_t>();
    run.kalman_states_[s.event_id] = s;
  }
  for (const auto& lj : j.at("epoch_logs")) {
    run.logs_.push_back(epoch_log_from_json(lj));
  }
  run.prepare_texts();
  return run;
}

RunReport run(const PipelineConfig& config, const Dataset& dataset,
              const std::function<void(const EpochLog&)>& on_update) {
  const auto start = std::chrono::steady_clock::now();
  PipelineRun pr(config, dataset);
  pr.on_update = on_update;
  while (!pr.done()) pr.step();
  RunReport report = pr.finish();
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace ecfm
