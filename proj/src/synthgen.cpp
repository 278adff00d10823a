#include "ecfm/synthgen.hpp"

#include <stdexcept>
#include <unordered_map>

#include "ecfm/rng.hpp"

namespace ecfm {

void SynthConfig::validate() const {
  if (n_events < 1) throw std::invalid_argument("n_events must be >= 1");
  if (news_per_event < 1) {
    throw std::invalid_argument("news_per_event must be >= 1");
  }
  if (!(labeled_frac >= 0.0 && labeled_frac <= 1.0)) {
    throw std::invalid_argument("labeled_frac must lie in [0,1]");
  }
  if (!(purity >= 0.5 && purity <= 1.0)) {
    throw std::invalid_argument("purity must lie in [0.5,1]");
  }
  if (!(class_balance > 0.0 && class_balance < 1.0)) {
    throw std::invalid_argument("class_balance must lie in (0,1)");
  }
  if (shared_tokens < 1 || class_tokens < 1 || tokens_per_news < 1) {
    throw std::invalid_argument("vocabulary sizes must be >= 1");
  }
}

namespace {

// Probability a token is drawn from the class's signal vocabulary rather
// than the shared one.
constexpr double kSignalProb = 0.4;

std::string padded_number(std::size_t value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

}  // namespace

SynthOutput generate(const SynthConfig& config) {
  config.validate();
  rng::Engine eng(config.seed);

  const std::size_t total = static_cast<std::size_t>(config.n_events) *
                            static_cast<std::size_t>(config.news_per_event);
  const int id_width = static_cast<int>(std::to_string(total).size());

  SynthOutput out;
  std::vector<NewsItem> items;
  items.reserve(total);

  for (int e = 0; e < config.n_events; ++e) {
    const Label event_label =
        rng::bernoulli(eng, config.class_balance) ? Label::Real : Label::Fake;
    out.event_class[e] = event_label;
    for (int m = 0; m < config.news_per_event; ++m) {
      const Label news_label =
          rng::bernoulli(eng, config.purity)
              ? event_label
              : (event_label == Label::Real ? Label::Fake : Label::Real);

      std::string text;
      for (int tok = 0; tok < config.tokens_per_news; ++tok) {
        if (!text.empty()) text += ' ';
        if (rng::bernoulli(eng, kSignalProb)) {
          const std::size_t pick =
              rng::uniform_below(eng, static_cast<std::uint64_t>(config.class_tokens));
          text += (news_label == Label::Real ? "realsig" : "fakesig") +
                  std::to_string(pick);
        } else {
          const std::size_t pick =
              rng::uniform_below(eng, static_cast<std::uint64_t>(config.shared_tokens));
          text += "w" + std::to_string(pick);
        }
      }

      NewsItem item;
      item.id = "n" + padded_number(items.size(), id_width);
      item.text = std::move(text);
      item.event_id = e;
      item.split = Split::Unlabeled;
      items.push_back(std::move(item));
      out.true_class[items.back().id] = news_label;
    }
  }

  // Seed-chosen labeled subset, split 8:2 into train and test.
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng::shuffle(order, eng);
  const std::size_t n_labeled = static_cast<std::size_t>(
      config.labeled_frac * static_cast<double>(items.size()) + 1e-9);

  std::vector<NewsItem> labeled;
  for (std::size_t i = 0; i < n_labeled; ++i) {
    NewsItem& item = items[order[i]];
    item.label = out.true_class.at(item.id);
    labeled.push_back(item);
  }
  const auto [train, test] = split_labeled(labeled, 0.8, eng());
  std::unordered_map<std::string, Split> split_of;
  for (const NewsItem& item : train) split_of[item.id] = Split::Train;
  for (const NewsItem& item : test) split_of[item.id] = Split::Test;
  for (NewsItem& item : items) {
    auto it = split_of.find(item.id);
    if (it != split_of.end()) item.split = it->second;
  }

  out.dataset = Dataset::from_items(std::move(items));
  return out;
}

}  // namespace ecfm
