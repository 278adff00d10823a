#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ecfm/corpus.hpp"
#include "ecfm/rng.hpp"

namespace testutil {

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("ecfm_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_lines(const std::filesystem::path& path,
                        const std::vector<std::string>& lines) {
  std::ofstream out(path);
  for (const std::string& line : lines) out << line << '\n';
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

// Random dataset satisfying every corpus invariant.
inline std::vector<ecfm::NewsItem> random_items(ecfm::rng::Engine& eng,
                                                std::size_t n) {
  static const char* kWords[] = {"alpha", "beta",  "gamma", "delta",
                                 "omega", "news",  "event", "claim",
                                 "true",  "hoax",  "viral", "süß"};
  std::vector<ecfm::NewsItem> items;
  for (std::size_t i = 0; i < n; ++i) {
    ecfm::NewsItem item;
    item.id = "id" + std::to_string(i);
    const std::size_t words = 1 + ecfm::rng::uniform_below(eng, 5);
    for (std::size_t w = 0; w < words; ++w) {
      if (w) item.text += ' ';
      item.text += kWords[ecfm::rng::uniform_below(eng, 12)];
    }
    if (ecfm::rng::bernoulli(eng, 0.6)) {
      item.label = ecfm::rng::bernoulli(eng, 0.5) ? ecfm::Label::Real
                                                  : ecfm::Label::Fake;
      const auto pick = ecfm::rng::uniform_below(eng, 3);
      item.split = pick == 0   ? ecfm::Split::Train
                   : pick == 1 ? ecfm::Split::Test
                               : ecfm::Split::Unlabeled;
    } else {
      item.split = ecfm::Split::Unlabeled;
    }
    if (ecfm::rng::bernoulli(eng, 0.5)) {
      item.event_id = static_cast<std::int64_t>(ecfm::rng::uniform_below(eng, 6));
    }
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace testutil
