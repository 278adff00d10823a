#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ecfm/corpus.hpp"
#include "ecfm/rng.hpp"

namespace ecfm {

// Lowercased tokens split on whitespace and ASCII punctuation, order
// preserved; bytes above 0x7f pass through untouched.
std::vector<std::string> tokenize(std::string_view text);

// Token index table. Index 0 is reserved for the unknown token; known tokens
// occupy contiguous indices from 1.
class Vocabulary {
 public:
  static constexpr int kUnknown = 0;

  Vocabulary() = default;
  explicit Vocabulary(int embed_dim) : embed_dim_(embed_dim) {}

  int add(const std::string& token);
  int lookup(const std::string& token) const;
  std::vector<int> lookup_all(const std::vector<std::string>& tokens) const;

  // Number of embedding rows, unknown slot included.
  int rows() const { return static_cast<int>(ordered_.size()) + 1; }
  int embed_dim() const { return embed_dim_; }
  const std::vector<std::string>& tokens() const { return ordered_; }

 private:
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> ordered_;  // ordered_[i] has index i + 1
  int embed_dim_ = 60;
};

struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}
  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
  double* row(int r) { return a.data() + static_cast<std::size_t>(r) * cols; }
  const double* row(int r) const { return a.data() + static_cast<std::size_t>(r) * cols; }
  void zero() { std::fill(a.begin(), a.end(), 0.0); }
};

struct TextCnnConfig {
  int embed_dim = 60;
  std::vector<int> window_sizes = {2, 3, 4, 5};
  int filters_per_size = 10;
  // Output widths of the classifier head; the last entry is the 2-way
  // softmax. The first layer consumes the pooled feature vector.
  std::vector<int> head_dims = {60, 50, 10, 2};

  int feature_dim() const {
    return static_cast<int>(window_sizes.size()) * filters_per_size;
  }
  int max_window() const;
};

struct ConvBank {
  int window = 0;
  Matrix weights;             // filters x (window * embed_dim)
  std::vector<double> bias;   // filters
};

struct DenseLayer {
  Matrix w;                   // out x in
  std::vector<double> b;      // out
};

// Softmax class slots: p_theta is the probability of the Real class.
inline constexpr int kFakeClass = 0;
inline constexpr int kRealClass = 1;

struct TextCnnModel {
  TextCnnConfig cfg;
  Matrix embeddings;          // vocab rows x embed_dim
  std::vector<ConvBank> banks;
  std::vector<DenseLayer> head;

  // Embeddings uniform in [-0.1, 0.1]; filter and head weights fan-in
  // scaled; biases zero. Draw order is fixed for reproducibility.
  static TextCnnModel init(const TextCnnConfig& cfg, int vocab_rows,
                           rng::Engine& eng);
};

// Gradient buffers share the model's shapes.
TextCnnModel zeros_like(const TextCnnModel& model);

// Pointers to every scalar parameter, in a fixed order (embeddings, banks,
// head). Used by gradient checks and serialization.
std::vector<double*> parameter_pointers(TextCnnModel& model);

// Convolution + ReLU + max-pool feature vector (length m * h). Sequences
// shorter than the largest window are right-padded with the unknown token.
std::vector<double> forward_features(const std::vector<int>& token_ids,
                                     const TextCnnModel& model);

// Forward pass through features and head; returns P(Real) in (0,1).
double cnn_probability(const std::vector<int>& token_ids,
                       const TextCnnModel& model);

// Raw softmax outputs, indexed by kFakeClass / kRealClass.
std::array<double, 2> cnn_class_probabilities(const std::vector<int>& token_ids,
                                              const TextCnnModel& model);

// Cross-entropy of one example (y: 1 Real, 0 Fake).
double cnn_example_loss(const std::vector<int>& token_ids, int y,
                        const TextCnnModel& model);

// Exact backpropagation: adds weight * dLoss/dParam into grad. Max-pool
// routes to the first argmax; ReLU uses subgradient 0 at 0. Returns the
// example loss.
double cnn_accumulate_gradient(const std::vector<int>& token_ids, int y,
                               double weight, const TextCnnModel& model,
                               TextCnnModel& grad,
                               std::vector<int>* touched_rows = nullptr);

// Hashed bag-of-ngrams logistic model.
using SparseFeatures = std::vector<std::pair<std::uint32_t, double>>;

struct LinearModel {
  int dim = 1 << 18;
  std::vector<double> weights;
  double bias = 0.0;

  static LinearModel zeros(int dim = 1 << 18);
};

// Unigram + bigram counts hashed into [0, dim), sorted by index.
SparseFeatures hash_features(const std::vector<std::string>& tokens, int dim);

double sigmoid(double z);
double linear_probability(const LinearModel& model, const SparseFeatures& x);

// Clamped binary cross entropy -[y ln p + (1-y) ln(1-p)].
double bce_loss(double p, int y);

// lambda_l * labeled_mean + lambda_s * pseudo_mean; the mean over an empty
// set is zero.
double combined_loss(double labeled_mean, double pseudo_mean, double lambda_l,
                     double lambda_s);

enum class CharacterizerKind { TextCnn, Linear };
const char* to_string(CharacterizerKind kind);
CharacterizerKind characterizer_kind_from_string(const std::string& s);

// Tokenized text in the representation the active model consumes.
struct PreparedText {
  std::vector<int> token_ids;  // TextCnn path
  SparseFeatures features;     // Linear path
  bool empty = false;
};

// Plain-text word vectors: header "count dim", then "token v1 ... vd" lines.
struct WordVectors {
  int dim = 0;
  std::vector<std::string> tokens;
  Matrix vectors;
};
WordVectors load_word_vectors(const std::filesystem::path& path);

// Trainable scorer producing the descriptive news credibility. Thread-safe
// for concurrent scoring; training mutates and is single-threaded.
class Characterizer {
 public:
  struct Example {
    const PreparedText* text = nullptr;
    int y = 0;  // 1 Real, 0 Fake
  };

  Characterizer() = default;
  static Characterizer create(CharacterizerKind kind, Vocabulary vocab,
                              const TextCnnConfig& cfg, rng::Engine& eng);

  CharacterizerKind kind() const { return kind_; }
  const Vocabulary& vocab() const { return vocab_; }
  TextCnnModel& cnn() { return cnn_; }
  const TextCnnModel& cnn() const { return cnn_; }
  LinearModel& linear() { return linear_; }
  const LinearModel& linear() const { return linear_; }

  PreparedText prepare(const std::string& text) const;
  double score(const PreparedText& text) const;

  // Tokenizes and scores one news item; an empty token list yields the
  // neutral 0.5 with a warning on stderr.
  double predict_credibility(const NewsItem& news) const;

  // Mean BCE over the set (0 when empty).
  double mean_loss(std::span<const Example> set) const;

  // Mini-batch SGD on the combined loss for `epochs` passes. Throws on a
  // non-finite batch loss (learning-rate blow-up).
  void train_update(std::span<const Example> labeled,
                    std::span<const Example> pseudo, double lambda_l,
                    double lambda_s, double learning_rate, int batch_size,
                    int epochs, rng::Engine& eng);

  // Overwrites embedding rows of vocabulary tokens present in `wv`.
  // Dimension must match; returns the number of rows applied.
  int apply_word_vectors(const WordVectors& wv);

  nlohmann::ordered_json to_json() const;
  static Characterizer from_json(const nlohmann::ordered_json& j);
  void save(const std::filesystem::path& path) const;
  static Characterizer load(const std::filesystem::path& path);

 private:
  CharacterizerKind kind_ = CharacterizerKind::TextCnn;
  Vocabulary vocab_;
  TextCnnModel cnn_;
  LinearModel linear_;
};

}  // namespace ecfm
