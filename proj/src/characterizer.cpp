#include "ecfm/characterizer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ecfm {

using ojson = nlohmann::ordered_json;

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (c < 0x80 && (std::isspace(c) || std::ispunct(c))) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
      continue;
    }
    current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c))
                               : static_cast<char>(c));
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

int Vocabulary::add(const std::string& token) {
  auto it = index_.find(token);
  if (it != index_.end()) return it->second;
  ordered_.push_back(token);
  const int idx = static_cast<int>(ordered_.size());  // 0 stays reserved
  index_.emplace(token, idx);
  return idx;
}

int Vocabulary::lookup(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnknown : it->second;
}

std::vector<int> Vocabulary::lookup_all(
    const std::vector<std::string>& tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const std::string& t : tokens) ids.push_back(lookup(t));
  return ids;
}

int TextCnnConfig::max_window() const {
  return *std::max_element(window_sizes.begin(), window_sizes.end());
}

TextCnnModel TextCnnModel::init(const TextCnnConfig& cfg, int vocab_rows,
                                rng::Engine& eng) {
  if (cfg.head_dims.empty() || cfg.head_dims.back() != 2) {
    throw std::invalid_argument("head must end in a 2-way softmax");
  }
  TextCnnModel m;
  m.cfg = cfg;
  m.embeddings = Matrix(vocab_rows, cfg.embed_dim);
  for (double& v : m.embeddings.a) v = rng::uniform_range(eng, -0.1, 0.1);

  for (int k : cfg.window_sizes) {
    ConvBank bank;
    bank.window = k;
    bank.weights = Matrix(cfg.filters_per_size, k * cfg.embed_dim);
    const double a = std::sqrt(6.0 / (k * cfg.embed_dim));
    for (double& v : bank.weights.a) v = rng::uniform_range(eng, -a, a);
    bank.bias.assign(cfg.filters_per_size, 0.0);
    m.banks.push_back(std::move(bank));
  }

  int fan_in = cfg.feature_dim();
  for (int out : cfg.head_dims) {
    DenseLayer layer;
    layer.w = Matrix(out, fan_in);
    const double a = std::sqrt(6.0 / fan_in);
    for (double& v : layer.w.a) v = rng::uniform_range(eng, -a, a);
    layer.b.assign(out, 0.0);
    m.head.push_back(std::move(layer));
    fan_in = out;
  }
  return m;
}

TextCnnModel zeros_like(const TextCnnModel& model) {
  TextCnnModel g;
  g.cfg = model.cfg;
  g.embeddings = Matrix(model.embeddings.rows, model.embeddings.cols);
  for (const ConvBank& bank : model.banks) {
    ConvBank zb;
    zb.window = bank.window;
    zb.weights = Matrix(bank.weights.rows, bank.weights.cols);
    zb.bias.assign(bank.bias.size(), 0.0);
    g.banks.push_back(std::move(zb));
  }
  for (const DenseLayer& layer : model.head) {
    DenseLayer zl;
    zl.w = Matrix(layer.w.rows, layer.w.cols);
    zl.b.assign(layer.b.size(), 0.0);
    g.head.push_back(std::move(zl));
  }
  return g;
}

std::vector<double*> parameter_pointers(TextCnnModel& model) {
  std::vector<double*> ptrs;
  for (double& v : model.embeddings.a) ptrs.push_back(&v);
  for (ConvBank& bank : model.banks) {
    for (double& v : bank.weights.a) ptrs.push_back(&v);
    for (double& v : bank.bias) ptrs.push_back(&v);
  }
  for (DenseLayer& layer : model.head) {
    for (double& v : layer.w.a) ptrs.push_back(&v);
    for (double& v : layer.b) ptrs.push_back(&v);
  }
  return ptrs;
}

namespace {

constexpr double kProbClamp = 1e-12;

double clamp_prob(double p) {
  if (std::isnan(p)) return p;  // let blow-ups reach the loss guard
  return std::min(1.0 - kProbClamp, std::max(kProbClamp, p));
}

std::vector<int> pad_ids(const std::vector<int>& ids, int min_len) {
  std::vector<int> padded = ids;
  while (static_cast<int>(padded.size()) < min_len) {
    padded.push_back(Vocabulary::kUnknown);
  }
  return padded;
}

// Everything the backward pass needs from one forward evaluation.
struct CnnTrace {
  std::vector<int> padded;
  std::vector<double> features;       // post ReLU + max-pool
  std::vector<int> argmax_pos;        // per pooled feature
  std::vector<std::vector<double>> head_in;  // input to each head layer
  double probs[2] = {0.0, 0.0};
};

void conv_forward(const std::vector<int>& padded, const TextCnnModel& model,
                  std::vector<double>& features, std::vector<int>& argmax_pos,
                  std::vector<double>& window_buf) {
  const int d = model.cfg.embed_dim;
  const int n = static_cast<int>(padded.size());
  features.assign(model.cfg.feature_dim(), 0.0);
  argmax_pos.assign(model.cfg.feature_dim(), 0);

  int base = 0;
  for (const ConvBank& bank : model.banks) {
    const int k = bank.window;
    const int positions = n - k + 1;
    const int width = k * d;
    const int h = bank.weights.rows;
    window_buf.resize(width);

    std::vector<double> best(h, -std::numeric_limits<double>::infinity());
    std::vector<int> best_pos(h, 0);
    for (int pos = 0; pos < positions; ++pos) {
      for (int j = 0; j < k; ++j) {
        const double* row = model.embeddings.row(padded[pos + j]);
        std::copy(row, row + d, window_buf.data() + j * d);
      }
      for (int f = 0; f < h; ++f) {
        const double* w = bank.weights.row(f);
        double s = bank.bias[f];
        for (int c = 0; c < width; ++c) s += w[c] * window_buf[c];
        if (s > best[f]) {
          best[f] = s;
          best_pos[f] = pos;
        }
      }
    }
    for (int f = 0; f < h; ++f) {
      features[base + f] = std::max(0.0, best[f]);
      argmax_pos[base + f] = best_pos[f];
    }
    base += h;
  }
}

void head_forward(const TextCnnModel& model, const std::vector<double>& features,
                  std::vector<std::vector<double>>& head_in, double probs[2]) {
  head_in.clear();
  std::vector<double> x = features;
  const std::size_t layers = model.head.size();
  for (std::size_t l = 0; l < layers; ++l) {
    const DenseLayer& layer = model.head[l];
    head_in.push_back(x);
    std::vector<double> z(layer.w.rows);
    for (int r = 0; r < layer.w.rows; ++r) {
      const double* w = layer.w.row(r);
      double s = layer.b[r];
      for (int c = 0; c < layer.w.cols; ++c) s += w[c] * x[c];
      z[r] = l + 1 < layers ? std::max(0.0, s) : s;
    }
    x = std::move(z);
  }
  const double m = std::max(x[0], x[1]);
  const double e0 = std::exp(x[0] - m);
  const double e1 = std::exp(x[1] - m);
  probs[kFakeClass] = e0 / (e0 + e1);
  probs[kRealClass] = e1 / (e0 + e1);
}

CnnTrace cnn_forward(const std::vector<int>& token_ids,
                     const TextCnnModel& model) {
  CnnTrace trace;
  trace.padded = pad_ids(token_ids, model.cfg.max_window());
  std::vector<double> window_buf;
  conv_forward(trace.padded, model, trace.features, trace.argmax_pos,
               window_buf);
  head_forward(model, trace.features, trace.head_in, trace.probs);
  return trace;
}

}  // namespace

std::vector<double> forward_features(const std::vector<int>& token_ids,
                                     const TextCnnModel& model) {
  std::vector<double> features;
  std::vector<int> argmax_pos;
  std::vector<double> window_buf;
  conv_forward(pad_ids(token_ids, model.cfg.max_window()), model, features,
               argmax_pos, window_buf);
  return features;
}

double cnn_probability(const std::vector<int>& token_ids,
                       const TextCnnModel& model) {
  return clamp_prob(cnn_forward(token_ids, model).probs[kRealClass]);
}

std::array<double, 2> cnn_class_probabilities(const std::vector<int>& token_ids,
                                              const TextCnnModel& model) {
  const CnnTrace trace = cnn_forward(token_ids, model);
  return {trace.probs[0], trace.probs[1]};
}

double cnn_example_loss(const std::vector<int>& token_ids, int y,
                        const TextCnnModel& model) {
  return bce_loss(cnn_probability(token_ids, model), y);
}

double cnn_accumulate_gradient(const std::vector<int>& token_ids, int y,
                               double weight, const TextCnnModel& model,
                               TextCnnModel& grad,
                               std::vector<int>* touched_rows) {
  const CnnTrace trace = cnn_forward(token_ids, model);
  const double loss = bce_loss(clamp_prob(trace.probs[kRealClass]), y);

  // Softmax + cross entropy: dL/dlogit = p - onehot(y).
  std::vector<double> delta(2);
  delta[kFakeClass] = weight * (trace.probs[kFakeClass] - (y == 0 ? 1.0 : 0.0));
  delta[kRealClass] = weight * (trace.probs[kRealClass] - (y == 1 ? 1.0 : 0.0));

  for (std::size_t l = model.head.size(); l-- > 0;) {
    const DenseLayer& layer = model.head[l];
    DenseLayer& glayer = grad.head[l];
    const std::vector<double>& x = trace.head_in[l];
    std::vector<double> next(layer.w.cols, 0.0);
    for (int r = 0; r < layer.w.rows; ++r) {
      const double dr = delta[r];
      if (dr == 0.0) continue;
      glayer.b[r] += dr;
      const double* w = layer.w.row(r);
      double* gw = glayer.w.row(r);
      for (int c = 0; c < layer.w.cols; ++c) {
        gw[c] += dr * x[c];
        next[c] += dr * w[c];
      }
    }
    if (l > 0) {
      // ReLU gate for the previous layer's output (x == 0 kills the path).
      for (int c = 0; c < layer.w.cols; ++c) {
        if (x[c] <= 0.0) next[c] = 0.0;
      }
    }
    delta = std::move(next);
  }

  const int d = model.cfg.embed_dim;
  int base = 0;
  for (std::size_t b = 0; b < model.banks.size(); ++b) {
    const ConvBank& bank = model.banks[b];
    ConvBank& gbank = grad.banks[b];
    const int k = bank.window;
    for (int f = 0; f < bank.weights.rows; ++f) {
      const double g = delta[base + f];
      // Pooled value 0 means every window was non-positive: subgradient 0.
      if (g == 0.0 || trace.features[base + f] <= 0.0) continue;
      const int pos = trace.argmax_pos[base + f];
      gbank.bias[f] += g;
      const double* w = bank.weights.row(f);
      double* gw = gbank.weights.row(f);
      for (int j = 0; j < k; ++j) {
        const int row_id = trace.padded[pos + j];
        const double* e = model.embeddings.row(row_id);
        double* ge = grad.embeddings.row(row_id);
        if (touched_rows) touched_rows->push_back(row_id);
        for (int c = 0; c < d; ++c) {
          gw[j * d + c] += g * e[c];
          ge[c] += g * w[j * d + c];
        }
      }
    }
    base += bank.weights.rows;
  }
  return loss;
}

LinearModel LinearModel::zeros(int dim) {
  LinearModel m;
  m.dim = dim;
  m.weights.assign(dim, 0.0);
  m.bias = 0.0;
  return m;
}

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

SparseFeatures hash_features(const std::vector<std::string>& tokens, int dim) {
  std::unordered_map<std::uint32_t, double> counts;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    counts[static_cast<std::uint32_t>(fnv1a(tokens[i]) % dim)] += 1.0;
    if (i + 1 < tokens.size()) {
      const std::uint64_t h = fnv1a(tokens[i + 1], fnv1a(tokens[i]) * 31 + 7);
      counts[static_cast<std::uint32_t>(h % dim)] += 1.0;
    }
  }
  SparseFeatures out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end());
  return out;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double linear_probability(const LinearModel& model, const SparseFeatures& x) {
  double z = model.bias;
  for (const auto& [idx, val] : x) z += model.weights[idx] * val;
  return clamp_prob(sigmoid(z));
}

double bce_loss(double p, int y) {
  const double q = clamp_prob(p);
  return -(y == 1 ? std::log(q) : std::log(1.0 - q));
}

double combined_loss(double labeled_mean, double pseudo_mean, double lambda_l,
                     double lambda_s) {
  return lambda_l * labeled_mean + lambda_s * pseudo_mean;
}

const char* to_string(CharacterizerKind kind) {
  return kind == CharacterizerKind::TextCnn ? "text_cnn" : "linear";
}

CharacterizerKind characterizer_kind_from_string(const std::string& s) {
  if (s == "text_cnn") return CharacterizerKind::TextCnn;
  if (s == "linear") return CharacterizerKind::Linear;
  throw std::invalid_argument("unknown characterizer kind \"" + s + "\"");
}

Characterizer Characterizer::create(CharacterizerKind kind, Vocabulary vocab,
                                    const TextCnnConfig& cfg,
                                    rng::Engine& eng) {
  Characterizer c;
  c.kind_ = kind;
  c.vocab_ = std::move(vocab);
  if (kind == CharacterizerKind::TextCnn) {
    TextCnnConfig actual = cfg;
    actual.embed_dim = c.vocab_.embed_dim();
    c.cnn_ = TextCnnModel::init(actual, c.vocab_.rows(), eng);
  } else {
    c.linear_ = LinearModel::zeros();
  }
  return c;
}

PreparedText Characterizer::prepare(const std::string& text) const {
  PreparedText p;
  const std::vector<std::string> tokens = tokenize(text);
  p.empty = tokens.empty();
  if (p.empty) return p;
  if (kind_ == CharacterizerKind::TextCnn) {
    p.token_ids = vocab_.lookup_all(tokens);
  } else {
    p.features = hash_features(tokens, linear_.dim);
  }
  return p;
}

double Characterizer::score(const PreparedText& text) const {
  if (text.empty) return 0.5;
  return kind_ == CharacterizerKind::TextCnn
             ? cnn_probability(text.token_ids, cnn_)
             : linear_probability(linear_, text.features);
}

double Characterizer::predict_credibility(const NewsItem& news) const {
  const PreparedText prepared = prepare(news.text);
  if (prepared.empty) {
    std::cerr << "warning: news \"" << news.id
              << "\" has an empty token list; scoring neutral 0.5\n";
    return 0.5;
  }
  return score(prepared);
}

double Characterizer::mean_loss(std::span<const Example> set) const {
  if (set.empty()) return 0.0;
  double sum = 0.0;
  for (const Example& ex : set) sum += bce_loss(score(*ex.text), ex.y);
  return sum / static_cast<double>(set.size());
}

void Characterizer::train_update(std::span<const Example> labeled,
                                 std::span<const Example> pseudo,
                                 double lambda_l, double lambda_s,
                                 double learning_rate, int batch_size,
                                 int epochs, rng::Engine& eng) {
  if (!(learning_rate >= 0.0)) {
    throw std::invalid_argument("learning rate must be >= 0");
  }
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");

  const std::size_t nl = labeled.size();
  const std::size_t total = nl + pseudo.size();
  if (total == 0) return;

  std::vector<std::uint32_t> order(total);
  std::iota(order.begin(), order.end(), 0);

  TextCnnModel cnn_grad;
  std::vector<int> touched_rows;
  std::vector<std::uint32_t> touched_feats;
  std::vector<double> linear_grad;
  double linear_bias_grad = 0.0;
  if (kind_ == CharacterizerKind::TextCnn) {
    cnn_grad = zeros_like(cnn_);
  } else {
    linear_grad.assign(linear_.dim, 0.0);
  }

  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng::shuffle(order, eng);
    for (std::size_t start = 0; start < total;
         start += static_cast<std::size_t>(batch_size)) {
      const std::size_t end =
          std::min(total, start + static_cast<std::size_t>(batch_size));

      std::size_t cl = 0, cs = 0;
      for (std::size_t i = start; i < end; ++i) {
        (order[i] < nl ? cl : cs) += 1;
      }

      double batch_labeled = 0.0, batch_pseudo = 0.0;
      for (std::size_t i = start; i < end; ++i) {
        const bool is_labeled = order[i] < nl;
        const Example& ex =
            is_labeled ? labeled[order[i]] : pseudo[order[i] - nl];
        const double weight =
            is_labeled ? lambda_l / static_cast<double>(cl)
                       : lambda_s / static_cast<double>(cs);
        double loss;
        if (ex.text->empty) {
          loss = bce_loss(0.5, ex.y);  // neutral score, no gradient
        } else if (kind_ == CharacterizerKind::TextCnn) {
          loss = cnn_accumulate_gradient(ex.text->token_ids, ex.y, weight,
                                         cnn_, cnn_grad, &touched_rows);
        } else {
          const double p = linear_probability(linear_, ex.text->features);
          loss = bce_loss(p, ex.y);
          const double dz = weight * (p - static_cast<double>(ex.y));
          for (const auto& [idx, val] : ex.text->features) {
            if (linear_grad[idx] == 0.0) touched_feats.push_back(idx);
            linear_grad[idx] += dz * val;
          }
          linear_bias_grad += dz;
        }
        (is_labeled ? batch_labeled : batch_pseudo) += loss;
      }

      const double batch_loss =
          combined_loss(cl ? batch_labeled / cl : 0.0,
                        cs ? batch_pseudo / cs : 0.0, lambda_l, lambda_s);
      if (!std::isfinite(batch_loss)) {
        throw std::runtime_error(
            "train_update: non-finite batch loss (learning rate blow-up?)");
      }

      if (kind_ == CharacterizerKind::TextCnn) {
        std::sort(touched_rows.begin(), touched_rows.end());
        touched_rows.erase(
            std::unique(touched_rows.begin(), touched_rows.end()),
            touched_rows.end());
        const int d = cnn_.cfg.embed_dim;
        for (int row : touched_rows) {
          double* e = cnn_.embeddings.row(row);
          double* ge = cnn_grad.embeddings.row(row);
          for (int c = 0; c < d; ++c) {
            e[c] -= learning_rate * ge[c];
            ge[c] = 0.0;
          }
        }
        touched_rows.clear();
        for (std::size_t b = 0; b < cnn_.banks.size(); ++b) {
          ConvBank& bank = cnn_.banks[b];
          ConvBank& gbank = cnn_grad.banks[b];
          for (std::size_t i = 0; i < bank.weights.a.size(); ++i) {
            bank.weights.a[i] -= learning_rate * gbank.weights.a[i];
            gbank.weights.a[i] = 0.0;
          }
          for (std::size_t i = 0; i < bank.bias.size(); ++i) {
            bank.bias[i] -= learning_rate * gbank.bias[i];
            gbank.bias[i] = 0.0;
          }
        }
        for (std::size_t l = 0; l < cnn_.head.size(); ++l) {
          DenseLayer& layer = cnn_.head[l];
          DenseLayer& glayer = cnn_grad.head[l];
          for (std::size_t i = 0; i < layer.w.a.size(); ++i) {
            layer.w.a[i] -= learning_rate * glayer.w.a[i];
            glayer.w.a[i] = 0.0;
          }
          for (std::size_t i = 0; i < layer.b.size(); ++i) {
            layer.b[i] -= learning_rate * glayer.b[i];
            glayer.b[i] = 0.0;
          }
        }
      } else {
        for (std::uint32_t idx : touched_feats) {
          linear_.weights[idx] -= learning_rate * linear_grad[idx];
          linear_grad[idx] = 0.0;
        }
        touched_feats.clear();
        linear_.bias -= learning_rate * linear_bias_grad;
        linear_bias_grad = 0.0;
      }
    }
  }
}

int Characterizer::apply_word_vectors(const WordVectors& wv) {
  if (kind_ != CharacterizerKind::TextCnn) {
    throw std::invalid_argument("word vectors apply to the text_cnn model");
  }
  if (wv.dim != cnn_.cfg.embed_dim) {
    throw std::invalid_argument(
        "word vector dimension " + std::to_string(wv.dim) +
        " does not match embedding dimension " +
        std::to_string(cnn_.cfg.embed_dim));
  }
  int applied = 0;
  for (std::size_t i = 0; i < wv.tokens.size(); ++i) {
    const int idx = vocab_.lookup(wv.tokens[i]);
    if (idx == Vocabulary::kUnknown) continue;
    const double* src = wv.vectors.row(static_cast<int>(i));
    std::copy(src, src + wv.dim, cnn_.embeddings.row(idx));
    ++applied;
  }
  return applied;
}

WordVectors load_word_vectors(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::size_t count = 0;
  int dim = 0;
  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error(path.string() + ": empty word-vector file");
  }
  {
    std::istringstream hs(header);
    if (!(hs >> count >> dim) || dim <= 0) {
      throw std::runtime_error(path.string() +
                               ": header must be \"count dim\"");
    }
  }
  WordVectors wv;
  wv.dim = dim;
  wv.vectors = Matrix(static_cast<int>(count), dim);
  std::string line;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) {
      throw std::runtime_error(path.string() + ": fewer vectors than header");
    }
    std::istringstream ls(line);
    std::string token;
    if (!(ls >> token)) {
      throw std::runtime_error(path.string() + ": blank vector line");
    }
    wv.tokens.push_back(token);
    double* row = wv.vectors.row(static_cast<int>(i));
    for (int c = 0; c < dim; ++c) {
      if (!(ls >> row[c])) {
        throw std::runtime_error(path.string() + ": short vector for \"" +
                                 token + "\"");
      }
    }
  }
  return wv;
}

namespace {

ojson matrix_to_json(const Matrix& m) {
  return ojson{{"rows", m.rows}, {"cols", m.cols}, {"data", m.a}};
}

Matrix matrix_from_json(const ojson& j) {
  Matrix m(j.at("rows").get<int>(), j.at("cols").get<int>());
  m.a = j.at("data").get<std::vector<double>>();
  if (m.a.size() != static_cast<std::size_t>(m.rows) * m.cols) {
    throw std::runtime_error("matrix payload size mismatch");
  }
  return m;
}

}  // namespace

ojson Characterizer::to_json() const {
  ojson j;
  j["version"] = 1;
  j["kind"] = to_string(kind_);
  j["vocab"] = ojson{{"embed_dim", vocab_.embed_dim()},
                     {"tokens", vocab_.tokens()}};
  if (kind_ == CharacterizerKind::TextCnn) {
    ojson cnn;
    cnn["config"] = ojson{{"embed_dim", cnn_.cfg.embed_dim},
                          {"window_sizes", cnn_.cfg.window_sizes},
                          {"filters_per_size", cnn_.cfg.filters_per_size},
                          {"head_dims", cnn_.cfg.head_dims}};
    cnn["embeddings"] = matrix_to_json(cnn_.embeddings);
    ojson banks = ojson::array();
    for (const ConvBank& bank : cnn_.banks) {
      banks.push_back(ojson{{"window", bank.window},
                            {"weights", matrix_to_json(bank.weights)},
                            {"bias", bank.bias}});
    }
    cnn["banks"] = std::move(banks);
    ojson head = ojson::array();
    for (const DenseLayer& layer : cnn_.head) {
      head.push_back(ojson{{"w", matrix_to_json(layer.w)}, {"b", layer.b}});
    }
    cnn["head"] = std::move(head);
    j["cnn"] = std::move(cnn);
  } else {
    ojson nz = ojson::array();
    for (int i = 0; i < linear_.dim; ++i) {
      if (linear_.weights[i] != 0.0) {
        nz.push_back(ojson::array({i, linear_.weights[i]}));
      }
    }
    j["linear"] =
        ojson{{"dim", linear_.dim}, {"bias", linear_.bias}, {"nz", std::move(nz)}};
  }
  return j;
}

Characterizer Characterizer::from_json(const ojson& j) {
  if (!j.contains("version") || j.at("version").get<int>() != 1) {
    throw std::runtime_error("unsupported characterizer checkpoint version");
  }
  Characterizer c;
  c.kind_ = characterizer_kind_from_string(j.at("kind").get<std::string>());
  c.vocab_ = Vocabulary(j.at("vocab").at("embed_dim").get<int>());
  for (const auto& tok : j.at("vocab").at("tokens")) {
    c.vocab_.add(tok.get<std::string>());
  }
  if (c.kind_ == CharacterizerKind::TextCnn) {
    const ojson& cnn = j.at("cnn");
    const ojson& cfg = cnn.at("config");
    c.cnn_.cfg.embed_dim = cfg.at("embed_dim").get<int>();
    c.cnn_.cfg.window_sizes = cfg.at("window_sizes").get<std::vector<int>>();
    c.cnn_.cfg.filters_per_size = cfg.at("filters_per_size").get<int>();
    c.cnn_.cfg.head_dims = cfg.at("head_dims").get<std::vector<int>>();
    c.cnn_.embeddings = matrix_from_json(cnn.at("embeddings"));
    for (const auto& bj : cnn.at("banks")) {
      ConvBank bank;
      bank.window = bj.at("window").get<int>();
      bank.weights = matrix_from_json(bj.at("weights"));
      bank.bias = bj.at("bias").get<std::vector<double>>();
      c.cnn_.banks.push_back(std::move(bank));
    }
    for (const auto& lj : cnn.at("head")) {
      DenseLayer layer;
      layer.w = matrix_from_json(lj.at("w"));
      layer.b = lj.at("b").get<std::vector<double>>();
      c.cnn_.head.push_back(std::move(layer));
    }
  } else {
    const ojson& lin = j.at("linear");
    c.linear_ = LinearModel::zeros(lin.at("dim").get<int>());
    c.linear_.bias = lin.at("bias").get<double>();
    for (const auto& pair : lin.at("nz")) {
      c.linear_.weights[pair.at(0).get<int>()] = pair.at(1).get<double>();
    }
  }
  return c;
}

void Characterizer::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json().dump() << '\n';
}

Characterizer Characterizer::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  ojson j;
  try {
    in >> j;
  } catch (const ojson::parse_error& e) {
    throw std::runtime_error(path.string() + ": corrupt checkpoint: " +
                             e.what());
  }
  return from_json(j);
}

}  // namespace ecfm
