#include "mvgl/synth.hpp"

#include "mvgl/error.hpp"

#include <charconv>
#include <cmath>
#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace mvgl {

using Eigen::Index;

namespace {

template <typename T>
T parse_value(std::string_view key, std::string_view text) {
  T out{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidParameter("synth spec: bad value '" + std::string(text) + "' for key '" +
                           std::string(key) + "'");
  }
  return out;
}

template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
  std::vector<T> out;
  while (true) {
    const std::size_t colon = text.find(':');
    out.push_back(parse_value<T>(key, text.substr(0, colon)));
    if (colon == std::string_view::npos) break;
    text.remove_prefix(colon + 1);
  }
  return out;
}

template <typename T>
T per_view(const std::vector<T>& values, Index view) {
  return values.size() == 1 ? values.front() : values[static_cast<std::size_t>(view)];
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::ostringstream out;
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? ":" : "") << values[i];
  return out.str();
}

// k centers with all pairwise distances equal to `spacing` (d >= k), or
// evenly spaced on a random line (d < k).
Eigen::MatrixXd draw_centers(Index k, Index d, double spacing, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(k, d);
  if (d >= k) {
    Eigen::MatrixXd g(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) g(i, j) = gauss(rng);
    const Eigen::MatrixXd frame = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
    for (Index c = 0; c < k; ++c) centers.row(c) = (spacing / std::sqrt(2.0)) * frame.col(c).transpose();
    return centers;
  }
  Eigen::VectorXd dir(d);
  for (Index i = 0; i < d; ++i) dir(i) = gauss(rng);
  dir.normalize();
  for (Index c = 0; c < k; ++c) centers.row(c) = (spacing * static_cast<double>(c)) * dir.transpose();
  return centers;
}

}  // namespace

Index SynthSpec::dims_of(Index view) const { return per_view(dims, view); }
double SynthSpec::noise_of(Index view) const { return per_view(noise, view); }
double SynthSpec::corruption_of(Index view) const { return per_view(corruption, view); }

void SynthSpec::validate() const {
  const auto fail = [](const std::string& msg) { throw InvalidParameter("synth spec: " + msg); };
  if (k < 1 || n < k) fail("need n >= k >= 1");
  if (v < 1) fail("need v >= 1");
  if (!(separation > 0.0)) fail("sep must be positive");
  const auto check_len = [&](std::size_t len, const char* key) {
    if (len != 1 && len != static_cast<std::size_t>(v)) {
      fail(std::string(key) + " needs 1 or v values");
    }
  };
  check_len(dims.size(), "dims");
  check_len(noise.size(), "noise");
  check_len(corruption.size(), "corrupt");
  for (const Index d : dims)
    if (d < 1) fail("dims must be >= 1");
  for (const double s : noise)
    if (!(s >= 0.0)) fail("noise must be nonnegative");
  for (const double c : corruption)
    if (!(c >= 0.0 && c <= 0.5)) fail("corrupt must lie in [0, 0.5]");
}

SynthSpec parse_synth_spec(std::string_view text) {
  SynthSpec spec;
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidParameter("synth spec: expected key=value, got '" + std::string(item) + "'");
    }
    const std::string_view key = item.substr(0, eq);
    const std::string_view value = item.substr(eq + 1);
    if (key == "n") {
      spec.n = parse_value<Index>(key, value);
    } else if (key == "k") {
      spec.k = parse_value<Index>(key, value);
    } else if (key == "v") {
      spec.v = parse_value<Index>(key, value);
    } else if (key == "dims" || key == "d") {
      spec.dims = parse_list<Index>(key, value);
    } else if (key == "sep" || key == "separation") {
      spec.separation = parse_value<double>(key, value);
    } else if (key == "noise") {
      spec.noise = parse_list<double>(key, value);
    } else if (key == "corrupt" || key == "corruption") {
      spec.corruption = parse_list<double>(key, value);
    } else if (key == "seed") {
      spec.seed = parse_value<std::uint64_t>(key, value);
    } else {
      throw InvalidParameter("synth spec: unknown key '" + std::string(key) + "'");
    }
  }
  spec.validate();
  return spec;
}

std::string to_string(const SynthSpec& spec) {
  std::ostringstream out;
  out << "n=" << spec.n << ",k=" << spec.k << ",v=" << spec.v << ",dims=" << join(spec.dims)
      << ",sep=" << spec.separation << ",noise=" << join(spec.noise)
      << ",corrupt=" << join(spec.corruption) << ",seed=" << spec.seed;
  return out.str();
}

MultiViewDataset generate_synth(const SynthSpec& spec) {
  spec.validate();
  MultiViewDataset data;
  std::vector<int> truth(static_cast<std::size_t>(spec.n));
  for (Index i = 0; i < spec.n; ++i) truth[static_cast<std::size_t>(i)] = static_cast<int>(i % spec.k);

  for (Index view = 0; view < spec.v; ++view) {
    std::mt19937_64 rng(spec.seed * 1000003ULL + static_cast<std::uint64_t>(view) + 1);
    const Index d = spec.dims_of(view);
    const double sigma = spec.noise_of(view);
    // With zero noise the spacing still has to be positive.
    const double spacing = spec.separation * (sigma > 0.0 ? sigma : 1.0);
    const Eigen::MatrixXd centers = draw_centers(spec.k, d, spacing, rng);

    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<Index> other(1, std::max<Index>(spec.k - 1, 1));
    std::vector<Index> order(static_cast<std::size_t>(spec.n));
    std::iota(order.begin(), order.end(), Index{0});
    std::shuffle(order.begin(), order.end(), rng);
    const auto corrupted = static_cast<std::size_t>(
        std::llround(spec.corruption_of(view) * static_cast<double>(spec.n)));
    std::vector<Index> cluster_of(truth.begin(), truth.end());
    if (spec.k > 1) {
      for (std::size_t r = 0; r < corrupted; ++r) {
        Index& c = cluster_of[static_cast<std::size_t>(order[r])];
        c = (c + other(rng)) % spec.k;
      }
    }

    Eigen::MatrixXd x(spec.n, d);
    for (Index i = 0; i < spec.n; ++i) {
      const Index cluster = cluster_of[static_cast<std::size_t>(i)];
      for (Index f = 0; f < d; ++f) x(i, f) = centers(cluster, f) + sigma * gauss(rng);
    }
    data.views.push_back(std::move(x));
    data.names.push_back("view" + std::to_string(view + 1));
  }
  data.labels = std::move(truth);
  return data;
}

}  // namespace mvgl
