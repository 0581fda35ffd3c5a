#pragma once

#include "mvgl/dataset.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mvgl {

/// Gaussian blobs seen through V views. Per-view vectors of length 1 apply
/// to every view.
struct SynthSpec {
  Eigen::Index n = 300;
  Eigen::Index k = 3;
  Eigen::Index v = 3;
  std::vector<Eigen::Index> dims{10};
  /// Distance between cluster centers in units of the view's noise sigma.
  double separation = 10.0;
  std::vector<double> noise{1.0};
  /// Fraction of samples per view whose features come from a wrong cluster.
  std::vector<double> corruption{0.0};
  std::uint64_t seed = 0;

  Eigen::Index dims_of(Eigen::Index view) const;
  double noise_of(Eigen::Index view) const;
  double corruption_of(Eigen::Index view) const;
  void validate() const;
};

/// Parses "n=300,k=3,v=3,sep=10,dims=4:8:16,noise=1,corrupt=0:0.5,seed=7".
/// Unknown keys and malformed values throw InvalidParameter.
SynthSpec parse_synth_spec(std::string_view text);
std::string to_string(const SynthSpec& spec);

/// Samples are assigned round-robin to clusters (sample i is in cluster
/// i mod k). Centers sit on a randomly rotated scaled simplex when d_v >= k
/// (pairwise distance exactly separation * noise_v), otherwise on a random
/// line with that spacing. Deterministic given the seed.
MultiViewDataset generate_synth(const SynthSpec& spec);

}  // namespace mvgl
