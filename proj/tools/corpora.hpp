// Fixed corpora shared by the calibration tool and the acceptance suite.
#pragma once

#include "confluent/instances.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace confluent::corpora {

// (layers, width, kappa, nc target); every network has at most 300 nodes.
inline const std::vector<std::array<int, 4>>& rounding_shapes() {
  static const std::vector<std::array<int, 4>> shapes = {
      {10, 10, 16, 1}, {12, 20, 32, 1}, {15, 20, 64, 2}, {20, 15, 48, 2}, {6, 50, 64, 1},
      {30, 10, 32, 2}, {8, 30, 24, 1},  {25, 12, 64, 2}, {10, 30, 40, 1}, {20, 15, 64, 1},
  };
  return shapes;
}

inline std::vector<RoundingInstance> rounding_corpus() {
  std::vector<RoundingInstance> out;
  std::uint64_t seed = 1000;
  for (const auto& s : rounding_shapes()) out.push_back(gen_rounding_instance(s[0], s[1], s[2], s[3], seed++));
  return out;
}

inline double log2_at_least_1(double x) { return std::max(1.0, std::log2(x)); }

// Small monotone node-capacitated DAGs satisfying the no-bottleneck assumption.
inline std::vector<Network> monotone_corpus(int count, std::uint64_t seed) {
  CorpusSpec s;
  s.count = count;
  s.n_min = 6;
  s.n_max = 14;
  s.kappa_min = 2;
  s.kappa_max = 6;
  s.cap_min = 2;
  s.cap_max = 16;
  s.supply_min = 1;
  s.supply_max = 2;
  s.len_min = 1;
  s.len_max = 3;
  s.monotone = true;
  s.pow2_caps = true;
  return gen_random_corpus(s, seed);
}

// Small edge-capacitated DAGs for the static and dynamic pipelines.
inline std::vector<Network> pipeline_corpus(int count, std::uint64_t seed, int n_max = 7,
                                            int kappa_max = 4) {
  CorpusSpec s;
  s.count = count;
  s.n_min = 3;
  s.n_max = n_max;
  s.kappa_min = 1;
  s.kappa_max = kappa_max;
  s.cap_min = 1;
  s.cap_max = 3;
  s.len_min = 0;
  s.len_max = 3;
  s.supply_min = 1;
  s.supply_max = 4;
  return gen_random_corpus(s, seed);
}

// Small edge-capacitated DAGs where every supply is at most every capacity.
inline std::vector<Network> nba_corpus(int count, std::uint64_t seed, int n_max = 7, int kappa_max = 4) {
  CorpusSpec s;
  s.count = count;
  s.n_min = 3;
  s.n_max = n_max;
  s.kappa_min = 1;
  s.kappa_max = kappa_max;
  s.cap_min = 2;
  s.cap_max = 4;
  s.len_min = 0;
  s.len_max = 3;
  s.supply_min = 1;
  s.supply_max = 2;
  return gen_random_corpus(s, seed);
}

}  // namespace confluent::corpora
