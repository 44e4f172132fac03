#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tfqkd/channel.hpp"
#include "tfqkd/keyrate.hpp"

namespace tfqkd::sim {

enum class Sampler { PerRound, Batched };

// Outcome category space of one protocol round, flattened per intensity
// pair. Equal-intensity pairs split into Test tallies and fully classified
// Code tallies; unequal pairs only announce bases. "match" means the
// announced bases coincide (the C' = 0 events the analysis keeps).
struct CategoryTable {
  // Sub-ids inside an equal-intensity block.
  enum Code : int {
    kZzAgree = 0,
    kZzDis = 1,
    kYyAgree = 2,
    kYyDis = 3,
    kZcMismatch = 4,
    kXc = 5,
  };

  static constexpr int kEqualBlock = 29;   // none + 4 test + 24 code
  static constexpr int kUnequalBlock = 5;  // none + 4

  static int block_offset(int ia, int ib);
  static int size();  // 117
  static int none_id(int ia, int ib);
  // Unequal pairs and equal-pair Test events: t_e in {1,2}, match flag.
  static int announced_id(int ia, int ib, int t_e, bool match);
  // Equal-pair Code events: slice flag and Code sub-id.
  static int code_id(int i, int t_e, bool slice, Code sub);
  static std::string name(int id);
};

// Event tallies of a full simulation run. Counts are doubles (exact for
// integers below 2^53, which bounds the accepted round count).
struct ObservedCounts {
  double n_rounds = 0.0;
  std::uint64_t seed = 0;
  int workers = 0;
  Sampler sampler = Sampler::Batched;
  std::vector<double> counts;  // CategoryTable::size() entries

  double total() const;
  // Photon-number-measured pool (C'=0) detections with announcement t_e:
  // all matched unequal-pair detections plus matched equal-pair Test ones.
  double n_xc_test(int t_e, int ia, int ib) const;
  // Slice Code-mode tallies for intensity index i.
  keyrate::CodeCounts code_counts(int t_e, int i) const;
  // Mode-vs-t_E contingency counts over equal-intensity detections,
  // rows {Test, Code} x columns {t1, t2}.
  std::array<std::array<double, 2>, 2> mode_te_contingency() const;

  decoy::PairCounts pair_counts(int t_e) const;
};

// Exact per-category probabilities of one round under the honest channel
// model. Sums to 1 by construction (the none categories absorb the
// remainder of each pair).
std::vector<double> category_probabilities(const channel::PhysicalParams& p);

// Expected tallies N * P(category).
ObservedCounts expected_counts(const channel::PhysicalParams& p, double n_rounds);

// Runs the protocol N times. Per-round mode draws every protocol variable
// in announcement order; batched mode draws one multinomial over the
// category space. Identical (params, n_rounds, seed, sampler, workers)
// give identical tallies; rounds shard across workers with one RNG stream
// per worker.
ObservedCounts simulate(const channel::PhysicalParams& p, double n_rounds,
                        std::uint64_t seed, Sampler sampler, int workers = 4);

}  // namespace tfqkd::sim
