#include "tfqkd/protosim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>
#include <stdexcept>

namespace tfqkd::sim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxRounds = 9.0e15;  // counts stay exact in doubles

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t worker_seed(std::uint64_t seed, int worker) {
  return splitmix64(seed ^ splitmix64(0x5851f42d4c957f2dULL * (worker + 1)));
}

// Detection averages of p_tE(phi + offset) over a phase region.
struct RegionAverages {
  double full = 0.0;   // whole circle
  double slice = 0.0;  // |phi| <= Delta/2
  double rest = 0.0;   // complement
};

RegionAverages region_averages(double offset, double mu_a, double mu_b, int t_e,
                               const channel::PhysicalParams& p) {
  auto f = [&](double phi) {
    const auto s = channel::click_stats(phi + offset, mu_a, mu_b, p);
    return t_e == 1 ? s.p_t1 : s.p_t2;
  };
  RegionAverages r;
  constexpr int kCircle = 512;
  for (int i = 0; i < kCircle; ++i) {
    r.full += f(kTwoPi * i / kCircle);
  }
  r.full /= kCircle;

  const double half = 0.5 * p.slice_width_rad;
  constexpr int kSimpson = 129;
  double acc = f(-half) + f(half);
  const double h = 2.0 * half / (kSimpson - 1);
  for (int i = 1; i < kSimpson - 1; ++i) {
    acc += f(-half + i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
  }
  r.slice = acc * h / 3.0 / (2.0 * half);

  const double sf = p.slice_fraction();
  r.rest = sf < 1.0 ? (r.full - sf * r.slice) / (1.0 - sf) : r.slice;
  return r;
}

// Bit-averaged detection probabilities per basis combination. Equal bits
// keep the encoding offset at 0 and opposite bits shift it by pi for the
// matched combinations; mixed Z/Y combinations sit at +-pi/2.
struct ComboAverages {
  RegionAverages zz, yy, zy, yz;
};

ComboAverages combo_averages(double mu_a, double mu_b, int t_e,
                             const channel::PhysicalParams& p) {
  const RegionAverages o0 = region_averages(0.0, mu_a, mu_b, t_e, p);
  const RegionAverages opi = region_averages(kPi, mu_a, mu_b, t_e, p);
  const RegionAverages oq = region_averages(kPi / 2.0, mu_a, mu_b, t_e, p);
  const RegionAverages oq3 = region_averages(3.0 * kPi / 2.0, mu_a, mu_b, t_e, p);
  auto mix = [](const RegionAverages& a, const RegionAverages& b) {
    return RegionAverages{0.5 * (a.full + b.full), 0.5 * (a.slice + b.slice),
                          0.5 * (a.rest + b.rest)};
  };
  ComboAverages c;
  c.zz = mix(o0, opi);
  c.yy = mix(o0, opi);
  c.zy = mix(oq, oq3);
  c.yz = mix(oq3, oq);
  return c;
}

struct PerBitAverages {
  RegionAverages same, diff;  // matched bases, equal vs opposite bits
};

PerBitAverages matched_bit_averages(double mu, int t_e,
                                    const channel::PhysicalParams& p) {
  return {region_averages(0.0, mu, mu, t_e, p),
          region_averages(kPi, mu, mu, t_e, p)};
}

}  // namespace

int CategoryTable::block_offset(int ia, int ib) {
  int off = 0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a == ia && b == ib) return off;
      off += (a == b) ? kEqualBlock : kUnequalBlock;
    }
  }
  throw std::invalid_argument("CategoryTable: bad intensity indices");
}

int CategoryTable::size() { return 3 * kEqualBlock + 6 * kUnequalBlock; }

int CategoryTable::none_id(int ia, int ib) { return block_offset(ia, ib); }

int CategoryTable::announced_id(int ia, int ib, int t_e, bool match) {
  return block_offset(ia, ib) + 1 + (t_e - 1) * 2 + (match ? 1 : 0);
}

int CategoryTable::code_id(int i, int t_e, bool slice, Code sub) {
  return block_offset(i, i) + 5 + (t_e - 1) * 12 + (slice ? 0 : 6) +
         static_cast<int>(sub);
}

std::string CategoryTable::name(int id) {
  for (int ia = 0; ia < 3; ++ia) {
    for (int ib = 0; ib < 3; ++ib) {
      const int off = block_offset(ia, ib);
      const int len = (ia == ib) ? kEqualBlock : kUnequalBlock;
      if (id < off || id >= off + len) continue;
      const std::string pair = "mu" + std::to_string(ia + 1) + ",mu" +
                               std::to_string(ib + 1);
      const int local = id - off;
      if (local == 0) return pair + "|none";
      if (ia != ib || local <= 4) {
        const int l = local - 1;
        const std::string te = (l / 2 == 0) ? "t1" : "t2";
        const std::string match = (l % 2 == 1) ? "match" : "mismatch";
        if (ia == ib) return pair + "|test|" + te + "|" + match;
        return pair + "|" + te + "|" + match;
      }
      const int l = local - 5;
      const std::string te = (l / 12 == 0) ? "t1" : "t2";
      const std::string region = ((l % 12) / 6 == 0) ? "slice" : "rest";
      static const char* subs[] = {"zz_agree", "zz_dis",      "yy_agree",
                                   "yy_dis",   "zc_mismatch", "xc"};
      return pair + "|code|" + te + "|" + region + "|" + subs[l % 6];
    }
  }
  throw std::invalid_argument("CategoryTable::name: id out of range");
}

double ObservedCounts::total() const {
  double t = 0.0;
  for (double c : counts) t += c;
  return t;
}

double ObservedCounts::n_xc_test(int t_e, int ia, int ib) const {
  if (ia == ib) {
    return counts[CategoryTable::announced_id(ia, ib, t_e, true)];
  }
  return counts[CategoryTable::announced_id(ia, ib, t_e, true)];
}

keyrate::CodeCounts ObservedCounts::code_counts(int t_e, int i) const {
  using CT = CategoryTable;
  keyrate::CodeCounts c;
  const double zz_a = counts[CT::code_id(i, t_e, true, CT::kZzAgree)];
  const double zz_d = counts[CT::code_id(i, t_e, true, CT::kZzDis)];
  const double yy_a = counts[CT::code_id(i, t_e, true, CT::kYyAgree)];
  const double yy_d = counts[CT::code_id(i, t_e, true, CT::kYyDis)];
  c.n_za_zc = zz_a + zz_d;
  c.n_ya_zc = yy_a + yy_d;
  c.n_y_err = yy_d;
  c.n_y_coin = yy_a;
  c.n_z_err = (t_e == 1) ? zz_d : zz_a;  // Alice flips her string for t_E = 2
  c.n_xc_test = n_xc_test(t_e, i, i);
  return c;
}

std::array<std::array<double, 2>, 2> ObservedCounts::mode_te_contingency() const {
  using CT = CategoryTable;
  std::array<std::array<double, 2>, 2> table{{{0.0, 0.0}, {0.0, 0.0}}};
  for (int i = 0; i < 3; ++i) {
    for (int te = 1; te <= 2; ++te) {
      double test = counts[CT::announced_id(i, i, te, true)] +
                    counts[CT::announced_id(i, i, te, false)];
      double code = 0.0;
      for (bool slice : {true, false}) {
        for (int sub = 0; sub < 6; ++sub) {
          code += counts[CT::code_id(i, te, slice, static_cast<CT::Code>(sub))];
        }
      }
      table[0][te - 1] += test;
      table[1][te - 1] += code;
    }
  }
  return table;
}

decoy::PairCounts ObservedCounts::pair_counts(int t_e) const {
  decoy::PairCounts pc{};
  for (int ia = 0; ia < 3; ++ia) {
    for (int ib = 0; ib < 3; ++ib) {
      pc[ia][ib] = n_xc_test(t_e, ia, ib);
    }
  }
  return pc;
}

std::vector<double> category_probabilities(const channel::PhysicalParams& p) {
  p.validate();
  using CT = CategoryTable;
  std::vector<double> prob(CT::size(), 0.0);

  const double pz = p.p_z_basis, py = p.p_y_basis();
  const double sf = p.slice_fraction();

  for (int ia = 0; ia < 3; ++ia) {
    for (int ib = 0; ib < 3; ++ib) {
      const double p_pair = p.p_mu[ia] * p.p_mu[ib];
      if (p_pair == 0.0) {
        prob[CT::none_id(ia, ib)] = 0.0;
        continue;
      }
      double detected = 0.0;
      for (int te = 1; te <= 2; ++te) {
        const ComboAverages avg = combo_averages(p.mu[ia], p.mu[ib], te, p);
        const double det_match = pz * pz * avg.zz.full + py * py * avg.yy.full;
        const double det_mismatch = pz * py * (avg.zy.full + avg.yz.full);

        if (ia != ib) {
          prob[CT::announced_id(ia, ib, te, true)] = p_pair * det_match;
          prob[CT::announced_id(ia, ib, te, false)] = p_pair * det_mismatch;
          detected += p_pair * (det_match + det_mismatch);
          continue;
        }

        // Equal intensities: Test/Code assignment happens after detection.
        prob[CT::announced_id(ia, ib, te, true)] = p_pair * p.p_test * det_match;
        prob[CT::announced_id(ia, ib, te, false)] =
            p_pair * p.p_test * det_mismatch;
        detected += p_pair * p.p_test * (det_match + det_mismatch);

        const double p_code = p_pair * p.p_code();
        const PerBitAverages bits = matched_bit_averages(p.mu[ia], te, p);
        for (bool slice : {true, false}) {
          const double region_w = slice ? sf : 1.0 - sf;
          auto r = [&](const RegionAverages& a) { return slice ? a.slice : a.rest; };
          const double w = p_code * region_w;

          const double zz_agree = w * p.p_zc * pz * pz * 0.5 * r(bits.same);
          const double zz_dis = w * p.p_zc * pz * pz * 0.5 * r(bits.diff);
          const double yy_agree = w * p.p_zc * py * py * 0.5 * r(bits.same);
          const double yy_dis = w * p.p_zc * py * py * 0.5 * r(bits.diff);
          const double mism =
              w * p.p_zc * pz * py * (r(avg.zy) + r(avg.yz));
          const double xc =
              w * p.p_xc() *
              (pz * pz * 0.5 * (r(bits.same) + r(bits.diff)) +
               py * py * 0.5 * (r(bits.same) + r(bits.diff)) +
               pz * py * (r(avg.zy) + r(avg.yz)));

          prob[CT::code_id(ia, te, slice, CT::kZzAgree)] = zz_agree;
          prob[CT::code_id(ia, te, slice, CT::kZzDis)] = zz_dis;
          prob[CT::code_id(ia, te, slice, CT::kYyAgree)] = yy_agree;
          prob[CT::code_id(ia, te, slice, CT::kYyDis)] = yy_dis;
          prob[CT::code_id(ia, te, slice, CT::kZcMismatch)] = mism;
          prob[CT::code_id(ia, te, slice, CT::kXc)] = xc;
          detected += zz_agree + zz_dis + yy_agree + yy_dis + mism + xc;
        }
      }
      prob[CT::none_id(ia, ib)] = std::max(0.0, p_pair - detected);
    }
  }
  return prob;
}

ObservedCounts expected_counts(const channel::PhysicalParams& p, double n_rounds) {
  ObservedCounts oc;
  oc.n_rounds = n_rounds;
  oc.counts = category_probabilities(p);
  for (double& c : oc.counts) c *= n_rounds;
  return oc;
}

namespace {

std::vector<double> multinomial_shard(const std::vector<double>& prob,
                                      double shard_rounds, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(prob.size(), 0.0);
  double p_rest = 1.0;
  auto remaining = static_cast<long long>(shard_rounds);
  for (std::size_t i = 0; i + 1 < prob.size() && remaining > 0; ++i) {
    const double q = std::clamp(prob[i] / std::max(p_rest, 1e-300), 0.0, 1.0);
    std::binomial_distribution<long long> bin(remaining, q);
    const long long k = bin(rng);
    out[i] = static_cast<double>(k);
    remaining -= k;
    p_rest -= prob[i];
  }
  out.back() = static_cast<double>(remaining);
  return out;
}

std::vector<double> per_round_shard(const channel::PhysicalParams& p,
                                    double shard_rounds, std::uint64_t seed) {
  using CT = CategoryTable;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::discrete_distribution<int> pick_mu(p.p_mu.begin(), p.p_mu.end());

  std::vector<double> out(CT::size(), 0.0);
  const double half = 0.5 * p.slice_width_rad;
  const auto rounds = static_cast<long long>(shard_rounds);

  for (long long r = 0; r < rounds; ++r) {
    // Step 2 draws, in protocol order.
    const int ja = uni(rng) < 0.5 ? 0 : 1;
    const int jb = uni(rng) < 0.5 ? 0 : 1;
    const bool za = uni(rng) < p.p_z_basis;
    const bool zb = uni(rng) < p.p_z_basis;
    const int ia = pick_mu(rng);
    const int ib = pick_mu(rng);
    const double ta = phase(rng);
    const double tb = phase(rng);

    const double da = za ? ja * kPi : 1.5 * kPi - ja * kPi;
    const double db = zb ? jb * kPi : 1.5 * kPi - jb * kPi;
    const auto s = channel::click_stats((ta + da) - (tb + db), p.mu[ia], p.mu[ib], p);

    // Step 3: relay announcement.
    const double u = uni(rng);
    int te;
    if (u < s.p_t1) {
      te = 1;
    } else if (u < s.p_t1 + s.p_t2) {
      te = 2;
    } else {
      out[CT::none_id(ia, ib)] += 1.0;
      continue;
    }

    const bool match = za == zb;
    if (ia != ib) {
      out[CT::announced_id(ia, ib, te, match)] += 1.0;
      continue;
    }
    // Step 4(ii): mode assignment only after the detection is known.
    if (uni(rng) < p.p_test) {
      out[CT::announced_id(ia, ib, te, match)] += 1.0;
      continue;
    }
    double diff = std::fmod(ta - tb, kTwoPi);
    if (diff < 0.0) diff += kTwoPi;
    const bool slice = diff <= half || kTwoPi - diff <= half;
    const bool zc = uni(rng) < p.p_zc;
    CT::Code sub;
    if (!zc) {
      sub = CT::kXc;
    } else if (!match) {
      sub = CT::kZcMismatch;
    } else if (za) {
      sub = (ja == jb) ? CT::kZzAgree : CT::kZzDis;
    } else {
      sub = (ja == jb) ? CT::kYyAgree : CT::kYyDis;
    }
    out[CT::code_id(ia, te, slice, sub)] += 1.0;
  }
  return out;
}

}  // namespace

ObservedCounts simulate(const channel::PhysicalParams& p, double n_rounds,
                        std::uint64_t seed, Sampler sampler, int workers) {
  p.validate();
  if (n_rounds < 1.0 || n_rounds != std::floor(n_rounds)) {
    throw std::invalid_argument("simulate: n_rounds must be a positive integer");
  }
  if (n_rounds > kMaxRounds) {
    throw std::invalid_argument("simulate: n_rounds exceeds exact count range");
  }
  if (workers < 1) {
    throw std::invalid_argument("simulate: need at least one worker");
  }

  ObservedCounts oc;
  oc.n_rounds = n_rounds;
  oc.seed = seed;
  oc.workers = workers;
  oc.sampler = sampler;

  const std::vector<double> prob =
      sampler == Sampler::Batched ? category_probabilities(p) : std::vector<double>{};

  // Fixed shard boundaries: first `extra` workers take one extra round.
  const double base = std::floor(n_rounds / workers);
  const auto extra = static_cast<long long>(n_rounds - base * workers);

  std::vector<std::future<std::vector<double>>> jobs;
  jobs.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const double shard = base + (w < extra ? 1.0 : 0.0);
    const std::uint64_t ws = worker_seed(seed, w);
    if (sampler == Sampler::Batched) {
      jobs.push_back(std::async(std::launch::async, [&prob, shard, ws] {
        return multinomial_shard(prob, shard, ws);
      }));
    } else {
      jobs.push_back(std::async(std::launch::async, [&p, shard, ws] {
        return per_round_shard(p, shard, ws);
      }));
    }
  }
  oc.counts.assign(CategoryTable::size(), 0.0);
  for (auto& j : jobs) {
    const auto part = j.get();
    for (std::size_t i = 0; i < oc.counts.size(); ++i) oc.counts[i] += part[i];
  }
  return oc;
}

}  // namespace tfqkd::sim
