#include "tfqkd/counts_io.hpp"

#include <json.hpp>

#include <stdexcept>

namespace tfqkd::sim {

namespace {

using nlohmann::json;

json params_to_json(const channel::PhysicalParams& p) {
  json j;
  j["alpha_db_per_km"] = p.alpha_db_per_km;
  j["distance_km"] = p.distance_km;
  j["eta_det"] = p.eta_det;
  j["p_dark"] = p.p_dark;
  j["slice_width_rad"] = p.slice_width_rad;
  j["mu"] = p.mu;
  j["p_mu"] = p.p_mu;
  j["p_test"] = p.p_test;
  j["p_zc"] = p.p_zc;
  j["p_z_basis"] = p.p_z_basis;
  j["f_ec"] = p.f_ec;
  j["misalignment"] = p.misalignment;
  j["cutoff"] = p.cutoff;
  return j;
}

channel::PhysicalParams params_from_json(const json& j) {
  channel::PhysicalParams p;
  j.at("alpha_db_per_km").get_to(p.alpha_db_per_km);
  j.at("distance_km").get_to(p.distance_km);
  j.at("eta_det").get_to(p.eta_det);
  j.at("p_dark").get_to(p.p_dark);
  j.at("slice_width_rad").get_to(p.slice_width_rad);
  j.at("mu").get_to(p.mu);
  j.at("p_mu").get_to(p.p_mu);
  j.at("p_test").get_to(p.p_test);
  j.at("p_zc").get_to(p.p_zc);
  j.at("p_z_basis").get_to(p.p_z_basis);
  j.at("f_ec").get_to(p.f_ec);
  j.at("misalignment").get_to(p.misalignment);
  j.at("cutoff").get_to(p.cutoff);
  return p;
}

}  // namespace

std::string counts_to_json(const ObservedCounts& counts,
                           const channel::PhysicalParams& params) {
  json j;
  j["schema"] = kCountsSchema;
  j["params"] = params_to_json(params);
  j["rounds"] = counts.n_rounds;
  j["seed"] = counts.seed;
  j["workers"] = counts.workers;
  j["sampler"] = counts.sampler == Sampler::Batched ? "batched" : "per-round";
  json cm = json::object();
  for (int id = 0; id < CategoryTable::size(); ++id) {
    if (counts.counts[id] != 0.0) {
      cm[CategoryTable::name(id)] = counts.counts[id];
    }
  }
  j["counts"] = cm;
  return j.dump(2);
}

LoadedCounts counts_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("counts_from_json: bad JSON: ") + e.what());
  }
  if (!j.contains("schema") || j["schema"] != kCountsSchema) {
    throw std::runtime_error("counts_from_json: unsupported or missing schema tag");
  }
  LoadedCounts out;
  try {
    out.params = params_from_json(j.at("params"));
    out.counts.n_rounds = j.at("rounds").get<double>();
    out.counts.seed = j.at("seed").get<std::uint64_t>();
    out.counts.workers = j.at("workers").get<int>();
    out.counts.sampler =
        j.at("sampler").get<std::string>() == "per-round" ? Sampler::PerRound
                                                          : Sampler::Batched;
    out.counts.counts.assign(CategoryTable::size(), 0.0);
    for (const auto& [key, value] : j.at("counts").items()) {
      bool known = false;
      for (int id = 0; id < CategoryTable::size(); ++id) {
        if (CategoryTable::name(id) == key) {
          out.counts.counts[id] = value.get<double>();
          known = true;
          break;
        }
      }
      if (!known) {
        throw std::runtime_error("counts_from_json: unknown category " + key);
      }
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("counts_from_json: malformed payload: ") +
                             e.what());
  }
  double total = 0.0;
  for (double c : out.counts.counts) {
    if (c < 0.0) throw std::runtime_error("counts_from_json: negative count");
    total += c;
  }
  if (total > out.counts.n_rounds * (1.0 + 1e-9)) {
    throw std::runtime_error("counts_from_json: counts exceed the round total");
  }
  return out;
}

}  // namespace tfqkd::sim
