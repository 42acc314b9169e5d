// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sfcm/errors.hpp"
#include "sfcm/lsi.hpp"
#include "sfcm/mlp.hpp"
#include "sfcm/pipeline.hpp"

namespace sfcm::io {

using nlohmann::json;

inline constexpr int kLsiModelVersion = 1;
inline constexpr int kMlpModelVersion = 1;

// LSI model file: featurization parameters, term dictionary, IDF weights
// and the truncated basis. JSON keeps the format byte-order free.
inline json lsi_model_to_json(const lsi::LsiModel& model,
                              const FeaturizeParams& params) {
  json j;
  j["version"] = kLsiModelVersion;
  j["variant"] = variant_name(params.variant);
  j["bits"] = params.bits;
  j["sphere_radius"] = params.sphere_radius;
  j["range_max"] = params.descriptor().range_max;
  j["term_index"] = model.term_index;
  j["idf"] = model.idf;
  j["k"] = model.svd.k;
  j["S"] = model.svd.S;
  j["m"] = model.svd.U.rows();
  j["U"] = model.svd.U.data();
  return j;
}

inline std::pair<lsi::LsiModel, FeaturizeParams> lsi_model_from_json(const json& j) {
  if (!j.contains("version") || j.at("version").get<int>() != kLsiModelVersion)
    throw InvalidConfig("unsupported LSI model version");
  FeaturizeParams params;
  params.variant = parse_variant_tag(j.at("variant").get<std::string>());
  params.bits = j.at("bits").get<int>();
  params.sphere_radius = j.at("sphere_radius").get<double>();
  params.range_max = j.at("range_max").get<double>();

  lsi::LsiModel model;
  model.term_index = j.at("term_index").get<std::vector<std::uint32_t>>();
  model.idf = j.at("idf").get<std::vector<double>>();
  model.svd.k = j.at("k").get<int>();
  model.svd.S = j.at("S").get<std::vector<double>>();
  const auto m = j.at("m").get<std::size_t>();
  const auto flat = j.at("U").get<std::vector<double>>();
  const auto k = static_cast<std::size_t>(model.svd.k);
  if (flat.size() != m * k)
    throw InvalidConfig("LSI model U has inconsistent shape");
  model.svd.U = Matrix(m, k);
  model.svd.U.data() = flat;
  return {std::move(model), params};
}

inline json mlp_model_to_json(const mlp::Model& model) {
  json j;
  j["version"] = kMlpModelVersion;
  j["layer_sizes"] = model.layer_sizes;
  json weights = json::array();
  json biases = json::array();
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    weights.push_back(model.weights[l].data());
    biases.push_back(model.biases[l]);
  }
  j["weights"] = weights;
  j["biases"] = biases;
  j["input_mean"] = model.input_mean;
  j["input_std"] = model.input_std;
  j["target_mean"] = model.target_mean;
  j["target_std"] = model.target_std;
  j["tasks"] = std::vector<std::string>(kTaskNames.begin(), kTaskNames.end());
  return j;
}

inline mlp::Model mlp_model_from_json(const json& j) {
  if (!j.contains("version") || j.at("version").get<int>() != kMlpModelVersion)
    throw InvalidConfig("unsupported MLP model version");
  mlp::Model m;
  m.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
  if (m.layer_sizes.size() < 2) throw InvalidConfig("MLP model needs >= 2 layers");
  for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
    const auto rows = static_cast<std::size_t>(m.layer_sizes[l + 1]);
    const auto cols = static_cast<std::size_t>(m.layer_sizes[l]);
    Matrix w(rows, cols);
    const auto flat = j.at("weights").at(l).get<std::vector<double>>();
    if (flat.size() != rows * cols)
      throw InvalidConfig("MLP weight block has inconsistent shape");
    w.data() = flat;
    m.weights.push_back(std::move(w));
    m.biases.push_back(j.at("biases").at(l).get<std::vector<double>>());
    if (m.biases.back().size() != rows)
      throw InvalidConfig("MLP bias block has inconsistent shape");
  }
  m.input_mean = j.at("input_mean").get<std::vector<double>>();
  m.input_std = j.at("input_std").get<std::vector<double>>();
  const auto tm = j.at("target_mean").get<std::vector<double>>();
  const auto ts = j.at("target_std").get<std::vector<double>>();
  if (tm.size() != mlp::kTasks || ts.size() != mlp::kTasks)
    throw InvalidConfig("MLP normalization stats have inconsistent shape");
  std::copy(tm.begin(), tm.end(), m.target_mean.begin());
  std::copy(ts.begin(), ts.end(), m.target_std.begin());
  return m;
}

}  // namespace sfcm::io
