#include "catlab/serialize.hpp"

#include <sstream>
#include <stdexcept>

namespace catlab {

Json to_json(const Categorical& dist) {
  Json arr = Json::array();
  for (Index i = 0; i < dist.size(); ++i) arr.push_back(dist.prob(i));
  return arr;
}

Categorical categorical_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("categorical_from_json: expected an array");
  Vector probs(static_cast<Index>(j.size()));
  Index i = 0;
  for (const auto& v : j) probs[i++] = v.get<double>();
  return Categorical(probs);
}

Json to_json(const Strategy& s) {
  switch (s.kind) {
    case StrategyKind::Pass:
      return Json{{"type", "pass"}, {"n", s.n}};
    case StrategyKind::Maj:
      return Json{{"type", "maj"}, {"n", s.n}, {"k", s.k}};
    case StrategyKind::Bon:
      return Json{{"type", "bon"}, {"n", s.n}};
  }
  throw std::logic_error("to_json: unknown strategy");
}

Strategy strategy_from_json(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  const int n = j.at("n").get<int>();
  if (type == "pass") return Strategy::pass_at(n);
  if (type == "maj") return Strategy::majority(n, j.at("k").get<int>());
  if (type == "bon") return Strategy::best_of(n);
  throw std::invalid_argument("strategy_from_json: unknown type " + type);
}

namespace {

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

Json to_json(const GradientReport& report) {
  return Json{{"exact", vector_to_json(report.exact)},
              {"diagonal", vector_to_json(report.diagonal)},
              {"off_diagonal_error", vector_to_json(report.off_diagonal_error)},
              {"inner_product", report.inner_product},
              {"norms",
               Json{{"exact", report.exact_norm},
                    {"diagonal", report.diagonal_norm},
                    {"error", report.error_norm}}}};
}

Json to_json(const RhoReport& report) {
  return Json{{"diag_sensitivity", report.diag_sensitivity},
              {"rivalry_correction", report.rivalry_correction},
              {"rho", report.rho},
              {"convention", report.convention == RhoConvention::CompetitivePlus
                                 ? "competitive_plus"
                                 : "uncompetitive_minus"},
              {"degenerate", report.degenerate},
              {"collapsed_k", report.collapsed_k},
              {"collapsed_diag", report.collapsed_diag}};
}

namespace {

const char* weight_mode_name(WeightMode mode) {
  switch (mode) {
    case WeightMode::SftClosedForm:
      return "sft";
    case WeightMode::SftTable1Maj:
      return "sft-table1";
    case WeightMode::RlRaw:
      return "rl";
    case WeightMode::RlNormalized:
      return "rl-norm";
  }
  return "?";
}

WeightMode weight_mode_from_name(const std::string& name) {
  if (name == "sft") return WeightMode::SftClosedForm;
  if (name == "sft-table1") return WeightMode::SftTable1Maj;
  if (name == "rl") return WeightMode::RlRaw;
  if (name == "rl-norm") return WeightMode::RlNormalized;
  throw std::invalid_argument("unknown weight mode " + name);
}

}  // namespace

Json to_json(const TrainConfig& config) {
  return Json{{"learning_rate", config.learning_rate},
              {"steps", config.steps},
              {"seed", config.seed.value},
              {"group_size", config.group_size},
              {"n_target", config.n_target},
              {"weight_mode", weight_mode_name(config.weight_mode)},
              {"clip_ceiling", config.clip_ceiling},
              {"kl_beta", config.kl_beta},
              {"silence_penalty", config.silence_penalty},
              {"advantage_epsilon", config.advantage_epsilon},
              {"warmup_steps", config.warmup_steps},
              {"normalize_weights", config.normalize_weights}};
}

TrainConfig train_config_from_json(const Json& j) {
  TrainConfig config;
  if (j.contains("learning_rate")) config.learning_rate = j["learning_rate"].get<double>();
  if (j.contains("steps")) config.steps = j["steps"].get<int>();
  if (j.contains("seed")) config.seed.value = j["seed"].get<std::uint64_t>();
  if (j.contains("group_size")) config.group_size = j["group_size"].get<int>();
  if (j.contains("n_target")) config.n_target = j["n_target"].get<int>();
  if (j.contains("weight_mode"))
    config.weight_mode = weight_mode_from_name(j["weight_mode"].get<std::string>());
  if (j.contains("clip_ceiling")) config.clip_ceiling = j["clip_ceiling"].get<double>();
  if (j.contains("kl_beta")) config.kl_beta = j["kl_beta"].get<double>();
  if (j.contains("silence_penalty")) config.silence_penalty = j["silence_penalty"].get<bool>();
  if (j.contains("advantage_epsilon"))
    config.advantage_epsilon = j["advantage_epsilon"].get<double>();
  if (j.contains("warmup_steps")) config.warmup_steps = j["warmup_steps"].get<int>();
  if (j.contains("normalize_weights"))
    config.normalize_weights = j["normalize_weights"].get<bool>();
  return config;
}

std::vector<AnswerPool> answer_pools_from_jsonl(const std::string& text) {
  std::vector<AnswerPool> pools;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const Json j = Json::parse(line);
    AnswerPool pool;
    for (const auto& a : j.at("answers")) pool.answers.push_back(a.get<std::string>());
    pool.correct = j.at("correct").get<std::string>();
    pools.push_back(std::move(pool));
  }
  return pools;
}

}  // namespace catlab
