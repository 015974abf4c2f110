#ifndef CATLAB_SERIALIZE_HPP
#define CATLAB_SERIALIZE_HPP

#include <json.hpp>

#include "catlab/distributions.hpp"
#include "catlab/estimators.hpp"
#include "catlab/gradient.hpp"
#include "catlab/strategies.hpp"
#include "catlab/trainer.hpp"

namespace catlab {

using Json = nlohmann::json;

// distributions <-> plain probability arrays
Json to_json(const Categorical& dist);
Categorical categorical_from_json(const Json& j);

// {"type":"pass","n":16} | {"type":"maj","n":64,"k":26} | {"type":"bon","n":8}
Json to_json(const Strategy& s);
Strategy strategy_from_json(const Json& j);

Json to_json(const GradientReport& report);
Json to_json(const RhoReport& report);

Json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const Json& j);

/// One pool per line: {"answers":[...], "correct":"..."}.
std::vector<AnswerPool> answer_pools_from_jsonl(const std::string& text);

}  // namespace catlab

#endif
