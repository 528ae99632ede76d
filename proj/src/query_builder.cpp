/*
 * Copyright 2026 The Pixie Walk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pixie/query_builder.hpp"

#include <cmath>
#include <unordered_map>

namespace pixie {

ActionType parse_action_type(const std::string& name) {
  if (name == "click") return ActionType::kClick;
  if (name == "like") return ActionType::kLike;
  if (name == "save") return ActionType::kSave;
  throw Error(ErrorCode::kValidation, "unknown action type '" + name + "'");
}

double ActionWeights::of(ActionType t) const {
  switch (t) {
    case ActionType::kClick: return click;
    case ActionType::kLike: return like;
    case ActionType::kSave: return save;
  }
  return 0.0;
}

double decayed_weight(double w0, double age_seconds, double half_life_seconds) {
  if (!(half_life_seconds > 0.0)) throw Error(ErrorCode::kConfig, "half-life must be > 0");
  if (!(age_seconds >= 0.0)) throw Error(ErrorCode::kValidation, "action age must be >= 0");
  return w0 * std::exp2(-age_seconds / half_life_seconds);
}

BuiltQuery build_query_from_actions(const std::vector<UserAction>& actions,
                                    const ActionWeights& weights, double half_life_seconds,
                                    const IdMap& ids, const BipartiteGraph& graph) {
  BuiltQuery out;
  std::unordered_map<NodeId, std::size_t> slot;
  std::unordered_map<std::string, bool> dropped;
  for (const UserAction& a : actions) {
    const double w = decayed_weight(weights.of(a.type), a.age_seconds, half_life_seconds);
    const auto id = ids.find_pin(a.pin_key);
    if (!id || *id >= graph.pin_count() || graph.degree(*id) == 0) {
      if (dropped.emplace(a.pin_key, true).second) out.dropped_keys.push_back(a.pin_key);
      continue;
    }
    auto [it, inserted] = slot.try_emplace(*id, out.query.entries.size());
    if (inserted) {
      out.query.entries.push_back({*id, 0.0});
      out.raw_weights.push_back(0.0);
    }
    out.raw_weights[it->second] += w;
  }
  if (out.query.entries.empty()) {
    throw Error(ErrorCode::kEmptyQuery, "no action refers to a pin in the graph");
  }
  // Very old actions can underflow to zero weight; they carry no signal.
  std::size_t kept = 0;
  for (std::size_t i = 0; i < out.raw_weights.size(); ++i) {
    if (out.raw_weights[i] > 0.0) {
      out.query.entries[kept] = out.query.entries[i];
      out.raw_weights[kept++] = out.raw_weights[i];
    }
  }
  out.query.entries.resize(kept);
  out.raw_weights.resize(kept);
  double total = 0.0;
  for (double w : out.raw_weights) total += w;
  if (!(total > 0.0)) throw Error(ErrorCode::kEmptyQuery, "all action weights decayed to zero");
  for (std::size_t i = 0; i < out.raw_weights.size(); ++i) {
    out.query.entries[i].weight = out.raw_weights[i] / total;
  }
  return out;
}

}  // namespace pixie
