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

#pragma once

#include <string>
#include <vector>

#include "pixie/id_map.hpp"
#include "pixie/walk.hpp"

namespace pixie {

enum class ActionType { kClick, kLike, kSave };

// Parses "click" / "like" / "save"; throws Error(kValidation) otherwise.
ActionType parse_action_type(const std::string& name);

struct UserAction {
  std::string pin_key;
  ActionType type = ActionType::kSave;
  double age_seconds = 0.0;
};

// Base weight per action type before decay. The defaults are arbitrary.
struct ActionWeights {
  double click = 0.25;
  double like = 0.5;
  double save = 1.0;

  double of(ActionType t) const;
};

// w0 * 2^(-age / half_life). Throws Error(kConfig) for half_life <= 0.
double decayed_weight(double w0, double age_seconds, double half_life_seconds);

struct BuiltQuery {
  WeightedQuery query;                    // weights normalized to sum 1
  std::vector<double> raw_weights;        // pre-normalization, aligned with query.entries
  std::vector<std::string> dropped_keys;  // not in the graph (or isolated there)
};

// Sums decayed weights per pin. Pins the graph does not know are dropped and
// reported; if none survive, throws Error(kEmptyQuery). Entries are ordered by
// first appearance in `actions`.
BuiltQuery build_query_from_actions(const std::vector<UserAction>& actions,
                                    const ActionWeights& weights, double half_life_seconds,
                                    const IdMap& ids, const BipartiteGraph& graph);

}  // namespace pixie
