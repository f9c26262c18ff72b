// Copyright 2026 The Readlevel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "readlevel/dataset.h"

#include <algorithm>

#include "readlevel/error.h"

namespace readlevel {

void Dataset::Add(Instance instance) {
  if (!schema_) schema_ = instance.features.schema_ptr();
  if (instance.features.schema_ptr() != schema_ &&
      instance.features.schema().names() != schema_->names()) {
    throw Error("schema_mismatch",
                "instance " + instance.id + " uses a different feature schema");
  }
  if (!ids_.insert(instance.id).second) {
    throw Error("duplicate_id", "duplicate instance id " + instance.id);
  }
  instances_.push_back(std::move(instance));
}

bool Dataset::Remove(const std::string &id) {
  if (!ids_.erase(id)) return false;
  instances_.erase(std::find_if(instances_.begin(), instances_.end(),
                                [&](const Instance &i) { return i.id == id; }));
  return true;
}

std::vector<int> Dataset::Targets() const {
  std::vector<int> out;
  out.reserve(instances_.size());
  for (const Instance &i : instances_) {
    std::optional<int> t = i.Target();
    if (!t) throw Error("unlabeled_instance", "instance " + i.id + " has no level");
    out.push_back(*t);
  }
  return out;
}

std::map<int, size_t> Dataset::TargetCounts() const {
  std::map<int, size_t> counts;
  for (const Instance &i : instances_) {
    if (auto t = i.Target()) ++counts[*t];
  }
  return counts;
}

Dataset Dataset::Subset(std::span<const size_t> indices) const {
  Dataset out(schema_);
  for (size_t i : indices) out.Add(instances_.at(i));
  return out;
}

Dataset Dataset::Project(const std::vector<std::string> &names) const {
  std::vector<size_t> columns;
  for (const std::string &n : names) {
    auto c = schema_->Find(n);
    if (!c) throw Error("unknown_feature", "unknown feature " + n);
    columns.push_back(*c);
  }
  auto schema = FeatureSchema::Make(names);
  Dataset out(schema);
  for (const Instance &inst : instances_) {
    Instance copy = inst;
    copy.features = FeatureVector(schema);
    for (size_t k = 0; k < columns.size(); ++k) {
      copy.features.Set(k, inst.features.value(columns[k]),
                        inst.features.available(columns[k]));
    }
    out.Add(std::move(copy));
  }
  return out;
}

}  // namespace readlevel
