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

#ifndef READLEVEL_DATASET_H_
#define READLEVEL_DATASET_H_

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "readlevel/features.h"

namespace readlevel {

struct Instance {
  std::string id;
  std::string source;
  // Gold grade level, 1..5; absent for unlabeled pool documents.
  std::optional<int> level;
  // Label after merging grade levels; training uses it when set.
  std::optional<int> merged_level;
  FeatureVector features;

  std::optional<int> Target() const {
    return merged_level ? merged_level : level;
  }
};

// Instances over one shared feature schema, ids unique.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::shared_ptr<const FeatureSchema> schema)
      : schema_(std::move(schema)) {}

  const std::shared_ptr<const FeatureSchema> &schema_ptr() const {
    return schema_;
  }
  const std::vector<std::string> &feature_names() const {
    return schema_->names();
  }
  size_t feature_count() const { return schema_ ? schema_->size() : 0; }

  size_t size() const { return instances_.size(); }
  bool empty() const { return instances_.empty(); }
  const std::vector<Instance> &instances() const { return instances_; }
  const Instance &operator[](size_t i) const { return instances_[i]; }
  Instance &mutable_instance(size_t i) { return instances_[i]; }

  // Throws on duplicate id or a vector over a different schema.
  void Add(Instance instance);
  bool Contains(const std::string &id) const { return ids_.count(id) > 0; }
  // Removes the instance with `id`; returns false when absent.
  bool Remove(const std::string &id);

  // Training targets; throws when an instance is unlabeled.
  std::vector<int> Targets() const;
  std::map<int, size_t> TargetCounts() const;

  Dataset Subset(std::span<const size_t> indices) const;
  // Keeps only `names`, in the given order.
  Dataset Project(const std::vector<std::string> &names) const;

 private:
  std::shared_ptr<const FeatureSchema> schema_;
  std::vector<Instance> instances_;
  std::set<std::string> ids_;
};

}  // namespace readlevel

#endif  // READLEVEL_DATASET_H_
