#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "teaser/rng.hpp"

namespace teaser::detail {

// Fold assignment for slave hyper-parameter selection. Stratified 10-fold
// when every class has at least 10 members, leave-one-out when every class
// has at least 2, empty otherwise (the caller falls back to defaults).
struct FoldPlan {
  std::size_t num_folds = 0;
  std::vector<std::size_t> fold_of;  // per sample, valid when num_folds > 0

  bool usable() const { return num_folds >= 2; }
};

inline FoldPlan make_folds(const std::vector<std::size_t>& labels,
                           std::size_t num_classes, Rng& rng) {
  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  std::size_t min_count = labels.size();
  for (const auto& members : by_class) min_count = std::min(min_count, members.size());

  FoldPlan plan;
  if (min_count < 2) return plan;

  if (min_count < 10) {
    plan.num_folds = labels.size();  // leave-one-out
    plan.fold_of.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) plan.fold_of[i] = i;
    return plan;
  }

  plan.num_folds = 10;
  plan.fold_of.assign(labels.size(), 0);
  for (auto& members : by_class) {
    rng.shuffle(members);
    for (std::size_t j = 0; j < members.size(); ++j) {
      plan.fold_of[members[j]] = j % plan.num_folds;
    }
  }
  return plan;
}

}  // namespace teaser::detail
