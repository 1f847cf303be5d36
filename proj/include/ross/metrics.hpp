// Copyright 2026, The ROSS Authors
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

/**
 * \file metrics.hpp
 * \brief Confusion matrices and IoU / accuracy reports for BEV label images.
 *
 * Ground-truth Void pixels are not evaluated. Class groupings realize the
 * three output configurations:
 *   cls3   : Ground | Bushes | Obstacles
 *   cls2-1 : Ground | Bushes+Obstacles
 *   cls2-2 : Ground+Bushes | Obstacles
 */
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ross/taxonomy.hpp"
#include "ross/types.hpp"

namespace ross {

enum class MergeMode { kCls3, kCls2_1, kCls2_2 };

MergeMode parse_merge_mode(std::string_view text);
std::string_view merge_mode_name(MergeMode mode);

/// Partition of {Ground, Bushes, Obstacles} into evaluation classes.
struct ClassGrouping {
  std::vector<std::vector<MergedClass>> groups;

  static ClassGrouping for_mode(MergeMode mode);
  std::size_t size() const { return groups.size(); }
  std::vector<std::string> names() const;
  /// Group index of `c`; nullopt for Void or classes in no group.
  std::optional<std::size_t> group_of(MergedClass c) const;
  /// \throws ConfigError unless the groups partition Ground/Bushes/Obstacles.
  void validate() const;
};

/**
 * K x K counts, rows = ground truth, columns = prediction. `rejected[k]`
 * counts ground-truth class k pixels predicted as Void (only when allowed).
 */
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::vector<std::string> class_names);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string> &class_names() const { return names_; }

  std::uint64_t &at(std::size_t gt, std::size_t pred) {
    return counts_[gt * size() + pred];
  }
  std::uint64_t at(std::size_t gt, std::size_t pred) const {
    return counts_[gt * size() + pred];
  }
  std::uint64_t &rejected(std::size_t gt) { return rejected_[gt]; }
  std::uint64_t rejected(std::size_t gt) const { return rejected_[gt]; }

  std::uint64_t row_sum(std::size_t gt) const;  // includes rejected
  std::uint64_t col_sum(std::size_t pred) const;
  std::uint64_t total() const;

  ConfusionMatrix &operator+=(const ConfusionMatrix &other);
  ConfusionMatrix transposed() const;

  /// Header row of class names, then one row per ground-truth class.
  std::string to_csv() const;

  friend bool operator==(const ConfusionMatrix &, const ConfusionMatrix &) =
      default;

 private:
  std::vector<std::string> names_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> rejected_;
};

struct ConfusionOptions {
  /// Count Void predictions over non-Void ground truth as rejected instead
  /// of failing.
  bool allow_void_prediction = false;
};

/**
 * \throws ShapeError on size mismatch; FormatError when a prediction is Void
 *         over non-Void ground truth and that is not allowed.
 */
ConfusionMatrix confusion(const LabelImage &pred, const LabelImage &gt,
                          const ClassGrouping &grouping,
                          const ConfusionOptions &opts = {});

/// Sum of per-pair confusion matrices. Integer sums, so any `jobs` gives the
/// same matrix.
ConfusionMatrix accumulate_confusion(std::span<const LabelImage> preds,
                                     std::span<const LabelImage> gts,
                                     const ClassGrouping &grouping, int jobs = 1,
                                     const ConfusionOptions &opts = {});

struct MetricReport {
  std::vector<std::string> class_names;
  std::vector<std::optional<double>> per_class_iou;
  std::vector<std::optional<double>> per_class_accuracy;  // recall
  double miou = 0.0;
  double macc = 0.0;
  std::vector<std::uint64_t> gt_pixels;
  std::vector<std::uint64_t> pred_pixels;
  std::uint64_t total_pixels = 0;

  std::string to_text() const;
};

/// Mean of the defined entries. \throws EmptyEvaluationError if none are.
double mean_of_defined(std::span<const std::optional<double>> values);

/**
 * IoU_c = tp / (row + col - tp), accuracy_c = tp / row. A class with an
 * empty row and column is undefined for both and left out of the means; a
 * class with an empty row has undefined accuracy.
 * \throws EmptyEvaluationError when no class is defined.
 */
MetricReport iou_report(const ConfusionMatrix &cm);

/**
 * Sums rows and columns of `cm` per group. `groups` lists, for each output
 * class, the indices of the input classes it merges.
 * \throws ConfigError unless `groups` partitions 0..K-1.
 */
ConfusionMatrix merge_report_classes(const ConfusionMatrix &cm,
                                     const std::vector<std::vector<std::size_t>> &groups,
                                     std::vector<std::string> names = {});

}  // namespace ross
