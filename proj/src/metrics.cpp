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

#include "ross/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "ross/errors.hpp"
#include "ross/parallel.hpp"

namespace ross {

MergeMode parse_merge_mode(std::string_view text) {
  if (text == "cls3") return MergeMode::kCls3;
  if (text == "cls2-1") return MergeMode::kCls2_1;
  if (text == "cls2-2") return MergeMode::kCls2_2;
  throw ConfigError("unknown merge mode '" + std::string(text) +
                    "' (expected cls3, cls2-1 or cls2-2)");
}

std::string_view merge_mode_name(MergeMode mode) {
  switch (mode) {
    case MergeMode::kCls3:
      return "cls3";
    case MergeMode::kCls2_1:
      return "cls2-1";
    case MergeMode::kCls2_2:
      return "cls2-2";
  }
  return "cls3";
}

ClassGrouping ClassGrouping::for_mode(MergeMode mode) {
  using M = MergedClass;
  switch (mode) {
    case MergeMode::kCls3:
      return {{{M::kGround}, {M::kBushes}, {M::kObstacles}}};
    case MergeMode::kCls2_1:
      return {{{M::kGround}, {M::kBushes, M::kObstacles}}};
    case MergeMode::kCls2_2:
      return {{{M::kGround, M::kBushes}, {M::kObstacles}}};
  }
  return {};
}

std::vector<std::string> ClassGrouping::names() const {
  std::vector<std::string> out;
  for (const auto &g : groups) {
    std::string name;
    for (auto c : g) {
      if (!name.empty()) name += '+';
      name += class_name(c);
    }
    out.push_back(name);
  }
  return out;
}

std::optional<std::size_t> ClassGrouping::group_of(MergedClass c) const {
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (std::find(groups[g].begin(), groups[g].end(), c) != groups[g].end()) {
      return g;
    }
  }
  return std::nullopt;
}

void ClassGrouping::validate() const {
  int seen[kNumMergedClasses] = {0};
  for (const auto &g : groups) {
    if (g.empty()) throw ConfigError("class grouping has an empty group");
    for (auto c : g) {
      if (c == MergedClass::kVoid) throw ConfigError("Void cannot be grouped");
      ++seen[to_id(c)];
    }
  }
  for (int id = 1; id < kNumMergedClasses; ++id) {
    if (seen[id] != 1) {
      throw ConfigError("class grouping must contain each non-Void class once");
    }
  }
}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> class_names)
    : names_(std::move(class_names)),
      counts_(names_.size() * names_.size(), 0),
      rejected_(names_.size(), 0) {}

std::uint64_t ConfusionMatrix::row_sum(std::size_t gt) const {
  std::uint64_t s = rejected_[gt];
  for (std::size_t p = 0; p < size(); ++p) s += at(gt, p);
  return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t pred) const {
  std::uint64_t s = 0;
  for (std::size_t g = 0; g < size(); ++g) s += at(g, pred);
  return s;
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t s = 0;
  for (auto v : counts_) s += v;
  for (auto v : rejected_) s += v;
  return s;
}

ConfusionMatrix &ConfusionMatrix::operator+=(const ConfusionMatrix &other) {
  if (other.names_ != names_) {
    throw ShapeError("cannot add confusion matrices over different classes");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  for (std::size_t i = 0; i < rejected_.size(); ++i) {
    rejected_[i] += other.rejected_[i];
  }
  return *this;
}

ConfusionMatrix ConfusionMatrix::transposed() const {
  ConfusionMatrix t(names_);
  for (std::size_t g = 0; g < size(); ++g) {
    for (std::size_t p = 0; p < size(); ++p) t.at(p, g) = at(g, p);
  }
  return t;
}

std::string ConfusionMatrix::to_csv() const {
  std::ostringstream os;
  os << "gt\\pred";
  for (const auto &n : names_) os << ',' << n;
  const bool any_rejected =
      std::any_of(rejected_.begin(), rejected_.end(), [](auto v) { return v; });
  if (any_rejected) os << ",Rejected";
  os << '\n';
  for (std::size_t g = 0; g < size(); ++g) {
    os << names_[g];
    for (std::size_t p = 0; p < size(); ++p) os << ',' << at(g, p);
    if (any_rejected) os << ',' << rejected_[g];
    os << '\n';
  }
  return os.str();
}

ConfusionMatrix confusion(const LabelImage &pred, const LabelImage &gt,
                          const ClassGrouping &grouping,
                          const ConfusionOptions &opts) {
  grouping.validate();
  if (pred.classes.rows() != gt.classes.rows() ||
      pred.classes.cols() != gt.classes.cols()) {
    throw ShapeError("prediction and ground truth differ in size");
  }
  ConfusionMatrix cm(grouping.names());
  // Lookup from merged id to group index.
  int group[kNumMergedClasses] = {-1, -1, -1, -1};
  for (int id = 1; id < kNumMergedClasses; ++id) {
    group[id] = static_cast<int>(*grouping.group_of(static_cast<MergedClass>(id)));
  }
  const auto &p = pred.classes.data();
  const auto &g = gt.classes.data();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] >= kNumMergedClasses || p[i] >= kNumMergedClasses) {
      throw FormatError("label value outside 0..3 at pixel " + std::to_string(i));
    }
    if (g[i] == 0) continue;
    const auto gi = static_cast<std::size_t>(group[g[i]]);
    if (p[i] == 0) {
      if (!opts.allow_void_prediction) {
        throw FormatError("prediction is Void over labelled ground truth at pixel " +
                          std::to_string(i));
      }
      ++cm.rejected(gi);
      continue;
    }
    ++cm.at(gi, static_cast<std::size_t>(group[p[i]]));
  }
  return cm;
}

ConfusionMatrix accumulate_confusion(std::span<const LabelImage> preds,
                                     std::span<const LabelImage> gts,
                                     const ClassGrouping &grouping, int jobs,
                                     const ConfusionOptions &opts) {
  if (preds.size() != gts.size()) {
    throw ShapeError("prediction and ground-truth sets differ in length");
  }
  const std::size_t k = chunk_count(preds.size(), jobs);
  std::vector<ConfusionMatrix> partial(k, ConfusionMatrix(grouping.names()));
  parallel_chunks(preds.size(), jobs,
                  [&](std::size_t c, std::size_t begin, std::size_t end) {
                    for (std::size_t i = begin; i < end; ++i) {
                      partial[c] += confusion(preds[i], gts[i], grouping, opts);
                    }
                  });
  ConfusionMatrix total(grouping.names());
  for (const auto &p : partial) total += p;
  return total;
}

double mean_of_defined(std::span<const std::optional<double>> values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto &v : values) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) throw EmptyEvaluationError("no defined class to average");
  return sum / static_cast<double>(n);
}

MetricReport iou_report(const ConfusionMatrix &cm) {
  MetricReport r;
  r.class_names = cm.class_names();
  for (std::size_t c = 0; c < cm.size(); ++c) {
    const std::uint64_t tp = cm.at(c, c);
    const std::uint64_t row = cm.row_sum(c);
    const std::uint64_t col = cm.col_sum(c);
    r.gt_pixels.push_back(row);
    r.pred_pixels.push_back(col);
    if (row == 0 && col == 0) {
      r.per_class_iou.push_back(std::nullopt);
    } else {
      r.per_class_iou.push_back(static_cast<double>(tp) /
                                static_cast<double>(row + col - tp));
    }
    if (row == 0) {
      r.per_class_accuracy.push_back(std::nullopt);
    } else {
      r.per_class_accuracy.push_back(static_cast<double>(tp) /
                                     static_cast<double>(row));
    }
  }
  r.total_pixels = cm.total();
  if (std::none_of(r.per_class_iou.begin(), r.per_class_iou.end(),
                   [](const auto &v) { return v.has_value(); })) {
    throw EmptyEvaluationError("evaluation contains no labelled pixels");
  }
  r.miou = mean_of_defined(r.per_class_iou);
  r.macc = mean_of_defined(r.per_class_accuracy);
  return r;
}

std::string MetricReport::to_text() const {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-20s %10s %10s %12s %12s\n", "class",
                "IoU(%)", "Acc(%)", "gt_pixels", "pred_pixels");
  os << buf;
  const auto pct = [](const std::optional<double> &v) {
    char b[32];
    if (v) {
      std::snprintf(b, sizeof(b), "%.2f", 100.0 * *v);
    } else {
      std::snprintf(b, sizeof(b), "undefined");
    }
    return std::string(b);
  };
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    std::snprintf(buf, sizeof(buf), "%-20s %10s %10s %12llu %12llu\n",
                  class_names[c].c_str(), pct(per_class_iou[c]).c_str(),
                  pct(per_class_accuracy[c]).c_str(),
                  static_cast<unsigned long long>(gt_pixels[c]),
                  static_cast<unsigned long long>(pred_pixels[c]));
    os << buf;
  }
  std::snprintf(buf, sizeof(buf), "mIoU(%%) %.2f\nmAcc(%%) %.2f\npixels %llu\n",
                100.0 * miou, 100.0 * macc,
                static_cast<unsigned long long>(total_pixels));
  os << buf;
  return os.str();
}

ConfusionMatrix merge_report_classes(
    const ConfusionMatrix &cm, const std::vector<std::vector<std::size_t>> &groups,
    std::vector<std::string> names) {
  std::vector<int> owner(cm.size(), -1);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw ConfigError("merge group is empty");
    for (auto idx : groups[g]) {
      if (idx >= cm.size() || owner[idx] != -1) {
        throw ConfigError("merge groups must partition the class indices");
      }
      owner[idx] = static_cast<int>(g);
    }
  }
  if (std::find(owner.begin(), owner.end(), -1) != owner.end()) {
    throw ConfigError("merge groups must cover every class");
  }
  if (names.empty()) {
    for (const auto &g : groups) {
      std::string name;
      for (auto idx : g) {
        if (!name.empty()) name += '+';
        name += cm.class_names()[idx];
      }
      names.push_back(name);
    }
  }
  if (names.size() != groups.size()) {
    throw ConfigError("one name per merge group required");
  }
  ConfusionMatrix out(std::move(names));
  for (std::size_t g = 0; g < cm.size(); ++g) {
    out.rejected(owner[g]) += cm.rejected(g);
    for (std::size_t p = 0; p < cm.size(); ++p) {
      out.at(owner[g], owner[p]) += cm.at(g, p);
    }
  }
  return out;
}

}  // namespace ross
