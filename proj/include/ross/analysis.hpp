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
 * \file analysis.hpp
 * \brief Per-class radar intensity statistics and classical baselines
 *        (global threshold, cell-averaging CFAR with non-maximal suppression).
 */
#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ross/taxonomy.hpp"
#include "ross/types.hpp"

namespace ross {

/// A set of merged classes treated as one, e.g. Ground+Bushes.
using ClassSet = std::set<MergedClass>;

/// Parses "ground", "bushes+obstacles", ... Void is rejected.
ClassSet parse_class_set(std::string_view text);
std::string class_set_name(const ClassSet &set);

/**
 * Intensity histogram with n uniform bins over [0, 65536).
 * Bin i covers [edges[i], edges[i+1]), edges[i] = floor(i * 65536 / n).
 */
struct ClassHistogram {
  ClassSet class_set;
  std::vector<std::uint32_t> bin_edges;  // n + 1 entries, last = 65536
  std::vector<std::uint64_t> counts;     // n entries

  std::size_t n_bins() const { return counts.size(); }
  std::uint64_t total() const;
  /// Bin holding intensity v.
  std::size_t bin_of(std::uint16_t v) const;
  /// Entrywise sum; edges must match.
  void merge(const ClassHistogram &other);
};

/// Zeroed histogram. \throws ConfigError unless 1 <= n_bins <= 65536.
ClassHistogram make_histogram(const ClassSet &set, std::size_t n_bins);

/**
 * Counts intensities of pixels whose label is in the class set. Void-labelled
 * pixels are never counted.
 * \throws ShapeError when bev and labels differ in size.
 */
ClassHistogram intensity_histogram(const BevImage &bev, const LabelImage &labels,
                                   const ClassSet &set, std::size_t n_bins = 256);

/// pixel >= t -> high_class, else low_class.
LabelImage threshold_classify(const BevImage &bev, std::uint16_t t,
                              MergedClass low_class, MergedClass high_class);

struct ThresholdChoice {
  std::uint16_t threshold = 0;
  double balanced_accuracy = 0.0;
};

/**
 * Scans every lower bin edge as threshold t, with `low` predicted below t and
 * `high` at or above it, and returns the one maximizing the mean of the two
 * class recalls (lowest t on ties).
 * \throws ShapeError when edges differ; InsufficientDataError when either
 *         histogram is empty.
 */
ThresholdChoice best_threshold(const ClassHistogram &low,
                               const ClassHistogram &high);

/// Balanced accuracy of threshold t on two histograms; t is applied to the
/// bin lower edges, so it is exact when t is itself an edge.
double balanced_accuracy_at(const ClassHistogram &low, const ClassHistogram &high,
                            std::uint32_t t);

struct CfarParams {
  int guard = 2;
  int train = 8;
  double scale = 3.0;
};

/**
 * Cell-averaging CFAR over one range profile.
 *
 * Cell i is a detection when value(i) > scale * mean(training cells), the
 * training cells being the `train` cells beyond `guard` cells on each side
 * (only the available side near the ends). Detections survive suppression
 * when no other detection within guard + train cells is stronger; equal
 * neighbours resolve to the lower index.
 * \throws InsufficientDataError when row.size() < 2 * (guard + train) + 1;
 *         ConfigError for guard < 0, train < 1 or scale <= 0.
 */
std::vector<int> ca_cfar(std::span<const std::uint16_t> row,
                         const CfarParams &params);

struct CfarDetection {
  int azimuth = 0;
  int range_bin = 0;
  std::uint16_t value = 0;
};

/// ca_cfar applied to every azimuth row of a polar frame.
std::vector<CfarDetection> cfar_frame(const RadarFrame &frame,
                                      const CfarParams &params);

/// Summary statistics of a histogram used by the analysis report.
struct HistogramSummary {
  std::uint64_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double p10 = 0.0;
  double p50 = 0.0;
  double p90 = 0.0;
  double fraction_10k_30k = 0.0;  // mass with intensity in [10000, 30000)
};

HistogramSummary summarize(const ClassHistogram &h);

/// `bin_low,bin_high,count` rows (bin_high exclusive).
std::string histogram_csv(const ClassHistogram &h);

}  // namespace ross
