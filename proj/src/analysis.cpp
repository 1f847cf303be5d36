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

#include "ross/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ross/errors.hpp"

namespace ross {

ClassSet parse_class_set(std::string_view text) {
  ClassSet set;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto plus = text.find('+', pos);
    if (plus == std::string_view::npos) plus = text.size();
    const std::string_view part = text.substr(pos, plus - pos);
    const auto c = parse_merged_class(part);
    if (!c || *c == MergedClass::kVoid) {
      throw ConfigError("unknown class '" + std::string(part) +
                        "' in class set '" + std::string(text) + "'");
    }
    set.insert(*c);
    pos = plus + 1;
  }
  return set;
}

std::string class_set_name(const ClassSet &set) {
  std::string out;
  for (auto c : set) {
    if (!out.empty()) out += '+';
    out += class_name(c);
  }
  return out;
}

std::uint64_t ClassHistogram::total() const {
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

std::size_t ClassHistogram::bin_of(std::uint16_t v) const {
  return static_cast<std::size_t>(
      (static_cast<std::uint64_t>(v) * counts.size()) >> 16);
}

void ClassHistogram::merge(const ClassHistogram &other) {
  if (other.bin_edges != bin_edges) {
    throw ShapeError("cannot merge histograms with different bin edges");
  }
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
}

ClassHistogram make_histogram(const ClassSet &set, std::size_t n_bins) {
  if (n_bins < 1 || n_bins > 65536) {
    throw ConfigError("histogram bin count must be in [1, 65536]");
  }
  ClassHistogram h;
  h.class_set = set;
  h.counts.assign(n_bins, 0);
  h.bin_edges.resize(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i) {
    // Smallest v with bin_of(v) == i.
    h.bin_edges[i] =
        static_cast<std::uint32_t>((static_cast<std::uint64_t>(i) * 65536 + n_bins - 1) / n_bins);
  }
  return h;
}

ClassHistogram intensity_histogram(const BevImage &bev, const LabelImage &labels,
                                   const ClassSet &set, std::size_t n_bins) {
  if (bev.pixels.rows() != labels.classes.rows() ||
      bev.pixels.cols() != labels.classes.cols()) {
    throw ShapeError("BEV image and label image differ in size");
  }
  ClassHistogram h = make_histogram(set, n_bins);
  const auto &values = bev.pixels.data();
  const auto &classes = labels.classes.data();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto c = static_cast<MergedClass>(classes[i]);
    if (c == MergedClass::kVoid || !set.count(c)) continue;
    ++h.counts[h.bin_of(values[i])];
  }
  return h;
}

LabelImage threshold_classify(const BevImage &bev, std::uint16_t t,
                              MergedClass low_class, MergedClass high_class) {
  LabelImage out;
  out.geometry = bev.geometry;
  out.timestamp = bev.timestamp;
  out.classes = Image<std::uint8_t>(bev.pixels.rows(), bev.pixels.cols());
  for (std::size_t i = 0; i < bev.pixels.data().size(); ++i) {
    out.classes.data()[i] =
        to_id(bev.pixels.data()[i] >= t ? high_class : low_class);
  }
  return out;
}

double balanced_accuracy_at(const ClassHistogram &low, const ClassHistogram &high,
                            std::uint32_t t) {
  std::uint64_t low_below = 0, high_above = 0;
  for (std::size_t i = 0; i < low.n_bins(); ++i) {
    if (low.bin_edges[i] < t) {
      low_below += low.counts[i];
    } else {
      high_above += high.counts[i];
    }
  }
  return 0.5 * (static_cast<double>(low_below) / static_cast<double>(low.total()) +
                static_cast<double>(high_above) / static_cast<double>(high.total()));
}

ThresholdChoice best_threshold(const ClassHistogram &low,
                               const ClassHistogram &high) {
  if (low.bin_edges != high.bin_edges) {
    throw ShapeError("best_threshold: histograms have different bin edges");
  }
  const std::uint64_t n_low = low.total();
  const std::uint64_t n_high = high.total();
  if (n_low == 0 || n_high == 0) {
    throw InsufficientDataError("best_threshold: empty histogram");
  }
  // Score = low_below * n_high + high_above * n_low, an exact integer
  // multiple of the balanced accuracy.
  using u128 = unsigned __int128;
  std::uint64_t low_below = 0;
  std::uint64_t high_above = n_high;
  u128 best_score = 0;
  std::size_t best_bin = 0;
  for (std::size_t j = 0; j < low.n_bins(); ++j) {
    const u128 score = static_cast<u128>(low_below) * n_high +
                       static_cast<u128>(high_above) * n_low;
    if (j == 0 || score > best_score) {
      best_score = score;
      best_bin = j;
    }
    low_below += low.counts[j];
    high_above -= high.counts[j];
  }
  ThresholdChoice out;
  out.threshold = static_cast<std::uint16_t>(low.bin_edges[best_bin]);
  out.balanced_accuracy =
      static_cast<double>(best_score) /
      (2.0 * static_cast<double>(n_low) * static_cast<double>(n_high));
  return out;
}

std::vector<int> ca_cfar(std::span<const std::uint16_t> row,
                         const CfarParams &params) {
  const int g = params.guard;
  const int t = params.train;
  if (g < 0 || t < 1 || !(params.scale > 0.0)) {
    throw ConfigError("CFAR needs guard >= 0, train >= 1, scale > 0");
  }
  const long long n = static_cast<long long>(row.size());
  if (n < 2ll * (g + t) + 1) {
    throw InsufficientDataError("CFAR row of length " + std::to_string(n) +
                                " shorter than window " +
                                std::to_string(2 * (g + t) + 1));
  }
  std::vector<std::uint64_t> prefix(row.size() + 1, 0);
  for (std::size_t i = 0; i < row.size(); ++i) prefix[i + 1] = prefix[i] + row[i];
  const auto range_sum = [&](long long b, long long e) -> std::uint64_t {
    b = std::max(b, 0ll);
    e = std::min(e, n);
    return e > b ? prefix[e] - prefix[b] : 0;
  };
  const auto range_len = [&](long long b, long long e) -> long long {
    b = std::max(b, 0ll);
    e = std::min(e, n);
    return e > b ? e - b : 0;
  };

  std::vector<char> detected(row.size(), 0);
  for (long long i = 0; i < n; ++i) {
    const long long lb = i - g - t, le = i - g;
    const long long rb = i + g + 1, re = i + g + t + 1;
    const long long cnt = range_len(lb, le) + range_len(rb, re);
    const std::uint64_t sum = range_sum(lb, le) + range_sum(rb, re);
    const double mean = static_cast<double>(sum) / static_cast<double>(cnt);
    detected[i] = static_cast<double>(row[i]) > params.scale * mean;
  }

  std::vector<int> out;
  const long long w = g + t;
  for (long long i = 0; i < n; ++i) {
    if (!detected[i]) continue;
    bool keep = true;
    for (long long j = std::max(0ll, i - w); j <= std::min(n - 1, i + w); ++j) {
      if (j == i || !detected[j]) continue;
      if (row[j] > row[i] || (row[j] == row[i] && j < i)) {
        keep = false;
        break;
      }
    }
    if (keep) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<CfarDetection> cfar_frame(const RadarFrame &frame,
                                      const CfarParams &params) {
  std::vector<CfarDetection> out;
  for (int a = 0; a < frame.n_azimuth(); ++a) {
    const auto row = frame.energy.row(a);
    for (int b : ca_cfar(row, params)) out.push_back({a, b, row[b]});
  }
  return out;
}

HistogramSummary summarize(const ClassHistogram &h) {
  HistogramSummary s;
  s.count = h.total();
  if (s.count == 0) return s;
  const auto mid = [&](std::size_t i) {
    return 0.5 * (static_cast<double>(h.bin_edges[i]) +
                  static_cast<double>(h.bin_edges[i + 1]) - 1.0);
  };
  double sum = 0.0, sum_sq = 0.0, in_band = 0.0;
  for (std::size_t i = 0; i < h.n_bins(); ++i) {
    const double c = static_cast<double>(h.counts[i]);
    sum += c * mid(i);
    sum_sq += c * mid(i) * mid(i);
    if (mid(i) >= 10000.0 && mid(i) < 30000.0) in_band += c;
  }
  const double n = static_cast<double>(s.count);
  s.mean = sum / n;
  s.stddev = std::sqrt(std::max(0.0, sum_sq / n - s.mean * s.mean));
  s.fraction_10k_30k = in_band / n;
  const auto quantile = [&](double q) {
    const double target = q * n;
    double acc = 0.0;
    for (std::size_t i = 0; i < h.n_bins(); ++i) {
      acc += static_cast<double>(h.counts[i]);
      if (acc >= target) return mid(i);
    }
    return mid(h.n_bins() - 1);
  };
  s.p10 = quantile(0.1);
  s.p50 = quantile(0.5);
  s.p90 = quantile(0.9);
  return s;
}

std::string histogram_csv(const ClassHistogram &h) {
  std::ostringstream os;
  os << "bin_low,bin_high,count\n";
  for (std::size_t i = 0; i < h.n_bins(); ++i) {
    os << h.bin_edges[i] << ',' << h.bin_edges[i + 1] << ',' << h.counts[i]
       << '\n';
  }
  return os.str();
}

}  // namespace ross
