#ifndef FBPAUG_METRICS_HPP
#define FBPAUG_METRICS_HPP

#include "fbpaug/image.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fbpaug {

/// 2|X n Y| / (|X| + |Y|); 1.0 when both masks are empty.
double dice(const Mask& x, const Mask& y);

/// Positive pixel count times pixel area (mm^2).
double lesion_volume(const Mask& m);

/// Stacked slices: sum of slice areas times slice thickness (mm^3).
double lesion_volume(std::span<const Mask> slices, double slice_thickness_mm);

struct PairRecord {
  std::string pair_id;
  double volume_soft = 0.0;
  double volume_sharp = 0.0;
  double dice = 0.0;
};

struct BlandAltmanPoint {
  double mean = 0.0;
  double diff = 0.0;  // soft - sharp
};

struct BlandAltman {
  std::vector<BlandAltmanPoint> points;
  double mean_diff = 0.0;
  double lower_limit = 0.0;  // mean_diff - 1.96 sd (sample sd)
  double upper_limit = 0.0;
};

/// Differences are always volume_soft - volume_sharp.
BlandAltman bland_altman_points(std::span<const PairRecord> pairs);

/// CSV with header `pair_id,mean_volume,diff_volume,dice`, LF line endings.
void write_pairs_csv(std::ostream& os, std::span<const PairRecord> pairs);

enum class WilcoxonMethod { Auto, Exact, Normal };

struct WilcoxonResult {
  double statistic = 0.0;  // W+, the sum of ranks of positive differences
  int n_nonzero = 0;
  double p_value = 1.0;
  bool exact = false;
};

/// Paired one-sided signed-rank test of the alternative x > y. Zero
/// differences are dropped and ties get mid-ranks. Auto uses the exact null
/// distribution for up to 20 nonzero pairs, otherwise the normal approximation
/// with tie and continuity corrections.
WilcoxonResult wilcoxon_one_sided(std::span<const double> x, std::span<const double> y,
                                  WilcoxonMethod method = WilcoxonMethod::Auto);

/// min(1, p * m) for each p.
std::vector<double> bonferroni(std::span<const double> p_values, int m);

/// Pixels in [low, high], with 4-connected components smaller than
/// min_component_px removed.
template <typename Scalar>
Mask threshold_segment(const Image2D<Scalar>& img, double low, double high, int min_component_px);

Mask remove_small_components(const Mask& m, int min_component_px);

enum class StdConvention { Sample, Population };

struct ConsistencyReport {
  std::vector<double> dice;
  double mean = 0.0;
  double std = 0.0;

  /// "0.92 (0.05)"
  std::string summary() const;
};

ConsistencyReport consistency_report(std::span<const double> dice_values,
                                     StdConvention convention = StdConvention::Sample);
ConsistencyReport consistency_report(std::span<const std::pair<Mask, Mask>> pairs,
                                     StdConvention convention = StdConvention::Sample);

template <typename Scalar>
Mask threshold_segment(const Image2D<Scalar>& img, double low, double high, int min_component_px) {
  require(low < high, "threshold_segment needs low < high");
  Mask m(img.height(), img.width(), img.spacing);
  m.values = ((img.values.template cast<double>() >= low) && (img.values.template cast<double>() <= high))
                 .template cast<std::uint8_t>();
  return remove_small_components(m, min_component_px);
}

}  // namespace fbpaug

#endif  // FBPAUG_METRICS_HPP
