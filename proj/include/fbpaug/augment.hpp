#ifndef FBPAUG_AUGMENT_HPP
#define FBPAUG_AUGMENT_HPP

#include "fbpaug/filtering.hpp"
#include "fbpaug/image.hpp"
#include "fbpaug/rng.hpp"
#include "fbpaug/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fbpaug {

enum class NoiseMode { Normalized, Raw };
enum class FlipCoupling { Joint, Independent };
enum class ResampleOrder { Before, After };

/// Sampling ranges and switches for every augmentation family.
struct AugmentConfig {
  bool use_fbpaug = true;
  double p_sharpen = 0.25;
  double p_smooth = 0.25;
  double sharpen_a_min = 10.0, sharpen_a_max = 40.0;
  double sharpen_b_min = 1.0, sharpen_b_max = 4.0;
  double smooth_a_min = -1.0, smooth_a_max = 0.0;
  double smooth_b_min = 0.1, smooth_b_max = 1.0;
  Eigen::Index n_angles = 0;  // 0: one projection per canvas pixel

  bool use_gamma = false;
  double p_gamma = 1.0;
  double gamma_log_std = 0.2;

  bool use_noise = false;
  double p_noise = 1.0;
  double noise_sigma = 0.1;
  NoiseMode noise_mode = NoiseMode::Normalized;

  bool use_windowing = false;
  double p_windowing = 1.0;
  double window_center_min = -700.0, window_center_max = -500.0;
  double window_width_min = 1300.0, window_width_max = 1700.0;

  bool use_flips = true;
  double p_geometric = 0.5;
  FlipCoupling flip_coupling = FlipCoupling::Joint;

  double resample_spacing_mm = 0.0;  // 0: keep native spacing
  ResampleOrder resample_order = ResampleOrder::Before;

  std::uint64_t master_seed = 0;
};

inline void validate(const AugmentConfig& c) {
  auto probability = [](double p, const char* name) {
    require(p >= 0.0 && p <= 1.0, std::string(name) + " must lie in [0, 1]");
  };
  auto range = [](double lo, double hi, const char* name) {
    require(std::isfinite(lo) && std::isfinite(hi) && lo <= hi, std::string(name) + " range is empty");
  };
  probability(c.p_sharpen, "p_sharpen");
  probability(c.p_smooth, "p_smooth");
  probability(c.p_gamma, "p_gamma");
  probability(c.p_noise, "p_noise");
  probability(c.p_windowing, "p_windowing");
  probability(c.p_geometric, "p_geometric");
  require(c.p_sharpen + c.p_smooth <= 1.0, "p_sharpen + p_smooth must not exceed 1");
  range(c.sharpen_a_min, c.sharpen_a_max, "sharpen_a");
  range(c.sharpen_b_min, c.sharpen_b_max, "sharpen_b");
  range(c.smooth_a_min, c.smooth_a_max, "smooth_a");
  range(c.smooth_b_min, c.smooth_b_max, "smooth_b");
  range(c.window_center_min, c.window_center_max, "window_center");
  range(c.window_width_min, c.window_width_max, "window_width");
  require(c.sharpen_b_min > 0.0 && c.smooth_b_min > 0.0, "k_ab exponent ranges must be positive");
  require(c.sharpen_a_min >= -1.0 && c.smooth_a_min >= -1.0, "k_ab sharpness ranges must be >= -1");
  require(c.window_width_min > 0.0, "window width must be positive");
  require(c.gamma_log_std >= 0.0 && c.noise_sigma >= 0.0, "spreads must be non-negative");
  require(c.n_angles >= 0, "n_angles must be non-negative");
  require(c.resample_spacing_mm >= 0.0, "resample spacing must be non-negative");
}

struct KernelDraw {
  enum class Kind { Identity, Sharpen, Smooth };
  Kind kind = Kind::Identity;
  double a = 0.0;
  double b = 1.0;
};

/// One uniform picks the branch; sharpen and smooth then draw a, b in order.
inline KernelDraw sample_fbpaug(RngStream& rng, const AugmentConfig& cfg) {
  const double u = rng.uniform();
  if (u < cfg.p_sharpen) {
    const double a = rng.uniform(cfg.sharpen_a_min, cfg.sharpen_a_max);
    return {KernelDraw::Kind::Sharpen, a, rng.uniform(cfg.sharpen_b_min, cfg.sharpen_b_max)};
  }
  if (u < cfg.p_sharpen + cfg.p_smooth) {
    const double a = rng.uniform(cfg.smooth_a_min, cfg.smooth_a_max);
    return {KernelDraw::Kind::Smooth, a, rng.uniform(cfg.smooth_b_min, cfg.smooth_b_max)};
  }
  return {};
}

/// Median of the outermost ring of pixels; the level treated as "outside the
/// object" when an image is pushed through the Radon transform.
template <typename Scalar>
double border_median(const Image2D<Scalar>& img) {
  std::vector<double> ring;
  const Eigen::Index h = img.height();
  const Eigen::Index w = img.width();
  for (Eigen::Index j = 0; j < w; ++j) {
    ring.push_back(static_cast<double>(img(0, j)));
    if (h > 1) ring.push_back(static_cast<double>(img(h - 1, j)));
  }
  for (Eigen::Index i = 1; i + 1 < h; ++i) {
    ring.push_back(static_cast<double>(img(i, 0)));
    if (w > 1) ring.push_back(static_cast<double>(img(i, w - 1)));
  }
  const auto mid = ring.begin() + static_cast<std::ptrdiff_t>(ring.size() / 2);
  std::nth_element(ring.begin(), mid, ring.end());
  return *mid;
}

struct ReconstructOptions {
  Eigen::Index n_angles = 0;          // 0: padded side length
  std::optional<double> background;   // default: border_median(img)
};

/// Re-reconstructs an image with the given filter: pad, subtract background,
/// Radon, FBP, add background back, crop. Ramp returns approximately the input.
template <typename Scalar>
Image2D<Scalar> reconstruct(const Image2D<Scalar>& img, const FilterSpec& filter,
                            const ReconstructOptions& opts = {}) {
  validate(img);
  require(opts.n_angles >= 0, "n_angles must be non-negative");
  const double bg = opts.background.value_or(border_median(img));
  auto [canvas, rec] = pad_for_radon(img, bg);
  canvas.values -= static_cast<Scalar>(bg);
  const Eigen::Index n_angles = opts.n_angles > 0 ? opts.n_angles : canvas.height();
  const auto sino = radon(canvas, n_angles);
  auto out = fbp(sino, filter, canvas.height(), canvas.width());
  out.values += static_cast<Scalar>(bg);
  out.spacing = img.spacing;
  return crop_after_radon(out, rec);
}

/// Emulates reconstruction with the k_ab kernel. a = 0 takes the exact ramp path.
template <typename Scalar>
Image2D<Scalar> fbpaug(const Image2D<Scalar>& img, double a, double b, Eigen::Index n_angles = 0) {
  return reconstruct(img, FilterSpec::kab(a, b), ReconstructOptions{n_angles, std::nullopt});
}

template <typename Scalar>
std::pair<Scalar, Scalar> min_max(const Image2D<Scalar>& img) {
  return {img.values.minCoeff(), img.values.maxCoeff()};
}

/// ((I - m) / (M - m))^gamma * (M - m) + m with m, M the image extrema.
template <typename Scalar>
Image2D<Scalar> gamma_aug(const Image2D<Scalar>& img, double gamma) {
  require(gamma > 0.0 && std::isfinite(gamma), "gamma must be positive");
  const auto extrema = min_max(img);
  const Scalar hi = extrema.second;
  if (!(hi > extrema.first)) return img;
  const double m = extrema.first;
  const double range = static_cast<double>(hi) - m;
  Image2D<Scalar> out = img;
  out.values = img.values.unaryExpr([&](Scalar v) {
    if (v == hi) return hi;
    return static_cast<Scalar>(std::pow((static_cast<double>(v) - m) / range, gamma) * range + m);
  });
  return out;
}

/// Additive Gaussian noise. In Normalized mode sigma is relative to the image's
/// min-max range; in Raw mode it is in image units.
template <typename Scalar>
Image2D<Scalar> noise_aug(const Image2D<Scalar>& img, RngStream& rng, double sigma = 0.1,
                          NoiseMode mode = NoiseMode::Normalized) {
  require(sigma >= 0.0, "noise sigma must be non-negative");
  double scale = sigma;
  if (mode == NoiseMode::Normalized) {
    const auto extrema = min_max(img);
    scale = sigma * (static_cast<double>(extrema.second) - static_cast<double>(extrema.first));
  }
  Image2D<Scalar> out = img;
  if (scale == 0.0) return out;
  for (Eigen::Index i = 0; i < out.height(); ++i)
    for (Eigen::Index j = 0; j < out.width(); ++j)
      out(i, j) = static_cast<Scalar>(static_cast<double>(out(i, j)) + rng.normal(0.0, scale));
  return out;
}

/// Clips to [center - width / 2, center + width / 2].
template <typename Scalar>
Image2D<Scalar> windowing_aug(const Image2D<Scalar>& img, double center, double width) {
  require(width > 0.0, "window width must be positive");
  Image2D<Scalar> out = img;
  out.values = img.values.max(static_cast<Scalar>(center - 0.5 * width)).min(static_cast<Scalar>(center + 0.5 * width));
  return out;
}

/// Counter-clockwise rotation by k * 90 degrees. For k = 1,
/// out(i, j) = in(j, W - 1 - i).
template <typename Scalar>
Image2D<Scalar> rot90(const Image2D<Scalar>& img, int k) {
  k = ((k % 4) + 4) % 4;
  if (k == 0) return img;
  if (k == 2) {
    return Image2D<Scalar>(img.values.reverse().eval(), img.spacing);
  }
  const Eigen::Index h = img.height();
  const Eigen::Index w = img.width();
  Image2D<Scalar> out(w, h, Spacing{img.spacing.x, img.spacing.y});
  for (Eigen::Index i = 0; i < w; ++i)
    for (Eigen::Index j = 0; j < h; ++j)
      out(i, j) = k == 1 ? img(j, w - 1 - i) : img(h - 1 - j, i);
  return out;
}

/// Horizontal flip mirrors columns, vertical flip mirrors rows.
template <typename Scalar>
Image2D<Scalar> flip(const Image2D<Scalar>& img, bool horizontal) {
  Image2D<Scalar> out = img;
  if (horizontal)
    out.values = img.values.rowwise().reverse().eval();
  else
    out.values = img.values.colwise().reverse().eval();
  return out;
}

/// With probability p: rotate by k * 90 (k uniform in 1..3) and flip
/// horizontally or vertically. Independent coupling tosses one coin for the
/// rotation and another for the flip.
template <typename Scalar>
Image2D<Scalar> flip_rot_aug(const Image2D<Scalar>& img, RngStream& rng, double p = 0.5,
                             FlipCoupling coupling = FlipCoupling::Joint) {
  if (coupling == FlipCoupling::Joint) {
    if (!rng.bernoulli(p)) return img;
    const int k = rng.uniform_int(1, 3);
    const bool horizontal = rng.bernoulli(0.5);
    return flip(rot90(img, k), horizontal);
  }
  Image2D<Scalar> out = img;
  if (rng.bernoulli(p)) out = rot90(out, rng.uniform_int(1, 3));
  if (rng.bernoulli(p)) out = flip(out, rng.bernoulli(0.5));
  return out;
}

/// Bilinear resampling onto round(extent / target) pixels per axis, keeping
/// the field of view's outer edges aligned. Samples beyond the outermost pixel
/// centres clamp to the edge.
template <typename Scalar>
Image2D<Scalar> resample(const Image2D<Scalar>& img, Spacing target) {
  validate(img);
  require(target.y > 0.0 && target.x > 0.0, "target spacing must be positive");
  auto out_size = [](Eigen::Index n, double from, double to) {
    return std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::llround(static_cast<double>(n) * from / to)));
  };
  const Eigen::Index h = out_size(img.height(), img.spacing.y, target.y);
  const Eigen::Index w = out_size(img.width(), img.spacing.x, target.x);
  auto source = [](Eigen::Index idx, double from, double to, Eigen::Index n) {
    const double u = (static_cast<double>(idx) + 0.5) * to / from - 0.5;
    return std::clamp(u, 0.0, static_cast<double>(n - 1));
  };
  Image2D<Scalar> out(h, w, target);
  for (Eigen::Index i = 0; i < h; ++i) {
    const double r = source(i, img.spacing.y, target.y, img.height());
    const auto r0 = static_cast<Eigen::Index>(r);
    const auto r1 = std::min(r0 + 1, img.height() - 1);
    const double fr = r - static_cast<double>(r0);
    for (Eigen::Index j = 0; j < w; ++j) {
      const double c = source(j, img.spacing.x, target.x, img.width());
      const auto c0 = static_cast<Eigen::Index>(c);
      const auto c1 = std::min(c0 + 1, img.width() - 1);
      const double fc = c - static_cast<double>(c0);
      const double top = (1.0 - fc) * static_cast<double>(img(r0, c0)) + fc * static_cast<double>(img(r0, c1));
      const double bot = (1.0 - fc) * static_cast<double>(img(r1, c0)) + fc * static_cast<double>(img(r1, c1));
      out(i, j) = static_cast<Scalar>((1.0 - fr) * top + fr * bot);
    }
  }
  return out;
}

/// What apply_augmentations actually did to one item.
struct AugmentTrace {
  KernelDraw kernel;
  std::optional<double> gamma;
  bool noise = false;
  std::optional<std::pair<double, double>> window;  // (center, width)
};

/// Full sampled augmentation for item `index`, drawn from
/// RngStream(cfg.master_seed, index). Order: resample (Before), rotations and
/// flips, FBPAug, gamma, noise, windowing, resample (After). Each enabled
/// family consumes draws in that order, so results depend only on
/// (image, config, index).
template <typename Scalar>
Image2D<Scalar> apply_augmentations(const Image2D<Scalar>& img, const AugmentConfig& cfg, std::uint64_t index,
                                    AugmentTrace* trace = nullptr) {
  validate(cfg);
  RngStream rng(cfg.master_seed, index);
  AugmentTrace local;
  Image2D<Scalar> out = img;
  const bool resample_on = cfg.resample_spacing_mm > 0.0;
  const Spacing target{cfg.resample_spacing_mm, cfg.resample_spacing_mm};

  if (resample_on && cfg.resample_order == ResampleOrder::Before) out = resample(out, target);
  if (cfg.use_flips) out = flip_rot_aug(out, rng, cfg.p_geometric, cfg.flip_coupling);
  if (cfg.use_fbpaug) {
    local.kernel = sample_fbpaug(rng, cfg);
    if (local.kernel.kind != KernelDraw::Kind::Identity) out = fbpaug(out, local.kernel.a, local.kernel.b, cfg.n_angles);
  }
  if (cfg.use_gamma && rng.bernoulli(cfg.p_gamma)) {
    local.gamma = std::exp(rng.normal(0.0, cfg.gamma_log_std));
    out = gamma_aug(out, *local.gamma);
  }
  if (cfg.use_noise && rng.bernoulli(cfg.p_noise)) {
    local.noise = true;
    out = noise_aug(out, rng, cfg.noise_sigma, cfg.noise_mode);
  }
  if (cfg.use_windowing && rng.bernoulli(cfg.p_windowing)) {
    const double c = rng.uniform(cfg.window_center_min, cfg.window_center_max);
    const double w = rng.uniform(cfg.window_width_min, cfg.window_width_max);
    local.window = {c, w};
    out = windowing_aug(out, c, w);
  }
  if (resample_on && cfg.resample_order == ResampleOrder::After) out = resample(out, target);
  if (trace) *trace = local;
  return out;
}

}  // namespace fbpaug

#endif  // FBPAUG_AUGMENT_HPP
