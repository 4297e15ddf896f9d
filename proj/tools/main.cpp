#include "batch.hpp"

#include "fbpaug/fbpaug.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

namespace {

using namespace fbpaug;
using tools::plan_items;
using tools::run_indexed;
namespace fs = std::filesystem;

// Exit codes. CLI11 usage errors keep CLI11's own codes (>= 100).
enum Exit : int {
  kOk = 0,
  kInvalidArgument = 2,
  kIoError = 3,
  kRimgBase = 2,  // + RimgErrorCode: Io = 3, BadMagic = 4, ... BadMask = 10
  kConfigError = 20,
  kInternalError = 21,
};

unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

Sinogram<double> as_sinogram(RimgContent& content, const fs::path& path) {
  if (auto* s = std::get_if<Sinogram<double>>(&content.object)) return std::move(*s);
  throw RimgError(RimgErrorCode::KindMismatch, path.string() + ": expected a sinogram");
}

/// FBP of a stored sinogram. When the sinogram carries a pad record the result
/// is shifted back by the fill level and cropped to the original frame.
Image2D<double> reconstruct_file(const fs::path& path, const FilterSpec& filter) {
  auto content = read_rimg(path);
  const auto sino = as_sinogram(content, path);
  if (!content.pad) return fbp(sino, filter);
  const auto& rec = *content.pad;
  auto img = fbp(sino, filter, sino.n_detectors(), sino.n_detectors());
  img.values += rec.fill;
  return crop_after_radon(img, rec);
}

FilterSpec parse_filter(const std::string& name, double a, double b) {
  if (name == "ramp") return FilterSpec::ramp();
  if (name == "kab") return FilterSpec::kab(a, b);
  throw std::invalid_argument("unknown filter '" + name + "' (expected ramp or kab)");
}

struct PhantomArgs {
  std::string preset = "shepp-logan";
  long size = 256;
  double spacing = 1.0;
  double radius = 0.8;
  double value = 1.0;
  double noise = 0.0;
  std::uint64_t seed = 0;
  int count = 1;
  std::string out;
};

void run_phantom(const PhantomArgs& a) {
  auto make = [&](std::uint64_t index) {
    Image2D<double> img;
    if (a.preset == "shepp-logan")
      img = shepp_logan(a.size, a.spacing);
    else if (a.preset == "disk")
      img = disk_phantom(a.size, a.radius, a.value, a.spacing);
    else if (a.preset == "lesions")
      img = lesion_phantom(a.size, index, 0.2, 0.6, a.spacing);
    else
      throw std::invalid_argument("unknown preset '" + a.preset + "' (shepp-logan, disk, lesions)");
    return add_noise(img, a.noise, splitmix64(a.seed) + index);
  };
  if (a.count <= 1) {
    write_rimg(make(0), a.out);
    return;
  }
  fs::create_directories(a.out);
  for (int i = 0; i < a.count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "item_%03d.rimg", i);
    write_rimg(make(static_cast<std::uint64_t>(i)), fs::path(a.out) / name);
  }
}

struct RadonArgs {
  std::string in, out, fill = "auto";
  long angles = 0;
  bool no_pad = false;
  unsigned jobs = default_jobs();
};

void radon_file(const RadonArgs& a, const fs::path& in, const fs::path& out) {
  const auto img = read_image(in);
  if (a.no_pad) {
    write_rimg(radon(img, a.angles > 0 ? a.angles : img.height()), out);
    return;
  }
  const double fill = a.fill == "auto" ? border_median(img) : std::stod(a.fill);
  auto [canvas, rec] = pad_for_radon(img, fill);
  canvas.values -= fill;
  write_rimg(radon(canvas, a.angles > 0 ? a.angles : canvas.height()), out, rec);
}

void run_radon(const RadonArgs& a) {
  if (a.fill != "auto") (void)std::stod(a.fill);
  const auto items = plan_items(a.in, a.out);
  run_indexed(items.size(), a.jobs, [&](std::size_t i) { radon_file(a, items[i].input, items[i].output); });
}

struct FbpArgs {
  std::string in, out, filter = "ramp";
  double a = 0.0, b = 1.0;
  unsigned jobs = default_jobs();
};

void run_fbp(const FbpArgs& a) {
  const auto filter = parse_filter(a.filter, a.a, a.b);
  const auto items = plan_items(a.in, a.out);
  run_indexed(items.size(), a.jobs,
              [&](std::size_t i) { write_rimg(reconstruct_file(items[i].input, filter), items[i].output); });
}

struct SegmentArgs {
  std::string in, out;
  double low = 0.4, high = 0.8;
  int min_component = 5;
  unsigned jobs = default_jobs();
};

void run_segment(const SegmentArgs& a) {
  const auto items = plan_items(a.in, a.out);
  run_indexed(items.size(), a.jobs, [&](std::size_t i) {
    write_rimg(threshold_segment(read_image(items[i].input), a.low, a.high, a.min_component), items[i].output);
  });
}

struct PairArgs {
  std::string in, out_soft, out_sharp;
  double soft_a = -1.0, soft_b = 0.7, sharp_a = 30.0, sharp_b = 3.0;
  unsigned jobs = default_jobs();
};

void run_pair(const PairArgs& a) {
  const auto soft = plan_items(a.in, a.out_soft);
  const auto sharp = plan_items(a.in, a.out_sharp);
  const auto soft_filter = FilterSpec::kab(a.soft_a, a.soft_b);
  const auto sharp_filter = FilterSpec::kab(a.sharp_a, a.sharp_b);
  run_indexed(soft.size(), a.jobs, [&](std::size_t i) {
    write_rimg(reconstruct_file(soft[i].input, soft_filter), soft[i].output);
    write_rimg(reconstruct_file(sharp[i].input, sharp_filter), sharp[i].output);
  });
}

struct EvalArgs {
  std::string soft, sharp, csv, report, std_convention = "sample";
};

void run_eval(const EvalArgs& a) {
  std::vector<std::pair<fs::path, fs::path>> files;
  if (fs::is_directory(a.soft)) {
    for (const auto& item : plan_items(a.soft, a.soft)) {
      const fs::path other = fs::path(a.sharp) / item.input.filename();
      if (!fs::exists(other)) throw std::invalid_argument("no sharp mask paired with " + item.input.string());
      files.emplace_back(item.input, other);
    }
  } else {
    files.emplace_back(a.soft, a.sharp);
  }
  if (files.empty()) throw std::invalid_argument("no mask pairs found");

  std::vector<PairRecord> records;
  for (const auto& [s, h] : files) {
    const auto ms = read_mask(s);
    const auto mh = read_mask(h);
    records.push_back({s.stem().string(), lesion_volume(ms), lesion_volume(mh), dice(ms, mh)});
  }
  std::vector<double> dices;
  for (const auto& r : records) dices.push_back(r.dice);
  StdConvention convention = StdConvention::Sample;
  if (a.std_convention == "population")
    convention = StdConvention::Population;
  else if (a.std_convention != "sample")
    throw std::invalid_argument("--std must be sample or population");
  const auto report = consistency_report(dices, convention);
  const auto ba = bland_altman_points(records);

  std::ostringstream text;
  text << "pair_id\tdice\tvolume_soft\tvolume_sharp\n";
  for (const auto& r : records) {
    char line[256];
    std::snprintf(line, sizeof line, "%s\t%.4f\t%.2f\t%.2f\n", r.pair_id.c_str(), r.dice, r.volume_soft,
                  r.volume_sharp);
    text << line;
  }
  char limits[256];
  std::snprintf(limits, sizeof limits, "bland-altman: mean diff %.2f, limits [%.2f, %.2f]\n", ba.mean_diff,
                ba.lower_limit, ba.upper_limit);
  text << limits;
  text << "consistency (dice, mean (std)): " << report.summary() << "\n";
  std::cout << text.str();

  if (!a.report.empty()) {
    std::ofstream os(a.report, std::ios::binary);
    if (!os) throw RimgError(RimgErrorCode::Io, "cannot write " + a.report);
    os << text.str();
  }
  if (!a.csv.empty()) {
    std::ofstream os(a.csv, std::ios::binary);
    if (!os) throw RimgError(RimgErrorCode::Io, "cannot write " + a.csv);
    write_pairs_csv(os, records);
  }
}

struct AugmentArgs {
  std::string in, out, mode = "fbpaug", config;
  std::uint64_t index = 0;
  unsigned jobs = default_jobs();
  bool dump_config = false;
};

void run_augment(const AugmentArgs& a, AugmentConfig cfg) {
  if (a.mode != "pipeline") {
    cfg.use_fbpaug = a.mode == "fbpaug";
    cfg.use_gamma = a.mode == "gamma";
    cfg.use_noise = a.mode == "noise";
    cfg.use_windowing = a.mode == "windowing";
    cfg.use_flips = a.mode == "flips";
    if (!(cfg.use_fbpaug || cfg.use_gamma || cfg.use_noise || cfg.use_windowing || cfg.use_flips))
      throw std::invalid_argument("unknown mode '" + a.mode + "'");
  }
  validate(cfg);
  if (a.dump_config) std::cout << format_config(cfg);
  if (a.in.empty()) return;
  if (a.out.empty()) throw std::invalid_argument("augment needs --output");
  const auto items = plan_items(a.in, a.out);
  const bool single = items.size() == 1 && !fs::is_directory(a.in);
  run_indexed(items.size(), a.jobs, [&](std::size_t i) {
    const auto index = single ? a.index : static_cast<std::uint64_t>(i);
    write_rimg(apply_augmentations(read_image(items[i].input), cfg, index), items[i].output);
  });
}

struct PgmArgs {
  std::string in, out;
  std::optional<double> center, width;
};

void run_export_pgm(const PgmArgs& a) {
  const auto img = read_image(a.in);
  const double lo = img.values.minCoeff();
  const double hi = img.values.maxCoeff();
  const double width = a.width.value_or(hi > lo ? hi - lo : 1.0);
  const double center = a.center.value_or(0.5 * (lo + hi));
  export_pgm(img, a.out, center, width);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CT reconstruction-kernel augmentation toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  PhantomArgs ph;
  auto* phantom = app.add_subcommand("phantom", "Generate a synthetic phantom (RIMG image)");
  phantom->add_option("--preset", ph.preset, "shepp-logan | disk | lesions")->capture_default_str();
  phantom->add_option("--size", ph.size, "Side length in pixels")->capture_default_str();
  phantom->add_option("--spacing", ph.spacing, "Pixel spacing in mm")->capture_default_str();
  phantom->add_option("--radius", ph.radius, "Disk radius as a fraction of half the side")->capture_default_str();
  phantom->add_option("--value", ph.value, "Disk value")->capture_default_str();
  phantom->add_option("--noise", ph.noise, "Gaussian noise sigma")->capture_default_str();
  phantom->add_option("--seed", ph.seed, "Noise seed")->capture_default_str();
  phantom->add_option("--count", ph.count, "Number of items; >1 writes item_NNN.rimg into the output directory")
      ->capture_default_str();
  phantom->add_option("-o,--output", ph.out, "Output file or directory")->required();

  RadonArgs ra;
  auto* radon_cmd = app.add_subcommand("radon", "Parallel-beam Radon transform of an image");
  radon_cmd->add_option("-i,--input", ra.in, "Input image or directory")->required();
  radon_cmd->add_option("-o,--output", ra.out, "Output sinogram or directory")->required();
  radon_cmd->add_option("--angles", ra.angles, "Number of angles over [0, pi); 0 = canvas side")->capture_default_str();
  radon_cmd->add_option("--fill", ra.fill, "Background level: 'auto' (border median) or a number")
      ->capture_default_str();
  radon_cmd->add_flag("--no-pad", ra.no_pad, "Project a square image as is, without padding or background shift");
  radon_cmd->add_option("-j,--jobs", ra.jobs, "Worker threads");

  FbpArgs fa;
  auto* fbp_cmd = app.add_subcommand("fbp", "Filtered back-projection of a sinogram");
  fbp_cmd->add_option("-i,--input", fa.in, "Input sinogram or directory")->required();
  fbp_cmd->add_option("-o,--output", fa.out, "Output image or directory")->required();
  fbp_cmd->add_option("--filter", fa.filter, "ramp | kab")->capture_default_str();
  fbp_cmd->add_option("--a", fa.a, "k_ab sharpness (>= -1)")->capture_default_str();
  fbp_cmd->add_option("--b", fa.b, "k_ab exponent (> 0)")->capture_default_str();
  fbp_cmd->add_option("-j,--jobs", fa.jobs, "Worker threads");

  AugmentArgs au;
  AugmentConfig cfg_override;
  auto* augment = app.add_subcommand("augment", "Seeded augmentation of one image or a directory of images");
  augment->add_option("-i,--input", au.in, "Input image or directory");
  augment->add_option("-o,--output", au.out, "Output image or directory");
  augment->add_option("--mode", au.mode, "fbpaug | gamma | noise | windowing | flips | pipeline")
      ->capture_default_str();
  augment->add_option("--config", au.config, "Flat key = value config file");
  auto* seed_opt = augment->add_option("--seed", cfg_override.master_seed, "Master seed");
  augment->add_option("--index", au.index, "Item index for a single-file input")->capture_default_str();
  augment->add_option("-j,--jobs", au.jobs, "Worker threads");
  augment->add_flag("--dump-config", au.dump_config, "Print the effective config");
  auto* p_sharpen = augment->add_option("--p-sharpen", cfg_override.p_sharpen, "Probability of a sharpening kernel");
  auto* p_smooth = augment->add_option("--p-smooth", cfg_override.p_smooth, "Probability of a smoothing kernel");
  auto* n_angles = augment->add_option("--n-angles", cfg_override.n_angles, "Radon angles; 0 = canvas side");
  auto* noise_sigma = augment->add_option("--noise-sigma", cfg_override.noise_sigma, "Noise sigma");
  std::string noise_mode, flip_coupling, resample_order;
  auto* noise_mode_opt = augment->add_option("--noise-mode", noise_mode, "normalized | raw");
  auto* p_geo = augment->add_option("--p-geometric", cfg_override.p_geometric, "Rotation/flip probability");
  auto* coupling_opt = augment->add_option("--flip-coupling", flip_coupling, "joint | independent");
  auto* resample_opt =
      augment->add_option("--resample-spacing", cfg_override.resample_spacing_mm, "Target spacing in mm; 0 = off");
  auto* order_opt = augment->add_option("--resample-order", resample_order, "before | after");

  PairArgs pa;
  auto* pair = app.add_subcommand("pair", "Reconstruct sinograms with a soft and a sharp kernel");
  pair->add_option("-i,--input", pa.in, "Input sinogram or directory")->required();
  pair->add_option("--out-soft", pa.out_soft, "Soft-kernel output file or directory")->required();
  pair->add_option("--out-sharp", pa.out_sharp, "Sharp-kernel output file or directory")->required();
  pair->add_option("--soft-a", pa.soft_a, "Soft kernel a")->capture_default_str();
  pair->add_option("--soft-b", pa.soft_b, "Soft kernel b")->capture_default_str();
  pair->add_option("--sharp-a", pa.sharp_a, "Sharp kernel a")->capture_default_str();
  pair->add_option("--sharp-b", pa.sharp_b, "Sharp kernel b")->capture_default_str();
  pair->add_option("-j,--jobs", pa.jobs, "Worker threads");

  SegmentArgs sa;
  auto* segment = app.add_subcommand("segment", "Threshold segmentation with small-component removal");
  segment->add_option("-i,--input", sa.in, "Input image or directory")->required();
  segment->add_option("-o,--output", sa.out, "Output mask or directory")->required();
  segment->add_option("--low", sa.low, "Lower threshold (inclusive)")->capture_default_str();
  segment->add_option("--high", sa.high, "Upper threshold (inclusive)")->capture_default_str();
  segment->add_option("--min-component", sa.min_component, "Smallest kept 4-connected component (pixels)")
      ->capture_default_str();
  segment->add_option("-j,--jobs", sa.jobs, "Worker threads");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Paired-mask consistency report and Bland-Altman CSV");
  eval->add_option("--soft", ea.soft, "Soft-kernel mask or directory")->required();
  eval->add_option("--sharp", ea.sharp, "Sharp-kernel mask or directory")->required();
  eval->add_option("--csv", ea.csv, "Bland-Altman CSV output");
  eval->add_option("--report", ea.report, "Text report output");
  eval->add_option("--std", ea.std_convention, "sample | population")->capture_default_str();

  PgmArgs pg;
  auto* pgm = app.add_subcommand("export-pgm", "Window an image into a 16-bit PGM");
  pgm->add_option("-i,--input", pg.in, "Input image")->required();
  pgm->add_option("-o,--output", pg.out, "Output .pgm")->required();
  pgm->add_option("--center", pg.center, "Window centre (default: mid-range)");
  pgm->add_option("--width", pg.width, "Window width (default: full range)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*phantom) run_phantom(ph);
    if (*radon_cmd) run_radon(ra);
    if (*fbp_cmd) run_fbp(fa);
    if (*augment) {
      AugmentConfig cfg = au.config.empty() ? AugmentConfig{} : load_augment_config(au.config);
      std::map<std::string, std::string> kv;
      auto num = [](double v) {
        std::ostringstream s;
        s.precision(17);
        s << v;
        return s.str();
      };
      if (seed_opt->count()) kv["master_seed"] = std::to_string(cfg_override.master_seed);
      if (p_sharpen->count()) kv["p_sharpen"] = num(cfg_override.p_sharpen);
      if (p_smooth->count()) kv["p_smooth"] = num(cfg_override.p_smooth);
      if (n_angles->count()) kv["n_angles"] = std::to_string(cfg_override.n_angles);
      if (noise_sigma->count()) kv["noise_sigma"] = num(cfg_override.noise_sigma);
      if (noise_mode_opt->count()) kv["noise_mode"] = noise_mode;
      if (p_geo->count()) kv["p_geometric"] = num(cfg_override.p_geometric);
      if (coupling_opt->count()) kv["flip_coupling"] = flip_coupling;
      if (resample_opt->count()) kv["resample_spacing_mm"] = num(cfg_override.resample_spacing_mm);
      if (order_opt->count()) kv["resample_order"] = resample_order;
      apply_config(cfg, kv);
      run_augment(au, cfg);
    }
    if (*pair) run_pair(pa);
    if (*segment) run_segment(sa);
    if (*eval) run_eval(ea);
    if (*pgm) run_export_pgm(pg);
  } catch (const RimgError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRimgBase + static_cast<int>(e.code());
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kInvalidArgument;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternalError;
  }
  return kOk;
}
