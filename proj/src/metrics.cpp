#include "fbpaug/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace fbpaug {

double dice(const Mask& x, const Mask& y) {
  require(x.height() == y.height() && x.width() == y.width(), "dice needs masks of equal shape");
  const auto nx = x.count();
  const auto ny = y.count();
  if (nx + ny == 0) return 1.0;
  const auto both = ((x.values != 0) && (y.values != 0)).count();
  return 2.0 * static_cast<double>(both) / static_cast<double>(nx + ny);
}

double lesion_volume(const Mask& m) {
  return static_cast<double>(m.count()) * m.spacing.y * m.spacing.x;
}

double lesion_volume(std::span<const Mask> slices, double slice_thickness_mm) {
  require(slice_thickness_mm > 0.0, "slice thickness must be positive");
  double area = 0.0;
  for (const auto& s : slices) area += lesion_volume(s);
  return area * slice_thickness_mm;
}

namespace {

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double std_of(std::span<const double> v, double mean, StdConvention convention) {
  const auto n = static_cast<double>(v.size());
  const double dof = convention == StdConvention::Sample ? n - 1.0 : n;
  if (dof <= 0.0) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / dof);
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

BlandAltman bland_altman_points(std::span<const PairRecord> pairs) {
  require(!pairs.empty(), "bland_altman_points needs at least one pair");
  BlandAltman ba;
  std::vector<double> diffs;
  for (const auto& p : pairs) {
    const double diff = p.volume_soft - p.volume_sharp;
    ba.points.push_back({0.5 * (p.volume_soft + p.volume_sharp), diff});
    diffs.push_back(diff);
  }
  ba.mean_diff = mean_of(diffs);
  const double sd = std_of(diffs, ba.mean_diff, StdConvention::Sample);
  ba.lower_limit = ba.mean_diff - 1.96 * sd;
  ba.upper_limit = ba.mean_diff + 1.96 * sd;
  return ba;
}

void write_pairs_csv(std::ostream& os, std::span<const PairRecord> pairs) {
  os << "pair_id,mean_volume,diff_volume,dice\n";
  for (const auto& p : pairs) {
    os << p.pair_id << ',' << format_number(0.5 * (p.volume_soft + p.volume_sharp)) << ','
       << format_number(p.volume_soft - p.volume_sharp) << ',' << format_number(p.dice) << '\n';
  }
}

WilcoxonResult wilcoxon_one_sided(std::span<const double> x, std::span<const double> y, WilcoxonMethod method) {
  require(x.size() == y.size(), "wilcoxon needs paired samples of equal length");
  require(x.size() >= 5, "wilcoxon needs at least five pairs");

  std::vector<double> d;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = x[i] - y[i];
    if (diff != 0.0) d.push_back(diff);
  }
  if (d.empty()) throw std::invalid_argument("wilcoxon is undefined when every difference is zero");

  const auto n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return std::abs(d[a]) < std::abs(d[b]); });

  // Mid-ranks, stored doubled so they stay integral.
  std::vector<long> rank2(n);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    const auto t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = static_cast<long>(i + j + 2);
    i = j + 1;
  }

  long w2 = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (d[i] > 0) w2 += rank2[i];

  WilcoxonResult r;
  r.statistic = 0.5 * static_cast<double>(w2);
  r.n_nonzero = static_cast<int>(n);
  r.exact = method == WilcoxonMethod::Exact || (method == WilcoxonMethod::Auto && n <= 20);

  if (r.exact) {
    // Null distribution of the doubled W+ under independent fair signs.
    const long total = std::accumulate(rank2.begin(), rank2.end(), 0L);
    std::vector<double> prob(static_cast<std::size_t>(total) + 1, 0.0);
    prob[0] = 1.0;
    long reach = 0;
    for (long r2 : rank2) {
      for (long s = reach; s >= 0; --s) {
        const double p = prob[static_cast<std::size_t>(s)];
        if (p == 0.0) continue;
        prob[static_cast<std::size_t>(s)] = 0.5 * p;
        prob[static_cast<std::size_t>(s + r2)] += 0.5 * p;
      }
      reach += r2;
    }
    double tail = 0.0;
    for (long s = w2; s <= total; ++s) tail += prob[static_cast<std::size_t>(s)];
    r.p_value = std::min(1.0, tail);
    return r;
  }

  const auto nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
  if (var <= 0.0) throw std::invalid_argument("wilcoxon variance vanished");
  const double z = (r.statistic - mean - 0.5) / std::sqrt(var);
  r.p_value = 0.5 * std::erfc(z / std::sqrt(2.0));
  return r;
}

std::vector<double> bonferroni(std::span<const double> p_values, int m) {
  require(!p_values.empty(), "bonferroni needs at least one p-value");
  require(m >= static_cast<int>(p_values.size()), "bonferroni needs m >= number of p-values");
  std::vector<double> out;
  out.reserve(p_values.size());
  for (double p : p_values) out.push_back(std::min(1.0, p * static_cast<double>(m)));
  return out;
}

Mask remove_small_components(const Mask& m, int min_component_px) {
  Mask out = m;
  if (min_component_px <= 1) return out;
  const Eigen::Index h = m.height();
  const Eigen::Index w = m.width();
  Grid<std::uint8_t> seen = Grid<std::uint8_t>::Zero(h, w);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> component;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> stack;
  for (Eigen::Index i = 0; i < h; ++i) {
    for (Eigen::Index j = 0; j < w; ++j) {
      if (m.values(i, j) == 0 || seen(i, j)) continue;
      component.clear();
      stack.assign(1, {i, j});
      seen(i, j) = 1;
      while (!stack.empty()) {
        const auto [r, c] = stack.back();
        stack.pop_back();
        component.emplace_back(r, c);
        const std::pair<Eigen::Index, Eigen::Index> next[4] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
        for (const auto& [nr, nc] : next) {
          if (nr < 0 || nc < 0 || nr >= h || nc >= w) continue;
          if (m.values(nr, nc) == 0 || seen(nr, nc)) continue;
          seen(nr, nc) = 1;
          stack.emplace_back(nr, nc);
        }
      }
      if (static_cast<long>(component.size()) < min_component_px) {
        for (const auto& [r, c] : component) out.values(r, c) = 0;
      }
    }
  }
  return out;
}

std::string ConsistencyReport::summary() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f (%.2f)", mean, std);
  return buf;
}

ConsistencyReport consistency_report(std::span<const double> dice_values, StdConvention convention) {
  require(!dice_values.empty(), "consistency_report needs at least one pair");
  ConsistencyReport rep;
  rep.dice.assign(dice_values.begin(), dice_values.end());
  rep.mean = mean_of(dice_values);
  rep.std = std_of(dice_values, rep.mean, convention);
  return rep;
}

ConsistencyReport consistency_report(std::span<const std::pair<Mask, Mask>> pairs, StdConvention convention) {
  require(!pairs.empty(), "consistency_report needs at least one pair");
  std::vector<double> values;
  values.reserve(pairs.size());
  for (const auto& [a, b] : pairs) values.push_back(dice(a, b));
  return consistency_report(values, convention);
}

}  // namespace fbpaug
