// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "quenchlab/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "quenchlab/density.hpp"
#include "quenchlab/errors.hpp"

namespace quenchlab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

DisorderCurve disorder_curve(const EnsembleTable& table, Quantity q, int state) {
  const auto& grid = table.h_grid();
  DisorderCurve curve;
  curve.h = grid;
  curve.mean.assign(grid.size(), kNaN);
  curve.std_dev.assign(grid.size(), kNaN);
  curve.effective_r.assign(grid.size(), 0);
  curve.usable.assign(grid.size(), false);
  const int min_r = std::min(10, table.n_realizations());

  for (std::size_t hi = 0; hi < grid.size(); ++hi) {
    std::vector<double> values;
    for (int r = 0; r < table.n_realizations(); ++r) {
      const auto& cell = table.cell(q, state, r, static_cast<int>(hi));
      if (cell.valid && std::isfinite(cell.q_eq)) values.push_back(cell.q_eq);
    }
    curve.effective_r[hi] = static_cast<int>(values.size());
    if (static_cast<int>(values.size()) < std::max(2, min_r)) continue;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    curve.mean[hi] = mean;
    curve.std_dev[hi] = std::sqrt(sq / static_cast<double>(values.size()));
    curve.usable[hi] = true;
  }
  return curve;
}

DisorderCurve average_over_states(std::span<const DisorderCurve> curves) {
  if (curves.empty()) throw ParameterError("average_over_states: no curves");
  const auto& h = curves.front().h;
  for (const auto& c : curves)
    if (c.h != h) throw ParameterError("average_over_states: mismatched h grids");

  DisorderCurve out;
  out.h = h;
  out.mean.assign(h.size(), kNaN);
  out.std_dev.assign(h.size(), kNaN);
  out.effective_r.assign(h.size(), 0);
  out.usable.assign(h.size(), false);
  for (std::size_t i = 0; i < h.size(); ++i) {
    bool all = true;
    double m = 0.0, s = 0.0;
    int eff = std::numeric_limits<int>::max();
    for (const auto& c : curves) {
      all = all && c.usable[i];
      if (!c.usable[i]) continue;
      m += c.mean[i];
      s += c.std_dev[i];
      eff = std::min(eff, c.effective_r[i]);
    }
    if (!all) continue;
    const double n = static_cast<double>(curves.size());
    out.mean[i] = m / n;
    out.std_dev[i] = s / n;
    out.effective_r[i] = eff;
    out.usable[i] = true;
  }
  return out;
}

FittedDistribution fit_distribution(std::span<const double> samples) {
  if (samples.size() < 10)
    throw EstimationError("fit_distribution: need at least 10 samples");
  FittedDistribution out;
  out.samples.assign(samples.begin(), samples.end());
  out.bandwidth = silverman_bandwidth(samples);
  out.grid = kde_grid(samples, out.bandwidth);
  out.density = kde_density(samples, out.bandwidth, out.grid);

  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  const int nbins = std::clamp(static_cast<int>(std::ceil(std::sqrt(
                                   static_cast<double>(samples.size())))),
                               8, 40);
  double a = *lo, b = *hi;
  if (a == b) {
    a -= out.bandwidth;
    b += out.bandwidth;
  }
  out.bin_edges.resize(static_cast<std::size_t>(nbins) + 1);
  for (int i = 0; i <= nbins; ++i)
    out.bin_edges[static_cast<std::size_t>(i)] = a + (b - a) * i / nbins;
  out.bin_counts.assign(static_cast<std::size_t>(nbins), 0.0);
  for (double x : samples) {
    int bin = static_cast<int>((x - a) / (b - a) * nbins);
    bin = std::clamp(bin, 0, nbins - 1);
    out.bin_counts[static_cast<std::size_t>(bin)] += 1.0;
  }
  return out;
}

FittedDistribution fit_distribution(const EnsembleTable& table, Quantity q, int h_index) {
  std::vector<std::vector<double>> per_state(static_cast<std::size_t>(table.n_states()));
  for (int s = 0; s < table.n_states(); ++s) {
    for (int r = 0; r < table.n_realizations(); ++r) {
      const auto& cell = table.cell(q, s, r, h_index);
      if (cell.valid && std::isfinite(cell.q_eq))
        per_state[static_cast<std::size_t>(s)].push_back(cell.q_eq);
    }
    if (per_state[static_cast<std::size_t>(s)].size() < 10)
      throw EstimationError("fit_distribution: fewer than 10 samples for state " +
                            std::to_string(s));
  }

  // Common grid over the pooled range, padded by the widest kernel.
  std::vector<double> pooled;
  for (const auto& v : per_state) pooled.insert(pooled.end(), v.begin(), v.end());
  double bw_max = 0.0;
  std::vector<double> bws;
  for (const auto& v : per_state) {
    bws.push_back(silverman_bandwidth(v));
    bw_max = std::max(bw_max, bws.back());
  }
  FittedDistribution out = fit_distribution(pooled);  // rug + histogram of pooled
  out.bandwidth = bw_max;
  out.grid = kde_grid(pooled, bw_max);
  out.density.assign(out.grid.size(), 0.0);
  for (std::size_t s = 0; s < per_state.size(); ++s) {
    const auto d = kde_density(per_state[s], bws[s], out.grid);
    for (std::size_t g = 0; g < out.grid.size(); ++g)
      out.density[g] += d[g] / static_cast<double>(per_state.size());
  }
  return out;
}

double interquartile_range(const FittedDistribution& dist) {
  const auto& g = dist.grid;
  const auto& f = dist.density;
  if (g.size() < 3) throw ParameterError("interquartile_range: grid too small");
  // Trapezoid CDF, normalized, then inverse by linear interpolation.
  std::vector<double> cdf(g.size(), 0.0);
  for (std::size_t i = 1; i < g.size(); ++i)
    cdf[i] = cdf[i - 1] + 0.5 * (f[i] + f[i - 1]) * (g[i] - g[i - 1]);
  const double total = cdf.back();
  if (!(total > 0.0)) throw EstimationError("interquartile_range: zero-mass density");
  auto quantile = [&](double p) {
    const double target = p * total;
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), target);
    const std::size_t i = std::min(static_cast<std::size_t>(it - cdf.begin()), g.size() - 1);
    if (i == 0) return g.front();
    const double span = cdf[i] - cdf[i - 1];
    const double frac = span > 0.0 ? (target - cdf[i - 1]) / span : 0.0;
    return g[i - 1] + frac * (g[i] - g[i - 1]);
  };
  return quantile(0.75) - quantile(0.25);
}

std::optional<double> find_peak(const DisorderCurve& curve) {
  int usable_points = 0;
  for (bool u : curve.usable) usable_points += u ? 1 : 0;
  if (usable_points < 3)
    throw ParameterError("find_peak: need at least 3 usable grid points");

  double best = -std::numeric_limits<double>::infinity();
  double best_h = kNaN;
  bool flat = true;
  double first = kNaN;
  bool have_first = false;
  for (std::size_t i = 0; i < curve.h.size(); ++i) {
    if (!curve.usable[i]) continue;
    const double v = curve.std_dev[i];
    if (!have_first) {
      first = v;
      have_first = true;
    } else if (v != first) {
      flat = false;
    }
    if (v > best) {  // strict: ties keep the earlier (smaller) h
      best = v;
      best_h = curve.h[i];
    }
  }
  if (flat) return std::nullopt;
  return best_h;
}

double PeakTable::at(Quantity q, int state) const {
  return values.at(static_cast<std::size_t>(q) * n_states + static_cast<std::size_t>(state));
}
double& PeakTable::at(Quantity q, int state) {
  return values.at(static_cast<std::size_t>(q) * n_states + static_cast<std::size_t>(state));
}

double PeakTable::mean(Quantity q) const {
  double acc = 0.0;
  int n = 0;
  for (int s = 0; s < n_states; ++s)
    if (std::isfinite(at(q, s))) {
      acc += at(q, s);
      ++n;
    }
  if (n == 0) throw EstimationError("PeakTable: no entries for quantity");
  return acc / n;
}

double PeakTable::std_dev(Quantity q) const {
  const double m = mean(q);
  double acc = 0.0;
  int n = 0;
  for (int s = 0; s < n_states; ++s)
    if (std::isfinite(at(q, s))) {
      acc += (at(q, s) - m) * (at(q, s) - m);
      ++n;
    }
  return std::sqrt(acc / n);
}

void PeakTable::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("PeakTable: cannot open " + path.string());
  out << "# schema=quenchlab-peaks-v1\n";
  out << "quantity";
  for (int s = 0; s < n_states; ++s) out << ",s" << s;
  out << "\n";
  char buf[32];
  for (Quantity q : kAllQuantities) {
    out << quantity_letter(q);
    for (int s = 0; s < n_states; ++s) {
      std::snprintf(buf, sizeof(buf), "%.17g", at(q, s));
      out << ',' << (std::isfinite(at(q, s)) ? buf : "");
    }
    out << "\n";
  }
}

PeakTable PeakTable::read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("PeakTable: cannot open " + path.string());
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (line.back() == ',') fields.push_back("");
    rows.push_back(fields);
  }
  if (rows.size() != 4)
    throw ParameterError("PeakTable: expected a header plus 3 quantity rows");
  PeakTable t;
  t.n_states = static_cast<int>(rows[0].size()) - 1;
  if (t.n_states < 1) throw ParameterError("PeakTable: no state columns");
  t.values.assign(3 * static_cast<std::size_t>(t.n_states), kNaN);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != t.n_states + 1)
      throw ParameterError("PeakTable: ragged row in " + path.string());
    const Quantity q = quantity_from_letter(rows[r][0].at(0));
    for (int s = 0; s < t.n_states; ++s) {
      const auto& cellstr = rows[r][static_cast<std::size_t>(s) + 1];
      if (!cellstr.empty()) t.at(q, s) = std::stod(cellstr);
    }
  }
  return t;
}

PeakTable peak_table(const EnsembleTable& table) {
  PeakTable t;
  t.n_states = table.n_states();
  t.values.assign(3 * static_cast<std::size_t>(t.n_states), kNaN);
  for (Quantity q : kAllQuantities) {
    for (int s = 0; s < table.n_states(); ++s) {
      const auto curve = disorder_curve(table, q, s);
      if (const auto peak = find_peak(curve)) t.at(q, s) = *peak;
    }
  }
  return t;
}

}  // namespace quenchlab
