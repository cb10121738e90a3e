// Copyright 2026 the quenchlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "quenchlab/ensemble.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "quenchlab/errors.hpp"

namespace quenchlab {

char quantity_letter(Quantity q) {
  switch (q) {
    case Quantity::kAutoCorrelation: return 'C';
    case Quantity::kNumberEntropy: return 'S';
    case Quantity::kHammingDistance: return 'D';
  }
  throw ParameterError("quantity_letter: unknown quantity");
}

Quantity quantity_from_letter(char c) {
  switch (c) {
    case 'C': return Quantity::kAutoCorrelation;
    case 'S': return Quantity::kNumberEntropy;
    case 'D': return Quantity::kHammingDistance;
  }
  throw ParameterError(std::string("quantity_from_letter: unknown letter '") + c + "'");
}

EnsembleTable::EnsembleTable(int n_states, int n_realizations, std::vector<double> h_grid)
    : n_states_(n_states), n_realizations_(n_realizations), h_grid_(std::move(h_grid)) {
  if (n_states_ < 1 || n_realizations_ < 1 || h_grid_.empty())
    throw ParameterError("EnsembleTable: empty axis");
  cells_.resize(3 * static_cast<std::size_t>(n_states_) * n_realizations_ * h_grid_.size());
}

std::size_t EnsembleTable::index(Quantity q, int state, int realization, int h_index) const {
  if (state < 0 || state >= n_states_ || realization < 0 ||
      realization >= n_realizations_ || h_index < 0 ||
      h_index >= static_cast<int>(h_grid_.size()))
    throw ParameterError("EnsembleTable: key out of range");
  return ((static_cast<std::size_t>(q) * n_states_ + state) * n_realizations_ +
          realization) *
             h_grid_.size() +
         static_cast<std::size_t>(h_index);
}

EnsembleCell& EnsembleTable::cell(Quantity q, int state, int realization, int h_index) {
  return cells_[index(q, state, realization, h_index)];
}
const EnsembleCell& EnsembleTable::cell(Quantity q, int state, int realization,
                                        int h_index) const {
  return cells_[index(q, state, realization, h_index)];
}

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.push_back(field);
  return out;
}

}  // namespace

void EnsembleTable::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
  if (!out) throw ParameterError("EnsembleTable: cannot open " + path.string());
  out << "# schema=quenchlab-ensemble-v1\n";
  out << "# config_hash=" << config_hash << "\n";
  out << "# master_seed=" << master_seed << "\n";
  out << "# sites=" << sites << " cap=" << cap << " n_total=" << n_total << "\n";
  out << "# n_states=" << n_states_ << " n_realizations=" << n_realizations_ << "\n";
  out << "# mode=" << mode << "\n";
  out << "# eq_times=";
  for (std::size_t i = 0; i < eq_times.size(); ++i)
    out << (i ? ";" : "") << fmt_double(eq_times[i]);
  out << "\n";
  out << "quantity,state,realization,h";
  for (std::size_t i = 0; i < eq_times.size(); ++i) out << ",q_t" << i;
  out << ",q_eq,retention,seed\n";
  for (Quantity q : kAllQuantities) {
    for (int s = 0; s < n_states_; ++s) {
      for (int r = 0; r < n_realizations_; ++r) {
        for (int h = 0; h < static_cast<int>(h_grid_.size()); ++h) {
          const auto& c = cell(q, s, r, h);
          if (!c.valid) continue;  // missing cells are absent rows
          out << quantity_letter(q) << ',' << s << ',' << r << ','
              << fmt_double(h_grid_[static_cast<std::size_t>(h)]);
          for (std::size_t i = 0; i < eq_times.size(); ++i)
            out << ',' << (i < c.per_time.size() ? fmt_double(c.per_time[i]) : "");
          out << ',' << fmt_double(c.q_eq) << ',' << fmt_double(c.retention) << ','
              << c.seed << "\n";
        }
      }
    }
  }
  if (!out) throw ParameterError("EnsembleTable: write failed for " + path.string());
}

EnsembleTable EnsembleTable::read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("EnsembleTable: cannot open " + path.string());

  std::string line;
  std::string config_hash, mode;
  std::uint64_t master_seed = 0;
  int sites = 0, cap = 0, n_total = 0, n_states = 0, n_realizations = 0;
  std::vector<double> eq_times;

  auto header_value = [](const std::string& l, const std::string& key) {
    const auto pos = l.find(key + "=");
    if (pos == std::string::npos) return std::string();
    auto end = l.find(' ', pos);
    if (end == std::string::npos) end = l.size();
    return l.substr(pos + key.size() + 1, end - pos - key.size() - 1);
  };

  std::vector<std::string> header_fields;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("#", 0) == 0) {
      if (line.find("schema=") != std::string::npos &&
          line.find("quenchlab-ensemble-v1") == std::string::npos)
        throw ParameterError("EnsembleTable: unknown schema in " + path.string());
      if (auto v = header_value(line, "config_hash"); !v.empty()) config_hash = v;
      if (auto v = header_value(line, "master_seed"); !v.empty()) master_seed = std::stoull(v);
      if (auto v = header_value(line, "sites"); !v.empty()) sites = std::stoi(v);
      if (auto v = header_value(line, "cap"); !v.empty()) cap = std::stoi(v);
      if (auto v = header_value(line, "n_total"); !v.empty()) n_total = std::stoi(v);
      if (auto v = header_value(line, "n_states"); !v.empty()) n_states = std::stoi(v);
      if (auto v = header_value(line, "n_realizations"); !v.empty())
        n_realizations = std::stoi(v);
      if (auto v = header_value(line, "mode"); !v.empty()) mode = v;
      if (auto v = header_value(line, "eq_times"); !v.empty()) {
        std::stringstream ss(v);
        std::string tok;
        while (std::getline(ss, tok, ';')) eq_times.push_back(std::stod(tok));
      }
      continue;
    }
    header_fields = split_csv(line);  // column header row
    break;
  }
  if (header_fields.empty() || header_fields[0] != "quantity")
    throw ParameterError("EnsembleTable: malformed header in " + path.string());
  if (n_states < 1 || n_realizations < 1)
    throw ParameterError("EnsembleTable: missing axis metadata in " + path.string());

  // First pass over rows to recover the h grid in order of first appearance.
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) rows.push_back(line);
  }
  std::vector<double> h_grid;
  for (const auto& row : rows) {
    const auto f = split_csv(row);
    const double h = std::stod(f.at(3));
    bool known = false;
    for (double g : h_grid) known = known || g == h;
    if (!known) h_grid.push_back(h);
  }
  if (h_grid.empty()) throw ParameterError("EnsembleTable: no data rows in " + path.string());

  EnsembleTable table(n_states, n_realizations, h_grid);
  table.sites = sites;
  table.cap = cap;
  table.n_total = n_total;
  table.eq_times = eq_times;
  table.master_seed = master_seed;
  table.config_hash = config_hash;
  table.mode = mode;

  const std::size_t m = eq_times.size();
  for (const auto& row : rows) {
    const auto f = split_csv(row);
    if (f.size() != 4 + m + 3)
      throw ParameterError("EnsembleTable: bad column count in " + path.string());
    const Quantity q = quantity_from_letter(f[0].at(0));
    const int s = std::stoi(f[1]);
    const int r = std::stoi(f[2]);
    const double h = std::stod(f[3]);
    int h_index = -1;
    for (std::size_t i = 0; i < h_grid.size(); ++i)
      if (h_grid[i] == h) h_index = static_cast<int>(i);
    auto& c = table.cell(q, s, r, h_index);
    c.per_time.clear();
    for (std::size_t i = 0; i < m; ++i)
      if (!f[4 + i].empty()) c.per_time.push_back(std::stod(f[4 + i]));
    c.q_eq = std::stod(f[4 + m]);
    c.retention = std::stod(f[4 + m + 1]);
    c.seed = std::stoull(f[4 + m + 2]);
    c.valid = true;
  }
  return table;
}

}  // namespace quenchlab
