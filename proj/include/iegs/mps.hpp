#pragma once

#include <cctype>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "iegs/lp.hpp"

namespace iegs {

struct MpsDocument {
  std::string mps;       // fixed-format MPS text
  std::string name_map;  // sidecar CSV "name,original" for truncated names
};

namespace detail {

inline std::string mps_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string sanitize8(const std::string& in) {
  std::string out;
  for (char c : in) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      out += c;
    else
      out += '_';
    if (out.size() == 8) break;
  }
  if (out.empty()) out = "X";
  return out;
}

class NamePool {
 public:
  std::string assign(const std::string& original, std::string* map_csv) {
    std::string name = sanitize8(original);
    int suffix = 1;
    while (used_.count(name)) {
      std::string tail = std::to_string(suffix++);
      name = sanitize8(original).substr(0, 8 - tail.size()) + tail;
    }
    used_.insert({name, original});
    if (name != original) *map_csv += name + "," + original + "\n";
    return name;
  }

 private:
  std::map<std::string, std::string> used_;
};

inline void mps_line(std::string& out, const std::string& f1, const std::string& f2,
                     const std::string& f3 = {}, const std::string& f4 = {},
                     const std::string& f5 = {}, const std::string& f6 = {}) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), " %-2s %-8s  %-8s  %-12s  %-8s  %-12s", f1.c_str(), f2.c_str(),
                f3.c_str(), f4.c_str(), f5.c_str(), f6.c_str());
  std::string line(buf);
  while (!line.empty() && line.back() == ' ') line.pop_back();
  out += line + "\n";
}

}  // namespace detail

inline MpsDocument write_mps(const LpProblem& p, const std::vector<int>& binaries,
                             const std::string& problem_name = "IEGS") {
  MpsDocument doc;
  detail::NamePool pool;
  std::vector<char> is_bin(p.num_vars(), 0);
  for (int j : binaries) is_bin[j] = 1;

  std::vector<std::string> rn(p.num_rows()), cn(p.num_vars());
  const std::string objname = pool.assign("COST", &doc.name_map);
  for (int i = 0; i < p.num_rows(); ++i) rn[i] = pool.assign(p.row_names[i], &doc.name_map);
  for (int j = 0; j < p.num_vars(); ++j) cn[j] = pool.assign(p.var_names[j], &doc.name_map);

  std::string& s = doc.mps;
  s += "NAME          " + problem_name + "\n";
  s += "ROWS\n";
  detail::mps_line(s, "N", objname);
  for (int i = 0; i < p.num_rows(); ++i) detail::mps_line(s, std::string(1, p.senses[i]), rn[i]);

  // column-major entries
  std::vector<std::vector<std::pair<int, double>>> cols(p.num_vars());
  for (int i = 0; i < p.num_rows(); ++i)
    for (const auto& [j, v] : p.rows[i]) cols[j].emplace_back(i, v);

  s += "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (int j = 0; j < p.num_vars(); ++j) {
    if (is_bin[j] != in_int) {
      detail::mps_line(s, "", "MARKER" + std::to_string(marker++), "'MARKER'",
                       in_int ? "'INTEND'" : "'INTORG'");
      in_int = !in_int;
    }
    if (p.obj[j] != 0.0) detail::mps_line(s, "", cn[j], objname, detail::mps_number(p.obj[j]));
    for (const auto& [i, v] : cols[j]) detail::mps_line(s, "", cn[j], rn[i], detail::mps_number(v));
  }
  if (in_int)
    detail::mps_line(s, "", "MARKER" + std::to_string(marker++), "'MARKER'", "'INTEND'");

  s += "RHS\n";
  for (int i = 0; i < p.num_rows(); ++i)
    if (p.rhs[i] != 0.0) detail::mps_line(s, "", "RHS", rn[i], detail::mps_number(p.rhs[i]));

  s += "BOUNDS\n";
  for (int j = 0; j < p.num_vars(); ++j) {
    const double l = p.lb[j], u = p.ub[j];
    if (l == 0.0 && u == kInf) continue;
    if (l == u) {
      detail::mps_line(s, "FX", "BND", cn[j], detail::mps_number(l));
      continue;
    }
    if (l == -kInf && u == kInf) {
      detail::mps_line(s, "FR", "BND", cn[j]);
      continue;
    }
    if (l == -kInf)
      detail::mps_line(s, "MI", "BND", cn[j]);
    else if (l != 0.0)
      detail::mps_line(s, "LO", "BND", cn[j], detail::mps_number(l));
    if (u < kInf) detail::mps_line(s, "UP", "BND", cn[j], detail::mps_number(u));
  }
  s += "ENDATA\n";
  return doc;
}

struct MpsProblem {
  LpProblem lp;
  std::vector<int> binaries;
  std::string objective_row;
};

// Whitespace-tolerant reader for the subset the writer emits; used for the
// round-trip check and for re-importing exported instances.
inline MpsProblem read_mps(const std::string& text) {
  MpsProblem out;
  std::istringstream in(text);
  std::string line, section;
  std::map<std::string, int> col_of, row_index;
  std::vector<char> row_sense;
  std::vector<std::string> row_order;
  std::vector<double> row_rhs;
  std::vector<std::vector<std::pair<int, double>>> row_entries;
  bool in_int = false;

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] != ' ') {
      std::istringstream h(line);
      h >> section;
      continue;
    }
    std::istringstream f(line);
    std::vector<std::string> tok;
    std::string w;
    while (f >> w) tok.push_back(w);
    if (tok.empty()) continue;

    if (section == "ROWS") {
      if (tok[0][0] == 'N') {
        if (out.objective_row.empty()) out.objective_row = tok[1];
      } else {
        row_index[tok[1]] = static_cast<int>(row_order.size());
        row_order.push_back(tok[1]);
        row_sense.push_back(tok[0][0]);
        row_rhs.push_back(0.0);
        row_entries.emplace_back();
      }
    } else if (section == "COLUMNS") {
      if (tok.size() >= 3 && tok[1] == "'MARKER'") {
        in_int = tok[2] == "'INTORG'";
        continue;
      }
      const std::string& col = tok[0];
      if (!col_of.count(col)) {
        col_of[col] = out.lp.add_var(0.0, kInf, 0.0, col);
        if (in_int) out.binaries.push_back(col_of[col]);
      }
      for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
        const double v = std::stod(tok[k + 1]);
        if (tok[k] == out.objective_row)
          out.lp.obj[col_of[col]] = v;
        else
          row_entries[row_index.at(tok[k])].emplace_back(col_of[col], v);
      }
    } else if (section == "RHS") {
      for (std::size_t k = 1; k + 1 < tok.size(); k += 2)
        row_rhs[row_index.at(tok[k])] = std::stod(tok[k + 1]);
    } else if (section == "BOUNDS") {
      const std::string& kind = tok[0];
      const int j = col_of.at(tok[2]);
      if (kind == "FR") {
        out.lp.lb[j] = -kInf;
        out.lp.ub[j] = kInf;
      } else if (kind == "MI") {
        out.lp.lb[j] = -kInf;
      } else if (kind == "PL") {
        out.lp.ub[j] = kInf;
      } else {
        const double v = std::stod(tok[3]);
        if (kind == "LO")
          out.lp.lb[j] = v;
        else if (kind == "UP")
          out.lp.ub[j] = v;
        else if (kind == "FX")
          out.lp.lb[j] = out.lp.ub[j] = v;
      }
    }
  }
  for (std::size_t i = 0; i < row_order.size(); ++i)
    out.lp.add_row(row_entries[i], row_sense[i], row_rhs[i], row_order[i]);
  return out;
}

}  // namespace iegs
