#pragma once

// Delimiter-separated text matrices, coordinate files, key=value manifests.
//
// Numbers are written with 17 significant digits, so write -> read is exact.
// The delimiter is detected per file: comma if the first data line has one,
// otherwise tab, otherwise runs of whitespace.

#include <Eigen/Dense>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tvgsr/error.hpp"
#include "tvgsr/graph.hpp"

namespace tvgsr::io {

enum class NonFinitePolicy { reject, impute_zero };

struct NonFiniteCell {
  Eigen::Index row;
  Eigen::Index col;
};

struct MatrixFile {
  Matrix values;
  std::vector<std::string> header;  // empty when the file had none
  std::vector<NonFiniteCell> imputed;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline char detect_delimiter(std::string_view line) {
  if (line.find(',') != std::string_view::npos) return ',';
  if (line.find('\t') != std::string_view::npos) return '\t';
  return ' ';
}

inline std::vector<std::string> split(std::string_view line, char delim) {
  std::vector<std::string> out;
  if (delim == ' ') {
    std::istringstream ss{std::string(line)};
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.emplace_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline bool parse_double(std::string_view tok, double& out) {
  tok = trim(tok);
  if (tok.empty()) return false;
  if (tok.front() == '+') tok.remove_prefix(1);
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

}  // namespace detail

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Parses a numeric matrix. A first line with any non-numeric token is taken as a header.
inline MatrixFile read_matrix(const std::string& path, NonFinitePolicy policy = NonFinitePolicy::reject) {
  const auto lines = detail::read_lines(path);
  MatrixFile out;
  std::vector<std::vector<double>> rows;
  char delim = 0;
  bool first = true;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto text = detail::trim(lines[ln]);
    if (text.empty()) continue;
    if (!delim) delim = detail::detect_delimiter(text);
    const auto toks = detail::split(text, delim);
    std::vector<double> vals(toks.size());
    bool numeric = true;
    std::size_t bad = 0;
    for (std::size_t c = 0; c < toks.size() && numeric; ++c) {
      numeric = detail::parse_double(toks[c], vals[c]);
      bad = c;
    }
    if (first && !numeric) {
      out.header = toks;
      first = false;
      continue;
    }
    first = false;
    if (!numeric)
      throw IoError(path + ":" + std::to_string(ln + 1) + ": column " + std::to_string(bad + 1) +
                    ": non-numeric cell '" + toks[bad] + "'");
    if (!rows.empty() && vals.size() != rows.front().size())
      throw IoError(path + ":" + std::to_string(ln + 1) + ": expected " +
                    std::to_string(rows.front().size()) + " columns, found " + std::to_string(vals.size()));
    rows.push_back(std::move(vals));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = rows.empty() ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.front().size());
  out.values.resize(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      double v = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (!std::isfinite(v)) {
        if (policy == NonFinitePolicy::reject)
          throw IoError(path + ": non-finite value at row " + std::to_string(i + 1) + ", column " +
                        std::to_string(j + 1));
        out.imputed.push_back({i, j});
        v = 0.0;
      }
      out.values(i, j) = v;
    }
  }
  return out;
}

inline void write_matrix(const std::string& path, const Matrix& values,
                         const std::vector<std::string>& header = {}, char delim = ',') {
  auto out = detail::open_out(path);
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? std::string(1, delim) : "") << header[c];
  if (!header.empty()) out << '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      if (j) out << delim;
      out << format_number(values(i, j));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

struct CoordinateFile {
  CoordinateSet coords;
  std::vector<std::string> node_ids;
};

/// Coordinate file: header row required, then node_id, latitude, longitude per line.
/// File order fixes node indices.
inline CoordinateFile read_coordinates(const std::string& path) {
  const auto lines = detail::read_lines(path);
  std::vector<std::string> ids;
  std::vector<std::pair<double, double>> pts;
  char delim = 0;
  bool header_seen = false;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto text = detail::trim(lines[ln]);
    if (text.empty()) continue;
    if (!delim) delim = detail::detect_delimiter(text);
    const auto toks = detail::split(text, delim);
    if (!header_seen) {
      header_seen = true;
      double tmp;
      if (toks.size() >= 3 && detail::parse_double(toks[1], tmp) && detail::parse_double(toks[2], tmp))
        throw IoError(path + ":" + std::to_string(ln + 1) +
                      ": coordinate file needs a header row (node_id, latitude, longitude)");
      continue;
    }
    if (toks.size() != 3)
      throw IoError(path + ":" + std::to_string(ln + 1) + ": expected 3 columns, found " +
                    std::to_string(toks.size()));
    double lat, lon;
    if (!detail::parse_double(toks[1], lat))
      throw IoError(path + ":" + std::to_string(ln + 1) + ": column 2: non-numeric cell '" + toks[1] + "'");
    if (!detail::parse_double(toks[2], lon))
      throw IoError(path + ":" + std::to_string(ln + 1) + ": column 3: non-numeric cell '" + toks[2] + "'");
    if (!std::isfinite(lat) || !std::isfinite(lon))
      throw InputError(path + ":" + std::to_string(ln + 1) + ": non-finite coordinate");
    ids.push_back(toks[0]);
    pts.emplace_back(lat, lon);
  }
  CoordinateSet::Storage m(static_cast<Eigen::Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    m(static_cast<Eigen::Index>(i), 0) = pts[i].first;
    m(static_cast<Eigen::Index>(i), 1) = pts[i].second;
  }
  return {CoordinateSet(std::move(m)), std::move(ids)};
}

inline void write_coordinates(const std::string& path, const CoordinateSet& coords,
                              const std::vector<std::string>& node_ids = {}) {
  auto out = detail::open_out(path);
  out << "node_id,latitude,longitude\n";
  for (Eigen::Index i = 0; i < coords.size(); ++i) {
    const std::string id = node_ids.empty() ? std::to_string(i) : node_ids[static_cast<std::size_t>(i)];
    out << id << ',' << format_number(coords.matrix()(i, 0)) << ',' << format_number(coords.matrix()(i, 1))
        << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

using Manifest = std::vector<std::pair<std::string, std::string>>;

inline void write_manifest(const std::string& path, const Manifest& entries) {
  auto out = detail::open_out(path);
  for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

inline std::map<std::string, std::string> read_manifest(const std::string& path) {
  std::map<std::string, std::string> out;
  const auto lines = detail::read_lines(path);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto text = detail::trim(lines[ln]);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos)
      throw IoError(path + ":" + std::to_string(ln + 1) + ": expected key=value");
    out[std::string(detail::trim(text.substr(0, eq)))] = std::string(detail::trim(text.substr(eq + 1)));
  }
  return out;
}

/// Two-column (iteration, loss) trace.
inline void write_trace(const std::string& path, const std::vector<double>& trace,
                        const std::string& value_name = "loss") {
  auto out = detail::open_out(path);
  out << "iteration," << value_name << '\n';
  for (std::size_t i = 0; i < trace.size(); ++i) out << i << ',' << format_number(trace[i]) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace tvgsr::io
