#include "png/trajectory_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace png {
namespace {

constexpr std::string_view kMagic = "# png-trajectory 1";

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

long parse_long(std::string_view text) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw TrajectoryFormatError("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::string column_header(Eigen::Index n, Eigen::Index m) {
  std::string out = "iter,point_id";
  for (Eigen::Index j = 0; j < n; ++j) out += ",theta_" + std::to_string(j);
  for (Eigen::Index i = 0; i < m; ++i) out += ",loss_" + std::to_string(i);
  out += ",g,phi,F,v_norm";
  return out;
}

/// Counts theta_ and loss_ columns and checks the fixed layout.
void parse_column_header(std::string_view line, TrajectoryHeader& header) {
  const auto cols = split(line, ',');
  Eigen::Index n = 0, m = 0;
  for (auto c : cols) {
    if (c.starts_with("theta_")) ++n;
    if (c.starts_with("loss_")) ++m;
  }
  if (column_header(n, m) != line) {
    throw TrajectoryFormatError("unexpected column header: '" + std::string(line) + "'");
  }
  header.dimension = n;
  header.num_objectives = m;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw TrajectoryFormatError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

void write_trajectory(std::ostream& os, const TrajectoryFile& file) {
  const auto& h = file.header;
  Eigen::Index n = h.dimension, m = h.num_objectives;
  if (!file.records.empty()) {
    n = file.records.front().theta.size();
    m = file.records.front().losses.size();
  }
  os << kMagic << '\n';
  os << "# problem=" << h.problem << '\n';
  os << "# mode=" << h.mode << '\n';
  os << "# config_hash=" << h.config_hash << '\n';
  if (h.complete) {
    os << "# status=complete\n";
  } else {
    std::string reason = h.failure;
    for (char& c : reason) {
      if (c == '\n' || c == '\r') c = ' ';
    }
    os << "# status=partial " << reason << '\n';
  }
  os << column_header(n, m) << '\n';

  std::string line;
  for (const auto& r : file.records) {
    require_same_size(r.theta.size(), n, "write_trajectory: theta");
    require_same_size(r.losses.size(), m, "write_trajectory: losses");
    line = std::to_string(r.iter) + ',' + std::to_string(r.point_id);
    for (Eigen::Index j = 0; j < n; ++j) line += ',' + format_double(r.theta(j));
    for (Eigen::Index i = 0; i < m; ++i) line += ',' + format_double(r.losses(i));
    line += ',' + format_double(r.g);
    line += ',' + (r.phi.is_off() ? std::string("off") : format_double(r.phi.value()));
    line += ',' + format_double(r.F);
    line += ',' + format_double(r.v_norm);
    os << line << '\n';
  }
}

TrajectoryFile read_trajectory(std::istream& is) {
  TrajectoryFile file;
  auto& h = file.header;
  std::string raw;
  if (!std::getline(is, raw) || strip_cr(raw) != kMagic) {
    throw TrajectoryFormatError("missing '# png-trajectory 1' header");
  }
  bool have_columns = false;
  long line_no = 1;
  while (std::getline(is, raw)) {
    ++line_no;
    const std::string_view line = strip_cr(raw);
    if (line.empty()) continue;
    if (!have_columns) {
      if (line.starts_with("# ")) {
        const std::string_view kv = line.substr(2);
        const std::size_t eq = kv.find('=');
        if (eq == std::string_view::npos) continue;
        const std::string_view key = kv.substr(0, eq);
        const std::string_view value = kv.substr(eq + 1);
        if (key == "problem") h.problem = value;
        else if (key == "mode") h.mode = value;
        else if (key == "config_hash") h.config_hash = value;
        else if (key == "status") {
          h.complete = value == "complete";
          if (!h.complete && value.starts_with("partial")) {
            h.failure = value.size() > 8 ? std::string(value.substr(8)) : std::string();
          }
        }
        continue;
      }
      parse_column_header(line, h);
      have_columns = true;
      continue;
    }

    const auto cols = split(line, ',');
    const Eigen::Index n = h.dimension, m = h.num_objectives;
    if (static_cast<Eigen::Index>(cols.size()) != n + m + 6) {
      throw TrajectoryFormatError("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(n + m + 6) + " columns, got " +
                                  std::to_string(cols.size()));
    }
    TrajectoryRecord r;
    std::size_t c = 0;
    r.iter = parse_long(cols[c++]);
    r.point_id = parse_long(cols[c++]);
    r.theta.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) r.theta(j) = parse_double(cols[c++]);
    r.losses.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) r.losses(i) = parse_double(cols[c++]);
    r.g = parse_double(cols[c++]);
    const std::string_view phi = cols[c++];
    r.phi = phi == "off" ? Phi::off() : Phi::bound(parse_double(phi));
    r.F = parse_double(cols[c++]);
    r.v_norm = parse_double(cols[c++]);

    if (!file.records.empty()) {
      const auto& prev = file.records.back();
      const bool ordered =
          r.iter > prev.iter || (r.iter == prev.iter && r.point_id > prev.point_id);
      if (!ordered) {
        throw TrajectoryFormatError("line " + std::to_string(line_no) +
                                    ": rows must be ordered by (iter, point_id)");
      }
    }
    file.records.push_back(std::move(r));
  }
  if (!have_columns) throw TrajectoryFormatError("missing column header");
  return file;
}

void save_trajectory(const std::string& path, const TrajectoryFile& file) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_trajectory(os, file);
  if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

TrajectoryFile load_trajectory(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_trajectory(is);
}

std::vector<LossVector> load_loss_table(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  std::string first;
  std::getline(is, first);
  if (strip_cr(first) == kMagic) {
    is.seekg(0);
    std::vector<LossVector> out;
    for (auto& r : read_trajectory(is).records) out.push_back(std::move(r.losses));
    return out;
  }

  std::vector<LossVector> out;
  std::string raw = first;
  long line_no = 1;
  bool first_line = true;
  do {
    const std::string_view line = strip_cr(raw);
    if (!line.empty() && !line.starts_with('#')) {
      const auto cols = split(line, ',');
      LossVector p(static_cast<Eigen::Index>(cols.size()));
      bool numeric = true;
      for (std::size_t i = 0; i < cols.size() && numeric; ++i) {
        try {
          p(static_cast<Eigen::Index>(i)) = parse_double(cols[i]);
        } catch (const TrajectoryFormatError&) {
          numeric = false;
        }
      }
      if (numeric) {
        if (!out.empty()) require_same_size(p.size(), out.front().size(), "loss table row");
        out.push_back(std::move(p));
      } else if (!(first_line && out.empty())) {
        throw TrajectoryFormatError(path + ":" + std::to_string(line_no) + ": non-numeric row");
      }
      first_line = false;
    }
    ++line_no;
  } while (std::getline(is, raw));
  return out;
}

}  // namespace png
