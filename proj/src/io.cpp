// SPDX-License-Identifier: Apache-2.0

#include "smpc/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string_view>

#include "smpc/error.hpp"

namespace smpc {

namespace {

[[noreturn]] void parse_fail(const std::string& source, std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::kParse, source + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

std::size_t parse_count(const std::string& text, const std::string& source, std::size_t line) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    parse_fail(source, line, "expected a nonnegative integer, got '" + text + "'");
  }
  return static_cast<std::size_t>(std::stoull(text));
}

double parse_real_at(const std::string& text, const std::string& source, std::size_t line) {
  try {
    return parse_real(text);
  } catch (const Error& e) {
    parse_fail(source, line, e.what());
  }
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw Error(ErrorCode::kParse, "empty number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
    throw Error(ErrorCode::kParse, "invalid number '" + t + "'");
  }
  return v;
}

void write_channel(std::ostream& os, const SparseChannel& channel) {
  os << "L=" << channel.length() << " S=" << channel.sparsity() << '\n';
  for (std::size_t j : channel.support.indices()) {
    os << j << ',' << format_real(channel.taps[j]) << '\n';
  }
}

SparseChannel read_channel(std::istream& is, const std::string& source) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(is, line)) parse_fail(source, 1, "missing 'L=<int> S=<int>' header");
  std::istringstream header(trim(line));
  std::string ltok, stok, extra;
  header >> ltok >> stok;
  if (ltok.rfind("L=", 0) != 0 || stok.rfind("S=", 0) != 0 || (header >> extra)) {
    parse_fail(source, 1, "header must be 'L=<int> S=<int>'");
  }
  const std::size_t length = parse_count(ltok.substr(2), source, 1);
  const std::size_t sparsity = parse_count(stok.substr(2), source, 1);

  Vector taps(length, 0.0);
  std::vector<bool> seen(length, false);
  std::size_t entries = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto comma = t.find(',');
    if (comma == std::string::npos) parse_fail(source, lineno, "expected '<index>,<value>'");
    const std::size_t idx = parse_count(trim(t.substr(0, comma)), source, lineno);
    if (idx >= length) parse_fail(source, lineno, "tap index " + std::to_string(idx) + " >= L");
    if (seen[idx]) parse_fail(source, lineno, "duplicate tap index " + std::to_string(idx));
    const double v = parse_real_at(t.substr(comma + 1), source, lineno);
    if (v == 0.0) parse_fail(source, lineno, "listed tap has value zero");
    seen[idx] = true;
    taps[idx] = v;
    ++entries;
  }
  if (entries != sparsity) {
    parse_fail(source, lineno, "header declares S=" + std::to_string(sparsity) + " but " +
                                   std::to_string(entries) + " taps are listed");
  }
  return SparseChannel::from_taps(std::move(taps));
}

void save_channel(const std::string& path, const SparseChannel& channel) {
  auto out = open_out(path);
  write_channel(out, channel);
  finish(out, path);
}

SparseChannel load_channel(const std::string& path) {
  auto in = open_in(path);
  return read_channel(in, path);
}

void write_matrix_csv(std::ostream& os, const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << format_real(m(i, j));
    }
    os << '\n';
  }
}

Matrix read_matrix_csv(std::istream& is, const std::string& source) {
  std::vector<double> data;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t lineno = 0;
  std::string line;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::size_t count = 0;
    std::size_t pos = 0;
    for (;;) {
      const auto comma = t.find(',', pos);
      data.push_back(parse_real_at(t.substr(pos, comma - pos), source, lineno));
      ++count;
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      parse_fail(source, lineno, "row has " + std::to_string(count) + " entries, expected " +
                                     std::to_string(cols));
    }
    ++rows;
  }
  if (rows == 0) parse_fail(source, lineno, "matrix file is empty");
  return Matrix(rows, cols, std::move(data));
}

void save_matrix_csv(const std::string& path, const Matrix& m) {
  auto out = open_out(path);
  write_matrix_csv(out, m);
  finish(out, path);
}

Matrix load_matrix_csv(const std::string& path) {
  auto in = open_in(path);
  return read_matrix_csv(in, path);
}

void save_observation(const std::string& path, const Vector& received,
                      std::optional<double> noise_variance) {
  auto out = open_out(path);
  if (noise_variance) out << "# noise_variance=" << format_real(*noise_variance) << '\n';
  for (double v : received) out << format_real(v) << '\n';
  finish(out, path);
}

ObservationFile load_observation(const std::string& path) {
  auto in = open_in(path);
  ObservationFile obs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      const std::string key = "noise_variance=";
      const auto at = t.find(key);
      if (at != std::string::npos) {
        obs.noise_variance = parse_real_at(t.substr(at + key.size()), path, lineno);
      }
      continue;
    }
    obs.received.push_back(parse_real_at(t, path, lineno));
  }
  if (obs.received.empty()) parse_fail(path, lineno, "observation file has no samples");
  return obs;
}

}  // namespace smpc
