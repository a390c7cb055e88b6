// SPDX-License-Identifier: Apache-2.0
//
// Text file formats.
//
//   channel:     "L=<int> S=<int>" then one "<index>,<value>" line per nonzero
//   matrix:      CSV, one matrix row per line
//   observation: optional "# noise_variance=<v>" comment, then one value per line
//
// Reals are written with 17 significant digits so they parse back bit-exactly.
// Parse failures throw kParse with "<path>:<line>:" context.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "smpc/channel.hpp"
#include "smpc/linalg.hpp"

namespace smpc {

std::string format_real(double v);
double parse_real(const std::string& text);

void write_channel(std::ostream& os, const SparseChannel& channel);
SparseChannel read_channel(std::istream& is, const std::string& source = "<stream>");
void save_channel(const std::string& path, const SparseChannel& channel);
SparseChannel load_channel(const std::string& path);

void write_matrix_csv(std::ostream& os, const Matrix& m);
Matrix read_matrix_csv(std::istream& is, const std::string& source = "<stream>");
void save_matrix_csv(const std::string& path, const Matrix& m);
Matrix load_matrix_csv(const std::string& path);

struct ObservationFile {
  Vector received;
  std::optional<double> noise_variance;
};

void save_observation(const std::string& path, const Vector& received,
                      std::optional<double> noise_variance);
ObservationFile load_observation(const std::string& path);

}  // namespace smpc
