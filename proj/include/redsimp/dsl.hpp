// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "redsimp/reduction.hpp"

namespace redsimp {

// Parsed `.red` file. Constraints keep their written order, moved to the
// form expr >= 0 (or == 0); maps are affine in the indices and the param.
//
//   reduction NAME {
//     param N >= K;
//     domain [i,j] : 0 <= j <= i and i <= N;
//     write [i,j] -> [i];
//     read [i,j] -> [j];
//     op max;
//   }
//
// Optional statements: `input X;`, `output Y;`, `option product_invertible;`,
// `option fractal_threshold = K;`.
struct ReductionSpec {
  std::string name;
  std::string param = "N";
  long param_lb = 0;
  std::vector<std::string> indices;
  std::vector<Constraint> domain;
  AffineMap write;
  AffineMap read;
  OpKind op = OpKind::Sum;
  std::string input = "X";
  std::string output = "Y";
  bool product_invertible = false;
  std::optional<long> fractal_threshold;

  Reduction reduction() const;
  bool operator==(const ReductionSpec& o) const;
  bool operator!=(const ReductionSpec& o) const { return !(*this == o); }
};

ReductionSpec parse_spec(const std::string& text);
std::string pretty_print(const ReductionSpec& s);

struct CorpusEntry {
  std::string file;  // e.g. "prefix_max.red"
  std::string text;
};
const std::vector<CorpusEntry>& bundled_corpus();
ReductionSpec corpus_spec(const std::string& name);

}  // namespace redsimp
