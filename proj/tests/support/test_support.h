//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_TESTS_SUPPORT_TEST_SUPPORT_H_
#define CHEMGYM_TESTS_SUPPORT_TEST_SUPPORT_H_

#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "chemgym/random.h"

namespace chemgym::test_support {

inline std::vector<std::string> read_lines(const std::string &path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line))
    out.push_back(line);
  return out;
}

// Tab-separated rows, skipping blank lines and '#' comments.
inline std::vector<std::vector<std::string>> read_table(
    const std::string &path) {
  std::vector<std::vector<std::string>> rows;
  for (const auto &line : read_lines(path)) {
    if (line.empty() || line[0] == '#')
      continue;
    std::vector<std::string> cols;
    std::size_t start = 0, tab;
    while ((tab = line.find('\t', start)) != std::string::npos) {
      cols.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    cols.push_back(line.substr(start));
    rows.push_back(std::move(cols));
  }
  return rows;
}

// Upper-tail p-value of Pearson's statistic against a uniform expectation.
inline double chi2_p(const std::vector<double> &counts) {
  double total = 0;
  for (double c : counts)
    total += c;
  double e = total / counts.size(), stat = 0;
  for (double c : counts)
    stat += (c - e) * (c - e) / e;
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

inline std::string random_completion(Rng &rng) {
  static const char *pieces[] = {
    "<think>", "</think>", "<answer>", "</answer>", "True", "False", "3.5",
    "-1e3", "CCO", "c1ccccc1", "C1CC", " ", "\n", "x", "\xc3\xa9", "0.0001",
    "<", ">", "[Na+]", "((", "1e999",
  };
  std::string s;
  std::size_t parts = rng.uniform_index(12);
  for (std::size_t i = 0; i < parts; ++i) {
    if (rng.bernoulli(0.05))
      s += std::string(rng.uniform_index(6000), 'z');
    else
      s += pieces[rng.uniform_index(std::size(pieces))];
  }
  return s;
}

}  // namespace chemgym::test_support

#endif  // CHEMGYM_TESTS_SUPPORT_TEST_SUPPORT_H_
