//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "chemgym/chem/element.h"
#include "chemgym/chem/fingerprint.h"
#include "chemgym/chem/smiles.h"
#include "chemgym/error.h"

namespace chemgym {

namespace {

template <class A, class B>
void check(std::span<A> a, std::span<B> b) {
  if (a.size() != b.size())
    throw LengthMismatch("inputs differ in length: " +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  if (a.empty())
    throw DegenerateInput("empty input");
}

}  // namespace

double accuracy(std::span<const std::string> predicted,
                std::span<const std::string> truth) {
  check(predicted, truth);
  std::size_t hit = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    hit += predicted[i] == truth[i];
  return static_cast<double>(hit) / predicted.size();
}

double mae(std::span<const double> predicted, std::span<const double> truth) {
  check(predicted, truth);
  double s = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    s += std::abs(predicted[i] - truth[i]);
  return s / predicted.size();
}

double rmse(std::span<const double> predicted, std::span<const double> truth) {
  check(predicted, truth);
  double s = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    s += (predicted[i] - truth[i]) * (predicted[i] - truth[i]);
  return std::sqrt(s / predicted.size());
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]])
      ++j;
    double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k)
      r[idx[k]] = rank;
    i = j + 1;
  }
  return r;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check(x, y);
  std::vector<double> rx = average_ranks(x), ry = average_ranks(y);
  double n = static_cast<double>(rx.size());
  double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0)
    throw DegenerateInput("Spearman correlation of a constant vector");
  return sxy / std::sqrt(sxx * syy);
}

double auroc(std::span<const double> scores, std::span<const int> labels) {
  check(scores, labels);
  std::vector<double> r = average_ranks(scores);
  double pos = 0, neg = 0, rank_sum = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0) {
      pos += 1;
      rank_sum += r[i];
    } else {
      neg += 1;
    }
  }
  if (pos == 0 || neg == 0)
    throw DegenerateInput("AUROC needs both classes");
  return (rank_sum - pos * (pos + 1) / 2.0) / (pos * neg);
}

double auprc(std::span<const double> scores, std::span<const int> labels) {
  check(scores, labels);
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  double total_pos = 0;
  for (int l : labels)
    total_pos += l != 0;
  if (total_pos == 0)
    throw DegenerateInput("AUPRC needs at least one positive");
  double tp = 0, fp = 0, prev_recall = 0, ap = 0;
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) {
      if (labels[idx[j]] != 0)
        tp += 1;
      else
        fp += 1;
      ++j;
    }
    double recall = tp / total_pos;
    ap += (recall - prev_recall) * (tp / (tp + fp));
    prev_recall = recall;
    i = j;
  }
  return ap;
}

double validity_fraction(std::size_t valid, std::size_t total) {
  return total == 0 ? 0.0 : static_cast<double>(valid) / total;
}

double tanimoto_sim_mean(
    std::span<const chem::Molecule> inputs,
    std::span<const std::optional<chem::Molecule>> outputs) {
  check(inputs, outputs);
  double s = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!outputs[i])
      continue;
    s += chem::tanimoto(chem::circular_fingerprint(inputs[i]),
                        chem::circular_fingerprint(*outputs[i]));
    ++n;
  }
  if (n == 0)
    throw DegenerateInput("no valid outputs");
  return s / n;
}

double success_rate(std::span<const chem::Molecule> inputs,
                    std::span<const std::optional<chem::Molecule>> outputs,
                    const SuccessOracle &oracle) {
  check(inputs, outputs);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i)
    ok += outputs[i] && oracle(inputs[i], *outputs[i]);
  return static_cast<double>(ok) / inputs.size();
}

double relative_improvement(
    std::span<const chem::Molecule> inputs,
    std::span<const std::optional<chem::Molecule>> outputs,
    const PropertyOracle &property) {
  check(inputs, outputs);
  double s = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!outputs[i])
      continue;
    double before = property(inputs[i]);
    if (before == 0)
      continue;
    s += (property(*outputs[i]) - before) / std::abs(before);
    ++n;
  }
  if (n == 0)
    throw DegenerateInput("no valid pairs with a non-zero input property");
  return s / n;
}

double uniqueness(
    std::span<const std::optional<std::vector<std::string>>> sets) {
  if (sets.empty())
    throw DegenerateInput("empty input");
  std::set<std::vector<std::string>> seen;
  for (const auto &s : sets) {
    if (!s)
      continue;
    std::vector<std::string> key;
    try {
      for (const auto &smiles : *s)
        key.push_back(chem::canonicalize_smiles(smiles));
    } catch (const Error &) {
      continue;
    }
    std::sort(key.begin(), key.end());
    key.erase(std::unique(key.begin(), key.end()), key.end());
    seen.insert(std::move(key));
  }
  return static_cast<double>(seen.size()) / sets.size();
}

double molecular_weight(const chem::Molecule &m) {
  const double h = chem::find_element(1)->mass;
  double w = 0;
  for (const auto &a : m.atoms())
    w += chem::find_element(a.atomic_number)->mass + a.h_count * h;
  return w;
}

double heavy_atom_count(const chem::Molecule &m) {
  return m.heavy_atom_count();
}

SuccessOracle lighter_than(double limit) {
  return [limit](const chem::Molecule &in, const chem::Molecule &out) {
    double w = molecular_weight(out);
    return w < limit && w < molecular_weight(in);
  };
}

}  // namespace chemgym
