//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_EVAL_METRICS_H_
#define CHEMGYM_EVAL_METRICS_H_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chemgym/chem/molecule.h"

namespace chemgym {

// All metrics throw LengthMismatch for unequal input lengths and
// DegenerateInput for empty input unless noted.

double accuracy(std::span<const std::string> predicted,
                std::span<const std::string> truth);
double mae(std::span<const double> predicted, std::span<const double> truth);
double rmse(std::span<const double> predicted, std::span<const double> truth);

// Pearson correlation of average ranks. DegenerateInput for a constant vector.
double spearman(std::span<const double> x, std::span<const double> y);

// Average ranks (1-based), ties sharing the mean rank.
std::vector<double> average_ranks(std::span<const double> x);

// Probability that a random positive outranks a random negative, ties
// counting one half. DegenerateInput unless both classes occur.
double auroc(std::span<const double> scores, std::span<const int> labels);

// Average precision: sum over distinct thresholds of (R_k - R_{k-1}) P_k.
// DegenerateInput without positives.
double auprc(std::span<const double> scores, std::span<const int> labels);

// Valid predictions over all predictions; 0 for an empty list.
double validity_fraction(std::size_t valid, std::size_t total);

// Fingerprint-based similarity per pair; nullopt outputs (invalid) are
// skipped. DegenerateInput when no pair is valid.
double tanimoto_sim_mean(std::span<const chem::Molecule> inputs,
                         std::span<const std::optional<chem::Molecule>> outputs);

using PropertyOracle = std::function<double(const chem::Molecule &)>;
using SuccessOracle =
    std::function<bool(const chem::Molecule &in, const chem::Molecule &out)>;

// Fraction of pairs whose output is valid and judged a success; invalid
// outputs count as failures.
double success_rate(std::span<const chem::Molecule> inputs,
                    std::span<const std::optional<chem::Molecule>> outputs,
                    const SuccessOracle &oracle);

// Mean over valid pairs of (p(out) - p(in)) / |p(in)|; pairs with p(in) = 0
// are skipped. DegenerateInput when nothing remains.
double relative_improvement(
    std::span<const chem::Molecule> inputs,
    std::span<const std::optional<chem::Molecule>> outputs,
    const PropertyOracle &property);

// Distinct valid sets over all predictions. Each set is canonicalized and
// compared order-insensitively; nullopt entries are invalid.
double uniqueness(std::span<const std::optional<std::vector<std::string>>> sets);

// Built-in property oracles.
double molecular_weight(const chem::Molecule &m);  // includes hydrogens
double heavy_atom_count(const chem::Molecule &m);
// Success when the output is lighter than the input and below `limit`.
SuccessOracle lighter_than(double limit);

}  // namespace chemgym

#endif  // CHEMGYM_EVAL_METRICS_H_
