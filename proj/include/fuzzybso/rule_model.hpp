#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "fuzzybso/membership.hpp"
#include "fuzzybso/genotype.hpp"

namespace fuzzybso {

enum class Connective { And, Or };

std::string_view to_string(Connective c);

/// IF x_i IS label(antecedent_i) for every non-zero antecedent THEN consequent.
/// Antecedent 0 is don't-care.
struct Rule {
  std::vector<int> antecedents;
  int consequent = 1;
  Connective connective = Connective::And;
  double weight = 0.0;

  /// Number of non-zero antecedents.
  int length() const;
  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Dimensions shared by a rule set and its genotype.
struct RuleContext {
  int m = 0;  // attributes
  int p = 0;  // labels per attribute
  int c = 0;  // classes
  int r = 0;  // rules

  std::size_t genes_per_rule() const { return static_cast<std::size_t>(m) + 2; }
  std::size_t genotype_length() const { return static_cast<std::size_t>(r) * genes_per_rule(); }
};

struct RuleSet {
  std::vector<Rule> rules;
  int m = 0;
  int p = 0;
  int c = 0;

  std::size_t size() const { return rules.size(); }
  /// Rules per class, index j holding the count for class j+1.
  std::vector<std::size_t> class_counts() const;
  friend bool operator==(const RuleSet&, const RuleSet&) = default;
};

/// Rounds and clamps every gene, then repairs. Total: any finite genotype of
/// the right length decodes.
RuleSet decode(std::span<const double> genes, const RuleContext& ctx);

/// Makes a rule set feasible in place:
///  - an all-don't-care rule i gets antecedent (i mod m) set to label 1;
///  - each class without rules takes the lowest-index rule of the class with
///    the most rules (when that class can spare one).
/// Idempotent.
void repair(RuleSet& rs);

/// Integer fields as reals; AND -> 0.0, OR -> 1.0.
std::vector<double> encode(const RuleSet& rs);

/// Gene bounds that decode onto every valid code with equal width.
GenotypeSpec rule_genotype_spec(const RuleContext& ctx);

/// 1/2 * ((1 - length/m) + matches/n).
double rule_weight(const Rule& rule, const LabeledDataset& ld);

/// Stores rule_weight on every rule.
void assign_weights(RuleSet& rs, const LabeledDataset& ld);

}  // namespace fuzzybso
