#pragma once

// Input data for a group decision: ordinal rankings of experts, attributes and
// alternatives, per-cell partial preference constraints, and the utility
// structure each (expert, attribute) cell is elicited against.
//
// All types are immutable after validation.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace gopa {

struct Expert {
  std::string id;
  int rank = 1;

  bool operator==(const Expert&) const = default;
};

// Derived per-cell data. Ranks are 1-based; `frequency[r-1]` counts the
// alternatives ranked r, for r in [1, max_rank].
struct CellInfo {
  int max_rank = 0;
  std::vector<int> frequency;
  int ranked_count = 0;
  bool has_duplicates = false;
  bool has_gaps = false;

  bool gap_free() const { return !has_duplicates && !has_gaps; }
  bool operator==(const CellInfo&) const = default;
};

class RankingProblem {
 public:
  // Validates and derives K_ij and c_ijr. `attribute_ranks` is experts x
  // attributes; `alternative_ranks` is experts x attributes x alternatives
  // with std::nullopt marking an excluded alternative. Throws ValidationError
  // or EmptyCellError.
  static RankingProblem create(std::vector<Expert> experts,
                               std::vector<std::string> attributes,
                               std::vector<std::string> alternatives,
                               std::vector<std::vector<int>> attribute_ranks,
                               std::vector<std::vector<std::vector<std::optional<int>>>> alternative_ranks);

  std::size_t num_experts() const { return experts_.size(); }
  std::size_t num_attributes() const { return attributes_.size(); }
  std::size_t num_alternatives() const { return alternatives_.size(); }
  std::size_t num_cells() const { return experts_.size() * attributes_.size(); }

  const std::vector<Expert>& experts() const { return experts_; }
  const std::vector<std::string>& attributes() const { return attributes_; }
  const std::vector<std::string>& alternatives() const { return alternatives_; }

  int expert_rank(std::size_t i) const { return experts_.at(i).rank; }
  int attribute_rank(std::size_t i, std::size_t j) const { return attribute_ranks_.at(i).at(j); }
  std::optional<int> alternative_rank(std::size_t i, std::size_t j, std::size_t k) const {
    return alternative_ranks_.at(i).at(j).at(k);
  }
  const std::vector<std::optional<int>>& cell_ranks(std::size_t i, std::size_t j) const {
    return alternative_ranks_.at(i).at(j);
  }
  const CellInfo& cell(std::size_t i, std::size_t j) const { return cells_.at(i * attributes_.size() + j); }

  // True when no cell has duplicate or missing alternative ranks.
  bool gap_free() const;
  std::string cell_label(std::size_t i, std::size_t j) const;

  // Same rankings with the expert ranks replaced (used by permutation
  // experiments).
  RankingProblem with_expert_ranks(const std::vector<int>& ranks) const;

  std::optional<std::size_t> find_expert(const std::string& id) const;
  std::optional<std::size_t> find_attribute(const std::string& id) const;

  bool operator==(const RankingProblem&) const = default;

 private:
  RankingProblem() = default;

  std::vector<Expert> experts_;
  std::vector<std::string> attributes_;
  std::vector<std::string> alternatives_;
  std::vector<std::vector<int>> attribute_ranks_;
  std::vector<std::vector<std::vector<std::optional<int>>>> alternative_ranks_;
  std::vector<CellInfo> cells_;
};

CellInfo derive_cell(const std::vector<std::optional<int>>& ranks);

// ---------------------------------------------------------------------------
// Partial preference information.

// Discrete: U(r) = alpha * U(r+1).  Continuous: CDF(r) = alpha * CDF(r-1).
struct RatioConstraint {
  int rank = 1;
  double alpha = 1.0;
  bool operator==(const RatioConstraint&) const = default;
};

// Discrete: U(r) - U(r+1) = beta.  Continuous: CDF(r) - CDF(r-1) = beta.
struct AbsDiffConstraint {
  int rank = 1;
  double beta = 0.0;
  bool operator==(const AbsDiffConstraint&) const = default;
};

// Discrete: U(r) >= gamma.  Continuous: CDF(r) = gamma (or >= gamma).
struct LowerBoundConstraint {
  int rank = 1;
  double gamma = 0.0;
  bool operator==(const LowerBoundConstraint&) const = default;
};

struct CellContext {
  std::vector<RatioConstraint> ratio;
  std::vector<AbsDiffConstraint> absdiff;
  std::vector<LowerBoundConstraint> lowerbound;

  bool empty() const { return ratio.empty() && absdiff.empty() && lowerbound.empty(); }
  bool operator==(const CellContext&) const = default;
};

// Checks ranges, signs and duplicates of one cell's context against its max
// rank, returning the context with constraints sorted by rank. `path` prefixes
// error messages.
CellContext validate_cell_context(CellContext ctx, int max_rank, const std::string& path = {});

class PreferenceContext {
 public:
  PreferenceContext() = default;
  PreferenceContext(std::size_t experts, std::size_t attributes)
      : attributes_(attributes), cells_(experts * attributes) {}

  const CellContext& cell(std::size_t i, std::size_t j) const { return cells_.at(i * attributes_ + j); }
  CellContext& cell(std::size_t i, std::size_t j) { return cells_.at(i * attributes_ + j); }
  bool operator==(const PreferenceContext&) const = default;

 private:
  std::size_t attributes_ = 0;
  std::vector<CellContext> cells_;
};

// ---------------------------------------------------------------------------
// Utility structures.

enum class DiscreteKind { RankSum, RankExponent, RankReciprocal, SumReciprocal, RankOrderCentroid, Uniform };

struct DiscreteStructure {
  DiscreteKind kind = DiscreteKind::RankOrderCentroid;
  double exponent = 1.17;  // RankExponent only
  bool operator==(const DiscreteStructure&) const = default;
};

struct Neutral {
  bool operator==(const Neutral&) const = default;
};
// v(x) = alpha * (beta + (alpha/gamma) x)^(-gamma)
struct Hara {
  double alpha = 2.0;
  double beta = 1.0;
  double gamma = 1.5;
  bool operator==(const Hara&) const = default;
};
// HARA with beta = 0.
struct Crra {
  double alpha = 1.0;
  double gamma = 0.5;
  bool operator==(const Crra&) const = default;
};
// v(x) proportional to exp(-a x).
struct Cara {
  double a = 1.0;
  bool operator==(const Cara&) const = default;
};
// Derivative of the logistic 1/(1+exp(-k(x-(1+K)/2))).
struct SShape {
  double k = 1.0;
  bool operator==(const SShape&) const = default;
};

using ContinuousStructure = std::variant<Neutral, Hara, Crra, Cara, SShape>;
using UtilityStructure = std::variant<DiscreteStructure, ContinuousStructure>;

inline bool is_continuous(const UtilityStructure& s) { return std::holds_alternative<ContinuousStructure>(s); }
std::string structure_name(const UtilityStructure& s);

// Throws DomainError when parameters are invalid over [0, max_rank].
void check_structure(const UtilityStructure& s, int max_rank);

class StructureAssignment {
 public:
  StructureAssignment() = default;
  StructureAssignment(std::size_t experts, std::size_t attributes, UtilityStructure fill = DiscreteStructure{})
      : attributes_(attributes), cells_(experts * attributes, fill) {}

  const UtilityStructure& cell(std::size_t i, std::size_t j) const { return cells_.at(i * attributes_ + j); }
  UtilityStructure& cell(std::size_t i, std::size_t j) { return cells_.at(i * attributes_ + j); }
  bool operator==(const StructureAssignment&) const = default;

 private:
  std::size_t attributes_ = 0;
  std::vector<UtilityStructure> cells_;
};

// A complete input document.
struct GroupInput {
  RankingProblem problem;
  PreferenceContext contexts;
  StructureAssignment structures;
};

// ---------------------------------------------------------------------------
// JSON document handling. Keys: experts, attributes, alternatives,
// attribute_ranks, alternative_ranks, contexts, structures.

RankingProblem validate_problem(const nlohmann::json& doc);
PreferenceContext validate_context(const nlohmann::json& contexts, const RankingProblem& problem);
StructureAssignment validate_structures(const nlohmann::json& structures, const RankingProblem& problem);
GroupInput validate_input(const nlohmann::json& doc);
GroupInput load_input(const std::string& path);

UtilityStructure parse_structure(const nlohmann::json& j, const std::string& path = "structure");
nlohmann::json structure_to_json(const UtilityStructure& s);

nlohmann::json problem_to_json(const RankingProblem& problem);
nlohmann::json context_to_json(const PreferenceContext& ctx, const RankingProblem& problem);
nlohmann::json input_to_json(const GroupInput& input);

}  // namespace gopa
