#include "gopa/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gopa/errors.hpp"

namespace gopa {

using nlohmann::json;

namespace {

std::string index_path(const std::string& base, std::size_t k) {
  return base + "[" + std::to_string(k) + "]";
}

int parse_rank(const json& v, const std::string& path) {
  if (!v.is_number()) throw ValidationError(path, "rank must be a number");
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (d != std::floor(d)) throw ValidationError(path, "rank must be an integer");
    if (d < 1.0) throw ValidationError(path, "rank must be >= 1");
    return static_cast<int>(d);
  }
  if (v.is_number_unsigned()) {
    auto u = v.get<std::uint64_t>();
    if (u < 1) throw ValidationError(path, "rank must be >= 1");
    return static_cast<int>(u);
  }
  auto s = v.get<std::int64_t>();
  if (s < 1) throw ValidationError(path, "rank must be >= 1");
  return static_cast<int>(s);
}

double parse_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ValidationError(path, "expected a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(path, "expected a finite number");
  return d;
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ValidationError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(path.empty() ? key : path + "." + key, "missing field");
  return *it;
}

std::vector<std::string> parse_ids(const json& arr, const std::string& path) {
  if (!arr.is_array()) throw ValidationError(path, "expected an array of ids");
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    if (!arr[k].is_string()) throw ValidationError(index_path(path, k), "id must be a string");
    auto id = arr[k].get<std::string>();
    if (!seen.insert(id).second) throw ValidationError(index_path(path, k), "duplicate id '" + id + "'");
    ids.push_back(std::move(id));
  }
  if (ids.empty()) throw ValidationError(path, "must not be empty");
  return ids;
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

}  // namespace

CellInfo derive_cell(const std::vector<std::optional<int>>& ranks) {
  CellInfo info;
  for (const auto& r : ranks) {
    if (r) info.max_rank = std::max(info.max_rank, *r);
  }
  info.frequency.assign(static_cast<std::size_t>(info.max_rank), 0);
  for (const auto& r : ranks) {
    if (!r) continue;
    ++info.frequency[static_cast<std::size_t>(*r - 1)];
    ++info.ranked_count;
  }
  for (int c : info.frequency) {
    if (c > 1) info.has_duplicates = true;
    if (c == 0) info.has_gaps = true;
  }
  return info;
}

RankingProblem RankingProblem::create(std::vector<Expert> experts, std::vector<std::string> attributes,
                                      std::vector<std::string> alternatives,
                                      std::vector<std::vector<int>> attribute_ranks,
                                      std::vector<std::vector<std::vector<std::optional<int>>>> alternative_ranks) {
  const std::size_t I = experts.size(), J = attributes.size(), K = alternatives.size();
  if (I == 0) throw ValidationError("experts", "must not be empty");
  if (J == 0) throw ValidationError("attributes", "must not be empty");
  if (K == 0) throw ValidationError("alternatives", "must not be empty");
  for (std::size_t i = 0; i < I; ++i) {
    if (experts[i].rank < 1) throw ValidationError(index_path("experts", i) + ".rank", "rank must be >= 1");
  }
  if (attribute_ranks.size() != I) throw ValidationError("attribute_ranks", "expected one row per expert");
  if (alternative_ranks.size() != I) throw ValidationError("alternative_ranks", "expected one entry per expert");

  RankingProblem p;
  for (std::size_t i = 0; i < I; ++i) {
    const std::string epath = "attribute_ranks." + experts[i].id;
    if (attribute_ranks[i].size() != J) throw ValidationError(epath, "expected one rank per attribute");
    for (std::size_t j = 0; j < J; ++j) {
      if (attribute_ranks[i][j] < 1) throw ValidationError(index_path(epath, j), "rank must be >= 1");
    }
    if (alternative_ranks[i].size() != J)
      throw ValidationError("alternative_ranks." + experts[i].id, "expected one entry per attribute");
    for (std::size_t j = 0; j < J; ++j) {
      const std::string cpath = "alternative_ranks." + experts[i].id + "." + attributes[j];
      const auto& ranks = alternative_ranks[i][j];
      if (ranks.size() != K) throw ValidationError(cpath, "expected one entry per alternative");
      for (std::size_t k = 0; k < K; ++k) {
        if (ranks[k] && *ranks[k] < 1) throw ValidationError(index_path(cpath, k), "rank must be >= 1");
      }
      CellInfo info = derive_cell(ranks);
      if (info.ranked_count == 0) throw EmptyCellError(cpath, "no alternative carries a rank");
      if (info.max_rank > static_cast<int>(K))
        throw ValidationError(cpath, "rank " + std::to_string(info.max_rank) + " exceeds the number of alternatives");
      p.cells_.push_back(std::move(info));
    }
  }
  p.experts_ = std::move(experts);
  p.attributes_ = std::move(attributes);
  p.alternatives_ = std::move(alternatives);
  p.attribute_ranks_ = std::move(attribute_ranks);
  p.alternative_ranks_ = std::move(alternative_ranks);
  return p;
}

bool RankingProblem::gap_free() const {
  return std::all_of(cells_.begin(), cells_.end(), [](const CellInfo& c) { return c.gap_free(); });
}

std::string RankingProblem::cell_label(std::size_t i, std::size_t j) const {
  return "(" + experts_.at(i).id + ", " + attributes_.at(j) + ")";
}

RankingProblem RankingProblem::with_expert_ranks(const std::vector<int>& ranks) const {
  if (ranks.size() != experts_.size()) throw ShapeError("expected one rank per expert");
  RankingProblem copy = *this;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] < 1) throw ValidationError(index_path("experts", i) + ".rank", "rank must be >= 1");
    copy.experts_[i].rank = ranks[i];
  }
  return copy;
}

std::optional<std::size_t> RankingProblem::find_expert(const std::string& id) const {
  for (std::size_t i = 0; i < experts_.size(); ++i)
    if (experts_[i].id == id) return i;
  return std::nullopt;
}

std::optional<std::size_t> RankingProblem::find_attribute(const std::string& id) const {
  for (std::size_t j = 0; j < attributes_.size(); ++j)
    if (attributes_[j] == id) return j;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

CellContext validate_cell_context(CellContext ctx, int max_rank, const std::string& path) {
  auto at = [&](const char* kind, std::size_t n) { return index_path(path.empty() ? kind : path + "." + kind, n); };

  std::set<int> seen;
  for (std::size_t n = 0; n < ctx.ratio.size(); ++n) {
    const auto& c = ctx.ratio[n];
    if (c.rank < 1 || c.rank > max_rank - 1)
      throw ContextRangeError(at("ratio", n), "rank " + std::to_string(c.rank) + " outside [1, " +
                                                  std::to_string(max_rank - 1) + "]");
    if (!std::isfinite(c.alpha) || c.alpha <= 0.0) throw SignError(at("ratio", n), "alpha must be > 0");
    if (!seen.insert(c.rank).second) throw DuplicateConstraintError(at("ratio", n), "duplicate ratio constraint");
  }
  seen.clear();
  for (std::size_t n = 0; n < ctx.absdiff.size(); ++n) {
    const auto& c = ctx.absdiff[n];
    if (c.rank < 1 || c.rank > max_rank - 1)
      throw ContextRangeError(at("absdiff", n), "rank " + std::to_string(c.rank) + " outside [1, " +
                                                    std::to_string(max_rank - 1) + "]");
    if (!std::isfinite(c.beta) || c.beta < 0.0) throw SignError(at("absdiff", n), "beta must be >= 0");
    if (!seen.insert(c.rank).second)
      throw DuplicateConstraintError(at("absdiff", n), "duplicate absolute-difference constraint");
  }
  seen.clear();
  for (std::size_t n = 0; n < ctx.lowerbound.size(); ++n) {
    const auto& c = ctx.lowerbound[n];
    if (c.rank < 1 || c.rank > max_rank)
      throw ContextRangeError(at("lowerbound", n), "rank " + std::to_string(c.rank) + " outside [1, " +
                                                       std::to_string(max_rank) + "]");
    if (!std::isfinite(c.gamma) || c.gamma < 0.0) throw SignError(at("lowerbound", n), "gamma must be >= 0");
    if (!seen.insert(c.rank).second)
      throw DuplicateConstraintError(at("lowerbound", n), "duplicate lower-bound constraint");
  }

  auto by_rank = [](const auto& a, const auto& b) { return a.rank < b.rank; };
  std::sort(ctx.ratio.begin(), ctx.ratio.end(), by_rank);
  std::sort(ctx.absdiff.begin(), ctx.absdiff.end(), by_rank);
  std::sort(ctx.lowerbound.begin(), ctx.lowerbound.end(), by_rank);
  return ctx;
}

// ---------------------------------------------------------------------------

std::string structure_name(const UtilityStructure& s) {
  if (const auto* d = std::get_if<DiscreteStructure>(&s)) {
    switch (d->kind) {
      case DiscreteKind::RankSum: return "RS";
      case DiscreteKind::RankExponent: return "REF";
      case DiscreteKind::RankReciprocal: return "RR";
      case DiscreteKind::SumReciprocal: return "SR";
      case DiscreteKind::RankOrderCentroid: return "ROC";
      case DiscreteKind::Uniform: return "UNIFORM";
    }
  }
  const auto& c = std::get<ContinuousStructure>(s);
  struct Name {
    std::string operator()(const Neutral&) const { return "NEUTRAL"; }
    std::string operator()(const Hara&) const { return "HARA"; }
    std::string operator()(const Crra&) const { return "CRRA"; }
    std::string operator()(const Cara&) const { return "CARA"; }
    std::string operator()(const SShape&) const { return "SSHAPE"; }
  };
  return std::visit(Name{}, c);
}

void check_structure(const UtilityStructure& s, int max_rank) {
  const double K = max_rank;
  auto finite = [](std::initializer_list<double> xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
  };
  if (const auto* d = std::get_if<DiscreteStructure>(&s)) {
    if (d->kind == DiscreteKind::RankExponent && !(d->exponent > 0.0 && std::isfinite(d->exponent)))
      throw DomainError("REF exponent must be > 0");
    return;
  }
  const auto& c = std::get<ContinuousStructure>(s);
  if (const auto* h = std::get_if<Hara>(&c)) {
    if (!finite({h->alpha, h->beta, h->gamma})) throw DomainError("HARA parameters must be finite");
    if (h->gamma == 0.0) throw DomainError("HARA gamma must be nonzero");
    if (h->alpha <= 0.0) throw DomainError("HARA alpha must be > 0 for a positive density");
    const double lo = h->beta, hi = h->beta + h->alpha / h->gamma * K;
    if (lo <= 0.0 || hi <= 0.0)
      throw DomainError("HARA requires beta + (alpha/gamma) x > 0 on [0, " + std::to_string(max_rank) + "]");
  } else if (const auto* r = std::get_if<Crra>(&c)) {
    if (!finite({r->alpha, r->gamma})) throw DomainError("CRRA parameters must be finite");
    if (r->alpha <= 0.0) throw DomainError("CRRA alpha must be > 0");
    if (r->gamma <= 0.0) throw DomainError("CRRA gamma must be > 0");
    if (r->gamma >= 1.0) throw DomainError("CRRA gamma must be < 1 for an integrable density on [0, K]");
  } else if (const auto* a = std::get_if<Cara>(&c)) {
    if (!finite({a->a}) || a->a == 0.0) throw DomainError("CARA coefficient must be finite and nonzero");
  } else if (const auto* sh = std::get_if<SShape>(&c)) {
    if (!finite({sh->k}) || sh->k <= 0.0) throw DomainError("S-shape steepness must be > 0");
  }
}

UtilityStructure parse_structure(const json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected an object");
  auto type = upper(require(j, "type", path).get<std::string>());
  auto num = [&](const char* key, double fallback) {
    auto it = j.find(key);
    return it == j.end() ? fallback : parse_number(*it, path + "." + key);
  };
  if (type == "RS") return DiscreteStructure{DiscreteKind::RankSum};
  if (type == "REF") return DiscreteStructure{DiscreteKind::RankExponent, num("z", 1.17)};
  if (type == "RR") return DiscreteStructure{DiscreteKind::RankReciprocal};
  if (type == "SR") return DiscreteStructure{DiscreteKind::SumReciprocal};
  if (type == "ROC") return DiscreteStructure{DiscreteKind::RankOrderCentroid};
  if (type == "UNIFORM") return DiscreteStructure{DiscreteKind::Uniform};
  if (type == "NEUTRAL") return ContinuousStructure{Neutral{}};
  if (type == "HARA") return ContinuousStructure{Hara{num("alpha", 2.0), num("beta", 1.0), num("gamma", 1.5)}};
  if (type == "CRRA") return ContinuousStructure{Crra{num("alpha", 1.0), num("gamma", 0.5)}};
  if (type == "CARA") return ContinuousStructure{Cara{num("a", 1.0)}};
  if (type == "SSHAPE") return ContinuousStructure{SShape{num("k", 1.0)}};
  throw ValidationError(path + ".type", "unknown structure type '" + type + "'");
}

json structure_to_json(const UtilityStructure& s) {
  json j = json::object();
  j["type"] = structure_name(s);
  if (const auto* d = std::get_if<DiscreteStructure>(&s)) {
    if (d->kind == DiscreteKind::RankExponent) j["z"] = d->exponent;
    return j;
  }
  const auto& c = std::get<ContinuousStructure>(s);
  if (const auto* h = std::get_if<Hara>(&c)) {
    j["alpha"] = h->alpha;
    j["beta"] = h->beta;
    j["gamma"] = h->gamma;
  } else if (const auto* r = std::get_if<Crra>(&c)) {
    j["alpha"] = r->alpha;
    j["gamma"] = r->gamma;
  } else if (const auto* a = std::get_if<Cara>(&c)) {
    j["a"] = a->a;
  } else if (const auto* sh = std::get_if<SShape>(&c)) {
    j["k"] = sh->k;
  }
  return j;
}

// ---------------------------------------------------------------------------

RankingProblem validate_problem(const json& doc) {
  if (!doc.is_object()) throw ValidationError("", "input document must be a JSON object");

  const json& jexperts = require(doc, "experts", "");
  if (!jexperts.is_array() || jexperts.empty()) throw ValidationError("experts", "expected a non-empty array");
  std::vector<Expert> experts;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < jexperts.size(); ++i) {
    const std::string path = index_path("experts", i);
    const json& e = jexperts[i];
    const json& id = require(e, "id", path);
    if (!id.is_string()) throw ValidationError(path + ".id", "id must be a string");
    Expert ex{id.get<std::string>(), parse_rank(require(e, "rank", path), path + ".rank")};
    if (!seen.insert(ex.id).second) throw ValidationError(path + ".id", "duplicate id '" + ex.id + "'");
    experts.push_back(std::move(ex));
  }
  auto attributes = parse_ids(require(doc, "attributes", ""), "attributes");
  auto alternatives = parse_ids(require(doc, "alternatives", ""), "alternatives");

  const json& jattr = require(doc, "attribute_ranks", "");
  const json& jalt = require(doc, "alternative_ranks", "");
  if (!jattr.is_object()) throw ValidationError("attribute_ranks", "expected an object keyed by expert id");
  if (!jalt.is_object()) throw ValidationError("alternative_ranks", "expected an object keyed by expert id");
  for (const auto& [key, _] : jattr.items())
    if (!seen.count(key)) throw ValidationError("attribute_ranks." + key, "unknown expert");
  for (const auto& [key, _] : jalt.items())
    if (!seen.count(key)) throw ValidationError("alternative_ranks." + key, "unknown expert");

  std::vector<std::vector<int>> attribute_ranks;
  std::vector<std::vector<std::vector<std::optional<int>>>> alternative_ranks;
  for (const auto& ex : experts) {
    const std::string apath = "attribute_ranks." + ex.id;
    const json& row = require(jattr, ex.id.c_str(), "attribute_ranks");
    if (!row.is_array() || row.size() != attributes.size())
      throw ValidationError(apath, "expected an array with one rank per attribute");
    std::vector<int> ranks;
    for (std::size_t j = 0; j < row.size(); ++j) ranks.push_back(parse_rank(row[j], index_path(apath, j)));
    attribute_ranks.push_back(std::move(ranks));

    const json& cells = require(jalt, ex.id.c_str(), "alternative_ranks");
    const std::string epath = "alternative_ranks." + ex.id;
    if (!cells.is_object()) throw ValidationError(epath, "expected an object keyed by attribute id");
    for (const auto& [key, _] : cells.items())
      if (std::find(attributes.begin(), attributes.end(), key) == attributes.end())
        throw ValidationError(epath + "." + key, "unknown attribute");
    std::vector<std::vector<std::optional<int>>> per_attr;
    for (const auto& attr : attributes) {
      const std::string cpath = epath + "." + attr;
      const json& arr = require(cells, attr.c_str(), epath);
      if (!arr.is_array() || arr.size() != alternatives.size())
        throw ValidationError(cpath, "expected an array with one entry per alternative");
      std::vector<std::optional<int>> ranks;
      for (std::size_t k = 0; k < arr.size(); ++k) {
        if (arr[k].is_null())
          ranks.emplace_back();
        else
          ranks.emplace_back(parse_rank(arr[k], index_path(cpath, k)));
      }
      per_attr.push_back(std::move(ranks));
    }
    alternative_ranks.push_back(std::move(per_attr));
  }
  return RankingProblem::create(std::move(experts), std::move(attributes), std::move(alternatives),
                                std::move(attribute_ranks), std::move(alternative_ranks));
}

PreferenceContext validate_context(const json& contexts, const RankingProblem& problem) {
  PreferenceContext out(problem.num_experts(), problem.num_attributes());
  if (contexts.is_null()) return out;
  if (!contexts.is_array()) throw ValidationError("contexts", "expected an array");
  std::set<std::pair<std::size_t, std::size_t>> seen_cells;

  for (std::size_t n = 0; n < contexts.size(); ++n) {
    const std::string path = index_path("contexts", n);
    const json& entry = contexts[n];
    const auto eid = require(entry, "expert", path).get<std::string>();
    const auto aid = require(entry, "attribute", path).get<std::string>();
    auto i = problem.find_expert(eid);
    auto j = problem.find_attribute(aid);
    if (!i) throw ValidationError(path + ".expert", "unknown expert '" + eid + "'");
    if (!j) throw ValidationError(path + ".attribute", "unknown attribute '" + aid + "'");
    if (!seen_cells.insert({*i, *j}).second)
      throw DuplicateConstraintError(path, "context for cell " + problem.cell_label(*i, *j) + " given twice");
    const int K = problem.cell(*i, *j).max_rank;

    CellContext ctx;
    auto list = [&](const char* key) -> const json* {
      auto it = entry.find(key);
      if (it == entry.end() || it->is_null()) return nullptr;
      if (!it->is_array()) throw ValidationError(path + "." + key, "expected an array");
      return &*it;
    };
    if (const json* arr = list("ratio")) {
      for (std::size_t m = 0; m < arr->size(); ++m) {
        const std::string p = index_path(path + ".ratio", m);
        ctx.ratio.push_back({parse_rank(require((*arr)[m], "rank", p), p + ".rank"),
                             parse_number(require((*arr)[m], "alpha", p), p + ".alpha")});
      }
    }
    if (const json* arr = list("absdiff")) {
      for (std::size_t m = 0; m < arr->size(); ++m) {
        const std::string p = index_path(path + ".absdiff", m);
        ctx.absdiff.push_back({parse_rank(require((*arr)[m], "rank", p), p + ".rank"),
                               parse_number(require((*arr)[m], "beta", p), p + ".beta")});
      }
    }
    if (const json* arr = list("lowerbound")) {
      for (std::size_t m = 0; m < arr->size(); ++m) {
        const std::string p = index_path(path + ".lowerbound", m);
        const json& jr = require((*arr)[m], "rank", p);
        const double gamma = parse_number(require((*arr)[m], "gamma", p), p + ".gamma");
        if (jr.is_string() && jr.get<std::string>() == "*") {
          // Wildcard: the bound applies to every rank of the cell.
          for (int r = 1; r <= K; ++r) ctx.lowerbound.push_back({r, gamma});
        } else {
          ctx.lowerbound.push_back({parse_rank(jr, p + ".rank"), gamma});
        }
      }
    }
    out.cell(*i, *j) = validate_cell_context(std::move(ctx), K, path);
  }
  return out;
}

StructureAssignment validate_structures(const json& structures, const RankingProblem& problem) {
  UtilityStructure fallback = DiscreteStructure{DiscreteKind::RankOrderCentroid};
  if (structures.is_object() && structures.contains("default"))
    fallback = parse_structure(structures["default"], "structures.default");
  StructureAssignment out(problem.num_experts(), problem.num_attributes(), fallback);
  if (structures.is_null()) return out;
  if (!structures.is_object()) throw ValidationError("structures", "expected an object");

  if (auto it = structures.find("cells"); it != structures.end()) {
    if (!it->is_array()) throw ValidationError("structures.cells", "expected an array");
    std::set<std::pair<std::size_t, std::size_t>> seen_cells;
    for (std::size_t n = 0; n < it->size(); ++n) {
      const std::string path = index_path("structures.cells", n);
      const json& entry = (*it)[n];
      const auto eid = require(entry, "expert", path).get<std::string>();
      const auto aid = require(entry, "attribute", path).get<std::string>();
      auto i = problem.find_expert(eid);
      auto j = problem.find_attribute(aid);
      if (!i) throw ValidationError(path + ".expert", "unknown expert '" + eid + "'");
      if (!j) throw ValidationError(path + ".attribute", "unknown attribute '" + aid + "'");
      if (!seen_cells.insert({*i, *j}).second) throw ValidationError(path, "structure for cell given twice");
      out.cell(*i, *j) = parse_structure(entry, path);
    }
  }
  for (std::size_t i = 0; i < problem.num_experts(); ++i) {
    for (std::size_t j = 0; j < problem.num_attributes(); ++j) {
      try {
        check_structure(out.cell(i, j), problem.cell(i, j).max_rank);
      } catch (const DomainError& e) {
        throw DomainError("structure of cell " + problem.cell_label(i, j) + ": " + e.what());
      }
    }
  }
  return out;
}

GroupInput validate_input(const json& doc) {
  RankingProblem problem = validate_problem(doc);
  auto ctx_it = doc.find("contexts");
  PreferenceContext ctx = validate_context(ctx_it == doc.end() ? json() : *ctx_it, problem);
  auto st_it = doc.find("structures");
  StructureAssignment st = validate_structures(st_it == doc.end() ? json() : *st_it, problem);
  return GroupInput{std::move(problem), std::move(ctx), std::move(st)};
}

GroupInput load_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path, "cannot open input file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path, std::string("JSON parse error: ") + e.what());
  }
  return validate_input(doc);
}

// ---------------------------------------------------------------------------

json problem_to_json(const RankingProblem& p) {
  json doc = json::object();
  json experts = json::array();
  for (const auto& e : p.experts()) experts.push_back({{"id", e.id}, {"rank", e.rank}});
  doc["experts"] = experts;
  doc["attributes"] = p.attributes();
  doc["alternatives"] = p.alternatives();
  json attr = json::object(), alt = json::object();
  for (std::size_t i = 0; i < p.num_experts(); ++i) {
    const auto& id = p.experts()[i].id;
    json row = json::array();
    json cells = json::object();
    for (std::size_t j = 0; j < p.num_attributes(); ++j) {
      row.push_back(p.attribute_rank(i, j));
      json ranks = json::array();
      for (const auto& r : p.cell_ranks(i, j)) ranks.push_back(r ? json(*r) : json(nullptr));
      cells[p.attributes()[j]] = ranks;
    }
    attr[id] = row;
    alt[id] = cells;
  }
  doc["attribute_ranks"] = attr;
  doc["alternative_ranks"] = alt;
  return doc;
}

json context_to_json(const PreferenceContext& ctx, const RankingProblem& p) {
  json out = json::array();
  for (std::size_t i = 0; i < p.num_experts(); ++i) {
    for (std::size_t j = 0; j < p.num_attributes(); ++j) {
      const auto& c = ctx.cell(i, j);
      if (c.empty()) continue;
      json entry = {{"expert", p.experts()[i].id}, {"attribute", p.attributes()[j]}};
      json ratio = json::array(), absdiff = json::array(), bounds = json::array();
      for (const auto& r : c.ratio) ratio.push_back({{"rank", r.rank}, {"alpha", r.alpha}});
      for (const auto& a : c.absdiff) absdiff.push_back({{"rank", a.rank}, {"beta", a.beta}});
      for (const auto& b : c.lowerbound) bounds.push_back({{"rank", b.rank}, {"gamma", b.gamma}});
      entry["ratio"] = ratio;
      entry["absdiff"] = absdiff;
      entry["lowerbound"] = bounds;
      out.push_back(entry);
    }
  }
  return out;
}

json input_to_json(const GroupInput& input) {
  json doc = problem_to_json(input.problem);
  doc["contexts"] = context_to_json(input.contexts, input.problem);
  json cells = json::array();
  for (std::size_t i = 0; i < input.problem.num_experts(); ++i) {
    for (std::size_t j = 0; j < input.problem.num_attributes(); ++j) {
      json entry = structure_to_json(input.structures.cell(i, j));
      entry["expert"] = input.problem.experts()[i].id;
      entry["attribute"] = input.problem.attributes()[j];
      cells.push_back(entry);
    }
  }
  doc["structures"] = {{"cells", cells}};
  return doc;
}

}  // namespace gopa
