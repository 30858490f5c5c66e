#include "gopa/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gopa/errors.hpp"

namespace gopa {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

ordered_json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  double r = std::strtod(format_number(x).c_str(), nullptr);
  if (r == 0.0) r = 0.0;  // drop negative zero
  return r;
}

const char* orientation_name(Orientation o) { return o == Orientation::Reversed ? "reversed" : "literal"; }
const char* bound_mode_name(BoundMode m) { return m == BoundMode::Equality ? "equality" : "inequality"; }

namespace {

ordered_json keyed(const std::vector<std::string>& ids, const std::vector<double>& values) {
  ordered_json out = ordered_json::object();
  for (std::size_t k = 0; k < ids.size(); ++k) out[ids[k]] = number(values[k]);
  return out;
}

ordered_json numbers(const std::vector<double>& values) {
  ordered_json out = ordered_json::array();
  for (double v : values) out.push_back(number(v));
  return out;
}

std::string label_or(double value) { return sensitivity_label(value); }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

}  // namespace

ordered_json consensus_to_json(const ConsensusReport& c, const WeightSolution& s) {
  ordered_json out;
  out["psd_attribute"] = keyed(s.attribute_ids, c.psd_attribute);
  out["psd_alternative"] = keyed(s.alternative_ids, c.psd_alternative);
  out["kendall_attribute"] = keyed(s.attribute_ids, c.kendall_attribute);
  out["kendall_attributes"] = number(c.kendall_attributes);
  out["lcl_attribute"] = keyed(s.attribute_ids, c.lcl_attribute);
  ordered_json labels = ordered_json::object();
  for (std::size_t j = 0; j < s.J; ++j) labels[s.attribute_ids[j]] = c.lcl_attribute_labels[j];
  out["lcl_attribute_label"] = labels;
  out["lcl_attributes"] = number(c.lcl_attributes);
  out["lcl_attributes_label"] = c.lcl_attributes_label;
  out["gcl"] = number(c.gcl);
  out["gcl_label"] = c.gcl_label;
  return out;
}

ordered_json solution_report(const GroupInput& input, const RunResult& run, const ReportMeta& meta) {
  const WeightSolution& s = run.solution;
  ordered_json rep;
  rep["command"] = meta.command;
  rep["experts"] = s.expert_ids;
  rep["attributes"] = s.attribute_ids;
  rep["alternatives"] = s.alternative_ids;
  rep["z_star"] = number(s.z_star);
  rep["expert_weights"] = keyed(s.expert_ids, s.totals.experts);
  rep["attribute_weights"] = keyed(s.attribute_ids, s.totals.attributes);
  rep["alternative_weights"] = keyed(s.alternative_ids, s.totals.alternatives);

  ordered_json cells = ordered_json::array();
  for (std::size_t i = 0; i < s.I; ++i) {
    for (std::size_t j = 0; j < s.J; ++j) {
      const std::size_t c = i * s.J + j;
      ordered_json cell;
      cell["expert"] = s.expert_ids[i];
      cell["attribute"] = s.attribute_ids[j];
      cell["structure"] = structure_name(input.structures.cell(i, j));
      cell["max_rank"] = input.problem.cell(i, j).max_rank;
      cell["utilities"] = numbers(run.utilities[c]);
      cell["rank_weights"] = numbers(s.rank_weights[c]);
      ordered_json alts = ordered_json::object();
      for (std::size_t k = 0; k < s.K; ++k)
        alts[s.alternative_ids[k]] = input.problem.alternative_rank(i, j, k) ? number(s.weight(i, j, k)) : nullptr;
      cell["alternative_weights"] = alts;
      cells.push_back(cell);
    }
  }
  rep["cells"] = cells;
  rep["consensus"] = consensus_to_json(run.consensus, s);

  double alt_total = 0.0;
  for (double w : s.totals.alternatives) alt_total += w;
  ordered_json flags;
  flags["gap_free"] = s.gap_free;
  flags["orientation"] = orientation_name(meta.orientation);
  flags["bound_mode"] = bound_mode_name(meta.bound_mode);
  flags["excluded"] = s.excluded;
  flags["alternative_weights_sum"] = number(alt_total);
  rep["flags"] = flags;
  return rep;
}

WeightSolution solution_from_json(const ordered_json& rep) {
  try {
    WeightSolution s;
    s.expert_ids = rep.at("experts").get<std::vector<std::string>>();
    s.attribute_ids = rep.at("attributes").get<std::vector<std::string>>();
    s.alternative_ids = rep.at("alternatives").get<std::vector<std::string>>();
    s.I = s.expert_ids.size();
    s.J = s.attribute_ids.size();
    s.K = s.alternative_ids.size();
    s.z_star = rep.at("z_star").get<double>();
    const auto& cells = rep.at("cells");
    if (!cells.is_array() || cells.size() != s.I * s.J)
      throw ValidationError("cells", "expected one entry per (expert, attribute) cell");
    s.alternative_weights.assign(s.I * s.J, std::vector<double>(s.K, 0.0));
    s.rank_weights.resize(s.I * s.J);
    s.utilities.resize(s.I * s.J);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto& cell = cells[c];
      const auto eid = cell.at("expert").get<std::string>();
      const auto aid = cell.at("attribute").get<std::string>();
      auto ei = std::find(s.expert_ids.begin(), s.expert_ids.end(), eid);
      auto aj = std::find(s.attribute_ids.begin(), s.attribute_ids.end(), aid);
      if (ei == s.expert_ids.end() || aj == s.attribute_ids.end())
        throw ValidationError("cells[" + std::to_string(c) + "]", "unknown expert or attribute");
      const std::size_t idx = std::size_t(ei - s.expert_ids.begin()) * s.J + std::size_t(aj - s.attribute_ids.begin());
      if (cell.contains("rank_weights")) s.rank_weights[idx] = cell["rank_weights"].get<std::vector<double>>();
      if (cell.contains("utilities")) s.utilities[idx] = cell["utilities"].get<std::vector<double>>();
      const auto& alts = cell.at("alternative_weights");
      for (std::size_t k = 0; k < s.K; ++k) {
        const auto& v = alts.at(s.alternative_ids[k]);
        if (v.is_null()) {
          s.excluded.push_back("(" + eid + ", " + aid + ", " + s.alternative_ids[k] + ")");
          s.gap_free = false;
        } else {
          s.alternative_weights[idx][k] = v.get<double>();
        }
      }
    }
    if (rep.contains("flags") && rep["flags"].contains("gap_free")) s.gap_free = rep["flags"]["gap_free"].get<bool>();
    s.totals = aggregate(s);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("solution", std::string("malformed solution report: ") + e.what());
  }
}

std::string weights_csv(const WeightSolution& s) {
  std::ostringstream out;
  out << "level,expert,attribute,alternative,weight\n";
  for (std::size_t i = 0; i < s.I; ++i) out << "expert," << s.expert_ids[i] << ",,," << format_number(s.totals.experts[i]) << "\n";
  for (std::size_t j = 0; j < s.J; ++j)
    out << "attribute,," << s.attribute_ids[j] << ",," << format_number(s.totals.attributes[j]) << "\n";
  for (std::size_t k = 0; k < s.K; ++k)
    out << "alternative,,," << s.alternative_ids[k] << "," << format_number(s.totals.alternatives[k]) << "\n";
  for (std::size_t i = 0; i < s.I; ++i)
    for (std::size_t j = 0; j < s.J; ++j)
      for (std::size_t k = 0; k < s.K; ++k)
        out << "cell," << s.expert_ids[i] << "," << s.attribute_ids[j] << "," << s.alternative_ids[k] << ","
            << format_number(s.weight(i, j, k)) << "\n";
  return out.str();
}

std::string utilities_csv(const GroupInput& input, const std::vector<std::vector<double>>& utilities) {
  std::ostringstream out;
  out << "expert,attribute,structure,rank,utility\n";
  const auto& p = input.problem;
  for (std::size_t i = 0; i < p.num_experts(); ++i) {
    for (std::size_t j = 0; j < p.num_attributes(); ++j) {
      const auto& u = utilities[i * p.num_attributes() + j];
      for (std::size_t r = 0; r < u.size(); ++r)
        out << p.experts()[i].id << "," << p.attributes()[j] << "," << structure_name(input.structures.cell(i, j))
            << "," << r + 1 << "," << format_number(u[r]) << "\n";
    }
  }
  return out.str();
}

std::string metrics_csv(const ConsensusReport& c, const WeightSolution& s) {
  std::ostringstream out;
  out << "metric,item,value,label\n";
  for (std::size_t j = 0; j < s.J; ++j) out << "psd_attribute," << s.attribute_ids[j] << "," << format_number(c.psd_attribute[j]) << ",\n";
  for (std::size_t k = 0; k < s.K; ++k)
    out << "psd_alternative," << s.alternative_ids[k] << "," << format_number(c.psd_alternative[k]) << ",\n";
  for (std::size_t j = 0; j < s.J; ++j)
    out << "kendall_attribute," << s.attribute_ids[j] << "," << format_number(c.kendall_attribute[j]) << ",\n";
  out << "kendall_attributes,," << format_number(c.kendall_attributes) << ",\n";
  for (std::size_t j = 0; j < s.J; ++j)
    out << "lcl_attribute," << s.attribute_ids[j] << "," << format_number(c.lcl_attribute[j]) << ","
        << c.lcl_attribute_labels[j] << "\n";
  out << "lcl_attributes,," << format_number(c.lcl_attributes) << "," << c.lcl_attributes_label << "\n";
  out << "gcl,," << format_number(c.gcl) << "," << label_or(c.gcl) << "\n";
  return out.str();
}

std::string sensitivity_csv(const SensitivityResult& r, const RankingProblem& p) {
  std::ostringstream out;
  out << "group,id,mean,skewness,kurtosis,cv,min,max\n";
  auto rows = [&](const char* group, const std::vector<std::string>& ids, const std::vector<ScenarioStats>& st) {
    for (std::size_t k = 0; k < st.size(); ++k)
      out << group << "," << ids[k] << "," << format_number(st[k].mean) << "," << format_number(st[k].skewness) << ","
          << format_number(st[k].kurtosis) << "," << format_number(st[k].cv) << "," << format_number(st[k].min) << ","
          << format_number(st[k].max) << "\n";
  };
  std::vector<std::string> experts;
  for (const auto& e : p.experts()) experts.push_back(e.id);
  rows("expert", experts, r.expert_stats);
  rows("attribute", p.attributes(), r.attribute_stats);
  rows("alternative", p.alternatives(), r.alternative_stats);
  return out.str();
}

std::string sensitivity_raw_csv(const SensitivityResult& r, const RankingProblem& p) {
  std::ostringstream out;
  out << "scenario";
  for (const auto& e : p.experts()) out << ",rank_" << e.id;
  for (const auto& e : p.experts()) out << "," << e.id;
  for (const auto& a : p.attributes()) out << "," << a;
  for (const auto& a : p.alternatives()) out << "," << a;
  out << "\n";
  for (std::size_t s = 0; s < r.scenarios.size(); ++s) {
    out << s + 1;
    for (int t : r.scenarios[s]) out << "," << t;
    for (double w : r.expert_weights[s]) out << "," << format_number(w);
    for (double w : r.attribute_weights[s]) out << "," << format_number(w);
    for (double w : r.alternative_weights[s]) out << "," << format_number(w);
    out << "\n";
  }
  return out.str();
}

void write_solution_csvs(const std::string& dir, const GroupInput& input, const RunResult& run) {
  std::filesystem::path base(dir);
  std::filesystem::create_directories(base);
  write_file(base / "weights.csv", weights_csv(run.solution));
  write_file(base / "utilities.csv", utilities_csv(input, run.utilities));
  write_file(base / "metrics.csv", metrics_csv(run.consensus, run.solution));
}

}  // namespace gopa
