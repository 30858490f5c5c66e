#include "gopa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gopa/errors.hpp"

namespace gopa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Continued fraction for I_x(a, b), modified Lentz.
double beta_cf(double x, double a, double b) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 100000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw NumericFailure("incomplete beta continued fraction did not converge");
}

// I_x(a, b) given both x and y = 1 - x, so callers keep full precision on
// whichever side is small.
double ibeta(double x, double y, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
  if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(log_front) * beta_cf(x, a, b) / a;
  return 1.0 - std::exp(log_front) * beta_cf(y, b, a) / b;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = double(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) throw DegenerateError("correlation of a constant vector");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

}  // namespace

double psd(const std::vector<double>& w, double total) {
  if (w.size() < 2) throw ShapeError("percentage standard deviation needs at least two experts");
  if (total == 0.0) throw DegenerateError("percentage standard deviation of a zero aggregate");
  const double I = double(w.size());
  double ss = 0.0;
  for (double x : w) ss += (total / I - x) * (total / I - x);
  return std::sqrt(ss / (I - 1.0)) / total;
}

std::vector<double> descending_midranks(const std::vector<double>& values, double tie_tol) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t end = start + 1;
    while (end < order.size() && values[order[start]] - values[order[end]] <= tie_tol) ++end;
    const double mid = 0.5 * double(start + 1 + end);
    for (std::size_t k = start; k < end; ++k) ranks[order[k]] = mid;
    start = end;
  }
  return ranks;
}

double kendall_w(const std::vector<std::vector<double>>& ranks) {
  const std::size_t m = ranks.size();
  if (m == 0) throw ShapeError("Kendall's W needs at least one rater");
  const std::size_t n = ranks.front().size();
  if (n < 2) throw ShapeError("Kendall's W needs at least two items");
  for (const auto& row : ranks)
    if (row.size() != n) throw ShapeError("every rater must rank every item");

  std::vector<double> sums(n, 0.0);
  double ties = 0.0;
  for (const auto& row : ranks) {
    for (std::size_t k = 0; k < n; ++k) sums[k] += row[k];
    std::vector<double> sorted(row);
    std::sort(sorted.begin(), sorted.end());
    std::size_t start = 0;
    while (start < n) {
      std::size_t end = start + 1;
      while (end < n && std::abs(sorted[end] - sorted[start]) <= 1e-9) ++end;
      const double t = double(end - start);
      ties += t * t * t - t;
      start = end;
    }
  }
  const double M = double(m), N = double(n);
  const double mean = M * (N + 1.0) / 2.0;
  double S = 0.0;
  for (double r : sums) S += (r - mean) * (r - mean);
  const double denom = M * M * (N * N * N - N) - M * ties;
  if (denom <= 0.0) throw DegenerateError("Kendall's W is undefined when every rater ties every item");
  return std::clamp(12.0 * S / denom, 0.0, 1.0);
}

double incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete beta needs a, b > 0");
  if (x < 0.0 || x > 1.0) throw DomainError("incomplete beta needs x in [0, 1]");
  return ibeta(x, 1.0 - x, a, b);
}

double f_cdf(double x, double v1, double v2) {
  if (std::isnan(x) || x < 0.0) throw DomainError("F cdf needs x >= 0");
  if (!(v1 > 0.0) || !(v2 > 0.0)) throw DomainError("F cdf needs positive degrees of freedom");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double denom = v1 * x + v2;
  return ibeta(v1 * x / denom, v2 / denom, 0.5 * v1, 0.5 * v2);
}

double local_confidence(double rho, std::size_t raters, std::size_t items) {
  if (std::isnan(rho) || raters < 2) return kNaN;
  const double I = double(raters);
  const double v1 = double(items) - 1.0 - 2.0 / I;
  if (v1 <= 0.0) return kNaN;
  if (rho >= 1.0) return 1.0;
  if (rho <= 0.0) return 0.0;
  const double x = rho * (I - 1.0) / (1.0 - rho);
  return f_cdf(x, v1, (I - 1.0) * v1);
}

double gcl(double lcl_attributes, const std::vector<double>& weights, const std::vector<double>& lcl) {
  if (weights.size() != lcl.size()) throw ShapeError("one local confidence level per attribute weight");
  double acc = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (weights[j] < 0.0) throw DomainError("attribute weights must be nonnegative");
    acc += weights[j] * lcl[j];
  }
  return lcl_attributes * acc;
}

std::string sensitivity_label(double level) {
  if (std::isnan(level)) return "undefined";
  if (level < 0.90) return "less sensitive";
  if (level < 0.95) return "sensitive";
  if (level < 0.99) return "very sensitive";
  return "high sensitive";
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ShapeError("rank vectors differ in length");
  if (a.size() < 2) throw ShapeError("correlation needs at least two items");
  return pearson(a, b);
}

ConsensusReport consensus(const WeightSolution& s) {
  ConsensusReport rep;
  auto guarded = [](auto&& f) {
    try {
      return f();
    } catch (const ShapeError&) {
      return kNaN;
    } catch (const DegenerateError&) {
      return kNaN;
    }
  };

  for (std::size_t j = 0; j < s.J; ++j) {
    std::vector<double> contrib(s.I, 0.0);
    for (std::size_t i = 0; i < s.I; ++i)
      for (std::size_t k = 0; k < s.K; ++k) contrib[i] += s.weight(i, j, k);
    rep.psd_attribute.push_back(guarded([&] { return psd(contrib, s.totals.attributes[j]); }));
  }
  for (std::size_t k = 0; k < s.K; ++k) {
    std::vector<double> contrib(s.I, 0.0);
    for (std::size_t i = 0; i < s.I; ++i)
      for (std::size_t j = 0; j < s.J; ++j) contrib[i] += s.weight(i, j, k);
    rep.psd_alternative.push_back(guarded([&] { return psd(contrib, s.totals.alternatives[k]); }));
  }

  for (std::size_t j = 0; j < s.J; ++j) {
    std::vector<std::vector<double>> R;
    for (std::size_t i = 0; i < s.I; ++i) R.push_back(descending_midranks(s.alternative_weights[i * s.J + j]));
    const double rho = guarded([&] { return kendall_w(R); });
    rep.kendall_attribute.push_back(rho);
    rep.lcl_attribute.push_back(local_confidence(rho, s.I, s.K));
    rep.lcl_attribute_labels.push_back(sensitivity_label(rep.lcl_attribute.back()));
  }
  {
    std::vector<std::vector<double>> R;
    for (std::size_t i = 0; i < s.I; ++i) {
      std::vector<double> w(s.J, 0.0);
      for (std::size_t j = 0; j < s.J; ++j)
        for (std::size_t k = 0; k < s.K; ++k) w[j] += s.weight(i, j, k);
      R.push_back(descending_midranks(w));
    }
    rep.kendall_attributes = guarded([&] { return kendall_w(R); });
    rep.lcl_attributes = local_confidence(rep.kendall_attributes, s.I, s.J);
    rep.lcl_attributes_label = sensitivity_label(rep.lcl_attributes);
  }
  rep.gcl = gcl(rep.lcl_attributes, s.totals.attributes, rep.lcl_attribute);
  rep.gcl_label = sensitivity_label(rep.gcl);
  return rep;
}

}  // namespace gopa
