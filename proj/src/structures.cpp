#include "gopa/structures.hpp"

#include <cmath>
#include <numeric>

#include "gopa/errors.hpp"

namespace gopa {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double logistic(double u) {
  if (u >= 0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

// sigma(hi) - sigma(lo) without cancellation when both sit in a tail.
double logistic_diff(double lo, double hi) {
  if (lo >= 0) return logistic(-lo) - logistic(-hi);
  return logistic(hi) - logistic(lo);
}

// gamma/(1-gamma) * (hi^(1-gamma) - lo^(1-gamma)), or ln(hi/lo) when gamma = 1.
double power_segment(double lo, double hi, double gamma) {
  if (gamma == 1.0) return std::log(hi / lo);
  const double p = 1.0 - gamma;
  if (lo == 0.0) return gamma / p * std::pow(hi, p);
  return gamma / p * std::pow(lo, p) * std::expm1(p * std::log(hi / lo));
}

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

std::vector<double> surrogate_weights(const DiscreteStructure& s, int K) {
  if (K < 1) throw DomainError("surrogate weights need K >= 1");
  if (s.kind == DiscreteKind::RankExponent && !(s.exponent > 0.0)) throw DomainError("REF exponent must be > 0");
  const auto n = static_cast<std::size_t>(K);
  std::vector<double> v(n);
  switch (s.kind) {
    case DiscreteKind::RankSum:
      for (std::size_t r = 1; r <= n; ++r) v[r - 1] = 2.0 * double(K + 1 - int(r)) / (double(K) * double(K + 1));
      return v;
    case DiscreteKind::RankOrderCentroid: {
      double tail = 0.0;
      for (std::size_t r = n; r >= 1; --r) {
        tail += 1.0 / double(r);
        v[r - 1] = tail / double(K);
      }
      return v;
    }
    case DiscreteKind::Uniform:
      std::fill(v.begin(), v.end(), 1.0 / double(K));
      return v;
    case DiscreteKind::RankExponent:
      for (std::size_t r = 1; r <= n; ++r) v[r - 1] = std::pow(double(K + 1 - int(r)), s.exponent);
      break;
    case DiscreteKind::RankReciprocal:
      for (std::size_t r = 1; r <= n; ++r) v[r - 1] = 1.0 / double(r);
      break;
    case DiscreteKind::SumReciprocal:
      for (std::size_t r = 1; r <= n; ++r) v[r - 1] = double(K + 1 - int(r)) / double(K) + 1.0 / double(r);
      break;
  }
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  for (double& x : v) x /= total;
  return v;
}

// ---------------------------------------------------------------------------

TargetDensity::TargetDensity(ContinuousStructure structure, int K) : structure_(std::move(structure)), K_(K) {
  if (K < 1) throw DomainError("target density needs K >= 1");
  check_structure(UtilityStructure{structure_}, K);
  mass_ = raw_integral(0.0, K);
  if (!(mass_ > 0.0) || !std::isfinite(mass_)) throw DomainError("target density has no finite positive mass");
}

double TargetDensity::raw(double x) const {
  const double K = K_;
  return std::visit(overloaded{
                        [](const Neutral&) { return 1.0; },
                        [&](const Hara& h) { return h.alpha * std::pow(h.beta + h.alpha / h.gamma * x, -h.gamma); },
                        [&](const Crra& c) { return c.alpha * std::pow(c.alpha / c.gamma * x, -c.gamma); },
                        // Shifted to x = K so large |a| K stays in range.
                        [&](const Cara& c) { return std::exp(-c.a * (x - (c.a > 0 ? 0.0 : K))); },
                        [&](const SShape& s) {
                          const double sig = logistic(s.k * (x - 0.5 * (1.0 + K)));
                          return s.k * sig * (1.0 - sig);
                        },
                    },
                    structure_);
}

double TargetDensity::raw_integral(double a, double b) const {
  const double K = K_;
  return std::visit(overloaded{
                        [&](const Neutral&) { return b - a; },
                        [&](const Hara& h) {
                          const double c = h.alpha / h.gamma;
                          return power_segment(h.beta + c * a, h.beta + c * b, h.gamma);
                        },
                        [&](const Crra& r) {
                          const double c = r.alpha / r.gamma;
                          return power_segment(c * a, c * b, r.gamma);
                        },
                        [&](const Cara& c) {
                          const double shift = c.a > 0 ? 0.0 : K;
                          return std::exp(-c.a * (a - shift)) * -std::expm1(-c.a * (b - a)) / c.a;
                        },
                        [&](const SShape& s) {
                          const double m = 0.5 * (1.0 + K);
                          return logistic_diff(s.k * (a - m), s.k * (b - m));
                        },
                    },
                    structure_);
}

double TargetDensity::operator()(double x) const { return raw(x) / mass_; }

double TargetDensity::integral(double a, double b) const {
  if (b < a) return -integral(b, a);
  if (a == b) return 0.0;
  return raw_integral(a, b) / mass_;
}

double TargetDensity::integral_quadrature(double a, double b, double tol) const {
  if (b < a) return -integral_quadrature(b, a, tol);
  if (a == b) return 0.0;
  if (const auto* c = std::get_if<Crra>(&structure_); c && a == 0.0) {
    // x = b t^p removes the x^(-gamma) singularity at the origin.
    const double p = std::ceil(2.0 / (1.0 - c->gamma));
    auto g = [&](double t) { return t == 0.0 ? 0.0 : (*this)(b * std::pow(t, p)) * b * p * std::pow(t, p - 1.0); };
    return adaptive_simpson(g, 0.0, 1.0, tol);
  }
  return adaptive_simpson([this](double x) { return (*this)(x); }, a, b, tol);
}

double TargetDensity::eta(double x) const {
  const double K = K_;
  return std::visit(overloaded{
                        [](const Neutral&) { return 0.0; },
                        [&](const Hara& h) { return h.alpha / (h.beta + h.alpha / h.gamma * x); },
                        [&](const Crra& c) { return c.gamma / x; },
                        [](const Cara& c) { return c.a; },
                        [&](const SShape& s) { return s.k * (2.0 * logistic(s.k * (x - 0.5 * (1.0 + K))) - 1.0); },
                    },
                    structure_);
}

TargetDensity target_density(const ContinuousStructure& structure, int K) { return TargetDensity(structure, K); }

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int max_depth) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace gopa
