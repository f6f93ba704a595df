#include "hetquant/distributions.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace hetquant {
namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // 1/sqrt(2*pi)

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::domain_error(std::string(what) + ": argument must be finite");
  }
}

void require_open_unit(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error(std::string(what) + ": probability must lie in (0, 1)");
  }
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0); }

// Rational seed (Acklam), relative error ~1e-9 over (0, 1).
double normal_quantile_seed(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

double normal_quantile(double p) {
  // Work in the lower half so Phi(x) - p is evaluated where Phi is small.
  if (p > 0.5) return -normal_quantile(1.0 - p);
  if (p == 0.5) return 0.0;
  double x = normal_quantile_seed(p);
  for (int i = 0; i < 4; ++i) {
    const double e = normal_cdf(x) - p;
    const double u = e / (kInvSqrt2Pi * std::exp(-0.5 * x * x));
    const double step = u / (1.0 + 0.5 * x * u);  // Halley
    x -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) break;
  }
  return x;
}

}  // namespace

std::string_view to_string(BaseKind kind) {
  switch (kind) {
    case BaseKind::Normal: return "normal";
    case BaseKind::Cauchy: return "cauchy";
    case BaseKind::Laplace: return "laplace";
    case BaseKind::Uniform: return "uniform";
    case BaseKind::Logistic: return "logistic";
  }
  return "unknown";
}

std::optional<BaseKind> base_kind_from_string(std::string_view name) {
  for (auto kind : {BaseKind::Normal, BaseKind::Cauchy, BaseKind::Laplace, BaseKind::Uniform,
                    BaseKind::Logistic}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

double base_cdf(BaseKind kind, double z) {
  switch (kind) {
    case BaseKind::Normal:
      return normal_cdf(z);
    case BaseKind::Cauchy:
      // arctan(z)/pi + 1/2, rewritten per sign so the tails keep relative accuracy.
      if (z < 0.0) return std::atan(-1.0 / z) / std::numbers::pi;
      if (z > 0.0) return 1.0 - std::atan(1.0 / z) / std::numbers::pi;
      return 0.5;
    case BaseKind::Laplace:
      return z <= 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
    case BaseKind::Uniform:
      if (z <= -1.0) return 0.0;
      if (z >= 1.0) return 1.0;
      return 0.5 * (z + 1.0);
    case BaseKind::Logistic:
      if (z < 0.0) {
        const double e = std::exp(z);
        return e / (1.0 + e);
      }
      return 1.0 / (1.0 + std::exp(-z));
  }
  throw std::logic_error("base_cdf: unknown base");
}

double base_pdf(BaseKind kind, double z) {
  switch (kind) {
    case BaseKind::Normal:
      return kInvSqrt2Pi * std::exp(-0.5 * z * z);
    case BaseKind::Cauchy:
      return 1.0 / (std::numbers::pi * (1.0 + z * z));
    case BaseKind::Laplace:
      return 0.5 * std::exp(-std::abs(z));
    case BaseKind::Uniform:
      // Closed support: the endpoints report the interior value.
      return std::abs(z) <= 1.0 ? 0.5 : 0.0;
    case BaseKind::Logistic: {
      const double e = std::exp(-std::abs(z));
      return e / ((1.0 + e) * (1.0 + e));
    }
  }
  throw std::logic_error("base_pdf: unknown base");
}

double base_quantile(BaseKind kind, double p) {
  require_open_unit(p, "quantile");
  switch (kind) {
    case BaseKind::Normal:
      return normal_quantile(p);
    case BaseKind::Cauchy:
      if (p < 0.5) return -1.0 / std::tan(std::numbers::pi * p);
      if (p > 0.5) return 1.0 / std::tan(std::numbers::pi * (1.0 - p));
      return 0.0;
    case BaseKind::Laplace:
      return p <= 0.5 ? std::log(2.0 * p) : -std::log(2.0 * (1.0 - p));
    case BaseKind::Uniform:
      return 2.0 * p - 1.0;
    case BaseKind::Logistic:
      return std::log(p) - std::log1p(-p);
  }
  throw std::logic_error("base_quantile: unknown base");
}

ScaledLaw::ScaledLaw(BaseKind base, double sigma) : base_(base), sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::domain_error("scale parameter must be positive and finite");
  }
}

double cdf(const ScaledLaw& law, double x) {
  require_finite(x, "cdf");
  return base_cdf(law.base(), x / law.sigma());
}

double pdf(const ScaledLaw& law, double x) {
  require_finite(x, "pdf");
  return base_pdf(law.base(), x / law.sigma()) / law.sigma();
}

double quantile(const ScaledLaw& law, double p) {
  return law.sigma() * base_quantile(law.base(), p);
}

double sample(const ScaledLaw& law, double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("sample: uniform variate must lie in (0, 1)");
  return quantile(law, u);
}

HeteroSample::HeteroSample(std::vector<ScaledLaw> laws) : laws_(std::move(laws)) {
  if (laws_.empty()) throw std::domain_error("sample must contain at least one law");
}

std::optional<BaseKind> HeteroSample::common_base() const {
  const BaseKind first = laws_.front().base();
  for (const auto& law : laws_) {
    if (law.base() != first) return std::nullopt;
  }
  return first;
}

std::vector<double> HeteroSample::sigmas() const {
  std::vector<double> out;
  out.reserve(laws_.size());
  for (const auto& law : laws_) out.push_back(law.sigma());
  return out;
}

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error(message), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

ParseError error_at(std::size_t line, const std::string& message) {
  return ParseError(line, line > 0 ? "line " + std::to_string(line) + ": " + message : message);
}

ScaledLaw parse_law_at(std::string_view text, std::size_t line) {
  text = trim(text);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw error_at(line, "expected kind:sigma, got '" + std::string(text) + "'");
  }
  const auto name = trim(text.substr(0, colon));
  const auto kind = base_kind_from_string(name);
  if (!kind) throw error_at(line, "unknown distribution '" + std::string(name) + "'");

  const auto value = trim(text.substr(colon + 1));
  double sigma = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), sigma);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
    throw error_at(line, "invalid scale '" + std::string(value) + "'");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw error_at(line, "scale must be positive, got '" + std::string(value) + "'");
  }
  return ScaledLaw(*kind, sigma);
}

}  // namespace

ScaledLaw parse_law(std::string_view text) { return parse_law_at(text, 0); }

HeteroSample parse_sample(std::istream& in) {
  std::vector<ScaledLaw> laws;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    std::size_t copies = 1;
    std::string_view law_text = line;
    if (const auto space = line.find_first_of(" \t"); space != std::string_view::npos) {
      law_text = line.substr(0, space);
      const auto rep = trim(line.substr(space));
      if (rep.size() < 2 || rep.front() != 'x') {
        throw error_at(line_no, "expected repetition 'xN', got '" + std::string(rep) + "'");
      }
      const auto digits = rep.substr(1);
      const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), copies);
      if (ec != std::errc() || ptr != digits.data() + digits.size() || copies == 0) {
        throw error_at(line_no, "invalid repetition count '" + std::string(rep) + "'");
      }
    }
    const ScaledLaw law = parse_law_at(law_text, line_no);
    laws.insert(laws.end(), copies, law);
  }
  if (laws.empty()) throw error_at(0, "sample contains no laws");
  return HeteroSample(std::move(laws));
}

HeteroSample parse_sample_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_sample(in);
}

HeteroSample load_sample(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sample file '" + path.string() + "'");
  try {
    return parse_sample(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  }
}

}  // namespace hetquant
