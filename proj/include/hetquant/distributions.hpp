#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hetquant {

/// Standardized base laws D. Every kind is symmetric about zero (D(0) = 1/2)
/// and unimodal, so the density is nonincreasing in |z|.
enum class BaseKind { Normal, Cauchy, Laplace, Uniform, Logistic };

std::string_view to_string(BaseKind kind);
std::optional<BaseKind> base_kind_from_string(std::string_view name);

// Standardized CDF, density and quantile. Uniform is Uniform(-1, 1).
double base_cdf(BaseKind kind, double z);
double base_pdf(BaseKind kind, double z);
double base_quantile(BaseKind kind, double p);

/// Member of the scale family generated by a base law: F(x) = D(x / sigma).
class ScaledLaw {
 public:
  ScaledLaw(BaseKind base, double sigma);

  BaseKind base() const { return base_; }
  double sigma() const { return sigma_; }

  friend bool operator==(const ScaledLaw&, const ScaledLaw&) = default;

 private:
  BaseKind base_;
  double sigma_;
};

double cdf(const ScaledLaw& law, double x);
double pdf(const ScaledLaw& law, double x);
double quantile(const ScaledLaw& law, double p);

/// Inverse-transform draw: quantile(law, u) for a uniform variate u in (0, 1).
double sample(const ScaledLaw& law, double u);

/// Independent, non-identically distributed observations X_1..X_n.
class HeteroSample {
 public:
  explicit HeteroSample(std::vector<ScaledLaw> laws);

  std::size_t size() const { return laws_.size(); }
  std::span<const ScaledLaw> laws() const { return laws_; }
  const ScaledLaw& operator[](std::size_t k) const { return laws_[k]; }

  /// Base shared by every component, if there is one.
  std::optional<BaseKind> common_base() const;
  std::vector<double> sigmas() const;

 private:
  std::vector<ScaledLaw> laws_;
};

/// Raised for malformed sample text; `line()` is 1-based (0 when unknown).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses `kind:sigma`, e.g. `cauchy:2.5`.
ScaledLaw parse_law(std::string_view text);

// Sample files hold one law per line, `#` starts a comment and a trailing
// `xN` token repeats the law N times (`normal:1000 x80`).
HeteroSample parse_sample(std::istream& in);
HeteroSample parse_sample_text(std::string_view text);
HeteroSample load_sample(const std::filesystem::path& path);

}  // namespace hetquant
