#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hetquant::cli {

enum ExitCode : int { kSuccess = 0, kRuntimeError = 1, kUsageError = 2 };

/// Bad flags or flag values; maps to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Runs one subcommand. `args` excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

/// `lo:hi:steps`, inclusive endpoints; steps = 1 yields {lo}.
std::vector<double> parse_grid(std::string_view text);

/// Shortest round-tripping form: 17 significant digits.
std::string format_number(double value);

struct PlanResult {
  std::optional<std::size_t> n2;  // empty when infeasible
  double radius = 0.0;             // radius at n2 (or at the search limit)
};

/// Smallest n2 in [0, max_n2] for which the normal median radius of
/// {normal:sigma1 x n1, normal:sigma2 x n2} at confidence parameter t is at
/// most `target` and satisfies the radius <= min sigma / 2 condition
/// (plus n t >= 4 for odd n).
PlanResult plan_n2(std::size_t n1, double sigma1, double sigma2, double target, double t,
                   std::size_t max_n2 = 1000000);

}  // namespace hetquant::cli
