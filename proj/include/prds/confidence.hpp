#pragma once

#include <cstdint>

namespace prds {

enum class QuantileConvention : std::uint8_t { kOneSided, kTwoSided };

// Significance level plus the quantile convention used to derive the normal
// quantile z. One-sided uses z = Phi^-1(1-alpha), two-sided z = Phi^-1(1-alpha/2).
struct ConfidenceParams {
  double alpha = 0.05;
  QuantileConvention convention = QuantileConvention::kOneSided;

  double z() const;
};

// Inverse standard normal CDF, absolute error below 1e-8.
double normal_quantile(double p);

// Lower confidence bound on the probability that a random must-distinguish
// pair is separated by the accepted attribute set, given that `run_length`
// consecutive random draws introduced no unseparated pair. Valid in the
// normal-approximation regime run_length >= 50; pass allow_short_run to
// evaluate outside it.
double quality_lower_bound(std::uint64_t run_length, const ConfidenceParams& params,
                           bool allow_short_run = false);

struct RequiredRunLength {
  std::uint64_t value = 0;
  bool out_of_regime = false;  // value < 50: below the approximation regime
};

// Smallest run length whose lower bound reaches `target`.
RequiredRunLength required_run_length(double target, const ConfidenceParams& params);

enum class RunVerdict : std::uint8_t { kPending, kAccept, kReject };

// Sequential success-run test: accept once `required` consecutive successes
// are observed; any failure rejects and the caller resets.
class RunLengthTest {
 public:
  RunLengthTest(std::uint64_t required, double expected_bound = 0.0)
      : required_(required), expected_bound_(expected_bound) {}

  RunVerdict step(bool success) {
    if (!success) return RunVerdict::kReject;
    ++streak_;
    return streak_ >= required_ ? RunVerdict::kAccept : RunVerdict::kPending;
  }

  void reset() { streak_ = 0; }

  std::uint64_t streak() const { return streak_; }
  std::uint64_t required() const { return required_; }
  double expected_bound() const { return expected_bound_; }

 private:
  std::uint64_t required_;
  std::uint64_t streak_ = 0;
  double expected_bound_;
};

}  // namespace prds
