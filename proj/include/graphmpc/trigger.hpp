#pragma once

// Event trigger for re-identification: a sliding window of one-step
// prediction errors whose RMS, once the window has filled, is compared
// against a fixed threshold.

#include <cmath>
#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "graphmpc/errors.hpp"
#include "graphmpc/thermal.hpp"

namespace graphmpc {

struct TriggerConfig {
  double threshold = 0.1;  // [K], RMSE strictly above this fires
  int window = 288;        // residual count the RMSE is taken over

  void require_valid() const {
    if (!(threshold > 0.0)) throw ValidationError("trigger threshold must be positive");
    if (window < 1) throw ValidationError("trigger window must hold at least one residual");
  }
};

// Root mean square of a full residual window.
inline double trigger_rmse(std::span<const double> window) {
  if (window.empty())
    throw ValidationError("trigger RMSE of an empty window is undefined");
  double acc = 0.0;
  for (double r : window) {
    if (!std::isfinite(r))
      throw ValidationError("trigger window contains a non-finite residual");
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(window.size()));
}

// Fires only strictly above the threshold; equality stays quiet.
inline bool evaluate_trigger(double rmse, const TriggerConfig& cfg) {
  cfg.require_valid();
  if (!std::isfinite(rmse) || rmse < 0.0)
    throw ValidationError("trigger RMSE must be finite and nonnegative");
  return rmse > cfg.threshold;
}

// Gated parameter update: the fresh estimate is adopted only on a trigger.
inline RcParams select_params(bool triggered, const RcParams& fresh,
                              const RcParams& previous) {
  return triggered ? fresh : previous;
}

// Bounded residual buffer. RMSE is unavailable until the buffer has filled
// once; afterwards each push evicts the oldest residual.
class TriggerState {
 public:
  explicit TriggerState(const TriggerConfig& cfg) : cfg_(cfg) {
    cfg_.require_valid();
  }

  void push(double residual) {
    if (!std::isfinite(residual))
      throw ValidationError("residual pushed to trigger buffer is non-finite");
    buf_.push_back(residual);
    if (buf_.size() > static_cast<std::size_t>(cfg_.window)) buf_.pop_front();
  }

  // Replaces the buffer contents, e.g. with residuals recomputed under a
  // freshly adopted parameter estimate.
  void rebuild(std::span<const double> residuals) {
    buf_.assign(residuals.begin(), residuals.end());
    while (buf_.size() > static_cast<std::size_t>(cfg_.window))
      buf_.pop_front();
  }

  bool warmed_up() const {
    return buf_.size() == static_cast<std::size_t>(cfg_.window);
  }

  // Empty until the buffer has filled.
  std::optional<double> rmse() const {
    if (!warmed_up()) return std::nullopt;
    std::vector<double> tmp(buf_.begin(), buf_.end());
    return trigger_rmse(tmp);
  }

  std::size_t size() const { return buf_.size(); }
  const TriggerConfig& config() const { return cfg_; }

 private:
  TriggerConfig cfg_;
  std::deque<double> buf_;
};

}  // namespace graphmpc
