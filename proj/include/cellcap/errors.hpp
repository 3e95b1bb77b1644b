// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace cellcap {

/// Thrown when an adaptive numerical scheme exhausts its evaluation budget.
/// The message carries the scheme's state (interval, budget, best estimate)
/// so the failure is diagnosable instead of a silent best-effort value.
class ConvergenceError : public std::runtime_error {
  public:
    explicit ConvergenceError(std::string const& what) : std::runtime_error(what) {}
};

/// Thrown when a MeijerGSpec does not match one of the supported instances.
class UnsupportedInstanceError : public std::invalid_argument {
  public:
    explicit UnsupportedInstanceError(std::string const& what) : std::invalid_argument(what) {}
};

}  // namespace cellcap
