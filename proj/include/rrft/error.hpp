#pragma once

#include <cassert>
#include <stdexcept>
#include <string>

namespace rrft {

// Bad or inconsistent input (malformed graph, out-of-range parameter, ...).
// CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// No assignment satisfying the placement rules / capacities exists.
// CLI maps this to exit code 3.
class InfeasibleError : public std::runtime_error {
public:
  explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

// A constraint the library itself guarantees was observed broken.
// CLI maps this to exit code 4.
class InternalError : public std::logic_error {
public:
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_infeasible = 3;
inline constexpr int exit_internal = 4;

inline void require_input(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

// Guards invariants the library establishes itself; aborts in debug builds,
// surfaces as a reportable error in release builds.
inline void check_invariant(bool cond, const std::string& msg) {
  assert(cond && "internal invariant breached");
  if (!cond) throw InternalError(msg);
}

}  // namespace rrft
