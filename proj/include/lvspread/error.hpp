#pragma once

#include <stdexcept>
#include <string>

namespace lvspread {

/// Input rejected before any numerics ran (bad parameter, bad config, out-of-domain argument).
class ValidationError : public std::invalid_argument {
public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation started but could not produce a trustworthy result
/// (CFL violation, non-finite values, front reaching the boundary, ...).
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}
}  // namespace detail

}  // namespace lvspread
