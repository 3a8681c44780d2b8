#pragma once

#include <sipstab/scenario.hpp>

#include <string>
#include <vector>

namespace sipstab {

struct BuiltinOptions {
  /// Truncation level of example1_countable (indices t = 0..N).
  int N = 10;
  /// example2_unbounded keeps the indices t = 1..M.
  int M = 10;
  /// Attach the closure family (alpha, 1, 0), alpha in {-2,...,2}, to example1_countable.
  bool with_closure = false;
};

std::vector<std::string> builtin_names();
std::string builtin_description(const std::string& name);

/// Throws ValidationError for an unknown name or a nonpositive N or M.
Scenario make_builtin(const std::string& name, const BuiltinOptions& options = {});

}  // namespace sipstab
