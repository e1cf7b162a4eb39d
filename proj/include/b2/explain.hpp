#pragma once

#include <string>

#include "b2/assign.hpp"
#include "b2/matcher.hpp"

namespace b2 {

/// Renders one resolve-set as a word list with a caret line under each
/// word's motif anchor.
std::string render_resolve_set(const ResolveSet& rs, const PatternSet& ps);

/// Full explain output for a compiled artifact: per-motif resolve-sets and
/// mangled-tries. When `only` is nonnegative, restricts to that motif.
std::string explain_artifact(const CompiledMatcher& cm, int only_motif = -1);

}  // namespace b2
