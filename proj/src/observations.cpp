#include "sclab/observations.hpp"

#include <algorithm>

#include "sclab/errors.hpp"

namespace sclab {

std::string to_text(Backend b) { return b == Backend::tree ? "brw" : "coverage"; }

Backend parse_backend(const std::string& s) {
  if (s == "brw" || s == "tree") return Backend::tree;
  if (s == "coverage") return Backend::coverage;
  throw ConfigError("unknown backend '" + s + "' (expected brw or coverage)");
}

bool ObservationSource::vacuous(std::span<const Color> s) const {
  return std::any_of(s.begin(), s.end(), [&](Color c) { return c >= kappa(); });
}

SourcePtr tree_source(std::shared_ptr<const ObservationTree> tree) {
  return std::make_shared<TreeSource>(std::move(tree));
}

SourcePtr coverage_source(std::shared_ptr<const Scenery> scenery, const Box& window, int max_path_len) {
  return std::make_shared<CoverageSource>(std::move(scenery), window, max_path_len);
}

}  // namespace sclab
