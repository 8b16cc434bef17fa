#pragma once

#include "psw/schema.hpp"

#include <string>
#include <vector>

namespace psw {

struct ValidationCheck {
  std::string name;
  bool ok = true;
  std::string detail;
};

struct ValidationReport {
  bool is_l_schema = true;
  std::vector<ValidationCheck> checks;

  const ValidationCheck* failed(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name && !c.ok) return &c;
    return nullptr;
  }
  std::string summary() const;
};

/// Checks the loop-structure conditions: the label relation at every schema
/// level is a partial order (no cycles through explicit labels) and the
/// sub-schema reference graph is acyclic (no recursive procedures). Also
/// verifies the single-final-label rule and that referenced labels exist.
ValidationReport validate_L(const Schema& s);

}  // namespace psw
