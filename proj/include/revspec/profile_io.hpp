#pragma once

// Profile definition files (JSON):
//
//   {"name": "...", "kind": "expression", "expr": "1-x^2"}
//   {"name": "...", "kind": "samples", "samples": [[-1, 0], ..., [1, 0]]}
//   {"name": "...", "kind": "arclength-expression", "expr": "sin(s)", "length": "pi"}
//
// Arclength profiles are rescaled to area 4pi before the momentum transform;
// the applied homothety factor is reported as `scale`.

#include "revspec/profile.hpp"

#include <json.hpp>

#include <string>

namespace revspec {

struct LoadedProfile {
  Profile profile;
  double scale = 1.0;
  std::string kind;
};

LoadedProfile load_profile(const nlohmann::json& doc);
LoadedProfile load_profile_file(const std::string& path);

}  // namespace revspec
