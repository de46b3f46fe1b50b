#pragma once

#include "ahres/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ahres {

struct IdentityCheck {
  std::string name;
  bool pass = true;
  double defect = 0.0;  // exact checks: number of failing cases
  int cases = 0;
  std::string detail;
};

struct SuiteOptions {
  int ell_max = 5;
  std::uint64_t seed = 1;
  bool corrupt_fixture = false;  // perturbs one conjugated pencil entry (exercises the failure path)
};

// d^2 = 0, delta^2 = 0, Laplacian, b-divisibility, route equivalence, Mellin shift,
// star intertwining, indicial roots, model structure
std::vector<IdentityCheck> identity_suite(const MetricSpec& m, const SuiteOptions& o = {});

}  // namespace ahres
