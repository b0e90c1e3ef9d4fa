// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fail.
// Arguments select criteria by id; none runs all of them.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <entgeom/acceptance.hpp>

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty()) {
    for (int id = 1; id <= entgeom::kAcceptanceCriteria; ++id) ids.push_back(id);
  }
  bool ok = true;
  for (int id : ids) {
    if (id < 1 || id > entgeom::kAcceptanceCriteria) {
      std::cerr << "unknown criterion " << id << "\n";
      return 2;
    }
    const auto outcome = entgeom::run_criterion(id);
    std::cout << entgeom::format_outcome(outcome) << std::endl;
    ok = ok && outcome.pass;
  }
  return ok ? 0 : 1;
}
