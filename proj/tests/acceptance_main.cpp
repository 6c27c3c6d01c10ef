#include <cstdio>
#include <cstdlib>

#include "hjsbv/acceptance.hpp"

// Optional arguments select criterion ids; none runs all twelve.
int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const auto results = hjsbv::run_acceptance(stdout, only);
  int failed = 0;
  for (const auto& r : results) failed += !r.pass;
  std::printf("acceptance: %zu of %zu criteria pass\n", results.size() - static_cast<std::size_t>(failed),
              results.size());
  return failed == 0 ? 0 : 1;
}
