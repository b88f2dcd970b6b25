#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <vector>

#include "support.hpp"

namespace {
unsigned g_seed = 20240611;
}

unsigned testing::seed() { return g_seed; }

int main(int argc, char** argv) {
  if (const char* env = std::getenv("VCCTS_SEED")) g_seed = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  std::vector<char*> rest;
  for (int i = 0; i < argc; ++i) {
    if (std::strncmp(argv[i], "--seed=", 7) == 0) {
      g_seed = static_cast<unsigned>(std::strtoul(argv[i] + 7, nullptr, 10));
    } else {
      rest.push_back(argv[i]);
    }
  }
  doctest::Context ctx;
  ctx.applyCommandLine(static_cast<int>(rest.size()), rest.data());
  return ctx.run();
}
