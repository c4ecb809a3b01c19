#include <cstdlib>
#include <iostream>

#include "fuzzyrand_cli/cli.hpp"

int main(int argc, char** argv) {
  fuzzyrand::cli::Environment env;
  if (const char* s = std::getenv("FUZZYRAND_SEED")) env.seed = s;
  if (const char* w = std::getenv("FUZZYRAND_WORKERS")) env.workers = w;
  return fuzzyrand::cli::run(argc, argv, std::cout, std::cerr, env);
}
