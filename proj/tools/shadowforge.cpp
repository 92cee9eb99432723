#include "shadowforge/cli/cli.hpp"

int main(int argc, char** argv) {
  return shadowforge::cli::run(std::vector<std::string>(argv, argv + argc));
}
