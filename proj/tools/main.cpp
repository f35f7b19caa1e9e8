#include <string>
#include <vector>

#include "fdamean/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fdamean::run_cli(args);
}
