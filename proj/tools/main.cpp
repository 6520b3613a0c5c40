#include <vector>

#include "darcyheat/run.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return darcyheat::run_cli(args);
}
