#include <vector>

#include <rigidity/cli.hpp>

int main(int argc, char** argv) {
  return rigidity::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
