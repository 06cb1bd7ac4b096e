#include <iostream>
#include <string>
#include <vector>

#include "coarsecancel/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  ccl::DispatchResult r = ccl::dispatch(args);
  std::cout << r.report.dump(2) << "\n";
  return r.exit_code;
}
