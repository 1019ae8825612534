#include <iostream>
#include <thread>

#include "htsgd/harness/acceptance.hpp"

int main() {
  htsgd::AcceptanceOptions opt;
  opt.threads = int(std::max(1u, std::thread::hardware_concurrency()));
  int failed = 0;
  for (int id = 1; id <= htsgd::kAcceptanceCount; ++id) {
    const auto r = htsgd::run_acceptance_criterion(id, opt);
    std::cout << htsgd::format_result(r) << std::endl;
    failed += !r.pass;
  }
  std::cout << (htsgd::kAcceptanceCount - failed) << "/" << htsgd::kAcceptanceCount
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
