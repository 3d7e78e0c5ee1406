#include <iostream>

#include "cli.hpp"
#include "polyfold/error.hpp"

int main(int argc, char** argv) {
  using namespace polyfold;
  std::optional<cli::RunConfig> cfg;
  try {
    cfg = cli::parse_args(argc, argv, std::cout);
  } catch (const Error& e) {
    Json j;
    j["status"] = "error";
    j["kind"] = std::string(error_kind_name(e.kind()));
    j["message"] = e.what();
    std::cout << j.dump(2) << "\n";
    return 2;
  }
  if (!cfg) return 0;
  auto result = cli::run(*cfg);
  std::cout << result.summary.dump(2) << "\n";
  return result.exit_code;
}
