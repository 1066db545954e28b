#include "tortured/error.hpp"

namespace tortured {
namespace {

std::string summarize(const std::vector<std::string>& problems) {
  std::string out = "invalid configuration";
  for (const auto& p : problems) out += "\n  - " + p;
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : InputError(summarize(problems)), problems_(std::move(problems)) {}

}  // namespace tortured
