#include "drem_im/errors.hpp"

#include <sstream>

namespace drem_im {

namespace {
std::string join_problems(const std::vector<std::string>& problems) {
    std::ostringstream os;
    os << "invalid configuration";
    for (const auto& p : problems) os << "\n  - " << p;
    return os.str();
}
}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

}  // namespace drem_im
