#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rbis {

// Carries every violation found in a scenario, not just the first.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const { return violations_; }

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string all = "invalid configuration:";
        for (const auto& s : v) {
            all += "\n  ";
            all += s;
        }
        return all;
    }

    std::vector<std::string> violations_;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace rbis
