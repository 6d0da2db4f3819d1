#pragma once

#include <stdexcept>
#include <string>

namespace wfl::sim {

enum class SimErrc { SeriesTooShort, TooFewRows, InvalidConfig };

const char* to_string(SimErrc code);

class SimError : public std::runtime_error {
public:
    SimError(SimErrc code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}
    SimErrc code() const { return code_; }

private:
    SimErrc code_;
};

}  // namespace wfl::sim
