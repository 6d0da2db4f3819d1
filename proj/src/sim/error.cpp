#include "wfl/sim/error.hpp"

namespace wfl::sim {

const char* to_string(SimErrc code) {
    switch (code) {
        case SimErrc::SeriesTooShort: return "SeriesTooShort";
        case SimErrc::TooFewRows: return "TooFewRows";
        case SimErrc::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

}  // namespace wfl::sim
