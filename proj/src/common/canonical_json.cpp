#include "wfl/common/canonical_json.hpp"

#include <cmath>
#include <cstdio>

namespace wfl {
namespace {

void write(const Json& v, std::string& out) {
    switch (v.type()) {
        case Json::value_t::object: {
            out.push_back('{');
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out.push_back(',');
                first = false;
                out += Json(it.key()).dump();
                out.push_back(':');
                write(it.value(), out);
            }
            out.push_back('}');
            break;
        }
        case Json::value_t::array: {
            out.push_back('[');
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i != 0) out.push_back(',');
                write(v[i], out);
            }
            out.push_back(']');
            break;
        }
        case Json::value_t::number_float: {
            double d = v.get<double>();
            if (!std::isfinite(d)) {
                out += "null";
                break;
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.9g", d);
            out += buf;
            break;
        }
        default:
            out += v.dump();
    }
}

}  // namespace

std::string canonical_dump(const Json& value) {
    std::string out;
    write(value, out);
    return out;
}

}  // namespace wfl
