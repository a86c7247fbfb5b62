#include "stratiwave/errors.hpp"

namespace stratiwave {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::structural: return "structural";
        case ErrorKind::domain: return "domain";
        case ErrorKind::insufficient_data: return "insufficient_data";
        case ErrorKind::profile_range: return "profile_range";
        case ErrorKind::stagnation: return "stagnation";
        case ErrorKind::divergence: return "divergence";
        case ErrorKind::no_laminar_flow: return "no_laminar_flow";
        case ErrorKind::surface_escape: return "surface_escape";
        case ErrorKind::convergence: return "convergence";
        case ErrorKind::schema: return "schema";
    }
    return "unknown";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace stratiwave
