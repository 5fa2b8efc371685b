#include "casec/diagnostics.hpp"

namespace casec {

const char* to_string(Severity s) {
    switch (s) {
        case Severity::Error: return "error";
        case Severity::Warning: return "warning";
        default: return "note";
    }
}

}  // namespace casec
