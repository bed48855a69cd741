#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace foleylab {

// Structured side-channel for non-fatal conditions. Operations that can
// degrade gracefully (clipped samples, ungated loudness, too-short input)
// append a record here instead of failing.
struct Diagnostic {
    enum class Severity { info, warning };

    std::string operation;
    Severity severity = Severity::info;
    std::string message;
    std::int64_t value = 0; // optional numeric payload (e.g. clipped-sample count)
};

using Diagnostics = std::vector<Diagnostic>;

inline void diag_add(Diagnostics* sink, std::string op, Diagnostic::Severity sev,
                     std::string message, std::int64_t value = 0) {
    if (sink == nullptr) return;
    sink->push_back(Diagnostic{std::move(op), sev, std::move(message), value});
}

} // namespace foleylab
