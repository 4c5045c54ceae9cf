#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

namespace paircredit::cli {

using Json = nlohmann::ordered_json;

enum class ReportFormat { text, json };

/// Writes a one-line header (tool, version, UTC time) followed by the body.
/// The body depends only on its inputs, never on the clock.
void write_report(std::ostream& out, const Json& body, ReportFormat format);

/// Body only, as emitted after the header line.
[[nodiscard]] std::string render_body(const Json& body, ReportFormat format);

}  // namespace paircredit::cli
