#include "paircredit/cli/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <ostream>
#include <sstream>

#include "paircredit/cli/version.hpp"

namespace paircredit::cli {

namespace {

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string scalar(const Json& v) {
    if (v.is_number_float()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
        return buf;
    }
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void flatten(const Json& v, const std::string& prefix, std::ostringstream& out) {
    if (v.is_object()) {
        for (const auto& [key, child] : v.items()) flatten(child, prefix.empty() ? key : prefix + "." + key, out);
    } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "[" + std::to_string(i) + "]", out);
    } else {
        char key[64];
        std::snprintf(key, sizeof key, "%-44s", prefix.c_str());
        out << key << ' ' << scalar(v) << '\n';
    }
}

}  // namespace

std::string render_body(const Json& body, ReportFormat format) {
    if (format == ReportFormat::json) return body.dump() + "\n";
    std::ostringstream out;
    flatten(body, "", out);
    return out.str();
}

void write_report(std::ostream& out, const Json& body, ReportFormat format) {
    if (format == ReportFormat::json) {
        Json header;
        header["tool"] = "paircredit";
        header["version"] = kVersion;
        header["generated"] = utc_now();
        out << header.dump() << '\n';
    } else {
        out << "# paircredit " << kVersion << " generated " << utc_now() << '\n';
    }
    out << render_body(body, format);
}

}  // namespace paircredit::cli
