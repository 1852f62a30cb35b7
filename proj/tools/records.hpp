#pragma once

#include "klooster/identities.hpp"

#include <json.hpp>

#include <ostream>
#include <string>

namespace klooster::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* schema_version = "1";

enum class RecordStatus { ok, fail, error };

Json exact_json(const CyclotomicInteger& v);
Json sum_json(const SumValue& v);
Json params_json(const IdentityParams& p);
Json report_json(const IdentityReport& r);

/// Newline-delimited records; one JSON object per line, or an aligned text line with --pretty.
class RecordWriter {
public:
    RecordWriter(std::ostream& out, bool pretty) : out_(out), pretty_(pretty) {}

    void emit(const std::string& command, const Json& params, const Json& result,
              RecordStatus status);

private:
    std::ostream& out_;
    bool pretty_;
};

std::string pretty_line(const Json& record);

} // namespace klooster::cli
