#include "records.hpp"

#include <limits>
#include <sstream>

namespace klooster::cli {

namespace {

std::string_view to_string(RecordStatus s) {
    switch (s) {
    case RecordStatus::ok: return "ok";
    case RecordStatus::fail: return "fail";
    case RecordStatus::error: return "error";
    }
    return "error";
}

void flatten(const Json& j, const std::string& prefix, std::ostringstream& os) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items())
            flatten(value, prefix.empty() ? key : prefix + "." + key, os);
        return;
    }
    os << "  " << prefix << "=" << (j.is_string() ? j.get<std::string>() : j.dump());
}

} // namespace

Json exact_json(const CyclotomicInteger& v) {
    Json coeffs = Json::array();
    for (const auto& a : v.coeffs()) {
        // Decimal strings only for values beyond the 64-bit range.
        if (a >= std::numeric_limits<i64>::min() && a <= std::numeric_limits<i64>::max())
            coeffs.push_back(static_cast<i64>(a));
        else
            coeffs.push_back(a.str());
    }
    return Json{{"modulus", v.modulus()}, {"coeffs", std::move(coeffs)}};
}

Json sum_json(const SumValue& v) {
    Json j{{"re", v.approx.real()}, {"im", v.approx.imag()}, {"terms", v.terms},
           {"field_modulus", v.field_modulus}};
    j["exact"] = v.exact ? exact_json(*v.exact) : Json(nullptr);
    return j;
}

Json params_json(const IdentityParams& p) {
    Json j{{"m", p.m}, {"n", p.n}};
    if (p.k)
        j["k"] = *p.k;
    j["c"] = p.c;
    if (p.chi)
        j["chi"] = std::to_string(p.chi->modulus) + ":" + std::to_string(p.chi->index);
    if (p.weight)
        j["weight"] = std::string(to_string(*p.weight));
    return j;
}

Json report_json(const IdentityReport& r) {
    return Json{{"identity", std::string(to_string(r.id))},
                {"backend", std::string(to_string(r.backend))},
                {"verdict", std::string(to_string(r.status))},
                {"exact_equal", r.exact_equal},
                {"abs_diff", r.abs_diff},
                {"lhs", sum_json(r.lhs)},
                {"rhs", sum_json(r.rhs)}};
}

void RecordWriter::emit(const std::string& command, const Json& params, const Json& result,
                        RecordStatus status) {
    Json record{{"schema_version", schema_version},
                {"command", command},
                {"params", params},
                {"result", result},
                {"status", std::string(to_string(status))}};
    out_ << (pretty_ ? pretty_line(record) : record.dump()) << '\n';
}

std::string pretty_line(const Json& record) {
    std::ostringstream os;
    os << record.value("command", "?") << " [" << record.value("status", "?") << "]";
    if (record.contains("params"))
        flatten(record["params"], "", os);
    if (record.contains("result")) {
        os << "  |";
        flatten(record["result"], "", os);
    }
    return os.str();
}

} // namespace klooster::cli
