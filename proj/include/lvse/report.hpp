#pragma once

// JSON report schema and a validator for the JSON Schema subset it uses:
// type, required, properties, additionalProperties, items, enum, const,
// minimum, oneOf and local "#/definitions/..." references.

#include <string>
#include <vector>

#include <json.hpp>

#include "lvse/errors.hpp"
#include "lvse/report_schema.hpp"

namespace lvse {

using json = nlohmann::json;

namespace detail {

inline bool json_type_matches(const json& v, const std::string& type) {
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "string") return v.is_string();
    if (type == "boolean") return v.is_boolean();
    if (type == "null") return v.is_null();
    if (type == "integer") return v.is_number_integer();
    if (type == "number") return v.is_number();
    throw InvariantError("schema uses unsupported type '" + type + "'");
}

class SchemaValidator {
public:
    explicit SchemaValidator(const json& root) : root_(root) {}

    void validate(const json& v, const json& schema, const std::string& where, std::vector<std::string>& errors) const {
        if (schema.is_boolean()) {
            if (!schema.get<bool>()) errors.push_back(where + ": no value allowed");
            return;
        }
        if (schema.contains("$ref")) {
            validate(v, resolve(schema["$ref"].get<std::string>()), where, errors);
            return;
        }
        if (schema.contains("type")) {
            const json& t = schema["type"];
            bool ok = false;
            if (t.is_array()) {
                for (const auto& alt : t) ok = ok || json_type_matches(v, alt.get<std::string>());
            } else {
                ok = json_type_matches(v, t.get<std::string>());
            }
            if (!ok) {
                errors.push_back(where + ": expected type " + t.dump());
                return;
            }
        }
        if (schema.contains("const") && v != schema["const"])
            errors.push_back(where + ": expected " + schema["const"].dump());
        if (schema.contains("enum")) {
            bool found = false;
            for (const auto& e : schema["enum"]) found = found || v == e;
            if (!found) errors.push_back(where + ": value " + v.dump() + " not in " + schema["enum"].dump());
        }
        if (schema.contains("minimum") && v.is_number() && v.get<double>() < schema["minimum"].get<double>())
            errors.push_back(where + ": below minimum " + schema["minimum"].dump());
        if (schema.contains("oneOf")) {
            int matches = 0;
            for (const auto& alt : schema["oneOf"]) {
                std::vector<std::string> sub;
                validate(v, alt, where, sub);
                if (sub.empty()) ++matches;
            }
            if (matches != 1)
                errors.push_back(where + ": matches " + std::to_string(matches) + " oneOf alternatives, expected 1");
        }
        if (v.is_object()) validate_object(v, schema, where, errors);
        if (v.is_array() && schema.contains("items")) {
            for (std::size_t i = 0; i < v.size(); ++i)
                validate(v[i], schema["items"], where + "[" + std::to_string(i) + "]", errors);
        }
    }

private:
    const json& resolve(const std::string& ref) const {
        const std::string prefix = "#/definitions/";
        if (ref.rfind(prefix, 0) != 0) throw InvariantError("unsupported schema reference " + ref);
        const auto name = ref.substr(prefix.size());
        if (!root_.contains("definitions") || !root_["definitions"].contains(name))
            throw InvariantError("dangling schema reference " + ref);
        return root_["definitions"][name];
    }

    void validate_object(const json& v, const json& schema, const std::string& where,
                         std::vector<std::string>& errors) const {
        if (schema.contains("required"))
            for (const auto& key : schema["required"])
                if (!v.contains(key.get<std::string>()))
                    errors.push_back(where + ": missing required property '" + key.get<std::string>() + "'");
        const json empty = json::object();
        const json& props = schema.contains("properties") ? schema["properties"] : empty;
        for (const auto& [key, value] : v.items()) {
            const std::string path = where + "." + key;
            if (props.contains(key)) {
                validate(value, props[key], path, errors);
            } else if (schema.contains("additionalProperties")) {
                validate(value, schema["additionalProperties"], path, errors);
            }
        }
    }

    const json& root_;
};

}  // namespace detail

inline const json& report_schema() {
    static const json schema = json::parse(kReportSchema);
    return schema;
}

/// Error messages for every schema violation; empty when the report is valid.
inline std::vector<std::string> schema_errors(const json& report, const json& schema = report_schema()) {
    std::vector<std::string> errors;
    detail::SchemaValidator(schema).validate(report, schema, "$", errors);
    return errors;
}

inline void validate_report(const json& report) {
    const auto errors = schema_errors(report);
    if (errors.empty()) return;
    std::string msg = "report does not match the schema:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw InvariantError(msg);
}

}  // namespace lvse
