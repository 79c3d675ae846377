#include "lieint/json_schema.hpp"

#include "lieint/errors.hpp"
#include "lieint/schema_text.hpp"

#include <cmath>

namespace lieint {

namespace {

using nlohmann::json;

bool has_type(const json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  if (type == "number") return v.is_number();
  if (type == "integer") {
    if (v.is_number_integer()) return true;
    if (!v.is_number_float()) return false;
    const double d = v.get<double>();
    return std::isfinite(d) && std::floor(d) == d;
  }
  throw ValidationError("schema uses unknown type '" + type + "'");
}

class Validator {
 public:
  explicit Validator(const json& root) : root_(root) {}

  void check(const json& schema, const json& v, const std::string& path, std::vector<std::string>& out) const {
    if (schema.is_boolean()) {
      if (!schema.get<bool>()) out.push_back(where(path) + ": no value allowed here");
      return;
    }
    if (auto it = schema.find("$ref"); it != schema.end()) {
      check(resolve(it->get<std::string>()), v, path, out);
    }
    if (auto it = schema.find("type"); it != schema.end()) {
      bool ok = false;
      if (it->is_string()) {
        ok = has_type(v, it->get<std::string>());
      } else {
        for (const auto& t : *it) ok = ok || has_type(v, t.get<std::string>());
      }
      if (!ok) {
        out.push_back(where(path) + ": expected type " + it->dump());
        return;
      }
    }
    if (auto it = schema.find("enum"); it != schema.end()) {
      bool found = false;
      for (const auto& e : *it) found = found || e == v;
      if (!found) out.push_back(where(path) + ": value " + v.dump() + " not in " + it->dump());
    }
    if (auto it = schema.find("const"); it != schema.end() && *it != v) {
      out.push_back(where(path) + ": expected " + it->dump());
    }
    if (v.is_number()) check_number(schema, v.get<double>(), path, out);
    if (v.is_string()) {
      if (auto it = schema.find("minLength"); it != schema.end() && v.get<std::string>().size() < it->get<std::size_t>()) {
        out.push_back(where(path) + ": string shorter than " + it->dump());
      }
    }
    if (v.is_array()) check_array(schema, v, path, out);
    if (v.is_object()) check_object(schema, v, path, out);
    if (auto it = schema.find("anyOf"); it != schema.end()) {
      std::size_t passing = 0;
      for (const auto& s : *it) passing += valid(s, v, path) ? 1 : 0;
      if (passing == 0) out.push_back(where(path) + ": matches none of the allowed forms");
    }
    if (auto it = schema.find("oneOf"); it != schema.end()) {
      std::size_t passing = 0;
      for (const auto& s : *it) passing += valid(s, v, path) ? 1 : 0;
      if (passing != 1) {
        out.push_back(where(path) + ": must match exactly one allowed form, matches " + std::to_string(passing));
      }
    }
  }

 private:
  static std::string where(const std::string& path) { return path.empty() ? "/" : path; }

  static std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  }

  bool valid(const json& schema, const json& v, const std::string& path) const {
    std::vector<std::string> scratch;
    check(schema, v, path, scratch);
    return scratch.empty();
  }

  const json& resolve(const std::string& ref) const {
    const std::string prefix = "#/$defs/";
    if (ref.rfind(prefix, 0) != 0) throw ValidationError("unsupported schema reference '" + ref + "'");
    const auto defs = root_.find("$defs");
    if (defs == root_.end()) throw ValidationError("schema has no $defs for '" + ref + "'");
    const auto it = defs->find(ref.substr(prefix.size()));
    if (it == defs->end()) throw ValidationError("unresolved schema reference '" + ref + "'");
    return *it;
  }

  static void check_number(const json& schema, double x, const std::string& path, std::vector<std::string>& out) {
    if (auto it = schema.find("minimum"); it != schema.end() && x < it->get<double>()) {
      out.push_back(where(path) + ": must be >= " + it->dump());
    }
    if (auto it = schema.find("maximum"); it != schema.end() && x > it->get<double>()) {
      out.push_back(where(path) + ": must be <= " + it->dump());
    }
    if (auto it = schema.find("exclusiveMinimum"); it != schema.end() && !(x > it->get<double>())) {
      out.push_back(where(path) + ": must be > " + it->dump());
    }
    if (auto it = schema.find("exclusiveMaximum"); it != schema.end() && !(x < it->get<double>())) {
      out.push_back(where(path) + ": must be < " + it->dump());
    }
  }

  void check_array(const json& schema, const json& v, const std::string& path, std::vector<std::string>& out) const {
    if (auto it = schema.find("minItems"); it != schema.end() && v.size() < it->get<std::size_t>()) {
      out.push_back(where(path) + ": needs at least " + it->dump() + " items");
    }
    if (auto it = schema.find("maxItems"); it != schema.end() && v.size() > it->get<std::size_t>()) {
      out.push_back(where(path) + ": allows at most " + it->dump() + " items");
    }
    if (auto it = schema.find("items"); it != schema.end()) {
      for (std::size_t i = 0; i < v.size(); ++i) check(*it, v[i], path + "/" + std::to_string(i), out);
    }
  }

  void check_object(const json& schema, const json& v, const std::string& path, std::vector<std::string>& out) const {
    if (auto it = schema.find("required"); it != schema.end()) {
      for (const auto& key : *it) {
        if (!v.contains(key.get<std::string>())) out.push_back(where(path) + ": missing required key " + key.dump());
      }
    }
    const auto props = schema.find("properties");
    const auto extra = schema.find("additionalProperties");
    for (const auto& [key, value] : v.items()) {
      const std::string child = path + "/" + escape(key);
      if (props != schema.end() && props->contains(key)) {
        check(props->at(key), value, child, out);
      } else if (extra != schema.end()) {
        if (extra->is_boolean() && !extra->get<bool>()) {
          out.push_back(where(path) + ": unknown key \"" + key + "\"");
        } else {
          check(*extra, value, child, out);
        }
      }
    }
  }

  const json& root_;
};

}  // namespace

std::vector<std::string> schema_violations(const nlohmann::json& schema, const nlohmann::json& instance) {
  std::vector<std::string> out;
  Validator(schema).check(schema, instance, "", out);
  return out;
}

const nlohmann::json& config_schema() {
  static const nlohmann::json schema = nlohmann::json::parse(detail::kConfigSchema);
  return schema;
}

}  // namespace lieint
