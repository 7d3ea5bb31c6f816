#include "document.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace potts_af::cli {

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  out.push_back('"');
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20)
          out += fmt::format("\\u{:04x}", static_cast<int>(ch));
        else
          out.push_back(ch);
    }
  }
  out.push_back('"');
  return out;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  return out + "\"";
}

bool is_infinite(const Scalar& v) { return std::holds_alternative<double>(v) && std::isinf(std::get<double>(v)); }

std::string json_scalar(const Scalar& v) {
  if (std::holds_alternative<std::string>(v) || is_infinite(v)) return json_escape(format_scalar(v));
  return format_scalar(v);
}

}  // namespace

std::string format_scalar(const Scalar& v) {
  if (const auto* d = std::get_if<double>(&v)) {
    if (std::isnan(*d)) throw std::domain_error("refusing to serialize NaN");
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    if (*d == 0.0) return "0";
    return fmt::format("{:.17g}", *d);
  }
  if (const auto* i = std::get_if<std::int64_t>(&v)) return fmt::format("{}", *i);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return std::get<std::string>(v);
}

Document::Document(std::string command) : command_(std::move(command)) {}

Document& Document::field(std::string key, Scalar value) {
  format_scalar(value);
  fields_.emplace_back(std::move(key), std::move(value));
  return *this;
}

Document& Document::columns(std::vector<std::string> names) {
  columns_ = std::move(names);
  return *this;
}

Document& Document::row(std::vector<Scalar> values) {
  if (values.size() != columns_.size()) throw std::logic_error("row width differs from column count");
  for (const auto& v : values) format_scalar(v);
  rows_.push_back(std::move(values));
  return *this;
}

Document& Document::summary(std::string key, Scalar value) {
  format_scalar(value);
  summary_.emplace_back(std::move(key), std::move(value));
  return *this;
}

std::string Document::render(Format f) const { return f == Format::json ? json() : csv(); }

std::string Document::json() const {
  std::string out = "{\n";
  out += fmt::format("  \"schema\": {},\n  \"command\": {}", json_escape(kSchema), json_escape(command_));
  for (const auto& [k, v] : fields_) out += fmt::format(",\n  {}: {}", json_escape(k), json_scalar(v));
  if (!columns_.empty()) {
    out += ",\n  \"columns\": [";
    for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? ", " : "") + json_escape(columns_[i]);
    out += "],\n  \"rows\": [";
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      out += r ? ",\n    [" : "\n    [";
      for (std::size_t i = 0; i < rows_[r].size(); ++i) out += (i ? ", " : "") + json_scalar(rows_[r][i]);
      out += "]";
    }
    out += rows_.empty() ? "]" : "\n  ]";
  }
  if (!summary_.empty()) {
    out += ",\n  \"summary\": {";
    for (std::size_t i = 0; i < summary_.size(); ++i)
      out += fmt::format("{}\n    {}: {}", i ? "," : "", json_escape(summary_[i].first), json_scalar(summary_[i].second));
    out += "\n  }";
  }
  out += "\n}\n";
  return out;
}

std::string Document::csv() const {
  std::string out = fmt::format("# schema={}\n# command={}\n", kSchema, command_);
  if (columns_.empty()) {
    out += "key,value\n";
    for (const auto& [k, v] : fields_) out += csv_cell(k) + "," + csv_cell(format_scalar(v)) + "\n";
    for (const auto& [k, v] : summary_) out += csv_cell(k) + "," + csv_cell(format_scalar(v)) + "\n";
    return out;
  }
  for (const auto& [k, v] : fields_) out += fmt::format("# {}={}\n", k, format_scalar(v));
  for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + csv_cell(columns_[i]);
  out += "\n";
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + csv_cell(format_scalar(r[i]));
    out += "\n";
  }
  for (const auto& [k, v] : summary_) out += fmt::format("# summary {}={}\n", k, format_scalar(v));
  return out;
}

Document error_document(const std::string& command, const std::string& kind, const std::string& message) {
  Document d(command);
  d.field("status", std::string("error"));
  d.field("error_kind", kind);
  d.field("error_message", message);
  return d;
}

}  // namespace potts_af::cli
