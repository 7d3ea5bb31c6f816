#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace potts_af::cli {

inline constexpr const char* kSchema = "potts-af/1";

// Doubles print with 17 significant digits; +-infinity prints as "inf"/"-inf"; NaN is refused.
using Scalar = std::variant<double, std::int64_t, std::string, bool>;

std::string format_scalar(const Scalar& v);

enum class Format { json, csv };

// Ordered header fields plus an optional table, rendered as JSON or CSV.
class Document {
 public:
  explicit Document(std::string command);

  Document& field(std::string key, Scalar value);
  Document& columns(std::vector<std::string> names);
  Document& row(std::vector<Scalar> values);
  // Free-form trailing CSV comment / JSON "summary" object entry.
  Document& summary(std::string key, Scalar value);

  std::string render(Format f) const;

 private:
  std::string json() const;
  std::string csv() const;

  std::string command_;
  std::vector<std::pair<std::string, Scalar>> fields_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Scalar>> rows_;
  std::vector<std::pair<std::string, Scalar>> summary_;
};

Document error_document(const std::string& command, const std::string& kind, const std::string& message);

}  // namespace potts_af::cli
