#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace inceprop {

/// Strict view over a JSON object: every accessed key is recorded and
/// finish() rejects anything left over. Failures throw ConfigInvalid with the
/// dotted path of the offending field.
class JsonObjectReader {
 public:
  JsonObjectReader(const nlohmann::json& object, std::string path);

  bool has(const std::string& key) const;
  const nlohmann::json& raw(const std::string& key);

  double number(const std::string& key);
  double number_or(const std::string& key, double fallback);
  long integer(const std::string& key);
  long integer_or(const std::string& key, long fallback);
  std::string string(const std::string& key);
  std::string string_or(const std::string& key, std::string fallback);
  bool boolean_or(const std::string& key, bool fallback);
  std::vector<double> numbers(const std::string& key);
  std::optional<JsonObjectReader> object(const std::string& key);
  JsonObjectReader required_object(const std::string& key);

  std::string path_of(const std::string& key) const;
  const std::string& path() const noexcept { return path_; }

  void finish() const;

 private:
  const nlohmann::json* object_;
  std::string path_;
  std::set<std::string> used_;
};

[[noreturn]] void config_error(const std::string& path,
                               const std::string& what);

}  // namespace inceprop
