#pragma once

// Problem specs: a JSON document with sections format_version, domain, cone,
// mapping, objective, solution, certificate and parameters.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "genequo/increase.hpp"

namespace genequo::cli {

inline constexpr int kFormatVersion = 1;

using Json = nlohmann::json;

struct CertificateRequest {
  std::string method;  // linear | local | manual | estimate; empty when absent
  std::optional<double> a;
  std::optional<double> delta;
  std::optional<Vector> center;
};

struct ProblemSpec {
  int dimension = 0;
  DomainBox box;
  Cone cone = Cone::orthant(1);
  std::string mapping_type;
  std::optional<SetValuedMap> map;
  std::optional<ScalarFunction> objective;
  std::string objective_text;
  std::optional<Vector> solution;
  CertificateRequest certificate;
  Json parameters = Json::object();
  std::uint64_t seed = kDefaultSeed;
};

/// Throws InputError carrying the offending field path.
ProblemSpec parse_spec(const Json& document);
ProblemSpec load_spec(const std::string& path);

/// Typed accessors over a JSON object that report field paths on error.
class Fields {
 public:
  Fields(const Json& object, std::string path);

  bool has(const std::string& key) const;
  const Json& raw(const std::string& key) const;
  std::string child(const std::string& key) const;

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key) const;
  int integer(const std::string& key, int fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string string(const std::string& key) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  Vector vector(const std::string& key, long dim = -1) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<Vector> points(const std::string& key, long dim = -1) const;
  Matrix matrix(const std::string& key, long cols = -1) const;
  Fields object(const std::string& key) const;

  const std::string& path() const noexcept { return path_; }

 private:
  const Json& object_;
  std::string path_;
};

double as_number(const Json& value, const std::string& path);
Vector as_vector(const Json& value, const std::string& path, long dim = -1);

}  // namespace genequo::cli
