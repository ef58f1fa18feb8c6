#ifndef SECTORLAB_REPORT_HPP
#define SECTORLAB_REPORT_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

#include "sectorlab/model.hpp"

namespace sectorlab {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunOptions {
  std::uint64_t seed = kDefaultSeed;
  int jobs = 1;
  std::optional<double> tol_override;
};

struct Report {
  nlohmann::json body;
  // 0 ok, 1 validation error, 2 engine assertion failure, 3 I/O error.
  int exit_code = 0;
};

// Runs every requested analysis in declaration order; engine failures are
// embedded per analysis without aborting the rest.
Report run_model(const Model& model, const std::string& input_digest,
                 const RunOptions& options);

Report run_model_text(const std::string& model_text, const RunOptions& options);
Report run_model_file(const std::string& path, const RunOptions& options);

// Canonical serialization: keys sorted, floats rendered with 12 significant
// digits. Identical reports serialize to identical bytes.
std::string emit_json(const nlohmann::json& report);
std::string emit_text(const nlohmann::json& report);

std::string fnv1a_digest(const std::string& bytes);

}  // namespace sectorlab

#endif  // SECTORLAB_REPORT_HPP
