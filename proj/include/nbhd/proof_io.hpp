#pragma once

#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nbhd/logics.hpp"

namespace nbhd {

/// A proof file: the logic, the lines, and for entailment certificates the
/// premise set ("gamma") and the conclusion.
struct ProofFile {
  LogicDescriptor logic;
  Proof proof;
  std::optional<std::vector<Formula>> gamma;
  std::optional<Formula> conclusion;

  bool is_certificate() const { return conclusion.has_value(); }
};

/// Throws FormatError with the JSON path of the offending entry.
ProofFile proof_from_json(const nlohmann::json& doc);
ProofFile parse_proof(std::string_view text);
ProofFile load_proof(const std::filesystem::path& path);

nlohmann::json proof_to_json(const ProofFile& file);

LogicDescriptor logic_from_json(const nlohmann::json& j);
nlohmann::json logic_to_json(const LogicDescriptor& l);

/// Verifies the proof, or the entailment certificate when a conclusion is present.
ProofVerdict check(const ProofFile& file);

}  // namespace nbhd
