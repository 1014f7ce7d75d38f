#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "pforge/ir.hpp"

namespace pforge {

// Raised for malformed artifact documents: syntax errors carry the line and
// byte offset, schema errors name the offending field.
struct ArtifactError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ArtifactKind { Protocol, Pipeline, Config };

// Canonical text form: JSON with node records sorted by id, declarations
// sorted by id, fixed key order. Structurally equal artifacts serialize to
// identical bytes. The schema is documented in docs/schema.md.
std::string store_artifact(const Program& p);
std::string store_artifact(const Pipeline& a);
std::string store_artifact(const RuntimeConfig& c);

Program load_program(std::string_view text);
Pipeline load_pipeline(std::string_view text);
RuntimeConfig load_config(std::string_view text);

// Reads the top-level "kind" field.
ArtifactKind detect_kind(std::string_view text);

using Artifact = std::variant<Program, Pipeline, RuntimeConfig>;
Artifact load_artifact(std::string_view text);

}  // namespace pforge
