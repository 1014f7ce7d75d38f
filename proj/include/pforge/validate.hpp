#pragma once

#include <map>
#include <string>
#include <vector>

#include "pforge/ir.hpp"

namespace pforge {

constexpr uint32_t kNoNode = 0xFFFFFFFF;  // graph-level diagnostics

enum class Severity : uint8_t { Error, Warning };

struct Diagnostic {
  uint32_t node = kNoNode;
  std::string code;
  std::string message;
  Severity severity = Severity::Error;
};

struct ValidationReport {
  bool ok = false;  // true iff no error-severity diagnostics
  std::vector<Diagnostic> diagnostics;

  void error(uint32_t node, std::string code, std::string message) {
    diagnostics.push_back({node, std::move(code), std::move(message), Severity::Error});
  }
  bool has(const std::string& code) const {
    for (const Diagnostic& d : diagnostics)
      if (d.code == code) return true;
    return false;
  }
  std::string summary() const;
};

ValidationReport validate_protocol(const Program& program);
ValidationReport validate_pipeline(const Pipeline& arch);

// Arrival cycle per value source of a valid pipeline. Sources fed only by
// constants are cycle-free and absent from the map. PacketIn outputs arrive
// at cycle 0; every other output arrives at the common input arrival plus
// the node latency (Register 1, Alu/memory as declared, conversions and
// routers 0).
std::map<NodeRef, uint32_t> pipe_arrivals(const Pipeline& arch);

// Arrival at the PacketOut inputs; 0 when the output is constant-fed.
uint32_t pipe_depth(const Pipeline& arch);

// Runtime-config invariants against an architecture: router ordinals in
// range, opcodes supported, constants sized, bindings resolvable. With a
// program, additionally checks that bound state dimensions match exactly.
std::vector<std::string> config_errors(const Pipeline& arch, const RuntimeConfig& config,
                                       const Program* program = nullptr);

}  // namespace pforge
