#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pforge/ir.hpp"
#include "pforge/validate.hpp"

namespace pforge {

struct Packet {
  std::vector<uint8_t> bytes;
  size_t length() const { return bytes.size(); }
  friend bool operator==(const Packet&, const Packet&) = default;
};

// cmd input decides the verdict: 0 = emit prefix followed by the original
// remainder, 1 = emit the prefix only, 2 (and the reserved 3) = drop. The
// length input gives the final packet length; shorter output is truncated,
// longer is zero padded.
struct PacketResult {
  bool drop = false;
  std::vector<uint8_t> bytes;
  friend bool operator==(const PacketResult&, const PacketResult&) = default;
};

struct CamEntry {
  bool valid = false;
  BitVec key;
  friend bool operator==(const CamEntry&, const CamEntry&) = default;
};

// Persistent memory contents. Keys are the owning artifact's memory ids:
// array/table ids when running a protocol program, ram/cam ids when running
// a configured pipeline. remapped() translates between the two domains.
struct StateStore {
  std::map<std::string, std::map<uint64_t, BitVec>> ram;
  std::map<std::string, std::vector<CamEntry>> cam;
  uint64_t hash_seed = 0;

  StateStore remapped(const std::map<std::string, std::string>& bind) const;
  friend bool operator==(const StateStore&, const StateStore&) = default;
};

// Exact operation semantics shared by protocol compute nodes and ALUs.
// Unary ops take one operand, Mux takes (cond, t, f), everything else two.
BitVec eval_op(Op op, std::span<const BitVec> operands);

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluates the program on one packet. Reads observe the pre-packet state;
// enabled writes commit after the packet in ascending node id order.
PacketResult run_protocol(const Program& program, StateStore& state, const Packet& packet);

// Same discipline with the runtime configuration resolving router inputs,
// ALU opcodes, constant values, and memory bindings. The state store is
// keyed by the architecture's ram/cam ids.
PacketResult run_pipeline(const Pipeline& arch, const RuntimeConfig& config,
                          StateStore& state, const Packet& packet);

struct Mismatch {
  size_t packet_index = 0;       // == packets_run for post-trace state mismatches
  Packet packet;
  PacketResult oracle;
  PacketResult pipeline;
  uint32_t first_divergent_node = kNoNode;
  std::string detail;
};

struct EquivalenceReport {
  size_t packets_run = 0;
  std::vector<Mismatch> mismatches;
  bool equivalent() const { return mismatches.empty(); }
};

// Runs program and configured pipeline from the same initial state over a
// trace, comparing packet verdicts and the post-trace state through the
// config's memory binding. `initial` is given in the program's id domain.
EquivalenceReport check_equivalence(const Program& program, const Pipeline& arch,
                                    const RuntimeConfig& config,
                                    std::span<const Packet> packets,
                                    const StateStore& initial = {});

std::vector<Packet> random_packets(uint64_t seed, size_t count, size_t max_len = 96);

// Trace files: one packet per line in lowercase hex, '#' starts a comment.
std::vector<Packet> load_trace(std::string_view text);
std::string store_trace(std::span<const Packet> packets);

// State preload files in the canonical text format.
StateStore load_state(std::string_view text);
std::string store_state(const StateStore& s);

}  // namespace pforge
