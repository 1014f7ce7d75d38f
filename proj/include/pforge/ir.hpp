#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pforge/bitvec.hpp"

namespace pforge {

constexpr uint32_t kMaxWidth = 1024;
constexpr uint32_t kDefaultMtu = 1500;

// Operation vocabulary shared by protocol compute nodes and pipeline ALUs.
enum class Op : uint8_t {
  Add, Sub, Mul, And, Or, Xor, Shl, Shr,
  Eq, Neq, Ltu, Leu, Lts, Les,
  Not, Neg,
  Mux,
};

const char* op_name(Op op);
std::optional<Op> op_from_name(std::string_view name);
bool op_is_unary(Op op);       // Not, Neg
bool op_is_binary(Op op);      // arithmetic/logic/shift/compare
bool op_is_compare(Op op);     // Eq..Les (width-1 result)
// Ops that keep the operand width (everything except compares and Mux).
bool op_is_value(Op op);

enum class ProtoKind : uint8_t {
  Constant, Slice, Merge, Extend, Unary, Binary, Conditional,
  PacketIn, PacketOut,
  ArrayRead, ArrayWrite, TableLookup, TableWrite,
};

enum class PipeKind : uint8_t {
  Register, Router, Constant, Slice, Merge, Extend, Alu,
  PacketIn, PacketOut,
  RamAccess, CamAccess,
};

const char* proto_kind_name(ProtoKind k);
const char* pipe_kind_name(PipeKind k);
std::optional<ProtoKind> proto_kind_from_name(std::string_view name);
std::optional<PipeKind> pipe_kind_from_name(std::string_view name);

// A value source: an output port of a node. Only PacketIn has two ports
// (0 = prefix, 1 = length); every other kind has at most one.
struct NodeRef {
  uint32_t node = 0;
  uint32_t port = 0;
  friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

struct ProtoNode {
  uint32_t id = 0;
  ProtoKind kind = ProtoKind::Constant;
  BitVec value;                 // Constant
  uint32_t offset = 0;          // Slice
  uint32_t width = 0;           // Constant/Slice/Extend
  bool sign_extend = false;     // Extend
  Op op = Op::Add;              // Unary/Binary
  uint32_t prefix_len = 0;      // PacketIn/PacketOut, bytes
  std::string mem;              // array or table id for state nodes
  std::vector<NodeRef> inputs;
  friend bool operator==(const ProtoNode&, const ProtoNode&) = default;
};

struct PipeNode {
  uint32_t id = 0;
  PipeKind kind = PipeKind::Register;
  uint32_t width = 0;           // Register/Constant/Slice/Extend/Alu operand width
  uint32_t offset = 0;          // Slice
  bool sign_extend = false;     // Extend
  bool has_value = false;       // Constant: design-time value present?
  BitVec value;                 // Constant (design-time)
  std::vector<Op> ops;          // Alu supported operations
  uint32_t latency = 1;         // Alu
  uint32_t prefix_len = 0;      // PacketIn/PacketOut, bytes
  uint32_t mtu = kDefaultMtu;   // PacketIn/PacketOut
  std::string mem;              // ram or cam id
  bool write = false;           // RamAccess/CamAccess direction
  std::vector<NodeRef> inputs;
  friend bool operator==(const PipeNode&, const PipeNode&) = default;
};

struct ArrayDecl {
  std::string id;
  uint32_t elem_width = 0;
  uint32_t num_elems = 0;
  friend bool operator==(const ArrayDecl&, const ArrayDecl&) = default;
};

struct TableDecl {
  std::string id;
  uint32_t key_width = 0;
  uint32_t num_entries = 0;
  friend bool operator==(const TableDecl&, const TableDecl&) = default;
};

enum class CamImpl : uint8_t { RegisterCam, HashCam };

struct RamDecl {
  std::string id;
  uint32_t elem_width = 0;
  uint32_t num_elems = 0;
  uint32_t latency = 1;
  friend bool operator==(const RamDecl&, const RamDecl&) = default;
};

struct CamDecl {
  std::string id;
  uint32_t key_width = 0;
  uint32_t num_entries = 0;
  uint32_t latency = 1;
  CamImpl impl = CamImpl::RegisterCam;
  friend bool operator==(const CamDecl&, const CamDecl&) = default;
};

// Index width for an addressable block: ceil(log2(n)), at least 1.
uint32_t index_width(uint32_t num_elems);

struct Program {
  std::vector<ProtoNode> nodes;
  std::vector<ArrayDecl> arrays;
  std::vector<TableDecl> tables;

  const ProtoNode* find(uint32_t id) const;
  const ArrayDecl* find_array(const std::string& id) const;
  const TableDecl* find_table(const std::string& id) const;
  friend bool operator==(const Program&, const Program&) = default;
};

struct Pipeline {
  std::vector<PipeNode> nodes;
  std::vector<RamDecl> rams;
  std::vector<CamDecl> cams;

  const PipeNode* find(uint32_t id) const;
  const RamDecl* find_ram(const std::string& id) const;
  const CamDecl* find_cam(const std::string& id) const;
  friend bool operator==(const Pipeline&, const Pipeline&) = default;
};

// Per-node runtime settings produced by the compiler and consumed by the
// pipeline executor and the bitstream encoder.
struct RuntimeConfig {
  std::map<uint32_t, uint32_t> router_select;       // router id -> input ordinal
  std::map<uint32_t, Op> alu_op;                    // alu id -> opcode
  std::map<uint32_t, BitVec> const_value;           // runtime constant id -> value
  std::map<std::string, std::string> mem_bind;      // array/table id -> ram/cam id
  friend bool operator==(const RuntimeConfig&, const RuntimeConfig&) = default;
};

// Number of output ports a node exposes.
uint32_t proto_output_count(ProtoKind k);
uint32_t pipe_output_count(const PipeNode& n);

// Output width of a value source. Needs the graph for state/input-derived
// widths; returns nullopt on dangling references or untypable nodes so the
// validator can report instead of crash. Recursive: only call on acyclic
// graphs (use the index types below on hot paths).
std::optional<uint32_t> proto_output_width(const Program& p, NodeRef ref);
std::optional<uint32_t> pipe_output_width(const Pipeline& a, NodeRef ref);

// Precomputed id map, topological order, and source widths. Tolerates
// broken graphs: topo() is empty on cycles/dangling refs and width() only
// answers for sources it could type.
class ProtoIndex {
public:
  explicit ProtoIndex(const Program& p);
  const Program& program() const { return *p_; }
  const ProtoNode* find(uint32_t id) const;
  std::optional<uint32_t> width(NodeRef ref) const;
  const std::optional<std::vector<uint32_t>>& topo() const { return topo_; }

private:
  const Program* p_;
  std::map<uint32_t, const ProtoNode*> by_id_;
  std::map<NodeRef, uint32_t> widths_;
  std::optional<std::vector<uint32_t>> topo_;
};

class PipeIndex {
public:
  explicit PipeIndex(const Pipeline& a);
  const Pipeline& pipeline() const { return *a_; }
  const PipeNode* find(uint32_t id) const;
  std::optional<uint32_t> width(NodeRef ref) const;
  const std::optional<std::vector<uint32_t>>& topo() const { return topo_; }

private:
  const Pipeline* a_;
  std::map<uint32_t, const PipeNode*> by_id_;
  std::map<NodeRef, uint32_t> widths_;
  std::optional<std::vector<uint32_t>> topo_;
};

// Required input arity. Merge (and pipeline Router) are variadic; nullopt.
std::optional<uint32_t> proto_input_arity(ProtoKind k);
std::optional<uint32_t> pipe_input_arity(const PipeNode& n);

// ALU input arity from its op list: 3 with Mux, 2 with any binary op, else 1.
uint32_t alu_arity(const std::vector<Op>& ops);

// Topological order of node ids (inputs before consumers). Returns nullopt
// if the graph has a cycle or dangling references. Ties broken by node id
// so the order is deterministic.
std::optional<std::vector<uint32_t>> proto_topo_order(const Program& p);
std::optional<std::vector<uint32_t>> pipe_topo_order(const Pipeline& a);

uint32_t proto_edge_count(const Program& p);
uint32_t pipe_edge_count(const Pipeline& a);

// Incremental graph construction used by the bundled programs, the
// generators, and tests. add() assigns sequential ids starting at 0.
class ProgramBuilder {
public:
  uint32_t add(ProtoNode n);
  NodeRef constant(const BitVec& v);
  NodeRef constant_u64(uint64_t v, uint32_t width);
  NodeRef constant_bytes(std::initializer_list<uint8_t> bytes);
  NodeRef slice(NodeRef in, uint32_t offset, uint32_t width);
  NodeRef merge(std::vector<NodeRef> ins);
  NodeRef extend(NodeRef in, uint32_t width, bool sign);
  NodeRef unary(Op op, NodeRef a);
  NodeRef binary(Op op, NodeRef a, NodeRef b);
  NodeRef conditional(NodeRef cond, NodeRef t, NodeRef f);
  // Returns the PacketIn node id; use {id,0} for prefix and {id,1} for length.
  uint32_t packet_in(uint32_t prefix_len);
  uint32_t packet_out(uint32_t prefix_len, NodeRef cmd, NodeRef prefix, NodeRef length);
  NodeRef array_read(const std::string& id, NodeRef index);
  uint32_t array_write(const std::string& id, NodeRef index, NodeRef value, NodeRef enable);
  NodeRef table_lookup(const std::string& id, NodeRef key);
  NodeRef table_write(const std::string& id, NodeRef key, NodeRef hint, NodeRef enable);

  Program&& take() { return std::move(program_); }
  Program& program() { return program_; }

private:
  Program program_;
  uint32_t next_id_ = 0;
};

class PipelineBuilder {
public:
  uint32_t add(PipeNode n);
  NodeRef reg(NodeRef in, uint32_t width);
  NodeRef router(std::vector<NodeRef> ins);
  NodeRef constant(const BitVec& v);                      // design-time
  NodeRef runtime_constant(uint32_t width);
  NodeRef slice(NodeRef in, uint32_t offset, uint32_t width);
  NodeRef merge(std::vector<NodeRef> ins);
  NodeRef extend(NodeRef in, uint32_t width, bool sign);
  NodeRef alu(uint32_t width, std::vector<Op> ops, uint32_t latency,
              std::vector<NodeRef> ins);
  uint32_t packet_in(uint32_t prefix_len, uint32_t mtu = kDefaultMtu);
  uint32_t packet_out(uint32_t prefix_len, NodeRef cmd, NodeRef prefix, NodeRef length,
                      uint32_t mtu = kDefaultMtu);
  NodeRef ram_read(const std::string& id, NodeRef index);
  uint32_t ram_write(const std::string& id, NodeRef index, NodeRef value, NodeRef enable);
  NodeRef cam_lookup(const std::string& id, NodeRef key);
  NodeRef cam_write(const std::string& id, NodeRef key, NodeRef hint, NodeRef enable);

  Pipeline&& take() { return std::move(pipeline_); }
  Pipeline& pipeline() { return pipeline_; }

private:
  Pipeline pipeline_;
  uint32_t next_id_ = 0;
};

// Node census used by the stats and fixedgen reports.
struct Census {
  std::map<std::string, uint32_t> kind_counts;
  uint32_t edges = 0;
};

Census census_of(const Program& p);
Census census_of(const Pipeline& a);

}  // namespace pforge
