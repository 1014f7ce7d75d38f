#include "pforge/ir.hpp"

#include <algorithm>
#include <cassert>

namespace pforge {

namespace {
struct OpInfo {
  Op op;
  const char* name;
};
constexpr OpInfo kOps[] = {
    {Op::Add, "ADD"}, {Op::Sub, "SUB"}, {Op::Mul, "MUL"}, {Op::And, "AND"},
    {Op::Or, "OR"},   {Op::Xor, "XOR"}, {Op::Shl, "SHL"}, {Op::Shr, "SHR"},
    {Op::Eq, "EQ"},   {Op::Neq, "NEQ"}, {Op::Ltu, "LTU"}, {Op::Leu, "LEU"},
    {Op::Lts, "LTS"}, {Op::Les, "LES"}, {Op::Not, "NOT"}, {Op::Neg, "NEG"},
    {Op::Mux, "MUX"},
};

constexpr const char* kProtoNames[] = {
    "constant", "slice", "merge", "extend", "unary", "binary", "conditional",
    "packet_in", "packet_out", "array_read", "array_write", "table_lookup",
    "table_write",
};
constexpr const char* kPipeNames[] = {
    "register", "router", "constant", "slice", "merge", "extend", "alu",
    "packet_in", "packet_out", "ram_access", "cam_access",
};
}  // namespace

const char* op_name(Op op) {
  for (const OpInfo& i : kOps)
    if (i.op == op) return i.name;
  return "?";
}

std::optional<Op> op_from_name(std::string_view name) {
  for (const OpInfo& i : kOps)
    if (name == i.name) return i.op;
  return std::nullopt;
}

bool op_is_unary(Op op) { return op == Op::Not || op == Op::Neg; }
bool op_is_binary(Op op) { return !op_is_unary(op) && op != Op::Mux; }
bool op_is_compare(Op op) {
  switch (op) {
    case Op::Eq: case Op::Neq: case Op::Ltu: case Op::Leu:
    case Op::Lts: case Op::Les:
      return true;
    default:
      return false;
  }
}
bool op_is_value(Op op) { return !op_is_compare(op) && op != Op::Mux; }

const char* proto_kind_name(ProtoKind k) { return kProtoNames[size_t(k)]; }
const char* pipe_kind_name(PipeKind k) { return kPipeNames[size_t(k)]; }

std::optional<ProtoKind> proto_kind_from_name(std::string_view name) {
  for (size_t i = 0; i < std::size(kProtoNames); ++i)
    if (name == kProtoNames[i]) return ProtoKind(i);
  return std::nullopt;
}

std::optional<PipeKind> pipe_kind_from_name(std::string_view name) {
  for (size_t i = 0; i < std::size(kPipeNames); ++i)
    if (name == kPipeNames[i]) return PipeKind(i);
  return std::nullopt;
}

uint32_t index_width(uint32_t num_elems) {
  uint32_t w = 0;
  while ((uint64_t{1} << w) < num_elems) ++w;
  return std::max(w, 1u);
}

const ProtoNode* Program::find(uint32_t id) const {
  for (const ProtoNode& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}
const ArrayDecl* Program::find_array(const std::string& id) const {
  for (const ArrayDecl& a : arrays)
    if (a.id == id) return &a;
  return nullptr;
}
const TableDecl* Program::find_table(const std::string& id) const {
  for (const TableDecl& t : tables)
    if (t.id == id) return &t;
  return nullptr;
}

const PipeNode* Pipeline::find(uint32_t id) const {
  for (const PipeNode& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}
const RamDecl* Pipeline::find_ram(const std::string& id) const {
  for (const RamDecl& r : rams)
    if (r.id == id) return &r;
  return nullptr;
}
const CamDecl* Pipeline::find_cam(const std::string& id) const {
  for (const CamDecl& c : cams)
    if (c.id == id) return &c;
  return nullptr;
}

uint32_t proto_output_count(ProtoKind k) {
  switch (k) {
    case ProtoKind::PacketIn: return 2;
    case ProtoKind::PacketOut:
    case ProtoKind::ArrayWrite: return 0;
    default: return 1;
  }
}

uint32_t pipe_output_count(const PipeNode& n) {
  switch (n.kind) {
    case PipeKind::PacketIn: return 2;
    case PipeKind::PacketOut: return 0;
    case PipeKind::RamAccess: return n.write ? 0 : 1;  // single write port, no result
    default: return 1;  // CamAccess writes do produce the written index
  }
}

namespace {
// Per-kind output width given input widths through a callback; shared by
// the memoized free functions and the topo-order index fill.
template <typename InW>
std::optional<uint32_t> proto_width_of(const Program& p, const ProtoNode& n,
                                       uint32_t port, InW input_width) {
  if (port >= proto_output_count(n.kind)) return std::nullopt;
  switch (n.kind) {
    case ProtoKind::Constant: return n.width;
    case ProtoKind::Slice: return n.width;
    case ProtoKind::Merge: {
      uint32_t total = 0;
      for (size_t i = 0; i < n.inputs.size(); ++i) {
        auto w = input_width(i);
        if (!w) return std::nullopt;
        total += *w;
      }
      return total;
    }
    case ProtoKind::Extend: return n.width;
    case ProtoKind::Unary: return input_width(0);
    case ProtoKind::Binary:
      return op_is_compare(n.op) ? std::optional<uint32_t>(1) : input_width(0);
    case ProtoKind::Conditional: return input_width(1);
    case ProtoKind::PacketIn:
      return port == 0 ? n.prefix_len * 8 : 16;
    case ProtoKind::ArrayRead: {
      const ArrayDecl* a = p.find_array(n.mem);
      if (!a) return std::nullopt;
      return a->elem_width;
    }
    case ProtoKind::TableLookup:
    case ProtoKind::TableWrite: {
      const TableDecl* t = p.find_table(n.mem);
      if (!t) return std::nullopt;
      return index_width(t->num_entries) + 1;
    }
    default: return std::nullopt;
  }
}

template <typename InW>
std::optional<uint32_t> pipe_width_of(const Pipeline& a, const PipeNode& n,
                                      uint32_t port, InW input_width) {
  if (port >= pipe_output_count(n)) return std::nullopt;
  switch (n.kind) {
    case PipeKind::Register: return n.width;
    case PipeKind::Router: return input_width(0);
    case PipeKind::Constant: return n.width;
    case PipeKind::Slice: return n.width;
    case PipeKind::Merge: {
      uint32_t total = 0;
      for (size_t i = 0; i < n.inputs.size(); ++i) {
        auto w = input_width(i);
        if (!w) return std::nullopt;
        total += *w;
      }
      return total;
    }
    case PipeKind::Extend: return n.width;
    case PipeKind::Alu: {
      // Predicate ALUs (compare-only op lists) produce one bit.
      bool all_cmp = !n.ops.empty();
      for (Op o : n.ops) all_cmp = all_cmp && op_is_compare(o);
      return all_cmp ? 1 : n.width;
    }
    case PipeKind::PacketIn:
      return port == 0 ? n.prefix_len * 8 : 16;
    case PipeKind::PacketOut: return std::nullopt;
    case PipeKind::RamAccess: {
      const RamDecl* r = a.find_ram(n.mem);
      if (!r) return std::nullopt;
      return r->elem_width;
    }
    case PipeKind::CamAccess: {
      const CamDecl* c = a.find_cam(n.mem);
      if (!c) return std::nullopt;
      return index_width(c->num_entries) + 1;
    }
  }
  return std::nullopt;
}
}  // namespace

std::optional<uint32_t> proto_output_width(const Program& p, NodeRef ref) {
  std::map<uint32_t, const ProtoNode*> by_id;
  for (const ProtoNode& n : p.nodes) by_id.emplace(n.id, &n);
  std::map<NodeRef, std::optional<uint32_t>> memo;
  auto rec = [&](auto&& self, NodeRef r) -> std::optional<uint32_t> {
    auto it = memo.find(r);
    if (it != memo.end()) return it->second;
    auto nit = by_id.find(r.node);
    if (nit == by_id.end()) return std::nullopt;
    const ProtoNode& n = *nit->second;
    auto w = proto_width_of(p, n, r.port, [&](size_t i) -> std::optional<uint32_t> {
      if (i >= n.inputs.size()) return std::nullopt;
      return self(self, n.inputs[i]);
    });
    memo.emplace(r, w);
    return w;
  };
  return rec(rec, ref);
}

std::optional<uint32_t> pipe_output_width(const Pipeline& a, NodeRef ref) {
  std::map<uint32_t, const PipeNode*> by_id;
  for (const PipeNode& n : a.nodes) by_id.emplace(n.id, &n);
  std::map<NodeRef, std::optional<uint32_t>> memo;
  auto rec = [&](auto&& self, NodeRef r) -> std::optional<uint32_t> {
    auto it = memo.find(r);
    if (it != memo.end()) return it->second;
    auto nit = by_id.find(r.node);
    if (nit == by_id.end()) return std::nullopt;
    const PipeNode& n = *nit->second;
    auto w = pipe_width_of(a, n, r.port, [&](size_t i) -> std::optional<uint32_t> {
      if (i >= n.inputs.size()) return std::nullopt;
      return self(self, n.inputs[i]);
    });
    memo.emplace(r, w);
    return w;
  };
  return rec(rec, ref);
}

std::optional<uint32_t> proto_input_arity(ProtoKind k) {
  switch (k) {
    case ProtoKind::Constant:
    case ProtoKind::PacketIn: return 0;
    case ProtoKind::Slice:
    case ProtoKind::Extend:
    case ProtoKind::Unary:
    case ProtoKind::ArrayRead:
    case ProtoKind::TableLookup: return 1;
    case ProtoKind::Binary: return 2;
    case ProtoKind::Conditional:
    case ProtoKind::PacketOut:
    case ProtoKind::ArrayWrite:
    case ProtoKind::TableWrite: return 3;
    case ProtoKind::Merge: return std::nullopt;
  }
  return std::nullopt;
}

uint32_t alu_arity(const std::vector<Op>& ops) {
  bool has_mux = false, has_binary = false;
  for (Op o : ops) {
    has_mux = has_mux || o == Op::Mux;
    has_binary = has_binary || op_is_binary(o);
  }
  if (has_mux) return 3;
  return has_binary ? 2 : 1;
}

std::optional<uint32_t> pipe_input_arity(const PipeNode& n) {
  switch (n.kind) {
    case PipeKind::Constant:
    case PipeKind::PacketIn: return 0;
    case PipeKind::Register:
    case PipeKind::Slice:
    case PipeKind::Extend: return 1;
    case PipeKind::Alu: return alu_arity(n.ops);
    case PipeKind::PacketOut: return 3;
    case PipeKind::RamAccess: return n.write ? 3 : 1;
    case PipeKind::CamAccess: return n.write ? 3 : 1;
    case PipeKind::Router:
    case PipeKind::Merge: return std::nullopt;
  }
  return std::nullopt;
}

namespace {
template <typename Node>
std::optional<std::vector<uint32_t>> topo_order(const std::vector<Node>& nodes) {
  std::map<uint32_t, const Node*> by_id;
  for (const Node& n : nodes) {
    if (by_id.count(n.id)) return std::nullopt;
    by_id[n.id] = &n;
  }
  std::map<uint32_t, uint32_t> indeg;
  std::map<uint32_t, std::vector<uint32_t>> consumers;
  for (const Node& n : nodes) {
    indeg[n.id] += 0;
    for (const NodeRef& in : n.inputs) {
      if (!by_id.count(in.node)) return std::nullopt;
      ++indeg[n.id];
      consumers[in.node].push_back(n.id);
    }
  }
  // Kahn's algorithm over an ordered ready set: deterministic order.
  std::vector<uint32_t> ready;
  for (auto& [id, d] : indeg)
    if (d == 0) ready.push_back(id);
  std::vector<uint32_t> order;
  while (!ready.empty()) {
    std::sort(ready.begin(), ready.end(), std::greater<>());
    uint32_t id = ready.back();
    ready.pop_back();
    order.push_back(id);
    for (uint32_t c : consumers[id])
      if (--indeg[c] == 0) ready.push_back(c);
  }
  if (order.size() != nodes.size()) return std::nullopt;  // cycle
  return order;
}
}  // namespace

std::optional<std::vector<uint32_t>> proto_topo_order(const Program& p) {
  return topo_order(p.nodes);
}
std::optional<std::vector<uint32_t>> pipe_topo_order(const Pipeline& a) {
  return topo_order(a.nodes);
}

ProtoIndex::ProtoIndex(const Program& p) : p_(&p) {
  for (const ProtoNode& n : p.nodes) by_id_.emplace(n.id, &n);
  topo_ = proto_topo_order(p);
  if (!topo_) return;
  for (uint32_t id : *topo_) {
    const ProtoNode* n = by_id_.at(id);
    for (uint32_t port = 0; port < proto_output_count(n->kind); ++port) {
      auto w = proto_width_of(p, *n, port, [&](size_t i) -> std::optional<uint32_t> {
        if (i >= n->inputs.size()) return std::nullopt;
        return width(n->inputs[i]);
      });
      if (w) widths_.emplace(NodeRef{id, port}, *w);
    }
  }
}

const ProtoNode* ProtoIndex::find(uint32_t id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : it->second;
}

std::optional<uint32_t> ProtoIndex::width(NodeRef ref) const {
  auto it = widths_.find(ref);
  if (it == widths_.end()) return std::nullopt;
  return it->second;
}

PipeIndex::PipeIndex(const Pipeline& a) : a_(&a) {
  for (const PipeNode& n : a.nodes) by_id_.emplace(n.id, &n);
  topo_ = pipe_topo_order(a);
  if (!topo_) return;
  for (uint32_t id : *topo_) {
    const PipeNode* n = by_id_.at(id);
    for (uint32_t port = 0; port < pipe_output_count(*n); ++port) {
      auto w = pipe_width_of(a, *n, port, [&](size_t i) -> std::optional<uint32_t> {
        if (i >= n->inputs.size()) return std::nullopt;
        return width(n->inputs[i]);
      });
      if (w) widths_.emplace(NodeRef{id, port}, *w);
    }
  }
}

const PipeNode* PipeIndex::find(uint32_t id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : it->second;
}

std::optional<uint32_t> PipeIndex::width(NodeRef ref) const {
  auto it = widths_.find(ref);
  if (it == widths_.end()) return std::nullopt;
  return it->second;
}

uint32_t proto_edge_count(const Program& p) {
  uint32_t n = 0;
  for (const ProtoNode& node : p.nodes) n += uint32_t(node.inputs.size());
  return n;
}
uint32_t pipe_edge_count(const Pipeline& a) {
  uint32_t n = 0;
  for (const PipeNode& node : a.nodes) n += uint32_t(node.inputs.size());
  return n;
}

uint32_t ProgramBuilder::add(ProtoNode n) {
  n.id = next_id_++;
  program_.nodes.push_back(std::move(n));
  return program_.nodes.back().id;
}

NodeRef ProgramBuilder::constant(const BitVec& v) {
  ProtoNode n;
  n.kind = ProtoKind::Constant;
  n.value = v;
  n.width = v.width();
  return {add(std::move(n)), 0};
}
NodeRef ProgramBuilder::constant_u64(uint64_t v, uint32_t width) {
  return constant(BitVec::from_u64(v, width));
}
NodeRef ProgramBuilder::constant_bytes(std::initializer_list<uint8_t> bytes) {
  std::vector<uint8_t> b(bytes);
  return constant(BitVec::from_bytes(b, uint32_t(b.size() * 8)));
}
NodeRef ProgramBuilder::slice(NodeRef in, uint32_t offset, uint32_t width) {
  ProtoNode n;
  n.kind = ProtoKind::Slice;
  n.offset = offset;
  n.width = width;
  n.inputs = {in};
  return {add(std::move(n)), 0};
}
NodeRef ProgramBuilder::merge(std::vector<NodeRef> ins) {
  ProtoNode n;
  n.kind = ProtoKind::Merge;
  n.inputs = std::move(ins);
  return {add(std::move(n)), 0};
}
NodeRef ProgramBuilder::extend(NodeRef in, uint32_t width, bool sign) {
  ProtoNode n;
  n.kind = ProtoKind::Extend;
  n.width = width;
  n.sign_extend = sign;
  n.inputs = {in};
  return {add(std::move(n)), 0};
}
NodeRef ProgramBuilder::unary(Op op, NodeRef a) {
  ProtoNode n;
  n.kind = ProtoKind::Unary;
  n.op = op;
  n.inputs = {a};
  return {add(std::move(n)), 0};
}
NodeRef ProgramBuilder::binary(Op op, NodeRef a, NodeRef b) {
  ProtoNode n;
  n.kind = ProtoKind::Binary;
  n.op = op;
  n.inputs = {a, b};
  return {add(std::move(n)), 0};
}
NodeRef ProgramBuilder::conditional(NodeRef cond, NodeRef t, NodeRef f) {
  ProtoNode n;
  n.kind = ProtoKind::Conditional;
  n.inputs = {cond, t, f};
  return {add(std::move(n)), 0};
}
uint32_t ProgramBuilder::packet_in(uint32_t prefix_len) {
  ProtoNode n;
  n.kind = ProtoKind::PacketIn;
  n.prefix_len = prefix_len;
  return add(std::move(n));
}
uint32_t ProgramBuilder::packet_out(uint32_t prefix_len, NodeRef cmd, NodeRef prefix,
                                    NodeRef length) {
  ProtoNode n;
  n.kind = ProtoKind::PacketOut;
  n.prefix_len = prefix_len;
  n.inputs = {cmd, prefix, length};
  return add(std::move(n));
}
NodeRef ProgramBuilder::array_read(const std::string& id, NodeRef index) {
  ProtoNode n;
  n.kind = ProtoKind::ArrayRead;
  n.mem = id;
  n.inputs = {index};
  return {add(std::move(n)), 0};
}
uint32_t ProgramBuilder::array_write(const std::string& id, NodeRef index, NodeRef value,
                                     NodeRef enable) {
  ProtoNode n;
  n.kind = ProtoKind::ArrayWrite;
  n.mem = id;
  n.inputs = {index, value, enable};
  return add(std::move(n));
}
NodeRef ProgramBuilder::table_lookup(const std::string& id, NodeRef key) {
  ProtoNode n;
  n.kind = ProtoKind::TableLookup;
  n.mem = id;
  n.inputs = {key};
  return {add(std::move(n)), 0};
}
NodeRef ProgramBuilder::table_write(const std::string& id, NodeRef key, NodeRef hint,
                                    NodeRef enable) {
  ProtoNode n;
  n.kind = ProtoKind::TableWrite;
  n.mem = id;
  n.inputs = {key, hint, enable};
  return {add(std::move(n)), 0};
}

uint32_t PipelineBuilder::add(PipeNode n) {
  n.id = next_id_++;
  pipeline_.nodes.push_back(std::move(n));
  return pipeline_.nodes.back().id;
}
NodeRef PipelineBuilder::reg(NodeRef in, uint32_t width) {
  PipeNode n;
  n.kind = PipeKind::Register;
  n.width = width;
  n.inputs = {in};
  return {add(std::move(n)), 0};
}
NodeRef PipelineBuilder::router(std::vector<NodeRef> ins) {
  PipeNode n;
  n.kind = PipeKind::Router;
  n.inputs = std::move(ins);
  return {add(std::move(n)), 0};
}
NodeRef PipelineBuilder::constant(const BitVec& v) {
  PipeNode n;
  n.kind = PipeKind::Constant;
  n.width = v.width();
  n.has_value = true;
  n.value = v;
  return {add(std::move(n)), 0};
}
NodeRef PipelineBuilder::runtime_constant(uint32_t width) {
  PipeNode n;
  n.kind = PipeKind::Constant;
  n.width = width;
  n.has_value = false;
  return {add(std::move(n)), 0};
}
NodeRef PipelineBuilder::slice(NodeRef in, uint32_t offset, uint32_t width) {
  PipeNode n;
  n.kind = PipeKind::Slice;
  n.offset = offset;
  n.width = width;
  n.inputs = {in};
  return {add(std::move(n)), 0};
}
NodeRef PipelineBuilder::merge(std::vector<NodeRef> ins) {
  PipeNode n;
  n.kind = PipeKind::Merge;
  n.inputs = std::move(ins);
  return {add(std::move(n)), 0};
}
NodeRef PipelineBuilder::extend(NodeRef in, uint32_t width, bool sign) {
  PipeNode n;
  n.kind = PipeKind::Extend;
  n.width = width;
  n.sign_extend = sign;
  n.inputs = {in};
  return {add(std::move(n)), 0};
}
NodeRef PipelineBuilder::alu(uint32_t width, std::vector<Op> ops, uint32_t latency,
                             std::vector<NodeRef> ins) {
  PipeNode n;
  n.kind = PipeKind::Alu;
  n.width = width;
  n.ops = std::move(ops);
  n.latency = latency;
  n.inputs = std::move(ins);
  return {add(std::move(n)), 0};
}
uint32_t PipelineBuilder::packet_in(uint32_t prefix_len, uint32_t mtu) {
  PipeNode n;
  n.kind = PipeKind::PacketIn;
  n.prefix_len = prefix_len;
  n.mtu = mtu;
  return add(std::move(n));
}
uint32_t PipelineBuilder::packet_out(uint32_t prefix_len, NodeRef cmd, NodeRef prefix,
                                     NodeRef length, uint32_t mtu) {
  PipeNode n;
  n.kind = PipeKind::PacketOut;
  n.prefix_len = prefix_len;
  n.mtu = mtu;
  n.inputs = {cmd, prefix, length};
  return add(std::move(n));
}
NodeRef PipelineBuilder::ram_read(const std::string& id, NodeRef index) {
  PipeNode n;
  n.kind = PipeKind::RamAccess;
  n.mem = id;
  n.write = false;
  n.inputs = {index};
  return {add(std::move(n)), 0};
}
uint32_t PipelineBuilder::ram_write(const std::string& id, NodeRef index, NodeRef value,
                                    NodeRef enable) {
  PipeNode n;
  n.kind = PipeKind::RamAccess;
  n.mem = id;
  n.write = true;
  n.inputs = {index, value, enable};
  return add(std::move(n));
}
NodeRef PipelineBuilder::cam_lookup(const std::string& id, NodeRef key) {
  PipeNode n;
  n.kind = PipeKind::CamAccess;
  n.mem = id;
  n.write = false;
  n.inputs = {key};
  return {add(std::move(n)), 0};
}
NodeRef PipelineBuilder::cam_write(const std::string& id, NodeRef key, NodeRef hint,
                                   NodeRef enable) {
  PipeNode n;
  n.kind = PipeKind::CamAccess;
  n.mem = id;
  n.write = true;
  n.inputs = {key, hint, enable};
  return {add(std::move(n)), 0};
}

Census census_of(const Program& p) {
  Census c;
  for (const ProtoNode& n : p.nodes) ++c.kind_counts[proto_kind_name(n.kind)];
  c.edges = proto_edge_count(p);
  return c;
}

Census census_of(const Pipeline& a) {
  Census c;
  for (const PipeNode& n : a.nodes) ++c.kind_counts[pipe_kind_name(n.kind)];
  c.edges = pipe_edge_count(a);
  return c;
}

}  // namespace pforge
