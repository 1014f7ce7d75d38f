#include "pforge/validate.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

namespace pforge {

namespace {

std::string w(uint32_t v) { return std::to_string(v); }

bool width_in_range(uint32_t width) { return width >= 1 && width <= kMaxWidth; }

// Input arity and per-input width checks shared across kinds are small
// enough to keep inline below; the two validators mirror each other.

struct ArrivalResult {
  // nullopt = cycle-free (constant-fed)
  std::map<uint32_t, std::optional<uint32_t>> out;  // node id -> arrival of outputs
  std::vector<Diagnostic> diags;
};

uint32_t pipe_latency(const Pipeline& a, const PipeNode& n) {
  switch (n.kind) {
    case PipeKind::Register: return 1;
    case PipeKind::Alu: return n.latency;
    case PipeKind::RamAccess: {
      const RamDecl* r = a.find_ram(n.mem);
      return r ? r->latency : 1;
    }
    case PipeKind::CamAccess: {
      const CamDecl* c = a.find_cam(n.mem);
      return c ? c->latency : 1;
    }
    default: return 0;  // Router/Constant/Slice/Merge/Extend/PacketIn/Out
  }
}

ArrivalResult compute_arrivals(const Pipeline& a, const std::vector<uint32_t>& topo,
                               const std::map<uint32_t, const PipeNode*>& by_id) {
  ArrivalResult res;
  for (uint32_t id : topo) {
    const PipeNode& n = *by_id.at(id);
    if (n.kind == PipeKind::PacketIn) {
      res.out[id] = 0;
      continue;
    }
    std::optional<uint32_t> common;
    bool mismatch = false;
    for (const NodeRef& in : n.inputs) {
      auto it = res.out.find(in.node);
      if (it == res.out.end() || !it->second) continue;  // cycle-free input
      if (!common) {
        common = it->second;
      } else if (*common != *it->second) {
        mismatch = true;
        common = std::max(*common, *it->second);
      }
    }
    if (mismatch) {
      std::ostringstream os;
      os << "input arrival mismatch at node " << id << ":";
      for (const NodeRef& in : n.inputs) {
        auto it = res.out.find(in.node);
        if (it != res.out.end() && it->second)
          os << " " << *it->second;
        else
          os << " *";
      }
      res.diags.push_back({id, "E_ARRIVAL", os.str(), Severity::Error});
    }
    if (common)
      res.out[id] = *common + pipe_latency(a, n);
    else
      res.out[id] = std::nullopt;
  }
  return res;
}

}  // namespace

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const Diagnostic& d : diagnostics) {
    os << (d.severity == Severity::Error ? "error" : "warning") << " [" << d.code << "]";
    if (d.node != kNoNode) os << " node " << d.node;
    os << ": " << d.message << "\n";
  }
  return os.str();
}

ValidationReport validate_protocol(const Program& p) {
  ValidationReport rep;

  std::map<uint32_t, const ProtoNode*> by_id;
  for (const ProtoNode& n : p.nodes) {
    if (!by_id.emplace(n.id, &n).second)
      rep.error(n.id, "E_DUP_ID", "duplicate node id " + w(n.id));
  }

  // Declarations.
  std::set<std::string> array_ids, table_ids;
  for (const ArrayDecl& a : p.arrays) {
    if (!array_ids.insert(a.id).second)
      rep.error(kNoNode, "E_DUP_DECL", "duplicate array '" + a.id + "'");
    if (!width_in_range(a.elem_width))
      rep.error(kNoNode, "E_WIDTH_RANGE", "array '" + a.id + "' elem width " + w(a.elem_width));
    if (a.num_elems < 1)
      rep.error(kNoNode, "E_DECL_SIZE", "array '" + a.id + "' needs at least one element");
  }
  for (const TableDecl& t : p.tables) {
    if (!table_ids.insert(t.id).second || array_ids.count(t.id))
      rep.error(kNoNode, "E_DUP_DECL", "duplicate state id '" + t.id + "'");
    if (!width_in_range(t.key_width))
      rep.error(kNoNode, "E_WIDTH_RANGE", "table '" + t.id + "' key width " + w(t.key_width));
    if (t.num_entries < 1)
      rep.error(kNoNode, "E_DECL_SIZE", "table '" + t.id + "' needs at least one entry");
  }

  // References, arity, packet node census, single-writer rule.
  uint32_t n_in = 0, n_out = 0;
  std::map<std::string, uint32_t> writers;
  bool refs_ok = true;
  for (const ProtoNode& n : p.nodes) {
    for (const NodeRef& in : n.inputs) {
      auto it = by_id.find(in.node);
      if (it == by_id.end()) {
        rep.error(n.id, "E_BAD_REF", "input references missing node " + w(in.node));
        refs_ok = false;
      } else if (in.port >= proto_output_count(it->second->kind)) {
        rep.error(n.id, "E_BAD_PORT",
                  "input references port " + w(in.port) + " of node " + w(in.node));
        refs_ok = false;
      }
    }
    auto arity = proto_input_arity(n.kind);
    if (arity && n.inputs.size() != *arity)
      rep.error(n.id, "E_ARITY", std::string(proto_kind_name(n.kind)) + " takes " +
                                     w(*arity) + " inputs, got " + w(uint32_t(n.inputs.size())));
    if (n.kind == ProtoKind::Merge && n.inputs.size() < 2)
      rep.error(n.id, "E_MERGE_ARITY", "merge needs at least 2 inputs");
    if (n.kind == ProtoKind::PacketIn) ++n_in;
    if (n.kind == ProtoKind::PacketOut) ++n_out;
    switch (n.kind) {
      case ProtoKind::ArrayRead:
      case ProtoKind::ArrayWrite:
        if (!array_ids.count(n.mem))
          rep.error(n.id, "E_UNDECLARED", "undeclared array '" + n.mem + "'");
        break;
      case ProtoKind::TableLookup:
      case ProtoKind::TableWrite:
        if (!table_ids.count(n.mem))
          rep.error(n.id, "E_UNDECLARED", "undeclared table '" + n.mem + "'");
        break;
      default:
        break;
    }
    if (n.kind == ProtoKind::ArrayWrite || n.kind == ProtoKind::TableWrite) {
      if (++writers[n.mem] > 1)
        rep.error(n.id, "E_MULTI_WRITE", "second write node for '" + n.mem + "'");
    }
  }
  if (n_in != 1)
    rep.error(kNoNode, "E_PKT_COUNT", "program needs exactly one packet_in, has " + w(n_in));
  if (n_out != 1)
    rep.error(kNoNode, "E_PKT_COUNT", "program needs exactly one packet_out, has " + w(n_out));

  auto topo = proto_topo_order(p);
  if (!topo && refs_ok && by_id.size() == p.nodes.size())
    rep.error(kNoNode, "E_CYCLE", "graph has a cycle");

  // Width typing only once the graph shape is sound.
  if (topo) {
    ProtoIndex idx(p);
    auto in_width = [&](const ProtoNode& n, size_t i) -> std::optional<uint32_t> {
      if (i >= n.inputs.size()) return std::nullopt;
      return idx.width(n.inputs[i]);
    };
    auto require_width = [&](const ProtoNode& n, size_t i, uint32_t want,
                             const char* what) {
      auto got = in_width(n, i);
      if (got && *got != want)
        rep.error(n.id, "E_WIDTH_MISMATCH", std::string(what) + " width mismatch: " +
                                                w(*got) + " vs " + w(want));
    };
    for (const ProtoNode& n : p.nodes) {
      switch (n.kind) {
        case ProtoKind::Constant:
          if (!width_in_range(n.width))
            rep.error(n.id, "E_WIDTH_RANGE", "constant width " + w(n.width));
          if (n.value.width() != n.width)
            rep.error(n.id, "E_WIDTH_MISMATCH", "constant value has " +
                                                    w(n.value.width()) + " bits, field says " +
                                                    w(n.width));
          break;
        case ProtoKind::Slice: {
          if (!width_in_range(n.width))
            rep.error(n.id, "E_WIDTH_RANGE", "slice width " + w(n.width));
          auto iw = in_width(n, 0);
          if (iw && n.offset + n.width > *iw)
            rep.error(n.id, "E_SLICE_RANGE", "slice [" + w(n.offset) + ", " +
                                                 w(n.offset + n.width) + ") exceeds input width " +
                                                 w(*iw));
          break;
        }
        case ProtoKind::Merge: {
          auto ow = idx.width({n.id, 0});
          if (ow && !width_in_range(*ow))
            rep.error(n.id, "E_WIDTH_RANGE", "merge output width " + w(*ow));
          break;
        }
        case ProtoKind::Extend: {
          if (!width_in_range(n.width))
            rep.error(n.id, "E_WIDTH_RANGE", "extend width " + w(n.width));
          auto iw = in_width(n, 0);
          if (iw && n.width <= *iw)
            rep.error(n.id, "E_EXTEND", "extend to " + w(n.width) +
                                            " does not widen input of " + w(*iw));
          break;
        }
        case ProtoKind::Unary:
          if (!op_is_unary(n.op))
            rep.error(n.id, "E_BAD_OP", std::string("unary node with opcode ") + op_name(n.op));
          break;
        case ProtoKind::Binary: {
          if (!op_is_binary(n.op))
            rep.error(n.id, "E_BAD_OP", std::string("binary node with opcode ") + op_name(n.op));
          auto lw = in_width(n, 0), rw = in_width(n, 1);
          if (lw && rw && *lw != *rw)
            rep.error(n.id, "E_WIDTH_MISMATCH",
                      "operand width mismatch: " + w(*lw) + " vs " + w(*rw));
          break;
        }
        case ProtoKind::Conditional: {
          auto cw = in_width(n, 0);
          if (cw && *cw != 1)
            rep.error(n.id, "E_COND_WIDTH", "condition width " + w(*cw) + ", needs 1");
          auto tw = in_width(n, 1), fw = in_width(n, 2);
          if (tw && fw && *tw != *fw)
            rep.error(n.id, "E_WIDTH_MISMATCH",
                      "branch width mismatch: " + w(*tw) + " vs " + w(*fw));
          break;
        }
        case ProtoKind::PacketIn:
          if (n.prefix_len < 1 || n.prefix_len * 8 > kMaxWidth)
            rep.error(n.id, "E_PREFIX_LEN", "prefix length " + w(n.prefix_len) + " bytes");
          break;
        case ProtoKind::PacketOut:
          if (n.prefix_len < 1 || n.prefix_len * 8 > kMaxWidth)
            rep.error(n.id, "E_PREFIX_LEN", "prefix length " + w(n.prefix_len) + " bytes");
          require_width(n, 0, 2, "cmd");
          require_width(n, 1, n.prefix_len * 8, "prefix");
          require_width(n, 2, 16, "length");
          break;
        case ProtoKind::ArrayRead:
        case ProtoKind::ArrayWrite: {
          const ArrayDecl* a = p.find_array(n.mem);
          if (!a) break;
          require_width(n, 0, index_width(a->num_elems), "index");
          if (n.kind == ProtoKind::ArrayWrite) {
            require_width(n, 1, a->elem_width, "value");
            require_width(n, 2, 1, "enable");
          }
          break;
        }
        case ProtoKind::TableLookup:
        case ProtoKind::TableWrite: {
          const TableDecl* t = p.find_table(n.mem);
          if (!t) break;
          require_width(n, 0, t->key_width, "key");
          if (n.kind == ProtoKind::TableWrite) {
            require_width(n, 1, index_width(t->num_entries), "index hint");
            require_width(n, 2, 1, "enable");
          }
          break;
        }
      }
    }
  }

  rep.ok = std::none_of(rep.diagnostics.begin(), rep.diagnostics.end(),
                        [](const Diagnostic& d) { return d.severity == Severity::Error; });
  return rep;
}

ValidationReport validate_pipeline(const Pipeline& a) {
  ValidationReport rep;

  std::map<uint32_t, const PipeNode*> by_id;
  for (const PipeNode& n : a.nodes) {
    if (!by_id.emplace(n.id, &n).second)
      rep.error(n.id, "E_DUP_ID", "duplicate node id " + w(n.id));
  }

  std::set<std::string> ram_ids, cam_ids;
  for (const RamDecl& r : a.rams) {
    if (!ram_ids.insert(r.id).second)
      rep.error(kNoNode, "E_DUP_DECL", "duplicate ram '" + r.id + "'");
    if (!width_in_range(r.elem_width))
      rep.error(kNoNode, "E_WIDTH_RANGE", "ram '" + r.id + "' elem width " + w(r.elem_width));
    if (r.num_elems < 1)
      rep.error(kNoNode, "E_DECL_SIZE", "ram '" + r.id + "' needs at least one element");
    if (r.latency < 1)
      rep.error(kNoNode, "E_LATENCY", "ram '" + r.id + "' latency must be >= 1");
  }
  for (const CamDecl& c : a.cams) {
    if (!cam_ids.insert(c.id).second || ram_ids.count(c.id))
      rep.error(kNoNode, "E_DUP_DECL", "duplicate memory id '" + c.id + "'");
    if (!width_in_range(c.key_width))
      rep.error(kNoNode, "E_WIDTH_RANGE", "cam '" + c.id + "' key width " + w(c.key_width));
    if (c.num_entries < 1)
      rep.error(kNoNode, "E_DECL_SIZE", "cam '" + c.id + "' needs at least one entry");
    if (c.latency < 1)
      rep.error(kNoNode, "E_LATENCY", "cam '" + c.id + "' latency must be >= 1");
  }

  uint32_t n_in = 0, n_out = 0;
  std::map<std::string, uint32_t> writers;
  bool refs_ok = true;
  for (const PipeNode& n : a.nodes) {
    for (const NodeRef& in : n.inputs) {
      auto it = by_id.find(in.node);
      if (it == by_id.end()) {
        rep.error(n.id, "E_BAD_REF", "input references missing node " + w(in.node));
        refs_ok = false;
      } else if (in.port >= pipe_output_count(*it->second)) {
        rep.error(n.id, "E_BAD_PORT",
                  "input references port " + w(in.port) + " of node " + w(in.node));
        refs_ok = false;
      }
    }
    auto arity = pipe_input_arity(n);
    if (arity && n.inputs.size() != *arity)
      rep.error(n.id, "E_ARITY", std::string(pipe_kind_name(n.kind)) + " takes " + w(*arity) +
                                     " inputs, got " + w(uint32_t(n.inputs.size())));
    if (n.kind == PipeKind::Router && n.inputs.empty())
      rep.error(n.id, "E_ROUTER_ARITY", "router needs at least 1 input");
    if (n.kind == PipeKind::Merge && n.inputs.size() < 2)
      rep.error(n.id, "E_MERGE_ARITY", "merge needs at least 2 inputs");
    if (n.kind == PipeKind::PacketIn) ++n_in;
    if (n.kind == PipeKind::PacketOut) ++n_out;
    if (n.kind == PipeKind::Alu) {
      if (n.ops.empty()) {
        rep.error(n.id, "E_ALU_OPS", "alu with empty op list");
      } else {
        bool any_cmp = false, any_val = false, any_mux = false;
        std::set<Op> seen;
        for (Op o : n.ops) {
          if (!seen.insert(o).second)
            rep.error(n.id, "E_ALU_OPS", std::string("duplicate op ") + op_name(o));
          any_cmp |= op_is_compare(o);
          any_val |= op_is_value(o);
          any_mux |= o == Op::Mux;
        }
        // One result and input shape per ALU: value ops keep the operand
        // width, compare lists produce one bit, and Mux takes the 1-bit
        // select on input 0, so Mux cannot share a list with other ops.
        bool mux_only = n.ops.size() == 1 && any_mux;
        bool homogeneous =
            mux_only || (any_cmp && !any_val && !any_mux) || (!any_cmp && !any_mux);
        if (!homogeneous)
          rep.error(n.id, "E_ALU_MIX",
                    "op list mixes result shapes (compare/mux/value ops)");
      }
      if (n.latency < 1) rep.error(n.id, "E_LATENCY", "alu latency must be >= 1");
      if (!width_in_range(n.width))
        rep.error(n.id, "E_WIDTH_RANGE", "alu width " + w(n.width));
    }
    switch (n.kind) {
      case PipeKind::RamAccess:
        if (!ram_ids.count(n.mem))
          rep.error(n.id, "E_UNDECLARED", "undeclared ram '" + n.mem + "'");
        break;
      case PipeKind::CamAccess:
        if (!cam_ids.count(n.mem))
          rep.error(n.id, "E_UNDECLARED", "undeclared cam '" + n.mem + "'");
        break;
      default:
        break;
    }
    if ((n.kind == PipeKind::RamAccess || n.kind == PipeKind::CamAccess) && n.write) {
      if (++writers[n.mem] > 1)
        rep.error(n.id, "E_MULTI_WRITE", "second write port on '" + n.mem + "'");
    }
  }
  if (n_in != 1)
    rep.error(kNoNode, "E_PKT_COUNT", "pipeline needs exactly one packet_in, has " + w(n_in));
  if (n_out != 1)
    rep.error(kNoNode, "E_PKT_COUNT", "pipeline needs exactly one packet_out, has " + w(n_out));

  auto topo = pipe_topo_order(a);
  if (!topo && refs_ok && by_id.size() == a.nodes.size())
    rep.error(kNoNode, "E_CYCLE", "graph has a cycle");

  if (topo) {
    PipeIndex idx(a);
    auto in_width = [&](const PipeNode& n, size_t i) -> std::optional<uint32_t> {
      if (i >= n.inputs.size()) return std::nullopt;
      return idx.width(n.inputs[i]);
    };
    auto require_width = [&](const PipeNode& n, size_t i, uint32_t want, const char* what) {
      auto got = in_width(n, i);
      if (got && *got != want)
        rep.error(n.id, "E_WIDTH_MISMATCH",
                  std::string(what) + " width mismatch: " + w(*got) + " vs " + w(want));
    };
    for (const PipeNode& n : a.nodes) {
      switch (n.kind) {
        case PipeKind::Register:
          if (!width_in_range(n.width))
            rep.error(n.id, "E_WIDTH_RANGE", "register width " + w(n.width));
          require_width(n, 0, n.width, "register input");
          break;
        case PipeKind::Router: {
          std::optional<uint32_t> first;
          for (size_t i = 0; i < n.inputs.size(); ++i) {
            auto iw = in_width(n, i);
            if (!iw) continue;
            if (!first)
              first = iw;
            else if (*first != *iw)
              rep.error(n.id, "E_ROUTER_WIDTH", "router input widths differ: " + w(*first) +
                                                    " vs " + w(*iw));
          }
          break;
        }
        case PipeKind::Constant:
          if (!width_in_range(n.width))
            rep.error(n.id, "E_WIDTH_RANGE", "constant width " + w(n.width));
          if (n.has_value && n.value.width() != n.width)
            rep.error(n.id, "E_WIDTH_MISMATCH", "constant value has " + w(n.value.width()) +
                                                    " bits, field says " + w(n.width));
          break;
        case PipeKind::Slice: {
          if (!width_in_range(n.width))
            rep.error(n.id, "E_WIDTH_RANGE", "slice width " + w(n.width));
          auto iw = in_width(n, 0);
          if (iw && n.offset + n.width > *iw)
            rep.error(n.id, "E_SLICE_RANGE", "slice [" + w(n.offset) + ", " +
                                                 w(n.offset + n.width) + ") exceeds input width " +
                                                 w(*iw));
          break;
        }
        case PipeKind::Merge: {
          auto ow = idx.width({n.id, 0});
          if (ow && !width_in_range(*ow))
            rep.error(n.id, "E_WIDTH_RANGE", "merge output width " + w(*ow));
          break;
        }
        case PipeKind::Extend: {
          if (!width_in_range(n.width))
            rep.error(n.id, "E_WIDTH_RANGE", "extend width " + w(n.width));
          auto iw = in_width(n, 0);
          if (iw && n.width <= *iw)
            rep.error(n.id, "E_EXTEND",
                      "extend to " + w(n.width) + " does not widen input of " + w(*iw));
          break;
        }
        case PipeKind::Alu: {
          if (n.ops.empty()) break;
          uint32_t ar = alu_arity(n.ops);
          bool is_mux = n.ops.size() == 1 && n.ops[0] == Op::Mux;
          for (uint32_t i = 0; i < std::min<uint32_t>(ar, uint32_t(n.inputs.size())); ++i) {
            uint32_t want = (is_mux && i == 0) ? 1 : n.width;
            require_width(n, i, want, "alu operand");
          }
          break;
        }
        case PipeKind::PacketIn:
          if (n.prefix_len < 1 || n.prefix_len * 8 > kMaxWidth)
            rep.error(n.id, "E_PREFIX_LEN", "prefix length " + w(n.prefix_len) + " bytes");
          if (n.mtu < n.prefix_len)
            rep.error(n.id, "E_MTU", "mtu " + w(n.mtu) + " below prefix length");
          break;
        case PipeKind::PacketOut:
          if (n.prefix_len < 1 || n.prefix_len * 8 > kMaxWidth)
            rep.error(n.id, "E_PREFIX_LEN", "prefix length " + w(n.prefix_len) + " bytes");
          if (n.mtu < n.prefix_len)
            rep.error(n.id, "E_MTU", "mtu " + w(n.mtu) + " below prefix length");
          require_width(n, 0, 2, "cmd");
          require_width(n, 1, n.prefix_len * 8, "prefix");
          require_width(n, 2, 16, "length");
          break;
        case PipeKind::RamAccess: {
          const RamDecl* r = a.find_ram(n.mem);
          if (!r) break;
          require_width(n, 0, index_width(r->num_elems), "index");
          if (n.write) {
            require_width(n, 1, r->elem_width, "value");
            require_width(n, 2, 1, "enable");
          }
          break;
        }
        case PipeKind::CamAccess: {
          const CamDecl* c = a.find_cam(n.mem);
          if (!c) break;
          require_width(n, 0, c->key_width, "key");
          if (n.write) {
            require_width(n, 1, index_width(c->num_entries), "index hint");
            require_width(n, 2, 1, "enable");
          }
          break;
        }
      }
    }

    ArrivalResult arr = compute_arrivals(a, *topo, by_id);
    for (Diagnostic& d : arr.diags) rep.diagnostics.push_back(std::move(d));
  }

  rep.ok = std::none_of(rep.diagnostics.begin(), rep.diagnostics.end(),
                        [](const Diagnostic& d) { return d.severity == Severity::Error; });
  return rep;
}

std::map<NodeRef, uint32_t> pipe_arrivals(const Pipeline& a) {
  std::map<NodeRef, uint32_t> out;
  auto topo = pipe_topo_order(a);
  if (!topo) return out;
  std::map<uint32_t, const PipeNode*> by_id;
  for (const PipeNode& n : a.nodes) by_id.emplace(n.id, &n);
  ArrivalResult arr = compute_arrivals(a, *topo, by_id);
  for (auto& [id, v] : arr.out) {
    if (!v) continue;
    const PipeNode& n = *by_id.at(id);
    for (uint32_t port = 0; port < pipe_output_count(n); ++port) out[{id, port}] = *v;
  }
  return out;
}

uint32_t pipe_depth(const Pipeline& a) {
  auto arrivals = pipe_arrivals(a);
  for (const PipeNode& n : a.nodes) {
    if (n.kind != PipeKind::PacketOut) continue;
    for (const NodeRef& in : n.inputs) {
      auto it = arrivals.find({in.node, in.port});
      if (it != arrivals.end()) return it->second;
    }
  }
  return 0;
}

std::vector<std::string> config_errors(const Pipeline& a, const RuntimeConfig& cfg,
                                       const Program* program) {
  std::vector<std::string> errs;
  for (auto& [id, ord] : cfg.router_select) {
    const PipeNode* n = a.find(id);
    if (!n || n->kind != PipeKind::Router) {
      errs.push_back("router_select names node " + std::to_string(id) + " which is not a router");
    } else if (ord >= n->inputs.size()) {
      errs.push_back("router " + std::to_string(id) + " selection " + std::to_string(ord) +
                     " out of range (" + std::to_string(n->inputs.size()) + " inputs)");
    }
  }
  for (auto& [id, op] : cfg.alu_op) {
    const PipeNode* n = a.find(id);
    if (!n || n->kind != PipeKind::Alu) {
      errs.push_back("alu_op names node " + std::to_string(id) + " which is not an alu");
    } else if (std::find(n->ops.begin(), n->ops.end(), op) == n->ops.end()) {
      errs.push_back("alu " + std::to_string(id) + " does not support " + op_name(op));
    }
  }
  for (auto& [id, v] : cfg.const_value) {
    const PipeNode* n = a.find(id);
    if (!n || n->kind != PipeKind::Constant) {
      errs.push_back("const_value names node " + std::to_string(id) + " which is not a constant");
    } else if (n->has_value) {
      errs.push_back("constant " + std::to_string(id) + " is fixed at design time");
    } else if (v.width() != n->width) {
      errs.push_back("constant " + std::to_string(id) + " value has " +
                     std::to_string(v.width()) + " bits, node is " + std::to_string(n->width));
    }
  }
  for (auto& [state, mem] : cfg.mem_bind) {
    const RamDecl* ram = a.find_ram(mem);
    const CamDecl* cam = a.find_cam(mem);
    if (!ram && !cam) {
      errs.push_back("binding targets unknown memory '" + mem + "'");
      continue;
    }
    if (!program) continue;
    const ArrayDecl* arr = program->find_array(state);
    const TableDecl* tbl = program->find_table(state);
    if (arr) {
      if (!ram)
        errs.push_back("array '" + state + "' bound to non-ram '" + mem + "'");
      else if (ram->elem_width != arr->elem_width || ram->num_elems != arr->num_elems)
        errs.push_back("array '" + state + "' dimensions do not match ram '" + mem + "'");
    } else if (tbl) {
      if (!cam)
        errs.push_back("table '" + state + "' bound to non-cam '" + mem + "'");
      else if (cam->key_width != tbl->key_width || cam->num_entries != tbl->num_entries)
        errs.push_back("table '" + state + "' dimensions do not match cam '" + mem + "'");
    } else {
      errs.push_back("binding names unknown state '" + state + "'");
    }
  }
  return errs;
}

}  // namespace pforge
