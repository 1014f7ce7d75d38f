#include "pforge/serialize.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace pforge {

using json = nlohmann::ordered_json;

namespace {

std::string hex_of(const BitVec& v) { return "0x" + v.to_hex(); }

BitVec hex_to_bits(const std::string& s, uint32_t width, const std::string& field) {
  if (s.size() < 3 || s[0] != '0' || (s[1] != 'x' && s[1] != 'X'))
    throw ArtifactError("schema error: " + field + ": expected 0x-prefixed hex, got '" + s + "'");
  try {
    return BitVec::from_hex(std::string_view(s).substr(2), width);
  } catch (const std::invalid_argument& e) {
    throw ArtifactError("schema error: " + field + ": " + e.what());
  }
}

const json& need(const json& obj, const char* key, const std::string& ctx) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ArtifactError("schema error: " + ctx + ": missing field '" + key + "'");
  return *it;
}

uint32_t need_u32(const json& obj, const char* key, const std::string& ctx) {
  const json& v = need(obj, key, ctx);
  if (!v.is_number_unsigned())
    throw ArtifactError("schema error: " + ctx + ": field '" + key +
                        "' must be a non-negative integer");
  uint64_t u = v.get<uint64_t>();
  if (u > 0xFFFFFFFFull)
    throw ArtifactError("schema error: " + ctx + ": field '" + key + "' out of range");
  return uint32_t(u);
}

std::string need_str(const json& obj, const char* key, const std::string& ctx) {
  const json& v = need(obj, key, ctx);
  if (!v.is_string())
    throw ArtifactError("schema error: " + ctx + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

bool need_bool(const json& obj, const char* key, const std::string& ctx) {
  const json& v = need(obj, key, ctx);
  if (!v.is_boolean())
    throw ArtifactError("schema error: " + ctx + ": field '" + key + "' must be a boolean");
  return v.get<bool>();
}

json inputs_to_json(const std::vector<NodeRef>& ins) {
  json arr = json::array();
  for (const NodeRef& r : ins) arr.push_back(json::array({r.node, r.port}));
  return arr;
}

std::vector<NodeRef> inputs_from_json(const json& v, const std::string& ctx) {
  if (!v.is_array())
    throw ArtifactError("schema error: " + ctx + ": 'inputs' must be an array");
  std::vector<NodeRef> out;
  for (const json& e : v) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() ||
        !e[1].is_number_unsigned())
      throw ArtifactError("schema error: " + ctx + ": inputs entries are [node, port] pairs");
    out.push_back({e[0].get<uint32_t>(), e[1].get<uint32_t>()});
  }
  return out;
}

json proto_node_to_json(const ProtoNode& n) {
  json attrs = json::object();
  switch (n.kind) {
    case ProtoKind::Constant:
      attrs["value"] = hex_of(n.value);
      attrs["width"] = n.width;
      break;
    case ProtoKind::Slice:
      attrs["offset"] = n.offset;
      attrs["width"] = n.width;
      break;
    case ProtoKind::Extend:
      attrs["width"] = n.width;
      attrs["sign"] = n.sign_extend;
      break;
    case ProtoKind::Unary:
    case ProtoKind::Binary:
      attrs["op"] = op_name(n.op);
      break;
    case ProtoKind::PacketIn:
    case ProtoKind::PacketOut:
      attrs["prefix_len"] = n.prefix_len;
      break;
    case ProtoKind::ArrayRead:
    case ProtoKind::ArrayWrite:
      attrs["array"] = n.mem;
      break;
    case ProtoKind::TableLookup:
    case ProtoKind::TableWrite:
      attrs["table"] = n.mem;
      break;
    default:
      break;
  }
  json j = json::object();
  j["id"] = n.id;
  j["kind"] = proto_kind_name(n.kind);
  j["attrs"] = std::move(attrs);
  j["inputs"] = inputs_to_json(n.inputs);
  return j;
}

ProtoNode proto_node_from_json(const json& j) {
  std::string ctx = "node";
  uint32_t id = need_u32(j, "id", ctx);
  ctx = "node " + std::to_string(id);
  ProtoNode n;
  n.id = id;
  std::string kind = need_str(j, "kind", ctx);
  auto k = proto_kind_from_name(kind);
  if (!k) throw ArtifactError("schema error: " + ctx + ": unknown node kind '" + kind + "'");
  n.kind = *k;
  const json& attrs = need(j, "attrs", ctx);
  switch (n.kind) {
    case ProtoKind::Constant:
      n.width = need_u32(attrs, "width", ctx);
      n.value = hex_to_bits(need_str(attrs, "value", ctx), std::max(n.width, 1u), ctx);
      break;
    case ProtoKind::Slice:
      n.offset = need_u32(attrs, "offset", ctx);
      n.width = need_u32(attrs, "width", ctx);
      break;
    case ProtoKind::Extend:
      n.width = need_u32(attrs, "width", ctx);
      n.sign_extend = need_bool(attrs, "sign", ctx);
      break;
    case ProtoKind::Unary:
    case ProtoKind::Binary: {
      std::string op = need_str(attrs, "op", ctx);
      auto o = op_from_name(op);
      if (!o) throw ArtifactError("schema error: " + ctx + ": unknown op '" + op + "'");
      n.op = *o;
      break;
    }
    case ProtoKind::PacketIn:
    case ProtoKind::PacketOut:
      n.prefix_len = need_u32(attrs, "prefix_len", ctx);
      break;
    case ProtoKind::ArrayRead:
    case ProtoKind::ArrayWrite:
      n.mem = need_str(attrs, "array", ctx);
      break;
    case ProtoKind::TableLookup:
    case ProtoKind::TableWrite:
      n.mem = need_str(attrs, "table", ctx);
      break;
    default:
      break;
  }
  n.inputs = inputs_from_json(need(j, "inputs", ctx), ctx);
  return n;
}

json pipe_node_to_json(const PipeNode& n) {
  json attrs = json::object();
  switch (n.kind) {
    case PipeKind::Register:
      attrs["width"] = n.width;
      break;
    case PipeKind::Constant:
      attrs["width"] = n.width;
      if (n.has_value) attrs["value"] = hex_of(n.value);
      break;
    case PipeKind::Slice:
      attrs["offset"] = n.offset;
      attrs["width"] = n.width;
      break;
    case PipeKind::Extend:
      attrs["width"] = n.width;
      attrs["sign"] = n.sign_extend;
      break;
    case PipeKind::Alu: {
      attrs["width"] = n.width;
      json ops = json::array();
      for (Op o : n.ops) ops.push_back(op_name(o));
      attrs["ops"] = std::move(ops);
      attrs["latency"] = n.latency;
      break;
    }
    case PipeKind::PacketIn:
    case PipeKind::PacketOut:
      attrs["prefix_len"] = n.prefix_len;
      attrs["mtu"] = n.mtu;
      break;
    case PipeKind::RamAccess:
      attrs["ram"] = n.mem;
      attrs["write"] = n.write;
      break;
    case PipeKind::CamAccess:
      attrs["cam"] = n.mem;
      attrs["write"] = n.write;
      break;
    default:
      break;
  }
  json j = json::object();
  j["id"] = n.id;
  j["kind"] = pipe_kind_name(n.kind);
  j["attrs"] = std::move(attrs);
  j["inputs"] = inputs_to_json(n.inputs);
  return j;
}

PipeNode pipe_node_from_json(const json& j) {
  std::string ctx = "node";
  uint32_t id = need_u32(j, "id", ctx);
  ctx = "node " + std::to_string(id);
  PipeNode n;
  n.id = id;
  std::string kind = need_str(j, "kind", ctx);
  auto k = pipe_kind_from_name(kind);
  if (!k) throw ArtifactError("schema error: " + ctx + ": unknown node kind '" + kind + "'");
  n.kind = *k;
  const json& attrs = need(j, "attrs", ctx);
  switch (n.kind) {
    case PipeKind::Register:
      n.width = need_u32(attrs, "width", ctx);
      break;
    case PipeKind::Constant:
      n.width = need_u32(attrs, "width", ctx);
      if (attrs.contains("value")) {
        n.has_value = true;
        n.value = hex_to_bits(need_str(attrs, "value", ctx), std::max(n.width, 1u), ctx);
      }
      break;
    case PipeKind::Slice:
      n.offset = need_u32(attrs, "offset", ctx);
      n.width = need_u32(attrs, "width", ctx);
      break;
    case PipeKind::Extend:
      n.width = need_u32(attrs, "width", ctx);
      n.sign_extend = need_bool(attrs, "sign", ctx);
      break;
    case PipeKind::Alu: {
      n.width = need_u32(attrs, "width", ctx);
      const json& ops = need(attrs, "ops", ctx);
      if (!ops.is_array())
        throw ArtifactError("schema error: " + ctx + ": 'ops' must be an array");
      for (const json& o : ops) {
        if (!o.is_string())
          throw ArtifactError("schema error: " + ctx + ": op names are strings");
        auto op = op_from_name(o.get<std::string>());
        if (!op)
          throw ArtifactError("schema error: " + ctx + ": unknown op '" +
                              o.get<std::string>() + "'");
        n.ops.push_back(*op);
      }
      n.latency = need_u32(attrs, "latency", ctx);
      break;
    }
    case PipeKind::PacketIn:
    case PipeKind::PacketOut:
      n.prefix_len = need_u32(attrs, "prefix_len", ctx);
      n.mtu = need_u32(attrs, "mtu", ctx);
      break;
    case PipeKind::RamAccess:
      n.mem = need_str(attrs, "ram", ctx);
      n.write = need_bool(attrs, "write", ctx);
      break;
    case PipeKind::CamAccess:
      n.mem = need_str(attrs, "cam", ctx);
      n.write = need_bool(attrs, "write", ctx);
      break;
    default:
      break;
  }
  n.inputs = inputs_from_json(need(j, "inputs", ctx), ctx);
  return n;
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    size_t off = e.byte;
    size_t line = 1;
    for (size_t i = 0; i < std::min(off, text.size()); ++i)
      if (text[i] == '\n') ++line;
    throw ArtifactError("syntax error at line " + std::to_string(line) + " (byte " +
                        std::to_string(off) + "): " + e.what());
  }
}

void check_kind(const json& doc, const char* want) {
  std::string kind = need_str(doc, "kind", "document");
  if (kind != want)
    throw ArtifactError("schema error: document: kind is '" + kind + "', expected '" +
                        std::string(want) + "'");
}

template <typename Node>
void check_unique_ids(const std::vector<Node>& nodes) {
  std::set<uint32_t> seen;
  for (const Node& n : nodes)
    if (!seen.insert(n.id).second)
      throw ArtifactError("schema error: duplicate node id " + std::to_string(n.id));
}

std::string dump(json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string store_artifact(const Program& p) {
  json j = json::object();
  j["kind"] = "protocol";
  std::vector<const ProtoNode*> nodes;
  for (const ProtoNode& n : p.nodes) nodes.push_back(&n);
  std::sort(nodes.begin(), nodes.end(),
            [](const ProtoNode* a, const ProtoNode* b) { return a->id < b->id; });
  json arr = json::array();
  for (const ProtoNode* n : nodes) arr.push_back(proto_node_to_json(*n));
  j["nodes"] = std::move(arr);

  std::vector<ArrayDecl> arrays = p.arrays;
  std::sort(arrays.begin(), arrays.end(),
            [](const ArrayDecl& a, const ArrayDecl& b) { return a.id < b.id; });
  json ja = json::array();
  for (const ArrayDecl& a : arrays) {
    json d = json::object();
    d["id"] = a.id;
    d["elem_width"] = a.elem_width;
    d["num_elems"] = a.num_elems;
    ja.push_back(std::move(d));
  }
  j["arrays"] = std::move(ja);

  std::vector<TableDecl> tables = p.tables;
  std::sort(tables.begin(), tables.end(),
            [](const TableDecl& a, const TableDecl& b) { return a.id < b.id; });
  json jt = json::array();
  for (const TableDecl& t : tables) {
    json d = json::object();
    d["id"] = t.id;
    d["key_width"] = t.key_width;
    d["num_entries"] = t.num_entries;
    jt.push_back(std::move(d));
  }
  j["tables"] = std::move(jt);
  return dump(j);
}

std::string store_artifact(const Pipeline& a) {
  json j = json::object();
  j["kind"] = "pipeline";
  std::vector<const PipeNode*> nodes;
  for (const PipeNode& n : a.nodes) nodes.push_back(&n);
  std::sort(nodes.begin(), nodes.end(),
            [](const PipeNode* x, const PipeNode* y) { return x->id < y->id; });
  json arr = json::array();
  for (const PipeNode* n : nodes) arr.push_back(pipe_node_to_json(*n));
  j["nodes"] = std::move(arr);

  std::vector<RamDecl> rams = a.rams;
  std::sort(rams.begin(), rams.end(),
            [](const RamDecl& x, const RamDecl& y) { return x.id < y.id; });
  json jr = json::array();
  for (const RamDecl& r : rams) {
    json d = json::object();
    d["id"] = r.id;
    d["elem_width"] = r.elem_width;
    d["num_elems"] = r.num_elems;
    d["latency"] = r.latency;
    jr.push_back(std::move(d));
  }
  j["rams"] = std::move(jr);

  std::vector<CamDecl> cams = a.cams;
  std::sort(cams.begin(), cams.end(),
            [](const CamDecl& x, const CamDecl& y) { return x.id < y.id; });
  json jc = json::array();
  for (const CamDecl& c : cams) {
    json d = json::object();
    d["id"] = c.id;
    d["key_width"] = c.key_width;
    d["num_entries"] = c.num_entries;
    d["latency"] = c.latency;
    d["impl"] = c.impl == CamImpl::RegisterCam ? "register" : "hash";
    jc.push_back(std::move(d));
  }
  j["cams"] = std::move(jc);
  return dump(j);
}

std::string store_artifact(const RuntimeConfig& c) {
  json j = json::object();
  j["kind"] = "config";
  json rs = json::array();
  for (auto& [id, ord] : c.router_select) rs.push_back(json::array({id, ord}));
  j["router_select"] = std::move(rs);
  json ao = json::array();
  for (auto& [id, op] : c.alu_op) ao.push_back(json::array({id, op_name(op)}));
  j["alu_op"] = std::move(ao);
  json cv = json::array();
  for (auto& [id, v] : c.const_value)
    cv.push_back(json::array({id, v.width(), hex_of(v)}));
  j["const_value"] = std::move(cv);
  json mb = json::array();
  for (auto& [s, m] : c.mem_bind) mb.push_back(json::array({s, m}));
  j["mem_bind"] = std::move(mb);
  return dump(j);
}

Program load_program(std::string_view text) {
  json doc = parse_document(text);
  check_kind(doc, "protocol");
  Program p;
  const json& nodes = need(doc, "nodes", "document");
  if (!nodes.is_array()) throw ArtifactError("schema error: document: 'nodes' must be an array");
  for (const json& n : nodes) p.nodes.push_back(proto_node_from_json(n));
  check_unique_ids(p.nodes);
  std::sort(p.nodes.begin(), p.nodes.end(),
            [](const ProtoNode& a, const ProtoNode& b) { return a.id < b.id; });

  const json& arrays = need(doc, "arrays", "document");
  for (const json& a : arrays) {
    ArrayDecl d;
    d.id = need_str(a, "id", "array decl");
    d.elem_width = need_u32(a, "elem_width", "array '" + d.id + "'");
    d.num_elems = need_u32(a, "num_elems", "array '" + d.id + "'");
    p.arrays.push_back(std::move(d));
  }
  const json& tables = need(doc, "tables", "document");
  for (const json& t : tables) {
    TableDecl d;
    d.id = need_str(t, "id", "table decl");
    d.key_width = need_u32(t, "key_width", "table '" + d.id + "'");
    d.num_entries = need_u32(t, "num_entries", "table '" + d.id + "'");
    p.tables.push_back(std::move(d));
  }
  std::sort(p.arrays.begin(), p.arrays.end(),
            [](const ArrayDecl& a, const ArrayDecl& b) { return a.id < b.id; });
  std::sort(p.tables.begin(), p.tables.end(),
            [](const TableDecl& a, const TableDecl& b) { return a.id < b.id; });
  return p;
}

Pipeline load_pipeline(std::string_view text) {
  json doc = parse_document(text);
  check_kind(doc, "pipeline");
  Pipeline a;
  const json& nodes = need(doc, "nodes", "document");
  if (!nodes.is_array()) throw ArtifactError("schema error: document: 'nodes' must be an array");
  for (const json& n : nodes) a.nodes.push_back(pipe_node_from_json(n));
  check_unique_ids(a.nodes);
  std::sort(a.nodes.begin(), a.nodes.end(),
            [](const PipeNode& x, const PipeNode& y) { return x.id < y.id; });

  const json& rams = need(doc, "rams", "document");
  for (const json& r : rams) {
    RamDecl d;
    d.id = need_str(r, "id", "ram decl");
    d.elem_width = need_u32(r, "elem_width", "ram '" + d.id + "'");
    d.num_elems = need_u32(r, "num_elems", "ram '" + d.id + "'");
    d.latency = need_u32(r, "latency", "ram '" + d.id + "'");
    a.rams.push_back(std::move(d));
  }
  const json& cams = need(doc, "cams", "document");
  for (const json& c : cams) {
    CamDecl d;
    d.id = need_str(c, "id", "cam decl");
    d.key_width = need_u32(c, "key_width", "cam '" + d.id + "'");
    d.num_entries = need_u32(c, "num_entries", "cam '" + d.id + "'");
    d.latency = need_u32(c, "latency", "cam '" + d.id + "'");
    std::string impl = need_str(c, "impl", "cam '" + d.id + "'");
    if (impl == "register")
      d.impl = CamImpl::RegisterCam;
    else if (impl == "hash")
      d.impl = CamImpl::HashCam;
    else
      throw ArtifactError("schema error: cam '" + d.id + "': unknown impl '" + impl + "'");
    a.cams.push_back(std::move(d));
  }
  std::sort(a.rams.begin(), a.rams.end(),
            [](const RamDecl& x, const RamDecl& y) { return x.id < y.id; });
  std::sort(a.cams.begin(), a.cams.end(),
            [](const CamDecl& x, const CamDecl& y) { return x.id < y.id; });
  return a;
}

RuntimeConfig load_config(std::string_view text) {
  json doc = parse_document(text);
  check_kind(doc, "config");
  RuntimeConfig c;
  const json& rs = need(doc, "router_select", "document");
  for (const json& e : rs) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() ||
        !e[1].is_number_unsigned())
      throw ArtifactError("schema error: router_select entries are [node, ordinal] pairs");
    c.router_select[e[0].get<uint32_t>()] = e[1].get<uint32_t>();
  }
  const json& ao = need(doc, "alu_op", "document");
  for (const json& e : ao) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_string())
      throw ArtifactError("schema error: alu_op entries are [node, op] pairs");
    auto op = op_from_name(e[1].get<std::string>());
    if (!op)
      throw ArtifactError("schema error: alu_op: unknown op '" + e[1].get<std::string>() + "'");
    c.alu_op[e[0].get<uint32_t>()] = *op;
  }
  const json& cv = need(doc, "const_value", "document");
  for (const json& e : cv) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_unsigned() ||
        !e[1].is_number_unsigned() || !e[2].is_string())
      throw ArtifactError("schema error: const_value entries are [node, width, hex] triples");
    uint32_t width = e[1].get<uint32_t>();
    if (width < 1 || width > kMaxWidth)
      throw ArtifactError("schema error: const_value: width out of range");
    c.const_value[e[0].get<uint32_t>()] =
        hex_to_bits(e[2].get<std::string>(), width, "const_value");
  }
  const json& mb = need(doc, "mem_bind", "document");
  for (const json& e : mb) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      throw ArtifactError("schema error: mem_bind entries are [state, memory] pairs");
    c.mem_bind[e[0].get<std::string>()] = e[1].get<std::string>();
  }
  return c;
}

ArtifactKind detect_kind(std::string_view text) {
  json doc = parse_document(text);
  std::string kind = need_str(doc, "kind", "document");
  if (kind == "protocol") return ArtifactKind::Protocol;
  if (kind == "pipeline") return ArtifactKind::Pipeline;
  if (kind == "config") return ArtifactKind::Config;
  throw ArtifactError("schema error: document: unknown kind '" + kind + "'");
}

Artifact load_artifact(std::string_view text) {
  switch (detect_kind(text)) {
    case ArtifactKind::Protocol: return load_program(text);
    case ArtifactKind::Pipeline: return load_pipeline(text);
    case ArtifactKind::Config: return load_config(text);
  }
  throw ArtifactError("unreachable");
}

}  // namespace pforge
