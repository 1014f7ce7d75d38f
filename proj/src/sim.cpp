#include "pforge/sim.hpp"

#include <algorithm>
#include <cassert>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pforge/serialize.hpp"

namespace pforge {

using json = nlohmann::ordered_json;

StateStore StateStore::remapped(const std::map<std::string, std::string>& bind) const {
  StateStore out;
  out.hash_seed = hash_seed;
  for (auto& [id, contents] : ram) {
    auto it = bind.find(id);
    out.ram[it == bind.end() ? id : it->second] = contents;
  }
  for (auto& [id, entries] : cam) {
    auto it = bind.find(id);
    out.cam[it == bind.end() ? id : it->second] = entries;
  }
  return out;
}

BitVec eval_op(Op op, std::span<const BitVec> v) {
  switch (op) {
    case Op::Add: return v[0].add(v[1]);
    case Op::Sub: return v[0].sub(v[1]);
    case Op::Mul: return v[0].mul(v[1]);
    case Op::And: return v[0].and_(v[1]);
    case Op::Or: return v[0].or_(v[1]);
    case Op::Xor: return v[0].xor_(v[1]);
    case Op::Shl: return v[0].shl(v[1]);
    case Op::Shr: return v[0].shr(v[1]);
    case Op::Eq: return BitVec::from_u64(v[0].eq(v[1]), 1);
    case Op::Neq: return BitVec::from_u64(!v[0].eq(v[1]), 1);
    case Op::Ltu: return BitVec::from_u64(v[0].ult(v[1]), 1);
    case Op::Leu: return BitVec::from_u64(v[0].ule(v[1]), 1);
    case Op::Lts: return BitVec::from_u64(v[0].slt(v[1]), 1);
    case Op::Les: return BitVec::from_u64(v[0].sle(v[1]), 1);
    case Op::Not: return v[0].not_();
    case Op::Neg: return v[0].neg();
    case Op::Mux: return v[0].bit(0) ? v[1] : v[2];
  }
  return BitVec();
}

namespace {

uint64_t hash_key(const BitVec& key, uint64_t seed) {
  std::vector<uint8_t> bytes = key.to_bytes((key.width() + 7) / 8);
  uint64_t h = seed ^ 0x6b7950f1d54a0dc5ull;
  for (size_t i = 0; i < bytes.size(); i += 8) {
    uint64_t limb = 0;
    for (size_t j = 0; j < 8 && i + j < bytes.size(); ++j)
      limb |= uint64_t(bytes[i + j]) << (8 * j);
    h = (h ^ limb) * 0x9E3779B97F4A7C15ull;
  }
  h ^= h >> 32;
  return h;
}

std::vector<CamEntry>& cam_entries(StateStore& s, const std::string& id, uint32_t n) {
  auto& e = s.cam[id];
  if (e.size() != n) e.resize(n);
  return e;
}

// Lookup result: valid bit (MSB) concatenated with the index.
BitVec cam_result(bool valid, uint64_t idx, uint32_t idx_width) {
  BitVec r = BitVec::from_u64(valid ? idx : 0, idx_width + 1);
  if (valid) r.set_bit(idx_width, true);
  return r;
}

struct CamLookup {
  bool valid = false;
  uint64_t idx = 0;
};

CamLookup cam_lookup(const std::vector<CamEntry>& entries, const BitVec& key, CamImpl impl,
                     uint64_t seed) {
  if (impl == CamImpl::RegisterCam) {
    for (size_t i = 0; i < entries.size(); ++i)
      if (entries[i].valid && entries[i].key == key) return {true, i};
    return {};
  }
  uint64_t b = hash_key(key, seed) % entries.size();
  if (entries[b].valid && entries[b].key == key) return {true, b};
  return {};
}

// Slot a write would take, against the pre-packet state. RegisterCam reuses
// an existing entry for the key, else takes the lowest invalid one, else
// fails; HashCam overwrites its bucket unconditionally. The index hint is
// ignored by both implementations.
CamLookup cam_write_slot(const std::vector<CamEntry>& entries, const BitVec& key, CamImpl impl,
                         uint64_t seed) {
  if (impl == CamImpl::RegisterCam) {
    for (size_t i = 0; i < entries.size(); ++i)
      if (entries[i].valid && entries[i].key == key) return {true, i};
    for (size_t i = 0; i < entries.size(); ++i)
      if (!entries[i].valid) return {true, i};
    return {};
  }
  return {true, hash_key(key, seed) % entries.size()};
}

BitVec coerce_width(const BitVec& v, uint32_t width) {
  if (v.width() == width) return v;
  if (v.width() > width) return v.slice(0, width);
  return v.zext(width);
}

BitVec ram_read_value(StateStore& s, const std::string& id, uint64_t idx, uint32_t elem_width,
                      uint32_t num_elems) {
  if (idx >= num_elems) return BitVec::zeros(elem_width);
  auto& contents = s.ram[id];
  auto it = contents.find(idx);
  if (it == contents.end()) return BitVec::zeros(elem_width);
  return coerce_width(it->second, elem_width);
}

struct PendingRamWrite {
  uint32_t node;
  std::string id;
  uint64_t idx;
  BitVec value;
  uint32_t num_elems;
};
struct PendingCamWrite {
  uint32_t node;
  std::string id;
  uint32_t num_entries;
  bool success;
  uint64_t slot;
  BitVec key;
};

struct PendingWrites {
  std::vector<PendingRamWrite> ram;
  std::vector<PendingCamWrite> cam;

  void commit(StateStore& s) {
    // Ascending node id decides collisions.
    std::sort(ram.begin(), ram.end(),
              [](const PendingRamWrite& a, const PendingRamWrite& b) { return a.node < b.node; });
    std::sort(cam.begin(), cam.end(),
              [](const PendingCamWrite& a, const PendingCamWrite& b) { return a.node < b.node; });
    for (PendingRamWrite& w : ram) {
      if (w.idx >= w.num_elems) continue;
      s.ram[w.id][w.idx] = w.value;
    }
    for (PendingCamWrite& w : cam) {
      if (!w.success) continue;
      auto& entries = cam_entries(s, w.id, w.num_entries);
      entries[w.slot] = {true, w.key};
    }
  }
};

struct PacketSink {
  BitVec cmd, prefix, length;
  uint32_t prefix_len = 0;
  uint32_t mtu = kDefaultMtu;
  bool seen = false;
};

PacketResult finish_packet(const PacketSink& sink, const Packet& packet) {
  if (!sink.seen) throw SimError("graph has no packet_out");
  uint64_t cmd = sink.cmd.low_u64() & 3;
  if (cmd >= 2) return {true, {}};
  std::vector<uint8_t> out = sink.prefix.to_bytes(sink.prefix_len);
  if (cmd == 0 && packet.bytes.size() > sink.prefix_len)
    out.insert(out.end(), packet.bytes.begin() + sink.prefix_len, packet.bytes.end());
  uint64_t len = std::min<uint64_t>(sink.length.low_u64(), sink.mtu);
  out.resize(len, 0);
  return {false, std::move(out)};
}

}  // namespace

PacketResult run_protocol(const Program& p, StateStore& state, const Packet& packet) {
  ProtoIndex idx(p);
  if (!idx.topo()) throw SimError("program graph is not executable (cycle or bad refs)");
  std::map<NodeRef, BitVec> values;
  PendingWrites pending;
  PacketSink sink;

  for (uint32_t id : *idx.topo()) {
    const ProtoNode& n = *idx.find(id);
    auto in = [&](size_t i) -> const BitVec& { return values.at(n.inputs[i]); };
    switch (n.kind) {
      case ProtoKind::Constant:
        values[{id, 0}] = n.value;
        break;
      case ProtoKind::Slice:
        values[{id, 0}] = in(0).slice(n.offset, n.width);
        break;
      case ProtoKind::Merge: {
        std::vector<BitVec> parts;
        for (size_t i = 0; i < n.inputs.size(); ++i) parts.push_back(in(i));
        values[{id, 0}] = BitVec::concat(parts);
        break;
      }
      case ProtoKind::Extend:
        values[{id, 0}] = n.sign_extend ? in(0).sext(n.width) : in(0).zext(n.width);
        break;
      case ProtoKind::Unary: {
        BitVec ops[1] = {in(0)};
        values[{id, 0}] = eval_op(n.op, ops);
        break;
      }
      case ProtoKind::Binary: {
        BitVec ops[2] = {in(0), in(1)};
        values[{id, 0}] = eval_op(n.op, ops);
        break;
      }
      case ProtoKind::Conditional: {
        BitVec ops[3] = {in(0), in(1), in(2)};
        values[{id, 0}] = eval_op(Op::Mux, ops);
        break;
      }
      case ProtoKind::PacketIn:
        values[{id, 0}] = BitVec::from_bytes(packet.bytes, n.prefix_len * 8);
        values[{id, 1}] = BitVec::from_u64(std::min<size_t>(packet.bytes.size(), 0xFFFF), 16);
        break;
      case ProtoKind::PacketOut:
        sink = {in(0), in(1), in(2), n.prefix_len, kDefaultMtu, true};
        break;
      case ProtoKind::ArrayRead: {
        const ArrayDecl* a = p.find_array(n.mem);
        values[{id, 0}] = ram_read_value(state, n.mem, in(0).low_u64(), a->elem_width,
                                         a->num_elems);
        break;
      }
      case ProtoKind::ArrayWrite: {
        const ArrayDecl* a = p.find_array(n.mem);
        if (in(2).bit(0))
          pending.ram.push_back({id, n.mem, in(0).low_u64(), in(1), a->num_elems});
        break;
      }
      case ProtoKind::TableLookup: {
        const TableDecl* t = p.find_table(n.mem);
        auto& entries = cam_entries(state, n.mem, t->num_entries);
        CamLookup r = cam_lookup(entries, in(0), CamImpl::RegisterCam, state.hash_seed);
        values[{id, 0}] = cam_result(r.valid, r.idx, index_width(t->num_entries));
        break;
      }
      case ProtoKind::TableWrite: {
        const TableDecl* t = p.find_table(n.mem);
        uint32_t iw = index_width(t->num_entries);
        if (!in(2).bit(0)) {
          values[{id, 0}] = BitVec::zeros(iw + 1);
          break;
        }
        auto& entries = cam_entries(state, n.mem, t->num_entries);
        CamLookup slot = cam_write_slot(entries, in(0), CamImpl::RegisterCam, state.hash_seed);
        values[{id, 0}] = cam_result(slot.valid, slot.idx, iw);
        pending.cam.push_back({id, n.mem, t->num_entries, slot.valid, slot.idx, in(0)});
        break;
      }
    }
  }
  pending.commit(state);
  return finish_packet(sink, packet);
}

PacketResult run_pipeline(const Pipeline& a, const RuntimeConfig& cfg, StateStore& state,
                          const Packet& packet) {
  PipeIndex idx(a);
  if (!idx.topo()) throw SimError("pipeline graph is not executable (cycle or bad refs)");
  std::map<NodeRef, BitVec> values;
  PendingWrites pending;
  PacketSink sink;

  for (uint32_t id : *idx.topo()) {
    const PipeNode& n = *idx.find(id);
    auto in = [&](size_t i) -> const BitVec& { return values.at(n.inputs[i]); };
    switch (n.kind) {
      case PipeKind::Register:
        values[{id, 0}] = in(0);
        break;
      case PipeKind::Router: {
        uint32_t ord = 0;
        auto it = cfg.router_select.find(id);
        if (it != cfg.router_select.end()) ord = it->second;
        if (ord >= n.inputs.size())
          throw SimError("router " + std::to_string(id) + " selection out of range");
        values[{id, 0}] = in(ord);
        break;
      }
      case PipeKind::Constant: {
        if (n.has_value) {
          values[{id, 0}] = n.value;
        } else {
          auto it = cfg.const_value.find(id);
          values[{id, 0}] =
              it == cfg.const_value.end() ? BitVec::zeros(n.width)
                                          : coerce_width(it->second, n.width);
        }
        break;
      }
      case PipeKind::Slice:
        values[{id, 0}] = in(0).slice(n.offset, n.width);
        break;
      case PipeKind::Merge: {
        std::vector<BitVec> parts;
        for (size_t i = 0; i < n.inputs.size(); ++i) parts.push_back(in(i));
        values[{id, 0}] = BitVec::concat(parts);
        break;
      }
      case PipeKind::Extend:
        values[{id, 0}] = n.sign_extend ? in(0).sext(n.width) : in(0).zext(n.width);
        break;
      case PipeKind::Alu: {
        Op op = n.ops.front();
        auto it = cfg.alu_op.find(id);
        if (it != cfg.alu_op.end()) op = it->second;
        if (std::find(n.ops.begin(), n.ops.end(), op) == n.ops.end())
          throw SimError("alu " + std::to_string(id) + " configured with unsupported op");
        if (op == Op::Mux) {
          BitVec ops[3] = {in(0), in(1), in(2)};
          values[{id, 0}] = eval_op(op, ops);
        } else if (op_is_unary(op)) {
          BitVec ops[1] = {in(0)};
          values[{id, 0}] = eval_op(op, ops);
        } else {
          BitVec ops[2] = {in(0), in(1)};
          values[{id, 0}] = eval_op(op, ops);
        }
        break;
      }
      case PipeKind::PacketIn:
        values[{id, 0}] = BitVec::from_bytes(packet.bytes, n.prefix_len * 8);
        values[{id, 1}] = BitVec::from_u64(std::min<size_t>(packet.bytes.size(), 0xFFFF), 16);
        break;
      case PipeKind::PacketOut:
        sink = {in(0), in(1), in(2), n.prefix_len, n.mtu, true};
        break;
      case PipeKind::RamAccess: {
        const RamDecl* r = a.find_ram(n.mem);
        if (!n.write) {
          values[{id, 0}] =
              ram_read_value(state, n.mem, in(0).low_u64(), r->elem_width, r->num_elems);
        } else if (in(2).bit(0)) {
          pending.ram.push_back({id, n.mem, in(0).low_u64(), in(1), r->num_elems});
        }
        break;
      }
      case PipeKind::CamAccess: {
        const CamDecl* c = a.find_cam(n.mem);
        uint32_t iw = index_width(c->num_entries);
        auto& entries = cam_entries(state, n.mem, c->num_entries);
        if (!n.write) {
          CamLookup r = cam_lookup(entries, in(0), c->impl, state.hash_seed);
          values[{id, 0}] = cam_result(r.valid, r.idx, iw);
        } else if (!in(2).bit(0)) {
          values[{id, 0}] = BitVec::zeros(iw + 1);
        } else {
          CamLookup slot = cam_write_slot(entries, in(0), c->impl, state.hash_seed);
          values[{id, 0}] = cam_result(slot.valid, slot.idx, iw);
          pending.cam.push_back({id, n.mem, c->num_entries, slot.valid, slot.idx, in(0)});
        }
        break;
      }
    }
  }
  pending.commit(state);
  return finish_packet(sink, packet);
}

namespace {
std::string hex_bytes(const std::vector<uint8_t>& v) {
  static const char d[] = "0123456789abcdef";
  std::string s;
  for (uint8_t b : v) {
    s.push_back(d[b >> 4]);
    s.push_back(d[b & 0xF]);
  }
  return s;
}

std::string result_str(const PacketResult& r) {
  return r.drop ? "drop" : "forward " + hex_bytes(r.bytes);
}
}  // namespace

EquivalenceReport check_equivalence(const Program& program, const Pipeline& arch,
                                    const RuntimeConfig& config,
                                    std::span<const Packet> packets,
                                    const StateStore& initial) {
  // Every program state must be bound so the pipeline can host its preload.
  for (const ArrayDecl& a : program.arrays)
    if (!config.mem_bind.count(a.id))
      throw SimError("config leaves array '" + a.id + "' unbound");
  for (const TableDecl& t : program.tables)
    if (!config.mem_bind.count(t.id))
      throw SimError("config leaves table '" + t.id + "' unbound");

  uint32_t pktout_id = kNoNode;
  for (const ProtoNode& n : program.nodes)
    if (n.kind == ProtoKind::PacketOut) pktout_id = n.id;

  StateStore proto_state = initial;
  StateStore pipe_state = initial.remapped(config.mem_bind);
  // Materialize declared state so empty tables still compare post-trace.
  for (const TableDecl& t : program.tables) {
    cam_entries(proto_state, t.id, t.num_entries);
    cam_entries(pipe_state, config.mem_bind.at(t.id), t.num_entries);
  }

  EquivalenceReport rep;
  for (const Packet& pkt : packets) {
    PacketResult po = run_protocol(program, proto_state, pkt);
    PacketResult pi = run_pipeline(arch, config, pipe_state, pkt);
    if (po != pi) {
      rep.mismatches.push_back({rep.packets_run, pkt, po, pi, pktout_id,
                                "oracle " + result_str(po) + ", pipeline " + result_str(pi)});
    }
    ++rep.packets_run;
  }

  // Post-trace state comparison through the binding, program domain only.
  for (const ArrayDecl& a : program.arrays) {
    const std::string& mem = config.mem_bind.at(a.id);
    std::set<uint64_t> touched;
    for (auto& [i, v] : proto_state.ram[a.id]) touched.insert(i);
    for (auto& [i, v] : pipe_state.ram[mem]) touched.insert(i);
    for (uint64_t i : touched) {
      if (i >= a.num_elems) continue;
      BitVec x = ram_read_value(proto_state, a.id, i, a.elem_width, a.num_elems);
      BitVec y = ram_read_value(pipe_state, mem, i, a.elem_width, a.num_elems);
      if (!(x == y)) {
        rep.mismatches.push_back(
            {rep.packets_run, {}, {}, {}, kNoNode,
             "array '" + a.id + "'[" + std::to_string(i) + "]: oracle 0x" + x.to_hex() +
                 ", pipeline 0x" + y.to_hex()});
        break;
      }
    }
  }
  for (const TableDecl& t : program.tables) {
    const std::string& mem = config.mem_bind.at(t.id);
    auto& xe = cam_entries(proto_state, t.id, t.num_entries);
    auto& ye = cam_entries(pipe_state, mem, t.num_entries);
    for (uint32_t i = 0; i < t.num_entries; ++i) {
      bool same = xe[i].valid == ye[i].valid &&
                  (!xe[i].valid || coerce_width(xe[i].key, t.key_width) ==
                                       coerce_width(ye[i].key, t.key_width));
      if (!same) {
        rep.mismatches.push_back({rep.packets_run, {}, {}, {}, kNoNode,
                                  "table '" + t.id + "' entry " + std::to_string(i) +
                                      " differs after trace"});
        break;
      }
    }
  }
  return rep;
}

std::vector<Packet> random_packets(uint64_t seed, size_t count, size_t max_len) {
  std::mt19937_64 rng(seed);
  std::vector<Packet> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    size_t len = size_t(rng() % (max_len + 1));
    Packet p;
    p.bytes.resize(len);
    for (size_t j = 0; j < len; ++j) p.bytes[j] = uint8_t(rng());
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Packet> load_trace(std::string_view text) {
  std::vector<Packet> out;
  size_t lineno = 0;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
      line.pop_back();
    size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    line = line.substr(start);
    if (line.size() % 2 != 0)
      throw ArtifactError("trace line " + std::to_string(lineno) + ": odd hex digit count");
    Packet p;
    for (size_t i = 0; i < line.size(); i += 2) {
      auto nib = [&](char c) -> unsigned {
        if (c >= '0' && c <= '9') return unsigned(c - '0');
        if (c >= 'a' && c <= 'f') return unsigned(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return unsigned(c - 'A' + 10);
        throw ArtifactError("trace line " + std::to_string(lineno) + ": bad hex digit");
      };
      p.bytes.push_back(uint8_t(nib(line[i]) << 4 | nib(line[i + 1])));
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::string store_trace(std::span<const Packet> packets) {
  std::string out;
  for (const Packet& p : packets) {
    out += hex_bytes(p.bytes);
    out += '\n';
  }
  return out;
}

StateStore load_state(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ArtifactError(std::string("syntax error in state file: ") + e.what());
  }
  StateStore s;
  if (doc.contains("hash_seed")) {
    const json& h = doc["hash_seed"];
    if (h.is_number_unsigned())
      s.hash_seed = h.get<uint64_t>();
    else
      throw ArtifactError("schema error: hash_seed must be an unsigned integer");
  }
  if (doc.contains("arrays")) {
    for (const json& a : doc["arrays"]) {
      std::string id = a.at("id").get<std::string>();
      for (const json& e : a.at("values")) {
        if (!e.is_array() || e.size() != 3)
          throw ArtifactError("schema error: array values are [index, width, hex] triples");
        uint64_t i = e[0].get<uint64_t>();
        uint32_t w = e[1].get<uint32_t>();
        std::string hex = e[2].get<std::string>();
        if (hex.rfind("0x", 0) != 0)
          throw ArtifactError("schema error: state values are 0x-prefixed hex");
        s.ram[id][i] = BitVec::from_hex(std::string_view(hex).substr(2), w);
      }
    }
  }
  if (doc.contains("tables")) {
    for (const json& t : doc["tables"]) {
      std::string id = t.at("id").get<std::string>();
      uint32_t n = t.at("num_entries").get<uint32_t>();
      auto& entries = s.cam[id];
      entries.resize(n);
      for (const json& e : t.at("entries")) {
        if (!e.is_array() || e.size() != 3)
          throw ArtifactError("schema error: table entries are [index, width, hex] triples");
        uint64_t i = e[0].get<uint64_t>();
        uint32_t w = e[1].get<uint32_t>();
        std::string hex = e[2].get<std::string>();
        if (hex.rfind("0x", 0) != 0)
          throw ArtifactError("schema error: state keys are 0x-prefixed hex");
        if (i >= n) throw ArtifactError("schema error: table entry index out of range");
        entries[i] = {true, BitVec::from_hex(std::string_view(hex).substr(2), w)};
      }
    }
  }
  return s;
}

std::string store_state(const StateStore& s) {
  json j = json::object();
  j["kind"] = "state";
  j["hash_seed"] = s.hash_seed;
  json arrays = json::array();
  for (auto& [id, contents] : s.ram) {
    json a = json::object();
    a["id"] = id;
    json vals = json::array();
    for (auto& [i, v] : contents)
      vals.push_back(json::array({i, v.width(), "0x" + v.to_hex()}));
    a["values"] = std::move(vals);
    arrays.push_back(std::move(a));
  }
  j["arrays"] = std::move(arrays);
  json tables = json::array();
  for (auto& [id, entries] : s.cam) {
    json t = json::object();
    t["id"] = id;
    t["num_entries"] = uint32_t(entries.size());
    json es = json::array();
    for (size_t i = 0; i < entries.size(); ++i)
      if (entries[i].valid)
        es.push_back(json::array({i, entries[i].key.width(), "0x" + entries[i].key.to_hex()}));
    t["entries"] = std::move(es);
    tables.push_back(std::move(t));
  }
  j["tables"] = std::move(tables);
  return j.dump(2) + "\n";
}

}  // namespace pforge
