#include "lsim/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "lsim/error.hpp"

namespace lsim {

using nlohmann::json;

std::string_view CcName(CcMechanism cc) {
  switch (cc) {
    case CcMechanism::kPfcOnly:
      return "pfc";
    case CcMechanism::kDcqcn:
      return "dcqcn";
    case CcMechanism::kDcqcnRev:
      return "dcqcn-rev";
  }
  return "?";
}

std::optional<CcMechanism> ParseCc(std::string_view text) {
  if (text == "pfc" || text == "pfc_only" || text == "pfc-only") {
    return CcMechanism::kPfcOnly;
  }
  if (text == "dcqcn") return CcMechanism::kDcqcn;
  if (text == "dcqcn-rev" || text == "dcqcn_rev") return CcMechanism::kDcqcnRev;
  return std::nullopt;
}

MarkingKind MarkingFor(CcMechanism cc) {
  switch (cc) {
    case CcMechanism::kPfcOnly:
      return MarkingKind::kNone;
    case CcMechanism::kDcqcn:
      return MarkingKind::kCp;
    case CcMechanism::kDcqcnRev:
      return MarkingKind::kEcp;
  }
  return MarkingKind::kNone;
}

namespace {

std::string_view MarkingName(MarkingKind kind) {
  switch (kind) {
    case MarkingKind::kNone:
      return "none";
    case MarkingKind::kCp:
      return "cp";
    case MarkingKind::kEcp:
      return "ecp";
  }
  return "?";
}

std::optional<MarkingKind> ParseMarking(std::string_view s) {
  if (s == "none") return MarkingKind::kNone;
  if (s == "cp" || s == "CP") return MarkingKind::kCp;
  if (s == "ecp" || s == "ECP") return MarkingKind::kEcp;
  return std::nullopt;
}

[[noreturn]] void Fail(const std::string& msg) {
  throw Error(ErrorCode::kParse, msg);
}

// Reads the keys of one JSON object, remembering which ones were consumed so
// that anything left over can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path)
      : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) Fail(Where() + "expected an object");
  }

  bool Has(const std::string& key) const { return obj_.contains(key); }

  const json* Get(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::int64_t Int(const std::string& key, std::int64_t def) {
    const json* v = Get(key);
    if (!v) return def;
    if (!v->is_number_integer()) Fail(Where(key) + "expected an integer");
    if (v->is_number_unsigned() &&
        v->get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
      Fail(Where(key) + "integer out of range");
    }
    return v->get<std::int64_t>();
  }

  std::uint64_t UInt(const std::string& key, std::uint64_t def) {
    const json* v = Get(key);
    if (!v) return def;
    if (!v->is_number_unsigned()) {
      Fail(Where(key) + "expected a non-negative integer");
    }
    return v->get<std::uint64_t>();
  }

  double Double(const std::string& key, double def) {
    const json* v = Get(key);
    if (!v) return def;
    if (!v->is_number()) Fail(Where(key) + "expected a number");
    return v->get<double>();
  }

  bool Bool(const std::string& key, bool def) {
    const json* v = Get(key);
    if (!v) return def;
    if (!v->is_boolean()) Fail(Where(key) + "expected true or false");
    return v->get<bool>();
  }

  std::string String(const std::string& key, const std::string& def) {
    const json* v = Get(key);
    if (!v) return def;
    if (!v->is_string()) Fail(Where(key) + "expected a string");
    return v->get<std::string>();
  }

  SimTime Ns(const std::string& key, SimTime def) {
    const json* v = Get(key);
    if (!v) return def;
    if (!v->is_number_integer()) Fail(Where(key) + "expected integer ns");
    return SimTime::FromNs(v->get<std::int64_t>());
  }

  // Nested object; a missing key yields an empty object.
  ObjectReader Child(const std::string& key) {
    const json* v = Get(key);
    return ObjectReader(v ? *v : Empty(), Join(key));
  }

  std::string Join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  std::string Where(const std::string& key = "") const {
    const std::string p = key.empty() ? path_ : Join(key);
    return p.empty() ? "" : p + ": ";
  }

  void Finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.contains(key)) Fail("unknown key '" + Join(key) + "'");
    }
  }

 private:
  static const json& Empty() {
    static const json empty = json::object();
    return empty;
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

std::int64_t NsOf(SimTime t) { return t.ps() / 1000; }

}  // namespace

void ScenarioConfig::SetCc(CcMechanism mechanism) {
  cc = mechanism;
  marking.kind = MarkingFor(mechanism);
}

SwitchConfig ScenarioConfig::switch_config() const {
  return SwitchConfig{buffer, pfc, marking};
}

ScenarioConfig Paper64Preset(CcMechanism cc) {
  ScenarioConfig c;
  c.name = "paper64";
  c.half_radix = 4;
  c.stages = 3;
  c.link = LinkConfig{12'500'000'000, SimTime::FromNs(25)};
  c.marking.k_min_bytes = 15 * 1024;
  c.marking.k_max_bytes = 15 * 1024;
  c.marking.p_max = 1.0;
  const SimTime start = SimTime::FromMs(1);
  const SimTime stop = SimTime::FromMs(3);
  const std::pair<HostId, HostId> pairs[] = {
      {0, 16}, {1, 16}, {3, 12}, {4, 16}, {8, 16}};
  for (auto [src, dst] : pairs) {
    c.flows.push_back(FlowSpec{src, src, dst, c.link.capacity_bytes_per_s,
                               start, stop, TrafficMode::kOpenLoop});
  }
  c.SetCc(cc);
  return c;
}

std::vector<std::string> ValidateScenario(const ScenarioConfig& c) {
  std::vector<std::string> v;
  auto need = [&v](bool ok, const std::string& what) {
    if (!ok) v.push_back(what);
  };
  need(c.half_radix >= 2, "topology.half_radix must be >= 2");
  need(c.stages >= 1, "topology.stages must be >= 1");
  need(c.link.capacity_bytes_per_s > 0, "link.capacity_bps must be > 0");
  need(c.link.propagation >= SimTime::Zero(), "link.propagation_ns must be >= 0");
  need(c.buffer.mtu_bytes > 0, "buffer.mtu_bytes must be > 0");
  need(c.buffer.input_limit_bytes >= c.buffer.mtu_bytes,
       "buffer.input_limit_bytes must hold at least one MTU");
  need(c.buffer.pool_bytes >= c.buffer.input_limit_bytes,
       "buffer.pool_bytes must be >= buffer.input_limit_bytes");
  if (c.pfc.enabled) {
    need(c.pfc.xon_bytes < c.pfc.xoff_bytes, "pfc.xon_bytes must be < pfc.xoff_bytes");
    need(c.pfc.xon_bytes > 0, "pfc.xon_bytes must be > 0");
    need(c.pfc.xoff_bytes + c.pfc.headroom_bytes <= c.buffer.input_limit_bytes,
         "pfc.xoff_bytes + pfc.headroom_bytes must be <= buffer.input_limit_bytes");
    // Bytes that can still land after XOFF: a round trip of the link plus the
    // packet already on the wire.
    const Int128 in_flight =
        static_cast<Int128>(2) * c.link.propagation.ps() *
            c.link.capacity_bytes_per_s / kPsPerSecond +
        c.buffer.mtu_bytes;
    need(c.pfc.headroom_bytes >= in_flight,
         "pfc.headroom_bytes must cover 2 * propagation * capacity + MTU (" +
             std::to_string(static_cast<std::int64_t>(in_flight)) + " B)");
  }
  need(c.marking.k_min_bytes > 0, "marking.k_min_bytes must be > 0");
  need(c.marking.k_min_bytes <= c.marking.k_max_bytes,
       "marking.k_min_bytes must be <= marking.k_max_bytes");
  need(c.marking.p_max >= 0 && c.marking.p_max <= 1, "marking.p_max must be in [0, 1]");
  need(c.marking.kind == MarkingFor(c.cc),
       "marking.kind '" + std::string(MarkingName(c.marking.kind)) +
           "' contradicts cc.mechanism '" + std::string(CcName(c.cc)) + "'");

  const DcqcnParams& d = c.dcqcn;
  need(d.g > 0 && d.g < 1, "cc.dcqcn.g must be in (0, 1)");
  need(d.alpha_init >= 0 && d.alpha_init <= 1, "cc.dcqcn.alpha_init must be in [0, 1]");
  need(d.alpha_timer > SimTime::Zero(), "cc.dcqcn.alpha_timer_ns must be > 0");
  need(d.rate_timer > SimTime::Zero(), "cc.dcqcn.rate_timer_ns must be > 0");
  need(d.byte_counter_bytes > 0, "cc.dcqcn.byte_counter_bytes must be > 0");
  need(d.fast_recovery_steps >= 0, "cc.dcqcn.fast_recovery_steps must be >= 0");
  need(d.rai >= 0 && d.rhai >= 0, "cc.dcqcn increase steps must be >= 0");
  need(d.min_rate > 0 && d.min_rate <= c.line_rate(),
       "cc.dcqcn.min_rate_bytes_per_s must be in (0, line rate]");
  need(d.line_rate == c.line_rate(), "cc.dcqcn line rate must equal link capacity");
  need(c.np.min_gap >= SimTime::Zero(), "cc.np.min_gap_ns must be >= 0");
  need(c.enp.min_gap >= SimTime::Zero(), "cc.enp.min_gap_ns must be >= 0");
  need(c.erp.quiet >= SimTime::Zero(), "cc.erp.quiet_ns must be >= 0");
  need(c.erp.increase_interval > SimTime::Zero(), "cc.erp.increase_interval_ns must be > 0");
  need(c.erp.beta > 0, "cc.erp.beta must be > 0");
  need(c.erp.max_jitter >= SimTime::Zero(), "cc.erp.max_jitter_ns must be >= 0");
  need(c.erp.line_rate == c.line_rate(), "cc.erp line rate must equal link capacity");

  need(c.bin_width > SimTime::Zero(), "metrics.bin_ns must be > 0");
  need(!c.run_bound || *c.run_bound > SimTime::Zero(), "run.until_ns must be > 0");
  need(c.hop_latency >= SimTime::Zero(), "run.hop_latency_ns must be >= 0");

  std::int64_t hosts = 1;
  for (int i = 0; i < c.stages && i < 20; ++i) hosts *= std::max(c.half_radix, 1);
  std::set<FlowId> ids;
  for (std::size_t i = 0; i < c.flows.size(); ++i) {
    const FlowSpec& f = c.flows[i];
    const std::string p = "flows[" + std::to_string(i) + "]";
    need(ids.insert(f.id).second, p + ".id " + std::to_string(f.id) + " is duplicated");
    need(f.src >= 0 && f.src < hosts,
         p + ".src " + std::to_string(f.src) + " outside [0, " + std::to_string(hosts) + ")");
    need(f.dst >= 0 && f.dst < hosts,
         p + ".dst " + std::to_string(f.dst) + " outside [0, " + std::to_string(hosts) + ")");
    need(f.src != f.dst, p + " sends to itself");
    need(f.start >= SimTime::Zero(), p + ".start_ns must be >= 0");
    need(f.start < f.stop, p + ".start_ns must be < stop_ns");
    need(f.demand_bytes_per_s > 0 &&
             f.demand_bytes_per_s <= c.link.capacity_bytes_per_s,
         p + ".demand_bytes_per_s must be in (0, line rate]");
    need(f.mode == c.traffic, p + " traffic mode differs from traffic.mode");
  }
  return v;
}

ScenarioConfig ScenarioFromJson(const json& doc) {
  ScenarioConfig c;
  ObjectReader top(doc, "");
  c.name = top.String("name", c.name);
  c.seed = top.UInt("seed", c.seed);

  ObjectReader topo = top.Child("topology");
  c.half_radix = static_cast<int>(topo.Int("half_radix", c.half_radix));
  c.stages = static_cast<int>(topo.Int("stages", c.stages));
  topo.Finish();

  ObjectReader link = top.Child("link");
  const std::int64_t bps = link.Int("capacity_bps", c.link.capacity_bytes_per_s * 8);
  if (bps % 8 != 0) Fail("link.capacity_bps: must be a whole number of bytes/s");
  c.link.capacity_bytes_per_s = bps / 8;
  c.link.propagation = link.Ns("propagation_ns", c.link.propagation);
  link.Finish();

  ObjectReader buf = top.Child("buffer");
  c.buffer.input_limit_bytes = buf.Int("input_limit_bytes", c.buffer.input_limit_bytes);
  c.buffer.pool_bytes = buf.Int("pool_bytes", c.buffer.pool_bytes);
  c.buffer.mtu_bytes = static_cast<std::int32_t>(buf.Int("mtu_bytes", c.buffer.mtu_bytes));
  buf.Finish();

  ObjectReader pfc = top.Child("pfc");
  c.pfc.enabled = pfc.Bool("enabled", c.pfc.enabled);
  c.pfc.xoff_bytes = pfc.Int("xoff_bytes", c.pfc.xoff_bytes);
  c.pfc.xon_bytes = pfc.Int("xon_bytes", c.pfc.xon_bytes);
  c.pfc.headroom_bytes = pfc.Int("headroom_bytes", c.pfc.headroom_bytes);
  pfc.Finish();

  ObjectReader cc = top.Child("cc");
  const std::string mech = cc.String("mechanism", std::string(CcName(c.cc)));
  auto parsed_cc = ParseCc(mech);
  if (!parsed_cc) Fail("cc.mechanism: unknown mechanism '" + mech + "'");
  c.SetCc(*parsed_cc);

  ObjectReader mark = top.Child("marking");
  if (mark.Has("kind")) {
    const std::string kind = mark.String("kind", "");
    auto k = ParseMarking(kind);
    if (!k) Fail("marking.kind: unknown kind '" + kind + "'");
    c.marking.kind = *k;  // checked against cc during validation
  }
  c.marking.k_min_bytes = mark.Int("k_min_bytes", c.marking.k_min_bytes);
  c.marking.k_max_bytes = mark.Int("k_max_bytes", c.marking.k_max_bytes);
  c.marking.p_max = mark.Double("p_max", c.marking.p_max);
  mark.Finish();

  c.dcqcn.line_rate = c.line_rate();
  c.erp.line_rate = c.line_rate();
  ObjectReader dq = cc.Child("dcqcn");
  c.dcqcn.g = dq.Double("g", c.dcqcn.g);
  c.dcqcn.alpha_init = dq.Double("alpha_init", c.dcqcn.alpha_init);
  c.dcqcn.alpha_timer = dq.Ns("alpha_timer_ns", c.dcqcn.alpha_timer);
  c.dcqcn.rate_timer = dq.Ns("rate_timer_ns", c.dcqcn.rate_timer);
  c.dcqcn.byte_counter_bytes = dq.Int("byte_counter_bytes", c.dcqcn.byte_counter_bytes);
  c.dcqcn.fast_recovery_steps =
      static_cast<int>(dq.Int("fast_recovery_steps", c.dcqcn.fast_recovery_steps));
  c.dcqcn.rai = dq.Double("rai_bytes_per_s", c.dcqcn.rai);
  c.dcqcn.rhai = dq.Double("rhai_bytes_per_s", c.dcqcn.rhai);
  c.dcqcn.min_rate = dq.Double("min_rate_bytes_per_s", c.dcqcn.min_rate);
  dq.Finish();
  ObjectReader np = cc.Child("np");
  c.np.min_gap = np.Ns("min_gap_ns", c.np.min_gap);
  np.Finish();
  ObjectReader enp = cc.Child("enp");
  c.enp.min_gap = enp.Ns("min_gap_ns", c.enp.min_gap);
  enp.Finish();
  ObjectReader erp = cc.Child("erp");
  c.erp.quiet = erp.Ns("quiet_ns", c.erp.quiet);
  c.erp.increase_interval = erp.Ns("increase_interval_ns", c.erp.increase_interval);
  c.erp.beta = erp.Double("beta", c.erp.beta);
  c.erp.max_jitter = erp.Ns("max_jitter_ns", c.erp.max_jitter);
  erp.Finish();
  cc.Finish();

  ObjectReader traffic = top.Child("traffic");
  const std::string mode = traffic.String("mode", "open_loop");
  if (mode == "open_loop") {
    c.traffic = TrafficMode::kOpenLoop;
  } else if (mode == "closed_loop") {
    c.traffic = TrafficMode::kClosedLoop;
  } else {
    Fail("traffic.mode: expected open_loop or closed_loop, got '" + mode + "'");
  }
  traffic.Finish();

  if (const json* flows = top.Get("flows")) {
    if (!flows->is_array()) Fail("flows: expected an array");
    for (std::size_t i = 0; i < flows->size(); ++i) {
      ObjectReader f((*flows)[i], "flows[" + std::to_string(i) + "]");
      FlowSpec spec;
      spec.src = static_cast<HostId>(f.Int("src", 0));
      spec.id = static_cast<FlowId>(f.Int("id", spec.src));
      spec.dst = static_cast<HostId>(f.Int("dst", 0));
      spec.demand_bytes_per_s = f.Int("demand_bytes_per_s", c.link.capacity_bytes_per_s);
      spec.start = f.Ns("start_ns", SimTime::Zero());
      spec.stop = f.Ns("stop_ns", SimTime::Zero());
      spec.mode = c.traffic;
      f.Finish();
      c.flows.push_back(spec);
    }
  }

  ObjectReader metrics = top.Child("metrics");
  c.bin_width = metrics.Ns("bin_ns", c.bin_width);
  metrics.Finish();

  ObjectReader run = top.Child("run");
  if (const json* until = run.Get("until_ns"); until && !until->is_null()) {
    if (!until->is_number_integer()) Fail("run.until_ns: expected integer ns or null");
    c.run_bound = SimTime::FromNs(until->get<std::int64_t>());
  }
  c.hop_latency = run.Ns("hop_latency_ns", c.hop_latency);
  c.audit = run.Bool("audit", c.audit);
  run.Finish();
  top.Finish();

  const std::vector<std::string> violations = ValidateScenario(c);
  if (!violations.empty()) {
    std::string msg = "invalid scenario:";
    for (const std::string& s : violations) msg += "\n  - " + s;
    throw Error(ErrorCode::kValidation, msg);
  }
  return c;
}

ScenarioConfig ParseScenarioText(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + upto, '\n');
    Fail("line " + std::to_string(line) + ": " + e.what());
  }
  // A run.json carries its scenario echo under "scenario".
  if (doc.is_object() && doc.contains("scenario") && doc.contains("engine")) {
    return ScenarioFromJson(doc["scenario"]);
  }
  return ScenarioFromJson(doc);
}

ScenarioConfig LoadScenario(const std::string& spec) {
  if (spec == "paper64") return Paper64Preset();
  std::ifstream in(spec, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read scenario file " + spec);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return ParseScenarioText(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), spec + ": " + e.what());
  }
}

json ScenarioToJson(const ScenarioConfig& c) {
  json flows = json::array();
  for (const FlowSpec& f : c.flows) {
    flows.push_back({{"id", f.id},
                     {"src", f.src},
                     {"dst", f.dst},
                     {"demand_bytes_per_s", f.demand_bytes_per_s},
                     {"start_ns", NsOf(f.start)},
                     {"stop_ns", NsOf(f.stop)}});
  }
  json doc = {
      {"name", c.name},
      {"seed", c.seed},
      {"topology", {{"half_radix", c.half_radix}, {"stages", c.stages}}},
      {"link",
       {{"capacity_bps", c.link.capacity_bytes_per_s * 8},
        {"propagation_ns", NsOf(c.link.propagation)}}},
      {"buffer",
       {{"input_limit_bytes", c.buffer.input_limit_bytes},
        {"pool_bytes", c.buffer.pool_bytes},
        {"mtu_bytes", c.buffer.mtu_bytes}}},
      {"pfc",
       {{"enabled", c.pfc.enabled},
        {"xoff_bytes", c.pfc.xoff_bytes},
        {"xon_bytes", c.pfc.xon_bytes},
        {"headroom_bytes", c.pfc.headroom_bytes}}},
      {"marking",
       {{"kind", MarkingName(c.marking.kind)},
        {"k_min_bytes", c.marking.k_min_bytes},
        {"k_max_bytes", c.marking.k_max_bytes},
        {"p_max", c.marking.p_max}}},
      {"cc",
       {{"mechanism", CcName(c.cc)},
        {"dcqcn",
         {{"g", c.dcqcn.g},
          {"alpha_init", c.dcqcn.alpha_init},
          {"alpha_timer_ns", NsOf(c.dcqcn.alpha_timer)},
          {"rate_timer_ns", NsOf(c.dcqcn.rate_timer)},
          {"byte_counter_bytes", c.dcqcn.byte_counter_bytes},
          {"fast_recovery_steps", c.dcqcn.fast_recovery_steps},
          {"rai_bytes_per_s", c.dcqcn.rai},
          {"rhai_bytes_per_s", c.dcqcn.rhai},
          {"min_rate_bytes_per_s", c.dcqcn.min_rate}}},
        {"np", {{"min_gap_ns", NsOf(c.np.min_gap)}}},
        {"enp", {{"min_gap_ns", NsOf(c.enp.min_gap)}}},
        {"erp",
         {{"quiet_ns", NsOf(c.erp.quiet)},
          {"increase_interval_ns", NsOf(c.erp.increase_interval)},
          {"beta", c.erp.beta},
          {"max_jitter_ns", NsOf(c.erp.max_jitter)}}}}},
      {"traffic",
       {{"mode", c.traffic == TrafficMode::kOpenLoop ? "open_loop" : "closed_loop"}}},
      {"flows", flows},
      {"metrics", {{"bin_ns", NsOf(c.bin_width)}}},
      {"run",
       {{"until_ns", c.run_bound ? json(NsOf(*c.run_bound)) : json()},
        {"hop_latency_ns", NsOf(c.hop_latency)},
        {"audit", c.audit}}},
  };
  return doc;
}

}  // namespace lsim
