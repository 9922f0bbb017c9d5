#include "stlnav/repair/repair.hpp"

#include <httplib.h>

#include <json.hpp>

#include "stlnav/errors.hpp"

namespace stlnav::repair {

using encode::RepairMode;
using nlohmann::json;

DecisionLog advise_remote(const RemoteAdvisorConfig& cfg, const std::optional<std::string>& nl,
                          const std::string& stl_text, const std::vector<AtomicEvent>& events) {
  json req;
  req["nl_instruction"] = nl ? json(*nl) : json(nullptr);
  req["stl"] = stl_text;
  req["events"] = json::array();
  for (const auto& ev : events) {
    req["events"].push_back({{"node", ev.node},
                             {"predicate", ev.predicate},
                             {"support",
                              {ev.support.empty() ? 0 : ev.support.front(),
                               ev.support.empty() ? 0 : ev.support.back()}},
                             {"operator", parent_op_name(ev.op)},
                             {"role", ev.role}});
  }

  httplib::Client client(cfg.endpoint);
  client.set_connection_timeout(std::chrono::duration<double>(cfg.timeout_s));
  client.set_read_timeout(std::chrono::duration<double>(cfg.timeout_s));
  auto res = client.Post("/repair-mode", req.dump(), "application/json");
  if (!res) throw AdvisorTransport(httplib::to_string(res.error()));
  if (res->status != 200)
    throw AdvisorTransport("HTTP status " + std::to_string(res->status));

  json resp;
  try {
    resp = json::parse(res->body);
  } catch (const json::exception& e) {
    throw MalformedResponse(e.what());
  }
  if (!resp.contains("decisions") || !resp["decisions"].is_array())
    throw MalformedResponse("missing 'decisions' array");

  std::set<int> known;
  for (const auto& ev : events) known.insert(ev.node);

  DecisionLog log;
  for (const auto& d : resp["decisions"]) {
    if (!d.contains("node") || !d.contains("mode") || !d["node"].is_number_integer() ||
        !d["mode"].is_string())
      throw MalformedResponse("decision entries need integer 'node' and string 'mode'");
    int node = d["node"].get<int>();
    if (!known.count(node))
      throw MalformedResponse("decision for unknown node " + std::to_string(node));
    std::string mode = d["mode"].get<std::string>();
    RepairMode m;
    if (mode == "predicate") m = RepairMode::PredicateRelax;
    else if (mode == "temporal") m = RepairMode::TemporalRelax;
    else if (mode == "fixed") m = RepairMode::Fixed;
    else throw MalformedResponse("unknown repair mode '" + mode + "'");
    log[node] = {m, "remote"};
  }
  // Events the advisor left undecided stay Fixed.
  for (const auto& ev : events)
    if (!log.count(ev.node)) log[ev.node] = {RepairMode::Fixed, "default-fixed"};
  return log;
}

Advisor make_remote_advisor(const RemoteAdvisorConfig& cfg, const std::optional<std::string>& nl,
                            const std::string& stl_text) {
  return [cfg, nl, stl_text](const std::vector<AtomicEvent>& events) -> DecisionLog {
    try {
      return advise_remote(cfg, nl, stl_text, events);
    } catch (const Error&) {
      if (cfg.fallback_to_rule) return advise_rule_based(events);
      throw;
    }
  };
}

}  // namespace stlnav::repair
