#pragma once

#include <deque>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "osdf/policy.hpp"
#include "osdf/topology.hpp"

namespace osdf {

/// A device-level path. Boundary ports (first in_port, last out_port) are the
/// host attachment ports once the controller binds them; path algorithms leave
/// them 0.
struct Path {
  struct Hop {
    DeviceId device;
    int in_port = 0;
    int out_port = 0;
    bool operator==(const Hop&) const = default;
  };

  std::vector<Hop> hops;
  bool concatenated = false;  // true iff waypoint joining repeated a device
  std::string algorithm;

  std::vector<DeviceId> devices() const {
    std::vector<DeviceId> out;
    for (const Hop& h : hops) out.push_back(h.device);
    return out;
  }

  bool has_repeats() const {
    std::set<DeviceId> seen;
    for (const Hop& h : hops)
      if (!seen.insert(h.device).second) return true;
    return false;
  }
};

namespace detail {

/// Minimal hop-count path that never enters a device in `banned`; among
/// equals, the lexicographically smallest device sequence.
inline Path shortest_path_avoiding(const Topology& t, const DeviceId& src, const DeviceId& dst,
                                   const std::set<DeviceId>& banned) {
  t.device(src);
  t.device(dst);
  if (src == dst) {
    Path p;
    p.hops.push_back({src, 0, 0});
    p.algorithm = "shortest";
    return p;
  }
  // BFS from dst, then walk downhill from src picking the smallest id
  std::map<DeviceId, int> dist{{dst, 0}};
  std::deque<DeviceId> q{dst};
  while (!q.empty()) {
    DeviceId cur = q.front();
    q.pop_front();
    for (const auto& n : t.neighbors(cur)) {
      if (banned.count(n.peer) && n.peer != src) continue;
      if (dist.emplace(n.peer, dist[cur] + 1).second) q.push_back(n.peer);
    }
  }
  auto it = dist.find(src);
  if (it == dist.end()) throw NoPathError("no path from '" + src + "' to '" + dst + "'");
  Path p;
  p.algorithm = "shortest";
  DeviceId cur = src;
  p.hops.push_back({cur, 0, 0});
  while (cur != dst) {
    int d = dist[cur];
    const DeviceId* next = nullptr;
    for (const auto& n : t.neighbors(cur)) {  // sorted by peer id
      auto dn = dist.find(n.peer);
      if (dn != dist.end() && dn->second == d - 1) {
        next = &n.peer;
        break;
      }
    }
    auto ports = t.link_ports(cur, *next);
    p.hops.back().out_port = ports->first;
    p.hops.push_back({*next, ports->second, 0});
    cur = *next;
  }
  return p;
}

}  // namespace detail

/// Minimal hop-count path; among equals, the lexicographically smallest
/// device sequence.
inline Path shortest_path(const Topology& t, const DeviceId& src, const DeviceId& dst) {
  return detail::shortest_path_avoiding(t, src, dst, {});
}

/// Concatenation of shortest segments src -> w1 -> ... -> wk -> dst. Each
/// segment steers around devices earlier segments already used when such a
/// route exists; otherwise the plain shortest segment is taken and the result
/// is flagged as a repeating concatenation.
inline Path path_via(const Topology& t, const DeviceId& src, const DeviceId& dst,
                     const std::vector<DeviceId>& waypoints) {
  std::vector<DeviceId> stops{src};
  stops.insert(stops.end(), waypoints.begin(), waypoints.end());
  stops.push_back(dst);
  Path out;
  out.algorithm = "via";
  std::set<DeviceId> used;
  for (size_t i = 0; i + 1 < stops.size(); ++i) {
    Path seg;
    try {
      seg = detail::shortest_path_avoiding(t, stops[i], stops[i + 1], used);
    } catch (const NoPathError&) {
      seg = shortest_path(t, stops[i], stops[i + 1]);
    }
    for (const Path::Hop& h : seg.hops) used.insert(h.device);
    if (out.hops.empty()) {
      out.hops = seg.hops;
    } else if (seg.hops.size() > 1) {
      out.hops.back().out_port = seg.hops.front().out_port;
      out.hops.insert(out.hops.end(), seg.hops.begin() + 1, seg.hops.end());
    }
  }
  out.concatenated = out.has_repeats();
  return out;
}

using PathAlgorithm =
    std::function<Path(const Topology&, const DeviceId&, const DeviceId&)>;

/// Named path algorithms; "shortest" is always present.
class AlgorithmRegistry {
 public:
  AlgorithmRegistry() {
    add("shortest", [](const Topology& t, const DeviceId& s, const DeviceId& d) {
      return shortest_path(t, s, d);
    });
  }

  void add(const std::string& name, PathAlgorithm fn) { algorithms_[name] = std::move(fn); }

  const PathAlgorithm& get(const std::string& name) const {
    auto it = algorithms_.find(name);
    if (it == algorithms_.end())
      throw ValidationError("unknown path algorithm '" + name + "'");
    return it->second;
  }

 private:
  std::map<std::string, PathAlgorithm> algorithms_;
};

/// Waypoint policies dispatch to path_via; everything else runs the named
/// registered algorithm.
inline Path select_path(const AlgorithmRegistry& reg, const Topology& t, const Policy& policy,
                        const DeviceId& src, const DeviceId& dst,
                        const std::string& algorithm = "shortest") {
  if (!policy.via.empty()) {
    Path p = path_via(t, src, dst, policy.via);
    return p;
  }
  Path p = reg.get(algorithm)(t, src, dst);
  p.algorithm = algorithm;
  return p;
}

}  // namespace osdf
