#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "osdf/profiles.hpp"
#include "osdf/topology.hpp"

namespace osdf {

enum class NetworkFunction { IntraSiteRoute, InterSiteRoute };

constexpr int kDefaultPolicyPriority = 10;
constexpr int kMinPolicyPriority = 2;  // priority 1 is reserved for drop rules
constexpr int kMaxPolicyPriority = 65535;

/// One application-based network policy. For IntraSiteRoute `regions` is the
/// (sorted) region set; for InterSiteRoute it is [src, dst].
struct Policy {
  int id = 0;  // 0 = unassigned
  std::string name;
  NetworkFunction function = NetworkFunction::InterSiteRoute;
  std::string profile;
  std::vector<std::string> regions;
  bool bidirectional = true;  // InterSiteRoute only
  int priority = kDefaultPolicyPriority;
  std::vector<DeviceId> via;
  bool enabled = true;

  bool operator==(const Policy&) const = default;
};

namespace detail {

inline std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) throw ParseError("empty identifier in list '" + s + "'");
    out.push_back(item);
  }
  if (out.empty()) throw ParseError("empty identifier list");
  return out;
}

}  // namespace detail

/// Parse one policy line:
///   intra <profile> region <r1,r2,...> [priority <n>] [via <d1,d2,...>]
///   inter <profile> from <r> to <r> [priority <n>] [via <d1,...>] [oneway]
inline Policy parse_policy(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> toks;
  for (std::string t; in >> t;) toks.push_back(t);
  size_t i = 0;
  auto need = [&](const char* what) -> std::string {
    if (i >= toks.size())
      throw ParseError(std::string("policy line ends at token ") + std::to_string(i) +
                       ", expected " + what);
    return toks[i++];
  };
  Policy p;
  std::string fn = detail::to_lower(need("function keyword"));
  if (fn == "intra") {
    p.function = NetworkFunction::IntraSiteRoute;
    p.profile = need("profile name");
    if (detail::to_lower(need("'region'")) != "region")
      throw ParseError("expected 'region' at token " + std::to_string(i - 1));
    p.regions = detail::split_commas(need("region list"));
    std::sort(p.regions.begin(), p.regions.end());
    p.regions.erase(std::unique(p.regions.begin(), p.regions.end()), p.regions.end());
  } else if (fn == "inter") {
    p.function = NetworkFunction::InterSiteRoute;
    p.profile = need("profile name");
    if (detail::to_lower(need("'from'")) != "from")
      throw ParseError("expected 'from' at token " + std::to_string(i - 1));
    std::string src = need("source region");
    if (detail::to_lower(need("'to'")) != "to")
      throw ParseError("expected 'to' at token " + std::to_string(i - 1));
    std::string dst = need("destination region");
    if (src == dst)
      throw ParseError("source and destination regions are both '" + src + "'");
    p.regions = {src, dst};
  } else {
    throw ParseError("unknown function keyword '" + fn + "'");
  }
  while (i < toks.size()) {
    std::string kw = detail::to_lower(toks[i++]);
    if (kw == "priority") {
      std::string v = need("priority value");
      long prio = 0;
      for (char c : v) {
        if (c < '0' || c > '9') throw ParseError("bad priority '" + v + "'");
        prio = prio * 10 + (c - '0');
        if (prio > kMaxPolicyPriority) break;
      }
      if (prio < kMinPolicyPriority || prio > kMaxPolicyPriority)
        throw ParseError("priority " + v + " out of range [" +
                         std::to_string(kMinPolicyPriority) + ", " +
                         std::to_string(kMaxPolicyPriority) + "]");
      p.priority = static_cast<int>(prio);
    } else if (kw == "via") {
      p.via = detail::split_commas(need("device list"));
    } else if (kw == "oneway") {
      if (p.function != NetworkFunction::InterSiteRoute)
        throw ParseError("'oneway' applies only to inter policies");
      p.bidirectional = false;
    } else {
      throw ParseError("unexpected token '" + kw + "' at position " + std::to_string(i - 1));
    }
  }
  return p;
}

inline std::string format_policy(const Policy& p) {
  std::string out;
  auto join = [](const std::vector<std::string>& xs) {
    std::string s;
    for (const auto& x : xs) {
      if (!s.empty()) s += ',';
      s += x;
    }
    return s;
  };
  if (p.function == NetworkFunction::IntraSiteRoute) {
    out = "intra " + p.profile + " region " + join(p.regions);
  } else {
    out = "inter " + p.profile + " from " + p.regions.at(0) + " to " + p.regions.at(1);
  }
  out += " priority " + std::to_string(p.priority);
  if (!p.via.empty()) out += " via " + join(p.via);
  if (p.function == NetworkFunction::InterSiteRoute && !p.bidirectional) out += " oneway";
  return out;
}

/// Runtime collection of active policies. Iteration and match order is
/// descending priority, ties broken by ascending id (earlier insert wins).
class PolicyStore {
 public:
  int add(Policy p, const Topology& t, const ProfileRegistry& profiles) {
    for (const std::string& r : p.regions)
      if (!t.find_region(r))
        throw ValidationError("policy references unknown region '" + r + "'");
    for (const DeviceId& d : p.via)
      if (!t.find_device(d))
        throw ValidationError("policy references unknown device '" + d + "'");
    if (!profiles.find(p.profile))
      throw ValidationError("policy references unknown profile '" + p.profile + "'");
    if (p.priority < kMinPolicyPriority || p.priority > kMaxPolicyPriority)
      throw ValidationError("policy priority " + std::to_string(p.priority) + " out of range");
    p.id = next_id_++;
    int id = p.id;
    policies_.emplace(id, std::move(p));
    return id;
  }

  Policy remove(int id) {
    auto it = policies_.find(id);
    if (it == policies_.end())
      throw ValidationError("unknown policy id " + std::to_string(id));
    Policy p = std::move(it->second);
    policies_.erase(it);
    return p;
  }

  const Policy* find(int id) const {
    auto it = policies_.find(id);
    return it == policies_.end() ? nullptr : &it->second;
  }

  size_t size() const { return policies_.size(); }

  std::vector<Policy> list() const {
    std::vector<Policy> out;
    for (const auto& [id, p] : policies_) out.push_back(p);
    sort_policies(out);
    return out;
  }

  std::vector<Policy> match(NetworkFunction fn, const std::string& src_region,
                            const std::string& dst_region,
                            const std::string& profile_name) const {
    std::vector<Policy> out;
    for (const auto& [id, p] : policies_) {
      if (!p.enabled || p.function != fn || p.profile != profile_name) continue;
      if (fn == NetworkFunction::IntraSiteRoute) {
        if (src_region != dst_region) continue;
        if (!std::count(p.regions.begin(), p.regions.end(), src_region)) continue;
      } else {
        bool fwd = p.regions.at(0) == src_region && p.regions.at(1) == dst_region;
        bool rev = p.bidirectional && p.regions.at(0) == dst_region &&
                   p.regions.at(1) == src_region;
        if (!fwd && !rev) continue;
      }
      out.push_back(p);
    }
    sort_policies(out);
    return out;
  }

 private:
  static void sort_policies(std::vector<Policy>& ps) {
    std::sort(ps.begin(), ps.end(), [](const Policy& a, const Policy& b) {
      if (a.priority != b.priority) return a.priority > b.priority;
      return a.id < b.id;
    });
  }

  std::map<int, Policy> policies_;
  int next_id_ = 1;  // ids are never reused
};

}  // namespace osdf
