#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "osdf/topology.hpp"

namespace osdf {

namespace detail {

inline PortRef parse_port_ref(const std::string& s) {
  auto colon = s.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == s.size())
    throw ParseError("bad port reference '" + s + "' (want dev:port)");
  int port = 0;
  for (size_t i = colon + 1; i < s.size(); ++i) {
    char c = s[i];
    if (c < '0' || c > '9') throw ParseError("bad port number in '" + s + "'");
    port = port * 10 + (c - '0');
    if (port > 1 << 20) throw ParseError("bad port number in '" + s + "'");
  }
  return PortRef{s.substr(0, colon), port};
}

inline std::pair<int, int> line_col(const std::string& text, size_t byte) {
  int line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace detail

inline Topology parse_topology(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError("topology syntax error at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + e.what());
  }
  try {
    std::vector<Device> devices;
    for (const auto& d : doc.value("devices", nlohmann::json::array())) {
      Device dev;
      dev.id = d.at("id").get<std::string>();
      if (d.contains("region")) dev.region = d.at("region").get<std::string>();
      dev.port_count = d.at("ports").get<int>();
      if (dev.port_count < 1)
        throw ValidationError("device '" + dev.id + "' needs a positive port count");
      devices.push_back(std::move(dev));
    }
    std::vector<Link> links;
    for (const auto& l : doc.value("links", nlohmann::json::array()))
      links.push_back({detail::parse_port_ref(l.at("a").get<std::string>()),
                       detail::parse_port_ref(l.at("b").get<std::string>())});
    std::vector<Host> hosts;
    for (const auto& h : doc.value("hosts", nlohmann::json::array()))
      hosts.push_back({h.at("name").get<std::string>(),
                       parse_mac(h.at("mac").get<std::string>()),
                       parse_ipv4(h.at("ip").get<std::string>()),
                       detail::parse_port_ref(h.at("attach").get<std::string>())});
    std::vector<Region> regions;
    for (const auto& r : doc.value("regions", nlohmann::json::array())) {
      Region reg;
      reg.name = r.at("name").get<std::string>();
      for (const auto& p : r.value("prefixes", nlohmann::json::array()))
        reg.prefixes.push_back(parse_cidr(p.get<std::string>()));
      for (const auto& d : r.value("devices", nlohmann::json::array()))
        reg.devices.push_back(d.get<std::string>());
      regions.push_back(std::move(reg));
    }
    return Topology(std::move(devices), std::move(links), std::move(hosts), std::move(regions));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("topology document error: ") + e.what());
  }
}

/// Canonical form: every list sorted lexicographically, link endpoints ordered.
inline std::string format_topology(const Topology& t) {
  using json = nlohmann::ordered_json;
  json doc;
  std::vector<Device> devices = t.devices();
  std::sort(devices.begin(), devices.end(),
            [](const Device& a, const Device& b) { return a.id < b.id; });
  doc["devices"] = json::array();
  for (const Device& d : devices) {
    json j;
    j["id"] = d.id;
    if (d.region) j["region"] = *d.region;
    j["ports"] = d.port_count;
    doc["devices"].push_back(std::move(j));
  }
  std::vector<std::pair<std::string, std::string>> links;
  for (const Link& l : t.links()) {
    std::string a = l.a.to_string(), b = l.b.to_string();
    if (b < a) std::swap(a, b);
    links.emplace_back(std::move(a), std::move(b));
  }
  std::sort(links.begin(), links.end());
  doc["links"] = json::array();
  for (const auto& [a, b] : links) doc["links"].push_back({{"a", a}, {"b", b}});
  std::vector<Host> hosts = t.hosts();
  std::sort(hosts.begin(), hosts.end(),
            [](const Host& a, const Host& b) { return a.name < b.name; });
  doc["hosts"] = json::array();
  for (const Host& h : hosts)
    doc["hosts"].push_back({{"name", h.name},
                            {"mac", format_mac(h.mac)},
                            {"ip", format_ipv4(h.ip)},
                            {"attach", h.attach.to_string()}});
  std::vector<Region> regions = t.regions();
  std::sort(regions.begin(), regions.end(),
            [](const Region& a, const Region& b) { return a.name < b.name; });
  doc["regions"] = json::array();
  for (Region& r : regions) {
    std::vector<std::string> prefixes;
    for (const Cidr& p : r.prefixes) prefixes.push_back(format_cidr(p));
    std::sort(prefixes.begin(), prefixes.end());
    std::sort(r.devices.begin(), r.devices.end());
    doc["regions"].push_back({{"name", r.name}, {"prefixes", prefixes}, {"devices", r.devices}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace osdf
